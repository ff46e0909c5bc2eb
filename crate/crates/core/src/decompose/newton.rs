use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Elementary symmetric functions `e_1..e_d` from power sums `p_1..p_d`
/// through Newton's identities
/// `m e_m = sum_{i=1}^m (-1)^{i-1} e_{m-i} p_i`.
///
/// Works over any field in which `1, ..., d` are invertible.
pub fn newton_power_to_elementary<S: Scalar>(power_sums: &[S]) -> Result<Vec<S>> {
    if power_sums.is_empty() {
        return Err(Error::Precondition("need at least one power sum".into()));
    }
    let mut e = vec![S::one()];
    for m in 1..=power_sums.len() {
        let mut acc = S::zero();
        for i in 1..=m {
            let term = e[m - i].clone() * power_sums[i - 1].clone();
            acc = if i % 2 == 1 { acc + term } else { acc - term };
        }
        let denom = S::from_i64(m as i64);
        if denom.is_zero() {
            return Err(Error::Precondition(format!("{m} is not invertible in the scalar field")));
        }
        e.push(acc / denom);
    }
    e.remove(0);
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp;
    use crate::{Rational, C64};
    use num_bigint::BigInt;
    use num_traits::Zero;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    #[test]
    fn examples() {
        assert_eq!(newton_power_to_elementary(&[q(0), q(2)]).unwrap(), vec![q(0), q(-1)]);
        assert!(newton_power_to_elementary(&vec![q(0); 6]).unwrap().iter().all(Zero::is_zero));
        assert_eq!(newton_power_to_elementary(&[q(5)]).unwrap(), vec![q(5)]);
        assert!(newton_power_to_elementary::<f64>(&[]).is_err());
    }

    #[test]
    fn roots_one_two_three() {
        // power sums of {1, 2, 3}: 6, 14, 36; elementary: 6, 11, 6
        let e = newton_power_to_elementary(&[q(6), q(14), q(36)]).unwrap();
        assert_eq!(e, vec![q(6), q(11), q(6)]);
        let c: Vec<C64> = [6.0, 14.0, 36.0].iter().map(|&x| C64::new(x, 0.0)).collect();
        let ec = newton_power_to_elementary(&c).unwrap();
        assert!((ec[1] - C64::new(11.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn characteristic_blocks_division() {
        type F3 = Fp<3>;
        let p = vec![F3::new(0); 3];
        assert!(newton_power_to_elementary(&p).is_err());
        assert!(newton_power_to_elementary(&p[..2]).is_ok());
    }
}
