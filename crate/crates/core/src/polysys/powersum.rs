use super::{MultiPoly, VarSpace};
use crate::error::{Error, Result};

/// Coefficients `r_1, ..., r_{de}` of `f_1^d + ... + f_k^d - k x^{de}` for
/// monic forms `f_i = x^e + c[i][1] x^{e-1} y + ... + c[i][e] y^e`.
///
/// `r_l` multiplies `x^{de-l} y^l` and is weighted-homogeneous of weight `l`.
/// Requires a prime `p > k*d` so the leading coefficient `k` and the
/// binomials involved do not vanish.
pub fn expand_monic_powersum(k: usize, d: usize, e: usize, p: u64) -> Result<Vec<MultiPoly>> {
    if k == 0 || d == 0 || e == 0 {
        return Err(Error::Precondition("k, d and e must be positive".into()));
    }
    super::check_prime(p)?;
    let bound = (k * d) as u64;
    if p <= bound {
        return Err(Error::PrimeTooSmall { prime: p, bound });
    }
    expand_monic_powersum_unchecked(k, d, e, p)
}

/// As [`expand_monic_powersum`] without the `p > k*d` guard.
pub fn expand_monic_powersum_unchecked(k: usize, d: usize, e: usize, p: u64) -> Result<Vec<MultiPoly>> {
    let space = VarSpace::new(k, e)?;
    let zero = MultiPoly::zero(space, p);
    let mut sum = vec![zero.clone(); d * e + 1];
    for block in 1..=k {
        // f_i as a polynomial in y (x dehomogenized): coefficient of y^j.
        let form: Vec<MultiPoly> = (0..=e)
            .map(|j| if j == 0 { MultiPoly::constant(space, p, 1) } else { MultiPoly::var(space, p, block, j) })
            .collect();
        let mut power = vec![MultiPoly::constant(space, p, 1)];
        for _ in 0..d {
            power = convolve(&power, &form)?;
        }
        for (acc, term) in sum.iter_mut().zip(&power) {
            *acc = acc.add(term)?;
        }
    }
    Ok(sum.split_off(1))
}

fn convolve(a: &[MultiPoly], b: &[MultiPoly]) -> Result<Vec<MultiPoly>> {
    let template = &a[0];
    let mut out = vec![MultiPoly::zero(template.space(), template.prime()); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y)?)?;
        }
    }
    Ok(out)
}
