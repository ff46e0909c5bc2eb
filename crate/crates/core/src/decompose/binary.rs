use serde::{Deserialize, Serialize};

use super::{certify, newton_power_to_elementary, poly_roots, Certificate, Family, Summand, Target};
use crate::error::{Error, Result};
use crate::json::c64_vec;
use crate::C64;

/// `coeffs[i]` multiplies `x^{d-i} y^i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinaryForm {
    #[serde(with = "c64_vec")]
    pub coeffs: Vec<C64>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Dimension("a binary form needs at least one coefficient".into()));
        }
        Ok(BinaryForm { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `sum_i (x + a_i y)^d`.
    pub fn power_sum(roots: &[C64], d: usize) -> BinaryForm {
        let mut coeffs = vec![C64::new(0.0, 0.0); d + 1];
        for &a in roots {
            for (acc, c) in coeffs.iter_mut().zip(linear_power(a, d)) {
                *acc += c;
            }
        }
        BinaryForm { coeffs }
    }
}

pub(crate) fn binomial(d: usize, m: usize) -> f64 {
    (0..m).fold(1.0, |acc, i| acc * (d - i) as f64 / (i + 1) as f64)
}

/// Coefficients of `(x + a y)^d`.
pub(crate) fn linear_power(a: C64, d: usize) -> Vec<C64> {
    let mut power = C64::new(1.0, 0.0);
    (0..=d)
        .map(|m| {
            let c = power * binomial(d, m);
            power *= a;
            c
        })
        .collect()
}

/// Writes `q` with `h(q) = d` as `sum_{i=1}^d (x + a_i y)^d`.
///
/// The power sums of the `a_i` are `q_m / binom(d, m)`; Newton's identities
/// give their elementary symmetric functions, whose polynomial has the
/// `a_i` as roots.
pub fn waring_monic_binary(q: &BinaryForm, tol: f64) -> Result<Certificate> {
    let d = q.degree();
    if d == 0 {
        return Err(Error::Precondition("degree must be at least one".into()));
    }
    let lead = q.coeffs[0];
    if (lead - C64::new(d as f64, 0.0)).norm() > tol * d as f64 {
        return Err(Error::NotInDH { found: format!("{lead}"), expected: d });
    }
    let power_sums: Vec<C64> = (1..=d).map(|m| q.coeffs[m] / binomial(d, m)).collect();
    let elementary = newton_power_to_elementary(&power_sums)?;
    let mut monic = vec![C64::new(1.0, 0.0)];
    monic.extend(elementary.iter().enumerate().map(|(i, e)| if i % 2 == 0 { -e } else { *e }));
    let roots = poly_roots(&monic)?;
    let summands = roots.into_iter().map(|a| Summand::Linear { a }).collect();
    certify(Family::Binary, summands, &Target::Binary(q.clone()), tol)
}
