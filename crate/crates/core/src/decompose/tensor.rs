//! `2x2x2` tensors under the translation action of `K^3`.
//!
//! A tensor is written by its slices `(a11 a12 | b11 b12 ; a21 a22 | b21 b22)`
//! and `h(t) = a11`. The monic rank-one tensors are
//! `p(a, b, c) = (1 a | c ac ; b ab | bc abc)`. The three one-parameter
//! subgroups add multiples of the first column, the first row and the first
//! slice to the second one; on `X_1` they translate `(a, b, c)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{certify, negligible, sample, Certificate, Family, Summand, Target};
use crate::error::{Error, Result};
use crate::json::{pair, JsonScalar};
use crate::linalg::rank;
use crate::{MatC, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tensor222 {
    pub a11: C64,
    pub a12: C64,
    pub a21: C64,
    pub a22: C64,
    pub b11: C64,
    pub b12: C64,
    pub b21: C64,
    pub b22: C64,
}

#[derive(Serialize, Deserialize)]
struct SliceJson {
    a: [[JsonScalar; 2]; 2],
    b: [[JsonScalar; 2]; 2],
}

impl Serialize for Tensor222 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let c = |z: C64| JsonScalar::Complex(pair(z));
        SliceJson {
            a: [[c(self.a11), c(self.a12)], [c(self.a21), c(self.a22)]],
            b: [[c(self.b11), c(self.b12)], [c(self.b21), c(self.b22)]],
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tensor222 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SliceJson::deserialize(d)?;
        let [[a11, a12], [a21, a22]] = j.a.map(|r| r.map(C64::from));
        let [[b11, b12], [b21, b22]] = j.b.map(|r| r.map(C64::from));
        Ok(Tensor222 { a11, a12, a21, a22, b11, b12, b21, b22 })
    }
}

impl Tensor222 {
    /// Entries in the order `a11 a12 a21 a22 b11 b12 b21 b22`.
    pub fn from_entries(e: [C64; 8]) -> Self {
        let [a11, a12, a21, a22, b11, b12, b21, b22] = e;
        Tensor222 { a11, a12, a21, a22, b11, b12, b21, b22 }
    }

    pub fn entries(&self) -> [C64; 8] {
        [self.a11, self.a12, self.a21, self.a22, self.b11, self.b12, self.b21, self.b22]
    }

    pub fn x1_point(a: C64, b: C64, c: C64) -> Self {
        Tensor222::from_entries([C64::new(1.0, 0.0), a, b, a * b, c, a * c, b * c, a * b * c])
    }

    /// Canonical representative `(k 0 | 0 d13 ; 0 d12 | d23 e)`.
    pub fn canonical(k: C64, d12: C64, d13: C64, d23: C64, e: C64) -> Self {
        let z = C64::new(0.0, 0.0);
        Tensor222::from_entries([k, z, z, d12, z, d13, d23, e])
    }

    pub fn add(&self, other: &Self) -> Self {
        let (x, y) = (self.entries(), other.entries());
        Tensor222::from_entries(std::array::from_fn(|i| x[i] + y[i]))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (x, y) = (self.entries(), other.entries());
        Tensor222::from_entries(std::array::from_fn(|i| x[i] - y[i]))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// The action of `(u1, u2, u3)`.
    pub fn act(&self, u: [C64; 3]) -> Self {
        let mut t = *self;
        t.a12 += u[0] * t.a11;
        t.a22 += u[0] * t.a21;
        t.b12 += u[0] * t.b11;
        t.b22 += u[0] * t.b21;

        t.a21 += u[1] * t.a11;
        t.a22 += u[1] * t.a12;
        t.b21 += u[1] * t.b11;
        t.b22 += u[1] * t.b12;

        t.b11 += u[2] * t.a11;
        t.b12 += u[2] * t.a12;
        t.b21 += u[2] * t.a21;
        t.b22 += u[2] * t.a22;
        t
    }

    /// Nonzero with all three flattenings of rank one.
    pub fn is_rank_one(&self, tol: f64) -> bool {
        let e = self.entries();
        let flat = |idx: [[usize; 4]; 2]| MatC::from_fn(2, 4, |i, j| e[idx[i][j]]);
        let flattenings = [
            flat([[0, 1, 4, 5], [2, 3, 6, 7]]),
            flat([[0, 2, 4, 6], [1, 3, 5, 7]]),
            flat([[0, 1, 2, 3], [4, 5, 6, 7]]),
        ];
        self.max_abs() > 0.0 && flattenings.iter().all(|m| rank(m, tol).ok() == Some(1))
    }

    /// `x1 x2 x3 + 2 z123 - x1 y23 - x2 y13 - x3 y12` together with the
    /// magnitude of its largest term.
    pub fn sigma2_equation(&self) -> (C64, f64) {
        let terms = [
            self.a12 * self.a21 * self.b11,
            self.b22 * 2.0,
            -self.a12 * self.b21,
            -self.a21 * self.b12,
            -self.b11 * self.a22,
        ];
        (terms.iter().sum(), terms.iter().map(|z| z.norm()).fold(0.0, f64::max))
    }
}

fn check_h(t: &Tensor222, k: f64, tol: f64) -> Result<()> {
    if (t.a11 - C64::new(k, 0.0)).norm() > tol * t.max_abs().max(k) {
        return Err(Error::Precondition(format!("h(t) = {} but {k} is required", t.a11)));
    }
    Ok(())
}

/// `(u, u.t)` with `u.t` canonical. The inverse action is `-u`.
pub fn tensor222_normalize(t: &Tensor222, tol: f64) -> Result<([C64; 3], Tensor222)> {
    if negligible(t.a11, t.max_abs(), tol) {
        return Err(Error::NormalizationUndefined);
    }
    let u = [-t.a12 / t.a11, -t.a21 / t.a11, -t.b11 / t.a11];
    let mut n = t.act(u);
    n.a12 = C64::new(0.0, 0.0);
    n.a21 = C64::new(0.0, 0.0);
    n.b11 = C64::new(0.0, 0.0);
    Ok((u, n))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sigma2Membership {
    pub in_sigma2: bool,
    pub in_osec2: bool,
    /// Some `mu_i` or `e` of the canonical form is neither clearly zero nor
    /// clearly nonzero, so the verdict depends on the tolerance.
    pub borderline: bool,
    /// `(mu_1, mu_2, mu_3) = (d23, d13, d12)` of the canonical form.
    #[serde(with = "mu_json")]
    pub mu: [C64; 3],
}

mod mu_json {
    use super::*;
    pub fn serialize<S: serde::Serializer>(mu: &[C64; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
        mu.map(pair).serialize(s)
    }
    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<[C64; 3], D::Error> {
        Ok(<[JsonScalar; 3]>::deserialize(d)?.map(C64::from))
    }
}

/// Membership of `t` with `h(t) = 2` in the second monic secant variety and
/// in the set of actual sums of two points of `X_1`.
pub fn tensor222_sigma2_membership(t: &Tensor222, tol: f64) -> Result<Sigma2Membership> {
    check_h(t, 2.0, tol)?;
    let (value, size) = t.sigma2_equation();
    let in_sigma2 = negligible(value, size, tol);
    let (_, n) = tensor222_normalize(t, tol)?;
    let scale = n.max_abs();
    let mu = [n.b21, n.b12, n.a22];
    let zeros = mu.iter().filter(|&&m| negligible(m, scale, tol)).count();
    let band = |z: C64| !negligible(z, scale, tol) && negligible(z, scale, tol.sqrt());
    let borderline = mu.iter().any(|&m| band(m)) || band(n.b22);
    Ok(Sigma2Membership { in_sigma2, in_osec2: in_sigma2 && zeros != 1, borderline, mu })
}

/// `(a, b, c)` with `(2 0 | 0 beta ; 0 gamma | alpha 0) = p(a,b,c) + p(-a,-b,-c)`,
/// that is `2bc = alpha`, `2ac = beta`, `2ab = gamma`.
fn split_pair(mu: [C64; 3], scale: f64, tol: f64) -> Result<[C64; 3]> {
    let [alpha, beta, gamma] = mu;
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let nonzero: Vec<bool> = mu.iter().map(|&m| !negligible(m, scale, tol)).collect();
    match nonzero.iter().filter(|&&b| b).count() {
        3 => {
            let s = (alpha * beta * gamma / 8.0).sqrt();
            Ok([s * 2.0 / alpha, s * 2.0 / beta, s * 2.0 / gamma])
        }
        2 => Err(Error::ExactlyOneZero),
        1 if nonzero[0] => Ok([zero, one, alpha / 2.0]),
        1 if nonzero[1] => Ok([one, zero, beta / 2.0]),
        1 => Ok([one, gamma / 2.0, zero]),
        _ => Ok([zero; 3]),
    }
}

fn shifted(triples: &[[C64; 3]], shift: [C64; 3]) -> Vec<Summand> {
    triples.iter().map(|t| Summand::Triple { a: t[0] + shift[0], b: t[1] + shift[1], c: t[2] + shift[2] }).collect()
}

/// Decomposes `t` with `h(t) = k` into `k` points of `X_1`, `k` in `{2, 3}`.
pub fn tensor222_monic_decompose<R: Rng + ?Sized>(
    t: &Tensor222,
    k: usize,
    tol: f64,
    rng: &mut R,
    retry_budget: usize,
) -> Result<Certificate> {
    let target = Target::Tensor(*t);
    match k {
        2 => {
            let m = tensor222_sigma2_membership(t, tol)?;
            if !m.in_sigma2 {
                let (value, size) = t.sigma2_equation();
                return Err(Error::NotInSigma2(value.norm() / size.max(1.0)));
            }
            let (u, n) = tensor222_normalize(t, tol)?;
            let [a, b, c] = split_pair(m.mu, n.max_abs(), tol)?;
            let summands = shifted(&[[a, b, c], [-a, -b, -c]], u.map(|x| -x));
            certify(Family::Tensor, summands, &target, tol)
        }
        3 => {
            check_h(t, 3.0, tol)?;
            let (u, n) = tensor222_normalize(t, tol)?;
            let back = u.map(|x| -x);
            let scale = n.max_abs();
            let (d12, d13, d23, e) = (n.a22, n.b12, n.b21, n.b22);
            if [d12, d13, d23, e].iter().all(|&x| negligible(x, scale, tol)) {
                let zero = C64::new(0.0, 0.0);
                return certify(Family::Tensor, shifted(&[[zero; 3]; 3], back), &target, tol);
            }
            let size = scale.sqrt().max(1.0);
            for _ in 0..retry_budget {
                let (a, b) = (sample(rng) * size, sample(rng) * size);
                let denom = d12 / 3.0 - a * b * 8.0 / 9.0;
                if negligible(denom, scale, tol.sqrt()) {
                    continue;
                }
                let c = -(e + (a * d23 + b * d13) / 3.0) / denom;
                let moved = n.act([a / 3.0, b / 3.0, c / 3.0]);
                let rest = moved.sub(&Tensor222::x1_point(a, b, c));
                let mu = [rest.b21, rest.b12, rest.a22];
                if mu.iter().any(|&m| negligible(m, rest.max_abs(), tol.sqrt())) {
                    continue;
                }
                let [a1, b1, c1] = split_pair(mu, rest.max_abs(), tol)?;
                let shift = [back[0] - a / 3.0, back[1] - b / 3.0, back[2] - c / 3.0];
                let summands = shifted(&[[a, b, c], [a1, b1, c1], [-a1, -b1, -c1]], shift);
                let cert = certify(Family::Tensor, summands, &target, tol)?;
                if cert.residual <= tol && cert.checks.all() {
                    return Ok(cert);
                }
            }
            Err(Error::RetriesExhausted { stage: "tensor k=3 surface point".into(), attempts: retry_budget })
        }
        _ => Err(Error::Precondition(format!("tensor decomposition needs k in {{2, 3}}, got {k}"))),
    }
}
