//! Monic decompositions with checkable certificates.
//!
//! Every decomposer writes its target as a sum of points of `X_1`, the
//! part of the cone lying on the hyperplane `h = 1`:
//!
//! | family      | summand            | `h`                    |
//! |-------------|--------------------|------------------------|
//! | `binary`    | `(x + a y)^d`      | coefficient of `x^d`   |
//! | `matrix`    | `v alpha^T`        | top-left entry         |
//! | `symmetric` | `v v^T`            | top-left entry         |
//! | `tensor`    | `(1,a,c) ⊗ ...`    | entry `a11`            |
//! | `sln`       | `v alpha^T`, trace zero | top-right entry   |
//!
//! Decompositions use approximate complex arithmetic, so a [`Certificate`]
//! carries its residual and the per-summand checks. [`verify_certificate`]
//! recomputes all of them from the summands and the target alone.

mod binary;
mod matrix;
mod newton;
mod roots;
mod sln;
mod tensor;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::{c64, c64_vec};
use crate::linalg::{rank, singular_values};
use crate::{MatC, C64};

pub use binary::{waring_monic_binary, BinaryForm};
pub use matrix::{matrix_monic_decompose, symmetric_monic_decompose};
pub use newton::newton_power_to_elementary;
pub use roots::{poly_roots, ROOT_ITERATIONS, ROOT_TOL};
pub use sln::{property_p, sln_monic_decompose};
pub use tensor::{
    tensor222_monic_decompose, tensor222_normalize, tensor222_sigma2_membership, Sigma2Membership, Tensor222,
};

/// Default number of attempts for every randomized choice.
pub const DEFAULT_RETRY_BUDGET: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Binary,
    Matrix,
    Symmetric,
    Tensor,
    Sln,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Binary => "binary",
            Family::Matrix => "matrix",
            Family::Symmetric => "symmetric",
            Family::Tensor => "tensor",
            Family::Sln => "sln",
        }
    }
}

/// One point of `X_1`. Variants are listed so that untagged decoding tries
/// the field sets from largest to smallest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Summand {
    /// The matrix `v alpha^T`.
    Outer {
        #[serde(with = "c64_vec")]
        v: Vec<C64>,
        #[serde(with = "c64_vec")]
        alpha: Vec<C64>,
    },
    /// The tensor `(1 a | c ac ; b ab | bc abc)`.
    Triple {
        #[serde(with = "c64")]
        a: C64,
        #[serde(with = "c64")]
        b: C64,
        #[serde(with = "c64")]
        c: C64,
    },
    /// The `d`-th power of the linear form `x + a y`.
    Linear {
        #[serde(with = "c64")]
        a: C64,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Checks {
    pub monic: Vec<bool>,
    pub rank: Vec<bool>,
    pub structure: Vec<bool>,
}

impl Checks {
    pub fn all(&self) -> bool {
        self.monic.iter().chain(&self.rank).chain(&self.structure).all(|&b| b)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub family: Family,
    pub summands: Vec<Summand>,
    pub residual: f64,
    pub checks: Checks,
    pub seed: Option<u64>,
    pub tolerance: f64,
}

/// The object a certificate claims to decompose.
#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    Binary(BinaryForm),
    Matrix(MatC),
    Symmetric(MatC),
    Tensor(Tensor222),
    Sln(MatC),
}

impl Target {
    pub fn family(&self) -> Family {
        match self {
            Target::Binary(_) => Family::Binary,
            Target::Matrix(_) => Family::Matrix,
            Target::Symmetric(_) => Family::Symmetric,
            Target::Tensor(_) => Family::Tensor,
            Target::Sln(_) => Family::Sln,
        }
    }

    /// Entries in a fixed order, for the max-abs norm.
    fn flat(&self) -> Vec<C64> {
        match self {
            Target::Binary(q) => q.coeffs.clone(),
            Target::Matrix(m) | Target::Symmetric(m) | Target::Sln(m) => m.entries().to_vec(),
            Target::Tensor(t) => t.entries().to_vec(),
        }
    }
}

/// Outcome of [`verify_certificate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub residual: f64,
    pub checks: Checks,
    /// Residual within tolerance and every check true.
    pub valid: bool,
}

fn max_abs(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn bilinear(v: &[C64], w: &[C64]) -> C64 {
    v.iter().zip(w).map(|(a, b)| a * b).sum()
}

fn outer_matrix(v: &[C64], alpha: &[C64]) -> MatC {
    MatC::from_fn(v.len(), alpha.len(), |i, j| v[i] * alpha[j])
}

fn summand_flat(s: &Summand, target: &Target) -> Result<Vec<C64>> {
    match (s, target) {
        (Summand::Linear { a }, Target::Binary(q)) => Ok(binary::linear_power(*a, q.degree())),
        (Summand::Outer { v, alpha }, Target::Matrix(m) | Target::Symmetric(m) | Target::Sln(m)) => {
            if v.len() != m.rows() || alpha.len() != m.cols() {
                return Err(Error::Dimension(format!(
                    "summand is {}x{} but target is {}x{}",
                    v.len(),
                    alpha.len(),
                    m.rows(),
                    m.cols()
                )));
            }
            Ok(outer_matrix(v, alpha).into_entries())
        }
        (Summand::Triple { a, b, c }, Target::Tensor(_)) => Ok(Tensor222::x1_point(*a, *b, *c).entries().to_vec()),
        _ => Err(Error::FamilyMismatch { expected: target.family().name().into(), found: format!("{s:?}") }),
    }
}

/// Scale-relative closeness used by the structural checks.
fn near(x: C64, y: C64, tol: f64) -> bool {
    (x - y).norm() <= tol * (1.0 + x.norm().max(y.norm()))
}

fn check_summand(s: &Summand, target: &Target, tol: f64) -> (bool, bool, bool) {
    match (s, target) {
        (Summand::Linear { a }, _) => (true, a.is_finite(), true),
        (Summand::Outer { v, alpha }, t) => {
            let n = alpha.len();
            let m = outer_matrix(v, alpha);
            let sv = singular_values(&m);
            let rank_one = sv.first().is_some_and(|&s| s > 0.0) && rank(&m, tol).ok() == Some(1);
            let scale = sv.first().copied().unwrap_or(0.0).max(1.0);
            match t {
                Target::Sln(_) => (
                    near(v[0] * alpha[n - 1], C64::new(1.0, 0.0), tol),
                    rank_one,
                    bilinear(v, alpha).norm() <= tol * scale,
                ),
                Target::Symmetric(_) => (
                    near(v[0] * alpha[0], C64::new(1.0, 0.0), tol),
                    rank_one,
                    v.iter().zip(alpha).all(|(x, y)| near(*x, *y, tol)),
                ),
                _ => (near(v[0] * alpha[0], C64::new(1.0, 0.0), tol), rank_one, true),
            }
        }
        (Summand::Triple { a, b, c }, _) => {
            let t = Tensor222::x1_point(*a, *b, *c);
            (near(t.a11, C64::new(1.0, 0.0), tol), t.is_rank_one(tol), true)
        }
    }
}

/// Recomputes the residual and every per-summand check from scratch.
pub fn verify_certificate(cert: &Certificate, target: &Target, tol: f64) -> Result<Verification> {
    if cert.family != target.family() {
        return Err(Error::FamilyMismatch {
            expected: target.family().name().into(),
            found: cert.family.name().into(),
        });
    }
    let goal = target.flat();
    let mut sum = vec![C64::new(0.0, 0.0); goal.len()];
    let mut checks = Checks::default();
    for s in &cert.summands {
        for (acc, x) in sum.iter_mut().zip(summand_flat(s, target)?) {
            *acc += x;
        }
        let (monic, rank_one, structure) = check_summand(s, target, tol);
        checks.monic.push(monic);
        checks.rank.push(rank_one);
        checks.structure.push(structure);
    }
    let diff: Vec<C64> = goal.iter().zip(&sum).map(|(g, s)| g - s).collect();
    let residual = max_abs(&diff) / max_abs(&goal).max(1.0);
    let valid = residual <= tol && checks.all() && !cert.summands.is_empty();
    Ok(Verification { residual, checks, valid })
}

fn certify(family: Family, summands: Vec<Summand>, target: &Target, tol: f64) -> Result<Certificate> {
    let mut cert =
        Certificate { family, summands, residual: 0.0, checks: Checks::default(), seed: None, tolerance: tol };
    let v = verify_certificate(&cert, target, tol)?;
    cert.residual = v.residual;
    cert.checks = v.checks;
    Ok(cert)
}

/// Complex number with integer parts in `[-999, 999]`, divided by 999.
pub(crate) fn sample<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re = rng.gen_range(-999i32..=999) as f64 / 999.0;
    let im = rng.gen_range(-999i32..=999) as f64 / 999.0;
    C64::new(re, im)
}

/// Relative-to-scale zero test shared by the decomposers.
pub(crate) fn negligible(z: C64, scale: f64, tol: f64) -> bool {
    z.norm() <= tol * scale.max(1.0)
}
