//! Dimensions of monic secant varieties from Jacobian ranks.
//!
//! Each cone comes with a monic chart, a polynomial map from parameters onto
//! a dense open subset of `X_1`. The `k`-th monic secant is the closure of
//! the image of `(p_1, ..., p_k) -> p_1 + ... + p_k`, so its dimension is the
//! generic rank of that map's Jacobian. These estimates see the closure
//! only; they cannot tell `sigma_k X_1` apart from the sum set.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::singular_values;
use crate::MatF;

/// Forward-difference step.
pub const FD_STEP: f64 = 1e-6;
/// Singular values below this fraction of the largest count as zero.
pub const RANK_THRESHOLD: f64 = 1e-6;
pub const DEFAULT_TRIALS: usize = 11;
/// Sample coordinates are integers in `-SAMPLE_RANGE..=SAMPLE_RANGE`, widened for large `k`.
const SAMPLE_RANGE: i64 = 50;

/// A cone `X` with its hyperplane `h = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum VarietySpec {
    /// `d`-th powers of binary forms of degree `e`; `h` is the `x^{de}` coefficient.
    PowersBinaryForms { d: usize, e: usize },
    /// Rank-one `m x n` matrices; `h` is the top-left entry.
    RankOneMatrix { m: usize, n: usize },
    /// Symmetric rank-one `n x n` matrices; `h` is the top-left entry.
    SymRankOne { n: usize },
    /// Rank-one `2x2x2` tensors; `h` is the `a11` entry.
    Tensor222,
    /// Trace-zero rank-one `n x n` matrices; `h` is the top-right entry.
    SlnMinOrbit { n: usize },
}

impl VarietySpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            VarietySpec::PowersBinaryForms { d, e } => d >= 1 && e >= 1,
            VarietySpec::RankOneMatrix { m, n } => m >= 1 && n >= 1,
            VarietySpec::SymRankOne { n } => n >= 1,
            VarietySpec::Tensor222 => true,
            VarietySpec::SlnMinOrbit { n } => n >= 2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!("degenerate variety {self}")))
        }
    }

    /// Parameter count of the monic chart.
    pub fn dim_x1(&self) -> usize {
        match *self {
            VarietySpec::PowersBinaryForms { e, .. } => e,
            VarietySpec::RankOneMatrix { m, n } => m + n - 2,
            VarietySpec::SymRankOne { n } => n - 1,
            VarietySpec::Tensor222 => 3,
            VarietySpec::SlnMinOrbit { n } => 2 * n - 3,
        }
    }

    /// Dimension of the hyperplane `h = 1`.
    pub fn dim_h(&self) -> usize {
        self.ambient_dim() - 1
    }

    fn ambient_dim(&self) -> usize {
        match *self {
            VarietySpec::PowersBinaryForms { d, e } => d * e + 1,
            VarietySpec::RankOneMatrix { m, n } => m * n,
            VarietySpec::SymRankOne { n } => n * (n + 1) / 2,
            VarietySpec::Tensor222 => 8,
            VarietySpec::SlnMinOrbit { n } => n * n - 1,
        }
    }

    /// Ambient coordinates of the chart point with parameters `x`.
    pub fn chart(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.dim_x1());
        match *self {
            VarietySpec::PowersBinaryForms { d, .. } => {
                let mut f = vec![1.0];
                f.extend_from_slice(x);
                let mut power = vec![1.0];
                for _ in 0..d {
                    let mut next = vec![0.0; power.len() + f.len() - 1];
                    for (i, p) in power.iter().enumerate() {
                        for (j, c) in f.iter().enumerate() {
                            next[i + j] += p * c;
                        }
                    }
                    power = next;
                }
                power
            }
            VarietySpec::RankOneMatrix { m, .. } => {
                let v: Vec<f64> = std::iter::once(1.0).chain(x[..m - 1].iter().copied()).collect();
                let alpha: Vec<f64> = std::iter::once(1.0).chain(x[m - 1..].iter().copied()).collect();
                v.iter().flat_map(|vi| alpha.iter().map(move |aj| vi * aj)).collect()
            }
            VarietySpec::SymRankOne { n } => {
                let v: Vec<f64> = std::iter::once(1.0).chain(x.iter().copied()).collect();
                (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| v[i] * v[j]).collect()
            }
            VarietySpec::Tensor222 => {
                let (a, b, c) = (x[0], x[1], x[2]);
                vec![1.0, a, b, a * b, c, a * c, b * c, a * b * c]
            }
            VarietySpec::SlnMinOrbit { n } => {
                // v = (1, v_2..v_n), alpha = (alpha_1, alpha_2..alpha_{n-1}, 1)
                let v: Vec<f64> = std::iter::once(1.0).chain(x[..n - 1].iter().copied()).collect();
                let mut alpha = vec![0.0; n];
                alpha[1..n - 1].copy_from_slice(&x[n - 1..]);
                alpha[n - 1] = 1.0;
                alpha[0] = -(1..n).map(|i| v[i] * alpha[i]).sum::<f64>();
                // the trace-zero space drops the last diagonal entry
                (0..n * n - 1).map(|idx| v[idx / n] * alpha[idx % n]).collect()
            }
        }
    }

    /// Forward-difference Jacobian of the chart, one column per parameter.
    fn chart_jacobian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let base = self.chart(x);
        (0..x.len())
            .map(|j| {
                let h = FD_STEP * x[j].abs().max(1.0);
                let mut shifted = x.to_vec();
                shifted[j] += h;
                self.chart(&shifted).iter().zip(&base).map(|(s, b)| (s - b) / h).collect()
            })
            .collect()
    }
}

impl fmt::Display for VarietySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VarietySpec::PowersBinaryForms { d, e } => write!(f, "powers:{d},{e}"),
            VarietySpec::RankOneMatrix { m, n } => write!(f, "rank-one:{m},{n}"),
            VarietySpec::SymRankOne { n } => write!(f, "sym-rank-one:{n}"),
            VarietySpec::Tensor222 => write!(f, "tensor222"),
            VarietySpec::SlnMinOrbit { n } => write!(f, "sln:{n}"),
        }
    }
}

/// Accepts the [`Display`](fmt::Display) syntax, e.g. `powers:3,2` or `sln:4`.
impl FromStr for VarietySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<usize> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|a| a.trim().parse().map_err(|_| Error::Parse(format!("bad size {a:?} in {s:?}"))))
                .collect::<Result<_>>()?
        };
        let spec = match (name, nums.as_slice()) {
            ("powers", &[d, e]) => VarietySpec::PowersBinaryForms { d, e },
            ("rank-one", &[m, n]) => VarietySpec::RankOneMatrix { m, n },
            ("sym-rank-one", &[n]) => VarietySpec::SymRankOne { n },
            ("tensor222", &[]) => VarietySpec::Tensor222,
            ("sln", &[n]) => VarietySpec::SlnMinOrbit { n },
            _ => {
                return Err(Error::Parse(format!(
                    "unknown variety {s:?}; expected powers:D,E | rank-one:M,N | sym-rank-one:N | tensor222 | sln:N"
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimReport {
    pub k: usize,
    pub estimated_dim: usize,
    pub trials: usize,
    /// Fraction of trials attaining the modal rank.
    pub agreement: f64,
}

/// `k` parameter vectors with nonzero integer coordinates, pairwise distinct
/// in each coordinate so that no two summands share a chart coordinate.
fn sample_points<R: Rng + ?Sized>(spec: &VarietySpec, k: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let range = SAMPLE_RANGE.max(k as i64);
    let pool: Vec<i64> = (-range..=range).filter(|&x| x != 0).collect();
    let mut points = vec![Vec::with_capacity(spec.dim_x1()); k];
    for _ in 0..spec.dim_x1() {
        for (point, &x) in points.iter_mut().zip(pool.choose_multiple(rng, k)) {
            point.push(x as f64);
        }
    }
    points
}

/// Scales columns, then rows, to unit length. Leaves the rank unchanged.
fn equilibrate(mut m: MatF) -> MatF {
    for j in 0..m.cols() {
        let norm = (0..m.rows()).map(|i| m[(i, j)] * m[(i, j)]).sum::<f64>().sqrt();
        if norm > 0.0 {
            (0..m.rows()).for_each(|i| m[(i, j)] /= norm);
        }
    }
    for i in 0..m.rows() {
        let norm = (0..m.cols()).map(|j| m[(i, j)] * m[(i, j)]).sum::<f64>().sqrt();
        if norm > 0.0 {
            (0..m.cols()).for_each(|j| m[(i, j)] /= norm);
        }
    }
    m
}

/// Numerical rank of the addition map at one random sample.
fn trial_rank<R: Rng + ?Sized>(spec: &VarietySpec, k: usize, rng: &mut R) -> usize {
    let columns: Vec<Vec<f64>> = sample_points(spec, k, rng).iter().flat_map(|x| spec.chart_jacobian(x)).collect();
    let jac = equilibrate(MatF::from_fn(spec.ambient_dim(), columns.len(), |i, j| columns[j][i]));
    let sv = singular_values(&jac);
    let top = sv.first().copied().unwrap_or(0.0);
    sv.iter().filter(|&&s| s > RANK_THRESHOLD * top).count()
}

/// Modal Jacobian rank over `trials` samples.
pub fn monic_secant_dim(spec: &VarietySpec, k: usize, trials: usize, seed: u64) -> Result<DimReport> {
    spec.validate()?;
    if k == 0 || trials == 0 {
        return Err(Error::Precondition("k and trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ranks: Vec<usize> = (0..trials).map(|_| trial_rank(spec, k, &mut rng)).collect();
    let mut counts = vec![0usize; spec.ambient_dim() + 1];
    for &r in &ranks {
        counts[r] += 1;
    }
    // ties go to the larger rank, the generic one
    let (estimated_dim, hits) = counts.iter().enumerate().max_by_key(|&(r, &c)| (c, r)).unwrap();
    Ok(DimReport { k, estimated_dim, trials, agreement: *hits as f64 / trials as f64 })
}

/// Reports for `k = 1..=k_max`.
pub fn staircase(spec: &VarietySpec, k_max: usize, trials: usize, seed: u64) -> Result<Vec<DimReport>> {
    (1..=k_max).map(|k| monic_secant_dim(spec, k, trials, seed)).collect()
}

/// Least `k <= k_max` with `dim sigma_k X_1 = dim H`.
pub fn generic_monic_rank(spec: &VarietySpec, k_max: usize, trials: usize, seed: u64) -> Result<usize> {
    for k in 1..=k_max {
        if monic_secant_dim(spec, k, trials, seed)?.estimated_dim == spec.dim_h() {
            return Ok(k);
        }
    }
    Err(Error::RankBudget(k_max))
}

/// CSV with header `k,estimated_dim,trials,agreement`.
pub fn to_csv(reports: &[DimReport]) -> String {
    let mut out = String::from("k,estimated_dim,trials,agreement\n");
    for r in reports {
        out.push_str(&format!("{},{},{},{}\n", r.k, r.estimated_dim, r.trials, r.agreement));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(spec: VarietySpec, k_max: usize) -> Vec<usize> {
        staircase(&spec, k_max, DEFAULT_TRIALS, 7).unwrap().iter().map(|r| r.estimated_dim).collect()
    }

    #[test]
    fn staircases() {
        assert_eq!(dims(VarietySpec::PowersBinaryForms { d: 3, e: 2 }, 4), [2, 4, 6, 6]);
        assert_eq!(dims(VarietySpec::RankOneMatrix { m: 3, n: 3 }, 4), [4, 7, 8, 8]);
        assert_eq!(dims(VarietySpec::Tensor222, 4), [3, 6, 7, 7]);
        assert_eq!(dims(VarietySpec::SlnMinOrbit { n: 3 }, 4), [3, 6, 7, 7]);
        assert_eq!(dims(VarietySpec::SymRankOne { n: 3 }, 3), [2, 4, 5]);
    }

    #[test]
    fn generic_ranks() {
        let rank = |s| generic_monic_rank(&s, 8, DEFAULT_TRIALS, 1).unwrap();
        assert_eq!(rank(VarietySpec::Tensor222), 3);
        assert_eq!(rank(VarietySpec::RankOneMatrix { m: 2, n: 2 }), 2);
        assert_eq!(rank(VarietySpec::PowersBinaryForms { d: 2, e: 3 }), 2);
        assert_eq!(
            generic_monic_rank(&VarietySpec::PowersBinaryForms { d: 4, e: 2 }, 2, 3, 1),
            Err(Error::RankBudget(2))
        );
    }

    #[test]
    fn chart_points_are_monic() {
        let x = [2.0, -1.0, 3.0];
        assert_eq!(VarietySpec::Tensor222.chart(&x)[0], 1.0);
        // v = (1, 2, -1), alpha = (-5, 3, 1)
        let sln = VarietySpec::SlnMinOrbit { n: 3 }.chart(&x);
        assert_eq!(sln, vec![-5.0, 3.0, 1.0, -10.0, 6.0, 2.0, 5.0, -3.0]);
        assert_eq!(VarietySpec::PowersBinaryForms { d: 2, e: 1 }.chart(&[3.0]), vec![1.0, 6.0, 9.0]);
    }

    #[test]
    fn parse_round_trip() {
        for s in ["powers:3,2", "rank-one:2,5", "sym-rank-one:4", "tensor222", "sln:3"] {
            assert_eq!(s.parse::<VarietySpec>().unwrap().to_string(), s);
        }
        assert!("sln:1".parse::<VarietySpec>().is_err());
        assert!("cubes:3".parse::<VarietySpec>().is_err());
    }

    #[test]
    fn csv_export() {
        let reports = staircase(&VarietySpec::Tensor222, 2, 3, 0).unwrap();
        assert_eq!(to_csv(&reports), "k,estimated_dim,trials,agreement\n1,3,3,1\n2,6,3,1\n");
    }
}
