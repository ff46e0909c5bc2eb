//! Trace-zero matrices with top-right entry `n` as sums of `n` trace-zero
//! rank-one matrices `v alpha^T` with `v_1 = alpha_n = 1`.
//!
//! Notation: `z = e_n`, `omega = e_1`, `B` the current remainder and `k` its
//! top-right entry. A summand `J = B x (B^T beta)^T` with
//! `<x, B^T beta> = 1` lowers the rank by one. The pipeline is
//!
//! * rank one: `k` copies of `B / k`;
//! * rank `n - 1`: one rank-preserving summand `J = B x alpha^T` making
//!   property P hold;
//! * rank `r <= n - 2`: one summand `J = v (B^T beta)^T` so that `B z` is no
//!   longer an eigenvector, then `n - r - 1` summands `J = B z/k alpha^T`,
//!   after which `k = r` and P holds;
//! * rank `k >= 3` with P: rank-lowering steps keeping P;
//! * rank `k = 2` with P: a closed-form rank-lowering summand;
//! * rank `k = 1`: the remainder itself.
//!
//! Every random choice is checked; a failed check restarts the pipeline.

use rand::Rng;

use super::{certify, sample, Certificate, Family, Summand, Target};
use crate::error::{Error, Result};
use crate::linalg::{is_eigenvector, rank, solve_affine};
use crate::{MatC, C64};

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn norm(v: &MatC) -> f64 {
    v.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `true` iff neither `A z` is an eigenvector of `A` nor `A^T omega` one of
/// `A^T`. Requires `omega^T A z != 0`.
pub fn property_p(a: &MatC, z: &MatC, omega: &MatC, tol: f64) -> Result<bool> {
    if !a.is_square() || z.len() != a.rows() || omega.len() != a.rows() {
        return Err(Error::Dimension("property P needs a square matrix and two matching vectors".into()));
    }
    let az = a * z;
    let at = a.transpose();
    let atw = &at * omega;
    let pairing = az.dot(omega);
    let scale = crate::linalg::singular_values(a).first().copied().unwrap_or(0.0) * norm(z) * norm(omega);
    if pairing.norm() <= tol * scale || pairing.norm() == 0.0 {
        return Err(Error::Precondition("omega^T A z vanishes".into()));
    }
    Ok(!is_eigenvector(a, &az, tol)? && !is_eigenvector(&at, &atw, tol)?)
}

/// Sampled point of `{x : M x = b}`, or `None` if the system is inconsistent.
fn random_solution<R: Rng + ?Sized>(rows: &[&MatC], rhs: &[C64], tol: f64, rng: &mut R) -> Result<Option<MatC>> {
    let n = rows[0].len();
    let m = MatC::from_fn(rows.len(), n, |i, j| rows[i][j]);
    let b = MatC::column(rhs.to_vec());
    Ok(solve_affine(&m, &b, tol)?.map(|sol| {
        let coeffs: Vec<C64> = sol.nullspace.iter().map(|_| sample(rng)).collect();
        sol.point(&coeffs)
    }))
}

struct Run<'a, R: Rng + ?Sized> {
    n: usize,
    tol: f64,
    rng: &'a mut R,
    summands: Vec<(MatC, MatC)>,
}

/// Signals a failed genericity check; the pipeline restarts.
struct Retry(&'static str);

type Step<T> = std::result::Result<T, Retry>;

impl<R: Rng + ?Sized> Run<'_, R> {
    fn z(&self) -> MatC {
        MatC::unit(self.n, self.n - 1)
    }

    fn omega(&self) -> MatC {
        MatC::unit(self.n, 0)
    }

    fn rank(&self, b: &MatC) -> usize {
        rank(b, self.tol).expect("positive tolerance")
    }

    /// P with a margin, so accepted remainders stay well conditioned.
    fn holds_p(&self, b: &MatC) -> bool {
        property_p(b, &self.z(), &self.omega(), self.tol.sqrt()).unwrap_or(false)
    }

    fn solve(&mut self, rows: &[&MatC], rhs: &[C64], stage: &'static str) -> Step<MatC> {
        match random_solution(rows, rhs, self.tol, self.rng) {
            Ok(Some(x)) => Ok(x),
            _ => Err(Retry(stage)),
        }
    }

    fn subtract(&mut self, b: &MatC, v: MatC, alpha: MatC) -> MatC {
        let next = b - &MatC::outer(&v, &alpha);
        self.summands.push((v, alpha));
        next
    }

    /// A rank-one remainder with top-right entry `k` as `k` equal summands.
    fn copies(&mut self, b: &MatC, k: usize) {
        let part = b.scale(&C64::new(1.0 / k as f64, 0.0));
        let v = part.col(self.n - 1);
        let alpha = part.row(0).transpose().scale(&(one() / v[0]));
        for _ in 0..k {
            self.summands.push((v.clone(), alpha.clone()));
        }
    }

    /// Rank `n - 1`: a rank-preserving summand after which P holds.
    fn repair_corank_one(&mut self, b: &MatC) -> Step<MatC> {
        let n = self.n;
        let mut alpha = MatC::column((0..n).map(|_| sample(self.rng)).collect());
        alpha[n - 1] = one();
        let bt = b.transpose();
        let bta = &bt * &alpha;
        let bte1 = &bt * &self.omega();
        let x = self.solve(&[&alpha, &bta, &bte1], &[one(), C64::new(0.0, 0.0), one()], "corank-one repair")?;
        let v = b * &x;
        let next = self.subtract(b, v, alpha);
        if self.rank(&next) != n - 1 || !self.holds_p(&next) {
            return Err(Retry("corank-one repair"));
        }
        Ok(next)
    }

    /// Rank `r <= k - 1`: rank-preserving summand with `(B - J) z` not an
    /// eigenvector.
    fn repair_column(&mut self, b: &MatC) -> Step<MatC> {
        let n = self.n;
        let r = self.rank(b);
        let mut v = MatC::column((0..n).map(|_| sample(self.rng)).collect());
        v[0] = one();
        let bv = b * &v;
        let bz = b * &self.z();
        let beta = self.solve(&[&v, &bv, &bz], &[one(), C64::new(0.0, 0.0), one()], "column repair")?;
        let alpha = &b.transpose() * &beta;
        let next = self.subtract(b, v, alpha);
        let nz = &next * &self.z();
        if self.rank(&next) != r || is_eigenvector(&next, &nz, self.tol.sqrt()).unwrap_or(true) {
            return Err(Retry("column repair"));
        }
        Ok(next)
    }

    /// Rank-preserving summand `B z/k alpha^T`.
    fn repair_row(&mut self, b: &MatC, k: usize) -> Step<MatC> {
        let r = self.rank(b);
        let z = self.z();
        let bz = b * &z;
        let alpha = self.solve(&[&z, &bz], &[one(), C64::new(0.0, 0.0)], "row repair")?;
        let v = bz.scale(&C64::new(1.0 / k as f64, 0.0));
        let next = self.subtract(b, v, alpha);
        if self.rank(&next) != r {
            return Err(Retry("row repair"));
        }
        Ok(next)
    }

    /// Rank `k >= 3` with P: rank-lowering summand keeping P.
    fn lower(&mut self, b: &MatC, k: usize) -> Step<MatC> {
        let row1 = b.row(0).transpose();
        let x = self.solve(&[&row1], &[one()], "rank-lowering step")?;
        let v = b * &x;
        let bv = b * &v;
        let bz = b * &self.z();
        let beta = self.solve(&[&v, &bv, &bz], &[one(), C64::new(0.0, 0.0), one()], "rank-lowering step")?;
        let alpha = &b.transpose() * &beta;
        let next = self.subtract(b, v, alpha);
        if self.rank(&next) != k - 1 || !self.holds_p(&next) {
            return Err(Retry("rank-lowering step"));
        }
        Ok(next)
    }

    /// Rank two with P. With `B = P R^T` and `M = R^T P`, the summand is
    /// `(P g)(R h)^T` where `a^T g = 1`, `h` is orthogonal to `M g` and
    /// normalized by `g^T h = 1`; `c^T h = 1` becomes a quadratic in `g`.
    fn lower_two(&mut self, b: &MatC) -> Step<MatC> {
        let n = self.n;
        let pieces = super::matrix::peel(b.clone(), 2);
        let p = MatC::from_fn(n, 2, |i, j| pieces[j].0[i]);
        let r = MatC::from_fn(n, 2, |i, j| pieces[j].1[i]);
        let m = &r.transpose() * &p;
        let rot = |w: [C64; 2]| [w[1], -w[0]];
        let mg = |g: [C64; 2]| [m[(0, 0)] * g[0] + m[(0, 1)] * g[1], m[(1, 0)] * g[0] + m[(1, 1)] * g[1]];
        let dot = |x: [C64; 2], y: [C64; 2]| x[0] * y[0] + x[1] * y[1];
        let a = [p[(0, 0)], p[(0, 1)]];
        let c = [r[(n - 1, 0)], r[(n - 1, 1)]];
        let quad = |g: [C64; 2]| dot(a, g) * dot(c, rot(mg(g))) - dot(rot(mg(g)), g);

        let c00 = quad([one(), C64::new(0.0, 0.0)]);
        let c11 = quad([C64::new(0.0, 0.0), one()]);
        let c01 = quad([one(), one()]) - c00 - c11;
        let size = c00.norm().max(c01.norm()).max(c11.norm());
        let tiny = |x: C64| x.norm() <= self.tol * size;
        let mut candidates: Vec<[C64; 2]> = Vec::new();
        if size == 0.0 || (tiny(c00) && tiny(c01) && tiny(c11)) {
            candidates.extend((0..4).map(|_| [one(), sample(self.rng)]));
        } else if tiny(c11) {
            candidates.push([C64::new(0.0, 0.0), one()]);
            if !tiny(c01) {
                candidates.push([one(), -c00 / c01]);
            }
        } else {
            let disc = (c01 * c01 - c00 * c11 * 4.0).sqrt();
            candidates.push([one(), (-c01 + disc) / (c11 * 2.0)]);
            candidates.push([one(), (-c01 - disc) / (c11 * 2.0)]);
        }

        let mut best: Option<(f64, MatC, MatC, MatC)> = None;
        for g in candidates {
            let s = dot(a, g);
            if s.norm() <= self.tol * (a[0].norm() + a[1].norm()) * (g[0].norm() + g[1].norm()) {
                continue;
            }
            let g = [g[0] / s, g[1] / s];
            let w = rot(mg(g));
            let denom = dot(w, g);
            if !denom.is_finite() || denom.norm() == 0.0 {
                continue;
            }
            let h = [w[0] / denom, w[1] / denom];
            let v = MatC::column((0..n).map(|i| p[(i, 0)] * g[0] + p[(i, 1)] * g[1]).collect());
            let alpha = MatC::column((0..n).map(|i| r[(i, 0)] * h[0] + r[(i, 1)] * h[1]).collect());
            let rest = b - &MatC::outer(&v, &alpha);
            if self.rank(&rest) > 1 {
                continue;
            }
            let err = (rest[(0, n - 1)] - one()).norm();
            if best.as_ref().is_none_or(|(e, ..)| err < *e) {
                best = Some((err, v, alpha, rest));
            }
        }
        match best {
            Some((err, v, alpha, rest)) if err <= self.tol.sqrt() => {
                self.summands.push((v, alpha));
                Ok(rest)
            }
            _ => Err(Retry("rank-two closed form")),
        }
    }

    fn pipeline(&mut self, a: &MatC) -> Step<()> {
        let n = self.n;
        let r = self.rank(a);
        if r <= 1 {
            self.copies(a, n);
            return Ok(());
        }
        let (mut b, mut k) = (a.clone(), n);
        if r == n - 1 && n >= 3 {
            b = self.repair_corank_one(&b)?;
            k -= 1;
        } else if r <= n - 2 {
            b = self.repair_column(&b)?;
            k -= 1;
            for _ in 0..n - r - 1 {
                b = self.repair_row(&b, k)?;
                k -= 1;
            }
            if !self.holds_p(&b) {
                return Err(Retry("row repair"));
            }
        } else if !self.holds_p(&b) {
            return Err(Retry("full rank input"));
        }
        while k >= 3 {
            b = self.lower(&b, k)?;
            k -= 1;
        }
        if k == 2 {
            b = self.lower_two(&b)?;
        }
        self.copies(&b, 1);
        Ok(())
    }
}

/// Writes a trace-zero `A` with `A[0, n-1] = n` as `n` trace-zero rank-one
/// matrices with top-right entry 1.
pub fn sln_monic_decompose<R: Rng + ?Sized>(
    a: &MatC,
    tol: f64,
    rng: &mut R,
    retry_budget: usize,
) -> Result<Certificate> {
    let n = a.rows();
    if !a.is_square() || n < 2 {
        return Err(Error::Dimension(format!("need a square matrix of size at least 2, got {}x{}", n, a.cols())));
    }
    let scale = a.max_abs().max(1.0);
    if a.trace().norm() > tol * scale {
        return Err(Error::Precondition(format!("trace {} is not zero", a.trace())));
    }
    if (a[(0, n - 1)] - C64::new(n as f64, 0.0)).norm() > tol * scale {
        return Err(Error::Precondition(format!("top-right entry {} is not {n}", a[(0, n - 1)])));
    }
    let target = Target::Sln(a.clone());
    let mut stage = "pipeline";
    for _ in 0..retry_budget.max(1) {
        let mut run = Run { n, tol, rng: &mut *rng, summands: Vec::new() };
        match run.pipeline(a) {
            Ok(()) => {
                let summands = run
                    .summands
                    .into_iter()
                    .map(|(v, alpha)| Summand::Outer { v: v.into_entries(), alpha: alpha.into_entries() })
                    .collect();
                let cert = certify(Family::Sln, summands, &target, tol)?;
                if cert.residual <= tol && cert.checks.all() {
                    return Ok(cert);
                }
                stage = "certificate";
            }
            Err(Retry(s)) => stage = s,
        }
    }
    Err(Error::RetriesExhausted { stage: stage.into(), attempts: retry_budget.max(1) })
}
