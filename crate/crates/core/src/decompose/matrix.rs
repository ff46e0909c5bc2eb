//! Rank-one peeling for matrices and symmetric matrices.
//!
//! With `A[0,0] = k`, the Schur complement `M = A_22 - a b^T / k` factors
//! `A = P diag(k, 1, ..., 1) Q` with first column `p0 = (1, a/k)`, first row
//! `q0 = (1, b/k)` and rank-one pieces `p_j q_j^T` of `M` padded with a zero
//! first coordinate. The identity
//!
//! ```text
//! diag(k, 1) = [[k-1, l], [l, 1-l^2]] + [[1, -l], [-l, l^2]],  l = sqrt((k-1)/k)
//! ```
//!
//! in the basis `(p0, p_j)` splits off the monic summand
//! `(p0 - l p_j)(q0 - l q_j)^T` and leaves `(k-1) p0' q0'^T` with
//! `p0' = p0 + l/(k-1) p_j`. After `rank(A) - 1` splits the rest is a
//! multiple of one monic rank-one matrix.

use super::{certify, Certificate, Family, Summand, Target};
use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::{MatC, C64};

fn check_top_left(a: &MatC, k: usize, tol: f64) -> Result<()> {
    if a.is_empty() {
        return Err(Error::Dimension("empty matrix".into()));
    }
    if k == 0 || k > a.rows().min(a.cols()) {
        return Err(Error::Precondition(format!(
            "k = {k} outside 1..={} for a {}x{} matrix",
            a.rows().min(a.cols()),
            a.rows(),
            a.cols()
        )));
    }
    let scale = a.max_abs().max(k as f64);
    if (a[(0, 0)] - C64::new(k as f64, 0.0)).norm() > tol * scale {
        return Err(Error::Precondition(format!("top-left entry {} is not {k}", a[(0, 0)])));
    }
    Ok(())
}

/// `M = A_22 - a b^T / A[0,0]` together with the first column and row of the
/// monic factor.
fn schur(a: &MatC) -> (MatC, Vec<C64>, Vec<C64>) {
    let (m, n) = (a.rows(), a.cols());
    let pivot = a[(0, 0)];
    let p0: Vec<C64> = (0..m).map(|i| if i == 0 { C64::new(1.0, 0.0) } else { a[(i, 0)] / pivot }).collect();
    let q0: Vec<C64> = (0..n).map(|j| if j == 0 { C64::new(1.0, 0.0) } else { a[(0, j)] / pivot }).collect();
    let s = MatC::from_fn(m - 1, n - 1, |i, j| a[(i + 1, j + 1)] - p0[i + 1] * a[(0, j + 1)]);
    (s, p0, q0)
}

/// Splits `m` into `count` rank-one pieces `x y^T` by complete pivoting.
pub(super) fn peel(mut m: MatC, count: usize) -> Vec<(Vec<C64>, Vec<C64>)> {
    let mut pieces = Vec::with_capacity(count);
    for _ in 0..count {
        let (mut pi, mut pj, mut best) = (0, 0, -1.0);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if m[(i, j)].norm() > best {
                    (pi, pj, best) = (i, j, m[(i, j)].norm());
                }
            }
        }
        let pivot = m[(pi, pj)];
        let x: Vec<C64> = (0..m.rows()).map(|i| m[(i, pj)]).collect();
        let y: Vec<C64> = (0..m.cols()).map(|j| m[(pi, j)] / pivot).collect();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                m[(i, j)] -= x[i] * y[j];
            }
        }
        pieces.push((x, y));
    }
    pieces
}

/// Symmetric counterpart of [`peel`]: pieces `x x^T`. Uses a diagonal pivot
/// when one is large enough and `e_i + e_j` otherwise.
fn peel_symmetric(mut m: MatC, count: usize) -> Vec<Vec<C64>> {
    let n = m.rows();
    let mut pieces = Vec::with_capacity(count);
    for _ in 0..count {
        let diag = (0..n).max_by(|&a, &b| m[(a, a)].norm().total_cmp(&m[(b, b)].norm())).unwrap();
        let (mut oi, mut oj, mut off) = (0, 0, 0.0);
        for i in 0..n {
            for j in i + 1..n {
                if m[(i, j)].norm() > off {
                    (oi, oj, off) = (i, j, m[(i, j)].norm());
                }
            }
        }
        let mut w = vec![C64::new(0.0, 0.0); n];
        if m[(diag, diag)].norm() >= 0.5 * off {
            w[diag] = C64::new(1.0, 0.0);
        } else {
            w[oi] = C64::new(1.0, 0.0);
            w[oj] = C64::new(1.0, 0.0);
        }
        let mw: Vec<C64> = (0..n).map(|i| (0..n).map(|j| m[(i, j)] * w[j]).sum()).collect();
        let wmw: C64 = w.iter().zip(&mw).map(|(a, b)| a * b).sum();
        let root = wmw.sqrt();
        let x: Vec<C64> = mw.iter().map(|v| v / root).collect();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] -= x[i] * x[j];
            }
        }
        pieces.push(x);
    }
    pieces
}

fn padded(v: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0)];
    out.extend_from_slice(v);
    out
}

fn axpy(y: &[C64], a: C64, x: &[C64]) -> Vec<C64> {
    y.iter().zip(x).map(|(y, x)| y + a * x).collect()
}

/// The lambda splitting; returns `k` pairs `(v, alpha)`.
fn split(
    mut weight: C64,
    mut p0: Vec<C64>,
    mut q0: Vec<C64>,
    pieces: Vec<(Vec<C64>, Vec<C64>)>,
    k: usize,
) -> Vec<(Vec<C64>, Vec<C64>)> {
    let one = C64::new(1.0, 0.0);
    let mut out = Vec::with_capacity(k);
    for (pj, qj) in &pieces {
        let lambda = ((weight - one) / weight).sqrt();
        out.push((axpy(&p0, -lambda, pj), axpy(&q0, -lambda, qj)));
        let mu = lambda / (weight - one);
        p0 = axpy(&p0, mu, pj);
        q0 = axpy(&q0, mu, qj);
        weight -= one;
    }
    for _ in pieces.len()..k {
        out.push((p0.clone(), q0.clone()));
    }
    out
}

/// Writes `A` with `A[0,0] = k` and `rank(A) <= k` as `k` monic rank-one
/// matrices `v alpha^T`, `v_1 alpha_1 = 1`.
pub fn matrix_monic_decompose(a: &MatC, k: usize, tol: f64) -> Result<Certificate> {
    check_top_left(a, k, tol)?;
    let r = rank(a, tol)?;
    if r > k {
        return Err(Error::RankTooLarge { rank: r, k });
    }
    let (s, p0, q0) = schur(a);
    let pieces = peel(s, r - 1).into_iter().map(|(x, y)| (padded(&x), padded(&y))).collect();
    let summands =
        split(a[(0, 0)], p0, q0, pieces, k).into_iter().map(|(v, alpha)| Summand::Outer { v, alpha }).collect();
    certify(Family::Matrix, summands, &Target::Matrix(a.clone()), tol)
}

/// Symmetric version: summands `v v^T` with `v_1 = 1`.
pub fn symmetric_monic_decompose(a: &MatC, k: usize, tol: f64) -> Result<Certificate> {
    check_top_left(a, k, tol)?;
    if !a.is_square() {
        return Err(Error::NotSymmetric);
    }
    let asym = (a - &a.transpose()).max_abs();
    if asym > tol * a.max_abs().max(1.0) {
        return Err(Error::NotSymmetric);
    }
    let r = rank(a, tol)?;
    if r > k {
        return Err(Error::RankTooLarge { rank: r, k });
    }
    let (s, p0, _) = schur(a);
    let pieces = peel_symmetric(s, r - 1)
        .into_iter()
        .map(|x| {
            let x = padded(&x);
            (x.clone(), x)
        })
        .collect();
    let summands = split(a[(0, 0)], p0.clone(), p0, pieces, k)
        .into_iter()
        .map(|(v, _)| Summand::Outer { alpha: v.clone(), v })
        .collect();
    certify(Family::Symmetric, summands, &Target::Symmetric(a.clone()), tol)
}
