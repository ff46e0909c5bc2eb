//! Dense matrices over a [`Scalar`] and the handful of linear-algebra
//! primitives the decomposers are built from: rank, affine solving and the
//! eigenvector (parallelism) test.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default relative tolerance for approximate scalars.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Row-major dense matrix. Vectors are `n x 1` matrices.
#[derive(Clone, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn new(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for a {}x{} matrix", data.len(), rows, cols)));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn column(entries: Vec<S>) -> Self {
        Mat { rows: entries.len(), cols: 1, data: entries }
    }

    /// Standard basis vector `e_i` (zero-based) of length `n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n, 1);
        v[(i, 0)] = S::one();
        v
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<S> {
        self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        self.data.chunks(self.cols.max(1)).map(<[S]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn col(&self, j: usize) -> Self {
        Self::from_fn(self.rows, 1, |i, _| self[(i, j)].clone())
    }

    pub fn row(&self, i: usize) -> Self {
        Self::from_fn(1, self.cols, |_, j| self[(i, j)].clone())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::Dimension(format!("cannot stack {} rows beside {} rows", self.rows, other.rows)));
        }
        Ok(Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        }))
    }

    pub fn scale(&self, s: &S) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.clone() * s.clone()).collect() }
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Bilinear pairing `<v, w> = w^T v` of two column vectors (no conjugation).
    pub fn dot(&self, other: &Self) -> S {
        self.data.iter().zip(&other.data).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// Outer product `v w^T` of two column vectors.
    pub fn outer(v: &Self, w: &Self) -> Self {
        Self::from_fn(v.len(), w.len(), |i, j| v.data[i].clone() * w.data[j].clone())
    }

    /// Number of entries; the length when `self` is a vector.
    pub fn len(&self) -> usize {
        self.data.len()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn is_zero_within(&self, threshold: f64) -> bool {
        self.data.iter().all(|x| x.is_negligible(threshold))
    }

    pub fn to_nalgebra(&self) -> Option<DMatrix<Complex64>> {
        let entries: Option<Vec<Complex64>> = self.data.iter().map(Scalar::to_c64).collect();
        entries.map(|e| DMatrix::from_row_slice(self.rows, self.cols, &e))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Mat<T> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Reduced row-echelon form and pivot columns.
    ///
    /// Approximate scalars use partial pivoting and treat entries below
    /// `tol * max_abs(self)` as zero; exact scalars ignore `tol`.
    pub fn rref(&self, tol: f64) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let threshold = tol * m.max_abs();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let candidate = if S::EXACT {
                (row..m.rows).find(|&r| !m[(r, col)].is_zero())
            } else {
                (row..m.rows)
                    .max_by(|&a, &b| m[(a, col)].magnitude().total_cmp(&m[(b, col)].magnitude()))
                    .filter(|&r| !m[(r, col)].is_negligible(threshold))
            };
            let Some(p) = candidate else {
                if !S::EXACT {
                    for r in row..m.rows {
                        m[(r, col)] = S::zero();
                    }
                }
                continue;
            };
            m.swap_rows(row, p);
            let inv = S::one() / m[(row, col)].clone();
            for j in col..m.cols {
                let x = m[(row, j)].clone() * inv.clone();
                m[(row, j)] = x;
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for j in col..m.cols {
                    let x = m[(r, j)].clone() - factor.clone() * m[(row, j)].clone();
                    m[(r, j)] = x;
                }
                m[(r, col)] = S::zero();
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<S> Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<S> Index<usize> for Mat<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.data[i]
    }
}

impl<S> IndexMut<usize> for Mat<S> {
    fn index_mut(&mut self, i: usize) -> &mut S {
        &mut self.data[i]
    }
}

impl<S: Scalar> Mul for &Mat<S> {
    type Output = Mat<S>;
    fn mul(self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out: Mat<S> = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let x = out[(i, j)].clone() + a.clone() * rhs[(k, j)].clone();
                    out[(i, j)] = x;
                }
            }
        }
        out
    }
}

impl<S: Scalar> Add for &Mat<S> {
    type Output = Mat<S>;
    fn add(self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum dimension mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<S: Scalar> Sub for &Mat<S> {
    type Output = Mat<S>;
    fn sub(self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference dimension mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<S: fmt::Debug> fmt::Debug for Mat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            writeln!(f, "  {:?}", row)?;
        }
        write!(f, "]")
    }
}

fn check_tolerance<S: Scalar>(tol: f64) -> Result<()> {
    if S::EXACT && tol != 0.0 {
        return Err(Error::Tolerance(format!("exact scalars take tol = 0, got {tol}")));
    }
    if !S::EXACT && !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Tolerance(format!("approximate scalars need tol > 0, got {tol}")));
    }
    Ok(())
}

/// Singular values of an approximate matrix, largest first.
pub fn singular_values<S: Scalar>(m: &Mat<S>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let nm = m.to_nalgebra().expect("approximate scalars embed into C");
    let mut sv: Vec<f64> = nm.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Rank of `m`.
///
/// Exact scalars: pivot count of the reduced row-echelon form, `tol` must be
/// zero. Approximate scalars: singular values above `tol * sigma_max`.
pub fn rank<S: Scalar>(m: &Mat<S>, tol: f64) -> Result<usize> {
    check_tolerance::<S>(tol)?;
    if m.is_empty() {
        return Ok(0);
    }
    if S::EXACT {
        return Ok(m.rref(0.0).1.len());
    }
    let sv = singular_values(m);
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol * top).count())
}

/// Solution set of `M x = b`: a particular solution plus a kernel basis.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSolution<S> {
    pub particular: Mat<S>,
    pub nullspace: Vec<Mat<S>>,
}

impl<S: Scalar> AffineSolution<S> {
    /// `particular + sum_i coeffs[i] * nullspace[i]`.
    pub fn point(&self, coeffs: &[S]) -> Mat<S> {
        self.nullspace.iter().zip(coeffs).fold(self.particular.clone(), |acc, (basis, c)| &acc + &basis.scale(c))
    }
}

/// Solves `M x = b`, returning `None` when the system is inconsistent.
///
/// Free variables are set to zero in the particular solution, so it is the
/// pivot solution selected by the row-echelon form.
pub fn solve_affine<S: Scalar>(m: &Mat<S>, b: &Mat<S>, tol: f64) -> Result<Option<AffineSolution<S>>> {
    check_tolerance::<S>(tol)?;
    if m.rows != b.rows || b.cols != 1 {
        return Err(Error::Dimension(format!(
            "system is {}x{} but right-hand side is {}x{}",
            m.rows, m.cols, b.rows, b.cols
        )));
    }
    let n = m.cols;
    let aug = m.hstack(b)?;
    let (r, pivots) = aug.rref(tol);
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut particular = Mat::zeros(n, 1);
    for (row, &col) in pivots.iter().enumerate() {
        particular[col] = r[(row, n)].clone();
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let nullspace = free
        .iter()
        .map(|&f| {
            let mut v = Mat::zeros(n, 1);
            v[f] = S::one();
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = -r[(row, f)].clone();
            }
            v
        })
        .collect();
    Ok(Some(AffineSolution { particular, nullspace }))
}

/// Basis of `ker(M)`.
pub fn nullspace<S: Scalar>(m: &Mat<S>, tol: f64) -> Result<Vec<Mat<S>>> {
    let zero = Mat::zeros(m.rows, 1);
    Ok(solve_affine(m, &zero, tol)?.map(|s| s.nullspace).unwrap_or_default())
}

fn euclidean_norm<S: Scalar>(v: &Mat<S>) -> f64 {
    v.entries().iter().map(|x| x.magnitude().powi(2)).sum::<f64>().sqrt()
}

/// `true` iff `A v` is parallel to `v`, i.e. `[v | A v]` has rank at most one.
///
/// Approximate inputs are normalized column-wise before the rank test, so the
/// answer does not change when `v` or `A` is rescaled.
pub fn is_eigenvector<S: Scalar>(a: &Mat<S>, v: &Mat<S>, tol: f64) -> Result<bool> {
    check_tolerance::<S>(tol)?;
    if !a.is_square() || v.rows != a.rows || v.cols != 1 {
        return Err(Error::Dimension(format!(
            "need square A and matching vector, got {}x{} and {}x{}",
            a.rows, a.cols, v.rows, v.cols
        )));
    }
    let av = a * v;
    if S::EXACT {
        if v.entries().iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroVector("eigenvector test of the zero vector".into()));
        }
        return Ok(rank(&v.hstack(&av)?, 0.0)? <= 1);
    }
    let nv = euclidean_norm(v);
    let na = singular_values(a).first().copied().unwrap_or(0.0);
    if nv <= tol * v.max_abs().max(f64::MIN_POSITIVE) || nv == 0.0 {
        return Err(Error::ZeroVector("eigenvector test of the zero vector".into()));
    }
    let nav = euclidean_norm(&av);
    if nav <= tol * na * nv {
        return Ok(true);
    }
    let u1 = v.map(|x| x.to_c64().unwrap() / nv);
    let u2 = av.map(|x| x.to_c64().unwrap() / nav);
    // Two unit columns: sigma_2 / sigma_1 measures their angle.
    Ok(rank(&u1.hstack(&u2)?, tol)? <= 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn qm(rows: Vec<Vec<i64>>) -> Mat<BigRational> {
        Mat::from_rows(rows.into_iter().map(|r| r.into_iter().map(q).collect()).collect()).unwrap()
    }

    fn fm(rows: Vec<Vec<f64>>) -> Mat<f64> {
        Mat::from_rows(rows).unwrap()
    }

    #[test]
    fn rank_of_identity_and_zero() {
        assert_eq!(rank(&Mat::<BigRational>::identity(2), 0.0).unwrap(), 2);
        assert_eq!(rank(&Mat::<BigRational>::zeros(3, 4), 0.0).unwrap(), 0);
        assert_eq!(rank(&Mat::<f64>::zeros(3, 4), 1e-9).unwrap(), 0);
        assert_eq!(rank(&Mat::<f64>::zeros(0, 0), 1e-9).unwrap(), 0);
    }

    #[test]
    fn rank_of_lambda_summand_is_one() {
        let lambda = 0.5f64.sqrt();
        let m = fm(vec![vec![1.0, lambda], vec![lambda, 1.0 - lambda * lambda]]);
        assert_eq!(rank(&m, 1e-9).unwrap(), 1);
    }

    #[test]
    fn rank_rejects_bad_tolerance() {
        assert!(matches!(rank(&Mat::<BigRational>::identity(2), 1e-9), Err(Error::Tolerance(_))));
        assert!(matches!(rank(&Mat::<f64>::identity(2), 0.0), Err(Error::Tolerance(_))));
    }

    #[test]
    fn rank_over_prime_field() {
        // [[1,2],[3,6]] is singular everywhere; [[1,2],[3,4]] has det -2.
        type F = Fp<101>;
        let m = Mat::from_rows(vec![vec![F::new(1), F::new(2)], vec![F::new(3), F::new(6)]]).unwrap();
        assert_eq!(rank(&m, 0.0).unwrap(), 1);
        type F2 = Fp<2>;
        let m = Mat::from_rows(vec![vec![F2::new(1), F2::new(2)], vec![F2::new(3), F2::new(4)]]).unwrap();
        assert_eq!(rank(&m, 0.0).unwrap(), 1);
    }

    #[test]
    fn solve_identity_system() {
        let sol = solve_affine(&qm(vec![vec![1, 0], vec![0, 1]]), &qm(vec![vec![1], vec![2]]), 0.0).unwrap().unwrap();
        assert_eq!(sol.particular, qm(vec![vec![1], vec![2]]));
        assert!(sol.nullspace.is_empty());
    }

    #[test]
    fn solve_single_equation() {
        let sol = solve_affine(&qm(vec![vec![1, 1]]), &qm(vec![vec![1]]), 0.0).unwrap().unwrap();
        assert_eq!(sol.particular, qm(vec![vec![1], vec![0]]));
        assert_eq!(sol.nullspace, vec![qm(vec![vec![-1], vec![1]])]);
    }

    #[test]
    fn solve_inconsistent() {
        assert!(solve_affine(&qm(vec![vec![0, 0]]), &qm(vec![vec![1]]), 0.0).unwrap().is_none());
        assert!(solve_affine(&fm(vec![vec![0.0, 0.0]]), &fm(vec![vec![1.0]]), 1e-9).unwrap().is_none());
    }

    #[test]
    fn solve_dimension_mismatch() {
        let err = solve_affine(&qm(vec![vec![1, 1]]), &qm(vec![vec![1], vec![2]]), 0.0);
        assert!(matches!(err, Err(Error::Dimension(_))));
    }

    #[test]
    fn eigenvector_examples() {
        // A^T of [[2,0],[1,-2]] with v = A^T e1.
        let at = qm(vec![vec![2, 1], vec![0, -2]]);
        let v = qm(vec![vec![2], vec![0]]);
        assert!(is_eigenvector(&at, &v, 0.0).unwrap());

        let id = Mat::<f64>::identity(3);
        assert!(is_eigenvector(&id, &fm(vec![vec![1.0], vec![-2.0], vec![0.5]]), 1e-9).unwrap());

        let a = qm(vec![vec![0, 2], vec![1, 0]]);
        assert!(!is_eigenvector(&a, &qm(vec![vec![2], vec![0]]), 0.0).unwrap());
    }

    #[test]
    fn eigenvector_of_zero_vector_errors() {
        let a = Mat::<f64>::identity(2);
        assert!(matches!(is_eigenvector(&a, &Mat::zeros(2, 1), 1e-9), Err(Error::ZeroVector(_))));
        let a = Mat::<BigRational>::identity(2);
        assert!(matches!(is_eigenvector(&a, &Mat::zeros(2, 1), 0.0), Err(Error::ZeroVector(_))));
    }

    #[test]
    fn eigenvector_of_kernel_vector() {
        // A v = 0 is parallel to v.
        let a = fm(vec![vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!(is_eigenvector(&a, &fm(vec![vec![1.0], vec![0.0]]), 1e-9).unwrap());
    }

    #[test]
    fn complex_rank() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let m = Mat::from_rows(vec![vec![one, i], vec![i, -one]]).unwrap();
        assert_eq!(rank(&m, 1e-9).unwrap(), 1);
    }
}
