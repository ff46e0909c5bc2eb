//! Samplers shared by the integration tests and the acceptance runner.
#![allow(dead_code)]

use monic_rank::decompose::Tensor222;
use monic_rank::polysys::{Monomial, MultiPoly, VarSpace};
use monic_rank::{MatC, C64};
use rand::Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn real(rows: &[&[f64]]) -> MatC {
    MatC::from_rows(rows.iter().map(|r| r.iter().map(|&x| c(x, 0.0)).collect()).collect()).unwrap()
}

/// Complex sample in the unit box, rounded to 1/1000.
pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c(rng.gen_range(-1000i32..=1000) as f64 / 1000.0, rng.gen_range(-1000i32..=1000) as f64 / 1000.0)
}

/// Complex number bounded away from zero.
pub fn sample_nonzero<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    loop {
        let z = sample(rng);
        if z.norm() > 0.2 {
            return z;
        }
    }
}

pub fn random_mat<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> MatC {
    MatC::from_fn(rows, cols, |_, _| sample(rng))
}

/// Rank-`r` matrix `U V^T` rescaled to top-left entry `k`.
pub fn random_matrix_instance<R: Rng + ?Sized>(m: usize, n: usize, r: usize, k: usize, rng: &mut R) -> MatC {
    loop {
        let a = &random_mat(m, r, rng) * &random_mat(n, r, rng).transpose();
        if a[(0, 0)].norm() > 0.05 {
            return a.scale(&(c(k as f64, 0.0) / a[(0, 0)]));
        }
    }
}

/// Complex symmetric rank-`r` matrix `U U^T` rescaled to top-left entry `k`.
pub fn random_symmetric_instance<R: Rng + ?Sized>(n: usize, r: usize, k: usize, rng: &mut R) -> MatC {
    loop {
        let u = random_mat(n, r, rng);
        let a = &u * &u.transpose();
        if a[(0, 0)].norm() > 0.05 {
            return a.scale(&(c(k as f64, 0.0) / a[(0, 0)]));
        }
    }
}

/// Trace-zero rank-`r` matrix with top-right entry `n`.
pub fn random_sln_instance<R: Rng + ?Sized>(n: usize, r: usize, rng: &mut R) -> MatC {
    loop {
        let u = random_mat(n, r, rng);
        let mut v = random_mat(n, r, rng);
        if u[(0, 0)].norm() < 0.1 {
            continue;
        }
        let base = &u * &v.transpose();
        let (t0, c0) = (base.trace(), base[(0, n - 1)]);
        // v[n-1][0] moves the top-right entry, v[0][0] then restores the trace
        let dlast = (c(n as f64, 0.0) - c0) / u[(0, 0)];
        let dfirst = (-t0 - u[(n - 1, 0)] * dlast) / u[(0, 0)];
        v[(n - 1, 0)] += dlast;
        v[(0, 0)] += dfirst;
        return &u * &v.transpose();
    }
}

/// `p(a1,b1,c1) + p(a2,b2,c2)`.
pub fn random_sigma2_sum<R: Rng + ?Sized>(rng: &mut R) -> Tensor222 {
    let p = Tensor222::x1_point(sample(rng), sample(rng), sample(rng));
    let q = Tensor222::x1_point(sample(rng), sample(rng), sample(rng));
    p.add(&q)
}

/// Random tensor with `h = 3`.
pub fn random_3h_tensor<R: Rng + ?Sized>(rng: &mut R) -> Tensor222 {
    let mut e: [C64; 8] = std::array::from_fn(|_| sample(rng));
    e[0] = c(3.0, 0.0);
    Tensor222::from_entries(e)
}

/// Random polynomial of weighted degree at most `deg` with about `terms`
/// terms and small integer coefficients.
pub fn random_poly<R: Rng + ?Sized>(space: VarSpace, p: u64, deg: u32, terms: usize, rng: &mut R) -> MultiPoly {
    let n = space.nvars();
    let mut out = Vec::new();
    for _ in 0..terms {
        let mut exps = vec![0u32; n];
        let mut budget = rng.gen_range(0..=deg);
        for _ in 0..8 {
            let var = rng.gen_range(0..n);
            let w = space.weight(var);
            if w <= budget {
                exps[var] += 1;
                budget -= w;
            }
        }
        let coeff = rng.gen_range(-5i64..=5);
        out.push((Monomial::from_exponents(&space, &exps).unwrap(), coeff));
    }
    MultiPoly::from_terms(space, p, out)
}

/// `sum h_i g_i` with random cofactors keeping each product below degree 8.
pub fn combination<R: Rng + ?Sized>(gens: &[MultiPoly], rng: &mut R) -> MultiPoly {
    let (space, p) = (gens[0].space(), gens[0].prime());
    let mut f = MultiPoly::zero(space, p);
    for g in gens {
        let room = 8u32.saturating_sub(g.weighted_degree()).min(3);
        let h = random_poly(space, p, room, 3, rng);
        f = f.add(&h.mul(g).unwrap()).unwrap();
    }
    f
}

pub enum CorpusKind {
    /// `f = sum h_i g_i` with explicit cofactors.
    Member,
    /// A random polynomial.
    Random,
    /// A member plus one random monomial.
    Perturbed,
}

pub struct OracleCase {
    pub gens: Vec<MultiPoly>,
    pub f: MultiPoly,
    pub kind: CorpusKind,
}

/// Seeded corpus of small systems: at most three variables, generator
/// degrees at most four, test polynomial degree at most eight.
pub fn oracle_corpus<R: Rng + ?Sized>(count: usize, p: u64, rng: &mut R) -> Vec<OracleCase> {
    let spaces = [
        VarSpace::new(2, 1).unwrap(),
        VarSpace::new(3, 1).unwrap(),
        VarSpace::new(1, 3).unwrap(),
        VarSpace::new(1, 2).unwrap(),
    ];
    (0..count)
        .map(|i| {
            let space = spaces[i % spaces.len()];
            let ngens = rng.gen_range(1..=3usize.min(space.nvars()));
            let gens: Vec<MultiPoly> = (0..ngens)
                .map(|_| loop {
                    let g = random_poly(space, p, rng.gen_range(1..=4), rng.gen_range(1..=4), rng);
                    if !g.is_zero() && !g.is_unit() {
                        break g;
                    }
                })
                .collect();
            let kind = match i % 3 {
                0 => CorpusKind::Member,
                1 => CorpusKind::Random,
                _ => CorpusKind::Perturbed,
            };
            let f = match kind {
                CorpusKind::Member => combination(&gens, rng),
                CorpusKind::Random => random_poly(space, p, 4, 4, rng),
                CorpusKind::Perturbed => {
                    let var = rng.gen_range(0..space.nvars());
                    let (block, slot) = space.position(var);
                    combination(&gens, rng).add(&MultiPoly::var(space, p, block, slot)).unwrap()
                }
            };
            OracleCase { gens, f, kind }
        })
        .collect()
}
