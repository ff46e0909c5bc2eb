//! Brute-force ideal membership through a truncated Macaulay matrix.
//!
//! Independent of the Buchberger code path: it only multiplies generators by
//! monomials and row-reduces the resulting coefficient vectors mod `p`.

use std::collections::HashMap;

use super::{inv_mod, mul_mod, Monomial, MultiPoly, VarSpace};
use crate::error::{Error, Result};

pub const MAX_ORACLE_VARS: usize = 4;
pub const MAX_ORACLE_BOUND: u32 = 12;

fn monomials_up_to(space: &VarSpace, bound: u32) -> Vec<Monomial> {
    let n = space.nvars();
    let mut out = Vec::new();
    let mut exps = vec![0u32; n];
    fn rec(space: &VarSpace, var: usize, remaining: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if var == exps.len() {
            out.push(Monomial::from_exponents(space, exps).expect("valid exponents"));
            return;
        }
        let w = space.weight(var);
        let mut e = 0;
        while e * w <= remaining {
            exps[var] = e;
            rec(space, var + 1, remaining - e * w, exps, out);
            e += 1;
        }
        exps[var] = 0;
    }
    rec(space, 0, bound, &mut exps, &mut out);
    out
}

/// Row-echelon store keyed by pivot column.
struct Echelon {
    p: u64,
    width: usize,
    rows: HashMap<usize, Vec<u64>>,
}

impl Echelon {
    /// Reduces `v` in place; returns the first column left without a pivot.
    fn reduce(&self, v: &mut [u64]) -> Option<usize> {
        for c in 0..self.width {
            if v[c] == 0 {
                continue;
            }
            let Some(row) = self.rows.get(&c) else {
                return Some(c);
            };
            let factor = self.p - v[c];
            for (x, r) in v[c..].iter_mut().zip(&row[c..]) {
                if *r != 0 {
                    *x = (*x + mul_mod(factor, *r, self.p)) % self.p;
                }
            }
        }
        None
    }

    fn insert(&mut self, mut v: Vec<u64>) {
        if let Some(c) = self.reduce(&mut v) {
            let inv = inv_mod(v[c], self.p);
            for x in v.iter_mut() {
                *x = mul_mod(*x, inv, self.p);
            }
            self.rows.insert(c, v);
        }
    }
}

/// `true` iff `f = sum_i h_i g_i` with every product of weighted degree at
/// most `degree_bound`.
///
/// One-sided: `false` only means no certificate exists below the bound.
/// Limited to `MAX_ORACLE_VARS` variables and `MAX_ORACLE_BOUND`.
pub fn macaulay_membership_oracle(f: &MultiPoly, gens: &[MultiPoly], degree_bound: u32) -> Result<bool> {
    let space = f.space();
    if space.nvars() > MAX_ORACLE_VARS || degree_bound > MAX_ORACLE_BOUND {
        return Err(Error::OracleLimits(format!(
            "{} variables with bound {degree_bound}; limits are {MAX_ORACLE_VARS} and {MAX_ORACLE_BOUND}",
            space.nvars()
        )));
    }
    if f.weighted_degree() > degree_bound {
        return Err(Error::Precondition(format!(
            "bound {degree_bound} below the weighted degree {} of f",
            f.weighted_degree()
        )));
    }
    for g in gens {
        f.check_compatible(g)?;
    }
    let p = f.prime();
    let monomials = monomials_up_to(&space, degree_bound);
    let index: HashMap<Monomial, usize> = monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let width = monomials.len();
    let to_vector = |poly: &MultiPoly, shift: &Monomial| {
        let mut v = vec![0u64; width];
        for (m, c) in poly.terms() {
            v[index[&m.mul(shift)]] = *c;
        }
        v
    };

    let mut echelon = Echelon { p, width, rows: HashMap::new() };
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let deg = g.weighted_degree();
        if deg > degree_bound {
            continue;
        }
        for m in monomials.iter().filter(|m| m.weighted_degree() + deg <= degree_bound) {
            echelon.insert(to_vector(g, m));
        }
    }
    let mut target = to_vector(f, &Monomial::one());
    Ok(echelon.reduce(&mut target).is_none())
}
