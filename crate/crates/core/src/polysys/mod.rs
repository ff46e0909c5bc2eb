//! Sparse multivariate polynomials over a prime field.
//!
//! Variables are the coefficients `c[i][j]` of `k` monic binary forms of
//! degree `e` (`i` in `1..=k` is the block, `j` in `1..=e` the slot). The
//! variable `c[i][j]` carries weight `j`, the grading induced by the torus
//! action on binary forms. Terms are ordered by the weighted
//! graded-reverse-lexicographic order with `c[1][1] > c[1][2] > ... > c[k][e]`.

mod format;
mod groebner;
mod macaulay;
mod powersum;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::is_prime;

pub use format::PolyJson;
pub use groebner::{
    groebner_with_budget, normal_form, reduced_groebner, s_polynomial, Budget, GroebnerOutcome, GroebnerRun,
};
pub use macaulay::{macaulay_membership_oracle, MAX_ORACLE_BOUND, MAX_ORACLE_VARS};
pub use powersum::{expand_monic_powersum, expand_monic_powersum_unchecked};

/// Largest number of variables a [`Monomial`] can hold.
pub const MAX_VARS: usize = 16;

/// Variable universe `c[i][j]`, `1 <= i <= blocks`, `1 <= j <= slots`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarSpace {
    pub blocks: usize,
    pub slots: usize,
}

impl VarSpace {
    pub fn new(blocks: usize, slots: usize) -> Result<Self> {
        if blocks == 0 || slots == 0 {
            return Err(Error::Precondition("variable universe must be non-empty".into()));
        }
        if blocks * slots > MAX_VARS {
            return Err(Error::Precondition(format!(
                "{} variables exceed the supported maximum of {MAX_VARS}",
                blocks * slots
            )));
        }
        Ok(VarSpace { blocks, slots })
    }

    pub fn nvars(&self) -> usize {
        self.blocks * self.slots
    }

    /// Index of `c[block][slot]` (both one-based).
    pub fn index(&self, block: usize, slot: usize) -> usize {
        debug_assert!((1..=self.blocks).contains(&block) && (1..=self.slots).contains(&slot));
        (block - 1) * self.slots + (slot - 1)
    }

    /// `(block, slot)` of a variable index, one-based.
    pub fn position(&self, var: usize) -> (usize, usize) {
        (var / self.slots + 1, var % self.slots + 1)
    }

    pub fn weight(&self, var: usize) -> u32 {
        (var % self.slots + 1) as u32
    }
}

/// Exponent vector over a fixed [`VarSpace`], with its weighted degree cached.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    wdeg: u32,
    mask: u16,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: [0; MAX_VARS], wdeg: 0, mask: 0 }
    }

    pub fn from_exponents(space: &VarSpace, exponents: &[u32]) -> Result<Self> {
        if exponents.len() != space.nvars() {
            return Err(Error::Incompatible(format!("{} exponents for {} variables", exponents.len(), space.nvars())));
        }
        let mut m = Self::one();
        for (i, &e) in exponents.iter().enumerate() {
            let e = u16::try_from(e).map_err(|_| Error::Precondition(format!("exponent {e} too large")))?;
            m.exps[i] = e;
        }
        m.refresh(space);
        Ok(m)
    }

    pub fn var(space: &VarSpace, var: usize, exp: u16) -> Self {
        let mut m = Self::one();
        m.exps[var] = exp;
        m.refresh(space);
        m
    }

    fn refresh(&mut self, space: &VarSpace) {
        self.wdeg = 0;
        self.mask = 0;
        for (i, &e) in self.exps.iter().enumerate().take(space.nvars()) {
            self.wdeg += e as u32 * space.weight(i);
            if e > 0 {
                self.mask |= 1 << i;
            }
        }
    }

    pub fn exponents(&self, space: &VarSpace) -> Vec<u32> {
        self.exps[..space.nvars()].iter().map(|&e| e as u32).collect()
    }

    pub fn exponent(&self, var: usize) -> u16 {
        self.exps[var]
    }

    pub fn weighted_degree(&self) -> u32 {
        self.wdeg
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.mask == 0
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.mask & !other.mask == 0
            && self.wdeg <= other.wdeg
            && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u16; MAX_VARS];
        for (i, e) in exps.iter_mut().enumerate() {
            *e = self.exps[i] + other.exps[i];
        }
        Monomial { exps, wdeg: self.wdeg + other.wdeg, mask: self.mask | other.mask }
    }

    /// `self / other`; caller guarantees divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        let mut exps = [0u16; MAX_VARS];
        let mut mask = 0;
        for (i, e) in exps.iter_mut().enumerate() {
            *e = self.exps[i] - other.exps[i];
            if *e > 0 {
                mask |= 1 << i;
            }
        }
        Monomial { exps, wdeg: self.wdeg - other.wdeg, mask }
    }

    pub fn lcm(&self, other: &Monomial, space: &VarSpace) -> Monomial {
        let mut m = Self::one();
        for i in 0..MAX_VARS {
            m.exps[i] = self.exps[i].max(other.exps[i]);
        }
        m.refresh(space);
        m
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.mask & other.mask == 0
    }

    /// Weighted graded reverse lexicographic comparison.
    pub fn cmp_order(&self, other: &Monomial) -> Ordering {
        match self.wdeg.cmp(&other.wdeg) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for i in (0..MAX_VARS).rev() {
            match self.exps[i].cmp(&other.exps[i]) {
                Ordering::Equal => continue,
                // A larger exponent in the last differing variable makes the
                // monomial smaller.
                ord => return ord.reverse(),
            }
        }
        Ordering::Equal
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_order(other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.exps[..(16 - self.exps.iter().rev().take_while(|&&e| e == 0).count())])
    }
}

/// Term order used by every Groebner computation in this crate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic order with the weighted grading
    /// (`c[i][j]` has weight `j`); variables ordered block-major.
    #[default]
    #[serde(rename = "weighted-grevlex")]
    WeightedGrevlex,
}

impl MonomialOrder {
    pub fn name(&self) -> &'static str {
        match self {
            MonomialOrder::WeightedGrevlex => "weighted-grevlex",
        }
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    if p <= u32::MAX as u64 {
        // operands are reduced, so the product fits in 64 bits
        a * b % p
    } else {
        ((a as u128 * b as u128) % p as u128) as u64
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Polynomial over `F_p` in the variables of a [`VarSpace`].
///
/// Terms are stored strictly decreasing in [`MonomialOrder::WeightedGrevlex`]
/// with coefficients in `[1, p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    space: VarSpace,
    prime: u64,
    terms: Vec<(Monomial, u64)>,
}

impl MultiPoly {
    pub fn zero(space: VarSpace, prime: u64) -> Self {
        MultiPoly { space, prime, terms: Vec::new() }
    }

    pub fn constant(space: VarSpace, prime: u64, c: i64) -> Self {
        Self::from_terms(space, prime, vec![(Monomial::one(), c)])
    }

    /// The variable `c[block][slot]`.
    pub fn var(space: VarSpace, prime: u64, block: usize, slot: usize) -> Self {
        MultiPoly { space, prime, terms: vec![(Monomial::var(&space, space.index(block, slot), 1), 1 % prime)] }
    }

    /// Collects signed terms, combining duplicates and dropping zeros.
    pub fn from_terms(space: VarSpace, prime: u64, terms: Vec<(Monomial, i64)>) -> Self {
        let reduced = terms.into_iter().map(|(m, c)| (m, c.rem_euclid(prime as i64) as u64)).collect();
        Self::from_residues(space, prime, reduced)
    }

    pub(crate) fn from_residues(space: VarSpace, prime: u64, mut terms: Vec<(Monomial, u64)>) -> Self {
        terms.sort_by_key(|t| std::cmp::Reverse(t.0));
        let mut out: Vec<(Monomial, u64)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((last, acc)) if *last == m => *acc = (*acc + c) % prime,
                _ => out.push((m, c % prime)),
            }
        }
        out.retain(|&(_, c)| c != 0);
        MultiPoly { space, prime, terms: out }
    }

    pub fn space(&self) -> VarSpace {
        self.space
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn terms(&self) -> &[(Monomial, u64)] {
        &self.terms
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn leading(&self) -> Option<&(Monomial, u64)> {
        self.terms.first()
    }

    /// Largest weighted degree among the terms, 0 for the zero polynomial.
    pub fn weighted_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.weighted_degree()).max().unwrap_or(0)
    }

    fn check_compatible(&self, other: &MultiPoly) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::Incompatible(format!("primes {} and {}", self.prime, other.prime)));
        }
        if self.space != other.space {
            return Err(Error::Incompatible(format!("variable universes {:?} and {:?}", self.space, other.space)));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        Ok(self.axpy(1, &Monomial::one(), other))
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        Ok(self.axpy(self.prime - 1, &Monomial::one(), other))
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                terms.push((ma.mul(mb), mul_mod(*ca, *cb, self.prime)));
            }
        }
        Ok(Self::from_residues(self.space, self.prime, terms))
    }

    pub fn scale(&self, c: u64) -> MultiPoly {
        let c = c % self.prime;
        if c == 0 {
            return Self::zero(self.space, self.prime);
        }
        MultiPoly {
            space: self.space,
            prime: self.prime,
            terms: self.terms.iter().map(|&(m, x)| (m, mul_mod(x, c, self.prime))).collect(),
        }
    }

    /// Rescales so the leading coefficient is 1.
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            Some(&(_, lc)) if lc != 1 => self.scale(inv_mod(lc, self.prime)),
            _ => self.clone(),
        }
    }

    /// `self + c * m * other`, merging the sorted term lists.
    pub(crate) fn axpy(&self, c: u64, m: &Monomial, other: &MultiPoly) -> MultiPoly {
        let p = self.prime;
        let mut out = Vec::with_capacity(self.len() + other.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().map(|(mb, cb)| (m.mul(mb), mul_mod(*cb, c, p))).peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    Ordering::Greater => out.push(*a.next().unwrap()),
                    Ordering::Less => out.push(b.next().unwrap()),
                    Ordering::Equal => {
                        let s = (x.1 + y.1) % p;
                        let mono = x.0;
                        a.next();
                        b.next();
                        if s != 0 {
                            out.push((mono, s));
                        }
                    }
                },
                (Some(_), None) => out.push(*a.next().unwrap()),
                (None, Some(_)) => out.push(b.next().unwrap()),
                (None, None) => break,
            }
        }
        MultiPoly { space: self.space, prime: self.prime, terms: out }
    }

    /// Evaluates at a point of `F_p^n`.
    pub fn eval(&self, point: &[u64]) -> u64 {
        let p = self.prime;
        self.terms.iter().fold(0, |acc, (m, c)| {
            let v = (0..self.space.nvars()).fold(*c, |v, i| mul_mod(v, pow_mod(point[i], m.exponent(i) as u64, p), p));
            (acc + v) % p
        })
    }

    /// Renames variables by permuting blocks: `c[i][j] -> c[perm[i-1]+1][j]`.
    pub fn permute_blocks(&self, perm: &[usize]) -> MultiPoly {
        let space = self.space;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = vec![0u32; space.nvars()];
                for var in 0..space.nvars() {
                    let (block, slot) = space.position(var);
                    exps[space.index(perm[block - 1] + 1, slot)] = m.exponent(var) as u32;
                }
                (Monomial::from_exponents(&space, &exps).expect("same universe"), *c)
            })
            .collect();
        Self::from_residues(space, self.prime, terms)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly(F_{}: {})", self.prime, self.to_text())
    }
}

/// `true` iff every term has weighted degree `weight`. The zero polynomial
/// is homogeneous of every weight.
pub fn is_weighted_homogeneous(f: &MultiPoly, weight: u32) -> bool {
    f.terms.iter().all(|(m, _)| m.weighted_degree() == weight)
}

/// Reduced Groebner basis together with the order it was computed for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub generators: Vec<MultiPoly>,
    pub order: MonomialOrder,
    pub reduced: bool,
}

impl GroebnerBasis {
    /// The basis `{1}`, i.e. the unit ideal.
    pub fn is_unit(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_unit()
    }
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}
