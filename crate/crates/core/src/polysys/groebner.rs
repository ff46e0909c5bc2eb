//! Buchberger's algorithm with the normal selection strategy on sugar degree
//! and the Gebauer-Moeller installation of the product and chain criteria.

use std::collections::hash_map::Entry;
use std::collections::BinaryHeap;
use std::time::Instant;

use rustc_hash::FxHashMap;

use super::{mul_mod, GroebnerBasis, Monomial, MonomialOrder, MultiPoly};
use crate::error::{Error, Result};

/// Resource limits for one Groebner basis computation.
#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    pub deadline: Option<Instant>,
    /// Upper bound on the number of stored terms (basis plus pending work).
    pub max_terms: Option<usize>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroebnerOutcome {
    Complete(GroebnerBasis),
    /// The budget ran out; `reason` names the exhausted resource.
    BudgetExceeded {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerRun {
    pub outcome: GroebnerOutcome,
    pub spairs_processed: usize,
    pub zero_reductions: usize,
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

/// Reduces `f` by monic `reducers`. With `full` the tail is reduced as well,
/// otherwise only the leading term is eliminated.
///
/// Terms live in a hash accumulator; a max-heap yields the next monomial to
/// inspect. Every monomial added while reducing `m` is smaller than `m`, so
/// a popped monomial never comes back.
fn reduce(f: &MultiPoly, reducers: &[&MultiPoly], full: bool) -> MultiPoly {
    let p = f.prime;
    // Below 2^31 products of residues fit in 62 bits, so sums are reduced
    // only when they approach overflow.
    let lazy = p < 1 << 31;
    let mut acc: FxHashMap<Monomial, u64> = f.terms.iter().copied().collect();
    let mut heap: BinaryHeap<Monomial> = f.terms.iter().map(|t| t.0).collect();
    let mut out = Vec::new();
    while let Some(m) = heap.pop() {
        let c = acc.remove(&m).unwrap_or(0) % p;
        if c == 0 {
            continue;
        }
        match reducers.iter().filter(|g| g.terms[0].0.divides(&m)).min_by_key(|g| g.terms.len()) {
            Some(g) => {
                debug_assert_eq!(g.terms[0].1, 1);
                let q = m.div(&g.terms[0].0);
                let factor = p - c;
                for (gm, gc) in &g.terms[1..] {
                    let term = q.mul(gm);
                    let v = if lazy { gc * factor } else { mul_mod(*gc, factor, p) };
                    match acc.entry(term) {
                        Entry::Occupied(mut e) => {
                            let s = *e.get() + v;
                            *e.get_mut() = if lazy {
                                if s >= 1 << 63 {
                                    s % p
                                } else {
                                    s
                                }
                            } else if s >= p {
                                s - p
                            } else {
                                s
                            };
                        }
                        Entry::Vacant(e) => {
                            e.insert(v);
                            heap.push(term);
                        }
                    }
                }
            }
            None => {
                out.push((m, c));
                if !full {
                    let mut rest: Vec<(Monomial, u64)> =
                        acc.into_iter().map(|(m, c)| (m, c % p)).filter(|&(_, c)| c != 0).collect();
                    rest.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
                    out.extend(rest);
                    break;
                }
            }
        }
    }
    MultiPoly { space: f.space, prime: f.prime, terms: out }
}

/// S-polynomial of two nonzero polynomials.
pub fn s_polynomial(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly> {
    f.check_compatible(g)?;
    let (fm, fc) = *f.leading().ok_or_else(|| Error::Precondition("zero polynomial".into()))?;
    let (gm, gc) = *g.leading().ok_or_else(|| Error::Precondition("zero polynomial".into()))?;
    let lcm = fm.lcm(&gm, &f.space);
    let zero = MultiPoly::zero(f.space, f.prime);
    let p = f.prime;
    let a = zero.axpy(gc, &lcm.div(&fm), f);
    Ok(a.axpy(p - fc, &lcm.div(&gm), g))
}

fn validate(gens: &[MultiPoly]) -> Result<()> {
    let first = gens.first().ok_or(Error::EmptyGenerators)?;
    for g in &gens[1..] {
        first.check_compatible(g)?;
    }
    super::check_prime(first.prime)?;
    if gens.iter().all(MultiPoly::is_zero) {
        return Err(Error::Precondition("all generators are zero".into()));
    }
    Ok(())
}

struct Engine {
    polys: Vec<MultiPoly>,
    sugar: Vec<u32>,
    in_basis: Vec<bool>,
    pairs: Vec<Pair>,
}

impl Engine {
    fn basis_refs(&self) -> Vec<&MultiPoly> {
        self.polys.iter().zip(&self.in_basis).filter_map(|(p, &b)| b.then_some(p)).collect()
    }

    fn lm(&self, i: usize) -> Monomial {
        self.polys[i].terms[0].0
    }

    fn stored_terms(&self) -> usize {
        self.polys.iter().map(MultiPoly::len).sum::<usize>() + self.pairs.len()
    }

    /// Gebauer-Moeller update after inserting the new basis element `h`.
    fn insert(&mut self, h: MultiPoly, sugar: u32) {
        let space = h.space;
        let hi = self.polys.len();
        let hm = h.terms[0].0;
        self.polys.push(h);
        self.sugar.push(sugar);
        self.in_basis.push(false);

        let mut candidates: Vec<Pair> = (0..hi)
            .filter(|&g| self.in_basis[g])
            .map(|g| {
                let gm = self.lm(g);
                let lcm = hm.lcm(&gm, &space);
                let s = (self.sugar[g] + lcm.weighted_degree() - gm.weighted_degree())
                    .max(sugar + lcm.weighted_degree() - hm.weighted_degree());
                Pair { i: g, j: hi, lcm, sugar: s }
            })
            .collect();

        // Chain criterion among the new pairs.
        let mut kept: Vec<Pair> = Vec::new();
        while let Some(pair) = candidates.pop() {
            let coprime = hm.coprime(&self.lm(pair.i));
            let dominated = candidates.iter().chain(kept.iter()).any(|o| o.lcm.divides(&pair.lcm));
            if coprime || !dominated {
                kept.push(pair);
            }
        }
        // Product criterion.
        kept.retain(|pair| !hm.coprime(&self.lm(pair.i)));

        // Chain criterion for old pairs.
        let polys = &self.polys;
        self.pairs.retain(|pair| {
            let li = polys[pair.i].terms[0].0.lcm(&hm, &space);
            let lj = polys[pair.j].terms[0].0.lcm(&hm, &space);
            !(hm.divides(&pair.lcm) && li != pair.lcm && lj != pair.lcm)
        });
        self.pairs.extend(kept);

        for g in 0..hi {
            if self.in_basis[g] && hm.divides(&self.lm(g)) {
                self.in_basis[g] = false;
            }
        }
        self.in_basis[hi] = true;
    }

    fn select(&mut self) -> Option<Pair> {
        let idx = (0..self.pairs.len()).min_by(|&a, &b| {
            let (x, y) = (&self.pairs[a], &self.pairs[b]);
            x.sugar.cmp(&y.sugar).then_with(|| x.lcm.cmp(&y.lcm)).then_with(|| (x.i, x.j).cmp(&(y.i, y.j)))
        })?;
        Some(self.pairs.swap_remove(idx))
    }
}

fn unit_basis(template: &MultiPoly, order: MonomialOrder) -> GroebnerBasis {
    GroebnerBasis { generators: vec![MultiPoly::constant(template.space, template.prime, 1)], order, reduced: true }
}

/// Buchberger run with resource limits. Stops early with `{1}` as soon as a
/// nonzero constant appears.
pub fn groebner_with_budget(gens: &[MultiPoly], order: MonomialOrder, budget: Budget) -> Result<GroebnerRun> {
    validate(gens)?;
    let template = &gens[0];
    let mut engine = Engine { polys: Vec::new(), sugar: Vec::new(), in_basis: Vec::new(), pairs: Vec::new() };
    let mut spairs = 0;
    let mut zero_reductions = 0;
    let done = |basis: GroebnerBasis, spairs, zero_reductions| GroebnerRun {
        outcome: GroebnerOutcome::Complete(basis),
        spairs_processed: spairs,
        zero_reductions,
    };

    let mut inputs: Vec<&MultiPoly> = gens.iter().filter(|g| !g.is_zero()).collect();
    inputs.sort_by(|a, b| a.terms[0].0.cmp(&b.terms[0].0));
    for g in inputs {
        let h = reduce(g, &engine.basis_refs(), true);
        if h.is_zero() {
            continue;
        }
        if h.is_unit() {
            return Ok(done(unit_basis(template, order), spairs, zero_reductions));
        }
        let sugar = g.weighted_degree();
        engine.insert(h.monic(), sugar);
    }

    while let Some(pair) = engine.select() {
        if let Some(deadline) = budget.deadline {
            if Instant::now() >= deadline {
                return Ok(GroebnerRun {
                    outcome: GroebnerOutcome::BudgetExceeded { reason: "time".into() },
                    spairs_processed: spairs,
                    zero_reductions,
                });
            }
        }
        if let Some(limit) = budget.max_terms {
            if engine.stored_terms() > limit {
                return Ok(GroebnerRun {
                    outcome: GroebnerOutcome::BudgetExceeded { reason: "memory".into() },
                    spairs_processed: spairs,
                    zero_reductions,
                });
            }
        }
        spairs += 1;
        let s = s_polynomial(&engine.polys[pair.i], &engine.polys[pair.j])?;
        let h = reduce(&s, &engine.basis_refs(), true);
        if h.is_zero() {
            zero_reductions += 1;
            continue;
        }
        if h.is_unit() {
            return Ok(done(unit_basis(template, order), spairs, zero_reductions));
        }
        engine.insert(h.monic(), pair.sugar);
    }

    // Minimal basis: the update already dropped elements whose leading
    // monomial became divisible; interreduce the tails.
    let basis: Vec<MultiPoly> = engine.basis_refs().into_iter().cloned().collect();
    let mut reduced: Vec<MultiPoly> = basis
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let others: Vec<&MultiPoly> = basis.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, o)| o).collect();
            let tail = MultiPoly { space: g.space, prime: g.prime, terms: g.terms[1..].to_vec() };
            let mut r = reduce(&tail, &others, true);
            r.terms.insert(0, g.terms[0]);
            r.monic()
        })
        .collect();
    reduced.sort_by(|a, b| b.terms[0].0.cmp(&a.terms[0].0));
    Ok(done(GroebnerBasis { generators: reduced, order, reduced: true }, spairs, zero_reductions))
}

/// Reduced Groebner basis of the ideal generated by `gens`.
pub fn reduced_groebner(gens: &[MultiPoly], order: MonomialOrder) -> Result<GroebnerBasis> {
    match groebner_with_budget(gens, order, Budget::unlimited())?.outcome {
        GroebnerOutcome::Complete(gb) => Ok(gb),
        GroebnerOutcome::BudgetExceeded { .. } => unreachable!("unlimited budget"),
    }
}

/// Remainder of `f` on division by the reduced basis `gb`; zero iff `f`
/// lies in the ideal.
pub fn normal_form(f: &MultiPoly, gb: &GroebnerBasis) -> Result<MultiPoly> {
    if !gb.reduced {
        return Err(Error::Precondition("normal form needs a reduced basis".into()));
    }
    for g in &gb.generators {
        f.check_compatible(g)?;
    }
    let refs: Vec<&MultiPoly> = gb.generators.iter().collect();
    Ok(reduce(f, &refs, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysys::VarSpace;

    fn sp(k: usize) -> VarSpace {
        VarSpace::new(k, 1).unwrap()
    }

    fn parse(s: &str, k: usize) -> MultiPoly {
        MultiPoly::parse(s, sp(k), 101).unwrap()
    }

    #[test]
    fn unit_ideal_from_contradiction() {
        let gens = vec![parse("c[1][1] + c[2][1]", 2), parse("c[1][1]^2 + c[2][1]^2", 2), parse("c[1][1] + 100", 2)];
        let gb = reduced_groebner(&gens, MonomialOrder::WeightedGrevlex).unwrap();
        assert!(gb.is_unit());
    }

    #[test]
    fn single_generator_is_its_own_basis() {
        let f = parse("c[1][1]^2 + 100*c[2][1]", 2);
        let gb = reduced_groebner(std::slice::from_ref(&f), MonomialOrder::WeightedGrevlex).unwrap();
        assert_eq!(gb.generators, vec![f]);
    }

    #[test]
    fn variables_are_reduced() {
        let gb = reduced_groebner(&[parse("c[2][1]", 2), parse("c[1][1]", 2)], MonomialOrder::default()).unwrap();
        assert_eq!(gb.generators, vec![parse("c[1][1]", 2), parse("c[2][1]", 2)]);
    }

    #[test]
    fn normal_form_examples() {
        let gb = reduced_groebner(&[parse("c[1][1]", 2)], MonomialOrder::default()).unwrap();
        assert!(normal_form(&parse("c[1][1]^2", 2), &gb).unwrap().is_zero());
        assert_eq!(normal_form(&parse("c[2][1]", 2), &gb).unwrap(), parse("c[2][1]", 2));

        let gb = reduced_groebner(&[parse("c[1][1] + 100", 2)], MonomialOrder::default()).unwrap();
        let r = normal_form(&parse("c[1][1]*c[2][1] + c[2][1]", 2), &gb).unwrap();
        assert_eq!(r, parse("2*c[2][1]", 2));
    }

    #[test]
    fn errors() {
        assert_eq!(reduced_groebner(&[], MonomialOrder::default()), Err(Error::EmptyGenerators));
        let a = MultiPoly::var(sp(2), 101, 1, 1);
        let b = MultiPoly::var(sp(2), 103, 1, 1);
        assert!(matches!(reduced_groebner(&[a, b], MonomialOrder::default()), Err(Error::Incompatible(_))));
    }

    #[test]
    fn twisted_cubic_basis() {
        // <y - x^2, z - x^3> in grevlex with x > y > z.
        let f = parse("c[2][1] + 100*c[1][1]^2", 3);
        let g = parse("c[3][1] + 100*c[1][1]^3", 3);
        let gb = reduced_groebner(&[f.clone(), g.clone()], MonomialOrder::default()).unwrap();
        for h in [&f, &g] {
            assert!(normal_form(h, &gb).unwrap().is_zero());
        }
        for a in &gb.generators {
            for b in &gb.generators {
                if a != b {
                    let s = s_polynomial(a, b).unwrap();
                    assert!(normal_form(&s, &gb).unwrap().is_zero());
                }
            }
        }
        let again = reduced_groebner(&gb.generators, MonomialOrder::default()).unwrap();
        assert_eq!(again, gb);
    }

    #[test]
    fn zero_budget_times_out() {
        let f = parse("c[2][1] + 100*c[1][1]^2", 3);
        let g = parse("c[3][1] + 100*c[1][1]^3", 3);
        let run = groebner_with_budget(
            &[f, g],
            MonomialOrder::default(),
            Budget { deadline: Some(Instant::now()), max_terms: None },
        )
        .unwrap();
        assert!(matches!(run.outcome, GroebnerOutcome::BudgetExceeded { .. }));
    }
}
