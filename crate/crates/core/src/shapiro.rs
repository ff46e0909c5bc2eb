//! Inductive verification of the monic power-sum conjecture.
//!
//! For forms of degree `e` the ideal generated by the coefficients `r_l` of
//! `f_1^d + ... + f_k^d - k x^{de}` and by `c[1][e] - 1` is the unit ideal
//! exactly when no solution has a nonzero last coefficient. Together with
//! the statement for degree `e - 1` (the all-zero branch) this proves the
//! statement for degree `e`. The degree-one base case with `k = d` reduces
//! to Newton's identities.

use std::time::{Duration, Instant};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::decompose::newton_power_to_elementary;
use crate::error::{Error, Result};
use crate::polysys::{
    expand_monic_powersum, groebner_with_budget, Budget, GroebnerOutcome, Monomial, MonomialOrder, MultiPoly, VarSpace,
};
use crate::Rational;

/// Environment variable overriding the per-step time budget, in seconds
/// (suffixes `s`, `m`, `h` accepted).
pub const TIME_BUDGET_ENV: &str = "MONIC_RANK_TIME_BUDGET";
pub const DEFAULT_TIME_BUDGET: Duration = Duration::from_secs(3600);
pub const DEFAULT_MEMORY_BYTES: u64 = 8 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Proved,
    Inconclusive,
    Timeout,
}

impl Verdict {
    pub fn is_proved(self) -> bool {
        self == Verdict::Proved
    }
}

/// Per-step resource limits. Memory is enforced through the number of
/// stored polynomial terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepBudget {
    pub time: Duration,
    pub memory_bytes: u64,
}

impl Default for StepBudget {
    fn default() -> Self {
        StepBudget { time: DEFAULT_TIME_BUDGET, memory_bytes: DEFAULT_MEMORY_BYTES }
    }
}

impl StepBudget {
    /// Defaults with the time overridden by [`TIME_BUDGET_ENV`] when set.
    pub fn from_env() -> Result<Self> {
        let mut budget = StepBudget::default();
        if let Ok(raw) = std::env::var(TIME_BUDGET_ENV) {
            budget.time = parse_duration(&raw)?;
        }
        Ok(budget)
    }

    fn max_terms(&self) -> usize {
        (self.memory_bytes / std::mem::size_of::<(Monomial, u64)>() as u64) as usize
    }
}

/// Parses `90`, `90s`, `15m` or `2h`.
pub fn parse_duration(raw: &str) -> Result<Duration> {
    let raw = raw.trim();
    let (digits, unit) = match raw.char_indices().find(|(_, c)| !c.is_ascii_digit() && *c != '.') {
        Some((i, _)) => raw.split_at(i),
        None => (raw, "s"),
    };
    let value: f64 = digits.parse().map_err(|_| Error::Parse(format!("bad duration `{raw}`")))?;
    let scale = match unit {
        "s" => 1.0,
        "m" => 60.0,
        "h" => 3600.0,
        _ => return Err(Error::Parse(format!("bad duration unit in `{raw}`"))),
    };
    if !(value * scale).is_finite() || value < 0.0 {
        return Err(Error::Parse(format!("bad duration `{raw}`")));
    }
    Ok(Duration::from_secs_f64(value * scale))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub k: usize,
    pub d: usize,
    pub e: usize,
    pub p: u64,
    pub verdict: Verdict,
    /// Reduced basis in text form; empty on timeout.
    pub basis: Vec<String>,
    pub basis_size: usize,
    pub spairs_processed: usize,
    pub order: String,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub k: usize,
    pub d: usize,
    pub e_max: usize,
    pub p: u64,
    pub base_case_ok: bool,
    pub steps: Vec<StepReport>,
    pub overall: Verdict,
}

/// Generators for the degree-`e` step: `r_1, ..., r_{de}` and `c[1][e] - 1`.
pub fn step_ideal(k: usize, d: usize, e: usize, p: u64) -> Result<Vec<MultiPoly>> {
    let mut gens = expand_monic_powersum(k, d, e, p)?;
    let space = VarSpace::new(k, e)?;
    gens.push(MultiPoly::var(space, p, 1, e).sub(&MultiPoly::constant(space, p, 1))?);
    Ok(gens)
}

/// Normalizing block 1 is only sound if the `r_l` are symmetric in the blocks.
fn check_block_symmetry(rs: &[MultiPoly], k: usize) -> Result<()> {
    if k < 2 {
        return Ok(());
    }
    let swap: Vec<usize> = (0..k).map(|i| if i < 2 { 1 - i } else { i }).collect();
    let cycle: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
    for r in rs {
        if r.permute_blocks(&swap) != *r || r.permute_blocks(&cycle) != *r {
            return Err(Error::Precondition(format!("coefficient {r} is not block symmetric")));
        }
    }
    Ok(())
}

pub fn verify_step(k: usize, d: usize, e: usize, p: u64) -> Result<StepReport> {
    verify_step_with_budget(k, d, e, p, &StepBudget::default())
}

pub fn verify_step_with_budget(k: usize, d: usize, e: usize, p: u64, budget: &StepBudget) -> Result<StepReport> {
    if e < 2 {
        return Err(Error::Precondition("steps start at e = 2; degree one is the base case".into()));
    }
    let start = Instant::now();
    let gens = step_ideal(k, d, e, p)?;
    check_block_symmetry(&gens[..gens.len() - 1], k)?;
    let order = MonomialOrder::WeightedGrevlex;
    let run = groebner_with_budget(
        &gens,
        order,
        Budget { deadline: Some(start + budget.time), max_terms: Some(budget.max_terms()) },
    )?;
    let (verdict, basis) = match run.outcome {
        GroebnerOutcome::Complete(gb) => {
            let verdict = if gb.is_unit() { Verdict::Proved } else { Verdict::Inconclusive };
            (verdict, gb.generators.iter().map(MultiPoly::to_text).collect())
        }
        GroebnerOutcome::BudgetExceeded { .. } => (Verdict::Timeout, Vec::new()),
    };
    Ok(StepReport {
        k,
        d,
        e,
        p,
        verdict,
        basis_size: basis.len(),
        basis,
        spairs_processed: run.spairs_processed,
        order: order.name().to_string(),
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Degree-one case for `k = d`: `sum (x + a_i y)^d = d x^d` forces every
/// power sum of the `a_i` to vanish, and Newton's identities then force the
/// elementary symmetric functions to vanish, so all `a_i = 0`.
pub fn certify_base_case(k: usize, d: usize) -> Result<bool> {
    if k != d {
        return Err(Error::BaseCaseUnsupported);
    }
    let power_sums = vec![Rational::zero(); d];
    let elementary = newton_power_to_elementary(&power_sums)?;
    Ok(elementary.len() == d && elementary.iter().all(Zero::is_zero))
}

pub fn verify_chain(k: usize, d: usize, e_max: usize, p: u64) -> Result<ChainReport> {
    verify_chain_with_budget(k, d, e_max, p, &StepBudget::default())
}

/// Base case then steps `e = 2..=e_max`, stopping at the first step that is
/// not proved.
pub fn verify_chain_with_budget(k: usize, d: usize, e_max: usize, p: u64, budget: &StepBudget) -> Result<ChainReport> {
    if e_max < 1 {
        return Err(Error::Precondition("e_max must be at least 1".into()));
    }
    let base_case_ok = certify_base_case(k, d)?;
    let mut steps = Vec::new();
    let mut overall = if base_case_ok { Verdict::Proved } else { Verdict::Inconclusive };
    if base_case_ok {
        for e in 2..=e_max {
            let step = verify_step_with_budget(k, d, e, p, budget)?;
            let verdict = step.verdict;
            steps.push(step);
            if !verdict.is_proved() {
                overall = verdict;
                break;
            }
        }
    }
    Ok(ChainReport { k, d, e_max, p, base_case_ok, steps, overall })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_steps_prove() {
        for (k, d, e) in [(2, 2, 2), (3, 3, 2), (1, 1, 3)] {
            let r = verify_step(k, d, e, 101).unwrap();
            assert_eq!(r.verdict, Verdict::Proved, "{k} {d} {e}");
            assert_eq!(r.basis, vec!["1".to_string()]);
            assert_eq!(r.order, "weighted-grevlex");
        }
    }

    #[test]
    fn step_preconditions() {
        assert!(matches!(verify_step(2, 2, 1, 101), Err(Error::Precondition(_))));
        assert!(matches!(verify_step(2, 2, 2, 3), Err(Error::PrimeTooSmall { .. })));
    }

    #[test]
    fn chains() {
        let r = verify_chain(1, 1, 5, 101).unwrap();
        assert!(r.base_case_ok);
        assert_eq!(r.steps.len(), 4);
        assert_eq!(r.overall, Verdict::Proved);
        let r = verify_chain(2, 2, 1, 101).unwrap();
        assert!(r.steps.is_empty());
        assert_eq!(r.overall, Verdict::Proved);
        assert!(matches!(verify_chain(2, 3, 2, 101), Err(Error::BaseCaseUnsupported)));
    }

    #[test]
    fn zero_budget_times_out() {
        let budget = StepBudget { time: Duration::ZERO, memory_bytes: DEFAULT_MEMORY_BYTES };
        let r = verify_step_with_budget(3, 3, 3, 101, &budget).unwrap();
        assert_eq!(r.verdict, Verdict::Timeout);
        assert!(r.basis.is_empty());
    }

    #[test]
    fn durations() {
        assert_eq!(parse_duration("90").unwrap(), Duration::from_secs(90));
        assert_eq!(parse_duration("2m").unwrap(), Duration::from_secs(120));
        assert_eq!(parse_duration("1.5h").unwrap(), Duration::from_secs(5400));
        assert!(parse_duration("x").is_err());
        assert!(parse_duration("5d").is_err());
    }

    #[test]
    fn report_json_shape() {
        let r = verify_step(2, 2, 2, 101).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in ["k", "d", "e", "p", "verdict", "basis", "elapsed_ms"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["verdict"], "PROVED");
    }
}
