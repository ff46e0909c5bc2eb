//! Text and JSON encodings of [`MultiPoly`].
//!
//! Text: terms in decreasing order joined by ` + `, each written as
//! `coeff*c[i][j]^e*...` with the coefficient in `[0, p)` and `^1` omitted.
//! The zero polynomial is `0`.

use serde::{Deserialize, Serialize};

use super::{Monomial, MultiPoly, VarSpace};
use crate::error::{Error, Result};

/// JSON term list: `{"prime", "blocks", "slots", "terms": [[coeff, [exps]]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub prime: u64,
    pub blocks: usize,
    pub slots: usize,
    pub terms: Vec<(u64, Vec<u32>)>,
}

impl MultiPoly {
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let space = self.space;
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut s = c.to_string();
                for var in 0..space.nvars() {
                    let e = m.exponent(var);
                    if e == 0 {
                        continue;
                    }
                    let (i, j) = space.position(var);
                    s.push_str(&format!("*c[{i}][{j}]"));
                    if e > 1 {
                        s.push_str(&format!("^{e}"));
                    }
                }
                s
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parses the text form. Coefficients may be any integers (reduced mod
    /// `p`); a term may omit its coefficient and a factor may repeat.
    pub fn parse(text: &str, space: VarSpace, prime: u64) -> Result<MultiPoly> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        for term in split_terms(&compact)? {
            terms.push(parse_term(&term, &space, prime)?);
        }
        Ok(MultiPoly::from_residues(space, prime, terms))
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            prime: self.prime,
            blocks: self.space.blocks,
            slots: self.space.slots,
            terms: self.terms.iter().map(|(m, c)| (*c, m.exponents(&self.space))).collect(),
        }
    }

    pub fn from_json(json: &PolyJson) -> Result<MultiPoly> {
        let space = VarSpace::new(json.blocks, json.slots)?;
        super::check_prime(json.prime)?;
        let terms = json
            .terms
            .iter()
            .map(|(c, e)| Ok((Monomial::from_exponents(&space, e)?, *c % json.prime)))
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiPoly::from_residues(space, json.prime, terms))
    }
}

/// Splits on top-level `+` and `-`, keeping the sign with each term.
fn split_terms(s: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            _ => {}
        }
        if depth == 0 && (ch == '+' || ch == '-') && !current.is_empty() && !current.ends_with('^') {
            out.push(std::mem::take(&mut current));
        }
        if !(depth == 0 && ch == '+') {
            current.push(ch);
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced brackets in `{s}`")));
    }
    if !current.is_empty() {
        out.push(current);
    }
    Ok(out)
}

fn parse_term(term: &str, space: &VarSpace, prime: u64) -> Result<(Monomial, u64)> {
    let (negative, body) = match term.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, term),
    };
    if body.is_empty() {
        return Err(Error::Parse("dangling sign".into()));
    }
    let mut coeff: u64 = 1;
    let mut exps = vec![0u32; space.nvars()];
    for factor in body.split('*') {
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in `{term}`")));
        }
        if let Some(rest) = factor.strip_prefix("c[") {
            let (var, exp) = parse_variable(rest, space, factor)?;
            exps[var] += exp;
        } else {
            let value: u128 = factor.parse().map_err(|_| Error::Parse(format!("bad coefficient `{factor}`")))?;
            coeff = ((coeff as u128 * (value % prime as u128)) % prime as u128) as u64;
        }
    }
    if negative {
        coeff = (prime - coeff % prime) % prime;
    }
    Ok((Monomial::from_exponents(space, &exps)?, coeff))
}

fn parse_variable(rest: &str, space: &VarSpace, factor: &str) -> Result<(usize, u32)> {
    let bad = || Error::Parse(format!("bad variable `{factor}`"));
    let (i, rest) = rest.split_once(']').ok_or_else(bad)?;
    let rest = rest.strip_prefix('[').ok_or_else(bad)?;
    let (j, rest) = rest.split_once(']').ok_or_else(bad)?;
    let i: usize = i.parse().map_err(|_| bad())?;
    let j: usize = j.parse().map_err(|_| bad())?;
    if !(1..=space.blocks).contains(&i) || !(1..=space.slots).contains(&j) {
        return Err(Error::Parse(format!("variable `{factor}` outside {space:?}")));
    }
    let exp = match rest.strip_prefix('^') {
        Some(e) => e.parse().map_err(|_| bad())?,
        None if rest.is_empty() => 1,
        None => return Err(bad()),
    };
    Ok((space.index(i, j), exp))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form() {
        let s = VarSpace::new(2, 2).unwrap();
        let f = MultiPoly::parse("3*c[1][2]^2*c[2][1] - 1 + c[1][1]", s, 7).unwrap();
        assert_eq!(f.to_text(), "3*c[1][2]^2*c[2][1] + 1*c[1][1] + 6");
        assert_eq!(MultiPoly::parse(&f.to_text(), s, 7).unwrap(), f);
        assert_eq!(MultiPoly::zero(s, 7).to_text(), "0");
        assert!(MultiPoly::parse("0", s, 7).unwrap().is_zero());
    }

    #[test]
    fn parse_errors() {
        let s = VarSpace::new(1, 1).unwrap();
        for bad in ["", "c[2][1]", "c[1][1]^", "2**c[1][1]", "c[1", "x"] {
            assert!(MultiPoly::parse(bad, s, 101).is_err(), "{bad}");
        }
    }

    #[test]
    fn json_form() {
        let s = VarSpace::new(2, 1).unwrap();
        let f = MultiPoly::parse("c[1][1]^2 + 5*c[2][1]", s, 101).unwrap();
        let json = serde_json::to_string(&f.to_json()).unwrap();
        assert_eq!(json, r#"{"prime":101,"blocks":2,"slots":1,"terms":[[1,[2,0]],[5,[0,1]]]}"#);
        let back: PolyJson = serde_json::from_str(&json).unwrap();
        assert_eq!(MultiPoly::from_json(&back).unwrap(), f);
    }
}
