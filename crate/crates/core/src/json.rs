//! JSON encodings shared by certificates, reports and CLI inputs.
//!
//! Complex numbers are written as `[re, im]`. On input a plain number is
//! accepted wherever a complex number is expected.

use serde::de::Deserializer;
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{Mat, MatC, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonScalar {
    Real(f64),
    Complex([f64; 2]),
}

impl From<JsonScalar> for C64 {
    fn from(s: JsonScalar) -> C64 {
        match s {
            JsonScalar::Real(x) => C64::new(x, 0.0),
            JsonScalar::Complex([re, im]) => C64::new(re, im),
        }
    }
}

pub fn pair(z: C64) -> [f64; 2] {
    // -0.0 prints as "-0.0"; normalize so equal values serialize identically
    [z.re + 0.0, z.im + 0.0]
}

pub fn vec_to_json(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().copied().map(pair).collect()
}

pub fn mat_to_json(m: &MatC) -> Vec<Vec<[f64; 2]>> {
    m.to_rows().iter().map(|r| vec_to_json(r)).collect()
}

pub fn mat_from_json(rows: &[Vec<JsonScalar>]) -> Result<MatC> {
    let rows: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().copied().map(C64::from).collect()).collect();
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix".into()));
    }
    Mat::from_rows(rows)
}

/// `#[serde(with = "c64")]` for a single complex number.
pub mod c64 {
    use super::*;

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
        pair(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<C64, D::Error> {
        Ok(JsonScalar::deserialize(d)?.into())
    }
}

/// `#[serde(with = "c64_vec")]` for a vector of complex numbers.
pub mod c64_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
        vec_to_json(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<C64>, D::Error> {
        Ok(Vec::<JsonScalar>::deserialize(d)?.into_iter().map(C64::from).collect())
    }
}
