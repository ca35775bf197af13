//! JSON documents read and written by the command-line tool.
//!
//! Integers that may exceed a machine word travel as decimal strings. Input
//! integers may also be given as plain JSON numbers.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use skolem_core::Lrs;

/// An arbitrary-precision integer, written as a decimal string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WireInt(pub BigInt);

impl Serialize for WireInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

struct WireIntVisitor;

impl<'de> Visitor<'de> for WireIntVisitor {
    type Value = WireInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<WireInt, E> {
        Ok(WireInt(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<WireInt, E> {
        Ok(WireInt(v.into()))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<WireInt, E> {
        Err(E::custom(format!(
            "{v} is not an exact integer; write large values as decimal strings"
        )))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<WireInt, E> {
        v.trim()
            .parse::<BigInt>()
            .map(WireInt)
            .map_err(|_| E::custom(format!("{v:?} is not a decimal integer")))
    }
}

impl<'de> Deserialize<'de> for WireInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(WireIntVisitor)
    }
}

impl From<&BigUint> for WireInt {
    fn from(n: &BigUint) -> Self {
        WireInt(BigInt::from(n.clone()))
    }
}

fn decimal<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

fn decimals<S: Serializer>(ns: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(ns.iter().map(|n| n.to_string()))
}

/// `u_{n+d} = coeffs[d-1] u_{n+d-1} + ... + coeffs[0] u_n` with `u_i = initial[i]`,
/// searched over `0 <= n <= bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemInstance {
    pub order: usize,
    pub coeffs: Vec<WireInt>,
    pub initial: Vec<WireInt>,
    pub bound: WireInt,
}

impl ProblemInstance {
    pub fn new(u: &Lrs, bound: &BigUint) -> Self {
        Self {
            order: u.order(),
            coeffs: u.coeffs().iter().cloned().map(WireInt).collect(),
            initial: u.initial().iter().cloned().map(WireInt).collect(),
            bound: bound.into(),
        }
    }

    /// Checks the declared order and the sign of the bound.
    pub fn to_problem(&self) -> Result<(Lrs, BigUint), String> {
        if self.order == 0 {
            return Err("order must be at least 1".into());
        }
        if self.coeffs.len() != self.order || self.initial.len() != self.order {
            return Err(format!(
                "order {} but {} coefficients and {} initial values",
                self.order,
                self.coeffs.len(),
                self.initial.len()
            ));
        }
        let bound = match self.bound.0.sign() {
            Sign::Minus => return Err(format!("bound {} is negative", self.bound.0)),
            _ => self.bound.0.magnitude().clone(),
        };
        let lrs = Lrs::new(
            self.coeffs.iter().map(|c| c.0.clone()).collect(),
            self.initial.iter().map(|c| c.0.clone()).collect(),
        )
        .map_err(|e| e.to_string())?;
        Ok((lrs, bound))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamsDoc {
    pub p: u64,
    #[serde(rename = "M")]
    pub m: u64,
    pub nu: u64,
    pub nu_overridden: bool,
    #[serde(rename = "R_per_ell")]
    pub depths: Vec<u32>,
    /// Leading terms peeled off before the search; trace discs index the
    /// sequence `n -> u_{n + shift}`.
    pub shift: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProgressionDoc {
    pub modulus: u64,
    #[serde(serialize_with = "decimal")]
    pub residue: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceDoc {
    pub ell: u64,
    #[serde(serialize_with = "decimal")]
    pub z: BigUint,
    pub r: u32,
    pub j: usize,
    /// Minimal valuation of the differences.
    pub v: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingsDoc {
    pub search_ms: f64,
    pub verify_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionDoc {
    HasZero,
    NoZero,
}

/// Output of every subcommand; fields a command does not produce are omitted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultDocument {
    pub command: &'static str,
    #[serde(serialize_with = "decimal")]
    pub bound: BigUint,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub progressions: Option<Vec<ProgressionDoc>>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt_decimals")]
    pub candidates: Option<Vec<BigUint>>,
    /// Zeros outside the listed progressions.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt_decimals")]
    pub zeros: Option<Vec<BigUint>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decision: Option<DecisionDoc>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt_decimal")]
    pub first_zero: Option<BigUint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_exponent: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt_decimal_u64")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<TimingsDoc>,
}

fn opt_decimals<S: Serializer>(ns: &Option<Vec<BigUint>>, s: S) -> Result<S::Ok, S::Error> {
    decimals(ns.as_deref().unwrap_or_default(), s)
}

fn opt_decimal<S: Serializer>(n: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match n {
        Some(n) => decimal(n, s),
        None => s.serialize_none(),
    }
}

fn opt_decimal_u64<S: Serializer>(n: &Option<u64>, s: S) -> Result<S::Ok, S::Error> {
    match n {
        Some(n) => s.serialize_str(&n.to_string()),
        None => s.serialize_none(),
    }
}

impl ResultDocument {
    pub fn empty(command: &'static str, bound: &BigUint) -> Self {
        Self {
            command,
            bound: bound.clone(),
            params: None,
            progressions: None,
            candidates: None,
            zeros: None,
            decision: None,
            first_zero: None,
            error_exponent: None,
            seed: None,
            trace: None,
            timings: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_instance_round_trips() {
        let text = r#"{"order":3,"coeffs":["1","-3","2"],"initial":["-1","1","7"],"bound":"200"}"#;
        let inst: ProblemInstance = serde_json::from_str(text).unwrap();
        assert_eq!(serde_json::to_string(&inst).unwrap(), text);
    }

    #[test]
    fn numbers_are_accepted_and_canonicalized() {
        let text = r#"{"order":2,"coeffs":[-2,3],"initial":["-1099511627775", -1099511627774],"bound":1048576}"#;
        let inst: ProblemInstance = serde_json::from_str(text).unwrap();
        let (u, n) = inst.to_problem().unwrap();
        assert_eq!(n, BigUint::from(1u32 << 20));
        assert_eq!(u.initial()[1], BigInt::from(2 - (1i64 << 40)));
        let canonical = serde_json::to_string(&inst).unwrap();
        assert!(canonical.contains(r#""bound":"1048576""#));
        let again: ProblemInstance = serde_json::from_str(&canonical).unwrap();
        assert_eq!(again, inst);
    }

    #[test]
    fn huge_bounds_survive_as_strings() {
        let text = r#"{"order":1,"coeffs":["1"],"initial":["0"],"bound":"1000000000000000000000000"}"#;
        let (_, n) = serde_json::from_str::<ProblemInstance>(text).unwrap().to_problem().unwrap();
        assert_eq!(n, BigUint::from(10u32).pow(24));
    }

    #[test]
    fn malformed_instances_are_rejected() {
        let bad_len = r#"{"order":3,"coeffs":["1","-3"],"initial":["-1","1","7"],"bound":"200"}"#;
        let inst: ProblemInstance = serde_json::from_str(bad_len).unwrap();
        assert!(inst.to_problem().is_err());
        let negative = r#"{"order":1,"coeffs":["1"],"initial":["1"],"bound":"-1"}"#;
        let inst: ProblemInstance = serde_json::from_str(negative).unwrap();
        assert!(inst.to_problem().is_err());
        for text in [
            r#"{"order":1,"coeffs":[1.5],"initial":["1"],"bound":"1"}"#,
            r#"{"order":1,"coeffs":["x"],"initial":["1"],"bound":"1"}"#,
            r#"{"order":1,"coeffs":["1"],"initial":["1"],"bound":"1","extra":0}"#,
            r#"{"order":1,"coeffs":["1"],"initial":["1"]}"#,
        ] {
            assert!(serde_json::from_str::<ProblemInstance>(text).is_err(), "{text}");
        }
        let zero_order = r#"{"order":0,"coeffs":[],"initial":[],"bound":"1"}"#;
        let inst: ProblemInstance = serde_json::from_str(zero_order).unwrap();
        assert!(inst.to_problem().is_err());
    }

    #[test]
    fn result_document_omits_absent_fields() {
        let mut doc = ResultDocument::empty("oracle", &BigUint::from(7u32));
        doc.zeros = Some(vec![BigUint::from(4u32)]);
        doc.decision = Some(DecisionDoc::HasZero);
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(text, r#"{"command":"oracle","bound":"7","zeros":["4"],"decision":"has_zero"}"#);
    }
}
