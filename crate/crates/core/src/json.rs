//! JSON record shapes shared by the CLI, the search harness and the FFI layer.
//!
//! Rationals travel as `"p/q"` strings; integers (curve parameters and
//! cuboid entries) travel as plain JSON numbers of arbitrary size.

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::curve::{Coords, Curve, CurvePoint};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Serde adapter writing a `BigInt` as a bare JSON number.
pub mod big_int {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n: serde_json::Number = v.to_string().parse().map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let text = match &v {
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::String(s) => s.clone(),
            other => return Err(serde::de::Error::custom(format!("expected integer, got {other}"))),
        };
        text.trim()
            .parse()
            .map_err(|_| serde::de::Error::custom(format!("expected integer, got {text}")))
    }
}

/// An integer-valued rational written as a JSON number, anything else as `"p/q"`.
pub mod int_or_rational {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_integer() {
            big_int::serialize(v.numer(), s)
        } else {
            v.serialize(s)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        Rational::deserialize(d)
    }
}

/// `{"N": int, "x": "p/q", "y": "p/q"}` or `{"N": int, "infinity": true}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    #[serde(rename = "N", with = "big_int")]
    pub n: BigInt,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Rational>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub infinity: bool,
}

impl PointRecord {
    pub fn from_point(p: &CurvePoint) -> Self {
        let n = p.curve().n().clone();
        match p.coords() {
            Coords::Infinity => PointRecord {
                n,
                x: None,
                y: None,
                infinity: true,
            },
            Coords::Affine { x, y } => PointRecord {
                n,
                x: Some(x.clone()),
                y: Some(y.clone()),
                infinity: false,
            },
        }
    }

    /// Validated point; off-curve coordinates are an error.
    pub fn to_point(&self) -> Result<CurvePoint> {
        let curve = Curve::new(self.n.clone())?;
        if self.infinity {
            return Ok(curve.infinity());
        }
        match (&self.x, &self.y) {
            (Some(x), Some(y)) => CurvePoint::new(curve, x.clone(), y.clone()),
            _ => Err(Error::Parse(
                "point record needs both \"x\" and \"y\" or \"infinity\": true".into(),
            )),
        }
    }
}

/// Parses newline-delimited point records, skipping blank lines.
pub fn parse_seed_lines(text: &str) -> Result<Vec<CurvePoint>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let rec: PointRecord =
                serde_json::from_str(l).map_err(|e| Error::InvalidSeed(format!("line {}: {e}", i + 1)))?;
            let p = rec
                .to_point()
                .map_err(|e| Error::InvalidSeed(format!("line {}: {e}", i + 1)))?;
            if !p.is_nontrivial() {
                return Err(Error::InvalidSeed(format!(
                    "line {}: seed must be a point with y != 0",
                    i + 1
                )));
            }
            Ok(p)
        })
        .collect()
}

/// The built-in seed points, validated on load.
pub fn default_seeds() -> Vec<CurvePoint> {
    parse_seed_lines(crate::curve::DEFAULT_SEEDS).expect("built-in seeds are valid")
}
