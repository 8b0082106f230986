//! Nearly-perfect cuboids built from solution pairs.
//!
//! Every parametrization here produces a box whose sides `a, b, c`, face
//! diagonals `d_bc, d_ac` and space diagonal `d_s` are rational, leaving the
//! `a`-`b` face diagonal as the one quantity that may be irrational. The
//! cuboid is perfect exactly when `a^2 + b^2` is a rational square.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curve::SolutionPair;
use crate::error::{Error, Result};
use crate::json::{big_int, int_or_rational};
use crate::rational::{decimal_digits, primitive_integer_scaling, Rational};

/// The five NPC parametrizations by a solution pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parametrization {
    /// Circle parametrization, ratios to `d_s`.
    First,
    /// First parametrization after the second reflected transformation.
    FirstReflected,
    /// Hyperbola parametrization, ratios to `a`.
    Second,
    /// Second parametrization after the second reflected transformation.
    SecondReflected,
    /// `a = 2XZN, b = |YW|, c = |X-Z| sqrt(XZ) N`; a reflection at most swaps `a` and `b`.
    Invariant,
}

impl Parametrization {
    pub const ALL: [Parametrization; 5] = [
        Parametrization::First,
        Parametrization::FirstReflected,
        Parametrization::Second,
        Parametrization::SecondReflected,
        Parametrization::Invariant,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Parametrization::First => "first",
            Parametrization::FirstReflected => "first_reflected",
            Parametrization::Second => "second",
            Parametrization::SecondReflected => "second_reflected",
            Parametrization::Invariant => "invariant",
        }
    }
}

impl fmt::Display for Parametrization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Parametrization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Parametrization::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown parametrization {s:?}")))
    }
}

/// One of the four relations a nearly-perfect cuboid must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `a^2 + b^2 = d_ab^2`, checked against the stored square.
    FaceAb,
    /// `b^2 + c^2 = d_bc^2`.
    FaceBc,
    /// `a^2 + c^2 = d_ac^2`.
    FaceAc,
    /// `a^2 + b^2 + c^2 = d_s^2`.
    SpaceDiagonal,
}

/// Sides, rational diagonals and the exact square of the `a`-`b` face diagonal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cuboid {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d_ac: Rational,
    pub d_bc: Rational,
    pub d_s: Rational,
    pub d_ab_sq: Rational,
}

impl Cuboid {
    /// A cuboid from positive entries, with `d_ab_sq = a^2 + b^2`.
    ///
    /// The other relations are not enforced; [`Cuboid::verify`] reports them.
    pub fn new(a: Rational, b: Rational, c: Rational, d_ac: Rational, d_bc: Rational, d_s: Rational) -> Result<Self> {
        let d_ab_sq = a.square() + b.square();
        Cuboid::from_parts(a, b, c, d_ac, d_bc, d_s, d_ab_sq)
    }

    pub fn from_parts(
        a: Rational,
        b: Rational,
        c: Rational,
        d_ac: Rational,
        d_bc: Rational,
        d_s: Rational,
        d_ab_sq: Rational,
    ) -> Result<Self> {
        for v in [&a, &b, &c, &d_ac, &d_bc, &d_s, &d_ab_sq] {
            if !v.is_positive() {
                return Err(Error::ZeroSide);
            }
        }
        Ok(Cuboid {
            a,
            b,
            c,
            d_ac,
            d_bc,
            d_s,
            d_ab_sq,
        })
    }

    /// Integer convenience constructor in `(a, b, c, d_ac, d_bc, d_s)` order.
    pub fn from_integers(v: [i64; 6]) -> Result<Self> {
        let [a, b, c, d_ac, d_bc, d_s] = v.map(Rational::from);
        Cuboid::new(a, b, c, d_ac, d_bc, d_s)
    }

    /// Entries in `(a, b, c, d_ac, d_bc, d_s)` order.
    pub fn entries(&self) -> [&Rational; 6] {
        [&self.a, &self.b, &self.c, &self.d_ac, &self.d_bc, &self.d_s]
    }

    /// Relations that fail; empty for a valid nearly-perfect cuboid.
    pub fn verify(&self) -> Vec<Relation> {
        let (a2, b2, c2) = (self.a.square(), self.b.square(), self.c.square());
        let mut bad = Vec::new();
        if &a2 + &b2 != self.d_ab_sq {
            bad.push(Relation::FaceAb);
        }
        if &b2 + &c2 != self.d_bc.square() {
            bad.push(Relation::FaceBc);
        }
        if &a2 + &c2 != self.d_ac.square() {
            bad.push(Relation::FaceAc);
        }
        if a2 + b2 + c2 != self.d_s.square() {
            bad.push(Relation::SpaceDiagonal);
        }
        bad
    }

    /// Whether the `a`-`b` face diagonal is rational too, i.e. the box is perfect.
    pub fn pc_condition(&self) -> bool {
        self.d_ab_sq.is_square()
    }

    /// Same box with `a` and `b` (and so `d_ac` and `d_bc`) exchanged.
    pub fn swap_ab(&self) -> Cuboid {
        Cuboid {
            a: self.b.clone(),
            b: self.a.clone(),
            c: self.c.clone(),
            d_ac: self.d_bc.clone(),
            d_bc: self.d_ac.clone(),
            d_s: self.d_s.clone(),
            d_ab_sq: self.d_ab_sq.clone(),
        }
    }

    /// Rescaled to coprime positive integers.
    pub fn primitive(&self) -> Cuboid {
        let scaled = primitive_integer_scaling(&self.entries().map(Clone::clone)).expect("entries are positive");
        let [a, b, c, d_ac, d_bc, d_s]: [Rational; 6] = scaled
            .into_iter()
            .map(Rational::from)
            .collect::<Vec<_>>()
            .try_into()
            .expect("six entries");
        Cuboid::new(a, b, c, d_ac, d_bc, d_s).expect("positive")
    }

    /// Largest decimal length among the six numerators; the height of an integer cuboid.
    pub fn digits(&self) -> usize {
        self.entries()
            .iter()
            .map(|v| v.numer_digits().max(decimal_digits(v.denom())))
            .max()
            .unwrap_or(0)
    }

    /// Labels three sides and the two rational face diagonals so the result verifies.
    ///
    /// Tries each side as `c` (and both orders of the rest); of the two valid
    /// labelings that differ by an `a`-`b` swap, returns the one with `a > b`.
    pub fn classify(sides: [Rational; 3], diagonals: [Rational; 2], d_s: Rational) -> Result<Cuboid> {
        let orders = [(0, 1, 2), (1, 0, 2), (0, 2, 1), (2, 0, 1), (1, 2, 0), (2, 1, 0)];
        for (ia, ib, ic) in orders {
            for (jac, jbc) in [(0, 1), (1, 0)] {
                let Ok(cand) = Cuboid::new(
                    sides[ia].clone(),
                    sides[ib].clone(),
                    sides[ic].clone(),
                    diagonals[jac].clone(),
                    diagonals[jbc].clone(),
                    d_s.clone(),
                ) else {
                    continue;
                };
                if cand.verify().is_empty() {
                    return Ok(if cand.a < cand.b { cand.swap_ab() } else { cand });
                }
            }
        }
        Err(Error::NotAnNpc(
            "no labeling of the sides satisfies the cuboid relations".into(),
        ))
    }
}

fn nonzero(v: Rational, what: &str) -> Result<Rational> {
    if v.is_zero() {
        Err(Error::DegeneratePair(format!("{what} vanishes")))
    } else {
        Ok(v)
    }
}

/// Builds the primitive integer cuboid of a solution pair.
pub fn build_npc(pair: &SolutionPair, param: Parametrization) -> Result<Cuboid> {
    let n = pair.curve().n_rational();
    let (x, z) = (pair.x(), pair.z());
    let s = pair.sqrt_xz();
    let yw = pair.yw();
    let xz = x * z;
    let n2 = n.square();
    let two = Rational::from(2);
    let one = Rational::one();

    // (a, b, c, d_ac, d_bc, d_s), signed; absolute values are taken below
    let raw: [Rational; 6] = match param {
        Parametrization::First => {
            let sum = nonzero(x + z, "X + Z")?;
            let p = &xz + &n2;
            [
                &two * &n * s / &p,
                (x - z) / &sum,
                &two * &yw / (&p * &sum),
                &two * s / &sum,
                (&xz - &n2) / &p,
                one,
            ]
        }
        Parametrization::FirstReflected => {
            let m = nonzero(&xz - &n2, "XZ - N^2")?;
            let p = &xz + &n2;
            [
                &yw / (&p * s),
                &n * &(z - x) / &m,
                &two * &n * &yw / (xz.square() - n2.square()),
                &yw / (&m * s),
                &n * &(x + z) / &p,
                one,
            ]
        }
        Parametrization::Second => {
            let m = nonzero(&n2 - &xz, "N^2 - XZ")?;
            let diff = x - z;
            [
                one,
                &two * &yw / (&diff * &m),
                &two * &n * s / &m,
                (&n2 + &xz) / &m,
                &two * s / &diff,
                (x + z) / &diff,
            ]
        }
        Parametrization::SecondReflected => {
            let sum = nonzero(x + z, "X + Z")?;
            let diff = z - x;
            [
                one,
                &two * &yw / (&n * &(z.square() - x.square())),
                &yw / (&n * &sum * s),
                (&xz + &n2) / (&n * &sum),
                &yw / (&n * &diff * s),
                (&xz - &n2) / (&n * &diff),
            ]
        }
        Parametrization::Invariant => [
            &two * &xz * &n,
            yw.clone(),
            (x - z) * s * &n,
            (x + z) * s * &n,
            (&xz - &n2) * s,
            (&xz + &n2) * s,
        ],
    };
    if raw.iter().any(Rational::is_zero) {
        return Err(Error::ZeroSide);
    }
    let scaled = primitive_integer_scaling(&raw)?;
    let [a, b, c, d_ac, d_bc, d_s]: [Rational; 6] = scaled
        .into_iter()
        .map(Rational::from)
        .collect::<Vec<_>>()
        .try_into()
        .expect("six entries");
    Cuboid::new(a, b, c, d_ac, d_bc, d_s)
}

/// Where a generated cuboid came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuboidSource {
    #[serde(rename = "N", with = "big_int")]
    pub n: num_bigint::BigInt,
    #[serde(rename = "X")]
    pub x: Rational,
    #[serde(rename = "Z")]
    pub z: Rational,
    pub parametrization: Parametrization,
}

impl CuboidSource {
    pub fn of(pair: &SolutionPair, param: Parametrization) -> Self {
        CuboidSource {
            n: pair.curve().n().clone(),
            x: pair.x().clone(),
            z: pair.z().clone(),
            parametrization: param,
        }
    }
}

/// JSON line form of a cuboid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuboidRecord {
    #[serde(with = "int_or_rational")]
    pub a: Rational,
    #[serde(with = "int_or_rational")]
    pub b: Rational,
    #[serde(with = "int_or_rational")]
    pub c: Rational,
    #[serde(with = "int_or_rational")]
    pub d_ac: Rational,
    #[serde(with = "int_or_rational")]
    pub d_bc: Rational,
    #[serde(with = "int_or_rational")]
    pub d_s: Rational,
    #[serde(default, with = "opt_int_or_rational", skip_serializing_if = "Option::is_none")]
    pub d_ab_sq: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pc: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<CuboidSource>,
}

mod opt_int_or_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(v) => int_or_rational::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        Ok(Some(Rational::deserialize(d)?))
    }
}

impl CuboidRecord {
    pub fn from_cuboid(c: &Cuboid, source: Option<CuboidSource>) -> Self {
        CuboidRecord {
            a: c.a.clone(),
            b: c.b.clone(),
            c: c.c.clone(),
            d_ac: c.d_ac.clone(),
            d_bc: c.d_bc.clone(),
            d_s: c.d_s.clone(),
            d_ab_sq: Some(c.d_ab_sq.clone()),
            pc: Some(c.pc_condition()),
            source,
        }
    }

    /// The cuboid; a missing `d_ab_sq` defaults to `a^2 + b^2`.
    pub fn to_cuboid(&self) -> Result<Cuboid> {
        let d_ab_sq = self
            .d_ab_sq
            .clone()
            .unwrap_or_else(|| self.a.square() + self.b.square());
        Cuboid::from_parts(
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.d_ac.clone(),
            self.d_bc.clone(),
            self.d_s.clone(),
            d_ab_sq,
        )
    }
}
