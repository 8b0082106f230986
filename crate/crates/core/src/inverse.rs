//! Recovering the congruent number and solution pairs behind a given cuboid.
//!
//! Each parametrization fixes two positive ratios of the cuboid: `rho`, a
//! square root of `X/Z`, and `mu`, the value `sqrt(XZ)/N`. Both are known only
//! up to inversion, and the overall sign of `(X/N, Z/N)` is free, which gives
//! eight candidates `(s mu rho, s mu / rho)`. Exactly four satisfy
//! `-1 < X/N < 0` or `X/N > 1`: one pair, its reflection through `(0,0)` and
//! the two `X <-> Z` swaps. `N` is then the squarefree kernel shared by every
//! `xi (xi^2 - 1)` with `xi` one of the surviving ratios.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::cuboid::{build_npc, Cuboid, Parametrization};
use crate::curve::{Curve, SolutionPair};
use crate::error::{Error, Result};
use crate::factor::{common_squarefree_kernel, FactorBudget};
use crate::json::big_int;
use crate::rational::Rational;

/// Which parametrization to invert.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InverseFamily {
    Invariant,
    First,
    Second,
}

impl InverseFamily {
    pub fn parametrization(self) -> Parametrization {
        match self {
            InverseFamily::Invariant => Parametrization::Invariant,
            InverseFamily::First => Parametrization::First,
            InverseFamily::Second => Parametrization::Second,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            InverseFamily::Invariant => "invariant",
            InverseFamily::First => "first",
            InverseFamily::Second => "second",
        }
    }
}

impl fmt::Display for InverseFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InverseFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "invariant" => Ok(InverseFamily::Invariant),
            "first" => Ok(InverseFamily::First),
            "second" => Ok(InverseFamily::Second),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// Label of a recovered pair.
///
/// For the invariant family `II`, `III`, `IV` are the first, second and
/// third reflections of `I`. For the first and second families only `I`
/// and its first reflection `II` are reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Which {
    I,
    II,
    III,
    IV,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveredPair {
    pub which: Which,
    /// Points carry the non-negative square roots as y-coordinates.
    pub pair: SolutionPair,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveredSolutions {
    pub family: InverseFamily,
    /// Squarefree congruent number.
    pub n: BigUint,
    pub pairs: Vec<RecoveredPair>,
    /// The input was already a perfect cuboid.
    pub perfect: bool,
}

impl RecoveredSolutions {
    pub fn pair(&self, which: Which) -> Option<&SolutionPair> {
        self.pairs.iter().find(|p| p.which == which).map(|p| &p.pair)
    }
}

/// One of the eight sign candidates for `(X/N, Z/N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub xi: Rational,
    pub zeta: Rational,
}

impl Candidate {
    /// `-1 < t < 0` or `t > 1` for both ratios, the range of `x/N` on nontrivial points.
    pub fn admissible(&self) -> bool {
        let ok = |t: &Rational| {
            let one = Rational::one();
            (t > &-&one && t.is_negative()) || t > &one
        };
        ok(&self.xi) && ok(&self.zeta)
    }
}

/// `(rho, mu)` for a family: `rho^2 = X/Z`, `mu = sqrt(XZ)/N`, each up to inversion.
fn family_ratios(c: &Cuboid, family: InverseFamily) -> Result<(Rational, Rational)> {
    let one = Rational::one();
    match family {
        InverseFamily::Invariant => Ok((
            (&c.d_ac + &c.c).checked_div(&c.a)?,
            (&c.d_s + &c.d_bc).checked_div(&c.a)?,
        )),
        InverseFamily::First => Ok((
            (&c.d_s + &c.b).checked_div(&c.d_ac)?,
            (&c.d_s + &c.d_bc).checked_div(&c.a)?,
        )),
        InverseFamily::Second => {
            // x + y = (1+t)/(1-t) on the hyperbola, so t = (u-1)/(u+1)
            let u = (&c.d_s + &c.d_bc).checked_div(&c.a)?;
            let v = (&c.d_ac + &c.c).checked_div(&c.a)?;
            let alpha = (&u - &one).checked_div(&(&u + &one))?;
            let beta = (&v - &one).checked_div(&(&v + &one))?;
            // X/N = beta/alpha and Z/N = beta*alpha
            Ok((alpha.recip()?, beta))
        }
    }
}

/// The eight candidates `(s mu rho, s mu/rho)` in a fixed order.
pub fn sign_candidates(c: &Cuboid, family: InverseFamily) -> Result<Vec<Candidate>> {
    let (rho, mu) = family_ratios(c, family)?;
    if rho.is_zero() || mu.is_zero() {
        return Err(Error::NotAnNpc("a diagonal ratio vanishes".into()));
    }
    let mut out = Vec::with_capacity(8);
    for sign in [Rational::one(), -Rational::one()] {
        for r in [rho.clone(), rho.recip()?] {
            for m in [mu.clone(), mu.recip()?] {
                out.push(Candidate {
                    xi: &sign * &m * &r,
                    zeta: &sign * &m / &r,
                });
            }
        }
    }
    Ok(out)
}

fn cubic_factor(t: &Rational) -> Rational {
    t * &(t.square() - Rational::one())
}

/// Inverts one parametrization of a nearly-perfect cuboid.
pub fn recover(cuboid: &Cuboid, family: InverseFamily, budget: &FactorBudget) -> Result<RecoveredSolutions> {
    let violated = cuboid.verify();
    if !violated.is_empty() {
        return Err(Error::NotAnNpc(format!("violated relations: {violated:?}")));
    }
    let survivors: Vec<Candidate> = sign_candidates(cuboid, family)?
        .into_iter()
        .filter(Candidate::admissible)
        .collect();
    if survivors.len() != 4 {
        return Err(Error::InconsistentKernel(format!(
            "{} of 8 sign candidates are admissible, expected 4",
            survivors.len()
        )));
    }
    let cubics: Vec<Rational> = survivors
        .iter()
        .flat_map(|c| [cubic_factor(&c.xi), cubic_factor(&c.zeta)])
        .collect();
    let n = common_squarefree_kernel(&cubics, budget)?;
    let curve = Curve::new(BigInt::from(n.clone()))?;
    let n_rat = curve.n_rational();

    let primary = survivors
        .iter()
        .filter(|c| c.xi.is_positive() && c.xi > c.zeta)
        .max_by(|a, b| a.xi.cmp(&b.xi))
        .ok_or_else(|| Error::InconsistentKernel("no positive admissible candidate".into()))?;
    let from_ratios = |xi: &Rational, zeta: &Rational| -> Result<SolutionPair> {
        SolutionPair::from_x(&curve, &(xi * &n_rat), &(zeta * &n_rat))
            .map_err(|e| Error::InconsistentKernel(format!("candidate is not on C_{n}: {e}")))
    };
    let base = from_ratios(&primary.xi, &primary.zeta)?;
    let normalized = |p: SolutionPair| from_ratios(&(p.x() / &n_rat), &(p.z() / &n_rat));

    let mut pairs = vec![RecoveredPair {
        which: Which::I,
        pair: base.clone(),
    }];
    pairs.push(RecoveredPair {
        which: Which::II,
        pair: normalized(base.reflect_first()?)?,
    });
    if family == InverseFamily::Invariant {
        pairs.push(RecoveredPair {
            which: Which::III,
            pair: normalized(base.reflect_second()?)?,
        });
        pairs.push(RecoveredPair {
            which: Which::IV,
            pair: normalized(base.reflect_third()?)?,
        });
    }

    // the reflected pair must be the other admissible orbit
    let ii = &pairs[1].pair;
    let (xi2, zeta2) = (ii.x() / &n_rat, ii.z() / &n_rat);
    if !survivors
        .iter()
        .any(|c| (c.xi == xi2 && c.zeta == zeta2) || (c.xi == zeta2 && c.zeta == xi2))
    {
        return Err(Error::InconsistentKernel(
            "reflected pair is not among the admissible candidates".into(),
        ));
    }

    let target = cuboid.primitive();
    let param = family.parametrization();
    for rp in &pairs {
        let rebuilt = build_npc(&rp.pair, param)?;
        let expected = match rp.which {
            Which::III | Which::IV => target.swap_ab(),
            Which::I | Which::II => target.clone(),
        };
        if rebuilt != expected {
            return Err(Error::InconsistentKernel(format!(
                "pair {:?} does not rebuild the input cuboid",
                rp.which
            )));
        }
    }

    Ok(RecoveredSolutions {
        family,
        n,
        pairs,
        perfect: cuboid.pc_condition(),
    })
}

pub fn recover_invariant(cuboid: &Cuboid, budget: &FactorBudget) -> Result<RecoveredSolutions> {
    recover(cuboid, InverseFamily::Invariant, budget)
}

pub fn recover_first(cuboid: &Cuboid, budget: &FactorBudget) -> Result<RecoveredSolutions> {
    recover(cuboid, InverseFamily::First, budget)
}

pub fn recover_second(cuboid: &Cuboid, budget: &FactorBudget) -> Result<RecoveredSolutions> {
    recover(cuboid, InverseFamily::Second, budget)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveredPairRecord {
    #[serde(rename = "X")]
    pub x: Rational,
    #[serde(rename = "Z")]
    pub z: Rational,
    pub which: Which,
}

/// `{"N": int, "pairs": [{"X", "Z", "which"}], "family": ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveredRecord {
    #[serde(rename = "N", with = "big_int")]
    pub n: BigInt,
    pub pairs: Vec<RecoveredPairRecord>,
    pub family: InverseFamily,
    /// Present and true only when the input was a perfect cuboid.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub pc: bool,
}

impl From<&RecoveredSolutions> for RecoveredRecord {
    fn from(r: &RecoveredSolutions) -> Self {
        RecoveredRecord {
            n: BigInt::from(r.n.clone()),
            pairs: r
                .pairs
                .iter()
                .map(|p| RecoveredPairRecord {
                    x: p.pair.x().clone(),
                    z: p.pair.z().clone(),
                    which: p.which,
                })
                .collect(),
            family: r.family,
            pc: r.perfect,
        }
    }
}
