//! Conic parametrizations and the three equivalent perfect-cuboid equations.
//!
//! Each family writes the cuboid ratios through rational points on the unit
//! circle or the unit hyperbola with parameters `alpha`, `beta`, `gamma`. A
//! perfect cuboid exists iff the family's equation in those three parameters
//! has a nontrivial rational zero.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curve::SolutionPair;
use crate::error::{Error, Result};
use crate::rational::Rational;

fn reject_trivial(t: &Rational) -> Result<()> {
    let one = Rational::one();
    if t.is_zero() || t == &one || t == &-&one {
        return Err(Error::TrivialParameter(t.clone()));
    }
    Ok(())
}

/// `(|1-t^2|/(1+t^2), |2t|/(1+t^2))` on `x^2 + y^2 = 1`.
pub fn circle_point(t: &Rational) -> Result<(Rational, Rational)> {
    reject_trivial(t)?;
    let t2 = t.square();
    let one = Rational::one();
    let d = &one + &t2;
    Ok((((&one - &t2) / &d).abs(), (Rational::from(2) * t / &d).abs()))
}

/// `(|1+t^2|/|1-t^2|, |2t|/|1-t^2|)` on `x^2 - y^2 = 1`.
pub fn hyperbola_point_a(t: &Rational) -> Result<(Rational, Rational)> {
    reject_trivial(t)?;
    let t2 = t.square();
    let one = Rational::one();
    let d = &one - &t2;
    Ok((((&one + &t2) / &d).abs(), (Rational::from(2) * t / &d).abs()))
}

/// `(|1+t^2|/|2t|, |1-t^2|/|2t|)` on `x^2 - y^2 = 1`.
pub fn hyperbola_point_b(t: &Rational) -> Result<(Rational, Rational)> {
    reject_trivial(t)?;
    let t2 = t.square();
    let one = Rational::one();
    let d = Rational::from(2) * t;
    Ok((((&one + &t2) / &d).abs(), ((&one - &t2) / &d).abs()))
}

/// Which of the three perfect-cuboid equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Circle form: `(2a/(1+a^2))^2 + (2g/(1+g^2))^2 = (2b/(1+b^2))^2`.
    First,
    /// Hyperbola form: `(2g/(1-g^2))^2 + (2b/(1-b^2))^2 = (2a/(1-a^2))^2`.
    Second,
    /// Second hyperbola form: `((1-g^2)/2g)^2 + ((1-b^2)/2b)^2 = ((1-a^2)/2a)^2`.
    Third,
}

impl Family {
    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Family::First),
            2 => Ok(Family::Second),
            3 => Ok(Family::Third),
            _ => Err(Error::Parse(format!("family index {i} is not 1, 2 or 3"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::First => "first",
            Family::Second => "second",
            Family::Third => "third",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" | "1" => Ok(Family::First),
            "second" | "2" => Ok(Family::Second),
            "third" | "3" => Ok(Family::Third),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

fn family_term(family: Family, t: &Rational) -> Result<Rational> {
    let one = Rational::one();
    let two = Rational::from(2);
    let t2 = t.square();
    let v = match family {
        Family::First => (&two * t).checked_div(&(&one + &t2))?,
        Family::Second => (&two * t).checked_div(&(&one - &t2))?,
        Family::Third => (&one - &t2).checked_div(&(&two * t))?,
    };
    Ok(v)
}

/// Left side minus right side of the family's equation; zero exactly on solutions.
pub fn theorem_equation_residual(
    family: Family,
    alpha: &Rational,
    beta: &Rational,
    gamma: &Rational,
) -> Result<Rational> {
    let term = |t: &Rational| family_term(family, t).map_err(|_| Error::TrivialParameter(t.clone()));
    let (ta, tb, tg) = (term(alpha)?, term(beta)?, term(gamma)?);
    Ok(match family {
        Family::First => ta.square() + tg.square() - tb.square(),
        Family::Second | Family::Third => tg.square() + tb.square() - ta.square(),
    })
}

/// `t -> (1-t)/(1+t)`, carrying third-family parameters to second-family ones.
pub fn third_to_second(t: &Rational) -> Result<Rational> {
    let one = Rational::one();
    (&one - t)
        .checked_div(&(&one + t))
        .map_err(|_| Error::TrivialParameter(t.clone()))
}

/// Parametrization variables of a solution pair for one family.
///
/// `gamma_condition` is the rational right-hand side that `gamma` must
/// produce: `g/(1+g^2)`, `g/(1-g^2)` or `(1-g^2)/g` by family. `gamma`
/// itself is rational only when a perfect cuboid exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParametrizationVariables {
    pub family: Family,
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma_condition: Rational,
    pub eta: Rational,
}

impl ParametrizationVariables {
    /// Whether `gamma` solving `gamma_condition` is rational.
    pub fn gamma_is_rational(&self) -> bool {
        let q = &self.gamma_condition;
        let four = Rational::from(4);
        let one = Rational::one();
        // each condition is a quadratic in gamma; rational roots iff the discriminant is a square
        let disc = match self.family {
            // q(1+g^2) = g
            Family::First => one - four * q.square(),
            // q(1-g^2) = g
            Family::Second => one + four * q.square(),
            // 1 - g^2 = q g
            Family::Third => q.square() + four,
        };
        disc.is_square()
    }

    /// Rational roots of the `gamma` quadratic, when they exist.
    pub fn gamma_roots(&self) -> Option<[Rational; 2]> {
        let q = &self.gamma_condition;
        let one = Rational::one();
        let two = Rational::from(2);
        let four = Rational::from(4);
        match self.family {
            Family::First => {
                // q g^2 - g + q = 0
                let r = (&one - &four * q.square()).sqrt_exact().ok()?;
                let d = &two * q;
                Some([(&one + &r) / &d, (&one - &r) / &d])
            }
            Family::Second => {
                // q g^2 + g - q = 0
                let r = (&one + &four * q.square()).sqrt_exact().ok()?;
                let d = &two * q;
                Some([(-&one + &r) / &d, (-&one - &r) / &d])
            }
            Family::Third => {
                // g^2 + q g - 1 = 0
                let r = (q.square() + four).sqrt_exact().ok()?;
                Some([(-q + &r) / &two, (-q - &r) / &two])
            }
        }
    }
}

pub fn variables_from_pair(pair: &SolutionPair, family: Family) -> Result<ParametrizationVariables> {
    let n = pair.curve().n_rational();
    let (x, z) = (pair.x(), pair.z());
    let s = pair.sqrt_xz();
    let yw = pair.yw();
    let xz = x * z;
    let n2 = n.square();
    let eta = &yw / n.pow(3);
    let degenerate = |what: &str| Error::DegeneratePair(format!("{what} vanishes"));
    let (alpha, beta, gamma_condition) = match family {
        Family::First => {
            let d = (&xz + &n2) * (x + z);
            if d.is_zero() {
                return Err(degenerate("(XZ + N^2)(X + Z)"));
            }
            (s / &n, (x / z).sqrt_exact()?, &yw / &d)
        }
        Family::Second => {
            let d = (x - z) * (&n2 - &xz);
            if d.is_zero() {
                return Err(degenerate("(X - Z)(N^2 - XZ)"));
            }
            ((z / x).sqrt_exact()?, s / &n, &yw / &d)
        }
        Family::Third => (s / &n, (z / x).sqrt_exact()?, &yw / &(&xz * &n)),
    };
    Ok(ParametrizationVariables {
        family,
        alpha,
        beta,
        gamma_condition,
        eta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{Curve, CurvePoint};

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn reference_pair() -> SolutionPair {
        let curve = Curve::new(5).unwrap();
        SolutionPair::new(
            CurvePoint::new(curve.clone(), q("25/4"), q("75/8")).unwrap(),
            CurvePoint::new(curve, q("1681/144"), q("62279/1728")).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn conic_examples() {
        assert_eq!(circle_point(&q("1/2")).unwrap(), (q("3/5"), q("4/5")));
        assert_eq!(circle_point(&q("2")).unwrap(), (q("3/5"), q("4/5")));
        assert_eq!(circle_point(&q("0")), Err(Error::TrivialParameter(q("0"))));
        assert_eq!(hyperbola_point_a(&q("1/2")).unwrap(), (q("5/3"), q("4/3")));
        assert_eq!(hyperbola_point_b(&q("1/2")).unwrap(), (q("5/4"), q("3/4")));
        assert!(hyperbola_point_a(&q("1")).is_err());
        assert!(hyperbola_point_b(&q("-1")).is_err());
    }

    #[test]
    fn third_family_variables_on_reference_pair() {
        let v = variables_from_pair(&reference_pair(), Family::Third).unwrap();
        assert_eq!(v.alpha, q("41/24"));
        assert_eq!(v.beta, q("41/30"));
        assert_eq!(v.eta, q("4670925") / (q("13824") * q("125")));
        // (alpha/beta, alpha*beta) = (X/N, Z/N)
        assert_eq!(&v.alpha / &v.beta, q("5/4"));
        assert_eq!(&v.alpha * &v.beta, q("1681/720"));
        assert!(!v.gamma_is_rational());
        assert!(v.gamma_roots().is_none());
    }

    #[test]
    fn first_and_second_variables() {
        let pair = reference_pair();
        let v1 = variables_from_pair(&pair, Family::First).unwrap();
        assert_eq!(&v1.alpha * &v1.beta, q("5/4"));
        assert_eq!(&v1.alpha / &v1.beta, q("1681/720"));
        let v2 = variables_from_pair(&pair, Family::Second).unwrap();
        assert_eq!(&v2.beta / &v2.alpha, q("5/4"));
        assert_eq!(&v2.beta * &v2.alpha, q("1681/720"));
    }

    #[test]
    fn residual_examples() {
        // generic triple is not a solution
        let r = theorem_equation_residual(Family::First, &q("2"), &q("3"), &q("5")).unwrap();
        assert!(!r.is_zero());
        assert!(matches!(
            theorem_equation_residual(Family::Second, &q("1"), &q("3"), &q("5")),
            Err(Error::TrivialParameter(_))
        ));
        assert!(matches!(
            theorem_equation_residual(Family::Third, &q("2"), &q("0"), &q("5")),
            Err(Error::TrivialParameter(_))
        ));
        // gamma = 1 and beta = alpha zero the third family
        let r = theorem_equation_residual(Family::Third, &q("7/3"), &q("7/3"), &q("1")).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn map_preserves_terms() {
        for t in ["2", "7/3", "-5/11", "1/9"] {
            let t = q(t);
            let u = third_to_second(&t).unwrap();
            assert_eq!(
                family_term(Family::Second, &u).unwrap(),
                family_term(Family::Third, &t).unwrap()
            );
        }
        assert!(third_to_second(&q("-1")).is_err());
    }

    #[test]
    fn gamma_roots_solve_condition() {
        // family third with q = 3/2: g^2 + 3/2 g - 1 = 0 has roots 1/2 and -2
        let v = ParametrizationVariables {
            family: Family::Third,
            alpha: q("2"),
            beta: q("3"),
            gamma_condition: q("3/2"),
            eta: q("1"),
        };
        assert!(v.gamma_is_rational());
        let [g1, g2] = v.gamma_roots().unwrap();
        for g in [g1, g2] {
            assert_eq!((Rational::one() - g.square()) / g, q("3/2"));
        }
    }

    #[test]
    fn family_parsing() {
        assert_eq!("2".parse::<Family>().unwrap(), Family::Second);
        assert_eq!(Family::from_index(3).unwrap(), Family::Third);
        assert!(Family::from_index(4).is_err());
    }
}
