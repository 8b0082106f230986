//! The congruent curve `C_N : y^2 = x^3 - N^2 x` and its rational points.
//!
//! The group law is the usual chord-and-tangent law with the point at
//! infinity as identity and `-(x, y) = (x, -y)`. Besides the group law the
//! module provides the three reflected transformations (translations by the
//! 2-torsion points `(0,0)`, `(N,0)`, `(-N,0)` up to the sign of `y`) and the
//! construction of solution pairs whose x-coordinates multiply to a square.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// The curve `y^2 = x^3 - N^2 x` for a positive integer `N`.
///
/// `N` need not be squarefree here.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Curve {
    n: BigInt,
}

impl Curve {
    pub fn new(n: impl Into<BigInt>) -> Result<Self> {
        let n = n.into();
        if !n.is_positive() {
            return Err(Error::InvalidCurve);
        }
        Ok(Curve { n })
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn n_rational(&self) -> Rational {
        Rational::from_integer(self.n.clone())
    }

    /// Right-hand side `x^3 - N^2 x`.
    pub fn rhs(&self, x: &Rational) -> Rational {
        let n2 = self.n_rational().square();
        x * &(x.square() - n2)
    }

    pub fn contains(&self, x: &Rational, y: &Rational) -> bool {
        y.square() == self.rhs(x)
    }

    /// The point with the given x-coordinate and non-negative y, if it is rational.
    pub fn point_from_x(&self, x: &Rational) -> Result<CurvePoint> {
        let rhs = self.rhs(x);
        let y = rhs.sqrt_exact().map_err(|_| Error::NoRationalY {
            n: self.n.to_string(),
            x: x.to_string(),
        })?;
        Ok(CurvePoint::affine_unchecked(self.clone(), x.clone(), y))
    }

    pub fn infinity(&self) -> CurvePoint {
        CurvePoint {
            curve: self.clone(),
            coords: Coords::Infinity,
        }
    }

    fn torsion(&self, x: Rational) -> CurvePoint {
        CurvePoint::affine_unchecked(self.clone(), x, Rational::zero())
    }
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C_{}", self.n)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Coords {
    Affine { x: Rational, y: Rational },
    Infinity,
}

#[derive(Clone, PartialEq, Eq)]
pub struct CurvePoint {
    curve: Curve,
    coords: Coords,
}

impl CurvePoint {
    /// Affine point, rejected unless it satisfies the curve equation.
    pub fn new(curve: Curve, x: Rational, y: Rational) -> Result<Self> {
        if !curve.contains(&x, &y) {
            return Err(Error::NotOnCurve {
                n: curve.n.to_string(),
                x: x.to_string(),
                y: y.to_string(),
            });
        }
        Ok(CurvePoint::affine_unchecked(curve, x, y))
    }

    /// Affine point without the curve check; [`CurvePoint::on_curve`] reports validity.
    pub fn affine_unchecked(curve: Curve, x: Rational, y: Rational) -> Self {
        CurvePoint {
            curve,
            coords: Coords::Affine { x, y },
        }
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn x(&self) -> Option<&Rational> {
        match &self.coords {
            Coords::Affine { x, .. } => Some(x),
            Coords::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&Rational> {
        match &self.coords {
            Coords::Affine { y, .. } => Some(y),
            Coords::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self.coords, Coords::Infinity)
    }

    pub fn on_curve(&self) -> bool {
        match &self.coords {
            Coords::Infinity => true,
            Coords::Affine { x, y } => self.curve.contains(x, y),
        }
    }

    /// One of `(0,0)`, `(N,0)`, `(-N,0)`.
    pub fn is_trivial(&self) -> bool {
        matches!(&self.coords, Coords::Affine { y, .. } if y.is_zero())
    }

    /// Affine with `y != 0`.
    pub fn is_nontrivial(&self) -> bool {
        matches!(&self.coords, Coords::Affine { y, .. } if !y.is_zero())
    }

    fn same_curve(&self, other: &CurvePoint) -> Result<()> {
        if self.curve != other.curve {
            return Err(Error::CurveMismatch(
                self.curve.n.to_string(),
                other.curve.n.to_string(),
            ));
        }
        Ok(())
    }

    fn affine(&self, x: Rational, y: Rational) -> CurvePoint {
        CurvePoint::affine_unchecked(self.curve.clone(), x, y)
    }

    pub fn neg(&self) -> CurvePoint {
        match &self.coords {
            Coords::Infinity => self.clone(),
            Coords::Affine { x, y } => self.affine(x.clone(), -y),
        }
    }

    pub fn add(&self, other: &CurvePoint) -> Result<CurvePoint> {
        self.same_curve(other)?;
        let (x1, y1, x2, y2) = match (&self.coords, &other.coords) {
            (Coords::Infinity, _) => return Ok(other.clone()),
            (_, Coords::Infinity) => return Ok(self.clone()),
            (Coords::Affine { x: x1, y: y1 }, Coords::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        if x1 == x2 {
            if y1 == y2 {
                return Ok(self.double());
            }
            return Ok(self.curve.infinity());
        }
        let slope = (y2 - y1) / (x2 - x1);
        Ok(self.third_point(&slope, x1, y1, x2))
    }

    /// Negated third intersection of the line with the given slope through `(x1, y1)`.
    fn third_point(&self, slope: &Rational, x1: &Rational, y1: &Rational, x2: &Rational) -> CurvePoint {
        let x3 = slope.square() - x1 - x2;
        let y3 = slope * &(x1 - &x3) - y1;
        self.affine(x3, y3)
    }

    /// Tangent doubling; 2-torsion points double to infinity.
    pub fn double(&self) -> CurvePoint {
        match &self.coords {
            Coords::Infinity => self.clone(),
            Coords::Affine { x, y } => {
                if y.is_zero() {
                    return self.curve.infinity();
                }
                let n2 = self.curve.n_rational().square();
                let three = Rational::from(3);
                let two = Rational::from(2);
                let slope = (three * x.square() - n2) / (two * y);
                self.third_point(&slope, x, y, x)
            }
        }
    }

    /// `k`-fold sum by double-and-add; negative `k` multiplies the negation.
    pub fn mul(&self, k: impl Into<BigInt>) -> CurvePoint {
        let k: BigInt = k.into();
        let base = if k.is_negative() { self.neg() } else { self.clone() };
        let k = k.magnitude();
        let mut acc = self.curve.infinity();
        for i in (0..k.bits()).rev() {
            acc = acc.double();
            if k.bit(i) {
                acc = acc.add(&base).expect("same curve");
            }
        }
        acc
    }

    /// `(X, Y) -> (-N^2/X, -N^2 Y/X^2)`, which equals `-(P + (0,0))`.
    pub fn reflect_first(&self) -> Result<CurvePoint> {
        let (x, y) = self.affine_coords("reflect_first of the point at infinity")?;
        if x.is_zero() {
            return Err(Error::TrivialInput("reflect_first is undefined at x = 0"));
        }
        let n2 = self.curve.n_rational().square();
        let nx = -(&n2 / x);
        let ny = -(&n2 * y) / x.square();
        Ok(self.affine(nx, ny))
    }

    /// `(X, Y) -> (N(X+N)/(X-N), 2N^2 Y/(X-N)^2)`, which equals `-(P + (N,0))`.
    pub fn reflect_second(&self) -> Result<CurvePoint> {
        let (x, y) = self.affine_coords("reflect_second of the point at infinity")?;
        let n = self.curve.n_rational();
        let d = x - &n;
        if d.is_zero() {
            return Err(Error::TrivialInput("reflect_second is undefined at x = N"));
        }
        let nx = &n * &(x + &n) / &d;
        let ny = Rational::from(2) * n.square() * y / d.square();
        Ok(self.affine(nx, ny))
    }

    /// `(X, Y) -> (N(N-X)/(X+N), 2N^2 Y/(X+N)^2)`, which equals `-(P + (-N,0))`.
    pub fn reflect_third(&self) -> Result<CurvePoint> {
        let (x, y) = self.affine_coords("reflect_third of the point at infinity")?;
        let n = self.curve.n_rational();
        let d = x + &n;
        if d.is_zero() {
            return Err(Error::TrivialInput("reflect_third is undefined at x = -N"));
        }
        let nx = &n * &(&n - x) / &d;
        let ny = Rational::from(2) * n.square() * y / d.square();
        Ok(self.affine(nx, ny))
    }

    fn affine_coords(&self, what: &'static str) -> Result<(&Rational, &Rational)> {
        match &self.coords {
            Coords::Affine { x, y } => Ok((x, y)),
            Coords::Infinity => Err(Error::TrivialInput(what)),
        }
    }

    /// The three 2-torsion points `(0,0)`, `(N,0)`, `(-N,0)` of this point's curve.
    pub fn torsion_points(curve: &Curve) -> [CurvePoint; 3] {
        let n = curve.n_rational();
        [
            curve.torsion(Rational::zero()),
            curve.torsion(n.clone()),
            curve.torsion(-n),
        ]
    }
}

impl fmt::Debug for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.coords {
            Coords::Infinity => write!(f, "O on {:?}", self.curve),
            Coords::Affine { x, y } => write!(f, "({x}, {y}) on {:?}", self.curve),
        }
    }
}

/// y-intercept of the line through two affine points with distinct x.
///
/// If `R` is the third intersection, `x_P * x_Q * x_R = d^2`.
pub fn secant_y_intercept(p: &CurvePoint, q: &CurvePoint) -> Result<Rational> {
    p.same_curve(q)?;
    let (x1, y1) = p.affine_coords("secant through the point at infinity")?;
    let (x2, y2) = q.affine_coords("secant through the point at infinity")?;
    if x1 == x2 {
        return Err(Error::VerticalSecant);
    }
    Ok((x1 * y2 - y1 * x2) / (x1 - x2))
}

/// Two nontrivial points `(X, Y)`, `(Z, W)` on one curve with `X != Z` and `XZ` a square.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SolutionPair {
    p: CurvePoint,
    q: CurvePoint,
    sqrt_xz: Rational,
}

/// Image `(xi, zeta, eta) = (X/N, Z/N, YW/N^3)` of a solution pair on the surface
/// `eta^2 = xi zeta (xi^2 - 1)(zeta^2 - 1)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KummerPoint {
    pub xi: Rational,
    pub zeta: Rational,
    pub eta: Rational,
}

impl KummerPoint {
    /// `eta^2 - xi zeta (xi^2 - 1)(zeta^2 - 1)`; zero on the surface.
    pub fn residual(&self) -> Rational {
        let one = Rational::one();
        let rhs = &self.xi * &self.zeta * (self.xi.square() - &one) * (self.zeta.square() - &one);
        self.eta.square() - rhs
    }
}

impl SolutionPair {
    pub fn new(p: CurvePoint, q: CurvePoint) -> Result<Self> {
        p.same_curve(&q)?;
        for pt in [&p, &q] {
            if !pt.on_curve() {
                let (x, y) = pt.affine_coords("point at infinity")?;
                return Err(Error::NotOnCurve {
                    n: pt.curve.n.to_string(),
                    x: x.to_string(),
                    y: y.to_string(),
                });
            }
            if !pt.is_nontrivial() {
                return Err(Error::DegeneratePair(format!("{pt:?} is not a nontrivial point")));
            }
        }
        let (x, z) = (p.x().expect("affine"), q.x().expect("affine"));
        if x == z {
            return Err(Error::DegeneratePair(format!("equal x-coordinates {x}")));
        }
        let xz = x * z;
        let sqrt_xz = xz.sqrt_exact().map_err(|_| Error::SquareCheckFailed(xz))?;
        Ok(SolutionPair { p, q, sqrt_xz })
    }

    /// Pair from x-coordinates only, taking the non-negative y for each.
    pub fn from_x(curve: &Curve, x: &Rational, z: &Rational) -> Result<Self> {
        SolutionPair::new(curve.point_from_x(x)?, curve.point_from_x(z)?)
    }

    /// `(kP, mP)` for `k`, `m` of equal parity.
    ///
    /// The x-product of such multiples is always a square; the check in
    /// [`SolutionPair::new`] turns a violation into `SquareCheckFailed`.
    pub fn same_parity(p: &CurvePoint, k: i64, m: i64) -> Result<Self> {
        if k == m || k == 0 || m == 0 || (k - m).rem_euclid(2) != 0 {
            return Err(Error::DegeneratePair(format!(
                "multipliers k={k}, m={m} must be distinct, nonzero and of equal parity"
            )));
        }
        if !p.is_nontrivial() || !p.on_curve() {
            return Err(Error::DegeneratePair(format!("{p:?} is not a nontrivial curve point")));
        }
        let kp = p.mul(k);
        let mp = p.mul(m);
        if !kp.is_nontrivial() || !mp.is_nontrivial() || kp.x() == mp.x() {
            return Err(Error::DegeneratePair(format!(
                "multiples {k}P and {m}P are trivial or share an x-coordinate"
            )));
        }
        SolutionPair::new(kp, mp)
    }

    pub fn curve(&self) -> &Curve {
        self.p.curve()
    }

    pub fn first(&self) -> &CurvePoint {
        &self.p
    }

    pub fn second(&self) -> &CurvePoint {
        &self.q
    }

    pub fn x(&self) -> &Rational {
        self.p.x().expect("nontrivial")
    }

    pub fn y(&self) -> &Rational {
        self.p.y().expect("nontrivial")
    }

    pub fn z(&self) -> &Rational {
        self.q.x().expect("nontrivial")
    }

    pub fn w(&self) -> &Rational {
        self.q.y().expect("nontrivial")
    }

    /// `sqrt(XZ) >= 0`.
    pub fn sqrt_xz(&self) -> &Rational {
        &self.sqrt_xz
    }

    pub fn yw(&self) -> Rational {
        self.y() * self.w()
    }

    pub fn swapped(&self) -> SolutionPair {
        SolutionPair {
            p: self.q.clone(),
            q: self.p.clone(),
            sqrt_xz: self.sqrt_xz.clone(),
        }
    }

    pub fn kummer_map(&self) -> KummerPoint {
        let n = self.curve().n_rational();
        KummerPoint {
            xi: self.x() / &n,
            zeta: self.z() / &n,
            eta: self.yw() / n.pow(3),
        }
    }

    pub fn reflect_first(&self) -> Result<SolutionPair> {
        SolutionPair::new(self.p.reflect_first()?, self.q.reflect_first()?)
    }

    pub fn reflect_second(&self) -> Result<SolutionPair> {
        SolutionPair::new(self.p.reflect_second()?, self.q.reflect_second()?)
    }

    pub fn reflect_third(&self) -> Result<SolutionPair> {
        SolutionPair::new(self.p.reflect_third()?, self.q.reflect_third()?)
    }
}

/// Known nontrivial points on small congruent curves, one JSON point per line.
pub const DEFAULT_SEEDS: &str = include_str!("../data/seeds.jsonl");
