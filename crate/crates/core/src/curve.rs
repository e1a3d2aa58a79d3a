//! The congruent number curve `E_A: y² = x³ - A²x` and its maps to and from
//! triangles.
//!
//! The group law is written once over any [`Field`], so the same code runs
//! over Q and over quadratic fields.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::arith::{parse_rat, Rat};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::param::{primitive_normalize, CongruentParam, Member, ParamOrIdentity, Triangle};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Point<F> {
    Infinity,
    Affine { x: F, y: F },
}

impl<F: Field> Point<F> {
    pub fn affine(x: F, y: F) -> Self {
        Point::Affine { x, y }
    }

    pub fn x(&self) -> Option<&F> {
        match self {
            Point::Infinity => None,
            Point::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&F> {
        match self {
            Point::Infinity => None,
            Point::Affine { y, .. } => Some(y),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    /// Infinity or a point with `y = 0`.
    pub fn is_two_torsion(&self) -> bool {
        match self {
            Point::Infinity => true,
            Point::Affine { y, .. } => y.is_zero_elem(),
        }
    }
}

impl<F: Field> fmt::Display for Point<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "O"),
            Point::Affine { x, y } => write!(f, "{x},{y}"),
        }
    }
}

pub type CurvePoint = Point<Rat>;

impl FromStr for CurvePoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "O" {
            return Ok(Point::Infinity);
        }
        let Some((x, y)) = s.split_once(',') else {
            return Err(Error::parse(s, "expected x,y or O"));
        };
        Ok(Point::affine(parse_rat(x)?, parse_rat(y)?))
    }
}

/// `y² = x³ - A²x` over a field containing `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruentCurve<F> {
    area: F,
}

pub type Curve = CongruentCurve<Rat>;

impl<F: Field> CongruentCurve<F> {
    pub fn new(area: F) -> Self {
        CongruentCurve { area }
    }

    pub fn area(&self) -> &F {
        &self.area
    }

    pub fn contains(&self, p: &Point<F>) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine { x, y } => y.square() == self.rhs(x),
        }
    }

    fn rhs(&self, x: &F) -> F {
        x.mul(&x.square().sub(&self.area.square()))
    }

    pub fn neg(&self, p: &Point<F>) -> Point<F> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::affine(x.clone(), y.neg()),
        }
    }

    pub fn add(&self, p: &Point<F>, q: &Point<F>) -> Point<F> {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, other) | (other, Point::Infinity) => return other.clone(),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        if x1 == x2 {
            if y1.add(y2).is_zero_elem() {
                return Point::Infinity;
            }
            return self.double(p);
        }
        let m = y2.sub(y1).div(&x2.sub(x1));
        let x3 = m.square().sub(x1).sub(x2);
        let y3 = m.mul(&x1.sub(&x3)).sub(y1);
        Point::affine(x3, y3)
    }

    pub fn sub(&self, p: &Point<F>, q: &Point<F>) -> Point<F> {
        self.add(p, &self.neg(q))
    }

    pub fn double(&self, p: &Point<F>) -> Point<F> {
        let (x, y) = match p {
            Point::Infinity => return Point::Infinity,
            Point::Affine { x, y } => (x, y),
        };
        if y.is_zero_elem() {
            return Point::Infinity;
        }
        let xx = x.square();
        let m = xx
            .add(&xx)
            .add(&xx)
            .sub(&self.area.square())
            .div(&y.double());
        let x3 = m.square().sub(&x.double());
        let y3 = m.mul(&x.sub(&x3)).sub(y);
        Point::affine(x3, y3)
    }

    /// `n·P` by double-and-add; negative `n` multiplies `-P`.
    pub fn mul(&self, n: i64, p: &Point<F>) -> Point<F> {
        let base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = Point::Infinity;
        let mut pow = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &pow);
            }
            pow = self.double(&pow);
            k >>= 1;
        }
        acc
    }
}

impl Curve {
    pub fn for_area(area: &Rat) -> Self {
        assert!(area.is_positive(), "area must be positive");
        CongruentCurve::new(area.clone())
    }

    pub fn check(&self, p: &CurvePoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::NotOnCurve(p.to_string()))
        }
    }

    pub fn two_torsion(&self) -> [CurvePoint; 4] {
        let a = self.area.clone();
        [
            Point::Infinity,
            Point::affine(Rat::zero(), Rat::zero()),
            Point::affine(a.clone(), Rat::zero()),
            Point::affine(-a, Rat::zero()),
        ]
    }
}

/// `Φ(t) = (A/t, r·A²/t²)` with the positive certificate.
pub fn phi(t: &CongruentParam) -> CurvePoint {
    let tv = t.value();
    let a = t.area();
    Point::affine(a / &tv, t.cert() * a * a / (&tv * &tv))
}

pub fn phi_member(t: &Member) -> Result<CurvePoint> {
    match t {
        Member::Identity => Err(Error::IdentityHasNoPoint),
        Member::Param(p) => Ok(phi(p)),
    }
}

/// `A/x` for points with `x > A`; points with `-A < x < 0` give `A/x < -1`,
/// identified with `-x/A` in (0,1). Torsion maps to the identity.
pub fn phi_inv(curve: &Curve, p: &CurvePoint) -> Result<ParamOrIdentity> {
    let Point::Affine { x, y } = p else {
        return Ok(ParamOrIdentity::Identity);
    };
    if y.is_zero() {
        return Ok(ParamOrIdentity::Identity);
    }
    let a = curve.area();
    let t = if x > a {
        a / x
    } else if x.is_negative() && x > &-a {
        -x / a
    } else {
        return Err(Error::InvariantViolation(format!(
            "x = {x} lies off the real locus of E_{a}"
        )));
    };
    Ok(ParamOrIdentity::Param(primitive_normalize(&t)?))
}

/// Point `(r², rs)` on `E_A` with `r = Z/2`, `s = (X² - Y²)/4`, where `A`
/// is the triangle's area.
pub fn psi_map(tri: &Triangle) -> CurvePoint {
    let r = &tri.z / Rat::from_integer(2.into());
    let s = (&tri.x * &tri.x - &tri.y * &tri.y) / Rat::from_integer(4.into());
    Point::affine(&r * &r, r * s)
}

/// `(x, y) ↦ (A(x + A)/(x - A), 2y(A/(x - A))²)`, realizing the leg swap
/// on parameters. As a map of points this is `P ↦ -(P + (A, 0))`.
pub fn isogeny<F: Field>(curve: &CongruentCurve<F>, p: &Point<F>) -> Point<F> {
    let Point::Affine { x, y } = p else {
        return Point::affine(curve.area().clone(), curve.area().sub(curve.area()));
    };
    let a = curve.area();
    let d = x.sub(a);
    if d.is_zero_elem() {
        return Point::Infinity;
    }
    let k = a.div(&d);
    Point::affine(a.mul(&x.add(a)).div(&d), y.double().mul(&k.square()))
}

/// Sides `(|x² - A²|/|y|, |2Ax/y|, (x² + A²)/|y|)`, a triangle of area `A`.
pub fn triangle_from_point(curve: &Curve, p: &CurvePoint) -> Result<Triangle> {
    let Point::Affine { x, y } = p else {
        return Err(Error::TorsionPoint(p.to_string()));
    };
    if y.is_zero() {
        return Err(Error::TorsionPoint(p.to_string()));
    }
    let a = curve.area();
    let yabs = y.abs();
    let xx = x * x;
    let aa = a * a;
    Triangle::new(
        (&xx - &aa).abs() / &yabs,
        (Rat::from_integer(2.into()) * a * x / &yabs).abs(),
        (xx + aa) / yabs,
    )
}
