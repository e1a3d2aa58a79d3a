//! Arithmetic in Q(√d) and triangles built from conjugate points.
//!
//! A point of `E_A` over Q(√d) added to its conjugate is rational. Its
//! difference with the conjugate has rational `x` and `y = w√d`, which is
//! the rational point `(dx, d²w)` on `E_{Ad}`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{from_uint, parse_rat, Rat};
use crate::curve::{triangle_from_point, CongruentCurve, Curve, CurvePoint, Point};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::param::Triangle;
use crate::square_class::{squarefree_part, FactorBound};

/// `a + b√d` with `d` squarefree and not 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadRat {
    a: Rat,
    b: Rat,
    d: BigInt,
}

/// Splits `d = k²·d₀` with `d₀` squarefree; rejects perfect squares.
fn normalize_radicand(d: &BigInt) -> Result<(BigInt, Rat)> {
    if d.is_zero() {
        return Err(Error::parse(&d.to_string(), "radicand must be nonzero"));
    }
    let mag = d.magnitude();
    let sf = squarefree_part(mag, FactorBound::DEFAULT)?;
    let k =
        crate::arith::exact_isqrt(&(mag / &sf)).expect("cofactor of squarefree part is a square");
    let d0 = if d.is_negative() {
        -from_uint(&sf)
    } else {
        from_uint(&sf)
    };
    if d0.is_one() {
        return Err(Error::parse(&d.to_string(), "radicand is a perfect square"));
    }
    Ok((d0, Rat::from_integer(from_uint(&k))))
}

impl QuadRat {
    /// `a + b√d`; a non-squarefree `d = k²d₀` is rewritten as `a + (bk)√d₀`.
    pub fn new(a: Rat, b: Rat, d: &BigInt) -> Result<Self> {
        let (d, k) = normalize_radicand(d)?;
        Ok(QuadRat { a, b: b * k, d })
    }

    pub fn rational(a: Rat, d: &BigInt) -> Result<Self> {
        Self::new(a, Rat::zero(), d)
    }

    fn with(&self, a: Rat, b: Rat) -> Self {
        QuadRat {
            a,
            b,
            d: self.d.clone(),
        }
    }

    pub fn rational_part(&self) -> &Rat {
        &self.a
    }

    pub fn irrational_part(&self) -> &Rat {
        &self.b
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        self.with(self.a.clone(), -&self.b)
    }

    pub fn norm(&self) -> Rat {
        &self.a * &self.a - self.d_rat() * &self.b * &self.b
    }

    pub fn trace(&self) -> Rat {
        Rat::from_integer(2.into()) * &self.a
    }

    fn d_rat(&self) -> Rat {
        Rat::from_integer(self.d.clone())
    }

    fn same_field(&self, other: &QuadRat) {
        assert_eq!(self.d, other.d, "mixing Q(√{}) and Q(√{})", self.d, other.d);
    }

    /// Sign as a real number with `√d > 0`; only defined for `d > 0`.
    pub fn real_sign(&self) -> Ordering {
        assert!(self.d.is_positive(), "Q(√{}) has no real embedding", self.d);
        let sa = self.a.cmp(&Rat::zero());
        let sb = self.b.cmp(&Rat::zero());
        if sa == sb || sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // opposite signs: the larger of a² and b²d wins
        let aa = &self.a * &self.a;
        let bbd = &self.b * &self.b * self.d_rat();
        match aa.cmp(&bbd) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn real_abs(&self) -> Self {
        if self.real_sign() == Ordering::Less {
            Field::neg(self)
        } else {
            self.clone()
        }
    }
}

impl Field for QuadRat {
    fn add(&self, rhs: &Self) -> Self {
        self.same_field(rhs);
        self.with(&self.a + &rhs.a, &self.b + &rhs.b)
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.same_field(rhs);
        self.with(&self.a - &rhs.a, &self.b - &rhs.b)
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.same_field(rhs);
        let d = self.d_rat();
        self.with(
            &self.a * &rhs.a + d * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }

    fn div(&self, rhs: &Self) -> Self {
        self.same_field(rhs);
        let n = rhs.norm();
        assert!(!n.is_zero(), "division by zero");
        let num = Field::mul(self, &rhs.conj());
        self.with(num.a / &n, num.b / n)
    }

    fn neg(&self) -> Self {
        self.with(-&self.a, -&self.b)
    }

    fn is_zero_elem(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let d = &self.d;
        if self.a.is_zero() {
            return write!(f, "{}*sqrt({d})", self.b);
        }
        if self.b.is_negative() {
            write!(f, "{}-{}*sqrt({d})", self.a, -&self.b)
        } else {
            write!(f, "{}+{}*sqrt({d})", self.a, self.b)
        }
    }
}

impl FromStr for QuadRat {
    type Err = Error;

    /// `a+b*sqrt(d)`; either part may be omitted, and `b` may be left out
    /// (`sqrt(6)`, `2-sqrt(5)`).
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(at) = s.find("sqrt(") else {
            return Err(Error::parse(&s, "expected a+b*sqrt(d)"));
        };
        let Some(radicand) = s[at + 5..].strip_suffix(')') else {
            return Err(Error::parse(&s, "unterminated sqrt("));
        };
        let d: BigInt = radicand
            .parse()
            .map_err(|_| Error::parse(&s, "radicand must be an integer"))?;
        let head = &s[..at];
        let head = head.strip_suffix('*').unwrap_or(head);
        let split = head
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last();
        let (a, b) = match split {
            Some(i) => (parse_rat(&head[..i])?, &head[i..]),
            None => (Rat::zero(), head),
        };
        let b = match b.strip_prefix('+').unwrap_or(b) {
            "" => Rat::one(),
            "-" => -Rat::one(),
            other => parse_rat(other)?,
        };
        QuadRat::new(a, b, &d)
    }
}

/// Parses a quadratic element, or a plain rational when `d` is supplied.
pub fn parse_quad(s: &str, d: &BigInt) -> Result<QuadRat> {
    if s.contains("sqrt(") {
        let q: QuadRat = s.parse()?;
        let (d0, _) = normalize_radicand(d)?;
        if q.d != d0 {
            return Err(Error::parse(s, format!("expected an element of Q(√{d0})")));
        }
        Ok(q)
    } else {
        QuadRat::rational(parse_rat(s)?, d)
    }
}

pub type QuadPoint = Point<QuadRat>;
pub type QuadCurve = CongruentCurve<QuadRat>;

pub fn quad_curve(area: &Rat, d: &BigInt) -> Result<QuadCurve> {
    Ok(CongruentCurve::new(QuadRat::rational(area.clone(), d)?))
}

pub fn conj_point(p: &QuadPoint) -> QuadPoint {
    match p {
        Point::Infinity => Point::Infinity,
        Point::Affine { x, y } => Point::affine(x.conj(), y.conj()),
    }
}

pub fn quad_point_add(curve: &QuadCurve, p: &QuadPoint, q: &QuadPoint) -> QuadPoint {
    curve.add(p, q)
}

pub fn quad_point_double(curve: &QuadCurve, p: &QuadPoint) -> QuadPoint {
    curve.double(p)
}

/// Right triangle with sides in a real quadratic field, all positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadTriangle {
    pub x: QuadRat,
    pub y: QuadRat,
    pub z: QuadRat,
}

impl QuadTriangle {
    pub fn new(x: QuadRat, y: QuadRat, z: QuadRat) -> Result<Self> {
        x.same_field(&y);
        x.same_field(&z);
        if !x.d.is_positive() {
            return Err(Error::NotRightTriangle(format!(
                "Q(√{}) has no real embedding",
                x.d
            )));
        }
        for side in [&x, &y, &z] {
            if side.real_sign() != Ordering::Greater {
                return Err(Error::NotRightTriangle(format!(
                    "side {side} is not positive"
                )));
            }
        }
        if x.square().add(&y.square()) != z.square() {
            return Err(Error::NotRightTriangle(format!("{x}² + {y}² ≠ {z}²")));
        }
        Ok(QuadTriangle { x, y, z })
    }

    pub fn area(&self) -> QuadRat {
        let two = self.x.with(Rat::from_integer(2.into()), Rat::zero());
        self.x.mul(&self.y).div(&two)
    }

    pub fn radicand(&self) -> &BigInt {
        &self.x.d
    }

    pub fn is_rational(&self) -> bool {
        self.x.is_rational() && self.y.is_rational() && self.z.is_rational()
    }
}

impl fmt::Display for QuadTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.x, self.y, self.z)
    }
}

impl FromStr for QuadTriangle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        let [x, y, z] = parts.as_slice() else {
            return Err(Error::parse(s, "expected X,Y,Z"));
        };
        let Some(d) = parts
            .iter()
            .find(|p| p.contains("sqrt("))
            .map(|p| p.parse::<QuadRat>().map(|q| q.d))
            .transpose()?
        else {
            return Err(Error::parse(s, "no side mentions sqrt(d)"));
        };
        QuadTriangle::new(parse_quad(x, &d)?, parse_quad(y, &d)?, parse_quad(z, &d)?)
    }
}

/// The point `(A(X + Z)/Y, 2A²(X + Z)/Y²)`, inverse to
/// [`quad_triangle_from_point`] on the curve of the triangle's area.
pub fn quad_point_from_triangle(tri: &QuadTriangle, area: &Rat) -> QuadPoint {
    let a = QuadRat::rational(area.clone(), &tri.x.d).expect("radicand already normalized");
    let s = tri.x.add(&tri.z);
    let x = a.mul(&s).div(&tri.y);
    let y = a.square().double().mul(&s).div(&tri.y.square());
    Point::affine(x, y)
}

/// Sides `(|x² - A²|/|y|, |2Ax/y|, |x² + A²|/|y|)` under the real embedding.
pub fn quad_triangle_from_point(curve: &QuadCurve, p: &QuadPoint) -> Result<QuadTriangle> {
    let Point::Affine { x, y } = p else {
        return Err(Error::TorsionPoint(p.to_string()));
    };
    if y.is_zero_elem() {
        return Err(Error::TorsionPoint(p.to_string()));
    }
    let a = curve.area();
    let xx = x.square();
    let aa = a.square();
    QuadTriangle::new(
        xx.sub(&aa).div(y).real_abs(),
        a.double().mul(x).div(y).real_abs(),
        xx.add(&aa).div(y).real_abs(),
    )
}

/// A rational triangle obtained from a quadratic one, with the rational
/// point it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjTriangle {
    pub curve_area: Rat,
    pub point: CurvePoint,
    pub triangle: Triangle,
}

fn check_area(tri: &QuadTriangle, area: &Rat) -> Result<()> {
    let actual = tri.area();
    if !actual.is_rational() {
        return Err(Error::HypothesisViolated(format!(
            "area {actual} is irrational"
        )));
    }
    if actual.a != *area {
        return Err(Error::HypothesisViolated(format!(
            "triangle has area {actual}, not {area}"
        )));
    }
    Ok(())
}

fn to_rational_point(p: &QuadPoint) -> Option<CurvePoint> {
    match p {
        Point::Infinity => Some(Point::Infinity),
        Point::Affine { x, y } if x.is_rational() && y.is_rational() => {
            Some(Point::affine(x.a.clone(), y.a.clone()))
        }
        _ => None,
    }
}

/// `P + conj(P)`, a rational point giving a triangle of area `A`.
pub fn conj_sum_triangle(tri: &QuadTriangle, area: &Rat) -> Result<ConjTriangle> {
    check_area(tri, area)?;
    if tri.z.a.is_zero() {
        return Err(Error::HypothesisViolated(format!(
            "hypotenuse {} has zero rational part",
            tri.z
        )));
    }
    let curve = quad_curve(area, &tri.x.d)?;
    let p = quad_point_from_triangle(tri, area);
    if !curve.contains(&p) {
        return Err(Error::InvariantViolation(format!("{p} is not on E_{area}")));
    }
    let sum = curve.add(&p, &conj_point(&p));
    let rational = to_rational_point(&sum)
        .ok_or_else(|| Error::InvariantViolation(format!("P + conj(P) = {sum} is not rational")))?;
    if rational.is_two_torsion() {
        return Err(Error::Degenerate(format!(
            "P + conj(P) = {rational} is torsion"
        )));
    }
    let e = Curve::for_area(area);
    let triangle = triangle_from_point(&e, &rational)?;
    Ok(ConjTriangle {
        curve_area: area.clone(),
        point: rational,
        triangle,
    })
}

/// `P - conj(P) = (x, w√d)` transported to `(dx, d²w)` on `E_{Ad}`.
pub fn conj_diff_triangle(tri: &QuadTriangle, area: &Rat) -> Result<ConjTriangle> {
    check_area(tri, area)?;
    if tri.is_rational() {
        return Err(Error::Degenerate(
            "rational triangle: P - conj(P) = O".into(),
        ));
    }
    if tri.z.is_rational() {
        return Err(Error::HypothesisViolated(format!(
            "hypotenuse {} is rational",
            tri.z
        )));
    }
    let d = tri.x.d.clone();
    let curve = quad_curve(area, &d)?;
    let p = quad_point_from_triangle(tri, area);
    if !curve.contains(&p) {
        return Err(Error::InvariantViolation(format!("{p} is not on E_{area}")));
    }
    let diff = curve.sub(&p, &conj_point(&p));
    let Point::Affine { x, y } = &diff else {
        return Err(Error::Degenerate("P - conj(P) = O".into()));
    };
    if !x.is_rational() || !y.a.is_zero() {
        return Err(Error::InvariantViolation(format!(
            "P - conj(P) = {diff} is not of the form (x, w√d)"
        )));
    }
    let dr = Rat::from_integer(d);
    let twisted_area = area * &dr;
    let moved = Point::affine(&dr * &x.a, &dr * &dr * &y.b);
    let e = Curve::for_area(&twisted_area);
    if !e.contains(&moved) {
        return Err(Error::InvariantViolation(format!(
            "{moved} is not on E_{twisted_area}"
        )));
    }
    if moved.is_two_torsion() {
        return Err(Error::Degenerate(format!(
            "transported point {moved} is torsion"
        )));
    }
    let triangle = triangle_from_point(&e, &moved)?;
    Ok(ConjTriangle {
        curve_area: twisted_area,
        point: moved,
        triangle,
    })
}
