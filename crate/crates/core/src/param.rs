//! Rational right triangles and their parameters.
//!
//! A triangle scaled to hypotenuse 1 has legs `u`, `v` and is determined by
//! the slope `t = v / (u + 1)` in (0,1). Swapping the legs replaces `t` by
//! its associate `(1 - t) / (1 + t)`; exactly one of the two has numerator
//! and denominator of different parity, and that one is the canonical
//! [`Param`] of the triangle.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{from_uint, parse_rat, rational_sqrt, to_uint, Rat};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triangle {
    pub x: Rat,
    pub y: Rat,
    pub z: Rat,
}

impl Triangle {
    /// Checks positivity and `x² + y² = z²`.
    pub fn new(x: Rat, y: Rat, z: Rat) -> Result<Self> {
        if !(x.is_positive() && y.is_positive() && z.is_positive()) {
            return Err(Error::NotRightTriangle(format!(
                "sides {x},{y},{z} must be positive"
            )));
        }
        if &x * &x + &y * &y != &z * &z {
            return Err(Error::NotRightTriangle(format!("{x}² + {y}² ≠ {z}²")));
        }
        Ok(Triangle { x, y, z })
    }

    pub fn from_ints(x: u64, y: u64, z: u64) -> Result<Self> {
        Self::new(
            Rat::from_integer(x.into()),
            Rat::from_integer(y.into()),
            Rat::from_integer(z.into()),
        )
    }

    pub fn area(&self) -> Rat {
        &self.x * &self.y / Rat::from_integer(2.into())
    }

    pub fn scale(&self, k: &Rat) -> Triangle {
        assert!(k.is_positive(), "scale factor must be positive");
        Triangle {
            x: &self.x * k,
            y: &self.y * k,
            z: &self.z * k,
        }
    }

    pub fn swap_legs(&self) -> Triangle {
        Triangle {
            x: self.y.clone(),
            y: self.x.clone(),
            z: self.z.clone(),
        }
    }

    /// Same triangle up to leg order.
    pub fn congruent_to(&self, other: &Triangle) -> bool {
        self == other || self.swap_legs() == *other
    }

    /// Same shape up to leg order and a positive rational scale.
    pub fn similar_to(&self, other: &Triangle) -> bool {
        let k = &other.z / &self.z;
        self.scale(&k).congruent_to(other)
    }

    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer() && self.z.is_integer()
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.x, self.y, self.z)
    }
}

impl FromStr for Triangle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        let [x, y, z] = parts.as_slice() else {
            return Err(Error::parse(s, "expected X,Y,Z"));
        };
        Triangle::new(parse_rat(x)?, parse_rat(y)?, parse_rat(z)?)
    }
}

/// Primitive triangle parameter `m/n`: coprime, `0 < m < n`, `m + n` odd.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Param {
    // field order gives the (n, m) search ordering
    n: BigUint,
    m: BigUint,
}

impl Param {
    pub fn new(m: BigUint, n: BigUint) -> Result<Self> {
        let t = Rat::new(from_uint(&m), from_uint(&n.clone()));
        if m.is_zero() || m >= n {
            return Err(Error::ParamOutOfRange(t));
        }
        if !m.gcd(&n).is_one() || (&m + &n).is_even() {
            return Err(Error::parse(
                &t.to_string(),
                "not a primitive parameter (needs coprime m/n of opposite parity)",
            ));
        }
        Ok(Param { n, m })
    }

    pub fn from_u64(m: u64, n: u64) -> Result<Self> {
        Self::new(m.into(), n.into())
    }

    /// Strict conversion: `t` must already be primitive.
    pub fn from_rat(t: &Rat) -> Result<Self> {
        check_unit_interval(t)?;
        Self::new(to_uint(t.numer()), to_uint(t.denom()))
    }

    pub fn numer(&self) -> &BigUint {
        &self.m
    }

    pub fn denom(&self) -> &BigUint {
        &self.n
    }

    pub fn value(&self) -> Rat {
        Rat::new(from_uint(&self.m), from_uint(&self.n))
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.m, self.n)
    }
}

impl FromStr for Param {
    type Err = Error;

    /// Accepts any rational in (0,1) and returns its primitive form.
    fn from_str(s: &str) -> Result<Self> {
        primitive_normalize(&parse_rat(s)?)
    }
}

/// A parameter or the identity element (written `0`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ParamOrIdentity {
    Identity,
    Param(Param),
}

impl ParamOrIdentity {
    pub fn value(&self) -> Rat {
        match self {
            ParamOrIdentity::Identity => Rat::zero(),
            ParamOrIdentity::Param(p) => p.value(),
        }
    }

    pub fn param(&self) -> Option<&Param> {
        match self {
            ParamOrIdentity::Identity => None,
            ParamOrIdentity::Param(p) => Some(p),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, ParamOrIdentity::Identity)
    }

    /// `0` maps to the identity and `1` is rejected as degenerate.
    pub fn from_rat(t: &Rat) -> Result<Self> {
        if t.is_zero() {
            Ok(ParamOrIdentity::Identity)
        } else if t.is_one() {
            Err(Error::DegenerateParam)
        } else {
            primitive_normalize(t).map(ParamOrIdentity::Param)
        }
    }
}

impl From<Param> for ParamOrIdentity {
    fn from(p: Param) -> Self {
        ParamOrIdentity::Param(p)
    }
}

impl fmt::Display for ParamOrIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamOrIdentity::Identity => write!(f, "0"),
            ParamOrIdentity::Param(p) => p.fmt(f),
        }
    }
}

impl FromStr for ParamOrIdentity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ParamOrIdentity::from_rat(&parse_rat(s)?)
    }
}

/// A parameter with its certificate `r > 0`: `t(1 - t²) = area · r²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CongruentParam {
    t: Param,
    area: Rat,
    cert: Rat,
}

impl CongruentParam {
    pub fn param(&self) -> &Param {
        &self.t
    }

    pub fn value(&self) -> Rat {
        self.t.value()
    }

    pub fn area(&self) -> &Rat {
        &self.area
    }

    pub fn cert(&self) -> &Rat {
        &self.cert
    }

    /// Certificate of the associate, `2r / (1 + t)²`.
    pub fn associate_cert(&self) -> Rat {
        let t = self.value();
        let one_plus = Rat::one() + &t;
        Rat::from_integer(2.into()) * &self.cert / (&one_plus * &one_plus)
    }
}

impl fmt::Display for CongruentParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.t.fmt(f)
    }
}

/// An element of the triangle group: identity or a certified parameter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Member {
    Identity,
    Param(CongruentParam),
}

impl Member {
    pub fn param(&self) -> Option<&CongruentParam> {
        match self {
            Member::Identity => None,
            Member::Param(p) => Some(p),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Member::Identity)
    }

    pub fn to_param_or_identity(&self) -> ParamOrIdentity {
        match self {
            Member::Identity => ParamOrIdentity::Identity,
            Member::Param(p) => ParamOrIdentity::Param(p.t.clone()),
        }
    }

    pub fn value(&self) -> Rat {
        self.to_param_or_identity().value()
    }
}

impl From<CongruentParam> for Member {
    fn from(p: CongruentParam) -> Self {
        Member::Param(p)
    }
}

impl fmt::Display for Member {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_param_or_identity().fmt(f)
    }
}

fn check_unit_interval(t: &Rat) -> Result<()> {
    if t.is_positive() && *t < Rat::one() {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange(t.clone()))
    }
}

pub fn param_from_triangle(tri: &Triangle) -> Param {
    let u = &tri.x / &tri.z;
    let v = &tri.y / &tri.z;
    let t = v / (u + Rat::one());
    primitive_normalize(&t).expect("slope of a valid triangle lies in (0,1)")
}

/// The primitive integer triangle `(n² - m², 2mn, n² + m²)`.
pub fn triangle_from_param(t: &Param) -> Triangle {
    let m = from_uint(&t.m);
    let n = from_uint(&t.n);
    let mm = &m * &m;
    let nn = &n * &n;
    let leg_a: BigInt = &nn - &mm;
    let leg_b: BigInt = BigInt::from(2) * &m * &n;
    Triangle {
        x: Rat::from_integer(leg_a),
        y: Rat::from_integer(leg_b),
        z: Rat::from_integer(nn + mm),
    }
}

pub fn associate(t: &Rat) -> Result<Rat> {
    check_unit_interval(t)?;
    Ok((Rat::one() - t) / (Rat::one() + t))
}

pub fn primitive_normalize(t: &Rat) -> Result<Param> {
    check_unit_interval(t)?;
    if (t.numer() + t.denom()).is_odd() {
        Param::from_rat(t)
    } else {
        Param::from_rat(&associate(t)?)
    }
}

/// Certificate `r > 0` with `t(1 - t²) = area · r²`, if one exists.
pub fn membership(t: &Param, area: &Rat) -> Option<CongruentParam> {
    assert!(area.is_positive(), "area must be positive");
    let tv = t.value();
    let q = &tv * (Rat::one() - &tv * &tv) / area;
    let cert = rational_sqrt(&q).expect("t(1-t²) > 0 on (0,1)")?;
    Some(CongruentParam {
        t: t.clone(),
        area: area.clone(),
        cert,
    })
}

pub fn require_membership(t: &Param, area: &Rat) -> Result<CongruentParam> {
    membership(t, area).ok_or_else(|| Error::NotMember {
        t: Box::new(t.value()),
        area: Box::new(area.clone()),
    })
}

pub(crate) fn certified(t: Param, area: &Rat, cert: Rat) -> CongruentParam {
    CongruentParam {
        t,
        area: area.clone(),
        cert,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn p(m: u64, n: u64) -> Param {
        Param::from_u64(m, n).unwrap()
    }

    fn tri(x: u64, y: u64, z: u64) -> Triangle {
        Triangle::from_ints(x, y, z).unwrap()
    }

    #[test]
    fn param_from_triangle_examples() {
        assert_eq!(param_from_triangle(&tri(3, 4, 5)), p(1, 2));
        assert_eq!(param_from_triangle(&tri(4, 3, 5)), p(1, 2));
        assert_eq!(param_from_triangle(&tri(49, 1200, 1201)), p(24, 25));
        assert_eq!(param_from_triangle(&tri(1200, 49, 1201)), p(24, 25));
        assert_eq!(param_from_triangle(&tri(9, 40, 41)), p(4, 5));
    }

    #[test]
    fn triangle_from_param_examples() {
        assert_eq!(triangle_from_param(&p(1, 2)), tri(3, 4, 5));
        assert_eq!(triangle_from_param(&p(24, 25)), tri(49, 1200, 1201));
        assert_eq!(
            triangle_from_param(&p(117600, 1442401)),
            tri(2066690884801, 339252715200, 2094350404801)
        );
    }

    #[test]
    fn associate_examples() {
        assert_eq!(associate(&rat(1, 2)).unwrap(), rat(1, 3));
        assert_eq!(associate(&rat(24, 25)).unwrap(), rat(1, 49));
        assert_eq!(associate(&rat(8, 17)).unwrap(), rat(9, 25));
        assert!(associate(&int(1)).is_err());
        assert!(associate(&int(0)).is_err());
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(primitive_normalize(&rat(1, 3)).unwrap(), p(1, 2));
        assert_eq!(primitive_normalize(&rat(24, 25)).unwrap(), p(24, 25));
        assert_eq!(primitive_normalize(&rat(1, 49)).unwrap(), p(24, 25));
        assert!(primitive_normalize(&rat(3, 2)).is_err());
    }

    #[test]
    fn membership_examples() {
        assert_eq!(membership(&p(1, 2), &int(6)).unwrap().cert(), &rat(1, 4));
        assert_eq!(membership(&p(4, 5), &int(5)).unwrap().cert(), &rat(6, 25));
        assert!(membership(&p(1, 2), &int(5)).is_none());
    }

    #[test]
    fn area_five_triangle_has_parameter_four_fifths() {
        let t = "3/2,20/3,41/6".parse::<Triangle>().unwrap();
        assert_eq!(t.area(), int(5));
        assert_eq!(param_from_triangle(&t), p(4, 5));
    }

    #[test]
    fn area_23_regression() {
        let t: Triangle = "80155/20748,41496/3485,905141617/72306780".parse().unwrap();
        assert_eq!(t.area(), int(23));
        assert!(membership(&param_from_triangle(&t), &int(23)).is_some());
    }

    #[test]
    fn associate_certificate() {
        let c = membership(&p(1, 2), &int(6)).unwrap();
        let assoc = Param::from_rat(&rat(1, 3));
        assert!(assoc.is_err(), "1/3 is not primitive");
        // ψ(1/2) = 1/3 has certificate 2·(1/4)/(3/2)² = 2/9
        assert_eq!(c.associate_cert(), rat(2, 9));
        let t = rat(1, 3);
        assert_eq!(&t * (int(1) - &t * &t), int(6) * rat(2, 9) * rat(2, 9));
    }

    #[test]
    fn param_validation() {
        assert!(Param::from_u64(2, 4).is_err());
        assert!(Param::from_u64(1, 3).is_err());
        assert!(Param::from_u64(3, 2).is_err());
        assert!(Param::from_u64(0, 1).is_err());
        assert_eq!("1/3".parse::<Param>().unwrap(), p(1, 2));
    }

    #[test]
    fn param_or_identity_edges() {
        assert_eq!(
            ParamOrIdentity::from_rat(&int(0)).unwrap(),
            ParamOrIdentity::Identity
        );
        assert_eq!(
            ParamOrIdentity::from_rat(&int(1)),
            Err(Error::DegenerateParam)
        );
        assert_eq!("0".parse::<ParamOrIdentity>().unwrap().to_string(), "0");
    }

    #[test]
    fn triangle_validation() {
        assert!("3,4,6".parse::<Triangle>().is_err());
        assert!("-3,4,5".parse::<Triangle>().is_err());
        assert!("3,4".parse::<Triangle>().is_err());
        assert_eq!(tri(3, 4, 5).to_string(), "3,4,5");
    }
}
