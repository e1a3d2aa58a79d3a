//! Geometric constructions on triangle parameters, as exact rational maps:
//! doubling, addition, subtraction and halving.
//!
//! All square roots take the nonnegative branch, so `add_params` and
//! `sub_params` are fixed deterministic maps. On the curve they realize
//! `P + Q` and `P - Q` only up to sign, which is why cross-checks against
//! the group law are made at the level of sets of x-coordinates.

use log::debug;
use num_traits::{One, Signed, Zero};

use crate::arith::{rational_sqrt, Rat};
use crate::error::{Error, Result};
use crate::param::{
    certified, membership, param_from_triangle, primitive_normalize, CongruentParam, Member, Param,
    Triangle,
};

fn two() -> Rat {
    Rat::from_integer(2.into())
}

/// The doubling map `T = 4t(1 - t²) / (1 + t²)²` on raw values.
pub fn double_value(t: &Rat) -> Rat {
    let tt = t * t;
    let one_plus = Rat::one() + &tt;
    Rat::from_integer(4.into()) * t * (Rat::one() - &tt) / (&one_plus * &one_plus)
}

pub fn double_param(t: &CongruentParam) -> CongruentParam {
    let doubled = double_value(&t.value());
    // numerator 4mn(n²-m²) is even and (m²+n²)² is odd, so no normalization
    let param = Param::from_rat(&doubled).expect("doubling preserves primitivity");
    membership(&param, t.area()).expect("doubling preserves membership")
}

pub fn double_member(t: &Member) -> Member {
    match t {
        Member::Identity => Member::Identity,
        Member::Param(p) => Member::Param(double_param(p)),
    }
}

/// Returns `[t, 2t, 4t, ...]` with `k` entries.
pub fn iterate_double(t: &CongruentParam, k: usize) -> Vec<CongruentParam> {
    assert!(k >= 1, "iterate_double needs k >= 1");
    let mut out = Vec::with_capacity(k);
    out.push(t.clone());
    for _ in 1..k {
        let next = double_param(out.last().unwrap());
        out.push(next);
    }
    out
}

/// Integer-level doubling: legs `(X² - Y²)²` and `4XYZ²`, hypotenuse
/// `Z⁴ + 4X²Y²`.
pub fn double_int_triangle(tri: &Triangle) -> Triangle {
    let xx = &tri.x * &tri.x;
    let yy = &tri.y * &tri.y;
    let zz = &tri.z * &tri.z;
    let diff = (&xx - &yy).abs();
    Triangle {
        x: &diff * &diff,
        y: Rat::from_integer(4.into()) * &tri.x * &tri.y * &zz,
        z: &zz * &zz + Rat::from_integer(4.into()) * &xx * &yy,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    Add,
    Sub,
}

pub fn add_params(t1: &Member, t2: &Member) -> Result<Member> {
    combine(t1, t2, Branch::Add)
}

/// Symmetric in its arguments; `sub(t, t)` is the identity.
pub fn sub_params(t1: &Member, t2: &Member) -> Result<Member> {
    combine(t1, t2, Branch::Sub)
}

fn combine(t1: &Member, t2: &Member, branch: Branch) -> Result<Member> {
    let (p1, p2) = match (t1, t2) {
        (Member::Identity, other) | (other, Member::Identity) => return Ok(other.clone()),
        (Member::Param(p1), Member::Param(p2)) => (p1, p2),
    };
    if p1.area() != p2.area() {
        return Err(Error::AreaMismatch(
            Box::new(p1.area().clone()),
            Box::new(p2.area().clone()),
        ));
    }
    let area = p1.area();
    let raw = combine_value(p1, p2, branch)?;
    if raw.is_zero() {
        return Ok(Member::Identity);
    }
    if raw.is_one() {
        return Err(Error::DegenerateParam);
    }
    if !(raw.is_positive() && raw < Rat::one()) {
        return Err(Error::InvariantViolation(format!(
            "{branch:?}({p1}, {p2}) produced {raw} outside (0,1)"
        )));
    }
    let param = primitive_normalize(&raw)?;
    if param.value() != raw {
        debug!("{branch:?}({p1}, {p2}) = {raw} needed parity normalization to {param}");
    }
    let tv = param.value();
    let q = &tv * (Rat::one() - &tv * &tv) / area;
    let cert = rational_sqrt(&q)?.ok_or_else(|| {
        Error::InvariantViolation(format!(
            "{branch:?}({p1}, {p2}) = {param} has no certificate for area {area}"
        ))
    })?;
    Ok(Member::Param(certified(param, area, cert)))
}

/// `(a + b ± 2g) / (1 + t₁t₂)²` with `a = t₂(1 - t₁²)`, `b = t₁(1 - t₂²)`
/// and `g = √(ab)`.
fn combine_value(p1: &CongruentParam, p2: &CongruentParam, branch: Branch) -> Result<Rat> {
    let t1 = p1.value();
    let t2 = p2.value();
    let a = &t2 * (Rat::one() - &t1 * &t1);
    let b = &t1 * (Rat::one() - &t2 * &t2);
    let g = rational_sqrt(&(&a * &b))?.ok_or_else(|| {
        Error::InvariantViolation(format!("t₁t₂(1-t₁²)(1-t₂²) is not a square for {t1}, {t2}"))
    })?;
    // ab = (A r₁ r₂)² by the two membership relations
    let expected = p1.area() * p1.cert() * p2.cert();
    if g != expected {
        return Err(Error::InvariantViolation(format!(
            "g = {g} but A·r₁·r₂ = {expected}"
        )));
    }
    let denom = Rat::one() + &t1 * &t2;
    let cross = two() * g;
    let num = match branch {
        Branch::Add => a + b + cross,
        Branch::Sub => a + b - cross,
    };
    Ok(num / (&denom * &denom))
}

/// Result of halving: the hypotenuse-1 triangle `(u, v, 1)` with `2uv = T`
/// and its parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Halved {
    pub u: Rat,
    pub v: Rat,
    pub half: CongruentParam,
}

/// Descent step: when `1 - T = r²` and `1 + T = s²`, the triangle
/// `u = (r + s)/2`, `v = (s - r)/2` doubles to `T`.
pub fn halve_param(t: &CongruentParam) -> Result<Halved> {
    let tv = t.value();
    let (Some(r), Some(s)) = (
        rational_sqrt(&(Rat::one() - &tv))?,
        rational_sqrt(&(Rat::one() + &tv))?,
    ) else {
        return Err(Error::NotApplicable);
    };
    let u = (&r + &s) / two();
    let v = (&s - &r) / two();
    let tri = Triangle::new(u.clone(), v.clone(), Rat::one())
        .map_err(|e| Error::HalvingFailed(format!("{tv}: {e}")))?;
    let half = param_from_triangle(&tri);
    let half = membership(&half, t.area()).ok_or_else(|| {
        Error::HalvingFailed(format!("half {half} of {tv} is not in T_{}", t.area()))
    })?;
    if double_param(&half).param() != t.param() {
        return Err(Error::HalvingFailed(format!(
            "{half} does not double back to {tv}"
        )));
    }
    Ok(Halved { u, v, half })
}

pub fn halve_member(t: &Member) -> Result<Member> {
    match t {
        Member::Identity => Ok(Member::Identity),
        Member::Param(p) => halve_param(p).map(|h| Member::Param(h.half)),
    }
}
