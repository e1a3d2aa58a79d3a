//! Two-descent on triangles of area `A`.
//!
//! `W(t) = (1 - t, 1 + t)` in square classes is a homomorphism whose kernel
//! is exactly the set of doubled parameters. Picking one representative per
//! realized image and repeatedly adding and halving drives any parameter
//! down to one with small denominator, which proves the parameters below
//! twice the largest representative denominator generate everything.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::arith::Rat;
use crate::construction::{add_params, double_param, halve_param, sub_params};
use crate::error::{Error, Result};
use crate::param::{membership, CongruentParam, Member, Param, ParamOrIdentity};
use crate::square_class::{squarefree_class_bounded, squarefree_part, FactorBound, SquareClass};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WImage {
    pub c1: SquareClass,
    pub c2: SquareClass,
}

impl WImage {
    pub fn identity() -> Self {
        WImage {
            c1: SquareClass::identity(),
            c2: SquareClass::identity(),
        }
    }

    pub fn new(c1: i64, c2: i64) -> Self {
        WImage {
            c1: SquareClass::from_squarefree(c1),
            c2: SquareClass::from_squarefree(c2),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.c1.is_identity() && self.c2.is_identity()
    }

    pub fn mul(&self, other: &WImage) -> WImage {
        WImage {
            c1: self.c1.mul(&other.c1),
            c2: self.c2.mul(&other.c2),
        }
    }
}

impl fmt::Display for WImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.c1, self.c2)
    }
}

pub fn w_map(t: &ParamOrIdentity) -> Result<WImage> {
    w_map_bounded(t, FactorBound::DEFAULT)
}

pub fn w_map_bounded(t: &ParamOrIdentity, bound: FactorBound) -> Result<WImage> {
    let ParamOrIdentity::Param(p) = t else {
        return Ok(WImage::identity());
    };
    let tv = p.value();
    Ok(WImage {
        c1: squarefree_class_bounded(&(Rat::one() - &tv), bound)?,
        c2: squarefree_class_bounded(&(Rat::one() + &tv), bound)?,
    })
}

fn w_of_member(t: &Member, bound: FactorBound) -> Result<WImage> {
    w_map_bounded(&t.to_param_or_identity(), bound)
}

/// All `(bd, bc)` over squarefree pairwise-coprime `b, c, d` with `bcd | A`.
pub fn coset_candidates(area: u64) -> BTreeSet<WImage> {
    assert!(area >= 1, "area must be a positive integer");
    let sf_divisors: Vec<u64> = (1..=area)
        .filter(|d| area.is_multiple_of(*d) && is_squarefree(*d))
        .collect();
    let mut out = BTreeSet::new();
    for &b in &sf_divisors {
        for &c in &sf_divisors {
            if b.gcd(&c) != 1 || !area.is_multiple_of(b * c) {
                continue;
            }
            for &d in &sf_divisors {
                if b.gcd(&d) != 1 || c.gcd(&d) != 1 || !area.is_multiple_of(b * c * d) {
                    continue;
                }
                out.insert(WImage {
                    c1: SquareClass::from_squarefree((b * d) as i64),
                    c2: SquareClass::from_squarefree((b * c) as i64),
                });
            }
        }
    }
    out
}

fn is_squarefree(n: u64) -> bool {
    squarefree_part(&BigUint::from(n), FactorBound::DEFAULT)
        .map(|p| p == BigUint::from(n))
        .unwrap_or(false)
}

/// Every primitive `m/n` with `n <= denom_bound` lying in `T_A`, ordered by
/// `(n, m)`.
pub fn search_params(area: &Rat, denom_bound: u64) -> Vec<CongruentParam> {
    assert!(area.is_positive(), "area must be positive");
    (2..=denom_bound)
        .into_par_iter()
        .flat_map_iter(|n| {
            (1..n)
                .filter(move |m| (m + n) % 2 == 1 && m.gcd(&n) == 1)
                .filter_map(move |m| {
                    let p = Param::from_u64(m, n).expect("filtered to primitive");
                    membership(&p, area)
                })
        })
        .collect()
}

/// One parameter per realized W-image, plus the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentativeSet {
    area: Rat,
    reps: Vec<Member>,
    images: Vec<WImage>,
    bound: FactorBound,
}

impl RepresentativeSet {
    /// Validates membership and distinct images; the identity is added if
    /// missing.
    pub fn new(area: &Rat, reps: &[ParamOrIdentity]) -> Result<Self> {
        Self::with_factor_bound(area, reps, FactorBound::DEFAULT)
    }

    pub fn with_factor_bound(
        area: &Rat,
        reps: &[ParamOrIdentity],
        bound: FactorBound,
    ) -> Result<Self> {
        let mut set = RepresentativeSet {
            area: area.clone(),
            reps: vec![Member::Identity],
            images: vec![WImage::identity()],
            bound,
        };
        for rep in reps {
            let member = match rep {
                ParamOrIdentity::Identity => continue,
                ParamOrIdentity::Param(p) => membership(p, area).ok_or_else(|| {
                    Error::InvalidRepresentatives(format!("{p} is not in T_{area}"))
                })?,
            };
            let image = w_map_bounded(rep, bound)?;
            if let Some(i) = set.images.iter().position(|w| *w == image) {
                return Err(Error::InvalidRepresentatives(format!(
                    "{rep} and {} share W-image {image}",
                    set.reps[i]
                )));
            }
            set.reps.push(Member::Param(member));
            set.images.push(image);
        }
        Ok(set)
    }

    /// Builds a candidate set from search results, keeping the smallest
    /// denominator per W-image. Completeness is not certified.
    pub fn from_search(area: &Rat, found: &[CongruentParam], bound: FactorBound) -> Result<Self> {
        let mut best: BTreeMap<WImage, &CongruentParam> = BTreeMap::new();
        for p in found {
            let image = w_map_bounded(&ParamOrIdentity::Param(p.param().clone()), bound)?;
            if image.is_identity() {
                continue;
            }
            best.entry(image)
                .and_modify(|cur| {
                    if p.param() < cur.param() {
                        *cur = p;
                    }
                })
                .or_insert(p);
        }
        let mut chosen: Vec<&CongruentParam> = best.into_values().collect();
        chosen.sort_by(|a, b| a.param().cmp(b.param()));
        let reps: Vec<ParamOrIdentity> = chosen
            .into_iter()
            .map(|p| ParamOrIdentity::Param(p.param().clone()))
            .collect();
        Self::with_factor_bound(area, &reps, bound)
    }

    pub fn area(&self) -> &Rat {
        &self.area
    }

    pub fn reps(&self) -> &[Member] {
        &self.reps
    }

    pub fn images(&self) -> &[WImage] {
        &self.images
    }

    pub fn factor_bound(&self) -> FactorBound {
        self.bound
    }

    /// Largest denominator among the representatives (1 for `{0}` alone).
    pub fn max_denominator(&self) -> BigUint {
        self.reps
            .iter()
            .filter_map(|r| r.param().map(|p| p.param().denom().clone()))
            .max()
            .unwrap_or_else(BigUint::one)
    }

    pub fn lookup(&self, image: &WImage) -> Option<&Member> {
        self.images
            .iter()
            .position(|w| w == image)
            .map(|i| &self.reps[i])
    }
}

/// One add-and-halve step: `from + rep = 2·halved`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub from: CongruentParam,
    pub rep: Member,
    pub sum: CongruentParam,
    pub halved: CongruentParam,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub target: CongruentParam,
    pub steps: Vec<ReductionStep>,
    pub last: CongruentParam,
}

impl Decomposition {
    /// Coefficients of `t + T₀ + 2T₁ + ... + 2^{K-1}T_{K-1} = 2^K t_K`: the
    /// representatives with their multipliers, then the final parameter
    /// with `2^K`.
    pub fn relation(&self) -> (Vec<(Member, BigUint)>, BigUint) {
        let mut coeff = BigUint::one();
        let mut terms = Vec::with_capacity(self.steps.len());
        for step in &self.steps {
            terms.push((step.rep.clone(), coeff.clone()));
            coeff <<= 1;
        }
        (terms, coeff)
    }

    /// Replays the chain from the final parameter back to the target.
    pub fn verify(&self) -> Result<()> {
        let mut current = self.last.clone();
        for step in self.steps.iter().rev() {
            if step.halved != current {
                return Err(Error::InvariantViolation("broken reduction chain".into()));
            }
            let doubled = Member::Param(double_param(&current));
            let from = Member::Param(step.from.clone());
            if add_params(&from, &step.rep)? != doubled {
                return Err(Error::InvariantViolation(format!(
                    "{} + {} ≠ 2·{current}",
                    step.from, step.rep
                )));
            }
            let back = [
                add_params(&doubled, &step.rep)?,
                sub_params(&doubled, &step.rep)?,
            ];
            if !back.contains(&from) {
                return Err(Error::InvariantViolation(format!(
                    "{} not recovered from 2·{current} and {}",
                    step.from, step.rep
                )));
            }
            current = step.from.clone();
        }
        if current != self.target {
            return Err(Error::InvariantViolation(
                "chain does not reach target".into(),
            ));
        }
        Ok(())
    }
}

pub fn reduce(t: &CongruentParam, reps: &RepresentativeSet) -> Result<Decomposition> {
    if t.area() != reps.area() {
        return Err(Error::AreaMismatch(
            Box::new(t.area().clone()),
            Box::new(reps.area().clone()),
        ));
    }
    let stop = BigUint::from(2u32) * reps.max_denominator();
    let mut current = t.clone();
    let mut steps = Vec::new();
    while *current.param().denom() >= stop {
        let image = w_of_member(&Member::Param(current.clone()), reps.factor_bound())?;
        let rep = reps
            .lookup(&image)
            .ok_or_else(|| Error::MissingCoset(image.to_string()))?
            .clone();
        let sum = match add_params(&Member::Param(current.clone()), &rep)? {
            Member::Param(p) => p,
            Member::Identity => {
                return Err(Error::InvariantViolation(format!("{current} + {rep} = 0")))
            }
        };
        let halved = match halve_param(&sum) {
            Ok(h) => h.half,
            Err(Error::NotApplicable) => {
                return Err(Error::HalvingFailed(format!(
                    "{current} + {rep} = {sum} has trivial W-image but is not halvable"
                )))
            }
            Err(e) => return Err(e),
        };
        if halved.param().denom() >= current.param().denom() {
            return Err(Error::InvariantViolation(format!(
                "denominator did not decrease: {current} -> {halved}"
            )));
        }
        steps.push(ReductionStep {
            from: current,
            rep,
            sum,
            halved: halved.clone(),
        });
        current = halved;
    }
    Ok(Decomposition {
        target: t.clone(),
        steps,
        last: current,
    })
}

/// Parameters with denominator below `2C` (or up to an explicit bound).
pub fn generators(
    reps: &RepresentativeSet,
    denom_bound: Option<u64>,
) -> Result<Vec<CongruentParam>> {
    let bound = match denom_bound {
        Some(b) => b,
        None => {
            let two_c = BigUint::from(2u32) * reps.max_denominator();
            (two_c - 1u32)
                .to_u64()
                .ok_or_else(|| Error::InvalidRepresentatives("2C exceeds u64".into()))?
        }
    };
    Ok(search_params(reps.area(), bound))
}
