//! The group Q*/(Q*)² of rational square classes.
//!
//! A class is stored as a sign and a squarefree positive integer. Squarefree
//! parts are found by trial division up to a configurable bound; whatever is
//! left over is only accepted when its square-freeness can be certified.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{exact_isqrt, Rat};
use crate::error::{Error, Result};

/// Trial-division limit used when computing squarefree parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBound(pub u64);

impl FactorBound {
    pub const DEFAULT: FactorBound = FactorBound(1_000_000);
}

impl Default for FactorBound {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass {
    negative: bool,
    sf: BigUint,
}

impl SquareClass {
    pub fn identity() -> Self {
        SquareClass {
            negative: false,
            sf: BigUint::one(),
        }
    }

    /// Builds a class from a signed integer that is already squarefree.
    pub fn from_squarefree(n: i64) -> Self {
        assert!(n != 0, "zero has no square class");
        let sf = BigUint::from(n.unsigned_abs());
        debug_assert!(
            squarefree_part(&sf, FactorBound::DEFAULT).map(|p| p == sf) == Ok(true),
            "{n} is not squarefree"
        );
        SquareClass {
            negative: n < 0,
            sf,
        }
    }

    pub fn is_identity(&self) -> bool {
        !self.negative && self.sf.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn squarefree(&self) -> &BigUint {
        &self.sf
    }

    /// Group product: sign product and squarefree part of the product.
    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        let g = self.sf.gcd(&other.sf);
        let sf = (&self.sf / &g) * (&other.sf / &g);
        SquareClass {
            negative: self.negative != other.negative,
            sf,
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        write!(f, "{}", self.sf)
    }
}

pub fn class_mul(a: &SquareClass, b: &SquareClass) -> SquareClass {
    a.mul(b)
}

pub fn squarefree_class(q: &Rat) -> Result<SquareClass> {
    squarefree_class_bounded(q, FactorBound::DEFAULT)
}

pub fn squarefree_class_bounded(q: &Rat, bound: FactorBound) -> Result<SquareClass> {
    if q.is_zero() {
        return Err(Error::ZeroClass);
    }
    let num = squarefree_part(q.numer().magnitude(), bound)?;
    let den = squarefree_part(q.denom().magnitude(), bound)?;
    let class = SquareClass {
        negative: false,
        sf: num,
    }
    .mul(&SquareClass {
        negative: q.is_negative(),
        sf: den,
    });
    Ok(class)
}

/// Squarefree part of a positive integer: the product of primes dividing
/// it to an odd power.
pub fn squarefree_part(n: &BigUint, bound: FactorBound) -> Result<BigUint> {
    assert!(!n.is_zero(), "squarefree part of zero");
    if let Some(small) = n.to_u64() {
        return squarefree_part_u64(small, bound.0)
            .map_or_else(|| squarefree_part_big(n, bound), |sf| Ok(BigUint::from(sf)));
    }
    squarefree_part_big(n, bound)
}

/// Fast path; `None` when the cofactor outgrows what trial division settled.
fn squarefree_part_u64(mut n: u64, bound: u64) -> Option<u64> {
    let mut sf = 1u64;
    let mut p = 2u64;
    while p <= bound && p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            if e % 2 == 1 {
                sf *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if p.saturating_mul(p) > n {
        // n is 1 or prime
        return sf.checked_mul(n);
    }
    None
}

fn squarefree_part_big(n: &BigUint, bound: FactorBound) -> Result<BigUint> {
    let primes = primes_up_to(bound.0);
    let mut rest = n.clone();
    let mut sf = BigUint::one();
    let mut i = 0;
    while i < primes.len() {
        let first = primes[i];
        if BigUint::from(first) * first > rest {
            // everything left is 1 or a single prime
            return Ok(sf * rest);
        }
        // screen as many primes as fit in one u64 modulus
        let mut modulus = first;
        let mut j = i + 1;
        while j < primes.len() {
            match modulus.checked_mul(primes[j]) {
                Some(m) => modulus = m,
                None => break,
            }
            j += 1;
        }
        let r = (&rest % modulus)
            .to_u64()
            .expect("remainder below a u64 modulus");
        for &p in &primes[i..j] {
            if !r.is_multiple_of(p) {
                continue;
            }
            let mut e = 0u32;
            loop {
                let (q, rem) = rest.div_rem(&BigUint::from(p));
                if !rem.is_zero() {
                    break;
                }
                rest = q;
                e += 1;
            }
            if e % 2 == 1 {
                sf *= p;
            }
        }
        i = j;
    }
    Ok(sf * certified_cofactor_part(&rest, bound, n)?)
}

/// Primes up to `bound`, sieved once and shared across calls.
fn primes_up_to(bound: u64) -> Arc<Vec<u64>> {
    static CACHE: Mutex<Option<(u64, Arc<Vec<u64>>)>> = Mutex::new(None);
    let mut cache = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if let Some((b, primes)) = cache.as_ref() {
        if *b >= bound {
            let end = primes.partition_point(|&p| p <= bound);
            return if end == primes.len() {
                Arc::clone(primes)
            } else {
                Arc::new(primes[..end].to_vec())
            };
        }
    }
    let limit = usize::try_from(bound).expect("factor bound fits in memory");
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    let primes = Arc::new(primes);
    *cache = Some((bound, Arc::clone(&primes)));
    primes
}

/// Squarefree part of a cofactor whose prime factors all exceed the bound.
fn certified_cofactor_part(c: &BigUint, bound: FactorBound, original: &BigUint) -> Result<BigUint> {
    if c.is_one() || exact_isqrt(c).is_some() {
        return Ok(BigUint::one());
    }
    let b = BigUint::from(bound.0);
    // With every prime factor above the bound, fewer than three of them fit
    // below bound³: a non-square cofactor is then p or p·q with p ≠ q.
    if *c < &b * &b * &b {
        return Ok(c.clone());
    }
    for k in [3u32, 5, 7, 11, 13] {
        let r = c.nth_root(k);
        if r.pow(k) == *c {
            return certified_cofactor_part(&r, bound, original);
        }
    }
    if is_certified_prime(c) {
        return Ok(c.clone());
    }
    Err(Error::IncompleteFactorization {
        value: original.clone(),
        bound: bound.0,
    })
}

/// Miller–Rabin with the first thirteen prime bases, which is deterministic
/// below 3317044064679887385961981.
fn is_certified_prime(n: &BigUint) -> bool {
    let limit: BigUint = "3317044064679887385961981".parse().unwrap();
    if *n >= limit {
        return false;
    }
    const BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in BASES {
        let a = BigUint::from(a);
        if a >= *n {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
