#![allow(dead_code)]

use congruent_core::arith::int;
use congruent_core::curve::phi;
use congruent_core::{
    membership, phi_inv, CongruentParam, Curve, CurvePoint, Error, Member, Param, ParamOrIdentity,
    Rat,
};
use num_integer::{Integer, Roots};
use proptest::prelude::*;

/// Brute-force search on machine integers: `m/n` lies in `T_A` exactly when
/// `m n (n² - m²) A` is a perfect square.
pub fn oracle_search(area: u64, bound: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for n in 2..=bound {
        for m in 1..n {
            if (m + n) % 2 == 0 || m.gcd(&n) != 1 {
                continue;
            }
            let v = m as u128 * n as u128 * (n * n - m * m) as u128 * area as u128;
            let r = v.sqrt();
            if r * r == v {
                out.push((m, n));
            }
        }
    }
    out
}

/// Squarefree kernel of a small integer, by plain trial division.
pub fn small_squarefree(mut v: u64) -> u64 {
    let mut out = 1;
    let mut p = 2;
    while p * p <= v {
        let mut e = 0;
        while v.is_multiple_of(p) {
            v /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p;
        }
        p += 1;
    }
    out * v
}

/// A primitive parameter together with the area it certifies.
pub fn base_param(m: u64, n: u64) -> CongruentParam {
    let p = Param::from_u64(m, n).unwrap();
    let area = small_squarefree(m * n * (n * n - m * m));
    membership(&p, &int(area as i64)).expect("every parameter certifies its own area class")
}

pub fn primitive_pair(max_n: u64) -> impl Strategy<Value = (u64, u64)> {
    (2..=max_n)
        .prop_flat_map(|n| (1..n, Just(n)))
        .prop_filter("primitive", |&(m, n)| (m + n) % 2 == 1 && m.gcd(&n) == 1)
}

pub fn base_strategy(max_n: u64) -> impl Strategy<Value = CongruentParam> {
    primitive_pair(max_n).prop_map(|(m, n)| base_param(m, n))
}

/// `k·P + T` for the point `P = phi(t)` and a 2-torsion point `T`.
pub fn orbit_point(curve: &Curve, base: &CurvePoint, k: i64, torsion: usize) -> CurvePoint {
    curve.add(&curve.mul(k, base), &curve.two_torsion()[torsion])
}

pub fn member_of(curve: &Curve, p: &CurvePoint) -> Member {
    match phi_inv(curve, p).unwrap() {
        ParamOrIdentity::Identity => Member::Identity,
        ParamOrIdentity::Param(q) => {
            Member::Param(membership(&q, curve.area()).expect("curve points give members"))
        }
    }
}

/// Two members of `T_A` drawn from the orbit of a single base parameter.
pub fn orbit_pair(max_n: u64, max_k: i64) -> impl Strategy<Value = (Member, Member)> {
    (
        base_strategy(max_n),
        1..=max_k,
        0..4usize,
        1..=max_k,
        0..4usize,
    )
        .prop_map(|(t, k1, i1, k2, i2)| {
            let curve = Curve::for_area(t.area());
            let p = phi(&t);
            (
                member_of(&curve, &orbit_point(&curve, &p, k1, i1)),
                member_of(&curve, &orbit_point(&curve, &p, k2, i2)),
            )
        })
}

pub fn orbit_member(max_n: u64, max_k: i64) -> impl Strategy<Value = CongruentParam> {
    (base_strategy(max_n), 1..=max_k, 0..4usize).prop_map(|(t, k, i)| {
        let curve = Curve::for_area(t.area());
        match member_of(&curve, &orbit_point(&curve, &phi(&t), k, i)) {
            Member::Param(p) => p,
            Member::Identity => unreachable!("non-torsion base point"),
        }
    })
}

/// Points `aP + bQ + T` on `E_A` spanned by the given generators.
pub fn lattice_points(area: i64, gens: &[&str], range: i64) -> Vec<CurvePoint> {
    let curve = Curve::for_area(&int(area));
    let gens: Vec<CurvePoint> = gens.iter().map(|g| g.parse().unwrap()).collect();
    let mut combos = vec![CurvePoint::Infinity];
    for g in &gens {
        let mut next = Vec::new();
        for c in &combos {
            for k in -range..=range {
                next.push(curve.add(c, &curve.mul(k, g)));
            }
        }
        combos = next;
    }
    let mut out = Vec::new();
    for c in combos {
        for t in curve.two_torsion() {
            let p = curve.add(&c, &t);
            if !p.is_two_torsion() && !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

pub fn is_incomplete<T>(r: &Result<T, Error>) -> bool {
    matches!(r, Err(Error::IncompleteFactorization { .. }))
}

pub fn x_of(p: &CurvePoint) -> Option<Rat> {
    p.x().cloned()
}
