//! The 26-coefficient family of invariant cubic pairs, its 14-coefficient
//! normalized slice, random sampling, and the reduction of a general pair to
//! normalized shape.

mod io;
mod normalize;

pub use io::{AnyPoint, FieldChoice, ParamFile};
pub use normalize::{normalize, NormalizeField, Normalization, NormalizationWitness};

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geomchecks::free_action_check;
use crate::polyring::{
    Coeff, Field, Monomial, Param, ParamPoly, Polynomial, NORMALIZED_SLOTS, NUM_PARAMS,
};
use crate::quotient::GradedPiece;

/// Monomial attached to slot `j` of either cubic in the general family.
pub const GENERAL_MONOMIALS: [[u8; 5]; 13] = [
    [3, 0, 0, 0, 0],
    [1, 1, 0, 1, 0],
    [1, 1, 0, 0, 1],
    [1, 0, 1, 1, 0],
    [1, 0, 1, 0, 1],
    [0, 3, 0, 0, 0],
    [0, 2, 1, 0, 0],
    [0, 1, 2, 0, 0],
    [0, 0, 3, 0, 0],
    [0, 0, 0, 3, 0],
    [0, 0, 0, 2, 1],
    [0, 0, 0, 1, 2],
    [0, 0, 0, 0, 3],
];

pub fn general_monomial(slot: usize) -> Monomial {
    Monomial::new(GENERAL_MONOMIALS[slot])
}

pub const NORMALIZED_KEYS: [&str; 14] = [
    "a1", "b1", "c1", "d1", "e1", "h1", "l1", "a2", "b2", "c2", "d2", "g2", "h2", "l2",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    User,
    Random { seed: u64, bound: i64, attempts: usize },
    Symbolic,
}

/// A point of the normalized family, entries in [`NORMALIZED_KEYS`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized14<C: Coeff> {
    values: [C; 14],
    pub provenance: Provenance,
}

/// A point of the general family; entry `(i-1)*13 + j` is `a_j^{(i)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct General26<C: Coeff> {
    values: [C; NUM_PARAMS],
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamPoint<C: Coeff> {
    Normalized14(Normalized14<C>),
    General26(General26<C>),
}

fn key_index(name: &str) -> Option<usize> {
    NORMALIZED_KEYS.iter().position(|k| *k == name)
}

impl<C: Coeff> Normalized14<C> {
    pub fn new(values: [C; 14], provenance: Provenance) -> Self {
        Normalized14 { values, provenance }
    }

    pub fn zero(ring: &C::Ring) -> Self {
        Normalized14 {
            values: std::array::from_fn(|_| C::zero(ring)),
            provenance: Provenance::User,
        }
    }

    pub fn values(&self) -> &[C; 14] {
        &self.values
    }

    pub fn get(&self, key: &str) -> &C {
        &self.values[key_index(key).unwrap_or_else(|| panic!("unknown key {key}"))]
    }

    pub fn with(mut self, key: &str, v: C) -> Self {
        self.values[key_index(key).unwrap_or_else(|| panic!("unknown key {key}"))] = v;
        self
    }

    /// Copy with `e1 = g2 = 0`.
    pub fn with_e1_g2_zero(&self) -> Self {
        let ring = self.values[0].ring();
        self.clone().with("e1", C::zero(&ring)).with("g2", C::zero(&ring))
    }

    pub fn to_map(&self) -> BTreeMap<String, String> {
        NORMALIZED_KEYS
            .iter()
            .zip(&self.values)
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }
}

impl Normalized14<ParamPoly> {
    /// The point whose coordinates are the fourteen parameter symbols.
    pub fn symbolic() -> Self {
        Normalized14 {
            values: std::array::from_fn(|k| ParamPoly::symbol(Param::normalized(k))),
            provenance: Provenance::Symbolic,
        }
    }
}

impl<C: Coeff> General26<C> {
    pub fn new(values: [C; NUM_PARAMS], provenance: Provenance) -> Self {
        General26 { values, provenance }
    }

    pub fn values(&self) -> &[C; NUM_PARAMS] {
        &self.values
    }

    /// `a_j^{(i)}`
    pub fn get(&self, component: usize, slot: usize) -> &C {
        &self.values[Param::general(component, slot).index()]
    }

    pub fn set(&mut self, component: usize, slot: usize, v: C) {
        self.values[Param::general(component, slot).index()] = v;
    }

    pub fn to_map(&self) -> BTreeMap<String, String> {
        (0..NUM_PARAMS)
            .map(|k| {
                let p = Param::general(k / 13 + 1, k % 13);
                (format!("a_{}_{}", p.component(), p.slot()), self.values[k].to_string())
            })
            .collect()
    }
}

impl General26<ParamPoly> {
    pub fn symbolic() -> Self {
        General26 {
            values: std::array::from_fn(|k| ParamPoly::symbol(Param::general(k / 13 + 1, k % 13))),
            provenance: Provenance::Symbolic,
        }
    }
}

/// Two invariant cubic forms cutting out the surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicPair<C: Coeff> {
    pub f: [Polynomial<C>; 2],
}

impl<C: Coeff> CubicPair<C> {
    pub fn new(f1: Polynomial<C>, f2: Polynomial<C>) -> Self {
        CubicPair { f: [f1, f2] }
    }

    pub fn ring(&self) -> &C::Ring {
        self.f[0].ring()
    }

    pub fn f1(&self) -> &Polynomial<C> {
        &self.f[0]
    }

    pub fn f2(&self) -> &Polynomial<C> {
        &self.f[1]
    }

    pub fn is_invariant(&self) -> bool {
        self.f.iter().all(|p| p.is_invariant() && p.homogeneous_degree() == Some(3))
    }
}

impl<C: Field> CubicPair<C> {
    pub fn linearly_independent(&self) -> bool {
        let (f1, f2) = (&self.f[0], &self.f[1]);
        if f1.is_zero() || f2.is_zero() {
            return false;
        }
        // f2 is a multiple of f1 iff f2 = (c2/c1) f1 at the leading term of f1
        let (m, c1) = f1.terms().next().expect("nonzero");
        let ratio = f2.coefficient(m).mul(&c1.inv().expect("nonzero"));
        *f2 != f1.scale(&ratio)
    }
}

pub fn build_general<C: Coeff>(p: &General26<C>) -> CubicPair<C> {
    let ring = p.values[0].ring();
    let f = |i: usize| {
        Polynomial::from_terms(
            &ring,
            (0..13).map(|j| (general_monomial(j), p.get(i, j).clone())),
        )
    };
    CubicPair::new(f(1), f(2))
}

pub fn build_normalized<C: Coeff>(t: &Normalized14<C>) -> CubicPair<C> {
    let ring = t.values[0].ring();
    let one = C::one(&ring);
    let m = |s: &str| Monomial::parse(s).expect("valid monomial");
    let v = |k: &str| t.get(k).clone();
    let f1 = Polynomial::from_terms(
        &ring,
        [
            (m("W0^3"), one.clone()),
            (m("W0 X1 Y3"), v("a1")),
            (m("W0 X1 Y4"), v("b1")),
            (m("W0 X2 Y3"), v("c1")),
            (m("W0 X2 Y4"), v("d1")),
            (m("X1^3"), one.clone()),
            (m("X1^2 X2"), v("e1")),
            (m("Y3^3"), one.clone()),
            (m("Y3^2 Y4"), v("h1")),
            (m("Y3 Y4^2"), v("l1")),
        ],
    );
    let f2 = Polynomial::from_terms(
        &ring,
        [
            (m("W0^3"), one.clone()),
            (m("W0 X1 Y3"), v("a2")),
            (m("W0 X1 Y4"), v("b2")),
            (m("W0 X2 Y3"), v("c2")),
            (m("W0 X2 Y4"), v("d2")),
            (m("X1 X2^2"), v("g2")),
            (m("X2^3"), one.clone()),
            (m("Y3^2 Y4"), v("h2")),
            (m("Y3 Y4^2"), v("l2")),
            (m("Y4^3"), one),
        ],
    );
    CubicPair::new(f1, f2)
}

pub fn embed_params<C: Coeff>(t: &Normalized14<C>) -> General26<C> {
    let ring = t.values[0].ring();
    let mut values: [C; NUM_PARAMS] = std::array::from_fn(|_| C::zero(&ring));
    for (k, (_, i, j)) in NORMALIZED_SLOTS.iter().enumerate() {
        values[Param::general(*i, *j).index()] = t.values[k].clone();
    }
    for (i, j) in [(1, 0), (2, 0), (1, 5), (1, 9), (2, 8), (2, 12)] {
        values[Param::general(i, j).index()] = C::one(&ring);
    }
    General26 {
        values,
        provenance: t.provenance.clone(),
    }
}

pub fn build_pair<C: Coeff>(p: &ParamPoint<C>) -> CubicPair<C> {
    match p {
        ParamPoint::Normalized14(t) => build_normalized(t),
        ParamPoint::General26(g) => build_general(g),
    }
}

pub const DEFAULT_BOUND: i64 = 9;
pub const RETRY_CAP: usize = 100;

/// Name of the first sampling predicate that `t` fails, if any.
pub fn sampling_failure<C: Field>(t: &Normalized14<C>) -> Option<&'static str> {
    let pair = build_normalized(t);
    let action = free_action_check(&pair);
    if !action.cond_i {
        return Some("free-action condition i");
    }
    if !action.cond_ii {
        return Some("free-action condition ii");
    }
    if !action.cond_iii {
        return Some("free-action condition iii");
    }
    for n in [3, 4] {
        let piece = GradedPiece::new(&pair, n).expect("degree within cap");
        if !piece.is_generic() {
            return Some(if n == 3 {
                "degree-3 ideal slice rank"
            } else {
                "degree-4 ideal slice rank"
            });
        }
    }
    None
}

/// Seeded sample of the normalized family with integer entries in
/// `[-bound, bound]`, resampled until the free action and ideal-slice checks
/// pass.
pub fn random_params<C: Field>(ring: &C::Ring, seed: u64, bound: i64) -> Result<Normalized14<C>> {
    if bound < 1 {
        return Err(Error::Parse(format!("bound must be at least 1, got {bound}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = "";
    for attempt in 1..=RETRY_CAP {
        let values: [C; 14] = std::array::from_fn(|_| C::from_i64(ring, rng.gen_range(-bound..=bound)));
        let t = Normalized14::new(
            values,
            Provenance::Random {
                seed,
                bound,
                attempts: attempt,
            },
        );
        match sampling_failure(&t) {
            None => return Ok(t),
            Some(p) => last = p,
        }
    }
    Err(Error::RetryCapExceeded {
        predicate: last.to_string(),
        attempts: RETRY_CAP,
    })
}

/// Seeded sample without any admissibility filtering.
pub fn raw_random_params<C: Coeff>(ring: &C::Ring, seed: u64, bound: i64) -> Normalized14<C> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = std::array::from_fn(|_| C::from_i64(ring, rng.gen_range(-bound..=bound)));
    Normalized14::new(
        values,
        Provenance::Random {
            seed,
            bound,
            attempts: 1,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{Fp, PrimeField, Rational};

    #[test]
    fn zero_point_shapes() {
        let t = Normalized14::<Rational>::zero(&());
        let pair = build_normalized(&t);
        assert_eq!(pair.f1().to_string(), "W0^3 + X1^3 + Y3^3");
        assert_eq!(pair.f2().to_string(), "W0^3 + X2^3 + Y4^3");
        assert!(pair.is_invariant());
        assert!(pair.linearly_independent());
        let g = embed_params(&t);
        let ones = g.values().iter().filter(|v| v.is_one()).count();
        assert_eq!(ones, 6);
        assert!(g.values().iter().all(|v| v.is_zero() || v.is_one()));
    }

    #[test]
    fn embedding_commutes() {
        let p = PrimeField::new(101).unwrap();
        for seed in 0..20 {
            let t = raw_random_params::<Rational>(&(), seed, 9);
            assert_eq!(build_general(&embed_params(&t)), build_normalized(&t));
            let tp = raw_random_params::<Fp>(&p, seed, 9);
            assert_eq!(build_general(&embed_params(&tp)), build_normalized(&tp));
        }
    }

    #[test]
    fn single_coefficients() {
        let t = Normalized14::<Rational>::zero(&()).with("h1", Rational::from_int(2));
        let f1 = build_normalized(&t).f[0].clone();
        assert_eq!(f1.coefficient(&Monomial::parse("Y3^2 Y4").unwrap()), Rational::from_int(2));
        let t = Normalized14::<Rational>::zero(&()).with("e1", Rational::from_int(5));
        assert_eq!(*embed_params(&t).get(1, 6), Rational::from_int(5));

        let mut g = General26::<Rational>::new(std::array::from_fn(|_| Rational::from_int(0)), Provenance::User);
        g.set(1, 1, Rational::from_int(1));
        assert_eq!(build_general(&g).f1().to_string(), "W0*X1*Y3");
    }

    #[test]
    fn random_is_deterministic() {
        let a = random_params::<Rational>(&(), 42, 9).unwrap();
        let b = random_params::<Rational>(&(), 42, 9).unwrap();
        assert_eq!(a, b);
        assert!(build_normalized(&a).is_invariant());
        assert!(random_params::<Rational>(&(), 1, 0).is_err());
    }

    #[test]
    fn symbolic_point() {
        let t = Normalized14::<ParamPoly>::symbolic();
        assert_eq!(t.get("l2").to_string(), "l2");
        let pair = build_normalized(&t);
        assert!(pair.is_invariant());
        assert_eq!(build_general(&embed_params(&t)), pair);
    }
}
