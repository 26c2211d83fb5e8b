//! Polynomials in the 26 family coefficients with rational coefficients.
//!
//! Symbols are the coefficient slots `a_i_j` (component `i` in 1..=2, slot
//! `j` in 0..=12). The fourteen coordinates of the normalized family are a
//! subset of these slots and print under their short names (`a1`, `e1`, ...).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::scalar::{Coeff, Rational};
use crate::error::{Error, Result};

pub const NUM_PARAMS: usize = 26;

/// One of the 26 coefficient slots.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Param(u8);

/// Short names of the normalized coordinates and their general slots.
pub const NORMALIZED_SLOTS: [(&str, usize, usize); 14] = [
    ("a1", 1, 1),
    ("b1", 1, 2),
    ("c1", 1, 3),
    ("d1", 1, 4),
    ("e1", 1, 6),
    ("h1", 1, 10),
    ("l1", 1, 11),
    ("a2", 2, 1),
    ("b2", 2, 2),
    ("c2", 2, 3),
    ("d2", 2, 4),
    ("g2", 2, 7),
    ("h2", 2, 10),
    ("l2", 2, 11),
];

impl Param {
    /// Slot `a_j^{(i)}`.
    pub fn general(component: usize, slot: usize) -> Param {
        assert!((1..=2).contains(&component) && slot <= 12);
        Param(((component - 1) * 13 + slot) as u8)
    }

    /// The `k`-th normalized coordinate in the fixed key order.
    pub fn normalized(k: usize) -> Param {
        let (_, i, j) = NORMALIZED_SLOTS[k];
        Param::general(i, j)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn component(self) -> usize {
        self.0 as usize / 13 + 1
    }

    pub fn slot(self) -> usize {
        self.0 as usize % 13
    }

    pub fn name(self) -> String {
        NORMALIZED_SLOTS
            .iter()
            .find(|(_, i, j)| *i == self.component() && *j == self.slot())
            .map(|(n, _, _)| n.to_string())
            .unwrap_or_else(|| format!("a_{}_{}", self.component(), self.slot()))
    }

    pub fn from_name(name: &str) -> Option<Param> {
        if let Some((_, i, j)) = NORMALIZED_SLOTS.iter().find(|(n, _, _)| *n == name) {
            return Some(Param::general(*i, *j));
        }
        let rest = name.strip_prefix("a_")?;
        let (i, j) = rest.split_once('_')?;
        let i: usize = i.parse().ok()?;
        let j: usize = j.parse().ok()?;
        ((1..=2).contains(&i) && j <= 12).then(|| Param::general(i, j))
    }
}

/// Exponent vector over the 26 symbols.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamMono([u8; NUM_PARAMS]);

impl ParamMono {
    pub fn one() -> Self {
        ParamMono([0; NUM_PARAMS])
    }

    pub fn var(p: Param) -> Self {
        let mut e = [0; NUM_PARAMS];
        e[p.index()] = 1;
        ParamMono(e)
    }

    pub fn from_factors(factors: &[(Param, u8)]) -> Self {
        let mut m = ParamMono::one();
        for &(p, e) in factors {
            m.0[p.index()] += e;
        }
        m
    }

    pub fn exponent(&self, p: Param) -> u8 {
        self.0[p.index()]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        ParamMono(e)
    }

    pub fn factors(&self) -> impl Iterator<Item = (Param, u8)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (Param(i as u8), e))
    }
}

impl fmt::Display for ParamMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors()
            .map(|(p, e)| {
                if e == 1 {
                    p.name()
                } else {
                    format!("{}^{}", p.name(), e)
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for ParamMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sparse polynomial in the family coefficients. No zero terms are stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ParamPoly {
    terms: BTreeMap<ParamMono, Rational>,
}

impl ParamPoly {
    pub fn constant(c: Rational) -> Self {
        Self::term(c, ParamMono::one())
    }

    pub fn symbol(p: Param) -> Self {
        Self::term(Rational::from_int(1), ParamMono::var(p))
    }

    pub fn term(c: Rational, m: ParamMono) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ParamPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamMono, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &ParamMono) -> Rational {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| Rational::from_int(0))
    }

    /// Single term `c * m`, if the polynomial has exactly one term.
    pub fn as_single_term(&self) -> Option<(&ParamMono, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::from_int(0)),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_one())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    fn insert_add(&mut self, m: ParamMono, c: Rational) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Evaluates at an assignment of all 26 symbols.
    pub fn eval<C: Coeff>(&self, ring: &C::Ring, values: &[C; NUM_PARAMS]) -> Option<C> {
        let mut acc = C::zero(ring);
        for (m, c) in &self.terms {
            let mut t = C::from_rational(ring, c)?;
            for (p, e) in m.factors() {
                for _ in 0..e {
                    t = t.mul(&values[p.index()]);
                }
            }
            acc = acc.add(&t);
        }
        Some(acc)
    }

    /// Sets the given symbols to zero.
    pub fn specialize_zero(&self, symbols: &[Param]) -> ParamPoly {
        ParamPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| symbols.iter().all(|&p| m.exponent(p) == 0))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl serde::Serialize for ParamPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses a single term in compact notation: `3`, `-a1`, `2h1`, `-2/3*l2`,
/// `2*h1*l2`, `a_1_5`. Empty input is zero.
impl FromStr for ParamPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(ParamPoly::default());
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, s),
        };
        let split = body
            .find(|c: char| c.is_ascii_alphabetic())
            .unwrap_or(body.len());
        let (num, syms) = body.split_at(split);
        let num = num.trim_end_matches('*');
        let mut c = if num.is_empty() {
            Rational::from_int(1)
        } else {
            num.parse::<Rational>()?
        };
        if neg {
            c = c.neg();
        }
        let mut m = ParamMono::one();
        for factor in syms.split('*').filter(|f| !f.is_empty()) {
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<u8>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?,
                ),
                None => (factor, 1),
            };
            let p = Param::from_name(name)
                .ok_or_else(|| Error::Parse(format!("unknown parameter {name:?}")))?;
            m = m.mul(&ParamMono::from_factors(&[(p, exp)]));
        }
        Ok(ParamPoly::term(c, m))
    }
}

impl Coeff for ParamPoly {
    type Ring = ();

    fn ring(&self) {}

    fn zero(_: &()) -> Self {
        ParamPoly::default()
    }

    fn one(_: &()) -> Self {
        ParamPoly::constant(Rational::from_int(1))
    }

    fn from_i64(_: &(), v: i64) -> Self {
        ParamPoly::constant(Rational::from_int(v))
    }

    fn from_rational(_: &(), q: &Rational) -> Option<Self> {
        Some(ParamPoly::constant(q.clone()))
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(*m, c.clone());
        }
        out
    }

    fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(*m, c.neg());
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = ParamPoly::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert_add(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }

    fn neg(&self) -> Self {
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    /// Only nonzero constants are units.
    fn unit_inverse(&self) -> Option<Self> {
        let c = self.as_constant()?;
        c.unit_inverse().map(ParamPoly::constant)
    }

    fn ring_name(_: &()) -> String {
        "parameter-polynomials".to_string()
    }
}
