use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::monomial::{Monomial, NVARS, VAR_WEIGHTS};
use super::scalar::Coeff;
use crate::error::{Error, Result};

/// Sparse polynomial in `W0, X1, X2, Y3, Y4` over a coefficient ring.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial<C: Coeff> {
    ring: C::Ring,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Polynomial<C> {
    pub fn zero(ring: &C::Ring) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut p = Self::zero(&c.ring());
        p.add_term(m, c);
        p
    }

    pub fn monomial(ring: &C::Ring, m: Monomial) -> Self {
        Self::term(C::one(ring), m)
    }

    pub fn var(ring: &C::Ring, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(i))
    }

    pub fn from_terms(ring: &C::Ring, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &C::Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| C::zero(&self.ring))
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
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

    /// Common degree of all terms; `None` for zero or inhomogeneous input.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let d = it.next()?.degree();
        it.all(|m| m.degree() == d).then_some(d)
    }

    pub fn is_weight_homogeneous(&self, w: u8) -> bool {
        self.terms.keys().all(|m| m.weight() == w)
    }

    /// Invariant under the order-3 action, i.e. weight-homogeneous of weight 0.
    pub fn is_invariant(&self) -> bool {
        self.is_weight_homogeneous(0)
    }

    /// Splits into weight components 0, 1, 2.
    pub fn weight_components(&self) -> [Polynomial<C>; 3] {
        let mut out: [Polynomial<C>; 3] = std::array::from_fn(|_| Self::zero(&self.ring));
        for (m, c) in &self.terms {
            out[m.weight() as usize]
                .terms
                .insert(*m, c.clone());
        }
        out
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::MixedRings(
                C::ring_name(&self.ring),
                C::ring_name(&other.ring),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.neg());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = Self::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(&self.ring);
        if c.is_zero() {
            return out;
        }
        for (m, a) in &self.terms {
            out.add_term(*m, a.mul(c));
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(C::one(&self.ring));
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        assert!(var < NVARS);
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if let Some(q) = m.div_var(var) {
                out.add_term(q, c.mul(&C::from_i64(&self.ring, e as i64)));
            }
        }
        out
    }

    /// Gradient `(dP/dW0, ..., dP/dY4)`.
    pub fn gradient(&self) -> [Polynomial<C>; NVARS] {
        std::array::from_fn(|i| self.derivative(i))
    }

    /// Replaces each variable by the corresponding polynomial.
    pub fn substitute(&self, images: &[Polynomial<C>; NVARS]) -> Result<Self> {
        for img in images {
            self.check_ring(img)?;
        }
        let maxdeg: [u8; NVARS] = std::array::from_fn(|i| {
            self.terms.keys().map(|m| m.exp(i)).max().unwrap_or(0)
        });
        let powers: Vec<Vec<Polynomial<C>>> = (0..NVARS)
            .map(|i| {
                let mut v = vec![Self::constant(C::one(&self.ring))];
                for k in 1..=maxdeg[i] as usize {
                    let next = &v[k - 1] * &images[i];
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for i in 0..NVARS {
                let e = m.exp(i) as usize;
                if e > 0 {
                    t = &t * &powers[i][e];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[C; NVARS]) -> C {
        let mut acc = C::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, x) in point.iter().enumerate() {
                for _ in 0..m.exp(i) {
                    t = t.mul(x);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Applies `f` to every coefficient, dropping terms that map to zero.
    pub fn map_coeffs<D: Coeff>(&self, ring: &D::Ring, f: impl Fn(&C) -> D) -> Polynomial<D> {
        Polynomial::from_terms(ring, self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn try_map_coeffs<D: Coeff>(
        &self,
        ring: &D::Ring,
        f: impl Fn(&C) -> Option<D>,
    ) -> Option<Polynomial<D>> {
        let mut out = Polynomial::zero(ring);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c)?);
        }
        Some(out)
    }

    /// Action of the generator on the weight-decomposed polynomial.
    pub fn apply_tau(&self) -> TauImage<C> {
        TauImage::from_polynomial(self).apply_tau()
    }
}

/// A polynomial kept as its three weight components, each tagged with the
/// power of the cube root of unity it has been scaled by.
///
/// The group action never multiplies by a numeric root of unity; it only
/// advances these tags.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TauImage<C: Coeff> {
    components: [Polynomial<C>; 3],
    eps_power: [u8; 3],
}

impl<C: Coeff> TauImage<C> {
    pub fn from_polynomial(p: &Polynomial<C>) -> Self {
        TauImage {
            components: p.weight_components(),
            eps_power: [0; 3],
        }
    }

    /// Component of weight `m` picks up one more factor `eps^m`.
    pub fn apply_tau(&self) -> Self {
        let mut out = self.clone();
        for m in 0..3 {
            out.eps_power[m] = (out.eps_power[m] + m as u8) % 3;
        }
        out
    }

    pub fn component(&self, m: u8) -> &Polynomial<C> {
        &self.components[m as usize]
    }

    pub fn eps_power(&self, m: u8) -> u8 {
        self.eps_power[m as usize]
    }

    /// True when the weight-1 and weight-2 components vanish.
    pub fn is_invariant(&self) -> bool {
        self.components[1].is_zero() && self.components[2].is_zero()
    }

    /// Recombines the components; only meaningful when every nonzero
    /// component carries tag 0.
    pub fn untagged(&self) -> Option<Polynomial<C>> {
        let ring = self.components[0].ring().clone();
        let mut out = Polynomial::zero(&ring);
        for m in 0..3 {
            if self.components[m].is_zero() {
                continue;
            }
            if self.eps_power[m] != 0 {
                return None;
            }
            out = &out + &self.components[m];
        }
        Some(out)
    }
}

/// Weight shift of `d/dx_var`: the derivative of a weight-`w` polynomial has
/// weight `w - weight(var)`.
pub fn derivative_weight_shift(var: usize) -> u8 {
    (3 - VAR_WEIGHTS[var]) % 3
}

impl<'a, C: Coeff> Add<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl<'a, C: Coeff> Sub<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl<'a, C: Coeff> Mul<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl<C: Coeff> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        self.map_coeffs(&self.ring, |c| c.neg())
    }
}

impl<C: Coeff> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(m, c)| {
                if m.degree() == 0 {
                    format!("({c})")
                } else if c.is_one() {
                    m.to_string()
                } else {
                    format!("({c})*{m}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Coeff> fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::super::monomial::{W0, X1, X2, Y3};
    use super::super::scalar::{Fp, PrimeField, Rational};
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    fn mono(s: &str) -> Monomial {
        Monomial::parse(s).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let x1 = Polynomial::<Rational>::var(&(), X1);
        let x2 = Polynomial::<Rational>::var(&(), X2);
        let p = &(&x1 + &x2) * &(&x1 - &x2);
        let expect = Polynomial::from_terms(&(), [(mono("X1^2"), q(1)), (mono("X2^2"), q(-1))]);
        assert_eq!(p, expect);
    }

    #[test]
    fn derivatives() {
        let w = Polynomial::<Rational>::monomial(&(), mono("W0^3"));
        assert_eq!(w.derivative(W0), Polynomial::term(q(3), mono("W0^2")));
        let p = Polynomial::<Rational>::monomial(&(), mono("X1^2*X2"));
        assert_eq!(p.derivative(X1), Polynomial::term(q(2), mono("X1*X2")));
        assert!(p.derivative(Y3).is_zero());
    }

    #[test]
    fn swap_substitution() {
        let p = Polynomial::<Rational>::monomial(&(), mono("X1^3"));
        let mut imgs: [Polynomial<Rational>; NVARS] =
            std::array::from_fn(|i| Polynomial::var(&(), i));
        imgs.swap(X1, X2);
        assert_eq!(
            p.substitute(&imgs).unwrap(),
            Polynomial::monomial(&(), mono("X2^3"))
        );
    }

    #[test]
    fn mixed_prime_fields_error() {
        let f7 = PrimeField::new(7).unwrap();
        let f11 = PrimeField::new(11).unwrap();
        let a = Polynomial::<Fp>::var(&f7, X1);
        let b = Polynomial::<Fp>::var(&f11, X1);
        assert!(matches!(a.try_add(&b), Err(Error::MixedRings(_, _))));
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn tau_action_tags() {
        let p = Polynomial::<Rational>::from_terms(
            &(),
            [(mono("W0^3"), q(1)), (mono("W0^2*X1"), q(2)), (mono("X1*Y3"), q(1))],
        );
        let once = p.apply_tau();
        assert!(!once.is_invariant());
        assert_eq!(once.eps_power(1), 1);
        assert_eq!(once.eps_power(0), 0);
        assert_eq!(once.component(0).num_terms(), 2);
        let thrice = once.apply_tau().apply_tau();
        assert_eq!(thrice, TauImage::from_polynomial(&p));
        assert_eq!(thrice.untagged().unwrap(), p);

        let inv = Polynomial::<Rational>::monomial(&(), mono("X1*Y3"));
        assert!(inv.apply_tau().is_invariant());
    }

    #[test]
    fn evaluation() {
        let p = Polynomial::<Rational>::from_terms(
            &(),
            [(mono("W0^3"), q(1)), (mono("X1^3"), q(1)), (mono("W0*X1*Y3"), q(5))],
        );
        assert_eq!(p.eval(&[q(1), q(0), q(0), q(0), q(0)]), q(1));
        assert_eq!(p.eval(&[q(1), q(2), q(0), q(3), q(0)]), q(1 + 8 + 30));
    }
}
