//! Reduction of a general invariant pair to the normalized shape.
//!
//! Pencil members of the binary cubics in (X1, X2) acquire a double root
//! exactly at the roots of the Jacobian quartic of the two cubics. Two such
//! roots, their pencil members, a root of each corresponding member in
//! (Y3, Y4), and a final rescaling bring the pair to normalized form. All
//! choices are the first that work in a fixed enumeration of P^1 points;
//! no field extensions are taken.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{build_general, build_normalized, CubicPair, General26, Normalized14, Provenance};
use crate::error::{Error, Result};
use crate::geomchecks::free_action_check;
use crate::polyring::{Coeff, Field, Fp, Monomial, Polynomial, Rational, W0, X1, X2, Y3, Y4};

/// Fields in which the normalization searches for roots.
pub trait NormalizeField: Field {
    fn cube_root(&self) -> Option<Self>;

    /// Roots in P^1 of `sum_k c[k] x^k y^(d-k)` lying over the field, listed
    /// as `(0:1)`, `(1:0)`, then affine roots `(x:1)` in a fixed order.
    fn binary_roots(ring: &Self::Ring, c: &[Self]) -> Result<Vec<(Self, Self)>>;
}

fn eval_binary<C: Coeff>(c: &[C], x: &C, y: &C) -> C {
    let d = c.len() - 1;
    let ring = x.ring();
    let mut acc = C::zero(&ring);
    for (k, ck) in c.iter().enumerate() {
        if ck.is_zero() {
            continue;
        }
        let mut t = ck.clone();
        for _ in 0..k {
            t = t.mul(x);
        }
        for _ in 0..d - k {
            t = t.mul(y);
        }
        acc = acc.add(&t);
    }
    acc
}

fn ends<C: Coeff>(ring: &C::Ring, c: &[C]) -> Result<Vec<(C, C)>> {
    if c.iter().all(|x| x.is_zero()) {
        return Err(Error::NotNormalizableOverField(
            "binary form vanishes identically".into(),
        ));
    }
    let mut roots = Vec::new();
    if c[0].is_zero() {
        roots.push((C::zero(ring), C::one(ring)));
    }
    if c[c.len() - 1].is_zero() {
        roots.push((C::one(ring), C::zero(ring)));
    }
    Ok(roots)
}

impl NormalizeField for Fp {
    fn cube_root(&self) -> Option<Self> {
        Fp::cube_root(self)
    }

    fn binary_roots(ring: &Self::Ring, c: &[Self]) -> Result<Vec<(Self, Self)>> {
        let mut roots = ends(ring, c)?;
        let one = Fp::one(ring);
        for x in ring.elements().skip(1) {
            if eval_binary(c, &x, &one).is_zero() {
                roots.push((x, one));
            }
        }
        Ok(roots)
    }
}

const ROOT_SEARCH_LIMIT: u128 = 1_000_000_000_000_000;

fn divisors(n: u128) -> Vec<u128> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl NormalizeField for Rational {
    fn cube_root(&self) -> Option<Self> {
        Rational::cube_root(self)
    }

    fn binary_roots(ring: &(), c: &[Self]) -> Result<Vec<(Self, Self)>> {
        let mut roots = ends(ring, c)?;
        // affine nonzero roots of g(x) = sum c[k] x^k, by the rational root test
        let lcm = c
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let ints: Vec<BigInt> = c
            .iter()
            .map(|q| q.numer() * (&lcm / q.denom()))
            .collect();
        let lo = ints.iter().position(|v| !v.is_zero()).expect("nonzero form");
        let hi = ints.iter().rposition(|v| !v.is_zero()).expect("nonzero form");
        if lo == hi {
            return Ok(roots);
        }
        let bound = |v: &BigInt| -> Result<u128> {
            v.abs()
                .to_u128()
                .filter(|&n| n <= ROOT_SEARCH_LIMIT)
                .ok_or_else(|| {
                    Error::NotNormalizableOverField(
                        "coefficients too large for the rational root search".into(),
                    )
                })
        };
        let (a_lo, a_hi) = (bound(&ints[lo])?, bound(&ints[hi])?);
        let mut found: Vec<Rational> = Vec::new();
        let one = Rational::from_int(1);
        for p in divisors(a_lo) {
            for q in divisors(a_hi) {
                for sign in [1i64, -1] {
                    let r = Rational::from_big(BigInt::from(p) * sign, BigInt::from(q));
                    if found.contains(&r) {
                        continue;
                    }
                    if eval_binary(c, &r, &one).is_zero() {
                        found.push(r);
                    }
                }
            }
        }
        found.sort_by(|a, b| a.as_big().cmp(b.as_big()));
        roots.extend(found.into_iter().map(|r| (r, one.clone())));
        Ok(roots)
    }
}

/// Change of coordinates taking a general pair to normalized shape:
/// `F_i' = sum_j pencil[i][j] * F_j(w W0, X -> x_sub X, Y -> y_sub Y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizationWitness<C: Coeff + Serialize> {
    pub pencil: [[C; 2]; 2],
    pub x_sub: [[C; 2]; 2],
    pub y_sub: [[C; 2]; 2],
    pub w: C,
}

#[derive(Clone, Debug)]
pub struct Normalization<C: Coeff + Serialize> {
    pub point: Normalized14<C>,
    pub witness: NormalizationWitness<C>,
}

impl<C: Coeff + Serialize> NormalizationWitness<C> {
    pub fn apply(&self, pair: &CubicPair<C>) -> Result<CubicPair<C>> {
        let ring = pair.ring().clone();
        let lin = |a: &C, i: usize, b: &C, j: usize| {
            Polynomial::from_terms(&ring, [(Monomial::var(i), a.clone()), (Monomial::var(j), b.clone())])
        };
        let images = [
            Polynomial::term(self.w.clone(), Monomial::var(W0)),
            lin(&self.x_sub[0][0], X1, &self.x_sub[0][1], X2),
            lin(&self.x_sub[1][0], X1, &self.x_sub[1][1], X2),
            lin(&self.y_sub[0][0], Y3, &self.y_sub[0][1], Y4),
            lin(&self.y_sub[1][0], Y3, &self.y_sub[1][1], Y4),
        ];
        let g1 = pair.f[0].substitute(&images)?;
        let g2 = pair.f[1].substitute(&images)?;
        let combine = |row: &[C; 2]| g1.scale(&row[0]).try_add(&g2.scale(&row[1]));
        Ok(CubicPair::new(combine(&self.pencil[0])?, combine(&self.pencil[1])?))
    }
}

fn binary_coeffs<C: Coeff>(p: &Polynomial<C>, vx: usize, vy: usize, d: u8) -> Vec<C> {
    (0..=d)
        .map(|k| {
            let mut e = [0u8; 5];
            e[vx] = k;
            e[vy] = d - k;
            p.coefficient(&Monomial::new(e))
        })
        .collect()
}

fn inverse2<C: Field>(m: &[[C; 2]; 2]) -> Option<[[C; 2]; 2]> {
    let det = m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0]));
    let inv = det.inv()?;
    Some([
        [m[1][1].mul(&inv), m[0][1].neg().mul(&inv)],
        [m[1][0].neg().mul(&inv), m[0][0].mul(&inv)],
    ])
}

fn same_point<C: Coeff>(a: &(C, C), b: &(C, C)) -> bool {
    a.0.mul(&b.1).sub(&a.1.mul(&b.0)).is_zero()
}

/// Linear forms vanishing at `p1` and `p2` respectively, as rows.
fn forms_through<C: Coeff>(p1: &(C, C), p2: &(C, C)) -> [[C; 2]; 2] {
    [[p1.1.clone(), p1.0.neg()], [p2.1.clone(), p2.0.neg()]]
}

fn member<C: Coeff>(lambda: &[C; 2], a: &[C], b: &[C]) -> Vec<C> {
    a.iter()
        .zip(b)
        .map(|(x, y)| lambda[0].mul(x).add(&lambda[1].mul(y)))
        .collect()
}

/// Reduces a general pair to a normalized point, returning the witnessing
/// change of coordinates. The result is re-verified by polynomial equality.
pub fn normalize<C: NormalizeField + Serialize>(p: &General26<C>) -> Result<Normalization<C>> {
    let pair = build_general(p);
    let ring = pair.ring().clone();
    let report = free_action_check(&pair);
    for (ok, name) in [(report.cond_i, "i"), (report.cond_ii, "ii"), (report.cond_iii, "iii")] {
        if !ok {
            return Err(Error::FreeActionViolation {
                condition: name.to_string(),
            });
        }
    }
    // alpha_c[i][k] is the coefficient of X1^k X2^(3-k), beta_c[i][k] that of Y3^k Y4^(3-k)
    let alpha_c: [Vec<C>; 2] =
        std::array::from_fn(|i| (0..4).map(|k| p.get(i + 1, 8 - k).clone()).collect());
    let beta_c: [Vec<C>; 2] =
        std::array::from_fn(|i| (0..4).map(|k| p.get(i + 1, 12 - k).clone()).collect());
    let alpha_poly: [Polynomial<C>; 2] = std::array::from_fn(|i| {
        Polynomial::from_terms(
            &ring,
            (0..4u8).map(|k| (Monomial::new([0, k, 3 - k, 0, 0]), alpha_c[i][k as usize].clone())),
        )
    });
    let jac = alpha_poly[0]
        .derivative(X1)
        .try_mul(&alpha_poly[1].derivative(X2))?
        .try_sub(&alpha_poly[0].derivative(X2).try_mul(&alpha_poly[1].derivative(X1))?)?;
    let jac_c = binary_coeffs(&jac, X1, X2, 4);
    let jroots = C::binary_roots(&ring, &jac_c)?;

    let d_alpha: [[Vec<C>; 2]; 2] = std::array::from_fn(|i| {
        [
            binary_coeffs(&alpha_poly[i].derivative(X1), X1, X2, 2),
            binary_coeffs(&alpha_poly[i].derivative(X2), X1, X2, 2),
        ]
    });
    let pencil_at = |pt: &(C, C)| -> Option<[C; 2]> {
        for v in 0..2 {
            let g1 = eval_binary(&d_alpha[0][v], &pt.0, &pt.1);
            let g2 = eval_binary(&d_alpha[1][v], &pt.0, &pt.1);
            if !(g1.is_zero() && g2.is_zero()) {
                return Some([g2, g1.neg()]);
            }
        }
        None
    };

    let mut last_reason = String::from("the Jacobian quartic has fewer than two roots over the field");
    for (i1, p1) in jroots.iter().enumerate() {
        for (i2, p2) in jroots.iter().enumerate() {
            if i1 == i2 || same_point(p1, p2) {
                continue;
            }
            let (Some(l1), Some(l2)) = (pencil_at(p1), pencil_at(p2)) else {
                continue;
            };
            let lam = [l1, l2];
            let Some(_) = inverse2(&lam) else {
                last_reason = "pencil members at the chosen roots are proportional".into();
                continue;
            };
            let tx = forms_through(p1, p2);
            let Some(x_sub) = inverse2(&tx) else { continue };
            let b1 = member(&lam[0], &beta_c[0], &beta_c[1]);
            let b2 = member(&lam[1], &beta_c[0], &beta_c[1]);
            let (Ok(r1), Ok(r2)) = (C::binary_roots(&ring, &b1), C::binary_roots(&ring, &b2)) else {
                last_reason = "a cubic of the pencil in (Y3, Y4) vanishes identically".into();
                continue;
            };
            if r1.is_empty() || r2.is_empty() {
                last_reason = "a cubic of the pencil in (Y3, Y4) has no root over the field".into();
            }
            for q1 in &r1 {
                for q2 in &r2 {
                    if same_point(q1, q2) {
                        continue;
                    }
                    let ty = forms_through(q1, q2);
                    let Some(y_sub) = inverse2(&ty) else { continue };
                    let stage = NormalizationWitness {
                        pencil: lam.clone(),
                        x_sub: x_sub.clone(),
                        y_sub: y_sub.clone(),
                        w: C::one(&ring),
                    };
                    match finish_scaling(&pair, stage) {
                        Ok(n) => return Ok(n),
                        Err(reason) => last_reason = reason,
                    }
                }
            }
        }
    }
    Err(Error::NotNormalizableOverField(last_reason))
}

fn finish_scaling<C: NormalizeField + Serialize>(
    pair: &CubicPair<C>,
    stage: NormalizationWitness<C>,
) -> std::result::Result<Normalization<C>, String> {
    let ring = pair.ring().clone();
    let g = stage.apply(pair).map_err(|e| e.to_string())?;
    let m = |s: &str| Monomial::parse(s).expect("valid monomial");
    let a01 = g.f[0].coefficient(&m("W0^3"));
    let a02 = g.f[1].coefficient(&m("W0^3"));
    let a5 = g.f[0].coefficient(&m("X1^3"));
    let a9 = g.f[0].coefficient(&m("Y3^3"));
    let a8 = g.f[1].coefficient(&m("X2^3"));
    let a12 = g.f[1].coefficient(&m("Y4^3"));
    let (Some(f1), Some(f2)) = (a01.inv(), a02.inv()) else {
        return Err("a W0^3 coefficient vanishes after the pencil change".into());
    };
    let root = |num: &C, den: &C| -> std::result::Result<C, String> {
        let q = num.mul(&den.inv().ok_or("a leading cube coefficient vanishes")?);
        q.cube_root().ok_or_else(|| format!("{q} has no cube root in the field"))
    };
    let x1 = root(&a01, &a5)?;
    let y3 = root(&a01, &a9)?;
    let x2 = root(&a02, &a8)?;
    let y4 = root(&a02, &a12)?;
    let scale_cols = |s: &[[C; 2]; 2], c0: &C, c1: &C| {
        [
            [s[0][0].mul(c0), s[0][1].mul(c1)],
            [s[1][0].mul(c0), s[1][1].mul(c1)],
        ]
    };
    let scale_rows = |s: &[[C; 2]; 2]| {
        [
            [s[0][0].mul(&f1), s[0][1].mul(&f1)],
            [s[1][0].mul(&f2), s[1][1].mul(&f2)],
        ]
    };
    let witness = NormalizationWitness {
        pencil: scale_rows(&stage.pencil),
        x_sub: scale_cols(&stage.x_sub, &x1, &x2),
        y_sub: scale_cols(&stage.y_sub, &y3, &y4),
        w: C::one(&ring),
    };
    let h = witness.apply(pair).map_err(|e| e.to_string())?;
    let c1 = |s: &str| h.f[0].coefficient(&m(s));
    let c2 = |s: &str| h.f[1].coefficient(&m(s));
    let values = [
        c1("W0 X1 Y3"),
        c1("W0 X1 Y4"),
        c1("W0 X2 Y3"),
        c1("W0 X2 Y4"),
        c1("X1^2 X2"),
        c1("Y3^2 Y4"),
        c1("Y3 Y4^2"),
        c2("W0 X1 Y3"),
        c2("W0 X1 Y4"),
        c2("W0 X2 Y3"),
        c2("W0 X2 Y4"),
        c2("X1 X2^2"),
        c2("Y3^2 Y4"),
        c2("Y3 Y4^2"),
    ];
    let point = Normalized14::new(values, Provenance::User);
    if build_normalized(&point) != h {
        return Err("transformed pair does not have normalized shape".into());
    }
    Ok(Normalization { point, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{embed_params, raw_random_params};
    use crate::polyring::PrimeField;

    #[test]
    fn rational_roots_of_forms() {
        // x (x - 2)(2x + 1) y^0 ... as a cubic: 2x^3 - 3x^2 - 2x
        let c: Vec<Rational> = [0, -2, -3, 2].iter().map(|&v| Rational::from_int(v)).collect();
        let roots = Rational::binary_roots(&(), &c).unwrap();
        let affine: Vec<String> = roots.iter().map(|(x, y)| format!("{x}:{y}")).collect();
        assert_eq!(affine, vec!["0:1", "-1/2:1", "2:1"]);
        // y^3 has the single root (1:0)
        let c: Vec<Rational> = [0, 0, 0, 1].iter().map(|&v| Rational::from_int(v)).collect();
        let roots = Rational::binary_roots(&(), &c).unwrap();
        assert_eq!(roots.len(), 1);
    }

    #[test]
    fn fp_roots_enumerate() {
        let p = PrimeField::new(7).unwrap();
        // x^2 y - y^3 = y (x - y)(x + y)
        let c = vec![p.elem(-1), p.elem(0), p.elem(1), p.elem(0)];
        let roots = Fp::binary_roots(&p, &c).unwrap();
        let xs: Vec<(u64, u64)> = roots.iter().map(|(x, y)| (x.value(), y.value())).collect();
        assert_eq!(xs, vec![(1, 0), (1, 1), (6, 1)]);
    }

    #[test]
    fn embedded_points_normalize_over_fp() {
        let p = PrimeField::new(7).unwrap();
        let mut ok = 0;
        for seed in 0..10 {
            let t = raw_random_params::<Fp>(&p, seed, 9);
            let g = embed_params(&t);
            if let Ok(n) = normalize(&g) {
                let moved = n.witness.apply(&build_general(&g)).unwrap();
                assert_eq!(moved, build_normalized(&n.point));
                ok += 1;
            }
        }
        assert!(ok > 0);
    }

    #[test]
    fn collision_is_rejected() {
        let t = Normalized14::<Rational>::zero(&());
        let mut g = embed_params(&t);
        g.set(2, 8, Rational::from_int(0));
        g.set(2, 5, Rational::from_int(1));
        assert!(matches!(
            normalize(&g),
            Err(Error::FreeActionViolation { condition }) if condition == "ii"
        ));
    }
}
