//! Free-action conditions for the order-3 action and a finite-field scan
//! for singular points.

mod smooth;

pub use smooth::{smooth_scan, PrimeScan, SmoothScanReport, DEFAULT_PRIMES, SINGULAR_POINT_CAP};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::Matrix;
use crate::family::CubicPair;
use crate::polyring::{Coeff, Field, Monomial, Polynomial, NVARS, W0, X1, X2, Y3, Y4};

/// Binary form `sum_k c[k] x^k y^(d-k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm<C: Coeff> {
    pub coeffs: Vec<C>,
}

impl<C: Coeff> BinaryForm<C> {
    pub fn new(coeffs: Vec<C>) -> Self {
        BinaryForm { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Reads a form of degree `d` in the variables `vx`, `vy`.
    pub fn from_polynomial(p: &Polynomial<C>, vx: usize, vy: usize, d: u8) -> Result<Self> {
        let ring = p.ring().clone();
        let mut coeffs = vec![C::zero(&ring); d as usize + 1];
        for (m, c) in p.terms() {
            let e = m.exps();
            let others = (0..NVARS).any(|i| i != vx && i != vy && e[i] > 0);
            if others || m.degree() != d as u32 {
                return Err(Error::Inhomogeneous(format!(
                    "{p} is not a binary form of degree {d}"
                )));
            }
            coeffs[e[vx] as usize] = c.clone();
        }
        Ok(BinaryForm { coeffs })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// Sylvester resultant of two binary cubics.
pub fn sylvester_resultant_cubics<C: Field>(f: &BinaryForm<C>, g: &BinaryForm<C>) -> Result<C> {
    if f.degree() != 3 || g.degree() != 3 {
        return Err(Error::Inhomogeneous("resultant expects two binary cubics".into()));
    }
    let ring = f.coeffs[0].ring();
    let mut m = Matrix::zeros(&ring, 6, 6);
    for (row, form) in [(0, f), (3, g)] {
        for shift in 0..3 {
            for k in 0..4 {
                // descending powers of x
                m.set(row + shift, shift + k, form.coeffs[3 - k].clone());
            }
        }
    }
    m.det_bareiss()
}

fn poly_rem<C: Field>(a: &[C], b: &[C]) -> Vec<C> {
    // coefficient vectors by ascending power, b with nonzero leading entry
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = b[db].inv().expect("nonzero leading coefficient");
    while r.len() > db {
        let top = r.last().expect("nonempty").clone();
        if !top.is_zero() {
            let q = top.mul(&lead_inv);
            let shift = r.len() - 1 - db;
            for (i, bi) in b.iter().enumerate() {
                r[shift + i] = r[shift + i].sub(&q.mul(bi));
            }
        }
        r.pop();
    }
    trim(r)
}

fn trim<C: Coeff>(mut v: Vec<C>) -> Vec<C> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Common projective root test by the Euclidean algorithm on the affine
/// parts, plus a separate look at the point `(1:0)`.
pub fn common_root_gcd<C: Field>(f: &BinaryForm<C>, g: &BinaryForm<C>) -> bool {
    let top = |h: &BinaryForm<C>| h.coeffs[h.degree()].is_zero();
    if top(f) && top(g) {
        return true;
    }
    let mut a = trim(f.coeffs.clone());
    let mut b = trim(g.coeffs.clone());
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    // a is the gcd (empty when both affine parts vanish)
    a.len() != 1
}

#[derive(Clone, Debug, Serialize)]
pub struct ActionCheckReport {
    pub cond_i: bool,
    pub cond_ii: bool,
    pub resultant_ii: String,
    pub cond_iii: bool,
    pub resultant_iii: String,
    /// Whether the fixed point and the two fixed lines miss the surface
    /// exactly when the corresponding condition holds.
    pub cross_oracle_agreement: bool,
}

impl ActionCheckReport {
    pub fn passes(&self) -> bool {
        self.cond_i && self.cond_ii && self.cond_iii
    }

    /// First failing condition, by its label.
    pub fn first_failure(&self) -> Option<&'static str> {
        [(self.cond_i, "i"), (self.cond_ii, "ii"), (self.cond_iii, "iii")]
            .into_iter()
            .find(|(ok, _)| !ok)
            .map(|(_, n)| n)
    }
}

fn part<C: Coeff>(f: &Polynomial<C>, vx: usize, vy: usize) -> BinaryForm<C> {
    let coeffs = (0..=3u8)
        .map(|k| {
            let mut e = [0u8; NVARS];
            e[vx] = k;
            e[vy] = 3 - k;
            f.coefficient(&Monomial::new(e))
        })
        .collect::<Vec<_>>();
    BinaryForm { coeffs }
}

/// Restriction of `f` to the line where only `vx`, `vy` are nonzero,
/// computed by substitution.
fn restrict<C: Coeff>(f: &Polynomial<C>, vx: usize, vy: usize) -> Result<BinaryForm<C>> {
    let ring = f.ring().clone();
    let images: [Polynomial<C>; NVARS] = std::array::from_fn(|i| {
        if i == vx || i == vy {
            Polynomial::var(&ring, i)
        } else {
            Polynomial::zero(&ring)
        }
    });
    BinaryForm::from_polynomial(&f.substitute(&images)?, vx, vy, 3)
}

pub fn free_action_check<C: Field>(pair: &CubicPair<C>) -> ActionCheckReport {
    let ring = pair.ring().clone();
    let w3 = Monomial::new([3, 0, 0, 0, 0]);
    let cond_i = !(pair.f1().coefficient(&w3).is_zero() && pair.f2().coefficient(&w3).is_zero());
    let res_ii = sylvester_resultant_cubics(&part(pair.f1(), X1, X2), &part(pair.f2(), X1, X2))
        .expect("cubic forms");
    let res_iii = sylvester_resultant_cubics(&part(pair.f1(), Y3, Y4), &part(pair.f2(), Y3, Y4))
        .expect("cubic forms");

    // fixed locus by direct substitution
    let mut point = [C::zero(&ring), C::zero(&ring), C::zero(&ring), C::zero(&ring), C::zero(&ring)];
    point[W0] = C::one(&ring);
    let point_on_z = pair.f1().eval(&point).is_zero() && pair.f2().eval(&point).is_zero();
    let meets = |vx, vy| {
        let a = restrict(pair.f1(), vx, vy).expect("substitution in one ring");
        let b = restrict(pair.f2(), vx, vy).expect("substitution in one ring");
        common_root_gcd(&a, &b)
    };
    let x_line = meets(X1, X2);
    let y_line = meets(Y3, Y4);
    let cond_ii = !res_ii.is_zero();
    let cond_iii = !res_iii.is_zero();
    ActionCheckReport {
        cond_i,
        cond_ii,
        resultant_ii: res_ii.to_string(),
        cond_iii,
        resultant_iii: res_iii.to_string(),
        cross_oracle_agreement: cond_i == !point_on_z && cond_ii == !x_line && cond_iii == !y_line,
    }
}
