//! Jacobian maps between graded pieces, the displacement map of the
//! normalized family, and the decomposition of the degree-2 Jacobian map
//! along `image(A) + M'`.
//!
//! Everything here is generic over the coefficient ring, so the same code
//! produces numeric matrices at a parameter point and symbolic matrices over
//! the parameter polynomials.

mod blocks;
mod chain;
mod verdict;

pub use blocks::{block_check, printed_l5, BlockCheck, BlockMismatch, StarEntry};
pub use chain::{
    certificate_monomial, chain_l, det_l5_certificate, literal_chain, symbolic_chain, Certificate,
    ChainReport, LiteralChain, SymbolicChain, L1_STRIKES, L3_STRIKES, PAPER_CERTIFICATE_POSITIONS,
};
pub use verdict::{
    composite_kernel_dim, diagram_commutes, h1_theta_report, torelli_verdict, Conclusion,
    H1ThetaReport, TorelliVerdict, WeightCoker,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::Matrix;
use crate::family::{build_normalized, CubicPair, Normalized14, NORMALIZED_KEYS};
use crate::polyring::{Coeff, Monomial, Polynomial, NVARS, VAR_WEIGHTS, W0};
use crate::quotient::GradedPiece;

/// A matrix together with labels for its domain and codomain bases.
#[derive(Clone, Debug)]
pub struct LinearMapGr<C: Coeff> {
    pub name: &'static str,
    pub domain: Vec<String>,
    pub codomain: Vec<String>,
    pub matrix: Matrix<C>,
}

impl<C: Coeff> LinearMapGr<C> {
    fn new(name: &'static str, domain: Vec<String>, codomain: Vec<String>, matrix: Matrix<C>) -> Self {
        LinearMapGr {
            name,
            domain,
            codomain,
            matrix,
        }
    }

    pub fn labelled(&self) -> Matrix<C> {
        self.matrix
            .clone()
            .with_labels(self.codomain.clone(), self.domain.clone())
            .expect("labels match")
    }
}

/// Graded pieces `R_0 .. R_4` of one pair.
#[derive(Clone, Debug)]
pub struct Pieces<C: Coeff> {
    pieces: Vec<GradedPiece<C>>,
}

impl<C: Coeff> Pieces<C> {
    pub fn new(pair: &CubicPair<C>) -> Result<Self> {
        let pieces = (0..=4)
            .map(|n| GradedPiece::new(pair, n))
            .collect::<Result<_>>()?;
        Ok(Pieces { pieces })
    }

    pub fn get(&self, n: u32) -> &GradedPiece<C> {
        &self.pieces[n as usize]
    }

    /// Degree-3 and degree-4 ideal slices have their expected ranks.
    pub fn is_generic(&self) -> bool {
        self.get(3).is_generic() && self.get(4).is_generic()
    }
}

fn slot_label(m: &Monomial, slot: usize) -> String {
    format!("({m})_{}", slot + 1)
}

fn component_label(m: &Monomial, comp: usize) -> String {
    if comp == 0 {
        format!("({m}, 0)")
    } else {
        format!("(0, {m})")
    }
}

/// Codomain coordinates: for each component, the basis positions of
/// `R_n` of the given weight (all positions when `weight` is `None`).
fn codomain_positions<C: Coeff>(piece: &GradedPiece<C>, weight: Option<u8>) -> Vec<usize> {
    match weight {
        Some(m) => piece.eigen_positions(m),
        None => (0..piece.dim()).collect(),
    }
}

fn codomain_labels<C: Coeff>(piece: &GradedPiece<C>, pos: &[usize]) -> Vec<String> {
    (0..2)
        .flat_map(|comp| pos.iter().map(move |&p| component_label(&piece.basis()[p], comp)))
        .collect()
}

fn column_in<C: Coeff>(
    piece: &GradedPiece<C>,
    pos: &[usize],
    parts: [&Polynomial<C>; 2],
) -> Result<Vec<C>> {
    let mut col = Vec::with_capacity(2 * pos.len());
    for p in parts {
        let e = piece.reduce(p)?;
        col.extend(pos.iter().map(|&i| e.coords[i].clone()));
    }
    Ok(col)
}

/// `(q_0, .., q_4) -> (sum_j q_j dF1/dx_j, sum_j q_j dF2/dx_j)` from
/// `R_d^5` to `R_{d+2}^2`. With a weight `m`, slot `j` of the domain is
/// restricted to weight `m + w_j` and the codomain to weight `m`.
pub fn jacobian_map<C: Coeff>(
    pair: &CubicPair<C>,
    pieces: &Pieces<C>,
    d: u32,
    weight: Option<u8>,
) -> Result<LinearMapGr<C>> {
    if !(1..=2).contains(&d) {
        return Err(Error::DimensionMismatch(format!("Jacobian map from degree {d}")));
    }
    let src = pieces.get(d);
    let dst = pieces.get(d + 2);
    let pos = codomain_positions(dst, weight);
    let partials: [[Polynomial<C>; NVARS]; 2] = [pair.f1().gradient(), pair.f2().gradient()];
    let mut domain = Vec::new();
    let mut cols = Vec::new();
    for j in 0..NVARS {
        let allowed: Vec<Monomial> = match weight {
            Some(m) => src.eigenbasis((m + VAR_WEIGHTS[j]) % 3),
            None => src.basis().to_vec(),
        };
        for b in allowed {
            let images = [partials[0][j].mul_monomial(&b), partials[1][j].mul_monomial(&b)];
            cols.push(column_in(dst, &pos, [&images[0], &images[1]])?);
            domain.push(slot_label(&b, j));
        }
    }
    let matrix = Matrix::from_columns(pair.ring(), 2 * pos.len(), &cols)?;
    let name = if d == 1 { "jacobian_R1" } else { "jacobian_R2" };
    Ok(LinearMapGr::new(name, domain, codomain_labels(dst, &pos), matrix))
}

/// Ordered basis of `V`: slot `j` carries the degree-2 monomials of weight
/// `w_j`, in graded-lex order.
pub fn v_basis() -> Vec<(usize, Monomial)> {
    (0..NVARS)
        .flat_map(|j| {
            Monomial::all_of_degree(2)
                .into_iter()
                .filter(move |m| m.weight() == VAR_WEIGHTS[j])
                .map(move |m| (j, m))
        })
        .collect()
}

const MPRIME_TAIL: [&str; 9] = [
    "X1^2 Y3^2",
    "X1^2 Y3 Y4",
    "X1^2 Y4^2",
    "X1 X2 Y3^2",
    "X1 X2 Y3 Y4",
    "X1 X2 Y4^2",
    "X2^2 Y3^2",
    "X2^2 Y3 Y4",
    "X2^2 Y4^2",
];

/// The 26 listed elements of `R_4^(0) + R_4^(0)` spanning `M'`.
pub fn mprime_basis() -> Vec<(usize, Monomial)> {
    let head = [
        ["W0^4", "W0 X1 X2^2", "W0 Y3^3", "W0 Y4^3"],
        ["W0^4", "W0 X1^2 X2", "W0 Y3^3", "W0 Y4^3"],
    ];
    (0..2)
        .flat_map(|comp| {
            head[comp]
                .iter()
                .chain(MPRIME_TAIL.iter())
                .map(move |s| (comp, Monomial::parse(s).expect("valid monomial")))
        })
        .collect()
}

/// `(W0^2, W0 X1, W0 X2, W0 Y3, W0 Y4)` in the coordinates of [`v_basis`].
pub fn euler_vector<C: Coeff>(ring: &C::Ring) -> Vec<C> {
    let basis = v_basis();
    let mut v = vec![C::zero(ring); basis.len()];
    for j in 0..NVARS {
        let m = Monomial::var(W0).mul(&Monomial::var(j));
        let k = basis
            .iter()
            .position(|(s, b)| *s == j && *b == m)
            .expect("Euler monomial in V");
        v[k] = C::one(ring);
    }
    v
}

/// Maps of the decomposition `C = D + D'`.
#[derive(Clone, Debug)]
pub struct Decomposition<C: Coeff> {
    pub pair: CubicPair<C>,
    pub pieces: Pieces<C>,
    pub a: LinearMapGr<C>,
    pub c: LinearMapGr<C>,
    pub mprime: LinearMapGr<C>,
    /// `D` and `D'` (the latter is `L_1`); absent when `image(A) + M'` is
    /// not a direct sum (over parameter rings: when no unit pivots remain).
    pub d: Option<Matrix<C>>,
    pub l1: Option<Matrix<C>>,
    pub euler_in_ker_c: bool,
}

/// `A`: column for each coordinate `theta` is the reduction of
/// `W0 * dF_i/dtheta` in `R_4^(0) + R_4^(0)`.
pub fn displacement_a<C: Coeff>(t: &Normalized14<C>, pieces: &Pieces<C>) -> Result<LinearMapGr<C>> {
    let ring = t.values()[0].ring();
    let r4 = pieces.get(4);
    let pos = r4.eigen_positions(0);
    let base = build_normalized(t);
    let w0 = Monomial::var(W0);
    let mut cols = Vec::new();
    for key in NORMALIZED_KEYS {
        // F is affine in each coordinate, so a unit step gives the derivative
        let bumped = t.clone().with(key, t.get(key).add(&C::one(&ring)));
        let moved = build_normalized(&bumped);
        let d1 = moved.f1().try_sub(base.f1())?.mul_monomial(&w0);
        let d2 = moved.f2().try_sub(base.f2())?.mul_monomial(&w0);
        cols.push(column_in(r4, &pos, [&d1, &d2])?);
    }
    let matrix = Matrix::from_columns(&ring, 2 * pos.len(), &cols)?;
    Ok(LinearMapGr::new(
        "A",
        NORMALIZED_KEYS.iter().map(|k| k.to_string()).collect(),
        codomain_labels(r4, &pos),
        matrix,
    ))
}

fn mprime_map<C: Coeff>(ring: &C::Ring, pieces: &Pieces<C>) -> Result<LinearMapGr<C>> {
    let r4 = pieces.get(4);
    let pos = r4.eigen_positions(0);
    let zero = Polynomial::zero(ring);
    let mut cols = Vec::new();
    let mut labels = Vec::new();
    for (comp, m) in mprime_basis() {
        let p = Polynomial::monomial(ring, m);
        let parts = if comp == 0 { [&p, &zero] } else { [&zero, &p] };
        cols.push(column_in(r4, &pos, parts)?);
        labels.push(component_label(&m, comp));
    }
    let matrix = Matrix::from_columns(ring, 2 * pos.len(), &cols)?;
    Ok(LinearMapGr::new("Mprime", labels, codomain_labels(r4, &pos), matrix))
}

pub fn decompose<C: Coeff>(t: &Normalized14<C>) -> Result<Decomposition<C>> {
    let pair = build_normalized(t);
    let ring = pair.ring().clone();
    let pieces = Pieces::new(&pair)?;
    let a = displacement_a(t, &pieces)?;
    let mut c = jacobian_map(&pair, &pieces, 2, Some(0))?;
    c.name = "C";
    let expected_domain: Vec<String> = v_basis().iter().map(|(j, m)| slot_label(m, *j)).collect();
    if c.domain != expected_domain {
        return Err(Error::VerificationFailed(
            "weight-0 domain of the degree-2 Jacobian map differs from V".into(),
        ));
    }
    let mprime = mprime_map(&ring, &pieces)?;
    let euler_in_ker_c = c
        .matrix
        .mul_vec(&euler_vector(&ring))?
        .iter()
        .all(|x| x.is_zero());
    let b = a.matrix.hcat(&mprime.matrix)?;
    let (d, l1) = if b.rows() == b.cols() {
        match b.solve_units(&c.matrix)? {
            Some(x) => {
                let na = a.matrix.cols();
                let top: Vec<usize> = (0..na).collect();
                let bottom: Vec<usize> = (na..x.rows()).collect();
                let all: Vec<usize> = (0..x.cols()).collect();
                let l1 = x
                    .submatrix(&bottom, &all)
                    .with_labels(mprime.domain.clone(), c.domain.clone())?;
                let d = x
                    .submatrix(&top, &all)
                    .with_labels(a.domain.clone(), c.domain.clone())?;
                (Some(d), Some(l1))
            }
            None => (None, None),
        }
    } else {
        (None, None)
    };
    Ok(Decomposition {
        pair,
        pieces,
        a,
        c,
        mprime,
        d,
        l1,
        euler_in_ker_c,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisListing {
    pub v: Vec<String>,
    pub mprime: Vec<String>,
}

pub fn basis_listing() -> BasisListing {
    BasisListing {
        v: v_basis().iter().map(|(j, m)| slot_label(m, *j)).collect(),
        mprime: mprime_basis().iter().map(|(c, m)| component_label(m, *c)).collect(),
    }
}
