//! Graded pieces of `R = k[W0, X1, X2, Y3, Y4] / (F1, F2)`.
//!
//! Degree `n` of the ideal is spanned by `m * F_i` for monomials `m` of degree
//! `n - 3`. Row reducing that slice with pivots taken in graded-lex order
//! leaves the non-pivot monomials as a basis of `R_n`; each pivot monomial
//! is rewritten in terms of them.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::Matrix;
use crate::family::CubicPair;
use crate::polyring::{binomial, Coeff, Monomial, Polynomial};

pub const MAX_DEGREE: u32 = 8;

/// Dimension of `R_n` for a complete intersection of two cubics.
pub fn expected_dim(n: u32) -> usize {
    let c = |a: i64| if a < 4 { 0 } else { binomial(a as u64, 4) as i64 };
    let n = n as i64;
    (c(n + 4) - 2 * c(n + 1) + c(n - 2)) as usize
}

/// Rank of the degree-`n` ideal slice for a complete intersection.
pub fn expected_slice_rank(n: u32) -> usize {
    binomial(n as u64 + 4, 4) as usize - expected_dim(n)
}

#[derive(Clone, Debug)]
pub struct GradedPiece<C: Coeff> {
    ring: C::Ring,
    degree: u32,
    monomials: Vec<Monomial>,
    slice: Matrix<C>,
    /// Pivot monomial -> its rewriting as a combination of basis monomials.
    rewrite: HashMap<Monomial, Vec<(usize, C)>>,
    basis: Vec<Monomial>,
    basis_index: HashMap<Monomial, usize>,
    slice_rank: usize,
    stalled_rows: usize,
}

/// Coordinates of an element of `R_n` over the quotient basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientElement<C: Coeff> {
    pub degree: u32,
    pub coords: Vec<C>,
}

impl<C: Coeff> QuotientElement<C> {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PieceSummary {
    pub degree: u32,
    pub monomials: usize,
    pub slice_rank: usize,
    pub expected_slice_rank: usize,
    pub dim: usize,
    pub dim_by_weight: [usize; 3],
    pub generic: bool,
}

impl<C: Coeff> GradedPiece<C> {
    pub fn new(pair: &CubicPair<C>, n: u32) -> Result<Self> {
        Self::from_generators(pair.f1(), pair.f2(), n)
    }

    pub fn from_generators(f1: &Polynomial<C>, f2: &Polynomial<C>, n: u32) -> Result<Self> {
        if n > MAX_DEGREE {
            return Err(Error::DegreeTooLarge(n));
        }
        for f in [f1, f2] {
            if f.homogeneous_degree() != Some(3) {
                return Err(Error::Inhomogeneous(format!("generator {f} is not a cubic")));
            }
        }
        let ring = f1.ring().clone();
        let monomials = Monomial::all_of_degree(n);
        let col: HashMap<Monomial, usize> =
            monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let multipliers = if n >= 3 {
            Monomial::all_of_degree(n - 3)
        } else {
            Vec::new()
        };
        let mut rows = Vec::new();
        for f in [f1, f2] {
            for m in &multipliers {
                let mut row = vec![C::zero(&ring); monomials.len()];
                for (fm, c) in f.terms() {
                    row[col[&fm.mul(m)]] = c.clone();
                }
                rows.push(row);
            }
        }
        let slice = if rows.is_empty() {
            Matrix::zeros(&ring, 0, monomials.len())
        } else {
            Matrix::from_rows(&ring, rows)?
        };
        let ech = slice.echelon_units();
        let pivots = ech.pivots;
        let basis: Vec<Monomial> = monomials
            .iter()
            .enumerate()
            .filter(|(i, _)| !pivots.contains(i))
            .map(|(_, m)| *m)
            .collect();
        let basis_index: HashMap<Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut rewrite = HashMap::new();
        for (r, &p) in pivots.iter().enumerate() {
            let combo: Vec<(usize, C)> = ech
                .rref
                .row(r)
                .iter()
                .enumerate()
                .filter(|(c, v)| !pivots.contains(c) && !v.is_zero())
                .map(|(c, v)| (basis_index[&monomials[c]], v.neg()))
                .collect();
            rewrite.insert(monomials[p], combo);
        }
        let stalled_rows = (pivots.len()..ech.rref.rows())
            .filter(|&r| ech.rref.row(r).iter().any(|v| !v.is_zero()))
            .count();
        Ok(GradedPiece {
            ring,
            degree: n,
            monomials,
            slice,
            rewrite,
            basis,
            basis_index,
            slice_rank: pivots.len(),
            stalled_rows,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn ring(&self) -> &C::Ring {
        &self.ring
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn slice(&self) -> &Matrix<C> {
        &self.slice
    }

    pub fn slice_rank(&self) -> usize {
        self.slice_rank
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn is_pivot(&self, m: &Monomial) -> bool {
        self.rewrite.contains_key(m)
    }

    /// True when the slice has the rank of a complete intersection and, over
    /// parameter rings, elimination never ran out of unit pivots.
    pub fn is_generic(&self) -> bool {
        self.slice_rank == expected_slice_rank(self.degree) && self.stalled_rows == 0
    }

    /// Basis monomials of weight `m`, in basis order.
    pub fn eigenbasis(&self, m: u8) -> Vec<Monomial> {
        self.basis.iter().filter(|b| b.weight() == m % 3).copied().collect()
    }

    /// Positions in the basis of the weight-`m` monomials.
    pub fn eigen_positions(&self, m: u8) -> Vec<usize> {
        (0..self.basis.len())
            .filter(|&i| self.basis[i].weight() == m % 3)
            .collect()
    }

    pub fn dim_by_weight(&self) -> [usize; 3] {
        std::array::from_fn(|m| self.eigen_positions(m as u8).len())
    }

    pub fn summary(&self) -> PieceSummary {
        PieceSummary {
            degree: self.degree,
            monomials: self.monomials.len(),
            slice_rank: self.slice_rank,
            expected_slice_rank: expected_slice_rank(self.degree),
            dim: self.dim(),
            dim_by_weight: self.dim_by_weight(),
            generic: self.is_generic(),
        }
    }

    /// Canonical representative of a degree-`n` polynomial.
    pub fn reduce(&self, p: &Polynomial<C>) -> Result<QuotientElement<C>> {
        let mut coords = vec![C::zero(&self.ring); self.basis.len()];
        for (m, c) in p.terms() {
            if m.degree() != self.degree {
                return Err(Error::Inhomogeneous(format!(
                    "term {m} in a reduction to degree {}",
                    self.degree
                )));
            }
            if let Some(&i) = self.basis_index.get(m) {
                coords[i] = coords[i].add(c);
            } else {
                for (i, v) in &self.rewrite[m] {
                    coords[*i] = coords[*i].add(&c.mul(v));
                }
            }
        }
        Ok(QuotientElement {
            degree: self.degree,
            coords,
        })
    }

    pub fn to_polynomial(&self, e: &QuotientElement<C>) -> Polynomial<C> {
        Polynomial::from_terms(
            &self.ring,
            self.basis.iter().copied().zip(e.coords.iter().cloned()),
        )
    }

    /// Matrix of multiplication by `multiplier` from `self` to `target`
    /// (columns indexed by the basis of `self`).
    pub fn mult_map(&self, target: &GradedPiece<C>, multiplier: &Polynomial<C>) -> Result<Matrix<C>> {
        let k = multiplier
            .homogeneous_degree()
            .ok_or_else(|| Error::Inhomogeneous(multiplier.to_string()))?;
        if target.degree != self.degree + k {
            return Err(Error::DimensionMismatch(format!(
                "multiplier of degree {k} maps degree {} to {}, not {}",
                self.degree,
                self.degree + k,
                target.degree
            )));
        }
        let cols: Vec<Vec<C>> = self
            .basis
            .iter()
            .map(|b| target.reduce(&multiplier.mul_monomial(b)).map(|e| e.coords))
            .collect::<Result<_>>()?;
        Matrix::from_columns(&self.ring, target.dim(), &cols)
    }
}
