//! Dense exact matrices.
//!
//! Elimination always pivots on the first usable entry scanning down the
//! current column, so every echelon form (and therefore every quotient basis
//! and kernel basis built from one) is reproducible. Over a field "usable"
//! means nonzero; over parameter polynomials it means a nonzero constant.

mod det;

pub use det::{det_symbolic_sparse, Census, Contribution, SymbolicDeterminant};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::polyring::{Coeff, Field, Fp, PrimeField};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<C: Coeff> {
    rows: usize,
    cols: usize,
    ring: C::Ring,
    data: Vec<C>,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
}

/// Reduced row echelon form together with its pivot columns (one per
/// nonzero row, in row order).
#[derive(Clone, Debug)]
pub struct Echelon<C: Coeff> {
    pub rref: Matrix<C>,
    pub pivots: Vec<usize>,
}

impl<C: Coeff> Matrix<C> {
    pub fn zeros(ring: &C::Ring, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            ring: ring.clone(),
            data: vec![C::zero(ring); rows * cols],
            row_labels: None,
            col_labels: None,
        }
    }

    pub fn identity(ring: &C::Ring, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, C::one(ring));
        }
        m
    }

    pub fn from_rows(ring: &C::Ring, rows: Vec<Vec<C>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            ring: ring.clone(),
            data: rows.into_iter().flatten().collect(),
            row_labels: None,
            col_labels: None,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(ring: &C::Ring, nrows: usize, cols: &[Vec<C>]) -> Result<Self> {
        let mut m = Self::zeros(ring, nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            if col.len() != nrows {
                return Err(Error::DimensionMismatch(format!(
                    "column {j} has length {}, expected {nrows}",
                    col.len()
                )));
            }
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn with_labels(mut self, rows: Vec<String>, cols: Vec<String>) -> Result<Self> {
        if rows.len() != self.rows || cols.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "labels {}x{} for a {}x{} matrix",
                rows.len(),
                cols.len(),
                self.rows,
                self.cols
            )));
        }
        self.row_labels = Some(rows);
        self.col_labels = Some(cols);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.row_labels = None;
        self.col_labels = None;
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring(&self) -> &C::Ring {
        &self.ring
    }

    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    pub fn get(&self, r: usize, c: usize) -> &C {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: C) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[C] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<C> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.ring, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t.row_labels = self.col_labels.clone();
        t.col_labels = self.row_labels.clone();
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[C]) -> Result<Vec<C>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(C::zero(&self.ring), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hcat row counts differ".into()));
        }
        let mut out = Self::zeros(&self.ring, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        Ok(out)
    }

    /// Rows and columns picked by index, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(&self.ring, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out.row_labels = self
            .row_labels
            .as_ref()
            .map(|l| rows.iter().map(|&r| l[r].clone()).collect());
        out.col_labels = self
            .col_labels
            .as_ref()
            .map(|l| cols.iter().map(|&c| l[c].clone()).collect());
        out
    }

    /// Deletes the listed rows and columns.
    pub fn delete(&self, rows: &[usize], cols: &[usize]) -> Self {
        let keep_r: Vec<usize> = (0..self.rows).filter(|r| !rows.contains(r)).collect();
        let keep_c: Vec<usize> = (0..self.cols).filter(|c| !cols.contains(c)).collect();
        self.submatrix(&keep_r, &keep_c)
    }

    pub fn map<D: Coeff>(&self, ring: &D::Ring, f: impl Fn(&C) -> D) -> Matrix<D> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            ring: ring.clone(),
            data: self.data.iter().map(f).collect(),
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
        }
    }

    pub fn try_map<D: Coeff>(
        &self,
        ring: &D::Ring,
        f: impl Fn(&C) -> Option<D>,
    ) -> Option<Matrix<D>> {
        let data = self.data.iter().map(f).collect::<Option<Vec<D>>>()?;
        Some(Matrix {
            rows: self.rows,
            cols: self.cols,
            ring: ring.clone(),
            data,
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: &C) {
        for c in 0..self.cols {
            let v = self.get(r, c).mul(s);
            self.set(r, c, v);
        }
    }

    /// `row[target] -= factor * row[source]`
    fn axpy_row(&mut self, target: usize, source: usize, factor: &C) {
        for c in 0..self.cols {
            let s = self.get(source, c);
            if s.is_zero() {
                continue;
            }
            let v = self.get(target, c).sub(&factor.mul(s));
            self.set(target, c, v);
        }
    }

    /// Reduced row echelon form using unit pivots only.
    ///
    /// Over a field this is the usual RREF. Over parameter polynomials it
    /// eliminates along constant pivots and leaves the rest untouched, so the
    /// number of pivots is a lower bound on the generic rank.
    pub fn echelon_units(&self) -> Echelon<C> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let found = (r..m.rows).find_map(|i| m.get(i, c).unit_inverse().map(|inv| (i, inv)));
            let Some((i, inv)) = found else { continue };
            m.swap_rows(i, r);
            m.scale_row(r, &inv);
            for k in 0..m.rows {
                if k != r && !m.get(k, c).is_zero() {
                    let f = m.get(k, c).clone();
                    m.axpy_row(k, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { rref: m, pivots }
    }

    /// Solves `self * X = rhs` for square `self` by Gauss-Jordan elimination
    /// on unit pivots. Returns `None` if no unit pivot is available in some
    /// column (over a field: if `self` is singular).
    pub fn solve_units(&self, rhs: &Self) -> Result<Option<Self>> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if rhs.rows != self.rows {
            return Err(Error::DimensionMismatch("solve: row counts differ".into()));
        }
        let n = self.rows;
        let mut aug = self.hcat(rhs)?;
        for c in 0..n {
            let found = (c..n).find_map(|i| aug.get(i, c).unit_inverse().map(|inv| (i, inv)));
            let Some((i, inv)) = found else {
                return Ok(None);
            };
            aug.swap_rows(i, c);
            aug.scale_row(c, &inv);
            for k in 0..n {
                if k != c && !aug.get(k, c).is_zero() {
                    let f = aug.get(k, c).clone();
                    aug.axpy_row(k, c, &f);
                }
            }
        }
        let cols: Vec<usize> = (n..n + rhs.cols).collect();
        let rows: Vec<usize> = (0..n).collect();
        Ok(Some(aug.submatrix(&rows, &cols)))
    }

    /// Row-major JSON with scalars rendered as strings.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Vec<String>> = (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| x.to_string()).collect())
            .collect();
        json!({
            "rows": self.rows,
            "cols": self.cols,
            "ring": C::ring_name(&self.ring),
            "entries": entries,
            "row_labels": self.row_labels,
            "col_labels": self.col_labels,
        })
    }
}

impl<C: Field> Matrix<C> {
    pub fn rref(&self) -> Echelon<C> {
        self.echelon_units()
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<C>> {
        let Echelon { rref, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![C::zero(&self.ring); self.cols];
                v[f] = C::one(&self.ring);
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = rref.get(i, f).neg();
                }
                v
            })
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det_bareiss(&self) -> Result<C> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let one = C::one(&self.ring);
        if n == 0 {
            return Ok(one);
        }
        let mut m = self.clone();
        let mut negate = false;
        let mut prev = one;
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        negate = !negate;
                    }
                    None => return Ok(C::zero(&self.ring)),
                }
            }
            let prev_inv = prev.inv().expect("Bareiss divisor is nonzero");
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = m
                        .get(i, j)
                        .mul(m.get(k, k))
                        .sub(&m.get(i, k).mul(m.get(k, j)))
                        .mul(&prev_inv);
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        let d = m.get(n - 1, n - 1).clone();
        Ok(if negate { d.neg() } else { d })
    }

    /// Clears column `col` with row `row`, then deletes both. The rank of
    /// the result is exactly one less than the rank of `self`.
    pub fn strike_pivot(&self, row: usize, col: usize) -> Result<Self> {
        if row >= self.rows || col >= self.cols {
            return Err(Error::DimensionMismatch(format!(
                "pivot ({row}, {col}) outside a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let inv = self
            .get(row, col)
            .inv()
            .ok_or(Error::ZeroPivot { row, col })?;
        let mut m = self.clone();
        for k in 0..m.rows {
            if k != row && !m.get(k, col).is_zero() {
                let f = m.get(k, col).mul(&inv);
                m.axpy_row(k, row, &f);
            }
        }
        Ok(m.delete(&[row], &[col]))
    }

    pub fn reduce_mod(&self, p: &PrimeField) -> Option<Matrix<Fp>> {
        self.try_map(p, |x| x.reduce_mod(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Rational;

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(
            &(),
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_and_zero() {
        let i5 = Matrix::<Rational>::identity(&(), 5);
        assert_eq!(i5.rank(), 5);
        assert!(i5.kernel_basis().is_empty());
        let z = Matrix::<Rational>::zeros(&(), 3, 4);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.kernel_basis().len(), 4);
    }

    #[test]
    fn determinants() {
        let d = qm(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 5]]);
        assert_eq!(d.det_bareiss().unwrap(), Rational::from_int(30));
        let s = qm(&[&[1, 2, 3], &[4, 5, 6], &[1, 2, 3]]);
        assert_eq!(s.det_bareiss().unwrap(), Rational::from_int(0));
        let swap = qm(&[&[0, 1], &[1, 0]]);
        assert_eq!(swap.det_bareiss().unwrap(), Rational::from_int(-1));
        assert!(matches!(
            qm(&[&[1, 2]]).det_bareiss(),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = qm(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 4 - m.rank());
        for v in &k {
            assert!(m.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn strike_identity() {
        let i2 = Matrix::<Rational>::identity(&(), 2);
        let s = i2.strike_pivot(0, 0).unwrap();
        assert_eq!(s, Matrix::identity(&(), 1));
        assert!(matches!(
            qm(&[&[0, 1], &[1, 0]]).strike_pivot(0, 0),
            Err(Error::ZeroPivot { row: 0, col: 0 })
        ));
    }

    #[test]
    fn solve_round_trip() {
        let b = qm(&[&[2, 1], &[1, 1]]);
        let rhs = qm(&[&[3], &[2]]);
        let x = b.solve_units(&rhs).unwrap().unwrap();
        assert_eq!(b.mul(&x).unwrap(), rhs);
        let sing = qm(&[&[1, 1], &[1, 1]]);
        assert!(sing.solve_units(&rhs).unwrap().is_none());
    }

    #[test]
    fn labels_checked() {
        let m = qm(&[&[1, 2]]);
        assert!(m.clone().with_labels(vec!["r".into()], vec!["a".into()]).is_err());
        let m = m
            .with_labels(vec!["r".into()], vec!["a".into(), "b".into()])
            .unwrap();
        assert_eq!(m.transpose().row_labels().unwrap(), &["a", "b"]);
    }
}
