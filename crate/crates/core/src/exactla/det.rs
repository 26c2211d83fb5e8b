//! Symbolic determinants over parameter polynomials.
//!
//! When every entry is a single term, the determinant is expanded over the
//! permutations that avoid zero entries, and each resulting parameter
//! monomial keeps the list of permutations that produced it. Otherwise the
//! expansion falls back to a memoized Laplace expansion, without the census.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::Matrix;
use crate::error::{Error, Result};
use crate::polyring::{Coeff, ParamMono, ParamPoly, Rational};

/// One permutation term: the entries it passes through and its signed
/// coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Contribution {
    /// 1-based `(row, column)` positions, listed by column.
    pub positions: Vec<(usize, usize)>,
    pub sign: i8,
    pub coefficient: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub monomial: String,
    pub contributions: Vec<Contribution>,
    /// Coefficient of the monomial in the determinant.
    pub total: Rational,
}

#[derive(Clone, Debug)]
pub struct SymbolicDeterminant {
    pub det: ParamPoly,
    contributions: Option<BTreeMap<ParamMono, Vec<Contribution>>>,
    pub permutations_visited: usize,
}

impl SymbolicDeterminant {
    pub fn has_census(&self) -> bool {
        self.contributions.is_some()
    }

    pub fn census(&self, m: &ParamMono) -> Option<Census> {
        let map = self.contributions.as_ref()?;
        let contributions = map.get(m).cloned().unwrap_or_default();
        Some(Census {
            monomial: m.to_string(),
            contributions,
            total: self.det.coefficient(m),
        })
    }
}

fn permutation_sign(perm: &[usize]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn det_symbolic_sparse(m: &Matrix<ParamPoly>) -> Result<SymbolicDeterminant> {
    if m.rows() != m.cols() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let single = (0..n).all(|r| m.row(r).iter().all(|e| e.num_terms() <= 1));
    if single {
        Ok(permutation_expansion(m))
    } else {
        Ok(SymbolicDeterminant {
            det: laplace_memo(m),
            contributions: None,
            permutations_visited: 0,
        })
    }
}

fn permutation_expansion(m: &Matrix<ParamPoly>) -> SymbolicDeterminant {
    let n = m.rows();
    let support: Vec<Vec<(usize, ParamMono, Rational)>> = (0..n)
        .map(|r| {
            m.row(r)
                .iter()
                .enumerate()
                .filter_map(|(c, e)| e.as_single_term().map(|(mm, cc)| (c, *mm, cc.clone())))
                .collect()
        })
        .collect();

    struct Walk<'a> {
        support: &'a [Vec<(usize, ParamMono, Rational)>],
        perm: Vec<usize>,
        used: Vec<bool>,
        out: BTreeMap<ParamMono, Vec<Contribution>>,
        visited: usize,
    }

    impl Walk<'_> {
        fn go(&mut self, row: usize, mono: ParamMono, coeff: Rational) {
            let n = self.support.len();
            if row == n {
                self.visited += 1;
                let sign = permutation_sign(&self.perm);
                let coefficient = if sign < 0 { coeff.neg() } else { coeff };
                let mut positions: Vec<(usize, usize)> =
                    self.perm.iter().enumerate().map(|(r, &c)| (r + 1, c + 1)).collect();
                positions.sort_by_key(|&(_, c)| c);
                self.out.entry(mono).or_default().push(Contribution {
                    positions,
                    sign,
                    coefficient,
                });
                return;
            }
            for k in 0..self.support[row].len() {
                let (c, em, ec) = self.support[row][k].clone();
                if self.used[c] {
                    continue;
                }
                self.used[c] = true;
                self.perm.push(c);
                self.go(row + 1, mono.mul(&em), coeff.mul(&ec));
                self.perm.pop();
                self.used[c] = false;
            }
        }
    }

    let mut walk = Walk {
        support: &support,
        perm: Vec::with_capacity(n),
        used: vec![false; n],
        out: BTreeMap::new(),
        visited: 0,
    };
    walk.go(0, ParamMono::one(), Rational::from_int(1));

    let mut det = ParamPoly::default();
    for (mono, contribs) in &walk.out {
        let total = contribs
            .iter()
            .fold(Rational::from_int(0), |acc, c| acc.add(&c.coefficient));
        det = det.add(&ParamPoly::term(total, *mono));
    }
    SymbolicDeterminant {
        det,
        contributions: Some(walk.out),
        permutations_visited: walk.visited,
    }
}

/// Laplace expansion along rows, memoized on the set of columns already used.
fn laplace_memo(m: &Matrix<ParamPoly>) -> ParamPoly {
    let n = m.rows();
    assert!(n <= 63, "Laplace fallback limited to 63 columns");
    let mut memo: HashMap<u64, ParamPoly> = HashMap::new();

    fn rec(
        m: &Matrix<ParamPoly>,
        row: usize,
        used: u64,
        memo: &mut HashMap<u64, ParamPoly>,
    ) -> ParamPoly {
        let n = m.rows();
        if row == n {
            return ParamPoly::one(&());
        }
        if let Some(v) = memo.get(&used) {
            return v.clone();
        }
        let mut acc = ParamPoly::default();
        let mut position = 0usize;
        for c in 0..n {
            if used & (1 << c) != 0 {
                continue;
            }
            let e = m.get(row, c);
            if !e.is_zero() {
                let minor = rec(m, row + 1, used | (1 << c), memo);
                let t = e.mul(&minor);
                acc = if position.is_multiple_of(2) { acc.add(&t) } else { acc.sub(&t) };
            }
            position += 1;
        }
        memo.insert(used, acc.clone());
        acc
    }

    rec(m, 0, 0, &mut memo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Param;

    fn pm(rows: &[&[&str]]) -> Matrix<ParamPoly> {
        Matrix::from_rows(
            &(),
            rows.iter()
                .map(|r| r.iter().map(|s| s.parse().unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn two_by_two() {
        let m = pm(&[&["a1", "b1"], &["c1", "d1"]]);
        let d = det_symbolic_sparse(&m).unwrap();
        let expect = "a1".parse::<ParamPoly>().unwrap().mul(&"d1".parse().unwrap()).sub(
            &"b1".parse::<ParamPoly>().unwrap().mul(&"c1".parse().unwrap()),
        );
        assert_eq!(d.det, expect);
        let ad = ParamMono::from_factors(&[
            (Param::from_name("a1").unwrap(), 1),
            (Param::from_name("d1").unwrap(), 1),
        ]);
        let census = d.census(&ad).unwrap();
        assert_eq!(census.contributions.len(), 1);
        assert_eq!(census.contributions[0].positions, vec![(1, 1), (2, 2)]);
        assert_eq!(census.contributions[0].sign, 1);
    }

    #[test]
    fn laplace_fallback_matches() {
        let m = pm(&[&["a1", "b1", "0"], &["c1", "d1", "1"], &["2", "0", "h1"]]);
        let sparse = det_symbolic_sparse(&m).unwrap();
        assert!(sparse.has_census());
        // a two-term entry forces the Laplace fallback
        let two_term = "a1".parse::<ParamPoly>().unwrap().add(&"b1".parse().unwrap());
        let mut f = m.clone();
        f.set(2, 1, two_term);
        let fallback = det_symbolic_sparse(&f).unwrap();
        assert!(!fallback.has_census());
        let g = |r: usize, c: usize| f.get(r, c).clone();
        let cof = g(0, 0)
            .mul(&g(1, 1).mul(&g(2, 2)).sub(&g(1, 2).mul(&g(2, 1))))
            .sub(&g(0, 1).mul(&g(1, 0).mul(&g(2, 2)).sub(&g(1, 2).mul(&g(2, 0)))))
            .add(&g(0, 2).mul(&g(1, 0).mul(&g(2, 1)).sub(&g(1, 1).mul(&g(2, 0)))));
        assert_eq!(fallback.det, cof);
        assert_eq!(sparse.det, laplace_memo(&m));
    }
}
