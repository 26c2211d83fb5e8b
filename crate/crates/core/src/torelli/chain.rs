//! The chain `L_1 -> L_2 -> L_3 -> L_4 -> L_5` of submatrices, and the
//! determinant certificate for `L_5`.
//!
//! Two versions of each reduction step are kept. The literal one deletes the
//! published rows and columns. The sound one clears each pivot column with
//! its row before deleting (so rank drops by exactly one per strike) and
//! tracks where the original rows and columns moved.

use std::sync::OnceLock;

use serde::Serialize;

use super::blocks::printed_l5;
use super::decompose;
use crate::error::{Error, Result};
use crate::exactla::{det_symbolic_sparse, Contribution, Matrix};
use crate::family::Normalized14;
use crate::polyring::{Coeff, Field, Param, ParamMono, ParamPoly};

/// Pivots struck from `L_1`, 1-based, in order.
pub const L1_STRIKES: [(usize, usize); 8] = [
    (3, 16),
    (1, 6),
    (17, 22),
    (14, 12),
    (2, 7),
    (4, 17),
    (15, 11),
    (16, 21),
];

/// Pivots struck from `L_3`, 1-based in `L_3` coordinates.
pub const L3_STRIKES: [(usize, usize); 6] = [(1, 5), (2, 6), (3, 7), (16, 8), (17, 9), (18, 10)];

/// Rows of `L_1` kept in `L_2`, 1-based.
const L2_ROWS: [usize; 18] = [5, 6, 7, 8, 9, 10, 11, 12, 13, 18, 19, 20, 21, 22, 23, 24, 25, 26];
const L2_COLS: [usize; 16] = [2, 3, 4, 5, 8, 9, 10, 13, 14, 15, 18, 19, 20, 23, 24, 25];

/// Rows and columns of `L_3` removed to get `L_4`, 1-based.
const L4_DROP_ROWS: [usize; 6] = [1, 2, 3, 16, 17, 18];
const L4_DROP_COLS: [usize; 6] = [5, 6, 7, 8, 9, 10];

/// Rows of `L_4` removed to get `L_5`, 1-based.
const L5_DROP_ROWS: [usize; 2] = [6, 7];

/// Published positions `(row, column)` of the certificate term in `L_5`.
pub const PAPER_CERTIFICATE_POSITIONS: [(usize, usize); 10] = [
    (9, 1),
    (10, 2),
    (1, 3),
    (2, 4),
    (7, 5),
    (3, 6),
    (5, 7),
    (6, 8),
    (8, 9),
    (4, 10),
];

fn zero_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i - 1).collect()
}

/// `L_2 .. L_5` by literal deletion.
#[derive(Clone, Debug)]
pub struct LiteralChain<C: Coeff> {
    pub l2: Matrix<C>,
    pub l3: Matrix<C>,
    pub l4: Matrix<C>,
    pub l5: Matrix<C>,
}

/// `l1_special` is `L_1` at the point with `e1 = g2 = 0`.
pub fn literal_chain<C: Coeff>(l1: &Matrix<C>, l1_special: &Matrix<C>) -> LiteralChain<C> {
    let l2_of = |m: &Matrix<C>| m.submatrix(&zero_based(&L2_ROWS), &zero_based(&L2_COLS));
    let l2 = l2_of(l1);
    let l3 = l2_of(l1_special);
    let l4 = l3.delete(&zero_based(&L4_DROP_ROWS), &zero_based(&L4_DROP_COLS));
    let l5 = l4.delete(&zero_based(&L5_DROP_ROWS), &[]);
    LiteralChain { l2, l3, l4, l5 }
}

/// Result of a sequence of sound strikes.
struct Struck<C: Coeff> {
    matrix: Matrix<C>,
    rows: Vec<usize>,
    cols: Vec<usize>,
}

fn strike_chain<C: Field>(m: &Matrix<C>, strikes: &[(usize, usize)]) -> std::result::Result<Struck<C>, String> {
    let mut cur = Struck {
        matrix: m.clone(),
        rows: (1..=m.rows()).collect(),
        cols: (1..=m.cols()).collect(),
    };
    for &(r, c) in strikes {
        let i = cur.rows.iter().position(|&x| x == r);
        let j = cur.cols.iter().position(|&x| x == c);
        let (Some(i), Some(j)) = (i, j) else {
            return Err(format!("pivot ({r}, {c}) already removed"));
        };
        cur.matrix = cur
            .matrix
            .strike_pivot(i, j)
            .map_err(|_| format!("pivot ({r}, {c}) vanishes after earlier strikes"))?;
        cur.rows.remove(i);
        cur.cols.remove(j);
    }
    Ok(cur)
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub rank_l1: usize,
    pub rank_l2: usize,
    pub rank_l2_sound: Option<usize>,
    /// After the sound strikes the first column of `L_1` is zero, so
    /// dropping it does not change the rank.
    pub sound_column_one_zero: Option<bool>,
    pub rank_l3: usize,
    pub rank_l4: usize,
    pub rank_l4_sound: Option<usize>,
    pub det_l5: String,
    pub det_l5_nonzero: bool,
    /// `rank L1 = rank L2 + 8` for the literal `L_2`.
    pub l1_l2_relation: bool,
    /// `rank L3 = rank L4 + 6` for the literal `L_4`.
    pub l3_l4_relation: bool,
    /// Literal and sound reductions give the same ranks.
    pub literal_sound_agree: bool,
    pub pivot_failures: Vec<String>,
}

/// Runs both versions of the chain on numeric matrices.
pub fn chain_l<C: Field>(l1: &Matrix<C>, l1_special: &Matrix<C>) -> Result<ChainReport> {
    let lit = literal_chain(l1, l1_special);
    let mut failures = Vec::new();

    let rank_l1 = l1.rank();
    let (rank_l2_sound, col_one_zero) = match strike_chain(l1, &L1_STRIKES) {
        Ok(s) => {
            let j = s.cols.iter().position(|&c| c == 1).expect("column 1 is never struck");
            let zero = s.matrix.column(j).iter().all(|x| x.is_zero());
            let keep_rows: Vec<usize> = (0..s.rows.len()).collect();
            let keep_cols: Vec<usize> = (0..s.cols.len()).filter(|&k| k != j).collect();
            (Some(s.matrix.submatrix(&keep_rows, &keep_cols).rank()), Some(zero))
        }
        Err(e) => {
            failures.push(format!("L1: {e}"));
            (None, None)
        }
    };
    let rank_l2 = lit.l2.rank();
    let rank_l3 = lit.l3.rank();
    let rank_l4 = lit.l4.rank();
    let rank_l4_sound = match strike_chain(&lit.l3, &L3_STRIKES) {
        Ok(s) => Some(s.matrix.rank()),
        Err(e) => {
            failures.push(format!("L3: {e}"));
            None
        }
    };
    let det = lit.l5.det_bareiss()?;
    Ok(ChainReport {
        rank_l1,
        rank_l2,
        rank_l2_sound,
        sound_column_one_zero: col_one_zero,
        rank_l3,
        rank_l4,
        rank_l4_sound,
        det_l5: det.to_string(),
        det_l5_nonzero: !det.is_zero(),
        l1_l2_relation: rank_l1 == rank_l2 + L1_STRIKES.len(),
        l3_l4_relation: rank_l3 == rank_l4 + L3_STRIKES.len(),
        literal_sound_agree: rank_l2_sound == Some(rank_l2) && rank_l4_sound == Some(rank_l4),
        pivot_failures: failures,
    })
}

/// `L_1 .. L_5` over the parameter polynomials.
#[derive(Clone, Debug)]
pub struct SymbolicChain {
    pub l1: Matrix<ParamPoly>,
    pub chain: LiteralChain<ParamPoly>,
    pub l5_matches_printed: bool,
}

fn compute_symbolic_chain() -> std::result::Result<SymbolicChain, String> {
    let dec = decompose(&Normalized14::<ParamPoly>::symbolic()).map_err(|e| e.to_string())?;
    let l1 = dec
        .l1
        .ok_or("symbolic decomposition ran out of unit pivots")?;
    let special = [Param::from_name("e1"), Param::from_name("g2")].map(|p| p.expect("known name"));
    let l1_special = l1.map(&(), |x| x.specialize_zero(&special));
    let chain = literal_chain(&l1, &l1_special);
    let l5_matches_printed = chain.l5.clone().without_labels() == printed_l5();
    Ok(SymbolicChain {
        l1,
        chain,
        l5_matches_printed,
    })
}

/// Computed once per process; the symbolic pipeline does not depend on any
/// input.
pub fn symbolic_chain() -> Result<&'static SymbolicChain> {
    static CELL: OnceLock<std::result::Result<SymbolicChain, String>> = OnceLock::new();
    CELL.get_or_init(compute_symbolic_chain)
        .as_ref()
        .map_err(|e| Error::VerificationFailed(e.clone()))
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub monomial: String,
    pub det_terms: usize,
    pub permutations_visited: usize,
    pub contributions: Vec<Contribution>,
    pub coefficient: String,
    pub det_nonzero: bool,
    /// The unique contributing permutation uses the published positions.
    pub positions_match: bool,
    pub l5_matches_printed: bool,
}

pub fn certificate_monomial() -> ParamMono {
    let p = |s: &str| Param::from_name(s).expect("known name");
    ParamMono::from_factors(&[
        (p("d2"), 2),
        (p("a1"), 2),
        (p("l2"), 2),
        (p("h2"), 1),
        (p("h1"), 2),
        (p("l1"), 1),
    ])
}

/// Expands `det L_5` symbolically and lists the permutations producing the
/// certificate monomial.
pub fn det_l5_certificate() -> Result<Certificate> {
    let sym = symbolic_chain()?;
    let det = det_symbolic_sparse(&sym.chain.l5)?;
    let m = certificate_monomial();
    let census = det.census(&m).ok_or_else(|| {
        Error::VerificationFailed("L5 entries are not single terms; no census".into())
    })?;
    let mut expected: Vec<(usize, usize)> = PAPER_CERTIFICATE_POSITIONS.to_vec();
    expected.sort_by_key(|&(_, c)| c);
    let positions_match =
        census.contributions.len() == 1 && census.contributions[0].positions == expected;
    Ok(Certificate {
        monomial: census.monomial,
        det_terms: det.det.num_terms(),
        permutations_visited: det.permutations_visited,
        contributions: census.contributions,
        coefficient: census.total.to_string(),
        det_nonzero: !det.det.is_zero(),
        positions_match,
        l5_matches_printed: sym.l5_matches_printed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Rational;

    #[test]
    fn strike_tracking_survives_reordering() {
        let m = Matrix::from_rows(
            &(),
            vec![
                vec![Rational::from_int(1), Rational::from_int(2), Rational::from_int(0)],
                vec![Rational::from_int(0), Rational::from_int(1), Rational::from_int(4)],
                vec![Rational::from_int(5), Rational::from_int(0), Rational::from_int(1)],
            ],
        )
        .unwrap();
        let s = strike_chain(&m, &[(3, 3), (1, 1)]).unwrap();
        assert_eq!(s.rows, vec![2]);
        assert_eq!(s.cols, vec![2]);
        assert_eq!(s.matrix.rank(), m.rank() - 2);
        assert!(strike_chain(&m, &[(1, 1), (1, 2)]).is_err());
    }

    #[test]
    fn literal_shapes() {
        let l1 = Matrix::<Rational>::zeros(&(), 26, 25);
        let c = literal_chain(&l1, &l1);
        assert_eq!((c.l2.rows(), c.l2.cols()), (18, 16));
        assert_eq!((c.l4.rows(), c.l4.cols()), (12, 10));
        assert_eq!((c.l5.rows(), c.l5.cols()), (10, 10));
    }
}
