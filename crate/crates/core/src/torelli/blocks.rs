//! The published entries of `L_1` and `L_5`, and a comparison of the
//! symbolic computation against them.
//!
//! Rows are comma separated; an empty entry is zero and `*` marks an entry
//! that was not printed.

use serde::Serialize;

use crate::error::Result;
use crate::exactla::Matrix;
use crate::polyring::{Coeff, ParamPoly};

const L11: [&str; 13] = [
    "3,,,,",
    "0,,,,",
    "0,,,,",
    "0,,,,",
    ",a1,,,",
    ",b1,a1,,",
    ",,b1,,",
    ",c1,,a1,",
    ",d1,c1,b1,a1",
    ",,d1,,b1",
    ",,,c1,",
    ",,,d1,c1",
    ",,,,d1",
];

const L12: [&str; 13] = [
    "-3,,,,,-e1,,,,",
    ",2e1,,,,,,,,",
    "-3,,a1,,,-e1,0,c1,,",
    ",,,,b1,,,,,d1",
    ",,3,,,,,e1,,",
    ",,,3,,,,,e1,",
    ",,,,3,,,,,e1",
    ",,2e1,,,,,,,",
    ",,,2e1,,,,,,",
    ",,,,2e1,,,,,",
    ",,,,0,,,,,",
    ",,,,0,,,,,",
    ",,,,0,,,,,",
];

const L13: [&str; 13] = [
    ",,-a1,,-c1,,,-b1,,-d1",
    ",,,c1,*,,,,d1,*",
    "3,,-a1,,,h1,0,-b1,,",
    ",l1,,,-c1,,,,,-d1",
    ",,3,,,,,h1,,",
    ",,2h1,,,,,2l1,,",
    ",,l1,,,,,,,",
    ",,,3,,,,,h1,",
    ",,,2h1,,,,,2l1,",
    ",,,l1,,,,,,",
    ",,,,3,,,,,h1",
    ",,,,2h1,,,,,2l1",
    ",,,,l1,,,,,",
];

const L21: [&str; 13] = [
    "3,,,,",
    "0,,,,",
    "0,,,,",
    "0,,,,",
    ",a2,,,",
    ",b2,a2,,",
    ",,b2,,",
    ",c2,,a2,",
    ",d2,c2,b2,a2",
    ",,d2,,b2",
    ",,,c2,",
    ",,,d2,c2",
    ",,,,d2",
];

const L22: [&str; 13] = [
    ",-g2,,,,,-3,,,",
    ",,,,,2g2,,,,",
    ",,a2,,,,,c2,,",
    "0,-g2,,,b2,,-3,,,d2",
    ",,,,,,,0,,",
    ",,,,,,,0,,",
    ",,,,,,,0,,",
    ",,,,,,,2g2,,",
    ",,,,,,,,2g2,",
    ",,,,,,,,,2g2",
    ",,g2,,,,,3,,",
    ",,,g2,,,,,3,",
    ",,,,g2,,,,,3",
];

const L23: [&str; 13] = [
    ",,-a2,,-c2,,,-b2,,-d2",
    ",,*,a2,,,,*,b2,",
    ",,-a2,,,h2,,-b2,,",
    "0,l2,,,-c2,,3,,,-d2",
    ",,,,,,,h2,,",
    ",,2h2,,,,,2l2,,",
    ",,l2,,,,,3,,",
    ",,,,,,,,h2,",
    ",,,2h2,,,,,2l2,",
    ",,,l2,,,,,3,",
    ",,,,,,,,,h2",
    ",,,,2h2,,,,,2l2",
    ",,,,l2,,,,,3",
];

const L5: [&str; 10] = [
    "c1,,a1,,,3,,,h1,",
    "d1,c1,b1,a1,,2h1,,,2l1,",
    ",d1,,b1,,l1,,,,",
    ",,c1,,,,3,,,h1",
    ",,d1,c1,,,2h1,,,2l1",
    "b2,a2,,,2h2,,,2l2,,",
    ",b2,,,l2,,,3,,",
    "c2,,a2,,,,,,h2,",
    "d2,c2,b2,a2,,2h2,,,2l2,",
    ",d2,,b2,,l2,,,3,",
];

/// Block name, table, row offset and column offset inside `L_1`.
const BLOCKS: [(&str, &[&str; 13], usize, usize); 6] = [
    ("L11", &L11, 0, 0),
    ("L12", &L12, 0, 5),
    ("L13", &L13, 0, 15),
    ("L21", &L21, 13, 0),
    ("L22", &L22, 13, 5),
    ("L23", &L23, 13, 15),
];

fn parse_entry(s: &str) -> Result<Option<ParamPoly>> {
    let s = s.trim();
    match s {
        "*" => Ok(None),
        "" => Ok(Some(ParamPoly::zero(&()))),
        _ => s.parse().map(Some),
    }
}

fn parse_rows(rows: &[&str]) -> Result<Vec<Vec<Option<ParamPoly>>>> {
    rows.iter()
        .map(|r| r.split(',').map(parse_entry).collect())
        .collect()
}

/// The printed `L_5` as a symbolic matrix.
pub fn printed_l5() -> Matrix<ParamPoly> {
    let rows = parse_rows(&L5)
        .expect("printed table parses")
        .into_iter()
        .map(|r| r.into_iter().map(|e| e.expect("no skipped entries")).collect())
        .collect();
    Matrix::from_rows(&(), rows).expect("square table")
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockMismatch {
    pub block: String,
    /// 1-based position inside the block.
    pub row: usize,
    pub col: usize,
    pub printed: String,
    pub computed: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct StarEntry {
    pub block: String,
    pub row: usize,
    pub col: usize,
    /// 1-based position inside `L_1`.
    pub l1_row: usize,
    pub l1_col: usize,
    pub computed: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockCheck {
    pub entries_compared: usize,
    pub mismatches: Vec<BlockMismatch>,
    pub skipped_star_positions: Vec<StarEntry>,
}

impl BlockCheck {
    pub fn passes(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares a symbolic `L_1` with the printed blocks entry by entry.
pub fn block_check(l1: &Matrix<ParamPoly>) -> Result<BlockCheck> {
    let mut out = BlockCheck {
        entries_compared: 0,
        mismatches: Vec::new(),
        skipped_star_positions: Vec::new(),
    };
    for (name, table, r0, c0) in BLOCKS {
        for (i, row) in parse_rows(table)?.into_iter().enumerate() {
            for (j, printed) in row.into_iter().enumerate() {
                let computed = l1.get(r0 + i, c0 + j);
                match printed {
                    None => out.skipped_star_positions.push(StarEntry {
                        block: name.into(),
                        row: i + 1,
                        col: j + 1,
                        l1_row: r0 + i + 1,
                        l1_col: c0 + j + 1,
                        computed: computed.to_string(),
                    }),
                    Some(p) => {
                        out.entries_compared += 1;
                        if &p != computed {
                            out.mismatches.push(BlockMismatch {
                                block: name.into(),
                                row: i + 1,
                                col: j + 1,
                                printed: p.to_string(),
                                computed: computed.to_string(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_have_block_shapes() {
        for (_, table, _, c0) in BLOCKS {
            let width = match c0 {
                0 => 5,
                _ => 10,
            };
            for row in parse_rows(table).unwrap() {
                assert_eq!(row.len(), width);
            }
        }
        let l5 = printed_l5();
        assert_eq!((l5.rows(), l5.cols()), (10, 10));
        assert_eq!(l5.get(1, 5).to_string(), "2*h1");
    }

    #[test]
    fn star_count() {
        let stars: usize = BLOCKS
            .iter()
            .map(|(_, t, _, _)| {
                parse_rows(*t)
                    .unwrap()
                    .iter()
                    .flatten()
                    .filter(|e| e.is_none())
                    .count()
            })
            .sum();
        assert_eq!(stars, 4);
    }
}
