//! Cokernel dimensions of the Jacobian map, commutativity of the
//! multiplication-by-`W0` square, and the final injectivity verdict.

use serde::Serialize;

use super::{decompose, jacobian_map, Pieces};
use crate::error::Result;
use crate::exactla::Matrix;
use crate::family::{build_normalized, CubicPair, Normalized14};
use crate::geomchecks::{free_action_check, ActionCheckReport};
use crate::polyring::{Coeff, Field, Polynomial, NVARS, W0};
use crate::quotient::PieceSummary;

#[derive(Clone, Debug, Serialize)]
pub struct WeightCoker {
    pub weight: u8,
    pub domain_dim: usize,
    pub codomain_dim: usize,
    pub rank: usize,
    pub coker_dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct H1ThetaReport {
    pub per_weight: Vec<WeightCoker>,
    pub total: usize,
    /// Cokernel of the unrestricted degree-1 map; equals `total`.
    pub full_coker: usize,
    pub degree2_kernel: usize,
    pub degree2_coker: usize,
}

impl H1ThetaReport {
    pub fn invariant_part(&self) -> usize {
        self.per_weight[0].coker_dim
    }
}

pub fn h1_theta_report<C: Field>(pair: &CubicPair<C>, pieces: &Pieces<C>) -> Result<H1ThetaReport> {
    let mut per_weight = Vec::new();
    for m in 0..3u8 {
        let j = jacobian_map(pair, pieces, 1, Some(m))?;
        let rank = j.matrix.rank();
        per_weight.push(WeightCoker {
            weight: m,
            domain_dim: j.matrix.cols(),
            codomain_dim: j.matrix.rows(),
            rank,
            coker_dim: j.matrix.rows() - rank,
        });
    }
    let full = jacobian_map(pair, pieces, 1, None)?.matrix;
    let delta = jacobian_map(pair, pieces, 2, None)?.matrix;
    let delta_rank = delta.rank();
    Ok(H1ThetaReport {
        total: per_weight.iter().map(|w| w.coker_dim).sum(),
        per_weight,
        full_coker: full.rows() - full.rank(),
        degree2_kernel: delta.cols() - delta_rank,
        degree2_coker: delta.rows() - delta_rank,
    })
}

fn block_diag<C: Coeff>(ring: &C::Ring, block: &Matrix<C>, copies: usize) -> Matrix<C> {
    let (r, c) = (block.rows(), block.cols());
    let mut out = Matrix::zeros(ring, r * copies, c * copies);
    for k in 0..copies {
        for i in 0..r {
            for j in 0..c {
                out.set(k * r + i, k * c + j, block.get(i, j).clone());
            }
        }
    }
    out
}

/// Multiplication by `W0` commutes with the Jacobian maps in degrees 1
/// and 2.
pub fn diagram_commutes<C: Coeff>(pair: &CubicPair<C>, pieces: &Pieces<C>) -> Result<bool> {
    let ring = pair.ring();
    let w = Polynomial::var(ring, W0);
    let j1 = jacobian_map(pair, pieces, 1, None)?.matrix;
    let j2 = jacobian_map(pair, pieces, 2, None)?.matrix;
    let m12 = block_diag(ring, &pieces.get(1).mult_map(pieces.get(2), &w)?, NVARS);
    let m34 = block_diag(ring, &pieces.get(3).mult_map(pieces.get(4), &w)?, 2);
    Ok(m34.mul(&j1)? == j2.mul(&m12)?)
}

/// `dim A^{-1}(image C)`, computed from ranks alone.
pub fn composite_kernel_dim<C: Field>(a: &Matrix<C>, c: &Matrix<C>) -> Result<usize> {
    Ok(a.cols() + c.rank() - a.hcat(c)?.rank())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Conclusion {
    Injective,
    Degenerate { reason: String },
    NonGenericInput { stage: String, detail: String },
}

impl Conclusion {
    pub fn label(&self) -> &'static str {
        match self {
            Conclusion::Injective => "injective",
            Conclusion::Degenerate { .. } => "degenerate",
            Conclusion::NonGenericInput { .. } => "non-generic-input",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TorelliVerdict {
    pub conclusion: Conclusion,
    pub free_action: ActionCheckReport,
    pub pieces: Vec<PieceSummary>,
    pub rank_a: Option<usize>,
    pub rank_c: Option<usize>,
    pub rank_dprime: Option<usize>,
    pub kernel_dprime: Option<usize>,
    pub euler_in_ker_c: Option<bool>,
    /// Recomputed from `A` and `C` without `D'`.
    pub composite_kernel_dim: Option<usize>,
    /// The independent kernel computation agrees with an injective verdict
    /// (vacuously true otherwise).
    pub independent_check: bool,
}

impl TorelliVerdict {
    fn stopped(conclusion: Conclusion, free_action: ActionCheckReport, pieces: Vec<PieceSummary>) -> Self {
        TorelliVerdict {
            conclusion,
            free_action,
            pieces,
            rank_a: None,
            rank_c: None,
            rank_dprime: None,
            kernel_dprime: None,
            euler_in_ker_c: None,
            composite_kernel_dim: None,
            independent_check: true,
        }
    }
}

pub fn torelli_verdict<C: Field>(t: &Normalized14<C>) -> Result<TorelliVerdict> {
    let pair = build_normalized(t);
    let free_action = free_action_check(&pair);
    if let Some(cond) = free_action.first_failure() {
        let c = Conclusion::NonGenericInput {
            stage: "free-action".into(),
            detail: format!("condition ({cond}) fails"),
        };
        return Ok(TorelliVerdict::stopped(c, free_action, Vec::new()));
    }
    let dec = decompose(t)?;
    let pieces: Vec<PieceSummary> = (0..=4).map(|n| dec.pieces.get(n).summary()).collect();
    if !dec.pieces.is_generic() {
        let bad = pieces.iter().find(|p| !p.generic).expect("some piece is not generic");
        let c = Conclusion::NonGenericInput {
            stage: "ideal-slice".into(),
            detail: format!(
                "degree {} slice has rank {}, expected {}",
                bad.degree, bad.slice_rank, bad.expected_slice_rank
            ),
        };
        return Ok(TorelliVerdict::stopped(c, free_action, pieces));
    }
    let rank_a = dec.a.matrix.rank();
    let rank_c = dec.c.matrix.rank();
    let composite = composite_kernel_dim(&dec.a.matrix, &dec.c.matrix)?;
    let mut v = TorelliVerdict::stopped(Conclusion::Injective, free_action, pieces);
    v.rank_a = Some(rank_a);
    v.rank_c = Some(rank_c);
    v.euler_in_ker_c = Some(dec.euler_in_ker_c);
    v.composite_kernel_dim = Some(composite);
    let Some(l1) = &dec.l1 else {
        v.conclusion = Conclusion::NonGenericInput {
            stage: "direct-sum".into(),
            detail: "image(A) + M' is not a direct sum".into(),
        };
        return Ok(v);
    };
    let rank_d = l1.rank();
    v.rank_dprime = Some(rank_d);
    v.kernel_dprime = Some(l1.cols() - rank_d);
    let mut reasons = Vec::new();
    if rank_a != dec.a.matrix.cols() {
        reasons.push(format!("rank A = {rank_a}"));
    }
    if rank_d + 1 != l1.cols() {
        reasons.push(format!("rank D' = {rank_d}"));
    }
    if !dec.euler_in_ker_c {
        reasons.push("Euler vector not in ker C".to_string());
    }
    if reasons.is_empty() {
        v.independent_check = composite == 0;
    } else {
        v.conclusion = Conclusion::Degenerate {
            reason: reasons.join("; "),
        };
    }
    Ok(v)
}
