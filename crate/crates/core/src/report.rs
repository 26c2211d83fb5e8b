//! The JSON report for one parameter point.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{build_general, build_normalized, normalize, General26, Normalized14, NormalizeField};
use crate::geomchecks::{free_action_check, smooth_scan, ActionCheckReport, SmoothScanReport};
use crate::polyring::Field;
use crate::torelli::{
    block_check, chain_l, decompose, diagram_commutes, h1_theta_report, symbolic_chain,
    torelli_verdict, BlockMismatch, ChainReport, Conclusion, StarEntry, TorelliVerdict,
};

#[derive(Clone, Debug, Serialize)]
pub struct Dims {
    #[serde(rename = "V")]
    pub v: usize,
    #[serde(rename = "R4w0x2")]
    pub r4w0x2: usize,
    #[serde(rename = "R")]
    pub r: Vec<usize>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    #[serde(rename = "Mprime")]
    pub mprime: usize,
    pub h1_theta_x: Option<usize>,
    pub h1_theta_y: Option<usize>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Ranks {
    #[serde(rename = "A")]
    pub a: Option<usize>,
    #[serde(rename = "C")]
    pub c: Option<usize>,
    #[serde(rename = "Dprime")]
    pub dprime: Option<usize>,
    #[serde(rename = "L1")]
    pub l1: Option<usize>,
    #[serde(rename = "L2")]
    pub l2: Option<usize>,
    #[serde(rename = "L3")]
    pub l3: Option<usize>,
    #[serde(rename = "L4")]
    pub l4: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockSummary {
    pub entries_compared: usize,
    pub mismatches: Vec<BlockMismatch>,
    pub skipped_star_positions: Vec<StarEntry>,
}

#[derive(Clone, Debug, Serialize)]
#[allow(non_snake_case)]
pub struct VerificationReport {
    pub params: BTreeMap<String, String>,
    /// Normalized coordinates actually used, when the input was general.
    pub normalized_params: Option<BTreeMap<String, String>>,
    pub field: String,
    pub dims: Dims,
    pub ranks: Ranks,
    pub detL5_nonzero: Option<bool>,
    pub euler_in_kerC: Option<bool>,
    pub diagram_commutes: Option<bool>,
    pub free_action: ActionCheckReport,
    pub smooth_scan: Option<SmoothScanReport>,
    pub block_check: BlockSummary,
    pub chain: Option<ChainReport>,
    pub verdict: Option<TorelliVerdict>,
    pub conclusion: String,
    pub stage: Option<String>,
    pub detail: Option<String>,
    pub seed: Option<u64>,
    pub runtime_ms: u128,
}

impl VerificationReport {
    pub fn is_injective(&self) -> bool {
        self.conclusion == "injective"
    }

    /// One line for terminals.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "conclusion: {} (field {}, rank A = {}, rank D' = {}, det L5 nonzero = {})",
            self.conclusion,
            self.field,
            show(self.ranks.a),
            show(self.ranks.dprime),
            show(self.detL5_nonzero),
        );
        if let Some(stage) = &self.stage {
            s.push_str(&format!("; stopped at {stage}"));
        }
        if let Some(d) = &self.detail {
            s.push_str(&format!(": {d}"));
        }
        s
    }
}

fn show<T: ToString>(v: Option<T>) -> String {
    v.map_or("n/a".into(), |x| x.to_string())
}

fn block_summary() -> Result<BlockSummary> {
    let sym = symbolic_chain()?;
    let b = block_check(&sym.l1)?;
    Ok(BlockSummary {
        entries_compared: b.entries_compared,
        mismatches: b.mismatches,
        skipped_star_positions: b.skipped_star_positions,
    })
}

fn empty_dims() -> Dims {
    Dims {
        v: crate::torelli::v_basis().len(),
        r4w0x2: 0,
        r: Vec::new(),
        m: None,
        mprime: crate::torelli::mprime_basis().len(),
        h1_theta_x: None,
        h1_theta_y: None,
    }
}

/// Options shared by the report builders.
#[derive(Clone, Debug, Default)]
pub struct ReportOptions {
    pub seed: Option<u64>,
    pub primes: Option<Vec<u64>>,
}

/// Full pipeline at a normalized point.
pub fn verify_normalized<C: Field>(t: &Normalized14<C>, opts: &ReportOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let ring = t.values()[0].ring();
    let pair = build_normalized(t);
    let verdict = torelli_verdict(t)?;
    let mut report = VerificationReport {
        params: t.to_map(),
        normalized_params: None,
        field: C::ring_name(&ring),
        dims: empty_dims(),
        ranks: Ranks {
            a: verdict.rank_a,
            c: verdict.rank_c,
            dprime: verdict.rank_dprime,
            ..Ranks::default()
        },
        detL5_nonzero: None,
        euler_in_kerC: verdict.euler_in_ker_c,
        diagram_commutes: None,
        free_action: verdict.free_action.clone(),
        smooth_scan: None,
        block_check: block_summary()?,
        chain: None,
        verdict: None,
        conclusion: verdict.conclusion.label().to_string(),
        stage: None,
        detail: None,
        seed: opts.seed,
        runtime_ms: 0,
    };
    match &verdict.conclusion {
        Conclusion::NonGenericInput { stage, detail } => {
            report.stage = Some(stage.clone());
            report.detail = Some(detail.clone());
        }
        Conclusion::Degenerate { reason } => report.detail = Some(reason.clone()),
        Conclusion::Injective => {}
    }
    let free = verdict.free_action.passes();
    if free {
        let dec = decompose(t)?;
        report.dims.r = (0..=4).map(|n| dec.pieces.get(n).dim()).collect();
        report.dims.r4w0x2 = 2 * dec.pieces.get(4).dim_by_weight()[0];
        report.dims.m = verdict.rank_a;
        let h1 = h1_theta_report(&pair, &dec.pieces)?;
        report.dims.h1_theta_x = Some(h1.invariant_part());
        report.dims.h1_theta_y = Some(h1.total);
        report.diagram_commutes = Some(diagram_commutes(&pair, &dec.pieces)?);
        if let Some(l1) = &dec.l1 {
            let special = decompose(&t.with_e1_g2_zero())?;
            if let Some(l1s) = &special.l1 {
                let chain = chain_l(l1, l1s)?;
                report.ranks.l1 = Some(chain.rank_l1);
                report.ranks.l2 = Some(chain.rank_l2);
                report.ranks.l3 = Some(chain.rank_l3);
                report.ranks.l4 = Some(chain.rank_l4);
                report.detL5_nonzero = Some(chain.det_l5_nonzero);
                report.chain = Some(chain);
            }
        }
    }
    if let Some(primes) = &opts.primes {
        report.smooth_scan = Some(smooth_scan(&pair, primes)?);
    }
    report.verdict = Some(verdict);
    report.runtime_ms = start.elapsed().as_millis();
    Ok(report)
}

/// Normalizes a general point first; failures become non-generic reports.
pub fn verify_general<C: NormalizeField + Serialize>(
    g: &General26<C>,
    opts: &ReportOptions,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let pair = build_general(g);
    let stopped = |stage: &str, detail: String| -> Result<VerificationReport> {
        let ring = g.values()[0].ring();
        Ok(VerificationReport {
            params: g.to_map(),
            normalized_params: None,
            field: C::ring_name(&ring),
            dims: empty_dims(),
            ranks: Ranks::default(),
            detL5_nonzero: None,
            euler_in_kerC: None,
            diagram_commutes: None,
            free_action: free_action_check(&pair),
            smooth_scan: None,
            block_check: block_summary()?,
            chain: None,
            verdict: None,
            conclusion: "non-generic-input".into(),
            stage: Some(stage.into()),
            detail: Some(detail),
            seed: opts.seed,
            runtime_ms: start.elapsed().as_millis(),
        })
    };
    match normalize(g) {
        Ok(n) => {
            let mut r = verify_normalized(&n.point, opts)?;
            r.normalized_params = Some(r.params.clone());
            r.params = g.to_map();
            r.runtime_ms = start.elapsed().as_millis();
            Ok(r)
        }
        Err(Error::FreeActionViolation { condition }) => {
            stopped("free-action", format!("condition ({condition}) fails"))
        }
        Err(Error::NotNormalizableOverField(d)) => stopped("normalize", d),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{embed_params, random_params};
    use crate::polyring::Rational;

    #[test]
    fn json_keys() {
        let t = random_params::<Rational>(&(), 42, 9).unwrap();
        let r = verify_normalized(&t, &ReportOptions::default()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in [
            "params", "field", "dims", "ranks", "detL5_nonzero", "euler_in_kerC", "free_action",
            "smooth_scan", "block_check", "conclusion", "seed", "runtime_ms",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["dims"]["V"], 25);
        assert_eq!(v["dims"]["R4w0x2"], 40);
        assert_eq!(v["block_check"]["mismatches"].as_array().unwrap().len(), 0);
    }

    #[test]
    fn general_input_is_normalized() {
        let t = random_params::<Rational>(&(), 42, 9).unwrap();
        let direct = verify_normalized(&t, &ReportOptions::default()).unwrap();
        let via = verify_general(&embed_params(&t), &ReportOptions::default()).unwrap();
        assert_eq!(direct.conclusion, via.conclusion);
        assert_eq!(direct.ranks.dprime, via.ranks.dprime);
        assert!(via.normalized_params.is_some());
    }
}
