use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use tors3::exactla::Matrix;
use tors3::family::{
    build_pair, normalize, random_params, AnyPoint, FieldChoice, NormalizeField, Normalized14,
    ParamFile, ParamPoint,
};
use tors3::geomchecks::{free_action_check, smooth_scan, DEFAULT_PRIMES};
use tors3::polyring::{Coeff, Fp, Rational};
use tors3::quotient::GradedPiece;
use tors3::report::{verify_general, verify_normalized, ReportOptions, VerificationReport};
use tors3::torelli::{decompose, det_l5_certificate, literal_chain, symbolic_chain};

use crate::Source;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] tors3::Error),
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use tors3::Error as E;
        match self {
            CliError::Usage(_) | CliError::Read { .. } | CliError::Io(_) | CliError::Csv(_) => 2,
            CliError::Core(e) => match e {
                E::Parse(_)
                | E::InvalidPrime(..)
                | E::Json(_)
                | E::Io(_)
                | E::MixedRings(..)
                | E::DegreeTooLarge(_) => 2,
                _ => 1,
            },
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

macro_rules! with_point {
    ($point:expr, $p:ident => $body:expr) => {
        match $point {
            AnyPoint::Rational($p) => $body,
            AnyPoint::Fp($p) => $body,
        }
    };
}

fn parse_field(s: Option<&str>) -> Result<Option<FieldChoice>> {
    s.map(|f| {
        let choice: FieldChoice = f.parse().map_err(|e: tors3::Error| CliError::Usage(e.to_string()))?;
        if let FieldChoice::Fp(p) = choice {
            if p.modulus() < 5 {
                return Err(CliError::Usage(format!("field {f}: the prime must be at least 5")));
            }
        }
        Ok(choice)
    })
    .transpose()
}

fn sample(field: FieldChoice, seed: u64, bound: i64) -> tors3::Result<AnyPoint> {
    Ok(match field {
        FieldChoice::Rational => {
            AnyPoint::Rational(ParamPoint::Normalized14(random_params::<Rational>(&(), seed, bound)?))
        }
        FieldChoice::Fp(p) => AnyPoint::Fp(ParamPoint::Normalized14(random_params::<Fp>(&p, seed, bound)?)),
    })
}

fn load(source: &Source) -> Result<AnyPoint> {
    let field = parse_field(source.field.as_deref())?;
    match (&source.params, source.random) {
        (Some(path), false) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Read {
                path: path.display().to_string(),
                source: e,
            })?;
            let point = ParamFile::parse(&text)?;
            if let Some(f) = field {
                if f != point.field() {
                    return Err(CliError::Usage(format!(
                        "--field {f} disagrees with the parameter file ({})",
                        point.field()
                    )));
                }
            }
            Ok(point)
        }
        (None, true) => Ok(sample(field.unwrap_or(FieldChoice::Rational), source.seed, source.bound)?),
        _ => Err(CliError::Usage("give exactly one of --params PATH or --random".into())),
    }
}

fn to_normalized<C: NormalizeField + Serialize>(p: ParamPoint<C>) -> Result<Normalized14<C>> {
    match p {
        ParamPoint::Normalized14(t) => Ok(t),
        ParamPoint::General26(g) => Ok(normalize(&g)?.point),
    }
}

/// Writes to stdout, treating a closed pipe as success.
fn out_text(text: &str) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

/// JSON goes to `out` if given (summary to stdout), else to stdout (summary
/// to stderr).
fn emit<T: Serialize>(value: &T, out: Option<PathBuf>, summary: &str) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(tors3::Error::from)?;
    match out {
        Some(path) => {
            fs::write(&path, text + "\n")?;
            out_text(&format!("{summary}\n"))?;
        }
        None => {
            out_text(&format!("{text}\n"))?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn code(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn report_for<C: NormalizeField + Serialize>(p: ParamPoint<C>, opts: &ReportOptions) -> tors3::Result<VerificationReport> {
    match p {
        ParamPoint::Normalized14(t) => verify_normalized(&t, opts),
        ParamPoint::General26(g) => verify_general(&g, opts),
    }
}

pub fn verify(source: &Source, primes: Option<Vec<u64>>, out: Option<PathBuf>) -> Result<ExitCode> {
    let point = load(source)?;
    let opts = ReportOptions {
        seed: source.random.then_some(source.seed),
        primes,
    };
    let report = with_point!(point, p => report_for(p, &opts)?);
    emit(&report, out, &report.summary())?;
    Ok(code(report.is_injective()))
}

struct ScanRow {
    seed: u64,
    field: String,
    free_action: bool,
    generic_flags: bool,
    rank_a: Option<usize>,
    rank_dprime: Option<usize>,
    det_l5_nonzero: Option<bool>,
    conclusion: String,
}

fn scan_row(field: FieldChoice, seed: u64, bound: i64) -> tors3::Result<ScanRow> {
    let opts = ReportOptions {
        seed: Some(seed),
        primes: None,
    };
    match sample(field, seed, bound) {
        Ok(point) => {
            let r = with_point!(point, p => report_for(p, &opts)?);
            let generic = r
                .verdict
                .as_ref()
                .is_some_and(|v| !v.pieces.is_empty() && v.pieces.iter().all(|p| p.generic))
                && r.stage.is_none();
            Ok(ScanRow {
                seed,
                field: r.field.clone(),
                free_action: r.free_action.passes(),
                generic_flags: generic,
                rank_a: r.ranks.a,
                rank_dprime: r.ranks.dprime,
                det_l5_nonzero: r.detL5_nonzero,
                conclusion: r.conclusion,
            })
        }
        Err(tors3::Error::RetryCapExceeded { predicate, .. }) => Ok(ScanRow {
            seed,
            field: field.to_string(),
            free_action: !predicate.starts_with("free-action"),
            generic_flags: false,
            rank_a: None,
            rank_dprime: None,
            det_l5_nonzero: None,
            conclusion: "non-generic-input".into(),
        }),
        Err(e) => Err(e),
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn scan(samples: u64, seed: u64, bound: i64, field: Option<String>, out: Option<PathBuf>) -> Result<ExitCode> {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let field = parse_field(field.as_deref())?.unwrap_or(FieldChoice::Rational);
    // rayon keeps input order, so rows come back sorted by seed
    let rows: Vec<ScanRow> = (0..samples)
        .into_par_iter()
        .map(|k| scan_row(field, seed + k, bound))
        .collect::<tors3::Result<_>>()?;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "seed",
        "field",
        "free_action",
        "generic_flags",
        "rank_A",
        "rank_Dprime",
        "detL5_nonzero",
        "conclusion",
    ])?;
    for r in &rows {
        w.write_record([
            r.seed.to_string(),
            r.field.clone(),
            r.free_action.to_string(),
            r.generic_flags.to_string(),
            opt(r.rank_a),
            opt(r.rank_dprime),
            opt(r.det_l5_nonzero),
            r.conclusion.clone(),
        ])?;
    }
    let mut text = String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv is utf-8");
    let count = |c: &str| rows.iter().filter(|r| r.conclusion == c).count();
    let degenerate = count("degenerate");
    let summary = format!(
        "# samples={} injective={} degenerate={} non_generic={} degeneracy_frequency={:.4}",
        rows.len(),
        count("injective"),
        degenerate,
        count("non-generic-input"),
        (rows.len() - count("injective")) as f64 / rows.len() as f64
    );
    text.push_str(&summary);
    text.push('\n');
    match out {
        Some(path) => {
            fs::write(path, &text)?;
            out_text(&format!("{summary}\n"))?;
        }
        None => out_text(&text)?,
    }
    Ok(ExitCode::SUCCESS)
}

pub fn certificate(out: Option<PathBuf>) -> Result<ExitCode> {
    let cert = det_l5_certificate()?;
    let ok = cert.contributions.len() == 1 && cert.positions_match && cert.det_nonzero;
    let summary = format!(
        "certificate: {} has {} contributing permutation(s), coefficient {}, positions match: {}",
        cert.monomial,
        cert.contributions.len(),
        cert.coefficient,
        cert.positions_match
    );
    emit(&cert, out, &summary)?;
    Ok(code(ok))
}

fn selection(emit: &str) -> Result<Vec<usize>> {
    match emit {
        "all" => Ok((1..=5).collect()),
        _ => match emit.strip_prefix('l').and_then(|k| k.parse::<usize>().ok()) {
            Some(k @ 1..=5) => Ok(vec![k]),
            _ => Err(CliError::Usage(format!(
                "--emit must be one of l1, l2, l3, l4, l5, all; got {emit:?}"
            ))),
        },
    }
}

fn chain_json<C: Coeff>(l1: &Matrix<C>, l1_special: &Matrix<C>, which: &[usize]) -> Map<String, Value> {
    let c = literal_chain(l1, l1_special);
    let all = [l1, &c.l2, &c.l3, &c.l4, &c.l5];
    which
        .iter()
        .map(|&k| (format!("L{k}"), all[k - 1].to_json()))
        .collect()
}

fn numeric_matrices<C: NormalizeField + Serialize>(p: ParamPoint<C>, which: &[usize]) -> Result<Value> {
    let t = to_normalized(p)?;
    let dec = decompose(&t)?;
    let special = decompose(&t.with_e1_g2_zero())?;
    let (Some(l1), Some(l1s)) = (&dec.l1, &special.l1) else {
        return Err(tors3::Error::NonGeneric {
            stage: "direct-sum".into(),
            detail: "image(A) + M' is not a direct sum at this point or its e1 = g2 = 0 specialization"
                .into(),
        }
        .into());
    };
    Ok(json!({
        "symbolic": false,
        "params": t.to_map(),
        "matrices": chain_json(l1, l1s, which),
    }))
}

pub fn matrices(source: &Source, symbolic: bool, emit_sel: &str, out: Option<PathBuf>) -> Result<ExitCode> {
    let which = selection(emit_sel)?;
    let value = if symbolic {
        if source.params.is_some() || source.random {
            return Err(CliError::Usage("--symbolic takes no parameter source".into()));
        }
        let sym = symbolic_chain()?;
        let c = &sym.chain;
        let all = [&sym.l1, &c.l2, &c.l3, &c.l4, &c.l5];
        let m: Map<String, Value> = which
            .iter()
            .map(|&k| (format!("L{k}"), all[k - 1].to_json()))
            .collect();
        json!({
            "symbolic": true,
            "l5_matches_printed": sym.l5_matches_printed,
            "matrices": m,
        })
    } else {
        let point = load(source)?;
        with_point!(point, p => numeric_matrices(p, &which)?)
    };
    let names: Vec<String> = which.iter().map(|k| format!("L{k}")).collect();
    emit(&value, out, &format!("emitted {}", names.join(", ")))?;
    Ok(ExitCode::SUCCESS)
}

fn dims_json<C: Coeff>(p: &ParamPoint<C>) -> Result<(Value, String)> {
    let pair = build_pair(p);
    let mut rows = Vec::new();
    let mut table = String::from("n  monomials  slice_rank  dim  weights\n");
    let mut r4w0 = 0;
    for n in 0..=6 {
        let s = GradedPiece::new(&pair, n)?.summary();
        if n == 4 {
            r4w0 = s.dim_by_weight[0];
        }
        table.push_str(&format!(
            "{:<2} {:>9}  {:>10}  {:>3}  {:?}{}\n",
            n,
            s.monomials,
            s.slice_rank,
            s.dim,
            s.dim_by_weight,
            if s.generic { "" } else { "  (not generic)" }
        ));
        rows.push(s);
    }
    let value = json!({
        "pieces": rows,
        "R4w0": r4w0,
        "R4w0x2": 2 * r4w0,
        "V": tors3::torelli::v_basis().len(),
        "Mprime": tors3::torelli::mprime_basis().len(),
    });
    Ok((value, table.trim_end().to_string()))
}

pub fn dims(source: &Source, out: Option<PathBuf>) -> Result<ExitCode> {
    let point = load(source)?;
    let (value, table) = with_point!(point, p => dims_json(&p)?);
    emit(&value, out, &table)?;
    Ok(ExitCode::SUCCESS)
}

pub fn check_action(source: &Source, out: Option<PathBuf>) -> Result<ExitCode> {
    let point = load(source)?;
    let report = with_point!(point, p => free_action_check(&build_pair(&p)));
    let summary = match report.first_failure() {
        None => "free action: conditions (i), (ii), (iii) hold".to_string(),
        Some(c) => format!("free action: condition ({c}) fails"),
    };
    emit(&report, out, &summary)?;
    Ok(code(report.passes()))
}

pub fn smooth(source: &Source, primes: Option<Vec<u64>>, out: Option<PathBuf>) -> Result<ExitCode> {
    let point = load(source)?;
    let primes = primes.unwrap_or_else(|| DEFAULT_PRIMES.to_vec());
    let report = with_point!(point, p => smooth_scan(&build_pair(&p), &primes)?);
    let summary = report
        .records
        .iter()
        .map(|r| format!("p={}: {} singular point(s)", r.prime, r.singular_count))
        .collect::<Vec<_>>()
        .join("; ");
    emit(&report, out, &format!("smooth scan (heuristic): {summary}"))?;
    Ok(code(report.no_singular_points()))
}
