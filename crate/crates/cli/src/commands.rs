use std::fmt::Write;

use dsquiver_core::builder::{build_instance, MultiIndex, QuiverInstance};
use dsquiver_core::matrixops::{
    irreducible_test, middle_convolution, moment_map, orbit_member, output_alpha, predicted_forms, quasi_irreducible,
    to_quiver_rep, MatrixTuple,
};
use dsquiver_core::numeric::{ExactMatrix, GaussRat};
use dsquiver_core::sigma::{sigma_tilde_member, Certificate, Move, ReductionTrace, Terminal, Verdict};
use dsquiver_core::spectral::SpectralData;
use dsquiver_core::Error;
use serde::Serialize;

use crate::schema::{InstanceDoc, TupleDoc};
use crate::{dot, CliError, Format, Output};

fn texts(v: &[GaussRat]) -> Vec<String> {
    v.iter().map(GaussRat::to_text).collect()
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn core_err(e: Error) -> CliError {
    match e {
        Error::CapExceeded { cap } => CliError::Cap(cap),
        e => CliError::Input(e.to_string()),
    }
}

pub fn load_instance(text: &str) -> Result<(SpectralData, QuiverInstance), CliError> {
    let data = InstanceDoc::parse(text)?.to_spectral()?;
    let inst = build_instance(&data).map_err(core_err)?;
    Ok((data, inst))
}

#[derive(Serialize)]
struct QuiverReport {
    vertices: Vec<String>,
    arrows: Vec<[usize; 2]>,
    alpha: Vec<i64>,
    lambda: Vec<String>,
    i_irr: Vec<usize>,
    lattice_ok: bool,
    alpha_dot_lambda: String,
}

pub fn quiver(text: &str, format: Format) -> Result<Output, CliError> {
    let (_, inst) = load_instance(text)?;
    let q = &inst.quiver;
    let report = QuiverReport {
        vertices: q.vertices().iter().map(ToString::to_string).collect(),
        arrows: q.arrows().iter().map(|&(s, t)| [s, t]).collect(),
        alpha: inst.alpha.clone(),
        lambda: texts(&inst.lambda),
        i_irr: inst.irr.clone(),
        lattice_ok: inst.lattice_member(&inst.alpha),
        alpha_dot_lambda: inst.alpha_dot_lambda().to_text(),
    };
    let body = match format {
        Format::Json => json(&report),
        Format::Dot => dot::render(&inst),
        Format::Text => {
            let mut s = String::new();
            for (k, v) in report.vertices.iter().enumerate() {
                writeln!(s, "{v}\talpha={}\tlambda={}", report.alpha[k], report.lambda[k]).unwrap();
            }
            writeln!(s, "arrows: {}", report.arrows.len()).unwrap();
            writeln!(s, "I_irr: {:?}", report.i_irr).unwrap();
            writeln!(s, "lattice: {}", report.lattice_ok).unwrap();
            writeln!(s, "alpha.lambda: {}", report.alpha_dot_lambda).unwrap();
            s
        }
    };
    Ok(Output { body, code: 0 })
}

#[derive(Serialize)]
struct ReasonDoc {
    condition: &'static str,
    passed: Option<bool>,
    detail: String,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum CertificateDoc {
    ViolatingDecomposition { parts: Vec<Vec<i64>>, p_values: Vec<i64>, p_alpha: i64 },
    ExhaustiveWitness { roots_considered: usize, decompositions_checked: u64 },
}

#[derive(Serialize)]
struct StepDoc {
    reflection: String,
    legal: bool,
    alpha: Vec<i64>,
}

#[derive(Serialize)]
struct TraceDoc {
    steps: Vec<StepDoc>,
    terminal: Option<String>,
    note: String,
}

#[derive(Serialize)]
struct VerdictDoc {
    solvable: bool,
    moduli_nonempty: bool,
    vertices: Vec<String>,
    alpha: Vec<i64>,
    lambda: Vec<String>,
    reasons: Vec<ReasonDoc>,
    certificate: Option<CertificateDoc>,
    reduction: Option<TraceDoc>,
}

fn trace_doc(inst: &QuiverInstance, t: &ReductionTrace) -> TraceDoc {
    let vname = |a: usize| inst.quiver.vertices()[a].to_string();
    TraceDoc {
        steps: t
            .steps
            .iter()
            .map(|s| StepDoc {
                reflection: match &s.mv {
                    Move::Composite(idx) => format!("composite {idx}"),
                    Move::Leg(a) => format!("leg {}", vname(*a)),
                },
                legal: s.legal,
                alpha: s.after.0.clone(),
            })
            .collect(),
        terminal: t.terminal.as_ref().map(|x| match x {
            Terminal::CompositeUnit(idx) => format!("composite unit {idx}"),
            Terminal::LegUnit(a) => format!("leg unit {}", vname(*a)),
            Terminal::QuasiFundamental => "quasi-fundamental".into(),
        }),
        note: t.note.clone(),
    }
}

fn verdict_doc(inst: &QuiverInstance, v: &Verdict) -> VerdictDoc {
    VerdictDoc {
        solvable: v.solvable,
        moduli_nonempty: v.moduli_nonempty(),
        vertices: inst.quiver.vertices().iter().map(ToString::to_string).collect(),
        alpha: inst.alpha.clone(),
        lambda: texts(&inst.lambda),
        reasons: v
            .reasons
            .iter()
            .map(|r| ReasonDoc { condition: r.condition.name(), passed: r.passed, detail: r.detail.clone() })
            .collect(),
        certificate: v.certificate.as_ref().map(|c| match c {
            Certificate::ViolatingDecomposition { parts, p_values, p_alpha } => CertificateDoc::ViolatingDecomposition {
                parts: parts.clone(),
                p_values: p_values.clone(),
                p_alpha: *p_alpha,
            },
            Certificate::ExhaustiveWitness { roots_considered, decompositions_checked } => {
                CertificateDoc::ExhaustiveWitness {
                    roots_considered: *roots_considered,
                    decompositions_checked: *decompositions_checked,
                }
            }
        }),
        reduction: v.trace.as_ref().map(|t| trace_doc(inst, t)),
    }
}

pub fn check(text: &str, format: Format, max_nodes: u64) -> Result<Output, CliError> {
    let (_, inst) = load_instance(text)?;
    let v = sigma_tilde_member(&inst, max_nodes).map_err(core_err)?;
    let doc = verdict_doc(&inst, &v);
    let body = match format {
        Format::Json => json(&doc),
        Format::Text => {
            let mut s = format!("solvable: {}\n", if doc.solvable { "yes" } else { "no" });
            for r in &doc.reasons {
                let mark = match r.passed {
                    Some(true) => "ok",
                    Some(false) => "FAILED",
                    None => "skipped",
                };
                writeln!(s, "  {}: {mark} ({})", r.condition, r.detail).unwrap();
            }
            if let Some(CertificateDoc::ViolatingDecomposition { parts, p_values, p_alpha }) = &doc.certificate {
                writeln!(s, "  decomposition {parts:?} with p-values {p_values:?} against p(alpha) = {p_alpha}").unwrap();
            }
            s
        }
        Format::Dot => return Err(CliError::Input("check has no dot output".into())),
    };
    Ok(Output { body, code: if v.solvable { 0 } else { 1 } })
}

/// `"1,2,1"`: one 1-based block per pole.
pub fn parse_index(s: &str, poles: usize) -> Result<MultiIndex, CliError> {
    let idx = s
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| CliError::Input(format!("bad multi-index {s:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if idx.len() != poles {
        return Err(CliError::Input(format!("multi-index needs {poles} entries, got {}", idx.len())));
    }
    Ok(MultiIndex(idx))
}

/// Pads each pole to its order; nonzero coefficients past the order, a
/// rank mismatch or a different pole list are shape errors.
fn fit_tuple(t: &MatrixTuple, points: &[String], data: &SpectralData) -> Result<MatrixTuple, CliError> {
    if t.rank != data.rank {
        return Err(CliError::Input(format!("tuple has rank {} but the instance has rank {}", t.rank, data.rank)));
    }
    if points.len() != data.poles.len() || points.iter().zip(&data.poles).any(|(a, p)| *a != p.label) {
        return Err(CliError::Input("tuple and instance list different poles".into()));
    }
    let mut out = t.clone();
    for (i, (a, p)) in out.poles.iter_mut().zip(&data.poles).enumerate() {
        if a[p.order.min(a.len())..].iter().any(|m| !m.is_zero()) {
            return Err(CliError::Input(format!("pole {i}: coefficients beyond order {}", p.order)));
        }
        a.resize(p.order, ExactMatrix::zeros(t.rank, t.rank));
    }
    Ok(out)
}

#[derive(Serialize)]
struct McReport {
    index: String,
    xi: String,
    dim_w: usize,
    dim_w_predicted: usize,
    rank: usize,
    alpha: Vec<i64>,
    alpha_prime: Option<Vec<i64>>,
    alpha_expected: Vec<i64>,
    alpha_check: bool,
    orbit_check: Vec<bool>,
    irreducible_input: bool,
    irreducible_output: bool,
}

#[derive(Serialize)]
struct McDoc {
    report: McReport,
    tuple: TupleDoc,
}

pub struct McResult {
    pub output: Output,
    pub tuple: TupleDoc,
    pub predicted: Option<InstanceDoc>,
}

/// With `tuple_to_file` the JSON body is the report alone; otherwise it
/// carries the output tuple as well.
pub fn mc(
    tuple_text: &str,
    instance_text: &str,
    index: Option<&str>,
    format: Format,
    tuple_to_file: bool,
) -> Result<McResult, CliError> {
    let doc = TupleDoc::parse(tuple_text)?;
    let (data, inst) = load_instance(instance_text)?;
    let t = fit_tuple(&doc.to_tuple()?, &doc.points(), &data)?;
    let idx = match index {
        Some(s) => parse_index(s, data.poles.len())?,
        None => MultiIndex(vec![1; data.poles.len()]),
    };
    let out = middle_convolution(&t, &data, &idx).map_err(core_err)?;
    let expected = inst.reflect_composite(&inst.alpha, &idx);
    let pred = predicted_forms(&data, &idx, out.dim_w).ok();
    let (orbit_check, alpha_prime) = match (&pred, out.tuple.rank) {
        (Some(p), r) if r > 0 => (
            out.tuple.poles.iter().zip(p).map(|(a, b)| orbit_member(a, b).unwrap_or(false)).collect(),
            output_alpha(&inst, &out.tuple, p).ok(),
        ),
        (_, 0) => (Vec::new(), Some(vec![0; inst.alpha.len()])),
        _ => (vec![false; out.tuple.poles.len()], None),
    };
    let report = McReport {
        index: idx.to_string(),
        xi: out.xi.to_text(),
        dim_w: out.dim_w,
        dim_w_predicted: out.dim_w_predicted,
        rank: out.tuple.rank,
        alpha: inst.alpha.clone(),
        alpha_check: alpha_prime.as_ref() == Some(&expected),
        alpha_prime,
        alpha_expected: expected,
        orbit_check,
        irreducible_input: irreducible_test(&t),
        irreducible_output: out.tuple.rank == 0 || irreducible_test(&out.tuple),
    };
    let ok = report.alpha_check && report.orbit_check.iter().all(|&b| b) && report.dim_w == report.dim_w_predicted;
    let tuple = TupleDoc::from_tuple(&out.tuple, &doc.points());
    let predicted = pred
        .filter(|p| out.tuple.rank > 0 && p.iter().all(|x| !x.blocks.is_empty()))
        .and_then(|p| SpectralData::new(out.tuple.rank, p).ok())
        .map(|d| InstanceDoc::from_spectral(&d));
    let body = match format {
        Format::Json if tuple_to_file => json(&report),
        Format::Json => json(&McDoc { report, tuple: TupleDoc::from_tuple(&out.tuple, &doc.points()) }),
        Format::Text => format!(
            "mc at {} with xi = {}: rank {} -> {}\ndim W {} (formula {})\nalpha' = {:?}, expected {:?}: {}\norbits: {:?}\n",
            report.index,
            report.xi,
            t.rank,
            report.rank,
            report.dim_w,
            report.dim_w_predicted,
            report.alpha_prime,
            report.alpha_expected,
            report.alpha_check,
            report.orbit_check
        ),
        Format::Dot => return Err(CliError::Input("mc has no dot output".into())),
    };
    Ok(McResult { output: Output { body, code: if ok { 0 } else { 1 } }, tuple, predicted })
}

#[derive(Serialize)]
struct VerifyReport {
    residue_sum_zero: bool,
    orbits: Vec<bool>,
    irreducible: bool,
    moment_map: Option<bool>,
    quasi_irreducible: Option<bool>,
    all_ok: bool,
}

pub fn verify(tuple_text: &str, instance_text: &str, format: Format) -> Result<Output, CliError> {
    let doc = TupleDoc::parse(tuple_text)?;
    let (data, inst) = load_instance(instance_text)?;
    let t = fit_tuple(&doc.to_tuple()?, &doc.points(), &data)?;
    let residue_sum_zero = t.residue_sum_is_zero();
    let orbits: Vec<bool> = t.poles.iter().zip(&data.poles).map(|(a, p)| orbit_member(a, p).unwrap_or(false)).collect();
    let irreducible = irreducible_test(&t);
    let (moment, quasi) = if residue_sum_zero && orbits.iter().all(|&b| b) {
        match to_quiver_rep(&inst, &t) {
            Ok(rep) => {
                let mu = moment_map(&inst.quiver, &rep);
                let ok = mu.iter().zip(&rep.dims).zip(&inst.lambda).all(|((m, &d), l)| *m == ExactMatrix::scalar(d, l));
                (Some(ok), quasi_irreducible(&inst, &rep).ok())
            }
            Err(_) => (Some(false), None),
        }
    } else {
        (None, None)
    };
    let all_ok = residue_sum_zero && orbits.iter().all(|&b| b) && irreducible && moment == Some(true) && quasi == Some(true);
    let report = VerifyReport { residue_sum_zero, orbits, irreducible, moment_map: moment, quasi_irreducible: quasi, all_ok };
    let body = match format {
        Format::Json => json(&report),
        Format::Text => format!(
            "residue sum zero: {}\norbits: {:?}\nirreducible: {}\nmoment map: {:?}\nquasi-irreducible: {:?}\nall ok: {}\n",
            report.residue_sum_zero, report.orbits, report.irreducible, report.moment_map, report.quasi_irreducible, report.all_ok
        ),
        Format::Dot => return Err(CliError::Input("verify has no dot output".into())),
    };
    Ok(Output { body, code: if all_ok { 0 } else { 1 } })
}
