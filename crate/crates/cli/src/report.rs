//! Flat JSON records written one per line, and text formatting helpers.

use std::io::{self, Write};

use serde::Serialize;

use fiedler_core::equivalence::EquivalenceReport;
use fiedler_core::spectral::{DiscrepancyReport, Eigenvalue, TransferVerdict};
use fiedler_core::{Rsmp, SigmaSeq, C64};

/// One verification of one decision sequence. Timing is deliberately left
/// out so that reruns produce identical bytes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub instance: String,
    pub n: usize,
    pub p: usize,
    pub m: usize,
    #[serde(rename = "d_A")]
    pub deg_a: usize,
    #[serde(rename = "d_D")]
    pub deg_d: usize,
    pub sigma: String,
    pub pencil_rows: usize,
    pub pencil_cols: usize,
    pub max_residual: f64,
    pub corollary_residual: f64,
    pub u_deviation: f64,
    pub v_deviation: f64,
    pub tol: f64,
    pub passed: bool,
}

impl RunReport {
    pub fn new(
        instance: &str,
        r: &Rsmp,
        s: &SigmaSeq,
        dims: (usize, usize),
        report: &EquivalenceReport,
    ) -> Self {
        Self {
            instance: instance.to_owned(),
            n: r.n(),
            p: r.p(),
            m: r.m(),
            deg_a: r.deg_a(),
            deg_d: r.deg_d(),
            sigma: s.to_letters(),
            pencil_rows: dims.0,
            pencil_cols: dims.1,
            max_residual: report.max_residual,
            corollary_residual: report.corollary_residual,
            u_deviation: report.u_deviation,
            v_deviation: report.v_deviation,
            tol: report.tol,
            passed: report.passed,
        }
    }
}

/// Writes `record` as one JSON line.
pub fn write_record<T: Serialize>(out: &mut dyn Write, record: &T) -> io::Result<()> {
    serde_json::to_writer(&mut *out, record)?;
    out.write_all(b"\n")
}

fn trim(x: f64) -> String {
    let text = format!("{x:.6}");
    let text = text.trim_end_matches('0').trim_end_matches('.');
    if text == "-0" {
        "0".to_owned()
    } else {
        text.to_owned()
    }
}

/// Short text form of a complex number with six decimals, dropping parts
/// below the eigenvalue matching tolerance.
pub fn complex(z: C64) -> String {
    let negligible = 1e-6 * z.norm().max(1.0);
    if z.im.abs() <= negligible {
        trim(z.re)
    } else if z.re.abs() <= negligible {
        format!("{}i", trim(z.im))
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{sign}{}i", trim(z.re), trim(z.im.abs()))
    }
}

/// `{a, b, b}` with every value repeated by multiplicity.
pub fn multiset(values: &[Eigenvalue]) -> String {
    let items: Vec<String> = values
        .iter()
        .flat_map(|e| std::iter::repeat_n(complex(e.value), e.multiplicity))
        .collect();
    format!("{{{}}}", items.join(", "))
}

#[derive(Serialize)]
struct EigenvalueRecord {
    re: f64,
    im: f64,
    multiplicity: usize,
}

#[derive(Serialize)]
struct CandidateRecord {
    re: f64,
    im: f64,
    verdict: &'static str,
}

/// JSON form of a [`DiscrepancyReport`].
#[derive(Serialize)]
pub struct DiscrepancyRecord {
    instance: String,
    s_eigenvalues: Vec<EigenvalueRecord>,
    poles: Vec<EigenvalueRecord>,
    transfer_normal_rank: usize,
    transfer_tests: Vec<CandidateRecord>,
    cleared_eigenvalues: Vec<EigenvalueRecord>,
    s_not_r: Vec<[f64; 2]>,
    cleared_not_s: Vec<EigenvalueRecord>,
}

fn records(values: &[Eigenvalue]) -> Vec<EigenvalueRecord> {
    values
        .iter()
        .map(|e| EigenvalueRecord {
            re: e.value.re,
            im: e.value.im,
            multiplicity: e.multiplicity,
        })
        .collect()
}

pub fn verdict_name(v: TransferVerdict) -> &'static str {
    match v {
        TransferVerdict::Eigenvalue => "eigenvalue",
        TransferVerdict::NotEigenvalue => "not_eigenvalue",
        TransferVerdict::Pole => "pole",
    }
}

impl DiscrepancyRecord {
    pub fn new(instance: &str, report: &DiscrepancyReport) -> Self {
        Self {
            instance: instance.to_owned(),
            s_eigenvalues: records(&report.s_spectrum.eigenvalues),
            poles: records(&report.poles.eigenvalues),
            transfer_normal_rank: report.transfer_normal_rank,
            transfer_tests: report
                .transfer_tests
                .iter()
                .map(|t| CandidateRecord {
                    re: t.point.re,
                    im: t.point.im,
                    verdict: verdict_name(t.verdict),
                })
                .collect(),
            cleared_eigenvalues: records(&report.cleared_spectrum.eigenvalues),
            s_not_r: report.s_not_r.iter().map(|z| [z.re, z.im]).collect(),
            cleared_not_s: records(&report.cleared_not_s),
        }
    }
}
