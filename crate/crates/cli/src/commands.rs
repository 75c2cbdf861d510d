//! The subcommands. Each returns whether every verification passed; input
//! problems come back as [`CliError`].

use std::cmp::Ordering;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::Rng;

use fiedler_core::equivalence::verify_instance;
use fiedler_core::fiedler::{companion_first, companion_second, fiedler_pencil_rect};
use fiedler_core::random::{self, random_rsmp, Entries, Shape};
use fiedler_core::spectral::{discrepancy_report, eigenvalues_pencil};
use fiedler_core::{Rsmp, SigmaSeq};

use crate::error::CliError;
use crate::format::{emit_pencil, parse_document, Document, RsmpFile};
use crate::report::{complex, multiset, verdict_name, write_record, DiscrepancyRecord, RunReport};

/// Largest degree for which `--all` enumerates decision sequences.
pub const MAX_ALL_DEGREE: usize = 7;

/// Where reports go: a file given by `--out`, or standard output.
pub fn open_output(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match out {
        Some(path) => {
            let file = fs::File::create(path).map_err(|source| io_error(path, source))?;
            Ok(Box::new(std::io::BufWriter::new(file)))
        }
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

fn io_error(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn write_error(source: std::io::Error) -> CliError {
    CliError::Io {
        path: "<output>".into(),
        source,
    }
}

pub fn read_document(path: &Path) -> Result<Document, CliError> {
    let text = fs::read_to_string(path).map_err(|source| io_error(path, source))?;
    parse_document(&text)
}

fn checked_rsmp(path: &Path, file: &RsmpFile) -> Result<Rsmp, CliError> {
    let r = file.to_rsmp()?;
    if !r.a_is_regular() {
        eprintln!("warning: {}: A(λ) is not regular", path.display());
    }
    Ok(r)
}

/// Reads an RSMP file, warning on standard error when `A(λ)` is not regular.
pub fn read_rsmp(path: &Path) -> Result<Rsmp, CliError> {
    match read_document(path)? {
        Document::Rsmp(file) => checked_rsmp(path, &file),
        Document::Pencil(_) => Err(CliError::WrongKind {
            expected: "rsmp",
            found: "pencil",
        }),
    }
}

/// `--sigma` as a decision string or a permutation; may be omitted for degree one.
pub fn resolve_sigma(r: &Rsmp, sigma: Option<&str>) -> Result<SigmaSeq, CliError> {
    let s: SigmaSeq = match sigma {
        Some(text) => text.parse()?,
        None if r.degree() == 1 => SigmaSeq::from_decisions(Vec::new()),
        None => {
            return Err(CliError::Usage(format!(
                "--sigma is required for degree {}",
                r.degree()
            )))
        }
    };
    if s.degree() != r.degree() {
        return Err(fiedler_core::Error::DecisionLength {
            expected: r.degree() - 1,
            got: s.decisions().len(),
        }
        .into());
    }
    Ok(s)
}

fn check_tolerance(tol: f64) -> Result<(), CliError> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "--tol must be a positive number, got {tol}"
        )))
    }
}

pub fn pencil(file: &Path, sigma: Option<&str>, out: Option<&Path>) -> Result<bool, CliError> {
    let r = read_rsmp(file)?;
    let s = resolve_sigma(&r, sigma)?;
    let l = fiedler_pencil_rect(&r, &s)?;
    open_output(out)?
        .write_all(emit_pencil(&l).as_bytes())
        .map_err(write_error)?;
    Ok(true)
}

pub struct VerifyOptions<'a> {
    pub sigma: Option<&'a str>,
    pub all: bool,
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
}

pub fn verify(file: &Path, opts: &VerifyOptions, out: Option<&Path>) -> Result<bool, CliError> {
    check_tolerance(opts.tol)?;
    let r = read_rsmp(file)?;
    let sequences: Vec<SigmaSeq> = if opts.all {
        if opts.sigma.is_some() {
            return Err(CliError::Usage(
                "--all and --sigma are mutually exclusive".into(),
            ));
        }
        if r.degree() > MAX_ALL_DEGREE {
            return Err(CliError::Usage(format!(
                "--all supports degree at most {MAX_ALL_DEGREE}"
            )));
        }
        SigmaSeq::all(r.degree()).collect()
    } else {
        vec![resolve_sigma(&r, opts.sigma)?]
    };
    let points = random::annulus_points(&mut random::rng(opts.seed), opts.trials.max(1));
    let instance = file.display().to_string();
    let mut sink = open_output(out)?;
    let mut failures = 0;
    for s in &sequences {
        let (l, report) = verify_instance(&r, s, &points, opts.tol)?;
        failures += usize::from(!report.passed);
        write_record(
            &mut sink,
            &RunReport::new(&instance, &r, s, l.dims(), &report),
        )
        .map_err(write_error)?;
    }
    sink.flush().map_err(write_error)?;
    eprintln!(
        "{}/{} decision sequences passed",
        sequences.len() - failures,
        sequences.len()
    );
    Ok(failures == 0)
}

pub fn eig(file: &Path, out: Option<&Path>) -> Result<bool, CliError> {
    let mut stdout = std::io::stdout().lock();
    match read_document(file)? {
        Document::Pencil(p) => {
            let spectrum = eigenvalues_pencil(&p.to_pencil()?)?;
            writeln!(stdout, "eigenvalues: {}", multiset(&spectrum.eigenvalues))
                .map_err(write_error)?;
        }
        Document::Rsmp(text) => {
            let r = checked_rsmp(file, &text)?;
            let report = discrepancy_report(&r)?;
            let mut lines = vec![format!("S: {}", multiset(&report.s_spectrum.eigenvalues))];
            let r_eigs = report.transfer_eigenvalues();
            lines.push(if r_eigs.is_empty() {
                "R: no finite eigenvalues".into()
            } else {
                format!(
                    "R: {{{}}}",
                    r_eigs
                        .iter()
                        .map(|&z| complex(z))
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            });
            for t in &report.transfer_tests {
                lines.push(format!(
                    "  R at {}: {}",
                    complex(t.point),
                    verdict_name(t.verdict)
                ));
            }
            lines.push(format!("poles: {}", multiset(&report.poles.eigenvalues)));
            lines.push(format!(
                "cleared: {}",
                multiset(&report.cleared_spectrum.eigenvalues)
            ));
            let s_not_r: Vec<String> = report.s_not_r.iter().map(|&z| complex(z)).collect();
            lines.push(format!("S not R: {{{}}}", s_not_r.join(", ")));
            lines.push(format!(
                "cleared not S: {}",
                multiset(&report.cleared_not_s)
            ));
            for line in lines {
                writeln!(stdout, "{line}").map_err(write_error)?;
            }
            if let Some(path) = out {
                let mut sink = open_output(Some(path))?;
                write_record(
                    &mut sink,
                    &DiscrepancyRecord::new(&file.display().to_string(), &report),
                )
                .map_err(write_error)?;
                sink.flush().map_err(write_error)?;
            }
        }
    }
    Ok(true)
}

pub fn info(file: &Path) -> Result<bool, CliError> {
    let mut lines = Vec::new();
    match read_document(file)? {
        Document::Pencil(p) => {
            let l = p.to_pencil()?;
            let (rows, cols) = l.dims();
            lines.push("kind: pencil".to_owned());
            lines.push(format!("size: {rows}x{cols}"));
            lines.push(format!("row blocks: {:?}", l.row_sizes()));
            lines.push(format!("col blocks: {:?}", l.col_sizes()));
        }
        Document::Rsmp(text) => {
            let r = checked_rsmp(file, &text)?;
            let d = r.degree();
            lines.push("kind: rsmp".to_owned());
            lines.push(format!("n, p, m: {}, {}, {}", r.n(), r.p(), r.m()));
            lines.push(format!(
                "degrees: d_A = {}, d_D = {}, d = {d}",
                r.deg_a(),
                r.deg_d()
            ));
            lines.push(format!("A regular: {}", r.a_is_regular()));
            lines.push(format!("square: {}", r.is_square()));
            lines.push(format!("decision sequences: {}", 1usize << (d - 1)));
            let first = companion_first(&r).dims();
            let second = companion_second(&r).dims();
            lines.push(format!("first companion: {}x{}", first.0, first.1));
            lines.push(format!("second companion: {}x{}", second.0, second.1));
        }
    }
    let mut stdout = std::io::stdout().lock();
    for line in lines {
        writeln!(stdout, "{line}").map_err(write_error)?;
    }
    Ok(true)
}

pub struct FuzzOptions {
    pub max_size: usize,
    pub max_degree: usize,
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
}

#[derive(Default)]
struct Tally {
    instances: usize,
    failures: usize,
    worst: f64,
}

/// Sweeps every shape up to the given bounds and every decision sequence on
/// integer instances, writing one record per run to `out` (if given) and a
/// summary table to standard output.
pub fn fuzz(opts: &FuzzOptions, out: Option<PathBuf>) -> Result<bool, CliError> {
    check_tolerance(opts.tol)?;
    if opts.max_size == 0 || !(1..=MAX_ALL_DEGREE).contains(&opts.max_degree) {
        return Err(CliError::Usage(format!(
            "bounds must satisfy MAX_SIZE >= 1 and 1 <= MAX_DEGREE <= {MAX_ALL_DEGREE}"
        )));
    }
    let mut sink = out.as_deref().map(|p| open_output(Some(p))).transpose()?;
    let mut g = random::rng(opts.seed);
    let mut tallies: [Tally; 3] = Default::default();
    let sizes = 1..=opts.max_size;
    for n in sizes.clone() {
        for p in sizes.clone() {
            for m in sizes.clone() {
                for deg_a in 1..=opts.max_degree {
                    for deg_d in 1..=opts.max_degree {
                        let shape = Shape::new(n, p, m, deg_a, deg_d);
                        let r = random_rsmp(&mut g, shape, Entries::Integer(3));
                        let points = random::annulus_points(
                            &mut random::rng(g.random()),
                            opts.trials.max(1),
                        );
                        let tally = &mut tallies[match deg_a.cmp(&deg_d) {
                            Ordering::Less => 0,
                            Ordering::Equal => 1,
                            Ordering::Greater => 2,
                        }];
                        for s in SigmaSeq::all(shape.degree()) {
                            let (l, report) = verify_instance(&r, &s, &points, opts.tol)?;
                            tally.instances += 1;
                            tally.failures += usize::from(!report.passed);
                            tally.worst = tally.worst.max(report.max_residual);
                            if let Some(sink) = sink.as_mut() {
                                let instance =
                                    format!("fuzz:{}:{n}x{p}x{m}:{deg_a}:{deg_d}", opts.seed);
                                write_record(
                                    sink,
                                    &RunReport::new(&instance, &r, &s, l.dims(), &report),
                                )
                                .map_err(write_error)?;
                            }
                        }
                    }
                }
            }
        }
    }
    if let Some(sink) = sink.as_mut() {
        sink.flush().map_err(write_error)?;
    }
    let mut stdout = std::io::stdout().lock();
    let mut table = vec![format!(
        "{:<10} {:>9} {:>9} {:>14}",
        "degrees", "runs", "failures", "max residual"
    )];
    for (label, t) in ["d_A < d_D", "d_A = d_D", "d_A > d_D"].iter().zip(&tallies) {
        table.push(format!(
            "{label:<10} {:>9} {:>9} {:>14.3e}",
            t.instances, t.failures, t.worst
        ));
    }
    for line in table {
        writeln!(stdout, "{line}").map_err(write_error)?;
    }
    Ok(tallies.iter().all(|t| t.failures == 0))
}
