//! Acceptance harness: prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;

use fiedler_core::equivalence::{build_h_sequence, build_n_sequence, verify_instance};
use fiedler_core::fiedler::{
    build_w_sequence, check_block_structure, companion_first, companion_second, expected_size,
    fiedler_pencil_rect, square_fiedler_matrix, square_fiedler_pencil,
};
use fiedler_core::random::{self, random_regular_rsmp, random_rsmp, Entries, Shape};
use fiedler_core::rsmp::example_intro;
use fiedler_core::spectral::{
    discrepancy_report, eigenvalues_pencil, eigenvalues_square, is_eigenvalue, matched_distance,
    normal_rank, TransferFunction, TransferVerdict,
};
use fiedler_core::{Error, SigmaSeq, C64};

use common::{grid_instances, sample_points};

const GRID_SEED: u64 = 2024;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn linearization_suite() -> Outcome {
    let (mut count, mut failures, mut worst) = (0usize, Vec::new(), 0.0f64);
    for (r, s, mut g) in grid_instances(GRID_SEED) {
        count += 1;
        let points = sample_points(&mut g, 20);
        match verify_instance(&r, &s, &points, 1e-8) {
            Ok((_, report)) => {
                worst = worst
                    .max(report.max_residual)
                    .max(report.corollary_residual);
                if !report.passed {
                    failures.push(format!("{:?} {s}", r.shape()));
                }
            }
            Err(e) => failures.push(format!("{:?} {s}: {e}", r.shape())),
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{count} instances, worst residual {worst:.2e}, {} failures {:?}",
            failures.len(),
            first(&failures)
        ),
    )
}

fn size_suite() -> Outcome {
    let (mut checked, mut failures) = (0usize, Vec::new());
    for (r, s, _) in grid_instances(GRID_SEED) {
        if r.degree() < 2 {
            continue;
        }
        let ws = build_w_sequence(&r, &s).expect("grid instance");
        let ns = build_n_sequence(&r, &s).expect("grid instance");
        let hs = build_h_sequence(&r, &s).expect("grid instance");
        for i in 0..ws.len() {
            let (rows, cols) = expected_size(r.shape(), &s, i).expect("index in range");
            checked += 3;
            if ws[i].data().dims() != (rows, cols)
                || ns[i].data().dims() != (rows, rows)
                || hs[i].data().dims() != (cols, cols)
            {
                failures.push(format!("{:?} {s} step {i}", r.shape()));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{checked} dimension checks, {} failures {:?}",
            failures.len(),
            first(&failures)
        ),
    )
}

fn structure_suite() -> Outcome {
    let (mut checked, mut failures) = (0usize, Vec::new());
    for (r, s, _) in grid_instances(GRID_SEED) {
        if r.degree() < 2 {
            continue;
        }
        for (i, w) in build_w_sequence(&r, &s)
            .expect("grid instance")
            .iter()
            .enumerate()
        {
            let report = check_block_structure(w, i, &r, &s);
            checked += report.checks.len();
            if let Some(f) = report.failures().next() {
                failures.push(format!("{:?} {s} step {i}: {:?}", r.shape(), f.claim));
            };
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{checked} block predicates, {} failures {:?}",
            failures.len(),
            first(&failures)
        ),
    )
}

fn unimodularity_suite() -> Outcome {
    let (mut checked, mut worst, mut failures) = (0usize, 0.0f64, Vec::new());
    for (r, s, mut g) in grid_instances(GRID_SEED) {
        if r.degree() < 2 {
            continue;
        }
        let points = sample_points(&mut g, 10);
        let ns = build_n_sequence(&r, &s).expect("grid instance");
        let hs = build_h_sequence(&r, &s).expect("grid instance");
        for w in ns.iter().chain(&hs) {
            checked += 1;
            let dets: Vec<C64> = points
                .iter()
                .map(|&z| w.data().eval(z).det().expect("square witness"))
                .collect();
            let dev = dets
                .iter()
                .map(|d| (d.norm() - 1.0).abs().max((d - dets[0]).norm()))
                .fold(0.0, f64::max);
            worst = worst.max(dev);
            if dev > 1e-8 {
                failures.push(format!("{:?} {s}", r.shape()));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{checked} witnesses, worst deviation {worst:.2e}, {} failures {:?}",
            failures.len(),
            first(&failures)
        ),
    )
}

fn square_suite() -> Outcome {
    let (mut pencils, mut pairs, mut failures) = (0usize, 0usize, Vec::new());
    for (r, s, _) in grid_instances(GRID_SEED) {
        if !r.is_square() {
            continue;
        }
        pencils += 1;
        let rect = fiedler_pencil_rect(&r, &s).expect("grid instance");
        let product = square_fiedler_pencil(&r, &s.canonical_bijection()).expect("square instance");
        if rect.lead() != product.lead() || rect.tail() != product.tail() {
            failures.push(format!(
                "{:?} {s}: recursion differs from product",
                r.shape()
            ));
        }
        // commutation only depends on the instance, so check it once per instance
        if s != SigmaSeq::all_consecutions(r.degree()) {
            continue;
        }
        let d = r.degree();
        let factors: Vec<_> = (0..=d)
            .map(|i| square_fiedler_matrix(&r, i).expect("index").into_data())
            .collect();
        for i in 0..d {
            for j in i + 2..d {
                pairs += 1;
                if factors[i].matmul(&factors[j]) != factors[j].matmul(&factors[i]) {
                    failures.push(format!("{:?}: M{i} M{j} do not commute", r.shape()));
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{pencils} pencils, {pairs} commuting pairs, {} failures {:?}",
            failures.len(),
            first(&failures)
        ),
    )
}

fn example_suite() -> Outcome {
    let start = Instant::now();
    let r = example_intro();
    let mut problems = Vec::new();
    let s = eigenvalues_square(&r.assemble_s()).expect("regular");
    if s.count() != 1 || (s.eigenvalues[0].value - C64::new(1.0, 0.0)).norm() > 1e-10 {
        problems.push(format!("S eigenvalues {:?}", s.values()));
    }
    let report = discrepancy_report(&r).expect("square with regular A");
    let transfer = TransferFunction(&r);
    let nr = normal_rank(&transfer, 20, 7).expect("R has regular points");
    for t in &report.transfer_tests {
        match is_eigenvalue(&transfer, t.point, nr, 1e-8) {
            Ok(false) | Err(Error::Pole { .. }) => {}
            other => problems.push(format!("R at {}: {other:?}", t.point)),
        }
    }
    if !report.transfer_eigenvalues().is_empty()
        || !report
            .transfer_tests
            .iter()
            .any(|t| t.verdict == TransferVerdict::Pole && (t.point - 1.0).norm() < 1e-10)
    {
        problems.push("R: expected a pole at 1 and no eigenvalues".into());
    }
    let cleared = &report.cleared_spectrum;
    if cleared.eigenvalues.len() != 1
        || cleared.eigenvalues[0].multiplicity != 2
        || (cleared.eigenvalues[0].value - 1.0).norm() > 1e-6
    {
        problems.push(format!("cleared eigenvalues {:?}", cleared.eigenvalues));
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 1.0 {
        problems.push(format!("took {elapsed:?}"));
    }
    outcome(
        problems.is_empty(),
        format!("S {{1}}, R pole at 1, cleared {{1 x2}} in {elapsed:.2?}; {problems:?}"),
    )
}

fn spectral_suite() -> Outcome {
    let mut g = random::rng(77);
    let (mut worst, mut failures) = (0.0f64, Vec::new());
    for _ in 0..50 {
        let k = g.random_range(1..=3);
        let shape = Shape::new(
            g.random_range(1..=3),
            k,
            k,
            g.random_range(1..=4),
            g.random_range(1..=4),
        );
        let r = random_regular_rsmp(&mut g, shape, Entries::Real);
        let mut spectra = Vec::new();
        let mut collect = |name: String, result: fiedler_core::Result<_>| match result {
            Ok(spectrum) => {
                spectra.push((name, fiedler_core::spectral::Spectrum::values(&spectrum)))
            }
            Err(e) => failures.push(format!("{shape:?} {name}: {e}")),
        };
        collect("S".into(), eigenvalues_square(&r.assemble_s()));
        collect(
            "companion_first".into(),
            eigenvalues_pencil(&companion_first(&r)),
        );
        collect(
            "companion_second".into(),
            eigenvalues_pencil(&companion_second(&r)),
        );
        let all: Vec<SigmaSeq> = SigmaSeq::all(shape.degree()).collect();
        for _ in 0..3 {
            let s = &all[g.random_range(0..all.len())];
            collect(
                format!("fiedler {s}"),
                eigenvalues_pencil(&fiedler_pencil_rect(&r, s).expect("valid sigma")),
            );
        }
        for a in 0..spectra.len() {
            for b in a + 1..spectra.len() {
                match matched_distance(&spectra[a].1, &spectra[b].1) {
                    Some(dist) => {
                        worst = worst.max(dist);
                        if dist > 1e-6 {
                            failures.push(format!(
                                "{shape:?} {} vs {}: {dist:.2e}",
                                spectra[a].0, spectra[b].0
                            ));
                        }
                    }
                    None => failures.push(format!(
                        "{shape:?} {} has {} eigenvalues, {} has {}",
                        spectra[a].0,
                        spectra[a].1.len(),
                        spectra[b].0,
                        spectra[b].1.len()
                    )),
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "50 instances, worst matched distance {worst:.2e}, {} failures {:?}",
            failures.len(),
            first(&failures)
        ),
    )
}

fn decisions_of(sigma: &[usize]) -> SigmaSeq {
    SigmaSeq::from_bijection(sigma).expect("a permutation of 1..=d")
}

fn bijection_suite() -> Outcome {
    let mut g = random::rng(88);
    let (mut distinct, mut failures) = (0usize, Vec::new());
    for _ in 0..100 {
        let k = g.random_range(1..=3);
        let shape = Shape::new(
            g.random_range(1..=3),
            k,
            k,
            g.random_range(1..=5),
            g.random_range(1..=5),
        );
        let r = random_rsmp(&mut g, shape, Entries::Real);
        let d = shape.degree();
        let mut first_sigma: Vec<usize> = (1..=d).collect();
        first_sigma.shuffle(&mut g);
        let target = decisions_of(&first_sigma);
        // some decision strings have a single bijection, so equal pairs are allowed
        let mut second = first_sigma.clone();
        loop {
            second.shuffle(&mut g);
            if decisions_of(&second) == target {
                break;
            }
        }
        distinct += usize::from(second != first_sigma);
        let a = square_fiedler_pencil(&r, &first_sigma).expect("square instance");
        let b = square_fiedler_pencil(&r, &second).expect("square instance");
        if a != b {
            failures.push(format!("{first_sigma:?} vs {second:?}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "100 pairs ({distinct} distinct), {} failures {:?}",
            failures.len(),
            first(&failures)
        ),
    )
}

fn first(items: &[String]) -> Option<&String> {
    items.first()
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("linearization theorem over the grid", linearization_suite),
        ("closed-form sizes of W, N, H", size_suite),
        ("block structure of every W", structure_suite),
        ("unimodular witnesses", unimodularity_suite),
        (
            "square case: recursion equals product, factors commute",
            square_suite,
        ),
        ("introductory example spectra", example_suite),
        ("spectral cross-oracle", spectral_suite),
        ("decision strings determine the pencil", bijection_suite),
    ];
    let mut all_passed = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        all_passed &= result.passed;
        let verdict = if result.passed { "PASS" } else { "FAIL" };
        println!(
            "{verdict} {}: {name} ({:.1?}) {}",
            k + 1,
            start.elapsed(),
            result.detail
        );
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
