//! Determinants, eigenvalues, ranks and the pole/eigenvalue comparison
//! between `S(λ)`, its transfer function and a cleared-denominator form.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fiedler::Pencil;
use crate::matrix::{ComplexMatrix, C64};
use crate::poly::{interpolate_on_circle, MatrixPolynomial, ScalarPolynomial};
use crate::random;
use crate::roots::{aberth, cluster, CLUSTER_RADIUS};
use crate::rsmp::Rsmp;

/// Largest `size · degree` accepted by [`det_poly`].
pub const MAX_DET_DEGREE: usize = 64;

/// Relative holdout mismatch accepted by [`det_poly`].
pub const HOLDOUT_TOL: f64 = 1e-8;

/// Coefficients below this fraction of the largest are dropped from `det P`.
pub const CHOP_TOL: f64 = 1e-10;

/// Relative rank threshold used for normal ranks.
pub const NORMAL_RANK_TOL: f64 = 1e-10;

/// Relative rank threshold used when testing computed eigenvalues.
pub const EIGEN_RANK_TOL: f64 = 1e-8;

const DET_SEED: u64 = 0xde7_5eed;

/// Coefficients of `det P(λ)`, interpolated from determinants on the unit
/// circle and certified at a holdout point (up to three attempts).
pub fn det_poly(p: &MatrixPolynomial) -> Result<ScalarPolynomial> {
    if p.rows() != p.cols() {
        return Err(Error::NotSquare {
            rows: p.rows(),
            cols: p.cols(),
        });
    }
    let size = p.rows();
    let bound = size * p.effective_degree();
    if bound > MAX_DET_DEGREE {
        return Err(Error::TooLarge(bound));
    }
    let det_at = |z: C64| -> Result<ComplexMatrix> {
        let d = p.eval(z).det()?;
        Ok(ComplexMatrix::from_fn(1, 1, |_, _| d))
    };
    let mut rng = random::rng(DET_SEED);
    let mut best = f64::INFINITY;
    for _ in 0..3 {
        let rotation = rng.random::<f64>() * core::f64::consts::TAU;
        let interp = interpolate_on_circle(1, 1, bound, 1.0, rotation, det_at)?;
        let z = random::annulus_point(&mut rng, 0.5, 2.0);
        let residual = interp.relative_residual(z, &det_at(z)?);
        if residual <= HOLDOUT_TOL {
            let coeffs = interp.coeffs().iter().map(|c| c[(0, 0)]).collect();
            return Ok(ScalarPolynomial::new(coeffs)?.chopped(CHOP_TOL));
        }
        best = best.min(residual);
    }
    Err(Error::HoldoutResidual { residual: best })
}

/// Roots of a scalar polynomial (effective degree at least one).
pub fn poly_roots(p: &ScalarPolynomial) -> Result<Vec<C64>> {
    aberth(p)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigenvalue {
    pub value: C64,
    pub multiplicity: usize,
}

/// Finite eigenvalues of a square matrix function, clustered.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Eigenvalue>,
    pub normal_rank: usize,
    /// `size · degree`, the most finite eigenvalues there can be.
    pub degree_bound: usize,
}

impl Spectrum {
    /// Eigenvalues repeated by multiplicity.
    pub fn values(&self) -> Vec<C64> {
        self.eigenvalues
            .iter()
            .flat_map(|e| core::iter::repeat_n(e.value, e.multiplicity))
            .collect()
    }

    /// Number of finite eigenvalues counted with multiplicity.
    pub fn count(&self) -> usize {
        self.eigenvalues.iter().map(|e| e.multiplicity).sum()
    }

    /// Multiplicity of the cluster nearest to `z` within `radius`, or 0.
    pub fn multiplicity_near(&self, z: C64, radius: f64) -> usize {
        self.eigenvalues
            .iter()
            .filter(|e| (e.value - z).norm() <= radius)
            .map(|e| e.multiplicity)
            .sum()
    }
}

/// Newton steps on `det P` using `(det P)'/det P = tr(P⁻¹ P')`. The polished
/// value is kept only if it stays close to the starting point.
fn polish(p: &MatrixPolynomial, dp: &MatrixPolynomial, z0: C64) -> C64 {
    let mut z = z0;
    for _ in 0..5 {
        let Ok(lu) = p.eval(z).lu() else { return z0 };
        let Ok(x) = lu.solve(&dp.eval(z)) else {
            return z;
        };
        let trace: C64 = (0..x.rows()).map(|i| x[(i, i)]).sum();
        let step = trace.inv();
        if !step.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= 4.0 * f64::EPSILON * z.norm().max(1.0) {
            break;
        }
    }
    if (z - z0).norm() <= 1e-4 * z0.norm().max(1.0) {
        z
    } else {
        z0
    }
}

/// Finite eigenvalues of a regular square matrix polynomial: the roots of
/// `det P`, polished by Newton's method where simple, then clustered.
pub fn eigenvalues_square(p: &MatrixPolynomial) -> Result<Spectrum> {
    if p.rows() != p.cols() {
        return Err(Error::NotSquare {
            rows: p.rows(),
            cols: p.cols(),
        });
    }
    if !p.is_regular(10, DET_SEED)? {
        return Err(Error::SingularInput);
    }
    let degree_bound = p.rows() * p.effective_degree();
    let det = det_poly(p)?;
    if det.effective_degree() == 0 {
        return Ok(Spectrum {
            eigenvalues: Vec::new(),
            normal_rank: p.rows(),
            degree_bound,
        });
    }
    let roots = poly_roots(&det)?;
    let groups = cluster(&roots, CLUSTER_RADIUS);
    let dp = p.derivative();
    let eigenvalues = groups
        .into_iter()
        .map(|(value, multiplicity)| {
            let value = if multiplicity == 1 {
                polish(p, &dp, value)
            } else {
                value
            };
            Eigenvalue {
                value,
                multiplicity,
            }
        })
        .collect();
    Ok(Spectrum {
        eigenvalues,
        normal_rank: p.rows(),
        degree_bound,
    })
}

/// [`eigenvalues_square`] for a square pencil.
pub fn eigenvalues_pencil(l: &Pencil) -> Result<Spectrum> {
    eigenvalues_square(&l.to_polynomial())
}

/// Numerical rank through column-pivoted QR, relative to the largest pivot.
pub fn rank_at(m: &ComplexMatrix, tol: f64) -> usize {
    m.rank(tol)
}

/// Anything that can be evaluated to a matrix at a complex point.
pub trait MatrixFunction {
    fn dims(&self) -> (usize, usize);
    fn eval_at(&self, z: C64) -> Result<ComplexMatrix>;
}

impl MatrixFunction for MatrixPolynomial {
    fn dims(&self) -> (usize, usize) {
        MatrixPolynomial::dims(self)
    }
    fn eval_at(&self, z: C64) -> Result<ComplexMatrix> {
        Ok(self.eval(z))
    }
}

impl MatrixFunction for Pencil {
    fn dims(&self) -> (usize, usize) {
        Pencil::dims(self)
    }
    fn eval_at(&self, z: C64) -> Result<ComplexMatrix> {
        Ok(self.eval(z))
    }
}

/// `R(λ) = D(λ) + C A(λ)⁻¹ B` as a matrix function.
#[derive(Clone, Copy, Debug)]
pub struct TransferFunction<'a>(pub &'a Rsmp);

impl MatrixFunction for TransferFunction<'_> {
    fn dims(&self) -> (usize, usize) {
        (self.0.p(), self.0.m())
    }
    fn eval_at(&self, z: C64) -> Result<ComplexMatrix> {
        self.0.transfer_eval(z)
    }
}

/// Largest rank of `F` over `trials` random points of `0.5 ≤ |z| ≤ 2`.
/// Points where `F` has a pole are skipped; if every point is a pole the
/// result is [`Error::AllSamplesSingular`].
pub fn normal_rank<F: MatrixFunction + ?Sized>(f: &F, trials: usize, seed: u64) -> Result<usize> {
    let mut rng = random::rng(seed);
    let mut best: Option<usize> = None;
    for _ in 0..trials.max(1) {
        let z = random::annulus_point(&mut rng, 0.5, 2.0);
        match f.eval_at(z) {
            Ok(m) => best = Some(best.unwrap_or(0).max(rank_at(&m, NORMAL_RANK_TOL))),
            Err(Error::Pole { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    best.ok_or(Error::AllSamplesSingular)
}

/// Whether the rank of `F(z0)` falls below the normal rank `nr`. A pole of
/// `F` at `z0` is returned as [`Error::Pole`].
pub fn is_eigenvalue<F: MatrixFunction + ?Sized>(
    f: &F,
    z0: C64,
    nr: usize,
    tol: f64,
) -> Result<bool> {
    Ok(rank_at(&f.eval_at(z0)?, tol) < nr)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransferVerdict {
    Eigenvalue,
    NotEigenvalue,
    Pole,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CandidateTest {
    pub point: C64,
    pub verdict: TransferVerdict,
}

/// Compares the eigenvalues of `S(λ)`, of the transfer function `R(λ)`, and
/// of `det A(λ)·R(λ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscrepancyReport {
    pub s_spectrum: Spectrum,
    /// Eigenvalues of `A(λ)`, i.e. the pole candidates of `R(λ)`.
    pub poles: Spectrum,
    pub transfer_normal_rank: usize,
    /// `R(λ)` tested at every eigenvalue of `S(λ)` and every pole candidate.
    pub transfer_tests: Vec<CandidateTest>,
    pub cleared_spectrum: Spectrum,
    /// Eigenvalues of `S(λ)` at which `R(λ)` has no eigenvalue.
    pub s_not_r: Vec<C64>,
    /// Eigenvalues of the cleared form beyond those of `S(λ)`, with the excess multiplicity.
    pub cleared_not_s: Vec<Eigenvalue>,
}

impl DiscrepancyReport {
    /// Finite eigenvalues of `R(λ)` among the candidates.
    pub fn transfer_eigenvalues(&self) -> Vec<C64> {
        self.transfer_tests
            .iter()
            .filter(|t| t.verdict == TransferVerdict::Eigenvalue)
            .map(|t| t.point)
            .collect()
    }
}

fn near(a: C64, b: C64) -> bool {
    (a - b).norm() <= CLUSTER_RADIUS * a.norm().max(1.0)
}

/// Builds the [`DiscrepancyReport`] of a square RSMP with regular `A(λ)`.
pub fn discrepancy_report(r: &Rsmp) -> Result<DiscrepancyReport> {
    if !r.is_square() {
        return Err(Error::NotSquare {
            rows: r.n() + r.p(),
            cols: r.n() + r.m(),
        });
    }
    if !r.a_is_regular() {
        return Err(Error::IrregularA);
    }
    let s_spectrum = eigenvalues_square(&r.assemble_s())?;
    let poles = eigenvalues_square(r.a())?;
    let transfer = TransferFunction(r);
    let transfer_normal_rank = normal_rank(&transfer, 20, DET_SEED)?;

    let mut candidates: Vec<C64> = Vec::new();
    for z in s_spectrum
        .eigenvalues
        .iter()
        .chain(&poles.eigenvalues)
        .map(|e| e.value)
    {
        if !candidates.iter().any(|&c| near(c, z)) {
            candidates.push(z);
        }
    }
    let mut transfer_tests = Vec::with_capacity(candidates.len());
    for z in candidates {
        let verdict = if poles.eigenvalues.iter().any(|e| near(e.value, z)) {
            TransferVerdict::Pole
        } else {
            match is_eigenvalue(&transfer, z, transfer_normal_rank, EIGEN_RANK_TOL) {
                Ok(true) => TransferVerdict::Eigenvalue,
                Ok(false) => TransferVerdict::NotEigenvalue,
                Err(Error::Pole { .. }) => TransferVerdict::Pole,
                Err(e) => return Err(e),
            }
        };
        transfer_tests.push(CandidateTest { point: z, verdict });
    }

    let det_a = det_poly(r.a())?;
    let cleared = r.clear_denominator(&det_a)?;
    let cleared_spectrum = eigenvalues_square(&cleared)?;

    let r_eigs: Vec<C64> = transfer_tests
        .iter()
        .filter(|t| t.verdict == TransferVerdict::Eigenvalue)
        .map(|t| t.point)
        .collect();
    let s_not_r = s_spectrum
        .eigenvalues
        .iter()
        .map(|e| e.value)
        .filter(|&z| !r_eigs.iter().any(|&w| near(w, z)))
        .collect();
    let cleared_not_s = cleared_spectrum
        .eigenvalues
        .iter()
        .filter_map(|e| {
            let in_s: usize = s_spectrum
                .eigenvalues
                .iter()
                .filter(|f| near(f.value, e.value))
                .map(|f| f.multiplicity)
                .sum();
            (e.multiplicity > in_s).then(|| Eigenvalue {
                value: e.value,
                multiplicity: e.multiplicity - in_s,
            })
        })
        .collect();
    Ok(DiscrepancyReport {
        s_spectrum,
        poles,
        transfer_normal_rank,
        transfer_tests,
        cleared_spectrum,
        s_not_r,
        cleared_not_s,
    })
}

/// Minimal total distance matching between two multisets of equal size,
/// returned as the largest matched relative distance
/// `|a − b| / max(1, |a|)`. `None` when the sizes differ.
pub fn matched_distance(a: &[C64], b: &[C64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let k = a.len();
    if k == 0 {
        return Some(0.0);
    }
    let cost: Vec<Vec<f64>> = a
        .iter()
        .map(|x| {
            b.iter()
                .map(|y| (x - y).norm() / x.norm().max(1.0))
                .collect()
        })
        .collect();
    let assignment = hungarian(&cost);
    Some((0..k).map(|i| cost[i][assignment[i]]).fold(0.0, f64::max))
}

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method);
/// returns the column assigned to each row.
fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        assignment[p[j] - 1] = j - 1;
    }
    assignment
}
