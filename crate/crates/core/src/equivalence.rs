//! Unimodular witnesses `U_σ(λ)`, `V_σ(λ)` reducing a Fiedler pencil to
//! `S(λ)` padded with identities, and sample-based verification.
//!
//! Each witness is block diagonal with an `A` part and a `D` part, both
//! starting as identities. Every step of the pencil recursion adds one block
//! row and column to the part that stepped (`P` below is the Horner shift of
//! that part's polynomial taken at the step):
//!
//! | decision    | left witness `N`                      | right witness `H`                     |
//! |-------------|---------------------------------------|---------------------------------------|
//! | consecution | `[[I, 0], [λ·N(:,0), N]]`             | `[[0, H(0,:)], [−I, P·H(0,:)], [0, H(1:,:)]]` |
//! | inversion   | `[[0, −I, 0], [N(:,0), N(:,0)·P, N(:,1:)]]` | `[[I, λ·H(0,:)], [0, H]]`       |
//!
//! With `L(λ) = λ·lead − 𝕄_σ` this gives
//! `U·L·V = [[I, 0, 0, 0], [0, A, 0, −B], [0, 0, I, 0], [0, C, 0, D]]`.

use alloc::vec;
use alloc::vec::Vec;

use crate::block::{BlockMatrix, PolyBlockMatrix};
use crate::error::{Error, Result};
use crate::fiedler::{self, a_steps, d_steps, Pencil};
use crate::matrix::{ComplexMatrix, C64};
use crate::poly::MatrixPolynomial;
use crate::rsmp::Rsmp;
use crate::sigma::{Decision, SigmaSeq};

fn identity_part(size: usize) -> PolyBlockMatrix {
    PolyBlockMatrix::new(
        MatrixPolynomial::constant(ComplexMatrix::identity(size)),
        vec![size],
        vec![size],
    )
    .expect("square identity")
}

fn const_poly(m: ComplexMatrix) -> MatrixPolynomial {
    MatrixPolynomial::constant(m)
}

fn n_step(
    nm: &mut PolyBlockMatrix,
    decision: Decision,
    row_unit: usize,
    col_unit: usize,
    shift: &MatrixPolynomial,
) {
    match decision {
        Decision::Consecution => {
            nm.insert_block_row(0, row_unit).expect("in range");
            nm.insert_block_col(0, row_unit).expect("in range");
            nm.set_block(0, 0, &const_poly(ComplexMatrix::identity(row_unit)))
                .expect("shape");
            for j in 1..nm.block_rows() {
                let below = nm.block(j, 1).expect("in range").shift_up();
                nm.set_block(j, 0, &below).expect("shape");
            }
        }
        Decision::Inversion => {
            nm.insert_block_row(0, col_unit).expect("in range");
            nm.insert_block_col(1, col_unit).expect("in range");
            nm.set_block(0, 1, &const_poly(-&ComplexMatrix::identity(col_unit)))
                .expect("shape");
            for j in 1..nm.block_rows() {
                let product = nm.block(j, 0).expect("in range").mul(shift);
                nm.set_block(j, 1, &product).expect("shape");
            }
        }
    }
}

fn h_step(
    hm: &mut PolyBlockMatrix,
    decision: Decision,
    row_unit: usize,
    col_unit: usize,
    shift: &MatrixPolynomial,
) {
    match decision {
        Decision::Consecution => {
            hm.insert_block_col(0, row_unit).expect("in range");
            hm.insert_block_row(1, row_unit).expect("in range");
            hm.set_block(1, 0, &const_poly(-&ComplexMatrix::identity(row_unit)))
                .expect("shape");
            for j in 1..hm.block_cols() {
                let product = shift.mul(&hm.block(0, j).expect("in range"));
                hm.set_block(1, j, &product).expect("shape");
            }
        }
        Decision::Inversion => {
            hm.insert_block_row(0, col_unit).expect("in range");
            hm.insert_block_col(0, col_unit).expect("in range");
            hm.set_block(0, 0, &const_poly(ComplexMatrix::identity(col_unit)))
                .expect("shape");
            for j in 1..hm.block_cols() {
                let right = hm.block(1, j).expect("in range").shift_up();
                hm.set_block(0, j, &right).expect("shape");
            }
        }
    }
}

/// Block diagonal of two partitioned polynomials, keeping both partitions.
fn block_diag(a: &PolyBlockMatrix, b: &PolyBlockMatrix) -> PolyBlockMatrix {
    let (ar, ac) = a.data().dims();
    let (br, bc) = b.data().dims();
    let mut data = MatrixPolynomial::zeros(ar + br, ac + bc, 0);
    data.set_submatrix(0, 0, a.data());
    data.set_submatrix(ar, ac, b.data());
    let rows = a.row_sizes().iter().chain(b.row_sizes()).copied().collect();
    let cols = a.col_sizes().iter().chain(b.col_sizes()).copied().collect();
    PolyBlockMatrix::new(data, rows, cols).expect("sizes add up")
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

fn build_sequence(r: &Rsmp, s: &SigmaSeq, side: Side) -> Result<Vec<PolyBlockMatrix>> {
    let steps = fiedler::plan(r, s)?;
    if steps.is_empty() {
        return Err(Error::DegreeTooSmall(r.degree()));
    }
    let (n, p, m) = (r.n(), r.p(), r.m());
    let (mut a_part, mut d_part) = match side {
        Side::Left => (identity_part(n), identity_part(p)),
        Side::Right => (identity_part(n), identity_part(m)),
    };
    let step_fn = match side {
        Side::Left => n_step,
        Side::Right => h_step,
    };
    let mut out = Vec::with_capacity(steps.len());
    for step in steps {
        let i = step.index;
        if step.a {
            let shift = r.a().horner_shift(r.deg_a() - 1 - i)?;
            step_fn(&mut a_part, step.decision, n, n, &shift);
        }
        if step.d {
            let shift = r.d().horner_shift(r.deg_d() - 1 - i)?;
            step_fn(&mut d_part, step.decision, p, m, &shift);
        }
        out.push(block_diag(&a_part, &d_part));
    }
    Ok(out)
}

/// Left witnesses `ℕ_0, …, ℕ_{d−2}`, partitioned conformally with the rows of `𝕎_i`.
pub fn build_n_sequence(r: &Rsmp, s: &SigmaSeq) -> Result<Vec<PolyBlockMatrix>> {
    build_sequence(r, s, Side::Left)
}

/// Right witnesses `ℍ_0, …, ℍ_{d−2}`, partitioned conformally with the columns of `𝕎_i`.
pub fn build_h_sequence(r: &Rsmp, s: &SigmaSeq) -> Result<Vec<PolyBlockMatrix>> {
    build_sequence(r, s, Side::Right)
}

/// `(U_σ, V_σ) = (ℕ_{d−2}, ℍ_{d−2})`. Needs `d ≥ 2`.
pub fn unimodular_pair(r: &Rsmp, s: &SigmaSeq) -> Result<(PolyBlockMatrix, PolyBlockMatrix)> {
    let u = build_n_sequence(r, s)?.pop().expect("nonempty");
    let v = build_h_sequence(r, s)?.pop().expect("nonempty");
    Ok((u, v))
}

/// [`unimodular_pair`], with identities for `d = 1` where the pencil is `S(λ)` itself.
pub fn witness_pair(r: &Rsmp, s: &SigmaSeq) -> Result<(PolyBlockMatrix, PolyBlockMatrix)> {
    if r.degree() == 1 {
        fiedler::plan(r, s)?;
        let (n, p, m) = (r.n(), r.p(), r.m());
        return Ok((
            block_diag(&identity_part(n), &identity_part(p)),
            block_diag(&identity_part(n), &identity_part(m)),
        ));
    }
    unimodular_pair(r, s)
}

/// Identity padding `(α', α)` around `S(λ)` in the reduced form after step
/// `i` (`None` for the unreduced `S(λ)` itself, i.e. `d = 1`).
fn padding(r: &Rsmp, s: &SigmaSeq, i: Option<usize>) -> (usize, usize) {
    let Some(i) = i else { return (0, 0) };
    let alpha_a = r.n() * a_steps(r.deg_a(), i);
    let sd = d_steps(r.deg_d(), i);
    let decisions = &s.decisions()[..sd];
    let alpha_d = decisions
        .iter()
        .map(|x| match x {
            Decision::Consecution => r.p(),
            Decision::Inversion => r.m(),
        })
        .sum();
    (alpha_a, alpha_d)
}

/// `[[I_α', 0, 0, 0], [0, A, 0, −B], [0, 0, I_α, 0], [0, C, 0, D]]`.
fn target(r: &Rsmp, alpha_a: usize, alpha_d: usize) -> PolyBlockMatrix {
    let (n, p, m) = (r.n(), r.p(), r.m());
    let rows = vec![alpha_a, n, alpha_d, p];
    let cols = vec![alpha_a, n, alpha_d, m];
    let mut t = PolyBlockMatrix::zeros(rows, cols);
    t.set_block(0, 0, &const_poly(ComplexMatrix::identity(alpha_a)))
        .expect("shape");
    t.set_block(1, 1, r.a()).expect("shape");
    t.set_block(1, 3, &const_poly(-r.b())).expect("shape");
    t.set_block(2, 2, &const_poly(ComplexMatrix::identity(alpha_d)))
        .expect("shape");
    t.set_block(3, 1, &const_poly(r.c().clone()))
        .expect("shape");
    t.set_block(3, 3, r.d()).expect("shape");
    t
}

/// The reduced form `U·L·V` is expected to equal.
pub fn theorem_target(r: &Rsmp, s: &SigmaSeq) -> Result<PolyBlockMatrix> {
    fiedler::plan(r, s)?;
    let d = r.degree();
    let (alpha_a, alpha_d) = padding(r, s, (d >= 2).then(|| d - 2));
    Ok(target(r, alpha_a, alpha_d))
}

/// Row and column orders turning the four-block target into
/// `blkdiag(I_α', S(λ), I_α)`.
pub fn corollary_permutation(r: &Rsmp, alpha_a: usize, alpha_d: usize) -> (Vec<usize>, Vec<usize>) {
    let order = |tail: usize| -> Vec<usize> {
        let head = alpha_a + r.n();
        (0..head)
            .chain(head + alpha_d..head + alpha_d + tail)
            .chain(head..head + alpha_d)
            .collect()
    };
    (order(r.p()), order(r.m()))
}

/// `blkdiag(I_α', S(λ), I_α)`.
pub fn corollary_target(r: &Rsmp, alpha_a: usize, alpha_d: usize) -> MatrixPolynomial {
    let s = r.assemble_s();
    let (rows, cols) = s.dims();
    let mut out = MatrixPolynomial::zeros(alpha_a + rows + alpha_d, alpha_a + cols + alpha_d, 0);
    out.set_submatrix(0, 0, &const_poly(ComplexMatrix::identity(alpha_a)));
    out.set_submatrix(alpha_a, alpha_a, &s);
    out.set_submatrix(
        alpha_a + rows,
        alpha_a + cols,
        &const_poly(ComplexMatrix::identity(alpha_d)),
    );
    out
}

/// The intermediate polynomial `diag(λP, λI, …, λQ, λI, …) − 𝕎_i`, where `P`
/// and `Q` are the Horner shifts not yet absorbed by the recursion.
pub fn stage_polynomial(r: &Rsmp, w: &BlockMatrix, i: usize) -> MatrixPolynomial {
    let (sa, sd) = (a_steps(r.deg_a(), i), d_steps(r.deg_d(), i));
    let top_a = r
        .a()
        .horner_shift(r.deg_a() - 1 - sa)
        .expect("in range")
        .shift_up();
    let top_d = r
        .d()
        .horner_shift(r.deg_d() - 1 - sd)
        .expect("in range")
        .shift_up();
    let mut lead = PolyBlockMatrix::zeros(w.row_sizes().to_vec(), w.col_sizes().to_vec());
    lead.set_block(0, 0, &top_a).expect("shape");
    let kd = 1 + sa;
    lead.set_block(kd, kd, &top_d).expect("shape");
    for j in (1..kd).chain(kd + 1..w.block_rows()) {
        let size = w.row_sizes()[j];
        lead.set_block(j, j, &MatrixPolynomial::lambda_identity(size))
            .expect("shape");
    }
    lead.into_data().sub(&const_poly(w.data().clone()))
}

fn rel(diff: &ComplexMatrix, target: &ComplexMatrix) -> f64 {
    diff.norm_fro() / target.norm_fro().max(1.0)
}

/// Largest relative mismatch of `ℕ_i·(stage polynomial)·ℍ_i` against the
/// padded target at the given points, for every step `i`.
pub fn stage_residuals(r: &Rsmp, s: &SigmaSeq, points: &[C64]) -> Result<Vec<f64>> {
    let w = fiedler::build_w_sequence(r, s)?;
    let n = build_n_sequence(r, s)?;
    let h = build_h_sequence(r, s)?;
    let mut out = Vec::with_capacity(w.len());
    for (i, ((wi, ni), hi)) in w.iter().zip(&n).zip(&h).enumerate() {
        let li = stage_polynomial(r, wi, i);
        let (alpha_a, alpha_d) = padding(r, s, Some(i));
        let t = target(r, alpha_a, alpha_d);
        let mut worst: f64 = 0.0;
        for &z in points {
            let product = ni
                .data()
                .eval(z)
                .matmul(&li.eval(z))
                .matmul(&hi.data().eval(z));
            let tz = t.data().eval(z);
            worst = worst.max(rel(&(&product - &tz), &tz));
        }
        out.push(worst);
    }
    Ok(out)
}

/// Distance of sampled determinants from a constant of modulus one:
/// the larger of `max | |det| − 1 |` and `max |det(z_t) − det(z_0)|`.
pub fn unimodularity_deviation(p: &MatrixPolynomial, points: &[C64]) -> Result<f64> {
    let mut first: Option<C64> = None;
    let mut worst: f64 = 0.0;
    for &z in points {
        let det = p.eval(z).det()?;
        worst = worst.max((det.norm() - 1.0).abs());
        match first {
            None => first = Some(det),
            Some(d0) => worst = worst.max((det - d0).norm()),
        }
    }
    Ok(worst)
}

/// Outcome of a sampled check of `U·L·V` against the reduced form.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    /// Largest `‖U L V − T‖_F / max(1, ‖T‖_F)` over the sample points.
    pub max_residual: f64,
    /// The same for the permuted form `blkdiag(I, S, I)`.
    pub corollary_residual: f64,
    /// Per-block residuals on the `4 × 4` partition of `T`, row-major.
    pub block_residuals: Vec<f64>,
    pub u_deviation: f64,
    pub v_deviation: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Samples `U(z)·(z·lead − tail)·V(z)` at `points` and compares it with the
/// reduced form and its permuted block-diagonal version.
pub fn verify_theorem(
    r: &Rsmp,
    s: &SigmaSeq,
    pencil: &Pencil,
    u: &PolyBlockMatrix,
    v: &PolyBlockMatrix,
    points: &[C64],
    tol: f64,
) -> Result<EquivalenceReport> {
    let t = theorem_target(r, s)?;
    let (lr, lc) = pencil.dims();
    if u.data().dims() != (t.data().rows(), lr) || v.data().dims() != (lc, t.data().cols()) {
        return Err(Error::Dimension(
            "witnesses are not conformable with the pencil",
        ));
    }
    let (alpha_a, alpha_d) = (t.row_sizes()[0], t.row_sizes()[2]);
    let (row_perm, col_perm) = corollary_permutation(r, alpha_a, alpha_d);
    let corollary = corollary_target(r, alpha_a, alpha_d);
    let mut max_residual: f64 = 0.0;
    let mut corollary_residual: f64 = 0.0;
    let mut block_residuals = vec![0.0f64; 16];
    for &z in points {
        let product = u
            .data()
            .eval(z)
            .matmul(&pencil.eval(z))
            .matmul(&v.data().eval(z));
        let tz = t.data().eval(z);
        let diff = &product - &tz;
        let scale = tz.norm_fro().max(1.0);
        max_residual = max_residual.max(diff.norm_fro() / scale);
        let diff_blocks = BlockMatrix::new(diff, t.row_sizes().to_vec(), t.col_sizes().to_vec())?;
        for bi in 0..4 {
            for bj in 0..4 {
                let b = diff_blocks.block(bi, bj)?;
                let slot = &mut block_residuals[bi * 4 + bj];
                *slot = slot.max(b.norm_fro() / scale);
            }
        }
        let permuted = product.permuted(&row_perm, &col_perm);
        let cz = corollary.eval(z);
        corollary_residual = corollary_residual.max(rel(&(&permuted - &cz), &cz));
    }
    let u_deviation = unimodularity_deviation(u.data(), points)?;
    let v_deviation = unimodularity_deviation(v.data(), points)?;
    let passed = max_residual <= tol
        && corollary_residual <= tol
        && u_deviation <= tol
        && v_deviation <= tol;
    Ok(EquivalenceReport {
        max_residual,
        corollary_residual,
        block_residuals,
        u_deviation,
        v_deviation,
        tol,
        passed,
    })
}

/// Builds the Fiedler pencil and its witnesses for `σ` and verifies them.
pub fn verify_instance(
    r: &Rsmp,
    s: &SigmaSeq,
    points: &[C64],
    tol: f64,
) -> Result<(Pencil, EquivalenceReport)> {
    let pencil = fiedler::fiedler_pencil_rect(r, s)?;
    let (u, v) = witness_pair(r, s)?;
    let report = verify_theorem(r, s, &pencil, &u, &v, points, tol)?;
    Ok((pencil, report))
}

/// Block-diagonal transforms `(U, Ũ)` on the left and `(V, Ṽ)` on the right.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemTransforms {
    pub u: MatrixPolynomial,
    pub u_tilde: MatrixPolynomial,
    pub v: MatrixPolynomial,
    pub v_tilde: MatrixPolynomial,
}

fn diag2(a: &MatrixPolynomial, b: &MatrixPolynomial) -> MatrixPolynomial {
    let mut out = MatrixPolynomial::zeros(a.rows() + b.rows(), a.cols() + b.cols(), 0);
    out.set_submatrix(0, 0, a);
    out.set_submatrix(a.rows(), a.cols(), b);
    out
}

fn constant_unit_determinant(p: &MatrixPolynomial, points: &[C64], tol: f64) -> Result<bool> {
    if p.rows() != p.cols() {
        return Err(Error::NotSquare {
            rows: p.rows(),
            cols: p.cols(),
        });
    }
    let mut first: Option<C64> = None;
    for &z in points {
        let det = p.eval(z).det()?;
        match first {
            None => {
                if det.norm() <= tol {
                    return Ok(false);
                }
                first = Some(det);
            }
            Some(d0) => {
                if (det - d0).norm() > tol * d0.norm().max(1.0) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Sampled test of `diag(U, Ũ)·S1·diag(V, Ṽ) = S2`. Returns `false` when a
/// transform fails the unimodularity precheck (nonzero constant determinant).
pub fn system_equivalence_check(
    s1: &MatrixPolynomial,
    s2: &MatrixPolynomial,
    transforms: &SystemTransforms,
    points: &[C64],
    tol: f64,
) -> Result<bool> {
    let SystemTransforms {
        u,
        u_tilde,
        v,
        v_tilde,
    } = transforms;
    if u.cols() + u_tilde.cols() != s1.rows()
        || v.rows() + v_tilde.rows() != s1.cols()
        || u.rows() + u_tilde.rows() != s2.rows()
        || v.cols() + v_tilde.cols() != s2.cols()
    {
        return Err(Error::Dimension(
            "transforms do not match the system partitions",
        ));
    }
    for t in [u, u_tilde, v, v_tilde] {
        if !constant_unit_determinant(t, points, tol)? {
            return Ok(false);
        }
    }
    let left = diag2(u, u_tilde);
    let right = diag2(v, v_tilde);
    for &z in points {
        let product = left.eval(z).matmul(&s1.eval(z)).matmul(&right.eval(z));
        let target = s2.eval(z);
        if rel(&(&product - &target), &target) > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Recasts the reduction of the Fiedler pencil as a system equivalence: the
/// pencil split after its `A` part, the padded `blkdiag(I, S, I)` split after
/// `I ⊕ A`, and the part witnesses with the `D` part reordered.
pub fn system_form(
    r: &Rsmp,
    s: &SigmaSeq,
) -> Result<(MatrixPolynomial, MatrixPolynomial, SystemTransforms)> {
    let pencil = fiedler::fiedler_pencil_rect(r, s)?;
    let (u, v) = witness_pair(r, s)?;
    let t = theorem_target(r, s)?;
    let (alpha_a, alpha_d) = (t.row_sizes()[0], t.row_sizes()[2]);
    let a_size = alpha_a + r.n();
    let (ur, uc) = u.data().dims();
    let (vr, vc) = v.data().dims();
    let u_a = u.data().submatrix(0, 0, a_size, a_size);
    let v_a = v.data().submatrix(0, 0, a_size, a_size);
    let u_d = u.data().submatrix(a_size, a_size, ur - a_size, uc - a_size);
    let v_d = v.data().submatrix(a_size, a_size, vr - a_size, vc - a_size);
    // reorder the D part from [I_α, D] to [D, I_α]
    let p_rows: Vec<usize> = (alpha_d..alpha_d + r.p()).chain(0..alpha_d).collect();
    let p_cols: Vec<usize> = (alpha_d..alpha_d + r.m()).chain(0..alpha_d).collect();
    let u_tilde = MatrixPolynomial::new(
        u_d.coeffs()
            .iter()
            .map(|c| c.permuted(&p_rows, &(0..c.cols()).collect::<Vec<_>>()))
            .collect(),
    )?;
    let v_tilde = MatrixPolynomial::new(
        v_d.coeffs()
            .iter()
            .map(|c| c.permuted(&(0..c.rows()).collect::<Vec<_>>(), &p_cols))
            .collect(),
    )?;
    let target = corollary_target(r, alpha_a, alpha_d);
    Ok((
        pencil.to_polynomial(),
        target,
        SystemTransforms {
            u: u_a,
            u_tilde,
            v: v_a,
            v_tilde,
        },
    ))
}
