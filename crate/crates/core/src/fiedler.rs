//! Companion forms and Fiedler pencils of an RSMP.
//!
//! The rectangular construction grows a matrix `W` one step at a time. It
//! starts from `W₋₁ = [[−A₀, B], [−C, −D₀]]` and treats the `A` rows/columns
//! and the `D` rows/columns as two parts. At step `i` each part that still has
//! coefficients left (`i ≤ d_A − 2` for `A`, `i ≤ d_D − 2` for `D`) takes the
//! decision `σ` makes at `i`:
//!
//! * consecution: a zero block row is inserted before the part's first row
//!   and a zero block column after its first column; the new corner holds
//!   `−X_{i+1}` with an identity to its right;
//! * inversion: a zero block column is inserted before the part's first
//!   column and a zero block row after its first row; the new corner holds
//!   `−X_{i+1}` with an identity below it.
//!
//! After `d − 1` steps the final `W` is `𝕄_σ` and the pencil is
//! `λ·blkdiag(A_{d_A}, I, …, D_{d_D}, I, …) − 𝕄_σ`.

use alloc::vec;
use alloc::vec::Vec;

use crate::block::BlockMatrix;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::poly::MatrixPolynomial;
use crate::random::Shape;
use crate::rsmp::Rsmp;
use crate::sigma::{Decision, SigmaSeq};

/// The pencil `λ·lead − tail` with a block partition shared by both matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct Pencil {
    lead: ComplexMatrix,
    tail: ComplexMatrix,
    row_sizes: Vec<usize>,
    col_sizes: Vec<usize>,
}

impl Pencil {
    pub fn new(
        lead: ComplexMatrix,
        tail: ComplexMatrix,
        row_sizes: Vec<usize>,
        col_sizes: Vec<usize>,
    ) -> Result<Self> {
        if lead.dims() != tail.dims() {
            return Err(Error::Dimension("lead and tail differ in shape"));
        }
        if row_sizes.iter().sum::<usize>() != lead.rows()
            || col_sizes.iter().sum::<usize>() != lead.cols()
        {
            return Err(Error::Dimension(
                "block sizes do not add up to the pencil shape",
            ));
        }
        Ok(Self {
            lead,
            tail,
            row_sizes,
            col_sizes,
        })
    }

    /// A pencil with the trivial one-block partition.
    pub fn unpartitioned(lead: ComplexMatrix, tail: ComplexMatrix) -> Result<Self> {
        let (rows, cols) = lead.dims();
        Self::new(lead, tail, vec![rows], vec![cols])
    }

    pub fn lead(&self) -> &ComplexMatrix {
        &self.lead
    }

    pub fn tail(&self) -> &ComplexMatrix {
        &self.tail
    }

    pub fn row_sizes(&self) -> &[usize] {
        &self.row_sizes
    }

    pub fn col_sizes(&self) -> &[usize] {
        &self.col_sizes
    }

    pub fn dims(&self) -> (usize, usize) {
        self.lead.dims()
    }

    pub fn is_square(&self) -> bool {
        self.lead.is_square()
    }

    /// `z·lead − tail`.
    pub fn eval(&self, z: C64) -> ComplexMatrix {
        &self.lead.scale(z) - &self.tail
    }

    pub fn to_polynomial(&self) -> MatrixPolynomial {
        MatrixPolynomial::pencil(&self.lead, &self.tail).expect("lead and tail share a shape")
    }
}

/// Which parts take a step at a given index of the recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub index: usize,
    pub decision: Decision,
    pub a: bool,
    pub d: bool,
}

/// The `d − 1` steps of the recursion, after checking the decision count.
pub fn plan(r: &Rsmp, s: &SigmaSeq) -> Result<Vec<Step>> {
    let d = r.degree();
    if s.decisions().len() != d - 1 {
        return Err(Error::DecisionLength {
            expected: d - 1,
            got: s.decisions().len(),
        });
    }
    Ok(s.decisions()
        .iter()
        .enumerate()
        .map(|(i, &decision)| Step {
            index: i,
            decision,
            a: i + 2 <= r.deg_a(),
            d: i + 2 <= r.deg_d(),
        })
        .collect())
}

/// Number of steps the `A` part has taken once step `i` is done.
pub fn a_steps(deg_a: usize, i: usize) -> usize {
    (i + 1).min(deg_a - 1)
}

/// Number of steps the `D` part has taken once step `i` is done.
pub fn d_steps(deg_d: usize, i: usize) -> usize {
    (i + 1).min(deg_d - 1)
}

/// `W₋₁ = [[−A₀, B], [−C, −D₀]]` with partition `[n, p] × [n, m]`.
pub fn base_matrix(r: &Rsmp) -> BlockMatrix {
    let (n, p, m) = (r.n(), r.p(), r.m());
    let mut w = BlockMatrix::zeros(vec![n, p], vec![n, m]);
    w.set_block(0, 0, &-&r.a().coeff(0)).expect("shape");
    w.set_block(0, 1, r.b()).expect("shape");
    w.set_block(1, 0, &-r.c()).expect("shape");
    w.set_block(1, 1, &-&r.d().coeff(0)).expect("shape");
    w
}

/// One step on the part whose first block is `k`; `x` is the next
/// coefficient and `(row_unit, col_unit)` its shape.
fn w_step(
    w: &mut BlockMatrix,
    k: usize,
    x: &ComplexMatrix,
    decision: Decision,
    row_unit: usize,
    col_unit: usize,
) {
    match decision {
        Decision::Consecution => {
            w.insert_block_row(k, row_unit).expect("in range");
            w.insert_block_col(k + 1, row_unit).expect("in range");
            w.set_block(k, k, &-x).expect("shape");
            w.set_block(k, k + 1, &ComplexMatrix::identity(row_unit))
                .expect("shape");
        }
        Decision::Inversion => {
            w.insert_block_col(k, col_unit).expect("in range");
            w.insert_block_row(k + 1, col_unit).expect("in range");
            w.set_block(k, k, &-x).expect("shape");
            w.set_block(k + 1, k, &ComplexMatrix::identity(col_unit))
                .expect("shape");
        }
    }
}

/// `𝕎_0, …, 𝕎_{d−2}`; the last element is `𝕄_σ`. Needs `d ≥ 2`.
pub fn build_w_sequence(r: &Rsmp, s: &SigmaSeq) -> Result<Vec<BlockMatrix>> {
    let steps = plan(r, s)?;
    if steps.is_empty() {
        return Err(Error::DegreeTooSmall(r.degree()));
    }
    let (n, p, m) = (r.n(), r.p(), r.m());
    let mut w = base_matrix(r);
    let mut a_done = 0;
    let mut out = Vec::with_capacity(steps.len());
    for step in steps {
        let i = step.index;
        if step.a {
            w_step(&mut w, 0, &r.a().coeff(i + 1), step.decision, n, n);
            a_done += 1;
        }
        if step.d {
            w_step(&mut w, 1 + a_done, &r.d().coeff(i + 1), step.decision, p, m);
        }
        out.push(w.clone());
    }
    Ok(out)
}

/// `blkdiag(A_{d_A}, I_n, …, D_{d_D}, I, …)` on the partition of `w`, whose
/// `A` part has `1 + a_done` blocks.
fn lead_for(r: &Rsmp, w: &BlockMatrix, a_done: usize) -> ComplexMatrix {
    let mut blocks: Vec<ComplexMatrix> = Vec::new();
    blocks.push(r.a().coeff(r.deg_a()));
    blocks.extend((0..a_done).map(|_| ComplexMatrix::identity(r.n())));
    blocks.push(r.d().coeff(r.deg_d()));
    let k = 1 + a_done;
    blocks.extend(
        w.row_sizes()[k + 1..]
            .iter()
            .map(|&size| ComplexMatrix::identity(size)),
    );
    let refs: Vec<&ComplexMatrix> = blocks.iter().collect();
    ComplexMatrix::block_diag(&refs)
}

/// The Fiedler pencil `λ·lead − 𝕄_σ` of any RSMP. For `d = 1` this is `S(λ)`.
pub fn fiedler_pencil_rect(r: &Rsmp, s: &SigmaSeq) -> Result<Pencil> {
    let d = r.degree();
    let w = if d == 1 {
        plan(r, s)?;
        base_matrix(r)
    } else {
        build_w_sequence(r, s)?.pop().expect("nonempty")
    };
    let a_done = if d == 1 { 0 } else { a_steps(r.deg_a(), d - 2) };
    let lead = lead_for(r, &w, a_done);
    let (row_sizes, col_sizes) = (w.row_sizes().to_vec(), w.col_sizes().to_vec());
    Pencil::new(lead, w.into_data(), row_sizes, col_sizes)
}

/// Closed-form dimensions of `𝕎_i`.
pub fn expected_size(shape: Shape, s: &SigmaSeq, i: usize) -> Result<(usize, usize)> {
    let d = shape.degree();
    if s.decisions().len() != d - 1 {
        return Err(Error::DecisionLength {
            expected: d - 1,
            got: s.decisions().len(),
        });
    }
    if i + 2 > d {
        return Err(Error::OutOfRange {
            index: i,
            limit: d.saturating_sub(1),
        });
    }
    let Shape {
        n,
        p,
        m,
        deg_a,
        deg_d,
    } = shape;
    let a_part = n * (1 + a_steps(deg_a, i));
    let (c, inv) = if deg_d >= 2 {
        let hi = i.min(deg_d - 2);
        (s.c_count(0, hi), s.i_count(0, hi))
    } else {
        (0, 0)
    };
    Ok((a_part + p + p * c + m * inv, a_part + m + p * c + m * inv))
}

/// The structural statements checked on each `𝕎_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    /// The block partition has the expected number of blocks.
    Partition,
    /// Block `(0, 0)` is `−A_{i+1}` (frozen at `−A_{d_A−1}`).
    LeadingA,
    /// The first `D` block is `−D_{i+1}` (frozen at `−D_{d_D−1}`).
    LeadingD,
    /// The other `A` diagonal blocks are `0_n`.
    ZeroDiagonalA,
    /// The other `D` diagonal blocks are `0_p` after a consecution, `0_m` after an inversion.
    ZeroDiagonalD,
    /// The newest `D` row (consecution, `0_{p×n}`) or column (inversion,
    /// `0_{n×m}`) does not touch the `A` part.
    CouplingD,
    /// The newest `A` row (consecution) or column (inversion) does not touch the `D` part.
    CouplingA,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructureCheck {
    pub claim: Claim,
    pub block: (usize, usize),
    pub passed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureReport {
    pub checks: Vec<StructureCheck>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &StructureCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, claim: Claim, block: (usize, usize), passed: bool) {
        self.checks.push(StructureCheck {
            claim,
            block,
            passed,
        });
    }
}

fn block_is(w: &BlockMatrix, i: usize, j: usize, expected: &ComplexMatrix) -> bool {
    w.block(i, j).is_ok_and(|b| &b == expected)
}

fn block_is_zero(w: &BlockMatrix, i: usize, j: usize, rows: usize, cols: usize) -> bool {
    w.block(i, j)
        .is_ok_and(|b| b.dims() == (rows, cols) && b.is_zero())
}

/// Checks the block structure of `𝕎_i` produced by [`build_w_sequence`].
pub fn check_block_structure(w: &BlockMatrix, i: usize, r: &Rsmp, s: &SigmaSeq) -> StructureReport {
    let mut report = StructureReport::default();
    let (n, p, m) = (r.n(), r.p(), r.m());
    let (sa, sd) = (a_steps(r.deg_a(), i), d_steps(r.deg_d(), i));
    let blocks = 2 + sa + sd;
    let partition_ok = w.block_rows() == blocks && w.block_cols() == blocks;
    report.push(Claim::Partition, (blocks, blocks), partition_ok);
    if !partition_ok {
        return report;
    }
    let kd = 1 + sa;

    report.push(
        Claim::LeadingA,
        (0, 0),
        block_is(w, 0, 0, &-&r.a().coeff(sa)),
    );
    report.push(
        Claim::LeadingD,
        (kd, kd),
        block_is(w, kd, kd, &-&r.d().coeff(sd)),
    );
    for j in 1..=sa {
        report.push(Claim::ZeroDiagonalA, (j, j), block_is_zero(w, j, j, n, n));
    }
    for j in 0..sd {
        let pos = kd + sd - j;
        let size = match s.decision(j) {
            Ok(Decision::Consecution) => p,
            Ok(Decision::Inversion) => m,
            Err(_) => usize::MAX,
        };
        report.push(
            Claim::ZeroDiagonalD,
            (pos, pos),
            block_is_zero(w, pos, pos, size, size),
        );
    }

    let Ok(decision) = s.decision(i) else {
        return report;
    };
    if i + 2 <= r.deg_d() {
        for j in 0..kd {
            let (block, ok) = match decision {
                Decision::Consecution => ((kd, j), block_is_zero(w, kd, j, p, n)),
                Decision::Inversion => ((j, kd), block_is_zero(w, j, kd, n, m)),
            };
            report.push(Claim::CouplingD, block, ok);
        }
    }
    if i + 2 <= r.deg_a() {
        for j in kd..blocks {
            let (block, ok) = match decision {
                Decision::Consecution => ((0, j), block_is_zero(w, 0, j, n, w.col_sizes()[j])),
                Decision::Inversion => ((j, 0), block_is_zero(w, j, 0, w.row_sizes()[j], n)),
            };
            report.push(Claim::CouplingA, block, ok);
        }
    }
    report
}

fn set(w: &mut BlockMatrix, i: usize, j: usize, m: &ComplexMatrix) {
    w.set_block(i, j, m).expect("companion block shape");
}

/// First companion form `λX + Y`: `A` and `D` coefficients along the first
/// block rows, `−I` on the block subdiagonals.
pub fn companion_first(r: &Rsmp) -> Pencil {
    let (n, p, m, da, dd) = (r.n(), r.p(), r.m(), r.deg_a(), r.deg_d());
    let mut rows = vec![n; da];
    rows.push(p);
    rows.extend(core::iter::repeat_n(m, dd - 1));
    let cols: Vec<usize> = core::iter::repeat_n(n, da)
        .chain(core::iter::repeat_n(m, dd))
        .collect();
    let mut x = BlockMatrix::zeros(rows.clone(), cols.clone());
    let mut y = BlockMatrix::zeros(rows.clone(), cols.clone());
    set(&mut x, 0, 0, &r.a().coeff(da));
    set(&mut x, da, da, &r.d().coeff(dd));
    for j in 1..da {
        set(&mut x, j, j, &ComplexMatrix::identity(n));
        set(&mut y, j, j - 1, &-&ComplexMatrix::identity(n));
    }
    for j in 1..dd {
        set(&mut x, da + j, da + j, &ComplexMatrix::identity(m));
        set(&mut y, da + j, da + j - 1, &-&ComplexMatrix::identity(m));
    }
    for j in 0..da {
        set(&mut y, 0, j, &r.a().coeff(da - 1 - j));
    }
    for j in 0..dd {
        set(&mut y, da, da + j, &r.d().coeff(dd - 1 - j));
    }
    set(&mut y, 0, da + dd - 1, &-r.b());
    set(&mut y, da, da - 1, r.c());
    Pencil::new(x.into_data(), -&y.into_data(), rows, cols).expect("consistent partition")
}

/// Second companion form `λX + Y`: coefficients down the first block
/// columns, `−I` on the block superdiagonals.
pub fn companion_second(r: &Rsmp) -> Pencil {
    let (n, p, m, da, dd) = (r.n(), r.p(), r.m(), r.deg_a(), r.deg_d());
    let rows: Vec<usize> = core::iter::repeat_n(n, da)
        .chain(core::iter::repeat_n(p, dd))
        .collect();
    let mut cols = vec![n; da];
    cols.push(m);
    cols.extend(core::iter::repeat_n(p, dd - 1));
    let mut x = BlockMatrix::zeros(rows.clone(), cols.clone());
    let mut y = BlockMatrix::zeros(rows.clone(), cols.clone());
    set(&mut x, 0, 0, &r.a().coeff(da));
    set(&mut x, da, da, &r.d().coeff(dd));
    for j in 1..da {
        set(&mut x, j, j, &ComplexMatrix::identity(n));
        set(&mut y, j - 1, j, &-&ComplexMatrix::identity(n));
    }
    for j in 1..dd {
        set(&mut x, da + j, da + j, &ComplexMatrix::identity(p));
        set(&mut y, da + j - 1, da + j, &-&ComplexMatrix::identity(p));
    }
    for j in 0..da {
        set(&mut y, j, 0, &r.a().coeff(da - 1 - j));
    }
    for j in 0..dd {
        set(&mut y, da + j, da, &r.d().coeff(dd - 1 - j));
    }
    set(&mut y, da - 1, da, &-r.b());
    set(&mut y, da + dd - 1, 0, r.c());
    Pencil::new(x.into_data(), -&y.into_data(), rows, cols).expect("consistent partition")
}

fn require_square(r: &Rsmp) -> Result<()> {
    if r.is_square() {
        Ok(())
    } else {
        Err(Error::Dimension("square Fiedler matrices need p = m"))
    }
}

/// One part (`A` or `D`) of the square Fiedler matrix with index `i`.
fn square_part(poly: &MatrixPolynomial, i: usize, d: usize) -> ComplexMatrix {
    let deg = poly.degree();
    let u = poly.rows();
    let size = deg * u;
    let mut out = ComplexMatrix::identity(size);
    if i == d {
        out.set_submatrix(0, 0, &poly.coeff(deg));
    } else if i == 0 {
        out.set_submatrix((deg - 1) * u, (deg - 1) * u, &-&poly.coeff(0));
    } else if i < deg {
        let at = (deg - i - 1) * u;
        let mut core = ComplexMatrix::zeros(2 * u, 2 * u);
        core.set_submatrix(0, 0, &-&poly.coeff(i));
        core.set_submatrix(0, u, &ComplexMatrix::identity(u));
        core.set_submatrix(u, 0, &ComplexMatrix::identity(u));
        out.set_submatrix(at, at, &core);
    }
    out
}

/// The square Fiedler matrix `𝕄_i`, `0 ≤ i ≤ d`, of an RSMP with `p = m`.
/// `𝕄_d` is the leading matrix; `𝕄_0` carries the coupling `B`, `−C`.
pub fn square_fiedler_matrix(r: &Rsmp, i: usize) -> Result<BlockMatrix> {
    require_square(r)?;
    let d = r.degree();
    if i > d {
        return Err(Error::OutOfRange {
            index: i,
            limit: d + 1,
        });
    }
    let (n, m, da, dd) = (r.n(), r.m(), r.deg_a(), r.deg_d());
    let a_part = square_part(r.a(), i, d);
    let d_part = square_part(r.d(), i, d);
    let mut data = ComplexMatrix::block_diag(&[&a_part, &d_part]);
    if i == 0 {
        data.set_submatrix((da - 1) * n, da * n + (dd - 1) * m, r.b());
        data.set_submatrix(da * n + (dd - 1) * m, (da - 1) * n, &-r.c());
    }
    let sizes: Vec<usize> = core::iter::repeat_n(n, da)
        .chain(core::iter::repeat_n(m, dd))
        .collect();
    BlockMatrix::new(data, sizes.clone(), sizes)
}

/// `λ𝕄_d − 𝕄_{σ⁻¹(1)} ⋯ 𝕄_{σ⁻¹(d)}` for a bijection given by its values
/// `σ(0), …, σ(d−1)` in `1..=d`.
pub fn square_fiedler_pencil(r: &Rsmp, sigma: &[usize]) -> Result<Pencil> {
    require_square(r)?;
    let d = r.degree();
    if sigma.len() != d {
        return Err(Error::DecisionLength {
            expected: d,
            got: sigma.len(),
        });
    }
    SigmaSeq::from_bijection(sigma)?;
    let mut order = vec![0; d];
    for (i, &pos) in sigma.iter().enumerate() {
        order[pos - 1] = i;
    }
    let lead = square_fiedler_matrix(r, d)?;
    let mut product: Option<ComplexMatrix> = None;
    for &i in &order {
        let factor = square_fiedler_matrix(r, i)?.into_data();
        product = Some(match product {
            None => factor,
            Some(acc) => acc.matmul(&factor),
        });
    }
    let (rows, cols) = (lead.row_sizes().to_vec(), lead.col_sizes().to_vec());
    Pencil::new(lead.into_data(), product.expect("d ≥ 1"), rows, cols)
}

/// [`square_fiedler_pencil`] for the canonical bijection of a decision sequence.
pub fn square_fiedler_pencil_seq(r: &Rsmp, s: &SigmaSeq) -> Result<Pencil> {
    let d = r.degree();
    if s.decisions().len() != d - 1 {
        return Err(Error::DecisionLength {
            expected: d - 1,
            got: s.decisions().len(),
        });
    }
    square_fiedler_pencil(r, &s.canonical_bijection())
}
