//! Matrix and scalar polynomials, stored low to high degree.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Float, Zero};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::random;

/// `P(λ) = Σ λ^i coeffs[i]`. The stored degree is `coeffs.len() - 1`; the
/// leading coefficient may be zero.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPolynomial {
    rows: usize,
    cols: usize,
    coeffs: Vec<ComplexMatrix>,
}

/// Relative rank threshold used by [`MatrixPolynomial::is_regular`].
pub const REGULARITY_TOL: f64 = 1e-10;

impl MatrixPolynomial {
    pub fn new(coeffs: Vec<ComplexMatrix>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or(Error::Dimension("matrix polynomial needs a coefficient"))?;
        let (rows, cols) = first.dims();
        if coeffs.iter().any(|c| c.dims() != (rows, cols)) {
            return Err(Error::Dimension("coefficients differ in shape"));
        }
        Ok(Self { rows, cols, coeffs })
    }

    pub fn constant(m: ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            coeffs: vec![m],
        }
    }

    pub fn zeros(rows: usize, cols: usize, degree: usize) -> Self {
        Self {
            rows,
            cols,
            coeffs: vec![ComplexMatrix::zeros(rows, cols); degree + 1],
        }
    }

    /// `λ·I`.
    pub fn lambda_identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            coeffs: vec![ComplexMatrix::zeros(n, n), ComplexMatrix::identity(n)],
        }
    }

    /// The pencil `λ·lead − tail` as a degree-one polynomial.
    pub fn pencil(lead: &ComplexMatrix, tail: &ComplexMatrix) -> Result<Self> {
        Self::new(vec![-tail, lead.clone()])
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Degree after dropping trailing zero coefficients (0 for the zero polynomial).
    pub fn effective_degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[ComplexMatrix] {
        &self.coeffs
    }

    /// Coefficient of `λ^k`; zero beyond the stored degree.
    pub fn coeff(&self, k: usize) -> ComplexMatrix {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| ComplexMatrix::zeros(self.rows, self.cols))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(ComplexMatrix::is_zero)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: C64) -> ComplexMatrix {
        let mut acc = self.coeffs[self.degree()].clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = &acc.scale(z) + c;
        }
        acc
    }

    /// Derivative with respect to λ.
    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self::zeros(self.rows, self.cols, 0);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(C64::new(k as f64, 0.0)))
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            coeffs,
        }
    }

    /// Degree-`k` Horner shift `A_{d−k} + λA_{d−k+1} + … + λ^k A_d`.
    pub fn horner_shift(&self, k: usize) -> Result<Self> {
        let d = self.degree();
        if k > d {
            return Err(Error::OutOfRange { index: k, limit: d });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs[d - k..].to_vec(),
        })
    }

    /// Multiplication by `λ`.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ComplexMatrix::zeros(self.rows, self.cols));
        coeffs.extend(self.coeffs.iter().cloned());
        Self {
            rows: self.rows,
            cols: self.cols,
            coeffs,
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(C64::new(-1.0, 0.0))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dims(), rhs.dims(), "polynomial add dimension mismatch");
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            coeffs,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Polynomial matrix product.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "polynomial mul dimension mismatch");
        let mut coeffs = vec![
            ComplexMatrix::zeros(self.rows, rhs.cols);
            self.coeffs.len() + rhs.coeffs.len() - 1
        ];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &a.matmul(b);
            }
        }
        Self {
            rows: self.rows,
            cols: rhs.cols,
            coeffs,
        }
    }

    /// Drops trailing zero coefficients, keeping at least one.
    pub fn trimmed(&self) -> Self {
        let keep = self.effective_degree() + 1;
        Self {
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self {
            rows: nr,
            cols: nc,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.submatrix(r0, c0, nr, nc))
                .collect(),
        }
    }

    /// Writes `m` into the window at `(r0, c0)`, raising the stored degree if needed.
    pub fn set_submatrix(&mut self, r0: usize, c0: usize, m: &Self) {
        while self.coeffs.len() < m.coeffs.len() {
            self.coeffs.push(ComplexMatrix::zeros(self.rows, self.cols));
        }
        for (k, c) in self.coeffs.iter_mut().enumerate() {
            c.set_submatrix(r0, c0, &m.coeff(k));
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> ScalarPolynomial {
        ScalarPolynomial {
            coeffs: self.coeffs.iter().map(|c| c[(i, j)]).collect(),
        }
    }

    /// Probabilistic regularity test: true iff `P(z)` has full numerical rank
    /// (tolerance [`REGULARITY_TOL`]) at one of `trials` random points of the disc `|z| ≤ 2`.
    pub fn is_regular(&self, trials: usize, seed: u64) -> Result<bool> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut rng = random::rng(seed);
        for _ in 0..trials.max(1) {
            let z = random::disc_point(&mut rng, 2.0);
            if self.eval(z).rank(REGULARITY_TOL) == self.rows {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Interpolates a `rows × cols` matrix polynomial of degree at most `degree`
/// from its values at the `degree + 1` points `radius · e^{i(rotation + 2πj/(degree+1))}`.
pub fn interpolate_on_circle<F>(
    rows: usize,
    cols: usize,
    degree: usize,
    radius: f64,
    rotation: f64,
    mut f: F,
) -> Result<MatrixPolynomial>
where
    F: FnMut(C64) -> Result<ComplexMatrix>,
{
    let count = degree + 1;
    let mut coeffs = vec![ComplexMatrix::zeros(rows, cols); count];
    for j in 0..count {
        let theta = rotation + core::f64::consts::TAU * j as f64 / count as f64;
        let z = C64::from_polar(radius, theta);
        let value = f(z)?;
        if value.dims() != (rows, cols) {
            return Err(Error::Dimension("interpolated function changed shape"));
        }
        for (k, c) in coeffs.iter_mut().enumerate() {
            let w = C64::from_polar(
                Float::powi(radius, -(k as i32)) / count as f64,
                -theta * k as f64,
            );
            *c = &*c + &value.scale(w);
        }
    }
    MatrixPolynomial::new(coeffs)
}

impl MatrixPolynomial {
    /// `‖P(z) − value‖_F / Σ ‖P_k‖_F |z|^k`, the relative mismatch against a sampled value.
    pub fn relative_residual(&self, z: C64, value: &ComplexMatrix) -> f64 {
        let r = z.norm();
        let scale = self
            .coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.norm_fro())
            .max(value.norm_fro());
        let diff = (&self.eval(z) - value).norm_fro();
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }
}

/// Places `m` in block `(row, col)` (0-based) of an otherwise zero block
/// matrix with the given block sizes. This is `(e_row e_colᵀ) ⊗ m` when all
/// blocks share the shape of `m`.
pub fn kron_unit_embed(
    row: usize,
    col: usize,
    row_sizes: &[usize],
    col_sizes: &[usize],
    m: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    if row >= row_sizes.len() {
        return Err(Error::OutOfRange {
            index: row,
            limit: row_sizes.len(),
        });
    }
    if col >= col_sizes.len() {
        return Err(Error::OutOfRange {
            index: col,
            limit: col_sizes.len(),
        });
    }
    if row_sizes[row] != m.rows() || col_sizes[col] != m.cols() {
        return Err(Error::Dimension(
            "embedded block does not match its block size",
        ));
    }
    let r0: usize = row_sizes[..row].iter().sum();
    let c0: usize = col_sizes[..col].iter().sum();
    let mut out = ComplexMatrix::zeros(row_sizes.iter().sum(), col_sizes.iter().sum());
    out.set_submatrix(r0, c0, m);
    Ok(out)
}

/// Scalar polynomial, coefficients low to high.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarPolynomial {
    coeffs: Vec<C64>,
}

impl ScalarPolynomial {
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Dimension("scalar polynomial needs a coefficient"));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn one() -> Self {
        Self {
            coeffs: vec![C64::new(1.0, 0.0)],
        }
    }

    /// Monic polynomial `Π (λ − r)`.
    pub fn from_roots(roots: &[C64]) -> Self {
        let mut coeffs = vec![C64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![C64::zero(); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn effective_degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::zero(), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self {
                coeffs: vec![C64::zero()],
            };
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut coeffs = vec![C64::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self { coeffs }
    }

    /// Zeroes coefficients with modulus at most `rel · max|c_k|` and trims the tail.
    pub fn chopped(&self, rel: f64) -> Self {
        let max = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut coeffs: Vec<C64> = self
            .coeffs
            .iter()
            .map(|&c| {
                if c.norm() <= rel * max {
                    C64::zero()
                } else {
                    c
                }
            })
            .collect();
        let keep = coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0) + 1;
        coeffs.truncate(keep);
        Self { coeffs }
    }

    /// `Σ |c_k| |z|^k`, the scale used for backward-error residuals.
    pub fn abs_eval(&self, z: C64) -> f64 {
        let r = z.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{rng, SeededRng};
    use rand::Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn scalar(coeffs: &[f64]) -> MatrixPolynomial {
        MatrixPolynomial::new(
            coeffs
                .iter()
                .map(|&x| ComplexMatrix::from_real(1, 1, &[x]).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn random_poly(rng: &mut SeededRng, rows: usize, cols: usize, deg: usize) -> MatrixPolynomial {
        let coeffs = (0..=deg)
            .map(|_| {
                ComplexMatrix::from_fn(rows, cols, |_, _| {
                    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                })
            })
            .collect();
        MatrixPolynomial::new(coeffs).unwrap()
    }

    fn naive_eval(p: &MatrixPolynomial, z: C64) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(p.rows(), p.cols());
        let mut zk = c(1.0);
        for coeff in p.coeffs() {
            acc = &acc + &coeff.scale(zk);
            zk *= z;
        }
        acc
    }

    #[test]
    fn eval_examples() {
        // λ − 1 at 1
        assert_eq!(scalar(&[-1.0, 1.0]).eval(c(1.0))[(0, 0)], c(0.0));
        let mut r = rng(3);
        let p = random_poly(&mut r, 2, 2, 3);
        assert_eq!(p.eval(c(0.0)), p.coeffs()[0]);
        let z = C64::new(0.7, 0.3);
        let diff = (&p.eval(z) - &naive_eval(&p, z)).max_abs();
        assert!(diff <= 1e-14 * naive_eval(&p, z).max_abs(), "diff {diff}");
    }

    #[test]
    fn horner_shift_examples() {
        let p = scalar(&[1.0, 2.0, 3.0]);
        assert_eq!(p.horner_shift(0).unwrap(), scalar(&[3.0]));
        assert_eq!(p.horner_shift(2).unwrap(), p);
        assert_eq!(p.horner_shift(1).unwrap(), scalar(&[2.0, 3.0]));
        assert!(matches!(p.horner_shift(3), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn horner_shift_recurrence_is_exact_on_integers() {
        let p = MatrixPolynomial::new(
            (0..5)
                .map(|k| {
                    ComplexMatrix::from_real(2, 2, &[k as f64, 1.0 - k as f64, 2.0, -3.0]).unwrap()
                })
                .collect(),
        )
        .unwrap();
        let d = p.degree();
        for k in 0..d {
            let lhs = p.horner_shift(k + 1).unwrap();
            let rhs = p
                .horner_shift(k)
                .unwrap()
                .shift_up()
                .add(&MatrixPolynomial::constant(p.coeff(d - k - 1)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn regularity() {
        assert!(scalar(&[-1.0, 1.0]).is_regular(5, 0).unwrap());
        assert!(!MatrixPolynomial::zeros(2, 2, 2).is_regular(5, 0).unwrap());
        // [[λ, λ], [λ, λ]] has rank one everywhere
        let rank_one = MatrixPolynomial::new(vec![
            ComplexMatrix::zeros(2, 2),
            ComplexMatrix::from_real(2, 2, &[1.0; 4]).unwrap(),
        ])
        .unwrap();
        for seed in 0..20 {
            assert!(!rank_one.is_regular(10, seed).unwrap());
        }
        assert!(MatrixPolynomial::zeros(2, 3, 1).is_regular(1, 0).is_err());
    }

    #[test]
    fn kron_embed_examples() {
        let five = ComplexMatrix::from_real(1, 1, &[5.0]).unwrap();
        assert_eq!(kron_unit_embed(0, 0, &[1], &[1], &five).unwrap(), five);
        let three = ComplexMatrix::from_real(1, 1, &[3.0]).unwrap();
        assert_eq!(
            kron_unit_embed(1, 0, &[1, 1], &[1], &three).unwrap(),
            ComplexMatrix::from_real(2, 1, &[0.0, 3.0]).unwrap()
        );
        assert!(kron_unit_embed(0, 0, &[2], &[1], &three).is_err());
    }

    #[test]
    fn kron_embed_matches_dense_kronecker() {
        // e_3 e_2ᵀ ⊗ B with B 1×2, three row blocks and two column blocks
        let b = ComplexMatrix::from_real(1, 2, &[7.0, -1.0]).unwrap();
        let (da, dd) = (3, 2);
        let outer = ComplexMatrix::from_fn(da, dd, |i, j| {
            if i == da - 1 && j == dd - 1 {
                c(1.0)
            } else {
                c(0.0)
            }
        });
        let kron = ComplexMatrix::from_fn(da * b.rows(), dd * b.cols(), |i, j| {
            outer[(i / b.rows(), j / b.cols())] * b[(i % b.rows(), j % b.cols())]
        });
        let embedded = kron_unit_embed(da - 1, dd - 1, &[1; 3], &[2; 2], &b).unwrap();
        assert_eq!(embedded, kron);
    }

    #[test]
    fn scalar_poly_helpers() {
        let p = ScalarPolynomial::from_roots(&[c(1.0), c(2.0)]);
        assert_eq!(p.coeffs(), &[c(2.0), c(-3.0), c(1.0)]);
        assert_eq!(p.derivative().coeffs(), &[c(-3.0), c(2.0)]);
        assert_eq!(p.eval(c(2.0)), c(0.0));
        let q = ScalarPolynomial::from_real(&[1.0, 1e-20, 0.0])
            .unwrap()
            .chopped(1e-12);
        assert_eq!(q.coeffs(), &[c(1.0)]);
    }

    #[test]
    fn circle_interpolation_recovers_coefficients() {
        let mut r = rng(5);
        let p = random_poly(&mut r, 2, 3, 4);
        for radius in [0.5, 1.0, 2.0] {
            let q = interpolate_on_circle(2, 3, 6, radius, 0.3, |z| Ok(p.eval(z))).unwrap();
            assert_eq!(q.degree(), 6);
            for k in 0..=6 {
                assert!(
                    (&q.coeff(k) - &p.coeff(k)).max_abs() < 1e-12,
                    "k={k} radius={radius}"
                );
            }
            let z = C64::new(0.3, -1.1);
            assert!(q.relative_residual(z, &p.eval(z)) < 1e-13);
        }
    }

    #[test]
    fn polynomial_product_matches_pointwise() {
        let mut r = rng(11);
        let a = random_poly(&mut r, 2, 3, 2);
        let b = random_poly(&mut r, 3, 1, 3);
        let z = C64::new(-0.4, 0.9);
        let lhs = a.mul(&b).eval(z);
        let rhs = a.eval(z).matmul(&b.eval(z));
        assert!((&lhs - &rhs).max_abs() < 1e-13);
    }
}
