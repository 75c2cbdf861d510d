//! Rosenbrock system matrix polynomials and their transfer functions.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::poly::{interpolate_on_circle, MatrixPolynomial, ScalarPolynomial};
use crate::random::{self, Shape};

/// `A(z)` counts as singular when its smallest LU pivot is below this
/// fraction of `Σ ‖A_k‖ |z|^k`.
pub const POLE_TOL: f64 = 1e-12;

/// Relative holdout mismatch accepted when interpolating `s(λ)·R(λ)`.
pub const CLEAR_TOL: f64 = 1e-8;

const REGULARITY_TRIALS: usize = 8;
const REGULARITY_SEED: u64 = 0x05ee_da11;

/// `S(λ) = [[A(λ), −B], [C, D(λ)]]` with `A` of size `n × n`, `B` of size
/// `n × m`, `C` of size `p × n` and `D` of size `p × m`. The declared degrees
/// are the stored degrees of `A` and `D`; leading coefficients may vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct Rsmp {
    a: MatrixPolynomial,
    b: ComplexMatrix,
    c: ComplexMatrix,
    d: MatrixPolynomial,
    a_regular: bool,
}

impl Rsmp {
    /// Validates shapes and declared degrees. An irregular `A(λ)` is accepted
    /// and recorded; see [`Rsmp::a_is_regular`].
    pub fn new(
        a: MatrixPolynomial,
        b: ComplexMatrix,
        c: ComplexMatrix,
        d: MatrixPolynomial,
    ) -> Result<Self> {
        let n = a.rows();
        if a.cols() != n {
            return Err(Error::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let (p, m) = d.dims();
        if n == 0 || p == 0 || m == 0 {
            return Err(Error::Dimension("n, p and m must be positive"));
        }
        if b.dims() != (n, m) {
            return Err(Error::Dimension("B must be n × m"));
        }
        if c.dims() != (p, n) {
            return Err(Error::Dimension("C must be p × n"));
        }
        if a.degree() == 0 {
            return Err(Error::DegreeTooSmall(0));
        }
        if d.degree() == 0 {
            return Err(Error::DegreeTooSmall(0));
        }
        let a_regular = a.is_regular(REGULARITY_TRIALS, REGULARITY_SEED)?;
        Ok(Self {
            a,
            b,
            c,
            d,
            a_regular,
        })
    }

    /// Splits an assembled `S(λ)` back into its blocks.
    pub fn from_assembled(s: &MatrixPolynomial, shape: Shape) -> Result<Self> {
        let Shape {
            n,
            p,
            m,
            deg_a,
            deg_d,
        } = shape;
        if s.dims() != (n + p, n + m) {
            return Err(Error::Dimension(
                "assembled matrix does not match the shape",
            ));
        }
        let block = |r0, c0, nr, nc, deg| {
            MatrixPolynomial::new(
                (0..=deg)
                    .map(|k| s.coeff(k).submatrix(r0, c0, nr, nc))
                    .collect(),
            )
        };
        let a = block(0, 0, n, n, deg_a)?;
        let d = block(n, n, p, m, deg_d)?;
        let b = -&s.coeff(0).submatrix(0, n, n, m);
        let c = s.coeff(0).submatrix(n, 0, p, n);
        Self::new(a, b, c, d)
    }

    pub fn a(&self) -> &MatrixPolynomial {
        &self.a
    }

    pub fn b(&self) -> &ComplexMatrix {
        &self.b
    }

    pub fn c(&self) -> &ComplexMatrix {
        &self.c
    }

    pub fn d(&self) -> &MatrixPolynomial {
        &self.d
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn p(&self) -> usize {
        self.d.rows()
    }

    pub fn m(&self) -> usize {
        self.d.cols()
    }

    pub fn deg_a(&self) -> usize {
        self.a.degree()
    }

    pub fn deg_d(&self) -> usize {
        self.d.degree()
    }

    /// `max(d_A, d_D)`.
    pub fn degree(&self) -> usize {
        self.deg_a().max(self.deg_d())
    }

    pub fn shape(&self) -> Shape {
        Shape::new(self.n(), self.p(), self.m(), self.deg_a(), self.deg_d())
    }

    /// `p = m`, so that `S(λ)` is square.
    pub fn is_square(&self) -> bool {
        self.p() == self.m()
    }

    pub fn a_is_regular(&self) -> bool {
        self.a_regular
    }

    /// `S(λ)` as one `(n+p) × (n+m)` matrix polynomial of degree `max(d_A, d_D)`.
    pub fn assemble_s(&self) -> MatrixPolynomial {
        let (n, p, m) = (self.n(), self.p(), self.m());
        let coeffs = (0..=self.degree())
            .map(|k| {
                let mut s = ComplexMatrix::zeros(n + p, n + m);
                s.set_submatrix(0, 0, &self.a.coeff(k));
                s.set_submatrix(n, n, &self.d.coeff(k));
                if k == 0 {
                    s.set_submatrix(0, n, &-&self.b);
                    s.set_submatrix(n, 0, &self.c);
                }
                s
            })
            .collect();
        MatrixPolynomial::new(coeffs).expect("coefficients share a shape")
    }

    /// `R(z) = D(z) + C A(z)⁻¹ B`, solving with `A(z)` rather than inverting it.
    pub fn transfer_eval(&self, z: C64) -> Result<ComplexMatrix> {
        if !self.a_regular {
            return Err(Error::IrregularA);
        }
        let lu = self.a.eval(z).lu()?;
        let scale = self
            .a
            .coeffs()
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * z.norm() + c.max_abs());
        if lu.min_pivot() <= POLE_TOL * scale {
            return Err(Error::Pole { re: z.re, im: z.im });
        }
        let x = lu.solve(&self.b)?;
        Ok(&self.d.eval(z) + &self.c.matmul(&x))
    }

    /// The matrix polynomial `s(λ)·R(λ)`, recovered by interpolation. Fails
    /// with [`Error::InterpolationResidual`] when `s` does not clear every pole.
    pub fn clear_denominator(&self, s: &ScalarPolynomial) -> Result<MatrixPolynomial> {
        if s.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let bound = s.effective_degree() + self.deg_d() + self.n() * self.deg_a();
        let mut rng = random::rng(0x0c1e_a7ed);
        let mut last = Err(Error::InterpolationResidual {
            residual: f64::INFINITY,
        });
        for _ in 0..3 {
            let rotation = rng.random::<f64>() * core::f64::consts::TAU;
            let f = |z: C64| Ok(self.transfer_eval(z)?.scale(s.eval(z)));
            let poly = match interpolate_on_circle(self.p(), self.m(), bound, 1.0, rotation, f) {
                Ok(poly) => poly,
                Err(e @ Error::Pole { .. }) => {
                    last = Err(e);
                    continue;
                }
                Err(e) => return Err(e),
            };
            let z = random::annulus_point(&mut rng, 0.5, 2.0);
            let value = match f(z) {
                Ok(v) => v,
                Err(Error::Pole { .. }) => continue,
                Err(e) => return Err(e),
            };
            let residual = poly.relative_residual(z, &value);
            if residual <= CLEAR_TOL {
                return Ok(clean(&poly));
            }
            last = Err(Error::InterpolationResidual { residual });
        }
        last
    }
}

/// Zeroes entries negligible against the largest coefficient and trims the degree.
fn clean(p: &MatrixPolynomial) -> MatrixPolynomial {
    let scale = p
        .coeffs()
        .iter()
        .map(ComplexMatrix::max_abs)
        .fold(0.0, f64::max);
    let tol = 1e-10 * scale;
    let chop = |x: f64| if x.abs() <= tol { 0.0 } else { x };
    let coeffs: Vec<ComplexMatrix> = p
        .coeffs()
        .iter()
        .map(|c| c.map(|z| C64::new(chop(z.re), chop(z.im))))
        .collect();
    MatrixPolynomial::new(coeffs)
        .expect("same shapes")
        .trimmed()
}

/// The system of the introductory example: `A = λ − 1`, `B = [−1, 0]`,
/// `C = [−1; 0]`, `D(λ) = [[λ − 2, 1], [1, 0]]`, so that
/// `R(λ) = [[λ − 2 + 1/(λ − 1), 1], [1, 0]]`.
pub fn example_intro() -> Rsmp {
    let real = |rows, cols, data: &[f64]| {
        ComplexMatrix::from_real(rows, cols, data).expect("valid literal")
    };
    let a = MatrixPolynomial::new(vec![real(1, 1, &[-1.0]), real(1, 1, &[1.0])])
        .expect("valid literal");
    let b = real(1, 2, &[-1.0, 0.0]);
    let c = real(2, 1, &[-1.0, 0.0]);
    let d = MatrixPolynomial::new(vec![
        real(2, 2, &[-2.0, 1.0, 1.0, 0.0]),
        real(2, 2, &[1.0, 0.0, 0.0, 0.0]),
    ])
    .expect("valid literal");
    Rsmp::new(a, b, c, d).expect("valid literal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_regular_rsmp, random_rsmp, Entries};

    fn real(rows: usize, cols: usize, data: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real(rows, cols, data).unwrap()
    }

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn intro_example_assembles_as_printed() {
        let s = example_intro().assemble_s();
        assert_eq!(s.degree(), 1);
        assert_eq!(
            s.coeff(1),
            real(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0])
        );
        assert_eq!(
            s.coeff(0),
            real(3, 3, &[-1.0, 1.0, 0.0, -1.0, -2.0, 1.0, 0.0, 1.0, 0.0])
        );
    }

    #[test]
    fn intro_example_transfer_function() {
        let r = example_intro();
        assert_eq!(
            r.transfer_eval(c(2.0)).unwrap(),
            real(2, 2, &[1.0, 1.0, 1.0, 0.0])
        );
        assert!(matches!(r.transfer_eval(c(1.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn intro_example_cleared_denominator() {
        let r = example_intro();
        let s = ScalarPolynomial::from_real(&[-1.0, 1.0]).unwrap();
        let p = r.clear_denominator(&s).unwrap();
        // [[(λ−1)(λ−2)+1, λ−1], [λ−1, 0]] = [[λ²−3λ+3, λ−1], [λ−1, 0]]
        let expected = MatrixPolynomial::new(vec![
            real(2, 2, &[3.0, -1.0, -1.0, 0.0]),
            real(2, 2, &[-3.0, 1.0, 1.0, 0.0]),
            real(2, 2, &[1.0, 0.0, 0.0, 0.0]),
        ])
        .unwrap();
        assert_eq!(p.degree(), 2);
        for k in 0..=2 {
            assert!(
                (&p.coeff(k) - &expected.coeff(k)).max_abs() < 1e-9,
                "coefficient {k}"
            );
        }
        assert!(matches!(
            r.clear_denominator(&ScalarPolynomial::one()),
            Err(Error::InterpolationResidual { .. })
        ));
        assert!(matches!(
            r.clear_denominator(&ScalarPolynomial::from_real(&[0.0]).unwrap()),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn decoupled_cases() {
        let mut g = random::rng(2);
        let mut r = random_regular_rsmp(&mut g, Shape::new(2, 2, 3, 2, 2), Entries::Integer(3));
        r = Rsmp::new(
            r.a.clone(),
            ComplexMatrix::zeros(2, 3),
            ComplexMatrix::zeros(2, 2),
            r.d.clone(),
        )
        .unwrap();
        let s = r.assemble_s();
        for k in 0..=2 {
            let expected = ComplexMatrix::block_diag(&[&r.a.coeff(k), &r.d.coeff(k)]);
            assert_eq!(s.coeff(k), expected);
        }
        let z = C64::new(0.3, 0.7);
        assert_eq!(r.transfer_eval(z).unwrap(), r.d.eval(z));
        let cleared = r.clear_denominator(&ScalarPolynomial::one()).unwrap();
        for k in 0..=2 {
            assert!((&cleared.coeff(k) - &r.d.coeff(k)).max_abs() < 1e-9);
        }
    }

    #[test]
    fn validation() {
        let a = MatrixPolynomial::new(vec![real(1, 1, &[1.0]), real(1, 1, &[1.0])]).unwrap();
        let d =
            MatrixPolynomial::new(vec![real(1, 2, &[1.0, 0.0]), real(1, 2, &[0.0, 1.0])]).unwrap();
        assert!(Rsmp::new(
            a.clone(),
            real(1, 2, &[0.0, 0.0]),
            real(1, 1, &[0.0]),
            d.clone()
        )
        .is_ok());
        assert!(matches!(
            Rsmp::new(
                a.clone(),
                real(1, 3, &[0.0; 3]),
                real(1, 1, &[0.0]),
                d.clone()
            ),
            Err(Error::Dimension(_))
        ));
        assert!(Rsmp::new(
            a.clone(),
            real(1, 2, &[0.0; 2]),
            real(2, 1, &[0.0; 2]),
            d.clone()
        )
        .is_err());
        let constant = MatrixPolynomial::constant(real(1, 1, &[1.0]));
        assert!(matches!(
            Rsmp::new(constant, real(1, 2, &[0.0; 2]), real(1, 1, &[0.0]), d),
            Err(Error::DegreeTooSmall(0))
        ));
    }

    #[test]
    fn irregular_a_is_a_flag() {
        let zero = MatrixPolynomial::zeros(2, 2, 1);
        let d = MatrixPolynomial::zeros(1, 1, 1);
        let r = Rsmp::new(
            zero,
            ComplexMatrix::zeros(2, 1),
            ComplexMatrix::zeros(1, 2),
            d,
        )
        .unwrap();
        assert!(!r.a_is_regular());
        assert!(matches!(r.transfer_eval(c(0.5)), Err(Error::IrregularA)));
    }

    #[test]
    fn assembled_round_trip_and_pointwise_blocks() {
        let mut g = random::rng(7);
        for _ in 0..100 {
            let shape = Shape::new(
                g.random_range(1..4),
                g.random_range(1..4),
                g.random_range(1..4),
                g.random_range(1..5),
                g.random_range(1..5),
            );
            let r = random_rsmp(&mut g, shape, Entries::Integer(3));
            let s = r.assemble_s();
            assert_eq!(Rsmp::from_assembled(&s, shape).unwrap(), r);
            let z = random::annulus_point(&mut g, 0.5, 2.0);
            let sz = s.eval(z);
            let n = shape.n;
            assert!((&sz.submatrix(0, 0, n, n) - &r.a.eval(z)).max_abs() < 1e-12);
            assert_eq!(sz.submatrix(0, n, n, shape.m), -&r.b);
            assert_eq!(sz.submatrix(n, 0, shape.p, n), r.c);
            assert!((&sz.submatrix(n, n, shape.p, shape.m) - &r.d.eval(z)).max_abs() < 1e-12);
        }
    }

    #[test]
    fn state_elimination_matches_transfer_function() {
        let mut g = random::rng(8);
        for _ in 0..100 {
            let shape = Shape::new(
                g.random_range(1..4),
                g.random_range(1..4),
                g.random_range(1..4),
                g.random_range(1..4),
                g.random_range(1..4),
            );
            let r = random_regular_rsmp(&mut g, shape, Entries::Real);
            let z = random::annulus_point(&mut g, 0.5, 2.0);
            let Ok(rz) = r.transfer_eval(z) else { continue };
            let eta = random::random_matrix(&mut g, shape.m, 1, Entries::Real);
            let xi = r.a.eval(z).lu().unwrap().solve(&r.b.matmul(&eta)).unwrap();
            let stacked = ComplexMatrix::from_fn(shape.n + shape.m, 1, |i, _| {
                if i < shape.n {
                    xi[(i, 0)]
                } else {
                    eta[(i - shape.n, 0)]
                }
            });
            let lhs = r.assemble_s().eval(z).matmul(&stacked);
            let y = rz.matmul(&eta);
            let scale = r.assemble_s().eval(z).norm_fro() * stacked.norm_fro();
            assert!(lhs.submatrix(0, 0, shape.n, 1).norm_fro() <= 1e-10 * scale);
            assert!((&lhs.submatrix(shape.n, 0, shape.p, 1) - &y).norm_fro() <= 1e-10 * scale);
        }
    }
}
