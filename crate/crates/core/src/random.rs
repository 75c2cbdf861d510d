//! Seeded generators for sample points and test instances.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::{ComplexMatrix, C64};
use crate::poly::MatrixPolynomial;
use crate::rsmp::Rsmp;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of the disc `|z| ≤ radius`.
pub fn disc_point<R: Rng>(rng: &mut R, radius: f64) -> C64 {
    let r = radius * Float::sqrt(rng.random::<f64>());
    C64::from_polar(r, rng.random::<f64>() * TAU)
}

/// Point of the annulus `inner ≤ |z| ≤ outer`, uniform in area.
pub fn annulus_point<R: Rng>(rng: &mut R, inner: f64, outer: f64) -> C64 {
    let u: f64 = rng.random();
    let r = Float::sqrt(inner * inner + u * (outer * outer - inner * inner));
    C64::from_polar(r, rng.random::<f64>() * TAU)
}

/// `count` points of the annulus `0.5 ≤ |z| ≤ 2`.
pub fn annulus_points<R: Rng>(rng: &mut R, count: usize) -> Vec<C64> {
    (0..count).map(|_| annulus_point(rng, 0.5, 2.0)).collect()
}

/// Dimensions and declared degrees of an RSMP.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    pub n: usize,
    pub p: usize,
    pub m: usize,
    pub deg_a: usize,
    pub deg_d: usize,
}

impl Shape {
    pub fn new(n: usize, p: usize, m: usize, deg_a: usize, deg_d: usize) -> Self {
        Self {
            n,
            p,
            m,
            deg_a,
            deg_d,
        }
    }

    pub fn degree(&self) -> usize {
        self.deg_a.max(self.deg_d)
    }
}

/// Which distribution coefficients are drawn from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Entries {
    /// Integers in `-bound..=bound`.
    Integer(i64),
    /// Reals uniform in `[-1, 1)`.
    Real,
}

fn draw<R: Rng>(rng: &mut R, entries: Entries) -> C64 {
    match entries {
        Entries::Integer(b) => C64::new(rng.random_range(-b..=b) as f64, 0.0),
        Entries::Real => C64::new(rng.random_range(-1.0..1.0), 0.0),
    }
}

pub fn random_matrix<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    entries: Entries,
) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| draw(rng, entries))
}

pub fn random_poly<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    degree: usize,
    entries: Entries,
) -> MatrixPolynomial {
    let coeffs = (0..=degree)
        .map(|_| random_matrix(rng, rows, cols, entries))
        .collect();
    MatrixPolynomial::new(coeffs).expect("coefficients share a shape")
}

/// Random RSMP of the given shape. Leading coefficients may be singular.
pub fn random_rsmp<R: Rng>(rng: &mut R, shape: Shape, entries: Entries) -> Rsmp {
    let Shape {
        n,
        p,
        m,
        deg_a,
        deg_d,
    } = shape;
    let a = random_poly(rng, n, n, deg_a, entries);
    let b = random_matrix(rng, n, m, entries);
    let c = random_matrix(rng, p, n, entries);
    let d = random_poly(rng, p, m, deg_d, entries);
    Rsmp::new(a, b, c, d).expect("shapes are consistent by construction")
}

/// Random RSMP whose `A(λ)` is regular (redraws until the check passes).
pub fn random_regular_rsmp<R: Rng>(rng: &mut R, shape: Shape, entries: Entries) -> Rsmp {
    loop {
        let r = random_rsmp(rng, shape, entries);
        if r.a_is_regular() {
            return r;
        }
    }
}
