//! Roots of scalar polynomials by Aberth–Ehrlich simultaneous iteration.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_traits::{Float, Zero};

use crate::error::{Error, Result};
use crate::matrix::C64;
use crate::poly::ScalarPolynomial;

pub const MAX_SWEEPS: usize = 500;

/// Roots closer than this are reported as one multiple root.
pub const CLUSTER_RADIUS: f64 = 1e-6;

/// `p(z)/p'(z)` and the backward error `|p(z)| / Σ|c_k||z|^k`, computed on the
/// reversed polynomial when `|z| > 1` to avoid overflow.
fn newton_ratio(coeffs: &[C64], z: C64) -> (C64, f64) {
    let degree = coeffs.len() - 1;
    let horner = |cs: &mut dyn Iterator<Item = &C64>, x: C64| {
        let (mut p, mut dp, mut abs) = (C64::zero(), C64::zero(), 0.0);
        for &c in cs {
            dp = dp * x + p;
            p = p * x + c;
            abs = abs * x.norm() + c.norm();
        }
        (p, dp, abs)
    };
    if z.norm() <= 1.0 {
        let (p, dp, abs) = horner(&mut coeffs.iter().rev(), z);
        (p / dp, if abs == 0.0 { 0.0 } else { p.norm() / abs })
    } else {
        let y = z.inv();
        let (q, dq, abs) = horner(&mut coeffs.iter(), y);
        (
            z / (C64::new(degree as f64, 0.0) - y * dq / q),
            if abs == 0.0 { 0.0 } else { q.norm() / abs },
        )
    }
}

/// All roots of `p`, repeated according to multiplicity as far as the
/// iteration resolves them.
pub fn aberth(p: &ScalarPolynomial) -> Result<Vec<C64>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let top = p.effective_degree();
    if top == 0 {
        return Err(Error::DegreeTooSmall(0));
    }
    let all = &p.coeffs()[..=top];
    let zeros = all.iter().take_while(|c| c.is_zero()).count();
    let coeffs = &all[zeros..];
    let degree = coeffs.len() - 1;
    let mut roots = vec![C64::zero(); zeros];
    match degree {
        0 => return Ok(roots),
        1 => {
            roots.push(-coeffs[0] / coeffs[1]);
            return Ok(roots);
        }
        _ => {}
    }

    let radius = Float::powf(
        coeffs[0].norm() / coeffs[degree].norm(),
        1.0 / degree as f64,
    );
    let mut z: Vec<C64> = (0..degree)
        .map(|k| C64::from_polar(radius, TAU * k as f64 / degree as f64 + 0.4))
        .collect();
    let mut done = vec![false; degree];
    let tol = 4.0 * degree as f64 * f64::EPSILON;
    for _ in 0..MAX_SWEEPS {
        for k in 0..degree {
            if done[k] {
                continue;
            }
            let (ratio, backward) = newton_ratio(coeffs, z[k]);
            if backward <= tol || !ratio.is_finite() {
                done[k] = true;
                continue;
            }
            let repulsion: C64 = (0..degree)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                done[k] = true;
                continue;
            }
            z[k] -= step;
            if step.norm() <= f64::EPSILON * z[k].norm() {
                done[k] = true;
            }
        }
        if done.iter().all(|&d| d) {
            roots.extend(z);
            return Ok(roots);
        }
    }
    Err(Error::NonConvergence { sweeps: MAX_SWEEPS })
}

/// Groups values whose single-linkage distance is at most `radius`; each
/// group is reported by its mean and size.
pub fn cluster(values: &[C64], radius: f64) -> Vec<(C64, usize)> {
    let count = values.len();
    let mut label: Vec<usize> = (0..count).collect();
    fn find(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..count {
        for j in i + 1..count {
            if (values[i] - values[j]).norm() <= radius {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<(usize, C64, usize)> = Vec::new();
    for (i, &value) in values.iter().enumerate() {
        let root = find(&mut label, i);
        match groups.iter_mut().find(|g| g.0 == root) {
            Some(g) => {
                g.1 += value;
                g.2 += 1;
            }
            None => groups.push((root, value, 1)),
        }
    }
    groups
        .into_iter()
        .map(|(_, sum, k)| (sum / k as f64, k))
        .collect()
}
