//! Instance grid shared by the integration tests and the acceptance harness.

#![allow(dead_code)]

use rand::Rng;

use fiedler_core::random::{self, random_rsmp, Entries, SeededRng, Shape};
use fiedler_core::{Rsmp, SigmaSeq, C64};

/// Every shape with `n, p, m ∈ {1, 2, 3}` and `d_A, d_D ∈ {1, …, 5}`.
pub fn grid_shapes() -> impl Iterator<Item = Shape> {
    let dims = 1..=3usize;
    dims.clone().flat_map(move |n| {
        dims.clone().flat_map(move |p| {
            (1..=3usize).flat_map(move |m| {
                (1..=5usize)
                    .flat_map(move |da| (1..=5usize).map(move |dd| Shape::new(n, p, m, da, dd)))
            })
        })
    })
}

/// One integer instance in `{−3, …, 3}` per grid shape and decision sequence.
pub fn grid_instances(seed: u64) -> impl Iterator<Item = (Rsmp, SigmaSeq, SeededRng)> {
    let mut g = random::rng(seed);
    grid_shapes().flat_map(move |shape| {
        let r = random_rsmp(&mut g, shape, Entries::Integer(3));
        let child = random::rng(g.random());
        SigmaSeq::all(shape.degree())
            .map(move |s| (r.clone(), s, child.clone()))
            .collect::<Vec<_>>()
    })
}

pub fn sample_points(g: &mut SeededRng, count: usize) -> Vec<C64> {
    random::annulus_points(g, count)
}
