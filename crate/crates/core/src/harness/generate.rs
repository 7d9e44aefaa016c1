//! Seeded random graphs of bounded tree width.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, Vertex};

/// A random k-tree on `0..n` with every edge kept independently with
/// probability `keep`.
pub fn random_partial_ktree(n: usize, k: usize, keep: f64, seed: u64) -> Result<ColoredGraph> {
    if n < k + 1 {
        return Err(Error::domain(format!(
            "a {k}-tree needs at least {} vertices",
            k + 1
        )));
    }
    if !(0.0..=1.0).contains(&keep) {
        return Err(Error::domain("keep probability must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..=k {
        for j in i + 1..=k {
            edges.push((i, j));
        }
    }
    let mut cliques: Vec<Vec<Vertex>> = vec![(0..=k).collect()];
    for v in k + 1..n {
        let c = cliques[rng.gen_range(0..cliques.len())].clone();
        let drop = rng.gen_range(0..c.len());
        let mut next: Vec<Vertex> = c
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != drop)
            .map(|(_, &u)| u)
            .collect();
        for &u in &next {
            edges.push((u, v));
        }
        next.push(v);
        cliques.push(next);
    }
    let kept: Vec<_> = edges.into_iter().filter(|_| rng.gen_bool(keep)).collect();
    ColoredGraph::from_edges(n, &kept)
}

/// A uniformly random permutation of `0..n`.
pub fn random_permutation(n: usize, seed: u64) -> Vec<Vertex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p: Vec<Vertex> = (0..n).collect();
    p.shuffle(&mut rng);
    p
}

/// The graph with vertex `v` renamed to `perm[v]`.
pub fn permute(g: &ColoredGraph, perm: &[Vertex]) -> ColoredGraph {
    g.relabel(|v| perm[v])
}
