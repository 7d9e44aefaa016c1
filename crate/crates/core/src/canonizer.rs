//! Canonical sequences, canons, canonical labelings and isomorphism tests for
//! graphs of bounded tree width.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::atom_decomp::Thresholds;
use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, Vertex, COLOR_EDGE};
use crate::nested::{nested_for_improved, NestedNode};
use crate::ordering::{CertEngine, CertMode, DecState, Interner, DEFAULT_PERMUTATION_CAP};
use crate::treedec::{improve, reserve_improvement_color};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CanonOptions {
    pub thresholds: Thresholds,
    pub permutation_cap: usize,
    pub certificates: CertMode,
}

impl Default for CanonOptions {
    fn default() -> Self {
        CanonOptions {
            thresholds: Thresholds::default(),
            permutation_cap: DEFAULT_PERMUTATION_CAP,
            certificates: CertMode::Minimal,
        }
    }
}

/// A canon: the color matrix of the graph in canonical vertex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canon {
    pub n: usize,
    /// Row-major `n × n` color matrix over the original colors.
    pub matrix: Vec<i32>,
    /// `order[i]` is the vertex placed at position `i`.
    pub order: Vec<Vertex>,
}

impl Canon {
    /// Canonical labeling: position of vertex `v`.
    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.order.iter().position(|&w| w == v)
    }

    /// `(vertex, position)` pairs sorted by vertex.
    pub fn labeling(&self) -> Vec<(Vertex, usize)> {
        let mut l: Vec<_> = self
            .order
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        l.sort_unstable();
        l
    }

    /// The canon as a graph on `0..n`.
    pub fn graph(&self) -> ColoredGraph {
        let mut g = ColoredGraph::new(self.n);
        for i in 0..self.n {
            for j in i + 1..self.n {
                let c = self.matrix[i * self.n + j];
                if c >= COLOR_EDGE {
                    g.add_colored_edge(i, j, c).expect("valid canon entry");
                }
            }
        }
        g
    }
}

fn matrix_of(g: &ColoredGraph, order: &[Vertex]) -> Vec<i32> {
    let mut m = Vec::with_capacity(order.len() * order.len());
    for &u in order {
        for &v in order {
            m.push(g.col(u, v));
        }
    }
    m
}

/// Canonical sequence of a connected graph of tree width at most `k`.
pub fn canonical_sequence(g: &ColoredGraph, k: usize) -> Result<Vec<Vertex>> {
    canonical_sequence_with(g, k, CanonOptions::default())
}

pub fn canonical_sequence_with(
    g: &ColoredGraph,
    k: usize,
    opts: CanonOptions,
) -> Result<Vec<Vertex>> {
    if g.n() == 0 {
        return Ok(Vec::new());
    }
    if !g.is_connected() {
        return Err(Error::contract(
            "canonical sequences are computed per connected component",
        ));
    }
    let improved = improve(&reserve_improvement_color(g), k)?;
    let nested = nested_for_improved(&improved, k, opts.thresholds)?;
    let mut it = Interner::new();
    let mut engine = CertEngine::new(&improved)
        .with_cap(opts.permutation_cap)
        .with_mode(opts.certificates);
    let mut out = Vec::with_capacity(g.n());
    emit(
        &mut engine,
        &mut it,
        &DecState::new(nested.root.clone(), Vec::new()),
        &mut out,
    )?;
    let mut seen = std::collections::HashSet::new();
    out.retain(|v| seen.insert(*v));
    if out.len() != g.n() {
        return Err(Error::contract(
            "canonical sequence does not cover every vertex",
        ));
    }
    Ok(out)
}

fn emit(
    engine: &mut CertEngine,
    it: &mut Interner,
    s: &DecState,
    out: &mut Vec<Vertex>,
) -> Result<()> {
    let node = &s.node;
    if !node.family.is_empty() {
        let refined = engine.refined(s)?;
        let mut best: Option<(u32, usize)> = None;
        for (i, r) in refined.iter().enumerate() {
            let c = engine.cert(it, r)?;
            if best.is_none_or(|(b, _)| it.compare(c, b) == Ordering::Less) {
                best = Some((c, i));
            }
        }
        let (_, i) = best.expect("nonempty family");
        return emit(engine, it, &refined[i], out);
    }
    out.extend_from_slice(&s.sigma);
    let mut children: Vec<(u32, Vertex, Arc<NestedNode>)> = Vec::with_capacity(node.children.len());
    for c in &node.children {
        let class = engine.class_cert(it, s, c)?;
        let first = c.vertices.first().copied().unwrap_or(0);
        children.push((class, first, c.clone()));
    }
    children.sort_by(|a, b| it.compare(a.0, b.0).then(a.1.cmp(&b.1)));
    for (_, _, c) in children {
        let mut best: Option<(u32, Vec<Vertex>)> = None;
        for tau in engine.candidates(it, s, &c)? {
            let t = engine.tuple_cert(it, s, &c, &tau)?;
            let better = match &best {
                None => true,
                Some((b, bt)) => it.compare(t, *b).then_with(|| tau.cmp(bt)) == Ordering::Less,
            };
            if better {
                best = Some((t, tau));
            }
        }
        let (_, tau) = best.expect("Π is never empty");
        let child = engine.child_state(s, &c, tau);
        emit(engine, it, &child, out)?;
    }
    Ok(())
}

/// Canon and canonical labeling of a graph of tree width at most `k`.
/// Components are canonized separately and ordered by size and matrix.
pub fn canon(g: &ColoredGraph, k: usize) -> Result<Canon> {
    canon_with(g, k, CanonOptions::default())
}

pub fn canon_with(g: &ColoredGraph, k: usize, opts: CanonOptions) -> Result<Canon> {
    let mut parts = Vec::new();
    for comp in g.components(&[]) {
        let sub = g.induced(&comp);
        let order = canonical_sequence_with(&sub, k, opts)?;
        let m = matrix_of(&sub, &order);
        parts.push((m, order));
    }
    parts.sort_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| a.0.cmp(&b.0)));
    let order: Vec<Vertex> = parts.into_iter().flat_map(|(_, o)| o).collect();
    Ok(Canon {
        n: order.len(),
        matrix: matrix_of(g, &order),
        order,
    })
}

/// Decides isomorphism by comparing canons; returns a verified isomorphism
/// `g → h` as `(vertex of g, vertex of h)` pairs when one exists.
pub fn isomorphic(
    g: &ColoredGraph,
    h: &ColoredGraph,
    k: usize,
) -> Result<Option<Vec<(Vertex, Vertex)>>> {
    isomorphic_with(g, h, k, CanonOptions::default())
}

pub fn isomorphic_with(
    g: &ColoredGraph,
    h: &ColoredGraph,
    k: usize,
    opts: CanonOptions,
) -> Result<Option<Vec<(Vertex, Vertex)>>> {
    let cg = canon_with(g, k, opts)?;
    let ch = canon_with(h, k, opts)?;
    if cg.n != ch.n || cg.matrix != ch.matrix {
        return Ok(None);
    }
    let mut phi: Vec<(Vertex, Vertex)> = cg
        .order
        .iter()
        .copied()
        .zip(ch.order.iter().copied())
        .collect();
    phi.sort_unstable();
    if !verify_isomorphism(g, h, &phi) {
        return Err(Error::contract(
            "composed canonical labelings are not an isomorphism",
        ));
    }
    Ok(Some(phi))
}

/// Checks that `phi` is a bijection `V(g) → V(h)` preserving every color.
pub fn verify_isomorphism(g: &ColoredGraph, h: &ColoredGraph, phi: &[(Vertex, Vertex)]) -> bool {
    if g.n() != h.n() || phi.len() != g.n() {
        return false;
    }
    let mut images: Vec<Vertex> = phi.iter().map(|&(_, b)| b).collect();
    images.sort_unstable();
    images.dedup();
    if images.len() != h.n()
        || !images.iter().all(|&v| h.contains(v))
        || !phi.iter().all(|&(a, _)| g.contains(a))
    {
        return false;
    }
    phi.iter()
        .all(|&(a, fa)| phi.iter().all(|&(b, fb)| g.col(a, b) == h.col(fa, fb)))
}
