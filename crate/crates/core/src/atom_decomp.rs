//! Bounded-width decompositions of improved graphs without clique separators,
//! anchored at a non-edge, built from interface separators and descriptor
//! decompositions.

use crate::error::{Error, Result};
use crate::graph::{
    difference_sorted, is_subset_sorted, sorted, union_sorted, ColoredGraph, Vertex,
};
use crate::treedec::RootedTreeDecomposition;

/// Threshold functions `small(k) = small_factor·(k+1)` and
/// `medium(k) = medium_factor·(k+1)³`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Thresholds {
    pub small_factor: usize,
    pub medium_factor: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            small_factor: 2,
            medium_factor: 8,
        }
    }
}

/// Number of times the thresholds are doubled after a contract failure.
pub const THRESHOLD_RETRIES: usize = 3;

impl Thresholds {
    pub fn small(&self, k: usize) -> usize {
        self.small_factor * (k + 1)
    }

    pub fn medium(&self, k: usize) -> usize {
        self.medium_factor * (k + 1).pow(3)
    }

    pub fn doubled(self) -> Self {
        Thresholds {
            small_factor: self.small_factor * 2,
            medium_factor: self.medium_factor * 2,
        }
    }
}

/// A subgraph `H` with interface `I`: `H - I` is connected and `I` is exactly
/// the neighborhood of `V(H) \ I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphWithInterface {
    pub graph: ColoredGraph,
    pub interface: Vec<Vertex>,
}

impl GraphWithInterface {
    pub fn new(graph: ColoredGraph, interface: Vec<Vertex>) -> Result<Self> {
        let interface = sorted(interface);
        if !is_subset_sorted(&interface, graph.vertices()) {
            return Err(Error::contract("interface is not a subset of the graph"));
        }
        let gi = GraphWithInterface { graph, interface };
        let interior = gi.interior();
        if gi.graph.components(&gi.interface).len() > 1 {
            return Err(Error::contract(format!(
                "interior of interface {:?} is disconnected",
                gi.interface
            )));
        }
        if gi.graph.neighborhood(&interior) != gi.interface && !interior.is_empty() {
            return Err(Error::contract(format!(
                "interface {:?} is not the neighborhood of its interior",
                gi.interface
            )));
        }
        Ok(gi)
    }

    pub fn interior(&self) -> Vec<Vertex> {
        difference_sorted(self.graph.vertices(), &self.interface)
    }
}

/// `sep_s(H, I)`: for `|I| ≤ s` the interface plus the leftmost separators
/// of all ordered pairs with connectivity at most `tw`; otherwise the
/// interface plus the leftmost separators of all disjoint `(tw+1)`-subsets
/// with set connectivity at most `tw`.
pub fn sep_s(gi: &GraphWithInterface, s: usize, tw: usize) -> Result<Vec<Vertex>> {
    let h = &gi.graph;
    let iface = &gi.interface;
    let mut out = iface.clone();
    if iface.len() <= s {
        for (i, &x) in iface.iter().enumerate() {
            for &y in &iface[i + 1..] {
                // leftmost separators are not symmetric: take both orientations
                if h.connectivity(x, y)?.at_most(tw) {
                    out = union_sorted(&out, &h.leftmost_vertex_separator(x, y)?);
                    out = union_sorted(&out, &h.leftmost_vertex_separator(y, x)?);
                }
            }
        }
    } else {
        let size = tw + 1;
        for xs in subsets(iface, size) {
            let rest = difference_sorted(iface, &xs);
            for ys in subsets(&rest, size) {
                if h.connectivity_sets(&xs, &ys)? <= tw {
                    out = union_sorted(&out, &h.leftmost_min_separator(&xs, &ys)?);
                }
            }
        }
    }
    Ok(out)
}

fn subsets(set: &[Vertex], size: usize) -> Vec<Vec<Vertex>> {
    use itertools::Itertools;
    set.iter().copied().combinations(size).collect()
}

/// One graph with interface per component `C` of `H - S`:
/// `(H[C ∪ N(C)], N(C))`.
pub fn split_at(gi: &GraphWithInterface, s: &[Vertex]) -> Result<Vec<GraphWithInterface>> {
    let s = sorted(s.to_vec());
    if !is_subset_sorted(&gi.interface, &s) {
        return Err(Error::contract("split set must contain the interface"));
    }
    gi.graph
        .components(&s)
        .into_iter()
        .map(|c| {
            let nb = gi.graph.neighborhood(&c);
            GraphWithInterface::new(gi.graph.induced(&union_sorted(&c, &nb)), nb)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescriptorNode {
    pub label: GraphWithInterface,
    pub children: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescriptorDecomposition {
    pub nodes: Vec<DescriptorNode>,
    pub root: usize,
    /// Largest separator `|S|` produced during construction.
    pub max_separator: usize,
}

fn check_pair(g: &ColoredGraph, uv: (Vertex, Vertex)) -> Result<()> {
    let (u, v) = uv;
    g.require(u)?;
    g.require(v)?;
    if u == v || g.is_adjacent(u, v) {
        return Err(Error::contract(format!("{{{u},{v}}} is not a non-edge")));
    }
    Ok(())
}

/// Builds the descriptor decomposition rooted at `(G, ∅)` for the non-edge
/// `uv` with fixed thresholds.
pub fn descriptor_decomposition(
    g: &ColoredGraph,
    uv: (Vertex, Vertex),
    k: usize,
    th: Thresholds,
) -> Result<DescriptorDecomposition> {
    check_pair(g, uv)?;
    if !g.is_connected() {
        return Err(Error::contract(
            "descriptor decomposition needs a connected graph",
        ));
    }
    let small = th.small(k);
    let medium = th.medium(k);
    let pair = sorted(vec![uv.0, uv.1]);
    let mut nodes = vec![DescriptorNode {
        label: GraphWithInterface::new(g.clone(), Vec::new())?,
        children: Vec::new(),
    }];
    let mut max_separator = 0;
    let mut stack = Vec::new();
    for c in g.components(&pair) {
        let label = GraphWithInterface::new(g.induced(&union_sorted(&c, &pair)), pair.clone())?;
        nodes.push(DescriptorNode {
            label,
            children: Vec::new(),
        });
        let id = nodes.len() - 1;
        nodes[0].children.push(id);
        stack.push(id);
    }
    while let Some(n) = stack.pop() {
        let label = nodes[n].label.clone();
        if label.interior().is_empty() {
            continue;
        }
        let s = sep_s(&label, small, k)?;
        if is_subset_sorted(&s, &label.interface) {
            return Err(Error::contract(format!(
                "separator of node with interface {:?} makes no progress",
                label.interface
            )));
        }
        max_separator = max_separator.max(s.len());
        let pieces = split_at(&label, &s)?;
        for p in &pieces {
            if p.interface.len() > medium {
                return Err(Error::contract(format!(
                    "child interface {:?} exceeds medium bound {medium}",
                    p.interface
                )));
            }
            if g.is_clique(&p.interface) {
                return Err(Error::contract(format!(
                    "child interface {:?} is a clique",
                    p.interface
                )));
            }
        }
        for p in pieces {
            nodes.push(DescriptorNode {
                label: p,
                children: Vec::new(),
            });
            let id = nodes.len() - 1;
            nodes[n].children.push(id);
            stack.push(id);
        }
        nodes.push(DescriptorNode {
            label: GraphWithInterface {
                graph: g.induced(&s),
                interface: s,
            },
            children: Vec::new(),
        });
        let id = nodes.len() - 1;
        nodes[n].children.push(id);
    }
    Ok(DescriptorDecomposition {
        nodes,
        root: 0,
        max_separator,
    })
}

/// Bag of a node: its interface plus every vertex lying in at least two of
/// the interfaces of the node and its children.
pub fn descriptor_to_treedec(dd: &DescriptorDecomposition) -> Result<RootedTreeDecomposition> {
    let m = dd.nodes.len();
    let mut bags = Vec::with_capacity(m);
    let mut parent = vec![None; m];
    for (n, node) in dd.nodes.iter().enumerate() {
        let mut bag = node.label.interface.clone();
        let mut all: Vec<&[Vertex]> = vec![&node.label.interface];
        for &c in &node.children {
            if c >= m || parent[c].is_some() {
                return Err(Error::contract("descriptor edges do not form a tree"));
            }
            parent[c] = Some(n);
            all.push(&dd.nodes[c].label.interface);
        }
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                bag = union_sorted(&bag, &crate::graph::intersect_sorted(a, b));
            }
        }
        bags.push(bag);
    }
    Ok(RootedTreeDecomposition {
        bags,
        parent,
        root: dd.root,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedDecomposition {
    pub decomposition: RootedTreeDecomposition,
    /// Realized width bound `k'`.
    pub width: usize,
    pub max_separator: usize,
    /// Thresholds that produced the decomposition.
    pub thresholds: Thresholds,
}

/// Width-bounded decomposition of an improved graph without clique separators,
/// anchored at the non-edge `uv`. Contract failures are retried with doubled
/// thresholds.
pub fn atom_bounded_decomposition(
    g: &ColoredGraph,
    uv: (Vertex, Vertex),
    k: usize,
    th: Thresholds,
) -> Result<BoundedDecomposition> {
    check_pair(g, uv)?;
    let mut th = th;
    let mut last = None;
    for _ in 0..=THRESHOLD_RETRIES {
        match descriptor_decomposition(g, uv, k, th) {
            Ok(dd) => {
                let decomposition = descriptor_to_treedec(&dd)?;
                if let Err(v) = decomposition.validate(g) {
                    return Err(Error::contract(format!(
                        "bounded decomposition is invalid: {v}"
                    )));
                }
                return Ok(BoundedDecomposition {
                    width: decomposition.width(),
                    decomposition,
                    max_separator: dd.max_separator,
                    thresholds: th,
                });
            }
            Err(Error::Contract(msg)) => {
                last = Some(msg);
                th = th.doubled();
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::contract(format!(
        "bounded decomposition failed after {THRESHOLD_RETRIES} retries: {}",
        last.unwrap_or_default()
    )))
}
