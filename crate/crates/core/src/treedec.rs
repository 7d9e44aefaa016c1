//! Rooted tree decompositions, validation, rooting at the tree center,
//! exact tree width for small graphs and the improvement operator.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{intersect_sorted, sorted, ColoredGraph, Vertex, COLOR_EDGE, COLOR_IMPROVEMENT};

/// Largest graph [`treewidth_exact`] accepts by default.
pub const TREEWIDTH_ORACLE_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootedTreeDecomposition {
    /// Sorted bag of every node.
    pub bags: Vec<Vec<Vertex>>,
    /// Parent of every node; `None` exactly for the root.
    pub parent: Vec<Option<usize>>,
    pub root: usize,
}

/// A tree decomposition without a designated root, given by its tree edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnrootedTreeDecomposition {
    pub bags: Vec<Vec<Vertex>>,
    pub edges: Vec<(usize, usize)>,
}

/// First violated defining property of a tree decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotATree,
    UnknownVertex(Vertex),
    /// No bag contains the vertex.
    MissingVertex(Vertex),
    /// The bags containing the vertex do not form a connected subtree.
    Disconnected(Vertex),
    /// No bag contains both endpoints of the edge.
    UncoveredEdge(Vertex, Vertex),
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NotATree => write!(f, "parent map does not form a tree"),
            Violation::UnknownVertex(v) => write!(f, "bag mentions unknown vertex {v}"),
            Violation::MissingVertex(v) => {
                write!(f, "connectedness violated: vertex {v} is in no bag")
            }
            Violation::Disconnected(v) => write!(
                f,
                "connectedness violated: bags of vertex {v} are disconnected"
            ),
            Violation::UncoveredEdge(u, v) => {
                write!(f, "covering violated: edge {{{u},{v}}} is in no bag")
            }
        }
    }
}

impl RootedTreeDecomposition {
    pub fn single_bag(bag: Vec<Vertex>) -> Self {
        RootedTreeDecomposition {
            bags: vec![sorted(bag)],
            parent: vec![None],
            root: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Maximum bag size minus one (`-1` never occurs: an empty decomposition
    /// has width 0 by convention).
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(1)
            .saturating_sub(1)
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.len()];
        for (node, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                ch[p].push(node);
            }
        }
        ch
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut nb = vec![Vec::new(); self.len()];
        for (node, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                nb[p].push(node);
                nb[node].push(p);
            }
        }
        nb
    }

    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![usize::MAX; self.len()];
        let ch = self.children();
        depth[self.root] = 0;
        let mut queue = VecDeque::from([self.root]);
        while let Some(x) = queue.pop_front() {
            for &c in &ch[x] {
                depth[c] = depth[x] + 1;
                queue.push_back(c);
            }
        }
        depth
    }

    /// Nodes in breadth-first order from the root.
    pub fn bfs_order(&self) -> Vec<usize> {
        let ch = self.children();
        let mut order = vec![self.root];
        let mut i = 0;
        while i < order.len() {
            order.extend(ch[order[i]].iter().copied());
            i += 1;
        }
        order
    }

    /// The adhesion set `B_n ∩ B_m` of a tree edge.
    pub fn adhesion(&self, n: usize, m: usize) -> Result<Vec<Vertex>> {
        if n >= self.len() || m >= self.len() {
            return Err(Error::domain(format!("unknown node {}", n.max(m))));
        }
        if self.parent[n] != Some(m) && self.parent[m] != Some(n) {
            return Err(Error::domain(format!("nodes {n} and {m} are not adjacent")));
        }
        Ok(intersect_sorted(&self.bags[n], &self.bags[m]))
    }

    /// `G[B_n]` plus a clique (colored 1) on every adhesion set of `n`.
    pub fn torso(&self, g: &ColoredGraph, n: usize) -> Result<ColoredGraph> {
        if n >= self.len() {
            return Err(Error::domain(format!("unknown node {n}")));
        }
        let mut torso = g.induced(&self.bags[n]);
        for &m in &self.neighbors()[n] {
            let adh = intersect_sorted(&self.bags[n], &self.bags[m]);
            for (i, &u) in adh.iter().enumerate() {
                for &v in &adh[i + 1..] {
                    if !torso.is_adjacent(u, v) {
                        torso.set_color(u, v, COLOR_EDGE);
                    }
                }
            }
        }
        Ok(torso)
    }

    /// The highest node (closest to the root) whose bag contains `set`.
    pub fn highest_containing(&self, set: &[Vertex]) -> Option<usize> {
        self.bfs_order()
            .into_iter()
            .find(|&n| crate::graph::is_subset_sorted(set, &self.bags[n]))
    }

    pub fn relabel(&self, f: impl Fn(Vertex) -> Vertex) -> Self {
        RootedTreeDecomposition {
            bags: self
                .bags
                .iter()
                .map(|b| sorted(b.iter().map(|&v| f(v)).collect()))
                .collect(),
            parent: self.parent.clone(),
            root: self.root,
        }
    }

    /// A representation of the rooted tree with its bags that does not depend
    /// on node numbering; two decompositions are equal up to renumbering
    /// exactly if their shapes are equal.
    pub fn shape(&self) -> TreeShape {
        let ch = self.children();
        fn build(d: &RootedTreeDecomposition, ch: &[Vec<usize>], n: usize) -> TreeShape {
            let mut children: Vec<TreeShape> = ch[n].iter().map(|&c| build(d, ch, c)).collect();
            children.sort();
            TreeShape {
                bag: d.bags[n].clone(),
                children,
            }
        }
        build(self, &ch, self.root)
    }

    pub fn validate(&self, g: &ColoredGraph) -> std::result::Result<(), Violation> {
        validate(g, self)
    }
}

/// Numbering-independent form of a rooted decomposition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeShape {
    pub bag: Vec<Vertex>,
    pub children: Vec<TreeShape>,
}

/// Checks the connectedness and covering properties, reporting the first
/// violation found.
pub fn validate(
    g: &ColoredGraph,
    d: &RootedTreeDecomposition,
) -> std::result::Result<(), Violation> {
    let m = d.len();
    if m == 0 || d.root >= m || d.parent.len() != m || d.parent[d.root].is_some() {
        return Err(Violation::NotATree);
    }
    for (node, p) in d.parent.iter().enumerate() {
        match p {
            None if node != d.root => return Err(Violation::NotATree),
            Some(p) if *p >= m => return Err(Violation::NotATree),
            _ => {}
        }
    }
    // every node must reach the root
    let order = d.bfs_order();
    if order.len() != m {
        return Err(Violation::NotATree);
    }
    for bag in &d.bags {
        for &v in bag {
            if !g.contains(v) {
                return Err(Violation::UnknownVertex(v));
            }
        }
    }
    for &v in g.vertices() {
        let holders: Vec<usize> = (0..m)
            .filter(|&n| d.bags[n].binary_search(&v).is_ok())
            .collect();
        if holders.is_empty() {
            return Err(Violation::MissingVertex(v));
        }
        // connected iff exactly one holder has its parent outside the holder set
        let tops = holders
            .iter()
            .filter(|&&n| match d.parent[n] {
                None => true,
                Some(p) => d.bags[p].binary_search(&v).is_err(),
            })
            .count();
        if tops != 1 {
            return Err(Violation::Disconnected(v));
        }
    }
    for (u, v, _) in g.edges() {
        if !d
            .bags
            .iter()
            .any(|b| b.binary_search(&u).is_ok() && b.binary_search(&v).is_ok())
        {
            return Err(Violation::UncoveredEdge(u, v));
        }
    }
    Ok(())
}

/// Roots an unrooted decomposition at the center of its tree. A central edge
/// is subdivided by a node whose bag is the intersection of its two bags.
pub fn root_at_center(t: &UnrootedTreeDecomposition) -> Result<RootedTreeDecomposition> {
    let m = t.bags.len();
    if m == 0 {
        return Err(Error::domain("cannot root an empty tree"));
    }
    if t.edges.len() != m - 1 {
        return Err(Error::contract("input is not a tree"));
    }
    let mut adj = vec![Vec::new(); m];
    for &(a, b) in &t.edges {
        if a >= m || b >= m || a == b {
            return Err(Error::contract("tree edge refers to an unknown node"));
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    // leaf stripping
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut removed = vec![false; m];
    let mut layer: Vec<usize> = (0..m).filter(|&x| degree[x] <= 1).collect();
    let mut remaining = m;
    while remaining > 2 {
        let mut next = Vec::new();
        for &x in &layer {
            removed[x] = true;
            remaining -= 1;
            for &y in &adj[x] {
                if !removed[y] {
                    degree[y] -= 1;
                    if degree[y] == 1 {
                        next.push(y);
                    }
                }
            }
        }
        layer = next;
    }
    let centers: Vec<usize> = (0..m).filter(|&x| !removed[x]).collect();
    let mut bags = t.bags.iter().cloned().map(sorted).collect::<Vec<_>>();
    let root = match centers.as_slice() {
        [c] => *c,
        [a, b] => {
            if !adj[*a].contains(b) {
                return Err(Error::contract("input is not a tree"));
            }
            let mid = bags.len();
            bags.push(intersect_sorted(&bags[*a], &bags[*b]));
            adj.push(vec![*a, *b]);
            adj[*a].retain(|x| x != b);
            adj[*b].retain(|x| x != a);
            adj[*a].push(mid);
            adj[*b].push(mid);
            mid
        }
        _ => return Err(Error::contract("input is not a tree")),
    };
    let total = bags.len();
    let mut parent = vec![None; total];
    let mut seen = vec![false; total];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some(x);
                queue.push_back(y);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::contract("input is not a tree"));
    }
    Ok(RootedTreeDecomposition { bags, parent, root })
}

/// Exact tree width by dynamic programming over vertex subsets, using the
/// elimination-ordering characterization
/// `TW(S) = min_{v ∈ S} max(TW(S \ {v}), |Q(S \ {v}, v)|)`, where `Q(S, v)`
/// are the vertices outside `S ∪ {v}` reachable from `v` through `S`.
pub fn treewidth_exact(g: &ColoredGraph) -> Result<usize> {
    treewidth_exact_with_limit(g, TREEWIDTH_ORACLE_LIMIT)
}

pub fn treewidth_exact_with_limit(g: &ColoredGraph, limit: usize) -> Result<usize> {
    let n = g.n();
    if n > limit || n >= 32 {
        return Err(Error::capacity(format!(
            "exact tree width is limited to {limit} vertices (got {n}); pass k explicitly"
        )));
    }
    if n == 0 {
        return Ok(0);
    }
    let adj: Vec<u32> = (0..n)
        .map(|a| g.adj_local(a).iter().fold(0u32, |m, &b| m | (1 << b)))
        .collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let q = |s: u32, v: usize| -> u32 {
        // vertices outside s ∪ {v} adjacent to the component of v in G[s ∪ {v}]
        let mut reach = 1u32 << v;
        let mut frontier = reach;
        while frontier != 0 {
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let x = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= adj[x] & s;
            }
            next &= !reach;
            reach |= next;
            frontier = next;
        }
        let mut out = 0u32;
        let mut r = reach;
        while r != 0 {
            let x = r.trailing_zeros() as usize;
            r &= r - 1;
            out |= adj[x];
        }
        (out & !s & !(1u32 << v)).count_ones()
    };
    let size = 1usize << n;
    let mut tw = vec![u8::MAX; size];
    tw[0] = 0;
    for s in 1..size as u64 {
        let s = s as u32;
        let mut best = u8::MAX;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = s & !(1 << v);
            let prev = tw[rest as usize];
            if prev >= best {
                continue;
            }
            let val = prev.max(q(rest, v) as u8);
            best = best.min(val);
        }
        tw[s as usize] = best;
    }
    Ok(tw[full as usize] as usize)
}

/// Shifts edge colors `≥ 2` up by one so that color 2 is free for
/// improvement edges. Isomorphisms are unaffected.
pub fn reserve_improvement_color(g: &ColoredGraph) -> ColoredGraph {
    let mut w = ColoredGraph::with_vertices(g.vertices().iter().copied());
    for (u, v, c) in g.edges() {
        let c = if c >= COLOR_IMPROVEMENT { c + 1 } else { c };
        w.add_colored_edge(u, v, c).expect("edge of g");
    }
    w
}

/// Adds an edge colored 2 between every non-adjacent pair whose
/// connectivity exceeds `k`. Original edge colors are preserved.
///
/// `k` must bound the tree width of `g`; when the graph is small enough for
/// [`treewidth_exact`] the promise is checked.
pub fn improve(g: &ColoredGraph, k: usize) -> Result<ColoredGraph> {
    if g.edges().iter().any(|&(_, _, c)| c == COLOR_IMPROVEMENT) {
        return Err(Error::contract(
            "color 2 is reserved for improvement edges; recolor the input first",
        ));
    }
    if g.n() <= 16 {
        let tw = treewidth_exact(g)?;
        if tw > k {
            return Err(Error::contract(format!(
                "tree width {tw} exceeds the promised bound {k}"
            )));
        }
    }
    Ok(improve_unchecked(g, k))
}

pub(crate) fn improve_unchecked(g: &ColoredGraph, k: usize) -> ColoredGraph {
    let mut out = g.clone();
    for (u, v) in g.non_edges() {
        if g.connectivity(u, v).expect("distinct vertices").exceeds(k) {
            out.set_color(u, v, COLOR_IMPROVEMENT);
        }
    }
    out
}

/// Builds an unrooted decomposition from node bags and an adjacency relation
/// given as pairs of node keys.
pub(crate) fn unrooted_from_keys<K: Clone + Eq + std::hash::Hash>(
    nodes: &[(K, Vec<Vertex>)],
    edges: &[(K, K)],
) -> UnrootedTreeDecomposition {
    let index: HashMap<K, usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, (k, _))| (k.clone(), i))
        .collect();
    UnrootedTreeDecomposition {
        bags: nodes.iter().map(|(_, b)| b.clone()).collect(),
        edges: edges.iter().map(|(a, b)| (index[a], index[b])).collect(),
    }
}
