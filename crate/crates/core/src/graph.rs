//! Colored simple graphs and the connectivity primitives the rest of the
//! pipeline is built on.
//!
//! Vertices are identified by non-negative integers. A graph stores its
//! vertex identifiers in ascending order together with a dense color matrix,
//! so induced subgraphs keep the identifiers of the ambient graph.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

pub type Vertex = usize;

pub const COLOR_DIAGONAL: i32 = -1;
pub const COLOR_NON_EDGE: i32 = 0;
pub const COLOR_EDGE: i32 = 1;
pub const COLOR_IMPROVEMENT: i32 = 2;
pub const COLOR_MARKER: i32 = -2;

const ABSENT: u32 = u32::MAX;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ColoredGraph {
    vertices: Vec<Vertex>,
    index: Vec<u32>,
    colors: Vec<i32>,
    adj: Vec<Vec<u32>>,
}

impl fmt::Debug for ColoredGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ColoredGraph")
            .field("vertices", &self.vertices)
            .field("edges", &self.edges())
            .finish()
    }
}

/// Smallest number of vertices separating two vertices; adjacent vertices
/// cannot be separated at all.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connectivity {
    Finite(usize),
    Infinite,
}

impl Connectivity {
    pub fn at_most(self, bound: usize) -> bool {
        matches!(self, Connectivity::Finite(c) if c <= bound)
    }

    pub fn exceeds(self, bound: usize) -> bool {
        !self.at_most(bound)
    }
}

/// A pair `(A, B)` with `A ∪ B = V` and no edge between `A \ B` and `B \ A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub a: Vec<Vertex>,
    pub b: Vec<Vertex>,
}

impl Separation {
    pub fn separator(&self) -> Vec<Vertex> {
        intersect_sorted(&self.a, &self.b)
    }
}

impl ColoredGraph {
    /// Edgeless graph on `0..n`.
    pub fn new(n: usize) -> Self {
        Self::with_vertices(0..n)
    }

    /// Edgeless graph on the given identifiers (duplicates are ignored).
    pub fn with_vertices(ids: impl IntoIterator<Item = Vertex>) -> Self {
        let mut vertices: Vec<Vertex> = ids.into_iter().collect();
        vertices.sort_unstable();
        vertices.dedup();
        let n = vertices.len();
        let span = vertices.last().map_or(0, |&m| m + 1);
        let mut index = vec![ABSENT; span];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i as u32;
        }
        let mut colors = vec![COLOR_NON_EDGE; n * n];
        for i in 0..n {
            colors[i * n + i] = COLOR_DIAGONAL;
        }
        ColoredGraph {
            vertices,
            index,
            colors,
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn from_vertices_and_edges(
        ids: impl IntoIterator<Item = Vertex>,
        edges: &[(Vertex, Vertex)],
    ) -> Result<Self> {
        let mut g = Self::with_vertices(ids);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        self.add_colored_edge(u, v, COLOR_EDGE)
    }

    /// Adds (or recolors) the edge `{u, v}`. Input colors must be at least 1.
    pub fn add_colored_edge(&mut self, u: Vertex, v: Vertex, color: i32) -> Result<()> {
        if color < 1 {
            return Err(Error::domain(format!(
                "edge color {color} is reserved; input colors must be >= 1"
            )));
        }
        if u == v {
            return Err(Error::domain(format!("loop at vertex {u}")));
        }
        let (a, b) = (self.require(u)?, self.require(v)?);
        self.set_color_local(a, b, color);
        Ok(())
    }

    /// Sets the color of a pair, maintaining adjacency lists. Colors `<= 0`
    /// (other than the diagonal) denote non-edges, except for the pipeline's
    /// marker color, which is treated as a non-edge structurally as well.
    pub(crate) fn set_color_local(&mut self, a: usize, b: usize, color: i32) {
        debug_assert_ne!(a, b);
        let n = self.n();
        let was_edge = self.colors[a * n + b] >= 1;
        let is_edge = color >= 1;
        self.colors[a * n + b] = color;
        self.colors[b * n + a] = color;
        if was_edge != is_edge {
            if is_edge {
                insert_sorted(&mut self.adj[a], b as u32);
                insert_sorted(&mut self.adj[b], a as u32);
            } else {
                self.adj[a].retain(|&x| x != b as u32);
                self.adj[b].retain(|&x| x != a as u32);
            }
        }
    }

    pub(crate) fn set_color(&mut self, u: Vertex, v: Vertex, color: i32) {
        let (a, b) = (self.local(u).unwrap(), self.local(v).unwrap());
        self.set_color_local(a, b, color);
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.local(v).is_some()
    }

    pub(crate) fn local(&self, v: Vertex) -> Option<usize> {
        match self.index.get(v) {
            Some(&i) if i != ABSENT => Some(i as usize),
            _ => None,
        }
    }

    pub(crate) fn require(&self, v: Vertex) -> Result<usize> {
        self.local(v)
            .ok_or_else(|| Error::domain(format!("vertex {v} is not in the graph")))
    }

    pub(crate) fn id(&self, local: usize) -> Vertex {
        self.vertices[local]
    }

    pub(crate) fn col_local(&self, a: usize, b: usize) -> i32 {
        self.colors[a * self.n() + b]
    }

    pub(crate) fn adj_local(&self, a: usize) -> &[u32] {
        &self.adj[a]
    }

    /// The coloring function: −1 on the diagonal, the stored color on edges
    /// and 0 on non-edges.
    pub fn color(&self, u: Vertex, v: Vertex) -> Result<i32> {
        Ok(self.col_local(self.require(u)?, self.require(v)?))
    }

    /// Like [`color`](Self::color) but panics on unknown vertices.
    pub fn col(&self, u: Vertex, v: Vertex) -> i32 {
        let a = self.local(u).expect("unknown vertex");
        let b = self.local(v).expect("unknown vertex");
        self.col_local(a, b)
    }

    pub fn is_adjacent(&self, u: Vertex, v: Vertex) -> bool {
        match (self.local(u), self.local(v)) {
            (Some(a), Some(b)) => a != b && self.col_local(a, b) >= 1,
            _ => false,
        }
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        let a = self.local(v).expect("unknown vertex");
        self.adj[a].iter().map(move |&b| self.vertices[b as usize])
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[self.local(v).expect("unknown vertex")].len()
    }

    /// Edges as `(u, v, color)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex, i32)> {
        let mut out = Vec::new();
        for a in 0..self.n() {
            for &b in &self.adj[a] {
                let b = b as usize;
                if a < b {
                    out.push((self.vertices[a], self.vertices[b], self.col_local(a, b)));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Non-adjacent pairs `(u, v)` with `u < v`, sorted.
    pub fn non_edges(&self) -> Vec<(Vertex, Vertex)> {
        let n = self.n();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.col_local(a, b) < 1 {
                    out.push((self.vertices[a], self.vertices[b]));
                }
            }
        }
        out
    }

    /// The induced subgraph on `set`, keeping vertex identifiers and colors.
    pub fn induced(&self, set: &[Vertex]) -> ColoredGraph {
        let mut sub = ColoredGraph::with_vertices(set.iter().copied());
        let locals: Vec<usize> = sub
            .vertices
            .iter()
            .map(|&v| self.local(v).expect("induced on unknown vertex"))
            .collect();
        for i in 0..sub.n() {
            for j in i + 1..sub.n() {
                let c = self.col_local(locals[i], locals[j]);
                if c != COLOR_NON_EDGE {
                    sub.set_color_local(i, j, c);
                }
            }
        }
        sub
    }

    /// Applies a vertex renaming. `f` must be injective on `V(G)`.
    pub fn relabel(&self, f: impl Fn(Vertex) -> Vertex) -> ColoredGraph {
        let mut out = ColoredGraph::with_vertices(self.vertices.iter().map(|&v| f(v)));
        assert_eq!(out.n(), self.n(), "relabeling must be injective");
        for (u, v, c) in self.edges() {
            out.set_color(f(u), f(v), c);
        }
        for a in 0..self.n() {
            for b in a + 1..self.n() {
                let c = self.col_local(a, b);
                if c < COLOR_NON_EDGE {
                    out.set_color(f(self.vertices[a]), f(self.vertices[b]), c);
                }
            }
        }
        out
    }

    /// Largest color used on an edge, or `None` for edgeless graphs.
    pub fn max_edge_color(&self) -> Option<i32> {
        self.edges().into_iter().map(|(_, _, c)| c).max()
    }

    pub fn is_connected(&self) -> bool {
        self.components(&[]).len() <= 1
    }

    /// Connected components of `G - removed`, each sorted, listed by their
    /// smallest vertex.
    pub fn components(&self, removed: &[Vertex]) -> Vec<Vec<Vertex>> {
        let n = self.n();
        let mut blocked = vec![false; n];
        for &v in removed {
            if let Some(a) = self.local(v) {
                blocked[a] = true;
            }
        }
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if blocked[start] || comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(a) = queue.pop_front() {
                for &b in &self.adj[a] {
                    let b = b as usize;
                    if !blocked[b] && comp[b] == usize::MAX {
                        comp[b] = id;
                        members.push(b);
                        queue.push_back(b);
                    }
                }
            }
            members.sort_unstable();
            out.push(members.into_iter().map(|a| self.vertices[a]).collect());
        }
        out
    }

    /// Whether `x` and `y` lie in different components of `G - removed`.
    pub fn separates(&self, removed: &[Vertex], x: Vertex, y: Vertex) -> bool {
        if removed.contains(&x) || removed.contains(&y) {
            return false;
        }
        !self
            .components(removed)
            .iter()
            .any(|c| c.binary_search(&x).is_ok() && c.binary_search(&y).is_ok())
    }

    /// Neighborhood of a vertex set: vertices outside `set` adjacent to it.
    pub fn neighborhood(&self, set: &[Vertex]) -> Vec<Vertex> {
        let n = self.n();
        let mut inside = vec![false; n];
        for &v in set {
            inside[self.local(v).expect("unknown vertex")] = true;
        }
        let mut hit = vec![false; n];
        for a in 0..n {
            if inside[a] {
                for &b in &self.adj[a] {
                    if !inside[b as usize] {
                        hit[b as usize] = true;
                    }
                }
            }
        }
        (0..n)
            .filter(|&a| hit[a])
            .map(|a| self.vertices[a])
            .collect()
    }

    /// True iff `G[set]` is complete; the empty set and singletons are cliques.
    pub fn is_clique(&self, set: &[Vertex]) -> bool {
        for (i, &u) in set.iter().enumerate() {
            for &v in &set[i + 1..] {
                if u != v && !self.is_adjacent(u, v) {
                    return false;
                }
            }
        }
        true
    }

    /// `κ(x, y)`: size of a smallest vertex set (avoiding `x` and `y`) whose
    /// removal separates them, or infinity if they are adjacent.
    pub fn connectivity(&self, x: Vertex, y: Vertex) -> Result<Connectivity> {
        if x == y {
            return Err(Error::domain("connectivity requires two distinct vertices"));
        }
        let (a, b) = (self.require(x)?, self.require(y)?);
        if self.col_local(a, b) >= 1 {
            return Ok(Connectivity::Infinite);
        }
        let mut net = SplitNetwork::new(self, &[a], &[b], false);
        Ok(Connectivity::Finite(net.max_flow()))
    }

    /// `κ(X, Y)`: minimum size of a separation `(A, B)` with `X ⊆ A`, `Y ⊆ B`.
    /// Vertices of `X` and `Y` may themselves belong to the separator.
    pub fn connectivity_sets(&self, xs: &[Vertex], ys: &[Vertex]) -> Result<usize> {
        if xs.is_empty() || ys.is_empty() {
            return Err(Error::domain(
                "connectivity between sets requires nonempty sets",
            ));
        }
        let xs = self.require_all(xs)?;
        let ys = self.require_all(ys)?;
        Ok(SplitNetwork::new(self, &xs, &ys, true).max_flow())
    }

    /// `sep(X, Y)`: the separator of the unique minimum separation `(A, B)`
    /// with `X ⊆ A`, `Y ⊆ B` and inclusion-minimal `A`.
    pub fn leftmost_min_separator(&self, xs: &[Vertex], ys: &[Vertex]) -> Result<Vec<Vertex>> {
        Ok(self.leftmost_min_separation(xs, ys)?.separator())
    }

    pub fn leftmost_min_separation(&self, xs: &[Vertex], ys: &[Vertex]) -> Result<Separation> {
        let xs = self.require_all(xs)?;
        let ys = self.require_all(ys)?;
        let mut net = SplitNetwork::new(self, &xs, &ys, true);
        net.max_flow();
        Ok(net.leftmost_separation(self))
    }

    /// `sep(x, y)` for two non-adjacent vertices: the leftmost minimum
    /// separator among those avoiding both endpoints.
    pub fn leftmost_vertex_separator(&self, x: Vertex, y: Vertex) -> Result<Vec<Vertex>> {
        if x == y {
            return Err(Error::domain(
                "vertex separator requires two distinct vertices",
            ));
        }
        let (a, b) = (self.require(x)?, self.require(y)?);
        if self.col_local(a, b) >= 1 {
            return Err(Error::domain(format!(
                "vertices {x} and {y} are adjacent and cannot be separated"
            )));
        }
        let mut net = SplitNetwork::new(self, &[a], &[b], false);
        net.max_flow();
        Ok(net.leftmost_separation(self).separator())
    }

    fn require_all(&self, vs: &[Vertex]) -> Result<Vec<usize>> {
        vs.iter().map(|&v| self.require(v)).collect()
    }
}

/// Vertex-split flow network: every vertex `v` becomes `in(v) -> out(v)` with
/// unit capacity, so a minimum cut corresponds to a minimum vertex separator.
struct SplitNetwork {
    head: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<u32>,
    first: Vec<Vec<usize>>,
    source: usize,
    sink: usize,
    n: usize,
}

const INF_CAP: u32 = u32::MAX / 4;

impl SplitNetwork {
    fn new(g: &ColoredGraph, sources: &[usize], sinks: &[usize], endpoints_cuttable: bool) -> Self {
        let n = g.n();
        let mut net = SplitNetwork {
            head: Vec::new(),
            to: Vec::new(),
            cap: Vec::new(),
            first: vec![Vec::new(); 2 * n + 2],
            source: 2 * n,
            sink: 2 * n + 1,
            n,
        };
        let mut terminal = vec![false; n];
        if !endpoints_cuttable {
            for &v in sources.iter().chain(sinks) {
                terminal[v] = true;
            }
        }
        for (v, &t) in terminal.iter().enumerate() {
            let c = if t { INF_CAP } else { 1 };
            net.arc(2 * v, 2 * v + 1, c);
            for &w in &g.adj[v] {
                net.arc(2 * v + 1, 2 * w as usize, INF_CAP);
            }
        }
        for &s in sources {
            net.arc(net.source, 2 * s, INF_CAP);
        }
        for &t in sinks {
            net.arc(2 * t + 1, net.sink, INF_CAP);
        }
        net
    }

    fn arc(&mut self, from: usize, to: usize, cap: u32) {
        let id = self.to.len();
        self.head.push(from);
        self.to.push(to);
        self.cap.push(cap);
        self.first[from].push(id);
        self.head.push(to);
        self.to.push(from);
        self.cap.push(0);
        self.first[to].push(id + 1);
    }

    /// Edmonds–Karp; every augmenting path carries one unit because every
    /// path crosses a unit-capacity split arc unless it is infinite.
    fn max_flow(&mut self) -> usize {
        let mut flow = 0;
        loop {
            let mut pred = vec![usize::MAX; self.first.len()];
            let mut seen = vec![false; self.first.len()];
            seen[self.source] = true;
            let mut queue = VecDeque::from([self.source]);
            while let Some(x) = queue.pop_front() {
                if x == self.sink {
                    break;
                }
                for &e in &self.first[x] {
                    let y = self.to[e];
                    if self.cap[e] > 0 && !seen[y] {
                        seen[y] = true;
                        pred[y] = e;
                        queue.push_back(y);
                    }
                }
            }
            if !seen[self.sink] {
                return flow;
            }
            let mut bottleneck = INF_CAP;
            let mut x = self.sink;
            while x != self.source {
                let e = pred[x];
                bottleneck = bottleneck.min(self.cap[e]);
                x = self.head[e];
            }
            let mut x = self.sink;
            while x != self.source {
                let e = pred[x];
                self.cap[e] -= bottleneck;
                self.cap[e ^ 1] += bottleneck;
                x = self.head[e];
            }
            flow += bottleneck as usize;
            if flow > self.n {
                // Only reachable when a source and a sink cannot be cut apart.
                return flow;
            }
        }
    }

    fn leftmost_separation(&self, g: &ColoredGraph) -> Separation {
        let mut seen = vec![false; self.first.len()];
        seen[self.source] = true;
        let mut queue = VecDeque::from([self.source]);
        while let Some(x) = queue.pop_front() {
            for &e in &self.first[x] {
                let y = self.to[e];
                if self.cap[e] > 0 && !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        let a = (0..self.n)
            .filter(|&v| seen[2 * v])
            .map(|v| g.id(v))
            .collect();
        let b = (0..self.n)
            .filter(|&v| !seen[2 * v + 1])
            .map(|v| g.id(v))
            .collect();
        Separation { a, b }
    }
}

fn insert_sorted(list: &mut Vec<u32>, x: u32) {
    if let Err(pos) = list.binary_search(&x) {
        list.insert(pos, x);
    }
}

pub(crate) fn intersect_sorted(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub(crate) fn union_sorted(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub(crate) fn difference_sorted(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    a.iter()
        .copied()
        .filter(|v| b.binary_search(v).is_err())
        .collect()
}

pub(crate) fn is_subset_sorted(small: &[Vertex], big: &[Vertex]) -> bool {
    small.iter().all(|v| big.binary_search(v).is_ok())
}

pub(crate) fn sorted(mut v: Vec<Vertex>) -> Vec<Vertex> {
    v.sort_unstable();
    v.dedup();
    v
}
