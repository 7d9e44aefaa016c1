//! Exhaustive oracles that only rely on the graph type.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, Vertex};

/// Largest graph the isomorphism oracle accepts.
pub const ISOMORPHISM_ORACLE_LIMIT: usize = 16;

/// Largest graph the branch-and-bound tree width oracle accepts.
pub const BRANCH_AND_BOUND_LIMIT: usize = 14;

/// A color-preserving bijection `g → h`, found by backtracking, or `None`.
pub fn brute_force_isomorphic(
    g: &ColoredGraph,
    h: &ColoredGraph,
) -> Result<Option<Vec<(Vertex, Vertex)>>> {
    brute_force_isomorphic_respecting(g, &[], h, &[])
}

/// As [`brute_force_isomorphic`], additionally mapping `sigma[i]` to `tau[i]`.
pub fn brute_force_isomorphic_respecting(
    g: &ColoredGraph,
    sigma: &[Vertex],
    h: &ColoredGraph,
    tau: &[Vertex],
) -> Result<Option<Vec<(Vertex, Vertex)>>> {
    let n = g.n();
    if n.max(h.n()) > ISOMORPHISM_ORACLE_LIMIT {
        return Err(Error::capacity(format!(
            "isomorphism oracle is limited to {ISOMORPHISM_ORACLE_LIMIT} vertices"
        )));
    }
    if n != h.n() || sigma.len() != tau.len() {
        return Ok(None);
    }
    let profile = |x: &ColoredGraph, v: Vertex| {
        let mut p: Vec<i32> = x
            .vertices()
            .iter()
            .filter(|&&w| w != v)
            .map(|&w| x.col(v, w))
            .collect();
        p.sort_unstable();
        p
    };
    let gv = g.vertices().to_vec();
    let hv = h.vertices().to_vec();
    let gp: HashMap<Vertex, Vec<i32>> = gv.iter().map(|&v| (v, profile(g, v))).collect();
    let hp: HashMap<Vertex, Vec<i32>> = hv.iter().map(|&v| (v, profile(h, v))).collect();

    // fixed pairs first, then by decreasing degree
    let mut order: Vec<Vertex> = Vec::new();
    for &v in sigma {
        if !order.contains(&v) {
            order.push(v);
        }
    }
    let mut rest: Vec<Vertex> = gv.iter().copied().filter(|v| !order.contains(v)).collect();
    rest.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    order.extend(rest);

    let mut forced: HashMap<Vertex, Vertex> = HashMap::new();
    for (&a, &b) in sigma.iter().zip(tau) {
        if !g.contains(a) || !h.contains(b) {
            return Ok(None);
        }
        match forced.insert(a, b) {
            Some(prev) if prev != b => return Ok(None),
            _ => {}
        }
    }

    struct Search<'a> {
        g: &'a ColoredGraph,
        h: &'a ColoredGraph,
        order: Vec<Vertex>,
        hv: Vec<Vertex>,
        gp: HashMap<Vertex, Vec<i32>>,
        hp: HashMap<Vertex, Vec<i32>>,
        forced: HashMap<Vertex, Vertex>,
        map: Vec<(Vertex, Vertex)>,
        used: Vec<bool>,
    }

    impl Search<'_> {
        fn run(&mut self, depth: usize) -> bool {
            if depth == self.order.len() {
                return true;
            }
            let a = self.order[depth];
            let cands: Vec<usize> = match self.forced.get(&a) {
                Some(&b) => vec![self.hv.binary_search(&b).expect("vertex of h")],
                None => (0..self.hv.len()).collect(),
            };
            for bi in cands {
                if self.used[bi] {
                    continue;
                }
                let b = self.hv[bi];
                if self.gp[&a] != self.hp[&b] {
                    continue;
                }
                if !self
                    .map
                    .iter()
                    .all(|&(x, y)| self.g.col(a, x) == self.h.col(b, y))
                {
                    continue;
                }
                self.used[bi] = true;
                self.map.push((a, b));
                if self.run(depth + 1) {
                    return true;
                }
                self.map.pop();
                self.used[bi] = false;
            }
            false
        }
    }

    let mut s = Search {
        g,
        h,
        order,
        used: vec![false; hv.len()],
        hv,
        gp,
        hp,
        forced,
        map: Vec::new(),
    };
    if s.run(0) {
        let mut m = s.map;
        m.sort_unstable();
        Ok(Some(m))
    } else {
        Ok(None)
    }
}

/// Tree width by branch and bound over elimination orderings.
pub fn treewidth_branch_and_bound(g: &ColoredGraph) -> Result<usize> {
    let n = g.n();
    if n > BRANCH_AND_BOUND_LIMIT {
        return Err(Error::capacity(format!(
            "branch-and-bound tree width is limited to {BRANCH_AND_BOUND_LIMIT} vertices"
        )));
    }
    if n == 0 {
        return Ok(0);
    }
    let vs = g.vertices();
    let adj: Vec<u32> = vs
        .iter()
        .map(|&v| {
            vs.iter()
                .enumerate()
                .filter(|&(_, &w)| g.is_adjacent(v, w))
                .fold(0u32, |m, (j, _)| m | (1 << j))
        })
        .collect();

    struct Bb {
        n: usize,
        best: usize,
        seen: HashMap<u32, usize>,
    }

    impl Bb {
        fn go(&mut self, adj: &[u32], alive: u32, width: usize) {
            if width >= self.best {
                return;
            }
            if alive.count_ones() as usize <= width + 1 {
                self.best = width;
                return;
            }
            if let Some(&w) = self.seen.get(&alive) {
                if w <= width {
                    return;
                }
            }
            self.seen.insert(alive, width);
            let mut cands: Vec<(usize, usize)> = (0..self.n)
                .filter(|&v| alive & (1 << v) != 0)
                .map(|v| ((adj[v] & alive).count_ones() as usize, v))
                .collect();
            cands.sort_unstable();
            for (deg, v) in cands {
                let w = width.max(deg);
                if w >= self.best {
                    continue;
                }
                let nb = adj[v] & alive;
                let mut next = adj.to_vec();
                let mut bits = nb;
                while bits != 0 {
                    let x = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    next[x] |= nb & !(1 << x);
                }
                self.go(&next, alive & !(1 << v), w);
            }
        }
    }

    let mut bb = Bb {
        n,
        best: n - 1,
        seen: HashMap::new(),
    };
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    bb.go(&adj, all, 0);
    Ok(bb.best)
}
