//! Clique separators, c-inseparability, maximal c-atoms, atom trees and the
//! decomposition into bags without clique separators.

use crate::error::{Error, Result};
use crate::graph::{intersect_sorted, is_subset_sorted, sorted, ColoredGraph, Vertex, COLOR_EDGE};
use crate::treedec::{root_at_center, RootedTreeDecomposition, UnrootedTreeDecomposition};

/// The maximal c-atoms of a graph, as sorted vertex sets in sorted order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomFamily {
    pub atoms: Vec<Vec<Vertex>>,
    pub c: usize,
}

/// All cliques with at most `c` vertices, including the empty one, each sorted.
pub fn cliques_up_to(g: &ColoredGraph, c: usize) -> Vec<Vec<Vertex>> {
    fn grow(
        g: &ColoredGraph,
        c: usize,
        current: &mut Vec<Vertex>,
        cands: &[Vertex],
        out: &mut Vec<Vec<Vertex>>,
    ) {
        out.push(current.clone());
        if current.len() == c {
            return;
        }
        for (i, &v) in cands.iter().enumerate() {
            let next: Vec<Vertex> = cands[i + 1..]
                .iter()
                .copied()
                .filter(|&w| g.is_adjacent(v, w))
                .collect();
            current.push(v);
            grow(g, c, current, &next, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    grow(g, c, &mut Vec::new(), g.vertices(), &mut out);
    out
}

/// Cliques with at most `c` vertices whose removal leaves at least two components.
pub fn clique_separators(g: &ColoredGraph, c: usize) -> Vec<Vec<Vertex>> {
    let mut seps: Vec<Vec<Vertex>> = cliques_up_to(g, c)
        .into_iter()
        .filter(|cl| g.components(cl).len() >= 2)
        .collect();
    seps.sort();
    seps
}

/// Clique separators with at most `c` vertices that are inclusion-minimal
/// among the cliques separating some pair `x, y`.
pub fn minimum_clique_separators(g: &ColoredGraph, c: usize) -> Vec<Vec<Vertex>> {
    let all = clique_separators(g, c);
    let separates = |t: &[Vertex], x: Vertex, y: Vertex| {
        g.components(t)
            .iter()
            .all(|comp| !(comp.contains(&x) && comp.contains(&y)))
    };
    all.iter()
        .filter(|s| {
            let subs: Vec<&Vec<Vertex>> = all
                .iter()
                .filter(|t| t.len() < s.len() && is_subset_sorted(t, s))
                .collect();
            // components of G - S are connected in G - T for T ⊆ S, so one
            // representative per component suffices
            let reps: Vec<Vertex> = g.components(s).iter().map(|comp| comp[0]).collect();
            reps.iter().enumerate().any(|(i, &x)| {
                reps[i + 1..]
                    .iter()
                    .any(|&y| !subs.iter().any(|t| separates(t, x, y)))
            })
        })
        .cloned()
        .collect()
}

/// True iff `g` has no clique separator of any size.
pub fn has_clique_separator(g: &ColoredGraph) -> bool {
    !clique_separators(g, g.n()).is_empty()
}

/// True iff `g` has no clique separator with at most `c` vertices.
pub fn is_c_atom(g: &ColoredGraph, c: usize) -> bool {
    g.n() > 0 && clique_separators(g, c).is_empty()
}

/// Pairwise c-inseparability over local indices.
fn inseparability(g: &ColoredGraph, c: usize) -> Vec<Vec<bool>> {
    let n = g.n();
    let mut insep = vec![vec![true; n]; n];
    for sep in clique_separators(g, c) {
        let comps = g.components(&sep);
        for (i, a) in comps.iter().enumerate() {
            for b in &comps[i + 1..] {
                for &u in a {
                    for &v in b {
                        let (x, y) = (g.local(u).unwrap(), g.local(v).unwrap());
                        insep[x][y] = false;
                        insep[y][x] = false;
                    }
                }
            }
        }
    }
    insep
}

/// True iff no clique with at most `c` vertices avoiding `u` and `v`
/// separates them.
pub fn is_c_inseparable(g: &ColoredGraph, u: Vertex, v: Vertex, c: usize) -> Result<bool> {
    let (a, b) = (g.require(u)?, g.require(v)?);
    if a == b {
        return Err(Error::domain(
            "c-inseparability requires two distinct vertices",
        ));
    }
    if g.is_adjacent(u, v) {
        return Ok(true);
    }
    Ok(!cliques_up_to(g, c).iter().any(|cl| {
        cl.binary_search(&u).is_err() && cl.binary_search(&v).is_err() && g.separates(cl, u, v)
    }))
}

/// True iff every pair of `set` is c-inseparable.
pub fn is_c_inseparable_set(g: &ColoredGraph, set: &[Vertex], c: usize) -> bool {
    let insep = inseparability(g, c);
    set_inseparable(g, &insep, set)
}

fn set_inseparable(g: &ColoredGraph, insep: &[Vec<bool>], set: &[Vertex]) -> bool {
    let local: Vec<usize> = set
        .iter()
        .map(|&v| g.local(v).expect("vertex of g"))
        .collect();
    local
        .iter()
        .enumerate()
        .all(|(i, &a)| local[i + 1..].iter().all(|&b| insep[a][b]))
}

/// The maximal c-inseparable sets, found in two phases: sets with at most `c`
/// vertices are tested for maximality directly, and every c-inseparable set
/// `I` with `c + 1` vertices yields `{a | I ∪ {a} is c-inseparable}`.
pub fn maximal_c_atoms(g: &ColoredGraph, c: usize) -> AtomFamily {
    let n = g.n();
    let insep = inseparability(g, c);
    let mut atoms: Vec<Vec<Vertex>> = Vec::new();

    // sets of size ≤ c are cliques of the inseparability relation
    let mut small = Vec::new();
    inseparable_sets(
        &insep,
        c,
        &mut Vec::new(),
        &(0..n).collect::<Vec<_>>(),
        &mut |s| {
            if s.len() <= c {
                small.push(s.to_vec());
            }
        },
    );
    for s in small {
        let extendable = (0..n).any(|a| !s.contains(&a) && s.iter().all(|&b| insep[a][b]));
        if !extendable && !s.is_empty() {
            atoms.push(sorted(s.iter().map(|&a| g.id(a)).collect()));
        }
    }
    if n == 0 {
        return AtomFamily { atoms, c };
    }

    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut seeds = Vec::new();
    inseparable_sets(
        &insep,
        c + 1,
        &mut Vec::new(),
        &(0..n).collect::<Vec<_>>(),
        &mut |s| {
            if s.len() == c + 1 {
                seeds.push(s.to_vec());
            }
        },
    );
    for seed in seeds {
        if found
            .iter()
            .any(|f| seed.iter().all(|x| f.binary_search(x).is_ok()))
        {
            continue;
        }
        let atom: Vec<usize> = (0..n)
            .filter(|&a| seed.iter().all(|&b| a == b || insep[a][b]))
            .collect();
        found.push(atom);
    }
    atoms.extend(
        found
            .into_iter()
            .map(|a| sorted(a.into_iter().map(|x| g.id(x)).collect())),
    );
    atoms.sort();
    atoms.dedup();
    AtomFamily { atoms, c }
}

fn inseparable_sets(
    insep: &[Vec<bool>],
    max: usize,
    current: &mut Vec<usize>,
    cands: &[usize],
    emit: &mut impl FnMut(&[usize]),
) {
    emit(current);
    if current.len() == max {
        return;
    }
    for (i, &v) in cands.iter().enumerate() {
        let next: Vec<usize> = cands[i + 1..]
            .iter()
            .copied()
            .filter(|&w| insep[v][w])
            .collect();
        current.push(v);
        inseparable_sets(insep, max, current, &next, emit);
        current.pop();
    }
}

/// `G^c`: every maximal c-atom turned into a clique (new edges colored 1).
pub fn chordal_completion_c(g: &ColoredGraph, c: usize) -> ColoredGraph {
    let mut out = g.clone();
    for atom in maximal_c_atoms(g, c).atoms {
        for (i, &u) in atom.iter().enumerate() {
            for &v in &atom[i + 1..] {
                if !out.is_adjacent(u, v) {
                    out.set_color(u, v, COLOR_EDGE);
                }
            }
        }
    }
    out
}

/// The atom tree `T_c(G)` of a (c-1)-atom: maximal c-atoms and minimum clique
/// separators with at most `c` vertices, a separator joined to every atom
/// containing it, rooted at the center.
pub fn atom_tree(g: &ColoredGraph, c: usize) -> Result<RootedTreeDecomposition> {
    if c == 0 {
        return Err(Error::domain("atom trees need c ≥ 1"));
    }
    if !is_c_atom(g, c - 1) {
        return Err(Error::contract(format!("graph is not a {}-atom", c - 1)));
    }
    let atoms = maximal_c_atoms(g, c).atoms;
    let seps = minimum_clique_separators(g, c);
    let mut bags = atoms.clone();
    bags.extend(seps.iter().cloned());
    let mut edges = Vec::new();
    for (j, s) in seps.iter().enumerate() {
        for (i, a) in atoms.iter().enumerate() {
            if is_subset_sorted(s, a) {
                edges.push((i, atoms.len() + j));
            }
        }
    }
    if edges.len() + 1 != bags.len() {
        return Err(Error::contract("atoms and separators do not form a tree"));
    }
    let tree = root_at_center(&UnrootedTreeDecomposition { bags, edges })
        .map_err(|_| Error::contract("atoms and separators do not form a tree"))?;
    Ok(tree)
}

/// A decomposition of a connected graph of tree width at most `k` whose bags
/// have no clique separators and whose adhesion sets are cliques.
pub fn clique_free_decomposition(g: &ColoredGraph, k: usize) -> Result<RootedTreeDecomposition> {
    if g.n() == 0 || !g.is_connected() {
        return Err(Error::contract(
            "clique-free decomposition needs a connected, nonempty graph",
        ));
    }
    decompose(g, 0, k + 1)
}

fn decompose(h: &ColoredGraph, d: usize, last: usize) -> Result<RootedTreeDecomposition> {
    if d >= last || h.n() <= 1 {
        return Ok(RootedTreeDecomposition::single_bag(h.vertices().to_vec()));
    }
    let outer = atom_tree(h, d + 1)?;
    if outer.len() == 1 {
        return decompose(h, d + 1, last);
    }
    let inner: Vec<RootedTreeDecomposition> = outer
        .bags
        .iter()
        .map(|a| decompose(&h.induced(a), d + 1, last))
        .collect::<Result<_>>()?;

    // nodes are (outer node, inner node) pairs
    let mut nodes: Vec<((usize, usize), Vec<Vertex>)> = Vec::new();
    let mut edges = Vec::new();
    for (a, dec) in inner.iter().enumerate() {
        for (b, bag) in dec.bags.iter().enumerate() {
            nodes.push(((a, b), bag.clone()));
            if let Some(p) = dec.parent[b] {
                edges.push(((a, b), (a, p)));
            }
        }
    }
    for (a1, p) in outer.parent.iter().enumerate() {
        let Some(a2) = *p else { continue };
        let shared = intersect_sorted(&outer.bags[a1], &outer.bags[a2]);
        let b1 = inner[a1]
            .highest_containing(&shared)
            .ok_or_else(|| Error::contract("no bag contains the atom intersection"))?;
        let b2 = inner[a2]
            .highest_containing(&shared)
            .ok_or_else(|| Error::contract("no bag contains the atom intersection"))?;
        edges.push(((a1, b1), (a2, b2)));
    }
    let t = crate::treedec::unrooted_from_keys(&nodes, &edges);
    root_at_center(&t)
}
