//! Nested tree decompositions: bags carrying families of refining
//! decompositions, refinement, special children, p-boundedness and the
//! invariant construction for graphs of bounded tree width.

use std::sync::Arc;

use num_rational::Ratio;

use crate::atom_decomp::{atom_bounded_decomposition, Thresholds};
use crate::atoms::clique_free_decomposition;
use crate::error::{Error, Result};
use crate::graph::{
    intersect_sorted, is_subset_sorted, sorted, union_sorted, ColoredGraph, Vertex,
};
use crate::treedec::{improve, reserve_improvement_color, RootedTreeDecomposition, TreeShape};

/// A refining decomposition of a bag, with the non-edge it was anchored at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMember {
    pub decomposition: RootedTreeDecomposition,
    pub distinguished: Option<(Vertex, Vertex)>,
}

/// A node of a nested decomposition together with its subtree. Subtrees are
/// shared between decompositions obtained by refinement.
#[derive(Debug)]
pub struct NestedNode {
    pub bag: Vec<Vertex>,
    pub family: Vec<Arc<FamilyMember>>,
    pub children: Vec<Arc<NestedNode>>,
    /// Nested size of the subtree rooted here.
    pub size: u64,
    /// Union of the bags in the subtree, sorted.
    pub vertices: Vec<Vertex>,
}

impl NestedNode {
    pub fn new(
        bag: Vec<Vertex>,
        family: Vec<Arc<FamilyMember>>,
        children: Vec<Arc<NestedNode>>,
    ) -> Arc<Self> {
        let bag = sorted(bag);
        let own = 1 + family
            .iter()
            .map(|m| m.decomposition.len() as u64 + 1)
            .max()
            .unwrap_or(0);
        let size = own + children.iter().map(|c| c.size).sum::<u64>();
        let vertices = children
            .iter()
            .fold(bag.clone(), |acc, c| union_sorted(&acc, &c.vertices));
        Arc::new(NestedNode {
            bag,
            family,
            children,
            size,
            vertices,
        })
    }

    pub fn leaf(bag: Vec<Vertex>) -> Arc<Self> {
        Self::new(bag, Vec::new(), Vec::new())
    }

    /// Number of nodes in the subtree.
    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(|c| c.node_count()).sum::<usize>()
    }

    /// Children sorted by decreasing subtree size, ties broken by bag.
    pub fn children_by_size(&self) -> Vec<Arc<NestedNode>> {
        let mut ch = self.children.clone();
        ch.sort_by(|a, b| b.size.cmp(&a.size).then_with(|| a.bag.cmp(&b.bag)));
        ch
    }
}

#[derive(Clone, Debug)]
pub struct NestedDecomposition {
    pub root: Arc<NestedNode>,
}

/// Numbering-independent form of a nested decomposition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NestedShape {
    pub bag: Vec<Vertex>,
    pub family: Vec<(TreeShape, Option<(Vertex, Vertex)>)>,
    pub children: Vec<NestedShape>,
}

impl NestedDecomposition {
    pub fn size(&self) -> u64 {
        self.root.size
    }

    /// Nodes in preorder, each with its parent's preorder index.
    pub fn preorder(&self) -> Vec<(Arc<NestedNode>, Option<usize>)> {
        let mut out = Vec::new();
        let mut stack = vec![(self.root.clone(), None)];
        while let Some((node, parent)) = stack.pop() {
            let id = out.len();
            for c in node.children.iter().rev() {
                stack.push((c.clone(), Some(id)));
            }
            out.push((node, parent));
        }
        out
    }

    /// The underlying tree decomposition, numbered in preorder.
    pub fn base(&self) -> RootedTreeDecomposition {
        let nodes = self.preorder();
        RootedTreeDecomposition {
            bags: nodes.iter().map(|(n, _)| n.bag.clone()).collect(),
            parent: nodes.iter().map(|(_, p)| *p).collect(),
            root: 0,
        }
    }

    /// Width: per bag `|B|-1` for an empty family, otherwise the largest
    /// width in the family.
    pub fn width(&self) -> usize {
        self.preorder()
            .iter()
            .map(|(n, _)| {
                if n.family.is_empty() {
                    n.bag.len().saturating_sub(1)
                } else {
                    n.family
                        .iter()
                        .map(|m| m.decomposition.width())
                        .max()
                        .unwrap_or(0)
                }
            })
            .max()
            .unwrap_or(0)
    }

    pub fn shape(&self) -> NestedShape {
        fn build(n: &NestedNode) -> NestedShape {
            let mut family: Vec<_> = n
                .family
                .iter()
                .map(|m| (m.decomposition.shape(), m.distinguished))
                .collect();
            family.sort();
            let mut children: Vec<_> = n.children.iter().map(|c| build(c)).collect();
            children.sort();
            NestedShape {
                bag: n.bag.clone(),
                family,
                children,
            }
        }
        build(&self.root)
    }

    pub fn relabel(&self, f: &impl Fn(Vertex) -> Vertex) -> Self {
        fn build(n: &NestedNode, f: &impl Fn(Vertex) -> Vertex) -> Arc<NestedNode> {
            let family = n
                .family
                .iter()
                .map(|m| {
                    Arc::new(FamilyMember {
                        decomposition: m.decomposition.relabel(f),
                        distinguished: m.distinguished.map(|(u, v)| {
                            let (a, b) = (f(u), f(v));
                            (a.min(b), a.max(b))
                        }),
                    })
                })
                .collect();
            let children = n.children.iter().map(|c| build(c, f)).collect();
            NestedNode::new(n.bag.iter().map(|&v| f(v)).collect(), family, children)
        }
        NestedDecomposition {
            root: build(&self.root, f),
        }
    }

    /// Checks that the base is a tree decomposition of `g`, that every family
    /// member decomposes the torso of its bag, and that the nodes with empty
    /// families are either absent or form a subtree containing the root.
    pub fn validate(&self, g: &ColoredGraph) -> Result<()> {
        let base = self.base();
        base.validate(g)
            .map_err(|v| Error::contract(format!("base decomposition: {v}")))?;
        let nodes = self.preorder();
        for (i, (n, _)) in nodes.iter().enumerate() {
            let torso = base.torso(g, i)?;
            for m in &n.family {
                m.decomposition.validate(&torso).map_err(|v| {
                    Error::contract(format!("family member of bag {:?}: {v}", n.bag))
                })?;
            }
        }
        let marked: Vec<bool> = nodes.iter().map(|(n, _)| n.family.is_empty()).collect();
        if marked.iter().any(|&m| m) {
            if !marked[0] {
                return Err(Error::contract(
                    "nodes with empty families do not contain the root",
                ));
            }
            for (i, (_, p)) in nodes.iter().enumerate() {
                if let Some(p) = p {
                    if marked[i] && !marked[*p] {
                        return Err(Error::contract(
                            "nodes with empty families are not connected",
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Wraps a plain tree decomposition with the given families (indexed like its
/// nodes).
pub fn from_decomposition(
    d: &RootedTreeDecomposition,
    families: Vec<Vec<FamilyMember>>,
) -> NestedDecomposition {
    let ch = d.children();
    let mut families: Vec<Option<Vec<FamilyMember>>> = families.into_iter().map(Some).collect();
    families.resize_with(d.len(), || Some(Vec::new()));
    fn build(
        d: &RootedTreeDecomposition,
        ch: &[Vec<usize>],
        fam: &mut [Option<Vec<FamilyMember>>],
        n: usize,
    ) -> Arc<NestedNode> {
        let children = ch[n].iter().map(|&c| build(d, ch, fam, c)).collect();
        let family = fam[n]
            .take()
            .unwrap_or_default()
            .into_iter()
            .map(Arc::new)
            .collect();
        NestedNode::new(d.bags[n].clone(), family, children)
    }
    NestedDecomposition {
        root: build(d, &ch, &mut families, d.root),
    }
}

/// `D̄_{D,σ}`: the root bag is replaced by family member `member`, each former
/// child hangs below the highest bag of `D` containing its adhesion set, and
/// a new root with bag `σ` is attached to the highest bag containing `σ`.
pub fn refine(node: &Arc<NestedNode>, member: usize, sigma: &[Vertex]) -> Result<Arc<NestedNode>> {
    let m = node
        .family
        .get(member)
        .ok_or_else(|| Error::domain(format!("no family member {member}")))?;
    let d = &m.decomposition;
    let set = sorted(sigma.to_vec());
    let top = d.highest_containing(&set).ok_or_else(|| {
        Error::contract(format!(
            "no bag of the refining decomposition contains {set:?}"
        ))
    })?;
    let mut attached: Vec<Vec<Arc<NestedNode>>> = vec![Vec::new(); d.len()];
    for c in &node.children {
        let adhesion = intersect_sorted(&node.bag, &c.bag);
        let at = d.highest_containing(&adhesion).ok_or_else(|| {
            Error::contract(format!("no bag contains the adhesion set {adhesion:?}"))
        })?;
        attached[at].push(c.clone());
    }
    let nb = d.neighbors();
    fn build(
        d: &RootedTreeDecomposition,
        nb: &[Vec<usize>],
        attached: &mut [Vec<Arc<NestedNode>>],
        x: usize,
        from: Option<usize>,
    ) -> Arc<NestedNode> {
        let mut children: Vec<Arc<NestedNode>> = nb[x]
            .iter()
            .filter(|&&y| Some(y) != from)
            .map(|&y| build(d, nb, attached, y, Some(x)))
            .collect();
        children.append(&mut attached[x]);
        NestedNode::new(d.bags[x].clone(), Vec::new(), children)
    }
    let below = build(d, &nb, &mut attached, top, None);
    Ok(NestedNode::new(set, Vec::new(), vec![below]))
}

/// The special children of `node` (in decreasing size order) and their
/// attachment clique.
pub fn special_children(
    g: &ColoredGraph,
    node: &NestedNode,
) -> (Vec<Arc<NestedNode>>, Vec<Vertex>) {
    let ch = node.children_by_size();
    let t = ch.len();
    let mut prefix = Vec::new();
    let mut best = (0, Vec::new());
    for j in 1..=t {
        prefix = union_sorted(&prefix, &intersect_sorted(&node.bag, &ch[j - 1].bag));
        if !g.is_clique(&prefix) {
            break;
        }
        if j == t || ch[j - 1].size > ch[j].size {
            best = (j, prefix.clone());
        }
    }
    let (j, clique) = best;
    (ch[..j].to_vec(), clique)
}

/// `p(m) = ((k+1)(m+1))²` evaluated exactly at a rational argument.
pub fn p_bound(k: usize, m: Ratio<u128>) -> Ratio<u128> {
    let k1 = Ratio::from_integer(k as u128 + 1);
    let v = k1 * (m + Ratio::from_integer(1));
    v * v
}

/// Checks `|𝓓_n| ≤ p(|D̄| / |D̄_c|)` for every node and non-special child.
pub fn is_p_bounded(
    g: &ColoredGraph,
    nd: &NestedDecomposition,
    p: impl Fn(Ratio<u128>) -> Ratio<u128>,
) -> bool {
    let total = nd.size() as u128;
    nd.preorder().iter().all(|(n, _)| {
        let (special, _) = special_children(g, n);
        n.children
            .iter()
            .filter(|c| !special.iter().any(|s| Arc::ptr_eq(s, c)))
            .all(|c| {
                let ratio = Ratio::new(total, c.size as u128);
                Ratio::from_integer(n.family.len() as u128) <= p(ratio)
            })
    })
}

/// Isomorphism-invariant nested decomposition of a connected graph of tree
/// width at most `k`, built on
/// `improve(reserve_improvement_color(g), k)`.
pub fn invariant_nested_decomposition(g: &ColoredGraph, k: usize) -> Result<NestedDecomposition> {
    let improved = improve(&reserve_improvement_color(g), k)?;
    nested_for_improved(&improved, k, Thresholds::default())
}

/// As [`invariant_nested_decomposition`] for a graph that is already improved.
pub fn nested_for_improved(
    g: &ColoredGraph,
    k: usize,
    th: Thresholds,
) -> Result<NestedDecomposition> {
    let base = clique_free_decomposition(g, k)?;
    let ch = base.children();
    fn build(
        g: &ColoredGraph,
        base: &RootedTreeDecomposition,
        ch: &[Vec<usize>],
        n: usize,
        k: usize,
        th: Thresholds,
    ) -> Result<Arc<NestedNode>> {
        let children = ch[n]
            .iter()
            .map(|&c| build(g, base, ch, c, k, th))
            .collect::<Result<Vec<_>>>()?;
        let bag = &base.bags[n];
        let shell = NestedNode::new(bag.clone(), Vec::new(), children.clone());
        let family = bag_family(g, &shell, k, th)?;
        Ok(NestedNode::new(bag.clone(), family, children))
    }
    Ok(NestedDecomposition {
        root: build(g, &base, &ch, base.root, k, th)?,
    })
}

/// Anchor pairs for the family of a bag with more than `k + 1` vertices.
pub fn anchor_pairs(g: &ColoredGraph, node: &NestedNode) -> Vec<(Vertex, Vertex)> {
    let (special, clique) = special_children(g, node);
    let ch = node.children_by_size();
    let j = special.len();
    let pool = if j < ch.len() {
        let size = ch[j].size;
        let extended = ch[j..]
            .iter()
            .take_while(|c| c.size == size)
            .fold(clique, |acc, c| {
                union_sorted(&acc, &intersect_sorted(&node.bag, &c.bag))
            });
        if g.is_clique(&extended) {
            // unreachable by maximality of j; fall back to the whole bag
            node.bag.clone()
        } else {
            extended
        }
    } else {
        node.bag.clone()
    };
    let mut pairs = Vec::new();
    for (i, &u) in pool.iter().enumerate() {
        for &v in &pool[i + 1..] {
            if !g.is_adjacent(u, v) {
                pairs.push((u, v));
            }
        }
    }
    pairs
}

fn bag_family(
    g: &ColoredGraph,
    node: &NestedNode,
    k: usize,
    th: Thresholds,
) -> Result<Vec<Arc<FamilyMember>>> {
    let bag = &node.bag;
    if bag.len() <= k + 1 {
        return Ok(vec![Arc::new(FamilyMember {
            decomposition: RootedTreeDecomposition::single_bag(bag.clone()),
            distinguished: None,
        })]);
    }
    let sub = g.induced(bag);
    let mut family = Vec::new();
    for (u, v) in anchor_pairs(g, node) {
        let b = atom_bounded_decomposition(&sub, (u, v), k, th)?;
        if let Err(e) = b.decomposition.validate(&sub) {
            return Err(Error::contract(format!(
                "family member for {{{u},{v}}}: {e}"
            )));
        }
        family.push(Arc::new(FamilyMember {
            decomposition: b.decomposition,
            distinguished: Some((u, v)),
        }));
    }
    if family.is_empty() {
        return Err(Error::contract(format!(
            "bag {bag:?} has no non-adjacent pair"
        )));
    }
    Ok(family)
}

/// True iff `set` is an unordered root set of the subtree at `node`.
pub fn is_root_set(node: &NestedNode, set: &[Vertex]) -> bool {
    let set = sorted(set.to_vec());
    if node.family.is_empty() {
        set == node.bag
    } else {
        is_subset_sorted(&set, &node.bag)
            && node.family.iter().all(|m| {
                m.decomposition
                    .bags
                    .iter()
                    .any(|b| is_subset_sorted(&set, b))
            })
    }
}
