//! Edgeless graphs whose nested decompositions encode the edges of another
//! graph: one star-shaped refining decomposition per edge.

use std::sync::Arc;

use crate::graph::ColoredGraph;
use crate::nested::{FamilyMember, NestedDecomposition, NestedNode};
use crate::treedec::RootedTreeDecomposition;

/// The edgeless graph on `V(G)` with a single bag `V(G)` whose family holds,
/// for every edge `{v,w}`, a star with center bag `{v,w}` and one leaf bag
/// `{u}` per vertex `u`.
pub fn star_gadget(g: &ColoredGraph) -> (ColoredGraph, NestedDecomposition) {
    let vs = g.vertices().to_vec();
    let edgeless = ColoredGraph::with_vertices(vs.iter().copied());
    let family = g
        .edges()
        .into_iter()
        .map(|(v, w, _)| {
            let mut bags = vec![vec![v, w]];
            let mut parent = vec![None];
            for &u in &vs {
                bags.push(vec![u]);
                parent.push(Some(0));
            }
            Arc::new(FamilyMember {
                decomposition: RootedTreeDecomposition {
                    bags,
                    parent,
                    root: 0,
                },
                distinguished: None,
            })
        })
        .collect();
    let root = NestedNode::new(vs, family, Vec::new());
    (edgeless, NestedDecomposition { root })
}
