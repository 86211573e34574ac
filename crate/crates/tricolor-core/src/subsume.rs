//! Color-extended subsumption between TDAGs.
//!
//! `subsumes(a, b)` holds when `a` is at least as general as `b`: there is
//! a root-preserving homomorphism from `a` into `b` that respects feature
//! names, atom labels and reentrancies, and whose element colors obey the
//! extended rules (red maps only to red, yellow to red or yellow, green to
//! anything). Because no node carries two arcs with the same feature, the
//! homomorphism is unique when it exists and can be found by a single
//! traversal.

use alloc::vec::Vec;

use crate::tdag::{NodeId, Tdag};

/// Whether `a` subsumes (is at least as general as) `b`.
///
/// Both inputs must be well-formed; the result is unspecified otherwise.
pub fn subsumes(a: &Tdag, b: &Tdag) -> bool {
    homomorphism(a, b).is_some()
}

/// Root-preserving homomorphism from `a` into `b`, as a map from `a` node
/// indices to `b` node ids. `None` when `a` does not subsume `b`.
pub(crate) fn homomorphism(a: &Tdag, b: &Tdag) -> Option<Vec<NodeId>> {
    const UNMAPPED: u32 = u32::MAX;
    let mut map = alloc::vec![NodeId(UNMAPPED); a.nodes().len()];
    let mut stack: Vec<(NodeId, NodeId)> = Vec::with_capacity(a.nodes().len());
    map[a.root().index()] = b.root();
    stack.push((a.root(), b.root()));
    while let Some((x, y)) = stack.pop() {
        let nx = a.node(x);
        let ny = b.node(y);
        if !nx.color.subsumes(ny.color) {
            return None;
        }
        if let Some(lx) = &nx.label {
            match &ny.label {
                Some(ly) if lx == ly => {}
                _ => return None,
            }
        }
        for ax in a.out_arcs(x) {
            let ay = b.arc_at(y, &ax.feature)?;
            if !ax.color.subsumes(ay.color) {
                return None;
            }
            let tx = ax.to;
            // Reentrancy: the mapping must be a function on node ids.
            if map[tx.index()].0 != UNMAPPED {
                if map[tx.index()] != ay.to {
                    return None;
                }
            } else {
                map[tx.index()] = ay.to;
                stack.push((tx, ay.to));
            }
        }
    }
    Some(map)
}

/// Structural isomorphism: identical root-anchored shape, features, labels,
/// colors and reentrancies, ignoring the particular id values.
pub fn iso_equal(a: &Tdag, b: &Tdag) -> bool {
    if a.nodes().len() != b.nodes().len() || a.arcs().len() != b.arcs().len() {
        return false;
    }
    const UNMAPPED: u32 = u32::MAX;
    let mut map = alloc::vec![NodeId(UNMAPPED); a.nodes().len()];
    let mut hit = alloc::vec![false; b.nodes().len()];
    let mut stack: Vec<(NodeId, NodeId)> = Vec::new();
    map[a.root().index()] = b.root();
    hit[b.root().index()] = true;
    stack.push((a.root(), b.root()));
    while let Some((x, y)) = stack.pop() {
        let nx = a.node(x);
        let ny = b.node(y);
        if nx.color != ny.color || nx.label != ny.label {
            return false;
        }
        let mut degree = 0usize;
        for ax in a.out_arcs(x) {
            degree += 1;
            let Some(ay) = b.arc_at(y, &ax.feature) else {
                return false;
            };
            if ax.color != ay.color {
                return false;
            }
            let tx = ax.to;
            if map[tx.index()].0 != UNMAPPED {
                if map[tx.index()] != ay.to {
                    return false;
                }
            } else {
                if hit[ay.to.index()] {
                    // Not injective.
                    return false;
                }
                map[tx.index()] = ay.to;
                hit[ay.to.index()] = true;
                stack.push((tx, ay.to));
            }
        }
        if degree != b.out_arcs(y).count() {
            return false;
        }
    }
    true
}
