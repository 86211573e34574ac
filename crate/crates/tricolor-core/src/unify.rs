//! Color-extended unification of TDAGs.
//!
//! Standard rooted DAG unification with the color algebra layered on top:
//! merged elements take the stronger color (red absorbs everything, yellow
//! absorbs green). Conflicting atoms fail outright when either side is red
//! or yellow; a conflict between two green atoms is *indefinite* — the
//! conflict site is reported so the caller can postpone or arbitrate it.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::color::Color;
use crate::tdag::{BuildError, NodeId, Tdag, TdagBuilder};

/// Result of unifying two TDAGs.
#[derive(Debug, Clone)]
pub enum UnifyOutcome {
    Unified(Tdag),
    /// Two conflicting green atoms met; such a unification should be
    /// postponed rather than forced.
    Indefinite(UnifyConflict),
    Failure(UnifyFailure),
}

impl UnifyOutcome {
    pub fn unified(self) -> Option<Tdag> {
        match self {
            UnifyOutcome::Unified(t) => Some(t),
            _ => None,
        }
    }
}

/// A green-green atom conflict: both atoms are kept, anchored at the
/// lexicographically least path reaching the merged node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnifyConflict {
    pub path: Vec<String>,
    pub atoms: (String, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnifyFailure {
    pub path: Vec<String>,
    pub reason: FailureReason,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureReason {
    /// Conflicting atoms where at least one side is red or yellow.
    AtomConflict(String, String),
    /// An atomic node was asked to carry structure.
    AtomWithStructure(String),
    /// Merging reentrancies would close a cycle.
    Cycle,
}

impl fmt::Display for UnifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unification failed at <{}>: ", self.path.join(" "))?;
        match &self.reason {
            FailureReason::AtomConflict(a, b) => write!(f, "atom {a} conflicts with {b}"),
            FailureReason::AtomWithStructure(a) => {
                write!(f, "atom {a} cannot also carry outgoing arcs")
            }
            FailureReason::Cycle => write!(f, "result would be cyclic"),
        }
    }
}

impl core::error::Error for UnifyFailure {}

struct Classes {
    parent: Vec<usize>,
    color: Vec<Color>,
    /// Every atom label asserted on the class, with the joined color of
    /// the nodes asserting it. More than one entry is a conflict, but it
    /// is classified only after all merging is done so that the outcome
    /// does not depend on merge order.
    label: Vec<BTreeMap<String, Color>>,
    feats: Vec<BTreeMap<String, usize>>,
}

impl Classes {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, x: usize, y: usize, pending: &mut Vec<(usize, usize)>) {
        let (x, y) = (self.find(x), self.find(y));
        if x == y {
            return;
        }
        // Keep the class with the larger feature map as representative.
        let (keep, drop) = if self.feats[x].len() >= self.feats[y].len() { (x, y) } else { (y, x) };
        self.parent[drop] = keep;
        self.color[keep] = self.color[keep].join(self.color[drop]);
        for (label, color) in core::mem::take(&mut self.label[drop]) {
            let entry = self.label[keep].entry(label).or_insert(color);
            *entry = entry.join(color);
        }
        let dropped = core::mem::take(&mut self.feats[drop]);
        for (feature, target) in dropped {
            match self.feats[keep].get(&feature) {
                Some(&existing) => pending.push((existing, target)),
                None => {
                    self.feats[keep].insert(feature, target);
                }
            }
        }
    }
}

/// Unifies two well-formed TDAGs at their roots.
pub fn unify(a: &Tdag, b: &Tdag) -> UnifyOutcome {
    let na = a.nodes().len();
    let total = na + b.nodes().len();
    let mut cls = Classes {
        parent: (0..total).collect(),
        color: Vec::with_capacity(total),
        label: Vec::with_capacity(total),
        feats: alloc::vec![BTreeMap::new(); total],
    };
    for n in a.nodes().iter().chain(b.nodes().iter()) {
        cls.color.push(n.color);
        cls.label.push(n.label.iter().map(|l| (l.clone(), n.color)).collect());
    }
    for arc in a.arcs() {
        cls.feats[arc.from.index()].insert(arc.feature.clone(), arc.to.index());
    }
    for arc in b.arcs() {
        cls.feats[na + arc.from.index()].insert(arc.feature.clone(), na + arc.to.index());
    }

    let mut pending = alloc::vec![(a.root().index(), na + b.root().index())];
    while let Some((x, y)) = pending.pop() {
        cls.union(x, y, &mut pending);
    }

    // Deterministic class order and canonical paths: depth-first from the
    // root class, features in sorted order, first visit wins.
    let root_class = cls.find(a.root().index());
    let mut order: Vec<usize> = Vec::new();
    let mut path_of: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    fn visit(
        cls: &mut Classes,
        c: usize,
        path: &mut Vec<String>,
        order: &mut Vec<usize>,
        path_of: &mut BTreeMap<usize, Vec<String>>,
        on_stack: &mut BTreeMap<usize, bool>,
    ) -> Result<(), ()> {
        if let Some(&active) = on_stack.get(&c) {
            return if active { Err(()) } else { Ok(()) };
        }
        on_stack.insert(c, true);
        order.push(c);
        path_of.insert(c, path.clone());
        let feats: Vec<(String, usize)> =
            cls.feats[c].iter().map(|(f, &t)| (f.clone(), t)).collect();
        for (feature, target) in feats {
            let target = cls.find(target);
            path.push(feature);
            visit(cls, target, path, order, path_of, on_stack)?;
            path.pop();
        }
        on_stack.insert(c, false);
        Ok(())
    }
    let mut on_stack = BTreeMap::new();
    let cyclic = {
        let mut p = Vec::new();
        visit(&mut cls, root_class, &mut p, &mut order, &mut path_of, &mut on_stack).is_err()
    };

    // Hard atom conflicts dominate; among several, report the one at the
    // least path. A conflict is indefinite only when *every* atom asserted
    // on the class is green; the pair reported is the lexicographically
    // first two, so the outcome is independent of argument order.
    let mut hard: Option<(Vec<String>, String, String)> = None;
    let mut soft: Option<(Vec<String>, String, String)> = None;
    let mut visited = alloc::collections::BTreeSet::new();
    for member in 0..total {
        let class = cls.find(member);
        if !visited.insert(class) || cls.label[class].len() < 2 {
            continue;
        }
        let path = path_of.get(&class).cloned().unwrap_or_default();
        let all_green = cls.label[class].values().all(|&c| c == Color::Green);
        let mut atoms = cls.label[class].keys();
        let candidate =
            (path, atoms.next().unwrap().clone(), atoms.next().unwrap().clone());
        let slot = if all_green { &mut soft } else { &mut hard };
        if slot.as_ref().is_none_or(|(p, _, _)| candidate.0 < *p) {
            *slot = Some(candidate);
        }
    }
    if let Some((path, la, lb)) = hard {
        return UnifyOutcome::Failure(UnifyFailure {
            path,
            reason: FailureReason::AtomConflict(la, lb),
        });
    }
    for &class in &order {
        if !cls.label[class].is_empty() && !cls.feats[class].is_empty() {
            let atom = cls.label[class].keys().next().unwrap().clone();
            return UnifyOutcome::Failure(UnifyFailure {
                path: path_of[&class].clone(),
                reason: FailureReason::AtomWithStructure(atom),
            });
        }
    }
    if cyclic {
        return UnifyOutcome::Failure(UnifyFailure { path: Vec::new(), reason: FailureReason::Cycle });
    }
    if let Some((path, la, lb)) = soft {
        return UnifyOutcome::Indefinite(UnifyConflict { path, atoms: (la, lb) });
    }

    // Arc colors: join over every contributing arc grouped by (class, feature).
    let mut arc_color: BTreeMap<(usize, String), Color> = BTreeMap::new();
    for (offset, t) in [(0usize, a), (na, b)] {
        for arc in t.arcs() {
            let from = cls.find(offset + arc.from.index());
            let entry = arc_color.entry((from, arc.feature.clone())).or_insert(arc.color);
            *entry = entry.join(arc.color);
        }
    }

    let mut builder = TdagBuilder::new();
    let mut ids: BTreeMap<usize, NodeId> = BTreeMap::new();
    for &class in &order {
        let id = match cls.label[class].keys().next() {
            Some(atom) => builder.atom(cls.color[class], atom),
            None => builder.node(cls.color[class]),
        };
        ids.insert(class, id);
    }
    let mut cls2 = cls;
    for &class in &order {
        let feats: Vec<(String, usize)> =
            cls2.feats[class].iter().map(|(f, &t)| (f.clone(), t)).collect();
        for (feature, target) in feats {
            let target = cls2.find(target);
            let color = arc_color[&(class, feature.clone())];
            builder.arc(ids[&class], &feature, ids[&target], color);
        }
    }
    let root = ids[&root_class];
    match builder.root(root).build() {
        Ok(t) => UnifyOutcome::Unified(t),
        Err(BuildError::CycleAt { .. }) => {
            UnifyOutcome::Failure(UnifyFailure { path: Vec::new(), reason: FailureReason::Cycle })
        }
        Err(e) => unreachable!("class graph invariants violated: {e}"),
    }
}
