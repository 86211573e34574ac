//! Constraint extraction and the four-way comparison of two TDAGs.
//!
//! A TDAG's information content is captured by three kinds of constraints:
//! its arcs (anchored by the canonical root path of their source node),
//! its atom bindings, and its reentrancies (pairs of distinct root paths
//! reaching one node). Comparing the constraint sets of a source and a
//! target TDAG partitions the source set into what both share (`c0`),
//! what only the source carries but the target does not contradict
//! (`c_plus`), and what the target outright violates (`c_minus`); target
//! constraints absent from the source form `c_new`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::color::Color;
use crate::tdag::Tdag;

/// A root-anchored feature path.
pub type Path = Vec<String>;

fn fmt_path(f: &mut fmt::Formatter<'_>, p: &[String]) -> fmt::Result {
    write!(f, "<{}>", p.join(" "))
}

/// What a constraint asserts. Matching between source and target ignores
/// strength, so the kind alone is the identity of a constraint.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConstraintKind {
    /// A node exists at the path. Not produced by extraction (arc
    /// constraints already imply the existence of their endpoints) but
    /// available to callers that need it.
    NodeAtPath { path: Path },
    /// An arc under `feature` leaves the node at `from`.
    Arc { from: Path, feature: String },
    /// The node at `path` is the atom `atom`.
    AtomBinding { path: Path, atom: String },
    /// Both paths reach the same node. The pair is stored sorted.
    Reentrancy { paths: (Path, Path) },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub strength: Color,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ConstraintKind::NodeAtPath { path } => {
                write!(f, "node at ")?;
                fmt_path(f, path)?;
            }
            ConstraintKind::Arc { from, feature } => {
                write!(f, "arc `{feature}` at ")?;
                fmt_path(f, from)?;
            }
            ConstraintKind::AtomBinding { path, atom } => {
                fmt_path(f, path)?;
                write!(f, " = {atom}")?;
            }
            ConstraintKind::Reentrancy { paths } => {
                fmt_path(f, &paths.0)?;
                write!(f, " == ")?;
                fmt_path(f, &paths.1)?;
            }
        }
        write!(f, " [{}]", self.strength)
    }
}

/// The constraint set of a well-formed TDAG, sorted and duplicate-free.
pub fn extract_constraints(t: &Tdag) -> Vec<Constraint> {
    let all_paths = t.root_paths();
    let canonical = |n: crate::tdag::NodeId| all_paths[n.index()][0].clone();
    let mut out: BTreeSet<Constraint> = BTreeSet::new();
    for a in t.arcs() {
        out.insert(Constraint {
            kind: ConstraintKind::Arc { from: canonical(a.from), feature: a.feature.clone() },
            strength: a.color,
        });
    }
    for n in t.nodes() {
        if let Some(atom) = &n.label {
            out.insert(Constraint {
                kind: ConstraintKind::AtomBinding { path: canonical(n.id), atom: atom.clone() },
                strength: n.color,
            });
        }
        let paths = &all_paths[n.id.index()];
        for i in 0..paths.len() {
            for j in i + 1..paths.len() {
                out.insert(Constraint {
                    kind: ConstraintKind::Reentrancy {
                        paths: (paths[i].clone(), paths[j].clone()),
                    },
                    strength: n.color,
                });
            }
        }
    }
    out.into_iter().collect()
}

/// How the target sentence relates to the source, by which sets are empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Every constraint matched in both directions.
    FullyInterlingual,
    /// The target misses source constraints but contradicts nothing.
    UnderGenerated,
    /// The target adds constraints but misses nothing.
    OverGenerated,
    /// The target violates at least one source constraint.
    Inconsistent,
    /// The target both misses and adds constraints.
    Mixed,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::FullyInterlingual => "fully-interlingual",
            Verdict::UnderGenerated => "under-generated",
            Verdict::OverGenerated => "over-generated",
            Verdict::Inconsistent => "inconsistent",
            Verdict::Mixed => "mixed",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The partition of the two constraint sets plus the derived verdict.
///
/// Invariants: `c0`, `c_plus`, `c_minus` are pairwise disjoint and their
/// union is the source constraint set; the target constraint set is
/// exactly `c0 ∪ c_new`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionReport {
    /// Shared by source and target.
    pub c0: Vec<Constraint>,
    /// Source-only, but consistent with the target.
    pub c_plus: Vec<Constraint>,
    /// Source constraints the target violates (conflicting atom at the
    /// same path).
    pub c_minus: Vec<Constraint>,
    /// Target-only.
    pub c_new: Vec<Constraint>,
    pub verdict: Verdict,
}

/// Lexicographic cost `(|c_minus|, |c_plus|, |c_new|)`: consistency
/// dominates, then missing information, then invented information.
pub fn score(report: &PartitionReport) -> (usize, usize, usize) {
    (report.c_minus.len(), report.c_plus.len(), report.c_new.len())
}

/// Partitions the constraints of `source` against those of `target`.
pub fn classify(source: &Tdag, target: &Tdag) -> PartitionReport {
    let cs = extract_constraints(source);
    let ct = extract_constraints(target);
    classify_sets(&cs, &ct)
}

/// Same as [`classify`] but over pre-extracted constraint sets (both must
/// be sorted as produced by [`extract_constraints`]).
pub fn classify_sets(cs: &[Constraint], ct: &[Constraint]) -> PartitionReport {
    let target_kinds: BTreeSet<&ConstraintKind> = ct.iter().map(|c| &c.kind).collect();
    let source_kinds: BTreeSet<&ConstraintKind> = cs.iter().map(|c| &c.kind).collect();
    let mut target_atoms: BTreeMap<&Path, BTreeSet<&String>> = BTreeMap::new();
    for c in ct {
        if let ConstraintKind::AtomBinding { path, atom } = &c.kind {
            target_atoms.entry(path).or_default().insert(atom);
        }
    }
    let mut c0 = Vec::new();
    let mut c_plus = Vec::new();
    let mut c_minus = Vec::new();
    for c in cs {
        if target_kinds.contains(&c.kind) {
            c0.push(c.clone());
        } else if let ConstraintKind::AtomBinding { path, atom } = &c.kind {
            match target_atoms.get(path) {
                Some(atoms) if !atoms.contains(atom) => c_minus.push(c.clone()),
                _ => c_plus.push(c.clone()),
            }
        } else {
            c_plus.push(c.clone());
        }
    }
    let c_new: Vec<Constraint> =
        ct.iter().filter(|c| !source_kinds.contains(&c.kind)).cloned().collect();
    let verdict = if !c_minus.is_empty() {
        Verdict::Inconsistent
    } else {
        match (c_plus.is_empty(), c_new.is_empty()) {
            (true, true) => Verdict::FullyInterlingual,
            (false, true) => Verdict::UnderGenerated,
            (true, false) => Verdict::OverGenerated,
            (false, false) => Verdict::Mixed,
        }
    };
    PartitionReport { c0, c_plus, c_minus, c_new, verdict }
}
