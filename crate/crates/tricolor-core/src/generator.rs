//! Sentence generation from a TDAG: top-down derivation search where the
//! working feature structure is *anchored* into the input TDAG `t`.
//!
//! The generator may promote the color of an input element to red (it
//! derives the element) but may never add a node or arc that `t` lacks;
//! a successful derivation must derive every red element of `t`,
//! including its reentrancies. Writing `t_g` for the derived TDAG, success
//! therefore sandwiches it between the red core and the saturation of `t`:
//! `red_core(t) ⊑ t_g ⊑ saturate(t)`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::color::Color;
use crate::grammar::{apply_equations, FsGraph, Grammar, Rule, RuleKind};
use crate::subsume::{homomorphism, subsumes};
use crate::tdag::{NodeId, Tdag, TdagBuilder};
use crate::transfer::ElementRef;

/// A derivation tree: one rule application per node, with the word form
/// at lexical leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivTree {
    pub rule: String,
    pub word: Option<String>,
    pub children: Vec<DerivTree>,
}

impl DerivTree {
    fn words(&self, out: &mut Vec<String>) {
        if let Some(w) = &self.word {
            out.push(w.clone());
        }
        for c in &self.children {
            c.words(out);
        }
    }
}

/// A successful generation: the tree, its surface string, and `t_g` — the
/// all-red TDAG of exactly the nodes and arcs the grammar derived.
#[derive(Debug, Clone)]
pub struct Derivation {
    pub tree: DerivTree,
    pub surface: Vec<String>,
    pub derived: Tdag,
}

impl Derivation {
    pub fn surface_string(&self) -> String {
        self.surface.join(" ")
    }
}

/// Per input-element outcome of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverageMark {
    /// The grammar derived this element (its color in `t_g` is red).
    DerivedRed,
    /// Yellow element the derivation legitimately skipped.
    LeftYellow,
    /// Green element the derivation legitimately skipped.
    LeftGreen,
}

#[derive(Debug, Clone)]
pub enum GenFailure {
    /// Some branch hit the depth budget; deeper derivations may exist.
    DepthExhausted,
    /// Complete derivations were found, but none derived all red
    /// elements; lists the missing ones of the first candidate.
    UnderivedRed { elements: Vec<String> },
    /// The whole search space within the budget holds no derivation.
    NoDerivation,
}

impl fmt::Display for GenFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenFailure::DepthExhausted => write!(f, "depth budget exhausted"),
            GenFailure::UnderivedRed { elements } => {
                write!(f, "red elements not derived: {}", elements.join("; "))
            }
            GenFailure::NoDerivation => write!(f, "grammar admits no derivation"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum GenOutcome {
    Success(Derivation),
    Failure(GenFailure),
}

#[derive(Debug, Clone)]
pub struct GenReport {
    pub outcome: GenOutcome,
    /// Marks for every element of the input TDAG; empty on failure
    /// without a complete candidate derivation.
    pub coverage: BTreeMap<ElementRef, CoverageMark>,
}

impl GenReport {
    pub fn success(&self) -> Option<&Derivation> {
        match &self.outcome {
            GenOutcome::Success(d) => Some(d),
            GenOutcome::Failure(_) => None,
        }
    }
}

/// Result of evaluating the three termination conditions independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminationReport {
    /// Red elements of the input missing from the derivation (T1); empty
    /// means T1 passed.
    pub t1_missing: Vec<String>,
    /// T2: the derivation contains nothing the input lacks.
    pub t2: bool,
    /// T3: every red reentrancy of the input was derived as a reentrancy.
    pub t3: bool,
}

impl TerminationReport {
    pub fn t1(&self) -> bool {
        self.t1_missing.is_empty()
    }

    pub fn all(&self) -> bool {
        self.t1() && self.t2 && self.t3
    }
}

/// Re-evaluates the termination conditions for a finished derivation,
/// using nothing but the input TDAG and the derived TDAG.
pub fn check_termination(t: &Tdag, derivation: &Derivation) -> TerminationReport {
    let rc = t.red_core();
    let d = &derivation.derived;
    let mut t1_missing = Vec::new();
    let mut path: Vec<String> = Vec::new();
    t1_walk(&rc, rc.root(), d, Some(d.root()), &mut path, &mut t1_missing);
    let t2 = subsumes(d, &t.saturate());
    let t3 = homomorphism(&rc, d).is_some();
    TerminationReport { t1_missing, t2, t3 }
}

/// Presence walk for T1: every red path, arc and atom of the red core
/// must appear in the derived TDAG. Reentrancy is deliberately ignored
/// here — that is T3's job.
fn t1_walk(
    rc: &Tdag,
    rn: NodeId,
    d: &Tdag,
    dn: Option<NodeId>,
    path: &mut Vec<String>,
    missing: &mut Vec<String>,
) {
    let here = |path: &[String]| alloc::format!("<{}>", path.join(" "));
    if let Some(label) = &rc.node(rn).label {
        let derived_label = dn.and_then(|dn| d.node(dn).label.clone());
        if derived_label.as_deref() != Some(label) {
            missing.push(alloc::format!("atom {label} at {}", here(path)));
        }
    }
    for arc in rc.out_arcs(rn) {
        let next = dn.and_then(|dn| d.arc_at(dn, &arc.feature)).map(|a| a.to);
        if next.is_none() {
            missing.push(alloc::format!("arc `{}` at {}", arc.feature, here(path)));
        }
        path.push(arc.feature.clone());
        t1_walk(rc, arc.to, d, next, path, missing);
        path.pop();
    }
}

/// The sandwich property: `red_core(t) ⊑ derived ⊑ saturate(t)`.
pub fn verify_sandwich(t: &Tdag, derivation: &Derivation) -> bool {
    subsumes(&t.red_core(), &derivation.derived)
        && subsumes(&derivation.derived, &t.saturate())
}

/// Maps every working-structure value reachable from `start` to the input
/// node it is anchored on. `None` means the structure asserts something
/// the input lacks: a missing feature or atom, or a reentrancy between
/// distinct input nodes.
fn anchors(
    fs: &mut FsGraph,
    start: usize,
    t: &Tdag,
) -> Option<BTreeMap<usize, NodeId>> {
    let s = fs.find(start);
    let mut map: BTreeMap<usize, NodeId> = BTreeMap::new();
    map.insert(s, t.root());
    let mut queue = alloc::vec![s];
    while let Some(c) = queue.pop() {
        let n = map[&c];
        if let Some(label) = fs.label_of(c) {
            if t.node(n).label.as_deref() != Some(label.as_str()) {
                return None;
            }
        }
        for (feature, v) in fs.features_of(c) {
            let arc = t.arc_at(n, &feature)?;
            let v = fs.find(v);
            match map.get(&v) {
                Some(&prev) if prev != arc.to => return None,
                Some(_) => {}
                None => {
                    map.insert(v, arc.to);
                    queue.push(v);
                }
            }
        }
    }
    Some(map)
}

/// Builds `t_g` from the anchored part of the working structure: one red
/// node per anchored value, one red arc per derived feature.
fn build_derived(fs: &mut FsGraph, start: usize) -> Tdag {
    fn emit(
        fs: &mut FsGraph,
        c: usize,
        builder: &mut TdagBuilder,
        ids: &mut BTreeMap<usize, NodeId>,
    ) -> NodeId {
        if let Some(&id) = ids.get(&c) {
            return id;
        }
        let id = match fs.label_of(c) {
            Some(atom) => builder.atom(Color::Red, &atom),
            None => builder.node(Color::Red),
        };
        ids.insert(c, id);
        for (feature, v) in fs.features_of(c) {
            let v = fs.find(v);
            let to = emit(fs, v, builder, ids);
            builder.arc(id, &feature, to, Color::Red);
        }
        id
    }
    let start = fs.find(start);
    let mut builder = TdagBuilder::new();
    let mut ids = BTreeMap::new();
    let root = emit(fs, start, &mut builder, &mut ids);
    builder
        .root(root)
        .build()
        .expect("anchored structure maps into an acyclic TDAG")
}

struct Search<'a> {
    t: &'a Tdag,
    grammar: &'a Grammar,
    start_class: usize,
    limit: usize,
    pruned: bool,
    result: Option<Derivation>,
    first_failed: Option<(Vec<String>, Derivation)>,
}

impl<'a> Search<'a> {
    /// Depth-first over leftmost derivations, earlier rules first.
    /// Returns true once a derivation passing all termination conditions
    /// is stored in `result`.
    fn dfs(
        &mut self,
        fs: &FsGraph,
        agenda: &[(String, usize, usize)],
        choices: &mut Vec<usize>,
    ) -> bool {
        let Some((symbol, class, depth)) = agenda.first() else {
            return self.complete(fs.clone(), choices);
        };
        if *depth >= self.limit {
            self.pruned = true;
            return false;
        }
        let (symbol, class, depth) = (symbol.clone(), *class, *depth);
        let grammar = self.grammar;
        for (ri, rule) in grammar.rules_for(&symbol) {
            let mut fs2 = fs.clone();
            let mut classes: BTreeMap<&str, usize> = BTreeMap::new();
            for s in rule.symbols() {
                let c = fs2.fresh();
                classes.insert(s, c);
            }
            if apply_equations(rule, &classes, &mut fs2).is_err() {
                continue;
            }
            if fs2.unify(classes[symbol.as_str()], class).is_err() {
                continue;
            }
            // The generator may never invent structure: reject any branch
            // whose anchored part no longer fits inside the input.
            if anchors(&mut fs2, self.start_class, self.t).is_none() {
                continue;
            }
            let mut agenda2: Vec<(String, usize, usize)> = Vec::new();
            if let RuleKind::Phrasal { rhs } = &rule.kind {
                for s in rhs {
                    agenda2.push((s.clone(), classes[s.as_str()], depth + 1));
                }
            }
            agenda2.extend_from_slice(&agenda[1..]);
            choices.push(ri);
            if self.dfs(&fs2, &agenda2, choices) {
                return true;
            }
            choices.pop();
        }
        false
    }

    fn complete(&mut self, mut fs: FsGraph, choices: &[usize]) -> bool {
        debug_assert!(anchors(&mut fs, self.start_class, self.t).is_some());
        let derived = build_derived(&mut fs, self.start_class);
        let mut pos = 0usize;
        let tree = build_tree(self.grammar, choices, &mut pos);
        let mut surface = Vec::new();
        tree.words(&mut surface);
        let derivation = Derivation { tree, surface, derived };
        let report = check_termination(self.t, &derivation);
        if report.all() {
            self.result = Some(derivation);
            return true;
        }
        if self.first_failed.is_none() {
            let mut why = report.t1_missing.clone();
            if !report.t3 {
                why.push("a red reentrancy was not derived".to_string());
            }
            if !report.t2 {
                why.push("derivation asserts structure the input lacks".to_string());
            }
            self.first_failed = Some((why, derivation));
        }
        false
    }
}

fn build_tree(grammar: &Grammar, choices: &[usize], pos: &mut usize) -> DerivTree {
    let ri = choices[*pos];
    *pos += 1;
    let rule: &Rule = &grammar.rules()[ri];
    match &rule.kind {
        RuleKind::Lexical { word } => DerivTree {
            rule: rule.name.clone(),
            word: Some(word.clone()),
            children: Vec::new(),
        },
        RuleKind::Phrasal { rhs } => {
            let children = rhs.iter().map(|_| build_tree(grammar, choices, pos)).collect();
            DerivTree { rule: rule.name.clone(), word: None, children }
        }
    }
}

/// Generates a surface string for `t`: iterative-deepening depth-first
/// search up to `depth_budget`, preferring earlier rules; the first
/// derivation satisfying the termination conditions wins, so identical
/// inputs always yield identical output.
pub fn generate(t: &Tdag, grammar: &Grammar, depth_budget: usize) -> GenReport {
    let mut first_failed: Option<(Vec<String>, Derivation)> = None;
    let mut pruned_at_budget = false;
    for limit in 1..=depth_budget.max(1) {
        let mut fs = FsGraph::new();
        let start_class = fs.fresh();
        let mut search = Search {
            t,
            grammar,
            start_class,
            limit,
            pruned: false,
            result: None,
            first_failed: None,
        };
        let agenda = alloc::vec![(grammar.start().to_string(), start_class, 0usize)];
        let mut choices = Vec::new();
        search.dfs(&fs, &agenda, &mut choices);
        if let Some(derivation) = search.result {
            let coverage = coverage_from_derived(t, &derivation);
            return GenReport { outcome: GenOutcome::Success(derivation), coverage };
        }
        if first_failed.is_none() {
            first_failed = search.first_failed;
        }
        if !search.pruned {
            // The search space below this limit is exhausted; deeper
            // limits cannot add anything.
            pruned_at_budget = false;
            break;
        }
        pruned_at_budget = true;
    }
    match first_failed {
        Some((why, derivation)) => {
            let coverage = coverage_from_derived(t, &derivation);
            GenReport {
                outcome: GenOutcome::Failure(GenFailure::UnderivedRed { elements: why }),
                coverage,
            }
        }
        None => GenReport {
            outcome: GenOutcome::Failure(if pruned_at_budget {
                GenFailure::DepthExhausted
            } else {
                GenFailure::NoDerivation
            }),
            coverage: BTreeMap::new(),
        },
    }
}

/// Coverage computed from the homomorphism of the derived TDAG into the
/// (saturated) input: derived elements map onto exactly the input
/// elements the grammar covered.
fn coverage_from_derived(
    t: &Tdag,
    derivation: &Derivation,
) -> BTreeMap<ElementRef, CoverageMark> {
    let d = &derivation.derived;
    let mut derived_nodes = alloc::vec![false; t.nodes().len()];
    let mut derived_arcs = alloc::vec![false; t.arcs().len()];
    if let Some(map) = homomorphism(d, &t.saturate()) {
        for (di, ti) in map.iter().enumerate() {
            derived_nodes[ti.index()] = true;
            for arc in d.out_arcs(NodeId(di as u32)) {
                if let Some(ta) = t.arc_at(*ti, &arc.feature) {
                    derived_arcs[ta.id.index()] = true;
                }
            }
        }
    }
    let mut cov = BTreeMap::new();
    for n in t.nodes() {
        let mark = if derived_nodes[n.id.index()] {
            CoverageMark::DerivedRed
        } else if n.color == Color::Yellow {
            CoverageMark::LeftYellow
        } else {
            CoverageMark::LeftGreen
        };
        cov.insert(ElementRef::Node(n.id), mark);
    }
    for a in t.arcs() {
        let mark = if derived_arcs[a.id.index()] {
            CoverageMark::DerivedRed
        } else if a.color == Color::Yellow {
            CoverageMark::LeftYellow
        } else {
            CoverageMark::LeftGreen
        };
        cov.insert(ElementRef::Arc(a.id), mark);
    }
    cov
}
