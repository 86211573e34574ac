//! Semantic transfer: the six operations that gradually relax a source
//! TDAG toward something the target grammar can realize.
//!
//! Additions introduce yellow or green structure; the *painter* weakens an
//! existing element one color step. Every operation either yields another
//! well-formed TDAG or is rejected wholesale. Painting a node also drags
//! its incident same-color arcs one step down — otherwise a pendant node
//! and its only arc could never be relaxed at all, since weakening either
//! one alone violates the color conditions.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::color::Color;
use crate::tdag::{Arc, ArcId, BuildError, Node, NodeId, Tdag, Violation};

/// A node or arc of some TDAG, as the target of a paint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementRef {
    Node(NodeId),
    Arc(ArcId),
}

impl fmt::Display for ElementRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementRef::Node(n) => write!(f, "{n}"),
            ElementRef::Arc(a) => write!(f, "{a}"),
        }
    }
}

/// One transfer operation. Node additions carry the arc that attaches
/// them, since a free-floating node would not be reachable from the root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TransferOp {
    AddYellowNode { attach_to: NodeId, feature: String, label: Option<String> },
    AddYellowArc { from: NodeId, feature: String, to: NodeId },
    AddGreenNode { attach_to: NodeId, feature: String, label: Option<String> },
    AddGreenArc { from: NodeId, feature: String, to: NodeId },
    PaintRedToYellow { target: ElementRef },
    PaintYellowToGreen { target: ElementRef },
}

impl TransferOp {
    /// The color of whatever the operation adds or produces.
    pub fn result_color(&self) -> Color {
        match self {
            TransferOp::AddYellowNode { .. } | TransferOp::AddYellowArc { .. } => Color::Yellow,
            TransferOp::AddGreenNode { .. } | TransferOp::AddGreenArc { .. } => Color::Green,
            TransferOp::PaintRedToYellow { .. } => Color::Yellow,
            TransferOp::PaintYellowToGreen { .. } => Color::Green,
        }
    }

    pub fn is_paint(&self) -> bool {
        matches!(
            self,
            TransferOp::PaintRedToYellow { .. } | TransferOp::PaintYellowToGreen { .. }
        )
    }
}

impl fmt::Display for TransferOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransferOp::AddYellowNode { attach_to, feature, label } => {
                write!(f, "add yellow node under {attach_to} via `{feature}`")?;
                if let Some(l) = label {
                    write!(f, " = {l}")?;
                }
                Ok(())
            }
            TransferOp::AddYellowArc { from, feature, to } => {
                write!(f, "add yellow arc {from} -{feature}-> {to}")
            }
            TransferOp::AddGreenNode { attach_to, feature, label } => {
                write!(f, "add green node under {attach_to} via `{feature}`")?;
                if let Some(l) = label {
                    write!(f, " = {l}")?;
                }
                Ok(())
            }
            TransferOp::AddGreenArc { from, feature, to } => {
                write!(f, "add green arc {from} -{feature}-> {to}")
            }
            TransferOp::PaintRedToYellow { target } => {
                write!(f, "paint {target} red -> yellow")
            }
            TransferOp::PaintYellowToGreen { target } => {
                write!(f, "paint {target} yellow -> green")
            }
        }
    }
}

/// Why an operation was refused. A refused operation leaves no trace: the
/// input TDAG is returned untouched by the caller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransferError {
    NoSuchNode(NodeId),
    NoSuchArc(ArcId),
    /// The paint target is not currently the color the operation weakens.
    WrongColor { target: ElementRef, expected: Color, found: Color },
    /// The root must stay red.
    RootPaint,
    /// The edited graph is not structurally valid (duplicate feature,
    /// cycle, arc out of an atom, ...).
    Structural(BuildError),
    /// The edited graph violates a color condition.
    IllFormed(Vec<Violation>),
}

impl fmt::Display for TransferError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransferError::NoSuchNode(n) => write!(f, "no node {n}"),
            TransferError::NoSuchArc(a) => write!(f, "no arc {a}"),
            TransferError::WrongColor { target, expected, found } => {
                write!(f, "{target} is {found}, operation needs {expected}")
            }
            TransferError::RootPaint => write!(f, "the root node cannot be painted"),
            TransferError::Structural(e) => write!(f, "{e}"),
            TransferError::IllFormed(v) => {
                write!(f, "result would violate ")?;
                for (i, violation) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", violation.condition())?;
                }
                Ok(())
            }
        }
    }
}

impl core::error::Error for TransferError {}

/// Applies one operation, returning the new TDAG. All node and arc ids of
/// the input remain valid in the output (edits only append or recolor).
pub fn apply_op(t: &Tdag, op: &TransferOp) -> Result<Tdag, TransferError> {
    let mut nodes: Vec<Node> = t.nodes().to_vec();
    let mut arcs: Vec<Arc> = t.arcs().to_vec();
    match op {
        TransferOp::AddYellowNode { attach_to, feature, label }
        | TransferOp::AddGreenNode { attach_to, feature, label } => {
            if attach_to.index() >= nodes.len() {
                return Err(TransferError::NoSuchNode(*attach_to));
            }
            let color = op.result_color();
            let id = NodeId(nodes.len() as u32);
            nodes.push(Node { id, color, label: label.clone() });
            arcs.push(Arc {
                id: ArcId(arcs.len() as u32),
                from: *attach_to,
                to: id,
                feature: feature.clone(),
                color,
            });
        }
        TransferOp::AddYellowArc { from, feature, to }
        | TransferOp::AddGreenArc { from, feature, to } => {
            for end in [from, to] {
                if end.index() >= nodes.len() {
                    return Err(TransferError::NoSuchNode(*end));
                }
            }
            arcs.push(Arc {
                id: ArcId(arcs.len() as u32),
                from: *from,
                to: *to,
                feature: feature.clone(),
                color: op.result_color(),
            });
        }
        TransferOp::PaintRedToYellow { target } | TransferOp::PaintYellowToGreen { target } => {
            let from_color = match op {
                TransferOp::PaintRedToYellow { .. } => Color::Red,
                _ => Color::Yellow,
            };
            let to_color = from_color.weakened().expect("red and yellow weaken");
            match *target {
                ElementRef::Node(n) => {
                    if n.index() >= nodes.len() {
                        return Err(TransferError::NoSuchNode(n));
                    }
                    if n == t.root() {
                        return Err(TransferError::RootPaint);
                    }
                    if nodes[n.index()].color != from_color {
                        return Err(TransferError::WrongColor {
                            target: *target,
                            expected: from_color,
                            found: nodes[n.index()].color,
                        });
                    }
                    nodes[n.index()].color = to_color;
                    // The cascade: same-color arcs touching the node go one
                    // step down with it, so the painted node stays legally
                    // attached (and nothing stronger points at it).
                    for a in arcs.iter_mut() {
                        if (a.from == n || a.to == n) && a.color == from_color {
                            a.color = to_color;
                        }
                    }
                }
                ElementRef::Arc(id) => {
                    if id.index() >= arcs.len() {
                        return Err(TransferError::NoSuchArc(id));
                    }
                    if arcs[id.index()].color != from_color {
                        return Err(TransferError::WrongColor {
                            target: *target,
                            expected: from_color,
                            found: arcs[id.index()].color,
                        });
                    }
                    arcs[id.index()].color = to_color;
                }
            }
        }
    }
    let root = t.root();
    let result = Tdag::build(nodes, arcs, root).map_err(TransferError::Structural)?;
    let violations = result.check_well_formed();
    if !violations.is_empty() {
        return Err(TransferError::IllFormed(violations));
    }
    Ok(result)
}

/// Whether painting `target` one step weaker preserves well-formedness.
/// The root is never paintable.
pub fn can_paint(t: &Tdag, target: ElementRef) -> bool {
    let from_color = match target {
        ElementRef::Node(n) => {
            if n.index() >= t.nodes().len() {
                return false;
            }
            t.node(n).color
        }
        ElementRef::Arc(a) => {
            if a.index() >= t.arcs().len() {
                return false;
            }
            t.arc(a).color
        }
    };
    let op = match from_color {
        Color::Red => TransferOp::PaintRedToYellow { target },
        Color::Yellow => TransferOp::PaintYellowToGreen { target },
        Color::Green => return false,
    };
    apply_op(t, &op).is_ok()
}

/// A feature-name pattern: `|`-separated alternatives, each of which may
/// use `*` to match any run of characters (`num|def`, `*obj`, ...).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeaturePattern {
    alternatives: Vec<String>,
}

impl FeaturePattern {
    pub fn new(pattern: &str) -> FeaturePattern {
        FeaturePattern {
            alternatives: pattern.split('|').map(|s| s.trim().to_string()).collect(),
        }
    }

    pub fn matches(&self, feature: &str) -> bool {
        self.alternatives.iter().any(|alt| glob_match(alt, feature))
    }

    pub fn as_text(&self) -> String {
        self.alternatives.join("|")
    }
}

fn glob_match(pattern: &str, text: &str) -> bool {
    let p: Vec<char> = pattern.chars().collect();
    let t: Vec<char> = text.chars().collect();
    // Classic two-pointer wildcard match with backtracking over `*`.
    let (mut pi, mut ti) = (0usize, 0usize);
    let mut star: Option<(usize, usize)> = None;
    while ti < t.len() {
        if pi < p.len() && (p[pi] == t[ti]) {
            pi += 1;
            ti += 1;
        } else if pi < p.len() && p[pi] == '*' {
            star = Some((pi, ti));
            pi += 1;
        } else if let Some((sp, st)) = star {
            pi = sp + 1;
            ti = st + 1;
            star = Some((sp, st + 1));
        } else {
            return false;
        }
    }
    while pi < p.len() && p[pi] == '*' {
        pi += 1;
    }
    pi == p.len()
}

/// What a matching strategy does to the arcs it selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyAction {
    /// Weaken matching red material to yellow.
    PaintYellow,
    /// Weaken matching yellow material to green.
    PaintGreen,
}

impl StrategyAction {
    pub fn source_color(self) -> Color {
        match self {
            StrategyAction::PaintYellow => Color::Red,
            StrategyAction::PaintGreen => Color::Yellow,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StrategyAction::PaintYellow => "paint-yellow",
            StrategyAction::PaintGreen => "paint-green",
        }
    }
}

/// A named relaxation heuristic: arcs whose feature matches the pattern
/// (and, failing that, the nodes they point at) are painted down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    pub name: String,
    pub pattern: FeaturePattern,
    pub action: StrategyAction,
}

/// An ordered table of strategies; earlier entries are preferred by the
/// planner.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StrategyTable {
    pub strategies: Vec<Strategy>,
}

impl StrategyTable {
    pub fn empty() -> StrategyTable {
        StrategyTable::default()
    }

    /// The built-in table: re-derivable grammatical relations first, then
    /// morphosyntactic bookkeeping, then voice (which goes all the way to
    /// green because target voice need not track the source).
    pub fn shipped() -> StrategyTable {
        let entry = |name: &str, pattern: &str, action| Strategy {
            name: name.to_string(),
            pattern: FeaturePattern::new(pattern),
            action,
        };
        StrategyTable {
            strategies: alloc::vec![
                entry("functional-control", "agent", StrategyAction::PaintYellow),
                entry("relative-gap", "gap", StrategyAction::PaintYellow),
                entry("number-definiteness", "num|def", StrategyAction::PaintYellow),
                entry("passivization", "passive", StrategyAction::PaintGreen),
            ],
        }
    }

    /// Paint operations suggested by the table for `t`, in table order then
    /// arc-id order. For each matching arc the arc itself is painted when
    /// that alone keeps the TDAG well-formed; otherwise its target node is
    /// painted (which cascades onto the arc).
    pub fn suggest(&self, t: &Tdag) -> Vec<TransferOp> {
        let mut ops = Vec::new();
        for s in &self.strategies {
            let source = s.action.source_color();
            for a in t.arcs() {
                if !s.pattern.matches(&a.feature) {
                    continue;
                }
                let mk = |target| match source {
                    Color::Red => TransferOp::PaintRedToYellow { target },
                    _ => TransferOp::PaintYellowToGreen { target },
                };
                if a.color == source && can_paint(t, ElementRef::Arc(a.id)) {
                    ops.push(mk(ElementRef::Arc(a.id)));
                } else if t.node(a.to).color == source && can_paint(t, ElementRef::Node(a.to)) {
                    ops.push(mk(ElementRef::Node(a.to)));
                }
            }
        }
        ops
    }
}

/// Every operation the planner may try from `t`: strategy suggestions
/// first, then all remaining legal paints (nodes before arcs, id order).
pub fn enumerate_ops(t: &Tdag, table: &StrategyTable) -> Vec<TransferOp> {
    let mut seen: BTreeSet<TransferOp> = BTreeSet::new();
    let mut ops = Vec::new();
    let mut push = |op: TransferOp, ops: &mut Vec<TransferOp>| {
        if seen.insert(op.clone()) {
            ops.push(op);
        }
    };
    for op in table.suggest(t) {
        push(op, &mut ops);
    }
    for n in t.nodes() {
        let target = ElementRef::Node(n.id);
        if can_paint(t, target) {
            let op = match n.color {
                Color::Red => TransferOp::PaintRedToYellow { target },
                Color::Yellow => TransferOp::PaintYellowToGreen { target },
                Color::Green => continue,
            };
            push(op, &mut ops);
        }
    }
    for a in t.arcs() {
        let target = ElementRef::Arc(a.id);
        if can_paint(t, target) {
            let op = match a.color {
                Color::Red => TransferOp::PaintRedToYellow { target },
                Color::Yellow => TransferOp::PaintYellowToGreen { target },
                Color::Green => continue,
            };
            push(op, &mut ops);
        }
    }
    ops
}

/// A relaxation run: the starting TDAG and each operation together with
/// the well-formed TDAG it produced.
#[derive(Debug, Clone)]
pub struct TransferTrace {
    pub initial: Tdag,
    pub steps: Vec<(TransferOp, Tdag)>,
}

impl TransferTrace {
    /// The final TDAG of the trace (the initial one if no steps).
    pub fn result(&self) -> &Tdag {
        self.steps.last().map(|(_, t)| t).unwrap_or(&self.initial)
    }

    pub fn ops(&self) -> impl Iterator<Item = &TransferOp> {
        self.steps.iter().map(|(op, _)| op)
    }

    /// Replays `ops` from `initial`, failing on the first rejected one.
    pub fn replay(
        initial: &Tdag,
        ops: &[TransferOp],
    ) -> Result<TransferTrace, (usize, TransferError)> {
        let mut steps = Vec::with_capacity(ops.len());
        let mut current = initial.clone();
        for (i, op) in ops.iter().enumerate() {
            current = apply_op(&current, op).map_err(|e| (i, e))?;
            steps.push((op.clone(), current.clone()));
        }
        Ok(TransferTrace { initial: initial.clone(), steps })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanError {
    /// All op sequences up to the budget were explored without reaching an
    /// accepted TDAG.
    Exhausted { states_explored: usize },
}

impl fmt::Display for PlanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanError::Exhausted { states_explored } => {
                write!(f, "no accepted relaxation found ({states_explored} states explored)")
            }
        }
    }
}

impl core::error::Error for PlanError {}

/// Finds a shortest sequence of operations (at most `budget` long) after
/// which `accept` holds, by breadth-first search over relaxation states —
/// so fewer ops, i.e. less information discarded, always wins, and ties
/// fall to [`enumerate_ops`] order. States are deduplicated structurally,
/// so a repainting reachable via several orders is explored once.
pub fn plan_transfer(
    t: &Tdag,
    mut accept: impl FnMut(&Tdag) -> bool,
    table: &StrategyTable,
    budget: usize,
) -> Result<TransferTrace, PlanError> {
    use alloc::collections::VecDeque;
    if accept(t) {
        return Ok(TransferTrace { initial: t.clone(), steps: Vec::new() });
    }
    let mut seen: BTreeSet<String> = BTreeSet::new();
    seen.insert(t.canonical_key());
    let mut queue: VecDeque<(Tdag, Vec<(TransferOp, Tdag)>)> = VecDeque::new();
    queue.push_back((t.clone(), Vec::new()));
    let mut explored = 1usize;
    while let Some((state, steps)) = queue.pop_front() {
        if steps.len() >= budget {
            continue;
        }
        for op in enumerate_ops(&state, table) {
            let Ok(next) = apply_op(&state, &op) else { continue };
            if !seen.insert(next.canonical_key()) {
                continue;
            }
            explored += 1;
            let mut next_steps = steps.clone();
            next_steps.push((op, next.clone()));
            if accept(&next) {
                return Ok(TransferTrace { initial: t.clone(), steps: next_steps });
            }
            queue.push_back((next, next_steps));
        }
    }
    Err(PlanError::Exhausted { states_explored: explored })
}
