//! The tricolor DAG itself: construction, structural validation, the six
//! well-formedness conditions, and the `red core` / `saturate` bounds used
//! by the generator.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::color::Color;

/// Identifier of a node, unique and stable within one TDAG. Ids are never
/// reused: structural edits only ever append.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

/// Identifier of an arc, unique and stable within one TDAG.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ArcId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

/// A node: either an atomic value (labeled, no outgoing arcs) or the root
/// of a sub-DAG. Atom labels are opaque case-sensitive strings; semantic
/// predicates are conventionally spelled `*NAME` but nothing enforces it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    pub color: Color,
    pub label: Option<String>,
}

/// A feature-labeled, colored arc between two nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub id: ArcId,
    pub from: NodeId,
    pub to: NodeId,
    pub feature: String,
    pub color: Color,
}

/// Rejected construction: the graph is not even structurally a rooted DAG
/// with functional features. Color conditions are *not* checked here; see
/// [`Tdag::check_well_formed`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildError {
    /// Node ids must be dense `0..n` and listed in order.
    BadNodeId { expected: NodeId, found: NodeId },
    /// Arc ids must be dense `0..m` and listed in order.
    BadArcId { expected: ArcId, found: ArcId },
    UnknownRoot { root: NodeId },
    DanglingEndpoint { arc: ArcId, node: NodeId },
    /// Two arcs leave the same node under the same feature (condition W6).
    DuplicateFeature { node: NodeId, feature: String },
    /// A labeled node is atomic and may not have outgoing arcs.
    AtomWithArcs { node: NodeId },
    CycleAt { node: NodeId },
    /// Every node must be reachable from the root.
    Unreachable { node: NodeId },
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::BadNodeId { expected, found } => {
                write!(f, "node ids must be dense: expected {expected}, found {found}")
            }
            BuildError::BadArcId { expected, found } => {
                write!(f, "arc ids must be dense: expected {expected}, found {found}")
            }
            BuildError::UnknownRoot { root } => write!(f, "root {root} is not a declared node"),
            BuildError::DanglingEndpoint { arc, node } => {
                write!(f, "arc {arc} references undeclared node {node}")
            }
            BuildError::DuplicateFeature { node, feature } => {
                write!(f, "two arcs leave {node} with feature `{feature}`")
            }
            BuildError::AtomWithArcs { node } => {
                write!(f, "labeled node {node} is atomic and may not have outgoing arcs")
            }
            BuildError::CycleAt { node } => write!(f, "cycle through {node}"),
            BuildError::Unreachable { node } => {
                write!(f, "node {node} is not reachable from the root")
            }
        }
    }
}

impl core::error::Error for BuildError {}

/// One failed well-formedness condition, naming the offending element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// W1: the root is a red node.
    RootNotRed { node: NodeId },
    /// W2: each red arc connects two red nodes.
    RedArcEndpoints { arc: ArcId },
    /// W3: each red node is reachable from the root through red arcs and
    /// red nodes.
    RedNodeUnreachable { node: NodeId },
    /// W4: each yellow node is reachable from the root through red and/or
    /// yellow arcs and nodes.
    YellowNodeUnreachable { node: NodeId },
    /// W5: each yellow arc connects red and/or yellow nodes.
    YellowArcEndpoints { arc: ArcId },
    /// W6: no two arcs leave the same node with the same feature.
    DuplicateFeature { node: NodeId, feature: String },
}

impl Violation {
    pub fn condition(&self) -> &'static str {
        match self {
            Violation::RootNotRed { .. } => "W1",
            Violation::RedArcEndpoints { .. } => "W2",
            Violation::RedNodeUnreachable { .. } => "W3",
            Violation::YellowNodeUnreachable { .. } => "W4",
            Violation::YellowArcEndpoints { .. } => "W5",
            Violation::DuplicateFeature { .. } => "W6",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RootNotRed { node } => write!(f, "W1: root {node} is not red"),
            Violation::RedArcEndpoints { arc } => {
                write!(f, "W2: red arc {arc} does not connect two red nodes")
            }
            Violation::RedNodeUnreachable { node } => {
                write!(f, "W3: red node {node} is not red-reachable from the root")
            }
            Violation::YellowNodeUnreachable { node } => {
                write!(f, "W4: yellow node {node} is not red/yellow-reachable from the root")
            }
            Violation::YellowArcEndpoints { arc } => {
                write!(f, "W5: yellow arc {arc} touches a green node")
            }
            Violation::DuplicateFeature { node, feature } => {
                write!(f, "W6: duplicate feature `{feature}` at {node}")
            }
        }
    }
}

/// A rooted, directed, acyclic graph with colored nodes and arcs.
///
/// Values are immutable after construction; every operation on them is a
/// pure function, so TDAGs are freely shareable across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tdag {
    nodes: Vec<Node>,
    arcs: Vec<Arc>,
    root: NodeId,
    /// Outgoing arc ids per node, sorted by feature name.
    out: Vec<Vec<ArcId>>,
}

impl Tdag {
    /// Assembles a TDAG from explicit parts. Structural errors (dangling
    /// endpoints, duplicated features, cycles, unreachable nodes, labeled
    /// nodes with outgoing arcs) are rejected; the color conditions W1-W5
    /// are deliberately *not* enforced here so that violations can be
    /// constructed and inspected via [`Tdag::check_well_formed`].
    pub fn build(nodes: Vec<Node>, arcs: Vec<Arc>, root: NodeId) -> Result<Tdag, BuildError> {
        for (i, n) in nodes.iter().enumerate() {
            if n.id.index() != i {
                return Err(BuildError::BadNodeId { expected: NodeId(i as u32), found: n.id });
            }
        }
        for (i, a) in arcs.iter().enumerate() {
            if a.id.index() != i {
                return Err(BuildError::BadArcId { expected: ArcId(i as u32), found: a.id });
            }
        }
        if root.index() >= nodes.len() {
            return Err(BuildError::UnknownRoot { root });
        }
        let mut out: Vec<Vec<ArcId>> = alloc::vec![Vec::new(); nodes.len()];
        for a in &arcs {
            for end in [a.from, a.to] {
                if end.index() >= nodes.len() {
                    return Err(BuildError::DanglingEndpoint { arc: a.id, node: end });
                }
            }
            out[a.from.index()].push(a.id);
        }
        for (i, list) in out.iter_mut().enumerate() {
            list.sort_by(|x, y| arcs[x.index()].feature.cmp(&arcs[y.index()].feature));
            for w in list.windows(2) {
                if arcs[w[0].index()].feature == arcs[w[1].index()].feature {
                    return Err(BuildError::DuplicateFeature {
                        node: NodeId(i as u32),
                        feature: arcs[w[0].index()].feature.clone(),
                    });
                }
            }
            if !list.is_empty() && nodes[i].label.is_some() {
                return Err(BuildError::AtomWithArcs { node: NodeId(i as u32) });
            }
        }
        let t = Tdag { nodes, arcs, root, out };
        if let Some(node) = t.find_cycle() {
            return Err(BuildError::CycleAt { node });
        }
        let reach = t.reachable(|_| true, |_| true);
        if let Some(i) = reach.iter().position(|r| !r) {
            return Err(BuildError::Unreachable { node: NodeId(i as u32) });
        }
        Ok(t)
    }

    #[inline]
    pub fn root(&self) -> NodeId {
        self.root
    }

    #[inline]
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    #[inline]
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    #[inline]
    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    #[inline]
    pub fn arc(&self, id: ArcId) -> &Arc {
        &self.arcs[id.index()]
    }

    /// Outgoing arcs of `node`, ordered by feature name.
    #[inline]
    pub fn out_arcs(&self, node: NodeId) -> impl Iterator<Item = &Arc> + '_ {
        self.out[node.index()].iter().map(|id| &self.arcs[id.index()])
    }

    /// The unique arc leaving `node` under `feature`, if any.
    pub fn arc_at(&self, node: NodeId, feature: &str) -> Option<&Arc> {
        let list = &self.out[node.index()];
        list.iter()
            .map(|id| &self.arcs[id.index()])
            .find(|a| a.feature == feature)
    }

    /// Total number of elements (nodes plus arcs).
    #[inline]
    pub fn element_count(&self) -> usize {
        self.nodes.len() + self.arcs.len()
    }

    fn find_cycle(&self) -> Option<NodeId> {
        // 0 unvisited, 1 on stack, 2 done
        let mut state = alloc::vec![0u8; self.nodes.len()];
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for start in 0..self.nodes.len() {
            if state[start] != 0 {
                continue;
            }
            state[start] = 1;
            stack.push((start, 0));
            while let Some(&(n, i)) = stack.last() {
                if i < self.out[n].len() {
                    stack.last_mut().unwrap().1 += 1;
                    let m = self.arcs[self.out[n][i].index()].to.index();
                    match state[m] {
                        0 => {
                            state[m] = 1;
                            stack.push((m, 0));
                        }
                        1 => return Some(NodeId(m as u32)),
                        _ => {}
                    }
                } else {
                    state[n] = 2;
                    stack.pop();
                }
            }
        }
        None
    }

    /// Nodes reachable from the root using only arcs and intermediate nodes
    /// accepted by the filters (the root itself is always reachable).
    fn reachable(
        &self,
        node_ok: impl Fn(&Node) -> bool,
        arc_ok: impl Fn(&Arc) -> bool,
    ) -> Vec<bool> {
        let mut seen = alloc::vec![false; self.nodes.len()];
        let mut stack = alloc::vec![self.root.index()];
        seen[self.root.index()] = true;
        while let Some(n) = stack.pop() {
            if !node_ok(&self.nodes[n]) && n != self.root.index() {
                continue;
            }
            for id in &self.out[n] {
                let a = &self.arcs[id.index()];
                if !arc_ok(a) {
                    continue;
                }
                let m = a.to.index();
                if !seen[m] && node_ok(&self.nodes[m]) {
                    seen[m] = true;
                    stack.push(m);
                }
            }
        }
        seen
    }

    /// Checks conditions W1-W6; an empty list means the TDAG is well-formed.
    pub fn check_well_formed(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        if self.node(self.root).color != Color::Red {
            v.push(Violation::RootNotRed { node: self.root });
        }
        for a in &self.arcs {
            let fc = self.node(a.from).color;
            let tc = self.node(a.to).color;
            match a.color {
                Color::Red => {
                    if fc != Color::Red || tc != Color::Red {
                        v.push(Violation::RedArcEndpoints { arc: a.id });
                    }
                }
                Color::Yellow => {
                    if fc == Color::Green || tc == Color::Green {
                        v.push(Violation::YellowArcEndpoints { arc: a.id });
                    }
                }
                Color::Green => {}
            }
        }
        let red = self.reachable(|n| n.color == Color::Red, |a| a.color == Color::Red);
        let ry = self.reachable(|n| n.color != Color::Green, |a| a.color != Color::Green);
        for n in &self.nodes {
            match n.color {
                Color::Red if !red[n.id.index()] => {
                    v.push(Violation::RedNodeUnreachable { node: n.id });
                }
                Color::Yellow if !ry[n.id.index()] => {
                    v.push(Violation::YellowNodeUnreachable { node: n.id });
                }
                _ => {}
            }
        }
        // W6 cannot arise through `build`, but check anyway.
        for (i, list) in self.out.iter().enumerate() {
            for w in list.windows(2) {
                if self.arcs[w[0].index()].feature == self.arcs[w[1].index()].feature {
                    v.push(Violation::DuplicateFeature {
                        node: NodeId(i as u32),
                        feature: self.arcs[w[0].index()].feature.clone(),
                    });
                }
            }
        }
        v
    }

    #[inline]
    pub fn is_well_formed(&self) -> bool {
        self.check_well_formed().is_empty()
    }

    /// `t_min`: the connected subgraph of exactly the red nodes and arcs.
    /// Well-formedness of the input (W1-W3) guarantees the result is a
    /// well-formed all-red TDAG.
    pub fn red_core(&self) -> Tdag {
        let mut map = alloc::vec![None; self.nodes.len()];
        let mut nodes = Vec::new();
        for n in &self.nodes {
            if n.color == Color::Red {
                map[n.id.index()] = Some(NodeId(nodes.len() as u32));
                nodes.push(Node { id: NodeId(nodes.len() as u32), ..n.clone() });
            }
        }
        let mut arcs = Vec::new();
        for a in &self.arcs {
            if a.color != Color::Red {
                continue;
            }
            if let (Some(from), Some(to)) = (map[a.from.index()], map[a.to.index()]) {
                arcs.push(Arc {
                    id: ArcId(arcs.len() as u32),
                    from,
                    to,
                    feature: a.feature.clone(),
                    color: Color::Red,
                });
            }
        }
        let root = map[self.root.index()].expect("red root");
        Tdag::build(nodes, arcs, root).expect("red core of a well-formed TDAG")
    }

    /// `t_max`: the same graph with every node and arc promoted to red.
    pub fn saturate(&self) -> Tdag {
        let nodes = self
            .nodes
            .iter()
            .map(|n| Node { color: Color::Red, ..n.clone() })
            .collect();
        let arcs = self
            .arcs
            .iter()
            .map(|a| Arc { color: Color::Red, ..a.clone() })
            .collect();
        Tdag::build(nodes, arcs, self.root).expect("recoloring preserves structure")
    }

    /// All root-to-node feature paths, in lexicographic order, for every
    /// node. Index by `NodeId::index`.
    pub fn root_paths(&self) -> Vec<Vec<Vec<String>>> {
        let mut acc: Vec<Vec<Vec<String>>> = alloc::vec![Vec::new(); self.nodes.len()];
        let mut prefix: Vec<String> = Vec::new();
        self.collect_paths(self.root, &mut prefix, &mut acc);
        acc
    }

    fn collect_paths(&self, n: NodeId, prefix: &mut Vec<String>, acc: &mut Vec<Vec<Vec<String>>>) {
        acc[n.index()].push(prefix.clone());
        for id in &self.out[n.index()] {
            let a = &self.arcs[id.index()];
            prefix.push(a.feature.clone());
            self.collect_paths(a.to, prefix, acc);
            prefix.pop();
        }
    }

    /// The lexicographically least root path reaching `node`.
    pub fn canonical_path(&self, node: NodeId) -> Vec<String> {
        // Out-arc lists are feature-sorted, so the DFS above emits paths in
        // lexicographic order and the first entry is the least.
        self.root_paths()[node.index()][0].clone()
    }

    /// A canonical serialization: equal strings iff the TDAGs are isomorphic
    /// (same root-anchored structure, features, labels, colors, sharing).
    pub fn canonical_key(&self) -> String {
        let mut order = alloc::vec![usize::MAX; self.nodes.len()];
        let mut buf = String::new();
        self.key_visit(self.root, &mut order, &mut 0, &mut buf);
        buf
    }

    fn key_visit(&self, n: NodeId, order: &mut [usize], next: &mut usize, buf: &mut String) {
        use core::fmt::Write;
        if order[n.index()] != usize::MAX {
            let _ = write!(buf, "#{}", order[n.index()]);
            return;
        }
        order[n.index()] = *next;
        *next += 1;
        buf.push('(');
        buf.push_str(self.node(n).color.name());
        if let Some(l) = &self.node(n).label {
            buf.push('=');
            buf.push_str(l);
        }
        for id in &self.out[n.index()] {
            let a = &self.arcs[id.index()];
            let _ = write!(buf, ",{}:{}:", a.feature, a.color.name());
            self.key_visit(a.to, order, next, buf);
        }
        buf.push(')');
    }
}

/// Convenience constructor that assigns dense ids.
#[derive(Debug, Default, Clone)]
pub struct TdagBuilder {
    nodes: Vec<Node>,
    arcs: Vec<Arc>,
    root: Option<NodeId>,
}

impl TdagBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&mut self, color: Color) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(Node { id, color, label: None });
        id
    }

    pub fn atom(&mut self, color: Color, label: &str) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(Node { id, color, label: Some(label.to_string()) });
        id
    }

    pub fn arc(&mut self, from: NodeId, feature: &str, to: NodeId, color: Color) -> ArcId {
        let id = ArcId(self.arcs.len() as u32);
        self.arcs.push(Arc { id, from, to, feature: feature.to_string(), color });
        id
    }

    pub fn root(mut self, root: NodeId) -> Self {
        self.root = Some(root);
        self
    }

    pub fn build(self) -> Result<Tdag, BuildError> {
        let root = self.root.unwrap_or(NodeId(0));
        Tdag::build(self.nodes, self.arcs, root)
    }
}
