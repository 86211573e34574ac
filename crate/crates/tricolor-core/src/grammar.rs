//! Unification grammars: lexical and phrasal rules written as path
//! equations over constituent symbols, plus a small analyzer that turns a
//! token sequence into an all-red TDAG.
//!
//! Equations whose path passes through the feature `pred` are *semantic*
//! and shape the TDAG; all other equations are syntactic bookkeeping that
//! never leaves the feature structures.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::color::Color;
use crate::tdag::{Tdag, TdagBuilder};

/// The feature that separates semantic material from syntax.
pub const SEMANTIC_FEATURE: &str = "pred";

/// A path rooted at one of a rule's constituent symbols, e.g.
/// `<V pred agent>` is symbol `V` with features `[pred, agent]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FeaturePath {
    pub symbol: String,
    pub features: Vec<String>,
}

impl FeaturePath {
    pub fn new(symbol: &str, features: &[&str]) -> FeaturePath {
        FeaturePath {
            symbol: symbol.to_string(),
            features: features.iter().map(|f| f.to_string()).collect(),
        }
    }

    pub fn is_semantic(&self) -> bool {
        self.features.iter().any(|f| f == SEMANTIC_FEATURE)
    }
}

impl fmt::Display for FeaturePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}", self.symbol)?;
        for feat in &self.features {
            write!(f, " {feat}")?;
        }
        write!(f, ">")
    }
}

/// The right-hand side of an equation: another path (inducing reentrancy)
/// or an atom (binding a value).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EqRhs {
    Path(FeaturePath),
    Atom(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub lhs: FeaturePath,
    pub rhs: EqRhs,
}

impl Equation {
    /// Semantic equations reach through `pred` on either side.
    pub fn is_semantic(&self) -> bool {
        self.lhs.is_semantic()
            || matches!(&self.rhs, EqRhs::Path(p) if p.is_semantic())
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = ", self.lhs)?;
        match &self.rhs {
            EqRhs::Path(p) => write!(f, "{p}"),
            EqRhs::Atom(a) => write!(f, "{a}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleKind {
    /// Realizes one surface word.
    Lexical { word: String },
    /// Rewrites the LHS symbol into one or two constituents, whose order
    /// is also the surface order.
    Phrasal { rhs: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub lhs: String,
    pub kind: RuleKind,
    pub equations: Vec<Equation>,
}

impl Rule {
    /// LHS symbol followed by the RHS symbols (empty for lexical rules).
    pub fn symbols(&self) -> Vec<&str> {
        let mut v = alloc::vec![self.lhs.as_str()];
        if let RuleKind::Phrasal { rhs } = &self.kind {
            v.extend(rhs.iter().map(String::as_str));
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrammarError {
    DuplicateRuleName { name: String },
    NoStartRule { start: String },
    BadRhsLength { rule: String, len: usize },
    RepeatedSymbol { rule: String, symbol: String },
    UnknownSymbol { rule: String, symbol: String },
    EmptyPath { rule: String },
}

impl fmt::Display for GrammarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrammarError::DuplicateRuleName { name } => write!(f, "duplicate rule name `{name}`"),
            GrammarError::NoStartRule { start } => {
                write!(f, "no rule rewrites the start symbol `{start}`")
            }
            GrammarError::BadRhsLength { rule, len } => {
                write!(f, "rule `{rule}` has {len} constituents; 1 or 2 required")
            }
            GrammarError::RepeatedSymbol { rule, symbol } => {
                write!(f, "rule `{rule}` uses symbol `{symbol}` more than once")
            }
            GrammarError::UnknownSymbol { rule, symbol } => {
                write!(f, "rule `{rule}` references symbol `{symbol}` not in the rule")
            }
            GrammarError::EmptyPath { rule } => {
                write!(f, "rule `{rule}` has an equation with an empty path")
            }
        }
    }
}

impl core::error::Error for GrammarError {}

/// An ordered rule list with a start symbol. Rule order is meaningful: the
/// analyzer and the generator both prefer earlier rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    rules: Vec<Rule>,
    start: String,
}

impl Grammar {
    pub fn new(rules: Vec<Rule>, start: &str) -> Result<Grammar, GrammarError> {
        let mut names: BTreeMap<&str, ()> = BTreeMap::new();
        for rule in &rules {
            if names.insert(&rule.name, ()).is_some() {
                return Err(GrammarError::DuplicateRuleName { name: rule.name.clone() });
            }
            if let RuleKind::Phrasal { rhs } = &rule.kind {
                if rhs.is_empty() || rhs.len() > 2 {
                    return Err(GrammarError::BadRhsLength {
                        rule: rule.name.clone(),
                        len: rhs.len(),
                    });
                }
            }
            let symbols = rule.symbols();
            for (i, s) in symbols.iter().enumerate() {
                if symbols[..i].contains(s) {
                    return Err(GrammarError::RepeatedSymbol {
                        rule: rule.name.clone(),
                        symbol: s.to_string(),
                    });
                }
            }
            for eq in &rule.equations {
                let check = |p: &FeaturePath| {
                    if p.symbol.is_empty() {
                        return Err(GrammarError::EmptyPath { rule: rule.name.clone() });
                    }
                    if !symbols.contains(&p.symbol.as_str()) {
                        return Err(GrammarError::UnknownSymbol {
                            rule: rule.name.clone(),
                            symbol: p.symbol.clone(),
                        });
                    }
                    Ok(())
                };
                check(&eq.lhs)?;
                if let EqRhs::Path(p) = &eq.rhs {
                    check(p)?;
                }
            }
        }
        if !rules.iter().any(|r| r.lhs == start) {
            return Err(GrammarError::NoStartRule { start: start.to_string() });
        }
        Ok(Grammar { rules, start: start.to_string() })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn rules_for<'a>(&'a self, symbol: &'a str) -> impl Iterator<Item = (usize, &'a Rule)> + 'a {
        self.rules
            .iter()
            .enumerate()
            .filter(move |(_, r)| r.lhs == symbol)
    }
}

/// Feature-structure failure during instantiation or analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FsError {
    /// One path is bound to two different atoms.
    AtomConflict { a: String, b: String },
    /// An atom-bound value was extended with a feature (or vice versa).
    AtomWithStructure { atom: String },
    /// Two values anchored to distinct parts of the generation input were
    /// asked to merge.
    AnchorClash,
    /// Path equations closed a cycle; TDAGs are acyclic.
    Cyclic,
}

impl fmt::Display for FsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FsError::AtomConflict { a, b } => write!(f, "atom {a} conflicts with {b}"),
            FsError::AtomWithStructure { atom } => {
                write!(f, "atom {atom} cannot carry features")
            }
            FsError::AnchorClash => write!(f, "values anchored to distinct input nodes"),
            FsError::Cyclic => write!(f, "feature structure is cyclic"),
        }
    }
}

impl core::error::Error for FsError {}

/// A working feature structure: a union-find over value nodes, each class
/// carrying an optional atom label and a feature map. Unification is the
/// usual congruence closure; atomicity (labels exclude features) is
/// enforced eagerly.
#[derive(Debug, Clone, Default)]
pub(crate) struct FsGraph {
    parent: Vec<usize>,
    label: Vec<Option<String>>,
    feats: Vec<BTreeMap<String, usize>>,
}

impl FsGraph {
    pub(crate) fn new() -> FsGraph {
        FsGraph::default()
    }

    pub(crate) fn fresh(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.label.push(None);
        self.feats.push(BTreeMap::new());
        self.parent.len() - 1
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn label_of(&mut self, x: usize) -> Option<String> {
        let x = self.find(x);
        self.label[x].clone()
    }

    pub(crate) fn features_of(&mut self, x: usize) -> Vec<(String, usize)> {
        let x = self.find(x);
        self.feats[x].iter().map(|(f, &v)| (f.clone(), v)).collect()
    }

    pub(crate) fn bind_atom(&mut self, x: usize, atom: &str) -> Result<(), FsError> {
        let x = self.find(x);
        if !self.feats[x].is_empty() {
            return Err(FsError::AtomWithStructure { atom: atom.to_string() });
        }
        match &self.label[x] {
            Some(existing) if existing != atom => Err(FsError::AtomConflict {
                a: existing.clone(),
                b: atom.to_string(),
            }),
            _ => {
                self.label[x] = Some(atom.to_string());
                Ok(())
            }
        }
    }

    /// The value at `features` below `x`, creating nodes along the way.
    pub(crate) fn walk(&mut self, x: usize, features: &[String]) -> Result<usize, FsError> {
        let mut cur = self.find(x);
        for f in features {
            if let Some(atom) = &self.label[cur] {
                return Err(FsError::AtomWithStructure { atom: atom.clone() });
            }
            cur = match self.feats[cur].get(f) {
                Some(&next) => self.find(next),
                None => {
                    let next = self.fresh();
                    self.feats[cur].insert(f.clone(), next);
                    next
                }
            };
        }
        Ok(cur)
    }

    pub(crate) fn unify(&mut self, x: usize, y: usize) -> Result<(), FsError> {
        let mut pending = alloc::vec![(x, y)];
        while let Some((x, y)) = pending.pop() {
            let (x, y) = (self.find(x), self.find(y));
            if x == y {
                continue;
            }
            let (keep, drop) =
                if self.feats[x].len() >= self.feats[y].len() { (x, y) } else { (y, x) };
            match (&self.label[keep], &self.label[drop]) {
                (Some(a), Some(b)) if a != b => {
                    return Err(FsError::AtomConflict { a: a.clone(), b: b.clone() });
                }
                _ => {}
            }
            self.parent[drop] = keep;
            if self.label[keep].is_none() {
                self.label[keep] = self.label[drop].take();
            }
            let dropped = core::mem::take(&mut self.feats[drop]);
            for (f, v) in dropped {
                match self.feats[keep].get(&f) {
                    Some(&existing) => pending.push((existing, v)),
                    None => {
                        self.feats[keep].insert(f, v);
                    }
                }
            }
            if self.label[keep].is_some() && !self.feats[keep].is_empty() {
                return Err(FsError::AtomWithStructure {
                    atom: self.label[keep].clone().unwrap(),
                });
            }
        }
        Ok(())
    }

    /// Converts the structure below `root` into a TDAG, every element
    /// colored `color`. Fails on cycles.
    pub(crate) fn to_tdag(&mut self, root: usize, color: Color) -> Result<Tdag, FsError> {
        let root = self.find(root);
        let mut builder = TdagBuilder::new();
        let mut ids: BTreeMap<usize, crate::tdag::NodeId> = BTreeMap::new();
        let mut active: BTreeMap<usize, bool> = BTreeMap::new();
        self.emit(root, color, &mut builder, &mut ids, &mut active)?;
        let root_id = ids[&root];
        builder.root(root_id).build().map_err(|_| FsError::Cyclic)
    }

    fn emit(
        &mut self,
        c: usize,
        color: Color,
        builder: &mut TdagBuilder,
        ids: &mut BTreeMap<usize, crate::tdag::NodeId>,
        active: &mut BTreeMap<usize, bool>,
    ) -> Result<(), FsError> {
        if let Some(&on_path) = active.get(&c) {
            if on_path {
                return Err(FsError::Cyclic);
            }
            return Ok(());
        }
        active.insert(c, true);
        let id = match self.label[c].clone() {
            Some(atom) => builder.atom(color, &atom),
            None => builder.node(color),
        };
        ids.insert(c, id);
        for (f, v) in self.features_of(c) {
            let v = self.find(v);
            self.emit(v, color, builder, ids, active)?;
            builder.arc(id, &f, ids[&v], color);
        }
        active.insert(c, false);
        Ok(())
    }
}

/// The semantic fragment a lexical rule introduces, plus its syntactic
/// equations (kept verbatim for the parser/generator to apply).
#[derive(Debug, Clone)]
pub struct LexicalFragment {
    /// All-red TDAG rooted at the rule's `pred` value.
    pub tdag: Tdag,
    /// The non-semantic equations of the rule.
    pub bindings: Vec<Equation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstantiateError {
    NotLexical { rule: String },
    Conflict { rule: String, error: FsError },
}

impl fmt::Display for InstantiateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstantiateError::NotLexical { rule } => write!(f, "rule `{rule}` is not lexical"),
            InstantiateError::Conflict { rule, error } => {
                write!(f, "rule `{rule}` cannot be instantiated: {error}")
            }
        }
    }
}

impl core::error::Error for InstantiateError {}

/// Builds the red TDAG fragment of a lexical rule from its semantic
/// equations; path=path equations become reentrant nodes.
pub fn instantiate_lexical(rule: &Rule) -> Result<LexicalFragment, InstantiateError> {
    if !matches!(rule.kind, RuleKind::Lexical { .. }) {
        return Err(InstantiateError::NotLexical { rule: rule.name.clone() });
    }
    let mut fs = FsGraph::new();
    let sym = fs.fresh();
    let conflict = |error| InstantiateError::Conflict { rule: rule.name.clone(), error };
    let mut bindings = Vec::new();
    for eq in &rule.equations {
        if !eq.is_semantic() {
            bindings.push(eq.clone());
            continue;
        }
        let lhs = fs.walk(sym, &eq.lhs.features).map_err(conflict)?;
        match &eq.rhs {
            EqRhs::Path(p) => {
                let rhs = fs.walk(sym, &p.features).map_err(conflict)?;
                fs.unify(lhs, rhs).map_err(conflict)?;
            }
            EqRhs::Atom(a) => fs.bind_atom(lhs, a).map_err(conflict)?,
        }
    }
    let pred = fs
        .walk(sym, &[SEMANTIC_FEATURE.to_string()])
        .map_err(conflict)?;
    let tdag = fs.to_tdag(pred, Color::Red).map_err(conflict)?;
    Ok(LexicalFragment { tdag, bindings })
}

/// One parse tree skeleton: a rule plus subtrees for its constituents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseTree {
    pub rule: usize,
    pub children: Vec<ParseTree>,
}

impl ParseTree {
    /// Height of the tree in rule applications.
    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(ParseTree::depth).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone)]
pub struct Analysis {
    /// The all-red TDAG of the first successful complete parse.
    pub tdag: Tdag,
    /// How many complete parses evaluated successfully.
    pub parse_count: usize,
    /// The tree behind `tdag`.
    pub tree: ParseTree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnalyzeError {
    UnknownToken { token: String },
    /// No complete start-symbol parse; reports the longest chart edge
    /// found as (symbol, start, end).
    NoParse { longest: Option<(String, usize, usize)> },
    Empty,
}

impl fmt::Display for AnalyzeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyzeError::UnknownToken { token } => write!(f, "no lexical rule for `{token}`"),
            AnalyzeError::NoParse { longest: Some((sym, i, j)) } => {
                write!(f, "no complete parse; longest edge {sym} over tokens {i}..{j}")
            }
            AnalyzeError::NoParse { longest: None } => write!(f, "no complete parse"),
            AnalyzeError::Empty => write!(f, "empty input"),
        }
    }
}

impl core::error::Error for AnalyzeError {}

/// Evaluates one skeleton tree into a shared feature structure, returning
/// the class of the tree's LHS constituent.
pub(crate) fn eval_tree(
    tree: &ParseTree,
    grammar: &Grammar,
    fs: &mut FsGraph,
) -> Result<usize, FsError> {
    let rule = &grammar.rules()[tree.rule];
    let mut classes: BTreeMap<&str, usize> = BTreeMap::new();
    for s in rule.symbols() {
        let c = fs.fresh();
        classes.insert(s, c);
    }
    apply_equations(rule, &classes, fs)?;
    if let RuleKind::Phrasal { rhs } = &rule.kind {
        for (symbol, child) in rhs.iter().zip(&tree.children) {
            let child_class = eval_tree(child, grammar, fs)?;
            fs.unify(classes[symbol.as_str()], child_class)?;
        }
    }
    Ok(classes[rule.lhs.as_str()])
}

pub(crate) fn apply_equations(
    rule: &Rule,
    classes: &BTreeMap<&str, usize>,
    fs: &mut FsGraph,
) -> Result<(), FsError> {
    for eq in &rule.equations {
        let lhs = fs.walk(classes[eq.lhs.symbol.as_str()], &eq.lhs.features)?;
        match &eq.rhs {
            EqRhs::Path(p) => {
                let rhs = fs.walk(classes[p.symbol.as_str()], &p.features)?;
                fs.unify(lhs, rhs)?;
            }
            EqRhs::Atom(a) => fs.bind_atom(lhs, a)?,
        }
    }
    Ok(())
}

/// Bottom-up chart parse over the binary grammar: enumerate skeleton
/// trees per (symbol, span), then evaluate each complete tree's equations;
/// the first success in enumeration order (earlier rules first) is the
/// analysis, and the total success count is reported.
pub fn analyze(tokens: &[&str], grammar: &Grammar) -> Result<Analysis, AnalyzeError> {
    if tokens.is_empty() {
        return Err(AnalyzeError::Empty);
    }
    for tok in tokens {
        let known = grammar.rules().iter().any(
            |r| matches!(&r.kind, RuleKind::Lexical { word } if word == tok),
        );
        if !known {
            return Err(AnalyzeError::UnknownToken { token: tok.to_string() });
        }
    }
    let n = tokens.len();
    // chart[i][j] holds (symbol, tree) pairs for tokens[i..j].
    let mut chart: Vec<Vec<Vec<(String, ParseTree)>>> =
        alloc::vec![alloc::vec![Vec::new(); n + 1]; n + 1];
    let unary_cap = grammar.rules().len();
    for span in 1..=n {
        for i in 0..=n - span {
            let j = i + span;
            let mut items: Vec<(String, ParseTree)> = Vec::new();
            if span == 1 {
                for (ri, rule) in grammar.rules().iter().enumerate() {
                    if matches!(&rule.kind, RuleKind::Lexical { word } if word == tokens[i]) {
                        items.push((
                            rule.lhs.clone(),
                            ParseTree { rule: ri, children: Vec::new() },
                        ));
                    }
                }
            }
            for (ri, rule) in grammar.rules().iter().enumerate() {
                let RuleKind::Phrasal { rhs } = &rule.kind else { continue };
                if rhs.len() != 2 {
                    continue;
                }
                for k in i + 1..j {
                    for (sa, ta) in &chart[i][k] {
                        if *sa != rhs[0] {
                            continue;
                        }
                        for (sb, tb) in &chart[k][j] {
                            if *sb != rhs[1] {
                                continue;
                            }
                            items.push((
                                rule.lhs.clone(),
                                ParseTree { rule: ri, children: alloc::vec![ta.clone(), tb.clone()] },
                            ));
                        }
                    }
                }
            }
            // Unary closure, bounded so that cyclic unary rules terminate.
            let mut frontier = items.clone();
            for _ in 0..unary_cap {
                let mut added = Vec::new();
                for (ri, rule) in grammar.rules().iter().enumerate() {
                    let RuleKind::Phrasal { rhs } = &rule.kind else { continue };
                    if rhs.len() != 1 {
                        continue;
                    }
                    for (sym, tree) in &frontier {
                        if *sym == rhs[0] {
                            added.push((
                                rule.lhs.clone(),
                                ParseTree { rule: ri, children: alloc::vec![tree.clone()] },
                            ));
                        }
                    }
                }
                if added.is_empty() {
                    break;
                }
                items.extend(added.iter().cloned());
                frontier = added;
            }
            chart[i][j] = items;
        }
    }
    let complete: Vec<&ParseTree> = chart[0][n]
        .iter()
        .filter(|(sym, _)| sym == grammar.start())
        .map(|(_, t)| t)
        .collect();
    let mut first: Option<Analysis> = None;
    let mut count = 0usize;
    for tree in complete {
        let mut fs = FsGraph::new();
        let Ok(class) = eval_tree(tree, grammar, &mut fs) else { continue };
        let Ok(tdag) = fs.to_tdag(class, Color::Red) else { continue };
        count += 1;
        if first.is_none() {
            first = Some(Analysis { tdag, parse_count: 0, tree: tree.clone() });
        }
    }
    match first {
        Some(mut a) => {
            a.parse_count = count;
            Ok(a)
        }
        None => {
            let mut longest: Option<(String, usize, usize)> = None;
            for i in 0..=n {
                for j in 0..=n {
                    for (sym, _) in &chart[i][j] {
                        let better = match &longest {
                            Some((_, li, lj)) => j - i > lj - li,
                            None => true,
                        };
                        if better {
                            longest = Some((sym.clone(), i, j));
                        }
                    }
                }
            }
            Err(AnalyzeError::NoParse { longest })
        }
    }
}
