//! The TDAG text format.
//!
//! Line-oriented, `#` starts a comment, node/arc lines may appear in any
//! order, `root` must appear exactly once:
//!
//! ```text
//! root <id>
//! node <id> color=<red|yellow|green> [label=<atom>]
//! arc <from-id> <feature> <to-id> color=<red|yellow|green>
//! ```

use std::collections::BTreeMap;

use tricolor_core::{Arc, ArcId, Color, Node, NodeId, Tdag};

use crate::{meaningful_lines, parse_color, TextError};

/// A TDAG together with the node names of its text form. Node `i` of the
/// TDAG carries `names[i]`.
#[derive(Debug, Clone)]
pub struct NamedTdag {
    pub tdag: Tdag,
    pub names: Vec<String>,
}

impl NamedTdag {
    /// Wraps a TDAG with generated names `n0`, `n1`, ...
    pub fn generated(tdag: Tdag) -> NamedTdag {
        let names = (0..tdag.nodes().len()).map(|i| format!("n{i}")).collect();
        NamedTdag { tdag, names }
    }

    pub fn name_of(&self, id: NodeId) -> &str {
        &self.names[id.index()]
    }

    pub fn id_of(&self, name: &str) -> Option<NodeId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| NodeId(i as u32))
    }
}

struct PendingArc {
    line: usize,
    from: String,
    feature: String,
    to: String,
    color: Color,
}

/// Parses the text format. Structural errors (duplicate features, cycles,
/// unreachable nodes) are reported as parse errors; color violations are
/// not — ill-formed TDAGs parse fine so they can be inspected.
pub fn parse_tdag(text: &str) -> Result<NamedTdag, TextError> {
    let mut names: Vec<String> = Vec::new();
    let mut by_name: BTreeMap<String, NodeId> = BTreeMap::new();
    let mut nodes: Vec<Node> = Vec::new();
    let mut arcs: Vec<PendingArc> = Vec::new();
    let mut root: Option<(usize, String)> = None;
    for (line, content) in meaningful_lines(text) {
        let words: Vec<&str> = content.split_whitespace().collect();
        match words[0] {
            "root" => {
                if words.len() != 2 {
                    return Err(TextError::new(line, "expected `root <id>`"));
                }
                if root.is_some() {
                    return Err(TextError::new(line, "`root` declared twice"));
                }
                root = Some((line, words[1].to_string()));
            }
            "node" => {
                if words.len() < 3 {
                    return Err(TextError::new(
                        line,
                        "expected `node <id> color=<c> [label=<atom>]`",
                    ));
                }
                let name = words[1].to_string();
                if by_name.contains_key(&name) {
                    return Err(TextError::new(line, format!("node `{name}` declared twice")));
                }
                let mut color = None;
                let mut label = None;
                for w in &words[2..] {
                    if let Some(c) = w.strip_prefix("color=") {
                        color = Some(parse_color(c, line)?);
                    } else if let Some(l) = w.strip_prefix("label=") {
                        label = Some(l.to_string());
                    } else {
                        return Err(TextError::new(line, format!("unknown attribute `{w}`")));
                    }
                }
                let color = color
                    .ok_or_else(|| TextError::new(line, "node is missing `color=`"))?;
                let id = NodeId(nodes.len() as u32);
                by_name.insert(name.clone(), id);
                names.push(name);
                nodes.push(Node { id, color, label });
            }
            "arc" => {
                if words.len() != 5 {
                    return Err(TextError::new(
                        line,
                        "expected `arc <from> <feature> <to> color=<c>`",
                    ));
                }
                let color = words[4]
                    .strip_prefix("color=")
                    .ok_or_else(|| TextError::new(line, "arc is missing `color=`"))?;
                arcs.push(PendingArc {
                    line,
                    from: words[1].to_string(),
                    feature: words[2].to_string(),
                    to: words[3].to_string(),
                    color: parse_color(color, line)?,
                });
            }
            other => {
                return Err(TextError::new(line, format!("unknown directive `{other}`")));
            }
        }
    }
    let (root_line, root_name) =
        root.ok_or_else(|| TextError::new(text.lines().count() + 1, "missing `root` line"))?;
    let root = *by_name
        .get(&root_name)
        .ok_or_else(|| TextError::new(root_line, format!("root `{root_name}` is not a node")))?;
    let arcs: Vec<Arc> = arcs
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            let resolve = |name: &str| {
                by_name.get(name).copied().ok_or_else(|| {
                    TextError::new(p.line, format!("arc references undeclared node `{name}`"))
                })
            };
            Ok(Arc {
                id: ArcId(i as u32),
                from: resolve(&p.from)?,
                to: resolve(&p.to)?,
                feature: p.feature.clone(),
                color: p.color,
            })
        })
        .collect::<Result<_, TextError>>()?;
    let tdag = Tdag::build(nodes, arcs, root)
        .map_err(|e| TextError::new(0, format!("invalid graph: {e}")))?;
    Ok(NamedTdag { tdag, names })
}

/// Serializes back to the text format. `parse_tdag(serialize_tdag(x))` is
/// structure-identical (`iso_equal`) to `x`.
pub fn serialize_tdag(named: &NamedTdag) -> String {
    let t = &named.tdag;
    let mut out = String::new();
    out.push_str(&format!("root {}\n", named.name_of(t.root())));
    for n in t.nodes() {
        out.push_str(&format!("node {} color={}", named.name_of(n.id), n.color));
        if let Some(l) = &n.label {
            out.push_str(&format!(" label={l}"));
        }
        out.push('\n');
    }
    for a in t.arcs() {
        out.push_str(&format!(
            "arc {} {} {} color={}\n",
            named.name_of(a.from),
            a.feature,
            named.name_of(a.to),
            a.color
        ));
    }
    out
}
