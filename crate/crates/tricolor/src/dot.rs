//! Graphviz DOT export. Output is deterministic: nodes in id order, then
//! arcs in id order, so equal TDAGs always serialize byte-identically.

use tricolor_core::Color;

use crate::tdag_text::NamedTdag;

fn dot_color(c: Color) -> &'static str {
    match c {
        Color::Red => "red",
        Color::Yellow => "goldenrod",
        Color::Green => "forestgreen",
    }
}

/// Renders `named` as a DOT digraph. Atoms are drawn as their label in a
/// plain oval; structured nodes as named boxes; the root gets a double
/// border. Element colors carry over directly.
pub fn export_dot(named: &NamedTdag) -> String {
    let t = &named.tdag;
    let mut out = String::from("digraph tdag {\n  rankdir=LR;\n");
    for n in t.nodes() {
        let name = named.name_of(n.id);
        let (label, shape) = match &n.label {
            Some(l) => (l.as_str(), "oval"),
            None => (name, "box"),
        };
        let peripheries = if n.id == t.root() { 2 } else { 1 };
        out.push_str(&format!(
            "  \"{name}\" [label=\"{label}\", shape={shape}, color={}, peripheries={peripheries}];\n",
            dot_color(n.color)
        ));
    }
    for a in t.arcs() {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\", color={}, fontcolor={3}];\n",
            named.name_of(a.from),
            named.name_of(a.to),
            a.feature,
            dot_color(a.color)
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tdag_text::parse_tdag;

    const SAMPLE: &str = "\
root r
node r color=red
node e color=yellow
node w color=yellow label=*WISH
arc r pred e color=yellow
arc e reln w color=yellow
";

    #[test]
    fn export_is_deterministic_and_complete() {
        let named = parse_tdag(SAMPLE).unwrap();
        let dot = export_dot(&named);
        assert_eq!(dot, export_dot(&named));
        assert!(dot.starts_with("digraph tdag {"));
        assert!(dot.contains("\"r\" [label=\"r\", shape=box, color=red, peripheries=2];"));
        assert!(dot.contains("label=\"*WISH\", shape=oval, color=goldenrod"));
        assert!(dot.contains("\"r\" -> \"e\" [label=\"pred\", color=goldenrod, fontcolor=goldenrod];"));
        assert!(dot.ends_with("}\n"));
    }
}
