//! The transfer-operation text format, one operation per line:
//!
//! ```text
//! paint node <id> <from-color> <to-color>
//! paint arc <from-id> <feature> <from-color> <to-color>
//! add-node <yellow|green> <attach-to> <feature> <new-id> [<label>]
//! add-arc <yellow|green> <from> <feature> <to>
//! ```
//!
//! Node ids are the names of the TDAG file the operations apply to;
//! `add-node` introduces a new name that later lines may use. Because
//! names resolve against the evolving TDAG, parsing and replaying are one
//! step: [`replay_ops`] returns the full trace.

use tricolor_core::transfer::{ElementRef, TransferOp, TransferTrace};
use tricolor_core::Color;

use crate::tdag_text::NamedTdag;
use crate::{meaningful_lines, parse_color, TextError};

/// Parses `text` and applies each operation in order to `start`.
/// Returns the trace and the node names of the final TDAG.
pub fn replay_ops(
    text: &str,
    start: &NamedTdag,
) -> Result<(TransferTrace, NamedTdag), TextError> {
    let mut current = start.tdag.clone();
    let mut names = start.names.clone();
    let mut steps = Vec::new();
    for (line, content) in meaningful_lines(text) {
        let words: Vec<&str> = content.split_whitespace().collect();
        let resolve = |name: &str, names: &[String]| {
            names
                .iter()
                .position(|n| n == name)
                .map(|i| tricolor_core::NodeId(i as u32))
                .ok_or_else(|| TextError::new(line, format!("unknown node `{name}`")))
        };
        let op = match words[0] {
            "paint" => {
                let (target, from_color, to_color) = match words[1..] {
                    ["node", id, c1, c2] => {
                        (ElementRef::Node(resolve(id, &names)?), c1, c2)
                    }
                    ["arc", from, feature, c1, c2] => {
                        let from = resolve(from, &names)?;
                        let arc = current.arc_at(from, feature).ok_or_else(|| {
                            TextError::new(
                                line,
                                format!("no arc `{feature}` at node `{}`", words[2]),
                            )
                        })?;
                        (ElementRef::Arc(arc.id), c1, c2)
                    }
                    _ => {
                        return Err(TextError::new(
                            line,
                            "expected `paint node <id> <c1> <c2>` or `paint arc <from> <feature> <c1> <c2>`",
                        ))
                    }
                };
                let from_color = parse_color(from_color, line)?;
                let to_color = parse_color(to_color, line)?;
                match (from_color, to_color) {
                    (Color::Red, Color::Yellow) => TransferOp::PaintRedToYellow { target },
                    (Color::Yellow, Color::Green) => TransferOp::PaintYellowToGreen { target },
                    _ => {
                        return Err(TextError::new(
                            line,
                            "paints weaken one step: red->yellow or yellow->green",
                        ))
                    }
                }
            }
            "add-node" => {
                let (color, attach, feature, new_name, label) = match words[1..] {
                    [c, attach, feature, new_name] => (c, attach, feature, new_name, None),
                    [c, attach, feature, new_name, label] => {
                        (c, attach, feature, new_name, Some(label.to_string()))
                    }
                    _ => {
                        return Err(TextError::new(
                            line,
                            "expected `add-node <color> <attach-to> <feature> <new-id> [<label>]`",
                        ))
                    }
                };
                if names.iter().any(|n| n == new_name) {
                    return Err(TextError::new(line, format!("name `{new_name}` already used")));
                }
                let attach_to = resolve(attach, &names)?;
                names.push(new_name.to_string());
                match parse_color(color, line)? {
                    Color::Yellow => TransferOp::AddYellowNode {
                        attach_to,
                        feature: feature.to_string(),
                        label,
                    },
                    Color::Green => TransferOp::AddGreenNode {
                        attach_to,
                        feature: feature.to_string(),
                        label,
                    },
                    Color::Red => {
                        return Err(TextError::new(line, "additions are yellow or green"))
                    }
                }
            }
            "add-arc" => {
                let [c, from, feature, to] = words[1..] else {
                    return Err(TextError::new(
                        line,
                        "expected `add-arc <color> <from> <feature> <to>`",
                    ));
                };
                let from = resolve(from, &names)?;
                let to = resolve(to, &names)?;
                match parse_color(c, line)? {
                    Color::Yellow => TransferOp::AddYellowArc {
                        from,
                        feature: feature.to_string(),
                        to,
                    },
                    Color::Green => TransferOp::AddGreenArc {
                        from,
                        feature: feature.to_string(),
                        to,
                    },
                    Color::Red => {
                        return Err(TextError::new(line, "additions are yellow or green"))
                    }
                }
            }
            other => return Err(TextError::new(line, format!("unknown operation `{other}`"))),
        };
        current = tricolor_core::transfer::apply_op(&current, &op)
            .map_err(|e| TextError::new(line, format!("operation rejected: {e}")))?;
        steps.push((op, current.clone()));
    }
    let trace = TransferTrace { initial: start.tdag.clone(), steps };
    Ok((trace, NamedTdag { tdag: current, names }))
}

/// Serializes a trace back to the format, given the node names of the
/// trace's final TDAG (additions included, in order).
pub fn serialize_trace(trace: &TransferTrace, final_names: &[String]) -> String {
    let mut out = String::new();
    let mut before = &trace.initial;
    for (op, after) in &trace.steps {
        let name = |id: tricolor_core::NodeId| final_names[id.index()].clone();
        match op {
            TransferOp::PaintRedToYellow { target } | TransferOp::PaintYellowToGreen { target } => {
                let (c1, c2) = match op {
                    TransferOp::PaintRedToYellow { .. } => ("red", "yellow"),
                    _ => ("yellow", "green"),
                };
                match target {
                    ElementRef::Node(id) => {
                        out.push_str(&format!("paint node {} {c1} {c2}\n", name(*id)));
                    }
                    ElementRef::Arc(id) => {
                        let arc = before.arc(*id);
                        out.push_str(&format!(
                            "paint arc {} {} {c1} {c2}\n",
                            name(arc.from),
                            arc.feature
                        ));
                    }
                }
            }
            TransferOp::AddYellowNode { attach_to, feature, label }
            | TransferOp::AddGreenNode { attach_to, feature, label } => {
                let color = if matches!(op, TransferOp::AddYellowNode { .. }) {
                    "yellow"
                } else {
                    "green"
                };
                let new_id = tricolor_core::NodeId((after.nodes().len() - 1) as u32);
                out.push_str(&format!(
                    "add-node {color} {} {feature} {}",
                    name(*attach_to),
                    name(new_id)
                ));
                if let Some(l) = label {
                    out.push_str(&format!(" {l}"));
                }
                out.push('\n');
            }
            TransferOp::AddYellowArc { from, feature, to }
            | TransferOp::AddGreenArc { from, feature, to } => {
                let color = if matches!(op, TransferOp::AddYellowArc { .. }) {
                    "yellow"
                } else {
                    "green"
                };
                out.push_str(&format!(
                    "add-arc {color} {} {feature} {}\n",
                    name(*from),
                    name(*to)
                ));
            }
        }
        before = after;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tdag_text::parse_tdag;

    const TDAG: &str = "\
root r
node r color=red
node x color=red
node s color=red label=*SINGULAR
arc r f x color=red
arc x num s color=red
";

    #[test]
    fn replay_paints_and_additions() {
        let start = parse_tdag(TDAG).unwrap();
        let ops = "\
paint node s red yellow
add-node green x extra e1 *NEW
add-arc green r g e1
";
        let (trace, end) = replay_ops(ops, &start).unwrap();
        assert_eq!(trace.steps.len(), 3);
        let t = &end.tdag;
        assert!(t.is_well_formed());
        let s = end.id_of("s").unwrap();
        assert_eq!(t.node(s).color, Color::Yellow);
        // The cascade took the num arc along.
        let x = end.id_of("x").unwrap();
        assert_eq!(t.arc_at(x, "num").unwrap().color, Color::Yellow);
        let e1 = end.id_of("e1").unwrap();
        assert_eq!(t.node(e1).label.as_deref(), Some("*NEW"));
        // Round trip.
        let again = serialize_trace(&trace, &end.names);
        let (trace2, end2) = replay_ops(&again, &start).unwrap();
        assert_eq!(trace2.steps.len(), 3);
        assert!(tricolor_core::iso_equal(&end.tdag, &end2.tdag));
    }

    #[test]
    fn rejected_ops_carry_line_numbers() {
        let start = parse_tdag(TDAG).unwrap();
        let err = replay_ops("paint node r red yellow\n", &start).unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.message.contains("rejected"));
    }
}
