//! The grammar text format.
//!
//! ```text
//! start <Symbol>
//! rule <name> <LHS> -> <RHS1> [<RHS2>]
//! rule <name> <LHS> -> "<word>"
//!   <Sym feature...> = <Sym feature...>
//!   <Sym feature...> = <atom>
//! ```
//!
//! Equation lines belong to the most recent `rule` line; `#` comments and
//! blank lines are ignored.

use tricolor_core::grammar::{EqRhs, Equation, FeaturePath, Grammar, Rule, RuleKind};

use crate::{meaningful_lines, TextError};

fn parse_path(s: &str, line: usize) -> Result<FeaturePath, TextError> {
    let inner = s
        .strip_prefix('<')
        .and_then(|s| s.strip_suffix('>'))
        .ok_or_else(|| TextError::new(line, format!("expected `<Sym feature...>`, got `{s}`")))?;
    let mut parts = inner.split_whitespace();
    let symbol = parts
        .next()
        .ok_or_else(|| TextError::new(line, "empty path"))?
        .to_string();
    Ok(FeaturePath { symbol, features: parts.map(str::to_string).collect() })
}

fn parse_equation(content: &str, line: usize) -> Result<Equation, TextError> {
    let (lhs, rhs) = content
        .split_once('=')
        .ok_or_else(|| TextError::new(line, "equation is missing `=`"))?;
    let lhs = parse_path(lhs.trim(), line)?;
    let rhs = rhs.trim();
    let rhs = if rhs.starts_with('<') {
        EqRhs::Path(parse_path(rhs, line)?)
    } else if rhs.is_empty() || rhs.split_whitespace().count() != 1 {
        return Err(TextError::new(line, "equation right side must be a path or one atom"));
    } else {
        EqRhs::Atom(rhs.to_string())
    };
    Ok(Equation { lhs, rhs })
}

pub fn parse_grammar(text: &str) -> Result<Grammar, TextError> {
    let mut rules: Vec<Rule> = Vec::new();
    let mut start: Option<String> = None;
    let mut last_line = 0usize;
    for (line, content) in meaningful_lines(text) {
        last_line = line;
        if let Some(rest) = content.strip_prefix("start ") {
            let sym = rest.trim();
            if sym.split_whitespace().count() != 1 {
                return Err(TextError::new(line, "expected `start <Symbol>`"));
            }
            if start.is_some() {
                return Err(TextError::new(line, "`start` declared twice"));
            }
            start = Some(sym.to_string());
        } else if let Some(rest) = content.strip_prefix("rule ") {
            let (head, arrow_rhs) = rest
                .split_once("->")
                .ok_or_else(|| TextError::new(line, "rule is missing `->`"))?;
            let head: Vec<&str> = head.split_whitespace().collect();
            let [name, lhs] = head[..] else {
                return Err(TextError::new(line, "expected `rule <name> <LHS> -> ...`"));
            };
            let arrow_rhs = arrow_rhs.trim();
            let kind = if let Some(word) = arrow_rhs.strip_prefix('"') {
                let word = word
                    .strip_suffix('"')
                    .ok_or_else(|| TextError::new(line, "unterminated word quote"))?;
                RuleKind::Lexical { word: word.to_string() }
            } else {
                let rhs: Vec<String> =
                    arrow_rhs.split_whitespace().map(str::to_string).collect();
                if rhs.is_empty() || rhs.len() > 2 {
                    return Err(TextError::new(line, "rule needs 1 or 2 constituents"));
                }
                RuleKind::Phrasal { rhs }
            };
            rules.push(Rule {
                name: name.to_string(),
                lhs: lhs.to_string(),
                kind,
                equations: Vec::new(),
            });
        } else if content.starts_with('<') {
            let eq = parse_equation(content, line)?;
            let rule = rules
                .last_mut()
                .ok_or_else(|| TextError::new(line, "equation before any rule"))?;
            rule.equations.push(eq);
        } else {
            return Err(TextError::new(line, format!("unrecognized line `{content}`")));
        }
    }
    let start = start.ok_or_else(|| TextError::new(last_line + 1, "missing `start` line"))?;
    Grammar::new(rules, &start).map_err(|e| TextError::new(0, e.to_string()))
}

pub fn serialize_grammar(grammar: &Grammar) -> String {
    let mut out = format!("start {}\n", grammar.start());
    for rule in grammar.rules() {
        match &rule.kind {
            RuleKind::Lexical { word } => {
                out.push_str(&format!("rule {} {} -> \"{}\"\n", rule.name, rule.lhs, word));
            }
            RuleKind::Phrasal { rhs } => {
                out.push_str(&format!("rule {} {} -> {}\n", rule.name, rule.lhs, rhs.join(" ")));
            }
        }
        for eq in &rule.equations {
            out.push_str(&format!("  {eq}\n"));
        }
    }
    out
}
