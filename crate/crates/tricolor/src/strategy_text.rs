//! The strategy-table text format, one strategy per line, in priority
//! order:
//!
//! ```text
//! strategy <name> match-feature=<pattern> action=<paint-yellow|paint-green>
//! ```

use tricolor_core::transfer::{FeaturePattern, Strategy, StrategyAction, StrategyTable};

use crate::{meaningful_lines, TextError};

pub fn parse_strategies(text: &str) -> Result<StrategyTable, TextError> {
    let mut strategies = Vec::new();
    for (line, content) in meaningful_lines(text) {
        let words: Vec<&str> = content.split_whitespace().collect();
        let ["strategy", name, rest @ ..] = &words[..] else {
            return Err(TextError::new(
                line,
                "expected `strategy <name> match-feature=<pattern> action=<a>`",
            ));
        };
        if strategies.iter().any(|s: &Strategy| s.name == *name) {
            return Err(TextError::new(line, format!("strategy `{name}` declared twice")));
        }
        let mut pattern = None;
        let mut action = None;
        for w in rest {
            if let Some(p) = w.strip_prefix("match-feature=") {
                pattern = Some(FeaturePattern::new(p));
            } else if let Some(a) = w.strip_prefix("action=") {
                action = Some(match a {
                    "paint-yellow" => StrategyAction::PaintYellow,
                    "paint-green" => StrategyAction::PaintGreen,
                    other => {
                        return Err(TextError::new(line, format!("unknown action `{other}`")))
                    }
                });
            } else {
                return Err(TextError::new(line, format!("unknown attribute `{w}`")));
            }
        }
        let pattern =
            pattern.ok_or_else(|| TextError::new(line, "strategy is missing `match-feature=`"))?;
        let action =
            action.ok_or_else(|| TextError::new(line, "strategy is missing `action=`"))?;
        strategies.push(Strategy { name: name.to_string(), pattern, action });
    }
    Ok(StrategyTable { strategies })
}

pub fn serialize_strategies(table: &StrategyTable) -> String {
    let mut out = String::new();
    for s in &table.strategies {
        out.push_str(&format!(
            "strategy {} match-feature={} action={}\n",
            s.name,
            s.pattern.as_text(),
            s.action.name()
        ));
    }
    out
}
