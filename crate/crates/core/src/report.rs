//! Human tables and line-delimited `key=value` records.
//!
//! Verdict records always carry the fields
//! `theorem fingerprint lhs rhs agree seed witness`, in that order. Values
//! containing spaces, quotes or `=` are double-quoted with `\"` and `\\`
//! escapes.

use std::fmt::Write as _;

use crate::harness::TheoremVerdict;
use crate::properties::PropertyReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Records,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "records" => Ok(Format::Records),
            _ => Err(format!("unknown format `{s}` (expected text or records)")),
        }
    }
}

fn quote(v: &str) -> String {
    let plain = !v.is_empty() && !v.chars().any(|c| c.is_whitespace() || c == '"' || c == '=' || c == '\\');
    if plain {
        return v.to_string();
    }
    let mut out = String::from("\"");
    for c in v.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// One record line from ordered fields.
pub fn record_line(fields: &[(&str, String)]) -> String {
    fields
        .iter()
        .map(|(k, v)| format!("{k}={}", quote(v)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Split a record line into its fields, in order.
pub fn parse_record(line: &str) -> Result<Vec<(String, String)>, String> {
    let chars: Vec<char> = line.trim_end().chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == ' ' {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && chars[i] != '=' && chars[i] != ' ' {
            i += 1;
        }
        if i >= chars.len() || chars[i] != '=' {
            return Err(format!("field without `=` at column {}", start + 1));
        }
        let key: String = chars[start..i].iter().collect();
        if key.is_empty() {
            return Err(format!("empty key at column {}", start + 1));
        }
        i += 1;
        let mut value = String::new();
        if i < chars.len() && chars[i] == '"' {
            i += 1;
            loop {
                match chars.get(i) {
                    None => return Err(format!("unterminated quote in `{key}`")),
                    Some('"') => {
                        i += 1;
                        break;
                    }
                    Some('\\') => {
                        match chars.get(i + 1) {
                            Some('n') => value.push('\n'),
                            Some(&c @ ('"' | '\\')) => value.push(c),
                            _ => return Err(format!("bad escape in `{key}`")),
                        }
                        i += 2;
                    }
                    Some(&c) => {
                        value.push(c);
                        i += 1;
                    }
                }
            }
        } else {
            while i < chars.len() && chars[i] != ' ' {
                value.push(chars[i]);
                i += 1;
            }
        }
        out.push((key, value));
    }
    Ok(out)
}

/// The fields of a verdict record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerdictRecord {
    pub theorem: String,
    pub fingerprint: String,
    pub lhs: bool,
    pub rhs: bool,
    pub agree: bool,
    pub seed: Option<u64>,
    pub witness: String,
}

const VERDICT_KEYS: [&str; 7] = ["theorem", "fingerprint", "lhs", "rhs", "agree", "seed", "witness"];

impl VerdictRecord {
    pub fn from_verdict(v: &TheoremVerdict) -> VerdictRecord {
        VerdictRecord {
            theorem: v.theorem.name().to_string(),
            fingerprint: v.fingerprint.clone(),
            lhs: v.lhs,
            rhs: v.rhs,
            agree: v.agree,
            seed: v.seed,
            witness: v.witness_summary(),
        }
    }

    pub fn to_line(&self) -> String {
        record_line(&[
            ("theorem", self.theorem.clone()),
            ("fingerprint", self.fingerprint.clone()),
            ("lhs", self.lhs.to_string()),
            ("rhs", self.rhs.to_string()),
            ("agree", self.agree.to_string()),
            ("seed", self.seed.map_or("-".to_string(), |s| s.to_string())),
            ("witness", self.witness.clone()),
        ])
    }

    pub fn parse(line: &str) -> Result<VerdictRecord, String> {
        let fields = parse_record(line)?;
        let keys: Vec<&str> = fields.iter().map(|(k, _)| k.as_str()).collect();
        if keys != VERDICT_KEYS {
            return Err(format!("expected fields {}, found {}", VERDICT_KEYS.join(" "), keys.join(" ")));
        }
        let get = |k: usize| fields[k].1.clone();
        let boolean = |k: usize| -> Result<bool, String> {
            get(k)
                .parse()
                .map_err(|_| format!("`{}` must be true or false", VERDICT_KEYS[k]))
        };
        let seed = match get(5).as_str() {
            "-" => None,
            s => Some(s.parse().map_err(|_| "`seed` must be an integer or -".to_string())?),
        };
        Ok(VerdictRecord {
            theorem: get(0),
            fingerprint: get(1),
            lhs: boolean(2)?,
            rhs: boolean(3)?,
            agree: boolean(4)?,
            seed,
            witness: get(6),
        })
    }
}

pub fn verdict_line(v: &TheoremVerdict) -> String {
    VerdictRecord::from_verdict(v).to_line()
}

/// Verdicts as a table or as records, one per line.
pub fn format_report(verdicts: &[TheoremVerdict], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Records => {
            for v in verdicts {
                out.push_str(&verdict_line(v));
                out.push('\n');
            }
        }
        Format::Text => {
            let width = verdicts
                .iter()
                .map(|v| v.theorem.name().len())
                .chain(["THEOREM".len()])
                .max()
                .unwrap_or(7);
            let _ = writeln!(
                out,
                "{:<width$}  {:<16}  {:<5}  {:<5}  {:<8}  WITNESS",
                "THEOREM", "FINGERPRINT", "LHS", "RHS", "RESULT"
            );
            for v in verdicts {
                let w = v.witness_summary();
                let _ = writeln!(
                    out,
                    "{:<width$}  {:<16}  {:<5}  {:<5}  {:<8}  {}",
                    v.theorem.name(),
                    v.fingerprint,
                    v.lhs,
                    v.rhs,
                    if v.agree { "AGREE" } else { "DISAGREE" },
                    if w.is_empty() { "-" } else { &w }
                );
            }
        }
    }
    out
}

/// A property check on a named ring.
pub fn format_property(ring: &str, report: &PropertyReport, format: Format) -> String {
    let witness = report.witness.as_ref().map_or("-".to_string(), |w| w.to_string());
    match format {
        Format::Records => format!(
            "{}\n",
            record_line(&[
                ("property", report.property.name().to_string()),
                ("ring", ring.to_string()),
                ("holds", report.holds.to_string()),
                ("path", report.path.clone()),
                ("witness", witness),
            ])
        ),
        Format::Text => {
            let mut out = format!("{}({ring}) = {}\n", report.property, report.holds);
            if report.witness.is_some() {
                let _ = writeln!(out, "witness: {witness}");
            }
            let _ = writeln!(out, "path: {}", report.path);
            out
        }
    }
}
