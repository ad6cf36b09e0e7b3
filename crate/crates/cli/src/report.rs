//! `RESULT key = value` and `CHECK name PASS|FAIL` reports with exact values.

use std::fmt::{self, Display};

use binext::kernel::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Line {
    Result { key: String, value: String },
    Check { name: String, pass: bool },
    Note(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub title: String,
    pub lines: Vec<Line>,
}

/// Membership is only ever evidence for the family that was scanned.
pub fn evidence_label(k: u32) -> String {
    format!("bounded-family (K={k}) evidence")
}

pub const CERTIFIED: &str = "certified";

pub fn vec_text(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            lines: Vec::new(),
        }
    }

    pub fn result(&mut self, key: impl Into<String>, value: impl Display) {
        self.lines.push(Line::Result {
            key: key.into(),
            value: value.to_string(),
        });
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool) -> bool {
        self.lines.push(Line::Check { name: name.into(), pass });
        pass
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.lines.push(Line::Note(text.into()));
    }

    /// Records a closure-membership outcome with its strength label.
    pub fn membership(&mut self, key: impl Into<String>, member: bool, k: u32) {
        let value = if member {
            format!("member [{}]", evidence_label(k))
        } else {
            format!("non-member [{CERTIFIED}]")
        };
        self.result(key, value);
    }

    pub fn extend(&mut self, other: Report) {
        self.lines.extend(other.lines);
    }

    pub fn passed(&self) -> bool {
        self.checks().all(|(_, p)| p)
    }

    pub fn checks(&self) -> impl Iterator<Item = (&str, bool)> {
        self.lines.iter().filter_map(|l| match l {
            Line::Check { name, pass } => Some((name.as_str(), *pass)),
            _ => None,
        })
    }

    pub fn check_named(&self, name: &str) -> Option<bool> {
        self.checks().find(|(n, _)| *n == name).map(|(_, p)| p)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines.iter().find_map(|l| match l {
            Line::Result { key: k, value } if k == key => Some(value.as_str()),
            _ => None,
        })
    }

    /// Only the `RESULT` and `CHECK` lines.
    pub fn machine(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            match l {
                Line::Note(_) => {}
                l => {
                    s.push_str(&l.to_string());
                    s.push('\n');
                }
            }
        }
        s
    }
}

impl Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Result { key, value } => write!(f, "RESULT {key} = {value}"),
            Line::Check { name, pass } => write!(f, "CHECK {name} {}", if *pass { "PASS" } else { "FAIL" }),
            Line::Note(t) => write!(f, "# {t}"),
        }
    }
}

impl Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.title.is_empty() {
            writeln!(f, "# {}", self.title)?;
        }
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}
