//! The `.tss` instance text format.
//!
//! ```text
//! tss 4
//! n 0 1 orig 0 0
//! n 3 1 aux 2 0 0
//! e 0 3 1
//! ```
//!
//! `n <index> <tau> orig <node> <phase>` or `n <index> <tau> aux <owner>
//! <clause> <phase>` declares each node in index order; `e <from> <to>
//! <multiplicity>` lists edges. Lines starting with `#` are comments.

use std::fmt::Write as _;

use pinset_core::{NodeId, Provenance, TssInstance};

use crate::bn::ParseError;

pub fn serialize_tss(inst: &TssInstance) -> String {
    let mut out = String::new();
    writeln!(out, "tss {}", inst.len()).unwrap();
    for v in 0..inst.len() {
        match inst.provenance(v) {
            Provenance::Original { node, phase } => {
                writeln!(out, "n {v} {} orig {} {phase}", inst.tau(v), node.0).unwrap()
            }
            Provenance::Auxiliary {
                owner,
                clause,
                phase,
            } => writeln!(
                out,
                "n {v} {} aux {} {clause} {phase}",
                inst.tau(v),
                owner.0
            )
            .unwrap(),
        }
    }
    let mut edges: Vec<(usize, usize, u32)> = inst.edges().collect();
    edges.sort_unstable();
    for (u, v, m) in edges {
        writeln!(out, "e {u} {v} {m}").unwrap();
    }
    out
}

struct Fields<'a> {
    line: usize,
    parts: Vec<(usize, &'a str)>,
    next: usize,
}

impl<'a> Fields<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        let mut parts = Vec::new();
        let mut start = None;
        for (k, c) in text.char_indices() {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(k),
                (true, Some(s)) => {
                    parts.push((s, &text[s..k]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            parts.push((s, &text[s..]));
        }
        Self {
            line,
            parts,
            next: 0,
        }
    }

    fn error(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn column(&self) -> usize {
        self.parts
            .get(self.next)
            .or(self.parts.last())
            .map_or(1, |&(k, s)| {
                if self.next < self.parts.len() {
                    k + 1
                } else {
                    k + s.len() + 1
                }
            })
    }

    fn word(&mut self) -> Result<&'a str, ParseError> {
        let col = self.column();
        let (_, s) = *self
            .parts
            .get(self.next)
            .ok_or_else(|| self.error(col, "missing field"))?;
        self.next += 1;
        Ok(s)
    }

    fn parse<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, ParseError> {
        let col = self.column();
        let s = self.word()?;
        s.parse()
            .map_err(|_| self.error(col, format!("invalid {what} '{s}'")))
    }

    fn end(&self) -> Result<(), ParseError> {
        if self.next < self.parts.len() {
            return Err(self.error(self.column(), "unexpected trailing field"));
        }
        Ok(())
    }
}

pub fn parse_tss(text: &str) -> Result<TssInstance, ParseError> {
    let mut declared: Option<usize> = None;
    let mut tau = Vec::new();
    let mut prov = Vec::new();
    let mut edges: Vec<(usize, usize, u32, usize)> = Vec::new();
    let mut last_line = 1;
    for (k, raw) in text.lines().enumerate() {
        last_line = k + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut f = Fields::new(k + 1, raw);
        let tag_col = f.column();
        match f.word()? {
            "tss" => {
                if declared.is_some() {
                    return Err(f.error(tag_col, "duplicate 'tss' header"));
                }
                declared = Some(f.parse("node count")?);
            }
            "n" => {
                if declared.is_none() {
                    return Err(f.error(tag_col, "'n' before the 'tss' header"));
                }
                let col = f.column();
                let idx: usize = f.parse("index")?;
                if idx != tau.len() {
                    return Err(f.error(col, format!("expected node {}, found {idx}", tau.len())));
                }
                let t: i64 = f.parse("threshold")?;
                let kind_col = f.column();
                let p = match f.word()? {
                    "orig" => Provenance::Original {
                        node: NodeId(f.parse("node")?),
                        phase: f.parse("phase")?,
                    },
                    "aux" => Provenance::Auxiliary {
                        owner: NodeId(f.parse("owner")?),
                        clause: f.parse("clause")?,
                        phase: f.parse("phase")?,
                    },
                    other => return Err(f.error(kind_col, format!("unknown node kind '{other}'"))),
                };
                tau.push(t);
                prov.push(p);
            }
            "e" => {
                let u = f.parse("edge source")?;
                let v = f.parse("edge target")?;
                let col = f.column();
                let m: u32 = f.parse("multiplicity")?;
                if m == 0 {
                    return Err(f.error(col, "multiplicity must be positive"));
                }
                edges.push((u, v, m, k + 1));
            }
            other => return Err(f.error(tag_col, format!("unknown record '{other}'"))),
        }
        f.end()?;
    }
    let Some(m) = declared else {
        return Err(ParseError {
            line: last_line,
            column: 1,
            message: "missing 'tss' header".into(),
        });
    };
    if tau.len() != m {
        return Err(ParseError {
            line: last_line,
            column: 1,
            message: format!("header declares {m} nodes, found {}", tau.len()),
        });
    }
    let mut inst = TssInstance::new(tau, prov);
    for (u, v, mult, line) in edges {
        if u >= m || v >= m {
            return Err(ParseError {
                line,
                column: 1,
                message: format!("edge {u} -> {v} out of range for {m} nodes"),
            });
        }
        inst.add_edges(u, v, mult);
    }
    Ok(inst)
}
