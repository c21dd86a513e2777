//! The `.bn` network text format and the `name = expression` import shim.
//!
//! ```text
//! nodes x1 x2 x3
//! node x1 = COPY(x1)
//! node x2 = THRESH(+x1, -x3; tau=1)
//! node x3 = OR(x1, x2)
//! attractor 111
//! ```
//!
//! See `docs/bn-format.md` for the full grammar.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use pinset_core::{NodeId, RegulatoryNetwork, StateVector, UpdateRule};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A parsed `.bn` file: the network and an optional attractor (one state
/// for a fixed point, several for a cycle).
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkDocument {
    pub network: RegulatoryNetwork,
    pub attractor: Option<Vec<StateVector>>,
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

/// Whether `name` can be written in a `.bn` document.
pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if is_name_start(c))
        && chars.all(is_name_char)
        && !KEYWORDS.contains(&name)
}

const KEYWORDS: &[&str] = &["nodes", "node", "attractor"];

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    names: &'a BTreeMap<String, usize>,
}

impl<'a> Cursor<'a> {
    fn new(text: &str, line: usize, names: &'a BTreeMap<String, usize>) -> Self {
        Self {
            chars: text.chars().collect(),
            pos: 0,
            line,
            names,
        }
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: pos + 1,
            message: message.into(),
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        self.error_at(self.pos, message)
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            let message = match self.peek() {
                Some(found) => format!("expected '{c}', found '{found}'"),
                None => format!("expected '{c}', found end of line"),
            };
            Err(self.error(message))
        }
    }

    fn expect_str(&mut self, s: &str) -> Result<(), ParseError> {
        for c in s.chars() {
            self.expect(c)?;
        }
        Ok(())
    }

    fn word(&mut self) -> Result<(usize, String), ParseError> {
        self.skip_ws();
        let start = self.pos;
        if !self.chars.get(self.pos).is_some_and(|&c| is_name_start(c)) {
            return Err(self.error("expected a name"));
        }
        while self.chars.get(self.pos).is_some_and(|&c| is_name_char(c)) {
            self.pos += 1;
        }
        Ok((start, self.chars[start..self.pos].iter().collect()))
    }

    fn node(&mut self) -> Result<NodeId, ParseError> {
        let (start, name) = self.word()?;
        self.names
            .get(&name)
            .map(|&i| NodeId(i))
            .ok_or_else(|| self.error_at(start, format!("undeclared node '{name}'")))
    }

    fn bit(&mut self) -> Result<bool, ParseError> {
        match self.peek() {
            Some('0') => {
                self.pos += 1;
                Ok(false)
            }
            Some('1') => {
                self.pos += 1;
                Ok(true)
            }
            _ => Err(self.error("expected 0 or 1")),
        }
    }

    fn bits(&mut self) -> Result<Vec<bool>, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.chars.get(self.pos), Some('0' | '1')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a bit string"));
        }
        Ok(self.chars[start..self.pos]
            .iter()
            .map(|&c| c == '1')
            .collect())
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|&c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E'))
        {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.error_at(start, format!("invalid number '{text}'"))),
        }
    }

    fn end(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
        }
    }

    /// Comma-separated items up to (not including) `stop`, possibly empty.
    fn list<T>(
        &mut self,
        stop: char,
        mut item: impl FnMut(&mut Self) -> Result<T, ParseError>,
    ) -> Result<Vec<T>, ParseError> {
        let mut out = Vec::new();
        if self.peek() == Some(stop) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if !self.eat(',') {
                return Ok(out);
            }
        }
    }

    fn distinct(&self, start: usize, ids: &[NodeId]) -> Result<(), ParseError> {
        let set: BTreeSet<NodeId> = ids.iter().copied().collect();
        if set.len() != ids.len() {
            return Err(self.error_at(start, "repeated input"));
        }
        Ok(())
    }

    fn rule(&mut self) -> Result<UpdateRule, ParseError> {
        let (start, head) = self.word()?;
        self.expect('(')?;
        let args_start = self.pos;
        let rule = match head.as_str() {
            "CONST" => UpdateRule::constant(self.bit()?),
            "COPY" | "NOT" => {
                let ids = self.list(')', Self::node)?;
                if ids.len() != 1 {
                    return Err(
                        self.error_at(start, format!("{head} takes 1 input, got {}", ids.len()))
                    );
                }
                if head == "COPY" {
                    UpdateRule::copy(ids[0])
                } else {
                    UpdateRule::negation(ids[0])
                }
            }
            "AND" | "OR" => {
                let ids = self.list(')', Self::node)?;
                if ids.is_empty() {
                    return Err(self.error_at(start, format!("{head} needs at least 1 input")));
                }
                self.distinct(args_start, &ids)?;
                if head == "AND" {
                    UpdateRule::and(&ids)
                } else {
                    UpdateRule::or(&ids)
                }
            }
            "TABLE" => {
                let ids = self.list(';', Self::node)?;
                self.distinct(args_start, &ids)?;
                self.expect(';')?;
                let bits_at = {
                    self.skip_ws();
                    self.pos
                };
                let table = self.bits()?;
                if ids.len() > 20 || table.len() != 1 << ids.len() {
                    return Err(self.error_at(
                        bits_at,
                        format!(
                            "TABLE with {} inputs needs {} bits, got {}",
                            ids.len(),
                            1u64 << ids.len().min(63),
                            table.len()
                        ),
                    ));
                }
                UpdateRule::from_fn(&ids, |given| {
                    let code = given.iter().fold(0usize, |acc, &b| acc << 1 | b as usize);
                    table[code]
                })
            }
            "THRESH" => {
                let terms = self.list(';', |c| {
                    let sign_at = {
                        c.skip_ws();
                        c.pos
                    };
                    let signed = matches!(c.chars.get(sign_at), Some('+' | '-'))
                        && c.chars.get(sign_at + 1).is_some_and(|&n| is_name_start(n));
                    if signed {
                        let w = if c.chars[sign_at] == '+' { 1.0 } else { -1.0 };
                        c.pos += 1;
                        Ok((c.node()?, w))
                    } else {
                        let w = c.number()?;
                        c.expect('*')?;
                        Ok((c.node()?, w))
                    }
                })?;
                let ids: Vec<NodeId> = terms.iter().map(|t| t.0).collect();
                self.distinct(args_start, &ids)?;
                self.expect(';')?;
                self.expect_str("tau")?;
                self.expect('=')?;
                let tau = self.number()?;
                UpdateRule::Threshold {
                    inputs: ids,
                    weights: terms.iter().map(|t| t.1).collect(),
                    tau,
                }
            }
            "NC" => {
                let terms = self.list(';', |c| {
                    let j = c.node()?;
                    c.expect(':')?;
                    let b = c.bit()?;
                    c.expect_str("->")?;
                    let a = c.bit()?;
                    Ok((j, b, a))
                })?;
                let ids: Vec<NodeId> = terms.iter().map(|t| t.0).collect();
                self.distinct(args_start, &ids)?;
                self.expect(';')?;
                self.expect_str("default")?;
                self.expect('=')?;
                let default = self.bit()?;
                UpdateRule::NestedCanalyzing {
                    order: ids,
                    canalyzing: terms.iter().map(|t| t.1).collect(),
                    canalyzed: terms.iter().map(|t| t.2).collect(),
                    default,
                }
            }
            "ANY" => {
                let mut alts = vec![self.rule()?];
                while self.eat('|') {
                    alts.push(self.rule()?);
                }
                if alts.iter().any(|r| matches!(r, UpdateRule::RuleSet(_))) {
                    return Err(self.error_at(start, "ANY cannot be nested"));
                }
                UpdateRule::RuleSet(alts)
            }
            other => return Err(self.error_at(start, format!("unknown rule '{other}'"))),
        };
        self.expect(')')?;
        Ok(rule)
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(k) => &line[..k],
        None => line,
    }
}

/// Parses a `.bn` document.
pub fn parse_document(text: &str) -> Result<NetworkDocument, ParseError> {
    let empty = BTreeMap::new();
    let mut names: Option<(usize, Vec<String>, BTreeMap<String, usize>)> = None;
    let mut rules: Vec<Option<UpdateRule>> = Vec::new();
    let mut attractor: Option<Vec<StateVector>> = None;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let body = strip_comment(raw);
        if body.trim().is_empty() {
            continue;
        }
        let index = names.as_ref().map_or(&empty, |n| &n.2);
        let mut c = Cursor::new(body, line_no, index);
        let (kw_at, kw) = c.word()?;
        match kw.as_str() {
            "nodes" => {
                if names.is_some() {
                    return Err(c.error_at(kw_at, "duplicate 'nodes' header"));
                }
                let mut list = Vec::new();
                let mut map = BTreeMap::new();
                while c.peek().is_some() {
                    let (at, name) = c.word()?;
                    if KEYWORDS.contains(&name.as_str()) {
                        return Err(c.error_at(at, format!("'{name}' is reserved")));
                    }
                    if map.insert(name.clone(), list.len()).is_some() {
                        return Err(c.error_at(at, format!("node '{name}' declared twice")));
                    }
                    list.push(name);
                }
                if list.is_empty() {
                    return Err(c.error("'nodes' needs at least one name"));
                }
                rules = vec![None; list.len()];
                names = Some((line_no, list, map));
            }
            "node" => {
                if names.is_none() {
                    return Err(c.error_at(kw_at, "'node' before the 'nodes' header"));
                }
                let (at, name) = c.word()?;
                let i = *index
                    .get(&name)
                    .ok_or_else(|| c.error_at(at, format!("undeclared node '{name}'")))?;
                if rules[i].is_some() {
                    return Err(c.error_at(at, format!("node '{name}' defined twice")));
                }
                c.expect('=')?;
                let rule = c.rule()?;
                c.end()?;
                rules[i] = Some(rule);
            }
            "attractor" => {
                if attractor.is_some() {
                    return Err(c.error_at(kw_at, "duplicate 'attractor' line"));
                }
                let n = rules.len();
                let mut states = Vec::new();
                while c.peek().is_some() {
                    c.skip_ws();
                    let at = c.pos;
                    let bits = c.bits()?;
                    if bits.len() != n {
                        return Err(c.error_at(
                            at,
                            format!("state has {} bits, network has {n} nodes", bits.len()),
                        ));
                    }
                    states.push(StateVector::from_bools(&bits));
                    if c.peek()
                        .is_some_and(|ch| !ch.is_whitespace() && ch != '0' && ch != '1')
                    {
                        return Err(c.error("expected a bit string"));
                    }
                }
                if states.is_empty() {
                    return Err(c.error("'attractor' needs at least one state"));
                }
                attractor = Some(states);
            }
            other => return Err(c.error_at(kw_at, format!("unknown statement '{other}'"))),
        }
    }
    let Some((header_line, list, _)) = names else {
        return Err(ParseError {
            line: text.lines().count().max(1),
            column: 1,
            message: "missing 'nodes' header".into(),
        });
    };
    let mut done = Vec::with_capacity(list.len());
    for (i, rule) in rules.into_iter().enumerate() {
        match rule {
            Some(r) => done.push(r),
            None => {
                return Err(ParseError {
                    line: header_line,
                    column: 1,
                    message: format!("node '{}' has no rule", list[i]),
                })
            }
        }
    }
    let network = RegulatoryNetwork::with_names(list, done).map_err(|e| ParseError {
        line: header_line,
        column: 1,
        message: e.to_string(),
    })?;
    Ok(NetworkDocument { network, attractor })
}

pub fn parse_network(text: &str) -> Result<RegulatoryNetwork, ParseError> {
    parse_document(text).map(|d| d.network)
}

fn write_rule(out: &mut String, net: &RegulatoryNetwork, rule: &UpdateRule) -> fmt::Result {
    let name = |j: &NodeId| net.name(*j);
    let bit = |b: bool| if b { '1' } else { '0' };
    match rule {
        UpdateRule::TruthTable { inputs, table } if inputs.is_empty() => {
            write!(out, "CONST({})", bit(table[0]))
        }
        UpdateRule::TruthTable { inputs, table } => {
            let ids: Vec<&str> = inputs.iter().map(name).collect();
            let bits: String = table.iter().map(|&b| bit(b)).collect();
            write!(out, "TABLE({}; {bits})", ids.join(", "))
        }
        UpdateRule::Threshold {
            inputs,
            weights,
            tau,
        } => {
            let terms: Vec<String> = inputs
                .iter()
                .zip(weights)
                .map(|(j, &w)| {
                    if w == 1.0 {
                        format!("+{}", name(j))
                    } else if w == -1.0 {
                        format!("-{}", name(j))
                    } else {
                        format!("{w}*{}", name(j))
                    }
                })
                .collect();
            write!(out, "THRESH({}; tau={tau})", terms.join(", "))
        }
        UpdateRule::NestedCanalyzing {
            order,
            canalyzing,
            canalyzed,
            default,
        } => {
            let terms: Vec<String> = order
                .iter()
                .zip(canalyzing.iter().zip(canalyzed))
                .map(|(j, (&b, &a))| format!("{}:{}->{}", name(j), bit(b), bit(a)))
                .collect();
            write!(out, "NC({}; default={})", terms.join(", "), bit(*default))
        }
        UpdateRule::RuleSet(alts) => {
            out.push_str("ANY(");
            for (k, alt) in alts.iter().enumerate() {
                if k > 0 {
                    out.push_str(" | ");
                }
                write_rule(out, net, alt)?;
            }
            out.push(')');
            Ok(())
        }
    }
}

/// Canonical text of a network. Node names must satisfy [`is_valid_name`].
pub fn serialize_document(net: &RegulatoryNetwork, attractor: Option<&[StateVector]>) -> String {
    let mut out = String::new();
    out.push_str("nodes");
    for name in net.names() {
        out.push(' ');
        out.push_str(name);
    }
    out.push('\n');
    for (i, rule) in net.rules().iter().enumerate() {
        out.push_str("node ");
        out.push_str(net.name(NodeId(i)));
        out.push_str(" = ");
        write_rule(&mut out, net, rule).expect("writing to a String");
        out.push('\n');
    }
    if let Some(states) = attractor {
        out.push_str("attractor");
        for s in states {
            out.push(' ');
            out.push_str(&s.to_bit_string());
        }
        out.push('\n');
    }
    out
}

pub fn serialize_network(net: &RegulatoryNetwork) -> String {
    serialize_document(net, None)
}

#[derive(Debug, Clone)]
enum Expr {
    Const(bool),
    Var(usize),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn eval(&self, value: &impl Fn(usize) -> bool) -> bool {
        match self {
            Expr::Const(b) => *b,
            Expr::Var(j) => value(*j),
            Expr::Not(e) => !e.eval(value),
            Expr::And(a, b) => a.eval(value) && b.eval(value),
            Expr::Or(a, b) => a.eval(value) || b.eval(value),
        }
    }

    fn vars(&self, out: &mut BTreeSet<usize>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(j) => {
                out.insert(*j);
            }
            Expr::Not(e) => e.vars(out),
            Expr::And(a, b) | Expr::Or(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }
}

impl Cursor<'_> {
    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        let end = self.pos + word.len();
        if end > self.chars.len() {
            return false;
        }
        let here: String = self.chars[self.pos..end].iter().collect();
        let boundary = !self.chars.get(end).is_some_and(|&c| is_name_char(c));
        if here.eq_ignore_ascii_case(word) && boundary {
            self.pos = end;
            true
        } else {
            false
        }
    }

    fn expr_or(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.expr_and()?;
        while self.eat('|') || self.keyword("or") {
            lhs = Expr::Or(Box::new(lhs), Box::new(self.expr_and()?));
        }
        Ok(lhs)
    }

    fn expr_and(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.expr_unary()?;
        while self.eat('&') || self.keyword("and") {
            lhs = Expr::And(Box::new(lhs), Box::new(self.expr_unary()?));
        }
        Ok(lhs)
    }

    fn expr_unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('!') || self.eat('~') || self.keyword("not") {
            return Ok(Expr::Not(Box::new(self.expr_unary()?)));
        }
        if self.eat('(') {
            let e = self.expr_or()?;
            self.expect(')')?;
            return Ok(e);
        }
        match self.peek() {
            Some('0' | '1') => Ok(Expr::Const(self.bit()?)),
            Some(c) if is_name_start(c) => Ok(Expr::Var(self.node()?.0)),
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of expression")),
        }
    }
}

/// Reads plain Boolean rules, one `name = expression` per line, with `&`,
/// `|`, `!` (or `and`, `or`, `not`), parentheses and the constants `0`, `1`.
/// Nodes are numbered in order of their defining lines.
pub fn import_rules(text: &str) -> Result<RegulatoryNetwork, ParseError> {
    let empty = BTreeMap::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut names = Vec::new();
    let mut lines = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let body = strip_comment(raw);
        if body.trim().is_empty() {
            continue;
        }
        let mut c = Cursor::new(body, k + 1, &empty);
        let (at, name) = c.word()?;
        if index.insert(name.clone(), names.len()).is_some() {
            return Err(c.error_at(at, format!("node '{name}' defined twice")));
        }
        c.expect('=')?;
        names.push(name);
        lines.push((k + 1, body, c.pos));
    }
    if names.is_empty() {
        return Err(ParseError {
            line: 1,
            column: 1,
            message: "no rules found".into(),
        });
    }
    let mut rules = Vec::with_capacity(names.len());
    for (line, body, start) in lines {
        let mut c = Cursor::new(body, line, &index);
        c.pos = start;
        let expr = c.expr_or()?;
        c.end()?;
        let mut vars = BTreeSet::new();
        expr.vars(&mut vars);
        let inputs: Vec<NodeId> = vars.iter().map(|&j| NodeId(j)).collect();
        rules.push(UpdateRule::from_fn(&inputs, |given| {
            expr.eval(&|j| given[inputs.binary_search(&NodeId(j)).expect("collected var")])
        }));
    }
    RegulatoryNetwork::with_names(names, rules).map_err(|e| ParseError {
        line: 1,
        column: 1,
        message: e.to_string(),
    })
}
