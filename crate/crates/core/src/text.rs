//! Text and JSON formats for signals and pseudo-systems.
//!
//! Signal files hold one or more named blocks:
//!
//! ```text
//! signal a dim 1
//! left const 0
//! events 0:1 2:0
//! right const
//! ```
//!
//! System files are self-contained: one `system` block whose `input`,
//! `state` and `map` lines refer to signal blocks in the same file:
//!
//! ```text
//! system f m 1 n 1
//! input a
//! state b
//! map a -> b
//! ```
//!
//! Serialization is canonical: universes sorted, generated names assigned
//! in sorted order, map lines sorted.  Parsing any serialized form yields
//! a structurally equal value.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::bvec::BVec;
use crate::error::{Error, Result};
use crate::properties::{BoundaryReport, StateFunctionReport};
use crate::pseudo_system::PseudoSystem;
use crate::signal::{LeftTail, Pattern, RightTail, Signal};
use crate::time::Time;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NamedSignal {
    pub name: String,
    pub signal: Signal,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SystemDoc {
    pub name: String,
    pub system: PseudoSystem,
}

// ---------------------------------------------------------------------------
// Tokenized lines with positions.

struct Tok<'a> {
    text: &'a str,
    /// 1-based column of the token start.
    col: usize,
}

struct Line<'a> {
    no: usize,
    toks: Vec<Tok<'a>>,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

fn tokenize(src: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let mut toks = Vec::new();
        let mut col = 0usize;
        for piece in line.split_inclusive(char::is_whitespace) {
            let trimmed = piece.trim_end_matches(char::is_whitespace);
            if !trimmed.is_empty() {
                toks.push(Tok {
                    text: trimmed,
                    col: col + 1,
                });
            }
            col += piece.chars().count();
        }
        if !toks.is_empty() {
            out.push(Line { no: i + 1, toks });
        }
    }
    out
}

impl<'a> Line<'a> {
    fn kw(&self) -> &'a str {
        self.toks[0].text
    }

    fn expect_len(&self, n: usize) -> Result<()> {
        if self.toks.len() != n {
            let col = self.toks.last().map(|t| t.col).unwrap_or(1);
            return Err(perr(
                self.no,
                col,
                format!("expected {} tokens on `{}` line, found {}", n, self.kw(), self.toks.len()),
            ));
        }
        Ok(())
    }

    fn arg(&self, i: usize) -> Result<&Tok<'a>> {
        self.toks.get(i).ok_or_else(|| {
            perr(
                self.no,
                self.toks.last().map(|t| t.col).unwrap_or(1),
                format!("missing argument {} on `{}` line", i, self.kw()),
            )
        })
    }
}

fn parse_usize(line: &Line<'_>, i: usize) -> Result<usize> {
    let t = line.arg(i)?;
    t.text
        .parse()
        .map_err(|_| perr(line.no, t.col, format!("expected a number, found `{}`", t.text)))
}

fn parse_bits_tok(line: &Line<'_>, t: &Tok<'_>) -> Result<BVec> {
    BVec::from_bits(t.text).map_err(|e| perr(line.no, t.col, e))
}

/// Parse `T:BITS` pairs from the tail of a line.
fn parse_pairs(line: &Line<'_>, from: usize) -> Result<Vec<(Time, BVec)>> {
    let mut out = Vec::new();
    for t in &line.toks[from..] {
        let (a, b) = t.text.split_once(':').ok_or_else(|| {
            perr(line.no, t.col, format!("expected `time:bits`, found `{}`", t.text))
        })?;
        let time: Time = a
            .parse()
            .map_err(|e: String| perr(line.no, t.col, e))?;
        let bits = BVec::from_bits(b).map_err(|e| perr(line.no, t.col, e))?;
        out.push((time, bits));
    }
    if out.is_empty() {
        let col = line.toks.last().map(|t| t.col).unwrap_or(1);
        return Err(perr(line.no, col, format!("`{}` line needs at least one entry", line.kw())));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Signal blocks.

fn parse_signal_block(lines: &[Line<'_>], at: &mut usize) -> Result<NamedSignal> {
    let header = &lines[*at];
    header.expect_len(4)?;
    let name = header.arg(1)?.text.to_string();
    let dim_kw = header.arg(2)?;
    if dim_kw.text != "dim" {
        return Err(perr(header.no, dim_kw.col, "expected `dim`"));
    }
    let dim = parse_usize(header, 3)?;
    if dim == 0 {
        return Err(perr(header.no, header.arg(3)?.col, "dimension must be positive"));
    }

    let need = |i: usize, what: &str| -> Result<&Line<'_>> {
        lines.get(i).ok_or_else(|| {
            perr(header.no, 1, format!("signal `{name}` is missing its `{what}` line"))
        })
    };

    let lleft = need(*at + 1, "left")?;
    if lleft.kw() != "left" {
        return Err(perr(lleft.no, lleft.toks[0].col, "expected `left` line"));
    }
    let left = match lleft.arg(1)?.text {
        "const" => {
            lleft.expect_len(3)?;
            LeftTail::Const(parse_bits_tok(lleft, lleft.arg(2)?)?)
        }
        "periodic" => {
            let segs = parse_pairs(lleft, 2)?;
            LeftTail::Periodic(Pattern::new(segs).map_err(|e| perr(lleft.no, 1, e.to_string()))?)
        }
        other => {
            return Err(perr(
                lleft.no,
                lleft.arg(1)?.col,
                format!("expected `const` or `periodic`, found `{other}`"),
            ))
        }
    };

    let lev = need(*at + 2, "events")?;
    if lev.kw() != "events" {
        return Err(perr(lev.no, lev.toks[0].col, "expected `events` line"));
    }
    let events = parse_pairs(lev, 1)?;

    let lright = need(*at + 3, "right")?;
    if lright.kw() != "right" {
        return Err(perr(lright.no, lright.toks[0].col, "expected `right` line"));
    }
    let right = match lright.arg(1)?.text {
        "const" => {
            lright.expect_len(2)?;
            RightTail::Const
        }
        "periodic" => {
            let segs = parse_pairs(lright, 2)?;
            RightTail::Periodic(Pattern::new(segs).map_err(|e| perr(lright.no, 1, e.to_string()))?)
        }
        other => {
            return Err(perr(
                lright.no,
                lright.arg(1)?.col,
                format!("expected `const` or `periodic`, found `{other}`"),
            ))
        }
    };

    let signal = Signal::make(dim, left, events, right)
        .map_err(|e| perr(header.no, 1, format!("signal `{name}`: {e}")))?;
    *at += 4;
    Ok(NamedSignal { name, signal })
}

/// Parse a file of signal blocks.
pub fn parse_signal_file(src: &str) -> Result<Vec<NamedSignal>> {
    let lines = tokenize(src);
    let mut out: Vec<NamedSignal> = Vec::new();
    let mut at = 0;
    while at < lines.len() {
        let line = &lines[at];
        if line.kw() != "signal" {
            return Err(perr(line.no, line.toks[0].col, format!("expected `signal`, found `{}`", line.kw())));
        }
        let ns = parse_signal_block(&lines, &mut at)?;
        if out.iter().any(|o| o.name == ns.name) {
            return Err(perr(line.no, 1, format!("duplicate signal name `{}`", ns.name)));
        }
        out.push(ns);
    }
    if out.is_empty() {
        return Err(perr(1, 1, "no signal blocks found"));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// System files.

/// Parse a self-contained system file: one `system` block plus the signal
/// blocks its names refer to, in any order.
pub fn parse_system_file(src: &str) -> Result<SystemDoc> {
    let lines = tokenize(src);
    let mut signals: BTreeMap<String, Signal> = BTreeMap::new();
    struct Header {
        name: String,
        m: usize,
        n: usize,
        line: usize,
    }
    let mut header: Option<Header> = None;
    let mut input_names: Vec<(String, usize, usize)> = Vec::new();
    let mut state_names: Vec<(String, usize, usize)> = Vec::new();
    let mut map_lines: Vec<(String, Vec<String>, usize, usize)> = Vec::new();

    let mut at = 0;
    while at < lines.len() {
        let line = &lines[at];
        match line.kw() {
            "signal" => {
                let ns = parse_signal_block(&lines, &mut at)?;
                if signals.contains_key(&ns.name) {
                    return Err(perr(line.no, 1, format!("duplicate signal name `{}`", ns.name)));
                }
                signals.insert(ns.name, ns.signal);
            }
            "system" => {
                if header.is_some() {
                    return Err(perr(line.no, 1, "more than one `system` block"));
                }
                line.expect_len(6)?;
                if line.arg(2)?.text != "m" {
                    return Err(perr(line.no, line.arg(2)?.col, "expected `m`"));
                }
                if line.arg(4)?.text != "n" {
                    return Err(perr(line.no, line.arg(4)?.col, "expected `n`"));
                }
                header = Some(Header {
                    name: line.arg(1)?.text.to_string(),
                    m: parse_usize(line, 3)?,
                    n: parse_usize(line, 5)?,
                    line: line.no,
                });
                at += 1;
            }
            "input" | "state" => {
                let dst = if line.kw() == "input" {
                    &mut input_names
                } else {
                    &mut state_names
                };
                for t in &line.toks[1..] {
                    dst.push((t.text.to_string(), line.no, t.col));
                }
                at += 1;
            }
            "map" => {
                let u = line.arg(1)?;
                let arrow = line.arg(2)?;
                if arrow.text != "->" {
                    return Err(perr(line.no, arrow.col, "expected `->`"));
                }
                let states = line.toks[3..].iter().map(|t| t.text.to_string()).collect();
                map_lines.push((u.text.to_string(), states, line.no, u.col));
                at += 1;
            }
            other => {
                return Err(perr(
                    line.no,
                    line.toks[0].col,
                    format!("unexpected `{other}` at top level"),
                ))
            }
        }
    }

    let header = header.ok_or_else(|| perr(1, 1, "no `system` block found"))?;
    if header.m == 0 || header.n == 0 {
        return Err(perr(header.line, 1, "dimensions must be positive"));
    }
    let resolve = |name: &str, line: usize, col: usize, dim: usize| -> Result<Signal> {
        let s = signals
            .get(name)
            .ok_or_else(|| perr(line, col, format!("unknown signal name `{name}`")))?;
        if s.dim() != dim {
            return Err(perr(
                line,
                col,
                format!("signal `{name}` has dimension {}, expected {dim}", s.dim()),
            ));
        }
        Ok(s.clone())
    };

    let mut inputs = Vec::new();
    let mut input_index: BTreeMap<String, usize> = BTreeMap::new();
    for (name, lno, col) in &input_names {
        if input_index.contains_key(name) {
            return Err(perr(*lno, *col, format!("input `{name}` listed twice")));
        }
        input_index.insert(name.clone(), inputs.len());
        inputs.push(resolve(name, *lno, *col, header.m)?);
    }
    let mut states = Vec::new();
    let mut state_index: BTreeMap<String, usize> = BTreeMap::new();
    for (name, lno, col) in &state_names {
        if state_index.contains_key(name) {
            return Err(perr(*lno, *col, format!("state `{name}` listed twice")));
        }
        state_index.insert(name.clone(), states.len());
        states.push(resolve(name, *lno, *col, header.n)?);
    }
    let mut relation = Vec::new();
    for (uname, xnames, lno, col) in &map_lines {
        let iu = *input_index
            .get(uname)
            .ok_or_else(|| perr(*lno, *col, format!("`{uname}` is not a declared input")))?;
        for xname in xnames {
            let ix = *state_index
                .get(xname)
                .ok_or_else(|| perr(*lno, *col, format!("`{xname}` is not a declared state")))?;
            relation.push((iu, ix));
        }
    }
    let system = PseudoSystem::new(header.m, header.n, inputs, states, &relation)
        .map_err(|e| perr(header.line, 1, e.to_string()))?;
    Ok(SystemDoc {
        name: header.name,
        system,
    })
}

// ---------------------------------------------------------------------------
// Serialization.

pub fn format_signal(name: &str, s: &Signal) -> String {
    format!("signal {} dim {}\n{}\n", name, s.dim(), s)
}

/// Canonical system serialization: generated names `u0, u1, ...` and
/// `x0, x1, ...` follow the sorted universes; map lines are sorted; all
/// referenced signal blocks are appended.
pub fn format_system(name: &str, f: &PseudoSystem) -> String {
    let mut out = format!("system {} m {} n {}\n", name, f.input_dim(), f.state_dim());
    let unames: Vec<String> = (0..f.inputs().len()).map(|i| format!("u{i}")).collect();
    let xnames: Vec<String> = (0..f.states().len()).map(|i| format!("x{i}")).collect();
    if !unames.is_empty() {
        out.push_str(&format!("input {}\n", unames.join(" ")));
    }
    if !xnames.is_empty() {
        out.push_str(&format!("state {}\n", xnames.join(" ")));
    }
    let mut by_input: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (iu, ix) in f.pairs() {
        by_input.entry(iu).or_default().push(ix);
    }
    for (iu, ixs) in &by_input {
        let names: Vec<&str> = ixs.iter().map(|ix| xnames[*ix].as_str()).collect();
        out.push_str(&format!("map {} -> {}\n", unames[*iu], names.join(" ")));
    }
    for (i, u) in f.inputs().iter().enumerate() {
        out.push('\n');
        out.push_str(&format_signal(&unames[i], u));
    }
    for (i, x) in f.states().iter().enumerate() {
        out.push('\n');
        out.push_str(&format_signal(&xnames[i], x));
    }
    out
}

// ---------------------------------------------------------------------------
// JSON mirrors.

fn tail_json_left(t: &LeftTail) -> Value {
    match t {
        LeftTail::Const(v) => json!({"kind": "const", "value": v.to_string()}),
        LeftTail::Periodic(p) => json!({"kind": "periodic", "pattern": pattern_json(p)}),
    }
}

fn tail_json_right(t: &RightTail) -> Value {
    match t {
        RightTail::Const => json!({"kind": "const"}),
        RightTail::Periodic(p) => json!({"kind": "periodic", "pattern": pattern_json(p)}),
    }
}

fn pattern_json(p: &Pattern) -> Value {
    Value::Array(
        p.segs()
            .iter()
            .map(|(d, v)| json!({"duration": d.to_string(), "value": v.to_string()}))
            .collect(),
    )
}

pub fn signal_to_json(name: &str, s: &Signal) -> Value {
    json!({
        "name": name,
        "dim": s.dim(),
        "left": tail_json_left(s.left_tail()),
        "events": s.events().iter()
            .map(|(t, v)| json!({"time": t.to_string(), "value": v.to_string()}))
            .collect::<Vec<_>>(),
        "right": tail_json_right(s.right_tail()),
    })
}

pub fn system_to_json(name: &str, f: &PseudoSystem) -> Value {
    let mut by_input: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (iu, ix) in f.pairs() {
        by_input.entry(iu).or_default().push(ix);
    }
    json!({
        "name": name,
        "m": f.input_dim(),
        "n": f.state_dim(),
        "inputs": f.inputs().iter().enumerate()
            .map(|(i, s)| signal_to_json(&format!("u{i}"), s)).collect::<Vec<_>>(),
        "states": f.states().iter().enumerate()
            .map(|(i, s)| signal_to_json(&format!("x{i}"), s)).collect::<Vec<_>>(),
        "map": by_input.iter()
            .map(|(iu, ixs)| json!({"input": iu, "states": ixs}))
            .collect::<Vec<_>>(),
    })
}

pub fn boundary_report_to_json(r: &BoundaryReport) -> Value {
    json!({
        "side": serde_json::to_value(r.side).unwrap(),
        "state_level": serde_json::to_value(r.state_level).unwrap(),
        "constant_value": r.constant_value.as_ref().map(|v| v.to_string()),
        "time_level": serde_json::to_value(r.time_level).unwrap(),
        "cell": serde_json::to_value(r.cell).unwrap(),
        "vacuous": r.vacuous,
        "boundary_exclusive": r.boundary_exclusive,
        "global_instant": r.global_instant.map(|t| t.to_string()),
        "per_input": r.per_input.iter().map(|e| json!({
            "input": signal_to_json("", &e.input),
            "values": e.values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "extremal_instant": e.extremal_instant.map(|t| t.to_string()),
        })).collect::<Vec<_>>(),
    })
}

pub fn state_function_to_json(r: &StateFunctionReport) -> Value {
    json!({
        "side": serde_json::to_value(r.side).unwrap(),
        "phi": r.phi.iter().map(|(u, set)| json!({
            "input": signal_to_json("", u),
            "values": set.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "theta": r.theta.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    })
}
