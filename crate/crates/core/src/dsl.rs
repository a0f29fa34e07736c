//! A line-oriented text format for QC/2 circuits (`.qc2` files).
//!
//! ```text
//! # Parity SAT for x1 ⇒ x2
//! lines 2
//! init 00
//! gate H0 0
//! gate H0 1
//! gate EF 1101
//! measure all
//! ```
//!
//! Statements: `lines <n>`, `init <bits>`, `init ket <bits>+<bits>+…`,
//! `gate <NAME> <line> [if <line>]` for the one-line gates, `gate CNOT_A <line>`
//! and `gate CNOT_B <line>` on two adjacent lines, `gate CNOT <control> <target>`,
//! `gate EF <table>` spanning every line, `measure <line>` and `measure all`.
//! A gate with `if <m>` fires only when the latest reading of line `m` was 1.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::prob::Probability;
use crate::qc2::{apply, cnot, ef_gate, ef_lines, standard_gate, BooleanFunction, LineSpan, Register, MAX_LINES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ParseErrorKind {
    Syntax,
    UnknownGate,
    LineOutOfRange,
}

/// A positioned parse failure; `line` and `column` are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub token: String,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.token.is_empty() {
            write!(f, " (at `{}`)", self.token)?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Initial {
    Basis(String),
    /// Sum of basis kets; repeats cancel.
    Ket(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Step {
    /// A standard gate starting at `line`; `condition` names a measured line.
    Gate {
        name: String,
        line: usize,
        condition: Option<usize>,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    Ef {
        table: String,
    },
    Measure {
        line: usize,
    },
    MeasureAll,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircuitAst {
    pub lines: usize,
    pub initial: Initial,
    pub steps: Vec<Step>,
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in code.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, i));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, code.len()));
    }
    out.into_iter()
        .map(|(s, e)| Token {
            text: &code[s..e],
            column: code[..s].chars().count() + 1,
        })
        .collect()
}

struct Parser {
    lines: Option<usize>,
    initial: Option<Initial>,
    steps: Vec<Step>,
    measured: Vec<bool>,
}

fn err(line: usize, column: usize, kind: ParseErrorKind, message: impl Into<String>, token: &str) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
        token: token.to_string(),
        kind,
    }
}

fn is_bits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b == b'0' || b == b'1')
}

const ONE_LINE_GATES: [&str; 6] = ["I", "X", "H0", "H1", "XH0", "XH1"];
const TWO_LINE_GATES: [&str; 2] = ["CNOT_A", "CNOT_B"];

impl Parser {
    fn line_index(&self, ln: usize, tok: &Token<'_>) -> std::result::Result<usize, ParseError> {
        let n = self.lines.expect("checked by caller");
        let v: usize = tok
            .text
            .parse()
            .map_err(|_| err(ln, tok.column, ParseErrorKind::Syntax, "expected a line number", tok.text))?;
        if v >= n {
            return Err(err(
                ln,
                tok.column,
                ParseErrorKind::LineOutOfRange,
                format!("line {v} out of range for {n} lines"),
                tok.text,
            ));
        }
        Ok(v)
    }

    fn statement(&mut self, ln: usize, toks: &[Token<'_>]) -> std::result::Result<(), ParseError> {
        let head = &toks[0];
        let arity = |want: usize, usage: &str| {
            if toks.len() != want {
                let (col, tok) = toks.get(want).map_or((head.column, head.text), |t| (t.column, t.text));
                Err(err(ln, col, ParseErrorKind::Syntax, format!("expected `{usage}`"), tok))
            } else {
                Ok(())
            }
        };
        if let (Some(name), "gate") = (toks.get(1), head.text) {
            let known = ONE_LINE_GATES.contains(&name.text)
                || TWO_LINE_GATES.contains(&name.text)
                || ["CNOT", "EF"].contains(&name.text);
            if !known {
                return Err(err(
                    ln,
                    name.column,
                    ParseErrorKind::UnknownGate,
                    format!("unknown gate {}", name.text),
                    name.text,
                ));
            }
        }
        if head.text != "lines" && self.lines.is_none() {
            return Err(err(ln, head.column, ParseErrorKind::Syntax, "circuit must start with `lines <n>`", head.text));
        }
        match head.text {
            "lines" => {
                if self.lines.is_some() {
                    return Err(err(ln, head.column, ParseErrorKind::Syntax, "duplicate `lines`", head.text));
                }
                arity(2, "lines <n>")?;
                let n = toks[1]
                    .text
                    .parse::<usize>()
                    .ok()
                    .filter(|n| (1..=MAX_LINES).contains(n))
                    .ok_or_else(|| {
                        err(
                            ln,
                            toks[1].column,
                            ParseErrorKind::Syntax,
                            format!("line count must be 1..={MAX_LINES}"),
                            toks[1].text,
                        )
                    })?;
                self.lines = Some(n);
                self.measured = vec![false; n];
            }
            "init" => {
                if self.initial.is_some() {
                    return Err(err(ln, head.column, ParseErrorKind::Syntax, "duplicate `init`", head.text));
                }
                if !self.steps.is_empty() {
                    return Err(err(ln, head.column, ParseErrorKind::Syntax, "`init` must precede every step", head.text));
                }
                let n = self.lines.expect("checked above");
                let check = |tok: &Token<'_>, piece: &str| {
                    if is_bits(piece) && piece.len() == n {
                        Ok(piece.to_string())
                    } else {
                        Err(err(
                            ln,
                            tok.column,
                            ParseErrorKind::Syntax,
                            format!("expected a {n}-bit basis string"),
                            tok.text,
                        ))
                    }
                };
                if toks.len() == 3 && toks[1].text == "ket" {
                    let terms = toks[2]
                        .text
                        .split('+')
                        .map(|p| check(&toks[2], p))
                        .collect::<std::result::Result<Vec<_>, _>>()?;
                    self.initial = Some(Initial::Ket(terms));
                } else {
                    arity(2, "init <bits>` or `init ket <bits>+<bits>")?;
                    self.initial = Some(Initial::Basis(check(&toks[1], toks[1].text)?));
                }
            }
            "gate" => {
                if self.initial.is_none() {
                    return Err(err(ln, head.column, ParseErrorKind::Syntax, "`init` must come before gates", head.text));
                }
                let name = toks
                    .get(1)
                    .ok_or_else(|| err(ln, head.column, ParseErrorKind::Syntax, "expected a gate name", head.text))?;
                let step = self.gate(ln, name, toks)?;
                self.steps.push(step);
            }
            "measure" => {
                if self.initial.is_none() {
                    return Err(err(ln, head.column, ParseErrorKind::Syntax, "`init` must come before measurements", head.text));
                }
                arity(2, "measure <line>` or `measure all")?;
                if toks[1].text == "all" {
                    self.measured.iter_mut().for_each(|m| *m = true);
                    self.steps.push(Step::MeasureAll);
                } else {
                    let line = self.line_index(ln, &toks[1])?;
                    self.measured[line] = true;
                    self.steps.push(Step::Measure { line });
                }
            }
            other => {
                return Err(err(ln, head.column, ParseErrorKind::Syntax, "unknown statement", other));
            }
        }
        Ok(())
    }

    fn gate(&self, ln: usize, name: &Token<'_>, toks: &[Token<'_>]) -> std::result::Result<Step, ParseError> {
        let n = self.lines.expect("checked by caller");
        let usage = |u: &str| {
            let t = toks.last().expect("nonempty");
            err(ln, t.column, ParseErrorKind::Syntax, format!("expected `{u}`"), t.text)
        };
        match name.text {
            g if ONE_LINE_GATES.contains(&g) => {
                let condition = match toks.len() {
                    3 => None,
                    5 if toks[3].text == "if" => {
                        let on = self.line_index(ln, &toks[4])?;
                        if !self.measured[on] {
                            return Err(err(
                                ln,
                                toks[4].column,
                                ParseErrorKind::Syntax,
                                format!("line {on} has not been measured yet"),
                                toks[4].text,
                            ));
                        }
                        Some(on)
                    }
                    _ => return Err(usage(&format!("gate {g} <line> [if <line>]"))),
                };
                Ok(Step::Gate {
                    name: g.to_string(),
                    line: self.line_index(ln, &toks[2])?,
                    condition,
                })
            }
            g if TWO_LINE_GATES.contains(&g) => {
                if toks.len() != 3 {
                    return Err(usage(&format!("gate {g} <line>")));
                }
                let line = self.line_index(ln, &toks[2])?;
                if line + 1 >= n {
                    return Err(err(
                        ln,
                        toks[2].column,
                        ParseErrorKind::LineOutOfRange,
                        format!("{g} needs lines {line} and {}", line + 1),
                        toks[2].text,
                    ));
                }
                Ok(Step::Gate {
                    name: g.to_string(),
                    line,
                    condition: None,
                })
            }
            "CNOT" => {
                if toks.len() != 4 {
                    return Err(usage("gate CNOT <control> <target>"));
                }
                let control = self.line_index(ln, &toks[2])?;
                let target = self.line_index(ln, &toks[3])?;
                if control == target {
                    return Err(err(ln, toks[3].column, ParseErrorKind::Syntax, "control and target coincide", toks[3].text));
                }
                Ok(Step::Cnot { control, target })
            }
            "EF" => {
                if toks.len() != 3 {
                    return Err(usage("gate EF <table>"));
                }
                let t = &toks[2];
                if !is_bits(t.text) || t.text.len() != 2 * n || !t.text.len().is_power_of_two() {
                    return Err(err(
                        ln,
                        t.column,
                        ParseErrorKind::Syntax,
                        format!("EF on {n} lines needs a binary table of length {}", 2 * n),
                        t.text,
                    ));
                }
                Ok(Step::Ef {
                    table: t.text.to_string(),
                })
            }
            other => unreachable!("gate name {other} checked in statement"),
        }
    }
}

pub fn parse(text: &str) -> std::result::Result<CircuitAst, ParseError> {
    let mut p = Parser {
        lines: None,
        initial: None,
        steps: Vec::new(),
        measured: Vec::new(),
    };
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let toks = tokenize(raw);
        if toks.is_empty() {
            continue;
        }
        last = i + 1;
        p.statement(i + 1, &toks)?;
    }
    let eof = |msg: &str| err(last.max(1), 1, ParseErrorKind::Syntax, msg, "");
    let lines = p.lines.ok_or_else(|| eof("missing `lines <n>`"))?;
    let initial = p.initial.ok_or_else(|| eof("missing `init`"))?;
    if p.steps.is_empty() {
        return Err(eof("circuit has no steps"));
    }
    Ok(CircuitAst {
        lines,
        initial,
        steps: p.steps,
    })
}

fn render_step(s: &Step) -> String {
    match s {
        Step::Gate {
            name,
            line,
            condition: None,
        } => format!("gate {name} {line}"),
        Step::Gate {
            name,
            line,
            condition: Some(on),
        } => format!("gate {name} {line} if {on}"),
        Step::Cnot { control, target } => format!("gate CNOT {control} {target}"),
        Step::Ef { table } => format!("gate EF {table}"),
        Step::Measure { line } => format!("measure {line}"),
        Step::MeasureAll => "measure all".to_string(),
    }
}

/// Canonical text form; `parse(&render(ast))` gives back `ast`.
pub fn render(ast: &CircuitAst) -> String {
    let mut out = format!("lines {}\n", ast.lines);
    match &ast.initial {
        Initial::Basis(b) => out += &format!("init {b}\n"),
        Initial::Ket(terms) => out += &format!("init ket {}\n", terms.join("+")),
    }
    for s in &ast.steps {
        out += &render_step(s);
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub statement: String,
    pub state: Register,
    /// Bits read by a measurement, line 0 first.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probability: Option<Probability>,
    /// For a conditional gate, whether it fired.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub applied: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunRecord {
    pub initial: Register,
    pub steps: Vec<StepRecord>,
    /// `(target, bits)` per measurement; target is a line number or `all`.
    pub outcomes: Vec<(String, String)>,
    pub final_state: Register,
}

enum Outcomes<'a> {
    Sampled(Box<ChaCha8Rng>),
    Forced(std::slice::Iter<'a, u8>),
}

impl Outcomes<'_> {
    fn measure(&mut self, reg: &Register, line: usize) -> Result<(u8, Probability, Register)> {
        match self {
            Outcomes::Sampled(rng) => reg.measure_line(line, rng),
            Outcomes::Forced(it) => {
                let &bit = it
                    .next()
                    .ok_or_else(|| Error::Invalid("not enough forced outcomes".into()))?;
                let (p, r) = reg.measure_line_given(line, bit)?;
                Ok((bit, p, r))
            }
        }
    }
}

fn initial_register(ast: &CircuitAst) -> Result<Register> {
    let terms: Vec<&str> = match &ast.initial {
        Initial::Basis(b) => vec![b.as_str()],
        Initial::Ket(t) => t.iter().map(String::as_str).collect(),
    };
    if terms.iter().any(|t| t.len() != ast.lines) {
        return Err(Error::DimMismatch {
            expected: ast.lines,
            found: terms.iter().map(|t| t.len()).find(|&l| l != ast.lines).unwrap_or(0),
        });
    }
    match Register::ket(&terms) {
        Err(Error::ZeroState) => Err(Error::ZeroInitial),
        other => other,
    }
}

fn execute(ast: &CircuitAst, mut source: Outcomes<'_>) -> Result<RunRecord> {
    let initial = initial_register(ast)?;
    let mut reg = initial.clone();
    let mut last: Vec<Option<u8>> = vec![None; ast.lines];
    let mut steps = Vec::new();
    let mut outcomes = Vec::new();
    for step in &ast.steps {
        let mut rec = StepRecord {
            statement: render_step(step),
            state: reg.clone(),
            outcome: None,
            probability: None,
            applied: None,
        };
        match step {
            Step::Gate { name, line, condition } => {
                let g = standard_gate(name)?;
                let fire = match condition {
                    None => true,
                    Some(on) => {
                        let bit = last
                            .get(*on)
                            .copied()
                            .flatten()
                            .ok_or_else(|| Error::Invalid(format!("line {on} has not been measured")))?;
                        rec.applied = Some(bit == 1);
                        bit == 1
                    }
                };
                if fire {
                    reg = apply(&g, &reg, LineSpan::Range { start: *line, width: g.lines() })?;
                }
            }
            Step::Cnot { control, target } => {
                reg = apply(&cnot(ast.lines, *control, *target)?, &reg, LineSpan::All)?;
            }
            Step::Ef { table } => {
                let f = BooleanFunction::from_bits(table)?;
                if ef_lines(f.arity()) != ast.lines {
                    return Err(Error::SizeMismatch {
                        gate: ef_lines(f.arity()),
                        available: ast.lines,
                    });
                }
                reg = apply(&ef_gate(&f), &reg, LineSpan::All)?;
            }
            Step::Measure { line } => {
                let (bit, p, r) = source.measure(&reg, *line)?;
                reg = r;
                last[*line] = Some(bit);
                rec.outcome = Some(bit.to_string());
                rec.probability = Some(p);
                outcomes.push((line.to_string(), bit.to_string()));
            }
            Step::MeasureAll => {
                let mut bits = String::new();
                let mut p = Probability::one();
                for (line, slot) in last.iter_mut().enumerate() {
                    let (bit, pl, r) = source.measure(&reg, line)?;
                    reg = r;
                    p = p * pl;
                    *slot = Some(bit);
                    bits.push(if bit == 1 { '1' } else { '0' });
                }
                rec.outcome = Some(bits.clone());
                rec.probability = Some(p);
                outcomes.push(("all".to_string(), bits));
            }
        }
        rec.state = reg.clone();
        steps.push(rec);
    }
    Ok(RunRecord {
        initial,
        steps,
        outcomes,
        final_state: reg,
    })
}

/// Runs a circuit, sampling measurements from a ChaCha8 stream seeded by `seed`.
pub fn run(ast: &CircuitAst, seed: u64) -> Result<RunRecord> {
    execute(ast, Outcomes::Sampled(Box::new(ChaCha8Rng::seed_from_u64(seed))))
}

/// Runs a circuit with measurement results taken in order from `outcomes`,
/// one bit per measured line. No randomness is involved.
pub fn run_forced(ast: &CircuitAst, outcomes: &[u8]) -> Result<RunRecord> {
    execute(ast, Outcomes::Forced(outcomes.iter()))
}
