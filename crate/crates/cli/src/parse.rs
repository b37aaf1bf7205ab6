// SPDX-License-Identifier: Apache-2.0

//! Line-oriented scenario parser.
//!
//! ```text
//! declare <shutter|photon|ifm|bomb> <label>
//! prep <label>... basis <digit|+|->...
//! prep <label>... amps <complex>...
//! apply H <photon> | X <photon> if <bit> | Z <photon> if <bit>
//! apply Sh <shutter> <photon> | cell <shutter> <photon>
//! measure <label> <z|pm> -> <bit>
//! write <photon> -> <shutter> bit <bit>
//! read <shutter> bit <bit> -> <photon> bit <bit>
//! cnot <photon> <photon> via <shutter> <shutter> [bits <a> <c> <b> <d>]
//! ifm single <photon> theta <angle> cycles <n> bomb <present|absent> -> <bit>
//! ifm nested <ifm> <bomb> theta <angle> cycles <n> -> <bit>
//! expect state <label>... amps <complex>... fidelity <x>
//! expect prob <bit>=<0|1>... <p> [tol <x>]
//! expect branches <n>
//! ```
//!
//! `#` starts a comment. Angles are radians or `[k*]pi[/m]`. Complex
//! numbers are written `0.6`, `0.8i`, `0.6-0.8i`.

use shutter_core::{Complex64, MeasurementBasis, SubsystemKind};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

use crate::scenario::{
    Angle, BasisDigit, Expectation, Gate, Init, Item, Located, Scenario, Statement,
};

/// Amplitude lists must be normalized to this tolerance.
pub const NORMALIZATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagnosticKind {
    #[error("unexpected end of line, expected {0}")]
    UnexpectedEnd(String),
    #[error("expected {expected}, found `{found}`")]
    Expected { expected: String, found: String },
    #[error("unknown statement `{0}`")]
    UnknownStatement(String),
    #[error("invalid label `{0}`")]
    InvalidLabel(String),
    #[error("invalid number `{0}`")]
    InvalidNumber(String),
    #[error("undeclared label `{0}`")]
    Undeclared(String),
    #[error("label `{0}` is already declared")]
    Redeclared(String),
    #[error("label `{0}` appears twice")]
    Repeated(String),
    #[error("`{label}` is a {found}, expected a {expected}")]
    WrongKind {
        label: String,
        expected: String,
        found: SubsystemKind,
    },
    #[error("bit `{0}` is not produced by any earlier statement")]
    UndefinedBit(String),
    #[error("expected {expected} values, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("basis digit {digit} out of range for `{label}` (dimension {dimension})")]
    DigitRange {
        label: String,
        digit: usize,
        dimension: usize,
    },
    #[error("`{0}` only applies to two-level subsystems")]
    NotQubit(String),
    #[error("amplitudes are not normalized: squared norm {0}")]
    Unnormalized(f64),
    #[error("{0}")]
    Invalid(String),
}

/// Parse failure pointing at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub kind: DiagnosticKind,
}

impl Diagnostic {
    /// Message followed by the offending source line and a caret.
    pub fn render(&self, source: &str) -> String {
        let text = source
            .lines()
            .nth(self.line.saturating_sub(1))
            .unwrap_or("");
        let gutter = self.line.to_string();
        format!(
            "error: {}\n{gutter} | {text}\n{} | {}^",
            self,
            " ".repeat(gutter.len()),
            " ".repeat(self.column.saturating_sub(1))
        )
    }
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Cursor<'a> {
    line: usize,
    tokens: Vec<Token<'a>>,
    pos: usize,
    end_column: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl<'a> Cursor<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        let mut tokens = Vec::new();
        let mut start: Option<usize> = None;
        let mut column = 0;
        for (idx, ch) in text.char_indices() {
            column += 1;
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    tokens.push(Token {
                        text: &text[s..idx],
                        column: text[..s].chars().count() + 1,
                    });
                }
            } else if start.is_none() {
                start = Some(idx);
            }
        }
        if let Some(s) = start {
            tokens.push(Token {
                text: &text[s..],
                column: text[..s].chars().count() + 1,
            });
        }
        Self {
            line,
            tokens,
            pos: 0,
            end_column: column + 1,
        }
    }

    fn error_at(&self, column: usize, kind: DiagnosticKind) -> Diagnostic {
        Diagnostic {
            line: self.line,
            column,
            kind,
        }
    }

    fn peek(&self) -> Option<Token<'a>> {
        self.tokens.get(self.pos).copied()
    }

    fn next(&mut self, what: &str) -> PResult<Token<'a>> {
        match self.peek() {
            Some(t) => {
                self.pos += 1;
                Ok(t)
            }
            None => Err(self.error_at(
                self.end_column,
                DiagnosticKind::UnexpectedEnd(what.to_string()),
            )),
        }
    }

    fn keyword(&mut self, word: &str) -> PResult<Token<'a>> {
        let t = self.next(&format!("`{word}`"))?;
        if t.text == word {
            Ok(t)
        } else {
            Err(self.error_at(
                t.column,
                DiagnosticKind::Expected {
                    expected: format!("`{word}`"),
                    found: t.text.to_string(),
                },
            ))
        }
    }

    fn eat(&mut self, word: &str) -> bool {
        if self.peek().is_some_and(|t| t.text == word) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> PResult<Token<'a>> {
        let t = self.next(what)?;
        if is_ident(t.text) {
            Ok(t)
        } else {
            Err(self.error_at(t.column, DiagnosticKind::InvalidLabel(t.text.to_string())))
        }
    }

    fn number(&mut self, what: &str) -> PResult<(f64, usize)> {
        let t = self.next(what)?;
        parse_real(t.text).map(|v| (v, t.column)).ok_or_else(|| {
            self.error_at(t.column, DiagnosticKind::InvalidNumber(t.text.to_string()))
        })
    }

    fn unsigned(&mut self, what: &str) -> PResult<(u64, usize)> {
        let t = self.next(what)?;
        t.text
            .parse::<u64>()
            .map(|v| (v, t.column))
            .map_err(|_| self.error_at(t.column, DiagnosticKind::InvalidNumber(t.text.to_string())))
    }

    fn finish(&self) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.error_at(
                t.column,
                DiagnosticKind::Expected {
                    expected: "end of line".into(),
                    found: t.text.to_string(),
                },
            )),
        }
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_real(s: &str) -> Option<f64> {
    // Rust accepts "inf" and "nan"; scenarios must not.
    if s.is_empty()
        || s.chars()
            .any(|c| c.is_ascii_alphabetic() && c != 'e' && c != 'E')
    {
        return None;
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parses `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let Some(body) = s.strip_suffix('i') else {
        return parse_real(s).map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| match t {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        t => parse_real(t),
    };
    match split {
        Some(k) => Some(Complex64::new(parse_real(&body[..k])?, imag(&body[k..])?)),
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

/// Parses `1.25`, `pi`, `-pi/4`, `3*pi/8`.
pub fn parse_angle(s: &str) -> Option<Angle> {
    if !s.contains("pi") {
        return parse_real(s).map(Angle::Radians);
    }
    let (head, den) = match s.split_once('/') {
        Some((h, d)) => (h, d.parse::<u64>().ok().filter(|&d| d > 0)?),
        None => (s, 1),
    };
    let num = match head {
        "pi" => 1,
        "-pi" => -1,
        h => h.strip_suffix("*pi")?.parse::<i64>().ok()?,
    };
    Some(Angle::Pi { num, den })
}

struct Context {
    kinds: BTreeMap<String, SubsystemKind>,
    bits: BTreeSet<String>,
}

impl Context {
    fn kind_of(&self, cur: &Cursor<'_>, t: Token<'_>) -> PResult<SubsystemKind> {
        self.kinds
            .get(t.text)
            .copied()
            .ok_or_else(|| cur.error_at(t.column, DiagnosticKind::Undeclared(t.text.to_string())))
    }

    fn label(&self, cur: &mut Cursor<'_>, expected: SubsystemKind) -> PResult<String> {
        let t = cur.ident(&format!("a {expected} label"))?;
        let found = self.kind_of(cur, t)?;
        if found != expected {
            return Err(cur.error_at(
                t.column,
                DiagnosticKind::WrongKind {
                    label: t.text.to_string(),
                    expected: expected.name().to_string(),
                    found,
                },
            ));
        }
        Ok(t.text.to_string())
    }

    fn bit_use(&self, cur: &mut Cursor<'_>) -> PResult<String> {
        let t = cur.ident("a bit name")?;
        if !self.bits.contains(t.text) {
            return Err(cur.error_at(t.column, DiagnosticKind::UndefinedBit(t.text.to_string())));
        }
        Ok(t.text.to_string())
    }

    /// Declared labels up to `stop`, rejecting repeats.
    fn label_list(&self, cur: &mut Cursor<'_>, stop: &str) -> PResult<(Vec<String>, Vec<usize>)> {
        let mut labels: Vec<String> = Vec::new();
        let mut dims = Vec::new();
        while cur.peek().is_some_and(|t| t.text != stop) {
            let t = cur.ident("a label")?;
            let kind = self.kind_of(cur, t)?;
            if labels.iter().any(|l| l == t.text) {
                return Err(cur.error_at(t.column, DiagnosticKind::Repeated(t.text.to_string())));
            }
            labels.push(t.text.to_string());
            dims.push(kind.dimension());
        }
        if labels.is_empty() {
            let t = cur.next("a label")?;
            return Err(cur.error_at(
                t.column,
                DiagnosticKind::Expected {
                    expected: "a label".into(),
                    found: t.text.to_string(),
                },
            ));
        }
        cur.keyword(stop)?;
        Ok((labels, dims))
    }
}

fn amplitudes(cur: &mut Cursor<'_>, dims: &[usize], stop: Option<&str>) -> PResult<Vec<Complex64>> {
    let expected: usize = dims.iter().product();
    let start = cur.peek().map_or(cur.end_column, |t| t.column);
    let mut amps = Vec::new();
    while let Some(t) = cur.peek() {
        if Some(t.text) == stop {
            break;
        }
        cur.pos += 1;
        let z = parse_complex(t.text).ok_or_else(|| {
            cur.error_at(t.column, DiagnosticKind::InvalidNumber(t.text.to_string()))
        })?;
        amps.push(z);
    }
    if amps.len() != expected {
        return Err(cur.error_at(
            start,
            DiagnosticKind::Arity {
                expected,
                found: amps.len(),
            },
        ));
    }
    let norm_sqr: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    if (norm_sqr - 1.0).abs() > NORMALIZATION_TOL {
        return Err(cur.error_at(start, DiagnosticKind::Unnormalized(norm_sqr)));
    }
    Ok(amps)
}

fn probability(cur: &mut Cursor<'_>, what: &str) -> PResult<f64> {
    let (p, col) = cur.number(what)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(cur.error_at(
            col,
            DiagnosticKind::Invalid(format!("{what} must lie in [0, 1]")),
        ));
    }
    Ok(p)
}

fn cycles(cur: &mut Cursor<'_>) -> PResult<u32> {
    cur.keyword("cycles")?;
    let (n, col) = cur.unsigned("a cycle count")?;
    u32::try_from(n).ok().filter(|&n| n >= 1).ok_or_else(|| {
        cur.error_at(
            col,
            DiagnosticKind::Invalid("cycle count must be in 1..=4294967295".into()),
        )
    })
}

fn angle(cur: &mut Cursor<'_>) -> PResult<Angle> {
    cur.keyword("theta")?;
    let t = cur.next("an angle")?;
    parse_angle(t.text)
        .ok_or_else(|| cur.error_at(t.column, DiagnosticKind::InvalidNumber(t.text.to_string())))
}

fn new_bit(cur: &mut Cursor<'_>) -> PResult<String> {
    Ok(cur.ident("a bit name")?.text.to_string())
}

fn statement(ctx: &mut Context, cur: &mut Cursor<'_>) -> PResult<Statement> {
    let head = cur.next("a statement")?;
    let stmt = match head.text {
        "declare" => {
            let kt = cur.next("a subsystem kind")?;
            let kind = SubsystemKind::from_name(kt.text).ok_or_else(|| {
                cur.error_at(
                    kt.column,
                    DiagnosticKind::Expected {
                        expected: "shutter, photon, ifm or bomb".into(),
                        found: kt.text.to_string(),
                    },
                )
            })?;
            let lt = cur.ident("a label")?;
            if ctx.kinds.contains_key(lt.text) {
                return Err(
                    cur.error_at(lt.column, DiagnosticKind::Redeclared(lt.text.to_string()))
                );
            }
            ctx.kinds.insert(lt.text.to_string(), kind);
            Statement::Declare {
                kind,
                label: lt.text.to_string(),
            }
        }
        "prep" => {
            let start = cur.pos;
            let mode = cur.tokens[start..]
                .iter()
                .find(|t| t.text == "basis" || t.text == "amps")
                .map(|t| t.text)
                .unwrap_or("basis");
            let (labels, dims) = ctx.label_list(cur, mode)?;
            let init = if mode == "basis" {
                let mut digits = Vec::new();
                for (label, &dim) in labels.iter().zip(&dims) {
                    let t = cur.next("a basis digit")?;
                    let digit = match t.text {
                        "+" => BasisDigit::Plus,
                        "-" => BasisDigit::Minus,
                        d => BasisDigit::Index(d.parse::<usize>().map_err(|_| {
                            cur.error_at(t.column, DiagnosticKind::InvalidNumber(d.to_string()))
                        })?),
                    };
                    match digit {
                        BasisDigit::Index(d) if d >= dim => {
                            return Err(cur.error_at(
                                t.column,
                                DiagnosticKind::DigitRange {
                                    label: label.clone(),
                                    digit: d,
                                    dimension: dim,
                                },
                            ))
                        }
                        BasisDigit::Plus | BasisDigit::Minus if dim != 2 => {
                            return Err(cur
                                .error_at(t.column, DiagnosticKind::NotQubit(t.text.to_string())))
                        }
                        _ => {}
                    }
                    digits.push(digit);
                }
                Init::Basis(digits)
            } else {
                Init::Amps(amplitudes(cur, &dims, None)?)
            };
            Statement::Prep { labels, init }
        }
        "apply" => {
            let g = cur.next("a gate")?;
            let gate = match g.text {
                "H" => Gate::H {
                    photon: ctx.label(cur, SubsystemKind::DualRailPhoton)?,
                },
                "X" | "Z" => {
                    let photon = ctx.label(cur, SubsystemKind::DualRailPhoton)?;
                    cur.keyword("if")?;
                    let bit = ctx.bit_use(cur)?;
                    if g.text == "X" {
                        Gate::X { photon, bit }
                    } else {
                        Gate::Z { photon, bit }
                    }
                }
                "Sh" | "cell" => {
                    let shutter = ctx.label(cur, SubsystemKind::Shutter)?;
                    let photon = ctx.label(cur, SubsystemKind::DualRailPhoton)?;
                    if g.text == "Sh" {
                        Gate::Sh { shutter, photon }
                    } else {
                        Gate::Cell { shutter, photon }
                    }
                }
                other => {
                    return Err(cur.error_at(
                        g.column,
                        DiagnosticKind::Expected {
                            expected: "H, X, Z, Sh or cell".into(),
                            found: other.to_string(),
                        },
                    ))
                }
            };
            Statement::Apply(gate)
        }
        "measure" => {
            let t = cur.ident("a label")?;
            if ctx.kind_of(cur, t)?.dimension() != 2 {
                return Err(cur.error_at(t.column, DiagnosticKind::NotQubit(t.text.to_string())));
            }
            let bt = cur.next("a basis")?;
            let basis = MeasurementBasis::from_name(bt.text).ok_or_else(|| {
                cur.error_at(
                    bt.column,
                    DiagnosticKind::Expected {
                        expected: "z or pm".into(),
                        found: bt.text.to_string(),
                    },
                )
            })?;
            cur.keyword("->")?;
            Statement::Measure {
                target: t.text.to_string(),
                basis,
                bit: new_bit(cur)?,
            }
        }
        "write" => {
            let photon = ctx.label(cur, SubsystemKind::DualRailPhoton)?;
            cur.keyword("->")?;
            let shutter = ctx.label(cur, SubsystemKind::Shutter)?;
            cur.keyword("bit")?;
            Statement::Write {
                photon,
                shutter,
                bit: new_bit(cur)?,
            }
        }
        "read" => {
            let shutter = ctx.label(cur, SubsystemKind::Shutter)?;
            cur.keyword("bit")?;
            let bit_a = ctx.bit_use(cur)?;
            cur.keyword("->")?;
            let photon = ctx.label(cur, SubsystemKind::DualRailPhoton)?;
            cur.keyword("bit")?;
            Statement::Read {
                shutter,
                bit_a,
                photon,
                bit_b: new_bit(cur)?,
            }
        }
        "cnot" => {
            let control = ctx.label(cur, SubsystemKind::DualRailPhoton)?;
            let target = ctx.label(cur, SubsystemKind::DualRailPhoton)?;
            cur.keyword("via")?;
            let control_shutter = ctx.label(cur, SubsystemKind::Shutter)?;
            let target_shutter = ctx.label(cur, SubsystemKind::Shutter)?;
            let bits = if cur.eat("bits") {
                let mut names: [String; 4] = Default::default();
                for slot in names.iter_mut() {
                    *slot = new_bit(cur)?;
                }
                Some(names)
            } else {
                None
            };
            for (x, y) in [(&control, &target), (&control_shutter, &target_shutter)] {
                if x == y {
                    return Err(cur.error_at(head.column, DiagnosticKind::Repeated(x.clone())));
                }
            }
            Statement::Cnot {
                control,
                target,
                control_shutter,
                target_shutter,
                bits,
            }
        }
        "ifm" => {
            let v = cur.next("single or nested")?;
            match v.text {
                "single" => {
                    let photon = ctx.label(cur, SubsystemKind::DualRailPhoton)?;
                    let theta = angle(cur)?;
                    let cycles = cycles(cur)?;
                    cur.keyword("bomb")?;
                    let bt = cur.next("present or absent")?;
                    let bomb_present = match bt.text {
                        "present" => true,
                        "absent" => false,
                        other => {
                            return Err(cur.error_at(
                                bt.column,
                                DiagnosticKind::Expected {
                                    expected: "present or absent".into(),
                                    found: other.to_string(),
                                },
                            ))
                        }
                    };
                    cur.keyword("->")?;
                    Statement::IfmSingle {
                        photon,
                        theta,
                        cycles,
                        bomb_present,
                        bit: new_bit(cur)?,
                    }
                }
                "nested" => {
                    let photon = ctx.label(cur, SubsystemKind::IfmPhoton)?;
                    let bomb = ctx.label(cur, SubsystemKind::Bomb)?;
                    let theta = angle(cur)?;
                    let cycles = cycles(cur)?;
                    cur.keyword("->")?;
                    Statement::IfmNested {
                        photon,
                        bomb,
                        theta,
                        cycles,
                        bit: new_bit(cur)?,
                    }
                }
                other => {
                    return Err(cur.error_at(
                        v.column,
                        DiagnosticKind::Expected {
                            expected: "single or nested".into(),
                            found: other.to_string(),
                        },
                    ))
                }
            }
        }
        "expect" => {
            let v = cur.next("state, prob or branches")?;
            let e = match v.text {
                "state" => {
                    let (labels, dims) = ctx.label_list(cur, "amps")?;
                    let amps = amplitudes(cur, &dims, Some("fidelity"))?;
                    cur.keyword("fidelity")?;
                    Expectation::State {
                        labels,
                        amps,
                        threshold: probability(cur, "fidelity threshold")?,
                    }
                }
                "prob" => {
                    let mut conditions = Vec::new();
                    while let Some(t) = cur.peek().filter(|t| t.text.contains('=')) {
                        cur.pos += 1;
                        let (name, value) = t.text.split_once('=').expect("checked above");
                        if !ctx.bits.contains(name) {
                            return Err(cur.error_at(
                                t.column,
                                DiagnosticKind::UndefinedBit(name.to_string()),
                            ));
                        }
                        let value = match value {
                            "0" => 0,
                            "1" => 1,
                            _ => {
                                return Err(cur.error_at(
                                    t.column,
                                    DiagnosticKind::Expected {
                                        expected: "bit value 0 or 1".into(),
                                        found: value.to_string(),
                                    },
                                ))
                            }
                        };
                        conditions.push((name.to_string(), value));
                    }
                    if conditions.is_empty() {
                        let col = cur.peek().map_or(cur.end_column, |t| t.column);
                        return Err(cur.error_at(
                            col,
                            DiagnosticKind::Expected {
                                expected: "a condition like a=0".into(),
                                found: cur.peek().map_or(String::new(), |t| t.text.to_string()),
                            },
                        ));
                    }
                    let probability = probability(cur, "probability")?;
                    let tolerance = if cur.eat("tol") {
                        let (t, col) = cur.number("a tolerance")?;
                        if t < 0.0 {
                            return Err(cur.error_at(
                                col,
                                DiagnosticKind::Invalid("tolerance must be non-negative".into()),
                            ));
                        }
                        Some(t)
                    } else {
                        None
                    };
                    Expectation::Prob {
                        conditions,
                        probability,
                        tolerance,
                    }
                }
                "branches" => Expectation::Branches(cur.unsigned("a branch count")?.0 as usize),
                other => {
                    return Err(cur.error_at(
                        v.column,
                        DiagnosticKind::Expected {
                            expected: "state, prob or branches".into(),
                            found: other.to_string(),
                        },
                    ))
                }
            };
            Statement::Expect(e)
        }
        other => {
            return Err(cur.error_at(
                head.column,
                DiagnosticKind::UnknownStatement(other.to_string()),
            ))
        }
    };
    cur.finish()?;
    for bit in stmt.produced_bits() {
        ctx.bits.insert(bit.to_string());
    }
    Ok(stmt)
}

/// Parses scenario source text.
pub fn parse_scenario(text: &str) -> Result<Scenario, Diagnostic> {
    let mut ctx = Context {
        kinds: BTreeMap::new(),
        bits: BTreeSet::new(),
    };
    let mut items = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let (code, comment) = match raw.find('#') {
            Some(k) => (&raw[..k], Some(raw[k + 1..].trim_end().to_string())),
            None => (raw, None),
        };
        if code.trim().is_empty() {
            items.push(match comment {
                Some(c) => Item::Comment(c),
                None => Item::Blank,
            });
            continue;
        }
        let mut cur = Cursor::new(line, code);
        let statement = statement(&mut ctx, &mut cur)?;
        items.push(Item::Statement(Located {
            line,
            statement,
            comment,
        }));
    }
    Ok(Scenario { items })
}
