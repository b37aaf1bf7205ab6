// SPDX-License-Identifier: Apache-2.0

//! Scenario syntax tree and its canonical text form.
//!
//! Formatting then re-parsing yields an equal [`Scenario`]: numbers are
//! printed in shortest round-trip form and comments and blank lines are kept
//! as their own items.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};

use shutter_core::{Complex64, MeasurementBasis, SubsystemKind};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scenario {
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Blank,
    /// Full-line comment; the text after `#`, verbatim.
    Comment(String),
    Statement(Located),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Located {
    /// 1-based source line.
    pub line: usize,
    pub statement: Statement,
    /// Trailing comment after `#`, verbatim.
    pub comment: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Declare {
        kind: SubsystemKind,
        label: String,
    },
    Prep {
        labels: Vec<String>,
        init: Init,
    },
    Apply(Gate),
    Measure {
        target: String,
        basis: MeasurementBasis,
        bit: String,
    },
    Write {
        photon: String,
        shutter: String,
        bit: String,
    },
    Read {
        shutter: String,
        bit_a: String,
        photon: String,
        bit_b: String,
    },
    Cnot {
        control: String,
        target: String,
        control_shutter: String,
        target_shutter: String,
        /// `a c b d`; defaults apply when absent.
        bits: Option<[String; 4]>,
    },
    IfmSingle {
        photon: String,
        theta: Angle,
        cycles: u32,
        bomb_present: bool,
        bit: String,
    },
    IfmNested {
        photon: String,
        bomb: String,
        theta: Angle,
        cycles: u32,
        bit: String,
    },
    Expect(Expectation),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    Basis(Vec<BasisDigit>),
    Amps(Vec<Complex64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisDigit {
    Index(usize),
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    H { photon: String },
    X { photon: String, bit: String },
    Z { photon: String, bit: String },
    Sh { shutter: String, photon: String },
    Cell { shutter: String, photon: String },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expectation {
    State {
        labels: Vec<String>,
        amps: Vec<Complex64>,
        threshold: f64,
    },
    Prob {
        conditions: Vec<(String, u8)>,
        probability: f64,
        tolerance: Option<f64>,
    },
    Branches(usize),
}

/// Rotator angle, either plain radians or `num*pi/den`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    Radians(f64),
    Pi { num: i64, den: u64 },
}

impl Angle {
    pub fn radians(self) -> f64 {
        match self {
            Angle::Radians(r) => r,
            Angle::Pi { num, den } => num as f64 * PI / den as f64,
        }
    }
}

pub const DEFAULT_CNOT_BITS: [&str; 4] = ["a", "c", "b", "d"];

impl Statement {
    /// Classical bits written by this statement.
    pub fn produced_bits(&self) -> Vec<&str> {
        match self {
            Statement::Measure { bit, .. }
            | Statement::Write { bit, .. }
            | Statement::IfmSingle { bit, .. }
            | Statement::IfmNested { bit, .. } => vec![bit],
            Statement::Read { bit_b, .. } => vec![bit_b],
            Statement::Cnot { bits, .. } => match bits {
                Some(b) => b.iter().map(String::as_str).collect(),
                None => DEFAULT_CNOT_BITS.to_vec(),
            },
            _ => Vec::new(),
        }
    }
}

/// Shortest text that parses back to the same `f64`.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-4..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format_number(z.re)
    } else if z.re == 0.0 {
        format!("{}i", format_number(z.im))
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!(
            "{}{sign}{}i",
            format_number(z.re),
            format_number(z.im.abs())
        )
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Angle::Radians(r) => f.write_str(&format_number(r)),
            Angle::Pi { num, den } => {
                match num {
                    1 => f.write_str("pi")?,
                    -1 => f.write_str("-pi")?,
                    n => write!(f, "{n}*pi")?,
                }
                if den != 1 {
                    write!(f, "/{den}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for BasisDigit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisDigit::Index(i) => write!(f, "{i}"),
            BasisDigit::Plus => f.write_str("+"),
            BasisDigit::Minus => f.write_str("-"),
        }
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    let mut out = String::new();
    for (k, item) in items.iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{item}");
    }
    out
}

fn join_amps(amps: &[Complex64]) -> String {
    amps.iter()
        .map(|z| format_complex(*z))
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::H { photon } => write!(f, "H {photon}"),
            Gate::X { photon, bit } => write!(f, "X {photon} if {bit}"),
            Gate::Z { photon, bit } => write!(f, "Z {photon} if {bit}"),
            Gate::Sh { shutter, photon } => write!(f, "Sh {shutter} {photon}"),
            Gate::Cell { shutter, photon } => write!(f, "cell {shutter} {photon}"),
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Declare { kind, label } => write!(f, "declare {kind} {label}"),
            Statement::Prep { labels, init } => {
                write!(f, "prep {}", join(labels))?;
                match init {
                    Init::Basis(digits) => write!(f, " basis {}", join(digits)),
                    Init::Amps(amps) => write!(f, " amps {}", join_amps(amps)),
                }
            }
            Statement::Apply(gate) => write!(f, "apply {gate}"),
            Statement::Measure { target, basis, bit } => {
                write!(f, "measure {target} {} -> {bit}", basis.name())
            }
            Statement::Write {
                photon,
                shutter,
                bit,
            } => write!(f, "write {photon} -> {shutter} bit {bit}"),
            Statement::Read {
                shutter,
                bit_a,
                photon,
                bit_b,
            } => write!(f, "read {shutter} bit {bit_a} -> {photon} bit {bit_b}"),
            Statement::Cnot {
                control,
                target,
                control_shutter,
                target_shutter,
                bits,
            } => {
                write!(
                    f,
                    "cnot {control} {target} via {control_shutter} {target_shutter}"
                )?;
                if let Some(bits) = bits {
                    write!(f, " bits {}", join(bits))?;
                }
                Ok(())
            }
            Statement::IfmSingle {
                photon,
                theta,
                cycles,
                bomb_present,
                bit,
            } => {
                let bomb = if *bomb_present { "present" } else { "absent" };
                write!(
                    f,
                    "ifm single {photon} theta {theta} cycles {cycles} bomb {bomb} -> {bit}"
                )
            }
            Statement::IfmNested {
                photon,
                bomb,
                theta,
                cycles,
                bit,
            } => write!(
                f,
                "ifm nested {photon} {bomb} theta {theta} cycles {cycles} -> {bit}"
            ),
            Statement::Expect(e) => write!(f, "expect {e}"),
        }
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::State {
                labels,
                amps,
                threshold,
            } => write!(
                f,
                "state {} amps {} fidelity {}",
                join(labels),
                join_amps(amps),
                format_number(*threshold)
            ),
            Expectation::Prob {
                conditions,
                probability,
                tolerance,
            } => {
                f.write_str("prob")?;
                for (bit, v) in conditions {
                    write!(f, " {bit}={v}")?;
                }
                write!(f, " {}", format_number(*probability))?;
                if let Some(t) = tolerance {
                    write!(f, " tol {}", format_number(*t))?;
                }
                Ok(())
            }
            Expectation::Branches(n) => write!(f, "branches {n}"),
        }
    }
}

impl fmt::Display for Located {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.statement)?;
        if let Some(c) = &self.comment {
            write!(f, "  #{c}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            match item {
                Item::Blank => writeln!(f)?,
                Item::Comment(c) => writeln!(f, "#{c}")?,
                Item::Statement(s) => writeln!(f, "{s}")?,
            }
        }
        Ok(())
    }
}

impl Scenario {
    pub fn statements(&self) -> impl Iterator<Item = &Located> {
        self.items.iter().filter_map(|item| match item {
            Item::Statement(s) => Some(s),
            _ => None,
        })
    }

    /// Canonical source text.
    pub fn format(&self) -> String {
        self.to_string()
    }
}
