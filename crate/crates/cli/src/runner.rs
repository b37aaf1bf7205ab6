// SPDX-License-Identifier: Apache-2.0

//! Scenario execution.
//!
//! Every branching statement writes classical bits, so a path through the
//! program is identified by its register. Enumerate mode keeps all paths;
//! sample mode walks one path per trial through a lazily expanded tree, so
//! repeated outcomes are computed once.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shutter_core::cnot::{shutter_cnot, CnotBits, CnotLabels, CnotOptions};
use shutter_core::gates::{
    cx_classical, cz_classical, hadamard, minus, plus, shutter_interaction, transfer_cell,
};
use shutter_core::interferometer::{nested_evolve_state, single_ifm_state, RunOutcome};
use shutter_core::memory::{read_into_fresh, read_qubit, write_branch};
use shutter_core::statevector::MIN_BRANCH_PROBABILITY;
use shutter_core::{Branch, ClassicalRegister, Complex64, PureState, SystemLayout};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

use crate::report::{BranchRow, ChiSquare, ExpectationResult, RunReport};
use crate::scenario::{
    BasisDigit, Expectation, Gate, Init, Located, Scenario, Statement, DEFAULT_CNOT_BITS,
};

/// Default tolerance of `expect prob` in enumerate mode.
pub const PROB_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Enumerate,
    Sample { trials: u64, seed: u64 },
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Enumerate => "enumerate",
            Mode::Sample { .. } => "sample",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Name shown in the report.
    pub name: String,
    /// Record wall-clock time in the report.
    pub timing: bool,
}

/// Execution failure at a scenario line.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct RunError {
    pub line: usize,
    pub message: String,
}

type RResult<T> = Result<T, RunError>;

fn at<E: std::fmt::Display>(line: usize) -> impl Fn(E) -> RunError {
    move |e| RunError {
        line,
        message: e.to_string(),
    }
}

/// One history of the program.
#[derive(Debug, Clone)]
pub struct Path {
    pub probability: f64,
    pub state: PureState,
    pub record: ClassicalRegister,
    /// Absorbed in an interferometer; later statements are skipped.
    pub halted: bool,
    /// Lowest fidelity seen by `expect state` on this path.
    pub fidelity: Option<f64>,
    /// Fidelity from the most recent `expect state`.
    pub last_check: Option<f64>,
    pub passed: bool,
}

impl Path {
    fn root() -> Self {
        let empty = SystemLayout::new(std::iter::empty::<(&str, shutter_core::SubsystemKind)>())
            .expect("empty layout");
        Self {
            probability: 1.0,
            state: PureState::from_amplitudes(empty, vec![Complex64::new(1.0, 0.0)])
                .expect("scalar state"),
            record: ClassicalRegister::new(),
            halted: false,
            fidelity: None,
            last_check: None,
            passed: true,
        }
    }

    fn branch(&self) -> Branch {
        Branch {
            probability: self.probability,
            state: self.state.clone(),
            record: self.record.clone(),
        }
    }

    fn child(&self, br: Branch) -> Self {
        Self {
            probability: br.probability,
            state: br.state,
            record: br.record,
            ..self.clone()
        }
    }

    fn with_state(&self, state: PureState) -> Self {
        Self {
            state,
            ..self.clone()
        }
    }

    fn matches(&self, conditions: &[(String, u8)]) -> bool {
        conditions
            .iter()
            .all(|(bit, v)| self.record.get(bit).is_ok_and(|x| x == *v))
    }
}

fn prep_state(
    labels: &[String],
    init: &Init,
    layout_of: impl Fn(&str) -> shutter_core::SubsystemKind,
) -> Result<PureState, shutter_core::Error> {
    let layout = SystemLayout::new(labels.iter().map(|l| (l.clone(), layout_of(l))))?;
    match init {
        Init::Amps(amps) => PureState::normalize(layout, amps.clone()),
        Init::Basis(digits) => {
            let mut amps = vec![Complex64::new(1.0, 0.0)];
            for (sub, digit) in layout.subsystems().iter().zip(digits) {
                let local: Vec<Complex64> = match digit {
                    BasisDigit::Plus => plus().to_vec(),
                    BasisDigit::Minus => minus().to_vec(),
                    BasisDigit::Index(i) => (0..sub.dimension())
                        .map(|k| Complex64::new(if k == *i { 1.0 } else { 0.0 }, 0.0))
                        .collect(),
                };
                amps = amps
                    .iter()
                    .flat_map(|a| local.iter().map(move |b| a * b))
                    .collect();
            }
            PureState::from_amplitudes(layout, amps)
        }
    }
}

fn ifm_children(
    path: &Path,
    outcome: RunOutcome,
    bit: &str,
) -> Result<Vec<Path>, shutter_core::Error> {
    let mut out = Vec::with_capacity(2);
    for s in outcome.survived {
        out.push(Path {
            probability: path.probability * s.probability,
            state: s.state,
            record: path.record.with(bit, 0)?,
            ..path.clone()
        });
    }
    if outcome.exploded > MIN_BRANCH_PROBABILITY {
        out.push(Path {
            probability: path.probability * outcome.exploded,
            record: path.record.with(bit, 1)?,
            halted: true,
            ..path.clone()
        });
    }
    Ok(out)
}

struct Program<'a> {
    scenario: &'a Scenario,
    kinds: BTreeMap<String, shutter_core::SubsystemKind>,
}

impl<'a> Program<'a> {
    fn new(scenario: &'a Scenario) -> Self {
        let kinds = scenario
            .statements()
            .filter_map(|s| match &s.statement {
                Statement::Declare { kind, label } => Some((label.clone(), *kind)),
                _ => None,
            })
            .collect();
        Self { scenario, kinds }
    }

    fn steps(&self) -> Vec<&'a Located> {
        self.scenario.statements().collect()
    }

    /// Successors of `path` under one statement. `expect` statements only
    /// update the per-path fidelity bookkeeping.
    fn step(&self, stmt: &Located, path: &Path) -> RResult<Vec<Path>> {
        if path.halted {
            return Ok(vec![path.clone()]);
        }
        let err = at(stmt.line);
        let one = |s: Result<PureState, shutter_core::Error>| {
            s.map(|s| vec![path.with_state(s)]).map_err(at(stmt.line))
        };
        let many = |b: Result<Vec<Branch>, shutter_core::Error>| {
            b.map(|v| v.into_iter().map(|br| path.child(br)).collect())
                .map_err(at(stmt.line))
        };
        let st = &path.state;
        match &stmt.statement {
            Statement::Declare { .. } => Ok(vec![path.clone()]),
            Statement::Prep { labels, init } => {
                if let Some(l) = labels.iter().find(|l| st.layout().contains(l)) {
                    return Err(err(format!("`{l}` is already prepared")));
                }
                let group = prep_state(labels, init, |l| self.kinds[l]).map_err(at(stmt.line))?;
                one(st.tensor(&group))
            }
            Statement::Apply(gate) => one(match gate {
                Gate::H { photon } => hadamard(st, photon),
                Gate::X { photon, bit } => path
                    .record
                    .get(bit)
                    .and_then(|b| cx_classical(st, photon, b)),
                Gate::Z { photon, bit } => path
                    .record
                    .get(bit)
                    .and_then(|b| cz_classical(st, photon, b)),
                Gate::Sh { shutter, photon } => shutter_interaction(st, shutter, photon),
                Gate::Cell { shutter, photon } => transfer_cell(st, shutter, photon),
            }),
            Statement::Measure { target, basis, bit } => {
                many(path.branch().measure(target, *basis, bit))
            }
            Statement::Write {
                photon,
                shutter,
                bit,
            } => many(write_branch(&path.branch(), shutter, photon, bit)),
            Statement::Read {
                shutter,
                bit_a,
                photon,
                bit_b,
            } => {
                let br = path.branch();
                many(if st.layout().contains(photon) {
                    read_qubit(&br, shutter, bit_a, photon, bit_b)
                } else {
                    read_into_fresh(&br, shutter, bit_a, photon, bit_b)
                })
            }
            Statement::Cnot {
                control,
                target,
                control_shutter,
                target_shutter,
                bits,
            } => {
                let names: [String; 4] = bits
                    .clone()
                    .unwrap_or_else(|| DEFAULT_CNOT_BITS.map(String::from));
                let [a, c, b, d] = names;
                let options = CnotOptions {
                    bits: CnotBits { a, c, b, d },
                    record_checkpoints: false,
                    final_sign_correction: true,
                };
                let labels = CnotLabels {
                    control_photon: control,
                    target_photon: target,
                    control_shutter,
                    target_shutter,
                };
                let trace = shutter_cnot(st, labels, &options).map_err(at(stmt.line))?;
                trace
                    .branches
                    .into_iter()
                    .filter(|br| br.probability > MIN_BRANCH_PROBABILITY)
                    .map(|br| {
                        let mut record = path.record.clone();
                        for (name, v) in br.record.iter() {
                            record.set(name, v).map_err(at(stmt.line))?;
                        }
                        Ok(Path {
                            probability: path.probability * br.probability,
                            state: br.state,
                            record,
                            ..path.clone()
                        })
                    })
                    .collect()
            }
            Statement::IfmSingle {
                photon,
                theta,
                cycles,
                bomb_present,
                bit,
            } => single_ifm_state(st, photon, theta.radians(), *cycles, *bomb_present)
                .and_then(|o| ifm_children(path, o, bit))
                .map_err(at(stmt.line)),
            Statement::IfmNested {
                photon,
                bomb,
                theta,
                cycles,
                bit,
            } => nested_evolve_state(st, photon, bomb, theta.radians(), *cycles)
                .and_then(|o| ifm_children(path, o, bit))
                .map_err(at(stmt.line)),
            Statement::Expect(Expectation::State {
                labels,
                amps,
                threshold,
            }) => {
                let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
                let f = st.reduced_fidelity(&refs, amps).map_err(at(stmt.line))?;
                let mut next = path.clone();
                next.fidelity = Some(next.fidelity.map_or(f, |g| g.min(f)));
                next.last_check = Some(f);
                next.passed &= f >= *threshold;
                Ok(vec![next])
            }
            Statement::Expect(_) => Ok(vec![path.clone()]),
        }
    }

    /// Bit columns in order of first production.
    fn bit_columns(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for s in self.scenario.statements() {
            for b in s.statement.produced_bits() {
                if seen.insert(b.to_string()) {
                    out.push(b.to_string());
                }
            }
        }
        out
    }
}

fn row(path: &Path, bits: &[String]) -> BranchRow {
    BranchRow {
        bits: bits
            .iter()
            .filter_map(|b| path.record.get(b).ok().map(|v| (b.clone(), v)))
            .collect(),
        halted: path.halted,
        probability: path.probability,
        count: None,
        frequency: None,
        fidelity: path.fidelity,
        passed: path.passed,
    }
}

fn row_key(row: &BranchRow, bits: &[String]) -> Vec<Option<u8>> {
    bits.iter().map(|b| row.bits.get(b).copied()).collect()
}

fn condition_text(conditions: &[(String, u8)]) -> String {
    conditions
        .iter()
        .map(|(b, v)| format!("{b}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn enumerate_expectation(e: &Expectation, paths: &[Path]) -> (bool, String, Option<f64>) {
    match e {
        Expectation::State { threshold, .. } => {
            let live: Vec<&Path> = paths.iter().filter(|p| !p.halted).collect();
            let min = live
                .iter()
                .filter_map(|p| p.last_check)
                .fold(1.0_f64, f64::min);
            let ok = min >= *threshold;
            (
                ok,
                format!(
                    "min fidelity {min:.12} over {} branches (threshold {threshold})",
                    live.len()
                ),
                Some(min),
            )
        }
        Expectation::Prob {
            conditions,
            probability,
            tolerance,
        } => {
            let p: f64 = paths
                .iter()
                .filter(|x| x.matches(conditions))
                .map(|x| x.probability)
                .sum();
            let tol = tolerance.unwrap_or(PROB_TOL);
            (
                (p - probability).abs() <= tol,
                format!(
                    "P({}) = {p:.12}, expected {probability} (tol {tol:e})",
                    condition_text(conditions)
                ),
                Some(p),
            )
        }
        Expectation::Branches(n) => (
            paths.len() == *n,
            format!("{} branches, expected {n}", paths.len()),
            Some(paths.len() as f64),
        ),
    }
}

/// Runs `scenario` in the given mode.
pub fn run_scenario(scenario: &Scenario, mode: Mode, options: &RunOptions) -> RResult<RunReport> {
    let start = Instant::now();
    let program = Program::new(scenario);
    let bits = program.bit_columns();
    let (mut branches, expectations, chi_square) = match mode {
        Mode::Enumerate => enumerate(&program, &bits)?,
        Mode::Sample { trials, seed } => sample(&program, &bits, trials, seed)?,
    };
    branches.sort_by(|x, y| {
        row_key(x, &bits)
            .cmp(&row_key(y, &bits))
            .then(x.halted.cmp(&y.halted))
    });
    let total_probability = branches.iter().map(|b| b.probability).sum();
    let passed = expectations.iter().all(|e| e.passed);
    let (trials, seed) = match mode {
        Mode::Enumerate => (None, None),
        Mode::Sample { trials, seed } => (Some(trials), Some(seed)),
    };
    Ok(RunReport {
        scenario: options.name.clone(),
        mode: mode.name().to_string(),
        seed,
        trials,
        bits,
        branches,
        total_probability,
        expectations,
        chi_square,
        passed,
        elapsed_ms: options.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    })
}

type Outcome = (Vec<BranchRow>, Vec<ExpectationResult>, Option<ChiSquare>);

fn enumerate(program: &Program<'_>, bits: &[String]) -> RResult<Outcome> {
    let mut paths = vec![Path::root()];
    let mut results = Vec::new();
    for stmt in program.steps() {
        let mut next = Vec::with_capacity(paths.len());
        for p in &paths {
            next.extend(program.step(stmt, p)?);
        }
        paths = next;
        if let Statement::Expect(e) = &stmt.statement {
            let (passed, detail, observed) = enumerate_expectation(e, &paths);
            results.push(ExpectationResult {
                line: stmt.line,
                statement: stmt.statement.to_string(),
                passed,
                detail,
                observed,
            });
        }
    }
    Ok((paths.iter().map(|p| row(p, bits)).collect(), results, None))
}

struct Node {
    path: Path,
    children: Option<Vec<usize>>,
}

enum Tally {
    State { min: f64, failed: u64, visits: u64 },
    Prob { hits: u64 },
    Branches(BTreeSet<usize>),
}

fn sample(program: &Program<'_>, bits: &[String], trials: u64, seed: u64) -> RResult<Outcome> {
    if trials == 0 {
        return Err(RunError {
            line: 0,
            message: "sample mode needs at least one trial".into(),
        });
    }
    let steps = program.steps();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = vec![Node {
        path: Path::root(),
        children: None,
    }];
    let mut tallies: Vec<Option<Tally>> = steps
        .iter()
        .map(|s| match &s.statement {
            Statement::Expect(Expectation::State { .. }) => Some(Tally::State {
                min: 1.0,
                failed: 0,
                visits: 0,
            }),
            Statement::Expect(Expectation::Prob { .. }) => Some(Tally::Prob { hits: 0 }),
            Statement::Expect(Expectation::Branches(_)) => Some(Tally::Branches(BTreeSet::new())),
            _ => None,
        })
        .collect();
    let mut leaves: BTreeMap<usize, u64> = BTreeMap::new();

    for _ in 0..trials {
        let mut id = 0;
        for (k, stmt) in steps.iter().enumerate() {
            if nodes[id].children.is_none() {
                let kids = program.step(stmt, &nodes[id].path)?;
                let first = nodes.len();
                nodes.extend(kids.into_iter().map(|path| Node {
                    path,
                    children: None,
                }));
                nodes[id].children = Some((first..nodes.len()).collect());
            }
            let kids = nodes[id].children.as_ref().expect("expanded above");
            id = match kids.len() {
                0 => {
                    return Err(RunError {
                        line: stmt.line,
                        message: "no outcome has non-zero probability".into(),
                    })
                }
                1 => kids[0],
                _ => {
                    let total: f64 = kids.iter().map(|&c| nodes[c].path.probability).sum();
                    let mut u = rng.random::<f64>() * total;
                    let mut pick = *kids.last().expect("non-empty");
                    for &c in kids {
                        u -= nodes[c].path.probability;
                        if u < 0.0 {
                            pick = c;
                            break;
                        }
                    }
                    pick
                }
            };
            let path = &nodes[id].path;
            match (&mut tallies[k], &stmt.statement) {
                (
                    Some(Tally::State {
                        min,
                        failed,
                        visits,
                    }),
                    Statement::Expect(Expectation::State { threshold, .. }),
                ) => {
                    if !path.halted {
                        let f = path.last_check.unwrap_or(1.0);
                        *visits += 1;
                        *min = min.min(f);
                        if f < *threshold {
                            *failed += 1;
                        }
                    }
                }
                (
                    Some(Tally::Prob { hits }),
                    Statement::Expect(Expectation::Prob { conditions, .. }),
                ) => {
                    if path.matches(conditions) {
                        *hits += 1;
                    }
                }
                (Some(Tally::Branches(seen)), _) => {
                    seen.insert(id);
                }
                _ => {}
            }
        }
        *leaves.entry(id).or_default() += 1;
    }

    let n = trials as f64;
    let results = steps
        .iter()
        .zip(&tallies)
        .filter_map(|(stmt, t)| {
            let Statement::Expect(e) = &stmt.statement else {
                return None;
            };
            let (passed, detail, observed) = match (e, t.as_ref().expect("tally per expectation")) {
                (Expectation::State { threshold, .. }, Tally::State { min, failed, visits }) => (
                    *failed == 0,
                    format!("min fidelity {min:.12} over {visits} sampled paths (threshold {threshold})"),
                    Some(*min),
                ),
                (
                    Expectation::Prob {
                        conditions,
                        probability,
                        tolerance,
                    },
                    Tally::Prob { hits },
                ) => {
                    let freq = *hits as f64 / n;
                    let sigma = (probability * (1.0 - probability) / n).sqrt();
                    let tol = tolerance.unwrap_or(0.0).max(4.0 * sigma).max(PROB_TOL);
                    (
                        (freq - probability).abs() <= tol,
                        format!(
                            "frequency({}) = {freq:.6} over {trials} trials, expected {probability} (tol {tol:.6})",
                            condition_text(conditions)
                        ),
                        Some(freq),
                    )
                }
                (Expectation::Branches(expected), Tally::Branches(seen)) => (
                    seen.len() <= *expected,
                    format!("{} distinct branches observed, at most {expected} expected", seen.len()),
                    Some(seen.len() as f64),
                ),
                _ => unreachable!("tally kinds follow statements"),
            };
            Some(ExpectationResult {
                line: stmt.line,
                statement: stmt.statement.to_string(),
                passed,
                detail,
                observed,
            })
        })
        .collect();

    let rows: Vec<BranchRow> = leaves
        .iter()
        .map(|(&id, &count)| BranchRow {
            count: Some(count),
            frequency: Some(count as f64 / n),
            ..row(&nodes[id].path, bits)
        })
        .collect();
    let chi = chi_square(
        rows.iter().map(|r| (r.count.unwrap_or(0), r.probability)),
        trials,
    );
    Ok((rows, results, Some(chi)))
}

/// Pearson test of observed counts against exact probabilities. Unobserved
/// outcomes are pooled into one extra cell.
pub fn chi_square(cells: impl IntoIterator<Item = (u64, f64)>, trials: u64) -> ChiSquare {
    let n = trials as f64;
    let mut statistic = 0.0;
    let mut count = 0usize;
    let mut mass = 0.0;
    for (observed, p) in cells {
        let expected = n * p;
        statistic += (observed as f64 - expected).powi(2) / expected;
        mass += p;
        count += 1;
    }
    let missing = 1.0 - mass;
    if missing > 1e-12 {
        statistic += n * missing;
        count += 1;
    }
    let dof = count.saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64).map_or(f64::NAN, |d| d.sf(statistic))
    };
    ChiSquare {
        statistic,
        dof,
        p_value,
    }
}
