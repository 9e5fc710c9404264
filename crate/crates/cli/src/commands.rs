//! Subcommands. Each one builds a [`RunReport`]; mathematical verdicts are
//! report values, not errors.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use obsmask::algebra::pauli_dot;
use obsmask::bitcommit::no_bit_commitment_demo;
use obsmask::bloch::{coeffs_to_observable, observable_coeffs, state_to_bloch};
use obsmask::comask::{
    affine_dimension, comask_from_line, comask_from_planar, comask_from_point, comask_general,
    find_common_output_state, universal_counterexample,
};
use obsmask::masking::{
    build_constant_masker, build_masker_swap, decide_maskable_necessary, decide_maskable_oracle,
    decide_maskable_qubit, masking_output_state, necessary_threshold, unit_from_angles, verify_masking,
    verify_nohiding,
};
use obsmask::report::format_floats;
use obsmask::selftest;
use obsmask::{BlochVector, ComaskDescription, ComplexMatrix, Error, ObservableCoeffs, RunReport};

use crate::format::{parse_document, parse_documents, render_all, Document};
use crate::{CliError, EXIT_OK, EXIT_SELFTEST_FAILED};

/// Masking defect below which a state counts as satisfying the condition.
const MASKED: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "obsmask", version, about = "Decide, build and verify observable maskers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Bloch criterion for qubits, necessary condition otherwise.
    Bloch,
    /// Eigenvalue range.
    Oracle,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether an observable can be masked.
    Maskable {
        #[arg(long)]
        observable: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Build a constant masker and write its Kraus operators.
    Mask {
        #[arg(long)]
        observable: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check that the qubit masker for n(theta, phi) hides nothing.
    Nohide {
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long)]
        u0: Option<PathBuf>,
        #[arg(long)]
        u1: Option<PathBuf>,
    },
    /// Describe the observables masked by every state in a set.
    Comask {
        #[arg(long)]
        states: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Search for one output state that masks all given observables.
    CommonState {
        #[arg(long, num_args = 1.., required = true)]
        observables: Vec<PathBuf>,
    },
    /// Observable masked at b' but not at b.
    Counterexample {
        #[arg(long)]
        b: PathBuf,
        #[arg(long = "bprime")]
        b_prime: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Seeded walk through the bit-commitment reduction.
    BitcommitDemo {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the built-in invariant suites.
    Selftest,
}

#[derive(Debug)]
pub struct Outcome {
    pub report: RunReport,
    pub exit_code: i32,
}

impl From<RunReport> for Outcome {
    fn from(report: RunReport) -> Self {
        Self {
            report,
            exit_code: EXIT_OK,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Maskable { observable, method, dim } => maskable(observable, *method, *dim).map(Into::into),
        Command::Mask { observable, out } => mask(observable, out).map(Into::into),
        Command::Nohide { theta, phi, u0, u1 } => nohide(*theta, *phi, u0.as_deref(), u1.as_deref()).map(Into::into),
        Command::Comask { states, dim } => comask(states, *dim).map(Into::into),
        Command::CommonState { observables } => common_state(observables).map(Into::into),
        Command::Counterexample { b, b_prime, dim } => counterexample(b, b_prime, *dim).map(Into::into),
        Command::BitcommitDemo { dim, seed } => Ok(no_bit_commitment_demo(*dim, *seed)?.to_report().into()),
        Command::Selftest => Ok(selftest_report()),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn in_file<T>(path: &Path, r: Result<T, CliError>) -> Result<T, CliError> {
    r.map_err(|e| match e {
        CliError::Parse { .. } | CliError::DimensionMismatch { .. } => CliError::InFile {
            path: path.display().to_string(),
            source: Box::new(e),
        },
        other => other,
    })
}

fn load(path: &Path) -> Result<Document, CliError> {
    in_file(path, parse_document(&read(path)?))
}

fn load_all(path: &Path) -> Result<Vec<Document>, CliError> {
    in_file(path, parse_documents(&read(path)?))
}

fn wrong_kind(path: &Path, expected: &str, doc: &Document) -> CliError {
    CliError::Usage(format!("{}: expected {expected}, found {}", path.display(), doc.kind()))
}

fn check_dim(expected: Option<usize>, got: usize) -> Result<(), CliError> {
    match expected {
        Some(d) if d != got => Err(Error::DimensionMismatch { expected: d, got }.into()),
        _ => Ok(()),
    }
}

/// Observable as matrix and coefficients, from either file kind.
fn load_observable(path: &Path) -> Result<(ComplexMatrix, ObservableCoeffs), CliError> {
    match load(path)? {
        Document::Matrix(m) => {
            let c = observable_coeffs(&m)?;
            Ok((m, c))
        }
        Document::Coeffs(c) => Ok((coeffs_to_observable(&c), c)),
        other => Err(wrong_kind(path, "matrix or coeffs", &other)),
    }
}

fn load_bloch(path: &Path) -> Result<BlochVector, CliError> {
    match load(path)? {
        Document::Bloch(b) => Ok(b),
        other => Err(wrong_kind(path, "bloch", &other)),
    }
}

fn load_unitary(path: &Path) -> Result<ComplexMatrix, CliError> {
    match load(path)? {
        Document::Matrix(m) if m.shape() == (2, 2) => {
            m.require_unitary()?;
            Ok(m)
        }
        other => Err(wrong_kind(path, "2x2 matrix", &other)),
    }
}

fn header(command: &str) -> RunReport {
    let mut r = RunReport::new();
    r.push("command", command);
    r
}

fn maskable(path: &Path, method: Method, dim: Option<usize>) -> Result<RunReport, CliError> {
    let (o, c) = load_observable(path)?;
    let d = c.dim();
    check_dim(dim, d)?;
    let mut r = header("maskable");
    r.push("dim", d)
        .push("method", format!("{method:?}").to_lowercase())
        .push_float("a0", c.a0)
        .push_floats("a", &c.a);

    let mut verdicts = Vec::new();
    if method != Method::Oracle {
        if d == 2 {
            let v = decide_maskable_qubit(&c)?;
            r.push("bloch_maskable", v.maskable);
            match v.plane_distance {
                Some(p) => r.push_float("plane_distance", p),
                None => r.push("plane_distance", "undefined"),
            };
            if method == Method::Bloch {
                r.push_floats("eig_range", &[v.eig_range.0, v.eig_range.1]);
            }
            verdicts.push(Some(v.maskable));
        } else {
            let v = decide_maskable_necessary(&c);
            r.push("necessary_condition", v.maskable)
                .push_float("a_norm", c.a_norm())
                .push_float("necessary_threshold", necessary_threshold(d, c.a0));
            // Passing the necessary condition alone decides nothing.
            verdicts.push((!v.maskable).then_some(false));
        }
    }
    if method != Method::Bloch {
        let v = decide_maskable_oracle(&o)?;
        r.push("oracle_maskable", v.maskable)
            .push_floats("eig_range", &[v.eig_range.0, v.eig_range.1]);
        verdicts.push(Some(v.maskable));
    }
    let decided: Vec<bool> = verdicts.iter().flatten().copied().collect();
    if method == Method::Both {
        r.push("methods_agree", decided.windows(2).all(|w| w[0] == w[1]));
    }
    match decided.last() {
        Some(m) => r.push("maskable", m),
        None => r.push("maskable", "undecided"),
    };
    Ok(r)
}

fn mask(path: &Path, out: &Path) -> Result<RunReport, CliError> {
    let (o, c) = load_observable(path)?;
    let verdict = decide_maskable_oracle(&o)?;
    let mut r = header("mask");
    r.push("dim", c.dim())
        .push("maskable", verdict.maskable)
        .push_floats("eig_range", &[verdict.eig_range.0, verdict.eig_range.1]);
    if !verdict.maskable {
        r.push("kraus_written", 0);
        return Ok(r);
    }
    let (weight, sigma) = masking_output_state(&o)?;
    let channel = build_constant_masker(&o)?;
    let docs: Vec<Document> = channel.kraus().iter().cloned().map(Document::Matrix).collect();
    fs::write(out, render_all(&docs)).map_err(|source| CliError::Io {
        path: out.to_path_buf(),
        source,
    })?;
    r.push_float("output_weight", weight)
        .push_floats("output_bloch", state_to_bloch(&sigma)?.components())
        .push_float("adjoint_residual", verify_masking(&channel, &o)?)
        .push_float("trace_preservation_residual", channel.trace_preservation_residual())
        .push("kraus_written", docs.len());
    Ok(r)
}

fn nohide(theta: f64, phi: f64, u0: Option<&Path>, u1: Option<&Path>) -> Result<RunReport, CliError> {
    let identity = ComplexMatrix::identity(2);
    let u0 = u0.map(load_unitary).transpose()?.unwrap_or_else(|| identity.clone());
    let u1 = u1.map(load_unitary).transpose()?.unwrap_or(identity);
    let n = unit_from_angles(theta, phi);
    let (channel, _) = build_masker_swap(n)?;
    let check = verify_nohiding(n, &u0, &u1)?;
    let mut r = header("nohide");
    r.push_floats("n", &n)
        .push_float("masking_residual", verify_masking(&channel, &pauli_dot(n))?)
        .push_float("residual_system", check.residual_system)
        .push_float("residual_recovery", check.residual_recovery)
        .push("verified", check.verified);
    Ok(r)
}

/// Qubit sets get the closed-form descriptions where they apply.
fn describe(points: &[Vec<f64>], d: usize) -> Result<ComaskDescription, CliError> {
    let k = affine_dimension(points);
    let triple = |p: &Vec<f64>| [p[0], p[1], p[2]];
    let first = &points[0];
    let special = match (d, k) {
        (2, 0) => Some(comask_from_point(triple(first))),
        (2, 1) => {
            let other = points.iter().find(|p| *p != first).unwrap_or(first);
            Some(comask_from_line(triple(first), triple(other)))
        }
        (2, 2) => Some(comask_from_planar(&points.iter().map(triple).collect::<Vec<_>>())),
        _ => None,
    };
    match special {
        Some(Ok(desc)) => Ok(desc),
        Some(Err(Error::DegenerateState(_) | Error::DegenerateLine(_) | Error::Inconsistent { .. })) | None => {
            Ok(comask_general(points, d)?)
        }
        Some(Err(e)) => Err(e.into()),
    }
}

fn comask(path: &Path, dim: Option<usize>) -> Result<RunReport, CliError> {
    let docs = load_all(path)?;
    let mut points = Vec::with_capacity(docs.len());
    let mut d = None;
    for doc in docs {
        let Document::Bloch(b) = doc else {
            return Err(wrong_kind(path, "bloch vectors", &doc));
        };
        check_dim(d, b.dim())?;
        d = Some(b.dim());
        points.push(b.into_components());
    }
    let Some(d) = d else {
        return Err(CliError::Usage(format!("{}: no states given", path.display())));
    };
    check_dim(dim, d)?;
    let desc = describe(&points, d)?;
    let mut r = header("comask");
    r.push("dim", d)
        .push("points", points.len())
        .push("points_affine_dim", affine_dimension(&points))
        .push("kind", desc.kind.as_str())
        .push("comask_dim", desc.set.affine_dim());
    match desc.a0_fixed {
        Some(a0) => r.push_float("a0", a0),
        None => r.push("a0", "free"),
    };
    r.push_floats("base", desc.set.base());
    for (i, v) in desc.set.directions().iter().enumerate() {
        r.push(&format!("direction_{}", i + 1), format_floats(v));
    }
    Ok(r)
}

fn common_state(paths: &[PathBuf]) -> Result<RunReport, CliError> {
    let observables = paths
        .iter()
        .map(|p| load_observable(p).map(|(_, c)| c))
        .collect::<Result<Vec<_>, _>>()?;
    let d = observables[0].dim();
    let mut r = header("common-state");
    r.push("dim", d).push("observables", observables.len());
    match find_common_output_state(&observables, d) {
        Ok(s) => {
            r.push("feasible", true)
                .push_floats("bloch", s.bloch.components())
                .push_float("residual", s.residual)
                .push("iterations", s.iterations);
        }
        Err(Error::Infeasible { distance, iterations }) => {
            r.push("feasible", false)
                .push("reason", "the masking constraints miss the state space")
                .push_float("distance", distance)
                .push("iterations", iterations);
        }
        Err(Error::NoAffineSolution { residual }) => {
            r.push("feasible", false)
                .push("reason", "the masking constraints are inconsistent")
                .push_float("residual", residual);
        }
        Err(e) => return Err(e.into()),
    }
    Ok(r)
}

fn counterexample(b: &Path, b_prime: &Path, dim: Option<usize>) -> Result<RunReport, CliError> {
    let b = load_bloch(b)?;
    let bp = load_bloch(b_prime)?;
    check_dim(Some(b.dim()), bp.dim())?;
    check_dim(dim, b.dim())?;
    let c = universal_counterexample(b.components(), bp.components(), b.dim())?;
    let at_b = c.masking_defect(b.components());
    let at_bp = c.masking_defect(bp.components());
    let mut r = header("counterexample");
    r.push("dim", b.dim())
        .push_float("a0", c.a0)
        .push_floats("a", &c.a)
        .push_float("defect_at_bprime", at_bp)
        .push_float("defect_at_b", at_b)
        .push("masked_at_bprime", at_bp.abs() < MASKED)
        .push("masked_at_b", at_b.abs() < MASKED);
    Ok(r)
}

fn selftest_report() -> Outcome {
    let results = selftest::run_all();
    let mut r = header("selftest");
    for s in &results {
        r.push(s.name, format!("{}/{} passed", s.checks - s.failures, s.checks));
    }
    let passed = results.iter().all(|s| s.passed());
    r.push("result", if passed { "pass" } else { "fail" });
    Outcome {
        report: r,
        exit_code: if passed { EXIT_OK } else { EXIT_SELFTEST_FAILED },
    }
}
