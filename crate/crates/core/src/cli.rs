//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 parse, 3 computation. Failures print
//! `{"error": {"kind": ..., "message": ...}}` on stderr.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::boolfun::{parse_expr, structure_matrix};
use crate::error::Error;
use crate::network::{
    compile_factored_traced, compile_truth_table, parse_network_file, CompiledNetwork, NetworkSpec,
    EXAMPLE_NETWORK,
};
use crate::optimal::{constrained_policy, optimize, PayoffTable, PayoffTiming};
use crate::reach::{
    branch, column_reachable, controllable_to, reachable_free_control, trajectory, ReachableSet,
    TimeIndexed, TranscribedDynamics,
};
use crate::stp::{
    power_reduce_matrix, product_power_reduce, swap_matrix, DeltaVector, LogicalMatrix,
};

#[derive(Debug, Parser)]
#[command(
    name = "bcnkit",
    version,
    about = "Semi-tensor product toolkit for Boolean control networks"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a network to its transition matrices.
    Compile(CompileArgs),
    /// Roll the network out under its control dynamics.
    Simulate(SimulateArgs),
    /// Reachable sets.
    Reach(ReachArgs),
    /// Average-payoff optimal control.
    Optimal(OptimalArgs),
    /// Print a named matrix: mc, md, mn, mr, swap M N, phi N, identity K, expr EXPR.
    ShowMatrix(ShowMatrixArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Network file, or `fixture` for the bundled example.
    pub input: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    #[value(alias = "delta-shorthand")]
    Delta,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    /// `L(t+1) = L ⋉ G^t` from the compiled network.
    Semantic,
    /// The closed-form factor chain (bundled example's rules only).
    Transcribed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Show {
    #[value(name = "L", alias = "l")]
    L,
    #[value(name = "G", alias = "g")]
    G,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CompilePath {
    TruthTable,
    Factored,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = Show::Both)]
    pub show: Show,
    /// Print the time-indexed `L(t)` (t ≥ 1) instead of `L`.
    #[arg(long = "t")]
    pub t: Option<usize>,
    #[arg(long, value_enum, default_value_t = Form::Semantic)]
    pub form: Form,
    #[arg(long, value_enum, default_value_t = CompilePath::TruthTable)]
    pub path: CompilePath,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub x0: usize,
    #[arg(long)]
    pub u0: usize,
    #[arg(long = "T", default_value_t = 1)]
    pub horizon: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReachMode {
    /// Every control available at every step.
    Free,
    /// Distinct columns of `L(t) ⋉ u0`.
    Columns,
}

#[derive(Debug, Args)]
pub struct ReachArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = ReachMode::Free)]
    pub mode: ReachMode,
    #[arg(long = "t", default_value_t = 1)]
    pub t: usize,
    /// Initial state (free mode).
    #[arg(long)]
    pub x0: Option<usize>,
    /// Initial control (columns mode).
    #[arg(long)]
    pub u0: Option<usize>,
    /// Columns mode: fix the predecessor state and print `L(t) ⋉ u0 ⋉ x`.
    #[arg(long)]
    pub from: Option<usize>,
    /// Free mode: report the smallest horizon reaching this state.
    #[arg(long)]
    pub target: Option<usize>,
    #[arg(long, value_enum, default_value_t = Form::Semantic)]
    pub form: Form,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Timing {
    Arrival,
    Departure,
}

#[derive(Debug, Args)]
pub struct OptimalArgs {
    #[command(flatten)]
    pub common: Common,
    /// CSV with header `u_index,x_index,payoff`.
    #[arg(long)]
    pub payoff: String,
    #[arg(long)]
    pub x0: usize,
    #[arg(long, value_enum, default_value_t = Timing::Arrival)]
    pub timing: Timing,
    /// Controls follow `u(t+1) = G ⋉ u(t)` from `--u0`.
    #[arg(long, requires = "u0")]
    pub constrained: bool,
    #[arg(long)]
    pub u0: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ShowMatrixArgs {
    pub name: String,
    pub params: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Delta)]
    pub format: Format,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            kind: "usage",
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Parse { .. } => (2, "parse"),
            Error::Payoff(_) => (2, "payoff"),
            Error::Argument(_) | Error::DeltaIndex { .. } | Error::IndexOutOfRange { .. } => {
                (1, "usage")
            }
            Error::SizeCap { .. } | Error::TooManyVariables(..) => (3, "size_cap"),
            _ => (3, "computation"),
        };
        Self {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => report(err, &Failure::usage(text.trim_end())),
            };
        }
    };
    match execute(&config) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            if !text.ends_with('\n') {
                let _ = writeln!(out);
            }
            0
        }
        Err(f) => report(err, &f),
    }
}

fn report(err: &mut dyn Write, f: &Failure) -> i32 {
    let body = json!({"error": {"kind": f.kind, "message": f.message}});
    let _ = writeln!(err, "{body}");
    f.code
}

pub fn execute(config: &RunConfig) -> Outcome {
    match &config.command {
        Command::Compile(a) => compile(a),
        Command::Simulate(a) => simulate(a),
        Command::Reach(a) => reach(a),
        Command::Optimal(a) => optimal(a),
        Command::ShowMatrix(a) => show_matrix(a),
    }
}

fn load_spec(input: &str) -> std::result::Result<NetworkSpec, Failure> {
    let text = if input == "fixture" {
        EXAMPLE_NETWORK.to_string()
    } else {
        std::fs::read_to_string(input)
            .map_err(|e| Failure::usage(format!("cannot read '{input}': {e}")))?
    };
    Ok(parse_network_file(&text)?)
}

fn delta(dim: usize, index: usize, what: &str) -> std::result::Result<DeltaVector, Failure> {
    DeltaVector::new(dim, index)
        .map_err(|_| Failure::usage(format!("{what} must be in 1..={dim}, got {index}")))
}

fn to_json<T: Serialize>(v: &T) -> Outcome {
    serde_json::to_string_pretty(v).map_err(|e| Failure {
        code: 3,
        kind: "computation",
        message: e.to_string(),
    })
}

fn matrix_csv(m: &LogicalMatrix) -> String {
    let mut out = String::new();
    for r in 1..=m.rows() {
        let row: Vec<&str> = m
            .col_indices()
            .iter()
            .map(|&c| if c == r { "1" } else { "0" })
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn format_matrix(m: &LogicalMatrix, format: Format) -> Outcome {
    match format {
        Format::Json => to_json(m),
        Format::Delta => Ok(m.to_string()),
        Format::Csv => Ok(matrix_csv(m)),
    }
}

fn compile(a: &CompileArgs) -> Outcome {
    let spec = load_spec(&a.common.input)?;
    let format = a.common.format;
    if let Some(t) = a.t {
        if t == 0 {
            return Err(Failure::usage("--t counts from 1"));
        }
        if a.show == Show::G {
            return Err(Failure::usage("--t applies to L only"));
        }
        let source = dynamics(&spec, a.form, a.path)?;
        return format_matrix(&source.transition_at(t - 1)?, format);
    }
    if a.form == Form::Transcribed {
        return Err(Failure::usage("--form transcribed needs --t"));
    }
    let c = compile_with(&spec, a.path)?;
    match (a.show, format) {
        (Show::L, f) => format_matrix(c.transition(), f),
        (Show::G, f) => format_matrix(c.control_transition(), f),
        (Show::Both, Format::Json) => to_json(&c),
        (Show::Both, Format::Delta) => Ok(format!(
            "L = {}\nG = {}\n",
            c.transition(),
            c.control_transition()
        )),
        (Show::Both, Format::Csv) => Ok(format!(
            "{}\n{}",
            matrix_csv(c.transition()),
            matrix_csv(c.control_transition())
        )),
    }
}

fn compile_with(
    spec: &NetworkSpec,
    path: CompilePath,
) -> std::result::Result<CompiledNetwork, Failure> {
    Ok(match path {
        CompilePath::TruthTable => compile_truth_table(spec)?,
        CompilePath::Factored => compile_factored_traced(spec, false)?.0,
    })
}

fn dynamics(
    spec: &NetworkSpec,
    form: Form,
    path: CompilePath,
) -> std::result::Result<Box<dyn TimeIndexed>, Failure> {
    Ok(match form {
        Form::Semantic => Box::new(compile_with(spec, path)?),
        Form::Transcribed => Box::new(TranscribedDynamics::new(spec)?),
    })
}

fn simulate(a: &SimulateArgs) -> Outcome {
    let spec = load_spec(&a.common.input)?;
    let c = compile_truth_table(&spec)?;
    let x0 = delta(c.state_count(), a.x0, "--x0")?;
    let u0 = delta(c.control_count(), a.u0, "--u0")?;
    let tr = trajectory(&c, &x0, &u0, a.horizon)?;
    match a.common.format {
        Format::Json => to_json(&tr),
        Format::Delta => {
            let states: Vec<String> = tr
                .states
                .iter()
                .map(|&i| format!("δ_{}^{i}", c.state_count()))
                .collect();
            let controls: Vec<String> = tr
                .controls
                .iter()
                .map(|&i| format!("δ_{}^{i}", c.control_count()))
                .collect();
            Ok(format!(
                "x: {}\nu: {}\n",
                states.join(" "),
                controls.join(" ")
            ))
        }
        Format::Csv => {
            let mut out = String::from("t,state,control\n");
            for (t, (x, u)) in tr.states.iter().zip(&tr.controls).enumerate() {
                out.push_str(&format!("{t},{x},{u}\n"));
            }
            Ok(out)
        }
    }
}

fn format_set(set: &ReachableSet, dim: usize, format: Format) -> Outcome {
    match format {
        Format::Json => to_json(set),
        Format::Delta => {
            let items: Vec<String> = set.members.iter().map(usize::to_string).collect();
            Ok(format!("δ_{dim}{{{}}}", items.join(",")))
        }
        Format::Csv => {
            let mut out = String::from("member\n");
            for m in &set.members {
                out.push_str(&format!("{m}\n"));
            }
            Ok(out)
        }
    }
}

fn reach(a: &ReachArgs) -> Outcome {
    let spec = load_spec(&a.common.input)?;
    let c = compile_truth_table(&spec)?;
    let format = a.common.format;
    match a.mode {
        ReachMode::Free => {
            let x0 = a.x0.ok_or_else(|| Failure::usage("free mode needs --x0"))?;
            let x0 = delta(c.state_count(), x0, "--x0")?;
            if let Some(target) = a.target {
                let xd = delta(c.state_count(), target, "--target")?;
                let w = controllable_to(&c, &x0, &xd)?;
                return to_json(&json!({"reachable": w.is_some(), "horizon": w}));
            }
            format_set(
                &reachable_free_control(&c, &x0, a.t)?,
                c.state_count(),
                format,
            )
        }
        ReachMode::Columns => {
            let u0 =
                a.u0.ok_or_else(|| Failure::usage("columns mode needs --u0"))?;
            let u0 = delta(c.control_count(), u0, "--u0")?;
            if a.t == 0 {
                return Err(Failure::usage("columns mode needs --t ≥ 1"));
            }
            let source = dynamics(&spec, a.form, CompilePath::TruthTable)?;
            if let Some(from) = a.from {
                let x = delta(c.state_count(), from, "--from")?;
                return format_matrix(&branch(source.as_ref(), &u0, a.t, &x)?, format);
            }
            format_set(
                &column_reachable(source.as_ref(), &u0, a.t)?,
                c.state_count(),
                format,
            )
        }
    }
}

fn optimal(a: &OptimalArgs) -> Outcome {
    let spec = load_spec(&a.common.input)?;
    let c = compile_truth_table(&spec)?;
    let text = std::fs::read_to_string(&a.payoff)
        .map_err(|e| Failure::usage(format!("cannot read '{}': {e}", a.payoff)))?;
    let p = PayoffTable::from_csv(&text, c.control_count(), c.state_count())?;
    let x0 = delta(c.state_count(), a.x0, "--x0")?;
    let timing = match a.timing {
        Timing::Arrival => PayoffTiming::Arrival,
        Timing::Departure => PayoffTiming::Departure,
    };
    let policy = if a.constrained {
        let u0 =
            a.u0.ok_or_else(|| Failure::usage("--constrained needs --u0"))?;
        let u0 = delta(c.control_count(), u0, "--u0")?;
        constrained_policy(&c, &p, &x0, &u0, timing)?
    } else {
        optimize(&c, &p, &x0, timing)?
    };
    match a.common.format {
        Format::Json => to_json(&policy),
        Format::Delta => {
            let transient: Vec<String> = policy
                .transient
                .iter()
                .map(|&u| format!("δ_{}^{u}", c.control_count()))
                .collect();
            let cycle: Vec<String> = policy
                .cycle
                .iter()
                .map(|&(u, x)| format!("(δ_{}^{u}, δ_{}^{x})", c.control_count(), c.state_count()))
                .collect();
            Ok(format!(
                "mean payoff: {}\ntransient: {}\ncycle: {}\n",
                policy.mean_payoff,
                transient.join(" "),
                cycle.join(" ")
            ))
        }
        Format::Csv => {
            let mut out = String::from("phase,control,state\n");
            for u in &policy.transient {
                out.push_str(&format!("transient,{u},\n"));
            }
            for (u, x) in &policy.cycle {
                out.push_str(&format!("cycle,{u},{x}\n"));
            }
            Ok(out)
        }
    }
}

fn show_matrix(a: &ShowMatrixArgs) -> Outcome {
    let num = |i: usize| -> std::result::Result<usize, Failure> {
        a.params
            .get(i)
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&k| k > 0)
            .ok_or_else(|| Failure::usage(format!("'{}' needs positive integer arguments", a.name)))
    };
    let op = |text: &str| -> std::result::Result<LogicalMatrix, Failure> {
        let e = parse_expr(text)?;
        let vars: Vec<_> = e.free_vars().into_iter().collect();
        Ok(structure_matrix(&e, &vars)?)
    };
    let m = match a.name.as_str() {
        "mc" => op("(u1 & u2)")?,
        "md" => op("(u1 | u2)")?,
        "mn" => op("!u1")?,
        "mx" => op("(u1 ^ u2)")?,
        "mr" => power_reduce_matrix(),
        "swap" => swap_matrix(num(0)?, num(1)?)?,
        "phi" => product_power_reduce(num(0)?)?,
        "identity" => LogicalMatrix::identity(num(0)?)?,
        "expr" => {
            let text = a
                .params
                .first()
                .ok_or_else(|| Failure::usage("expr needs an expression"))?;
            op(text)?
        }
        other => return Err(Failure::usage(format!("unknown matrix '{other}'"))),
    };
    format_matrix(&m, a.format)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("bcnkit").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn show_matrix_names() {
        assert_eq!(call(&["show-matrix", "mc"]).1.trim(), "δ_2[1 2 2 2]");
        assert_eq!(
            call(&["show-matrix", "swap", "2", "2"]).1.trim(),
            "δ_4[1 3 2 4]"
        );
        assert_eq!(call(&["show-matrix", "bogus"]).0, 1);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["compile"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
        assert_eq!(
            call(&["simulate", "fixture", "--x0", "9", "--u0", "1"]).0,
            1
        );
        let (code, _, err) = call(&["show-matrix", "expr", "(u1 & u2"]);
        assert_eq!(code, 2);
        assert!(err.contains("\"parse\""), "{err}");
    }

    #[test]
    fn column_reach_mode() {
        let (code, out, _) = call(&[
            "reach", "fixture", "--mode", "columns", "--u0", "1", "--t", "1",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["members"], json!([1, 2]));
    }
}
