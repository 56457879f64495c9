//! Boolean control networks with derivative inputs.
//!
//! A [`NetworkSpec`] holds state rules `x_i(t+1) = f_i(x(t), u(t), ∂g/∂u(t))`,
//! control rules `u_j(t+1) = g_j(u(t))` and the derivative source `g(u)`.
//! Compilation produces a [`CompiledNetwork`] with
//! `x(t+1) = L ⋉ u(t) ⋉ x(t)` and `u(t+1) = G ⋉ u(t)`.
//!
//! Two independent compilers exist and must agree bit for bit:
//! [`compile_truth_table`] enumerates assignments, [`compile_factored`]
//! normalizes the product of structure matrices and variables symbolically.

mod file;
mod normalize;
mod transcribed;
mod truth_table;

pub use file::{format_network, parse_network_file};
pub use normalize::{compile_factored, compile_factored_traced, RewriteStep, RewriteTrace};
pub use transcribed::{Factor, TranscribedChain};
pub use truth_table::{compile_truth_table, compile_truth_table_with};

use serde::Serialize;

use crate::boolfun::{boolean_derivative, BoolExpr, Var};
use crate::error::{Error, Result};
use crate::stp::{DeltaVector, LogicalMatrix};

/// Largest `n + m` accepted by the compilers.
pub const MAX_NETWORK_VARS: usize = 16;

/// The two-state, two-control example network with `g = u1 ∧ u2`, in the
/// network-file format.
pub const EXAMPLE_NETWORK: &str = include_str!("../../fixtures/derivative_control.bcn");

pub fn example_network() -> NetworkSpec {
    parse_network_file(EXAMPLE_NETWORK).expect("bundled example parses")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkSpec {
    n: usize,
    m: usize,
    f: Vec<BoolExpr>,
    g_update: Vec<BoolExpr>,
    g: BoolExpr,
}

impl NetworkSpec {
    pub fn new(f: Vec<BoolExpr>, g_update: Vec<BoolExpr>, g: BoolExpr) -> Result<Self> {
        let spec = Self {
            n: f.len(),
            m: g_update.len(),
            f,
            g_update,
            g,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let (n, m) = (self.n, self.m);
        if n == 0 {
            return Err(Error::Network("a network needs at least one state".into()));
        }
        for (i, f) in self.f.iter().enumerate() {
            for v in f.free_vars() {
                let ok = match v {
                    Var::State(k) => (1..=n).contains(&k),
                    Var::Control(k) | Var::Deriv(k) => (1..=m).contains(&k),
                };
                if !ok {
                    return Err(Error::Network(format!(
                        "rule for x{} references undeclared {v}",
                        i + 1
                    )));
                }
            }
        }
        let controls_only = |e: &BoolExpr, what: &str| -> Result<()> {
            match e
                .free_vars()
                .into_iter()
                .find(|v| !matches!(v, Var::Control(k) if (1..=m).contains(k)))
            {
                Some(v) => Err(Error::Network(format!("{what} references {v}"))),
                None => Ok(()),
            }
        };
        for (j, e) in self.g_update.iter().enumerate() {
            controls_only(e, &format!("rule for u{}", j + 1))?;
        }
        controls_only(&self.g, "derivative source g")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn state_rules(&self) -> &[BoolExpr] {
        &self.f
    }

    pub fn control_rules(&self) -> &[BoolExpr] {
        &self.g_update
    }

    pub fn derivative_source(&self) -> &BoolExpr {
        &self.g
    }

    /// `∂g/∂u_k` for `k = 1..=m`.
    pub fn derivatives(&self) -> Result<Vec<BoolExpr>> {
        (1..=self.m)
            .map(|k| boolean_derivative(&self.g, k, self.m))
            .collect()
    }

    /// State rules with every `∂g/∂u_k` replaced by its control expression.
    pub fn expanded_state_rules(&self) -> Result<Vec<BoolExpr>> {
        let derivs = self.derivatives()?;
        Ok(self
            .f
            .iter()
            .map(|f| {
                derivs
                    .iter()
                    .enumerate()
                    .fold(f.clone(), |e, (k, d)| e.replace(Var::Deriv(k + 1), d))
            })
            .collect())
    }

    pub(crate) fn check_compile_size(&self) -> Result<()> {
        if self.n + self.m > MAX_NETWORK_VARS {
            return Err(Error::TooManyVariables(self.n + self.m, MAX_NETWORK_VARS));
        }
        Ok(())
    }
}

/// Transition matrices of a network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompiledNetwork {
    n: usize,
    m: usize,
    #[serde(rename = "L")]
    l: LogicalMatrix,
    #[serde(rename = "G")]
    g: LogicalMatrix,
}

impl CompiledNetwork {
    pub fn new(n: usize, m: usize, l: LogicalMatrix, g: LogicalMatrix) -> Result<Self> {
        let (sx, su) = (1usize << n, 1usize << m);
        if l.dims() != (sx, sx * su) {
            return Err(Error::dim(format!(
                "L must be {sx}x{}, got {:?}",
                sx * su,
                l.dims()
            )));
        }
        if g.dims() != (su, su) {
            return Err(Error::dim(format!(
                "G must be {su}x{su}, got {:?}",
                g.dims()
            )));
        }
        Ok(Self { n, m, l, g })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of joint states, `2^n`.
    pub fn state_count(&self) -> usize {
        1 << self.n
    }

    /// Number of joint controls, `2^m`.
    pub fn control_count(&self) -> usize {
        1 << self.m
    }

    /// `L` with `x(t+1) = L ⋉ u(t) ⋉ x(t)`.
    pub fn transition(&self) -> &LogicalMatrix {
        &self.l
    }

    /// `G` with `u(t+1) = G ⋉ u(t)`.
    pub fn control_transition(&self) -> &LogicalMatrix {
        &self.g
    }

    /// Successor state index of state `ix` under control `iu` (1-based).
    pub fn successor(&self, iu: usize, ix: usize) -> usize {
        self.l.column((iu - 1) * self.state_count() + ix)
    }

    pub fn state_vector(&self, ix: usize) -> Result<DeltaVector> {
        DeltaVector::new(self.state_count(), ix)
    }

    pub fn control_vector(&self, iu: usize) -> Result<DeltaVector> {
        DeltaVector::new(self.control_count(), iu)
    }

    fn check_state(&self, x: &DeltaVector) -> Result<()> {
        if x.dim() != self.state_count() {
            return Err(Error::dim(format!(
                "state δ_{} for a network with {} states",
                x.dim(),
                self.state_count()
            )));
        }
        Ok(())
    }

    fn check_control(&self, u: &DeltaVector) -> Result<()> {
        if u.dim() != self.control_count() {
            return Err(Error::dim(format!(
                "control δ_{} for a network with {} controls",
                u.dim(),
                self.control_count()
            )));
        }
        Ok(())
    }

    /// `L ⋉ u ⋉ x`.
    pub fn step(&self, u: &DeltaVector, x: &DeltaVector) -> Result<DeltaVector> {
        self.check_control(u)?;
        self.check_state(x)?;
        self.state_vector(self.successor(u.index(), x.index()))
    }

    /// `G ⋉ u`.
    pub fn control_step(&self, u: &DeltaVector) -> Result<DeltaVector> {
        self.check_control(u)?;
        self.g.apply_vector(u)
    }

    /// `G^t ⋉ u0`.
    pub fn control_power(&self, t: usize, u0: &DeltaVector) -> Result<DeltaVector> {
        self.check_control(u0)?;
        self.g.pow(t)?.apply_vector(u0)
    }

    /// `L(t+1) = L ⋉ G^t`, so that `x(t+1) = L(t+1) ⋉ u(0) ⋉ x(t)` along the
    /// control dynamics.
    pub fn time_indexed_matrix(&self, t: usize) -> Result<LogicalMatrix> {
        self.l.stp(&self.g.pow(t)?)
    }
}
