//! Boolean expressions over state, control and derivative variables, and
//! their vector-form structure matrices.
//!
//! Encoding: `true ↦ δ_2^1`, `false ↦ δ_2^2`. A product `v_1 ⋉ … ⋉ v_r` of
//! encoded values is the basis vector with joint index
//! `1 + Σ_j (1 - b_j)·2^{r-j}`, so the all-true assignment is column 1 of
//! every structure matrix.

mod derivative;
mod syntax;
mod table;

use std::collections::BTreeSet;
use std::fmt;

pub use derivative::{boolean_derivative, simplify};
pub use syntax::parse_expr;
pub(crate) use syntax::parse_expr_at;
pub use table::{
    assignment_bits, from_truth_table, joint_index, structure_matrix, truth_table, TruthTable,
    MAX_TABLE_VARS,
};

use crate::error::{Error, Result};
use crate::stp::DeltaVector;

/// A leaf variable. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    State(usize),
    Control(usize),
    /// `∂g/∂u_k`.
    Deriv(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::State(i) => write!(f, "x{i}"),
            Var::Control(j) => write!(f, "u{j}"),
            Var::Deriv(k) => write!(f, "d(g)/d(u{k})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    Const(bool),
    Var(Var),
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
    Xor(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn state(i: usize) -> Self {
        BoolExpr::Var(Var::State(i))
    }

    pub fn control(j: usize) -> Self {
        BoolExpr::Var(Var::Control(j))
    }

    pub fn deriv(k: usize) -> Self {
        BoolExpr::Var(Var::Deriv(k))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: BoolExpr) -> Self {
        BoolExpr::Not(Box::new(e))
    }

    pub fn and(a: BoolExpr, b: BoolExpr) -> Self {
        BoolExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: BoolExpr, b: BoolExpr) -> Self {
        BoolExpr::Or(Box::new(a), Box::new(b))
    }

    pub fn xor(a: BoolExpr, b: BoolExpr) -> Self {
        BoolExpr::Xor(Box::new(a), Box::new(b))
    }

    /// Free variables in canonical order (states, then controls, then derivatives).
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            BoolExpr::Const(_) => {}
            BoolExpr::Var(v) => {
                out.insert(*v);
            }
            BoolExpr::Not(a) => a.collect_vars(out),
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) | BoolExpr::Xor(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn contains(&self, v: Var) -> bool {
        match self {
            BoolExpr::Const(_) => false,
            BoolExpr::Var(w) => *w == v,
            BoolExpr::Not(a) => a.contains(v),
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) | BoolExpr::Xor(a, b) => {
                a.contains(v) || b.contains(v)
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            BoolExpr::Const(_) | BoolExpr::Var(_) => 1,
            BoolExpr::Not(a) => 1 + a.size(),
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) | BoolExpr::Xor(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Evaluates with a lookup for every variable.
    pub fn eval_with<F>(&self, lookup: &F) -> Result<bool>
    where
        F: Fn(Var) -> Option<bool>,
    {
        Ok(match self {
            BoolExpr::Const(b) => *b,
            BoolExpr::Var(v) => lookup(*v).ok_or_else(|| Error::UnboundVariable(v.to_string()))?,
            BoolExpr::Not(a) => !a.eval_with(lookup)?,
            BoolExpr::And(a, b) => a.eval_with(lookup)? & b.eval_with(lookup)?,
            BoolExpr::Or(a, b) => a.eval_with(lookup)? | b.eval_with(lookup)?,
            BoolExpr::Xor(a, b) => a.eval_with(lookup)? ^ b.eval_with(lookup)?,
        })
    }

    pub fn eval(&self, env: &Env<'_>) -> Result<bool> {
        self.eval_with(&|v| env.get(v))
    }

    /// Replaces every occurrence of `v` by `by`.
    pub fn replace(&self, v: Var, by: &BoolExpr) -> BoolExpr {
        match self {
            BoolExpr::Var(w) if *w == v => by.clone(),
            BoolExpr::Const(_) | BoolExpr::Var(_) => self.clone(),
            BoolExpr::Not(a) => BoolExpr::not(a.replace(v, by)),
            BoolExpr::And(a, b) => BoolExpr::and(a.replace(v, by), b.replace(v, by)),
            BoolExpr::Or(a, b) => BoolExpr::or(a.replace(v, by), b.replace(v, by)),
            BoolExpr::Xor(a, b) => BoolExpr::xor(a.replace(v, by), b.replace(v, by)),
        }
    }
}

impl fmt::Display for BoolExpr {
    /// Fully parenthesized DSL form, e.g. `(x2 | (u1 & d(g)/d(u2)))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoolExpr::Const(b) => write!(f, "{}", u8::from(*b)),
            BoolExpr::Var(v) => write!(f, "{v}"),
            BoolExpr::Not(a) => write!(f, "!{a}"),
            BoolExpr::And(a, b) => write!(f, "({a} & {b})"),
            BoolExpr::Or(a, b) => write!(f, "({a} | {b})"),
            BoolExpr::Xor(a, b) => write!(f, "({a} ^ {b})"),
        }
    }
}

/// Variable values for [`BoolExpr::eval`]; slot `i - 1` holds index `i`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Env<'a> {
    pub state: &'a [bool],
    pub control: &'a [bool],
    pub deriv: &'a [bool],
}

impl Env<'_> {
    pub fn get(&self, v: Var) -> Option<bool> {
        let (slice, i) = match v {
            Var::State(i) => (self.state, i),
            Var::Control(i) => (self.control, i),
            Var::Deriv(i) => (self.deriv, i),
        };
        i.checked_sub(1).and_then(|i| slice.get(i)).copied()
    }
}

pub fn encode_bool(b: bool) -> DeltaVector {
    DeltaVector::new(2, if b { 1 } else { 2 }).expect("valid basis vector")
}

pub fn decode_bool(v: &DeltaVector) -> Result<bool> {
    match (v.dim(), v.index()) {
        (2, 1) => Ok(true),
        (2, 2) => Ok(false),
        (dim, _) => Err(Error::dim(format!("δ_{dim} is not a Boolean value"))),
    }
}

/// Encodes a tuple of Boolean values as a single basis vector of dimension `2^len`.
pub fn encode_bools(bits: &[bool]) -> DeltaVector {
    DeltaVector::new(1 << bits.len(), joint_index(bits)).expect("valid basis vector")
}

/// Decodes a basis vector of dimension `2^r` into `r` Boolean values.
pub fn decode_bools(v: &DeltaVector, r: usize) -> Result<Vec<bool>> {
    if v.dim() != 1 << r {
        return Err(Error::dim(format!(
            "δ_{} does not encode {r} values",
            v.dim()
        )));
    }
    Ok(assignment_bits(v.index() - 1, r).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_roundtrip() {
        assert_eq!(encode_bool(true), DeltaVector::new(2, 1).unwrap());
        assert_eq!(encode_bool(false), DeltaVector::new(2, 2).unwrap());
        for b in [true, false] {
            assert_eq!(decode_bool(&encode_bool(b)).unwrap(), b);
        }
        assert!(decode_bool(&DeltaVector::new(4, 1).unwrap()).is_err());
        let bits = [true, false, false];
        assert_eq!(decode_bools(&encode_bools(&bits), 3).unwrap(), bits);
    }

    #[test]
    fn eval_basics() {
        let e = BoolExpr::and(BoolExpr::Const(true), BoolExpr::Const(false));
        assert!(!e.eval(&Env::default()).unwrap());
        for p in [true, false] {
            let x = BoolExpr::xor(BoolExpr::state(1), BoolExpr::state(1));
            assert!(!x
                .eval(&Env {
                    state: &[p],
                    ..Env::default()
                })
                .unwrap());
        }
    }

    #[test]
    fn eval_first_rule_at_initial_condition() {
        // x2 | (u1 & ∂g/∂u2) with x = u = (1, 1) and ∂g/∂u2 = u1 = 1
        let f1 = BoolExpr::or(
            BoolExpr::state(2),
            BoolExpr::and(BoolExpr::control(1), BoolExpr::deriv(2)),
        );
        let env = Env {
            state: &[true, true],
            control: &[true, true],
            deriv: &[true, true],
        };
        assert!(f1.eval(&env).unwrap());
    }

    #[test]
    fn unbound_variable_is_an_error() {
        let e = BoolExpr::control(3);
        let err = e
            .eval(&Env {
                control: &[true],
                ..Env::default()
            })
            .unwrap_err();
        assert_eq!(err, Error::UnboundVariable("u3".into()));
    }

    #[test]
    fn display_is_fully_parenthesized() {
        let e = BoolExpr::or(
            BoolExpr::state(2),
            BoolExpr::and(BoolExpr::control(1), BoolExpr::deriv(2)),
        );
        assert_eq!(e.to_string(), "(x2 | (u1 & d(g)/d(u2)))");
        assert_eq!(BoolExpr::not(BoolExpr::Const(false)).to_string(), "!0");
    }
}
