use std::collections::HashMap;

use super::{BoolExpr, Var};
use crate::error::{Error, Result};
use crate::stp::LogicalMatrix;

/// Enumeration limit for truth tables and structure matrices.
pub const MAX_TABLE_VARS: usize = 16;

/// Values of `r` variables for the 0-based joint index `index0`, first
/// variable first. Index 0 is all-true.
pub fn assignment_bits(index0: usize, r: usize) -> impl Iterator<Item = bool> {
    (0..r).map(move |j| (index0 >> (r - 1 - j)) & 1 == 0)
}

/// 1-based joint delta index of an assignment.
pub fn joint_index(bits: &[bool]) -> usize {
    1 + bits
        .iter()
        .fold(0usize, |acc, &b| (acc << 1) | usize::from(!b))
}

/// Outputs of a function for all `2^arity` assignments, in delta ordering.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    arity: usize,
    outputs: Vec<bool>,
}

impl TruthTable {
    pub fn new(arity: usize, outputs: Vec<bool>) -> Result<Self> {
        if arity > MAX_TABLE_VARS {
            return Err(Error::TooManyVariables(arity, MAX_TABLE_VARS));
        }
        if outputs.len() != 1 << arity {
            return Err(Error::dim(format!(
                "{} outputs for arity {arity}",
                outputs.len()
            )));
        }
        Ok(Self { arity, outputs })
    }

    /// Table of the `code`-th function of `arity` variables: output for
    /// assignment `i` is bit `i` of `code`.
    pub fn from_code(arity: usize, code: u64) -> Result<Self> {
        if arity > 6 {
            return Err(Error::TooManyVariables(arity, 6));
        }
        Self::new(
            arity,
            (0..1usize << arity).map(|i| (code >> i) & 1 == 1).collect(),
        )
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn outputs(&self) -> &[bool] {
        &self.outputs
    }

    /// Output at the 0-based joint index.
    pub fn get(&self, index0: usize) -> bool {
        self.outputs[index0]
    }

    pub fn to_structure_matrix(&self) -> LogicalMatrix {
        let cols = self
            .outputs
            .iter()
            .map(|&b| if b { 1 } else { 2 })
            .collect();
        LogicalMatrix::new(2, cols).expect("2-row logical matrix")
    }
}

fn check_order(e: &BoolExpr, var_order: &[Var]) -> Result<HashMap<Var, usize>> {
    if var_order.len() > MAX_TABLE_VARS {
        return Err(Error::TooManyVariables(var_order.len(), MAX_TABLE_VARS));
    }
    let mut pos = HashMap::with_capacity(var_order.len());
    for (i, v) in var_order.iter().enumerate() {
        if pos.insert(*v, i).is_some() {
            return Err(Error::Network(format!("variable {v} listed twice")));
        }
    }
    if let Some(missing) = e.free_vars().into_iter().find(|v| !pos.contains_key(v)) {
        return Err(Error::UnboundVariable(missing.to_string()));
    }
    Ok(pos)
}

/// Truth table of `e` with variables ordered as `var_order`. The order must
/// cover every free variable of `e`; extra variables are allowed and simply
/// do not influence the output.
pub fn truth_table(e: &BoolExpr, var_order: &[Var]) -> Result<TruthTable> {
    let pos = check_order(e, var_order)?;
    let r = var_order.len();
    let mut outputs = Vec::with_capacity(1 << r);
    let mut bits = vec![false; r];
    for index0 in 0..1usize << r {
        for (slot, b) in bits.iter_mut().zip(assignment_bits(index0, r)) {
            *slot = b;
        }
        outputs.push(e.eval_with(&|v| pos.get(&v).map(|&i| bits[i]))?);
    }
    TruthTable::new(r, outputs)
}

/// Structure matrix `M_e` (2 x 2^r) with `M_e ⋉ v_1 ⋉ … ⋉ v_r = e(v)`.
pub fn structure_matrix(e: &BoolExpr, var_order: &[Var]) -> Result<LogicalMatrix> {
    Ok(truth_table(e, var_order)?.to_structure_matrix())
}

/// Builds an expression realizing `table` over `vars` by Shannon expansion
/// on the first variable.
pub fn from_truth_table(table: &TruthTable, vars: &[Var]) -> Result<BoolExpr> {
    if vars.len() != table.arity() {
        return Err(Error::dim(format!(
            "{} variables for a table of arity {}",
            vars.len(),
            table.arity()
        )));
    }
    Ok(shannon(table.outputs(), vars))
}

fn shannon(outputs: &[bool], vars: &[Var]) -> BoolExpr {
    if outputs.iter().all(|&b| b) {
        return BoolExpr::Const(true);
    }
    if outputs.iter().all(|&b| !b) {
        return BoolExpr::Const(false);
    }
    let half = outputs.len() / 2;
    // First half of the table is the first variable set to true.
    let (hi, lo) = outputs.split_at(half);
    let v = BoolExpr::Var(vars[0]);
    let rest = &vars[1..];
    if hi == lo {
        return shannon(hi, rest);
    }
    let f1 = shannon(hi, rest);
    let f0 = shannon(lo, rest);
    match (&f1, &f0) {
        (BoolExpr::Const(true), BoolExpr::Const(false)) => v,
        (BoolExpr::Const(false), BoolExpr::Const(true)) => BoolExpr::not(v),
        (BoolExpr::Const(true), _) => BoolExpr::or(v, f0),
        (BoolExpr::Const(false), _) => BoolExpr::and(BoolExpr::not(v), f0),
        (_, BoolExpr::Const(false)) => BoolExpr::and(v, f1),
        (_, BoolExpr::Const(true)) => BoolExpr::or(BoolExpr::not(v), f1),
        _ => BoolExpr::or(
            BoolExpr::and(v.clone(), f1),
            BoolExpr::and(BoolExpr::not(v), f0),
        ),
    }
}
