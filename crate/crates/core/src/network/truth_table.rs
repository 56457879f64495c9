use super::{CompiledNetwork, NetworkSpec};
use crate::boolfun::{assignment_bits, joint_index, BoolExpr, Env};
use crate::error::Result;
use crate::par::{try_map_range, Exec};
use crate::stp::LogicalMatrix;

/// Compiles by evaluating every rule on every joint assignment.
pub fn compile_truth_table(spec: &NetworkSpec) -> Result<CompiledNetwork> {
    compile_truth_table_with(spec, Exec::default())
}

pub fn compile_truth_table_with(spec: &NetworkSpec, exec: Exec) -> Result<CompiledNetwork> {
    spec.check_compile_size()?;
    let (n, m) = (spec.n(), spec.m());
    let derivs = spec.derivatives()?;

    // Per control assignment: the control bits and the derivative values at them.
    let controls: Vec<(Vec<bool>, Vec<bool>)> = try_map_range(exec, 1 << m, |iu0| {
        let u: Vec<bool> = assignment_bits(iu0, m).collect();
        let d = derivs
            .iter()
            .map(|d| {
                d.eval(&Env {
                    control: &u,
                    ..Env::default()
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((u, d))
    })?;

    let rules = spec.state_rules();
    let l_cols = try_map_range(exec, 1 << (n + m), |col| {
        let (u, d) = &controls[col >> n];
        let x: Vec<bool> = assignment_bits(col & ((1 << n) - 1), n).collect();
        let env = Env {
            state: &x,
            control: u,
            deriv: d,
        };
        next_index(rules, &env)
    })?;

    let g_cols = try_map_range(exec, 1 << m, |iu0| {
        let env = Env {
            control: &controls[iu0].0,
            ..Env::default()
        };
        next_index(spec.control_rules(), &env)
    })?;

    CompiledNetwork::new(
        n,
        m,
        LogicalMatrix::new(1 << n, l_cols)?,
        LogicalMatrix::new(1 << m, g_cols)?,
    )
}

fn next_index(rules: &[BoolExpr], env: &Env<'_>) -> Result<usize> {
    let bits = rules
        .iter()
        .map(|r| r.eval(env))
        .collect::<Result<Vec<_>>>()?;
    Ok(joint_index(&bits))
}
