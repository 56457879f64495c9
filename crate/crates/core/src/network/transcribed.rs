//! The closed-form factor chain of the bundled example, written out factor
//! by factor:
//!
//! ```text
//! L(t+1) = M_d (I_4 ⊗ M_c)(I_4 ⊗ M_g)(I_2 ⊗ M_r)
//!          [I_4 ⊗ M_c (I_4 ⊗ M_d)(I_4 ⊗ M_g)(I_2 ⊗ M_r)]
//!          W_[2,4] [I_2 ⊗ (M_n W_[2,2])^t] W_[2,2]
//! ```
//!
//! evaluated as a left-to-right semi-tensor product. The result is a 4x64
//! logical matrix over six input slots. It is not the same object as
//! [`CompiledNetwork::time_indexed_matrix`](super::CompiledNetwork::time_indexed_matrix),
//! which is 4x16; see `fixtures/REPORT.md` for the comparison.

use std::fmt;

use super::{example_network, NetworkSpec};
use crate::boolfun::{structure_matrix, BoolExpr, Var};
use crate::error::{Error, Result};
use crate::stp::{
    front_lift_logical, power_reduce_matrix, swap_matrix, DenseMatrix, LogicalMatrix,
};

/// A node of a matrix expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    Leaf {
        name: String,
        matrix: LogicalMatrix,
    },
    /// `I_k ⊗ F`.
    Lift(usize, Box<Factor>),
    /// Left-to-right semi-tensor product.
    Product(Vec<Factor>),
    /// Ordinary power of a square factor.
    Power(Box<Factor>, usize),
}

impl Factor {
    pub fn leaf(name: &str, matrix: LogicalMatrix) -> Self {
        Factor::Leaf {
            name: name.to_string(),
            matrix,
        }
    }

    pub fn lift(k: usize, f: Factor) -> Self {
        Factor::Lift(k, Box::new(f))
    }

    pub fn power(f: Factor, t: usize) -> Self {
        Factor::Power(Box::new(f), t)
    }

    /// Evaluates with logical-matrix arithmetic, folding products left to right.
    pub fn eval_logical(&self) -> Result<LogicalMatrix> {
        match self {
            Factor::Leaf { matrix, .. } => Ok(matrix.clone()),
            Factor::Lift(k, f) => front_lift_logical(*k, &f.eval_logical()?),
            Factor::Product(fs) => {
                let mut it = fs.iter();
                let first = it
                    .next()
                    .ok_or_else(|| Error::InvalidMatrix("empty product".into()))?;
                it.try_fold(first.eval_logical()?, |acc, f| acc.stp(&f.eval_logical()?))
            }
            Factor::Power(f, t) => f.eval_logical()?.pow(*t),
        }
    }

    /// Evaluates with dense integer arithmetic, folding products right to
    /// left.
    pub fn eval_dense(&self) -> Result<DenseMatrix> {
        match self {
            Factor::Leaf { matrix, .. } => matrix.to_dense(),
            Factor::Lift(k, f) => DenseMatrix::identity(*k)?.kron(&f.eval_dense()?),
            Factor::Product(fs) => {
                let mut it = fs.iter().rev();
                let last = it
                    .next()
                    .ok_or_else(|| Error::InvalidMatrix("empty product".into()))?;
                it.try_fold(last.eval_dense()?, |acc, f| f.eval_dense()?.stp(&acc))
            }
            Factor::Power(f, t) => {
                let base = f.eval_dense()?;
                let (r, c) = base.dims();
                if r != c {
                    return Err(Error::dim(format!("power of a {r}x{c} matrix")));
                }
                (0..*t).try_fold(DenseMatrix::identity(r)?, |acc, _| acc.matmul(&base))
            }
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Leaf { name, .. } => write!(f, "{name}"),
            Factor::Lift(k, inner) => write!(f, "(I_{k} ⊗ {inner})"),
            Factor::Product(fs) => {
                write!(f, "[")?;
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ⋉ ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            Factor::Power(inner, t) => write!(f, "{inner}^{t}"),
        }
    }
}

/// The closed-form chain for one time index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscribedChain {
    t: usize,
    chain: Factor,
}

impl TranscribedChain {
    /// Chain for `L(t+1)`. The state and control rules must be those of the
    /// bundled example; `g` may be any function of `u1, u2`.
    pub fn for_spec(spec: &NetworkSpec, t: usize) -> Result<Self> {
        let example = example_network();
        if spec.state_rules() != example.state_rules()
            || spec.control_rules() != example.control_rules()
        {
            return Err(Error::Network(
                "the closed-form chain exists only for the bundled example's rules".into(),
            ));
        }
        let (u1, u2) = (Var::Control(1), Var::Control(2));
        let mg = structure_matrix(spec.derivative_source(), &[u1, u2])?;
        Self::build(mg, t)
    }

    fn build(mg: LogicalMatrix, t: usize) -> Result<Self> {
        let op = |e: BoolExpr, vars: &[Var]| structure_matrix(&e, vars);
        let (p, q) = (Var::Control(1), Var::Control(2));
        let (ep, eq) = (BoolExpr::Var(p), BoolExpr::Var(q));
        let mc = Factor::leaf("M_c", op(BoolExpr::and(ep.clone(), eq.clone()), &[p, q])?);
        let md = Factor::leaf("M_d", op(BoolExpr::or(ep.clone(), eq), &[p, q])?);
        let mn = Factor::leaf("M_n", op(BoolExpr::not(ep), &[p])?);
        let mg = Factor::leaf("M_g", mg);
        let mr = Factor::leaf("M_r", power_reduce_matrix());
        let w22 = Factor::leaf("W_[2,2]", swap_matrix(2, 2)?);
        let w24 = Factor::leaf("W_[2,4]", swap_matrix(2, 4)?);

        let second_rule = Factor::Product(vec![
            mc.clone(),
            Factor::lift(4, md.clone()),
            Factor::lift(4, mg.clone()),
            Factor::lift(2, mr.clone()),
        ]);
        let control_closed_form = Factor::power(Factor::Product(vec![mn, w22.clone()]), t);
        let chain = Factor::Product(vec![
            md,
            Factor::lift(4, mc),
            Factor::lift(4, mg),
            Factor::lift(2, mr),
            Factor::lift(4, second_rule),
            w24,
            Factor::lift(2, control_closed_form),
            w22,
        ]);
        Ok(Self { t, chain })
    }

    /// Chain for the bundled example at time index `t`.
    pub fn example(t: usize) -> Result<Self> {
        Self::for_spec(&example_network(), t)
    }

    pub fn time(&self) -> usize {
        self.t
    }

    pub fn factor(&self) -> &Factor {
        &self.chain
    }

    pub fn eval_logical(&self) -> Result<LogicalMatrix> {
        self.chain.eval_logical()
    }

    pub fn eval_dense(&self) -> Result<DenseMatrix> {
        self.chain.eval_dense()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_evaluations_agree() {
        for t in 0..4 {
            let c = TranscribedChain::example(t).unwrap();
            let l = c.eval_logical().unwrap();
            assert_eq!(l.dims(), (4, 64));
            assert_eq!(c.eval_dense().unwrap().to_logical().unwrap(), l);
        }
    }

    #[test]
    fn control_closed_form_has_period_four() {
        let l0 = TranscribedChain::example(0)
            .unwrap()
            .eval_logical()
            .unwrap();
        let l4 = TranscribedChain::example(4)
            .unwrap()
            .eval_logical()
            .unwrap();
        assert_eq!(l0, l4);
    }

    #[test]
    fn other_rules_are_rejected() {
        let spec = NetworkSpec::new(
            vec![BoolExpr::state(1), BoolExpr::state(2)],
            vec![BoolExpr::control(1), BoolExpr::control(2)],
            BoolExpr::Const(false),
        )
        .unwrap();
        assert!(TranscribedChain::for_spec(&spec, 0).is_err());
    }

    #[test]
    fn display_names_factors() {
        let s = TranscribedChain::example(1).unwrap().factor().to_string();
        assert!(s.starts_with("[M_d ⋉ (I_4 ⊗ M_c)"), "{s}");
        assert!(s.contains("[M_n ⋉ W_[2,2]]^1"), "{s}");
    }
}
