//! Symbolic compilation by rewriting a semi-tensor product of structure
//! matrices and variables into `L ⋉ u_1 ⋯ u_m ⋉ x_1 ⋯ x_n`.
//!
//! Each rule `f_i` becomes a token sequence (`p ∧ q` is `M_c p q`, `¬p` is
//! `M_n p`, a derivative term is its structure matrix followed by the
//! controls it reads). The sequences of all rules are concatenated and
//! consumed left to right while keeping the invariant
//! `value = front ⋉ v_1 ⋯ v_k ⋉ (remaining tokens)` with the `v_i` distinct
//! and sorted. The rules used:
//!
//! * front lift: `v_1 ⋯ v_k ⋉ M = (I_{2^k} ⊗ M) ⋉ v_1 ⋯ v_k`
//! * swap: `T ⋉ v = W_[2,2^|T|] ⋉ v ⋉ T`
//! * power reduction: `v ⋉ v = M_r ⋉ v`
//! * vacancy filling: `P ⋉ T = (I_{2^|P|} ⊗ (1_2^T ⊗ I_{2^|T|})) ⋉ P ⋉ v ⋉ T`

use serde::Serialize;

use super::{CompiledNetwork, NetworkSpec};
use crate::boolfun::{structure_matrix, BoolExpr, Var};
use crate::error::{Error, Result};
use crate::stp::{front_lift_logical, power_reduce_matrix, swap_matrix, LogicalMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Matrix(LogicalMatrix),
    Var(Var),
}

/// One rule application; each multiplies `front` on the right by the factor
/// described.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum RewriteStep {
    /// `I_{2^width} ⊗ M` for a `rows x cols` matrix `M`.
    FrontLift {
        width: usize,
        rows: usize,
        cols: usize,
    },
    /// `I_{2^prefix} ⊗ W_[2,2^block]`.
    Swap { prefix: usize, block: usize },
    /// `I_{2^prefix} ⊗ M_r`.
    PowerReduce { prefix: usize },
    /// `I_{2^prefix} ⊗ (1_2^T ⊗ I_{2^suffix})`, inserting `var`.
    FillVacancy {
        var: String,
        prefix: usize,
        suffix: usize,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RewriteTrace {
    pub transition: Vec<RewriteStep>,
    pub control: Vec<RewriteStep>,
    /// Occurrences of each variable in the initial token sequence of the
    /// state rules, in canonical order.
    pub multiplicities: Vec<(String, usize)>,
    /// Rule applications checked against the initial sequence value.
    pub verified_steps: usize,
}

/// Compiles by symbolic normalization.
pub fn compile_factored(spec: &NetworkSpec) -> Result<CompiledNetwork> {
    compile_factored_traced(spec, false).map(|(c, _)| c)
}

/// Like [`compile_factored`], returning the rule applications. With
/// `verify`, every application is checked to preserve the value of the
/// whole token sequence; a violation is reported as an error.
pub fn compile_factored_traced(
    spec: &NetworkSpec,
    verify: bool,
) -> Result<(CompiledNetwork, RewriteTrace)> {
    spec.check_compile_size()?;
    let (n, m) = (spec.n(), spec.m());
    let ops = Operators::new()?;
    let derivs = spec.derivatives()?;

    let controls: Vec<Var> = (1..=m).map(Var::Control).collect();
    let mut order = controls.clone();
    order.extend((1..=n).map(Var::State));

    let mut tokens = Vec::new();
    for f in spec.state_rules() {
        tokens_of(f, &derivs, &ops, &mut tokens)?;
    }
    let multiplicities = order
        .iter()
        .map(|v| {
            let count = tokens.iter().filter(|t| **t == Token::Var(*v)).count();
            (v.to_string(), count)
        })
        .collect();

    let mut trace = RewriteTrace {
        multiplicities,
        ..RewriteTrace::default()
    };

    let (l, steps, checked) = Normalizer::run(order, tokens, verify)?;
    trace.transition = steps;
    trace.verified_steps += checked;

    let mut ctokens = Vec::new();
    for g in spec.control_rules() {
        tokens_of(g, &derivs, &ops, &mut ctokens)?;
    }
    let (g, steps, checked) = Normalizer::run(controls, ctokens, verify)?;
    trace.control = steps;
    trace.verified_steps += checked;

    Ok((CompiledNetwork::new(n, m, l, g)?, trace))
}

struct Operators {
    and: LogicalMatrix,
    or: LogicalMatrix,
    xor: LogicalMatrix,
    not: LogicalMatrix,
}

impl Operators {
    fn new() -> Result<Self> {
        let (p, q) = (Var::Control(1), Var::Control(2));
        let (ep, eq) = (BoolExpr::Var(p), BoolExpr::Var(q));
        Ok(Self {
            and: structure_matrix(&BoolExpr::and(ep.clone(), eq.clone()), &[p, q])?,
            or: structure_matrix(&BoolExpr::or(ep.clone(), eq.clone()), &[p, q])?,
            xor: structure_matrix(&BoolExpr::xor(ep.clone(), eq), &[p, q])?,
            not: structure_matrix(&BoolExpr::not(ep), &[p])?,
        })
    }
}

fn constant(b: bool) -> LogicalMatrix {
    LogicalMatrix::new(2, vec![if b { 1 } else { 2 }]).expect("basis vector")
}

fn tokens_of(
    e: &BoolExpr,
    derivs: &[BoolExpr],
    ops: &Operators,
    out: &mut Vec<Token>,
) -> Result<()> {
    match e {
        BoolExpr::Const(b) => out.push(Token::Matrix(constant(*b))),
        BoolExpr::Var(Var::Deriv(k)) => {
            let d = &derivs[k - 1];
            let vars: Vec<Var> = d.free_vars().into_iter().collect();
            if vars.is_empty() {
                let value = d.eval_with(&|_| None)?;
                out.push(Token::Matrix(constant(value)));
            } else {
                out.push(Token::Matrix(structure_matrix(d, &vars)?));
                out.extend(vars.into_iter().map(Token::Var));
            }
        }
        BoolExpr::Var(v) => out.push(Token::Var(*v)),
        BoolExpr::Not(a) => {
            out.push(Token::Matrix(ops.not.clone()));
            tokens_of(a, derivs, ops, out)?;
        }
        BoolExpr::And(a, b) | BoolExpr::Or(a, b) | BoolExpr::Xor(a, b) => {
            let op = match e {
                BoolExpr::And(..) => &ops.and,
                BoolExpr::Or(..) => &ops.or,
                _ => &ops.xor,
            };
            out.push(Token::Matrix(op.clone()));
            tokens_of(a, derivs, ops, out)?;
            tokens_of(b, derivs, ops, out)?;
        }
    }
    Ok(())
}

/// Token-sequence values on a fixed set of assignments, for verification.
struct Checker {
    order: Vec<Var>,
    assignments: Vec<Vec<bool>>,
    expected: Vec<LogicalMatrix>,
    checked: usize,
}

impl Checker {
    fn new(order: &[Var], tokens: &[Token]) -> Result<Self> {
        let r = order.len();
        let assignments: Vec<Vec<bool>> = if r <= 10 {
            (0..1usize << r)
                .map(|i| crate::boolfun::assignment_bits(i, r).collect())
                .collect()
        } else {
            let mut state = 0x9e37_79b9_7f4a_7c15u64;
            (0..32)
                .map(|_| {
                    state = splitmix(state);
                    (0..r).map(|j| (state >> (j % 64)) & 1 == 1).collect()
                })
                .collect()
        };
        let mut checker = Self {
            order: order.to_vec(),
            assignments,
            expected: Vec::new(),
            checked: 0,
        };
        let unit = LogicalMatrix::identity(1)?;
        checker.expected = (0..checker.assignments.len())
            .map(|a| checker.value(a, &unit, &[], tokens))
            .collect::<Result<_>>()?;
        Ok(checker)
    }

    fn basis(&self, a: usize, v: Var) -> LogicalMatrix {
        let pos = self
            .order
            .iter()
            .position(|w| *w == v)
            .expect("known variable");
        constant(self.assignments[a][pos])
    }

    fn value(
        &self,
        a: usize,
        front: &LogicalMatrix,
        vars: &[Var],
        rest: &[Token],
    ) -> Result<LogicalMatrix> {
        let mut acc = front.clone();
        for v in vars {
            acc = acc.stp(&self.basis(a, *v))?;
        }
        for t in rest {
            acc = match t {
                Token::Matrix(mat) => acc.stp(mat)?,
                Token::Var(v) => acc.stp(&self.basis(a, *v))?,
            };
        }
        Ok(acc)
    }

    fn verify(&mut self, front: &LogicalMatrix, vars: &[Var], rest: &[Token]) -> Result<()> {
        for a in 0..self.assignments.len() {
            if self.value(a, front, vars, rest)? != self.expected[a] {
                return Err(Error::InvalidMatrix(format!(
                    "rewrite step {} changed the value of the token sequence",
                    self.checked + 1
                )));
            }
        }
        self.checked += 1;
        Ok(())
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

struct Normalizer {
    order: Vec<Var>,
    front: LogicalMatrix,
    vars: Vec<Var>,
    steps: Vec<RewriteStep>,
    checker: Option<Checker>,
}

impl Normalizer {
    fn run(
        order: Vec<Var>,
        tokens: Vec<Token>,
        verify: bool,
    ) -> Result<(LogicalMatrix, Vec<RewriteStep>, usize)> {
        let checker = if verify {
            Some(Checker::new(&order, &tokens)?)
        } else {
            None
        };
        let mut nz = Normalizer {
            order,
            front: LogicalMatrix::identity(1)?,
            vars: Vec::new(),
            steps: Vec::new(),
            checker,
        };
        for (i, token) in tokens.iter().enumerate() {
            let rest = &tokens[i + 1..];
            match token {
                Token::Matrix(mat) => nz.front_lift(mat, rest)?,
                Token::Var(v) => nz.absorb_var(*v, rest)?,
            }
        }
        nz.fill_vacancies()?;
        let width = 1usize << nz.order.len();
        let l = if nz.front.ncols() == width {
            nz.front
        } else {
            nz.front.stp(&LogicalMatrix::identity(width)?)?
        };
        let checked = nz.checker.map_or(0, |c| c.checked);
        Ok((l, nz.steps, checked))
    }

    fn rank(&self, v: Var) -> usize {
        self.order
            .iter()
            .position(|w| *w == v)
            .expect("variable in target order")
    }

    fn apply(&mut self, factor: &LogicalMatrix, step: RewriteStep, rest: &[Token]) -> Result<()> {
        self.front = self.front.stp(factor)?;
        self.steps.push(step);
        if let Some(c) = self.checker.as_mut() {
            c.verify(&self.front, &self.vars, rest)?;
        }
        Ok(())
    }

    fn front_lift(&mut self, mat: &LogicalMatrix, rest: &[Token]) -> Result<()> {
        let width = self.vars.len();
        let lifted = front_lift_logical(1 << width, mat)?;
        let (rows, cols) = mat.dims();
        self.apply(&lifted, RewriteStep::FrontLift { width, rows, cols }, rest)
    }

    fn absorb_var(&mut self, v: Var, rest: &[Token]) -> Result<()> {
        let rank = self.rank(v);
        let i = self.vars.iter().filter(|w| self.rank(**w) < rank).count();
        let duplicate = self.vars.get(i) == Some(&v);
        let dest = if duplicate { i + 1 } else { i };
        let block = self.vars.len() - dest;
        self.vars.push(v);
        if block > 0 {
            let w = swap_matrix(2, 1 << block)?;
            let factor = front_lift_logical(1 << dest, &w)?;
            let moved = self.vars.pop().expect("just pushed");
            self.vars.insert(dest, moved);
            self.apply(
                &factor,
                RewriteStep::Swap {
                    prefix: dest,
                    block,
                },
                rest,
            )?;
        }
        if duplicate {
            let factor = front_lift_logical(1 << i, &power_reduce_matrix())?;
            self.vars.remove(i + 1);
            self.apply(&factor, RewriteStep::PowerReduce { prefix: i }, rest)?;
        }
        Ok(())
    }

    fn fill_vacancies(&mut self) -> Result<()> {
        for v in self.order.clone() {
            if self.vars.contains(&v) {
                continue;
            }
            let rank = self.rank(v);
            let i = self.vars.iter().filter(|w| self.rank(**w) < rank).count();
            let suffix = self.vars.len() - i;
            let dummy = LogicalMatrix::new(
                1 << suffix,
                (1..=1 << suffix).chain(1..=1 << suffix).collect(),
            )?;
            let factor = front_lift_logical(1 << i, &dummy)?;
            self.vars.insert(i, v);
            self.apply(
                &factor,
                RewriteStep::FillVacancy {
                    var: v.to_string(),
                    prefix: i,
                    suffix,
                },
                &[],
            )?;
        }
        Ok(())
    }
}
