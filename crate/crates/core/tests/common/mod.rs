//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use bcnkit::boolfun::{BoolExpr, Var};
use bcnkit::network::NetworkSpec;
use bcnkit::optimal::{PayoffTable, PayoffTiming, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Naive dense matrices as nested rows.
pub type Rows = Vec<Vec<i64>>;

pub fn identity(k: usize) -> Rows {
    (0..k)
        .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn kron(a: &Rows, b: &Rows) -> Rows {
    let (br, bc) = (b.len(), b[0].len());
    let mut out = vec![vec![0; a[0].len() * bc]; a.len() * br];
    for (i, row) in a.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            for k in 0..br {
                for l in 0..bc {
                    out[i * br + k][j * bc + l] = x * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Rows, b: &Rows) -> Rows {
    assert_eq!(a[0].len(), b.len());
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `(A ⊗ I_{t/n})(B ⊗ I_{t/p})` straight from the definition.
pub fn stp(a: &Rows, b: &Rows) -> Rows {
    let (n, p) = (a[0].len(), b.len());
    let t = n / gcd(n, p) * p;
    matmul(&kron(a, &identity(t / n)), &kron(b, &identity(t / p)))
}

/// Densifies a list of 1-based column indices.
pub fn logical_rows(rows: usize, cols: &[usize]) -> Rows {
    (1..=rows)
        .map(|r| cols.iter().map(|&c| i64::from(c == r)).collect())
        .collect()
}

/// Joint index of Boolean values with all-true first.
pub fn joint(bits: &[bool]) -> usize {
    let r = bits.len();
    1 + bits
        .iter()
        .enumerate()
        .map(|(j, &b)| if b { 0 } else { 1 << (r - 1 - j) })
        .sum::<usize>()
}

/// Bits of the 1-based joint index `i` over `r` variables.
pub fn bits(i: usize, r: usize) -> Vec<bool> {
    (0..r).map(|j| (i - 1) >> (r - 1 - j) & 1 == 0).collect()
}

/// Random expression over the given leaves.
pub fn random_expr(rng: &mut ChaCha8Rng, leaves: &[Var], depth: usize) -> BoolExpr {
    if depth == 0 || rng.gen_bool(0.3) {
        return if leaves.is_empty() || rng.gen_bool(0.1) {
            BoolExpr::Const(rng.gen())
        } else {
            BoolExpr::Var(leaves[rng.gen_range(0..leaves.len())])
        };
    }
    let a = random_expr(rng, leaves, depth - 1);
    match rng.gen_range(0..4) {
        0 => BoolExpr::not(a),
        1 => BoolExpr::and(a, random_expr(rng, leaves, depth - 1)),
        2 => BoolExpr::or(a, random_expr(rng, leaves, depth - 1)),
        _ => BoolExpr::xor(a, random_expr(rng, leaves, depth - 1)),
    }
}

/// Random network with `n` states and `m` controls; state rules may read
/// derivative terms.
pub fn random_spec(rng: &mut ChaCha8Rng, n: usize, m: usize) -> NetworkSpec {
    let controls: Vec<Var> = (1..=m).map(Var::Control).collect();
    let mut leaves: Vec<Var> = (1..=n).map(Var::State).collect();
    leaves.extend(controls.iter().copied());
    leaves.extend((1..=m).map(Var::Deriv));
    let f = (0..n).map(|_| random_expr(rng, &leaves, 3)).collect();
    let g_update = (0..m).map(|_| random_expr(rng, &controls, 2)).collect();
    let g = random_expr(rng, &controls, 3);
    NetworkSpec::new(f, g_update, g).expect("generated spec is well formed")
}

/// Evaluates an expression, computing derivative terms as cofactor XORs of
/// `g` directly.
pub fn eval_direct(e: &BoolExpr, g: &BoolExpr, x: &[bool], u: &[bool]) -> bool {
    let lookup = |v: Var| -> Option<bool> {
        match v {
            Var::State(i) => Some(x[i - 1]),
            Var::Control(j) => Some(u[j - 1]),
            Var::Deriv(k) => {
                let cof = |b: bool| {
                    let mut w = u.to_vec();
                    w[k - 1] = b;
                    g.eval_with(&|v| match v {
                        Var::Control(j) => Some(w[j - 1]),
                        _ => None,
                    })
                    .unwrap()
                };
                Some(cof(true) ^ cof(false))
            }
        }
    };
    e.eval_with(&lookup).unwrap()
}

/// Successor joint index of state `ix` under control `iu`, by direct evaluation.
pub fn successor_direct(spec: &NetworkSpec, iu: usize, ix: usize) -> usize {
    let x = bits(ix, spec.n());
    let u = bits(iu, spec.m());
    let next: Vec<bool> = spec
        .state_rules()
        .iter()
        .map(|f| eval_direct(f, spec.derivative_source(), &x, &u))
        .collect();
    joint(&next)
}

/// Next joint control index by direct evaluation.
pub fn control_successor_direct(spec: &NetworkSpec, iu: usize) -> usize {
    let u = bits(iu, spec.m());
    let next: Vec<bool> = spec
        .control_rules()
        .iter()
        .map(|g| eval_direct(g, spec.derivative_source(), &[], &u))
        .collect();
    joint(&next)
}

/// Best mean over every simple cycle, found by depth-first enumeration from
/// each cycle's smallest node. Edge weights take the best control.
pub fn brute_force_mean(
    spec: &NetworkSpec,
    p: &PayoffTable,
    timing: PayoffTiming,
    nodes: &[usize],
) -> Rational {
    let controls = 1usize << spec.m();
    let states = 1usize << spec.n();
    let allowed: Vec<bool> = (0..=states).map(|x| nodes.contains(&x)).collect();
    // weight[x][y] = best payoff over controls taking x to y.
    let mut weight = vec![vec![None::<Rational>; states + 1]; states + 1];
    for (x, row) in weight.iter_mut().enumerate().skip(1) {
        for u in 1..=controls {
            let y = successor_direct(spec, u, x);
            let w = match timing {
                PayoffTiming::Arrival => p.get(u, y),
                PayoffTiming::Departure => p.get(u, x),
            };
            let slot = &mut row[y];
            *slot = Some(slot.map_or(w, |old: Rational| old.max(w)));
        }
    }
    let mut best: Option<Rational> = None;
    for s in nodes.iter().copied() {
        let mut on_path = vec![false; states + 1];
        dfs(
            s,
            s,
            Rational::from_integer(0),
            0,
            &weight,
            &allowed,
            &mut on_path,
            &mut best,
        );
    }
    best.unwrap()
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    s: usize,
    x: usize,
    total: Rational,
    len: usize,
    weight: &[Vec<Option<Rational>>],
    allowed: &[bool],
    on_path: &mut [bool],
    best: &mut Option<Rational>,
) {
    on_path[x] = true;
    for y in 1..weight.len() {
        let Some(w) = weight[x][y] else { continue };
        if y == s {
            let mean = (total + w) / Rational::from_integer(len as i128 + 1);
            *best = Some(best.map_or(mean, |b| b.max(mean)));
        } else if y > s && allowed[y] && !on_path[y] {
            dfs(s, y, total + w, len + 1, weight, allowed, on_path, best);
        }
    }
    on_path[x] = false;
}
