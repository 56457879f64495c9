use super::{BoolExpr, Var};
use crate::error::{Error, Result};

/// `∂g/∂u_k = g|_{u_k=1} ⊕ g|_{u_k=0}` for `g` over controls `u_1..u_m`.
///
/// The result never mentions `u_k`.
pub fn boolean_derivative(g: &BoolExpr, k: usize, m: usize) -> Result<BoolExpr> {
    if k == 0 || k > m {
        return Err(Error::IndexOutOfRange { index: k, max: m });
    }
    for v in g.free_vars() {
        match v {
            Var::Control(j) if (1..=m).contains(&j) => {}
            other => {
                return Err(Error::Network(format!(
                    "derivative source may only use u1..u{m}, found {other}"
                )))
            }
        }
    }
    let uk = Var::Control(k);
    let hi = g.replace(uk, &BoolExpr::Const(true));
    let lo = g.replace(uk, &BoolExpr::Const(false));
    Ok(simplify(&BoolExpr::xor(hi, lo)))
}

/// Bottom-up constant folding with unit, annihilator, idempotence and
/// complement laws. Not a minimizer.
pub fn simplify(e: &BoolExpr) -> BoolExpr {
    use BoolExpr::*;
    match e {
        Const(_) | Var(_) => e.clone(),
        Not(a) => match simplify(a) {
            Const(b) => Const(!b),
            Not(inner) => *inner,
            a => BoolExpr::not(a),
        },
        And(a, b) => match (simplify(a), simplify(b)) {
            (Const(false), _) | (_, Const(false)) => Const(false),
            (Const(true), x) | (x, Const(true)) => x,
            (x, y) if x == y => x,
            (x, y) if complementary(&x, &y) => Const(false),
            (x, y) => BoolExpr::and(x, y),
        },
        Or(a, b) => match (simplify(a), simplify(b)) {
            (Const(true), _) | (_, Const(true)) => Const(true),
            (Const(false), x) | (x, Const(false)) => x,
            (x, y) if x == y => x,
            (x, y) if complementary(&x, &y) => Const(true),
            (x, y) => BoolExpr::or(x, y),
        },
        Xor(a, b) => match (simplify(a), simplify(b)) {
            (Const(false), x) | (x, Const(false)) => x,
            (Const(true), x) | (x, Const(true)) => simplify(&BoolExpr::not(x)),
            (x, y) if x == y => Const(false),
            (x, y) if complementary(&x, &y) => Const(true),
            (x, y) => BoolExpr::xor(x, y),
        },
    }
}

fn complementary(x: &BoolExpr, y: &BoolExpr) -> bool {
    matches!(x, BoolExpr::Not(a) if **a == *y) || matches!(y, BoolExpr::Not(b) if **b == *x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfun::{structure_matrix, truth_table, TruthTable};
    use crate::stp::{DeltaVector, DenseMatrix};

    fn u(j: usize) -> BoolExpr {
        BoolExpr::control(j)
    }

    #[test]
    fn conjunction_derivative_is_other_input() {
        let g = BoolExpr::and(u(1), u(2));
        let d = boolean_derivative(&g, 2, 2).unwrap();
        assert_eq!(d, u(1));
        assert_eq!(
            structure_matrix(&d, &[Var::Control(1)])
                .unwrap()
                .to_string(),
            "δ_2[1 2]"
        );
        assert_eq!(boolean_derivative(&g, 1, 2).unwrap(), u(2));
    }

    #[test]
    fn negation_and_xor_have_unit_derivative() {
        assert_eq!(
            boolean_derivative(&BoolExpr::not(u(1)), 1, 1).unwrap(),
            BoolExpr::Const(true)
        );
        assert_eq!(
            boolean_derivative(&BoolExpr::xor(u(1), u(2)), 1, 2).unwrap(),
            BoolExpr::Const(true)
        );
    }

    #[test]
    fn derivative_of_a_variable() {
        for m in 1..=3 {
            for k in 1..=m {
                for j in 1..=m {
                    let d = boolean_derivative(&u(j), k, m).unwrap();
                    assert_eq!(d, BoolExpr::Const(j == k), "∂u{j}/∂u{k}");
                }
            }
        }
    }

    #[test]
    fn index_and_variable_errors() {
        let g = BoolExpr::and(u(1), u(2));
        assert!(matches!(
            boolean_derivative(&g, 3, 2),
            Err(Error::IndexOutOfRange { index: 3, max: 2 })
        ));
        assert!(boolean_derivative(&g, 0, 2).is_err());
        let bad = BoolExpr::and(u(1), BoolExpr::state(1));
        assert!(matches!(
            boolean_derivative(&bad, 1, 1),
            Err(Error::Network(_))
        ));
    }

    #[test]
    fn simplify_laws() {
        let x = u(1);
        let nx = BoolExpr::not(u(1));
        assert_eq!(
            simplify(&BoolExpr::and(x.clone(), nx.clone())),
            BoolExpr::Const(false)
        );
        assert_eq!(
            simplify(&BoolExpr::or(nx.clone(), x.clone())),
            BoolExpr::Const(true)
        );
        assert_eq!(
            simplify(&BoolExpr::xor(x.clone(), x.clone())),
            BoolExpr::Const(false)
        );
        assert_eq!(simplify(&BoolExpr::not(nx)), x);
        assert_eq!(
            simplify(&BoolExpr::xor(BoolExpr::Const(true), x.clone())),
            BoolExpr::not(x)
        );
    }

    /// When the differentiated variable is the last factor, the expression
    /// `M_f ⋉ x_1 … x_{n-1} ⋉ (δ_2^1 + δ_2^2)` is dimensionally well defined;
    /// it equals `f|_{x_n=1} + f|_{x_n=0}` as a vector, and the derivative is
    /// true exactly when that sum is `[1, 1]`.
    #[test]
    fn summed_cofactor_form_matches_xor_for_last_variable() {
        let vars: Vec<Var> = (1..=3).map(Var::Control).collect();
        let ones = DenseMatrix::from_rows(vec![vec![1], vec![1]]).unwrap();
        for code in 0..256u64 {
            let table = TruthTable::from_code(3, code).unwrap();
            let f = crate::boolfun::from_truth_table(&table, &vars).unwrap();
            let mf = structure_matrix(&f, &vars).unwrap().to_dense().unwrap();
            let d = boolean_derivative(&f, 3, 3).unwrap();
            let dt = truth_table(&d, &vars[..2]).unwrap();
            for prefix in 1..=4 {
                let x = DeltaVector::new(4, prefix).unwrap().to_dense().unwrap();
                let summed = mf.stp(&x).unwrap().stp(&ones).unwrap();
                let is_split = summed.to_rows() == vec![vec![1], vec![1]];
                assert_eq!(is_split, dt.get(prefix - 1), "code {code}, prefix {prefix}");
            }
        }
    }
}
