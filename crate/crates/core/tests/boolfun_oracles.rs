mod common;

use bcnkit::boolfun::{
    boolean_derivative, decode_bool, encode_bool, encode_bools, from_truth_table, structure_matrix,
    truth_table, BoolExpr, TruthTable, Var,
};
use common::{bits, joint, random_expr, rng};
use proptest::prelude::*;

fn controls(r: usize) -> Vec<Var> {
    (1..=r).map(Var::Control).collect()
}

#[test]
fn encoding_round_trip() {
    assert_eq!(encode_bool(true).index(), 1);
    assert_eq!(encode_bool(false).index(), 2);
    for b in [true, false] {
        assert_eq!(decode_bool(&encode_bool(b)).unwrap(), b);
    }
}

/// Every two-variable function: the structure matrix applied to encoded
/// arguments gives the encoded value.
#[test]
fn all_two_variable_functions() {
    let vars = controls(2);
    for code in 0..16u64 {
        let table = TruthTable::from_code(2, code).unwrap();
        let e = from_truth_table(&table, &vars).unwrap();
        let m = structure_matrix(&e, &vars).unwrap();
        for i in 1..=4 {
            let b = bits(i, 2);
            let arg = encode_bools(&b);
            let got = m.apply_vector(&arg).unwrap();
            let expect = e
                .eval_with(&|v| match v {
                    Var::Control(j) => Some(b[j - 1]),
                    _ => None,
                })
                .unwrap();
            assert_eq!(got, encode_bool(expect), "code {code} at {b:?}");
            assert_eq!(table.get(i - 1), expect);
        }
    }
}

/// Cofactor XOR table computed from raw truth-table bits.
fn cofactor_xor(table: &TruthTable, k: usize) -> Vec<bool> {
    let r = table.arity();
    (1..=1usize << r)
        .map(|i| {
            let mut b = bits(i, r);
            b[k - 1] = true;
            let hi = table.get(joint(&b) - 1);
            b[k - 1] = false;
            let lo = table.get(joint(&b) - 1);
            hi ^ lo
        })
        .collect()
}

#[test]
fn derivative_matches_cofactor_xor_for_all_three_variable_functions() {
    let vars = controls(3);
    for code in 0..256u64 {
        let table = TruthTable::from_code(3, code).unwrap();
        let g = from_truth_table(&table, &vars).unwrap();
        for k in 1..=3 {
            let d = boolean_derivative(&g, k, 3).unwrap();
            assert!(!d.contains(Var::Control(k)), "code {code} k {k}: {d}");
            let got = truth_table(&d, &vars).unwrap();
            assert_eq!(
                got.outputs(),
                &cofactor_xor(&table, k)[..],
                "code {code} k {k}"
            );
        }
    }
}

#[test]
fn derivative_of_a_variable() {
    for m in 1..=4 {
        for k in 1..=m {
            for j in 1..=m {
                let d = boolean_derivative(&BoolExpr::control(j), k, m).unwrap();
                assert_eq!(d, BoolExpr::Const(j == k));
            }
        }
    }
}

#[test]
fn canonical_operator_matrices() {
    let v = controls(2);
    let (p, q) = (BoolExpr::control(1), BoolExpr::control(2));
    let show = |e: BoolExpr, vars: &[Var]| structure_matrix(&e, vars).unwrap().to_string();
    assert_eq!(
        show(BoolExpr::and(p.clone(), q.clone()), &v),
        "δ_2[1 2 2 2]"
    );
    assert_eq!(show(BoolExpr::or(p.clone(), q), &v), "δ_2[1 1 1 2]");
    assert_eq!(show(BoolExpr::not(p), &v[..1]), "δ_2[2 1]");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn matrix_agrees_with_semantics(seed in any::<u64>(), r in 1usize..=4) {
        let vars = controls(r);
        let e = random_expr(&mut rng(seed), &vars, 4);
        let m = structure_matrix(&e, &vars).unwrap();
        for i in 1..=1usize << r {
            let b = bits(i, r);
            let value = e.eval_with(&|v| match v {
                Var::Control(j) => Some(b[j - 1]),
                _ => None,
            }).unwrap();
            prop_assert_eq!(m.column(i), if value { 1 } else { 2 });
        }
    }

    #[test]
    fn negation_composes(seed in any::<u64>(), r in 1usize..=4) {
        let vars = controls(r);
        let e = random_expr(&mut rng(seed), &vars, 4);
        let mn = structure_matrix(&BoolExpr::not(BoolExpr::control(1)), &vars[..1]).unwrap();
        prop_assert_eq!(
            structure_matrix(&BoolExpr::not(e.clone()), &vars).unwrap(),
            mn.stp(&structure_matrix(&e, &vars).unwrap()).unwrap()
        );
    }
}
