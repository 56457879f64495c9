mod common;

use bcnkit::stp::{
    front_lift, power_reduce_matrix, product_power_reduce, swap_matrix, DeltaVector, DenseMatrix,
    LogicalMatrix,
};
use common::{logical_rows, stp as stp_oracle, Rows};
use proptest::prelude::*;

fn dense(rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix> {
    prop::collection::vec(-3i64..=3, rows * cols)
        .prop_map(move |data| DenseMatrix::new(rows, cols, data).unwrap())
}

fn any_dense() -> impl Strategy<Value = DenseMatrix> {
    (1usize..=8, 1usize..=8).prop_flat_map(|(r, c)| dense(r, c))
}

fn permutation(k: usize) -> impl Strategy<Value = DenseMatrix> {
    Just((1..=k).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(move |cols| LogicalMatrix::new(k, cols).unwrap().to_dense().unwrap())
}

fn logical(rows: usize, cols: usize) -> impl Strategy<Value = LogicalMatrix> {
    prop::collection::vec(1..=rows, cols).prop_map(move |c| LogicalMatrix::new(rows, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn associativity(a in any_dense(), b in any_dense(), c in any_dense()) {
        let left = a.stp(&b.stp(&c).unwrap()).unwrap();
        let right = a.stp(&b).unwrap().stp(&c).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn matches_definition(a in any_dense(), b in any_dense()) {
        let expect: Rows = stp_oracle(&a.to_rows(), &b.to_rows());
        prop_assert_eq!(a.stp(&b).unwrap().to_rows(), expect);
    }

    #[test]
    fn distributivity(
        (a, b, c) in (1usize..=8, 1usize..=8, 1usize..=8, 1usize..=8)
            .prop_flat_map(|(r, k, p, q)| (dense(r, k), dense(r, k), dense(p, q)))
    ) {
        let sum = a.add(&b).unwrap();
        prop_assert_eq!(
            sum.stp(&c).unwrap(),
            a.stp(&c).unwrap().add(&b.stp(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            c.stp(&sum).unwrap(),
            c.stp(&a).unwrap().add(&c.stp(&b).unwrap()).unwrap()
        );
    }

    #[test]
    fn transpose(a in any_dense(), b in any_dense()) {
        prop_assert_eq!(
            a.stp(&b).unwrap().transpose(),
            b.transpose().stp(&a.transpose()).unwrap()
        );
    }

    #[test]
    fn inverse(
        (a, b) in (1usize..=8, 1usize..=8).prop_flat_map(|(k, l)| (permutation(k), permutation(l)))
    ) {
        // A permutation matrix is inverted by its transpose.
        let ab = a.stp(&b).unwrap();
        let inv = b.transpose().stp(&a.transpose()).unwrap();
        prop_assert!(ab.matmul(&inv).unwrap().is_identity());
        prop_assert!(inv.matmul(&ab).unwrap().is_identity());
    }

    #[test]
    fn front_lift_moves_matrix_left(
        (x, m) in (1usize..=8).prop_flat_map(|t| (dense(t, 1), any_dense()))
    ) {
        let lifted = front_lift(x.rows(), &m).unwrap();
        prop_assert_eq!(x.stp(&m).unwrap(), lifted.stp(&x).unwrap());
    }

    #[test]
    fn conventional_product(
        (a, b) in (1usize..=8, 1usize..=8, 1usize..=8)
            .prop_flat_map(|(r, k, c)| (dense(r, k), dense(k, c)))
    ) {
        prop_assert_eq!(a.stp(&b).unwrap(), a.matmul(&b).unwrap());
    }

    #[test]
    fn logical_closure_randomized(
        (a, b) in (1usize..=16, 1usize..=16, 1usize..=16, 1usize..=16)
            .prop_flat_map(|(r, c, p, q)| (logical(r, c), logical(p, q)))
    ) {
        let expect = stp_oracle(
            &logical_rows(a.rows(), a.col_indices()),
            &logical_rows(b.rows(), b.col_indices()),
        );
        prop_assert_eq!(a.stp(&b).unwrap().to_dense().unwrap().to_rows(), expect);
    }
}

fn all_logical(max: usize) -> Vec<LogicalMatrix> {
    let mut out = Vec::new();
    for rows in 1..=max {
        for cols in 1..=max {
            let total = rows.pow(cols as u32);
            for code in 0..total {
                let mut c = code;
                let idx = (0..cols)
                    .map(|_| {
                        let i = c % rows + 1;
                        c /= rows;
                        i
                    })
                    .collect();
                out.push(LogicalMatrix::new(rows, idx).unwrap());
            }
        }
    }
    out
}

#[test]
fn logical_closure_exhaustive_up_to_four() {
    let all = all_logical(4);
    let dense: Vec<Rows> = all
        .iter()
        .map(|m| logical_rows(m.rows(), m.col_indices()))
        .collect();
    for (a, da) in all.iter().zip(&dense) {
        for (b, db) in all.iter().zip(&dense) {
            let got = a.stp(b).unwrap();
            assert_eq!(
                logical_rows(got.rows(), got.col_indices()),
                stp_oracle(da, db),
                "{a} ⋉ {b}"
            );
        }
    }
}

#[test]
fn swap_involution() {
    for m in 1..=8 {
        for n in 1..=8 {
            let w = swap_matrix(m, n).unwrap();
            let back = swap_matrix(n, m).unwrap();
            assert!(w.stp(&back).unwrap().is_identity(), "W[{m},{n}]");
        }
    }
}

#[test]
fn swap_defining_property() {
    for m in 1..=6 {
        for n in 1..=6 {
            let w = swap_matrix(m, n).unwrap();
            for i in 1..=m {
                for j in 1..=n {
                    let x = DeltaVector::new(m, i).unwrap();
                    let y = DeltaVector::new(n, j).unwrap();
                    let lhs = w.apply_vector(&x.join(&y).unwrap()).unwrap();
                    assert_eq!(lhs, y.join(&x).unwrap());
                }
            }
        }
    }
}

#[test]
fn power_reduction_identities() {
    let mr = power_reduce_matrix();
    for i in 1..=2 {
        let p = DeltaVector::new(2, i).unwrap();
        assert_eq!(mr.apply_vector(&p).unwrap(), p.join(&p).unwrap());
    }
    for n in 1..=4 {
        let phi = product_power_reduce(n).unwrap();
        for k in 1..=1usize << n {
            let v = DeltaVector::new(1 << n, k).unwrap();
            assert_eq!(
                phi.apply_vector(&v).unwrap(),
                v.join(&v).unwrap(),
                "n={n} k={k}"
            );
        }
    }
}
