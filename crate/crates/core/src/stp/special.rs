use super::{DenseMatrix, LogicalMatrix};
use crate::error::{Error, Result};

/// Swap matrix `W_[m,n]` with `W_[m,n] ⋉ x ⋉ y = y ⋉ x` for `x ∈ Δ_m`, `y ∈ Δ_n`.
///
/// Column `(i-1)n + j` is `δ_{mn}^{(j-1)m + i}`.
pub fn swap_matrix(m: usize, n: usize) -> Result<LogicalMatrix> {
    if m == 0 || n == 0 {
        return Err(Error::dim(format!("swap matrix W[{m},{n}]")));
    }
    let size = super::checked_dims(m, n)?;
    let mut cols = Vec::with_capacity(size);
    for i in 1..=m {
        for j in 1..=n {
            cols.push((j - 1) * m + i);
        }
    }
    LogicalMatrix::new(size, cols)
}

/// `M_r = δ_4[1 4]`, so that `p ⋉ p = M_r ⋉ p` for `p ∈ Δ_2`.
pub fn power_reduce_matrix() -> LogicalMatrix {
    LogicalMatrix::new(4, vec![1, 4]).expect("constant matrix")
}

/// `Φ_n = Π_{i=1..n} I_{2^{i-1}} ⊗ [(I_2 ⊗ W_[2,2^{n-i}]) M_r]`, the 4^n x 2^n
/// matrix with `(p_1 ⋯ p_n)^2 = Φ_n ⋉ p_1 ⋯ p_n`.
pub fn product_power_reduce(n: usize) -> Result<LogicalMatrix> {
    if n == 0 {
        return Err(Error::dim("product power reduction needs n >= 1"));
    }
    let mr = power_reduce_matrix();
    let i2 = LogicalMatrix::identity(2)?;
    let mut acc: Option<LogicalMatrix> = None;
    for i in 1..=n {
        let inner = i2.kron(&swap_matrix(2, 1 << (n - i))?)?.stp(&mr)?;
        let factor = LogicalMatrix::identity(1 << (i - 1))?.kron(&inner)?;
        acc = Some(match acc {
            None => factor,
            Some(a) => a.stp(&factor)?,
        });
    }
    Ok(acc.expect("n >= 1"))
}

/// `I_t ⊗ M`, which satisfies `X ⋉ M = (I_t ⊗ M) ⋉ X` for any column `X` of height `t`.
pub fn front_lift(t: usize, m: &DenseMatrix) -> Result<DenseMatrix> {
    if t == 0 {
        return Err(Error::dim("front lift needs t >= 1"));
    }
    DenseMatrix::identity(t)?.kron(m)
}

/// Logical counterpart of [`front_lift`].
pub fn front_lift_logical(t: usize, m: &LogicalMatrix) -> Result<LogicalMatrix> {
    if t == 0 {
        return Err(Error::dim("front lift needs t >= 1"));
    }
    if t == 1 {
        return Ok(m.clone());
    }
    LogicalMatrix::identity(t)?.kron(m)
}
