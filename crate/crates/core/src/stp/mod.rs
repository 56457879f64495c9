//! Exact semi-tensor product algebra.
//!
//! Two carriers are provided: [`DenseMatrix`] (arbitrary integer entries,
//! used as the reference route) and [`LogicalMatrix`] (every column a
//! canonical basis vector, stored as its column indices). Logical matrices
//! are closed under the semi-tensor product and the Kronecker product, so
//! every structure or transition matrix in this crate lives in that form.
//!
//! All constructors enforce a process-wide size cap (see [`set_size_cap`])
//! because chains of semi-tensor products grow exponentially.

mod dense;
mod logical;
mod special;

use std::sync::atomic::{AtomicUsize, Ordering};

pub use dense::DenseMatrix;
pub use logical::{DeltaVector, LogicalMatrix};
pub use special::{
    front_lift, front_lift_logical, power_reduce_matrix, product_power_reduce, swap_matrix,
};

use crate::error::{Error, Result};

/// Default cap on stored matrix entries: 2^20.
pub const DEFAULT_SIZE_CAP: usize = 1 << 20;

static SIZE_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_SIZE_CAP);

/// Current cap on stored entries per matrix.
pub fn size_cap() -> usize {
    SIZE_CAP.load(Ordering::Relaxed)
}

/// Replace the process-wide size cap and return the previous value.
pub fn set_size_cap(cap: usize) -> usize {
    SIZE_CAP.swap(cap.max(1), Ordering::Relaxed)
}

/// Checks a prospective `rows x cols` allocation of `stored` entries.
pub(crate) fn check_size(rows: usize, cols: usize, stored: Option<usize>) -> Result<()> {
    let cap = size_cap();
    let entries = match stored {
        Some(s) => Some(s),
        None => rows.checked_mul(cols),
    };
    match entries {
        Some(e) if e <= cap => Ok(()),
        _ => Err(Error::SizeCap { rows, cols, cap }),
    }
}

pub(crate) fn checked_dims(a: usize, b: usize) -> Result<usize> {
    a.checked_mul(b).ok_or(Error::SizeCap {
        rows: a,
        cols: b,
        cap: size_cap(),
    })
}
