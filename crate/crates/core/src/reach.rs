//! Trajectories and reachable sets.
//!
//! Two readings of reachability are provided. Under the control dynamics
//! `u(t+1) = G ⋉ u(t)` the run from `(x0, u0)` is unique, and
//! [`column_reachable`] reads a set off the columns of `L(t) ⋉ u0`, varying
//! the current state. [`reachable_free_control`] treats every control as
//! available at every step.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::network::{CompiledNetwork, NetworkSpec, TranscribedChain};
use crate::par::{map_slice, Exec};
use crate::stp::{DeltaVector, LogicalMatrix};

/// Anything that yields `L(t+1)` with `x(t+1) = L(t+1) ⋉ u(0) ⋉ (...)`.
pub trait TimeIndexed {
    fn transition_at(&self, t: usize) -> Result<LogicalMatrix>;
}

impl TimeIndexed for CompiledNetwork {
    fn transition_at(&self, t: usize) -> Result<LogicalMatrix> {
        self.time_indexed_matrix(t)
    }
}

/// The closed-form chain of the bundled example as a time-indexed source.
#[derive(Debug, Clone)]
pub struct TranscribedDynamics {
    spec: NetworkSpec,
}

impl TranscribedDynamics {
    pub fn new(spec: &NetworkSpec) -> Result<Self> {
        TranscribedChain::for_spec(spec, 0)?;
        Ok(Self { spec: spec.clone() })
    }
}

impl TimeIndexed for TranscribedDynamics {
    fn transition_at(&self, t: usize) -> Result<LogicalMatrix> {
        TranscribedChain::for_spec(&self.spec, t)?.eval_logical()
    }
}

/// A rollout under the control dynamics, as 1-based joint indices.
/// `states[t]` and `controls[t]` are `x(t)` and `u(t)` for `t = 0..=T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trajectory {
    pub states: Vec<usize>,
    pub controls: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReachableSet {
    pub horizon: usize,
    pub members: Vec<usize>,
}

pub fn trajectory(
    c: &CompiledNetwork,
    x0: &DeltaVector,
    u0: &DeltaVector,
    horizon: usize,
) -> Result<Trajectory> {
    let (mut x, mut u) = (*x0, *u0);
    // Validates both dimensions even for a zero horizon.
    c.step(&u, &x)?;
    let mut states = vec![x.index()];
    let mut controls = vec![u.index()];
    for _ in 0..horizon {
        x = c.step(&u, &x)?;
        u = c.control_step(&u)?;
        states.push(x.index());
        controls.push(u.index());
    }
    Ok(Trajectory { states, controls })
}

/// Distinct columns of `L(t) ⋉ u0`, for `t ≥ 1`.
pub fn column_reachable<D: TimeIndexed + ?Sized>(
    source: &D,
    u0: &DeltaVector,
    t: usize,
) -> Result<ReachableSet> {
    let m = column_matrix(source, u0, t)?;
    Ok(ReachableSet {
        horizon: t,
        members: m.distinct_columns(),
    })
}

/// `L(t) ⋉ u0`, for `t ≥ 1`.
pub fn column_matrix<D: TimeIndexed + ?Sized>(
    source: &D,
    u0: &DeltaVector,
    t: usize,
) -> Result<LogicalMatrix> {
    if t == 0 {
        return Err(Error::Argument("column sets start at t = 1".into()));
    }
    let lt = source.transition_at(t - 1)?;
    if lt.ncols() % u0.dim() != 0 {
        return Err(Error::dim(format!(
            "control δ_{} does not divide {} columns",
            u0.dim(),
            lt.ncols()
        )));
    }
    lt.apply(u0)
}

/// `L(t) ⋉ u0 ⋉ x_prev`: the successor pattern at step `t` from a fixed
/// predecessor.
pub fn branch<D: TimeIndexed + ?Sized>(
    source: &D,
    u0: &DeltaVector,
    t: usize,
    x_prev: &DeltaVector,
) -> Result<LogicalMatrix> {
    let m = column_matrix(source, u0, t)?;
    if m.ncols() % x_prev.dim() != 0 {
        return Err(Error::dim(format!(
            "state δ_{} does not divide {} columns",
            x_prev.dim(),
            m.ncols()
        )));
    }
    m.apply(x_prev)
}

fn check_state(c: &CompiledNetwork, x: &DeltaVector) -> Result<()> {
    if x.dim() != c.state_count() {
        return Err(Error::dim(format!(
            "state δ_{} for a network with {} states",
            x.dim(),
            c.state_count()
        )));
    }
    Ok(())
}

/// One free-control image `{L ⋉ u ⋉ x : u, x ∈ from}`.
pub fn free_image(c: &CompiledNetwork, from: &BTreeSet<usize>, exec: Exec) -> BTreeSet<usize> {
    let xs: Vec<usize> = from.iter().copied().collect();
    let parts = map_slice(exec, &xs, |&ix| {
        (1..=c.control_count())
            .map(|iu| c.successor(iu, ix))
            .collect::<Vec<_>>()
    });
    parts.into_iter().flatten().collect()
}

/// `R_t` with `R_0 = {x0}` and `R_{s+1}` the free-control image of `R_s`.
pub fn reachable_free_control(
    c: &CompiledNetwork,
    x0: &DeltaVector,
    t: usize,
) -> Result<ReachableSet> {
    reachable_free_control_with(c, x0, t, Exec::default())
}

pub fn reachable_free_control_with(
    c: &CompiledNetwork,
    x0: &DeltaVector,
    t: usize,
    exec: Exec,
) -> Result<ReachableSet> {
    check_state(c, x0)?;
    let mut set = BTreeSet::from([x0.index()]);
    let mut seen = vec![set.clone()];
    for s in 0..t {
        set = free_image(c, &set, exec);
        // The layer sequence is eventually periodic; skip ahead once it repeats.
        if let Some(p) = seen.iter().position(|old| *old == set) {
            let period = s + 1 - p;
            let remaining = t - (s + 1);
            set = seen[p + remaining % period].clone();
            break;
        }
        seen.push(set.clone());
    }
    Ok(ReachableSet {
        horizon: t,
        members: set.into_iter().collect(),
    })
}

/// Shortest free-control distance from `x0` to every state; `None` where
/// unreachable.
pub fn distances(c: &CompiledNetwork, x0: &DeltaVector) -> Result<Vec<Option<usize>>> {
    check_state(c, x0)?;
    let mut dist = vec![None; c.state_count() + 1];
    dist[x0.index()] = Some(0);
    let mut queue = VecDeque::from([x0.index()]);
    while let Some(ix) = queue.pop_front() {
        let d = dist[ix].expect("queued states have a distance");
        for iu in 1..=c.control_count() {
            let y = c.successor(iu, ix);
            if dist[y].is_none() {
                dist[y] = Some(d + 1);
                queue.push_back(y);
            }
        }
    }
    dist.remove(0);
    Ok(dist)
}

/// Every state reachable from `x0` at some horizon, `x0` included.
pub fn reachable_states(c: &CompiledNetwork, x0: &DeltaVector) -> Result<Vec<usize>> {
    Ok(distances(c, x0)?
        .iter()
        .enumerate()
        .filter_map(|(i, d)| d.map(|_| i + 1))
        .collect())
}

/// Smallest `t ≤ 2^(n+m)` with `xd ∈ R_t`, if any.
pub fn controllable_to(
    c: &CompiledNetwork,
    x0: &DeltaVector,
    xd: &DeltaVector,
) -> Result<Option<usize>> {
    check_state(c, xd)?;
    let bound = c.state_count() * c.control_count();
    Ok(distances(c, x0)?[xd.index() - 1].filter(|&d| d <= bound))
}
