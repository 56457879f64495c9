//! Average-payoff optimal control.
//!
//! With free controls the long-run average `J = lim (1/T) Σ P(u(t), x(t))`
//! is maximized by steering onto a cycle of maximum mean weight in the
//! state graph (an edge `x → L⋉u⋉x` per control `u`). Means are exact
//! rationals: the table is scaled to integers, the optimum is found with
//! Karp's recurrence, and the reported cycle is chosen among the optimal
//! ones by (length, state sequence starting at its smallest state).

use std::collections::{BTreeMap, VecDeque};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::network::CompiledNetwork;
use crate::par::{map_range, Exec};
use crate::reach::reachable_states;
use crate::stp::DeltaVector;

pub type Rational = Ratio<i128>;

/// Parses `3`, `-1.25` or `7/3`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Payoff(format!("'{s}' is not an integer, decimal or p/q"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i128 = p.trim().parse().map_err(|_| bad())?;
        let q: i128 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(Error::Payoff(format!("'{s}' has a zero denominator")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 18 {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part: i128 = match int {
            "" | "-" | "+" => 0,
            _ => int.parse().map_err(|_| bad())?,
        };
        let den = 10i128.pow(frac.len() as u32);
        let f: i128 = frac.parse().map_err(|_| bad())?;
        let mag = int_part.abs() * den + f;
        return Ok(Rational::new(if negative { -mag } else { mag }, den));
    }
    s.parse::<i128>()
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Which state a step's payoff is read at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PayoffTiming {
    /// Step `x → y` under `u` earns `P(u, y)`.
    #[default]
    Arrival,
    /// Step `x → y` under `u` earns `P(u, x)`.
    Departure,
}

impl FromStr for PayoffTiming {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "arrival" => Ok(Self::Arrival),
            "departure" => Ok(Self::Departure),
            _ => Err(Error::Argument(format!(
                "payoff timing '{s}' (expected arrival or departure)"
            ))),
        }
    }
}

/// `P(iu, ix)` for every control and state index (1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayoffTable {
    controls: usize,
    states: usize,
    values: Vec<Rational>,
}

impl PayoffTable {
    /// `values[(iu-1)*states + (ix-1)] = P(iu, ix)`.
    pub fn new(controls: usize, states: usize, values: Vec<Rational>) -> Result<Self> {
        if values.len() != controls * states {
            return Err(Error::Payoff(format!(
                "{} values for {controls} controls x {states} states",
                values.len()
            )));
        }
        Ok(Self {
            controls,
            states,
            values,
        })
    }

    pub fn from_fn(controls: usize, states: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        let values = (1..=controls)
            .flat_map(|iu| (1..=states).map(move |ix| (iu, ix)))
            .map(|(iu, ix)| f(iu, ix))
            .collect();
        Self {
            controls,
            states,
            values,
        }
    }

    pub fn constant(controls: usize, states: usize, v: Rational) -> Self {
        Self::from_fn(controls, states, |_, _| v)
    }

    pub fn controls(&self) -> usize {
        self.controls
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn get(&self, iu: usize, ix: usize) -> Rational {
        self.values[(iu - 1) * self.states + ix - 1]
    }

    pub fn max_abs(&self) -> Rational {
        self.values
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Reads a CSV with header `u_index,x_index,payoff`; every pair must
    /// appear exactly once.
    pub fn from_csv(text: &str, controls: usize, states: usize) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let headers = reader
            .headers()
            .map_err(|e| Error::Payoff(e.to_string()))?
            .clone();
        if headers.iter().collect::<Vec<_>>() != ["u_index", "x_index", "payoff"] {
            return Err(Error::Payoff(
                "header must be u_index,x_index,payoff".into(),
            ));
        }
        let mut table: Vec<Option<Rational>> = vec![None; controls * states];
        for (row, rec) in reader.records().enumerate() {
            let line = row + 2;
            let rec = rec.map_err(|e| Error::Payoff(format!("line {line}: {e}")))?;
            let index = |k: usize, max: usize, what: &str| -> Result<usize> {
                match rec.get(k).and_then(|s| s.parse::<usize>().ok()) {
                    Some(i) if (1..=max).contains(&i) => Ok(i),
                    _ => Err(Error::Payoff(format!(
                        "line {line}: {what} must be in 1..={max}"
                    ))),
                }
            };
            let iu = index(0, controls, "u_index")?;
            let ix = index(1, states, "x_index")?;
            let v = parse_rational(rec.get(2).unwrap_or(""))
                .map_err(|e| Error::Payoff(format!("line {line}: {e}")))?;
            let slot = &mut table[(iu - 1) * states + ix - 1];
            if slot.replace(v).is_some() {
                return Err(Error::Payoff(format!(
                    "line {line}: duplicate entry ({iu},{ix})"
                )));
            }
        }
        let values = table
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    Error::Payoff(format!(
                        "missing entry ({},{})",
                        i / states + 1,
                        i % states + 1
                    ))
                })
            })
            .collect::<Result<_>>()?;
        Self::new(controls, states, values)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("u_index,x_index,payoff\n");
        for iu in 1..=self.controls {
            for ix in 1..=self.states {
                out.push_str(&format!(
                    "{iu},{ix},{}\n",
                    format_rational(&self.get(iu, ix))
                ));
            }
        }
        out
    }

    fn check(&self, c: &CompiledNetwork) -> Result<()> {
        if (self.controls, self.states) != (c.control_count(), c.state_count()) {
            return Err(Error::dim(format!(
                "payoff table is {}x{}, network has {} controls and {} states",
                self.controls,
                self.states,
                c.control_count(),
                c.state_count()
            )));
        }
        Ok(())
    }

    fn weight(&self, timing: PayoffTiming, iu: usize, from: usize, to: usize) -> Rational {
        match timing {
            PayoffTiming::Arrival => self.get(iu, to),
            PayoffTiming::Departure => self.get(iu, from),
        }
    }
}

/// `(1/T) Σ_{t=1..T}` of the step payoffs when applying `controls[0..T]`
/// from `x0`.
pub fn average_payoff(
    c: &CompiledNetwork,
    p: &PayoffTable,
    x0: &DeltaVector,
    controls: &[usize],
    horizon: usize,
    timing: PayoffTiming,
) -> Result<Rational> {
    p.check(c)?;
    if horizon == 0 {
        return Err(Error::Argument("horizon must be at least 1".into()));
    }
    if controls.len() < horizon {
        return Err(Error::Argument(format!(
            "{} controls for horizon {horizon}",
            controls.len()
        )));
    }
    let mut x = c.state_vector(x0.index())?;
    if x0.dim() != c.state_count() {
        return Err(Error::dim(format!("state δ_{}", x0.dim())));
    }
    let mut total = Rational::zero();
    for &iu in &controls[..horizon] {
        let u = c.control_vector(iu)?;
        let y = c.step(&u, &x)?;
        total += p.weight(timing, iu, x.index(), y.index());
        x = y;
    }
    Ok(total / Rational::from_integer(horizon as i128))
}

/// A cycle of the state graph: `(control, state it is applied in)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeanCycle {
    pub mean: Rational,
    pub cycle: Vec<(usize, usize)>,
}

/// Eventually periodic strategy: `transient` from `x0`, then `cycle`
/// repeated forever. Cycle entries are `(control, state it is applied in)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalPolicy {
    pub mean_payoff: Rational,
    pub transient: Vec<usize>,
    pub cycle: Vec<(usize, usize)>,
}

impl OptimalPolicy {
    /// First `len` controls of the strategy.
    pub fn controls(&self, len: usize) -> Vec<usize> {
        self.transient
            .iter()
            .copied()
            .chain(self.cycle.iter().map(|&(u, _)| u).cycle())
            .take(len)
            .collect()
    }
}

impl Serialize for OptimalPolicy {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("OptimalPolicy", 4)?;
        let approx = *self.mean_payoff.numer() as f64 / *self.mean_payoff.denom() as f64;
        st.serialize_field("mean_payoff", &approx)?;
        st.serialize_field("mean_payoff_exact", &format_rational(&self.mean_payoff))?;
        st.serialize_field("transient", &self.transient)?;
        st.serialize_field("cycle", &self.cycle)?;
        st.end()
    }
}

/// State graph restricted to a successor-closed node set, with parallel
/// edges collapsed to their best control.
struct Graph {
    /// Local index to state index, ascending.
    nodes: Vec<usize>,
    /// Per local node: `(target, scaled weight, control)`, sorted by target.
    out: Vec<Vec<(usize, i128, usize)>>,
    /// Per local node: `(source, scaled weight)`.
    inc: Vec<Vec<(usize, i128)>>,
    /// Common denominator of the weights.
    scale: i128,
}

impl Graph {
    fn build(
        c: &CompiledNetwork,
        p: &PayoffTable,
        timing: PayoffTiming,
        nodes: Vec<usize>,
    ) -> Result<Self> {
        let mut local = vec![usize::MAX; c.state_count() + 1];
        for (i, &x) in nodes.iter().enumerate() {
            local[x] = i;
        }
        let scale = p.values.iter().fold(1i128, |acc, v| acc.lcm(v.denom()));
        let mut out = Vec::with_capacity(nodes.len());
        for &x in &nodes {
            let mut best: BTreeMap<usize, (Rational, usize)> = BTreeMap::new();
            for iu in 1..=c.control_count() {
                let y = c.successor(iu, x);
                if local[y] == usize::MAX {
                    return Err(Error::Argument(
                        "node set is not closed under successors".into(),
                    ));
                }
                let w = p.weight(timing, iu, x, y);
                best.entry(local[y])
                    .and_modify(|e| {
                        if w > e.0 {
                            *e = (w, iu);
                        }
                    })
                    .or_insert((w, iu));
            }
            out.push(
                best.into_iter()
                    .map(|(y, (w, iu))| (y, (w * scale).to_integer(), iu))
                    .collect::<Vec<_>>(),
            );
        }
        let mut inc = vec![Vec::new(); nodes.len()];
        for (x, edges) in out.iter().enumerate() {
            for &(y, w, _) in edges {
                inc[y].push((x, w));
            }
        }
        Ok(Self {
            nodes,
            out,
            inc,
            scale,
        })
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }

    /// One layer of the longest-walk recurrence with edge weights `w*a - b`.
    fn relax(&self, prev: &[Option<i128>], a: i128, b: i128, exec: Exec) -> Vec<Option<i128>> {
        map_range(exec, self.len(), |v| {
            self.inc[v]
                .iter()
                .filter_map(|&(u, w)| prev[u].map(|d| d + w * a - b))
                .max()
        })
    }

    /// Maximum cycle mean in scaled units, by Karp's recurrence.
    fn karp(&self, exec: Exec) -> Rational {
        let n = self.len();
        let mut layer = vec![Some(0i128); n];
        for _ in 0..n {
            layer = self.relax(&layer, 1, 0, exec);
        }
        let last = layer;
        let mut best: Vec<Option<Rational>> = vec![None; n];
        let mut layer = vec![Some(0i128); n];
        for k in 0..n {
            for v in 0..n {
                if let (Some(dn), Some(dk)) = (last[v], layer[v]) {
                    let r = Rational::new(dn - dk, (n - k) as i128);
                    best[v] = Some(best[v].map_or(r, |b| b.min(r)));
                }
            }
            layer = self.relax(&layer, 1, 0, exec);
        }
        best.into_iter()
            .flatten()
            .max()
            .expect("a successor-closed graph has a cycle")
    }

    /// The optimal cycle of smallest length, then smallest state sequence
    /// read from its smallest state. `lambda` is the optimum in scaled units.
    fn select_cycle(&self, lambda: Rational, exec: Exec) -> Vec<usize> {
        let n = self.len();
        let (a, b) = (*lambda.denom(), *lambda.numer());
        // Potentials: longest walks under w*a - b, which has no positive cycle.
        let mut layer = vec![Some(0i128); n];
        let mut pot = layer.clone();
        for _ in 0..n {
            layer = self.relax(&layer, a, b, exec);
            for v in 0..n {
                if let Some(d) = layer[v] {
                    pot[v] = Some(pot[v].map_or(d, |p| p.max(d)));
                }
            }
        }
        let pot: Vec<i128> = pot.into_iter().map(|p| p.expect("zero walk")).collect();
        // Exactly the edges lying on optimal cycles satisfy this with equality.
        let tight: Vec<Vec<usize>> = (0..n)
            .map(|x| {
                self.out[x]
                    .iter()
                    .filter(|&&(y, w, _)| pot[x] + w * a - b == pot[y])
                    .map(|&(y, _, _)| y)
                    .collect()
            })
            .collect();
        let mut rev = vec![Vec::new(); n];
        for (x, ys) in tight.iter().enumerate() {
            for &y in ys {
                rev[y].push(x);
            }
        }

        let mut best: Option<(usize, usize, Vec<Option<usize>>)> = None;
        for s in 0..n {
            if tight[s].is_empty() {
                continue;
            }
            // Distances to s along tight edges, through nodes >= s.
            let mut dist = vec![None; n];
            dist[s] = Some(0usize);
            let mut queue = VecDeque::from([s]);
            while let Some(y) = queue.pop_front() {
                for &x in &rev[y] {
                    if x > s && dist[x].is_none() {
                        dist[x] = Some(dist[y].unwrap() + 1);
                        queue.push_back(x);
                    }
                }
            }
            let len = tight[s]
                .iter()
                .filter(|&&y| y >= s)
                .filter_map(|&y| dist[y].map(|d| d + 1))
                .min();
            if let Some(len) = len {
                if best.as_ref().is_none_or(|(l, _, _)| len < *l) {
                    best = Some((len, s, dist));
                }
            }
        }
        let (len, s, dist) = best.expect("an optimal cycle exists");
        let mut cycle = vec![s];
        let mut cur = s;
        for step in 1..len {
            let need = len - step;
            cur = *tight[cur]
                .iter()
                .find(|&&y| y > s && dist[y] == Some(need))
                .expect("greedy extension follows the distance labels");
            cycle.push(cur);
        }
        cycle
    }

    fn edge(&self, x: usize, y: usize) -> (i128, usize) {
        let e = self.out[x].iter().find(|e| e.0 == y).expect("edge exists");
        (e.1, e.2)
    }

    fn best_cycle(&self, exec: Exec) -> MeanCycle {
        let lambda = self.karp(exec);
        let cycle = self.select_cycle(lambda, exec);
        let entries: Vec<(usize, usize)> = cycle
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let y = cycle[(i + 1) % cycle.len()];
                (self.edge(x, y).1, self.nodes[x])
            })
            .collect();
        MeanCycle {
            mean: lambda / Rational::from_integer(self.scale),
            cycle: entries,
        }
    }
}

/// Maximum-mean cycle over the whole state graph.
pub fn max_mean_cycle(
    c: &CompiledNetwork,
    p: &PayoffTable,
    timing: PayoffTiming,
) -> Result<MeanCycle> {
    max_mean_cycle_with(c, p, timing, Exec::default())
}

pub fn max_mean_cycle_with(
    c: &CompiledNetwork,
    p: &PayoffTable,
    timing: PayoffTiming,
    exec: Exec,
) -> Result<MeanCycle> {
    p.check(c)?;
    let g = Graph::build(c, p, timing, (1..=c.state_count()).collect())?;
    Ok(g.best_cycle(exec))
}

/// Best strategy from `x0` with free controls.
pub fn optimize(
    c: &CompiledNetwork,
    p: &PayoffTable,
    x0: &DeltaVector,
    timing: PayoffTiming,
) -> Result<OptimalPolicy> {
    optimize_with(c, p, x0, timing, Exec::default())
}

pub fn optimize_with(
    c: &CompiledNetwork,
    p: &PayoffTable,
    x0: &DeltaVector,
    timing: PayoffTiming,
    exec: Exec,
) -> Result<OptimalPolicy> {
    p.check(c)?;
    let g = Graph::build(c, p, timing, reachable_states(c, x0)?)?;
    let best = g.best_cycle(exec);

    // Shortest control path from x0 into the cycle.
    let mut on_cycle = vec![None; c.state_count() + 1];
    for (i, &(_, x)) in best.cycle.iter().enumerate() {
        on_cycle[x] = Some(i);
    }
    let mut back: Vec<Option<(usize, usize)>> = vec![None; c.state_count() + 1];
    let mut seen = vec![false; c.state_count() + 1];
    seen[x0.index()] = true;
    let mut queue = VecDeque::from([x0.index()]);
    let mut entry = None;
    while let Some(x) = queue.pop_front() {
        if on_cycle[x].is_some() {
            entry = Some(x);
            break;
        }
        for iu in 1..=c.control_count() {
            let y = c.successor(iu, x);
            if !seen[y] {
                seen[y] = true;
                back[y] = Some((x, iu));
                queue.push_back(y);
            }
        }
    }
    let entry = entry.expect("the cycle lies in the reachable set");
    let mut transient = Vec::new();
    let mut x = entry;
    while let Some((prev, iu)) = back[x] {
        transient.push(iu);
        x = prev;
    }
    transient.reverse();
    let k = on_cycle[entry].unwrap();
    let mut cycle = best.cycle;
    cycle.rotate_left(k);
    Ok(OptimalPolicy {
        mean_payoff: best.mean,
        transient,
        cycle,
    })
}

/// The forced strategy when controls follow `u(t+1) = G ⋉ u(t)`: the run
/// from `(x0, u0)` until the joint state repeats.
pub fn constrained_policy(
    c: &CompiledNetwork,
    p: &PayoffTable,
    x0: &DeltaVector,
    u0: &DeltaVector,
    timing: PayoffTiming,
) -> Result<OptimalPolicy> {
    p.check(c)?;
    let (mut x, mut u) = (*x0, *u0);
    c.step(&u, &x)?;
    let mut first_seen = BTreeMap::new();
    let mut run: Vec<(usize, usize)> = Vec::new();
    while !first_seen.contains_key(&(u.index(), x.index())) {
        first_seen.insert((u.index(), x.index()), run.len());
        run.push((u.index(), x.index()));
        x = c.step(&u, &x)?;
        u = c.control_step(&u)?;
    }
    let start = first_seen[&(u.index(), x.index())];
    let cycle = run.split_off(start);
    let total: Rational = cycle
        .iter()
        .map(|&(iu, ix)| p.weight(timing, iu, ix, c.successor(iu, ix)))
        .sum();
    Ok(OptimalPolicy {
        mean_payoff: total / Rational::from_integer(cycle.len() as i128),
        transient: run.into_iter().map(|(iu, _)| iu).collect(),
        cycle,
    })
}
