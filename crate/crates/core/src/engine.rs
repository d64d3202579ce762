//! Partition sums and the limit process they define.
//!
//! Births are a sorted list of germ events. The increment over a partition
//! slice `(t_{i-1}, t_i]` is the set of germs born in that slice; every germ
//! is dilated on its own, so every component of every sum stays convex.

use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::convex::ConvexBody;
use crate::growth::{GrowthError, GrowthProcess, TimeInterval};
use crate::region::{Region, RegionError};

pub const DEFAULT_MAX_DEPTH: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("observation interval [{t0}, {t_end}] is invalid")]
    BadInterval { t0: f64, t_end: f64 },
    #[error("birth time {time} outside [{t0}, {t_end}]")]
    EventOutOfRange { time: f64, t0: f64, t_end: f64 },
    #[error("partition times must be finite and strictly increasing with at least two entries")]
    BadPartition,
    #[error("partition starts at {got}, schedule starts at {expected}")]
    PartitionMismatch { expected: f64, got: f64 },
    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(f64),
    #[error("time {t} outside [{t0}, {t_end}]")]
    TimeOutOfRange { t: f64, t0: f64, t_end: f64 },
    #[error("refinement budget exhausted at depth {}: gap {} bound {}", .0.depth, .0.gap, .0.bound)]
    BudgetExceeded(Certificate),
    #[error(transparent)]
    Growth(#[from] GrowthError),
    #[error(transparent)]
    Region(#[from] RegionError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BirthEvent {
    pub time: f64,
    pub germ: ConvexBody,
}

/// Germ events on `[t0, T]`, sorted by time (ties keep input order).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BirthSchedule {
    t0: f64,
    t_end: f64,
    events: Vec<BirthEvent>,
}

impl BirthSchedule {
    pub fn new(t0: f64, t_end: f64, mut events: Vec<BirthEvent>) -> Result<Self, EngineError> {
        if !(t0.is_finite() && t_end.is_finite() && t0 < t_end) {
            return Err(EngineError::BadInterval { t0, t_end });
        }
        if let Some(e) = events.iter().find(|e| !(e.time >= t0 && e.time <= t_end)) {
            return Err(EngineError::EventOutOfRange {
                time: e.time,
                t0,
                t_end,
            });
        }
        events.sort_by(|a, b| a.time.total_cmp(&b.time));
        Ok(Self { t0, t_end, events })
    }

    pub fn empty(t0: f64, t_end: f64) -> Result<Self, EngineError> {
        Self::new(t0, t_end, Vec::new())
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.t0, self.t_end)
    }

    pub fn events(&self) -> &[BirthEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Distinct event times.
    pub fn event_times(&self) -> Vec<f64> {
        let mut ts: Vec<f64> = self.events.iter().map(|e| e.time).collect();
        ts.dedup();
        ts
    }

    /// Whether some germ is present at `t0`.
    pub fn has_initial_nucleation(&self) -> bool {
        self.events.first().is_some_and(|e| e.time <= self.t0)
    }

    fn upto(&self, t: f64) -> usize {
        self.events.partition_point(|e| e.time <= t)
    }

    fn slice(&self, a: f64, b: f64) -> Range<usize> {
        let lo = self.upto(a);
        lo..self.upto(b).max(lo)
    }

    /// Germs born in `(a, b]`.
    pub fn increment(&self, a: f64, b: f64) -> &[BirthEvent] {
        &self.events[self.slice(a, b)]
    }

    /// Germs born at or before `t`.
    pub fn born_by(&self, t: f64) -> &[BirthEvent] {
        &self.events[..self.upto(t)]
    }

    /// `B_t` as the union of germs born at or before `t`.
    pub fn cumulative(&self, t: f64) -> Region {
        Region::from_components(self.born_by(t).iter().map(|e| e.germ.clone()).collect())
    }
}

/// Strictly increasing times `t_0 < … < t_n`, `n ≥ 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Partition {
    times: Vec<f64>,
}

impl Partition {
    pub fn new(times: Vec<f64>) -> Result<Self, EngineError> {
        if times.len() < 2
            || times.iter().any(|t| !t.is_finite())
            || times.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(EngineError::BadPartition);
        }
        Ok(Self { times })
    }

    /// `n` equal steps on `[a, b]`.
    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Self, EngineError> {
        let n = n.max(1);
        let mut ts: Vec<f64> = (0..n).map(|k| a + (b - a) * k as f64 / n as f64).collect();
        ts.push(b);
        Self::new(ts)
    }

    /// `{a, b}` together with every given point strictly inside `(a, b)`.
    pub fn through(
        a: f64,
        b: f64,
        points: impl IntoIterator<Item = f64>,
    ) -> Result<Self, EngineError> {
        let mut ts = vec![a, b];
        ts.extend(points.into_iter().filter(|&p| p > a && p < b));
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        Self::new(ts)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn start(&self) -> f64 {
        self.times[0]
    }

    pub fn end(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    /// Number of steps.
    pub fn steps(&self) -> usize {
        self.times.len() - 1
    }

    pub fn mesh(&self) -> f64 {
        self.times
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    /// Inserts the midpoint of every step.
    pub fn refine(&self) -> Self {
        self.split(2)
    }

    /// Splits every step into three equal parts.
    pub fn trisect(&self) -> Self {
        self.split(3)
    }

    fn split(&self, k: usize) -> Self {
        let mut ts = Vec::with_capacity(self.steps() * k + 1);
        for w in self.times.windows(2) {
            ts.push(w[0]);
            for j in 1..k {
                let p = w[0] + (w[1] - w[0]) * j as f64 / k as f64;
                // guards against coincidence on extremely short steps
                if p > *ts.last().unwrap() && p < w[1] {
                    ts.push(p);
                }
            }
        }
        ts.push(self.end());
        Self { times: ts }
    }

    /// Whether every time of `coarser` appears in `self`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        coarser
            .times
            .iter()
            .all(|t| self.times.binary_search_by(|x| x.total_cmp(t)).is_ok())
    }

    /// The initial segment ending at `s`, which must be a time of the
    /// partition other than the first.
    pub fn prefix_through(&self, s: f64) -> Option<Partition> {
        let k = self.times.binary_search_by(|x| x.total_cmp(&s)).ok()?;
        (k >= 1).then(|| Partition {
            times: self.times[..=k].to_vec(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumKind {
    Lower,
    Upper,
}

fn check_partition(
    b: &BirthSchedule,
    g: &GrowthProcess,
    pi: &Partition,
) -> Result<(), EngineError> {
    if pi.start() != b.t0 {
        return Err(EngineError::PartitionMismatch {
            expected: b.t0,
            got: pi.start(),
        });
    }
    let (g0, g1) = g.domain();
    let t_hi = b.t_end.min(g1);
    if pi.end() > t_hi || g0 > b.t0 {
        return Err(EngineError::TimeOutOfRange {
            t: pi.end(),
            t0: b.t0.max(g0),
            t_end: t_hi,
        });
    }
    Ok(())
}

/// Union terms `(germs, integral start)` of the sum, the `t0` term first.
fn terms<'a>(b: &'a BirthSchedule, pi: &Partition, kind: SumKind) -> Vec<(&'a [BirthEvent], f64)> {
    let ts = pi.times();
    let mut out = vec![(b.born_by(ts[0]), ts[0])];
    for w in ts.windows(2) {
        let germs = b.increment(w[0], w[1]);
        if !germs.is_empty() {
            let start = match kind {
                SumKind::Lower => w[1],
                SumKind::Upper => w[0],
            };
            out.push((germs, start));
        }
    }
    out.retain(|(g, _)| !g.is_empty());
    out
}

/// Lower (`∫_{t_i}^t`) or upper (`∫_{t_{i-1}}^t`) partition sum at
/// `t = pi.end()`.
pub fn partition_sum(
    b: &BirthSchedule,
    g: &GrowthProcess,
    pi: &Partition,
    kind: SumKind,
) -> Result<Region, EngineError> {
    check_partition(b, g, pi)?;
    let t = pi.end();
    let parts: Vec<Vec<ConvexBody>> = terms(b, pi, kind)
        .into_par_iter()
        .map(|(germs, start)| {
            let integral = g.aumann_integral(TimeInterval::new(start, t)?)?;
            Ok(germs
                .iter()
                .map(|e| e.germ.minkowski_sum(&integral))
                .collect())
        })
        .collect::<Result<_, EngineError>>()?;
    Ok(Region::from_components(
        parts.into_iter().flatten().collect(),
    ))
}

pub fn lower_sum(
    b: &BirthSchedule,
    g: &GrowthProcess,
    pi: &Partition,
) -> Result<Region, EngineError> {
    partition_sum(b, g, pi, SumKind::Lower)
}

pub fn upper_sum(
    b: &BirthSchedule,
    g: &GrowthProcess,
    pi: &Partition,
) -> Result<Region, EngineError> {
    partition_sum(b, g, pi, SumKind::Upper)
}

/// A measured Hausdorff gap: the true value lies in `[value, value + slack]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapEstimate {
    pub value: f64,
    pub slack: f64,
}

impl GapEstimate {
    pub fn upper(&self) -> f64 {
        self.value + self.slack
    }
}

/// Hausdorff distance between the sums, to absolute accuracy `delta` or
/// relative accuracy `rel`, whichever is looser.
pub fn measure_gap(
    lower: &Region,
    upper: &Region,
    delta: f64,
    rel: f64,
) -> Result<GapEstimate, EngineError> {
    let down = upper.directed_hausdorff_rel(lower, delta, rel)?;
    let up = lower.directed_hausdorff(upper, delta)?;
    let value = down.max(up);
    Ok(GapEstimate {
        value,
        slack: delta.max(rel * down),
    })
}

/// `|Π| (‖K‖_h + 1)`.
pub fn a_priori_bound(pi: &Partition, g: &GrowthProcess) -> f64 {
    pi.mesh() * (g.bound().hausdorff_norm() + 1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub mesh: f64,
    /// measured `H(s_Π, S_Π)` (lower estimate)
    pub gap: f64,
    /// `|Π| (‖K‖_h + 1)`
    pub bound: f64,
    /// refinements applied to the base partition
    pub depth: usize,
    /// accuracy of the gap measurement
    pub delta: f64,
}

impl Certificate {
    /// Proven upper bound on the distance between the returned region and
    /// the limit.
    pub fn error_bound(&self) -> f64 {
        (self.gap + self.delta).min(self.bound)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Refinement {
    #[default]
    Dyadic,
    Trisection,
}

impl Refinement {
    pub fn apply(self, pi: &Partition) -> Partition {
        match self {
            Refinement::Dyadic => pi.refine(),
            Refinement::Trisection => pi.trisect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaOptions {
    pub max_depth: usize,
    pub refinement: Refinement,
    /// gap measurement accuracy as a fraction of `tol`
    pub delta_fraction: f64,
}

impl Default for ThetaOptions {
    fn default() -> Self {
        Self {
            max_depth: DEFAULT_MAX_DEPTH,
            refinement: Refinement::Dyadic,
            delta_fraction: 0.1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ThetaResult {
    /// lower sum at the accepted partition
    pub region: Region,
    pub upper: Region,
    pub certificate: Certificate,
    pub partition: Partition,
}

/// `{t0} ∪ event times ∪ growth breakpoints ∪ {t}`, restricted to `[t0, t]`.
pub fn base_partition(
    b: &BirthSchedule,
    g: &GrowthProcess,
    t: f64,
) -> Result<Partition, EngineError> {
    Partition::through(b.t0, t, b.event_times().into_iter().chain(g.breakpoints()))
}

fn check_time(b: &BirthSchedule, t: f64) -> Result<(), EngineError> {
    if !(t >= b.t0 && t <= b.t_end) {
        return Err(EngineError::TimeOutOfRange {
            t,
            t0: b.t0,
            t_end: b.t_end,
        });
    }
    Ok(())
}

pub fn theta(
    b: &BirthSchedule,
    g: &GrowthProcess,
    t: f64,
    tol: f64,
) -> Result<ThetaResult, EngineError> {
    theta_with(b, g, t, tol, &ThetaOptions::default())
}

/// Refines from the base partition until the sums are certified within
/// `tol` of each other; the lower sum is returned. Since the limit lies
/// between the sums, it is within `tol` of the returned region.
pub fn theta_with(
    b: &BirthSchedule,
    g: &GrowthProcess,
    t: f64,
    tol: f64,
    opts: &ThetaOptions,
) -> Result<ThetaResult, EngineError> {
    if tol <= 0.0 || !tol.is_finite() {
        return Err(EngineError::NonPositiveTolerance(tol));
    }
    check_time(b, t)?;
    if t == b.t0 {
        let region = b.cumulative(t);
        return Ok(ThetaResult {
            upper: region.clone(),
            region,
            certificate: Certificate {
                mesh: 0.0,
                gap: 0.0,
                bound: 0.0,
                depth: 0,
                delta: 0.0,
            },
            partition: Partition { times: vec![t, t] },
        });
    }
    let delta = tol * opts.delta_fraction;
    let mut pi = base_partition(b, g, t)?;
    let mut depth = 0;
    loop {
        let lower = lower_sum(b, g, &pi)?;
        let upper = upper_sum(b, g, &pi)?;
        let gap = measure_gap(&lower, &upper, delta, 0.0)?;
        let certificate = Certificate {
            mesh: pi.mesh(),
            gap: gap.value,
            bound: a_priori_bound(&pi, g),
            depth,
            delta: gap.slack,
        };
        if gap.upper() <= tol || certificate.bound <= tol {
            return Ok(ThetaResult {
                region: lower,
                upper,
                certificate,
                partition: pi,
            });
        }
        if depth >= opts.max_depth {
            return Err(EngineError::BudgetExceeded(certificate));
        }
        pi = opts.refinement.apply(&pi);
        depth += 1;
    }
}

/// [`theta_with`] at several times on one shared partition that contains
/// every requested time. Each snapshot is a sum on a prefix of the partition
/// used for the next one, so the returned regions are nested in time.
pub fn theta_many(
    b: &BirthSchedule,
    g: &GrowthProcess,
    times: &[f64],
    tol: f64,
    opts: &ThetaOptions,
) -> Result<Vec<ThetaResult>, EngineError> {
    if tol <= 0.0 || !tol.is_finite() {
        return Err(EngineError::NonPositiveTolerance(tol));
    }
    for &t in times {
        check_time(b, t)?;
    }
    let t_max = times.iter().copied().fold(b.t0, f64::max);
    if t_max == b.t0 {
        return times
            .iter()
            .map(|&t| theta_with(b, g, t, tol, opts))
            .collect();
    }
    let delta = tol * opts.delta_fraction;
    let mut pi = Partition::through(
        b.t0,
        t_max,
        b.event_times()
            .into_iter()
            .chain(g.breakpoints())
            .chain(times.iter().copied()),
    )?;
    let mut depth = 0;
    loop {
        let rows: Vec<Result<(ThetaResult, bool), EngineError>> = times
            .par_iter()
            .map(|&t| {
                let Some(prefix) = pi.prefix_through(t) else {
                    return theta_with(b, g, t, tol, opts).map(|r| (r, true));
                };
                let lower = lower_sum(b, g, &prefix)?;
                let upper = upper_sum(b, g, &prefix)?;
                let gap = measure_gap(&lower, &upper, delta, 0.0)?;
                let certificate = Certificate {
                    mesh: prefix.mesh(),
                    gap: gap.value,
                    bound: a_priori_bound(&prefix, g),
                    depth,
                    delta: gap.slack,
                };
                let done = gap.upper() <= tol || certificate.bound <= tol;
                Ok((
                    ThetaResult {
                        region: lower,
                        upper,
                        certificate,
                        partition: prefix,
                    },
                    done,
                ))
            })
            .collect();
        let rows: Vec<(ThetaResult, bool)> = rows.into_iter().collect::<Result<_, _>>()?;
        if rows.iter().all(|(_, done)| *done) {
            return Ok(rows.into_iter().map(|(r, _)| r).collect());
        }
        if depth >= opts.max_depth {
            let worst = rows
                .into_iter()
                .filter(|(_, done)| !done)
                .map(|(r, _)| r.certificate)
                .max_by(|x, y| x.gap.total_cmp(&y.gap))
                .expect("some time is not done");
            return Err(EngineError::BudgetExceeded(worst));
        }
        pi = opts.refinement.apply(&pi);
        depth += 1;
    }
}

/// One row of a refinement chain.
#[derive(Clone, Debug)]
pub struct ChainStep {
    pub depth: usize,
    pub partition: Partition,
    pub lower: Region,
    pub upper: Region,
    pub gap: GapEstimate,
    pub bound: f64,
}

/// Sums and gaps at depths `0..=depth` starting from `base`. Gaps are
/// measured to relative accuracy `rel` (absolute floor `delta`).
pub fn refinement_chain(
    b: &BirthSchedule,
    g: &GrowthProcess,
    base: Partition,
    depth: usize,
    refinement: Refinement,
    delta: f64,
    rel: f64,
) -> Result<Vec<ChainStep>, EngineError> {
    let mut out: Vec<ChainStep> = Vec::with_capacity(depth + 1);
    let mut pi = base;
    for d in 0..=depth {
        if d > 0 {
            pi = refinement.apply(&pi);
        }
        let lower = lower_sum(b, g, &pi)?;
        let upper = upper_sum(b, g, &pi)?;
        let gap = measure_gap(&lower, &upper, delta, rel)?;
        out.push(ChainStep {
            depth: d,
            bound: a_priori_bound(&pi, g),
            partition: pi.clone(),
            lower,
            upper,
            gap,
        });
    }
    Ok(out)
}

/// `(prev ⊕ g_k) ∪ b_k`.
pub fn discrete_step(prev: &Region, g_k: &ConvexBody, b_k: &Region) -> Region {
    prev.dilate(g_k).union(b_k)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub region: Region,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub snapshots: Vec<Snapshot>,
}

impl Trajectory {
    /// Index `k` of the first pair with `snapshot_k ⊄ snapshot_{k+1}` (up to
    /// `tol`), if any.
    pub fn first_non_monotone(&self, tol: f64) -> Result<Option<usize>, EngineError> {
        for (k, w) in self.snapshots.windows(2).enumerate() {
            if !w[0].region.is_subset(&w[1].region, tol)? {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }
}

/// Folds [`discrete_step`] along `grid` with `g_k = ∫_{t_{k-1}}^{t_k} G` and
/// `b_k` the germs born in `(t_{k-1}, t_k]`, starting from `B_{t0}`.
pub fn run_discrete(
    b: &BirthSchedule,
    g: &GrowthProcess,
    grid: &Partition,
) -> Result<Trajectory, EngineError> {
    check_partition(b, g, grid)?;
    let ts = grid.times();
    let mut state = b.cumulative(ts[0]);
    let mut snapshots = vec![Snapshot {
        t: ts[0],
        region: state.clone(),
    }];
    for w in ts.windows(2) {
        let g_k = g.aumann_integral(TimeInterval::new(w[0], w[1])?)?;
        let b_k = Region::from_components(
            b.increment(w[0], w[1])
                .iter()
                .map(|e| e.germ.clone())
                .collect(),
        );
        state = discrete_step(&state, &g_k, &b_k);
        snapshots.push(Snapshot {
            t: w[1],
            region: state.clone(),
        });
    }
    Ok(Trajectory { snapshots })
}
