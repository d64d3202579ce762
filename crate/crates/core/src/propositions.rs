//! Executable checks of the structural properties of the partition sums on
//! one realized scenario.

use serde::Serialize;

use crate::engine::{
    base_partition, lower_sum, measure_gap, refinement_chain, run_discrete, upper_sum,
    BirthSchedule, ChainStep, EngineError, Partition, Refinement,
};
use crate::growth::{Assumption, GrowthError, GrowthProcess, TimeInterval};
use crate::region::Region;

/// Largest admissible ratio of consecutive gaps along the dyadic chain.
pub const GAP_RATE: f64 = 0.55;
/// Snapshot inclusion tolerance for trajectory monotonicity.
pub const TRAJECTORY_TOL: f64 = 1e-6;
/// Relative accuracy of gap measurements.
pub const GAP_REL: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// worst observed value of the checked quantity
    pub measured: f64,
    /// admissible limit for `measured`
    pub limit: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    /// `limit - measured`.
    pub fn slack(&self) -> f64 {
        self.limit - self.measured
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub t: f64,
    pub depth: usize,
    pub checks: Vec<Check>,
    pub gaps: Vec<f64>,
    pub bounds: Vec<f64>,
    /// no germ at `t0`: the `t0` term is empty and the set stays empty until
    /// the first birth
    pub empty_initial_nucleation: bool,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Scale used for relative inclusion tolerances.
fn scale_of(r: &Region) -> f64 {
    r.extent().max(1.0)
}

/// Worst excess `sup_{x∈a} d(x, b)` over a list of pairs that should be
/// nested, compared with `tol`.
fn inclusion_check(
    name: &'static str,
    pairs: &[(&Region, &Region)],
    tol: f64,
) -> Result<Check, EngineError> {
    let mut worst: f64 = 0.0;
    let mut passed = true;
    let mut detail = None;
    for (k, (a, b)) in pairs.iter().enumerate() {
        if !a.is_subset(b, tol)? {
            passed = false;
            detail.get_or_insert_with(|| format!("first violation at pair {k}"));
        }
        worst = worst.max(a.directed_hausdorff(b, tol.max(1e-12))?);
    }
    Ok(Check {
        name,
        passed,
        measured: worst,
        limit: tol,
        detail,
    })
}

fn budget_depth(depth: usize, factor: usize) -> usize {
    // the same mesh reduction with a larger split factor
    ((depth as f64) * 2f64.ln() / (factor as f64).ln())
        .ceil()
        .max(1.0) as usize
}

/// Runs every check on one scenario at time `t` along the dyadic chain of
/// the given depth and a trisection chain of comparable mesh.
///
/// Growth hypothesis violations become failed checks; other engine errors
/// (bad time, bad partition) are returned.
pub fn proposition_suite(
    b: &BirthSchedule,
    g: &GrowthProcess,
    t: f64,
    depth: usize,
) -> Result<SuiteReport, EngineError> {
    let depth = depth.max(1);
    let mut checks = assumption_checks(g);
    let mut report = SuiteReport {
        t,
        depth,
        checks: Vec::new(),
        gaps: Vec::new(),
        bounds: Vec::new(),
        empty_initial_nucleation: !b.has_initial_nucleation(),
    };
    if checks.iter().all(|c| c.passed) {
        match sum_checks(b, g, t, depth, &mut report) {
            Ok(()) => {}
            Err(EngineError::Growth(GrowthError::AssumptionViolated { assumption, time })) => {
                let c = checks
                    .iter_mut()
                    .find(|c| c.name == assumption.label())
                    .expect("all labels present");
                c.passed = false;
                c.measured += 1.0;
                c.detail = Some(format!("fails at t = {time}"));
            }
            Err(e) => return Err(e),
        }
    }
    report.checks.extend(checks);
    Ok(report)
}

fn assumption_checks(g: &GrowthProcess) -> Vec<Check> {
    let report = g.check_assumptions(&g.probe_times());
    [
        Assumption::OriginInGrowth,
        Assumption::Convex,
        Assumption::BoundedByK,
    ]
    .into_iter()
    .map(|a| {
        let fails = report.failures().filter(|c| c.assumption == a).count();
        Check {
            name: a.label(),
            passed: fails == 0,
            measured: fails as f64,
            limit: 0.0,
            detail: report
                .failures()
                .find(|c| c.assumption == a)
                .map(|c| format!("fails at t = {}", c.time)),
        }
    })
    .collect()
}

fn sum_checks(
    b: &BirthSchedule,
    g: &GrowthProcess,
    t: f64,
    depth: usize,
    report: &mut SuiteReport,
) -> Result<(), EngineError> {
    let base = base_partition(b, g, t)?;
    let tiny = 1e-12;
    let dyadic = refinement_chain(b, g, base.clone(), depth, Refinement::Dyadic, tiny, GAP_REL)?;
    let last = dyadic.last().expect("chain is nonempty");
    let scale = scale_of(&dyadic[0].upper);
    let incl_tol = 1e-9 * scale;
    let checks = &mut report.checks;

    let pairs: Vec<_> = dyadic.iter().map(|s| (&s.lower, &s.upper)).collect();
    checks.push(inclusion_check("sandwich", &pairs, incl_tol)?);

    let mut mono: Vec<(&Region, &Region)> = Vec::new();
    for w in dyadic.windows(2) {
        mono.push((&w[0].lower, &w[1].lower));
        mono.push((&w[1].upper, &w[0].upper));
    }
    checks.push(inclusion_check("refinement-monotone", &mono, incl_tol)?);

    checks.push(gap_bound_check(&dyadic));
    checks.push(gap_non_increasing_check(&dyadic));
    checks.push(gap_rate_check(&dyadic, incl_tol));

    let tri = refinement_chain(
        b,
        g,
        base,
        budget_depth(depth, 3),
        Refinement::Trisection,
        tiny,
        GAP_REL,
    )?;
    checks.push(independence_check(
        last,
        tri.last().expect("chain is nonempty"),
    )?);

    checks.push(time_monotone_check(b, g, &last.partition, incl_tol)?);

    let traj = run_discrete(b, g, &last.partition)?;
    let violation = traj.first_non_monotone(TRAJECTORY_TOL)?;
    checks.push(Check {
        name: "trajectory-monotone",
        passed: violation.is_none(),
        measured: violation.map_or(0.0, |k| k as f64 + 1.0),
        limit: 0.0,
        detail: violation.map(|k| format!("snapshot {k} not contained in snapshot {}", k + 1)),
    });

    checks.push(semigroup_check(b, g, &last.partition, incl_tol)?);
    report.gaps = dyadic.iter().map(|s| s.gap.value).collect();
    report.bounds = dyadic.iter().map(|s| s.bound).collect();
    Ok(())
}

fn gap_bound_check(chain: &[ChainStep]) -> Check {
    let worst = chain
        .iter()
        .map(|s| s.gap.value - s.bound)
        .fold(f64::NEG_INFINITY, f64::max);
    Check {
        name: "gap-bound",
        passed: worst <= 0.0,
        measured: worst,
        limit: 0.0,
        detail: Some("max over depths of gap - mesh (|K| + 1)".into()),
    }
}

fn gap_non_increasing_check(chain: &[ChainStep]) -> Check {
    let mut worst = f64::NEG_INFINITY;
    let mut passed = true;
    for w in chain.windows(2) {
        let rise = w[1].gap.value - w[0].gap.value;
        // the measured values carry the accuracy of the distance solver
        passed &= rise <= w[0].gap.slack + w[1].gap.slack;
        worst = worst.max(rise);
    }
    Check {
        name: "gap-non-increasing",
        passed,
        measured: worst.max(0.0),
        limit: 0.0,
        detail: None,
    }
}

fn gap_rate_check(chain: &[ChainStep], floor: f64) -> Check {
    let mut worst: f64 = 0.0;
    let mut detail = None;
    for w in chain.windows(2) {
        let (g0, g1) = (w[0].gap, w[1].gap);
        if g0.value <= floor {
            continue;
        }
        // certified ratio: largest possible true g1 over smallest possible true g0
        let ratio = g1.upper() / g0.value;
        if ratio > worst {
            worst = ratio;
            detail = Some(format!("depth {} -> {}", w[0].depth, w[1].depth));
        }
    }
    Check {
        name: "gap-rate",
        passed: worst <= GAP_RATE,
        measured: worst,
        limit: GAP_RATE,
        detail,
    }
}

fn independence_check(dy: &ChainStep, tri: &ChainStep) -> Result<Check, EngineError> {
    // both lower sums lie between the limit's lower and upper neighbours, so
    // their distance is at most the larger of the two gaps
    let limit = dy.gap.upper().max(tri.gap.upper());
    let d = dy.lower.hausdorff(&tri.lower, (limit * 1e-3).max(1e-12))?;
    Ok(Check {
        name: "partition-independence",
        passed: d <= limit,
        measured: d,
        limit,
        detail: Some(format!(
            "dyadic mesh {:.3e}, trisection mesh {:.3e}",
            dy.partition.mesh(),
            tri.partition.mesh()
        )),
    })
}

/// For `s` an interior time of `pi`, the sums on the prefix partition at `s`
/// sit inside the sums on `pi` at its end.
fn time_monotone_check(
    b: &BirthSchedule,
    g: &GrowthProcess,
    pi: &Partition,
    tol: f64,
) -> Result<Check, EngineError> {
    let ts = pi.times();
    let s = ts[ts.len() / 2];
    let Some(prefix) = pi.prefix_through(s).filter(|p| p.end() < pi.end()) else {
        return Ok(Check {
            name: "time-monotone",
            passed: true,
            measured: 0.0,
            limit: tol,
            detail: Some("partition has no interior time".into()),
        });
    };
    let ls = lower_sum(b, g, &prefix)?;
    let us = upper_sum(b, g, &prefix)?;
    let lt = lower_sum(b, g, pi)?;
    let ut = upper_sum(b, g, pi)?;
    let mut c = inclusion_check("time-monotone", &[(&ls, &lt), (&us, &ut)], tol)?;
    c.detail = Some(format!("s = {s}, t = {}", pi.end()));
    Ok(c)
}

/// The lower sum at `t` equals the lower sum at an interior `s` dilated by
/// `∫_s^t G`, joined with the germs born in `(s, t]` grown on the tail.
fn semigroup_check(
    b: &BirthSchedule,
    g: &GrowthProcess,
    pi: &Partition,
    tol: f64,
) -> Result<Check, EngineError> {
    let ts = pi.times();
    let k = ts.len() / 2;
    let s = ts[k];
    let t = pi.end();
    let whole = lower_sum(b, g, pi)?;
    let mut rebuilt = match pi.prefix_through(s).filter(|p| p.end() < t) {
        Some(prefix) => {
            lower_sum(b, g, &prefix)?.dilate(&g.aumann_integral(TimeInterval::new(s, t)?)?)
        }
        None => b
            .cumulative(ts[0])
            .dilate(&g.aumann_integral(TimeInterval::new(ts[0], t)?)?),
    };
    let k = if s < t { k } else { 0 };
    for w in ts[k..].windows(2) {
        let germs = b.increment(w[0], w[1]);
        if germs.is_empty() {
            continue;
        }
        let grown = g.aumann_integral(TimeInterval::new(w[1], t)?)?;
        let tail =
            Region::from_components(germs.iter().map(|e| e.germ.minkowski_sum(&grown)).collect());
        rebuilt = rebuilt.union(&tail);
    }
    let gap = measure_gap(&whole, &rebuilt, tol / 2.0, 0.0)?;
    Ok(Check {
        name: "semigroup",
        passed: gap.upper() <= tol,
        measured: gap.value,
        limit: tol,
        detail: Some(format!("split at s = {s}")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::{ConvexBody, Point};
    use crate::engine::BirthEvent;

    #[test]
    fn two_germ_scenario_passes_everything() {
        let g = GrowthProcess::constant(ConvexBody::rect(-0.5, -0.5, 0.5, 0.5), 0.0, 2.0).unwrap();
        let b = BirthSchedule::new(
            0.0,
            2.0,
            vec![
                BirthEvent {
                    time: 0.0,
                    germ: ConvexBody::origin(),
                },
                BirthEvent {
                    time: 1.0,
                    germ: ConvexBody::point(Point::new(4.0, 0.0)),
                },
            ],
        )
        .unwrap();
        let rep = proposition_suite(&b, &g, 2.0, 6).unwrap();
        for c in &rep.checks {
            assert!(c.passed, "{c:?}");
        }
        assert_eq!(rep.gaps.len(), 7);
        assert!(!rep.empty_initial_nucleation);
        let rate = rep.check("gap-rate").unwrap();
        assert!((rate.measured - 0.5).abs() < 1e-3);
    }

    #[test]
    fn corrupted_growth_fails_origin_check() {
        let k = ConvexBody::rect(-3.0, -3.0, 3.0, 3.0);
        let g = GrowthProcess::piecewise_unchecked(
            vec![0.0, 0.5, 1.0],
            vec![
                ConvexBody::rect(-1.0, -1.0, 1.0, 1.0),
                ConvexBody::rect(1.0, 1.0, 2.0, 2.0),
            ],
            None,
            k,
        )
        .unwrap();
        let b = BirthSchedule::new(0.0, 1.0, vec![]).unwrap();
        let rep = proposition_suite(&b, &g, 1.0, 2).unwrap();
        assert!(!rep.passed());
        assert!(!rep.check("origin-in-growth").unwrap().passed);
        assert!(rep.empty_initial_nucleation);
    }

    #[test]
    fn trisection_depth_matches_mesh() {
        assert_eq!(budget_depth(12, 3), 8);
        assert_eq!(budget_depth(1, 3), 1);
    }
}
