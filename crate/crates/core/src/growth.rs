//! Growth processes and their set-valued (Aumann) time integrals.
//!
//! One [`GrowthProcess`] value is one sample path `t ↦ G(t)` on `[t0, T]`
//! together with its uniform bound `K`. Two representations exist:
//!
//! * piecewise constant on left-open intervals `(τ_{j-1}, τ_j]`, so the path
//!   is left-continuous; integrals are exact Minkowski sums of scaled pieces;
//! * sampled from an evaluator declared left-continuous; integrals go through
//!   a step approximation on a fixed panel grid (values at panel midpoints),
//!   integrated through support functions and rebuilt by halfplane
//!   intersection, which over-approximates the integral of the step path.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::convex::{ConvexBody, Direction, DirectionGrid, GeometryError, Point};

pub const DEFAULT_QUAD_PANELS: usize = 256;
pub const DEFAULT_GRID_DIRECTIONS: usize = 360;

/// The standing hypotheses on a growth path that are checked numerically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Assumption {
    /// `0 ∈ G(t)`.
    OriginInGrowth,
    /// `G(t)` is convex.
    Convex,
    /// `G(t) ⊆ K`.
    BoundedByK,
}

impl Assumption {
    pub fn label(self) -> &'static str {
        match self {
            Assumption::OriginInGrowth => "origin-in-growth",
            Assumption::Convex => "convex",
            Assumption::BoundedByK => "bounded-by-k",
        }
    }
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GrowthError {
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("time {t} outside the process domain [{t0}, {t_end}]")]
    OutsideDomain { t: f64, t0: f64, t_end: f64 },
    #[error("breakpoints must be finite and strictly increasing with at least two entries")]
    BadBreakpoints,
    #[error("expected {expected} pieces for the breakpoints, got {got}")]
    PieceCount { expected: usize, got: usize },
    #[error("assumption {assumption} violated at t = {time}")]
    AssumptionViolated { assumption: Assumption, time: f64 },
    #[error("interval [{a1}, {b1}] is not contained in [{a2}, {b2}]")]
    NotNested { a1: f64, b1: f64, a2: f64, b2: f64 },
    #[error("quadrature needs at least one panel and three directions")]
    BadQuadrature,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Closed time interval `[a, b]`, `a ≤ b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeInterval {
    pub a: f64,
    pub b: f64,
}

impl TimeInterval {
    pub fn new(a: f64, b: f64) -> Result<Self, GrowthError> {
        if !(a.is_finite() && b.is_finite() && a <= b) {
            return Err(GrowthError::InvalidInterval { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn is_empty(&self) -> bool {
        self.a == self.b
    }

    pub fn contains_interval(&self, inner: &TimeInterval) -> bool {
        self.a <= inner.a && inner.b <= self.b
    }
}

type Evaluator = Arc<dyn Fn(f64) -> ConvexBody + Send + Sync>;

#[derive(Clone)]
enum Path {
    Piecewise {
        breakpoints: Vec<f64>,
        initial: ConvexBody,
        pieces: Vec<ConvexBody>,
    },
    Sampled {
        eval: Evaluator,
        lipschitz: Option<f64>,
        table: Arc<SupportTable>,
    },
}

/// Support values of `G` at the midpoints of a fixed panel grid on
/// `[t0, T]`. Integrals over any interval are exact integrals of the
/// resulting step approximation, hence monotone under interval inclusion.
struct SupportTable {
    panels: usize,
    grid: DirectionGrid,
    /// row-major, one row of `grid.len()` values per panel
    supports: Vec<f64>,
    violations: Vec<Option<Assumption>>,
}

impl SupportTable {
    fn build(
        eval: &Evaluator,
        t0: f64,
        t_end: f64,
        bound: &ConvexBody,
        panels: usize,
        directions: usize,
    ) -> Self {
        let grid = DirectionGrid::uniform(directions).with_edge_normals(&[bound]);
        let mut supports = Vec::with_capacity(panels * grid.len());
        let mut violations = Vec::with_capacity(panels);
        for k in 0..panels {
            let g = eval(Self::mid(t0, t_end, panels, k));
            supports.extend(grid.iter().map(|u| g.support(u)));
            violations.push(if !g.contains_point(Point::ORIGIN) {
                Some(Assumption::OriginInGrowth)
            } else if !bound.contains_convex(&g) {
                Some(Assumption::BoundedByK)
            } else {
                None
            });
        }
        Self {
            panels,
            grid,
            supports,
            violations,
        }
    }

    fn mid(t0: f64, t_end: f64, panels: usize, k: usize) -> f64 {
        t0 + (k as f64 + 0.5) * (t_end - t0) / panels as f64
    }

    fn midpoint(&self, t0: f64, t_end: f64, k: usize) -> f64 {
        Self::mid(t0, t_end, self.panels, k)
    }
}

/// A sample path of the growth process with its bound `K`.
#[derive(Clone)]
pub struct GrowthProcess {
    t0: f64,
    t_end: f64,
    bound: ConvexBody,
    path: Path,
}

impl fmt::Debug for GrowthProcess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("GrowthProcess");
        d.field("t0", &self.t0)
            .field("t_end", &self.t_end)
            .field("bound", &self.bound);
        match &self.path {
            Path::Piecewise {
                breakpoints,
                pieces,
                ..
            } => d.field("breakpoints", breakpoints).field("pieces", pieces),
            Path::Sampled {
                lipschitz, table, ..
            } => d
                .field("lipschitz", lipschitz)
                .field("panels", &table.panels),
        };
        d.finish()
    }
}

impl GrowthProcess {
    /// Piecewise-constant path: `pieces[j]` on `(τ_j, τ_{j+1}]`, `initial`
    /// at `τ_0` (defaults to the first piece). Every value is checked against
    /// the origin and bound hypotheses.
    pub fn piecewise(
        breakpoints: Vec<f64>,
        pieces: Vec<ConvexBody>,
        initial: Option<ConvexBody>,
        bound: ConvexBody,
    ) -> Result<Self, GrowthError> {
        let g = Self::piecewise_unchecked(breakpoints, pieces, initial, bound)?;
        let times = g.probe_times();
        if let Some(f) = g.check_assumptions(&times).first_failure() {
            return Err(GrowthError::AssumptionViolated {
                assumption: f.assumption,
                time: f.time,
            });
        }
        Ok(g)
    }

    /// As [`GrowthProcess::piecewise`] but only the time structure is
    /// validated; used to load processes whose hypotheses are to be reported
    /// rather than enforced.
    pub fn piecewise_unchecked(
        breakpoints: Vec<f64>,
        pieces: Vec<ConvexBody>,
        initial: Option<ConvexBody>,
        bound: ConvexBody,
    ) -> Result<Self, GrowthError> {
        if breakpoints.len() < 2
            || breakpoints.iter().any(|t| !t.is_finite())
            || breakpoints.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(GrowthError::BadBreakpoints);
        }
        if pieces.len() != breakpoints.len() - 1 {
            return Err(GrowthError::PieceCount {
                expected: breakpoints.len() - 1,
                got: pieces.len(),
            });
        }
        let initial = initial.unwrap_or_else(|| pieces[0].clone());
        Ok(Self {
            t0: breakpoints[0],
            t_end: breakpoints[breakpoints.len() - 1],
            bound,
            path: Path::Piecewise {
                breakpoints,
                initial,
                pieces,
            },
        })
    }

    /// `G ≡ K` on `[t0, t_end]`.
    pub fn constant(k: ConvexBody, t0: f64, t_end: f64) -> Result<Self, GrowthError> {
        Self::piecewise(vec![t0, t_end], vec![k.clone()], None, k)
    }

    /// Null growth `G ≡ {0}`: the birth sets are never dilated.
    pub fn null(t0: f64, t_end: f64) -> Result<Self, GrowthError> {
        Self::constant(ConvexBody::origin(), t0, t_end)
    }

    /// Path given by a left-continuous evaluator; integrals are approximate.
    pub fn sampled<F>(
        t0: f64,
        t_end: f64,
        eval: F,
        bound: ConvexBody,
        lipschitz: Option<f64>,
    ) -> Result<Self, GrowthError>
    where
        F: Fn(f64) -> ConvexBody + Send + Sync + 'static,
    {
        if !(t0.is_finite() && t_end.is_finite() && t0 < t_end) {
            return Err(GrowthError::BadBreakpoints);
        }
        let eval: Evaluator = Arc::new(eval);
        let table = SupportTable::build(
            &eval,
            t0,
            t_end,
            &bound,
            DEFAULT_QUAD_PANELS,
            DEFAULT_GRID_DIRECTIONS,
        );
        Ok(Self {
            t0,
            t_end,
            bound,
            path: Path::Sampled {
                eval,
                lipschitz,
                table: Arc::new(table),
            },
        })
    }

    /// Overrides the quadrature panel count and direction grid size of a
    /// sampled path; no effect on piecewise paths.
    pub fn with_quadrature(
        mut self,
        n_panels: usize,
        n_directions: usize,
    ) -> Result<Self, GrowthError> {
        if n_panels == 0 || n_directions < 3 {
            return Err(GrowthError::BadQuadrature);
        }
        if let Path::Sampled { eval, table, .. } = &mut self.path {
            *table = Arc::new(SupportTable::build(
                eval,
                self.t0,
                self.t_end,
                &self.bound,
                n_panels,
                n_directions,
            ));
        }
        Ok(self)
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.t0, self.t_end)
    }

    pub fn bound(&self) -> &ConvexBody {
        &self.bound
    }

    /// Whether integrals are exact (piecewise) or quadrature-based (sampled).
    pub fn is_exact(&self) -> bool {
        matches!(self.path, Path::Piecewise { .. })
    }

    /// Declared Lipschitz constant in the Hausdorff metric (sampled paths only).
    pub fn lipschitz(&self) -> Option<f64> {
        match &self.path {
            Path::Sampled { lipschitz, .. } => *lipschitz,
            Path::Piecewise { .. } => None,
        }
    }

    /// Jump times of a piecewise path (including both ends); `[t0, T]` for
    /// sampled paths.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.path {
            Path::Piecewise { breakpoints, .. } => breakpoints.clone(),
            Path::Sampled { .. } => vec![self.t0, self.t_end],
        }
    }

    fn check_time(&self, t: f64) -> Result<(), GrowthError> {
        if !(t >= self.t0 && t <= self.t_end) {
            return Err(GrowthError::OutsideDomain {
                t,
                t0: self.t0,
                t_end: self.t_end,
            });
        }
        Ok(())
    }

    /// `G(t)`.
    pub fn value_at(&self, t: f64) -> Result<ConvexBody, GrowthError> {
        self.check_time(t)?;
        Ok(match &self.path {
            Path::Piecewise {
                breakpoints,
                initial,
                pieces,
            } => {
                if t == breakpoints[0] {
                    initial.clone()
                } else {
                    // first j with t <= τ_{j+1}
                    let j = breakpoints[1..].partition_point(|&tau| tau < t);
                    pieces[j.min(pieces.len() - 1)].clone()
                }
            }
            Path::Sampled { eval, .. } => eval(t),
        })
    }

    fn verify_value(&self, body: &ConvexBody, time: f64) -> Result<(), GrowthError> {
        if !body.contains_point(Point::ORIGIN) {
            return Err(GrowthError::AssumptionViolated {
                assumption: Assumption::OriginInGrowth,
                time,
            });
        }
        if !self.bound.contains_convex(body) {
            return Err(GrowthError::AssumptionViolated {
                assumption: Assumption::BoundedByK,
                time,
            });
        }
        Ok(())
    }

    /// `∫_a^b G(τ) dτ` as a convex body.
    pub fn aumann_integral(&self, iv: TimeInterval) -> Result<ConvexBody, GrowthError> {
        self.check_time(iv.a)?;
        self.check_time(iv.b)?;
        if iv.is_empty() {
            return Ok(ConvexBody::origin());
        }
        match &self.path {
            Path::Piecewise {
                breakpoints,
                pieces,
                ..
            } => {
                let mut acc = ConvexBody::origin();
                for (j, piece) in pieces.iter().enumerate() {
                    let lo = iv.a.max(breakpoints[j]);
                    let hi = iv.b.min(breakpoints[j + 1]);
                    if hi > lo {
                        self.verify_value(piece, hi)?;
                        acc = acc.minkowski_sum(&piece.scale(hi - lo)?);
                    }
                }
                Ok(acc)
            }
            Path::Sampled { table, .. } => {
                let w = (self.t_end - self.t0) / table.panels as f64;
                let mut h = vec![0.0; table.grid.len()];
                for k in 0..table.panels {
                    let lo = iv.a.max(self.t0 + k as f64 * w);
                    let hi = iv.b.min(self.t0 + (k + 1) as f64 * w);
                    if hi <= lo {
                        continue;
                    }
                    if let Some(assumption) = table.violations[k] {
                        return Err(GrowthError::AssumptionViolated {
                            assumption,
                            time: table.midpoint(self.t0, self.t_end, k),
                        });
                    }
                    let row = &table.supports[k * table.grid.len()..(k + 1) * table.grid.len()];
                    for (acc, s) in h.iter_mut().zip(row) {
                        *acc += (hi - lo) * s;
                    }
                }
                let samples: Vec<(Direction, f64)> = table.grid.iter().zip(h).collect();
                Ok(ConvexBody::from_support_samples(&samples)?)
            }
        }
    }

    /// A-priori error of the halfplane reconstruction for a sampled path
    /// over `iv`; zero for piecewise paths.
    pub fn reconstruction_error_bound(&self, iv: TimeInterval) -> f64 {
        match &self.path {
            Path::Piecewise { .. } => 0.0,
            Path::Sampled { table, .. } => {
                let dtheta = table.grid.spacing();
                let c = (dtheta / 2.0).cos();
                self.bound.hausdorff_norm() * iv.len() * (1.0 - c) / c
            }
        }
    }

    /// True iff `∫_{iv1} G ⊆ ∫_{iv2} G`; requires `iv1 ⊆ iv2`.
    pub fn integral_monotone_check(
        &self,
        iv1: TimeInterval,
        iv2: TimeInterval,
    ) -> Result<bool, GrowthError> {
        if !iv2.contains_interval(&iv1) {
            return Err(GrowthError::NotNested {
                a1: iv1.a,
                b1: iv1.b,
                a2: iv2.a,
                b2: iv2.b,
            });
        }
        let small = self.aumann_integral(iv1)?;
        let big = self.aumann_integral(iv2)?;
        Ok(big.contains_convex(&small))
    }

    /// Probe times covering every piece of a piecewise path (each breakpoint
    /// and each piece midpoint), or a uniform grid of 65 times otherwise.
    pub fn probe_times(&self) -> Vec<f64> {
        match &self.path {
            Path::Piecewise { breakpoints, .. } => {
                let mut ts = vec![breakpoints[0]];
                for w in breakpoints.windows(2) {
                    ts.push(0.5 * (w[0] + w[1]));
                    ts.push(w[1]);
                }
                ts
            }
            Path::Sampled { .. } => (0..=64)
                .map(|k| self.t0 + (self.t_end - self.t0) * k as f64 / 64.0)
                .collect(),
        }
    }

    /// Checks every hypothesis at each sample time; never fails, failures
    /// are report entries.
    pub fn check_assumptions(&self, sample_times: &[f64]) -> AssumptionReport {
        let mut checks = Vec::new();
        for &t in sample_times {
            let Ok(g) = self.value_at(t) else {
                checks.push(AssumptionCheck {
                    time: t,
                    assumption: Assumption::OriginInGrowth,
                    passed: false,
                    detail: Some("time outside the process domain".into()),
                });
                continue;
            };
            checks.push(AssumptionCheck {
                time: t,
                assumption: Assumption::OriginInGrowth,
                passed: g.contains_point(Point::ORIGIN),
                detail: None,
            });
            checks.push(AssumptionCheck {
                time: t,
                assumption: Assumption::Convex,
                passed: ConvexBody::from_vertices(g.vertices().to_vec()).is_ok(),
                detail: None,
            });
            let inside = self.bound.contains_convex(&g);
            checks.push(AssumptionCheck {
                time: t,
                assumption: Assumption::BoundedByK,
                passed: inside,
                detail: (!inside)
                    .then(|| format!("excess {:.3e}", g.directed_hausdorff(&self.bound))),
            });
        }
        AssumptionReport { checks }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssumptionCheck {
    pub time: f64,
    pub assumption: Assumption,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub checks: Vec<AssumptionCheck>,
}

impl AssumptionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AssumptionCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn first_failure(&self) -> Option<&AssumptionCheck> {
        self.failures().next()
    }

    pub fn passed_for(&self, a: Assumption) -> bool {
        self.checks
            .iter()
            .filter(|c| c.assumption == a)
            .all(|c| c.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(h: f64) -> ConvexBody {
        ConvexBody::rect(-h, -h, h, h)
    }

    fn iv(a: f64, b: f64) -> TimeInterval {
        TimeInterval::new(a, b).unwrap()
    }

    /// Independent oracle: composite quadrature of τ ↦ s(u, G(τ)) on a fine
    /// grid of left-continuous evaluations.
    fn support_quadrature(g: &GrowthProcess, a: f64, b: f64, u: Direction, n: usize) -> f64 {
        let w = (b - a) / n as f64;
        (0..n)
            .map(|k| g.value_at(a + (k as f64 + 0.5) * w).unwrap().support(u) * w)
            .sum()
    }

    #[test]
    fn constant_growth_integrates_to_scaled_bound() {
        let k = ConvexBody::regular(6, 1.3, 0.2);
        let g = GrowthProcess::constant(k.clone(), 0.0, 4.0).unwrap();
        let got = g.aumann_integral(iv(0.5, 2.5)).unwrap();
        assert!(got.hausdorff(&k.scale(2.0).unwrap()) <= 1e-12);
    }

    #[test]
    fn zero_length_integral_is_origin() {
        let g = GrowthProcess::constant(square(1.0), 0.0, 1.0).unwrap();
        assert_eq!(
            g.aumann_integral(iv(0.3, 0.3)).unwrap(),
            ConvexBody::origin()
        );
    }

    #[test]
    fn piecewise_integral_matches_support_quadrature() {
        let seg = ConvexBody::segment(Point::new(-1.0, 0.0), Point::new(1.0, 0.0));
        let g = GrowthProcess::piecewise(
            vec![0.0, 1.0, 2.0],
            vec![square(1.0), seg],
            None,
            square(1.0),
        )
        .unwrap();
        let got = g.aumann_integral(iv(0.0, 2.0)).unwrap();
        assert!(got.hausdorff(&ConvexBody::rect(-2.0, -1.0, 2.0, 1.0)) <= 1e-12);
        for u in DirectionGrid::uniform(360).iter() {
            let q = support_quadrature(&g, 0.0, 2.0, u, 400);
            assert!((got.support(u) - q).abs() <= 1e-9);
        }
    }

    #[test]
    fn value_is_left_continuous_at_breakpoints() {
        let g = GrowthProcess::piecewise(
            vec![0.0, 1.0, 2.0],
            vec![square(1.0), square(0.5)],
            Some(square(0.25)),
            square(1.0),
        )
        .unwrap();
        assert_eq!(g.value_at(0.0).unwrap(), square(0.25));
        assert_eq!(g.value_at(1.0).unwrap(), square(1.0));
        assert_eq!(g.value_at(1.0 + 1e-12).unwrap(), square(0.5));
        assert_eq!(g.value_at(2.0).unwrap(), square(0.5));
        assert!(g.value_at(2.5).is_err());
    }

    #[test]
    fn assumption_checks() {
        let k = square(1.0);
        let g = GrowthProcess::constant(k.clone(), 0.0, 1.0).unwrap();
        assert!(g.check_assumptions(&[0.0, 0.5, 1.0]).passed());

        let shifted = ConvexBody::rect(1.0, 1.0, 2.0, 2.0);
        let bad = GrowthProcess::piecewise_unchecked(
            vec![0.0, 1.0],
            vec![shifted.clone()],
            None,
            ConvexBody::rect(-3.0, -3.0, 3.0, 3.0),
        )
        .unwrap();
        let rep = bad.check_assumptions(&[0.5]);
        assert!(!rep.passed_for(Assumption::OriginInGrowth));
        assert!(rep.passed_for(Assumption::BoundedByK));
        assert!(matches!(
            GrowthProcess::piecewise(vec![0.0, 1.0], vec![shifted], None, square(3.0)),
            Err(GrowthError::AssumptionViolated {
                assumption: Assumption::OriginInGrowth,
                ..
            })
        ));

        let big = square(2.0);
        let outside = GrowthProcess::piecewise_unchecked(
            vec![0.0, 1.0, 2.0],
            vec![square(0.5), big],
            None,
            k,
        )
        .unwrap();
        let rep = outside.check_assumptions(&[0.5, 1.5]);
        let f = rep.first_failure().unwrap();
        assert_eq!(f.assumption, Assumption::BoundedByK);
        assert_eq!(f.time, 1.5);
        assert!(matches!(
            outside.aumann_integral(iv(0.0, 2.0)),
            Err(GrowthError::AssumptionViolated {
                assumption: Assumption::BoundedByK,
                ..
            })
        ));
    }

    #[test]
    fn structural_errors() {
        assert_eq!(
            GrowthProcess::piecewise(vec![0.0], vec![], None, square(1.0)).unwrap_err(),
            GrowthError::BadBreakpoints
        );
        assert_eq!(
            GrowthProcess::piecewise(
                vec![0.0, 1.0, 1.0],
                vec![square(1.0), square(1.0)],
                None,
                square(1.0)
            )
            .unwrap_err(),
            GrowthError::BadBreakpoints
        );
        assert!(matches!(
            GrowthProcess::piecewise(
                vec![0.0, 1.0],
                vec![square(1.0), square(1.0)],
                None,
                square(1.0)
            ),
            Err(GrowthError::PieceCount {
                expected: 1,
                got: 2
            })
        ));
        assert!(TimeInterval::new(1.0, 0.0).is_err());
        let g = GrowthProcess::constant(square(1.0), 0.0, 1.0).unwrap();
        assert!(matches!(
            g.aumann_integral(iv(0.0, 2.0)),
            Err(GrowthError::OutsideDomain { .. })
        ));
    }

    #[test]
    fn monotone_check_examples() {
        let k = ConvexBody::regular(5, 1.0, 0.0);
        let g = GrowthProcess::constant(k, 0.0, 3.0).unwrap();
        assert!(g
            .integral_monotone_check(iv(0.5, 1.5), iv(0.5, 1.5))
            .unwrap());
        assert!(g
            .integral_monotone_check(iv(0.0, 1.0), iv(0.0, 2.0))
            .unwrap());
        assert!(matches!(
            g.integral_monotone_check(iv(0.0, 2.0), iv(0.5, 1.5)),
            Err(GrowthError::NotNested { .. })
        ));
    }

    #[test]
    fn sampled_integral_approximates_radius_integral() {
        // G(t) = r(t) P with r(t) = 1 / (1 + t): exact integral ln(1 + b) - ln(1 + a) times P
        let p = ConvexBody::ball_approx(24, 1.0);
        let pp = p.clone();
        let g = GrowthProcess::sampled(
            0.0,
            2.0,
            move |t| pp.scale(1.0 / (1.0 + t)).unwrap(),
            p.clone(),
            Some(1.0),
        )
        .unwrap();
        assert!(!g.is_exact());
        let got = g.aumann_integral(iv(0.0, 2.0)).unwrap();
        let exact = p.scale(3f64.ln()).unwrap();
        // midpoint rule error plus reconstruction over-approximation
        let quad_err = 2.0 * p.hausdorff_norm() * (2.0 / 256.0f64).powi(2) * 2.0 / 24.0;
        let bound = quad_err + g.reconstruction_error_bound(iv(0.0, 2.0)) + 1e-9;
        assert!(
            got.hausdorff(&exact) <= bound,
            "{} > {}",
            got.hausdorff(&exact),
            bound
        );
        assert!(got.contains_point(Point::ORIGIN));
    }
}
