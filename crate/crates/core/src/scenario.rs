//! Reproducible scenarios: a JSON config naming the observation window, the
//! time interval, a seed, a nucleation law and a growth law.
//!
//! Random draws use ChaCha8 with explicit streams: stream 0 draws the event
//! count, stream `i + 1` draws everything about event `i`, and the growth
//! sampler uses stream [`GROWTH_STREAM`]. Each event is therefore generated
//! independently of the others, so sampling order has no effect on results.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::convex::{ConvexBody, Point};
use crate::engine::{BirthEvent, BirthSchedule, EngineError};
use crate::growth::{GrowthError, GrowthProcess};

pub const GROWTH_STREAM: u64 = 1 << 40;
const COUNT_STREAM: u64 = 0;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read scenario file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid scenario JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("intensity must be finite and non-negative, got {0}")]
    NegativeIntensity(f64),
    #[error("the growth bound must contain the origin")]
    BoundMissesOrigin,
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Growth(#[from] GrowthError),
}

/// Axis-aligned observation window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub min: Point,
    pub max: Point,
}

impl Window {
    pub fn area(&self) -> f64 {
        (self.max.x - self.min.x) * (self.max.y - self.min.y)
    }

    pub fn is_valid(&self) -> bool {
        self.min.is_finite()
            && self.max.is_finite()
            && self.max.x > self.min.x
            && self.max.y > self.min.y
    }
}

/// Temporal nucleation intensity per unit area.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Intensity {
    Constant(f64),
    /// `values[j]` on `[breakpoints[j], breakpoints[j+1])`; zero outside.
    Piecewise {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
}

impl Intensity {
    fn validate(&self) -> Result<(), ScenarioError> {
        match self {
            Intensity::Constant(l) => check_rate(*l),
            Intensity::Piecewise {
                breakpoints,
                values,
            } => {
                if breakpoints.len() != values.len() + 1
                    || breakpoints
                        .windows(2)
                        .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
                {
                    return Err(ScenarioError::Invalid(
                        "piecewise intensity needs increasing breakpoints and one value per interval".into(),
                    ));
                }
                values.iter().try_for_each(|&l| check_rate(l))
            }
        }
    }

    pub fn at(&self, t: f64) -> f64 {
        match self {
            Intensity::Constant(l) => *l,
            Intensity::Piecewise {
                breakpoints,
                values,
            } => {
                let j = breakpoints.partition_point(|&b| b <= t);
                if j == 0 || j > values.len() {
                    0.0
                } else {
                    values[j - 1]
                }
            }
        }
    }

    pub fn max(&self) -> f64 {
        match self {
            Intensity::Constant(l) => *l,
            Intensity::Piecewise { values, .. } => values.iter().copied().fold(0.0, f64::max),
        }
    }
}

fn check_rate(l: f64) -> Result<(), ScenarioError> {
    if l < 0.0 || !l.is_finite() {
        return Err(ScenarioError::NegativeIntensity(l));
    }
    Ok(())
}

/// Poisson nucleation, uniform in space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NucleationSpec {
    pub intensity: Intensity,
    /// germ shape, translated to each sampled location; a point by default
    #[serde(default = "ConvexBody::origin")]
    pub germ: ConvexBody,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BirthsSpec {
    Poisson(NucleationSpec),
    Events { events: Vec<BirthEvent> },
}

/// Radius laws for a growing ball approximation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum RadiusLaw {
    /// `r`
    Constant { r: f64 },
    /// `r0 / (1 + rate (t - t0))`
    Decay { r0: f64, rate: f64 },
    /// `r0 exp(-rate (t - t0))`
    ExpDecay { r0: f64, rate: f64 },
}

impl RadiusLaw {
    pub fn radius(&self, t0: f64, t: f64) -> f64 {
        let s = t - t0;
        match *self {
            RadiusLaw::Constant { r } => r,
            RadiusLaw::Decay { r0, rate } => r0 / (1.0 + rate * s),
            RadiusLaw::ExpDecay { r0, rate } => r0 * (-rate * s).exp(),
        }
    }

    /// Supremum over `s ≥ 0` and Lipschitz constant of the radius.
    fn sup_and_lipschitz(&self) -> (f64, f64) {
        match *self {
            RadiusLaw::Constant { r } => (r, 0.0),
            RadiusLaw::Decay { r0, rate } | RadiusLaw::ExpDecay { r0, rate } => (r0, r0 * rate),
        }
    }

    fn validate(&self) -> Result<(), ScenarioError> {
        let ok = match *self {
            RadiusLaw::Constant { r } => r >= 0.0 && r.is_finite(),
            RadiusLaw::Decay { r0, rate } | RadiusLaw::ExpDecay { r0, rate } => {
                r0 >= 0.0 && r0.is_finite() && rate >= 0.0 && rate.is_finite()
            }
        };
        if !ok {
            return Err(ScenarioError::Invalid(format!(
                "invalid radius law {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomGrowthKind {
    Constant,
    PiecewiseRandom,
    ShrinkingAnisotropic,
}

fn default_pieces() -> usize {
    4
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GrowthSpec {
    /// Explicit piecewise-constant path.
    Piecewise {
        breakpoints: Vec<f64>,
        pieces: Vec<ConvexBody>,
        #[serde(default)]
        initial: Option<ConvexBody>,
        bound: ConvexBody,
    },
    /// Regular polygon with `sides` sides and apothem given by a radius law;
    /// integrals by quadrature.
    BallApprox { sides: usize, radius: RadiusLaw },
    /// Random piecewise-constant path inside `bound`.
    Random {
        model: RandomGrowthKind,
        bound: ConvexBody,
        #[serde(default = "default_pieces")]
        pieces: usize,
    },
    /// `G ≡ {0}`.
    Null,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub window: Window,
    pub t0: f64,
    #[serde(rename = "T")]
    pub t_end: f64,
    pub seed: u64,
    pub births: BirthsSpec,
    pub growth: GrowthSpec,
}

/// A realized scenario: one birth schedule and one growth path.
#[derive(Clone, Debug)]
pub struct Realization {
    pub schedule: BirthSchedule,
    pub growth: GrowthProcess,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let s: Scenario = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !self.window.is_valid() {
            return Err(ScenarioError::Invalid(
                "window must have positive width and height".into(),
            ));
        }
        if !(self.t0.is_finite() && self.t_end.is_finite() && self.t0 < self.t_end) {
            return Err(ScenarioError::Invalid("need finite t0 < T".into()));
        }
        match &self.births {
            BirthsSpec::Poisson(spec) => spec.intensity.validate()?,
            BirthsSpec::Events { events } => {
                if let Some(e) = events
                    .iter()
                    .find(|e| !(e.time >= self.t0 && e.time <= self.t_end))
                {
                    return Err(ScenarioError::Invalid(format!(
                        "event time {} outside [t0, T]",
                        e.time
                    )));
                }
            }
        }
        match &self.growth {
            GrowthSpec::BallApprox { sides, radius } => {
                if *sides < 3 {
                    return Err(ScenarioError::Invalid(
                        "ball_approx needs at least 3 sides".into(),
                    ));
                }
                radius.validate()?;
            }
            GrowthSpec::Random { bound, pieces, .. } => {
                if *pieces == 0 {
                    return Err(ScenarioError::Invalid(
                        "random growth needs at least one piece".into(),
                    ));
                }
                if !bound.contains_point(Point::ORIGIN) {
                    return Err(ScenarioError::BoundMissesOrigin);
                }
            }
            GrowthSpec::Piecewise { .. } | GrowthSpec::Null => {}
        }
        Ok(())
    }

    /// Draws the birth schedule and the growth path for this seed. Growth
    /// hypotheses are enforced.
    pub fn realize(&self) -> Result<Realization, ScenarioError> {
        self.realize_inner(true)
    }

    /// As [`Scenario::realize`] but an explicit piecewise growth violating
    /// the hypotheses is still built, so that the violation can be reported.
    pub fn realize_unchecked(&self) -> Result<Realization, ScenarioError> {
        self.realize_inner(false)
    }

    fn realize_inner(&self, checked: bool) -> Result<Realization, ScenarioError> {
        self.validate()?;
        let schedule = match &self.births {
            BirthsSpec::Poisson(spec) => {
                sample_births(spec, &self.window, self.t0, self.t_end, self.seed)?
            }
            BirthsSpec::Events { events } => {
                BirthSchedule::new(self.t0, self.t_end, events.clone())?
            }
        };
        let growth = match &self.growth {
            GrowthSpec::Piecewise {
                breakpoints,
                pieces,
                initial,
                bound,
            } => {
                let (b, p, i, k) = (
                    breakpoints.clone(),
                    pieces.clone(),
                    initial.clone(),
                    bound.clone(),
                );
                if checked {
                    GrowthProcess::piecewise(b, p, i, k)?
                } else {
                    GrowthProcess::piecewise_unchecked(b, p, i, k)?
                }
            }
            GrowthSpec::BallApprox { sides, radius } => {
                ball_growth(*sides, *radius, self.t0, self.t_end)?
            }
            GrowthSpec::Random {
                model,
                bound,
                pieces,
            } => sample_growth(*model, bound, *pieces, self.t0, self.t_end, self.seed)?,
            GrowthSpec::Null => GrowthProcess::null(self.t0, self.t_end)?,
        };
        Ok(Realization { schedule, growth })
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Poisson nucleation on `window × [t0, t_end]`. Non-constant intensities
/// are handled by thinning a homogeneous process at the maximal rate.
pub fn sample_births(
    spec: &NucleationSpec,
    window: &Window,
    t0: f64,
    t_end: f64,
    seed: u64,
) -> Result<BirthSchedule, ScenarioError> {
    spec.intensity.validate()?;
    if !window.is_valid() {
        return Err(ScenarioError::Invalid(
            "window must have positive width and height".into(),
        ));
    }
    let lmax = spec.intensity.max();
    let mean = lmax * window.area() * (t_end - t0);
    if mean == 0.0 {
        return Ok(BirthSchedule::empty(t0, t_end)?);
    }
    let poisson = Poisson::new(mean).map_err(|e| ScenarioError::Invalid(e.to_string()))?;
    let n = poisson.sample(&mut stream_rng(seed, COUNT_STREAM)) as u64;
    let thinned = !matches!(spec.intensity, Intensity::Constant(_));
    let mut events = Vec::with_capacity(n as usize);
    for i in 0..n {
        let mut rng = stream_rng(seed, i + 1);
        let time = t0 + (t_end - t0) * rng.random::<f64>();
        let x = window.min.x + (window.max.x - window.min.x) * rng.random::<f64>();
        let y = window.min.y + (window.max.y - window.min.y) * rng.random::<f64>();
        let keep = rng.random::<f64>();
        if thinned && keep * lmax >= spec.intensity.at(time) {
            continue;
        }
        events.push(BirthEvent {
            time,
            germ: spec.germ.translate(Point::new(x, y)),
        });
    }
    Ok(BirthSchedule::new(t0, t_end, events)?)
}

/// Random piecewise-constant growth inside `bound`; every piece contains the
/// origin and lies in `bound`.
pub fn sample_growth(
    kind: RandomGrowthKind,
    bound: &ConvexBody,
    pieces: usize,
    t0: f64,
    t_end: f64,
    seed: u64,
) -> Result<GrowthProcess, ScenarioError> {
    if !bound.contains_point(Point::ORIGIN) {
        return Err(ScenarioError::BoundMissesOrigin);
    }
    if kind == RandomGrowthKind::Constant {
        return Ok(GrowthProcess::constant(bound.clone(), t0, t_end)?);
    }
    let pieces = pieces.max(1);
    let mut rng = stream_rng(seed, GROWTH_STREAM);
    let mut cuts: Vec<f64> = (1..pieces)
        .map(|_| t0 + (t_end - t0) * rng.random::<f64>())
        .collect();
    cuts.sort_by(f64::total_cmp);
    let mut breakpoints = vec![t0];
    breakpoints.extend(cuts);
    breakpoints.push(t_end);
    breakpoints.dedup();
    let n = breakpoints.len() - 1;

    let squeeze = |sx: f64, sy: f64| -> Result<ConvexBody, ScenarioError> {
        let scaled = bound.scale_xy(sx, sy).map_err(GrowthError::from)?;
        Ok(bound.intersect(&scaled).unwrap_or_else(ConvexBody::origin))
    };
    let bodies = match kind {
        RandomGrowthKind::PiecewiseRandom => (0..n)
            .map(|_| {
                let sx = rng.random_range(0.2..=1.0);
                let sy = rng.random_range(0.2..=1.0);
                squeeze(sx, sy)
            })
            .collect::<Result<Vec<_>, _>>()?,
        RandomGrowthKind::ShrinkingAnisotropic => {
            // independent non-increasing scale sequences per axis
            let (mut sx, mut sy) = (1.0, 1.0);
            let mut out = Vec::with_capacity(n);
            for _ in 0..n {
                out.push(squeeze(sx, sy)?);
                sx *= rng.random_range(0.5..=1.0);
                sy *= rng.random_range(0.8..=1.0);
            }
            out
        }
        RandomGrowthKind::Constant => unreachable!(),
    };
    Ok(GrowthProcess::piecewise(
        breakpoints,
        bodies,
        None,
        bound.clone(),
    )?)
}

/// `G(t)` = regular `sides`-gon with apothem `radius(t)`.
pub fn ball_growth(
    sides: usize,
    law: RadiusLaw,
    t0: f64,
    t_end: f64,
) -> Result<GrowthProcess, ScenarioError> {
    law.validate()?;
    let (sup, lip) = law.sup_and_lipschitz();
    let bound = ConvexBody::ball_approx(sides, sup);
    // the circumradius of a regular polygon is its apothem / cos(π/n)
    let lipschitz = lip / (std::f64::consts::PI / sides as f64).cos();
    Ok(GrowthProcess::sampled(
        t0,
        t_end,
        move |t| ConvexBody::ball_approx(sides, law.radius(t0, t)),
        bound,
        Some(lipschitz),
    )?)
}

/// A random scenario for suite runs: Poisson point germs in `[0, 10]²`
/// over `[0, 1]` and one of the random growth models, all drawn from `seed`.
pub fn random_scenario(seed: u64) -> Scenario {
    let mut rng = stream_rng(seed, GROWTH_STREAM + 1);
    let rate = rng.random_range(0.02..=0.3);
    let model = match rng.random_range(0..3u32) {
        0 => RandomGrowthKind::Constant,
        1 => RandomGrowthKind::PiecewiseRandom,
        _ => RandomGrowthKind::ShrinkingAnisotropic,
    };
    let bound = match rng.random_range(0..3u32) {
        0 => ConvexBody::rect(-1.0, -0.5, 1.0, 0.5),
        1 => ConvexBody::regular(
            rng.random_range(3..=8),
            rng.random_range(0.5..=2.0),
            rng.random::<f64>(),
        ),
        _ => ConvexBody::ball_approx(16, rng.random_range(0.3..=1.5)),
    };
    let germ = if rng.random::<bool>() {
        ConvexBody::origin()
    } else {
        ConvexBody::regular(rng.random_range(3..=5), rng.random_range(0.05..=0.3), 0.0)
    };
    Scenario {
        window: Window {
            min: Point::new(0.0, 0.0),
            max: Point::new(10.0, 10.0),
        },
        t0: 0.0,
        t_end: 1.0,
        seed,
        births: BirthsSpec::Poisson(NucleationSpec {
            intensity: Intensity::Constant(rate),
            germ,
        }),
        growth: GrowthSpec::Random {
            model,
            bound,
            pieces: rng.random_range(1..=5),
        },
    }
}
