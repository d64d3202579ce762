//! Finite unions of convex bodies.
//!
//! A [`Region`] keeps its components sorted by their canonical vertex lists
//! and pruned by pairwise dominance: no component lies inside another single
//! component. A component covered only jointly by several others is kept.
//!
//! Distances between regions are computed by a certified branch-and-bound
//! over convex cells of the source components. The distance to a union,
//! `x ↦ min_j d(x, B_j)`, is 1-Lipschitz, and each `d(·, B_j)` is convex, so
//! on a convex cell its maximum sits at a cell vertex. That yields an upper
//! bound per cell; vertex evaluations give the lower bound. Cells are split
//! until the best upper bound is within `δ` of the best lower bound.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::convex::{clip_halfplane, cmp_bodies, ConvexBody, Point};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegionError {
    #[error("sample spacing must be positive and finite, got {0}")]
    NonPositiveSpacing(f64),
    #[error("subset tolerance must be non-negative, got {0}")]
    NegativeTolerance(f64),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "RegionJson", into = "RegionJson")]
pub struct Region {
    components: Vec<ConvexBody>,
}

/// Wire form: `{"components": [<polygon>, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegionJson {
    pub components: Vec<ConvexBody>,
}

impl From<RegionJson> for Region {
    fn from(r: RegionJson) -> Self {
        Region::from_components(r.components)
    }
}

impl From<Region> for RegionJson {
    fn from(r: Region) -> Self {
        RegionJson {
            components: r.components,
        }
    }
}

impl From<ConvexBody> for Region {
    fn from(b: ConvexBody) -> Self {
        Region {
            components: vec![b],
        }
    }
}

impl Region {
    /// The empty set; only used before the first birth.
    pub fn empty() -> Self {
        Region {
            components: Vec::new(),
        }
    }

    pub fn from_components(components: Vec<ConvexBody>) -> Self {
        Region {
            components: prune(components),
        }
    }

    pub fn components(&self) -> &[ConvexBody] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn union(&self, other: &Region) -> Region {
        let mut all = self.components.clone();
        all.extend(other.components.iter().cloned());
        Region::from_components(all)
    }

    /// `R ⊕ g`, component by component.
    pub fn dilate(&self, g: &ConvexBody) -> Region {
        Region::from_components(self.components.iter().map(|c| c.minkowski_sum(g)).collect())
    }

    pub fn distance_to_point(&self, p: Point) -> f64 {
        self.components
            .iter()
            .map(|c| c.point_distance(p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains_point(&self, p: Point) -> bool {
        self.components.iter().any(|c| c.contains_point(p))
    }

    /// `(min, max)` corners of the bounding box; `None` when empty.
    pub fn bounding_box(&self) -> Option<(Point, Point)> {
        let mut it = self.components.iter().map(|c| c.bounding_box());
        let first = it.next()?;
        Some(it.fold(first, |(lo, hi), (l, h)| {
            (
                Point::new(lo.x.min(l.x), lo.y.min(l.y)),
                Point::new(hi.x.max(h.x), hi.y.max(h.y)),
            )
        }))
    }

    /// Diagonal of the bounding box (0 when empty).
    pub fn extent(&self) -> f64 {
        self.bounding_box().map_or(0.0, |(lo, hi)| lo.dist(hi))
    }

    /// `sup_{x ∈ self} d(x, other)` to within `delta`: the returned `v`
    /// satisfies `v ≤ true ≤ v + delta`.
    pub fn directed_hausdorff(&self, other: &Region, delta: f64) -> Result<f64, RegionError> {
        check_spacing(delta)?;
        Ok(match branch_and_bound(self, other, delta, 0.0, None) {
            Outcome::Value(v) => v,
            Outcome::Decided(_) => unreachable!("no threshold given"),
        })
    }

    /// As [`Region::directed_hausdorff`] with a mixed tolerance: the returned
    /// `v` satisfies `v ≤ true ≤ v + max(delta, rel·v)`.
    pub fn directed_hausdorff_rel(
        &self,
        other: &Region,
        delta: f64,
        rel: f64,
    ) -> Result<f64, RegionError> {
        check_spacing(delta)?;
        if rel < 0.0 || !rel.is_finite() {
            return Err(RegionError::NonPositiveSpacing(rel));
        }
        Ok(match branch_and_bound(self, other, delta, rel, None) {
            Outcome::Value(v) => v,
            Outcome::Decided(_) => unreachable!("no threshold given"),
        })
    }

    /// Two-sided Hausdorff distance, same error bound as
    /// [`Region::directed_hausdorff`].
    pub fn hausdorff(&self, other: &Region, delta: f64) -> Result<f64, RegionError> {
        Ok(self
            .directed_hausdorff(other, delta)?
            .max(other.directed_hausdorff(self, delta)?))
    }

    /// `self ⊆ other` up to `tol`.
    ///
    /// Fast path: every component sits inside a single component of `other`.
    /// Otherwise true iff the directed distance measured at spacing `tol/2`
    /// is at most `tol`; with `tol = 0` only the fast path applies.
    pub fn is_subset(&self, other: &Region, tol: f64) -> Result<bool, RegionError> {
        if tol < 0.0 || tol.is_nan() {
            return Err(RegionError::NegativeTolerance(tol));
        }
        let fast = self
            .components
            .iter()
            .all(|c| other.components.iter().any(|o| o.contains_convex(c)));
        if fast {
            return Ok(true);
        }
        if tol == 0.0 || other.is_empty() {
            return Ok(false);
        }
        Ok(
            match branch_and_bound(self, other, tol / 2.0, 0.0, Some(tol)) {
                Outcome::Decided(b) => b,
                Outcome::Value(v) => v <= tol,
            },
        )
    }
}

fn check_spacing(delta: f64) -> Result<(), RegionError> {
    if delta <= 0.0 || !delta.is_finite() {
        return Err(RegionError::NonPositiveSpacing(delta));
    }
    Ok(())
}

fn prune(mut comps: Vec<ConvexBody>) -> Vec<ConvexBody> {
    comps.sort_by(cmp_bodies);
    comps.dedup();
    let n = comps.len();
    let mut keep = vec![true; n];
    for i in 0..n {
        for j in 0..n {
            if i == j || !keep[j] {
                continue;
            }
            if comps[j].contains_convex(&comps[i]) {
                // mutual containment: equal within tolerance, keep the earlier one
                if j < i || !comps[i].contains_convex(&comps[j]) {
                    keep[i] = false;
                    break;
                }
            }
        }
    }
    comps
        .into_iter()
        .zip(keep)
        .filter_map(|(c, k)| k.then_some(c))
        .collect()
}

enum Outcome {
    Value(f64),
    Decided(bool),
}

struct Cell {
    verts: Vec<Point>,
    ub: f64,
}

impl PartialEq for Cell {
    fn eq(&self, o: &Self) -> bool {
        self.ub.total_cmp(&o.ub) == Ordering::Equal
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Cell {
    fn cmp(&self, o: &Self) -> Ordering {
        self.ub.total_cmp(&o.ub)
    }
}

struct Target<'a> {
    comps: &'a [ConvexBody],
    boxes: Vec<(Point, Point)>,
}

impl<'a> Target<'a> {
    fn new(r: &'a Region) -> Self {
        Target {
            comps: &r.components,
            boxes: r.components.iter().map(|c| c.bounding_box()).collect(),
        }
    }

    /// `min_j d(p, B_j)`.
    fn dist(&self, p: Point) -> f64 {
        let mut best = f64::INFINITY;
        for (c, b) in self.comps.iter().zip(&self.boxes) {
            if box_distance(p, *b) >= best {
                continue;
            }
            best = best.min(c.point_distance(p));
            if best == 0.0 {
                break;
            }
        }
        best
    }

    /// `min_j max_{v} d(v, B_j)`: the supremum over the cell of the distance
    /// to the single best component.
    fn cell_upper(&self, verts: &[Point], (lo, hi): (Point, Point)) -> f64 {
        let mut best = f64::INFINITY;
        for (c, b) in self.comps.iter().zip(&self.boxes) {
            if box_box_distance((lo, hi), *b) >= best {
                continue;
            }
            let mut worst: f64 = 0.0;
            for &v in verts {
                worst = worst.max(c.point_distance(v));
                if worst >= best {
                    break;
                }
            }
            best = best.min(worst);
            if best == 0.0 {
                break;
            }
        }
        best
    }
}

fn box_distance(p: Point, (lo, hi): (Point, Point)) -> f64 {
    let dx = (lo.x - p.x).max(0.0).max(p.x - hi.x);
    let dy = (lo.y - p.y).max(0.0).max(p.y - hi.y);
    dx.hypot(dy)
}

fn box_box_distance((alo, ahi): (Point, Point), (blo, bhi): (Point, Point)) -> f64 {
    let dx = (blo.x - ahi.x).max(0.0).max(alo.x - bhi.x);
    let dy = (blo.y - ahi.y).max(0.0).max(alo.y - bhi.y);
    dx.hypot(dy)
}

fn bbox(verts: &[Point]) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for v in verts {
        lo.x = lo.x.min(v.x);
        lo.y = lo.y.min(v.y);
        hi.x = hi.x.max(v.x);
        hi.y = hi.y.max(v.y);
    }
    (lo, hi)
}

fn branch_and_bound(
    a: &Region,
    b: &Region,
    delta: f64,
    rel: f64,
    threshold: Option<f64>,
) -> Outcome {
    if a.is_empty() {
        return Outcome::Value(0.0);
    }
    if b.is_empty() {
        return Outcome::Value(f64::INFINITY);
    }
    let target = Target::new(b);
    let mut best_lb: f64 = 0.0;
    let mut heap = BinaryHeap::new();
    let push = |verts: Vec<Point>, best_lb: &mut f64, heap: &mut BinaryHeap<Cell>| {
        for &v in &verts {
            *best_lb = best_lb.max(target.dist(v));
        }
        let ub = target.cell_upper(&verts, bbox(&verts));
        heap.push(Cell { verts, ub });
    };
    for c in &a.components {
        push(c.vertices().to_vec(), &mut best_lb, &mut heap);
    }
    while let Some(cell) = heap.pop() {
        if let Some(t) = threshold {
            if best_lb > t {
                return Outcome::Decided(false);
            }
            if cell.ub <= t {
                return Outcome::Decided(true);
            }
        }
        let slack = delta.max(rel * best_lb);
        if cell.ub <= best_lb + slack {
            break;
        }
        let (lo, hi) = bbox(&cell.verts);
        let (w, h) = (hi.x - lo.x, hi.y - lo.y);
        if w.max(h) <= slack * 1e-3 {
            continue;
        }
        let (n, mid) = if w >= h {
            (Point::new(1.0, 0.0), 0.5 * (lo.x + hi.x))
        } else {
            (Point::new(0.0, 1.0), 0.5 * (lo.y + hi.y))
        };
        for (nn, cc) in [(n, mid), (-n, -mid)] {
            let half = clip_halfplane(&cell.verts, nn, cc, 0.0);
            if !half.is_empty() {
                push(half, &mut best_lb, &mut heap);
            }
        }
    }
    Outcome::Value(best_lb)
}
