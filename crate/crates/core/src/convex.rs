//! Compact convex polygons in the plane and their support-function calculus.
//!
//! A [`ConvexBody`] is stored as its vertex cycle in canonical form:
//! counter-clockwise, strictly convex (no repeated or collinear consecutive
//! vertices), starting at the lowest vertex (leftmost among ties). Points and
//! segments are legal degenerate bodies with one and two vertices.
//!
//! Every operation here is exact for polygons up to the single geometric
//! tolerance [`EPS_GEOM`], which governs vertex dedup, collinearity and
//! containment.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance (length units) for collinearity, containment and vertex dedup.
pub const EPS_GEOM: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("a convex body needs at least one vertex")]
    NoVertices,
    #[error("non-finite coordinate in polygon input")]
    NonFinite,
    #[error("vertices are not in convex position")]
    NotConvex,
    #[error("vertices are ordered clockwise, expected counter-clockwise")]
    Clockwise,
    #[error("scale factor must be a finite non-negative number, got {0}")]
    NegativeScale(f64),
    #[error("direction grid is empty")]
    EmptyGrid,
    #[error("support samples need at least 3 directions, got {0}")]
    TooFewDirections(usize),
    #[error("support samples leave an angular gap of {0:.6} rad >= pi; the halfplane intersection is unbounded")]
    Unbounded(f64),
    #[error("support samples are inconsistent: the halfplane intersection is empty")]
    EmptyIntersection,
    #[error("zero-length direction vector")]
    ZeroDirection,
}

/// A point (or free vector) in the plane, serialized as `[x, y]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product; positive when `o` is
    /// counter-clockwise from `self`.
    #[inline]
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Angle in `[0, 2π)`.
    #[inline]
    pub fn angle(self) -> f64 {
        let a = self.y.atan2(self.x);
        if a < 0.0 {
            a + TAU
        } else {
            a
        }
    }
}

impl From<[f64; 2]> for Point {
    fn from(a: [f64; 2]) -> Self {
        Point::new(a[0], a[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Unit vector of the dual unit ball (the unit circle in the plane).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction(Point);

impl Direction {
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Direction(Point::new(c, s))
    }

    /// Normalizes `v`; fails on the zero vector.
    pub fn new(v: Point) -> Result<Self, GeometryError> {
        let n = v.norm();
        if n <= 0.0 || !n.is_finite() {
            return Err(GeometryError::ZeroDirection);
        }
        Ok(Direction(v * (1.0 / n)))
    }

    #[inline]
    pub fn vector(self) -> Point {
        self.0
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.0.angle()
    }
}

/// A compact convex polygon, possibly degenerate (point or segment).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolygonJson", into = "PolygonJson")]
pub struct ConvexBody {
    vertices: Vec<Point>,
}

/// Wire form of a polygon: `{"vertices": [[x, y], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolygonJson {
    pub vertices: Vec<Point>,
}

impl TryFrom<PolygonJson> for ConvexBody {
    type Error = GeometryError;
    fn try_from(p: PolygonJson) -> Result<Self, Self::Error> {
        ConvexBody::from_vertices(p.vertices)
    }
}

impl From<ConvexBody> for PolygonJson {
    fn from(b: ConvexBody) -> Self {
        PolygonJson {
            vertices: b.vertices,
        }
    }
}

impl fmt::Display for ConvexBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({}, {})", v.x, v.y)?;
        }
        write!(f, "]")
    }
}

impl ConvexBody {
    /// The singleton `{p}`.
    pub fn point(p: Point) -> Self {
        Self { vertices: vec![p] }
    }

    /// The singleton `{0}`, neutral element of the Minkowski sum.
    pub fn origin() -> Self {
        Self::point(Point::ORIGIN)
    }

    pub fn segment(a: Point, b: Point) -> Self {
        Self::hull(&[a, b]).expect("two finite points")
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self::hull(&[
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ])
        .expect("finite rectangle")
    }

    /// Regular `n`-gon with the given circumradius centred at the origin,
    /// first vertex at angle `phase`.
    pub fn regular(n: usize, circumradius: f64, phase: f64) -> Self {
        let pts: Vec<Point> = (0..n.max(1))
            .map(|k| {
                let th = phase + TAU * k as f64 / n as f64;
                Point::new(circumradius * th.cos(), circumradius * th.sin())
            })
            .collect();
        Self::hull(&pts).expect("finite regular polygon")
    }

    /// Regular `n`-gon circumscribing the disk of radius `r` (apothem `r`),
    /// with one edge normal along the x axis.
    pub fn ball_approx(n: usize, r: f64) -> Self {
        let n = n.max(3);
        let half = PI / n as f64;
        Self::regular(n, r / half.cos(), half)
    }

    /// Convex hull of a finite point set.
    pub fn hull(points: &[Point]) -> Result<Self, GeometryError> {
        if points.is_empty() {
            return Err(GeometryError::NoVertices);
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        pts.dedup();
        if pts.len() == 1 {
            return Ok(Self::point(pts[0]));
        }

        // exact sign here: a tolerance would let a point sorted after a corner
        // (x equal up to an ulp) evict that corner; near-collinear vertices
        // are removed afterwards by the cycle cleanup
        let keep_turn = |o: Point, a: Point, b: Point| (a - o).cross(b - o) > 0.0;
        let mut lower: Vec<Point> = Vec::with_capacity(pts.len());
        for &p in &pts {
            while lower.len() >= 2 && !keep_turn(lower[lower.len() - 2], lower[lower.len() - 1], p)
            {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Point> = Vec::with_capacity(pts.len());
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && !keep_turn(upper[upper.len() - 2], upper[upper.len() - 1], p)
            {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Ok(Self::canonical(cleanup_cycle(lower)))
    }

    /// Validates a counter-clockwise vertex cycle. Duplicate and collinear
    /// vertices (within [`EPS_GEOM`]) are dropped, the cycle is rotated to
    /// canonical start; reflex or clockwise input is rejected.
    pub fn from_vertices(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        if vertices.is_empty() {
            return Err(GeometryError::NoVertices);
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let clean = cleanup_cycle(vertices);
        let hull = Self::hull(&clean)?;
        if clean.len() != hull.vertices.len() {
            return Err(GeometryError::NotConvex);
        }
        if clean.len() >= 3 && signed_area(&clean) < 0.0 {
            return Err(GeometryError::Clockwise);
        }
        let cand = Self::canonical(clean);
        let same = cand
            .vertices
            .iter()
            .zip(&hull.vertices)
            .all(|(a, b)| a.dist(*b) <= EPS_GEOM);
        if !same {
            return Err(GeometryError::NotConvex);
        }
        Ok(cand)
    }

    fn canonical(mut v: Vec<Point>) -> Self {
        let start = v
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.y.total_cmp(&b.y).then(a.x.total_cmp(&b.x)))
            .map(|(i, _)| i)
            .unwrap_or(0);
        v.rotate_left(start);
        Self { vertices: v }
    }

    #[inline]
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Always false; kept for API symmetry with `len`.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    #[inline]
    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    #[inline]
    pub fn is_segment(&self) -> bool {
        self.vertices.len() == 2
    }

    /// Edge vectors of the vertex cycle; none for a point, two for a segment.
    pub fn edges(&self) -> Vec<Point> {
        let n = self.vertices.len();
        if n < 2 {
            return Vec::new();
        }
        (0..n)
            .map(|i| self.vertices[(i + 1) % n] - self.vertices[i])
            .collect()
    }

    /// Outward unit normals of the edges (both normals for a segment).
    pub fn edge_normals(&self) -> Vec<Direction> {
        self.edges()
            .into_iter()
            .filter_map(|e| Direction::new(Point::new(e.y, -e.x)).ok())
            .collect()
    }

    /// `(min, max)` corners of the bounding box.
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(a.dist(*b));
            }
        }
        d
    }

    pub fn area(&self) -> f64 {
        if self.vertices.len() < 3 {
            0.0
        } else {
            signed_area(&self.vertices)
        }
    }

    /// `s(u, A) = max ⟨v, u⟩` over the vertices.
    pub fn support(&self, u: Direction) -> f64 {
        self.support_vec(u.vector())
    }

    pub(crate) fn support_vec(&self, u: Point) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn support_vertex(&self, u: Point) -> Point {
        let mut best = self.vertices[0];
        let mut val = best.dot(u);
        for &v in &self.vertices[1..] {
            let d = v.dot(u);
            if d > val {
                val = d;
                best = v;
            }
        }
        best
    }

    /// Hausdorff norm `‖A‖_h = H(A, {0})`: distance of the farthest point
    /// from the origin.
    pub fn hausdorff_norm(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn translate(&self, by: Point) -> Self {
        Self {
            vertices: self.vertices.iter().map(|&v| v + by).collect(),
        }
    }

    /// `αA`. Zero yields `{0}`.
    pub fn scale(&self, alpha: f64) -> Result<Self, GeometryError> {
        if alpha < 0.0 || !alpha.is_finite() {
            return Err(GeometryError::NegativeScale(alpha));
        }
        if alpha == 0.0 {
            return Ok(Self::origin());
        }
        if alpha == 1.0 {
            return Ok(self.clone());
        }
        let scaled: Vec<Point> = self.vertices.iter().map(|&v| v * alpha).collect();
        // tiny factors can merge vertices below tolerance
        Ok(Self::canonical(cleanup_cycle(scaled)))
    }

    /// Image under the diagonal map `(x, y) ↦ (sx·x, sy·y)`, `sx, sy ≥ 0`.
    pub fn scale_xy(&self, sx: f64, sy: f64) -> Result<Self, GeometryError> {
        for s in [sx, sy] {
            if s < 0.0 || !s.is_finite() {
                return Err(GeometryError::NegativeScale(s));
            }
        }
        let pts: Vec<Point> = self
            .vertices
            .iter()
            .map(|v| Point::new(v.x * sx, v.y * sy))
            .collect();
        Self::hull(&pts)
    }

    /// Vertices and edge angles rotated to start at the edge of least angle.
    fn rotated_to_min_angle_edge(&self) -> (Vec<Point>, Vec<f64>) {
        let mut ang: Vec<f64> = self.edges().iter().map(|e| e.angle()).collect();
        let k = ang
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.total_cmp(y.1))
            .map_or(0, |(i, _)| i);
        let mut v = self.vertices.clone();
        v.rotate_left(k);
        ang.rotate_left(k);
        (v, ang)
    }

    /// Minkowski sum by merging the two edge sequences in angular order.
    pub fn minkowski_sum(&self, other: &ConvexBody) -> ConvexBody {
        if other.is_point() {
            return self.translate(other.vertices[0]);
        }
        if self.is_point() {
            return other.translate(self.vertices[0]);
        }
        // Each cycle starts at its smallest edge angle so both angle sequences
        // increase; the canonical start alone does not ensure this when the
        // bottom edge slopes down by rounding noise.
        let (a, ang_a) = self.rotated_to_min_angle_edge();
        let (b, ang_b) = other.rotated_to_min_angle_edge();
        let (n, m) = (a.len(), b.len());
        let mut out = Vec::with_capacity(n + m);
        let (mut i, mut j) = (0usize, 0usize);
        out.push(a[0] + b[0]);
        while i < n || j < m {
            let take_a = if i == n {
                false
            } else if j == m {
                true
            } else {
                ang_a[i] <= ang_b[j]
            };
            if take_a {
                i += 1;
            } else {
                j += 1;
            }
            out.push(a[i % n] + b[j % m]);
        }
        out.pop();
        // parallel edges leave collinear vertices behind; the hull pass removes them
        Self::hull(&out).expect("finite Minkowski vertices")
    }

    /// Euclidean distance from `p` to the body (0 inside).
    pub fn point_distance(&self, p: Point) -> f64 {
        let v = &self.vertices;
        match v.len() {
            1 => p.dist(v[0]),
            2 => segment_distance(p, v[0], v[1]),
            n => {
                let mut inside = true;
                for i in 0..n {
                    let a = v[i];
                    let b = v[(i + 1) % n];
                    if (b - a).cross(p - a) < 0.0 {
                        inside = false;
                        break;
                    }
                }
                if inside {
                    return 0.0;
                }
                (0..n)
                    .map(|i| segment_distance(p, v[i], v[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    pub fn contains_point(&self, p: Point) -> bool {
        self.point_distance(p) <= EPS_GEOM
    }

    /// `inner ⊆ self` within [`EPS_GEOM`]; by convexity it suffices to test
    /// the vertices of `inner`.
    pub fn contains_convex(&self, inner: &ConvexBody) -> bool {
        self.contains_convex_eps(inner, EPS_GEOM)
    }

    pub fn contains_convex_eps(&self, inner: &ConvexBody, eps: f64) -> bool {
        let (lo, hi) = self.bounding_box();
        let (ilo, ihi) = inner.bounding_box();
        if ilo.x < lo.x - eps || ilo.y < lo.y - eps || ihi.x > hi.x + eps || ihi.y > hi.y + eps {
            return false;
        }
        inner
            .vertices
            .iter()
            .all(|&v| self.point_distance(v) <= eps)
    }

    /// `max_{v ∈ self} d(v, other)`; exact by convexity of `d(·, other)`.
    pub fn directed_hausdorff(&self, other: &ConvexBody) -> f64 {
        self.vertices
            .iter()
            .map(|&v| other.point_distance(v))
            .fold(0.0, f64::max)
    }

    /// Exact Hausdorff distance between two convex polygons.
    pub fn hausdorff(&self, other: &ConvexBody) -> f64 {
        self.directed_hausdorff(other)
            .max(other.directed_hausdorff(self))
    }

    /// `max_u |s(u, A) − s(u, B)|` over the directions of `grid`.
    pub fn hausdorff_dual(
        &self,
        other: &ConvexBody,
        grid: &DirectionGrid,
    ) -> Result<f64, GeometryError> {
        if grid.is_empty() {
            return Err(GeometryError::EmptyGrid);
        }
        Ok(grid
            .iter()
            .map(|u| (self.support(u) - other.support(u)).abs())
            .fold(0.0, f64::max))
    }

    /// Halfplanes `n·x ≤ c` whose intersection is the body. Degenerate bodies
    /// get explicit caps so the description stays bounded.
    pub fn halfplanes(&self) -> Vec<(Point, f64)> {
        let v = &self.vertices;
        match v.len() {
            1 => {
                let p = v[0];
                vec![
                    (Point::new(1.0, 0.0), p.x),
                    (Point::new(-1.0, 0.0), -p.x),
                    (Point::new(0.0, 1.0), p.y),
                    (Point::new(0.0, -1.0), -p.y),
                ]
            }
            2 => {
                let d = v[1] - v[0];
                let u = d * (1.0 / d.norm());
                let nrm = Point::new(u.y, -u.x);
                vec![
                    (nrm, nrm.dot(v[0])),
                    (-nrm, -nrm.dot(v[0])),
                    (u, u.dot(v[1])),
                    (-u, -u.dot(v[0])),
                ]
            }
            _ => self
                .edge_normals()
                .into_iter()
                .zip(v.iter())
                .map(|(n, &p)| (n.vector(), n.vector().dot(p)))
                .collect(),
        }
    }

    /// `self ∩ other`, or `None` when they are disjoint.
    pub fn intersect(&self, other: &ConvexBody) -> Option<ConvexBody> {
        let (subject, clip) = if self.len() >= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut poly = subject.vertices.clone();
        for (n, c) in clip.halfplanes() {
            poly = clip_halfplane(&poly, n, c, EPS_GEOM);
            if poly.is_empty() {
                return None;
            }
        }
        Self::hull(&poly).ok()
    }

    /// Largest convex body with the given support bounds: the intersection of
    /// the halfplanes `{x : ⟨x, u⟩ ≤ h}`.
    pub fn from_support_samples(samples: &[(Direction, f64)]) -> Result<ConvexBody, GeometryError> {
        if samples.len() < 3 {
            return Err(GeometryError::TooFewDirections(samples.len()));
        }
        if samples.iter().any(|(_, h)| !h.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let mut angles: Vec<f64> = samples.iter().map(|(u, _)| u.angle()).collect();
        angles.sort_by(f64::total_cmp);
        let mut gap = angles[0] + TAU - angles[angles.len() - 1];
        for w in angles.windows(2) {
            gap = gap.max(w[1] - w[0]);
        }
        if gap >= PI - 1e-12 {
            return Err(GeometryError::Unbounded(gap));
        }
        // every feasible x satisfies |x| cos(gap/2) <= max h
        let hmax = samples.iter().map(|(_, h)| h.abs()).fold(0.0, f64::max);
        let r = 2.0 * hmax / (gap / 2.0).cos() + 1.0;
        let mut poly = vec![
            Point::new(-r, -r),
            Point::new(r, -r),
            Point::new(r, r),
            Point::new(-r, r),
        ];
        let mut order: Vec<usize> = (0..samples.len()).collect();
        order.sort_by(|&i, &j| samples[i].0.angle().total_cmp(&samples[j].0.angle()));
        for i in order {
            let (u, h) = samples[i];
            poly = clip_halfplane(&poly, u.vector(), h, EPS_GEOM);
            if poly.is_empty() {
                return Err(GeometryError::EmptyIntersection);
            }
        }
        Self::hull(&poly)
    }
}

/// Sutherland–Hodgman clip of a convex vertex cycle against `n·x ≤ c`,
/// keeping vertices that violate by at most `tol`.
pub(crate) fn clip_halfplane(poly: &[Point], n: Point, c: f64, tol: f64) -> Vec<Point> {
    let k = poly.len();
    if k == 0 {
        return Vec::new();
    }
    if k == 1 {
        return if n.dot(poly[0]) - c <= tol {
            poly.to_vec()
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::with_capacity(k + 2);
    for i in 0..k {
        let p = poly[i];
        let q = poly[(i + 1) % k];
        let fp = n.dot(p) - c;
        let fq = n.dot(q) - c;
        let p_in = fp <= tol;
        let q_in = fq <= tol;
        if p_in {
            out.push(p);
        }
        if p_in != q_in {
            let t = (fp / (fp - fq)).clamp(0.0, 1.0);
            out.push(p + (q - p) * t);
        }
    }
    out
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    let mut s = 0.0;
    for i in 0..n {
        s += v[i].cross(v[(i + 1) % n]);
    }
    0.5 * s
}

/// Drops cyclically repeated vertices and vertices within [`EPS_GEOM`] of
/// the chord through their neighbours.
fn cleanup_cycle(mut v: Vec<Point>) -> Vec<Point> {
    loop {
        let n = v.len();
        if n <= 1 {
            return v;
        }
        let mut drop = None;
        for i in 0..n {
            let cur = v[i];
            let next = v[(i + 1) % n];
            if cur.dist(next) <= EPS_GEOM {
                drop = Some((i + 1) % n);
                break;
            }
            if n >= 3 {
                let prev = v[(i + n - 1) % n];
                let chord = next - prev;
                let len = chord.norm();
                if len > 0.0 && chord.cross(cur - prev).abs() <= EPS_GEOM * len {
                    let t = (cur - prev).dot(chord) / (len * len);
                    // a spike (vertex beyond the chord ends) is not collinear-redundant
                    if (0.0..=1.0).contains(&t) {
                        drop = Some(i);
                        break;
                    }
                }
            }
        }
        match drop {
            Some(i) => {
                v.remove(i);
            }
            None => return v,
        }
    }
}

/// A finite set of directions on the unit circle, kept sorted by angle.
#[derive(Clone, Debug, Default)]
pub struct DirectionGrid {
    dirs: Vec<Direction>,
}

impl DirectionGrid {
    pub fn new(mut dirs: Vec<Direction>) -> Self {
        dirs.sort_by(|a, b| a.angle().total_cmp(&b.angle()));
        dirs.dedup_by(|a, b| (a.angle() - b.angle()).abs() < 1e-15);
        Self { dirs }
    }

    /// `n` equally spaced directions starting at angle 0.
    pub fn uniform(n: usize) -> Self {
        Self::new(
            (0..n)
                .map(|k| Direction::from_angle(TAU * k as f64 / n as f64))
                .collect(),
        )
    }

    pub fn with_edge_normals(mut self, bodies: &[&ConvexBody]) -> Self {
        for b in bodies {
            self.dirs.extend(b.edge_normals());
        }
        Self::new(self.dirs)
    }

    /// Directions at which `u ↦ |s(u, a) − s(u, b)|` attains its maximum:
    /// all edge normals of both bodies, plus on each arc between consecutive
    /// normals (where both support points are fixed vertices `va`, `vb`) the
    /// directions `±(va − vb)` when they fall inside the arc.
    pub fn exact_for(a: &ConvexBody, b: &ConvexBody) -> Self {
        let mut normals: Vec<f64> = a
            .edge_normals()
            .into_iter()
            .chain(b.edge_normals())
            .map(|d| d.angle())
            .collect();
        normals.sort_by(f64::total_cmp);
        normals.dedup();
        let mut dirs: Vec<Direction> = normals.iter().map(|&t| Direction::from_angle(t)).collect();
        let arcs: Vec<(f64, f64)> = if normals.is_empty() {
            vec![(0.0, TAU)]
        } else {
            let k = normals.len();
            (0..k)
                .map(|i| {
                    let lo = normals[i];
                    let hi = if i + 1 < k {
                        normals[i + 1]
                    } else {
                        normals[0] + TAU
                    };
                    (lo, hi)
                })
                .collect()
        };
        for (lo, hi) in arcs {
            let mid = Direction::from_angle(0.5 * (lo + hi)).vector();
            let w = a.support_vertex(mid) - b.support_vertex(mid);
            if w.norm() == 0.0 {
                continue;
            }
            for cand in [w, -w] {
                let mut th = cand.angle();
                if th < lo {
                    th += TAU;
                }
                if th >= lo && th <= hi {
                    dirs.push(Direction::from_angle(th));
                }
            }
        }
        Self::new(dirs)
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Direction> + '_ {
        self.dirs.iter().copied()
    }

    /// Largest angular gap between cyclically consecutive directions.
    pub fn spacing(&self) -> f64 {
        if self.dirs.is_empty() {
            return TAU;
        }
        let a: Vec<f64> = self.dirs.iter().map(|d| d.angle()).collect();
        let mut gap = a[0] + TAU - a[a.len() - 1];
        for w in a.windows(2) {
            gap = gap.max(w[1] - w[0]);
        }
        gap
    }
}

/// Orders bodies lexicographically by their canonical vertex lists.
pub(crate) fn cmp_bodies(a: &ConvexBody, b: &ConvexBody) -> Ordering {
    for (p, q) in a.vertices.iter().zip(&b.vertices) {
        let o = p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y));
        if o != Ordering::Equal {
            return o;
        }
    }
    a.vertices.len().cmp(&b.vertices.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> ConvexBody {
        ConvexBody::rect(0.0, 0.0, 1.0, 1.0)
    }

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn canonical_start_is_lowest_then_leftmost() {
        let b = ConvexBody::from_vertices(vec![
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
        ])
        .unwrap();
        assert_eq!(b.vertices()[0], Point::new(0.0, 0.0));
        assert_eq!(b, unit_square());
    }

    #[test]
    fn rejects_clockwise_and_reflex() {
        let cw = vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
        ];
        assert_eq!(ConvexBody::from_vertices(cw), Err(GeometryError::Clockwise));
        let reflex = vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(1.0, 0.5),
            Point::new(2.0, 2.0),
            Point::new(0.0, 2.0),
        ];
        assert_eq!(
            ConvexBody::from_vertices(reflex),
            Err(GeometryError::NotConvex)
        );
        assert_eq!(
            ConvexBody::from_vertices(vec![]),
            Err(GeometryError::NoVertices)
        );
    }

    #[test]
    fn pentagram_order_is_not_convex() {
        let pent = ConvexBody::regular(5, 1.0, 0.0);
        let v = pent.vertices();
        let star = vec![v[0], v[2], v[4], v[1], v[3]];
        assert_eq!(
            ConvexBody::from_vertices(star),
            Err(GeometryError::NotConvex)
        );
    }

    #[test]
    fn collinear_input_vertices_are_dropped() {
        let b = ConvexBody::from_vertices(vec![
            Point::new(0.0, 0.0),
            Point::new(0.5, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap();
        assert_eq!(b.len(), 4);
    }

    #[test]
    fn support_examples() {
        assert_eq!(unit_square().support(Direction::from_angle(0.0)), 1.0);
        let o = ConvexBody::origin();
        for k in 0..8 {
            assert_eq!(o.support(Direction::from_angle(k as f64)), 0.0);
        }
        let tri = ConvexBody::hull(&[
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(0.0, 2.0),
        ])
        .unwrap();
        let u = Direction::new(Point::new(1.0, 1.0)).unwrap();
        // brute force: max over the three vertices of <v, u>
        let brute = [(0.0, 0.0), (2.0, 0.0), (0.0, 2.0)]
            .iter()
            .map(|&(x, y)| x * u.vector().x + y * u.vector().y)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(approx(tri.support(u), brute, 1e-15));
        assert!(approx(tri.support(u), 2f64.sqrt(), 1e-12));
    }

    #[test]
    fn minkowski_examples() {
        let a = ConvexBody::regular(7, 2.0, 0.3);
        assert_eq!(a.minkowski_sum(&ConvexBody::origin()), a);
        assert_eq!(
            unit_square().minkowski_sum(&unit_square()),
            ConvexBody::rect(0.0, 0.0, 2.0, 2.0)
        );
        let s1 = ConvexBody::segment(Point::new(0.0, 0.0), Point::new(1.0, 0.0));
        let s2 = ConvexBody::segment(Point::new(0.0, 0.0), Point::new(0.0, 1.0));
        let sum = s1.minkowski_sum(&s2);
        // brute-force oracle: hull of all pairwise vertex sums
        let mut pairs = Vec::new();
        for p in s1.vertices() {
            for q in s2.vertices() {
                pairs.push(*p + *q);
            }
        }
        assert_eq!(sum, ConvexBody::hull(&pairs).unwrap());
        assert_eq!(sum, unit_square());
    }

    #[test]
    fn minkowski_of_collinear_segments_is_a_segment() {
        let s1 = ConvexBody::segment(Point::new(-1.0, 0.0), Point::new(1.0, 0.0));
        let sum = s1.minkowski_sum(&s1);
        assert_eq!(
            sum,
            ConvexBody::segment(Point::new(-2.0, 0.0), Point::new(2.0, 0.0))
        );
    }

    #[test]
    fn hull_keeps_corner_of_nearly_vertical_edge() {
        // left edge vertical up to one ulp, so the x-sort puts the top-left
        // corner first and a mid-edge point after the bottom-left corner
        let x = -0.16274717550105625;
        let pts = [
            Point::new(x, -0.158),
            Point::new(-0.09, -0.158),
            Point::new(0.16, -0.158),
            Point::new(0.16, 0.158),
            Point::new(f64::from_bits(x.to_bits() + 1), 0.158),
            Point::new(x, 0.003),
        ];
        let h = ConvexBody::hull(&pts).unwrap();
        assert_eq!(h.len(), 4);
        assert_eq!(h.vertices()[0], Point::new(x, -0.158));
        let a = ConvexBody::from_vertices(vec![
            Point::new(-0.035651602613758444, -0.0774768381321475),
            Point::new(0.035651602613758444, -0.0774768381321475),
            Point::new(0.035651602613758444, 0.0774768381321475),
            Point::new(-0.03565160261375845, 0.0774768381321475),
        ])
        .unwrap();
        let b = ConvexBody::rect(-0.127, -0.0806, 0.127, 0.0806);
        let s = a.minkowski_sum(&b);
        for u in DirectionGrid::uniform(360).iter() {
            assert!((s.support(u) - a.support(u) - b.support(u)).abs() <= 1e-12);
        }
    }

    #[test]
    fn minkowski_with_bottom_edge_sloping_by_rounding() {
        // the bottom-left corner sits one ulp above the bottom-right one, so
        // the canonical start is the bottom-right corner
        let a = ConvexBody::from_vertices(vec![
            Point::new(0.20001605768984654, -0.228754430640884),
            Point::new(0.20001605768984654, 0.228754430640884),
            Point::new(-0.20001605768984657, 0.228754430640884),
            Point::new(-0.20001605768984657, -0.22875443064088397),
        ])
        .unwrap();
        assert_eq!(a.vertices()[0].x, 0.20001605768984654);
        let b = ConvexBody::rect(-0.0565, -0.1488, 0.0565, 0.1488);
        for (x, y) in [(&a, &b), (&b, &a)] {
            let s = x.minkowski_sum(y);
            assert_eq!(s.len(), 4);
            for u in DirectionGrid::uniform(360).iter() {
                assert!((s.support(u) - a.support(u) - b.support(u)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn scale_examples() {
        let a = ConvexBody::regular(5, 1.0, 0.1);
        assert_eq!(a.scale(1.0).unwrap(), a);
        assert_eq!(unit_square().scale(0.0).unwrap(), ConvexBody::origin());
        let tri = ConvexBody::hull(&[
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap();
        let big = ConvexBody::hull(&[
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(0.0, 2.0),
        ])
        .unwrap();
        assert_eq!(tri.scale(2.0).unwrap(), big);
        assert!(matches!(
            tri.scale(-1.0),
            Err(GeometryError::NegativeScale(_))
        ));
    }

    #[test]
    fn hausdorff_examples() {
        let a = ConvexBody::regular(6, 1.5, 0.2);
        assert_eq!(a.hausdorff(&a), 0.0);
        let big = ConvexBody::rect(0.0, 0.0, 2.0, 2.0);
        // dense boundary sampling oracle for the farthest point of big from the unit square
        let mut worst: f64 = 0.0;
        let n = 4000;
        for k in 0..=n {
            let t = (k as f64) / n as f64;
            for q in [
                Point::new(2.0 * t, 0.0),
                Point::new(2.0, 2.0 * t),
                Point::new(2.0 - 2.0 * t, 2.0),
                Point::new(0.0, 2.0 - 2.0 * t),
            ] {
                let d = (q.x - q.x.clamp(0.0, 1.0)).hypot(q.y - q.y.clamp(0.0, 1.0));
                worst = worst.max(d);
            }
        }
        let h = unit_square().hausdorff(&big);
        assert!(approx(h, 2f64.sqrt(), 1e-12));
        assert!(approx(h, worst, 1e-3));
        let p = ConvexBody::point(Point::new(0.0, 0.0));
        let q = ConvexBody::point(Point::new(3.0, 4.0));
        assert_eq!(p.hausdorff(&q), 5.0);
    }

    #[test]
    fn hausdorff_dual_examples() {
        let a = ConvexBody::regular(5, 1.0, 0.0);
        assert_eq!(
            a.hausdorff_dual(&a, &DirectionGrid::uniform(3)).unwrap(),
            0.0
        );
        let small = unit_square();
        let big = ConvexBody::rect(0.0, 0.0, 2.0, 2.0);
        let grid = DirectionGrid::uniform(4)
            .with_edge_normals(&[&small, &big])
            .extend_with(Direction::new(Point::new(1.0, 1.0)).unwrap());
        assert!(approx(
            small.hausdorff_dual(&big, &grid).unwrap(),
            2f64.sqrt(),
            1e-12
        ));
        let k = ConvexBody::regular(9, 2.5, 0.4);
        let g = DirectionGrid::exact_for(&ConvexBody::origin(), &k);
        assert!(approx(
            ConvexBody::origin().hausdorff_dual(&k, &g).unwrap(),
            k.hausdorff_norm(),
            1e-12
        ));
        assert_eq!(
            a.hausdorff_dual(&a, &DirectionGrid::default()),
            Err(GeometryError::EmptyGrid)
        );
    }

    impl DirectionGrid {
        fn extend_with(mut self, d: Direction) -> Self {
            self.dirs.push(d);
            Self::new(self.dirs)
        }
    }

    #[test]
    fn point_distance_examples() {
        let sq = unit_square();
        assert_eq!(sq.point_distance(Point::new(0.5, 0.5)), 0.0);
        assert_eq!(sq.point_distance(Point::new(2.0, 0.5)), 1.0);
        assert!(approx(
            sq.point_distance(Point::new(2.0, 2.0)),
            2f64.sqrt(),
            1e-15
        ));
        let seg = ConvexBody::segment(Point::new(0.0, 0.0), Point::new(2.0, 0.0));
        assert_eq!(seg.point_distance(Point::new(1.0, 3.0)), 3.0);
    }

    #[test]
    fn containment_examples() {
        let a = ConvexBody::regular(8, 1.0, 0.0);
        assert!(a.contains_convex(&a));
        let big = ConvexBody::rect(0.0, 0.0, 2.0, 2.0);
        assert!(big.contains_convex(&unit_square()));
        assert!(!unit_square().contains_convex(&big));
    }

    #[test]
    fn support_samples_reconstruct_square() {
        let sq = unit_square();
        let samples: Vec<(Direction, f64)> = sq
            .edge_normals()
            .into_iter()
            .map(|u| (u, sq.support(u)))
            .collect();
        let r = ConvexBody::from_support_samples(&samples).unwrap();
        assert!(r.hausdorff(&sq) <= 1e-12);
        assert_eq!(r.len(), 4);
    }

    #[test]
    fn support_samples_circumscribe_disk() {
        let n = 64;
        let samples: Vec<(Direction, f64)> = (0..n)
            .map(|k| (Direction::from_angle(TAU * k as f64 / n as f64), 1.0))
            .collect();
        let r = ConvexBody::from_support_samples(&samples).unwrap();
        assert_eq!(r.len(), 64);
        // regular 64-gon with apothem 1 has circumradius 1/cos(pi/64)
        let expect = 1.0 / (PI / 64.0).cos();
        for v in r.vertices() {
            assert!(approx(v.norm(), expect, 1e-12));
        }
    }

    #[test]
    fn support_samples_errors() {
        let two = [
            (Direction::from_angle(0.0), 1.0),
            (Direction::from_angle(PI), 1.0),
        ];
        assert_eq!(
            ConvexBody::from_support_samples(&two),
            Err(GeometryError::TooFewDirections(2))
        );
        let half = [
            (Direction::from_angle(0.0), 1.0),
            (Direction::from_angle(0.5), 1.0),
            (Direction::from_angle(1.0), 1.0),
        ];
        assert!(matches!(
            ConvexBody::from_support_samples(&half),
            Err(GeometryError::Unbounded(_))
        ));
        let infeasible = [
            (Direction::from_angle(0.0), -1.0),
            (Direction::from_angle(TAU / 3.0), -1.0),
            (Direction::from_angle(2.0 * TAU / 3.0), -1.0),
        ];
        assert_eq!(
            ConvexBody::from_support_samples(&infeasible),
            Err(GeometryError::EmptyIntersection)
        );
    }

    #[test]
    fn support_samples_of_segment_stay_degenerate() {
        let seg = ConvexBody::segment(Point::new(-1.0, 0.0), Point::new(1.0, 0.0));
        let samples: Vec<(Direction, f64)> = DirectionGrid::uniform(36)
            .iter()
            .map(|u| (u, seg.support(u)))
            .collect();
        let r = ConvexBody::from_support_samples(&samples).unwrap();
        assert!(r.hausdorff(&seg) <= 1e-8);
    }

    #[test]
    fn intersect_square_with_shifted_square() {
        let a = ConvexBody::rect(0.0, 0.0, 2.0, 2.0);
        let b = ConvexBody::rect(1.0, 1.0, 3.0, 3.0);
        assert_eq!(
            a.intersect(&b).unwrap(),
            ConvexBody::rect(1.0, 1.0, 2.0, 2.0)
        );
        assert!(a.intersect(&ConvexBody::rect(5.0, 5.0, 6.0, 6.0)).is_none());
        let p = ConvexBody::point(Point::new(0.5, 0.5));
        assert_eq!(a.intersect(&p).unwrap(), p);
    }

    #[test]
    fn polygon_json_roundtrip() {
        let a = ConvexBody::regular(5, 1.0, 0.2);
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.starts_with("{\"vertices\":[["));
        let back: ConvexBody = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        let bad = r#"{"vertices":[[0,0],[0,1],[1,1],[1,0]]}"#;
        assert!(serde_json::from_str::<ConvexBody>(bad).is_err());
    }
}
