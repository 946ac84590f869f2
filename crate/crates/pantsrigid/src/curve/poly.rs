//! Explicit polygonal representatives with exact rational coordinates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{reduce, Arrangement, CurveClass, CurveError, Letter};

pub type Q = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Point { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Point { x: q(x, 1), y: q(y, 1) }
    }
}

pub fn q(num: i64, den: i64) -> Q {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A closed polygon given by its vertices in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyChain {
    n: usize,
    pts: Vec<Point>,
}

fn cross(o: &Point, a: &Point, b: &Point) -> Q {
    (&a.x - &o.x) * (&b.y - &o.y) - (&a.y - &o.y) * (&b.x - &o.x)
}

fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    cross(a, b, p).is_zero()
        && p.x >= a.x.clone().min(b.x.clone())
        && p.x <= a.x.clone().max(b.x.clone())
        && p.y >= a.y.clone().min(b.y.clone())
        && p.y <= a.y.clone().max(b.y.clone())
}

fn segments_meet(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let d1 = cross(c, d, a).signum();
    let d2 = cross(c, d, b).signum();
    let d3 = cross(a, b, c).signum();
    let d4 = cross(a, b, d).signum();
    if d1 != d2 && !d1.is_zero() && !d2.is_zero() && d3 != d4 && !d3.is_zero() && !d4.is_zero() {
        return true;
    }
    on_segment(a, c, d) || on_segment(b, c, d) || on_segment(c, a, b) || on_segment(d, a, b)
}

impl PolyChain {
    /// Checks simplicity and puncture avoidance.
    pub fn new(n: usize, pts: Vec<Point>) -> Result<Self, CurveError> {
        let p = PolyChain { n, pts };
        p.check_simple()?;
        Ok(p)
    }

    /// Skips the O(V^2) simplicity test; extraction still checks
    /// transversality and puncture avoidance.
    pub fn new_unchecked(n: usize, pts: Vec<Point>) -> Self {
        PolyChain { n, pts }
    }

    pub fn points(&self) -> &[Point] {
        &self.pts
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> {
        let k = self.pts.len();
        (0..k).map(move |i| (&self.pts[i], &self.pts[(i + 1) % k]))
    }

    pub fn check_simple(&self) -> Result<(), CurveError> {
        let k = self.pts.len();
        if k < 3 {
            return Err(CurveError::Degenerate("fewer than three vertices".into()));
        }
        for j in 1..self.n {
            let pj = Point::ints(j as i64, 0);
            if self.edges().any(|(a, b)| on_segment(&pj, a, b)) {
                return Err(CurveError::Degenerate(format!("touches puncture {j}")));
            }
        }
        let e: Vec<(&Point, &Point)> = self.edges().collect();
        for i in 0..k {
            for j in i + 1..k {
                let adjacent = j == i + 1 || (i == 0 && j == k - 1);
                if adjacent {
                    // Adjacent edges may only share their common vertex.
                    let (a, b) = e[i];
                    let (c, d) = e[j];
                    let shared = if j == i + 1 { b } else { a };
                    let other_i = if j == i + 1 { a } else { b };
                    let other_j = if j == i + 1 { d } else { c };
                    if on_segment(other_j, a, b) && other_j != shared || on_segment(other_i, c, d) && other_i != shared {
                        return Err(CurveError::Degenerate("overlapping edges".into()));
                    }
                } else if segments_meet(e[i].0, e[i].1, e[j].0, e[j].1) {
                    return Err(CurveError::Degenerate(format!("edges {i} and {j} meet")));
                }
            }
        }
        Ok(())
    }

    pub fn translated(&self, dx: &Q, dy: &Q) -> Self {
        let pts = self.pts.iter().map(|p| Point::new(&p.x + dx, &p.y + dy)).collect();
        PolyChain { n: self.n, pts }
    }

    pub fn reversed(&self) -> Self {
        let mut pts = self.pts.clone();
        pts.reverse();
        PolyChain { n: self.n, pts }
    }

    /// Reflection in the horizontal axis.
    pub fn mirrored(&self) -> Self {
        let pts = self.pts.iter().map(|p| Point::new(p.x.clone(), -&p.y)).collect();
        PolyChain { n: self.n, pts }
    }

    /// Horizontal shear x += eps * y.
    pub fn sheared(&self, eps: &Q) -> Self {
        let pts = self.pts.iter().map(|p| Point::new(&p.x + eps * &p.y, p.y.clone())).collect();
        PolyChain { n: self.n, pts }
    }

    /// Parity count of finite punctures inside the polygon, by casting a
    /// rightward horizontal ray from each puncture.
    pub fn enclosed_count(&self) -> usize {
        (1..self.n)
            .filter(|&j| {
                let (px, py) = (q(j as i64, 1), Q::zero());
                let mut inside = false;
                for (a, b) in self.edges() {
                    if (a.y > py) != (b.y > py) {
                        let t = (&py - &a.y) / (&b.y - &a.y);
                        let x = &a.x + t * (&b.x - &a.x);
                        if x > px {
                            inside = !inside;
                        }
                    }
                }
                inside
            })
            .count()
    }

    /// Signed ray crossings along the polygon.
    pub fn crossing_sequence(&self) -> Result<Vec<Letter>, CurveError> {
        let mut out = Vec::new();
        let degenerate = |s: String| Err(CurveError::Degenerate(s));
        for (a, b) in self.edges() {
            if a.x.is_integer() {
                let j = a.x.to_integer();
                if j >= BigInt::one() && j < BigInt::from(self.n) && !a.y.is_positive() {
                    return degenerate(format!("vertex on ray {j}"));
                }
            }
            if a.x == b.x {
                continue;
            }
            let (lo, hi) = if a.x < b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
            let mut js: Vec<i64> = (1..self.n as i64).filter(|&j| &q(j, 1) > lo && &q(j, 1) < hi).collect();
            if a.x > b.x {
                js.reverse();
            }
            let sign = if b.x > a.x { 1 } else { -1 };
            for j in js {
                let t = (q(j, 1) - &a.x) / (&b.x - &a.x);
                let y = &a.y + t * (&b.y - &a.y);
                if y.is_zero() {
                    return degenerate(format!("passes through puncture {j}"));
                }
                if y.is_negative() {
                    out.push(Letter::new(j as usize, sign));
                }
            }
        }
        Ok(out)
    }
}

/// Reads the curve class of a polygon.
pub fn extract(p: &PolyChain) -> Result<CurveClass, CurveError> {
    let raw = p.crossing_sequence()?;
    CurveClass::from_trusted(p.n, &reduce(&raw))
}

/// Like `extract`, but on a degenerate polygon retries after a fixed tiny
/// shear, at most three times.
pub fn extract_robust(p: &PolyChain) -> Result<CurveClass, CurveError> {
    let mut cur = p.clone();
    let mut last = None;
    for attempt in 0..4 {
        match extract(&cur) {
            Err(CurveError::Degenerate(s)) => last = Some(s),
            other => return other,
        }
        cur = p.sheared(&q(1, 1 << (20 + attempt)));
    }
    Err(CurveError::Degenerate(last.unwrap_or_default()))
}

/// A simple polygon representing the curve.
///
/// The crossing of rank r on ray k is a short horizontal stub at depth
/// -(r+1) whose half-width grows with r. Chords of the cut disk become
/// rectangular arcs above the puncture line, nested arcs being taller.
pub fn realize(c: &CurveClass) -> PolyChain {
    let n = c.n();
    let w = c.seq();
    let arr = Arrangement::new(n, &[w]);
    let smax = (1..n).map(|k| arr.strands_on(k)).max().unwrap_or(0) as i64;
    let half = |r: usize| q(r as i64 + 1, 2 * (smax + 2));
    let stub = |k: usize, r: usize, right: bool| {
        let x = q(k as i64, 1) + if right { half(r) } else { -half(r) };
        Point::new(x, q(-(r as i64) - 1, 1))
    };
    // Order chord endpoints by x to get nesting heights.
    let len = w.len();
    let mut spans: Vec<(Point, Point)> = Vec::with_capacity(len);
    for p in 0..len {
        let prev = w[(p + len - 1) % len];
        let next = w[p];
        let from = stub(prev.ray(), arr.rank(0, (p + len - 1) % len), prev.sign > 0);
        let to = stub(next.ray(), arr.rank(0, p), next.sign < 0);
        spans.push((from, to));
    }
    let interval = |s: &(Point, Point)| {
        if s.0.x < s.1.x {
            (s.0.x.clone(), s.1.x.clone())
        } else {
            (s.1.x.clone(), s.0.x.clone())
        }
    };
    let mut order: Vec<usize> = (0..len).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (interval(&spans[i]), interval(&spans[j]));
        (&a.1 - &a.0).cmp(&(&b.1 - &b.0))
    });
    let mut height = vec![1i64; len];
    for (idx, &i) in order.iter().enumerate() {
        let (lo, hi) = interval(&spans[i]);
        for &j in &order[..idx] {
            let (l2, h2) = interval(&spans[j]);
            if l2 > lo && h2 < hi {
                height[i] = height[i].max(height[j] + 1);
            }
        }
    }
    let mut pts = Vec::with_capacity(4 * len);
    for p in 0..len {
        let (from, to) = &spans[p];
        let h = q(height[p], 1);
        pts.push(from.clone());
        pts.push(Point::new(from.x.clone(), h.clone()));
        pts.push(Point::new(to.x.clone(), h));
        pts.push(to.clone());
    }
    PolyChain::new_unchecked(n, pts)
}
