//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use pantsrigid::curve::{extract_robust, realize, round_curve, CurveClass, Letter, Point, PolyChain};

fn out_side(l: Letter) -> usize {
    2 * (l.ray() - 1) + usize::from(l.sign < 0)
}

fn in_side(l: Letter) -> usize {
    2 * (l.ray() - 1) + usize::from(l.sign > 0)
}

fn ccw(from: usize, to: usize, sides: usize) -> usize {
    (to + sides - from) % sides
}

fn interleaved(a: (usize, usize), b: (usize, usize)) -> bool {
    let inside = |x: usize| a.0.min(a.1) < x && x < a.0.max(a.1);
    inside(b.0) != inside(b.1)
}

/// Counts linked pairs of lifts of two curves to the tree of the cut
/// system: every maximal shared segment of a and b (or b reversed) is
/// inspected once, from the vertex where it begins.
pub fn linked_pairs(n: usize, a: &[Letter], b: &[Letter]) -> usize {
    let sides = 2 * (n - 1);
    let la = a.len() as isize;
    let at = |w: &[Letter], i: isize| w[i.rem_euclid(w.len() as isize) as usize];
    let binv: Vec<Letter> = b.iter().rev().map(|l| l.inv()).collect();
    let mut count = 0;
    for (eps, bw) in [(1, b), (-1, &binv[..])] {
        let lb = bw.len() as isize;
        for i in 0..la {
            for j in 0..lb {
                let (ai, bi) = (at(a, i - 1), at(bw, j - 1));
                if ai == bi {
                    continue;
                }
                let mut s = 0;
                while s < la + lb + 2 && at(a, i + s) == at(bw, j + s) {
                    s += 1;
                }
                if s == 0 {
                    if eps < 0 {
                        continue;
                    }
                    let ea = (in_side(ai), out_side(at(a, i)));
                    let eb = (in_side(bi), out_side(at(bw, j)));
                    let mut all = vec![ea.0, ea.1, eb.0, eb.1];
                    all.sort();
                    all.dedup();
                    if all.len() == 4 && interleaved(ea, eb) {
                        count += 1;
                    }
                    continue;
                }
                let s0 = out_side(at(a, i));
                let left_start = ccw(s0, in_side(ai), sides) < ccw(s0, in_side(bi), sides);
                let t = in_side(at(a, i + s - 1));
                let left_end = ccw(t, out_side(at(bw, j + s)), sides) < ccw(t, out_side(at(a, i + s)), sides);
                if left_start != left_end {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Chord curves as blocks: i = 2 when linked, else 0.
pub fn blocks_linked(n: usize, x: &[usize], y: &[usize]) -> bool {
    let inx = |p: usize| x.contains(&p);
    let iny = |p: usize| y.contains(&p);
    let both = (1..=n).any(|p| inx(p) && iny(p));
    let only_x = (1..=n).any(|p| inx(p) && !iny(p));
    let only_y = (1..=n).any(|p| !inx(p) && iny(p));
    let neither = (1..=n).any(|p| !inx(p) && !iny(p));
    both && only_x && only_y && neither
}

/// All cyclic blocks of size 2..=n-2, one per unordered curve.
pub fn all_blocks(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for a in 1..=n {
        for s in 2..=n - 2 {
            let b: Vec<usize> = (0..s).map(|t| (a - 1 + t) % n + 1).collect();
            if !b.contains(&n) {
                out.push(b);
            }
        }
    }
    out
}

fn rat(x: f64) -> BigRational {
    let den: i64 = 1 << 24;
    BigRational::new(BigInt::from((x * den as f64).round() as i64), BigInt::from(den))
}

/// Pushes a curve through an explicit planar half-twist that rotates a disk
/// about q_i, q_{i+1} by a half turn (counterclockwise for sign +1), damped
/// to the identity on an annulus, then reads the result back.
pub fn geometric_half_twist(c: &CurveClass, i: usize, sign: i8) -> CurveClass {
    let p = realize(c);
    let pts: Vec<(f64, f64)> = p
        .points()
        .iter()
        .map(|q| (to_f(&q.x), to_f(&q.y)))
        .collect();
    let (cx, r1, r2) = (i as f64 + 0.5, 0.62, 0.9);
    let mut out = Vec::new();
    for k in 0..pts.len() {
        let (a, b) = (pts[k], pts[(k + 1) % pts.len()]);
        let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
        let steps = (len / 0.004).ceil().max(1.0) as usize;
        for s in 0..steps {
            let t = s as f64 / steps as f64;
            let (x, y) = (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
            let (dx, dy) = (x - cx, y);
            let rho = (dx * dx + dy * dy).sqrt();
            let frac = if rho <= r1 { 1.0 } else if rho >= r2 { 0.0 } else { (r2 - rho) / (r2 - r1) };
            let th = sign as f64 * std::f64::consts::PI * frac;
            let (cs, sn) = (th.cos(), th.sin());
            out.push(Point::new(rat(cx + cs * dx - sn * dy), rat(sn * dx + cs * dy)));
        }
    }
    extract_robust(&PolyChain::new_unchecked(c.n(), out)).expect("twisted polygon reads back")
}

fn to_f(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap()
}

pub fn rc(n: usize, block: &[usize]) -> CurveClass {
    round_curve(n, block).unwrap()
}

/// Triangulations of a convex polygon with vertices 0..k, as sorted lists
/// of diagonals, plus the flip adjacency.
pub fn flip_graph(k: usize) -> (Vec<Vec<(usize, usize)>>, Vec<(usize, usize)>) {
    fn tri(lo: usize, hi: usize) -> Vec<Vec<(usize, usize)>> {
        if hi - lo < 2 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for m in lo + 1..hi {
            for l in tri(lo, m) {
                for r in tri(m, hi) {
                    let mut d = l.clone();
                    d.extend(r);
                    if m - lo > 1 {
                        d.push((lo, m));
                    }
                    if hi - m > 1 {
                        d.push((m, hi));
                    }
                    out.push(d);
                }
            }
        }
        out
    }
    let mut ts = tri(0, k - 1);
    for t in ts.iter_mut() {
        t.sort();
    }
    ts.sort();
    let mut edges = Vec::new();
    for a in 0..ts.len() {
        for b in a + 1..ts.len() {
            let common = ts[a].iter().filter(|d| ts[b].contains(d)).count();
            if common + 1 == k - 3 {
                edges.push((a, b));
            }
        }
    }
    (ts, edges)
}
