//! Taut arrangements of curves in the cut disk.
//!
//! Each strand crossing a ray is placed at a depth. Two strands on the same
//! ray are ordered by following both in each direction until their crossing
//! sequences diverge; if the lifts are linked they are made to cross at the
//! middle of the shared segment, which keeps the choice consistent on every
//! ray the segment passes. Each visit of a curve to the disk then becomes a
//! straight chord between boundary slots, and crossings are interleaved chord
//! pairs, so the crossing count of two curves is their geometric
//! intersection number.

use std::cmp::Ordering;

use super::{CurveClass, CurveError, Letter};

/// One passage of a curve through the cut disk, between two ray crossings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chord {
    pub curve: usize,
    /// The chord joins the crossing of letter `pos - 1` to that of `pos`.
    pub pos: usize,
    /// Boundary coordinate where the curve enters the disk.
    pub a: usize,
    /// Boundary coordinate where it leaves.
    pub b: usize,
}

impl Chord {
    fn span(&self) -> (usize, usize) {
        (self.a.min(self.b), self.a.max(self.b))
    }

    /// Whether boundary coordinate x lies strictly inside the chord's span.
    pub fn encloses(&self, x: usize) -> bool {
        let (lo, hi) = self.span();
        lo < x && x < hi
    }

    pub fn interleaves(&self, other: &Chord) -> bool {
        self.encloses(other.a) != self.encloses(other.b)
    }
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    m: usize,
    words: Vec<Vec<Letter>>,
    rank: Vec<Vec<usize>>,
    counts: Vec<usize>,
    base: Vec<usize>,
    total: usize,
    chords: Vec<Chord>,
    chord_start: Vec<usize>,
}

impl Arrangement {
    /// Words must be cyclically reduced and primitive; distinct entries must
    /// not be equal or inverse up to rotation.
    pub fn new(n: usize, words: &[&[Letter]]) -> Self {
        let m = n - 1;
        let words: Vec<Vec<Letter>> = words.iter().map(|w| w.to_vec()).collect();
        let mut strands: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
        for (c, w) in words.iter().enumerate() {
            for (p, l) in w.iter().enumerate() {
                strands[l.ray() - 1].push((c, p));
            }
        }
        let mut rank: Vec<Vec<usize>> = words.iter().map(|w| vec![0; w.len()]).collect();
        for (j, list) in strands.iter_mut().enumerate() {
            list.sort_by(|&(c1, p1), &(c2, p2)| depth_order(&words, 2 * m, j + 1, (c1, p1), (c2, p2)));
            for (r, &(c, p)) in list.iter().enumerate() {
                rank[c][p] = r;
            }
        }
        let counts: Vec<usize> = strands.iter().map(Vec::len).collect();
        let mut base = Vec::with_capacity(m);
        let mut total = 0;
        for &s in &counts {
            base.push(total);
            total += 2 * s + 2;
        }
        let mut arr = Arrangement { m, words, rank, counts, base, total, chords: Vec::new(), chord_start: Vec::new() };
        let mut chords = Vec::new();
        for c in 0..arr.words.len() {
            arr.chord_start.push(chords.len());
            let w = &arr.words[c];
            let len = w.len();
            for p in 0..len {
                let q = (p + len - 1) % len;
                let prev = w[q];
                let next = w[p];
                let a = arr.slot(prev.ray(), arr.rank[c][q], prev.sign > 0);
                let b = arr.slot(next.ray(), arr.rank[c][p], next.sign < 0);
                chords.push(Chord { curve: c, pos: p, a, b });
            }
        }
        arr.chord_start.push(chords.len());
        arr.chords = chords;
        arr
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn curve_count(&self) -> usize {
        self.words.len()
    }

    pub fn word(&self, c: usize) -> &[Letter] {
        &self.words[c]
    }

    pub fn strands_on(&self, ray: usize) -> usize {
        self.counts[ray - 1]
    }

    /// Depth rank (0 = shallowest) of the crossing of letter p of curve c.
    pub fn rank(&self, c: usize, p: usize) -> usize {
        self.rank[c][p]
    }

    pub fn chords(&self) -> &[Chord] {
        &self.chords
    }

    pub fn chords_of(&self, c: usize) -> &[Chord] {
        &self.chords[self.chord_start[c]..self.chord_start[c + 1]]
    }

    /// Boundary coordinate of a slot. Per ray the layout is
    /// `L slots (deep to shallow), q marker, R slots (shallow to deep), infinity marker`.
    pub fn slot(&self, ray: usize, rank: usize, right: bool) -> usize {
        let (b, s) = (self.base[ray - 1], self.counts[ray - 1]);
        if right {
            b + s + 1 + rank
        } else {
            b + s - 1 - rank
        }
    }

    /// Gap on side L of `ray` at depth interval d (0 = just below the puncture).
    pub fn left_gap(&self, ray: usize, d: usize) -> usize {
        let (b, s) = (self.base[ray - 1], self.counts[ray - 1]);
        (b + self.total + s - d - 1) % self.total
    }

    pub fn right_gap(&self, ray: usize, d: usize) -> usize {
        self.base[ray - 1] + self.counts[ray - 1] + d
    }

    /// Interleaved chord pairs between curves c1 and c2, as (chord of c1, chord of c2).
    pub fn crossings(&self, c1: usize, c2: usize) -> Vec<(Chord, Chord)> {
        let mut out = Vec::new();
        for x in self.chords_of(c1) {
            for y in self.chords_of(c2) {
                if x.interleaves(y) {
                    out.push((*x, *y));
                }
            }
        }
        out
    }

    pub fn crossing_count(&self, c1: usize, c2: usize) -> usize {
        let ys = self.chords_of(c2);
        self.chords_of(c1).iter().map(|x| ys.iter().filter(|y| x.interleaves(y)).count()).sum()
    }

    pub fn self_crossings(&self, c: usize) -> usize {
        let cs = self.chords_of(c);
        let mut k = 0;
        for i in 0..cs.len() {
            for j in i + 1..cs.len() {
                if cs[i].interleaves(&cs[j]) {
                    k += 1;
                }
            }
        }
        k
    }

    /// Region of each gap for a family of pairwise disjoint curves. Gap g lies
    /// between boundary coordinates g and g+1. Region 0 is the outermost; a
    /// region id r > 0 is the area directly inside chord r - 1.
    pub fn regions_disjoint(&self) -> Vec<usize> {
        let mut opens: Vec<Option<usize>> = vec![None; self.total];
        let mut closes: Vec<bool> = vec![false; self.total];
        for (i, ch) in self.chords.iter().enumerate() {
            let (lo, hi) = ch.span();
            opens[lo] = Some(i);
            closes[hi] = true;
        }
        let mut stack: Vec<usize> = Vec::new();
        let mut region = vec![0; self.total];
        for x in 0..self.total {
            if closes[x] {
                stack.pop();
            }
            if let Some(i) = opens[x] {
                stack.push(i);
            }
            region[x] = stack.last().map_or(0, |&i| i + 1);
        }
        region
    }

    /// The regions on either side of a chord, as (inside, outside), for a
    /// disjoint family.
    pub fn chord_sides(&self, regions: &[usize], chord: &Chord) -> (usize, usize) {
        let (lo, _) = chord.span();
        (regions[lo], regions[(lo + self.total - 1) % self.total])
    }

    pub fn rays(&self) -> usize {
        self.m
    }

    /// Whether, along chord `along` from its entry to its exit, the crossing
    /// with `x` comes before the crossing with `y`. Both must cross `along`
    /// and must not cross each other.
    pub fn crosses_first(along: &Chord, x: &Chord, y: &Chord) -> bool {
        x.encloses(y.a) == x.encloses(along.b)
    }
}

/// Letter t steps after position p, walking the curve in direction dir.
fn stream(words: &[Vec<Letter>], c: usize, p: usize, dir: i8, t: usize) -> Letter {
    let w = &words[c];
    let l = w.len();
    if dir > 0 {
        w[(p + 1 + t) % l]
    } else {
        w[(p + l - 1 - t % l) % l].inv()
    }
}

/// Walks two strands through the same crossing in a common direction until
/// they part. Returns the number of shared letters and whether the first
/// strand lies later (counterclockwise) along the starting side.
fn diverge(words: &[Vec<Letter>], sides: usize, start: usize, x: (usize, usize, i8), y: (usize, usize, i8)) -> Option<(usize, bool)> {
    let mut side = start;
    let bound = words[x.0].len() + words[y.0].len() + 2;
    for t in 0..bound {
        let la = stream(words, x.0, x.1, x.2, t);
        let lb = stream(words, y.0, y.1, y.2, t);
        if la != lb {
            // The strand leaving earlier counterclockwise lies later along the
            // entry side; that rank is preserved back along the shared part.
            let da = (la.out_side() + sides - side) % sides;
            let db = (lb.out_side() + sides - side) % sides;
            return Some((t, da < db));
        }
        side = la.in_side();
    }
    None
}

/// Ordering by depth on ray j: Greater means the first strand is deeper.
/// Linked lifts are made to cross at the middle of their shared segment, a
/// choice that does not depend on orientation, so every ray along the
/// segment sees the same crossing.
fn depth_order(words: &[Vec<Letter>], sides: usize, j: usize, x: (usize, usize), y: (usize, usize)) -> Ordering {
    if x == y {
        return Ordering::Equal;
    }
    let sx = words[x.0][x.1].sign;
    let sy = words[y.0][y.1].sign;
    // Forward: both cross ray j left to right and enter through R_j, where
    // later means deeper. Backward: both enter through L_j, where later
    // means shallower.
    let fwd = diverge(words, sides, 2 * (j - 1) + 1, (x.0, x.1, sx), (y.0, y.1, sy));
    let bwd = diverge(words, sides, 2 * (j - 1), (x.0, x.1, -sx), (y.0, y.1, -sy));
    let deeper = match (fwd, bwd) {
        (None, None) => return Ordering::Equal,
        (Some((_, later)), None) => later,
        (None, Some((_, later))) => !later,
        (Some((tf, lf)), Some((tb, lb))) => {
            if tb < tf {
                !lb
            } else {
                lf
            }
        }
    };
    if deeper {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

fn check_same_n(a: &CurveClass, b: &CurveClass) -> Result<(), CurveError> {
    if a.n() != b.n() {
        return Err(CurveError::MismatchedN(a.n(), b.n()));
    }
    Ok(())
}

/// Geometric intersection number of two curve classes.
pub fn geometric_intersection(a: &CurveClass, b: &CurveClass) -> Result<usize, CurveError> {
    check_same_n(a, b)?;
    if a == b {
        return Ok(0);
    }
    let arr = Arrangement::new(a.n(), &[a.seq(), b.seq()]);
    Ok(arr.crossing_count(0, 1))
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Whether the curves fill the sphere: their union is connected and every
/// complementary face holds at most one puncture.
pub fn fills(curves: &[CurveClass]) -> Result<bool, CurveError> {
    let Some(first) = curves.first() else {
        return Ok(false);
    };
    let n = first.n();
    for c in curves {
        check_same_n(first, c)?;
    }
    let mut uniq: Vec<&CurveClass> = curves.iter().collect();
    uniq.sort();
    uniq.dedup();
    let words: Vec<&[super::Letter]> = uniq.iter().map(|c| c.seq()).collect();
    let arr = Arrangement::new(n, &words);
    let k = uniq.len();

    let mut conn = Dsu::new(k);
    for a in 0..k {
        for b in a + 1..k {
            if arr.crossing_count(a, b) > 0 {
                conn.union(a, b);
            }
        }
    }
    if (0..k).any(|c| conn.find(c) != conn.find(0)) {
        return Ok(false);
    }

    let t = arr.total();
    let chords = arr.chords();
    let mut faces = Dsu::new(t);
    // Two gaps lie in one region of the disk iff no chord separates them.
    for g in 0..t {
        for h in g + 1..t {
            let separated = chords.iter().any(|ch| {
                let inside = |x: usize| g < x && x <= h;
                inside(ch.a) != inside(ch.b)
            });
            if !separated {
                faces.union(g, h);
            }
        }
    }
    for ray in 1..n {
        for d in 0..=arr.strands_on(ray) {
            faces.union(arr.left_gap(ray, d), arr.right_gap(ray, d));
        }
    }
    let inf = arr.right_gap(1, arr.strands_on(1));
    for ray in 1..n {
        faces.union(inf, arr.right_gap(ray, arr.strands_on(ray)));
    }
    let mut load = vec![0usize; t];
    for ray in 1..n {
        load[faces.find(arr.right_gap(ray, 0))] += 1;
    }
    load[faces.find(inf)] += 1;
    Ok(load.iter().all(|&x| x <= 1))
}
