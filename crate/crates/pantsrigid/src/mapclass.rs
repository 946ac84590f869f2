//! Mapping classes as words in half-twists, the reflection and changes of
//! the puncture at infinity.
//!
//! Every generator acts on the free group of the cut system by an explicit
//! substitution, so applying a word to a curve is exact. The substitutions
//! are checked against geometric oracles and against the braid relations in
//! the test suite.

use std::collections::{HashMap, HashSet};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::curve::{finite_block, inverse_word, reduce, round_curve, CurveClass, CurveError, Letter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("generator {0:?} is out of range for n = {1}")]
    BadGenerator(Generator, usize),
    #[error("invalid blocks {0:?} and {1:?}")]
    InvalidBlocks(Vec<usize>, Vec<usize>),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// Half-twist exchanging q_i and q_{i+1}; sign +1 is counterclockwise.
    Sigma { i: usize, sign: i8 },
    /// The involution (x, y) -> (x, -y).
    Reflect,
    /// Rotation carrying p_k to p_n, so that p_k becomes the puncture at infinity.
    Recoordinate { k: usize },
}

impl Generator {
    pub fn sigma(i: usize, sign: i8) -> Self {
        Generator::Sigma { i, sign }
    }

    pub fn check(self, n: usize) -> Result<(), MapError> {
        let ok = match self {
            Generator::Sigma { i, sign } => i >= 1 && i + 2 <= n && (sign == 1 || sign == -1),
            Generator::Reflect => true,
            Generator::Recoordinate { k } => k >= 1 && k <= n,
        };
        if ok {
            Ok(())
        } else {
            Err(MapError::BadGenerator(self, n))
        }
    }

    pub fn inverse(self, n: usize) -> Self {
        match self {
            Generator::Sigma { i, sign } => Generator::Sigma { i, sign: -sign },
            Generator::Reflect => Generator::Reflect,
            Generator::Recoordinate { k } => Generator::Recoordinate { k: if k == n { n } else { n - k } },
        }
    }

    /// Image of each puncture index 1..=n.
    pub fn permutation(self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..=n).collect();
        match self {
            Generator::Sigma { i, .. } => p.swap(i, i + 1),
            Generator::Reflect => {}
            Generator::Recoordinate { k } => {
                let s = (n - k) % n;
                for (j, slot) in p.iter_mut().enumerate().skip(1) {
                    *slot = (j - 1 + s) % n + 1;
                }
            }
        }
        p
    }

    /// Images of x_1..x_{n-1} under the induced automorphism.
    pub fn images(self, n: usize) -> Vec<Vec<Letter>> {
        let m = n - 1;
        let id: Vec<Vec<Letter>> = (1..=m).map(|k| vec![Letter::pos(k)]).collect();
        match self {
            Generator::Sigma { i, sign } => {
                let mut im = id;
                let (a, b) = (Letter::pos(i), Letter::pos(i + 1));
                if sign > 0 {
                    im[i - 1] = vec![a, b, a.inv()];
                    im[i] = vec![a];
                } else {
                    im[i - 1] = vec![b];
                    im[i] = vec![b.inv(), a, b];
                }
                im
            }
            Generator::Reflect => {
                // y_k = P_{k-1} x_k^{-1} P_{k-1}^{-1}, with P_j = x_1 ... x_j.
                (1..=m)
                    .map(|k| {
                        let pre: Vec<Letter> = (1..k).map(Letter::pos).collect();
                        let mut w = pre.clone();
                        w.push(Letter::neg(k));
                        w.extend(inverse_word(&pre));
                        reduce_free(&w)
                    })
                    .collect()
            }
            Generator::Recoordinate { k } => {
                // Rotation x_j -> x_{j+1}, x_m -> (x_1 ... x_m)^{-1}, applied s times.
                let s = (n - k) % n;
                let mut im = id;
                let rot: Vec<Vec<Letter>> = (1..=m)
                    .map(|j| if j < m { vec![Letter::pos(j + 1)] } else { (1..=m).rev().map(Letter::neg).collect() })
                    .collect();
                for _ in 0..s {
                    im = im.iter().map(|w| substitute(w, &rot)).collect();
                }
                im
            }
        }
    }
}

fn reduce_free(w: &[Letter]) -> Vec<Letter> {
    let mut stack: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w {
        if stack.last() == Some(&l.inv()) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    stack
}

/// Applies a substitution to a word and freely reduces.
pub fn substitute(w: &[Letter], images: &[Vec<Letter>]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len() * 2);
    for &l in w {
        let im = &images[l.ray() - 1];
        if l.sign > 0 {
            for &x in im {
                push_reduced(&mut out, x);
            }
        } else {
            for &x in im.iter().rev() {
                push_reduced(&mut out, x.inv());
            }
        }
    }
    out
}

fn push_reduced(out: &mut Vec<Letter>, x: Letter) {
    if out.last() == Some(&x.inv()) {
        out.pop();
    } else {
        out.push(x);
    }
}

/// A word of generators, applied left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MCWord {
    pub n: usize,
    pub gens: Vec<Generator>,
}

impl MCWord {
    pub fn new(n: usize, gens: Vec<Generator>) -> Result<Self, MapError> {
        for g in &gens {
            g.check(n)?;
        }
        Ok(MCWord { n, gens })
    }

    pub fn identity(n: usize) -> Self {
        MCWord { n, gens: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn inverse(&self) -> Self {
        MCWord { n: self.n, gens: self.gens.iter().rev().map(|g| g.inverse(self.n)).collect() }
    }

    pub fn then(&self, other: &MCWord) -> Self {
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&other.gens);
        MCWord { n: self.n, gens }
    }

    pub fn power(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut gens = Vec::new();
        for _ in 0..k.unsigned_abs() {
            gens.extend_from_slice(&base.gens);
        }
        MCWord { n: self.n, gens }
    }

    pub fn apply(&self, c: &CurveClass) -> CurveClass {
        apply_word(self, c)
    }

    /// Image of each puncture index under the word.
    pub fn permutation(&self) -> Vec<usize> {
        let mut p: Vec<usize> = (0..=self.n).collect();
        for g in &self.gens {
            let q = g.permutation(self.n);
            for x in p.iter_mut().skip(1) {
                *x = q[*x];
            }
        }
        p
    }
}

pub fn apply_generator(g: Generator, c: &CurveClass) -> CurveClass {
    let n = c.n();
    let w = reduce(&substitute(c.seq(), &g.images(n)));
    CurveClass::from_trusted(n, &w).expect("homeomorphisms preserve essential curves")
}

pub fn apply_word(w: &MCWord, c: &CurveClass) -> CurveClass {
    let n = c.n();
    assert_eq!(n, w.n, "word and curve on different spheres");
    let mut cur = c.seq().to_vec();
    for g in &w.gens {
        cur = reduce(&substitute(&cur, &g.images(n)));
    }
    CurveClass::from_trusted(n, &cur).expect("homeomorphisms preserve essential curves")
}

/// Start index and length of a cyclic block, or None if not consecutive.
fn block_start(n: usize, b: &[usize]) -> Option<(usize, usize)> {
    let mut inside = vec![false; n + 1];
    for &p in b {
        if p < 1 || p > n || inside[p] {
            return None;
        }
        inside[p] = true;
    }
    if b.is_empty() || b.len() >= n {
        return None;
    }
    let starts: Vec<usize> = (1..=n).filter(|&p| inside[p] && !inside[if p == 1 { n } else { p - 1 }]).collect();
    (starts.len() == 1).then(|| (starts[0], b.len()))
}

/// Word exchanging adjacent cyclic blocks B1 and B2 (B2 following B1) by a
/// counterclockwise half-twist about the round curve of their union: every
/// strand of B1 crosses every strand of B2 once, with no internal twisting.
pub fn block_transposition(n: usize, b1: &[usize], b2: &[usize]) -> Result<MCWord, MapError> {
    let bad = || MapError::InvalidBlocks(b1.to_vec(), b2.to_vec());
    let (a, s1) = block_start(n, b1).ok_or_else(bad)?;
    let (c, s2) = block_start(n, b2).ok_or_else(bad)?;
    if c != (a - 1 + s1) % n + 1 || s1 + s2 + 2 > n {
        return Err(bad());
    }
    let sigmas = |start: usize| -> Vec<Generator> {
        let mut g = Vec::new();
        for t in 0..s2 {
            let b = start + s1 + t;
            for i in (b - s1..b).rev() {
                g.push(Generator::sigma(i, 1));
            }
        }
        g
    };
    if a + s1 + s2 <= n {
        return MCWord::new(n, sigmas(a));
    }
    // The union contains p_n: move it to start at p_1, twist, move back.
    let t = a - 1;
    let mut gens = vec![Generator::Recoordinate { k: t }];
    gens.extend(sigmas(1));
    gens.push(Generator::Recoordinate { k: n - t });
    MCWord::new(n, gens)
}

/// T_c^{sign/2}(x) for c the round curve about B1 and B2.
pub fn half_twist(n: usize, b1: &[usize], b2: &[usize], sign: i64, x: &CurveClass) -> Result<CurveClass, MapError> {
    Ok(block_transposition(n, b1, b2)?.power(sign).apply(x))
}

/// Half-twist word about a curve bounding exactly two punctures on one side.
/// Round curves are handled by a block transposition; any other curve is
/// first untangled to a round one and the twist is conjugated back, with
/// the sign flipped when the untangling word reverses orientation.
pub fn two_puncture_twist(c: &CurveClass, sign: i64) -> Result<MCWord, MapError> {
    let n = c.n();
    let side = two_side(c)?;
    if round_curve(n, &side).ok().as_ref() == Some(c) {
        let (a, _) = block_start(n, &side).ok_or(MapError::Curve(CurveError::InvalidBlock(side.clone())))?;
        let b = a % n + 1;
        return Ok(block_transposition(n, &[a], &[b])?.power(sign));
    }
    let (mut g, st) = untangle(n, std::slice::from_ref(c));
    // A short curve may still enclose punctures that are not adjacent;
    // a few more generators bring it to a round one.
    let is_round = |x: &CurveClass| two_side(x).is_ok_and(|sd| round_curve(n, &sd).ok().as_ref() == Some(x));
    let (extra, r) = explore(n, &st, 4, 50_000)
        .into_iter()
        .filter(|(s, _)| is_round(&s[0]))
        .map(|(s, w)| (w, s[0].clone()))
        .min_by(|a, b| (a.0.len(), &a.1).cmp(&(b.0.len(), &b.1)))
        .ok_or_else(|| MapError::Curve(CurveError::InvalidBlock(two_side(&st[0]).unwrap_or_default())))?;
    g.extend(extra);
    let r = &r;
    let flips = g.iter().filter(|x| matches!(x, Generator::Reflect)).count();
    let s = if flips % 2 == 1 { -sign } else { sign };
    let base = two_puncture_twist(r, s)?;
    let gw = MCWord { n, gens: g };
    Ok(gw.then(&base).then(&gw.inverse()))
}

/// The two punctures a curve cuts off, on whichever side has two.
fn two_side(c: &CurveClass) -> Result<Vec<usize>, MapError> {
    let n = c.n();
    let fin = c.enclosed_punctures();
    let side: Vec<usize> = if fin.len() == 2 { fin } else { (1..=n).filter(|p| !fin.contains(p)).collect() };
    if side.len() != 2 {
        return Err(MapError::Curve(CurveError::InvalidBlock(side)));
    }
    Ok(side)
}

/// Full twist about the round curve of a cyclic block: the square of the
/// Garside element of the strands inside.
pub fn full_twist(n: usize, block: &[usize]) -> Result<MCWord, MapError> {
    let (a, s) = block_start(n, block).ok_or_else(|| MapError::InvalidBlocks(block.to_vec(), vec![]))?;
    let (fa, fs) = if a + s - 1 <= n - 1 {
        (a, s)
    } else {
        let fin = finite_block(n, block)?;
        (fin[0], fin.len())
    };
    let mut gens = Vec::new();
    for _ in 0..fs {
        for i in fa..fa + fs - 1 {
            gens.push(Generator::sigma(i, 1));
        }
    }
    MCWord::new(n, gens)
}

/// All generators used by searches, in a fixed order.
pub fn search_generators(n: usize) -> Vec<Generator> {
    let mut g = Vec::new();
    for i in 1..=n - 2 {
        g.push(Generator::sigma(i, 1));
        g.push(Generator::sigma(i, -1));
    }
    g.push(Generator::Reflect);
    for k in 1..n {
        g.push(Generator::Recoordinate { k });
    }
    g
}

type State = Vec<CurveClass>;

fn apply_gen_all(g: Generator, s: &[CurveClass]) -> State {
    s.iter().map(|c| apply_generator(g, c)).collect()
}

fn cost(s: &[CurveClass]) -> usize {
    s.iter().map(CurveClass::len).sum()
}

/// Greedy untangling: repeatedly apply the generator that most reduces total
/// length. Returns the word and the final state.
fn untangle(n: usize, s: &[CurveClass]) -> (Vec<Generator>, State) {
    let gens = search_generators(n);
    let mut cur: State = s.to_vec();
    let mut word = Vec::new();
    for _ in 0..1000 {
        let c0 = cost(&cur);
        let best = gens
            .iter()
            .map(|&g| {
                let next = apply_gen_all(g, &cur);
                (cost(&next), g, next)
            })
            .min_by_key(|(c, _, _)| *c);
        match best {
            Some((c, g, next)) if c < c0 => {
                word.push(g);
                cur = next;
            }
            _ => break,
        }
    }
    (word, cur)
}

/// Breadth-first layers of states reachable from `start`, keeping a word for
/// each. Stops after `depth` layers or `budget` states.
fn explore(n: usize, start: &State, depth: usize, budget: usize) -> HashMap<State, Vec<Generator>> {
    let gens = search_generators(n);
    let mut seen: HashMap<State, Vec<Generator>> = HashMap::new();
    seen.insert(start.clone(), Vec::new());
    let mut layer = vec![start.clone()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in &layer {
            let w = seen[s].clone();
            for &g in &gens {
                let t = apply_gen_all(g, s);
                if !seen.contains_key(&t) {
                    let mut w2 = w.clone();
                    w2.push(g);
                    seen.insert(t.clone(), w2);
                    next.push(t);
                    if seen.len() >= budget {
                        return seen;
                    }
                }
            }
        }
        layer = next;
    }
    seen
}

/// Meet in the middle: a word carrying `a` to `b` of length at most 2*half.
fn meet(n: usize, a: &State, b: &State, half: usize, budget: usize) -> Option<Vec<Generator>> {
    let fa = explore(n, a, half, budget);
    let fb = explore(n, b, half, budget);
    let mut best: Option<Vec<Generator>> = None;
    for (s, wa) in &fa {
        if let Some(wb) = fb.get(s) {
            let mut w = wa.clone();
            w.extend(wb.iter().rev().map(|g| g.inverse(n)));
            if best.as_ref().is_none_or(|x| (w.len(), &w) < (x.len(), x)) {
                best = Some(w);
            }
        }
    }
    best
}

fn dfs_exact(n: usize, gens: &[Generator], cur: &State, target: &State, left: usize, word: &mut Vec<Generator>) -> bool {
    if cur == target {
        return true;
    }
    if left == 0 {
        return false;
    }
    for &g in gens {
        word.push(g);
        if dfs_exact(n, gens, &apply_gen_all(g, cur), target, left - 1, word) {
            return true;
        }
        word.pop();
    }
    false
}

/// Finds a word w with w(a) = b for every pair. Short words are found by
/// exhaustive iterative deepening (lexicographically least among minimal
/// length); longer ones by greedy untangling of both sides joined by a short
/// bidirectional search. Returns None if nothing is found within `max_len`
/// by the exhaustive stages and the constructive stage fails.
pub fn word_search(pairs: &[(CurveClass, CurveClass)], max_len: usize) -> Option<MCWord> {
    let n = pairs.first()?.0.n();
    let a: State = pairs.iter().map(|p| p.0.clone()).collect();
    let b: State = pairs.iter().map(|p| p.1.clone()).collect();
    let gens = search_generators(n);
    let verify = |w: &MCWord| pairs.iter().all(|(x, y)| &w.apply(x) == y);
    for depth in 0..=max_len.min(3) {
        let mut word = Vec::new();
        if dfs_exact(n, &gens, &a, &b, depth, &mut word) {
            return Some(MCWord { n, gens: word });
        }
    }
    let (ua, a2) = untangle(n, &a);
    let (ub, b2) = untangle(n, &b);
    if let Some(mid) = meet(n, &a2, &b2, 3, 60_000) {
        let mut gens = ua;
        gens.extend(mid);
        gens.extend(ub.iter().rev().map(|g| g.inverse(n)));
        let w = MCWord { n, gens };
        if verify(&w) {
            return Some(w);
        }
    }
    let half = max_len.div_ceil(2);
    meet(n, &a, &b, half, 400_000).map(|g| MCWord { n, gens: g }).filter(verify)
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = match *self {
            Generator::Sigma { i, sign } => serde_json::json!(["sigma", i, sign]),
            Generator::Reflect => serde_json::json!(["reflect"]),
            Generator::Recoordinate { k } => serde_json::json!(["recoordinate", k]),
        };
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<serde_json::Value> = Vec::deserialize(d)?;
        let num = |i: usize| v.get(i).and_then(|x| x.as_i64()).ok_or_else(|| D::Error::custom("missing integer"));
        match v.first().and_then(|x| x.as_str()) {
            Some("sigma") if v.len() == 3 => Ok(Generator::Sigma { i: num(1)?.max(0) as usize, sign: num(2)? as i8 }),
            Some("reflect") if v.len() == 1 => Ok(Generator::Reflect),
            Some("recoordinate") if v.len() == 2 => Ok(Generator::Recoordinate { k: num(1)?.max(0) as usize }),
            _ => Err(D::Error::custom("unknown generator")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct WordJson {
    n: usize,
    word: Vec<Generator>,
}

impl Serialize for MCWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WordJson { n: self.n, word: self.gens.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MCWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = WordJson::deserialize(d)?;
        MCWord::new(w.n, w.word).map_err(D::Error::custom)
    }
}

/// Distinct images of a set of curves under all words up to a length; a
/// convenient probe corpus.
pub fn orbit_corpus(seeds: &[CurveClass], depth: usize, cap: usize) -> Vec<CurveClass> {
    let Some(first) = seeds.first() else { return Vec::new() };
    let gens = search_generators(first.n());
    let mut seen: HashSet<CurveClass> = seeds.iter().cloned().collect();
    let mut out: Vec<CurveClass> = seeds.to_vec();
    let mut layer = seeds.to_vec();
    for _ in 0..depth {
        let mut next = Vec::new();
        for c in &layer {
            for &g in &gens {
                let d = apply_generator(g, c);
                if seen.insert(d.clone()) {
                    out.push(d.clone());
                    next.push(d);
                    if out.len() >= cap {
                        return out;
                    }
                }
            }
        }
        layer = next;
    }
    out
}
