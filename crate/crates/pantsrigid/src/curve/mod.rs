//! Curves on the n-punctured sphere.
//!
//! Finite punctures q_1..q_{n-1} sit at (k, 0) and p_n is the point at
//! infinity. Each q_k emits a downward vertical ray; the complement of the
//! rays is a disk, so a closed curve is recorded by its signed ray crossings.
//! A letter `(k, +1)` crosses ray k from left to right.

mod arrangement;
mod poly;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use arrangement::{fills, geometric_intersection, Arrangement, Chord};
pub use poly::{extract, extract_robust, q as ratio, realize, PolyChain, Point, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("need at least 4 punctures, got {0}")]
    TooFewPunctures(usize),
    #[error("ray {ray} out of range for n = {n}")]
    RayOutOfRange { ray: usize, n: usize },
    #[error("crossing sign must be +1 or -1, got {0}")]
    BadSign(i64),
    #[error("curve is not essential")]
    NotEssential,
    #[error("curve is not simple")]
    NotSimple,
    #[error("invalid block {0:?}")]
    InvalidBlock(Vec<usize>),
    #[error("degenerate polygon: {0}")]
    Degenerate(String),
    #[error("curves live on different spheres (n = {0} and n = {1})")]
    MismatchedN(usize, usize),
}

/// The collinear model of S_{0,n}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SphereModel {
    n: usize,
}

impl SphereModel {
    pub fn new(n: usize) -> Result<Self, CurveError> {
        if n < 4 || n > 200 {
            return Err(CurveError::TooFewPunctures(n));
        }
        Ok(SphereModel { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rays(&self) -> usize {
        self.n - 1
    }

    /// Complexity of the sphere, the size of a pants decomposition.
    pub fn complexity(&self) -> usize {
        self.n - 3
    }

    pub fn puncture_position(&self, k: usize) -> Option<(i64, i64)> {
        (1..self.n).contains(&k).then_some((k as i64, 0))
    }
}

/// One signed crossing with a ray.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub ray: u8,
    pub sign: i8,
}

impl Letter {
    pub fn new(ray: usize, sign: i8) -> Self {
        debug_assert!(ray >= 1 && ray < 256 && (sign == 1 || sign == -1));
        Letter { ray: ray as u8, sign }
    }

    pub fn pos(ray: usize) -> Self {
        Letter::new(ray, 1)
    }

    pub fn neg(ray: usize) -> Self {
        Letter::new(ray, -1)
    }

    pub fn inv(self) -> Self {
        Letter { ray: self.ray, sign: -self.sign }
    }

    pub fn ray(self) -> usize {
        self.ray as usize
    }

    /// Symbol order: by ray, then +1 before -1.
    pub fn code(self) -> u16 {
        2 * (self.ray as u16 - 1) + u16::from(self.sign < 0)
    }

    // Sides of the cut disk: L_k = 2(k-1), R_k = 2(k-1)+1.
    pub(crate) fn out_side(self) -> usize {
        2 * (self.ray as usize - 1) + usize::from(self.sign < 0)
    }

    pub(crate) fn in_side(self) -> usize {
        2 * (self.ray as usize - 1) + usize::from(self.sign > 0)
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.code().cmp(&other.code())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn inverse_word(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|l| l.inv()).collect()
}

/// Free and cyclic reduction. The result does not depend on the order in
/// which cancelling pairs are removed.
pub fn reduce(raw: &[Letter]) -> Vec<Letter> {
    let mut stack: Vec<Letter> = Vec::with_capacity(raw.len());
    for &l in raw {
        if stack.last() == Some(&l.inv()) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    let (mut lo, mut hi) = (0, stack.len());
    while hi - lo >= 2 && stack[lo] == stack[hi - 1].inv() {
        lo += 1;
        hi -= 1;
    }
    stack[lo..hi].to_vec()
}

/// Booth's least rotation.
pub(crate) fn least_rotation<T: Ord + Copy>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: usize| s[i % n];
    let mut f = vec![usize::MAX; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = at(j);
        let mut i = f[j - k - 1];
        while i != usize::MAX && sj != at(k + i + 1) {
            if sj < at(k + i + 1) {
                k = j - i - 1;
            }
            i = f[i];
        }
        if i == usize::MAX && sj != at(k) {
            if sj < at(k) {
                k = j;
            }
            f[j - k] = usize::MAX;
        } else {
            f[j - k] = if i == usize::MAX { 0 } else { i + 1 };
        }
    }
    k % n
}

fn rotated(w: &[Letter], r: usize) -> Vec<Letter> {
    w[r..].iter().chain(&w[..r]).copied().collect()
}

/// Lexicographic minimum over rotations and over reversal with sign flip.
pub fn canonical_word(w: &[Letter]) -> Vec<Letter> {
    let a = rotated(w, least_rotation(w));
    let inv = inverse_word(w);
    let b = rotated(&inv, least_rotation(&inv));
    if b < a {
        b
    } else {
        a
    }
}

/// True if the cyclic word is not a proper power.
pub fn is_primitive(w: &[Letter]) -> bool {
    let n = w.len();
    (1..n).filter(|d| n % d == 0).all(|d| (0..n).any(|i| w[i] != w[(i + d) % n]))
}

/// Finite punctures separated from infinity: q_k is enclosed iff ray k is
/// crossed an odd number of times.
pub fn enclosed_of(n: usize, w: &[Letter]) -> Vec<usize> {
    let mut parity = vec![false; n];
    for l in w {
        parity[l.ray()] ^= true;
    }
    (1..n).filter(|&k| parity[k]).collect()
}

pub fn is_essential_word(n: usize, w: &[Letter]) -> bool {
    let e = enclosed_of(n, w).len();
    e >= 2 && e + 2 <= n
}

/// Canonical isotopy class of an essential simple closed curve.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveClass {
    n: u8,
    seq: Vec<Letter>,
}

impl CurveClass {
    /// Validating constructor for arbitrary crossing sequences.
    pub fn from_word(n: usize, raw: &[Letter]) -> Result<Self, CurveError> {
        SphereModel::new(n)?;
        if let Some(l) = raw.iter().find(|l| l.ray == 0 || l.ray() >= n) {
            return Err(CurveError::RayOutOfRange { ray: l.ray(), n });
        }
        let w = reduce(raw);
        if !is_essential_word(n, &w) {
            return Err(CurveError::NotEssential);
        }
        if !is_primitive(&w) || Arrangement::new(n, &[&w]).self_crossings(0) > 0 {
            return Err(CurveError::NotSimple);
        }
        Ok(CurveClass { n: n as u8, seq: canonical_word(&w) })
    }

    /// Constructor for words known to represent simple curves, such as
    /// images of simple curves under mapping classes.
    pub(crate) fn from_trusted(n: usize, raw: &[Letter]) -> Result<Self, CurveError> {
        let w = reduce(raw);
        if !is_essential_word(n, &w) {
            return Err(CurveError::NotEssential);
        }
        debug_assert!(is_primitive(&w));
        Ok(CurveClass { n: n as u8, seq: canonical_word(&w) })
    }

    pub fn from_pairs(n: usize, pairs: &[(i64, i64)]) -> Result<Self, CurveError> {
        let mut w = Vec::with_capacity(pairs.len());
        for &(k, s) in pairs {
            if k < 1 || k as usize >= n {
                return Err(CurveError::RayOutOfRange { ray: k.max(0) as usize, n });
            }
            if s != 1 && s != -1 {
                return Err(CurveError::BadSign(s));
            }
            w.push(Letter::new(k as usize, s as i8));
        }
        CurveClass::from_word(n, &w)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn seq(&self) -> &[Letter] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn pairs(&self) -> Vec<(i64, i64)> {
        self.seq.iter().map(|l| (l.ray as i64, l.sign as i64)).collect()
    }

    pub fn enclosed_punctures(&self) -> Vec<usize> {
        enclosed_of(self.n(), &self.seq)
    }

    pub fn crossing_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.n() - 1];
        for l in &self.seq {
            c[l.ray() - 1] += 1;
        }
        c
    }

    pub fn intersection(&self, other: &CurveClass) -> Result<usize, CurveError> {
        geometric_intersection(self, other)
    }

    /// Intersection for curves already known to share n.
    pub fn i(&self, other: &CurveClass) -> usize {
        geometric_intersection(self, other).expect("curves on the same sphere")
    }

    pub fn disjoint(&self, other: &CurveClass) -> bool {
        self.i(other) == 0
    }
}

impl Ord for CurveClass {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.seq.len(), &self.seq).cmp(&(other.n, other.seq.len(), &other.seq))
    }
}

impl PartialOrd for CurveClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.seq {
            write!(f, "{}{}", if l.sign > 0 { "x" } else { "X" }, l.ray)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CurveJson {
    n: usize,
    seq: Vec<(i64, i64)>,
}

impl Serialize for CurveClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CurveJson { n: self.n(), seq: self.pairs() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CurveClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = CurveJson::deserialize(d)?;
        CurveClass::from_pairs(raw.n, &raw.seq).map_err(serde::de::Error::custom)
    }
}

/// Validates a cyclic block and returns its finite representative, i.e. the
/// side that avoids p_n, sorted.
pub fn finite_block(n: usize, block: &[usize]) -> Result<Vec<usize>, CurveError> {
    let bad = || CurveError::InvalidBlock(block.to_vec());
    let mut inside = vec![false; n + 1];
    for &p in block {
        if p < 1 || p > n || inside[p] {
            return Err(bad());
        }
        inside[p] = true;
    }
    if block.len() < 2 || block.len() + 2 > n {
        return Err(bad());
    }
    // Cyclically consecutive iff exactly one in->out transition.
    let transitions = (1..=n).filter(|&p| inside[p] && !inside[p % n + 1]).count();
    if transitions != 1 {
        return Err(bad());
    }
    let fin: Vec<usize> = if inside[n] {
        (1..n).filter(|&p| !inside[p]).collect()
    } else {
        (1..n).filter(|&p| inside[p]).collect()
    };
    Ok(fin)
}

/// The round curve about a cyclic block of punctures.
pub fn round_curve(n: usize, block: &[usize]) -> Result<CurveClass, CurveError> {
    SphereModel::new(n)?;
    let fin = finite_block(n, block)?;
    let w: Vec<Letter> = fin.iter().map(|&k| Letter::pos(k)).collect();
    CurveClass::from_trusted(n, &w)
}
