//! The finite rigid sets: chord curves Γn, the subgraph Zn they span, the
//! twisted pentagon complex X5, and its copies X5^W pushed into larger
//! spheres through the five-holed complementary piece of W.
//!
//! Chords α_{i,j} of the n-gon are identified with the cyclic block
//! {p_i, ..., p_{j-1}}. The pentagon labels used throughout are
//! α = {1,2}, β = {3,4}, δ = {5,1}, ε = {2,3}, γ = {4,5}, so that
//! A = {α,β} sits at the top of the pentagon A, B, C, D, E.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::curve::{round_curve, CurveClass, CurveError, Letter};
use crate::mapclass::{two_puncture_twist, MapError};
use crate::pants::{Multicurve, PantsError, PantsSubgraph, PantsVertex};

#[derive(Debug, Error)]
pub enum RigidError {
    #[error("need n >= 5, got {0}")]
    TooSmall(usize),
    #[error("multicurve has {got} curves, expected {expected}")]
    WrongDeficiency { expected: usize, got: usize },
    #[error("complementary pieces are not a five-holed sphere plus pants")]
    WrongComponent,
    #[error("multicurve is not made of chord curves")]
    NotInGamma,
    #[error("n = {0} is above the build limit {1}")]
    Limit(usize, usize),
    #[error(transparent)]
    Pants(#[from] PantsError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// A chord α_{i,j}, 1 <= i < j <= n, of non-adjacent sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chord {
    pub i: usize,
    pub j: usize,
}

impl Chord {
    pub fn new(n: usize, i: usize, j: usize) -> Option<Chord> {
        (1 <= i && i + 2 <= j && j <= n && !(i == 1 && j == n)).then_some(Chord { i, j })
    }

    pub fn block(&self) -> Vec<usize> {
        (self.i..self.j).collect()
    }

    pub fn is_chain(&self, n: usize) -> bool {
        self.j == self.i + 2 || (self.i == 2 && self.j == n) || (self.i == 1 && self.j == n - 1)
    }

    pub fn curve(&self, n: usize) -> CurveClass {
        round_curve(n, &self.block()).expect("chord blocks are proper")
    }
}

#[derive(Clone, Debug)]
pub struct GammaSystem {
    pub n: usize,
    pub chords: Vec<Chord>,
    pub curves: Vec<CurveClass>,
}

impl GammaSystem {
    /// Curves of size-two blocks.
    pub fn chain(&self) -> Vec<CurveClass> {
        self.chords.iter().zip(&self.curves).filter(|(c, _)| c.is_chain(self.n)).map(|(_, c)| c.clone()).collect()
    }

    pub fn contains(&self, c: &CurveClass) -> bool {
        self.curves.contains(c)
    }

    pub fn chord_of(&self, c: &CurveClass) -> Option<Chord> {
        self.curves.iter().position(|x| x == c).map(|k| self.chords[k])
    }
}

pub fn gamma(n: usize) -> Result<GammaSystem, RigidError> {
    if n < 5 {
        return Err(RigidError::TooSmall(n));
    }
    let mut chords = Vec::new();
    for i in 1..=n {
        for j in i + 2..=n {
            if let Some(c) = Chord::new(n, i, j) {
                chords.push(c);
            }
        }
    }
    let curves = chords.iter().map(|c| c.curve(n)).collect();
    Ok(GammaSystem { n, chords, curves })
}

/// The pentagon curves by name.
pub fn gamma5_named() -> [(&'static str, CurveClass); 5] {
    let rc = |b: &[usize]| round_curve(5, b).expect("block");
    [
        ("alpha", rc(&[1, 2])),
        ("beta", rc(&[3, 4])),
        ("delta", rc(&[5, 1])),
        ("epsilon", rc(&[2, 3])),
        ("gamma", rc(&[4, 5])),
    ]
}

/// A, B, C, D, E around the core pentagon.
pub fn core_pentagon() -> [PantsVertex; 5] {
    let [(_, al), (_, be), (_, de), (_, ep), (_, ga)] = gamma5_named();
    let v = |a: &CurveClass, b: &CurveClass| PantsVertex::new(5, &[a.clone(), b.clone()]).expect("disjoint");
    [v(&al, &be), v(&de, &be), v(&de, &ep), v(&ga, &ep), v(&al, &ga)]
}

fn curve_name(c: &CurveClass) -> String {
    if c.n() == 5 {
        if let Some((name, _)) = gamma5_named().iter().find(|(_, x)| x == c) {
            return name.to_string();
        }
    }
    c.to_string()
}

/// All (n-3)-subsets of `curves` that are pairwise disjoint.
fn pants_subsets(n: usize, curves: &[CurveClass]) -> Vec<PantsVertex> {
    let m = curves.len();
    let disjoint: Vec<Vec<bool>> = (0..m).map(|a| (0..m).map(|b| a != b && curves[a].disjoint(&curves[b])).collect()).collect();
    let mut out = Vec::new();
    fn rec(k: usize, start: usize, chosen: &mut Vec<usize>, disjoint: &[Vec<bool>], out: &mut Vec<Vec<usize>>) {
        if chosen.len() == k {
            out.push(chosen.clone());
            return;
        }
        for x in start..disjoint.len() {
            if chosen.iter().all(|&y| disjoint[x][y]) {
                chosen.push(x);
                rec(k, x + 1, chosen, disjoint, out);
                chosen.pop();
            }
        }
    }
    let mut idx = Vec::new();
    rec(n - 3, 0, &mut Vec::new(), &disjoint, &mut idx);
    for s in idx {
        out.push(PantsVertex::trusted(n, s.iter().map(|&i| curves[i].clone()).collect()));
    }
    out.sort();
    out
}

/// Pants decompositions made of chord curves, with all elementary moves.
pub fn build_z(n: usize) -> Result<PantsSubgraph, RigidError> {
    let g = gamma(n)?;
    let mut z = PantsSubgraph::new(n);
    for v in pants_subsets(n, &g.curves) {
        let id = z.add_vertex(v);
        z.label_vertex(id, "Z");
    }
    z.close_edges();
    Ok(z)
}

/// Image of a graph under a curve map, carrying edges along.
fn push_graph(g: &PantsSubgraph, f: impl Fn(&CurveClass) -> CurveClass, extra: &[CurveClass], n: usize) -> PantsSubgraph {
    let mut h = PantsSubgraph::new(n);
    for v in g.vertices() {
        let mut cs: Vec<CurveClass> = v.curves().iter().map(&f).collect();
        cs.extend_from_slice(extra);
        h.add_vertex(PantsVertex::trusted(n, cs));
    }
    for (a, b) in g.edges() {
        h.add_edge_unchecked(a, b);
    }
    h
}

/// Z5 with its ten images under the half-twists T_c^{±1/2}, c in Γ5.
/// Vertex labels name the pentagons a vertex lies on: "pentagon=core" or
/// "pentagon=<curve><sign>".
pub fn build_x5() -> Result<PantsSubgraph, RigidError> {
    let z = build_z(5)?;
    let mut x = PantsSubgraph::new(5);
    let mut core = z.clone();
    relabel(&mut core, "pentagon=core");
    x.merge(&core);
    for (name, c) in gamma5_named() {
        for (s, sign) in [(1, "+"), (-1, "-")] {
            let t = two_puncture_twist(&c, s)?;
            let mut img = push_graph(&z, |u| t.apply(u), &[], 5);
            relabel(&mut img, &format!("pentagon={name}{sign}"));
            x.merge(&img);
        }
    }
    Ok(x)
}

fn relabel(g: &mut PantsSubgraph, label: &str) {
    for i in 0..g.vertex_count() {
        g.label_vertex(i, label);
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    for (a, b) in edges {
        g.label_edge(a, b, label);
    }
}

/// The identification of S_{0,k} with the k-holed piece cut out by W
/// (k = 5 unless built with `with_holes`). Puncture j of S_{0,k} stands
/// for the block B_j of punctures of S_{0,n} lying behind that boundary;
/// B_k is the one holding p_n.
#[derive(Clone, Debug)]
pub struct SubsurfaceMap {
    pub n: usize,
    pub k: usize,
    pub w: Multicurve,
    pub blocks: Vec<Vec<usize>>,
}

impl SubsurfaceMap {
    pub fn new(n: usize, w: &[CurveClass]) -> Result<Self, RigidError> {
        Self::with_holes(n, w, 5)
    }

    pub fn with_holes(n: usize, w: &[CurveClass], k: usize) -> Result<Self, RigidError> {
        if n < 5 || k < 4 || k > n {
            return Err(RigidError::TooSmall(n));
        }
        if w.len() != n - k {
            return Err(RigidError::WrongDeficiency { expected: n - k, got: w.len() });
        }
        let mc = Multicurve::new(n, w)?;
        // Finite sides form a laminar family of intervals of 1..n-1.
        let mut nodes: Vec<Vec<usize>> = mc.curves().iter().map(|c| c.enclosed_punctures()).collect();
        nodes.push((1..n).collect());
        let mut found = None;
        for (ix, b) in nodes.iter().enumerate() {
            let root = ix + 1 == nodes.len();
            let children: Vec<&Vec<usize>> = nodes
                .iter()
                .enumerate()
                .filter(|&(j, c)| {
                    j != ix
                        && c.len() < b.len()
                        && c.iter().all(|p| b.contains(p))
                        && !nodes.iter().enumerate().any(|(m, d)| {
                            m != ix && m != j && d.len() < b.len() && d.len() > c.len() && c.iter().all(|p| d.contains(p)) && d.iter().all(|p| b.contains(p))
                        })
                })
                .map(|(_, c)| c)
                .collect();
            let mut objects: Vec<Vec<usize>> = children.iter().map(|c| (*c).clone()).collect();
            for &p in b {
                if !children.iter().any(|c| c.contains(&p)) {
                    objects.push(vec![p]);
                }
            }
            objects.sort();
            objects.push(if root { vec![n] } else { (1..=n).filter(|p| !b.contains(p)).collect() });
            match objects.len() {
                3 => {}
                m if m == k && found.is_none() => found = Some(objects),
                _ => return Err(RigidError::WrongComponent),
            }
        }
        let blocks = found.ok_or(RigidError::WrongComponent)?;
        Ok(SubsurfaceMap { n, k, w: mc, blocks })
    }

    /// Collapsing B_j to a point turns a crossing of ray j of S_{0,k} into
    /// crossings of all the rays below B_j.
    pub fn apply_curve(&self, c: &CurveClass) -> CurveClass {
        let mut w = Vec::new();
        for l in c.seq() {
            let rays = &self.blocks[l.ray() - 1];
            if l.sign > 0 {
                w.extend(rays.iter().map(|&k| Letter::pos(k)));
            } else {
                w.extend(rays.iter().rev().map(|&k| Letter::neg(k)));
            }
        }
        CurveClass::from_word(self.n, &w).expect("image of a simple curve is simple")
    }

    pub fn apply_vertex(&self, u: &PantsVertex) -> PantsVertex {
        let mut cs: Vec<CurveClass> = u.curves().iter().map(|c| self.apply_curve(c)).collect();
        cs.extend_from_slice(self.w.curves());
        PantsVertex::trusted(self.n, cs)
    }

    /// h^W(X) with every vertex and edge labelled by W.
    pub fn image(&self, x5: &PantsSubgraph) -> PantsSubgraph {
        let mut g = PantsSubgraph::new(self.n);
        let ids: Vec<usize> = x5.vertices().iter().map(|u| g.add_vertex(self.apply_vertex(u))).collect();
        let tag = format!("W={}", self.w);
        for (i, &id) in ids.iter().enumerate() {
            g.label_vertex(id, &tag);
            for l in x5.vertex_labels(i) {
                g.label_vertex(id, &l);
            }
        }
        for (a, b) in x5.edges() {
            g.add_edge_unchecked(ids[a], ids[b]);
            g.label_edge(ids[a], ids[b], &tag);
        }
        g
    }
}

/// Deficiency-two multicurves of chord curves whose big piece is five-holed.
pub fn five_holed_multicurves(n: usize) -> Result<Vec<SubsurfaceMap>, RigidError> {
    let g = gamma(n)?;
    if n == 5 {
        return Ok(vec![SubsurfaceMap::new(5, &[])?]);
    }
    let m = g.curves.len();
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
    while let Some((chosen, start)) = stack.pop() {
        if chosen.len() == n - 5 {
            let w: Vec<CurveClass> = chosen.iter().map(|&i| g.curves[i].clone()).collect();
            match SubsurfaceMap::new(n, &w) {
                Ok(s) => out.push(s),
                Err(RigidError::WrongComponent) => {}
                Err(e) => return Err(e),
            }
            continue;
        }
        for x in (start..m).rev() {
            if chosen.iter().all(|&y| g.curves[x].disjoint(&g.curves[y])) {
                let mut c = chosen.clone();
                c.push(x);
                stack.push((c, x + 1));
            }
        }
    }
    out.sort_by(|a, b| a.w.cmp(&b.w));
    Ok(out)
}

/// Zn together with h^W(X5) for every admissible W.
pub fn build_x(n: usize, max_n: usize) -> Result<PantsSubgraph, RigidError> {
    if n > max_n {
        return Err(RigidError::Limit(n, max_n));
    }
    if n == 5 {
        return build_x5();
    }
    let x5 = build_x5()?;
    let maps = five_holed_multicurves(n)?;
    let pieces: Vec<PantsSubgraph> = maps.par_iter().map(|h| h.image(&x5)).collect();
    let mut x = build_z(n)?;
    for p in &pieces {
        x.merge(p);
    }
    Ok(x)
}

/// How often each vertex of Xn is produced by distinct pieces.
pub fn piece_overlaps(x: &PantsSubgraph) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for i in 0..x.vertex_count() {
        let k = x.vertex_labels(i).iter().filter(|l| l.starts_with("W=")).count();
        *hist.entry(k).or_insert(0) += 1;
    }
    hist
}

pub fn pentagon_label(c: &CurveClass, sign: i64) -> String {
    format!("pentagon={}{}", curve_name(c), if sign > 0 { "+" } else { "-" })
}
