//! Pants decompositions and bounded pieces of the pants graph.
//!
//! Neighbours are generated geometrically. A dual curve to α in P is built
//! from lassos around the four boundary objects of the four-holed sphere
//! containing α, and the Farey fan around α is walked by repeatedly taking
//! triangle completions, which come from smoothing α ∪ α' at its two
//! crossings.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::curve::{inverse_word, reduce, Arrangement, Chord, CurveClass, CurveError, Letter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PantsError {
    #[error("expected {expected} curves, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("curves {0} and {1} intersect")]
    NotDisjoint(CurveClass, CurveClass),
    #[error("curve {0} appears twice")]
    Duplicate(CurveClass),
    #[error("curve is not essential")]
    NotEssential,
    #[error("curves live on different spheres")]
    MismatchedN,
    #[error("the two vertices are not joined by an elementary move")]
    NotAnEdge,
    #[error("not a cycle: {0}")]
    NotACycle(String),
    #[error("curve {0} is not in the vertex")]
    NotInVertex(CurveClass),
    #[error("generation limit exceeded after {count} vertices")]
    Limit { count: usize },
    #[error("malformed graph: {0}")]
    Malformed(String),
    #[error("internal geometry failure: {0}")]
    Geometry(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Pairwise disjoint, pairwise distinct essential curves, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multicurve {
    curves: Vec<CurveClass>,
}

impl Multicurve {
    pub fn new(n: usize, curves: &[CurveClass]) -> Result<Self, PantsError> {
        if curves.iter().any(|c| c.n() != n) {
            return Err(PantsError::MismatchedN);
        }
        let mut cs = curves.to_vec();
        cs.sort();
        for w in cs.windows(2) {
            if w[0] == w[1] {
                return Err(PantsError::Duplicate(w[0].clone()));
            }
        }
        for (i, a) in cs.iter().enumerate() {
            for b in &cs[i + 1..] {
                if !a.disjoint(b) {
                    return Err(PantsError::NotDisjoint(a.clone(), b.clone()));
                }
            }
        }
        Ok(Multicurve { curves: cs })
    }

    /// For curves already known to be pairwise disjoint.
    pub(crate) fn trusted(mut curves: Vec<CurveClass>) -> Self {
        curves.sort();
        curves.dedup();
        Multicurve { curves }
    }

    pub fn curves(&self) -> &[CurveClass] {
        &self.curves
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn contains(&self, c: &CurveClass) -> bool {
        self.curves.binary_search(c).is_ok()
    }

    /// (n - 3) - |Q|.
    pub fn deficiency(&self, n: usize) -> usize {
        (n - 3).saturating_sub(self.curves.len())
    }

    pub fn intersection(&self, other: &Multicurve) -> Multicurve {
        Multicurve { curves: self.curves.iter().filter(|c| other.contains(c)).cloned().collect() }
    }
}

impl fmt::Display for Multicurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.curves.iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// The deficiency-one multicurve naming the Farey graph that holds an edge.
pub type FareyId = Multicurve;

/// A pants decomposition: n - 3 disjoint curves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PantsVertex {
    n: u8,
    mc: Multicurve,
}

impl PantsVertex {
    pub fn new(n: usize, curves: &[CurveClass]) -> Result<Self, PantsError> {
        if curves.len() != n.saturating_sub(3) {
            return Err(PantsError::WrongCount { expected: n.saturating_sub(3), got: curves.len() });
        }
        Ok(PantsVertex { n: n as u8, mc: Multicurve::new(n, curves)? })
    }

    pub(crate) fn trusted(n: usize, curves: Vec<CurveClass>) -> Self {
        PantsVertex { n: n as u8, mc: Multicurve::trusted(curves) }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn curves(&self) -> &[CurveClass] {
        self.mc.curves()
    }

    pub fn multicurve(&self) -> &Multicurve {
        &self.mc
    }

    pub fn contains(&self, c: &CurveClass) -> bool {
        self.mc.contains(c)
    }

    /// The vertex with `old` replaced by `new`, unchecked.
    pub fn replace(&self, old: &CurveClass, new: CurveClass) -> PantsVertex {
        let mut cs: Vec<CurveClass> = self.curves().iter().filter(|c| *c != old).cloned().collect();
        cs.push(new);
        PantsVertex::trusted(self.n(), cs)
    }

    pub fn without(&self, c: &CurveClass) -> Multicurve {
        Multicurve { curves: self.curves().iter().filter(|x| *x != c).cloned().collect() }
    }
}

impl fmt::Display for PantsVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.mc.fmt(f)
    }
}

pub fn validate_vertex(n: usize, curves: &[CurveClass]) -> Result<PantsVertex, PantsError> {
    PantsVertex::new(n, curves)
}

/// The curves in which two vertices differ, if they differ in exactly one.
pub fn differing(p: &PantsVertex, q: &PantsVertex) -> Option<(CurveClass, CurveClass)> {
    if p.n != q.n {
        return None;
    }
    let only_p: Vec<&CurveClass> = p.curves().iter().filter(|c| !q.contains(c)).collect();
    let only_q: Vec<&CurveClass> = q.curves().iter().filter(|c| !p.contains(c)).collect();
    match (only_p.as_slice(), only_q.as_slice()) {
        ([a], [b]) => Some(((*a).clone(), (*b).clone())),
        _ => None,
    }
}

pub fn is_elementary_move(p: &PantsVertex, q: &PantsVertex) -> bool {
    differing(p, q).is_some_and(|(a, b)| a.i(&b) == 2)
}

pub fn farey_id(p: &PantsVertex, q: &PantsVertex) -> Result<FareyId, PantsError> {
    if !is_elementary_move(p, q) {
        return Err(PantsError::NotAnEdge);
    }
    Ok(p.mc.intersection(&q.mc))
}

fn rotated(w: &[Letter], start: usize) -> Vec<Letter> {
    let mut out = w[start..].to_vec();
    out.extend_from_slice(&w[..start]);
    out
}

/// Regions of the disk for a disjoint family, with the moves between them
/// across rays.
struct RegionGraph {
    arr: Arrangement,
    regions: Vec<usize>,
    adj: Vec<Vec<(usize, Letter)>>,
}

impl RegionGraph {
    fn new(n: usize, curves: &[CurveClass]) -> Self {
        let words: Vec<&[Letter]> = curves.iter().map(|c| c.seq()).collect();
        let arr = Arrangement::new(n, &words);
        let regions = arr.regions_disjoint();
        let mut adj = vec![Vec::new(); arr.chords().len() + 1];
        for k in 1..n {
            for d in 0..=arr.strands_on(k) {
                let l = regions[arr.left_gap(k, d)];
                let r = regions[arr.right_gap(k, d)];
                adj[l].push((r, Letter::pos(k)));
                adj[r].push((l, Letter::neg(k)));
            }
        }
        RegionGraph { arr, regions, adj }
    }

    /// Words of shortest paths from `root` to every region of its pair of pants.
    fn paths(&self, root: usize) -> Vec<Option<Vec<Letter>>> {
        let mut path: Vec<Option<Vec<Letter>>> = vec![None; self.adj.len()];
        path[root] = Some(Vec::new());
        let mut queue = VecDeque::from([root]);
        while let Some(r) = queue.pop_front() {
            for &(s, l) in &self.adj[r] {
                if path[s].is_none() {
                    let mut w = path[r].clone().unwrap_or_default();
                    w.push(l);
                    path[s] = Some(w);
                    queue.push_back(s);
                }
            }
        }
        path
    }

    /// Lassos from `root` around the boundary objects of its pair of pants,
    /// skipping curve `skip`.
    fn lassos(&self, root: usize, skip: usize) -> Vec<Vec<Letter>> {
        let paths = self.paths(root);
        let arr = &self.arr;
        let m = arr.rays();
        let mut out = Vec::new();
        let lasso = |r: usize, lp: Vec<Letter>| -> Option<Vec<Letter>> {
            let p = paths[r].as_ref()?;
            let mut w = p.clone();
            w.extend(lp);
            w.extend(inverse_word(p));
            Some(w)
        };
        for k in 1..=m {
            if let Some(w) = lasso(self.regions[arr.right_gap(k, 0)], vec![Letter::pos(k)]) {
                out.push(w);
            }
        }
        let inf = self.regions[arr.left_gap(1, arr.strands_on(1))];
        if let Some(w) = lasso(inf, (1..=m).map(Letter::pos).collect()) {
            out.push(w);
        }
        let mut seen = BTreeSet::new();
        for ch in arr.chords() {
            if ch.curve == skip || seen.contains(&ch.curve) {
                continue;
            }
            let (inside, outside) = arr.chord_sides(&self.regions, ch);
            for r in [inside, outside] {
                if let Some(w) = lasso(r, rotated(arr.word(ch.curve), ch.pos)) {
                    seen.insert(ch.curve);
                    out.push(w);
                }
            }
        }
        out
    }
}

/// A curve meeting α twice and missing the rest of P: the least of the
/// candidates built from lassos on either side of α.
pub fn dual_curve(p: &PantsVertex, alpha: &CurveClass) -> Result<CurveClass, PantsError> {
    let n = p.n();
    let ai = p.curves().iter().position(|c| c == alpha).ok_or_else(|| PantsError::NotInVertex(alpha.clone()))?;
    let g = RegionGraph::new(n, p.curves());
    let ch = g.arr.chords_of(ai)[0];
    let (ra, rb) = g.arr.chord_sides(&g.regions, &ch);
    let la = g.lassos(ra, ai);
    let lb = g.lassos(rb, ai);
    let rest = p.without(alpha);
    let mut best: Option<CurveClass> = None;
    for a in &la {
        for b in &lb {
            for inv in [false, true] {
                let mut w = a.clone();
                w.extend(if inv { inverse_word(b) } else { b.clone() });
                let w = reduce(&w);
                let Ok(c) = CurveClass::from_word(n, &w) else { continue };
                if c.i(alpha) == 2 && rest.curves().iter().all(|x| x.disjoint(&c)) && best.as_ref().is_none_or(|b| c < *b) {
                    best = Some(c);
                }
            }
        }
    }
    best.ok_or_else(|| PantsError::Geometry(format!("no dual to {alpha} in {p}")))
}

/// Cuts a word at two crossing points lying on chords x and y: returns the
/// arc from the x point to the y point and the arc back. `x_first` tells,
/// when both lie on one chord, whether the x point comes first along it.
fn split_at(w: &[Letter], x: &Chord, y: &Chord, x_first: bool) -> (Vec<Letter>, Vec<Letter>) {
    let l = w.len();
    if x.pos == y.pos {
        return if x_first { (Vec::new(), rotated(w, x.pos)) } else { (rotated(w, x.pos), Vec::new()) };
    }
    let span = (y.pos + l - x.pos) % l;
    let r = rotated(w, x.pos);
    (r[..span].to_vec(), r[span..].to_vec())
}

/// The two curves completing Farey triangles on a and b, which meet twice
/// and are disjoint from every curve of `rest`.
pub fn completions(rest: &[CurveClass], a: &CurveClass, b: &CurveClass) -> Result<[CurveClass; 2], PantsError> {
    let n = a.n();
    let arr = Arrangement::new(n, &[a.seq(), b.seq()]);
    let xs = arr.crossings(0, 1);
    if xs.len() != 2 {
        return Err(PantsError::NotAnEdge);
    }
    let ((ca1, cb1), (ca2, cb2)) = (xs[0], xs[1]);
    let (a1, a2) = split_at(a.seq(), &ca1, &ca2, Arrangement::crosses_first(&ca1, &cb1, &cb2));
    let (b1, b2) = split_at(b.seq(), &cb1, &cb2, Arrangement::crosses_first(&cb1, &ca1, &ca2));
    let joined = |parts: [&[Letter]; 4]| -> Vec<Letter> { parts.concat() };
    let (ia2, ib1, ib2) = (inverse_word(&a2), inverse_word(&b1), inverse_word(&b2));
    let words = [joined([&a1, &b2, &ia2, &ib1]), joined([&a1, &ib1, &ia2, &b2]), joined([&a1, &ib2, &ia2, &b1])];
    let mut found: Vec<CurveClass> = Vec::new();
    for w in words {
        let Ok(c) = CurveClass::from_word(n, &w) else { continue };
        if c.i(a) == 2 && c.i(b) == 2 && rest.iter().all(|x| x.disjoint(&c)) && !found.contains(&c) {
            found.push(c);
        }
    }
    found.sort();
    match <[CurveClass; 2]>::try_from(found) {
        Ok(pair) => Ok(pair),
        Err(v) => Err(PantsError::Geometry(format!("{} completions for {a} and {b}", v.len()))),
    }
}

/// The two vertices forming triangles with the edge p-q.
pub fn triangle_completions(p: &PantsVertex, q: &PantsVertex) -> Result<(PantsVertex, PantsVertex), PantsError> {
    let (a, b) = differing(p, q).ok_or(PantsError::NotAnEdge)?;
    if a.i(&b) != 2 {
        return Err(PantsError::NotAnEdge);
    }
    let rest = p.without(&a);
    let [g1, g2] = completions(rest.curves(), &a, &b)?;
    Ok((p.replace(&a, g1), p.replace(&a, g2)))
}

/// Curves β_{-k}..β_k of the Farey fan around α in P, where β_0 is the dual
/// curve and β_{±1} are its completions, the lesser one being β_1.
pub fn fan(p: &PantsVertex, alpha: &CurveClass, k: usize) -> Result<Vec<CurveClass>, PantsError> {
    let rest = p.without(alpha);
    let b0 = dual_curve(p, alpha)?;
    let mut pos = vec![b0.clone()];
    let mut neg = vec![b0.clone()];
    if k >= 1 {
        let [g1, g2] = completions(rest.curves(), alpha, &b0)?;
        pos.push(g1);
        neg.push(g2);
    }
    for side in [&mut pos, &mut neg] {
        while side.len() <= k {
            let (prev, cur) = (&side[side.len() - 2], &side[side.len() - 1]);
            let [g1, g2] = completions(rest.curves(), alpha, cur)?;
            let next = if &g1 == prev { g2 } else { g1 };
            side.push(next);
        }
    }
    let mut out: Vec<CurveClass> = neg.into_iter().skip(1).rev().collect();
    out.extend(pos);
    Ok(out)
}

/// The 2K+1 neighbours of P obtained by replacing α along its Farey fan.
pub fn neighbors_bounded(p: &PantsVertex, alpha: &CurveClass, k: usize) -> Result<Vec<PantsVertex>, PantsError> {
    Ok(fan(p, alpha, k)?.into_iter().map(|b| p.replace(alpha, b)).collect())
}

/// A finite labelled piece of the pants graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PantsSubgraph {
    n: usize,
    vertices: Vec<PantsVertex>,
    index: HashMap<PantsVertex, usize>,
    edges: BTreeSet<(usize, usize)>,
    vertex_labels: BTreeMap<usize, BTreeSet<String>>,
    edge_labels: BTreeMap<(usize, usize), BTreeSet<String>>,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl PantsSubgraph {
    pub fn new(n: usize) -> Self {
        PantsSubgraph { n, ..Default::default() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[PantsVertex] {
        &self.vertices
    }

    pub fn vertex(&self, id: usize) -> &PantsVertex {
        &self.vertices[id]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn id_of(&self, v: &PantsVertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn add_vertex(&mut self, v: PantsVertex) -> usize {
        if let Some(&id) = self.index.get(&v) {
            return id;
        }
        let id = self.vertices.len();
        self.index.insert(v.clone(), id);
        self.vertices.push(v);
        id
    }

    /// Adds an edge after checking it is an elementary move.
    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<(), PantsError> {
        if a == b || !is_elementary_move(&self.vertices[a], &self.vertices[b]) {
            return Err(PantsError::NotAnEdge);
        }
        self.edges.insert(key(a, b));
        Ok(())
    }

    pub(crate) fn add_edge_unchecked(&mut self, a: usize, b: usize) {
        debug_assert_ne!(a, b);
        self.edges.insert(key(a, b));
    }

    pub fn add_vertex_edge(&mut self, p: &PantsVertex, q: &PantsVertex) -> Result<(usize, usize), PantsError> {
        let a = self.add_vertex(p.clone());
        let b = self.add_vertex(q.clone());
        self.add_edge(a, b)?;
        Ok((a, b))
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&key(a, b))
    }

    pub fn label_vertex(&mut self, id: usize, label: &str) {
        self.vertex_labels.entry(id).or_default().insert(label.to_string());
    }

    pub fn label_edge(&mut self, a: usize, b: usize, label: &str) {
        self.edge_labels.entry(key(a, b)).or_default().insert(label.to_string());
    }

    pub fn vertex_labels(&self, id: usize) -> Vec<String> {
        self.vertex_labels.get(&id).map(|s| s.iter().cloned().collect()).unwrap_or_default()
    }

    pub fn edge_labels(&self, a: usize, b: usize) -> Vec<String> {
        self.edge_labels.get(&key(a, b)).map(|s| s.iter().cloned().collect()).unwrap_or_default()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn degree(&self, id: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == id || b == id).count()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; adj.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Adds every elementary move between existing vertices, found by
    /// grouping vertices by the multicurve left after dropping one curve.
    pub fn close_edges(&mut self) {
        let mut groups: HashMap<Multicurve, Vec<(usize, &CurveClass)>> = HashMap::new();
        for (id, v) in self.vertices.iter().enumerate() {
            for c in v.curves() {
                groups.entry(v.without(c)).or_default().push((id, c));
            }
        }
        let found: Vec<(usize, usize)> = groups
            .par_iter()
            .flat_map_iter(|(_, g)| {
                let mut out = Vec::new();
                for (i, (a, ca)) in g.iter().enumerate() {
                    for (b, cb) in &g[i + 1..] {
                        if ca.i(cb) == 2 {
                            out.push(key(*a, *b));
                        }
                    }
                }
                out
            })
            .collect();
        self.edges.extend(found);
    }

    /// The subgraph induced on the given vertices, with labels carried over.
    pub fn induced(&self, ids: &[usize]) -> PantsSubgraph {
        let mut g = PantsSubgraph::new(self.n);
        let mut map = HashMap::new();
        for &i in ids {
            let j = g.add_vertex(self.vertices[i].clone());
            map.insert(i, j);
            for l in self.vertex_labels(i) {
                g.label_vertex(j, &l);
            }
        }
        for &(a, b) in &self.edges {
            if let (Some(&x), Some(&y)) = (map.get(&a), map.get(&b)) {
                g.add_edge_unchecked(x, y);
                for l in self.edge_labels(a, b) {
                    g.label_edge(x, y, &l);
                }
            }
        }
        g
    }

    /// Union with another graph on the same sphere, merging by vertex.
    pub fn merge(&mut self, other: &PantsSubgraph) {
        let map: Vec<usize> = other.vertices.iter().map(|v| self.add_vertex(v.clone())).collect();
        for (&i, ls) in &other.vertex_labels {
            for l in ls {
                self.label_vertex(map[i], l);
            }
        }
        for &(a, b) in &other.edges {
            self.add_edge_unchecked(map[a], map[b]);
        }
        for (&(a, b), ls) in &other.edge_labels {
            for l in ls {
                self.label_edge(map[a], map[b], l);
            }
        }
    }

    /// Vertices containing every curve of q.
    pub fn stratum(&self, q: &[CurveClass]) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&i| q.iter().all(|c| self.vertices[i].contains(c))).collect()
    }

    /// Re-checks every edge.
    pub fn validate(&self) -> Result<(), PantsError> {
        for &(a, b) in &self.edges {
            if !is_elementary_move(&self.vertices[a], &self.vertices[b]) {
                return Err(PantsError::Malformed(format!("edge {a}-{b} is not an elementary move")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let curve = |c: &CurveClass| json!(c.pairs());
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| json!({"id": i, "curves": v.curves().iter().map(curve).collect::<Vec<_>>()}))
            .collect();
        let edges: Vec<Value> = self.edges.iter().map(|&(a, b)| json!([a, b])).collect();
        let vl: BTreeMap<String, Vec<String>> =
            self.vertex_labels.iter().map(|(i, s)| (i.to_string(), s.iter().cloned().collect())).collect();
        let el: BTreeMap<String, Vec<String>> =
            self.edge_labels.iter().map(|((a, b), s)| (format!("{a}-{b}"), s.iter().cloned().collect())).collect();
        json!({
            "n": self.n,
            "model": "collinear-v1",
            "vertices": vertices,
            "edges": edges,
            "labels": {"vertices": vl, "edges": el},
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("graph serializes");
        s.push('\n');
        s
    }

    /// Parses and fully re-validates a graph file.
    pub fn from_json(v: &Value) -> Result<Self, PantsError> {
        let raw: GraphJson = serde_json::from_value(v.clone()).map_err(|e| PantsError::Malformed(e.to_string()))?;
        if raw.model != "collinear-v1" {
            return Err(PantsError::Malformed(format!("unknown model {}", raw.model)));
        }
        let mut g = PantsSubgraph::new(raw.n);
        for (i, vj) in raw.vertices.iter().enumerate() {
            if vj.id != i {
                return Err(PantsError::Malformed("vertex ids must be contiguous from 0".into()));
            }
            let curves: Vec<CurveClass> =
                vj.curves.iter().map(|c| CurveClass::from_pairs(raw.n, c)).collect::<Result<_, _>>()?;
            let v = PantsVertex::new(raw.n, &curves)?;
            if g.add_vertex(v) != i {
                return Err(PantsError::Malformed(format!("vertex {i} is a duplicate")));
            }
        }
        for &(a, b) in &raw.edges {
            if a >= g.vertex_count() || b >= g.vertex_count() {
                return Err(PantsError::Malformed(format!("edge {a}-{b} out of range")));
            }
            g.add_edge(a, b).map_err(|_| PantsError::Malformed(format!("edge {a}-{b} is not an elementary move")))?;
        }
        if let Some(l) = raw.labels {
            for (k, ls) in l.vertices {
                let i: usize = k.parse().map_err(|_| PantsError::Malformed(format!("bad label key {k}")))?;
                if i >= g.vertex_count() {
                    return Err(PantsError::Malformed(format!("label for missing vertex {i}")));
                }
                ls.iter().for_each(|s| g.label_vertex(i, s));
            }
            for (k, ls) in l.edges {
                let (a, b) = k
                    .split_once('-')
                    .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
                    .ok_or_else(|| PantsError::Malformed(format!("bad label key {k}")))?;
                if !g.has_edge(a, b) {
                    return Err(PantsError::Malformed(format!("label for missing edge {k}")));
                }
                ls.iter().for_each(|s| g.label_edge(a, b, s));
            }
        }
        Ok(g)
    }

    /// DOT text with nodes `v<id>`; edges carry their Farey multicurve.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph pants {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let mut label = v.to_string();
            for l in self.vertex_labels(i) {
                label.push_str(&format!("\\n{l}"));
            }
            s.push_str(&format!("  v{i} [label=\"{label}\"];\n"));
        }
        for &(a, b) in &self.edges {
            let farey = self.vertices[a].multicurve().intersection(self.vertices[b].multicurve());
            let mut label = format!("Q={farey}");
            for l in self.edge_labels(a, b) {
                label.push_str(&format!("\\n{l}"));
            }
            s.push_str(&format!("  v{a} -- v{b} [label=\"{label}\"];\n"));
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Deserialize, Serialize)]
struct GraphJson {
    n: usize,
    model: String,
    vertices: Vec<VertexJson>,
    edges: Vec<(usize, usize)>,
    #[serde(default)]
    labels: Option<LabelsJson>,
}

#[derive(Deserialize, Serialize)]
struct VertexJson {
    id: usize,
    curves: Vec<Vec<(i64, i64)>>,
}

#[derive(Deserialize, Serialize, Default)]
struct LabelsJson {
    #[serde(default)]
    vertices: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    edges: BTreeMap<String, Vec<String>>,
}

/// Breadth-first closure of P0 under bounded fans in every curve slot, with
/// every elementary move among the included vertices. Vertex ids follow
/// BFS layers, sorted canonically within a layer.
pub fn ball(p0: &PantsVertex, radius: usize, k: usize, max_vertices: usize) -> Result<PantsSubgraph, PantsError> {
    let mut g = PantsSubgraph::new(p0.n());
    g.add_vertex(p0.clone());
    let mut layer = vec![p0.clone()];
    for _ in 0..radius {
        let found: Vec<Vec<PantsVertex>> = layer
            .par_iter()
            .map(|p| {
                let mut out = Vec::new();
                for a in p.curves() {
                    out.extend(neighbors_bounded(p, a, k)?);
                }
                Ok(out)
            })
            .collect::<Result<_, PantsError>>()?;
        let mut next: Vec<PantsVertex> = found.into_iter().flatten().filter(|v| g.id_of(v).is_none()).collect();
        next.sort();
        next.dedup();
        if g.vertex_count() + next.len() > max_vertices {
            return Err(PantsError::Limit { count: g.vertex_count() + next.len() });
        }
        for v in &next {
            g.add_vertex(v.clone());
        }
        layer = next;
    }
    g.close_edges();
    Ok(g)
}

/// Checks that `cycle` is a closed path of distinct vertices in g and
/// reports whether consecutive edges lie in different Farey graphs.
pub fn is_alternating_cycle(g: &PantsSubgraph, cycle: &[usize]) -> Result<bool, PantsError> {
    let l = cycle.len();
    if l < 3 {
        return Err(PantsError::NotACycle("fewer than three vertices".into()));
    }
    if cycle.iter().collect::<BTreeSet<_>>().len() != l {
        return Err(PantsError::NotACycle("repeated vertex".into()));
    }
    let mut ids = Vec::with_capacity(l);
    for t in 0..l {
        let (a, b) = (cycle[t], cycle[(t + 1) % l]);
        if a >= g.vertex_count() || b >= g.vertex_count() || !g.has_edge(a, b) {
            return Err(PantsError::NotACycle(format!("{a}-{b} is not an edge")));
        }
        ids.push(farey_id(g.vertex(a), g.vertex(b))?);
    }
    Ok((0..l).all(|t| ids[t] != ids[(t + 1) % l]))
}

/// All cycles of the given length, each listed once starting from its least
/// vertex in the direction of the smaller second vertex.
pub fn cycles_of_length(g: &PantsSubgraph, len: usize) -> Vec<Vec<usize>> {
    let adj = g.adjacency();
    let mut out = Vec::new();
    fn grow(adj: &[Vec<usize>], len: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let start = path[0];
        let last = *path.last().unwrap();
        if path.len() == len {
            if adj[last].contains(&start) && path[1] < path[len - 1] {
                out.push(path.clone());
            }
            return;
        }
        for &w in &adj[last] {
            if w > start && !path.contains(&w) {
                path.push(w);
                grow(adj, len, path, out);
                path.pop();
            }
        }
    }
    for s in 0..adj.len() {
        grow(&adj, len, &mut vec![s], &mut out);
    }
    out
}

/// The graph together with both triangles on each of its edges.
pub fn thick_graph(g: &PantsSubgraph) -> Result<PantsSubgraph, PantsError> {
    let mut h = g.clone();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    for (a, b) in edges {
        let (p, q) = (g.vertex(a).clone(), g.vertex(b).clone());
        let (t1, t2) = triangle_completions(&p, &q)?;
        for t in [t1, t2] {
            let id = h.add_vertex(t);
            h.add_edge_unchecked(id, a);
            h.add_edge_unchecked(id, b);
        }
    }
    Ok(h)
}

/// The two triangles sharing the edge p-q.
pub fn thick_edge(p: &PantsVertex, q: &PantsVertex) -> Result<PantsSubgraph, PantsError> {
    let mut g = PantsSubgraph::new(p.n());
    g.add_vertex_edge(p, q)?;
    thick_graph(&g)
}

/// The closed star of v in g: v, its neighbours and the edges joining them to v.
pub fn star(v: usize, g: &PantsSubgraph) -> PantsSubgraph {
    let mut h = PantsSubgraph::new(g.n());
    let c = h.add_vertex(g.vertex(v).clone());
    for (a, b) in g.edges() {
        if a == v || b == v {
            let w = if a == v { b } else { a };
            let id = h.add_vertex(g.vertex(w).clone());
            h.add_edge_unchecked(c, id);
        }
    }
    h
}
