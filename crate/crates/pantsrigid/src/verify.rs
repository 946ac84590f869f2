//! Checkers for the finite claims about Zn, X5 and Xn, plus the desk-scale
//! rigidity experiment: enumerate every injective simplicial map of X5 into
//! a ball of the pants graph and try to explain each one by a mapping class.
//!
//! Every checker returns a `LemmaReport`. A violation always carries a
//! witness that can be re-checked by hand.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::Instant;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::curve::{round_curve, CurveClass};
use crate::graphs::{automorphisms, isomorphism, maps, GraphError};
use crate::mapclass::{apply_generator, two_puncture_twist, word_search, Generator, MCWord};
use crate::pants::{
    ball, farey_id, is_alternating_cycle, is_elementary_move, neighbors_bounded, star, thick_graph, triangle_completions,
    Multicurve, PantsSubgraph, PantsVertex,
};
use crate::rigidset::{
    build_x, build_x5, build_z, core_pentagon, five_holed_multicurves, gamma, gamma5_named, SubsurfaceMap,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Violated,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub status: Status,
    pub witness: Value,
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runtime_ms: Option<u64>,
}

impl LemmaReport {
    fn verified(lemma: &str, details: Value) -> Self {
        LemmaReport { lemma: lemma.into(), status: Status::Verified, witness: Value::Null, details, runtime_ms: None }
    }

    fn violated(lemma: &str, witness: Value, details: Value) -> Self {
        LemmaReport { lemma: lemma.into(), status: Status::Violated, witness, details, runtime_ms: None }
    }

    fn skipped(lemma: &str, reason: &str) -> Self {
        LemmaReport {
            lemma: lemma.into(),
            status: Status::Skipped,
            witness: Value::Null,
            details: json!({ "reason": reason }),
            runtime_ms: None,
        }
    }

    fn from_result(lemma: &str, r: Result<Value, (Value, Value)>) -> Self {
        match r {
            Ok(d) => Self::verified(lemma, d),
            Err((w, d)) => Self::violated(lemma, w, d),
        }
    }

    pub fn is_verified(&self) -> bool {
        self.status == Status::Verified
    }
}

fn vertex_json(v: &PantsVertex) -> Value {
    json!(v.curves().iter().map(|c| c.to_string()).collect::<Vec<_>>())
}

fn fail(w: Value) -> Result<Value, (Value, Value)> {
    Err((w, Value::Null))
}

/// A reduced slope p/q on the four-punctured sphere, 1/0 included.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FareySlope {
    pub p: i64,
    pub q: i64,
}

impl FareySlope {
    /// Reduces and fixes the sign so that q > 0, or q = 0 and p = 1.
    pub fn new(p: i64, q: i64) -> Option<Self> {
        let g = p.gcd(&q);
        if g == 0 {
            return None;
        }
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Some(FareySlope { p, q })
    }

    pub fn det(&self, o: &FareySlope) -> i64 {
        self.p * o.q - self.q * o.p
    }

    pub fn adjacent(&self, o: &FareySlope) -> bool {
        self.det(o).abs() == 1
    }

    fn add(&self, o: &FareySlope) -> Option<Self> {
        Self::new(self.p + o.p, self.q + o.q)
    }

    fn sub(&self, o: &FareySlope) -> Option<Self> {
        Self::new(self.p - o.p, self.q - o.q)
    }
}

impl std::fmt::Display for FareySlope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// The curve of slope p/q on S_{0,4}: 0/1 surrounds q1, q2 and 1/0
/// surrounds q2, q3. A positive half-twist about q1, q2 sends p/q to
/// p/(q+p); about q2, q3 it sends p/q to (p-q)/q.
pub fn slope_curve(s: FareySlope) -> CurveClass {
    let (p, q) = (s.p, s.q);
    if p == 0 {
        return round_curve(4, &[1, 2]).expect("block");
    }
    if q == 0 {
        return round_curve(4, &[2, 3]).expect("block");
    }
    let (i, k, rest) = if q.abs() >= p.abs() {
        let k = Integer::div_floor(&q, &p);
        (1, k, FareySlope::new(p, q - k * p))
    } else {
        let k = -Integer::div_floor(&p, &q);
        (2, k, FareySlope::new(p + k * q, q))
    };
    let base = slope_curve(rest.expect("nonzero"));
    let g = Generator::sigma(i, if k > 0 { 1 } else { -1 });
    let mut c = base;
    for _ in 0..k.abs() {
        c = apply_generator(g, &c);
    }
    c
}

fn slopes_up_to(b: i64) -> Vec<FareySlope> {
    let mut out = BTreeSet::new();
    for p in -b..=b {
        for q in 0..=b {
            if let Some(s) = FareySlope::new(p, q) {
                out.insert(s);
            }
        }
    }
    out.into_iter().collect()
}

/// i(p/q, r/s) = 2|ps - qr| on S_{0,4}, for every pair of slopes with
/// entries bounded by `bound`.
pub fn check_slopes(bound: i64) -> LemmaReport {
    let slopes = slopes_up_to(bound);
    let curves: Vec<CurveClass> = slopes.iter().map(|&s| slope_curve(s)).collect();
    let pairs: Vec<(usize, usize)> = (0..slopes.len()).flat_map(|a| (a + 1..slopes.len()).map(move |b| (a, b))).collect();
    let bad = pairs.par_iter().find_first(|&&(a, b)| curves[a].i(&curves[b]) as i64 != 2 * slopes[a].det(&slopes[b]).abs());
    let details = json!({"slopes": slopes.len(), "pairs": pairs.len()});
    match bad {
        None => LemmaReport::verified("slope-intersection", details),
        Some(&(a, b)) => LemmaReport::violated(
            "slope-intersection",
            json!({"a": slopes[a].to_string(), "b": slopes[b].to_string(), "i": curves[a].i(&curves[b])}),
            details,
        ),
    }
}

/// i(a, T_b^{k}(a)) for half-integer k on Farey pairs: 2 at k = 1/2 and
/// larger than 2 from k = 3/2 on.
pub fn check_twist_growth(bound: i64) -> LemmaReport {
    let slopes = slopes_up_to(bound);
    let mut pairs: Vec<(CurveClass, CurveClass)> = Vec::new();
    for (i, a) in slopes.iter().enumerate() {
        for b in &slopes[i + 1..] {
            if a.adjacent(b) {
                pairs.push((slope_curve(*a), slope_curve(*b)));
                pairs.push((slope_curve(*b), slope_curve(*a)));
            }
        }
    }
    let z = build_z(5).expect("Z5");
    for (x, y) in z.edges() {
        let (a, b) = crate::pants::differing(z.vertex(x), z.vertex(y)).expect("edge");
        pairs.push((a.clone(), b.clone()));
        pairs.push((b, a));
    }
    let bad = pairs.par_iter().find_map_first(|(a, b)| {
        for s in [1i64, -1] {
            let t = two_puncture_twist(b, s).ok()?;
            let mut c = a.clone();
            for half in 1..=6 {
                c = t.apply(&c);
                let i = a.i(&c);
                if (half == 1 && i != 2) || (half >= 3 && i <= 2) {
                    return Some(json!({"a": a.to_string(), "b": b.to_string(), "half_twists": half as i64 * s, "i": i}));
                }
            }
        }
        None
    });
    let details = json!({"pairs": pairs.len(), "max_half_twists": 6});
    match bad {
        None => LemmaReport::verified("twist-growth", details),
        Some(w) => LemmaReport::violated("twist-growth", w, details),
    }
}

/// T_b^{1/2}(a) = T_a^{-1/2}(b) for every ordered pair of Γ5 curves that
/// meet twice.
pub fn check_triangle_identity() -> LemmaReport {
    let g = gamma5_named();
    let mut checked = 0;
    for (na, a) in &g {
        for (nb, b) in &g {
            if a.i(b) != 2 {
                continue;
            }
            checked += 1;
            let l = two_puncture_twist(b, 1).expect("chain curve").apply(a);
            let r = two_puncture_twist(a, -1).expect("chain curve").apply(b);
            if l != r {
                return LemmaReport::violated(
                    "triangle-identity",
                    json!({"a": na, "b": nb, "lhs": l.to_string(), "rhs": r.to_string()}),
                    json!({"checked": checked}),
                );
            }
        }
    }
    LemmaReport::verified("triangle-identity", json!({"ordered_pairs": checked}))
}

/// The window of the Farey graph P_Q around p, Q = p minus alpha, with a
/// slope chart grown from the edge p, β0 by mediants.
pub fn check_farey_local(p: &PantsVertex, alpha: &CurveClass, radius: usize, k: usize) -> LemmaReport {
    const NAME: &str = "farey-local";
    let q = p.without(alpha);
    let moving = |v: &PantsVertex| v.curves().iter().find(|c| !q.contains(c)).cloned().expect("one free curve");
    let mut g = PantsSubgraph::new(p.n());
    g.add_vertex(p.clone());
    let mut layer = vec![p.clone()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for v in &layer {
            match neighbors_bounded(v, &moving(v), k) {
                Ok(nb) => next.extend(nb.into_iter().filter(|x| g.id_of(x).is_none())),
                Err(e) => return LemmaReport::skipped(NAME, &e.to_string()),
            }
        }
        next.sort();
        next.dedup();
        for v in &next {
            g.add_vertex(v.clone());
        }
        layer = next;
    }
    g.close_edges();
    let res = (|| {
        let nv = g.vertex_count();
        let mut slope: Vec<Option<FareySlope>> = vec![None; nv];
        let p1 = g.adjacency()[0].iter().copied().min().ok_or((json!("isolated seed"), Value::Null))?;
        slope[0] = FareySlope::new(0, 1);
        slope[p1] = FareySlope::new(1, 0);
        let mut triangles: HashMap<(usize, usize), [Option<usize>; 2]> = HashMap::new();
        for (a, b) in g.edges() {
            let (t1, t2) = triangle_completions(g.vertex(a), g.vertex(b)).map_err(|e| (json!(e.to_string()), Value::Null))?;
            for t in [&t1, &t2] {
                if !q.curves().iter().all(|c| t.contains(c)) || !is_elementary_move(t, g.vertex(a)) || !is_elementary_move(t, g.vertex(b)) {
                    return fail(json!({"edge": [a, b], "bad_completion": vertex_json(t)}));
                }
            }
            triangles.insert((a, b), [g.id_of(&t1), g.id_of(&t2)]);
        }
        if let Some(&[Some(t1), _]) = triangles.get(&(0.min(p1), 0.max(p1))) {
            slope[t1] = FareySlope::new(1, 1);
        }
        let mut changed = true;
        while changed {
            changed = false;
            for (&(a, b), ts) in &triangles {
                let (Some(sa), Some(sb)) = (slope[a], slope[b]) else { continue };
                let (plus, minus) = (sa.add(&sb).expect("adjacent"), sa.sub(&sb).expect("adjacent"));
                let known: Vec<(usize, FareySlope)> = ts.iter().flatten().filter_map(|&t| slope[t].map(|s| (t, s))).collect();
                for &t in ts.iter().flatten() {
                    if slope[t].is_some() {
                        continue;
                    }
                    if let Some(&(_, s)) = known.first() {
                        slope[t] = Some(if s == plus { minus } else { plus });
                        changed = true;
                    }
                }
            }
        }
        let missing: Vec<usize> = (0..nv).filter(|&v| slope[v].is_none()).collect();
        if !missing.is_empty() {
            return fail(json!({"unreached": vertex_json(g.vertex(missing[0]))}));
        }
        let s: Vec<FareySlope> = slope.into_iter().map(|x| x.expect("filled")).collect();
        let distinct: BTreeSet<&FareySlope> = s.iter().collect();
        if distinct.len() != nv {
            return fail(json!({"reason": "slope chart is not injective"}));
        }
        let adj = g.adjacency();
        for a in 0..nv {
            for b in a + 1..nv {
                if adj[a].contains(&b) != s[a].adjacent(&s[b]) {
                    return fail(json!({"u": vertex_json(g.vertex(a)), "v": vertex_json(g.vertex(b)), "slopes": [s[a].to_string(), s[b].to_string()]}));
                }
            }
        }
        Ok(json!({"Q": q.to_string(), "vertices": nv, "edges": g.edge_count(), "radius": radius, "twist_bound": k}))
    })();
    LemmaReport::from_result(NAME, res)
}

/// Triangulations of a convex n-gon and diagonal flips, without curves.
pub fn flip_graph(n: usize) -> Vec<Vec<usize>> {
    fn tri(lo: usize, hi: usize, memo: &mut HashMap<(usize, usize), Vec<Vec<(usize, usize)>>>) -> Vec<Vec<(usize, usize)>> {
        if hi - lo < 2 {
            return vec![vec![]];
        }
        if let Some(v) = memo.get(&(lo, hi)) {
            return v.clone();
        }
        let mut out = Vec::new();
        for m in lo + 1..hi {
            for l in tri(lo, m, memo) {
                for r in tri(m, hi, memo) {
                    let mut d = l.clone();
                    d.extend(r);
                    if m - lo > 1 {
                        d.push((lo, m));
                    }
                    if hi - m > 1 {
                        d.push((m, hi));
                    }
                    d.sort();
                    out.push(d);
                }
            }
        }
        memo.insert((lo, hi), out.clone());
        out
    }
    let ts = tri(0, n - 1, &mut HashMap::new());
    let mut adj = vec![Vec::new(); ts.len()];
    for a in 0..ts.len() {
        for b in a + 1..ts.len() {
            if ts[a].iter().filter(|d| ts[b].contains(d)).count() + 1 == n - 3 {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
    }
    adj
}

/// Connectivity, degrees, distinct Farey graphs at each star and the flip
/// graph comparison for a candidate Zn.
pub fn check_z_graph(n: usize, z: &PantsSubgraph) -> LemmaReport {
    const NAME: &str = "Z";
    let res = (|| {
        if let Err(e) = z.validate() {
            return fail(json!(e.to_string()));
        }
        for v in 0..z.vertex_count() {
            let s = star(v, z);
            let ids: BTreeSet<Multicurve> = s.edges().map(|(a, b)| farey_id(s.vertex(a), s.vertex(b)).expect("edge")).collect();
            if s.edge_count() != n - 3 || ids.len() != n - 3 {
                return fail(json!({"vertex": vertex_json(z.vertex(v)), "degree": s.edge_count(), "farey_graphs": ids.len()}));
            }
        }
        if !z.is_connected() {
            return fail(json!({"reason": "disconnected"}));
        }
        let flips = flip_graph(n);
        match isomorphism(&z.adjacency(), &flips) {
            Ok(Some(_)) => {}
            Ok(None) => return fail(json!({"reason": "not isomorphic to the flip graph", "flip_vertices": flips.len()})),
            Err(e) => return fail(json!(e.to_string())),
        }
        if n == 5 {
            let ids: Vec<usize> = core_pentagon().iter().map(|v| z.id_of(v).unwrap_or(usize::MAX)).collect();
            if ids.contains(&usize::MAX) || !matches!(is_alternating_cycle(z, &ids), Ok(true)) {
                return fail(json!({"reason": "core pentagon is not an alternating cycle"}));
            }
        }
        Ok(json!({"n": n, "vertices": z.vertex_count(), "edges": z.edge_count(), "degree": n - 3}))
    })();
    LemmaReport::from_result(NAME, res)
}

pub fn check_lemma_z(n: usize) -> LemmaReport {
    match build_z(n) {
        Ok(z) => check_z_graph(n, &z),
        Err(e) => LemmaReport::skipped("Z", &e.to_string()),
    }
}

pub fn check_gamma(n: usize) -> LemmaReport {
    match gamma(n) {
        Ok(g) if g.curves.len() == n * (n - 3) / 2 => LemmaReport::verified("gamma", json!({"n": n, "curves": g.curves.len()})),
        Ok(g) => LemmaReport::violated("gamma", json!({"n": n, "curves": g.curves.len()}), Value::Null),
        Err(e) => LemmaReport::skipped("gamma", &e.to_string()),
    }
}

/// For an alternating pentagon z (vertices in cyclic order), builds the
/// thick pentagon and every pentagon that shares exactly one edge with z
/// and runs through the thick pentagon, then compares the union with X5.
pub fn check_thick_pentagon(z: &[PantsVertex; 5]) -> LemmaReport {
    const NAME: &str = "thick-pentagon";
    let res = (|| {
        let mut core = PantsSubgraph::new(z[0].n());
        for i in 0..5 {
            if core.add_vertex_edge(&z[i], &z[(i + 1) % 5]).is_err() {
                return fail(json!({"reason": "not a pentagon", "at": i}));
            }
        }
        if !matches!(is_alternating_cycle(&core, &[0, 1, 2, 3, 4]), Ok(true)) {
            return fail(json!({"reason": "pentagon is not alternating"}));
        }
        let thick = thick_graph(&core).map_err(|e| (json!(e.to_string()), Value::Null))?;
        if (thick.vertex_count(), thick.edge_count()) != (15, 25) {
            return fail(json!({"thick_vertices": thick.vertex_count(), "thick_edges": thick.edge_count()}));
        }
        let adj = thick.adjacency();
        let in_core = |v: usize| v < 5;
        // Pentagons A, B, tB, F, tA with A-B a core edge and F new.
        let mut found: BTreeSet<Vec<PantsVertex>> = BTreeSet::new();
        let mut pentagons: Vec<[PantsVertex; 5]> = Vec::new();
        for i in 0..5 {
            let (a, b) = (i, (i + 1) % 5);
            for &ta in adj[a].iter().filter(|&&t| !in_core(t) && !adj[t].contains(&b)) {
                for &tb in adj[b].iter().filter(|&&t| !in_core(t) && !adj[t].contains(&a) && t != ta) {
                    if adj[ta].contains(&tb) {
                        continue;
                    }
                    for f in corners(thick.vertex(ta), thick.vertex(tb)) {
                        if thick.id_of(&f).is_some() {
                            continue;
                        }
                        let cyc = [z[a].clone(), z[b].clone(), thick.vertex(tb).clone(), f, thick.vertex(ta).clone()];
                        let mut g = PantsSubgraph::new(z[0].n());
                        for j in 0..5 {
                            g.add_vertex_edge(&cyc[j], &cyc[(j + 1) % 5]).expect("checked moves");
                        }
                        if !matches!(is_alternating_cycle(&g, &[0, 1, 2, 3, 4]), Ok(true)) {
                            continue;
                        }
                        let mut key = cyc.to_vec();
                        key.sort();
                        if found.insert(key) {
                            pentagons.push(cyc);
                        }
                    }
                }
            }
        }
        let mut x = thick.clone();
        for p in &pentagons {
            for j in 0..5 {
                x.add_vertex_edge(&p[j], &p[(j + 1) % 5]).expect("checked moves");
            }
        }
        let x5 = build_x5().map_err(|e| (json!(e.to_string()), Value::Null))?;
        let iso = isomorphism(&x.adjacency(), &x5.adjacency()).map_err(|e| (json!(e.to_string()), Value::Null))?;
        if pentagons.len() != 10 || iso.is_none() {
            return fail(json!({"pentagons": pentagons.len(), "isomorphic_to_X5": iso.is_some(), "vertices": x.vertex_count(), "edges": x.edge_count()}));
        }
        let [(_, _), (_, be), (_, _), (_, ep), (_, ga)] = gamma5_named();
        let obstruction: Vec<usize> = [1i64, -1]
            .iter()
            .map(|&s| {
                let u = two_puncture_twist(&be, s).expect("chain").apply(&ga);
                let v = two_puncture_twist(&ep, s).expect("chain").apply(&be);
                u.i(&v)
            })
            .collect();
        if obstruction.iter().any(|&i| i != 4) {
            return fail(json!({"obstruction": obstruction}));
        }
        Ok(json!({
            "thick_vertices": 15, "thick_edges": 25, "apexes": 10,
            "attached_pentagons": pentagons.len(),
            "X_vertices": x.vertex_count(), "X_edges": x.edge_count(),
            "obstruction_intersection": {"positive": obstruction[0], "negative": obstruction[1]},
        }))
    })();
    LemmaReport::from_result(NAME, res)
}

/// Vertices adjacent to both u and v, when u and v differ in two curves:
/// keep one curve of each and everything they share.
fn corners(u: &PantsVertex, v: &PantsVertex) -> Vec<PantsVertex> {
    let shared: Vec<CurveClass> = u.curves().iter().filter(|c| v.contains(c)).cloned().collect();
    let ou: Vec<&CurveClass> = u.curves().iter().filter(|c| !v.contains(c)).collect();
    let ov: Vec<&CurveClass> = v.curves().iter().filter(|c| !u.contains(c)).collect();
    if ou.len() != 2 || ov.len() != 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for a in &ou {
        for b in &ov {
            let mut cs = shared.clone();
            cs.push((*a).clone());
            cs.push((*b).clone());
            if let Ok(f) = PantsVertex::new(u.n(), &cs) {
                if is_elementary_move(&f, u) && is_elementary_move(&f, v) {
                    out.push(f);
                }
            }
        }
    }
    out
}

/// Automorphisms of X5 fixing Z5 pointwise: the identity and the
/// reflection, which swaps the two apexes over each core edge.
pub fn check_sym_x5() -> LemmaReport {
    const NAME: &str = "symmetry";
    let res = (|| {
        let x = build_x5().map_err(|e| (json!(e.to_string()), Value::Null))?;
        let core: Vec<usize> = core_pentagon().iter().map(|v| x.id_of(v).expect("core")).collect();
        let auts = automorphisms(&x.adjacency(), &core).map_err(|e| (json!(e.to_string()), Value::Null))?;
        let reflect: Vec<usize> = x
            .vertices()
            .iter()
            .map(|v| {
                let img: Vec<CurveClass> = v.curves().iter().map(|c| apply_generator(Generator::Reflect, c)).collect();
                x.id_of(&PantsVertex::new(5, &img).expect("reflection keeps pants")).expect("reflection preserves X5")
            })
            .collect();
        let identity: Vec<usize> = (0..x.vertex_count()).collect();
        if auts.len() != 2 || !auts.contains(&identity) || !auts.contains(&reflect) || reflect == identity {
            return fail(json!({"order": auts.len(), "reflection_found": auts.contains(&reflect)}));
        }
        let adj = x.adjacency();
        for i in 0..5 {
            let (a, b) = (core[i], core[(i + 1) % 5]);
            let apexes: Vec<usize> = adj[a].iter().copied().filter(|t| adj[b].contains(t)).collect();
            if apexes.len() != 2 || reflect[apexes[0]] != apexes[1] {
                return fail(json!({"edge": i, "apexes": apexes}));
            }
        }
        Ok(json!({"order": 2, "generator": "reflect", "apex_pairs_swapped": 5}))
    })();
    LemmaReport::from_result(NAME, res)
}

/// Compares strata of x with explicit images of smaller rigid sets.
pub fn check_restriction_in(n: usize, x: &PantsSubgraph) -> LemmaReport {
    const NAME: &str = "restriction";
    let res = (|| {
        let err = |e: String| (json!(e), Value::Null);
        if !x.is_connected() {
            return fail(json!({"reason": "disconnected"}));
        }
        let chain = gamma(n).map_err(|e| err(e.to_string()))?.chain();
        let mut cases: Vec<(SubsurfaceMap, PantsSubgraph)> = Vec::new();
        let prev = build_x(n - 1, n).map_err(|e| err(e.to_string()))?;
        for c in &chain {
            let h = SubsurfaceMap::with_holes(n, std::slice::from_ref(c), n - 1).map_err(|e| err(e.to_string()))?;
            cases.push((h, prev.clone()));
        }
        if n == 7 {
            let x5 = build_x5().map_err(|e| err(e.to_string()))?;
            for (i, a) in chain.iter().enumerate() {
                for b in &chain[i + 1..] {
                    if a.disjoint(b) {
                        if let Ok(h) = SubsurfaceMap::new(n, &[a.clone(), b.clone()]) {
                            cases.push((h, x5.clone()));
                        }
                    }
                }
            }
        }
        for (h, src) in &cases {
            let sub = x.induced(&x.stratum(h.w.curves()));
            let want = h.image(src);
            let vs = |g: &PantsSubgraph| -> BTreeSet<PantsVertex> { g.vertices().iter().cloned().collect() };
            let es = |g: &PantsSubgraph| -> BTreeSet<(PantsVertex, PantsVertex)> {
                g.edges()
                    .map(|(a, b)| {
                        let (p, q) = (g.vertex(a).clone(), g.vertex(b).clone());
                        if p < q { (p, q) } else { (q, p) }
                    })
                    .collect()
            };
            let (sv, wv) = (vs(&sub), vs(&want));
            if sv != wv {
                let extra = sv.difference(&wv).next().map(vertex_json);
                let missing = wv.difference(&sv).next().map(vertex_json);
                return fail(json!({"W": h.w.to_string(), "extra": extra, "missing": missing}));
            }
            if es(&sub) != es(&want) {
                return fail(json!({"W": h.w.to_string(), "reason": "edges differ"}));
            }
        }
        Ok(json!({"n": n, "vertices": x.vertex_count(), "edges": x.edge_count(), "strata_checked": cases.len()}))
    })();
    LemmaReport::from_result(NAME, res)
}

pub fn check_restriction(n: usize) -> LemmaReport {
    if !(6..=7).contains(&n) {
        return LemmaReport::skipped("restriction", "only n = 6 and n = 7 are supported");
    }
    match build_x(n, 7) {
        Ok(x) => check_restriction_in(n, &x),
        Err(e) => LemmaReport::skipped("restriction", &e.to_string()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    pub n: usize,
    pub radius: usize,
    pub twist_bound: usize,
    pub certify_depth: usize,
    pub max_vertices: usize,
    pub max_maps: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams { n: 5, radius: 3, twist_bound: 3, certify_depth: 10, max_vertices: 200_000, max_maps: 100_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Geometric,
    Uncertified,
    Falsification,
}

/// A map f^Q: the word carries the seed copy of X5 onto the image, and Q
/// is what every image vertex shares.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricCertificate {
    pub q: Vec<String>,
    pub word: MCWord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingCandidate {
    /// Target vertex id for each X5 vertex id.
    pub map: Vec<usize>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<GeometricCertificate>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub params: SearchParams,
    pub source_vertices: usize,
    pub source_edges: usize,
    pub target_vertices: usize,
    pub target_edges: usize,
    pub partial: bool,
    pub found: usize,
    pub certified: usize,
    pub uncertified: usize,
    pub falsified: usize,
    pub embeddings: Vec<EmbeddingCandidate>,
}

impl SearchReport {
    pub fn lemma_report(&self) -> LemmaReport {
        let details = json!({
            "found": self.found, "certified": self.certified, "uncertified": self.uncertified,
            "falsified": self.falsified, "partial": self.partial,
            "target_vertices": self.target_vertices, "target_edges": self.target_edges,
        });
        if self.falsified > 0 {
            let w = self.embeddings.iter().find(|e| e.verdict == Verdict::Falsification).map(|e| json!(e)).unwrap_or(Value::Null);
            LemmaReport::violated("rigidity", w, details)
        } else if self.partial || self.uncertified > 0 || self.found == 0 {
            LemmaReport { status: Status::Skipped, ..LemmaReport::verified("rigidity", details) }
        } else {
            LemmaReport::verified("rigidity", details)
        }
    }
}

/// The seed copy of X5 inside S_{0,n}: the identity for n = 5, else the
/// first five-holed piece of Γn.
fn seed_map(n: usize) -> Result<SubsurfaceMap, String> {
    five_holed_multicurves(n).map_err(|e| e.to_string())?.into_iter().next().ok_or_else(|| "no five-holed piece".to_string())
}

/// Enumerates every injective simplicial map X5 -> ball(seed(A), r, K)
/// with A sent to seed(A), and classifies each.
pub fn rigidity_search(params: &SearchParams) -> Result<SearchReport, String> {
    let n = params.n;
    if !(5..=6).contains(&n) {
        return Err(format!("rigidity search supports n = 5 or 6, got {n}"));
    }
    let x5 = build_x5().map_err(|e| e.to_string())?;
    let h0 = seed_map(n)?;
    let a = x5.id_of(&core_pentagon()[0]).expect("A in X5");
    let seed = h0.apply_vertex(x5.vertex(a));
    let target = ball(&seed, params.radius, params.twist_bound, params.max_vertices).map_err(|e| e.to_string())?;
    let s0 = target.id_of(&seed).expect("seed in ball");
    let (found, partial) = match maps(&x5.adjacency(), &target.adjacency(), &[(a, s0)], false, params.max_maps) {
        Ok(v) => (v, false),
        Err(GraphError::Limit(_)) => (Vec::new(), true),
        Err(e) => return Err(e.to_string()),
    };
    let embeddings: Vec<EmbeddingCandidate> = found.into_par_iter().map(|m| classify(&x5, &target, &h0, m, params.certify_depth)).collect();
    let count = |v: Verdict| embeddings.iter().filter(|e| e.verdict == v).count();
    Ok(SearchReport {
        params: params.clone(),
        source_vertices: x5.vertex_count(),
        source_edges: x5.edge_count(),
        target_vertices: target.vertex_count(),
        target_edges: target.edge_count(),
        partial,
        found: embeddings.len(),
        certified: count(Verdict::Geometric),
        uncertified: count(Verdict::Uncertified),
        falsified: count(Verdict::Falsification),
        embeddings,
    })
}

/// Reads off Q and the curve map from a vertex map and looks for a word
/// realizing it on every X5 vertex.
pub fn classify(x5: &PantsSubgraph, target: &PantsSubgraph, h0: &SubsurfaceMap, map: Vec<usize>, depth: usize) -> EmbeddingCandidate {
    let verdict = |v: Verdict, reason: &str, cert: Option<GeometricCertificate>, map: Vec<usize>| EmbeddingCandidate {
        map,
        verdict: v,
        certificate: cert,
        reason: (!reason.is_empty()).then(|| reason.to_string()),
    };
    let image = |u: usize| target.vertex(map[u]);
    let core: Vec<usize> = core_pentagon().iter().map(|v| x5.id_of(v).expect("core")).collect();
    let mut cyc = PantsSubgraph::new(target.n());
    for i in 0..5 {
        if cyc.add_vertex_edge(image(core[i]), image(core[(i + 1) % 5])).is_err() {
            return verdict(Verdict::Falsification, "image of an edge is not an elementary move", None, map);
        }
    }
    if !matches!(is_alternating_cycle(&cyc, &[0, 1, 2, 3, 4]), Ok(true)) {
        return verdict(Verdict::Falsification, "image of the core pentagon is not alternating", None, map);
    }
    let mut q: BTreeSet<CurveClass> = image(0).curves().iter().cloned().collect();
    for u in 1..x5.vertex_count() {
        q.retain(|c| image(u).contains(c));
    }
    if q.len() != target.n() - 5 {
        return verdict(Verdict::Uncertified, "common multicurve has the wrong size", None, map);
    }
    let mut holders: BTreeMap<CurveClass, Vec<usize>> = BTreeMap::new();
    for (u, v) in x5.vertices().iter().enumerate() {
        for c in v.curves() {
            holders.entry(c.clone()).or_default().push(u);
        }
    }
    let mut pairs = Vec::new();
    for (c, us) in &holders {
        let mut common: BTreeSet<CurveClass> = image(us[0]).curves().iter().cloned().collect();
        for &u in &us[1..] {
            common.retain(|x| image(u).contains(x));
        }
        common.retain(|x| !q.contains(x));
        if common.len() != 1 {
            return verdict(Verdict::Uncertified, &format!("curve {c} has no single image"), None, map);
        }
        pairs.push((h0.apply_curve(c), common.into_iter().next().expect("one")));
    }
    for w in h0.w.curves() {
        let img = q.iter().find(|x| pairs.iter().all(|(_, y)| x.disjoint(y)));
        if let Some(img) = img {
            pairs.push((w.clone(), img.clone()));
        }
    }
    let Some(word) = word_search(&pairs, depth) else {
        return verdict(Verdict::Uncertified, "no word found within the certification depth", None, map);
    };
    for (u, v) in x5.vertices().iter().enumerate() {
        let src = h0.apply_vertex(v);
        let moved: Vec<CurveClass> = src.curves().iter().map(|c| word.apply(c)).collect();
        if PantsVertex::new(target.n(), &moved).ok().as_ref() != Some(image(u)) {
            return verdict(Verdict::Uncertified, "word disagrees with the map", None, map);
        }
    }
    let cert = GeometricCertificate { q: q.iter().map(|c| c.to_string()).collect(), word };
    verdict(Verdict::Geometric, "", Some(cert), map)
}

/// Collected reports for one suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub params: Value,
    pub reports: Vec<LemmaReport>,
}

impl SuiteReport {
    pub fn count(&self, s: Status) -> usize {
        self.reports.iter().filter(|r| r.status == s).count()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "params": self.params,
            "reports": self.reports,
            "summary": {
                "verified": self.count(Status::Verified),
                "violated": self.count(Status::Violated),
                "skipped": self.count(Status::Skipped),
            },
        })
    }

    /// 0 when nothing is violated, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.count(Status::Violated) > 0)
    }
}

pub const SUITES: [&str; 6] = ["farey", "Z", "thick", "sym", "restriction", "all"];

fn timed(timings: bool, f: impl FnOnce() -> LemmaReport) -> LemmaReport {
    let t = Instant::now();
    let mut r = f();
    if timings {
        r.runtime_ms = Some(t.elapsed().as_millis() as u64);
    }
    r
}

/// A fixed length-3 word used for the equivariance check of the thick
/// pentagon lemma.
pub fn scramble_word() -> MCWord {
    MCWord::new(5, vec![Generator::sigma(2, 1), Generator::sigma(1, -1), Generator::sigma(3, 1)]).expect("valid word")
}

pub fn run_suite(suite: &str, n: usize, timings: bool) -> Result<SuiteReport, String> {
    let mut reports = Vec::new();
    let run = |s: &str| suite == s || suite == "all";
    if !SUITES.contains(&suite) {
        return Err(format!("unknown suite {suite}"));
    }
    if run("farey") {
        let a = &core_pentagon()[0];
        let al = &gamma5_named()[0].1;
        reports.push(timed(timings, || check_farey_local(a, al, 2, 3)));
        reports.push(timed(timings, || check_slopes(6)));
        reports.push(timed(timings, || check_twist_growth(3)));
        reports.push(timed(timings, check_triangle_identity));
    }
    if run("Z") {
        let ns: Vec<usize> = if suite == "all" { vec![5, 6, 7] } else { vec![n] };
        for m in ns {
            reports.push(timed(timings, || check_gamma(m)));
            reports.push(timed(timings, || check_lemma_z(m)));
        }
    }
    if run("thick") {
        reports.push(timed(timings, || check_thick_pentagon(&core_pentagon())));
        let w = scramble_word();
        let moved = core_pentagon().map(|v| PantsVertex::new(5, &v.curves().iter().map(|c| w.apply(c)).collect::<Vec<_>>()).expect("pants"));
        reports.push(timed(timings, || check_thick_pentagon(&moved)));
    }
    if run("sym") {
        reports.push(timed(timings, check_sym_x5));
    }
    if run("restriction") {
        let m = if suite == "all" || n < 6 { 6 } else { n };
        reports.push(timed(timings, || check_restriction(m)));
    }
    Ok(SuiteReport { suite: suite.to_string(), params: json!({"n": n}), reports })
}
