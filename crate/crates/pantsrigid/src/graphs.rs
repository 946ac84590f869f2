//! Backtracking isomorphism, automorphism and embedding search for small
//! graphs given as adjacency lists. Enumeration order is deterministic:
//! source vertices are visited in a fixed connected order and candidates
//! in increasing target id.

use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has {0} vertices, limit is {1}")]
    TooLarge(usize, usize),
    #[error("search stopped after {0} results")]
    Limit(usize),
    #[error("bad seed pair {0} -> {1}")]
    BadSeed(usize, usize),
}

pub const ISO_LIMIT: usize = 200;

fn matrix(adj: &[Vec<usize>]) -> Vec<Vec<bool>> {
    let n = adj.len();
    let mut m = vec![vec![false; n]; n];
    for (a, ns) in adj.iter().enumerate() {
        for &b in ns {
            m[a][b] = true;
        }
    }
    m
}

/// Visit order: seeds first, then breadth-first, preferring high degree
/// when a new component has to be started.
fn order(adj: &[Vec<usize>], seeds: &[usize]) -> Vec<usize> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut out = Vec::with_capacity(n);
    let mut queue = std::collections::VecDeque::new();
    for &s in seeds {
        if !seen[s] {
            seen[s] = true;
            out.push(s);
            queue.push_back(s);
        }
    }
    loop {
        while let Some(v) = queue.pop_front() {
            let mut ns = adj[v].clone();
            ns.sort();
            for w in ns {
                if !seen[w] {
                    seen[w] = true;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        let Some(s) = (0..n).filter(|&v| !seen[v]).max_by_key(|&v| (adj[v].len(), std::cmp::Reverse(v))) else { break };
        seen[s] = true;
        out.push(s);
        queue.push_back(s);
    }
    out
}

struct Search<'a> {
    src: &'a [Vec<usize>],
    dst: &'a [Vec<usize>],
    dm: Vec<Vec<bool>>,
    sm: Vec<Vec<bool>>,
    order: Vec<usize>,
    /// Also require non-edges to map to non-edges and equal degrees.
    induced: bool,
    limit: usize,
}

impl Search<'_> {
    fn candidates(&self, u: usize, map: &[Option<usize>]) -> Vec<usize> {
        let anchor = self.src[u].iter().filter_map(|&w| map[w]).min_by_key(|&t| self.dst[t].len());
        let mut c: Vec<usize> = match anchor {
            Some(t) => self.dst[t].clone(),
            None => (0..self.dst.len()).collect(),
        };
        c.sort();
        c
    }

    fn fits(&self, u: usize, t: usize, map: &[Option<usize>], used: &[bool]) -> bool {
        if used[t] {
            return false;
        }
        let (du, dt) = (self.src[u].len(), self.dst[t].len());
        if (self.induced && du != dt) || du > dt {
            return false;
        }
        for (w, m) in map.iter().enumerate() {
            if let Some(tw) = *m {
                if self.sm[u][w] && !self.dm[t][tw] {
                    return false;
                }
                if self.induced && !self.sm[u][w] && self.dm[t][tw] {
                    return false;
                }
            }
        }
        true
    }

    fn run(&self, depth: usize, map: &mut Vec<Option<usize>>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) -> Result<(), GraphError> {
        if depth == self.order.len() {
            if out.len() >= self.limit {
                return Err(GraphError::Limit(self.limit));
            }
            out.push(map.iter().map(|m| m.expect("complete")).collect());
            return Ok(());
        }
        let u = self.order[depth];
        if map[u].is_some() {
            return self.run(depth + 1, map, used, out);
        }
        for t in self.candidates(u, map) {
            if self.fits(u, t, map, used) {
                map[u] = Some(t);
                used[t] = true;
                self.run(depth + 1, map, used, out)?;
                map[u] = None;
                used[t] = false;
            }
        }
        Ok(())
    }
}

/// All maps src -> dst that are injective and send edges to edges, with
/// the given pairs fixed. With `induced`, non-edges go to non-edges as well.
/// Branches on the first free vertex in parallel; the result is sorted.
pub fn maps(
    src: &[Vec<usize>],
    dst: &[Vec<usize>],
    seeds: &[(usize, usize)],
    induced: bool,
    limit: usize,
) -> Result<Vec<Vec<usize>>, GraphError> {
    let mut map = vec![None; src.len()];
    let mut used = vec![false; dst.len()];
    for &(s, t) in seeds {
        if s >= src.len() || t >= dst.len() || used[t] {
            return Err(GraphError::BadSeed(s, t));
        }
        map[s] = Some(t);
        used[t] = true;
    }
    let seed_src: Vec<usize> = seeds.iter().map(|p| p.0).collect();
    let search = Search { src, dst, dm: matrix(dst), sm: matrix(src), order: order(src, &seed_src), induced, limit };
    for &(s, t) in seeds {
        let mut probe = map.clone();
        probe[s] = None;
        let mut u2 = used.clone();
        u2[t] = false;
        if !search.fits(s, t, &probe, &u2) {
            return Ok(Vec::new());
        }
    }
    let Some(first) = search.order.iter().position(|&u| map[u].is_none()) else {
        return Ok(vec![map.iter().map(|m| m.expect("seeded")).collect()]);
    };
    let u = search.order[first];
    let branches: Vec<usize> = search.candidates(u, &map).into_iter().filter(|&t| search.fits(u, t, &map, &used)).collect();
    let parts: Vec<Result<Vec<Vec<usize>>, GraphError>> = branches
        .par_iter()
        .map(|&t| {
            let mut m = map.clone();
            let mut us = used.clone();
            m[u] = Some(t);
            us[t] = true;
            let mut out = Vec::new();
            search.run(first + 1, &mut m, &mut us, &mut out)?;
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for p in parts {
        all.extend(p?);
        if all.len() > limit {
            return Err(GraphError::Limit(limit));
        }
    }
    all.sort();
    Ok(all)
}

/// An isomorphism g -> h, if one exists.
pub fn isomorphism(g: &[Vec<usize>], h: &[Vec<usize>]) -> Result<Option<Vec<usize>>, GraphError> {
    for x in [g, h] {
        if x.len() > ISO_LIMIT {
            return Err(GraphError::TooLarge(x.len(), ISO_LIMIT));
        }
    }
    let edges = |x: &[Vec<usize>]| x.iter().map(|v| v.len()).sum::<usize>();
    if g.len() != h.len() || edges(g) != edges(h) {
        return Ok(None);
    }
    let mut dg: Vec<usize> = g.iter().map(|v| v.len()).collect();
    let mut dh: Vec<usize> = h.iter().map(|v| v.len()).collect();
    dg.sort();
    dh.sort();
    if dg != dh {
        return Ok(None);
    }
    let mut map = vec![None; g.len()];
    let mut used = vec![false; h.len()];
    let search = Search { src: g, dst: h, dm: matrix(h), sm: matrix(g), order: order(g, &[]), induced: true, limit: 1 };
    let mut out = Vec::new();
    match search.run(0, &mut map, &mut used, &mut out) {
        Ok(()) | Err(GraphError::Limit(_)) => Ok(out.into_iter().next()),
        Err(e) => Err(e),
    }
}

/// Automorphisms fixing every vertex of `fixed`, sorted, identity first.
pub fn automorphisms(g: &[Vec<usize>], fixed: &[usize]) -> Result<Vec<Vec<usize>>, GraphError> {
    if g.len() > ISO_LIMIT {
        return Err(GraphError::TooLarge(g.len(), ISO_LIMIT));
    }
    let seeds: Vec<(usize, usize)> = fixed.iter().map(|&v| (v, v)).collect();
    maps(g, g, &seeds, true, usize::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(k: usize) -> Vec<Vec<usize>> {
        (0..k).map(|i| vec![(i + k - 1) % k, (i + 1) % k]).collect()
    }

    #[test]
    fn cycle_symmetries() {
        assert_eq!(automorphisms(&cycle(5), &[]).unwrap().len(), 10);
        assert_eq!(automorphisms(&cycle(6), &[0]).unwrap().len(), 2);
        assert_eq!(automorphisms(&cycle(6), &[0, 1]).unwrap(), vec![(0..6).collect::<Vec<_>>()]);
    }

    #[test]
    fn iso_of_relabelled_cycle() {
        let mut h = vec![Vec::new(); 5];
        let perm = [3, 0, 4, 1, 2];
        for (a, ns) in cycle(5).iter().enumerate() {
            for &b in ns {
                h[perm[a]].push(perm[b]);
            }
        }
        let f = isomorphism(&cycle(5), &h).unwrap().unwrap();
        for (a, ns) in cycle(5).iter().enumerate() {
            for &b in ns {
                assert!(h[f[a]].contains(&f[b]));
            }
        }
        assert!(isomorphism(&cycle(5), &cycle(6)).unwrap().is_none());
    }

    #[test]
    fn path_into_cycle() {
        let path = vec![vec![1], vec![0, 2], vec![1]];
        assert_eq!(maps(&path, &cycle(5), &[], false, 1000).unwrap().len(), 10);
        assert_eq!(maps(&path, &cycle(5), &[(0, 0)], false, 1000).unwrap().len(), 2);
        assert!(matches!(maps(&path, &cycle(5), &[], false, 3), Err(GraphError::Limit(3))));
    }
}
