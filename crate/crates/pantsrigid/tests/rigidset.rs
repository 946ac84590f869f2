mod common;

use std::collections::BTreeSet;

use common::{blocks_linked, flip_graph, rc};
use pantsrigid::curve::CurveClass;
use pantsrigid::mapclass::two_puncture_twist;
use pantsrigid::pants::{
    cycles_of_length, farey_id, is_alternating_cycle, is_elementary_move, star, thick_graph, PantsSubgraph, PantsVertex,
};
use pantsrigid::rigidset::{
    build_x, build_x5, build_z, core_pentagon, five_holed_multicurves, gamma, gamma5_named, RigidError, SubsurfaceMap,
};

#[test]
fn gamma_counts_and_chain() {
    for n in 5..=8 {
        let g = gamma(n).unwrap();
        assert_eq!(g.curves.len(), n * (n - 3) / 2);
        let distinct: BTreeSet<&CurveClass> = g.curves.iter().collect();
        assert_eq!(distinct.len(), g.curves.len());
        assert_eq!(g.chain().len(), n);
        for c in g.chain() {
            let e = c.enclosed_punctures();
            assert!(e.len() == 2 || e.len() == n - 2);
        }
    }
    assert!(matches!(gamma(4), Err(RigidError::TooSmall(4))));
    // Every Γ5 curve is a chain curve.
    assert!(gamma(5).unwrap().curves.iter().all(|c| [2, 3].contains(&c.enclosed_punctures().len())));
}

#[test]
fn chord_disjointness_matches_blocks() {
    for n in 5..=8 {
        let g = gamma(n).unwrap();
        for (x, cx) in g.chords.iter().zip(&g.curves) {
            for (y, cy) in g.chords.iter().zip(&g.curves) {
                if x != y {
                    assert_eq!(cx.disjoint(cy), !blocks_linked(n, &x.block(), &y.block()), "{x:?} {y:?}");
                }
            }
        }
    }
}

fn flip_key(n: usize, v: &PantsVertex, g: &pantsrigid::rigidset::GammaSystem) -> Vec<(usize, usize)> {
    let mut d: Vec<(usize, usize)> = v
        .curves()
        .iter()
        .map(|c| {
            let ch = g.chord_of(c).unwrap();
            (ch.i - 1, ch.j - 1)
        })
        .collect();
    d.sort();
    assert!(d.iter().all(|&(a, b)| a < b && b < n));
    d
}

#[test]
fn z_is_the_flip_graph() {
    for n in 5..=7 {
        let z = build_z(n).unwrap();
        let g = gamma(n).unwrap();
        let (tris, flips) = flip_graph(n);
        assert_eq!(z.vertex_count(), tris.len());
        assert_eq!(z.edge_count(), flips.len());
        let keys: Vec<Vec<(usize, usize)>> = z.vertices().iter().map(|v| flip_key(n, v, &g)).collect();
        let pos = |k: &Vec<(usize, usize)>| tris.iter().position(|t| t == k).expect("triangulation");
        let mapped: BTreeSet<(usize, usize)> = z
            .edges()
            .map(|(a, b)| {
                let (x, y) = (pos(&keys[a]), pos(&keys[b]));
                (x.min(y), x.max(y))
            })
            .collect();
        let want: BTreeSet<(usize, usize)> = flips.into_iter().collect();
        assert_eq!(mapped, want, "n={n}");
    }
}

#[test]
fn z_counts() {
    let z5 = build_z(5).unwrap();
    assert_eq!((z5.vertex_count(), z5.edge_count()), (5, 5));
    let z6 = build_z(6).unwrap();
    assert_eq!((z6.vertex_count(), z6.edge_count()), (14, 21));
    assert!((0..14).all(|v| z6.degree(v) == 3));
    assert_eq!(build_z(7).unwrap().vertex_count(), 42);
}

#[test]
fn z_stars_meet_distinct_farey_graphs() {
    for n in 5..=7 {
        let z = build_z(n).unwrap();
        assert!(z.is_connected());
        z.validate().unwrap();
        for v in 0..z.vertex_count() {
            let s = star(v, &z);
            assert_eq!(s.edge_count(), n - 3);
            let ids: BTreeSet<_> = s.edges().map(|(a, b)| farey_id(s.vertex(a), s.vertex(b)).unwrap()).collect();
            assert_eq!(ids.len(), n - 3);
        }
    }
}

#[test]
fn z5_is_the_core_pentagon() {
    let z = build_z(5).unwrap();
    let core = core_pentagon();
    let ids: Vec<usize> = core.iter().map(|v| z.id_of(v).unwrap()).collect();
    for i in 0..5 {
        assert!(z.has_edge(ids[i], ids[(i + 1) % 5]));
    }
    assert!(is_alternating_cycle(&z, &ids).unwrap());
}

#[test]
fn x5_shape() {
    let x = build_x5().unwrap();
    assert_eq!((x.vertex_count(), x.edge_count()), (25, 45));
    x.validate().unwrap();
    let alt: Vec<Vec<usize>> = cycles_of_length(&x, 5).into_iter().filter(|c| is_alternating_cycle(&x, c).unwrap()).collect();
    assert_eq!(alt.len(), 11);

    // The thick pentagon: ten apexes, all inside X5.
    let z = build_z(5).unwrap();
    let th = thick_graph(&z).unwrap();
    assert_eq!((th.vertex_count(), th.edge_count()), (15, 25));
    for v in th.vertices() {
        assert!(x.id_of(v).is_some(), "{v}");
    }
    for (a, b) in th.edges() {
        assert!(x.has_edge(x.id_of(th.vertex(a)).unwrap(), x.id_of(th.vertex(b)).unwrap()));
    }
}

#[test]
fn x5_pentagons_share_one_core_edge() {
    let x = build_x5().unwrap();
    let z = build_z(5).unwrap();
    let core: BTreeSet<usize> = z.vertices().iter().map(|v| x.id_of(v).unwrap()).collect();
    for (_, c) in gamma5_named() {
        for s in [1, -1] {
            let t = two_puncture_twist(&c, s).unwrap();
            let img: Vec<usize> = z
                .vertices()
                .iter()
                .map(|v| x.id_of(&PantsVertex::new(5, &v.curves().iter().map(|u| t.apply(u)).collect::<Vec<_>>()).unwrap()).unwrap())
                .collect();
            let shared = (0..5).filter(|&i| {
                let (a, b) = (img[i], img[(i + 1) % 5]);
                core.contains(&a) && core.contains(&b)
            });
            assert_eq!(shared.count(), 1, "{c} {s}");
        }
    }
    // Each core edge carries exactly two triangles in X5.
    let adj = x.adjacency();
    for (a, b) in z.edges() {
        let (a, b) = (x.id_of(z.vertex(a)).unwrap(), x.id_of(z.vertex(b)).unwrap());
        let common = adj[a].iter().filter(|w| adj[b].contains(w)).count();
        assert_eq!(common, 2);
    }
}

#[test]
fn x5_is_labelled_by_pentagon() {
    let x = build_x5().unwrap();
    let a = x.id_of(&core_pentagon()[0]).unwrap();
    assert!(x.vertex_labels(a).contains(&"pentagon=core".to_string()));
    let labelled: BTreeSet<String> = (0..25).flat_map(|i| x.vertex_labels(i)).filter(|l| l.starts_with("pentagon=")).collect();
    assert_eq!(labelled.len(), 11);
}

#[test]
fn subsurface_map_for_a_chain_curve() {
    let n = 6;
    let w = rc(n, &[1, 2]);
    let h = SubsurfaceMap::new(n, std::slice::from_ref(&w)).unwrap();
    assert_eq!(h.blocks, [vec![1, 2], vec![3], vec![4], vec![5], vec![6]]);
    let g6 = gamma(n).unwrap();
    let mut images = BTreeSet::new();
    for (_, c) in gamma5_named() {
        let img = h.apply_curve(&c);
        assert!(g6.contains(&img), "{img}");
        assert!(img.disjoint(&w));
        assert_ne!(img, w);
        images.insert(img);
    }
    assert_eq!(images.len(), 5);
    let x5 = build_x5().unwrap();
    let vs: BTreeSet<PantsVertex> = x5.vertices().iter().map(|u| h.apply_vertex(u)).collect();
    assert_eq!(vs.len(), 25);
    for (a, b) in x5.edges() {
        assert!(is_elementary_move(&h.apply_vertex(x5.vertex(a)), &h.apply_vertex(x5.vertex(b))));
    }
}

#[test]
fn subsurface_map_rejects_bad_multicurves() {
    let n = 6;
    assert!(matches!(SubsurfaceMap::new(n, &[rc(n, &[1, 2, 3])]), Err(RigidError::WrongComponent)));
    assert!(matches!(SubsurfaceMap::new(n, &[]), Err(RigidError::WrongDeficiency { .. })));
    assert!(SubsurfaceMap::new(n, &[rc(n, &[1, 2]), rc(n, &[2, 3])]).is_err());
    let n = 7;
    let nested = SubsurfaceMap::new(n, &[rc(n, &[1, 2]), rc(n, &[1, 2, 3])]).unwrap();
    assert_eq!(nested.blocks, [vec![1, 2, 3], vec![4], vec![5], vec![6], vec![7]]);
    let inner = SubsurfaceMap::new(n, &[rc(n, &[3, 4]), rc(n, &[2, 3, 4, 5, 6])]).unwrap();
    assert_eq!(inner.blocks, [vec![2], vec![3, 4], vec![5], vec![6], vec![1, 7]]);
}

/// Restricting a twist map conjugates it: h(T_c(u)) = T_{h(c)}(h(u)) when
/// h(c) still bounds two punctures.
#[test]
fn subsurface_map_intertwines_twists() {
    let n = 6;
    let h = SubsurfaceMap::new(n, &[rc(n, &[5, 6])]).unwrap();
    let z5 = build_z(5).unwrap();
    for (_, c) in gamma5_named() {
        let hc = h.apply_curve(&c);
        let Ok(big) = two_puncture_twist(&hc, 1) else { continue };
        let small = two_puncture_twist(&c, 1).unwrap();
        if c.enclosed_punctures().iter().any(|&p| h.blocks[p - 1].len() > 1) {
            continue;
        }
        for v in z5.vertices() {
            for u in v.curves() {
                assert_eq!(h.apply_curve(&small.apply(u)), big.apply(&h.apply_curve(u)), "{c} {u}");
            }
        }
    }
}

#[test]
fn x6_pieces() {
    let maps = five_holed_multicurves(6).unwrap();
    assert_eq!(maps.len(), 6);
    let chain: BTreeSet<CurveClass> = gamma(6).unwrap().chain().into_iter().collect();
    for m in &maps {
        assert!(chain.contains(&m.w.curves()[0]));
    }
    assert_eq!(five_holed_multicurves(5).unwrap().len(), 1);
}

fn restriction_matches(x: &PantsSubgraph, h: &SubsurfaceMap, x5: &PantsSubgraph) {
    let q = h.w.curves();
    let ids = x.stratum(q);
    let sub = x.induced(&ids);
    let want = h.image(x5);
    assert_eq!(sub.vertex_count(), want.vertex_count(), "W={}", h.w);
    for v in want.vertices() {
        assert!(sub.id_of(v).is_some());
    }
    let edges = |g: &PantsSubgraph| -> BTreeSet<(PantsVertex, PantsVertex)> {
        g.edges()
            .map(|(a, b)| {
                let (p, q) = (g.vertex(a).clone(), g.vertex(b).clone());
                if p < q { (p, q) } else { (q, p) }
            })
            .collect()
    };
    assert_eq!(edges(&sub), edges(&want), "W={}", h.w);
}

#[test]
fn x6_restricts_to_x5_on_chain_curves() {
    let x6 = build_x(6, 7).unwrap();
    x6.validate().unwrap();
    assert!(x6.is_connected());
    let x5 = build_x5().unwrap();
    for h in five_holed_multicurves(6).unwrap() {
        restriction_matches(&x6, &h, &x5);
    }
    let z6 = build_z(6).unwrap();
    let ids: Vec<usize> = z6.vertices().iter().map(|v| x6.id_of(v).unwrap()).collect();
    let sub = x6.induced(&ids);
    assert_eq!(sub.edge_count(), z6.edge_count());
}

#[test]
fn x_cores_lie_in_z() {
    let z5 = build_z(5).unwrap();
    for n in [6, 7] {
        let z = build_z(n).unwrap();
        for h in five_holed_multicurves(n).unwrap() {
            for v in z5.vertices() {
                assert!(z.id_of(&h.apply_vertex(v)).is_some(), "n={n} W={}", h.w);
            }
        }
    }
}

#[test]
fn x_goldens() {
    let x6 = build_x(6, 7).unwrap();
    assert_eq!((x6.vertex_count(), x6.edge_count()), (116, 225));
    let x7 = build_x(7, 7).unwrap();
    assert_eq!((x7.vertex_count(), x7.edge_count()), (490, 980));
    x7.validate().unwrap();
    assert!(x7.is_connected());
    assert!(matches!(build_x(8, 7), Err(RigidError::Limit(8, 7))));
}
