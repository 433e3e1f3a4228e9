use super::takahashi::*;
use super::*;
use crate::backend::{BackendConfig, BackendKind};
use crate::stabilizer::edge_stabilizer_order_joint;
use crate::tree::Edge;

fn backend(kind: BackendKind, q: usize) -> Backend {
    Backend::new(BackendConfig::default_for(kind, q).unwrap()).unwrap()
}

/// Affine solutions of the Weierstrass equation plus the point at infinity.
fn brute_force_points(bk: &Backend) -> u64 {
    let k = bk.field();
    1 + k.elements().map(|x| weierstrass_roots(bk, x).len() as u64).sum::<u64>()
}

fn incidences(q: &QuotientGraph, v: usize) -> usize {
    q.edges.iter().map(|e| (e.source == v) as usize + (e.target == v) as usize).sum()
}

#[test]
fn rational_quotient_is_a_ray_from_an_isolated_vertex() {
    for q in [2usize, 3] {
        let bk = backend(BackendKind::RationalDelta1, q);
        let g = bfs_quotient(&bk, 8).unwrap();
        assert_eq!(g.vertices.len(), 9);
        assert_eq!(g.omega, 0);
        assert_eq!(g.rays.len(), 1);
        assert!(g.unresolved.is_empty());
        let vals: Vec<usize> = g.vertices.iter().map(|v| v.valency).collect();
        assert_eq!(vals[0], 1);
        assert!(vals[1..].iter().all(|&v| v == 2));
        let q128 = q as u128;
        assert_eq!(g.vertices[0].order, (q128 * q128 - 1) * (q128 * q128 - q128));
    }
}

#[test]
fn every_star_orbit_is_paired_once() {
    for kind in [BackendKind::RationalDelta1, BackendKind::EllipticDelta1, BackendKind::RationalDelta2] {
        for q in [2usize, 3] {
            let bk = backend(kind, q);
            let g = bfs_quotient(&bk, 2 * bk.genus() as usize + 6).unwrap();
            assert_eq!(g.maximal_tree.len(), g.vertices.len() - 1);
            for v in &g.vertices {
                let inc = incidences(&g, v.index);
                if v.boundary {
                    assert!(inc <= v.valency);
                } else {
                    assert_eq!(inc, v.valency, "{} at {}", bk.describe(), v.rep);
                }
            }
        }
    }
}

#[test]
fn star_orbits_match_edge_stabilizers() {
    for kind in [BackendKind::RationalDelta1, BackendKind::EllipticDelta1, BackendKind::RationalDelta2] {
        for q in [2usize, 3] {
            let bk = backend(kind, q);
            let g = bfs_quotient(&bk, 4).unwrap();
            for v in &g.vertices {
                let s = enumerate_stabilizer(&bk, &v.rep).unwrap();
                let orbits = star_orbits(&bk, &s).unwrap();
                let total: usize = orbits.iter().map(StarOrbit::size).sum();
                assert_eq!(total, Vertex::valence(&bk));
                for o in &orbits {
                    assert_eq!(o.size() as u128 * o.edge_order, s.order);
                    let w = o.representative(&bk, &v.rep);
                    let e = Edge::new(&bk, v.rep.clone(), w).unwrap();
                    assert_eq!(o.edge_order, edge_stabilizer_order_joint(&bk, &e).unwrap());
                }
            }
        }
    }
}

#[test]
fn elliptic_rays_count_rational_points() {
    for q in [2usize, 3] {
        let bk = backend(BackendKind::EllipticDelta1, q);
        let g = bfs_quotient(&bk, 8).unwrap();
        assert_eq!(g.rays.len() as u64, brute_force_points(&bk));
        assert_eq!(g.omega, 0);
        assert!(g.unresolved.is_empty());
    }
}

#[test]
fn degree_two_place_has_two_rays_and_no_isolated_vertex() {
    for q in [2usize, 3] {
        let bk = backend(BackendKind::RationalDelta2, q);
        let g = bfs_quotient(&bk, 6).unwrap();
        // genus zero: the class group is Z / deg(∞)
        assert_eq!(g.rays.len(), 2);
        assert!(g.vertices.iter().all(|v| !v.isolated));
        assert!(free_product_report(&bk, &g).is_err());
    }
}

#[test]
fn single_cm_curve_over_f3_gives_one_factor() {
    let bk = Backend::new(BackendConfig::elliptic(3, [2, 1, 1, 0, 0])).unwrap();
    let lambdas_without_root = bk.field().elements().filter(|&l| weierstrass_roots(&bk, l).is_empty()).count();
    assert_eq!(lambdas_without_root, 1);
    let g = bfs_quotient(&bk, 8).unwrap();
    let r = free_product_report(&bk, &g).unwrap();
    assert_eq!(r.n, 1);
    assert_eq!(r.factor, "Z/4Z");
    assert_eq!(g.rays.len() as u64, brute_force_points(&bk));
}

#[test]
fn takahashi_vertices_on_f2_curves() {
    for cfg in all_curves(2) {
        let bk = Backend::new(cfg).unwrap();
        for c in scan_curve(&bk).unwrap() {
            assert!(c.matches, "{c:?}");
        }
    }
}

#[test]
fn short_radius_is_unresolved() {
    let bk = backend(BackendKind::EllipticDelta1, 3);
    let g = bfs_quotient(&bk, 2).unwrap();
    assert!(!g.unresolved.is_empty());
    assert!(bfs_quotient(&bk, 0).is_err());
}

#[test]
fn exports_are_deterministic() {
    let bk = backend(BackendKind::EllipticDelta1, 2);
    let a = bfs_quotient(&bk, 8).unwrap();
    let b = bfs_quotient(&bk, 8).unwrap();
    assert_eq!(to_json(&a).unwrap(), to_json(&b).unwrap());
    assert_eq!(to_dot(&a), to_dot(&b));
    let csv = to_csv(&a).unwrap();
    assert_eq!(csv, to_csv(&b).unwrap());
    assert_eq!(csv.lines().count(), a.vertices.len() + 1);
    let dot = to_dot(&a);
    assert!(dot.contains("doublecircle"));
    assert!(dot.contains("dashed"));
    assert!(dot.contains("6/SplitQuaternionic/1"));
    let json: serde_json::Value = serde_json::from_str(&to_json(&a).unwrap()).unwrap();
    assert_eq!(json["rays"].as_array().unwrap().len(), 3);
}
