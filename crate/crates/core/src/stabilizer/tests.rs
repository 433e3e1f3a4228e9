use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::backend::{BackendConfig, BackendKind};

fn backend(kind: BackendKind, q: usize) -> Backend {
    Backend::new(BackendConfig::default_for(kind, q).unwrap()).unwrap()
}

fn backends() -> Vec<Backend> {
    let mut out = Vec::new();
    for kind in [BackendKind::RationalDelta1, BackendKind::EllipticDelta1, BackendKind::RationalDelta2] {
        for q in [2, 3] {
            out.push(backend(kind, q));
        }
    }
    out
}

fn random_vertex(bk: &Backend, rng: &mut ChaCha8Rng, steps: usize) -> Vertex {
    let mut v = Vertex::origin();
    for _ in 0..rng.gen_range(0..=steps) {
        v = v.neighbor(bk, rng.gen_range(0..Vertex::valence(bk)));
    }
    v
}

fn mat(a: KElement, b: KElement, c: KElement, d: KElement) -> KMatrix {
    Matrix2::new(a, b, c, d)
}

#[test]
fn origin_stabilizer_is_gl2() {
    for (q, order) in [(2usize, 6u128), (3, 48)] {
        let bk = backend(BackendKind::RationalDelta1, q);
        let s = enumerate_stabilizer(&bk, &Vertex::origin()).unwrap();
        assert_eq!(s.order, order);
        assert_eq!(s.label, ClassLabel::SplitQuaternionic);
        assert!(!s.inferred);
    }
}

#[test]
fn elliptic_minimal_examples() {
    for q in [2usize, 3] {
        let bk = backend(BackendKind::EllipticDelta1, q);
        let pinv = bk.inv(&bk.local_parameter()).unwrap();
        let g1 = enumerate_stabilizer(&bk, &Vertex::normalize(&bk, 1, &pinv)).unwrap();
        assert_eq!(g1.order, q as u128 - 1);
        let g0 = enumerate_stabilizer(&bk, &Vertex::normalize(&bk, 0, &pinv)).unwrap();
        assert_eq!(g0.order, (q * (q - 1)) as u128);
        assert!(g0.label.is_rational());
    }
}

#[test]
fn lower_unipotent_membership() {
    let bk = backend(BackendKind::RationalDelta1, 2);
    let g = mat(KElement::one(), KElement::zero(), bk.var(), KElement::one());
    assert!(is_in_stabilizer(&bk, &g, &Vertex::from_digits(1, [])).unwrap());
    assert!(!is_in_stabilizer(&bk, &g, &Vertex::from_digits(-1, [])).unwrap());
    let singular = mat(bk.var(), KElement::zero(), KElement::zero(), KElement::one());
    assert!(is_in_stabilizer(&bk, &singular, &Vertex::origin()).is_err());
}

#[test]
fn enumerated_elements_form_the_stabilizer() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for bk in backends() {
        for _ in 0..4 {
            let v = random_vertex(&bk, &mut rng, 4);
            let s = enumerate_stabilizer(&bk, &v).unwrap();
            assert_eq!(s.order % (bk.q() as u128 - 1), 0);
            let Some(elems) = s.elements(&bk) else { continue };
            assert_eq!(elems.len() as u128, s.order);
            let set: HashSet<KMatrix> = elems.iter().cloned().collect();
            assert_eq!(set.len(), elems.len(), "duplicate elements");
            for g in &elems {
                assert!(is_in_stabilizer(&bk, g, &v).unwrap());
                assert_eq!(v.apply(&bk, g).unwrap(), v);
            }
            if s.order <= 200 {
                for g in &elems {
                    for h in &elems {
                        assert!(set.contains(&g.mul(h, &bk)), "{}: not closed", bk.describe());
                    }
                }
            }
        }
    }
}

#[test]
fn generators_generate() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for bk in backends() {
        for _ in 0..3 {
            let v = random_vertex(&bk, &mut rng, 3);
            let s = enumerate_stabilizer(&bk, &v).unwrap();
            if s.order > 2000 {
                continue;
            }
            let gens = s.generators(&bk);
            let id = Matrix2::identity(&bk);
            let mut seen = HashSet::from([id.clone()]);
            let mut queue = VecDeque::from([id]);
            while let Some(x) = queue.pop_front() {
                for g in &gens {
                    let y = x.mul(g, &bk);
                    if seen.insert(y.clone()) {
                        queue.push_back(y);
                    }
                }
            }
            assert_eq!(seen.len() as u128, s.order, "{} at {v}", bk.describe());
        }
    }
}

#[test]
fn span_i_sizes_follow_eigenvalue_class() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for bk in backends() {
        for _ in 0..4 {
            let v = random_vertex(&bk, &mut rng, 3);
            let s = enumerate_stabilizer(&bk, &v).unwrap();
            let m = s.random_element(&bk, &mut rng).unwrap();
            let k = bk.field();
            let tr = m.trace(&bk).as_constant().unwrap();
            let det = m.det(&bk).as_constant().unwrap();
            // scalars span only Z
            let scalar = m.b.is_zero() && m.c.is_zero() && m.a == m.d;
            let span = span_i(&bk, &m, &v).unwrap();
            if scalar {
                assert_eq!(span.len(), bk.q() - 1);
            } else {
                let class = eigen_class(tr, det, k).unwrap();
                assert_eq!(span.len(), span_i_expected_size(class, bk.q()));
            }
        }
    }
}

#[test]
fn edge_stabilizer_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for bk in backends() {
        for _ in 0..6 {
            let v = random_vertex(&bk, &mut rng, 4);
            let w = v.neighbor(&bk, rng.gen_range(0..Vertex::valence(&bk)));
            let e = Edge::new(&bk, v.clone(), w.clone()).unwrap();
            let ge = edge_stabilizer(&bk, &e).unwrap();
            assert_eq!(ge.order, edge_stabilizer_order_joint(&bk, &e).unwrap(), "{}", bk.describe());
            // the same group seen from the other endpoint
            let from_upper = enumerate_stabilizer(&bk, &e.upper).unwrap().edge_subgroup(&bk, &e.lower).unwrap();
            assert_eq!(ge.order, from_upper.order);
            if let Some(elems) = ge.elements(&bk) {
                for g in elems {
                    assert!(is_in_stabilizer(&bk, &g, &v).unwrap() && is_in_stabilizer(&bk, &g, &w).unwrap());
                }
            }
        }
    }
}

#[test]
fn order_formula_rejects_impossible_orders() {
    let bk = backend(BackendKind::RationalDelta1, 3);
    let e = EigenSummary { distinct: true, ..Default::default() };
    assert!(classify_order(&bk, 4 * 27, Some(&e)).is_ok());
    assert!(classify_order(&bk, 5, Some(&e)).is_err());
    let cm = EigenSummary { not_in_k: true, ..Default::default() };
    assert_eq!(classify_order(&bk, 8, Some(&cm)).unwrap().0, ClassLabel::CM);
    assert!(classify_order(&bk, 16, Some(&cm)).is_err());
}

#[test]
fn report_serializes() {
    let bk = backend(BackendKind::RationalDelta1, 2);
    let s = enumerate_stabilizer(&bk, &Vertex::from_digits(1, [])).unwrap();
    let json = serde_json::to_value(s.report(&bk)).unwrap();
    assert_eq!(json["order"], 4);
    assert_eq!(json["label"], "RationalAbelian");
    assert_eq!(json["dimV"], 2);
    assert_eq!(json["vertex"], "v(1;)");
}
