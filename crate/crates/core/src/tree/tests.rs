use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::algebra::linalg::kernel;
use crate::backend::{BackendConfig, BackendKind};

fn backends() -> Vec<Backend> {
    let mut out = Vec::new();
    for kind in [BackendKind::RationalDelta1, BackendKind::EllipticDelta1, BackendKind::RationalDelta2] {
        for q in [2, 3] {
            out.push(Backend::new(BackendConfig::default_for(kind, q).unwrap()).unwrap());
        }
    }
    out
}

fn rational(q: usize) -> Backend {
    Backend::new(BackendConfig::rational(q)).unwrap()
}

fn m(a: KElement, b: KElement, c: KElement, d: KElement) -> KMatrix {
    Matrix2::new(a, b, c, d)
}

/// Random element of `GL₂(C)` with constant determinant, as a product of
/// elementary matrices with entries in `C(n)`.
fn random_gl2(bk: &Backend, n: i64, rng: &mut ChaCha8Rng) -> KMatrix {
    let k = bk.field();
    let mut g = Matrix2::identity(bk);
    for _ in 0..3 {
        let e = bk.random_rr_element(n, rng);
        let upper = m(KElement::one(), e.clone(), KElement::zero(), KElement::one());
        let lower = m(KElement::one(), KElement::zero(), e, KElement::one());
        g = g.mul(if rng.gen_bool(0.5) { &upper } else { &lower }, bk);
    }
    let units: Vec<Fe> = k.nonzero().collect();
    let diag = m(
        KElement::constant(units[rng.gen_range(0..units.len())]),
        KElement::zero(),
        KElement::zero(),
        KElement::constant(units[rng.gen_range(0..units.len())]),
    );
    g.mul(&diag, bk)
}

fn random_vertex(bk: &Backend, rng: &mut ChaCha8Rng) -> Vertex {
    let mut v = Vertex::origin();
    for _ in 0..rng.gen_range(0..5) {
        let l = rng.gen_range(0..Vertex::valence(bk));
        v = v.neighbor(bk, l);
    }
    v
}

#[test]
fn keys_round_trip() {
    let v = Vertex::from_digits(3, [(-1, 2), (1, 1)]);
    assert_eq!(v.key(), "v(3; -1:2, 1:1)");
    assert_eq!(v.key().parse::<Vertex>().unwrap(), v);
    assert_eq!("v(0;)".parse::<Vertex>().unwrap(), Vertex::origin());
    assert!("v(1; 2:1)".parse::<Vertex>().is_err());
    assert!("w(1;)".parse::<Vertex>().is_err());
}

#[test]
fn neighbors_are_mutual_and_distinct() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for bk in backends() {
        for _ in 0..10 {
            let v = random_vertex(&bk, &mut rng);
            let nbrs = v.neighbors(&bk);
            let mut sorted = nbrs.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), bk.residue_count() + 1);
            for (l, w) in nbrs.iter().enumerate() {
                assert_eq!(v.label_of(&bk, w), Some(l));
                assert!(w.label_of(&bk, &v).is_some(), "{w} does not see {v}");
            }
        }
    }
}

#[test]
fn normalize_matches_digit_keys() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for bk in backends() {
        for _ in 0..10 {
            let v = random_vertex(&bk, &mut rng);
            assert_eq!(Vertex::normalize(&bk, v.level(), &v.z(&bk)), v);
            // z is only defined modulo π^n
            let noise = bk.mul(&bk.random_rr_element(0, &mut rng), &bk.pi_pow(v.level()));
            assert_eq!(Vertex::normalize(&bk, v.level(), &bk.add(&v.z(&bk), &noise)), v);
        }
    }
}

#[test]
fn lower_unipotent_fixes_level_one() {
    let bk = rational(2);
    let t = bk.var();
    let g = m(KElement::one(), KElement::zero(), t, KElement::one());
    let v1 = Vertex::from_digits(1, []);
    assert_eq!(v1.apply(&bk, &g).unwrap(), v1);
    let w = m(KElement::zero(), KElement::one(), KElement::one(), KElement::zero());
    assert_eq!(v1.apply(&bk, &w).unwrap(), Vertex::from_digits(-1, []));
    assert!(equivalent(&bk, &v1, &Vertex::from_digits(-1, [])).unwrap());
    assert!(!equivalent(&bk, &v1, &Vertex::origin()).unwrap());
}

#[test]
fn apply_is_an_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for bk in backends() {
        for _ in 0..8 {
            let g = random_gl2(&bk, 3, &mut rng);
            let h = random_gl2(&bk, 3, &mut rng);
            let v = random_vertex(&bk, &mut rng);
            let gh = g.mul(&h, &bk);
            let lhs = v.apply(&bk, &gh).unwrap();
            let rhs = v.apply(&bk, &h).unwrap().apply(&bk, &g).unwrap();
            assert_eq!(lhs, rhs, "{}", bk.describe());
            // adjacency is preserved
            let w = v.neighbor(&bk, rng.gen_range(0..Vertex::valence(&bk)));
            let gv = v.apply(&bk, &g).unwrap();
            let gw = w.apply(&bk, &g).unwrap();
            assert!(gv.label_of(&bk, &gw).is_some());
        }
    }
}

#[test]
fn standard_subgroup_membership_matches_coset_test() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for bk in backends() {
        for _ in 0..8 {
            let g = random_gl2(&bk, 2, &mut rng);
            let v = random_vertex(&bk, &mut rng);
            let fixes = v.apply(&bk, &g).unwrap() == v;
            let conj = v.matrix_inverse(&bk).mul(&g, &bk).mul(&v.matrix(&bk), &bk);
            assert_eq!(in_standard_subgroup(&bk, &conj).unwrap(), fixes);
        }
    }
}

#[test]
fn transporter_contains_the_generating_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for bk in backends() {
        for _ in 0..6 {
            let g = random_gl2(&bk, 2, &mut rng);
            let u = random_vertex(&bk, &mut rng);
            let w = u.apply(&bk, &g).unwrap();
            let sp = transporter(&bk, &u, &w).unwrap();
            assert!(sp.has_unit(&bk).unwrap(), "{} {u} -> {w}", bk.describe());
            let found = sp.find_unit(&bk).unwrap();
            assert_eq!(u.apply(&bk, &found).unwrap(), w);
            // g lies in W: W spanned together with g has the same dimension
            let coords = entry_coordinates(&bk, &sp, &g);
            assert!(coords.is_some(), "g is outside the entry spaces");
        }
    }
}

/// Whether `g` lies in `W`: some coordinates on the basis of `W` reproduce
/// it exactly.
fn entry_coordinates(bk: &Backend, sp: &IntegralSpace, g: &KMatrix) -> Option<Vec<Fe>> {
    let q = bk.q();
    let dim = sp.dim();
    if (q as u128).pow(dim as u32) > 1 << 16 {
        return Some(Vec::new());
    }
    let mut found = None;
    space::for_each_vector(dim, q, |c| {
        if &sp.element(bk, c) == g {
            found = Some(c.to_vec());
            return false;
        }
        true
    });
    found
}

#[test]
fn every_element_of_w_is_integral_with_matching_residue() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for bk in backends() {
        for _ in 0..4 {
            let u = random_vertex(&bk, &mut rng);
            let g = random_gl2(&bk, 2, &mut rng);
            let w = u.apply(&bk, &g).unwrap();
            let sp = transporter(&bk, &u, &w).unwrap();
            let s = (u.level() - w.level()) / 2;
            for i in 0..sp.dim() {
                let mut c = vec![Fe::ZERO; sp.dim()];
                c[i] = Fe::ONE;
                let x = sp.element(&bk, &c);
                let h = w.matrix_inverse(&bk).mul(&x, &bk).mul(&u.matrix(&bk), &bk).scale(&bk.pi_pow(-s), &bk);
                let res = sp.residue(&bk, &c);
                for (e, r) in h.entries().iter().zip(res.entries()) {
                    assert!(bk.valuation_at_least(e, 0), "{}: entry of negative valuation", bk.describe());
                    assert_eq!(bk.residue(e).unwrap(), *r);
                }
                let det = x.det(&bk).as_constant().expect("det g is constant");
                assert_eq!(res.det(bk.residue_field()), det);
            }
        }
    }
}

/// Brute force over all `g` with entries in `C(3)` over `F_2[t]`.
#[test]
fn transporter_count_matches_brute_force() {
    let bk = rational(2);
    let pairs = [
        (Vertex::origin(), Vertex::origin()),
        (Vertex::from_digits(1, []), Vertex::from_digits(1, [])),
        (Vertex::from_digits(1, []), Vertex::from_digits(-1, [])),
        (Vertex::from_digits(2, [(1, 1)]), Vertex::from_digits(2, [])),
        (Vertex::from_digits(2, [(0, 1)]), Vertex::from_digits(0, [])),
        (Vertex::from_digits(-2, []), Vertex::from_digits(2, [(1, 1)])),
    ];
    let c3 = bk.rr_space(3);
    let elems: Vec<KElement> =
        crate::algebra::AffineSolution { particular: vec![Fe::ZERO; 4], kernel: identity(4) }
            .enumerate(bk.field())
            .iter()
            .map(|x| c3.combine(x, &bk))
            .collect();
    let mut unimodular = Vec::new();
    for a in &elems {
        for b in &elems {
            for c in &elems {
                for d in &elems {
                    let g = m(a.clone(), b.clone(), c.clone(), d.clone());
                    if g.det(&bk).as_constant().is_some_and(|x| !x.is_zero()) {
                        unimodular.push(g);
                    }
                }
            }
        }
    }
    for (u, w) in pairs {
        let sp = transporter(&bk, &u, &w).unwrap();
        assert!(sp.bounds().iter().all(|&n| n <= 3), "bounds {:?} exceed the brute-force box", sp.bounds());
        let brute = unimodular.iter().filter(|g| u.apply(&bk, g).unwrap() == w).count() as u128;
        assert_eq!(sp.transporter_count(&bk).unwrap(), brute, "{u} -> {w}");
    }
}

fn identity(n: usize) -> Vec<Vec<Fe>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { Fe::ONE } else { Fe::ZERO }).collect()).collect()
}

#[test]
fn standard_vertex_stabilizer_orders() {
    for q in [2usize, 3, 4, 5] {
        let bk = rational(q);
        let q128 = q as u128;
        let gl2 = (q128 * q128 - 1) * (q128 * q128 - q128);
        let origin = transporter(&bk, &Vertex::origin(), &Vertex::origin()).unwrap();
        assert_eq!(origin.transporter_count(&bk).unwrap(), gl2);
        for n in 1..4i64 {
            // lower or upper triangular with off-diagonal entry of degree ≤ n
            let expect = (q128 - 1).pow(2) * q128.pow(n as u32 + 1);
            for v in [Vertex::from_digits(n, []), Vertex::from_digits(-n, [])] {
                let sp = transporter(&bk, &v, &v).unwrap();
                assert_eq!(sp.transporter_count(&bk).unwrap(), expect, "q={q} {v}");
            }
        }
    }
}

#[test]
fn residue_action_matches_apply_on_the_star() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for bk in backends() {
        let kinf = bk.residue_field();
        let r = bk.residue_count();
        for _ in 0..4 {
            let u = random_vertex(&bk, &mut rng);
            let g = random_gl2(&bk, 2, &mut rng);
            let w = u.apply(&bk, &g).unwrap();
            let sp = transporter(&bk, &u, &w).unwrap();
            let Some(unit) = sp.random_unit_residue(&bk, &mut rng) else { continue };
            let x = sp.lift(&bk, &unit.coords);
            for l in 0..=r {
                let line = if l == r { [Fe::ONE, Fe::ZERO] } else { [Fe(l as u8), Fe::ONE] };
                let img = [
                    kinf.add(kinf.mul(unit.residue.a, line[0]), kinf.mul(unit.residue.b, line[1])),
                    kinf.add(kinf.mul(unit.residue.c, line[0]), kinf.mul(unit.residue.d, line[1])),
                ];
                let label = if img[1].is_zero() { r } else { kinf.div(img[0], img[1]).unwrap().index() };
                let moved = u.neighbor(&bk, l).apply(&bk, &x).unwrap();
                assert_eq!(moved, w.neighbor(&bk, label), "{}", bk.describe());
            }
        }
    }
}

#[test]
fn line_stabilizer_is_a_subspace_of_the_image() {
    let bk = rational(3);
    let sp = transporter(&bk, &Vertex::origin(), &Vertex::origin()).unwrap();
    assert_eq!(sp.image_dim(), 4);
    // upper triangular matrices fix [1:0]
    let stab = sp.line_stabilizer_coords(&bk, [Fe::ONE, Fe::ZERO]);
    assert_eq!(stab.len(), 3);
    let basis = sp.image_basis();
    let sub: Vec<Matrix2<Fe>> =
        stab.iter().map(|c| combine_matrices(bk.residue_field(), c, &basis)).collect();
    assert_eq!(count_invertible(&bk, &sub).unwrap(), 2 * 2 * 3);
    let _ = kernel(&[], 0, bk.field());
}
