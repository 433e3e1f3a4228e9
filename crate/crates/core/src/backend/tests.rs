use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;

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

fn elliptic(q: usize) -> Backend {
    Backend::new(BackendConfig::default_for(BackendKind::EllipticDelta1, q).unwrap()).unwrap()
}

#[test]
fn local_parameter_has_valuation_one() {
    for bk in backends() {
        assert_eq!(bk.valuation(&bk.local_parameter()), Some(1), "{}", bk.describe());
    }
}

#[test]
fn rational_valuations() {
    let bk = rational(2);
    assert_eq!(bk.valuation(&bk.var()), Some(-1));
    assert_eq!(bk.valuation(&bk.inv(&bk.var()).unwrap()), Some(1));
    assert_eq!(bk.valuation(&KElement::zero()), None);
}

#[test]
fn elliptic_valuations_of_generators() {
    for q in [2, 3] {
        let bk = elliptic(q);
        let x = bk.var();
        let y = bk.y().unwrap();
        assert_eq!(bk.valuation(&x), Some(-2));
        assert_eq!(bk.valuation(&y), Some(-3));
        assert_eq!(bk.valuation(&bk.div(&x, &y).unwrap()), Some(1));
        // x³ − y² has the valuation of its Weierstrass remainder a1xy + a3y − a2x² − a4x − a6
        let x3 = bk.pow(&x, 3).unwrap();
        let y2 = bk.mul(&y, &y);
        let d = bk.sub(&x3, &y2);
        let [a1, a2, a3, a4, a6] = bk.weierstrass();
        let k = bk.field();
        let mut expect = None::<i64>;
        for (c, v) in [(a1, -5), (a3, -3), (a2, -4), (a4, -2), (a6, 0)] {
            if !c.is_zero() {
                expect = Some(expect.map_or(v, |e: i64| e.min(v)));
            }
        }
        let _ = k;
        assert_eq!(bk.valuation(&d), expect);
    }
}

#[test]
fn weierstrass_relation_holds_exactly() {
    for q in [2, 3] {
        let bk = elliptic(q);
        let x = bk.var();
        let y = bk.y().unwrap();
        let [a1, a2, a3, a4, a6] = bk.weierstrass().map(KElement::constant);
        let lhs = bk.add(&bk.add(&bk.mul(&y, &y), &bk.mul(&a1, &bk.mul(&x, &y))), &bk.mul(&a3, &y));
        let x2 = bk.mul(&x, &x);
        let rhs = [bk.mul(&x2, &x), bk.mul(&a2, &x2), bk.mul(&a4, &x), a6]
            .iter()
            .fold(KElement::zero(), |acc, t| bk.add(&acc, t));
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn field_axioms_in_k() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for bk in backends() {
        for _ in 0..20 {
            let a = bk.random_element(4, &mut rng);
            let b = bk.random_element(4, &mut rng);
            let ab = bk.mul(&a, &b);
            assert_eq!(bk.div(&ab, &b).unwrap(), a);
            assert_eq!(bk.mul(&a, &bk.inv(&a).unwrap()), KElement::one());
            assert_eq!(bk.sub(&bk.add(&a, &b), &b), a);
        }
    }
}

#[test]
fn valuation_is_a_valuation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for bk in backends() {
        for _ in 0..200 {
            let a = bk.random_element(3, &mut rng);
            let b = bk.random_element(3, &mut rng);
            let (va, vb) = (bk.valuation(&a).unwrap(), bk.valuation(&b).unwrap());
            assert_eq!(bk.valuation(&bk.mul(&a, &b)), Some(va + vb));
            assert!(bk.valuation_at_least(&bk.add(&a, &b), va.min(vb)));
        }
    }
}

#[test]
fn residue_representatives_are_distinct_units() {
    for bk in backends() {
        let reps = bk.residue_reps();
        assert_eq!(reps.len(), bk.q().pow(bk.delta()));
        assert!(reps[0].is_zero());
        for (i, r) in reps.iter().enumerate() {
            if i > 0 {
                assert_eq!(bk.valuation(r), Some(0));
            }
            for s in &reps[..i] {
                assert_eq!(bk.valuation(&bk.sub(r, s)), Some(0));
            }
        }
    }
}

#[test]
fn delta2_reps_over_f2() {
    let bk = Backend::new(BackendConfig::quadratic_place(2, 1, 1)).unwrap();
    let t = bk.var();
    let reps = bk.residue_reps();
    assert_eq!(reps[2], t);
    assert_eq!(reps[3], bk.add(&t, &KElement::one()));
}

#[test]
fn rr_dimensions_and_poles() {
    for bk in backends() {
        for n in -2..8 {
            let s = bk.rr_space(n);
            assert_eq!(s.dim(), bk.rr_dim(n), "{} n={n}", bk.describe());
            for (b, &pole) in s.basis.iter().zip(&s.poles) {
                assert!(bk.in_ring(b));
                assert_eq!(bk.valuation(b), Some(-pole));
                assert!(pole <= n);
            }
        }
    }
    let e = elliptic(3);
    assert_eq!(e.rr_space(1).dim(), 1);
    assert_eq!(e.rr_space(3).basis, vec![KElement::one(), e.var(), e.y().unwrap()]);
    assert_eq!(rational(2).rr_space(2).dim(), 3);
}

#[test]
fn elliptic_gap_at_one() {
    // no element of C(5) has valuation −1; exhaustive for q ≤ 3
    for q in [2, 3] {
        let bk = elliptic(q);
        let s = bk.rr_space(5);
        let sol = AffineSolutionAll::new(s.dim(), q);
        for coords in sol {
            let c = s.combine(&coords, &bk);
            assert_ne!(bk.valuation(&c), Some(-1));
        }
    }
}

/// Every vector of `F_q^dim`.
struct AffineSolutionAll {
    dim: usize,
    q: usize,
    next: usize,
}

impl AffineSolutionAll {
    fn new(dim: usize, q: usize) -> Self {
        AffineSolutionAll { dim, q, next: 0 }
    }
}

impl Iterator for AffineSolutionAll {
    type Item = Vec<Fe>;
    fn next(&mut self) -> Option<Vec<Fe>> {
        if self.next >= self.q.pow(self.dim as u32) {
            return None;
        }
        let mut i = self.next;
        self.next += 1;
        Some(
            (0..self.dim)
                .map(|_| {
                    let c = Fe((i % self.q) as u8);
                    i /= self.q;
                    c
                })
                .collect(),
        )
    }
}

#[test]
fn laurent_examples() {
    let bk = rational(2);
    let t = bk.var();
    let e = bk.laurent(&t, 3);
    assert_eq!(e.terms, vec![(-1, 1)]);
    let one = KElement::one();
    let g = bk.inv(&bk.sub(&one, &t)).unwrap();
    let e = bk.laurent(&g, 4);
    assert_eq!(e.terms, vec![(1, 1), (2, 1), (3, 1)]);
    let bk = elliptic(3);
    let x = bk.var();
    let e = bk.laurent(&x, 4);
    assert_eq!(e.valuation, Some(-2));
    assert_eq!(e.terms[0], (-2, 1));
    let back = bk.digits_element(&e.terms);
    assert!(bk.valuation_at_least(&bk.sub(&x, &back), 4));
}

#[test]
fn laurent_resums_and_matches_exact_digits() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for bk in backends() {
        for _ in 0..100 {
            let z = bk.random_element(3, &mut rng);
            let prec = 5;
            let e = bk.laurent(&z, prec);
            let back = bk.digits_element(&e.terms);
            assert!(bk.valuation_at_least(&bk.sub(&z, &back), prec), "{}", bk.describe());
            assert_eq!(bk.laurent_exact(&z, prec).unwrap(), e);
        }
    }
}

#[test]
fn series_is_a_ring_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for bk in backends() {
        let kinf = bk.residue_field();
        for _ in 0..50 {
            let a = bk.random_element(3, &mut rng);
            let b = bk.random_element(3, &mut rng);
            let prec = 8;
            let sa = bk.series(&a, prec + 10);
            let sb = bk.series(&b, prec + 10);
            assert!(bk.series(&bk.mul(&a, &b), prec).agrees_below(&sa.mul(&sb, kinf), prec));
            assert!(bk.series(&bk.add(&a, &b), prec).agrees_below(&sa.add(&sb, kinf), prec));
            // the leading coefficient agrees with the exact residue computation
            let v = bk.valuation(&a).unwrap();
            assert_eq!(sa.valuation(), Some(v));
            assert_eq!(sa.leading_coefficient(), bk.leading_coefficient(&a).unwrap());
        }
    }
}

#[test]
fn generator_series_satisfy_their_equations() {
    for bk in backends() {
        let kinf = bk.residue_field();
        let prec = 20;
        match bk.kind() {
            BackendKind::EllipticDelta1 => {
                let x = bk.series(&bk.var(), prec);
                let y = bk.series(&bk.y().unwrap(), prec);
                let [a1, a2, a3, a4, a6] = bk.weierstrass();
                let m = |c: Fe| LaurentSeries::monomial(c, 0);
                let lhs = y.mul(&y, kinf).add(&x.mul(&y, kinf).mul(&m(a1), kinf), kinf).add(&y.mul(&m(a3), kinf), kinf);
                let x2 = x.mul(&x, kinf);
                let rhs = x2
                    .mul(&x, kinf)
                    .add(&x2.mul(&m(a2), kinf), kinf)
                    .add(&x.mul(&m(a4), kinf), kinf)
                    .add(&m(a6), kinf);
                let p = lhs.precision().min(rhs.precision());
                assert!(p >= prec - 6);
                assert!(lhs.agrees_below(&rhs, p));
                // π = x/y
                let pi = x.mul(&y.inv(prec, kinf), kinf);
                assert!(pi.agrees_below(&LaurentSeries::monomial(Fe::ONE, 1), pi.precision()));
            }
            BackendKind::RationalDelta2 => {
                // p(t) = π t²
                let t = bk.series(&bk.var(), prec);
                let p = bk.quadratic();
                let pt = t.mul(&t, kinf).add(&t.scale(p.coeff(1), kinf), kinf).add(&LaurentSeries::monomial(p.coeff(0), 0), kinf);
                let rhs = t.mul(&t, kinf).shift(1);
                assert!(pt.agrees_below(&rhs, prec));
            }
            BackendKind::RationalDelta1 => {
                assert!(bk.series(&bk.var(), prec).agrees_below(&LaurentSeries::monomial(Fe::ONE, -1), prec));
            }
        }
    }
}

#[test]
fn solve_congruence_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for bk in backends().into_iter().filter(|b| b.q() == 2) {
        for n in 0..=3 {
            let space = bk.rr_space(n);
            let all: Vec<KElement> =
                AffineSolutionAll::new(space.dim(), 2).map(|c| space.combine(&c, &bk)).collect();
            for _ in 0..4 {
                let target = bk.random_element(2, &mut rng);
                for r in -3..=2 {
                    let sol = bk.solve_congruence(&target, r, n);
                    let mut got = sol.elements(&bk);
                    let mut brute: Vec<KElement> = all
                        .iter()
                        .filter(|a| bk.valuation_at_least(&bk.sub(a, &target), r))
                        .cloned()
                        .collect();
                    got.sort();
                    brute.sort();
                    assert_eq!(got, brute, "{} n={n} r={r}", bk.describe());
                }
            }
        }
    }
}

#[test]
fn congruence_examples() {
    for bk in backends() {
        // C ∩ m = 0 and C ∩ O = k
        let zero = bk.solve_congruence(&KElement::zero(), 1, 4);
        assert_eq!(zero.count(bk.q()), 1);
        let target = bk.random_rr_element(3, &mut ChaCha8Rng::seed_from_u64(6));
        let sol = bk.solve_congruence(&target, 0, 4);
        assert_eq!(sol.count(bk.q()), bk.q() as u128);
    }
}

#[test]
fn singular_curve_is_rejected() {
    assert!(Backend::new(BackendConfig::elliptic(3, [0, 0, 0, 0, 0])).is_err());
    assert!(Backend::new(BackendConfig::elliptic(2, [0, 0, 0, 0, 1])).is_err());
}

#[test]
fn point_counts_of_default_curves() {
    // y² + y = x³ over F_2: (0,0), (0,1), ∞
    assert_eq!(elliptic(2).count_points(), 3);
    // y² = x³ − x + 1 over F_3: x ∈ {0,1,2} all give x³ − x + 1 = 1, two roots each
    assert_eq!(elliptic(3).count_points(), 7);
}
