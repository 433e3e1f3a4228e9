//! Seeded property suites over one backend. Each check reports the number
//! of cases it examined and the first counterexample, if any.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{eigen_class, solve_linear, EigenClass, Fe, FiniteField, Matrix2};
use crate::backend::{Backend, BackendKind, KElement};
use crate::error::{Error, Result};
use crate::quotient::{bfs_quotient, free_product_report, star_orbits, takahashi};
use crate::stabilizer::{
    edge_stabilizer, edge_stabilizer_order_joint, enumerate_stabilizer, is_in_stabilizer, span_i, ClassLabel,
    StabGroup,
};
use crate::tree::{equivalent, in_standard_subgroup, transporter, Edge, KMatrix, Vertex};

/// A group of checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Backend,
    Tree,
    Stabilizer,
    Quotient,
    All,
}

impl Suite {
    pub const PARTS: [Suite; 5] = [Suite::Algebra, Suite::Backend, Suite::Tree, Suite::Stabilizer, Suite::Quotient];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Backend => "backend",
            Suite::Tree => "tree",
            Suite::Stabilizer => "stabilizer",
            Suite::Quotient => "quotient",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::All].into_iter().chain(Suite::PARTS).find(|x| x.name() == s).ok_or_else(|| {
            Error::Config(format!("unknown suite {s:?}; expected algebra, backend, tree, stabilizer, quotient or all"))
        })
    }
}

/// The outcome of one check.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: &'static str,
    pub cases: u64,
    /// The first counterexample; `None` on a pass.
    pub failure: Option<String>,
}

/// The outcome of a suite run.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub backend: String,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failure.is_none())
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.failure.is_some())
    }
}

/// Number of random `(M, v)` pairs for the membership cross-check.
pub const MEMBERSHIP_PAIRS: u64 = 10_000;
/// Number of vertices on which the transporter is compared with the
/// stabilizer.
pub const TRANSPORTER_VERTICES: usize = 20;

type Outcome = Result<u64>;

fn fail(name: &'static str, detail: impl Into<String>) -> Error {
    Error::violation(name, detail)
}

/// Runs `suite` on `bk` with all randomness drawn from `seed`.
pub fn run_suite(bk: &Backend, suite: Suite, seed: u64) -> VerifyReport {
    let parts: Vec<Suite> = if suite == Suite::All { Suite::PARTS.to_vec() } else { vec![suite] };
    let mut checks = Vec::new();
    for part in parts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (part as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        for (name, f) in suite_checks(part) {
            let outcome = f(bk, &mut rng);
            let (cases, failure) = match outcome {
                Ok(n) => (n, None),
                Err(e) => (0, Some(e.to_string())),
            };
            checks.push(Check { suite: part, name, cases, failure });
        }
    }
    VerifyReport { suite, backend: bk.describe(), seed, checks }
}

type CheckFn = fn(&Backend, &mut ChaCha8Rng) -> Outcome;

fn suite_checks(s: Suite) -> Vec<(&'static str, CheckFn)> {
    match s {
        Suite::Algebra => vec![
            ("unit powers", check_unit_powers as CheckFn),
            ("characteristic polynomial under conjugation", check_char_poly_conjugation),
            ("linear solutions by substitution", check_solve_linear),
        ],
        Suite::Backend => vec![
            ("valuation axioms", check_valuation_axioms as CheckFn),
            ("local parameter and residue representatives", check_parameter_and_reps),
            ("Riemann-Roch bases", check_rr_bases),
            ("Weierstrass gap at one", check_weierstrass_gap),
            ("digit expansion re-sums", check_laurent_resum),
            ("congruence solving against enumeration", check_congruence_oracle),
        ],
        Suite::Tree => vec![
            ("apply is an action", check_action as CheckFn),
            ("apply preserves adjacency", check_adjacency),
            ("equivalence is symmetric and preserves orders", check_equivalence),
            ("standard subgroup is stable under integral units", check_standard_subgroup),
            ("membership routes agree", check_membership_routes),
            ("transporter reproduces the stabilizer", check_transporter_vs_stabilizer),
        ],
        Suite::Stabilizer => vec![
            ("trace and determinant in k", check_trace_det as CheckFn),
            ("closure under linear combination", check_linear_closure),
            ("I(M) meets a stabilizer in Z or I(M)", check_span_intersection),
            ("level-zero stabilizers", check_level_zero),
            ("group axioms", check_group_axioms),
            ("triangular stabilizers grow outward", check_monotonicity),
            ("classification recomputed from order", check_classification),
            ("edge stabilizer routes agree", check_edge_routes),
            ("Takahashi vertices follow root counts", check_takahashi),
        ],
        Suite::Quotient => vec![
            ("quotient builds under every valency and edge law", check_quotient_build as CheckFn),
            ("orbit counting on stars", check_orbit_counting),
            ("neighbour test by congruence", check_neighbor_congruence),
            ("quotient vertices are inequivalent", check_inequivalent),
            ("rays match the class number", check_rays),
            ("free-product report", check_free_product),
        ],
        Suite::All => Vec::new(),
    }
}

/// `v(0, 0)` moved by a random walk of at most `steps` edges.
pub fn random_vertex<R: Rng + ?Sized>(bk: &Backend, rng: &mut R, steps: usize) -> Vertex {
    let mut v = Vertex::origin();
    for _ in 0..rng.gen_range(0..=steps) {
        v = v.neighbor(bk, rng.gen_range(0..Vertex::valence(bk)));
    }
    v
}

/// A random element of `GL₂(C)` with determinant in `k*`: three random
/// elementary factors with entries in `C(n)` and a diagonal unit.
pub fn random_gl2<R: Rng + ?Sized>(bk: &Backend, n: i64, rng: &mut R) -> KMatrix {
    let k = bk.field();
    let mut g = Matrix2::identity(bk);
    for _ in 0..3 {
        let e = bk.random_rr_element(n, rng);
        let f = if rng.gen_bool(0.5) {
            Matrix2::new(KElement::one(), e, KElement::zero(), KElement::one())
        } else {
            Matrix2::new(KElement::one(), KElement::zero(), e, KElement::one())
        };
        g = g.mul(&f, bk);
    }
    let units: Vec<Fe> = k.nonzero().collect();
    let mut pick = || KElement::constant(units[rng.gen_range(0..units.len())]);
    let diag = Matrix2::new(pick(), KElement::zero(), KElement::zero(), pick());
    g.mul(&diag, bk)
}

fn random_fe<R: Rng + ?Sized>(k: &FiniteField, rng: &mut R) -> Fe {
    Fe(rng.gen_range(0..k.order()) as u8)
}

fn inverse_k(bk: &Backend, g: &KMatrix) -> Result<KMatrix> {
    let det = g.det(bk);
    Ok(g.adjugate(bk).scale(&bk.inv(&det)?, bk))
}

fn sample_stabilizers(bk: &Backend, rng: &mut ChaCha8Rng, count: usize, steps: usize) -> Result<Vec<StabGroup>> {
    (0..count).map(|_| enumerate_stabilizer(bk, &random_vertex(bk, rng, steps))).collect()
}

fn default_radius(bk: &Backend) -> usize {
    2 * bk.genus() as usize + 6
}

// algebra

fn check_unit_powers(bk: &Backend, _: &mut ChaCha8Rng) -> Outcome {
    let mut n = 0;
    for f in [bk.field(), bk.residue_field()] {
        for x in f.nonzero() {
            n += 1;
            if f.pow(x, f.order() as u64 - 1) != Fe::ONE {
                return Err(fail("unit powers", format!("{x}^(q-1) != 1 in F_{}", f.order())));
            }
        }
    }
    Ok(n)
}

fn random_matrix(k: &FiniteField, rng: &mut ChaCha8Rng) -> Matrix2<Fe> {
    Matrix2::new(random_fe(k, rng), random_fe(k, rng), random_fe(k, rng), random_fe(k, rng))
}

fn check_char_poly_conjugation(bk: &Backend, rng: &mut ChaCha8Rng) -> Outcome {
    let mut n = 0;
    for k in [bk.field(), bk.residue_field()] {
        for _ in 0..100 {
            let m = random_matrix(k, rng);
            let g = random_matrix(k, rng);
            let Ok(gi) = g.inverse(k) else { continue };
            n += 1;
            let c = g.mul(&m, k).mul(&gi, k);
            if c.char_poly(k) != m.char_poly(k) {
                return Err(fail("characteristic polynomial", format!("{m:?} conjugated by {g:?}")));
            }
        }
    }
    Ok(n)
}

fn check_solve_linear(bk: &Backend, rng: &mut ChaCha8Rng) -> Outcome {
    let k = bk.field();
    let dot = |row: &[Fe], x: &[Fe]| row.iter().zip(x).fold(Fe::ZERO, |acc, (&a, &b)| k.add(acc, k.mul(a, b)));
    for _ in 0..100 {
        let rows = rng.gen_range(1..5);
        let cols = rng.gen_range(1..5);
        let a: Vec<Vec<Fe>> = (0..rows).map(|_| (0..cols).map(|_| random_fe(k, rng)).collect()).collect();
        // half the systems are consistent by construction
        let b: Vec<Fe> = if rng.gen_bool(0.5) {
            let x: Vec<Fe> = (0..cols).map(|_| random_fe(k, rng)).collect();
            a.iter().map(|r| dot(r, &x)).collect()
        } else {
            (0..rows).map(|_| random_fe(k, rng)).collect()
        };
        match solve_linear(&a, &b, cols, k) {
            Some(sol) => {
                if a.iter().zip(&b).any(|(r, &bi)| dot(r, &sol.particular) != bi) {
                    return Err(fail("linear solutions", "particular solution does not satisfy the system"));
                }
                if sol.kernel.iter().any(|v| a.iter().any(|r| !dot(r, v).is_zero())) {
                    return Err(fail("linear solutions", "kernel vector is not in the null space"));
                }
            }
            None => {
                // no solution: brute force must agree when small
                if k.order().pow(cols as u32) <= 4096 {
                    let mut found = false;
                    for idx in 0..k.order().pow(cols as u32) {
                        let mut i = idx;
                        let x: Vec<Fe> = (0..cols)
                            .map(|_| {
                                let c = Fe((i % k.order()) as u8);
                                i /= k.order();
                                c
                            })
                            .collect();
                        if a.iter().zip(&b).all(|(r, &bi)| dot(r, &x) == bi) {
                            found = true;
                            break;
                        }
                    }
                    if found {
                        return Err(fail("linear solutions", "reported inconsistent but a solution exists"));
                    }
                }
            }
        }
    }
    Ok(100)
}

// backend

fn check_valuation_axioms(bk: &Backend, rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..200 {
        let a = bk.random_element(3, rng);
        let b = bk.random_element(3, rng);
        let (va, vb) = (bk.valuation(&a).unwrap(), bk.valuation(&b).unwrap());
        if bk.valuation(&bk.mul(&a, &b)) != Some(va + vb) {
            return Err(fail("valuation axioms", format!("ν(ab) != ν(a)+ν(b) for {}, {}", bk.format_element(&a), bk.format_element(&b))));
        }
        if let Some(vs) = bk.valuation(&bk.add(&a, &b)) {
            if vs < va.min(vb) {
                return Err(fail("valuation axioms", "ultrametric inequality fails"));
            }
        }
    }
    Ok(200)
}

fn check_parameter_and_reps(bk: &Backend, _: &mut ChaCha8Rng) -> Outcome {
    if bk.valuation(&bk.local_parameter()) != Some(1) {
        return Err(fail("local parameter", "ν(π) != 1"));
    }
    let reps = bk.residue_reps();
    if reps.len() != bk.residue_count() || !reps[0].is_zero() {
        return Err(fail("residue representatives", "wrong count or first representative is not 0"));
    }
    for (i, r) in reps.iter().enumerate().skip(1) {
        if bk.valuation(r) != Some(0) {
            return Err(fail("residue representatives", format!("representative {i} is not a unit")));
        }
        for s in &reps[..i] {
            if bk.valuation_at_least(&bk.sub(r, s), 1) {
                return Err(fail("residue representatives", "two representatives share a residue"));
            }
        }
    }
    Ok(reps.len() as u64)
}

fn check_rr_bases(bk: &Backend, _: &mut ChaCha8Rng) -> Outcome {
    let mut n_cases = 0;
    for n in 0..=6 {
        let space = bk.rr_space(n);
        let mut leading = HashSet::new();
        for (c, &pole) in space.basis.iter().zip(&space.poles) {
            n_cases += 1;
            let v = bk.valuation(c);
            if !bk.in_ring(c) || v.is_none_or(|v| v < -n) || v != Some(-pole) {
                return Err(fail("Riemann-Roch bases", format!("basis element {} of C({n})", bk.format_element(c))));
            }
            if bk.delta() == 1 && !leading.insert(pole) {
                return Err(fail("Riemann-Roch bases", format!("repeated pole order {pole} in C({n})")));
            }
        }
        if space.dim() != bk.rr_dim(n) {
            return Err(fail("Riemann-Roch bases", format!("dim C({n}) mismatch")));
        }
    }
    Ok(n_cases)
}

fn for_each_coords(dim: usize, q: usize, mut f: impl FnMut(&[Fe]) -> Result<()>) -> Result<u64> {
    let total = q.pow(dim as u32);
    let mut c = vec![Fe::ZERO; dim];
    for idx in 0..total {
        let mut i = idx;
        for x in c.iter_mut() {
            *x = Fe((i % q) as u8);
            i /= q;
        }
        f(&c)?;
    }
    Ok(total as u64)
}

fn check_weierstrass_gap(bk: &Backend, _: &mut ChaCha8Rng) -> Outcome {
    if bk.kind() != BackendKind::EllipticDelta1 {
        return Ok(0);
    }
    let space = bk.rr_space(5);
    for_each_coords(space.dim(), bk.q(), |c| {
        let e = space.combine(c, bk);
        if bk.valuation(&e) == Some(-1) {
            return Err(fail("Weierstrass gap", format!("{} has a simple pole", bk.format_element(&e))));
        }
        Ok(())
    })
}

fn check_laurent_resum(bk: &Backend, rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..100 {
        let z = bk.random_element(3, rng);
        let prec = rng.gen_range(-2..8);
        let exp = bk.laurent(&z, prec);
        let sum = bk.digits_element(&exp.terms);
        let diff = bk.sub(&z, &sum);
        if !bk.valuation_at_least(&diff, prec) {
            return Err(fail("digit expansion", format!("{} to precision {prec}", bk.format_element(&z))));
        }
        if bk.laurent_exact(&z, prec)? != exp {
            return Err(fail("digit expansion", "series and exact digits differ"));
        }
    }
    Ok(100)
}

fn check_congruence_oracle(bk: &Backend, rng: &mut ChaCha8Rng) -> Outcome {
    if bk.q() != 2 {
        return Ok(0);
    }
    let mut cases = 0;
    for n in 0..=3 {
        let space = bk.rr_space(n);
        let mut all = Vec::new();
        for_each_coords(space.dim(), 2, |c| {
            all.push(space.combine(c, bk));
            Ok(())
        })?;
        for _ in 0..3 {
            let target = bk.random_element(2, rng);
            for r in -3..=2 {
                cases += 1;
                let mut got = bk.solve_congruence(&target, r, n).elements(bk);
                let mut brute: Vec<KElement> =
                    all.iter().filter(|a| bk.valuation_at_least(&bk.sub(a, &target), r)).cloned().collect();
                got.sort();
                brute.sort();
                if got != brute {
                    return Err(fail("congruence solving", format!("n={n} r={r}: {} vs {}", got.len(), brute.len())));
                }
            }
        }
    }
    Ok(cases)
}

// tree

fn check_action(bk: &Backend, rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..100 {
        let g1 = random_gl2(bk, 2, rng);
        let g2 = random_gl2(bk, 2, rng);
        let v = random_vertex(bk, rng, 4);
        let lhs = v.apply(bk, &g1.mul(&g2, bk))?;
        let rhs = v.apply(bk, &g2)?.apply(bk, &g1)?;
        if lhs != rhs {
            return Err(fail("apply is an action", format!("{lhs} != {rhs} at {v}")));
        }
    }
    Ok(100)
}

fn check_adjacency(bk: &Backend, rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..50 {
        let g = random_gl2(bk, 2, rng);
        let v = random_vertex(bk, rng, 4);
        let gv = v.apply(bk, &g)?;
        let moved: HashSet<Vertex> = v.neighbors(bk).iter().map(|w| w.apply(bk, &g)).collect::<Result<_>>()?;
        let direct: HashSet<Vertex> = gv.neighbors(bk).into_iter().collect();
        if moved != direct {
            return Err(fail("apply preserves adjacency", format!("star of {v}")));
        }
    }
    Ok(50)
}

fn check_equivalence(bk: &Backend, rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..20 {
        let u = random_vertex(bk, rng, 4);
        let w = u.apply(bk, &random_gl2(bk, 2, rng))?;
        if !equivalent(bk, &u, &u)? || !equivalent(bk, &u, &w)? || !equivalent(bk, &w, &u)? {
            return Err(fail("equivalence", format!("{u} and {w}")));
        }
        let (su, sw) = (enumerate_stabilizer(bk, &u)?, enumerate_stabilizer(bk, &w)?);
        if su.order != sw.order || su.label != sw.label {
            return Err(fail("equivalence", format!("{u} and {w} have different stabilizers")));
        }
        let x = random_vertex(bk, rng, 4);
        if equivalent(bk, &u, &x)? != equivalent(bk, &x, &u)? {
            return Err(fail("equivalence", format!("asymmetric on {u}, {x}")));
        }
    }
    Ok(20)
}

/// A random element of `GL₂(O∞)` built from `ℛ` and `π`.
fn random_integral_unit(bk: &Backend, rng: &mut ChaCha8Rng) -> KMatrix {
    let reps = bk.residue_reps();
    let pi = bk.local_parameter();
    let mut g = Matrix2::identity(bk);
    for _ in 0..3 {
        let r = reps[rng.gen_range(0..reps.len())].clone();
        let r = if rng.gen_bool(0.5) { bk.add(&r, &bk.mul(&pi, &reps[rng.gen_range(0..reps.len())])) } else { r };
        let f = if rng.gen_bool(0.5) {
            Matrix2::new(KElement::one(), r, KElement::zero(), KElement::one())
        } else {
            Matrix2::new(KElement::one(), KElement::zero(), r, KElement::one())
        };
        g = g.mul(&f, bk);
    }
    g
}

fn check_standard_subgroup(bk: &Backend, rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..100 {
        let v = random_vertex(bk, rng, 3);
        let g = random_gl2(bk, 2, rng);
        let h = v.matrix_inverse(bk).mul(&g, bk).mul(&v.matrix(bk), bk);
        let k = random_integral_unit(bk, rng);
        let a = in_standard_subgroup(bk, &h)?;
        if a != in_standard_subgroup(bk, &h.mul(&k, bk))? || a != in_standard_subgroup(bk, &k.mul(&h, bk))? {
            return Err(fail("standard subgroup", "membership changed under an integral unit"));
        }
        if !in_standard_subgroup(bk, &k)? {
            return Err(fail("standard subgroup", "integral unit not in the subgroup"));
        }
    }
    Ok(100)
}

fn check_membership_routes(bk: &Backend, rng: &mut ChaCha8Rng) -> Outcome {
    let stabs = sample_stabilizers(bk, rng, 40, 5)?;
    let mut positives = 0;
    for i in 0..MEMBERSHIP_PAIRS {
        let s = &stabs[(i % stabs.len() as u64) as usize];
        let m = if i % 2 == 0 { s.random_element(bk, rng)? } else { random_gl2(bk, 3, rng) };
        let v = if i % 4 == 0 { random_vertex(bk, rng, 5) } else { s.vertex.clone() };
        // a disagreement of the two routes is raised inside
        if is_in_stabilizer(bk, &m, &v)? {
            positives += 1;
        }
    }
    if positives == 0 {
        return Err(fail("membership routes", "no positive membership sampled"));
    }
    Ok(MEMBERSHIP_PAIRS)
}

fn check_transporter_vs_stabilizer(bk: &Backend, rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..TRANSPORTER_VERTICES {
        let v = random_vertex(bk, rng, 5);
        let s = enumerate_stabilizer(bk, &v)?;
        let t = transporter(bk, &v, &v)?;
        if t.transporter_count(bk)? != s.order {
            return Err(fail("transporter", format!("|T(v,v)| != |G_v| at {v}")));
        }
        if let Some(elems) = s.elements(bk) {
            let set: HashSet<KMatrix> = elems.iter().cloned().collect();
            if set.len() as u128 != s.order {
                return Err(fail("transporter", format!("listed elements at {v} are not distinct")));
            }
            for g in &elems {
                if !is_in_stabilizer(bk, g, &v)? || v.apply(bk, g)? != v {
                    return Err(fail("transporter", format!("listed element does not fix {v}")));
                }
            }
        }
        if let Some(g) = t.find_unit(bk) {
            if !is_in_stabilizer(bk, &g, &v)? {
                return Err(fail("transporter", format!("transporter unit does not fix {v}")));
            }
        }
    }
    Ok(TRANSPORTER_VERTICES as u64)
}

// stabilizer

fn check_trace_det(bk: &Backend, rng: &mut ChaCha8Rng) -> Outcome {
    let mut n = 0;
    for s in sample_stabilizers(bk, rng, 10, 5)? {
        let elems = match s.elements(bk) {
            Some(e) => e,
            None => (0..50).map(|_| s.random_element(bk, rng)).collect::<Result<_>>()?,
        };
        for g in elems {
            n += 1;
            let det_ok = g.det(bk).as_constant().is_some_and(|d| !d.is_zero());
            if !det_ok || g.trace(bk).as_constant().is_none() {
                return Err(fail("trace and determinant", format!("{} in G at {}", bk.format_matrix(&g), s.vertex)));
            }
        }
    }
    Ok(n)
}

fn check_linear_closure(bk: &Backend, rng: &mut ChaCha8Rng) -> Outcome {
    let k = bk.field();
    let mut n = 0;
    for s in sample_stabilizers(bk, rng, 4, 5)? {
        for _ in 0..200 {
            let m1 = s.random_element(bk, rng)?;
            let m2 = s.random_element(bk, rng)?;
            let (a1, a2) = (KElement::constant(random_fe(k, rng)), KElement::constant(random_fe(k, rng)));
            let m = m1.scale(&a1, bk).add(&m2.scale(&a2, bk), bk);
            if !m.det(bk).as_constant().is_some_and(|d| !d.is_zero()) {
                continue;
            }
            n += 1;
            if !is_in_stabilizer(bk, &m, &s.vertex)? {
                return Err(fail("linear closure", format!("combination leaves G at {}", s.vertex)));
            }
        }
    }
    Ok(n)
}

fn check_span_intersection(bk: &Backend, rng: &mut ChaCha8Rng) -> Outcome {
    let q = bk.q();
    let mut n = 0;
    for s in sample_stabilizers(bk, rng, 10, 4)? {
        let m = s.random_element(bk, rng)?;
        let span = span_i(bk, &m, &s.vertex)?;
        for _ in 0..4 {
            let w = random_vertex(bk, rng, 4);
            n += 1;
            let mut inside = 0;
            for x in &span {
                if is_in_stabilizer(bk, x, &w)? {
                    inside += 1;
                }
            }
            if inside != q - 1 && inside != span.len() {
                return Err(fail("I(M) intersection", format!("{inside} of {} members fix {w}", span.len())));
            }
        }
    }
    Ok(n)
}

fn check_level_zero(bk: &Backend, rng: &mut ChaCha8Rng) -> Outcome {
    let q = bk.q() as u128;
    let split = (q * q - 1) * (q * q - q);
    for _ in 0..20 {
        let z = bk.random_element(3, rng);
        let v = Vertex::normalize(bk, 0, &z);
        let s = enumerate_stabilizer(bk, &v)?;
        if s.order == split && s.label == ClassLabel::SplitQuaternionic {
            continue;
        }
        if s.order != q * (q - 1) {
            return Err(fail("level-zero stabilizers", format!("order {} at {v}", s.order)));
        }
        let Some(elems) = s.elements(bk) else { continue };
        for g in elems {
            let ok = g.c.is_zero() && g.a == g.d && g.a.as_constant().is_some() && g.b.as_constant().is_some();
            if !ok {
                return Err(fail("level-zero stabilizers", format!("{} at {v}", bk.format_matrix(&g))));
            }
        }
    }
    Ok(20)
}

fn check_group_axioms(bk: &Backend, rng: &mut ChaCha8Rng) -> Outcome {
    let mut n = 0;
    for s in sample_stabilizers(bk, rng, 8, 4)? {
        match s.elements(bk).filter(|e| e.len() <= 200) {
            Some(elems) => {
                let set: HashSet<KMatrix> = elems.iter().cloned().collect();
                for g in &elems {
                    n += 1;
                    if !set.contains(&inverse_k(bk, g)?) {
                        return Err(fail("group axioms", format!("inverse missing at {}", s.vertex)));
                    }
                    for h in &elems {
                        if !set.contains(&g.mul(h, bk)) {
                            return Err(fail("group axioms", format!("product missing at {}", s.vertex)));
                        }
                    }
                }
            }
            None => {
                for _ in 0..50 {
                    n += 1;
                    let g = s.random_element(bk, rng)?;
                    let h = s.random_element(bk, rng)?;
                    if !is_in_stabilizer(bk, &g.mul(&h, bk), &s.vertex)?
                        || !is_in_stabilizer(bk, &inverse_k(bk, &g)?, &s.vertex)?
                    {
                        return Err(fail("group axioms", format!("sampled closure fails at {}", s.vertex)));
                    }
                }
            }
        }
    }
    Ok(n)
}

/// `g` has the shape `[[α + cz, b], [c, β − cz]]` with `α, β ∈ k*` and
/// `b = (β − α)z − cz²`.
fn is_triangular_form(bk: &Backend, g: &KMatrix, z: &KElement) -> bool {
    let cz = bk.mul(&g.c, z);
    let (alpha, beta) = (bk.sub(&g.a, &cz), bk.add(&g.d, &cz));
    let unit = |x: &KElement| x.as_constant().is_some_and(|c| !c.is_zero());
    let b = bk.sub(&bk.mul(&bk.sub(&beta, &alpha), z), &bk.mul(&cz, z));
    unit(&alpha) && unit(&beta) && g.b == b
}

fn check_monotonicity(bk: &Backend, rng: &mut ChaCha8Rng) -> Outcome {
    let mut n = 0;
    for s in sample_stabilizers(bk, rng, 20, 5)? {
        let Some(elems) = s.elements(bk) else { continue };
        let z = s.vertex.z(bk);
        if !elems.iter().all(|g| is_triangular_form(bk, g, &z)) {
            continue;
        }
        let outer = Vertex::normalize(bk, s.vertex.level() + 1, &z);
        n += 1;
        for g in &elems {
            if !is_in_stabilizer(bk, g, &outer)? {
                return Err(fail("monotonicity", format!("G at {} not inside G at {outer}", s.vertex)));
            }
        }
    }
    Ok(n)
}

fn check_classification(bk: &Backend, rng: &mut ChaCha8Rng) -> Outcome {
    let stabs = sample_stabilizers(bk, rng, 30, 6)?;
    for s in &stabs {
        let (label, dim_v) = crate::stabilizer::classify(bk, s)?;
        if label != s.label || dim_v != s.dim_v {
            return Err(fail("classification", format!("{} relabelled", s.vertex)));
        }
        if let Some(e) = &s.eigen {
            if bk.delta() % 2 == 1 && e.not_in_k && s.label != ClassLabel::CM && s.label != ClassLabel::SplitQuaternionic {
                return Err(fail("classification", format!("irreducible element in rational group at {}", s.vertex)));
            }
        }
        // every listed element's eigen class is consistent with the label
        if let (Some(elems), true) = (s.elements(bk), s.label.is_rational()) {
            for g in elems {
                let (tr, det) = (g.trace(bk).as_constant().unwrap(), g.det(bk).as_constant().unwrap());
                if eigen_class(tr, det, bk.field())? == EigenClass::NotInK {
                    return Err(fail("classification", format!("rational group at {} has NotInK element", s.vertex)));
                }
            }
        }
    }
    Ok(stabs.len() as u64)
}

fn check_edge_routes(bk: &Backend, rng: &mut ChaCha8Rng) -> Outcome {
    let q = bk.q() as u128;
    for _ in 0..20 {
        let v = random_vertex(bk, rng, 5);
        let w = v.neighbor(bk, rng.gen_range(0..Vertex::valence(bk)));
        let e = Edge::new(bk, v.clone(), w.clone())?;
        let ge = edge_stabilizer(bk, &e)?;
        if ge.order != edge_stabilizer_order_joint(bk, &e)? {
            return Err(fail("edge stabilizer routes", format!("{} -- {}", e.lower, e.upper)));
        }
        if bk.delta() % 2 == 1 {
            if ge.order % (q * q - 1) == 0 {
                return Err(fail("edge stabilizer order for odd degree", format!("{} -- {}", e.lower, e.upper)));
            }
            if ge.eigen.is_some_and(|x| x.not_in_k) {
                return Err(fail("edge eigenvalues for odd degree", format!("{} -- {}", e.lower, e.upper)));
            }
        }
        if bk.delta() == 1 {
            for end in [&e.lower, &e.upper] {
                if enumerate_stabilizer(bk, end)?.label == ClassLabel::CM && ge.order != q - 1 {
                    return Err(fail("edges at CM vertices", format!("|G_e| = {} at {end}", ge.order)));
                }
            }
        }
    }
    Ok(20)
}

fn check_takahashi(bk: &Backend, _: &mut ChaCha8Rng) -> Outcome {
    if bk.kind() != BackendKind::EllipticDelta1 {
        return Ok(0);
    }
    let cases = takahashi::scan_curve(bk)?;
    if let Some(c) = cases.iter().find(|c| !c.matches) {
        return Err(fail("Takahashi vertices", format!("λ={} roots={} gives {} of order {}", c.lambda, c.roots, c.label.name(), c.order)));
    }
    Ok(cases.len() as u64)
}

// quotient

fn check_quotient_build(bk: &Backend, _: &mut ChaCha8Rng) -> Outcome {
    let g = bfs_quotient(bk, default_radius(bk))?;
    Ok(g.vertices.len() as u64)
}

fn check_orbit_counting(bk: &Backend, _: &mut ChaCha8Rng) -> Outcome {
    let g = bfs_quotient(bk, default_radius(bk))?;
    for v in &g.vertices {
        let s = enumerate_stabilizer(bk, &v.rep)?;
        let orbits = star_orbits(bk, &s)?;
        let total: u128 = orbits.iter().map(|o| s.order / o.edge_order).sum();
        if total != Vertex::valence(bk) as u128 {
            return Err(fail("orbit counting", format!("Σ [G_v : G_e] = {total} at {}", v.rep)));
        }
    }
    Ok(g.vertices.len() as u64)
}

/// Predicts from `ν((cz + d) + ucπⁿ) ≥ 1` which lower neighbours each
/// element sends to the upper neighbour, and compares with `apply`.
fn check_neighbor_congruence(bk: &Backend, _: &mut ChaCha8Rng) -> Outcome {
    let g = bfs_quotient(bk, default_radius(bk).min(6))?;
    let mut n = 0;
    for qv in &g.vertices {
        let v = &qv.rep;
        let s = enumerate_stabilizer(bk, v)?;
        let Some(elems) = s.elements(bk) else { continue };
        let z = v.z(bk);
        let pin = bk.pi_pow(v.level());
        let upper = v.neighbor(bk, bk.residue_count());
        for m in elems.iter().take(64) {
            let czd = bk.add(&bk.mul(&m.c, &z), &m.d);
            for (u, rep) in bk.residue_reps().iter().enumerate() {
                n += 1;
                let expr = bk.add(&czd, &bk.mul(rep, &bk.mul(&m.c, &pin)));
                let predicted = bk.valuation_at_least(&expr, 1);
                let actual = v.neighbor(bk, u).apply(bk, m)? == upper;
                if predicted != actual {
                    return Err(fail("neighbour congruence", format!("label {u} at {v} under {}", bk.format_matrix(m))));
                }
            }
        }
    }
    Ok(n)
}

fn check_inequivalent(bk: &Backend, _: &mut ChaCha8Rng) -> Outcome {
    let g = bfs_quotient(bk, default_radius(bk))?;
    let mut n = 0;
    for (i, a) in g.vertices.iter().enumerate() {
        for b in &g.vertices[i + 1..] {
            if a.order != b.order || a.label != b.label || a.rep.parity() != b.rep.parity() {
                continue;
            }
            n += 1;
            if equivalent(bk, &a.rep, &b.rep)? {
                return Err(fail("inequivalent representatives", format!("{} and {}", a.rep, b.rep)));
            }
        }
    }
    Ok(n)
}

/// The class number from an independent count: points of `E(F_q)` by
/// enumeration, and `deg ∞` in genus zero.
pub fn class_number_oracle(bk: &Backend) -> u64 {
    match bk.kind() {
        BackendKind::EllipticDelta1 => {
            let k = bk.field();
            1 + k.elements().map(|x| takahashi::weierstrass_roots(bk, x).len() as u64).sum::<u64>()
        }
        _ => bk.delta() as u64,
    }
}

fn check_rays(bk: &Backend, _: &mut ChaCha8Rng) -> Outcome {
    let g = bfs_quotient(bk, default_radius(bk))?;
    let oracle = class_number_oracle(bk);
    if g.rays.len() as u64 != oracle || g.class_number != oracle {
        return Err(fail("ray count", format!("{} rays, class number {}, oracle {oracle}", g.rays.len(), g.class_number)));
    }
    if !g.unresolved.is_empty() {
        return Err(fail("ray count", g.unresolved.join("; ")));
    }
    let tree_expected = bk.kind() == BackendKind::RationalDelta1 || (bk.kind() == BackendKind::EllipticDelta1 && bk.q() <= 3);
    if tree_expected && g.omega != 0 {
        return Err(fail("quotient is a tree", format!("ω = {}", g.omega)));
    }
    Ok(g.rays.len() as u64)
}

fn check_free_product(bk: &Backend, _: &mut ChaCha8Rng) -> Outcome {
    let g = bfs_quotient(bk, default_radius(bk))?;
    if bk.delta() != 1 {
        return match free_product_report(bk, &g) {
            Err(Error::Config(_)) => Ok(1),
            _ => Err(fail("free-product report", "accepted a place of degree above one")),
        };
    }
    let r = free_product_report(bk, &g)?;
    if bk.kind() == BackendKind::RationalDelta1 && r.n != 0 {
        return Err(fail("free-product report", "rational function field has a CM vertex"));
    }
    let isolated_cm = g.vertices.iter().filter(|v| v.isolated && v.label == ClassLabel::CM).count();
    if r.n != isolated_cm || r.factors.len() != r.n {
        return Err(fail("free-product report", "factor count differs from isolated CM vertices"));
    }
    Ok(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::BackendConfig;

    #[test]
    fn suite_names_round_trip() {
        for s in [Suite::All].into_iter().chain(Suite::PARTS) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn algebra_suite_passes_on_the_rational_line() {
        let bk = Backend::new(BackendConfig::rational(2)).unwrap();
        let r = run_suite(&bk, Suite::Algebra, 1);
        assert!(r.passed(), "{:?}", r.first_failure());
        assert_eq!(r.checks.len(), 3);
    }
}
