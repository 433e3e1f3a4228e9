//! The vertices `v(2, π⁻¹ + λπ)` on Weierstrass curves: their stabilizer
//! type against the roots of `F(λ, μ) = 0`, where `F` is the Weierstrass
//! equation in `(x, y) = (λ, μ)`.

use serde::Serialize;

use crate::algebra::Fe;
use crate::backend::{Backend, BackendConfig};
use crate::error::Result;
use crate::stabilizer::{enumerate_stabilizer, ClassLabel};
use crate::tree::Vertex;

/// The distinct `μ ∈ k` with `F(λ, μ) = 0`.
pub fn weierstrass_roots(bk: &Backend, lambda: Fe) -> Vec<Fe> {
    let k = bk.field();
    let [a1, a2, a3, a4, a6] = bk.weierstrass();
    let l2 = k.mul(lambda, lambda);
    let rhs = k.add(k.add(k.add(k.mul(l2, lambda), k.mul(a2, l2)), k.mul(a4, lambda)), a6);
    k.elements()
        .filter(|&mu| {
            let lhs = k.add(k.add(k.mul(mu, mu), k.mul(a1, k.mul(lambda, mu))), k.mul(a3, mu));
            lhs == rhs
        })
        .collect()
}

/// `v(2, π⁻¹ + λπ)`.
pub fn takahashi_vertex(bk: &Backend, lambda: Fe) -> Result<Vertex> {
    let pi = bk.local_parameter();
    let z = bk.add(&bk.inv(&pi)?, &bk.scale(lambda, &pi));
    Ok(Vertex::normalize(bk, 2, &z))
}

/// One `λ` on one curve.
#[derive(Clone, Debug, Serialize)]
pub struct TakahashiCase {
    pub weierstrass: [u8; 5],
    pub lambda: u8,
    pub roots: usize,
    pub vertex: Vertex,
    pub order: u128,
    pub label: ClassLabel,
    pub matches: bool,
}

/// Two roots give the split torus `k* × k*`, no root gives `k(ω)*` of
/// order `q² − 1`, a double root gives a rational stabilizer.
pub fn expected_matches(q: usize, roots: usize, order: u128, label: ClassLabel) -> bool {
    let q = q as u128;
    // over F_2 the torus is trivial and carries no distinct eigenvalues
    let torus = if q == 2 { label.is_rational() } else { label == ClassLabel::RationalNonAbelian };
    match roots {
        2 => torus && order == (q - 1) * (q - 1),
        0 => label == ClassLabel::CM && order == q * q - 1,
        _ => label.is_rational(),
    }
}

/// Every nonsingular Weierstrass curve over `F_q`, as coefficient tuples.
pub fn all_curves(q: usize) -> impl Iterator<Item = BackendConfig> {
    (0..q.pow(5)).filter_map(move |idx| {
        let mut a = [0u32; 5];
        let mut i = idx;
        for c in &mut a {
            *c = (i % q) as u32;
            i /= q;
        }
        let cfg = BackendConfig::elliptic(q, a);
        Backend::new(cfg.clone()).ok().map(|_| cfg)
    })
}

/// The cases of one curve, one per `λ ∈ k`.
pub fn scan_curve(bk: &Backend) -> Result<Vec<TakahashiCase>> {
    let mut out = Vec::new();
    for lambda in bk.field().elements() {
        let roots = weierstrass_roots(bk, lambda).len();
        let vertex = takahashi_vertex(bk, lambda)?;
        let s = enumerate_stabilizer(bk, &vertex)?;
        out.push(TakahashiCase {
            weierstrass: bk.weierstrass().map(|c| c.0),
            lambda: lambda.0,
            roots,
            matches: expected_matches(bk.q(), roots, s.order, s.label),
            vertex,
            order: s.order,
            label: s.label,
        });
    }
    Ok(out)
}

/// Curves over `F_q` on which exactly one `λ` has no root.
pub fn single_cm_curves(q: usize) -> Vec<BackendConfig> {
    all_curves(q)
        .filter(|cfg| {
            let bk = Backend::new(cfg.clone()).expect("filtered");
            bk.field().elements().filter(|&l| weierstrass_roots(&bk, l).is_empty()).count() == 1
        })
        .collect()
}
