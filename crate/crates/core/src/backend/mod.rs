//! The triple `(K, ∞, C)` for the three supported configurations: exact
//! arithmetic in `K`, the valuation `ν` at `∞`, the local parameter `π`,
//! residue representatives `ℛ`, Riemann-Roch spaces and Laurent expansions.

pub mod config;
mod expand;
mod format;
mod rr;
pub mod series;

use std::fmt;
use std::sync::RwLock;

use serde::Serialize;

use crate::algebra::{Fe, FiniteField, Poly, RatFunc, Ring};
use crate::error::{Error, Result};

pub use config::{BackendConfig, BackendKind, FieldValue};
pub use expand::RExpansion;
pub use rr::{CongruenceSolution, RRSpace};
pub use series::LaurentSeries;

/// An element `a + b·y` of `K`. For the two rational backends `b = 0` and `a`
/// is a rational function of `t`; for the elliptic backend `a, b` are rational
/// functions of `x`, and the Weierstrass relation keeps the form unique.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Default)]
pub struct KElement {
    pub a: RatFunc,
    pub b: RatFunc,
}

impl KElement {
    pub fn zero() -> Self {
        KElement { a: RatFunc::zero(), b: RatFunc::zero() }
    }

    pub fn one() -> Self {
        Self::constant(Fe::ONE)
    }

    pub fn constant(c: Fe) -> Self {
        KElement { a: RatFunc::constant(c), b: RatFunc::zero() }
    }

    pub fn from_ratfunc(a: RatFunc) -> Self {
        KElement { a, b: RatFunc::zero() }
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::from_ratfunc(RatFunc::from_poly(p))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// The value if this is a constant of `k`.
    pub fn as_constant(&self) -> Option<Fe> {
        if self.b.is_zero() {
            self.a.as_constant()
        } else {
            None
        }
    }
}

/// Cached expansions of the generators of `K` in `π`.
#[derive(Clone, Debug)]
struct BaseSeries {
    /// Relative precision of every cached series.
    rel: i64,
    /// Elliptic: `x` and `y`. Degree-two place: `t` in `gen`.
    x: LaurentSeries,
    y: LaurentSeries,
    gen: LaurentSeries,
}

pub struct Backend {
    config: BackendConfig,
    kind: BackendKind,
    k: FiniteField,
    kinf: FiniteField,
    /// `[a1, a2, a3, a4, a6]`; zero outside the elliptic backend.
    weierstrass: [Fe; 5],
    /// `a1 x + a3`, so that `y² = −h y + f`.
    h: Poly,
    /// `x³ + a2 x² + a4 x + a6`.
    f: Poly,
    /// The quadratic defining `∞` for the degree-two backend.
    p: Poly,
    /// Residue of `t` in `k∞` (degree-two backend).
    tau: Fe,
    cache: RwLock<Option<BaseSeries>>,
}

impl fmt::Debug for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Backend").field("config", &self.config).finish()
    }
}

impl Clone for Backend {
    fn clone(&self) -> Self {
        Backend {
            config: self.config.clone(),
            kind: self.kind,
            k: self.k.clone(),
            kinf: self.kinf.clone(),
            weierstrass: self.weierstrass,
            h: self.h.clone(),
            f: self.f.clone(),
            p: self.p.clone(),
            tau: self.tau,
            cache: RwLock::new(self.cache.read().expect("series cache poisoned").clone()),
        }
    }
}

/// Summary of a backend for reports.
#[derive(Clone, Debug, Serialize)]
pub struct BackendSummary {
    pub kind: BackendKind,
    pub q: usize,
    pub genus: u32,
    pub delta: u32,
    pub description: String,
}

impl Backend {
    /// Validates the configuration and builds the backend.
    pub fn new(config: BackendConfig) -> Result<Self> {
        let k = config.field()?;
        let kind = config.kind;
        let mut weierstrass = [Fe::ZERO; 5];
        let (mut h, mut f, mut p) = (Poly::zero(), Poly::zero(), Poly::zero());
        let mut kinf = k.clone();
        let mut tau = Fe::ZERO;
        match kind {
            BackendKind::RationalDelta1 => {}
            BackendKind::EllipticDelta1 => {
                weierstrass = config.weierstrass_coefficients(&k)?;
                let [a1, a2, a3, a4, a6] = weierstrass;
                if discriminant(&weierstrass, &k).is_zero() {
                    return Err(Error::Config(format!(
                        "the Weierstrass curve {:?} is singular",
                        weierstrass.map(|c| c.0)
                    )));
                }
                h = Poly::from_coeffs(vec![a3, a1]);
                f = Poly::from_coeffs(vec![a6, a4, a2, Fe::ONE]);
            }
            BackendKind::RationalDelta2 => {
                p = config.quadratic_polynomial(&k)?;
                kinf = k.extension(p.coeffs())?;
                tau = kinf.generator();
            }
        }
        let backend = Backend {
            config,
            kind,
            k,
            kinf,
            weierstrass,
            h,
            f,
            p,
            tau,
            cache: RwLock::new(None),
        };
        let pi = backend.local_parameter();
        if backend.valuation(&pi) != Some(1) {
            return Err(Error::Config("the local parameter does not have valuation one".into()));
        }
        Ok(backend)
    }

    pub fn config(&self) -> &BackendConfig {
        &self.config
    }

    pub fn kind(&self) -> BackendKind {
        self.kind
    }

    /// The constant field `k = F_q`.
    pub fn field(&self) -> &FiniteField {
        &self.k
    }

    /// The residue field `k∞ = O/m`; labels `0..q` are the embedded `k`.
    pub fn residue_field(&self) -> &FiniteField {
        &self.kinf
    }

    pub fn q(&self) -> usize {
        self.k.order()
    }

    pub fn genus(&self) -> u32 {
        self.kind.genus()
    }

    pub fn delta(&self) -> u32 {
        self.kind.delta()
    }

    /// `|ℛ| = q^δ`.
    pub fn residue_count(&self) -> usize {
        self.kinf.order()
    }

    pub fn weierstrass(&self) -> [Fe; 5] {
        self.weierstrass
    }

    pub fn quadratic(&self) -> &Poly {
        &self.p
    }

    pub fn summary(&self) -> BackendSummary {
        BackendSummary {
            kind: self.kind,
            q: self.q(),
            genus: self.genus(),
            delta: self.delta(),
            description: self.describe(),
        }
    }

    /// Human-readable description of the curve or place.
    pub fn describe(&self) -> String {
        match self.kind {
            BackendKind::RationalDelta1 => format!("k(t) over F_{}, place 1/t", self.q()),
            BackendKind::EllipticDelta1 => {
                let [a1, a2, a3, a4, a6] = self.weierstrass.map(|c| c.0);
                format!(
                    "y^2 + {a1}xy + {a3}y = x^3 + {a2}x^2 + {a4}x + {a6} over F_{}",
                    self.q()
                )
            }
            BackendKind::RationalDelta2 => {
                let c = self.p.coeffs();
                format!("k(t) over F_{}, place t^2 + {}t + {}", self.q(), c[1].0, c[0].0)
            }
        }
    }

    // ----- arithmetic in K -----

    pub fn add(&self, x: &KElement, y: &KElement) -> KElement {
        KElement { a: x.a.add(&y.a, &self.k), b: x.b.add(&y.b, &self.k) }
    }

    pub fn sub(&self, x: &KElement, y: &KElement) -> KElement {
        KElement { a: x.a.sub(&y.a, &self.k), b: x.b.sub(&y.b, &self.k) }
    }

    pub fn neg(&self, x: &KElement) -> KElement {
        KElement { a: x.a.neg(&self.k), b: x.b.neg(&self.k) }
    }

    pub fn scale(&self, c: Fe, x: &KElement) -> KElement {
        KElement { a: x.a.scale(c, &self.k), b: x.b.scale(c, &self.k) }
    }

    pub fn mul(&self, x: &KElement, y: &KElement) -> KElement {
        let k = &self.k;
        if x.b.is_zero() && y.b.is_zero() {
            return KElement::from_ratfunc(x.a.mul(&y.a, k));
        }
        // (A1 + B1 y)(A2 + B2 y) with y² = −h y + f
        let bb = x.b.mul(&y.b, k);
        let a = x.a.mul(&y.a, k).add(&bb.mul_poly(&self.f, k), k);
        let b = x
            .a
            .mul(&y.b, k)
            .add(&y.a.mul(&x.b, k), k)
            .sub(&bb.mul_poly(&self.h, k), k);
        KElement { a, b }
    }

    /// `(A − B h) − B y`, the image under `y ↦ −h − y`.
    pub fn conjugate(&self, x: &KElement) -> KElement {
        let k = &self.k;
        KElement { a: x.a.sub(&x.b.mul_poly(&self.h, k), k), b: x.b.neg(k) }
    }

    /// `x · conj(x) = A² − A B h − B² f`, an element of `k(x)`.
    pub fn norm(&self, x: &KElement) -> RatFunc {
        let k = &self.k;
        let (a, b) = (&x.a, &x.b);
        a.mul(a, k)
            .sub(&a.mul(b, k).mul_poly(&self.h, k), k)
            .sub(&b.mul(b, k).mul_poly(&self.f, k), k)
    }

    pub fn inv(&self, x: &KElement) -> Result<KElement> {
        if x.is_zero() {
            return Err(Error::Domain("inverse of zero in K".into()));
        }
        if x.b.is_zero() {
            return Ok(KElement::from_ratfunc(x.a.inv(&self.k)?));
        }
        let n = self.norm(x).inv(&self.k)?;
        let c = self.conjugate(x);
        Ok(KElement { a: c.a.mul(&n, &self.k), b: c.b.mul(&n, &self.k) })
    }

    pub fn div(&self, x: &KElement, y: &KElement) -> Result<KElement> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &KElement, e: i64) -> Result<KElement> {
        let base = if e < 0 { self.inv(x)? } else { x.clone() };
        let mut acc = KElement::one();
        let mut b = base;
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        Ok(acc)
    }

    /// The integer `n` in the prime field.
    pub fn from_int(&self, n: i64) -> KElement {
        KElement::constant(self.k.from_int(n))
    }

    /// The generator `t` (rational backends) or `x` (elliptic).
    pub fn var(&self) -> KElement {
        KElement::from_poly(Poly::var())
    }

    /// `y` of the elliptic backend.
    pub fn y(&self) -> Result<KElement> {
        if self.kind != BackendKind::EllipticDelta1 {
            return Err(Error::Domain("y exists only in the elliptic backend".into()));
        }
        Ok(KElement { a: RatFunc::zero(), b: RatFunc::one() })
    }

    /// `π`: `1/t`, `x/y`, or `p(t)/t²`.
    pub fn local_parameter(&self) -> KElement {
        let k = &self.k;
        match self.kind {
            BackendKind::RationalDelta1 => {
                KElement::from_ratfunc(RatFunc::new(Poly::one(), Poly::var(), k).expect("nonzero"))
            }
            BackendKind::EllipticDelta1 => {
                // x/y = x(h + y)/f
                let inv_f = RatFunc::from_poly(self.f.clone()).inv(k).expect("f is nonzero");
                let x = Poly::var();
                KElement { a: inv_f.mul_poly(&x.mul(&self.h, k), k), b: inv_f.mul_poly(&x, k) }
            }
            BackendKind::RationalDelta2 => KElement::from_ratfunc(
                RatFunc::new(self.p.clone(), Poly::monomial(Fe::ONE, 2), k).expect("nonzero"),
            ),
        }
    }

    /// `π^e` exactly.
    pub fn pi_pow(&self, e: i64) -> KElement {
        self.pow(&self.local_parameter(), e).expect("π is nonzero")
    }

    /// The representative in `ℛ` with the given label: the constant itself
    /// when `δ = 1`, and `α + βt` for the label `α + qβ` when `δ = 2`.
    pub fn residue_rep(&self, label: usize) -> KElement {
        assert!(label < self.residue_count(), "residue label out of range");
        match self.kind {
            BackendKind::RationalDelta2 => {
                let q = self.q();
                KElement::from_poly(Poly::from_coeffs(vec![Fe((label % q) as u8), Fe((label / q) as u8)]))
            }
            _ => KElement::constant(Fe(label as u8)),
        }
    }

    /// `ℛ`, in label order; contains `0` at label 0.
    pub fn residue_reps(&self) -> Vec<KElement> {
        (0..self.residue_count()).map(|i| self.residue_rep(i)).collect()
    }

    /// Coordinates over `k` of an element of `k∞`.
    pub fn residue_coordinates(&self, c: Fe) -> Vec<Fe> {
        match self.kind {
            BackendKind::RationalDelta2 => self.kinf.coordinates(c),
            _ => vec![c],
        }
    }

    /// Whether `x ∈ C`.
    pub fn in_ring(&self, x: &KElement) -> bool {
        match self.kind {
            BackendKind::RationalDelta1 => x.a.is_polynomial(),
            BackendKind::EllipticDelta1 => x.a.is_polynomial() && x.b.is_polynomial(),
            BackendKind::RationalDelta2 => {
                // denominator a power of p, numerator of degree at most 2·that power
                let den = x.a.den();
                let (m, rest) = den.split_power(&self.p, &self.k);
                rest.is_constant() && x.a.num().deg_i64() <= 2 * m as i64
            }
        }
    }

    // ----- valuation -----

    /// `ν(x)`, with `None` standing for `+∞`.
    pub fn valuation(&self, x: &KElement) -> Option<i64> {
        if x.is_zero() {
            return None;
        }
        let deg_val = |r: &RatFunc| r.den().deg_i64() - r.num().deg_i64();
        Some(match self.kind {
            BackendKind::RationalDelta1 => deg_val(&x.a),
            BackendKind::EllipticDelta1 => {
                let va = (!x.a.is_zero()).then(|| 2 * deg_val(&x.a));
                let vb = (!x.b.is_zero()).then(|| 2 * deg_val(&x.b) - 3);
                match (va, vb) {
                    (Some(a), Some(b)) => a.min(b),
                    (Some(a), None) => a,
                    (None, Some(b)) => b,
                    (None, None) => unreachable!(),
                }
            }
            BackendKind::RationalDelta2 => {
                let (mn, _) = x.a.num().split_power(&self.p, &self.k);
                let (md, _) = x.a.den().split_power(&self.p, &self.k);
                mn as i64 - md as i64
            }
        })
    }

    /// `ν(x) ≥ r`, with `ν(0) = +∞`.
    pub fn valuation_at_least(&self, x: &KElement, r: i64) -> bool {
        self.valuation(x).map_or(true, |v| v >= r)
    }

    /// The residue of `x / π^{ν(x)}` in `k∞`, computed exactly.
    pub fn leading_coefficient(&self, x: &KElement) -> Result<Fe> {
        let v = self.valuation(x).ok_or_else(|| Error::Domain("leading coefficient of zero".into()))?;
        Ok(match self.kind {
            BackendKind::RationalDelta1 => x.a.leading_coefficient(),
            // x³/y² ≡ 1 mod m, so the dominant part contributes its leading coefficient
            BackendKind::EllipticDelta1 => {
                if v % 2 == 0 {
                    x.a.leading_coefficient()
                } else {
                    x.b.leading_coefficient()
                }
            }
            BackendKind::RationalDelta2 => {
                let kinf = &self.kinf;
                let (_, fnum) = x.a.num().split_power(&self.p, &self.k);
                let (_, fden) = x.a.den().split_power(&self.p, &self.k);
                let num = fnum.eval(self.tau, kinf);
                let den = fden.eval(self.tau, kinf);
                // x / π^v = f'·t^{2v} / g'
                let t2v = if v >= 0 {
                    kinf.pow(self.tau, 2 * v as u64)
                } else {
                    kinf.inv_nz(kinf.pow(self.tau, 2 * (-v) as u64))
                };
                kinf.mul(kinf.mul(num, t2v), kinf.inv_nz(den))
            }
        })
    }

    /// Number of ideal classes of `C`: `#E(F_q)` for the elliptic backend and
    /// `δ` for the genus-zero backends.
    pub fn class_number(&self) -> u64 {
        match self.kind {
            BackendKind::EllipticDelta1 => self.count_points(),
            _ => self.delta() as u64,
        }
    }

    /// `#E(F_q)`, the affine solutions of the Weierstrass equation plus the
    /// point at infinity.
    pub fn count_points(&self) -> u64 {
        assert_eq!(self.kind, BackendKind::EllipticDelta1);
        let k = &self.k;
        let mut n = 1;
        for x in k.elements() {
            let hx = self.h.eval(x, k);
            let fx = self.f.eval(x, k);
            n += k.quadratic_roots(hx, k.neg(fx)).len() as u64;
        }
        n
    }
}

/// The discriminant of a general Weierstrass equation.
pub fn discriminant(a: &[Fe; 5], k: &FiniteField) -> Fe {
    let [a1, a2, a3, a4, a6] = *a;
    let n = |i: i64| k.from_int(i);
    let m = |x: Fe, y: Fe| k.mul(x, y);
    let b2 = k.add(m(a1, a1), m(n(4), a2));
    let b4 = k.add(m(n(2), a4), m(a1, a3));
    let b6 = k.add(m(a3, a3), m(n(4), a6));
    let b8 = {
        let t1 = m(m(a1, a1), a6);
        let t2 = m(m(n(4), a2), a6);
        let t3 = m(m(a1, a3), a4);
        let t4 = m(a2, m(a3, a3));
        let t5 = m(a4, a4);
        k.sub(k.add(k.sub(k.add(t1, t2), t3), t4), t5)
    };
    let d1 = m(m(b2, b2), b8);
    let d2 = m(n(8), m(b4, m(b4, b4)));
    let d3 = m(n(27), m(b6, b6));
    let d4 = m(n(9), m(b2, m(b4, b6)));
    k.add(k.neg(k.add(k.add(d1, d2), d3)), d4)
}

impl Ring for Backend {
    type Elem = KElement;
    fn zero(&self) -> KElement {
        KElement::zero()
    }
    fn one(&self) -> KElement {
        KElement::one()
    }
    fn add(&self, a: &KElement, b: &KElement) -> KElement {
        Backend::add(self, a, b)
    }
    fn sub(&self, a: &KElement, b: &KElement) -> KElement {
        Backend::sub(self, a, b)
    }
    fn mul(&self, a: &KElement, b: &KElement) -> KElement {
        Backend::mul(self, a, b)
    }
    fn neg(&self, a: &KElement) -> KElement {
        Backend::neg(self, a)
    }
    fn is_zero(&self, a: &KElement) -> bool {
        a.is_zero()
    }
}

#[cfg(test)]
mod tests;
