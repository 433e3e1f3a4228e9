//! Expansions at `∞`: the embedding `K → k∞((π))` as a ring homomorphism,
//! and the `ℛ`-adic digit expansion `z = Σ r_e π^e` with `r_e ∈ ℛ`.

use serde::Serialize;

use super::series::{LaurentSeries, EXACT};
use super::{Backend, BackendKind, BaseSeries, KElement};
use crate::algebra::{Fe, FiniteField, Poly, RatFunc};
use crate::error::{Error, Result};

/// The digits of `z = Σ_{e < precision} r_e π^e + O(π^precision)` with `r_e`
/// given by its label in `ℛ`; only nonzero digits are listed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RExpansion {
    /// `ν(z)`, `None` for `z = 0`.
    pub valuation: Option<i64>,
    pub terms: Vec<(i64, usize)>,
    pub precision: i64,
}

impl Backend {
    /// Base series with at least the given relative precision.
    fn base_series(&self, rel: i64) -> BaseSeries {
        if let Some(b) = self.cache.read().expect("series cache poisoned").as_ref() {
            if b.rel >= rel {
                return b.clone();
            }
        }
        let mut guard = self.cache.write().expect("series cache poisoned");
        if let Some(b) = guard.as_ref() {
            if b.rel >= rel {
                return b.clone();
            }
        }
        let target = guard.as_ref().map_or(rel.max(32), |b| rel.max(2 * b.rel));
        let fresh = self.compute_base_series(target);
        *guard = Some(fresh.clone());
        fresh
    }

    fn compute_base_series(&self, rel: i64) -> BaseSeries {
        let kinf = &self.kinf;
        match self.kind {
            BackendKind::RationalDelta1 => BaseSeries {
                rel: EXACT,
                x: LaurentSeries::monomial(Fe::ONE, -1),
                y: LaurentSeries::zero(),
                gen: LaurentSeries::monomial(Fe::ONE, -1),
            },
            BackendKind::EllipticDelta1 => {
                // w = 1/y = π³ + a2π²w + a4πw² + a6w³ − a1πw − a3w²
                let [a1, a2, a3, a4, a6] = self.weierstrass;
                let prec = 3 + rel + 1;
                let mono = |c: Fe, e: i64| LaurentSeries::monomial(c, e);
                let mut w = mono(Fe::ONE, 3).truncate(prec);
                for _ in 0..=prec {
                    let w2 = w.mul(&w, kinf);
                    let w3 = w2.mul(&w, kinf);
                    let next = mono(Fe::ONE, 3)
                        .add(&w.mul(&mono(a2, 2), kinf), kinf)
                        .add(&w2.mul(&mono(a4, 1), kinf), kinf)
                        .add(&w3.scale(a6, kinf), kinf)
                        .sub(&w.mul(&mono(a1, 1), kinf), kinf)
                        .sub(&w2.scale(a3, kinf), kinf)
                        .truncate(prec);
                    if next == w {
                        break;
                    }
                    w = next;
                }
                let y = w.inv(rel, kinf);
                let x = y.shift(1);
                BaseSeries { rel, x, y, gen: LaurentSeries::zero() }
            }
            BackendKind::RationalDelta2 => {
                // t = τ + ε with p(τ + ε) = π (τ + ε)²
                let tau = LaurentSeries::monomial(self.tau, 0);
                let dp = kinf.add(kinf.add(self.tau, self.tau), self.p.coeff(1));
                let inv_dp = kinf.inv_nz(dp);
                let prec = rel + 1;
                let mut eps = LaurentSeries::zero_to(prec);
                for _ in 0..=prec {
                    let t = tau.add(&eps, kinf);
                    let next = t
                        .mul(&t, kinf)
                        .shift(1)
                        .sub(&eps.mul(&eps, kinf), kinf)
                        .scale(inv_dp, kinf)
                        .truncate(prec);
                    if next == eps {
                        break;
                    }
                    eps = next;
                }
                let gen = tau.add(&eps, kinf).truncate(rel);
                BaseSeries { rel, x: LaurentSeries::zero(), y: LaurentSeries::zero(), gen }
            }
        }
    }

    /// Horner evaluation of `p` at a series (coefficients of `p` lie in `k`,
    /// embedded in `k∞`).
    fn poly_at(&self, p: &Poly, s: &LaurentSeries) -> LaurentSeries {
        let kinf = &self.kinf;
        let mut acc = LaurentSeries::zero();
        for &c in p.coeffs().iter().rev() {
            acc = acc.mul(s, kinf).add(&LaurentSeries::monomial(c, 0), kinf);
        }
        acc
    }

    /// The expansion of `z` in `k∞((π))` with every coefficient below `prec`
    /// known. The map is a ring homomorphism.
    pub fn series(&self, z: &KElement, prec: i64) -> LaurentSeries {
        let Some(v) = self.valuation(z) else {
            return LaurentSeries::zero();
        };
        if v >= prec {
            return LaurentSeries::zero_to(prec);
        }
        let rel = prec - v;
        let kinf = &self.kinf;
        let out = match self.kind {
            BackendKind::RationalDelta1 => self.rational_series(&z.a, rel),
            BackendKind::EllipticDelta1 => {
                let base = self.base_series(rel + 1);
                let part = |r: &RatFunc| -> LaurentSeries {
                    if r.is_zero() {
                        return LaurentSeries::zero();
                    }
                    let num = self.poly_at(r.num(), &base.x);
                    if r.den().is_one() {
                        return num;
                    }
                    let den = self.poly_at(r.den(), &base.x);
                    num.mul(&den.inv(rel + 1, kinf), kinf)
                };
                let a = part(&z.a);
                let b = part(&z.b);
                a.add(&b.mul(&base.y, kinf), kinf)
            }
            BackendKind::RationalDelta2 => {
                let base = self.base_series(rel + 1);
                let t = &base.gen;
                let (mf, fnum) = z.a.num().split_power(&self.p, &self.k);
                let (mg, fden) = z.a.den().split_power(&self.p, &self.k);
                let m = mf as i64 - mg as i64;
                // p(t) = π t², so z = π^m t^{2m} f'(t)/g'(t) with f', g' units
                let unit = self
                    .poly_at(&fnum, t)
                    .mul(&self.poly_at(&fden, t).inv(rel + 1, kinf), kinf);
                let t2m = if m >= 0 {
                    t.pow(2 * m as u32, kinf)
                } else {
                    t.inv(rel + 1, kinf).pow(2 * (-m) as u32, kinf)
                };
                unit.mul(&t2m, kinf).shift(m)
            }
        };
        debug_assert!(out.precision() >= prec, "series precision {} below {prec}", out.precision());
        out.truncate(prec)
    }

    /// `f(t)/g(t) = π^{deg g − deg f} · rev f(π) / rev g(π)` for `π = 1/t`.
    fn rational_series(&self, r: &RatFunc, rel: i64) -> LaurentSeries {
        let kinf = &self.kinf;
        let rev = |p: &Poly| -> LaurentSeries {
            let mut c: Vec<Fe> = p.coeffs().to_vec();
            c.reverse();
            LaurentSeries::new(0, c, EXACT)
        };
        let shift = r.den().deg_i64() - r.num().deg_i64();
        let num = rev(r.num());
        let s = if r.den().is_one() { num } else { num.mul(&rev(r.den()).inv(rel + 1, kinf), kinf) };
        s.shift(shift)
    }

    /// Series of the representative `r ∈ ℛ` with the given label.
    pub fn rep_series(&self, label: usize, prec: i64) -> LaurentSeries {
        match self.kind {
            BackendKind::RationalDelta2 => {
                let q = self.q();
                let (alpha, beta) = (Fe((label % q) as u8), Fe((label / q) as u8));
                if beta.is_zero() {
                    return LaurentSeries::monomial(alpha, 0);
                }
                let t = self.base_series(prec.max(1)).gen;
                t.scale(beta, &self.kinf).add(&LaurentSeries::monomial(alpha, 0), &self.kinf).truncate(prec)
            }
            _ => LaurentSeries::monomial(Fe(label as u8), 0),
        }
    }

    /// Series of `Σ r_e π^e` from its digits, known below `prec`.
    pub fn digits_series(&self, terms: &[(i64, usize)], prec: i64) -> LaurentSeries {
        let mut acc = LaurentSeries::zero();
        for &(e, label) in terms {
            if e >= prec {
                continue;
            }
            acc = acc.add(&self.rep_series(label, prec - e).shift(e), &self.kinf);
        }
        if self.kind == BackendKind::RationalDelta2 && !terms.is_empty() {
            acc.truncate(prec)
        } else {
            acc
        }
    }

    /// `Σ r_e π^e` as an exact element of `K`.
    pub fn digits_element(&self, terms: &[(i64, usize)]) -> KElement {
        let mut acc = KElement::zero();
        for &(e, label) in terms {
            let t = self.mul(&self.residue_rep(label), &self.pi_pow(e));
            acc = self.add(&acc, &t);
        }
        acc
    }

    /// The `ℛ`-digits of a series below `prec`. In `δ = 1` these are its
    /// coefficients; otherwise digits are peeled off one at a time.
    pub fn digits_of_series(&self, s: &LaurentSeries, prec: i64) -> Vec<(i64, usize)> {
        assert!(prec <= s.precision(), "series known only below {}", s.precision());
        if self.kind != BackendKind::RationalDelta2 {
            return s.terms().filter(|&(e, _)| e < prec).map(|(e, c)| (e, c.index())).collect();
        }
        let kinf = &self.kinf;
        let mut rest = s.truncate(prec);
        let mut out = Vec::new();
        while let Some(e) = rest.valuation() {
            let label = rest.leading_coefficient().index();
            out.push((e, label));
            let r = self.rep_series(label, prec - e).shift(e);
            rest = rest.sub(&r, kinf).truncate(prec);
        }
        out
    }

    /// `laurent(z, precision)`: the `ℛ`-digits of `z` below `precision`,
    /// computed through the series embedding.
    pub fn laurent(&self, z: &KElement, precision: i64) -> RExpansion {
        let valuation = self.valuation(z);
        match valuation {
            Some(v) if v < precision => {
                let s = self.series(z, precision);
                RExpansion { valuation, terms: self.digits_of_series(&s, precision), precision }
            }
            _ => RExpansion { valuation, terms: Vec::new(), precision },
        }
    }

    /// Same digits as [`Backend::laurent`], computed by exact arithmetic in
    /// `K`: repeatedly subtract `r π^e` for the residue `r` of the leading
    /// term.
    pub fn laurent_exact(&self, z: &KElement, precision: i64) -> Result<RExpansion> {
        let valuation = self.valuation(z);
        let mut rest = z.clone();
        let mut terms = Vec::new();
        while let Some(e) = self.valuation(&rest) {
            if e >= precision {
                break;
            }
            let c = self.leading_coefficient(&rest)?;
            let label = c.index();
            let r = self.mul(&self.residue_rep(label), &self.pi_pow(e));
            let next = self.sub(&rest, &r);
            if self.valuation(&next).is_some_and(|nv| nv <= e) {
                return Err(Error::violation(
                    "digit expansion",
                    format!("subtracting the leading digit at {e} did not raise the valuation"),
                ));
            }
            terms.push((e, label));
            rest = next;
        }
        Ok(RExpansion { valuation, terms, precision })
    }

    /// The residue in `k∞` of an element of `O` (`ν ≥ 0`).
    pub fn residue(&self, z: &KElement) -> Result<Fe> {
        match self.valuation(z) {
            None => Ok(Fe::ZERO),
            Some(v) if v > 0 => Ok(Fe::ZERO),
            Some(0) => self.leading_coefficient(z),
            Some(v) => Err(Error::Domain(format!("residue of an element of valuation {v}"))),
        }
    }

    /// The residue field with access to `k` as base.
    pub fn kinf(&self) -> &FiniteField {
        &self.kinf
    }
}
