//! Truncated Laurent series in the local parameter `π` with coefficients in
//! the residue field `k∞`.

use crate::algebra::{Fe, FiniteField};

/// Sentinel precision of a series known exactly (a Laurent polynomial).
pub const EXACT: i64 = i64::MAX / 4;

/// `Σ_{e ≥ start} c_e π^e`, known for exponents `< prec`.
///
/// Invariants: `coeffs[i]` is the coefficient at `start + i`; coefficients at
/// exponents in `start + coeffs.len() .. prec` are zero; if `coeffs` is
/// nonempty its first entry is nonzero, so `start` is the valuation. A series
/// with no coefficients is zero to its precision and has `start = prec`
/// (or `start = 0` when exact).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    start: i64,
    coeffs: Vec<Fe>,
    prec: i64,
}

impl LaurentSeries {
    /// The exact zero series.
    pub fn zero() -> Self {
        LaurentSeries { start: 0, coeffs: Vec::new(), prec: EXACT }
    }

    /// Zero known up to (not including) exponent `prec`.
    pub fn zero_to(prec: i64) -> Self {
        LaurentSeries { start: prec, coeffs: Vec::new(), prec }
    }

    /// The exact monomial `c π^e`.
    pub fn monomial(c: Fe, e: i64) -> Self {
        Self::new(e, vec![c], EXACT)
    }

    /// Builds a series from coefficients starting at `start`, truncated to
    /// `prec` and normalized.
    pub fn new(start: i64, mut coeffs: Vec<Fe>, prec: i64) -> Self {
        let keep = (prec - start).clamp(0, coeffs.len() as i64) as usize;
        coeffs.truncate(keep);
        let mut s = LaurentSeries { start, coeffs, prec };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.start = if self.prec == EXACT { 0 } else { self.prec };
            }
            Some(i) => {
                if i > 0 {
                    self.coeffs.drain(..i);
                    self.start += i as i64;
                }
                while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                    self.coeffs.pop();
                }
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    /// Exponents below this are known.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Lower bound for the valuation: the valuation itself when nonzero to
    /// precision, otherwise the precision.
    pub fn start(&self) -> i64 {
        self.start
    }

    /// Exact valuation, if the series is nonzero to its precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient at `e`; panics if `e` is not below the precision.
    pub fn coeff(&self, e: i64) -> Fe {
        assert!(e < self.prec, "coefficient {e} beyond precision {}", self.prec);
        if e < self.start {
            return Fe::ZERO;
        }
        self.coeffs.get((e - self.start) as usize).copied().unwrap_or(Fe::ZERO)
    }

    /// Leading coefficient; panics on a series that is zero to precision.
    pub fn leading_coefficient(&self) -> Fe {
        self.coeffs[0]
    }

    /// Nonzero terms `(e, c)` in increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Fe)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, &c)| (self.start + i as i64, c))
    }

    /// Whether both series are known and equal at every exponent below `prec`.
    pub fn agrees_below(&self, o: &Self, prec: i64) -> bool {
        if prec > self.prec || prec > o.prec {
            return false;
        }
        let lo = self.start.min(o.start);
        (lo..prec).all(|e| self.coeff(e) == o.coeff(e))
    }

    /// Drops everything at exponent `>= prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::new(self.start, self.coeffs.clone(), prec)
    }

    /// Multiplication by `π^e`.
    pub fn shift(&self, e: i64) -> Self {
        LaurentSeries {
            start: if self.coeffs.is_empty() && self.is_exact() { 0 } else { self.start + e },
            coeffs: self.coeffs.clone(),
            prec: if self.is_exact() { EXACT } else { self.prec + e },
        }
    }

    pub fn scale(&self, c: Fe, k: &FiniteField) -> Self {
        if c.is_zero() {
            return if self.is_exact() { Self::zero() } else { Self::zero_to(self.prec) };
        }
        LaurentSeries {
            start: self.start,
            coeffs: self.coeffs.iter().map(|&x| k.mul(c, x)).collect(),
            prec: self.prec,
        }
    }

    pub fn neg(&self, k: &FiniteField) -> Self {
        LaurentSeries {
            start: self.start,
            coeffs: self.coeffs.iter().map(|&x| k.neg(x)).collect(),
            prec: self.prec,
        }
    }

    pub fn add(&self, o: &Self, k: &FiniteField) -> Self {
        let prec = self.prec.min(o.prec);
        if self.coeffs.is_empty() {
            return o.truncate(prec);
        }
        if o.coeffs.is_empty() {
            return self.truncate(prec);
        }
        let start = self.start.min(o.start);
        let end = (self.start + self.coeffs.len() as i64)
            .max(o.start + o.coeffs.len() as i64)
            .min(prec);
        let len = (end - start).max(0) as usize;
        let mut coeffs = vec![Fe::ZERO; len];
        for (e, c) in self.terms().chain(o.terms()) {
            if e < end {
                let i = (e - start) as usize;
                coeffs[i] = k.add(coeffs[i], c);
            }
        }
        Self::new(start, coeffs, prec)
    }

    pub fn sub(&self, o: &Self, k: &FiniteField) -> Self {
        self.add(&o.neg(k), k)
    }

    pub fn mul(&self, o: &Self, k: &FiniteField) -> Self {
        if (self.is_exact() && self.coeffs.is_empty()) || (o.is_exact() && o.coeffs.is_empty()) {
            return Self::zero();
        }
        let prec = if self.is_exact() && o.is_exact() {
            EXACT
        } else {
            self.prec.saturating_add(o.start).min(o.prec.saturating_add(self.start)).min(EXACT)
        };
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return if prec == EXACT { Self::zero() } else { Self::zero_to(prec) };
        }
        let start = self.start + o.start;
        let full = self.coeffs.len() + o.coeffs.len() - 1;
        let len = full.min((prec - start).max(0) as usize);
        let mut coeffs = vec![Fe::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] = k.add(coeffs[i + j], k.mul(a, b));
            }
        }
        Self::new(start, coeffs, prec)
    }

    /// Multiplicative inverse with relative precision `rel` (capped by the
    /// relative precision of `self`); exact for an exact monomial.
    pub fn inv(&self, rel: i64, k: &FiniteField) -> Self {
        assert!(!self.coeffs.is_empty(), "inverse of a series that is zero to precision");
        let own_rel = if self.is_exact() { EXACT } else { self.prec - self.start };
        if self.is_exact() && self.coeffs.len() == 1 {
            return Self::monomial(k.inv_nz(self.coeffs[0]), -self.start);
        }
        let rel = rel.min(own_rel).max(1);
        let n = rel as usize;
        let c0inv = k.inv_nz(self.coeffs[0]);
        let mut out = vec![Fe::ZERO; n];
        out[0] = c0inv;
        for m in 1..n {
            let mut acc = Fe::ZERO;
            for j in 1..=m.min(self.coeffs.len() - 1) {
                acc = k.add(acc, k.mul(self.coeffs[j], out[m - j]));
            }
            out[m] = k.neg(k.mul(acc, c0inv));
        }
        Self::new(-self.start, out, -self.start + rel)
    }

    /// `self^e` for `e >= 0`.
    pub fn pow(&self, e: u32, k: &FiniteField) -> Self {
        let mut acc = Self::monomial(Fe::ONE, 0);
        for _ in 0..e {
            acc = acc.mul(self, k);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(start: i64, c: &[u8], prec: i64) -> LaurentSeries {
        LaurentSeries::new(start, c.iter().map(|&x| Fe(x)).collect(), prec)
    }

    #[test]
    fn normalization_tracks_valuation() {
        let a = s(-2, &[0, 0, 1, 2], 5);
        assert_eq!(a.valuation(), Some(0));
        assert_eq!(a.coeff(1), Fe(2));
        assert_eq!(a.coeff(4), Fe(0));
        let z = s(0, &[0, 0], 3);
        assert_eq!(z.valuation(), None);
        assert_eq!(z.start(), 3);
    }

    #[test]
    fn product_precision_is_the_weaker_side() {
        let k = FiniteField::new(3).unwrap();
        let a = s(-1, &[1, 1], 4);
        let b = LaurentSeries::monomial(Fe(2), 2);
        let p = a.mul(&b, &k);
        assert_eq!(p.precision(), 6);
        assert_eq!(p.valuation(), Some(1));
    }

    #[test]
    fn inverse_of_geometric_series() {
        let k = FiniteField::new(2).unwrap();
        // 1 + π has inverse 1 + π + π² + ...
        let a = s(0, &[1, 1], EXACT);
        let inv = a.inv(6, &k);
        assert_eq!(inv.precision(), 6);
        for e in 0..6 {
            assert_eq!(inv.coeff(e), Fe(1));
        }
        let one = a.mul(&inv, &k);
        assert_eq!(one.truncate(6), s(0, &[1], 6));
    }

    #[test]
    fn cancellation_lowers_nothing_below_precision() {
        let k = FiniteField::new(5).unwrap();
        let a = s(0, &[1, 2, 3], 3);
        let d = a.sub(&a, &k);
        assert!(d.is_zero());
        assert_eq!(d.precision(), 3);
    }
}
