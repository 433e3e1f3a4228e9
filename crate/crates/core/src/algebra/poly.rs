//! Dense univariate polynomials over a [`FiniteField`].

use super::field::{Fe, FiniteField};

/// Coefficients lowest degree first. The leading coefficient is nonzero; the
/// zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<Fe>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![Fe::ONE] }
    }

    pub fn constant(c: Fe) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c · t^deg`.
    pub fn monomial(c: Fe, deg: usize) -> Self {
        let mut coeffs = vec![Fe::ZERO; deg + 1];
        coeffs[deg] = c;
        Self::from_coeffs(coeffs)
    }

    /// The variable `t`.
    pub fn var() -> Self {
        Self::monomial(Fe::ONE, 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Fe::ONE
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg 0 = -1` as a sentinel; only used where the zero case is
    /// excluded or harmless.
    pub fn deg_i64(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lead(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Poly, k: &FiniteField) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| k.add(self.coeff(i), other.coeff(i))).collect();
        Self::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Poly, k: &FiniteField) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| k.sub(self.coeff(i), other.coeff(i))).collect();
        Self::from_coeffs(coeffs)
    }

    pub fn neg(&self, k: &FiniteField) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|&c| k.neg(c)).collect() }
    }

    pub fn scale(&self, c: Fe, k: &FiniteField) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|&x| k.mul(x, c)).collect() }
    }

    pub fn mul(&self, other: &Poly, k: &FiniteField) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = k.add(out[i + j], k.mul(a, b));
            }
        }
        Self::from_coeffs(out)
    }

    /// Multiplication by `t^n`.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Fe::ZERO; n];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    pub fn pow(&self, mut e: u32, k: &FiniteField) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, k);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, k);
            }
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, divisor: &Poly, k: &FiniteField) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        if self.coeffs.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let inv_lead = k.inv_nz(divisor.lead());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Fe::ZERO; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = rem[top];
            if c.is_zero() {
                continue;
            }
            let f = k.mul(c, inv_lead);
            quot[top - dd] = f;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                let idx = top - dd + j;
                rem[idx] = k.sub(rem[idx], k.mul(f, dc));
            }
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn rem(&self, divisor: &Poly, k: &FiniteField) -> Poly {
        self.divrem(divisor, k).1
    }

    /// Exact quotient; debug-asserts the remainder vanishes.
    pub fn div_exact(&self, divisor: &Poly, k: &FiniteField) -> Poly {
        let (q, r) = self.divrem(divisor, k);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self, k: &FiniteField) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(k.inv_nz(self.lead()), k)
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &Poly, k: &FiniteField) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, k);
            a = b;
            b = r;
        }
        a.monic(k)
    }

    pub fn eval(&self, x: Fe, k: &FiniteField) -> Fe {
        self.coeffs.iter().rev().fold(Fe::ZERO, |acc, &c| k.add(k.mul(acc, x), c))
    }

    /// Largest `m` with `p^m | self`, together with the cofactor.
    pub fn split_power(&self, p: &Poly, k: &FiniteField) -> (u32, Poly) {
        assert!(!self.is_zero());
        let mut m = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divrem(p, k);
            if !r.is_zero() {
                return (m, cur);
            }
            cur = q;
            m += 1;
        }
    }

    /// Whether the polynomial has no factor of degree in `1..=deg/2`, checked by
    /// trial division against every monic polynomial of that degree.
    pub fn is_irreducible(&self, k: &FiniteField) -> bool {
        let Some(d) = self.degree() else { return false };
        if d == 0 {
            return false;
        }
        let q = k.order();
        for e in 1..=d / 2 {
            let count = q.pow(e as u32);
            for idx in 0..count {
                let mut coeffs = Vec::with_capacity(e + 1);
                let mut i = idx;
                for _ in 0..e {
                    coeffs.push(Fe((i % q) as u8));
                    i /= q;
                }
                coeffs.push(Fe::ONE);
                let cand = Poly::from_coeffs(coeffs);
                if self.rem(&cand, k).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: usize) -> FiniteField {
        FiniteField::new(q).unwrap()
    }

    fn p(c: &[u8]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| Fe(x)).collect())
    }

    #[test]
    fn degree_of_product_adds() {
        let k = f(3);
        let a = p(&[1, 2, 1]);
        let b = p(&[2, 0, 0, 1]);
        assert_eq!(a.mul(&b, &k).degree(), Some(5));
    }

    #[test]
    fn divrem_reconstructs() {
        let k = f(5);
        let a = p(&[1, 2, 3, 4, 1, 2]);
        let b = p(&[3, 0, 1]);
        let (q, r) = a.divrem(&b, &k);
        assert!(r.degree().unwrap_or(0) < 2);
        assert_eq!(q.mul(&b, &k).add(&r, &k), a);
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let k = f(7);
        let common = p(&[3, 1]);
        let a = common.mul(&p(&[1, 1, 1]), &k);
        let b = common.mul(&p(&[5, 2]), &k);
        assert_eq!(a.gcd(&b, &k), common);
    }

    #[test]
    fn irreducibility_over_small_fields() {
        assert!(p(&[1, 1, 1]).is_irreducible(&f(2)));
        assert!(!p(&[1, 0, 1]).is_irreducible(&f(2)));
        assert!(p(&[1, 0, 1]).is_irreducible(&f(3)));
        assert!(!p(&[2, 0, 1]).is_irreducible(&f(3)));
    }
}
