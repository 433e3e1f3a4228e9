use super::field::{Fe, FiniteField};
use super::poly::Poly;
use crate::error::{Error, Result};

/// A rational function `num/den` in one variable, always reduced with a monic
/// denominator. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }

    pub fn constant(c: Fe) -> Self {
        RatFunc { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    /// Reduces `num/den`; fails on a zero denominator.
    pub fn new(num: Poly, den: Poly, k: &FiniteField) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("rational function with zero denominator".into()));
        }
        Ok(Self::reduce(num, den, k))
    }

    fn reduce(num: Poly, den: Poly, k: &FiniteField) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_constant() {
            let c = k.inv_nz(den.lead());
            return RatFunc { num: num.scale(c, k), den: Poly::one() };
        }
        let g = num.gcd(&den, k);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g, k), den.div_exact(&g, k))
        };
        let c = k.inv_nz(den.lead());
        RatFunc { num: num.scale(c, k), den: den.scale(c, k) }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The constant value, if this is a constant.
    pub fn as_constant(&self) -> Option<Fe> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    /// `deg num - deg den`; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.num.deg_i64() - self.den.deg_i64())
    }

    /// Ratio of leading coefficients of numerator and denominator.
    pub fn leading_coefficient(&self) -> Fe {
        self.num.lead()
    }

    pub fn add(&self, other: &Self, k: &FiniteField) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = self.num.add(&other.num, k);
            return if self.den.is_one() {
                RatFunc { num, den: Poly::one() }
            } else {
                Self::reduce(num, self.den.clone(), k)
            };
        }
        let num = self.num.mul(&other.den, k).add(&other.num.mul(&self.den, k), k);
        let den = self.den.mul(&other.den, k);
        Self::reduce(num, den, k)
    }

    pub fn neg(&self, k: &FiniteField) -> Self {
        RatFunc { num: self.num.neg(k), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self, k: &FiniteField) -> Self {
        self.add(&other.neg(k), k)
    }

    pub fn mul(&self, other: &Self, k: &FiniteField) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc { num: self.num.mul(&other.num, k), den: Poly::one() };
        }
        // cross-cancel before multiplying to keep degrees small
        let g1 = self.num.gcd(&other.den, k);
        let g2 = other.num.gcd(&self.den, k);
        let n1 = self.num.div_exact(&g1, k);
        let d2 = other.den.div_exact(&g1, k);
        let n2 = other.num.div_exact(&g2, k);
        let d1 = self.den.div_exact(&g2, k);
        let num = n1.mul(&n2, k);
        let den = d1.mul(&d2, k);
        let c = k.inv_nz(den.lead());
        RatFunc { num: num.scale(c, k), den: den.scale(c, k) }
    }

    pub fn scale(&self, c: Fe, k: &FiniteField) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc { num: self.num.scale(c, k), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &Poly, k: &FiniteField) -> Self {
        self.mul(&RatFunc::from_poly(p.clone()), k)
    }

    pub fn inv(&self, k: &FiniteField) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of the zero rational function".into()));
        }
        let c = k.inv_nz(self.num.lead());
        Ok(RatFunc { num: self.den.scale(c, k), den: self.num.scale(c, k) })
    }

    pub fn div(&self, other: &Self, k: &FiniteField) -> Result<Self> {
        Ok(self.mul(&other.inv(k)?, k))
    }

    pub fn pow(&self, e: i64, k: &FiniteField) -> Self {
        let base = if e < 0 { self.inv(k).expect("negative power of zero") } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        RatFunc { num: base.num.pow(e, k), den: base.den.pow(e, k) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[u8]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| Fe(x)).collect())
    }

    #[test]
    fn stays_reduced_with_monic_denominator() {
        let k = FiniteField::new(5).unwrap();
        // (t^2 - 1) / (2t - 2) = (t + 1)/2
        let r = RatFunc::new(p(&[4, 0, 1]), p(&[3, 2]), &k).unwrap();
        assert!(r.den().is_one());
        assert_eq!(r.num(), &p(&[3, 3]));
        let s = RatFunc::new(p(&[1]), p(&[1, 3]), &k).unwrap();
        assert_eq!(s.den().lead(), Fe::ONE);
    }

    #[test]
    fn field_operations_agree() {
        let k = FiniteField::new(3).unwrap();
        let a = RatFunc::new(p(&[1, 1]), p(&[2, 0, 1]), &k).unwrap();
        let b = RatFunc::new(p(&[0, 2, 1]), p(&[1, 1]), &k).unwrap();
        let prod = a.mul(&b, &k);
        assert_eq!(prod.div(&b, &k).unwrap(), a);
        assert_eq!(a.add(&b, &k).sub(&b, &k), a);
        assert_eq!(a.mul(&a.inv(&k).unwrap(), &k), RatFunc::one());
        assert!(RatFunc::zero().inv(&k).is_err());
    }
}
