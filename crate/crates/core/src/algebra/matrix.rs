//! 2×2 matrices over any commutative ring given by a [`Ring`] context, and the
//! eigenvalue classification of their characteristic polynomials over `F_q`.

use serde::Serialize;

use super::field::{Fe, FiniteField};
use crate::error::{Error, Result};

/// Arithmetic context for ring elements that do not carry their own ring.
pub trait Ring {
    type Elem: Clone + PartialEq;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
}

impl Ring for FiniteField {
    type Elem = Fe;
    fn zero(&self) -> Fe {
        Fe::ZERO
    }
    fn one(&self) -> Fe {
        Fe::ONE
    }
    fn add(&self, a: &Fe, b: &Fe) -> Fe {
        FiniteField::add(self, *a, *b)
    }
    fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        FiniteField::sub(self, *a, *b)
    }
    fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        FiniteField::mul(self, *a, *b)
    }
    fn neg(&self, a: &Fe) -> Fe {
        FiniteField::neg(self, *a)
    }
    fn is_zero(&self, a: &Fe) -> bool {
        a.is_zero()
    }
}

/// The matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Matrix2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Clone + PartialEq> Matrix2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Matrix2 { a, b, c, d }
    }

    pub fn identity<R: Ring<Elem = T>>(r: &R) -> Self {
        Matrix2::new(r.one(), r.zero(), r.zero(), r.one())
    }

    pub fn scalar<R: Ring<Elem = T>>(s: T, r: &R) -> Self {
        Matrix2::new(s.clone(), r.zero(), r.zero(), s)
    }

    pub fn entries(&self) -> [&T; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Matrix2<U> {
        Matrix2 { a: f(&self.a), b: f(&self.b), c: f(&self.c), d: f(&self.d) }
    }

    pub fn det<R: Ring<Elem = T>>(&self, r: &R) -> T {
        r.sub(&r.mul(&self.a, &self.d), &r.mul(&self.b, &self.c))
    }

    pub fn trace<R: Ring<Elem = T>>(&self, r: &R) -> T {
        r.add(&self.a, &self.d)
    }

    pub fn mul<R: Ring<Elem = T>>(&self, o: &Self, r: &R) -> Self {
        let dot = |x: &T, y: &T, z: &T, w: &T| r.add(&r.mul(x, y), &r.mul(z, w));
        Matrix2 {
            a: dot(&self.a, &o.a, &self.b, &o.c),
            b: dot(&self.a, &o.b, &self.b, &o.d),
            c: dot(&self.c, &o.a, &self.d, &o.c),
            d: dot(&self.c, &o.b, &self.d, &o.d),
        }
    }

    pub fn add<R: Ring<Elem = T>>(&self, o: &Self, r: &R) -> Self {
        Matrix2 {
            a: r.add(&self.a, &o.a),
            b: r.add(&self.b, &o.b),
            c: r.add(&self.c, &o.c),
            d: r.add(&self.d, &o.d),
        }
    }

    pub fn scale<R: Ring<Elem = T>>(&self, s: &T, r: &R) -> Self {
        self.map(|x| r.mul(s, x))
    }

    /// `[[d, -b], [-c, a]]`, so that `M · adj(M) = det(M) · I`.
    pub fn adjugate<R: Ring<Elem = T>>(&self, r: &R) -> Self {
        Matrix2::new(self.d.clone(), r.neg(&self.b), r.neg(&self.c), self.a.clone())
    }

    pub fn is_zero<R: Ring<Elem = T>>(&self, r: &R) -> bool {
        self.entries().iter().all(|x| r.is_zero(x))
    }

    /// `(ρ, τ)` with characteristic polynomial `X² + ρX + τ`, i.e. `ρ = −tr`
    /// and `τ = det`.
    pub fn char_poly<R: Ring<Elem = T>>(&self, r: &R) -> (T, T) {
        (r.neg(&self.trace(r)), self.det(r))
    }
}

impl Matrix2<Fe> {
    /// Inverse over a field.
    pub fn inverse(&self, k: &FiniteField) -> Result<Self> {
        let det = self.det(k);
        let inv = k.inv(det).map_err(|_| Error::Domain("singular matrix".into()))?;
        Ok(self.adjugate(k).scale(&inv, k))
    }
}

/// Splitting behaviour of `X² − tr·X + det` over `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EigenClass {
    DistinctInK,
    RepeatedInK,
    NotInK,
}

/// Classifies `X² − trace·X + det` by exhaustive root search over `k`.
pub fn eigen_class(trace: Fe, det: Fe, k: &FiniteField) -> Result<EigenClass> {
    if det.is_zero() {
        return Err(Error::Domain("eigen_class of a singular matrix".into()));
    }
    let roots: Vec<Fe> = k
        .elements()
        .filter(|&x| {
            let v = k.add(k.sub(k.mul(x, x), k.mul(trace, x)), det);
            v.is_zero()
        })
        .collect();
    Ok(match roots.len() {
        0 => EigenClass::NotInK,
        1 => EigenClass::RepeatedInK,
        _ => EigenClass::DistinctInK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_trace_two_det_one() {
        let k = FiniteField::new(5).unwrap();
        let i = Matrix2::identity(&k);
        assert_eq!(i.trace(&k), Fe(2));
        assert_eq!(i.det(&k), Fe(1));
        assert_eq!(eigen_class(Fe(2), Fe(1), &k).unwrap(), EigenClass::RepeatedInK);
    }

    #[test]
    fn companion_matrix_has_expected_char_poly() {
        let k = FiniteField::new(7).unwrap();
        let (rho, tau) = (Fe(3), Fe(5));
        let m = Matrix2::new(Fe::ZERO, k.neg(Fe::ONE), tau, k.neg(rho));
        assert_eq!(m.char_poly(&k), (rho, tau));
    }

    #[test]
    fn irreducible_quadratic_over_f2() {
        let k = FiniteField::new(2).unwrap();
        // X² + X + 1: trace 1 (= −1), det 1
        assert_eq!(eigen_class(Fe(1), Fe(1), &k).unwrap(), EigenClass::NotInK);
        assert!(eigen_class(Fe(1), Fe(0), &k).is_err());
    }

    #[test]
    fn classification_matches_brute_force_over_f3() {
        let k = FiniteField::new(3).unwrap();
        for tr in k.elements() {
            for det in k.nonzero() {
                let mut roots = 0;
                for x in 0..3u8 {
                    if (x as u32 * x as u32 + 3 * 3 - (tr.0 as u32 * x as u32) % 3 + det.0 as u32) % 3 == 0 {
                        roots += 1;
                    }
                }
                let expected = match roots {
                    0 => EigenClass::NotInK,
                    1 => EigenClass::RepeatedInK,
                    _ => EigenClass::DistinctInK,
                };
                assert_eq!(eigen_class(tr, det, &k).unwrap(), expected);
            }
        }
    }

    #[test]
    fn inverse_over_field() {
        let k = FiniteField::new(4).unwrap();
        let m = Matrix2::new(Fe(2), Fe(1), Fe(3), Fe(1));
        let inv = m.inverse(&k).unwrap();
        assert_eq!(m.mul(&inv, &k), Matrix2::identity(&k));
    }
}
