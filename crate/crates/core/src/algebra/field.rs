//! Table-driven finite fields of order at most 81.
//!
//! Every field is a finite set of `q` labels `0..q`. A prime field labels its
//! residues directly. An extension `B[w]/(m(w))` labels `c_0 + c_1 w + ...`
//! by the base-`|B|` integer `c_0 + c_1 |B| + ...`, so the coordinates of an
//! element over its base are its digits and the base field embeds as the
//! labels `0..|B|`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest field order supported.
pub const MAX_ORDER: usize = 81;

/// An element of a [`FiniteField`], stored as its label.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Fe(pub u8);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Conway polynomials (lowest coefficient first, monic) for the proper prime
/// powers up to 81.
const CONWAY: &[(usize, u32, &[u8])] = &[
    (4, 2, &[1, 1, 1]),
    (8, 2, &[1, 1, 0, 1]),
    (16, 2, &[1, 1, 0, 0, 1]),
    (32, 2, &[1, 0, 1, 0, 0, 1]),
    (64, 2, &[1, 1, 0, 1, 1, 0, 1]),
    (9, 3, &[2, 2, 1]),
    (27, 3, &[1, 2, 0, 1]),
    (81, 3, &[2, 0, 0, 2, 1]),
    (25, 5, &[2, 4, 1]),
    (49, 7, &[3, 6, 1]),
];

/// Returns `(p, n)` with `q = p^n`, or `None` if `q` is not a prime power.
pub fn prime_power(q: usize) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    let (mut m, mut n) = (q, 0);
    while m % p == 0 {
        m /= p;
        n += 1;
    }
    (m == 1).then_some((p as u32, n))
}

/// The default defining polynomial of `F_q` over its prime field.
pub fn conway_polynomial(q: usize) -> Option<Vec<u8>> {
    CONWAY
        .iter()
        .find(|(order, _, _)| *order == q)
        .map(|(_, _, coeffs)| coeffs.to_vec())
}

#[derive(Clone)]
pub struct FiniteField {
    order: usize,
    characteristic: u32,
    /// Order of the field this one was built over (itself for a prime field).
    base_order: usize,
    /// Degree over `base_order`.
    ext_degree: u32,
    /// Defining polynomial over the base, as base labels; empty for prime fields.
    modulus: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField")
            .field("order", &self.order)
            .field("characteristic", &self.characteristic)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
            && self.base_order == other.base_order
            && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

impl FiniteField {
    /// `F_q` for a prime power `q <= 81`, using the Conway polynomial when
    /// `q` is not prime.
    pub fn new(q: usize) -> Result<Self> {
        let (p, n) = prime_power(q)
            .ok_or_else(|| Error::Config(format!("{q} is not a prime power")))?;
        if q > MAX_ORDER {
            return Err(Error::Config(format!("field order {q} exceeds {MAX_ORDER}")));
        }
        let prime = Self::prime(p)?;
        if n == 1 {
            return Ok(prime);
        }
        let modulus = conway_polynomial(q).expect("every prime power <= 81 has a table entry");
        let modulus: Vec<Fe> = modulus.into_iter().map(Fe).collect();
        prime.extension(&modulus)
    }

    /// `F_q` with an explicit defining polynomial over the prime field.
    pub fn with_modulus(q: usize, modulus: &[u8]) -> Result<Self> {
        let (p, n) = prime_power(q)
            .ok_or_else(|| Error::Config(format!("{q} is not a prime power")))?;
        if modulus.len() != n as usize + 1 {
            return Err(Error::Config(format!(
                "extension modulus for q={q} must have degree {n}"
            )));
        }
        let prime = Self::prime(p)?;
        let modulus: Vec<Fe> = modulus.iter().map(|&c| Fe(c)).collect();
        let field = prime.extension(&modulus)?;
        debug_assert_eq!(field.order(), q);
        Ok(field)
    }

    pub fn prime(p: u32) -> Result<Self> {
        if prime_power(p as usize) != Some((p, 1)) {
            return Err(Error::Config(format!("{p} is not prime")));
        }
        if p as usize > MAX_ORDER {
            return Err(Error::Config(format!("field order {p} exceeds {MAX_ORDER}")));
        }
        let q = p as usize;
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = ((a + b) % q) as u8;
                mul[a * q + b] = ((a * b) % q) as u8;
            }
        }
        Ok(Self::from_tables(q, p, q, 1, Vec::new(), add, mul))
    }

    /// The extension `self[w]/(modulus(w))`. Fails unless `modulus` is monic
    /// and irreducible, which is checked by testing for zero divisors.
    pub fn extension(&self, modulus: &[Fe]) -> Result<Self> {
        let d = modulus.len().saturating_sub(1);
        if d < 1 || modulus[d] != Fe::ONE {
            return Err(Error::Config("extension modulus must be monic of degree >= 1".into()));
        }
        if modulus.iter().any(|c| c.index() >= self.order) {
            return Err(Error::Config("modulus coefficient outside the base field".into()));
        }
        let b = self.order;
        let q = b.checked_pow(d as u32).filter(|&q| q <= MAX_ORDER).ok_or_else(|| {
            Error::Config(format!("extension of order {b}^{d} exceeds {MAX_ORDER}"))
        })?;
        let digits = |mut i: usize| -> Vec<Fe> {
            let mut v = Vec::with_capacity(d);
            for _ in 0..d {
                v.push(Fe((i % b) as u8));
                i /= b;
            }
            v
        };
        let label = |v: &[Fe]| -> usize { v.iter().rev().fold(0, |acc, c| acc * b + c.index()) };
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for i in 0..q {
            let x = digits(i);
            for j in 0..q {
                let y = digits(j);
                let s: Vec<Fe> = x.iter().zip(&y).map(|(&u, &v)| self.add(u, v)).collect();
                add[i * q + j] = label(&s) as u8;
                let mut prod = vec![Fe::ZERO; 2 * d - 1];
                for (k, &u) in x.iter().enumerate() {
                    for (l, &v) in y.iter().enumerate() {
                        prod[k + l] = self.add(prod[k + l], self.mul(u, v));
                    }
                }
                for top in (d..prod.len()).rev() {
                    let c = prod[top];
                    if c.is_zero() {
                        continue;
                    }
                    for (k, &m) in modulus.iter().enumerate().take(d) {
                        let idx = top - d + k;
                        prod[idx] = self.sub(prod[idx], self.mul(c, m));
                    }
                    prod[top] = Fe::ZERO;
                }
                mul[i * q + j] = label(&prod[..d]) as u8;
            }
        }
        for i in 1..q {
            if (1..q).any(|j| mul[i * q + j] == 0) {
                return Err(Error::Config(format!(
                    "modulus {:?} is reducible over F_{b}",
                    modulus.iter().map(|c| c.0).collect::<Vec<_>>()
                )));
            }
        }
        let modulus = modulus.iter().map(|c| c.0).collect();
        Ok(Self::from_tables(q, self.characteristic, b, d as u32, modulus, add, mul))
    }

    fn from_tables(
        order: usize,
        characteristic: u32,
        base_order: usize,
        ext_degree: u32,
        modulus: Vec<u8>,
        add: Vec<u8>,
        mul: Vec<u8>,
    ) -> Self {
        let q = order;
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u8;
            }
        }
        Self { order, characteristic, base_order, ext_degree, modulus, add, mul, neg, inv }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    /// Order of the field this one was constructed over.
    pub fn base_order(&self) -> usize {
        self.base_order
    }

    /// Degree over the field it was constructed over.
    pub fn ext_degree(&self) -> u32 {
        self.ext_degree
    }

    /// Defining polynomial over the base (empty for a prime field).
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// The field generator `w` (the prime-field element 1 for prime fields).
    pub fn generator(&self) -> Fe {
        if self.ext_degree == 1 && self.modulus.is_empty() {
            Fe::ONE
        } else {
            Fe(self.base_order as u8)
        }
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.add[a.index() * self.order + b.index()])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.mul[a.index() * self.order + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.index()])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            Err(Error::Domain("inverse of zero in a finite field".into()))
        } else {
            Ok(Fe(self.inv[a.index()]))
        }
    }

    /// Inverse of a nonzero element; panics on zero.
    #[inline]
    pub fn inv_nz(&self, a: Fe) -> Fe {
        assert!(!a.is_zero(), "inverse of zero");
        Fe(self.inv[a.index()])
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `x ↦ x^p`.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.characteristic as u64)
    }

    /// Square root, when one exists.
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        self.elements().find(|&r| self.mul(r, r) == a)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        let p = self.characteristic as i64;
        let mut r = Fe::ZERO;
        let residue = n.rem_euclid(p);
        for _ in 0..residue {
            r = self.add(r, Fe::ONE);
        }
        r
    }

    /// Element with label `i`; fails if `i >= q`.
    pub fn element(&self, i: usize) -> Result<Fe> {
        if i < self.order {
            Ok(Fe(i as u8))
        } else {
            Err(Error::Config(format!("{i} is not an element label of F_{}", self.order)))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.order as u16).map(|i| Fe(i as u8))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Fe> + Clone {
        (1..self.order as u16).map(|i| Fe(i as u8))
    }

    /// Coordinates over the base field (digits of the label).
    pub fn coordinates(&self, a: Fe) -> Vec<Fe> {
        let b = self.base_order;
        let mut i = a.index();
        (0..self.ext_degree)
            .map(|_| {
                let c = Fe((i % b) as u8);
                i /= b;
                c
            })
            .collect()
    }

    /// Inverse of [`FiniteField::coordinates`].
    pub fn from_coordinates(&self, coords: &[Fe]) -> Fe {
        let b = self.base_order;
        Fe(coords.iter().rev().fold(0usize, |acc, c| acc * b + c.index()) as u8)
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Fe) -> u64 {
        assert!(!a.is_zero());
        let mut x = a;
        let mut k = 1;
        while x != Fe::ONE {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Number of roots in the field of `t^2 + b t + c`, with the roots.
    pub fn quadratic_roots(&self, b: Fe, c: Fe) -> Vec<Fe> {
        self.elements()
            .filter(|&t| self.add(self.add(self.mul(t, t), self.mul(b, t)), c).is_zero())
            .collect()
    }
}
