//! The coset model of the Bruhat-Tits tree: vertices `v(n, z)`, adjacency,
//! the action of `GL₂(C)`, and equivalence of vertices under it.

mod space;

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::algebra::{Fe, Matrix2};
use crate::backend::{Backend, KElement};
use crate::error::{Error, Result};

pub use space::{count_invertible, IntegralSpace, UnitResidue};
pub(crate) use space::{combine_matrices, for_each_vector};

/// A 2×2 matrix over `K`.
pub type KMatrix = Matrix2<KElement>;

/// The vertex `v(n, z)`: the coset of `[[π^n, z], [0, 1]]`. Keyed by `n` and
/// the nonzero `ℛ`-digits `(e, label)` of `z` with `e < n`, in increasing `e`.
/// Equal keys are equal vertices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Vertex {
    n: i64,
    digits: Vec<(i64, usize)>,
}

impl Vertex {
    /// `v(0, 0)`.
    pub fn origin() -> Self {
        Vertex { n: 0, digits: Vec::new() }
    }

    /// The vertex with level `n` and the given digits; digits at `e >= n` or
    /// with label 0 are dropped.
    pub fn from_digits(n: i64, digits: impl IntoIterator<Item = (i64, usize)>) -> Self {
        let mut digits: Vec<(i64, usize)> = digits.into_iter().filter(|&(e, r)| e < n && r != 0).collect();
        digits.sort_unstable();
        digits.dedup_by_key(|d| d.0);
        Vertex { n, digits }
    }

    /// `normalize(n, z)`: the canonical key of `v(n, z)`.
    pub fn normalize(bk: &Backend, n: i64, z: &KElement) -> Self {
        Vertex { n, digits: bk.laurent(z, n).terms }
    }

    pub fn level(&self) -> i64 {
        self.n
    }

    /// Vertex type `n mod 2`, preserved by `GL₂(C)`.
    pub fn parity(&self) -> i64 {
        self.n.rem_euclid(2)
    }

    pub fn digits(&self) -> &[(i64, usize)] {
        &self.digits
    }

    /// The canonical `z = Σ r_e π^e`.
    pub fn z(&self, bk: &Backend) -> KElement {
        bk.digits_element(&self.digits)
    }

    /// `[[π^n, z], [0, 1]]`.
    pub fn matrix(&self, bk: &Backend) -> KMatrix {
        Matrix2::new(bk.pi_pow(self.n), self.z(bk), KElement::zero(), KElement::one())
    }

    /// `[[π^{-n}, −z π^{-n}], [0, 1]]`.
    pub fn matrix_inverse(&self, bk: &Backend) -> KMatrix {
        let pin = bk.pi_pow(-self.n);
        let z = self.z(bk);
        Matrix2::new(pin.clone(), bk.neg(&bk.mul(&z, &pin)), KElement::zero(), KElement::one())
    }

    /// Number of neighbours, `q^δ + 1`.
    pub fn valence(bk: &Backend) -> usize {
        bk.residue_count() + 1
    }

    /// Neighbour by star label: `u < q^δ` is `v(n+1, z + r_u π^n)` and
    /// `q^δ` is `v(n−1, z)`.
    pub fn neighbor(&self, bk: &Backend, label: usize) -> Vertex {
        let r = bk.residue_count();
        assert!(label <= r, "star label out of range");
        if label == r {
            Vertex::from_digits(self.n - 1, self.digits.iter().copied())
        } else {
            let mut d = self.digits.clone();
            if label != 0 {
                d.push((self.n, label));
            }
            Vertex { n: self.n + 1, digits: d }
        }
    }

    /// All `q^δ + 1` neighbours in label order.
    pub fn neighbors(&self, bk: &Backend) -> Vec<Vertex> {
        (0..Self::valence(bk)).map(|l| self.neighbor(bk, l)).collect()
    }

    /// The star label of `other` if it is adjacent.
    pub fn label_of(&self, bk: &Backend, other: &Vertex) -> Option<usize> {
        let r = bk.residue_count();
        if other.n == self.n - 1 {
            let up = Vertex::from_digits(self.n - 1, self.digits.iter().copied());
            return (&up == other).then_some(r);
        }
        if other.n == self.n + 1 {
            let (head, tail) = other.digits.split_at(other.digits.len().saturating_sub(1));
            return match tail.first() {
                Some(&(e, label)) if e == self.n => (head == self.digits.as_slice()).then_some(label),
                _ => (other.digits == self.digits).then_some(0),
            };
        }
        None
    }

    /// `apply(g, v)`: the vertex `g·v`, by column-reducing
    /// `g·[[π^n, z], [0, 1]]` over `O∞` with the pivot of least valuation in
    /// the bottom row, ties going to the left column.
    pub fn apply(&self, bk: &Backend, g: &KMatrix) -> Result<Vertex> {
        check_unit_det(bk, g)?;
        let z = self.z(bk);
        let cz_d = bk.add(&bk.mul(&g.c, &z), &g.d);
        let vc = bk.valuation(&g.c).map(|v| v + self.n);
        let vr = bk.valuation(&cz_d);
        let left = match (vc, vr) {
            (Some(l), Some(r)) => l <= r,
            (Some(_), None) => true,
            (None, _) => false,
        };
        let (n, zp) = if left {
            let nc = bk.valuation(&g.c).expect("left pivot is nonzero");
            (-self.n - 2 * nc, bk.div(&g.a, &g.c)?)
        } else {
            let nr = vr.ok_or_else(|| Error::Domain("singular matrix in apply".into()))?;
            let num = bk.add(&bk.mul(&g.a, &z), &g.b);
            (self.n - 2 * nr, bk.div(&num, &cz_d)?)
        };
        Ok(Vertex::normalize(bk, n, &zp))
    }

    /// Serialized key `v(n; e1:r1, e2:r2, ...)`.
    pub fn key(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v({};", self.n)?;
        for (i, (e, r)) in self.digits.iter().enumerate() {
            write!(f, "{}{e}:{r}", if i == 0 { " " } else { ", " })?;
        }
        write!(f, ")")
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.key())
    }
}

impl FromStr for Vertex {
    type Err = Error;

    /// Parses the serialized key `v(n; e1:r1, ...)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed vertex key {s:?}"));
        let inner = s.trim().strip_prefix("v(").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let (n, rest) = inner.split_once(';').unwrap_or((inner, ""));
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let mut digits = Vec::new();
        for part in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (e, r) = part.split_once(':').ok_or_else(bad)?;
            digits.push((e.trim().parse().map_err(|_| bad())?, r.trim().parse().map_err(|_| bad())?));
        }
        let v = Vertex::from_digits(n, digits.iter().copied());
        if v.digits.len() != digits.len() {
            return Err(bad());
        }
        Ok(v)
    }
}

/// An edge of the tree, stored with the lower level first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct Edge {
    pub lower: Vertex,
    pub upper: Vertex,
}

impl Edge {
    pub fn new(bk: &Backend, u: Vertex, v: Vertex) -> Result<Self> {
        if u.label_of(bk, &v).is_none() {
            return Err(Error::Domain(format!("{u} and {v} are not adjacent")));
        }
        Ok(if u.n < v.n { Edge { lower: u, upper: v } } else { Edge { lower: v, upper: u } })
    }
}

fn check_unit_det(bk: &Backend, g: &KMatrix) -> Result<Fe> {
    match g.det(bk).as_constant() {
        Some(c) if !c.is_zero() => Ok(c),
        _ => Err(Error::Domain("matrix determinant is not a nonzero constant".into())),
    }
}

/// Whether `det g ∈ k*`.
pub fn has_unit_determinant(bk: &Backend, g: &KMatrix) -> bool {
    check_unit_det(bk, g).is_ok()
}

/// `h ∈ Z∞ GL₂(O∞)`, decided by `ν(det h) = 2 · min ν(entries)`.
pub fn in_standard_subgroup(bk: &Backend, h: &KMatrix) -> Result<bool> {
    let det = h.det(bk);
    let vd = bk.valuation(&det).ok_or_else(|| Error::Domain("singular matrix".into()))?;
    let m = h
        .entries()
        .iter()
        .filter_map(|e| bk.valuation(e))
        .min()
        .expect("a nonsingular matrix has a nonzero entry");
    Ok(vd == 2 * m)
}

/// The space of `g` with `g·u = w`; see [`IntegralSpace`].
pub fn transporter(bk: &Backend, u: &Vertex, w: &Vertex) -> Result<IntegralSpace> {
    IntegralSpace::new(bk, u, w)
}

/// Whether some `g ∈ GL₂(C)` maps `u` to `w`.
pub fn equivalent(bk: &Backend, u: &Vertex, w: &Vertex) -> Result<bool> {
    if u.parity() != w.parity() {
        return Ok(false);
    }
    if u == w {
        return Ok(true);
    }
    transporter(bk, u, w)?.has_unit(bk)
}

#[cfg(test)]
mod tests;
