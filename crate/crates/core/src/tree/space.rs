//! The space `W` of integral transporters between two vertices and its
//! residue map.
//!
//! For `u = v(n₁, z₁)` and `w = v(n₂, z₂)` of equal parity put
//! `h = π^{-s} m_w⁻¹ g m_u` with `s = (n₁ − n₂)/2`. Then `g·u = w` exactly
//! when `h ∈ GL₂(O∞)`. `W ⊂ M₂(C)` is the `F_q`-space of `g` with `h`
//! integral. This is four valuation conditions, linear in the entries of
//! `g`, and they confine the entries to Riemann-Roch spaces. The residue
//! `h̄ ∈ M₂(k∞)` is linear in `g`, and `det h̄ = det g` lies in `k`. So
//! `g ∈ W` is a transporter iff `det h̄ ≠ 0`, and the transporters are the
//! preimage of `U ∩ GL₂(k∞)` with `U = h̄(W)`.

use rand::Rng;

use super::{KMatrix, Vertex};
use crate::algebra::linalg::{axpy, kernel, rref};
use crate::algebra::{Fe, FiniteField, Matrix2};
use crate::backend::series::LaurentSeries;
use crate::backend::{Backend, KElement, RRSpace};
use crate::error::{Error, Result};

/// Entry blocks of `g = [[a, b], [c, d]]`.
const A: usize = 0;
const B: usize = 1;
const C: usize = 2;
const D: usize = 3;

/// Multipliers of a block inside a constraint.
#[derive(Clone, Copy)]
enum Mult {
    One,
    Z1,
    Z2,
    Z1Z2,
}

/// `(block, multiplier, negate)` for each of the four integrality
/// conditions, in the order of the entries of `h`:
/// `a − z₂c`, `z₁a + b − z₁z₂c − z₂d`, `c`, `z₁c + d`.
const TERMS: [&[(usize, Mult, bool)]; 4] = [
    &[(A, Mult::One, false), (C, Mult::Z2, true)],
    &[(A, Mult::Z1, false), (B, Mult::One, false), (C, Mult::Z1Z2, true), (D, Mult::Z2, true)],
    &[(C, Mult::One, false)],
    &[(C, Mult::Z1, false), (D, Mult::One, false)],
];

/// A residue `h̄ ∈ U ∩ GL₂(k∞)` with its coordinates on the image basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitResidue {
    pub coords: Vec<Fe>,
    pub residue: Matrix2<Fe>,
}

/// Integrality data for one ordered pair of vertices.
struct PairData {
    /// Valuation thresholds of the four conditions.
    r: [i64; 4],
    /// Riemann-Roch bound on each entry, `None` for an empty block.
    bounds: [Option<i64>; 4],
    vz1: Option<i64>,
    vz2: Option<i64>,
}

impl PairData {
    fn new(u: &Vertex, w: &Vertex) -> Option<Self> {
        let (n1, n2) = (u.level(), w.level());
        if (n1 - n2).rem_euclid(2) != 0 {
            return None;
        }
        let r = [(n2 - n1) / 2, (n1 + n2) / 2, -(n1 + n2) / 2, (n1 - n2) / 2];
        let vz1 = u.digits().first().map(|d| d.0);
        let vz2 = w.digits().first().map(|d| d.0);
        let nc = (n1 + n2) / 2;
        let mut na = -r[0];
        if let Some(v) = vz2 {
            na = na.max(nc - v);
        }
        let mut nd = -r[3];
        if let Some(v) = vz1 {
            nd = nd.max(nc - v);
        }
        let mut nb = -r[1];
        if let Some(v1) = vz1 {
            nb = nb.max(na - v1);
        }
        if let Some(v2) = vz2 {
            nb = nb.max(nd - v2);
        }
        if let (Some(v1), Some(v2)) = (vz1, vz2) {
            nb = nb.max(nc - v1 - v2);
        }
        let b = |n: i64| (n >= 0).then_some(n);
        Some(PairData { r, bounds: [b(na), b(nb), b(nc), b(nd)], vz1, vz2 })
    }

    fn mult_valuation(&self, m: Mult) -> Option<i64> {
        match m {
            Mult::One => Some(0),
            Mult::Z1 => self.vz1,
            Mult::Z2 => self.vz2,
            Mult::Z1Z2 => Some(self.vz1? + self.vz2?),
        }
    }
}

/// `W`, `h̄` and `U = h̄(W)` for an ordered pair `(u, w)`, optionally cut
/// down by the integrality conditions of further pairs.
#[derive(Clone, Debug)]
pub struct IntegralSpace {
    pub source: Vertex,
    pub target: Vertex,
    /// The entry spaces `a ∈ C(N_a)`, ..., `d ∈ C(N_d)`.
    blocks: [RRSpace; 4],
    /// Basis of `W` in block coordinates `(a | b | c | d)`.
    basis: Vec<Vec<Fe>>,
    /// `h̄` of each basis vector of `W`.
    residues: Vec<Matrix2<Fe>>,
    /// Indices into `basis` whose residues form a basis of `U`.
    pivots: Vec<usize>,
    /// Basis of `ker h̄` in `W`-coordinates.
    kernel: Vec<Vec<Fe>>,
}

impl IntegralSpace {
    /// The transporter space from `u` to `w`.
    pub fn new(bk: &Backend, u: &Vertex, w: &Vertex) -> Result<Self> {
        Self::joint(bk, &[(u.clone(), w.clone())])
    }

    /// `g` satisfying the integrality conditions of every pair; the residue
    /// map is taken from the first pair.
    pub fn joint(bk: &Backend, pairs: &[(Vertex, Vertex)]) -> Result<Self> {
        assert!(!pairs.is_empty(), "at least one vertex pair is required");
        let (source, target) = pairs[0].clone();
        let data: Option<Vec<PairData>> = pairs.iter().map(|(u, w)| PairData::new(u, w)).collect();
        let Some(data) = data else {
            return Ok(Self::empty(bk, source, target));
        };
        let mut bounds = [Some(i64::MAX); 4];
        for p in &data {
            for (x, pb) in p.bounds.iter().enumerate() {
                bounds[x] = match (bounds[x], *pb) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    _ => None,
                };
            }
        }
        let blocks = bounds.map(|n| bk.rr_space(n.unwrap_or(-1)));
        let offsets = {
            let mut o = [0usize; 5];
            for x in 0..4 {
                o[x + 1] = o[x] + blocks[x].dim();
            }
            o
        };
        let ncols = offsets[4];
        if ncols == 0 {
            return Ok(Self::empty(bk, source, target));
        }

        let max_pole = bounds.iter().flatten().copied().max().unwrap_or(0);
        let mut block_prec = [i64::MIN; 4];
        let mut z_prec = i64::MIN;
        for p in &data {
            for (k, terms) in TERMS.iter().enumerate() {
                for &(x, m, _) in terms.iter() {
                    if let Some(vm) = p.mult_valuation(m) {
                        block_prec[x] = block_prec[x].max(p.r[k] + 1 - vm);
                    }
                }
            }
            let lowest = [p.vz1, p.vz2].iter().flatten().map(|&v| -v).max().unwrap_or(0).max(0);
            z_prec = z_prec.max(p.r.iter().max().unwrap() + 1 + max_pole + lowest);
        }
        let series: Vec<Vec<LaurentSeries>> = (0..4)
            .map(|x| bk.basis_series(&blocks[x], block_prec[x].max(1)))
            .collect();

        let kinf = bk.residue_field();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        let mut residue_rows: Vec<Vec<Fe>> = Vec::new();
        for (idx, ((u, w), p)) in pairs.iter().zip(&data).enumerate() {
            let z1 = bk.digits_series(u.digits(), z_prec);
            let z2 = bk.digits_series(w.digits(), z_prec);
            let z12 = z1.mul(&z2, kinf);
            for (k, terms) in TERMS.iter().enumerate() {
                let rk = p.r[k];
                let mut cols = vec![LaurentSeries::zero(); ncols];
                for &(x, m, negate) in terms.iter() {
                    let mult = match m {
                        Mult::One => None,
                        Mult::Z1 => Some(&z1),
                        Mult::Z2 => Some(&z2),
                        Mult::Z1Z2 => Some(&z12),
                    };
                    if mult.is_some_and(|s| s.is_zero() && s.is_exact()) {
                        continue;
                    }
                    for (j, b) in series[x].iter().enumerate() {
                        let mut s = match mult {
                            None => b.clone(),
                            Some(ms) => ms.mul(b, kinf),
                        };
                        if negate {
                            s = s.neg(kinf);
                        }
                        let col = &mut cols[offsets[x] + j];
                        *col = col.add(&s, kinf);
                    }
                }
                for s in &cols {
                    if s.precision() <= rk {
                        return Err(Error::violation(
                            "series precision",
                            format!("column known below {} but needed at {rk}", s.precision()),
                        ));
                    }
                }
                let lo = cols.iter().filter(|s| !s.is_zero()).map(|s| s.start()).min().unwrap_or(rk);
                bk.push_vanishing_rows(&cols, None, lo.min(rk), rk, &mut rows, &mut rhs);
                if idx == 0 {
                    residue_rows.push(cols.iter().map(|s| s.coeff(rk)).collect());
                }
            }
        }

        let k = bk.field();
        let basis = kernel(&rows, ncols, k);
        let residues: Vec<Matrix2<Fe>> = basis
            .iter()
            .map(|x| {
                let e = |row: &Vec<Fe>| {
                    row.iter().zip(x).fold(Fe::ZERO, |acc, (&r, &xi)| kinf.add(acc, kinf.mul(r, xi)))
                };
                Matrix2::new(e(&residue_rows[0]), e(&residue_rows[1]), e(&residue_rows[2]), e(&residue_rows[3]))
            })
            .collect();
        let (pivots, kernel_basis) = image_and_kernel(bk, &residues);
        Ok(IntegralSpace { source, target, blocks, basis, residues, pivots, kernel: kernel_basis })
    }

    fn empty(bk: &Backend, source: Vertex, target: Vertex) -> Self {
        IntegralSpace {
            source,
            target,
            blocks: [0; 4].map(|_| bk.rr_space(-1)),
            basis: Vec::new(),
            residues: Vec::new(),
            pivots: Vec::new(),
            kernel: Vec::new(),
        }
    }

    /// `dim_{F_q} W`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `dim U`.
    pub fn image_dim(&self) -> usize {
        self.pivots.len()
    }

    /// `dim ker h̄`.
    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }

    /// Riemann-Roch bounds `(N_a, N_b, N_c, N_d)`, `−1` for an empty block.
    pub fn bounds(&self) -> [i64; 4] {
        [0, 1, 2, 3].map(|x| self.blocks[x].n)
    }

    /// A basis of `U ⊂ M₂(k∞)`.
    pub fn image_basis(&self) -> Vec<Matrix2<Fe>> {
        self.pivots.iter().map(|&i| self.residues[i].clone()).collect()
    }

    /// `g` for the given coordinates on the basis of `W`.
    pub fn element(&self, bk: &Backend, coords: &[Fe]) -> KMatrix {
        assert_eq!(coords.len(), self.dim());
        let k = bk.field();
        let ncols: usize = self.blocks.iter().map(|b| b.dim()).sum();
        let mut v = vec![Fe::ZERO; ncols];
        for (&c, b) in coords.iter().zip(&self.basis) {
            axpy(&mut v, c, b, k);
        }
        let mut off = 0;
        let mut entries = Vec::with_capacity(4);
        for block in &self.blocks {
            entries.push(block.combine(&v[off..off + block.dim()], bk));
            off += block.dim();
        }
        let [a, b, c, d]: [KElement; 4] = entries.try_into().expect("four blocks");
        Matrix2::new(a, b, c, d)
    }

    /// `h̄` for the given coordinates on the basis of `W`.
    pub fn residue(&self, bk: &Backend, coords: &[Fe]) -> Matrix2<Fe> {
        combine_matrices(bk.residue_field(), coords, &self.residues)
    }

    /// `W`-coordinates of the element lifting image coordinates `c` and
    /// kernel coordinates `kc`.
    pub fn lift_coords(&self, bk: &Backend, c: &[Fe], kc: &[Fe]) -> Vec<Fe> {
        assert_eq!(c.len(), self.pivots.len());
        assert_eq!(kc.len(), self.kernel.len());
        let k = bk.field();
        let mut x = vec![Fe::ZERO; self.dim()];
        for (&ci, &p) in c.iter().zip(&self.pivots) {
            x[p] = k.add(x[p], ci);
        }
        for (&ki, v) in kc.iter().zip(&self.kernel) {
            axpy(&mut x, ki, v, k);
        }
        x
    }

    /// The element of `W` lifting image coordinates `c` with zero kernel part.
    pub fn lift(&self, bk: &Backend, c: &[Fe]) -> KMatrix {
        let kc = vec![Fe::ZERO; self.kernel.len()];
        self.element(bk, &self.lift_coords(bk, c, &kc))
    }

    /// A basis of `ker h̄` as elements of `W`.
    pub fn kernel_elements(&self, bk: &Backend) -> Vec<KMatrix> {
        self.kernel.iter().map(|v| self.element(bk, v)).collect()
    }

    /// `|U ∩ GL₂(k∞)|`.
    pub fn unit_residue_count(&self, bk: &Backend) -> Result<u128> {
        count_invertible(bk, &self.image_basis())
    }

    /// Number of transporters, `|U ∩ GL₂(k∞)| · q^{dim ker h̄}`.
    pub fn transporter_count(&self, bk: &Backend) -> Result<u128> {
        Ok(self.unit_residue_count(bk)? * (bk.q() as u128).pow(self.kernel_dim() as u32))
    }

    /// Whether some transporter exists.
    pub fn has_unit(&self, bk: &Backend) -> Result<bool> {
        Ok(self.unit_residue_count(bk)? > 0)
    }

    /// A transporter, if one exists.
    pub fn find_unit(&self, bk: &Backend) -> Option<KMatrix> {
        let basis = self.image_basis();
        let kinf = bk.residue_field();
        let mut found = None;
        for_each_vector(basis.len(), bk.q(), |c| {
            let m = combine_matrices(kinf, c, &basis);
            if !m.det(kinf).is_zero() {
                found = Some(c.to_vec());
                return false;
            }
            true
        });
        found.map(|c| self.lift(bk, &c))
    }

    /// A uniformly random element of `U ∩ GL₂(k∞)` by rejection sampling;
    /// `None` after too many misses.
    pub fn random_unit_residue<R: Rng + ?Sized>(&self, bk: &Backend, rng: &mut R) -> Option<UnitResidue> {
        let basis = self.image_basis();
        if basis.is_empty() {
            return None;
        }
        let kinf = bk.residue_field();
        for _ in 0..256 {
            let c: Vec<Fe> = (0..basis.len()).map(|_| Fe(rng.gen_range(0..bk.q()) as u8)).collect();
            let m = combine_matrices(kinf, &c, &basis);
            if !m.det(kinf).is_zero() {
                return Some(UnitResidue { coords: c, residue: m });
            }
        }
        None
    }

    /// Every element of `U ∩ GL₂(k∞)`.
    pub fn unit_residues(&self, bk: &Backend) -> Vec<UnitResidue> {
        let basis = self.image_basis();
        let kinf = bk.residue_field();
        let mut out = Vec::new();
        for_each_vector(basis.len(), bk.q(), |c| {
            let m = combine_matrices(kinf, c, &basis);
            if !m.det(kinf).is_zero() {
                out.push(UnitResidue { coords: c.to_vec(), residue: m });
            }
            true
        });
        out
    }

    /// Image coordinates of the residues `M ∈ U` with `M·ℓ ∈ k∞·ℓ`, as a
    /// basis of a subspace of `F_q^{dim U}`.
    pub fn line_stabilizer_coords(&self, bk: &Backend, line: [Fe; 2]) -> Vec<Vec<Fe>> {
        let basis = self.image_basis();
        let kinf = bk.residue_field();
        let delta = bk.delta() as usize;
        // M ℓ ∥ ℓ  ⇔  (Mℓ)₀ ℓ₁ − (Mℓ)₁ ℓ₀ = 0, linear in M
        let mut rows = vec![vec![Fe::ZERO; basis.len()]; delta];
        for (j, m) in basis.iter().enumerate() {
            let v0 = kinf.add(kinf.mul(m.a, line[0]), kinf.mul(m.b, line[1]));
            let v1 = kinf.add(kinf.mul(m.c, line[0]), kinf.mul(m.d, line[1]));
            let cross = kinf.sub(kinf.mul(v0, line[1]), kinf.mul(v1, line[0]));
            for (comp, x) in bk.residue_coordinates(cross).into_iter().enumerate() {
                rows[comp][j] = x;
            }
        }
        kernel(&rows, basis.len(), bk.field())
    }
}

/// `Σ c_i M_i` over `k∞`, with `c_i ∈ k`.
pub(crate) fn combine_matrices(kinf: &FiniteField, c: &[Fe], ms: &[Matrix2<Fe>]) -> Matrix2<Fe> {
    let mut acc = Matrix2::new(Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ZERO);
    for (&ci, m) in c.iter().zip(ms) {
        if ci.is_zero() {
            continue;
        }
        acc = Matrix2::new(
            kinf.add(acc.a, kinf.mul(ci, m.a)),
            kinf.add(acc.b, kinf.mul(ci, m.b)),
            kinf.add(acc.c, kinf.mul(ci, m.c)),
            kinf.add(acc.d, kinf.mul(ci, m.d)),
        );
    }
    acc
}

/// Calls `f` on every vector of `F_q^m` in odometer order until it returns
/// `false`.
pub(crate) fn for_each_vector(m: usize, q: usize, mut f: impl FnMut(&[Fe]) -> bool) {
    let mut c = vec![Fe::ZERO; m];
    loop {
        if !f(&c) {
            return;
        }
        let mut i = 0;
        loop {
            if i == m {
                return;
            }
            if (c[i].0 as usize) + 1 < q {
                c[i] = Fe(c[i].0 + 1);
                break;
            }
            c[i] = Fe::ZERO;
            i += 1;
        }
    }
}

/// Pivot indices of a maximal independent subset of `residues` and a basis of
/// the linear relations among them.
fn image_and_kernel(bk: &Backend, residues: &[Matrix2<Fe>]) -> (Vec<usize>, Vec<Vec<Fe>>) {
    let dim = residues.len();
    let delta = bk.delta() as usize;
    let mut h = vec![vec![Fe::ZERO; dim]; 4 * delta];
    for (j, m) in residues.iter().enumerate() {
        for (e, &entry) in m.entries().iter().enumerate() {
            for (comp, x) in bk.residue_coordinates(*entry).into_iter().enumerate() {
                h[e * delta + comp][j] = x;
            }
        }
    }
    let k = bk.field();
    let ker = kernel(&h, dim, k);
    let pivots = rref(&mut h.clone(), dim, k);
    (pivots, ker)
}

/// `|{c ∈ F_q^m : det Σ c_i M_i ≠ 0}|` for a basis `M_i` of a subspace of
/// `M₂(k∞)` on which `det` takes values in `k`. `det` restricted to the
/// line `c' + F_q e_m` is a polynomial of degree at most two.
pub fn count_invertible(bk: &Backend, basis: &[Matrix2<Fe>]) -> Result<u128> {
    let m = basis.len();
    if m == 0 {
        return Ok(0);
    }
    let k = bk.field();
    let kinf = bk.residue_field();
    let q = bk.q();
    let in_k = |x: Fe| -> Result<Fe> {
        if (x.0 as usize) < q {
            Ok(x)
        } else {
            Err(Error::violation("determinant in k", "a residue determinant left the constant field"))
        }
    };
    // zeros[b][c] = #{x ∈ k : x² + b x + c = 0}
    let mut zeros = vec![0u32; q * q];
    for x in k.elements() {
        let x2 = k.mul(x, x);
        for b in k.elements() {
            let bx = k.add(x2, k.mul(b, x));
            let c = k.neg(bx);
            zeros[b.index() * q + c.index()] += 1;
        }
    }
    let last = basis[m - 1].clone();
    let qa = in_k(last.det(kinf))?;
    let mut total: u128 = 0;
    let mut err = None;
    for_each_vector(m - 1, q, |c| {
        let mp = combine_matrices(kinf, c, &basis[..m - 1]);
        let r = (|| -> Result<u32> {
            let qc = in_k(mp.det(kinf))?;
            let sum = Matrix2::new(
                kinf.add(mp.a, last.a),
                kinf.add(mp.b, last.b),
                kinf.add(mp.c, last.c),
                kinf.add(mp.d, last.d),
            );
            let qb = k.sub(k.sub(in_k(sum.det(kinf))?, qc), qa);
            Ok(if !qa.is_zero() {
                let inv = k.inv_nz(qa);
                zeros[k.mul(qb, inv).index() * q + k.mul(qc, inv).index()]
            } else if !qb.is_zero() {
                1
            } else if qc.is_zero() {
                q as u32
            } else {
                0
            })
        })();
        match r {
            Ok(z) => {
                total += (q as u32 - z) as u128;
                true
            }
            Err(e) => {
                err = Some(e);
                false
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(total),
    }
}
