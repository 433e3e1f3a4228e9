//! Riemann-Roch spaces `C(n) = {c ∈ C : ν(c) ≥ −n}` and congruence solving
//! inside them.

use rand::Rng;
use serde::Serialize;

use super::series::LaurentSeries;
use super::{Backend, BackendKind, KElement};
use crate::algebra::linalg::solve_linear;
use crate::algebra::{AffineSolution, Fe, Poly, RatFunc};

/// An `F_q`-basis of `C(n)`, ordered by pole order.
#[derive(Clone, Debug, Serialize)]
pub struct RRSpace {
    pub n: i64,
    #[serde(skip)]
    pub basis: Vec<KElement>,
    /// `−ν` of each basis element.
    pub poles: Vec<i64>,
}

impl RRSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `Σ x_i b_i`.
    pub fn combine(&self, coords: &[Fe], bk: &Backend) -> KElement {
        assert_eq!(coords.len(), self.basis.len());
        let mut acc = KElement::zero();
        for (&c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = bk.add(&acc, &bk.scale(c, b));
            }
        }
        acc
    }
}

/// `{a ∈ C(n_bound) : ν(a − target) ≥ r}` as an affine subspace in the
/// coordinates of `space`, or `None` when empty.
#[derive(Clone, Debug)]
pub struct CongruenceSolution {
    pub space: RRSpace,
    pub solution: Option<AffineSolution>,
}

impl CongruenceSolution {
    /// Every solution as an element of `C`.
    pub fn elements(&self, bk: &Backend) -> Vec<KElement> {
        match &self.solution {
            None => Vec::new(),
            Some(s) => s.enumerate(bk.field()).iter().map(|x| self.space.combine(x, bk)).collect(),
        }
    }

    pub fn count(&self, q: usize) -> u128 {
        self.solution.as_ref().map_or(0, |s| s.count(q))
    }
}

impl Backend {
    /// A basis of `C(n)`: `t^i` (rational), `x^i y^j` with `j ≤ 1` and
    /// `2i + 3j ≤ n` (elliptic), `1, 1/p^b, t/p^b` for `b ≤ n` (degree-two
    /// place). Empty for `n < 0`.
    pub fn rr_space(&self, n: i64) -> RRSpace {
        let k = &self.k;
        let mut basis = Vec::new();
        let mut poles = Vec::new();
        if n >= 0 {
            match self.kind {
                BackendKind::RationalDelta1 => {
                    for i in 0..=n {
                        basis.push(KElement::from_poly(Poly::monomial(Fe::ONE, i as usize)));
                        poles.push(i);
                    }
                }
                BackendKind::EllipticDelta1 => {
                    for pole in 0..=n {
                        if pole == 1 {
                            continue;
                        }
                        // 2i + 3j = pole with j ∈ {0, 1}
                        let j = pole % 2;
                        let i = ((pole - 3 * j) / 2) as usize;
                        let xi = RatFunc::from_poly(Poly::monomial(Fe::ONE, i));
                        let e = if j == 0 {
                            KElement { a: xi, b: RatFunc::zero() }
                        } else {
                            KElement { a: RatFunc::zero(), b: xi }
                        };
                        basis.push(e);
                        poles.push(pole);
                    }
                }
                BackendKind::RationalDelta2 => {
                    basis.push(KElement::one());
                    poles.push(0);
                    for b in 1..=n {
                        let pb = self.p.pow(b as u32, k);
                        for a in 0..2 {
                            let num = Poly::monomial(Fe::ONE, a);
                            let r = RatFunc::new(num, pb.clone(), k).expect("p is nonzero");
                            basis.push(KElement::from_ratfunc(r));
                            poles.push(b);
                        }
                    }
                }
            }
        }
        RRSpace { n, basis, poles }
    }

    /// Uniformly random element of `C(n)`.
    pub fn random_rr_element<R: Rng + ?Sized>(&self, n: i64, rng: &mut R) -> KElement {
        let space = self.rr_space(n);
        let q = self.q();
        let coords: Vec<Fe> = (0..space.dim()).map(|_| Fe(rng.gen_range(0..q) as u8)).collect();
        space.combine(&coords, self)
    }

    /// Random nonzero element of `K`, a quotient of two random elements of
    /// `C(n)`.
    pub fn random_element<R: Rng + ?Sized>(&self, n: i64, rng: &mut R) -> KElement {
        loop {
            let num = self.random_rr_element(n, rng);
            let den = self.random_rr_element(n, rng);
            if !num.is_zero() && !den.is_zero() {
                return self.div(&num, &den).expect("nonzero denominator");
            }
        }
    }

    /// `dim C(n)`.
    pub fn rr_dim(&self, n: i64) -> usize {
        if n < 0 {
            return 0;
        }
        match self.kind {
            BackendKind::RationalDelta1 => n as usize + 1,
            BackendKind::EllipticDelta1 => (n as usize).max(1),
            BackendKind::RationalDelta2 => 2 * n as usize + 1,
        }
    }

    /// Series of every basis element of `space`, known below `prec`.
    pub fn basis_series(&self, space: &RRSpace, prec: i64) -> Vec<LaurentSeries> {
        space.basis.iter().map(|b| self.series(b, prec)).collect()
    }

    /// Appends the `F_q`-rows expressing that the coefficients of
    /// `Σ x_i s_i − target` vanish at every exponent in `lo..hi`.
    pub(crate) fn push_vanishing_rows(
        &self,
        cols: &[LaurentSeries],
        target: Option<&LaurentSeries>,
        lo: i64,
        hi: i64,
        rows: &mut Vec<Vec<Fe>>,
        rhs: &mut Vec<Fe>,
    ) {
        let delta = self.delta() as usize;
        for e in lo..hi {
            let mut block = vec![vec![Fe::ZERO; cols.len()]; delta];
            for (j, s) in cols.iter().enumerate() {
                for (comp, c) in self.residue_coordinates(s.coeff(e)).into_iter().enumerate() {
                    block[comp][j] = c;
                }
            }
            let t = target.map_or(vec![Fe::ZERO; delta], |t| self.residue_coordinates(t.coeff(e)));
            for (row, b) in block.into_iter().zip(t) {
                rows.push(row);
                rhs.push(b);
            }
        }
    }

    /// `{a ∈ C(n_bound) : ν(a − target) ≥ r}`, by expanding the basis and the
    /// target below `r` and solving the resulting linear system.
    pub fn solve_congruence(&self, target: &KElement, r: i64, n_bound: i64) -> CongruenceSolution {
        let space = self.rr_space(n_bound);
        let dim = space.dim();
        let lo = self.valuation(target).map_or(-n_bound, |v| v.min(-n_bound));
        let cols = self.basis_series(&space, r);
        let tser = self.series(target, r);
        let (mut rows, mut rhs) = (Vec::new(), Vec::new());
        self.push_vanishing_rows(&cols, Some(&tser), lo, r, &mut rows, &mut rhs);
        let solution = if dim == 0 {
            // only a = 0 is available
            self.valuation_at_least(target, r).then(|| AffineSolution { particular: Vec::new(), kernel: Vec::new() })
        } else {
            solve_linear(&rows, &rhs, dim, &self.k)
        };
        CongruenceSolution { space, solution }
    }
}
