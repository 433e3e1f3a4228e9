//! Gaussian elimination over a finite field.

use super::field::{Fe, FiniteField};

/// Solution set of `A x = b`: `particular + span(kernel)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<Fe>,
    pub kernel: Vec<Vec<Fe>>,
}

impl AffineSolution {
    /// Number of solutions, `q^dim`.
    pub fn count(&self, q: usize) -> u128 {
        (q as u128).pow(self.kernel.len() as u32)
    }

    /// Every solution, in the order of the kernel coordinates.
    pub fn enumerate(&self, k: &FiniteField) -> Vec<Vec<Fe>> {
        let dim = self.kernel.len();
        let q = k.order();
        let total = q.pow(dim as u32);
        let mut out = Vec::with_capacity(total);
        for idx in 0..total {
            let mut x = self.particular.clone();
            let mut i = idx;
            for v in &self.kernel {
                let c = Fe((i % q) as u8);
                i /= q;
                axpy(&mut x, c, v, k);
            }
            out.push(x);
        }
        out
    }
}

/// `y += c x`.
pub fn axpy(y: &mut [Fe], c: Fe, x: &[Fe], k: &FiniteField) {
    if c.is_zero() {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = k.add(*yi, k.mul(c, xi));
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Fe>>, ncols: usize, k: &FiniteField) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = k.inv_nz(rows[r][col]);
        for x in rows[r].iter_mut() {
            *x = k.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = k.neg(row[col]);
                axpy(row, f, &pivot_row, k);
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// All solutions of `A x = b`, or `None` if the system is inconsistent.
/// `a` has `b.len()` rows of length `ncols`.
pub fn solve_linear(a: &[Vec<Fe>], b: &[Fe], ncols: usize, k: &FiniteField) -> Option<AffineSolution> {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let mut rows: Vec<Vec<Fe>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            assert_eq!(row.len(), ncols, "row length mismatch");
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let pivots = rref(&mut rows, ncols + 1, k);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut particular = vec![Fe::ZERO; ncols];
    for (row, &pc) in rows.iter().zip(&pivots) {
        particular[pc] = row[ncols];
    }
    let kernel = kernel_from_rref(&rows, &pivots, ncols, k);
    Some(AffineSolution { particular, kernel })
}

/// Basis of `{x : A x = 0}`, one vector per free column, in column order.
pub fn kernel(a: &[Vec<Fe>], ncols: usize, k: &FiniteField) -> Vec<Vec<Fe>> {
    let mut rows = a.to_vec();
    let pivots = rref(&mut rows, ncols, k);
    kernel_from_rref(&rows, &pivots, ncols, k)
}

fn kernel_from_rref(rows: &[Vec<Fe>], pivots: &[usize], ncols: usize, k: &FiniteField) -> Vec<Vec<Fe>> {
    let mut is_pivot = vec![false; ncols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Fe::ZERO; ncols];
            v[free] = Fe::ONE;
            for (row, &pc) in rows.iter().zip(pivots) {
                v[pc] = k.neg(row[free]);
            }
            v
        })
        .collect()
}

pub fn rank(a: &[Vec<Fe>], ncols: usize, k: &FiniteField) -> usize {
    let mut rows = a.to_vec();
    rref(&mut rows, ncols, k).len()
}

/// `A x`.
pub fn mat_vec(a: &[Vec<Fe>], x: &[Fe], k: &FiniteField) -> Vec<Fe> {
    a.iter()
        .map(|row| row.iter().zip(x).fold(Fe::ZERO, |acc, (&r, &xi)| k.add(acc, k.mul(r, xi))))
        .collect()
}

/// Decomposes vectors over a fixed basis: precomputes an echelon form so that
/// coordinates can be read off repeatedly.
#[derive(Clone, Debug)]
pub struct BasisSolver {
    dim: usize,
    ambient: usize,
    /// RREF of the transposed system `[basis^T | I]`.
    rows: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
}

impl BasisSolver {
    /// `basis` must be linearly independent vectors of length `ambient`.
    pub fn new(basis: &[Vec<Fe>], ambient: usize, k: &FiniteField) -> Self {
        let dim = basis.len();
        // rows of [B | I] where the columns of B are the basis vectors
        let mut all: Vec<Vec<Fe>> = (0..ambient)
            .map(|i| {
                let mut r: Vec<Fe> = basis.iter().map(|v| v[i]).collect();
                r.extend((0..ambient).map(|j| if i == j { Fe::ONE } else { Fe::ZERO }));
                r
            })
            .collect();
        let pivots = rref_keep(&mut all, dim, k);
        assert_eq!(pivots.len(), dim, "basis is linearly dependent");
        BasisSolver { dim, ambient, rows: all, pivots }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coordinates of `v`, or `None` if `v` is outside the span.
    pub fn coordinates(&self, v: &[Fe], k: &FiniteField) -> Option<Vec<Fe>> {
        assert_eq!(v.len(), self.ambient);
        // each row reads: (left part) . coords = (right part) . v
        let mut coords = vec![Fe::ZERO; self.dim];
        for (i, row) in self.rows.iter().enumerate() {
            let rhs = row[self.dim..]
                .iter()
                .zip(v)
                .fold(Fe::ZERO, |acc, (&r, &x)| k.add(acc, k.mul(r, x)));
            if i < self.pivots.len() {
                coords[self.pivots[i]] = rhs;
            } else if !rhs.is_zero() {
                return None;
            }
        }
        Some(coords)
    }
}

/// Like [`rref`] on the first `ncols` columns, but keeps zero rows so that the
/// trailing columns still record the row operations.
fn rref_keep(rows: &mut [Vec<Fe>], ncols: usize, k: &FiniteField) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = k.inv_nz(rows[r][col]);
        for x in rows[r].iter_mut() {
            *x = k.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = k.neg(row[col]);
                axpy(row, f, &pivot_row, k);
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[u8]) -> Vec<Fe> {
        x.iter().map(|&c| Fe(c)).collect()
    }

    #[test]
    fn identity_system_has_unique_solution() {
        let k = FiniteField::new(5).unwrap();
        let a = vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        let s = solve_linear(&a, &v(&[3, 1, 4]), 3, &k).unwrap();
        assert_eq!(s.particular, v(&[3, 1, 4]));
        assert!(s.kernel.is_empty());
    }

    #[test]
    fn zero_system_is_whole_space() {
        let k = FiniteField::new(3).unwrap();
        let a = vec![v(&[0, 0])];
        let s = solve_linear(&a, &v(&[0]), 2, &k).unwrap();
        assert_eq!(s.kernel.len(), 2);
        assert_eq!(s.count(3), 9);
        assert!(solve_linear(&a, &v(&[1]), 2, &k).is_none());
    }

    #[test]
    fn one_equation_over_f2_matches_enumeration() {
        let k = FiniteField::new(2).unwrap();
        let a = vec![v(&[1, 1])];
        let s = solve_linear(&a, &v(&[1]), 2, &k).unwrap();
        assert_eq!(s.particular, v(&[1, 0]));
        assert_eq!(s.kernel, vec![v(&[1, 1])]);
        // brute force over all four vectors
        let mut brute: Vec<Vec<Fe>> = (0..4u8)
            .map(|i| v(&[i & 1, i >> 1]))
            .filter(|x| k.add(x[0], x[1]) == Fe::ONE)
            .collect();
        let mut got = s.enumerate(&k);
        brute.sort();
        got.sort();
        assert_eq!(brute, got);
    }

    #[test]
    fn basis_solver_reads_coordinates() {
        let k = FiniteField::new(3).unwrap();
        let basis = vec![v(&[1, 1, 0, 2]), v(&[0, 1, 1, 1])];
        let s = BasisSolver::new(&basis, 4, &k);
        let mut w = vec![Fe::ZERO; 4];
        axpy(&mut w, Fe(2), &basis[0], &k);
        axpy(&mut w, Fe(1), &basis[1], &k);
        assert_eq!(s.coordinates(&w, &k), Some(v(&[2, 1])));
        assert_eq!(s.coordinates(&v(&[1, 0, 0, 0]), &k), None);
    }
}
