//! Exact rational linear algebra: the small dense-matrix toolkit every other
//! module builds on.
//!
//! All entries are arbitrary-precision rationals ([`Rat`]); nothing in this
//! module touches floating point. Matrices are row-major `Vec<Vec<Rat>>`
//! wrapped in [`Mat`] with the handful of operations we actually need:
//! row reduction to *reduced* row-echelon form (the canonical representative
//! used for subspace equality), kernels, solving, inversion, and products.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar used throughout the exact layer.
pub type Rat = BigRational;

/// Shorthand for a rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for a rational `p/q`.
pub fn ratq(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Positive part `[a]_+ = (a + |a|) / 2`.
pub fn positive_part(a: &Rat) -> Rat {
    (a + a.abs()) / rat(2)
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    pub rows: Vec<Vec<Rat>>,
}

impl Mat {
    pub fn new(rows: Vec<Vec<Rat>>) -> Self {
        if let Some(first) = rows.first() {
            let w = first.len();
            assert!(rows.iter().all(|r| r.len() == w), "ragged matrix");
        }
        Mat { rows }
    }

    pub fn zero(nrows: usize, ncols: usize) -> Self {
        Mat {
            rows: vec![vec![Rat::zero(); ncols]; nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.rows[i][i] = Rat::one();
        }
        m
    }

    /// Build from integer entries (row-major).
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Mat::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn transpose(&self) -> Mat {
        let (n, m) = (self.nrows(), self.ncols());
        let mut t = Mat::zero(m, n);
        for i in 0..n {
            for j in 0..m {
                t.rows[j][i] = self.rows[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.ncols(), other.nrows(), "dimension mismatch");
        let (n, k, m) = (self.nrows(), self.ncols(), other.ncols());
        let mut out = Mat::zero(n, m);
        for i in 0..n {
            for j in 0..m {
                let mut acc = Rat::zero();
                for t in 0..k {
                    if !self.rows[i][t].is_zero() && !other.rows[t][j].is_zero() {
                        acc += &self.rows[i][t] * &other.rows[t][j];
                    }
                }
                out.rows[i][j] = acc;
            }
        }
        out
    }

    /// Matrix–vector product (vector as column).
    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.ncols(), v.len(), "dimension mismatch");
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(|x| x.is_zero()))
    }

    pub fn is_skew_symmetric(&self) -> bool {
        let n = self.nrows();
        if n != self.ncols() {
            return false;
        }
        for i in 0..n {
            for j in 0..n {
                if self.rows[i][j] != -self.rows[j][i].clone() {
                    return false;
                }
            }
        }
        true
    }

    /// In-place reduction to *reduced* row-echelon form; returns the pivot
    /// column indices. Zero rows are dropped.
    pub fn rref(&mut self) -> Vec<usize> {
        let ncols = self.ncols();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..ncols {
            let Some(pr) = (row..self.nrows()).find(|&r| !self.rows[r][col].is_zero()) else {
                continue;
            };
            self.rows.swap(row, pr);
            let inv = self.rows[row][col].clone();
            for x in self.rows[row].iter_mut() {
                *x = &*x / &inv;
            }
            for r in 0..self.nrows() {
                if r != row && !self.rows[r][col].is_zero() {
                    let f = self.rows[r][col].clone();
                    for c in 0..ncols {
                        let sub = &f * &self.rows[row][c];
                        self.rows[r][c] -= sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == self.nrows() {
                break;
            }
        }
        self.rows.truncate(row);
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel `{v : Mv = 0}`, in reduced echelon form.
    pub fn kernel(&self) -> Mat {
        let ncols = self.ncols();
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![Rat::zero(); ncols];
            v[f] = Rat::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m.rows[r][f].clone();
            }
            basis.push(v);
        }
        let mut k = Mat::new(basis);
        k.rref();
        k
    }

    /// Solve `M x = b` exactly. Returns `None` when inconsistent; when the
    /// system is underdetermined an arbitrary particular solution is returned.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(self.nrows(), b.len(), "dimension mismatch");
        let ncols = self.ncols();
        let mut aug = self.clone();
        for (row, bi) in aug.rows.iter_mut().zip(b) {
            row.push(bi.clone());
        }
        let pivots = aug.rref();
        // A pivot in the augmented column means the system is inconsistent.
        if pivots.contains(&ncols) {
            return None;
        }
        let mut x = vec![Rat::zero(); ncols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.rows[r][ncols].clone();
        }
        Some(x)
    }

    /// Exact inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Mat> {
        let n = self.nrows();
        if n != self.ncols() {
            return None;
        }
        let mut aug = self.clone();
        for (i, row) in aug.rows.iter_mut().enumerate() {
            let mut id = vec![Rat::zero(); n];
            id[i] = Rat::one();
            row.extend(id);
        }
        let pivots = aug.rref();
        if pivots != (0..n).collect::<Vec<_>>() {
            return None;
        }
        Some(Mat::new(
            aug.rows.into_iter().map(|r| r[n..].to_vec()).collect(),
        ))
    }

    /// Vertical stack of two matrices with equal column counts.
    pub fn vstack(&self, other: &Mat) -> Mat {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Mat::new(rows)
    }
}

/// Skew product `u^T M v` for a bilinear form given by `M`.
pub fn bilinear(m: &Mat, u: &[Rat], v: &[Rat]) -> Rat {
    let mv = m.mul_vec(v);
    u.iter()
        .zip(&mv)
        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
        .map(|(a, b)| a * b)
        .sum()
}

/// Signature (`#positive − #negative` diagonal entries) of a symmetric
/// rational matrix, by exact symmetric Gaussian congruence (Lagrange's
/// method). Zero diagonals with a nonzero off-diagonal partner are handled by
/// the hyperbolic trick of adding the partner row/column first, which keeps
/// every step a congruence transformation.
pub fn signature(sym: &Mat) -> i64 {
    let n = sym.nrows();
    assert_eq!(n, sym.ncols(), "signature needs a square matrix");
    let mut a = sym.clone();
    let mut pos = 0i64;
    let mut neg = 0i64;
    let mut i = 0;
    while i < n {
        if a.rows[i][i].is_zero() {
            // Prefer a later index with nonzero diagonal: swap it in.
            if let Some(j) = ((i + 1)..n).find(|&j| !a.rows[j][j].is_zero()) {
                a.rows.swap(i, j);
                for row in a.rows.iter_mut() {
                    row.swap(i, j);
                }
            } else if let Some(j) = ((i + 1)..n).find(|&j| !a.rows[i][j].is_zero()) {
                // All remaining diagonals vanish: a_ij != 0 gives a hyperbolic
                // pair; add row/col j to row/col i so the diagonal becomes 2a_ij.
                for c in 0..n {
                    let add = a.rows[j][c].clone();
                    a.rows[i][c] += add;
                }
                for r in 0..n {
                    let add = a.rows[r][j].clone();
                    a.rows[r][i] += add;
                }
            } else {
                // Row i is entirely zero in the remaining block.
                i += 1;
                continue;
            }
        }
        let d = a.rows[i][i].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for j in (i + 1)..n {
            if a.rows[j][i].is_zero() {
                continue;
            }
            let f = &a.rows[j][i] / &d;
            for c in 0..n {
                let sub = &f * &a.rows[i][c];
                a.rows[j][c] -= sub;
            }
            for r in 0..n {
                let sub = &f * &a.rows[r][i];
                a.rows[r][j] -= sub;
            }
        }
        i += 1;
    }
    pos - neg
}

/// Serialize a rational as the lossless string `"p/q"` (or `"p"` when q = 1).
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `"p/q"` or `"p"`.
pub fn rat_from_str(s: &str) -> Option<Rat> {
    let mut parts = s.splitn(2, '/');
    let p: BigInt = parts.next()?.trim().parse().ok()?;
    match parts.next() {
        None => Some(Rat::from_integer(p)),
        Some(qs) => {
            let q: BigInt = qs.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_canonicalizes() {
        let mut m = Mat::from_i64(&[vec![2, 4, 6], vec![1, 2, 3], vec![0, 1, 1]]);
        let pivots = m.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(m, Mat::from_i64(&[vec![1, 0, 1], vec![0, 1, 1]]));
    }

    #[test]
    fn kernel_of_skew_matrix() {
        // Once-punctured-torus exchange matrix: kernel spanned by (1,1,1).
        let m = Mat::from_i64(&[vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]]);
        let k = m.kernel();
        assert_eq!(k, Mat::from_i64(&[vec![1, 1, 1]]));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Mat::from_i64(&[vec![1, 2], vec![3, 5]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
        assert_eq!(inv.mul(&m), Mat::identity(2));
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = Mat::from_i64(&[vec![1, 2], vec![2, 4]]);
        assert!(m.inverse().is_none());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = Mat::from_i64(&[vec![1, 1], vec![0, 1]]);
        let x = m.solve(&[rat(3), rat(1)]).unwrap();
        assert_eq!(x, vec![rat(2), rat(1)]);
        let sing = Mat::from_i64(&[vec![1, 1], vec![1, 1]]);
        assert!(sing.solve(&[rat(0), rat(1)]).is_none());
    }

    #[test]
    fn signature_of_worked_maslov_matrix() {
        // 2Q for the span(e1)/span(e2)/span(e1+e2) triple: eigenvalues {2,-1,-1}.
        let m = Mat::from_i64(&[vec![0, 1, -1], vec![1, 0, -1], vec![-1, -1, 0]]);
        assert_eq!(signature(&m), -1);
    }

    #[test]
    fn signature_hyperbolic_block() {
        // Pure off-diagonal pairing has signature 0.
        let m = Mat::from_i64(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(signature(&m), 0);
        let m = Mat::from_i64(&[vec![3, 0], vec![0, -5]]);
        assert_eq!(signature(&m), 0);
        let m = Mat::from_i64(&[vec![2, 0], vec![0, 1]]);
        assert_eq!(signature(&m), 2);
    }

    #[test]
    fn positive_part_matches_closed_form() {
        assert_eq!(positive_part(&rat(3)), rat(3));
        assert_eq!(positive_part(&rat(-2)), rat(0));
        assert_eq!(positive_part(&ratq(-1, 2)), rat(0));
        assert_eq!(positive_part(&ratq(5, 2)), ratq(5, 2));
    }

    #[test]
    fn rational_string_roundtrip() {
        for r in [rat(0), rat(7), rat(-3), ratq(22, 7), ratq(-5, 9)] {
            assert_eq!(rat_from_str(&rat_to_string(&r)).unwrap(), r);
        }
        assert!(rat_from_str("1/0").is_none());
    }
}
