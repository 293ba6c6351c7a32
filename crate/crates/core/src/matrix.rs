//! Small dense matrices over [`Scalar`] with exact elimination.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Structural facts about a square matrix. "Nonzero" means exactly nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BandPredicates {
    pub diagonal: bool,
    pub tridiagonal: bool,
    pub irreducible_tridiagonal: bool,
    pub upper_bidiagonal: bool,
    pub lower_bidiagonal: bool,
    pub multiplicity_free_diagonal: bool,
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    pub fn try_from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Result<Scalar>,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j)?);
            }
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        DenseMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn diagonal(entries: Vec<Scalar>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// All entries, row by row.
    pub fn row_major(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Product that skips structurally zero entries of `self`.
    pub fn mul(&self, rhs: &DenseMatrix) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, rhs: &DenseMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &rhs[(i, j)])
    }

    pub fn sub(&self, rhs: &DenseMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &rhs[(i, j)])
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| c * &self[(i, j)])
    }

    /// `A B - c B A`.
    pub fn q_commutator(&self, rhs: &DenseMatrix, c: &Scalar) -> Self {
        self.mul(rhs).sub(&rhs.mul(self).scale(c))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    /// Largest absolute entry (zero for an empty matrix).
    pub fn max_abs(&self) -> Scalar {
        self.data
            .iter()
            .map(Scalar::abs)
            .fold(Scalar::zero(), |m, x| if x > m { x } else { m })
    }

    /// `J A J` with `J` the exchange matrix: indices run backwards.
    pub fn reversed(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            self[(self.rows - 1 - i, self.cols - 1 - j)].clone()
        })
    }

    /// `P^{-1} A P`.
    pub fn conjugate(&self, p: &DenseMatrix, p_inv: &DenseMatrix) -> Self {
        p_inv.mul(&self.mul(p))
    }

    fn nonzero_outside(&self, keep: impl Fn(usize, usize) -> bool) -> usize {
        let mut count = 0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !keep(i, j) && !self[(i, j)].is_zero() {
                    count += 1;
                }
            }
        }
        count
    }

    /// Number of nonzero entries with `|i - j| > 1`.
    pub fn off_band_count(&self) -> usize {
        self.nonzero_outside(|i, j| i.abs_diff(j) <= 1)
    }

    pub fn off_diagonal_count(&self) -> usize {
        self.nonzero_outside(|i, j| i == j)
    }

    pub fn band_predicates(&self) -> BandPredicates {
        assert!(self.is_square(), "band predicates need a square matrix");
        let n = self.rows;
        let diagonal = self.off_diagonal_count() == 0;
        let tridiagonal = self.off_band_count() == 0;
        let sub_ok = (0..n.saturating_sub(1)).all(|i| !self[(i + 1, i)].is_zero());
        let sup_ok = (0..n.saturating_sub(1)).all(|i| !self[(i, i + 1)].is_zero());
        let irreducible_tridiagonal = n > 1 && tridiagonal && sub_ok && sup_ok;
        let upper_bidiagonal = self.nonzero_outside(|i, j| j == i || j == i + 1) == 0;
        let lower_bidiagonal = self.nonzero_outside(|i, j| i == j || i == j + 1) == 0;
        let multiplicity_free_diagonal =
            diagonal && (0..n).all(|i| (0..i).all(|j| self[(i, i)] != self[(j, j)]));
        BandPredicates {
            diagonal,
            tridiagonal,
            irreducible_tridiagonal,
            upper_bidiagonal,
            lower_bidiagonal,
            multiplicity_free_diagonal,
        }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (DenseMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].recip().expect("pivot is nonzero");
            for j in 0..m.cols {
                m[(row, j)] = &m[(row, j)] * &inv;
            }
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone();
                    for j in 0..m.cols {
                        if !m[(row, j)].is_zero() {
                            m[(r, j)] = &m[(r, j)] - &factor * &m[(row, j)];
                        }
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<DenseMatrix> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(Self::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    /// A basis of `{v : A v = 0}`.
    pub fn null_space(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -&r[(row, f)];
                }
                v
            })
            .collect()
    }
}

/// `p(t)/r(t)` with coefficients in increasing degree.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    pub numerator: Vec<Scalar>,
    pub denominator: Vec<Scalar>,
}

fn horner(c: &[Scalar], t: &Scalar) -> Scalar {
    c.iter().rev().fold(Scalar::zero(), |acc, a| acc * t + a)
}

impl RationalFunction {
    /// Fits a degree `(deg, deg)` rational function through `2 deg + 1`
    /// nodes by solving the linearized system `p(t_i) - y_i r(t_i) = 0`.
    pub fn fit(nodes: &[Scalar], values: &[Scalar], deg: usize) -> Result<RationalFunction> {
        let need = 2 * deg + 1;
        if nodes.len() < need || values.len() < need {
            return Err(Error::Shape(format!(
                "degree {deg} needs {need} nodes, got {}",
                nodes.len()
            )));
        }
        let sys = DenseMatrix::from_fn(need, 2 * deg + 2, |i, j| {
            if j <= deg {
                nodes[i].pow(j as i64)
            } else {
                -&values[i] * nodes[i].pow((j - deg - 1) as i64)
            }
        });
        let basis = sys.null_space();
        let v = basis
            .into_iter()
            .find(|v| v[deg + 1..].iter().any(|c| !c.is_zero()))
            .ok_or(Error::Singular)?;
        Ok(RationalFunction {
            numerator: v[..=deg].to_vec(),
            denominator: v[deg + 1..].to_vec(),
        })
    }

    pub fn eval(&self, t: &Scalar) -> Option<Scalar> {
        let den = horner(&self.denominator, t);
        if den.is_zero() {
            None
        } else {
            Some(horner(&self.numerator, t) / den)
        }
    }

    /// `p(t) - y r(t)`, zero when the point lies on the curve.
    pub fn cross_residual(&self, t: &Scalar, y: &Scalar) -> Scalar {
        horner(&self.numerator, t) - y * horner(&self.denominator, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    fn m(rows: &[&[&str]]) -> DenseMatrix {
        DenseMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|t| s(t)).collect())
                .collect(),
        )
    }

    #[test]
    fn identity_predicates() {
        let p = DenseMatrix::identity(4).band_predicates();
        assert!(p.diagonal && p.tridiagonal && !p.irreducible_tridiagonal);
        assert!(!p.multiplicity_free_diagonal);
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&["2", "1/3", "0"], &["-1", "4", "5/2"], &["0", "7", "1"]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(inv.mul(&a).is_identity());
    }

    #[test]
    fn singular_detected() {
        let a = m(&[&["1", "2"], &["2", "4"]]);
        assert_eq!(a.inverse().unwrap_err(), Error::Singular);
        assert_eq!(a.rank(), 1);
        let ns = a.null_space();
        assert_eq!(ns.len(), 1);
        assert!(a.mul_vec(&ns[0]).iter().all(Scalar::is_zero));
    }

    #[test]
    fn bidiagonal_orientation() {
        let l = m(&[&["1", "0", "0"], &["2", "3", "0"], &["0", "4", "5"]]);
        let p = l.band_predicates();
        assert!(
            p.lower_bidiagonal
                && !p.upper_bidiagonal
                && p.tridiagonal
                && !p.irreducible_tridiagonal
        );
        assert!(l.transpose().band_predicates().upper_bidiagonal);
    }

    #[test]
    fn rational_fit_recovers_function() {
        // (1 + 2t) / (3 - t)
        let nodes: Vec<Scalar> = (0..6).map(|i| s(&format!("{}/5", i + 1))).collect();
        let f = |t: &Scalar| (Scalar::one() + s("2") * t) / (s("3") - t);
        let values: Vec<Scalar> = nodes.iter().map(f).collect();
        let r = RationalFunction::fit(&nodes, &values, 1).unwrap();
        for (t, y) in nodes.iter().zip(&values) {
            assert!(r.cross_residual(t, y).is_zero());
            assert_eq!(r.eval(t).unwrap(), *y);
        }
    }
}
