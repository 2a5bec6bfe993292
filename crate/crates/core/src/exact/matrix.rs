use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::{fmt_q, Q};

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ExactMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Q::from_integer(v.into())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(fmt_q).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Which candidate row becomes the pivot once the pivot column is fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotRule {
    SmallestRow,
    LargestRow,
}

/// Kernel basis of `m`, one vector per free column, in reduced-echelon
/// normal form (each vector has a 1 at its free column and 0 at every other
/// free column).
pub fn exact_nullspace(m: &ExactMatrix) -> Vec<Vec<Q>> {
    exact_nullspace_with(m, PivotRule::SmallestRow)
}

/// Fraction-free (Bareiss) forward elimination on the integer-scaled matrix,
/// followed by back substitution to the reduced echelon form.
pub fn exact_nullspace_with(m: &ExactMatrix, rule: PivotRule) -> Vec<Vec<Q>> {
    let (rows, cols) = (m.rows, m.cols);
    // Clearing denominators row by row leaves the kernel unchanged.
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let row = m.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
        })
        .collect();

    let mut pivots: Vec<usize> = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let mut candidates = (r..rows).filter(|&i| !a[i][c].is_zero());
        let pick = match rule {
            PivotRule::SmallestRow => candidates.next(),
            PivotRule::LargestRow => candidates.last(),
        };
        let Some(p) = pick else { continue };
        a.swap(r, p);
        for i in r + 1..rows {
            let lead = a[i][c].clone();
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &lead * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }

    // Back substitution over Q.
    let mut red: Vec<Vec<Q>> = a
        .into_iter()
        .take(pivots.len())
        .map(|row| row.into_iter().map(Q::from_integer).collect())
        .collect();
    for (k, &c) in pivots.iter().enumerate().rev() {
        let inv = red[k][c].recip();
        for v in red[k].iter_mut() {
            *v *= &inv;
        }
        for i in 0..k {
            let f = red[i][c].clone();
            if f.is_zero() {
                continue;
            }
            for j in c..cols {
                let t = &f * &red[k][j];
                red[i][j] -= t;
            }
        }
    }
    kernel_from_rref(cols, &pivots, |k, j| red[k][j].clone())
}

fn kernel_from_rref(cols: usize, pivots: &[usize], entry: impl Fn(usize, usize) -> Q) -> Vec<Vec<Q>> {
    let mut is_pivot = vec![false; cols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (k, &c) in pivots.iter().enumerate() {
                v[c] = -entry(k, f);
            }
            v
        })
        .collect()
}

type SparseRow = Vec<(usize, Q)>;

/// Sparse rational linear system for the large, very sparse coefficient
/// systems produced by polynomial ansätze.
///
/// Rows are reduced incrementally against a pivot table keyed by leading
/// column; the reduced echelon form (and therefore the returned basis) is
/// identical to the dense [`exact_nullspace`] result.
#[derive(Clone, Debug, Default)]
pub struct SparseSystem {
    cols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

fn axpy(row: &SparseRow, f: &Q, pivot: &SparseRow) -> SparseRow {
    // row - f * pivot
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(row[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, -(f * &pivot[j].1)));
            j += 1;
        } else {
            let v = &row[i].1 - f * &pivot[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl SparseSystem {
    pub fn new(cols: usize) -> Self {
        SparseSystem { cols, pivots: BTreeMap::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds the equation `sum coeff * x_col = 0`. Duplicate columns are summed.
    pub fn add_row(&mut self, entries: impl IntoIterator<Item = (usize, Q)>) {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (c, v) in entries {
            assert!(c < self.cols, "column {c} out of range");
            *acc.entry(c).or_insert_with(Q::zero) += v;
        }
        let mut row: SparseRow = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        loop {
            let Some((lead, coef)) = row.first().cloned() else { return };
            match self.pivots.get(&lead) {
                Some(p) => row = axpy(&row, &coef, p),
                None => {
                    let inv = coef.recip();
                    for e in row.iter_mut() {
                        e.1 *= &inv;
                    }
                    self.pivots.insert(lead, row);
                    return;
                }
            }
        }
    }

    fn reduce(&mut self) {
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for c in cols {
            let row = self.pivots.remove(&c).unwrap();
            let mut acc: BTreeMap<usize, Q> = row.into_iter().collect();
            let hits: Vec<usize> = acc
                .keys()
                .copied()
                .filter(|&j| j != c && self.pivots.contains_key(&j))
                .collect();
            for j in hits {
                let f = acc.remove(&j).unwrap();
                for (k, v) in &self.pivots[&j] {
                    if *k == j {
                        continue;
                    }
                    let e = acc.entry(*k).or_insert_with(Q::zero);
                    *e -= &f * v;
                    if e.is_zero() {
                        acc.remove(k);
                    }
                }
            }
            self.pivots.insert(c, acc.into_iter().collect());
        }
    }

    /// Kernel basis in reduced-echelon normal form.
    pub fn nullspace(mut self) -> Vec<Vec<Q>> {
        self.reduce();
        let pivots: Vec<usize> = self.pivots.keys().copied().collect();
        let rows: Vec<BTreeMap<usize, Q>> =
            self.pivots.into_values().map(|r| r.into_iter().collect()).collect();
        kernel_from_rref(self.cols, &pivots, |k, j| rows[k].get(&j).cloned().unwrap_or_else(Q::zero))
    }

    /// Solves `A x = b` where `A` is the stored system over `cols - 1`
    /// unknowns and the last column holds `-b`. Returns the solution with
    /// every free unknown set to zero, or `None` if inconsistent.
    pub fn solve_augmented(mut self) -> Option<Vec<Q>> {
        let last = self.cols - 1;
        self.reduce();
        if self.pivots.contains_key(&last) {
            return None;
        }
        let mut x = vec![Q::zero(); last];
        for (c, row) in &self.pivots {
            if let Some((_, v)) = row.iter().find(|(j, _)| *j == last) {
                x[*c] = -v.clone();
            }
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qi};

    fn qs(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| qi(x)).collect()
    }

    #[test]
    fn small_kernels() {
        assert_eq!(exact_nullspace(&ExactMatrix::from_i64(&[&[1, 1]])), vec![qs(&[-1, 1])]);
        assert!(exact_nullspace(&ExactMatrix::identity(3)).is_empty());
        assert_eq!(
            exact_nullspace(&ExactMatrix::from_i64(&[&[1, 2], &[2, 4]])),
            vec![qs(&[-2, 1])]
        );
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let k = exact_nullspace(&ExactMatrix::zeros(2, 3));
        assert_eq!(k.len(), 3);
        assert_eq!(k[1], qs(&[0, 1, 0]));
    }

    #[test]
    fn rational_entries() {
        let m = ExactMatrix::from_rows(vec![vec![q(1, 2), q(1, 3), qi(0)], vec![qi(0), qi(1), q(-2, 5)]]);
        let k = exact_nullspace(&m);
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn sparse_matches_dense() {
        let m = ExactMatrix::from_i64(&[&[0, 1, 2, 0, 1], &[1, 0, 0, 3, 0], &[1, 1, 2, 3, 1], &[2, 0, 1, 0, 0]]);
        let mut s = SparseSystem::new(5);
        for i in 0..4 {
            s.add_row(m.row(i).iter().cloned().enumerate());
        }
        assert_eq!(s.nullspace(), exact_nullspace(&m));
    }

    #[test]
    fn affine_solve() {
        // x + y = 3, x - y = 1, last column holds -b
        let mut s = SparseSystem::new(3);
        s.add_row([(0, qi(1)), (1, qi(1)), (2, qi(-3))]);
        s.add_row([(0, qi(1)), (1, qi(-1)), (2, qi(-1))]);
        assert_eq!(s.solve_augmented(), Some(qs(&[2, 1])));
        let mut bad = SparseSystem::new(2);
        bad.add_row([(0, qi(0)), (1, qi(1))]);
        assert_eq!(bad.solve_augmented(), None);
    }
}
