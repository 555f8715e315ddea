//! Dense rational matrices with fraction-free elimination.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::rational::{lcm_of_denominators, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixQ {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl MatrixQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixQ { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed when there are no rows.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        MatrixQ { rows: r, cols, data }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect(),
            cols,
        )
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(columns: &[Vec<Rational>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> MatrixQ {
        let mut t = MatrixQ::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut s = Rational::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += a * b;
                    }
                }
                s
            })
            .collect()
    }

    pub fn mul(&self, other: &MatrixQ) -> MatrixQ {
        assert_eq!(self.cols, other.rows);
        let mut out = MatrixQ::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    /// Horizontal concatenation.
    pub fn hstack(blocks: &[MatrixQ]) -> MatrixQ {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = MatrixQ::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            for i in 0..rows {
                for j in 0..b.cols {
                    out.set(i, off + j, b.get(i, j).clone());
                }
            }
            off += b.cols;
        }
        out
    }

    pub fn rank(&self) -> usize {
        echelon(self).pivots.len()
    }

    /// Rank and a kernel basis read off the reduced row-echelon form: one
    /// vector per free column, with a 1 in that column.
    pub fn rank_kernel(&self) -> (usize, Vec<Vec<Rational>>) {
        let rref = self.rref();
        let rank = rref.pivots.len();
        let kernel = kernel_from_rref(&rref, self.cols);
        (rank, kernel)
    }

    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        self.rank_kernel().1
    }

    /// Reduced row-echelon form (nonzero rows only) with pivot columns.
    pub fn rref(&self) -> Rref {
        let ech = echelon(self);
        let r = ech.pivots.len();
        let mut rows: Vec<Vec<Rational>> = ech
            .rows
            .into_iter()
            .take(r)
            .map(|row| row.into_iter().map(Rational::from_integer).collect())
            .collect();
        for k in (0..r).rev() {
            let pc = ech.pivots[k];
            let inv = rows[k][pc].recip();
            for x in rows[k].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
            for i in 0..k {
                let f = rows[i][pc].clone();
                if f.is_zero() {
                    continue;
                }
                for j in pc..self.cols {
                    if !rows[k][j].is_zero() {
                        let d = &f * &rows[k][j];
                        rows[i][j] -= d;
                    }
                }
            }
        }
        Rref { rows, pivots: ech.pivots }
    }

    /// Solves `self · x = b` exactly; returns one solution if consistent.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = MatrixQ::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let rref = aug.rref();
        if rref.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (k, &pc) in rref.pivots.iter().enumerate() {
            x[pc] = rref.rows[k][self.cols].clone();
        }
        Some(x)
    }
}

#[derive(Clone, Debug)]
pub struct Rref {
    pub rows: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
}

fn kernel_from_rref(rref: &Rref, cols: usize) -> Vec<Vec<Rational>> {
    let mut is_pivot = vec![false; cols];
    for &p in &rref.pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for f in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::zero(); cols];
        v[f] = Rational::one();
        for (k, &pc) in rref.pivots.iter().enumerate() {
            let x = &rref.rows[k][f];
            if !x.is_zero() {
                v[pc] = -x.clone();
            }
        }
        out.push(v);
    }
    out
}

/// Integer row-echelon form produced by Bareiss elimination.
pub struct IntEchelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

fn integer_rows(m: &MatrixQ) -> Vec<Vec<BigInt>> {
    (0..m.rows)
        .map(|i| {
            let row = m.row(i);
            let l = Rational::from_integer(lcm_of_denominators(row.iter()));
            row.iter().map(|q| (q * &l).to_integer()).collect()
        })
        .collect()
}

/// Fraction-free elimination. Runs on `i128` while every intermediate fits
/// and restarts on big integers otherwise.
pub fn echelon(m: &MatrixQ) -> IntEchelon {
    let rows = integer_rows(m);
    let small: Option<Vec<Vec<i128>>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().map(i128::from)).collect::<Option<Vec<_>>>())
        .collect();
    if let Some(mut a) = small {
        if let Some(pivots) = bareiss_i128(&mut a, m.cols) {
            let rows = a.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
            return IntEchelon { rows, pivots };
        }
    }
    let mut a = rows;
    let pivots = bareiss_big(&mut a, m.cols);
    IntEchelon { rows: a, pivots }
}

fn bareiss_i128(a: &mut [Vec<i128>], cols: usize) -> Option<Vec<usize>> {
    let m = a.len();
    let mut prev: i128 = 1;
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        let piv = a[r][c];
        let (top, rest) = a.split_at_mut(r + 1);
        let prow = &top[r];
        for row in rest.iter_mut() {
            let f = row[c];
            if f == 0 {
                if piv != prev {
                    for x in row[c + 1..].iter_mut() {
                        if *x != 0 {
                            *x = x.checked_mul(piv)? / prev;
                        }
                    }
                }
            } else {
                for j in c + 1..cols {
                    let t = piv.checked_mul(row[j])?.checked_sub(f.checked_mul(prow[j])?)?;
                    row[j] = t / prev;
                }
                row[c] = 0;
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    Some(pivots)
}

fn bareiss_big(a: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let m = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let piv = a[r][c].clone();
        let (top, rest) = a.split_at_mut(r + 1);
        let prow = &top[r];
        for row in rest.iter_mut() {
            if row[c].is_zero() {
                if piv != prev {
                    for x in row[c + 1..].iter_mut() {
                        if !x.is_zero() {
                            *x = &*x * &piv / &prev;
                        }
                    }
                }
            } else {
                let f = std::mem::take(&mut row[c]);
                for j in c + 1..cols {
                    let mut t = &piv * &row[j];
                    if !prow[j].is_zero() {
                        t -= &f * &prow[j];
                    }
                    row[j] = t / &prev;
                }
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Plain rational Gauss–Jordan elimination. Slow; kept as a reference
/// implementation for cross-checking [`MatrixQ::rank_kernel`].
pub fn naive_rank_kernel(m: &MatrixQ) -> (usize, Vec<Vec<Rational>>) {
    let mut a: Vec<Vec<Rational>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let cols = m.cols();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    let rref = Rref { rows: a, pivots };
    let k = kernel_from_rref(&rref, cols);
    (r, k)
}
