//! Hermite normal form and rational points with integral differences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::MatrixQ;
use super::rational::{primitive_integer_vector, Rational};

/// Row-style Hermite normal form: returns `(H, U)` with `U·A = H`, `U`
/// unimodular and `H` in echelon form with positive pivots and reduced
/// entries above each pivot.
pub fn hnf(a: &[Vec<BigInt>], cols: usize) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let m = a.len();
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> =
        (0..m).map(|i| (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        loop {
            let piv = (r..m).filter(|&i| !h[i][c].is_zero()).min_by(|&i, &j| h[i][c].abs().cmp(&h[j][c].abs()));
            let Some(p) = piv else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..m {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = h[i][c].div_floor(&h[r][c]);
                sub_row(&mut h, i, r, &q);
                sub_row(&mut u, i, r, &q);
                if !h[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut().chain(u[r].iter_mut()) {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            if !q.is_zero() {
                sub_row(&mut h, i, r, &q);
                sub_row(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

fn sub_row(a: &mut [Vec<BigInt>], i: usize, r: usize, q: &BigInt) {
    let (lo, hi) = if i < r { (i, r) } else { (r, i) };
    let (x, y) = a.split_at_mut(hi);
    let (dst, src) = if i < r { (&mut x[lo], &y[0]) } else { (&mut y[0], &x[lo]) };
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

/// Z-basis of `{x ∈ Z^cols : A x = 0}`.
pub fn integer_kernel(a: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    // Row-reduce the transpose: rows of U with zero image span the kernel.
    let at: Vec<Vec<BigInt>> = (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect();
    let (h, u) = hnf(&at, a.len());
    h.iter().zip(u).filter(|(hr, _)| hr.iter().all(Zero::is_zero)).map(|(_, ur)| ur).collect()
}

/// Generating data for the tuples `(c_1, …, c_m)` with `B_i c_i − B_j c_j`
/// integral. `free` spans the rational directions (where all `B_i c_i`
/// agree exactly); `lattice` completes them to a generating set.
#[derive(Clone, Debug, Default)]
pub struct IntegralSolutions {
    pub free: Vec<Vec<Vec<Rational>>>,
    pub lattice: Vec<Vec<Vec<Rational>>>,
}

impl IntegralSolutions {
    pub fn generators(&self) -> impl Iterator<Item = &Vec<Vec<Rational>>> {
        self.free.iter().chain(self.lattice.iter())
    }

    pub fn is_empty(&self) -> bool {
        self.free.is_empty() && self.lattice.is_empty()
    }
}

fn split(v: &[Rational], dims: &[usize]) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    let mut off = 0;
    for &d in dims {
        out.push(v[off..off + d].to_vec());
        off += d;
    }
    out
}

/// Blocks share the row count `R`; block `i` is `R × d_i`.
pub fn lattice_integral_solve(blocks: &[MatrixQ]) -> IntegralSolutions {
    let dims: Vec<usize> = blocks.iter().map(MatrixQ::cols).collect();
    let total: usize = dims.iter().sum();
    if blocks.len() <= 1 {
        let free = (0..total)
            .map(|k| {
                let mut v = vec![Rational::zero(); total];
                v[k] = Rational::one();
                split(&v, &dims)
            })
            .collect();
        return IntegralSolutions { free, lattice: Vec::new() };
    }
    let rows = blocks[0].rows();
    // A c = (B_1 c_1 − B_i c_i)_{i ≥ 2}
    let nrow = rows * (blocks.len() - 1);
    let mut a = MatrixQ::zeros(nrow, total);
    for (bi, b) in blocks.iter().enumerate().skip(1) {
        let roff = rows * (bi - 1);
        let coff: usize = dims[..bi].iter().sum();
        for i in 0..rows {
            for j in 0..dims[0] {
                a.set(roff + i, j, blocks[0].get(i, j).clone());
            }
            for j in 0..b.cols() {
                a.set(roff + i, coff + j, -b.get(i, j).clone());
            }
        }
    }
    let (_, ker) = a.rank_kernel();
    let free: Vec<_> = ker.iter().map(|v| split(v, &dims)).collect();

    // Restrict to the pivot columns so the remaining map is injective.
    let rref = a.rref();
    let piv = rref.pivots.clone();
    let ap = MatrixQ::from_columns(&piv.iter().map(|&j| a.column(j)).collect::<Vec<_>>(), nrow);
    // im(ap) ∩ Z^nrow is the integer kernel of the left annihilator of ap.
    let left = ap.transpose().kernel();
    let left_int: Vec<Vec<BigInt>> = left.iter().map(|v| primitive_integer_vector(v)).collect();
    let sat = if left_int.is_empty() {
        (0..nrow)
            .map(|k| (0..nrow).map(|j| if j == k { BigInt::one() } else { BigInt::zero() }).collect())
            .collect()
    } else {
        integer_kernel(&left_int, nrow)
    };
    let mut lattice = Vec::new();
    for w in sat {
        let wq: Vec<Rational> = w.into_iter().map(Rational::from_integer).collect();
        let Some(x) = ap.solve(&wq) else { continue };
        let mut c = vec![Rational::zero(); total];
        for (k, &j) in piv.iter().enumerate() {
            c[j] = x[k].clone();
        }
        if c.iter().any(|q| !q.is_zero()) {
            lattice.push(split(&c, &dims));
        }
    }
    IntegralSolutions { free, lattice }
}
