//! Abelian relations whose components are rational functions on the
//! pencils' base curves.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::modp;
use super::AbelianError;
use crate::arrangement::{Curve, CurveArrangement};
use crate::exactla::{MPoly, Rational};
use crate::resonance::{FiberDivisor, Param};
use crate::sampling::PointStream;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatSpace {
    pub pole_order: u32,
    /// Dimension at pole orders `1, 2, …`.
    pub dims: Vec<usize>,
    pub dim: usize,
    pub stabilized: bool,
    /// Every reported dimension comes from symbolically verified relations
    /// and matches the modular upper bound.
    pub exact: bool,
    pub pole_sets: Vec<Vec<String>>,
}

/// `(P_num / P_den)^k` for fibers of one pencil.
#[derive(Clone, Copy, Debug)]
struct Term {
    comp: usize,
    num: usize,
    den: usize,
    k: u32,
}

fn basis(fibers: &[Vec<(Param, FiberDivisor)>], p: u32) -> Vec<Term> {
    let mut out = Vec::new();
    for (s, f) in fibers.iter().enumerate() {
        for k in 1..=p {
            out.push(Term { comp: s, num: 1, den: 0, k });
        }
        for a in 1..f.len() {
            for k in 1..=p {
                out.push(Term { comp: s, num: 0, den: a, k });
            }
        }
    }
    out
}

fn fiber_value<T: Clone>(d: &FiberDivisor, cv: &[T], one: T, mul: impl Fn(&T, &T) -> T) -> T {
    let mut acc = one;
    for &(i, m) in d.entries() {
        for _ in 0..m {
            acc = mul(&acc, &cv[i]);
        }
    }
    acc
}

/// Values of every basis function at a point where no curve vanishes, then
/// the constant function.
fn row_exact(fibers: &[Vec<(Param, FiberDivisor)>], terms: &[Term], cv: &[Rational]) -> Vec<Rational> {
    let fv: Vec<Vec<Rational>> = fibers
        .iter()
        .map(|f| f.iter().map(|(_, d)| fiber_value(d, cv, Rational::one(), |a, b| a * b)).collect())
        .collect();
    let mut row: Vec<Rational> = terms
        .iter()
        .map(|t| {
            let base = &fv[t.comp][t.num] / &fv[t.comp][t.den];
            num_traits::pow(base, t.k as usize)
        })
        .collect();
    row.push(Rational::one());
    row
}

fn row_mod(fibers: &[Vec<(Param, FiberDivisor)>], terms: &[Term], cv: &[u64], p: u64) -> Vec<u64> {
    let fv: Vec<Vec<u64>> = fibers
        .iter()
        .map(|f| f.iter().map(|(_, d)| fiber_value(d, cv, 1u64, |a, b| modp::mul(*a, *b, p))).collect())
        .collect();
    let mut row: Vec<u64> = terms
        .iter()
        .map(|t| {
            let base = modp::mul(fv[t.comp][t.num], modp::inv(fv[t.comp][t.den], p), p);
            modp::pow(base, t.k as u64, p)
        })
        .collect();
    row.push(1);
    row
}

fn curve_values(curves: &[Curve], x: &[Rational]) -> Option<Vec<Rational>> {
    let cv: Vec<Rational> = curves.iter().map(|c| c.poly.eval(x)).collect();
    (!cv.iter().any(Zero::is_zero)).then_some(cv)
}

/// Degree of the common denominator of the terms used by `v`.
fn denominator_degree(fibers: &[Vec<(Param, FiberDivisor)>], terms: &[Term], v: &[Rational], curves: &[Curve]) -> u32 {
    let mut e = vec![0u32; curves.len()];
    for (t, c) in terms.iter().zip(v) {
        if c.is_zero() {
            continue;
        }
        for &(i, m) in fibers[t.comp][t.den].1.entries() {
            e[i] = e[i].max(m * t.k);
        }
    }
    e.iter().zip(curves).map(|(x, c)| x * c.degree).sum()
}

/// Candidate values for a grid coordinate: 0, 1, −1, 2, −2, …
fn grid_value(i: usize) -> Rational {
    let k = i.div_ceil(2) as i64;
    Rational::from_integer(BigInt::from(if i % 2 == 1 { k } else { -k }))
}

/// Whether some curve vanishes on the affine subspace fixing the first
/// coordinates to `prefix`.
fn vanishes_on_slice(curves: &[Curve], prefix: &[Rational], n: usize) -> bool {
    let free = n - prefix.len();
    // new variables: the free affine coordinates, then the homogenizing one
    let m = free + 1;
    let mut s: Vec<Vec<Rational>> = Vec::with_capacity(n + 1);
    for v in prefix {
        let mut row = vec![Rational::zero(); m];
        row[free] = v.clone();
        s.push(row);
    }
    for j in 0..free {
        let mut row = vec![Rational::zero(); m];
        row[j] = Rational::one();
        s.push(row);
    }
    let mut row = vec![Rational::zero(); m];
    row[free] = Rational::one();
    s.push(row);
    curves.iter().any(|c| c.poly.linear_substitute(&s).is_zero())
}

/// Proves `Σ v_T f_T + v_const ≡ 0`: after clearing the common denominator
/// the numerator has total degree ≤ δ, so it is zero once it vanishes on a
/// grid with δ + 1 admissible values per coordinate.
fn verify_on_grid(
    fibers: &[Vec<(Param, FiberDivisor)>],
    terms: &[Term],
    curves: &[Curve],
    n: usize,
    v: &[Rational],
) -> bool {
    let delta = denominator_degree(fibers, terms, v, curves) as usize;
    fn rec(
        prefix: &mut Vec<Rational>,
        need: usize,
        n: usize,
        check: &mut dyn FnMut(&[Rational]) -> Option<bool>,
        curves: &[Curve],
    ) -> bool {
        let mut found = 0;
        let mut i = 0;
        while found < need {
            prefix.push(grid_value(i));
            i += 1;
            let ok = if prefix.len() == n {
                match check(prefix) {
                    None => {
                        prefix.pop();
                        continue;
                    }
                    Some(z) => z,
                }
            } else {
                if vanishes_on_slice(curves, prefix, n) {
                    prefix.pop();
                    continue;
                }
                rec(prefix, need, n, check, curves)
            };
            prefix.pop();
            if !ok {
                return false;
            }
            found += 1;
        }
        true
    }
    let mut check = |x: &[Rational]| -> Option<bool> {
        let mut h = x.to_vec();
        h.push(Rational::one());
        let cv = curve_values(curves, &h)?;
        let row = row_exact(fibers, terms, &cv);
        let s: Rational = row.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(a, c)| a * c).sum();
        Some(s.is_zero())
    };
    rec(&mut Vec::new(), delta + 1, n, &mut check, curves)
}

struct Samples {
    exact: Vec<Vec<Rational>>,
}

fn sample_points(curves: &[Curve], n: usize, count: usize, stream: &mut PointStream) -> Samples {
    let mut exact = Vec::with_capacity(count);
    let mut misses = 0;
    while exact.len() < count {
        let h = stream.height();
        let mut x: Vec<Rational> = (0..n).map(|_| Rational::from_integer(stream.small_int(-h, h).into())).collect();
        x.push(Rational::one());
        match curve_values(curves, &x) {
            Some(cv) => exact.push(cv),
            None => {
                misses += 1;
                if misses % 20 == 0 {
                    stream.grow();
                }
            }
        }
    }
    Samples { exact }
}

fn to_big(ker: &[Vec<u64>]) -> Vec<Vec<BigInt>> {
    ker.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Modular kernel of the evaluation matrix for each prime; vectors are
/// rebuilt by CRT and rational reconstruction.
fn candidate_kernel(
    fibers: &[Vec<(Param, FiberDivisor)>],
    terms: &[Term],
    samples: &Samples,
    primes: &[u64],
) -> (usize, Vec<Vec<Vec<Rational>>>) {
    let cols = terms.len() + 1;
    let mut upper = usize::MAX;
    let mut acc: Option<(Vec<usize>, Vec<Vec<BigInt>>, BigInt)> = None;
    let mut attempts = Vec::new();
    for &p in primes {
        let Some(rows) = samples
            .exact
            .iter()
            .map(|cv| {
                let c: Option<Vec<u64>> = cv.iter().map(|x| modp::reduce(x, p).filter(|&y| y != 0)).collect();
                c.map(|c| row_mod(fibers, terms, &c, p))
            })
            .collect::<Option<Vec<_>>>()
        else {
            continue;
        };
        let (piv, ker) = modp::kernel(rows, cols, p);
        upper = upper.min(ker.len());
        if ker.is_empty() {
            return (0, Vec::new());
        }
        acc = match acc.take() {
            None => Some((piv, to_big(&ker), BigInt::from(p))),
            Some((ap, av, m)) if ap == piv && av.len() == ker.len() => {
                let merged =
                    av.iter().zip(&ker).map(|(a, b)| a.iter().zip(b).map(|(x, &y)| modp::crt(x, &m, y, p)).collect()).collect();
                Some((ap, merged, m * BigInt::from(p)))
            }
            // unlucky prime or different kernel: restart from the larger one
            Some(prev) => {
                if ker.len() < prev.1.len() {
                    Some((piv, to_big(&ker), BigInt::from(p)))
                } else {
                    Some(prev)
                }
            }
        };
        if let Some((_, av, m)) = &acc {
            let rec: Option<Vec<Vec<Rational>>> =
                av.iter().map(|v| v.iter().map(|x| modp::rational_reconstruct(x, m)).collect()).collect();
            if let Some(r) = rec {
                attempts.push(r);
            }
        }
    }
    (upper, attempts)
}

/// Dimension of the relation space at pole order `p`: a verified lower bound
/// and the modular upper bound.
fn dim_at_order(
    fibers: &[Vec<(Param, FiberDivisor)>],
    closed: &CurveArrangement,
    p: u32,
    seed: u64,
) -> Result<(usize, usize), AbelianError> {
    let curves = closed.curves();
    let n = closed.ambient_dim();
    let terms = basis(fibers, p);
    let cols = terms.len() + 1;
    let primes = modp::primes(4);
    let mut stream = PointStream::new(seed ^ (p as u64).wrapping_mul(0x9e37_79b9), 4 * cols as i64);
    let mut best = (0, usize::MAX);
    for round in 0..3 {
        let samples = sample_points(&curves, n, cols + 10 + round * cols, &mut stream);
        let (upper, attempts) = candidate_kernel(fibers, &terms, &samples, &primes);
        best.1 = best.1.min(upper);
        if upper == 0 {
            return Ok((0, 0));
        }
        for vecs in attempts.iter().rev() {
            let verified = vecs.iter().filter(|v| verify_on_grid(fibers, &terms, &curves, n, v)).count();
            best.0 = best.0.max(verified);
            if verified == upper {
                return Ok((verified, upper));
            }
        }
    }
    if best.1 == usize::MAX {
        return Err(AbelianError::Sampling);
    }
    Ok(best)
}

/// Sweeps pole orders `1..=p_max`, stopping once two consecutive orders
/// agree.
pub fn rat_dim(
    fibers: &[Vec<(Param, FiberDivisor)>],
    closed: &CurveArrangement,
    p_max: u32,
    seed: u64,
) -> Result<RatSpace, AbelianError> {
    let pole_sets = fibers.iter().map(|f| f.iter().map(|(p, _)| p.to_display()).collect()).collect();
    let mut dims = Vec::new();
    let mut exact = true;
    let mut stabilized = false;
    for p in 1..=p_max.max(1) {
        let (lo, hi) = dim_at_order(fibers, closed, p, seed)?;
        exact &= lo == hi;
        dims.push(lo);
        if dims.len() >= 2 && dims[dims.len() - 1] == dims[dims.len() - 2] {
            stabilized = true;
            break;
        }
    }
    let dim = *dims.last().expect("at least one order");
    Ok(RatSpace { pole_order: dims.len() as u32, dims, dim, stabilized, exact, pole_sets })
}

/// Clears denominators and expands the numerator of a relation; used to
/// cross-check the grid certificate on small cases.
pub fn expand_numerator(
    fibers: &[Vec<(Param, FiberDivisor)>],
    p: u32,
    curves: &[Curve],
    v: &[Rational],
) -> MPoly {
    let terms = basis(fibers, p);
    let nv = curves[0].poly.nvars();
    let mut e = vec![0u32; curves.len()];
    for (t, c) in terms.iter().zip(v) {
        if !c.is_zero() {
            for &(i, m) in fibers[t.comp][t.den].1.entries() {
                e[i] = e[i].max(m * t.k);
            }
        }
    }
    let power = |ex: &[u32]| -> MPoly {
        ex.iter().enumerate().fold(MPoly::one(nv), |acc, (i, &k)| if k == 0 { acc } else { acc.mul(&curves[i].poly.pow(k)) })
    };
    let mut total = power(&e).scale(&v[terms.len()]);
    for (t, c) in terms.iter().zip(v) {
        if c.is_zero() {
            continue;
        }
        let mut ex = e.clone();
        for &(i, m) in fibers[t.comp][t.den].1.entries() {
            ex[i] -= m * t.k;
        }
        let mut num = crate::resonance::fiber_poly(curves, &fibers[t.comp][t.num].1).pow(t.k);
        num = num.mul(&power(&ex));
        total = total.add(&num.scale(c));
    }
    total
}
