//! Sparse multivariate polynomials over Q in graded-lex order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::rational::{fmt_rational, Rational};
use super::ExactError;

/// Exponent vector ordered by total degree, then lexicographically with
/// variable 0 the largest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Mono, Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Mono(vec![0; nvars]), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(Mono(e), Rational::one());
        p
    }

    /// The linear form `Σ c_i x_i`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(Mono(e), c.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(Mono(e), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(&Mono(e.to_vec())).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<(&Mono, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.leading().map(|(m, _)| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Mono::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    fn add_term(&mut self, m: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut acc: BTreeMap<Mono, Rational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let v = c1 * c2;
                match acc.get_mut(&m) {
                    Some(x) => *x += v,
                    None => {
                        acc.insert(m, v);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        MPoly { nvars: self.nvars, terms: acc }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut out = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Division by a single polynomial in graded-lex order: `self = q·b + r`
    /// with no term of `r` divisible by the leading monomial of `b`.
    pub fn divmod(&self, b: &MPoly) -> Result<(MPoly, MPoly), ExactError> {
        assert_eq!(self.nvars, b.nvars);
        let (lm, lc) = match b.leading() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(ExactError::DivisionByZero),
        };
        let lc_inv = lc.recip();
        let mut p = self.clone();
        let mut q = Self::zero(self.nvars);
        let mut r = Self::zero(self.nvars);
        while let Some((m, c)) = p.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if lm.divides(&m) {
                let tm = m.div(&lm);
                let tc = &c * &lc_inv;
                for (bm, bc) in &b.terms {
                    p.add_term(bm.mul(&tm), -(bc * &tc));
                }
                q.add_term(tm, tc);
            } else {
                p.terms.remove(&m);
                r.add_term(m, c);
            }
        }
        Ok((q, r))
    }

    /// Quotient when `b` divides `self` exactly.
    pub fn div_exact(&self, b: &MPoly) -> Option<MPoly> {
        match self.divmod(b) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let maxdeg: Vec<u32> =
            (0..self.nvars).map(|i| self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)).collect();
        let powers: Vec<Vec<Rational>> = point
            .iter()
            .zip(&maxdeg)
            .map(|(x, &d)| {
                let mut v = vec![Rational::one()];
                for k in 1..=d as usize {
                    let next = &v[k - 1] * x;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut s = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= &powers[i][e as usize];
                }
            }
            s += t;
        }
        s
    }

    pub fn partial(&self, i: usize) -> MPoly {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut n = m.0.clone();
                n[i] -= 1;
                out.add_term(Mono(n), c * Rational::from_integer(e.into()));
            }
        }
        out
    }

    /// Substitutes a linear form for each variable: `x_i ↦ Σ_j s[i][j] y_j`.
    pub fn linear_substitute(&self, s: &[Vec<Rational>]) -> MPoly {
        assert_eq!(s.len(), self.nvars);
        let m = s.first().map_or(0, Vec::len);
        let images: Vec<MPoly> = s.iter().map(|row| MPoly::linear(row)).collect();
        let mut out = MPoly::zero(m);
        for (mono, c) in &self.terms {
            let mut t = MPoly::constant(m, c.clone());
            for (i, &e) in mono.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&images[i].pow(e));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Coefficients on the degree-`d` monomials, listed in increasing
    /// graded-lex order.
    pub fn coefficient_vector(&self, d: u32) -> Vec<Rational> {
        homogeneous_monomials(self.nvars, d).iter().map(|m| self.coeff(&m.0)).collect()
    }

    /// Rescales so the leading coefficient is 1.
    pub fn monic(&self) -> MPoly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }
}

/// All monomials of degree `d` in `n` variables in increasing order.
pub fn homogeneous_monomials(n: usize, d: u32) -> Vec<Mono> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Mono>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(Mono(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in 0..=d {
            prefix.push(e);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Mono(vec![]));
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out.sort();
    out
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", fmt_rational(c))?;
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rational::int;

    fn lin(c: &[i64]) -> MPoly {
        MPoly::linear(&c.iter().map(|&x| int(x)).collect::<Vec<_>>())
    }

    #[test]
    fn difference_of_squares() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let p = x.sub(&y).mul(&x.add(&y));
        let expect = x.pow(2).sub(&y.pow(2));
        assert_eq!(p, expect);
    }

    #[test]
    fn divmod_of_sum_of_squares_by_x() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let (q, r) = x.pow(2).add(&y.pow(2)).divmod(&x).unwrap();
        assert_eq!(q, x);
        assert_eq!(r, y.pow(2));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(MPoly::one(2).divmod(&MPoly::zero(2)).is_err());
    }

    #[test]
    fn eval_product_of_braid_lines() {
        let forms = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 0, -1], [0, 1, -1], [1, -1, 0]];
        let p = forms.iter().fold(MPoly::one(3), |acc, c| acc.mul(&lin(c)));
        assert_eq!(p.eval(&[int(2), int(3), int(1)]), int(-12));
    }

    #[test]
    fn partial_derivative() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let p = x.pow(3).mul(&y).add(&y.pow(2));
        assert_eq!(p.partial(0), x.pow(2).mul(&y).scale(&int(3)));
        assert_eq!(p.partial(1), x.pow(3).add(&y.scale(&int(2))));
    }

    #[test]
    fn monomial_order_is_graded() {
        let mons = homogeneous_monomials(3, 2);
        assert_eq!(mons.len(), 6);
        assert_eq!(mons.last().unwrap().0, vec![2, 0, 0]);
        assert!(Mono(vec![0, 0, 3]) > Mono(vec![2, 0, 0]));
    }

    #[test]
    fn substitution() {
        // x ↦ u + v, y ↦ u − v applied to x·y gives u² − v².
        let p = MPoly::var(2, 0).mul(&MPoly::var(2, 1));
        let s = vec![vec![int(1), int(1)], vec![int(1), int(-1)]];
        let u = MPoly::var(2, 0);
        let v = MPoly::var(2, 1);
        assert_eq!(p.linear_substitute(&s), u.pow(2).sub(&v.pow(2)));
    }
}
