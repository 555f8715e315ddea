//! Hyperplane arrangements in P^n, optionally extended by low-degree curves.

mod flats;
mod gen;
mod io;

pub use flats::{rank2_flats, singular_point_census, Rank2Flat};
pub use gen::{gen, Family};
pub use io::{parse, serialize};

use num_traits::{One, Zero};

use crate::exactla::{MPoly, MatrixQ, Rational};
use crate::resonance::FiberDivisor;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArrangementError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("hyperplane {index} has {got} coefficients, expected {expected}")]
    WrongLength { index: usize, got: usize, expected: usize },
    #[error("hyperplane {index} is zero")]
    ZeroHyperplane { index: usize },
    #[error("hyperplanes {first} and {second} coincide")]
    Duplicate { first: usize, second: usize },
    #[error("closure curve {index} is reducible or singular")]
    ReducibleCurve { index: usize },
    #[error("closure curve {index}: {reason}")]
    BadCurve { index: usize, reason: String },
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("curves {0} and {1} meet in an irrational point")]
    IrrationalIntersection(usize, usize),
    #[error("intersection of curves {0} and {1} is not supported (two conics)")]
    UnsupportedIntersection(usize, usize),
    #[error("empty arrangement")]
    Empty,
}

/// A linear form, scaled so its first nonzero coefficient is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    coeffs: Vec<Rational>,
}

impl Hyperplane {
    pub fn new(coeffs: Vec<Rational>) -> Option<Self> {
        let lead = coeffs.iter().find(|c| !c.is_zero())?.clone();
        let inv = lead.recip();
        Some(Hyperplane { coeffs: coeffs.into_iter().map(|c| c * &inv).collect() })
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| Rational::from_integer(x.into())).collect()).expect("nonzero form")
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn poly(&self) -> MPoly {
        MPoly::linear(&self.coeffs)
    }

    pub fn eval(&self, p: &[Rational]) -> Rational {
        self.coeffs.iter().zip(p).map(|(a, b)| a * b).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    ambient_dim: usize,
    hyperplanes: Vec<Hyperplane>,
    label: String,
}

impl Arrangement {
    pub fn new(ambient_dim: usize, hyperplanes: Vec<Hyperplane>, label: &str) -> Result<Self, ArrangementError> {
        if hyperplanes.is_empty() {
            return Err(ArrangementError::Empty);
        }
        for (i, h) in hyperplanes.iter().enumerate() {
            if h.coeffs.len() != ambient_dim + 1 {
                return Err(ArrangementError::WrongLength { index: i, got: h.coeffs.len(), expected: ambient_dim + 1 });
            }
            if let Some(j) = hyperplanes[..i].iter().position(|g| g == h) {
                return Err(ArrangementError::Duplicate { first: j, second: i });
            }
        }
        Ok(Arrangement { ambient_dim, hyperplanes, label: label.to_string() })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    /// Appends hyperplanes, rejecting duplicates.
    pub fn extended(&self, extra: &[Hyperplane], label: &str) -> Result<Self, ArrangementError> {
        let mut hs = self.hyperplanes.clone();
        hs.extend_from_slice(extra);
        Arrangement::new(self.ambient_dim, hs, label)
    }
}

/// A curve of degree 1 or 2 adjoined to an arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureCurve {
    polynomial: MPoly,
    degree: u32,
    euler_char: i64,
}

impl ClosureCurve {
    /// Validates homogeneity, degree and irreducibility, and normalizes the
    /// leading coefficient to 1.
    pub fn new(polynomial: MPoly, index: usize) -> Result<Self, ArrangementError> {
        let bad = |reason: &str| ArrangementError::BadCurve { index, reason: reason.to_string() };
        let degree = polynomial.degree().ok_or_else(|| bad("zero polynomial"))?;
        if !polynomial.is_homogeneous() {
            return Err(bad("not homogeneous"));
        }
        match degree {
            1 => {}
            2 => {
                if quadric_rank(&polynomial) < 3 {
                    return Err(ArrangementError::ReducibleCurve { index });
                }
            }
            _ => return Err(bad("degree must be 1 or 2")),
        }
        Ok(ClosureCurve { polynomial: polynomial.monic(), degree, euler_char: 2 })
    }

    pub fn polynomial(&self) -> &MPoly {
        &self.polynomial
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn euler_char(&self) -> i64 {
        self.euler_char
    }

    /// The curve as a hyperplane, when it is a line.
    pub fn as_hyperplane(&self) -> Option<Hyperplane> {
        if self.degree != 1 {
            return None;
        }
        let n = self.polynomial.nvars();
        Hyperplane::new(
            (0..n)
                .map(|i| {
                    let mut e = vec![0; n];
                    e[i] = 1;
                    self.polynomial.coeff(&e)
                })
                .collect(),
        )
    }
}

/// Symmetric matrix of a quadratic form and its rank.
pub fn quadric_matrix(q: &MPoly) -> MatrixQ {
    let n = q.nvars();
    let half = Rational::new(1.into(), 2.into());
    let mut m = MatrixQ::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut e = vec![0; n];
            e[i] += 1;
            e[j] += 1;
            let c = q.coeff(&e);
            if i == j {
                m.set(i, i, c);
            } else {
                let v = &c * &half;
                m.set(i, j, v.clone());
                m.set(j, i, v);
            }
        }
    }
    m
}

fn quadric_rank(q: &MPoly) -> usize {
    quadric_matrix(q).rank()
}

/// A curve of the (possibly extended) arrangement with its invariants.
#[derive(Clone, Debug)]
pub struct Curve {
    pub poly: MPoly,
    pub degree: u32,
    pub euler_char: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeclaredPencil {
    pub fibers: [FiberDivisor; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveArrangement {
    pub base: Arrangement,
    pub extra_curves: Vec<ClosureCurve>,
    pub declared_pencils: Vec<DeclaredPencil>,
}

impl CurveArrangement {
    pub fn from_arrangement(base: Arrangement) -> Self {
        CurveArrangement { base, extra_curves: Vec::new(), declared_pencils: Vec::new() }
    }

    pub fn new(base: Arrangement, extra_curves: Vec<ClosureCurve>) -> Result<Self, ArrangementError> {
        let ca = CurveArrangement { base, extra_curves, declared_pencils: Vec::new() };
        ca.check_curves()?;
        Ok(ca)
    }

    pub(crate) fn check_curves(&self) -> Result<(), ArrangementError> {
        let n = self.base.ambient_dim + 1;
        let r = self.base.len();
        for (k, c) in self.extra_curves.iter().enumerate() {
            let idx = r + k;
            if c.polynomial.nvars() != n {
                return Err(ArrangementError::BadCurve { index: idx, reason: "wrong number of variables".into() });
            }
            if let Some(h) = c.as_hyperplane() {
                if let Some(j) = self.base.hyperplanes.iter().position(|g| *g == h) {
                    return Err(ArrangementError::Duplicate { first: j, second: idx });
                }
            }
            if let Some(j) = self.extra_curves[..k].iter().position(|d| d.polynomial == c.polynomial) {
                return Err(ArrangementError::Duplicate { first: r + j, second: idx });
            }
        }
        Ok(())
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.ambient_dim
    }

    pub fn label(&self) -> &str {
        &self.base.label
    }

    pub fn num_curves(&self) -> usize {
        self.base.len() + self.extra_curves.len()
    }

    /// Hyperplanes first, then the extra curves.
    pub fn curves(&self) -> Vec<Curve> {
        let mut out: Vec<Curve> =
            self.base.hyperplanes.iter().map(|h| Curve { poly: h.poly(), degree: 1, euler_char: 2 }).collect();
        out.extend(self.extra_curves.iter().map(|c| Curve {
            poly: c.polynomial.clone(),
            degree: c.degree,
            euler_char: c.euler_char,
        }));
        out
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.curves().iter().map(|c| c.degree).collect()
    }

    pub fn with_extra(&self, extra: Vec<ClosureCurve>) -> Result<Self, ArrangementError> {
        let mut ca = self.clone();
        ca.extra_curves.extend(extra);
        ca.check_curves()?;
        Ok(ca)
    }

    /// The lines of the arrangement (hyperplanes and linear extra curves)
    /// paired with their curve index.
    pub fn lines(&self) -> Vec<(usize, Hyperplane)> {
        let r = self.base.len();
        let mut out: Vec<(usize, Hyperplane)> = self.base.hyperplanes.iter().cloned().enumerate().collect();
        for (k, c) in self.extra_curves.iter().enumerate() {
            if let Some(h) = c.as_hyperplane() {
                out.push((r + k, h));
            }
        }
        out
    }
}

/// Normalizes a projective point so its first nonzero coordinate is 1.
pub fn normalize_point(p: Vec<Rational>) -> Option<Vec<Rational>> {
    let lead = p.iter().find(|c| !c.is_zero())?.clone();
    if lead.is_one() {
        return Some(p);
    }
    let inv = lead.recip();
    Some(p.into_iter().map(|c| c * &inv).collect())
}

/// Intersection point of two lines in P².
pub fn meet(a: &[Rational], b: &[Rational]) -> Option<Vec<Rational>> {
    normalize_point(cross(a, b))
}

pub fn cross(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    vec![&a[1] * &b[2] - &a[2] * &b[1], &a[2] * &b[0] - &a[0] * &b[2], &a[0] * &b[1] - &a[1] * &b[0]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::int;

    #[test]
    fn hyperplane_canonical_form() {
        let h = Hyperplane::new(vec![int(0), int(2), int(-4)]).unwrap();
        assert_eq!(h.coeffs(), &[int(0), int(1), int(-2)]);
        assert!(Hyperplane::new(vec![int(0), int(0)]).is_none());
    }

    #[test]
    fn duplicates_rejected() {
        let a = Arrangement::new(2, vec![Hyperplane::from_i64(&[1, 0, 0]), Hyperplane::from_i64(&[2, 0, 0])], "d");
        assert!(matches!(a, Err(ArrangementError::Duplicate { first: 0, second: 1 })));
    }

    #[test]
    fn single_hyperplane_is_valid() {
        let a = Arrangement::new(2, vec![Hyperplane::from_i64(&[1, 0, 0])], "one").unwrap();
        assert_eq!(a.len(), 1);
    }

    #[test]
    fn reducible_conic_rejected() {
        let x = MPoly::var(3, 0);
        let y = MPoly::var(3, 1);
        assert!(matches!(ClosureCurve::new(x.mul(&y), 0), Err(ArrangementError::ReducibleCurve { .. })));
        let z = MPoly::var(3, 2);
        let smooth = x.mul(&y).sub(&z.pow(2));
        assert_eq!(ClosureCurve::new(smooth, 0).unwrap().euler_char(), 2);
    }
}
