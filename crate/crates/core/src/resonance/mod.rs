//! Resonance components as pencils with completely decomposable fibers,
//! and the resonance closure.

mod closure;
mod fibers;
mod search;

pub use closure::{resonance_closure, ClosureData, ClosureOptions};
pub use fibers::{enumerate_decomposable_fibers, fiber_poly, validate_declared_pencil};
pub use search::{find_components, local_components, pencil_search, SearchOptions, SearchStats};

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::arrangement::Curve;
use crate::exactla::{fmt_rational, MPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResonanceError {
    #[error("pencil search budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("declared fibers are proportional")]
    Proportional,
    #[error("declared fibers span a space of dimension {0}, expected 2")]
    SpanDimension(usize),
    #[error("declared fibers have degrees {0} and {1}")]
    DegreeMismatch(u32, u32),
    #[error("pencil has only {0} completely decomposable fibers")]
    TooFewFibers(usize),
    #[error("component {index} failed the maximality check: kernel dimension {kernel} vs dimension {dim}")]
    NotMaximal { index: usize, kernel: usize, dim: usize },
    #[error(transparent)]
    Arrangement(#[from] crate::arrangement::ArrangementError),
    #[error(transparent)]
    Cohomology(#[from] crate::cohomology::CohomologyError),
}

/// A divisor `Σ m_i C_i` supported on curves of the arrangement.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiberDivisor {
    entries: Vec<(usize, u32)>,
}

impl FiberDivisor {
    pub fn new(mut entries: Vec<(usize, u32)>) -> Result<Self, String> {
        entries.sort();
        if entries.is_empty() {
            return Err("empty divisor".into());
        }
        if entries.iter().any(|&(_, m)| m == 0) {
            return Err("multiplicities must be positive".into());
        }
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err("repeated curve index".into());
        }
        Ok(FiberDivisor { entries })
    }

    pub fn single(i: usize) -> Self {
        FiberDivisor { entries: vec![(i, 1)] }
    }

    pub fn entries(&self) -> &[(usize, u32)] {
        &self.entries
    }

    pub fn degree(&self, curves: &[Curve]) -> u32 {
        self.entries.iter().map(|&(i, m)| m * curves[i].degree).sum()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.entries.iter().any(|&(j, _)| j == i)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|&(i, _)| i)
    }

    /// Multiplicity vector indexed by curve.
    pub fn vector(&self, ncurves: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); ncurves];
        for &(i, m) in &self.entries {
            v[i] = Rational::from_integer(m.into());
        }
        v
    }
}

/// Pencil parameter `(λ:μ)` of the member `λF + μG`, normalized with first
/// nonzero coordinate 1. Finite values `(1:μ)` sort by `μ`; `(0:1)` is last.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Param {
    pub lambda: Rational,
    pub mu: Rational,
}

impl Param {
    pub fn finite(mu: Rational) -> Self {
        Param { lambda: Rational::one(), mu }
    }

    pub fn infinity() -> Self {
        Param { lambda: Rational::zero(), mu: Rational::one() }
    }

    pub fn is_infinity(&self) -> bool {
        self.lambda.is_zero()
    }

    pub fn member(&self, f: &MPoly, g: &MPoly) -> MPoly {
        f.scale(&self.lambda).add(&g.scale(&self.mu))
    }

    pub fn to_display(&self) -> String {
        if self.is_infinity() {
            "inf".to_string()
        } else {
            fmt_rational(&self.mu)
        }
    }
}

impl Ord for Param {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinity(), other.is_infinity()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => self.mu.cmp(&other.mu),
        }
    }
}

impl PartialOrd for Param {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ComponentKind {
    Local { flat_id: usize },
    NonLocal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResonanceComponent {
    pub generators: (MPoly, MPoly),
    pub fibers: Vec<(Param, FiberDivisor)>,
    pub dimension: usize,
    pub kind: ComponentKind,
}

impl ResonanceComponent {
    pub fn degree(&self) -> u32 {
        self.generators.0.degree().unwrap_or(0)
    }

    pub fn is_local(&self) -> bool {
        matches!(self.kind, ComponentKind::Local { .. })
    }

    /// Fiber divisors in canonical (sorted) order; identifies the pencil.
    pub fn key(&self) -> Vec<FiberDivisor> {
        let mut k: Vec<FiberDivisor> = self.fibers.iter().map(|(_, d)| d.clone()).collect();
        k.sort();
        k
    }
}

/// Residue vectors of `fiber_a − fiber_0` for `a = 1..d`.
pub fn component_h1(fibers: &[(Param, FiberDivisor)], ncurves: usize) -> Vec<Vec<Rational>> {
    let Some((_, f0)) = fibers.first() else { return Vec::new() };
    let v0 = f0.vector(ncurves);
    fibers[1..]
        .iter()
        .map(|(_, d)| d.vector(ncurves).iter().zip(&v0).map(|(a, b)| a - b).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::int;

    #[test]
    fn params_sort_with_infinity_last() {
        let mut v = [Param::infinity(), Param::finite(int(3)), Param::finite(int(-1))];
        v.sort();
        assert_eq!(v[0].mu, int(-1));
        assert!(v[2].is_infinity());
    }

    #[test]
    fn divisor_validation() {
        assert!(FiberDivisor::new(vec![(1, 1), (1, 2)]).is_err());
        assert!(FiberDivisor::new(vec![(1, 0)]).is_err());
        assert_eq!(FiberDivisor::new(vec![(3, 1), (0, 2)]).unwrap().entries(), &[(0, 2), (3, 1)]);
    }

    #[test]
    fn local_classes_are_differences() {
        let fibers: Vec<(Param, FiberDivisor)> =
            [0, 1, 2].iter().map(|&i| (Param::finite(int(i as i64)), FiberDivisor::single(i))).collect();
        let h = component_h1(&fibers, 4);
        assert_eq!(h[0], vec![int(-1), int(1), int(0), int(0)]);
        assert_eq!(h[1], vec![int(-1), int(0), int(1), int(0)]);
    }
}
