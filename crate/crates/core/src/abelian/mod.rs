//! Spaces of abelian relations of the resonance web: the logarithmic and
//! polylogarithmic ones (kernels of Ψ_i), rational ones, and the twisted
//! lower bound; plus the report that gathers them.

mod modp;
mod rat;
mod report;
mod twisted;

pub use rat::{expand_numerator, rat_dim, RatSpace};
pub use report::{analyze, markdown_row, markdown_table, AnalysisOptions, ComponentSummary, InvariantReport, TABLE_HEADER};
pub use twisted::{twisted_bound, twisted_search, TwistedCertificate, TwistedResult};

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::arrangement::{rank2_flats, Arrangement, CurveArrangement};
use crate::exactla::{MatrixQ, Rational};
use crate::resonance::{component_h1, FiberDivisor, Param};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AbelianError {
    #[error("twisted bound needs at least two components, got {0}")]
    SubsetTooSmall(usize),
    #[error("sampling could not find admissible points")]
    Sampling,
    #[error("negative residual: lower bound {lower} exceeds upper bound {upper}")]
    NegativeResidual { lower: u64, upper: u64 },
    #[error("lattice point fails membership in component {0}")]
    Membership(usize),
    #[error(transparent)]
    Resonance(#[from] crate::resonance::ResonanceError),
    #[error(transparent)]
    Cohomology(#[from] crate::cohomology::CohomologyError),
    #[error(transparent)]
    Web(#[from] crate::web::WebError),
}

/// Ψ_i with columns indexed by `⊕ H¹(C_Σ)^{⊗i}` and rows by `H¹(M)^{⊗i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiMatrix {
    pub level: u32,
    pub block_dims: Vec<usize>,
    pub rows: usize,
    /// Sparse columns `(row, value)`.
    pub columns: Vec<Vec<(usize, Rational)>>,
}

impl PsiMatrix {
    pub fn to_dense(&self) -> MatrixQ {
        let mut m = MatrixQ::zeros(self.rows, self.columns.len());
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                m.set(*i, j, v.clone());
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LogSpace {
    pub level: u32,
    pub dim: usize,
    pub closed: bool,
    #[serde(skip)]
    pub kernel: Option<Vec<Vec<Rational>>>,
}

/// Residue vectors in the coordinates `1..N` (coordinate 0 is determined
/// by the degree-weighted sum).
fn block(fibers: &[(Param, FiberDivisor)], ncurves: usize) -> Vec<Vec<(usize, Rational)>> {
    component_h1(fibers, ncurves)
        .into_iter()
        .map(|v| v.into_iter().enumerate().skip(1).filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i - 1, x)).collect())
        .collect()
}

fn kron(a: &[(usize, Rational)], b: &[(usize, Rational)], bdim: usize) -> Vec<(usize, Rational)> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a {
        for (j, y) in b {
            out.push((i * bdim + j, x * y));
        }
    }
    out
}

pub fn psi_matrix(fibers: &[Vec<(Param, FiberDivisor)>], ncurves: usize, level: u32) -> PsiMatrix {
    assert!(level >= 1);
    let h1 = ncurves - 1;
    let mut columns = Vec::new();
    let mut block_dims = Vec::new();
    for f in fibers {
        let b = block(f, ncurves);
        block_dims.push(b.len());
        let mut cols = b.clone();
        for _ in 1..level {
            cols = cols.iter().flat_map(|c| b.iter().map(move |v| kron(c, v, h1))).collect();
        }
        columns.extend(cols);
    }
    PsiMatrix { level, block_dims, rows: h1.pow(level), columns }
}

/// Rank of sparse vectors by incremental reduction against a pivot table.
pub fn sparse_rank(columns: &[Vec<(usize, Rational)>]) -> usize {
    let mut basis: BTreeMap<usize, BTreeMap<usize, Rational>> = BTreeMap::new();
    for col in columns {
        let mut v: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, x) in col {
            *v.entry(*i).or_insert_with(Rational::zero) += x;
        }
        v.retain(|_, x| !x.is_zero());
        while let Some((&lead, c)) = v.iter().next() {
            let c = c.clone();
            match basis.get(&lead) {
                Some(b) => {
                    for (i, y) in b {
                        let e = v.entry(*i).or_insert_with(Rational::zero);
                        *e -= &c * y;
                        if e.is_zero() {
                            v.remove(i);
                        }
                    }
                }
                None => {
                    let inv = c.recip();
                    for x in v.values_mut() {
                        *x *= &inv;
                    }
                    basis.insert(lead, v);
                    break;
                }
            }
        }
    }
    basis.len()
}

pub fn log_dim(fibers: &[Vec<(Param, FiberDivisor)>], ncurves: usize, level: u32, closed: bool) -> LogSpace {
    let psi = psi_matrix(fibers, ncurves, level);
    let rank = sparse_rank(&psi.columns);
    let kernel = (level == 1).then(|| psi.to_dense().kernel());
    LogSpace { level, dim: psi.columns.len() - rank, closed, kernel }
}

/// `Σ_Σ d_Σ^i − dim N^i`, the count the kernel of Ψ_i must exceed.
pub fn crude_lower_bound(fibers: &[Vec<(Param, FiberDivisor)>], level: u32, n_i: i64) -> i64 {
    fibers.iter().map(|f| (f.len() as i64 - 1).pow(level)).sum::<i64>() - n_i
}

/// `Σ_ℓ (n_ℓ − 1)(n_ℓ − 2)/2` over the lines ℓ of the closed arrangement,
/// `n_ℓ` counting the points of multiplicity ≥ 3 of `a` on ℓ.
pub fn rat_lemma_bound(a: &Arrangement, closed: &CurveArrangement) -> usize {
    if a.ambient_dim() != 2 {
        return 0;
    }
    let hs = a.hyperplanes();
    let points: Vec<Vec<Rational>> = rank2_flats(a)
        .iter()
        .filter(|f| f.multiplicity >= 3)
        .map(|f| crate::arrangement::cross(hs[f.members[0]].coeffs(), hs[f.members[1]].coeffs()))
        .collect();
    closed
        .lines()
        .iter()
        .map(|(_, l)| {
            let n = points.iter().filter(|p| l.eval(p).is_zero()).count();
            if n >= 2 {
                (n - 1) * (n - 2) / 2
            } else {
                0
            }
        })
        .sum()
}
