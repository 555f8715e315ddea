//! Degree ≤ 2 cohomology of the complement: Betti numbers, the quadratic
//! Orlik–Solomon model with its wedge map, the Aomoto complex, and
//! rank-one local systems on real line arrangements.

mod salvetti;

pub use salvetti::local_system_h1;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arrangement::{rank2_flats, singular_point_census, Arrangement, ArrangementError, CurveArrangement};
use crate::exactla::{MatrixQ, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CohomologyError {
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error("wedge model gives h2 = {model}, combinatorial formula gives {formula}")]
    H2Mismatch { model: usize, formula: usize },
    #[error("flat formula gives h2 = {flats}, point census gives {census}")]
    BettiMismatch { flats: i64, census: i64 },
    #[error("class has {got} entries, arrangement has {expected} hyperplanes")]
    IndexMismatch { got: usize, expected: usize },
    #[error("class is zero")]
    ZeroClass,
    #[error("residues do not sum to zero")]
    NotProjective,
    #[error("local system needs {0}")]
    LocalSystem(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiData {
    pub h1: usize,
    pub h2: usize,
    /// Full Poincaré coefficients when the degree-2 data determine them.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poincare_coeffs: Option<Vec<u64>>,
}

/// `Σ_X (m_X − 1) − (r − 1)` over rank-2 flats.
fn flat_h2(a: &Arrangement) -> i64 {
    let s: i64 = rank2_flats(a).iter().map(|f| f.multiplicity as i64 - 1).sum();
    s - (a.len() as i64 - 1)
}

pub fn betti(ca: &CurveArrangement) -> Result<BettiData, CohomologyError> {
    let h1 = ca.num_curves() - 1;
    if ca.ambient_dim() != 2 {
        if !ca.extra_curves.is_empty() {
            return Err(ArrangementError::Degenerate("curves beyond hyperplanes need ambient dimension 2".into()).into());
        }
        let h2 = flat_h2(&ca.base);
        return Ok(BettiData { h1, h2: h2.max(0) as usize, poincare_coeffs: None });
    }
    let census = singular_point_census(ca)?;
    let singular: i64 = census.iter().map(|(&m, &t)| (m as i64 - 1) * t as i64).sum();
    let euler: i64 = ca.curves().iter().map(|c| c.euler_char - 1).sum();
    let h2 = 1 + singular - euler;
    if ca.extra_curves.is_empty() {
        let flats = flat_h2(&ca.base);
        if flats != h2 {
            return Err(CohomologyError::BettiMismatch { flats, census: h2 });
        }
    }
    let h2 = h2.max(0) as usize;
    Ok(BettiData { h1, h2, poincare_coeffs: Some(vec![1, h1 as u64, h2 as u64]) })
}

/// Coefficients of `(1 + 2t)(1 + 3t)⋯(1 + (n+1)t)`.
pub fn poincare_braid(n: usize) -> Vec<u64> {
    let mut c = vec![1u64];
    for a in 2..=(n as u64 + 1) {
        let mut next = vec![0u64; c.len() + 1];
        for (i, &x) in c.iter().enumerate() {
            next[i] += x;
            next[i + 1] += a * x;
        }
        c = next;
    }
    c
}

pub fn n2_dim(bd: &BettiData) -> i64 {
    (bd.h1 * bd.h1) as i64 - bd.h2 as i64
}

/// `Σ e_1^{j_1}⋯e_n^{j_n}` over `j ∈ N^n` with `Σ j = i`, i.e. the degree-`i`
/// coefficient of `Π 1/(1 − e_k t)`.
pub fn fiber_type_ni(exponents: &[u64], i: usize) -> u64 {
    let mut c = vec![0u64; i + 1];
    c[0] = 1;
    for &e in exponents {
        for d in 1..=i {
            c[d] += e * c[d - 1];
        }
    }
    c[i]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeModel {
    pub r: usize,
    pub h1_dim: usize,
    pub h2_dim: usize,
    pub pair_basis: Vec<(usize, usize)>,
    pub relation_matrix: MatrixQ,
    /// Rows span the annihilator of the relations.
    pub quotient_projection: MatrixQ,
}

fn pair_index(r: usize, i: usize, j: usize) -> usize {
    // pairs (i, j), i < j, in lexicographic order
    i * (2 * r - i - 1) / 2 + (j - i - 1)
}

pub fn wedge_model(a: &Arrangement) -> Result<WedgeModel, CohomologyError> {
    let r = a.len();
    let pair_basis: Vec<(usize, usize)> = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).collect();
    let np = pair_basis.len();
    let mut rels = Vec::new();
    for f in rank2_flats(a) {
        let m = &f.members;
        for x in 0..m.len() {
            for y in x + 1..m.len() {
                for z in y + 1..m.len() {
                    let (i, j, k) = (m[x], m[y], m[z]);
                    let mut row = vec![Rational::zero(); np];
                    row[pair_index(r, j, k)] += Rational::one();
                    row[pair_index(r, i, k)] -= Rational::one();
                    row[pair_index(r, i, j)] += Rational::one();
                    rels.push(row);
                }
            }
        }
    }
    let relation_matrix = MatrixQ::from_rows(rels, np);
    let ann = relation_matrix.kernel();
    let quotient_projection = MatrixQ::from_rows(ann, np);
    let mut wm = WedgeModel { r, h1_dim: r.saturating_sub(1), h2_dim: 0, pair_basis, relation_matrix, quotient_projection };
    let basis = projective_basis(r);
    let mut images = Vec::new();
    for s in 0..basis.len() {
        for t in s + 1..basis.len() {
            images.push(wedge(&basis[s], &basis[t], &wm)?);
        }
    }
    let rows = wm.quotient_projection.rows();
    wm.h2_dim = MatrixQ::from_rows(images, rows).rank();
    let formula = flat_h2(a).max(0) as usize;
    if wm.h2_dim != formula {
        return Err(CohomologyError::H2Mismatch { model: wm.h2_dim, formula });
    }
    Ok(wm)
}

/// `e_t − e_0` for `t = 1..r`.
fn projective_basis(r: usize) -> Vec<Vec<Rational>> {
    (1..r)
        .map(|t| {
            let mut v = vec![Rational::zero(); r];
            v[0] = -Rational::one();
            v[t] = Rational::one();
            v
        })
        .collect()
}

/// `u ∧ v` in the coordinates of `quotient_projection`.
pub fn wedge(u: &[Rational], v: &[Rational], wm: &WedgeModel) -> Result<Vec<Rational>, CohomologyError> {
    for x in [u, v] {
        if x.len() != wm.r {
            return Err(CohomologyError::IndexMismatch { got: x.len(), expected: wm.r });
        }
    }
    let raw: Vec<Rational> = wm.pair_basis.iter().map(|&(i, j)| &u[i] * &v[j] - &u[j] * &v[i]).collect();
    Ok(wm.quotient_projection.mul_vec(&raw))
}

/// `dim ker(a ∧ · : H¹ → H²)` on the projective part.
pub fn aomoto_kernel_dim(a: &[Rational], wm: &WedgeModel) -> Result<usize, CohomologyError> {
    if a.len() != wm.r {
        return Err(CohomologyError::IndexMismatch { got: a.len(), expected: wm.r });
    }
    if a.iter().all(Zero::is_zero) {
        return Err(CohomologyError::ZeroClass);
    }
    if !a.iter().sum::<Rational>().is_zero() {
        return Err(CohomologyError::NotProjective);
    }
    let cols = projective_basis(wm.r).iter().map(|b| wedge(a, b, wm)).collect::<Result<Vec<_>, _>>()?;
    let m = MatrixQ::from_columns(&cols, wm.quotient_projection.rows());
    Ok(cols.len() - m.rank())
}

/// `h¹` of the Aomoto complex at `a`.
pub fn aomoto_h1(a: &[Rational], wm: &WedgeModel) -> Result<usize, CohomologyError> {
    Ok(aomoto_kernel_dim(a, wm)? - 1)
}
