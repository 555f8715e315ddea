use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{cross, normalize_point, Arrangement, ArrangementError, CurveArrangement};
use crate::exactla::{MatrixQ, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank2Flat {
    pub flat_id: usize,
    pub members: Vec<usize>,
    pub multiplicity: usize,
}

fn dependent(a: &Arrangement, i: usize, j: usize, k: usize) -> bool {
    let hs = a.hyperplanes();
    if a.ambient_dim() == 2 {
        let c = cross(hs[i].coeffs(), hs[j].coeffs());
        return hs[k].coeffs().iter().zip(&c).map(|(x, y)| x * y).sum::<Rational>().is_zero();
    }
    let m = MatrixQ::from_rows(
        vec![hs[i].coeffs().to_vec(), hs[j].coeffs().to_vec(), hs[k].coeffs().to_vec()],
        a.ambient_dim() + 1,
    );
    m.rank() == 2
}

/// Codimension-2 intersections with the hyperplanes containing them,
/// sorted by member list.
pub fn rank2_flats(a: &Arrangement) -> Vec<Rank2Flat> {
    let r = a.len();
    let mut seen = vec![vec![false; r]; r];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            if seen[i][j] {
                continue;
            }
            let mut members = vec![i, j];
            for k in j + 1..r {
                if !seen[i][k] && dependent(a, i, j, k) {
                    members.push(k);
                }
            }
            for (x, &p) in members.iter().enumerate() {
                for &q in &members[x + 1..] {
                    seen[p][q] = true;
                }
            }
            groups.push(members);
        }
    }
    groups.sort();
    groups
        .into_iter()
        .enumerate()
        .map(|(id, members)| Rank2Flat { flat_id: id, multiplicity: members.len(), members })
        .collect()
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Points where a line meets a conic in P².
fn line_conic_points(
    line: &[Rational],
    conic: &crate::exactla::MPoly,
    li: usize,
    ci: usize,
) -> Result<Vec<Vec<Rational>>, ArrangementError> {
    // Two points spanning the line.
    let m = MatrixQ::from_rows(vec![line.to_vec()], 3);
    let basis = m.kernel();
    let (p, q) = (&basis[0], &basis[1]);
    // conic(s p + t q) = a s² + b s t + c t²
    let at = |s: i64, t: i64| -> Rational {
        let pt: Vec<Rational> = p
            .iter()
            .zip(q)
            .map(|(x, y)| x * Rational::from_integer(BigInt::from(s)) + y * Rational::from_integer(BigInt::from(t)))
            .collect();
        conic.eval(&pt)
    };
    let a = at(1, 0);
    let c = at(0, 1);
    let b = at(1, 1) - &a - &c;
    let combine = |s: &Rational, t: &Rational| -> Vec<Rational> {
        p.iter().zip(q).map(|(x, y)| x * s + y * t).collect()
    };
    let mut out = Vec::new();
    if a.is_zero() {
        // s = 0 is a root; the other root solves b s + c t = 0.
        out.push(combine(&Rational::zero(), &Rational::from_integer(1.into())));
        if !b.is_zero() {
            out.push(combine(&(-c.clone()), &b));
        }
    } else {
        let disc = &b * &b - Rational::from_integer(4.into()) * &a * &c;
        let sq = rational_sqrt(&disc).ok_or(ArrangementError::IrrationalIntersection(li, ci))?;
        let two_a = Rational::from_integer(2.into()) * &a;
        let one = Rational::from_integer(1.into());
        for sgn in [1i64, -1] {
            let s = (-b.clone() + Rational::from_integer(sgn.into()) * &sq) / &two_a;
            out.push(combine(&s, &one));
        }
    }
    Ok(out.into_iter().filter_map(normalize_point).collect())
}

/// Number of points by branch count (lines and smooth conics contribute one
/// branch per point). Plane arrangements only.
pub fn singular_point_census(ca: &CurveArrangement) -> Result<BTreeMap<usize, usize>, ArrangementError> {
    if ca.ambient_dim() != 2 {
        return Err(ArrangementError::Malformed("census requires a plane arrangement".into()));
    }
    let curves = ca.curves();
    let lines: Vec<Option<Vec<Rational>>> = (0..curves.len())
        .map(|i| {
            if i < ca.base.len() {
                Some(ca.base.hyperplanes()[i].coeffs().to_vec())
            } else {
                ca.extra_curves[i - ca.base.len()].as_hyperplane().map(|h| h.coeffs().to_vec())
            }
        })
        .collect();
    let mut points: Vec<Vec<Rational>> = Vec::new();
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            let pts = match (&lines[i], &lines[j]) {
                (Some(a), Some(b)) => normalize_point(cross(a, b)).into_iter().collect(),
                (Some(a), None) => line_conic_points(a, &curves[j].poly, i, j)?,
                (None, Some(b)) => line_conic_points(b, &curves[i].poly, j, i)?,
                (None, None) => return Err(ArrangementError::UnsupportedIntersection(i, j)),
            };
            for p in pts {
                if !points.contains(&p) {
                    points.push(p);
                }
            }
        }
    }
    let mut census = BTreeMap::new();
    for p in &points {
        let branches = curves.iter().filter(|c| c.poly.eval(p).is_zero()).count();
        *census.entry(branches).or_insert(0) += 1;
    }
    Ok(census)
}
