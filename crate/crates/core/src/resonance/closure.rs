use std::collections::BTreeMap;

use super::fibers::{divides_member, enumerate_decomposable_fibers};
use super::{FiberDivisor, Param, ResonanceComponent, ResonanceError};
use crate::arrangement::{meet, rank2_flats, ClosureCurve, CurveArrangement, Hyperplane};
use crate::exactla::{homogeneous_monomials, MPoly, MatrixQ, Rational};

#[derive(Clone, Debug)]
pub struct ClosureOptions {
    /// Generate line and conic candidates in P², on top of declared curves.
    pub automatic: bool,
    /// Largest number of points of multiplicity ≥ 4 for the 5-subset conic scan.
    pub max_conic_points: usize,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions { automatic: true, max_conic_points: 12 }
    }
}

#[derive(Clone, Debug)]
pub struct ClosureData {
    /// Curves adjoined to the hyperplanes, in curve-index order after them.
    pub closure_curves: Vec<ClosureCurve>,
    pub closed: CurveArrangement,
    pub closed_fibers: Vec<Vec<(Param, FiberDivisor)>>,
    pub closed_dims: Vec<usize>,
}

fn line_poly(h: &Hyperplane) -> MPoly {
    h.poly()
}

fn sort_key(c: &ClosureCurve) -> (u32, Vec<Rational>) {
    (c.degree(), c.polynomial().coefficient_vector(c.degree()))
}

/// The conic through five points, when it is unique and smooth.
fn conic_through(points: &[&Vec<Rational>]) -> Option<MPoly> {
    let monos = homogeneous_monomials(3, 2);
    let rows: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| monos.iter().map(|m| MPoly::from_terms(3, [(m.0.clone(), Rational::from_integer(1.into()))]).eval(p)).collect())
        .collect();
    let ker = MatrixQ::from_rows(rows, monos.len()).kernel();
    if ker.len() != 1 {
        return None;
    }
    let q = MPoly::from_terms(3, monos.iter().map(|m| m.0.clone()).zip(ker[0].iter().cloned()));
    Some(q)
}

/// Unique common member of two pencils, if their spans meet in a line.
fn common_member(a: &(MPoly, MPoly), b: &(MPoly, MPoly), d: u32) -> Option<MPoly> {
    let cols = vec![
        a.0.coefficient_vector(d),
        a.1.coefficient_vector(d),
        b.0.scale(&Rational::from_integer((-1).into())).coefficient_vector(d),
        b.1.scale(&Rational::from_integer((-1).into())).coefficient_vector(d),
    ];
    let m = MatrixQ::from_columns(&cols, cols[0].len());
    let ker = m.kernel();
    if ker.len() != 1 {
        return None;
    }
    Some(a.0.scale(&ker[0][0]).add(&a.1.scale(&ker[0][1])))
}

fn automatic_candidates(ca: &CurveArrangement, comps: &[ResonanceComponent], opts: &ClosureOptions) -> Vec<MPoly> {
    let a = &ca.base;
    let hs = a.hyperplanes();
    let mut points: BTreeMap<Vec<Rational>, usize> = BTreeMap::new();
    for f in rank2_flats(a) {
        if let Some(p) = meet(hs[f.members[0]].coeffs(), hs[f.members[1]].coeffs()) {
            points.insert(p, f.multiplicity);
        }
    }
    let pts: Vec<&Vec<Rational>> = points.keys().collect();
    let mut out = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if let Some(h) = meet(pts[i], pts[j]).and_then(Hyperplane::new) {
                out.push(line_poly(&h));
            }
        }
    }
    let rich: Vec<&Vec<Rational>> = points.iter().filter(|(_, &m)| m >= 4).map(|(p, _)| p).collect();
    if rich.len() >= 5 && rich.len() <= opts.max_conic_points {
        let n = rich.len();
        let mut idx = [0usize, 1, 2, 3, 4];
        loop {
            let sel: Vec<&Vec<Rational>> = idx.iter().map(|&t| rich[t]).collect();
            if let Some(q) = conic_through(&sel) {
                out.push(q);
            }
            // next 5-subset in lexicographic order
            let mut k = 5;
            while k > 0 && idx[k - 1] == n - 5 + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            for t in k..5 {
                idx[t] = idx[t - 1] + 1;
            }
        }
    }
    for x in 0..comps.len() {
        for y in x + 1..comps.len() {
            let d = comps[x].degree();
            if d == 2 && comps[y].degree() == 2 {
                if let Some(q) = common_member(&comps[x].generators, &comps[y].generators, d) {
                    out.push(q);
                }
            }
        }
    }
    out
}

/// Adjoins every candidate curve dividing members of at least two of the
/// given pencils, and recomputes the fibers of each pencil over the result.
pub fn resonance_closure(
    ca: &CurveArrangement,
    comps: &[ResonanceComponent],
    opts: &ClosureOptions,
) -> Result<ClosureData, ResonanceError> {
    let r = ca.base.len();
    let mut candidates: Vec<MPoly> = ca.extra_curves.iter().map(|c| c.polynomial().clone()).collect();
    if opts.automatic && ca.ambient_dim() == 2 {
        candidates.extend(automatic_candidates(ca, comps, opts));
    }
    let base_lines: Vec<MPoly> = ca.base.hyperplanes().iter().map(line_poly).collect();
    let mut declared = Vec::new();
    let mut automatic = Vec::new();
    let ndeclared = ca.extra_curves.len();
    for (k, p) in candidates.into_iter().enumerate() {
        let Ok(c) = ClosureCurve::new(p, r + k) else { continue };
        let poly = c.polynomial();
        if base_lines.iter().any(|l| l.monic() == *poly) {
            continue;
        }
        let hits = comps.iter().filter(|s| divides_member(&s.generators.0, &s.generators.1, poly)).count();
        if hits < 2 {
            continue;
        }
        if k < ndeclared {
            declared.push(c);
        } else {
            automatic.push(c);
        }
    }
    automatic.sort_by_key(sort_key);
    automatic.dedup();
    automatic.retain(|c| !declared.iter().any(|d| d.polynomial() == c.polynomial()));
    let mut closure_curves = declared;
    closure_curves.extend(automatic);
    let mut closed = ca.clone();
    closed.extra_curves.clear();
    let closed = closed.with_extra(closure_curves.clone())?;
    let curves = closed.curves();
    let all: Vec<usize> = (0..curves.len()).collect();
    let closed_fibers: Vec<Vec<(Param, FiberDivisor)>> = comps
        .iter()
        .map(|s| enumerate_decomposable_fibers(&s.generators.0, &s.generators.1, &curves, &all))
        .collect();
    let closed_dims = closed_fibers.iter().map(|f| f.len() - 1).collect();
    Ok(ClosureData { closure_curves, closed, closed_fibers, closed_dims })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{gen, Family};
    use crate::resonance::{find_components, SearchOptions};

    fn close(f: Family) -> (Vec<ResonanceComponent>, ClosureData) {
        let ca = gen(&f).unwrap();
        let (comps, _) = find_components(&ca, &SearchOptions::default()).unwrap();
        let cd = resonance_closure(&ca, &comps, &ClosureOptions::default()).unwrap();
        (comps, cd)
    }

    #[test]
    fn braid_is_closed() {
        let (_, cd) = close(Family::Braid(2));
        assert!(cd.closure_curves.is_empty());
    }

    #[test]
    fn a0_gains_three_lines() {
        let (comps, cd) = close(Family::A0);
        assert_eq!(cd.closure_curves.len(), 3);
        assert!(cd.closure_curves.iter().all(|c| c.degree() == 1));
        for (c, d) in comps.iter().zip(&cd.closed_dims) {
            assert_eq!(*d, 4);
            assert!(*d >= c.dimension);
        }
    }

    #[test]
    fn closure_is_idempotent() {
        for f in [Family::A0, Family::BolExt(2)] {
            let ca = gen(&f).unwrap();
            let (comps, _) = find_components(&ca, &SearchOptions::default()).unwrap();
            let cd = resonance_closure(&ca, &comps, &ClosureOptions::default()).unwrap();
            let again = resonance_closure(&cd.closed, &comps, &ClosureOptions::default()).unwrap();
            assert_eq!(again.closure_curves, cd.closure_curves);
            assert_eq!(again.closed_dims, cd.closed_dims);
        }
    }
}
