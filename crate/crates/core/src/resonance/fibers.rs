use std::collections::BTreeMap;

use num_traits::Zero;

use super::{ComponentKind, FiberDivisor, Param, ResonanceComponent, ResonanceError};
use crate::arrangement::{Curve, CurveArrangement};
use crate::exactla::{MPoly, Rational};

pub fn fiber_poly(curves: &[Curve], d: &FiberDivisor) -> MPoly {
    let n = curves[0].poly.nvars();
    d.entries().iter().fold(MPoly::one(n), |acc, &(i, m)| acc.mul(&curves[i].poly.pow(m)))
}

/// `Some(t)` with `a = t·b`, when `b ≠ 0` and the two are proportional.
fn ratio(a: &MPoly, b: &MPoly) -> Option<Rational> {
    let (lm, lc) = b.leading()?;
    let t = a.coeff(&lm.0) / lc;
    if a.sub(&b.scale(&t)).is_zero() {
        Some(t)
    } else {
        None
    }
}

/// Parameter of the member divisible by `c`, if there is exactly one.
fn member_divisible_by(f: &MPoly, g: &MPoly, c: &MPoly) -> Option<Param> {
    let rf = f.divmod(c).ok()?.1;
    let rg = g.divmod(c).ok()?.1;
    match (rf.is_zero(), rg.is_zero()) {
        (true, true) => None,
        (true, false) => Some(Param::finite(Rational::zero())),
        (false, true) => Some(Param::infinity()),
        // rf + μ rg = 0
        (false, false) => ratio(&rf, &rg).map(|t| Param::finite(-t)),
    }
}

/// Whether `c` divides some member of the pencil spanned by `f`, `g`.
pub(crate) fn divides_member(f: &MPoly, g: &MPoly, c: &MPoly) -> bool {
    member_divisible_by(f, g, c).is_some()
}

/// Completely decomposable members of the pencil `⟨f, g⟩` supported on
/// `curve_set`, sorted by parameter.
pub fn enumerate_decomposable_fibers(
    f: &MPoly,
    g: &MPoly,
    curves: &[Curve],
    curve_set: &[usize],
) -> Vec<(Param, FiberDivisor)> {
    let mut groups: BTreeMap<Param, Vec<usize>> = BTreeMap::new();
    for &i in curve_set {
        if let Some(p) = member_divisible_by(f, g, &curves[i].poly) {
            groups.entry(p).or_default().push(i);
        }
    }
    let mut out = Vec::new();
    for (p, mut idx) in groups {
        idx.sort_unstable();
        idx.dedup();
        let mut rest = p.member(f, g);
        let mut entries = Vec::new();
        for i in idx {
            let mut m = 0;
            while let Some(q) = rest.div_exact(&curves[i].poly) {
                rest = q;
                m += 1;
            }
            if m > 0 {
                entries.push((i, m));
            }
        }
        if rest.degree() == Some(0) {
            out.push((p, FiberDivisor::new(entries).expect("valid divisor")));
        }
    }
    out
}

/// Re-expresses a pencil with generators taken from its two smallest fiber
/// divisors, so equal pencils get equal descriptions.
pub(crate) fn canonical_component(
    fibers: &[(Param, FiberDivisor)],
    curves: &[Curve],
    curve_set: &[usize],
    kind: ComponentKind,
) -> ResonanceComponent {
    let mut divs: Vec<FiberDivisor> = fibers.iter().map(|(_, d)| d.clone()).collect();
    divs.sort();
    let f = fiber_poly(curves, &divs[0]);
    let g = fiber_poly(curves, &divs[1]);
    let fibers = enumerate_decomposable_fibers(&f, &g, curves, curve_set);
    let dimension = fibers.len() - 1;
    ResonanceComponent { generators: (f, g), fibers, dimension, kind }
}

pub fn validate_declared_pencil(
    ca: &CurveArrangement,
    declared: &[FiberDivisor; 2],
) -> Result<ResonanceComponent, ResonanceError> {
    let curves = ca.curves();
    let d0 = declared[0].degree(&curves);
    let d1 = declared[1].degree(&curves);
    if d0 != d1 {
        return Err(ResonanceError::DegreeMismatch(d0, d1));
    }
    let f = fiber_poly(&curves, &declared[0]);
    let g = fiber_poly(&curves, &declared[1]);
    if f.is_zero() || g.is_zero() {
        return Err(ResonanceError::SpanDimension(usize::from(!f.is_zero()) + usize::from(!g.is_zero())));
    }
    if ratio(&f, &g).is_some() {
        return Err(ResonanceError::Proportional);
    }
    let all: Vec<usize> = (0..curves.len()).collect();
    let fibers = enumerate_decomposable_fibers(&f, &g, &curves, &all);
    if fibers.len() < 3 {
        return Err(ResonanceError::TooFewFibers(fibers.len()));
    }
    Ok(canonical_component(&fibers, &curves, &all, ComponentKind::NonLocal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{gen, Family};
    use crate::exactla::int;

    fn div(e: &[(usize, u32)]) -> FiberDivisor {
        FiberDivisor::new(e.to_vec()).unwrap()
    }

    #[test]
    fn braid_conic_pencil_completes_to_three_fibers() {
        let ca = gen(&Family::Braid(2)).unwrap();
        // hyperplane order x, y, z, x−z, y−z, x−y
        let c = validate_declared_pencil(&ca, &[div(&[(3, 1), (1, 1)]), div(&[(4, 1), (0, 1)])]).unwrap();
        assert_eq!(c.dimension, 2);
        let k = c.key();
        assert!(k.contains(&div(&[(2, 1), (5, 1)])));
        let curves = ca.curves();
        let (f, g) = &c.generators;
        for (p, d) in &c.fibers {
            let member = p.member(f, g);
            let prod = fiber_poly(&curves, d);
            assert!(ratio(&member, &prod).is_some());
        }
    }

    #[test]
    fn proportional_declaration_rejected() {
        let ca = gen(&Family::Braid(2)).unwrap();
        let d = div(&[(0, 1), (1, 1)]);
        assert_eq!(validate_declared_pencil(&ca, &[d.clone(), d]), Err(ResonanceError::Proportional));
    }

    #[test]
    fn unrelated_line_pairs_rejected() {
        let ca = gen(&Family::Braid(2)).unwrap();
        let r = validate_declared_pencil(&ca, &[div(&[(0, 1), (1, 1)]), div(&[(3, 1), (4, 1)])]);
        assert!(matches!(r, Err(ResonanceError::TooFewFibers(_))));
    }

    #[test]
    fn empty_curve_set_gives_no_fibers() {
        let ca = gen(&Family::Braid(2)).unwrap();
        let curves = ca.curves();
        assert!(enumerate_decomposable_fibers(&curves[0].poly, &curves[1].poly, &curves, &[]).is_empty());
    }

    #[test]
    fn local_pencil_parameters() {
        let ca = gen(&Family::Braid(2)).unwrap();
        let curves = ca.curves();
        // pencil ⟨x, y⟩ contains x − y at (1 : −1)
        let fib = enumerate_decomposable_fibers(&curves[0].poly, &curves[1].poly, &curves, &[0, 1, 2, 3, 4, 5]);
        let params: Vec<String> = fib.iter().map(|(p, _)| p.to_display()).collect();
        assert_eq!(params, vec!["-1", "0", "inf"]);
        assert_eq!(fib[0].0.mu, int(-1));
    }
}
