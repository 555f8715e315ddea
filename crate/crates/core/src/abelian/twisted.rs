//! Lower bound from rank-one local systems shared by the exponentials of
//! several resonance components.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::AbelianError;
use crate::arrangement::Arrangement;
use crate::cohomology::{aomoto_h1, local_system_h1, wedge_model, WedgeModel};
use crate::exactla::rational::{frac_part, is_integer};
use crate::exactla::{fmt_rational, integer_kernel, lattice_integral_solve, MatrixQ, Rational};
use crate::resonance::{component_h1, ResonanceComponent};

const MAX_GROUP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistedCertificate {
    /// The character as a residue vector reduced to `[0, 1)^r`.
    pub omega: Vec<String>,
    /// Indices of the components whose exponential contains `omega`.
    pub components: Vec<usize>,
    /// A point of each component mapping to `omega` modulo integers.
    pub alphas: Vec<Vec<String>>,
    /// `h¹` of the Aomoto complex at `alphas[0]`.
    pub aomoto_h1: usize,
    /// `h¹(M, C_ρ)` as used in the bound.
    pub h1: usize,
    /// "salvetti" (exact, real arrangement of lines, ρ = ±1) or "aomoto proxy".
    pub method: String,
    pub bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistedResult {
    pub bound: usize,
    pub certificate: Option<TwistedCertificate>,
    /// The simple-connectedness hypothesis on the cover is not checked.
    pub hypothesis_checked: bool,
}

impl TwistedResult {
    fn none() -> Self {
        TwistedResult { bound: 0, certificate: None, hypothesis_checked: false }
    }

    pub fn aomoto_h1(&self) -> Option<usize> {
        self.certificate.as_ref().map(|c| c.aomoto_h1)
    }

    pub fn proxy(&self) -> bool {
        self.certificate.as_ref().is_some_and(|c| c.method != "salvetti")
    }
}

fn block(c: &ResonanceComponent, r: usize) -> MatrixQ {
    MatrixQ::from_columns(&component_h1(&c.fibers, r), r)
}

fn reduce(v: &[Rational]) -> Vec<Rational> {
    v.iter().map(frac_part).collect()
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(fmt_rational).collect()
}

/// Characters `α mod Z^r` lying in the exponentials of all `comps`, with a
/// point of each component. The finite group generated by the lattice
/// solutions is enumerated breadth first.
fn common_characters(comps: &[&ResonanceComponent], r: usize) -> Vec<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let blocks: Vec<MatrixQ> = comps.iter().map(|c| block(c, r)).collect();
    let sol = lattice_integral_solve(&blocks);
    let gens: Vec<(Vec<Rational>, Vec<Vec<Rational>>)> = sol
        .lattice
        .iter()
        .map(|c| {
            let pts: Vec<Vec<Rational>> = blocks.iter().zip(c).map(|(b, ci)| b.mul_vec(ci)).collect();
            (reduce(&pts[0]), pts)
        })
        .filter(|(w, _)| w.iter().any(|x| !x.is_zero()))
        .collect();
    let zero = vec![Rational::zero(); r];
    let mut seen: BTreeSet<Vec<Rational>> = BTreeSet::from([zero.clone()]);
    let zero_pts = vec![zero.clone(); comps.len()];
    let mut queue = VecDeque::from([(zero, zero_pts)]);
    let mut out = Vec::new();
    while let Some((w, pts)) = queue.pop_front() {
        for (g, gp) in &gens {
            let nw = reduce(&w.iter().zip(g).map(|(a, b)| a + b).collect::<Vec<_>>());
            if seen.contains(&nw) || seen.len() >= MAX_GROUP {
                continue;
            }
            seen.insert(nw.clone());
            let np: Vec<Vec<Rational>> =
                pts.iter().zip(gp).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
            if nw.iter().any(|x| !x.is_zero()) {
                out.push((nw.clone(), np.clone()));
            }
            queue.push_back((nw, np));
        }
    }
    out
}

/// Integer vectors spanning `V^⊥ ∩ Z^r` for the residue span `V` of `c`.
fn annihilator(c: &ResonanceComponent, r: usize) -> Vec<Vec<BigInt>> {
    let rows: Vec<Vec<BigInt>> =
        component_h1(&c.fibers, r).iter().map(|v| v.iter().map(|x| x.to_integer()).collect()).collect();
    integer_kernel(&rows, r)
}

/// `ω ∈ V + Z^r` iff every integer annihilator pairs integrally with `ω`.
fn contains(ann: &[Vec<BigInt>], w: &[Rational]) -> bool {
    ann.iter().all(|a| {
        let s: Rational = a.iter().zip(w).map(|(x, y)| Rational::from_integer(x.clone()) * y).sum();
        is_integer(&s)
    })
}

/// `lift` is a residue vector of `ω` lying on the first component.
fn twisted_h1(
    a: &Arrangement,
    wm: &WedgeModel,
    w: &[Rational],
    lift: &[Rational],
) -> Result<(usize, usize, &'static str), AbelianError> {
    let aom = aomoto_h1(lift, wm)?;
    let two = Rational::from_integer(BigInt::from(2));
    if a.ambient_dim() == 2 && w.iter().all(|x| is_integer(&(x * &two))) {
        let rho: Vec<Rational> =
            w.iter().map(|x| if x.is_zero() { Rational::one() } else { -Rational::one() }).collect();
        return Ok((local_system_h1(a, &rho)?, aom, "salvetti"));
    }
    Ok((aom, aom, "aomoto proxy"))
}

fn certify(
    a: &Arrangement,
    wm: &WedgeModel,
    all: &[ResonanceComponent],
    members: Vec<usize>,
    w: &[Rational],
    alphas: &[Vec<Rational>],
) -> Result<TwistedCertificate, AbelianError> {
    let (h1, aom, method) = twisted_h1(a, wm, w, &alphas[0])?;
    let total: usize = members.iter().map(|&i| all[i].dimension.saturating_sub(1)).sum();
    Ok(TwistedCertificate {
        omega: strs(w),
        components: members,
        alphas: alphas.iter().map(|v| strs(v)).collect(),
        aomoto_h1: aom,
        h1,
        method: method.into(),
        bound: total.saturating_sub(h1),
    })
}

fn better(best: &Option<TwistedCertificate>, c: &TwistedCertificate) -> bool {
    best.as_ref().is_none_or(|b| c.bound > b.bound)
}

/// Bound from the characters common to every component of `subset`
/// (indices into `all`).
pub fn twisted_bound(all: &[ResonanceComponent], subset: &[usize], a: &Arrangement) -> Result<TwistedResult, AbelianError> {
    if subset.len() < 2 {
        return Err(AbelianError::SubsetTooSmall(subset.len()));
    }
    let r = a.len();
    let comps: Vec<&ResonanceComponent> = subset.iter().map(|&i| &all[i]).collect();
    let chars = common_characters(&comps, r);
    if chars.is_empty() {
        return Ok(TwistedResult::none());
    }
    let wm = wedge_model(a)?;
    let mut best = None;
    for (w, pts) in &chars {
        for (&i, c) in subset.iter().zip(&comps) {
            if !contains(&annihilator(c, r), w) {
                return Err(AbelianError::Membership(i));
            }
        }
        let cert = certify(a, &wm, all, subset.to_vec(), w, pts)?;
        if better(&best, &cert) {
            best = Some(cert);
        }
    }
    Ok(finish(best))
}

fn finish(best: Option<TwistedCertificate>) -> TwistedResult {
    match best {
        Some(c) => TwistedResult { bound: c.bound, certificate: Some(c), hypothesis_checked: false },
        None => TwistedResult::none(),
    }
}

/// Characters found from every pair of components; each is charged to all
/// components containing it.
pub fn twisted_search(all: &[ResonanceComponent], a: &Arrangement) -> Result<TwistedResult, AbelianError> {
    let r = a.len();
    let anns: Vec<Vec<Vec<BigInt>>> = all.iter().map(|c| annihilator(c, r)).collect();
    let mut done: BTreeSet<Vec<Rational>> = BTreeSet::new();
    let mut wm = None;
    let mut best = None;
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            for (w, pts) in common_characters(&[&all[i], &all[j]], r) {
                if !contains(&anns[i], &w) {
                    return Err(AbelianError::Membership(i));
                }
                if !contains(&anns[j], &w) {
                    return Err(AbelianError::Membership(j));
                }
                if !done.insert(w.clone()) {
                    continue;
                }
                let members: Vec<usize> = (0..all.len()).filter(|&k| contains(&anns[k], &w)).collect();
                if wm.is_none() {
                    wm = Some(wedge_model(a)?);
                }
                let cert = certify(a, wm.as_ref().expect("set"), all, members, &w, &pts)?;
                if better(&best, &cert) {
                    best = Some(cert);
                }
            }
        }
    }
    Ok(finish(best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{gen, Family};
    use crate::resonance::{find_components, SearchOptions};

    fn comps(f: Family) -> (Vec<ResonanceComponent>, Arrangement) {
        let ca = gen(&f).unwrap();
        let (c, _) = find_components(&ca, &SearchOptions::default()).unwrap();
        (c, ca.base)
    }

    #[test]
    fn nonfano_nonlocal_triple() {
        let (c, a) = comps(Family::NonFano);
        let nl: Vec<usize> = (0..c.len()).filter(|&i| !c[i].is_local()).collect();
        assert_eq!(nl.len(), 3);
        let t = twisted_bound(&c, &nl, &a).unwrap();
        assert_eq!(t.bound, 1);
        let cert = t.certificate.unwrap();
        assert_eq!(cert.h1, 2);
        assert_eq!(cert.method, "salvetti");
        assert!(cert.omega.iter().all(|x| x == "0" || x == "1/2"));
    }

    #[test]
    fn nonfano_search() {
        let (c, a) = comps(Family::NonFano);
        let t = twisted_search(&c, &a).unwrap();
        assert_eq!(t.bound, 1);
        assert!(!t.hypothesis_checked);
    }

    #[test]
    fn braid_pairs_give_nothing() {
        let (c, a) = comps(Family::Braid(2));
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                assert_eq!(twisted_bound(&c, &[i, j], &a).unwrap().bound, 0);
            }
        }
        assert_eq!(twisted_search(&c, &a).unwrap().bound, 0);
    }

    #[test]
    fn singleton_rejected() {
        let (c, a) = comps(Family::Braid(2));
        assert_eq!(twisted_bound(&c, &[0], &a), Err(AbelianError::SubsetTooSmall(1)));
    }

    #[test]
    fn membership_tests_agree_with_points() {
        let (c, a) = comps(Family::NonFano);
        let r = a.len();
        let nl: Vec<&ResonanceComponent> = c.iter().filter(|x| !x.is_local()).collect();
        for (w, pts) in common_characters(&nl[..2], r) {
            for (comp, p) in nl[..2].iter().zip(&pts) {
                assert!(contains(&annihilator(comp, r), &w));
                // the point maps to ω modulo integers
                assert_eq!(reduce(p), w);
            }
        }
    }
}
