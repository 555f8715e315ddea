//! The resonance web at a generic point: linear parts of its foliations,
//! the ℓ^j spectrum and the resulting rank bounds.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arrangement::CurveArrangement;
use crate::exactla::{MPoly, MatrixQ, Rational};
use crate::resonance::ResonanceComponent;
use crate::sampling::PointStream;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WebError {
    #[error("no components to localize")]
    NoComponents,
    #[error("no admissible base point after {0} samples")]
    RejectionBudget(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WebLocalization {
    /// Affine coordinates; the last homogeneous coordinate is 1.
    pub base_point: Vec<Rational>,
    pub linear_parts: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JetSpectrum {
    pub k: usize,
    pub ell: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassicBounds {
    pub bol: u64,
    pub chern: u64,
    pub cavalier_lehmann: u64,
}

const MAX_SAMPLES: usize = 2000;

fn normalized(v: Vec<Rational>) -> Option<Vec<Rational>> {
    let lead = v.iter().find(|c| !c.is_zero())?.clone();
    Some(v.into_iter().map(|c| c / &lead).collect())
}

/// Differential of `F/G` at `p`, in the affine coordinates.
fn linear_part(f: &MPoly, g: &MPoly, p: &[Rational], n: usize) -> Option<Vec<Rational>> {
    let fv = f.eval(p);
    let gv = g.eval(p);
    if gv.is_zero() {
        return None;
    }
    let d: Vec<Rational> = (0..n).map(|i| &gv * f.partial(i).eval(p) - &fv * g.partial(i).eval(p)).collect();
    normalized(d)
}

fn try_point(comps: &[ResonanceComponent], ca: &CurveArrangement, p: &[Rational]) -> Option<Vec<Vec<Rational>>> {
    let n = ca.ambient_dim();
    if ca.curves().iter().any(|c| c.poly.eval(p).is_zero()) {
        return None;
    }
    let mut parts: Vec<Vec<Rational>> = Vec::with_capacity(comps.len());
    for c in comps {
        let (f, g) = &c.generators;
        if f.eval(p).is_zero() && g.eval(p).is_zero() {
            return None;
        }
        let h = linear_part(f, g, p, n)?;
        if parts.contains(&h) {
            return None;
        }
        parts.push(h);
    }
    Some(parts)
}

pub fn localize_with_height(
    comps: &[ResonanceComponent],
    ca: &CurveArrangement,
    seed: u64,
    height: i64,
) -> Result<WebLocalization, WebError> {
    if comps.is_empty() {
        return Err(WebError::NoComponents);
    }
    let n = ca.ambient_dim();
    let mut stream = PointStream::new(seed, height);
    for attempt in 1..=MAX_SAMPLES {
        let mut p = stream.point(n);
        p.push(Rational::one());
        if let Some(parts) = try_point(comps, ca, &p) {
            p.pop();
            return Ok(WebLocalization { base_point: p, linear_parts: parts });
        }
        if attempt % 50 == 0 {
            stream.grow();
        }
    }
    Err(WebError::RejectionBudget(MAX_SAMPLES))
}

pub fn localize(comps: &[ResonanceComponent], ca: &CurveArrangement, seed: u64) -> Result<WebLocalization, WebError> {
    localize_with_height(comps, ca, seed, 7)
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn ell_spectrum(loc: &WebLocalization) -> JetSpectrum {
    let k = loc.linear_parts.len();
    let mut ell = Vec::new();
    if k == 0 {
        return JetSpectrum { k, ell };
    }
    let hs: Vec<MPoly> = loc.linear_parts.iter().map(|h| MPoly::linear(h)).collect();
    let mut powers = hs.clone();
    let mut j = 1u32;
    loop {
        let rows: Vec<Vec<Rational>> = powers.iter().map(|p| p.coefficient_vector(j)).collect();
        let cols = rows[0].len();
        let l = MatrixQ::from_rows(rows, cols).rank();
        ell.push(l);
        if l == k {
            break;
        }
        powers = powers.iter().zip(&hs).map(|(p, h)| p.mul(h)).collect();
        j += 1;
    }
    JetSpectrum { k, ell }
}

/// Spectrum at several seeds. On disagreement the elementwise maximum is
/// taken over a further round at larger height. Returns whether the first
/// round agreed.
pub fn stable_spectrum(
    comps: &[ResonanceComponent],
    ca: &CurveArrangement,
    seed: u64,
    seeds: usize,
) -> Result<(JetSpectrum, bool), WebError> {
    let round = |height: i64, offset: u64| -> Result<Vec<JetSpectrum>, WebError> {
        (0..seeds as u64)
            .map(|s| localize_with_height(comps, ca, seed.wrapping_add(offset + s), height).map(|l| ell_spectrum(&l)))
            .collect()
    };
    let first = round(7, 0)?;
    if first.windows(2).all(|w| w[0] == w[1]) {
        return Ok((first[0].clone(), true));
    }
    let mut all = first;
    all.extend(round(101, seeds as u64)?);
    let k = all[0].k;
    let len = all.iter().map(|s| s.ell.len()).max().unwrap_or(0);
    let mut ell: Vec<usize> = (0..len).map(|j| all.iter().map(|s| s.ell.get(j).copied().unwrap_or(k)).max().unwrap()).collect();
    if let Some(pos) = ell.iter().position(|&l| l == k) {
        ell.truncate(pos + 1);
    }
    Ok((JetSpectrum { k, ell }, false))
}

pub fn rank_upper_bound(js: &JetSpectrum) -> u64 {
    js.ell.iter().map(|&l| js.k.saturating_sub(l) as u64).sum()
}

pub fn classic_bounds(k: u64, n: u64) -> ClassicBounds {
    let bol = if k >= 2 { (k - 1) * (k - 2) / 2 } else { 0 };
    let mut chern = 0;
    let mut j = 1;
    while k > j * (n - 1) + 1 {
        chern += k - j * (n - 1) - 1;
        j += 1;
    }
    let mut cl = 0;
    let mut j = 1;
    loop {
        let cap = binom(n + j - 1, n - 1);
        if cap >= k {
            break;
        }
        cl += k - cap;
        j += 1;
    }
    ClassicBounds { bol, chern, cavalier_lehmann: cl }
}

pub fn is_ordinary(js: &JetSpectrum, n: usize) -> bool {
    js.ell.iter().enumerate().all(|(j, &l)| l == (js.k as u64).min(binom((n + j) as u64, n as u64 - 1)) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{gen, Family};
    use crate::exactla::{frac, int};
    use crate::resonance::{find_components, local_components, SearchOptions};

    fn braid_web(n: usize) -> (Vec<ResonanceComponent>, CurveArrangement) {
        let ca = gen(&Family::Braid(n)).unwrap();
        let (c, _) = find_components(&ca, &SearchOptions::default()).unwrap();
        (c, ca)
    }

    #[test]
    fn braid_two_spectrum() {
        let (c, ca) = braid_web(2);
        let loc = localize(&c, &ca, 42).unwrap();
        assert_eq!(loc.linear_parts.len(), 5);
        let js = ell_spectrum(&loc);
        assert_eq!(js.ell, vec![2, 3, 4, 5]);
        assert_eq!(rank_upper_bound(&js), 6);
        assert!(is_ordinary(&js, 2));
    }

    #[test]
    fn braid_three_spectrum() {
        let (c, ca) = braid_web(3);
        let (js, agreed) = stable_spectrum(&c, &ca, 42, 3).unwrap();
        assert!(agreed);
        assert_eq!(js.ell, vec![3, 6, 10, 15]);
        assert_eq!(rank_upper_bound(&js), 26);
        assert!(is_ordinary(&js, 3));
    }

    #[test]
    fn gradient_of_a_line_pencil() {
        let f = MPoly::linear(&[int(1), int(0), int(0)]);
        let g = MPoly::linear(&[int(0), int(1), int(0)]);
        let p = [int(2), int(3), int(1)];
        assert_eq!(linear_part(&f, &g, &p, 2).unwrap(), vec![int(1), frac(-2, 3)]);
    }

    #[test]
    fn local_pencils_only() {
        let ca = gen(&Family::K5(None)).unwrap();
        let loc = localize(&local_components(&ca.base), &ca, 1).unwrap();
        assert_eq!(loc.linear_parts.len(), 5);
    }

    #[test]
    fn bounds() {
        assert_eq!(classic_bounds(5, 2).bol, 6);
        assert_eq!(classic_bounds(10, 2).bol, 36);
        assert_eq!(classic_bounds(3, 2).bol, 1);
        for k in 1..15 {
            let b = classic_bounds(k, 2);
            assert_eq!((b.chern, b.cavalier_lehmann), (b.bol, b.bol));
        }
        assert_eq!(rank_upper_bound(&JetSpectrum { k: 2, ell: vec![2] }), 0);
        assert!(!is_ordinary(&JetSpectrum { k: 4, ell: vec![3, 3, 4] }, 3));
        assert_eq!(localize(&[], &gen(&Family::Braid(2)).unwrap(), 0), Err(WebError::NoComponents));
    }
}
