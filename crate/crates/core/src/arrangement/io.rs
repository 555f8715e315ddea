use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Arrangement, ArrangementError, ClosureCurve, CurveArrangement, DeclaredPencil, Hyperplane};
use crate::exactla::{fmt_rational, parse_rational, MPoly};
use crate::resonance::FiberDivisor;

#[derive(Serialize, Deserialize)]
struct FileCurve {
    degree: u32,
    monomials: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct FilePencil {
    fibers: Vec<Vec<(usize, u32)>>,
}

#[derive(Serialize, Deserialize)]
struct FileArrangement {
    ambient_dim: usize,
    label: String,
    hyperplanes: Vec<Vec<String>>,
    #[serde(default)]
    closure_curves: Vec<FileCurve>,
    #[serde(default)]
    declared_pencils: Vec<FilePencil>,
}

fn malformed(e: impl std::fmt::Display) -> ArrangementError {
    ArrangementError::Malformed(e.to_string())
}

pub fn parse(bytes: &[u8]) -> Result<CurveArrangement, ArrangementError> {
    let f: FileArrangement = serde_json::from_slice(bytes).map_err(malformed)?;
    let n = f.ambient_dim;
    if n == 0 {
        return Err(malformed("ambient_dim must be at least 1"));
    }
    let mut hs = Vec::new();
    for (i, row) in f.hyperplanes.iter().enumerate() {
        if row.len() != n + 1 {
            return Err(ArrangementError::WrongLength { index: i, got: row.len(), expected: n + 1 });
        }
        let coeffs = row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>().map_err(malformed)?;
        hs.push(Hyperplane::new(coeffs).ok_or(ArrangementError::ZeroHyperplane { index: i })?);
    }
    let base = Arrangement::new(n, hs, &f.label)?;
    let r = base.len();
    let mut curves = Vec::new();
    for (k, c) in f.closure_curves.iter().enumerate() {
        let mut terms = Vec::new();
        for (key, val) in &c.monomials {
            let exps: Vec<u32> =
                key.split_whitespace().map(|t| t.parse::<u32>()).collect::<Result<_, _>>().map_err(malformed)?;
            if exps.len() != n + 1 {
                return Err(ArrangementError::BadCurve { index: r + k, reason: format!("exponent key {key:?}") });
            }
            terms.push((exps, parse_rational(val).map_err(malformed)?));
        }
        let poly = MPoly::from_terms(n + 1, terms);
        let curve = ClosureCurve::new(poly, r + k)?;
        if curve.degree() != c.degree {
            return Err(ArrangementError::BadCurve { index: r + k, reason: "declared degree mismatch".into() });
        }
        curves.push(curve);
    }
    let mut ca = CurveArrangement::new(base, curves)?;
    let total = ca.num_curves();
    for p in &f.declared_pencils {
        if p.fibers.len() != 2 {
            return Err(malformed("declared pencil needs exactly two fibers"));
        }
        let mut divs = Vec::new();
        for fib in &p.fibers {
            let d = FiberDivisor::new(fib.clone()).map_err(malformed)?;
            if d.entries().iter().any(|&(i, _)| i >= total) {
                return Err(malformed("declared pencil refers to an unknown curve"));
            }
            divs.push(d);
        }
        let second = divs.pop().expect("two fibers");
        let first = divs.pop().expect("two fibers");
        ca.declared_pencils.push(DeclaredPencil { fibers: [first, second] });
    }
    Ok(ca)
}

pub fn serialize(ca: &CurveArrangement) -> Vec<u8> {
    let f = FileArrangement {
        ambient_dim: ca.ambient_dim(),
        label: ca.label().to_string(),
        hyperplanes: ca.base.hyperplanes().iter().map(|h| h.coeffs().iter().map(fmt_rational).collect()).collect(),
        closure_curves: ca
            .extra_curves
            .iter()
            .map(|c| FileCurve {
                degree: c.degree(),
                monomials: c
                    .polynomial()
                    .terms()
                    .map(|(m, v)| {
                        (m.0.iter().map(u32::to_string).collect::<Vec<_>>().join(" "), fmt_rational(v))
                    })
                    .collect(),
            })
            .collect(),
        declared_pencils: ca
            .declared_pencils
            .iter()
            .map(|p| FilePencil { fibers: p.fibers.iter().map(|d| d.entries().to_vec()).collect() })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&f).expect("serializable");
    s.push('\n');
    s.into_bytes()
}
