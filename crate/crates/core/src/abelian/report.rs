//! The full pipeline on one arrangement and its table row.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{log_dim, rat_dim, rat_lemma_bound, twisted_search, AbelianError, RatSpace, TwistedResult};
use crate::arrangement::CurveArrangement;
use crate::cohomology::{betti, BettiData};
use crate::resonance::{
    find_components, resonance_closure, ClosureOptions, FiberDivisor, Param, ResonanceComponent, SearchOptions,
};
use crate::web::{classic_bounds, is_ordinary, rank_upper_bound, stable_spectrum, ClassicBounds, JetSpectrum};

#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub log_max: u32,
    pub rat_max_order: u32,
    pub closure: bool,
    pub twisted: bool,
    pub seed: u64,
    /// Number of base points the ℓ^j spectrum is compared over.
    pub seeds: usize,
    pub search: SearchOptions,
    pub closure_opts: ClosureOptions,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            log_max: 3,
            rat_max_order: 6,
            closure: true,
            twisted: false,
            seed: 42,
            seeds: 3,
            search: SearchOptions::default(),
            closure_opts: ClosureOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentSummary {
    pub kind: String,
    pub dimension: usize,
    pub degree: u32,
    pub fibers: Vec<String>,
}

fn divisor_string(d: &FiberDivisor) -> String {
    d.entries()
        .iter()
        .map(|&(i, m)| if m == 1 { format!("C{i}") } else { format!("C{i}^{m}") })
        .collect::<Vec<_>>()
        .join("*")
}

fn fiber_strings(f: &[(Param, FiberDivisor)]) -> Vec<String> {
    f.iter().map(|(p, d)| format!("{}: {}", p.to_display(), divisor_string(d))).collect()
}

impl ComponentSummary {
    pub fn of(c: &ResonanceComponent) -> Self {
        ComponentSummary {
            kind: if c.is_local() { "local" } else { "nonlocal" }.into(),
            dimension: c.dimension,
            degree: c.degree(),
            fibers: fiber_strings(&c.fibers),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatSummary {
    pub dim: usize,
    pub p: u32,
    pub dims: Vec<usize>,
    pub stabilized: bool,
    pub exact: bool,
    pub lemma_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistedSummary {
    pub bound: usize,
    pub aomoto_h1: Option<usize>,
    pub h1: Option<usize>,
    pub proxy: bool,
    pub method: Option<String>,
    pub hypothesis_checked: bool,
    pub result: TwistedResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub version: String,
    pub label: String,
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub betti: BettiData,
    pub components: Vec<ComponentSummary>,
    pub closure_curves: Vec<String>,
    pub closed_dims: Vec<usize>,
    pub ell: Vec<usize>,
    pub ell_seeds_agree: bool,
    pub ordinary: bool,
    pub log: BTreeMap<String, usize>,
    pub log_closed: BTreeMap<String, usize>,
    pub rat: RatSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twisted: Option<TwistedSummary>,
    pub rank_lower: u64,
    pub rank_upper: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bol: Option<u64>,
    pub classic: ClassicBounds,
    pub residual: u64,
    pub mixed: u64,
    pub seed: u64,
}

impl InvariantReport {
    pub fn log_at(&self, i: u32) -> usize {
        self.log.get(&i.to_string()).copied().unwrap_or(0)
    }

    pub fn log_closed_at(&self, i: u32) -> usize {
        self.log_closed.get(&i.to_string()).copied().unwrap_or(0)
    }

    pub fn twisted_bound(&self) -> usize {
        self.twisted.as_ref().map_or(0, |t| t.bound)
    }

    /// `(k; Log¹, Log¹bar, Log², Log²bar, Log³, Log³bar, Rat, Mixed, Twisted)`.
    pub fn table_cells(&self) -> [u64; 10] {
        [
            self.k as u64,
            self.log_at(1) as u64,
            self.log_closed_at(1) as u64,
            self.log_at(2) as u64,
            self.log_closed_at(2) as u64,
            self.log_at(3) as u64,
            self.log_closed_at(3) as u64,
            self.rat.dim as u64,
            self.mixed,
            self.twisted_bound() as u64,
        ]
    }
}

pub const TABLE_HEADER: &str = "| A | k | Log¹ | Log¹bar | Log² | Log²bar | Log³ | Log³bar | Rat | Mixed | Twisted |\n\
|---|---|---|---|---|---|---|---|---|---|---|";

pub fn markdown_row(rep: &InvariantReport) -> String {
    let cells: Vec<String> = rep.table_cells().iter().map(u64::to_string).collect();
    format!("| {} | {} |", rep.label, cells.join(" | "))
}

pub fn markdown_table(reps: &[InvariantReport]) -> String {
    let mut s = String::from(TABLE_HEADER);
    for r in reps {
        s.push('\n');
        s.push_str(&markdown_row(r));
    }
    s.push('\n');
    s
}

fn log_map(fibers: &[Vec<(Param, FiberDivisor)>], ncurves: usize, log_max: u32, closed: bool) -> BTreeMap<String, usize> {
    (1..=log_max).map(|i| (i.to_string(), log_dim(fibers, ncurves, i, closed).dim)).collect()
}

/// Components, closure, web spectrum, Log/Rat/twisted spaces and bounds.
pub fn analyze(ca: &CurveArrangement, opts: &AnalysisOptions) -> Result<InvariantReport, AbelianError> {
    let n = ca.ambient_dim();
    let bd = betti(ca)?;
    let (comps, _) = find_components(ca, &opts.search)?;
    let k = comps.len();
    let open_fibers: Vec<Vec<(Param, FiberDivisor)>> = comps.iter().map(|c| c.fibers.clone()).collect();
    let nc = ca.num_curves();
    let log = log_map(&open_fibers, nc, opts.log_max, false);

    let (closed, closed_fibers, closure_curves, closed_dims) = if opts.closure {
        let cd = resonance_closure(ca, &comps, &opts.closure_opts)?;
        let names = cd.closure_curves.iter().map(|c| format!("{}", c.polynomial())).collect();
        (cd.closed, cd.closed_fibers, names, cd.closed_dims)
    } else {
        let dims = comps.iter().map(|c| c.dimension).collect();
        (ca.clone(), open_fibers.clone(), Vec::new(), dims)
    };
    let log_closed = log_map(&closed_fibers, closed.num_curves(), opts.log_max, true);

    let (js, agree): (JetSpectrum, bool) = stable_spectrum(&comps, ca, opts.seed, opts.seeds.max(1))?;
    let rank_upper = rank_upper_bound(&js);
    let ordinary = is_ordinary(&js, n);
    let classic = classic_bounds(k as u64, n as u64);
    let bol = (n == 2).then_some(classic.bol);

    let rs: RatSpace = rat_dim(&closed_fibers, &closed, opts.rat_max_order, opts.seed)?;
    let rat = RatSummary {
        dim: rs.dim,
        p: rs.pole_order,
        dims: rs.dims.clone(),
        stabilized: rs.stabilized,
        exact: rs.exact,
        lemma_bound: rat_lemma_bound(&ca.base, &closed),
    };

    let twisted = if opts.twisted && ca.extra_curves.is_empty() {
        let t = twisted_search(&comps, &ca.base)?;
        Some(TwistedSummary {
            bound: t.bound,
            aomoto_h1: t.aomoto_h1(),
            h1: t.certificate.as_ref().map(|c| c.h1),
            proxy: t.proxy(),
            method: t.certificate.as_ref().map(|c| c.method.clone()),
            hypothesis_checked: t.hypothesis_checked,
            result: t,
        })
    } else {
        None
    };

    let rank_lower: u64 = log_closed.values().map(|&d| d as u64).sum::<u64>()
        + rat.dim as u64
        + twisted.as_ref().map_or(0, |t| t.bound as u64);
    let upper = match bol {
        Some(b) => b.min(rank_upper),
        None => rank_upper,
    };
    if rank_lower > upper {
        return Err(AbelianError::NegativeResidual { lower: rank_lower, upper });
    }
    let residual = upper - rank_lower;

    Ok(InvariantReport {
        version: env!("CARGO_PKG_VERSION").into(),
        label: ca.label().into(),
        n,
        r: ca.base.len(),
        k,
        betti: bd,
        components: comps.iter().map(ComponentSummary::of).collect(),
        closure_curves,
        closed_dims,
        ell: js.ell,
        ell_seeds_agree: agree,
        ordinary,
        log,
        log_closed,
        rat,
        twisted,
        rank_lower,
        rank_upper,
        bol,
        classic,
        residual,
        mixed: residual,
        seed: opts.seed,
    })
}
