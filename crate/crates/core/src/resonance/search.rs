use std::collections::BTreeSet;

use super::fibers::{canonical_component, enumerate_decomposable_fibers, fiber_poly};
use super::{component_h1, ComponentKind, FiberDivisor, ResonanceComponent, ResonanceError};
use crate::arrangement::{rank2_flats, Arrangement, Curve, CurveArrangement};
use crate::cohomology::{aomoto_kernel_dim, wedge_model};
use crate::exactla::{MatrixQ, Rational};

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub max_blocks: usize,
    pub max_mult: u32,
    /// Upper bound on visited search nodes.
    pub budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_blocks: 5, max_mult: 2, budget: 20_000_000 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub algebraic_checks: u64,
}

fn hyperplane_curves(a: &Arrangement) -> Vec<Curve> {
    a.hyperplanes().iter().map(|h| Curve { poly: h.poly(), degree: 1, euler_char: 2 }).collect()
}

/// One pencil of hyperplanes per flat of multiplicity at least 3.
pub fn local_components(a: &Arrangement) -> Vec<ResonanceComponent> {
    let curves = hyperplane_curves(a);
    let all: Vec<usize> = (0..a.len()).collect();
    rank2_flats(a)
        .into_iter()
        .filter(|f| f.multiplicity >= 3)
        .map(|f| {
            let fibers: Vec<_> = f.members.iter().map(|&i| (super::Param::infinity(), FiberDivisor::single(i))).collect();
            canonical_component(&fibers, &curves, &all, ComponentKind::Local { flat_id: f.flat_id })
        })
        .collect()
}

struct Search<'a> {
    r: usize,
    max_mult: u32,
    max_blocks: usize,
    budget: u64,
    stats: SearchStats,
    /// Pairs meeting in a flat of multiplicity ≥ 3.
    neighbor: Vec<Vec<bool>>,
    flat_of: Vec<Vec<usize>>,
    in_flat: Vec<Vec<bool>>,
    curves: &'a [Curve],
    all: Vec<usize>,
    found: Vec<Vec<(super::Param, FiberDivisor)>>,
    seen: BTreeSet<Vec<FiberDivisor>>,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<(), ResonanceError> {
        self.stats.nodes += 1;
        if self.stats.nodes > self.budget {
            return Err(ResonanceError::BudgetExceeded { budget: self.budget });
        }
        Ok(())
    }

    fn capacity(&self, cand: &[usize]) -> u32 {
        cand.len() as u32 * self.max_mult
    }

    fn restrict(&self, cand: &[usize], h: usize) -> Vec<usize> {
        cand.iter().copied().filter(|&j| j != h && self.neighbor[h][j]).collect()
    }

    /// Grows the first block over indices `≥ start`.
    fn first_block(
        &mut self,
        d: u32,
        start: usize,
        block: &mut Vec<(usize, u32)>,
        deg: u32,
        cand: Vec<usize>,
    ) -> Result<(), ResonanceError> {
        self.tick()?;
        if deg == d {
            let lo = block[0].0;
            let c2: Vec<usize> = cand.iter().copied().filter(|&j| j > lo).collect();
            return self.second_block(d, block, &c2, 0, &mut Vec::new(), 0, &cand);
        }
        for i in start..self.r {
            let next = if block.is_empty() {
                (0..self.r).filter(|&j| j != i && self.neighbor[i][j]).collect()
            } else {
                self.restrict(&cand, i)
            };
            if self.capacity(&next) < d {
                continue;
            }
            for m in 1..=self.max_mult.min(d - deg) {
                block.push((i, m));
                self.first_block(d, i + 1, block, deg + m, next.clone())?;
                block.pop();
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn second_block(
        &mut self,
        d: u32,
        b1: &[(usize, u32)],
        cand: &[usize],
        pos: usize,
        b2: &mut Vec<(usize, u32)>,
        deg: u32,
        third: &[usize],
    ) -> Result<(), ResonanceError> {
        self.tick()?;
        if deg == d {
            return self.check_pair(b1, b2);
        }
        for k in pos..cand.len() {
            let j = cand[k];
            let t = self.restrict(third, j);
            if self.capacity(&t) < d {
                continue;
            }
            for m in 1..=self.max_mult.min(d - deg) {
                b2.push((j, m));
                self.second_block(d, b1, cand, k + 1, b2, deg + m, &t)?;
                b2.pop();
            }
        }
        Ok(())
    }

    fn weight(&self, block: &[(usize, u32)], flat: usize) -> u32 {
        block.iter().filter(|&&(h, _)| self.in_flat[flat][h]).map(|&(_, m)| m).sum()
    }

    fn check_pair(&mut self, b1: &[(usize, u32)], b2: &[(usize, u32)]) -> Result<(), ResonanceError> {
        for &(h1, _) in b1 {
            for &(h2, _) in b2 {
                let x = self.flat_of[h1][h2];
                if self.weight(b1, x) != self.weight(b2, x) {
                    return Ok(());
                }
            }
        }
        self.stats.algebraic_checks += 1;
        let d1 = FiberDivisor::new(b1.to_vec()).expect("valid block");
        let d2 = FiberDivisor::new(b2.to_vec()).expect("valid block");
        let f = fiber_poly(self.curves, &d1);
        let g = fiber_poly(self.curves, &d2);
        let fibers = enumerate_decomposable_fibers(&f, &g, self.curves, &self.all);
        if fibers.len() < 3 || fibers.len() > self.max_blocks {
            return Ok(());
        }
        let mut key: Vec<FiberDivisor> = fibers.iter().map(|(_, d)| d.clone()).collect();
        key.sort();
        if self.seen.insert(key) {
            self.found.push(fibers);
        }
        Ok(())
    }
}

/// Pencils of degree ≥ 2 whose members split into hyperplanes, found by
/// seeding with two disjoint blocks and completing the fibers.
pub fn pencil_search(
    a: &Arrangement,
    opts: &SearchOptions,
) -> Result<(Vec<ResonanceComponent>, SearchStats), ResonanceError> {
    let r = a.len();
    let flats = rank2_flats(a);
    let mut flat_of = vec![vec![usize::MAX; r]; r];
    let mut in_flat = vec![vec![false; r]; flats.len()];
    let mut neighbor = vec![vec![false; r]; r];
    for f in &flats {
        for &i in &f.members {
            in_flat[f.flat_id][i] = true;
            for &j in &f.members {
                if i != j {
                    flat_of[i][j] = f.flat_id;
                    neighbor[i][j] = f.multiplicity >= 3;
                }
            }
        }
    }
    let curves = hyperplane_curves(a);
    let mut s = Search {
        r,
        max_mult: opts.max_mult.max(1),
        max_blocks: opts.max_blocks,
        budget: opts.budget,
        stats: SearchStats::default(),
        neighbor,
        flat_of,
        in_flat,
        curves: &curves,
        all: (0..r).collect(),
        found: Vec::new(),
        seen: BTreeSet::new(),
    };
    let dmax = (s.max_mult as usize * r / 3) as u32;
    for d in 2..=dmax {
        s.first_block(d, 0, &mut Vec::new(), 0, Vec::new())?;
    }
    let stats = s.stats.clone();
    let all: Vec<usize> = (0..r).collect();
    let comps =
        s.found.iter().map(|f| canonical_component(f, &curves, &all, ComponentKind::NonLocal)).collect::<Vec<_>>();
    Ok((comps, stats))
}

fn span(comp: &ResonanceComponent, r: usize) -> Vec<Vec<Rational>> {
    component_h1(&comp.fibers, r)
}

fn contained(a: &[Vec<Rational>], b: &[Vec<Rational>], r: usize) -> bool {
    let rb = MatrixQ::from_rows(b.to_vec(), r).rank();
    let mut both = b.to_vec();
    both.extend_from_slice(a);
    MatrixQ::from_rows(both, r).rank() == rb
}

/// Local components, searched pencils and declared pencils of a pure
/// hyperplane arrangement, with non-maximal pencils removed and each
/// component certified maximal by the Aomoto complex.
pub fn find_components(
    ca: &CurveArrangement,
    opts: &SearchOptions,
) -> Result<(Vec<ResonanceComponent>, SearchStats), ResonanceError> {
    let a = &ca.base;
    let r = a.len();
    let mut comps = local_components(a);
    let (mut nonlocal, stats) = pencil_search(a, opts)?;
    for p in &ca.declared_pencils {
        let c = super::validate_declared_pencil(ca, &p.fibers)?;
        if c.fibers.iter().all(|(_, d)| d.support().all(|i| i < r)) {
            nonlocal.push(c);
        }
    }
    // Smaller degree first so a pencil and its composites keep the former.
    nonlocal.sort_by(|x, y| x.degree().cmp(&y.degree()).then_with(|| x.key().cmp(&y.key())));
    for c in nonlocal {
        let s = span(&c, r);
        if comps.iter().any(|o| contained(&s, &span(o, r), r)) {
            continue;
        }
        comps.push(c);
    }
    // A later pencil may contain an earlier non-local one.
    let spans: Vec<_> = comps.iter().map(|c| span(c, r)).collect();
    let keep: Vec<bool> = (0..comps.len())
        .map(|i| {
            comps[i].is_local()
                || !(0..comps.len()).any(|j| j != i && spans[j].len() > spans[i].len() && contained(&spans[i], &spans[j], r))
        })
        .collect();
    let mut comps: Vec<ResonanceComponent> =
        comps.into_iter().zip(keep).filter_map(|(c, k)| k.then_some(c)).collect();
    comps.sort_by(|x, y| match (&x.kind, &y.kind) {
        (ComponentKind::Local { flat_id: a }, ComponentKind::Local { flat_id: b }) => a.cmp(b),
        (ComponentKind::Local { .. }, _) => std::cmp::Ordering::Less,
        (_, ComponentKind::Local { .. }) => std::cmp::Ordering::Greater,
        _ => x.key().cmp(&y.key()),
    });
    certify(a, &comps)?;
    Ok((comps, stats))
}

fn certify(a: &Arrangement, comps: &[ResonanceComponent]) -> Result<(), ResonanceError> {
    let wm = wedge_model(a)?;
    let r = a.len();
    for (idx, c) in comps.iter().enumerate() {
        let basis = span(c, r);
        let mut v = vec![Rational::from_integer(0.into()); r];
        for (t, b) in basis.iter().enumerate() {
            let coef = Rational::from_integer(((t as i64 + 1) * (t as i64 + 2) / 2 + t as i64).into());
            for (x, y) in v.iter_mut().zip(b) {
                *x += &coef * y;
            }
        }
        let k = aomoto_kernel_dim(&v, &wm)?;
        if k != c.dimension {
            return Err(ResonanceError::NotMaximal { index: idx, kernel: k, dim: c.dimension });
        }
    }
    Ok(())
}
