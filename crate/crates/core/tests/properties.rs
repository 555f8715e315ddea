use num_traits::Zero;
use proptest::prelude::*;

use arrweb::abelian::{log_dim, psi_matrix, sparse_rank};
use arrweb::arrangement::{gen, Arrangement, CurveArrangement, Family, Hyperplane};
use arrweb::cohomology::{betti, fiber_type_ni, local_system_h1, n2_dim, wedge, wedge_model};
use arrweb::exactla::{frac, int, lattice_integral_solve, naive_rank_kernel, MPoly, MatrixQ, Rational};
use arrweb::resonance::{
    component_h1, fiber_poly, find_components, resonance_closure, ClosureOptions, ResonanceComponent, SearchOptions,
};
use arrweb::web::{ell_spectrum, localize, stable_spectrum};

fn planar_examples() -> Vec<Family> {
    vec![
        Family::Braid(2),
        Family::BolExt(1),
        Family::BolExt(2),
        Family::BolExt(3),
        Family::PLambda(int(2)),
        Family::NonFano,
        Family::K5(None),
        Family::A0,
    ]
}

fn setup(f: &Family) -> (CurveArrangement, Vec<ResonanceComponent>) {
    let ca = gen(f).unwrap();
    let (c, _) = find_components(&ca, &SearchOptions::default()).unwrap();
    (ca, c)
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| frac(n, d))
}

fn matrix() -> impl Strategy<Value = MatrixQ> {
    (1usize..=8, 1usize..=8).prop_flat_map(|(r, c)| {
        // Sparse-ish entries make rank deficiency common.
        prop::collection::vec(prop_oneof![3 => Just(int(0)), 2 => small_rational()], r * c)
            .prop_map(move |v| MatrixQ::from_rows(v.chunks(c).map(<[Rational]>::to_vec).collect(), c))
    })
}

fn span_rank(vs: &[Vec<Rational>], cols: usize) -> usize {
    if vs.is_empty() {
        return 0;
    }
    MatrixQ::from_rows(vs.to_vec(), cols).rank()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn kernel_matches_naive_elimination(m in matrix()) {
        let (rank, ker) = m.rank_kernel();
        let (nrank, nker) = naive_rank_kernel(&m);
        prop_assert_eq!(rank, nrank);
        prop_assert_eq!(ker.len(), m.cols() - rank);
        for v in &ker {
            prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        // same subspace
        let both: Vec<Vec<Rational>> = ker.iter().chain(&nker).cloned().collect();
        prop_assert_eq!(span_rank(&both, m.cols()), ker.len());
        prop_assert_eq!(m.transpose().rank(), rank);
    }

    #[test]
    fn sparse_rank_matches_dense(m in matrix()) {
        let cols: Vec<Vec<(usize, Rational)>> = (0..m.cols())
            .map(|j| m.column(j).into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        prop_assert_eq!(sparse_rank(&cols), m.rank());
    }
}

fn poly3() -> impl Strategy<Value = MPoly> {
    prop::collection::vec(((0u32..=2, 0u32..=2, 0u32..=2), -3i64..=3), 0..6)
        .prop_map(|ts| MPoly::from_terms(3, ts.into_iter().map(|((a, b, c), k)| (vec![a, b, c], int(k)))))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn division_recombines(a in poly3(), b in poly3()) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.divmod(&b).unwrap();
        prop_assert_eq!(q.mul(&b).add(&r), a);
        let (lm, _) = b.leading().unwrap();
        prop_assert!(r.terms().all(|(m, _)| !lm.divides(m)));
    }

    #[test]
    fn lattice_solutions_have_integral_differences(
        rows in 2usize..=4,
        entries in prop::collection::vec(-3i64..=3, 16),
        d1 in 1usize..=2,
        d2 in 1usize..=2,
    ) {
        let mk = |off: usize, d: usize| {
            MatrixQ::from_rows((0..rows).map(|i| (0..d).map(|j| frac(entries[(off + i * d + j) % 16], 2)).collect()).collect(), d)
        };
        let blocks = [mk(0, d1), mk(7, d2)];
        let sol = lattice_integral_solve(&blocks);
        for c in &sol.lattice {
            let diff: Vec<Rational> = blocks[0].mul_vec(&c[0]).iter().zip(blocks[1].mul_vec(&c[1])).map(|(a, b)| a - b).collect();
            prop_assert!(diff.iter().all(|x| x.is_integer()));
        }
        for c in &sol.free {
            let diff: Vec<Rational> = blocks[0].mul_vec(&c[0]).iter().zip(blocks[1].mul_vec(&c[1])).map(|(a, b)| a - b).collect();
            prop_assert!(diff.iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn trivial_local_system_gives_first_betti_number(
        lines in prop::collection::btree_set((-3i64..=3, -3i64..=3, -3i64..=3), 3..=6)
    ) {
        let hs: Vec<Hyperplane> = lines.iter().filter(|c| *c != &(0, 0, 0)).map(|&(a, b, c)| Hyperplane::from_i64(&[a, b, c])).collect();
        let Ok(a) = Arrangement::new(2, hs, "random") else { return Ok(()) };
        prop_assume!(a.len() >= 2);
        let rho = vec![int(1); a.len()];
        prop_assert_eq!(local_system_h1(&a, &rho).unwrap(), a.len() - 1);
    }
}

#[test]
fn components_are_isotropic() {
    for f in planar_examples() {
        let (ca, comps) = setup(&f);
        let wm = wedge_model(&ca.base).unwrap();
        for c in &comps {
            let h = component_h1(&c.fibers, ca.base.len());
            assert_eq!(h.len(), c.dimension);
            for x in &h {
                for y in &h {
                    assert!(wedge(x, y, &wm).unwrap().iter().all(Zero::is_zero), "{}", ca.label());
                }
            }
        }
    }
}

#[test]
fn crude_bounds_hold_on_every_example() {
    for f in planar_examples() {
        let (ca, comps) = setup(&f);
        let b = betti(&ca).unwrap();
        let fibers: Vec<_> = comps.iter().map(|c| c.fibers.clone()).collect();
        let r = ca.num_curves();
        let d1: i64 = comps.iter().map(|c| c.dimension as i64).sum();
        let d2: i64 = comps.iter().map(|c| (c.dimension * c.dimension) as i64).sum();
        let log1 = log_dim(&fibers, r, 1, false).dim as i64;
        let log2 = log_dim(&fibers, r, 2, false).dim as i64;
        assert!(log1 >= d1 - b.h1 as i64, "{}", ca.label());
        assert!(log2 >= d2 - n2_dim(&b), "{}", ca.label());
    }
}

#[test]
fn fiber_type_counts_match_quadratic_dimension() {
    // braid(n) is fiber type with exponents 2, 3, …, n+1
    for n in [2usize, 3] {
        let ca = gen(&Family::Braid(n)).unwrap();
        let b = betti(&ca).unwrap();
        let e: Vec<u64> = (2..=n as u64 + 1).collect();
        assert_eq!(fiber_type_ni(&e, 1), b.h1 as u64);
        assert_eq!(fiber_type_ni(&e, 2) as i64, n2_dim(&b));
    }
}

#[test]
fn fibers_expand_exactly() {
    for f in planar_examples() {
        let (ca, comps) = setup(&f);
        let curves = ca.curves();
        for c in &comps {
            let (g0, g1) = &c.generators;
            for (p, d) in &c.fibers {
                assert_eq!(fiber_poly(&curves, d).monic(), p.member(g0, g1).monic(), "{}", ca.label());
            }
        }
        let cd = resonance_closure(&ca, &comps, &ClosureOptions::default()).unwrap();
        let closed = cd.closed.curves();
        for (c, fib) in comps.iter().zip(&cd.closed_fibers) {
            let (g0, g1) = &c.generators;
            for (p, d) in fib {
                assert_eq!(fiber_poly(&closed, d).monic(), p.member(g0, g1).monic(), "{} closed", ca.label());
            }
        }
    }
}

#[test]
fn closure_is_idempotent_on_every_example() {
    for f in planar_examples() {
        let (ca, comps) = setup(&f);
        let cd = resonance_closure(&ca, &comps, &ClosureOptions::default()).unwrap();
        let again = resonance_closure(&cd.closed, &comps, &ClosureOptions::default()).unwrap();
        assert_eq!(again.closed.num_curves(), cd.closed.num_curves(), "{}", ca.label());
        assert_eq!(again.closed_dims, cd.closed_dims);
        assert_eq!(again.closed_fibers, cd.closed_fibers);
    }
}

#[test]
fn spectra_agree_across_seeds() {
    for f in planar_examples().into_iter().chain([Family::Braid(3)]) {
        let (ca, comps) = setup(&f);
        let single: Vec<_> = [1u64, 2, 3].iter().map(|&s| ell_spectrum(&localize(&comps, &ca, s).unwrap())).collect();
        assert!(single.windows(2).all(|w| w[0] == w[1]), "{}", ca.label());
        let (js, agree) = stable_spectrum(&comps, &ca, 42, 3).unwrap();
        assert!(agree);
        assert_eq!(js, single[0]);
    }
}

#[test]
fn psi_kronecker_structure() {
    // Level-2 columns of one block are products of level-1 columns.
    let (ca, comps) = setup(&Family::NonFano);
    let fib = vec![comps[6].fibers.clone()];
    let r = ca.num_curves();
    let p1 = psi_matrix(&fib, r, 1).to_dense();
    let p2 = psi_matrix(&fib, r, 2).to_dense();
    let h = r - 1;
    for a in 0..p1.cols() {
        for b in 0..p1.cols() {
            for i in 0..h {
                for j in 0..h {
                    assert_eq!(p2.get(i * h + j, a * p1.cols() + b), &(p1.get(i, a) * p1.get(j, b)));
                }
            }
        }
    }
}
