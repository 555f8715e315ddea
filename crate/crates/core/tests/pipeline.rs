use arrweb::abelian::{analyze, rat_dim, rat_lemma_bound, twisted_bound, AnalysisOptions, InvariantReport};
use arrweb::arrangement::{gen, parse, serialize, Family};
use arrweb::exactla::int;
use arrweb::resonance::{find_components, resonance_closure, ClosureOptions, SearchOptions};

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

fn report(f: &Family, seed: u64) -> InvariantReport {
    let opts = AnalysisOptions { twisted: true, seed, ..AnalysisOptions::default() };
    analyze(&gen(f).unwrap(), &opts).unwrap()
}

#[test]
fn reports_are_byte_identical_on_rerun() {
    for f in planar_examples() {
        let a = serde_json::to_string(&report(&f, 42)).unwrap();
        let b = serde_json::to_string(&report(&f, 42)).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn table_cells_do_not_depend_on_the_seed() {
    for f in [Family::NonFano, Family::K5(None), Family::PLambda(int(2))] {
        assert_eq!(report(&f, 42).table_cells(), report(&f, 7).table_cells());
    }
}

#[test]
fn lower_bound_never_exceeds_bol() {
    for f in planar_examples() {
        let r = report(&f, 42);
        let bol = (r.k as u64 - 1) * (r.k as u64 - 2) / 2;
        assert_eq!(r.bol, Some(bol));
        assert!(r.rank_lower <= bol, "{}", r.label);
        assert!(r.rank_lower <= r.rank_upper);
        assert_eq!(r.residual, bol.min(r.rank_upper) - r.rank_lower);
    }
}

#[test]
fn rational_relations_are_certified_and_dominate_the_line_count() {
    for f in planar_examples() {
        let ca = gen(&f).unwrap();
        let (comps, _) = find_components(&ca, &SearchOptions::default()).unwrap();
        let cd = resonance_closure(&ca, &comps, &ClosureOptions::default()).unwrap();
        let rs = rat_dim(&cd.closed_fibers, &cd.closed, 6, 42).unwrap();
        assert!(rs.exact, "{}", ca.label());
        assert!(rs.stabilized);
        assert!(rs.dim >= rat_lemma_bound(&ca.base, &cd.closed), "{}", ca.label());
    }
}

#[test]
fn arrangement_files_round_trip() {
    for f in planar_examples().into_iter().chain([Family::Braid(3)]) {
        let ca = gen(&f).unwrap();
        let bytes = serialize(&ca);
        let back = parse(&bytes).unwrap();
        assert_eq!(serialize(&back), bytes);
    }
}

#[test]
fn twisted_bound_is_zero_on_braid_pairs_and_one_on_nonfano() {
    let ca = gen(&Family::Braid(2)).unwrap();
    let (c, _) = find_components(&ca, &SearchOptions::default()).unwrap();
    assert_eq!(twisted_bound(&c, &[0, 4], &ca.base).unwrap().bound, 0);
    let ca = gen(&Family::NonFano).unwrap();
    let (c, _) = find_components(&ca, &SearchOptions::default()).unwrap();
    let nl: Vec<usize> = (0..c.len()).filter(|&i| !c[i].is_local()).collect();
    let t = twisted_bound(&c, &nl, &ca.base).unwrap();
    assert_eq!(t.bound, 1);
    // −h¹ + Σ (dim Σ − 1) with h¹ = 2 and three planes
    let cert = t.certificate.unwrap();
    assert_eq!(cert.bound + cert.h1, nl.iter().map(|&i| c[i].dimension - 1).sum::<usize>());
}

#[test]
fn disabling_closure_uses_open_log_spaces() {
    let ca = gen(&Family::K5(None)).unwrap();
    let opts = AnalysisOptions { closure: false, ..AnalysisOptions::default() };
    let r = analyze(&ca, &opts).unwrap();
    assert_eq!(r.log, r.log_closed);
    assert!(r.closure_curves.is_empty());
}
