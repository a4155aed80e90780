//! The monomial group, orbits and invariants on the full automorphism group.

use std::sync::OnceLock;

use aru_core::aut::DEFAULT_SEARCH_BUDGET;
use aru_core::invariants::{self, Gaussian, RHO_SLOTS};
use aru_core::monomial::{LiftMode, MonomialGroup, Phase, FULL_MASK};
use aru_core::orbits::{self, OrbitRecord};
use aru_core::pipeline::{Geometry, DEFAULT_LIFT_BUDGET};
use aru_core::report::{self, Config, ReportError};

fn geometry() -> &'static Geometry {
    static G: OnceLock<Geometry> = OnceLock::new();
    G.get_or_init(|| Geometry::build(DEFAULT_SEARCH_BUDGET).unwrap())
}

fn group() -> &'static MonomialGroup {
    static M: OnceLock<MonomialGroup> = OnceLock::new();
    M.get_or_init(|| geometry().monomial_group(LiftMode::Search, DEFAULT_LIFT_BUDGET).unwrap())
}

fn middle_orbits() -> &'static Vec<OrbitRecord> {
    static O: OnceLock<Vec<OrbitRecord>> = OnceLock::new();
    O.get_or_init(|| orbits::enumerate_orbits(&geometry().perms, 14, false).unwrap())
}

#[test]
fn permutation_action_is_even_and_faithful() {
    let geo = geometry();
    assert_eq!(geo.perms.len(), 12096);
    assert_eq!(geo.group.order(), 12096);
    assert!(geo.perms.iter().all(|p| !p.is_odd()));
}

#[test]
fn lift_is_a_nonsplit_extension() {
    let m = group();
    m.verify().unwrap();
    let rep = m.report().unwrap();
    assert_eq!((rep.solution_log2, rep.split_log2, rep.classes_log2), (64, 62, 2));
    assert!(rep.nonsplit);
    let chosen: Vec<_> = rep.classes.iter().filter(|c| c.chosen).collect();
    assert_eq!(chosen.len(), 1);
    assert!(!chosen[0].split_mod_center);
    assert_eq!(m.involution_count(), 6175);
    assert!(m.sign_group().contains_minus_identity());
    for g in m.lifted_generators() {
        assert!(g.is_unitary());
        assert_eq!(g.determinant_phase(), Phase::ONE);
    }
}

#[test]
fn sign_admissible_orbits_number_80() {
    let geo = geometry();
    let admissible = orbits::admissible_burnside_count(&geo.perms, geo.sign.dozen_masks(), 14).unwrap();
    assert_eq!(admissible, 80);
    let mut list = middle_orbits().clone();
    assert_eq!(invariants::sign_parity_filter(&mut list, &geo.sign, &geo.perms), 80);
}

#[test]
fn parallel_enumeration_matches_sequential() {
    let parallel = orbits::enumerate_orbits(&geometry().perms, 14, true).unwrap();
    assert_eq!(&parallel, middle_orbits());
    assert_eq!(orbits::check_enumeration(&geometry().perms, 14, &parallel).unwrap(), 3508);
}

#[test]
fn complementation_is_an_involution_on_orbits() {
    let list = middle_orbits();
    for (i, o) in list.iter().enumerate() {
        let j = o.complement.unwrap();
        assert_eq!(list[j].complement, Some(i));
        assert_eq!(list[j].size, o.size);
    }
}

#[test]
fn invariants_agree_with_stabilizer_characters() {
    let geo = geometry();
    let m = group();
    let mut list = middle_orbits().clone();
    invariants::sign_parity_filter(&mut list, &geo.sign, &geo.perms);
    let outcome = invariants::full_invariance_filter(&mut list, m).unwrap();
    let trivial: Vec<u32> = list
        .iter()
        .filter(|o| o.sign_parity() && invariants::stabilizer_character_trivial(m, o.rep))
        .map(|o| o.rep)
        .collect();
    let found: Vec<u32> = outcome.invariants.iter().map(|t| t.rep).collect();
    assert_eq!(found, trivial);
    assert_eq!(found.len(), 68);

    let coeffs: Vec<Gaussian> = (0..RHO_SLOTS as i64).map(|k| Gaussian::new(k - 17, 3 - k % 7)).collect();
    let rho = invariants::build_rho(&outcome.invariants, &list, &coeffs).unwrap();
    assert!(rho.first_moved_by(&m.generators()).is_none());
    assert!(!rho.is_empty());
    // the support is closed under complementation
    for &mask in rho.terms().keys() {
        assert!(!rho.coefficient(!mask & FULL_MASK).is_zero());
    }
}

#[test]
fn missing_rho_file_is_reported() {
    let config = Config {
        rho_coeffs: Some("/nonexistent/rho.txt".into()),
        ..Config::default()
    };
    assert!(matches!(report::run_verify_all(&config), Err(ReportError::RhoFile { .. })));
}
