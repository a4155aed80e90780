//! Acceptance criteria 1-10. Each test prints one status line to stdout,
//! then asserts.

use std::collections::BTreeSet;
use std::io::Write;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use aru_core::aut::{aut_group_search, DEFAULT_SEARCH_BUDGET};
use aru_core::binary::{dozen_rank, BinaryAlgebra, ElementType};
use aru_core::character::{self, GOLDEN_CELLS};
use aru_core::fermion;
use aru_core::invariants;
use aru_core::monomial::{LiftMode, FULL_MASK};
use aru_core::octonion::{composition_check, LatticeBasis, MultiplicationTable, Octonion, ProjectivePoint};
use aru_core::orbits::{self, OrbitRecord};
use aru_core::perm;
use aru_core::pipeline::{Geometry, DEFAULT_LIFT_BUDGET};
use aru_core::series::GradedSeries;
use num_bigint::BigInt;

const LIMIT_TABLE: Duration = Duration::from_secs(1);
const LIMIT_CENSUS: Duration = Duration::from_secs(1);
const LIMIT_DOZENS: Duration = Duration::from_secs(1);
const LIMIT_AUT: Duration = Duration::from_secs(120);
const LIMIT_ORBITS: Duration = Duration::from_secs(600);
const LIMIT_ORBIT_MEMORY_KB: u64 = 1 << 20;
const LIMIT_CHARACTER: Duration = Duration::from_secs(5);
const LIMIT_DECOMPOSITIONS: Duration = Duration::from_secs(1);
const LIMIT_AXIOMS: Duration = Duration::from_secs(30);
const LIMIT_CROSS: Duration = Duration::from_secs(5);

const SAMPLE_PAIRS: usize = 1000;
const SAMPLE_SEED: u64 = 20_240_601;

fn status_line(id: u32, passed: bool, detail: &str, elapsed: Duration, limit: Option<Duration>) {
    let limit = limit.map_or(String::new(), |l| format!(", limit {} ms", l.as_millis()));
    let line = format!(
        "criterion {id:>2}: {} | {detail} ({} ms{limit})\n",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_millis()
    );
    // bypass the test harness capture so every line reaches the log
    let _ = std::io::stdout().write_all(line.as_bytes());
}

fn geometry() -> &'static Geometry {
    static G: OnceLock<Geometry> = OnceLock::new();
    G.get_or_init(|| Geometry::build(DEFAULT_SEARCH_BUDGET).expect("geometry builds"))
}

fn middle_orbits() -> &'static Vec<OrbitRecord> {
    static O: OnceLock<Vec<OrbitRecord>> = OnceLock::new();
    O.get_or_init(|| orbits::enumerate_orbits(&geometry().perms, 14, true).expect("enumeration"))
}

/// Peak resident set of this process, in KiB.
fn peak_rss_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

#[test]
fn criterion_01_cayley_table() {
    let start = Instant::now();
    let table = MultiplicationTable::build();
    let basis = LatticeBasis::standard();
    let (closed, sampled, identity) = match (&table, &basis) {
        (Ok(t), Ok(b)) => {
            let one = Octonion::one();
            let identity = ProjectivePoint::all().all(|p| {
                let h = Octonion::basis(p);
                t.multiply(&one, &h) == h && t.multiply(&h, &one) == h
            });
            (t.closed_pairs(), composition_check(t, b, SAMPLE_PAIRS, SAMPLE_SEED).ok(), identity)
        }
        _ => (0, None, false),
    };
    let elapsed = start.elapsed();
    let passed = closed == 56 && sampled == Some(SAMPLE_PAIRS) && identity && elapsed < LIMIT_TABLE;
    status_line(
        1,
        passed,
        &format!(
            "{closed}/56 products single-valued, identity {identity}, composition on {} sampled pairs",
            sampled.map_or_else(|| "no".to_string(), |n| n.to_string())
        ),
        elapsed,
        Some(LIMIT_TABLE),
    );
    assert!(passed);
}

#[test]
fn criterion_02_census() {
    let start = Instant::now();
    let alg = BinaryAlgebra::new().unwrap();
    let census = alg.census();
    // independent tally by type
    let mut tally = [0u32; 6];
    for x in BinaryAlgebra::elements() {
        let t = alg.classify(x);
        tally[ElementType::ALL.iter().position(|&u| u == t).unwrap()] += 1;
    }
    let elapsed = start.elapsed();
    let c = census.as_tuple();
    let passed = c == (1, 1, 63, 63, 72, 56) && tally == [1, 1, 63, 63, 72, 56] && elapsed < LIMIT_CENSUS;
    status_line(2, passed, &format!("census {c:?}"), elapsed, Some(LIMIT_CENSUS));
    assert!(passed);
}

#[test]
fn criterion_03_delta_and_dozens() {
    let start = Instant::now();
    let alg = BinaryAlgebra::new().unwrap();
    let delta = alg.build_delta();
    let idempotent = alg.unit_pairs(ElementType::Idempotent);
    let (_, dozens) = alg.build_dozens(&delta).unwrap();
    let sizes: BTreeSet<u32> = dozens.iter().map(|d| d.size()).collect();
    let distinct: BTreeSet<u32> = dozens.iter().map(|d| d.members).collect();
    let rank = dozen_rank(&dozens);
    let sign = aru_core::monomial::SignGroup::new(&dozens);
    let elapsed = start.elapsed();
    let passed = delta.len() == 28
        && idempotent.len() == 36
        && dozens.len() == 63
        && distinct.len() == 63
        && sizes == BTreeSet::from([12])
        && rank == 7
        && sign.order() == 128
        && elapsed < LIMIT_DOZENS;
    status_line(
        3,
        passed,
        &format!(
            "{} cube-root pairs, {} idempotent pairs, {} dozens of sizes {sizes:?}, rank {rank}, sign group order {}",
            delta.len(),
            idempotent.len(),
            dozens.len(),
            sign.order()
        ),
        elapsed,
        Some(LIMIT_DOZENS),
    );
    assert!(passed);
}

#[test]
fn criterion_04_automorphism_group() {
    let alg = BinaryAlgebra::new().unwrap();
    let start = Instant::now();
    let group = aut_group_search(&alg, DEFAULT_SEARCH_BUDGET).unwrap();
    let elapsed = start.elapsed();
    let delta = alg.build_delta();
    let perms: Vec<_> = group.iter().map(|g| aru_core::aut::perm_image(g, &delta)).collect();
    let on_delta = perm::point_orbit(&perms, 0);
    let idem = alg.unit_pairs(ElementType::Idempotent);
    let idem_orbit: BTreeSet<[u8; 2]> = group
        .iter()
        .map(|g| {
            let mut p = [g.apply(idem[0][0]).0, g.apply(idem[0][1]).0];
            p.sort_unstable();
            p
        })
        .collect();
    let passed = group.len() == 12096 && on_delta == FULL_MASK && idem_orbit.len() == 36 && elapsed < LIMIT_AUT;
    status_line(
        4,
        passed,
        &format!(
            "order {}, orbit of a cube-root pair {}, orbit of an idempotent pair {}",
            group.len(),
            on_delta.count_ones(),
            idem_orbit.len()
        ),
        elapsed,
        Some(LIMIT_AUT),
    );
    assert!(passed);
}

#[test]
fn criterion_05_orbits_on_14_subsets() {
    let geo = geometry();
    let start = Instant::now();
    let burnside = orbits::burnside_orbit_count(&geo.perms, 14).unwrap();
    let list = orbits::enumerate_orbits(&geo.perms, 14, true).unwrap();
    let elapsed = start.elapsed();
    let rss = peak_rss_kb();
    let sum: u128 = list.iter().map(|o| o.size as u128).sum();
    let admissible = orbits::admissible_burnside_count(&geo.perms, geo.sign.dozen_masks(), 14).unwrap();
    let agrees = list.len() as u128 == burnside && sum == 40_116_600;
    let memory_ok = rss.is_none_or(|kb| kb < LIMIT_ORBIT_MEMORY_KB);
    let passed = burnside == 80 && agrees && memory_ok && elapsed < LIMIT_ORBITS;
    status_line(
        5,
        passed,
        &format!(
            "burnside {burnside} (required 80), enumerated {}, sizes sum to {sum}, peak RSS {} KiB; \
             orbits of subsets meeting every dozen evenly: {admissible}",
            list.len(),
            rss.map_or("?".into(), |k| k.to_string())
        ),
        elapsed,
        Some(LIMIT_ORBITS),
    );
    assert!(agrees, "enumeration disagrees with Burnside");
    assert_eq!(burnside, 80, "orbits of the automorphism group on all 14-subsets");
}

#[test]
fn criterion_06_invariants() {
    let geo = geometry();
    let mut list = middle_orbits().clone();
    let start = Instant::now();
    let group = geo.monomial_group(LiftMode::Search, DEFAULT_LIFT_BUDGET).unwrap();
    group.verify().unwrap();
    let parity = invariants::sign_parity_filter(&mut list, &geo.sign, &geo.perms);
    let outcome = invariants::full_invariance_filter(&mut list, &group).unwrap();
    let pairs = invariants::complement_pairs(&outcome.invariants, &list).unwrap();
    let nu = invariants::check_nu_invariance(&group).is_ok();
    let elapsed = start.elapsed();

    // without a lift the run degrades to the sign-parity count
    let unsigned = geo.monomial_group(LiftMode::None, DEFAULT_LIFT_BUDGET).unwrap();
    let mut plain = middle_orbits().clone();
    invariants::sign_parity_filter(&mut plain, &geo.sign, &geo.perms);
    let degraded = invariants::full_invariance_filter(&mut plain, &unsigned).unwrap();

    let passed = !outcome.approximate && outcome.invariants.len() == 68 && pairs.len() == 34 && nu;
    status_line(
        6,
        passed,
        &format!(
            "{} invariants in {} complementary pairs, ν fixed {nu}, {parity} sign-parity orbits; \
             without lift: {} approximate",
            outcome.invariants.len(),
            pairs.len(),
            degraded.invariants.len()
        ),
        elapsed,
        None,
    );
    assert!(passed);
    assert!(degraded.approximate && degraded.invariants.len() == parity);
}

fn cell(series: &GradedSeries, half_degree: u32, charge: i64) -> BigInt {
    character::entry(series, half_degree, charge)
}

#[test]
fn criterion_07_character_table() {
    let start = Instant::now();
    let series = character::character(12).unwrap();
    let product = character::character_by_product(12).unwrap();
    let elapsed = start.elapsed();
    let mismatched: Vec<String> = GOLDEN_CELLS
        .iter()
        .filter(|&&(h, m, v)| cell(&series, h, m) != BigInt::from(v))
        .map(|&(h, m, v)| format!("({h}/2, {m}): expected {v}, got {}", cell(&series, h, m)))
        .collect();
    let named = [
        (2, 0, 784u64),
        (2, 2, 378),
        (4, 0, 144452),
        (4, 2, 92512),
        (4, 4, 20475),
        (7, 0, 40116600),
        (7, 2, 30421755),
        (7, 4, 13123110),
        (7, 6, 3108105),
        (7, 8, 376740),
        (11, 0, 56547022140),
    ];
    let named_ok = named.iter().all(|&(h, m, v)| cell(&series, h, m) == BigInt::from(v));
    let total = series.degree_total(character::row_deg24(7));
    let sym = series.is_charge_symmetric();
    let odd = series.odd_charges_vanish();
    let forms = series == product;
    let passed = mismatched.is_empty()
        && named_ok
        && sym
        && odd
        && total == BigInt::from(1u64 << 27)
        && forms
        && elapsed < LIMIT_CHARACTER;
    status_line(
        7,
        passed,
        &format!(
            "{}/{} printed cells match, symmetric {sym}, odd charges vanish {odd}, degree-7/2 total {total}, sum and product forms agree {forms}",
            GOLDEN_CELLS.len() - mismatched.len(),
            GOLDEN_CELLS.len()
        ),
        elapsed,
        Some(LIMIT_CHARACTER),
    );
    assert!(passed, "{mismatched:?}");
}

#[test]
fn criterion_08_decomposition_identities() {
    let series = character::character(12).unwrap();
    let start = Instant::now();
    // (dimension, [(multiplicity, degree)], half-degree, charge)
    let identities: [(u64, &[(u64, u64)], u32, i64); 6] = [
        (378, &[(1, 378)], 2, 2),
        (784, &[(1, 1), (1, 783)], 2, 0),
        (20475, &[(1, 20475)], 4, 4),
        (92512, &[(2, 378), (1, 406), (1, 91350)], 4, 2),
        (144452, &[(3, 1), (3, 783), (1, 65975), (1, 76125)], 4, 0),
        (376740, &[(1, 27405), (1, 65975), (1, 75400), (1, 102400)], 6, 6),
    ];
    let mut failures = Vec::new();
    for (dim, parts, h, m) in identities {
        let sum: u64 = parts.iter().map(|(k, d)| k * d).sum();
        let entry = cell(&series, h, m);
        if sum != dim || entry != BigInt::from(dim) {
            failures.push(format!("{dim}: parts sum to {sum}, character entry {entry}"));
        }
    }
    let library = character::verify_decompositions(&series);
    let library_failures = library.iter().filter(|c| !c.passed()).count();
    let elapsed = start.elapsed();
    let passed = failures.is_empty() && library_failures == 0 && elapsed < LIMIT_DECOMPOSITIONS;
    status_line(
        8,
        passed,
        &format!(
            "{}/6 identities hold{}",
            6 - failures.len(),
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }
        ),
        elapsed,
        Some(LIMIT_DECOMPOSITIONS),
    );
    assert_eq!(library_failures, failures.len());
    assert!(passed, "{failures:?}");
}

#[test]
fn criterion_09_mode_algebra_axioms() {
    let start = Instant::now();
    let mut total = 0;
    let mut brackets = 0;
    let mut failed = Vec::new();
    for n in [1, 2] {
        for c in fermion::axiom_suite(n, 8).unwrap() {
            total += 1;
            brackets += (c.name.starts_with("[L(") && c.name.contains("), L(")) as usize;
            if !c.passed {
                failed.push(format!("n = {n}: {} {:?}", c.name, c.detail));
            }
        }
    }
    let elapsed = start.elapsed();
    let passed = failed.is_empty() && brackets == 2 * 25 && elapsed < LIMIT_AXIOMS;
    status_line(
        9,
        passed,
        &format!("{}/{total} checks hold, {brackets} Virasoro brackets", total - failed.len()),
        elapsed,
        Some(LIMIT_AXIOMS),
    );
    assert!(passed, "{failed:?}");
}

#[test]
fn criterion_10_fermionic_count_matches_character() {
    let start = Instant::now();
    let count = fermion::charge_character_count(28, 6);
    let ns = character::ns_part(6).unwrap();
    let ramond = character::ramond_part(7).unwrap();
    let elapsed = start.elapsed();
    // C(28, 14) by the multiplicative formula
    let binom = (1..=14u128).fold(1u128, |acc, i| acc * (14 + i) / i);
    let ramond_entry = cell(&ramond, 7, 0);
    let agree = count == ns;
    let low = cell(&count, 2, 0) == BigInt::from(784) && cell(&count, 2, 2) == BigInt::from(378);
    let passed = agree && low && ramond_entry == BigInt::from(binom) && elapsed < LIMIT_CROSS;
    status_line(
        10,
        passed,
        &format!("NS halves agree {agree}, degree-1 counts 784/378 {low}, Ramond (7/2, 0) entry {ramond_entry} vs C(28,14) = {binom}"),
        elapsed,
        Some(LIMIT_CROSS),
    );
    assert!(passed, "first difference {:?}", count.first_difference(&ns));
}
