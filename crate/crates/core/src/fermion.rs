//! Truncated Neveu-Schwarz Fock spaces of `n` charged fermion pairs
//! `ψ^±_i(r)`, `r ∈ Z + 1/2`, with `{ψ^+_i(r), ψ^-_j(s)} = δ_ij δ_{r+s,0}`.
//!
//! Modes are stored doubled (`r2 = 2r`, odd). The Virasoro operators are
//! `L(m) = Σ_i Σ_r (r - m/2) :ψ^+_i(m - r) ψ^-_i(r):`, normalized so that
//! `L(0)` is the degree, and the charge is `J(0) = Σ_i Σ_r :ψ^+_i(-r) ψ^-_i(r):`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::series::GradedSeries;

/// Largest truncation degree accepted, in half-units.
pub const MAX_HALF_DEGREE: u32 = 12;
/// Largest basis materialized.
pub const MAX_BASIS: usize = 250_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FermionError {
    #[error("truncation at degree {half_degree}/2 with {pairs} pairs is too large ({reason})")]
    TruncationTooLarge { pairs: u32, half_degree: u32, reason: String },
    #[error("no basis state is safe for {0} at this truncation")]
    BoundaryEmpty(String),
    #[error("at least one fermion pair is required")]
    NoPairs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Species {
    Plus,
    Minus,
}

impl Species {
    pub fn opposite(self) -> Species {
        match self {
            Species::Plus => Species::Minus,
            Species::Minus => Species::Plus,
        }
    }
}

/// An occupied creation mode `ψ^s_i(r)`, `r < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Slot {
    pub species: Species,
    pub pair: u32,
    /// `2r`, negative and odd.
    pub r2: i32,
}

/// A basis state: occupied slots in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FockState {
    slots: Vec<Slot>,
}

impl FockState {
    pub fn vacuum() -> Self {
        FockState { slots: Vec::new() }
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    /// Twice the degree: `Σ -2r`.
    pub fn half_degree(&self) -> u32 {
        self.slots.iter().map(|s| (-s.r2) as u32).sum()
    }

    pub fn charge(&self) -> i64 {
        self.slots
            .iter()
            .map(|s| if s.species == Species::Plus { 1 } else { -1 })
            .sum()
    }

    pub fn fermion_number(&self) -> usize {
        self.slots.len()
    }
}

/// A single mode `ψ^s_i(r)`; a creator for `r < 0`, an annihilator for
/// `r > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ModeOperator {
    pub species: Species,
    pub pair: u32,
    pub r2: i32,
}

impl ModeOperator {
    pub fn new(species: Species, pair: u32, r2: i32) -> Self {
        assert!(r2 % 2 != 0, "fermion modes are half-integral");
        ModeOperator { species, pair, r2 }
    }

    /// Image of a basis state with its sign, or `None` for zero.
    pub fn apply_state(&self, state: &FockState) -> Option<(FockState, i64)> {
        if self.r2 < 0 {
            let slot = Slot {
                species: self.species,
                pair: self.pair,
                r2: self.r2,
            };
            let pos = state.slots.binary_search(&slot).err()?;
            let mut slots = state.slots.clone();
            slots.insert(pos, slot);
            Some((FockState { slots }, if pos % 2 == 0 { 1 } else { -1 }))
        } else {
            // ψ^s(r) pairs with the ψ^{-s}(-r) slot
            let slot = Slot {
                species: self.species.opposite(),
                pair: self.pair,
                r2: -self.r2,
            };
            let pos = state.slots.binary_search(&slot).ok()?;
            let mut slots = state.slots.clone();
            slots.remove(pos);
            Some((FockState { slots }, if pos % 2 == 0 { 1 } else { -1 }))
        }
    }
}

/// A finite linear combination of basis states.
pub type FockVector = BTreeMap<FockState, Rational64>;

fn add_into(v: &mut FockVector, s: FockState, c: Rational64) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(s.clone()).or_insert_with(Rational64::zero);
    *e += c;
    if e.is_zero() {
        v.remove(&s);
    }
}

pub fn basis_vector(state: &FockState) -> FockVector {
    BTreeMap::from([(state.clone(), Rational64::one())])
}

/// Apply a sequence of modes, rightmost first.
fn apply_word(word: &[ModeOperator], state: &FockState) -> Option<(FockState, i64)> {
    let mut current = state.clone();
    let mut sign = 1;
    for op in word.iter().rev() {
        let (next, s) = op.apply_state(&current)?;
        current = next;
        sign *= s;
    }
    Some((current, sign))
}

/// Operators that are finite sums of mode words with rational coefficients.
pub trait FockOperator {
    fn apply_state(&self, state: &FockState) -> FockVector;

    fn apply(&self, v: &FockVector) -> FockVector {
        let mut out = FockVector::new();
        for (s, c) in v {
            for (t, d) in self.apply_state(s) {
                add_into(&mut out, t, *c * d);
            }
        }
        out
    }

    /// Change in twice the degree.
    fn half_degree_shift(&self) -> i32;
}

impl FockOperator for ModeOperator {
    fn apply_state(&self, state: &FockState) -> FockVector {
        match ModeOperator::apply_state(self, state) {
            Some((s, sign)) => BTreeMap::from([(s, Rational64::from_integer(sign))]),
            None => FockVector::new(),
        }
    }

    fn half_degree_shift(&self) -> i32 {
        -self.r2
    }
}

/// `Σ_i Σ_r w(r) :ψ^+_i(m - r) ψ^-_i(r):` for a weight `w` on doubled modes.
#[derive(Debug, Clone)]
pub struct Bilinear {
    pairs: u32,
    /// `2m`.
    m2: i32,
    /// `(2r, coefficient)`, every `r` with a possibly nonzero term.
    terms: Vec<(i32, Rational64)>,
}

impl Bilinear {
    fn new(pairs: u32, m: i32, reach_half: u32, weight: impl Fn(i32) -> Rational64) -> Self {
        let bound = reach_half as i32 + 2 * m.abs() + 1;
        let terms = (-bound..=bound)
            .filter(|r2| r2 % 2 != 0)
            .map(|r2| (r2, weight(r2)))
            .filter(|(_, w)| !w.is_zero())
            .collect();
        Bilinear { pairs, m2: 2 * m, terms }
    }

    /// `L(m)`, valid on states of degree up to `reach_half / 2`.
    pub fn virasoro(pairs: u32, m: i32, reach_half: u32) -> Self {
        Self::new(pairs, m, reach_half, |r2| Rational64::new((r2 - m) as i64, 2))
    }

    /// `J(0)`.
    pub fn charge(pairs: u32, reach_half: u32) -> Self {
        Self::new(pairs, 0, reach_half, |_| Rational64::one())
    }
}

impl FockOperator for Bilinear {
    fn apply_state(&self, state: &FockState) -> FockVector {
        let mut out = FockVector::new();
        for i in 0..self.pairs {
            for &(r2, w) in &self.terms {
                let a = ModeOperator::new(Species::Plus, i, self.m2 - r2);
                let b = ModeOperator::new(Species::Minus, i, r2);
                // normal order: annihilators to the right
                let (word, sign) = if b.r2 < 0 && a.r2 > 0 { ([b, a], -1) } else { ([a, b], 1) };
                if let Some((s, sg)) = apply_word(&word, state) {
                    add_into(&mut out, s, w * (sign * sg));
                }
            }
        }
        out
    }

    fn half_degree_shift(&self) -> i32 {
        -self.m2
    }
}

/// All basis states of degree at most `max_half_degree / 2`, sorted.
pub fn build_fock(pairs: u32, max_half_degree: u32) -> Result<Vec<FockState>, FermionError> {
    if pairs == 0 {
        return Err(FermionError::NoPairs);
    }
    if max_half_degree > MAX_HALF_DEGREE {
        return Err(FermionError::TruncationTooLarge {
            pairs,
            half_degree: max_half_degree,
            reason: format!("degree above {}", MAX_HALF_DEGREE / 2),
        });
    }
    let mut slots = Vec::new();
    for species in [Species::Plus, Species::Minus] {
        for pair in 0..pairs {
            for r2 in (1..=max_half_degree as i32).step_by(2) {
                slots.push(Slot { species, pair, r2: -r2 });
            }
        }
    }
    slots.sort_unstable();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn extend(
        slots: &[Slot],
        from: usize,
        budget: u32,
        current: &mut Vec<Slot>,
        out: &mut Vec<FockState>,
    ) -> bool {
        out.push(FockState { slots: current.clone() });
        if out.len() > MAX_BASIS {
            return false;
        }
        for k in from..slots.len() {
            let cost = (-slots[k].r2) as u32;
            if cost <= budget {
                current.push(slots[k]);
                let ok = extend(slots, k + 1, budget - cost, current, out);
                current.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    if !extend(&slots, 0, max_half_degree, &mut current, &mut out) {
        return Err(FermionError::TruncationTooLarge {
            pairs,
            half_degree: max_half_degree,
            reason: format!("more than {MAX_BASIS} states"),
        });
    }
    out.sort();
    Ok(out)
}

/// Outcome of one axiom check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub name: String,
    pub passed: bool,
    /// Basis states on which the identity was compared.
    pub states_checked: usize,
    pub detail: Option<String>,
}

fn sub(a: &FockVector, b: &FockVector) -> FockVector {
    let mut out = a.clone();
    for (s, c) in b {
        add_into(&mut out, s.clone(), -*c);
    }
    out
}

fn scaled(v: &FockVector, k: Rational64) -> FockVector {
    v.iter().map(|(s, c)| (s.clone(), *c * k)).filter(|(_, c)| !c.is_zero()).collect()
}

/// States on which `A B` and `B A` never leave the truncation.
fn safe_states<'a>(
    basis: &'a [FockState],
    max_half_degree: u32,
    shifts: &[i32],
) -> impl Iterator<Item = &'a FockState> {
    let max = max_half_degree as i32;
    let shifts = shifts.to_vec();
    basis.iter().filter(move |s| {
        let d = s.half_degree() as i32;
        let mut ok = d <= max;
        for &a in &shifts {
            ok &= d + a <= max;
        }
        let total: i32 = shifts.iter().sum();
        ok && d + total <= max
    })
}

/// `[L(m1), L(m2)] = (m1 - m2) L(m1 + m2) + (m1³ - m1)/12 · c · δ_{m1+m2,0}`
/// with `c = pairs`, on every safe basis state.
pub fn virasoro_bracket_check(
    pairs: u32,
    m1: i32,
    m2: i32,
    max_half_degree: u32,
) -> Result<AxiomCheck, FermionError> {
    let basis = build_fock(pairs, max_half_degree)?;
    let l1 = Bilinear::virasoro(pairs, m1, max_half_degree);
    let l2 = Bilinear::virasoro(pairs, m2, max_half_degree);
    let l12 = Bilinear::virasoro(pairs, m1 + m2, max_half_degree);
    let central = if m1 + m2 == 0 {
        Rational64::new((m1 * m1 * m1 - m1) as i64 * pairs as i64, 12)
    } else {
        Rational64::zero()
    };
    let name = format!("[L({m1}), L({m2})]");
    let mut checked = 0;
    for s in safe_states(&basis, max_half_degree, &[-2 * m1, -2 * m2]) {
        let v = basis_vector(s);
        let lhs = sub(&l1.apply(&l2.apply(&v)), &l2.apply(&l1.apply(&v)));
        let mut rhs = scaled(&l12.apply(&v), Rational64::from_integer((m1 - m2) as i64));
        add_into(&mut rhs, s.clone(), central);
        checked += 1;
        if lhs != rhs {
            return Ok(AxiomCheck {
                name,
                passed: false,
                states_checked: checked,
                detail: Some(format!("fails on {:?}", s.slots())),
            });
        }
    }
    if checked == 0 {
        return Err(FermionError::BoundaryEmpty(name));
    }
    Ok(AxiomCheck {
        name,
        passed: true,
        states_checked: checked,
        detail: None,
    })
}

/// Mode form of the translation axiom, `[L(-1), u_(k)] = -k u_(k-1)`, and
/// the grading companion `[L(0), u_(k)] = (wt u - k - 1) u_(k)`, for every
/// generator `u = ψ^±_i` (weight 1/2, `u_(k) = ψ(k + 1/2)`), plus
/// `L(-1)` on the vacuum.
pub fn translation_axiom_check(pairs: u32, max_half_degree: u32) -> Result<Vec<AxiomCheck>, FermionError> {
    let basis = build_fock(pairs, max_half_degree)?;
    let lm1 = Bilinear::virasoro(pairs, -1, max_half_degree);
    let l0 = Bilinear::virasoro(pairs, 0, max_half_degree);
    let reach = max_half_degree as i32;
    let mut translation = (0usize, None::<String>);
    let mut grading = (0usize, None::<String>);
    for species in [Species::Plus, Species::Minus] {
        for pair in 0..pairs {
            // u_(k) = ψ(r) with r = k + 1/2
            for r2 in (-reach - 1..=reach + 1).filter(|r| r % 2 != 0) {
                let u = ModeOperator::new(species, pair, r2);
                let u_prev = ModeOperator::new(species, pair, r2 - 2);
                let k2 = r2 - 1; // 2k
                for s in safe_states(&basis, max_half_degree, &[2, -r2]) {
                    let v = basis_vector(s);
                    let lhs = sub(&lm1.apply(&u.apply(&v)), &u.apply(&lm1.apply(&v)));
                    let rhs = scaled(&u_prev.apply(&v), Rational64::new(-(k2 as i64), 2));
                    translation.0 += 1;
                    if lhs != rhs && translation.1.is_none() {
                        translation.1 = Some(format!("{u:?} on {:?}", s.slots()));
                    }
                }
                for s in safe_states(&basis, max_half_degree, &[0, -r2]) {
                    let v = basis_vector(s);
                    let lhs = sub(&l0.apply(&u.apply(&v)), &u.apply(&l0.apply(&v)));
                    // wt - k - 1 = 1/2 - k - 1
                    let rhs = scaled(&u.apply(&v), Rational64::new(-1 - k2 as i64, 2));
                    grading.0 += 1;
                    if lhs != rhs && grading.1.is_none() {
                        grading.1 = Some(format!("{u:?} on {:?}", s.slots()));
                    }
                }
            }
        }
    }
    if translation.0 == 0 {
        return Err(FermionError::BoundaryEmpty("translation axiom".into()));
    }
    let vac = lm1.apply(&basis_vector(&FockState::vacuum()));
    Ok(vec![
        AxiomCheck {
            name: "[L(-1), u_(k)] = -k u_(k-1)".into(),
            passed: translation.1.is_none(),
            states_checked: translation.0,
            detail: translation.1,
        },
        AxiomCheck {
            name: "[L(0), u_(k)] = (wt u - k - 1) u_(k)".into(),
            passed: grading.1.is_none(),
            states_checked: grading.0,
            detail: grading.1,
        },
        AxiomCheck {
            name: "L(-1) vacuum = 0".into(),
            passed: vac.is_empty(),
            states_checked: 1,
            detail: (!vac.is_empty()).then(|| format!("{} terms", vac.len())),
        },
    ])
}

/// `L(0)` is diagonal with eigenvalue the degree, `J(0)` is diagonal with
/// eigenvalue the charge, and they commute.
pub fn grading_checks(pairs: u32, max_half_degree: u32) -> Result<Vec<AxiomCheck>, FermionError> {
    let basis = build_fock(pairs, max_half_degree)?;
    let l0 = Bilinear::virasoro(pairs, 0, max_half_degree);
    let j0 = Bilinear::charge(pairs, max_half_degree);
    let mut diag_l = None;
    let mut diag_j = None;
    let mut commute = None;
    for s in &basis {
        let v = basis_vector(s);
        let lv = l0.apply(&v);
        let jv = j0.apply(&v);
        if lv != scaled(&v, Rational64::new(s.half_degree() as i64, 2)) && diag_l.is_none() {
            diag_l = Some(format!("{:?}", s.slots()));
        }
        if jv != scaled(&v, Rational64::from_integer(s.charge())) && diag_j.is_none() {
            diag_j = Some(format!("{:?}", s.slots()));
        }
        if l0.apply(&jv) != j0.apply(&lv) && commute.is_none() {
            commute = Some(format!("{:?}", s.slots()));
        }
    }
    let check = |name: &str, fail: Option<String>| AxiomCheck {
        name: name.into(),
        passed: fail.is_none(),
        states_checked: basis.len(),
        detail: fail,
    };
    Ok(vec![
        check("L(0) = degree", diag_l),
        check("J(0) = charge", diag_j),
        check("[J(0), L(0)] = 0", commute),
    ])
}

/// `{a, b}` acts on every safe basis state as the scalar
/// `δ_ij δ_{r+s,0}` (opposite species), or `0`.
pub fn anticommutator_check(pairs: u32, max_half_degree: u32) -> Result<AxiomCheck, FermionError> {
    let basis = build_fock(pairs, max_half_degree)?;
    let reach = max_half_degree as i32 + 1;
    let mut modes = Vec::new();
    for species in [Species::Plus, Species::Minus] {
        for pair in 0..pairs {
            for r2 in (-reach..=reach).filter(|r| r % 2 != 0) {
                modes.push(ModeOperator::new(species, pair, r2));
            }
        }
    }
    let mut checked = 0;
    for a in &modes {
        for b in &modes {
            let expected = if a.pair == b.pair && a.species != b.species && a.r2 + b.r2 == 0 {
                Rational64::one()
            } else {
                Rational64::zero()
            };
            for s in safe_states(&basis, max_half_degree, &[-a.r2, -b.r2]) {
                let v = basis_vector(s);
                let mut lhs = a.apply(&b.apply(&v));
                for (t, c) in b.apply(&a.apply(&v)) {
                    add_into(&mut lhs, t, c);
                }
                checked += 1;
                if lhs != scaled(&v, expected) {
                    return Ok(AxiomCheck {
                        name: "anticommutators".into(),
                        passed: false,
                        states_checked: checked,
                        detail: Some(format!("{{{a:?}, {b:?}}} on {:?}", s.slots())),
                    });
                }
            }
        }
    }
    Ok(AxiomCheck {
        name: "anticommutators".into(),
        passed: true,
        states_checked: checked,
        detail: None,
    })
}

/// Every check at one truncation: anticommutators, grading, `[J(0), L(0)]`,
/// Virasoro brackets for `|m1|, |m2| ≤ 2`, and the translation axiom.
/// Brackets with no safe state at this truncation are left out.
pub fn axiom_suite(pairs: u32, max_half_degree: u32) -> Result<Vec<AxiomCheck>, FermionError> {
    let mut out = vec![anticommutator_check(pairs, max_half_degree)?];
    out.extend(grading_checks(pairs, max_half_degree)?);
    for m1 in -2..=2 {
        for m2 in -2..=2 {
            match virasoro_bracket_check(pairs, m1, m2, max_half_degree) {
                Ok(c) => out.push(c),
                Err(FermionError::BoundaryEmpty(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    out.extend(translation_axiom_check(pairs, max_half_degree)?);
    Ok(out)
}

/// `Σ p^charge q^{degree - n/24}` over states with an even number of
/// fermions, by a dynamic program over modes (no states materialized).
pub fn charge_character_count(pairs: u32, max_half_degree: u32) -> GradedSeries {
    let n = pairs as usize;
    let top = max_half_degree as usize;
    let width = 2 * n * (top + 1) + 1;
    let offset = (width / 2) as i64;
    // dp[parity][half_degree][charge + offset]
    let mut dp = vec![vec![vec![0u128; width]; top + 1]; 2];
    dp[0][0][offset as usize] = 1;
    let binom: Vec<u128> = {
        let mut b = vec![1u128; n + 1];
        for j in 1..=n {
            b[j] = b[j - 1] * (n - j + 1) as u128 / j as u128;
        }
        b
    };
    for cost in (1..=top).step_by(2) {
        for sign in [1i64, -1] {
            let mut next = vec![vec![vec![0u128; width]; top + 1]; 2];
            for parity in 0..2 {
                for d in 0..=top {
                    for c in 0..width {
                        let v = dp[parity][d][c];
                        if v == 0 {
                            continue;
                        }
                        for (j, &b) in binom.iter().enumerate() {
                            let nd = d + j * cost;
                            if nd > top {
                                break;
                            }
                            let nc = (c as i64 + sign * j as i64) as usize;
                            next[(parity + j) % 2][nd][nc] += v * b;
                        }
                    }
                }
            }
            dp = next;
        }
    }
    let max_deg24 = 12 * top as i64 - pairs as i64;
    let mut s = GradedSeries::zero(max_deg24);
    for d in 0..=top {
        for c in 0..width {
            let v = dp[0][d][c];
            if v != 0 {
                s.add_term(c as i64 - offset, 12 * d as i64 - pairs as i64, BigInt::from(v));
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bases() {
        let b = build_fock(1, 0).unwrap();
        assert_eq!(b, vec![FockState::vacuum()]);
        let b = build_fock(1, 1).unwrap();
        assert_eq!(b.iter().filter(|s| s.half_degree() == 1).count(), 2);
        assert!(matches!(build_fock(1, 13), Err(FermionError::TruncationTooLarge { .. })));
        assert!(matches!(build_fock(28, 12), Err(FermionError::TruncationTooLarge { .. })));
    }

    #[test]
    fn basis_matches_generating_function() {
        // Π (1 + q^{k-1/2})^{2n}: n = 2, through degree 3
        let b = build_fock(2, 6).unwrap();
        let count = |h: u32| b.iter().filter(|s| s.half_degree() == h).count();
        assert_eq!((0..=6).map(count).collect::<Vec<_>>(), vec![1, 4, 6, 8, 17, 28, 38]);
    }

    #[test]
    fn annihilators_kill_vacuum() {
        let v = FockState::vacuum();
        assert!(ModeOperator::new(Species::Plus, 0, 1).apply_state(&v).is_none());
        assert!(ModeOperator::new(Species::Minus, 0, 3).apply_state(&v).is_none());
    }

    #[test]
    fn central_term_at_level_two() {
        for pairs in [1, 2] {
            let c = virasoro_bracket_check(pairs, 2, -2, 6).unwrap();
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn tight_bound_is_reported() {
        assert!(matches!(
            virasoro_bracket_check(1, -2, -2, 2),
            Err(FermionError::BoundaryEmpty(_))
        ));
    }

    #[test]
    fn suite_size_depends_on_truncation() {
        // 1 + 3 + 25 + 3 at degree 4; [L(-2), L(-2)] drops out at degree 3
        assert_eq!(axiom_suite(1, 8).unwrap().len(), 32);
        assert_eq!(axiom_suite(1, 6).unwrap().len(), 31);
    }

    #[test]
    fn even_part_of_single_pair() {
        let s = charge_character_count(1, 4);
        assert_eq!(s.coefficient(0, -1), BigInt::from(1));
        // both degree-1/2 states are odd
        assert_eq!(s.coefficient(1, 11), BigInt::from(0));
        assert_eq!(s.coefficient(-1, 11), BigInt::from(0));
        // ψ^+(-1/2) ψ^-(-1/2) at degree 1
        assert_eq!(s.coefficient(0, 23), BigInt::from(1));
    }

    proptest::proptest! {
        #[test]
        fn modes_shift_degree_and_charge(idx in 0usize..200, plus in proptest::bool::ANY, r2 in -7i32..=7) {
            let r2 = if r2 % 2 == 0 { r2 + 1 } else { r2 };
            let basis = build_fock(2, 6).unwrap();
            let s = &basis[idx % basis.len()];
            let species = if plus { Species::Plus } else { Species::Minus };
            let op = ModeOperator::new(species, 1, r2);
            if let Some((t, sign)) = ModeOperator::apply_state(&op, s) {
                proptest::prop_assert!(sign == 1 || sign == -1);
                proptest::prop_assert_eq!(t.half_degree() as i32, s.half_degree() as i32 - r2);
                let dq = if plus { 1 } else { -1 };
                proptest::prop_assert_eq!(t.charge(), s.charge() + dq);
            }
        }
    }
}
