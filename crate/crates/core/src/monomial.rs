//! The monomial group `M` of shape `2.2^6.G_2(2)` on the 28-dimensional
//! Hermitian space with orthonormal basis `{a_i}` indexed by `Δ`.
//!
//! An operator `(σ, φ)` sends `a_j` to `i^{φ[σ(j)]} a_{σ(j)}`: a coordinate
//! permutation followed by a phase on the target coordinate. Phases are
//! stored as exponents of `i` in `Z/4`.
//!
//! The sign subgroup `E` is generated by the dozen sign changes. Lifting
//! `Ḡ = G_2(2)` is a linear problem over `Z/4`: choose phase vectors for the
//! generators of `Ḡ` so that every Schreier generator of the resulting
//! group is a diagonal element of `E`, and so that every generator fixes
//! `a_Δ`. Extensions that merely re-sign a genuine permutation
//! representation (split extensions) are factored out, and the remaining
//! class gives the non-split group.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::binary::{Dozen, DELTA};
use crate::f2::{self, Echelon};
use crate::perm::{Perm28, PermGroup};
use crate::z4::{Howell, Z4Vec};

/// Full mask of `Δ`.
pub const FULL_MASK: u32 = (1 << DELTA) - 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonomialError {
    #[error("no phase assignment closes the group (solution classes: 2^{classes_log2}, non-split: {nonsplit})")]
    LiftNotFound { classes_log2: u32, nonsplit: bool },
    #[error("lift search needs {needed} unknowns, over the budget of {budget}")]
    BudgetExceeded { needed: usize, budget: usize },
    #[error("generator {0} is an odd permutation; a_Δ cannot be fixed by phases summing to zero")]
    OddGenerator(usize),
    #[error("lifted group failed verification: {0}")]
    Verification(String),
}

/// A power of `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Phase(pub u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const MINUS_ONE: Phase = Phase(2);

    pub fn mul(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) & 3)
    }

    pub fn inv(self) -> Phase {
        Phase((4 - self.0) & 3)
    }

    /// `(re, im)` of `i^k`.
    pub fn as_gaussian(self) -> (i64, i64) {
        match self.0 & 3 {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["1", "i", "-1", "-i"][(self.0 & 3) as usize])
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MonomialOperator {
    perm: Perm28,
    /// Exponent of `i` applied on each target coordinate, as two bit
    /// planes: `phase_k = lo_k + 2 hi_k`.
    lo: u32,
    hi: u32,
}

impl MonomialOperator {
    pub fn identity() -> Self {
        Self::permutation(Perm28::identity())
    }

    pub fn new(perm: Perm28, phases: [u8; DELTA]) -> Self {
        let (mut lo, mut hi) = (0u32, 0u32);
        for (k, &p) in phases.iter().enumerate() {
            lo |= ((p & 1) as u32) << k;
            hi |= ((p >> 1 & 1) as u32) << k;
        }
        MonomialOperator { perm, lo, hi }
    }

    pub fn permutation(perm: Perm28) -> Self {
        MonomialOperator { perm, lo: 0, hi: 0 }
    }

    /// `-1` on the coordinates of `mask`, `+1` elsewhere.
    pub fn sign_change(mask: u32) -> Self {
        MonomialOperator {
            perm: Perm28::identity(),
            lo: 0,
            hi: mask & FULL_MASK,
        }
    }

    pub fn perm(&self) -> &Perm28 {
        &self.perm
    }

    #[inline]
    pub fn phase(&self, k: usize) -> u8 {
        ((self.lo >> k & 1) | (self.hi >> k & 1) << 1) as u8
    }

    pub fn phases(&self) -> [u8; DELTA] {
        std::array::from_fn(|k| self.phase(k))
    }

    pub fn is_diagonal(&self) -> bool {
        self.perm.is_identity()
    }

    /// `(self · other)`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        // χ[k] = φ[k] + ψ[σ⁻¹ k]
        let mut phases = self.phases();
        for j in 0..DELTA {
            let k = self.perm.apply(j);
            phases[k] = (phases[k] + other.phase(j)) & 3;
        }
        Self::new(self.perm.compose(&other.perm), phases)
    }

    pub fn inverse(&self) -> Self {
        // ψ[k] = -φ[σ k]
        let phases = std::array::from_fn(|k| (4 - self.phase(self.perm.apply(k))) & 3);
        Self::new(self.perm.inverse(), phases)
    }

    /// Image of the basis vector `a_j`.
    pub fn apply_basis(&self, j: usize) -> (usize, Phase) {
        let k = self.perm.apply(j);
        (k, Phase(self.phase(k)))
    }

    /// Image of the wedge monomial `a_I 1_X` (indices increasing):
    /// `(σ(I), scalar)`.
    #[inline]
    pub fn apply_wedge(&self, mask: u32) -> (u32, Phase) {
        let phase_sum = |image: u32| (image & self.lo).count_ones() + 2 * (image & self.hi).count_ones();
        if self.is_diagonal() {
            return (mask, Phase((phase_sum(mask) & 3) as u8));
        }
        let image = self.perm.apply_mask(mask);
        let sign = if self.perm.wedge_sign(mask) { 2 } else { 0 };
        (image, Phase(((sign + phase_sum(image)) & 3) as u8))
    }

    /// Scalar by which the operator acts on `a_Δ 1_X`:
    /// `sgn(σ) · Π φ`.
    pub fn determinant_phase(&self) -> Phase {
        self.apply_wedge(FULL_MASK).1
    }

    /// Monomial with unit-modulus entries: the permutation part is a
    /// bijection and no phase sits outside `Δ`.
    pub fn is_unitary(&self) -> bool {
        let mut seen = 0u32;
        for j in 0..DELTA {
            seen |= 1 << self.perm.apply(j);
        }
        seen == FULL_MASK && (self.lo | self.hi) & !FULL_MASK == 0
    }
}

impl fmt::Debug for MonomialOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonomialOperator")
            .field("perm", self.perm.images())
            .field("phases", &self.phases())
            .finish()
    }
}

impl Serialize for MonomialOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("MonomialOperator", 2)?;
        st.serialize_field("perm", self.perm.images())?;
        st.serialize_field("phases", &self.phases())?;
        st.end()
    }
}

/// Coordinates negated by a `±1` diagonal part.
fn sign_mask(op: &MonomialOperator) -> Option<u32> {
    (op.lo == 0).then_some(op.hi)
}

/// The sign subgroup generated by the dozen sign changes.
#[derive(Debug, Clone)]
pub struct SignGroup {
    dozens: Vec<u32>,
    code: Echelon,
}

impl SignGroup {
    pub fn new(dozens: &[Dozen]) -> Self {
        let masks: Vec<u32> = dozens.iter().map(|d| d.members).collect();
        let code = Echelon::from_vectors(&masks.iter().map(|&m| m as u64).collect::<Vec<_>>());
        SignGroup {
            dozens: masks,
            code,
        }
    }

    /// One dozen sign change per dozen.
    pub fn generators(&self) -> Vec<MonomialOperator> {
        self.dozens
            .iter()
            .map(|&m| MonomialOperator::sign_change(m))
            .collect()
    }

    /// Sign changes on a basis of the dozen code.
    pub fn basis_generators(&self) -> Vec<MonomialOperator> {
        self.code
            .rows()
            .iter()
            .map(|&m| MonomialOperator::sign_change(m as u32))
            .collect()
    }

    pub fn dozen_masks(&self) -> &[u32] {
        &self.dozens
    }

    pub fn code(&self) -> &Echelon {
        &self.code
    }

    pub fn order(&self) -> u64 {
        1 << self.code.rank()
    }

    /// `-Id` lies in the sign group.
    pub fn contains_minus_identity(&self) -> bool {
        self.code.contains(FULL_MASK as u64)
    }

    pub fn contains(&self, op: &MonomialOperator) -> bool {
        op.is_diagonal() && op.lo == 0 && self.code.contains(op.hi as u64)
    }

    /// `I` has even intersection with every dozen, i.e. every element of
    /// the sign group fixes `a_I 1_X`.
    pub fn fixes_wedge(&self, mask: u32) -> bool {
        self.code.rows().iter().all(|&c| (c as u32 & mask).count_ones() % 2 == 0)
    }

    /// Basis of the parity checks of the dozen code.
    pub fn parity_checks(&self) -> Vec<u32> {
        f2::orthogonal_complement(self.code.rows(), DELTA as u32)
            .rows()
            .iter()
            .map(|&r| r as u32)
            .collect()
    }
}

/// How the phase lift of `Ḡ` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftMode {
    /// Solve for a non-split lift.
    Search,
    /// Use bare permutations (the split group `E ⋊ Ḡ`).
    None,
}

/// Summary of the lift computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftReport {
    /// `log2 |{phase vectors satisfying all constraints}|`.
    pub solution_log2: u32,
    /// `log2` of the subgroup of split solutions.
    pub split_log2: u32,
    /// Number of non-split classes found, as a power of two.
    pub classes_log2: u32,
    /// Whether the chosen lift is non-split.
    pub nonsplit: bool,
    pub unknowns: usize,
    pub classes: Vec<ClassSummary>,
}

/// One non-split class of lifts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassSummary {
    pub index: usize,
    /// Splits once `-Id` is divided out.
    pub split_mod_center: bool,
    /// Elements of order 2 in the lifted group.
    pub involutions: u64,
    pub chosen: bool,
}

/// The monomial group: the sign subgroup together with lifted generators
/// of `Ḡ`, and a transversal `L(σ)` for every `σ ∈ Ḡ`.
#[derive(Debug, Clone)]
pub struct MonomialGroup {
    sign: SignGroup,
    lifted: Vec<MonomialOperator>,
    transversal: Vec<MonomialOperator>,
    perm_group: PermGroup,
    mode: LiftMode,
    report: Option<LiftReport>,
}

/// Phase of each transversal element as a linear form in the generator
/// phases, one form per target coordinate.
fn symbolic_transversal(group: &PermGroup) -> Vec<[Z4Vec; DELTA]> {
    let n = group.order();
    let mut out: Vec<[Z4Vec; DELTA]> = Vec::with_capacity(n);
    out.push([Z4Vec::zero(); DELTA]);
    let inverses: Vec<Perm28> = group.generators().iter().map(|g| g.inverse()).collect();
    for i in 1..n {
        let (p, gi) = group.parent(i).expect("non-root has a parent");
        let parent = &out[p];
        let ginv = &inverses[gi];
        // L(g σ) = L(g) L(σ): χ[k] = φ_g[k] + P_σ[g⁻¹ k]
        let row: [Z4Vec; DELTA] = std::array::from_fn(|k| {
            parent[ginv.apply(k)].add(&Z4Vec::unit(gi * DELTA + k, 1))
        });
        out.push(row);
    }
    out
}

/// All phase assignments for the generators of `Ḡ` that close up to a
/// group with kernel `E` and fix `a_Δ`, together with the split ones.
#[derive(Debug, Clone)]
pub struct LiftSpace {
    solutions: Howell,
    split: Howell,
    /// Solutions that become split after dividing out `-Id`.
    split_mod_center: Howell,
    unknowns: usize,
}

impl LiftSpace {
    pub fn solve(group: &PermGroup, sign: &SignGroup, budget: usize) -> Result<Self, MonomialError> {
        let gens = group.generators();
        let unknowns = gens.len() * DELTA;
        if unknowns > budget {
            return Err(MonomialError::BudgetExceeded {
                needed: unknowns,
                budget,
            });
        }
        if let Some(i) = gens.iter().position(|g| g.is_odd()) {
            return Err(MonomialError::OddGenerator(i));
        }
        let checks = sign.parity_checks();
        let sym = symbolic_transversal(group);
        let inverses: Vec<Perm28> = gens.iter().map(|g| g.inverse()).collect();

        // Relations modulo the sign group, and exact relations.
        let mut mod_sign = Howell::new();
        let mut exact = Howell::new();
        let mut central = Howell::new();
        for gi in 0..gens.len() {
            // a_Δ is fixed: Σ_k φ_g[k] = 0 (generators are even).
            let mut det = Z4Vec::zero();
            for k in 0..DELTA {
                det.set(gi * DELTA + k, 1);
            }
            mod_sign.insert(det);
            exact.insert(det);
            central.insert(det);
        }
        for (s, row) in sym.iter().enumerate() {
            for (gi, g) in gens.iter().enumerate() {
                let t = group
                    .index_of(&g.compose(&group.elements()[s]))
                    .expect("group is closed");
                if group.parent(t) == Some((s, gi)) {
                    continue;
                }
                let ginv = &inverses[gi];
                let diff: [Z4Vec; DELTA] = std::array::from_fn(|k| {
                    row[ginv.apply(k)]
                        .add(&Z4Vec::unit(gi * DELTA + k, 1))
                        .sub(&sym[t][k])
                });
                for d in &diff {
                    exact.insert(*d);
                    mod_sign.insert(d.scale(2));
                    central.insert(d.sub(&diff[0]));
                }
                central.insert(diff[0].scale(2));
                for &h in &checks {
                    let mut acc = Z4Vec::zero();
                    for (k, d) in diff.iter().enumerate() {
                        if h >> k & 1 == 1 {
                            acc = acc.add(d);
                        }
                    }
                    mod_sign.insert(acc);
                }
            }
        }
        let solutions = mod_sign.kernel(unknowns);
        let mut split = exact.kernel(unknowns);
        let mut split_mod_center = central.kernel(unknowns);
        for gi in 0..gens.len() {
            for &c in sign.code().rows() {
                let mut v = Z4Vec::zero();
                for k in 0..DELTA {
                    if c >> k & 1 == 1 {
                        v.set(gi * DELTA + k, 2);
                    }
                }
                split.insert(v);
                split_mod_center.insert(v);
            }
        }
        debug_assert!(split.rows().all(|v| solutions.contains(v)));
        Ok(LiftSpace {
            solutions,
            split,
            split_mod_center,
            unknowns,
        })
    }

    pub fn report(&self) -> LiftReport {
        let classes_log2 = self.solutions.log2_size() - self.split.log2_size();
        LiftReport {
            solution_log2: self.solutions.log2_size(),
            split_log2: self.split.log2_size(),
            classes_log2,
            nonsplit: classes_log2 > 0,
            unknowns: self.unknowns,
            classes: Vec::new(),
        }
    }

    pub fn solutions(&self) -> &Howell {
        &self.solutions
    }

    pub fn split(&self) -> &Howell {
        &self.split
    }

    /// `u` gives a split extension once `-Id` is divided out.
    pub fn is_split_mod_center(&self, u: &Z4Vec) -> bool {
        self.split_mod_center.contains(u)
    }

    /// `u` is a split solution.
    pub fn is_split(&self, u: &Z4Vec) -> bool {
        self.split.contains(u)
    }

    /// One representative of each class of solutions modulo split ones,
    /// zero excluded.
    pub fn nonsplit_classes(&self) -> Vec<Z4Vec> {
        let mut reps = vec![Z4Vec::zero()];
        for v in self.solutions.rows() {
            let snapshot = reps.clone();
            for k in 1..4 {
                for r in &snapshot {
                    let cand = r.add(&v.scale(k));
                    if reps.iter().all(|x| !self.split.contains(&x.sub(&cand))) {
                        reps.push(cand);
                    }
                }
            }
        }
        reps.remove(0);
        reps
    }
}

impl MonomialGroup {
    /// Solve for phases lifting the generators of `group`.
    ///
    /// Among the non-split classes, those that stay non-split after
    /// dividing out `-Id` are kept, and the one with the most involutions
    /// is chosen.
    pub fn search(group: &PermGroup, sign: &SignGroup, budget: usize) -> Result<Self, MonomialError> {
        let space = LiftSpace::solve(group, sign, budget)?;
        let mut report = space.report();
        let mut best: Option<(u64, MonomialGroup)> = None;
        for (i, u) in space.nonsplit_classes().iter().enumerate() {
            let m = Self::from_phase_vector(group, sign, u);
            let involutions = m.involution_count();
            let split_mod_center = space.is_split_mod_center(u);
            report.classes.push(ClassSummary {
                index: i,
                split_mod_center,
                involutions,
                chosen: false,
            });
            if split_mod_center {
                continue;
            }
            if best.as_ref().is_none_or(|(n, _)| involutions > *n) {
                best = Some((involutions, m));
            }
        }
        let Some((involutions, mut m)) = best else {
            return Err(MonomialError::LiftNotFound {
                classes_log2: report.classes_log2,
                nonsplit: report.nonsplit,
            });
        };
        if let Some(c) = report
            .classes
            .iter_mut()
            .find(|c| !c.split_mod_center && c.involutions == involutions)
        {
            c.chosen = true;
        }
        m.report = Some(report);
        m.verify()?;
        Ok(m)
    }

    /// Lift with generator phases read from `u` (28 entries per generator).
    pub fn from_phase_vector(group: &PermGroup, sign: &SignGroup, u: &Z4Vec) -> Self {
        let lifted = group
            .generators()
            .iter()
            .enumerate()
            .map(|(gi, g)| {
                MonomialOperator::new(*g, std::array::from_fn(|k| u.get(gi * DELTA + k)))
            })
            .collect();
        Self::assemble(group, sign, lifted, LiftMode::Search)
    }

    /// The split group `E ⋊ Ḡ` with bare permutations.
    pub fn unsigned(group: &PermGroup, sign: &SignGroup) -> Self {
        let lifted = group
            .generators()
            .iter()
            .map(|g| MonomialOperator::permutation(*g))
            .collect();
        Self::assemble(group, sign, lifted, LiftMode::None)
    }

    fn assemble(
        group: &PermGroup,
        sign: &SignGroup,
        lifted: Vec<MonomialOperator>,
        mode: LiftMode,
    ) -> Self {
        let mut transversal = Vec::with_capacity(group.order());
        transversal.push(MonomialOperator::identity());
        for i in 1..group.order() {
            let (p, gi) = group.parent(i).expect("non-root has a parent");
            let t = lifted[gi].compose(&transversal[p]);
            transversal.push(t);
        }
        MonomialGroup {
            sign: sign.clone(),
            lifted,
            transversal,
            perm_group: group.clone(),
            mode,
            report: None,
        }
    }

    /// Check, element by element, that the kernel of `M → Ḡ` is exactly
    /// the sign group, so `|M| = |E| · |Ḡ|`, and that every generator
    /// fixes `a_Δ`.
    pub fn verify(&self) -> Result<(), MonomialError> {
        let group = &self.perm_group;
        for (gi, g) in self.lifted.iter().enumerate() {
            if g.determinant_phase() != Phase::ONE {
                return Err(MonomialError::Verification(format!(
                    "generator {gi} scales a_Δ by {}",
                    g.determinant_phase()
                )));
            }
        }
        for (s, l) in self.transversal.iter().enumerate() {
            if l.perm() != &group.elements()[s] {
                return Err(MonomialError::Verification(format!(
                    "transversal element {s} has the wrong permutation"
                )));
            }
            for (gi, g) in self.lifted.iter().enumerate() {
                let prod = g.compose(l);
                let t = group.index_of(prod.perm()).expect("closed");
                let ratio = prod.compose(&self.transversal[t].inverse());
                if !self.sign.contains(&ratio) {
                    return Err(MonomialError::Verification(format!(
                        "Schreier generator ({s}, {gi}) is not in the sign group"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn mode(&self) -> LiftMode {
        self.mode
    }

    pub fn report(&self) -> Option<&LiftReport> {
        self.report.as_ref()
    }

    pub fn sign_group(&self) -> &SignGroup {
        &self.sign
    }

    pub fn perm_group(&self) -> &PermGroup {
        &self.perm_group
    }

    pub fn lifted_generators(&self) -> &[MonomialOperator] {
        &self.lifted
    }

    /// Dozen sign changes followed by the lifted generators.
    pub fn generators(&self) -> Vec<MonomialOperator> {
        let mut g = self.sign.generators();
        g.extend_from_slice(&self.lifted);
        g
    }

    /// Smaller generating set: sign changes on a code basis and the lifted
    /// generators.
    pub fn generating_set(&self) -> Vec<MonomialOperator> {
        let mut g = self.sign.basis_generators();
        g.extend_from_slice(&self.lifted);
        g
    }

    /// The transversal element lifting `σ`.
    pub fn lift_of(&self, sigma: &Perm28) -> Option<&MonomialOperator> {
        self.perm_group.index_of(sigma).map(|i| &self.transversal[i])
    }

    pub fn transversal(&self) -> &[MonomialOperator] {
        &self.transversal
    }

    pub fn order(&self) -> u64 {
        self.sign.order() * self.perm_group.order() as u64
    }

    /// Number of elements of order 2.
    pub fn involution_count(&self) -> u64 {
        let words: Vec<u32> = self.sign.code().span().iter().map(|&w| w as u32).collect();
        let mut count = words.len() as u64 - 1;
        for l in &self.transversal[1..] {
            let sq = l.compose(l);
            if !sq.is_diagonal() {
                continue;
            }
            // (e l)^2 = e · σ(e) · l^2
            let Some(target) = sign_mask(&sq) else {
                continue;
            };
            count += words
                .iter()
                .filter(|&&e| e ^ l.perm().apply_mask(e) == target)
                .count() as u64;
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_op() -> impl Strategy<Value = MonomialOperator> {
        (
            Just((0..DELTA as u8).collect::<Vec<_>>()).prop_shuffle(),
            proptest::collection::vec(0u8..4, DELTA),
        )
            .prop_map(|(p, ph)| {
                MonomialOperator::new(
                    Perm28::from_images(p.try_into().unwrap()),
                    ph.try_into().unwrap(),
                )
            })
    }

    #[test]
    fn sign_change_squares_to_identity() {
        let s = MonomialOperator::sign_change(0b1011_0000_1111);
        assert_eq!(s.compose(&s), MonomialOperator::identity());
    }

    proptest! {
        #[test]
        fn composition_is_associative(a in arb_op(), b in arb_op(), c in arb_op()) {
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        }

        #[test]
        fn inverse_is_two_sided(a in arb_op()) {
            prop_assert_eq!(a.compose(&a.inverse()), MonomialOperator::identity());
            prop_assert_eq!(a.inverse().compose(&a), MonomialOperator::identity());
            prop_assert!(a.is_unitary());
        }

        #[test]
        fn wedge_action_is_a_representation(a in arb_op(), b in arb_op(), mask in 0u32..=FULL_MASK) {
            let (m1, p1) = b.apply_wedge(mask);
            let (m2, p2) = a.apply_wedge(m1);
            let (m, p) = a.compose(&b).apply_wedge(mask);
            prop_assert_eq!(m, m2);
            prop_assert_eq!(p, p1.mul(p2));
        }

        #[test]
        fn basis_action_matches_wedge_on_singletons(a in arb_op(), j in 0usize..DELTA) {
            let (k, ph) = a.apply_basis(j);
            prop_assert_eq!(a.apply_wedge(1 << j), (1 << k, ph));
        }
    }
}
