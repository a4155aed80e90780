//! The 256-element binary Cayley algebra `Λ/2Λ`, its element census, the
//! 28 cube-root pairs `Δ` and the 63 dozens.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::f2;
use crate::octonion::{LatticeBasis, MultiplicationTable, Octonion, OctonionError};

/// Number of cube-root pairs.
pub const DELTA: usize = 28;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BinaryError {
    #[error(transparent)]
    Octonion(#[from] OctonionError),
    #[error("element {0:#04x} fits no type class")]
    UnclassifiableElement(u8),
    #[error("no orthogonality rule gives 63 distinct dozens of 12 pairs (last rule {rule:?}: involution {involution:#04x} has {size} pairs)")]
    DozenSizeMismatch {
        rule: OrthogonalityRule,
        involution: u8,
        size: u32,
    },
}

/// An element of `Λ/2Λ`, encoded by its coordinates mod 2 in the fixed
/// lattice basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BinaryCayley(pub u8);

impl BinaryCayley {
    pub const ZERO: BinaryCayley = BinaryCayley(0);

    pub fn code(self) -> u8 {
        self.0
    }
}

impl fmt::Display for BinaryCayley {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:08b}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementType {
    Zero,
    Identity,
    Involution,
    SquareRootOfZero,
    Idempotent,
    CubeRootOfUnity,
}

impl ElementType {
    pub const ALL: [ElementType; 6] = [
        ElementType::Zero,
        ElementType::Identity,
        ElementType::Involution,
        ElementType::SquareRootOfZero,
        ElementType::Idempotent,
        ElementType::CubeRootOfUnity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ElementType::Zero => "zero",
            ElementType::Identity => "identity",
            ElementType::Involution => "involution",
            ElementType::SquareRootOfZero => "square_root_of_zero",
            ElementType::Idempotent => "idempotent",
            ElementType::CubeRootOfUnity => "cube_root_of_unity",
        }
    }
}

/// Counts per element type, in `ElementType::ALL` order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Census {
    pub zero: u32,
    pub identity: u32,
    pub involutions: u32,
    pub square_roots_of_zero: u32,
    pub idempotents: u32,
    pub cube_roots: u32,
}

impl Census {
    pub fn as_tuple(&self) -> (u32, u32, u32, u32, u32, u32) {
        (
            self.zero,
            self.identity,
            self.involutions,
            self.square_roots_of_zero,
            self.idempotents,
            self.cube_roots,
        )
    }

    pub fn total(&self) -> u32 {
        let t = self.as_tuple();
        t.0 + t.1 + t.2 + t.3 + t.4 + t.5
    }
}

/// Which F2-valued relation decides that a cube-root pair is "not
/// orthogonal" to an involution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrthogonalityRule {
    /// `⟨x, w⟩` odd for the canonical (smaller code) member `x`.
    CanonicalMember,
    /// `⟨x, w⟩` odd for both members.
    BothMembers,
    /// `tr(x w)` odd for the canonical member, with `tr(z) = ⟨z, 1⟩`.
    TraceForm,
}

impl OrthogonalityRule {
    pub const FALLBACK_ORDER: [OrthogonalityRule; 3] = [
        OrthogonalityRule::CanonicalMember,
        OrthogonalityRule::BothMembers,
        OrthogonalityRule::TraceForm,
    ];
}

/// A cube-root pair `{x, 1 + x}`; `members[0]` is the canonical member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DeltaPair {
    pub id: usize,
    pub members: [BinaryCayley; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Dozen {
    pub involution: BinaryCayley,
    /// Bit `i` set when pair `i` of `Δ` belongs to the dozen.
    pub members: u32,
}

impl Dozen {
    pub fn size(&self) -> u32 {
        self.members.count_ones()
    }
}

/// The quotient algebra with its multiplication and bilinear form
/// tabulated.
pub struct BinaryAlgebra {
    basis: LatticeBasis,
    table: MultiplicationTable,
    mul: Vec<u8>,
    /// Row `k`: the set of `j` with `⟨b_k, b_j⟩` odd.
    gram_rows: [u8; 8],
    one: u8,
    types: [ElementType; 256],
}

impl fmt::Debug for BinaryAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BinaryAlgebra")
            .field("one", &self.one)
            .finish_non_exhaustive()
    }
}

impl BinaryAlgebra {
    pub fn new() -> Result<Self, BinaryError> {
        let table = MultiplicationTable::build()?;
        let basis = LatticeBasis::standard()?;
        let reps: Vec<Octonion> = (0..=255u8).map(|c| basis.lift(c)).collect();
        let mut mul = vec![0u8; 256 * 256];
        for (a, x) in reps.iter().enumerate() {
            for (b, y) in reps.iter().enumerate() {
                mul[a * 256 + b] = basis.reduce_mod2(&table.multiply(x, y))?;
            }
        }
        let gram = basis.gram();
        let gram_rows = std::array::from_fn(|k| {
            (0..8).fold(0u8, |acc, j| acc | (((gram[k][j].rem_euclid(2)) as u8) << j))
        });
        let one = basis.reduce_mod2(&Octonion::one())?;
        let mut alg = BinaryAlgebra {
            basis,
            table,
            mul,
            gram_rows,
            one,
            types: [ElementType::Zero; 256],
        };
        for c in 0..=255u8 {
            alg.types[c as usize] = alg.classify_uncached(BinaryCayley(c))?;
        }
        Ok(alg)
    }

    pub fn basis(&self) -> &LatticeBasis {
        &self.basis
    }

    pub fn table(&self) -> &MultiplicationTable {
        &self.table
    }

    pub fn one(&self) -> BinaryCayley {
        BinaryCayley(self.one)
    }

    pub fn elements() -> impl Iterator<Item = BinaryCayley> {
        (0..=255u8).map(BinaryCayley)
    }

    pub fn reduce(&self, x: &Octonion) -> Result<BinaryCayley, BinaryError> {
        Ok(BinaryCayley(self.basis.reduce_mod2(x)?))
    }

    pub fn lift(&self, x: BinaryCayley) -> Octonion {
        self.basis.lift(x.0)
    }

    #[inline]
    pub fn mul(&self, x: BinaryCayley, y: BinaryCayley) -> BinaryCayley {
        BinaryCayley(self.mul[x.0 as usize * 256 + y.0 as usize])
    }

    #[inline]
    pub fn add(x: BinaryCayley, y: BinaryCayley) -> BinaryCayley {
        BinaryCayley(x.0 ^ y.0)
    }

    /// `⟨x, y⟩ mod 2`, well defined because `Λ` is even and integral.
    #[inline]
    pub fn form(&self, x: BinaryCayley, y: BinaryCayley) -> bool {
        let mut acc = 0u32;
        for k in 0..8 {
            if x.0 >> k & 1 == 1 {
                acc += (self.gram_rows[k] & y.0).count_ones();
            }
        }
        acc % 2 == 1
    }

    /// `tr(z) = ⟨z, 1⟩ mod 2`.
    pub fn trace(&self, z: BinaryCayley) -> bool {
        self.form(z, self.one())
    }

    fn classify_uncached(&self, x: BinaryCayley) -> Result<ElementType, BinaryError> {
        let one = self.one();
        let sq = self.mul(x, x);
        let cube = self.mul(sq, x);
        let t = if x == BinaryCayley::ZERO {
            ElementType::Zero
        } else if x == one {
            ElementType::Identity
        } else if sq == one {
            ElementType::Involution
        } else if sq == BinaryCayley::ZERO {
            ElementType::SquareRootOfZero
        } else if sq == x {
            ElementType::Idempotent
        } else if cube == one {
            ElementType::CubeRootOfUnity
        } else {
            return Err(BinaryError::UnclassifiableElement(x.0));
        };
        Ok(t)
    }

    pub fn classify(&self, x: BinaryCayley) -> ElementType {
        self.types[x.0 as usize]
    }

    pub fn census(&self) -> Census {
        let count = |t| self.types.iter().filter(|&&s| s == t).count() as u32;
        Census {
            zero: count(ElementType::Zero),
            identity: count(ElementType::Identity),
            involutions: count(ElementType::Involution),
            square_roots_of_zero: count(ElementType::SquareRootOfZero),
            idempotents: count(ElementType::Idempotent),
            cube_roots: count(ElementType::CubeRootOfUnity),
        }
    }

    pub fn elements_of_type(&self, t: ElementType) -> Vec<BinaryCayley> {
        Self::elements().filter(|&x| self.classify(x) == t).collect()
    }

    /// How `x ↦ 1 + x` maps type classes, with the number of elements
    /// sent from each source type to each target type.
    pub fn pairing_statistics(&self) -> BTreeMap<(ElementType, ElementType), u32> {
        let mut out = BTreeMap::new();
        for x in Self::elements() {
            let y = Self::add(x, self.one());
            *out.entry((self.classify(x), self.classify(y))).or_insert(0) += 1;
        }
        out
    }

    /// Pairs `{x, 1 + x}` within one type class, sorted by smaller member.
    pub fn unit_pairs(&self, t: ElementType) -> Vec<[BinaryCayley; 2]> {
        let mut pairs: Vec<[BinaryCayley; 2]> = self
            .elements_of_type(t)
            .into_iter()
            .filter_map(|x| {
                let y = Self::add(x, self.one());
                (x < y && self.classify(y) == t).then_some([x, y])
            })
            .collect();
        pairs.sort();
        pairs
    }

    /// The 28 cube-root pairs, ordered by canonical member.
    pub fn build_delta(&self) -> Vec<DeltaPair> {
        self.unit_pairs(ElementType::CubeRootOfUnity)
            .into_iter()
            .enumerate()
            .map(|(id, members)| DeltaPair { id, members })
            .collect()
    }

    fn not_orthogonal(&self, rule: OrthogonalityRule, pair: &DeltaPair, w: BinaryCayley) -> bool {
        let [x, y] = pair.members;
        match rule {
            OrthogonalityRule::CanonicalMember => self.form(x, w),
            OrthogonalityRule::BothMembers => self.form(x, w) && self.form(y, w),
            OrthogonalityRule::TraceForm => self.trace(self.mul(x, w)),
        }
    }

    /// Dozens under one rule, without validation.
    pub fn dozens_with_rule(&self, delta: &[DeltaPair], rule: OrthogonalityRule) -> Vec<Dozen> {
        self.elements_of_type(ElementType::Involution)
            .into_iter()
            .map(|w| Dozen {
                involution: w,
                members: delta
                    .iter()
                    .filter(|p| self.not_orthogonal(rule, p, w))
                    .fold(0u32, |acc, p| acc | 1 << p.id),
            })
            .collect()
    }

    /// The 63 dozens, trying each orthogonality rule in fallback order and
    /// locking in the first one that gives 63 distinct 12-subsets.
    pub fn build_dozens(
        &self,
        delta: &[DeltaPair],
    ) -> Result<(OrthogonalityRule, Vec<Dozen>), BinaryError> {
        let mut last = None;
        for rule in OrthogonalityRule::FALLBACK_ORDER {
            let dozens = self.dozens_with_rule(delta, rule);
            if let Some(bad) = dozens.iter().find(|d| d.size() != 12) {
                last = Some(BinaryError::DozenSizeMismatch {
                    rule,
                    involution: bad.involution.0,
                    size: bad.size(),
                });
                continue;
            }
            let mut masks: Vec<u32> = dozens.iter().map(|d| d.members).collect();
            masks.sort_unstable();
            masks.dedup();
            if masks.len() == dozens.len() {
                return Ok((rule, dozens));
            }
        }
        Err(last.unwrap_or(BinaryError::DozenSizeMismatch {
            rule: OrthogonalityRule::TraceForm,
            involution: 0,
            size: 0,
        }))
    }
}

/// F2-rank of the dozen indicator vectors in `F_2^28`.
pub fn dozen_rank(dozens: &[Dozen]) -> usize {
    f2::rank(&dozens.iter().map(|d| d.members as u64).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::octonion::ProjectivePoint;

    fn alg() -> BinaryAlgebra {
        BinaryAlgebra::new().unwrap()
    }

    fn h(p: ProjectivePoint) -> Octonion {
        Octonion::basis(p)
    }

    #[test]
    fn census_matches() {
        let a = alg();
        let c = a.census();
        assert_eq!(c.as_tuple(), (1, 1, 63, 63, 72, 56));
        assert_eq!(c.total(), 256);
        assert_eq!(a.classify(BinaryCayley::ZERO), ElementType::Zero);
        assert_eq!(a.classify(a.one()), ElementType::Identity);
    }

    #[test]
    fn frame_sums_and_differences() {
        // h_i + h_j reduces to a cube root of unity and h_i - h_j to an
        // involution, for every i != j.
        let a = alg();
        for i in ProjectivePoint::all() {
            for j in ProjectivePoint::all().filter(|&j| j != i) {
                let s = a.reduce(&(h(i) + h(j))).unwrap();
                let d = a.reduce(&(h(i) - h(j))).unwrap();
                assert_eq!(a.classify(s), ElementType::CubeRootOfUnity);
                assert_eq!(a.classify(d), ElementType::Involution);
            }
        }
    }

    #[test]
    fn cube_roots_satisfy_one_plus_x_is_x_squared() {
        let a = alg();
        for x in a.elements_of_type(ElementType::CubeRootOfUnity) {
            assert_eq!(BinaryAlgebra::add(a.one(), x), a.mul(x, x));
        }
    }

    #[test]
    fn pair_counts() {
        let a = alg();
        assert_eq!(a.build_delta().len(), 28);
        assert_eq!(a.unit_pairs(ElementType::Idempotent).len(), 36);
        let stats = a.pairing_statistics();
        assert_eq!(
            stats[&(ElementType::Involution, ElementType::SquareRootOfZero)],
            63
        );
        assert_eq!(stats[&(ElementType::Zero, ElementType::Identity)], 1);
    }

    #[test]
    fn reduction_is_a_ring_map() {
        let a = alg();
        let b = a.basis();
        let t = a.table();
        for x in 0..=255u8 {
            for y in (0..=255u8).step_by(7) {
                let lx = b.lift(x) + b.lift(0x5a).scale(2);
                let ly = b.lift(y) - b.lift(0x21).scale(2);
                let prod = a.reduce(&t.multiply(&lx, &ly)).unwrap();
                assert_eq!(prod, a.mul(BinaryCayley(x), BinaryCayley(y)));
            }
        }
    }

    #[test]
    fn dozens() {
        let a = alg();
        let delta = a.build_delta();
        let (rule, dozens) = a.build_dozens(&delta).unwrap();
        assert_eq!(rule, OrthogonalityRule::CanonicalMember);
        assert_eq!(dozens.len(), 63);
        assert!(dozens.iter().all(|d| d.size() == 12));
        assert_eq!(dozen_rank(&dozens), 7);
        // every pair lies in 27 dozens
        for p in &delta {
            let n = dozens.iter().filter(|d| d.members >> p.id & 1 == 1).count();
            assert_eq!(n, 27);
        }
    }

    #[test]
    fn involutions_have_zero_trace() {
        let a = alg();
        for w in a.elements_of_type(ElementType::Involution) {
            assert!(!a.trace(w));
        }
    }
}
