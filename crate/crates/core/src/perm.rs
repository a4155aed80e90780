//! Permutations of the 28 points of `Δ` and fast action on 28-bit masks.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::binary::DELTA;

/// A permutation of `{0, ..., 27}`; `img[i]` is the image of `i`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm28 {
    img: [u8; DELTA],
}

impl Perm28 {
    pub fn identity() -> Self {
        Perm28 {
            img: std::array::from_fn(|i| i as u8),
        }
    }

    /// Panics unless `img` is a bijection.
    pub fn from_images(img: [u8; DELTA]) -> Self {
        let mut seen = 0u32;
        for &v in &img {
            assert!((v as usize) < DELTA, "image out of range");
            seen |= 1 << v;
        }
        assert_eq!(seen.count_ones() as usize, DELTA, "not a bijection");
        Perm28 { img }
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.img[i] as usize
    }

    pub fn images(&self) -> &[u8; DELTA] {
        &self.img
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm28) -> Perm28 {
        Perm28 {
            img: std::array::from_fn(|i| self.img[other.img[i] as usize]),
        }
    }

    pub fn inverse(&self) -> Perm28 {
        let mut img = [0u8; DELTA];
        for (i, &v) in self.img.iter().enumerate() {
            img[v as usize] = i as u8;
        }
        Perm28 { img }
    }

    /// Cycle lengths, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = 0u32;
        let mut out = Vec::new();
        for start in 0..DELTA {
            if seen >> start & 1 == 1 {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while seen >> i & 1 == 0 {
                seen |= 1 << i;
                i = self.img[i] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// The cycles as point masks.
    pub fn cycle_masks(&self) -> Vec<u32> {
        let mut seen = 0u32;
        let mut out = Vec::new();
        for start in 0..DELTA {
            if seen >> start & 1 == 1 {
                continue;
            }
            let mut mask = 0u32;
            let mut i = start;
            while mask >> i & 1 == 0 {
                mask |= 1 << i;
                i = self.img[i] as usize;
            }
            seen |= mask;
            out.push(mask);
        }
        out
    }

    /// `true` for odd permutations.
    pub fn is_odd(&self) -> bool {
        self.cycle_type().iter().filter(|&&l| l % 2 == 0).count() % 2 == 1
    }

    /// Image of a point set.
    pub fn apply_mask(&self, mask: u32) -> u32 {
        let mut out = 0u32;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            out |= 1 << self.img[i];
            m &= m - 1;
        }
        out
    }

    /// Sign picked up by the wedge monomial `a_{i_1} ∧ … ∧ a_{i_k}`
    /// (`i_1 < … < i_k` the points of `mask`) when reordering the images
    /// into increasing order: `true` for `-1`.
    pub fn wedge_sign(&self, mask: u32) -> bool {
        let mut inversions = 0u32;
        let mut seen_images = 0u32;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            let v = self.img[i];
            // earlier points whose image is larger than v
            inversions += (seen_images >> v).count_ones();
            seen_images |= 1 << v;
            m &= m - 1;
        }
        inversions % 2 == 1
    }
}

impl fmt::Debug for Perm28 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm28{:?}", self.img)
    }
}

impl Serialize for Perm28 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.img.serialize(s)
    }
}

/// Closure of a generating set: every element of the generated group,
/// sorted.
pub fn generate_group(gens: &[Perm28]) -> Vec<Perm28> {
    let mut seen = BTreeSet::from([Perm28::identity()]);
    let mut frontier = vec![Perm28::identity()];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q = g.compose(&p);
            if seen.insert(q) {
                frontier.push(q);
            }
        }
    }
    seen.into_iter().collect()
}

/// A deterministic pair of generators for the group listed in `elements`:
/// the first pair in a fixed scan order that generates all of it.
pub fn two_generators(elements: &[Perm28]) -> Option<[Perm28; 2]> {
    let n = elements.len();
    let mut sorted = elements.to_vec();
    sorted.sort_unstable();
    for a in 1..n {
        for b in (a + 1..n).rev().take(64) {
            let pair = [sorted[a], sorted[b]];
            if generate_group(&pair).len() == n {
                return Some(pair);
            }
        }
    }
    None
}

/// Orbit of a point under a generating set, as a mask.
pub fn point_orbit(gens: &[Perm28], point: usize) -> u32 {
    let mut orbit = 1u32 << point;
    let mut frontier = vec![point];
    while let Some(i) = frontier.pop() {
        for g in gens {
            let j = g.apply(i);
            if orbit >> j & 1 == 0 {
                orbit |= 1 << j;
                frontier.push(j);
            }
        }
    }
    orbit
}

/// Table-driven mask permuter: a 28-bit mask is split into four 7-bit
/// chunks, each mapped through a 128-entry table.
#[derive(Clone)]
pub struct MaskPermuter {
    tables: [[u32; 128]; 4],
}

impl MaskPermuter {
    pub fn new(p: &Perm28) -> Self {
        let mut tables = [[0u32; 128]; 4];
        for (chunk, table) in tables.iter_mut().enumerate() {
            for (v, slot) in table.iter_mut().enumerate() {
                *slot = p.apply_mask((v as u32) << (7 * chunk));
            }
        }
        MaskPermuter { tables }
    }

    #[inline(always)]
    pub fn apply(&self, mask: u32) -> u32 {
        self.tables[0][(mask & 0x7f) as usize]
            | self.tables[1][(mask >> 7 & 0x7f) as usize]
            | self.tables[2][(mask >> 14 & 0x7f) as usize]
            | self.tables[3][(mask >> 21 & 0x7f) as usize]
    }
}

/// A permutation group listed in breadth-first order from its generators,
/// with a Schreier tree: element `i > 0` equals `gens[g] ∘ elements[p]`
/// for `parent[i] = Some((p, g))`.
#[derive(Debug, Clone)]
pub struct PermGroup {
    generators: Vec<Perm28>,
    elements: Vec<Perm28>,
    parent: Vec<Option<(usize, usize)>>,
    index: std::collections::HashMap<Perm28, usize>,
}

impl PermGroup {
    pub fn from_generators(generators: Vec<Perm28>) -> Self {
        let id = Perm28::identity();
        let mut elements = vec![id];
        let mut parent = vec![None];
        let mut index = std::collections::HashMap::from([(id, 0usize)]);
        let mut head = 0;
        while head < elements.len() {
            let p = elements[head];
            for (gi, g) in generators.iter().enumerate() {
                let q = g.compose(&p);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(q) {
                    e.insert(elements.len());
                    elements.push(q);
                    parent.push(Some((head, gi)));
                }
            }
            head += 1;
        }
        PermGroup {
            generators,
            elements,
            parent,
            index,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm28] {
        &self.generators
    }

    /// Elements in breadth-first order; index 0 is the identity.
    pub fn elements(&self) -> &[Perm28] {
        &self.elements
    }

    pub fn index_of(&self, p: &Perm28) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn parent(&self, i: usize) -> Option<(usize, usize)> {
        self.parent[i]
    }

    /// Sorted element list, for comparison with other enumerations.
    pub fn sorted_elements(&self) -> Vec<Perm28> {
        let mut v = self.elements.clone();
        v.sort_unstable();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cycle(n: usize) -> Perm28 {
        // (0 1 ... n-1)
        let mut img: [u8; DELTA] = std::array::from_fn(|i| i as u8);
        for i in 0..n {
            img[i] = ((i + 1) % n) as u8;
        }
        Perm28::from_images(img)
    }

    #[test]
    fn cycle_type_and_parity() {
        assert_eq!(cycle(3).cycle_type()[0], 3);
        assert!(!cycle(3).is_odd());
        assert!(cycle(2).is_odd());
        assert!(!Perm28::identity().is_odd());
        assert_eq!(Perm28::identity().cycle_type(), vec![1; DELTA]);
    }

    #[test]
    fn wedge_sign_of_transposition() {
        let t = cycle(2);
        assert!(t.wedge_sign(0b11));
        assert!(!t.wedge_sign(0b01));
        assert!(!t.wedge_sign(0b1100));
        // full mask picks up the sign of the permutation
        assert_eq!(t.wedge_sign((1 << DELTA) - 1), t.is_odd());
    }

    #[test]
    fn generated_cyclic_group() {
        assert_eq!(generate_group(&[cycle(7)]).len(), 7);
        assert_eq!(generate_group(&[cycle(2), cycle(3)]).len(), 6);
    }

    fn arb_perm() -> impl Strategy<Value = Perm28> {
        Just((0..DELTA as u8).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Perm28::from_images(v.try_into().unwrap()))
    }

    proptest! {
        #[test]
        fn permuter_matches_direct(p in arb_perm(), mask in 0u32..(1 << 28)) {
            prop_assert_eq!(MaskPermuter::new(&p).apply(mask), p.apply_mask(mask));
        }

        #[test]
        fn wedge_sign_is_multiplicative(p in arb_perm(), q in arb_perm(), mask in 0u32..(1 << 28)) {
            // sign(pq, I) = sign(p, q(I)) · sign(q, I)
            let lhs = p.compose(&q).wedge_sign(mask);
            let rhs = p.wedge_sign(q.apply_mask(mask)) ^ q.wedge_sign(mask);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn full_mask_sign_is_parity(p in arb_perm()) {
            prop_assert_eq!(p.wedge_sign((1 << DELTA) - 1), p.is_odd());
        }
    }
}
