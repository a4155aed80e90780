//! Orbits of `Ḡ` on `k`-subsets of `Δ`: Burnside counts and explicit
//! enumeration.

use std::collections::{BTreeMap, HashMap};
use std::io::{self, Read, Write};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::binary::DELTA;
use crate::f2::Echelon;
use crate::monomial::FULL_MASK;
use crate::perm::{MaskPermuter, Perm28};

const CACHE_MAGIC: &[u8; 4] = b"ORB2";
const NO_COMPLEMENT: u32 = u32::MAX;

pub const FLAG_SIGN_PARITY: u8 = 1;
pub const FLAG_INVARIANT: u8 = 2;

#[derive(Debug, Error)]
pub enum OrbitError {
    #[error("enumerated {enumerated} orbits but Burnside gives {burnside}")]
    OrbitCountMismatch { enumerated: u128, burnside: u128 },
    #[error("orbit sizes sum to {sum}, expected {expected}")]
    SizeMismatch { sum: u128, expected: u128 },
    #[error("fixed-point total {total} is not divisible by the group order {order}")]
    NonIntegralBurnside { total: u128, order: u128 },
    #[error("subset size {0} exceeds 28")]
    BadSubsetSize(usize),
    #[error("malformed orbit cache: {0}")]
    BadCache(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Multiset of cycle types with multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CycleIndex {
    terms: BTreeMap<Vec<usize>, u128>,
    order: u128,
}

impl CycleIndex {
    pub fn from_perms(perms: &[Perm28]) -> Self {
        let mut terms = BTreeMap::new();
        for p in perms {
            *terms.entry(p.cycle_type()).or_insert(0) += 1;
        }
        CycleIndex {
            terms,
            order: perms.len() as u128,
        }
    }

    /// Cycle index of the full symmetric group on `n` points: a partition
    /// with `m_j` parts of size `j` occurs `n! / Π j^{m_j} m_j!` times.
    pub fn symmetric(n: usize) -> Self {
        fn partitions(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if n == 0 {
                out.push(prefix.clone());
                return;
            }
            for part in (1..=max.min(n)).rev() {
                prefix.push(part);
                partitions(n - part, part, prefix, out);
                prefix.pop();
            }
        }
        let order: u128 = (1..=n as u128).product();
        let mut all = Vec::new();
        partitions(n, n, &mut Vec::new(), &mut all);
        let mut terms = BTreeMap::new();
        for parts in all {
            let mut mult: BTreeMap<usize, u32> = BTreeMap::new();
            for &p in &parts {
                *mult.entry(p).or_insert(0) += 1;
            }
            let denom: u128 = mult
                .iter()
                .map(|(&j, &m)| (j as u128).pow(m) * (1..=m as u128).product::<u128>())
                .product();
            terms.insert(parts, order / denom);
        }
        CycleIndex { terms, order }
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, u128> {
        &self.terms
    }

    /// Orbits on `k`-subsets: `(1/|G|) Σ_g #{k-subsets fixed by g}`.
    pub fn orbit_count(&self, k: usize) -> Result<u128, OrbitError> {
        let total: u128 = self
            .terms
            .iter()
            .map(|(ct, &m)| m * fixed_subsets(ct, k))
            .sum();
        if total % self.order != 0 {
            return Err(OrbitError::NonIntegralBurnside {
                total,
                order: self.order,
            });
        }
        Ok(total / self.order)
    }
}

/// Number of `k`-subsets that are unions of cycles: subset sum over the
/// cycle lengths.
pub fn fixed_subsets(cycle_type: &[usize], k: usize) -> u128 {
    let n: usize = cycle_type.iter().sum();
    if k > n {
        return 0;
    }
    let mut dp = vec![0u128; n + 1];
    dp[0] = 1;
    for &l in cycle_type {
        for s in (l..=n).rev() {
            dp[s] += dp[s - l];
        }
    }
    dp[k]
}

/// Burnside count of orbits on `k`-subsets of `Δ`.
pub fn burnside_orbit_count(perms: &[Perm28], k: usize) -> Result<u128, OrbitError> {
    if k > DELTA {
        return Err(OrbitError::BadSubsetSize(k));
    }
    CycleIndex::from_perms(perms).orbit_count(k)
}

/// Burnside count of orbits on the `k`-subsets that have even intersection
/// with every word of the code spanned by `code`.
///
/// For each permutation the fixed admissible subsets are unions of cycles
/// with zero syndrome; they are counted by a subset sum carrying the
/// syndrome.
pub fn admissible_burnside_count(
    perms: &[Perm28],
    code: &[u32],
    k: usize,
) -> Result<u128, OrbitError> {
    if k > DELTA {
        return Err(OrbitError::BadSubsetSize(k));
    }
    let basis = Echelon::from_vectors(&code.iter().map(|&c| c as u64).collect::<Vec<_>>());
    let code: Vec<u32> = basis.rows().iter().map(|&c| c as u32).collect();
    assert!(code.len() <= 16, "code dimension too large for syndrome table");
    let syndromes = 1usize << code.len();
    let syndrome = |mask: u32| -> usize {
        code.iter()
            .enumerate()
            .fold(0, |acc, (i, &c)| acc | (((c & mask).count_ones() & 1) as usize) << i)
    };
    let mut by_cycles: HashMap<Vec<u32>, u128> = HashMap::new();
    for p in perms {
        let mut cycles = p.cycle_masks();
        cycles.sort_unstable();
        *by_cycles.entry(cycles).or_insert(0) += 1;
    }
    let total: u128 = by_cycles
        .par_iter()
        .map(|(cycles, &mult)| {
            // dp[weight][syndrome]
            let mut dp = vec![vec![0u128; syndromes]; DELTA + 1];
            dp[0][0] = 1;
            for &c in cycles {
                let l = c.count_ones() as usize;
                let s = syndrome(c);
                for w in (l..=DELTA).rev() {
                    for t in 0..syndromes {
                        let add = dp[w - l][t ^ s];
                        dp[w][t] += add;
                    }
                }
            }
            mult * dp[k][0]
        })
        .sum();
    let order = perms.len() as u128;
    if total % order != 0 {
        return Err(OrbitError::NonIntegralBurnside { total, order });
    }
    Ok(total / order)
}

/// One orbit of `Ḡ` on `k`-subsets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitRecord {
    /// Minimal mask in the orbit.
    pub rep: u32,
    pub size: u32,
    /// Index of the orbit containing the complements (when `k = 14`).
    pub complement: Option<usize>,
    /// `FLAG_*` bits.
    pub flags: u8,
}

impl OrbitRecord {
    pub fn sign_parity(&self) -> bool {
        self.flags & FLAG_SIGN_PARITY != 0
    }

    pub fn invariant(&self) -> bool {
        self.flags & FLAG_INVARIANT != 0
    }
}

/// Gosper's hack: next integer with the same popcount.
#[inline]
fn next_same_weight(v: u32) -> u32 {
    let t = v | (v - 1);
    (t + 1) | (((!t & (!t).wrapping_neg()) - 1) >> (v.trailing_zeros() + 1))
}

struct Visited(Vec<u64>);

impl Visited {
    fn new() -> Self {
        Visited(vec![0; 1 << (DELTA - 6)])
    }

    #[inline]
    fn test_and_set(&mut self, m: u32) -> bool {
        let (w, b) = ((m >> 6) as usize, m & 63);
        let was = self.0[w] >> b & 1 == 1;
        self.0[w] |= 1 << b;
        was
    }

    #[inline]
    fn get(&self, m: u32) -> bool {
        self.0[(m >> 6) as usize] >> (m & 63) & 1 == 1
    }
}

fn orbit_images(permuters: &[MaskPermuter], rep: u32, parallel: bool) -> Vec<u32> {
    let mut imgs: Vec<u32> = if parallel {
        permuters.par_iter().map(|p| p.apply(rep)).collect()
    } else {
        permuters.iter().map(|p| p.apply(rep)).collect()
    };
    imgs.sort_unstable();
    imgs.dedup();
    imgs
}

/// Every orbit of the group listed in `perms` on `k`-subsets of `Δ`, in
/// increasing order of minimal representative.
///
/// Subsets are visited in increasing order; the first unvisited one starts
/// a new orbit. The result does not depend on `parallel`.
pub fn enumerate_orbits(perms: &[Perm28], k: usize, parallel: bool) -> Result<Vec<OrbitRecord>, OrbitError> {
    if k > DELTA {
        return Err(OrbitError::BadSubsetSize(k));
    }
    let permuters: Vec<MaskPermuter> = perms.iter().map(MaskPermuter::new).collect();
    let mut out = Vec::new();
    if k == 0 {
        out.push(OrbitRecord {
            rep: 0,
            size: 1,
            complement: None,
            flags: 0,
        });
    } else {
        let mut visited = Visited::new();
        let mut m: u32 = (1 << k) - 1;
        loop {
            if !visited.get(m) {
                let imgs = orbit_images(&permuters, m, parallel);
                for &x in &imgs {
                    visited.test_and_set(x);
                }
                out.push(OrbitRecord {
                    rep: m,
                    size: imgs.len() as u32,
                    complement: None,
                    flags: 0,
                });
            }
            if k == DELTA {
                break;
            }
            let next = next_same_weight(m);
            if next > FULL_MASK {
                break;
            }
            m = next;
        }
    }
    if 2 * k == DELTA {
        let index: HashMap<u32, usize> = out.iter().enumerate().map(|(i, o)| (o.rep, i)).collect();
        let partners: Vec<usize> = out
            .iter()
            .map(|o| {
                let c = !o.rep & FULL_MASK;
                let min = permuters.iter().map(|p| p.apply(c)).min().expect("nonempty group");
                index[&min]
            })
            .collect();
        for (o, p) in out.iter_mut().zip(partners) {
            o.complement = Some(p);
        }
    }
    Ok(out)
}

/// Check enumeration against Burnside and the total subset count.
pub fn check_enumeration(perms: &[Perm28], k: usize, orbits: &[OrbitRecord]) -> Result<u128, OrbitError> {
    let burnside = burnside_orbit_count(perms, k)?;
    if burnside != orbits.len() as u128 {
        return Err(OrbitError::OrbitCountMismatch {
            enumerated: orbits.len() as u128,
            burnside,
        });
    }
    let sum: u128 = orbits.iter().map(|o| o.size as u128).sum();
    let expected = binomial(DELTA as u64, k as u64);
    if sum != expected {
        return Err(OrbitError::SizeMismatch { sum, expected });
    }
    Ok(burnside)
}

/// Members of the orbit of `rep`, sorted.
pub fn orbit_members(perms: &[Perm28], rep: u32) -> Vec<u32> {
    let mut v: Vec<u32> = perms.iter().map(|p| p.apply_mask(rep)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

pub fn write_cache<W: Write>(mut w: W, k: u32, orbits: &[OrbitRecord]) -> io::Result<()> {
    w.write_all(CACHE_MAGIC)?;
    w.write_all(&k.to_le_bytes())?;
    w.write_all(&(orbits.len() as u32).to_le_bytes())?;
    for o in orbits {
        w.write_all(&o.rep.to_le_bytes())?;
        w.write_all(&o.size.to_le_bytes())?;
        let partner = o.complement.map_or(NO_COMPLEMENT, |c| c as u32);
        w.write_all(&partner.to_le_bytes())?;
        w.write_all(&[o.flags])?;
    }
    Ok(())
}

/// Read a cache written by [`write_cache`]; complement partners are
/// recomputed by the caller if needed.
pub fn read_cache<R: Read>(mut r: R) -> Result<(u32, Vec<OrbitRecord>), OrbitError> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != CACHE_MAGIC {
        return Err(OrbitError::BadCache("wrong magic".into()));
    }
    let mut word = [0u8; 4];
    r.read_exact(&mut word)?;
    let k = u32::from_le_bytes(word);
    r.read_exact(&mut word)?;
    let count = u32::from_le_bytes(word) as usize;
    if k as usize > DELTA {
        return Err(OrbitError::BadCache(format!("subset size {k}")));
    }
    let mut out = Vec::with_capacity(count.min(1 << 20));
    for _ in 0..count {
        let mut rec = [0u8; 13];
        r.read_exact(&mut rec)?;
        let rep = u32::from_le_bytes(rec[0..4].try_into().unwrap());
        if rep.count_ones() != k || rep > FULL_MASK {
            return Err(OrbitError::BadCache(format!("representative {rep:#x}")));
        }
        out.push(OrbitRecord {
            rep,
            size: u32::from_le_bytes(rec[4..8].try_into().unwrap()),
            complement: match u32::from_le_bytes(rec[8..12].try_into().unwrap()) {
                NO_COMPLEMENT => None,
                c if (c as usize) < count => Some(c as usize),
                c => return Err(OrbitError::BadCache(format!("complement index {c}"))),
            },
            flags: rec[12],
        });
    }
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(OrbitError::BadCache("trailing bytes".into()));
    }
    Ok((k, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cyclic28() -> Vec<Perm28> {
        (0..DELTA)
            .map(|s| Perm28::from_images(std::array::from_fn(|i| ((i + s) % DELTA) as u8)))
            .collect()
    }

    #[test]
    fn symmetric_group_has_one_orbit_per_size() {
        let ci = CycleIndex::symmetric(DELTA);
        assert_eq!(ci.terms().values().sum::<u128>(), ci.order());
        for k in 0..=DELTA {
            assert_eq!(ci.orbit_count(k).unwrap(), 1);
        }
    }

    #[test]
    fn necklace_counts() {
        // binary necklaces of length 28 with k beads: (1/28) Σ_{d | gcd} φ(d) C(28/d, k/d)
        let perms = cyclic28();
        let phi = |d: u64| (1..=d).filter(|i| gcd(*i, d) == 1).count() as u128;
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 { a } else { gcd(b, a % b) }
        }
        for k in [0usize, 1, 2, 3, 13, 14] {
            let g = gcd(28, k as u64);
            let expected: u128 = (1..=g)
                .filter(|d| g % d == 0)
                .map(|d| phi(d) * binomial(28 / d, k as u64 / d))
                .sum::<u128>()
                / 28;
            assert_eq!(burnside_orbit_count(&perms, k).unwrap(), expected, "k={k}");
        }
    }

    #[test]
    fn enumeration_of_small_sizes_matches_burnside() {
        let perms = cyclic28();
        for k in [0usize, 1, 2, 3, 4] {
            let orbits = enumerate_orbits(&perms, k, false).unwrap();
            check_enumeration(&perms, k, &orbits).unwrap();
            assert_eq!(orbits, enumerate_orbits(&perms, k, true).unwrap());
        }
    }

    #[test]
    fn admissible_count_without_code_is_plain_count() {
        let perms = cyclic28();
        for k in [2usize, 5, 14] {
            assert_eq!(
                admissible_burnside_count(&perms, &[], k).unwrap(),
                burnside_orbit_count(&perms, k).unwrap()
            );
        }
    }

    #[test]
    fn cache_round_trip() {
        let perms = cyclic28();
        let orbits = enumerate_orbits(&perms, 3, false).unwrap();
        let mut buf = Vec::new();
        write_cache(&mut buf, 3, &orbits).unwrap();
        assert_eq!(buf.len(), 12 + 13 * orbits.len());
        let (k, back) = read_cache(buf.as_slice()).unwrap();
        assert_eq!(k, 3);
        assert_eq!(back, orbits);
        let mut linked = orbits.clone();
        linked[0].complement = Some(1);
        linked[1].complement = Some(0);
        let mut buf2 = Vec::new();
        write_cache(&mut buf2, 3, &linked).unwrap();
        assert_eq!(read_cache(buf2.as_slice()).unwrap().1, linked);
        buf[0] = b'X';
        assert!(matches!(read_cache(buf.as_slice()), Err(OrbitError::BadCache(_))));
    }

    proptest! {
        #[test]
        fn gosper_steps_to_next_same_weight(v in 1u32..(1 << 27)) {
            let n = next_same_weight(v);
            prop_assert_eq!(n.count_ones(), v.count_ones());
            prop_assert!(n > v);
            prop_assert!((v + 1..n).all(|x| x.count_ones() != v.count_ones()));
        }
    }
}
