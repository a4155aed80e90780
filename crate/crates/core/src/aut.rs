//! Automorphisms of the binary Cayley algebra by backtracking search, and
//! their action on the cube-root pairs `Δ`.

use std::io::{self, Read, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::binary::{BinaryAlgebra, BinaryCayley, DeltaPair, ElementType, DELTA};
use crate::f2::Echelon;
use crate::perm::Perm28;

/// `|G_2(2)|`.
pub const G2_2_ORDER: usize = 12096;

const CACHE_MAGIC: &[u8; 4] = b"BCAY";
const CACHE_VERSION: u16 = 1;

#[derive(Debug, Error)]
pub enum AutError {
    #[error("no generating set of at most 3 elements found")]
    NoGeneratingSet,
    #[error("search visited {visited} candidate images, over the budget of {budget}")]
    SearchIncomplete { visited: u64, budget: u64 },
    #[error("malformed automorphism cache: {0}")]
    BadCache(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// An invertible F2-linear map of `Λ/2Λ`; `rows[k]` is the image of the
/// `k`-th basis vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryAutomorphism {
    rows: [u8; 8],
}

impl BinaryAutomorphism {
    pub fn identity() -> Self {
        BinaryAutomorphism {
            rows: std::array::from_fn(|k| 1 << k),
        }
    }

    pub fn from_rows(rows: [u8; 8]) -> Self {
        BinaryAutomorphism { rows }
    }

    pub fn rows(&self) -> [u8; 8] {
        self.rows
    }

    #[inline]
    pub fn apply(&self, x: BinaryCayley) -> BinaryCayley {
        let mut out = 0u8;
        for k in 0..8 {
            if x.0 >> k & 1 == 1 {
                out ^= self.rows[k];
            }
        }
        BinaryCayley(out)
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        BinaryAutomorphism {
            rows: std::array::from_fn(|k| self.apply(BinaryCayley(other.rows[k])).0),
        }
    }

    pub fn is_invertible(&self) -> bool {
        Echelon::from_vectors(&self.rows.map(u64::from)).rank() == 8
    }

    /// Multiplicativity on all basis pairs (sufficient by bilinearity).
    pub fn preserves(&self, alg: &BinaryAlgebra) -> bool {
        (0..8).all(|i| {
            (0..8).all(|j| {
                let (x, y) = (BinaryCayley(1 << i), BinaryCayley(1 << j));
                self.apply(alg.mul(x, y)) == alg.mul(self.apply(x), self.apply(y))
            })
        })
    }
}

/// An algebra word in the search generators.
#[derive(Debug, Clone, Copy)]
enum Word {
    Gen(usize),
    One,
    Mul(usize, usize),
}

/// Generators of the algebra together with a set of words whose values
/// form a basis of `Λ/2Λ`.
#[derive(Debug, Clone)]
pub struct GeneratingSet {
    pub generators: Vec<BinaryCayley>,
    words: Vec<Word>,
    basis_words: Vec<usize>,
}

impl GeneratingSet {
    fn eval(&self, alg: &BinaryAlgebra, images: &[BinaryCayley]) -> Vec<BinaryCayley> {
        let mut vals: Vec<BinaryCayley> = Vec::with_capacity(self.words.len());
        for w in &self.words {
            let v = match *w {
                Word::Gen(k) => images[k],
                Word::One => alg.one(),
                Word::Mul(a, b) => alg.mul(vals[a], vals[b]),
            };
            vals.push(v);
        }
        vals
    }

    /// Try to span the algebra from `gens` and `1` by products; returns the
    /// words if the generated subalgebra is everything.
    fn try_new(alg: &BinaryAlgebra, gens: &[BinaryCayley]) -> Option<Self> {
        let mut words: Vec<Word> = gens
            .iter()
            .enumerate()
            .map(|(k, _)| Word::Gen(k))
            .collect();
        words.push(Word::One);
        let mut vals: Vec<BinaryCayley> = gens.to_vec();
        vals.push(alg.one());
        let mut ech = Echelon::new();
        let mut basis_words = Vec::new();
        for (i, v) in vals.iter().enumerate() {
            if ech.insert(v.0 as u64) {
                basis_words.push(i);
            }
        }
        loop {
            let mut grew = false;
            let current = basis_words.clone();
            'outer: for &a in &current {
                for &b in &current {
                    let v = alg.mul(vals[a], vals[b]);
                    if ech.insert(v.0 as u64) {
                        words.push(Word::Mul(a, b));
                        vals.push(v);
                        basis_words.push(vals.len() - 1);
                        grew = true;
                        if ech.rank() == 8 {
                            break 'outer;
                        }
                    }
                }
            }
            if ech.rank() == 8 {
                return Some(GeneratingSet {
                    generators: gens.to_vec(),
                    words,
                    basis_words,
                });
            }
            if !grew {
                return None;
            }
        }
    }

    /// The first generating set, in code order, of cube roots of unity: two
    /// if possible, otherwise three.
    pub fn find(alg: &BinaryAlgebra) -> Result<Self, AutError> {
        let roots = alg.elements_of_type(ElementType::CubeRootOfUnity);
        for (i, &a) in roots.iter().enumerate() {
            for &b in &roots[i + 1..] {
                if let Some(g) = Self::try_new(alg, &[a, b]) {
                    return Ok(g);
                }
            }
        }
        for (i, &a) in roots.iter().enumerate() {
            for (j, &b) in roots.iter().enumerate().skip(i + 1) {
                for &c in &roots[j + 1..] {
                    if let Some(g) = Self::try_new(alg, &[a, b, c]) {
                        return Ok(g);
                    }
                }
            }
        }
        Err(AutError::NoGeneratingSet)
    }

    /// The linear map sending each generator to the given image, if the
    /// word values of the images form a basis.
    fn linear_extension(
        &self,
        alg: &BinaryAlgebra,
        images: &[BinaryCayley],
    ) -> Option<BinaryAutomorphism> {
        let src = self.eval(alg, &self.generators);
        let dst = self.eval(alg, images);
        // Solve M(src[w]) = dst[w] for the basis words: express each unit
        // vector e_k as a combination of src basis values.
        let n = self.basis_words.len();
        let mut rows: Vec<(u8, u8)> = self
            .basis_words
            .iter()
            .map(|&w| (src[w].0, dst[w].0))
            .collect();
        // Gauss-Jordan on the source side, carrying the target side along.
        for col in 0..8 {
            let pivot = (col..n).find(|&r| rows[r].0 >> col & 1 == 1)?;
            rows.swap(col, pivot);
            for r in 0..n {
                if r != col && rows[r].0 >> col & 1 == 1 {
                    rows[r].0 ^= rows[col].0;
                    rows[r].1 ^= rows[col].1;
                }
            }
        }
        let m = BinaryAutomorphism {
            rows: std::array::from_fn(|k| rows[k].1),
        };
        m.is_invertible().then_some(m)
    }
}

/// Budget on the number of partial assignments explored.
pub const DEFAULT_SEARCH_BUDGET: u64 = 50_000_000;

/// All automorphisms, sorted. Candidate images of each generator are
/// restricted to its type class and pruned by the types of pairwise
/// products, sums and the form.
pub fn aut_group_search(alg: &BinaryAlgebra, budget: u64) -> Result<Vec<BinaryAutomorphism>, AutError> {
    let gens = GeneratingSet::find(alg)?;
    let g = &gens.generators;
    let candidates: Vec<Vec<BinaryCayley>> = g
        .iter()
        .map(|&x| alg.elements_of_type(alg.classify(x)))
        .collect();
    let signature = |x: BinaryCayley, y: BinaryCayley| {
        (
            alg.classify(alg.mul(x, y)),
            alg.classify(alg.mul(y, x)),
            alg.classify(BinaryAlgebra::add(x, y)),
            alg.form(x, y),
        )
    };
    let visited = std::sync::atomic::AtomicU64::new(0);

    let mut found: Vec<BinaryAutomorphism> = candidates[0]
        .par_iter()
        .flat_map_iter(|&y0| {
            let mut out = Vec::new();
            let mut images = vec![y0];
            extend(alg, &gens, &candidates, &signature, &mut images, &mut out, &visited);
            out
        })
        .collect();
    let v = visited.load(std::sync::atomic::Ordering::Relaxed);
    if v > budget {
        return Err(AutError::SearchIncomplete { visited: v, budget });
    }
    found.sort_unstable();
    found.dedup();
    Ok(found)
}

fn extend<F>(
    alg: &BinaryAlgebra,
    gens: &GeneratingSet,
    candidates: &[Vec<BinaryCayley>],
    signature: &F,
    images: &mut Vec<BinaryCayley>,
    out: &mut Vec<BinaryAutomorphism>,
    visited: &std::sync::atomic::AtomicU64,
) where
    F: Fn(BinaryCayley, BinaryCayley) -> (ElementType, ElementType, ElementType, bool),
{
    visited.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
    let depth = images.len();
    if depth == gens.generators.len() {
        if let Some(m) = gens.linear_extension(alg, images) {
            if m.preserves(alg) {
                out.push(m);
            }
        }
        return;
    }
    let x = gens.generators[depth];
    for &y in &candidates[depth] {
        let consistent = (0..depth).all(|k| {
            signature(gens.generators[k], x) == signature(images[k], y)
        });
        if consistent {
            images.push(y);
            extend(alg, gens, candidates, signature, images, out, visited);
            images.pop();
        }
    }
}

/// Lookup from element code to the id of its `Δ` pair.
pub fn pair_index(delta: &[DeltaPair]) -> [Option<u8>; 256] {
    let mut idx = [None; 256];
    for p in delta {
        for m in p.members {
            idx[m.0 as usize] = Some(p.id as u8);
        }
    }
    idx
}

/// The permutation of `Δ` induced by an automorphism.
pub fn perm_image(g: &BinaryAutomorphism, delta: &[DeltaPair]) -> Perm28 {
    let idx = pair_index(delta);
    let mut img = [0u8; DELTA];
    for p in delta {
        let y = g.apply(p.members[0]);
        img[p.id] = idx[y.0 as usize].expect("automorphism must preserve cube roots");
    }
    Perm28::from_images(img)
}

/// Write the automorphism list in the `BCAY` cache format.
pub fn write_cache<W: Write>(mut w: W, group: &[BinaryAutomorphism]) -> io::Result<()> {
    w.write_all(CACHE_MAGIC)?;
    w.write_all(&CACHE_VERSION.to_le_bytes())?;
    w.write_all(&(group.len() as u32).to_le_bytes())?;
    for g in group {
        w.write_all(&g.rows)?;
    }
    Ok(())
}

pub fn read_cache<R: Read>(mut r: R) -> Result<Vec<BinaryAutomorphism>, AutError> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != CACHE_MAGIC {
        return Err(AutError::BadCache(format!("magic {magic:?}")));
    }
    let mut v = [0u8; 2];
    r.read_exact(&mut v)?;
    let version = u16::from_le_bytes(v);
    if version != CACHE_VERSION {
        return Err(AutError::BadCache(format!("version {version}")));
    }
    let mut c = [0u8; 4];
    r.read_exact(&mut c)?;
    let count = u32::from_le_bytes(c) as usize;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut rows = [0u8; 8];
        r.read_exact(&mut rows)?;
        out.push(BinaryAutomorphism::from_rows(rows));
    }
    let mut rest = Vec::new();
    r.read_to_end(&mut rest)?;
    if !rest.is_empty() {
        return Err(AutError::BadCache(format!("{} trailing bytes", rest.len())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::point_orbit;
    use std::sync::OnceLock;

    struct Fixture {
        alg: BinaryAlgebra,
        group: Vec<BinaryAutomorphism>,
        delta: Vec<DeltaPair>,
    }

    fn fixture() -> &'static Fixture {
        static F: OnceLock<Fixture> = OnceLock::new();
        F.get_or_init(|| {
            let alg = BinaryAlgebra::new().unwrap();
            let group = aut_group_search(&alg, DEFAULT_SEARCH_BUDGET).unwrap();
            let delta = alg.build_delta();
            Fixture { alg, group, delta }
        })
    }

    #[test]
    fn order_is_12096() {
        let f = fixture();
        assert_eq!(f.group.len(), G2_2_ORDER);
        assert!(f.group.contains(&BinaryAutomorphism::identity()));
        assert!(f.group.iter().all(|g| g.preserves(&f.alg)));
    }

    #[test]
    fn generated_by_at_most_three() {
        let f = fixture();
        let gens = GeneratingSet::find(&f.alg).unwrap();
        assert!(gens.generators.len() <= 3);
    }

    #[test]
    fn preserves_types() {
        let f = fixture();
        for g in f.group.iter().step_by(97) {
            for x in BinaryAlgebra::elements() {
                assert_eq!(f.alg.classify(g.apply(x)), f.alg.classify(x));
            }
        }
    }

    #[test]
    fn closed_under_composition() {
        let f = fixture();
        for (a, b) in f.group.iter().step_by(301).zip(f.group.iter().skip(7).step_by(503)) {
            assert!(f.group.binary_search(&a.compose(b)).is_ok());
        }
    }

    #[test]
    fn perm_image_is_faithful_homomorphism() {
        let f = fixture();
        assert!(perm_image(&BinaryAutomorphism::identity(), &f.delta).is_identity());
        let perms: Vec<Perm28> = f.group.iter().map(|g| perm_image(g, &f.delta)).collect();
        let mut distinct = perms.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), G2_2_ORDER);
        let (a, b) = (&f.group[17], &f.group[4000]);
        assert_eq!(
            perm_image(&a.compose(b), &f.delta),
            perm_image(a, &f.delta).compose(&perm_image(b, &f.delta))
        );
    }

    #[test]
    fn transitive_on_delta_and_idempotent_pairs() {
        let f = fixture();
        let perms: Vec<Perm28> = f.group.iter().map(|g| perm_image(g, &f.delta)).collect();
        assert_eq!(point_orbit(&perms, 0).count_ones(), 28);

        let ipairs = f.alg.unit_pairs(ElementType::Idempotent);
        let start = ipairs[0];
        let mut reached: Vec<[BinaryCayley; 2]> = f
            .group
            .iter()
            .map(|g| {
                let mut p = start.map(|x| g.apply(x));
                p.sort();
                p
            })
            .collect();
        reached.sort();
        reached.dedup();
        assert_eq!(reached.len(), 36);
    }

    #[test]
    fn cache_round_trip() {
        let f = fixture();
        let mut buf = Vec::new();
        write_cache(&mut buf, &f.group).unwrap();
        assert_eq!(buf.len(), 4 + 2 + 4 + 8 * G2_2_ORDER);
        assert_eq!(read_cache(&buf[..]).unwrap(), f.group);
        buf[0] = b'X';
        assert!(matches!(read_cache(&buf[..]), Err(AutError::BadCache(_))));
    }
}
