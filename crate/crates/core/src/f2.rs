//! Small dense linear algebra over F2 on bit-packed `u64` vectors.

/// Reduced echelon basis of a subspace; each row has a distinct leading bit.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Echelon {
    rows: Vec<u64>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vectors(vs: &[u64]) -> Self {
        let mut e = Self::new();
        for &v in vs {
            e.insert(v);
        }
        e
    }

    /// Reduce `v` against the basis.
    pub fn reduce(&self, mut v: u64) -> u64 {
        for &r in &self.rows {
            let lead = 63 - r.leading_zeros();
            if v >> lead & 1 == 1 {
                v ^= r;
            }
        }
        v
    }

    /// Add `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: u64) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        let lead = 63 - v.leading_zeros();
        for r in &mut self.rows {
            if *r >> lead & 1 == 1 {
                *r ^= v;
            }
        }
        self.rows.push(v);
        self.rows.sort_unstable_by(|a, b| b.cmp(a));
        true
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Every vector of the span (2^rank of them).
    pub fn span(&self) -> Vec<u64> {
        let mut out = vec![0u64];
        for &r in &self.rows {
            let n = out.len();
            for i in 0..n {
                out.push(out[i] ^ r);
            }
        }
        out
    }
}

pub fn rank(vs: &[u64]) -> usize {
    Echelon::from_vectors(vs).rank()
}

/// Basis of `{x ∈ F_2^n : ⟨x, c⟩ = 0 for all c in cs}`.
pub fn orthogonal_complement(cs: &[u64], n: u32) -> Echelon {
    let e = Echelon::from_vectors(cs);
    // Bring rows to reduced form on pivot columns, then read off the kernel.
    let pivots: Vec<u32> = e.rows.iter().map(|r| 63 - r.leading_zeros()).collect();
    let mut out = Echelon::new();
    for free in 0..n {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = 1u64 << free;
        for (r, &p) in e.rows.iter().zip(&pivots) {
            if r >> free & 1 == 1 {
                v |= 1 << p;
            }
        }
        out.insert(v);
    }
    out
}

/// Basis of the intersection of two subspaces of `F_2^n`.
pub fn intersection(a: &Echelon, b: &Echelon, n: u32) -> Echelon {
    // A ∩ B = (A^⊥ + B^⊥)^⊥
    let mut perp = orthogonal_complement(a.rows(), n).rows().to_vec();
    perp.extend_from_slice(orthogonal_complement(b.rows(), n).rows());
    orthogonal_complement(&perp, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_span() {
        let e = Echelon::from_vectors(&[0b011, 0b110, 0b101]);
        assert_eq!(e.rank(), 2);
        let mut s = e.span();
        s.sort();
        assert_eq!(s, vec![0, 0b011, 0b101, 0b110]);
    }

    #[test]
    fn complement_is_orthogonal() {
        let cs = [0b1111_0000u64, 0b0011_1100, 0b1010_1010];
        let perp = orthogonal_complement(&cs, 8);
        assert_eq!(perp.rank(), 8 - rank(&cs));
        for &p in perp.rows() {
            for &c in &cs {
                assert_eq!((p & c).count_ones() % 2, 0);
            }
        }
    }

    #[test]
    fn intersection_dimension() {
        let a = Echelon::from_vectors(&[0b0001, 0b0010, 0b0100]);
        let b = Echelon::from_vectors(&[0b0010, 0b1000, 0b0101]);
        let i = intersection(&a, &b, 4);
        assert_eq!(i.rank(), 2);
        assert!(i.contains(0b0010) && i.contains(0b0101));
    }
}
