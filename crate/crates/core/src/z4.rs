//! Linear algebra over `Z/4`, with vectors stored as two bit planes.
//!
//! Submodules are kept in Howell form, which makes reduction to zero an
//! exact membership test even though `Z/4` has zero divisors.

use std::fmt;

/// Maximum vector length.
pub const MAX_LEN: usize = 256;
const WORDS: usize = MAX_LEN / 64;

/// A vector in `(Z/4)^n`, `n ≤ 256`. Entry `i` is `lo_i + 2 hi_i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Z4Vec {
    lo: [u64; WORDS],
    hi: [u64; WORDS],
}

impl Z4Vec {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(i: usize, value: u8) -> Self {
        let mut v = Self::zero();
        v.set(i, value);
        v
    }

    pub fn from_entries(entries: &[u8]) -> Self {
        assert!(entries.len() <= MAX_LEN);
        let mut v = Self::zero();
        for (i, &e) in entries.iter().enumerate() {
            v.set(i, e);
        }
        v
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        let (w, b) = (i / 64, i % 64);
        ((self.lo[w] >> b & 1) | (self.hi[w] >> b & 1) << 1) as u8
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: u8) {
        let (w, b) = (i / 64, i % 64);
        let value = value & 3;
        self.lo[w] = (self.lo[w] & !(1 << b)) | ((value & 1) as u64) << b;
        self.hi[w] = (self.hi[w] & !(1 << b)) | ((value >> 1) as u64) << b;
    }

    pub fn is_zero(&self) -> bool {
        self.lo.iter().chain(&self.hi).all(|&w| w == 0)
    }

    /// All entries even.
    pub fn is_even(&self) -> bool {
        self.lo.iter().all(|&w| w == 0)
    }

    /// Index of the first nonzero entry.
    pub fn leading(&self) -> Option<usize> {
        (0..WORDS).find_map(|w| {
            let m = self.lo[w] | self.hi[w];
            (m != 0).then(|| w * 64 + m.trailing_zeros() as usize)
        })
    }

    #[inline]
    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for w in 0..WORDS {
            let carry = self.lo[w] & other.lo[w];
            out.lo[w] = self.lo[w] ^ other.lo[w];
            out.hi[w] = self.hi[w] ^ other.hi[w] ^ carry;
        }
        out
    }

    #[inline]
    pub fn neg(&self) -> Self {
        let mut out = *self;
        for w in 0..WORDS {
            out.hi[w] ^= self.lo[w];
        }
        out
    }

    #[inline]
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: u8) -> Self {
        match k & 3 {
            0 => Self::zero(),
            1 => *self,
            2 => Z4Vec {
                lo: [0; WORDS],
                hi: self.lo,
            },
            _ => self.neg(),
        }
    }

    /// `Σ self_i other_i`.
    pub fn dot(&self, other: &Self) -> u8 {
        let mut acc = 0u32;
        for w in 0..WORDS {
            let (a0, a1, b0, b1) = (self.lo[w], self.hi[w], other.lo[w], other.hi[w]);
            // (a0 + 2a1)(b0 + 2b1) = a0b0 + 2(a0b1 + a1b0) mod 4
            acc += (a0 & b0).count_ones();
            acc += 2 * ((a0 & b1).count_ones() + (a1 & b0).count_ones());
        }
        (acc % 4) as u8
    }

    /// Entries `[start, start + len)` as a new vector starting at 0.
    pub fn slice(&self, start: usize, len: usize) -> Self {
        let mut out = Self::zero();
        for i in 0..len {
            out.set(i, self.get(start + i));
        }
        out
    }

    pub fn entries(&self, len: usize) -> Vec<u8> {
        (0..len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Debug for Z4Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let len = (0..MAX_LEN).rev().find(|&i| self.get(i) != 0).map_or(0, |i| i + 1);
        write!(f, "Z4{:?}", self.entries(len))
    }
}

enum Step {
    Zero,
    Reduced(Z4Vec),
    NewPivot(usize),
    Swap(usize),
}

/// A submodule of `(Z/4)^n` in Howell form: rows have distinct leading
/// columns, leading entries are 1 or 2, and `2·row` for a lead-2 row is in
/// the span of rows with later leads.
#[derive(Debug, Clone, Default)]
pub struct Howell {
    /// Sorted by leading column.
    rows: Vec<(usize, Z4Vec)>,
}

impl Howell {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vectors<'a>(vs: impl IntoIterator<Item = &'a Z4Vec>) -> Self {
        let mut h = Self::new();
        for v in vs {
            h.insert(*v);
        }
        h
    }

    fn pivot_index(&self, col: usize) -> Result<usize, usize> {
        self.rows.binary_search_by_key(&col, |(c, _)| *c)
    }

    /// Outcome of reducing `v` by leading columns.
    fn step(&self, v: &Z4Vec) -> Step {
        let Some(col) = v.leading() else {
            return Step::Zero;
        };
        let Ok(idx) = self.pivot_index(col) else {
            return Step::NewPivot(col);
        };
        let row = &self.rows[idx].1;
        let e = v.get(col);
        match (row.get(col), e) {
            (1, _) => Step::Reduced(v.sub(&row.scale(e))),
            (2, 2) => Step::Reduced(v.sub(row)),
            (2, _) => Step::Swap(idx),
            _ => unreachable!("pivot entries are 1 or 2"),
        }
    }

    pub fn contains(&self, v: &Z4Vec) -> bool {
        let mut v = *v;
        loop {
            match self.step(&v) {
                Step::Zero => return true,
                Step::Reduced(r) => v = r,
                Step::NewPivot(_) | Step::Swap(_) => return false,
            }
        }
    }

    /// Add a vector to the module; returns whether the module grew.
    pub fn insert(&mut self, v: Z4Vec) -> bool {
        let mut pending = vec![v];
        let mut grew = false;
        while let Some(mut v) = pending.pop() {
            loop {
                match self.step(&v) {
                    Step::Zero => break,
                    Step::Reduced(r) => v = r,
                    Step::Swap(idx) => {
                        // v has an odd entry where the pivot has 2: v becomes
                        // the pivot and the old row is re-reduced.
                        let col = self.rows[idx].0;
                        let unit = if v.get(col) == 1 { v } else { v.neg() };
                        let old = std::mem::replace(&mut self.rows[idx].1, unit);
                        pending.push(old);
                        pending.push(unit.scale(2));
                        grew = true;
                        break;
                    }
                    Step::NewPivot(col) => {
                        let row = if v.get(col) == 3 { v.neg() } else { v };
                        let at = self.pivot_index(col).unwrap_err();
                        self.rows.insert(at, (col, row));
                        if row.get(col) == 2 {
                            pending.push(row.scale(2));
                        }
                        grew = true;
                        break;
                    }
                }
            }
        }
        grew
    }

    pub fn rows(&self) -> impl Iterator<Item = &Z4Vec> {
        self.rows.iter().map(|(_, r)| r)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `log2` of the module's cardinality.
    pub fn log2_size(&self) -> u32 {
        self.rows
            .iter()
            .map(|(c, r)| if r.get(*c) == 1 { 2 } else { 1 })
            .sum()
    }

    /// Kernel of the linear forms in `self` acting on `(Z/4)^n`:
    /// `{u : ⟨row, u⟩ = 0 for every row}`.
    pub fn kernel(&self, n: usize) -> Howell {
        let m = self.rows.len();
        assert!(m + n <= MAX_LEN, "kernel computation too wide");
        // Generators (A e_i, e_i); their span is {(A u, u)}. Rows of the
        // Howell form with zero A-part span {(0, u) : A u = 0}.
        let forms: Vec<&Z4Vec> = self.rows().collect();
        let mut aug = Howell::new();
        for i in 0..n {
            let mut v = Z4Vec::zero();
            for (k, f) in forms.iter().enumerate() {
                v.set(k, f.get(i));
            }
            v.set(m + i, 1);
            aug.insert(v);
        }
        let mut out = Howell::new();
        for (col, row) in &aug.rows {
            if *col >= m {
                out.insert(row.slice(m, n));
            }
        }
        out
    }
}
