//! Integral Cayley algebra on the E8 lattice.
//!
//! The frame vectors `h_i` are indexed by the projective line over F7,
//! serialized in the order `(∞, 0, 1, 2, 3, 4, 5, 6)`. Vectors are stored as
//! dyadic rationals so that products of arbitrary span elements stay exact.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Number of points of the projective line over F7.
pub const POINTS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OctonionError {
    #[error("L2(7) closure assigns conflicting products to h_{left} h_{right}")]
    InconsistentRelations {
        left: ProjectivePoint,
        right: ProjectivePoint,
    },
    #[error("L2(7) closure left h_{left} h_{right} undefined")]
    IncompleteClosure {
        left: ProjectivePoint,
        right: ProjectivePoint,
    },
    #[error("vector {0} is not in the E8 lattice")]
    NotInLattice(Octonion),
    #[error("lattice basis has Gram determinant {0}, expected 1")]
    BadBasis(i128),
    #[error("{law} fails for x = {x}, y = {y}")]
    LawViolated { law: &'static str, x: Octonion, y: Octonion },
}

/// A point of `P^1(F_7) = {∞, 0, 1, ..., 6}`; position 0 is `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectivePoint(u8);

impl ProjectivePoint {
    pub const INFINITY: Self = ProjectivePoint(0);

    /// The finite point `k ∈ F_7`.
    pub fn finite(k: u8) -> Self {
        assert!(k < 7, "finite point out of range: {k}");
        ProjectivePoint(k + 1)
    }

    pub fn from_position(pos: usize) -> Self {
        assert!(pos < POINTS);
        ProjectivePoint(pos as u8)
    }

    pub fn position(self) -> usize {
        self.0 as usize
    }

    pub fn all() -> impl Iterator<Item = ProjectivePoint> {
        (0..POINTS as u8).map(ProjectivePoint)
    }

    /// `x ↦ x + 1`, fixing `∞`.
    pub fn translate(self) -> Self {
        match self.0 {
            0 => self,
            k => ProjectivePoint((k % 7) + 1),
        }
    }

    /// `x ↦ -1/x`, swapping `∞` and `0`.
    pub fn negated_inverse(self) -> Self {
        // -1/x for x = 1..6 over F7
        const NEG_INV: [u8; 7] = [0, 6, 3, 2, 5, 4, 1];
        match self.0 {
            0 => ProjectivePoint(1),
            1 => ProjectivePoint(0),
            k => ProjectivePoint(NEG_INV[(k - 1) as usize] + 1),
        }
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "∞"),
            k => write!(f, "{}", k - 1),
        }
    }
}

/// A permutation of the eight points, as an image table on positions.
pub type PointPerm = [u8; POINTS];

fn perm_of(map: impl Fn(ProjectivePoint) -> ProjectivePoint) -> PointPerm {
    let mut out = [0u8; POINTS];
    for p in ProjectivePoint::all() {
        out[p.position()] = map(p).0;
    }
    out
}

/// Generators of the `L_2(7)` action on the index set: translation and
/// negated inversion.
pub fn l27_generators() -> [PointPerm; 2] {
    [
        perm_of(ProjectivePoint::translate),
        perm_of(ProjectivePoint::negated_inverse),
    ]
}

/// All 168 elements of `L_2(7)` acting on the index set, sorted.
pub fn l27_elements() -> Vec<PointPerm> {
    let gens = l27_generators();
    let identity: PointPerm = std::array::from_fn(|i| i as u8);
    let mut seen = std::collections::BTreeSet::from([identity]);
    let mut frontier = vec![identity];
    while let Some(p) = frontier.pop() {
        for g in &gens {
            let q: PointPerm = std::array::from_fn(|i| g[p[i] as usize]);
            if seen.insert(q) {
                frontier.push(q);
            }
        }
    }
    seen.into_iter().collect()
}

/// An element of the rational span of the `h_i` with dyadic coordinates:
/// the value of coordinate `i` is `num[i] / 2^shift`.
///
/// Always kept normalized (`shift` is minimal), so structural equality is
/// value equality.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Octonion {
    num: [i64; POINTS],
    shift: u32,
}

impl Octonion {
    pub const ZERO: Octonion = Octonion {
        num: [0; POINTS],
        shift: 0,
    };

    pub fn new(num: [i64; POINTS], shift: u32) -> Self {
        let mut x = Octonion { num, shift };
        x.normalize();
        x
    }

    /// Build from doubled coordinates `d_i = 2 n_i`.
    pub fn from_doubled(d: [i64; POINTS]) -> Self {
        Self::new(d, 1)
    }

    /// The frame vector `h_i`.
    pub fn basis(p: ProjectivePoint) -> Self {
        let mut num = [0; POINTS];
        num[p.position()] = 1;
        Self::new(num, 0)
    }

    /// The identity `1 = (1/2) Σ h_i`.
    pub fn one() -> Self {
        Self::new([1; POINTS], 1)
    }

    fn normalize(&mut self) {
        if self.num.iter().all(|&c| c == 0) {
            self.shift = 0;
            return;
        }
        while self.shift > 0 && self.num.iter().all(|&c| c % 2 == 0) {
            for c in &mut self.num {
                *c /= 2;
            }
            self.shift -= 1;
        }
    }

    fn scaled_to(&self, shift: u32) -> [i64; POINTS] {
        debug_assert!(shift >= self.shift);
        let k = shift - self.shift;
        self.num.map(|c| c << k)
    }

    /// Doubled coordinates, when every coordinate lies in `(1/2)Z`.
    pub fn doubled(&self) -> Option<[i64; POINTS]> {
        (self.shift <= 1).then(|| self.scaled_to(1))
    }

    /// Exact coordinate `i` as `(numerator, log2 denominator)`.
    pub fn coord(&self, p: ProjectivePoint) -> (i64, u32) {
        (self.num[p.position()], self.shift)
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(self.num.map(|c| c * k), self.shift)
    }

    /// Membership in `Λ`: all coordinates integral or all in `Z + 1/2`, with
    /// even coordinate sum.
    pub fn in_lattice(&self) -> bool {
        let Some(d) = self.doubled() else {
            return false;
        };
        let parity = d[0].rem_euclid(2);
        d.iter().all(|c| c.rem_euclid(2) == parity) && d.iter().sum::<i64>().rem_euclid(4) == 0
    }

    /// `⟨x, y⟩ = Σ x_i y_i` as `(numerator, log2 denominator)`, reduced.
    pub fn inner(&self, other: &Octonion) -> (i64, u32) {
        let s: i64 = self.num.iter().zip(&other.num).map(|(a, b)| a * b).sum();
        let mut shift = self.shift + other.shift;
        let mut s = s;
        while shift > 0 && s % 2 == 0 {
            s /= 2;
            shift -= 1;
        }
        if s == 0 {
            shift = 0;
        }
        (s, shift)
    }

    /// Integral inner product; panics if the value is not an integer.
    pub fn inner_int(&self, other: &Octonion) -> i64 {
        let (v, shift) = self.inner(other);
        assert_eq!(shift, 0, "inner product is not integral");
        v
    }

    /// `N(x) = ⟨x, x⟩`.
    pub fn norm(&self) -> (i64, u32) {
        self.inner(self)
    }
}

impl Add for Octonion {
    type Output = Octonion;
    fn add(self, rhs: Octonion) -> Octonion {
        let shift = self.shift.max(rhs.shift);
        let a = self.scaled_to(shift);
        let b = rhs.scaled_to(shift);
        Octonion::new(std::array::from_fn(|i| a[i] + b[i]), shift)
    }
}

impl Neg for Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        Octonion::new(self.num.map(|c| -c), self.shift)
    }
}

impl Sub for Octonion {
    type Output = Octonion;
    fn sub(self, rhs: Octonion) -> Octonion {
        self + (-rhs)
    }
}

impl fmt::Debug for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.num.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if self.shift == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}/{}", 1u64 << self.shift)?;
            }
        }
        write!(f, ")")
    }
}

/// The 8×8 table of basis products `h_i h_j`.
///
/// Every entry is `(1/4)` times a `±1` vector: `h_i² = (h_i - 1)/2` and
/// `h_i h_j = (1 - h_a - h_b - h_c)/2` for `i ≠ j`.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiplicationTable {
    quarter: [[[i8; POINTS]; POINTS]; POINTS],
    /// For `i ≠ j`, the three indices subtracted in `2 h_i h_j`.
    triples: BTreeMap<(u8, u8), [u8; 3]>,
}

fn sorted3(mut t: [u8; 3]) -> [u8; 3] {
    t.sort_unstable();
    t
}

impl MultiplicationTable {
    /// Close the seed relations `2h_∞h_0 = 1 - h_3 - h_5 - h_6` and
    /// `2h_0h_∞ = 1 - h_2 - h_1 - h_4` under the `L_2(7)` index action.
    pub fn build() -> Result<Self, OctonionError> {
        let f = |k| ProjectivePoint::finite(k).0;
        let inf = ProjectivePoint::INFINITY.0;
        let seeds = [
            ((inf, f(0)), sorted3([f(3), f(5), f(6)])),
            ((f(0), inf), sorted3([f(2), f(1), f(4)])),
        ];
        let gens = l27_generators();
        let mut triples: BTreeMap<(u8, u8), [u8; 3]> = BTreeMap::new();
        let mut frontier = Vec::new();
        for (pair, triple) in seeds {
            if let Some(prev) = triples.insert(pair, triple) {
                if prev != triple {
                    return Err(OctonionError::InconsistentRelations {
                        left: ProjectivePoint(pair.0),
                        right: ProjectivePoint(pair.1),
                    });
                }
            }
            frontier.push(pair);
        }
        while let Some(pair) = frontier.pop() {
            let triple = triples[&pair];
            for g in &gens {
                let image = (g[pair.0 as usize], g[pair.1 as usize]);
                let t = sorted3(triple.map(|k| g[k as usize]));
                match triples.get(&image) {
                    Some(prev) if *prev != t => {
                        return Err(OctonionError::InconsistentRelations {
                            left: ProjectivePoint(image.0),
                            right: ProjectivePoint(image.1),
                        })
                    }
                    Some(_) => {}
                    None => {
                        triples.insert(image, t);
                        frontier.push(image);
                    }
                }
            }
        }

        let mut quarter = [[[0i8; POINTS]; POINTS]; POINTS];
        for i in 0..POINTS {
            for j in 0..POINTS {
                let entry = &mut quarter[i][j];
                if i == j {
                    // 4 h_i^2 = 2h_i - Σ h
                    *entry = [-1; POINTS];
                    entry[i] = 1;
                } else {
                    let Some(t) = triples.get(&(i as u8, j as u8)) else {
                        return Err(OctonionError::IncompleteClosure {
                            left: ProjectivePoint(i as u8),
                            right: ProjectivePoint(j as u8),
                        });
                    };
                    // 4 h_i h_j = Σ h - 2(h_a + h_b + h_c)
                    *entry = [1; POINTS];
                    for &k in t {
                        entry[k as usize] = -1;
                    }
                }
            }
        }
        Ok(MultiplicationTable { quarter, triples })
    }

    /// The basis product `h_i h_j`.
    pub fn entry(&self, i: ProjectivePoint, j: ProjectivePoint) -> Octonion {
        let q = self.quarter[i.position()][j.position()];
        Octonion::new(q.map(i64::from), 2)
    }

    /// For `i ≠ j`, the indices `{a, b, c}` with `2 h_i h_j = 1 - h_a - h_b - h_c`.
    pub fn subtracted_triple(
        &self,
        i: ProjectivePoint,
        j: ProjectivePoint,
    ) -> Option<[ProjectivePoint; 3]> {
        self.triples
            .get(&(i.0, j.0))
            .map(|t| t.map(ProjectivePoint))
    }

    /// Number of ordered pairs `(i, j)`, `i ≠ j`, reached by the closure.
    pub fn closed_pairs(&self) -> usize {
        self.triples.len()
    }

    /// Bilinear extension of the table.
    pub fn multiply(&self, x: &Octonion, y: &Octonion) -> Octonion {
        let mut acc = [0i128; POINTS];
        for (i, &a) in x.num.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.num.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = a as i128 * b as i128;
                for (k, &t) in self.quarter[i][j].iter().enumerate() {
                    acc[k] += ab * t as i128;
                }
            }
        }
        let mut shift = x.shift + y.shift + 2;
        // Reduce before narrowing back to i64.
        while shift > 0 && acc.iter().all(|c| c % 2 == 0) {
            for c in &mut acc {
                *c /= 2;
            }
            shift -= 1;
        }
        let num = acc.map(|c| i64::try_from(c).expect("octonion coordinate overflow"));
        Octonion::new(num, shift)
    }
}

impl fmt::Debug for MultiplicationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplicationTable")
            .field("closed_pairs", &self.triples.len())
            .finish()
    }
}

/// A Z-basis of `Λ` with its dual basis, used to encode `Λ/2Λ` as bytes.
#[derive(Debug, Clone)]
pub struct LatticeBasis {
    vectors: [Octonion; POINTS],
    dual: [Octonion; POINTS],
}

/// Determinant of an integer matrix by fraction-free elimination.
pub fn integer_determinant(m: &[[i128; POINTS]; POINTS]) -> i128 {
    let mut a = *m;
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..POINTS {
        if a[k][k] == 0 {
            let Some(r) = (k + 1..POINTS).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..POINTS {
            for j in k + 1..POINTS {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[POINTS - 1][POINTS - 1]
}

impl LatticeBasis {
    /// `{1, h_0 - h_1, h_1 - h_2, h_2 - h_3, h_3 - h_4, h_4 - h_5, h_5 - h_6, h_5 + h_6}`.
    pub fn standard() -> Result<Self, OctonionError> {
        let h = |k: u8| Octonion::basis(ProjectivePoint::finite(k));
        let vectors = [
            Octonion::one(),
            h(0) - h(1),
            h(1) - h(2),
            h(2) - h(3),
            h(3) - h(4),
            h(4) - h(5),
            h(5) - h(6),
            h(5) + h(6),
        ];
        Self::from_vectors(vectors)
    }

    /// Validate a candidate basis (unimodular, even) and compute its dual.
    pub fn from_vectors(vectors: [Octonion; POINTS]) -> Result<Self, OctonionError> {
        for v in &vectors {
            if !v.in_lattice() {
                return Err(OctonionError::NotInLattice(*v));
            }
        }
        let gram = gram_matrix(&vectors);
        let det = integer_determinant(&gram);
        if det != 1 {
            return Err(OctonionError::BadBasis(det));
        }
        // Dual basis vectors b*_k = Σ_l (G^{-1})_{kl} b_l; G^{-1} is the
        // adjugate since det = 1.
        let mut dual = [Octonion::ZERO; POINTS];
        for (k, slot) in dual.iter_mut().enumerate() {
            let mut acc = Octonion::ZERO;
            for (l, b) in vectors.iter().enumerate() {
                let cof = cofactor(&gram, l, k);
                acc = acc + b.scale(cof as i64);
            }
            *slot = acc;
        }
        Ok(LatticeBasis { vectors, dual })
    }

    pub fn vectors(&self) -> &[Octonion; POINTS] {
        &self.vectors
    }

    pub fn gram(&self) -> [[i128; POINTS]; POINTS] {
        gram_matrix(&self.vectors)
    }

    /// Integer coordinates of a lattice vector in this basis.
    pub fn coordinates(&self, x: &Octonion) -> Result<[i64; POINTS], OctonionError> {
        if !x.in_lattice() {
            return Err(OctonionError::NotInLattice(*x));
        }
        Ok(std::array::from_fn(|k| x.inner_int(&self.dual[k])))
    }

    /// The class of `x` in `Λ/2Λ` as an 8-bit code (bit `k` = parity of the
    /// `k`-th coordinate).
    pub fn reduce_mod2(&self, x: &Octonion) -> Result<u8, OctonionError> {
        let c = self.coordinates(x)?;
        Ok(c
            .iter()
            .enumerate()
            .fold(0u8, |acc, (k, &v)| acc | (((v.rem_euclid(2)) as u8) << k)))
    }

    /// The representative `Σ_{k ∈ code} b_k` of a code.
    pub fn lift(&self, code: u8) -> Octonion {
        (0..POINTS)
            .filter(|k| code >> k & 1 == 1)
            .fold(Octonion::ZERO, |acc, k| acc + self.vectors[k])
    }
}

fn gram_matrix(v: &[Octonion; POINTS]) -> [[i128; POINTS]; POINTS] {
    std::array::from_fn(|i| std::array::from_fn(|j| v[i].inner_int(&v[j]) as i128))
}

fn cofactor(m: &[[i128; POINTS]; POINTS], row: usize, col: usize) -> i128 {
    // Embed the minor in an 8×8 matrix with a unit pivot so the 8×8
    // determinant routine can be reused.
    let mut minor = [[0i128; POINTS]; POINTS];
    let mut ri = 0;
    for (i, mrow) in m.iter().enumerate() {
        if i == row {
            continue;
        }
        let mut cj = 0;
        for (j, &v) in mrow.iter().enumerate() {
            if j == col {
                continue;
            }
            minor[ri][cj] = v;
            cj += 1;
        }
        ri += 1;
    }
    minor[POINTS - 1][POINTS - 1] = 1;
    let sign = if (row + col) % 2 == 0 { 1 } else { -1 };
    sign * integer_determinant(&minor)
}

/// `a / 2^s` for a dyadic pair.
fn dyadic_eq((a, s): (i64, u32), (b, t): (i64, u32)) -> bool {
    let m = s.max(t);
    (a as i128) << (m - s) == (b as i128) << (m - t)
}

fn dyadic_mul((a, s): (i64, u32), (b, t): (i64, u32)) -> (i64, u32) {
    (a * b, s + t)
}

/// Check `1x = x1 = x`, closure of `Λ` and `2N(xy) = N(x)N(y)` on `pairs`
/// lattice pairs with basis coefficients in `-3..=3`, drawn from a seeded
/// ChaCha stream.
pub fn composition_check(
    table: &MultiplicationTable,
    basis: &LatticeBasis,
    pairs: usize,
    seed: u64,
) -> Result<usize, OctonionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = |rng: &mut ChaCha8Rng| {
        basis
            .vectors()
            .iter()
            .fold(Octonion::ZERO, |acc, b| acc + b.scale(rng.gen_range(-3..=3)))
    };
    let one = Octonion::one();
    for _ in 0..pairs {
        let x = sample(&mut rng);
        let y = sample(&mut rng);
        let fail = |law| OctonionError::LawViolated { law, x, y };
        if table.multiply(&one, &x) != x || table.multiply(&x, &one) != x {
            return Err(fail("two-sided identity"));
        }
        let xy = table.multiply(&x, &y);
        if !xy.in_lattice() {
            return Err(fail("lattice closure"));
        }
        if !dyadic_eq(dyadic_mul((2, 0), xy.norm()), dyadic_mul(x.norm(), y.norm())) {
            return Err(fail("norm composition"));
        }
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(k: u8) -> Octonion {
        Octonion::basis(ProjectivePoint::finite(k))
    }

    fn h_inf() -> Octonion {
        Octonion::basis(ProjectivePoint::INFINITY)
    }

    #[test]
    fn l27_has_order_168() {
        assert_eq!(l27_elements().len(), 168);
    }

    #[test]
    fn seed_entries() {
        let t = MultiplicationTable::build().unwrap();
        let one = Octonion::one();
        let p = |k| ProjectivePoint::finite(k);
        let expected = (one - h(3) - h(5) - h(6)).scale(1);
        assert_eq!(
            t.entry(ProjectivePoint::INFINITY, p(0)).scale(2),
            expected
        );
        assert_eq!(
            t.entry(p(0), ProjectivePoint::INFINITY).scale(2),
            one - h(2) - h(1) - h(4)
        );
        for i in ProjectivePoint::all() {
            let hi = Octonion::basis(i);
            assert_eq!(t.entry(i, i).scale(2), hi - one);
        }
    }

    #[test]
    fn translation_shifts_the_seed() {
        let t = MultiplicationTable::build().unwrap();
        let p = ProjectivePoint::finite;
        let mut tri = t.subtracted_triple(ProjectivePoint::INFINITY, p(1)).unwrap();
        tri.sort();
        assert_eq!(tri, [p(0), p(4), p(6)]);
        assert_eq!(t.closed_pairs(), 56);
    }

    #[test]
    fn identity_is_two_sided() {
        let t = MultiplicationTable::build().unwrap();
        let x = h_inf().scale(3) - h(2) + h(5).scale(7);
        assert_eq!(t.multiply(&Octonion::one(), &x), x);
        assert_eq!(t.multiply(&x, &Octonion::one()), x);
    }

    #[test]
    fn lattice_predicate() {
        assert!(Octonion::one().in_lattice());
        assert!(!h(0).in_lattice());
        assert!((h(0) + h(3)).in_lattice());
        assert!(!Octonion::from_doubled([1, 1, 1, 1, 1, 1, 1, -1]).in_lattice());
        assert!(Octonion::from_doubled([1, 1, 1, 1, 1, 1, -1, -1]).in_lattice());
    }

    #[test]
    fn basis_is_unimodular_and_even() {
        let b = LatticeBasis::standard().unwrap();
        let g = b.gram();
        assert_eq!(integer_determinant(&g), 1);
        for (i, row) in g.iter().enumerate() {
            assert_eq!(row[i] % 2, 0);
        }
    }

    #[test]
    fn frame_pair_basis_is_not_unimodular() {
        let vectors = [
            h_inf() + h(0),
            h(0) + h(1),
            h(0) + h(2),
            h(0) + h(3),
            h(0) + h(4),
            h(0) + h(5),
            h(0) + h(6),
            Octonion::one(),
        ];
        assert_eq!(
            LatticeBasis::from_vectors(vectors).unwrap_err(),
            OctonionError::BadBasis(9)
        );
    }

    #[test]
    fn reduce_mod2_basics() {
        let b = LatticeBasis::standard().unwrap();
        assert_eq!(b.reduce_mod2(&Octonion::ZERO).unwrap(), 0);
        let u = h(1) + h(4) - h_inf();
        let u = u + h(2);
        assert!(u.in_lattice());
        assert_eq!(b.reduce_mod2(&u.scale(2)).unwrap(), 0);
        assert!(matches!(
            b.reduce_mod2(&h(2)),
            Err(OctonionError::NotInLattice(_))
        ));
        for code in 0..=255u8 {
            assert_eq!(b.reduce_mod2(&b.lift(code)).unwrap(), code);
        }
    }

    #[test]
    fn seeded_composition_sample() {
        let t = MultiplicationTable::build().unwrap();
        let b = LatticeBasis::standard().unwrap();
        assert_eq!(composition_check(&t, &b, 200, 7).unwrap(), 200);
    }

    proptest::proptest! {
        #[test]
        fn norm_composes(cx in proptest::array::uniform8(-4i64..=4), cy in proptest::array::uniform8(-4i64..=4)) {
            let t = MultiplicationTable::build().unwrap();
            let b = LatticeBasis::standard().unwrap();
            let v = |c: [i64; 8]| b.vectors().iter().zip(c).fold(Octonion::ZERO, |acc, (e, k)| acc + e.scale(k));
            let (x, y) = (v(cx), v(cy));
            let xy = t.multiply(&x, &y);
            proptest::prop_assert!(xy.in_lattice());
            proptest::prop_assert!(dyadic_eq(dyadic_mul((2, 0), xy.norm()), dyadic_mul(x.norm(), y.norm())));
        }
    }
}
