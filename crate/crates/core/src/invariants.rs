//! Invariants of the monomial group in the degree-14 wedge space, the
//! vector `ν`, and the parameterized vector `ϱ`.
//!
//! Vectors are sparse formal sums of wedge monomials `a_I 1_X`, keyed by
//! the 28-bit mask of `I`, with Gaussian-integer coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::monomial::{LiftMode, MonomialGroup, MonomialOperator, Phase, SignGroup, FULL_MASK};
use crate::orbits::{orbit_members, OrbitRecord, FLAG_INVARIANT, FLAG_SIGN_PARITY};
use crate::perm::Perm28;

/// Number of free coefficients of `ϱ` after complement pairing.
pub const RHO_SLOTS: usize = 34;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("expected {expected} coefficients, found {found}")]
    CoefficientCountMismatch { expected: usize, found: usize },
    #[error("line {line}: expected two integers \"re im\"")]
    CoefficientParse { line: usize },
    #[error("invariant orbits do not pair under complementation: {0}")]
    Unpaired(String),
    #[error("vector is not fixed by generator {generator}")]
    NotInvariant { generator: usize },
}

/// A Gaussian integer `re + im·i`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gaussian {
    pub re: i64,
    pub im: i64,
}

impl Gaussian {
    pub const ZERO: Gaussian = Gaussian { re: 0, im: 0 };
    pub const ONE: Gaussian = Gaussian { re: 1, im: 0 };

    pub fn new(re: i64, im: i64) -> Self {
        Gaussian { re, im }
    }

    pub fn conj(self) -> Self {
        Gaussian::new(self.re, -self.im)
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }
}

impl From<Phase> for Gaussian {
    fn from(p: Phase) -> Self {
        let (re, im) = p.as_gaussian();
        Gaussian { re, im }
    }
}

impl Add for Gaussian {
    type Output = Gaussian;
    fn add(self, o: Gaussian) -> Gaussian {
        Gaussian::new(self.re + o.re, self.im + o.im)
    }
}

impl Neg for Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian::new(-self.re, -self.im)
    }
}

impl Mul for Gaussian {
    type Output = Gaussian;
    fn mul(self, o: Gaussian) -> Gaussian {
        Gaussian::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, im) => write!(f, "{im}i"),
            (re, im) if im < 0 => write!(f, "{re}-{}i", -im),
            (re, im) => write!(f, "{re}+{im}i"),
        }
    }
}

/// Sparse vector in the wedge model: mask → coefficient, zeros dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WedgeVector {
    terms: BTreeMap<u32, Gaussian>,
}

impl WedgeVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, Gaussian)>) -> Self {
        let mut v = Self::zero();
        for (m, c) in terms {
            v.add_term(m, c);
        }
        v
    }

    pub fn add_term(&mut self, mask: u32, c: Gaussian) {
        let e = self.terms.entry(mask).or_default();
        *e = *e + c;
        if e.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn terms(&self) -> &BTreeMap<u32, Gaussian> {
        &self.terms
    }

    pub fn coefficient(&self, mask: u32) -> Gaussian {
        self.terms.get(&mask).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Image under a monomial operator, term by term.
    pub fn apply(&self, op: &MonomialOperator) -> WedgeVector {
        WedgeVector::from_terms(self.terms.iter().map(|(&m, &c)| {
            let (image, phase) = op.apply_wedge(m);
            (image, Gaussian::from(phase) * c)
        }))
    }

    /// `op · self = self`. Monomial operators permute masks, so it is
    /// enough that every term lands on a term with the matching coefficient.
    pub fn is_fixed_by(&self, op: &MonomialOperator) -> bool {
        if op.is_diagonal() {
            return self.terms.keys().all(|&m| op.apply_wedge(m).1 == Phase::ONE);
        }
        self.terms.iter().all(|(&m, &c)| {
            let (image, phase) = op.apply_wedge(m);
            self.coefficient(image) == Gaussian::from(phase) * c
        })
    }

    /// Index of the first operator in `ops` that moves the vector.
    pub fn first_moved_by(&self, ops: &[MonomialOperator]) -> Option<usize> {
        ops.iter().position(|op| !self.is_fixed_by(op))
    }
}

/// An invariant `t = Σ c_I a_I 1_X` supported on one `Ḡ`-orbit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantVector {
    /// Index into the orbit list.
    pub orbit: usize,
    pub rep: u32,
    /// `(mask, c_I)` with `c_I ∈ {1, i, -1, -i}` as an exponent of `i`.
    pub terms: Vec<(u32, Phase)>,
}

impl InvariantVector {
    pub fn to_vector(&self) -> WedgeVector {
        WedgeVector::from_terms(self.terms.iter().map(|&(m, p)| (m, p.into())))
    }
}

/// Mark orbits whose members have even intersection with every dozen;
/// returns the number marked.
///
/// The representative decides; three further members of each orbit are
/// checked as well.
pub fn sign_parity_filter(orbits: &mut [OrbitRecord], sign: &SignGroup, perms: &[Perm28]) -> usize {
    let mut count = 0;
    for o in orbits.iter_mut() {
        let pass = sign.fixes_wedge(o.rep);
        let witnesses = [1usize, perms.len() / 2, perms.len() - 1];
        for &w in &witnesses {
            if let Some(p) = perms.get(w) {
                assert_eq!(
                    sign.fixes_wedge(p.apply_mask(o.rep)),
                    pass,
                    "sign parity is not constant on an orbit"
                );
            }
        }
        if pass {
            o.flags |= FLAG_SIGN_PARITY;
            count += 1;
        } else {
            o.flags &= !FLAG_SIGN_PARITY;
        }
    }
    count
}

/// Outcome of the invariance filter.
#[derive(Debug, Clone, Serialize)]
pub struct InvarianceOutcome {
    pub invariants: Vec<InvariantVector>,
    /// No lift was available: only the sign condition was applied and the
    /// coefficients are all `1`.
    pub approximate: bool,
}

/// Solve for a generator-fixed combination on the orbit of `rep`:
/// propagate `c_{σ I} = λ c_I` from `c_rep = 1` and reject on conflict.
fn solve_orbit(rep: u32, gens: &[MonomialOperator]) -> Option<Vec<(u32, Phase)>> {
    let mut coeff: HashMap<u32, Phase> = HashMap::from([(rep, Phase::ONE)]);
    let mut frontier = vec![rep];
    while let Some(m) = frontier.pop() {
        let c = coeff[&m];
        for g in gens {
            let (image, lambda) = g.apply_wedge(m);
            let want = lambda.mul(c);
            match coeff.get(&image) {
                Some(&have) if have != want => return None,
                Some(_) => {}
                None => {
                    coeff.insert(image, want);
                    frontier.push(image);
                }
            }
        }
    }
    let mut terms: Vec<(u32, Phase)> = coeff.into_iter().collect();
    terms.sort_unstable_by_key(|t| t.0);
    Some(terms)
}

/// The invariants of `group` supported on sign-passing orbits. Each
/// invariant is then checked literally against every generator.
///
/// With no lift, returns the sign-passing orbits with unit coefficients,
/// tagged approximate.
pub fn full_invariance_filter(
    orbits: &mut [OrbitRecord],
    group: &MonomialGroup,
) -> Result<InvarianceOutcome, InvariantError> {
    let perms = group.perm_group().elements();
    if group.mode() == LiftMode::None {
        let invariants = orbits
            .iter()
            .enumerate()
            .filter(|(_, o)| o.sign_parity())
            .map(|(i, o)| InvariantVector {
                orbit: i,
                rep: o.rep,
                terms: orbit_members(perms, o.rep).into_iter().map(|m| (m, Phase::ONE)).collect(),
            })
            .collect();
        return Ok(InvarianceOutcome {
            invariants,
            approximate: true,
        });
    }
    let gens = group.generators();
    let basis = group.generating_set();
    let mut invariants = Vec::new();
    for (i, o) in orbits.iter_mut().enumerate() {
        o.flags &= !FLAG_INVARIANT;
        if !o.sign_parity() {
            continue;
        }
        let Some(terms) = solve_orbit(o.rep, &basis) else {
            continue;
        };
        let t = InvariantVector {
            orbit: i,
            rep: o.rep,
            terms,
        };
        if let Some(g) = t.to_vector().first_moved_by(&gens) {
            return Err(InvariantError::NotInvariant { generator: g });
        }
        o.flags |= FLAG_INVARIANT;
        invariants.push(t);
    }
    Ok(InvarianceOutcome {
        invariants,
        approximate: false,
    })
}

/// Independent test: the orbit of `rep` carries an invariant iff every
/// lifted stabilizer element acts on `a_I 1_X` by `1`.
pub fn stabilizer_character_trivial(group: &MonomialGroup, rep: u32) -> bool {
    group.sign_group().fixes_wedge(rep)
        && group.transversal().iter().all(|l| {
            let (image, phase) = l.apply_wedge(rep);
            image != rep || phase == Phase::ONE
        })
}

/// `ν = 1_X + a_Δ 1_X`.
pub fn build_nu() -> WedgeVector {
    WedgeVector::from_terms([(0, Gaussian::ONE), (FULL_MASK, Gaussian::ONE)])
}

/// `ν` is fixed by every generator of `group`.
pub fn check_nu_invariance(group: &MonomialGroup) -> Result<(), InvariantError> {
    match build_nu().first_moved_by(&group.generators()) {
        Some(g) => Err(InvariantError::NotInvariant { generator: g }),
        None => Ok(()),
    }
}

/// Complement pairs among the invariants, `(first, partner)` as indices
/// into `invariants`, ordered by the first member's orbit.
pub fn complement_pairs(
    invariants: &[InvariantVector],
    orbits: &[OrbitRecord],
) -> Result<Vec<(usize, usize)>, InvariantError> {
    let by_orbit: HashMap<usize, usize> = invariants.iter().enumerate().map(|(i, t)| (t.orbit, i)).collect();
    let mut pairs = Vec::new();
    for (i, t) in invariants.iter().enumerate() {
        let partner_orbit = orbits[t.orbit]
            .complement
            .ok_or_else(|| InvariantError::Unpaired(format!("orbit {} has no complement record", t.orbit)))?;
        let &j = by_orbit
            .get(&partner_orbit)
            .ok_or_else(|| InvariantError::Unpaired(format!("complement of orbit {} carries no invariant", t.orbit)))?;
        if j == i {
            return Err(InvariantError::Unpaired(format!("orbit {} is self-complementary", t.orbit)));
        }
        if i < j {
            pairs.push((i, j));
        }
    }
    Ok(pairs)
}

/// `ϱ = Σ r_i t_i` where pair `j` carries `r` on its first member and `r̄`
/// on the complementary one.
pub fn build_rho(
    invariants: &[InvariantVector],
    orbits: &[OrbitRecord],
    coefficients: &[Gaussian],
) -> Result<WedgeVector, InvariantError> {
    let pairs = complement_pairs(invariants, orbits)?;
    if coefficients.len() != pairs.len() {
        return Err(InvariantError::CoefficientCountMismatch {
            expected: pairs.len(),
            found: coefficients.len(),
        });
    }
    let mut rho = WedgeVector::zero();
    for (&(i, j), &r) in pairs.iter().zip(coefficients) {
        if r.is_zero() {
            continue;
        }
        for (t, c) in [(&invariants[i], r), (&invariants[j], r.conj())] {
            for &(m, p) in &t.terms {
                rho.add_term(m, Gaussian::from(p) * c);
            }
        }
    }
    Ok(rho)
}

/// Parse a coefficient file: one `re im` pair of integers per line. Blank
/// lines and `#` comments are skipped.
pub fn parse_rho_coefficients(text: &str) -> Result<Vec<Gaussian>, InvariantError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace().map(str::parse::<i64>);
        match (parts.next(), parts.next(), parts.next()) {
            (Some(Ok(re)), Some(Ok(im)), None) => out.push(Gaussian::new(re, im)),
            _ => return Err(InvariantError::CoefficientParse { line: n + 1 }),
        }
    }
    if out.len() != RHO_SLOTS {
        return Err(InvariantError::CoefficientCountMismatch {
            expected: RHO_SLOTS,
            found: out.len(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_arithmetic() {
        let i = Gaussian::new(0, 1);
        assert_eq!(i * i, Gaussian::new(-1, 0));
        assert_eq!(Gaussian::new(2, 3).conj(), Gaussian::new(2, -3));
        assert_eq!(Gaussian::from(Phase(3)), Gaussian::new(0, -1));
        assert_eq!(Gaussian::new(1, -2).to_string(), "1-2i");
    }

    #[test]
    fn wedge_vector_drops_zeros() {
        let mut v = WedgeVector::from_terms([(3, Gaussian::ONE)]);
        v.add_term(3, -Gaussian::ONE);
        assert!(v.is_empty());
    }

    #[test]
    fn fixed_check_agrees_with_application() {
        let swap = MonomialOperator::permutation(Perm28::from_images(std::array::from_fn(|i| match i {
            0 => 1,
            1 => 0,
            _ => i as u8,
        })));
        let v = WedgeVector::from_terms([(0b01, Gaussian::ONE), (0b10, Gaussian::ONE)]);
        assert!(v.is_fixed_by(&swap));
        assert_eq!(v.apply(&swap), v);
        let w = WedgeVector::from_terms([(0b01, Gaussian::ONE), (0b10, -Gaussian::ONE)]);
        assert!(!w.is_fixed_by(&swap));
        // a_0 a_1 picks up the transposition sign
        let x = WedgeVector::from_terms([(0b11, Gaussian::ONE)]);
        assert!(!x.is_fixed_by(&swap));
        assert_eq!(x.apply(&swap), WedgeVector::from_terms([(0b11, -Gaussian::ONE)]));
    }

    #[test]
    fn nu_fixed_by_identity_and_sign_changes() {
        let nu = build_nu();
        assert_eq!(nu.apply(&MonomialOperator::identity()), nu);
        let dozen = 0b1111_1111_1111u32;
        assert_eq!(nu.apply(&MonomialOperator::sign_change(dozen)), nu);
        assert_ne!(nu.apply(&MonomialOperator::sign_change(1)), nu);
    }

    #[test]
    fn coefficient_file_parsing() {
        let good: String = (0..RHO_SLOTS).map(|i| format!("{i} -{i}\n")).collect();
        let c = parse_rho_coefficients(&format!("# header\n{good}\n")).unwrap();
        assert_eq!(c[5], Gaussian::new(5, -5));
        assert_eq!(
            parse_rho_coefficients("1 2\n"),
            Err(InvariantError::CoefficientCountMismatch { expected: RHO_SLOTS, found: 1 })
        );
        assert_eq!(
            parse_rho_coefficients("1 2 3\n"),
            Err(InvariantError::CoefficientParse { line: 1 })
        );
        assert_eq!(
            parse_rho_coefficients("x 2\n"),
            Err(InvariantError::CoefficientParse { line: 1 })
        );
    }
}
