//! Exact two-variable series `Σ c(m, d) p^m q^{d/24}` with big-integer
//! coefficients, truncated in the `q`-degree.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// A series in `p^{±1}` and `q^{1/24}`. Exponents of `q` are stored in
/// units of `1/24`; terms with exponent above `max_deg24` are dropped.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedSeries {
    terms: BTreeMap<(i64, i64), BigInt>,
    max_deg24: i64,
}

impl GradedSeries {
    pub fn zero(max_deg24: i64) -> Self {
        GradedSeries {
            terms: BTreeMap::new(),
            max_deg24,
        }
    }

    pub fn monomial(charge: i64, deg24: i64, coeff: impl Into<BigInt>, max_deg24: i64) -> Self {
        let mut s = Self::zero(max_deg24);
        s.add_term(charge, deg24, coeff.into());
        s
    }

    pub fn one(max_deg24: i64) -> Self {
        Self::monomial(0, 0, 1, max_deg24)
    }

    pub fn max_deg24(&self) -> i64 {
        self.max_deg24
    }

    pub fn add_term(&mut self, charge: i64, deg24: i64, c: BigInt) {
        if deg24 > self.max_deg24 || c.is_zero() {
            return;
        }
        let e = self.terms.entry((charge, deg24)).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(charge, deg24));
        }
    }

    pub fn coefficient(&self, charge: i64, deg24: i64) -> BigInt {
        self.terms.get(&(charge, deg24)).cloned().unwrap_or_default()
    }

    /// Nonzero terms keyed by `(charge, deg24)`.
    pub fn terms(&self) -> &BTreeMap<(i64, i64), BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_deg24(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.1).min()
    }

    pub fn truncate(&self, max_deg24: i64) -> Self {
        let mut s = Self::zero(max_deg24.min(self.max_deg24));
        for (&(m, d), c) in &self.terms {
            s.add_term(m, d, c.clone());
        }
        s
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = self.truncate(self.max_deg24.min(other.max_deg24));
        for (&(m, d), c) in &other.terms {
            s.add_term(m, d, c.clone());
        }
        s
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut s = Self::zero(self.max_deg24);
        for (&(m, d), c) in &self.terms {
            s.add_term(m, d, c * k);
        }
        s
    }

    /// Multiply by `p^charge q^{deg24/24}`; the bound moves with the shift.
    pub fn shift(&self, charge: i64, deg24: i64) -> Self {
        GradedSeries {
            terms: self.terms.iter().map(|(&(m, d), c)| ((m + charge, d + deg24), c.clone())).collect(),
            max_deg24: self.max_deg24 + deg24,
        }
    }

    /// `p ↦ -p`.
    pub fn negate_p(&self) -> Self {
        GradedSeries {
            terms: self
                .terms
                .iter()
                .map(|(&(m, d), c)| ((m, d), if m % 2 == 0 { c.clone() } else { -c }))
                .collect(),
            max_deg24: self.max_deg24,
        }
    }

    /// Product truncated at `max_deg24`. Both factors must be bounded
    /// below so that truncating them first loses nothing.
    pub fn mul(&self, other: &Self, max_deg24: i64) -> Self {
        let bound = max_deg24.min(self.max_deg24 + other.min_deg24().unwrap_or(0))
            .min(other.max_deg24 + self.min_deg24().unwrap_or(0));
        let mut s = Self::zero(bound);
        for (&(m1, d1), c1) in &self.terms {
            for (&(m2, d2), c2) in &other.terms {
                if d1 + d2 <= bound {
                    s.add_term(m1 + m2, d1 + d2, c1 * c2);
                }
            }
        }
        s
    }

    /// `self^n` by binary powering.
    pub fn pow(&self, n: u32, max_deg24: i64) -> Self {
        let mut result = Self::one(max_deg24);
        let mut base = self.truncate(max_deg24);
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, max_deg24);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, max_deg24);
            }
        }
        result
    }

    /// Divide every coefficient by 2, or report the first odd one.
    pub fn halve(&self) -> Result<Self, (i64, i64)> {
        let two = BigInt::from(2);
        let mut s = Self::zero(self.max_deg24);
        for (&(m, d), c) in &self.terms {
            if (c % &two).is_zero() {
                s.add_term(m, d, c / &two);
            } else {
                return Err((m, d));
            }
        }
        Ok(s)
    }

    /// `Σ_m c(m, d)` at a fixed degree.
    pub fn degree_total(&self, deg24: i64) -> BigInt {
        self.terms
            .iter()
            .filter(|(k, _)| k.1 == deg24)
            .map(|(_, c)| c.clone())
            .sum()
    }

    pub fn all_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Coefficients of `p^m` and `p^{-m}` agree.
    pub fn is_charge_symmetric(&self) -> bool {
        self.terms.iter().all(|(&(m, d), c)| self.coefficient(-m, d) == *c)
    }

    /// Every odd-charge coefficient vanishes.
    pub fn odd_charges_vanish(&self) -> bool {
        self.terms.keys().all(|&(m, _)| m % 2 == 0)
    }

    /// First `(charge, deg24)` where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<(i64, i64)> {
        self.terms
            .keys()
            .chain(other.terms.keys())
            .filter(|k| k.1 <= self.max_deg24.min(other.max_deg24))
            .find(|&&(m, d)| self.coefficient(m, d) != other.coefficient(m, d))
            .copied()
    }
}

impl fmt::Debug for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().map(|(k, v)| (k, v.to_string())))
            .finish()
    }
}

/// Serialize a big integer as a decimal string.
pub fn bigint_str<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// The four theta kernels `Σ_m (±1)^m p^m q^{m²/2 (+ m/2)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaKernel {
    Plain,
    SignAlternating,
    HalfShift,
    HalfShiftSignAlternating,
}

impl ThetaKernel {
    pub const ALL: [ThetaKernel; 4] = [
        ThetaKernel::Plain,
        ThetaKernel::SignAlternating,
        ThetaKernel::HalfShift,
        ThetaKernel::HalfShiftSignAlternating,
    ];

    pub fn alternates(self) -> bool {
        matches!(self, ThetaKernel::SignAlternating | ThetaKernel::HalfShiftSignAlternating)
    }

    pub fn shifted(self) -> bool {
        matches!(self, ThetaKernel::HalfShift | ThetaKernel::HalfShiftSignAlternating)
    }

    /// `q`-exponent of term `m`, in units of `1/24`.
    pub fn deg24(self, m: i64) -> i64 {
        12 * m * m + if self.shifted() { 12 * m } else { 0 }
    }

    pub fn series(self, max_deg24: i64) -> GradedSeries {
        let mut s = GradedSeries::zero(max_deg24);
        let mut m = 0i64;
        // deg24 grows with |m| on both sides; stop once both exceed the bound
        while self.deg24(m) <= max_deg24 || self.deg24(-m) <= max_deg24 {
            for k in if m == 0 { vec![0] } else { vec![m, -m] } {
                let sign = if self.alternates() && k % 2 != 0 { -1 } else { 1 };
                s.add_term(k, self.deg24(k), BigInt::from(sign));
            }
            m += 1;
        }
        s
    }
}

/// `(Σ_m kernel term)^n`.
pub fn theta_pow(kernel: ThetaKernel, n: u32, max_deg24: i64) -> GradedSeries {
    kernel.series(max_deg24).pow(n, max_deg24)
}

/// `q^{-n/24} Π_{m ≥ 1} (1 - q^m)^{-n}`, charge 0.
pub fn eta_inverse_pow(n: u32, max_deg24: i64) -> GradedSeries {
    let shift = n as i64;
    let top = if max_deg24 + shift < 0 { 0 } else { ((max_deg24 + shift) / 24) as usize };
    let mut coeffs = vec![BigInt::zero(); top + 1];
    coeffs[0] = BigInt::one();
    for part in 1..=top {
        for _ in 0..n {
            for k in part..=top {
                let add = coeffs[k - part].clone();
                coeffs[k] += add;
            }
        }
    }
    let mut s = GradedSeries::zero(max_deg24);
    for (k, c) in coeffs.into_iter().enumerate() {
        s.add_term(0, 24 * k as i64 - shift, c);
    }
    s
}

/// `Π_{k} (1 + p^charge q^{deg24(k)/24})^n`: each factor is expanded with
/// binomial coefficients.
pub fn fermionic_product(
    factors: impl IntoIterator<Item = (i64, i64)>,
    n: u32,
    max_deg24: i64,
) -> GradedSeries {
    let mut s = GradedSeries::one(max_deg24);
    for (charge, deg24) in factors {
        let mut f = GradedSeries::zero(max_deg24);
        let mut binom = BigInt::one();
        for j in 0..=n as i64 {
            f.add_term(charge * j, deg24 * j, binom.clone());
            binom = binom * (n as i64 - j) / (j + 1);
        }
        s = s.mul(&f, max_deg24);
    }
    s
}
