//! The two-variable character `tr p^{J(0)} q^{L(0) - c/24}` at `c = 28`,
//! its golden table and the Rudvalis decompositions.

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::series::{eta_inverse_pow, fermionic_product, theta_pow, GradedSeries, ThetaKernel};

/// Number of charged fermion pairs, and the central charge.
pub const RANK: u32 = 28;

/// Largest supported truncation, in half-units of degree.
pub const MAX_HALF_DEGREE: u32 = 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterError {
    #[error("odd coefficient at charge {charge}, degree {degree} before halving")]
    NonIntegralHalving { charge: i64, degree: String },
    #[error("sum and product forms differ at charge {charge}, degree {degree}")]
    CrossCheckMismatch { charge: i64, degree: String },
    #[error("maximum degree {0}/2 is outside 0..={MAX_HALF_DEGREE}/2")]
    BadBound(u32),
}

/// `q`-exponent (in 1/24) of the degree-`h/2` row: `q^{h/2 - 28/24}`.
pub fn row_deg24(half_degree: u32) -> i64 {
    12 * half_degree as i64 - RANK as i64
}

/// Half-degree of `"3"`, `"7/2"` or `"3.5"`.
pub fn parse_half_degree(s: &str) -> Option<u32> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        return match den.trim() {
            "2" => num.trim().parse().ok(),
            "1" => num.trim().parse::<u32>().ok()?.checked_mul(2),
            _ => None,
        };
    }
    if let Some(whole) = s.strip_suffix(".5") {
        return whole.parse::<u32>().ok()?.checked_mul(2)?.checked_add(1);
    }
    s.strip_suffix(".0").unwrap_or(s).parse::<u32>().ok()?.checked_mul(2)
}

/// `"7/2"` style label of a half-integer degree.
pub fn degree_label(half_degree: u32) -> String {
    if half_degree % 2 == 0 {
        (half_degree / 2).to_string()
    } else {
        format!("{half_degree}/2")
    }
}

fn label_of_deg24(deg24: i64) -> String {
    let shifted = deg24 + RANK as i64;
    if shifted % 12 == 0 && shifted >= 0 {
        degree_label((shifted / 12) as u32)
    } else {
        format!("({deg24}/24 + 28/24)")
    }
}

fn check_bound(max_half_degree: u32) -> Result<i64, CharacterError> {
    if max_half_degree > MAX_HALF_DEGREE {
        return Err(CharacterError::BadBound(max_half_degree));
    }
    Ok(row_deg24(max_half_degree))
}

fn halve(s: &GradedSeries) -> Result<GradedSeries, CharacterError> {
    s.halve().map_err(|(charge, d)| CharacterError::NonIntegralHalving {
        charge,
        degree: label_of_deg24(d),
    })
}

/// `θ(kernel)^28 / η^28` up to the bound.
fn theta_over_eta(kernel: ThetaKernel, bound: i64) -> GradedSeries {
    let eta = eta_inverse_pow(RANK, bound);
    theta_pow(kernel, RANK, bound + RANK as i64).mul(&eta, bound)
}

/// The even-charge (Neveu-Schwarz) half:
/// `½ (θ(z)^28 + θ(z + 1/2)^28) / η^28`.
pub fn ns_part(max_half_degree: u32) -> Result<GradedSeries, CharacterError> {
    let bound = check_bound(max_half_degree)?;
    let sum = theta_over_eta(ThetaKernel::Plain, bound)
        .add(&theta_over_eta(ThetaKernel::SignAlternating, bound));
    halve(&sum)
}

/// The Ramond half:
/// `½ p^14 q^{7/2} (θ(z + τ/2)^28 + θ(z + τ/2 + 1/2)^28) / η^28`.
pub fn ramond_part(max_half_degree: u32) -> Result<GradedSeries, CharacterError> {
    let bound = check_bound(max_half_degree)?;
    let inner = bound - 84;
    let sum = theta_over_eta(ThetaKernel::HalfShift, inner)
        .add(&theta_over_eta(ThetaKernel::HalfShiftSignAlternating, inner));
    Ok(halve(&sum)?.shift(14, 84))
}

/// The character up to degree `max_half_degree / 2`.
pub fn character(max_half_degree: u32) -> Result<GradedSeries, CharacterError> {
    Ok(ns_part(max_half_degree)?.add(&ramond_part(max_half_degree)?))
}

/// The same character from the triple-product forms:
/// `θ(z)/η = q^{-1/24} Π_k (1 + p q^{k-1/2})(1 + p^{-1} q^{k-1/2})` and
/// `θ(z + τ/2)/η = q^{-1/24} (1 + p^{-1}) Π_k (1 + p q^k)(1 + p^{-1} q^k)`.
pub fn character_by_product(max_half_degree: u32) -> Result<GradedSeries, CharacterError> {
    let bound = check_bound(max_half_degree)?;
    let top = (bound + RANK as i64) / 12 + 1;
    let ns_factors = (1..=top).step_by(2).flat_map(|h| [(1, 12 * h), (-1, 12 * h)]);
    let ns = fermionic_product(ns_factors, RANK, bound + RANK as i64).shift(0, -(RANK as i64));
    let ns_sum = ns.add(&ns.negate_p());

    let inner = bound - 84;
    let r_factors = std::iter::once((-1, 0))
        .chain((2..=top).step_by(2).flat_map(|h| [(1, 12 * h), (-1, 12 * h)]));
    let r = fermionic_product(r_factors, RANK, inner + RANK as i64).shift(0, -(RANK as i64));
    let r_sum = r.add(&r.negate_p());
    Ok(halve(&ns_sum)?.add(&halve(&r_sum)?.shift(14, 84)))
}

/// Compare the two forms coefficientwise.
pub fn cross_check(max_half_degree: u32) -> Result<GradedSeries, CharacterError> {
    let sum = character(max_half_degree)?;
    let product = character_by_product(max_half_degree)?;
    if let Some((charge, d)) = sum.first_difference(&product) {
        return Err(CharacterError::CrossCheckMismatch {
            charge,
            degree: label_of_deg24(d),
        });
    }
    Ok(sum)
}

/// Coefficient at degree `h/2` and charge `m`.
pub fn entry(series: &GradedSeries, half_degree: u32, charge: i64) -> BigInt {
    series.coefficient(charge, row_deg24(half_degree))
}

/// Published low-order table: `(2·degree, charge, coefficient)` for every
/// nonzero entry with degree ≤ 11/2 and charge in 0..=8.
pub const GOLDEN_CELLS: [(u32, i64, u64); 35] = [
    (0, 0, 1),
    (2, 0, 784),
    (2, 2, 378),
    (4, 0, 144452),
    (4, 2, 92512),
    (4, 4, 20475),
    (6, 0, 11327232),
    (6, 2, 8128792),
    (6, 4, 2843568),
    (6, 6, 376740),
    (7, 0, 40116600),
    (7, 2, 30421755),
    (7, 4, 13123110),
    (7, 6, 3108105),
    (7, 8, 376740),
    (8, 0, 490068257),
    (8, 2, 373673216),
    (8, 4, 161446572),
    (8, 6, 35904960),
    (8, 8, 3108105),
    (9, 0, 2096760960),
    (9, 2, 1649657520),
    (9, 4, 794670240),
    (9, 6, 226546320),
    (9, 8, 35904960),
    (10, 0, 13668945136),
    (10, 2, 10818453324),
    (10, 4, 5284484352),
    (10, 6, 1513872360),
    (10, 8, 226546320),
    (11, 0, 56547022140),
    (11, 2, 45624923820),
    (11, 4, 23757475560),
    (11, 6, 7766243940),
    (11, 8, 1513872360),
];

/// Largest degree covered by the table, in half-units.
pub const GOLDEN_MAX_HALF_DEGREE: u32 = 11;

/// One cell of the table comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableCell {
    pub degree: String,
    pub charge: i64,
    #[serde(serialize_with = "crate::series::bigint_str")]
    pub expected: BigInt,
    #[serde(serialize_with = "crate::series::bigint_str")]
    pub computed: BigInt,
}

impl TableCell {
    pub fn matches(&self) -> bool {
        self.expected == self.computed
    }
}

/// Compare every published cell, and check that unpublished cells in the
/// window (degree ≤ 11/2, charge 0..=8) vanish.
pub fn compare_golden_cells(series: &GradedSeries) -> Vec<TableCell> {
    let mut out = Vec::new();
    for h in 0..=GOLDEN_MAX_HALF_DEGREE {
        for charge in 0..=8i64 {
            let expected = GOLDEN_CELLS
                .iter()
                .find(|e| e.0 == h && e.1 == charge)
                .map_or(0, |e| e.2);
            let computed = entry(series, h, charge);
            if expected != 0 || computed != BigInt::from(0) {
                out.push(TableCell {
                    degree: degree_label(h),
                    charge,
                    expected: expected.into(),
                    computed,
                });
            }
        }
    }
    out
}

/// Degrees of the Rudvalis irreducibles used below.
pub const RU_DEGREES: [u64; 11] = [
    1, 378, 406, 783, 20475, 27405, 65975, 75400, 76125, 91350, 102400,
];

/// A dimension written as a sum of irreducible degrees with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub dimension: u64,
    pub parts: Vec<(u64, u64)>,
    /// Where the dimension sits in the character.
    pub half_degree: u32,
    pub charge: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionCheck {
    pub decomposition: Decomposition,
    pub parts_are_irreducible: bool,
    pub sum_matches: bool,
    #[serde(serialize_with = "crate::series::bigint_str")]
    pub entry: BigInt,
    pub entry_matches: bool,
}

impl DecompositionCheck {
    pub fn passed(&self) -> bool {
        self.parts_are_irreducible && self.sum_matches && self.entry_matches
    }
}

/// The six displayed decompositions.
pub fn decompositions() -> Vec<Decomposition> {
    let d = |dimension, parts: &[(u64, u64)], half_degree, charge| Decomposition {
        dimension,
        parts: parts.to_vec(),
        half_degree,
        charge,
    };
    vec![
        d(378, &[(1, 378)], 2, 2),
        d(784, &[(1, 1), (1, 783)], 2, 0),
        d(20475, &[(1, 20475)], 4, 4),
        d(92512, &[(2, 378), (1, 406), (1, 91350)], 4, 2),
        d(144452, &[(3, 1), (3, 783), (1, 65975), (1, 76125)], 4, 0),
        d(376740, &[(1, 27405), (1, 65975), (1, 75400), (1, 102400)], 6, 6),
    ]
}

pub fn verify_decompositions(series: &GradedSeries) -> Vec<DecompositionCheck> {
    decompositions()
        .into_iter()
        .map(|d| {
            let parts_are_irreducible = d.parts.iter().all(|(_, deg)| RU_DEGREES.contains(deg));
            let sum: u64 = d.parts.iter().map(|(m, deg)| m * deg).sum();
            let entry = entry(series, d.half_degree, d.charge);
            DecompositionCheck {
                parts_are_irreducible,
                sum_matches: sum == d.dimension,
                entry_matches: entry == BigInt::from(d.dimension),
                entry,
                decomposition: d,
            }
        })
        .collect()
}

/// Output layout for the character table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Table,
    Json,
    Csv,
}

/// Rows are degrees `0, 1/2, …`, columns the charges `0, 2, …, max_charge`.
pub fn render(series: &GradedSeries, max_half_degree: u32, max_charge: i64, format: TableFormat) -> String {
    let charges: Vec<i64> = (0..=max_charge).step_by(2).collect();
    let cell = |h: u32, m: i64| entry(series, h, m);
    match format {
        TableFormat::Table => {
            let mut out = String::new();
            let width = 14;
            out.push_str(&format!("{:>6} |", ""));
            for m in &charges {
                out.push_str(&format!(" {:>width$}", m));
            }
            out.push('\n');
            out.push_str(&format!("{}\n", "-".repeat(8 + (width + 1) * charges.len())));
            for h in 0..=max_half_degree {
                out.push_str(&format!("{:>6} |", degree_label(h)));
                for &m in &charges {
                    let c = cell(h, m);
                    let text = if c == BigInt::from(0) { String::new() } else { c.to_string() };
                    out.push_str(&format!(" {:>width$}", text));
                }
                out.push('\n');
            }
            out
        }
        TableFormat::Csv => {
            let mut out = String::from("degree,charge,coefficient\n");
            for h in 0..=max_half_degree {
                for &m in &charges {
                    out.push_str(&format!("{},{},{}\n", degree_label(h), m, cell(h, m)));
                }
            }
            out
        }
        TableFormat::Json => {
            let rows: Vec<serde_json::Value> = (0..=max_half_degree)
                .map(|h| {
                    let coeffs: serde_json::Map<String, serde_json::Value> = charges
                        .iter()
                        .map(|&m| (m.to_string(), serde_json::Value::String(cell(h, m).to_string())))
                        .collect();
                    serde_json::json!({ "degree": degree_label(h), "coefficients": coeffs })
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&serde_json::json!({ "rows": rows }))
                .expect("json values serialize");
            s.push('\n');
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_parsing() {
        assert_eq!(parse_half_degree("6"), Some(12));
        assert_eq!(parse_half_degree("11/2"), Some(11));
        assert_eq!(parse_half_degree("3.5"), Some(7));
        assert_eq!(parse_half_degree("4.0"), Some(8));
        assert_eq!(parse_half_degree("1/3"), None);
        assert_eq!(parse_half_degree("-1"), None);
    }

    #[test]
    fn low_rows() {
        let s = character(4).unwrap();
        assert_eq!(entry(&s, 0, 0), BigInt::from(1));
        assert_eq!(entry(&s, 2, 0), BigInt::from(784));
        assert_eq!(entry(&s, 2, 2), BigInt::from(378));
        for m in -8..=8 {
            assert_eq!(entry(&s, 1, m), BigInt::from(0));
            assert_eq!(entry(&s, 3, m), BigInt::from(0));
        }
    }

    #[test]
    fn bound_is_enforced() {
        assert_eq!(character(MAX_HALF_DEGREE + 1), Err(CharacterError::BadBound(MAX_HALF_DEGREE + 1)));
    }

    #[test]
    fn product_form_agrees_at_small_bound() {
        cross_check(8).unwrap();
    }

    #[test]
    fn render_layouts() {
        let s = character(2).unwrap();
        let csv = render(&s, 2, 2, TableFormat::Csv);
        assert!(csv.contains("1,2,378\n"));
        let json: serde_json::Value = serde_json::from_str(&render(&s, 2, 2, TableFormat::Json)).unwrap();
        assert_eq!(json["rows"][2]["coefficients"]["0"], "784");
        assert!(render(&s, 2, 2, TableFormat::Table).contains("784"));
    }
}
