// Copyright 2026 The cooccur Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Exact comparisons between integer ratios and user-facing thresholds.
//!
//! A threshold such as `0.1` is read as the decimal it prints as (its
//! shortest round-trip representation), i.e. `1/10`, not the nearby binary
//! value. Comparisons then reduce to 128-bit integer cross-multiplication.

/// `digits / 10^scale`, the shortest decimal form of a non-negative `f64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Decimal {
    digits: u64,
    scale: u32,
}

impl Decimal {
    fn of(t: f64) -> Self {
        assert!(t.is_finite() && t >= 0.0, "threshold {t} must be finite and non-negative");
        // `{:e}` prints the shortest round-trip digits, e.g. "3.3333e-1".
        let repr = format!("{t:e}");
        let (mantissa, exp) = repr.split_once('e').expect("exponent form");
        let exp: i32 = exp.parse().expect("integer exponent");
        let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        let digits: u64 = format!("{int}{frac}").parse().expect("at most 17 digits");
        let scale = frac.len() as i32 - exp;
        assert!(scale >= 0, "threshold {t} above the supported range");
        Decimal {
            digits,
            scale: scale as u32,
        }
    }

    /// `x * 10^scale`, or `None` on u128 overflow.
    fn scale_up(&self, x: u64) -> Option<u128> {
        10u128
            .checked_pow(self.scale)
            .and_then(|p| p.checked_mul(x as u128))
    }
}

/// Returns `num / den >= t`, exactly. `t` must lie in `[0, 1]` and `den`
/// must be positive.
pub fn ratio_at_least(num: u64, den: u64, t: f64) -> bool {
    assert!(den > 0, "ratio_at_least: zero denominator");
    assert!((0.0..=1.0).contains(&t), "ratio_at_least: threshold {t} outside [0,1]");
    let d = Decimal::of(t);
    if num == 0 {
        return d.digits == 0;
    }
    // digits < 10^17 and den < 2^64, so the right side fits.
    let rhs = d.digits as u128 * den as u128;
    match d.scale_up(num) {
        Some(lhs) => lhs >= rhs,
        // lhs >= 2^128 > rhs
        None => true,
    }
}

/// `ceil(fraction * n)`, exactly, clamped to at least 1. `fraction` must
/// lie in `(0, 1]`.
pub fn ceil_fraction(fraction: f64, n: u64) -> u64 {
    assert!(
        fraction > 0.0 && fraction <= 1.0,
        "ceil_fraction: fraction {fraction} outside (0,1]"
    );
    let d = Decimal::of(fraction);
    let product = d.digits as u128 * n as u128;
    let ceil = match 10u128.checked_pow(d.scale) {
        Some(p) => product.div_ceil(p),
        // product < 2^121 < 10^scale
        None => u128::from(product > 0),
    };
    (ceil as u64).max(1)
}

/// Rounds `num / den * scale` to the nearest integer, ties to even.
pub fn round_half_even_scaled(num: u64, den: u64, scale: u64) -> u64 {
    assert!(den > 0, "round_half_even_scaled: zero denominator");
    let scaled = num as u128 * scale as u128;
    let den = den as u128;
    let q = scaled / den;
    let r = scaled % den;
    let up = match (2 * r).cmp(&den) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Equal => q % 2 == 1,
        std::cmp::Ordering::Less => false,
    };
    (if up { q + 1 } else { q }) as u64
}

/// Formats `num / den` with four decimals, rounding half to even.
pub fn format_ratio4(num: u64, den: u64) -> String {
    let q = round_half_even_scaled(num, den, 10_000);
    format!("{}.{:04}", q / 10_000, q % 10_000)
}

/// Formats a ratio in `[0, 1]` already scaled by 10^4.
pub(crate) fn format_scaled4(q: u64) -> String {
    format!("{}.{:04}", q / 10_000, q % 10_000)
}
