//! Exponents the conjectured classification sets aside.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::digits::digit_sum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExceptionLabel {
    /// `d ≡ 1 (mod b-1)`.
    CongruenceOne,
    /// `d ≡ ⌊(b+1)/2⌋ (mod b-1)`.
    CongruenceHalf,
    /// `s_b(d) = 2`.
    DigitSumTwo,
    /// `b = 5`, `n` odd, `d ≡ 5^j (5^i + 1)/3 (mod q-1)` with `i` odd.
    FiveFamily { i: u32, j: u32 },
    /// `b = 9`, `d ≡ 3·9^i (mod q-1)`.
    Base9Family { i: u32 },
}

impl ExceptionLabel {
    /// Labels excluded from the scan up front. The base-9 family is only
    /// attached to failures, since those exponents are real counterexamples.
    pub fn excluded(&self) -> bool {
        !matches!(self, ExceptionLabel::Base9Family { .. })
    }
}

impl fmt::Display for ExceptionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExceptionLabel::CongruenceOne => f.write_str("congruence-one"),
            ExceptionLabel::CongruenceHalf => f.write_str("congruence-half"),
            ExceptionLabel::DigitSumTwo => f.write_str("digit-sum-two"),
            ExceptionLabel::FiveFamily { i, j } => write!(f, "five-family(i={i},j={j})"),
            ExceptionLabel::Base9Family { i } => write!(f, "base9-family(i={i})"),
        }
    }
}

fn reduce(x: u128, m: u128) -> u128 {
    let r = x % m;
    if r == 0 {
        m
    } else {
        r
    }
}

/// First matching label for `d ∈ [1, q-1]`, `q = b^n`, in the order
/// congruence-one, congruence-half, digit-sum-two, five-family,
/// base9-family.
pub fn exceptions_for(b: u64, n: u32, d: u64) -> Option<ExceptionLabel> {
    if b > 2 {
        let r = d % (b - 1);
        if r == 1 % (b - 1) {
            return Some(ExceptionLabel::CongruenceOne);
        }
        if r == ((b + 1) / 2) % (b - 1) {
            return Some(ExceptionLabel::CongruenceHalf);
        }
    }
    if digit_sum(d, b) == 2 {
        return Some(ExceptionLabel::DigitSumTwo);
    }
    let m = (b as u128).pow(n) - 1;
    let d = d as u128;
    if b == 5 && n % 2 == 1 {
        for i in (1..=n).step_by(2) {
            let base = (5u128.pow(i) + 1) / 3;
            if base > m {
                break;
            }
            let mut x = reduce(base, m);
            for j in 0..n {
                if x == d {
                    return Some(ExceptionLabel::FiveFamily { i, j });
                }
                x = reduce(x * 5, m);
            }
        }
    }
    if b == 9 {
        let mut x = reduce(3, m);
        for i in 0..n {
            if x == d {
                return Some(ExceptionLabel::Base9Family { i });
            }
            x = reduce(x * 9, m);
        }
    }
    None
}
