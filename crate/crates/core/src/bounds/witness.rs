//! Witnesses `e` with `s_b(e ⋆ d) - s_b(e) > n(b-1)/2`, which rule out
//! planarity of `x^d`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::checked_pow;
use crate::digits::{digit_sum, star_unchecked};
use crate::error::{Error, Result};

/// Largest `q` accepted by the search; products of exponents stay in `u128`.
pub const MAX_SEARCH_Q: u64 = 1 << 62;

/// Candidate budget of [`SearchStrategy::Budgeted`] when none is given.
pub const DEFAULT_BUDGET: u64 = 1 << 16;

/// The bound `n(b-1)/2`, kept exact as its double.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bound {
    twice: u64,
}

impl Bound {
    pub fn new(b: u64, n: u32) -> Self {
        Bound { twice: n as u64 * (b - 1) }
    }

    pub fn twice(&self) -> u64 {
        self.twice
    }

    /// Whether `lhs` lies strictly above the bound.
    pub fn exceeded_by(&self, lhs: i64) -> bool {
        2 * lhs > self.twice as i64
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let twice = match s.strip_suffix("/2") {
            Some(num) => num.parse::<u64>().map_err(serde::de::Error::custom)?,
            None => 2 * s.parse::<u64>().map_err(serde::de::Error::custom)?,
        };
        Ok(Bound { twice })
    }
}

/// How `e` was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// `e = 1`.
    Unit,
    /// `e = ⌊(b-1)/d⌋` over a prime field.
    PrimeField,
    /// `e = h·b^m + h + 1`.
    TwoBlock,
    /// `e = (b-1+h)·b^m + h + 1`.
    ShiftedTwoBlock,
    /// `e = 1 + b + … + b^{n-2}`.
    Repunit,
    /// Ascending scan over `e`.
    Exhaustive,
    /// An explicit construction for `D(t, u)` exponents.
    Construction,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Strategy::Unit => "unit",
            Strategy::PrimeField => "prime-field",
            Strategy::TwoBlock => "two-block",
            Strategy::ShiftedTwoBlock => "shifted-two-block",
            Strategy::Repunit => "repunit",
            Strategy::Exhaustive => "exhaustive",
            Strategy::Construction => "construction",
        };
        f.write_str(s)
    }
}

/// A certificate that `x^d` is not planar over a field of order `b^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub b: u64,
    pub n: u32,
    pub q: u64,
    pub d: u64,
    pub e: u64,
    pub lhs: i64,
    pub bound: Bound,
    pub strategy: Strategy,
}

fn field_order(b: u64, n: u32) -> Result<u64> {
    if b < 2 {
        return Err(Error::BadBase(b));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    match checked_pow(b, n) {
        Some(q) if q <= MAX_SEARCH_Q && q >= 3 => Ok(q),
        Some(q) if q < 3 => Err(Error::InvalidParameter(format!("q = {q} is too small"))),
        _ => Err(Error::CapExceeded { size: u64::MAX, cap: MAX_SEARCH_Q }),
    }
}

/// `s_b(e ⋆ d) - s_b(e)`.
pub fn margin(b: u64, q: u64, d: u64, e: u64) -> i64 {
    digit_sum(star_unchecked(e, d, q), b) as i64 - digit_sum(e, b) as i64
}

impl Witness {
    /// Builds the witness for `(b, n, d, e)` if `e` actually is one.
    pub fn check(b: u64, n: u32, d: u64, e: u64, strategy: Strategy) -> Result<Option<Witness>> {
        let q = field_order(b, n)?;
        for v in [d, e] {
            if v == 0 || v > q - 1 {
                return Err(Error::ExponentRange { value: v, max: q - 1 });
            }
        }
        let lhs = margin(b, q, d, e);
        let bound = Bound::new(b, n);
        Ok(bound.exceeded_by(lhs).then_some(Witness { b, n, q, d, e, lhs, bound, strategy }))
    }

    /// Recomputes every field from `(b, n, d, e)`.
    pub fn revalidate(&self) -> bool {
        match Witness::check(self.b, self.n, self.d, self.e, self.strategy) {
            Ok(Some(w)) => w == *self,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStrategy {
    /// `e = 1` and the structured families only.
    Heuristic,
    /// Structured families, then `e = 1, 2, …` up to the given count.
    Budgeted(u64),
    /// Structured families, then every `e` up to the cap.
    Exhaustive,
}

impl Default for SearchStrategy {
    fn default() -> Self {
        SearchStrategy::Budgeted(DEFAULT_BUDGET)
    }
}

/// Reduces a positive exponent into `[1, q-1]` keeping its class mod `q-1`.
pub(crate) fn reduce_exponent(e: u128, q: u64) -> u64 {
    let r = (e % (q - 1) as u128) as u64;
    if r == 0 {
        q - 1
    } else {
        r
    }
}

/// The `h` values used by the constructions for `D(t, u)` exponents with
/// `n = 2m`, over every split `r + s = m - 2`.
fn construction_hs(b: u64, m: u32) -> Vec<u128> {
    let bb = b as u128;
    let half = (bb - 1) / 2;
    let pw = |k: u32| bb.pow(k);
    let mut hs = Vec::new();
    for r in 0..=m.saturating_sub(2) {
        let s = m - 2 - r;
        hs.push(pw(r + 1) - 1);
        for j in 1..=s {
            hs.push(pw(r) - 1 + half.saturating_sub(1) * pw(r) + pw(r + j + 1));
        }
        hs.push(pw(r + 1) - 1 - half);
        hs.push(pw(r + 1) - (bb - 1));
        hs.push(1);
        if let Some(h) = (half * pw(r)).checked_sub(bb - 1).filter(|_| r > 0) {
            hs.push(h);
        }
        for z in 1..=s + 1 {
            hs.push((pw(r + 1 + z) - 1) + (pw(r + 1) - 1) - half);
        }
    }
    hs
}

/// Structured candidates that do not depend on `d`, in the order tried.
pub fn family_candidates(b: u64, n: u32) -> Result<Vec<(u64, Strategy)>> {
    let q = field_order(b, n)?;
    let mut out: Vec<(u64, Strategy)> = vec![(1, Strategy::Unit)];
    let push = |e: u64, s: Strategy, out: &mut Vec<(u64, Strategy)>| {
        if !out.iter().any(|&(x, _)| x == e) {
            out.push((e, s));
        }
    };
    if n % 2 == 0 && n >= 4 {
        let m = n / 2;
        let bm = (b as u128).pow(m);
        for h in construction_hs(b, m) {
            if h == 0 {
                continue;
            }
            push(reduce_exponent(h * bm + h + 1, q), Strategy::TwoBlock, &mut out);
            push(reduce_exponent((b as u128 - 1 + h) * bm + h + 1, q), Strategy::ShiftedTwoBlock, &mut out);
        }
    }
    if n >= 2 {
        let e = (0..n - 1).map(|i| b.pow(i)).sum();
        push(e, Strategy::Repunit, &mut out);
    }
    Ok(out)
}

/// Looks for a witness for `x^d` over a field of order `b^n`: `e = 1`,
/// then the structured families, then (budget permitting) ascending `e`.
/// With [`SearchStrategy::Exhaustive`] and no cap, `None` proves that no
/// witness exists.
pub fn witness_search(
    b: u64,
    n: u32,
    d: u64,
    strategy: SearchStrategy,
    e_cap: Option<u64>,
) -> Result<Option<Witness>> {
    let q = field_order(b, n)?;
    if d == 0 || d > q - 1 {
        return Err(Error::ExponentRange { value: d, max: q - 1 });
    }
    let bound = Bound::new(b, n);
    let found = |e: u64, strategy: Strategy| {
        let lhs = margin(b, q, d, e);
        bound.exceeded_by(lhs).then_some(Witness { b, n, q, d, e, lhs, bound, strategy })
    };
    let mut candidates = family_candidates(b, n)?;
    if n == 1 && d < b {
        let e = (b - 1) / d;
        if e >= 1 {
            candidates.insert(1, (e, Strategy::PrimeField));
        }
    }
    for (e, s) in candidates {
        if let Some(w) = found(e, s) {
            return Ok(Some(w));
        }
    }
    let limit = match strategy {
        SearchStrategy::Heuristic => return Ok(None),
        SearchStrategy::Budgeted(budget) => budget.min(q - 1),
        SearchStrategy::Exhaustive => q - 1,
    };
    let limit = e_cap.map_or(limit, |c| c.min(limit));
    let m = q - 1;
    let mut ed = 0u64;
    for e in 1..=limit {
        ed += d % m;
        if ed >= m {
            ed -= m;
        }
        let prod = if ed == 0 { m } else { ed };
        let lhs = digit_sum(prod, b) as i64 - digit_sum(e, b) as i64;
        if bound.exceeded_by(lhs) {
            return Ok(Some(Witness { b, n, q, d, e, lhs, bound, strategy: Strategy::Exhaustive }));
        }
    }
    Ok(None)
}

/// Every `e ∈ [1, q-1]` that witnesses `d`, ascending.
pub fn all_witness_exponents(b: u64, n: u32, d: u64) -> Result<Vec<u64>> {
    let q = field_order(b, n)?;
    if d == 0 || d > q - 1 {
        return Err(Error::ExponentRange { value: d, max: q - 1 });
    }
    let bound = Bound::new(b, n);
    Ok((1..q).filter(|&e| bound.exceeded_by(margin(b, q, d, e))).collect())
}
