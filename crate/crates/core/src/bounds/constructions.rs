//! Explicit witnesses from the proofs, and checks of the statements they
//! rely on.

use serde::Serialize;

use crate::arith::is_prime;
use crate::digits::{cl_triage, d_form, digit_sum, digits_of, CaseLabel};
use crate::error::{Error, Result};
use crate::interp::{compose_adeg_profile, FuncTable};

use super::witness::{reduce_exponent, Bound, Strategy, Witness};

/// Which proof construction to use for a `D(t, u)` exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Power2Variant {
    /// The first construction that applies.
    Auto,
    /// `h = p^{r+1} - 1`; needs `t ∉ {1, p-1}`.
    OuterDigit,
    /// `h` built from the first `u_j ∉ {0, 1, p-2, p-1}`.
    InnerDigit,
    /// `e = (p-1+h)p^m + h + 1` for `t ∈ {1, p-1}` and all `u_j ∈ {0, 1, p-2, p-1}`.
    Remaining,
}

fn is_edge_digit(u: u64, p: u64) -> bool {
    u <= 1 || u + 2 >= p
}

/// `Σ_{k=1}^{s} (2u_k - u_{k-1}) p^{k-1}` for `us = [u_0, …, u_s]`.
fn shifted_difference(us: &[u64], p: u64) -> i128 {
    let mut v = 0i128;
    let mut pw = 1i128;
    for k in 1..us.len() {
        v += (2 * us[k] as i128 - us[k - 1] as i128) * pw;
        pw *= p as i128;
    }
    v
}

/// `δ ∈ {-1, 0, 1}` with `0 ≤ v + δp^s ≤ p^s - 1`.
fn delta_for(v: i128, ps: i128) -> Option<i64> {
    (-1i64..=1).find(|&dl| {
        let w = v + dl as i128 * ps;
        (0..ps).contains(&w)
    })
}

fn low_digits(mut x: i128, p: u64, s: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(s);
    for _ in 0..s {
        out.push((x % p as i128) as u64);
        x /= p as i128;
    }
    out
}

/// The witness for `d = D(t, u_1, …, u_s)` with `r` leading zeros over
/// `F_{p^n}`, `n = 2(r + s + 2)`, built as in the proofs. The result
/// always satisfies `lhs > m(p-1)`.
pub fn power2_case3_witness(p: u64, r: usize, s: usize, t: u64, us: &[u64], variant: Power2Variant) -> Result<Witness> {
    if p < 5 || !is_prime(p) {
        return Err(Error::InvalidParameter(format!("p must be a prime at least 5, got {p}")));
    }
    if us.len() != s {
        return Err(Error::InvalidParameter(format!("expected {s} digits u_1..u_s, got {}", us.len())));
    }
    let d = d_form(t, us, r, p)?;
    let m = (r + s + 2) as u32;
    let n = 2 * m;
    let q = p.checked_pow(n).ok_or(Error::CapExceeded { size: u64::MAX, cap: super::witness::MAX_SEARCH_Q })?;
    let pp = p as u128;
    let pw = |k: usize| pp.pow(k as u32);
    let half = (pp - 1) / 2;
    let pm = pw(m as usize);
    let inner = us.iter().position(|&u| !is_edge_digit(u, p));
    let outer_ok = t != 1 && t != p - 1;
    let variant = match variant {
        Power2Variant::Auto if outer_ok => Power2Variant::OuterDigit,
        Power2Variant::Auto if inner.is_some() => Power2Variant::InnerDigit,
        Power2Variant::Auto => Power2Variant::Remaining,
        v => v,
    };
    let e = match variant {
        Power2Variant::OuterDigit => {
            if !outer_ok {
                return Err(Error::Hypothesis(format!("t = {t} lies in {{1, p-1}}")));
            }
            let h = pw(r + 1) - 1;
            h * pm + h + 1
        }
        Power2Variant::InnerDigit => {
            let Some(j0) = inner else {
                return Err(Error::Hypothesis("every u_j lies in {0, 1, p-2, p-1}".into()));
            };
            let j = j0 + 1;
            let h = pw(r) - 1 + (half - 1) * pw(r) + pw(r + j + 1);
            h * pm + h + 1
        }
        Power2Variant::Remaining => {
            if outer_ok || inner.is_some() {
                return Err(Error::Hypothesis(
                    "needs t in {1, p-1} and every u_j in {0, 1, p-2, p-1}".into(),
                ));
            }
            let h = remaining_h(p, r, t, us)?;
            (pp - 1 + h) * pm + h + 1
        }
        Power2Variant::Auto => unreachable!(),
    };
    let e = reduce_exponent(e, q);
    let w = Witness::check(p, n, d, e, Strategy::Construction)?;
    match w {
        Some(w) if w.lhs > (m as i64) * (p as i64 - 1) => Ok(w),
        _ => Err(Error::Construction(format!(
            "e = {e} gives s_p(e*d) - s_p(e) = {} for d = {d}",
            super::witness::margin(p, q, d, e)
        ))),
    }
}

fn remaining_h(p: u64, r: usize, t: u64, us: &[u64]) -> Result<u128> {
    let pp = p as u128;
    let pw = |k: usize| pp.pow(k as u32);
    let half = (pp - 1) / 2;
    let s = us.len();
    let u0 = if t == 1 { 1 } else { p - 2 };
    if s == 0 {
        return Ok(if t == 1 { pw(r + 1) - 1 - half } else { pw(r + 1) - (pp - 1) });
    }
    let us_s = us[s - 1];
    if p == 5 && (us_s == 1 || us_s == p - 2) {
        return Err(Error::Hypothesis(format!("p = 5 with u_s = {us_s}")));
    }
    if us_s > 1 {
        return Ok(if r == 0 { 1 } else { half * pw(r) - (pp - 1) });
    }
    let mut full = Vec::with_capacity(s + 1);
    full.push(u0);
    full.extend_from_slice(us);
    let v = shifted_difference(&full, p);
    let ps = pw(s) as i128;
    let delta = delta_for(v, ps)
        .ok_or_else(|| Error::Construction(format!("no delta for v = {v}")))?;
    let z = if us_s == 1 && delta == 1 {
        let gamma = low_digits(v + ps, p, s);
        gamma
            .iter()
            .position(|&g| !is_edge_digit(g, p))
            .map(|j| j + 1)
            .ok_or_else(|| Error::Hypothesis(format!("no digit of {gamma:?} outside {{0, 1, p-2, p-1}}")))?
    } else {
        s + 1
    };
    Ok((pw(r + 1 + z) - 1) + (pw(r + 1) - 1) - half)
}

/// One tuple `(u_0, …, u_s)` on which a claim fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TupleFailure {
    pub us: Vec<u64>,
    pub v: i64,
    pub delta: Option<i64>,
    pub claim: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct TechnicalReport {
    pub p: u64,
    pub s_max: usize,
    pub checked: usize,
    /// Tuples without an admissible `δ`.
    pub delta_failures: Vec<TupleFailure>,
    /// Tuples with `u_s = 1`, `δ = 1` whose digits `γ_j` all lie in
    /// `{0, 1, p-2, p-1}`.
    pub final_failures: Vec<TupleFailure>,
}

impl TechnicalReport {
    pub fn holds(&self) -> bool {
        self.delta_failures.is_empty() && self.final_failures.is_empty()
    }
}

/// Checks, for `1 ≤ s ≤ s_max` and every `(u_0, …, u_s)` with entries in
/// `{0, 1, p-2, p-1}` and `v ≠ p^s - 1`, that some `δ ∈ {-1, 0, 1}` puts
/// `v + δp^s` in `[0, p^s - 1]` with `0 < u_s + δ + 1 ≤ p - 1`, and that
/// `u_s = 1`, `δ = 1` forces a digit of `v + p^s` outside `{0, 1, p-2, p-1}`.
pub fn technical_lemma_check(p: u64, s_max: usize) -> Result<TechnicalReport> {
    if p <= 3 || !is_prime(p) {
        return Err(Error::InvalidParameter(format!("p must be a prime above 3, got {p}")));
    }
    let alphabet = [0, 1, p - 2, p - 1];
    let mut report =
        TechnicalReport { p, s_max, checked: 0, delta_failures: Vec::new(), final_failures: Vec::new() };
    for s in 1..=s_max {
        let ps = (p as i128).pow(s as u32);
        let count = 4usize.pow(s as u32 + 1);
        for code in 0..count {
            let us: Vec<u64> = (0..=s).map(|k| alphabet[(code >> (2 * k)) & 3]).collect();
            let v = shifted_difference(&us, p);
            if v == ps - 1 {
                continue;
            }
            report.checked += 1;
            let us_s = us[s] as i64;
            let delta = delta_for(v, ps);
            let ok = delta.is_some_and(|dl| us_s + dl + 1 > 0 && us_s + dl < p as i64 - 1);
            if !ok {
                report.delta_failures.push(TupleFailure { us, v: v as i64, delta, claim: "delta" });
                continue;
            }
            if us_s == 1 && delta == Some(1) {
                let gamma = low_digits(v + ps, p, s);
                if gamma.iter().all(|&g| is_edge_digit(g, p)) {
                    report.final_failures.push(TupleFailure { us, v: v as i64, delta, claim: "gamma" });
                }
            }
        }
    }
    Ok(report)
}

/// For `d` with `d ≡ r (mod p-1)`, `2 ≤ r ≤ p-1`, and every base-`p` digit
/// at least `r`: `e = 1` when `s_p(d) = r + k(p-1)` with `2k ≥ n`, else
/// `e = 1 + p + … + p^{n-2}`. The result is checked directly.
pub fn lemma8_witness(p: u64, n: u32, d: u64) -> Result<Witness> {
    if !is_prime(p) || p < 3 {
        return Err(Error::InvalidParameter(format!("p must be an odd prime, got {p}")));
    }
    if n < 2 {
        return Err(Error::InvalidParameter("n must be at least 2".into()));
    }
    let q = p.checked_pow(n).ok_or(Error::CapExceeded { size: u64::MAX, cap: super::witness::MAX_SEARCH_Q })?;
    if d == 0 || d > q - 1 {
        return Err(Error::ExponentRange { value: d, max: q - 1 });
    }
    let r = match d % (p - 1) {
        0 => p - 1,
        x => x,
    };
    if r < 2 {
        return Err(Error::Hypothesis(format!("d = {d} is 1 mod p-1")));
    }
    let mut x = d;
    for i in 0..n {
        let digit = x % p;
        if digit < r {
            return Err(Error::Hypothesis(format!("digit {i} of d is {digit} < r = {r}")));
        }
        x /= p;
    }
    let k = (digit_sum(d, p) - r) / (p - 1);
    let (e, strategy) = if 2 * k >= n as u64 {
        (1, Strategy::Unit)
    } else {
        ((0..n - 1).map(|i| p.pow(i)).sum(), Strategy::Repunit)
    };
    Witness::check(p, n, d, e, strategy)?
        .ok_or_else(|| Error::Construction(format!("e = {e} does not witness d = {d}")))
}

/// `e = ⌊(p-1)/d⌋` over the prime field `F_p`, for `3 ≤ d ≤ (p-1)/2`.
pub fn prime_field_witness(p: u64, d: u64) -> Result<Witness> {
    if !is_prime(p) || p < 3 {
        return Err(Error::InvalidParameter(format!("p must be an odd prime, got {p}")));
    }
    if d < 3 || 2 * d > p - 1 {
        return Err(Error::Hypothesis(format!("d = {d} outside [3, (p-1)/2]")));
    }
    let e = (p - 1) / d;
    Witness::check(p, 1, d, e, Strategy::PrimeField)?
        .ok_or_else(|| Error::Construction(format!("e = {e} does not witness d = {d} over F_{p}")))
}

/// Case counts over `d ≡ 2p^{m-1} (mod p^m - 1)`, `0 < d < p^{2m} - 1`.
#[derive(Debug, Clone, Serialize)]
pub struct TriageReport {
    pub p: u64,
    pub m: u32,
    pub case1: usize,
    pub case2: usize,
    pub case3: usize,
    /// Exponents matching none of the three patterns.
    pub unmatched: Vec<u64>,
    /// Case-2 exponents for which `e = 1` is not a witness.
    pub case2_unwitnessed: Vec<u64>,
}

impl TriageReport {
    pub fn holds(&self) -> bool {
        self.unmatched.is_empty() && self.case2_unwitnessed.is_empty()
    }
}

/// Runs the three-case triage over every exponent that reduces to
/// `2p^{m-1}` in the subfield of order `p^m`.
pub fn triage_check(p: u64, m: u32) -> Result<TriageReport> {
    if !is_prime(p) || p < 3 {
        return Err(Error::InvalidParameter(format!("p must be an odd prime, got {p}")));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    let n = 2 * m;
    let q = p.checked_pow(n).filter(|&q| q <= 1 << 31).ok_or(Error::CapExceeded { size: u64::MAX, cap: 1 << 31 })?;
    let small = p.pow(m) - 1;
    let target = 2 * p.pow(m - 1) % small;
    let mut report =
        TriageReport { p, m, case1: 0, case2: 0, case3: 0, unmatched: Vec::new(), case2_unwitnessed: Vec::new() };
    let mut d = if target == 0 { small } else { target };
    while d < q - 1 {
        match cl_triage(&digits_of(d, p, n as usize)?)? {
            CaseLabel::Case1 => report.case1 += 1,
            CaseLabel::Case2 => {
                report.case2 += 1;
                if Witness::check(p, n, d, 1, Strategy::Unit)?.is_none() {
                    report.case2_unwitnessed.push(d);
                }
            }
            CaseLabel::Case3 { .. } => report.case3 += 1,
            CaseLabel::None => report.unmatched.push(d),
        }
        d += small;
    }
    Ok(report)
}

/// Result of comparing `adeg(F^e) - s_p(e)` against `n(p-1)/2`.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeBoundReport {
    pub q: u64,
    pub bound: Bound,
    /// Largest `adeg(F^e) - s_p(e)` over `1 ≤ e ≤ q-1`.
    pub max_margin: i64,
    /// Exponents `e` whose margin exceeds the bound.
    pub violations: Vec<u64>,
}

impl DegreeBoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Computes `adeg(F^e) - s_p(e)` for every `e` and reports those above
/// `n(p-1)/2`. Planar `F` never produce violations.
pub fn verify_theorem1(t: &FuncTable) -> Result<DegreeBoundReport> {
    let ctx = t.ctx();
    let (p, n, q) = (ctx.p(), ctx.n(), ctx.q());
    let profile = compose_adeg_profile(t)?;
    let bound = Bound::new(p, n);
    let mut max_margin = i64::MIN;
    let mut violations = Vec::new();
    for e in 1..q {
        let margin = profile[e as usize] as i64 - digit_sum(e, p) as i64;
        max_margin = max_margin.max(margin);
        if bound.exceeded_by(margin) {
            violations.push(e);
        }
    }
    Ok(DegreeBoundReport { q, bound, max_margin, violations })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::bounds::witness::all_witness_exponents;
    use crate::digits::star;
    use crate::field::make_ctx;

    #[test]
    fn power2_examples() {
        let w = power2_case3_witness(7, 0, 0, 3, &[], Power2Variant::Auto).unwrap();
        assert_eq!((w.d, w.e, w.lhs), (206, 301, 13));
        assert_eq!(star(301, 206, 2401).unwrap(), 2006);
        let w = power2_case3_witness(7, 0, 0, 1, &[], Power2Variant::Auto).unwrap();
        assert_eq!((w.d, w.e, w.lhs), (302, 445, 13));
        let w = power2_case3_witness(7, 0, 0, 6, &[], Power2Variant::Auto).unwrap();
        assert!(w.lhs > 12);
        assert!(power2_case3_witness(7, 0, 0, 1, &[], Power2Variant::OuterDigit).is_err());
        assert!(power2_case3_witness(7, 0, 0, 3, &[], Power2Variant::Remaining).is_err());
        assert!(power2_case3_witness(7, 0, 1, 3, &[], Power2Variant::Auto).is_err());
        assert!(power2_case3_witness(3, 0, 0, 1, &[], Power2Variant::Auto).is_err());
    }

    #[test]
    fn power2_constructions_agree_with_enumeration() {
        for p in [7u64, 11] {
            for t in 1..p {
                let w = power2_case3_witness(p, 0, 0, t, &[], Power2Variant::Auto).unwrap();
                assert!(w.revalidate());
                assert!(all_witness_exponents(p, 4, w.d).unwrap().contains(&w.e));
            }
        }
    }

    #[test]
    fn power2_p5_flags_hypothesis() {
        let err = power2_case3_witness(5, 0, 1, 1, &[1], Power2Variant::Auto).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
    }

    #[test]
    fn technical_examples() {
        assert!(technical_lemma_check(7, 3).unwrap().holds());
        let five = technical_lemma_check(5, 2).unwrap();
        assert!(five.delta_failures.is_empty());
        assert!(!five.final_failures.is_empty());
        for f in &five.final_failures {
            assert_eq!(f.us.last(), Some(&1));
        }
        assert!(technical_lemma_check(3, 2).is_err());
    }

    #[test]
    fn lemma8_examples() {
        let w = lemma8_witness(7, 2, 38).unwrap();
        assert_eq!((w.e, w.lhs), (1, 7));
        assert!(matches!(lemma8_witness(7, 3, 114), Err(Error::Hypothesis(_))));
        let w = crate::bounds::witness::Witness::check(7, 3, 114, 8, Strategy::Repunit).unwrap().unwrap();
        assert_eq!(w.lhs, 10);
        assert!(matches!(lemma8_witness(7, 2, 1 + 3 * 7), Err(Error::Hypothesis(_))));
        // all digits at least r = 3, k = 0: the repunit branch
        let w = lemma8_witness(7, 3, 3 + 3 * 7 + 3 * 49).unwrap();
        assert_eq!((w.e, w.strategy), (8, Strategy::Repunit));
        assert!(w.revalidate());
    }

    #[test]
    fn prime_field_examples() {
        let w = prime_field_witness(13, 3).unwrap();
        assert_eq!((w.e, w.lhs), (4, 8));
        assert!(prime_field_witness(13, 7).is_err());
        assert!(prime_field_witness(12, 3).is_err());
    }

    #[test]
    fn triage_examples() {
        for (p, m) in [(3, 2), (5, 2), (7, 2), (3, 3)] {
            let r = triage_check(p, m).unwrap();
            assert!(r.holds(), "{r:?}");
            assert!(r.case1 > 0 && r.case3 > 0);
        }
    }

    #[test]
    fn theorem1_examples() {
        let ctx = Arc::new(make_ctx(3, 2).unwrap());
        let r = verify_theorem1(&FuncTable::monomial(ctx, 2)).unwrap();
        assert!(r.passed());
        assert!(r.max_margin <= 2);
        let ctx = Arc::new(make_ctx(7, 1).unwrap());
        let r = verify_theorem1(&FuncTable::monomial(ctx, 3)).unwrap();
        assert_eq!(r.q, 7);
    }
}
