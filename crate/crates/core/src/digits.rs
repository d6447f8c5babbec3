//! Base-b digit calculus: digit vectors, digit sums, the exponent monoid
//! `(S, ⋆)` on `{0, …, q-1}`, the `D(t, u_1, …, u_s)` exponent family and
//! the Coulter–Lazebnik case triage.
//!
//! Digits are stored least-significant first. Composite bases are accepted
//! here since nothing in this module needs field structure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A fixed-length base-`b` expansion, least-significant digit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DigitVec {
    base: u64,
    digits: Vec<u64>,
}

impl DigitVec {
    /// Canonical expansion of `x` in `len` digits.
    pub fn from_value(x: u64, base: u64, len: usize) -> Result<Self> {
        if base < 2 {
            return Err(Error::BadBase(base));
        }
        let mut digits = Vec::with_capacity(len);
        let mut rest = x;
        for _ in 0..len {
            digits.push(rest % base);
            rest /= base;
        }
        if rest != 0 || len == 0 {
            return Err(Error::OutOfRange { value: x, base, len });
        }
        Ok(DigitVec { base, digits })
    }

    /// Build from explicit digits, each of which must lie in `[0, base)`.
    pub fn from_digits(digits: Vec<u64>, base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::BadBase(base));
        }
        if digits.is_empty() {
            return Err(Error::InvalidParameter("empty digit vector".into()));
        }
        if let Some(&digit) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::BadDigit { digit, base });
        }
        if checked_modulus(base, digits.len()).is_none() {
            return Err(Error::InvalidParameter(format!(
                "{} digits of base {base} overflow 64 bits",
                digits.len()
            )));
        }
        Ok(DigitVec { base, digits })
    }

    /// Normalizing constructor for the bracket form `[c_0, …, c_{n-1}]_b`,
    /// whose entries may be negative or exceed `b - 1`.
    ///
    /// The value `Σ c_i b^i` is reduced modulo `b^n - 1`. A zero residue of a
    /// nonzero value maps to the all-`(b-1)` vector.
    pub fn from_bracket(coeffs: &[i64], base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::BadBase(base));
        }
        let len = coeffs.len();
        let modulus = checked_modulus(base, len)
            .ok_or_else(|| Error::InvalidParameter("bracket too long".into()))?
            - 1;
        let mut value: i128 = 0;
        let mut weight: i128 = 1;
        for &c in coeffs {
            value += c as i128 * weight;
            weight *= base as i128;
        }
        let residue = value.rem_euclid(modulus as i128) as u64;
        if residue == 0 && value != 0 {
            return Ok(DigitVec { base, digits: vec![base - 1; len] });
        }
        DigitVec::from_value(residue, base, len)
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn value(&self) -> u64 {
        self.digits.iter().rev().fold(0, |acc, &d| acc * self.base + d)
    }

    pub fn digit_sum(&self) -> u64 {
        self.digits.iter().sum()
    }

    /// Digit-wise complement `x ↦ b - 1 - x`.
    pub fn complement(&self) -> DigitVec {
        DigitVec {
            base: self.base,
            digits: self.digits.iter().map(|&d| self.base - 1 - d).collect(),
        }
    }

    /// Rotate digits upward by `k` places: multiplication by `b^k` modulo
    /// `b^n - 1`.
    pub fn cyclic_shift(&self, k: usize) -> DigitVec {
        let n = self.digits.len();
        let mut digits = vec![0; n];
        for (i, &d) in self.digits.iter().enumerate() {
            digits[(i + k) % n] = d;
        }
        DigitVec { base: self.base, digits }
    }
}

fn checked_modulus(base: u64, len: usize) -> Option<u64> {
    crate::arith::checked_pow(base, u32::try_from(len).ok()?)
}

/// `digits_of(x, base, n)`.
pub fn digits_of(x: u64, base: u64, len: usize) -> Result<DigitVec> {
    DigitVec::from_value(x, base, len)
}

/// Sum of the base-`b` digits of `x`.
#[inline]
pub fn digit_sum(mut x: u64, base: u64) -> u64 {
    debug_assert!(base >= 2);
    let mut s = 0;
    while x > 0 {
        s += x % base;
        x /= base;
    }
    s
}

/// Table of `s_b(x)` for `0 ≤ x < len`.
pub fn digit_sum_table(base: u64, len: usize) -> Vec<u16> {
    let mut table = vec![0u16; len];
    let b = base as usize;
    for x in 1..len {
        table[x] = table[x / b] + (x % b) as u16;
    }
    table
}

/// The monoid operation `e ⋆ d` on `{0, …, q-1}`.
pub fn star(e: u64, d: u64, q: u64) -> Result<u64> {
    if q < 3 {
        return Err(Error::InvalidParameter(format!("star needs q >= 3, got {q}")));
    }
    for v in [e, d] {
        if v > q - 1 {
            return Err(Error::ExponentRange { value: v, max: q - 1 });
        }
    }
    Ok(star_unchecked(e, d, q))
}

/// `e ⋆ d` without range checks; inputs must lie in `[0, q-1]`.
#[inline]
pub fn star_unchecked(e: u64, d: u64, q: u64) -> u64 {
    if e == 0 || d == 0 {
        return 0;
    }
    let r = (e as u128 * d as u128 % (q - 1) as u128) as u64;
    if r == 0 {
        q - 1
    } else {
        r
    }
}

/// The commutative monoid `({0, …, q-1}, ⋆)` with `q = b^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarMonoid {
    q: u64,
}

impl StarMonoid {
    pub fn new(q: u64) -> Result<Self> {
        if q < 3 {
            return Err(Error::InvalidParameter(format!("q - 1 must be at least 2, got q = {q}")));
        }
        Ok(StarMonoid { q })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn op(&self, e: u64, d: u64) -> Result<u64> {
        star(e, d, self.q)
    }

    pub fn elements(&self) -> std::ops::Range<u64> {
        0..self.q
    }
}

/// The exponent `D(t, u_1, …, u_s)` with `r` leading zeros, i.e. the integer
/// with digits `(0^r, t, u_1..u_s, 1, 0^r, p-t, ū_1..ū_s, 0)` in base `p`.
pub fn d_form(t: u64, us: &[u64], r: usize, p: u64) -> Result<u64> {
    Ok(d_form_digits(t, us, r, p)?.value())
}

pub fn d_form_digits(t: u64, us: &[u64], r: usize, p: u64) -> Result<DigitVec> {
    if p < 2 {
        return Err(Error::BadBase(p));
    }
    if t == 0 || t >= p {
        return Err(Error::InvalidParameter(format!("t must lie in [1, {}], got {t}", p - 1)));
    }
    if let Some(&digit) = us.iter().find(|&&u| u >= p) {
        return Err(Error::BadDigit { digit, base: p });
    }
    let m = r + us.len() + 2;
    let mut digits = Vec::with_capacity(2 * m);
    digits.extend(std::iter::repeat(0).take(r));
    digits.push(t);
    digits.extend_from_slice(us);
    digits.push(1);
    digits.extend(std::iter::repeat(0).take(r));
    digits.push(p - t);
    digits.extend(us.iter().map(|&u| p - 1 - u));
    digits.push(0);
    DigitVec::from_digits(digits, p)
}

/// Outcome of the Coulter–Lazebnik triage of an exponent over `F_{p^{2m}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseLabel {
    /// Pair sums `(0, …, 0, 2)` up to rotation.
    Case1,
    /// Pair sums `(p-1, …, p-1, p+1)` up to rotation.
    Case2,
    /// `cyclic_shift(d, shift) = D(t, us)` with `r` leading zeros.
    Case3 { shift: usize, t: u64, us: Vec<u64>, r: usize },
    None,
}

/// Classify `d` by the half-sums `(d_0 + d_m, …, d_{m-1} + d_{n-1})`,
/// trying every rotation of `d` and reporting the least one that matches.
pub fn cl_triage(d: &DigitVec) -> Result<CaseLabel> {
    let n = d.len();
    if n % 2 != 0 {
        return Err(Error::OddLength(n));
    }
    let m = n / 2;
    let p = d.base();
    for k in 0..n {
        let v = d.cyclic_shift(k);
        let dv = v.digits();
        let sums: Vec<u64> = (0..m).map(|i| dv[i] + dv[i + m]).collect();
        let head = &sums[..m - 1];
        let last = sums[m - 1];
        if head.iter().all(|&s| s == 0) && last == 2 {
            return Ok(CaseLabel::Case1);
        }
        if head.iter().all(|&s| s == p - 1) && last == p + 1 {
            return Ok(CaseLabel::Case2);
        }
        if last == 1 && dv[n - 1] == 0 {
            if let Some(r) = sums.iter().position(|&s| s != 0) {
                let ok = r < m - 1
                    && sums[r] == p
                    && sums[r + 1..m - 1].iter().all(|&s| s == p - 1);
                if ok {
                    return Ok(CaseLabel::Case3 {
                        shift: k,
                        t: dv[r],
                        us: dv[r + 1..m - 1].to_vec(),
                        r,
                    });
                }
            }
        }
    }
    Ok(CaseLabel::None)
}
