//! Exact arithmetic in `F_{p^n}` for odd `p`.
//!
//! An element is stored as the integer `Σ c_i p^i` of its coordinates in the
//! power basis of the modulus. The modulus is the lexicographically smallest
//! monic irreducible polynomial (coefficients compared from the constant term
//! upward) and the generator is the smallest primitive element in the same
//! order, so every context is reproducible from `(p, n)` alone.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// Fields up to this size get dense exp/log tables at construction.
pub const DEFAULT_TABLE_CAP: u64 = 1 << 20;
/// Largest supported field; element indices must fit in `u32`.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 31;

/// An element of `F_q`, identified with its coordinate vector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    /// Raw coordinate index `Σ c_i p^i`.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FieldConfig {
    pub max_q: u64,
    pub table_cap: u64,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig { max_q: DEFAULT_FIELD_CAP, table_cap: DEFAULT_TABLE_CAP }
    }
}

#[derive(Debug, Clone)]
struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Immutable description of `F_{p^n}`.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u64,
    n: u32,
    q: u64,
    modulus: Vec<u64>,
    generator: FieldElem,
    tables: Option<LogTables>,
}

/// `make_ctx(p, n)` with the default caps.
pub fn make_ctx(p: u64, n: u32) -> Result<FieldCtx> {
    FieldCtx::new(p, n)
}

impl FieldCtx {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        Self::with_config(p, n, FieldConfig::default())
    }

    pub fn with_config(p: u64, n: u32, config: FieldConfig) -> Result<Self> {
        if p % 2 == 0 {
            return Err(Error::EvenCharacteristic(p));
        }
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::InvalidParameter("extension degree must be positive".into()));
        }
        let cap = config.max_q.min(DEFAULT_FIELD_CAP);
        let q = match arith::checked_pow(p, n) {
            Some(q) if q <= cap => q,
            Some(q) => return Err(Error::CapExceeded { size: q, cap }),
            None => return Err(Error::CapExceeded { size: u64::MAX, cap }),
        };
        let modulus = if n == 1 { vec![0, 1] } else { smallest_irreducible(p, n as usize) };
        let mut ctx = FieldCtx { p, n, q, modulus, generator: FieldElem::ONE, tables: None };
        ctx.generator = ctx.find_generator();
        if q <= config.table_cap {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Monic modulus, constant term first. For `n = 1` this is `X`.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElem {
        self.generator
    }

    pub fn has_log_table(&self) -> bool {
        self.tables.is_some()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q as u32).map(FieldElem)
    }

    pub fn elem(&self, index: u64) -> Result<FieldElem> {
        if index >= self.q {
            return Err(Error::InvalidParameter(format!("index {index} outside F_{}", self.q)));
        }
        Ok(FieldElem(index as u32))
    }

    /// The prime-field element `c mod p`.
    pub fn from_int(&self, c: i64) -> FieldElem {
        FieldElem(c.rem_euclid(self.p as i64) as u32)
    }

    pub fn coords(&self, x: FieldElem) -> Vec<u64> {
        let mut v = x.0 as u64;
        (0..self.n)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[u64]) -> FieldElem {
        let idx = coords.iter().rev().fold(0u64, |acc, &c| acc * self.p + c % self.p);
        FieldElem(idx as u32)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.n == 1 {
            let s = a.0 as u64 + b.0 as u64;
            return FieldElem(if s >= self.p { s - self.p } else { s } as u32);
        }
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let (mut out, mut w) = (0u64, 1u64);
        while x > 0 || y > 0 {
            let mut c = x % self.p + y % self.p;
            if c >= self.p {
                c -= self.p;
            }
            out += c * w;
            w *= self.p;
            x /= self.p;
            y /= self.p;
        }
        FieldElem(out as u32)
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.n == 1 {
            return FieldElem(if a.0 == 0 { 0 } else { (self.p - a.0 as u64) as u32 });
        }
        let mut x = a.0 as u64;
        let (mut out, mut w) = (0u64, 1u64);
        while x > 0 {
            let c = x % self.p;
            if c != 0 {
                out += (self.p - c) * w;
            }
            w *= self.p;
            x /= self.p;
        }
        FieldElem(out as u32)
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    /// `c · a` for an integer scalar `c`.
    pub fn scale(&self, a: FieldElem, c: u64) -> FieldElem {
        let c = c % self.p;
        let coords: Vec<u64> = self.coords(a).into_iter().map(|x| x * c % self.p).collect();
        self.from_coords(&coords)
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        if self.n == 1 {
            return FieldElem((a.0 as u64 * b.0 as u64 % self.p) as u32);
        }
        if let Some(t) = &self.tables {
            let s = t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64;
            let qm1 = self.q - 1;
            return FieldElem(t.exp[(if s >= qm1 { s - qm1 } else { s }) as usize]);
        }
        self.mul_poly(a, b)
    }

    fn mul_poly(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let prod = poly_mul(&self.coords(a), &self.coords(b), self.p);
        let rem = poly_rem(prod, &self.modulus, self.p);
        self.from_coords(&rem)
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if a.0 == 0 {
            return FieldElem::ZERO;
        }
        if let Some(t) = &self.tables {
            let l = (t.log[a.0 as usize] as u128 * e as u128 % (self.q - 1) as u128) as usize;
            return FieldElem(t.exp[l]);
        }
        let (mut base, mut exp, mut acc) = (a, e, FieldElem::ONE);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::InvalidParameter("zero is not invertible".into()));
        }
        Ok(self.pow(a, self.q - 2))
    }

    /// `g^k` for any integer `k`.
    pub fn exp(&self, k: u64) -> FieldElem {
        let k = k % (self.q - 1);
        match &self.tables {
            Some(t) => FieldElem(t.exp[k as usize]),
            None => self.pow(self.generator, k),
        }
    }

    /// Discrete logarithm to the base of the fixed generator, in `[0, q-2]`.
    pub fn dlog(&self, x: FieldElem) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::ZeroLog);
        }
        if let Some(t) = &self.tables {
            return Ok(t.log[x.0 as usize] as u64);
        }
        Ok(self.baby_step_giant_step(x))
    }

    fn baby_step_giant_step(&self, x: FieldElem) -> u64 {
        let order = self.q - 1;
        let step = (order as f64).sqrt().ceil() as u64;
        let mut baby = HashMap::with_capacity(step as usize);
        let mut cur = FieldElem::ONE;
        for j in 0..step {
            baby.entry(cur).or_insert(j);
            cur = self.mul(cur, self.generator);
        }
        let giant = self.pow(self.generator, order - step % order);
        let mut y = x;
        for i in 0..=step {
            if let Some(&j) = baby.get(&y) {
                return (i * step + j) % order;
            }
            y = self.mul(y, giant);
        }
        unreachable!("generator has full order")
    }

    /// Absolute trace `Σ_k x^{p^k}`, an element of the prime field.
    pub fn trace(&self, x: FieldElem) -> FieldElem {
        let mut acc = FieldElem::ZERO;
        let mut cur = x;
        for _ in 0..self.n {
            acc = self.add(acc, cur);
            cur = self.pow(cur, self.p);
        }
        debug_assert!((acc.0 as u64) < self.p);
        acc
    }

    /// Table of `tr(x)` as integers in `[0, p)`, indexed by element index.
    pub fn trace_table(&self) -> Vec<u32> {
        self.elements().map(|x| self.trace(x).0).collect()
    }

    /// Position of `x` in the enumeration `0, g^0, g^1, …, g^{q-2}`.
    pub fn position(&self, x: FieldElem) -> usize {
        if x.is_zero() {
            0
        } else {
            1 + self.dlog(x).expect("nonzero") as usize
        }
    }

    /// Inverse of [`FieldCtx::position`].
    pub fn at_position(&self, pos: usize) -> FieldElem {
        if pos == 0 {
            FieldElem::ZERO
        } else {
            self.exp(pos as u64 - 1)
        }
    }

    /// Order of `x` in `F_q^×`.
    pub fn order(&self, x: FieldElem) -> u64 {
        let mut order = self.q - 1;
        for f in arith::prime_factors(self.q - 1) {
            while order % f == 0 && self.pow_slow(x, order / f) == FieldElem::ONE {
                order /= f;
            }
        }
        order
    }

    fn pow_slow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let (mut base, mut acc) = (a, FieldElem::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_no_table(acc, base);
            }
            base = self.mul_no_table(base, base);
            e >>= 1;
        }
        acc
    }

    fn mul_no_table(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            FieldElem::ZERO
        } else if self.n == 1 {
            FieldElem((a.0 as u64 * b.0 as u64 % self.p) as u32)
        } else {
            self.mul_poly(a, b)
        }
    }

    fn find_generator(&self) -> FieldElem {
        let factors = arith::prime_factors(self.q - 1);
        for ordinal in 1..self.q {
            let x = FieldElem(reverse_digits(ordinal, self.p, self.n as usize) as u32);
            if x.is_zero() {
                continue;
            }
            if factors.iter().all(|&f| self.pow_slow(x, (self.q - 1) / f) != FieldElem::ONE) {
                return x;
            }
        }
        unreachable!("F_q^× is cyclic")
    }

    fn build_tables(&self) -> LogTables {
        let order = (self.q - 1) as usize;
        let mut exp = Vec::with_capacity(order);
        let mut log = vec![0u32; self.q as usize];
        let mut cur = FieldElem::ONE;
        for k in 0..order {
            exp.push(cur.0);
            log[cur.0 as usize] = k as u32;
            cur = self.mul_no_table(cur, self.generator);
        }
        LogTables { exp, log }
    }

    /// Evaluate a polynomial with field coefficients (constant term first).
    pub fn eval_poly(&self, coeffs: &[FieldElem], x: FieldElem) -> FieldElem {
        coeffs.iter().rev().fold(FieldElem::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// Evaluate a polynomial with prime-field integer coefficients.
    fn eval_int_poly(&self, coeffs: &[u64], x: FieldElem) -> FieldElem {
        coeffs
            .iter()
            .rev()
            .fold(FieldElem::ZERO, |acc, &c| self.add(self.mul(acc, x), self.from_int(c as i64)))
    }
}

/// Embedding of a subfield context into a larger field.
#[derive(Debug, Clone)]
pub struct Embedding {
    images: Vec<FieldElem>,
    /// The small generator maps to `g^{(q-1)/(p^m-1) · generator_multiplier}`.
    pub generator_multiplier: u64,
}

impl Embedding {
    pub fn apply(&self, x: FieldElem) -> FieldElem {
        self.images[x.0 as usize]
    }

    pub fn images(&self) -> &[FieldElem] {
        &self.images
    }

    /// Preimage of `y` if it lies in the image.
    pub fn preimage(&self, y: FieldElem) -> Option<FieldElem> {
        self.images.iter().position(|&z| z == y).map(|i| FieldElem(i as u32))
    }
}

/// The subfield `F_{p^m} ⊂ F_{p^n}` together with a field embedding.
///
/// The small context is `make_ctx(p, m)`. Its modulus has `m` roots in the
/// large field; the root chosen is the one sending the small generator to
/// `g^{c·j}` with `c = (q-1)/(p^m-1)` and `j` minimal. When the minimal
/// polynomials agree this is `j = 1`.
pub fn subfield_restrict(ctx: &FieldCtx, m: u32) -> Result<(FieldCtx, Embedding)> {
    if m == 0 || ctx.n % m != 0 {
        return Err(Error::NotADivisor { m, n: ctx.n });
    }
    let small = FieldCtx::new(ctx.p, m)?;
    let small_order = small.q - 1;
    let c = (ctx.q - 1) / small_order;
    let gen_coords = small.coords(small.generator);

    let mut best: Option<(u64, FieldElem)> = None;
    for k in 0..small_order {
        let z = ctx.exp(c * k);
        if !ctx.eval_int_poly(&small.modulus, z).is_zero() {
            continue;
        }
        let image = eval_coords_at(ctx, &gen_coords, z);
        let j = ctx.dlog(image)? / c;
        if best.map_or(true, |(bj, _)| j < bj) {
            best = Some((j, z));
        }
    }
    // n = 1 small field has modulus X, whose root is 0
    let (j, root) = if m == 1 {
        (ctx.dlog(ctx.from_int(small.generator.0 as i64))? / c, FieldElem::ZERO)
    } else {
        best.ok_or_else(|| Error::InvalidParameter("subfield modulus has no root".into()))?
    };
    let images = small
        .elements()
        .map(|x| {
            if m == 1 {
                ctx.from_int(x.0 as i64)
            } else {
                eval_coords_at(ctx, &small.coords(x), root)
            }
        })
        .collect();
    Ok((small, Embedding { images, generator_multiplier: j }))
}

fn eval_coords_at(ctx: &FieldCtx, coords: &[u64], z: FieldElem) -> FieldElem {
    ctx.eval_int_poly(coords, z)
}

fn reverse_digits(ordinal: u64, p: u64, n: usize) -> u64 {
    let mut x = ordinal;
    let mut out = 0;
    for _ in 0..n {
        out = out * p + x % p;
        x /= p;
    }
    out
}

/// Smallest monic irreducible of degree `n` over `F_p`, comparing
/// coefficient vectors from the constant term upward.
fn smallest_irreducible(p: u64, n: usize) -> Vec<u64> {
    let total = p.pow(n as u32);
    for ordinal in 0..total {
        // ordinal's most significant base-p digit is the constant term
        let low = reverse_digits(ordinal, p, n);
        let mut f: Vec<u64> = (0..n).map(|i| low / p.pow(i as u32) % p).collect();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Rabin-style test: no factor of degree `k ≤ n/2`, via
/// `gcd(f, X^{p^k} - X) = 1`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = vec![0, 1];
    let mut h = x.clone();
    for _ in 1..=n / 2 {
        h = poly_powmod(&h, p, f, p);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        let g = poly_gcd(f.to_vec(), diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    if a.is_empty() {
        a.push(0);
    }
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Remainder modulo a monic polynomial.
fn poly_rem(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a.pop().unwrap();
        if lead != 0 {
            let off = a.len() - dm;
            for i in 0..dm {
                a[off + i] = (a[off + i] + (p - lead) * m[i]) % p;
            }
        }
    }
    a.resize(dm.max(1), 0);
    a
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1];
    let mut b = poly_rem(base.to_vec(), m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(poly_mul(&acc, &b, p), m, p);
        }
        b = poly_rem(poly_mul(&b, &b, p), m, p);
        e >>= 1;
    }
    trim(&mut acc);
    acc
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        let r = poly_rem_general(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn poly_rem_general(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let lead_inv = arith::pow_mod(*b.last().unwrap(), p - 2, p);
    let monic: Vec<u64> = b.iter().map(|&c| c * lead_inv % p).collect();
    let mut r = poly_rem(a.to_vec(), &monic, p);
    trim(&mut r);
    r
}
