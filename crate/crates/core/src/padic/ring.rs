//! The ring `Z[ζ_p, ζ_{q-1}]` in the tensor basis `ζ_p^a ζ_{q-1}^b`,
//! `a < p-1`, `b < φ(q-1)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};

/// Exponent of the uniformizer `π = ζ_p - 1` at the prime fixed by the
/// residue map `ζ_{q-1} ↦ g`, `ζ_p ↦ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn ord_pi(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// `ord_p = ord_π / (p-1)` as a reduced fraction `(num, den)`.
    pub fn ord_p(self, p: u64) -> Option<(i64, u64)> {
        let v = self.ord_pi()?;
        let g = arith::gcd(v.unsigned_abs(), p - 1).max(1);
        Some((v / g as i64, (p - 1) / g))
    }

    fn shift(self, by: i64) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v + by),
            Valuation::Infinite => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Integer coefficients of `Φ_m`, constant term first.
pub fn cyclotomic_poly(m: u64) -> Vec<i64> {
    fn go(m: u64, memo: &mut BTreeMap<u64, Vec<i64>>) -> Vec<i64> {
        if let Some(f) = memo.get(&m) {
            return f.clone();
        }
        let mut num = vec![0i64; m as usize + 1];
        num[0] = -1;
        num[m as usize] = 1;
        for d in 1..m {
            if m % d == 0 {
                let f = go(d, memo);
                num = div_monic(&num, &f);
            }
        }
        memo.insert(m, num.clone());
        num
    }
    go(m, &mut BTreeMap::new())
}

/// Exact quotient by a monic integer polynomial.
fn div_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut quot = vec![0i64; a.len() - db];
    for i in (0..quot.len()).rev() {
        let c = rem[i + db];
        quot[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            rem[i + j] -= c * bj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Multiplication tables and the residue map for one field `F_q`.
pub struct CycloRing {
    field: Arc<FieldCtx>,
    p: u64,
    m: u64,
    phi: usize,
    /// `ζ_m^k` in the basis `1, ζ_m, …, ζ_m^{φ-1}`, for `k < m`.
    zeta_m: Vec<Vec<i64>>,
    gen_pows: Vec<FieldElem>,
    /// `Π_{a=2}^{p-1} (ζ_p^a - 1)`, so that `π · cofactor = p`.
    cofactor: Vec<BigInt>,
    /// Lift of `(Φ_m mod p) / minpoly(g)` at `ζ_m`: a unit at the chosen
    /// prime lying in every other prime above `p`. Absent when `p` is
    /// inert in `Z[ζ_m]`.
    split_unit: Option<Vec<BigInt>>,
}

impl fmt::Debug for CycloRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloRing(p={}, q-1={}, phi={})", self.p, self.m, self.phi)
    }
}

impl CycloRing {
    pub fn new(field: Arc<FieldCtx>) -> Arc<Self> {
        let p = field.p();
        let m = field.q() - 1;
        let phi_m = cyclotomic_poly(m);
        let phi = phi_m.len() - 1;

        let mut zeta_m = Vec::with_capacity(m as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..m {
            zeta_m.push(cur.clone());
            let top = cur[phi - 1];
            for j in (1..phi).rev() {
                cur[j] = cur[j - 1] - top * phi_m[j];
            }
            cur[0] = -top * phi_m[0];
        }
        let gen_pows = (0..phi as u64).map(|b| field.exp(b)).collect();

        let mut ring = CycloRing {
            field: field.clone(),
            p,
            m,
            phi,
            zeta_m,
            gen_pows,
            cofactor: Vec::new(),
            split_unit: None,
        };
        let dim = ring.dim();
        let mut cof = vec![BigInt::zero(); dim];
        cof[0] = BigInt::one();
        for a in 2..p {
            let mut factor = ring.zeta_p_raw(a);
            factor[0] -= 1;
            cof = ring.mul_raw(&cof, &factor);
        }
        ring.cofactor = cof;

        let minpoly = generator_minpoly(&field);
        if minpoly.len() - 1 < phi {
            let reduced: Vec<u64> = phi_m.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
            let h = div_mod_p(&reduced, &minpoly, p);
            let mut unit = vec![BigInt::zero(); dim];
            for (b, &c) in h.iter().enumerate() {
                unit[b] = BigInt::from(c);
            }
            ring.split_unit = Some(unit);
        }
        Arc::new(ring)
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Order of `ζ_{q-1}`.
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn phi(&self) -> usize {
        self.phi
    }

    /// Rank `(p-1)·φ(q-1)` of the ring over `Z`.
    pub fn dim(&self) -> usize {
        (self.p as usize - 1) * self.phi
    }

    fn zeta_p_raw(&self, a: u64) -> Vec<BigInt> {
        let mut hist = vec![0i64; self.p as usize * self.m as usize];
        hist[(a % self.p) as usize * self.m as usize] = 1;
        self.fold(&hist)
    }

    /// Reduce a `p × m` grid of coefficients of `ζ_p^a ζ_m^b` (all `a < p`,
    /// `b < m`) to the canonical basis.
    fn fold(&self, grid: &[i64]) -> Vec<BigInt> {
        let (p, m, phi) = (self.p as usize, self.m as usize, self.phi);
        let mut rows = vec![0i64; p * phi];
        for a in 0..p {
            let row = &mut rows[a * phi..(a + 1) * phi];
            for (b, &h) in grid[a * m..(a + 1) * m].iter().enumerate() {
                if h != 0 {
                    for (r, &z) in row.iter_mut().zip(&self.zeta_m[b]) {
                        *r += h * z;
                    }
                }
            }
        }
        let (low, top) = rows.split_at(( p - 1) * phi);
        low.iter().enumerate().map(|(i, &v)| BigInt::from(v - top[i % phi])).collect()
    }

    fn fold_big(&self, grid: &[BigInt]) -> Vec<BigInt> {
        let (p, m, phi) = (self.p as usize, self.m as usize, self.phi);
        let mut rows = vec![BigInt::zero(); p * phi];
        for a in 0..p {
            for b in 0..m {
                let h = &grid[a * m + b];
                if h.is_zero() {
                    continue;
                }
                for (j, &z) in self.zeta_m[b].iter().enumerate() {
                    if z != 0 {
                        rows[a * phi + j] += h * z;
                    }
                }
            }
        }
        let (low, top) = rows.split_at((p - 1) * phi);
        low.iter().enumerate().map(|(i, v)| v - &top[i % phi]).collect()
    }

    fn mul_raw(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let (p, m, phi) = (self.p as usize, self.m as usize, self.phi);
        let ys: Vec<(usize, usize, &BigInt)> = y
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i / phi, i % phi, c))
            .collect();
        let mut grid = vec![BigInt::zero(); p * m];
        for (i, cx) in x.iter().enumerate() {
            if cx.is_zero() {
                continue;
            }
            let (a, b) = (i / phi, i % phi);
            for &(a2, b2, cy) in &ys {
                grid[((a + a2) % p) * m + (b + b2) % m] += cx * cy;
            }
        }
        self.fold_big(&grid)
    }

    /// Coefficient-wise reduction followed by `ζ_m ↦ g`, `ζ_p ↦ 1`.
    fn residue_raw(&self, c: &[BigInt]) -> FieldElem {
        let ctx = &self.field;
        let p = BigInt::from(self.p);
        let mut acc = FieldElem::ZERO;
        for b in 0..self.phi {
            let mut s = BigInt::zero();
            for a in 0..self.p as usize - 1 {
                s += &c[a * self.phi + b];
            }
            let r = s.mod_floor(&p).to_u64().expect("reduced mod p");
            if r != 0 {
                acc = ctx.add(acc, ctx.scale(self.gen_pows[b], r));
            }
        }
        acc
    }

    fn elem(self: &Arc<Self>, c: Vec<BigInt>) -> CycloElem {
        CycloElem { ring: self.clone(), c }
    }

    pub fn zero(self: &Arc<Self>) -> CycloElem {
        self.elem(vec![BigInt::zero(); self.dim()])
    }

    pub fn one(self: &Arc<Self>) -> CycloElem {
        self.from_int(1)
    }

    pub fn from_int(self: &Arc<Self>, v: i64) -> CycloElem {
        let mut c = vec![BigInt::zero(); self.dim()];
        c[0] = BigInt::from(v);
        self.elem(c)
    }

    /// `ζ_p^a ζ_m^b` for arbitrary exponents.
    pub fn root(self: &Arc<Self>, a: u64, b: u64) -> CycloElem {
        let mut hist = vec![0i64; self.p as usize * self.m as usize];
        hist[(a % self.p) as usize * self.m as usize + (b % self.m) as usize] = 1;
        self.from_grid(&hist)
    }

    /// `Σ grid[a·m + b] ζ_p^a ζ_m^b` over `a < p`, `b < m`.
    pub fn from_grid(self: &Arc<Self>, grid: &[i64]) -> CycloElem {
        assert_eq!(grid.len(), self.p as usize * self.m as usize);
        self.elem(self.fold(grid))
    }

    /// The Teichmüller lift: `τ(0) = 0`, `τ(g^k) = ζ_m^k`.
    pub fn teichmuller(self: &Arc<Self>, x: FieldElem) -> CycloElem {
        if x.is_zero() {
            return self.zero();
        }
        self.root(0, self.field.dlog(x).expect("nonzero"))
    }

    /// The automorphism `ζ_p ↦ ζ_p^s`, `ζ_m ↦ ζ_m^t`; `s`, `t` must be
    /// units modulo `p` and `m`.
    pub fn galois(&self, x: &CycloElem, s: u64, t: u64) -> CycloElem {
        let (p, m, phi) = (self.p as usize, self.m as usize, self.phi);
        let mut grid = vec![BigInt::zero(); p * m];
        for (i, c) in x.c.iter().enumerate() {
            if !c.is_zero() {
                let (a, b) = (i / phi, i % phi);
                grid[(a * s as usize) % p * m + (b * t as usize) % m] += c;
            }
        }
        CycloElem { ring: x.ring.clone(), c: self.fold_big(&grid) }
    }

    fn valuation_bound(&self, c: &[BigInt]) -> usize {
        let l1: BigInt = c.iter().map(|v| v.abs()).sum();
        let bits = l1.bits().max(1) as f64;
        let log_p = bits / (self.p as f64).log2();
        let p1 = (self.p - 1) as f64;
        (p1 * p1 * self.phi as f64 * log_p / self.field.n() as f64).ceil() as usize + self.p as usize + 1
    }

    pub fn pi_valuation(&self, x: &CycloElem) -> Result<Valuation> {
        if x.is_zero() {
            return Ok(Valuation::Infinite);
        }
        let bound = self.valuation_bound(&x.c);
        let p = BigInt::from(self.p);
        let uses_m = x.c.iter().enumerate().any(|(i, v)| i % self.phi != 0 && !v.is_zero());
        let mut cur = x.c.clone();
        let mut k: usize = 0;
        loop {
            // (p) = (π)^{p-1}
            while cur.iter().all(|v| v.is_multiple_of(&p)) {
                cur.iter_mut().for_each(|v| *v /= &p);
                k += self.p as usize - 1;
            }
            if !self.residue_raw(&cur).is_zero() {
                return Ok(Valuation::Finite(k as i64));
            }
            if k > bound {
                return Err(Error::ValuationDiverged(k));
            }
            cur = self.mul_raw(&cur, &self.cofactor);
            if uses_m {
                if let Some(unit) = &self.split_unit {
                    cur = self.mul_raw(&cur, unit);
                }
            }
            for v in cur.iter_mut() {
                let (quot, rem) = v.div_rem(&p);
                if !rem.is_zero() {
                    return Err(Error::ValuationDiverged(k));
                }
                *v = quot;
            }
            k += 1;
        }
    }
}

/// Minimal polynomial of the field generator over `F_p`, monic, constant first.
fn generator_minpoly(field: &FieldCtx) -> Vec<u64> {
    let mut poly = vec![FieldElem::ONE];
    let mut root = field.generator();
    for _ in 0..field.n() {
        let mut next = vec![FieldElem::ZERO; poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i + 1] = field.add(next[i + 1], c);
            next[i] = field.sub(next[i], field.mul(c, root));
        }
        poly = next;
        root = field.pow(root, field.p());
    }
    poly.into_iter()
        .map(|c| {
            assert!((c.index() as u64) < field.p(), "minimal polynomial has prime-field coefficients");
            c.index() as u64
        })
        .collect()
}

/// Exact quotient of polynomials over `F_p`; `b` monic.
fn div_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut quot = vec![0u64; a.len() - db];
    for i in (0..quot.len()).rev() {
        let c = rem[i + db] % p;
        quot[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            rem[i + j] = (rem[i + j] + (p - c) * bj) % p;
        }
    }
    debug_assert!(rem.iter().all(|&r| r % p == 0));
    quot
}

/// An element of `Z[ζ_p, ζ_{q-1}]`.
#[derive(Clone)]
pub struct CycloElem {
    ring: Arc<CycloRing>,
    c: Vec<BigInt>,
}

impl CycloElem {
    pub fn ring(&self) -> &Arc<CycloRing> {
        &self.ring
    }

    /// Coefficient of `ζ_p^a ζ_m^b`.
    pub fn coeff(&self, a: usize, b: usize) -> &BigInt {
        &self.c[a * self.ring.phi + b]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|v| v.is_zero())
    }

    /// Image in `F_q` under `ζ_m ↦ g`, `ζ_p ↦ 1`.
    pub fn residue(&self) -> FieldElem {
        self.ring.residue_raw(&self.c)
    }

    pub fn pi_valuation(&self) -> Result<Valuation> {
        self.ring.pi_valuation(self)
    }

    /// `ζ_p ↦ ζ_p^{-1}`, the automorphism matching complex conjugation on `ζ_p`.
    pub fn conj_p(&self) -> CycloElem {
        self.ring.galois(self, self.ring.p - 1, 1)
    }

    /// Both roots inverted.
    pub fn conj(&self) -> CycloElem {
        self.ring.galois(self, self.ring.p - 1, self.ring.m - 1)
    }

    /// gcd of all coefficients.
    pub fn content(&self) -> BigInt {
        self.c.iter().fold(BigInt::zero(), |g, v| g.gcd(v))
    }

    pub fn scale(&self, k: &BigInt) -> CycloElem {
        CycloElem { ring: self.ring.clone(), c: self.c.iter().map(|v| v * k).collect() }
    }

    /// Exact division of every coefficient.
    pub fn div_exact(&self, k: &BigInt) -> Option<CycloElem> {
        let mut c = Vec::with_capacity(self.c.len());
        for v in &self.c {
            let (q, r) = v.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            c.push(q);
        }
        Some(CycloElem { ring: self.ring.clone(), c })
    }
}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let phi = self.ring.phi;
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| format!("{v}·zp^{}·zm^{}", i / phi, i % phi))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl PartialEq for CycloElem {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
}

impl Eq for CycloElem {}

impl<'a> Add for &'a CycloElem {
    type Output = CycloElem;
    fn add(self, rhs: &'a CycloElem) -> CycloElem {
        CycloElem { ring: self.ring.clone(), c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub for &'a CycloElem {
    type Output = CycloElem;
    fn sub(self, rhs: &'a CycloElem) -> CycloElem {
        CycloElem { ring: self.ring.clone(), c: self.c.iter().zip(&rhs.c).map(|(a, b)| a - b).collect() }
    }
}

impl<'a> Mul for &'a CycloElem {
    type Output = CycloElem;
    fn mul(self, rhs: &'a CycloElem) -> CycloElem {
        CycloElem { ring: self.ring.clone(), c: self.ring.mul_raw(&self.c, &rhs.c) }
    }
}

impl Neg for &CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        CycloElem { ring: self.ring.clone(), c: self.c.iter().map(|v| -v).collect() }
    }
}

/// `num / den` with `den > 0` and `gcd(content(num), den) = 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct ScaledCyclo {
    num: CycloElem,
    den: BigInt,
}

impl ScaledCyclo {
    pub fn new(num: CycloElem, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        let (num, den) = if den.is_negative() { (-&num, -den) } else { (num, den) };
        let g = num.content().gcd(&den);
        if g.is_zero() {
            return Ok(ScaledCyclo { num, den: BigInt::one() });
        }
        if g.is_one() {
            return Ok(ScaledCyclo { num, den });
        }
        Ok(ScaledCyclo { num: num.div_exact(&g).expect("g divides content"), den: den / g })
    }

    pub fn integral(num: CycloElem) -> Self {
        ScaledCyclo { num, den: BigInt::one() }
    }

    pub fn num(&self) -> &CycloElem {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `ord_π(num) - (p-1)·v_p(den)`.
    pub fn pi_valuation(&self) -> Result<Valuation> {
        let p = BigInt::from(self.num.ring.p);
        let mut d = self.den.clone();
        let mut vp = 0i64;
        while d.is_multiple_of(&p) {
            d /= &p;
            vp += 1;
        }
        Ok(self.num.pi_valuation()?.shift(-vp * (self.num.ring.p as i64 - 1)))
    }

    /// Residue in `F_q`; requires a denominator prime to `p`.
    pub fn residue(&self) -> Result<FieldElem> {
        let ring = &self.num.ring;
        let p = BigInt::from(ring.p);
        let d = self.den.mod_floor(&p).to_u64().expect("reduced");
        if d == 0 {
            return Err(Error::InvalidParameter("denominator divisible by p".into()));
        }
        let ctx = &ring.field;
        let inv = arith::pow_mod(d, ring.p - 2, ring.p);
        Ok(ctx.scale(self.num.residue(), inv))
    }

    pub fn mul(&self, other: &ScaledCyclo) -> ScaledCyclo {
        ScaledCyclo::new(&self.num * &other.num, &self.den * &other.den).expect("nonzero denominators")
    }

    pub fn add(&self, other: &ScaledCyclo) -> ScaledCyclo {
        let num = &self.num.scale(&other.den) + &other.num.scale(&self.den);
        ScaledCyclo::new(num, &self.den * &other.den).expect("nonzero denominators")
    }

    pub fn sub(&self, other: &ScaledCyclo) -> ScaledCyclo {
        self.add(&ScaledCyclo { num: -&other.num, den: other.den.clone() })
    }

    pub fn conj_p(&self) -> ScaledCyclo {
        ScaledCyclo { num: self.num.conj_p(), den: self.den.clone() }
    }
}

impl fmt::Debug for ScaledCyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / {}", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_ctx;

    fn ring(p: u64, n: u32) -> Arc<CycloRing> {
        CycloRing::new(Arc::new(make_ctx(p, n).unwrap()))
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        for m in 1..120u64 {
            assert_eq!(cyclotomic_poly(m).len() as u64 - 1, arith::totient(m));
        }
    }

    #[test]
    fn roots_of_unity() {
        for (p, n) in [(3, 1), (3, 2), (5, 1), (7, 1), (5, 2), (3, 3)] {
            let r = ring(p, n);
            assert_eq!(r.root(p, 0), r.one());
            assert_eq!(r.root(0, r.m()), r.one());
            let zp = r.root(1, 0);
            let zm = r.root(0, 1);
            let mut acc = r.one();
            for k in 0..r.m() {
                assert_eq!(acc, r.root(0, k));
                acc = &acc * &zm;
            }
            assert_eq!(acc, r.one());
            let sum = (0..p).fold(r.zero(), |s, a| &s + &r.root(a, 0));
            assert!(sum.is_zero());
            assert_eq!(&zp * &zm, r.root(1, 1));
        }
    }

    #[test]
    fn teichmuller_is_multiplicative_section() {
        let r = ring(3, 2);
        let f = r.field().clone();
        assert!(r.teichmuller(FieldElem::ZERO).is_zero());
        assert_eq!(r.teichmuller(FieldElem::ONE), r.one());
        for x in f.elements() {
            assert_eq!(r.teichmuller(x).residue(), x);
            for y in f.elements() {
                assert_eq!(&r.teichmuller(x) * &r.teichmuller(y), r.teichmuller(f.mul(x, y)));
            }
        }
    }

    #[test]
    fn simple_valuations() {
        for (p, n) in [(3, 1), (3, 2), (5, 1), (7, 1), (5, 2), (3, 3), (7, 2)] {
            let r = ring(p, n);
            assert_eq!(r.from_int(p as i64).pi_valuation().unwrap(), Valuation::Finite(p as i64 - 1));
            assert_eq!(r.one().pi_valuation().unwrap(), Valuation::Finite(0));
            assert_eq!(r.zero().pi_valuation().unwrap(), Valuation::Infinite);
            let pi = &r.root(1, 0) - &r.one();
            assert_eq!(pi.pi_valuation().unwrap(), Valuation::Finite(1));
            let pi3 = &(&pi * &pi) * &pi;
            assert_eq!(pi3.pi_valuation().unwrap(), Valuation::Finite(3));
            // roots of unity of order m are units
            assert_eq!(r.root(0, 1).pi_valuation().unwrap(), Valuation::Finite(0));
            let unit_times_pi = &(&r.root(0, 1) + &r.from_int(p as i64)) * &pi;
            assert_eq!(unit_times_pi.pi_valuation().unwrap(), Valuation::Finite(1));
        }
    }

    #[test]
    fn valuation_at_split_prime() {
        // p = 3 splits in Z[ζ_8]? φ(8) = 4 > n = 2, so the chosen prime is one of two.
        let r = ring(3, 2);
        assert!(r.split_unit.is_some());
        let f = r.field().clone();
        // an element vanishing at the chosen prime but not at the conjugate one
        let g = f.generator();
        let minpoly = generator_minpoly(&f);
        let lifted = minpoly
            .iter()
            .enumerate()
            .fold(r.zero(), |acc, (b, &c)| &acc + &r.root(0, b as u64).scale(&BigInt::from(c)));
        assert_eq!(lifted.residue(), FieldElem::ZERO);
        assert_eq!(f.eval_poly(&minpoly.iter().map(|&c| f.from_int(c as i64)).collect::<Vec<_>>(), g), FieldElem::ZERO);
        let v = lifted.pi_valuation().unwrap().ord_pi().unwrap();
        assert!(v >= 2 && v % 2 == 0);
        // its image under ζ_8 ↦ ζ_8^5 lies in the other prime only
        let moved = r.galois(&lifted, 1, 5);
        assert_eq!(moved.pi_valuation().unwrap(), Valuation::Finite(0));
        // products with the cofactor still divide exactly
        let both = &lifted * &(&r.root(1, 0) - &r.one());
        assert_eq!(both.pi_valuation().unwrap(), Valuation::Finite(v + 1));
    }

    #[test]
    fn scaled_arithmetic() {
        let r = ring(5, 1);
        let pi = &r.root(1, 0) - &r.one();
        let x = ScaledCyclo::new(pi.scale(&BigInt::from(3)), BigInt::from(15)).unwrap();
        assert_eq!(x.den(), &BigInt::from(5));
        assert_eq!(x.pi_valuation().unwrap(), Valuation::Finite(1 - 4));
        let y = ScaledCyclo::new(r.from_int(2), BigInt::from(4)).unwrap();
        assert_eq!(y.residue().unwrap(), r.field().from_int(3));
        assert!(x.sub(&x).is_zero());
        assert_eq!(Valuation::Finite(-2).ord_p(5), Some((-1, 2)));
    }
}
