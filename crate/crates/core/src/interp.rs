//! Function tables, interpolating polynomials and algebraic degree.

use std::sync::Arc;

use rayon::prelude::*;

use crate::digits::{digit_sum, star};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};

/// A function `F_q -> F_q` stored as its values in the order
/// `0, g^0, g^1, …, g^{q-2}`.
#[derive(Debug, Clone)]
pub struct FuncTable {
    ctx: Arc<FieldCtx>,
    values: Vec<FieldElem>,
    monomial: Option<u64>,
}

impl FuncTable {
    pub fn new(ctx: Arc<FieldCtx>, values: Vec<FieldElem>) -> Result<Self> {
        if values.len() as u64 != ctx.q() {
            return Err(Error::TableSize { got: values.len(), expected: ctx.q() as usize });
        }
        Ok(FuncTable { ctx, values, monomial: None })
    }

    pub fn from_fn(ctx: Arc<FieldCtx>, f: impl Fn(FieldElem) -> FieldElem) -> Self {
        let values = (0..ctx.q() as usize).map(|pos| f(ctx.at_position(pos))).collect();
        FuncTable { ctx, values, monomial: None }
    }

    /// `x ↦ x^d` with `0^0 = 1`.
    pub fn monomial(ctx: Arc<FieldCtx>, d: u64) -> Self {
        let q = ctx.q();
        let mut values = Vec::with_capacity(q as usize);
        values.push(if d == 0 { FieldElem::ONE } else { FieldElem::ZERO });
        values.extend((0..q - 1).map(|k| ctx.exp((k as u128 * d as u128 % (q - 1) as u128) as u64)));
        FuncTable { ctx, values, monomial: Some(d) }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    /// Values in enumeration order.
    pub fn values(&self) -> &[FieldElem] {
        &self.values
    }

    /// The exponent `d` if the table was built as `x ↦ x^d`.
    pub fn monomial_exponent(&self) -> Option<u64> {
        self.monomial
    }

    pub fn at(&self, x: FieldElem) -> FieldElem {
        self.values[self.ctx.position(x)]
    }

    /// Values indexed by the raw element index rather than by position.
    pub fn by_index(&self) -> Vec<FieldElem> {
        let mut out = vec![FieldElem::ZERO; self.values.len()];
        for (pos, &v) in self.values.iter().enumerate() {
            out[self.ctx.at_position(pos).index() as usize] = v;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Pointwise map of the values, keeping the domain.
    pub fn map(&self, f: impl Fn(FieldElem) -> FieldElem) -> FuncTable {
        FuncTable {
            ctx: self.ctx.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            monomial: None,
        }
    }

    /// `x ↦ G(F(x))` for another table `G` on the same field.
    pub fn compose_after(&self, g: &FuncTable) -> FuncTable {
        FuncTable {
            ctx: self.ctx.clone(),
            values: self.values.iter().map(|&v| g.at(v)).collect(),
            monomial: None,
        }
    }
}

impl PartialEq for FuncTable {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.q() == other.ctx.q() && self.values == other.values
    }
}

/// Coefficients `a_0, …, a_{q-1}` of a polynomial of degree at most `q-1`.
#[derive(Debug, Clone)]
pub struct PolyCoeffs {
    ctx: Arc<FieldCtx>,
    coeffs: Vec<FieldElem>,
}

impl PolyCoeffs {
    /// Coefficients beyond `X^{q-1}` are rejected; pad with zeros otherwise.
    pub fn new(ctx: Arc<FieldCtx>, mut coeffs: Vec<FieldElem>) -> Result<Self> {
        let q = ctx.q() as usize;
        if coeffs.len() > q {
            return Err(Error::TableSize { got: coeffs.len(), expected: q });
        }
        coeffs.resize(q, FieldElem::ZERO);
        Ok(PolyCoeffs { ctx, coeffs })
    }

    /// Build from `(exponent, coefficient)` pairs; exponents are folded into
    /// `[0, q-1]` using `X^q = X`.
    pub fn from_terms(ctx: Arc<FieldCtx>, terms: &[(u64, FieldElem)]) -> Self {
        let q = ctx.q();
        let mut coeffs = vec![FieldElem::ZERO; q as usize];
        for &(e, c) in terms {
            let e = if e == 0 { 0 } else { (e - 1) % (q - 1) + 1 };
            coeffs[e as usize] = ctx.add(coeffs[e as usize], c);
        }
        PolyCoeffs { ctx, coeffs }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn eval(&self, x: FieldElem) -> FieldElem {
        self.ctx.eval_poly(&self.coeffs, x)
    }

    pub fn to_table(&self) -> FuncTable {
        let values = (0..self.coeffs.len()).map(|pos| self.eval(self.ctx.at_position(pos))).collect();
        FuncTable { ctx: self.ctx.clone(), values, monomial: None }
    }

    /// Exponents with a nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i)
    }
}

impl PartialEq for PolyCoeffs {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.q() == other.ctx.q() && self.coeffs == other.coeffs
    }
}

/// Unique interpolating polynomial of degree at most `q-1`.
///
/// With `F(0) = a_0` and `F(g^k) = Σ_i a_i g^{ik}`, orthogonality over the
/// cyclic group gives `a_i = -Σ_k F(g^k) g^{-ik}` for `1 ≤ i ≤ q-2`, while
/// `a_{q-1} = -Σ_{x≠0} F(x) - F(0)`.
pub fn interpolate(t: &FuncTable) -> PolyCoeffs {
    let ctx = &t.ctx;
    let q = ctx.q() as usize;
    let order = q - 1;
    let p = ctx.p();
    let n = ctx.n() as usize;

    // coordinates of g^e, flattened
    let exp_coords: Vec<u64> = (0..order).flat_map(|e| ctx.coords(ctx.exp(e as u64))).collect();
    let logs: Vec<Option<usize>> = t.values[1..]
        .iter()
        .map(|&v| if v.is_zero() { None } else { Some(ctx.dlog(v).expect("nonzero") as usize) })
        .collect();

    let neg_sum = |acc: &[u64]| -> FieldElem {
        let c: Vec<u64> = acc.iter().map(|&a| (p - a % p) % p).collect();
        ctx.from_coords(&c)
    };

    let mut coeffs = vec![FieldElem::ZERO; q];
    coeffs[0] = t.values[0];
    let middle: Vec<FieldElem> = (1..order)
        .into_par_iter()
        .map(|i| {
            let mut acc = vec![0u64; n];
            for (k, l) in logs.iter().enumerate() {
                if let Some(l) = *l {
                    let e = (l + order - (i * k) % order) % order;
                    for (a, c) in acc.iter_mut().zip(&exp_coords[e * n..(e + 1) * n]) {
                        *a += c;
                    }
                }
            }
            neg_sum(&acc)
        })
        .collect();
    coeffs[1..order].copy_from_slice(&middle);

    let mut total = vec![0u64; n];
    for &v in &t.values {
        for (a, c) in total.iter_mut().zip(ctx.coords(v)) {
            *a += c;
        }
    }
    coeffs[order] = neg_sum(&total);
    PolyCoeffs { ctx: ctx.clone(), coeffs }
}

pub fn evaluate(poly: &PolyCoeffs) -> FuncTable {
    poly.to_table()
}

/// Largest `s_p(i)` over the support of the interpolating polynomial.
pub fn adeg(t: &FuncTable) -> Result<u32> {
    adeg_of(&interpolate(t))
}

pub fn adeg_of(poly: &PolyCoeffs) -> Result<u32> {
    let p = poly.ctx.p();
    poly.support()
        .map(|i| digit_sum(i as u64, p) as u32)
        .max()
        .ok_or(Error::ZeroFunction)
}

/// Pointwise `F^j` with `0^0 = 1`.
pub fn power_table(t: &FuncTable, j: u64) -> FuncTable {
    let ctx = &t.ctx;
    let values = t.values.iter().map(|&v| ctx.pow(v, j)).collect();
    let monomial = t.monomial.and_then(|d| star(d, j, ctx.q()).ok());
    FuncTable { ctx: ctx.clone(), values, monomial }
}

/// Entry `i` is `adeg(F^i)` for `1 ≤ i ≤ q-1`; entry `0` is `0`.
pub fn compose_adeg_profile(t: &FuncTable) -> Result<Vec<u32>> {
    if t.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let q = t.ctx.q();
    let tail: Vec<u32> = (1..q)
        .into_par_iter()
        .map(|i| adeg_of(&interpolate(&power_table(t, i))))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(q as usize);
    out.push(0);
    out.extend(tail);
    Ok(out)
}
