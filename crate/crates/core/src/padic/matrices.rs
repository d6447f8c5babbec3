//! Gauss sums and the change-of-basis, correlation and ultrametric matrices.
//!
//! Additive characters are `χ_u(x) = ζ_p^{tr(ux)}`, indexed by the position
//! of `u` in `0, g^0, g^1, …`. Multiplicative characters are
//! `λ_i(x) = τ(x)^i` for `1 ≤ i ≤ q-1` (vanishing at 0) and `λ_0 = 1`.
//! Their dual functionals are
//! `χ_u^∨ = (1/q) Σ_x ζ_p^{-tr(ux)} δ_x`,
//! `λ_0^∨ = δ_0`, and
//! `λ_i^∨ = (1/(q-1)) Σ_{x≠0} τ(x)^{-i} δ_x - [i = q-1] δ_0`.

use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::interp::FuncTable;

use super::ring::{CycloElem, CycloRing, ScaledCyclo};

/// Default size limit for the `q × q` matrix builders.
pub const DEFAULT_MATRIX_CAP: u64 = 81;
/// Default size limit for individual Gauss sums.
pub const DEFAULT_GAUSS_CAP: u64 = 1 << 10;

/// Matrix with entries `nums[r][c] / den` sharing one denominator.
#[derive(Clone, Debug)]
pub struct CycloMatrix {
    rows: usize,
    cols: usize,
    den: BigInt,
    nums: Vec<CycloElem>,
}

impl CycloMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn num(&self, r: usize, c: usize) -> &CycloElem {
        &self.nums[r * self.cols + c]
    }

    pub fn get(&self, r: usize, c: usize) -> ScaledCyclo {
        ScaledCyclo::new(self.num(r, c).clone(), self.den.clone()).expect("positive denominator")
    }

    pub fn mul(&self, other: &CycloMatrix) -> Result<CycloMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidParameter("matrix shapes do not match".into()));
        }
        let ring = self.nums[0].ring().clone();
        let nums: Vec<CycloElem> = (0..self.rows * other.cols)
            .into_par_iter()
            .map(|idx| {
                let (r, c) = (idx / other.cols, idx % other.cols);
                let mut acc = ring.zero();
                for k in 0..self.cols {
                    let (a, b) = (self.num(r, k), other.num(k, c));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect();
        Ok(CycloMatrix { rows: self.rows, cols: other.cols, den: &self.den * &other.den, nums })
    }

    /// Exact equality of the represented rational matrices.
    pub fn same_as(&self, other: &CycloMatrix) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .nums
                .par_iter()
                .zip(&other.nums)
                .all(|(a, b)| a.scale(&other.den) == b.scale(&self.den))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let x = self.num(r, c);
                    if r == c {
                        *x == x.ring().from_int(1).scale(&self.den)
                    } else {
                        x.is_zero()
                    }
                })
            })
    }
}

/// Shared tables for character sums over one field.
pub struct Padic {
    ring: Arc<CycloRing>,
    /// `tr(g^e)` for `e < q-1`.
    tr_exp: Vec<u64>,
}

impl Padic {
    /// Fails with `CapExceeded` when `q > cap`.
    pub fn new(field: Arc<FieldCtx>, cap: u64) -> Result<Self> {
        if field.q() > cap {
            return Err(Error::CapExceeded { size: field.q(), cap });
        }
        let tr_exp = (0..field.q() - 1).map(|e| field.trace(field.exp(e)).index() as u64).collect();
        Ok(Padic { ring: CycloRing::new(field), tr_exp })
    }

    pub fn ring(&self) -> &Arc<CycloRing> {
        &self.ring
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        self.ring.field()
    }

    fn q(&self) -> usize {
        self.field().q() as usize
    }

    fn m(&self) -> usize {
        self.q() - 1
    }

    fn p(&self) -> usize {
        self.field().p() as usize
    }

    /// `tr(u·x)` for field elements given by position.
    fn tr_pos(&self, u: usize, x: usize) -> usize {
        if u == 0 || x == 0 {
            0
        } else {
            self.tr_exp[(u - 1 + x - 1) % self.m()] as usize
        }
    }

    fn grid(&self) -> Vec<i64> {
        vec![0i64; self.p() * self.m()]
    }

    fn bump(&self, grid: &mut [i64], a: usize, b: usize, by: i64) {
        let (p, m) = (self.p(), self.m());
        grid[(a % p) * m + b % m] += by;
    }

    /// `-Σ_{x≠0} ζ_p^{tr(ux)} ζ_m^{k·log x}` for the additive character at
    /// position `u` (nonzero).
    fn gauss_raw(&self, u: usize, k: usize) -> CycloElem {
        let m = self.m();
        let mut grid = self.grid();
        for x in 1..=m {
            let e = (k % m) * (x - 1) % m;
            self.bump(&mut grid, self.tr_pos(u, x), e, 1);
        }
        -&self.ring.from_grid(&grid)
    }

    /// `G(χ_u, τ^k) = -Σ_{x≠0} χ_u(x) τ(x)^k` for `u ≠ 0`, `1 ≤ k ≤ q-1`.
    pub fn gauss_sum(&self, u: FieldElem, k: u64) -> Result<CycloElem> {
        let pos = self.check_gauss_args(u, k)?;
        Ok(self.gauss_raw(pos, k as usize))
    }

    /// `G(χ_u, 1/τ^k)`, the sum whose valuation is `s_p(k)` for
    /// `1 ≤ k ≤ q-2` and `0` at `k = q-1`.
    pub fn gauss_sum_inverse(&self, u: FieldElem, k: u64) -> Result<CycloElem> {
        let pos = self.check_gauss_args(u, k)?;
        Ok(self.gauss_raw(pos, self.m() - k as usize % self.m()))
    }

    fn check_gauss_args(&self, u: FieldElem, k: u64) -> Result<usize> {
        if u.is_zero() {
            return Err(Error::InvalidParameter("Gauss sums need a nontrivial additive character".into()));
        }
        if k == 0 || k > self.m() as u64 {
            return Err(Error::ExponentRange { value: k, max: self.m() as u64 });
        }
        Ok(self.field().position(u))
    }

    /// `T_{χ_u, λ_i} = χ_u(λ_i^∨)`, rows `u`, columns `i`, denominator `q-1`.
    pub fn basis_change(&self) -> CycloMatrix {
        let (q, m) = (self.q(), self.m());
        let nums = (0..q * q)
            .into_par_iter()
            .map(|idx| {
                let (u, i) = (idx / q, idx % q);
                let mut grid = self.grid();
                if i == 0 {
                    self.bump(&mut grid, 0, 0, m as i64);
                } else {
                    for x in 1..=m {
                        self.bump(&mut grid, self.tr_pos(u, x), m - i * (x - 1) % m, 1);
                    }
                    if i == m {
                        self.bump(&mut grid, 0, 0, -(m as i64));
                    }
                }
                self.ring.from_grid(&grid)
            })
            .collect();
        CycloMatrix { rows: q, cols: q, den: BigInt::from(m), nums }
    }

    /// `T^{-1}_{λ_i, χ_u} = λ_i(χ_u^∨)`, rows `i`, columns `u`, denominator `q`.
    pub fn basis_change_inverse(&self) -> CycloMatrix {
        let (q, m, p) = (self.q(), self.m(), self.p());
        let nums = (0..q * q)
            .into_par_iter()
            .map(|idx| {
                let (i, u) = (idx / q, idx % q);
                let mut grid = self.grid();
                if i == 0 {
                    self.bump(&mut grid, 0, 0, 1);
                }
                for x in 1..=m {
                    let a = p - self.tr_pos(u, x);
                    self.bump(&mut grid, a, i * (x - 1) % m, 1);
                }
                self.ring.from_grid(&grid)
            })
            .collect();
        CycloMatrix { rows: q, cols: q, den: BigInt::from(q), nums }
    }

    pub(crate) fn positions(&self, t: &FuncTable) -> Result<Vec<usize>> {
        if t.ctx().q() != self.field().q() || t.ctx().p() != self.field().p() {
            return Err(Error::InvalidParameter("table belongs to a different field".into()));
        }
        Ok(t.values().iter().map(|&v| self.field().position(v)).collect())
    }

    /// Numerator of `q · C^F_{v,u} = Σ_x ζ_p^{tr(vF(x)) - tr(ux)}`.
    pub(crate) fn correlation_num_raw(&self, vals: &[usize], v: usize, u: usize) -> CycloElem {
        let p = self.p();
        let mut grid = self.grid();
        for (x, &fx) in vals.iter().enumerate() {
            self.bump(&mut grid, self.tr_pos(v, fx) + p - self.tr_pos(u, x), 0, 1);
        }
        self.ring.from_grid(&grid)
    }

    /// `C^F_{v,u} = (1/q) Σ_x ζ_p^{tr(vF(x) - ux)}`, rows `v`, columns `u`.
    pub fn correlation_matrix(&self, t: &FuncTable) -> Result<CycloMatrix> {
        let vals = self.positions(t)?;
        let q = self.q();
        let nums = (0..q * q).into_par_iter().map(|idx| self.correlation_num_raw(&vals, idx / q, idx % q)).collect();
        Ok(CycloMatrix { rows: q, cols: q, den: BigInt::from(q), nums })
    }

    /// `q · C^F_{v,u}` for a single pair of positions.
    pub fn correlation_num(&self, t: &FuncTable, v: usize, u: usize) -> Result<CycloElem> {
        let vals = self.positions(t)?;
        Ok(self.correlation_num_raw(&vals, v, u))
    }

    /// `C^F_{v,u}` for a single pair of positions.
    pub fn correlation_entry(&self, t: &FuncTable, v: usize, u: usize) -> Result<ScaledCyclo> {
        let vals = self.positions(t)?;
        ScaledCyclo::new(self.correlation_num_raw(&vals, v, u), BigInt::from(self.q()))
    }

    /// `A^F_{λ_j, μ_i} = μ_i^∨(λ_j ∘ F)`, rows `j`, columns `i`,
    /// denominator `q-1`.
    pub fn ultrametric_matrix(&self, t: &FuncTable) -> Result<CycloMatrix> {
        let vals = self.positions(t)?;
        let (q, m) = (self.q(), self.m());
        // exponent of ζ_m in λ_j(y), None when λ_j(y) = 0
        let lam = |j: usize, y: usize| -> Option<usize> {
            if j == 0 {
                Some(0)
            } else if y == 0 {
                None
            } else {
                Some(j * (y - 1) % m)
            }
        };
        let nums = (0..q * q)
            .into_par_iter()
            .map(|idx| {
                let (j, i) = (idx / q, idx % q);
                let mut grid = self.grid();
                let at_zero = lam(j, vals[0]);
                if i == 0 {
                    if let Some(e) = at_zero {
                        self.bump(&mut grid, 0, e, m as i64);
                    }
                } else {
                    for x in 1..=m {
                        if let Some(e) = lam(j, vals[x]) {
                            self.bump(&mut grid, 0, e + m - i * (x - 1) % m, 1);
                        }
                    }
                    if i == m {
                        if let Some(e) = at_zero {
                            self.bump(&mut grid, 0, e, -(m as i64));
                        }
                    }
                }
                self.ring.from_grid(&grid)
            })
            .collect();
        Ok(CycloMatrix { rows: q, cols: q, den: BigInt::from(m), nums })
    }
}

/// `C^F` with the default cap.
pub fn correlation_matrix(t: &FuncTable) -> Result<CycloMatrix> {
    Padic::new(t.ctx().clone(), DEFAULT_MATRIX_CAP)?.correlation_matrix(t)
}

/// `A^F` with the default cap.
pub fn ultrametric_matrix(t: &FuncTable) -> Result<CycloMatrix> {
    Padic::new(t.ctx().clone(), DEFAULT_MATRIX_CAP)?.ultrametric_matrix(t)
}

/// `G(χ_u, τ^k)` with the default Gauss-sum cap.
pub fn gauss_sum(field: &Arc<FieldCtx>, u: FieldElem, k: u64) -> Result<CycloElem> {
    Padic::new(field.clone(), DEFAULT_GAUSS_CAP)?.gauss_sum(u, k)
}
