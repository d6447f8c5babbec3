//! Numerical checks of the valuation statements at small field sizes.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::digits::digit_sum;
use crate::error::Result;
use crate::field::FieldCtx;
use crate::interp::{interpolate, power_table, FuncTable};

use super::matrices::{CycloMatrix, Padic};
use super::ring::{ScaledCyclo, Valuation};

/// One entry whose valuation (or residue) differs from the predicted one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Deviation {
    pub check: &'static str,
    pub row: usize,
    pub col: usize,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: &'static str,
    pub q: u64,
    pub checked: usize,
    pub deviations: Vec<Deviation>,
}

impl CheckReport {
    fn new(name: &'static str, q: u64) -> Self {
        CheckReport { name, q, checked: 0, deviations: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.deviations.is_empty()
    }

    fn expect_val(&mut self, check: &'static str, row: usize, col: usize, expected: i64, got: Valuation) {
        self.checked += 1;
        if got != Valuation::Finite(expected) {
            self.deviations.push(Deviation {
                check,
                row,
                col,
                expected: expected.to_string(),
                got: got.to_string(),
            });
        }
    }
}

/// `s_p(i)` for `0 ≤ i ≤ q-1`; this is also `adeg(λ_i)`.
fn adeg_char(i: usize, p: u64) -> i64 {
    digit_sum(i as u64, p) as i64
}

/// `ord_π G(χ, 1/τ^k) = s_p(k)` for `1 ≤ k ≤ q-2`, and `0` at `k = q-1`,
/// over every nontrivial `χ`. Rows of the deviations are character
/// positions, columns are `k`.
pub fn verify_stickelberger(padic: &Padic) -> Result<CheckReport> {
    let field = padic.field().clone();
    let (p, q) = (field.p(), field.q());
    let mut report = CheckReport::new("stickelberger", q);
    for upos in 1..q as usize {
        let u = field.at_position(upos);
        for k in 1..q {
            let g = padic.gauss_sum_inverse(u, k)?;
            let expected = if k == q - 1 { 0 } else { adeg_char(k as usize, p) };
            report.expect_val("ord G(chi, 1/lambda)", upos, k as usize, expected, g.pi_valuation()?);
        }
    }
    Ok(report)
}

/// Valuations of the change-of-basis matrices and the vanishing of the
/// trivial-character row.
pub fn verify_base_conversion(padic: &Padic) -> Result<CheckReport> {
    let t = padic.basis_change();
    let tinv = padic.basis_change_inverse();
    base_conversion_report(padic.field(), &t, &tinv)
}

pub fn base_conversion_report(field: &Arc<FieldCtx>, t: &CycloMatrix, tinv: &CycloMatrix) -> Result<CheckReport> {
    let (p, q) = (field.p(), field.q() as usize);
    let mut report = CheckReport::new("base-conversion", q as u64);
    for i in 1..q {
        let a = adeg_char(i, p);
        report.checked += 1;
        if !t.num(0, i).is_zero() {
            report.deviations.push(Deviation {
                check: "T[1, lambda] = 0",
                row: 0,
                col: i,
                expected: "0".into(),
                got: format!("{:?}", t.get(0, i)),
            });
        }
        for u in 1..q {
            report.expect_val("ord T", u, i, a, t.get(u, i).pi_valuation()?);
            report.expect_val("ord T^-1", i, u, -a, tinv.get(i, u).pi_valuation()?);
        }
    }
    Ok(report)
}

/// Every entry of `A^F` reduces to the matching interpolation coefficient:
/// residue of `A_{λ_j, μ_i}` is the coefficient of `X^i` in `F^j`.
pub fn verify_reduction(padic: &Padic, t: &FuncTable) -> Result<CheckReport> {
    let a = padic.ultrametric_matrix(t)?;
    reduction_report(t, &a)
}

pub fn reduction_report(t: &FuncTable, a: &CycloMatrix) -> Result<CheckReport> {
    let q = t.ctx().q() as usize;
    let mut report = CheckReport::new("reduction", q as u64);
    for j in 0..q {
        let poly = interpolate(&power_table(t, j as u64));
        for i in 0..q {
            report.checked += 1;
            let got = a.get(j, i).residue()?;
            if got != poly.coeff(i) {
                report.deviations.push(Deviation {
                    check: "A mod p = a_ij",
                    row: j,
                    col: i,
                    expected: format!("{:?}", poly.coeff(i)),
                    got: format!("{got:?}"),
                });
            }
        }
    }
    Ok(report)
}

/// Whether every `C^F_{v,u}` with `u, v ≠ 0` satisfies `C̄·C = 1/q`, which
/// forces `ord_π C = -n(p-1)/2`. The valuation alone is not enough: `x^3`
/// over `F_5` meets it without being planar.
pub fn planar_via_valuation(padic: &Padic, t: &FuncTable) -> Result<bool> {
    let field = padic.field();
    let vals = padic.positions(t)?;
    let target = Valuation::Finite(-((field.n() as i64) * (field.p() as i64 - 1)) / 2);
    let q = field.q() as usize;
    let q_elem = padic.ring().from_int(q as i64);
    for v in 1..q {
        for u in 1..q {
            let w = padic.correlation_num_raw(&vals, v, u);
            let c = ScaledCyclo::new(w.clone(), BigInt::from(q))?;
            if c.pi_valuation()? != target {
                return Ok(false);
            }
            // C = W/q with W·W̄ = q
            if &w * &w.conj_p() != q_elem {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Minimum of `ord_π C^F_{v,u}` over nontrivial `u, v`.
pub fn min_correlation_valuation(c: &CycloMatrix) -> Result<Valuation> {
    let mut best = Valuation::Infinite;
    for v in 1..c.rows() {
        for u in 1..c.cols() {
            best = best.min(c.get(v, u).pi_valuation()?);
        }
    }
    Ok(best)
}

/// `ord_π A_{μ,λ} ≥ adeg(λ) - adeg(μ) + min ord_π C^F` over nontrivial
/// `μ` (rows) and `λ` (columns).
pub fn verify_base_conversion_bound(padic: &Padic, t: &FuncTable) -> Result<CheckReport> {
    let field = padic.field();
    let (p, q) = (field.p(), field.q() as usize);
    let c = padic.correlation_matrix(t)?;
    let a = padic.ultrametric_matrix(t)?;
    let mut report = CheckReport::new("base-conversion-bound", q as u64);
    let Valuation::Finite(min_c) = min_correlation_valuation(&c)? else {
        return Ok(report);
    };
    for mu in 1..q {
        for lam in 1..q {
            report.checked += 1;
            let bound = adeg_char(lam, p) - adeg_char(mu, p) + min_c;
            let got = a.get(mu, lam).pi_valuation()?;
            if got < Valuation::Finite(bound) {
                report.deviations.push(Deviation {
                    check: "ord A >= bound",
                    row: mu,
                    col: lam,
                    expected: format!(">= {bound}"),
                    got: got.to_string(),
                });
            }
        }
    }
    Ok(report)
}

/// For planar `F`: entries of `A^F` with `adeg(λ) - adeg(μ) > n(p-1)/2`
/// reduce to zero.
pub fn verify_degree_consequence(padic: &Padic, t: &FuncTable) -> Result<CheckReport> {
    let field = padic.field();
    let (p, q) = (field.p(), field.q() as usize);
    let half = field.n() as i64 * (p as i64 - 1);
    let a = padic.ultrametric_matrix(t)?;
    let mut report = CheckReport::new("degree-consequence", q as u64);
    for mu in 1..q {
        for lam in 1..q {
            if 2 * (adeg_char(lam, p) - adeg_char(mu, p)) <= half {
                continue;
            }
            report.checked += 1;
            let r = a.get(mu, lam).residue()?;
            if !r.is_zero() {
                report.deviations.push(Deviation {
                    check: "A reduces to 0",
                    row: mu,
                    col: lam,
                    expected: "0".into(),
                    got: format!("{r:?}"),
                });
            }
        }
    }
    Ok(report)
}
