//! Planar monomials over small fields: a witness filter followed by brute
//! force on the survivors.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::checked_pow;
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::interp::FuncTable;
use crate::planar::is_planar;

use super::witness::{witness_search, SearchStrategy};

/// Default largest field order handled by brute force.
pub const DEFAULT_CLASSIFY_CAP: u64 = 2401;

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub p: u64,
    pub n: u32,
    pub q: u64,
    /// Exponents `d ∈ [1, q-1]` with `x^d` planar.
    pub planar: Vec<u64>,
    /// Exponents ruled out by a witness.
    pub witnessed: usize,
    /// Exponents passed to brute force.
    pub survivors: usize,
    /// Survivors without a witness that are nevertheless not planar.
    pub unwitnessed_nonplanar: Vec<u64>,
}

/// Classifies the planar monomials `x^d`, `1 ≤ d ≤ q-1`, over `F_{p^n}`.
pub fn classify_planar_monomials(p: u64, n: u32, cap: u64, strategy: SearchStrategy) -> Result<Classification> {
    let q = checked_pow(p, n).ok_or(Error::CapExceeded { size: u64::MAX, cap })?;
    if q > cap {
        return Err(Error::CapExceeded { size: q, cap });
    }
    let ctx = Arc::new(FieldCtx::new(p, n)?);
    let stage1: Vec<(u64, bool)> = (1..q)
        .into_par_iter()
        .map(|d| witness_search(p, n, d, strategy, None).map(|w| (d, w.is_some())))
        .collect::<Result<_>>()?;
    let survivors: Vec<u64> = stage1.iter().filter(|&&(_, w)| !w).map(|&(d, _)| d).collect();
    let verdicts: Vec<(u64, bool)> = survivors
        .par_iter()
        .map(|&d| (d, is_planar(&FuncTable::monomial(ctx.clone(), d)).planar))
        .collect();
    let planar: Vec<u64> = verdicts.iter().filter(|v| v.1).map(|v| v.0).collect();
    let rejected: Vec<u64> = verdicts.iter().filter(|v| !v.1).map(|v| v.0).collect();
    let unwitnessed_nonplanar = if matches!(strategy, SearchStrategy::Exhaustive) {
        rejected
    } else {
        rejected
            .into_iter()
            .filter(|&d| matches!(witness_search(p, n, d, SearchStrategy::Exhaustive, None), Ok(None)))
            .collect()
    };
    Ok(Classification {
        p,
        n,
        q,
        witnessed: stage1.len() - survivors.len(),
        survivors: survivors.len(),
        planar,
        unwitnessed_nonplanar,
    })
}
