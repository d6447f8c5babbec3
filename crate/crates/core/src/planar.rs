//! Combinatorial planarity, Dembowski–Ostrom monomials and Hermite's criterion.

use std::sync::Arc;

use serde::Serialize;

use crate::arith::gcd;
use crate::field::{FieldCtx, FieldElem};
use crate::interp::{FuncTable, PolyCoeffs};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlanarityReport {
    pub planar: bool,
    pub failing_alpha: Option<FieldElem>,
    /// Two distinct points where `x ↦ F(x+α) - F(x)` takes the same value.
    pub failing_collision: Option<(FieldElem, FieldElem)>,
}

impl PlanarityReport {
    fn planar() -> Self {
        PlanarityReport { planar: true, failing_alpha: None, failing_collision: None }
    }
}

struct Occupancy(Vec<u64>);

impl Occupancy {
    fn new(q: usize) -> Self {
        Occupancy(vec![0; q.div_ceil(64)])
    }

    fn clear(&mut self) {
        self.0.iter_mut().for_each(|w| *w = 0);
    }

    /// Marks `i`, returning whether it was already set.
    #[inline]
    fn test_and_set(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let seen = self.0[w] & b != 0;
        self.0[w] |= b;
        seen
    }
}

/// Whether every derivative `x ↦ F(x+α) - F(x)`, `α ≠ 0`, is a bijection.
///
/// Tables built by [`FuncTable::monomial`] only test `α = 1`, since
/// `F(αx) = α^d F(x)` makes every other derivative a rescaling.
pub fn is_planar(t: &FuncTable) -> PlanarityReport {
    let ctx = t.ctx();
    let q = ctx.q() as usize;
    let vals = t.by_index();
    let derivative =
        |alpha: FieldElem, x: FieldElem| ctx.sub(vals[ctx.add(x, alpha).index() as usize], vals[x.index() as usize]);

    let alphas: Box<dyn Iterator<Item = FieldElem>> = if t.monomial_exponent().is_some() {
        Box::new(std::iter::once(FieldElem::ONE))
    } else {
        Box::new(ctx.elements().skip(1))
    };
    let mut mask = Occupancy::new(q);
    for alpha in alphas {
        mask.clear();
        for x in ctx.elements() {
            let y = derivative(alpha, x);
            if mask.test_and_set(y.index() as usize) {
                let first = ctx.elements().find(|&z| derivative(alpha, z) == y).expect("seen before");
                return PlanarityReport {
                    planar: false,
                    failing_alpha: Some(alpha),
                    failing_collision: Some((first, x)),
                };
            }
        }
    }
    PlanarityReport::planar()
}

/// Planarity of `X^{p^i + p^j}` over `F_{p^n}`: `n / gcd(|j - i|, n)` odd.
pub fn is_planar_do_monomial(i: u64, j: u64, n: u64) -> bool {
    let diff = i.abs_diff(j);
    let g = if diff == 0 { n } else { gcd(diff, n) };
    (n / g) % 2 == 1
}

/// Hermite's criterion: one root, and for every `1 ≤ t < q-1` with
/// `p ∤ t` the reduction of `Q^t` modulo `X^q - X` has degree below `q-1`.
pub fn hermite_is_permutation(poly: &PolyCoeffs) -> bool {
    let ctx = poly.ctx();
    let q = ctx.q() as usize;
    let roots = ctx.elements().filter(|&x| poly.eval(x).is_zero()).count();
    if roots != 1 {
        return false;
    }
    let mut power = poly.coeffs().to_vec();
    for t in 1..q - 1 {
        if t > 1 {
            power = mul_mod_xq(ctx, &power, poly.coeffs());
        }
        if t as u64 % ctx.p() != 0 && !power[q - 1].is_zero() {
            return false;
        }
    }
    true
}

/// Product of two reduced polynomials, reduced again with `X^q = X`.
fn mul_mod_xq(ctx: &FieldCtx, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let q = a.len();
    let mut out = vec![FieldElem::ZERO; q];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let mut e = i + j;
            if e >= q {
                e -= q - 1;
            }
            out[e] = ctx.add(out[e], ctx.mul(x, y));
        }
    }
    out
}

/// Table of `x ↦ x^d`, tagged so that [`is_planar`] can use the `α = 1` reduction.
pub fn monomial_table(ctx: &Arc<FieldCtx>, d: u64) -> FuncTable {
    FuncTable::monomial(ctx.clone(), d)
}

/// Planarity of `F + c + Σ a_i x^{p^i}`.
pub fn linearized_shift_invariance(t: &FuncTable, c: FieldElem, a: &[FieldElem]) -> PlanarityReport {
    let ctx = t.ctx().clone();
    let p = ctx.p();
    let shifted = FuncTable::from_fn(ctx.clone(), |x| {
        let mut v = ctx.add(t.at(x), c);
        let mut frob = x;
        for &ai in a {
            v = ctx.add(v, ctx.mul(ai, frob));
            frob = ctx.pow(frob, p);
        }
        v
    });
    is_planar(&shifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::digit_sum;
    use crate::field::make_ctx;
    use crate::interp::{evaluate, interpolate};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(p: u64, n: u32) -> Arc<FieldCtx> {
        Arc::new(make_ctx(p, n).unwrap())
    }

    fn untagged(t: &FuncTable) -> FuncTable {
        t.map(|v| v)
    }

    fn is_bijection(t: &FuncTable) -> bool {
        let mut seen = std::collections::HashSet::new();
        t.values().iter().all(|v| seen.insert(*v))
    }

    #[test]
    fn basic_examples() {
        let f7 = ctx(7, 1);
        assert!(is_planar(&monomial_table(&f7, 2)).planar);
        let cube = is_planar(&untagged(&monomial_table(&f7, 3)));
        assert!(!cube.planar);
        let alpha = cube.failing_alpha.unwrap();
        let (x, y) = cube.failing_collision.unwrap();
        assert_ne!(x, y);
        let d = |z: FieldElem| f7.sub(f7.pow(f7.add(z, alpha), 3), f7.pow(z, 3));
        assert_eq!(d(x), d(y));

        let f81 = ctx(3, 4);
        assert!(is_planar(&monomial_table(&f81, 14)).planar);
        assert!(is_planar(&untagged(&monomial_table(&f81, 14))).planar);
    }

    #[test]
    fn monomial_shortcut_agrees_with_all_alphas() {
        for (p, n) in [(3, 2), (5, 1), (3, 3), (5, 2)] {
            let f = ctx(p, n);
            for d in 0..f.q() {
                let t = monomial_table(&f, d);
                assert_eq!(is_planar(&t).planar, is_planar(&untagged(&t)).planar, "q={} d={d}", f.q());
            }
        }
    }

    #[test]
    fn do_monomials() {
        assert!(is_planar_do_monomial(0, 0, 5));
        assert!(!is_planar_do_monomial(0, 1, 2));
        assert!(is_planar_do_monomial(0, 1, 3));
        for (p, n) in [(3u64, 2u32), (5, 2), (3, 3), (7, 2)] {
            let f = ctx(p, n);
            for d in 1..f.q() {
                if digit_sum(d, p) != 2 {
                    continue;
                }
                let digits: Vec<u64> =
                    (0..n).flat_map(|k| std::iter::repeat(k as u64).take((d / p.pow(k) % p) as usize)).collect();
                let (i, j) = (digits[0], digits[1]);
                assert_eq!(
                    is_planar(&monomial_table(&f, d)).planar,
                    is_planar_do_monomial(i, j, n as u64),
                    "q={} d={d}",
                    f.q()
                );
            }
        }
    }

    #[test]
    fn hermite_examples() {
        let f7 = ctx(7, 1);
        let x = PolyCoeffs::from_terms(f7.clone(), &[(1, FieldElem::ONE)]);
        assert!(hermite_is_permutation(&x));
        let x3 = PolyCoeffs::from_terms(f7.clone(), &[(3, FieldElem::ONE)]);
        assert!(!hermite_is_permutation(&x3));
        let x3_plus_x = PolyCoeffs::from_terms(f7.clone(), &[(3, FieldElem::ONE), (1, FieldElem::ONE)]);
        assert!(!hermite_is_permutation(&x3_plus_x));
        assert!(!is_bijection(&evaluate(&x3_plus_x)));
        let x5 = PolyCoeffs::from_terms(f7.clone(), &[(5, FieldElem::ONE)]);
        assert!(hermite_is_permutation(&x5));
    }

    #[test]
    fn hermite_matches_bijection() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for (p, n) in [(3, 1), (5, 1), (7, 1), (3, 2), (3, 3)] {
            let f = ctx(p, n);
            let q = f.q();
            for trial in 0..200 {
                // half the samples are permutations, to exercise both outcomes
                let table = if trial % 2 == 0 {
                    let mut perm: Vec<u64> = (0..q).collect();
                    for i in (1..perm.len()).rev() {
                        perm.swap(i, rng.gen_range(0..=i));
                    }
                    FuncTable::new(f.clone(), perm.into_iter().map(|v| f.elem(v).unwrap()).collect()).unwrap()
                } else {
                    FuncTable::new(f.clone(), (0..q).map(|_| f.elem(rng.gen_range(0..q)).unwrap()).collect())
                        .unwrap()
                };
                let poly = interpolate(&table);
                assert_eq!(hermite_is_permutation(&poly), is_bijection(&table));
            }
        }
    }

    #[test]
    fn linearized_shifts() {
        let f9 = ctx(3, 2);
        let sq = monomial_table(&f9, 2);
        assert!(linearized_shift_invariance(&sq, FieldElem::ONE, &[]).planar);
        assert!(linearized_shift_invariance(&sq, FieldElem::ZERO, &[FieldElem::ONE, FieldElem::ZERO]).planar);
        let f7 = ctx(7, 1);
        let cube = monomial_table(&f7, 3);
        for c in f7.elements() {
            assert!(!linearized_shift_invariance(&cube, c, &[]).planar);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let f27 = ctx(3, 3);
        for d in [2u64, 4, 10, 14, 5, 7] {
            let t = monomial_table(&f27, d);
            let verdict = is_planar(&t).planar;
            for _ in 0..5 {
                let c = f27.elem(rng.gen_range(0..27)).unwrap();
                let a: Vec<_> = (0..3).map(|_| f27.elem(rng.gen_range(0..27)).unwrap()).collect();
                assert_eq!(linearized_shift_invariance(&t, c, &a).planar, verdict);
            }
        }
    }

    #[test]
    fn invariance_under_translation_and_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let f = ctx(3, 2);
        for d in 0..9 {
            let t = monomial_table(&f, d);
            let verdict = is_planar(&t).planar;
            for _ in 0..4 {
                let beta = f.elem(rng.gen_range(0..9)).unwrap();
                let a = f.elem(rng.gen_range(1..9)).unwrap();
                let moved = FuncTable::from_fn(f.clone(), |x| f.mul(a, t.at(f.add(x, beta))));
                assert_eq!(is_planar(&moved).planar, verdict);
            }
        }
    }
}
