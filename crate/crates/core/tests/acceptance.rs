//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use planarlab_core::bounds::{
    all_witness_exponents, classify_planar_monomials, conjecture_scan, power2_case3_witness, prime_field_witness,
    technical_lemma_check, verify_theorem1, BaseFilter, Power2Variant, ScanConfig, ScanOptions, SearchStrategy,
    DEFAULT_CLASSIFY_CAP,
};
use planarlab_core::padic::{planar_via_valuation, verify_reduction, verify_stickelberger, Padic};
use planarlab_core::{
    d_form, hermite_is_permutation, interpolate, is_planar, make_ctx, star, FieldCtx, FieldElem, FuncTable,
    PolyCoeffs,
};

const SEED: u64 = 0x5eed_2024;

type Check = std::result::Result<String, String>;

// independent digit arithmetic for the oracles below
fn ds(mut x: u64, b: u64) -> u64 {
    let mut s = 0;
    while x > 0 {
        s += x % b;
        x /= b;
    }
    s
}

fn star_oracle(e: u64, d: u64, q: u64) -> u64 {
    if e == 0 || d == 0 {
        return 0;
    }
    match (e as u128 * d as u128 % (q as u128 - 1)) as u64 {
        0 => q - 1,
        r => r,
    }
}

fn ctx(p: u64, n: u32) -> Arc<FieldCtx> {
    Arc::new(make_ctx(p, n).unwrap())
}

fn random_table(ctx: &Arc<FieldCtx>, rng: &mut ChaCha8Rng) -> FuncTable {
    let values = (0..ctx.q()).map(|_| ctx.elem(rng.gen_range(0..ctx.q())).unwrap()).collect();
    FuncTable::new(ctx.clone(), values).unwrap()
}

fn random_nonzero(ctx: &FieldCtx, rng: &mut ChaCha8Rng) -> FieldElem {
    ctx.elem(rng.gen_range(1..ctx.q())).unwrap()
}

/// `a·x^{p^k+1}` composed with `x ↦ c·x + t` plus a linearized and a
/// constant term: planar whenever the monomial is.
fn random_equivalent(ctx: &Arc<FieldCtx>, k: u32, rng: &mut ChaCha8Rng) -> FuncTable {
    let d = ctx.p().pow(k) + 1;
    let (a, c) = (random_nonzero(ctx, rng), random_nonzero(ctx, rng));
    let t = ctx.elem(rng.gen_range(0..ctx.q())).unwrap();
    let lin: Vec<FieldElem> = (0..ctx.n()).map(|_| ctx.elem(rng.gen_range(0..ctx.q())).unwrap()).collect();
    let c0 = ctx.elem(rng.gen_range(0..ctx.q())).unwrap();
    FuncTable::from_fn(ctx.clone(), |x| {
        let y = ctx.add(ctx.mul(c, x), t);
        let mut out = ctx.add(ctx.mul(a, ctx.pow(y, d)), c0);
        for (i, &l) in lin.iter().enumerate() {
            out = ctx.add(out, ctx.mul(l, ctx.pow(x, ctx.p().pow(i as u32))));
        }
        out
    })
}

fn expected_planar(p: u64, n: u32) -> BTreeSet<u64> {
    let q = p.pow(n);
    (0..n).map(|i| star_oracle(2, p.pow(i), q)).collect()
}

const CLASSIFY_CASES: [(u64, u32); 8] = [(5, 1), (7, 1), (11, 1), (13, 1), (5, 2), (7, 2), (7, 4), (3, 2)];

fn criterion_1() -> Check {
    for (p, n) in CLASSIFY_CASES {
        let c = classify_planar_monomials(p, n, DEFAULT_CLASSIFY_CAP, SearchStrategy::default()).map_err(|e| e.to_string())?;
        let got: BTreeSet<u64> = c.planar.iter().copied().collect();
        let want = if (p, n) == (3, 2) { [2, 6].into_iter().collect() } else { expected_planar(p, n) };
        if got != want {
            return Err(format!("({p},{n}): got {got:?}, expected {want:?}"));
        }
    }
    Ok(format!("{} fields, exact sets", CLASSIFY_CASES.len()))
}

fn criterion_2() -> Check {
    let mut cases: Vec<(u64, u32, u64)> = Vec::new();
    for (p, n) in CLASSIFY_CASES {
        cases.extend(expected_planar(p, n).into_iter().map(|d| (p, n, d)));
    }
    cases.push((3, 4, 14));
    let mut checked = 0u64;
    for &(p, n, d) in &cases {
        let q = p.pow(n);
        let half2 = n as u64 * (p - 1);
        for e in 1..q {
            let lhs = ds(star_oracle(e, d, q), p) as i64 - ds(e, p) as i64;
            checked += 1;
            if 2 * lhs > half2 as i64 {
                return Err(format!("({p},{n},d={d}) violated at e={e}: {lhs}"));
            }
        }
    }
    let cm = FuncTable::monomial(ctx(3, 4), 14);
    if !is_planar(&cm).planar {
        return Err("x^14 over F_81 reported non-planar".into());
    }
    let report = verify_theorem1(&cm).map_err(|e| e.to_string())?;
    if !report.passed() {
        return Err(format!("degree bound for x^14 over F_81 failed at {:?}", report.violations));
    }
    Ok(format!("{} monomials, {checked} pairs (d, e)", cases.len()))
}

fn criterion_3() -> Check {
    let mut checked = 0;
    for (p, n) in [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1), (5, 2), (3, 3)] {
        let pd = Padic::new(ctx(p, n), 81).map_err(|e| e.to_string())?;
        let r = verify_stickelberger(&pd).map_err(|e| e.to_string())?;
        if !r.passed() {
            return Err(format!("q={}: {:?}", r.q, &r.deviations[..r.deviations.len().min(3)]));
        }
        checked += r.checked;
    }
    Ok(format!("{checked} Gauss sums"))
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut entries = 0;
    for (p, n) in [(3, 2), (5, 2)] {
        let pd = Padic::new(ctx(p, n), 81).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let f = random_table(pd.field(), &mut rng);
            let r = verify_reduction(&pd, &f).map_err(|e| e.to_string())?;
            if !r.passed() {
                return Err(format!("q={}: {:?}", r.q, r.deviations[0]));
            }
            entries += r.checked;
        }
    }
    Ok(format!("40 functions, {entries} entries"))
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut counts = (0, 0);
    for (p, n) in [(3, 2), (5, 2), (3, 3)] {
        let pd = Padic::new(ctx(p, n), 81).map_err(|e| e.to_string())?;
        let field = pd.field().clone();
        let mut tables: Vec<FuncTable> = (0..field.q()).map(|d| FuncTable::monomial(field.clone(), d)).collect();
        for _ in 0..50 {
            tables.push(random_table(&field, &mut rng));
        }
        for i in 0..50 {
            let k = if n == 3 { i % 2 } else { 0 };
            tables.push(random_equivalent(&field, k, &mut rng));
        }
        for t in &tables {
            let combinatorial = is_planar(t).planar;
            let valuation = planar_via_valuation(&pd, t).map_err(|e| e.to_string())?;
            if combinatorial != valuation {
                return Err(format!("q={} disagreement (is_planar = {combinatorial})", field.q()));
            }
            if combinatorial {
                counts.0 += 1;
            } else {
                counts.1 += 1;
            }
        }
    }
    Ok(format!("{} planar, {} non-planar functions agree", counts.0, counts.1))
}

fn criterion_6() -> Check {
    let cfg = ScanConfig::new(1_000_000, BaseFilter::Primes);
    let r = conjecture_scan(&cfg, &ScanOptions::default()).map_err(|e| e.to_string())?;
    if !r.complete() {
        return Err("prime scan incomplete".into());
    }
    let failures: Vec<_> = r.failures().map(|(b, n, f)| (b, n, f.d)).collect();
    if !failures.is_empty() {
        return Err(format!("prime bases: {} failures, first {:?}", failures.len(), failures[0]));
    }
    let cfg9 = ScanConfig::new(1_000_000, BaseFilter::List(vec![9]));
    let r9 = conjecture_scan(&cfg9, &ScanOptions::default()).map_err(|e| e.to_string())?;
    for cell in &r9.cells {
        let m = cell.q - 1;
        let want: BTreeSet<u64> = (0..cell.n).map(|i| 3 * 9u64.pow(i) % m).collect();
        let got: BTreeSet<u64> = cell.failures.iter().map(|f| f.d).collect();
        if got != want {
            return Err(format!("base 9, n={}: failures {got:?}, expected {want:?}", cell.n));
        }
    }
    Ok(format!(
        "{} prime cells clean; base 9 failures = 3*9^i in {} cells",
        r.cells.len(),
        r9.cells.len()
    ))
}

fn criterion_7() -> Check {
    let mut count = 0;
    let mut cases: Vec<(u64, usize, usize, u64, Vec<u64>)> = Vec::new();
    for p in [7u64, 11] {
        for t in 1..p {
            cases.push((p, 0, 0, t, vec![]));
        }
    }
    for s in 0..=2usize {
        let r = 2 - s;
        for t in 1..7u64 {
            for code in 0..7usize.pow(s as u32) {
                let us: Vec<u64> = (0..s).map(|k| (code / 7usize.pow(k as u32) % 7) as u64).collect();
                cases.push((7, r, s, t, us));
            }
        }
    }
    for (p, r, s, t, us) in cases {
        let w = power2_case3_witness(p, r, s, t, &us, Power2Variant::Auto)
            .map_err(|e| format!("p={p} r={r} t={t} us={us:?}: {e}"))?;
        let m = (r + s + 2) as u32;
        let q = p.pow(2 * m);
        let d = d_form(t, &us, r, p).map_err(|e| e.to_string())?;
        let lhs = ds(star_oracle(w.e, d, q), p) as i64 - ds(w.e, p) as i64;
        if w.d != d || lhs != w.lhs || lhs <= (m as i64) * (p as i64 - 1) {
            return Err(format!("p={p} r={r} t={t} us={us:?}: lhs {lhs}"));
        }
        if p == 7 && m == 2 && !all_witness_exponents(p, 4, d).map_err(|e| e.to_string())?.contains(&w.e) {
            return Err(format!("t={t}: e={} not among exhaustive witnesses", w.e));
        }
        count += 1;
    }
    Ok(format!("{count} exponents witnessed"))
}

fn criterion_8() -> Check {
    let mut checked = 0;
    for p in [7, 11, 13] {
        let r = technical_lemma_check(p, 4).map_err(|e| e.to_string())?;
        if !r.holds() {
            return Err(format!("p={p}: {:?} {:?}", r.delta_failures.first(), r.final_failures.first()));
        }
        checked += r.checked;
    }
    let five = technical_lemma_check(5, 4).map_err(|e| e.to_string())?;
    if five.final_failures.is_empty() {
        return Err("p=5 reported no failures".into());
    }
    Ok(format!("{checked} tuples hold; p=5 lists {} failing tuples", five.final_failures.len()))
}

fn criterion_9() -> Check {
    let t = Instant::now();
    let mut count = 0;
    for p in (13u64..=199).filter(|&p| (2..p).take_while(|k| k * k <= p).all(|k| p % k != 0)) {
        for d in 3..=(p - 1) / 2 {
            let w = prime_field_witness(p, d).map_err(|e| format!("p={p} d={d}: {e}"))?;
            let e = (p - 1) / d;
            let lhs = star_oracle(e, d, p) as i64 - e as i64;
            if w.e != e || 2 * lhs <= (p - 1) as i64 {
                return Err(format!("p={p} d={d}: lhs {lhs}"));
            }
            count += 1;
        }
    }
    let elapsed = t.elapsed();
    if elapsed.as_secs_f64() >= 1.0 {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{count} pairs (p, d) in {elapsed:?}"))
}

fn criterion_10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 10);
    for _ in 0..2000 {
        let q = [9u64, 25, 27, 49, 81, 2401][rng.gen_range(0..6)];
        let (a, b, c) = (rng.gen_range(0..q), rng.gen_range(0..q), rng.gen_range(0..q));
        let op = |x, y| star(x, y, q).unwrap();
        if op(a, b) != op(b, a) || op(op(a, b), c) != op(a, op(b, c)) || op(a, 1) != a || op(a, 0) != 0 {
            return Err(format!("star laws fail at q={q}, {a} {b} {c}"));
        }
    }
    for (p, n) in [(3, 2), (5, 2), (3, 3), (7, 2)] {
        let f = ctx(p, n);
        for _ in 0..10 {
            let t = random_table(&f, &mut rng);
            if interpolate(&t).to_table().values() != t.values() {
                return Err(format!("interpolation roundtrip fails over F_{}", f.q()));
            }
        }
    }
    for (p, n) in [(3, 1), (3, 2), (5, 1)] {
        let pd = Padic::new(ctx(p, n), 81).map_err(|e| e.to_string())?;
        let t = pd.basis_change();
        let tinv = pd.basis_change_inverse();
        if !t.mul(&tinv).map_err(|e| e.to_string())?.is_identity() {
            return Err(format!("T T^-1 != I over F_{}", pd.field().q()));
        }
        for _ in 0..3 {
            let f = random_table(pd.field(), &mut rng);
            let c = pd.correlation_matrix(&f).map_err(|e| e.to_string())?;
            let a = pd.ultrametric_matrix(&f).map_err(|e| e.to_string())?;
            let tat = t.mul(&a).and_then(|x| x.mul(&tinv)).map_err(|e| e.to_string())?;
            if !tat.same_as(&c) {
                return Err(format!("C != T A T^-1 over F_{}", pd.field().q()));
            }
        }
    }
    for (p, n) in [(3, 2), (5, 2), (7, 1), (3, 3)] {
        let f = ctx(p, n);
        let q = f.q();
        for i in 0..60 {
            let poly = if i % 3 == 0 {
                let d = rng.gen_range(1..q);
                PolyCoeffs::from_terms(f.clone(), &[(d, random_nonzero(&f, &mut rng))])
            } else {
                let terms: Vec<(u64, FieldElem)> =
                    (0..3).map(|_| (rng.gen_range(0..q), f.elem(rng.gen_range(0..q)).unwrap())).collect();
                PolyCoeffs::from_terms(f.clone(), &terms)
            };
            let vals = poly.to_table();
            let image: BTreeSet<u32> = vals.values().iter().map(|v| v.index()).collect();
            if hermite_is_permutation(&poly) != (image.len() as u64 == q) {
                return Err(format!("Hermite disagrees with the image count over F_{q}"));
            }
        }
    }
    Ok("star laws, roundtrip, T T^-1 = I, C = T A T^-1, Hermite".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("classification of planar monomials", criterion_1),
        ("degree bound on planar monomials", criterion_2),
        ("Gauss sum valuations", criterion_3),
        ("reduction of A^F mod p", criterion_4),
        ("valuation test agrees with is_planar", criterion_5),
        ("conjecture scan at cap 10^6", criterion_6),
        ("witnesses for D(t,u) exponents", criterion_7),
        ("digit lemma for v + delta p^s", criterion_8),
        ("prime-field witness formula", criterion_9),
        ("property suites", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} ({secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail} ({secs:.2}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
