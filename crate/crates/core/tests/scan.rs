use planarlab_core::bounds::{
    conjecture_scan, BaseFilter, ExceptionLabel, ScanCheckpoint, ScanConfig, ScanOptions, ScanReport,
};

fn run_with_threads(cfg: &ScanConfig, threads: usize, opts: &ScanOptions) -> ScanReport {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| conjecture_scan(cfg, opts).unwrap())
}

fn json(r: &ScanReport) -> String {
    serde_json::to_string(r).unwrap()
}

#[test]
fn prime_bases_have_no_failures() {
    let r = conjecture_scan(&ScanConfig::new(10_000, BaseFilter::Primes), &ScanOptions::default()).unwrap();
    assert!(r.complete());
    assert_eq!(r.failures().count(), 0);
    assert!(r.cells.iter().all(|c| c.prime_base));
}

#[test]
fn five_cells_fail_only_on_labels() {
    let mut cfg = ScanConfig::new(10_000, BaseFilter::List(vec![5]));
    cfg.min_n = 1;
    let r = conjecture_scan(&cfg, &ScanOptions::default()).unwrap();
    assert!(r.unlabeled_failures().is_empty());
    let odd: Vec<_> = r.cells.iter().filter(|c| c.n % 2 == 1).collect();
    assert!(odd.len() >= 3);
    assert!(odd.iter().all(|c| c.excluded > 0));
}

#[test]
fn base_nine_failures() {
    let cfg = ScanConfig::new(10_000, BaseFilter::List(vec![9]));
    let r = conjecture_scan(&cfg, &ScanOptions::default()).unwrap();
    let cell = r.cells.iter().find(|c| c.n == 2).unwrap();
    let ds: Vec<u64> = cell.failures.iter().map(|f| f.d).collect();
    assert_eq!(ds, vec![3, 27]);
    assert!(cell.failures.iter().all(|f| matches!(f.label, Some(ExceptionLabel::Base9Family { .. }))));
}

#[test]
fn thread_count_does_not_matter() {
    let cfg = ScanConfig { block: 500, ..ScanConfig::new(30_000, BaseFilter::All) };
    let one = run_with_threads(&cfg, 1, &ScanOptions::default());
    let four = run_with_threads(&cfg, 4, &ScanOptions { batch_units: 5, ..Default::default() });
    assert_eq!(json(&one), json(&four));
    // composite bases are scanned and reported as such
    assert!(one.cells.iter().any(|c| !c.prime_base));
}

#[test]
fn interrupted_runs_resume_to_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.json");
    let cfg = ScanConfig { block: 700, ..ScanConfig::new(20_000, BaseFilter::List(vec![3, 5, 9, 11])) };
    let full = conjecture_scan(&cfg, &ScanOptions::default()).unwrap();

    let opts = ScanOptions { checkpoint: Some(path.clone()), resume: true, max_units: Some(4), batch_units: 3 };
    let partial = run_with_threads(&cfg, 2, &opts);
    assert!(!partial.complete());
    let ck = ScanCheckpoint::load(&path).unwrap();
    assert_eq!(ck.units_done, partial.units_done);
    assert_eq!(ck.config, cfg);

    let rest = run_with_threads(&cfg, 3, &ScanOptions { max_units: None, ..opts });
    assert_eq!(json(&rest), json(&full));
}
