//! End-to-end acceptance checks. Each test prints one `PASS`/`FAIL` line
//! (run with `--nocapture` to see them) and then asserts the same verdict.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperclus::hypergraph::{build_hypergraph, Hyperedge, ValidationPolicy};
use hyperclus::ingestion::{load_dataset, unit_edvw, Dataset, DatasetSchema};
use hyperclus::metrics::ClusterQuality;
use hyperclus::oracle::{brute_force_optima, dense_spectrum, verify, VerifyConfig};
use hyperclus::pipeline::{labelling_ncut, run, Method, RunOptions, RunReport};
use hyperclus::spectral::{hyperclus_g_on, ClusterConfig, KwayStrategy, Partition, SpectralModel};

fn verdict(criterion: u32, ok: bool, detail: &str) -> bool {
    println!("criterion {criterion} {}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn datasets_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../datasets")
}

fn shipped(name: &str) -> Dataset {
    let dir = datasets_dir();
    let schema = DatasetSchema::from_path(dir.join(format!("schemas/{name}.schema"))).unwrap();
    load_dataset(dir.join(format!("{name}.csv")), &schema).unwrap()
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

/// Same bipartition of the vertices, whichever side is called 0.
fn same_partition(a: &Partition, b: &Partition) -> bool {
    let (a, b) = (a.labels(), b.labels());
    a == b || a.iter().zip(b).all(|(x, y)| x != y)
}

#[test]
fn criterion_1_two_vertex_closed_form() {
    let started = Instant::now();
    let h = build_hypergraph(vec![Hyperedge::unit(1.0, [0, 1])], 2, ValidationPolicy::Strict).unwrap();
    let config = ClusterConfig::default();
    let model = SpectralModel::build(&h, &config).unwrap();
    let part = hyperclus_g_on(&model, &config).unwrap();
    let q = ClusterQuality::evaluate(&model.phi, &model.p, &[0]).unwrap();
    let elapsed = started.elapsed();

    let spectrum = dense_spectrum(&h).unwrap();
    let oracle = brute_force_optima(&h).unwrap();
    let exact = |x: f64, y: f64| (x - y).abs() <= 1e-12;
    let p_ok = (0..2).all(|u| (0..2).all(|v| exact(model.p.get(u, v), 0.5)));
    let phi_ok = exact(model.phi[0], 0.5) && exact(model.phi[1], 0.5);
    let spectrum_ok = exact(spectrum[0], 0.0) && exact(spectrum[1], 1.0) && exact(part.lambda2.unwrap(), 1.0);
    let phi_h = oracle.best_conductance;
    let cheeger_ok = exact(phi_h * phi_h / 2.0, 0.125) && exact(2.0 * phi_h, 1.0) && oracle.cheeger_ok;
    let ok = p_ok
        && phi_ok
        && spectrum_ok
        && part.labels() == [0, 1]
        && exact(q.ncut, 1.0)
        && exact(q.conductance, 0.5)
        && exact(phi_h, 0.5)
        && cheeger_ok
        && elapsed < Duration::from_millis(1);
    assert!(verdict(
        1,
        ok,
        &format!(
            "P={:?} phi={:?} spectrum={spectrum:?} labels={:?} ncut={} conductance={} in {elapsed:?}",
            [[model.p.get(0, 0), model.p.get(0, 1)], [model.p.get(1, 0), model.p.get(1, 1)]],
            model.phi.as_slice(),
            part.labels(),
            q.ncut,
            q.conductance,
        )
    ));
}

#[test]
fn criterion_2_property_suite() {
    let started = Instant::now();
    let report = verify(&VerifyConfig {
        n_max: 10,
        trials: 200,
        seed: 42,
        fault: None,
    })
    .unwrap();
    let elapsed = started.elapsed();
    print!("{report}");
    let ok = report.all_passed() && elapsed < Duration::from_secs(60);
    assert!(verdict(2, ok, &format!("200 trials, n <= 10, seed 42 in {elapsed:?}")));
}

#[test]
fn criterion_3_car() {
    let started = Instant::now();
    let ds = shipped("car");
    let (_, report) = run(
        &ds.hypergraph,
        "car",
        Some(&ds.labels),
        &RunOptions::new(Method::HyperClusG, 2, KwayStrategy::Best),
    )
    .unwrap();
    let label_ncut = labelling_ncut(&ds.hypergraph, &ds.labels).unwrap();
    let elapsed = started.elapsed();

    let lambda2 = report.lambda2.unwrap();
    let rel = report.relative_error.unwrap();
    let mut f1s = report.f1s.clone().unwrap();
    f1s.sort_by(|a, b| b.total_cmp(a));
    let ok = ds.hypergraph.n_vertices() == 134
        && within(report.ncut, 0.8320, 0.005)
        && within(lambda2, 0.7655, 0.002)
        && within(rel, 0.0799, 0.005)
        && within(f1s[0], 0.706, 0.02)
        && within(f1s[1], 0.697, 0.02)
        && within(label_ncut, 0.8490, 0.005)
        && elapsed < Duration::from_secs(5);
    assert!(verdict(
        3,
        ok,
        &format!(
            "ncut={:.4} lambda2={lambda2:.4} rel={:.2}% f1s={:.3}/{:.3} label ncut={label_ncut:.4} in {elapsed:?}",
            report.ncut,
            100.0 * rel,
            f1s[0],
            f1s[1]
        )
    ));
}

#[test]
fn criterion_4_zoo() {
    let started = Instant::now();
    let ds = shipped("zoo");
    let (part, report) = run(
        &ds.hypergraph,
        "zoo",
        Some(&ds.labels),
        &RunOptions::new(Method::HyperClusG, 7, KwayStrategy::Best),
    )
    .unwrap();
    let elapsed = started.elapsed();
    let f1 = report.weighted_f1.unwrap();
    let ok = part.k() == 7
        && within(report.ncut, 5.1386, 0.02)
        && within(f1, 0.893, 0.02)
        && elapsed < Duration::from_secs(10);
    assert!(verdict(
        4,
        ok,
        &format!("7-way best-split ncut={:.4} weighted f1={f1:.3} in {elapsed:?}", report.ncut)
    ));
}

#[test]
fn criterion_5_eivw_car() {
    let started = Instant::now();
    let ds = shipped("car");
    let h = unit_edvw(&ds.hypergraph);
    let opts = |m| RunOptions::new(m, 2, KwayStrategy::Best);
    let (ours, ours_report) = run(&h, "car-eivw", None, &opts(Method::HyperClusG)).unwrap();
    let (star, star_report) = run(&h, "car-eivw", None, &opts(Method::Star)).unwrap();
    let elapsed = started.elapsed();
    let identical = same_partition(&ours, &star);
    let ok = within(ours_report.ncut, 0.8340, 0.005)
        && (ours_report.ncut - star_report.ncut).abs() <= 1e-9
        && identical
        && elapsed < Duration::from_secs(5);
    assert!(verdict(
        5,
        ok,
        &format!(
            "hyperclus-g ncut={:.4} star ncut={:.4} identical partitions={identical} in {elapsed:?}",
            ours_report.ncut, star_report.ncut
        )
    ));
}

/// Connected unweighted graph: a random spanning tree plus extra edges.
fn random_graph(rng: &mut ChaCha8Rng) -> (usize, Vec<(usize, usize)>) {
    let n = rng.random_range(3..=12);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for _ in 0..rng.random_range(0..=n) {
        let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
        let e = (u.min(v), u.max(v));
        if u != v && !edges.contains(&e) {
            edges.push(e);
        }
    }
    (n, edges)
}

// Checked as stated, and it fails: with |e| = 2 the edge walk picks the
// current vertex half the time, so L = (D - A)/(2 sum d) on these inputs.
// The eigenvectors of D - A are still shared; only the scale is off.
#[test]
fn criterion_6_pairwise_degeneration() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst_stated, mut worst_half) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let (n, pairs) = random_graph(&mut rng);
        let h = build_hypergraph(
            pairs.iter().map(|&(u, v)| Hyperedge::unit(1.0, [u, v])).collect(),
            n,
            ValidationPolicy::Strict,
        )
        .unwrap();
        let model = SpectralModel::build(&h, &ClusterConfig::default()).unwrap();
        let d = h.vertex_degrees();
        let total: f64 = d.iter().sum();
        let l = model.laplacian.csr();
        for u in 0..n {
            for v in 0..n {
                let a = if pairs.contains(&(u.min(v), u.max(v))) { 1.0 } else { 0.0 };
                let dma = if u == v { d[u] } else { -a };
                worst_stated = worst_stated.max((l.get(u, v) - dma / total).abs());
                worst_half = worst_half.max((l.get(u, v) - dma / (2.0 * total)).abs());
            }
        }
    }
    let elapsed = started.elapsed();
    let ok = worst_stated <= 1e-10 && elapsed < Duration::from_secs(5);
    assert!(verdict(
        6,
        ok,
        &format!(
            "max |L - (D-A)/sum d| = {worst_stated:.3e} over 20 graphs \
             (max |L - (D-A)/(2 sum d)| = {worst_half:.3e}) in {elapsed:?}"
        )
    ));
}

/// Offline rows: dataset, k, strategy, NCut, F1s (both for 2-way, weighted
/// for k-way).
const DESK_EXCLUDED: [(&str, usize, KwayStrategy, f64, &[f64]); 7] = [
    ("mushroom", 2, KwayStrategy::Best, 0.6388, &[0.915, 0.889]),
    ("rice", 2, KwayStrategy::Best, 0.3577, &[0.947, 0.932]),
    ("digit24", 2, KwayStrategy::Best, 0.6412, &[0.996, 0.996]),
    ("covertype", 2, KwayStrategy::Best, 0.8911, &[0.701, 0.488]),
    ("wine567", 3, KwayStrategy::Best, 1.5831, &[0.395]),
    ("letter", 4, KwayStrategy::Largest, 2.1184, &[0.704]),
    ("digit", 10, KwayStrategy::Largest, 8.4197, &[0.629]),
];

fn f1_values(report: &RunReport) -> Vec<f64> {
    if report.k == 2 {
        let mut f = report.f1s.clone().unwrap();
        f.sort_by(|a, b| b.total_cmp(a));
        f
    } else {
        vec![report.weighted_f1.unwrap()]
    }
}

/// Needs the full datasets as `<name>.csv` under `$HYPERCLUS_DATA`.
#[test]
fn criterion_7_large_datasets() {
    let Some(dir) = std::env::var_os("HYPERCLUS_DATA").map(PathBuf::from) else {
        println!("criterion 7 SKIP: excluded from CI, set HYPERCLUS_DATA to a directory of dataset CSVs to run it");
        return;
    };
    let mut ok = true;
    let mut ran = 0;
    for (name, k, strategy, ncut, f1) in DESK_EXCLUDED {
        let csv = dir.join(format!("{name}.csv"));
        if !csv.exists() {
            println!("  {name}: missing {}", csv.display());
            continue;
        }
        let schema = DatasetSchema::from_path(datasets_dir().join(format!("schemas/{name}.schema"))).unwrap();
        let ds = load_dataset(&csv, &schema).unwrap();
        let timed = |method| {
            let started = Instant::now();
            let (_, report) = run(&ds.hypergraph, name, Some(&ds.labels), &RunOptions::new(method, k, strategy)).unwrap();
            (report, started.elapsed())
        };
        let (ours, ours_time) = timed(Method::HyperClusG);
        let (_, clique_time) = timed(Method::Clique);
        let got_f1 = f1_values(&ours);
        let row_ok = within(ours.ncut, ncut, 0.01)
            && got_f1.iter().zip(f1).all(|(&g, &want)| within(g, want, 0.03))
            && ours_time < clique_time;
        println!(
            "  {name}: ncut={:.4} (want {ncut}) f1={got_f1:.3?} (want {f1:?}) time {ours_time:?} vs clique {clique_time:?}",
            ours.ncut
        );
        ok &= row_ok;
        ran += 1;
    }
    assert!(verdict(7, ok && ran > 0, &format!("{ran} of {} offline datasets run", DESK_EXCLUDED.len())));
}
