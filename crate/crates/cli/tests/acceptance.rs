//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::type_complexity)]

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::VecDeque;
use std::process::Command;
use std::time::{Duration, Instant};

use adnf::pipeline::{initialise, run_pipeline};
use adnf::{generate_stream, load_model, save_features, save_model, SyntheticStreamSpec};
use adnf_core::*;
use std::result::Result;
use rand::Rng;
use support::*;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Fraction of points whose predicted label maps to the true one under the
/// best injective relabeling.
fn best_agreement(truth: &[usize], pred: &[usize]) -> f64 {
    let k_true = truth.iter().max().unwrap() + 1;
    let k_pred = pred.iter().max().unwrap() + 1;
    let mut counts = vec![vec![0usize; k_pred]; k_true];
    for (t, p) in truth.iter().zip(pred) {
        counts[*t][*p] += 1;
    }
    fn search(t: usize, counts: &[Vec<usize>], used: &mut Vec<bool>) -> usize {
        if t == counts.len() {
            return 0;
        }
        let mut best = search(t + 1, counts, used);
        for p in 0..used.len() {
            if !used[p] {
                used[p] = true;
                best = best.max(counts[t][p] + search(t + 1, counts, used));
                used[p] = false;
            }
        }
        best
    }
    search(0, &counts, &mut vec![false; k_pred]) as f64 / truth.len() as f64
}

fn synthetic_runs() -> Check {
    let limit = Duration::from_secs(10);
    let cfg2 = AdnfConfig { c: 2, k_sigma: 0.5, eps_split: 0.5, ..Default::default() };
    let (x2, _) = generate_stream(&SyntheticStreamSpec::blobs(2, 8.0, 1.0, 400, 2, 7)).map_err(|e| e.to_string())?;
    let t = Instant::now();
    let out2 = run_pipeline(&x2, &cfg2, 0, None).map_err(|e| e.to_string())?;
    let t2 = t.elapsed();
    let s2 = out2.silhouette.ok_or("2-blob silhouette undefined")?;
    ensure!(s2 >= 0.60, "2-blob silhouette {s2:.4} < 0.60");
    ensure!(t2 < limit, "2-blob run took {t2:?}");

    let cfg3 = AdnfConfig { c: 3, ..cfg2 };
    let (x3, truth) = generate_stream(&SyntheticStreamSpec::blobs(3, 10.0, 0.2, 600, 2, 8)).map_err(|e| e.to_string())?;
    let t = Instant::now();
    let out3 = run_pipeline(&x3, &cfg3, 0, None).map_err(|e| e.to_string())?;
    let t3 = t.elapsed();
    let s3 = out3.silhouette.ok_or("3-blob silhouette undefined")?;
    let agree = best_agreement(&truth, &out3.labels);
    ensure!(s3 >= 0.80, "3-blob silhouette {s3:.4} < 0.80");
    ensure!(agree >= 0.99, "3-blob agreement {agree:.4} < 0.99");
    ensure!(t3 < limit, "3-blob run took {t3:?}");
    Ok(format!("2-blob s={s2:.4} ({t2:.2?}); 3-blob s={s3:.4} agreement={agree:.4} ({t3:.2?})"))
}

fn fcm_suite() -> Check {
    let mut r = rng(2);
    let mut worst_obj: f64 = 0.0;
    for case in 0..50u64 {
        let c = r.random_range(2..=5);
        let n = r.random_range(c + 1..=200);
        let d = r.random_range(1..=8);
        let x = clumpy_points(&mut r, n, d, c, 3.0);
        let cfg = AdnfConfig { c, ..Default::default() };
        let mut trace = Vec::new();
        let p = fit_fcm_observed(&x, &cfg, case, |_, j| trace.push(j)).map_err(|e| format!("case {case}: {e}"))?;
        for col in 0..n {
            let s: f64 = (0..c).map(|i| p.memberships.get(i, col)).sum();
            ensure!((s - 1.0).abs() < 1e-9, "case {case}: column {col} sums to {s}");
        }
        for w in trace.windows(2) {
            ensure!(w[1] <= w[0] + 1e-9, "case {case}: objective rose {} -> {}", w[0], w[1]);
        }
        let oracle = objective_oracle(&x, &p.memberships, &p.centroids, cfg.m0);
        let direct = fcm_objective(&x, &p.memberships, &p.centroids, cfg.m0).map_err(|e| e.to_string())?;
        worst_obj = worst_obj.max((direct - oracle).abs());
        ensure!((direct - oracle).abs() < 1e-9, "case {case}: objective {direct} vs oracle {oracle}");
    }
    Ok(format!("50 instances, max objective deviation {worst_obj:.1e}"))
}

fn stream_suite() -> Check {
    let mut r = rng(3);
    let cfg = AdnfConfig { c: 3, ..Default::default() };
    let init = clumpy_points(&mut r, 60, 3, 3, 4.0);
    let p = fit_fcm(&init, &cfg, 0).map_err(|e| e.to_string())?;
    let start = init_micro_clusters(&init, &p, &cfg).map_err(|e| e.to_string())?;
    let mut data = clumpy_points(&mut r, 200, 3, 3, 4.0).into_matrix().into_vec();
    for k in 0..4 {
        data[150 * k % 600] += 80.0;
    }
    let points = FeatureMatrix::from_vec(200, 3, data).unwrap();

    let mut state = start.clone();
    let reports = process_stream(points.iter_rows(), &mut state, &cfg).map_err(|e| e.to_string())?;
    let mut replay = Replay::from_state(&start);
    for (k, (row, rep)) in points.iter_rows().zip(&reports).enumerate() {
        let got = replay.step(row, &cfg);
        ensure!(got == rep.matched_cluster, "point {k}: oracle chose {got:?}, library {:?}", rep.matched_cluster);
    }
    ensure!(state.len() == replay.centroids.len(), "cluster counts differ");
    let mut worst: f64 = 0.0;
    for (c, (v, d)) in state.clusters.iter().zip(replay.centroids.iter().zip(&replay.densities)) {
        worst = worst.max(dist(&c.centroid, v)).max((c.density - d).abs());
    }
    ensure!(worst < 1e-9, "final state deviates by {worst:e}");

    let mut state = start;
    let mut absorbed = 0;
    for (k, row) in points.iter_rows().enumerate() {
        let before = state.clone();
        let rep = absorb(row, &mut state, &cfg).map_err(|e| e.to_string())?;
        if let Some(i) = rep.matched_cluster {
            absorbed += 1;
            let (resid, t) = segment_residual(&before.clusters[i].centroid, row, &state.clusters[i].centroid);
            ensure!(resid < 1e-9 && (-1e-12..=1.0 + 1e-12).contains(&t), "point {k}: off segment (resid {resid:e}, t {t})");
        }
    }
    let spawned = 200 - absorbed;
    Ok(format!("200 points replayed ({spawned} spawns), max deviation {worst:.1e}, convexity held on {absorbed} absorptions"))
}

fn adaptation_suite() -> Check {
    let mut r = rng(4);
    let cfg = AdnfConfig { c: 5, ..Default::default() };
    let mut worst_h: f64 = 0.0;
    let mut checked = 0;
    for round in 0..10u64 {
        let x = clumpy_points(&mut r, 300, 2, 5, 3.0);
        let (mut state, _) = initialise(&x.slice_rows(0, 100).unwrap(), &cfg, round).map_err(|e| e.to_string())?;
        process_stream(x.slice_rows(100, 300).unwrap().iter_rows(), &mut state, &cfg).map_err(|e| e.to_string())?;
        // keep an odd count so the median FTI belongs to one cluster
        if state.len() % 2 == 0 {
            state.clusters.pop();
        }
        for c in &state.clusters {
            let us: Vec<f64> = c.history.iter().map(|h| h.membership).collect();
            let diff = (cluster_entropy(c, &cfg) - entropy_oracle(&us, cfg.numeric_eps)).abs();
            worst_h = worst_h.max(diff);
            ensure!(diff < 1e-12, "entropy off by {diff:e}");
        }
        let ftis = compute_ftis(&state, &cfg);
        let report = tune_fuzziness(&mut state, &cfg).map_err(|e| e.to_string())?;
        ensure!(report.median_fti > cfg.numeric_eps, "round {round}: degenerate median FTI");
        let at_median = ftis.iter().position(|f| *f == report.median_fti).ok_or("no cluster at the median")?;
        let m = state.clusters[at_median].fuzziness;
        ensure!((m - cfg.m0).abs() < 1e-9, "median cluster got m = {m}");
        for c in &state.clusters {
            ensure!(c.fuzziness > 1.0 && c.fuzziness <= cfg.m_max, "m = {} out of range", c.fuzziness);
        }
        let second = tune_fuzziness(&mut state, &cfg).map_err(|e| e.to_string())?;
        ensure!(second.rows.iter().all(|row| row.fti == 0.0), "second pass FTIs not zero");
        checked += state.len();
    }
    Ok(format!("10 models, {checked} clusters, max entropy deviation {worst_h:.1e}"))
}

fn topology_suite() -> Check {
    let mut r = rng(5);
    let cfg = AdnfConfig::default();
    let mut merges = 0;
    for case in 0..30 {
        let k = r.random_range(2..=15);
        let clusters = (0..k)
            .map(|_| {
                let v = vec![r.random_range(0..5) as f64 * 4.0 + r.random::<f64>(), r.random::<f64>() * 15.0];
                let h = VecDeque::from(vec![HistoryEntry::new(v.clone(), r.random())]);
                MicroCluster::from_parts(v, 0.1 + r.random::<f64>() * 20.0, 1.0, 1.2 + r.random::<f64>(), h, 0, 1e-10)
            })
            .collect();
        let mut state = ModelState::new(clusters);
        let before = state.clone();
        let comps = merge_components(&before.centroids(), cfg.rho_merge * median_pairwise(&before.centroids()));
        merge_clusters(&mut state, &cfg);
        let mass = (state.total_density() - before.total_density()).abs();
        ensure!(mass < 1e-9, "case {case}: density changed by {mass:e}");
        ensure!(state.len() == comps.len(), "case {case}: {} clusters, oracle {}", state.len(), comps.len());
        for (c, comp) in state.clusters.iter().zip(&comps) {
            let m: f64 = comp.iter().map(|&i| before.clusters[i].density).sum();
            ensure!((c.density - m).abs() < 1e-9, "case {case}: component {comp:?} density mismatch");
        }
        merges += k - comps.len();
    }

    let mut noise = 0;
    for case in 0..30 {
        let n = r.random_range(1..=150);
        let d = r.random_range(1..=3);
        let x = clumpy_points(&mut r, n, d, 4, 3.0);
        let eps = 0.2 + r.random::<f64>();
        let min_samples = r.random_range(1..=8);
        let got = dbscan(&x, eps, min_samples).map_err(|e| e.to_string())?;
        ensure!(same_partition(&got, &dbscan_oracle(&x, eps, min_samples)), "dbscan case {case} differs");
        noise += got.iter().filter(|l| l.cluster().is_none()).count();
    }

    let split_cfg = AdnfConfig { k_sigma: 0.0, gamma: 0.0, min_samples: 3, ..Default::default() };
    let mut history = VecDeque::new();
    for k in 0..8 {
        history.push_back(HistoryEntry::new(vec![0.02 * k as f64, 0.0], 0.3));
        history.push_back(HistoryEntry::new(vec![4.0, 0.02 * k as f64], 0.4));
    }
    history.push_back(HistoryEntry::new(vec![2.0, 0.0], 0.97));
    let mut clusters = vec![MicroCluster::from_parts(vec![2.0, 0.0], 5.0, 3.0, 2.0, history, 0, 1e-10)];
    for k in 0..30 {
        let v = vec![50.0 + 10.0 * k as f64, 0.0];
        clusters.push(MicroCluster::from_parts(v.clone(), 1.0, 1.0, 2.0, VecDeque::from(vec![HistoryEntry::new(v, 1.0)]), 0, 1e-10));
    }
    let mut state = ModelState::new(clusters);
    let entries = |s: &ModelState| {
        let mut v: Vec<String> = s.clusters.iter().flat_map(|c| c.history.iter().map(|h| format!("{:?}", h))).collect();
        v.sort();
        v
    };
    let before = entries(&state);
    let report = split_clusters(&mut state, &[], &split_cfg).map_err(|e| e.to_string())?;
    let made: usize = report.splits.iter().map(|s| s.new_clusters).sum();
    ensure!(made == 2, "expected 2 subclusters, got {made}");
    ensure!(entries(&state) == before, "split changed the history multiset");
    Ok(format!("30 merge sets ({merges} merges), 30 dbscan sets ({noise} noise points), split into {made} with history preserved"))
}

fn metrics_suite() -> Check {
    let mut r = rng(6);
    let mut worst: f64 = 0.0;
    for _ in 0..30 {
        let n = r.random_range(4..=120);
        let x = clumpy_points(&mut r, n, 3, 3, 5.0);
        let mut labels: Vec<usize> = (0..n).map(|_| r.random_range(0..5)).collect();
        labels[0] = 0;
        labels[1] = 1;
        let diff = (silhouette(&x, &labels).map_err(|e| e.to_string())? - silhouette_oracle(&x, &labels)).abs();
        worst = worst.max(diff);
        ensure!(diff < 1e-9, "silhouette deviates by {diff:e}");
    }
    let fixture = FeatureMatrix::from_rows(&[[0.0], [0.1], [10.0], [10.1]]).unwrap();
    let s = silhouette(&fixture, &[0, 0, 1, 1]).map_err(|e| e.to_string())?;
    ensure!((s - 0.990).abs() <= 0.001, "fixture silhouette {s}");

    let mut worst_off: f64 = 0.0;
    for case in 0..20 {
        let d = r.random_range(2..=8);
        let n = r.random_range(d + 2..=100);
        let mut data = uniform_points(&mut r, n, d, 1.0).into_matrix().into_vec();
        for (k, v) in data.iter_mut().enumerate() {
            *v *= 1.0 + (k % d) as f64 * 1.5;
        }
        let x = FeatureMatrix::from_vec(n, d, data).unwrap();
        let model = fit_pca(&x, d).map_err(|e| e.to_string())?;
        let (values, vectors) = pca_oracle(&x);
        for c in 0..d {
            let row = model.components.row(c);
            let dot: f64 = row.iter().zip(&vectors[c]).map(|(a, b)| a * b).sum();
            ensure!((dot.abs() - 1.0).abs() < 1e-8, "case {case}: component {c} misaligned ({dot})");
            ensure!((model.explained_variance[c] - values[c]).abs() < 1e-9, "case {case}: variance {c}");
            let lead = row.iter().copied().fold(0.0f64, |a, v| if v.abs() > a.abs() { v } else { a });
            ensure!(lead > 0.0, "case {case}: sign convention broken on component {c}");
        }
        let cov = covariance_oracle(&transform(&model, &x).map_err(|e| e.to_string())?);
        for a in 0..d {
            for b in 0..d {
                if a != b {
                    worst_off = worst_off.max(cov[a][b].abs());
                }
            }
        }
        ensure!(worst_off < 1e-8, "case {case}: projected covariance off-diagonal {worst_off:e}");
    }
    Ok(format!("silhouette dev {worst:.1e}, fixture {s:.4}, PCA off-diagonal max {worst_off:.1e}"))
}

fn adnf(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_adnf")).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("adnf {args:?} failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn persistence_suite() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let (x, _) = generate_stream(&SyntheticStreamSpec::blobs(3, 6.0, 1.0, 500, 3, 9)).map_err(|e| e.to_string())?;
    save_features(path("all.csv"), &x).map_err(|e| e.to_string())?;
    let run = |tag: &str| {
        adnf(&["run", "--input", &path("all.csv"), "--clusters", "3", "--seed", "5", "--out", &path(&format!("{tag}.json"))])
    };
    let (a, b) = (run("a")?, run("b")?);
    let snap_a = std::fs::read(path("a.json")).map_err(|e| e.to_string())?;
    let snap_b = std::fs::read(path("b.json")).map_err(|e| e.to_string())?;
    ensure!(a == b, "run stdout differs between identical invocations");
    ensure!(snap_a == snap_b, "run snapshots differ between identical invocations");

    let cfg = AdnfConfig { c: 3, ..Default::default() };
    let (mut state, _) = initialise(&x.slice_rows(0, 100).unwrap(), &cfg, 5).map_err(|e| e.to_string())?;
    process_stream(x.slice_rows(100, 400).unwrap().iter_rows(), &mut state, &cfg).map_err(|e| e.to_string())?;
    save_model(&state, &cfg, path("mid.json")).map_err(|e| e.to_string())?;
    let tail = x.slice_rows(400, 500).unwrap();
    save_features(path("tail.csv"), &tail).map_err(|e| e.to_string())?;

    let resumed = adnf(&["stream", "--model", &path("mid.json"), "--input", &path("tail.csv"), "--out", &path("end.json")])?;
    let reports = process_stream(tail.iter_rows(), &mut state, &cfg).map_err(|e| e.to_string())?;
    let mut expected = Vec::new();
    for rep in &reports {
        expected.extend(serde_json::to_vec(rep).unwrap());
        expected.push(b'\n');
    }
    ensure!(resumed == expected, "reports after the round trip differ from the uninterrupted run");
    let (end, _) = load_model(path("end.json")).map_err(|e| e.to_string())?;
    ensure!(end == state, "final state after the round trip differs from the uninterrupted run");
    Ok(format!("stdout and snapshot byte-identical; 100 resumed points bit-identical ({} bytes of reports)", resumed.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 7] = [
        ("synthetic clustering quality", synthetic_runs),
        ("fcm properties", fcm_suite),
        ("streaming oracle equivalence", stream_suite),
        ("adaptation", adaptation_suite),
        ("topology", topology_suite),
        ("metrics and pca", metrics_suite),
        ("determinism and persistence", persistence_suite),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} [{name}]: PASS - {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL - {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
