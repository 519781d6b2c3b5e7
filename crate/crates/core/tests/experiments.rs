use std::path::Path;

use num_complex::Complex64 as C;

use rrg_core::config::{parse_config_str, ExperimentConfig, ExperimentKind, GridConfig};
use rrg_core::experiments::output::{content_hash, manifest_path, partial_path, write_atomic, Table};
use rrg_core::experiments::*;
use rrg_core::run::{run, run_file};
use rrg_core::sampler::{Model, SamplerConfig};
use rrg_core::{Adjacency, Error, Factorization, Point};

/// Root of `m² + z m + 1 = 0` in the upper half-plane.
fn semicircle(z: C) -> C {
    let disc = (z * z - 4.0).sqrt();
    let (a, b) = ((-z + disc) / 2.0, (-z - disc) / 2.0);
    if a.im > 0.0 { a } else { b }
}

fn iterate(delta: C, z: C, times: usize) -> C {
    (0..times).fold(delta, |g, _| 1.0 / (-z - g))
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

#[test]
fn esd_histogram_accounts_for_every_eigenvalue() {
    let r = esd_experiment(400, 3, Model::UniformPairing, 3, 1).unwrap();
    assert_eq!(r.eigenvalues, 3 * 399);
    let counted: usize = r.histogram.iter().map(|b| b.count).sum();
    assert_eq!(counted, r.eigenvalues);
    assert_eq!(r.histogram.len(), ESD_BINS);
    let mass: f64 = r.histogram.iter().map(|b| b.density * (b.hi - b.lo)).sum();
    assert!((mass + r.outside_mass - 1.0).abs() < 1e-9);
    assert!(r.outside_mass < 0.01);
    let table = esd_table(std::slice::from_ref(&r));
    assert_eq!(table.len(), ESD_BINS);
}

#[test]
fn esd_distance_shrinks_with_n() {
    let small = esd_experiment(100, 3, Model::UniformPairing, 2, 2).unwrap();
    let large = esd_experiment(1000, 3, Model::UniformPairing, 2, 2).unwrap();
    assert!(large.ks_distance < small.ks_distance);
    assert!(large.ks_distance < 0.05);
}

#[test]
fn diagnostic_records_match_independent_formulas() {
    let cfg = DiagnosticsConfig {
        n_list: vec![200],
        d: 3,
        model: Model::UniformPairing,
        ells: vec![1, 2, 3],
        grid: vec![ZRecipe::fixed(0.5, 0.4), ZRecipe::n23(2.0, 1.0)],
        samples: 2,
        seed: 3,
        radius_exponent: 0.5,
    };
    let recs = collect_diagnostics(&cfg).unwrap();
    assert_eq!(recs.len(), 2 * 2 * 3);
    let a = 6.0;
    for r in &recs {
        let (z, q) = (r.z, r.q);
        let y = iterate(q, z, r.ell + 1);
        let x = 1.0 / (-z - 1.5 * iterate(q, z, r.ell));
        let msc = semicircle(z);
        let md = 1.0 / (-z - 1.5 * msc);
        assert!((r.y - y).norm() < 1e-12 && (r.x - x).norm() < 1e-12);
        assert!((r.m_sc - msc).norm() < 1e-12 && (r.m_d - md).norm() < 1e-12);
        assert!((r.residual_qy - (q - y)).norm() < 1e-12);
        let loop_lhs = a * a / (r.ell as f64 + 1.0) * (q - y) + r.dz_m_n / 200.0;
        assert!((r.loop_lhs - loop_lhs).norm() < 1e-10);
        let dm = r.m_n - md;
        let edge_loop = dm * dm + 2.0 * a * (z - 2.0).sqrt() * dm + r.dz_m_n / 200.0;
        assert!((r.edge_loop - edge_loop).norm() < 1e-10);
        let phi = r.m_n.im / (200.0 * z.im) + 200f64.powf(-1.0 + 2.0 * 0.5);
        assert!((r.phi - phi).abs() < 1e-12);
    }
    // the resolvent behind a record
    let g = SamplerConfig::uniform(200, 3, 3).sample_indexed(1).unwrap();
    let c = Factorization::new(Adjacency::new(g)).unwrap().resolvent(Point::from_parts(0.5, 0.4).unwrap()).unwrap();
    let r = recs.iter().find(|r| r.sample == 1 && r.z_index == 0).unwrap();
    assert_eq!(r.q, c.q().unwrap());
    assert_eq!(r.m_n, c.m_n());

    let scans = scan_summaries(&recs);
    assert_eq!(scans.len(), 2 * 3);
    let loops = loop_summaries(&recs).unwrap();
    assert!(loops.iter().all(|l| l.count == 2 && l.ratio.is_finite()));
    let table = diagnostics_table(&recs);
    assert_eq!(table.len(), recs.len());
    assert!(table.header().iter().any(|h| h == "loop_lhs_re"));
}

#[test]
fn self_consistent_residual_beats_the_semicircle_at_the_edge() {
    let cfg = DiagnosticsConfig {
        n_list: vec![500],
        d: 3,
        model: Model::UniformPairing,
        ells: vec![1],
        grid: vec![ZRecipe::n23(2.0, 1.0)],
        samples: 6,
        seed: 4,
        radius_exponent: 0.5,
    };
    let s = &scan_summaries(&collect_diagnostics(&cfg).unwrap())[0];
    assert!(s.median_abs_qy < s.median_abs_q_msc, "{s:?}");
}

#[test]
fn edge_samples_are_consistent() {
    let (rows, rep) = edge_fluctuations(300, 3, Model::UniformPairing, 20, 5).unwrap();
    assert_eq!(rows.len(), 20);
    let factor = (6.0f64 * 300.0).powf(2.0 / 3.0);
    for r in &rows {
        assert!((r.scaled - factor * (r.lambda2 - 2.0)).abs() < 1e-9);
        assert_eq!(r.ramanujan, r.lambda2 <= 2.0 && r.lambda_n >= -2.0);
        assert!(r.lambda2 < 3.0 / 2f64.sqrt() && r.lambda_n > -3.0 / 2f64.sqrt());
    }
    let below = rows.iter().filter(|r| r.lambda2 < 2.0).count() as f64 / 20.0;
    assert_eq!(rep.frac_below_2, below);
    assert!(rep.frac_ramanujan <= rep.frac_below_2);
    assert_eq!(edge_table(&rows).len(), 20);
}

#[test]
fn exchange_experiment_rows() {
    let cfg = SamplerConfig::uniform(80, 3, 6);
    let params = ExperimentConfig::new(ExperimentKind::Exch, vec![80]).parameters(80, 1);
    let (rows, rep) = exchange_experiment(&cfg, &params, Statistic::Triangles, 40).unwrap();
    assert_eq!(rows.len(), 40);
    assert_eq!(rep.degree_violations, 0);
    assert_eq!(exchange_table(80, 3, Statistic::Triangles, &rows).len(), 40);
    for s in ["lambda2", "triangles", "edge01", "degree0"] {
        assert_eq!(s.parse::<Statistic>().unwrap().to_string(), s);
    }
    assert!("lambda3".parse::<Statistic>().is_err());
}

#[test]
fn averaging_identities_hold() {
    let p = Point::from_parts(2.0, 0.05).unwrap();
    let (recs, rep) = averaging_identity_probe(200, 3, Model::UniformPairing, p, 2, 7, 0.5).unwrap();
    assert_eq!(recs.len(), 2);
    assert!(rep.max_abs_centered < 1e-12);
    assert!(rep.median_gap_over_phi < 10.0 && rep.median_ward_over_phi < 10.0);
    assert_eq!(averaging_table(200, 3, p.z(), &recs).len(), 2);
}

#[test]
fn z_recipes_scale_with_n() {
    assert_eq!(ZRecipe::fixed(2.0, 0.3).eta(1000, 3).unwrap(), 0.3);
    assert!((ZRecipe::n23(2.0, 1.0).eta(1000, 3).unwrap() - 0.01).abs() < 1e-15);
    let e = ZRecipe::edge(2.0, 1.0).eta(1000, 3).unwrap();
    assert!((e - 6000f64.powf(-2.0 / 3.0)).abs() < 1e-15);
}

#[test]
fn tables_expand_complex_columns_and_round_trip_floats() {
    let mut t = Table::new(&["n", "z*", "x"]);
    let (z, x) = (C::new(0.1 + 0.2, -1.0 / 3.0), 2.0f64.sqrt());
    t.push(vec![7usize.into(), z.into(), x.into()]);
    let csv = t.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "n,z_re,z_im,x");
    let cells: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(cells[0], "7");
    assert_eq!(cells[1].parse::<f64>().unwrap().to_bits(), z.re.to_bits());
    assert_eq!(cells[2].parse::<f64>().unwrap().to_bits(), z.im.to_bits());
    assert_eq!(cells[3].parse::<f64>().unwrap().to_bits(), x.to_bits());
    assert_eq!(cells[1], "0.30000000000000004");
}

#[test]
fn content_hash_matches_git_style_sha256() {
    // sha256 of "blob 0\0"
    assert_eq!(content_hash(b""), "473a0f4c3be8a93681a267e3b1e9a7dcda1185436fe141f7749120a303721813");
    assert_eq!(content_hash(b"abc").len(), 64);
    assert_ne!(content_hash(b"abc"), content_hash(b"abd"));
}

#[test]
fn atomic_write_leaves_no_partial_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sub/out.csv");
    write_atomic(&path, b"a,b\n").unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), b"a,b\n");
    assert!(!partial_path(&path).exists());
    assert_eq!(partial_path(&path).file_name().unwrap(), "out.csv.partial");
    assert_eq!(manifest_path(&path).file_name().unwrap(), "out.manifest.json");
}

#[test]
fn config_parsing_defaults_and_errors() {
    let cfg = parse_config_str("experiment = \"esd\"\nn_list = 200\n").unwrap();
    assert_eq!(cfg.n_list, vec![200]);
    assert_eq!((cfg.d, cfg.samples, cfg.seed), (3, 10, 0));
    assert_eq!(cfg.model, Model::UniformPairing);

    let cfg = parse_config_str(
        "experiment = \"loop\"\nn_list = [500, 1000]\nell = [1, 2]\nmodel = \"pairing\"\n[grid]\nre = [2.0, 1.5]\nim = [1.0]\nscale = \"edge\"\n",
    )
    .unwrap();
    assert_eq!(cfg.grid_recipes(), vec![ZRecipe::edge(2.0, 1.0), ZRecipe::edge(1.5, 1.0)]);

    let err = parse_config_str("experiment = \"esd\"\nn_list = [200]\nbogus = 1\n").unwrap_err();
    assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    let err = parse_config_str("experiment = \"esd\"\nn_list = [201]\n").unwrap_err();
    assert!(matches!(err, Error::Validation(_)), "{err}");
    let err = parse_config_str("experiment = \"sce\"\nn_list = [500]\n[grid]\nre = [2.0]\nim = [1e-4]\n").unwrap_err();
    assert!(err.to_string().contains("spectral domain D"), "{err}");
    let err = parse_config_str("experiment = \"sce\"\nn_list = [500]\n[grid]\nre = [2.0, 1.0]\nim = [1.0, 0.5, 0.2]\n").unwrap_err();
    assert!(err.to_string().contains("pair up"), "{err}");
    let err = parse_config_str("experiment = \"exch\"\nn_list = [300]\nell = 3\n").unwrap_err();
    assert!(matches!(err, Error::Validation(_)), "{err}");
}

fn small_configs() -> Vec<ExperimentConfig> {
    let mut out = Vec::new();
    let mut esd = ExperimentConfig::new(ExperimentKind::Esd, vec![100, 200]);
    esd.samples = 2;
    out.push(esd);
    let mut sce = ExperimentConfig::new(ExperimentKind::Sce, vec![100, 200]);
    sce.samples = 3;
    sce.ell = vec![1, 2];
    out.push(sce);
    let mut lp = ExperimentConfig::new(ExperimentKind::Loop, vec![400]);
    lp.samples = 3;
    out.push(lp);
    let mut edge = ExperimentConfig::new(ExperimentKind::Edge, vec![100]);
    edge.samples = 8;
    out.push(edge);
    let mut exch = ExperimentConfig::new(ExperimentKind::Exch, vec![100]);
    exch.samples = 12;
    exch.ell = vec![1];
    exch.radii.tree = Some(2);
    exch.radii.isolation = Some(1);
    out.push(exch);
    let mut avg = ExperimentConfig::new(ExperimentKind::Avg, vec![100]);
    avg.samples = 2;
    avg.grid = Some(GridConfig { re: vec![1.0], im: vec![0.2], scale: rrg_core::experiments::ZScale::Fixed });
    out.push(avg);
    out
}

fn run_in(dir: &Path, cfg: &ExperimentConfig, threads: usize) -> (Vec<u8>, serde_json::Value) {
    let csv = dir.join(format!("{}-{threads}.csv", cfg.experiment));
    let outcome = pool(threads).install(|| run(cfg, &csv)).unwrap();
    assert!(!partial_path(&csv).exists());
    let manifest: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&outcome.manifest).unwrap()).unwrap();
    (std::fs::read(&csv).unwrap(), manifest)
}

#[test]
fn every_experiment_is_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    for cfg in small_configs() {
        let (one, m1) = run_in(dir.path(), &cfg, 1);
        let (four, m4) = run_in(dir.path(), &cfg, 4);
        assert_eq!(one, four, "{} differs between 1 and 4 threads", cfg.experiment);
        let (again, _) = run_in(dir.path(), &cfg, 1);
        assert_eq!(one, again);
        assert_eq!(m1["csv_hash"], m4["csv_hash"]);
        assert_eq!(m1["csv_hash"].as_str().unwrap(), content_hash(&one));
        assert_eq!(m1["experiment"].as_str().unwrap(), cfg.experiment.name());
        assert_eq!(m1["config"]["n_list"], serde_json::json!(cfg.n_list));
        assert_eq!(m1["rows"].as_u64().unwrap() as usize + 1, one.iter().filter(|&&b| b == b'\n').count());
        assert!(!m1["checks"].as_array().unwrap().is_empty());
    }
}

#[test]
fn run_file_writes_beside_the_config_and_tags_acceptance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tiny.toml");
    std::fs::write(&path, "experiment = \"edge\"\nn_list = 60\nsamples = 4\nacceptance = true\n").unwrap();
    let out = run_file(&path).unwrap();
    assert_eq!(out.csv, dir.path().join("tiny.csv"));
    assert!(out.csv.exists() && dir.path().join("tiny.manifest.json").exists());
    assert!(out.acceptance);
    assert_eq!(out.exit_code(), if out.passed() { 0 } else { 1 });

    std::fs::write(&path, "experiment = \"edge\"\nn_list = 60\nsamples = 4\noutput = \"nested/e.csv\"\n").unwrap();
    let out = run_file(&path).unwrap();
    assert_eq!(out.csv, dir.path().join("nested/e.csv"));
    assert_eq!(out.exit_code(), 0);
}
