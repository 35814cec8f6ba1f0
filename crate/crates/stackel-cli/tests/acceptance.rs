//! End-to-end acceptance suite. Runs every criterion in sequence (so the
//! runtime limits measure one criterion at a time), prints one line per
//! criterion and exits nonzero if any fails.

use std::f64::consts::TAU;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use angular_spectrum::{cone_bounds, count_in_cone, coupled_solve, SolveOptions};
use clap::Parser;
use inverse_verify::generators::{gauge_pair, perturb_s11, reparametrize_radial};
use inverse_verify::{normalize, solve_options};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use radial_scatter::oracle::{bessel_pair, mirrored_bessel, mirrored_characteristic};
use radial_scatter::{characteristic, scatter_mode, solve_fss, trace_pair, End, EnergyContext, FssOptions, Gauge};
use serde_json::Value;
use stackel_cli::commands::{ladder, scatter_modes};
use stackel_cli::{exit_code, run, Cli, ManifoldConfig, SCHEMA_VERSION};
use stackel_core::{gauge_normalize, satisfies_normal_form, Preset, StackelMatrix, Tolerances};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.1?}, limit {limit:?}"))
}

fn build(p: Preset) -> StackelMatrix {
    p.build(1.0, TAU, TAU).unwrap()
}

fn presets() -> Vec<(&'static str, StackelMatrix)> {
    [Preset::example1(), Preset::example2(), Preset::example3(), Preset::template()]
        .into_iter()
        .map(|p| (p.name(), build(p)))
        .collect()
}

fn grid10(s: &StackelMatrix) -> Vec<[f64; 3]> {
    let mut pts = Vec::with_capacity(1000);
    for i in 0..10 {
        for j in 0..10 {
            for k in 0..10 {
                pts.push([s.a * (0.05 + 0.1 * i as f64), s.b * j as f64 / 10.0, s.c * k as f64 / 10.0]);
            }
        }
    }
    pts
}

fn random_gauge(rng: &mut ChaCha8Rng) -> [[f64; 2]; 2] {
    loop {
        let g: [[f64; 2]; 2] = [[rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)], [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]];
        if (g[0][0] * g[1][1] - g[0][1] * g[1][0]).abs() > 0.1 {
            return g;
        }
    }
}

fn gauge_invariance() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let bases = presets();
    let mut worst: f64 = 0.0;
    for n in 0..100 {
        let s = &bases[n % 3].1;
        let g = random_gauge(&mut rng);
        let t = s.apply_column_invariance(g).unwrap().apply_first_column_shift(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        for x in grid10(s) {
            let (h, ht) = (s.h_sq(x), t.h_sq(x));
            for k in 0..3 {
                worst = worst.max((h[k] - ht[k]).abs());
            }
        }
    }
    ensure(worst < 1e-9, || format!("max deviation {worst:e}"))?;
    within(Duration::from_secs(10), start)?;
    Ok(format!("100 transforms, max |ΔH²| {worst:.1e}"))
}

fn normalization() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let bases = presets();
    let mut worst: f64 = 0.0;
    for n in 0..20 {
        let s = &bases[n % 3].1;
        // random scale, sign flips and an optional column swap
        let (d0, d1) = (rng.gen_range(0.2..5.0), rng.gen_range(0.2..5.0));
        let (s0, s1) = (if rng.gen() { 1.0 } else { -1.0 }, if rng.gen() { 1.0 } else { -1.0 });
        let shear = rng.gen_range(-0.3..0.3);
        let g = if rng.gen() {
            [[s0 * d0, shear], [0.0, s1 * d1]]
        } else {
            [[shear, s1 * d1], [s0 * d0, 0.0]]
        };
        let scrambled = s.apply_column_invariance(g).unwrap();
        let (ns, _) = gauge_normalize(&scrambled).map_err(|e| format!("matrix {n}: {e}"))?;
        ensure(satisfies_normal_form(&ns, 1e-12), || format!("matrix {n} misses the normal form"))?;
        let (again, g2) = gauge_normalize(&ns).unwrap();
        ensure(g2 == [[1.0, 0.0], [0.0, 1.0]], || format!("matrix {n}: not idempotent, {g2:?}"))?;
        for x in grid10(s).into_iter().step_by(7) {
            let (h, hn, h2) = (s.h_sq(x), ns.h_sq(x), again.h_sq(x));
            for k in 0..3 {
                worst = worst.max((h[k] - hn[k]).abs() / h[k].abs());
                ensure(hn[k] == h2[k], || format!("matrix {n}: renormalization changed the metric"))?;
            }
        }
    }
    ensure(worst < 1e-10, || format!("metric changed by {worst:e}"))?;
    within(Duration::from_secs(5), start)?;
    Ok(format!("20 matrices, metric drift {worst:.1e}"))
}

fn lattice(r_max: f64) -> Vec<(f64, f64, u8)> {
    let mut out = Vec::new();
    let kmax = r_max.sqrt().ceil() as i64 + 1;
    for k in 0..=kmax {
        for l in 0..=kmax {
            let (kk, ll) = ((k * k) as f64, (l * l) as f64);
            let (mu, nu) = (1.5 * kk + 0.5 * ll, 0.5 * kk + 1.5 * ll);
            if (k, l) != (0, 0) && mu.hypot(nu) <= r_max {
                out.push((mu, nu, if k > 0 && l > 0 { 4 } else { 2 }));
            }
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    out
}

fn angular_lattice() -> Check {
    let start = Instant::now();
    let spec = coupled_solve(&build(Preset::example1()), 1.3, 20.0, &SolveOptions::default()).map_err(|e| e.to_string())?;
    let want = lattice(20.0);
    ensure(spec.eigenvalues.len() == want.len(), || format!("{} eigenvalues, expected {}", spec.eigenvalues.len(), want.len()))?;
    let mut worst: f64 = 0.0;
    for (e, &(mu, nu, mult)) in spec.eigenvalues.iter().zip(&want) {
        worst = worst.max((e.mu_sq - mu).abs()).max((e.nu_sq - nu).abs());
        ensure(e.multiplicity == mult, || format!("multiplicity {} at ({mu}, {nu}), expected {mult}", e.multiplicity))?;
    }
    ensure(worst < 1e-8, || format!("max error {worst:e}"))?;
    within(Duration::from_secs(60), start)?;
    Ok(format!("{} lattice points, max error {worst:.1e}", want.len()))
}

fn cone_and_counting() -> Check {
    let mut checked = 0;
    for (name, s) in presets() {
        let spec = coupled_solve(&s, 1.0, 10.0, &SolveOptions::default()).map_err(|e| format!("{name}: {e}"))?;
        let b = cone_bounds(&s, 1.0);
        for e in &spec.eigenvalues {
            ensure(b.contains(e.mu_sq, e.nu_sq), || format!("{name}: ({}, {}) outside {b:?}", e.mu_sq, e.nu_sq))?;
        }
        checked += spec.eigenvalues.len();
    }
    let s = build(Preset::example1());
    let opts = SolveOptions { verify: false, ..SolveOptions::default() };
    let spec = coupled_solve(&s, 1.0, 1600.0, &opts).map_err(|e| e.to_string())?;
    let b = cone_bounds(&s, 1.0);
    let counts: Vec<_> = [10.0, 20.0, 40.0].iter().map(|&r| count_in_cone(&s, &spec, (b.c1, b.c2), r, 100_000, 7)).collect();
    let ratios: Vec<f64> = counts.iter().map(|c| c.ratio).collect();
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    ensure(hi / lo < 1.5, || format!("n(r)/r² varies by {:.0}%", 100.0 * (hi / lo - 1.0)))?;
    for c in &counts {
        let q = c.symbol_ratio / c.ratio;
        ensure(q > 0.25 && q < 4.0, || format!("count {} vs symbol volume: factor {q:.3}", c.n))?;
    }
    let qs: Vec<String> = counts.iter().map(|c| format!("{:.2}", c.symbol_ratio / c.ratio)).collect();
    Ok(format!("{checked} eigenpairs in cone, n(r)/r² spread {:.0}%, volume factors [{}]", 100.0 * (hi / lo - 1.0), qs.join(", ")))
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn radial_oracle() -> Check {
    let mut worst_series: f64 = 0.0;
    let mut worst_delta: f64 = 0.0;
    for &(lambda, mu_sq, nu_sq) in &[(0.5, 1.0, 2.0), (1.3, 0.2, 0.1), (0.9, 1.5, 0.5), (0.8, -3.0, 1.0)] {
        let c = |v: f64| Complex64::new(v, 0.0);
        let pot = mirrored_bessel(lambda, 1.0, c(mu_sq), nu_sq).map_err(|e| e.to_string())?;
        let omega_sq = c(mu_sq + nu_sq);
        let xs: Vec<f64> = (0..=90).map(|k| 0.1 + 0.01 * k as f64).collect();
        let got = trace_pair(&pot, End::Left, 1e-6 * pot.length(), &xs, 1e-12).map_err(|e| e.to_string())?;
        for (g, &x) in got.iter().zip(&xs) {
            let want = bessel_pair(lambda, omega_sq, x);
            worst_series = worst_series.max(rel(g[0], want[0]));
        }
        let fss = solve_fss(&pot, &FssOptions::default()).map_err(|e| e.to_string())?;
        let (big, _) = mirrored_characteristic(lambda, 1.0, omega_sq);
        worst_delta = worst_delta.max(rel(characteristic(&fss, 1e-8).delta_big, big));
    }
    ensure(worst_series < 1e-6, || format!("series mismatch {worst_series:e}"))?;
    ensure(worst_delta < 1e-6, || format!("Δ mismatch {worst_delta:e}"))?;
    Ok(format!("solution {worst_series:.1e}, Δ {worst_delta:.1e}"))
}

fn wronskian_unitarity() -> Check {
    let tol = Tolerances::default();
    let (mut werr, mut uerr, mut modes): (f64, f64, usize) = (0.0, 0.0, 0);
    for (name, s) in presets() {
        let s = normalize(&s, &tol).map_err(|e| format!("{name}: {e}"))?;
        let lambda = 0.8;
        let spec = coupled_solve(&s, lambda, 10.0, &solve_options(&tol)).map_err(|e| format!("{name}: {e}"))?;
        let energy = EnergyContext::new(lambda).unwrap();
        for e in &spec.eigenvalues {
            let rec = scatter_mode(&s, Gauge::Mu, &energy, e.m, (e.mu_sq, e.nu_sq), &tol).map_err(|err| format!("{name} mode {}: {err}", e.m))?;
            werr = werr.max(rec.wronskian_error);
            let u = rec.unitarity_residual.ok_or_else(|| format!("{name} mode {} is a pole", e.m))?;
            uerr = uerr.max(u);
            modes += 1;
        }
    }
    ensure(werr < 1e-8, || format!("|W - 1| up to {werr:e}"))?;
    ensure(uerr < 1e-6, || format!("unitarity residual up to {uerr:e}"))?;
    Ok(format!("{modes} modes, |W - 1| {werr:.1e}, unitarity {uerr:.1e}"))
}

fn gauge_equality() -> Check {
    let tol = Tolerances::default();
    let mut worst: f64 = 0.0;
    for (name, s) in presets() {
        let s = normalize(&s, &tol).map_err(|e| format!("{name}: {e}"))?;
        let mut spec = coupled_solve(&s, 1.1, 30.0, &solve_options(&tol)).map_err(|e| format!("{name}: {e}"))?;
        ensure(spec.eigenvalues.len() >= 20, || format!("{name}: only {} modes", spec.eigenvalues.len()))?;
        spec.eigenvalues.truncate(20);
        for line in scatter_modes(&s, &spec, &tol).map_err(|e| format!("{name}: {e}"))? {
            worst = worst.max(line.gauge_spread);
        }
    }
    ensure(worst < 1e-6, || format!("Δ differs across gauges by {worst:e}"))?;
    Ok(format!("80 modes, max relative spread {worst:.1e}"))
}

fn asymptotics() -> Check {
    let start = Instant::now();
    let tol = Tolerances::default();
    let s = normalize(&build(Preset::template()), &tol).map_err(|e| e.to_string())?;
    let rows = ladder(&s, 0.7, &tol).map_err(|e| e.to_string())?;
    let errs: Vec<f64> = rows.iter().map(|r| r.error_big).collect();
    ensure(errs.windows(2).all(|w| w[1] < w[0]), || format!("not decreasing: {errs:?}"))?;
    ensure(errs[3] < 0.05, || format!("{:.2}% at y = 160", 100.0 * errs[3]))?;
    within(Duration::from_secs(30), start)?;
    Ok(format!("ratio errors {}", errs.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>().join(" > ")))
}

fn write_config(dir: &Path, name: &str, matrix: StackelMatrix, lambda: f64) -> String {
    let cfg = ManifoldConfig {
        schema: SCHEMA_VERSION,
        preset: None,
        rows: None,
        a: matrix.a,
        b: matrix.b,
        c: matrix.c,
        matrix: Some(matrix),
        lambda,
        eps0: 0.5,
        eps1: 0.5,
        tolerances: Default::default(),
        manifest: None,
    };
    let path = dir.join(name);
    fs::write(&path, stackel_cli::to_json(&cfg, true)).unwrap();
    path.display().to_string()
}

fn cli(args: &[&str]) -> (u8, Cli) {
    let parsed = Cli::try_parse_from(std::iter::once("stackel").chain(args.iter().copied())).expect("arguments parse");
    (exit_code(&run(&parsed)), parsed)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn uniqueness() -> Check {
    let start = Instant::now();
    let tol = Tolerances::default();
    let dir = tempfile::tempdir().unwrap();
    let base = normalize(&build(Preset::example2()), &tol).map_err(|e| e.to_string())?;
    let twin = reparametrize_radial(&gauge_pair(&base, 0.1, [0.3, -0.2]).unwrap(), 0.15).unwrap();
    let a = write_config(dir.path(), "a.json", base.clone(), 0.8);
    let b = write_config(dir.path(), "twin.json", twin, 0.8);
    let bump = write_config(dir.path(), "bump.json", perturb_s11(&base, 1e-2), 0.8);

    let out = dir.path().join("eq");
    let (code, _) = cli(&["verify", "--config", &a, "--config-b", &b, "--r-max", "10", "--out-dir", out.to_str().unwrap()]);
    let rep = read_json(&out.join("comparison.json"));
    ensure(code == 0, || format!("gauge pair: exit {code}, {}", rep["reason"]))?;
    let dev = rep["scattering"]["max_deviation"].as_f64().unwrap();
    let u = rep["radial"]["u_direct"].as_f64().unwrap().max(rep["radial"]["u_cauchy"].as_f64().unwrap());
    ensure(dev < 1e-6 && u < 1e-6, || format!("gauge pair: deviation {dev:e}, max|u - 1| {u:e}"))?;

    let out = dir.path().join("bump");
    let (code, _) = cli(&["verify", "--config", &a, "--config-b", &bump, "--r-max", "10", "--out-dir", out.to_str().unwrap()]);
    let rep = read_json(&out.join("comparison.json"));
    ensure(code == 1, || format!("bump pair: exit {code}"))?;
    let bump_dev = rep["scattering"]["modes"]
        .as_array()
        .map(|m| m.iter().filter_map(|x| x["deviation"].as_f64()).fold(0.0, f64::max))
        .unwrap_or(0.0);
    ensure(bump_dev > 1e-3, || format!("bump pair: largest mode deviation {bump_dev:e}"))?;
    within(Duration::from_secs(300), start)?;
    Ok(format!("equivalent (deviation {dev:.1e}, max|u - 1| {u:.1e}); bump distinct (mode deviation {bump_dev:.1e})"))
}

fn data_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| !p.to_string_lossy().ends_with(".run.json"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ex3.json");
    fs::write(&cfg, r#"{"schema": 1, "preset": {"name": "example3"}, "a": 1.0, "b": 6.283185307179586, "c": 6.283185307179586, "lambda": 0.9}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let mut runs = Vec::new();
    for (k, workers) in ["1", "4", "4"].iter().enumerate() {
        let out = dir.path().join(format!("run{k}"));
        let out = out.to_str().unwrap();
        for verb in ["normalize", "spectrum", "scatter"] {
            let (code, _) = cli(&[verb, "--config", cfg, "--r-max", "8", "--out-dir", out, "--workers", workers]);
            ensure(code == 0, || format!("{verb} exited with {code}"))?;
        }
        runs.push(data_files(Path::new(out)));
    }
    let names: Vec<&str> = runs[0].iter().map(|f| f.0.as_str()).collect();
    ensure(runs.iter().all(|r| r == &runs[0]), || "outputs differ between runs".into())?;
    Ok(format!("3 runs (1 and 4 workers) identical: {}", names.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("gauge invariance", gauge_invariance),
        ("normalization", normalization),
        ("angular lattice oracle", angular_lattice),
        ("cone and counting", cone_and_counting),
        ("radial Bessel oracle", radial_oracle),
        ("Wronskian and unitarity", wronskian_unitarity),
        ("gauge equality of Δ", gauge_equality),
        ("asymptotics", asymptotics),
        ("uniqueness end-to-end", uniqueness),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        match result {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}; {elapsed:.2?})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({detail}; {elapsed:.2?})", i + 1)
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
