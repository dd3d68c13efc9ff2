//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::Instant;

use ris_sop::mc::{self, McMode, McOptions, OperatingPoint, Scheme};
use ris_sop::sweep::{self, Evaluator, RunOptions, SweepAxis, SweepParam, SweepSpec};
use ris_sop::{analytic, asymptotic, quadrature, specfun, SystemConfig};

type Outcome = Result<(bool, String), String>;

fn cfg(n: usize, m: usize, g: f64) -> SystemConfig {
    SystemConfig { n_elements: n, n_users: m, gamma0_db: g, ..SystemConfig::default() }
}

fn rel(a: f64, b: f64) -> f64 {
    sweep::relative_error(a, b)
}

fn c1() -> Outcome {
    let mut worst = (0.0f64, String::new());
    let mut count = 0;
    for n in [32, 64, 128] {
        for g in [0.0, 10.0, 20.0, 30.0, 40.0] {
            for c in sweep::term_checks(&cfg(n, 4, g)).map_err(|e| e.to_string())? {
                count += 1;
                if c.rel_error > worst.0 || !c.pass {
                    worst = (c.rel_error.max(worst.0), c.to_string());
                }
            }
        }
    }
    Ok((worst.0 <= 1e-6, format!("{count} terms, max rel error {:.2e} ({})", worst.0, worst.1)))
}

fn c2() -> Outcome {
    let (mut all, mut far, mut far_at) = (0.0f64, 0.0f64, 0.0);
    for i in -10_000..=10_000 {
        let x = i as f64 * 1e-3;
        let d = (specfun::q_approx3(x) - specfun::q(x)).abs();
        all = all.max(d);
        if x.abs() >= 1.0 && d > far {
            far = d;
            far_at = x;
        }
    }
    Ok((
        all <= 0.084 && far <= 1e-3,
        format!("max error {all:.4e} (bound 0.084); max for |x|>=1 {far:.4e} at x={far_at} (bound 1e-3)"),
    ))
}

fn c3_grid() -> Vec<SystemConfig> {
    let mut v = Vec::new();
    for n in [64, 128] {
        for m in [1, 3] {
            for i in 0..=12 {
                v.push(cfg(n, m, -10.0 + 5.0 * i as f64));
            }
        }
    }
    v
}

fn c3() -> Outcome {
    let (mut worst, mut checked, mut at) = (0.0f64, 0, String::new());
    for c in c3_grid() {
        let exact = quadrature::sop_quad_exact_q(&c).map_err(|e| e.to_string())?.value;
        if exact < 1e-5 {
            continue;
        }
        let closed = analytic::sop_theorem1(&c).map_err(|e| e.to_string())?.value;
        checked += 1;
        let r = rel(closed, exact);
        if r > worst {
            worst = r;
            at = format!("N={} M={} {}dB", c.n_elements, c.n_users, c.gamma0_db);
        }
    }
    Ok((worst <= 0.05, format!("{checked} points with SOP>=1e-5, max rel error {worst:.3e} at {at}")))
}

fn c4_spec() -> SweepSpec {
    SweepSpec {
        sweep_axes: vec![
            SweepAxis { param: SweepParam::NElements, values: vec![64.0, 128.0] },
            SweepAxis { param: SweepParam::NUsers, values: vec![1.0, 3.0] },
            SweepAxis { param: SweepParam::Gamma0Db, values: (0..=12).map(|i| -10.0 + 5.0 * i as f64).collect() },
        ],
        evaluators: vec![Evaluator::QuadExact, Evaluator::Mc],
        mc_trials: 1_000_000,
        seed: 1,
        mc_mode: McMode::Physical,
        ..SweepSpec::default()
    }
}

fn c4(csv_out: &mut String) -> Outcome {
    let rows = sweep::run_sweep(&c4_spec(), RunOptions { workers: 1 }).map_err(|e| e.to_string())?;
    *csv_out = sweep::emit_csv(&rows);
    let (mut fails, mut checked, mut worst) = (Vec::new(), 0, 0.0f64);
    for r in &rows {
        let (Some(q), Some(p), Some(t)) = (r.sop_quad_exact, r.sop_mc, r.mc_trials) else {
            return Err(format!("missing value in row {:?}", r.config));
        };
        if q < 1e-4 {
            continue;
        }
        checked += 1;
        let est = mc::McEstimate::new(Scheme::Ous, t, (p * t as f64).round() as u64, 1);
        let z = (p - q) / est.wilson_standard_error();
        worst = worst.max(z.abs());
        if z.abs() > 3.0 {
            fails.push(format!("N={} M={} {}dB z={z:.1}", r.config.n_elements, r.config.n_users, r.config.gamma0_db));
        }
    }
    Ok((
        fails.is_empty(),
        format!("{checked} points, {} outside 3 SE, max |z| {worst:.1}; {}", fails.len(), fails.join(", ")),
    ))
}

/// Transmit SNR in dB at which the closed-form SOP falls to `target`.
fn crossing(n: usize, m: usize, target: f64) -> Result<f64, String> {
    let f = |g: f64| analytic::sop_theorem1(&cfg(n, m, g)).map(|r| r.value).map_err(|e| e.to_string());
    let (mut lo, mut hi) = (-20.0, 60.0);
    if f(lo)? < target || f(hi)? > target {
        return Err(format!("SOP {target} not crossed for N={n} M={m}"));
    }
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn c5() -> Outcome {
    let sop = |n, m, g| analytic::sop_theorem1(&cfg(n, m, g)).map(|r| r.value).map_err(|e| e.to_string());
    let mut ok = true;
    let mut notes = Vec::new();
    for n in [64, 128] {
        for m in [1, 3] {
            let r = rel(sop(n, m, 50.0)?, sop(n, m, 60.0)?);
            ok &= r <= 0.10;
            notes.push(format!("(a) N={n} M={m} 50/60dB rel {r:.2e}"));
        }
    }
    let gap = crossing(128, 1, 1e-3)? - crossing(128, 3, 1e-3)?;
    ok &= (gap - 3.0).abs() <= 1.0;
    notes.push(format!("(b) gap {gap:.2} dB"));
    for n in [64, 128] {
        let sat = sop(n, 3, 60.0)?;
        let closed = asymptotic::sop_asymptotic_closed(&cfg(n, 3, 60.0)).map_err(|e| e.to_string())?;
        let r = rel(closed, sat);
        ok &= r <= 0.25;
        notes.push(format!("(c) N={n} closed {closed:.3e} vs {sat:.3e} rel {r:.3}"));
    }
    Ok((ok, notes.join("; ")))
}

fn c6() -> Outcome {
    let closed = |c: SystemConfig| asymptotic::sop_asymptotic_closed(&c).map_err(|e| e.to_string());
    let base = SystemConfig::default();
    let reference = closed(base)?.to_bits();
    let mut invariant = true;
    for g in [20.0, 80.0] {
        invariant &= closed(SystemConfig { gamma0_db: g, ..base })?.to_bits() == reference;
    }
    for d in [30.0, 45.0, 60.0] {
        invariant &= closed(SystemConfig { d_sr: d, ..base })?.to_bits() == reference;
    }
    let ns = [32usize, 48, 64, 96, 128, 192, 256];
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let mut ys = Vec::new();
    for &n in &ns {
        let v = closed(SystemConfig { n_elements: n, ..base })?;
        if v <= 0.0 {
            return Ok((false, format!("non-positive SOP at N={n}")));
        }
        ys.push(v.ln());
    }
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = sxy * sxy / (sxx * syy);
    let ok = invariant && r2 >= 0.99 && slope < 0.0;
    Ok((ok, format!("bit-identical under gamma0 and d_sr: {invariant}; ln SOP vs N slope {slope:.4e}, R^2 {r2:.6}")))
}

fn c7() -> Outcome {
    let gammas: Vec<f64> = (0..=10).map(|i| 5.0 * i as f64).collect();
    let points: Vec<OperatingPoint> = gammas.iter().map(|&g| OperatingPoint { gamma0_db: g, r_th: 1.0 }).collect();
    let opts = McOptions { trials: 1_000_000, seed: 1, workers: 1, ..McOptions::default() };
    let schemes = [Scheme::Ous, Scheme::NomaBu, Scheme::NomaWu];
    let out = mc::estimate_batch(&cfg(64, 3, 0.0), &points, &schemes, &opts).map_err(|e| e.to_string())?;
    let (mut ok, mut notes) = (true, Vec::new());
    for (g, e) in gammas.iter().zip(&out) {
        let (ous, bu, wu) = (e[0].sop_hat, e[1].sop_hat, e[2].sop_hat);
        let mut bad = Vec::new();
        if bu < ous {
            bad.push("BU<OUS");
        }
        if *g >= 45.0 && (bu > 2.0 * ous || ous > 2.0 * bu) {
            bad.push("BU/OUS ratio beyond 2");
        }
        if wu < 0.9 {
            bad.push("WU<0.9");
        }
        ok &= bad.is_empty();
        notes.push(format!(
            "{g}dB OUS {ous:.3e} BU {bu:.3e} WU {wu:.4}{}",
            if bad.is_empty() { String::new() } else { format!(" [{}]", bad.join(",")) }
        ));
    }
    Ok((ok, notes.join("; ")))
}

fn c8() -> Outcome {
    let points: Vec<OperatingPoint> =
        [0.0, 20.0, 40.0].iter().map(|&g| OperatingPoint { gamma0_db: g, r_th: 1.0 }).collect();
    let run = |mode| {
        let opts = McOptions { trials: 1_000_000, seed: 1, mode, workers: 1, ..McOptions::default() };
        mc::estimate_batch(&cfg(64, 3, 0.0), &points, &[Scheme::Ous], &opts).map_err(|e| e.to_string())
    };
    let (phys, ind) = (run(McMode::Physical)?, run(McMode::Independent)?);
    let (mut ok, mut notes) = (true, Vec::new());
    for ((p, a), b) in points.iter().zip(&phys).zip(&ind) {
        let (a, b) = (a[0], b[0]);
        let se = a.wilson_standard_error().hypot(b.wilson_standard_error());
        let z = (a.sop_hat - b.sop_hat) / se;
        ok &= z.abs() <= 3.0;
        notes.push(format!("{}dB physical {:.4e} independent {:.4e} z={z:.1}", p.gamma0_db, a.sop_hat, b.sop_hat));
    }
    Ok((ok, notes.join("; ")))
}

fn c9(reference: &str) -> Outcome {
    if reference.is_empty() {
        return Err("criterion 4 produced no CSV".into());
    }
    let mut notes = vec!["workers=1".to_string()];
    let mut ok = true;
    for w in [4, 16] {
        let rows = sweep::run_sweep(&c4_spec(), RunOptions { workers: w }).map_err(|e| e.to_string())?;
        let same = sweep::emit_csv(&rows) == reference;
        ok &= same;
        notes.push(format!("workers={w} {}", if same { "identical" } else { "DIFFERS" }));
    }
    Ok((ok, format!("{} ({} bytes)", notes.join(", "), reference.len())))
}

fn report(id: u32, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let (pass, detail) = match f() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    println!(
        "{} criterion {id} {title} [{:.1}s]: {detail}",
        if pass { "PASS" } else { "FAIL" },
        t.elapsed().as_secs_f64()
    );
    pass
}

fn main() -> ExitCode {
    let mut csv = String::new();
    let results = [
        report(1, "closed-form terms vs quadrature", c1),
        report(2, "Q approximation error", c2),
        report(3, "closed form vs exact-Q quadrature", c3),
        report(4, "Monte Carlo vs exact-Q quadrature", || c4(&mut csv)),
        report(5, "saturation and user-diversity gap", c5),
        report(6, "high-SNR invariances and exponential decay in N", c6),
        report(7, "NOMA ordering", c7),
        report(8, "physical vs independent eavesdropper channel", c8),
        report(9, "determinism across worker counts", || c9(&csv)),
    ];
    let failed = results.iter().filter(|p| !**p).count();
    println!("{} criteria, {failed} failed", results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
