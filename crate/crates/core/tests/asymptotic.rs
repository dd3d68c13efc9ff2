use ris_sop::analytic;
use ris_sop::asymptotic::{self, closed_from_ratio};
use ris_sop::quadrature;
use ris_sop::SystemConfig;

fn cfg(n: usize, m: usize, g: f64) -> SystemConfig {
    SystemConfig { n_elements: n, n_users: m, gamma0_db: g, ..SystemConfig::default() }
}

#[test]
fn breakdown_is_consistent() {
    let b = asymptotic::sop_asymptotic(&cfg(64, 3, 60.0)).unwrap();
    assert_eq!(b.sop_simplified, 1.0 - b.p1 - b.p3);
    assert!(b.p2 <= 0.0);
    assert!(b.warnings.is_empty());
    assert!([b.p1, b.p2, b.p3, b.sop_simplified, b.sop_closed].iter().all(|v| v.is_finite()));
}

#[test]
fn warns_outside_large_system_regime() {
    assert!(!asymptotic::sop_asymptotic(&cfg(64, 1, 60.0)).unwrap().warnings.is_empty());
    assert!(!asymptotic::sop_asymptotic(&cfg(16, 3, 60.0)).unwrap().warnings.is_empty());
}

#[test]
fn approaches_finite_snr_closed_form() {
    let a = asymptotic::sop_asymptotic(&cfg(64, 3, 80.0)).unwrap().sop_simplified;
    let t = analytic::sop_theorem1(&cfg(64, 3, 80.0)).unwrap().value;
    assert!(((a - t) / t).abs() <= 0.10, "{a:e} vs {t:e}");
}

#[test]
fn high_snr_quadrature_agrees_with_exact_at_80db() {
    let c = cfg(64, 3, 80.0);
    let hi = quadrature::sop_quad_asymptotic(&c).unwrap().value;
    let ex = quadrature::sop_quad_exact_q(&c).unwrap().value;
    assert!(((hi - ex) / ex).abs() <= 0.01);
}

#[test]
fn high_snr_quadrature_invalid_at_low_snr() {
    let c = SystemConfig { r_th: 4.0, ..cfg(64, 3, 0.0) };
    let hi = quadrature::sop_quad_asymptotic(&c).unwrap().value;
    let ex = quadrature::sop_quad_exact_q(&c).unwrap().value;
    assert!(((hi - ex) / ex).abs() > 0.10);
}

#[test]
fn closed_form_ignores_power_and_source_distance() {
    let base = cfg(64, 3, 20.0);
    let r = asymptotic::sop_asymptotic_closed(&base).unwrap().to_bits();
    for g in [20.0, 40.0, 80.0] {
        assert_eq!(asymptotic::sop_asymptotic_closed(&SystemConfig { gamma0_db: g, ..base }).unwrap().to_bits(), r);
    }
    for d in [30.0, 45.0, 60.0] {
        assert_eq!(asymptotic::sop_asymptotic_closed(&SystemConfig { d_sr: d, ..base }).unwrap().to_bits(), r);
    }
}

#[test]
fn closed_form_tracks_simplified_route() {
    let c = cfg(128, 3, 60.0);
    let closed = asymptotic::sop_asymptotic_closed(&c).unwrap();
    let simplified = asymptotic::sop_asymptotic(&c).unwrap().sop_simplified;
    assert!(((closed - simplified) / simplified).abs() <= 0.15);
}

#[test]
fn decays_exponentially_in_elements() {
    let ns = [32usize, 48, 64, 96, 128, 192, 256];
    let ys: Vec<f64> = ns.iter().map(|&n| asymptotic::sop_asymptotic_closed(&cfg(n, 3, 60.0)).unwrap().ln()).collect();
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    assert!(sxy < 0.0);
    assert!(sxy * sxy / (sxx * syy) >= 0.99);
}

#[test]
fn decreasing_in_path_loss_ratio() {
    let mut prev = f64::INFINITY;
    for i in 0..=40 {
        let ratio = 0.1 * 100f64.powf(i as f64 / 40.0);
        let v = closed_from_ratio(64, 3, 2.0, ratio).unwrap();
        if v <= 0.0 {
            break;
        }
        assert!(v < prev, "ratio {ratio}");
        prev = v;
    }
}
