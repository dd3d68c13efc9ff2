//! Parameter sweeps over all evaluators, with CSV output.
//!
//! A sweep document is a JSON object holding any [`SystemConfig`] field
//! (the base point) plus the sweep controls:
//!
//! ```json
//! {
//!   "n_elements": 128,
//!   "sweep": [{"param": "gamma0_db", "values": [-10, 0, 10]}],
//!   "schemes": ["OUS", "NOMA_BU"],
//!   "evaluators": ["closed", "quad_exact", "mc"],
//!   "mc_trials": 100000,
//!   "seed": 7
//! }
//! ```
//!
//! Unknown keys are rejected. Rows come out in grid-major order: the first
//! axis varies slowest, and schemes vary fastest within a grid point.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SopError};
use crate::mc::{self, McMode, McOptions, OperatingPoint, Scheme};
use crate::specfun::{self, MultinomialTerm};
use crate::sysmodel::{derive_clt_params, SystemConfig};
use crate::{analytic, asymptotic, quadrature};

/// Largest accepted grid (points times schemes is not limited separately).
pub const MAX_GRID_POINTS: usize = 1_000_000;

/// SOP values below this are written as 0.
pub const REPORT_FLOOR: f64 = 1e-12;

pub const CSV_HEADER: &str = "gamma0_db,n_elements,n_users,d_sr,d_rd,d_re,r_th,scheme,sop_closed,sop_asym,\
sop_quad_exact,sop_quad_approx,sop_mc,sop_mc_ci_low,sop_mc_ci_high,mc_trials,seed";

/// A sweepable configuration field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Gamma0Db,
    NElements,
    NUsers,
    DSr,
    DRd,
    DRe,
    RTh,
}

impl SweepParam {
    fn apply(self, cfg: &mut SystemConfig, v: f64) -> Result<()> {
        let count = |v: f64| -> Result<usize> {
            if v.fract() != 0.0 || !(1.0..=1e9).contains(&v) {
                return Err(SopError::Validation(format!("{self:?} needs a positive integer, got {v}")));
            }
            Ok(v as usize)
        };
        match self {
            SweepParam::Gamma0Db => cfg.gamma0_db = v,
            SweepParam::NElements => cfg.n_elements = count(v)?,
            SweepParam::NUsers => cfg.n_users = count(v)?,
            SweepParam::DSr => cfg.d_sr = v,
            SweepParam::DRd => cfg.d_rd = v,
            SweepParam::DRe => cfg.d_re = v,
            SweepParam::RTh => cfg.r_th = v,
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evaluator {
    /// Closed form with the three-exponential Q.
    Closed,
    /// High-SNR closed form in terms of the basic parameters.
    Asymptotic,
    /// Quadrature with the exact Q-function.
    QuadExact,
    /// Quadrature with the three-exponential Q.
    QuadApprox,
    /// Monte Carlo simulation.
    Mc,
}

/// A parsed sweep document.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: SystemConfig,
    pub sweep_axes: Vec<SweepAxis>,
    pub schemes: Vec<Scheme>,
    pub evaluators: Vec<Evaluator>,
    pub mc_trials: u64,
    pub seed: u64,
    pub mc_mode: McMode,
    pub noma_power_grid: usize,
}

/// Wire form of [`SweepSpec`]; every field optional.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    #[serde(skip_serializing_if = "Option::is_none")]
    n_elements: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_users: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d_sr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d_rd: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    z0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    upsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma0_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r_th: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep: Option<Vec<SweepAxis>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    schemes: Option<Vec<Scheme>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    evaluators: Option<Vec<Evaluator>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mc_trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mc_mode: Option<McMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    noma_power_grid: Option<usize>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            base: SystemConfig::default(),
            sweep_axes: Vec::new(),
            schemes: vec![Scheme::Ous],
            evaluators: vec![
                Evaluator::Closed,
                Evaluator::Asymptotic,
                Evaluator::QuadExact,
                Evaluator::QuadApprox,
                Evaluator::Mc,
            ],
            mc_trials: 100_000,
            seed: 1,
            mc_mode: McMode::Physical,
            noma_power_grid: 99,
        }
    }
}

fn json_error(e: serde_json::Error) -> SopError {
    use serde_json::error::Category;
    match e.classify() {
        Category::Syntax | Category::Eof | Category::Io => {
            SopError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
        }
        Category::Data => SopError::Schema(e.to_string()),
    }
}

/// Parses and validates a sweep document.
pub fn parse_config(document: &str) -> Result<SweepSpec> {
    let doc: Document = serde_json::from_str(document).map_err(json_error)?;
    let d = SweepSpec::default();
    let b = d.base;
    let spec = SweepSpec {
        base: SystemConfig {
            n_elements: doc.n_elements.unwrap_or(b.n_elements),
            n_users: doc.n_users.unwrap_or(b.n_users),
            d_sr: doc.d_sr.unwrap_or(b.d_sr),
            d_rd: doc.d_rd.unwrap_or(b.d_rd),
            d_re: doc.d_re.unwrap_or(b.d_re),
            z0: doc.z0.unwrap_or(b.z0),
            upsilon: doc.upsilon.unwrap_or(b.upsilon),
            gamma0_db: doc.gamma0_db.unwrap_or(b.gamma0_db),
            r_th: doc.r_th.unwrap_or(b.r_th),
        },
        sweep_axes: doc.sweep.unwrap_or(d.sweep_axes),
        schemes: doc.schemes.unwrap_or(d.schemes),
        evaluators: doc.evaluators.unwrap_or(d.evaluators),
        mc_trials: doc.mc_trials.unwrap_or(d.mc_trials),
        seed: doc.seed.unwrap_or(d.seed),
        mc_mode: doc.mc_mode.unwrap_or(d.mc_mode),
        noma_power_grid: doc.noma_power_grid.unwrap_or(d.noma_power_grid),
    };
    spec.validate()?;
    Ok(spec)
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SopError::Validation(m));
        self.base.validate()?;
        if self.schemes.is_empty() {
            return bad("at least one scheme is required".into());
        }
        if self.evaluators.is_empty() {
            return bad("at least one evaluator is required".into());
        }
        if self.evaluators.contains(&Evaluator::Mc) && self.mc_trials == 0 {
            return bad("mc_trials must be at least 1".into());
        }
        if self.noma_power_grid == 0 {
            return bad("noma_power_grid must be at least 1".into());
        }
        let mut seen = Vec::new();
        let mut size = 1usize;
        for axis in &self.sweep_axes {
            if seen.contains(&axis.param) {
                return bad(format!("axis {:?} given twice", axis.param));
            }
            seen.push(axis.param);
            if axis.values.is_empty() {
                return bad(format!("axis {:?} has no values", axis.param));
            }
            size = size.saturating_mul(axis.values.len());
            for &v in &axis.values {
                let mut c = self.base;
                axis.param.apply(&mut c, v)?;
                c.validate()?;
            }
        }
        if size > MAX_GRID_POINTS {
            return bad(format!("grid has {size} points, limit is {MAX_GRID_POINTS}"));
        }
        Ok(())
    }

    /// Canonical JSON form; parses back to an equal spec.
    pub fn to_json(&self) -> String {
        let b = self.base;
        let doc = Document {
            n_elements: Some(b.n_elements),
            n_users: Some(b.n_users),
            d_sr: Some(b.d_sr),
            d_rd: Some(b.d_rd),
            d_re: Some(b.d_re),
            z0: Some(b.z0),
            upsilon: Some(b.upsilon),
            gamma0_db: Some(b.gamma0_db),
            r_th: Some(b.r_th),
            sweep: Some(self.sweep_axes.clone()),
            schemes: Some(self.schemes.clone()),
            evaluators: Some(self.evaluators.clone()),
            mc_trials: Some(self.mc_trials),
            seed: Some(self.seed),
            mc_mode: Some(self.mc_mode),
            noma_power_grid: Some(self.noma_power_grid),
        };
        serde_json::to_string_pretty(&doc).expect("document serializes")
    }

    /// Every grid point in grid-major order.
    pub fn grid(&self) -> Result<Vec<SystemConfig>> {
        let mut points = vec![self.base];
        for axis in &self.sweep_axes {
            let mut next = Vec::with_capacity(points.len() * axis.values.len());
            for p in &points {
                for &v in &axis.values {
                    let mut c = *p;
                    axis.param.apply(&mut c, v)?;
                    next.push(c);
                }
            }
            points = next;
        }
        Ok(points)
    }
}

/// One output row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub config: SystemConfig,
    pub scheme: Scheme,
    pub sop_closed: Option<f64>,
    pub sop_asym: Option<f64>,
    pub sop_quad_exact: Option<f64>,
    pub sop_quad_approx: Option<f64>,
    pub sop_mc: Option<f64>,
    pub sop_mc_ci_low: Option<f64>,
    pub sop_mc_ci_high: Option<f64>,
    pub mc_trials: Option<u64>,
    pub seed: Option<u64>,
    /// Evaluator failures of this row; not part of the CSV.
    pub errors: Vec<String>,
}

impl SweepRow {
    fn empty(config: SystemConfig, scheme: Scheme) -> Self {
        Self {
            config,
            scheme,
            sop_closed: None,
            sop_asym: None,
            sop_quad_exact: None,
            sop_quad_approx: None,
            sop_mc: None,
            sop_mc_ci_low: None,
            sop_mc_ci_high: None,
            mc_trials: None,
            seed: None,
            errors: Vec::new(),
        }
    }
}

/// Options that do not change the results.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOptions {
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
}

fn record(row: &mut SweepRow, name: &str, r: Result<f64>) -> Option<f64> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            row.errors.push(format!("{name}: {e}"));
            None
        }
    }
}

fn analytic_row(spec: &SweepSpec, cfg: SystemConfig) -> SweepRow {
    let mut row = SweepRow::empty(cfg, Scheme::Ous);
    for ev in &spec.evaluators {
        match ev {
            Evaluator::Closed => {
                row.sop_closed = record(&mut row, "closed", analytic::sop_theorem1(&cfg).map(|r| r.value))
            }
            Evaluator::Asymptotic => {
                row.sop_asym = record(&mut row, "asymptotic", asymptotic::sop_asymptotic_closed(&cfg))
            }
            Evaluator::QuadExact => {
                row.sop_quad_exact = record(&mut row, "quad_exact", quadrature::sop_quad_exact_q(&cfg).map(|r| r.value))
            }
            Evaluator::QuadApprox => {
                row.sop_quad_approx =
                    record(&mut row, "quad_approx", quadrature::sop_quad_approx_q(&cfg).map(|r| r.value))
            }
            Evaluator::Mc => {}
        }
    }
    row
}

/// Grid points that share channel statistics; only the transmit SNR and
/// the threshold differ inside a group.
fn fading_key(c: &SystemConfig) -> (usize, usize, [u64; 5]) {
    (c.n_elements, c.n_users, [c.d_sr, c.d_rd, c.d_re, c.z0, c.upsilon].map(f64::to_bits))
}

/// Evaluates every grid point and scheme.
pub fn run_sweep(spec: &SweepSpec, opts: RunOptions) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    if opts.workers == 0 {
        run_inner(spec, 0)
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| SopError::Evaluation(format!("thread pool: {e}")))?
            .install(|| run_inner(spec, opts.workers))
    }
}

fn run_inner(spec: &SweepSpec, workers: usize) -> Result<Vec<SweepRow>> {
    let grid = spec.grid()?;
    let ous_wanted = spec.schemes.contains(&Scheme::Ous);
    let analytic: Vec<Option<SweepRow>> = grid.par_iter().map(|&c| ous_wanted.then(|| analytic_row(spec, c))).collect();

    // Monte Carlo: one pass over the channel draws per fading group.
    let mut mc_results: Vec<Vec<Result<mc::McEstimate>>> = Vec::new();
    if spec.evaluators.contains(&Evaluator::Mc) {
        mc_results = grid.iter().map(|_| Vec::new()).collect();
        let mut groups: BTreeMap<_, Vec<usize>> = BTreeMap::new();
        for (i, c) in grid.iter().enumerate() {
            groups.entry(fading_key(c)).or_default().push(i);
        }
        let mc_opts = McOptions {
            trials: spec.mc_trials,
            seed: spec.seed,
            mode: spec.mc_mode,
            workers,
            power_grid_size: spec.noma_power_grid,
        };
        for members in groups.values() {
            let cfg = grid[members[0]];
            let points: Vec<OperatingPoint> =
                members.iter().map(|&i| OperatingPoint { gamma0_db: grid[i].gamma0_db, r_th: grid[i].r_th }).collect();
            let pairable = cfg.n_users >= 2;
            let schemes: Vec<Scheme> = spec.schemes.iter().copied().filter(|&s| s == Scheme::Ous || pairable).collect();
            let out = if schemes.is_empty() {
                Ok(vec![Vec::new(); points.len()])
            } else {
                mc::estimate_batch(&cfg, &points, &schemes, &mc_opts)
            };
            for (k, &i) in members.iter().enumerate() {
                mc_results[i] = spec
                    .schemes
                    .iter()
                    .map(|&s| match &out {
                        Err(e) => Err(e.clone()),
                        Ok(per_point) => per_point[k].iter().find(|e| e.scheme == s).copied().ok_or_else(|| {
                            SopError::Contract(format!("NOMA pairing needs at least 2 users, got {}", cfg.n_users))
                        }),
                    })
                    .collect();
            }
        }
    }

    let mut rows = Vec::with_capacity(grid.len() * spec.schemes.len());
    for (i, &c) in grid.iter().enumerate() {
        for (j, &s) in spec.schemes.iter().enumerate() {
            let mut row = match (&analytic[i], s) {
                (Some(r), Scheme::Ous) => r.clone(),
                _ => SweepRow::empty(c, s),
            };
            if let Some(per_scheme) = mc_results.get(i) {
                row.mc_trials = Some(spec.mc_trials);
                row.seed = Some(spec.seed);
                match &per_scheme[j] {
                    Ok(e) => {
                        row.sop_mc = Some(e.sop_hat);
                        row.sop_mc_ci_low = Some(e.ci_low);
                        row.sop_mc_ci_high = Some(e.ci_high);
                    }
                    Err(e) => row.errors.push(format!("mc: {e}")),
                }
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

fn sop_field(out: &mut String, v: Option<f64>) {
    if let Some(v) = v {
        let v = if v.abs() < REPORT_FLOOR { 0.0 } else { v };
        write!(out, "{v:?}").unwrap();
    }
}

/// CSV text of a table, header first. SOP values below [`REPORT_FLOOR`]
/// are written as 0; missing values as empty fields.
pub fn emit_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let c = &r.config;
        write!(
            out,
            "{:?},{},{},{:?},{:?},{:?},{:?},{},",
            c.gamma0_db,
            c.n_elements,
            c.n_users,
            c.d_sr,
            c.d_rd,
            c.d_re,
            c.r_th,
            r.scheme.as_str()
        )
        .unwrap();
        for v in
            [r.sop_closed, r.sop_asym, r.sop_quad_exact, r.sop_quad_approx, r.sop_mc, r.sop_mc_ci_low, r.sop_mc_ci_high]
        {
            sop_field(&mut out, v);
            out.push(',');
        }
        if let Some(t) = r.mc_trials {
            write!(out, "{t}").unwrap();
        }
        out.push(',');
        if let Some(s) = r.seed {
            write!(out, "{s}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Reads a table written by [`emit_csv`]. Fields absent from the CSV
/// (`z0`, `upsilon`) are taken from `base`.
pub fn parse_csv(text: &str, base: &SystemConfig) -> Result<Vec<SweepRow>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| SopError::Io(e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>().join(",") != CSV_HEADER {
        return Err(SopError::Schema("unexpected CSV header".into()));
    }
    let mut rows = Vec::new();
    for (idx, rec) in reader.records().enumerate() {
        let line = idx + 2;
        let rec = rec.map_err(|e| SopError::Parse { line, column: 0, message: e.to_string() })?;
        let field = |k: usize| -> Result<Option<&str>> {
            let f = rec.get(k).ok_or_else(|| SopError::Parse { line, column: k, message: "missing field".into() })?;
            Ok((!f.is_empty()).then_some(f))
        };
        fn num<T: std::str::FromStr>(s: &str, line: usize, k: usize) -> Result<T> {
            s.parse().map_err(|_| SopError::Parse { line, column: k, message: format!("bad number {s:?}") })
        }
        let req = |k: usize| -> Result<&str> {
            field(k)?.ok_or_else(|| SopError::Parse { line, column: k, message: "empty required field".into() })
        };
        let opt_f = |k: usize| -> Result<Option<f64>> { field(k)?.map(|s| num(s, line, k)).transpose() };
        let config = SystemConfig {
            gamma0_db: num(req(0)?, line, 0)?,
            n_elements: num(req(1)?, line, 1)?,
            n_users: num(req(2)?, line, 2)?,
            d_sr: num(req(3)?, line, 3)?,
            d_rd: num(req(4)?, line, 4)?,
            d_re: num(req(5)?, line, 5)?,
            r_th: num(req(6)?, line, 6)?,
            ..*base
        };
        rows.push(SweepRow {
            config,
            scheme: req(7)?.parse()?,
            sop_closed: opt_f(8)?,
            sop_asym: opt_f(9)?,
            sop_quad_exact: opt_f(10)?,
            sop_quad_approx: opt_f(11)?,
            sop_mc: opt_f(12)?,
            sop_mc_ci_low: opt_f(13)?,
            sop_mc_ci_high: opt_f(14)?,
            mc_trials: field(15)?.map(|s| num(s, line, 15)).transpose()?,
            seed: field(16)?.map(|s| num(s, line, 16)).transpose()?,
            errors: Vec::new(),
        });
    }
    Ok(rows)
}

/// One line of the quadrature cross-check report.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub point: SystemConfig,
    pub name: String,
    pub closed: f64,
    pub quadrature: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl std::fmt::Display for OracleCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} N={} M={} gamma0={}dB {}: closed={:e} quad={:e} rel={:.2e} tol={:.0e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.point.n_elements,
            self.point.n_users,
            self.point.gamma0_db,
            self.name,
            self.closed,
            self.quadrature,
            self.rel_error,
            self.tolerance
        )
    }
}

/// Relative error with exact zeros treated as agreement.
pub fn relative_error(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

fn check(point: SystemConfig, name: String, closed: f64, quad: f64, tol: f64) -> OracleCheck {
    let rel = relative_error(closed, quad);
    OracleCheck { point, name, closed, quadrature: quad, rel_error: rel, tolerance: tol, pass: rel <= tol }
}

/// Tier one: every closed-form term against quadrature of its defining
/// integral, up to order 4.
pub fn term_checks(cfg: &SystemConfig) -> Result<Vec<OracleCheck>> {
    let p = derive_clt_params(cfg)?;
    let shift = p.rho - 1.0;
    let mut out = Vec::new();
    let label = |kind: &str, t: &MultinomialTerm| format!("{kind} term m={} k={:?}", t.m, t.k);
    for m in 1..=cfg.n_users.min(4) {
        for t in specfun::multinomial_set(m)? {
            let ctx = analytic::TermContext::new(t, &p);
            let j = analytic::j_plus_term(&ctx, &p)?;
            let jq = quadrature::term_quad(&t, &p, shift, quadrature::Domain::Full)?.value;
            out.push(check(*cfg, label("J+", &t), j, jq, 1e-6));
            if ctx.alpha > 0.0 {
                let i = analytic::i_plus_term(&ctx, &p)?;
                let iq = quadrature::term_quad(&t, &p, shift, quadrature::Domain::AboveKink)?.value;
                out.push(check(*cfg, label("I+", &t), i, iq, 1e-6));
            }
        }
        if p.alpha() > 0.0 {
            let im = analytic::i_minus(m, &p)?;
            let imq = quadrature::complement_power_quad(m, &p, shift)?.value;
            out.push(check(*cfg, format!("I- m={m}"), im, imq, 1e-6));
        }
    }
    Ok(out)
}

/// Tier two: the full closed form against quadrature with the same Q
/// approximation (tight) and with the exact Q (5%, where SOP >= 1e-5).
pub fn sop_checks(cfg: &SystemConfig) -> Result<Vec<OracleCheck>> {
    let closed = analytic::sop_theorem1(cfg)?.value;
    let approx = quadrature::sop_quad_approx_q(cfg)?.value;
    let exact = quadrature::sop_quad_exact_q(cfg)?.value;
    let mut out = vec![check(*cfg, "SOP vs approx-Q quadrature".into(), closed, approx, 1e-6)];
    if exact >= 1e-5 {
        out.push(check(*cfg, "SOP vs exact-Q quadrature".into(), closed, exact, 0.05));
    }
    Ok(out)
}

/// Both tiers at every grid point of a sweep.
pub fn oracle_report(spec: &SweepSpec) -> Result<Vec<OracleCheck>> {
    let grid = spec.grid()?;
    let per_point: Vec<Result<Vec<OracleCheck>>> = grid
        .par_iter()
        .map(|c| {
            let mut v = term_checks(c)?;
            v.extend(sop_checks(c)?);
            Ok(v)
        })
        .collect();
    let mut out = Vec::new();
    for r in per_point {
        out.extend(r?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_has_seventeen_columns() {
        assert_eq!(CSV_HEADER.split(',').count(), 17);
    }

    #[test]
    fn integer_axes_reject_fractions() {
        let mut c = SystemConfig::default();
        assert!(SweepParam::NUsers.apply(&mut c, 2.5).is_err());
        assert!(SweepParam::NElements.apply(&mut c, 0.0).is_err());
        SweepParam::NUsers.apply(&mut c, 4.0).unwrap();
        assert_eq!(c.n_users, 4);
    }

    #[test]
    fn floor_applies_to_sop_columns() {
        let mut row = SweepRow::empty(SystemConfig::default(), Scheme::Ous);
        row.sop_closed = Some(3e-13);
        row.sop_asym = Some(2e-12);
        let csv = emit_csv(&[row]);
        let line = csv.lines().nth(1).unwrap();
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[8], "0.0");
        assert_eq!(f[9], "2e-12");
    }
}
