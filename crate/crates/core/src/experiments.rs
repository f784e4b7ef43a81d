//! Monte Carlo harness for threshold phenomena of random k-partite graphs.
//!
//! Every trial draws its own seed from `(master seed, n, trial)`, so records
//! are reproducible regardless of how many worker threads run them. Wall time
//! (`ms`) is the only field that differs between runs.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{gnm, gnp, md_process, HypergraphError, PartiteHypergraph};
use crate::identifiability::{
    co_condition_generic, combine_verdict, global_rigid_1d_complex, global_rigid_1d_real, mm_condition_iii, FieldKind,
    Verdict, SNF_MAX_VERTICES,
};
use crate::rigidity::{local_rigid, RigidityOptions};
use crate::rng::derive_seed;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("size guard: {0}")]
    Guard(String),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error("output: {0}")]
    Output(String),
}

impl From<csv::Error> for ExperimentError {
    fn from(e: csv::Error) -> Self {
        Self::Output(e.to_string())
    }
}

impl From<std::io::Error> for ExperimentError {
    fn from(e: std::io::Error) -> Self {
        Self::Output(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// Local rigidity in dimension `d`.
    Local,
    /// One-dimensional global rigidity over the reals and the complex numbers.
    Global1d,
    /// The cycle-weight route: one-dimensional global rigidity, local
    /// rigidity in dimension `d + 1`, and the common-kernel condition.
    Mm,
    /// The stress-weight route in dimension `d`.
    Co,
}

impl std::str::FromStr for Certificate {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "local" => Ok(Self::Local),
            "global_1d" | "global1d" => Ok(Self::Global1d),
            "mm" => Ok(Self::Mm),
            "co" => Ok(Self::Co),
            other => Err(ExperimentError::Config(format!("unknown certificate {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grid {
    /// `G(n, m)` for each `m`; the graphs of one trial are nested prefixes.
    Edges(Vec<u64>),
    /// `G(n, p)` for each `p`.
    Probabilities(Vec<f64>),
    /// `G(n, M_d)` and `G(n, M_{d+1})` read off one insertion trace.
    AtThreshold,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub k: usize,
    pub d: usize,
    pub ns: Vec<usize>,
    pub grid: Grid,
    pub trials: usize,
    pub certificates: Vec<Certificate>,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Random evaluations per Monte Carlo certificate.
    pub rigidity_trials: usize,
}

impl SweepConfig {
    pub fn new(k: usize, d: usize, ns: Vec<usize>, grid: Grid, trials: usize, certificates: Vec<Certificate>, seed: u64) -> Self {
        Self { k, d, ns, grid, trials, certificates, seed, threads: None, rigidity_trials: 3 }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::Config(m));
        if self.k < 2 {
            return bad(format!("k must be at least 2, got {}", self.k));
        }
        if self.d == 0 {
            return bad("d must be at least 1".into());
        }
        if self.ns.is_empty() || self.ns.contains(&0) {
            return bad("n-list must be nonempty with positive entries".into());
        }
        if self.trials == 0 || self.rigidity_trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.certificates.is_empty() {
            return bad("no certificates requested".into());
        }
        if self.threads == Some(0) {
            return bad("thread count must be positive".into());
        }
        for &n in &self.ns {
            let total = (n as u64).checked_pow(self.k as u32).ok_or_else(|| ExperimentError::Config(format!("n^k overflows for n = {n}")))?;
            match &self.grid {
                Grid::Edges(ms) if ms.is_empty() => return bad("m-grid is empty".into()),
                Grid::Edges(ms) => {
                    if let Some(m) = ms.iter().find(|&&m| m > total) {
                        return bad(format!("m = {m} exceeds n^k = {total} for n = {n}"));
                    }
                }
                Grid::Probabilities(ps) if ps.is_empty() => return bad("p-grid is empty".into()),
                Grid::Probabilities(ps) => {
                    if let Some(p) = ps.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                        return bad(format!("p = {p} outside [0, 1]"));
                    }
                }
                Grid::AtThreshold => {
                    if (self.d + 1) as u64 > total / n as u64 {
                        return bad(format!("M_{} undefined for n = {n}: degree exceeds n^(k-1)", self.d + 1));
                    }
                }
            }
            if self.certificates.contains(&Certificate::Global1d) && n * self.k > SNF_MAX_VERTICES {
                return Err(ExperimentError::Guard(format!(
                    "one-dimensional complex certificate needs N <= {SNF_MAX_VERTICES}, got N = {}",
                    n * self.k
                )));
            }
        }
        Ok(())
    }
}

/// One row of sweep output; the field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub mode: String,
    pub m: u64,
    pub min_degree: usize,
    pub local: Option<bool>,
    pub global1d_real: Option<bool>,
    pub global1d_cplx: Option<bool>,
    pub mm_i: Option<bool>,
    /// Local rigidity in dimension `d + 1`.
    pub mm_ii: Option<bool>,
    pub mm_iii: Option<bool>,
    pub co: Option<bool>,
    pub verdict: Option<Verdict>,
    pub ms: f64,
}

pub const CSV_HEADER: &str = "seed,n,k,d,mode,m,min_degree,local,global1d_real,global1d_cplx,mm_i,mm_ii,mm_iii,co,verdict,ms";

impl ExperimentRecord {
    /// Equality ignoring wall time.
    pub fn same_outcome(&self, other: &Self) -> bool {
        Self { ms: 0.0, ..self.clone() } == Self { ms: 0.0, ..other.clone() }
    }
}

/// Evaluates the requested certificates on one graph.
pub fn evaluate(
    g: &PartiteHypergraph,
    n: usize,
    d: usize,
    mode: &str,
    certificates: &[Certificate],
    opts: &RigidityOptions,
) -> ExperimentRecord {
    let start = Instant::now();
    let has = |c| certificates.contains(&c);
    let min_degree = g.min_degree();
    let local = has(Certificate::Local).then(|| local_rigid(g, d, opts).rigid);
    if local == Some(true) {
        assert!(min_degree >= d, "locally rigid graph with minimum degree {min_degree} < {d}");
    }
    let want_1d = has(Certificate::Global1d) || has(Certificate::Mm);
    let global1d_real = want_1d.then(|| global_rigid_1d_real(g).holds);
    let global1d_cplx = if has(Certificate::Global1d) { global_rigid_1d_complex(g).ok().map(|c| c.holds) } else { None };
    let (mm_i, mm_ii, mm_iii) = if has(Certificate::Mm) {
        (global1d_real, Some(local_rigid(g, d + 1, opts).rigid), Some(mm_condition_iii(g).holds))
    } else {
        (None, None, None)
    };
    let co = has(Certificate::Co).then(|| co_condition_generic(g, d, opts).0.holds);
    let verdict = if min_degree < d {
        Some(Verdict::NotGloballyRigid)
    } else {
        global1d_real.and_then(|real| {
            (d == 1 || mm_iii.is_some() || co.is_some()).then(|| {
                combine_verdict(
                    d,
                    FieldKind::Real,
                    min_degree,
                    real,
                    mm_ii.unwrap_or(false) && mm_iii.unwrap_or(false),
                    co.unwrap_or(false),
                )
            })
        })
    };
    ExperimentRecord {
        seed: opts.seed,
        n,
        k: g.k(),
        d,
        mode: mode.to_string(),
        m: g.num_edges() as u64,
        min_degree,
        local,
        global1d_real,
        global1d_cplx,
        mm_i,
        mm_ii,
        mm_iii,
        co,
        verdict,
        ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// Seed of trial `trial` at size `n`.
pub fn trial_seed(master: u64, n: usize, trial: usize) -> u64 {
    derive_seed(derive_seed(master, n as u64), trial as u64)
}

type Keyed = ((usize, usize, usize, usize), ExperimentRecord);

fn run_trial(cfg: &SweepConfig, ni: usize, trial: usize) -> Result<Vec<Keyed>, ExperimentError> {
    let n = cfg.ns[ni];
    let seed = trial_seed(cfg.seed, n, trial);
    let opts = RigidityOptions { trials: cfg.rigidity_trials, ..RigidityOptions::with_seed(seed) };
    let eval = |g: &PartiteHypergraph, mode: &str| evaluate(g, n, cfg.d, mode, &cfg.certificates, &opts);
    let mut out = Vec::new();
    match &cfg.grid {
        Grid::Edges(ms) => {
            // nested prefixes of one trace, so rigidity can only switch on
            let mut order: Vec<usize> = (0..ms.len()).collect();
            order.sort_by_key(|&i| ms[i]);
            let mut seen_local = false;
            for gi in order {
                let rec = eval(&gnm(n, cfg.k, ms[gi], seed)?, "gnm");
                if seen_local {
                    assert_ne!(rec.local, Some(false), "local rigidity lost along a trace (seed {seed})");
                }
                seen_local |= rec.local == Some(true);
                out.push(((ni, 0, gi, trial), rec));
            }
        }
        Grid::Probabilities(ps) => {
            for (gi, &p) in ps.iter().enumerate() {
                out.push(((ni, 0, gi, trial), eval(&gnp(n, cfg.k, p, seed)?, "gnp")));
            }
        }
        Grid::AtThreshold => {
            let trace = md_process(n, cfg.k, cfg.d + 1, seed)?;
            let m_d = trace.stopping_time(cfg.d);
            out.push(((ni, 0, 0, trial), eval(&trace.graph_at(m_d), "m_d")));
            out.push(((ni, 1, 0, trial), eval(&trace.graph_at(trace.m_d), "m_d_next")));
        }
    }
    Ok(out)
}

/// Runs the sweep; records come back sorted by size, grid point, then trial.
pub fn threshold_sweep(cfg: &SweepConfig) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> = (0..cfg.ns.len()).flat_map(|ni| (0..cfg.trials).map(move |t| (ni, t))).collect();
    let run = || -> Result<Vec<Vec<Keyed>>, ExperimentError> {
        jobs.par_iter().map(|&(ni, t)| run_trial(cfg, ni, t)).collect()
    };
    let batches = match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| ExperimentError::Config(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    let mut keyed: Vec<Keyed> = batches.into_iter().flatten().collect();
    keyed.sort_by_key(|(key, _)| *key);
    Ok(keyed.into_iter().map(|(_, r)| r).collect())
}

pub fn write_records_csv<W: Write>(records: &[ExperimentRecord], out: W) -> Result<(), ExperimentError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Wilson score interval at 95%.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + Z * Z / n;
    let centre = (p + Z * Z / (2.0 * n)) / denom;
    let half = Z / denom * (p * (1.0 - p) / n + Z * Z / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveRow {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub mode: String,
    pub m: u64,
    pub certificate: String,
    pub trials: usize,
    pub successes: usize,
    pub rate: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

/// (n, k, d, mode, grid point, certificate).
type CurveKey = (usize, usize, usize, String, u64, &'static str);

/// Success rates per grid point and certificate. Certificates never
/// evaluated at a grid point produce no row.
pub fn curve_summary(records: &[ExperimentRecord]) -> Vec<CurveRow> {
    let mut table: BTreeMap<CurveKey, (usize, usize)> = BTreeMap::new();
    for r in records {
        let columns: [(&'static str, Option<bool>); 8] = [
            ("local", r.local),
            ("global1d_real", r.global1d_real),
            ("global1d_cplx", r.global1d_cplx),
            ("mm_i", r.mm_i),
            ("mm_ii", r.mm_ii),
            ("mm_iii", r.mm_iii),
            ("co", r.co),
            ("globally_rigid", r.verdict.map(|v| v == Verdict::GloballyRigid)),
        ];
        for (name, value) in columns {
            if let Some(v) = value {
                let cell = table.entry((r.n, r.k, r.d, r.mode.clone(), r.m, name)).or_default();
                cell.0 += 1;
                cell.1 += usize::from(v);
            }
        }
    }
    table
        .into_iter()
        .map(|((n, k, d, mode, m, name), (trials, successes))| {
            let (wilson_lo, wilson_hi) = wilson_interval(successes, trials);
            CurveRow {
                n,
                k,
                d,
                mode,
                m,
                certificate: name.to_string(),
                trials,
                successes,
                rate: successes as f64 / trials as f64,
                wilson_lo,
                wilson_hi,
            }
        })
        .collect()
}

/// Like [`curve_summary`], but pools all records with the same `(n, mode)`
/// regardless of `m` — the natural view for at-threshold sweeps.
pub fn threshold_rates(records: &[ExperimentRecord], mode: &str, certificate: &str) -> Vec<CurveRow> {
    let pooled: Vec<ExperimentRecord> =
        records.iter().filter(|r| r.mode == mode).map(|r| ExperimentRecord { m: 0, ..r.clone() }).collect();
    curve_summary(&pooled).into_iter().filter(|row| row.certificate == certificate).collect()
}

pub fn write_rows_csv<W: Write, T: Serialize>(rows: &[T], out: W) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// `p^(d)_±` at `n`: `(log n + (d−1) log log n ± log log log n) / n^(k−1)`.
/// Only meaningful once `log log n > 1`, i.e. `n > e^e ≈ 15.2`.
pub fn min_degree_window(n: usize, k: usize, d: usize) -> (f64, f64) {
    let l = (n as f64).ln();
    let ll = l.ln();
    let lll = ll.ln();
    let base = l + (d as f64 - 1.0) * ll;
    let scale = (n as f64).powi(k as i32 - 1);
    ((base - lll) / scale, (base + lll) / scale)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MdSummary {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub trials: usize,
    pub seed: u64,
    /// `M_d` per trial.
    pub m_d: Vec<usize>,
    pub median_m: f64,
    /// Stopping times are reported as edge densities `M_d / n^k`, the scale
    /// on which `p^(d)_±` live.
    pub median_density: f64,
    pub mean_density: f64,
    pub p_minus: f64,
    pub p_plus: f64,
    pub frac_below: f64,
    pub frac_inside: f64,
    pub frac_above: f64,
    pub inside_wilson: (f64, f64),
    pub median_inside: bool,
    /// `M_1 ≤ … ≤ M_d` held on every trace.
    pub nested: bool,
}

impl MdSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialisable")
    }
}

fn median(sorted: &[usize]) -> f64 {
    let len = sorted.len();
    if len % 2 == 1 { sorted[len / 2] as f64 } else { (sorted[len / 2 - 1] + sorted[len / 2]) as f64 / 2.0 }
}

/// Empirical distribution of the stopping time `M_d` against the window
/// `[p^(d)_−, p^(d)_+]`.
pub fn md_statistics(n: usize, k: usize, d: usize, trials: usize, seed: u64) -> Result<MdSummary, ExperimentError> {
    if trials == 0 {
        return Err(ExperimentError::Config("trials must be at least 1".into()));
    }
    if d == 0 {
        return Err(ExperimentError::Config("d must be at least 1".into()));
    }
    let traces: Vec<(usize, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let trace = md_process(n, k, d, trial_seed(seed, n, t))?;
            let times: Vec<usize> = (1..=d).map(|j| trace.stopping_time(j)).collect();
            Ok((trace.m_d, times.windows(2).all(|w| w[0] <= w[1])))
        })
        .collect::<Result<_, HypergraphError>>()?;
    let m_d: Vec<usize> = traces.iter().map(|t| t.0).collect();
    let mut sorted = m_d.clone();
    sorted.sort_unstable();
    let total = (n as f64).powi(k as i32);
    let (p_minus, p_plus) = min_degree_window(n, k, d);
    let density = |m: usize| m as f64 / total;
    let below = m_d.iter().filter(|&&m| density(m) < p_minus).count();
    let above = m_d.iter().filter(|&&m| density(m) > p_plus).count();
    let inside = trials - below - above;
    let median_m = median(&sorted);
    let median_density = median_m / total;
    Ok(MdSummary {
        n,
        k,
        d,
        trials,
        seed,
        median_m,
        median_density,
        mean_density: m_d.iter().map(|&m| density(m)).sum::<f64>() / trials as f64,
        p_minus,
        p_plus,
        frac_below: below as f64 / trials as f64,
        frac_inside: inside as f64 / trials as f64,
        frac_above: above as f64 / trials as f64,
        inside_wilson: wilson_interval(inside, trials),
        median_inside: (p_minus..=p_plus).contains(&median_density),
        nested: traces.iter().all(|t| t.1),
        m_d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(local: Option<bool>, m: u64) -> ExperimentRecord {
        ExperimentRecord {
            seed: 0,
            n: 3,
            k: 3,
            d: 1,
            mode: "gnm".into(),
            m,
            min_degree: 1,
            local,
            global1d_real: None,
            global1d_cplx: None,
            mm_i: None,
            mm_ii: None,
            mm_iii: None,
            co: None,
            verdict: None,
            ms: 1.0,
        }
    }

    #[test]
    fn forced_stopping_times() {
        let s = md_statistics(2, 3, 4, 5, 1).unwrap();
        assert!(s.m_d.iter().all(|&m| m == 8));
        let s = md_statistics(1, 3, 1, 3, 1).unwrap();
        assert_eq!(s.median_m, 1.0);
        assert!(md_statistics(6, 3, 3, 20, 9).unwrap().nested);
    }

    #[test]
    fn window_values() {
        let (lo, hi) = min_degree_window(20, 3, 1);
        assert!((lo * 8000.0 - 58.06).abs() < 0.01, "{lo}");
        assert!((hi * 8000.0 - 61.77).abs() < 0.01, "{hi}");
        let (lo2, _) = min_degree_window(20, 3, 2);
        assert!(lo2 > lo);
    }

    #[test]
    fn wilson_basics() {
        let (lo, hi) = wilson_interval(10, 10);
        assert!((hi - 1.0).abs() < 1e-12 && (lo - 10.0 / (10.0 + 1.959_963_984_540_054f64.powi(2))).abs() < 1e-12);
        let (lo, hi) = wilson_interval(0, 10);
        assert!(lo == 0.0 && hi < 0.31);
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo + hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn summary_is_order_free_and_skips_empty() {
        let recs = vec![record(Some(true), 5), record(Some(true), 5), record(None, 7), record(Some(false), 9)];
        let rows = curve_summary(&recs);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].rate, 1.0);
        let mut rev = recs.clone();
        rev.reverse();
        assert_eq!(curve_summary(&rev), rows);
    }

    #[test]
    fn csv_header_and_blank_cells() {
        let mut buf = Vec::new();
        write_records_csv(&[record(Some(true), 5)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(lines.next(), Some("0,3,3,1,gnm,5,1,true,,,,,,,,1.0"));
    }

    #[test]
    fn complete_graph_passes_everything() {
        let cfg = SweepConfig::new(
            3,
            2,
            vec![3],
            Grid::Edges(vec![27]),
            2,
            vec![Certificate::Local, Certificate::Global1d, Certificate::Mm, Certificate::Co],
            4,
        );
        for r in threshold_sweep(&cfg).unwrap() {
            assert_eq!(r.m, 27);
            for b in [r.local, r.global1d_real, r.global1d_cplx, r.mm_i, r.mm_ii, r.mm_iii, r.co] {
                assert_eq!(b, Some(true));
            }
            assert_eq!(r.verdict, Some(Verdict::GloballyRigid));
        }
    }

    #[test]
    fn sparse_graphs_are_not_locally_rigid() {
        let cfg = SweepConfig::new(3, 1, vec![4], Grid::Edges(vec![0, 5, 9]), 5, vec![Certificate::Local], 1);
        assert!(threshold_sweep(&cfg).unwrap().iter().all(|r| r.local == Some(false)));
    }

    #[test]
    fn determinism_across_widths() {
        let mut cfg = SweepConfig::new(3, 1, vec![4, 5], Grid::AtThreshold, 6, vec![Certificate::Local, Certificate::Global1d], 77);
        cfg.threads = Some(1);
        let a = threshold_sweep(&cfg).unwrap();
        cfg.threads = Some(4);
        let b = threshold_sweep(&cfg).unwrap();
        assert_eq!(a.len(), 24);
        assert!(a.iter().zip(&b).all(|(x, y)| x.same_outcome(y)));
        assert!(a.windows(2).all(|w| w[0].n <= w[1].n));
    }

    #[test]
    fn config_errors() {
        let ok = SweepConfig::new(3, 1, vec![4], Grid::AtThreshold, 1, vec![Certificate::Local], 0);
        assert!(ok.validate().is_ok());
        let bad = [
            SweepConfig { ns: vec![], ..ok.clone() },
            SweepConfig { trials: 0, ..ok.clone() },
            SweepConfig { grid: Grid::Edges(vec![]), ..ok.clone() },
            SweepConfig { grid: Grid::Edges(vec![65]), ..ok.clone() },
            SweepConfig { grid: Grid::Probabilities(vec![1.5]), ..ok.clone() },
            SweepConfig { certificates: vec![], ..ok.clone() },
            SweepConfig { d: 0, ..ok.clone() },
        ];
        for cfg in bad {
            assert!(matches!(cfg.validate(), Err(ExperimentError::Config(_))), "{cfg:?}");
        }
        let big = SweepConfig { ns: vec![30], certificates: vec![Certificate::Global1d], ..ok };
        assert!(matches!(big.validate(), Err(ExperimentError::Guard(_))));
        assert_eq!("global_1d".parse::<Certificate>().unwrap(), Certificate::Global1d);
    }
}
