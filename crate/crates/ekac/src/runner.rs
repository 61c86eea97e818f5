//! Resolving a configuration into statistics and streaming the input set
//! across worker threads.

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use ekac_core::fit::{FitCollector, Normalizer};
use ekac_core::moments::MomentConfig;
use ekac_core::sieve::DEFAULT_SEGMENT_LEN;
use ekac_core::stats::{choose_z, eta_slope, truncation_power};
use ekac_core::{
    primes_up_to, DensityModel, FitReport, InputSet, MomentAccumulator, PolyQ, PrimeTable, StatBundle,
    StronglyAdditive,
};

use crate::config::{ExperimentConfig, WindowPolicy};
use crate::error::{CliError, CliResult};

/// Everything derived from a configuration before the input is streamed.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub config: ExperimentConfig,
    pub q: PolyQ,
    pub gs: Vec<StronglyAdditive>,
    pub set: InputSet,
    pub model: DensityModel,
    pub table: PrimeTable,
    pub z: f64,
    /// Statistics over `P(z)`; used for the moments.
    pub truncated: StatBundle,
    /// Statistics over `P(x)`; used for the normalization.
    pub full: StatBundle,
}

impl Prepared {
    pub fn x(&self) -> u64 {
        self.set.x()
    }

    /// `z^{max(1, 𝔐(z)^{1/3})}`; at least `x` when `z` came from the auto
    /// policy.
    pub fn truncation_reach(&self) -> f64 {
        truncation_power(self.z, self.truncated.frak_m)
    }

    /// Slope of the mean of the constant function 1 against `log log t`.
    pub fn eta(&self) -> Option<f64> {
        let x = self.x() as f64;
        let points: Vec<f64> =
            [0.25, 0.5, 0.75, 1.0].iter().map(|e| x.powf(*e)).filter(|&t| t > std::f64::consts::E).collect();
        eta_slope(&self.table, &self.model, &points).ok()
    }
}

pub fn prepare(config: &ExperimentConfig, base_dir: &Path) -> CliResult<Prepared> {
    config.validate()?;
    let q = config.polynomial()?;
    let gs = config.build_functions(base_dir)?;
    let set = config.input.to_set();
    let model = set.model();
    let x = set.x();
    let mut limit = x;
    if let WindowPolicy::Explicit { z } = config.window {
        limit = limit.max(z.floor() as u64);
    }
    let table = primes_up_to(limit)?;
    let z = match config.window {
        WindowPolicy::Auto => choose_z(x as f64, &gs, &model, &table)?,
        WindowPolicy::Full => x as f64,
        WindowPolicy::Explicit { z } => z,
    };
    let (truncated, full) = StatBundle::build_pair(&q, &gs, &table, z, x as f64, &model)?;
    Ok(Prepared { config: config.clone(), q, gs, set, model, table, z, truncated, full })
}

/// Worker count from the flag, then `EKAC_WORKERS`, then the available
/// parallelism.
pub fn resolve_workers(flag: Option<usize>) -> usize {
    flag.or_else(|| std::env::var("EKAC_WORKERS").ok().and_then(|v| v.trim().parse().ok()))
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Split `[lo, hi]` into `parts` contiguous ranges of near-equal length.
pub fn partition(lo: u64, hi: u64, parts: usize) -> Vec<(u64, u64)> {
    let parts = parts.max(1) as u64;
    let len = hi - lo + 1;
    let parts = parts.min(len);
    (0..parts)
        .map(|i| (lo + len * i / parts, lo + len * (i + 1) / parts - 1))
        .collect()
}

/// Results of one streaming pass.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub moments: MomentAccumulator,
    pub fit: Option<FitReport>,
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub workers: usize,
    pub partitions: usize,
    pub with_fit: bool,
    pub segment_len: usize,
}

impl RunOptions {
    pub fn new(workers: usize) -> RunOptions {
        RunOptions { workers, partitions: workers, with_fit: true, segment_len: DEFAULT_SEGMENT_LEN }
    }
}

struct Partial {
    moments: MomentAccumulator,
    fit: Option<FitCollector>,
}

fn run_partition(p: &Prepared, lo: u64, hi: u64, opts: &RunOptions) -> CliResult<Partial> {
    let window = &p.truncated.window;
    let mut moments = MomentAccumulator::new(p.config.m_max, p.truncated.a_q, window, p.q.vars())?;
    let mut fit = opts.with_fit.then(FitCollector::new);
    let mut norm = match fit {
        Some(_) => Some(Normalizer::new(&p.q, &p.gs, &p.full)?),
        None => None,
    };
    for seg in p.set.stream_range(&p.table, lo, hi, opts.segment_len)? {
        for (_, factors) in seg.records() {
            moments.accumulate(factors, &p.q, &p.gs, window);
            if let (Some(f), Some(n)) = (fit.as_mut(), norm.as_mut()) {
                f.push(n.value(factors));
            }
        }
    }
    Ok(Partial { moments, fit })
}

/// Stream the whole input set once, in `opts.partitions` pieces spread
/// over `opts.workers` threads. Pieces are merged in range order.
pub fn run(p: &Prepared, opts: &RunOptions) -> CliResult<RunOutput> {
    if p.truncated.b_q <= 0.0 || (opts.with_fit && p.full.b_q <= 0.0) {
        return Err(CliError::Runtime(ekac_core::Error::ZeroVariance.to_string()));
    }
    let (lo, hi) = p
        .set
        .element_bounds()
        .ok_or_else(|| CliError::Runtime(format!("{:?} has no elements", p.set)))?;
    let ranges = partition(lo, hi, opts.partitions);
    let slots: Vec<Mutex<Option<CliResult<Partial>>>> = ranges.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = opts.workers.clamp(1, ranges.len());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(a, b)) = ranges.get(i) else { break };
                let r = run_partition(p, a, b, opts);
                *slots[i].lock().unwrap() = Some(r);
            });
        }
    });
    let mut parts = slots.into_iter().map(|s| s.into_inner().unwrap().expect("every partition ran"));
    let first = parts.next().expect("at least one partition")?;
    let (mut moments, mut fit) = (first.moments, first.fit);
    for part in parts {
        let part = part?;
        moments.merge(&part.moments)?;
        if let (Some(f), Some(g)) = (fit.as_mut(), part.fit) {
            f.merge(g)?;
        }
    }
    let fit = fit.map(FitCollector::finish).transpose()?;
    Ok(RunOutput { moments, fit })
}

/// A bare accumulator configuration matching `p`, for callers that feed
/// values themselves.
pub fn moment_config(p: &Prepared) -> MomentConfig {
    MomentConfig {
        m_max: p.config.m_max,
        center: p.truncated.a_q,
        window_z: p.truncated.window.z(),
        vars: p.q.vars(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::preset;

    #[test]
    fn partitions_cover_range() {
        for parts in [1, 2, 7, 13] {
            let r = partition(5, 104, parts);
            assert_eq!(r.first().unwrap().0, 5);
            assert_eq!(r.last().unwrap().1, 104);
            for w in r.windows(2) {
                assert_eq!(w[0].1 + 1, w[1].0);
            }
        }
        assert_eq!(partition(1, 3, 10).len(), 3);
    }

    #[test]
    fn partitioned_run_matches_single() {
        let mut cfg = preset("cor1-omega-square").unwrap();
        cfg.input = crate::config::InputSpec::AllIntegers { x: 20_000 };
        let p = prepare(&cfg, Path::new(".")).unwrap();
        let single = run(&p, &RunOptions::new(1)).unwrap();
        let split = run(&p, &RunOptions { partitions: 5, workers: 3, ..RunOptions::new(1) }).unwrap();
        for (a, b) in single.moments.moments().iter().zip(split.moments.moments()) {
            assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
        }
        assert_eq!(single.fit.unwrap().ks, split.fit.unwrap().ks);
    }

    #[test]
    fn workers_fallback() {
        assert_eq!(resolve_workers(Some(3)), 3);
        assert!(resolve_workers(None) >= 1);
    }
}
