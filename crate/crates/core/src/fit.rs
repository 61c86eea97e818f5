//! Comparison of normalized values with the standard normal distribution.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::additive::StronglyAdditive;
use crate::error::{Error, Result};
use crate::input::InputSet;
use crate::poly::PolyQ;
use crate::sieve::PrimeTable;
use crate::stats::StatBundle;
use crate::sum::NeumaierSum;

/// Sample sizes up to this are kept exactly; larger ones fall back to a
/// fine-grained binned sketch.
pub const EXACT_LIMIT: usize = 10_000_000;

pub const HIST_BINS: usize = 101;
pub const HIST_LO: f64 = -5.0;
pub const HIST_HI: f64 = 5.0;

const SKETCH_BINS: usize = 1 << 16;
const SKETCH_LO: f64 = -12.0;
const SKETCH_HI: f64 = 12.0;

/// Standard normal CDF.
pub fn phi(u: f64) -> f64 {
    0.5 * libm::erfc(-u / core::f64::consts::SQRT_2)
}

/// Sorted sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    values: Vec<f64>,
}

impl Ecdf {
    pub fn new(mut values: Vec<f64>) -> Result<Ecdf> {
        if values.is_empty() {
            return Err(Error::EmptyRange("empty sample".into()));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::Domain("sample contains NaN".into()));
        }
        values.sort_unstable_by(f64::total_cmp);
        Ok(Ecdf { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Fraction of values `<= u`.
    pub fn eval(&self, u: f64) -> f64 {
        self.values.partition_point(|&v| v <= u) as f64 / self.values.len() as f64
    }

    /// `max_i max(|i/n - Φ(v_i)|, |(i-1)/n - Φ(v_i)|)`.
    pub fn ks_distance(&self) -> f64 {
        ks_distance(self)
    }
}

pub fn ks_distance(ecdf: &Ecdf) -> f64 {
    let n = ecdf.values.len() as f64;
    ecdf.values.iter().enumerate().fold(0.0, |d, (i, &v)| {
        let f = phi(v);
        let above = ((i + 1) as f64 / n - f).abs();
        let below = (i as f64 / n - f).abs();
        d.max(above).max(below)
    })
}

/// Equal-width bins on `[lo, hi]`; out-of-range values land in the end bins.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Histogram {
        Histogram { lo, hi, counts: vec![0; bins] }
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    #[inline]
    pub fn index(&self, v: f64) -> usize {
        let b = self.counts.len();
        let t = libm::floor((v - self.lo) / self.width());
        if t.is_nan() || t < 0.0 {
            0
        } else if t >= b as f64 {
            b - 1
        } else {
            t as usize
        }
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let i = self.index(v);
        self.counts[i] += 1;
    }

    pub fn merge(&mut self, other: &Histogram) -> Result<()> {
        if self.counts.len() != other.counts.len() || self.lo != other.lo || self.hi != other.hi {
            return Err(Error::ConfigMismatch("histogram layouts differ".into()));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `(left edge, right edge, count)` per bin.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, u64)> + '_ {
        let w = self.width();
        self.counts
            .iter()
            .enumerate()
            .map(move |(i, &c)| (self.lo + i as f64 * w, self.lo + (i + 1) as f64 * w, c))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Store {
    Exact(Vec<f64>),
    Sketch { bins: Histogram, below: u64, above: u64 },
}

/// Streaming collector of normalized values.
#[derive(Debug, Clone, PartialEq)]
pub struct FitCollector {
    exact_limit: usize,
    count: u64,
    powers: [NeumaierSum; 4],
    histogram: Histogram,
    store: Store,
}

impl Default for FitCollector {
    fn default() -> Self {
        FitCollector::new()
    }
}

impl FitCollector {
    pub fn new() -> FitCollector {
        FitCollector::with_exact_limit(EXACT_LIMIT)
    }

    pub fn with_exact_limit(exact_limit: usize) -> FitCollector {
        FitCollector {
            exact_limit,
            count: 0,
            powers: [NeumaierSum::new(); 4],
            histogram: Histogram::new(HIST_LO, HIST_HI, HIST_BINS),
            store: Store::Exact(Vec::new()),
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn is_approximate(&self) -> bool {
        matches!(self.store, Store::Sketch { .. })
    }

    pub fn push(&mut self, v: f64) {
        self.count += 1;
        let mut pw = v;
        for s in &mut self.powers {
            s.add(pw);
            pw *= v;
        }
        self.histogram.add(v);
        match &mut self.store {
            Store::Exact(values) => {
                values.push(v);
                if values.len() > self.exact_limit {
                    self.to_sketch();
                }
            }
            Store::Sketch { bins, below, above } => sketch_add(bins, below, above, v),
        }
    }

    fn to_sketch(&mut self) {
        if let Store::Exact(values) = &self.store {
            let mut bins = Histogram::new(SKETCH_LO, SKETCH_HI, SKETCH_BINS);
            let (mut below, mut above) = (0, 0);
            for &v in values {
                sketch_add(&mut bins, &mut below, &mut above, v);
            }
            self.store = Store::Sketch { bins, below, above };
        }
    }

    pub fn merge(&mut self, mut other: FitCollector) -> Result<()> {
        self.histogram.merge(&other.histogram)?;
        self.count += other.count;
        for (a, b) in self.powers.iter_mut().zip(&other.powers) {
            a.merge(b);
        }
        let fits = match (&self.store, &other.store) {
            (Store::Exact(a), Store::Exact(b)) => a.len() + b.len() <= self.exact_limit,
            _ => false,
        };
        if fits {
            if let (Store::Exact(a), Store::Exact(b)) = (&mut self.store, &mut other.store) {
                a.append(b);
            }
            return Ok(());
        }
        self.to_sketch();
        other.to_sketch();
        if let (
            Store::Sketch { bins, below, above },
            Store::Sketch { bins: ob, below: obl, above: oab },
        ) = (&mut self.store, &other.store)
        {
            bins.merge(ob)?;
            *below += obl;
            *above += oab;
        }
        Ok(())
    }

    pub fn finish(self) -> Result<FitReport> {
        if self.count == 0 {
            return Err(Error::EmptyRange("no values collected".into()));
        }
        let n = self.count as f64;
        let moments = [
            self.powers[0].value() / n,
            self.powers[1].value() / n,
            self.powers[2].value() / n,
            self.powers[3].value() / n,
        ];
        let (ks, approximate) = match self.store {
            Store::Exact(values) => (Ecdf::new(values)?.ks_distance(), false),
            Store::Sketch { bins, below, above } => (sketch_ks(&bins, below, above), true),
        };
        Ok(FitReport { n: self.count, ks, approximate, histogram: self.histogram, moments })
    }
}

fn sketch_add(bins: &mut Histogram, below: &mut u64, above: &mut u64, v: f64) {
    if v < bins.lo {
        *below += 1;
    } else if v >= bins.hi {
        *above += 1;
    } else {
        bins.add(v);
    }
}

// Values inside a bin are unknown; compare the CDF jump at both edges.
fn sketch_ks(bins: &Histogram, below: u64, above: u64) -> f64 {
    let n = (bins.total() + below + above) as f64;
    let mut seen = below;
    let mut d = (seen as f64 / n - phi(bins.lo)).abs();
    for (lo, hi, c) in bins.rows() {
        if c == 0 {
            continue;
        }
        d = d.max((seen as f64 / n - phi(lo)).abs());
        seen += c;
        d = d.max((seen as f64 / n - phi(hi)).abs());
    }
    d.max((seen as f64 / n - phi(bins.hi)).abs())
}

/// KS distance, histogram and raw sample moments `E[v^k]`, `k = 1..4`.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub n: u64,
    pub ks: f64,
    pub approximate: bool,
    pub histogram: Histogram,
    pub moments: [f64; 4],
}

impl FitReport {
    pub fn mean(&self) -> f64 {
        self.moments[0]
    }

    pub fn variance(&self) -> f64 {
        self.moments[1] - self.moments[0] * self.moments[0]
    }
}

/// `(Q(g_1(a), ..., g_l(a)) - A_Q) / B_Q` with the untruncated functions
/// and the statistics of `bundle`.
#[derive(Debug, Clone)]
pub struct Normalizer<'a> {
    q: &'a PolyQ,
    gs: &'a [StronglyAdditive],
    center: f64,
    scale: f64,
    point: Vec<f64>,
}

impl<'a> Normalizer<'a> {
    pub fn new(q: &'a PolyQ, gs: &'a [StronglyAdditive], bundle: &StatBundle) -> Result<Self> {
        if !(bundle.b_q > 0.0) {
            return Err(Error::ZeroVariance);
        }
        if gs.len() != q.vars() {
            return Err(Error::LengthMismatch { expected: q.vars(), got: gs.len() });
        }
        Ok(Normalizer { q, gs, center: bundle.a_q, scale: bundle.b_q, point: vec![0.0; gs.len()] })
    }

    #[inline]
    pub fn value(&mut self, factors: &[u64]) -> f64 {
        for (slot, g) in self.point.iter_mut().zip(self.gs) {
            *slot = g.eval_full(factors);
        }
        (self.q.eval_unchecked(&self.point) - self.center) / self.scale
    }
}

/// Stream `set` once and fit the normalized values.
pub fn normalize_and_fit(
    set: &InputSet,
    table: &PrimeTable,
    q: &PolyQ,
    gs: &[StronglyAdditive],
    bundle: &StatBundle,
) -> Result<FitReport> {
    let mut norm = Normalizer::new(q, gs, bundle)?;
    let mut collector = FitCollector::new();
    for seg in crate::input::enumerate(set, table)? {
        for (_, factors) in seg.records() {
            collector.push(norm.value(factors));
        }
    }
    if collector.count() == 0 {
        return Err(Error::EmptyRange(format!("{set:?} has no elements")));
    }
    collector.finish()
}
