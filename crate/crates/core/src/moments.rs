//! Streaming central moments about the predicted mean, and their comparison
//! with the Gaussian main term.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::additive::{PrimeWindow, StronglyAdditive};
use crate::error::{Error, Result};
use crate::poly::PolyQ;
use crate::stats::StatBundle;
use crate::sum::NeumaierSum;

/// `m-th` moment of the standard normal: `m! / (2^{m/2} (m/2)!)` for even
/// `m`, zero for odd `m`.
pub fn gaussian_moment_c(m: u32) -> f64 {
    if m % 2 == 1 {
        return 0.0;
    }
    // (m-1)!! computed as a product of odd numbers
    (1..m).step_by(2).fold(1.0, |acc, k| acc * k as f64)
}

/// Exact `(m-1)!!` for even `m`, zero for odd `m`.
pub fn gaussian_moment_c_exact(m: u32) -> u128 {
    if m % 2 == 1 {
        return 0;
    }
    (1..m as u128).step_by(2).product()
}

/// Configuration an accumulator was built for. Accumulators only merge
/// with matching configurations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentConfig {
    pub m_max: u32,
    pub center: f64,
    pub window_z: f64,
    pub vars: usize,
}

/// Power sums `Σ_a (Q(g^P(a)) - A_Q)^m` for `m = 0..=m_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentAccumulator {
    config: MomentConfig,
    count: u64,
    sums: Vec<NeumaierSum>,
    point: Vec<f64>,
}

impl MomentAccumulator {
    /// `m_max` must be even and at least 2. `center` is `A_Q` over the
    /// window.
    pub fn new(m_max: u32, center: f64, window: &PrimeWindow, vars: usize) -> Result<Self> {
        Self::with_config(MomentConfig { m_max, center, window_z: window.z(), vars })
    }

    pub fn with_config(config: MomentConfig) -> Result<Self> {
        if config.m_max < 2 || config.m_max % 2 == 1 {
            return Err(Error::Domain(format!("m_max must be even and >= 2, got {}", config.m_max)));
        }
        Ok(MomentAccumulator {
            config,
            count: 0,
            sums: vec![NeumaierSum::new(); config.m_max as usize + 1],
            point: vec![0.0; config.vars],
        })
    }

    pub fn config(&self) -> MomentConfig {
        self.config
    }

    pub fn m_max(&self) -> u32 {
        self.config.m_max
    }

    /// `#A` seen so far.
    pub fn count(&self) -> u64 {
        self.count
    }

    /// Add one already-evaluated `Q(g^P(a))`.
    #[inline]
    pub fn push(&mut self, q_value: f64) {
        let c = q_value - self.config.center;
        let mut pw = 1.0;
        self.count += 1;
        for s in &mut self.sums {
            s.add(pw);
            pw *= c;
        }
    }

    /// Evaluate `Q(g_1^P(a), ..., g_l^P(a))` from the distinct primes of
    /// `a` and add it.
    #[inline]
    pub fn accumulate(
        &mut self,
        factors: &[u64],
        q: &PolyQ,
        gs: &[StronglyAdditive],
        window: &PrimeWindow,
    ) {
        for (slot, g) in self.point.iter_mut().zip(gs) {
            *slot = g.eval_truncated(factors, window);
        }
        let v = q.eval_unchecked(&self.point);
        self.push(v);
    }

    pub fn merge(&mut self, other: &MomentAccumulator) -> Result<()> {
        if self.config != other.config {
            return Err(Error::ConfigMismatch(format!("{:?} vs {:?}", self.config, other.config)));
        }
        self.count += other.count;
        for (a, b) in self.sums.iter_mut().zip(&other.sums) {
            a.merge(b);
        }
        Ok(())
    }

    /// `M_m`.
    pub fn moment(&self, m: u32) -> Option<f64> {
        self.sums.get(m as usize).map(NeumaierSum::value)
    }

    pub fn moments(&self) -> Vec<f64> {
        self.sums.iter().map(NeumaierSum::value).collect()
    }

    pub fn report(&self, bundle: &StatBundle) -> Result<MomentReport> {
        MomentReport::new(self, bundle.b_q)
    }
}

/// One line of a [`MomentReport`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRow {
    pub m: u32,
    pub moment: f64,
    pub c_m: f64,
    /// `M_m / (#A B_Q^m)`.
    pub ratio: f64,
    pub predicted: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub count: u64,
    pub b_q: f64,
    pub rows: Vec<MomentRow>,
}

impl MomentReport {
    pub fn new(acc: &MomentAccumulator, b_q: f64) -> Result<MomentReport> {
        if !(b_q > 0.0) {
            return Err(Error::ZeroVariance);
        }
        if acc.count == 0 {
            return Err(Error::EmptyRange("no elements accumulated".into()));
        }
        let n = acc.count as f64;
        let rows = (0..=acc.m_max())
            .map(|m| {
                let moment = acc.moment(m).unwrap_or(0.0);
                let c_m = gaussian_moment_c(m);
                MomentRow { m, moment, c_m, ratio: moment / (n * libm::pow(b_q, m as f64)), predicted: c_m }
            })
            .collect();
        Ok(MomentReport { count: acc.count, b_q, rows })
    }

    pub fn row(&self, m: u32) -> Option<&MomentRow> {
        self.rows.iter().find(|r| r.m == m)
    }
}
