//! Means, covariances and the derived normal-law parameters over a prime
//! window, plus the choice of truncation point.

use alloc::vec;
use alloc::vec::Vec;

use crate::additive::{PrimeWindow, StronglyAdditive};
use crate::error::{Error, Result};
use crate::input::{empirical_remainder, DensityModel, InputSet};
use crate::poly::PolyQ;
use crate::sieve::PrimeTable;
use crate::sum::NeumaierSum;

/// `μ^P(g) = Σ_{p in P} g(p) h(p)/p`.
pub fn mean_mu(g: &StronglyAdditive, window: &PrimeWindow, model: &DensityModel) -> f64 {
    let mut acc = NeumaierSum::new();
    for &p in window.primes() {
        acc.add(g.value(p) * model.density(p));
    }
    acc.value()
}

/// `κ^P(g1, g2) = Σ_{p in P} g1(p) g2(p) (h(p)/p)(1 - h(p)/p)`.
pub fn covariance_kappa(
    g1: &StronglyAdditive,
    g2: &StronglyAdditive,
    window: &PrimeWindow,
    model: &DensityModel,
) -> f64 {
    let mut acc = NeumaierSum::new();
    for &p in window.primes() {
        let d = model.density(p);
        acc.add(g1.value(p) * g2.value(p) * d * (1.0 - d));
    }
    acc.value()
}

/// `(𝔐, 𝔎)`: the largest mean and the largest variance.
pub fn frak_bounds(gs: &[StronglyAdditive], window: &PrimeWindow, model: &DensityModel) -> (f64, f64) {
    gs.iter().fold((0.0f64, 0.0f64), |(m, k), g| {
        (m.max(mean_mu(g, window, model)), k.max(covariance_kappa(g, g, window, model)))
    })
}

/// `A_Q = Q(μ_1, ..., μ_l)`.
pub fn a_q(q: &PolyQ, means: &[f64]) -> Result<f64> {
    q.eval(means)
}

/// `B_Q = sqrt(Σ_ij ∂_iQ(μ) ∂_jQ(μ) κ_ij)`.
pub fn b_q(q: &PolyQ, means: &[f64], kappa: &[Vec<f64>]) -> Result<f64> {
    Ok(libm::sqrt(b_q_squared(q, means, kappa)?))
}

/// The radicand of [`b_q`], clamped at zero when it lies within `-1e-9`.
pub fn b_q_squared(q: &PolyQ, means: &[f64], kappa: &[Vec<f64>]) -> Result<f64> {
    let l = q.vars();
    if kappa.len() != l {
        return Err(Error::LengthMismatch { expected: l, got: kappa.len() });
    }
    if let Some(row) = kappa.iter().find(|r| r.len() != l) {
        return Err(Error::LengthMismatch { expected: l, got: row.len() });
    }
    let grad = q.gradient(means)?;
    let mut acc = NeumaierSum::new();
    for i in 0..l {
        for j in 0..l {
            acc.add(grad[i] * grad[j] * kappa[i][j]);
        }
    }
    let v = acc.value();
    if v < -1e-9 {
        return Err(Error::NegativeRadicand(v));
    }
    Ok(v.max(0.0))
}

/// `Σ g(p) h(p)/p` after each table prime.
struct Prefix {
    means: Vec<f64>,
}

fn prefix_means(g: &StronglyAdditive, primes: &[u64], model: &DensityModel) -> Prefix {
    let mut acc = NeumaierSum::new();
    let means = primes
        .iter()
        .map(|&p| {
            acc.add(g.value(p) * model.density(p));
            acc.value()
        })
        .collect();
    Prefix { means }
}

/// Smallest `z` with `z^{max(1, 𝔐(z)^{1/3})} >= x`, where `𝔐(z)` is the
/// largest mean over primes up to `z`. Bisection to relative precision
/// `1e-6`, returning the upper end of the final bracket.
pub fn choose_z(
    x: f64,
    gs: &[StronglyAdditive],
    model: &DensityModel,
    table: &PrimeTable,
) -> Result<f64> {
    if !(x >= 16.0) {
        return Err(Error::Domain(alloc::format!("choose_z needs x >= 16, got {x}")));
    }
    let xi = libm::floor(x) as u64;
    if xi > table.limit() {
        return Err(Error::Capability { limit: table.limit(), needed: xi });
    }
    let primes = table.up_to(xi);
    let prefixes: Vec<Prefix> = gs.iter().map(|g| prefix_means(g, primes, model)).collect();
    let frak_m_at = |z: f64| -> f64 {
        let n = primes.partition_point(|&p| (p as f64) <= z);
        if n == 0 {
            return 0.0;
        }
        prefixes.iter().map(|pr| pr.means[n - 1]).fold(0.0, f64::max)
    };
    let reaches = |z: f64| -> bool {
        let e = libm::cbrt(frak_m_at(z)).max(1.0);
        e * libm::log(z) >= libm::log(x)
    };
    let (mut lo, mut hi) = (1.0f64, x);
    while hi - lo > 1e-6 * hi {
        let mid = 0.5 * (lo + hi);
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `z^{max(1, 𝔐(z)^{1/3})}` for reporting the residual of [`choose_z`].
pub fn truncation_power(z: f64, frak_m: f64) -> f64 {
    libm::pow(z, libm::cbrt(frak_m).max(1.0))
}

/// Every statistic of a family `g_1..g_l` and polynomial `Q` over one window.
#[derive(Debug, Clone, PartialEq)]
pub struct StatBundle {
    pub window: PrimeWindow,
    pub means: Vec<f64>,
    pub kappa: Vec<Vec<f64>>,
    pub frak_m: f64,
    pub frak_k: f64,
    pub a_q: f64,
    pub b_q: f64,
}

struct Running {
    means: Vec<NeumaierSum>,
    kappa: Vec<Vec<NeumaierSum>>,
}

impl Running {
    fn new(l: usize) -> Self {
        Running { means: vec![NeumaierSum::new(); l], kappa: vec![vec![NeumaierSum::new(); l]; l] }
    }

    fn add_prime(&mut self, gs: &[StronglyAdditive], p: u64, model: &DensityModel, values: &mut [f64]) {
        let d = model.density(p);
        let w = d * (1.0 - d);
        for (v, g) in values.iter_mut().zip(gs) {
            *v = g.value(p);
        }
        for i in 0..gs.len() {
            self.means[i].add(values[i] * d);
            for j in i..gs.len() {
                self.kappa[i][j].add(values[i] * values[j] * w);
            }
        }
    }

    fn snapshot(&self, q: &PolyQ, window: PrimeWindow) -> Result<StatBundle> {
        let l = self.means.len();
        let means: Vec<f64> = self.means.iter().map(NeumaierSum::value).collect();
        let mut kappa = vec![vec![0.0; l]; l];
        for i in 0..l {
            for j in i..l {
                let v = self.kappa[i][j].value();
                kappa[i][j] = v;
                kappa[j][i] = v;
            }
        }
        let frak_m = means.iter().copied().fold(0.0, f64::max);
        let frak_k = (0..l).map(|i| kappa[i][i]).fold(0.0, f64::max);
        let a_q = a_q(q, &means)?;
        let b_q = b_q(q, &means, &kappa)?;
        Ok(StatBundle { window, means, kappa, frak_m, frak_k, a_q, b_q })
    }
}

fn check_family(q: &PolyQ, gs: &[StronglyAdditive]) -> Result<()> {
    if gs.is_empty() {
        return Err(Error::Domain("at least one function is required".into()));
    }
    if gs.len() != q.vars() {
        return Err(Error::LengthMismatch { expected: q.vars(), got: gs.len() });
    }
    Ok(())
}

impl StatBundle {
    /// Statistics over an arbitrary window.
    pub fn build(
        q: &PolyQ,
        gs: &[StronglyAdditive],
        window: &PrimeWindow,
        model: &DensityModel,
    ) -> Result<StatBundle> {
        check_family(q, gs)?;
        for g in gs {
            g.validate_on(window)?;
        }
        let mut run = Running::new(gs.len());
        let mut values = vec![0.0; gs.len()];
        for &p in window.primes() {
            run.add_prime(gs, p, model, &mut values);
        }
        run.snapshot(q, window.clone())
    }

    /// Statistics over `P(z)` and `P(x)` from a single pass over the primes
    /// up to `max(z, x)`.
    pub fn build_pair(
        q: &PolyQ,
        gs: &[StronglyAdditive],
        table: &PrimeTable,
        z: f64,
        x: f64,
        model: &DensityModel,
    ) -> Result<(StatBundle, StatBundle)> {
        check_family(q, gs)?;
        let small = PrimeWindow::new(table, z.min(x))?;
        let large = PrimeWindow::new(table, z.max(x))?;
        for g in gs {
            g.validate_on(&large)?;
        }
        let mut run = Running::new(gs.len());
        let mut values = vec![0.0; gs.len()];
        for &p in small.primes() {
            run.add_prime(gs, p, model, &mut values);
        }
        let first = run.snapshot(q, small.clone())?;
        for &p in &large.primes()[small.len()..] {
            run.add_prime(gs, p, model, &mut values);
        }
        let second = run.snapshot(q, large)?;
        if z <= x {
            Ok((first, second))
        } else {
            Ok((second, first))
        }
    }

    pub fn sigma(&self, i: usize) -> f64 {
        libm::sqrt(self.kappa[i][i])
    }
}

/// Least-squares slope of `μ^{P(t)}(1)` against `log log t` at the given
/// sample points. Reported as a diagnostic only.
pub fn eta_slope(table: &PrimeTable, model: &DensityModel, points: &[f64]) -> Result<f64> {
    let one = StronglyAdditive::constant("one", 1.0)?;
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for &t in points {
        if t <= libm::exp(1.0) {
            return Err(Error::Domain(alloc::format!("eta sample point {t} must exceed e")));
        }
        xs.push(libm::log(libm::log(t)));
        ys.push(mean_mu(&one, &PrimeWindow::new(table, t)?, model));
    }
    if xs.len() < 2 {
        return Err(Error::Domain("eta needs at least two sample points".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("eta sample points must differ".into()));
    }
    Ok(sxy / sxx)
}

/// `μ^P(1)^k Σ_{d in D_k(P)} |E_d| / (X 𝔎^{k/2 - 1})`: the remainder sum
/// that the moment bounds need to be `O(1)`. Only small windows are
/// feasible, since `D_k(P)` is enumerated.
pub fn remainder_hypothesis_ratio(
    set: &InputSet,
    table: &PrimeTable,
    gs: &[StronglyAdditive],
    window: &PrimeWindow,
    k: usize,
) -> Result<f64> {
    let model = set.model();
    let one = StronglyAdditive::constant("one", 1.0)?;
    let mu_one = mean_mu(&one, window, &model);
    let (_, frak_k) = frak_bounds(gs, window, &model);
    if !(frak_k > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let mut sum = NeumaierSum::new();
    for d in crate::oracle::enumerate_d_k(k, window)? {
        sum.add(libm::fabs(empirical_remainder(set, table, &model, d)?.value.to_f64()));
    }
    let scale = model.scale() * libm::pow(frak_k, k as f64 / 2.0 - 1.0);
    Ok(libm::pow(mu_one, k as f64) * sum.value() / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::additive::{builtin_omega, omega_residue_classes};
    use crate::sieve::primes_up_to;

    fn unit() -> DensityModel {
        DensityModel::Unit { x: 1000 }
    }

    #[test]
    fn remainder_ratio_small_window() {
        let table = primes_up_to(1000).unwrap();
        let set = InputSet::AllIntegers { x: 1000 };
        let w = PrimeWindow::from_primes(&[2, 3, 7]);
        let gs = [builtin_omega()];
        assert_eq!(remainder_hypothesis_ratio(&set, &table, &gs, &w, 0).unwrap(), 0.0);
        // |E_d| = frac(1000/d) for d in {1, 2, 3, 7, 6, 14, 21}
        let e_sum = 0.0 + 1.0 / 3.0 + 6.0 / 7.0 + 4.0 / 6.0 + 6.0 / 14.0 + 13.0 / 21.0;
        let mu: f64 = 1.0 / 2.0 + 1.0 / 3.0 + 1.0 / 7.0;
        let want = mu * mu * e_sum / 1000.0;
        let got = remainder_hypothesis_ratio(&set, &table, &gs, &w, 2).unwrap();
        assert!((got - want).abs() < 1e-14, "{got} vs {want}");
    }

    #[test]
    fn small_means_and_covariances() {
        let w = PrimeWindow::from_primes(&[2, 3, 5, 7]);
        let mu = mean_mu(&builtin_omega(), &w, &unit());
        assert!((mu - 247.0 / 210.0).abs() < 1e-15);
        assert_eq!(mean_mu(&builtin_omega(), &PrimeWindow::from_primes(&[]), &unit()), 0.0);
        let w = PrimeWindow::from_primes(&[2, 3]);
        let k = covariance_kappa(&builtin_omega(), &builtin_omega(), &w, &unit());
        assert!((k - 17.0 / 36.0).abs() < 1e-15);
        let zero = StronglyAdditive::constant("zero", 0.0).unwrap();
        assert_eq!(covariance_kappa(&builtin_omega(), &zero, &w, &unit()), 0.0);
    }

    #[test]
    fn closed_forms() {
        let t = primes_up_to(1000).unwrap();
        let w = PrimeWindow::new(&t, 1000.0).unwrap();
        let g = builtin_omega();
        let mu = mean_mu(&g, &w, &unit());
        let var = covariance_kappa(&g, &g, &w, &unit());
        for delta in 1..=4u32 {
            let q = PolyQ::parse(&alloc::format!("T^{delta}")).unwrap();
            let b = StatBundle::build(&q, core::slice::from_ref(&g), &w, &unit()).unwrap();
            let want_a = libm::pow(mu, delta as f64);
            let want_b = delta as f64 * libm::pow(mu, delta as f64 - 1.0) * libm::sqrt(var);
            assert!((b.a_q - want_a).abs() <= 1e-12 * want_a);
            assert!((b.b_q - want_b).abs() <= 1e-12 * want_b);
        }
        let g1 = omega_residue_classes(4, &[1]).unwrap();
        let g2 = omega_residue_classes(3, &[1]).unwrap();
        let q = PolyQ::parse("T1*T2").unwrap();
        let b = StatBundle::build(&q, &[g1, g2], &w, &unit()).unwrap();
        let (m1, m2) = (b.means[0], b.means[1]);
        let want = m1 * m1 * b.kappa[1][1] + 2.0 * m1 * m2 * b.kappa[0][1] + m2 * m2 * b.kappa[0][0];
        assert!((b.b_q * b.b_q - want).abs() <= 1e-12 * want);
        assert!((b.a_q - m1 * m2).abs() <= 1e-15);
    }

    #[test]
    fn negative_radicand_rejected() {
        let q = PolyQ::parse("T1 + T2").unwrap();
        let kappa = vec![vec![1.0, -3.0], vec![-3.0, 1.0]];
        assert!(matches!(b_q(&q, &[1.0, 1.0], &kappa), Err(Error::NegativeRadicand(_))));
    }

    #[test]
    fn pair_matches_separate_builds() {
        let t = primes_up_to(10_000).unwrap();
        let q = PolyQ::parse("T^2").unwrap();
        let gs = [builtin_omega()];
        let (bz, bx) = StatBundle::build_pair(&q, &gs, &t, 300.0, 10_000.0, &unit()).unwrap();
        let sz = StatBundle::build(&q, &gs, &PrimeWindow::new(&t, 300.0).unwrap(), &unit()).unwrap();
        let sx = StatBundle::build(&q, &gs, &PrimeWindow::new(&t, 10_000.0).unwrap(), &unit()).unwrap();
        assert_eq!(bz, sz);
        assert!((bx.a_q - sx.a_q).abs() < 1e-12 * sx.a_q);
    }

    #[test]
    fn choose_z_cases() {
        let t = primes_up_to(1_000_000).unwrap();
        // 𝔐 stays below 1, so the exponent is 1 and z = x
        let half = StronglyAdditive::constant("tiny", 1e-3).unwrap();
        let z = choose_z(1000.0, &[half], &unit(), &t).unwrap();
        assert!((z - 1000.0).abs() <= 1e-6 * 1000.0 && z <= 1000.0);

        let x = 1e6;
        let z = choose_z(x, &[builtin_omega()], &unit(), &t).unwrap();
        let w = PrimeWindow::new(&t, z).unwrap();
        let m = mean_mu(&builtin_omega(), &w, &unit());
        let reached = truncation_power(z, m);
        assert!(reached >= x);
        assert!(reached <= libm::pow(x, 1.0 + 1e-6));
    }

    #[test]
    fn eta_is_near_one_for_unit_density() {
        let t = primes_up_to(1_000_000).unwrap();
        let eta = eta_slope(&t, &unit(), &[1e3, 1e4, 1e5, 1e6]).unwrap();
        assert!((eta - 1.0).abs() < 0.1, "{eta}");
    }
}
