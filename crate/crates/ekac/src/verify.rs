//! Seeded suite of exact identity checks.

use std::fmt::Write as _;

use ekac_core::additive::PrimeWindow;
use ekac_core::moments::gaussian_moment_c_exact;
use ekac_core::oracle::{self, Factored, Outcome, Rational};
use ekac_core::{primes_up_to, DensityModel, InputSet, PolyQ, PrimeTable};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, CliResult};

pub const DEFAULT_VERIFY_SEED: u64 = 0x00ec_5eed;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub name: String,
    pub cases: usize,
    pub passed: usize,
    pub witness: Option<String>,
}

impl CheckRow {
    pub fn ok(&self) -> bool {
        self.passed == self.cases
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub rows: Vec<CheckRow>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(CheckRow::ok)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "seed {}", self.seed);
        let _ = writeln!(out, "{:<44} {:>6} {:>6}  result", "check", "cases", "passed");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<44} {:>6} {:>6}  {}",
                r.name,
                r.cases,
                r.passed,
                if r.ok() { "PASS" } else { "FAIL" }
            );
            if let Some(w) = &r.witness {
                let _ = writeln!(out, "    witness: {w}");
            }
        }
        let _ = writeln!(out, "{}", if self.all_passed() { "all checks passed" } else { "verification FAILED" });
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Add a small constant to `H` in the divisor identities (negative control).
    pub perturb_h: bool,
}

impl SuiteOptions {
    pub fn new(seed: u64) -> SuiteOptions {
        SuiteOptions { seed, perturb_h: false }
    }
}

struct Tally {
    row: CheckRow,
}

impl Tally {
    fn new(name: impl Into<String>) -> Tally {
        Tally { row: CheckRow { name: name.into(), cases: 0, passed: 0, witness: None } }
    }

    fn record(&mut self, outcome: CliResult<Outcome>) {
        self.row.cases += 1;
        match outcome {
            Ok(Outcome::Pass) => self.row.passed += 1,
            Ok(Outcome::Fail(w)) => {
                if self.row.witness.is_none() {
                    self.row.witness = Some(format!(
                        "{} {} lhs={} rhs={}",
                        w.identity, w.context, w.lhs, w.rhs
                    ));
                }
            }
            Err(e) => {
                if self.row.witness.is_none() {
                    self.row.witness = Some(format!("error: {e}"));
                }
            }
        }
    }

    fn record_bool(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.row.cases += 1;
        if ok {
            self.row.passed += 1;
        } else if self.row.witness.is_none() {
            self.row.witness = Some(witness());
        }
    }
}

fn unit(x: u64) -> DensityModel {
    DensityModel::Unit { x }
}

fn shifted_model() -> DensityModel {
    InputSet::ShiftedPrimes { x: 10_000, shift: 1 }.model()
}

pub fn random_rational(rng: &mut impl Rng, max_num: i64, max_den: i64) -> Rational {
    Rational::new(rng.random_range(0..=max_num).into(), rng.random_range(1..=max_den).into())
}

/// A random polynomial with nonnegative rational coefficients in `1..=max_vars`
/// variables and total degree `1..=max_degree`.
pub fn random_poly(rng: &mut impl Rng, max_vars: usize, max_degree: u32) -> PolyQ {
    let vars = rng.random_range(1..=max_vars);
    loop {
        let terms = rng.random_range(1..=4);
        let mut list = Vec::new();
        for _ in 0..terms {
            let total = rng.random_range(0..=max_degree);
            let mut e = vec![0u32; vars];
            for _ in 0..total {
                e[rng.random_range(0..vars)] += 1;
            }
            let c = Rational::new(rng.random_range(1..=6).into(), rng.random_range(1..=3).into());
            list.push((e, c));
        }
        if let Ok(q) = PolyQ::new(vars, list) {
            return q;
        }
    }
}

fn random_window(rng: &mut impl Rng, pool: &[u64], max_len: usize) -> PrimeWindow {
    let len = rng.random_range(1..=max_len.min(pool.len()));
    let chosen: Vec<u64> = pool.choose_multiple(rng, len).copied().collect();
    PrimeWindow::from_primes(&chosen)
}

fn random_values(rng: &mut impl Rng, k: usize, n: usize) -> Vec<Vec<Rational>> {
    (0..k).map(|_| (0..n).map(|_| random_rational(rng, 5, 4)).collect()).collect()
}

fn symmetric(rng: &mut impl Rng, l: usize) -> Vec<Vec<Rational>> {
    let mut z = vec![vec![Rational::zero(); l]; l];
    for i in 0..l {
        for j in i..l {
            let v = Rational::new(rng.random_range(-5..=5).into(), rng.random_range(1..=4).into());
            z[i][j] = v.clone();
            z[j][i] = v;
        }
    }
    z
}

fn lift(r: ekac_core::Result<Outcome>) -> CliResult<Outcome> {
    r.map_err(CliError::from)
}

/// Run every check. Same seed, same report.
pub fn run_suite(opts: SuiteOptions) -> CliResult<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let table: PrimeTable = primes_up_to(20_000)?;
    let small_primes: Vec<u64> = table.up_to(31).to_vec();
    let mut rows = Vec::new();

    for (label, model) in [("h = 1", unit(100)), ("shifted primes, a = 1", shifted_model())] {
        let mut t = Tally::new(format!("divisor identities, {label}"));
        for _ in 0..500 {
            let r = rng.random_range(1..=100_000u64);
            let outcome = if opts.perturb_h {
                let h = |n: &Factored| oracle::h_factored(n, &model) + Rational::new(1.into(), 1_000_000.into());
                oracle::verify_divisor_identities_with(r, &model, &h)
            } else {
                oracle::verify_divisor_identities(r, &model)
            };
            t.record(lift(outcome));
        }
        rows.push(t.row);
    }

    let mut t = Tally::new("remainder identity, A = 1..10^4");
    let integers = InputSet::AllIntegers { x: 10_000 };
    for _ in 0..100 {
        let r = rng.random_range(1..=100_000u64);
        t.record(lift(oracle::verify_remainder_identity(&integers, &table, r)));
    }
    rows.push(t.row);

    let mut t = Tally::new("remainder identity, shifted primes to 10^4");
    let shifted = InputSet::ShiftedPrimes { x: 10_000, shift: 1 };
    for _ in 0..20 {
        let r = rng.random_range(1..=100_000u64);
        t.record(lift(oracle::verify_remainder_identity(&shifted, &table, r)));
    }
    rows.push(t.row);

    for k in [2usize, 4] {
        let mut t = Tally::new(format!("pairing rewrite, k = {k}"));
        for case in 0..40 {
            let model = if case % 2 == 0 { unit(100) } else { shifted_model() };
            let w = random_window(&mut rng, &small_primes, 5);
            let gs = if case < 4 {
                vec![vec![Rational::one(); w.len()]; k]
            } else {
                random_values(&mut rng, k, w.len())
            };
            t.record(lift(oracle::verify_pairing_rewrite(k, &w, &gs, &model)));
        }
        rows.push(t.row);
    }

    for m in [2u32, 4] {
        let mut t = Tally::new(format!("Gaussian closed form, m = {m}"));
        for _ in 0..25 {
            let q = random_poly(&mut rng, 2, 3);
            let y: Vec<Rational> = (0..q.vars()).map(|_| random_rational(&mut rng, 6, 5)).collect();
            let z = symmetric(&mut rng, q.vars());
            t.record(lift(oracle::verify_phi_identity(&q, m, &y, &z)));
        }
        rows.push(t.row);
    }

    for k in 1..=3usize {
        let mut t = Tally::new(format!("F-product identity, k = {k}"));
        for case in 0..10 {
            let set = if case % 3 == 2 {
                InputSet::ShiftedPrimes { x: 5_000, shift: 1 }
            } else {
                InputSet::AllIntegers { x: rng.random_range(100..=5_000) }
            };
            let w = random_window(&mut rng, &small_primes, 5);
            let gs = random_values(&mut rng, k, w.len());
            t.record(lift(oracle::verify_f_product_identity(&set, &table, &w, &gs)));
        }
        rows.push(t.row);
    }

    let mut t = Tally::new("2-to-1 map count / (m/2)! = C_m");
    for m in [2usize, 4, 6, 8] {
        let maps = oracle::enumerate_t_k(m)?;
        let fact: u128 = (1..=(m / 2) as u128).product();
        let c = gaussian_moment_c_exact(m as u32);
        t.record_bool(maps.len() as u128 == c * fact, || format!("m={m} |T|={} C={c}", maps.len()));
    }
    rows.push(t.row);

    let mut t = Tally::new("H and J bounds, p <= 97");
    for model in [unit(100), shifted_model()] {
        for &p in table.up_to(97) {
            let samples: Vec<u64> = (0..6).map(|_| rng.random_range(1..=10_000u64)).collect();
            t.record(lift(oracle::check_h_j_bounds(&model, p, 6, &samples)));
        }
    }
    rows.push(t.row);

    let mut t = Tally::new("expansion structure");
    for _ in 0..20 {
        let q = random_poly(&mut rng, 2, 3);
        let m = rng.random_range(1..=3);
        match q.expand_r_m(m) {
            Ok(e) => {
                let check = e.check_structure();
                t.record_bool(check.is_ok(), || format!("Q={q} m={m}: {}", check.unwrap_err()));
            }
            Err(e) => t.record_bool(false, || format!("Q={q} m={m}: {e}")),
        }
    }
    rows.push(t.row);

    Ok(VerifyReport { seed: opts.seed, rows })
}

/// Exact value of `(Q(x + y) - Q(y))^m`.
pub fn r_m_direct(q: &PolyQ, m: u32, x: &[BigRational], y: &[BigRational]) -> ekac_core::Result<BigRational> {
    let shifted: Vec<BigRational> = x.iter().zip(y).map(|(a, b)| a + b).collect();
    let diff = q.eval_exact(&shifted)? - q.eval_exact(y)?;
    Ok(num_traits::pow(diff, m as usize))
}
