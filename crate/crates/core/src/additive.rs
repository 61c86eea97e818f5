//! Strongly additive functions and prime windows.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::input::DensityModel;
use crate::sieve::PrimeTable;
use crate::sum::NeumaierSum;

/// A finite set of primes `P`. Built from a table it is `P(z) = {p <= z}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeWindow {
    z: f64,
    primes: Vec<u64>,
    contiguous: bool,
}

impl PrimeWindow {
    /// `P(z)`: every table prime `<= z`.
    pub fn new(table: &PrimeTable, z: f64) -> Result<PrimeWindow> {
        let zi = if z < 0.0 { 0 } else { libm::floor(z) as u64 };
        if zi > table.limit() {
            return Err(Error::Capability { limit: table.limit(), needed: zi });
        }
        Ok(PrimeWindow { z, primes: table.up_to(zi).to_vec(), contiguous: true })
    }

    /// An arbitrary finite set of primes.
    pub fn from_primes(primes: &[u64]) -> PrimeWindow {
        let mut primes = primes.to_vec();
        primes.sort_unstable();
        primes.dedup();
        let z = primes.last().copied().unwrap_or(0) as f64;
        PrimeWindow { z, primes, contiguous: false }
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    #[inline]
    pub fn contains(&self, p: u64) -> bool {
        if self.contiguous {
            (p as f64) <= self.z
        } else {
            self.primes.binary_search(&p).is_ok()
        }
    }
}

/// A residue-class rule: primes `p` with `p mod modulus` in `residues`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassRule {
    pub modulus: u64,
    pub residues: Vec<u64>,
    pub value: f64,
}

impl ClassRule {
    fn matches(&self, p: u64) -> bool {
        self.residues.contains(&(p % self.modulus))
    }
}

#[derive(Clone)]
enum Values {
    Constant(f64),
    Table { explicit: BTreeMap<u64, f64>, classes: Vec<ClassRule>, default: f64 },
    Callback(Arc<dyn Fn(u64) -> f64 + Send + Sync>),
}

/// A nonnegative strongly additive function, determined by its prime values.
#[derive(Clone)]
pub struct StronglyAdditive {
    name: String,
    bound: f64,
    values: Values,
}

impl fmt::Debug for StronglyAdditive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StronglyAdditive")
            .field("name", &self.name)
            .field("bound", &self.bound)
            .finish_non_exhaustive()
    }
}

fn check_value(name: &str, v: f64, bound: f64) -> Result<()> {
    if !(v >= 0.0 && v <= bound) {
        return Err(Error::InvalidFunction(format!("{name}: value {v} outside [0, {bound}]")));
    }
    Ok(())
}

impl StronglyAdditive {
    /// `g(p) = c` for every prime.
    pub fn constant(name: &str, c: f64) -> Result<StronglyAdditive> {
        check_value(name, c, c)?;
        Ok(StronglyAdditive { name: name.into(), bound: c, values: Values::Constant(c) })
    }

    /// Values from explicit primes first, then the first matching class,
    /// then `default`.
    pub fn table(
        name: &str,
        bound: f64,
        explicit: BTreeMap<u64, f64>,
        classes: Vec<ClassRule>,
        default: f64,
    ) -> Result<StronglyAdditive> {
        for &v in explicit.values() {
            check_value(name, v, bound)?;
        }
        for c in &classes {
            if c.modulus == 0 {
                return Err(Error::InvalidFunction(format!("{name}: zero modulus")));
            }
            check_value(name, c.value, bound)?;
        }
        check_value(name, default, bound)?;
        Ok(StronglyAdditive {
            name: name.into(),
            bound,
            values: Values::Table { explicit, classes, default },
        })
    }

    /// Arbitrary prime values. Values are checked against `[0, bound]`
    /// when a window is validated.
    pub fn from_fn<F>(name: &str, bound: f64, f: F) -> Result<StronglyAdditive>
    where
        F: Fn(u64) -> f64 + Send + Sync + 'static,
    {
        if !(bound >= 0.0) {
            return Err(Error::InvalidFunction(format!("{name}: negative bound")));
        }
        Ok(StronglyAdditive { name: name.into(), bound, values: Values::Callback(Arc::new(f)) })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The bound `G` with `0 <= g(p) <= G`.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// `g(p)`.
    #[inline]
    pub fn value(&self, p: u64) -> f64 {
        match &self.values {
            Values::Constant(c) => *c,
            Values::Table { explicit, classes, default } => explicit
                .get(&p)
                .copied()
                .or_else(|| classes.iter().find(|c| c.matches(p)).map(|c| c.value))
                .unwrap_or(*default),
            Values::Callback(f) => f(p),
        }
    }

    /// Check `0 <= g(p) <= G` on every prime of the window.
    pub fn validate_on(&self, window: &PrimeWindow) -> Result<()> {
        if let Values::Callback(_) = self.values {
            for &p in window.primes() {
                check_value(&self.name, self.value(p), self.bound)?;
            }
        }
        Ok(())
    }

    /// `g(a)` from the distinct primes of `a`.
    #[inline]
    pub fn eval_full(&self, factors: &[u64]) -> f64 {
        match self.values {
            Values::Constant(c) => c * factors.len() as f64,
            _ => factors.iter().map(|&p| self.value(p)).sum(),
        }
    }

    /// `g^P(a)`: the sum over the primes of `a` lying in the window.
    #[inline]
    pub fn eval_truncated(&self, factors: &[u64], window: &PrimeWindow) -> f64 {
        factors.iter().filter(|&&p| window.contains(p)).map(|&p| self.value(p)).sum()
    }

    /// `F_g^P(a) = g^P(a) - μ^P(g)`.
    pub fn centered_f(&self, factors: &[u64], window: &PrimeWindow, model: &DensityModel) -> f64 {
        self.eval_truncated(factors, window) - crate::stats::mean_mu(self, window, model)
    }

    /// `F_g^P(a)` as `Σ_{p in P} g(p) f_p(a)`, with `f_p(a) = 1 - h(p)/p`
    /// when `p | a` and `-h(p)/p` otherwise.
    pub fn centered_f_by_weights(
        &self,
        a: u64,
        window: &PrimeWindow,
        model: &DensityModel,
    ) -> f64 {
        let mut acc = NeumaierSum::new();
        for &p in window.primes() {
            let hp = model.density(p);
            let f = if a.is_multiple_of(p) { 1.0 - hp } else { -hp };
            acc.add(self.value(p) * f);
        }
        acc.value()
    }
}

/// `ω`: one per distinct prime factor.
pub fn builtin_omega() -> StronglyAdditive {
    StronglyAdditive { name: "omega".into(), bound: 1.0, values: Values::Constant(1.0) }
}

/// `ω` restricted to primes satisfying `predicate`.
pub fn builtin_omega_class<F>(predicate: F, label: &str) -> StronglyAdditive
where
    F: Fn(u64) -> bool + Send + Sync + 'static,
{
    StronglyAdditive {
        name: label.into(),
        bound: 1.0,
        values: Values::Callback(Arc::new(move |p| if predicate(p) { 1.0 } else { 0.0 })),
    }
}

/// `ω` restricted to primes in the given residue classes.
pub fn omega_residue_classes(modulus: u64, residues: &[u64]) -> Result<StronglyAdditive> {
    let label = format!("omega[{residues:?} mod {modulus}]");
    StronglyAdditive::table(
        &label,
        1.0,
        BTreeMap::new(),
        alloc::vec![ClassRule { modulus, residues: residues.to_vec(), value: 1.0 }],
        0.0,
    )
}
