//! Exact rational checks of the algebraic identities behind the moment
//! computation, on instances small enough to enumerate.
//!
//! Integers are passed around factored, as `(prime, exponent)` lists, so
//! products of window primes never overflow.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::additive::{PrimeWindow, StronglyAdditive};
use crate::error::{Error, Result};
use crate::input::{factor_small, DensityModel, InputSet};
use crate::moments::gaussian_moment_c_exact;
use crate::poly::PolyQ;
use crate::sieve::PrimeTable;

pub type Rational = BigRational;

/// Factored positive integer, primes ascending, exponents positive.
pub type Factored = Vec<(u64, u32)>;

pub const MAX_WINDOW: usize = 8;
pub const MAX_TUPLE_K: usize = 6;
pub const MAX_T_K: usize = 12;

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn pow(x: &Rational, e: u32) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

fn factorial(n: usize) -> Rational {
    Rational::from_integer((1..=n).fold(BigInt::one(), |acc, i| acc * i))
}

pub fn factor(n: u64) -> Result<Factored> {
    if n == 0 {
        return Err(Error::Domain("0 has no factorization".into()));
    }
    Ok(factor_small(n))
}

/// Merge a multiset of primes into a factored integer.
pub fn factor_multiset(primes: &[u64]) -> Factored {
    let mut m: BTreeMap<u64, u32> = BTreeMap::new();
    for &p in primes {
        *m.entry(p).or_insert(0) += 1;
    }
    m.into_iter().collect()
}

/// Anything providing exact `h(p)/p` for primes.
pub trait Density {
    fn ratio(&self, p: u64) -> Rational;
}

impl Density for DensityModel {
    fn ratio(&self, p: u64) -> Rational {
        self.density_exact(p)
    }
}

/// `f_r(a)`: the product over `p^α || r` of `(1 - h(p)/p)^α` when `p | a`
/// and `(-h(p)/p)^α` otherwise.
pub fn f_r(r: u64, a: u64, model: &impl Density) -> Result<Rational> {
    Ok(f_factored(&factor(r)?, |p| a.is_multiple_of(p), model))
}

fn f_factored(r: &Factored, divides: impl Fn(u64) -> bool, model: &impl Density) -> Rational {
    let mut acc = Rational::one();
    for &(p, alpha) in r {
        let d = model.ratio(p);
        let base = if divides(p) { Rational::one() - d } else { -d };
        acc *= pow(&base, alpha);
    }
    acc
}

/// `H(p^α) = (h/p)(1 - h/p)^α + (-h/p)^α (1 - h/p)`.
pub fn h_prime_power(p: u64, alpha: u32, model: &impl Density) -> Rational {
    let d = model.ratio(p);
    let c = Rational::one() - &d;
    &d * pow(&c, alpha) + pow(&-d.clone(), alpha) * c
}

/// The multiplicative `H(n)`.
pub fn h_of(n: u64, model: &impl Density) -> Result<Rational> {
    Ok(h_factored(&factor(n)?, model))
}

pub fn h_factored(n: &Factored, model: &impl Density) -> Rational {
    n.iter().fold(Rational::one(), |acc, &(p, a)| acc * h_prime_power(p, a, model))
}

/// `J(r, s)`: over `p^α || r`, `(1 - h/p)^α - (-h/p)^α` when `p | s`, else
/// `(-h/p)^α`.
pub fn j_of(r: u64, s: u64, model: &impl Density) -> Result<Rational> {
    if s == 0 {
        return Err(Error::Domain("s must be positive".into()));
    }
    Ok(j_factored(&factor(r)?, |p| s.is_multiple_of(p), model))
}

fn j_factored(r: &Factored, in_s: impl Fn(u64) -> bool, model: &impl Density) -> Rational {
    let mut acc = Rational::one();
    for &(p, alpha) in r {
        let d = model.ratio(p);
        let neg = pow(&-d.clone(), alpha);
        acc *= if in_s(p) { pow(&(Rational::one() - &d), alpha) - neg } else { neg };
    }
    acc
}

/// Möbius function of a squarefree argument.
pub fn mobius_squarefree(e: u64) -> Result<i64> {
    let f = factor(e)?;
    if f.iter().any(|&(_, a)| a > 1) {
        return Err(Error::Domain(format!("{e} is not squarefree")));
    }
    Ok(if f.len() % 2 == 0 { 1 } else { -1 })
}

/// Where an identity failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub identity: &'static str,
    pub r: Option<u64>,
    pub s: Option<u64>,
    pub context: String,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Pass,
    Fail(alloc::boxed::Box<Witness>),
}

impl Outcome {
    pub fn passed(&self) -> bool {
        matches!(self, Outcome::Pass)
    }

    fn compare(
        identity: &'static str,
        r: Option<u64>,
        s: Option<u64>,
        context: impl FnOnce() -> String,
        lhs: Rational,
        rhs: Rational,
    ) -> Outcome {
        if lhs == rhs {
            Outcome::Pass
        } else {
            Outcome::Fail(alloc::boxed::Box::new(Witness { identity, r, s, context: context(), lhs, rhs }))
        }
    }

    fn and_then(self, next: impl FnOnce() -> Outcome) -> Outcome {
        if self.passed() {
            next()
        } else {
            self
        }
    }
}

/// Bitmasks of every subset of `primes`.
fn subsets(primes: &[u64]) -> impl Iterator<Item = u32> {
    0..(1u32 << primes.len())
}

fn member(primes: &[u64], mask: usize, p: u64) -> bool {
    primes.iter().position(|&q| q == p).is_some_and(|i| mask >> i & 1 == 1)
}

fn mask_product(mask: u32, primes: &[u64]) -> u64 {
    primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).product()
}

/// Both divisor-sum identities for `r`, with `H` from [`h_factored`].
pub fn verify_divisor_identities(r: u64, model: &impl Density) -> Result<Outcome> {
    verify_divisor_identities_with(r, model, &|n: &Factored| h_factored(n, model))
}

/// As [`verify_divisor_identities`] with a caller-supplied `H`.
pub fn verify_divisor_identities_with(
    r: u64,
    model: &impl Density,
    h_eval: &dyn Fn(&Factored) -> Rational,
) -> Result<Outcome> {
    if r > 1_000_000 {
        return Err(Error::TooLargeInstance(format!("r = {r} exceeds 10^6")));
    }
    let rf = factor(r)?;
    let primes: Vec<u64> = rf.iter().map(|&(p, _)| p).collect();
    let ratios: Vec<Rational> = primes.iter().map(|&p| model.ratio(p)).collect();

    // Σ_{d | R} f_r(d) (h(d)/d) Π_{p | R/d} (1 - h(p)/p) = H(r)
    let mut lhs = Rational::zero();
    for mask in subsets(&primes) {
        let mut t = f_factored(&rf, |p| member(&primes, mask as usize, p), model);
        for (i, d) in ratios.iter().enumerate() {
            t *= if mask >> i & 1 == 1 { d.clone() } else { Rational::one() - d };
        }
        lhs += t;
    }
    let first = Outcome::compare("divisor-sum H", Some(r), None, || format!("r={r}"), lhs, h_eval(&rf));

    Ok(first.and_then(|| {
        // Σ_{de = s} f_r(d) μ(e) = J(r, s) for each s | R
        for s_mask in subsets(&primes) {
            let mut lhs = Rational::zero();
            let mut d_mask = s_mask;
            loop {
                let e_size = (s_mask & !d_mask).count_ones();
                let f = f_factored(&rf, |p| member(&primes, d_mask as usize, p), model);
                if e_size % 2 == 0 {
                    lhs += f;
                } else {
                    lhs -= f;
                }
                if d_mask == 0 {
                    break;
                }
                d_mask = (d_mask - 1) & s_mask;
            }
            let rhs = j_factored(&rf, |p| member(&primes, s_mask as usize, p), model);
            let s = mask_product(s_mask, &primes);
            let out = Outcome::compare("divisor-sum J", Some(r), Some(s), || format!("r={r} s={s}"), lhs, rhs);
            if !out.passed() {
                return out;
            }
        }
        Outcome::Pass
    }))
}

/// Elements of `set` bucketed by which of `primes` divide them.
fn mask_counts(set: &InputSet, table: &PrimeTable, primes: &[u64]) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; 1 << primes.len()];
    for a in set.elements(table)? {
        let mut mask = 0usize;
        for (i, &p) in primes.iter().enumerate() {
            if a % p == 0 {
                mask |= 1 << i;
            }
        }
        counts[mask] += 1;
    }
    Ok(counts)
}

/// `E_s = #A_s - (h(s)/s) X` for every `s` dividing the product of
/// `primes`, indexed by subset mask. `X` is the exact value of the model's
/// scale.
fn remainders(counts: &[u64], primes: &[u64], model: &DensityModel) -> Vec<Rational> {
    let x = model.scale_exact();
    let n = primes.len();
    (0..1usize << n)
        .map(|s| {
            let multiples: u64 = counts.iter().enumerate().filter(|(m, _)| m & s == s).map(|(_, &c)| c).sum();
            let mut density = Rational::one();
            for (i, &p) in primes.iter().enumerate() {
                if s >> i & 1 == 1 {
                    density *= model.density_exact(p);
                }
            }
            Rational::from_integer(BigInt::from(multiples)) - density * &x
        })
        .collect()
}

/// `Σ_{a in A} f_r(a) = H(r) X + Σ_{s | r} μ²(s) J(r, s) E_s`.
pub fn verify_remainder_identity(set: &InputSet, table: &PrimeTable, r: u64) -> Result<Outcome> {
    let model = set.model();
    let rf = factor(r)?;
    let primes: Vec<u64> = rf.iter().map(|&(p, _)| p).collect();
    let counts = mask_counts(set, table, &primes)?;
    if counts.iter().sum::<u64>() > 1_000_000 {
        return Err(Error::TooLargeInstance("more than 10^6 elements".into()));
    }
    let mut lhs = Rational::zero();
    for (mask, &c) in counts.iter().enumerate() {
        if c > 0 {
            lhs += f_factored(&rf, |p| member(&primes, mask, p), &model) * rat(c as i64);
        }
    }
    let e = remainders(&counts, &primes, &model);
    let mut rhs = h_factored(&rf, &model) * model.scale_exact();
    for (s, es) in e.iter().enumerate() {
        rhs += j_factored(&rf, |p| member(&primes, s, p), &model) * es;
    }
    Ok(Outcome::compare("remainder", Some(r), None, || format!("r={r} set={set:?}"), lhs, rhs))
}

/// A 2-to-1 map `{0..k-1} -> {0..k/2-1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TwoToOneMap {
    pub assignment: Vec<u8>,
}

impl TwoToOneMap {
    pub fn k(&self) -> usize {
        self.assignment.len()
    }

    /// The two preimages of each `j`, smaller first.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let half = self.k() / 2;
        let mut out = vec![(usize::MAX, usize::MAX); half];
        for (i, &j) in self.assignment.iter().enumerate() {
            let slot = &mut out[j as usize];
            if slot.0 == usize::MAX {
                slot.0 = i;
            } else {
                slot.1 = i;
            }
        }
        out
    }
}

/// All 2-to-1 maps on `k` points, lexicographic.
pub fn enumerate_t_k(k: usize) -> Result<Vec<TwoToOneMap>> {
    if k == 0 || k % 2 == 1 {
        return Err(Error::Domain(format!("k must be even and positive, got {k}")));
    }
    if k > MAX_T_K {
        return Err(Error::TooLargeInstance(format!("k = {k} exceeds {MAX_T_K}")));
    }
    let mut out = Vec::new();
    let mut current = vec![0u8; k];
    let mut used = vec![0u8; k / 2];
    fill_t_k(0, &mut current, &mut used, &mut out);
    Ok(out)
}

fn fill_t_k(i: usize, current: &mut Vec<u8>, used: &mut Vec<u8>, out: &mut Vec<TwoToOneMap>) {
    if i == current.len() {
        out.push(TwoToOneMap { assignment: current.clone() });
        return;
    }
    for j in 0..used.len() {
        if used[j] < 2 {
            used[j] += 1;
            current[i] = j as u8;
            fill_t_k(i + 1, current, used, out);
            used[j] -= 1;
        }
    }
}

/// Exact prime values of `g` on the window, in window order.
pub fn values_on(g: &StronglyAdditive, window: &PrimeWindow) -> Result<Vec<Rational>> {
    window
        .primes()
        .iter()
        .map(|&p| {
            Rational::from_float(g.value(p))
                .ok_or_else(|| Error::InvalidFunction(format!("{}: non-finite value at {p}", g.name())))
        })
        .collect()
}

fn check_window(window: &PrimeWindow, limit: usize) -> Result<()> {
    if window.len() > limit {
        return Err(Error::TooLargeInstance(format!("window of {} primes exceeds {limit}", window.len())));
    }
    Ok(())
}

fn check_values(gs: &[Vec<Rational>], k: usize, window: &PrimeWindow) -> Result<()> {
    if gs.len() != k {
        return Err(Error::LengthMismatch { expected: k, got: gs.len() });
    }
    if let Some(g) = gs.iter().find(|g| g.len() != window.len()) {
        return Err(Error::LengthMismatch { expected: window.len(), got: g.len() });
    }
    Ok(())
}

/// Visit every tuple in `{0..n-1}^k`.
fn for_each_tuple(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if n == 0 && k > 0 {
        return;
    }
    let mut idx = vec![0usize; k];
    loop {
        f(&idx);
        let mut pos = k;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// The pairing rewrite: the sum over `k`-tuples of window primes whose
/// product is squarefull with exactly `k/2` distinct primes of
/// `H(p_1 ... p_k) Π g_i(p_i)` equals `1/(k/2)!` times the sum over 2-to-1
/// maps `τ` and distinct `k/2`-tuples `q` of
/// `Π_j g_{τ₁(j)}(q_j) g_{τ₂(j)}(q_j) (h/q_j)(1 - h/q_j)`.
pub fn verify_pairing_rewrite(
    k: usize,
    window: &PrimeWindow,
    gs: &[Vec<Rational>],
    model: &impl Density,
) -> Result<Outcome> {
    if k == 0 || k % 2 == 1 || k > MAX_TUPLE_K {
        return Err(Error::TooLargeInstance(format!("k = {k} must be even and at most {MAX_TUPLE_K}")));
    }
    check_window(window, MAX_WINDOW)?;
    check_values(gs, k, window)?;
    let primes = window.primes();
    let n = primes.len();
    let half = k / 2;

    let mut lhs = Rational::zero();
    for_each_tuple(n, k, |idx| {
        let mut mult = vec![0u32; n];
        for &i in idx {
            mult[i] += 1;
        }
        let distinct = mult.iter().filter(|&&m| m > 0).count();
        if distinct != half || mult.contains(&1) {
            return;
        }
        let factored: Factored =
            mult.iter().enumerate().filter(|(_, &m)| m > 0).map(|(i, &m)| (primes[i], m)).collect();
        let mut t = h_factored(&factored, model);
        for (g, &i) in gs.iter().zip(idx) {
            t *= &g[i];
        }
        lhs += t;
    });

    let weights: Vec<Rational> = primes
        .iter()
        .map(|&q| {
            let d = model.ratio(q);
            &d * (Rational::one() - &d)
        })
        .collect();
    let maps = enumerate_t_k(k)?;
    let mut rhs = Rational::zero();
    for tau in &maps {
        let pairs = tau.pairs();
        for_each_tuple(n, half, |q| {
            for a in 0..half {
                for b in a + 1..half {
                    if q[a] == q[b] {
                        return;
                    }
                }
            }
            let mut t = Rational::one();
            for (j, &(u1, u2)) in pairs.iter().enumerate() {
                t *= &gs[u1][q[j]] * &gs[u2][q[j]] * &weights[q[j]];
            }
            rhs += t;
        });
    }
    rhs /= factorial(half);
    Ok(Outcome::compare("pairing rewrite", None, None, || format!("k={k} window={primes:?}"), lhs, rhs))
}

/// The closed form for the Gaussian part of the expansion: with `m` even,
/// `1/(m/2)! Σ_{β: k_β = m} r_β Π y_w Σ_τ Π_j z_{v(τ₁ j), v(τ₂ j)}`
/// equals `C_m (Σ_ij Q_i(y) Q_j(y) z_ij)^{m/2}`.
pub fn verify_phi_identity(
    q: &PolyQ,
    m: u32,
    y: &[Rational],
    z: &[Vec<Rational>],
) -> Result<Outcome> {
    if m == 0 || m % 2 == 1 || m > 8 {
        return Err(Error::TooLargeInstance(format!("m = {m} must be even and at most 8")));
    }
    let l = q.vars();
    if y.len() != l {
        return Err(Error::LengthMismatch { expected: l, got: y.len() });
    }
    if z.len() != l || z.iter().any(|row| row.len() != l) {
        return Err(Error::LengthMismatch { expected: l, got: z.len() });
    }
    for i in 0..l {
        for j in 0..l {
            if z[i][j] != z[j][i] {
                return Err(Error::Domain("z must be symmetric".into()));
            }
        }
    }
    let expansion = q.expand_r_m(m)?;
    let maps = enumerate_t_k(m as usize)?;
    let mut lhs = Rational::zero();
    for mono in expansion.monomials.iter().filter(|mono| mono.k() == m as usize) {
        let mut coef = mono.coef.clone();
        for &w in &mono.y_vars {
            coef *= &y[w];
        }
        let v = &mono.x_vars;
        let mut pairing_sum = Rational::zero();
        for tau in &maps {
            let mut t = Rational::one();
            for (a, b) in tau.pairs() {
                t *= &z[v[a]][v[b]];
            }
            pairing_sum += t;
        }
        lhs += coef * pairing_sum;
    }
    lhs /= factorial(m as usize / 2);

    let grad: Vec<Rational> =
        (1..=l).map(|i| q.partial(i)?.eval_exact(y)).collect::<Result<_>>()?;
    let mut quad = Rational::zero();
    for i in 0..l {
        for j in 0..l {
            quad += &grad[i] * &grad[j] * &z[i][j];
        }
    }
    let c_m = Rational::from_integer(BigInt::from(gaussian_moment_c_exact(m)));
    let rhs = c_m * pow(&quad, m / 2);
    Ok(Outcome::compare("phi closed form", None, None, || format!("Q={q} m={m}"), lhs, rhs))
}

/// `Σ_a Π_j F_j(a)` with `F_j(a) = Σ_{p in P} g_j(p) f_p(a)` against
/// `Σ_{p-tuples} Π g_j(p_j) (H(p_1 ... p_k) X + Σ_{s} μ²(s) J(p_1 ... p_k, s) E_s)`.
pub fn verify_f_product_identity(
    set: &InputSet,
    table: &PrimeTable,
    window: &PrimeWindow,
    gs: &[Vec<Rational>],
) -> Result<Outcome> {
    let k = gs.len();
    if k == 0 || k > 4 {
        return Err(Error::TooLargeInstance(format!("k = {k} must be between 1 and 4")));
    }
    check_window(window, 5)?;
    check_values(gs, k, window)?;
    let model = set.model();
    let primes = window.primes();
    let n = primes.len();
    let counts = mask_counts(set, table, primes)?;
    if counts.iter().sum::<u64>() > 10_000 {
        return Err(Error::TooLargeInstance("more than 10^4 elements".into()));
    }
    let ratios: Vec<Rational> = primes.iter().map(|&p| model.density_exact(p)).collect();

    let mut lhs = Rational::zero();
    for (mask, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mut prod = rat(c as i64);
        for g in gs {
            let mut f = Rational::zero();
            for i in 0..n {
                let weight = if mask >> i & 1 == 1 { Rational::one() - &ratios[i] } else { -ratios[i].clone() };
                f += &g[i] * weight;
            }
            prod *= f;
        }
        lhs += prod;
    }

    let e = remainders(&counts, primes, &model);
    let x = model.scale_exact();
    let mut rhs = Rational::zero();
    for_each_tuple(n, k, |idx| {
        let mut gprod = Rational::one();
        for (g, &i) in gs.iter().zip(idx) {
            gprod *= &g[i];
        }
        if gprod.is_zero() {
            return;
        }
        let chosen: Vec<u64> = idx.iter().map(|&i| primes[i]).collect();
        let r = factor_multiset(&chosen);
        let mut r_mask = 0usize;
        for &i in idx {
            r_mask |= 1 << i;
        }
        let mut inner = h_factored(&r, &model) * &x;
        // squarefree s dividing r
        let mut s = r_mask;
        loop {
            inner += j_factored(&r, |p| member(primes, s, p), &model) * &e[s];
            if s == 0 {
                break;
            }
            s = (s - 1) & r_mask;
        }
        rhs += gprod * inner;
    });
    Ok(Outcome::compare("F-product", None, None, || format!("k={k} window={primes:?} set={set:?}"), lhs, rhs))
}

/// `D_k(P)`: products of at most `k` distinct window primes, ascending.
pub fn enumerate_d_k(k: usize, window: &PrimeWindow) -> Result<Vec<u64>> {
    let primes = window.primes();
    let mut size = 0u128;
    let mut binom = 1u128;
    for i in 0..=k.min(primes.len()) {
        size += binom;
        binom = binom * (primes.len() - i) as u128 / (i as u128 + 1);
    }
    if size > 1_000_000 {
        return Err(Error::TooLargeInstance(format!("D_{k} has {size} elements")));
    }
    let mut out = vec![1u64];
    let mut frontier = vec![(1u64, 0usize)];
    for _ in 0..k {
        let mut next = Vec::new();
        for &(d, start) in &frontier {
            for (i, &p) in primes.iter().enumerate().skip(start) {
                let e = d.checked_mul(p).ok_or(Error::TooLarge(d))?;
                next.push((e, i + 1));
                out.push(e);
            }
        }
        frontier = next;
    }
    out.sort_unstable();
    Ok(out)
}

/// Bounds on `H` and `J` at one prime: `H(p) = 0`; `H(p m) = 0` for each
/// sample `m` coprime to `p`; `|H(p^α)| <= H(p²)`; `|J(p^α, s)| <= 1`; and
/// `|J(p^α, s)| <= h(p)/p` when `p` does not divide `s`.
pub fn check_h_j_bounds(
    model: &impl Density,
    p: u64,
    alpha_max: u32,
    s_samples: &[u64],
) -> Result<Outcome> {
    let d = model.ratio(p);
    let hp = h_prime_power(p, 1, model);
    let mut out = Outcome::compare("H(p) = 0", Some(p), None, || format!("p={p}"), hp, Rational::zero());
    for &m in s_samples {
        if m == 0 || m % p == 0 {
            continue;
        }
        let mut f = factor(m)?;
        f.push((p, 1));
        f.sort_unstable();
        out = out.and_then(|| {
            Outcome::compare("H non-squarefull", Some(p * m), None, || format!("n={p}*{m}"), h_factored(&f, model), Rational::zero())
        });
    }
    let h2 = h_prime_power(p, 2, model);
    for alpha in 1..=alpha_max {
        let ha = h_prime_power(p, alpha, model);
        if alpha >= 2 && ha.abs() > h2 {
            return Ok(out.and_then(|| fail_bound("|H(p^a)| <= H(p^2)", p, None, ha, h2.clone())));
        }
        for &s in s_samples {
            if s == 0 {
                continue;
            }
            let pa: Factored = vec![(p, alpha)];
            let j = j_factored(&pa, |q| s % q == 0, model);
            if j.abs() > Rational::one() {
                return Ok(out.and_then(|| fail_bound("|J| <= 1", p, Some(s), j, Rational::one())));
            }
            if s % p != 0 && j.abs() > d {
                return Ok(out.and_then(|| fail_bound("|J| <= h/p", p, Some(s), j, d.clone())));
            }
        }
    }
    Ok(out)
}

fn fail_bound(identity: &'static str, p: u64, s: Option<u64>, lhs: Rational, rhs: Rational) -> Outcome {
    Outcome::Fail(alloc::boxed::Box::new(Witness { identity, r: Some(p), s, context: format!("p={p}"), lhs, rhs }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> DensityModel {
        DensityModel::Unit { x: 100 }
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn f_r_examples() {
        assert_eq!(f_r(2, 4, &unit()).unwrap(), q(1, 2));
        assert_eq!(f_r(2, 5, &unit()).unwrap(), q(-1, 2));
        assert_eq!(f_r(6, 3, &unit()).unwrap(), q(-1, 3));
        assert_eq!(f_r(1, 7, &unit()).unwrap(), q(1, 1));
        for r1 in 1..30u64 {
            for r2 in 1..30u64 {
                let a = 60;
                assert_eq!(
                    f_r(r1 * r2, a, &unit()).unwrap(),
                    f_r(r1, a, &unit()).unwrap() * f_r(r2, a, &unit()).unwrap()
                );
            }
        }
    }

    #[test]
    fn h_and_j_examples() {
        assert_eq!(h_of(7, &unit()).unwrap(), Rational::zero());
        assert_eq!(h_of(4, &unit()).unwrap(), q(1, 4));
        assert_eq!(h_of(8, &unit()).unwrap(), Rational::zero());
        assert_eq!(h_of(12, &unit()).unwrap(), Rational::zero());
        assert_eq!(h_of(36, &unit()).unwrap(), h_of(4, &unit()).unwrap() * h_of(9, &unit()).unwrap());
        assert_eq!(j_of(2, 2, &unit()).unwrap(), q(1, 1));
        assert_eq!(j_of(4, 1, &unit()).unwrap(), q(1, 4));
        assert_eq!(mobius_squarefree(30).unwrap(), -1);
        assert_eq!(mobius_squarefree(1).unwrap(), 1);
        assert!(mobius_squarefree(12).is_err());
    }

    #[test]
    fn divisor_identities_small() {
        for r in [1u64, 12, 30, 360, 1001] {
            assert!(verify_divisor_identities(r, &unit()).unwrap().passed(), "r={r}");
        }
        let shifted = DensityModel::ShiftedPrimes { shift: 1, scale: 10.0 };
        for r in [2u64, 12, 90, 210] {
            assert!(verify_divisor_identities(r, &shifted).unwrap().passed(), "r={r}");
        }
    }

    #[test]
    fn divisor_identity_negative_control() {
        let perturbed = |n: &Factored| h_factored(n, &unit()) + q(1, 1_000_000);
        match verify_divisor_identities_with(12, &unit(), &perturbed).unwrap() {
            Outcome::Fail(w) => assert_eq!(w.r, Some(12)),
            Outcome::Pass => panic!("perturbed H must fail"),
        }
    }

    #[test]
    fn t_k_sizes() {
        assert_eq!(enumerate_t_k(2).unwrap().len(), 1);
        assert_eq!(enumerate_t_k(4).unwrap().len(), 6);
        assert_eq!(enumerate_t_k(6).unwrap().len(), 90);
        assert!(enumerate_t_k(3).is_err());
        assert!(enumerate_t_k(14).is_err());
    }

    #[test]
    fn d_k_examples() {
        let w = PrimeWindow::from_primes(&[2, 3, 5]);
        assert_eq!(enumerate_d_k(0, &w).unwrap(), vec![1]);
        assert_eq!(enumerate_d_k(2, &PrimeWindow::from_primes(&[2, 3])).unwrap(), vec![1, 2, 3, 6]);
        assert_eq!(enumerate_d_k(2, &w).unwrap(), vec![1, 2, 3, 5, 6, 10, 15]);
    }

    #[test]
    fn pairing_k2_and_k4() {
        let w = PrimeWindow::from_primes(&[2, 3, 5]);
        let omega = vec![Rational::one(); 3];
        assert!(verify_pairing_rewrite(2, &w, &[omega.clone(), omega.clone()], &unit()).unwrap().passed());
        assert!(verify_pairing_rewrite(4, &w, &vec![omega; 4], &unit()).unwrap().passed());
    }

    #[test]
    fn phi_small_cases() {
        let lin = PolyQ::parse("T").unwrap();
        assert!(verify_phi_identity(&lin, 2, &[q(3, 1)], &[vec![q(5, 7)]]).unwrap().passed());
        let sq = PolyQ::parse("T^2").unwrap();
        assert!(verify_phi_identity(&sq, 2, &[q(3, 2)], &[vec![q(1, 3)]]).unwrap().passed());
        assert!(verify_phi_identity(&sq, 4, &[q(3, 2)], &[vec![q(1, 3)]]).unwrap().passed());
    }

    #[test]
    fn remainder_small() {
        let t = crate::sieve::primes_up_to(200).unwrap();
        let set = InputSet::AllIntegers { x: 100 };
        for r in [1u64, 6, 12, 30, 97] {
            assert!(verify_remainder_identity(&set, &t, r).unwrap().passed(), "r={r}");
        }
    }

    #[test]
    fn f_product_small() {
        let t = crate::sieve::primes_up_to(2000).unwrap();
        let set = InputSet::AllIntegers { x: 1000 };
        let w = PrimeWindow::from_primes(&[2, 3, 5]);
        let omega = vec![Rational::one(); 3];
        for k in 1..=3 {
            assert!(verify_f_product_identity(&set, &t, &w, &vec![omega.clone(); k]).unwrap().passed());
        }
    }

    #[test]
    fn bounds_hold() {
        let shifted = DensityModel::ShiftedPrimes { shift: 1, scale: 10.0 };
        for p in [2u64, 3, 5, 7, 11, 97] {
            assert!(check_h_j_bounds(&unit(), p, 6, &[1, 2, 3, 6, 35, 97]).unwrap().passed());
            assert!(check_h_j_bounds(&shifted, p, 6, &[1, 2, 3, 6, 35, 97]).unwrap().passed());
        }
    }
}
