//! Input multisets, their sieve density models, and empirical remainders.
//!
//! For a finite multiset `A` the density model supplies a multiplicative
//! `h` and a scale `X` such that `(h(d)/d) X` approximates the number of
//! elements divisible by a squarefree `d`. The remainder `E_d` is the exact
//! discrepancy.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::sieve::{FactorStream, PrimeTable, DEFAULT_SEGMENT_LEN};
use crate::MAX_INPUT;

/// The input multiset `A`, enumerated in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputSet {
    /// `{1, ..., x}`.
    AllIntegers { x: u64 },
    /// `{p - shift : p prime, shift < p <= x}`.
    ShiftedPrimes { x: u64, shift: i64 },
}

impl InputSet {
    pub fn x(&self) -> u64 {
        match *self {
            InputSet::AllIntegers { x } | InputSet::ShiftedPrimes { x, .. } => x,
        }
    }

    /// The density model that goes with this set.
    pub fn model(&self) -> DensityModel {
        match *self {
            InputSet::AllIntegers { x } => DensityModel::Unit { x },
            InputSet::ShiftedPrimes { x, shift } => {
                DensityModel::ShiftedPrimes { shift, scale: li(x as f64) }
            }
        }
    }

    /// Smallest and largest possible element, or `None` for an empty set.
    pub fn element_bounds(&self) -> Option<(u64, u64)> {
        match *self {
            InputSet::AllIntegers { x } => (x >= 1).then_some((1, x)),
            InputSet::ShiftedPrimes { x, shift } => {
                let lo = (2i128 - shift as i128).max(1);
                let hi = x as i128 - shift as i128;
                (hi >= lo).then_some((lo as u64, hi as u64))
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if self.x() > MAX_INPUT {
            return Err(Error::TooLarge(self.x()));
        }
        if let InputSet::ShiftedPrimes { shift, x } = *self {
            if shift == 0 {
                return Err(Error::Domain("shift must be nonzero".into()));
            }
            if (x as i128 - shift as i128) > MAX_INPUT as i128 {
                return Err(Error::TooLarge(x));
            }
        }
        Ok(())
    }

    /// Stream the elements in `[lo, hi]` (clamped to the set's bounds) with
    /// their factorizations.
    pub fn stream_range(
        &self,
        table: &PrimeTable,
        lo: u64,
        hi: u64,
        segment_len: usize,
    ) -> Result<FactorStream> {
        self.validate()?;
        let (blo, bhi) = self
            .element_bounds()
            .ok_or_else(|| Error::EmptyRange(format!("{self:?} has no elements")))?;
        let (lo, hi) = (lo.max(blo), hi.min(bhi));
        let stream = FactorStream::new(lo, hi, segment_len)?;
        match *self {
            InputSet::AllIntegers { .. } => Ok(stream),
            InputSet::ShiftedPrimes { x, shift } => {
                if table.limit() < x {
                    return Err(Error::Capability { limit: table.limit(), needed: x });
                }
                stream.with_prime_shift(table.clone(), shift)
            }
        }
    }

    /// Every element of the set, ascending.
    pub fn elements(&self, table: &PrimeTable) -> Result<Vec<u64>> {
        self.validate()?;
        match *self {
            InputSet::AllIntegers { x } => Ok((1..=x).collect()),
            InputSet::ShiftedPrimes { x, shift } => {
                if table.limit() < x {
                    return Err(Error::Capability { limit: table.limit(), needed: x });
                }
                Ok(table
                    .up_to(x)
                    .iter()
                    .filter(|&&p| p as i128 > shift as i128)
                    .map(|&p| (p as i128 - shift as i128) as u64)
                    .collect())
            }
        }
    }
}

/// Stream every element of `set` with its distinct prime factors.
///
/// Shifted-prime sets need `primes.limit() >= x`.
pub fn enumerate(set: &InputSet, primes: &PrimeTable) -> Result<FactorStream> {
    set.stream_range(primes, 1, u64::MAX, DEFAULT_SEGMENT_LEN)
}

/// Density model: the multiplicative `h` (through its prime values) and the
/// scale `X`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityModel {
    /// `h = 1`, `X = x`.
    Unit { x: u64 },
    /// `h(p) = p/(p-1)` for `p` not dividing the shift, else 0; `X = li(x)`.
    ShiftedPrimes { shift: i64, scale: f64 },
}

impl DensityModel {
    /// The scale `X`.
    pub fn scale(&self) -> f64 {
        match *self {
            DensityModel::Unit { x } => x as f64,
            DensityModel::ShiftedPrimes { scale, .. } => scale,
        }
    }

    /// `X` as an exact rational. For the shifted-prime model this is the
    /// exact value of the stored double.
    pub fn scale_exact(&self) -> BigRational {
        match *self {
            DensityModel::Unit { x } => BigRational::from_integer(BigInt::from(x)),
            DensityModel::ShiftedPrimes { scale, .. } => {
                BigRational::from_float(scale).unwrap_or_else(BigRational::zero)
            }
        }
    }

    /// Whether `X` is an integer (so remainders are naturally exact).
    pub fn has_rational_scale(&self) -> bool {
        matches!(self, DensityModel::Unit { .. })
    }

    fn divides_shift(shift: i64, p: u64) -> bool {
        shift.unsigned_abs().is_multiple_of(p)
    }

    /// `h(p)` for a prime `p`, exact.
    pub fn h_prime(&self, p: u64) -> BigRational {
        match *self {
            DensityModel::Unit { .. } => BigRational::one(),
            DensityModel::ShiftedPrimes { shift, .. } => {
                if Self::divides_shift(shift, p) {
                    BigRational::zero()
                } else {
                    BigRational::new(BigInt::from(p), BigInt::from(p - 1))
                }
            }
        }
    }

    /// `h(p)/p` for a prime `p`, exact.
    pub fn density_exact(&self, p: u64) -> BigRational {
        match *self {
            DensityModel::Unit { .. } => BigRational::new(BigInt::one(), BigInt::from(p)),
            DensityModel::ShiftedPrimes { shift, .. } => {
                if Self::divides_shift(shift, p) {
                    BigRational::zero()
                } else {
                    BigRational::new(BigInt::one(), BigInt::from(p - 1))
                }
            }
        }
    }

    /// `h(p)/p` for a prime `p`.
    #[inline]
    pub fn density(&self, p: u64) -> f64 {
        match *self {
            DensityModel::Unit { .. } => 1.0 / p as f64,
            DensityModel::ShiftedPrimes { shift, .. } => {
                if Self::divides_shift(shift, p) {
                    0.0
                } else {
                    1.0 / (p - 1) as f64
                }
            }
        }
    }
}

/// Factor a small integer by trial division into `(prime, exponent)`.
pub(crate) fn factor_small(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `h(d)` for squarefree `d`, exact.
pub fn density_h(model: &DensityModel, d: u64) -> Result<BigRational> {
    if d == 0 {
        return Err(Error::Domain("d must be positive".into()));
    }
    let mut acc = BigRational::one();
    for (p, e) in factor_small(d) {
        if e > 1 {
            return Err(Error::Domain(format!("{d} is not squarefree")));
        }
        acc *= model.h_prime(p);
    }
    Ok(acc)
}

/// `li(x) = ∫_2^x dt / log t` by adaptive Simpson quadrature (tolerance
/// 1e-9). Returns 0 for `x <= 2`.
pub fn li(x: f64) -> f64 {
    if x <= 2.0 {
        return 0.0;
    }
    let f = |t: f64| 1.0 / libm::log(t);
    adaptive_simpson(&f, 2.0, x, 1e-9)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance
/// `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || libm::fabs(delta) <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 60)
}

/// The scale `X` of a set: `x` for all integers, `li(x)` for shifted primes.
pub fn big_x(set: &InputSet) -> f64 {
    set.model().scale()
}

/// Value of a remainder: exact when `X` is rational.
#[derive(Debug, Clone, PartialEq)]
pub enum RemainderValue {
    Exact(BigRational),
    Approx(f64),
}

impl RemainderValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            RemainderValue::Exact(r) => rational_to_f64(r),
            RemainderValue::Approx(v) => *v,
        }
    }
}

/// `E_d = #A_d - (h(d)/d) X`.
#[derive(Debug, Clone, PartialEq)]
pub struct Remainder {
    pub d: u64,
    pub count: u64,
    pub value: RemainderValue,
}

/// Count the elements of `set` divisible by `d`, by walking the set.
pub fn count_multiples(set: &InputSet, table: &PrimeTable, d: u64) -> Result<u64> {
    if d == 0 {
        return Err(Error::Domain("d must be positive".into()));
    }
    match *set {
        InputSet::AllIntegers { x } => Ok((d..=x).step_by(d as usize).count() as u64),
        InputSet::ShiftedPrimes { .. } => {
            Ok(set.elements(table)?.iter().filter(|&&a| a % d == 0).count() as u64)
        }
    }
}

/// Measure `E_d` for squarefree `d`.
pub fn empirical_remainder(
    set: &InputSet,
    table: &PrimeTable,
    model: &DensityModel,
    d: u64,
) -> Result<Remainder> {
    let h = density_h(model, d)?;
    let count = count_multiples(set, table, d)?;
    let ratio = h / BigRational::from_integer(BigInt::from(d));
    let value = if model.has_rational_scale() {
        let main = ratio * model.scale_exact();
        RemainderValue::Exact(BigRational::from_integer(BigInt::from(count)) - main)
    } else {
        RemainderValue::Approx(count as f64 - rational_to_f64(&ratio) * model.scale())
    };
    Ok(Remainder { d, count, value })
}

/// Nearest-ish double of a rational (via numerator and denominator scaling).
pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Large operands: shift both down to keep 60+ significant bits.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 900).max(0) as usize;
    let shift_d = (db - 900).max(0) as usize;
    let n = (r.numer() >> shift_n).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d).to_f64().unwrap_or(1.0);
    n / d * libm::pow(2.0, shift_n as f64 - shift_d as f64)
}
