//! Prime tables and segmented distinct-prime factorization.
//!
//! [`FactorStream`] walks an interval in fixed-length segments. Each
//! segment is sieved by the primes up to the square root of the interval's
//! upper end; whatever cofactor survives is a single prime larger than that
//! bound. The output of each segment is an [`SpfSegment`] holding the
//! smallest prime factor of every entry and the ascending list of its
//! distinct prime factors.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::MAX_INPUT;

/// Default number of integers per sieve segment.
pub const DEFAULT_SEGMENT_LEN: usize = 1 << 18;

/// Floor of the square root of `n`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = libm::sqrt(n as f64) as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes up to a limit, ascending. Cloning shares the storage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Arc<[u64]>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
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

    /// Number of table primes `<= t` (saturates at the table size).
    pub fn count_up_to(&self, t: u64) -> usize {
        self.primes.partition_point(|&p| p <= t)
    }

    /// The table primes `<= t`.
    pub fn up_to(&self, t: u64) -> &[u64] {
        &self.primes[..self.count_up_to(t)]
    }

    /// Membership test; `None` when `n` lies beyond the table.
    pub fn contains(&self, n: u64) -> Option<bool> {
        (n <= self.limit).then(|| self.primes.binary_search(&n).is_ok())
    }
}

/// Sieve of Eratosthenes over odd numbers, one bit-free byte per odd.
fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    // index i represents 2i + 1
    let mut composite = vec![false; limit / 2 + 1];
    let mut primes = vec![2u64];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= limit {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < composite.len() {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    for (i, &c) in composite.iter().enumerate().skip(1) {
        let n = 2 * i + 1;
        if n > limit {
            break;
        }
        if !c {
            primes.push(n as u64);
        }
    }
    primes
}

/// All primes in `[2, limit]`.
pub fn primes_up_to(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::EmptyRange(format!("no primes up to {limit}")));
    }
    if limit > MAX_INPUT {
        return Err(Error::TooLarge(limit));
    }
    let root = isqrt(limit);
    let base = small_primes(root);
    if limit <= 1 << 20 {
        return Ok(PrimeTable { limit, primes: small_primes(limit).into() });
    }
    // Segmented odd-only sieve above the root.
    let mut primes = base.clone();
    let seg = DEFAULT_SEGMENT_LEN as u64 * 2;
    let mut lo = root + 1;
    let mut mark = vec![false; DEFAULT_SEGMENT_LEN];
    while lo <= limit {
        let hi = (lo + seg - 1).min(limit);
        let first_odd = lo | 1;
        if first_odd > hi {
            break;
        }
        let count = ((hi - first_odd) / 2 + 1) as usize;
        mark[..count].iter_mut().for_each(|m| *m = false);
        for &p in base.iter().skip(1) {
            if p * p > hi {
                break;
            }
            let mut start = p * p.max(first_odd.div_ceil(p));
            if start % 2 == 0 {
                start += p;
            }
            let mut j = ((start - first_odd) / 2) as usize;
            while j < count {
                mark[j] = true;
                j += p as usize;
            }
        }
        primes.extend(
            mark[..count]
                .iter()
                .enumerate()
                .filter(|(_, &m)| !m)
                .map(|(j, _)| first_odd + 2 * j as u64),
        );
        lo = hi + 1;
    }
    Ok(PrimeTable { limit, primes: primes.into() })
}

/// One sieved segment `[base, base + len)`.
///
/// `spf[i]` is the smallest prime factor of `base + i` (and 1 for the
/// integer 1). The distinct prime factors of each entry are stored
/// contiguously, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpfSegment {
    base: u64,
    spf: Vec<u64>,
    offsets: Vec<u32>,
    factors: Vec<u64>,
    selected: Option<Vec<u32>>,
}

impl SpfSegment {
    /// Sieve `[base, base + len)` using `sieving` (ascending primes covering
    /// at least `sqrt(base + len - 1)`).
    pub fn sieve(base: u64, len: usize, sieving: &[u64]) -> SpfSegment {
        debug_assert!(base >= 1);
        let hi = base + len as u64 - 1;
        let mut rem: Vec<u64> = (base..=hi).collect();
        let mut spf = vec![0u64; len];
        let mut counts = vec![0u32; len + 1];
        let mut hits: Vec<(u32, u64)> = Vec::with_capacity(len * 3);
        for &p in sieving {
            if p * p > hi {
                break;
            }
            let first = base.div_ceil(p) * p;
            let mut n = first;
            while n <= hi {
                let i = (n - base) as usize;
                if spf[i] == 0 {
                    spf[i] = p;
                }
                let mut r = rem[i] / p;
                while r.is_multiple_of(p) {
                    r /= p;
                }
                rem[i] = r;
                hits.push((i as u32, p));
                counts[i] += 1;
                n += p;
            }
        }
        for i in 0..len {
            if rem[i] > 1 {
                counts[i] += 1;
                if spf[i] == 0 {
                    spf[i] = rem[i];
                }
            } else if spf[i] == 0 {
                spf[i] = 1;
            }
        }
        let mut offsets = Vec::with_capacity(len + 1);
        let mut acc = 0u32;
        for &c in &counts[..len] {
            offsets.push(acc);
            acc += c;
        }
        offsets.push(acc);
        let mut cursor: Vec<u32> = offsets[..len].to_vec();
        let mut factors = vec![0u64; acc as usize];
        // hits arrive grouped by ascending prime, so this pass keeps each
        // entry's list ascending
        for (i, p) in hits {
            let c = &mut cursor[i as usize];
            factors[*c as usize] = p;
            *c += 1;
        }
        for i in 0..len {
            if rem[i] > 1 {
                factors[cursor[i] as usize] = rem[i];
            }
        }
        SpfSegment { base, spf, offsets, factors, selected: None }
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.spf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spf.is_empty()
    }

    pub fn spf(&self) -> &[u64] {
        &self.spf
    }

    /// Distinct prime factors of `base + i`.
    pub fn factors_at(&self, i: usize) -> &[u64] {
        &self.factors[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    fn select(&mut self, keep: Vec<u32>) {
        self.selected = Some(keep);
    }

    /// The streamed records of this segment, ascending.
    pub fn records(&self) -> Records<'_> {
        Records { seg: self, pos: 0 }
    }
}

/// Iterator over `(a, distinct primes of a)` in a segment.
pub struct Records<'s> {
    seg: &'s SpfSegment,
    pos: usize,
}

impl<'s> Iterator for Records<'s> {
    type Item = (u64, &'s [u64]);

    fn next(&mut self) -> Option<Self::Item> {
        let i = match &self.seg.selected {
            Some(keep) => *keep.get(self.pos)? as usize,
            None if self.pos < self.seg.len() => self.pos,
            None => return None,
        };
        self.pos += 1;
        Some((self.seg.base + i as u64, self.seg.factors_at(i)))
    }
}

/// Elements of `[lo, hi]` are kept when `n + shift` is a prime of `table`.
#[derive(Debug, Clone)]
struct PrimeShiftFilter {
    table: PrimeTable,
    shift: i64,
}

/// Segment-by-segment stream of distinct-prime factorizations of an
/// integer interval (optionally filtered to shifted primes).
#[derive(Debug, Clone)]
pub struct FactorStream {
    next_lo: u64,
    hi: u64,
    segment_len: usize,
    sieving: Vec<u64>,
    filter: Option<PrimeShiftFilter>,
    done: bool,
}

impl FactorStream {
    /// Stream every integer of `[lo, hi]`.
    pub fn new(lo: u64, hi: u64, segment_len: usize) -> Result<FactorStream> {
        if lo == 0 || lo > hi {
            return Err(Error::EmptyRange(format!("[{lo}, {hi}]")));
        }
        if hi > MAX_INPUT {
            return Err(Error::TooLarge(hi));
        }
        if segment_len == 0 {
            return Err(Error::Domain("segment length must be positive".into()));
        }
        Ok(FactorStream {
            next_lo: lo,
            hi,
            segment_len,
            sieving: small_primes(isqrt(hi)),
            filter: None,
            done: false,
        })
    }

    /// Keep only the `n` with `n + shift` prime. `table` must reach
    /// `hi + shift`.
    pub fn with_prime_shift(mut self, table: PrimeTable, shift: i64) -> Result<FactorStream> {
        let top = self.hi as i128 + shift as i128;
        if top > table.limit() as i128 {
            return Err(Error::Capability { limit: table.limit(), needed: top as u64 });
        }
        self.filter = Some(PrimeShiftFilter { table, shift });
        Ok(self)
    }

    pub fn lo(&self) -> u64 {
        self.next_lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }
}

impl Iterator for FactorStream {
    type Item = SpfSegment;

    fn next(&mut self) -> Option<SpfSegment> {
        if self.done {
            return None;
        }
        let lo = self.next_lo;
        let end = (lo + self.segment_len as u64 - 1).min(self.hi);
        let mut seg = SpfSegment::sieve(lo, (end - lo + 1) as usize, &self.sieving);
        if let Some(f) = &self.filter {
            let plo = (lo as i128 + f.shift as i128).max(0) as u64;
            let phi = (end as i128 + f.shift as i128).max(0) as u64;
            let primes = f.table.primes();
            let start = primes.partition_point(|&p| p < plo);
            let keep = primes[start..]
                .iter()
                .take_while(|&&p| p <= phi)
                .map(|&p| (p as i128 - f.shift as i128 - lo as i128) as u32)
                .collect();
            seg.select(keep);
        }
        if end == self.hi {
            self.done = true;
        } else {
            self.next_lo = end + 1;
        }
        Some(seg)
    }
}

/// Stream the factorizations of `[lo, hi]`.
pub fn factor_stream(lo: u64, hi: u64, segment_len: usize) -> Result<FactorStream> {
    FactorStream::new(lo, hi, segment_len)
}

/// Distinct prime factors of `n` by division with the table primes.
///
/// Needs `table.limit() >= n` or `table.limit()^2 >= n`; at most one prime
/// cofactor beyond the table remains after division.
pub fn distinct_prime_factors(n: u64, table: &PrimeTable) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::Domain("0 has no factorization".into()));
    }
    if n > MAX_INPUT {
        return Err(Error::TooLarge(n));
    }
    let lim = table.limit();
    if lim < n && lim.checked_mul(lim).is_some_and(|sq| sq < n) {
        return Err(Error::Capability { limit: lim, needed: n });
    }
    let mut out = Vec::new();
    if table.contains(n) == Some(true) {
        out.push(n);
        return Ok(out);
    }
    let mut rem = n;
    for &p in table.primes() {
        if p * p > rem {
            break;
        }
        if rem.is_multiple_of(p) {
            out.push(p);
            rem /= p;
            while rem.is_multiple_of(p) {
                rem /= p;
            }
        }
    }
    if rem > 1 {
        out.push(rem);
    }
    Ok(out)
}
