//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! [`PolyQ`] is the polynomial applied to the additive functions: nonnegative
//! coefficients and total degree at least one. [`MultiPoly`] is the
//! unrestricted container used for derivatives and for the expansion of
//! `(Q(x + y) - Q(y))^m` into monomials in `x` and `y`.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::input::rational_to_f64;

/// Exponent vector, one entry per variable.
pub type Exponents = Vec<u32>;

/// A polynomial with arbitrary rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: usize,
    terms: BTreeMap<Exponents, BigRational>,
}

impl MultiPoly {
    pub fn zero(vars: usize) -> MultiPoly {
        MultiPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, c: BigRational) -> MultiPoly {
        let mut p = MultiPoly::zero(vars);
        p.add_term(vec![0; vars], c);
        p
    }

    /// The single variable `index` (0-based).
    pub fn variable(vars: usize, index: usize) -> MultiPoly {
        let mut e = vec![0; vars];
        e[index] = 1;
        let mut p = MultiPoly::zero(vars);
        p.add_term(e, BigRational::one());
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, e: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.vars, other.vars);
        let mut acc: BTreeMap<Exponents, BigRational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MultiPoly { vars: self.vars, terms: acc }
    }

    pub fn pow(&self, m: u32) -> MultiPoly {
        let mut out = MultiPoly::constant(self.vars, BigRational::one());
        for _ in 0..m {
            out = out.mul(self);
        }
        out
    }

    /// Formal partial derivative in variable `index` (0-based).
    pub fn derivative(&self, index: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.vars);
        for (e, c) in &self.terms {
            if e[index] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[index] -= 1;
            out.add_term(e2, c * BigRational::from_integer(BigInt::from(e[index])));
        }
        out
    }

    pub fn eval_exact(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.vars {
            return Err(Error::LengthMismatch { expected: self.vars, got: point.len() });
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.vars {
            return Err(Error::LengthMismatch { expected: self.vars, got: point.len() });
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                point
                    .iter()
                    .zip(e)
                    .fold(rational_to_f64(c), |t, (&x, &k)| t * libm::pow(x, k as f64))
            })
            .sum())
    }
}

/// `Q(T_1, ..., T_l)`: nonnegative coefficients, total degree `>= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyQ {
    poly: MultiPoly,
    degree: u32,
    // (coefficient, exponents) for the hot evaluation path
    compiled: Vec<(f64, Exponents)>,
}

impl PolyQ {
    /// Build from `(exponents, coefficient)` pairs. Repeated exponent
    /// vectors are summed.
    pub fn new<I>(vars: usize, terms: I) -> Result<PolyQ>
    where
        I: IntoIterator<Item = (Exponents, BigRational)>,
    {
        if vars == 0 {
            return Err(Error::InvalidPolynomial("no variables".into()));
        }
        let mut poly = MultiPoly::zero(vars);
        for (e, c) in terms {
            if e.len() != vars {
                return Err(Error::LengthMismatch { expected: vars, got: e.len() });
            }
            if c.is_negative() {
                return Err(Error::InvalidPolynomial(format!("negative coefficient {c}")));
            }
            poly.add_term(e, c);
        }
        PolyQ::from_poly(poly)
    }

    fn from_poly(poly: MultiPoly) -> Result<PolyQ> {
        if poly.terms.values().any(|c| c.is_negative()) {
            return Err(Error::InvalidPolynomial("negative coefficient".into()));
        }
        let degree = poly.degree();
        if degree == 0 {
            return Err(Error::InvalidPolynomial("constant polynomial".into()));
        }
        let compiled = poly.terms.iter().map(|(e, c)| (rational_to_f64(c), e.clone())).collect();
        Ok(PolyQ { poly, degree, compiled })
    }

    /// Parse with the number of variables taken from the highest index used.
    pub fn parse(s: &str) -> Result<PolyQ> {
        Parser::new(s).parse(None)
    }

    /// Parse with an explicit variable count.
    pub fn parse_with_vars(s: &str, vars: usize) -> Result<PolyQ> {
        Parser::new(s).parse(Some(vars))
    }

    pub fn vars(&self) -> usize {
        self.poly.vars
    }

    /// Total degree `δ`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn as_poly(&self) -> &MultiPoly {
        &self.poly
    }

    /// Evaluate at a point of length `l`.
    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.vars() {
            return Err(Error::LengthMismatch { expected: self.vars(), got: point.len() });
        }
        Ok(self.eval_unchecked(point))
    }

    #[inline]
    pub fn eval_unchecked(&self, point: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (c, e) in &self.compiled {
            let mut t = *c;
            for (&x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_exact(&self, point: &[BigRational]) -> Result<BigRational> {
        self.poly.eval_exact(point)
    }

    /// `∂Q/∂T_j` with `j` 1-based.
    pub fn partial(&self, j: usize) -> Result<MultiPoly> {
        if j == 0 || j > self.vars() {
            return Err(Error::IndexOutOfRange { index: j, vars: self.vars() });
        }
        Ok(self.poly.derivative(j - 1))
    }

    /// The gradient at a point.
    pub fn gradient(&self, point: &[f64]) -> Result<Vec<f64>> {
        (1..=self.vars()).map(|j| self.partial(j)?.eval(point)).collect()
    }

    /// `(Q(x + y) - Q(y))^m` expanded into monomials.
    pub fn expand_r_m(&self, m: u32) -> Result<RmExpansion> {
        if m == 0 {
            return Err(Error::Domain("moment index must be positive".into()));
        }
        let l = self.vars();
        let two_l = 2 * l;
        // x_i is variable i, y_i is variable l + i
        let shifted: Vec<MultiPoly> = (0..l)
            .map(|i| MultiPoly::variable(two_l, i).add(&MultiPoly::variable(two_l, l + i)))
            .collect();
        let mut q_xy = MultiPoly::zero(two_l);
        let mut q_y = MultiPoly::zero(two_l);
        for (e, c) in self.poly.terms() {
            let mut t = MultiPoly::constant(two_l, c.clone());
            let mut ye = vec![0u32; two_l];
            for (i, &k) in e.iter().enumerate() {
                t = t.mul(&shifted[i].pow(k));
                ye[l + i] = k;
            }
            q_xy = q_xy.add(&t);
            q_y.add_term(ye, c.clone());
        }
        let r = q_xy.sub(&q_y).pow(m);
        let mut monomials: Vec<RmMonomial> = r
            .terms()
            .map(|(e, c)| {
                let mut x_vars = Vec::new();
                let mut y_vars = Vec::new();
                for i in 0..l {
                    x_vars.extend(core::iter::repeat_n(i, e[i] as usize));
                    y_vars.extend(core::iter::repeat_n(i, e[l + i] as usize));
                }
                RmMonomial { coef: c.clone(), x_vars, y_vars }
            })
            .collect();
        monomials.sort_by(|a, b| (&a.x_vars, &a.y_vars).cmp(&(&b.x_vars, &b.y_vars)));
        Ok(RmExpansion { m, vars: l, degree: self.degree, monomials })
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        // highest-degree terms first for readability
        let mut terms: Vec<_> = self.poly.terms().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (e, c) in terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            if !c.is_one() || e.iter().all(|&k| k == 0) {
                factors.push(format_decimal(c));
            }
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(format!("T{}", i + 1)),
                    _ => factors.push(format!("T{}^{}", i + 1, k)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

/// Exact decimal when the denominator is `2^a 5^b`, otherwise 17 digits.
fn format_decimal(c: &BigRational) -> String {
    if c.is_integer() {
        return format!("{}", c.numer());
    }
    let mut den = c.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let mut digits = 0usize;
    while (&den % &two).is_zero() || (&den % &five).is_zero() {
        if (&den % &two).is_zero() {
            den /= &two;
        }
        if (&den % &five).is_zero() {
            den /= &five;
        }
        digits += 1;
    }
    if den.is_one() {
        let scaled = c * BigRational::from_integer(num_traits::pow(BigInt::from(10), digits + 1));
        let n = scaled.to_integer();
        let s = format!("{n}");
        let (int, frac) = s.split_at(s.len() - (digits + 1));
        let int = if int.is_empty() { "0" } else { int };
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            return String::from(int);
        }
        return format!("{int}.{frac}");
    }
    format!("{:.17e}", rational_to_f64(c))
}

impl FromStr for PolyQ {
    type Err = Error;

    fn from_str(s: &str) -> Result<PolyQ> {
        PolyQ::parse(s)
    }
}

/// One monomial `r Π x_v Π y_w` of the expansion; variable indices are
/// 0-based and sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RmMonomial {
    pub coef: BigRational,
    pub x_vars: Vec<usize>,
    pub y_vars: Vec<usize>,
}

impl RmMonomial {
    /// Total `x`-degree.
    pub fn k(&self) -> usize {
        self.x_vars.len()
    }

    /// Total `y`-degree.
    pub fn k_tilde(&self) -> usize {
        self.y_vars.len()
    }
}

/// `(Q(x + y) - Q(y))^m` as a list of monomials in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RmExpansion {
    pub m: u32,
    pub vars: usize,
    pub degree: u32,
    pub monomials: Vec<RmMonomial>,
}

impl RmExpansion {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn min_x_degree(&self) -> Option<usize> {
        self.monomials.iter().map(RmMonomial::k).min()
    }

    /// Evaluate the expansion at `(x, y)` exactly.
    pub fn eval_exact(&self, x: &[BigRational], y: &[BigRational]) -> Result<BigRational> {
        for v in [x, y] {
            if v.len() != self.vars {
                return Err(Error::LengthMismatch { expected: self.vars, got: v.len() });
            }
        }
        let mut acc = BigRational::zero();
        for mono in &self.monomials {
            let mut t = mono.coef.clone();
            for &i in &mono.x_vars {
                t *= &x[i];
            }
            for &j in &mono.y_vars {
                t *= &y[j];
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Check that every monomial has `k >= m` and `k + k~ <= δ m`, and that
    /// some monomial has `k = m`.
    pub fn check_structure(&self) -> core::result::Result<(), String> {
        let m = self.m as usize;
        let cap = self.degree as usize * m;
        for mono in &self.monomials {
            if mono.k() < m {
                return Err(format!("monomial with x-degree {} < m = {m}", mono.k()));
            }
            if mono.k() + mono.k_tilde() > cap {
                return Err(format!("monomial with total degree {} > δm = {cap}", mono.k() + mono.k_tilde()));
            }
        }
        if !self.monomials.iter().any(|mono| mono.k() == m) {
            return Err(format!("no monomial attains x-degree m = {m}"));
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser { src: s.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { column: self.pos + 1, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse(mut self, vars: Option<usize>) -> Result<PolyQ> {
        let mut terms: Vec<(BTreeMap<usize, u32>, BigRational)> = Vec::new();
        loop {
            terms.push(self.term()?);
            match self.peek() {
                None => break,
                Some(b'+') => self.pos += 1,
                Some(b'-') => {
                    return Err(Error::InvalidPolynomial(format!(
                        "subtraction at column {} would give a negative coefficient",
                        self.pos + 1
                    )))
                }
                Some(c) => return self.err(format!("unexpected '{}'", c as char)),
            }
        }
        let used = terms.iter().flat_map(|(e, _)| e.keys()).max().map_or(0, |&i| i + 1);
        let vars = match vars {
            Some(v) if v < used => {
                return Err(Error::InvalidPolynomial(format!("uses T{used} but only {v} variables")))
            }
            Some(v) => v,
            None => used.max(1),
        };
        PolyQ::new(
            vars,
            terms.into_iter().map(|(e, c)| {
                let mut ev = vec![0u32; vars];
                for (i, k) in e {
                    ev[i] += k;
                }
                (ev, c)
            }),
        )
    }

    fn term(&mut self) -> Result<(BTreeMap<usize, u32>, BigRational)> {
        let mut coef = BigRational::one();
        let mut exps = BTreeMap::new();
        loop {
            match self.peek() {
                Some(b'T') | Some(b't') => {
                    self.pos += 1;
                    let start = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    let index = if start == self.pos {
                        1
                    } else {
                        let s = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
                        match s.parse::<usize>() {
                            Ok(0) | Err(_) => {
                                self.pos = start;
                                return self.err("variables are numbered from T1");
                            }
                            Ok(i) => i,
                        }
                    };
                    let power = self.exponent()?;
                    *exps.entry(index - 1).or_insert(0) += power;
                }
                Some(c) if c.is_ascii_digit() || c == b'.' => {
                    let n = self.number()?;
                    let power = self.exponent()?;
                    coef *= num_traits::pow(n, power as usize);
                }
                Some(b'-') => {
                    return Err(Error::InvalidPolynomial(format!(
                        "negative coefficient at column {}",
                        self.pos + 1
                    )))
                }
                Some(c) => return self.err(format!("unexpected '{}'", c as char)),
                None => return self.err("unexpected end of input"),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((exps, coef))
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer exponent");
        }
        let s = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse::<u32>().or_else(|_| {
            self.pos = start;
            self.err("exponent too large")
        })
    }

    fn number(&mut self) -> Result<BigRational> {
        let start = self.pos;
        let mut int = BigInt::zero();
        let mut den = BigInt::one();
        let mut seen_digit = false;
        let mut seen_dot = false;
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_digit() {
                int = int * 10 + (c - b'0') as u32;
                if seen_dot {
                    den *= 10;
                }
                seen_digit = true;
            } else if c == b'.' && !seen_dot {
                seen_dot = true;
            } else {
                break;
            }
            self.pos += 1;
        }
        if !seen_digit {
            self.pos = start;
            return self.err("malformed number");
        }
        let mut value = BigRational::new(int, den);
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E')) {
            self.pos += 1;
            let neg = match self.src.get(self.pos) {
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                _ => false,
            };
            let es = self.pos;
            while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                self.pos += 1;
            }
            let e: usize = match core::str::from_utf8(&self.src[es..self.pos]).unwrap().parse() {
                Ok(e) if e <= 400 => e,
                _ => {
                    self.pos = es;
                    return self.err("malformed exponent");
                }
            };
            let scale = BigRational::from_integer(num_traits::pow(BigInt::from(10), e));
            value = if neg { value / scale } else { value * scale };
        }
        Ok(value)
    }
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::string::ToString;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn eval_basics() {
        let q = PolyQ::parse("T1*T2").unwrap();
        assert_eq!(q.eval(&[2.0, 3.0]).unwrap(), 6.0);
        let cube = PolyQ::parse("T^3").unwrap();
        assert_eq!(cube.eval(&[2.0]).unwrap(), 8.0);
        assert!(matches!(q.eval(&[1.0]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn partials() {
        let q = PolyQ::parse("T^5").unwrap();
        let d = q.partial(1).unwrap();
        assert_eq!(d, MultiPoly { vars: 1, terms: [(vec![4], r(5))].into_iter().collect() });
        let q = PolyQ::parse("T1*T2").unwrap();
        assert_eq!(q.partial(1).unwrap(), MultiPoly::variable(2, 1));
        let lin = PolyQ::parse("2*T1 + 7*T2").unwrap();
        assert_eq!(lin.partial(2).unwrap(), MultiPoly::constant(2, r(7)));
        assert!(matches!(lin.partial(3), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(lin.partial(0), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn parse_and_display() {
        let q = PolyQ::parse("T1^2*T2 + 3*T1").unwrap();
        assert_eq!(q.vars(), 2);
        assert_eq!(q.degree(), 3);
        assert_eq!(q.to_string(), "T1^2*T2 + 3*T1");
        let half = PolyQ::parse("0.5*T1 + 1.25").unwrap();
        assert_eq!(half.to_string(), "0.5*T1 + 1.25");
        assert_eq!(PolyQ::parse(&half.to_string()).unwrap(), half);
        assert_eq!(PolyQ::parse("T2").unwrap().vars(), 2);
        assert_eq!(PolyQ::parse_with_vars("T1", 3).unwrap().vars(), 3);
    }

    #[test]
    fn parse_rejections() {
        assert!(matches!(PolyQ::parse("T1-T2"), Err(Error::InvalidPolynomial(_))));
        assert!(matches!(PolyQ::parse("-T1"), Err(Error::InvalidPolynomial(_))));
        assert!(matches!(PolyQ::parse("5"), Err(Error::InvalidPolynomial(_))));
        assert!(matches!(PolyQ::parse("T1 + "), Err(Error::Parse { column: 6, .. })));
        assert!(matches!(PolyQ::parse("T0"), Err(Error::Parse { .. })));
        assert!(matches!(PolyQ::parse("T1 / 2"), Err(Error::Parse { column: 4, .. })));
        assert!(matches!(PolyQ::parse("T1^"), Err(Error::Parse { .. })));
    }

    #[test]
    fn expansion_of_square() {
        let q = PolyQ::parse("T^2").unwrap();
        let e = q.expand_r_m(1).unwrap();
        // (x+y)^2 - y^2 = x^2 + 2xy
        assert_eq!(e.len(), 2);
        assert_eq!(e.monomials[0], RmMonomial { coef: r(2), x_vars: vec![0], y_vars: vec![0] });
        assert_eq!(e.monomials[1], RmMonomial { coef: r(1), x_vars: vec![0, 0], y_vars: vec![] });
        assert_eq!(e.min_x_degree(), Some(1));
        e.check_structure().unwrap();
    }

    #[test]
    fn expansion_of_linear_and_product() {
        let e = PolyQ::parse("T").unwrap().expand_r_m(3).unwrap();
        assert_eq!(e.monomials, vec![RmMonomial { coef: r(1), x_vars: vec![0, 0, 0], y_vars: vec![] }]);
        let e = PolyQ::parse("T1*T2").unwrap().expand_r_m(1).unwrap();
        let got: Vec<_> = e.monomials.iter().map(|m| (m.coef.clone(), m.x_vars.clone(), m.y_vars.clone())).collect();
        assert_eq!(
            got,
            vec![(r(1), vec![0], vec![1]), (r(1), vec![0, 1], vec![]), (r(1), vec![1], vec![0])]
        );
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(3, 5), BigInt::zero());
    }
}
