//! Exact rationals, rational parsing/formatting, and real numbers of the form
//! `a + sum c_i sqrt(b_i)` with rational `a`, `c_i` and squarefree `b_i`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exact rational number used throughout the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: &BigInt) -> Q {
    Q::from_integer(n.clone())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not an exact rational: {0:?}")]
pub struct ParseRationalError(pub String);

/// Parses `"3/7"`, `"-2"`, `"+5"` or a finite decimal such as `"0.125"`.
pub fn parse_q(text: &str) -> Result<Q, ParseRationalError> {
    let s = text.trim();
    let err = || ParseRationalError(text.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = parse_int(n.trim()).ok_or_else(err)?;
        let d: BigInt = parse_int(d.trim()).ok_or_else(err)?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        if fp.is_empty() && ip.is_empty() {
            return Err(err());
        }
        if !ip.chars().all(|c| c.is_ascii_digit()) || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp);
        let n: BigInt = digits.parse().map_err(|_| err())?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let v = Q::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    parse_int(s).map(Q::from_integer).ok_or_else(err)
}

fn parse_int(s: &str) -> Option<BigInt> {
    let body = s.strip_prefix('+').unwrap_or(s);
    let digits = body.strip_prefix('-').unwrap_or(body);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    body.parse().ok()
}

/// `p/q` in lowest terms, or just `p` for integers.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn floor_int(x: &Q) -> BigInt {
    x.floor().to_integer()
}

pub fn ceil_int(x: &Q) -> BigInt {
    x.ceil().to_integer()
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

pub fn q_abs(x: &Q) -> Q {
    x.abs()
}

pub fn q_max(a: Q, b: Q) -> Q {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn q_min(a: Q, b: Q) -> Q {
    if a <= b {
        a
    } else {
        b
    }
}

/// Exact square root when `x` is the square of a rational.
pub fn sqrt_exact(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// Rational lower bound for `sqrt(x)` with absolute error below `10^-digits`.
pub fn sqrt_lower(x: &Q, digits: u32) -> Q {
    assert!(!x.is_negative(), "sqrt of a negative rational");
    let scale = num_traits::pow(BigInt::from(10), digits as usize);
    let n = x.numer() * x.denom() * &scale * &scale;
    Q::new(n.sqrt(), x.denom() * scale)
}

/// Rational upper bound for `sqrt(x)` with absolute error below `10^-digits`.
pub fn sqrt_upper(x: &Q, digits: u32) -> Q {
    let lo = sqrt_lower(x, digits);
    if &(&lo * &lo) == x {
        lo
    } else {
        lo + Q::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits as usize))
    }
}

/// Largest fraction `p/q` with `0 < q <= max_den` such that `pred` holds,
/// assuming `pred` is true on `[0, tau]` (or `[0, tau)`) and false above.
/// Returns zero when only zero qualifies.
pub fn largest_fraction_with(max_den: u64, pred: impl Fn(&Q) -> bool) -> Q {
    assert!(max_den >= 1);
    let n = BigInt::from(max_den);
    let frac = |p: &BigInt, q: &BigInt| Q::new(p.clone(), q.clone());
    // lo = a/b satisfies pred, hi = c/d does not (1/0 stands for infinity)
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    let (mut c, mut d) = (BigInt::one(), BigInt::zero());
    loop {
        if &b + &d > n {
            break;
        }
        let (ma, mb) = (&a + &c, &b + &d);
        if pred(&frac(&ma, &mb)) {
            // advance lo towards hi by the largest admissible k
            let kmax = if d.is_zero() { None } else { Some((&n - &b) / &d) };
            let ok = |k: &BigInt| pred(&frac(&(&a + k * &c), &(&b + k * &d)));
            let k = max_true(kmax, ok);
            a = &a + &k * &c;
            b = &b + &k * &d;
        } else {
            let kmax = Some((&n - &d) / &b);
            let ok = |k: &BigInt| !pred(&frac(&(k * &a + &c), &(k * &b + &d)));
            let k = max_true(kmax, ok);
            c = &k * &a + &c;
            d = &k * &b + &d;
        }
    }
    frac(&a, &b)
}

/// Largest `k >= 1` (bounded by `kmax` when given) with `ok(k)`, given that
/// `ok(1)` holds and `ok` is monotone decreasing in `k`.
fn max_true(kmax: Option<BigInt>, ok: impl Fn(&BigInt) -> bool) -> BigInt {
    let mut lo = BigInt::one();
    let mut hi = match kmax {
        Some(km) => {
            if ok(&km) {
                return km;
            }
            km
        }
        None => {
            let mut step = BigInt::from(2);
            while ok(&step) {
                lo = step.clone();
                step *= 2;
            }
            step
        }
    };
    // invariant: ok(lo), !ok(hi)
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) / 2;
        if ok(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

// ---------------------------------------------------------------------------
// Surds

/// A real number `a + sum c_i sqrt(b_i)`. Each radicand is stored as the sorted
/// list of its "atoms" (primes, plus possibly one unfactored cofactor); the
/// empty list is the rational part.
#[derive(Clone, Debug)]
pub struct Surd {
    terms: BTreeMap<Vec<BigInt>, Q>,
}

const TRIAL_LIMIT: u64 = 200_000;

fn squarefree_atoms(n: &BigInt) -> (BigInt, Vec<BigInt>) {
    // n = coef^2 * prod(atoms)
    assert!(n.is_positive());
    let mut rest = n.clone();
    let mut coef = BigInt::one();
    let mut atoms = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            e += 1;
        }
        if e > 0 {
            coef *= num_traits::pow(pb.clone(), (e / 2) as usize);
            if e % 2 == 1 {
                atoms.push(pb);
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > BigInt::one() {
        let r = rest.sqrt();
        if &r * &r == rest {
            coef *= r;
        } else {
            atoms.push(rest);
        }
    }
    atoms.sort();
    (coef, atoms)
}

fn merge_atoms(x: &[BigInt], y: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    // sqrt(prod x) * sqrt(prod y) = coef * sqrt(prod out)
    let mut coef = BigInt::one();
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i] < y[j]) {
            out.push(x[i].clone());
            i += 1;
        } else if i == x.len() || y[j] < x[i] {
            out.push(y[j].clone());
            j += 1;
        } else {
            coef *= &x[i];
            i += 1;
            j += 1;
        }
    }
    (coef, out)
}

impl Surd {
    pub fn zero() -> Self {
        Surd { terms: BTreeMap::new() }
    }

    pub fn from_q(x: Q) -> Self {
        let mut s = Surd::zero();
        s.add_term(Vec::new(), x);
        s
    }

    pub fn from_int(n: i64) -> Self {
        Surd::from_q(q(n))
    }

    /// `sqrt(x)` for a nonnegative rational `x`.
    pub fn sqrt(x: &Q) -> Self {
        Surd::scaled_sqrt(&Q::one(), x)
    }

    /// `c * sqrt(x)` for a nonnegative rational `x`.
    pub fn scaled_sqrt(c: &Q, x: &Q) -> Self {
        assert!(!x.is_negative(), "sqrt of a negative rational");
        if x.is_zero() || c.is_zero() {
            return Surd::zero();
        }
        // sqrt(p/q) = sqrt(p*q)/q
        let n = x.numer() * x.denom();
        let (k, atoms) = squarefree_atoms(&n);
        let coef = c * Q::new(k, x.denom().clone());
        let mut s = Surd::zero();
        s.add_term(atoms, coef);
        s
    }

    fn add_term(&mut self, key: Vec<BigInt>, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn rational_part(&self) -> Q {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|k| k.is_empty())
    }

    pub fn as_rational(&self) -> Option<Q> {
        if self.is_rational() {
            Some(self.rational_part())
        } else {
            None
        }
    }

    pub fn scale(&self, k: &Q) -> Surd {
        let mut s = Surd::zero();
        for (key, c) in &self.terms {
            s.add_term(key.clone(), c * k);
        }
        s
    }

    /// Exact sign of the represented real number.
    pub fn signum(&self) -> Ordering {
        // pick the largest atom p and write self = A + sqrt(p) * B
        let pivot = self.terms.keys().flat_map(|k| k.iter()).max().cloned();
        let Some(p) = pivot else {
            return self.rational_part().cmp(&Q::zero());
        };
        let mut a = Surd::zero();
        let mut b = Surd::zero();
        for (key, c) in &self.terms {
            if let Ok(pos) = key.binary_search(&p) {
                let mut k = key.clone();
                k.remove(pos);
                b.add_term(k, c.clone());
            } else {
                a.add_term(key.clone(), c.clone());
            }
        }
        let sa = a.signum();
        let sb = b.signum();
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // opposite signs: sign(A + sqrt(p) B) = sign(A) * sign(A^2 - p B^2)
        let diff = &(&a * &a) - &(&b * &b).scale(&qi(&p));
        match diff.signum() {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn cmp_q(&self, x: &Q) -> Ordering {
        (self - &Surd::from_q(x.clone())).signum()
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(k, c)| {
                let rad: f64 = k.iter().map(|a| a.to_f64().unwrap_or(f64::NAN)).product();
                to_f64(c) * rad.sqrt()
            })
            .sum()
    }

    /// Decimal rendering with 12 digits after the point.
    pub fn decimal(&self) -> String {
        let v = self.to_f64();
        let s = format!("{:.12}", v);
        if s == "-0.000000000000" {
            "0.000000000000".to_string()
        } else {
            s
        }
    }

    /// Exact rendering such as `sqrt(48)`, `3/2`, or `1/2 + sqrt(3)`.
    pub fn exact(&self) -> String {
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (key, c) in &self.terms {
            let neg = c.is_negative();
            if key.is_empty() {
                parts.push((neg, fmt_q(&c.abs())));
            } else {
                let rad: BigInt = key.iter().product();
                let inner = c * c * qi(&rad);
                parts.push((neg, format!("sqrt({})", fmt_q(&inner))));
            }
        }
        if parts.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (neg, body)) in parts.iter().enumerate() {
            if i == 0 {
                if *neg {
                    out.push('-');
                }
            } else {
                out.push_str(if *neg { " - " } else { " + " });
            }
            out.push_str(body);
        }
        out
    }
}

/// Parses the output of [`Surd::exact`]: terms `p/q` or `sqrt(p/q)` joined by
/// ` + ` and ` - `, with an optional leading `-`.
pub fn parse_surd(text: &str) -> Result<Surd, ParseRationalError> {
    let bad = || ParseRationalError(text.to_string());
    let t = text.trim();
    if t.is_empty() {
        return Err(bad());
    }
    let (mut neg, mut rest) = match t.strip_prefix('-') {
        Some(r) => (true, r.trim_start()),
        None => (false, t),
    };
    let mut total = Surd::zero();
    loop {
        let (term, next) = split_term(rest);
        let value = match term.trim().strip_prefix("sqrt(").and_then(|x| x.strip_suffix(')')) {
            Some(inner) => {
                let x = parse_q(inner).map_err(|_| bad())?;
                if x.is_negative() {
                    return Err(bad());
                }
                Surd::sqrt(&x)
            }
            None => Surd::from_q(parse_q(term).map_err(|_| bad())?),
        };
        total = if neg { &total - &value } else { &total + &value };
        match next {
            Some((sign, tail)) => {
                neg = sign;
                rest = tail;
            }
            None => break,
        }
    }
    Ok(total)
}

/// Splits `a + rest` or `a - rest` at the first binary operator.
fn split_term(s: &str) -> (&str, Option<(bool, &str)>) {
    for (i, _) in s.match_indices(' ') {
        let tail = &s[i + 1..];
        if let Some(r) = tail.strip_prefix("+ ") {
            return (&s[..i], Some((false, r)));
        }
        if let Some(r) = tail.strip_prefix("- ") {
            return (&s[..i], Some((true, r)));
        }
    }
    (s, None)
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.exact())
    }
}

impl<'a> Add<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        let mut s = self.clone();
        for (k, c) in &rhs.terms {
            s.add_term(k.clone(), c.clone());
        }
        s
    }
}

impl<'a> Sub<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        let mut s = self.clone();
        for (k, c) in &rhs.terms {
            s.add_term(k.clone(), -c.clone());
        }
        s
    }
}

impl<'a> Mul<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let mut s = Surd::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                let (g, key) = merge_atoms(k1, k2);
                s.add_term(key, c1 * c2 * qi(&g));
            }
        }
        s
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        self.scale(&q(-1))
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, rhs: Surd) -> Surd {
        &self + &rhs
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, rhs: Surd) -> Surd {
        &self - &rhs
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        &self * &rhs
    }
}

impl From<Q> for Surd {
    fn from(x: Q) -> Self {
        Surd::from_q(x)
    }
}

impl PartialEq for Surd {
    fn eq(&self, other: &Self) -> bool {
        (self - other).signum() == Ordering::Equal
    }
}

impl Eq for Surd {}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

/// Largest integer not exceeding a surd.
pub fn surd_floor(x: &Surd) -> BigInt {
    let approx = x.to_f64().floor();
    let mut k = BigInt::from(approx as i64);
    // correct any floating point slack exactly
    while x.cmp_q(&qi(&k)) == Ordering::Less {
        k -= 1;
    }
    while x.cmp_q(&qi(&(&k + 1))) != Ordering::Less {
        k += 1;
    }
    k
}

// ---------------------------------------------------------------------------
// serde helpers: rationals as "p/q" strings or integers

pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let raw = RawRational::deserialize(d)?;
        raw.into_q().map_err(serde::de::Error::custom)
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RawRational {
        Int(i64),
        Text(String),
    }

    impl RawRational {
        pub(crate) fn into_q(self) -> Result<Q, ParseRationalError> {
            match self {
                RawRational::Int(n) => Ok(q(n)),
                RawRational::Text(t) => parse_q(&t),
            }
        }
    }
}

pub mod serde_q_opt {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_str(&fmt_q(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        let raw = Option::<serde_q::RawRational>::deserialize(d)?;
        raw.map(|r| r.into_q()).transpose().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_q("3/7").unwrap(), qr(3, 7));
        assert_eq!(parse_q("-4/6").unwrap(), qr(-2, 3));
        assert_eq!(parse_q("12").unwrap(), q(12));
        assert_eq!(parse_q("0.125").unwrap(), qr(1, 8));
        assert_eq!(parse_q("-1.5").unwrap(), qr(-3, 2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
        assert!(parse_q("").is_err());
        assert!(parse_q("1e3").is_err());
        for text in ["sqrt(48)", "3/2", "1/2 + sqrt(3)", "-2 - sqrt(5/4)", "0"] {
            assert_eq!(parse_surd(text).unwrap().exact(), text);
        }
        assert_eq!(parse_surd("sqrt(48)").unwrap(), Surd::scaled_sqrt(&q(4), &q(3)));
        assert!(parse_surd("sqrt(-1)").is_err());
    }

    #[test]
    fn formats_rationals() {
        assert_eq!(fmt_q(&qr(215, 6)), "215/6");
        assert_eq!(fmt_q(&q(-5)), "-5");
    }

    #[test]
    fn sqrt48_renders_both_ways() {
        let s = Surd::sqrt(&q(48));
        assert_eq!(s.exact(), "sqrt(48)");
        assert_eq!(s.decimal(), "6.928203230276");
        assert_eq!(s.cmp_q(&q(7)), Ordering::Less);
        assert_eq!(s.cmp_q(&q(6)), Ordering::Greater);
        assert!(Surd::sqrt(&q(36)).is_rational());
    }

    #[test]
    fn surd_sign_with_two_radicals() {
        // sqrt(2) + sqrt(3) - sqrt(10) < 0 since 5 + 2 sqrt 6 < 10
        let x = &(&Surd::sqrt(&q(2)) + &Surd::sqrt(&q(3))) - &Surd::sqrt(&q(10));
        assert_eq!(x.signum(), Ordering::Less);
        // sqrt(2) + sqrt(3) - sqrt(5 + 2 sqrt 6) = 0 cannot be written, but
        // (sqrt2 + sqrt3)^2 - 5 = 2 sqrt 6
        let s = &Surd::sqrt(&q(2)) + &Surd::sqrt(&q(3));
        let sq = &(&s * &s) - &Surd::from_int(5);
        assert_eq!(sq, Surd::scaled_sqrt(&q(2), &q(6)));
        // three radicals
        let t = &(&s + &Surd::sqrt(&q(5))) - &Surd::from_q(qr(5382, 1000));
        let approx = 2f64.sqrt() + 3f64.sqrt() + 5f64.sqrt() - 5.382;
        assert_eq!(t.signum(), approx.partial_cmp(&0.0).unwrap());
    }

    #[test]
    fn surd_floor_is_exact() {
        assert_eq!(surd_floor(&Surd::sqrt(&q(48))), BigInt::from(6));
        assert_eq!(surd_floor(&Surd::sqrt(&q(49))), BigInt::from(7));
        assert_eq!(surd_floor(&(-&Surd::sqrt(&q(2)))), BigInt::from(-2));
    }

    #[test]
    fn largest_fraction_matches_brute_force() {
        for (num, den) in [(1i64, 3i64), (7, 10), (2, 15), (1, 1), (3, 2)] {
            let tau = qr(num, den);
            for max_den in [1u64, 5, 17, 60] {
                let got = largest_fraction_with(max_den, |x| x <= &tau);
                let mut best = q(0);
                for d in 1..=max_den as i64 {
                    let p = floor_int(&(&tau * q(d)));
                    let cand = Q::new(p, BigInt::from(d));
                    if cand > best {
                        best = cand;
                    }
                }
                assert_eq!(got, best, "tau={tau} N={max_den}");
            }
        }
        // irrational threshold sqrt(1/200)
        let got = largest_fraction_with(100, |x| x * x <= qr(1, 200));
        let mut best = q(0);
        for d in 1..=100i64 {
            for p in 0..=d {
                let c = qr(p, d);
                if &c * &c <= qr(1, 200) && c > best {
                    best = c;
                }
            }
        }
        assert_eq!(got, best);
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let x = qr(1, 4);
        assert_eq!(sqrt_lower(&x, 3), qr(1, 2));
        assert_eq!(sqrt_upper(&x, 3), qr(1, 2));
        let two = q(2);
        let lo = sqrt_lower(&two, 6);
        let hi = sqrt_upper(&two, 6);
        assert!(&lo * &lo <= two && &hi * &hi >= two && &hi - &lo <= qr(1, 1_000_000));
    }
}
