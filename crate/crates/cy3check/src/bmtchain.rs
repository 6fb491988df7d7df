//! Bogomolov-Gieseker type predicates, the quadratic form `Q^Gamma`, the cycle
//! `Gamma(eps)` and the epsilon certificates linking curves, surfaces and
//! threefolds.

use crate::bnbounds::{BNBound, BoundKind};
use crate::exact::{fmt_q, largest_fraction_with, q, qr, Surd, Q};
use crate::invariants::{twist, ChernThreefold, HDegrees, InvariantsError, Polarisation, ThreefoldGeometry};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Largest denominator allowed for the certified `delta`.
pub const DELTA_MAX_DEN: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BmtError {
    #[error("epsilon = {0} is outside the admissible range")]
    EpsilonOutOfRange(String),
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("no certificate: {0}")]
    NoCertificate(String),
    #[error("a lower bound cannot certify the criterion")]
    LowerBoundGiven,
    #[error(transparent)]
    Invariants(#[from] InvariantsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Inconclusive,
    Fails,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Fails => "fails",
        })
    }
}

/// The piecewise function `f_eps`, even in `x`.
pub fn f_epsilon(x: &Q, eps: &Q) -> Result<Q, BmtError> {
    if !eps.is_positive() || eps >= &qr(1, 3) {
        return Err(BmtError::EpsilonOutOfRange(fmt_q(eps)));
    }
    let x = x.abs();
    let one = Q::one();
    if &x <= eps {
        return Ok(-&x / q(2));
    }
    let knot = q(2) * eps / (&one - eps);
    if x <= knot {
        Ok((&one + eps) / (q(2) * (&one - eps)) * &x - eps / (&one - eps))
    } else {
        Ok(&x * &x / q(2))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BgOutcome {
    Satisfies,
    Violates,
    OutOfRange,
}

/// Tests the strict inequality `ch2.H^{n-2} < -ch1.H^{n-1}/2` for a class whose
/// slope lies in `(0, eps]`. Classes of non-positive rank or outside the slope
/// window are `OutOfRange`.
pub fn bg_predicate<C>(v: &C, eps: &Q, geom: &C::Geometry) -> BgOutcome
where
    C: HDegrees,
    C::Geometry: Polarisation,
{
    if v.rank() <= 0 {
        return BgOutcome::OutOfRange;
    }
    let c1 = v.c1_degree();
    let cap = eps * q(v.rank()) * geom.top_degree();
    if !c1.is_positive() || c1 > &cap {
        return BgOutcome::OutOfRange;
    }
    if v.ch2_degree() < &(-c1 / q(2)) {
        BgOutcome::Satisfies
    } else {
        BgOutcome::Violates
    }
}

/// `Q^Gamma_{b,w}(v)` for a cycle with `Gamma.H = gamma_h`.
pub fn q_form(v: &ChernThreefold, b: &Q, w: &Q, gamma_h: &Q, geom: &ThreefoldGeometry) -> Result<Q, BmtError> {
    if !v.proportional {
        return Err(InvariantsError::NotProportional.into());
    }
    let h3 = geom.h3();
    let t = twist(v, b, geom);
    let r = q(t.r);
    let disc = &t.c1h2 * &t.c1h2 - q(2) * &r * h3 * &t.ch2h;
    let rh = &r * h3;
    let depth = q(2) * w - b * b;
    let first = depth * (disc + q(3) * gamma_h / h3 * &rh * &rh);
    let second = q(2) * &t.ch2h * (q(2) * &t.ch2h - q(3) * gamma_h * &r);
    let gamma_c1 = gamma_h * &t.c1h2 / h3;
    let third = q(6) * &t.c1h2 * (&t.ch3 - gamma_c1);
    Ok(first + second - third)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaCert {
    #[serde(with = "crate::exact::serde_q")]
    pub epsilon: Q,
    #[serde(with = "crate::exact::serde_q")]
    pub gamma: Q,
    #[serde(with = "crate::exact::serde_q", rename = "gammaH")]
    pub gamma_h: Q,
}

/// Smallest admissible `gamma` for a given `eps`, and the degree of
/// `gamma H^2 - td2`.
pub fn gamma_cycle(eps: &Q, geom: &ThreefoldGeometry) -> Result<GammaCert, BmtError> {
    if !eps.is_positive() {
        return Err(BmtError::NonPositive("epsilon"));
    }
    let h3 = geom.h3();
    let td2 = geom.td2h();
    let gamma = std::cmp::max(q(4) / (h3 * eps), &td2 / h3);
    let gamma_h = &gamma * h3 - td2;
    Ok(GammaCert { epsilon: eps.clone(), gamma, gamma_h })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainAudit {
    pub samples: u64,
    pub accepted: u64,
    pub skipped: u64,
    pub failures: Vec<String>,
    #[serde(with = "crate::exact::serde_q")]
    pub point_class_q: Q,
}

impl ChainAudit {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.point_class_q.is_zero()
    }
}

/// Why a sample was left out of the audit, if it was.
pub fn chain_hypotheses(v: &ChernThreefold, eps: &Q, geom: &ThreefoldGeometry) -> Result<(), &'static str> {
    let h3 = geom.h3();
    let (r, x, y) = (q(v.r), &v.c1h2, &v.ch2h);
    if !x.is_positive() {
        return Err("x <= 0");
    }
    if r > x / (h3 * eps) {
        return Err("rank bound");
    }
    if x * x - q(2) * h3 * &r * y < Q::zero() {
        return Err("discriminant");
    }
    let ch3_cap = &r + x / (h3 * eps) - geom.td2h() * x / h3;
    if v.ch3 > ch3_cap {
        return Err("ch3 bound");
    }
    Ok(())
}

/// Walks the displayed chain of lower bounds for `Q^Gamma_{0,0}(v)`. Returns a
/// description of the first broken link, if any.
pub fn check_chain_links(v: &ChernThreefold, eps: &Q, cert: &GammaCert, geom: &ThreefoldGeometry) -> Result<(), String> {
    let h3 = geom.h3();
    let td2 = geom.td2h();
    let gh = &cert.gamma_h;
    let (r, x, y) = (q(v.r), v.c1h2.clone(), v.ch2h.clone());
    let inv = Q::one() / (h3 * eps);
    let x2 = &x * &x;
    let six = q(6);

    let l0 = q_form(v, &Q::zero(), &Q::zero(), gh, geom).map_err(|e| e.to_string())?;
    let direct = q(2) * &y * (q(2) * &y - q(3) * gh * &r) - &six * &x * (&v.ch3 - gh * &x / h3);
    if l0 != direct {
        return Err(format!("q_form {} differs from the expanded form {}", fmt_q(&l0), fmt_q(&direct)));
    }
    let ch3_cap = &r + &x * &inv - &td2 * &x / h3;
    let l1 = q(4) * &y * &y - &six * gh * &r * &y - &six * &x * &ch3_cap + &six * gh * &x2 / h3;
    let l2 = q(4) * &y * &y - q(3) * gh * &x2 / h3 - &six * &x * &ch3_cap + &six * gh * &x2 / h3;
    let l3 = q(4) * &y * &y - q(3) * gh * &x2 / h3 - q(12) * &inv * &x2 + &six * (&td2 + gh) * &x2 / h3;
    let l4 = q(4) * &y * &y + q(3) * &td2 / h3 * &x2 + (q(3) * &cert.gamma - q(12) * &inv) * &x2;
    let links = [(&l0, &l1, "ch3"), (&l1, &l2, "discriminant"), (&l2, &l3, "rank")];
    for (hi, lo, label) in links {
        if hi < lo {
            return Err(format!("{label} step: {} < {} at {v}", fmt_q(hi), fmt_q(lo)));
        }
    }
    if l3 != l4 {
        return Err(format!("regrouping mismatch {} != {} at {v}", fmt_q(&l3), fmt_q(&l4)));
    }
    if l4.is_negative() {
        return Err(format!("final bound {} is negative at {v}", fmt_q(&l4)));
    }
    Ok(())
}

fn rand_fraction(rng: &mut ChaCha8Rng, bound: i64) -> Q {
    let den: i64 = rng.gen_range(1..=24);
    let num: i64 = rng.gen_range(-bound * den..=bound * den);
    qr(num, den)
}

/// Draws sample `index` of the audit stream for `seed`. Each index has its own
/// ChaCha stream, so any partition of the index range sees the same samples.
pub fn chain_sample(seed: u64, index: u64, eps: &Q, geom: &ThreefoldGeometry) -> ChernThreefold {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let h3 = geom.h3();
    let r: i64 = rng.gen_range(-200..=200);
    // x scaled so that the rank bound holds for most draws
    let x_min = q(r.max(1)) * h3 * eps;
    let x = &x_min * (Q::one() + q(rng.gen_range(-1..=3)) / q(4)) + rand_fraction(&mut rng, 2).abs();
    let y = if r > 0 {
        let y_cap = &x * &x / (q(2) * h3 * q(r));
        y_cap * (Q::one() - rand_fraction(&mut rng, 1))
    } else {
        rand_fraction(&mut rng, 50)
    };
    let ch3_cap = q(r) + &x / (h3 * eps) - geom.td2h() * &x / h3;
    let ch3 = ch3_cap - rand_fraction(&mut rng, 20);
    ChernThreefold::new(r, x, y, ch3)
}

/// Randomised audit of the lower-bound chain for `Q^{Gamma(eps)}_{0,0}`.
pub fn verify_ch2_chain(samples: u64, eps: &Q, geom: &ThreefoldGeometry, seed: u64) -> Result<ChainAudit, BmtError> {
    let cert = gamma_cycle(eps, geom)?;
    let point = ChernThreefold::new(0, Q::zero(), Q::zero(), Q::one());
    let point_class_q = q_form(&point, &Q::zero(), &Q::zero(), &cert.gamma_h, geom)?;
    let mut audit = ChainAudit { samples, accepted: 0, skipped: 0, failures: Vec::new(), point_class_q };
    for index in 0..samples {
        let v = chain_sample(seed, index, eps, geom);
        audit_one(&mut audit, &v, eps, &cert, geom);
    }
    Ok(audit)
}

/// Adds one class to an audit, filtering on the chain hypotheses.
pub fn audit_one(audit: &mut ChainAudit, v: &ChernThreefold, eps: &Q, cert: &GammaCert, geom: &ThreefoldGeometry) {
    if chain_hypotheses(v, eps, geom).is_err() {
        audit.skipped += 1;
        return;
    }
    audit.accepted += 1;
    if let Err(msg) = check_chain_links(v, eps, cert, geom) {
        audit.failures.push(msg);
    }
}

pub fn epsilon_from_delta(delta: &Q) -> Result<Q, BmtError> {
    if !delta.is_positive() {
        return Err(BmtError::NonPositive("delta"));
    }
    Ok(delta / (q(2) + q(3) * delta))
}

pub fn delta_from_epsilon(eps: &Q) -> Result<Q, BmtError> {
    if !eps.is_positive() || eps >= &qr(1, 3) {
        return Err(BmtError::EpsilonOutOfRange(fmt_q(eps)));
    }
    Ok(q(2) * eps / (Q::one() - q(3) * eps))
}

/// The data `(A, chi, H^2, n, delta, epsilon)` for one reduction step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonCert {
    pub a: Surd,
    pub chi: Q,
    pub m: Q,
    pub g: i64,
    pub smooth: bool,
    pub n: Option<i64>,
    pub delta: Q,
    pub epsilon: Q,
}

fn smooth_margin(a: &Surd, chi: &Q, n: i64) -> Surd {
    // A - chi + 1/n^2, negative when n is admissible
    a + &Surd::from_q(qr(1, n * n) - chi)
}

fn smooth_ok(delta: &Q, margin: &Surd, m: &Q, n: i64) -> bool {
    let nn = q(n * n);
    let lattice_cap = delta * delta * q(2) * m * m * nn <= Q::one();
    let poly = margin.scale(&(Q::one() / (q(2) * m))) + Surd::from_q(delta * delta / q(2) + delta / q(2));
    lattice_cap && poly.signum() != Ordering::Greater
}

fn singular_ok(delta: &Q, a: &Surd, chi: &Q, m: &Q, g: i64) -> bool {
    if delta * m > q(2 * g - 2) {
        return false;
    }
    let lhs = a.scale(&(Q::one() / m)) + Surd::from_q(q(3) * delta / q(2) + (Q::one() - chi) / m);
    lhs.signum() != Ordering::Greater
}

impl EpsilonCert {
    /// Re-checks every recorded condition from scratch.
    pub fn validate(&self) -> Result<(), String> {
        if !self.delta.is_positive() {
            return Err("delta must be positive".into());
        }
        if self.epsilon != &self.delta / (q(2) + q(3) * &self.delta) {
            return Err("epsilon does not match delta".into());
        }
        if self.smooth {
            let n = self.n.ok_or("smooth certificate without n")?;
            if n < 2 {
                return Err("n must be at least 2".into());
            }
            let margin = smooth_margin(&self.a, &self.chi, n);
            if margin.signum() != Ordering::Less {
                return Err(format!("A is not below chi - 1/{}", n * n));
            }
            if !smooth_ok(&self.delta, &margin, &self.m, n) {
                return Err("delta violates the smooth conditions".into());
            }
        } else {
            let gap = &self.a + &Surd::from_q(Q::one() - &self.chi);
            if gap.signum() != Ordering::Less {
                return Err("A is not below chi - 1".into());
            }
            if !singular_ok(&self.delta, &self.a, &self.chi, &self.m, self.g) {
                return Err("delta violates the singular conditions".into());
            }
        }
        Ok(())
    }
}

/// Builds a certificate for a surface `S` in `|H|` with `H^2 = m`, whose curves
/// in `|H|` have genus `g` and BN number at most `a`.
pub fn epsilon_for_surface(a: &Surd, chi: &Q, m: &Q, g: i64, smooth: bool) -> Result<EpsilonCert, BmtError> {
    if !m.is_positive() {
        return Err(BmtError::NonPositive("H^2"));
    }
    let (n, delta) = if smooth {
        if (a + &Surd::from_q(-chi)).signum() != Ordering::Less {
            return Err(BmtError::NoCertificate(format!("A = {a} is not below chi = {}", fmt_q(chi))));
        }
        let mut n = 2i64;
        while smooth_margin(a, chi, n).signum() != Ordering::Less {
            n += 1;
            if n > 1_000_000 {
                return Err(BmtError::NoCertificate("A is too close to chi".into()));
            }
        }
        let margin = smooth_margin(a, chi, n);
        let delta = largest_fraction_with(DELTA_MAX_DEN, |d| smooth_ok(d, &margin, m, n));
        (Some(n), delta)
    } else {
        if (a + &Surd::from_q(Q::one() - chi)).signum() != Ordering::Less {
            return Err(BmtError::NoCertificate(format!("A = {a} is not below chi - 1 = {}", fmt_q(&(chi - Q::one())))));
        }
        if g < 2 {
            return Err(BmtError::NoCertificate(format!("genus {g} leaves no room for delta")));
        }
        let delta = largest_fraction_with(DELTA_MAX_DEN, |d| singular_ok(d, a, chi, m, g));
        (None, delta)
    };
    if !delta.is_positive() {
        return Err(BmtError::NoCertificate("no positive delta with denominator <= 10000".into()));
    }
    let epsilon = epsilon_from_delta(&delta)?;
    let cert = EpsilonCert { a: a.clone(), chi: chi.clone(), m: m.clone(), g, smooth, n, delta, epsilon };
    cert.validate().map_err(BmtError::NoCertificate)?;
    Ok(cert)
}

/// `bn < chi` for smooth curves, `bn < chi - 1` otherwise.
pub fn check_main_criterion(bn: &BNBound, chi: &Q, smooth: bool) -> Result<Verdict, BmtError> {
    if bn.kind == BoundKind::Lower {
        return Err(BmtError::LowerBoundGiven);
    }
    let threshold = if smooth { chi.clone() } else { chi - Q::one() };
    Ok(if bn.value.cmp_q(&threshold) == Ordering::Less {
        Verdict::Holds
    } else {
        Verdict::Inconclusive
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bnbounds::BoundSource;
    use crate::invariants::{ChernSurface, SurfaceGeometry, SurfaceKind};

    fn quintic() -> ThreefoldGeometry {
        ThreefoldGeometry::new("quintic", q(5), q(50)).unwrap()
    }

    #[test]
    fn f_eps_branches() {
        let e = qr(1, 10);
        assert_eq!(f_epsilon(&qr(1, 20), &e).unwrap(), qr(-1, 40));
        assert_eq!(f_epsilon(&qr(2, 9), &e).unwrap(), qr(2, 81));
        assert_eq!(f_epsilon(&qr(-2, 9), &e).unwrap(), qr(2, 81));
        // continuity at eps
        let mid = (Q::one() + &e) / (q(2) * (Q::one() - &e)) * &e - &e / (Q::one() - &e);
        assert_eq!(mid, -&e / q(2));
        assert!(f_epsilon(&Q::one(), &qr(1, 3)).is_err());
        assert!(f_epsilon(&Q::one(), &Q::zero()).is_err());
    }

    #[test]
    fn bg_examples() {
        let g = quintic();
        let e = qr(1, 5);
        let v = ChernThreefold::new(2, q(1), q(-1), q(0));
        assert_eq!(bg_predicate(&v, &e, &g), BgOutcome::Satisfies);
        let v = ChernThreefold::new(2, q(1), qr(-1, 2), q(0));
        assert_eq!(bg_predicate(&v, &e, &g), BgOutcome::Violates);
        let v = ChernThreefold::new(1, q(3), q(0), q(0));
        assert_eq!(bg_predicate(&v, &e, &g), BgOutcome::OutOfRange);
        let s = SurfaceGeometry::new(SurfaceKind::Canonical, q(5), true).unwrap();
        let v = ChernSurface::new(3, q(1), q(-1));
        assert_eq!(bg_predicate(&v, &e, &s), BgOutcome::Satisfies);
    }

    #[test]
    fn quadratic_form() {
        let g = quintic();
        let v = ChernThreefold::new(1, q(0), q(0), q(0));
        assert_eq!(q_form(&v, &q(0), &q(1), &q(1), &g).unwrap(), q(30));
        let p = ChernThreefold::new(0, q(0), q(0), q(1));
        assert_eq!(q_form(&p, &qr(1, 3), &q(7), &q(2), &g).unwrap(), q(0));
        let v = ChernThreefold::new(1, q(0), q(0), q(0)).with_proportional(false);
        assert!(q_form(&v, &q(0), &q(1), &q(1), &g).is_err());
    }

    #[test]
    fn gamma_examples() {
        let g = quintic();
        let c = gamma_cycle(&qr(1, 10), &g).unwrap();
        assert_eq!((c.gamma, c.gamma_h), (q(8), qr(215, 6)));
        let c = gamma_cycle(&q(100), &g).unwrap();
        assert_eq!((c.gamma, c.gamma_h), (qr(5, 6), q(0)));
        assert!(gamma_cycle(&q(0), &g).is_err());
    }

    #[test]
    fn chain_audit_small() {
        let g = quintic();
        let a = verify_ch2_chain(2000, &qr(1, 10), &g, 7).unwrap();
        assert!(a.passed(), "{:?}", a.failures);
        assert!(a.accepted > 300, "accepted {}", a.accepted);
        // a class breaking the discriminant hypothesis is skipped
        let cert = gamma_cycle(&qr(1, 10), &g).unwrap();
        let mut audit = a.clone();
        let bad = ChernThreefold::new(1, q(1), q(10), q(0));
        audit_one(&mut audit, &bad, &qr(1, 10), &cert, &g);
        assert_eq!(audit.skipped, a.skipped + 1);
    }

    #[test]
    fn delta_epsilon() {
        assert_eq!(epsilon_from_delta(&q(1)).unwrap(), qr(1, 5));
        assert_eq!(epsilon_from_delta(&qr(3, 7)).unwrap(), qr(3, 23));
        assert_eq!(delta_from_epsilon(&qr(3, 23)).unwrap(), qr(3, 7));
        assert!(epsilon_from_delta(&q(0)).is_err());
    }

    #[test]
    fn certificates() {
        let c = epsilon_for_surface(&Surd::from_int(3), &q(5), &q(5), 6, false).unwrap();
        assert_eq!((c.delta.clone(), c.epsilon.clone()), (qr(2, 15), qr(1, 18)));
        let c = epsilon_for_surface(&Surd::from_int(3), &q(5), &q(5), 6, true).unwrap();
        assert_eq!(c.n, Some(2));
        assert!(&c.delta * &c.delta * q(200) <= q(1));
        assert!(c.delta >= qr(7, 100));
        assert!(epsilon_for_surface(&Surd::from_int(5), &q(5), &q(5), 6, true).is_err());
    }

    #[test]
    fn main_criterion() {
        let b = BNBound::new(Surd::sqrt(&q(48)), BoundSource::K3Wall, BoundKind::Upper);
        assert_eq!(check_main_criterion(&b, &q(8), true).unwrap(), Verdict::Holds);
        let b = BNBound::new(Surd::from_int(7), BoundSource::K3Wall, BoundKind::Exact);
        assert_eq!(check_main_criterion(&b, &q(7), true).unwrap(), Verdict::Inconclusive);
        let b = BNBound::new(Surd::from_int(3), BoundSource::WeakBound, BoundKind::Lower);
        assert!(check_main_criterion(&b, &q(7), true).is_err());
    }
}
