//! Upper and lower bounds on the Brill-Noether number of a curve, including
//! the wall-crossing bounds for curves on del Pezzo and K3 surfaces.

use crate::exact::{fmt_q, floor_int, q, qr, Surd, Q};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BnError {
    #[error("genus {g} is below the minimum {min} for this bound")]
    GenusTooSmall { g: i64, min: i64 },
    #[error("the function is undefined at ({0}, {1})")]
    OutsideDomain(String, String),
    #[error("points O, P, Q do not span a triangle of the expected shape")]
    DegenerateTriangle,
    #[error("s = {0} has the wrong parity for this surface")]
    Parity(i64),
    #[error("inconsistent curve profile: {0}")]
    InconsistentProfile(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundSource {
    WeakBound,
    CliffordBound,
    VeryGeneral,
    DelPezzoWall,
    K3Wall,
    GonalityLower,
    HyperellipticExact,
    PlanarExact,
    BiellipticExact,
    SectionLower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundKind {
    Upper,
    Lower,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BNBound {
    pub value: Surd,
    pub source: BoundSource,
    pub kind: BoundKind,
}

impl BNBound {
    pub fn new(value: impl Into<Surd>, source: BoundSource, kind: BoundKind) -> Self {
        BNBound { value: value.into(), source, kind }
    }

    fn upper(value: impl Into<Surd>, source: BoundSource) -> Self {
        BNBound::new(value, source, BoundKind::Upper)
    }
}

impl fmt::Display for BNBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({:?}, {:?})", self.value, self.source, self.kind)
    }
}

/// A point `(ch2, ch1.H)` of a path in the upper half plane.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathPoint {
    pub x: Q,
    pub y: Q,
}

impl PathPoint {
    pub fn new(x: Q, y: Q) -> Self {
        PathPoint { x, y }
    }

    pub fn origin() -> Self {
        PathPoint::new(Q::zero(), Q::zero())
    }

    fn minus(&self, o: &PathPoint) -> PathPoint {
        PathPoint::new(&self.x - &o.x, &self.y - &o.y)
    }

    fn ratio(&self) -> Q {
        &self.x / &self.y
    }
}

impl fmt::Display for PathPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_q(&self.x), fmt_q(&self.y))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpecialCurve {
    Hyperelliptic,
    PlanarOdd(i64),
    Bielliptic,
    DoubleCoverOf(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveProfile {
    pub g: i64,
    pub gonality: Option<i64>,
    pub clifford_lb: Option<i64>,
    pub special: Option<SpecialCurve>,
}

impl CurveProfile {
    pub fn new(g: i64) -> Self {
        CurveProfile { g, gonality: None, clifford_lb: None, special: None }
    }
}

/// `x/2 + 1`
pub fn weak_bound(x: &Q) -> BNBound {
    BNBound::upper(x / q(2) + q(1), BoundSource::WeakBound)
}

/// `(g-1)/2 + 1 - min(cliff, 2)/2`
pub fn clifford_bound(g: i64, cliff: i64) -> Result<BNBound, BnError> {
    if g < 4 {
        return Err(BnError::GenusTooSmall { g, min: 4 });
    }
    if cliff < 0 {
        return Err(BnError::InvalidArgument(format!("Clifford index {cliff} is negative")));
    }
    let c = cliff.min(2);
    Ok(BNBound::upper(qr(g - 1, 2) + q(1) - qr(c, 2), BoundSource::CliffordBound))
}

/// `g/4 + 1 + 1/g`, valid for very general curves.
pub fn very_general_bound(g: i64) -> Result<BNBound, BnError> {
    if g < 2 {
        return Err(BnError::GenusTooSmall { g, min: 2 });
    }
    Ok(BNBound::upper(qr(g, 4) + q(1) + qr(1, g), BoundSource::VeryGeneral))
}

/// Whether `g <= g1 d1 + g2 d2 + (d1-1)(d2-1)`.
pub fn castelnuovo_severi(g: i64, g1: i64, d1: i64, g2: i64, d2: i64) -> bool {
    g <= g1 * d1 + g2 * d2 + (d1 - 1) * (d2 - 1)
}

fn check_profile(p: &CurveProfile) -> Result<(), BnError> {
    let bad = |msg: String| Err(BnError::InconsistentProfile(msg));
    if p.g < 1 {
        return bad(format!("genus {} < 1", p.g));
    }
    if let Some(k) = p.gonality {
        let top = (p.g + 3) / 2;
        if k < 2 || k > top {
            return bad(format!("gonality {k} outside [2, {top}] for genus {}", p.g));
        }
    }
    if let Some(c) = p.clifford_lb {
        if c < 0 {
            return bad(format!("negative Clifford index {c}"));
        }
    }
    match &p.special {
        Some(SpecialCurve::Hyperelliptic) => {
            if p.gonality.is_some_and(|k| k != 2) {
                return bad("hyperelliptic curves have gonality 2".into());
            }
            if p.clifford_lb.is_some_and(|c| c > 0) {
                return bad("hyperelliptic curves have Clifford index 0".into());
            }
        }
        Some(SpecialCurve::PlanarOdd(d)) => {
            if *d < 1 || d % 2 == 0 {
                return bad(format!("planar degree {d} is not odd"));
            }
            if p.g != (d - 1) * (d - 2) / 2 {
                return bad(format!("a planar curve of degree {d} has genus {}", (d - 1) * (d - 2) / 2));
            }
        }
        Some(SpecialCurve::Bielliptic) => {
            if p.g < 4 {
                return bad("bielliptic formula needs genus at least 4".into());
            }
            if p.gonality.is_some_and(|k| k < 4) || p.clifford_lb.is_some_and(|c| c < 2) {
                return bad("bielliptic formula needs a curve that is neither hyperelliptic nor trigonal".into());
            }
        }
        Some(SpecialCurve::DoubleCoverOf(g1)) if *g1 < 0 || 2 * g1 > p.g + 1 => {
            return bad(format!("a double cover of genus {} cannot cover genus {g1}", p.g));
        }
        Some(SpecialCurve::DoubleCoverOf(_)) | None => {}
    }
    Ok(())
}

/// All lower bounds and exact values that apply to the profile; `chi_oh` is
/// `χ(O_X(H))` when the curve sits in a surface section of a threefold.
pub fn bn_lower(profile: &CurveProfile, chi_oh: Option<&Q>) -> Result<Vec<BNBound>, BnError> {
    check_profile(profile)?;
    let g = profile.g;
    let mut out = Vec::new();
    if let Some(k) = profile.gonality {
        out.push(BNBound::new(q((g - 1) / k + 1), BoundSource::GonalityLower, BoundKind::Lower));
    }
    match &profile.special {
        Some(SpecialCurve::Hyperelliptic) => {
            if profile.gonality.is_none() {
                out.push(BNBound::new(q((g - 1) / 2 + 1), BoundSource::GonalityLower, BoundKind::Lower));
            }
            out.push(BNBound::new(q((g - 1) / 2 + 1), BoundSource::HyperellipticExact, BoundKind::Exact));
        }
        Some(SpecialCurve::PlanarOdd(d)) => {
            out.push(BNBound::new(qr(d * d - 1, 8), BoundSource::PlanarExact, BoundKind::Exact));
        }
        Some(SpecialCurve::Bielliptic) => {
            out.push(BNBound::new(qr(g - 1, 2), BoundSource::BiellipticExact, BoundKind::Exact));
        }
        Some(SpecialCurve::DoubleCoverOf(_)) | None => {}
    }
    if let Some(chi) = chi_oh {
        out.push(BNBound::new(chi - q(2), BoundSource::SectionLower, BoundKind::Lower));
    }
    Ok(out)
}

/// The upper bounds valid for every curve with this profile.
pub fn classical_upper_bounds(profile: &CurveProfile) -> Result<Vec<BNBound>, BnError> {
    check_profile(profile)?;
    let g = profile.g;
    let mut out = vec![weak_bound(&q(g - 1))];
    let cliff = match profile.special {
        Some(SpecialCurve::Hyperelliptic) => Some(0),
        Some(SpecialCurve::Bielliptic) => Some(profile.clifford_lb.unwrap_or(2).max(2)),
        Some(SpecialCurve::PlanarOdd(d)) if d >= 5 => Some(profile.clifford_lb.unwrap_or(d - 4)),
        _ => profile.clifford_lb,
    };
    if let (Some(c), true) = (cliff, g >= 4) {
        out.push(clifford_bound(g, c)?);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Del Pezzo surfaces

/// The piecewise linear bound on `h0/rk` for BN-semistable objects on a del
/// Pezzo surface, evaluated on the vector `(x, y) = (ch2, ch1.H)`.
pub fn psi_dp(x: &Q, y: &Q, m: &Q) -> Result<Q, BnError> {
    if y.is_negative() || (y.is_zero() && x.is_positive()) {
        return Err(BnError::OutsideDomain(fmt_q(x), fmt_q(y)));
    }
    if y.is_zero() {
        return Ok(Q::zero());
    }
    let ratio = x / y;
    if ratio > qr(-1, 2) {
        return Ok(y / q(2) + x);
    }
    let twice = -(ratio * q(2));
    if twice.is_integer() {
        let n = twice;
        return Ok(y / (m * n));
    }
    let n = Q::from_integer(floor_int(&twice));
    let den = (&n * &n + &n) * m + q(2);
    Ok((q(2) * &n + q(1)) / &den * y + q(2) / den * x)
}

/// `Ω(x, y) = x/2 + sqrt(x^2 + (2m+4)/m^2 y^2)/2`
pub fn omega_k3(x: &Q, y: &Q, m: &Q) -> Surd {
    let inner = x * x + (q(2) * m + q(4)) / (m * m) * y * y;
    &Surd::from_q(x / q(2)) + &Surd::sqrt(&inner).scale(&qr(1, 2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathScore<'a> {
    PsiDP(&'a Q),
    OmegaK3(&'a Q),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathOptimum {
    pub value: Surd,
    pub path: Vec<PathPoint>,
}

/// Line `a x + b y = c`.
#[derive(Debug, Clone)]
struct Line2 {
    a: Q,
    b: Q,
    c: Q,
}

impl Line2 {
    fn through(p: &PathPoint, dir: &PathPoint) -> Self {
        // normal (dir.y, -dir.x)
        let a = dir.y.clone();
        let b = -dir.x.clone();
        let c = &a * &p.x + &b * &p.y;
        Line2 { a, b, c }
    }

    fn meet(&self, o: &Line2) -> Option<PathPoint> {
        let det = &self.a * &o.b - &self.b * &o.a;
        if det.is_zero() {
            return None;
        }
        let x = (&self.c * &o.b - &self.b * &o.c) / &det;
        let y = (&self.a * &o.c - &self.c * &o.a) / &det;
        Some(PathPoint::new(x, y))
    }
}

fn cross(a: &PathPoint, b: &PathPoint) -> Q {
    &a.x * &b.y - &a.y * &b.x
}

/// Barycentric membership in the closed triangle O, Q, P.
fn in_triangle(p1: &PathPoint, qv: &PathPoint, pv: &PathPoint) -> bool {
    let det = cross(qv, pv);
    let alpha = cross(p1, pv) / &det;
    let beta = cross(qv, p1) / &det;
    !alpha.is_negative() && !beta.is_negative() && alpha + beta <= Q::one()
}

/// Integers `n >= 1` with `-n/2` in `[lo, hi]`.
fn half_integer_slopes(lo: &Q, hi: &Q) -> Vec<i64> {
    let n_min = (-(hi * q(2))).ceil().to_integer();
    let n_max = (-(lo * q(2))).floor().to_integer();
    let n_min: i64 = n_min.try_into().unwrap_or(i64::MAX).max(1);
    let n_max: i64 = n_max.try_into().unwrap_or(0);
    (n_min..=n_max).collect()
}

fn check_triangle(pv: &PathPoint, qv: &PathPoint) -> Result<(), BnError> {
    if !qv.y.is_positive() || pv.y <= qv.y || pv.ratio() >= qv.ratio() {
        return Err(BnError::DegenerateTriangle);
    }
    Ok(())
}

fn psi_path(points: &[PathPoint], m: &Q) -> Result<Q, BnError> {
    let mut total = Q::zero();
    for w in points.windows(2) {
        let d = w[1].minus(&w[0]);
        total += psi_dp(&d.x, &d.y, m)?;
    }
    Ok(total)
}

/// Maximum of the path score over convex paths `O -> P1 -> P` with `P1` in the
/// triangle `OQP` (which also covers the one-segment path `O -> P`).
pub fn convex_path_max(pv: &PathPoint, qv: &PathPoint, score: PathScore<'_>) -> Result<PathOptimum, BnError> {
    check_triangle(pv, qv)?;
    let o = PathPoint::origin();
    match score {
        PathScore::OmegaK3(m) => {
            let pq = pv.minus(qv);
            let n1 = Surd::sqrt(&(&qv.x * &qv.x + (q(2) * m + q(4)) / (m * m) * &qv.y * &qv.y));
            let n2 = Surd::sqrt(&(&pq.x * &pq.x + (q(2) * m + q(4)) / (m * m) * &pq.y * &pq.y));
            let value = &Surd::from_q(&pv.x / q(2)) + &(&n1 + &n2).scale(&qr(1, 2));
            Ok(PathOptimum { value, path: vec![o, qv.clone(), pv.clone()] })
        }
        PathScore::PsiDP(m) => {
            let mut lines = vec![
                Line2::through(&o, qv),
                Line2::through(&o, pv),
                Line2::through(qv, &pv.minus(qv)),
            ];
            for n in half_integer_slopes(&pv.ratio(), &qv.ratio()) {
                lines.push(Line2::through(&o, &PathPoint::new(qr(-n, 2), q(1))));
            }
            let back = pv.minus(qv);
            for n in half_integer_slopes(&back.ratio(), &pv.ratio()) {
                lines.push(Line2::through(pv, &PathPoint::new(qr(-n, 2), q(1))));
            }
            let mut candidates = vec![o.clone(), qv.clone(), pv.clone()];
            for (i, l1) in lines.iter().enumerate() {
                for l2 in &lines[i + 1..] {
                    if let Some(p1) = l1.meet(l2) {
                        if in_triangle(&p1, qv, pv) {
                            candidates.push(p1);
                        }
                    }
                }
            }
            candidates.sort();
            candidates.dedup();
            let mut best: Option<(Q, Vec<PathPoint>)> = None;
            for p1 in candidates {
                let path = if p1 == o || &p1 == pv {
                    vec![o.clone(), pv.clone()]
                } else {
                    vec![o.clone(), p1, pv.clone()]
                };
                let v = psi_path(&path, m)?;
                if best.as_ref().is_none_or(|(b, _)| &v > b) {
                    best = Some((v, path));
                }
            }
            let (value, path) = best.expect("candidate set contains the triangle vertices");
            Ok(PathOptimum { value: Surd::from_q(value), path })
        }
    }
}

/// `P` and `Q` for a rank `r`, degree `d` sheaf on a curve in `|sH|` on a del
/// Pezzo surface with `H^2 = m`.
pub fn dp_path_triangle(s: i64, m: &Q, r: i64, d: &Q) -> (PathPoint, PathPoint) {
    let (sq, rq) = (q(s), q(r));
    let p = PathPoint::new(d - &sq * &sq * &rq * m / q(2), &rq * &sq * m);
    let qv = PathPoint::new(
        d - (q(3) * &sq + q(1)) * (&sq - q(1)) * &rq * m / q(8),
        (&sq - q(1)) * &rq * m / q(2),
    );
    (p, qv)
}

/// `P` and `Q` for the K3 case.
pub fn k3_path_triangle(s: i64, m: &Q, r: i64, d: &Q) -> (PathPoint, PathPoint) {
    let (sq, rq) = (q(s), q(r));
    let p = PathPoint::new(d - &sq * &sq * &rq * m / q(2), &rq * &sq * m);
    let qv = PathPoint::new(d - q(3) * &sq * &sq * &rq * m / q(8), &rq * &sq * m / q(2));
    (p, qv)
}

/// The auxiliary function of the del Pezzo argument; `s m f(n)` is the bound
/// from paths whose second segment has slope `-n/2` and whose corner lies on `OQ`.
pub fn dp_f(s: i64, m: &Q, n: i64) -> Q {
    let (sq, nq) = (q(s), q(n));
    let den = q(2) * &nq + &sq - q(1);
    (&sq + q(1)) / q(4) * (q(1) - (&sq + q(1)) / &den) + (&sq + q(1)) / (m * &nq * &den)
}

/// Whether `n -> f(n)` is non-decreasing on the integers `2..=(s+1)/2`.
pub fn dp_f_monotone(s: i64, m: &Q) -> bool {
    let top = (s + 1) / 2;
    (2..top).all(|n| dp_f(s, m, n) <= dp_f(s, m, n + 1))
}

/// `max{1 + (s^2-1) m / 8, s}` for odd `s`.
pub fn bn_upper_delpezzo(s: i64, m: &Q) -> Result<BNBound, BnError> {
    if s < 1 || s % 2 == 0 {
        return Err(BnError::Parity(s));
    }
    if !m.is_positive() {
        return Err(BnError::InvalidArgument(format!("H^2 = {} is not positive", fmt_q(m))));
    }
    if !dp_f_monotone(s, m) {
        return Err(BnError::InvalidArgument(format!("f is not monotone for s = {s}, m = {}", fmt_q(m))));
    }
    let a = q(1) + q(s * s - 1) * m / q(8);
    let value = if a >= q(s) { a } else { q(s) };
    Ok(BNBound::upper(value, BoundSource::DelPezzoWall))
}

/// `(s/8) sqrt((2m+8)^2 + (s^2-4) m^2)` for even `s`.
pub fn bn_upper_k3(s: i64, m: &Q) -> Result<BNBound, BnError> {
    if s < 2 || s % 2 == 1 {
        return Err(BnError::Parity(s));
    }
    if !m.is_positive() {
        return Err(BnError::InvalidArgument(format!("H^2 = {} is not positive", fmt_q(m))));
    }
    let inner = (q(2) * m + q(8)) * (q(2) * m + q(8)) + q(s * s - 4) * m * m;
    Ok(BNBound::upper(Surd::scaled_sqrt(&qr(s, 8), &inner), BoundSource::K3Wall))
}
