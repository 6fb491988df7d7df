//! Lines, boundary curves and numerical walls in the `(b, w)` half-plane.

use crate::exact::{ceil_int, floor_int, q, q_abs, q_max, q_min, qr, sqrt_exact, sqrt_lower, sqrt_upper, Surd, Q};
use crate::invariants::{delta_h, ChernSurface, CurveClass, InvariantsError, SurfaceGeometry, SurfaceKind};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Default for the hard limit on visited lattice points in [`enumerate_walls`].
pub const DEFAULT_CAP: u64 = 20_000_000;

/// Environment variable overriding the enumeration cap.
pub const CAP_ENV: &str = "CY3CHECK_CAP";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TiltError {
    #[error("classes are numerically proportional, so they define no wall")]
    Proportional,
    #[error("class {0} has vanishing rank and c1 degree")]
    DegenerateClass(String),
    #[error("line does not meet the boundary curve")]
    NoIntersection,
    #[error("line is tangent to the boundary curve")]
    Tangent,
    #[error("line meets the region above the boundary curve in several pieces, none containing b = 0")]
    Ambiguous,
    #[error("operation needs a non-vertical line")]
    NotALine,
    #[error("s = {s} is not covered for {kind} surfaces")]
    Parity { kind: &'static str, s: u32 },
    #[error("window [{0}, {1}) is empty")]
    EmptyWindow(String, String),
    #[error("window depth must be positive")]
    NonPositiveDepth,
    #[error("class has negative discriminant")]
    NegativeDiscriminant,
    #[error("lattice search would visit more than {0} points (raise {CAP_ENV} to continue)")]
    CapExceeded(u64),
    #[error(transparent)]
    Invariants(#[from] InvariantsError),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TiltPoint {
    pub b: Q,
    pub w: Q,
}

impl TiltPoint {
    pub fn new(b: Q, w: Q) -> Self {
        TiltPoint { b, w }
    }

    pub fn in_u(&self) -> bool {
        &self.w * q(2) > &self.b * &self.b
    }
}

/// `(mu, ch2/(r m))` for classes of nonzero rank.
pub fn projection(v: &ChernSurface, geom: &SurfaceGeometry) -> Option<TiltPoint> {
    if v.r == 0 {
        return None;
    }
    let rm = q(v.r) * geom.m();
    Some(TiltPoint::new(&v.c1h / &rm, &v.ch2 / &rm))
}

/// A line in the `(b, w)` plane in canonical form, so that derived equality is
/// equality of point sets. `Direction` carries only a slope: it records the
/// common direction of the walls of a torsion class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WallLine {
    /// `w = slope * b + intercept`
    Sloped { slope: Q, intercept: Q },
    Vertical { b: Q },
    Direction { slope: Q },
}

impl WallLine {
    pub fn through(p: &TiltPoint, slope: Q) -> Self {
        let intercept = &p.w - &slope * &p.b;
        WallLine::Sloped { slope, intercept }
    }

    pub fn slope(&self) -> Option<&Q> {
        match self {
            WallLine::Sloped { slope, .. } | WallLine::Direction { slope } => Some(slope),
            WallLine::Vertical { .. } => None,
        }
    }

    /// A canonical point on the line: its crossing with `b = 0`, or with
    /// `w = 0` for vertical lines.
    pub fn anchor(&self) -> Option<TiltPoint> {
        match self {
            WallLine::Sloped { intercept, .. } => Some(TiltPoint::new(Q::zero(), intercept.clone())),
            WallLine::Vertical { b } => Some(TiltPoint::new(b.clone(), Q::zero())),
            WallLine::Direction { .. } => None,
        }
    }

    pub fn contains(&self, p: &TiltPoint) -> bool {
        match self {
            WallLine::Sloped { slope, intercept } => p.w == slope * &p.b + intercept,
            WallLine::Vertical { b } => &p.b == b,
            WallLine::Direction { .. } => false,
        }
    }

    /// `w` at `b` for sloped lines.
    pub fn at(&self, b: &Q) -> Option<Q> {
        match self {
            WallLine::Sloped { slope, intercept } => Some(slope * b + intercept),
            _ => None,
        }
    }
}

impl fmt::Display for WallLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::exact::fmt_q;
        match self {
            WallLine::Sloped { slope, intercept } => {
                write!(f, "w = {}*b + {}", fmt_q(slope), fmt_q(intercept))
            }
            WallLine::Vertical { b } => write!(f, "b = {}", fmt_q(b)),
            WallLine::Direction { slope } => write!(f, "direction {}", fmt_q(slope)),
        }
    }
}

/// The numerical wall `nu_{b,w}(u) = nu_{b,w}(v)`.
pub fn wall_through(v: &ChernSurface, u: &ChernSurface, geom: &SurfaceGeometry) -> Result<WallLine, TiltError> {
    let m = geom.m();
    let (rv, ru) = (q(v.r), q(u.r));
    // k0 + kb*b + kw*w = 0
    let k0 = &u.ch2 * &v.c1h - &v.ch2 * &u.c1h;
    let kb = m * (&v.ch2 * &ru - &u.ch2 * &rv);
    let kw = m * (&rv * &u.c1h - &ru * &v.c1h);
    if !kw.is_zero() {
        return Ok(WallLine::Sloped { slope: -&kb / &kw, intercept: -&k0 / &kw });
    }
    if !kb.is_zero() {
        return Ok(WallLine::Vertical { b: -&k0 / &kb });
    }
    if k0.is_zero() {
        return Err(TiltError::Proportional);
    }
    // both classes are torsion
    for x in [v, u] {
        if x.c1h.is_zero() {
            return Err(TiltError::DegenerateClass(x.to_string()));
        }
    }
    Ok(WallLine::Direction { slope: &v.ch2 / &v.c1h })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    Parabola,
    DelPezzoGamma,
    K3Phi,
}

impl BoundaryKind {
    pub fn for_surface(kind: SurfaceKind) -> Option<Self> {
        match kind {
            SurfaceKind::DelPezzo => Some(BoundaryKind::DelPezzoGamma),
            SurfaceKind::K3 => Some(BoundaryKind::K3Phi),
            SurfaceKind::Canonical => None,
        }
    }
}

fn is_int(x: &Q) -> bool {
    x.denom().is_one()
}

/// Value of the boundary curve at `b`. At integers this is the top of the
/// vertical segment of the closed curve; see [`boundary_gap`].
pub fn boundary_curve(b: &Q, kind: BoundaryKind, m: &Q) -> Q {
    let half_sq = b * b / q(2);
    match kind {
        BoundaryKind::Parabola => half_sq,
        _ if is_int(b) => half_sq,
        BoundaryKind::DelPezzoGamma => {
            let n = Q::from_integer(floor_int(b));
            (&n + qr(1, 2)) * b - (&n * &n + &n) / q(2) - qr(1, 4)
        }
        BoundaryKind::K3Phi => {
            let n = Q::from_integer(floor_int(&(b + qr(1, 2))));
            let f = b - &n;
            half_sq - (q(1) - &f * &f) / m
        }
    }
}

/// Length of the vertical segment of the closed boundary curve above `b`
/// (nonzero only at integers).
pub fn boundary_gap(b: &Q, kind: BoundaryKind, m: &Q) -> Q {
    if !is_int(b) {
        return Q::zero();
    }
    match kind {
        BoundaryKind::Parabola => Q::zero(),
        BoundaryKind::DelPezzoGamma => qr(1, 4),
        BoundaryKind::K3Phi => q(1) / m,
    }
}

fn max_gap(kind: BoundaryKind, m: &Q) -> Q {
    boundary_gap(&Q::zero(), kind, m)
}

/// Coefficients `(a2, a1, a0)` of the curve on the open cell containing `mid`.
fn cell_poly(mid: &Q, kind: BoundaryKind, m: &Q) -> (Q, Q, Q) {
    match kind {
        BoundaryKind::Parabola => (qr(1, 2), Q::zero(), Q::zero()),
        BoundaryKind::DelPezzoGamma => {
            let n = Q::from_integer(floor_int(mid));
            (Q::zero(), &n + qr(1, 2), -(&n * &n + &n) / q(2) - qr(1, 4))
        }
        BoundaryKind::K3Phi => {
            let n = Q::from_integer(floor_int(&(mid + qr(1, 2))));
            (qr(1, 2) + q(1) / m, -(q(2) * &n) / m, (&n * &n - q(1)) / m)
        }
    }
}

/// A point with coordinates in a real quadratic extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurdPoint {
    pub b: Surd,
    pub w: Surd,
}

impl SurdPoint {
    pub fn as_rational(&self) -> Option<TiltPoint> {
        Some(TiltPoint::new(self.b.as_rational()?, self.w.as_rational()?))
    }
}

#[derive(Debug, Clone)]
enum Piece {
    Point { at: Surd, inside: bool, touches: bool },
    Open { inside: bool },
}

/// Where `line` leaves the region above the closed boundary curve: the left
/// and right ends of the component of `{b : line(b) > curve(b)}` containing
/// `b = 0` (or of the only component, if there is just one).
pub fn wall_endpoints(line: &WallLine, kind: BoundaryKind, m: &Q) -> Result<(SurdPoint, SurdPoint), TiltError> {
    let WallLine::Sloped { slope, intercept } = line else {
        return Err(TiltError::NotALine);
    };
    let gap = max_gap(kind, m);
    // curve >= b^2/2 - gap, so line > curve forces b into sigma -+ sqrt(disc)
    let disc = slope * slope + q(2) * (intercept + &gap);
    if disc.is_negative() {
        return Err(TiltError::NoIntersection);
    }
    let root = sqrt_upper(&disc, 6);
    let lo = floor_int(&(slope - &root)) - BigInt::one();
    let hi = ceil_int(&(slope + &root)) + BigInt::one();
    let lo = lo.to_i64().ok_or(TiltError::NoIntersection)?;
    let hi = hi.to_i64().ok_or(TiltError::NoIntersection)?;

    let mut breaks: Vec<Q> = Vec::new();
    for n in lo..=hi {
        breaks.push(q(n));
        if kind == BoundaryKind::K3Phi && n < hi {
            breaks.push(q(n) + qr(1, 2));
        }
    }
    let line_at = |b: &Surd| -> Surd { &b.scale(slope) + &Surd::from_q(intercept.clone()) };

    let mut pieces: Vec<Piece> = Vec::new();
    for (i, p) in breaks.iter().enumerate() {
        let lw = slope * p + intercept;
        let top = boundary_curve(p, kind, m);
        let bottom = &top - boundary_gap(p, kind, m);
        pieces.push(Piece::Point {
            at: Surd::from_q(p.clone()),
            inside: lw > top,
            touches: lw <= top && lw >= bottom,
        });
        let Some(next) = breaks.get(i + 1) else { break };
        let mid = (p + next) / q(2);
        let (a2, a1, a0) = cell_poly(&mid, kind, m);
        // g(b) = line(b) - curve(b) = c2 b^2 + c1 b + c0
        let (c2, c1, c0) = (-a2, slope - a1, intercept - a0);
        let g = |b: &Surd| -> Surd {
            let sq = b * b;
            &(&sq.scale(&c2) + &b.scale(&c1)) + &Surd::from_q(c0.clone())
        };
        let mut roots: Vec<Surd> = quadratic_roots(&c2, &c1, &c0)
            .into_iter()
            .filter(|r| r.cmp_q(p) == Ordering::Greater && r.cmp_q(next) == Ordering::Less)
            .collect();
        roots.sort();
        roots.dedup();
        let mut left = Surd::from_q(p.clone());
        for r in &roots {
            let sample = (&left + r).scale(&qr(1, 2));
            pieces.push(Piece::Open { inside: g(&sample).signum() == Ordering::Greater });
            pieces.push(Piece::Point { at: r.clone(), inside: false, touches: true });
            left = r.clone();
        }
        let sample = (&left + &Surd::from_q(next.clone())).scale(&qr(1, 2));
        pieces.push(Piece::Open { inside: g(&sample).signum() == Ordering::Greater });
    }

    // maximal runs of inside pieces, bounded by outside points
    let inside = |p: &Piece| match p {
        Piece::Point { inside, .. } | Piece::Open { inside } => *inside,
    };
    let mut components: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < pieces.len() {
        if inside(&pieces[i]) {
            let start = i;
            while i < pieces.len() && inside(&pieces[i]) {
                i += 1;
            }
            components.push((start - 1, i));
        } else {
            i += 1;
        }
    }
    if components.is_empty() {
        let touched = pieces.iter().any(|p| matches!(p, Piece::Point { touches: true, .. }));
        return Err(if touched { TiltError::Tangent } else { TiltError::NoIntersection });
    }
    let zero_index = pieces
        .iter()
        .position(|p| matches!(p, Piece::Point { at, .. } if at.is_rational() && at.rational_part().is_zero()));
    let chosen = match zero_index.and_then(|z| components.iter().find(|(a, b)| *a < z && z < *b)) {
        Some(c) => *c,
        None if components.len() == 1 => components[0],
        None => return Err(TiltError::Ambiguous),
    };
    let end = |idx: usize| -> SurdPoint {
        let Piece::Point { at, .. } = &pieces[idx] else {
            unreachable!("components are bounded by points")
        };
        SurdPoint { b: at.clone(), w: line_at(at) }
    };
    Ok((end(chosen.0), end(chosen.1)))
}

/// Real roots of `c2 x^2 + c1 x + c0` (not both leading coefficients zero).
fn quadratic_roots(c2: &Q, c1: &Q, c0: &Q) -> Vec<Surd> {
    if c2.is_zero() {
        if c1.is_zero() {
            return Vec::new();
        }
        return vec![Surd::from_q(-c0 / c1)];
    }
    let disc = c1 * c1 - q(4) * c2 * c0;
    if disc.is_negative() {
        return Vec::new();
    }
    let base = Surd::from_q(-c1 / (q(2) * c2));
    let spread = Surd::sqrt(&disc).scale(&(q(1) / (q(2) * q_abs(c2))));
    vec![&base - &spread, &base + &spread]
}

/// Bounds `(nu+ max, nu- min)` on the BN slopes of the HN factors of the
/// pushforward of a sheaf with normalised slope `t`.
pub fn slope_bounds_pushforward(curve: &CurveClass, t: &Q) -> Result<(Q, Q), TiltError> {
    let s = curve.s;
    let sq = q(s as i64);
    match curve.surface.kind {
        SurfaceKind::DelPezzo if s % 2 == 1 && s >= 3 => Ok((
            -(q(3) * &sq + q(1)) / q(4) + q(2) * &sq / (&sq - q(1)) * t,
            -(&sq + q(1)) / q(4),
        )),
        SurfaceKind::K3 if s.is_multiple_of(2) => Ok((q(2) * t - q(3) * &sq / q(4), -sq / q(4))),
        kind => Err(TiltError::Parity { kind: kind.label(), s }),
    }
}

/// Slope-gap condition between the first and last HN factors.
pub fn mu_gap_ok(mu1: &Q, mu2: &Q, s: u32) -> bool {
    mu1 - mu2 <= q(s as i64)
}

/// Range of `b` to search, together with how far above the parabola a wall
/// must reach: only points with `w - b^2/2 > depth` count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeWindow {
    pub bmin: Q,
    pub bmax: Q,
    pub depth: Q,
}

impl SlopeWindow {
    pub fn new(bmin: Q, bmax: Q, depth: Q) -> Result<Self, TiltError> {
        if bmin >= bmax {
            return Err(TiltError::EmptyWindow(crate::exact::fmt_q(&bmin), crate::exact::fmt_q(&bmax)));
        }
        if !depth.is_positive() {
            return Err(TiltError::NonPositiveDepth);
        }
        Ok(SlopeWindow { bmin, bmax, depth })
    }

    pub fn default_depth() -> Q {
        qr(1, 8)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DestabilizerCandidate {
    pub u: ChernSurface,
    pub wall: WallLine,
}

/// `c1.H` of `x` twisted by `bH`.
fn twisted_c1(x: &ChernSurface, b: &Q, m: &Q) -> Q {
    &x.c1h - b * q(x.r) * m
}

/// Whether the wall of `u` for `v` has a point `(b, w)` with `b` in the window,
/// `w - b^2/2 > depth` and `0 < c1^b(u) < c1^b(v)`.
pub fn wall_meets_window(v: &ChernSurface, u: &ChernSurface, line: &WallLine, window: &SlopeWindow, m: &Q) -> bool {
    let WallLine::Sloped { slope, intercept } = line else {
        return false;
    };
    let mut lo = window.bmin.clone();
    let mut hi = window.bmax.clone();
    let rest = v - u;
    for x in [u, &rest] {
        let rm = q(x.r) * m;
        match x.r.cmp(&0) {
            Ordering::Equal if !x.c1h.is_positive() => return false,
            Ordering::Equal => {}
            Ordering::Greater => hi = q_min(hi, &x.c1h / &rm),
            Ordering::Less => lo = q_max(lo, &x.c1h / &rm),
        }
    }
    if lo >= hi {
        return false;
    }
    let b = q_min(q_max(slope.clone(), lo), hi);
    slope * &b + intercept - &b * &b / q(2) > window.depth
}

fn wall_key(u: &ChernSurface) -> (Q, Q, Q, Q, Q, Q) {
    (
        q(u.r.abs()),
        q_abs(&u.c1h),
        q_abs(&u.ch2),
        q(u.r),
        u.c1h.clone(),
        u.ch2.clone(),
    )
}

fn max_abs_on(values: &[Q]) -> Q {
    values.iter().map(q_abs).fold(Q::zero(), q_max)
}

/// All numerical walls of `v` meeting the window, each with the witness `u`
/// minimising `(|r|, |c1H|, |ch2|)`, sorted by slope then intercept.
pub fn enumerate_walls(
    v: &ChernSurface,
    window: &SlopeWindow,
    geom: &SurfaceGeometry,
    cap: u64,
) -> Result<Vec<DestabilizerCandidate>, TiltError> {
    let m = geom.m().clone();
    let dv = delta_h(v, geom);
    if dv.is_negative() {
        return Err(TiltError::NegativeDiscriminant);
    }
    if v.is_zero() {
        return Err(TiltError::DegenerateClass(v.to_string()));
    }
    let lattice = geom.lattice();
    let (bmin, bmax) = (&window.bmin, &window.bmax);
    let rv = q(v.r);

    // ch2 of v twisted by bH, a quadratic in b; its extreme values on the window
    let e_twist = |b: &Q| &v.ch2 - b * &v.c1h + b * b * &rv * &m / q(2);
    let mut e_samples = vec![e_twist(bmin), e_twist(bmax)];
    if v.r != 0 {
        let vertex = &v.c1h / (&rv * &m);
        if &vertex > bmin && &vertex < bmax {
            e_samples.push(e_twist(&vertex));
        }
    }
    let e_max = max_abs_on(&e_samples);
    let t_max = q_max(
        q_max(twisted_c1(v, bmin, &m), twisted_c1(v, bmax, &m)),
        Q::zero(),
    );
    let two_depth = q(2) * &window.depth;
    let root_lo = sqrt_exact(&two_depth).unwrap_or_else(|| sqrt_lower(&two_depth, 6));
    let rank_bound = &e_max / (&window.depth * &m) + q(v.r.abs()) + &t_max / (&m * &root_lo);
    let rank_bound = floor_int(&rank_bound).to_i64().ok_or(TiltError::CapExceeded(cap))?;

    let mut visited: u64 = 0;
    let mut best: BTreeMap<WallLine, ChernSurface> = BTreeMap::new();
    for r in -rank_bound..=rank_bound {
        if r == 0 && v.r == 0 {
            continue;
        }
        let rq = q(r);
        // 0 < c - b r m < c1^b(v) for some b in the window
        let c_lo = q_min(bmin * &rq * &m, bmax * &rq * &m);
        let c_hi = q_max(
            bmin * &rq * &m + twisted_c1(v, bmin, &m),
            bmax * &rq * &m + twisted_c1(v, bmax, &m),
        );
        let i_lo = floor_int(&(&c_lo / &lattice.c1_step)) + BigInt::one();
        let i_hi = ceil_int(&(&c_hi / &lattice.c1_step)) - BigInt::one();
        let (Some(i_lo), Some(i_hi)) = (i_lo.to_i64(), i_hi.to_i64()) else {
            return Err(TiltError::CapExceeded(cap));
        };
        for i in i_lo..=i_hi {
            let c = q(i) * &lattice.c1_step;
            let (e_lo, e_hi) = if r != 0 {
                let a = (&c * &c - &dv) / (q(2) * &rq * &m);
                let b = &c * &c / (q(2) * &rq * &m);
                (q_min(a.clone(), b.clone()), q_max(a, b))
            } else {
                if &c * &c > dv {
                    continue;
                }
                let cb = q_max(&c * bmin, &c * bmax);
                let cb_min = q_min(&c * bmin, &c * bmax);
                let dc = &v.c1h - &c;
                if v.r > 0 {
                    (&v.ch2 - &dc * &dc / (q(2) * &rv * &m), cb + &e_max)
                } else {
                    (cb_min - &e_max, &v.ch2 + &dc * &dc / (q(2) * q_abs(&rv) * &m))
                }
            };
            let j_lo = ceil_int(&(&e_lo / &lattice.ch2_step));
            let j_hi = floor_int(&(&e_hi / &lattice.ch2_step));
            let (Some(j_lo), Some(j_hi)) = (j_lo.to_i64(), j_hi.to_i64()) else {
                return Err(TiltError::CapExceeded(cap));
            };
            if j_hi >= j_lo {
                visited += (j_hi - j_lo + 1) as u64;
            }
            visited += 1;
            if visited > cap {
                return Err(TiltError::CapExceeded(cap));
            }
            for j in j_lo..=j_hi {
                let u = ChernSurface::new(r, c.clone(), q(j) * &lattice.ch2_step);
                if let Some(line) = qualifies(v, &u, &dv, window, geom) {
                    match best.get(&line) {
                        Some(prev) if wall_key(prev) <= wall_key(&u) => {}
                        _ => {
                            best.insert(line, u);
                        }
                    }
                }
            }
        }
    }
    Ok(best
        .into_iter()
        .map(|(wall, u)| DestabilizerCandidate { u, wall })
        .collect())
}

fn qualifies(v: &ChernSurface, u: &ChernSurface, dv: &Q, window: &SlopeWindow, geom: &SurfaceGeometry) -> Option<WallLine> {
    let du = delta_h(u, geom);
    if du.is_negative() || &du > dv {
        return None;
    }
    if delta_h(&(v - u), geom).is_negative() {
        return None;
    }
    let line = wall_through(v, u, geom).ok()?;
    if !matches!(line, WallLine::Sloped { .. }) {
        return None;
    }
    wall_meets_window(v, u, &line, window, geom.m()).then_some(line)
}

/// Reads the enumeration cap from the environment, falling back to the default.
pub fn cap_from_env() -> Result<u64, String> {
    match std::env::var(CAP_ENV) {
        Ok(raw) => raw
            .trim()
            .parse::<u64>()
            .map_err(|_| format!("{CAP_ENV} must be a positive integer, got {raw:?}")),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::SurfaceKind;

    fn k3(m: i64) -> SurfaceGeometry {
        SurfaceGeometry::new(SurfaceKind::K3, q(m), true).unwrap()
    }

    fn dp(m: i64) -> SurfaceGeometry {
        SurfaceGeometry::new(SurfaceKind::DelPezzo, q(m), false).unwrap()
    }

    #[test]
    fn wall_with_torsion_class() {
        let g = k3(2);
        let v = ChernSurface::new(1, q(0), q(-1));
        for e in [-3i64, 0, 5] {
            let u = ChernSurface::new(0, q(4), q(e));
            let line = wall_through(&v, &u, &g).unwrap();
            assert_eq!(line, WallLine::through(&TiltPoint::new(q(0), qr(-1, 2)), qr(e, 4)));
        }
    }

    #[test]
    fn torsion_walls_are_parallel() {
        let g = dp(3);
        let v = ChernSurface::new(0, q(6), q(2));
        for u in [ChernSurface::new(1, q(1), q(0)), ChernSurface::new(-2, q(3), qr(1, 2))] {
            assert_eq!(wall_through(&v, &u, &g).unwrap().slope(), Some(&qr(1, 3)));
        }
        let u = ChernSurface::new(0, q(3), q(5));
        assert_eq!(wall_through(&v, &u, &g).unwrap(), WallLine::Direction { slope: qr(1, 3) });
    }

    #[test]
    fn proportional_classes_have_no_wall() {
        let g = k3(2);
        let v = ChernSurface::new(1, q(2), q(1));
        assert_eq!(wall_through(&v, &v.scale(-3), &g), Err(TiltError::Proportional));
    }

    #[test]
    fn boundary_curve_values() {
        let m2 = q(2);
        assert_eq!(boundary_curve(&qr(1, 2), BoundaryKind::DelPezzoGamma, &m2), q(0));
        assert_eq!(boundary_curve(&q(0), BoundaryKind::DelPezzoGamma, &m2), q(0));
        assert_eq!(boundary_curve(&qr(1, 2), BoundaryKind::K3Phi, &m2), qr(-1, 4));
        assert_eq!(boundary_curve(&q(3), BoundaryKind::Parabola, &m2), qr(9, 2));
        assert_eq!(boundary_gap(&q(3), BoundaryKind::DelPezzoGamma, &m2), qr(1, 4));
        assert_eq!(boundary_gap(&q(3), BoundaryKind::K3Phi, &m2), qr(1, 2));
        // both K3 formulas agree at half integers
        let x = qr(3, 2);
        let left = &x * &x / q(2) - (q(1) - qr(1, 4)) / &m2;
        assert_eq!(boundary_curve(&x, BoundaryKind::K3Phi, &m2), left);
    }

    #[test]
    fn parabola_endpoints() {
        let line = WallLine::through(&TiltPoint::new(q(0), qr(1, 2)), q(0));
        let (l, r) = wall_endpoints(&line, BoundaryKind::Parabola, &q(1)).unwrap();
        assert_eq!(l.as_rational().unwrap(), TiltPoint::new(q(-1), qr(1, 2)));
        assert_eq!(r.as_rational().unwrap(), TiltPoint::new(q(1), qr(1, 2)));
    }

    #[test]
    fn del_pezzo_and_k3_endpoints() {
        let s = 3i64;
        let t = q(1);
        let line = WallLine::through(&TiltPoint::new(q(-2), q(2)), &t - qr(s, 2));
        let (l, r) = wall_endpoints(&line, BoundaryKind::DelPezzoGamma, &q(1)).unwrap();
        assert_eq!(r.as_rational().unwrap(), TiltPoint::new(q(1), qr(1, 2)));
        assert_eq!(l.as_rational().unwrap(), TiltPoint::new(q(-2), q(2)));

        let line = WallLine::through(&TiltPoint::new(q(-1), qr(1, 2)), q(0));
        let (_, r) = wall_endpoints(&line, BoundaryKind::K3Phi, &q(2)).unwrap();
        assert_eq!(r.as_rational().unwrap(), TiltPoint::new(q(1), qr(1, 2)));
    }

    #[test]
    fn endpoint_failures() {
        let low = WallLine::through(&TiltPoint::new(q(0), q(-5)), q(0));
        assert_eq!(wall_endpoints(&low, BoundaryKind::Parabola, &q(1)), Err(TiltError::NoIntersection));
        let tangent = WallLine::through(&TiltPoint::new(q(0), q(0)), q(0));
        assert_eq!(wall_endpoints(&tangent, BoundaryKind::Parabola, &q(1)), Err(TiltError::Tangent));
        let vertical = WallLine::Vertical { b: q(0) };
        assert_eq!(wall_endpoints(&vertical, BoundaryKind::Parabola, &q(1)), Err(TiltError::NotALine));
    }

    #[test]
    fn irrational_endpoints_lie_on_curve() {
        let line = WallLine::through(&TiltPoint::new(q(0), q(1)), qr(1, 3));
        let (l, r) = wall_endpoints(&line, BoundaryKind::Parabola, &q(1)).unwrap();
        for p in [l, r] {
            assert!(!p.b.is_rational());
            assert_eq!(p.w, (&p.b * &p.b).scale(&qr(1, 2)));
        }
    }

    #[test]
    fn pushforward_slope_bounds() {
        let c = CurveClass::new(3, dp(1));
        assert_eq!(slope_bounds_pushforward(&c, &q(1)).unwrap(), (qr(1, 2), q(-1)));
        let c = CurveClass::new(2, k3(2));
        assert_eq!(slope_bounds_pushforward(&c, &q(1)).unwrap(), (qr(1, 2), qr(-1, 2)));
        let c = CurveClass::new(4, k3(2));
        assert_eq!(slope_bounds_pushforward(&c, &q(2)).unwrap(), (q(1), q(-1)));
        assert!(slope_bounds_pushforward(&CurveClass::new(3, k3(2)), &q(1)).is_err());
        assert!(slope_bounds_pushforward(&CurveClass::new(4, dp(1)), &q(1)).is_err());
    }

    #[test]
    fn slope_gap() {
        assert!(mu_gap_ok(&q(3), &q(1), 2));
        assert!(!mu_gap_ok(&q(3), &q(0), 2));
    }

    #[test]
    fn structure_sheaf_has_no_walls() {
        for g in [k3(2), dp(3)] {
            let v = ChernSurface::new(1, q(0), q(0));
            let w = SlopeWindow::new(q(-3), q(3), SlopeWindow::default_depth()).unwrap();
            assert!(enumerate_walls(&v, &w, &g, DEFAULT_CAP).unwrap().is_empty());
        }
    }

    #[test]
    fn walls_pass_through_projection() {
        let g = k3(2);
        let v = ChernSurface::new(2, q(2), q(-3));
        let w = SlopeWindow::new(q(-3), q(1), SlopeWindow::default_depth()).unwrap();
        let p = projection(&v, &g).unwrap();
        let walls = enumerate_walls(&v, &w, &g, DEFAULT_CAP).unwrap();
        assert!(!walls.is_empty());
        for c in walls {
            assert!(c.wall.contains(&p));
        }
    }

    #[test]
    fn window_validation() {
        assert!(SlopeWindow::new(q(0), q(0), q(1)).is_err());
        assert!(SlopeWindow::new(q(0), q(1), q(0)).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let g = k3(2);
        let v = ChernSurface::new(1, q(0), q(-1));
        let w = SlopeWindow::new(q(-3), q(0), SlopeWindow::default_depth()).unwrap();
        assert_eq!(enumerate_walls(&v, &w, &g, 10), Err(TiltError::CapExceeded(10)));
    }
}
