//! H-degree Chern data on polarised surfaces and Calabi-Yau threefolds.

use crate::exact::{fmt_q, q, Q};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantsError {
    #[error("degree must be positive, got {0}")]
    NonPositiveDegree(String),
    #[error("class is not flagged as having c1 proportional to H")]
    NotProportional,
    #[error("Euler characteristic is not available for {0} surfaces")]
    Unsupported(&'static str),
    #[error("adjunction gives a non-integral genus (2g-2 = {0})")]
    NonIntegralGenus(String),
    #[error("rank must be at least 1, got {0}")]
    NonPositiveRank(i64),
    #[error("multiplier must be at least 1, got {0}")]
    InvalidMultiplier(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceKind {
    /// K_S = -H
    DelPezzo,
    /// K_S = 0
    K3,
    /// K_S = H
    Canonical,
}

impl SurfaceKind {
    pub fn label(self) -> &'static str {
        match self {
            SurfaceKind::DelPezzo => "del Pezzo",
            SurfaceKind::K3 => "K3",
            SurfaceKind::Canonical => "canonical",
        }
    }
}

/// Lattice steps for `c1.H` and `ch2` of classes on a surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    pub c1_step: Q,
    pub ch2_step: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceGeometry {
    pub kind: SurfaceKind,
    m: Q,
    pub picard_rank_one: bool,
    lattice_override: Option<Lattice>,
}

impl SurfaceGeometry {
    pub fn new(kind: SurfaceKind, m: Q, picard_rank_one: bool) -> Result<Self, InvariantsError> {
        if !m.is_positive() {
            return Err(InvariantsError::NonPositiveDegree(fmt_q(&m)));
        }
        Ok(SurfaceGeometry { kind, m, picard_rank_one, lattice_override: None })
    }

    /// Replaces the default lattice, e.g. for singular surfaces.
    pub fn with_lattice(mut self, lattice: Lattice) -> Self {
        self.lattice_override = Some(lattice);
        self
    }

    /// H^2
    pub fn m(&self) -> &Q {
        &self.m
    }

    pub fn lattice(&self) -> Lattice {
        if let Some(l) = &self.lattice_override {
            return l.clone();
        }
        let c1_step = if self.picard_rank_one { self.m.clone() } else { Q::one() };
        let ch2_step = match self.kind {
            SurfaceKind::K3 => Q::one(),
            SurfaceKind::DelPezzo | SurfaceKind::Canonical => Q::new(1.into(), 2.into()),
        };
        Lattice { c1_step, ch2_step }
    }

    pub fn on_lattice(&self, v: &ChernSurface) -> bool {
        let l = self.lattice();
        (&v.c1h / &l.c1_step).is_integer() && (&v.ch2 / &l.ch2_step).is_integer()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreefoldGeometry {
    pub name: String,
    #[serde(with = "crate::exact::serde_q")]
    h3: Q,
    #[serde(with = "crate::exact::serde_q")]
    c2h: Q,
}

impl ThreefoldGeometry {
    pub fn new(name: impl Into<String>, h3: Q, c2h: Q) -> Result<Self, InvariantsError> {
        if !h3.is_positive() {
            return Err(InvariantsError::NonPositiveDegree(fmt_q(&h3)));
        }
        Ok(ThreefoldGeometry { name: name.into(), h3, c2h })
    }

    pub fn h3(&self) -> &Q {
        &self.h3
    }

    pub fn c2h(&self) -> &Q {
        &self.c2h
    }

    /// td_2(X).H = c_2(X).H / 12
    pub fn td2h(&self) -> Q {
        &self.c2h / q(12)
    }

    /// χ(O_X(kH)) by Riemann-Roch.
    pub fn chi_line_bundle(&self, k: i64) -> Q {
        let k = q(k);
        &k * &k * &k * &self.h3 / q(6) + k * &self.c2h / q(12)
    }
}

/// `(ch0, ch1.H, ch2)` on a polarised surface.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChernSurface {
    pub r: i64,
    pub c1h: Q,
    pub ch2: Q,
}

impl ChernSurface {
    pub fn new(r: i64, c1h: Q, ch2: Q) -> Self {
        ChernSurface { r, c1h, ch2 }
    }

    pub fn scale(&self, k: i64) -> Self {
        ChernSurface { r: self.r * k, c1h: &self.c1h * q(k), ch2: &self.ch2 * q(k) }
    }

    pub fn is_zero(&self) -> bool {
        self.r == 0 && self.c1h.is_zero() && self.ch2.is_zero()
    }
}

impl fmt::Display for ChernSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r, fmt_q(&self.c1h), fmt_q(&self.ch2))
    }
}

impl Add for &ChernSurface {
    type Output = ChernSurface;
    fn add(self, o: &ChernSurface) -> ChernSurface {
        ChernSurface { r: self.r + o.r, c1h: &self.c1h + &o.c1h, ch2: &self.ch2 + &o.ch2 }
    }
}

impl Sub for &ChernSurface {
    type Output = ChernSurface;
    fn sub(self, o: &ChernSurface) -> ChernSurface {
        ChernSurface { r: self.r - o.r, c1h: &self.c1h - &o.c1h, ch2: &self.ch2 - &o.ch2 }
    }
}

impl Neg for &ChernSurface {
    type Output = ChernSurface;
    fn neg(self) -> ChernSurface {
        self.scale(-1)
    }
}

/// `(ch0, ch1.H^2, ch2.H, ch3)` on a polarised threefold. `proportional`
/// records that ch1 is a multiple of H, which Euler characteristics and the
/// quadratic form rely on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChernThreefold {
    pub r: i64,
    pub c1h2: Q,
    pub ch2h: Q,
    pub ch3: Q,
    pub proportional: bool,
}

impl ChernThreefold {
    pub fn new(r: i64, c1h2: Q, ch2h: Q, ch3: Q) -> Self {
        ChernThreefold { r, c1h2, ch2h, ch3, proportional: true }
    }

    pub fn with_proportional(mut self, flag: bool) -> Self {
        self.proportional = flag;
        self
    }

    /// ch(O_X(kH)) in H-degrees.
    pub fn line_bundle(k: i64, geom: &ThreefoldGeometry) -> Self {
        let k = q(k);
        let h = geom.h3();
        ChernThreefold::new(
            1,
            &k * h,
            &k * &k * h / q(2),
            &k * &k * &k * h / q(6),
        )
    }

    pub fn scale(&self, k: i64) -> Self {
        let k_q = q(k);
        ChernThreefold {
            r: self.r * k,
            c1h2: &self.c1h2 * &k_q,
            ch2h: &self.ch2h * &k_q,
            ch3: &self.ch3 * &k_q,
            proportional: self.proportional,
        }
    }
}

impl fmt::Display for ChernThreefold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.r,
            fmt_q(&self.c1h2),
            fmt_q(&self.ch2h),
            fmt_q(&self.ch3)
        )
    }
}

impl Add for &ChernThreefold {
    type Output = ChernThreefold;
    fn add(self, o: &ChernThreefold) -> ChernThreefold {
        ChernThreefold {
            r: self.r + o.r,
            c1h2: &self.c1h2 + &o.c1h2,
            ch2h: &self.ch2h + &o.ch2h,
            ch3: &self.ch3 + &o.ch3,
            proportional: self.proportional && o.proportional,
        }
    }
}

/// Anything with a top self-intersection H^n.
pub trait Polarisation {
    fn top_degree(&self) -> &Q;
}

impl Polarisation for SurfaceGeometry {
    fn top_degree(&self) -> &Q {
        &self.m
    }
}

impl Polarisation for ThreefoldGeometry {
    fn top_degree(&self) -> &Q {
        &self.h3
    }
}

/// Classes described by their first three H-degrees.
pub trait HDegrees {
    type Geometry: Polarisation;
    fn rank(&self) -> i64;
    fn c1_degree(&self) -> &Q;
    fn ch2_degree(&self) -> &Q;
    fn euler_char(&self, geom: &Self::Geometry) -> Result<Q, InvariantsError>;
}

impl HDegrees for ChernSurface {
    type Geometry = SurfaceGeometry;
    fn rank(&self) -> i64 {
        self.r
    }
    fn c1_degree(&self) -> &Q {
        &self.c1h
    }
    fn ch2_degree(&self) -> &Q {
        &self.ch2
    }
    fn euler_char(&self, geom: &SurfaceGeometry) -> Result<Q, InvariantsError> {
        match geom.kind {
            SurfaceKind::DelPezzo => Ok(q(self.r) + &self.c1h / q(2) + &self.ch2),
            SurfaceKind::K3 => Ok(q(2 * self.r) + &self.ch2),
            SurfaceKind::Canonical => Err(InvariantsError::Unsupported("canonical")),
        }
    }
}

impl HDegrees for ChernThreefold {
    type Geometry = ThreefoldGeometry;
    fn rank(&self) -> i64 {
        self.r
    }
    fn c1_degree(&self) -> &Q {
        &self.c1h2
    }
    fn ch2_degree(&self) -> &Q {
        &self.ch2h
    }
    fn euler_char(&self, geom: &ThreefoldGeometry) -> Result<Q, InvariantsError> {
        if !self.proportional {
            return Err(InvariantsError::NotProportional);
        }
        Ok(&self.ch3 + geom.td2h() * &self.c1h2 / geom.h3())
    }
}

/// A slope value that may be `+infinity`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtSlope {
    Finite(Q),
    PlusInfinity,
}

impl ExtSlope {
    pub fn finite(&self) -> Option<&Q> {
        match self {
            ExtSlope::Finite(x) => Some(x),
            ExtSlope::PlusInfinity => None,
        }
    }
}

impl fmt::Display for ExtSlope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtSlope::Finite(x) => f.write_str(&fmt_q(x)),
            ExtSlope::PlusInfinity => f.write_str("+inf"),
        }
    }
}

/// ch(E) . exp(-bH), in H-degrees.
pub fn twist(v: &ChernThreefold, b: &Q, geom: &ThreefoldGeometry) -> ChernThreefold {
    let r = q(v.r);
    let h = geom.h3();
    let b2 = b * b;
    let b3 = &b2 * b;
    ChernThreefold {
        r: v.r,
        c1h2: &v.c1h2 - b * &r * h,
        ch2h: &v.ch2h - b * &v.c1h2 + &b2 * &r * h / q(2),
        ch3: &v.ch3 - b * &v.ch2h + &b2 * &v.c1h2 / q(2) - &b3 * &r * h / q(6),
        proportional: v.proportional,
    }
}

/// Surface analogue of [`twist`].
pub fn twist_surface(v: &ChernSurface, b: &Q, geom: &SurfaceGeometry) -> ChernSurface {
    let r = q(v.r);
    ChernSurface {
        r: v.r,
        c1h: &v.c1h - b * &r * geom.m(),
        ch2: &v.ch2 - b * &v.c1h + b * b * &r * geom.m() / q(2),
    }
}

pub fn mu_h<C: HDegrees>(v: &C, geom: &C::Geometry) -> ExtSlope {
    if v.rank() == 0 {
        ExtSlope::PlusInfinity
    } else {
        ExtSlope::Finite(v.c1_degree() / (q(v.rank()) * geom.top_degree()))
    }
}

pub fn delta_h<C: HDegrees>(v: &C, geom: &C::Geometry) -> Q {
    let c = v.c1_degree();
    c * c - q(2 * v.rank()) * geom.top_degree() * v.ch2_degree()
}

/// Tilt slope of a surface class at `(b, w)`.
pub fn nu_bw(v: &ChernSurface, b: &Q, w: &Q, geom: &SurfaceGeometry) -> ExtSlope {
    let r = q(v.r);
    let den = &v.c1h - b * &r * geom.m();
    if den.is_zero() {
        return ExtSlope::PlusInfinity;
    }
    ExtSlope::Finite((&v.ch2 - w * &r * geom.m()) / den)
}

pub fn nu_bn(v: &ChernSurface, geom: &SurfaceGeometry) -> ExtSlope {
    nu_bw(v, &Q::zero(), &Q::zero(), geom)
}

pub fn euler_char<C: HDegrees>(v: &C, geom: &C::Geometry) -> Result<Q, InvariantsError> {
    v.euler_char(geom)
}

/// An integral curve in |sH| on a polarised surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveClass {
    pub s: u32,
    pub surface: SurfaceGeometry,
}

impl CurveClass {
    pub fn new(s: u32, surface: SurfaceGeometry) -> Self {
        assert!(s >= 1, "curve multiple must be positive");
        CurveClass { s, surface }
    }

    /// 2g - 2 from adjunction.
    pub fn two_g_minus_two(&self) -> Q {
        let s = q(self.s as i64);
        let m = self.surface.m();
        match self.surface.kind {
            SurfaceKind::DelPezzo => &s * (&s - q(1)) * m,
            SurfaceKind::K3 => &s * &s * m,
            SurfaceKind::Canonical => &s * (&s + q(1)) * m,
        }
    }
}

pub fn genus(curve: &CurveClass) -> Result<i64, InvariantsError> {
    let a = curve.two_g_minus_two();
    let half = &a / q(2);
    if !half.is_integer() {
        return Err(InvariantsError::NonIntegralGenus(fmt_q(&a)));
    }
    half.to_integer()
        .to_i64()
        .map(|h| h + 1)
        .ok_or_else(|| InvariantsError::NonIntegralGenus(fmt_q(&a)))
}

/// The pushforward class of a sheaf on the curve, with its normalised slope
/// `t = mu/(s m)` and its BN slope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pushforward {
    pub class: ChernSurface,
    pub t: Q,
    pub nu_bn: ExtSlope,
}

/// Pushforward of a rank `r`, degree `d` sheaf on `curve` to the surface.
pub fn pushforward_curve_sheaf(r: i64, d: &Q, curve: &CurveClass) -> Result<Pushforward, InvariantsError> {
    if r < 1 {
        return Err(InvariantsError::NonPositiveRank(r));
    }
    let s = q(curve.s as i64);
    let m = curve.surface.m();
    let rq = q(r);
    let class = ChernSurface::new(0, &rq * &s * m, d - &s * &s * &rq * m / q(2));
    let t = d / (&rq * &s * m);
    let nu = nu_bn(&class, &curve.surface);
    Ok(Pushforward { class, t, nu_bn: nu })
}

/// Geometry with respect to `kH`.
pub fn rescale_polarisation(geom: &ThreefoldGeometry, k: i64) -> Result<ThreefoldGeometry, InvariantsError> {
    if k < 1 {
        return Err(InvariantsError::InvalidMultiplier(k));
    }
    let kq = q(k);
    Ok(ThreefoldGeometry {
        name: geom.name.clone(),
        h3: &kq * &kq * &kq * geom.h3(),
        c2h: kq * geom.c2h(),
    })
}

/// Degrees pulled back along an étale cover of degree `deg`.
pub fn etale_transfer(geom: &ThreefoldGeometry, deg: i64) -> Result<ThreefoldGeometry, InvariantsError> {
    if deg < 1 {
        return Err(InvariantsError::InvalidMultiplier(deg));
    }
    Ok(ThreefoldGeometry {
        name: geom.name.clone(),
        h3: q(deg) * geom.h3(),
        c2h: q(deg) * geom.c2h(),
    })
}
