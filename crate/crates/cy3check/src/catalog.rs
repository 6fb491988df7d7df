//! Catalog records for weighted complete intersections, anticanonical
//! divisors in Fano fourfolds and cyclic covers of Fano threefolds, with the
//! checkers that turn each record into a verdict.

use crate::bmtchain::{check_main_criterion, epsilon_for_surface, epsilon_from_delta, gamma_cycle, BmtError, EpsilonCert, GammaCert, Verdict};
use crate::bnbounds::{
    bn_lower, bn_upper_delpezzo, bn_upper_k3, castelnuovo_severi, clifford_bound, weak_bound, BNBound, BnError, BoundKind,
    BoundSource, CurveProfile, SpecialCurve,
};
use crate::exact::{fmt_q, is_integer, q, Q};
use crate::invariants::{InvariantsError, ThreefoldGeometry};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// The hypergeometric catalog shipped with the crate.
pub const BUNDLED_HYPERGEOMETRIC: &str = include_str!("../data/hypergeometric.toml");
/// A catalog holding only the Picard rank 10 double cover.
pub const BUNDLED_PATHOLOGY: &str = include_str!("../data/pathology.toml");

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("weights sum to {weights} but degrees sum to {degrees}")]
    NotCalabiYau { weights: i64, degrees: i64 },
    #[error("malformed record: {0}")]
    Malformed(String),
    #[error("cannot parse catalog: {0}")]
    Parse(String),
    #[error(transparent)]
    Bn(#[from] BnError),
    #[error(transparent)]
    Bmt(#[from] BmtError),
    #[error(transparent)]
    Invariants(#[from] InvariantsError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Fano4,
    BasepointFreeCor,
    #[serde(rename = "basepoint_free_cor_very_ample_2h")]
    BasepointFreeCorVeryAmple2H,
    K3Embed {
        s: i64,
        #[serde(with = "crate::exact::serde_q")]
        m: Q,
    },
    DelPezzoEmbed {
        s: i64,
        #[serde(with = "crate::exact::serde_q")]
        m: Q,
    },
}

impl Route {
    pub fn label(&self) -> String {
        match self {
            Route::Fano4 => "fano4".into(),
            Route::BasepointFreeCor => "basepoint-free cor".into(),
            Route::BasepointFreeCorVeryAmple2H => "basepoint-free cor (2H very ample)".into(),
            Route::K3Embed { s, m } => format!("K3 embed s={s} m={}", fmt_q(m)),
            Route::DelPezzoEmbed { s, m } => format!("del Pezzo embed s={s} m={}", fmt_q(m)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WCIFamily {
    pub name: String,
    pub weights: Vec<i64>,
    pub degrees: Vec<i64>,
    #[serde(default = "one")]
    pub scale: i64,
    pub route: Route,
    #[serde(default)]
    pub notes: String,
}

fn one() -> i64 {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fano4Route {
    #[default]
    Anticanonical,
    BasepointFreeCor,
    #[serde(rename = "basepoint_free_cor_very_ample_2h")]
    BasepointFreeCorVeryAmple2H,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Fano4Record {
    pub name: String,
    pub r: i64,
    #[serde(with = "crate::exact::serde_q")]
    pub m: Q,
    pub picard_rank_one: bool,
    #[serde(rename = "chiOH", with = "crate::exact::serde_q")]
    pub chi_oh: Q,
    /// `H^3` when the polarisation is not `H_M` restricted (corollary routes).
    #[serde(default, with = "crate::exact::serde_q_opt", skip_serializing_if = "Option::is_none")]
    pub h3: Option<Q>,
    #[serde(default)]
    pub route: Fano4Route,
    #[serde(default)]
    pub notes: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CoverRecord {
    pub name: String,
    pub r: i64,
    pub d: i64,
    #[serde(rename = "hY3", with = "crate::exact::serde_q")]
    pub h_y3: Q,
    pub picard_rank: i64,
    #[serde(default = "yes")]
    pub branch_general: bool,
    #[serde(default)]
    pub notes: String,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    #[serde(default)]
    pub wci: Vec<WCIFamily>,
    #[serde(default)]
    pub fano4: Vec<Fano4Record>,
    #[serde(default)]
    pub covers: Vec<CoverRecord>,
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Self, CatalogError> {
        toml::from_str(text).map_err(|e| CatalogError::Parse(e.to_string()))
    }

    pub fn len(&self) -> usize {
        self.wci.len() + self.fano4.len() + self.covers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Keeps only the records called `name`.
    pub fn select(&self, name: &str) -> Catalog {
        Catalog {
            wci: self.wci.iter().filter(|r| r.name == name).cloned().collect(),
            fano4: self.fano4.iter().filter(|r| r.name == name).cloned().collect(),
            covers: self.covers.iter().filter(|r| r.name == name).cloned().collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub exact: String,
    pub decimal: String,
    pub source: BoundSource,
    pub kind: BoundKind,
}

impl From<&BNBound> for BoundReport {
    fn from(b: &BNBound) -> Self {
        BoundReport { exact: b.value.exact(), decimal: b.value.decimal(), source: b.source, kind: b.kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alternative {
    pub route: String,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsilonReport {
    pub a: String,
    pub chi: String,
    pub m: String,
    pub g: i64,
    pub smooth: bool,
    pub n: Option<i64>,
    pub delta: String,
    pub epsilon: String,
    /// `delta/(2+3 delta)` for the threefold step, the input of `gamma`.
    pub threefold_epsilon: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub family: String,
    pub record: String,
    pub scale: i64,
    pub h3: Option<String>,
    pub c2h: Option<String>,
    pub chi: String,
    pub genus: i64,
    pub route: String,
    pub bn_bound: Option<BoundReport>,
    pub verdict: Verdict,
    pub alternatives: Vec<Alternative>,
    pub epsilon_cert: Option<EpsilonReport>,
    pub gamma_cert: Option<GammaCert>,
    pub notes: Vec<String>,
    pub error: Option<String>,
}

impl Report {
    fn blank(family: &str, record: &str) -> Self {
        Report {
            family: family.to_string(),
            record: record.to_string(),
            scale: 1,
            h3: None,
            c2h: None,
            chi: String::new(),
            genus: 0,
            route: String::new(),
            bn_bound: None,
            verdict: Verdict::Inconclusive,
            alternatives: Vec::new(),
            epsilon_cert: None,
            gamma_cert: None,
            notes: Vec::new(),
            error: None,
        }
    }

    fn failed(family: &str, record: &str, err: &CatalogError) -> Self {
        let mut r = Report::blank(family, record);
        r.error = Some(err.to_string());
        r
    }
}

// ---------------------------------------------------------------------------
// Weighted complete intersections

fn e2(xs: &[i64]) -> BigInt {
    let mut acc = BigInt::zero();
    for (i, a) in xs.iter().enumerate() {
        for b in &xs[i + 1..] {
            acc += BigInt::from(*a) * BigInt::from(*b);
        }
    }
    acc
}

fn product(xs: &[i64]) -> BigInt {
    xs.iter().fold(BigInt::one(), |acc, x| acc * BigInt::from(*x))
}

/// `(H^3, c2.H, chi(O(H)))` for the polarisation `kH` on a Calabi-Yau complete
/// intersection of the given degrees in weighted projective space.
pub fn wci_invariants(weights: &[i64], degrees: &[i64], k: i64) -> Result<(Q, Q, Q), CatalogError> {
    if degrees.is_empty() || weights.is_empty() {
        return Err(CatalogError::Malformed("weights and degrees must be nonempty".into()));
    }
    if weights.iter().chain(degrees).any(|x| *x <= 0) || k <= 0 {
        return Err(CatalogError::Malformed("weights, degrees and scale must be positive".into()));
    }
    if weights.len() != degrees.len() + 4 {
        return Err(CatalogError::Malformed(format!(
            "{} weights and {} degrees do not cut out a threefold",
            weights.len(),
            degrees.len()
        )));
    }
    let (sw, sd) = (weights.iter().sum::<i64>(), degrees.iter().sum::<i64>());
    if sw != sd {
        return Err(CatalogError::NotCalabiYau { weights: sw, degrees: sd });
    }
    let ratio = Q::new(product(degrees), product(weights));
    let kq = q(k);
    let h3 = &kq * &kq * &kq * &ratio;
    let c2h = &kq * Q::from_integer(e2(weights) - e2(degrees)) * &ratio;
    let chi = &h3 / q(6) + &c2h / q(12);
    Ok((h3, c2h, chi))
}

/// Corollary check for a basepoint-free polarisation: `c2.H > 4H^3 + 12`, or
/// `c2.H > 4H^3 + 6` when `2H` is very ample.
pub fn check_basepoint_free_cor(h3: &Q, c2h: &Q, very_ample_2h: bool) -> Verdict {
    let offset = if very_ample_2h { q(6) } else { q(12) };
    let holds = c2h > &(q(4) * h3 + &offset);
    // the same statement written with chi = h3/6 + c2h/12
    let chi = h3 / q(6) + c2h / q(12);
    let threshold = h3 / q(2) + &offset / q(12);
    assert_eq!(holds, chi > threshold, "corollary forms disagree at ({}, {})", fmt_q(h3), fmt_q(c2h));
    if holds {
        Verdict::Holds
    } else {
        Verdict::Fails
    }
}

fn cor_alternatives(h3: &Q, c2h: &Q) -> Vec<Alternative> {
    [(false, "c2.H > 4H^3+12"), (true, "c2.H > 4H^3+6")]
        .into_iter()
        .map(|(va, form)| Alternative {
            route: if va { Route::BasepointFreeCorVeryAmple2H.label() } else { Route::BasepointFreeCor.label() },
            verdict: check_basepoint_free_cor(h3, c2h, va),
            detail: format!("{form}: {} vs {}", fmt_q(c2h), fmt_q(&(q(4) * h3 + q(if va { 6 } else { 12 })))),
        })
        .collect()
}

fn genus_from_h3(h3: &Q) -> Result<i64, CatalogError> {
    if !is_integer(h3) || !h3.is_positive() {
        return Err(CatalogError::Malformed(format!("H^3 = {} is not a positive integer", fmt_q(h3))));
    }
    h3.to_integer()
        .to_i64()
        .map(|x| x + 1)
        .ok_or_else(|| CatalogError::Malformed("H^3 too large".into()))
}

/// Verdict plus certificates for a curve of genus `g` in `|H_S|` with
/// `H_S^2 = h3` and BN bound `bn`.
fn conclude(report: &mut Report, bn: &BNBound, chi: &Q, geom: &ThreefoldGeometry, g: i64) -> Result<(), CatalogError> {
    report.bn_bound = Some(BoundReport::from(bn));
    report.verdict = check_main_criterion(bn, chi, true)?;
    if report.verdict != Verdict::Holds {
        return Ok(());
    }
    let cert = epsilon_for_surface(&bn.value, chi, geom.h3(), g, true)?;
    let eps3 = epsilon_from_delta(&cert.epsilon)?;
    let gamma = gamma_cycle(&eps3, geom)?;
    report.epsilon_cert = Some(EpsilonReport {
        a: cert.a.exact(),
        chi: fmt_q(&cert.chi),
        m: fmt_q(&cert.m),
        g: cert.g,
        smooth: cert.smooth,
        n: cert.n,
        delta: fmt_q(&cert.delta),
        epsilon: fmt_q(&cert.epsilon),
        threefold_epsilon: fmt_q(&eps3),
    });
    report.gamma_cert = Some(gamma);
    Ok(())
}

/// `chi(O_M(1))` for a complete intersection `M` of the given degrees in `P^n`.
fn koszul_chi_one(n: i64, degrees: &[i64]) -> Q {
    // chi(O_{P^n}(t)) = (t+1)...(t+n)/n!
    let chi_pn = |t: i64| -> Q {
        let mut num = Q::one();
        for i in 1..=n {
            num = num * q(t + i) / q(i);
        }
        num
    };
    let mut total = Q::zero();
    for mask in 0u32..(1 << degrees.len()) {
        let mut shift = 0;
        for (i, d) in degrees.iter().enumerate() {
            if mask & (1 << i) != 0 {
                shift += d;
            }
        }
        let sign = if mask.count_ones() % 2 == 0 { q(1) } else { q(-1) };
        total += sign * chi_pn(1 - shift);
    }
    total
}

/// Reads off the Fano fourfold containing a complete intersection in ordinary
/// projective space: drop the largest degree.
pub fn fourfold_of(fam: &WCIFamily) -> Result<Fano4Record, CatalogError> {
    if fam.weights.iter().any(|w| *w != 1) {
        return Err(CatalogError::Malformed(format!("{}: the fourfold route needs an unweighted ambient space", fam.name)));
    }
    let mut rest = fam.degrees.clone();
    rest.sort_unstable();
    let r = rest.pop().expect("degrees are nonempty");
    let m = rest.iter().product::<i64>();
    let n = fam.weights.len() as i64 - 1;
    Ok(Fano4Record {
        name: format!("{} fourfold", fam.name),
        r,
        m: q(m),
        picard_rank_one: true,
        chi_oh: koszul_chi_one(n, &rest),
        h3: None,
        route: Fano4Route::Anticanonical,
        notes: String::new(),
    })
}

pub fn check_wci(fam: &WCIFamily) -> Result<Report, CatalogError> {
    let (h3, c2h, chi) = wci_invariants(&fam.weights, &fam.degrees, fam.scale)?;
    let geom = ThreefoldGeometry::new(fam.name.clone(), h3.clone(), c2h.clone())?;
    let g = genus_from_h3(&h3)?;
    let mut report = Report::blank(&fam.name, "wci");
    report.scale = fam.scale;
    report.h3 = Some(fmt_q(&h3));
    report.c2h = Some(fmt_q(&c2h));
    report.chi = fmt_q(&chi);
    report.genus = g;
    report.route = fam.route.label();
    if !fam.notes.is_empty() {
        report.notes.push(fam.notes.clone());
    }
    let alternatives = cor_alternatives(&h3, &c2h);
    match &fam.route {
        Route::Fano4 => {
            if fam.scale != 1 {
                return Err(CatalogError::Malformed("the fourfold route uses the hyperplane class".into()));
            }
            let m4 = fourfold_of(fam)?;
            if m4.chi_oh != chi {
                return Err(CatalogError::Malformed(format!(
                    "chi(O_M(1)) = {} differs from chi(O_X(H)) = {}",
                    fmt_q(&m4.chi_oh),
                    fmt_q(&chi)
                )));
            }
            report.route = format!("fano4 r={} m={}", m4.r, fmt_q(&m4.m));
            let bn = fano4_bound(&m4)?;
            match bn {
                Some(bn) => conclude(&mut report, &bn, &chi, &geom, g)?,
                None => report.notes.push("index 2 with higher Picard rank is not covered".into()),
            }
        }
        Route::BasepointFreeCor | Route::BasepointFreeCorVeryAmple2H => {
            let va = matches!(fam.route, Route::BasepointFreeCorVeryAmple2H);
            let bn = cor_bound(g, va)?;
            conclude(&mut report, &bn, &chi, &geom, g)?;
            let cor = check_basepoint_free_cor(&h3, &c2h, va);
            if (cor == Verdict::Holds) != (report.verdict == Verdict::Holds) {
                return Err(CatalogError::Malformed("corollary and bound comparison disagree".into()));
            }
        }
        Route::K3Embed { s, m } => {
            check_embedded_genus(q(s * s) * m / q(2), &h3)?;
            let bn = bn_upper_k3(*s, m)?;
            conclude(&mut report, &bn, &chi, &geom, g)?;
        }
        Route::DelPezzoEmbed { s, m } => {
            check_embedded_genus(q(s * (s - 1)) * m / q(2), &h3)?;
            let bn = bn_upper_delpezzo(*s, m)?;
            conclude(&mut report, &bn, &chi, &geom, g)?;
        }
    }
    report.alternatives = alternatives;
    Ok(report)
}

fn check_embedded_genus(g_minus_one: Q, h3: &Q) -> Result<(), CatalogError> {
    if &g_minus_one != h3 {
        return Err(CatalogError::Malformed(format!(
            "the embedded curve has g-1 = {} but H^3 = {}",
            fmt_q(&g_minus_one),
            fmt_q(h3)
        )));
    }
    Ok(())
}

fn cor_bound(g: i64, very_ample_2h: bool) -> Result<BNBound, CatalogError> {
    if very_ample_2h {
        // a very ample canonical series rules out hyperelliptic curves
        Ok(clifford_bound(g, 1)?)
    } else {
        Ok(weak_bound(&q(g - 1)))
    }
}

fn fano4_bound(rec: &Fano4Record) -> Result<Option<BNBound>, CatalogError> {
    match rec.r {
        4 | 5 => Ok(Some(weak_bound(&(q(rec.r) * &rec.m)))),
        3 => Ok(Some(bn_upper_delpezzo(3, &rec.m)?)),
        2 if rec.picard_rank_one => Ok(Some(bn_upper_k3(2, &rec.m)?)),
        2 => Ok(None),
        r => Err(CatalogError::Malformed(format!("index {r} is outside [2, 5]"))),
    }
}

pub fn check_fano4(rec: &Fano4Record) -> Result<Report, CatalogError> {
    if !(1..=5).contains(&rec.r) {
        return Err(CatalogError::Malformed(format!("index {} is outside [1, 5]", rec.r)));
    }
    let mut report = Report::blank(&rec.name, "fano4");
    report.chi = fmt_q(&rec.chi_oh);
    if !rec.notes.is_empty() {
        report.notes.push(rec.notes.clone());
    }
    let h3 = rec.h3.clone().unwrap_or_else(|| q(rec.r) * &rec.m);
    let c2h = q(12) * &rec.chi_oh - q(2) * &h3;
    let geom = ThreefoldGeometry::new(rec.name.clone(), h3.clone(), c2h.clone())?;
    let g = genus_from_h3(&h3)?;
    report.h3 = Some(fmt_q(&h3));
    report.c2h = Some(fmt_q(&c2h));
    report.genus = g;
    report.alternatives = cor_alternatives(&h3, &c2h);
    match rec.route {
        Fano4Route::Anticanonical => {
            if rec.h3.as_ref().is_some_and(|x| x != &(q(rec.r) * &rec.m)) {
                return Err(CatalogError::Malformed("H^3 must equal r * H_M^4 on the anticanonical route".into()));
            }
            if rec.r < 2 {
                return Err(CatalogError::Malformed("index 1 fourfolds are not covered".into()));
            }
            report.route = format!("fano4 r={} m={}", rec.r, fmt_q(&rec.m));
            match fano4_bound(rec)? {
                Some(bn) => conclude(&mut report, &bn, &rec.chi_oh, &geom, g)?,
                None => report.notes.push("index 2 with higher Picard rank is not covered".into()),
            }
        }
        Fano4Route::BasepointFreeCor | Fano4Route::BasepointFreeCorVeryAmple2H => {
            let va = rec.route == Fano4Route::BasepointFreeCorVeryAmple2H;
            report.route = if va { Route::BasepointFreeCorVeryAmple2H.label() } else { Route::BasepointFreeCor.label() };
            let bn = cor_bound(g, va)?;
            conclude(&mut report, &bn, &rec.chi_oh, &geom, g)?;
        }
    }
    Ok(report)
}

pub fn check_cyclic_cover(rec: &CoverRecord) -> Result<Report, CatalogError> {
    let (r, d) = (rec.r, rec.d);
    if d < 2 || !(1..=4).contains(&r) || r % (d - 1) != 0 {
        return Err(CatalogError::Malformed(format!("a degree {d} cyclic cover of an index {r} Fano threefold needs (d-1) | r")));
    }
    let hy = &rec.h_y3;
    let fixed = |expected: i64| -> Result<(), CatalogError> {
        if hy != &q(expected) {
            return Err(CatalogError::Malformed(format!("index {r} forces H_Y^3 = {expected}")));
        }
        Ok(())
    };
    let h3 = q(d) * hy;
    let g = genus_from_h3(&h3)?;
    let mut report = Report::blank(&rec.name, "cover");
    report.h3 = Some(fmt_q(&h3));
    report.genus = g;
    if !rec.notes.is_empty() {
        report.notes.push(rec.notes.clone());
    }
    let (chi, bn, route): (Q, Option<BNBound>, String) = match (r, d) {
        (4, _) => {
            fixed(1)?;
            (q(4), Some(weak_bound(&h3)), "weak bound".into())
        }
        (3, _) => {
            fixed(2)?;
            (if d == 2 { q(5) } else { q(6) }, Some(weak_bound(&h3)), "weak bound".into())
        }
        (2, 2) => (hy + q(2), Some(weak_bound(&h3)), "weak bound".into()),
        (2, _) => (hy + q(3), Some(bn_upper_delpezzo(3, hy)?), "del Pezzo embed s=3".into()),
        (1, _) => {
            let chi = hy / q(2) + q(4);
            if rec.picard_rank == 10 {
                // the projection to P^1 makes C hyperelliptic
                let mut profile = CurveProfile::new(g);
                profile.special = Some(SpecialCurve::Hyperelliptic);
                let exact = bn_lower(&profile, None)?
                    .into_iter()
                    .find(|b| b.kind == BoundKind::Exact)
                    .expect("hyperelliptic curves have an exact value");
                (chi, Some(exact), "hyperelliptic".into())
            } else if hy <= &q(4) {
                report.notes.push("geometric steps for H_Y^3 <= 4 are assumed".into());
                (chi, Some(weak_bound(&h3)), "weak bound".into())
            } else if hy == &q(6) {
                let cliff = cover_clifford(g, hy)?;
                report.notes.push(format!("Castelnuovo-Severi excludes gonality <= 3, so Cliff >= {cliff}"));
                (chi, Some(clifford_bound(g, cliff)?), "Clifford bound".into())
            } else if rec.picard_rank == 1 {
                (chi, Some(bn_upper_k3(2, hy)?), "K3 embed s=2".into())
            } else {
                report.notes.push("H_Y^3 > 6 with Picard rank above one is not covered".into());
                (chi, None, "none".into())
            }
        }
        _ => unreachable!("(d-1) | r leaves no other case"),
    };
    report.chi = fmt_q(&chi);
    report.route = route;
    let c2h = q(12) * &chi - q(2) * &h3;
    report.c2h = Some(fmt_q(&c2h));
    let geom = ThreefoldGeometry::new(rec.name.clone(), h3.clone(), c2h)?;
    if !rec.branch_general && [(2, 1), (1, 4), (1, 6)].iter().any(|(a, b)| *a == r && hy == &q(*b)) {
        report.notes.push("the branch divisor must be general here".into());
        return Ok(report);
    }
    if let Some(bn) = bn {
        conclude(&mut report, &bn, &chi, &geom, g)?;
    }
    Ok(report)
}

/// Lower bound for the Clifford index of a double cover of a curve of genus
/// `1 + h_y/2` that no map of degree at most three can factor through.
fn cover_clifford(g: i64, h_y: &Q) -> Result<i64, CatalogError> {
    let g1 = (h_y / q(2) + q(1)).to_integer().to_i64().unwrap_or(0);
    let low_gonality = (2..=3).any(|k| castelnuovo_severi(g, g1, 2, 0, k));
    if low_gonality {
        return Err(CatalogError::Malformed("the gonality cannot be bounded below by four".into()));
    }
    // gonality >= 4 and not a plane quintic
    Ok(if g == 6 { 1 } else { 2 })
}

/// One report per record, in input order. Record errors become reports with
/// `error` set.
pub fn run_catalog(catalog: &Catalog) -> Vec<Report> {
    let mut out = Vec::with_capacity(catalog.len());
    for fam in &catalog.wci {
        out.push(check_wci(fam).unwrap_or_else(|e| Report::failed(&fam.name, "wci", &e)));
    }
    for rec in &catalog.fano4 {
        out.push(check_fano4(rec).unwrap_or_else(|e| Report::failed(&rec.name, "fano4", &e)));
    }
    for rec in &catalog.covers {
        out.push(check_cyclic_cover(rec).unwrap_or_else(|e| Report::failed(&rec.name, "cover", &e)));
    }
    out
}

/// Independent re-check of a `Holds` report: the exact comparison, the
/// certificate conditions and `Gamma.H >= 0`.
pub fn revalidate(report: &Report) -> Result<(), String> {
    if report.verdict != Verdict::Holds {
        return Ok(());
    }
    let chi = crate::exact::parse_q(&report.chi).map_err(|e| e.to_string())?;
    let cert = report.epsilon_cert.as_ref().ok_or("missing epsilon certificate")?;
    let gamma = report.gamma_cert.as_ref().ok_or("missing gamma certificate")?;
    let bn = report.bn_bound.as_ref().ok_or("missing bound")?;
    if bn.exact != cert.a {
        return Err("certificate uses a different bound".into());
    }
    if gamma.gamma_h.is_negative() {
        return Err("Gamma.H is negative".into());
    }
    let parse = |s: &str| crate::exact::parse_q(s).map_err(|e| e.to_string());
    let rebuilt = EpsilonCert {
        a: crate::exact::parse_surd(&cert.a).map_err(|e| e.to_string())?,
        chi: parse(&cert.chi)?,
        m: parse(&cert.m)?,
        g: cert.g,
        smooth: cert.smooth,
        n: cert.n,
        delta: parse(&cert.delta)?,
        epsilon: parse(&cert.epsilon)?,
    };
    rebuilt.validate()?;
    let eps = rebuilt.epsilon;
    if gamma.epsilon != &eps / (q(2) + q(3) * &eps) {
        return Err("gamma was built for a different epsilon".into());
    }
    let value = crate::exact::parse_surd(&bn.exact).map_err(|e| e.to_string())?;
    if value.cmp_q(&chi) != Ordering::Less {
        return Err("bound is not below chi".into());
    }
    Ok(())
}
