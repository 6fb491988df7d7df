//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use cy3check::exact::{q, Q};
use cy3check::invariants::{ChernSurface, SurfaceGeometry};
use cy3check::tiltplane::{SlopeWindow, WallLine};
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

pub type R = Ratio<i128>;

pub fn r(n: i128, d: i128) -> R {
    R::new(n, d)
}

/// Converts a small exact rational into an `i128` ratio.
pub fn small(x: &Q) -> R {
    let n: i128 = x.numer().try_into().expect("numerator fits");
    let d: i128 = x.denom().try_into().expect("denominator fits");
    R::new(n, d)
}

// ---------------------------------------------------------------------------
// Weighted complete intersections via truncated power series

/// Coefficients of `prod(1 + w t) / prod(1 + d t)` up to `t^2`.
fn chern_series(weights: &[i64], degrees: &[i64]) -> [i128; 3] {
    let mut c = [1i128, 0, 0];
    let mul = |c: &mut [i128; 3], a: i128| {
        c[2] += a * c[1];
        c[1] += a;
    };
    for w in weights {
        mul(&mut c, *w as i128);
    }
    for d in degrees {
        // (1 + d t)^-1 = 1 - d t + d^2 t^2
        let d = *d as i128;
        let (c0, c1, c2) = (c[0], c[1], c[2]);
        c = [c0, c1 - d * c0, c2 - d * c1 + d * d * c0];
    }
    c
}

/// `(H^3, c2.H, chi(O(H)))` at polarisation `kH`.
pub fn wci_oracle(weights: &[i64], degrees: &[i64], k: i64) -> (R, R, R) {
    let series = chern_series(weights, degrees);
    assert_eq!(series[1], 0, "not Calabi-Yau");
    let deg_num: i128 = degrees.iter().map(|d| *d as i128).product();
    let deg_den: i128 = weights.iter().map(|w| *w as i128).product();
    let base = r(deg_num, deg_den);
    let k = k as i128;
    let h3 = base * (k * k * k);
    let c2h = base * (series[2] * k);
    let chi = h3 / 6 + c2h / 12;
    (h3, c2h, chi)
}

// ---------------------------------------------------------------------------
// Grid search over convex paths for the del Pezzo bound

pub fn psi(x: R, y: R, m: i128) -> R {
    if y.is_zero() {
        assert!(x <= R::zero(), "psi undefined at ({x}, 0)");
        return R::zero();
    }
    assert!(y > R::zero());
    let ratio = x / y;
    if ratio > r(-1, 2) {
        return y / 2 + x;
    }
    let t = -ratio * 2;
    if t.is_integer() {
        return y / (t * m);
    }
    let n = t.floor().to_integer();
    let den = (n * n + n) * m + 2;
    (y * (2 * n + 1) + x * 2) / den
}

fn path_value(points: &[(R, R)], m: i128) -> Option<R> {
    let mut total = R::zero();
    for w in points.windows(2) {
        let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        if dy.is_negative() || (dy.is_zero() && dx.is_positive()) {
            return None;
        }
        total += psi(dx, dy, m);
    }
    Some(total)
}

/// `P` and `Q` for rank one and degree `(s-1) s m / 2`.
pub fn dp_triangle(s: i128, m: i128) -> ((R, R), (R, R)) {
    let d = R::from_integer((s - 1) * s * m / 2);
    let p = (d - R::from_integer(s * s * m) / 2, R::from_integer(s * m));
    let qv = (d - R::from_integer((3 * s + 1) * (s - 1) * m) / 8, R::from_integer((s - 1) * m) / 2);
    (p, qv)
}

fn bary(qv: (R, R), p: (R, R), i: i128, j: i128, n: i128) -> (R, R) {
    ((qv.0 * i + p.0 * j) / n, (qv.1 * i + p.1 * j) / n)
}

/// Best two-segment path `O -> P1 -> P` with `P1` on the barycentric grid of
/// step `1/n`.
pub fn grid_two_segment(s: i128, m: i128, n: i128) -> R {
    let (p, qv) = dp_triangle(s, m);
    let o = (R::zero(), R::zero());
    let mut best = path_value(&[o, p], m).unwrap();
    for i in 0..=n {
        for j in 0..=(n - i) {
            let p1 = bary(qv, p, i, j, n);
            if let Some(v) = path_value(&[o, p1, p], m) {
                if v > best {
                    best = v;
                }
            }
        }
    }
    best
}

fn turn(a: (R, R), b: (R, R), c: (R, R)) -> R {
    (b.0 - a.0) * (c.1 - b.1) - (b.1 - a.1) * (c.0 - b.0)
}

/// Best convex three-segment path `O -> P1 -> P2 -> P` on a coarser grid.
pub fn grid_three_segment(s: i128, m: i128, n: i128) -> R {
    let (p, qv) = dp_triangle(s, m);
    let o = (R::zero(), R::zero());
    let orientation = turn(o, qv, p).signum();
    let mut pts = Vec::new();
    for i in 0..=n {
        for j in 0..=(n - i) {
            pts.push(bary(qv, p, i, j, n));
        }
    }
    let mut best = path_value(&[o, p], m).unwrap();
    for &p1 in &pts {
        for &p2 in &pts {
            let path = [o, p1, p2, p];
            let convex = [turn(o, p1, p2), turn(p1, p2, p), turn(p2, p, o), turn(p, o, p1)]
                .iter()
                .all(|t| t.is_zero() || t.signum() == orientation);
            if !convex {
                continue;
            }
            if let Some(v) = path_value(&path, m) {
                if v > best {
                    best = v;
                }
            }
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Brute-force wall listing

#[derive(Debug, Clone, Copy)]
pub struct Box3 {
    pub rank: i64,
    /// bound on `|c1.H|`
    pub c1: i64,
    /// bound on `|2 ch2|` for rank zero witnesses
    pub twice_ch2: i64,
}

fn div_floor(a: i128, b: i128) -> i128 {
    let d = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        d - 1
    } else {
        d
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -div_floor(-a, b)
}

/// A witness `(r, c1.H, 2 ch2)` in integers.
type Witness = (i128, i128, i128);

fn key(u: Witness) -> (i128, i128, i128, i128, i128, i128) {
    (u.0.abs(), u.1.abs(), u.2.abs(), u.0, u.1, u.2)
}

/// `F(b, w) = Z_u x Z_v` written out, which is affine in `(b, w)`.
fn cross_form(u: Witness, v: Witness, m: i128, b: R, w: R) -> R {
    let nu = |x: Witness| r(x.2, 2) - w * (x.0 * m);
    let de = |x: Witness| R::from_integer(x.1) - b * (x.0 * m);
    nu(u) * de(v) - nu(v) * de(u)
}

fn oracle_line(u: Witness, v: Witness, m: i128) -> Option<(R, R)> {
    let (zero, one) = (R::zero(), R::from_integer(1));
    let k0 = cross_form(u, v, m, zero, zero);
    let kb = cross_form(u, v, m, one, zero) - k0;
    let kw = cross_form(u, v, m, zero, one) - k0;
    if kw.is_zero() {
        return None;
    }
    Some((-kb / kw, -k0 / kw))
}

/// Open interval of `b` where both `u` and `v - u` have positive twisted c1,
/// intersected with the window.
fn positivity_interval(u: Witness, rest: Witness, m: i128, lo: R, hi: R) -> Option<(R, R)> {
    let (mut lo, mut hi) = (lo, hi);
    for x in [u, rest] {
        if x.0 == 0 {
            if x.1 <= 0 {
                return None;
            }
            continue;
        }
        let root = r(x.1, x.0 * m);
        if x.0 > 0 {
            hi = hi.min(root);
        } else {
            lo = lo.max(root);
        }
    }
    (lo < hi).then_some((lo, hi))
}

/// `x < sqrt(d)` for `d > 0`.
fn below_root(x: R, d: R) -> bool {
    x.is_negative() || x * x < d
}

/// The open interval `slope -+ sqrt(D)` where the line lies more than `depth`
/// above the parabola must meet the positivity interval.
fn deep_enough(slope: R, intercept: R, depth: R, lo: R, hi: R) -> bool {
    let disc = slope * slope + (intercept - depth) * 2;
    disc.is_positive() && below_root(lo - slope, disc) && below_root(slope - hi, disc)
}

/// All walls found in the box, keyed by `(slope, intercept)` with the smallest
/// witness.
pub fn brute_walls(v: &ChernSurface, window: &SlopeWindow, geom: &SurfaceGeometry, bx: Box3) -> BTreeMap<(Q, Q), ChernSurface> {
    let m = geom.m().clone();
    assert!(m.is_integer());
    let m_int: i128 = m.to_integer().try_into().unwrap();
    let lat = geom.lattice();
    assert!(lat.c1_step.is_integer());
    let c_step: i128 = lat.c1_step.to_integer().try_into().unwrap();
    let e_step2: i128 = (&lat.ch2_step * q(2)).to_integer().try_into().unwrap();
    let vw: Witness = (v.r as i128, v.c1h.to_integer().try_into().unwrap(), (&v.ch2 * q(2)).to_integer().try_into().unwrap());
    let (bmin, bmax, depth) = (small(&window.bmin), small(&window.bmax), small(&window.depth));
    // Delta = c^2 - r m (2 ch2)
    let disc = |x: Witness| x.1 * x.1 - x.0 * m_int * x.2;
    let dv = disc(vw);
    let mut best: BTreeMap<(R, R), Witness> = BTreeMap::new();
    for ru in -(bx.rank as i128)..=(bx.rank as i128) {
        if ru == 0 && vw.0 == 0 {
            continue;
        }
        let c_lim = bx.c1 as i128 / c_step;
        for ci in -c_lim..=c_lim {
            let cu = ci * c_step;
            // 0 <= c^2 - r m e2 <= dv pins e2 to an interval when r != 0
            let (lo, hi) = if ru == 0 {
                (-(bx.twice_ch2 as i128), bx.twice_ch2 as i128)
            } else {
                let rm = ru * m_int;
                let (a, b) = (cu * cu - dv, cu * cu);
                if rm > 0 {
                    (div_ceil(a, rm), div_floor(b, rm))
                } else {
                    (div_ceil(b, rm), div_floor(a, rm))
                }
            };
            for ej in div_ceil(lo, e_step2)..=div_floor(hi, e_step2) {
                let u: Witness = (ru, cu, ej * e_step2);
                let rest: Witness = (vw.0 - u.0, vw.1 - u.1, vw.2 - u.2);
                let du = disc(u);
                if du < 0 || du > dv || disc(rest) < 0 {
                    continue;
                }
                let Some((slope, intercept)) = oracle_line(u, vw, m_int) else { continue };
                let Some((lo, hi)) = positivity_interval(u, rest, m_int, bmin, bmax) else { continue };
                if !deep_enough(slope, intercept, depth, lo, hi) {
                    continue;
                }
                let entry = best.entry((slope, intercept)).or_insert(u);
                if key(u) < key(*entry) {
                    *entry = u;
                }
            }
        }
    }
    best.into_iter()
        .map(|((s, i), u)| {
            let big = |x: R| Q::new((*x.numer()).into(), (*x.denom()).into());
            ((big(s), big(i)), ChernSurface::new(u.0 as i64, Q::from_integer(u.1.into()), Q::new(u.2.into(), 2.into())))
        })
        .collect()
}

pub fn as_pair(line: &WallLine) -> Option<(Q, Q)> {
    match line {
        WallLine::Sloped { slope, intercept } => Some((slope.clone(), intercept.clone())),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Certificates

/// Supremum of the admissible delta in the smooth case, by bisection.
pub fn smooth_delta_sup(a: f64, chi: f64, m: f64, n: f64) -> f64 {
    let ok = |d: f64| d * d <= 1.0 / (2.0 * m * m * n * n) && 0.5 * d * d + 0.5 * d + (a - chi + 1.0 / (n * n)) / (2.0 * m) <= 0.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Largest admissible delta in the singular case, exactly.
pub fn singular_delta_sup(a: &Q, chi: &Q, m: &Q, g: i64) -> Q {
    // 3x/2 + (A - chi + 1)/m <= 0 and x m <= 2g - 2
    let root = q(2) * (chi - a - q(1)) / (q(3) * m);
    root.min(q(2 * g - 2) / m)
}
