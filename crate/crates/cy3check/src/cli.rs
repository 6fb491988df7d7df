//! Command-line front end. Exit codes: 0 when everything checked holds, 1 for
//! usage or input errors, 2 when a check is inconclusive or fails.

use crate::bmtchain::{epsilon_for_surface, gamma_cycle, q_form, verify_ch2_chain, Verdict};
use crate::bnbounds::{bn_upper_delpezzo, bn_upper_k3, classical_upper_bounds, BNBound, CurveProfile};
use crate::catalog::{run_catalog, BoundReport, Catalog, Report, BUNDLED_HYPERGEOMETRIC};
use crate::exact::{fmt_q, is_integer, parse_q, parse_surd, Surd, Q};
use crate::invariants::{ChernSurface, ChernThreefold, SurfaceGeometry, SurfaceKind, ThreefoldGeometry};
use crate::tiltplane::{cap_from_env, enumerate_walls, SlopeWindow, WallLine};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Serialize;
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_MATH: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cy3check", version, about = "Exact checks for stability conditions on Calabi-Yau threefolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every record of a catalog file (the bundled one by default).
    Catalog(CatalogArgs),
    /// List the walls for a class on a K3 or del Pezzo surface.
    Walls(WallsArgs),
    /// Upper bounds on the Brill-Noether number.
    Bn(BnArgs),
    /// The cycle Gamma(eps), optionally evaluating Q^Gamma on a class.
    Bmt(BmtArgs),
    /// Build an epsilon certificate for a surface section.
    Reduce(ReduceArgs),
    /// Randomised audit of the ch2/ch3 inequality chain.
    Audit(AuditArgs),
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GeometryArg {
    K3,
    Delpezzo,
}

#[derive(Debug, Args)]
pub struct WallsArgs {
    #[arg(long, value_enum)]
    pub geometry: GeometryArg,
    #[arg(long, value_parser = rational)]
    pub m: Q,
    /// `r,c1H,ch2`
    #[arg(long, allow_hyphen_values = true)]
    pub class: String,
    /// `bmin,bmax`
    #[arg(long, allow_hyphen_values = true)]
    pub window: String,
    #[arg(long, value_parser = rational)]
    pub depth: Option<Q>,
    #[arg(long)]
    pub cap: Option<u64>,
    #[arg(long)]
    pub picard_rank_one: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct BnArgs {
    #[arg(long, value_enum)]
    pub surface: Option<GeometryArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<i64>,
    #[arg(long, value_parser = rational)]
    pub m: Option<Q>,
    /// Classical bounds for a curve of this genus.
    #[arg(long)]
    pub genus: Option<i64>,
    #[arg(long)]
    pub clifford: Option<i64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct BmtArgs {
    #[arg(long, value_parser = rational)]
    pub h3: Q,
    #[arg(long, value_parser = rational)]
    pub c2h: Q,
    #[arg(long, value_parser = rational)]
    pub epsilon: Q,
    /// `r,c1H2,ch2H,ch3`
    #[arg(long, allow_hyphen_values = true)]
    pub class: Option<String>,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    pub b: Option<Q>,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    pub w: Option<Q>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[arg(long, value_parser = rational)]
    pub m: Q,
    #[arg(long, value_parser = rational)]
    pub chi: Q,
    /// A rational or a surd such as `sqrt(48)`.
    #[arg(long)]
    pub bn: String,
    #[arg(long)]
    pub smooth: bool,
    /// Genus of the curve; defaults to `m + 1`.
    #[arg(long)]
    pub genus: Option<i64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long, value_parser = rational)]
    pub h3: Q,
    #[arg(long, value_parser = rational)]
    pub c2h: Q,
    #[arg(long, value_parser = rational)]
    pub epsilon: Q,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

fn rational(s: &str) -> Result<Q, String> {
    parse_q(s).map_err(|e| e.to_string())
}

fn rational_list(s: &str, len: usize, what: &str) -> Result<Vec<Q>, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != len {
        return Err(format!("{what} needs {len} comma-separated values, got {s:?}"));
    }
    parts.iter().map(|p| rational(p)).collect()
}

fn rank_of(x: &Q) -> Result<i64, String> {
    if !is_integer(x) {
        return Err(format!("rank {} is not an integer", fmt_q(x)));
    }
    x.to_integer().to_i64().ok_or_else(|| "rank out of range".to_string())
}

/// Outcome of one command: text to print and an exit code.
struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: EXIT_OK }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Parses `args` and runs the command, writing results to `out` and
/// diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let result = match cli.command {
        Command::Catalog(a) => cmd_catalog(&a),
        Command::Walls(a) => cmd_walls(&a),
        Command::Bn(a) => cmd_bn(&a),
        Command::Bmt(a) => cmd_bmt(&a),
        Command::Reduce(a) => cmd_reduce(&a),
        Command::Audit(a) => cmd_audit(&a),
    };
    match result {
        Ok(o) => {
            let _ = out.write_all(o.text.as_bytes());
            o.code
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn cmd_catalog(a: &CatalogArgs) -> Result<Outcome, String> {
    let text = match &a.file {
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?,
        None => BUNDLED_HYPERGEOMETRIC.to_string(),
    };
    let mut catalog = Catalog::parse(&text).map_err(|e| e.to_string())?;
    if let Some(name) = &a.family {
        catalog = catalog.select(name);
        if catalog.is_empty() {
            return Err(format!("no record named {name:?}"));
        }
    }
    let reports = run_catalog(&catalog);
    let code = if reports.iter().any(|r| r.error.is_some()) {
        EXIT_INPUT
    } else if reports.iter().all(|r| r.verdict == Verdict::Holds) {
        EXIT_OK
    } else {
        EXIT_MATH
    };
    let text = if a.json { to_json(&reports) } else { catalog_table(&reports) };
    Ok(Outcome { text, code })
}

fn catalog_table(reports: &[Report]) -> String {
    let header = ["family", "k", "H^3", "c2.H", "chi", "route", "bn", "bn (decimal)", "verdict"];
    let mut rows: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for r in reports {
        let (exact, decimal) = match &r.bn_bound {
            Some(BoundReport { exact, decimal, .. }) => (exact.clone(), decimal.clone()),
            None => ("-".into(), "-".into()),
        };
        let verdict = match &r.error {
            Some(_) => "error".to_string(),
            None => r.verdict.to_string(),
        };
        rows.push(vec![
            r.family.clone(),
            r.scale.to_string(),
            r.h3.clone().unwrap_or_else(|| "-".into()),
            r.c2h.clone().unwrap_or_else(|| "-".into()),
            r.chi.clone(),
            r.route.clone(),
            exact,
            decimal,
            verdict,
        ]);
    }
    let mut out = table(&rows);
    for r in reports {
        if let Some(e) = &r.error {
            out.push_str(&format!("{}: {e}\n", r.family));
        }
    }
    out
}

fn table(rows: &[Vec<String>]) -> String {
    let cols = rows[0].len();
    let widths: Vec<usize> = (0..cols).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct WallRow {
    line: String,
    slope: Option<String>,
    intercept: Option<String>,
    destabilizer: String,
}

#[derive(Serialize)]
struct WallsReport {
    class: String,
    walls: Vec<WallRow>,
    slopes: BTreeMap<String, usize>,
}

fn cmd_walls(a: &WallsArgs) -> Result<Outcome, String> {
    let kind = match a.geometry {
        GeometryArg::K3 => SurfaceKind::K3,
        GeometryArg::Delpezzo => SurfaceKind::DelPezzo,
    };
    let geom = SurfaceGeometry::new(kind, a.m.clone(), a.picard_rank_one).map_err(|e| e.to_string())?;
    let c = rational_list(&a.class, 3, "--class")?;
    let v = ChernSurface::new(rank_of(&c[0])?, c[1].clone(), c[2].clone());
    if !geom.on_lattice(&v) {
        return Err(format!("class {v} is not on the lattice"));
    }
    let w = rational_list(&a.window, 2, "--window")?;
    let depth = a.depth.clone().unwrap_or_else(SlopeWindow::default_depth);
    let window = SlopeWindow::new(w[0].clone(), w[1].clone(), depth).map_err(|e| e.to_string())?;
    let cap = match a.cap {
        Some(c) => c,
        None => cap_from_env()?,
    };
    let walls = enumerate_walls(&v, &window, &geom, cap).map_err(|e| e.to_string())?;
    let mut slopes: BTreeMap<String, usize> = BTreeMap::new();
    let rows: Vec<WallRow> = walls
        .iter()
        .map(|cand| {
            let (slope, intercept) = match &cand.wall {
                WallLine::Sloped { slope, intercept } => (Some(fmt_q(slope)), Some(fmt_q(intercept))),
                _ => (None, None),
            };
            if let Some(s) = &slope {
                *slopes.entry(s.clone()).or_default() += 1;
            }
            WallRow { line: cand.wall.to_string(), slope, intercept, destabilizer: cand.u.to_string() }
        })
        .collect();
    let report = WallsReport { class: v.to_string(), walls: rows, slopes };
    if a.json {
        return Ok(Outcome::ok(to_json(&report)));
    }
    let mut out = String::new();
    if report.walls.is_empty() {
        out.push_str("no walls\n");
        return Ok(Outcome::ok(out));
    }
    out.push_str(&format!("{} walls for {}\n", report.walls.len(), report.class));
    let mut rows = vec![vec!["wall".to_string(), "destabilizer".to_string()]];
    for w in &report.walls {
        rows.push(vec![w.line.clone(), w.destabilizer.clone()]);
    }
    out.push_str(&table(&rows));
    out.push_str("slopes:\n");
    for (s, n) in &report.slopes {
        out.push_str(&format!("  {s} x{n}\n"));
    }
    Ok(Outcome::ok(out))
}

fn bound_lines(bounds: &[BNBound], json: bool) -> String {
    let rows: Vec<BoundReport> = bounds.iter().map(BoundReport::from).collect();
    if json {
        return to_json(&rows);
    }
    let mut out = String::new();
    for r in &rows {
        out.push_str(&format!("{}  ({})  {:?} {:?}\n", r.exact, r.decimal, r.source, r.kind));
    }
    out
}

fn cmd_bn(a: &BnArgs) -> Result<Outcome, String> {
    if let Some(surface) = a.surface {
        let s = a.s.ok_or("--surface needs --s")?;
        let m = a.m.as_ref().ok_or("--surface needs --m")?;
        let bound = match surface {
            GeometryArg::Delpezzo => bn_upper_delpezzo(s, m),
            GeometryArg::K3 => bn_upper_k3(s, m),
        }
        .map_err(|e| e.to_string())?;
        return Ok(Outcome::ok(bound_lines(&[bound], a.json)));
    }
    let g = a.genus.ok_or("give either --surface or --genus")?;
    let mut profile = CurveProfile::new(g);
    profile.clifford_lb = a.clifford;
    let bounds = classical_upper_bounds(&profile).map_err(|e| e.to_string())?;
    Ok(Outcome::ok(bound_lines(&bounds, a.json)))
}

#[derive(Serialize)]
struct BmtReport {
    epsilon: String,
    gamma: String,
    #[serde(rename = "gammaH")]
    gamma_h: String,
    q: Option<String>,
}

fn cmd_bmt(a: &BmtArgs) -> Result<Outcome, String> {
    let geom = ThreefoldGeometry::new("cli", a.h3.clone(), a.c2h.clone()).map_err(|e| e.to_string())?;
    let cert = gamma_cycle(&a.epsilon, &geom).map_err(|e| e.to_string())?;
    let qv = match &a.class {
        Some(text) => {
            let c = rational_list(text, 4, "--class")?;
            let v = ChernThreefold::new(rank_of(&c[0])?, c[1].clone(), c[2].clone(), c[3].clone());
            let zero = Q::from_integer(0.into());
            let b = a.b.clone().unwrap_or_else(|| zero.clone());
            let w = a.w.clone().unwrap_or(zero);
            Some(fmt_q(&q_form(&v, &b, &w, &cert.gamma_h, &geom).map_err(|e| e.to_string())?))
        }
        None => None,
    };
    let report = BmtReport { epsilon: fmt_q(&cert.epsilon), gamma: fmt_q(&cert.gamma), gamma_h: fmt_q(&cert.gamma_h), q: qv };
    if a.json {
        return Ok(Outcome::ok(to_json(&report)));
    }
    let mut out = format!("epsilon = {}\ngamma = {}\ngammaH = {}\n", report.epsilon, report.gamma, report.gamma_h);
    if let Some(v) = &report.q {
        out.push_str(&format!("Q = {v}\n"));
    }
    Ok(Outcome::ok(out))
}

#[derive(Serialize)]
struct ReduceReport {
    a: String,
    chi: String,
    m: String,
    g: i64,
    smooth: bool,
    n: Option<i64>,
    delta: String,
    epsilon: String,
}

fn cmd_reduce(a: &ReduceArgs) -> Result<Outcome, String> {
    let bn: Surd = parse_surd(&a.bn).map_err(|e| e.to_string())?;
    let g = match a.genus {
        Some(g) => g,
        None => {
            if !is_integer(&a.m) {
                return Err("--genus is required when m is not an integer".into());
            }
            a.m.to_integer().to_i64().ok_or("m out of range")? + 1
        }
    };
    let cert = match epsilon_for_surface(&bn, &a.chi, &a.m, g, a.smooth) {
        Ok(c) => c,
        Err(e) => {
            return Ok(Outcome { text: format!("{e}\n"), code: EXIT_MATH });
        }
    };
    let r = ReduceReport {
        a: cert.a.exact(),
        chi: fmt_q(&cert.chi),
        m: fmt_q(&cert.m),
        g: cert.g,
        smooth: cert.smooth,
        n: cert.n,
        delta: fmt_q(&cert.delta),
        epsilon: fmt_q(&cert.epsilon),
    };
    if a.json {
        return Ok(Outcome::ok(to_json(&r)));
    }
    let mut out = format!("A = {}\nchi = {}\nm = {}\ng = {}\nsmooth = {}\n", r.a, r.chi, r.m, r.g, r.smooth);
    if let Some(n) = r.n {
        out.push_str(&format!("n = {n}\n"));
    }
    out.push_str(&format!("delta = {}\nepsilon = {}\n", r.delta, r.epsilon));
    Ok(Outcome::ok(out))
}

#[derive(Serialize)]
struct AuditReport {
    samples: u64,
    seed: u64,
    accepted: u64,
    skipped: u64,
    point_class_q: String,
    passed: bool,
    failures: Vec<String>,
}

fn cmd_audit(a: &AuditArgs) -> Result<Outcome, String> {
    if a.samples == 0 {
        return Err("--samples must be at least 1".into());
    }
    let geom = ThreefoldGeometry::new("cli", a.h3.clone(), a.c2h.clone()).map_err(|e| e.to_string())?;
    let audit = verify_ch2_chain(a.samples, &a.epsilon, &geom, a.seed).map_err(|e| e.to_string())?;
    let passed = audit.passed();
    let r = AuditReport {
        samples: audit.samples,
        seed: a.seed,
        accepted: audit.accepted,
        skipped: audit.skipped,
        point_class_q: fmt_q(&audit.point_class_q),
        passed,
        failures: audit.failures.iter().take(10).cloned().collect(),
    };
    let code = if passed { EXIT_OK } else { EXIT_MATH };
    let text = if a.json {
        to_json(&r)
    } else {
        let mut out = format!(
            "samples = {}\nseed = {}\naccepted = {}\nskipped = {}\npoint class Q = {}\nresult = {}\n",
            r.samples,
            r.seed,
            r.accepted,
            r.skipped,
            r.point_class_q,
            if passed { "pass" } else { "fail" }
        );
        for f in &r.failures {
            out.push_str(&format!("  {f}\n"));
        }
        out
    };
    Ok(Outcome { text, code })
}
