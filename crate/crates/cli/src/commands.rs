//! The `surface-info`, `intersect` and `selftest` commands.

use std::path::{Path, PathBuf};

use linecurve::audit::Conventions;
use linecurve::foliation::{find_umbilics, FoliationReport, SurfaceFoliation};
use linecurve::intersection_trace::{find_seed, polish_seed, trace_curve, Seed};
use linecurve::joachimsthal_checks::{defect_final, foliation_report, main_theorem_verdict, sigma_kappa_relation};
use linecurve::oriented_line_space::xi_to_direction;
use linecurve::selftest::{run_selftest, SelftestRow};
use linecurve::support_surface::ConvexityReport;
use linecurve::{Complex64, GeomError, SupportSurface, TracedIntersection, VerificationReport};
use serde::Serialize;

use crate::config::{self, InputError, LoadedConfig};
use crate::output::{csv, fmt_f64, fmt_opt, json, write_atomic};
use crate::tolerances::Tolerances;

pub const CENSUS_COLUMNS: [&str; 4] = ["xi_re", "xi_im", "index", "residual"];

pub const CURVE_COLUMNS: [&str; 19] = [
    "u",
    "s",
    "x",
    "y",
    "z",
    "xi1_re",
    "xi1_im",
    "xi2_re",
    "xi2_im",
    "alpha",
    "A1",
    "A2",
    "beta",
    "phi1",
    "phi2",
    "tau_g1",
    "tau_g2",
    "defect_final",
    "defect_sigma_kappa",
];

/// Environment variable selecting deliberately broken conventions for `selftest`.
pub const SELFTEST_FLIP_ENV: &str = "LINECURVE_SELFTEST_FLIP";

#[derive(Debug, Clone, Serialize)]
pub struct ConfigDigest {
    pub file: String,
    pub sha256: String,
}

impl From<&LoadedConfig> for ConfigDigest {
    fn from(c: &LoadedConfig) -> Self {
        Self {
            file: c.name.clone(),
            sha256: c.sha256.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport<T> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub configs: Vec<ConfigDigest>,
    pub tolerances: Tolerances,
    pub convexity: Vec<ConvexityReport>,
    pub foliation: FoliationReport,
    pub verification: Option<VerificationReport>,
    pub summary: T,
}

fn header<T>(command: &'static str, configs: &[&LoadedConfig], tolerances: Tolerances, summary: T) -> RunReport<T> {
    RunReport {
        tool: "linecurve",
        version: env!("CARGO_PKG_VERSION"),
        command,
        configs: configs.iter().map(|c| ConfigDigest::from(*c)).collect(),
        tolerances,
        convexity: Vec::new(),
        foliation: FoliationReport::new(Vec::new()),
        verification: None,
        summary,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SurfaceSummary {
    pub umbilic_count: usize,
    pub total_index: Option<f64>,
    /// Totally umbilic surface: every point is umbilic and there is no census.
    pub degenerate_census: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveSummary {
    pub samples: usize,
    pub closed: bool,
    pub length: f64,
    pub closure_gap: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
    /// Rotation from world coordinates to the frame of the chart columns.
    pub chart_frame: [[f64; 3]; 3],
    pub seed_point: [f64; 3],
    pub seed_residual: f64,
}

/// Build a surface and reject it when either principal radius is not positive.
pub fn convex_surface(c: &LoadedConfig, grid: usize) -> anyhow::Result<(SupportSurface, ConvexityReport)> {
    let s = c.config.to_surface()?;
    let report = s.convexity_check(grid);
    if report.worst_margin.is_nan() || report.worst_margin <= 0.0 {
        return Err(InputError::NonConvex {
            worst_margin: report.worst_margin,
            direction: report.worst_direction,
        }
        .into());
    }
    Ok((s, report))
}

fn emit(out: Option<&Path>, report: &[u8], tables: &[(&str, Vec<u8>)]) -> anyhow::Result<()> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            for (name, bytes) in tables {
                write_atomic(&dir.join(name), bytes)?;
            }
            write_atomic(&dir.join("report.json"), report)?;
        }
        None => {
            use std::io::Write;
            std::io::stdout().write_all(report)?;
        }
    }
    Ok(())
}

pub struct SurfaceInfoArgs {
    pub config: PathBuf,
    pub grid: usize,
    pub out: Option<PathBuf>,
}

pub fn surface_info(args: &SurfaceInfoArgs, tolerances: Tolerances) -> anyhow::Result<u8> {
    if args.grid < 100 {
        return Err(InputError::Schema(format!("grid {} is below the minimum of 100", args.grid)).into());
    }
    let cfg = config::load(&args.config)?;
    let (s, convexity) = convex_surface(&cfg, args.grid)?;
    let mut foliation = SurfaceFoliation {
        label: cfg.name.clone(),
        winding: None,
        orientable: None,
        umbilics: Vec::new(),
        census_total: None,
        disc_plus: None,
        disc_minus: None,
        note: None,
    };
    let mut rows = Vec::new();
    let degenerate = match find_umbilics(&s) {
        Ok(census) => {
            for u in &census {
                // north-chart coordinate; the excluded pole is xi = infinity
                let xi = u.north_xi().unwrap_or(Complex64::new(f64::INFINITY, 0.0));
                rows.push(vec![
                    fmt_f64(xi.re),
                    fmt_f64(xi.im),
                    fmt_f64(u.index),
                    fmt_f64(u.residual),
                ]);
            }
            foliation.census_total = Some(census.iter().map(|u| u.index).sum());
            foliation.umbilics = census;
            false
        }
        Err(GeomError::DegenerateSurface) => {
            foliation.note = Some("totally umbilic: every point is umbilic, census is degenerate".into());
            true
        }
        Err(e) => return Err(e.into()),
    };
    let summary = SurfaceSummary {
        umbilic_count: foliation.umbilics.len(),
        total_index: foliation.census_total,
        degenerate_census: degenerate,
    };
    let mut report = header("surface-info", &[&cfg], tolerances, summary);
    report.convexity.push(convexity);
    report.foliation = FoliationReport::new(vec![foliation]);
    emit(
        args.out.as_deref(),
        &json(&report)?,
        &[("umbilics.csv", csv(&CENSUS_COLUMNS, &rows))],
    )?;
    Ok(0)
}

pub struct IntersectArgs {
    pub configs: [PathBuf; 2],
    /// `xi1` and `xi2` (north chart) near a common point.
    pub seed: Option<[f64; 4]>,
    pub out: Option<PathBuf>,
}

pub const CONVEXITY_GRID: usize = 2000;

/// Per-sample rows in the order of [`CURVE_COLUMNS`].
pub fn curve_rows(curve: &TracedIntersection) -> Vec<Vec<String>> {
    let defect = defect_final(curve).ok();
    let sk = sigma_kappa_relation(curve).ok().map(|r| r.dressed);
    curve
        .samples
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let x = p.point.to_vector();
            vec![
                fmt_f64(p.u),
                fmt_f64(p.s),
                fmt_f64(x.x),
                fmt_f64(x.y),
                fmt_f64(x.z),
                fmt_f64(p.xi1.re),
                fmt_f64(p.xi1.im),
                fmt_f64(p.xi2.re),
                fmt_f64(p.xi2.im),
                fmt_f64(p.alpha),
                fmt_f64(p.a1),
                fmt_f64(p.a2),
                fmt_opt(p.beta),
                fmt_opt(p.phi1),
                fmt_opt(p.phi2),
                fmt_f64(p.tau_g1),
                fmt_f64(p.tau_g2),
                fmt_opt(defect.as_ref().map(|d| d[k])),
                fmt_opt(sk.as_ref().map(|d| d[k])),
            ]
        })
        .collect()
}

pub fn intersect(args: &IntersectArgs, tolerances: Tolerances) -> anyhow::Result<u8> {
    let c1 = config::load(&args.configs[0])?;
    let c2 = config::load(&args.configs[1])?;
    let (s1, v1) = convex_surface(&c1, CONVEXITY_GRID)?;
    let (s2, v2) = convex_surface(&c2, CONVEXITY_GRID)?;
    let seed: Seed = match args.seed {
        Some([a, b, c, d]) => polish_seed(
            &s1,
            &s2,
            &xi_to_direction(Complex64::new(a, b)),
            &xi_to_direction(Complex64::new(c, d)),
        )?,
        None => find_seed(&s1, &s2)?,
    };
    let curve = trace_curve(&s1, &s2, &seed, &tolerances.trace_options())?;
    let verification = main_theorem_verdict(&s1, &s2, &curve);
    let foliation = foliation_report(&s1, &s2, &curve, verification.windings);
    let alpha = curve.samples.iter().map(|p| p.alpha);
    let f = curve.frame;
    let summary = CurveSummary {
        samples: curve.samples.len(),
        closed: curve.closed,
        length: curve.total_length,
        closure_gap: curve.closure_gap,
        alpha_min: alpha.clone().fold(f64::INFINITY, f64::min),
        alpha_max: alpha.fold(f64::NEG_INFINITY, f64::max),
        chart_frame: [
            [f[(0, 0)], f[(0, 1)], f[(0, 2)]],
            [f[(1, 0)], f[(1, 1)], f[(1, 2)]],
            [f[(2, 0)], f[(2, 1)], f[(2, 2)]],
        ],
        seed_point: [seed.point.x, seed.point.y, seed.point.z],
        seed_residual: seed.residual,
    };
    let mut report = header("intersect", &[&c1, &c2], tolerances, summary);
    report.convexity = vec![v1, v2];
    report.foliation = foliation;
    report.verification = Some(verification);
    emit(
        args.out.as_deref(),
        &json(&report)?,
        &[("curve.csv", csv(&CURVE_COLUMNS, &curve_rows(&curve)))],
    )?;
    Ok(0)
}

/// Parse the hidden convention-flip hook: a comma-separated subset of
/// `pot1`, `coordu`, `cone`.
pub fn flip_hook(value: Option<&str>) -> Result<Conventions, InputError> {
    let mut conv = Conventions::AUDITED;
    for item in value.unwrap_or("").split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item {
            "pot1" => conv.flip_pot1 = true,
            "coordu" => conv.flip_coordu = true,
            "cone" => conv.flip_cone_sign = true,
            other => return Err(InputError::Schema(format!("unknown convention flip {other:?}"))),
        }
    }
    Ok(conv)
}

pub fn selftest_table(rows: &[SelftestRow]) -> String {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in rows {
        out.push_str(&format!(
            "{:<width$}  {:>12.3e}  <= {:<8.1e} {}\n",
            r.name,
            r.value,
            r.tolerance,
            if r.passed { "PASS" } else { "FAIL" },
        ));
    }
    out
}

pub fn selftest(conv: &Conventions) -> u8 {
    let rows = run_selftest(conv);
    print!("{}", selftest_table(&rows));
    let failed = rows.iter().filter(|r| !r.passed).count();
    if failed == 0 {
        println!("selftest: all {} checks passed", rows.len());
        0
    } else {
        println!("selftest: {failed} of {} checks failed", rows.len());
        1
    }
}

/// Exit status for an error, following the documented table.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<InputError>() {
            return match e {
                InputError::Schema(_) => 2,
                InputError::NonConvex { .. } => 3,
            };
        }
        if let Some(e) = cause.downcast_ref::<GeomError>() {
            return match e {
                GeomError::InvalidSurface(_) | GeomError::NotOrthonormal(_) => 2,
                GeomError::NonConvex { .. } => 3,
                GeomError::NoIntersection(_) => 4,
                GeomError::TangentialContact => 5,
                _ => 7,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 6;
        }
    }
    1
}
