//! Subcommand implementations.

use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use cosserat_core::bounds::{BoundReport, Shape};
use cosserat_core::cone3d::{region_membership_grid, CriticalLineOptions, DEFAULT_DELTA};
use cosserat_core::fem::{
    assemble, build_mesh, convergence_study, cosserat_eigs, domain_extents, export_eigenfunction,
    sample_grid, EigMethod, EigOptions, FeSpacePair, FemReport, SchurOperator, Timings,
};
use cosserat_core::mellin2d::{
    essential_spectrum_polygon, lbb_upper_bound, scan_point, CornerSpec2D, ScanRow,
};

use crate::output::{self, Format};
use crate::parse::{self, MeshArg};
use crate::svg;
use crate::CliError;

fn invalid(m: impl Into<String>) -> CliError {
    CliError::Validation(m.into())
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("corners").required(true).args(["omega", "polygon"]))]
pub struct IntervalArgs {
    /// Opening angle with unit, e.g. `90deg` or `1.5708rad`.
    #[arg(long, value_parser = parse::angle, allow_hyphen_values = true)]
    omega: Option<f64>,
    /// Interior angles of a polygon, e.g. `90,90,90,90` (degrees unless suffixed).
    #[arg(long)]
    polygon: Option<String>,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Serialize)]
struct IntervalOut {
    intervals: Vec<[f64; 2]>,
    includes_one: bool,
    beta_upper: f64,
}

pub fn interval(a: IntervalArgs) -> Result<(), CliError> {
    let angles = match (a.omega, a.polygon) {
        (Some(w), _) => vec![w],
        (None, Some(p)) => parse::angle_list(&p).map_err(invalid)?,
        (None, None) => return Err(invalid("give --omega or --polygon")),
    };
    let corners = angles
        .iter()
        .map(|&w| CornerSpec2D::new(w))
        .collect::<cosserat_core::Result<Vec<_>>>()?;
    let ess = essential_spectrum_polygon(&corners)?;
    let beta = lbb_upper_bound(&corners)?;
    let out = IntervalOut {
        intervals: ess.intervals.iter().map(|i| [i.lo, i.hi]).collect(),
        includes_one: ess.includes_one,
        beta_upper: beta,
    };
    let mut w = output::sink(None)?;
    if a.json {
        serde_json::to_writer_pretty(&mut w, &out)?;
        writeln!(w)?;
    } else {
        for [lo, hi] in &out.intervals {
            writeln!(w, "lo={lo:.10} hi={hi:.10}")?;
        }
        writeln!(w, "beta_upper={beta:.7}")?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Args)]
pub struct Scan2dArgs {
    /// Opening-angle range `lo:hi` with units, e.g. `10deg:350deg`.
    #[arg(long, default_value = "1deg:359deg")]
    omega_range: String,
    /// Range of sigma, `lo:hi` inside [0, 1].
    #[arg(long, default_value = "0:1")]
    sigma_range: String,
    /// Grid points per axis, `N` or `NωxNσ`.
    #[arg(long, default_value = "10")]
    steps: String,
    /// Upper end of the imaginary-root search.
    #[arg(long, default_value_t = 20.0)]
    tmax: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn steps(s: &str) -> Result<(usize, usize), CliError> {
    let parts: Vec<&str> = s.split('x').collect();
    let n = |v: &str| {
        v.trim()
            .parse::<usize>()
            .map_err(|_| invalid(format!("invalid steps '{s}'")))
    };
    let (a, b) = match parts.as_slice() {
        [one] => (n(one)?, n(one)?),
        [a, b] => (n(a)?, n(b)?),
        _ => return Err(invalid(format!("invalid steps '{s}'"))),
    };
    if a == 0 || b == 0 {
        return Err(invalid("steps must be positive"));
    }
    Ok((a, b))
}

pub fn scan2d(a: Scan2dArgs) -> Result<(), CliError> {
    let (w0, w1) = parse::range(&a.omega_range, parse::angle).map_err(invalid)?;
    let (s0, s1) = parse::range(&a.sigma_range, parse::number).map_err(invalid)?;
    if !(w0 > 0.0 && w1 <= 2.0 * PI) {
        return Err(invalid("omega must lie in (0, 2 pi]"));
    }
    if !(s0 >= 0.0 && s1 <= 1.0) {
        return Err(invalid("sigma must lie in [0, 1]"));
    }
    if !(a.tmax > 0.0) {
        return Err(invalid("--tmax must be positive"));
    }
    let (nw, ns) = steps(&a.steps)?;
    let ws = parse::linspace(w0, w1, nw);
    let ss = parse::linspace(s0, s1, ns);
    let points: Vec<(f64, f64)> = ws
        .iter()
        .flat_map(|&w| ss.iter().map(move |&s| (w, s)))
        .collect();
    let rows: Vec<Vec<ScanRow>> = points
        .par_iter()
        .map(|&(w, s)| scan_point(w, s, a.tmax))
        .collect::<cosserat_core::Result<_>>()?;
    let rows: Vec<ScanRow> = rows.into_iter().flatten().collect();
    output::write_rows(a.out.as_deref(), a.format, &rows)
}

/// Parses an angle and returns degrees without a round trip through radians.
fn angle_deg(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Some(v) = t.strip_suffix("deg") {
        parse::number(v)
    } else {
        parse::angle(t).map(f64::to_degrees)
    }
}

#[derive(Debug, Args)]
pub struct ConeArgs {
    /// Azimuthal modes, comma separated.
    #[arg(
        long,
        default_value = "0,1",
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    m: Vec<i32>,
    /// Half-opening grid `lo:hi:count` with units, inside (0, 180) degrees.
    #[arg(long, default_value = "1deg:179deg:91")]
    omega_grid: String,
    /// Sigma grid `lo:hi:count` or a list.
    #[arg(long, default_value = "0:1:51")]
    sigma_grid: String,
    /// Height of the critical-line search box, or `auto` to grow it near 0 and 180 degrees.
    #[arg(long, default_value = "auto")]
    tmax: String,
    /// Half-width of the search box around the critical line.
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

pub fn cone(a: ConeArgs) -> Result<(), CliError> {
    let omegas = parse::grid(&a.omega_grid, angle_deg).map_err(invalid)?;
    if omegas.iter().any(|&w| !(w > 0.0 && w < 180.0)) {
        return Err(invalid("cone half-opening must lie in (0, 180) degrees"));
    }
    let sigmas = parse::values(&a.sigma_grid).map_err(invalid)?;
    if sigmas.iter().any(|&s| !(0.0..=1.0).contains(&s)) {
        return Err(invalid("sigma must lie in [0, 1]"));
    }
    let (t_max, scale_t_max) = match a.tmax.trim() {
        "auto" => (20.0, true),
        v => (parse::number(v).map_err(invalid)?, false),
    };
    if !(t_max > 0.0 && a.delta > 0.0 && a.delta < 0.25) {
        return Err(invalid("need --tmax > 0 and 0 < --delta < 0.25"));
    }
    if a.m.is_empty() {
        return Err(invalid("no modes given"));
    }
    let opts = CriticalLineOptions {
        t_max,
        delta: a.delta,
        scale_t_max,
        ..Default::default()
    };
    let rows = region_membership_grid(&omegas, &sigmas, &a.m, &opts)?;
    output::write_rows(a.out.as_deref(), a.format, &rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Rect,
    Cuboid,
}

impl ShapeArg {
    fn dim(self) -> usize {
        match self {
            ShapeArg::Rect => 2,
            ShapeArg::Cuboid => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Dense,
    Lanczos,
}

#[derive(Debug, Args)]
pub struct FemArgs {
    #[arg(long, value_enum, default_value_t = ShapeArg::Rect)]
    shape: ShapeArg,
    /// Aspect parameter: the domain is 1/a x 1 (x 1).
    #[arg(long)]
    a: f64,
    /// `level:n`, `uniform:N`, `refined:L,q` or `cells:AxB[xC]`.
    #[arg(long, default_value = "level:2", value_parser = parse::mesh)]
    mesh: MeshArg,
    /// Run a convergence study over these uniform levels instead of one mesh.
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<u32>>,
    #[arg(long, default_value_t = 2)]
    deg_u: usize,
    #[arg(long, default_value_t = 1)]
    deg_p: usize,
    #[arg(long, default_value_t = 6)]
    num_eigs: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Iteration cap of the Lanczos solver.
    #[arg(long, default_value_t = 2000)]
    max_iter: usize,
    /// Seed of the Lanczos start vectors.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Record wall times in the JSON report.
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write samples of eigenfunction `--field-index` as CSV.
    #[arg(long)]
    field_out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    field_index: usize,
    /// Sample points per axis, e.g. `101x11`.
    #[arg(long, default_value = "101x11")]
    field_samples: String,
}

#[derive(Serialize)]
struct EigRow {
    a: f64,
    level: Option<u32>,
    deg_u: usize,
    deg_p: usize,
    j: usize,
    sigma: f64,
}

pub fn fem(a: FemArgs) -> Result<(), CliError> {
    let dim = a.shape.dim();
    let extents = domain_extents(dim, a.a)?;
    let spaces = FeSpacePair::new(a.deg_u, a.deg_p)?;
    let opts = EigOptions {
        k: a.num_eigs,
        method: match a.method {
            MethodArg::Auto => EigMethod::Auto,
            MethodArg::Dense => EigMethod::Dense,
            MethodArg::Lanczos => EigMethod::Lanczos,
        },
        seed: a.seed,
        max_iter: a.max_iter,
        ..EigOptions::default()
    };
    if let Some(levels) = &a.levels {
        if levels.iter().any(|&n| n == 0 || n > 12) {
            return Err(invalid("levels must lie in 1..=12"));
        }
        let study = convergence_study(&extents, spaces, levels, &opts)?;
        match a.format {
            Format::Json => output::write_json(a.out.as_deref(), &study)?,
            Format::Csv => {
                let rows: Vec<EigRow> = study
                    .levels
                    .iter()
                    .flat_map(|l| {
                        l.sigmas.iter().enumerate().map(move |(j, &s)| EigRow {
                            a: a.a,
                            level: Some(l.level),
                            deg_u: spaces.deg_u,
                            deg_p: spaces.deg_p,
                            j: j + 1,
                            sigma: s,
                        })
                    })
                    .collect();
                output::write_rows(a.out.as_deref(), Format::Csv, &rows)?;
            }
        }
        if study.levels.iter().any(|l| !l.converged) {
            return Err(CliError::NonConvergence(
                "eigensolver missed the residual tolerance".into(),
            ));
        }
        return Ok(());
    }

    let t0 = Instant::now();
    let mesh = build_mesh(&extents, &a.mesh.spec())?;
    let ops = assemble(&mesh, spaces)?;
    let t1 = Instant::now();
    let max_k = ops.ndof_p().saturating_sub(2).max(1);
    let opts = if opts.k > max_k {
        eprintln!("note: only {max_k} eigenvalues available on this mesh");
        EigOptions { k: max_k, ..opts }
    } else {
        opts
    };
    let rep = cosserat_eigs(&ops, &opts)?;
    let timings = a.timings.then(|| Timings {
        assemble_s: (t1 - t0).as_secs_f64(),
        solve_s: t1.elapsed().as_secs_f64(),
    });
    match a.format {
        Format::Json => {
            output::write_json(a.out.as_deref(), &FemReport::new(a.a, &ops, &rep, timings))?
        }
        Format::Csv => {
            let rows: Vec<EigRow> = rep
                .eigs
                .iter()
                .map(|e| EigRow {
                    a: a.a,
                    level: a.mesh.level(),
                    deg_u: spaces.deg_u,
                    deg_p: spaces.deg_p,
                    j: e.j,
                    sigma: e.sigma,
                })
                .collect();
            output::write_rows(a.out.as_deref(), Format::Csv, &rows)?;
        }
    }
    if let Some(path) = &a.field_out {
        let pair = rep
            .eigs
            .get(a.field_index.wrapping_sub(1))
            .ok_or_else(|| invalid(format!("no eigenfunction {}", a.field_index)))?;
        let counts: Vec<usize> = a
            .field_samples
            .split('x')
            .map(|v| {
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| invalid("invalid --field-samples"))
            })
            .collect::<Result<_, _>>()?;
        if counts.len() != dim || counts.contains(&0) {
            return Err(invalid(format!(
                "--field-samples needs {dim} positive counts"
            )));
        }
        let schur = SchurOperator::new(&ops)?;
        let f = export_eigenfunction(
            &ops,
            &pair.vector,
            &sample_grid(&extents, &counts),
            Some(&schur),
        )?;
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(f.header())?;
        for r in f.rows() {
            w.write_record(r.iter().map(|v| v.to_string()))?;
        }
        w.flush()?;
    }
    if !rep.converged {
        return Err(CliError::NonConvergence(
            "eigensolver missed the residual tolerance".into(),
        ));
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_enum, default_value_t = ShapeArg::Rect)]
    shape: ShapeArg,
    /// Aspect parameters, `lo:hi:count` or a list, inside (0, 1].
    #[arg(long, default_value = "0.05:1:20")]
    a_grid: String,
    /// Truncation tolerance of the cuboid series.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Also draw the bounds as SVG polylines.
    #[arg(long)]
    svg: Option<PathBuf>,
}

pub fn bounds(a: BoundsArgs) -> Result<(), CliError> {
    let grid = parse::values(&a.a_grid).map_err(invalid)?;
    if !(a.tol > 0.0) {
        return Err(invalid("--tol must be positive"));
    }
    let shape = match a.shape {
        ShapeArg::Rect => Shape::Rectangle,
        ShapeArg::Cuboid => Shape::Cuboid,
    };
    let rows = grid
        .iter()
        .map(|&x| BoundReport::new(x, shape, a.tol))
        .collect::<cosserat_core::Result<Vec<_>>>()?;
    output::write_rows(a.out.as_deref(), a.format, &rows)?;
    if let Some(path) = &a.svg {
        let pick =
            |name: &'static str, color: &'static str, f: fn(&BoundReport) -> f64| svg::Series {
                name,
                color,
                points: rows.iter().map(|r| (r.a, f(r))).collect(),
            };
        let series = match shape {
            Shape::Rectangle => vec![
                pick("lower_hp", "#1b9e77", |r| r.lower_hp),
                pick("upper_rect", "#d95f02", |r| r.upper_rect),
                pick("upper_co", "#7570b3", |r| r.upper_co),
            ],
            Shape::Cuboid => vec![
                pick("upper_cuboid", "#d95f02", |r| r.upper_cuboid),
                pick("upper_dobrowolski", "#7570b3", |r| r.upper_dobrowolski),
            ],
        };
        let doc = svg::line_plot(
            "Cosserat bounds against a",
            &series,
            Some((0.5 - 1.0 / PI, "1/2 - 1/pi")),
        );
        std::fs::write(path, doc)?;
    }
    Ok(())
}
