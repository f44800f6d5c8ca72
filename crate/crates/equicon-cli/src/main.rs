//! Thin command-line adapter over the equicon library: every subcommand
//! parses degrees at the boundary, converts to radians exactly once, calls
//! into the library, and formats results. No numeric logic lives here.
//!
//! Exit codes: 0 success, 1 runtime/domain error, 2 usage error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use equicon::distortion::{
    analyze_annulus, compare_specs, sigma_profile, tissot, DistortionReport, SphericalAnnulus,
};
use equicon::io::{
    read_plane_csv_with_lines, read_points_with_lines, read_polylines, write_plane_csv,
    write_points_csv, write_profile_csv, write_report_csv, write_tissot_csv, write_trace_csv,
};
use equicon::optimizer::{
    optimize_cylindrical, optimize_one_parallel, optimize_two_parallels, OptimizationResult,
};
use equicon::projection::{
    build_azimuthal, build_conic_one_parallel, build_conic_two_parallels, build_cylindrical,
    forward, inverse, ConicSpec, Provenance,
};
use equicon::render::{render_svg, RenderConfig, TissotGrid};
use equicon::sphere::{solve_sides_from_angles, TriangleAngles};
use equicon::GeoPoint;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "equicon",
    version,
    about = "Equidistant conic-family projections: transforms, distortion analysis, optimization, rendering"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Project lon/lat CSV points to plane coordinates.
    Project(ProjectArgs),
    /// Invert plane x/y CSV points back to lon/lat.
    Invert(ProjectArgs),
    /// Report L, ell, v and K_max over an annulus.
    Analyze(AnalyzeArgs),
    /// Tissot indicatrix at a point or over a CSV of points.
    Tissot(TissotArgs),
    /// Find distortion-minimizing standard parallels.
    Optimize(OptimizeArgs),
    /// Compare family members over one annulus.
    Compare(CompareArgs),
    /// Render an SVG map with graticule and optional Tissot overlay.
    Render(RenderArgs),
    /// Solve a spherical triangle from its three angles.
    Triangle(TriangleArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Family {
    Conic1,
    Conic2,
    Azimuthal,
    Cylindrical,
}

#[derive(Args)]
struct FamilyArgs {
    /// Projection family.
    #[arg(long, value_enum)]
    family: Family,
    /// Standard parallel for conic1, degrees.
    #[arg(long)]
    phi0: Option<f64>,
    /// Lower standard parallel for conic2, degrees.
    #[arg(long)]
    phi1: Option<f64>,
    /// Upper standard parallel for conic2, degrees.
    #[arg(long)]
    phi2: Option<f64>,
    /// True-scale parallel for cylindrical, degrees.
    #[arg(long)]
    phis: Option<f64>,
}

struct UsageError(String);

impl FamilyArgs {
    fn reject_extraneous(&self, allowed: &[&str]) -> Result<(), UsageError> {
        let flags = [
            ("--phi0", self.phi0.is_some()),
            ("--phi1", self.phi1.is_some()),
            ("--phi2", self.phi2.is_some()),
            ("--phis", self.phis.is_some()),
        ];
        for (name, present) in flags {
            if present && !allowed.contains(&name) {
                return Err(UsageError(format!(
                    "{name} contradicts --family {}",
                    match self.family {
                        Family::Conic1 => "conic1",
                        Family::Conic2 => "conic2",
                        Family::Azimuthal => "azimuthal",
                        Family::Cylindrical => "cylindrical",
                    }
                )));
            }
        }
        Ok(())
    }

    fn require(flag: Option<f64>, name: &str) -> Result<f64, UsageError> {
        flag.ok_or_else(|| UsageError(format!("missing required flag {name}")))
    }

    /// Degrees cross to radians here, exactly once.
    fn build(&self) -> Result<Result<ConicSpec, equicon::Error>, UsageError> {
        Ok(match self.family {
            Family::Conic1 => {
                self.reject_extraneous(&["--phi0"])?;
                let phi0 = Self::require(self.phi0, "--phi0")?;
                build_conic_one_parallel(phi0.to_radians())
            }
            Family::Conic2 => {
                self.reject_extraneous(&["--phi1", "--phi2"])?;
                let phi1 = Self::require(self.phi1, "--phi1")?;
                let phi2 = Self::require(self.phi2, "--phi2")?;
                build_conic_two_parallels(phi1.to_radians(), phi2.to_radians())
            }
            Family::Azimuthal => {
                self.reject_extraneous(&[])?;
                Ok(build_azimuthal())
            }
            Family::Cylindrical => {
                self.reject_extraneous(&["--phis"])?;
                let phis = Self::require(self.phis, "--phis")?;
                build_cylindrical(phis.to_radians())
            }
        })
    }
}

/// "S:N" in degrees, south strictly below north.
fn parse_annulus(raw: &str) -> Result<SphericalAnnulus, UsageError> {
    let parts: Vec<&str> = raw.split(':').collect();
    if parts.len() != 2 {
        return Err(UsageError(format!(
            "--annulus must be S:N in degrees, got {raw:?}"
        )));
    }
    let south: f64 = parts[0]
        .parse()
        .map_err(|_| UsageError(format!("annulus south bound {:?} is not a number", parts[0])))?;
    let north: f64 = parts[1]
        .parse()
        .map_err(|_| UsageError(format!("annulus north bound {:?} is not a number", parts[1])))?;
    SphericalAnnulus::from_degrees(south, north).map_err(|e| UsageError(e.to_string()))
}

#[derive(Args)]
struct ProjectArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Input CSV path.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Annulus S:N in degrees.
    #[arg(long)]
    annulus: String,
    /// Latitude guard-grid step, degrees.
    #[arg(long, default_value_t = 0.01)]
    grid_step: f64,
    /// Also write a per-latitude sigma profile CSV.
    #[arg(long)]
    dump_profile: Option<PathBuf>,
}

#[derive(Args)]
struct TissotArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Latitude of a single probe point, degrees.
    #[arg(long, requires = "lon")]
    lat: Option<f64>,
    /// Longitude of a single probe point, degrees.
    #[arg(long, requires = "lat")]
    lon: Option<f64>,
    /// Batch input CSV (lon_deg,lat_deg); mutually exclusive with --lat/--lon.
    #[arg(long = "in", conflicts_with_all = ["lat", "lon"])]
    input: Option<PathBuf>,
    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OptimizeArgs {
    /// Family to optimize: conic1, conic2 or cylindrical.
    #[arg(long, value_enum)]
    family: Family,
    /// Annulus S:N in degrees.
    #[arg(long)]
    annulus: String,
    /// Dump the search trace CSV (p1_deg,p2_deg,v).
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Comma-separated families, e.g. conic1,conic2,cylindrical,azimuthal.
    #[arg(long, value_delimiter = ',')]
    families: Vec<Family>,
    /// Annulus S:N in degrees.
    #[arg(long)]
    annulus: String,
    /// Optimize each family's parameters before comparing.
    #[arg(long)]
    optimize: bool,
    #[arg(long)]
    phi0: Option<f64>,
    #[arg(long)]
    phi1: Option<f64>,
    #[arg(long)]
    phi2: Option<f64>,
    #[arg(long)]
    phis: Option<f64>,
    /// Latitude guard-grid step, degrees.
    #[arg(long, default_value_t = 0.01)]
    grid_step: f64,
    /// Also write the table as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Polyline CSV (id,lon_deg,lat_deg) to draw.
    #[arg(long)]
    map: Option<PathBuf>,
    /// Graticule spacing, degrees.
    #[arg(long, default_value_t = 15.0)]
    graticule: f64,
    /// Tissot lattice spacing, degrees; enables the overlay.
    #[arg(long)]
    tissot: Option<f64>,
    /// Display multiplier for Tissot ellipse radii.
    #[arg(long, default_value_t = 0.05)]
    tissot_scale: f64,
    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TriangleArgs {
    /// Three interior angles in degrees, comma-separated.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    angles: Vec<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Project(args) => run_project(args),
        Command::Invert(args) => run_invert(args),
        Command::Analyze(args) => run_analyze(args),
        Command::Tissot(args) => run_tissot(args),
        Command::Optimize(args) => run_optimize(args),
        Command::Compare(args) => run_compare(args),
        Command::Render(args) => run_render(args),
        Command::Triangle(args) => run_triangle(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(RunError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(RunError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

enum RunError {
    Usage(String),
    Domain(String),
}

impl From<UsageError> for RunError {
    fn from(e: UsageError) -> Self {
        RunError::Usage(e.0)
    }
}

impl From<equicon::Error> for RunError {
    fn from(e: equicon::Error) -> Self {
        RunError::Domain(e.to_string())
    }
}

type RunResult = Result<(), RunError>;

fn build_spec(args: &FamilyArgs) -> Result<ConicSpec, RunError> {
    Ok(args.build()??)
}

// All numeric text output shares the library's fixed-point formatting.
fn fmt(v: f64) -> String {
    format!("{v:.15}")
}

fn write_out(out: &Option<PathBuf>, contents: &[u8]) -> RunResult {
    match out {
        Some(path) => std::fs::write(path, contents)
            .map_err(|e| RunError::Domain(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(contents)
                .map_err(|e| RunError::Domain(e.to_string()))
        }
    }
}

fn run_project(args: ProjectArgs) -> RunResult {
    let spec = build_spec(&args.family)?;
    let points = read_points_with_lines(&args.input)?;
    let mut projected = Vec::with_capacity(points.len());
    for (line, p) in points {
        let q = forward(&spec, p).map_err(|e| {
            RunError::Domain(format!("{}:{line}: {e}", args.input.display()))
        })?;
        projected.push(q);
    }
    let mut buf = Vec::new();
    write_plane_csv(&projected, &mut buf)?;
    write_out(&args.out, &buf)
}

fn run_invert(args: ProjectArgs) -> RunResult {
    let spec = build_spec(&args.family)?;
    let points = read_plane_csv_with_lines(&args.input)?;
    let mut geo = Vec::with_capacity(points.len());
    for (line, q) in points {
        let p = inverse(&spec, q).map_err(|e| {
            RunError::Domain(format!("{}:{line}: {e}", args.input.display()))
        })?;
        geo.push(p);
    }
    let mut buf = Vec::new();
    write_points_csv(&geo, &mut buf)?;
    write_out(&args.out, &buf)
}

fn print_report(out: &mut String, r: &DistortionReport) {
    let _ = writeln!(out, "L: {}", fmt(r.sup_sigma));
    let _ = writeln!(out, "ell: {}", fmt(r.inf_sigma));
    let _ = writeln!(out, "v: {}", fmt(r.metrical_distortion));
    let _ = writeln!(out, "K_max: {}", fmt(r.max_dilatation));
    let _ = writeln!(out, "witness_L_phi_deg: {}", fmt(r.witness_sup.lat_degrees()));
    let _ = writeln!(out, "witness_ell_phi_deg: {}", fmt(r.witness_inf.lat_degrees()));
}

fn run_analyze(args: AnalyzeArgs) -> RunResult {
    let spec = build_spec(&args.family)?;
    let region = parse_annulus(&args.annulus)?;
    if args.grid_step <= 0.0 {
        return Err(RunError::Usage(format!(
            "--grid-step must be positive, got {}",
            args.grid_step
        )));
    }
    let step = args.grid_step.to_radians();
    let report = analyze_annulus(&spec, &region, step)?;
    let mut out = String::new();
    print_report(&mut out, &report);
    print!("{out}");
    if let Some(path) = args.dump_profile {
        let profile = sigma_profile(&spec, &region, step)?;
        let mut buf = Vec::new();
        write_profile_csv(&profile, &mut buf)?;
        std::fs::write(&path, buf)
            .map_err(|e| RunError::Domain(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn run_tissot(args: TissotArgs) -> RunResult {
    let spec = build_spec(&args.family)?;
    match (&args.input, args.lat, args.lon) {
        (Some(path), None, None) => {
            let points = read_points_with_lines(path)?;
            let mut rows = Vec::with_capacity(points.len());
            for (line, p) in points {
                let e = tissot(&spec, p)
                    .map_err(|e| RunError::Domain(format!("{}:{line}: {e}", path.display())))?;
                rows.push((p, e));
            }
            let mut buf = Vec::new();
            write_tissot_csv(&rows, &mut buf)?;
            write_out(&args.out, &buf)
        }
        (None, Some(lat), Some(lon)) => {
            let p = GeoPoint::from_degrees(lat, lon)?;
            let e = tissot(&spec, p)?;
            let mut out = String::new();
            let _ = writeln!(out, "semi_major: {}", fmt(e.semi_major));
            let _ = writeln!(out, "semi_minor: {}", fmt(e.semi_minor));
            let _ = writeln!(out, "orientation_rad: {}", fmt(e.orientation));
            let _ = writeln!(out, "center_x: {}", fmt(e.center.x));
            let _ = writeln!(out, "center_y: {}", fmt(e.center.y));
            write_out(&args.out, out.as_bytes())
        }
        _ => Err(RunError::Usage(
            "tissot needs either --lat and --lon, or --in <csv>".to_string(),
        )),
    }
}

fn print_optimization(out: &mut String, family: &str, r: &OptimizationResult) {
    let _ = writeln!(out, "family: {family}");
    match r.best_spec.provenance() {
        Provenance::OneParallel { phi0 } => {
            let _ = writeln!(out, "phi0_deg: {}", fmt(phi0.to_degrees()));
        }
        Provenance::TwoParallels { phi1, phi2 } => {
            let _ = writeln!(out, "phi1_deg: {}", fmt(phi1.to_degrees()));
            let _ = writeln!(out, "phi2_deg: {}", fmt(phi2.to_degrees()));
        }
        Provenance::Cylindrical { phi_s } => {
            let _ = writeln!(out, "phis_deg: {}", fmt(phi_s.to_degrees()));
        }
        Provenance::Azimuthal => {}
    }
    let _ = writeln!(out, "v_star: {}", fmt(r.v_star));
    let _ = writeln!(out, "certificate: {}", fmt(r.certificate));
    let _ = writeln!(out, "evaluations: {}", r.evaluations);
}

fn run_optimize(args: OptimizeArgs) -> RunResult {
    let region = parse_annulus(&args.annulus)?;
    let (name, result) = match args.family {
        Family::Conic1 => ("conic1", optimize_one_parallel(&region)?),
        Family::Conic2 => ("conic2", optimize_two_parallels(&region)?),
        Family::Cylindrical => ("cylindrical", optimize_cylindrical(&region)?),
        Family::Azimuthal => {
            return Err(RunError::Usage(
                "the azimuthal member has no free parameter to optimize".to_string(),
            ))
        }
    };
    let mut out = String::new();
    print_optimization(&mut out, name, &result);
    print!("{out}");
    if let Some(path) = args.trace {
        let mut buf = Vec::new();
        write_trace_csv(&result.search_trace, &mut buf)?;
        std::fs::write(&path, buf)
            .map_err(|e| RunError::Domain(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn run_compare(args: CompareArgs) -> RunResult {
    if args.families.is_empty() {
        return Err(RunError::Usage("--families must name at least one family".to_string()));
    }
    let region = parse_annulus(&args.annulus)?;
    if args.grid_step <= 0.0 {
        return Err(RunError::Usage(format!(
            "--grid-step must be positive, got {}",
            args.grid_step
        )));
    }
    let step = args.grid_step.to_radians();
    let mut specs = Vec::new();
    for family in &args.families {
        let spec = match (family, args.optimize) {
            (Family::Conic1, true) => optimize_one_parallel(&region)?.best_spec,
            (Family::Conic2, true) => optimize_two_parallels(&region)?.best_spec,
            (Family::Cylindrical, true) => optimize_cylindrical(&region)?.best_spec,
            (Family::Azimuthal, _) => build_azimuthal(),
            (family, false) => {
                let args = FamilyArgs {
                    family: *family,
                    phi0: args.phi0,
                    phi1: args.phi1,
                    phi2: args.phi2,
                    phis: args.phis,
                };
                // Parameter flags are shared across the list; per-family
                // contradiction checks do not apply here.
                match family {
                    Family::Conic1 => build_conic_one_parallel(
                        FamilyArgs::require(args.phi0, "--phi0")?.to_radians(),
                    )?,
                    Family::Conic2 => build_conic_two_parallels(
                        FamilyArgs::require(args.phi1, "--phi1")?.to_radians(),
                        FamilyArgs::require(args.phi2, "--phi2")?.to_radians(),
                    )?,
                    Family::Cylindrical => build_cylindrical(
                        FamilyArgs::require(args.phis, "--phis")?.to_radians(),
                    )?,
                    Family::Azimuthal => build_azimuthal(),
                }
            }
        };
        specs.push(spec);
    }
    let table = compare_specs(&specs, &region, step);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<24} {:>20} {:>20} {:>20} {:>20}",
        "label", "v", "L", "ell", "K_max"
    );
    for row in &table.rows {
        match &row.outcome {
            Ok(r) => {
                let _ = writeln!(
                    out,
                    "{:<24} {:>20.12} {:>20.12} {:>20.12} {:>20.12}",
                    row.label, r.metrical_distortion, r.sup_sigma, r.inf_sigma, r.max_dilatation
                );
            }
            Err(e) => {
                let _ = writeln!(out, "{:<24} failed: {e}", row.label);
            }
        }
    }
    print!("{out}");
    if let Some(path) = args.out {
        let mut buf = Vec::new();
        write_report_csv(&table, &mut buf)?;
        std::fs::write(&path, buf)
            .map_err(|e| RunError::Domain(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn run_render(args: RenderArgs) -> RunResult {
    let spec = build_spec(&args.family)?;
    let lines = match &args.map {
        Some(path) => read_polylines(path)?,
        None => Vec::new(),
    };
    let cfg = RenderConfig {
        graticule_spacing_deg: args.graticule,
        ..RenderConfig::default()
    };
    let grid = args.tissot.map(|spacing_deg| TissotGrid {
        spacing_deg,
        display_scale: args.tissot_scale,
    });
    let svg = render_svg(&spec, &lines, &cfg, grid.as_ref())?;
    write_out(&args.out, svg.as_bytes())
}

fn run_triangle(args: TriangleArgs) -> RunResult {
    let [a, b, c] = args.angles[..] else {
        return Err(RunError::Usage("--angles needs exactly three values".to_string()));
    };
    let angles = TriangleAngles::new(a.to_radians(), b.to_radians(), c.to_radians())?;
    let sides = solve_sides_from_angles(&angles)?;
    let mut out = String::new();
    let _ = writeln!(out, "side_a_deg: {}", fmt(sides[0].to_degrees()));
    let _ = writeln!(out, "side_b_deg: {}", fmt(sides[1].to_degrees()));
    let _ = writeln!(out, "side_c_deg: {}", fmt(sides[2].to_degrees()));
    print!("{out}");
    Ok(())
}
