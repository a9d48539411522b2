//! Command-line front end: spectra, fields, scar profiles, skeletons, oracle
//! tables and the acceptance suite.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use billiard_wkb::bundles::Bundle;
use billiard_wkb::geometry::{BoundaryCurve, CurveKind, Rational};
use billiard_wkb::io::{
    bessel_table_csv, field_csv, fmt_f64, scar_csv, spectrum_csv, spectrum_json, trace_json_lines,
    write_field_binary,
};
use billiard_wkb::oracle::{bessel_zeros, contour_integral_e1};
use billiard_wkb::quantize::{
    bouncing_mode_spectrum, broken_rectangle_spectrum, circle_spectrum, rational_approximation,
    rectangle_spectrum, Axis, CommensurateSpec, QuantumNumbers, SpectrumEntry,
};
use billiard_wkb::skeleton::{build_skeleton, last_quantization_residual, trace_orbit, Closure};
use billiard_wkb::transport::circle_first_energy;
use billiard_wkb::validation::{run_suite, Suite};
use billiard_wkb::wavefield::{
    bouncing_field, circle_field, rectangle_field, scar_profile, FieldGrid, GridSpec,
};
use billiard_wkb::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "billiard-wkb",
    version,
    about = "Semiclassical quantization of 2-D billiards"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quantized energy levels.
    Spectrum {
        #[command(subcommand)]
        family: SpectrumFamily,
    },
    /// Wave function of one level on a grid.
    Field {
        #[command(subcommand)]
        family: FieldFamily,
    },
    /// Scar profile along the horizontal stadium orbit.
    Scar(ScarArgs),
    /// Skeleton construction and orbit tracing.
    Skeleton {
        #[command(subcommand)]
        action: SkeletonAction,
    },
    /// Independent reference tables.
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
    /// Run acceptance checks and print a pass/fail table.
    Validate {
        #[arg(long, default_value = "all", value_parser = clap::builder::PossibleValuesParser::new(Suite::NAMES))]
        suite: String,
    },
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
    Bin,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum AxisArg {
    Vertical,
    Horizontal,
}

impl From<AxisArg> for Axis {
    fn from(a: AxisArg) -> Axis {
        match a {
            AxisArg::Vertical => Axis::Vertical,
            AxisArg::Horizontal => Axis::Horizontal,
        }
    }
}

/// Billiard given as a JSON file, with individual flags taking precedence.
#[derive(Args, Debug, Clone)]
struct Billiard {
    /// JSON billiard specification, e.g. {"kind": "rectangle", "a": 2, "b": 1}.
    #[arg(long)]
    billiard: Option<PathBuf>,
}

impl Billiard {
    fn kind(&self) -> Result<Option<CurveKind>> {
        let Some(path) = &self.billiard else {
            return Ok(None);
        };
        let text = fs::read_to_string(path)?;
        Ok(Some(BoundaryCurve::from_json(&text)?.kind))
    }
}

#[derive(Args, Debug, Clone)]
struct Sides {
    #[command(flatten)]
    billiard: Billiard,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
}

impl Sides {
    /// `(a, b)` of a rectangle, or of the stadium core `a × 2`.
    fn resolve(&self) -> Result<(f64, f64)> {
        let (a, b) = match self.billiard.kind()? {
            Some(CurveKind::Rectangle { a, b }) => (Some(a), Some(b)),
            Some(CurveKind::Stadium { a }) => (Some(a), Some(2.0)),
            Some(k) => {
                return Err(Error::InvalidInput(format!(
                    "expected a rectangle, found {k:?}"
                )))
            }
            None => (None, None),
        };
        match (self.a.or(a), self.b.or(b)) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::InvalidInput(
                "side lengths need --a and --b or --billiard".into(),
            )),
        }
    }
}

#[derive(Args, Debug, Clone)]
struct BrokenSides {
    #[command(flatten)]
    billiard: Billiard,
    /// Height, as `p/q` or a decimal.
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    a_prime: Option<String>,
    #[arg(long)]
    b_prime: Option<String>,
}

fn parse_rational(text: &str) -> Result<Rational> {
    if let Some((p, q)) = text.split_once('/') {
        let p = p
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad numerator in {text}")))?;
        let q = q
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad denominator in {text}")))?;
        return Ok(Rational::new(p, q));
    }
    let x: f64 = text
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("not a number: {text}")))?;
    rational_approximation(x, 10_000, 1e-12)
        .ok_or_else(|| Error::IncommensurateSides(format!("{x} has no small rational form")))
}

impl BrokenSides {
    fn resolve(&self) -> Result<CommensurateSpec> {
        let (mut b, mut ap, mut bp) = match self.billiard.kind()? {
            Some(CurveKind::BrokenRectangle {
                b,
                a_prime,
                b_prime,
            }) => (Some(b), Some(a_prime), Some(b_prime)),
            Some(k) => {
                return Err(Error::InvalidInput(format!(
                    "expected a broken rectangle, found {k:?}"
                )))
            }
            None => (None, None, None),
        };
        if let Some(t) = &self.b {
            b = Some(parse_rational(t)?);
        }
        if let Some(t) = &self.a_prime {
            ap = Some(parse_rational(t)?);
        }
        if let Some(t) = &self.b_prime {
            bp = Some(parse_rational(t)?);
        }
        match (b, ap, bp) {
            (Some(b), Some(ap), Some(bp)) => CommensurateSpec::new(b, ap, bp),
            _ => Err(Error::InvalidInput(
                "need --b, --a-prime and --b-prime or --billiard".into(),
            )),
        }
    }
}

#[derive(Subcommand, Debug)]
enum SpectrumFamily {
    Circle {
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 3)]
        m_max: u32,
        #[arg(long, default_value_t = 10)]
        r_max: u32,
        #[arg(long, default_value_t = 1)]
        order: u32,
        #[command(flatten)]
        output: Output,
    },
    Rectangle {
        #[command(flatten)]
        sides: Sides,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
        #[arg(long, default_value_t = 10)]
        m_max: u32,
        #[command(flatten)]
        output: Output,
    },
    Bouncing {
        #[command(flatten)]
        sides: Sides,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
        #[arg(long, default_value_t = 10)]
        m_max: u32,
        #[arg(long, value_enum, default_value_t = AxisArg::Vertical)]
        axis: AxisArg,
        #[command(flatten)]
        output: Output,
    },
    Broken {
        #[command(flatten)]
        sides: BrokenSides,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
        #[arg(long, default_value_t = 10)]
        m_max: u32,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args, Debug, Clone)]
struct GridArgs {
    /// Nodes per side.
    #[arg(long, default_value_t = 101)]
    grid: usize,
}

#[derive(Subcommand, Debug)]
enum FieldFamily {
    Circle {
        /// Angular quantum number; negative values give the conjugate partner.
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0)]
        order: u32,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: Output,
    },
    Rectangle {
        #[command(flatten)]
        sides: Sides,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Bouncing-ball mode of a rectangle or of the stadium core.
    Bouncing {
        #[command(flatten)]
        sides: Sides,
        /// Treat the sides as the core of a stadium of flat length `a`.
        #[arg(long)]
        stadium: bool,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, value_enum, default_value_t = AxisArg::Vertical)]
        axis: AxisArg,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: Output,
    },
    Broken {
        #[command(flatten)]
        sides: BrokenSides,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args, Debug)]
struct ScarArgs {
    /// Flat length of the stadium.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long)]
    lambda_p: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    chi0_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    chi0_im: f64,
    /// Sample count on `[−1, a + 1]`; points on the focal lines are skipped.
    #[arg(long, default_value_t = 301)]
    samples: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Subcommand, Debug)]
enum SkeletonAction {
    /// Close the bundle family seeded on one arc.
    Build {
        #[command(flatten)]
        billiard: Billiard,
        #[arg(long, default_value_t = 0)]
        arc: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 64)]
        max_bundles: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Follow one ray through the skeleton, one JSON line per flight.
    Trace {
        #[command(flatten)]
        billiard: Billiard,
        #[arg(long, default_value_t = 0)]
        arc: usize,
        #[arg(long)]
        alpha: f64,
        /// Launch point in global arc length.
        #[arg(long)]
        start_s: f64,
        #[arg(long, default_value_t = 1000)]
        bounces: usize,
        /// Wavenumber for the quantization residual of a closed trace.
        #[arg(long)]
        lambda_p: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand, Debug)]
enum OracleAction {
    /// Zeros of `J_m`.
    BesselZeros {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 20)]
        r_max: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Circle wavenumbers against the Bessel zeros.
    Compare {
        #[arg(long, default_value_t = 3)]
        m_max: u32,
        #[arg(long, default_value_t = 20)]
        r_max: u32,
        #[arg(long, default_value_t = 1)]
        order: u32,
        #[command(flatten)]
        output: Output,
    },
    /// First-order circle energy against the contour quadrature.
    E1 {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5)]
        radius_factor: f64,
    },
}

fn emit(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_spectrum(output: &Output, entries: &[SpectrumEntry]) -> Result<()> {
    match output.format.unwrap_or(Format::Csv) {
        Format::Csv => emit(output, &spectrum_csv(entries)?),
        Format::Json => emit(output, &spectrum_json(entries)?),
        Format::Bin => Err(Error::InvalidInput(
            "spectra are written as csv or json".into(),
        )),
    }
}

/// Binary grid with a CSV sidecar by default; CSV alone on standard output.
fn emit_field(output: &Output, grid: &FieldGrid) -> Result<()> {
    if let Some(dev) = grid.reference_deviation {
        eprintln!("max deviation from the product form: {}", fmt_f64(dev));
    }
    let format = output.format.unwrap_or(Format::Bin);
    match (&output.out, format) {
        (_, Format::Json) => Err(Error::InvalidInput(
            "fields are written as bin or csv".into(),
        )),
        (None, Format::Bin) if output.format.is_some() => {
            Err(Error::InvalidInput("binary fields need --out".into()))
        }
        (None, _) => emit(output, &field_csv(grid)),
        (Some(_), Format::Csv) => emit(output, &field_csv(grid)),
        (Some(path), Format::Bin) => {
            let mut file = fs::File::create(path)?;
            write_field_binary(grid, &mut file)?;
            fs::write(sidecar(path), field_csv(grid))?;
            Ok(())
        }
    }
}

fn sidecar(path: &Path) -> PathBuf {
    path.with_extension("csv")
}

fn pick(levels: &[SpectrumEntry], q: QuantumNumbers) -> Result<&SpectrumEntry> {
    levels
        .iter()
        .find(|l| l.quantum == q)
        .ok_or_else(|| Error::InvalidInput(format!("no level {q:?}")))
}

fn spectrum(family: SpectrumFamily) -> Result<()> {
    match family {
        SpectrumFamily::Circle {
            lambda,
            m_max,
            r_max,
            order,
            output,
        } => emit_spectrum(&output, &circle_spectrum(lambda, m_max, r_max, order)?),
        SpectrumFamily::Rectangle {
            sides,
            lambda,
            n_max,
            m_max,
            output,
        } => {
            let (a, b) = sides.resolve()?;
            emit_spectrum(&output, &rectangle_spectrum(a, b, lambda, n_max, m_max)?)
        }
        SpectrumFamily::Bouncing {
            sides,
            lambda,
            n_max,
            m_max,
            axis,
            output,
        } => {
            let (a, b) = sides.resolve()?;
            emit_spectrum(
                &output,
                &bouncing_mode_spectrum(a, b, lambda, n_max, m_max, axis.into())?,
            )
        }
        SpectrumFamily::Broken {
            sides,
            lambda,
            n_max,
            m_max,
            output,
        } => emit_spectrum(
            &output,
            &broken_rectangle_spectrum(&sides.resolve()?, lambda, n_max, m_max)?,
        ),
    }
}

fn field(family: FieldFamily) -> Result<()> {
    match family {
        FieldFamily::Circle {
            m,
            r,
            lambda,
            order,
            grid,
            output,
        } => {
            let levels = circle_spectrum(lambda, m.unsigned_abs() as u32, r, order)?;
            let entry = pick(&levels, QuantumNumbers::Circle { m: m.abs(), r })?;
            let curve = BoundaryCurve::circle(1.0)?;
            emit_field(
                &output,
                &circle_field(
                    entry,
                    m,
                    order as usize,
                    &GridSpec::covering(&curve, grid.grid),
                )?,
            )
        }
        FieldFamily::Rectangle {
            sides,
            n,
            m,
            lambda,
            grid,
            output,
        } => {
            let (a, b) = sides.resolve()?;
            let levels = rectangle_spectrum(a, b, lambda, n, m)?;
            let entry = pick(&levels, QuantumNumbers::Pair { n, m })?;
            let spec = GridSpec::new(grid.grid, grid.grid, [0.0, 0.0, a, b]);
            emit_field(&output, &rectangle_field(entry, a, b, &spec))
        }
        FieldFamily::Bouncing {
            sides,
            stadium,
            n,
            m,
            lambda,
            axis,
            grid,
            output,
        } => {
            let stadium =
                stadium || matches!(sides.billiard.kind()?, Some(CurveKind::Stadium { .. }));
            let (a, b) = sides.resolve()?;
            let curve = if stadium {
                BoundaryCurve::stadium(a)?
            } else {
                BoundaryCurve::rectangle(a, b)?
            };
            let (a, b) = if stadium { (a, 2.0) } else { (a, b) };
            let levels = bouncing_mode_spectrum(a, b, lambda, n, m, axis.into())?;
            let entry = pick(&levels, QuantumNumbers::Pair { n, m })?;
            emit_field(
                &output,
                &bouncing_field(
                    entry,
                    &curve,
                    axis.into(),
                    &GridSpec::covering(&curve, grid.grid),
                )?,
            )
        }
        FieldFamily::Broken {
            sides,
            n,
            m,
            lambda,
            grid,
            output,
        } => {
            let spec = sides.resolve()?;
            let levels = broken_rectangle_spectrum(&spec, lambda, n, m)?;
            let entry = pick(
                &levels,
                QuantumNumbers::Broken {
                    n0: spec.n0,
                    m0: spec.m0,
                    n,
                    m,
                },
            )?;
            let curve = BoundaryCurve::broken_rectangle(spec.b, spec.a_prime, spec.b_prime)?;
            emit_field(
                &output,
                &bouncing_field(
                    entry,
                    &curve,
                    Axis::Vertical,
                    &GridSpec::covering(&curve, grid.grid),
                )?,
            )
        }
    }
}

fn scar(args: ScarArgs) -> Result<()> {
    if args.samples < 2 {
        return Err(Error::InvalidInput("need at least two samples".into()));
    }
    let span = args.a + 2.0;
    let xs: Vec<f64> = (0..args.samples)
        .map(|i| -1.0 + span * i as f64 / (args.samples - 1) as f64)
        .filter(|x| (x + 0.5).abs() >= 1e-6 && (x - args.a - 0.5).abs() >= 1e-6)
        .collect();
    let profile = scar_profile(
        args.a,
        args.lambda_p,
        Complex64::new(args.chi0_re, args.chi0_im),
        &xs,
    )?;
    eprintln!(
        "q = {}, resonance factor = {}, endpoint |Ψ| = {}, {}",
        fmt_f64(profile.q),
        fmt_f64(profile.resonance_factor),
        fmt_f64(profile.endpoint_values[0].norm()),
        fmt_f64(profile.endpoint_values[1].norm())
    );
    match args.output.format.unwrap_or(Format::Csv) {
        Format::Csv => emit(&args.output, &scar_csv(&profile)),
        Format::Json => emit(
            &args.output,
            &(serde_json::to_string_pretty(&profile)? + "\n"),
        ),
        Format::Bin => Err(Error::InvalidInput(
            "scar profiles are written as csv or json".into(),
        )),
    }
}

fn load_curve(billiard: &Billiard) -> Result<BoundaryCurve> {
    let kind = billiard
        .kind()?
        .ok_or_else(|| Error::InvalidInput("--billiard is required".into()))?;
    BoundaryCurve::from_kind(kind)
}

fn skeleton(action: SkeletonAction) -> Result<()> {
    match action {
        SkeletonAction::Build {
            billiard,
            arc,
            alpha,
            max_bundles,
            output,
        } => {
            let curve = load_curve(&billiard)?;
            let seed = Bundle::on_arc(&curve, arc, alpha)?;
            let bundle_json = |b: &Bundle| {
                json!({
                    "arc": b.arc,
                    "start": b.start,
                    "length": b.length,
                    "alpha": b.constant_incidence(),
                })
            };
            let value = match build_skeleton(&curve, &seed, max_bundles)? {
                Closure::Closed(sk) => json!({
                    "closed": true,
                    "self_associated": sk.is_self_associated(),
                    "bundles": sk.bundles.iter().map(bundle_json).collect::<Vec<_>>(),
                    "transitions": sk.transitions.iter().map(|row| row.iter().map(|t| json!({
                        "target": t.target,
                        "map": t.map,
                    })).collect::<Vec<_>>()).collect::<Vec<_>>(),
                }),
                Closure::NotReached { partial, reason } => json!({
                    "closed": false,
                    "reason": reason,
                    "bundles": partial.iter().map(bundle_json).collect::<Vec<_>>(),
                }),
            };
            emit(&output, &(serde_json::to_string_pretty(&value)? + "\n"))
        }
        SkeletonAction::Trace {
            billiard,
            arc,
            alpha,
            start_s,
            bounces,
            lambda_p,
            output,
        } => {
            let curve = load_curve(&billiard)?;
            let seed = Bundle::on_arc(&curve, arc, alpha)?;
            let sk = build_skeleton(&curve, &seed, 256)?
                .closed()
                .ok_or_else(|| Error::InvalidInput("the bundle family does not close".into()))?;
            let trace = trace_orbit(&curve, &sk, 0, start_s, bounces, None)?;
            eprintln!(
                "termination = {:?}, bounces = {}, length = {}",
                trace.termination,
                trace.bounce_count(),
                fmt_f64(trace.total_length)
            );
            if let Some(k) = lambda_p {
                match last_quantization_residual(&trace, k) {
                    Ok(r) => eprintln!("residual = {}", fmt_f64(r.norm())),
                    Err(e) => eprintln!("residual unavailable: {e}"),
                }
            }
            emit(&output, &trace_json_lines(&trace)?)
        }
    }
}

fn oracle(action: OracleAction) -> Result<()> {
    match action {
        OracleAction::BesselZeros { m, r_max, output } => {
            emit(&output, &bessel_table_csv(&bessel_zeros(m, r_max)?))
        }
        OracleAction::Compare {
            m_max,
            r_max,
            order,
            output,
        } => {
            let levels = circle_spectrum(1.0, m_max, r_max, order)?;
            let mut text = String::from("m,r,semiclassical,bessel,difference\n");
            for m in 0..=m_max {
                let zeros = bessel_zeros(m, r_max as usize)?.zeros;
                for (r, z) in (1..=r_max).zip(zeros) {
                    let k = (2.0
                        * pick(&levels, QuantumNumbers::Circle { m: m as i64, r })?.energy())
                    .sqrt();
                    text.push_str(&format!(
                        "{m},{r},{},{},{}\n",
                        fmt_f64(k),
                        fmt_f64(z),
                        fmt_f64(k - z)
                    ));
                }
            }
            emit(&output, &text)
        }
        OracleAction::E1 {
            alpha,
            radius_factor,
        } => {
            let integral = contour_integral_e1(alpha, radius_factor)?;
            let quadrature = -integral / (4.0 * alpha.sin());
            println!("closed form = {}", fmt_f64(circle_first_energy(alpha)));
            println!(
                "quadrature  = {} {:+.16e}i",
                fmt_f64(quadrature.re),
                quadrature.im
            );
            Ok(())
        }
    }
}

/// Exit code 2 when any check fails.
fn validate(suite: &str) -> Result<bool> {
    let suite =
        Suite::parse(suite).ok_or_else(|| Error::InvalidInput(format!("unknown suite {suite}")))?;
    let results = run_suite(suite);
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    Ok(failed == 0)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Spectrum { family } => spectrum(family)?,
        Command::Field { family } => field(family)?,
        Command::Scar(args) => scar(args)?,
        Command::Skeleton { action } => skeleton(action)?,
        Command::Oracle { action } => oracle(action)?,
        Command::Validate { suite } => {
            return Ok(if validate(&suite)? {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
