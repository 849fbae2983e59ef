use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use vtoric::blowup::{blowup_subdivision, is_u_admissible, InvariantIdeal};
use vtoric::fan::GammaFan;
use vtoric::gamma_cone::fmt_vector;
use vtoric::polyhedral::Vector;
use vtoric::projective::{normalization_fan, orbit_census};
use vtoric::semigroup::{algebra_generators, is_saturated_bounded, minimize_generators, semigroup_generators};
use vtoric::{Error, Field, Scalar};

use crate::format::{parse_config, parse_fan, parse_ideal, serialize_fan, Overrides};
use crate::svg::render_slice_svg;

#[derive(Parser, Debug)]
#[command(name = "vtoric", version, about = "Exact toric geometry over rank-one valuation rings")]
pub struct Cli {
    /// Write the main result to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Treat the valuation as discrete, overriding the file header.
    #[arg(long, global = true)]
    pub discrete: bool,
    /// Scalar field `Q` or `Qsqrt:D`, overriding the file header.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Value group generators `g1,g2,…` or `all`, overriding the file header.
    #[arg(long, global = true)]
    pub gamma: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the fan axiom and completeness.
    Check { fan: PathBuf },
    /// Vertices, rays and lines of each cone's slice at a level.
    Slice {
        fan: PathBuf,
        #[arg(long, default_value = "1")]
        level: String,
    },
    /// Generators of each cone's dual.
    Dual { fan: PathBuf },
    /// Generators of the lattice points of each cone's dual in M × ℤ.
    Hilbert { fan: PathBuf },
    /// Monomial generators of the algebra of each cone.
    AlgebraGens {
        fan: PathBuf,
        /// Drop generators that are sums of others.
        #[arg(long)]
        minimal: bool,
        /// Also run the bounded saturation check with this bound.
        #[arg(long)]
        saturation_bound: Option<u32>,
    },
    /// Special-fiber components and generic-fiber recession cone per cone.
    Orbits { fan: PathBuf },
    /// Complete the fan keeping every cone.
    Complete { fan: PathBuf },
    /// Refine the fan by the hyperplane arrangement of its inequalities.
    RefineComplete { fan: PathBuf },
    /// Normalization fan and orbit census of a weighted configuration.
    NormalizeProjective { config: PathBuf },
    /// Subdivision of a chart induced by a monomial ideal.
    Blowup {
        chart: PathBuf,
        ideal: PathBuf,
        /// Index of the chart cone in the chart file.
        #[arg(long, default_value_t = 0)]
        cone: usize,
        /// Fan file listing the faces of the chart that must stay intact.
        #[arg(long)]
        subfan: Option<PathBuf>,
    },
    /// SVG drawing of the slice of a rank-2 fan at a level.
    Svg {
        fan: PathBuf,
        #[arg(long, default_value = "1")]
        level: String,
    },
}

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

/// 1 for I/O and parse errors, 3 for extension failures, 2 for other domain errors.
pub fn exit_code(e: &CliError) -> i32 {
    match e {
        CliError::Io(_) | CliError::Core(Error::Parse { .. }) => 1,
        CliError::Core(Error::ExtensionFailure { .. }) => 3,
        CliError::Core(_) => 2,
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn scalar_arg(s: &str) -> CliResult<Scalar> {
    s.parse::<Scalar>().map_err(CliError::Core)
}

struct Session {
    overrides: Overrides,
    output: Option<PathBuf>,
}

impl Session {
    fn fan(&self, path: &Path) -> CliResult<GammaFan> {
        Ok(parse_fan(&read(path)?, &self.overrides)?)
    }

    /// Main result: to `--output` when given, else to standard output.
    fn emit(&self, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
        match &self.output {
            Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
            None => stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(e.to_string())),
        }
    }
}

fn comment_block(text: &str) -> String {
    text.lines().map(|l| format!("# {l}\n")).collect()
}

fn datum_line(v: &[i64], g: &impl std::fmt::Display) -> String {
    let us: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("{} | {g}", us.join(" "))
}

fn vector_line(v: &Vector) -> String {
    let n = v.len() - 1;
    let us: Vec<String> = v[..n].iter().map(ToString::to_string).collect();
    format!("{} | {}", us.join(" "), v[n])
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let field = cli
        .field
        .as_deref()
        .map(str::parse::<Field>)
        .transpose()
        .map_err(|e| CliError::Core(Error::parse(0, e.to_string())))?;
    let session = Session {
        overrides: Overrides {
            field,
            gamma: cli.gamma.clone(),
            discrete: cli.discrete,
        },
        output: cli.output.clone(),
    };
    match &cli.command {
        Command::Check { fan } => {
            let f = session.fan(fan)?;
            let mut out = String::new();
            match f.validate() {
                Some((i, j)) => {
                    writeln!(out, "valid: no").unwrap();
                    writeln!(out, "conflict: cones {i} and {j}").unwrap();
                    writeln!(out, "complete: no").unwrap();
                    session.emit(&out, stdout)?;
                    return Err(Error::InvalidFan(i, j).into());
                }
                None => {
                    writeln!(out, "valid: yes").unwrap();
                    let complete = f.is_complete()?;
                    writeln!(out, "complete: {}", if complete { "yes" } else { "no" }).unwrap();
                    writeln!(out, "cones: {}", f.cones().len()).unwrap();
                }
            }
            session.emit(&out, stdout)
        }
        Command::Slice { fan, level } => {
            let f = session.fan(fan)?;
            let r = scalar_arg(level)?;
            let mut out = String::new();
            for (i, c) in f.cones().iter().enumerate() {
                let p = c.slice(&r)?;
                writeln!(out, "cone {i}").unwrap();
                if p.is_empty() {
                    writeln!(out, "  empty").unwrap();
                    continue;
                }
                for v in p.vertices() {
                    writeln!(out, "  vertex {}", fmt_vector(&v)).unwrap();
                }
                for v in p.rays() {
                    writeln!(out, "  ray {}", fmt_vector(&v)).unwrap();
                }
                for v in p.lineality() {
                    writeln!(out, "  line {}", fmt_vector(&v)).unwrap();
                }
            }
            session.emit(&out, stdout)
        }
        Command::Dual { fan } => {
            let f = session.fan(fan)?;
            let mut out = String::new();
            for (i, c) in f.cones().iter().enumerate() {
                let d = c.cone().dual();
                writeln!(out, "cone {i}").unwrap();
                for r in d.rays() {
                    writeln!(out, "  ray {}", vector_line(r)).unwrap();
                }
                for l in d.lineality() {
                    writeln!(out, "  line {}", vector_line(l)).unwrap();
                }
            }
            session.emit(&out, stdout)
        }
        Command::Hilbert { fan } => {
            let f = session.fan(fan)?;
            let mut out = String::new();
            for (i, c) in f.cones().iter().enumerate() {
                writeln!(out, "cone {i}").unwrap();
                for g in semigroup_generators(&c.cone().dual())? {
                    let n = g.len() - 1;
                    writeln!(out, "  {}", datum_line(&g[..n], &g[n])).unwrap();
                }
            }
            session.emit(&out, stdout)
        }
        Command::AlgebraGens {
            fan,
            minimal,
            saturation_bound,
        } => {
            let f = session.fan(fan)?;
            let mut out = String::new();
            for (i, c) in f.cones().iter().enumerate() {
                let mut s = algebra_generators(c, f.gamma(), f.mode())?;
                if *minimal {
                    s = minimize_generators(&s);
                }
                writeln!(out, "cone {i}").unwrap();
                for d in s.elements() {
                    writeln!(out, "  {d}").unwrap();
                }
                if let Some(b) = saturation_bound {
                    match is_saturated_bounded(&s, *b, f.gamma())? {
                        (true, _) => writeln!(out, "  saturated (bound {b}): yes").unwrap(),
                        (false, w) => {
                            let w = w.map(|w| w.to_string()).unwrap_or_default();
                            writeln!(out, "  saturated (bound {b}): no, witness {w}").unwrap()
                        }
                    }
                }
            }
            session.emit(&out, stdout)
        }
        Command::Orbits { fan } => {
            let f = session.fan(fan)?;
            let mut out = String::new();
            for (i, c) in f.cones().iter().enumerate() {
                writeln!(out, "cone {i}").unwrap();
                let census = c.special_fiber_census(f.gamma())?;
                writeln!(out, "  special fiber components: {}", census.len()).unwrap();
                for comp in &census {
                    let idx = comp.index.as_ref().map_or("infinite".to_string(), ToString::to_string);
                    writeln!(out, "    vertex {} index {idx}", fmt_vector(&comp.vertex)).unwrap();
                }
                let rec = c.slice(&Scalar::zero())?;
                let rays = rec.rays();
                let lines = rec.lineality();
                if rays.is_empty() && lines.is_empty() {
                    writeln!(out, "  generic fiber recession cone: 0").unwrap();
                } else {
                    writeln!(out, "  generic fiber recession cone:").unwrap();
                    for r in rays {
                        writeln!(out, "    ray {}", fmt_vector(&r)).unwrap();
                    }
                    for l in lines {
                        writeln!(out, "    line {}", fmt_vector(&l)).unwrap();
                    }
                }
                let reduced = c.reducedness_flag(f.gamma(), f.mode())?;
                writeln!(out, "  reduced special fiber: {}", if reduced { "yes" } else { "no" }).unwrap();
            }
            session.emit(&out, stdout)
        }
        Command::Complete { fan } => {
            let f = session.fan(fan)?;
            match f.complete_extension() {
                Ok(g) => session.emit(&serialize_fan(&g), stdout),
                Err(Error::ExtensionFailure { conflicts }) => {
                    for (i, j) in &conflicts {
                        writeln!(stderr, "conflict: cones {i} and {j}").ok();
                    }
                    Err(Error::ExtensionFailure { conflicts }.into())
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::RefineComplete { fan } => {
            let f = session.fan(fan)?;
            if let Some((i, j)) = f.validate() {
                return Err(Error::InvalidFan(i, j).into());
            }
            session.emit(&serialize_fan(&f.refine_to_complete()), stdout)
        }
        Command::NormalizeProjective { config } => {
            let cfg = parse_config(&read(config)?, &session.overrides)?;
            let fan = normalization_fan(&cfg)?;
            let report = orbit_census(&cfg).to_string();
            match &session.output {
                Some(_) => {
                    session.emit(&serialize_fan(&fan), stdout)?;
                    stdout.write_all(report.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
                }
                None => {
                    let text = format!("{}{}", serialize_fan(&fan), comment_block(&report));
                    session.emit(&text, stdout)
                }
            }
        }
        Command::Blowup {
            chart,
            ideal,
            cone,
            subfan,
        } => {
            let (_, cones) = crate::format::parse_fan_cones(&read(chart)?, &session.overrides)?;
            let chart_fan = session.fan(chart)?;
            let sigma = cones
                .get(*cone)
                .ok_or_else(|| Error::domain(format!("chart file has no cone {cone}")))?
                .clone();
            let (_, gens) = parse_ideal(&read(ideal)?, &session.overrides)?;
            let ideal = InvariantIdeal::new(sigma, gens)?;
            let sub = blowup_subdivision(&ideal, chart_fan.gamma(), chart_fan.mode())?;
            let mut report = String::new();
            if let Some(path) = subfan {
                let delta = session.fan(path)?;
                let ok = is_u_admissible(&ideal, &delta.all_cones())?;
                writeln!(report, "admissible: {}", if ok { "yes" } else { "no" }).unwrap();
            }
            writeln!(report, "cones: {}", sub.cones().len()).unwrap();
            match &session.output {
                Some(_) => {
                    session.emit(&serialize_fan(&sub), stdout)?;
                    stdout.write_all(report.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
                }
                None => {
                    let text = format!("{}{}", serialize_fan(&sub), comment_block(&report));
                    session.emit(&text, stdout)
                }
            }
        }
        Command::Svg { fan, level } => {
            let f = session.fan(fan)?;
            let r = scalar_arg(level)?;
            session.emit(&render_slice_svg(&f, &r)?, stdout)
        }
    }
}

/// Runs the tool on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                stdout.write_all(text.as_bytes()).ok();
            } else {
                stderr.write_all(text.as_bytes()).ok();
            }
            return code;
        }
    };
    match dispatch(&cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            writeln!(stderr, "error: {e}").ok();
            exit_code(&e)
        }
    }
}
