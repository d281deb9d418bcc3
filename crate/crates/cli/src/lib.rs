//! Command-line front end: product configs, CSV/JSON reports and PPM rasters.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use blaschke_core::atlas::{basin_targets, raster_basins, raster_branches, UNRESOLVED};
use blaschke_core::continuation::{circle_grid, radial_grid};
use blaschke_core::polyroot::preimages;
use blaschke_core::{
    BlaschkeProduct, ContinuationConfig, CriticalData, InverseTracker, RasterImage, Trajectory,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_RESOLUTION: usize = 4096;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Convergence(blaschke_core::Error),
    #[error("{0}")]
    Critical(blaschke_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Convergence(_) => 3,
            CliError::Critical(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<blaschke_core::Error> for CliError {
    fn from(err: blaschke_core::Error) -> Self {
        use blaschke_core::Error::*;
        match err {
            InvalidParameter(msg) => CliError::Config(msg),
            NearCriticalValue { .. } | CriticalParameter { .. } => CliError::Critical(err),
            NotConverged(_)
            | PoleProximity { .. }
            | DegenerateDerivative { .. }
            | StepUnderflow { .. } => CliError::Convergence(err),
        }
    }
}

/// On-disk product description: `{"epsilon": [re, im], "zeros": [[re, im], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductConfig {
    pub epsilon: [f64; 2],
    pub zeros: Vec<[f64; 2]>,
}

impl ProductConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn from_product(b: &BlaschkeProduct) -> Self {
        ProductConfig {
            epsilon: pair(b.epsilon()),
            zeros: b.zeros().iter().map(|a| pair(*a)).collect(),
        }
    }

    pub fn to_product(&self) -> Result<BlaschkeProduct, CliError> {
        let zeros = self
            .zeros
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        BlaschkeProduct::new(Complex64::new(self.epsilon[0], self.epsilon[1]), zeros)
            .map_err(|e| CliError::Config(e.to_string()))
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Structured report of a product and its critical data.
///
/// Carries `epsilon` and `zeros`, so it parses back as a [`ProductConfig`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfoReport {
    pub epsilon: [f64; 2],
    pub zeros: Vec<[f64; 2]>,
    pub n: usize,
    pub outer_radius: f64,
    pub critical_points_inside: Vec<[f64; 2]>,
    pub critical_points_outside: Vec<[f64; 2]>,
    pub critical_values: Vec<[f64; 2]>,
    pub critical_params: Vec<f64>,
}

impl InfoReport {
    pub fn new(b: &BlaschkeProduct) -> Result<Self, CliError> {
        let critical = CriticalData::compute(b)?;
        let config = ProductConfig::from_product(b);
        let pairs = |v: &[Complex64]| v.iter().map(|z| pair(*z)).collect();
        Ok(InfoReport {
            epsilon: config.epsilon,
            zeros: config.zeros,
            n: b.degree(),
            outer_radius: b.outer_radius(),
            critical_points_inside: pairs(&critical.points_inside),
            critical_points_outside: pairs(&critical.points_outside),
            critical_values: pairs(&critical.values),
            critical_params: critical.params,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// 17 significant digits, round-trip exact.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn preimages_csv(b: &BlaschkeProduct, w: Complex64) -> Result<String, CliError> {
    let points = preimages(b, w)?.sorted_by_argument();
    let mut out = String::from("index,z_re,z_im,residual\n");
    for (i, z) in points.iter().enumerate() {
        let residual = (b.eval(*z)? - w).norm();
        writeln!(
            out,
            "{i},{},{},{}",
            fmt_f64(z.re),
            fmt_f64(z.im),
            fmt_f64(residual)
        )
        .expect("writing to a String");
    }
    Ok(out)
}

pub fn trajectory_csv(trajectory: &Trajectory) -> String {
    let mut out = String::from("kind,branch,param,z_re,z_im,residual\n");
    let branch = trajectory.branch.map(|k| k.to_string()).unwrap_or_default();
    for s in &trajectory.samples {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            trajectory.kind.as_str(),
            branch,
            fmt_f64(s.param),
            fmt_f64(s.z.re),
            fmt_f64(s.z.im),
            fmt_f64(s.residual)
        )
        .expect("writing to a String");
    }
    out
}

/// Rows `t, β(t), τ_0(t), …, τ_{n-1}(t)` over `samples` uniform angles in `[-π, π)`.
pub fn boundary_csv(b: &BlaschkeProduct, samples: usize) -> Result<String, CliError> {
    if samples < 2 {
        return Err(CliError::Config("boundary needs at least 2 samples".into()));
    }
    let boundary = b.boundary();
    let mut out = String::from("t,beta");
    for k in 0..b.degree() {
        write!(out, ",tau_{k}").expect("writing to a String");
    }
    out.push('\n');
    for i in 0..samples {
        let t = -std::f64::consts::PI + std::f64::consts::TAU * i as f64 / samples as f64;
        write!(out, "{},{}", fmt_f64(t), fmt_f64(boundary.beta(t))).expect("writing to a String");
        for tau in boundary.taus(t)? {
            write!(out, ",{}", fmt_f64(tau)).expect("writing to a String");
        }
        out.push('\n');
    }
    Ok(out)
}

/// Full-saturation, full-value color of hue `k / n`, as 8-bit RGB.
pub fn hue_rgb(k: usize, n: usize) -> [u8; 3] {
    let h = 6.0 * (k % n.max(1)) as f64 / n.max(1) as f64;
    let sector = h.floor();
    let f = h - sector;
    let (r, g, b) = match sector as u32 {
        0 => (1.0, f, 0.0),
        1 => (1.0 - f, 1.0, 0.0),
        2 => (0.0, 1.0, f),
        3 => (0.0, 1.0 - f, 1.0),
        4 => (f, 0.0, 1.0),
        _ => (1.0, 0.0, 1.0 - f),
    };
    let byte = |c: f64| (255.0 * c).round() as u8;
    [byte(r), byte(g), byte(b)]
}

/// Binary PPM (P6): label `k` in hue `k / classes`, `-1` in black.
pub fn encode_ppm(image: &RasterImage) -> Vec<u8> {
    let header = format!("P6\n{} {}\n255\n", image.width, image.height);
    let mut out = Vec::with_capacity(header.len() + 3 * image.labels.len());
    out.extend_from_slice(header.as_bytes());
    for &label in &image.labels {
        let rgb = if label == UNRESOLVED || label < 0 {
            [0, 0, 0]
        } else {
            hue_rgb(label as usize, image.classes)
        };
        out.extend_from_slice(&rgb);
    }
    out
}

#[derive(Debug, Parser)]
#[command(
    name = "blaschke",
    version,
    about = "Inverse branches of finite Blaschke products"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Product config: {"epsilon": [re, im], "zeros": [[re, im], ...]}
    #[arg(long)]
    pub config: PathBuf,
    /// Output file (standard output when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Newton residual tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    /// Innermost radius of radial trajectories
    #[arg(long)]
    pub rmin: Option<f64>,
}

impl Common {
    pub fn continuation_config(&self) -> ContinuationConfig {
        let mut cfg = ContinuationConfig::default();
        if let Some(tol) = self.tol {
            cfg.newton_tol = tol;
        }
        if let Some(rmin) = self.rmin {
            cfg.r_min = rmin;
        }
        cfg
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RasterMode {
    Branches,
    Basins,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree, outer radius, critical points, values and angles
    #[command(allow_negative_numbers = true)]
    Info {
        #[command(flatten)]
        common: Common,
    },
    /// All solutions of B(z) = w
    #[command(allow_negative_numbers = true)]
    Preimages {
        #[command(flatten)]
        common: Common,
        #[arg(long = "w-re", default_value_t = 0.0)]
        w_re: f64,
        #[arg(long = "w-im", default_value_t = 0.0)]
        w_im: f64,
    },
    /// Branch k along the ray of angle t, from r = 1 down to rmin
    #[command(allow_negative_numbers = true)]
    Trajectory {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 256)]
        samples: usize,
    },
    /// Preimage j continued once around the circle of radius r
    #[command(allow_negative_numbers = true)]
    Circle {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        j: usize,
        /// Starting angle
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        #[arg(long, default_value_t = 512)]
        samples: usize,
    },
    /// Branch-region or Newton-basin raster as binary PPM
    #[command(allow_negative_numbers = true)]
    Raster {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        mode: RasterMode,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
        /// Basin target (basins mode)
        #[arg(long = "w-re", default_value_t = 0.0)]
        w_re: f64,
        #[arg(long = "w-im", default_value_t = 0.0)]
        w_im: f64,
    },
    /// Boundary argument β and the boundary branches τ_k
    #[command(allow_negative_numbers = true)]
    Boundary {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 256)]
        samples: usize,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Info { common }
            | Command::Preimages { common, .. }
            | Command::Trajectory { common, .. }
            | Command::Circle { common, .. }
            | Command::Raster { common, .. }
            | Command::Boundary { common, .. } => common,
        }
    }
}

/// Runs one command and returns the bytes it produces.
pub fn execute(command: &Command) -> Result<Vec<u8>, CliError> {
    let common = command.common();
    let product = ProductConfig::load(&common.config)?.to_product()?;
    let cfg = common.continuation_config();
    let tracker = || InverseTracker::new(&product, cfg.clone()).map_err(CliError::from);

    let bytes = match command {
        Command::Info { .. } => InfoReport::new(&product)?.to_json().into_bytes(),
        Command::Preimages { w_re, w_im, .. } => {
            preimages_csv(&product, Complex64::new(*w_re, *w_im))?.into_bytes()
        }
        Command::Trajectory { t, k, samples, .. } => {
            let grid = radial_grid(cfg.r_min, *samples);
            let trajectory = tracker()?.radial_trajectory(*t, *k, &grid)?;
            trajectory_csv(&trajectory).into_bytes()
        }
        Command::Circle {
            r, j, t, samples, ..
        } => {
            let grid = circle_grid(*t, *samples);
            let trajectory = tracker()?.circle_trajectory(*r, *j, &grid)?;
            trajectory_csv(&trajectory).into_bytes()
        }
        Command::Raster {
            mode,
            resolution,
            w_re,
            w_im,
            ..
        } => {
            if !(blaschke_core::atlas::MIN_RESOLUTION..=MAX_RESOLUTION).contains(resolution) {
                return Err(CliError::Config(format!(
                    "resolution must lie in [16, {MAX_RESOLUTION}]"
                )));
            }
            let tracker = tracker()?;
            let image = match mode {
                RasterMode::Branches => raster_branches(&tracker, *resolution)?,
                RasterMode::Basins => {
                    let w = Complex64::new(*w_re, *w_im);
                    basin_targets(&tracker, w)?;
                    raster_basins(&tracker, w, *resolution)?
                }
            };
            encode_ppm(&image)
        }
        Command::Boundary { samples, .. } => boundary_csv(&product, *samples)?.into_bytes(),
    };
    Ok(bytes)
}

/// Executes `command`, writing to `--out` or to `stdout`.
pub fn run(command: &Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    let bytes = execute(command)?;
    match &command.common().out {
        Some(path) => fs::write(path, bytes)?,
        None => stdout.write_all(&bytes)?,
    }
    Ok(())
}
