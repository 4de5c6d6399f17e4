//! Command-line driver: one verb per construction.
//!
//! Every subcommand prints a small deterministic JSON object to stdout
//! (floats with 17 significant digits, fixed key order) and exits with
//! 0 on success, 2 when a verification exceeded its tolerance, 3 on
//! rejected input, and 4 on numerical divergence.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use ksurface::curve::cone_angle;
use ksurface::diagnostics::raw_curvatures;
use ksurface::io::{export_mesh, MeshFormat};
use ksurface::pipeline::{
    build_surface, run_pipeline, sample_band, ConfigOverlay, CurveSource, PipelineConfig,
};
use ksurface::surface::{
    legendre_transform, parallel_cmc, peaked_sphere_diameter, pole_height, reflect_extend,
    rotational_conformal, rotational_peaked_sphere, sample_patch, CmcSign, SurfacePatch,
};
use ksurface::{Error, Result};

#[derive(Parser)]
#[command(
    name = "ksurface",
    about = "Surfaces of constant curvature one with conical singularities: \
             construction from spherical Cauchy data and structural verification",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every verb that consumes a spherical curve.
#[derive(Debug, clap::Args)]
struct SourceArgs {
    /// Builtin datum: circle, equator, or cusp-demo.
    #[arg(long, default_value = "circle")]
    builtin: String,
    /// Height of the builtin circle (cosine of the polar angle).
    #[arg(long, default_value_t = 0.5)]
    amplitude: f64,
    /// JSON curve file; takes precedence over --builtin.
    #[arg(long)]
    curve: Option<PathBuf>,
}

impl SourceArgs {
    fn source(&self) -> Result<CurveSource> {
        match &self.curve {
            Some(path) => Ok(CurveSource::File(path.clone())),
            None => CurveSource::builtin(&self.builtin, self.amplitude),
        }
    }
}

/// Flags shared by every verb that samples a strip patch.
#[derive(Debug, clap::Args)]
struct BandArgs {
    /// Taylor order in the strip coordinate.
    #[arg(long, default_value_t = 24)]
    k_v: usize,
    /// Fourier truncation (default: max(8, 4 x input modes)).
    #[arg(long)]
    m_u: Option<usize>,
    /// Lower edge of the sampled band.
    #[arg(long, default_value_t = 0.01)]
    v_lo: f64,
    /// Upper edge of the sampled band (clamped to the trusted height).
    #[arg(long, default_value_t = 0.3)]
    v_hi: f64,
    /// Profile samples per turn.
    #[arg(long, default_value_t = 48)]
    u_count: usize,
    /// Samples across the band.
    #[arg(long, default_value_t = 25)]
    v_count: usize,
}

impl BandArgs {
    fn configure(&self, config: &mut PipelineConfig) {
        config.k_v = self.k_v;
        config.m_u = self.m_u;
        config.v_range = (self.v_lo, self.v_hi);
        config.u_count = self.u_count;
        config.v_count = self.v_count;
    }
}

#[derive(Debug, clap::Args)]
struct ExportArgs {
    /// Write the sampled patch as a Wavefront OBJ quad mesh.
    #[arg(long)]
    obj: Option<PathBuf>,
    /// Write the sampled patch as a CSV table.
    #[arg(long)]
    csv: Option<PathBuf>,
}

impl ExportArgs {
    fn export(&self, patch: &SurfacePatch) -> Result<()> {
        if let Some(path) = &self.obj {
            export_mesh(patch, MeshFormat::Obj, path)?;
        }
        if let Some(path) = &self.csv {
            export_mesh(patch, MeshFormat::Csv, path)?;
        }
        Ok(())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exact rotationally symmetric surface: invariants and meshes.
    Rotational {
        /// Amplitude of the profile (cosine of the limit polar angle).
        #[arg(long, default_value_t = 0.5)]
        amplitude: f64,
        /// Lower latitude of the sampled patch.
        #[arg(long, default_value_t = -std::f64::consts::FRAC_PI_2 + 0.05)]
        u_lo: f64,
        /// Upper latitude of the sampled patch.
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2 - 0.05)]
        u_hi: f64,
        #[arg(long, default_value_t = 200)]
        u_count: usize,
        #[arg(long, default_value_t = 200)]
        v_count: usize,
        #[command(flatten)]
        export: ExportArgs,
    },
    /// Extend the datum to a harmonic sphere map; print quality numbers.
    Cauchy {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 24)]
        k_v: usize,
        #[arg(long)]
        m_u: Option<usize>,
    },
    /// Full pipeline: construct, verify every identity, report.
    Diagnose {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        band: BandArgs,
        #[command(flatten)]
        export: ExportArgs,
        /// Write the JSON report here as well as to stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// JSON config file; values present in it override the flags.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Skip the annulus area/mean-curvature table.
        #[arg(long, default_value_t = false)]
        no_integrals: bool,
        /// Skip the independent graph-based curvature check.
        #[arg(long, default_value_t = false)]
        no_graph: bool,
    },
    /// Parallel surface at unit normal distance: constant mean curvature.
    Parallel {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        band: BandArgs,
        /// Shift direction along the normal: plus or minus.
        #[arg(long, default_value = "plus")]
        sign: String,
        #[command(flatten)]
        export: ExportArgs,
    },
    /// Reflect the surface jet across the singular axis and sample it.
    Reflect {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        band: BandArgs,
        #[command(flatten)]
        export: ExportArgs,
    },
    /// Contact-geometry dual patch of the sampled surface.
    Legendre {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        band: BandArgs,
        #[command(flatten)]
        export: ExportArgs,
    },
    /// Cone angle at the singular point by two independent routes.
    ConeAngle {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Decide whether cone angles admit a curvature-one sphere metric.
    Troyanov {
        /// Cone angle divided by 2 pi; repeat at least three times.
        #[arg(long = "theta", required = true)]
        thetas: Vec<f64>,
    },
}

fn fmt(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Rotational {
            amplitude,
            u_lo,
            u_hi,
            u_count,
            v_count,
            export,
        } => {
            let patch = rotational_peaked_sphere(amplitude, (u_lo, u_hi), u_count, v_count)?;
            let mut k_residual = 0.0f64;
            for at in 0..patch.len() {
                let (_, k) = raw_curvatures(&patch, at);
                if k.is_finite() {
                    k_residual = k_residual.max((k - 1.0).abs());
                }
            }
            export.export(&patch)?;
            let conf = rotational_conformal(amplitude)?;
            println!("{{");
            println!("  \"amplitude\": {},", fmt(amplitude));
            println!("  \"diameter\": {},", fmt(peaked_sphere_diameter(amplitude)?));
            println!("  \"pole_height\": {},", fmt(pole_height(amplitude)?));
            println!("  \"conformal_half_width\": {},", fmt(conf.half_width()));
            println!("  \"annulus_modulus\": {},", fmt(conf.modulus()));
            println!("  \"k_residual\": {}", fmt(k_residual));
            println!("}}");
            Ok(true)
        }
        Command::Cauchy { source, k_v, m_u } => {
            let mut config = PipelineConfig::new(source.source()?);
            config.k_v = k_v;
            config.m_u = m_u;
            let build = build_surface(&config)?;
            let trust = build.jet.trust_height();
            let strip_weight = trust.min(1.0);
            let defect = build
                .jet
                .norm_defects()
                .iter()
                .enumerate()
                .map(|(k, &d)| d * strip_weight.powi(k as i32))
                .fold(0.0f64, f64::max);
            println!("{{");
            println!("  \"verdict\": \"{}\",", build.classification.verdict.as_str());
            println!("  \"layers\": {},", build.jet.order() + 1);
            println!("  \"modes\": {},", build.jet.degree());
            println!("  \"trust_height\": {},", fmt(trust));
            println!("  \"norm_defect\": {},", fmt(defect));
            println!(
                "  \"compat_residual\": {}",
                fmt(build.sjet.compatibility_residual())
            );
            println!("}}");
            Ok(true)
        }
        Command::Diagnose {
            source,
            band,
            export,
            report,
            config: config_path,
            no_integrals,
            no_graph,
        } => {
            let mut config = PipelineConfig::new(source.source()?);
            band.configure(&mut config);
            config.obj_path = export.obj.clone();
            config.csv_path = export.csv.clone();
            config.report_path = report;
            config.checks.integrals = !no_integrals;
            config.checks.graph = !no_graph;
            if let Some(path) = &config_path {
                ConfigOverlay::from_file(path)?.apply(&mut config)?;
            }
            let out = run_pipeline(&config)?;
            print!("{}", out.report.to_json());
            Ok(out.report.pass)
        }
        Command::Parallel {
            source,
            band,
            sign,
            export,
        } => {
            let sign = match sign.as_str() {
                "plus" => CmcSign::Plus,
                "minus" => CmcSign::Minus,
                other => {
                    return Err(Error::InvalidInput {
                        reason: format!("sign must be plus or minus, got '{other}'"),
                    })
                }
            };
            let mut config = PipelineConfig::new(source.source()?);
            band.configure(&mut config);
            let build = build_surface(&config)?;
            let patch = sample_band(&config, &build)?;
            let shifted = parallel_cmc(&patch, sign);
            // The shifted surface has constant mean curvature -s/2 with
            // respect to its carried orientation.
            let target = -0.5 * sign.value();
            let mut h_residual = 0.0f64;
            for at in 0..shifted.len() {
                if shifted.singular[at] {
                    continue;
                }
                let (h, _) = raw_curvatures(&shifted, at);
                if h.is_finite() {
                    h_residual = h_residual.max((h - target).abs());
                }
            }
            export.export(&shifted)?;
            println!("{{");
            println!("  \"sign\": \"{}\",", if sign == CmcSign::Plus { "plus" } else { "minus" });
            println!("  \"target_mean_curvature\": {},", fmt(target));
            println!("  \"h_residual\": {},", fmt(h_residual));
            println!(
                "  \"singular_samples\": {}",
                shifted.singular.iter().filter(|&&s| s).count()
            );
            println!("}}");
            Ok(true)
        }
        Command::Reflect {
            source,
            band,
            export,
        } => {
            let mut config = PipelineConfig::new(source.source()?);
            band.configure(&mut config);
            let build = build_surface(&config)?;
            let reflected = reflect_extend(&build.sjet);
            let (v_lo, v_hi) = ksurface::pipeline::clamped_band(&config, &build)?;
            let patch = sample_patch(&reflected, config.u_count, (v_lo, v_hi), config.v_count)?;
            export.export(&patch)?;
            // The reflection is an involution on the stored layers; the
            // double image must agree coefficient for coefficient.
            let twice = reflect_extend(&reflected);
            let mut involution_defect = 0.0f64;
            for k in 1..=build.sjet.top_layer() {
                let a = build.sjet.layer(k);
                let b = twice.layer(k);
                for (ca, cb) in a
                    .cos_coeffs()
                    .iter()
                    .chain(a.sin_coeffs())
                    .zip(b.cos_coeffs().iter().chain(b.sin_coeffs()))
                {
                    involution_defect = involution_defect.max((ca - cb).norm());
                }
            }
            println!("{{");
            println!("  \"involution_defect\": {},", fmt(involution_defect));
            println!(
                "  \"compat_residual\": {}",
                fmt(reflected.compatibility_residual())
            );
            println!("}}");
            Ok(true)
        }
        Command::Legendre {
            source,
            band,
            export,
        } => {
            let mut config = PipelineConfig::new(source.source()?);
            band.configure(&mut config);
            let build = build_surface(&config)?;
            let patch = sample_band(&config, &build)?;
            let dual = legendre_transform(&patch)?;
            export.export(&dual)?;
            println!("{{");
            println!("  \"samples\": {},", dual.len());
            println!(
                "  \"singular_samples\": {}",
                dual.singular.iter().filter(|&&s| s).count()
            );
            println!("}}");
            Ok(true)
        }
        Command::ConeAngle { source } => {
            let alpha = source.source()?.load()?;
            let record = cone_angle(&alpha)?;
            println!("{{");
            println!("  \"from_area\": {},", fmt(record.from_area));
            println!("  \"from_turning\": {},", fmt(record.from_turning));
            println!("  \"agreement\": {}", fmt(record.agreement));
            println!("}}");
            Ok(true)
        }
        Command::Troyanov { thetas } => {
            let satisfiable = ksurface::curve::troyanov_check(&thetas)?;
            println!("{{");
            println!("  \"satisfiable\": {satisfiable}");
            println!("}}");
            Ok(true)
        }
    }
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => std::process::ExitCode::SUCCESS,
        Ok(false) => std::process::ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::ExitCode::from(e.exit_code() as u8)
        }
    }
}
