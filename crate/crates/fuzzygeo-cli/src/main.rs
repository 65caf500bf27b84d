//! `fuzzygeo`: build fuzzy geographical descriptors from polygon corpora,
//! evaluate them, and run the validation protocol from the command line.
//!
//! Exit codes: 0 success, 1 input or validation error, 2 internal invariant
//! failure (a produced report contradicts itself). Diagnostics go to stderr.

mod tables;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use fuzzygeo::dataset::{
    load_grid, load_region, load_responses, save_grid, save_responses, synth_responses,
    DescriptorLabel, RegionBoundary, ResponseSet, SynthKind, SynthModel, SynthSide,
};
use fuzzygeo::evaluation::{
    antonymy_check, cross_validate, granularity_study, monotonicity_check, Axis, CrossValConfig,
    Direction,
};
use fuzzygeo::geometry::GeoPoint;
use fuzzygeo::grid::{build_fuzzy_grid, make_grid_points, FuzzyGrid, GranularitySpec};
use fuzzygeo::membership::{evaluate, EvalParams};

#[derive(Parser)]
#[command(
    name = "fuzzygeo",
    version,
    about = "Fuzzy geographical descriptors from polygon interpretation corpora"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a descriptor grid from a region and a response corpus
    Build {
        /// Region boundary (GeoJSON)
        #[arg(long)]
        region: PathBuf,
        /// Response corpus (GeoJSON feature collection)
        #[arg(long)]
        responses: PathBuf,
        /// Descriptor label to load and build, e.g. "north"
        #[arg(long)]
        descriptor: String,
        /// Grid spacing as a percentage of the region extent
        #[arg(long, default_value_t = 1.0)]
        granularity: f64,
        /// Output grid file
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a grid's membership degree at one location
    Eval {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        lon: f64,
        #[arg(long, allow_negative_numbers = true)]
        lat: f64,
        #[arg(long, default_value_t = 1e-5)]
        epsilon_km: f64,
    },
    /// Cross-validate descriptors against their corpora
    Xval {
        #[arg(long)]
        region: PathBuf,
        /// Corpus file; repeat per descriptor or give one shared file
        #[arg(long, required = true)]
        responses: Vec<PathBuf>,
        /// Descriptor label; repeatable
        #[arg(long, required = true)]
        descriptor: Vec<String>,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        /// Test points sampled per held-out polygon
        #[arg(long, default_value_t = 30)]
        samples: usize,
        /// Granularity of the lattice test points are drawn from
        #[arg(long, default_value_t = 1.0)]
        sample_granularity: f64,
        /// Granularity the per-fold model grids are built at
        #[arg(long, default_value_t = 2.0)]
        model_granularity: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1e-5)]
        epsilon_km: f64,
        /// Report file (JSON)
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare granularities against a baseline grid
    Granularity {
        #[arg(long)]
        region: PathBuf,
        #[arg(long)]
        responses: PathBuf,
        #[arg(long)]
        descriptor: String,
        /// Baseline granularity
        #[arg(long, default_value_t = 1.0)]
        granularity: f64,
        /// Comma-separated granularities to compare, e.g. "2,5,10"
        #[arg(long, default_value = "2,5,10", value_delimiter = ',')]
        others: Vec<f64>,
        #[arg(long, default_value_t = 1e-5)]
        epsilon_km: f64,
        /// Report file (JSON)
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare grid B against the fuzzy complement of grid A
    Antonymy {
        #[arg(long)]
        grid_a: PathBuf,
        #[arg(long)]
        grid_b: PathBuf,
        /// Optional region; targets come from its lattice instead of grid A's
        #[arg(long)]
        region: Option<PathBuf>,
        /// Target lattice granularity (with --region)
        #[arg(long, default_value_t = 1.0)]
        granularity: f64,
        #[arg(long, default_value_t = 1e-5)]
        epsilon_km: f64,
        /// Report file (JSON)
        #[arg(long)]
        out: PathBuf,
    },
    /// Audit monotonicity of a grid along an axis
    Monotonicity {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long, value_enum)]
        axis: AxisArg,
        #[arg(long, value_enum)]
        direction: DirectionArg,
        /// Report file (JSON)
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a synthetic half-plane survey corpus
    Synth {
        #[arg(long)]
        region: PathBuf,
        #[arg(long)]
        descriptor: String,
        #[arg(long, value_enum, default_value_t = KindArg::Latitude)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = SideArg::High)]
        side: SideArg,
        /// Dividing line as a fraction of the region extent
        #[arg(long, default_value_t = 0.5)]
        center: f64,
        /// Uniform jitter amplitude around the center
        #[arg(long, default_value_t = 0.15)]
        jitter: f64,
        /// Number of synthetic respondents
        #[arg(long, default_value_t = 98)]
        count: usize,
        #[arg(long)]
        seed: u64,
        /// Output responses file (GeoJSON)
        #[arg(long)]
        out: PathBuf,
    },
    /// Export a grid file to CSV or a GeoJSON point collection
    Export {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long, value_enum)]
        format: FormatArg,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    Lat,
    Lon,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Increasing,
    Decreasing,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Latitude,
    Longitude,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    High,
    Low,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Geojson,
}

/// A failed command: the exit code and the diagnostic for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl From<fuzzygeo::Error> for Failure {
    fn from(e: fuzzygeo::Error) -> Self {
        Failure {
            code: 1,
            message: format!("{}: {e}", e.code()),
        }
    }
}

fn invariant_failure(e: fuzzygeo::Error) -> Failure {
    Failure {
        code: 2,
        message: format!("internal invariant violated: {e}"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("fuzzygeo: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: 1,
        message: format!("Io: cannot read {}: {e}", path.display()),
    })
}

fn write_file(path: &Path, content: &str) -> Result<(), Failure> {
    fs::write(path, content).map_err(|e| Failure {
        code: 1,
        message: format!("Io: cannot write {}: {e}", path.display()),
    })
}

fn load_region_file(path: &Path) -> Result<RegionBoundary, Failure> {
    Ok(load_region(&read_file(path)?)?)
}

fn load_grid_file(path: &Path) -> Result<FuzzyGrid, Failure> {
    Ok(load_grid(&read_file(path)?)?)
}

const REPORT_FORMAT_VERSION: u64 = 1;

#[derive(serde::Serialize)]
struct VersionedReport<'a, T: serde::Serialize> {
    format_version: u64,
    #[serde(flatten)]
    report: &'a T,
}

fn report_json<T: serde::Serialize>(report: &T) -> String {
    let versioned = VersionedReport {
        format_version: REPORT_FORMAT_VERSION,
        report,
    };
    let mut out = serde_json::to_string_pretty(&versioned).expect("report serializes");
    out.push('\n');
    out
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Build {
            region,
            responses,
            descriptor,
            granularity,
            out,
        } => {
            let region = load_region_file(&region)?;
            let label = DescriptorLabel::new(&descriptor)?;
            let granularity = GranularitySpec::new(granularity)?;
            let (set, report) = load_responses(&read_file(&responses)?, &label)?;
            if !report.rejected.is_empty() {
                for (index, reason) in &report.rejected {
                    eprintln!("fuzzygeo: dropped response {index}: {reason}");
                }
            }
            let start = Instant::now();
            let grid = build_fuzzy_grid(&region, &set, granularity)?;
            let seconds = start.elapsed().as_secs_f64();
            write_file(&out, &save_grid(&grid))?;
            println!(
                "built \"{label}\" at {}%: {} points from {} polygons in {seconds:.4} s",
                granularity.percent(),
                grid.points.len(),
                grid.response_count,
            );
            Ok(())
        }
        Command::Eval {
            grid,
            lon,
            lat,
            epsilon_km,
        } => {
            let grid = load_grid_file(&grid)?;
            let point = GeoPoint::new(lon, lat)?;
            let params = EvalParams::new(epsilon_km)?;
            let md = evaluate(&grid, point, &params)?;
            println!("{md:.6}");
            Ok(())
        }
        Command::Xval {
            region,
            responses,
            descriptor,
            folds,
            samples,
            sample_granularity,
            model_granularity,
            seed,
            epsilon_km,
            out,
        } => {
            let region = load_region_file(&region)?;
            let sets = load_response_sets(&responses, &descriptor)?;
            let config = CrossValConfig {
                folds,
                samples_per_polygon: samples,
                sample_granularity: GranularitySpec::new(sample_granularity)?,
                model_granularity: GranularitySpec::new(model_granularity)?,
                seed,
            };
            let params = EvalParams::new(epsilon_km)?;
            let report = cross_validate(&region, &sets, &config, &params)?;
            report.validate().map_err(invariant_failure)?;
            write_file(&out, &report_json(&report))?;
            tables::print_crossval(&report);
            Ok(())
        }
        Command::Granularity {
            region,
            responses,
            descriptor,
            granularity,
            others,
            epsilon_km,
            out,
        } => {
            let region = load_region_file(&region)?;
            let label = DescriptorLabel::new(&descriptor)?;
            let (set, _) = load_responses(&read_file(&responses)?, &label)?;
            let baseline = GranularitySpec::new(granularity)?;
            let others = others
                .into_iter()
                .map(GranularitySpec::new)
                .collect::<fuzzygeo::Result<Vec<_>>>()?;
            let params = EvalParams::new(epsilon_km)?;
            let report = granularity_study(&region, &set, baseline, &others, &params)?;
            report.validate().map_err(invariant_failure)?;
            write_file(&out, &report_json(&report))?;
            tables::print_granularity(&report);
            Ok(())
        }
        Command::Antonymy {
            grid_a,
            grid_b,
            region,
            granularity,
            epsilon_km,
            out,
        } => {
            let grid_a = load_grid_file(&grid_a)?;
            let grid_b = load_grid_file(&grid_b)?;
            let targets = match region {
                Some(path) => {
                    let region = load_region_file(&path)?;
                    make_grid_points(&region, GranularitySpec::new(granularity)?)?
                }
                None => grid_a.locations(),
            };
            let params = EvalParams::new(epsilon_km)?;
            let report = antonymy_check(&grid_a, &grid_b, &targets, &params)?;
            report.validate().map_err(invariant_failure)?;
            write_file(&out, &report_json(&report))?;
            println!(
                "antonymy over {} targets: mean |diff| {:.6}, max |diff| {:.6}",
                report.diff_points.len(),
                report.mean_abs_diff,
                report.max_abs_diff
            );
            Ok(())
        }
        Command::Monotonicity {
            grid,
            axis,
            direction,
            out,
        } => {
            let grid = load_grid_file(&grid)?;
            let axis = match axis {
                AxisArg::Lat => Axis::Lat,
                AxisArg::Lon => Axis::Lon,
            };
            let direction = match direction {
                DirectionArg::Increasing => Direction::Increasing,
                DirectionArg::Decreasing => Direction::Decreasing,
            };
            let report = monotonicity_check(&grid, axis, direction);
            report.validate().map_err(invariant_failure)?;
            write_file(&out, &report_json(&report))?;
            println!(
                "monotonicity: {} violation(s) across {} grid points",
                report.violations.len(),
                grid.points.len()
            );
            for v in report.violations.iter().take(10) {
                println!("  {} md {} -> {} md {}", v.point_a, v.md_a, v.point_b, v.md_b);
            }
            if report.violations.len() > 10 {
                println!("  ... and {} more", report.violations.len() - 10);
            }
            Ok(())
        }
        Command::Synth {
            region,
            descriptor,
            kind,
            side,
            center,
            jitter,
            count,
            seed,
            out,
        } => {
            let region = load_region_file(&region)?;
            let label = DescriptorLabel::new(&descriptor)?;
            let kind = match kind {
                KindArg::Latitude => SynthKind::LatitudeHalfPlane,
                KindArg::Longitude => SynthKind::LongitudeHalfPlane,
            };
            let side = match side {
                SideArg::High => SynthSide::High,
                SideArg::Low => SynthSide::Low,
            };
            let model = SynthModel::new(kind, side, center, jitter, seed)?;
            let set = synth_responses(&region, &label, &model, count)?;
            write_file(&out, &save_responses(&set))?;
            println!(
                "wrote {} synthetic \"{label}\" polygons to {}",
                set.polygons.len(),
                out.display()
            );
            Ok(())
        }
        Command::Export { grid, format, out } => {
            let grid = load_grid_file(&grid)?;
            let content = match format {
                FormatArg::Csv => export_csv(&grid),
                FormatArg::Geojson => export_geojson(&grid),
            };
            write_file(&out, &content)?;
            println!("exported {} points to {}", grid.points.len(), out.display());
            Ok(())
        }
    }
}

/// Pair corpus files with descriptors: either one shared file for all
/// labels, or exactly one file per label.
fn load_response_sets(
    responses: &[PathBuf],
    descriptors: &[String],
) -> Result<Vec<ResponseSet>, Failure> {
    let paths: Vec<&PathBuf> = if responses.len() == 1 {
        descriptors.iter().map(|_| &responses[0]).collect()
    } else if responses.len() == descriptors.len() {
        responses.iter().collect()
    } else {
        return Err(Failure {
            code: 1,
            message: format!(
                "InvalidArguments: {} responses file(s) for {} descriptor(s); give one shared file or one per descriptor",
                responses.len(),
                descriptors.len()
            ),
        });
    };
    let mut sets = Vec::with_capacity(descriptors.len());
    for (path, name) in paths.iter().zip(descriptors) {
        let label = DescriptorLabel::new(name)?;
        let (set, _) = load_responses(&read_file(path)?, &label)?;
        sets.push(set);
    }
    Ok(sets)
}

fn export_csv(grid: &FuzzyGrid) -> String {
    let mut out = String::from("lon,lat,md\n");
    for gp in &grid.points {
        out.push_str(&format!("{},{},{}\n", gp.location.lon, gp.location.lat, gp.md));
    }
    out
}

fn export_geojson(grid: &FuzzyGrid) -> String {
    let features: Vec<serde_json::Value> = grid
        .points
        .iter()
        .map(|gp| {
            serde_json::json!({
                "type": "Feature",
                "properties": { "md": gp.md },
                "geometry": { "type": "Point", "coordinates": [gp.location.lon, gp.location.lat] }
            })
        })
        .collect();
    let doc = serde_json::json!({ "type": "FeatureCollection", "features": features });
    serde_json::to_string(&doc).expect("GeoJSON document serializes")
}
