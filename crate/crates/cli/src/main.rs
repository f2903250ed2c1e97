//! `cbir` — build, query and score texture/moment feature indexes over PGM
//! and PPM images.
//!
//! Exit codes: 0 on success, 1 on a usage error (bad flags or parameters),
//! 2 on a data error (unreadable or malformed files). Data goes to stdout,
//! diagnostics to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use cbir_core::eval::evaluate;
use cbir_core::features::{extract, FeatureMode};
use cbir_core::image_io::{decode_image, encode_pgm, load_manifest, GrayImage};
use cbir_core::lbp::LbpParams;
use cbir_core::moments::moment_edge_map;
use cbir_core::retrieval::{build_index, load_index, query, save_index};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "cbir",
    version,
    about = "Content-based image retrieval over texture and moment descriptors",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the feature record of a single image
    Extract {
        /// Image to describe (PGM/PPM)
        image: PathBuf,
        #[command(flatten)]
        descriptor: DescriptorArgs,
        /// Write the record here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a feature index over every image listed in a manifest
    Index {
        /// Manifest file: one `filename,group` line per image, paths
        /// relative to the manifest's directory
        #[arg(long)]
        manifest: PathBuf,
        /// Where to write the index
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        descriptor: DescriptorArgs,
    },
    /// Rank indexed images by ascending distance to a query image
    Query {
        /// Query image (PGM/PPM)
        image: PathBuf,
        /// Index to search
        #[arg(long)]
        index: PathBuf,
        /// Number of matches to print
        #[arg(long, default_value_t = 10)]
        top_k: usize,
        /// Weight applied to the moment block in combined mode
        #[arg(long, default_value_t = 1.0)]
        hu_weight: f64,
    },
    /// Score retrieval quality by querying the index with its own entries
    Eval {
        /// Index to score
        #[arg(long)]
        index: PathBuf,
        /// Comma-separated retrieval cutoffs
        #[arg(long, value_delimiter = ',', default_value = "1,3,5,7,9,11,13,15,16")]
        n_values: Vec<usize>,
        /// Directory that receives summary.csv and groups.csv
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the moment-gradient edge map of an image as a PGM
    Edgemap {
        /// Image to analyze (PGM/PPM)
        image: PathBuf,
        /// Where to write the edge map (255 = edge, 0 = background)
        #[arg(long)]
        out: PathBuf,
        /// Edge threshold as a multiple of the mean gradient magnitude
        #[arg(long, default_value_t = 1.0)]
        threshold_factor: f64,
    },
}

#[derive(Args)]
struct DescriptorArgs {
    /// Feature mode: lbp, gmlbp, hu or combined
    #[arg(long, value_parser = parse_mode, default_value = "gmlbp")]
    mode: FeatureMode,
    /// Sampling points on the circular neighborhood
    #[arg(long, default_value_t = 8)]
    neighbors: u32,
    /// Neighborhood radius in pixels
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Weight applied to the moment block in combined mode
    #[arg(long, default_value_t = 1.0)]
    hu_weight: f64,
}

impl DescriptorArgs {
    fn params(&self) -> Result<LbpParams, CliError> {
        if matches!(self.mode, FeatureMode::Gmlbp | FeatureMode::Combined)
            && (self.neighbors != 8 || self.radius != 1.0)
        {
            return Err(CliError::Usage(format!(
                "mode {} is defined on the 3x3 window only; use --neighbors 8 --radius 1",
                self.mode
            )));
        }
        LbpParams::new(self.neighbors, self.radius).map_err(classify)
    }
}

fn parse_mode(raw: &str) -> Result<FeatureMode, cbir_core::Error> {
    raw.parse()
}

enum CliError {
    Usage(String),
    Data(String),
}

/// Bad parameter values are usage errors; everything else that the engine
/// reports concerns file contents.
fn classify(err: cbir_core::Error) -> CliError {
    use cbir_core::Error as E;
    match err {
        E::InvalidLbpParams(_) | E::UnknownMode(_) | E::InvalidTopK | E::InvalidCutoff { .. } => {
            CliError::Usage(err.to_string())
        }
        other => CliError::Data(other.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = u8::from(err.use_stderr());
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("cbir: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Data(msg)) => {
            eprintln!("cbir: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Extract { image, descriptor, out } => {
            let img = read_image(&image)?;
            let params = descriptor.params()?;
            let vector =
                extract(&img, descriptor.mode, &params, descriptor.hu_weight).map_err(classify)?;
            let record = vector.to_record();
            match out {
                Some(path) => write_file(&path, format!("{record}\n").as_bytes())?,
                None => println!("{record}"),
            }
            Ok(())
        }
        Command::Index { manifest, out, descriptor } => {
            let started = Instant::now();
            let text = read_text(&manifest)?;
            let parsed = load_manifest(&text).map_err(classify)?;
            let root = manifest.parent().unwrap_or(Path::new("."));
            let params = descriptor.params()?;
            let index = build_index(&parsed, root, descriptor.mode, &params, descriptor.hu_weight)
                .map_err(classify)?;
            let mut bytes = Vec::new();
            save_index(&index, &mut bytes).map_err(classify)?;
            write_file(&out, &bytes)?;
            eprintln!(
                "cbir: indexed {} images (mode {}, dim {}) in {:.1?}",
                index.len(),
                index.mode(),
                index.dim(),
                started.elapsed()
            );
            Ok(())
        }
        Command::Query { image, index, top_k, hu_weight } => {
            let idx = load_index(&read_text(&index)?).map_err(classify)?;
            let img = read_image(&image)?;
            let params = idx.params();
            let vector = extract(&img, idx.mode(), &params, hu_weight).map_err(classify)?;
            let result = query(&idx, &vector, top_k).map_err(classify)?;
            for (rank, hit) in result.matches().iter().enumerate() {
                println!(
                    "{}\t{}\t{}\t{}",
                    rank + 1,
                    hit.image_id(),
                    hit.group_label(),
                    hit.distance()
                );
            }
            Ok(())
        }
        Command::Eval { index, n_values, out } => {
            let started = Instant::now();
            let idx = load_index(&read_text(&index)?).map_err(classify)?;
            let report = evaluate(&idx, &n_values).map_err(classify)?;
            print!("{}", report.render_table());
            if let Some(dir) = out {
                fs::create_dir_all(&dir)
                    .map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))?;
                write_file(&dir.join("summary.csv"), report.summary_csv().as_bytes())?;
                write_file(&dir.join("groups.csv"), report.groups_csv().as_bytes())?;
            }
            eprintln!(
                "cbir: scored {} queries at {} cutoffs in {:.1?}",
                idx.len(),
                report.rows().len(),
                started.elapsed()
            );
            Ok(())
        }
        Command::Edgemap { image, out, threshold_factor } => {
            if !threshold_factor.is_finite() || threshold_factor < 0.0 {
                return Err(CliError::Usage(format!(
                    "--threshold-factor must be a finite non-negative number, got {threshold_factor}"
                )));
            }
            let img = read_image(&image)?;
            let map = moment_edge_map(&img, 1, 1, threshold_factor).map_err(classify)?;
            write_file(&out, &encode_pgm(&map.to_gray()))?;
            eprintln!(
                "cbir: {} edge pixels of {} ({}x{} map)",
                map.edge_count(),
                map.width() * map.height(),
                map.width(),
                map.height()
            );
            Ok(())
        }
    }
}

fn read_image(path: &Path) -> Result<GrayImage, CliError> {
    let bytes =
        fs::read(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    decode_image(&bytes).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}
