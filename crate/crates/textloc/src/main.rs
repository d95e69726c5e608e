//! Thin command-line wrapper around the textloc library: `detect` runs the
//! localization pipeline on an image or directory, `eval` scores a directory
//! against ground truth, and `compress` exposes the wavelet round trip.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use textloc::batch::{detect_dir, detect_paths, run_eval, worker_count, DetectResult};
use textloc::config::MinArea;
use textloc::io::{load_gray, save_gray_png, write_json};
use textloc::pipeline::compress_reconstruct;
use textloc::{PipelineConfig, Result};

#[derive(Parser)]
#[command(
    name = "textloc",
    version,
    about = "Localize text blocks in images via wavelet compression, \
             gradient-difference and zero-crossing analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect text blocks in an image or every image in a directory
    Detect(DetectArgs),
    /// Run detection over a directory and score it against ground truth
    Eval(EvalArgs),
    /// Compress and reconstruct an image, reporting the PSNR
    Compress(CompressArgs),
}

#[derive(Clone, Copy)]
struct SeDims {
    width: usize,
    height: usize,
}

fn parse_se(s: &str) -> std::result::Result<SeDims, String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, e.g. 15x5, got {s:?}"))?;
    let width = w.trim().parse().map_err(|_| format!("bad width in {s:?}"))?;
    let height = h.trim().parse().map_err(|_| format!("bad height in {s:?}"))?;
    Ok(SeDims { width, height })
}

fn parse_min_area(s: &str) -> std::result::Result<MinArea, String> {
    if s == "auto" {
        return Ok(MinArea::Auto);
    }
    s.parse()
        .map(MinArea::Fixed)
        .map_err(|_| format!("expected a pixel count or \"auto\", got {s:?}"))
}

#[derive(Args)]
struct DetectArgs {
    /// Image file or directory of images
    input: PathBuf,
    /// Directory for box lists, annotated images, and traces
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Also write every intermediate stage raster (requires --out)
    #[arg(long)]
    trace: bool,
    /// TOML config file; command-line flags override its values
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Gradient-difference window width (odd)
    #[arg(long, value_name = "N")]
    window: Option<usize>,
    /// Wavelet decomposition levels
    #[arg(long, value_name = "N")]
    levels: Option<usize>,
    /// Fraction of detail coefficients kept, in (0, 1]
    #[arg(long, value_name = "F")]
    keep_ratio: Option<f64>,
    /// Structuring element size as WxH (odd sides), e.g. 15x5
    #[arg(long, value_name = "WxH", value_parser = parse_se)]
    se: Option<SeDims>,
    /// Minimum component area in pixels, or "auto"
    #[arg(long, value_name = "N", value_parser = parse_min_area)]
    min_area: Option<MinArea>,
}

#[derive(Args)]
struct EvalArgs {
    /// Directory of images
    image_dir: PathBuf,
    /// Directory of per-image ground-truth files (<image_id>.json)
    gt_dir: PathBuf,
    /// Coverage fraction of the smaller box required for a true detection
    #[arg(long, value_name = "F")]
    coverage_tau: Option<f64>,
    /// Ground-truth coverage below which a detection misses data
    #[arg(long, value_name = "F")]
    miss_tau: Option<f64>,
    /// Also write the JSON report to this file
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct CompressArgs {
    /// Image file
    image: PathBuf,
    /// Fraction of detail coefficients kept, in (0, 1]
    #[arg(long, value_name = "F")]
    keep_ratio: Option<f64>,
    /// Write the reconstructed image to this file
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn detect_config(args: &DetectArgs) -> Result<PipelineConfig> {
    let mut cfg = match &args.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(window) = args.window {
        cfg.window_width = window;
    }
    if let Some(levels) = args.levels {
        cfg.levels = levels;
    }
    if let Some(keep_ratio) = args.keep_ratio {
        cfg.keep_ratio = keep_ratio;
    }
    if let Some(se) = args.se {
        cfg.se_width = se.width;
        cfg.se_height = se.height;
    }
    if let Some(min_area) = args.min_area {
        cfg.min_area = min_area;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn print_detect_result(result: &DetectResult) {
    match &result.outcome {
        Ok(success) => {
            let blocks = &success.box_list.blocks;
            println!("{}: {} block(s)", result.path.display(), blocks.len());
            for b in blocks {
                println!(
                    "  ({}, {})-({}, {}) area={}",
                    b.x0, b.y0, b.x1, b.y1, b.area
                );
            }
            for warning in &success.warnings {
                eprintln!("warning[{}]: {warning}", result.image_id);
            }
        }
        Err(e) => eprintln!("error[{}]: {e}", result.path.display()),
    }
}

fn cmd_detect(args: DetectArgs) -> Result<()> {
    let cfg = detect_config(&args)?;
    let workers = worker_count()?;
    let results = if args.input.is_dir() {
        detect_dir(&args.input, &cfg, args.out.as_deref(), args.trace, workers)?
    } else {
        detect_paths(
            std::slice::from_ref(&args.input),
            &cfg,
            args.out.as_deref(),
            args.trace,
            workers,
        )?
    };
    for result in &results {
        print_detect_result(result);
    }
    // the batch keeps going past bad files; surface the first failure so the
    // exit code still reflects it
    match results.into_iter().find_map(|r| r.outcome.err()) {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let mut cfg = PipelineConfig::default();
    if let Some(tau) = args.coverage_tau {
        cfg.coverage_tau = tau;
    }
    if let Some(tau) = args.miss_tau {
        cfg.miss_tau = tau;
    }
    cfg.validate()?;
    let workers = worker_count()?;
    let report = run_eval(&args.image_dir, &args.gt_dir, &cfg, workers)?;
    eprintln!(
        "DR {:.2}% FPR {:.2}% MDR {:.2}% ({} detected / {} actual over {} image(s))",
        report.overall.dr,
        report.overall.fpr,
        report.overall.mdr,
        report.overall.n_tdb + report.overall.n_fdb,
        report.overall.n_actual,
        report.per_image.len()
    );
    if let Some(path) = &args.report {
        write_json(&report, path)?;
    }
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    println!("{text}");
    Ok(())
}

fn cmd_compress(args: CompressArgs) -> Result<()> {
    let mut cfg = PipelineConfig::default();
    if let Some(keep_ratio) = args.keep_ratio {
        cfg.keep_ratio = keep_ratio;
    }
    cfg.validate()?;
    let img = load_gray(&args.image)?;
    let (recon, psnr) = compress_reconstruct(&img, &cfg)?;
    println!(
        "{}: {}x{}, keep_ratio {}, PSNR {}",
        args.image.display(),
        img.width(),
        img.height(),
        cfg.keep_ratio,
        if psnr.is_finite() {
            format!("{psnr:.2} dB")
        } else {
            "exact (no loss)".to_string()
        }
    );
    if let Some(path) = &args.out {
        save_gray_png(&recon, path)?;
        println!("reconstruction written to {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1, // usage error
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Detect(args) => cmd_detect(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Compress(args) => cmd_compress(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
