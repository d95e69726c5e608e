//! Batch orchestration: run the pipeline over directories with a bounded
//! worker pool, write box lists and annotated images, and aggregate
//! evaluation metrics over an image/ground-truth directory pair.
//!
//! Per-image results are collected in input order, so output is
//! deterministic for any worker count.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::eval::{compute_metrics, match_detections, metrics_from_counts, EvalReport};
use crate::io::{
    self, image_id, list_images, load_gray, read_ground_truth, save_gray_png, save_mask_png,
    save_rgb_png, BoxList,
};
use crate::pipeline::{run_pipeline, PipelineTrace};
use crate::render::annotate;

/// Environment variable overriding the worker count.
pub const WORKERS_ENV: &str = "TEXTLOC_WORKERS";

fn parse_workers(value: Option<&str>) -> Result<usize> {
    match value {
        None => Ok(std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)),
        Some(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(Error::InvalidParameter(format!(
                "{WORKERS_ENV} must be a positive integer, got {s:?}"
            ))),
        },
    }
}

/// Worker count from `TEXTLOC_WORKERS`, defaulting to the machine's
/// available parallelism.
pub fn worker_count() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(s) => parse_workers(Some(&s)),
        Err(std::env::VarError::NotPresent) => parse_workers(None),
        Err(std::env::VarError::NotUnicode(_)) => Err(Error::InvalidParameter(format!(
            "{WORKERS_ENV} is not valid unicode"
        ))),
    }
}

fn build_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot build worker pool: {e}")))
}

/// Successful detection on one image.
#[derive(Debug, Clone)]
pub struct DetectSuccess {
    pub box_list: BoxList,
    /// Annotation warnings (e.g. clipped outlines); empty unless `--out`
    /// rendering found something to complain about.
    pub warnings: Vec<String>,
}

/// Outcome of one image in a detection batch.
#[derive(Debug)]
pub struct DetectResult {
    pub path: PathBuf,
    pub image_id: String,
    pub outcome: Result<DetectSuccess>,
}

fn write_trace(trace: &PipelineTrace, out_dir: &Path, id: &str) -> Result<()> {
    let gray = [
        ("reconstructed", &trace.reconstructed),
        ("edges", &trace.edges),
        ("gradient", &trace.gradient),
    ];
    for (stage, raster) in gray {
        save_gray_png(raster, &out_dir.join(format!("{id}.trace.{stage}.png")))?;
    }
    // normalize the GD map so the PNG spans the full 8-bit range
    let max = trace.gd.data().iter().fold(0.0f64, |a, &v| a.max(v));
    let scale = if max > 0.0 { 1.0 / max } else { 1.0 };
    let mut gd_vis = trace.gd.as_image().clone();
    for v in gd_vis.data_mut() {
        *v *= scale;
    }
    save_gray_png(&gd_vis, &out_dir.join(format!("{id}.trace.gd.png")))?;
    let masks = [
        ("gd_mask", &trace.gd_mask),
        ("zc_band", &trace.zc_band),
        ("zc_mask", &trace.zc_mask),
        ("fused", &trace.fused),
        ("cleaned", &trace.cleaned),
        ("dilated", &trace.dilated),
    ];
    for (stage, mask) in masks {
        save_mask_png(mask, &out_dir.join(format!("{id}.trace.{stage}.png")))?;
    }
    Ok(())
}

fn detect_one(
    path: &Path,
    cfg: &PipelineConfig,
    out_dir: Option<&Path>,
    trace: bool,
) -> Result<DetectSuccess> {
    let id = image_id(path);
    let img = load_gray(path)?;
    let output = run_pipeline(&img, cfg, trace)?;
    let box_list = BoxList {
        image_id: id.clone(),
        config_hash: cfg.hash(),
        blocks: output.blocks,
    };
    let mut warnings = Vec::new();
    if let Some(dir) = out_dir {
        io::write_box_list(&box_list, &dir.join(format!("{id}.boxes.json")))?;
        let (rgb, mut annotate_warnings) = annotate(&img, &box_list.blocks);
        warnings.append(&mut annotate_warnings);
        save_rgb_png(&rgb, &dir.join(format!("{id}.annotated.png")))?;
        if let Some(trace) = &output.trace {
            write_trace(trace, dir, &id)?;
        }
    }
    Ok(DetectSuccess { box_list, warnings })
}

/// Run detection over explicit image paths with `workers` threads.
/// Per-image failures are recorded in the result list; the batch keeps
/// going. Results come back in input order.
pub fn detect_paths(
    paths: &[PathBuf],
    cfg: &PipelineConfig,
    out_dir: Option<&Path>,
    trace: bool,
    workers: usize,
) -> Result<Vec<DetectResult>> {
    cfg.validate()?;
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io {
            path: dir.to_path_buf(),
            source: e,
        })?;
    }
    let pool = build_pool(workers)?;
    let results = pool.install(|| {
        paths
            .par_iter()
            .map(|path| DetectResult {
                path: path.clone(),
                image_id: image_id(path),
                outcome: detect_one(path, cfg, out_dir, trace),
            })
            .collect()
    });
    Ok(results)
}

/// Run detection over every image in a directory (sorted by name).
pub fn detect_dir(
    dir: &Path,
    cfg: &PipelineConfig,
    out_dir: Option<&Path>,
    trace: bool,
    workers: usize,
) -> Result<Vec<DetectResult>> {
    let paths = list_images(dir)?;
    if paths.is_empty() {
        return Err(Error::EmptyInput(dir.to_path_buf()));
    }
    detect_paths(&paths, cfg, out_dir, trace, workers)
}

/// Per-image slice of an evaluation run.
#[derive(Debug, Clone, Serialize)]
pub struct ImageEval {
    pub image_id: String,
    pub metrics: EvalReport,
}

/// A file that could not be processed during evaluation.
#[derive(Debug, Serialize)]
pub struct EvalFailure {
    pub path: PathBuf,
    pub message: String,
}

/// Full evaluation report: pooled (micro-averaged) metrics plus the
/// per-image breakdown and everything that was skipped or failed.
#[derive(Debug, Serialize)]
pub struct EvalRunReport {
    pub config_hash: String,
    pub coverage_tau: f64,
    pub miss_tau: f64,
    pub overall: EvalReport,
    pub per_image: Vec<ImageEval>,
    pub skipped_no_ground_truth: Vec<String>,
    pub failures: Vec<EvalFailure>,
}

enum EvalOutcome {
    Scored(ImageEval),
    Skipped(String),
    Failed(EvalFailure),
}

/// Evaluate the pipeline over a directory of images against per-image
/// ground-truth files (`<gt_dir>/<image_id>.json`). Images without ground
/// truth are skipped with a note; unreadable or failing images are recorded
/// and the run continues.
pub fn run_eval(
    image_dir: &Path,
    gt_dir: &Path,
    cfg: &PipelineConfig,
    workers: usize,
) -> Result<EvalRunReport> {
    cfg.validate()?;
    if !gt_dir.is_dir() {
        return Err(Error::Io {
            path: gt_dir.to_path_buf(),
            source: std::io::Error::new(
                std::io::ErrorKind::NotFound,
                "ground-truth directory not found",
            ),
        });
    }
    let paths = list_images(image_dir)?;
    if paths.is_empty() {
        return Err(Error::EmptyInput(image_dir.to_path_buf()));
    }
    let pool = build_pool(workers)?;
    let outcomes: Vec<EvalOutcome> = pool.install(|| {
        paths
            .par_iter()
            .map(|path| {
                let id = image_id(path);
                let gt_path = gt_dir.join(format!("{id}.json"));
                if !gt_path.is_file() {
                    return EvalOutcome::Skipped(id);
                }
                let scored = (|| -> Result<ImageEval> {
                    let gt = read_ground_truth(&gt_path)?;
                    let img = load_gray(path)?;
                    let blocks = crate::pipeline::detect_blocks(&img, cfg)?;
                    let labeled =
                        match_detections(&blocks, &gt, cfg.coverage_tau, cfg.miss_tau)?;
                    let metrics = compute_metrics(&labeled, gt.boxes.len()).rounded();
                    Ok(ImageEval {
                        image_id: id.clone(),
                        metrics,
                    })
                })();
                match scored {
                    Ok(image_eval) => EvalOutcome::Scored(image_eval),
                    Err(e) => EvalOutcome::Failed(EvalFailure {
                        path: path.clone(),
                        message: e.to_string(),
                    }),
                }
            })
            .collect()
    });

    let mut per_image = Vec::new();
    let mut skipped = Vec::new();
    let mut failures = Vec::new();
    let (mut tdb, mut fdb, mut mdb, mut actual) = (0usize, 0usize, 0usize, 0usize);
    for outcome in outcomes {
        match outcome {
            EvalOutcome::Scored(image_eval) => {
                tdb += image_eval.metrics.n_tdb;
                fdb += image_eval.metrics.n_fdb;
                mdb += image_eval.metrics.n_mdb;
                actual += image_eval.metrics.n_actual;
                per_image.push(image_eval);
            }
            EvalOutcome::Skipped(id) => skipped.push(id),
            EvalOutcome::Failed(failure) => failures.push(failure),
        }
    }
    let overall = metrics_from_counts(tdb, fdb, mdb, actual).rounded();
    Ok(EvalRunReport {
        config_hash: cfg.hash(),
        coverage_tau: cfg.coverage_tau,
        miss_tau: cfg.miss_tau,
        overall,
        per_image,
        skipped_no_ground_truth: skipped,
        failures,
    })
}
