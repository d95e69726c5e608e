//! Text localization in still images and video frames.
//!
//! The detector finds horizontal runs of high-contrast strokes — text — by
//! combining two complementary cues computed on a wavelet-compressed copy of
//! the input:
//!
//! 1. **Compression** ([`dwt`]): a multilevel 2-D Daubechies transform
//!    decomposes the image; detail coefficients below a per-level magnitude
//!    quantile are zeroed (keeping the strongest `keep_ratio` fraction) and
//!    the image is reconstructed. Text survives compression as dense local
//!    contrast while smooth background detail washes out.
//! 2. **Gradient difference** ([`gradient`]): Sobel edges feed a horizontal
//!    `[-1 1]` difference; per pixel, the max minus min of that gradient
//!    over a centered 1xN window is large wherever strokes alternate
//!    direction rapidly. Otsu's method binarizes the map.
//! 3. **Zero crossings** ([`zerocross`]): columns of the binary map with at
//!    least two top-to-bottom transitions are filled into solid vertical
//!    bands, and small connected components are discarded.
//! 4. **Fusion** ([`fusion`]): the two masks are ANDed, cleaned, dilated by
//!    a wide rectangular element to bridge inter-character gaps, and each
//!    surviving 8-connected component becomes a [`TextBlock`] bounding box.
//!
//! [`pipeline::run_pipeline`] chains the stages; [`batch`] runs directories
//! with a bounded worker pool and deterministic output; [`eval`] scores
//! detections against ground-truth boxes with block-level detection-rate,
//! false-positive-rate, and misdetection-rate percentages.
//!
//! ```
//! use textloc::{detect_blocks, synth, PipelineConfig};
//!
//! let scene = synth::striped_block_scene(320, 240, 2, 0.02, 7);
//! let blocks = detect_blocks(&scene.image, &PipelineConfig::default()).unwrap();
//! assert_eq!(blocks.len(), scene.boxes.len());
//! ```
//!
//! The `examples/` directory demonstrates each capability end to end; the
//! thin `textloc` binary wraps [`batch`] with `detect`, `eval`, and
//! `compress` subcommands.

pub mod batch;
pub mod components;
pub mod config;
pub mod dwt;
pub mod error;
pub mod eval;
pub mod fusion;
pub mod gradient;
pub mod image;
pub mod io;
pub mod pipeline;
pub mod render;
pub mod synth;
pub mod zerocross;

pub use config::{MinArea, PipelineConfig};
pub use error::{Error, Result};
pub use eval::{
    compute_metrics, match_detections, BlockLabel, EvalReport, GroundTruth, LabeledDetection,
};
pub use fusion::{StructuringElement, TextBlock};
pub use gradient::GradientDifferenceMap;
pub use image::{BinaryMap, GrayImage};
pub use pipeline::{compress_reconstruct, detect_blocks, run_pipeline, PipelineOutput};
