//! End-to-end detection pipeline: wavelet compression, reconstruction,
//! gradient-difference and zero-crossing masks, fusion, and box extraction,
//! with optional capture of every intermediate raster.

use crate::config::PipelineConfig;
use crate::dwt::{decompose, reconstruct, threshold_details, FilterBank};
use crate::error::Result;
use crate::fusion::{localize, StructuringElement, TextBlock};
use crate::gradient::{
    binarize_gd, gradient_difference, horizontal_gradient, sobel_edges, GradientDifferenceMap,
};
use crate::image::{BinaryMap, GrayImage};
use crate::zerocross::{column_transitions, remove_small_components, zc_band_mask};

/// Every intermediate raster of one pipeline run, for debugging and the
/// `--trace` CLI flag.
#[derive(Debug, Clone)]
pub struct PipelineTrace {
    /// Image after compression and reconstruction.
    pub reconstructed: GrayImage,
    /// Sobel magnitude of the reconstructed image.
    pub edges: GrayImage,
    /// Horizontal forward difference of the edge image.
    pub gradient: GrayImage,
    /// Windowed max-minus-min map.
    pub gd: GradientDifferenceMap,
    /// Otsu-binarized GD map.
    pub gd_mask: BinaryMap,
    /// Column bands filled between outermost crossings.
    pub zc_band: BinaryMap,
    /// Band mask after small-component removal; second input to the AND.
    pub zc_mask: BinaryMap,
    /// Conjunction of gd_mask and zc_mask.
    pub fused: BinaryMap,
    /// Fused mask after small-component removal.
    pub cleaned: BinaryMap,
    /// Cleaned mask after dilation; components of this mask become blocks.
    pub dilated: BinaryMap,
}

/// Result of one pipeline run.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub blocks: Vec<TextBlock>,
    /// Present when tracing was requested.
    pub trace: Option<PipelineTrace>,
}

/// Run the full detection pipeline on one grayscale image.
///
/// Failures carry the name of the stage that raised them. Tracing only adds
/// captured rasters; the block list is identical either way.
pub fn run_pipeline(
    img: &GrayImage,
    cfg: &PipelineConfig,
    trace: bool,
) -> Result<PipelineOutput> {
    cfg.validate()?;
    let (w, h) = (img.width(), img.height());

    let bank = FilterBank::daubechies(cfg.wavelet_order).map_err(|e| e.at_stage("filter-bank"))?;
    let pyramid = decompose(img, &bank, cfg.levels).map_err(|e| e.at_stage("decompose"))?;
    let pyramid = threshold_details(&pyramid, cfg.keep_ratio).map_err(|e| e.at_stage("threshold"))?;
    let reconstructed = reconstruct(&pyramid, &bank, w, h).map_err(|e| e.at_stage("reconstruct"))?;

    let edges = sobel_edges(&reconstructed);
    let gradient = horizontal_gradient(&edges).map_err(|e| e.at_stage("gradient"))?;
    let gd = gradient_difference(&gradient, cfg.window_width)
        .map_err(|e| e.at_stage("gradient-difference"))?;
    let gd_mask = binarize_gd(&gd);

    let profile = column_transitions(&gd_mask);
    let zc_band = zc_band_mask(&gd_mask, &profile).map_err(|e| e.at_stage("zero-crossing"))?;
    let min_area = cfg.resolve_min_area(w, h);
    let zc_mask = remove_small_components(&zc_band, min_area);

    let se = StructuringElement::rect(cfg.se_width, cfg.se_height)
        .map_err(|e| e.at_stage("structuring-element"))?;
    let blocks = localize(&gd_mask, &zc_mask, &se, min_area).map_err(|e| e.at_stage("localize"))?;

    let trace = if trace {
        use crate::fusion::{and_masks, dilate};
        let fused = and_masks(&gd_mask, &zc_mask).map_err(|e| e.at_stage("localize"))?;
        let cleaned = remove_small_components(&fused, min_area);
        let dilated = dilate(&cleaned, &se);
        Some(PipelineTrace {
            reconstructed,
            edges,
            gradient,
            gd,
            gd_mask,
            zc_band,
            zc_mask,
            fused,
            cleaned,
            dilated,
        })
    } else {
        None
    };

    Ok(PipelineOutput { blocks, trace })
}

/// Convenience wrapper returning only the block list.
pub fn detect_blocks(img: &GrayImage, cfg: &PipelineConfig) -> Result<Vec<TextBlock>> {
    Ok(run_pipeline(img, cfg, false)?.blocks)
}

/// Compress an image through the wavelet stage and reconstruct it,
/// returning the reconstruction and its PSNR in dB against the original
/// (infinite when the round trip is exact).
pub fn compress_reconstruct(
    img: &GrayImage,
    cfg: &PipelineConfig,
) -> Result<(GrayImage, f64)> {
    cfg.validate()?;
    let bank = FilterBank::daubechies(cfg.wavelet_order).map_err(|e| e.at_stage("filter-bank"))?;
    let pyramid = decompose(img, &bank, cfg.levels).map_err(|e| e.at_stage("decompose"))?;
    let pyramid = threshold_details(&pyramid, cfg.keep_ratio).map_err(|e| e.at_stage("threshold"))?;
    let recon = reconstruct(&pyramid, &bank, img.width(), img.height())
        .map_err(|e| e.at_stage("reconstruct"))?;
    let n = img.data().len() as f64;
    let mse = img
        .data()
        .iter()
        .zip(recon.data())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / n;
    let psnr = if mse == 0.0 {
        f64::INFINITY
    } else {
        -10.0 * mse.log10() // peak value is 1.0
    };
    Ok((recon, psnr))
}
