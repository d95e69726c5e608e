//! The full detection pipeline on one frame, with every intermediate
//! raster captured and an annotated overlay of the final boxes.
//!
//! ```sh
//! cargo run --example localize [OUT_DIR]
//! ```

use std::path::PathBuf;

use textloc::io::{save_gray_png, save_mask_png, save_rgb_png};
use textloc::pipeline::run_pipeline;
use textloc::render::annotate;
use textloc::synth::striped_block_scene;
use textloc::PipelineConfig;

fn main() -> textloc::Result<()> {
    let out_dir: PathBuf = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("textloc-examples/localize"));
    std::fs::create_dir_all(&out_dir).expect("create output directory");

    let scene = striped_block_scene(640, 480, 3, 0.02, 53);
    save_gray_png(&scene.image, &out_dir.join("input.png"))?;

    let cfg = PipelineConfig::default();
    let output = run_pipeline(&scene.image, &cfg, true)?;
    let trace = output.trace.as_ref().expect("tracing was requested");

    save_gray_png(&trace.reconstructed, &out_dir.join("1-reconstructed.png"))?;
    save_gray_png(&trace.edges, &out_dir.join("2-edges.png"))?;
    save_mask_png(&trace.gd_mask, &out_dir.join("3-gd-mask.png"))?;
    save_mask_png(&trace.zc_band, &out_dir.join("4-zc-band.png"))?;
    save_mask_png(&trace.zc_mask, &out_dir.join("5-zc-mask.png"))?;
    save_mask_png(&trace.fused, &out_dir.join("6-fused.png"))?;
    save_mask_png(&trace.cleaned, &out_dir.join("7-cleaned.png"))?;
    save_mask_png(&trace.dilated, &out_dir.join("8-dilated.png"))?;

    let (annotated, warnings) = annotate(&scene.image, &output.blocks);
    save_rgb_png(&annotated, &out_dir.join("9-annotated.png"))?;
    for w in warnings {
        eprintln!("warning: {w}");
    }

    println!("planted rectangles:");
    for b in &scene.boxes {
        println!("  ({}, {})-({}, {})", b[0], b[1], b[2], b[3]);
    }
    println!("detected blocks:");
    for b in &output.blocks {
        println!(
            "  ({}, {})-({}, {}) area={}",
            b.x0, b.y0, b.x1, b.y1, b.area
        );
    }
    println!("stage rasters and overlay written to {}", out_dir.display());
    Ok(())
}
