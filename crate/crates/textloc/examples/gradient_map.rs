//! Edge and gradient-difference stages in isolation: Sobel magnitude,
//! horizontal gradient, the windowed max-minus-min map, and its Otsu
//! binarization, each written out as a raster.
//!
//! ```sh
//! cargo run --example gradient_map [OUT_DIR]
//! ```

use std::path::PathBuf;

use textloc::gradient::{binarize_gd, gradient_difference, horizontal_gradient, sobel_edges};
use textloc::image::GrayImage;
use textloc::io::{save_gray_png, save_mask_png};
use textloc::synth::striped_block_scene;

/// Rescale an arbitrary non-negative raster into [0, 1] for viewing.
fn normalized(img: &GrayImage) -> GrayImage {
    let max = img.data().iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    if max <= 0.0 {
        return img.clone();
    }
    GrayImage::from_vec(
        img.width(),
        img.height(),
        img.data().iter().map(|v| v.abs() / max).collect(),
    )
    .expect("same shape")
}

fn main() -> textloc::Result<()> {
    let out_dir: PathBuf = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("textloc-examples/gradient-map"));
    std::fs::create_dir_all(&out_dir).expect("create output directory");

    let scene = striped_block_scene(640, 480, 2, 0.02, 23);
    save_gray_png(&scene.image, &out_dir.join("input.png"))?;

    let edges = sobel_edges(&scene.image);
    save_gray_png(&normalized(&edges), &out_dir.join("edges.png"))?;

    let grad = horizontal_gradient(&edges)?;
    save_gray_png(&normalized(&grad), &out_dir.join("gradient.png"))?;

    let gd = gradient_difference(&grad, 11)?;
    save_gray_png(&normalized(gd.as_image()), &out_dir.join("gd.png"))?;

    let mask = binarize_gd(&gd);
    save_mask_png(&mask, &out_dir.join("gd-mask.png"))?;

    let total = (mask.width() * mask.height()) as f64;
    println!("input:          striped blocks at {:?}", scene.boxes);
    println!(
        "gd map:         max {:.4} over a window of width 11",
        gd.data().iter().fold(0.0f64, |a, &v| a.max(v))
    );
    println!(
        "binarized mask: {:.1}% of pixels kept",
        100.0 * mask.count_true() as f64 / total
    );
    println!("rasters written to {}", out_dir.display());
    Ok(())
}
