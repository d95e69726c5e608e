//! Column-wise zero-crossing analysis: count black-white transitions per
//! column of a binary mask, fill vertical bands where text-like columns
//! cross at least twice, and drop small stray components.
//!
//! ```sh
//! cargo run --example zero_crossings [OUT_DIR]
//! ```

use std::path::PathBuf;

use textloc::gradient::{binarize_gd, gradient_difference, horizontal_gradient, sobel_edges};
use textloc::io::save_mask_png;
use textloc::synth::striped_block_scene;
use textloc::zerocross::{column_transitions, remove_small_components, zc_band_mask};

fn main() -> textloc::Result<()> {
    let out_dir: PathBuf = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("textloc-examples/zero-crossings"));
    std::fs::create_dir_all(&out_dir).expect("create output directory");

    let scene = striped_block_scene(640, 480, 2, 0.02, 37);
    let edges = sobel_edges(&scene.image);
    let grad = horizontal_gradient(&edges)?;
    let gd = gradient_difference(&grad, 11)?;
    let mask = binarize_gd(&gd);
    save_mask_png(&mask, &out_dir.join("input-mask.png"))?;

    let profile = column_transitions(&mask);
    let busy = profile.columns().iter().filter(|c| c.count >= 2).count();
    let max_count = profile.columns().iter().map(|c| c.count).max().unwrap_or(0);
    println!(
        "{} of {} columns have at least two transitions (max {max_count})",
        busy,
        profile.len()
    );

    let band = zc_band_mask(&mask, &profile)?;
    save_mask_png(&band, &out_dir.join("band-mask.png"))?;
    println!(
        "band mask fills {} pixels (input mask had {})",
        band.count_true(),
        mask.count_true()
    );

    let cleaned = remove_small_components(&band, 154);
    save_mask_png(&cleaned, &out_dir.join("cleaned-mask.png"))?;
    println!(
        "small-component removal keeps {} pixels at min area 154",
        cleaned.count_true()
    );
    println!("masks written to {}", out_dir.display());
    Ok(())
}
