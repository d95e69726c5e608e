//! Write a reusable test corpus to disk: striped-block scenes as PNGs plus
//! matching ground-truth files, ready for the `textloc detect` and
//! `textloc eval` commands.
//!
//! ```sh
//! cargo run --example synthetic_corpus [OUT_DIR] [N_IMAGES]
//! ```

use std::path::PathBuf;

use textloc::io::{save_gray_png, write_json};
use textloc::synth::synthetic_corpus;
use textloc::GroundTruth;

fn main() -> textloc::Result<()> {
    let mut args = std::env::args().skip(1);
    let out_dir: PathBuf = args
        .next()
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("textloc-examples/corpus"));
    let count: usize = args
        .next()
        .map(|s| s.parse().expect("N_IMAGES must be an integer"))
        .unwrap_or(10);

    let images = out_dir.join("images");
    let gt = out_dir.join("gt");
    std::fs::create_dir_all(&images).expect("create image directory");
    std::fs::create_dir_all(&gt).expect("create ground-truth directory");

    for (id, scene) in synthetic_corpus(count, 0.02, 4242) {
        save_gray_png(&scene.image, &images.join(format!("{id}.png")))?;
        let truth = GroundTruth {
            image_id: id.clone(),
            boxes: scene.boxes.clone(),
        };
        write_json(&truth, &gt.join(format!("{id}.json")))?;
        println!("{id}: {} block(s)", scene.boxes.len());
    }

    println!();
    println!("corpus written to {}", out_dir.display());
    println!("try:");
    println!("  textloc detect {} --out {}", images.display(), out_dir.join("detections").display());
    println!("  textloc eval {} {}", images.display(), gt.display());
    Ok(())
}
