//! Wavelet compression round trip: sweep the kept-coefficient ratio and
//! report the PSNR of each reconstruction.
//!
//! ```sh
//! cargo run --example compress [OUT_DIR]
//! ```

use std::path::PathBuf;

use textloc::io::save_gray_png;
use textloc::pipeline::compress_reconstruct;
use textloc::synth::striped_block_scene;
use textloc::PipelineConfig;

fn main() -> textloc::Result<()> {
    let out_dir: PathBuf = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("textloc-examples/compress"));
    std::fs::create_dir_all(&out_dir).expect("create output directory");

    let scene = striped_block_scene(640, 480, 3, 0.02, 11);
    save_gray_png(&scene.image, &out_dir.join("original.png"))?;
    println!("original image: {}", out_dir.join("original.png").display());
    println!();
    println!("{:>10}  {:>10}", "keep", "PSNR (dB)");

    for keep in [1.0, 0.5, 0.2, 0.05, 0.01] {
        let mut cfg = PipelineConfig::default();
        cfg.keep_ratio = keep;
        let (recon, psnr) = compress_reconstruct(&scene.image, &cfg)?;
        let name = format!("recon-{keep:.2}.png");
        save_gray_png(&recon, &out_dir.join(&name))?;
        if psnr.is_finite() {
            println!("{keep:>10.2}  {psnr:>10.2}");
        } else {
            println!("{keep:>10.2}  {:>10}", "lossless");
        }
    }

    println!();
    println!("reconstructions written to {}", out_dir.display());
    Ok(())
}
