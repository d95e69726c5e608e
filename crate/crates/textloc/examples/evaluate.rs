//! Detection quality on a synthetic corpus: run the detector on each scene,
//! match detections to the planted rectangles, and report the detection
//! rate, false-positive rate, and missed-data rate.
//!
//! ```sh
//! cargo run --release --example evaluate [N_IMAGES]
//! ```

use textloc::eval::{compute_metrics, match_detections, metrics_from_counts};
use textloc::pipeline::detect_blocks;
use textloc::synth::synthetic_corpus;
use textloc::{BlockLabel, GroundTruth, PipelineConfig};

fn main() -> textloc::Result<()> {
    let count: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("N_IMAGES must be an integer"))
        .unwrap_or(8);

    let cfg = PipelineConfig::default();
    let corpus = synthetic_corpus(count, 0.02, 97);
    println!(
        "{:<12} {:>6} {:>6} {:>8} {:>8} {:>8}",
        "image", "found", "actual", "DR %", "FPR %", "MDR %"
    );

    let (mut tdb, mut fdb, mut mdb, mut actual) = (0usize, 0usize, 0usize, 0usize);
    for (id, scene) in &corpus {
        let blocks = detect_blocks(&scene.image, &cfg)?;
        let gt = GroundTruth {
            image_id: id.clone(),
            boxes: scene.boxes.clone(),
        };
        let labeled = match_detections(&blocks, &gt, cfg.coverage_tau, cfg.miss_tau)?;
        let report = compute_metrics(&labeled, gt.boxes.len()).rounded();
        println!(
            "{:<12} {:>6} {:>6} {:>8.2} {:>8.2} {:>8.2}",
            id,
            blocks.len(),
            gt.boxes.len(),
            report.dr,
            report.fpr,
            report.mdr
        );
        tdb += labeled.iter().filter(|l| l.label == BlockLabel::Tdb).count();
        fdb += labeled.iter().filter(|l| l.label == BlockLabel::Fdb).count();
        mdb += labeled
            .iter()
            .filter(|l| l.label == BlockLabel::Tdb && l.missing_data)
            .count();
        actual += gt.boxes.len();
    }

    let overall = metrics_from_counts(tdb, fdb, mdb, actual).rounded();
    println!();
    println!(
        "overall: DR {:.2}%  FPR {:.2}%  MDR {:.2}%  ({} detections over {} actual blocks)",
        overall.dr,
        overall.fpr,
        overall.mdr,
        tdb + fdb,
        actual
    );
    Ok(())
}
