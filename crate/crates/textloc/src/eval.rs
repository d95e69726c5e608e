//! Block-level detection scoring: detections are matched against
//! ground-truth boxes by intersection coverage and aggregated into
//! detection-rate, false-positive-rate, and misdetection-rate percentages.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::TextBlock;

/// Ground-truth box `[x0, y0, x1, y1]` with inclusive corners.
pub type GtBox = [usize; 4];

/// Ground-truth annotation for one image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub image_id: String,
    pub boxes: Vec<GtBox>,
}

/// Classification of one detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum BlockLabel {
    /// Truly detected: sufficient overlap with some ground-truth box.
    Tdb,
    /// Falsely detected: insufficient overlap with every ground-truth box.
    Fdb,
}

/// A detection together with its match verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LabeledDetection {
    pub block: TextBlock,
    pub label: BlockLabel,
    /// True when the detection covers too little of its best-matched
    /// ground-truth box (it "misses" part of the text). Only ever set on
    /// truly detected blocks.
    pub missing_data: bool,
}

/// Aggregated counts and percentage metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalReport {
    pub n_actual: usize,
    pub n_tdb: usize,
    pub n_fdb: usize,
    pub n_mdb: usize,
    /// Detection rate: 100 * TDB / actual.
    pub dr: f64,
    /// False-positive rate: 100 * FDB / (TDB + FDB).
    pub fpr: f64,
    /// Misdetection rate: 100 * MDB / TDB.
    pub mdr: f64,
    /// Set when `n_actual` is 0 and `dr` was reported as 0.
    pub dr_undefined: bool,
    /// Set when there are no detections and `fpr` was reported as 0.
    pub fpr_undefined: bool,
    /// Set when there are no TDBs and `mdr` was reported as 0.
    pub mdr_undefined: bool,
    /// Set when over-segmentation pushes the detection rate past 100%.
    pub dr_exceeds_100: bool,
}

/// Round a percentage to two decimals for presentation.
pub fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

impl EvalReport {
    /// Copy of the report with all percentages rounded to two decimals, the
    /// precision used everywhere results are presented.
    pub fn rounded(mut self) -> EvalReport {
        self.dr = round2(self.dr);
        self.fpr = round2(self.fpr);
        self.mdr = round2(self.mdr);
        self
    }
}

fn box_area(b: &GtBox) -> usize {
    (b[2] - b[0] + 1) * (b[3] - b[1] + 1)
}

fn det_box(d: &TextBlock) -> GtBox {
    [d.x0, d.y0, d.x1, d.y1]
}

/// Intersection area of two inclusive boxes.
fn intersection(a: &GtBox, b: &GtBox) -> usize {
    let x0 = a[0].max(b[0]);
    let y0 = a[1].max(b[1]);
    let x1 = a[2].min(b[2]);
    let y1 = a[3].min(b[3]);
    if x0 > x1 || y0 > y1 {
        0
    } else {
        (x1 - x0 + 1) * (y1 - y0 + 1)
    }
}

fn check_tau(name: &str, tau: f64) -> Result<()> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "{name} must be in (0, 1], got {tau}"
        )));
    }
    Ok(())
}

/// Label each detection against the ground truth.
///
/// A detection is truly detected when its intersection with some
/// ground-truth box reaches `coverage_tau` times the smaller of the two
/// rectangle areas; otherwise it is a false detection. A truly detected
/// block is additionally flagged as missing data when it covers less than
/// `miss_tau` of its best-matched (largest-intersection) ground-truth box.
/// One ground-truth box may validate any number of detections.
pub fn match_detections(
    dets: &[TextBlock],
    gt: &GroundTruth,
    coverage_tau: f64,
    miss_tau: f64,
) -> Result<Vec<LabeledDetection>> {
    check_tau("coverage_tau", coverage_tau)?;
    check_tau("miss_tau", miss_tau)?;
    let mut out = Vec::with_capacity(dets.len());
    for det in dets {
        let dbox = det_box(det);
        let darea = box_area(&dbox);
        let mut is_tdb = false;
        let mut best: Option<(usize, usize)> = None; // (intersection, gt area)
        for gt_box in &gt.boxes {
            let inter = intersection(&dbox, gt_box);
            let garea = box_area(gt_box);
            if inter as f64 >= coverage_tau * darea.min(garea) as f64 {
                is_tdb = true;
            }
            if best.map_or(true, |(bi, _)| inter > bi) {
                best = Some((inter, garea));
            }
        }
        let missing_data = if is_tdb {
            let (inter, garea) = best.expect("TDB implies at least one GT box");
            (inter as f64) < miss_tau * garea as f64
        } else {
            false
        };
        out.push(LabeledDetection {
            block: *det,
            label: if is_tdb { BlockLabel::Tdb } else { BlockLabel::Fdb },
            missing_data,
        });
    }
    Ok(out)
}

/// Apply the three metric formulas to labeled detections. Zero denominators
/// report the metric as 0 and set the matching `*_undefined` flag.
pub fn compute_metrics(labeled: &[LabeledDetection], n_actual: usize) -> EvalReport {
    let n_tdb = labeled
        .iter()
        .filter(|l| l.label == BlockLabel::Tdb)
        .count();
    let n_fdb = labeled.len() - n_tdb;
    let n_mdb = labeled.iter().filter(|l| l.missing_data).count();
    metrics_from_counts(n_tdb, n_fdb, n_mdb, n_actual)
}

/// Metrics from raw counts; the batch evaluator pools counts over many
/// images and calls this once (micro-averaging).
pub fn metrics_from_counts(
    n_tdb: usize,
    n_fdb: usize,
    n_mdb: usize,
    n_actual: usize,
) -> EvalReport {
    let ratio = |num: usize, den: usize| {
        if den == 0 {
            (0.0, true)
        } else {
            (100.0 * num as f64 / den as f64, false)
        }
    };
    let (dr, dr_undefined) = ratio(n_tdb, n_actual);
    let (fpr, fpr_undefined) = ratio(n_fdb, n_tdb + n_fdb);
    let (mdr, mdr_undefined) = ratio(n_mdb, n_tdb);
    EvalReport {
        n_actual,
        n_tdb,
        n_fdb,
        n_mdb,
        dr,
        fpr,
        mdr,
        dr_undefined,
        fpr_undefined,
        mdr_undefined,
        dr_exceeds_100: dr > 100.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block(x0: usize, y0: usize, x1: usize, y1: usize) -> TextBlock {
        TextBlock {
            x0,
            y0,
            x1,
            y1,
            area: (x1 - x0 + 1) * (y1 - y0 + 1),
        }
    }

    fn gt(boxes: Vec<GtBox>) -> GroundTruth {
        GroundTruth {
            image_id: "test".into(),
            boxes,
        }
    }

    #[test]
    fn exact_match_is_tdb_without_missing_data() {
        let labeled = match_detections(
            &[block(10, 10, 50, 30)],
            &gt(vec![[10, 10, 50, 30]]),
            0.5,
            0.8,
        )
        .unwrap();
        assert_eq!(labeled[0].label, BlockLabel::Tdb);
        assert!(!labeled[0].missing_data);
    }

    #[test]
    fn disjoint_detection_is_fdb() {
        let labeled = match_detections(
            &[block(0, 0, 5, 5)],
            &gt(vec![[50, 50, 80, 70]]),
            0.5,
            0.8,
        )
        .unwrap();
        assert_eq!(labeled[0].label, BlockLabel::Fdb);
        assert!(!labeled[0].missing_data);
    }

    #[test]
    fn sixty_percent_coverage_is_tdb_with_missing_data() {
        // detection covers the left 60 of 100 columns of the GT box
        let labeled = match_detections(
            &[block(0, 0, 59, 9)],
            &gt(vec![[0, 0, 99, 9]]),
            0.5,
            0.8,
        )
        .unwrap();
        assert_eq!(labeled[0].label, BlockLabel::Tdb);
        assert!(labeled[0].missing_data);
    }

    #[test]
    fn invalid_taus_are_rejected() {
        let dets = [block(0, 0, 1, 1)];
        let g = gt(vec![]);
        for bad in [0.0, -0.5, 1.5] {
            assert!(match_detections(&dets, &g, bad, 0.8).is_err());
            assert!(match_detections(&dets, &g, 0.5, bad).is_err());
        }
    }

    #[test]
    fn every_detection_gets_exactly_one_label() {
        let dets = [block(0, 0, 9, 9), block(100, 100, 120, 110), block(5, 5, 14, 14)];
        let labeled =
            match_detections(&dets, &gt(vec![[0, 0, 9, 9]]), 0.5, 0.8).unwrap();
        assert_eq!(labeled.len(), 3);
        let tdb = labeled.iter().filter(|l| l.label == BlockLabel::Tdb).count();
        let fdb = labeled.iter().filter(|l| l.label == BlockLabel::Fdb).count();
        assert_eq!(tdb + fdb, 3);
    }

    #[test]
    fn matching_is_translation_invariant() {
        let dets = [block(3, 4, 20, 12), block(40, 4, 55, 12)];
        let g = gt(vec![[2, 3, 22, 13]]);
        let shifted_dets: Vec<TextBlock> = dets
            .iter()
            .map(|b| block(b.x0 + 17, b.y0 + 9, b.x1 + 17, b.y1 + 9))
            .collect();
        let shifted_gt = gt(vec![[2 + 17, 3 + 9, 22 + 17, 13 + 9]]);
        let a = match_detections(&dets, &g, 0.5, 0.8).unwrap();
        let b = match_detections(&shifted_dets, &shifted_gt, 0.5, 0.8).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.label, y.label);
            assert_eq!(x.missing_data, y.missing_data);
        }
    }

    #[test]
    fn one_gt_box_can_validate_many_detections() {
        // two detections each covering one half of the same GT box
        let labeled = match_detections(
            &[block(0, 0, 49, 9), block(50, 0, 99, 9)],
            &gt(vec![[0, 0, 99, 9]]),
            0.5,
            0.8,
        )
        .unwrap();
        assert!(labeled.iter().all(|l| l.label == BlockLabel::Tdb));
        assert!(labeled.iter().all(|l| l.missing_data));
    }

    #[test]
    fn metrics_basic_tuple() {
        let report = metrics_from_counts(9, 1, 0, 10);
        assert_eq!(round2(report.dr), 90.0);
        assert_eq!(round2(report.fpr), 10.0);
        assert_eq!(round2(report.mdr), 0.0);
        assert!(!report.dr_undefined && !report.fpr_undefined && !report.mdr_undefined);
        assert!(!report.dr_exceeds_100);
    }

    #[test]
    fn empty_detections_flag_degenerate_denominators() {
        let report = compute_metrics(&[], 5);
        assert_eq!((report.dr, report.fpr, report.mdr), (0.0, 0.0, 0.0));
        assert!(!report.dr_undefined);
        assert!(report.fpr_undefined);
        assert!(report.mdr_undefined);
    }

    #[test]
    fn zero_actual_blocks_flag_dr() {
        let report = metrics_from_counts(0, 3, 0, 0);
        assert!(report.dr_undefined);
        assert_eq!(report.dr, 0.0);
        assert_eq!(round2(report.fpr), 100.0);
    }

    #[test]
    fn oversegmentation_flags_dr_above_100() {
        let report = metrics_from_counts(11, 0, 0, 10);
        assert!(report.dr_exceeds_100);
        assert_eq!(round2(report.dr), 110.0);
    }

    #[test]
    fn compute_metrics_counts_labels() {
        let g = gt(vec![[0, 0, 99, 9], [0, 50, 99, 59]]);
        let dets = [
            block(0, 0, 99, 9),    // exact
            block(0, 50, 59, 59),  // partial, missing data
            block(0, 200, 20, 210) // false positive
        ];
        let labeled = match_detections(&dets, &g, 0.5, 0.8).unwrap();
        let report = compute_metrics(&labeled, 2);
        assert_eq!((report.n_tdb, report.n_fdb, report.n_mdb), (2, 1, 1));
        assert_eq!(round2(report.dr), 100.0);
        assert_eq!(round2(report.fpr), round2(100.0 / 3.0));
        assert_eq!(round2(report.mdr), 50.0);
        assert!(report.n_mdb <= report.n_tdb);
    }
}
