//! Column-wise transition analysis of the binarized gradient-difference
//! mask, the vertical band mask built from it, and small-component removal.

use crate::components::label_components;
use crate::error::{Error, Result};
use crate::image::BinaryMap;

/// Transition statistics for one column, scanned top to bottom. A value
/// change between rows `y-1` and `y` is recorded at row `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColumnTransitions {
    /// Number of 0->1 and 1->0 changes in the column.
    pub count: usize,
    /// Row of the first change, absent for uniform columns.
    pub first: Option<usize>,
    /// Row of the last change, absent for uniform columns.
    pub last: Option<usize>,
}

/// Per-column transition statistics for a whole mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroCrossingProfile {
    columns: Vec<ColumnTransitions>,
}

impl ZeroCrossingProfile {
    /// Number of columns (the mask width).
    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn column(&self, x: usize) -> &ColumnTransitions {
        &self.columns[x]
    }

    pub fn columns(&self) -> &[ColumnTransitions] {
        &self.columns
    }
}

/// Count the 0<->1 transitions of every column of `mask`, top to bottom.
pub fn column_transitions(mask: &BinaryMap) -> ZeroCrossingProfile {
    let (w, h) = (mask.width(), mask.height());
    let mut columns = Vec::with_capacity(w);
    for x in 0..w {
        let mut count = 0usize;
        let mut first = None;
        let mut last = None;
        for y in 1..h {
            if mask.get(x, y) != mask.get(x, y - 1) {
                count += 1;
                if first.is_none() {
                    first = Some(y);
                }
                last = Some(y);
            }
        }
        columns.push(ColumnTransitions { count, first, last });
    }
    ZeroCrossingProfile { columns }
}

/// Fill each qualifying column into a solid vertical band.
///
/// A column qualifies when it has at least two transitions; its band spans
/// from its topmost to its bottommost true pixel, so every true input pixel
/// of a qualifying column stays true. Other columns come out all false.
pub fn zc_band_mask(mask: &BinaryMap, profile: &ZeroCrossingProfile) -> Result<BinaryMap> {
    let (w, h) = (mask.width(), mask.height());
    if profile.len() != w {
        return Err(Error::ShapeMismatch(format!(
            "profile has {} columns, mask is {w} wide",
            profile.len()
        )));
    }
    let mut out = BinaryMap::new(w, h);
    for x in 0..w {
        if profile.column(x).count < 2 {
            continue;
        }
        let mut top = None;
        let mut bottom = 0usize;
        for y in 0..h {
            if mask.get(x, y) {
                if top.is_none() {
                    top = Some(y);
                }
                bottom = y;
            }
        }
        if let Some(top) = top {
            for y in top..=bottom {
                out.set(x, y, true);
            }
        }
    }
    Ok(out)
}

/// Drop 8-connected components smaller than `min_area` pixels; everything
/// else is preserved exactly.
pub fn remove_small_components(mask: &BinaryMap, min_area: usize) -> BinaryMap {
    if min_area <= 1 {
        return mask.clone();
    }
    let labeling = label_components(mask);
    let keep: Vec<bool> = labeling.areas().iter().map(|&a| a >= min_area).collect();
    let mut out = BinaryMap::new(mask.width(), mask.height());
    for (slot, &label) in out.data_mut().iter_mut().zip(labeling.labels()) {
        *slot = label != 0 && keep[(label - 1) as usize];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn column_mask(values: &[bool]) -> BinaryMap {
        BinaryMap::from_vec(1, values.len(), values.to_vec()).unwrap()
    }

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn all_false_mask_has_no_transitions() {
        let profile = column_transitions(&BinaryMap::new(4, 6));
        for col in profile.columns() {
            assert_eq!(
                *col,
                ColumnTransitions {
                    count: 0,
                    first: None,
                    last: None
                }
            );
        }
    }

    #[test]
    fn uniform_true_column_has_no_transitions() {
        let profile = column_transitions(&column_mask(&bits("1111")));
        assert_eq!(profile.column(0).count, 0);
        assert_eq!(profile.column(0).first, None);
    }

    #[test]
    fn single_run_column() {
        let profile = column_transitions(&column_mask(&bits("00110")));
        assert_eq!(
            *profile.column(0),
            ColumnTransitions {
                count: 2,
                first: Some(2),
                last: Some(4)
            }
        );
    }

    #[test]
    fn alternating_column() {
        let profile = column_transitions(&column_mask(&bits("0101")));
        assert_eq!(
            *profile.column(0),
            ColumnTransitions {
                count: 3,
                first: Some(1),
                last: Some(3)
            }
        );
    }

    #[test]
    fn counts_match_run_length_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..30 {
            let w = rng.random_range(1..20);
            let h = rng.random_range(1..40);
            let data: Vec<bool> = (0..w * h).map(|_| rng.random::<bool>()).collect();
            let mask = BinaryMap::from_vec(w, h, data).unwrap();
            let profile = column_transitions(&mask);
            for x in 0..w {
                let column: Vec<bool> = (0..h).map(|y| mask.get(x, y)).collect();
                let mut runs = 0usize;
                let mut prev = false;
                for &v in &column {
                    if v && !prev {
                        runs += 1;
                    }
                    prev = v;
                }
                let mut expect = 2 * runs;
                if column.first() == Some(&true) {
                    expect -= 1;
                }
                if column.last() == Some(&true) {
                    expect -= 1;
                }
                assert_eq!(profile.column(x).count, expect);
            }
        }
    }

    #[test]
    fn band_mask_of_all_false_is_all_false() {
        let mask = BinaryMap::new(3, 5);
        let profile = column_transitions(&mask);
        let band = zc_band_mask(&mask, &profile).unwrap();
        assert_eq!(band.count_true(), 0);
    }

    #[test]
    fn band_fills_between_outermost_patches() {
        let mask = column_mask(&bits("001010"));
        let profile = column_transitions(&mask);
        let band = zc_band_mask(&mask, &profile).unwrap();
        let got: Vec<bool> = (0..6).map(|y| band.get(0, y)).collect();
        assert_eq!(got, bits("001110"));
    }

    #[test]
    fn solid_column_is_dropped() {
        let mask = column_mask(&bits("1111"));
        let profile = column_transitions(&mask);
        let band = zc_band_mask(&mask, &profile).unwrap();
        assert_eq!(band.count_true(), 0);
    }

    #[test]
    fn band_keeps_true_pixels_of_qualifying_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for _ in 0..20 {
            let w = rng.random_range(1..16);
            let h = rng.random_range(2..24);
            let data: Vec<bool> = (0..w * h).map(|_| rng.random::<f64>() < 0.4).collect();
            let mask = BinaryMap::from_vec(w, h, data).unwrap();
            let profile = column_transitions(&mask);
            let band = zc_band_mask(&mask, &profile).unwrap();
            for x in 0..w {
                let qualifies = profile.column(x).count >= 2;
                for y in 0..h {
                    if mask.get(x, y) && qualifies {
                        assert!(band.get(x, y), "lost true pixel at ({x}, {y})");
                    }
                    if !qualifies {
                        assert!(!band.get(x, y), "non-qualifying column lit at ({x}, {y})");
                    }
                }
            }
        }
    }

    #[test]
    fn band_mask_checks_profile_shape() {
        let mask = BinaryMap::new(4, 4);
        let profile = column_transitions(&BinaryMap::new(3, 4));
        assert!(matches!(
            zc_band_mask(&mask, &profile),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn min_area_zero_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let data: Vec<bool> = (0..12 * 9).map(|_| rng.random::<bool>()).collect();
        let mask = BinaryMap::from_vec(12, 9, data).unwrap();
        assert_eq!(remove_small_components(&mask, 0), mask);
    }

    #[test]
    fn small_blob_is_removed_large_survives() {
        // a 1x5 run (area 5) and a 5x10 rectangle (area 50)
        let mut mask = BinaryMap::new(20, 14);
        for x in 2..7 {
            mask.set(x, 1, true);
        }
        for y in 3..13 {
            for x in 10..15 {
                mask.set(x, y, true);
            }
        }
        let out = remove_small_components(&mask, 20);
        assert_eq!(out.count_true(), 50);
        assert!(!out.get(3, 1));
        assert!(out.get(12, 5));
    }

    #[test]
    fn remove_small_is_idempotent_and_anti_extensive() {
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        for _ in 0..10 {
            let data: Vec<bool> = (0..32 * 32).map(|_| rng.random::<f64>() < 0.35).collect();
            let mask = BinaryMap::from_vec(32, 32, data).unwrap();
            let once = remove_small_components(&mask, 6);
            let twice = remove_small_components(&once, 6);
            assert_eq!(once, twice);
            for (a, b) in once.data().iter().zip(mask.data()) {
                assert!(!a | b, "output must be a subset of the input");
            }
        }
    }
}
