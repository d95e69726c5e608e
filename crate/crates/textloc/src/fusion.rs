//! Mask fusion and localization: AND the gradient-difference and
//! zero-crossing masks, drop small components, dilate to close intra-word
//! gaps, and emit the surviving components as text bounding boxes.

use serde::{Deserialize, Serialize};

use crate::components::label_components;
use crate::error::{Error, Result};
use crate::image::BinaryMap;
use crate::zerocross::remove_small_components;

/// Axis-aligned text bounding box with inclusive corners and the pixel area
/// of the component it encloses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextBlock {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
    pub area: usize,
}

impl TextBlock {
    /// Number of pixels covered by the bounding rectangle (not the area of
    /// the underlying component).
    pub fn box_area(&self) -> usize {
        (self.x1 - self.x0 + 1) * (self.y1 - self.y0 + 1)
    }
}

/// All-true rectangular dilation footprint with odd side lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructuringElement {
    width: usize,
    height: usize,
}

impl StructuringElement {
    pub fn rect(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 || width % 2 == 0 || height % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "structuring element sides must be odd and >= 1, got {width}x{height}"
            )));
        }
        Ok(Self { width, height })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }
}

/// Pixel-wise conjunction of two same-sized masks.
pub fn and_masks(gd_mask: &BinaryMap, zc_mask: &BinaryMap) -> Result<BinaryMap> {
    if !gd_mask.same_shape(zc_mask) {
        return Err(Error::ShapeMismatch(format!(
            "mask dimensions differ: {}x{} vs {}x{}",
            gd_mask.width(),
            gd_mask.height(),
            zc_mask.width(),
            zc_mask.height()
        )));
    }
    let mut out = BinaryMap::new(gd_mask.width(), gd_mask.height());
    for ((slot, &a), &b) in out.data_mut().iter_mut().zip(gd_mask.data()).zip(zc_mask.data()) {
        *slot = a && b;
    }
    Ok(out)
}

/// Dilate along one axis by a centered segment of the given radius, using a
/// prefix-count so each pixel costs O(1). `horizontal` selects the axis.
fn dilate_axis(mask: &BinaryMap, radius: usize, horizontal: bool) -> BinaryMap {
    if radius == 0 {
        return mask.clone();
    }
    let (w, h) = (mask.width(), mask.height());
    let mut out = BinaryMap::new(w, h);
    let len = if horizontal { w } else { h };
    let lanes = if horizontal { h } else { w };
    let mut prefix = vec![0u32; len + 1];
    for lane in 0..lanes {
        let at = |i: usize| {
            if horizontal {
                mask.get(i, lane)
            } else {
                mask.get(lane, i)
            }
        };
        for i in 0..len {
            prefix[i + 1] = prefix[i] + u32::from(at(i));
        }
        for i in 0..len {
            let lo = i.saturating_sub(radius);
            let hi = (i + radius).min(len - 1);
            if prefix[hi + 1] > prefix[lo] {
                if horizontal {
                    out.set(i, lane, true);
                } else {
                    out.set(lane, i, true);
                }
            }
        }
    }
    out
}

/// Binary dilation by the rectangular element: output true wherever the
/// element footprint centered there covers at least one true input pixel.
/// Out-of-image positions count as false.
pub fn dilate(mask: &BinaryMap, se: &StructuringElement) -> BinaryMap {
    // a rectangle separates into a horizontal and a vertical segment
    let pass1 = dilate_axis(mask, se.width / 2, true);
    dilate_axis(&pass1, se.height / 2, false)
}

/// Extract one block per 8-connected component with area >= `min_area`,
/// sorted by box position for deterministic output.
pub fn extract_blocks(mask: &BinaryMap, min_area: usize) -> Vec<TextBlock> {
    let labeling = label_components(mask);
    let boxes = labeling.component_boxes();
    let mut blocks: Vec<TextBlock> = labeling
        .areas()
        .iter()
        .zip(&boxes)
        .filter(|(&area, _)| area >= min_area.max(1))
        .map(|(&area, &(x0, y0, x1, y1))| TextBlock {
            x0,
            y0,
            x1,
            y1,
            area,
        })
        .collect();
    blocks.sort_by_key(|b| (b.y0, b.x0, b.y1, b.x1));
    blocks
}

/// Full localization: AND the masks, drop small components, dilate, and
/// box the surviving components.
pub fn localize(
    gd_mask: &BinaryMap,
    zc_mask: &BinaryMap,
    se: &StructuringElement,
    min_area: usize,
) -> Result<Vec<TextBlock>> {
    let fused = and_masks(gd_mask, zc_mask)?;
    let cleaned = remove_small_components(&fused, min_area);
    let dilated = dilate(&cleaned, se);
    Ok(extract_blocks(&dilated, min_area))
}
