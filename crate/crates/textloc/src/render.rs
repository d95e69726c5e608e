//! Rendering of detection results: grayscale replicated to RGB with 2-px
//! box outlines in a fixed highlight color.

use crate::fusion::TextBlock;
use crate::image::GrayImage;

pub type RgbRaster = ::image::ImageBuffer<::image::Rgb<u8>, Vec<u8>>;

/// Outline color for detected blocks.
const HIGHLIGHT: ::image::Rgb<u8> = ::image::Rgb([255, 32, 32]);
/// Outline thickness in pixels, drawn inward from the box edge.
const THICKNESS: usize = 2;

/// Render the image as RGB with each block outlined. Blocks reaching
/// outside the image are clipped and reported in the returned warnings.
pub fn annotate(img: &GrayImage, blocks: &[TextBlock]) -> (RgbRaster, Vec<String>) {
    let (w, h) = (img.width(), img.height());
    let mut rgb = RgbRaster::from_fn(w as u32, h as u32, |x, y| {
        let v = (img.get(x as usize, y as usize).clamp(0.0, 1.0) * 255.0).round() as u8;
        ::image::Rgb([v, v, v])
    });
    let mut warnings = Vec::new();
    for (i, block) in blocks.iter().enumerate() {
        if block.x0 >= w || block.y0 >= h {
            warnings.push(format!(
                "block {i} at ({}, {}) lies outside the {w}x{h} image; skipped",
                block.x0, block.y0
            ));
            continue;
        }
        let x1 = block.x1.min(w - 1);
        let y1 = block.y1.min(h - 1);
        if x1 != block.x1 || y1 != block.y1 {
            warnings.push(format!(
                "block {i} extends past the {w}x{h} image; outline clipped"
            ));
        }
        draw_outline(&mut rgb, block.x0, block.y0, x1, y1);
    }
    (rgb, warnings)
}

fn draw_outline(rgb: &mut RgbRaster, x0: usize, y0: usize, x1: usize, y1: usize) {
    for ring in 0..THICKNESS {
        let rx0 = x0 + ring;
        let ry0 = y0 + ring;
        let (Some(rx1), Some(ry1)) = (x1.checked_sub(ring), y1.checked_sub(ring)) else {
            break;
        };
        if rx0 > rx1 || ry0 > ry1 {
            break; // box too small for another ring
        }
        for x in rx0..=rx1 {
            rgb.put_pixel(x as u32, ry0 as u32, HIGHLIGHT);
            rgb.put_pixel(x as u32, ry1 as u32, HIGHLIGHT);
        }
        for y in ry0..=ry1 {
            rgb.put_pixel(rx0 as u32, y as u32, HIGHLIGHT);
            rgb.put_pixel(rx1 as u32, y as u32, HIGHLIGHT);
        }
    }
}
