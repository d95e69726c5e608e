//! File I/O: image decoding to unit-range grayscale, PNG encoding of
//! rasters and masks, and the JSON schemas for box lists and ground truth.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::GroundTruth;
use crate::fusion::TextBlock;
use crate::image::{BinaryMap, GrayImage};

/// Box-list output schema: one file per image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxList {
    pub image_id: String,
    pub config_hash: String,
    pub blocks: Vec<TextBlock>,
}

/// Identifier for an image file: its stem, e.g. `frames/shot1.png` -> `shot1`.
pub fn image_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.to_string_lossy().into_owned())
}

const IMAGE_EXTENSIONS: [&str; 4] = ["png", "jpg", "jpeg", "bmp"];

/// Is this a path the loader will accept?
pub fn is_image_path(path: &Path) -> bool {
    path.extension()
        .map(|e| {
            let e = e.to_string_lossy().to_lowercase();
            IMAGE_EXTENSIONS.contains(&e.as_str())
        })
        .unwrap_or(false)
}

/// All image files directly inside `dir`, sorted by name so every traversal
/// order downstream is deterministic.
pub fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    let mut paths: Vec<PathBuf> = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::Io {
            path: dir.to_path_buf(),
            source: e,
        })?;
        let path = entry.path();
        if path.is_file() && is_image_path(&path) {
            paths.push(path);
        }
    }
    paths.sort();
    Ok(paths)
}

/// Decode an image to grayscale in `[0, 1]` via BT.601 luma
/// (`0.299 R + 0.587 G + 0.114 B`) on 8-bit channels.
pub fn load_gray(path: &Path) -> Result<GrayImage> {
    let decoded = ::image::open(path).map_err(|e| Error::Image {
        path: path.to_path_buf(),
        source: e,
    })?;
    let rgb = decoded.to_rgb8();
    let (w, h) = (rgb.width() as usize, rgb.height() as usize);
    let mut data = Vec::with_capacity(w * h);
    for pixel in rgb.pixels() {
        let [r, g, b] = pixel.0;
        let luma = 0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b);
        data.push(luma / 255.0);
    }
    GrayImage::from_vec(w, h, data)
}

fn unit_to_u8(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

fn save_png(path: &Path, buf: impl FnOnce() -> ::image::DynamicImage) -> Result<()> {
    buf().save(path).map_err(|e| Error::Image {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Write a grayscale raster as an 8-bit PNG, clamping to `[0, 1]`.
pub fn save_gray_png(img: &GrayImage, path: &Path) -> Result<()> {
    let (w, h) = (img.width() as u32, img.height() as u32);
    let pixels: Vec<u8> = img.data().iter().map(|&v| unit_to_u8(v)).collect();
    save_png(path, move || {
        ::image::DynamicImage::ImageLuma8(
            ::image::ImageBuffer::from_raw(w, h, pixels).expect("buffer size matches"),
        )
    })
}

/// Write a binary mask as a black/white PNG.
pub fn save_mask_png(mask: &BinaryMap, path: &Path) -> Result<()> {
    let (w, h) = (mask.width() as u32, mask.height() as u32);
    let pixels: Vec<u8> = mask.data().iter().map(|&v| if v { 255 } else { 0 }).collect();
    save_png(path, move || {
        ::image::DynamicImage::ImageLuma8(
            ::image::ImageBuffer::from_raw(w, h, pixels).expect("buffer size matches"),
        )
    })
}

/// Write an RGB raster (e.g. an annotated image) as a PNG.
pub fn save_rgb_png(
    rgb: &::image::ImageBuffer<::image::Rgb<u8>, Vec<u8>>,
    path: &Path,
) -> Result<()> {
    rgb.save(path).map_err(|e| Error::Image {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Serialize any report type as pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Write the box list for one image.
pub fn write_box_list(list: &BoxList, path: &Path) -> Result<()> {
    write_json(list, path)
}

pub fn read_box_list(path: &Path) -> Result<BoxList> {
    read_json(path)
}

/// Read and sanity-check a ground-truth annotation file.
pub fn read_ground_truth(path: &Path) -> Result<GroundTruth> {
    let gt: GroundTruth = read_json(path)?;
    for b in &gt.boxes {
        if b[0] > b[2] || b[1] > b[3] {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                message: format!("ground-truth box {b:?} has inverted corners"),
            });
        }
    }
    Ok(gt)
}
