//! Edge and gradient-difference analysis: Sobel magnitude, horizontal
//! forward differencing, the windowed max-minus-min map, and its Otsu
//! binarization into a candidate-text mask.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::image::{BinaryMap, GrayImage};

/// Windowed max-minus-min of the horizontal gradient, per pixel.
///
/// Values are non-negative and the map has the same dimensions as the
/// gradient image it was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientDifferenceMap {
    inner: GrayImage,
}

impl GradientDifferenceMap {
    pub fn width(&self) -> usize {
        self.inner.width()
    }

    pub fn height(&self) -> usize {
        self.inner.height()
    }

    pub fn data(&self) -> &[f64] {
        self.inner.data()
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.inner.get(x, y)
    }

    /// View the map as a plain grayscale raster (for tracing/serialization).
    pub fn as_image(&self) -> &GrayImage {
        &self.inner
    }

    pub fn into_image(self) -> GrayImage {
        self.inner
    }
}

/// Sobel gradient magnitude `sqrt(Gx^2 + Gy^2)` with the standard 3x3
/// kernels. Borders use symmetric (edge-replicating) extension. The output
/// is not normalized; values may exceed 1.
pub fn sobel_edges(img: &GrayImage) -> GrayImage {
    let (w, h) = (img.width(), img.height());
    let sample = |x: isize, y: isize| -> f64 {
        let x = x.clamp(0, w as isize - 1) as usize;
        let y = y.clamp(0, h as isize - 1) as usize;
        img.get(x, y)
    };
    let mut out = GrayImage::new(w, h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let tl = sample(x - 1, y - 1);
            let tc = sample(x, y - 1);
            let tr = sample(x + 1, y - 1);
            let ml = sample(x - 1, y);
            let mr = sample(x + 1, y);
            let bl = sample(x - 1, y + 1);
            let bc = sample(x, y + 1);
            let br = sample(x + 1, y + 1);
            let gx = (tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl);
            let gy = (bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr);
            out.set(x as usize, y as usize, (gx * gx + gy * gy).sqrt());
        }
    }
    out
}

/// Forward horizontal difference `G(x, y) = F(x+1, y) - F(x, y)`; the last
/// column, where the difference is undefined, is set to 0.
pub fn horizontal_gradient(edge_img: &GrayImage) -> Result<GrayImage> {
    let (w, h) = (edge_img.width(), edge_img.height());
    if w < 2 {
        return Err(Error::TooNarrow { width: w, min: 2 });
    }
    let mut out = GrayImage::new(w, h);
    for y in 0..h {
        let row = edge_img.row(y);
        let out_row = &mut out.data_mut()[y * w..(y + 1) * w];
        for x in 0..w - 1 {
            out_row[x] = row[x + 1] - row[x];
        }
        out_row[w - 1] = 0.0;
    }
    Ok(out)
}

/// Sliding extremum over a centered 1xn window, truncated at the row ends.
/// `CMP(candidate, incumbent)` returns true when the candidate should
/// replace the incumbent, so `>` yields a max filter and `<` a min filter.
fn sliding_extremum(row: &[f64], radius: usize, prefer: impl Fn(f64, f64) -> bool) -> Vec<f64> {
    let w = row.len();
    let mut out = vec![0.0; w];
    // deque holds indices whose values are in decreasing preference order
    let mut deque: VecDeque<usize> = VecDeque::new();
    let mut next = 0usize; // first index not yet admitted
    for x in 0..w {
        let hi = (x + radius).min(w - 1);
        while next <= hi {
            while let Some(&back) = deque.back() {
                if prefer(row[next], row[back]) {
                    deque.pop_back();
                } else {
                    break;
                }
            }
            deque.push_back(next);
            next += 1;
        }
        let lo = x.saturating_sub(radius);
        while let Some(&front) = deque.front() {
            if front < lo {
                deque.pop_front();
            } else {
                break;
            }
        }
        out[x] = row[*deque.front().expect("window is never empty")];
    }
    out
}

/// Windowed gradient difference: per pixel, the max minus the min of the
/// gradient over the centered 1x`window_width` window (truncated at the
/// borders). `window_width` must be odd and between 1 and the image width.
pub fn gradient_difference(
    grad: &GrayImage,
    window_width: usize,
) -> Result<GradientDifferenceMap> {
    let (w, h) = (grad.width(), grad.height());
    if window_width % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "window width must be odd, got {window_width}"
        )));
    }
    if window_width == 0 || window_width > w {
        return Err(Error::InvalidParameter(format!(
            "window width {window_width} out of range 1..={w}"
        )));
    }
    let radius = window_width / 2;
    let mut out = GrayImage::new(w, h);
    for y in 0..h {
        let row = grad.row(y);
        let maxima = sliding_extremum(row, radius, |cand, inc| cand > inc);
        let minima = sliding_extremum(row, radius, |cand, inc| cand < inc);
        let out_row = &mut out.data_mut()[y * w..(y + 1) * w];
        for x in 0..w {
            out_row[x] = maxima[x] - minima[x];
        }
    }
    Ok(GradientDifferenceMap { inner: out })
}

/// Threshold index in `0..=255` maximizing the between-class variance of the
/// histogram split into bins `[0, t)` versus `[t, 256)`. Ties break to the
/// lower index.
pub fn otsu_threshold(hist: &[u64; 256]) -> usize {
    let total: u64 = hist.iter().sum();
    let weighted_total: u64 = hist.iter().enumerate().map(|(i, &c)| i as u64 * c).sum();
    let mut best_t = 0usize;
    let mut best_var = 0.0f64;
    let mut count0: u64 = 0;
    let mut sum0: u64 = 0;
    for t in 0..256 {
        // class 0 = bins below t, so accumulate before evaluating t
        if t > 0 {
            count0 += hist[t - 1];
            sum0 += (t - 1) as u64 * hist[t - 1];
        }
        let count1 = total - count0;
        if count0 == 0 || count1 == 0 {
            continue;
        }
        let mean0 = sum0 as f64 / count0 as f64;
        let mean1 = (weighted_total - sum0) as f64 / count1 as f64;
        let diff = mean0 - mean1;
        let var = count0 as f64 * count1 as f64 * diff * diff;
        if var > best_var {
            best_var = var;
            best_t = t;
        }
    }
    best_t
}

/// Quantize a GD value into one of 256 bins spanning `[0, max]`.
fn gd_bin(value: f64, max: f64) -> usize {
    ((value / max * 255.0).round() as usize).min(255)
}

/// Contrast below this is indistinguishable from floating-point residue:
/// a genuinely flat image run through the wavelet round trip picks up
/// ~1e-15 ripple, while the smallest real step in 8-bit-derived data is
/// 1/255. Maps whose peak falls under the floor binarize to all-false.
const CONTRAST_FLOOR: f64 = 1e-9;

/// Binarize the GD map with a global Otsu threshold over its 256-bin
/// histogram. A map whose values all fall in one bin (including the all-zero
/// map) yields an all-false mask: there is nothing to separate. A map with
/// no measurable contrast at all (peak below [`CONTRAST_FLOOR`]) is treated
/// as all-equal for the same reason.
pub fn binarize_gd(gd: &GradientDifferenceMap) -> BinaryMap {
    let (w, h) = (gd.width(), gd.height());
    let max = gd.data().iter().fold(0.0f64, |a, &v| a.max(v));
    let mut mask = BinaryMap::new(w, h);
    if max <= CONTRAST_FLOOR {
        return mask;
    }
    let mut hist = [0u64; 256];
    for &v in gd.data() {
        hist[gd_bin(v, max)] += 1;
    }
    if hist.iter().filter(|&&c| c > 0).count() < 2 {
        return mask;
    }
    let t = otsu_threshold(&hist);
    for (slot, &v) in mask.data_mut().iter_mut().zip(gd.data()) {
        *slot = gd_bin(v, max) >= t;
    }
    mask
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn row_image(row: &[f64]) -> GrayImage {
        GrayImage::from_vec(row.len(), 1, row.to_vec()).unwrap()
    }

    /// Direct 3x3 convolution oracle with edge replication.
    fn sobel_oracle(img: &GrayImage) -> GrayImage {
        let (w, h) = (img.width(), img.height());
        let kx = [[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]];
        let ky = [[-1.0, -2.0, -1.0], [0.0, 0.0, 0.0], [1.0, 2.0, 1.0]];
        let mut out = GrayImage::new(w, h);
        for y in 0..h {
            for x in 0..w {
                let mut gx = 0.0;
                let mut gy = 0.0;
                for dy in -1i64..=1 {
                    for dx in -1i64..=1 {
                        let sx = (x as i64 + dx).clamp(0, w as i64 - 1) as usize;
                        let sy = (y as i64 + dy).clamp(0, h as i64 - 1) as usize;
                        let v = img.get(sx, sy);
                        gx += kx[(dy + 1) as usize][(dx + 1) as usize] * v;
                        gy += ky[(dy + 1) as usize][(dx + 1) as usize] * v;
                    }
                }
                out.set(x, y, (gx * gx + gy * gy).sqrt());
            }
        }
        out
    }

    fn brute_force_gd(grad: &GrayImage, n: usize) -> Vec<f64> {
        let (w, h) = (grad.width(), grad.height());
        let r = n / 2;
        let mut out = vec![0.0; w * h];
        for y in 0..h {
            for x in 0..w {
                let lo = x.saturating_sub(r);
                let hi = (x + r).min(w - 1);
                let window = &grad.row(y)[lo..=hi];
                let max = window.iter().fold(f64::NEG_INFINITY, |a, &v| a.max(v));
                let min = window.iter().fold(f64::INFINITY, |a, &v| a.min(v));
                out[y * w + x] = max - min;
            }
        }
        out
    }

    #[test]
    fn sobel_of_constant_is_zero() {
        let img = GrayImage::from_vec(7, 5, vec![0.6; 35]).unwrap();
        let edges = sobel_edges(&img);
        for v in edges.data() {
            assert_eq!(*v, 0.0);
        }
    }

    #[test]
    fn sobel_vertical_step_response() {
        // left half 0, right half 1; the two columns flanking the step see
        // gx = 4 and gy = 0, columns away from it see nothing
        let mut img = GrayImage::new(8, 6);
        for y in 0..6 {
            for x in 4..8 {
                img.set(x, y, 1.0);
            }
        }
        let edges = sobel_edges(&img);
        for y in 0..6 {
            assert_abs_diff_eq!(edges.get(3, y), 4.0, epsilon = 1e-12);
            assert_abs_diff_eq!(edges.get(4, y), 4.0, epsilon = 1e-12);
            assert_eq!(edges.get(1, y), 0.0);
            assert_eq!(edges.get(6, y), 0.0);
        }
    }

    #[test]
    fn sobel_matches_direct_convolution_oracle() {
        // summation order differs between the grouped implementation and the
        // kernel-raster oracle, so agreement is to rounding, not bit-exact
        let assert_close = |a: &GrayImage, b: &GrayImage| {
            for (l, r) in a.data().iter().zip(b.data()) {
                assert_abs_diff_eq!(l, r, epsilon = 1e-12);
            }
        };
        let mut img = GrayImage::new(5, 5);
        img.set(2, 2, 1.0);
        assert_close(&sobel_edges(&img), &sobel_oracle(&img));

        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..5 {
            let data = (0..9 * 7).map(|_| rng.random::<f64>()).collect();
            let img = GrayImage::from_vec(9, 7, data).unwrap();
            assert_close(&sobel_edges(&img), &sobel_oracle(&img));
        }
    }

    #[test]
    fn horizontal_gradient_forward_difference() {
        let img = row_image(&[0.0, 1.0, 3.0, 3.0]);
        let grad = horizontal_gradient(&img).unwrap();
        assert_eq!(grad.data(), &[1.0, 2.0, 0.0, 0.0]);
    }

    #[test]
    fn horizontal_gradient_of_constant_is_zero() {
        let img = GrayImage::from_vec(6, 4, vec![0.8; 24]).unwrap();
        let grad = horizontal_gradient(&img).unwrap();
        assert!(grad.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn width_one_image_is_too_narrow() {
        let img = GrayImage::new(1, 5);
        assert!(matches!(
            horizontal_gradient(&img),
            Err(Error::TooNarrow { width: 1, min: 2 })
        ));
    }

    #[test]
    fn gd_of_constant_gradient_is_zero() {
        let img = GrayImage::from_vec(10, 3, vec![0.4; 30]).unwrap();
        let gd = gradient_difference(&img, 5).unwrap();
        assert!(gd.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn gd_small_row_matches_hand_scan() {
        let img = row_image(&[-2.0, 0.0, 5.0, 1.0, -1.0]);
        let gd = gradient_difference(&img, 3).unwrap();
        assert_eq!(gd.data(), &[2.0, 7.0, 5.0, 6.0, 2.0]);
    }

    #[test]
    fn gd_rejects_bad_window() {
        let img = GrayImage::new(8, 2);
        for bad in [0usize, 2, 4, 9, 11] {
            assert!(matches!(
                gradient_difference(&img, bad),
                Err(Error::InvalidParameter(_))
            ));
        }
        assert!(gradient_difference(&img, 7).is_ok());
    }

    #[test]
    fn gd_window_one_is_zero_map() {
        let img = row_image(&[3.0, -1.0, 2.0]);
        let gd = gradient_difference(&img, 1).unwrap();
        assert!(gd.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn gd_matches_brute_force_on_random_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..10 {
            let w = rng.random_range(11..40);
            let h = rng.random_range(1..12);
            let data = (0..w * h).map(|_| rng.random::<f64>() * 8.0 - 4.0).collect();
            let img = GrayImage::from_vec(w, h, data).unwrap();
            for n in [3usize, 5, 11] {
                let gd = gradient_difference(&img, n).unwrap();
                assert_eq!(gd.data(), brute_force_gd(&img, n).as_slice());
            }
        }
    }

    #[test]
    fn gd_shift_invariance_is_exact() {
        // dyadic samples and a dyadic shift keep every f64 subtraction exact
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let data: Vec<f64> = (0..24 * 4)
            .map(|_| rng.random_range(-512..512) as f64 / 1024.0)
            .collect();
        let img = GrayImage::from_vec(24, 4, data.clone()).unwrap();
        let shifted =
            GrayImage::from_vec(24, 4, data.iter().map(|v| v + 3.25).collect()).unwrap();
        let a = gradient_difference(&img, 5).unwrap();
        let b = gradient_difference(&shifted, 5).unwrap();
        assert_eq!(a.data(), b.data());
    }

    #[test]
    fn gd_scale_equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let data: Vec<f64> = (0..30).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let img = GrayImage::from_vec(30, 1, data.clone()).unwrap();
        let scaled = GrayImage::from_vec(30, 1, data.iter().map(|v| v * 3.7).collect()).unwrap();
        let a = gradient_difference(&img, 7).unwrap();
        let b = gradient_difference(&scaled, 7).unwrap();
        for (u, v) in a.data().iter().zip(b.data()) {
            assert_abs_diff_eq!(3.7 * u, *v, epsilon = 1e-12);
        }
    }

    #[test]
    fn gd_monotone_in_window_width() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        let data: Vec<f64> = (0..40).map(|_| rng.random::<f64>()).collect();
        let img = GrayImage::from_vec(40, 1, data).unwrap();
        let narrow = gradient_difference(&img, 3).unwrap();
        let wide = gradient_difference(&img, 9).unwrap();
        for (a, b) in narrow.data().iter().zip(wide.data()) {
            assert!(b >= a);
        }
    }

    fn otsu_oracle(hist: &[u64; 256]) -> usize {
        let mut best_t = 0usize;
        let mut best_var = 0.0f64;
        for t in 0..256 {
            let count0: u64 = hist[..t].iter().sum();
            let count1: u64 = hist[t..].iter().sum();
            if count0 == 0 || count1 == 0 {
                continue;
            }
            let sum0: u64 = hist[..t].iter().enumerate().map(|(i, &c)| i as u64 * c).sum();
            let sum1: u64 = hist[t..]
                .iter()
                .enumerate()
                .map(|(i, &c)| (t + i) as u64 * c)
                .sum();
            let mean0 = sum0 as f64 / count0 as f64;
            let mean1 = sum1 as f64 / count1 as f64;
            let diff = mean0 - mean1;
            let var = count0 as f64 * count1 as f64 * diff * diff;
            if var > best_var {
                best_var = var;
                best_t = t;
            }
        }
        best_t
    }

    #[test]
    fn otsu_separates_bimodal_histogram() {
        let mut hist = [0u64; 256];
        hist[10] = 100;
        hist[200] = 100;
        let t = otsu_threshold(&hist);
        assert!(t > 10 && t <= 200, "threshold {t} does not separate modes");
        assert_eq!(t, otsu_oracle(&hist));
    }

    #[test]
    fn otsu_ties_break_low() {
        // two spikes at the extremes: every cut between them has the same
        // between-class variance, so the scan must settle on the lowest
        let mut hist = [0u64; 256];
        hist[0] = 50;
        hist[255] = 50;
        assert_eq!(otsu_threshold(&hist), 1);
        assert_eq!(otsu_oracle(&hist), 1);
    }

    #[test]
    fn otsu_matches_exhaustive_oracle_on_random_histograms() {
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        for _ in 0..20 {
            let mut hist = [0u64; 256];
            for slot in hist.iter_mut() {
                if rng.random::<f64>() < 0.3 {
                    *slot = rng.random_range(0..500);
                }
            }
            assert_eq!(otsu_threshold(&hist), otsu_oracle(&hist));
        }
    }

    #[test]
    fn binarize_all_zero_map_is_all_false() {
        let img = GrayImage::new(6, 3);
        let gd = gradient_difference(&img, 3).unwrap();
        let mask = binarize_gd(&gd);
        assert_eq!(mask.count_true(), 0);
    }

    #[test]
    fn binarize_single_bin_map_is_all_false() {
        // constant positive map: every pixel lands in bin 255
        let img = row_image(&[0.0, 2.0, 0.0, 2.0, 0.0, 2.0]);
        let gd = gradient_difference(&img, 11);
        assert!(gd.is_err()); // window wider than image
        let gd = gradient_difference(&img, 5).unwrap();
        // windows of width 5 all contain both 0 and 2, so gd is constant 2
        assert!(gd.data().iter().all(|&v| v == 2.0));
        let mask = binarize_gd(&gd);
        assert_eq!(mask.count_true(), 0);
    }

    #[test]
    fn binarize_separates_bimodal_map() {
        let mut img = GrayImage::new(8, 4);
        for y in 0..4 {
            for x in 4..8 {
                img.set(x, y, 10.0);
            }
        }
        let gd = GradientDifferenceMap { inner: img };
        let mask = binarize_gd(&gd);
        for y in 0..4 {
            for x in 0..8 {
                assert_eq!(mask.get(x, y), x >= 4, "pixel ({x}, {y})");
            }
        }
    }
}
