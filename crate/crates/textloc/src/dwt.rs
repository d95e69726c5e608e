//! Multilevel 2-D discrete wavelet analysis, detail-coefficient hard
//! thresholding, and synthesis back to a reconstructed image.
//!
//! The transform is the separable orthogonal Daubechies filter bank applied
//! rows-then-columns with factor-2 downsampling. Signals are periodized (odd
//! lengths are zero-padded to even before wrapping), which keeps every level
//! an exact isometry: subbands are `ceil(n/2)` long, coefficient energy equals
//! signal energy, and synthesis inverts analysis to machine precision.

use crate::error::{Error, Result};
use crate::image::GrayImage;

// Lowpass (scaling) coefficients for db1..db10, extremal-phase ordering,
// normalized so the taps sum to sqrt(2). Computed by spectral factorization
// of the Daubechies polynomial at 60-digit precision and rounded to f64.
const DB1: [f64; 2] = [0.7071067811865476, 0.7071067811865476];
const DB2: [f64; 4] = [
    0.48296291314453416,
    0.8365163037378079,
    0.2241438680420134,
    -0.12940952255126037,
];
const DB3: [f64; 6] = [
    0.33267055295008263,
    0.8068915093110925,
    0.45987750211849154,
    -0.13501102001025458,
    -0.08544127388202666,
    0.03522629188570953,
];
const DB4: [f64; 8] = [
    0.2303778133088965,
    0.7148465705529157,
    0.6308807679298589,
    -0.027983769416859854,
    -0.18703481171909309,
    0.030841381835560764,
    0.0328830116668852,
    -0.010597401785069032,
];
const DB5: [f64; 10] = [
    0.16010239797419293,
    0.6038292697971896,
    0.7243085284377729,
    0.13842814590132074,
    -0.24229488706638203,
    -0.032244869584638375,
    0.07757149384004572,
    -0.006241490212798274,
    -0.012580751999081999,
    0.0033357252854737712,
];
const DB6: [f64; 12] = [
    0.11154074335010947,
    0.49462389039845306,
    0.7511339080210954,
    0.31525035170919763,
    -0.22626469396543983,
    -0.12976686756726194,
    0.09750160558732304,
    0.027522865530305727,
    -0.03158203931748603,
    0.0005538422011614961,
    0.004777257510945511,
    -0.0010773010853084796,
];
const DB7: [f64; 14] = [
    0.07785205408500918,
    0.3965393194819173,
    0.7291320908462351,
    0.4697822874051931,
    -0.14390600392856498,
    -0.22403618499387498,
    0.07130921926683026,
    0.08061260915108308,
    -0.03802993693501441,
    -0.01657454163066688,
    0.01255099855609984,
    0.0004295779729213665,
    -0.0018016407040474908,
    0.00035371379997452024,
];
const DB8: [f64; 16] = [
    0.05441584224310401,
    0.31287159091429995,
    0.6756307362972898,
    0.5853546836542067,
    -0.015829105256349306,
    -0.2840155429615469,
    0.0004724845739132828,
    0.12874742662047847,
    -0.017369301001807547,
    -0.044088253930794755,
    0.013981027917398282,
    0.008746094047405777,
    -0.004870352993451574,
    -0.00039174037337694705,
    0.0006754494064505693,
    -0.00011747678412476953,
];
const DB9: [f64; 18] = [
    0.038077947363878345,
    0.24383467461259034,
    0.6048231236901112,
    0.6572880780513005,
    0.13319738582500756,
    -0.2932737832791749,
    -0.09684078322297646,
    0.14854074933810638,
    0.03072568147933338,
    -0.06763282906132997,
    0.00025094711483145197,
    0.022361662123679096,
    -0.004723204757751397,
    -0.00428150368246343,
    0.0018476468830562265,
    0.00023038576352319597,
    -0.0002519631889427101,
    3.93473203162716e-5,
];
const DB10: [f64; 20] = [
    0.026670057900555554,
    0.1881768000776915,
    0.5272011889317256,
    0.6884590394536035,
    0.2811723436605775,
    -0.24984642432731538,
    -0.19594627437737705,
    0.12736934033579325,
    0.09305736460357235,
    -0.07139414716639708,
    -0.029457536821875813,
    0.033212674059341,
    0.0036065535669561697,
    -0.010733175483330575,
    0.001395351747052901,
    0.001992405295185056,
    -0.0006858566949597116,
    -0.00011646685512928545,
    9.358867032006959e-5,
    -1.3264202894521244e-5,
];

/// Highest supported Daubechies order.
pub const MAX_ORDER: usize = 10;

fn lowpass_taps(order: usize) -> Option<&'static [f64]> {
    Some(match order {
        1 => &DB1,
        2 => &DB2,
        3 => &DB3,
        4 => &DB4,
        5 => &DB5,
        6 => &DB6,
        7 => &DB7,
        8 => &DB8,
        9 => &DB9,
        10 => &DB10,
        _ => return None,
    })
}

/// Orthogonal analysis/synthesis filter pair for a Daubechies wavelet.
///
/// All four filters have `2 * order` taps. The highpass filters are the
/// alternating flip of the lowpass pair, so the bank satisfies the
/// quadrature-mirror relation and even-shift orthogonality exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterBank {
    order: usize,
    lowpass_analysis: Vec<f64>,
    highpass_analysis: Vec<f64>,
    lowpass_synthesis: Vec<f64>,
    highpass_synthesis: Vec<f64>,
}

impl FilterBank {
    /// Build the Daubechies bank of the given order (1 = Haar, up to 10).
    pub fn daubechies(order: usize) -> Result<Self> {
        let lo = lowpass_taps(order).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "wavelet order must be in 1..={MAX_ORDER}, got {order}"
            ))
        })?;
        let taps = lo.len();
        let hi: Vec<f64> = (0..taps)
            .map(|i| {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                sign * lo[taps - 1 - i]
            })
            .collect();
        let lowpass_synthesis: Vec<f64> = lo.iter().rev().copied().collect();
        let highpass_synthesis: Vec<f64> = hi.iter().rev().copied().collect();
        Ok(Self {
            order,
            lowpass_analysis: lo.to_vec(),
            highpass_analysis: hi,
            lowpass_synthesis,
            highpass_synthesis,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of taps in each filter (`2 * order`).
    pub fn taps(&self) -> usize {
        self.lowpass_analysis.len()
    }

    pub fn lowpass_analysis(&self) -> &[f64] {
        &self.lowpass_analysis
    }

    pub fn highpass_analysis(&self) -> &[f64] {
        &self.highpass_analysis
    }

    pub fn lowpass_synthesis(&self) -> &[f64] {
        &self.lowpass_synthesis
    }

    pub fn highpass_synthesis(&self) -> &[f64] {
        &self.highpass_synthesis
    }
}

/// Detail subbands of one decomposition level.
#[derive(Debug, Clone, PartialEq)]
pub struct DetailBands {
    /// High frequency along x, low along y.
    pub horizontal: GrayImage,
    /// Low frequency along x, high along y.
    pub vertical: GrayImage,
    /// High frequency along both axes.
    pub diagonal: GrayImage,
}

impl DetailBands {
    fn bands(&self) -> [&GrayImage; 3] {
        [&self.horizontal, &self.vertical, &self.diagonal]
    }

    fn bands_mut(&mut self) -> [&mut GrayImage; 3] {
        [
            &mut self.horizontal,
            &mut self.vertical,
            &mut self.diagonal,
        ]
    }
}

/// Multilevel wavelet decomposition: the coarsest approximation subband plus
/// per-level detail triples, finest level first.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletPyramid {
    /// Coarsest-level approximation subband.
    pub approx: GrayImage,
    /// Detail bands per level; `details[0]` is the finest level.
    pub details: Vec<DetailBands>,
}

impl WaveletPyramid {
    pub fn levels(&self) -> usize {
        self.details.len()
    }

    /// Sum of squared coefficients over the approximation and all details.
    pub fn energy(&self) -> f64 {
        self.approx.energy()
            + self
                .details
                .iter()
                .map(|d| d.bands().iter().map(|b| b.energy()).sum::<f64>())
                .sum::<f64>()
    }
}

/// Subband size after one analysis step.
pub fn subband_len(n: usize) -> usize {
    n.div_ceil(2)
}

/// Single-level analysis of a 1-D signal into approximation and detail halves.
///
/// Both outputs have `ceil(len / 2)` samples. Odd-length inputs are
/// zero-padded to even length before the periodized convolution, so the
/// transform stays an exact isometry.
pub fn dwt1d(signal: &[f64], bank: &FilterBank) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = signal.len();
    if n < 2 {
        return Err(Error::TooShort { len: n, min: 2 });
    }
    let m = n + (n & 1);
    let half = m / 2;
    let lo = &bank.lowpass_analysis;
    let hi = &bank.highpass_analysis;
    let taps = lo.len();
    let mut approx = vec![0.0; half];
    let mut detail = vec![0.0; half];
    let sample = |j: usize| -> f64 {
        let j = j % m;
        if j < n {
            signal[j]
        } else {
            0.0
        }
    };
    for k in 0..half {
        let mut a = 0.0;
        let mut d = 0.0;
        if 2 * k + taps <= n {
            // interior: no wrapping
            for i in 0..taps {
                let v = signal[2 * k + i];
                a += lo[i] * v;
                d += hi[i] * v;
            }
        } else {
            for i in 0..taps {
                let v = sample(2 * k + i);
                a += lo[i] * v;
                d += hi[i] * v;
            }
        }
        approx[k] = a;
        detail[k] = d;
    }
    Ok((approx, detail))
}

/// Single-level synthesis; inverts [`dwt1d`] exactly.
///
/// `target_len` must be `2 * len` or `2 * len - 1` (the latter trims the
/// zero-pad sample introduced for odd-length signals).
pub fn idwt1d(
    approx: &[f64],
    detail: &[f64],
    bank: &FilterBank,
    target_len: usize,
) -> Result<Vec<f64>> {
    if approx.len() != detail.len() {
        return Err(Error::ShapeMismatch(format!(
            "approx length {} != detail length {}",
            approx.len(),
            detail.len()
        )));
    }
    let half = approx.len();
    let m = 2 * half;
    if target_len != m && target_len + 1 != m {
        return Err(Error::ShapeMismatch(format!(
            "target length {target_len} incompatible with subband length {half}"
        )));
    }
    let lo = &bank.lowpass_synthesis;
    let hi = &bank.highpass_synthesis;
    let taps = lo.len();
    let mut out = vec![0.0; m];
    for k in 0..half {
        let a = approx[k];
        let d = detail[k];
        for i in 0..taps {
            let j = (2 * k + i) % m;
            // synthesis taps are the reversed analysis taps; indexing them
            // back-to-front makes this loop the exact transpose of dwt1d
            out[j] += a * lo[taps - 1 - i] + d * hi[taps - 1 - i];
        }
    }
    out.truncate(target_len);
    Ok(out)
}

fn dwt2d_level(img: &GrayImage, bank: &FilterBank) -> Result<(GrayImage, DetailBands)> {
    let (w, h) = (img.width(), img.height());
    let hw = subband_len(w);
    let hh = subband_len(h);

    // rows first: split into lowpass-x and highpass-x stacks
    let mut row_lo = GrayImage::new(hw, h);
    let mut row_hi = GrayImage::new(hw, h);
    for y in 0..h {
        let (a, d) = dwt1d(img.row(y), bank)?;
        row_lo.data_mut()[y * hw..(y + 1) * hw].copy_from_slice(&a);
        row_hi.data_mut()[y * hw..(y + 1) * hw].copy_from_slice(&d);
    }

    // then columns of each stack
    let split_cols = |src: &GrayImage| -> Result<(GrayImage, GrayImage)> {
        let mut lo_out = GrayImage::new(hw, hh);
        let mut hi_out = GrayImage::new(hw, hh);
        let mut col = vec![0.0; h];
        for x in 0..hw {
            for (y, slot) in col.iter_mut().enumerate() {
                *slot = src.get(x, y);
            }
            let (a, d) = dwt1d(&col, bank)?;
            for (y, v) in a.iter().enumerate() {
                lo_out.set(x, y, *v);
            }
            for (y, v) in d.iter().enumerate() {
                hi_out.set(x, y, *v);
            }
        }
        Ok((lo_out, hi_out))
    };

    let (approx, vertical) = split_cols(&row_lo)?;
    let (horizontal, diagonal) = split_cols(&row_hi)?;
    Ok((
        approx,
        DetailBands {
            horizontal,
            vertical,
            diagonal,
        },
    ))
}

fn idwt2d_level(
    approx: &GrayImage,
    details: &DetailBands,
    bank: &FilterBank,
    target_width: usize,
    target_height: usize,
) -> Result<GrayImage> {
    let hw = approx.width();
    let hh = approx.height();

    let merge_cols = |lo: &GrayImage, hi: &GrayImage| -> Result<GrayImage> {
        let mut out = GrayImage::new(hw, target_height);
        let mut col_lo = vec![0.0; hh];
        let mut col_hi = vec![0.0; hh];
        for x in 0..hw {
            for y in 0..hh {
                col_lo[y] = lo.get(x, y);
                col_hi[y] = hi.get(x, y);
            }
            let merged = idwt1d(&col_lo, &col_hi, bank, target_height)?;
            for (y, v) in merged.iter().enumerate() {
                out.set(x, y, *v);
            }
        }
        Ok(out)
    };

    let row_lo = merge_cols(approx, &details.vertical)?;
    let row_hi = merge_cols(&details.horizontal, &details.diagonal)?;

    let mut out = GrayImage::new(target_width, target_height);
    for y in 0..target_height {
        let merged = idwt1d(row_lo.row(y), row_hi.row(y), bank, target_width)?;
        out.data_mut()[y * target_width..(y + 1) * target_width].copy_from_slice(&merged);
    }
    Ok(out)
}

/// Dimension chain `[(w, h), (ceil(w/2), ceil(h/2)), ...]` for `levels` steps.
fn dim_chain(width: usize, height: usize, levels: usize) -> Vec<(usize, usize)> {
    let mut dims = Vec::with_capacity(levels + 1);
    dims.push((width, height));
    for _ in 0..levels {
        let (w, h) = *dims.last().unwrap();
        dims.push((subband_len(w), subband_len(h)));
    }
    dims
}

/// Multilevel separable decomposition (rows then columns per level).
pub fn decompose(img: &GrayImage, bank: &FilterBank, levels: usize) -> Result<WaveletPyramid> {
    if levels == 0 {
        return Err(Error::InvalidParameter(
            "decomposition levels must be >= 1".into(),
        ));
    }
    let min_dim = img.width().min(img.height());
    if levels >= usize::BITS as usize || min_dim < (1usize << levels) {
        return Err(Error::LevelOverflow {
            levels,
            width: img.width(),
            height: img.height(),
        });
    }
    let mut approx = img.clone();
    let mut details = Vec::with_capacity(levels);
    for _ in 0..levels {
        let (next, bands) = dwt2d_level(&approx, bank)?;
        details.push(bands);
        approx = next;
    }
    Ok(WaveletPyramid { approx, details })
}

/// Per-level hard thresholding of the detail coefficients.
///
/// For each level the three detail bands are pooled and the magnitude
/// quantile keeping the top `keep_ratio` fraction is selected; coefficients
/// strictly below that threshold are zeroed. The approximation subband is
/// never touched.
pub fn threshold_details(pyr: &WaveletPyramid, keep_ratio: f64) -> Result<WaveletPyramid> {
    if !(keep_ratio > 0.0 && keep_ratio <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "keep_ratio must be in (0, 1], got {keep_ratio}"
        )));
    }
    let mut out = pyr.clone();
    for level in &mut out.details {
        let mut mags: Vec<f64> = level
            .bands()
            .iter()
            .flat_map(|b| b.data().iter().map(|v| v.abs()))
            .collect();
        let count = mags.len();
        let keep = ((keep_ratio * count as f64).ceil() as usize).clamp(1, count);
        // k-th largest magnitude
        mags.select_nth_unstable_by(keep - 1, |a, b| b.partial_cmp(a).unwrap());
        let threshold = mags[keep - 1];
        for band in level.bands_mut() {
            for v in band.data_mut() {
                if v.abs() < threshold {
                    *v = 0.0;
                }
            }
        }
    }
    Ok(out)
}

/// Inverse separable transform level by level; output clamped to `[0, 1]`.
pub fn reconstruct(
    pyr: &WaveletPyramid,
    bank: &FilterBank,
    target_width: usize,
    target_height: usize,
) -> Result<GrayImage> {
    let levels = pyr.levels();
    if levels == 0 {
        return Err(Error::ShapeMismatch("pyramid has no detail levels".into()));
    }
    let dims = dim_chain(target_width, target_height, levels);
    if (pyr.approx.width(), pyr.approx.height()) != dims[levels] {
        return Err(Error::ShapeMismatch(format!(
            "approx subband is {}x{}, expected {}x{} for a {target_width}x{target_height} target",
            pyr.approx.width(),
            pyr.approx.height(),
            dims[levels].0,
            dims[levels].1
        )));
    }
    for (i, level) in pyr.details.iter().enumerate() {
        let expect = dims[i + 1];
        for band in level.bands() {
            if (band.width(), band.height()) != expect {
                return Err(Error::ShapeMismatch(format!(
                    "level {} detail band is {}x{}, expected {}x{}",
                    i + 1,
                    band.width(),
                    band.height(),
                    expect.0,
                    expect.1
                )));
            }
        }
    }
    let mut current = pyr.approx.clone();
    for i in (0..levels).rev() {
        let (tw, th) = dims[i];
        current = idwt2d_level(&current, &pyr.details[i], bank, tw, th)?;
    }
    current.clamp_unit();
    Ok(current)
}
