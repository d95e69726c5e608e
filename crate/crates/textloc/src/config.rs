//! Pipeline configuration: defaults, validation, TOML (de)serialization,
//! and the content hash stamped into box-list output files.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Minimum component area: a fixed pixel count, or `auto` to scale with the
/// image (`max(20, 0.0005 * width * height)` pixels, rounded).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinArea {
    Auto,
    Fixed(usize),
}

impl Serialize for MinArea {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MinArea::Auto => serializer.serialize_str("auto"),
            MinArea::Fixed(n) => serializer.serialize_u64(*n as u64),
        }
    }
}

impl<'de> Deserialize<'de> for MinArea {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct MinAreaVisitor;

        impl Visitor<'_> for MinAreaVisitor {
            type Value = MinArea;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("\"auto\" or a non-negative pixel count")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<MinArea, E> {
                if v == "auto" {
                    Ok(MinArea::Auto)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<MinArea, E> {
                Ok(MinArea::Fixed(v as usize))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<MinArea, E> {
                if v < 0 {
                    Err(E::invalid_value(de::Unexpected::Signed(v), &self))
                } else {
                    Ok(MinArea::Fixed(v as usize))
                }
            }
        }

        deserializer.deserialize_any(MinAreaVisitor)
    }
}

/// Every knob of the detection pipeline plus the evaluation thresholds.
/// Serializes to a flat TOML table; missing keys fall back to defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Daubechies order (1 = Haar .. 10).
    pub wavelet_order: usize,
    /// Wavelet decomposition levels.
    pub levels: usize,
    /// Fraction of detail coefficients kept per level, in (0, 1].
    pub keep_ratio: f64,
    /// Odd width of the 1xn gradient-difference window.
    pub window_width: usize,
    /// Odd width of the dilation structuring element.
    pub se_width: usize,
    /// Odd height of the dilation structuring element.
    pub se_height: usize,
    /// Minimum component area in pixels, or auto.
    pub min_area: MinArea,
    /// Fraction of the smaller box that must be covered for a true detection.
    pub coverage_tau: f64,
    /// Fraction of the ground-truth box below which a detection misses data.
    pub miss_tau: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            wavelet_order: 4,
            levels: 2,
            keep_ratio: 0.2,
            window_width: 11,
            se_width: 15,
            se_height: 5,
            min_area: MinArea::Auto,
            coverage_tau: 0.5,
            miss_tau: 0.8,
        }
    }
}

impl PipelineConfig {
    /// Check every field against the range its consuming stage demands.
    /// Image-dependent constraints (window vs. width, levels vs. size) are
    /// checked by the stages themselves.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(1..=10).contains(&self.wavelet_order) {
            return bad(format!(
                "wavelet_order must be in 1..=10, got {}",
                self.wavelet_order
            ));
        }
        if self.levels == 0 {
            return bad("levels must be >= 1".into());
        }
        if !(self.keep_ratio > 0.0 && self.keep_ratio <= 1.0) {
            return bad(format!(
                "keep_ratio must be in (0, 1], got {}",
                self.keep_ratio
            ));
        }
        if self.window_width == 0 || self.window_width % 2 == 0 {
            return bad(format!(
                "window_width must be odd and >= 1, got {}",
                self.window_width
            ));
        }
        for (name, v) in [("se_width", self.se_width), ("se_height", self.se_height)] {
            if v == 0 || v % 2 == 0 {
                return bad(format!("{name} must be odd and >= 1, got {v}"));
            }
        }
        for (name, v) in [
            ("coverage_tau", self.coverage_tau),
            ("miss_tau", self.miss_tau),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return bad(format!("{name} must be in (0, 1], got {v}"));
            }
        }
        Ok(())
    }

    /// Concrete minimum area for an image of the given size.
    pub fn resolve_min_area(&self, width: usize, height: usize) -> usize {
        match self.min_area {
            MinArea::Fixed(n) => n,
            MinArea::Auto => {
                let scaled = (0.0005 * (width * height) as f64).round() as usize;
                scaled.max(20)
            }
        }
    }

    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self> {
        let cfg: PipelineConfig = toml::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::from_toml_str(&text, path)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serialization cannot fail")
    }

    /// FNV-1a hash of the canonical TOML form, as 16 hex digits. Stamped
    /// into box-list files so results can be traced to the exact settings.
    pub fn hash(&self) -> String {
        const OFFSET: u64 = 0xcbf29ce484222325;
        const PRIME: u64 = 0x100000001b3;
        let mut h = OFFSET;
        for byte in self.to_toml_string().bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(PRIME);
        }
        format!("{h:016x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_pinned() {
        let cfg = PipelineConfig::default();
        assert_eq!(cfg.wavelet_order, 4);
        assert_eq!(cfg.levels, 2);
        assert_eq!(cfg.keep_ratio, 0.2);
        assert_eq!(cfg.window_width, 11);
        assert_eq!((cfg.se_width, cfg.se_height), (15, 5));
        assert_eq!(cfg.min_area, MinArea::Auto);
        assert_eq!((cfg.coverage_tau, cfg.miss_tau), (0.5, 0.8));
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn toml_round_trip_is_lossless() {
        let mut cfg = PipelineConfig::default();
        let text = cfg.to_toml_string();
        let back = PipelineConfig::from_toml_str(&text, Path::new("mem")).unwrap();
        assert_eq!(cfg, back);

        cfg.min_area = MinArea::Fixed(321);
        cfg.wavelet_order = 2;
        cfg.keep_ratio = 0.75;
        let text = cfg.to_toml_string();
        let back = PipelineConfig::from_toml_str(&text, Path::new("mem")).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn partial_file_fills_defaults() {
        let cfg =
            PipelineConfig::from_toml_str("window_width = 7\nmin_area = 99\n", Path::new("mem"))
                .unwrap();
        assert_eq!(cfg.window_width, 7);
        assert_eq!(cfg.min_area, MinArea::Fixed(99));
        assert_eq!(cfg.wavelet_order, 4);
        assert_eq!(cfg.levels, 2);
    }

    #[test]
    fn min_area_accepts_auto_and_integers_only() {
        assert!(PipelineConfig::from_toml_str("min_area = \"auto\"", Path::new("mem")).is_ok());
        assert!(PipelineConfig::from_toml_str("min_area = 42", Path::new("mem")).is_ok());
        for bad in ["min_area = \"big\"", "min_area = -3", "min_area = 1.5"] {
            assert!(
                matches!(
                    PipelineConfig::from_toml_str(bad, Path::new("mem")),
                    Err(Error::Parse { .. })
                ),
                "{bad} should fail"
            );
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(
            PipelineConfig::from_toml_str("wavelet_orderr = 3", Path::new("mem")),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn validation_catches_bad_fields() {
        let cases: Vec<Box<dyn Fn(&mut PipelineConfig)>> = vec![
            Box::new(|c| c.wavelet_order = 0),
            Box::new(|c| c.wavelet_order = 11),
            Box::new(|c| c.levels = 0),
            Box::new(|c| c.keep_ratio = 0.0),
            Box::new(|c| c.keep_ratio = 1.2),
            Box::new(|c| c.window_width = 8),
            Box::new(|c| c.se_width = 2),
            Box::new(|c| c.se_height = 0),
            Box::new(|c| c.coverage_tau = 0.0),
            Box::new(|c| c.miss_tau = 1.01),
        ];
        for mutate in cases {
            let mut cfg = PipelineConfig::default();
            mutate(&mut cfg);
            assert!(cfg.validate().is_err(), "mutation should invalidate {cfg:?}");
        }
    }

    #[test]
    fn auto_min_area_scales_with_image() {
        let cfg = PipelineConfig::default();
        assert_eq!(cfg.resolve_min_area(64, 64), 20); // floor dominates
        assert_eq!(cfg.resolve_min_area(640, 480), 154); // 0.0005 * 307200 = 153.6
        let fixed = PipelineConfig {
            min_area: MinArea::Fixed(7),
            ..PipelineConfig::default()
        };
        assert_eq!(fixed.resolve_min_area(640, 480), 7);
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let cfg = PipelineConfig::default();
        assert_eq!(cfg.hash(), cfg.hash());
        assert_eq!(cfg.hash().len(), 16);
        let other = PipelineConfig {
            window_width: 9,
            ..PipelineConfig::default()
        };
        assert_ne!(cfg.hash(), other.hash());
    }
}
