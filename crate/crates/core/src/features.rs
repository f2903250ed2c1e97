//! Per-image descriptors in four modes and their one-line text records.
//!
//! * `lbp` — one L1-normalized LBP histogram (the 3x3 operator when P=8,
//!   R=1; the circular operator otherwise);
//! * `gmlbp` — the nine threshold-position histograms, each L1-normalized,
//!   concatenated in raster order of the threshold position;
//! * `hu` — the seven Hu invariants, log-compressed;
//! * `combined` — the gmlbp vector followed by the hu vector of the shared
//!   interior region, the hu segment scaled by a weight.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::image_io::GrayImage;
use crate::lbp::{gmlbp_histograms, lbp_histogram, LbpMode, LbpParams};
use crate::moments::hu_moments;

/// Magnitude boost applied before log-compressing Hu values, chosen so the
/// typical 1e-7..1e-3 range maps onto roughly 0..4.
const HU_LOG_SCALE: f64 = 1e7;

/// Descriptor family a feature vector belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureMode {
    Lbp,
    Gmlbp,
    Hu,
    Combined,
}

impl FeatureMode {
    /// All modes, in a fixed order convenient for exhaustive tests.
    pub fn all() -> [FeatureMode; 4] {
        [
            FeatureMode::Lbp,
            FeatureMode::Gmlbp,
            FeatureMode::Hu,
            FeatureMode::Combined,
        ]
    }

    fn dim_is_valid(self, dim: usize) -> bool {
        match self {
            // one histogram of 2^P bins for any supported neighbor count
            FeatureMode::Lbp => dim.is_power_of_two() && (16..=65536).contains(&dim),
            FeatureMode::Gmlbp => dim == 9 * 256,
            FeatureMode::Hu => dim == 7,
            FeatureMode::Combined => dim == 9 * 256 + 7,
        }
    }
}

impl fmt::Display for FeatureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            FeatureMode::Lbp => "lbp",
            FeatureMode::Gmlbp => "gmlbp",
            FeatureMode::Hu => "hu",
            FeatureMode::Combined => "combined",
        };
        f.write_str(name)
    }
}

impl FromStr for FeatureMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lbp" => Ok(FeatureMode::Lbp),
            "gmlbp" => Ok(FeatureMode::Gmlbp),
            "hu" => Ok(FeatureMode::Hu),
            "combined" => Ok(FeatureMode::Combined),
            other => Err(Error::UnknownMode(other.to_string())),
        }
    }
}

/// A finite real vector tagged with its mode; the length always matches a
/// dimensionality the mode can produce.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    mode: FeatureMode,
    values: Vec<f64>,
}

impl FeatureVector {
    /// Validates finiteness and the mode/length pairing.
    pub fn new(mode: FeatureMode, values: Vec<f64>) -> Result<Self> {
        if !mode.dim_is_valid(values.len()) {
            return Err(Error::InvalidDimension {
                mode,
                dim: values.len(),
            });
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue(bad));
        }
        Ok(Self { mode, values })
    }

    pub fn mode(&self) -> FeatureMode {
        self.mode
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// One-line text form: `<mode> <dim> <v1> ... <vdim>`, floats as
    /// shortest round-trip decimals.
    pub fn to_record(&self) -> String {
        let mut out = format!("{} {}", self.mode, self.values.len());
        for v in &self.values {
            out.push(' ');
            out.push_str(&v.to_string());
        }
        out
    }

    /// Parses the record format back; exact inverse of [`Self::to_record`].
    pub fn from_record(line: &str) -> Result<Self> {
        let mut tokens = line.split_whitespace();
        let mode: FeatureMode = tokens
            .next()
            .ok_or_else(|| Error::MalformedRecord("empty record".into()))?
            .parse()?;
        let dim_token = tokens
            .next()
            .ok_or_else(|| Error::MalformedRecord("missing dimension field".into()))?;
        let dim: usize = dim_token
            .parse()
            .map_err(|_| Error::MalformedRecord(format!("bad dimension `{dim_token}`")))?;
        let values = tokens
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::MalformedRecord(format!("bad value `{t}`")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: values.len(),
            });
        }
        Self::new(mode, values)
    }
}

/// Sign-preserving dynamic-range compression for Hu values:
/// `h -> sign(h) * log10(1 + |h| * 1e7)`. Zero maps to exactly zero.
fn compress_hu(h: f64) -> f64 {
    if h == 0.0 {
        0.0
    } else {
        h.signum() * (1.0 + h.abs() * HU_LOG_SCALE).log10()
    }
}

fn require_unit_radius_8(params: &LbpParams) -> Result<()> {
    if params.neighbors() != 8 || params.radius() != 1.0 {
        return Err(Error::InvalidLbpParams(format!(
            "nine-pattern histograms are defined on the 3x3 window only \
             (neighbors=8, radius=1), got neighbors={}, radius={}",
            params.neighbors(),
            params.radius()
        )));
    }
    Ok(())
}

fn lbp_vector(image: &GrayImage, params: &LbpParams) -> Result<Vec<f64>> {
    let mode = if params.neighbors() == 8 && params.radius() == 1.0 {
        LbpMode::Classic3x3
    } else {
        LbpMode::Circular(*params)
    };
    let hist = lbp_histogram(image, mode)?.into_normalized();
    Ok(hist.bins().to_vec())
}

fn gmlbp_vector(image: &GrayImage, params: &LbpParams) -> Result<Vec<f64>> {
    require_unit_radius_8(params)?;
    let mut values = Vec::with_capacity(9 * 256);
    for hist in gmlbp_histograms(image)? {
        values.extend_from_slice(hist.into_normalized().bins());
    }
    Ok(values)
}

fn hu_vector(image: &GrayImage) -> Result<Vec<f64>> {
    Ok(hu_moments(image)?.values().iter().copied().map(compress_hu).collect())
}

/// Extracts the descriptor for one image.
///
/// `params` selects the LBP neighborhood for `lbp` mode and must be the
/// 3x3 configuration (8, 1) for `gmlbp`/`combined`; `hu_weight` scales the
/// Hu segment of `combined` and is ignored by the other modes.
pub fn extract(
    image: &GrayImage,
    mode: FeatureMode,
    params: &LbpParams,
    hu_weight: f64,
) -> Result<FeatureVector> {
    let values = match mode {
        FeatureMode::Lbp => lbp_vector(image, params)?,
        FeatureMode::Gmlbp => gmlbp_vector(image, params)?,
        FeatureMode::Hu => hu_vector(image)?,
        FeatureMode::Combined => {
            // both segments describe the same region: the histograms scan
            // interior centers, so the moments see the interior crop
            let mut values = gmlbp_vector(image, params)?;
            let hu = hu_vector(&image.interior(1)?)?;
            values.extend(hu.into_iter().map(|h| hu_weight * h));
            values
        }
    };
    FeatureVector::new(mode, values)
}
