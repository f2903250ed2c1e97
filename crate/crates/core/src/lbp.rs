//! Local binary patterns: the classic 3x3 operator, circular neighborhoods,
//! rotation-invariant codes, the nine-pattern descriptor and their histograms.
//!
//! Three bit orders appear here and are kept strictly separate:
//!
//! * **classic** — the 3x3 weight mask (8/4/2 over the top row, 16/·/1 in the
//!   middle, 32/64/128 along the bottom) used by [`lbp_code_3x3`];
//! * **angular** — bit `i` belongs to the sample at angle `2*pi*i/P`, used by
//!   [`lbp_code_circular`];
//! * **raster** — bit positions follow raster scan order skipping the
//!   threshold pixel, used by [`gmlbp_patterns`].
//!
//! [`classic_to_angular`] and [`classic_to_raster`] are the fixed bit
//! permutations connecting the conventions.

use crate::error::{Error, Result};
use crate::image_io::GrayImage;

/// Half of a per-unit snap: sample coordinates this close to a grid point are
/// treated as exact so axis-aligned samples never pick up interpolation fuzz.
const GRID_SNAP: f64 = 1e-9;

/// Neighbor count and radius for circular neighborhoods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LbpParams {
    neighbors: u32,
    radius: f64,
}

impl LbpParams {
    /// Validates `4 <= neighbors <= 16` and `radius >= 1`.
    pub fn new(neighbors: u32, radius: f64) -> Result<Self> {
        if !(4..=16).contains(&neighbors) {
            return Err(Error::InvalidLbpParams(format!(
                "neighbor count {neighbors} outside 4..=16"
            )));
        }
        if !radius.is_finite() || radius < 1.0 {
            return Err(Error::InvalidLbpParams(format!(
                "radius {radius} must be finite and >= 1"
            )));
        }
        Ok(Self { neighbors, radius })
    }

    pub fn neighbors(&self) -> u32 {
        self.neighbors
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Histogram size for these parameters.
    pub fn bins(&self) -> usize {
        1 << self.neighbors
    }

    /// Border width a center must keep from the image edge.
    pub fn margin(&self) -> usize {
        self.radius.ceil() as usize
    }

    /// Sample offsets in angular order.
    ///
    /// The (P=8, R=1) configuration samples the eight surrounding pixel
    /// centers, so it agrees with the 3x3 operator; every other
    /// configuration samples the exact circle, snapping coordinates that sit
    /// within 1e-9 of a grid point.
    fn offsets(&self) -> Vec<(f64, f64)> {
        if self.neighbors == 8 && self.radius == 1.0 {
            return vec![
                (1.0, 0.0),
                (1.0, 1.0),
                (0.0, 1.0),
                (-1.0, 1.0),
                (-1.0, 0.0),
                (-1.0, -1.0),
                (0.0, -1.0),
                (1.0, -1.0),
            ];
        }
        (0..self.neighbors)
            .map(|i| {
                let angle = 2.0 * std::f64::consts::PI * f64::from(i) / f64::from(self.neighbors);
                (
                    snap(self.radius * angle.cos()),
                    snap(self.radius * angle.sin()),
                )
            })
            .collect()
    }
}

fn snap(v: f64) -> f64 {
    let rounded = v.round();
    if (v - rounded).abs() < GRID_SNAP {
        rounded
    } else {
        v
    }
}

/// A single LBP code; always below `2^P` for its neighbor count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LbpCode(u32);

impl LbpCode {
    pub fn new(value: u32) -> Self {
        Self(value)
    }

    pub fn value(self) -> u32 {
        self.0
    }
}

/// Accumulated code counts; either raw counts or an L1-normalized distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct LbpHistogram {
    bins: Vec<f64>,
    normalized: bool,
}

impl LbpHistogram {
    fn zeroed(bins: usize) -> Self {
        Self {
            bins: vec![0.0; bins],
            normalized: false,
        }
    }

    #[inline]
    fn record(&mut self, code: LbpCode) {
        self.bins[code.value() as usize] += 1.0;
    }

    pub fn bins(&self) -> &[f64] {
        &self.bins
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Sum over all bins: the scanned pixel count when unnormalized.
    pub fn total(&self) -> f64 {
        self.bins.iter().sum()
    }

    /// L1-normalizes the histogram so its bins sum to 1.
    pub fn into_normalized(mut self) -> Self {
        if !self.normalized {
            let total = self.total();
            assert!(total > 0.0, "cannot normalize an empty histogram");
            for b in &mut self.bins {
                *b /= total;
            }
            self.normalized = true;
        }
        self
    }
}

/// Which operator a histogram scan applies at every interior pixel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LbpMode {
    /// The 3x3 operator with the classic weight mask.
    Classic3x3,
    /// Circular neighborhood, angular bit order.
    Circular(LbpParams),
    /// Circular neighborhood reduced to its minimal bit rotation.
    RotationInvariant(LbpParams),
}

impl LbpMode {
    fn margin(&self) -> usize {
        match self {
            LbpMode::Classic3x3 => 1,
            LbpMode::Circular(p) | LbpMode::RotationInvariant(p) => p.margin(),
        }
    }

    fn bins(&self) -> usize {
        match self {
            LbpMode::Classic3x3 => 256,
            LbpMode::Circular(p) | LbpMode::RotationInvariant(p) => p.bins(),
        }
    }
}

/// The 3x3 operator: each neighbor scores 1 when it is >= the center, and the
/// set bits are weighted 8/4/2, 16/·/1, 32/64/128 across the window.
pub fn lbp_code_3x3(window: &[[u8; 3]; 3]) -> LbpCode {
    let center = window[1][1];
    let mut code = 0u32;
    if window[1][2] >= center {
        code |= 1;
    }
    if window[0][2] >= center {
        code |= 2;
    }
    if window[0][1] >= center {
        code |= 4;
    }
    if window[0][0] >= center {
        code |= 8;
    }
    if window[1][0] >= center {
        code |= 16;
    }
    if window[2][0] >= center {
        code |= 32;
    }
    if window[2][1] >= center {
        code |= 64;
    }
    if window[2][2] >= center {
        code |= 128;
    }
    LbpCode(code)
}

/// Circular-neighborhood code at `(x, y)`: sample `i` sits at angle
/// `2*pi*i/P` on the radius-R circle (off-grid samples bilinearly
/// interpolated) and contributes `2^i` when it is >= the center.
pub fn lbp_code_circular(
    image: &GrayImage,
    x: usize,
    y: usize,
    params: &LbpParams,
) -> Result<LbpCode> {
    let margin = params.margin();
    if x < margin || y < margin || x + margin >= image.width() || y + margin >= image.height() {
        return Err(Error::CenterOutOfBounds {
            x,
            y,
            radius: params.radius(),
        });
    }
    Ok(circular_code_at(image, x, y, &params.offsets()))
}

#[inline]
fn circular_code_at(image: &GrayImage, x: usize, y: usize, offsets: &[(f64, f64)]) -> LbpCode {
    let center = f64::from(image.get(x, y));
    let mut code = 0u32;
    for (i, &(dx, dy)) in offsets.iter().enumerate() {
        if sample_bilinear(image, x as f64 + dx, y as f64 + dy) >= center {
            code |= 1 << i;
        }
    }
    LbpCode(code)
}

fn sample_bilinear(image: &GrayImage, fx: f64, fy: f64) -> f64 {
    let x0 = fx.floor();
    let y0 = fy.floor();
    let wx = fx - x0;
    let wy = fy - y0;
    let xi = x0 as usize;
    let yi = y0 as usize;
    // neighbors with weight 0 are clamped so the reads stay in bounds
    let x1 = (xi + 1).min(image.width() - 1);
    let y1 = (yi + 1).min(image.height() - 1);
    let p00 = f64::from(image.get(xi, yi));
    let p10 = f64::from(image.get(x1, yi));
    let p01 = f64::from(image.get(xi, y1));
    let p11 = f64::from(image.get(x1, y1));
    // nested lerps, a + t*(b-a) form: equal corner values come back exactly,
    // so flat regions compare as equal to their center
    let lerp = |a: f64, b: f64, t: f64| a + t * (b - a);
    lerp(lerp(p00, p10, wx), lerp(p01, p11, wx), wy)
}

/// Minimum value over all `neighbors` circular bit rotations of `code`.
pub fn rotation_invariant(code: LbpCode, neighbors: u32) -> LbpCode {
    assert!(
        (1..=16).contains(&neighbors),
        "neighbor count {neighbors} outside 1..=16"
    );
    let mask = (1u32 << neighbors) - 1;
    let c = code.value();
    assert!(c <= mask, "code {c} does not fit in {neighbors} bits");
    let mut best = c;
    for k in 1..neighbors {
        let rotated = ((c >> k) | (c << (neighbors - k))) & mask;
        best = best.min(rotated);
    }
    LbpCode(best)
}

/// Nine codes from one 3x3 window: window pixel `k` (raster order) acts as
/// the threshold and the remaining eight pixels, raster order skipping `k`,
/// contribute bits `2^0..2^7` when they are >= the threshold.
///
/// Pattern 4 carries the same bit multiset as [`lbp_code_3x3`]; the orders
/// are linked by [`classic_to_raster`].
pub fn gmlbp_patterns(window: &[[u8; 3]; 3]) -> [LbpCode; 9] {
    let flat = [
        window[0][0],
        window[0][1],
        window[0][2],
        window[1][0],
        window[1][1],
        window[1][2],
        window[2][0],
        window[2][1],
        window[2][2],
    ];
    std::array::from_fn(|k| {
        let threshold = flat[k];
        let mut code = 0u32;
        let mut bit = 0;
        for (j, &value) in flat.iter().enumerate() {
            if j == k {
                continue;
            }
            if value >= threshold {
                code |= 1 << bit;
            }
            bit += 1;
        }
        LbpCode(code)
    })
}

/// Scans every interior pixel of `image` with the given operator and
/// accumulates the codes. Border pixels whose neighborhood would leave the
/// image are skipped, never padded.
pub fn lbp_histogram(image: &GrayImage, mode: LbpMode) -> Result<LbpHistogram> {
    let margin = mode.margin();
    check_interior(image, margin)?;
    let mut hist = LbpHistogram::zeroed(mode.bins());
    match mode {
        LbpMode::Classic3x3 => {
            for y in margin..image.height() - margin {
                let above = image.row(y - 1);
                let row = image.row(y);
                let below = image.row(y + 1);
                for x in margin..image.width() - margin {
                    let window = [
                        [above[x - 1], above[x], above[x + 1]],
                        [row[x - 1], row[x], row[x + 1]],
                        [below[x - 1], below[x], below[x + 1]],
                    ];
                    hist.record(lbp_code_3x3(&window));
                }
            }
        }
        LbpMode::Circular(params) => {
            let offsets = params.offsets();
            for y in margin..image.height() - margin {
                for x in margin..image.width() - margin {
                    hist.record(circular_code_at(image, x, y, &offsets));
                }
            }
        }
        LbpMode::RotationInvariant(params) => {
            let offsets = params.offsets();
            for y in margin..image.height() - margin {
                for x in margin..image.width() - margin {
                    let code = circular_code_at(image, x, y, &offsets);
                    hist.record(rotation_invariant(code, params.neighbors()));
                }
            }
        }
    }
    Ok(hist)
}

/// Nine histograms, one per threshold position of [`gmlbp_patterns`],
/// accumulated over every interior pixel. All nine share the same total.
pub fn gmlbp_histograms(image: &GrayImage) -> Result<[LbpHistogram; 9]> {
    check_interior(image, 1)?;
    let mut hists: [LbpHistogram; 9] = std::array::from_fn(|_| LbpHistogram::zeroed(256));
    for y in 1..image.height() - 1 {
        for x in 1..image.width() - 1 {
            let codes = gmlbp_patterns(&image.window3x3(x, y));
            for (hist, code) in hists.iter_mut().zip(codes) {
                hist.record(code);
            }
        }
    }
    Ok(hists)
}

fn check_interior(image: &GrayImage, margin: usize) -> Result<()> {
    if image.width() <= 2 * margin || image.height() <= 2 * margin {
        return Err(Error::ImageTooSmall {
            width: image.width(),
            height: image.height(),
            required: format!("at least {0}x{0} for margin {margin}", 2 * margin + 1),
        });
    }
    Ok(())
}

// Bit permutations between the three conventions. `map[i]` is the target bit
// for source bit `i`.
const CLASSIC_TO_ANGULAR: [u32; 8] = [0, 7, 6, 5, 4, 3, 2, 1];
const CLASSIC_TO_RASTER: [u32; 8] = [4, 2, 1, 0, 3, 5, 6, 7];

fn remap_bits(code: LbpCode, map: &[u32; 8]) -> LbpCode {
    let c = code.value();
    debug_assert!(c < 256);
    let mut out = 0u32;
    for (i, &target) in map.iter().enumerate() {
        if c & (1 << i) != 0 {
            out |= 1 << target;
        }
    }
    LbpCode(out)
}

/// Re-orders the bits of a classic 3x3 code into the angular order produced
/// by `lbp_code_circular` with P=8, R=1.
pub fn classic_to_angular(code: LbpCode) -> LbpCode {
    remap_bits(code, &CLASSIC_TO_ANGULAR)
}

/// Re-orders the bits of a classic 3x3 code into the raster order produced
/// by `gmlbp_patterns` at threshold position 4.
pub fn classic_to_raster(code: LbpCode) -> LbpCode {
    remap_bits(code, &CLASSIC_TO_RASTER)
}
