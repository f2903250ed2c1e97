//! Naive reference implementations, written straight from the operator
//! definitions with none of the library's shortcuts. The library must agree
//! with these on arbitrary inputs.

use cbir_core::image_io::GrayImage;

/// 3x3 code by walking the weight mask table cell by cell.
pub fn classic_code(window: &[[u8; 3]; 3]) -> u32 {
    const WEIGHTS: [[u32; 3]; 3] = [[8, 4, 2], [16, 0, 1], [32, 64, 128]];
    let center = window[1][1];
    let mut code = 0;
    for r in 0..3 {
        for c in 0..3 {
            if (r, c) != (1, 1) && window[r][c] >= center {
                code += WEIGHTS[r][c];
            }
        }
    }
    code
}

fn window_at(image: &GrayImage, x: usize, y: usize) -> [[u8; 3]; 3] {
    [
        [
            image.get(x - 1, y - 1),
            image.get(x, y - 1),
            image.get(x + 1, y - 1),
        ],
        [image.get(x - 1, y), image.get(x, y), image.get(x + 1, y)],
        [
            image.get(x - 1, y + 1),
            image.get(x, y + 1),
            image.get(x + 1, y + 1),
        ],
    ]
}

/// Per-pixel 3x3 scan accumulated into 256 integer counts.
pub fn classic_histogram(image: &GrayImage) -> Vec<u64> {
    let mut bins = vec![0u64; 256];
    for x in 1..image.width() - 1 {
        for y in 1..image.height() - 1 {
            bins[classic_code(&window_at(image, x, y)) as usize] += 1;
        }
    }
    bins
}

/// Nine codes per window: each position acts as threshold once; the other
/// eight pixels keep raster order and take weights 1, 2, 4, ..., 128.
pub fn nine_codes(window: &[[u8; 3]; 3]) -> [u32; 9] {
    let flat: Vec<u8> = window.iter().flatten().copied().collect();
    let mut out = [0u32; 9];
    for (k, &threshold) in flat.iter().enumerate() {
        let mut weight = 1u32;
        let mut code = 0u32;
        for (j, &value) in flat.iter().enumerate() {
            if j == k {
                continue;
            }
            if value >= threshold {
                code += weight;
            }
            weight *= 2;
        }
        out[k] = code;
    }
    out
}

/// Nine 256-bin count histograms over all interior pixels.
pub fn nine_histograms(image: &GrayImage) -> Vec<Vec<u64>> {
    let mut hists = vec![vec![0u64; 256]; 9];
    for x in 1..image.width() - 1 {
        for y in 1..image.height() - 1 {
            let codes = nine_codes(&window_at(image, x, y));
            for (hist, code) in hists.iter_mut().zip(codes) {
                hist[code as usize] += 1;
            }
        }
    }
    hists
}

/// Unit-radius 8-sample code: sample i sits at angle 2*pi*i/8 (y axis down)
/// and rounding the unit circle lands every sample on a neighboring pixel
/// center.
pub fn angular_code_8_1(image: &GrayImage, x: usize, y: usize) -> u32 {
    let center = image.get(x, y);
    let mut code = 0u32;
    for i in 0..8u32 {
        let angle = std::f64::consts::TAU * f64::from(i) / 8.0;
        let dx = angle.cos().round() as i64;
        let dy = angle.sin().round() as i64;
        let sample = image.get((x as i64 + dx) as usize, (y as i64 + dy) as usize);
        if sample >= center {
            code |= 1 << i;
        }
    }
    code
}

/// Count histogram of [`angular_code_8_1`] over all interior pixels.
pub fn angular_histogram_8_1(image: &GrayImage) -> Vec<u64> {
    let mut bins = vec![0u64; 256];
    for x in 1..image.width() - 1 {
        for y in 1..image.height() - 1 {
            bins[angular_code_8_1(image, x, y) as usize] += 1;
        }
    }
    bins
}

/// Minimum over all circular bit rotations, realized by literally rotating
/// a bit vector.
pub fn min_rotation(code: u32, bits: u32) -> u32 {
    let mut b: Vec<u32> = (0..bits).map(|i| (code >> i) & 1).collect();
    let mut best = u32::MAX;
    for _ in 0..bits {
        let value: u32 = b.iter().enumerate().map(|(i, bit)| bit << i).sum();
        best = best.min(value);
        b.rotate_left(1);
    }
    best
}

/// Rotation-reduced unit-radius histogram.
pub fn rotation_histogram_8_1(image: &GrayImage) -> Vec<u64> {
    let mut bins = vec![0u64; 256];
    for x in 1..image.width() - 1 {
        for y in 1..image.height() - 1 {
            bins[min_rotation(angular_code_8_1(image, x, y), 8) as usize] += 1;
        }
    }
    bins
}

/// Raw moment sum I(x, y) * x^p * y^q over the whole image.
pub fn raw_moment(image: &GrayImage, p: u32, q: u32) -> f64 {
    let mut sum = 0.0;
    for y in 0..image.height() {
        for x in 0..image.width() {
            sum += f64::from(image.get(x, y)) * (x as f64).powi(p as i32) * (y as f64).powi(q as i32);
        }
    }
    sum
}

/// Central moment by direct double-loop summation around the centroid.
pub fn central_moment(image: &GrayImage, p: u32, q: u32) -> f64 {
    let m00 = raw_moment(image, 0, 0);
    let cx = raw_moment(image, 1, 0) / m00;
    let cy = raw_moment(image, 0, 1) / m00;
    let mut sum = 0.0;
    for y in 0..image.height() {
        for x in 0..image.width() {
            sum += f64::from(image.get(x, y))
                * (x as f64 - cx).powi(p as i32)
                * (y as f64 - cy).powi(q as i32);
        }
    }
    sum
}

/// Sum of absolute term magnitudes of [`central_moment`]: the natural scale
/// for a relative-error comparison even when the signed sum cancels.
pub fn central_moment_scale(image: &GrayImage, p: u32, q: u32) -> f64 {
    let m00 = raw_moment(image, 0, 0);
    let cx = raw_moment(image, 1, 0) / m00;
    let cy = raw_moment(image, 0, 1) / m00;
    let mut sum = 0.0;
    for y in 0..image.height() {
        for x in 0..image.width() {
            sum += f64::from(image.get(x, y))
                * (x as f64 - cx).abs().powi(p as i32)
                * (y as f64 - cy).abs().powi(q as i32);
        }
    }
    sum
}

/// Windowed moment at one center by direct double-loop summation.
pub fn local_moment_at(
    image: &GrayImage,
    x: usize,
    y: usize,
    m: u32,
    n: u32,
    w1: usize,
    w2: usize,
) -> f64 {
    let mut sum = 0.0;
    for v in -(w2 as i64)..=w2 as i64 {
        for u in -(w1 as i64)..=w1 as i64 {
            let px = (x as i64 + u) as usize;
            let py = (y as i64 + v) as usize;
            sum += f64::from(image.get(px, py))
                * (u as f64).powi(m as i32)
                * (v as f64).powi(n as i32);
        }
    }
    sum
}
