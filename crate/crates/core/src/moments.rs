//! Image moments: central and scale-normalized moments, the seven Hu
//! invariants, sliding-window local moments, and a moment-gradient edge map.
//!
//! Pixel coordinates are 0-based grid indices and intensity acts as mass
//! directly. All accumulation is in double precision; pixel values and
//! integer-power kernels keep window sums exactly representable.

use crate::error::{Error, Result};
use crate::image_io::GrayImage;

/// Central moments of a whole image: mass, centroid, and every mu_pq with
/// `p + q <= 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralMoments {
    mass: f64,
    centroid: (f64, f64),
    mu: [[f64; 4]; 4],
}

impl CentralMoments {
    /// Total intensity mass (mu_00); always positive.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Intensity centroid in pixel coordinates.
    pub fn centroid(&self) -> (f64, f64) {
        self.centroid
    }

    /// Central moment mu_pq for `p + q <= 3`.
    pub fn mu(&self, p: usize, q: usize) -> f64 {
        assert!(p + q <= 3, "mu_{p}{q} is not tracked (order above 3)");
        self.mu[p][q]
    }

    /// Scale-normalized moment eta_pq = mu_pq / mu_00^(1 + (p+q)/2), defined
    /// for orders 2 and 3.
    pub fn eta(&self, p: usize, q: usize) -> f64 {
        assert!(
            (2..=3).contains(&(p + q)),
            "eta_{p}{q} is only defined for orders 2 and 3"
        );
        self.mu[p][q] / self.mass.powf(1.0 + (p + q) as f64 / 2.0)
    }
}

/// Computes mass, centroid, and all central moments up to order 3 in two
/// passes over the image.
pub fn central_moments(image: &GrayImage) -> Result<CentralMoments> {
    let mut m00 = 0.0;
    let mut m10 = 0.0;
    let mut m01 = 0.0;
    for y in 0..image.height() {
        for (x, &p) in image.row(y).iter().enumerate() {
            let v = f64::from(p);
            m00 += v;
            m10 += v * x as f64;
            m01 += v * y as f64;
        }
    }
    if m00 == 0.0 {
        return Err(Error::ZeroMass);
    }
    let cx = m10 / m00;
    let cy = m01 / m00;
    let mut mu = [[0.0; 4]; 4];
    for y in 0..image.height() {
        let dy = y as f64 - cy;
        for (x, &p) in image.row(y).iter().enumerate() {
            let v = f64::from(p);
            let dx = x as f64 - cx;
            let xp = [1.0, dx, dx * dx, dx * dx * dx];
            let yq = [1.0, dy, dy * dy, dy * dy * dy];
            for p_ord in 0..4 {
                for q_ord in 0..4 - p_ord {
                    mu[p_ord][q_ord] += v * xp[p_ord] * yq[q_ord];
                }
            }
        }
    }
    Ok(CentralMoments {
        mass: m00,
        centroid: (cx, cy),
        mu,
    })
}

/// The seven Hu invariants of an image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HuVector([f64; 7]);

impl HuVector {
    pub fn values(&self) -> [f64; 7] {
        self.0
    }
}

/// Computes the Hu invariants M1..M7 from scale-normalized central moments.
/// Invariant to translation and scale; |M_i| also survives rotation, and a
/// mirror flip negates M7 while preserving M1..M6.
pub fn hu_moments(image: &GrayImage) -> Result<HuVector> {
    Ok(hu_from_central(&central_moments(image)?))
}

/// The Hu formulas applied to precomputed central moments.
pub fn hu_from_central(m: &CentralMoments) -> HuVector {
    let n20 = m.eta(2, 0);
    let n02 = m.eta(0, 2);
    let n11 = m.eta(1, 1);
    let n30 = m.eta(3, 0);
    let n03 = m.eta(0, 3);
    let n21 = m.eta(2, 1);
    let n12 = m.eta(1, 2);

    let a = n30 + n12; // x-skew pair
    let b = n21 + n03; // y-skew pair
    let c = n30 - 3.0 * n12;
    let d = 3.0 * n21 - n03;

    let m1 = n20 + n02;
    let m2 = (n20 - n02).powi(2) + 4.0 * n11 * n11;
    let m3 = c * c + d * d;
    let m4 = a * a + b * b;
    let m5 = c * a * (a * a - 3.0 * b * b) + d * b * (3.0 * a * a - b * b);
    let m6 = (n20 - n02) * (a * a - b * b) + 4.0 * n11 * a * b;
    let m7 = d * a * (a * a - 3.0 * b * b) - c * b * (3.0 * a * a - b * b);
    HuVector([m1, m2, m3, m4, m5, m6, m7])
}

/// Local moment values on the interior grid of an image: entry `(x, y)`
/// holds `M_mn` of the window centered at image pixel `(x + w1, y + w2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentMap {
    order: (u32, u32),
    window: (usize, usize),
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl MomentMap {
    /// Moment order `(m, n)`.
    pub fn order(&self) -> (u32, u32) {
        self.order
    }

    /// Window half-widths `(w1, w2)`; the window spans `(2*w1+1) x (2*w2+1)`.
    pub fn window(&self) -> (usize, usize) {
        self.window
    }

    /// Grid width: image width minus `2*w1`.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Grid height: image height minus `2*w2`.
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        assert!(x < self.width && y < self.height, "moment grid index out of range");
        self.values[y * self.width + x]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Windowed moment map: at every pixel whose `(2*w1+1) x (2*w2+1)` window
/// fits in the image, `M_mn = sum over (u, v) of I(x+u, y+v) * u^m * v^n`.
/// Computed separably (columns then rows), which is exact here because every
/// partial sum is an integer.
pub fn local_moments(
    image: &GrayImage,
    m: u32,
    n: u32,
    w1: usize,
    w2: usize,
) -> Result<MomentMap> {
    assert!(m + n <= 3, "moment order {m}+{n} above 3 is not supported");
    if image.width() <= 2 * w1 || image.height() <= 2 * w2 {
        return Err(Error::ImageTooSmall {
            width: image.width(),
            height: image.height(),
            required: format!("more than {}x{} for window ({w1}, {w2})", 2 * w1, 2 * w2),
        });
    }
    let grid_w = image.width() - 2 * w1;
    let grid_h = image.height() - 2 * w2;

    // column pass: per pixel, the vertical sum of I * v^n
    let mut columns = vec![0.0; image.width() * grid_h];
    for gy in 0..grid_h {
        let y = gy + w2;
        for x in 0..image.width() {
            let mut acc = 0.0;
            for v in -(w2 as i64)..=w2 as i64 {
                let pixel = f64::from(image.get(x, (y as i64 + v) as usize));
                acc += pixel * (v as f64).powi(n as i32);
            }
            columns[gy * image.width() + x] = acc;
        }
    }

    // row pass: horizontal sum of the column sums * u^m
    let mut values = vec![0.0; grid_w * grid_h];
    for gy in 0..grid_h {
        let row = &columns[gy * image.width()..(gy + 1) * image.width()];
        for gx in 0..grid_w {
            let x = gx + w1;
            let mut acc = 0.0;
            for u in -(w1 as i64)..=w1 as i64 {
                acc += row[(x as i64 + u) as usize] * (u as f64).powi(m as i32);
            }
            values[gy * grid_w + gx] = acc;
        }
    }

    Ok(MomentMap {
        order: (m, n),
        window: (w1, w2),
        width: grid_w,
        height: grid_h,
        values,
    })
}

/// Binary edge decision per interior pixel, thresholded on the local moment
/// gradient magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeMap {
    width: usize,
    height: usize,
    window: (usize, usize),
    magnitude: Vec<f64>,
    mean_magnitude: f64,
    threshold: f64,
    edges: Vec<bool>,
}

impl EdgeMap {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Window half-widths the gradient was computed with.
    pub fn window(&self) -> (usize, usize) {
        self.window
    }

    pub fn is_edge(&self, x: usize, y: usize) -> bool {
        assert!(x < self.width && y < self.height, "edge grid index out of range");
        self.edges[y * self.width + x]
    }

    /// Gradient magnitude sqrt(M10^2 + M01^2) at a grid cell.
    pub fn magnitude(&self, x: usize, y: usize) -> f64 {
        assert!(x < self.width && y < self.height, "edge grid index out of range");
        self.magnitude[y * self.width + x]
    }

    pub fn mean_magnitude(&self) -> f64 {
        self.mean_magnitude
    }

    /// The decision threshold: `threshold_factor * mean_magnitude`.
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().filter(|&&e| e).count()
    }

    /// Renders the map as a grayscale image: 255 on edges, 0 elsewhere.
    pub fn to_gray(&self) -> GrayImage {
        GrayImage::from_fn(self.width, self.height, |x, y| {
            if self.edges[y * self.width + x] {
                255
            } else {
                0
            }
        })
    }
}

/// Edge map from windowed first-order moments: the gradient magnitude
/// `G = sqrt(M10^2 + M01^2)` is computed at every interior pixel and a pixel
/// is an edge iff `G > threshold_factor * mean(G)`.
pub fn moment_edge_map(
    image: &GrayImage,
    w1: usize,
    w2: usize,
    threshold_factor: f64,
) -> Result<EdgeMap> {
    assert!(
        threshold_factor.is_finite() && threshold_factor >= 0.0,
        "threshold factor must be finite and non-negative"
    );
    let m10 = local_moments(image, 1, 0, w1, w2)?;
    let m01 = local_moments(image, 0, 1, w1, w2)?;
    let magnitude: Vec<f64> = m10
        .values()
        .iter()
        .zip(m01.values())
        .map(|(&gx, &gy)| gx.hypot(gy))
        .collect();
    let mean = magnitude.iter().sum::<f64>() / magnitude.len() as f64;
    let threshold = threshold_factor * mean;
    let edges = magnitude.iter().map(|&g| g > threshold).collect();
    Ok(EdgeMap {
        width: m10.width(),
        height: m10.height(),
        window: (w1, w2),
        magnitude,
        mean_magnitude: mean,
        threshold,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn impulse(w: usize, h: usize, x: usize, y: usize) -> GrayImage {
        GrayImage::from_fn(w, h, |px, py| u8::from(px == x && py == y))
    }

    /// Quarter turn so that |Hu| values must survive unchanged.
    fn rotate90(image: &GrayImage) -> GrayImage {
        let (w, h) = (image.width(), image.height());
        GrayImage::from_fn(h, w, |x, y| image.get(y, h - 1 - x))
    }

    fn mirror(image: &GrayImage) -> GrayImage {
        let w = image.width();
        GrayImage::from_fn(w, image.height(), |x, y| image.get(w - 1 - x, y))
    }

    /// Embeds `image` into a larger zero canvas at offset (dx, dy).
    fn padded(image: &GrayImage, dx: usize, dy: usize, w: usize, h: usize) -> GrayImage {
        GrayImage::from_fn(w, h, |x, y| {
            if x >= dx && y >= dy && x - dx < image.width() && y - dy < image.height() {
                image.get(x - dx, y - dy)
            } else {
                0
            }
        })
    }

    /// Small blob with no mirror or rotational symmetry (M7 far from 0).
    fn skewed_blob() -> GrayImage {
        GrayImage::from_fn(16, 12, |x, y| {
            let g1 = (-((x as f64 - 4.0).powi(2) + (y as f64 - 3.5).powi(2)) / 6.0).exp();
            let g2 = (-((x as f64 - 11.0).powi(2) + (y as f64 - 8.0).powi(2)) / 14.0).exp();
            ((g1 * 200.0 + g2 * 120.0).round() as u8).max(1)
        })
    }

    #[test]
    fn impulse_has_unit_mass_and_zero_moments() {
        let m = central_moments(&impulse(7, 5, 3, 2)).unwrap();
        assert_eq!(m.mass(), 1.0);
        assert_eq!(m.centroid(), (3.0, 2.0));
        for p in 0..4usize {
            for q in 0..4 - p {
                if p + q >= 1 {
                    assert_eq!(m.mu(p, q), 0.0, "mu_{p}{q}");
                }
            }
        }
        assert_eq!(hu_moments(&impulse(7, 5, 3, 2)).unwrap().values(), [0.0; 7]);
    }

    #[test]
    fn all_zero_image_is_degenerate() {
        let img = GrayImage::from_fn(4, 4, |_, _| 0);
        assert!(matches!(central_moments(&img), Err(Error::ZeroMass)));
        assert!(matches!(hu_moments(&img), Err(Error::ZeroMass)));
    }

    #[test]
    fn first_order_central_moments_vanish() {
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..20 {
            let img = GrayImage::from_fn(9, 6, |_, _| rng.random());
            let m = central_moments(&img).unwrap();
            assert!(m.mu(1, 0).abs() < 1e-9 * m.mass());
            assert!(m.mu(0, 1).abs() < 1e-9 * m.mass());
        }
    }

    #[test]
    fn column_ramp_second_moments() {
        // pixel value equals its column index: mu20 = 2, mu02 = 6, mu11 = 0
        let img = GrayImage::from_fn(3, 3, |x, _| x as u8);
        let m = central_moments(&img).unwrap();
        assert!((m.mu(2, 0) - 2.0).abs() < 1e-12);
        assert!((m.mu(0, 2) - 6.0).abs() < 1e-12);
        assert!(m.mu(1, 1).abs() < 1e-12);
    }

    #[test]
    fn zero_padding_preserves_central_moments() {
        let img = skewed_blob();
        let shifted = padded(&img, 5, 3, 27, 20);
        let a = central_moments(&img).unwrap();
        let b = central_moments(&shifted).unwrap();
        assert_eq!(a.mass(), b.mass());
        for p in 0..4usize {
            for q in 0..4 - p {
                if p + q >= 2 {
                    let scale = a.mu(p, q).abs().max(1.0);
                    assert!(
                        (a.mu(p, q) - b.mu(p, q)).abs() < 1e-12 * scale,
                        "mu_{p}{q}: {} vs {}",
                        a.mu(p, q),
                        b.mu(p, q)
                    );
                }
            }
        }
        let ha = hu_moments(&img).unwrap().values();
        let hb = hu_moments(&shifted).unwrap().values();
        for i in 0..7 {
            assert!((ha[i] - hb[i]).abs() < 1e-12 * ha[i].abs().max(1e-3), "M{}", i + 1);
        }
    }

    #[test]
    fn quarter_turn_preserves_hu_magnitudes() {
        let img = skewed_blob();
        let ha = hu_moments(&img).unwrap().values();
        let hb = hu_moments(&rotate90(&img)).unwrap().values();
        for i in 0..7 {
            assert!(
                (ha[i].abs() - hb[i].abs()).abs() <= 1e-9 * ha[i].abs(),
                "M{}: {} vs {}",
                i + 1,
                ha[i],
                hb[i]
            );
        }
    }

    #[test]
    fn mirror_flip_negates_only_m7() {
        let img = skewed_blob();
        let ha = hu_moments(&img).unwrap().values();
        let hb = hu_moments(&mirror(&img)).unwrap().values();
        for i in 0..6 {
            assert!((ha[i] - hb[i]).abs() <= 1e-9 * ha[i].abs(), "M{}", i + 1);
        }
        assert!(ha[6].abs() > 0.0, "fixture must have nonzero M7");
        assert!((ha[6] + hb[6]).abs() <= 1e-9 * ha[6].abs(), "M7 must flip sign");
    }

    #[test]
    fn box_sum_map_matches_direct_window_sums() {
        let mut rng = StdRng::seed_from_u64(7);
        let img = GrayImage::from_fn(8, 7, |_, _| rng.random());
        let map = local_moments(&img, 0, 0, 2, 1).unwrap();
        assert_eq!((map.width(), map.height()), (4, 5));
        for gy in 0..map.height() {
            for gx in 0..map.width() {
                let mut expect = 0.0;
                for v in -1i64..=1 {
                    for u in -2i64..=2 {
                        let x = (gx as i64 + 2 + u) as usize;
                        let y = (gy as i64 + 1 + v) as usize;
                        expect += f64::from(img.get(x, y));
                    }
                }
                assert_eq!(map.get(gx, gy), expect);
            }
        }
    }

    #[test]
    fn odd_orders_vanish_on_constant_images() {
        let img = GrayImage::from_fn(9, 9, |_, _| 123);
        for (m, n) in [(1, 0), (0, 1), (3, 0), (0, 3), (1, 2), (2, 1)] {
            let map = local_moments(&img, m, n, 2, 2).unwrap();
            assert!(map.values().iter().all(|&v| v == 0.0), "M{m}{n}");
        }
    }

    #[test]
    fn first_order_map_matches_double_loop() {
        let mut rng = StdRng::seed_from_u64(99);
        let img = GrayImage::from_fn(5, 5, |_, _| rng.random());
        let map = local_moments(&img, 1, 0, 1, 1).unwrap();
        for gy in 0..3 {
            for gx in 0..3 {
                let mut expect = 0.0;
                for v in -1i64..=1 {
                    for u in -1i64..=1 {
                        let x = (gx as i64 + 1 + u) as usize;
                        let y = (gy as i64 + 1 + v) as usize;
                        expect += f64::from(img.get(x, y)) * u as f64;
                    }
                }
                assert_eq!(map.get(gx, gy), expect);
            }
        }
    }

    #[test]
    fn window_larger_than_image_is_rejected() {
        let img = GrayImage::from_fn(4, 4, |_, _| 1);
        assert!(matches!(
            local_moments(&img, 0, 0, 2, 0),
            Err(Error::ImageTooSmall { .. })
        ));
        assert!(matches!(
            moment_edge_map(&img, 0, 2, 1.0),
            Err(Error::ImageTooSmall { .. })
        ));
    }

    #[test]
    fn constant_image_has_no_edges() {
        let img = GrayImage::from_fn(10, 10, |_, _| 99);
        let map = moment_edge_map(&img, 1, 1, 1.0).unwrap();
        assert_eq!(map.edge_count(), 0);
        assert_eq!(map.mean_magnitude(), 0.0);
    }

    #[test]
    fn vertical_step_edges_hug_the_step() {
        // left half 0, right half 255; step between image columns 4 and 5
        let img = GrayImage::from_fn(10, 8, |x, _| if x < 5 { 0 } else { 255 });
        let map = moment_edge_map(&img, 1, 1, 1.0).unwrap();
        assert!(map.edge_count() > 0);
        for gy in 0..map.height() {
            for gx in 0..map.width() {
                // grid x maps to image x + 1; gradient is nonzero only where
                // the window straddles the step
                let near_step = (3..=4).contains(&gx);
                assert_eq!(map.is_edge(gx, gy), near_step, "({gx}, {gy})");
                if !near_step {
                    assert_eq!(map.magnitude(gx, gy), 0.0);
                }
            }
        }
    }

    #[test]
    fn zero_factor_marks_every_nonzero_gradient() {
        let mut rng = StdRng::seed_from_u64(3);
        let img = GrayImage::from_fn(9, 9, |_, _| rng.random());
        let map = moment_edge_map(&img, 1, 1, 0.0).unwrap();
        for gy in 0..map.height() {
            for gx in 0..map.width() {
                assert_eq!(map.is_edge(gx, gy), map.magnitude(gx, gy) > 0.0);
            }
        }
    }

    #[test]
    fn edge_map_renders_as_binary_image() {
        let img = GrayImage::from_fn(10, 8, |x, _| if x < 5 { 0 } else { 255 });
        let map = moment_edge_map(&img, 1, 1, 1.0).unwrap();
        let gray = map.to_gray();
        assert_eq!((gray.width(), gray.height()), (map.width(), map.height()));
        for y in 0..gray.height() {
            for x in 0..gray.width() {
                let expect = if map.is_edge(x, y) { 255 } else { 0 };
                assert_eq!(gray.get(x, y), expect);
            }
        }
    }
}
