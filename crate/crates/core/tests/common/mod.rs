//! Shared fixtures for the integration suites: synthetic corpora, image
//! transforms, and deterministic random images.
#![allow(dead_code)]

pub mod oracle;

use std::path::Path;

use cbir_core::image_io::{encode_pgm, load_manifest, DatasetManifest, GrayImage};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tempfile::TempDir;

/// Checkerboard cell sizes, one per relevance group.
pub const CHECKER_PERIODS: [usize; 4] = [2, 4, 8, 16];
/// Images per group; within a group only a constant gray offset varies.
pub const CHECKER_GROUP_SIZE: usize = 10;

/// A 32x32 two-tone checkerboard: cell size `period`, tones 40 and 200
/// lifted by `offset` (offsets up to 55 stay clip-free).
pub fn checker_image(period: usize, offset: u8) -> GrayImage {
    GrayImage::from_fn(32, 32, |x, y| {
        if (x / period + y / period).is_multiple_of(2) {
            40 + offset
        } else {
            200 + offset
        }
    })
}

/// A dataset written to a temporary directory, plus its parsed manifest.
pub struct DiskCorpus {
    pub dir: TempDir,
    pub manifest: DatasetManifest,
}

impl DiskCorpus {
    pub fn root(&self) -> &Path {
        self.dir.path()
    }
}

/// Four texture groups of ten images each. Groups differ by checkerboard
/// period; group members differ only by a constant gray offset, so every
/// histogram descriptor is identical within a group and the groups are
/// cleanly separable.
pub fn checkerboard_corpus() -> DiskCorpus {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::new();
    for period in CHECKER_PERIODS {
        for j in 0..CHECKER_GROUP_SIZE {
            let name = format!("p{period:02}_i{j:02}");
            let image = checker_image(period, (j * 5) as u8);
            std::fs::write(dir.path().join(format!("{name}.pgm")), encode_pgm(&image)).unwrap();
            text.push_str(&format!("{name}.pgm,p{period:02}\n"));
        }
    }
    let manifest = load_manifest(&text).unwrap();
    DiskCorpus { dir, manifest }
}

/// Uniformly random pixels from a fixed seed.
pub fn random_image(width: usize, height: usize, seed: u64) -> GrayImage {
    let mut rng = StdRng::seed_from_u64(seed);
    GrayImage::from_fn(width, height, |_, _| rng.random())
}

/// Quarter turn (the new image is the old one rotated 90 degrees).
pub fn rotate90(image: &GrayImage) -> GrayImage {
    let (w, h) = (image.width(), image.height());
    GrayImage::from_fn(h, w, |x, y| image.get(y, h - 1 - x))
}

/// Horizontal mirror.
pub fn mirror(image: &GrayImage) -> GrayImage {
    let w = image.width();
    GrayImage::from_fn(w, image.height(), |x, y| image.get(w - 1 - x, y))
}

/// Embeds `image` into a `w` x `h` zero canvas at offset `(dx, dy)`.
pub fn padded(image: &GrayImage, dx: usize, dy: usize, w: usize, h: usize) -> GrayImage {
    GrayImage::from_fn(w, h, |x, y| {
        if x >= dx && y >= dy && x - dx < image.width() && y - dy < image.height() {
            image.get(x - dx, y - dy)
        } else {
            0
        }
    })
}

/// Two overlapping Gaussian blobs of different size on a diagonal: smooth,
/// strictly positive mass, and no mirror or rotational symmetry, so all
/// seven Hu values sit well away from zero.
pub fn gaussian_blob() -> GrayImage {
    GrayImage::from_fn(24, 18, |x, y| {
        let (xf, yf) = (x as f64, y as f64);
        let g1 = (-((xf - 7.0).powi(2) + (yf - 6.0).powi(2)) / 9.0).exp();
        let g2 = (-((xf - 16.0).powi(2) + (yf - 11.0).powi(2)) / 20.0).exp();
        (g1 * 220.0 + g2 * 120.0).round().min(255.0) as u8
    })
}

/// Nearest-neighbor 2x upscale: every source pixel becomes a 2x2 block.
pub fn block_upscale_2x(image: &GrayImage) -> GrayImage {
    GrayImage::from_fn(image.width() * 2, image.height() * 2, |x, y| {
        image.get(x / 2, y / 2)
    })
}
