//! Grayscale images, PGM/PPM decoding and the dataset manifest.

mod pnm;

pub use pnm::{decode_image, encode_pgm};

use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};

/// A row-major 8-bit grayscale image.
///
/// Width and height are always positive and `pixels.len() == width * height`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    /// Builds an image from a row-major pixel buffer.
    pub fn from_pixels(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(Error::InvalidImageShape {
                width,
                height,
                len: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            pixels,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Row-major pixel buffer.
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    /// Intensity at column `x`, row `y`. Panics when out of bounds.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        assert!(x < self.width && y < self.height, "pixel out of bounds");
        self.pixels[y * self.width + x]
    }

    /// One image row as a slice.
    #[inline]
    pub fn row(&self, y: usize) -> &[u8] {
        let start = y * self.width;
        &self.pixels[start..start + self.width]
    }

    /// The 3x3 window centered at `(x, y)`; the center must be interior.
    #[inline]
    pub fn window3x3(&self, x: usize, y: usize) -> [[u8; 3]; 3] {
        assert!(
            x >= 1 && y >= 1 && x + 1 < self.width && y + 1 < self.height,
            "3x3 window center must be interior"
        );
        let mut w = [[0u8; 3]; 3];
        for (dy, row) in w.iter_mut().enumerate() {
            let src = &self.row(y + dy - 1)[x - 1..x + 2];
            row.copy_from_slice(src);
        }
        w
    }

    /// Copy of the image with a `margin`-pixel border removed on every side.
    pub fn interior(&self, margin: usize) -> Result<Self> {
        if self.width <= 2 * margin || self.height <= 2 * margin {
            return Err(Error::ImageTooSmall {
                width: self.width,
                height: self.height,
                required: format!("at least {0}x{0} for margin {margin}", 2 * margin + 1),
            });
        }
        let w = self.width - 2 * margin;
        let h = self.height - 2 * margin;
        Ok(Self::from_fn(w, h, |x, y| {
            self.get(x + margin, y + margin)
        }))
    }
}

/// One manifest row: an image file and the relevance group it belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub image_id: String,
    pub path: String,
    pub group_label: String,
}

/// An ordered list of images with unique ids, partitioned into groups.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DatasetManifest {
    entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn entries(&self) -> &[ManifestEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Group labels in order of first appearance.
    pub fn groups(&self) -> Vec<&str> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for e in &self.entries {
            if seen.insert(e.group_label.as_str()) {
                out.push(e.group_label.as_str());
            }
        }
        out
    }
}

/// Parses manifest text: one `path,group_label` per line, `#` comments, LF or CRLF.
///
/// The image id is the path's file stem (directory and extension stripped).
pub fn load_manifest(text: &str) -> Result<DatasetManifest> {
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (path, group) = line.split_once(',').ok_or(Error::MalformedManifest {
            line: line_no,
            reason: "expected `path,group_label`".into(),
        })?;
        let path = path.trim();
        let group = group.trim();
        if path.is_empty() {
            return Err(Error::MalformedManifest {
                line: line_no,
                reason: "empty path".into(),
            });
        }
        if group.is_empty() {
            return Err(Error::MalformedManifest {
                line: line_no,
                reason: "empty group label".into(),
            });
        }
        let image_id = Path::new(path)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .filter(|s| !s.is_empty())
            .ok_or(Error::MalformedManifest {
                line: line_no,
                reason: format!("cannot derive an image id from `{path}`"),
            })?;
        if !seen.insert(image_id.clone()) {
            return Err(Error::DuplicateImageId(image_id));
        }
        entries.push(ManifestEntry {
            image_id,
            path: path.to_string(),
            group_label: group.to_string(),
        });
    }
    Ok(DatasetManifest { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_pixels_validates_shape() {
        assert!(GrayImage::from_pixels(2, 2, vec![1, 2, 3, 4]).is_ok());
        assert!(matches!(
            GrayImage::from_pixels(2, 2, vec![1, 2, 3]),
            Err(Error::InvalidImageShape { .. })
        ));
        assert!(matches!(
            GrayImage::from_pixels(0, 2, vec![]),
            Err(Error::InvalidImageShape { .. })
        ));
    }

    #[test]
    fn window3x3_reads_rows() {
        let img = GrayImage::from_fn(4, 4, |x, y| (y * 4 + x) as u8);
        let w = img.window3x3(1, 1);
        assert_eq!(w, [[0, 1, 2], [4, 5, 6], [8, 9, 10]]);
    }

    #[test]
    fn interior_strips_border() {
        let img = GrayImage::from_fn(5, 4, |x, y| (y * 5 + x) as u8);
        let inner = img.interior(1).unwrap();
        assert_eq!(inner.width(), 3);
        assert_eq!(inner.height(), 2);
        assert_eq!(inner.pixels(), &[6, 7, 8, 11, 12, 13]);
        assert!(matches!(
            img.interior(2),
            Err(Error::ImageTooSmall { .. })
        ));
    }

    #[test]
    fn manifest_basic_parse() {
        let m = load_manifest("a/dog1.pgm,dogs\na/dog2.pgm,dogs\n").unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.groups(), vec!["dogs"]);
        assert_eq!(m.entries()[0].image_id, "dog1");
        assert_eq!(m.entries()[1].path, "a/dog2.pgm");
    }

    #[test]
    fn manifest_empty_input() {
        let m = load_manifest("").unwrap();
        assert!(m.is_empty());
    }

    #[test]
    fn manifest_duplicate_id_rejected() {
        let err = load_manifest("x.pgm,g1\nx.pgm,g2\n").unwrap_err();
        assert!(matches!(err, Error::DuplicateImageId(id) if id == "x"));
        // same stem under different directories collides too
        let err = load_manifest("a/x.pgm,g1\nb/x.ppm,g2\n").unwrap_err();
        assert!(matches!(err, Error::DuplicateImageId(_)));
    }

    #[test]
    fn manifest_rejects_bad_lines() {
        assert!(matches!(
            load_manifest("nocomma\n"),
            Err(Error::MalformedManifest { line: 1, .. })
        ));
        assert!(matches!(
            load_manifest("x.pgm,\n"),
            Err(Error::MalformedManifest { .. })
        ));
        assert!(matches!(
            load_manifest(",grp\n"),
            Err(Error::MalformedManifest { .. })
        ));
    }

    #[test]
    fn manifest_comments_and_crlf() {
        let m = load_manifest("# header\r\na.pgm,g1\r\n\r\n  # indented comment\nb.pgm,g2\n").unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.groups(), vec!["g1", "g2"]);
    }
}
