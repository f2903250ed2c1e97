//! Netpbm decoding (PGM P2/P5, PPM P3/P6) and the P5 debug writer.
//!
//! Samples are stored verbatim; maxval only bounds them and must be <= 255.
//! Color triples collapse to gray with Rec. 601 luma, rounded half up.

use crate::error::{Error, Result};
use crate::image_io::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Magic {
    PgmAscii,  // P2
    PpmAscii,  // P3
    PgmBinary, // P5
    PpmBinary, // P6
}

impl Magic {
    fn is_binary(self) -> bool {
        matches!(self, Magic::PgmBinary | Magic::PpmBinary)
    }

    fn is_color(self) -> bool {
        matches!(self, Magic::PpmAscii | Magic::PpmBinary)
    }
}

/// Byte cursor over the raw file with Netpbm token rules.
struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    /// Skips whitespace and `#` comments (a comment runs to end of line).
    fn skip_separators(&mut self) {
        while let Some(b) = self.peek() {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(c) = self.peek() {
                    self.pos += 1;
                    if c == b'\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    /// Reads one unsigned decimal token.
    fn read_int(&mut self, what: &str) -> Result<u32> {
        self.skip_separators();
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            let found = match self.bytes.get(start) {
                Some(&b) => format!("byte 0x{b:02x}"),
                None => "end of input".to_string(),
            };
            return Err(Error::MalformedHeader(format!(
                "expected {what}, found {found}"
            )));
        }
        let token = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        token
            .parse()
            .map_err(|_| Error::MalformedHeader(format!("{what} `{token}` out of range")))
    }

    /// Reads one ASCII sample and checks it against maxval.
    fn read_sample(&mut self, maxval: u32) -> Result<Option<u8>> {
        self.skip_separators();
        if self.peek().is_none() {
            return Ok(None);
        }
        let start = self.pos;
        while matches!(self.peek(), Some(b) if !b.is_ascii_whitespace()) {
            self.pos += 1;
        }
        let token = String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned();
        let value: u32 = token
            .parse()
            .map_err(|_| Error::MalformedSample(token.clone()))?;
        if value > maxval {
            return Err(Error::SampleOutOfRange { value, maxval });
        }
        Ok(Some(value as u8))
    }

    fn remaining(&self) -> &'a [u8] {
        &self.bytes[self.pos..]
    }
}

/// Decodes a PGM (P2/P5) or PPM (P3/P6) file into a grayscale image.
pub fn decode_image(bytes: &[u8]) -> Result<GrayImage> {
    let mut cur = Cursor::new(bytes);
    let magic = read_magic(&mut cur)?;
    let width = cur.read_int("width")? as usize;
    let height = cur.read_int("height")? as usize;
    if width == 0 || height == 0 {
        return Err(Error::MalformedHeader(format!(
            "zero image dimension {width}x{height}"
        )));
    }
    let maxval = cur.read_int("maxval")?;
    if maxval == 0 {
        return Err(Error::MalformedHeader("maxval must be positive".into()));
    }
    if maxval > 255 {
        return Err(Error::UnsupportedMaxval(maxval));
    }

    let samples_per_pixel = if magic.is_color() { 3 } else { 1 };
    let expected = width * height * samples_per_pixel;

    let samples = if magic.is_binary() {
        // Exactly one whitespace byte separates the header from raw samples.
        match cur.peek() {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => {
                return Err(Error::MalformedHeader(
                    "missing whitespace before binary samples".into(),
                ))
            }
        }
        let raw = cur.remaining();
        if raw.len() < expected {
            return Err(Error::TruncatedPixelData {
                expected,
                found: raw.len(),
            });
        }
        let raw = &raw[..expected];
        if let Some(&value) = raw.iter().find(|&&b| u32::from(b) > maxval) {
            return Err(Error::SampleOutOfRange {
                value: value.into(),
                maxval,
            });
        }
        raw.to_vec()
    } else {
        let mut out = Vec::with_capacity(expected);
        while out.len() < expected {
            match cur.read_sample(maxval)? {
                Some(v) => out.push(v),
                None => {
                    return Err(Error::TruncatedPixelData {
                        expected,
                        found: out.len(),
                    })
                }
            }
        }
        out
    };

    let pixels = if magic.is_color() {
        samples.chunks_exact(3).map(|rgb| luma(rgb[0], rgb[1], rgb[2])).collect()
    } else {
        samples
    };
    GrayImage::from_pixels(width, height, pixels)
}

fn read_magic(cur: &mut Cursor<'_>) -> Result<Magic> {
    let two = [cur.peek(), cur.bytes.get(cur.pos + 1).copied()];
    let (a, b) = match two {
        [Some(a), Some(b)] => (a, b),
        _ => return Err(Error::UnknownMagic(String::from_utf8_lossy(cur.bytes).into_owned())),
    };
    cur.pos += 2;
    match (a, b) {
        (b'P', b'2') => Ok(Magic::PgmAscii),
        (b'P', b'3') => Ok(Magic::PpmAscii),
        (b'P', b'5') => Ok(Magic::PgmBinary),
        (b'P', b'6') => Ok(Magic::PpmBinary),
        _ => Err(Error::UnknownMagic(
            String::from_utf8_lossy(&[a, b]).into_owned(),
        )),
    }
}

/// Rec. 601 luma, rounded half up.
fn luma(r: u8, g: u8, b: u8) -> u8 {
    let y = 0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b);
    // weights sum to 1, so y is within [0, 255] already
    y.round() as u8
}

/// Encodes an image as binary PGM (P5, maxval 255).
pub fn encode_pgm(image: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.extend_from_slice(image.pixels());
    out
}
