//! Error types shared by every module of the crate.

use crate::features::FeatureMode;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while decoding, extracting, indexing or evaluating.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    // ---- image decoding -------------------------------------------------
    /// The first header token is not one of the supported magic numbers.
    #[error("unknown magic number `{0}` (supported: P2, P3, P5, P6)")]
    UnknownMagic(String),
    /// Width, height or maxval are missing, non-numeric or inconsistent.
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    /// The file declares a sample depth this decoder does not handle.
    #[error("unsupported maxval {0}: only maxval <= 255 is supported")]
    UnsupportedMaxval(u32),
    /// The pixel section ends before `width * height` samples were read.
    #[error("truncated pixel data: expected {expected} samples, found {found}")]
    TruncatedPixelData { expected: usize, found: usize },
    /// An ASCII sample token is not a valid integer.
    #[error("malformed pixel sample `{0}`")]
    MalformedSample(String),
    /// A sample value exceeds the maxval declared in the header.
    #[error("sample value {value} exceeds maxval {maxval}")]
    SampleOutOfRange { value: u32, maxval: u32 },
    /// A pixel buffer does not match the declared dimensions.
    #[error("invalid image shape: {width}x{height} with {len} pixels")]
    InvalidImageShape {
        width: usize,
        height: usize,
        len: usize,
    },

    // ---- manifest -------------------------------------------------------
    /// A manifest line could not be split into `path,group_label`.
    #[error("manifest line {line}: {reason}")]
    MalformedManifest { line: usize, reason: String },
    /// Two manifest rows resolve to the same image id.
    #[error("duplicate image id `{0}` in manifest")]
    DuplicateImageId(String),

    // ---- descriptor geometry --------------------------------------------
    /// Neighbor count or radius outside the supported range.
    #[error("invalid LBP parameters: {0}")]
    InvalidLbpParams(String),
    /// The image cannot host a single descriptor window.
    #[error("image {width}x{height} too small: {required}")]
    ImageTooSmall {
        width: usize,
        height: usize,
        required: String,
    },
    /// A sampling circle around the requested center leaves the image.
    #[error("center ({x}, {y}) is within radius {radius} of the image border")]
    CenterOutOfBounds { x: usize, y: usize, radius: f64 },
    /// All-zero image: the centroid, and with it every moment, is undefined.
    #[error("image has zero total intensity; moments are undefined")]
    ZeroMass,

    // ---- feature vectors ------------------------------------------------
    /// Two feature vectors (or a vector and an index) disagree on length.
    #[error("feature dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    /// Two feature vectors were built in different modes.
    #[error("feature mode mismatch: expected {expected}, found {found}")]
    ModeMismatch {
        expected: FeatureMode,
        found: FeatureMode,
    },
    /// NaN or infinity where a finite value is required.
    #[error("non-finite feature value at position {0}")]
    NonFiniteValue(usize),
    /// A mode name other than lbp, gmlbp, hu or combined.
    #[error("unknown feature mode `{0}` (expected lbp, gmlbp, hu or combined)")]
    UnknownMode(String),
    /// A vector length no parameter choice could produce for its mode.
    #[error("dimension {dim} is not valid for mode {mode}")]
    InvalidDimension { mode: FeatureMode, dim: usize },
    /// A serialized feature record does not follow `<mode> <dim> <values...>`.
    #[error("malformed feature record: {0}")]
    MalformedRecord(String),

    // ---- index persistence ----------------------------------------------
    /// The index file declares a format version this build does not read.
    #[error("unsupported index format version {0} (this build reads version 1)")]
    UnsupportedVersion(u32),
    /// The index header or an entry line is structurally invalid.
    #[error("malformed index file: {0}")]
    MalformedIndex(String),
    /// The file holds fewer entry lines than the header declares.
    #[error("index truncated: header declares {declared} entries, found {found}")]
    TruncatedIndex { declared: usize, found: usize },
    /// `query` was asked for zero results.
    #[error("top-k must be at least 1")]
    InvalidTopK,
    /// Decoding or feature extraction failed for one database image.
    #[error("failed to process `{path}`: {source}")]
    ImageLoad {
        path: String,
        #[source]
        source: Box<Error>,
    },

    // ---- evaluation ------------------------------------------------------
    /// Evaluation over an index with no entries.
    #[error("evaluation requires a non-empty index")]
    EmptyIndex,
    /// A retrieval cutoff outside `1..=index size`.
    #[error("invalid cutoff n={n} for {size} ranked entries")]
    InvalidCutoff { n: usize, size: usize },

    // ---- plumbing --------------------------------------------------------
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
