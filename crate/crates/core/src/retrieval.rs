//! Feature index: build from a manifest, persist as text, and rank by the
//! d1 distance.
//!
//! The d1 distance between vectors f and g is
//! `sum_i |(f_i - g_i) / (1 + f_i + g_i)|` — an absolute difference per
//! dimension, damped by the shared magnitude. Ranking is a full linear scan
//! sorted by `(distance, image_id)` so repeated runs produce identical
//! orders even under distance ties.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::features::{extract, FeatureMode, FeatureVector};
use crate::image_io::{decode_image, DatasetManifest};
use crate::lbp::LbpParams;

/// One indexed image: id, relevance group, and stored descriptor.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexEntry {
    image_id: String,
    group_label: String,
    vector: FeatureVector,
}

impl IndexEntry {
    /// Ids and labels must be non-empty and free of tabs and line breaks,
    /// which delimit the on-disk format.
    pub fn new(image_id: String, group_label: String, vector: FeatureVector) -> Result<Self> {
        for (what, s) in [("image id", &image_id), ("group label", &group_label)] {
            if s.is_empty() {
                return Err(Error::MalformedRecord(format!("empty {what}")));
            }
            if s.contains(['\t', '\n', '\r']) {
                return Err(Error::MalformedRecord(format!(
                    "{what} `{}` contains a tab or line break",
                    s.escape_default()
                )));
            }
        }
        Ok(Self {
            image_id,
            group_label,
            vector,
        })
    }

    pub fn image_id(&self) -> &str {
        &self.image_id
    }

    pub fn group_label(&self) -> &str {
        &self.group_label
    }

    pub fn vector(&self) -> &FeatureVector {
        &self.vector
    }
}

/// An immutable collection of descriptors sharing one mode and parameter
/// set, with unique image ids.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureIndex {
    mode: FeatureMode,
    params: LbpParams,
    entries: Vec<IndexEntry>,
}

impl FeatureIndex {
    pub fn new(mode: FeatureMode, params: LbpParams, entries: Vec<IndexEntry>) -> Result<Self> {
        let expected = expected_dim(mode, &params);
        let mut seen = std::collections::HashSet::new();
        for e in &entries {
            if e.vector.mode() != mode {
                return Err(Error::ModeMismatch {
                    expected: mode,
                    found: e.vector.mode(),
                });
            }
            if e.vector.dim() != expected {
                return Err(Error::DimensionMismatch {
                    expected,
                    found: e.vector.dim(),
                });
            }
            if !seen.insert(e.image_id.as_str()) {
                return Err(Error::DuplicateImageId(e.image_id.clone()));
            }
        }
        Ok(Self {
            mode,
            params,
            entries,
        })
    }

    pub fn mode(&self) -> FeatureMode {
        self.mode
    }

    pub fn params(&self) -> LbpParams {
        self.params
    }

    pub fn entries(&self) -> &[IndexEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Vector length every entry carries.
    pub fn dim(&self) -> usize {
        expected_dim(self.mode, &self.params)
    }

    /// Group labels in order of first appearance.
    pub fn groups(&self) -> Vec<&str> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for e in &self.entries {
            if seen.insert(e.group_label.as_str()) {
                out.push(e.group_label.as_str());
            }
        }
        out
    }

    /// Number of entries sharing a group label.
    pub fn group_size(&self, label: &str) -> usize {
        self.entries
            .iter()
            .filter(|e| e.group_label == label)
            .count()
    }
}

fn expected_dim(mode: FeatureMode, params: &LbpParams) -> usize {
    match mode {
        FeatureMode::Lbp => params.bins(),
        FeatureMode::Gmlbp => 9 * 256,
        FeatureMode::Hu => 7,
        FeatureMode::Combined => 9 * 256 + 7,
    }
}

/// One ranked hit.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedMatch {
    image_id: String,
    group_label: String,
    distance: f64,
}

impl RankedMatch {
    pub fn image_id(&self) -> &str {
        &self.image_id
    }

    pub fn group_label(&self) -> &str {
        &self.group_label
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }
}

/// Matches sorted by ascending distance, ties broken by ascending image id.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedResult {
    matches: Vec<RankedMatch>,
}

impl RankedResult {
    pub fn matches(&self) -> &[RankedMatch] {
        &self.matches
    }

    pub fn len(&self) -> usize {
        self.matches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matches.is_empty()
    }
}

/// The raw d1 sum over two equal-length slices.
pub fn d1(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let diff = y - x;
            // equal coordinates contribute exactly 0, even where the
            // denominator would vanish; the (x + y) grouping keeps the
            // denominator bitwise identical under argument swap
            if diff == 0.0 {
                0.0
            } else {
                (diff / (1.0 + (x + y))).abs()
            }
        })
        .sum()
}

/// d1 over two feature vectors; they must agree on mode and length.
pub fn d1_distance(q: &FeatureVector, t: &FeatureVector) -> Result<f64> {
    if q.mode() != t.mode() {
        return Err(Error::ModeMismatch {
            expected: q.mode(),
            found: t.mode(),
        });
    }
    if q.dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: q.dim(),
            found: t.dim(),
        });
    }
    Ok(d1(q.values(), t.values()))
}

/// Extracts a descriptor for every manifest row, in manifest order.
/// Relative image paths resolve against `root`. Any decode or extraction
/// failure aborts the build, naming the offending file.
pub fn build_index(
    manifest: &DatasetManifest,
    root: &Path,
    mode: FeatureMode,
    params: &LbpParams,
    hu_weight: f64,
) -> Result<FeatureIndex> {
    let mut entries = Vec::with_capacity(manifest.len());
    for row in manifest.entries() {
        let path = root.join(&row.path);
        let vector = std::fs::read(&path)
            .map_err(Error::from)
            .and_then(|bytes| decode_image(&bytes))
            .and_then(|image| extract(&image, mode, params, hu_weight))
            .map_err(|e| Error::ImageLoad {
                path: path.display().to_string(),
                source: Box::new(e),
            })?;
        entries.push(IndexEntry::new(
            row.image_id.clone(),
            row.group_label.clone(),
            vector,
        )?);
    }
    FeatureIndex::new(mode, *params, entries)
}

/// Ranks the whole index against `q` and keeps the best `k` matches
/// (all of them when `k` exceeds the index size).
pub fn query(index: &FeatureIndex, q: &FeatureVector, k: usize) -> Result<RankedResult> {
    if k < 1 {
        return Err(Error::InvalidTopK);
    }
    if q.mode() != index.mode {
        return Err(Error::ModeMismatch {
            expected: index.mode,
            found: q.mode(),
        });
    }
    if q.dim() != index.dim() {
        return Err(Error::DimensionMismatch {
            expected: index.dim(),
            found: q.dim(),
        });
    }
    let mut matches: Vec<RankedMatch> = index
        .entries
        .iter()
        .map(|e| RankedMatch {
            image_id: e.image_id.clone(),
            group_label: e.group_label.clone(),
            distance: d1(q.values(), e.vector.values()),
        })
        .collect();
    matches.sort_by(|a, b| {
        a.distance
            .total_cmp(&b.distance)
            .then_with(|| a.image_id.cmp(&b.image_id))
    });
    matches.truncate(k);
    Ok(RankedResult { matches })
}

/// Writes the index as versioned UTF-8 text:
/// a `CBIRIDX 1 <mode> <P> <R> <dim> <count>` header, then one
/// `<id>\t<group>\t<values>` line per entry, LF-terminated.
pub fn save_index<W: Write>(index: &FeatureIndex, sink: &mut W) -> Result<()> {
    writeln!(
        sink,
        "CBIRIDX 1 {} {} {} {} {}",
        index.mode,
        index.params.neighbors(),
        index.params.radius(),
        index.dim(),
        index.len()
    )?;
    for e in &index.entries {
        write!(sink, "{}\t{}\t", e.image_id, e.group_label)?;
        let mut first = true;
        for v in e.vector.values() {
            if !first {
                sink.write_all(b" ")?;
            }
            write!(sink, "{v}")?;
            first = false;
        }
        sink.write_all(b"\n")?;
    }
    Ok(())
}

/// Parses text written by [`save_index`]; `load_index(save_index(x)) == x`.
pub fn load_index(text: &str) -> Result<FeatureIndex> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::MalformedIndex("empty file".into()))?;
    let fields: Vec<&str> = header.split(' ').collect();
    if fields.len() != 7 || fields[0] != "CBIRIDX" {
        return Err(Error::MalformedIndex(format!(
            "bad header `{header}` (expected `CBIRIDX <version> <mode> <P> <R> <dim> <count>`)"
        )));
    }
    let version: u32 = fields[1]
        .parse()
        .map_err(|_| Error::MalformedIndex(format!("bad version `{}`", fields[1])))?;
    if version != 1 {
        return Err(Error::UnsupportedVersion(version));
    }
    let mode: FeatureMode = fields[2].parse()?;
    let neighbors: u32 = fields[3]
        .parse()
        .map_err(|_| Error::MalformedIndex(format!("bad neighbor count `{}`", fields[3])))?;
    let radius: f64 = fields[4]
        .parse()
        .map_err(|_| Error::MalformedIndex(format!("bad radius `{}`", fields[4])))?;
    let params = LbpParams::new(neighbors, radius)?;
    let dim: usize = fields[5]
        .parse()
        .map_err(|_| Error::MalformedIndex(format!("bad dimension `{}`", fields[5])))?;
    if dim != expected_dim(mode, &params) {
        return Err(Error::MalformedIndex(format!(
            "dimension {dim} does not match mode {mode} with P={neighbors}"
        )));
    }
    let count: usize = fields[6]
        .parse()
        .map_err(|_| Error::MalformedIndex(format!("bad entry count `{}`", fields[6])))?;

    let mut entries = Vec::with_capacity(count);
    for line in lines {
        if entries.len() == count {
            return Err(Error::MalformedIndex(format!(
                "data after the {count} declared entries"
            )));
        }
        let line_no = entries.len() + 2;
        let mut parts = line.splitn(3, '\t');
        let (id, group, data) = match (parts.next(), parts.next(), parts.next()) {
            (Some(i), Some(g), Some(d)) => (i, g, d),
            _ => {
                return Err(Error::MalformedIndex(format!(
                    "line {line_no}: expected `<id>\\t<group>\\t<values>`"
                )));
            }
        };
        let values = data
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>().map_err(|_| {
                    Error::MalformedIndex(format!("line {line_no}: bad value `{t}`"))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: values.len(),
            });
        }
        entries.push(IndexEntry::new(
            id.to_string(),
            group.to_string(),
            FeatureVector::new(mode, values)?,
        )?);
    }
    if entries.len() < count {
        return Err(Error::TruncatedIndex {
            declared: count,
            found: entries.len(),
        });
    }
    FeatureIndex::new(mode, params, entries)
}
