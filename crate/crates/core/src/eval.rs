//! Retrieval quality metrics under the query-in-database protocol: every
//! indexed image queries the full index (itself included), per-query
//! precision and recall are averaged within each group, and the group means
//! are averaged into ARP (average retrieval precision, in percent) and ARR
//! (average retrieval rate, a fraction) per cutoff n.

use crate::error::{Error, Result};
use crate::features::FeatureMode;
use crate::lbp::LbpParams;
use crate::retrieval::{query, FeatureIndex, RankedResult};

/// Precision of the top `n` entries against the query's group, in percent.
pub fn precision_at(result: &RankedResult, query_group: &str, n: usize) -> Result<f64> {
    let relevant = relevant_in_top(result, query_group, n)?;
    Ok(100.0 * relevant as f64 / n as f64)
}

/// Fraction of the query's group retrieved within the top `n` entries.
pub fn recall_at(result: &RankedResult, query_group: &str, group_size: usize, n: usize) -> Result<f64> {
    assert!(group_size >= 1, "a relevance group cannot be empty");
    let relevant = relevant_in_top(result, query_group, n)?;
    Ok(relevant as f64 / group_size as f64)
}

fn relevant_in_top(result: &RankedResult, query_group: &str, n: usize) -> Result<usize> {
    if n < 1 || n > result.len() {
        return Err(Error::InvalidCutoff {
            n,
            size: result.len(),
        });
    }
    Ok(result.matches()[..n]
        .iter()
        .filter(|m| m.group_label() == query_group)
        .count())
}

/// Precision and recall of one query at one cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryOutcome {
    image_id: String,
    precision: f64,
    recall: f64,
}

impl QueryOutcome {
    pub fn image_id(&self) -> &str {
        &self.image_id
    }

    pub fn precision(&self) -> f64 {
        self.precision
    }

    pub fn recall(&self) -> f64 {
        self.recall
    }
}

/// One group's outcomes at one cutoff: the per-query values and their means.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupRow {
    label: String,
    gp: f64,
    gr: f64,
    queries: Vec<QueryOutcome>,
}

impl GroupRow {
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Group precision: mean per-query precision, percent.
    pub fn gp(&self) -> f64 {
        self.gp
    }

    /// Group recall: mean per-query recall, fraction.
    pub fn gr(&self) -> f64 {
        self.gr
    }

    /// The retained per-query values the means were computed from.
    pub fn queries(&self) -> &[QueryOutcome] {
        &self.queries
    }
}

/// All metrics at one cutoff n.
#[derive(Debug, Clone, PartialEq)]
pub struct NRow {
    n: usize,
    arp: f64,
    arr: f64,
    groups: Vec<GroupRow>,
}

impl NRow {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Average retrieval precision: mean group precision, percent.
    pub fn arp(&self) -> f64 {
        self.arp
    }

    /// Average retrieval rate: mean group recall, fraction.
    pub fn arr(&self) -> f64 {
        self.arr
    }

    /// Per-group breakdown, groups in first-appearance order.
    pub fn groups(&self) -> &[GroupRow] {
        &self.groups
    }
}

/// Full evaluation outcome: one row per requested cutoff, ascending, plus
/// the protocol metadata needed to reproduce the run.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    mode: FeatureMode,
    params: LbpParams,
    db_size: usize,
    group_sizes: Vec<(String, usize)>,
    rows: Vec<NRow>,
}

impl EvalReport {
    pub fn mode(&self) -> FeatureMode {
        self.mode
    }

    pub fn params(&self) -> LbpParams {
        self.params
    }

    pub fn db_size(&self) -> usize {
        self.db_size
    }

    /// Group labels and sizes in first-appearance order.
    pub fn group_sizes(&self) -> &[(String, usize)] {
        &self.group_sizes
    }

    pub fn rows(&self) -> &[NRow] {
        &self.rows
    }

    /// `n,arp_percent,arr` CSV, one row per cutoff.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("n,arp_percent,arr\n");
        for row in &self.rows {
            out.push_str(&format!("{},{},{}\n", row.n, row.arp, row.arr));
        }
        out
    }

    /// `n,group,gp_percent,gr` CSV with the per-group breakdown.
    pub fn groups_csv(&self) -> String {
        let mut out = String::from("n,group,gp_percent,gr\n");
        for row in &self.rows {
            for g in &row.groups {
                out.push_str(&format!("{},{},{},{}\n", row.n, g.label, g.gp, g.gr));
            }
        }
        out
    }

    /// Fixed-width text table: a metadata line, then ARP and ARR across all
    /// cutoffs.
    pub fn render_table(&self) -> String {
        let sizes = self
            .group_sizes
            .iter()
            .map(|(label, size)| format!("{label}={size}"))
            .collect::<Vec<_>>()
            .join(" ");
        let mut out = format!(
            "mode={} P={} R={} images={} groups={} ({})\n",
            self.mode,
            self.params.neighbors(),
            self.params.radius(),
            self.db_size,
            self.group_sizes.len(),
            sizes
        );
        let mut header = format!("{:<8}", "metric");
        let mut arp_line = format!("{:<8}", "ARP (%)");
        let mut arr_line = format!("{:<8}", "ARR");
        for row in &self.rows {
            header.push_str(&format!("{:>9}", format!("n={}", row.n)));
            arp_line.push_str(&format!("{:>9.2}", row.arp));
            arr_line.push_str(&format!("{:>9.4}", row.arr));
        }
        out.push_str(&header);
        out.push('\n');
        out.push_str(&arp_line);
        out.push('\n');
        out.push_str(&arr_line);
        out.push('\n');
        out
    }
}

fn mean(values: impl ExactSizeIterator<Item = f64>) -> f64 {
    let count = values.len() as f64;
    values.sum::<f64>() / count
}

/// Runs the query-in-database protocol over the whole index at each
/// requested cutoff. Cutoffs are deduplicated and reported in ascending
/// order; each must lie in `1..=index size`.
pub fn evaluate(index: &FeatureIndex, n_values: &[usize]) -> Result<EvalReport> {
    if index.is_empty() {
        return Err(Error::EmptyIndex);
    }
    let size = index.len();
    let mut cutoffs = n_values.to_vec();
    cutoffs.sort_unstable();
    cutoffs.dedup();
    for &n in &cutoffs {
        if n < 1 || n > size {
            return Err(Error::InvalidCutoff { n, size });
        }
    }

    let rankings: Vec<RankedResult> = index
        .entries()
        .iter()
        .map(|e| query(index, e.vector(), size))
        .collect::<Result<_>>()?;

    let groups: Vec<String> = index.groups().into_iter().map(String::from).collect();
    let group_sizes: Vec<(String, usize)> = groups
        .iter()
        .map(|g| (g.clone(), index.group_size(g)))
        .collect();

    let mut rows = Vec::with_capacity(cutoffs.len());
    for &n in &cutoffs {
        let mut group_rows = Vec::with_capacity(groups.len());
        for (label, group_size) in &group_sizes {
            let mut queries = Vec::with_capacity(*group_size);
            for (entry, ranking) in index.entries().iter().zip(&rankings) {
                if entry.group_label() != label {
                    continue;
                }
                queries.push(QueryOutcome {
                    image_id: entry.image_id().to_string(),
                    precision: precision_at(ranking, label, n)?,
                    recall: recall_at(ranking, label, *group_size, n)?,
                });
            }
            let gp = mean(queries.iter().map(|q| q.precision));
            let gr = mean(queries.iter().map(|q| q.recall));
            group_rows.push(GroupRow {
                label: label.clone(),
                gp,
                gr,
                queries,
            });
        }
        let arp = mean(group_rows.iter().map(|g| g.gp));
        let arr = mean(group_rows.iter().map(|g| g.gr));
        rows.push(NRow {
            n,
            arp,
            arr,
            groups: group_rows,
        });
    }

    Ok(EvalReport {
        mode: index.mode(),
        params: index.params(),
        db_size: size,
        group_sizes,
        rows,
    })
}
