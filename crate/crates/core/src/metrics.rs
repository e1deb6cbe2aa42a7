//! Tree-level redundancy statistics.
//!
//! Columns: depth `D` (most internal nodes on a root-leaf path), node count
//! `#N` (all nodes), path count `#P`, `%R` share of explanation-redundant
//! paths, `%C` share of feature space covered by redundant paths, and over
//! redundant paths only the min/max/mean share of literals dropped by the
//! extracted PI-explanation (`%m`, `%M`, `%avg`). Percentages are exact
//! rationals; display values are truncated toward zero.

use std::path::PathBuf;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::count::path_point_count;
use crate::format::load_tree;
use crate::tree::DecisionTree;
use crate::xplain::{is_path_redundant, one_pi_explanation_path};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathDetail {
    pub path: String,
    pub class: String,
    /// `|L(p)|`
    pub literals: usize,
    /// Size of the extracted PI-explanation.
    pub explanation: usize,
    pub redundant: bool,
    /// Points of feature space following this path.
    pub points: BigUint,
}

impl PathDetail {
    /// `100 * (|L(p)| - |E(p)|) / |L(p)|`, zero for an empty path.
    pub fn redundant_literal_pct(&self) -> BigRational {
        if self.literals == 0 {
            return BigRational::zero();
        }
        pct(
            BigInt::from(self.literals - self.explanation),
            BigInt::from(self.literals),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralStats {
    pub min: BigRational,
    pub max: BigRational,
    pub mean: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeReport {
    pub name: String,
    pub depth: usize,
    pub nodes: usize,
    pub paths: usize,
    pub redundant_paths: usize,
    pub pct_redundant: BigRational,
    pub pct_coverage: BigRational,
    /// Absent when no path is redundant.
    pub literal_stats: Option<LiteralStats>,
    pub details: Vec<PathDetail>,
}

fn pct(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num * BigInt::from(100), den)
}

/// Truncates a non-negative percentage to an integer for display.
pub fn display_pct(p: &BigRational) -> u64 {
    p.to_integer().to_u64().unwrap_or(u64::MAX)
}

fn exact(p: &BigRational) -> String {
    if p.is_integer() {
        p.numer().to_string()
    } else {
        format!("{}/{}", p.numer(), p.denom())
    }
}

fn pct_json(p: &BigRational) -> Value {
    json!({"exact": exact(p), "display": display_pct(p)})
}

/// Runs the redundancy test and one extraction on every path.
pub fn tree_report(name: &str, tree: &DecisionTree) -> TreeReport {
    let space = tree.space();
    let paths = tree.paths();
    let details: Vec<PathDetail> = paths
        .iter()
        .map(|p| {
            let redundancy = is_path_redundant(tree, p).expect("path from this tree");
            let explanation = one_pi_explanation_path(tree, p).expect("path from this tree");
            debug_assert_eq!(redundancy.redundant, explanation.literals.len() < p.len());
            PathDetail {
                path: p.name.clone(),
                class: tree.classes()[p.prediction].clone(),
                literals: p.len(),
                explanation: explanation.literals.len(),
                redundant: redundancy.redundant,
                points: path_point_count(space, &p.literals),
            }
        })
        .collect();

    let redundant: Vec<&PathDetail> = details.iter().filter(|d| d.redundant).collect();
    let covered: BigUint = redundant.iter().map(|d| d.points.clone()).sum();
    let literal_stats = if redundant.is_empty() {
        None
    } else {
        let shares: Vec<BigRational> = redundant.iter().map(|d| d.redundant_literal_pct()).collect();
        let sum: BigRational = shares.iter().cloned().sum();
        Some(LiteralStats {
            min: shares.iter().min().unwrap().clone(),
            max: shares.iter().max().unwrap().clone(),
            mean: sum / BigRational::from_integer(BigInt::from(shares.len())),
        })
    };

    TreeReport {
        name: name.to_string(),
        depth: tree.depth(),
        nodes: tree.node_count(),
        paths: details.len(),
        redundant_paths: redundant.len(),
        pct_redundant: pct(BigInt::from(redundant.len()), BigInt::from(details.len())),
        pct_coverage: pct(BigInt::from(covered), BigInt::from(space.point_count())),
        literal_stats,
        details,
    }
}

impl TreeReport {
    pub fn to_json(&self) -> Value {
        let stats = match &self.literal_stats {
            Some(s) => json!({"min": pct_json(&s.min), "max": pct_json(&s.max), "avg": pct_json(&s.mean)}),
            None => Value::Null,
        };
        let details: Vec<Value> = self
            .details
            .iter()
            .map(|d| {
                json!({
                    "path": d.path,
                    "class": d.class,
                    "literals": d.literals,
                    "explanation": d.explanation,
                    "redundant": d.redundant,
                    "points": d.points.to_string(),
                })
            })
            .collect();
        json!({
            "tree": self.name,
            "depth": self.depth,
            "nodes": self.nodes,
            "paths": self.paths,
            "redundant_paths": self.redundant_paths,
            "pct_redundant": pct_json(&self.pct_redundant),
            "pct_coverage": pct_json(&self.pct_coverage),
            "redundant_literals": stats,
            "details": details,
        })
    }
}

#[derive(Debug, Clone)]
pub struct BatchRow {
    pub source: String,
    pub outcome: Result<TreeReport, String>,
}

/// One row per input, in input order.
#[derive(Debug, Clone, Default)]
pub struct BatchReport {
    pub rows: Vec<BatchRow>,
}

/// Loads and reports on each tree file. Unreadable or invalid files become
/// error rows; the other rows are unaffected.
pub fn batch_report(files: &[PathBuf]) -> BatchReport {
    let rows = files
        .iter()
        .map(|file| {
            let source = file.display().to_string();
            let name = file
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| source.clone());
            let outcome = load_tree(file)
                .map(|tree| tree_report(&name, &tree))
                .map_err(|e| e.to_string());
            BatchRow { source, outcome }
        })
        .collect();
    BatchReport { rows }
}

const DASH: &str = "—";

impl BatchReport {
    pub fn reports(&self) -> impl Iterator<Item = &TreeReport> {
        self.rows.iter().filter_map(|r| r.outcome.as_ref().ok())
    }

    pub fn errors(&self) -> impl Iterator<Item = (&str, &str)> {
        self.rows
            .iter()
            .filter_map(|r| r.outcome.as_ref().err().map(|e| (r.source.as_str(), e.as_str())))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| match &r.outcome {
                    Ok(report) => report.to_json(),
                    Err(e) => json!({"source": r.source, "error": e}),
                })
                .collect(),
        )
    }

    /// Aligned text table with a trailing row of column means.
    pub fn to_text(&self) -> String {
        let header = ["tree", "D", "#N", "#P", "%R", "%C", "%m", "%M", "%avg"];
        let mut table: Vec<Vec<String>> = vec![header.iter().map(|h| h.to_string()).collect()];
        for r in self.reports() {
            let stat = |f: fn(&LiteralStats) -> &BigRational| {
                r.literal_stats
                    .as_ref()
                    .map(|s| display_pct(f(s)).to_string())
                    .unwrap_or_else(|| DASH.to_string())
            };
            table.push(vec![
                r.name.clone(),
                r.depth.to_string(),
                r.nodes.to_string(),
                r.paths.to_string(),
                display_pct(&r.pct_redundant).to_string(),
                display_pct(&r.pct_coverage).to_string(),
                stat(|s| &s.min),
                stat(|s| &s.max),
                stat(|s| &s.mean),
            ]);
        }
        let reports: Vec<&TreeReport> = self.reports().collect();
        if reports.len() > 1 {
            let mean = |vals: Vec<BigRational>| {
                if vals.is_empty() {
                    return DASH.to_string();
                }
                let n = BigRational::from_integer(BigInt::from(vals.len()));
                display_pct(&(vals.into_iter().sum::<BigRational>() / n)).to_string()
            };
            let stats: Vec<&LiteralStats> = reports.iter().filter_map(|r| r.literal_stats.as_ref()).collect();
            table.push(vec![
                "mean".into(),
                String::new(),
                String::new(),
                String::new(),
                mean(reports.iter().map(|r| r.pct_redundant.clone()).collect()),
                mean(reports.iter().map(|r| r.pct_coverage.clone()).collect()),
                mean(stats.iter().map(|s| s.min.clone()).collect()),
                mean(stats.iter().map(|s| s.max.clone()).collect()),
                mean(stats.iter().map(|s| s.mean.clone()).collect()),
            ]);
        }

        let widths: Vec<usize> = (0..header.len())
            .map(|c| table.iter().map(|row| row[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::from("# D = most internal nodes on a root-leaf path, #N = all nodes\n");
        for row in &table {
            let cells: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(c, cell)| {
                    let pad = widths[c] - cell.chars().count();
                    if c == 0 {
                        format!("{cell}{}", " ".repeat(pad))
                    } else {
                        format!("{}{cell}", " ".repeat(pad))
                    }
                })
                .collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        for (source, err) in self.errors() {
            out.push_str(&format!("error: {source}: {err}\n"));
        }
        out
    }
}
