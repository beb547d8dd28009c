use serde::{Deserialize, Serialize};

use super::stats::{ols, RegressionReport};
use crate::distance::{CitationDistanceTable, DistanceKind};
use crate::error::{Error, Result};
use crate::linkpred::compute_auc;

pub const DEFAULT_BIN_COUNT: usize = 20;
/// A bin needs at least this many positives and as many negatives to carry an AUC.
pub const MIN_EDGES_PER_CLASS: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BinSpec {
    Count(usize),
    Width(f64),
}

impl Default for BinSpec {
    fn default() -> Self {
        BinSpec::Count(DEFAULT_BIN_COUNT)
    }
}

/// Equal-width bins over a finite range; the top edge belongs to the last bin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinLayout {
    pub low: f64,
    pub width: f64,
    pub count: usize,
}

impl BinLayout {
    /// Spans `[min, max]` of `values`. A zero-width range becomes a unit-wide
    /// window centred on the single value.
    pub fn cover(values: &[f64], spec: BinSpec) -> Result<Self> {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !min.is_finite() || !max.is_finite() {
            return Err(Error::InsufficientData("no finite distances to bin".into()));
        }
        let (low, range) = if max > min { (min, max - min) } else { (min - 0.5, 1.0) };
        let (width, count) = match spec {
            BinSpec::Count(0) => return Err(Error::InvalidConfig("bin count must be >= 1".into())),
            BinSpec::Count(c) => (range / c as f64, c),
            BinSpec::Width(w) if w > 0.0 && w.is_finite() => (w, ((range / w).ceil() as usize).max(1)),
            BinSpec::Width(w) => return Err(Error::InvalidConfig(format!("bin width must be positive, got {w}"))),
        };
        Ok(BinLayout { low, width, count })
    }

    pub fn index(&self, x: f64) -> usize {
        let i = ((x - self.low) / self.width).floor();
        (i.max(0.0) as usize).min(self.count - 1)
    }

    pub fn bounds(&self, i: usize) -> (f64, f64) {
        (self.low + i as f64 * self.width, self.low + (i + 1) as f64 * self.width)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceBin {
    pub low: f64,
    pub high: f64,
    pub n_pos: usize,
    pub n_neg: usize,
    /// Present only when the bin meets the 25/25 rule.
    pub auc: Option<f64>,
}

impl DistanceBin {
    pub fn midpoint(&self) -> f64 {
        (self.low + self.high) / 2.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinnedAuc {
    pub kind: DistanceKind,
    pub width: f64,
    pub bins: Vec<DistanceBin>,
    /// Rows left out because their distance is undefined.
    pub unreachable: usize,
}

impl BinnedAuc {
    pub fn qualifying(&self) -> impl Iterator<Item = &DistanceBin> {
        self.bins.iter().filter(|b| b.auc.is_some())
    }

    /// True when no bin satisfied the 25/25 rule.
    pub fn is_empty_curve(&self) -> bool {
        self.qualifying().next().is_none()
    }
}

/// Per-bin AUC over equal-width distance bins.
pub fn binned_auc(t: &CitationDistanceTable, spec: BinSpec) -> Result<BinnedAuc> {
    let finite: Vec<_> = t.rows.iter().filter_map(|r| r.distance.map(|d| (d, r))).collect();
    let unreachable = t.rows.len() - finite.len();
    if finite.is_empty() {
        return Ok(BinnedAuc {
            kind: t.kind,
            width: 0.0,
            bins: Vec::new(),
            unreachable,
        });
    }
    let distances: Vec<f64> = finite.iter().map(|(d, _)| *d).collect();
    let layout = BinLayout::cover(&distances, spec)?;
    let mut members: Vec<(Vec<f64>, Vec<bool>)> = vec![(Vec::new(), Vec::new()); layout.count];
    for (d, r) in &finite {
        let m = &mut members[layout.index(*d)];
        m.0.push(r.score);
        m.1.push(r.positive);
    }
    let bins = members
        .into_iter()
        .enumerate()
        .map(|(i, (scores, labels))| {
            let (low, high) = layout.bounds(i);
            let n_pos = labels.iter().filter(|&&l| l).count();
            let n_neg = labels.len() - n_pos;
            let auc = if n_pos >= MIN_EDGES_PER_CLASS && n_neg >= MIN_EDGES_PER_CLASS {
                Some(compute_auc(&scores, &labels)?)
            } else {
                None
            };
            Ok(DistanceBin { low, high, n_pos, n_neg, auc })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BinnedAuc {
        kind: t.kind,
        width: layout.width,
        bins,
        unreachable,
    })
}

/// OLS of bin AUC on bin midpoint over the qualifying bins.
pub fn regress_auc_on_distance(curve: &BinnedAuc) -> Result<RegressionReport> {
    let (x, y): (Vec<f64>, Vec<f64>) = curve.qualifying().map(|b| (b.midpoint(), b.auc.unwrap())).unzip();
    if x.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} curve has {} qualifying bins; regression needs 3",
            curve.kind,
            x.len()
        )));
    }
    ols(&x, &y)
}

/// Share of the opposite class each row outranks (ties count one half).
/// Averaged over either class this equals the table's AUC.
pub fn edge_auc_contributions(t: &CitationDistanceTable) -> Vec<f64> {
    let sorted = |positive: bool| {
        let mut v: Vec<f64> = t.rows.iter().filter(|r| r.positive == positive).map(|r| r.score).collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let (pos, neg) = (sorted(true), sorted(false));
    // (count strictly below, count equal)
    let place = |v: &[f64], s: f64| {
        let below = v.partition_point(|&x| x < s);
        (below, v.partition_point(|&x| x <= s) - below)
    };
    t.rows
        .iter()
        .map(|r| {
            if r.positive {
                let (below, tied) = place(&neg, r.score);
                (below as f64 + 0.5 * tied as f64) / neg.len() as f64
            } else {
                let (below, tied) = place(&pos, r.score);
                (pos.len() - below - tied) as f64 / pos.len() as f64 + 0.5 * tied as f64 / pos.len() as f64
            }
        })
        .collect()
}

/// Edge-level alternative to [`regress_auc_on_distance`]: OLS of each finite
/// row's [`edge_auc_contributions`] value on its distance.
pub fn regress_edge_auc_on_distance(t: &CitationDistanceTable) -> Result<RegressionReport> {
    let n_pos = t.rows.iter().filter(|r| r.positive).count();
    if n_pos == 0 || n_pos == t.rows.len() {
        return Err(Error::SingleClass);
    }
    let (x, y): (Vec<f64>, Vec<f64>) = t
        .rows
        .iter()
        .zip(edge_auc_contributions(t))
        .filter_map(|(r, c)| r.distance.map(|d| (d, c)))
        .unzip();
    if x.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} table has {} finite rows; regression needs 3",
            t.kind,
            x.len()
        )));
    }
    ols(&x, &y)
}

/// Aligned positive and negative counts over shared equal-width bins.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceHistogram {
    pub kind: DistanceKind,
    /// `count + 1` bin boundaries.
    pub edges: Vec<f64>,
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
    pub unreachable: usize,
}

impl DistanceHistogram {
    pub fn mean(&self, positive: bool) -> f64 {
        let counts = if positive { &self.positive } else { &self.negative };
        let total: usize = counts.iter().sum();
        let weighted: f64 = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| c as f64 * (self.edges[i] + self.edges[i + 1]) / 2.0)
            .sum();
        weighted / total as f64
    }
}

pub fn distance_histograms(t: &CitationDistanceTable, n_bins: usize) -> Result<DistanceHistogram> {
    if t.rows.is_empty() {
        return Err(Error::InsufficientData("distance table is empty".into()));
    }
    let distances: Vec<f64> = t.rows.iter().filter_map(|r| r.distance).collect();
    if distances.is_empty() {
        return Err(Error::InsufficientData(format!("every {} distance is unreachable", t.kind)));
    }
    let layout = BinLayout::cover(&distances, BinSpec::Count(n_bins))?;
    let mut positive = vec![0; layout.count];
    let mut negative = vec![0; layout.count];
    for r in &t.rows {
        if let Some(d) = r.distance {
            let i = layout.index(d);
            if r.positive {
                positive[i] += 1;
            } else {
                negative[i] += 1;
            }
        }
    }
    let edges = (0..=layout.count).map(|i| layout.low + i as f64 * layout.width).collect();
    Ok(DistanceHistogram {
        kind: t.kind,
        edges,
        positive,
        negative,
        unreachable: t.unreachable_count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::DistanceRow;
    use crate::graph::Edge;
    use proptest::prelude::*;

    fn row(positive: bool, score: f64, distance: Option<f64>) -> DistanceRow {
        DistanceRow { edge: Edge::new(0, 1), positive, score, distance }
    }

    fn table(rows: Vec<DistanceRow>) -> CitationDistanceTable {
        CitationDistanceTable { kind: DistanceKind::Network, rows }
    }

    #[test]
    fn single_qualifying_bin_equals_global_auc() {
        let rows: Vec<_> = (0..60).map(|i| row(i % 2 == 0, (i * 7 % 13) as f64, Some(0.3))).collect();
        let t = table(rows.clone());
        let c = binned_auc(&t, BinSpec::Count(1)).unwrap();
        let scores: Vec<f64> = rows.iter().map(|r| r.score).collect();
        let labels: Vec<bool> = rows.iter().map(|r| r.positive).collect();
        assert_eq!(c.bins.len(), 1);
        assert_eq!(c.bins[0].auc, Some(compute_auc(&scores, &labels).unwrap()));
    }

    #[test]
    fn twenty_four_positives_suppress_the_bin() {
        let mut rows: Vec<_> = (0..24).map(|i| row(true, i as f64, Some(1.0))).collect();
        rows.extend((0..30).map(|i| row(false, i as f64, Some(1.0))));
        let c = binned_auc(&table(rows.clone()), BinSpec::Count(1)).unwrap();
        assert_eq!((c.bins[0].n_pos, c.bins[0].n_neg, c.bins[0].auc), (24, 30, None));
        assert!(c.is_empty_curve());
        rows.push(row(true, 0.5, Some(1.0)));
        assert!(binned_auc(&table(rows), BinSpec::Count(1)).unwrap().bins[0].auc.is_some());
    }

    #[test]
    fn two_bins_by_pair_counting() {
        let mut rows = Vec::new();
        // low bin: every positive beats every negative
        rows.extend((0..25).map(|i| row(true, 100.0 + i as f64, Some(0.0))));
        rows.extend((0..25).map(|i| row(false, i as f64, Some(0.1))));
        // high bin: positives and negatives interleave, 25 pos scores 0,2,..; neg 1,3,..
        rows.extend((0..25).map(|i| row(true, 2.0 * i as f64, Some(0.9))));
        rows.extend((0..25).map(|i| row(false, 2.0 * i as f64 + 1.0, Some(1.0))));
        let c = binned_auc(&table(rows), BinSpec::Count(2)).unwrap();
        assert_eq!(c.bins[0].auc, Some(1.0));
        // pos 2i beats neg 2j+1 iff i > j: 300 of 625 pairs
        assert_eq!(c.bins[1].auc, Some(300.0 / 625.0));
        assert_eq!((c.bins[0].low, c.bins[1].high), (0.0, 1.0));
    }

    #[test]
    fn unreachable_rows_are_counted_not_binned() {
        let rows = vec![row(true, 0.2, None), row(false, 0.1, Some(2.0)), row(true, 0.3, Some(3.0))];
        let c = binned_auc(&table(rows), BinSpec::Width(0.5)).unwrap();
        assert_eq!(c.unreachable, 1);
        assert_eq!(c.bins.len(), 2);
        let all_none = table(vec![row(true, 0.2, None)]);
        assert!(binned_auc(&all_none, BinSpec::Count(3)).unwrap().bins.is_empty());
        assert!(distance_histograms(&all_none, 3).is_err());
    }

    #[test]
    fn histograms_of_a_single_value() {
        let rows = vec![row(true, 0.0, Some(4.0)), row(false, 0.0, Some(4.0)), row(false, 0.0, Some(4.0))];
        let h = distance_histograms(&table(rows), 5).unwrap();
        assert_eq!(h.positive.iter().filter(|&&c| c > 0).count(), 1);
        assert_eq!(h.negative.iter().filter(|&&c| c > 0).count(), 1);
        assert_eq!((h.positive.iter().sum::<usize>(), h.negative.iter().sum::<usize>()), (1, 2));
    }

    #[test]
    fn regression_needs_three_bins() {
        let curve = |aucs: &[f64]| BinnedAuc {
            kind: DistanceKind::Network,
            width: 1.0,
            bins: aucs
                .iter()
                .enumerate()
                .map(|(i, &a)| DistanceBin { low: i as f64, high: i as f64 + 1.0, n_pos: 30, n_neg: 30, auc: Some(a) })
                .collect(),
            unreachable: 0,
        };
        assert!(regress_auc_on_distance(&curve(&[0.9, 0.8])).is_err());
        let r = regress_auc_on_distance(&curve(&[0.9, 0.8, 0.7, 0.6])).unwrap();
        assert!((r.slope + 0.1).abs() < 1e-12);
    }

    #[test]
    fn edge_contributions_average_to_auc() {
        let rows: Vec<_> = (0..40).map(|i| row(i % 3 == 0, (i * 5 % 11) as f64, Some(i as f64))).collect();
        let t = table(rows);
        let c = edge_auc_contributions(&t);
        let scores: Vec<f64> = t.rows.iter().map(|r| r.score).collect();
        let labels: Vec<bool> = t.rows.iter().map(|r| r.positive).collect();
        let auc = compute_auc(&scores, &labels).unwrap();
        for class in [true, false] {
            let v: Vec<f64> = c.iter().zip(&labels).filter(|(_, &l)| l == class).map(|(x, _)| *x).collect();
            assert!((v.iter().sum::<f64>() / v.len() as f64 - auc).abs() < 1e-12);
        }
    }

    #[test]
    fn edge_regression_sees_decline() {
        // positives outrank negatives at short distance and lose at long distance
        let mut rows = Vec::new();
        for i in 0..50 {
            let d = i as f64 / 10.0;
            rows.push(row(true, 5.0 - d, Some(d)));
            rows.push(row(false, d, Some(d)));
        }
        let r = regress_edge_auc_on_distance(&table(rows)).unwrap();
        assert!(r.slope < 0.0 && r.significant_5pct);
        assert!(regress_edge_auc_on_distance(&table(vec![row(true, 0.0, Some(1.0))])).is_err());
    }

    proptest! {
        #[test]
        fn bins_partition_finite_rows(
            data in prop::collection::vec((any::<bool>(), 0.0f64..1.0, prop::option::of(0.0f64..5.0)), 1..300),
            spec_count in 1usize..30,
        ) {
            let rows: Vec<_> = data.iter().map(|&(p, s, d)| row(p, s, d)).collect();
            let t = table(rows);
            let c = binned_auc(&t, BinSpec::Count(spec_count)).unwrap();
            let finite_pos = t.rows.iter().filter(|r| r.distance.is_some() && r.positive).count();
            let finite_neg = t.rows.iter().filter(|r| r.distance.is_some() && !r.positive).count();
            prop_assert_eq!(c.bins.iter().map(|b| b.n_pos).sum::<usize>(), finite_pos);
            prop_assert_eq!(c.bins.iter().map(|b| b.n_neg).sum::<usize>(), finite_neg);
            prop_assert_eq!(c.unreachable, t.rows.len() - finite_pos - finite_neg);
            for b in &c.bins {
                prop_assert_eq!(b.auc.is_some(), b.n_pos >= MIN_EDGES_PER_CLASS && b.n_neg >= MIN_EDGES_PER_CLASS);
            }
            for w in c.bins.windows(2) {
                prop_assert!((w[0].high - w[1].low).abs() < 1e-12);
            }
        }
    }
}
