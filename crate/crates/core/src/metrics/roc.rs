use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{check_binary, check_lengths, MetricsError};

fn class_counts(labels: &[u8]) -> Result<(usize, usize), MetricsError> {
    check_binary(labels)?;
    let pos = labels.iter().filter(|&&l| l == 1).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(MetricsError::Undefined);
    }
    Ok((pos, neg))
}

/// Area under the ROC curve via the Mann-Whitney statistic with midranks:
/// `(R+ - n+(n+ + 1)/2) / (n+ n-)` where `R+` sums the positives' ranks.
pub fn auroc(scores: &[f64], labels: &[u8]) -> Result<f64, MetricsError> {
    check_lengths(scores.len(), labels.len())?;
    let (pos, neg) = class_counts(labels)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    let mut rank_sum = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        // 1-based ranks start+1 ..= end share their mean.
        let midrank = (start + 1 + end) as f64 / 2.0;
        let positives = order[start..end].iter().filter(|&&i| labels[i] == 1).count();
        rank_sum += midrank * positives as f64;
        start = end;
    }
    let pos_f = pos as f64;
    Ok((rank_sum - pos_f * (pos_f + 1.0) / 2.0) / (pos_f * neg as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    /// Scores `>= threshold` are predicted positive. The first point uses
    /// `+inf`.
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
}

impl RocCurve {
    /// Trapezoidal area under the curve.
    pub fn area(&self) -> f64 {
        self.points.windows(2).map(|w| (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr) / 2.0).sum()
    }
}

/// ROC points with one threshold per distinct score, descending, starting
/// at `(0, 0)` and ending at `(1, 1)`.
pub fn roc_points(scores: &[f64], labels: &[u8]) -> Result<RocCurve, MetricsError> {
    check_lengths(scores.len(), labels.len())?;
    let (pos, neg) = class_counts(labels)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = alloc::vec![RocPoint { threshold: f64::INFINITY, fpr: 0.0, tpr: 0.0 }];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut start = 0;
    while start < order.len() {
        let threshold = scores[order[start]];
        let mut end = start;
        while end < order.len() && scores[order[end]] == threshold {
            if labels[order[end]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            end += 1;
        }
        points.push(RocPoint { threshold, fpr: fp as f64 / neg as f64, tpr: tp as f64 / pos as f64 });
        start = end;
    }
    Ok(RocCurve { points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn auroc_examples() {
        assert_eq!(auroc(&[0.9, 0.8, 0.3, 0.2], &[1, 1, 0, 0]), Ok(1.0));
        assert_eq!(auroc(&[0.9, 0.2, 0.8, 0.3], &[1, 0, 0, 1]), Ok(0.75));
        assert_eq!(auroc(&[0.4; 5], &[1, 0, 1, 0, 0]), Ok(0.5));
        assert_eq!(auroc(&[0.1, 0.2], &[1, 1]), Err(MetricsError::Undefined));
        assert_eq!(auroc(&[0.1, 0.2], &[0, 0]), Err(MetricsError::Undefined));
        assert_eq!(auroc(&[0.1], &[0, 1]), Err(MetricsError::LengthMismatch(1, 2)));
    }

    #[test]
    fn roc_examples() {
        let perfect = roc_points(&[0.9, 0.8, 0.3, 0.2], &[1, 1, 0, 0]).unwrap();
        let xy: Vec<(f64, f64)> = perfect.points.iter().map(|p| (p.fpr, p.tpr)).collect();
        assert_eq!(xy, vec![(0.0, 0.0), (0.0, 0.5), (0.0, 1.0), (0.5, 1.0), (1.0, 1.0)]);
        assert_eq!(perfect.area(), 1.0);

        let mixed = roc_points(&[0.9, 0.2, 0.8, 0.3], &[1, 0, 0, 1]).unwrap();
        assert!((mixed.area() - 0.75).abs() < 1e-12);

        let flat = roc_points(&[0.5; 4], &[1, 0, 1, 0]).unwrap();
        let xy: Vec<(f64, f64)> = flat.points.iter().map(|p| (p.fpr, p.tpr)).collect();
        assert_eq!(xy, vec![(0.0, 0.0), (1.0, 1.0)]);
        assert_eq!(flat.area(), 0.5);
    }

    #[test]
    fn perfect_separation_with_tied_groups() {
        let curve = roc_points(&[0.9, 0.9, 0.1, 0.1], &[1, 1, 0, 0]).unwrap();
        let xy: Vec<(f64, f64)> = curve.points.iter().map(|p| (p.fpr, p.tpr)).collect();
        assert_eq!(xy, vec![(0.0, 0.0), (0.0, 1.0), (1.0, 1.0)]);
    }
}
