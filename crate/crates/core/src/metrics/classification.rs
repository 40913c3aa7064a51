use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{auroc, check_binary, check_lengths, MetricsError};

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Per-label F1 at threshold `tau` (a probability counts as positive when
/// `>= tau`) and their unweighted mean over all labels. Any 0/0 in
/// precision, recall or F1 is taken as 0.
pub fn f1_macro(probabilities: &[Vec<f64>], labels: &[Vec<u8>], tau: f64) -> Result<(Vec<f64>, f64), MetricsError> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(MetricsError::InvalidThreshold(tau));
    }
    check_lengths(probabilities.len(), labels.len())?;
    let k = labels.first().map_or(0, Vec::len);
    let mut tp = alloc::vec![0usize; k];
    let mut fp = alloc::vec![0usize; k];
    let mut fn_ = alloc::vec![0usize; k];
    for (p, y) in probabilities.iter().zip(labels) {
        check_lengths(p.len(), k)?;
        check_lengths(y.len(), k)?;
        check_binary(y)?;
        for j in 0..k {
            match (p[j] >= tau, y[j] == 1) {
                (true, true) => tp[j] += 1,
                (true, false) => fp[j] += 1,
                (false, true) => fn_[j] += 1,
                (false, false) => {}
            }
        }
    }
    let per_label: Vec<f64> = (0..k)
        .map(|j| {
            let precision = ratio(tp[j], tp[j] + fp[j]);
            let recall = ratio(tp[j], tp[j] + fn_[j]);
            if precision + recall == 0.0 {
                0.0
            } else {
                2.0 * precision * recall / (precision + recall)
            }
        })
        .collect();
    let macro_f1 = if k == 0 { 0.0 } else { per_label.iter().sum::<f64>() / k as f64 };
    Ok((per_label, macro_f1))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelEval {
    pub label: String,
    /// `None` when the label is all-positive or all-negative in the data.
    pub auroc: Option<f64>,
    pub f1: f64,
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TagEval {
    pub threshold: f64,
    pub per_label: Vec<LabelEval>,
    /// Mean AUROC over labels where it is defined; `None` if none are.
    pub macro_auroc: Option<f64>,
    /// Mean F1 over all labels.
    pub macro_f1: f64,
    pub skipped: Vec<String>,
}

/// AUROC and F1 per label, then macro averages. Labels without both classes
/// are left out of the AUROC average but still count toward macro F1.
pub fn evaluate_tags(
    label_names: &[String],
    probabilities: &[Vec<f64>],
    labels: &[Vec<u8>],
    tau: f64,
) -> Result<TagEval, MetricsError> {
    if labels.is_empty() {
        return Err(MetricsError::Empty);
    }
    let (f1s, macro_f1) = f1_macro(probabilities, labels, tau)?;
    check_lengths(label_names.len(), f1s.len())?;
    let mut per_label = Vec::with_capacity(label_names.len());
    let mut skipped = Vec::new();
    let mut auroc_sum = 0.0;
    let mut defined = 0usize;
    for (j, name) in label_names.iter().enumerate() {
        let scores: Vec<f64> = probabilities.iter().map(|p| p[j]).collect();
        let truth: Vec<u8> = labels.iter().map(|y| y[j]).collect();
        let value = match auroc(&scores, &truth) {
            Ok(v) => {
                auroc_sum += v;
                defined += 1;
                Some(v)
            }
            Err(MetricsError::Undefined) => {
                skipped.push(name.clone());
                None
            }
            Err(e) => return Err(e),
        };
        per_label.push(LabelEval {
            label: name.clone(),
            auroc: value,
            f1: f1s[j],
            support: truth.iter().filter(|&&t| t == 1).count(),
        });
    }
    Ok(TagEval {
        threshold: tau,
        per_label,
        macro_auroc: (defined > 0).then(|| auroc_sum / defined as f64),
        macro_f1,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn perfect_predictions() {
        let probs = vec![vec![0.9, 0.1], vec![0.2, 0.8]];
        let labels = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(f1_macro(&probs, &labels, 0.5).unwrap(), (vec![1.0, 1.0], 1.0));
    }

    #[test]
    fn hand_confusion_matrix() {
        // label 1: TP=1 FP=1 FN=0; label 2: TP=1 FP=0 FN=1.
        let probs = vec![vec![0.9, 0.9], vec![0.9, 0.1], vec![0.1, 0.1]];
        let labels = vec![vec![1, 1], vec![0, 1], vec![0, 0]];
        let (per, macro_f1) = f1_macro(&probs, &labels, 0.5).unwrap();
        assert!((per[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((per[1] - 2.0 / 3.0).abs() < 1e-15);
        assert!((macro_f1 - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn zero_denominators() {
        let probs = vec![vec![0.1, 0.1], vec![0.2, 0.2]];
        let labels = vec![vec![1, 0], vec![1, 0]];
        assert_eq!(f1_macro(&probs, &labels, 0.5).unwrap().0, vec![0.0, 0.0]);
    }

    #[test]
    fn threshold_validation() {
        assert_eq!(f1_macro(&[], &[], 1.5), Err(MetricsError::InvalidThreshold(1.5)));
        assert_eq!(f1_macro(&[vec![0.5]], &[vec![2]], 0.5), Err(MetricsError::NonBinaryLabel(2)));
    }

    #[test]
    fn degenerate_label_skipped_for_auroc_only() {
        let names = vec!["A".to_string(), "B".to_string()];
        let probs = vec![vec![0.9, 0.3], vec![0.2, 0.4]];
        let labels = vec![vec![1, 0], vec![0, 0]];
        let eval = evaluate_tags(&names, &probs, &labels, 0.5).unwrap();
        assert_eq!(eval.skipped, vec!["B".to_string()]);
        assert_eq!(eval.macro_auroc, Some(1.0));
        assert_eq!(eval.macro_f1, 0.5);
        assert_eq!(eval.per_label[1].auroc, None);
    }
}
