use crate::error::{Error, Result};
use crate::scalar::Real;

/// Average 1-based ranks; tied values share the mean of their positions.
pub(crate) fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // positions i..j hold ranks i+1..=j
        let r = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = r;
        }
        i = j;
    }
    ranks
}

/// Probability that a random positive outscores a random negative, ties
/// counting one half (the normalized Mann–Whitney U).
pub fn compute_auc<T: Real>(scores: &[T], labels: &[bool]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::ShapeMismatch {
            expected: labels.len(),
            actual: scores.len(),
        });
    }
    let n_pos = labels.iter().filter(|&&l| l).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }
    let values: Vec<f64> = scores.iter().map(|s| s.as_f64()).collect();
    let ranks = average_ranks(&values);
    let rank_sum: f64 = ranks.iter().zip(labels).filter(|(_, &l)| l).map(|(r, _)| r).sum();
    let (p, n) = (n_pos as f64, n_neg as f64);
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pair_counting(scores: &[f64], labels: &[bool]) -> f64 {
        let (mut wins, mut pairs) = (0.0, 0.0);
        for (i, &si) in scores.iter().enumerate() {
            for (j, &sj) in scores.iter().enumerate() {
                if labels[i] && !labels[j] {
                    pairs += 1.0;
                    wins += if si > sj { 1.0 } else if si == sj { 0.5 } else { 0.0 };
                }
            }
        }
        wins / pairs
    }

    #[test]
    fn hand_examples() {
        assert_eq!(compute_auc(&[0.9, 0.8, 0.1, 0.0], &[true, true, false, false]).unwrap(), 1.0);
        assert_eq!(compute_auc(&[0.3; 6], &[true, false, true, false, true, false]).unwrap(), 0.5);
        assert_eq!(compute_auc(&[0.9, 0.8, 0.4], &[true, false, true]).unwrap(), 0.5);
    }

    #[test]
    fn single_class_is_rejected() {
        assert!(matches!(compute_auc(&[0.1, 0.2], &[true, true]), Err(Error::SingleClass)));
        assert!(compute_auc(&[0.1], &[true, false]).is_err());
    }

    #[test]
    fn independent_scores_sit_near_one_half() {
        use rand::Rng;
        let mut rng = crate::rng::stage_rng(17, 0);
        let scores: Vec<f64> = (0..1000).map(|_| rng.gen()).collect();
        let labels: Vec<bool> = (0..1000).map(|i| i % 2 == 0).collect();
        let auc = compute_auc(&scores, &labels).unwrap();
        assert!((0.4..=0.6).contains(&auc), "{auc}");
    }

    proptest! {
        #[test]
        fn matches_pair_counting(data in prop::collection::vec((0u8..20, any::<bool>()), 2..200)) {
            let scores: Vec<f64> = data.iter().map(|&(s, _)| s as f64 / 7.0).collect();
            let labels: Vec<bool> = data.iter().map(|&(_, l)| l).collect();
            prop_assume!(labels.iter().any(|&l| l) && labels.iter().any(|&l| !l));
            let auc = compute_auc(&scores, &labels).unwrap();
            prop_assert!((auc - pair_counting(&scores, &labels)).abs() < 1e-12);
        }

        #[test]
        fn invariant_under_increasing_transform(data in prop::collection::vec((-5.0f64..5.0, any::<bool>()), 2..100)) {
            let scores: Vec<f64> = data.iter().map(|&(s, _)| s).collect();
            let labels: Vec<bool> = data.iter().map(|&(_, l)| l).collect();
            prop_assume!(labels.iter().any(|&l| l) && labels.iter().any(|&l| !l));
            let warped: Vec<f64> = scores.iter().map(|s| s.exp() * 3.0 + 1.0).collect();
            prop_assert_eq!(compute_auc(&scores, &labels).unwrap(), compute_auc(&warped, &labels).unwrap());
        }
    }
}
