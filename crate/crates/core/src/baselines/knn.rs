use std::cmp::Ordering;

use super::{BaselineError, PooledVector};
use crate::rules::{Labels, N_RULES};

pub const DEFAULT_K: usize = 5;

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Per-rule majority vote among the `k` nearest training points (Euclidean).
///
/// Equal distances go to the lower training index; a tied vote predicts `1`.
pub fn knn_classify(
    query: &PooledVector,
    train: &[(PooledVector, Labels)],
    k: usize,
) -> Result<Labels, BaselineError> {
    if train.is_empty() {
        return Err(BaselineError::EmptyTrainingSet);
    }
    if k == 0 || k > train.len() {
        return Err(BaselineError::BadK { k, n: train.len() });
    }
    let mut dist: Vec<(f64, usize)> = Vec::with_capacity(train.len());
    for (i, (x, _)) in train.iter().enumerate() {
        if x.len() != query.len() {
            return Err(BaselineError::DimensionMismatch {
                expected: query.len(),
                actual: x.len(),
            });
        }
        dist.push((squared_distance(query.as_slice(), x.as_slice()), i));
    }
    let by_distance_then_index =
        |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if k < dist.len() {
        dist.select_nth_unstable_by(k - 1, by_distance_then_index);
    }

    let mut ones = [0usize; N_RULES];
    for &(_, i) in &dist[..k] {
        for (count, &label) in ones.iter_mut().zip(&train[i].1) {
            *count += usize::from(label);
        }
    }
    let mut out = [0u8; N_RULES];
    for (o, &n1) in out.iter_mut().zip(&ones) {
        *o = match (2 * n1).cmp(&k) {
            Ordering::Less => 0,
            _ => 1,
        };
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(v: &[f64]) -> PooledVector {
        PooledVector(v.to_vec())
    }

    #[test]
    fn nearest_point_wins_for_k1() {
        let train = vec![(pv(&[0.0, 0.0]), [1, 0, 1]), (pv(&[5.0, 5.0]), [0, 1, 0])];
        assert_eq!(knn_classify(&pv(&[5.0, 5.0]), &train, 1).unwrap(), [0, 1, 0]);
    }

    #[test]
    fn majority_vote() {
        let train = vec![
            (pv(&[0.0]), [1, 0, 0]),
            (pv(&[0.1]), [1, 0, 1]),
            (pv(&[0.2]), [0, 0, 1]),
            (pv(&[9.0]), [0, 1, 0]),
        ];
        assert_eq!(knn_classify(&pv(&[0.0]), &train, 3).unwrap(), [1, 0, 1]);
    }

    #[test]
    fn ties() {
        // equidistant points: lower index is nearer
        let train = vec![(pv(&[1.0]), [1, 1, 1]), (pv(&[-1.0]), [0, 0, 0])];
        assert_eq!(knn_classify(&pv(&[0.0]), &train, 1).unwrap(), [1, 1, 1]);
        let swapped = vec![train[1].clone(), train[0].clone()];
        assert_eq!(knn_classify(&pv(&[0.0]), &swapped, 1).unwrap(), [0, 0, 0]);
        // 1-1 vote goes to label 1
        assert_eq!(knn_classify(&pv(&[0.0]), &swapped, 2).unwrap(), [1, 1, 1]);
    }

    #[test]
    fn errors() {
        assert_eq!(knn_classify(&pv(&[0.0]), &[], 1), Err(BaselineError::EmptyTrainingSet));
        let train = vec![(pv(&[0.0]), [1, 1, 1])];
        assert_eq!(knn_classify(&pv(&[0.0]), &train, 2), Err(BaselineError::BadK { k: 2, n: 1 }));
        assert!(knn_classify(&pv(&[0.0, 1.0]), &train, 1).is_err());
    }
}
