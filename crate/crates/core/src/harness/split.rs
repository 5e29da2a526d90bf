use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{HarnessError, TrainConfig};
use crate::audio::Dataset;
use crate::rules::Labels;

const MIN_SPLIT_SIZE: usize = 10;

fn joint_label(l: &Labels) -> usize {
    l.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
}

/// Seeded split stratified on the 3-bit joint label.
///
/// The test side receives `round(n · fraction)` examples, apportioned across
/// strata by largest remainder. Both index lists come back sorted.
pub fn split_indices(
    labels: &[Labels],
    config: &TrainConfig,
) -> Result<(Vec<usize>, Vec<usize>), HarnessError> {
    let n = labels.len();
    if n < MIN_SPLIT_SIZE {
        return Err(HarnessError::TooSmall(n));
    }
    config.validate()?;
    let frac = config.split_test_fraction;
    let n_test = ((n as f64 * frac).round() as usize).clamp(1, n - 1);

    let mut strata: Vec<Vec<usize>> = vec![Vec::new(); 8];
    for (i, l) in labels.iter().enumerate() {
        strata[joint_label(l)].push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for s in &mut strata {
        s.shuffle(&mut rng);
    }

    let exact: Vec<f64> = strata
        .iter()
        .map(|s| n_test as f64 * s.len() as f64 / n as f64)
        .collect();
    let mut quota: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let mut order: Vec<usize> = (0..strata.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let mut missing = n_test - quota.iter().sum::<usize>();
    for s in order.into_iter().cycle() {
        if missing == 0 {
            break;
        }
        if quota[s] < strata[s].len() {
            quota[s] += 1;
            missing -= 1;
        }
    }

    let mut train = Vec::with_capacity(n - n_test);
    let mut test = Vec::with_capacity(n_test);
    for (s, q) in strata.iter().zip(&quota) {
        test.extend_from_slice(&s[..*q]);
        train.extend_from_slice(&s[*q..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

pub fn split_dataset(ds: &Dataset, config: &TrainConfig) -> Result<(Dataset, Dataset), HarnessError> {
    let labels: Vec<Labels> = ds.examples.iter().map(|e| e.labels()).collect();
    let (train, test) = split_indices(&labels, config)?;
    let pick = |idx: &[usize]| Dataset {
        examples: idx.iter().map(|&i| ds.examples[i].clone()).collect(),
        root_dir: ds.root_dir.clone(),
    };
    Ok((pick(&train), pick(&test)))
}
