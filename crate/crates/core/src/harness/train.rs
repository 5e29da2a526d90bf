use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CurvePoint, HarnessError, Metrics};
use crate::features::NormStats;
use crate::model::{
    backward, bce_loss, clip_global_norm, forward, init_params, rmsprop_step, ModelConfig,
    ModelParams, Mode, OptimizerState, RmsPropConfig, Weights, DEFAULT_CLIP_NORM,
};
use crate::rules::{Labels, N_RULES};
use crate::Matrix;

/// One labelled feature sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    /// Clip path or other stable identifier.
    pub id: String,
    pub features: Matrix,
    pub labels: Labels,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub split_test_fraction: f64,
    /// Drives splitting, epoch shuffling and dropout masks.
    pub seed: u64,
    /// Stop after this many epochs without a better mean test accuracy and
    /// keep the best epoch's parameters; `0` disables early stopping.
    pub early_stop_patience: usize,
    pub optimizer: RmsPropConfig,
    pub clip_norm: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 50,
            batch_size: 16,
            split_test_fraction: 0.10,
            seed: 0,
            early_stop_patience: 0,
            optimizer: RmsPropConfig::default(),
            clip_norm: DEFAULT_CLIP_NORM,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::BadConfig(m.into()));
        if !(self.split_test_fraction > 0.0 && self.split_test_fraction < 1.0) {
            return bad("split_test_fraction must be in (0, 1)");
        }
        if self.epochs == 0 || self.batch_size == 0 {
            return bad("epochs and batch_size must be at least 1");
        }
        if !(self.optimizer.lr > 0.0) || !(0.0..1.0).contains(&self.optimizer.rho) {
            return bad("optimizer needs lr > 0 and rho in [0, 1)");
        }
        if !(self.clip_norm > 0.0) {
            return bad("clip_norm must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub params: ModelParams,
    pub curve: Vec<CurvePoint>,
    /// Epoch whose parameters were returned.
    pub selected_epoch: usize,
    pub optimizer_steps: u64,
}

/// Fits normalization on the training samples and applies it to both splits.
pub fn fit_normalization(train: &mut [Sample], test: &mut [Sample]) -> Option<NormStats> {
    let stats = NormStats::fit(train.iter().map(|s| &s.features))?;
    for s in train.iter_mut().chain(test.iter_mut()) {
        s.features = stats.apply(&s.features);
    }
    Some(stats)
}

/// SplitMix64 finalizer, used to derive independent stream seeds.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn stream_seed(seed: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(mix(seed), |acc, &p| mix(acc ^ p))
}

fn predict_labels(params: &ModelParams, samples: &[Sample]) -> Result<Vec<Labels>, HarnessError> {
    samples
        .par_iter()
        .map(|s| {
            let mut rng = rand::rngs::mock::StepRng::new(0, 0);
            let (p, _) = forward(&s.features, params, Mode::Infer, &mut rng)?;
            let mut out = [0u8; N_RULES];
            for (o, prob) in out.iter_mut().zip(&p) {
                *o = u8::from(*prob >= crate::model::DECISION_THRESHOLD);
            }
            Ok(out)
        })
        .collect()
}

pub(crate) fn accuracy_per_rule(params: &ModelParams, samples: &[Sample]) -> Result<[f64; N_RULES], HarnessError> {
    let preds = predict_labels(params, samples)?;
    let truth: Vec<Labels> = samples.iter().map(|s| s.labels).collect();
    let m = super::compute_metrics(&preds, &truth)?;
    Ok(m.per_rule.map(|r| r.accuracy))
}

/// Mini-batch RMSprop training with per-epoch curve points.
///
/// Samples must already be normalized. The returned parameters carry identity
/// normalization; callers attach the statistics they fitted.
pub fn train(
    train_set: &[Sample],
    test_set: &[Sample],
    model_config: &ModelConfig,
    config: &TrainConfig,
) -> Result<TrainOutcome, HarnessError> {
    train_with_observer(train_set, test_set, model_config, config, |_| true)
}

/// Like [`train`], calling `on_epoch` after every epoch; returning `false`
/// ends training after that epoch.
pub fn train_with_observer(
    train_set: &[Sample],
    test_set: &[Sample],
    model_config: &ModelConfig,
    config: &TrainConfig,
    mut on_epoch: impl FnMut(&CurvePoint) -> bool,
) -> Result<TrainOutcome, HarnessError> {
    config.validate()?;
    if train_set.is_empty() {
        return Err(HarnessError::EmptyTrainingSet);
    }
    if test_set.is_empty() {
        return Err(HarnessError::EmptyTestSet);
    }
    let mut params = init_params(model_config)?;
    let mut state = OptimizerState::with_config(&params.weights, config.optimizer);
    let mode = Mode::Train {
        dropout_rate: model_config.dropout_rate,
    };

    let mut order: Vec<usize> = (0..train_set.len()).collect();
    let mut curve = Vec::with_capacity(config.epochs);
    let mut best: Option<(f64, usize, ModelParams)> = None;

    for epoch in 1..=config.epochs {
        let mut shuffle_rng = ChaCha8Rng::seed_from_u64(stream_seed(config.seed, &[epoch as u64]));
        order.shuffle(&mut shuffle_rng);

        let mut loss_sum = 0.0;
        for (b, batch) in order.chunks(config.batch_size).enumerate() {
            let per_example: Vec<(f64, Weights)> = batch
                .par_iter()
                .enumerate()
                .map(|(pos, &i)| {
                    let s = &train_set[i];
                    let seed = stream_seed(config.seed, &[epoch as u64, b as u64, pos as u64]);
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let (probs, cache) = forward(&s.features, &params, mode, &mut rng)?;
                    let loss = bce_loss(&probs, &s.labels)?;
                    Ok((loss, backward(&cache, &params, &s.labels)?))
                })
                .collect::<Result<_, HarnessError>>()?;

            // fixed reduction order keeps runs bit-identical
            let mut iter = per_example.into_iter();
            let (first_loss, mut grads) = iter.next().expect("chunks are non-empty");
            loss_sum += first_loss;
            for (loss, g) in iter {
                loss_sum += loss;
                grads.add_assign(&g);
            }
            grads.scale(1.0 / batch.len() as f64);
            clip_global_norm(&mut grads, config.clip_norm);
            rmsprop_step(&mut params, &grads, &mut state)?;
        }

        let point = CurvePoint {
            epoch,
            train_loss: loss_sum / train_set.len() as f64,
            train_accuracy: accuracy_per_rule(&params, train_set)?,
            test_accuracy: accuracy_per_rule(&params, test_set)?,
        };
        let mean_test = point.test_accuracy.iter().sum::<f64>() / N_RULES as f64;
        let keep_going = on_epoch(&point);
        curve.push(point);

        if config.early_stop_patience > 0 {
            if best.as_ref().map_or(true, |(acc, _, _)| mean_test > *acc) {
                best = Some((mean_test, epoch, params.clone()));
            } else if epoch - best.as_ref().unwrap().1 >= config.early_stop_patience {
                break;
            }
        }
        if !keep_going {
            break;
        }
    }

    let steps = state.steps;
    let (params, selected_epoch) = match best {
        Some((_, epoch, p)) => (p, epoch),
        None => (params, curve.len()),
    };
    Ok(TrainOutcome {
        params,
        curve,
        selected_epoch,
        optimizer_steps: steps,
    })
}

impl Metrics {
    pub fn mean_accuracy(&self) -> f64 {
        self.per_rule.iter().map(|r| r.accuracy).sum::<f64>() / N_RULES as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn tiny_model() -> ModelConfig {
        ModelConfig {
            input_dim: 2,
            lstm_units: vec![3],
            dense_units: vec![3, 2],
            dropout_rate: 0.2,
            n_heads: 3,
            seed: 1,
        }
    }

    fn samples(n: usize, seed: u64) -> Vec<Sample> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|i| {
                let y = (i % 2) as u8;
                let centre = if y == 1 { 1.0 } else { -1.0 };
                let t = 3 + i % 3;
                Sample {
                    id: format!("s{i}"),
                    features: Matrix::from_vec(t, 2, (0..t * 2).map(|_| centre + rng.gen_range(-0.3..0.3)).collect()),
                    labels: [y, y, 1 - y],
                }
            })
            .collect()
    }

    #[test]
    fn step_count_is_ceil_n_over_batch() {
        let data = samples(21, 0);
        for batch_size in [1, 4, 16, 21, 50] {
            let cfg = TrainConfig { epochs: 1, batch_size, ..Default::default() };
            let out = train(&data, &data[..3], &tiny_model(), &cfg).unwrap();
            assert_eq!(out.optimizer_steps as usize, 21usize.div_ceil(batch_size));
            assert_eq!(out.curve.len(), 1);
        }
    }

    #[test]
    fn same_seeds_same_trajectory() {
        let data = samples(12, 1);
        let cfg = TrainConfig { epochs: 3, batch_size: 5, seed: 9, ..Default::default() };
        let a = train(&data, &data[..4], &tiny_model(), &cfg).unwrap();
        let b = train(&data, &data[..4], &tiny_model(), &cfg).unwrap();
        let bits = |o: &TrainOutcome| o.curve.iter().map(|p| p.train_loss.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
        assert_eq!(a.params.weights, b.params.weights);
    }

    #[test]
    fn early_stopping_returns_best_epoch() {
        let data = samples(12, 2);
        let cfg = TrainConfig { epochs: 40, batch_size: 4, early_stop_patience: 2, ..Default::default() };
        let out = train(&data, &data[..6], &tiny_model(), &cfg).unwrap();
        let best = out
            .curve
            .iter()
            .map(|p| p.test_accuracy.iter().sum::<f64>())
            .fold(f64::MIN, f64::max);
        let chosen = &out.curve[out.selected_epoch - 1];
        assert_eq!(chosen.test_accuracy.iter().sum::<f64>(), best);
        assert!(out.curve.len() <= 40);
    }

    #[test]
    fn normalization_uses_train_only() {
        let mut train_s = samples(10, 3);
        let mut test_s = samples(4, 4);
        for s in &mut test_s {
            s.features.as_mut_slice().iter_mut().for_each(|v| *v += 5.0);
        }
        let raw_test = test_s.clone();
        let stats = fit_normalization(&mut train_s, &mut test_s).unwrap();
        let test_stats = NormStats::fit(raw_test.iter().map(|s| &s.features)).unwrap();
        assert_ne!(stats, test_stats);
        assert_eq!(test_s[0].features, stats.apply(&raw_test[0].features));
    }

    #[test]
    fn empty_sets_rejected() {
        let data = samples(4, 5);
        assert!(matches!(train(&[], &data, &tiny_model(), &TrainConfig::default()), Err(HarnessError::EmptyTrainingSet)));
        assert!(matches!(train(&data, &[], &tiny_model(), &TrainConfig::default()), Err(HarnessError::EmptyTestSet)));
    }
}
