use super::{BaselineError, PooledVector};
use crate::model::DECISION_THRESHOLD;
use crate::rules::{Labels, N_RULES};

/// Column-wise z-scoring fitted on training vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    pub fn fit(vectors: &[&PooledVector]) -> Option<Self> {
        let dim = vectors.first()?.len();
        let n = vectors.len() as f64;
        let mut mean = vec![0.0; dim];
        for v in vectors {
            for (m, x) in mean.iter_mut().zip(v.as_slice()) {
                *m += x / n;
            }
        }
        let mut std = vec![0.0; dim];
        for v in vectors {
            for ((s, x), m) in std.iter_mut().zip(v.as_slice()).zip(&mean) {
                *s += (x - m) * (x - m) / n;
            }
        }
        std.iter_mut().for_each(|s| *s = s.sqrt().max(crate::features::STD_FLOOR));
        Some(Self { mean, std })
    }

    pub fn apply(&self, v: &PooledVector) -> PooledVector {
        PooledVector(
            v.as_slice()
                .iter()
                .zip(&self.mean)
                .zip(&self.std)
                .map(|((x, m), s)| (x - m) / s)
                .collect(),
        )
    }
}

/// Three independent binary logistic regressions.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRegModel {
    pub weights: [Vec<f64>; N_RULES],
    pub bias: [f64; N_RULES],
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl LogRegModel {
    pub fn zeros(dim: usize) -> Self {
        Self {
            weights: std::array::from_fn(|_| vec![0.0; dim]),
            bias: [0.0; N_RULES],
        }
    }

    pub fn predict_proba(&self, x: &PooledVector) -> [f64; N_RULES] {
        std::array::from_fn(|r| {
            sigmoid(crate::matrix::dot(&self.weights[r], x.as_slice()) + self.bias[r])
        })
    }

    pub fn predict(&self, x: &PooledVector) -> Labels {
        self.predict_proba(x)
            .map(|p| u8::from(p >= DECISION_THRESHOLD))
    }
}

/// Mean BCE of one rule's regression over the training set, with its
/// gradient `(∂/∂w, ∂/∂b)`.
pub fn logreg_loss_and_grad(
    weights: &[f64],
    bias: f64,
    train: &[(PooledVector, Labels)],
    rule: usize,
) -> (f64, Vec<f64>, f64) {
    let n = train.len() as f64;
    let mut loss = 0.0;
    let mut gw = vec![0.0; weights.len()];
    let mut gb = 0.0;
    for (x, labels) in train {
        let z = crate::matrix::dot(weights, x.as_slice()) + bias;
        let y = f64::from(labels[rule]);
        // log(1 + e^z) computed stably
        let softplus = z.max(0.0) + (-z.abs()).exp().ln_1p();
        loss += softplus - y * z;
        let err = sigmoid(z) - y;
        crate::matrix::axpy(err, x.as_slice(), &mut gw);
        gb += err;
    }
    gw.iter_mut().for_each(|g| *g /= n);
    (loss / n, gw, gb / n)
}

/// Full-batch gradient descent on each rule's BCE, starting from zero weights.
///
/// Inputs are expected to be standardized already.
pub fn logreg_train(
    train: &[(PooledVector, Labels)],
    epochs: usize,
    lr: f64,
) -> Result<LogRegModel, BaselineError> {
    let dim = train.first().ok_or(BaselineError::EmptyTrainingSet)?.0.len();
    if let Some((x, _)) = train.iter().find(|(x, _)| x.len() != dim) {
        return Err(BaselineError::DimensionMismatch {
            expected: dim,
            actual: x.len(),
        });
    }
    let mut model = LogRegModel::zeros(dim);
    for rule in 0..N_RULES {
        for _ in 0..epochs {
            let (_, gw, gb) = logreg_loss_and_grad(&model.weights[rule], model.bias[rule], train, rule);
            crate::matrix::axpy(-lr, &gw, &mut model.weights[rule]);
            model.bias[rule] -= lr * gb;
        }
    }
    Ok(model)
}
