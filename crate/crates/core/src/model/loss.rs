use super::ModelError;

/// Probabilities are clamped to `[PROB_CLAMP, 1 - PROB_CLAMP]` before the log.
pub const PROB_CLAMP: f64 = 1e-7;

fn clamp(p: f64) -> f64 {
    p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP)
}

/// Mean over heads of `-[y·ln p + (1-y)·ln(1-p)]`.
pub fn bce_loss(probs: &[f64], labels: &[u8]) -> Result<f64, ModelError> {
    if probs.len() != labels.len() || probs.is_empty() {
        return Err(ModelError::LengthMismatch(probs.len(), labels.len()));
    }
    let total: f64 = probs
        .iter()
        .zip(labels)
        .map(|(&p, &y)| {
            let p = clamp(p);
            if y == 1 {
                -p.ln()
            } else {
                -(1.0 - p).ln()
            }
        })
        .sum();
    Ok(total / probs.len() as f64)
}

/// Gradient of [`bce_loss`] with respect to each head's pre-sigmoid logit.
///
/// Zero where the clamp is active, since the clamped loss is flat there.
pub fn bce_grad(probs: &[f64], labels: &[u8]) -> Result<Vec<f64>, ModelError> {
    if probs.len() != labels.len() || probs.is_empty() {
        return Err(ModelError::LengthMismatch(probs.len(), labels.len()));
    }
    let n = probs.len() as f64;
    Ok(probs
        .iter()
        .zip(labels)
        .map(|(&p, &y)| {
            if (PROB_CLAMP..=1.0 - PROB_CLAMP).contains(&p) {
                (p - f64::from(y)) / n
            } else {
                0.0
            }
        })
        .collect())
}
