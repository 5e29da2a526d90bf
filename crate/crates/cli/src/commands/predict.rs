use anyhow::Context;
use log::error;
use tajweed_core::audio::load_wav;
use tajweed_core::features::MfccExtractor;
use tajweed_core::model::{load_model, predict, ModelParams, DECISION_THRESHOLD};
use tajweed_core::Rule;

use crate::{PredictArgs, Status};

/// Probabilities at or above the threshold count as correct pronunciation.
pub fn verdict(probability: f64) -> &'static str {
    if probability >= DECISION_THRESHOLD {
        "correct"
    } else {
        "incorrect"
    }
}

fn probabilities(params: &ModelParams, path: &std::path::Path) -> anyhow::Result<Vec<f64>> {
    let clip = load_wav(path)?;
    let extractor = MfccExtractor::new(params.feature_config.clone(), clip.sample_rate_hz())?;
    let seq = extractor.extract(&clip)?;
    Ok(predict(params, &seq.coeffs)?)
}

pub fn run(args: &PredictArgs) -> anyhow::Result<Status> {
    let (params, _) = load_model(&args.model).with_context(|| format!("loading {}", args.model.display()))?;
    let mut status = Status::Success;
    for path in &args.wavs {
        match probabilities(&params, path) {
            Ok(probs) => {
                println!("# {}", path.display());
                for (rule, p) in Rule::ALL.iter().zip(probs) {
                    println!("{}\t{p:.6}\t{}", rule.display_name(), verdict(p));
                }
            }
            Err(e) => {
                error!("{}: {e:#}", path.display());
                status = Status::Partial;
            }
        }
    }
    Ok(status)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_boundary() {
        assert_eq!(verdict(0.73), "correct");
        assert_eq!(verdict(0.5), "correct");
        assert_eq!(verdict(0.4999999), "incorrect");
    }
}
