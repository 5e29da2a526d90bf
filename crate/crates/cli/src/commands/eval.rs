use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;

use anyhow::{bail, Context};
use log::info;
use tajweed_core::harness::{
    evaluate, evaluate_baselines, render_report, BaselineConfig, Metrics, ReportMeta, Sample,
};
use tajweed_core::model::load_model;
use tajweed_core::Rule;

use crate::data::{load_samples, read_manifest};
use crate::run_manifest::{ConfigSnapshot, RunManifest};
use crate::{EvalArgs, Status};

pub const REPORT_FILE: &str = "report.txt";

/// Per-rule accuracy/recall/F1 to four decimals, rules in canonical order.
pub fn render_metrics(m: &Metrics) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<22}{:>10}{:>10}{:>10}", "Rule", "Accuracy", "Recall", "F1");
    for (rule, r) in Rule::ALL.iter().zip(&m.per_rule) {
        let _ = writeln!(out, "{:<22}{:>10.4}{:>10.4}{:>10.4}", rule.display_name(), r.accuracy, r.recall, r.f1);
    }
    out
}

pub fn run(args: &EvalArgs) -> anyhow::Result<Status> {
    let (params, model) = load_model(&args.model).with_context(|| format!("loading {}", args.model.display()))?;
    let rows = read_manifest(&args.manifest, &args.features_dir)?;
    let mut samples = load_samples(&args.features_dir, &rows)?;
    if let Some(s) = samples.first() {
        if s.features.cols() != model.input_dim {
            bail!("features have {} coefficients but the model expects input_dim {}", s.features.cols(), model.input_dim);
        }
    }
    for s in &mut samples {
        s.features = params.norm_stats.apply(&s.features);
    }

    let train_run = args.run.as_ref().map(|p| RunManifest::load(p)).transpose()?;
    let (train_set, test_set): (Vec<Sample>, Vec<Sample>) = match train_run.as_ref().and_then(|r| r.split.as_ref()) {
        Some(split) => {
            let test_ids: HashSet<&str> = split.test.iter().map(String::as_str).collect();
            let train_ids: HashSet<&str> = split.train.iter().map(String::as_str).collect();
            let missing = test_ids.iter().filter(|id| !samples.iter().any(|s| s.id == **id)).count();
            if missing > 0 {
                bail!("{missing} test examples from the run are not in the manifest");
            }
            let train = samples.iter().filter(|s| train_ids.contains(s.id.as_str())).cloned().collect();
            let test = samples.into_iter().filter(|s| test_ids.contains(s.id.as_str())).collect();
            (train, test)
        }
        None if args.run.is_some() => bail!("run manifest has no train/test split"),
        None => (Vec::new(), samples),
    };

    let lstm = evaluate(&params, &test_set)?;
    let table = render_metrics(&lstm);
    print!("{table}");

    let baseline_config = BaselineConfig { k: args.k, ..Default::default() };
    let mut report = table.clone();
    if args.baselines {
        let (knn, logreg) = evaluate_baselines(&train_set, &test_set, &baseline_config)?;
        let meta = ReportMeta {
            seed: train_run.as_ref().and_then(|r| r.seeds.get("split_and_batches").copied()).unwrap_or_default(),
            config_hash: train_run.as_ref().map(|r| r.config_hash.clone()).unwrap_or_default(),
            n_test: test_set.len(),
            knn_k: baseline_config.k.min(train_set.len()),
        };
        let comparison = render_report(&lstm, &knn, &logreg, &meta);
        print!("\n{comparison}");
        report.push('\n');
        report.push_str(&comparison);
    }

    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join(REPORT_FILE);
        fs::write(&path, &report).with_context(|| format!("writing {}", path.display()))?;
        let mut run = RunManifest::start(
            "eval",
            ConfigSnapshot {
                mfcc: Some(params.feature_config.clone()),
                model: Some(model),
                train: None,
                baselines: args.baselines.then_some(baseline_config),
            },
        );
        run.input("model", &args.model);
        run.input("features_dir", &args.features_dir);
        run.input("manifest", &args.manifest);
        if let Some(p) = &args.run {
            run.input("run", p);
        }
        run.outputs.push(path.display().to_string());
        run.finish(dir)?;
        info!("report written to {}", path.display());
    }
    Ok(Status::Success)
}
