//! End-to-end experiment runs on the synthetic incongruity corpus. These
//! pin the qualitative claim the toolkit exists to demonstrate: image
//! features recover label signal that the text loses.

use sarcdet::corpus::{Label, Platform};
use sarcdet::eval::{
    run_experiment, synth_incongruity_corpus, ExperimentConfig, ExperimentContext, FeatureSet,
    Method, Regime, SynthParams,
};
use sarcdet::textfeat::LexResources;

fn config(method: Method, feature_sets: Vec<FeatureSet>, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        method,
        feature_sets,
        split_ratio: 0.5,
        seed,
        regime: Regime::Silver,
    }
}

#[test]
fn fusion_beats_text_on_the_incongruity_corpus() {
    let corpus = synth_incongruity_corpus(2000, &SynthParams::default(), 42).unwrap();
    let resources = LexResources::builtin();
    let mut ctx = ExperimentContext::new(&corpus.posts, &resources);
    ctx.store = Some(&corpus.store);

    let svm = run_experiment(
        &config(
            Method::SvmFusion,
            vec![FeatureSet::Ngrams, FeatureSet::NgramsVsf],
            42,
        ),
        &ctx,
    )
    .unwrap();
    let text = svm.cell(FeatureSet::Ngrams, Platform::Instagram).unwrap().accuracy;
    let fusion = svm
        .cell(FeatureSet::NgramsVsf, Platform::Instagram)
        .unwrap()
        .accuracy;
    println!("svm: text {text:.4} fusion {fusion:.4}");
    assert!(fusion >= 0.95, "svm fusion accuracy {fusion}");
    assert!(text <= 0.80, "svm text-only accuracy {text}");
    assert!(fusion - text >= 0.05, "svm gap {}", fusion - text);

    let deep = run_experiment(
        &config(
            Method::DeepFusion,
            vec![FeatureSet::Unigram, FeatureSet::UnigramAvr],
            42,
        ),
        &ctx,
    )
    .unwrap();
    let text = deep
        .cell(FeatureSet::Unigram, Platform::Instagram)
        .unwrap()
        .accuracy;
    let fusion = deep
        .cell(FeatureSet::UnigramAvr, Platform::Instagram)
        .unwrap()
        .accuracy;
    println!("deep: text {text:.4} fusion {fusion:.4}");
    assert!(text <= 0.80, "deep text-only accuracy {text}");
    assert!(fusion - text >= 0.05, "deep gap {}", fusion - text);
}

#[test]
fn vsf_only_is_perfect_when_concepts_determine_labels() {
    let corpus = synth_incongruity_corpus(400, &SynthParams::default(), 7).unwrap();
    let resources = LexResources::builtin();
    let mut ctx = ExperimentContext::new(&corpus.posts, &resources);
    ctx.store = Some(&corpus.store);
    let report = run_experiment(
        &config(Method::SvmFusion, vec![FeatureSet::VsfOnly], 7),
        &ctx,
    )
    .unwrap();
    let acc = report
        .cell(FeatureSet::VsfOnly, Platform::Instagram)
        .unwrap()
        .accuracy;
    assert_eq!(acc, 1.0, "vsf accuracy {acc}");
}

#[test]
fn random_labels_score_near_chance() {
    let mut corpus = synth_incongruity_corpus(600, &SynthParams::default(), 3).unwrap();
    // Break the text-label and image-label couplings by reassigning labels
    // round-robin over the generated order.
    for (i, post) in corpus.posts.iter_mut().enumerate() {
        post.label = if i % 2 == 0 {
            Label::Sarcastic
        } else {
            Label::NonSarcastic
        };
    }
    let resources = LexResources::builtin();
    let mut ctx = ExperimentContext::new(&corpus.posts, &resources);
    ctx.store = Some(&corpus.store);
    let report = run_experiment(
        &config(
            Method::SvmFusion,
            vec![FeatureSet::Ngrams, FeatureSet::NgramsVsf],
            3,
        ),
        &ctx,
    )
    .unwrap();
    for cell in &report.cells {
        println!("random labels, {}: {:.4}", cell.feature_set, cell.accuracy);
        assert!(
            (cell.accuracy - 0.5).abs() <= 0.1,
            "{} accuracy {} too far from chance",
            cell.feature_set,
            cell.accuracy
        );
    }
}

#[test]
fn report_grid_covers_every_platform_and_feature_set() {
    let mut corpus = synth_incongruity_corpus(200, &SynthParams::default(), 5).unwrap();
    // Spread the corpus over two platforms; images stay valid since the
    // second platform allows any image count.
    for (i, post) in corpus.posts.iter_mut().enumerate() {
        if i % 2 == 0 {
            post.platform = Platform::Twitter;
        }
    }
    let resources = LexResources::builtin();
    let mut ctx = ExperimentContext::new(&corpus.posts, &resources);
    ctx.store = Some(&corpus.store);
    let sets = vec![FeatureSet::Lexical, FeatureSet::Ngrams, FeatureSet::VsfOnly];
    let report = run_experiment(&config(Method::SvmFusion, sets.clone(), 5), &ctx).unwrap();
    assert_eq!(report.cells.len(), sets.len() * 2);
    for fs in &sets {
        for platform in [Platform::Instagram, Platform::Twitter] {
            assert!(
                report.cell(*fs, platform).is_some(),
                "missing cell {fs} / {platform:?}"
            );
        }
    }
}

#[test]
fn reports_are_bit_identical_across_runs_and_thread_counts() {
    let corpus = synth_incongruity_corpus(300, &SynthParams::default(), 11).unwrap();
    let resources = LexResources::builtin();
    let mut ctx = ExperimentContext::new(&corpus.posts, &resources);
    ctx.store = Some(&corpus.store);
    let cfg = config(
        Method::SvmFusion,
        vec![FeatureSet::Ngrams, FeatureSet::VsfOnly, FeatureSet::NgramsVsf],
        11,
    );
    let a = run_experiment(&cfg, &ctx).unwrap();
    let b = run_experiment(&cfg, &ctx).unwrap();
    ctx.threads = 4;
    let c = run_experiment(&cfg, &ctx).unwrap();
    assert_eq!(a.cells, b.cells);
    assert_eq!(a.cells, c.cells);
    assert_eq!(
        sarcdet::eval::write_kv(&a),
        sarcdet::eval::write_kv(&c)
    );
}
