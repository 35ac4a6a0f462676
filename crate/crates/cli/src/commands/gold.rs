use std::path::Path;

use sarcdet::annotate::{build_gold, categorize_all, read_judgments, write_gold, Category, GoldThreshold};
use sarcdet::error::Result;

use crate::config::RunConfig;
use crate::manifest::Manifest;

/// Builds the balanced gold sets at all three agreement thresholds from one
/// judgment file. Negatives are drawn from the posts both stages rejected.
pub fn run(cfg: &RunConfig, out: &Path, seed: u64, man: &mut Manifest) -> Result<()> {
    let path = RunConfig::require(&cfg.paths.judgments, "judgments")?;
    man.add_input(path)?;
    let sets = read_judgments(path)?;
    let categories = categorize_all(&sets)?;
    let negatives: Vec<String> = categories
        .iter()
        .filter(|(_, c)| *c == Category::NotSarcastic)
        .map(|(id, _)| id.clone())
        .collect();

    let mut summary = String::new();
    for threshold in [GoldThreshold::D50, GoldThreshold::D80, GoldThreshold::D100] {
        let gold = build_gold(&categories, &sets, &negatives, threshold, seed)?;
        let name = format!("gold_{}.json", threshold.name());
        write_gold(out.join(&name), &gold)?;
        man.add_output(out, &name)?;
        summary.push_str(&format!(
            "{} positives={} negatives={}\n",
            threshold.name(),
            gold.positives.len(),
            gold.negatives.len()
        ));
    }
    print!("{summary}");
    Ok(())
}
