use std::fs;
use std::path::Path;

use sarcdet::annotate::{fleiss_kappa, matching_percent, read_judgments, JudgmentSet, Task, Vote};
use sarcdet::error::{Error, Result};

use crate::config::RunConfig;
use crate::manifest::Manifest;

fn task_name(task: Task) -> &'static str {
    match task {
        Task::TextOnly => "text_only",
        Task::TextImage => "text_image",
    }
}

/// Per-task agreement table: one row per annotation stage with the share of
/// votes matching the modal answer and Fleiss' kappa over yes/no/don't-know.
pub fn run(cfg: &RunConfig, out: &Path, man: &mut Manifest) -> Result<()> {
    let path = RunConfig::require(&cfg.paths.judgments, "judgments")?;
    man.add_input(path)?;
    let sets = read_judgments(path)?;

    let mut rows = Vec::new();
    for task in [Task::TextOnly, Task::TextImage] {
        let subset: Vec<JudgmentSet> = sets.iter().filter(|s| s.task == task).cloned().collect();
        if subset.is_empty() {
            continue;
        }
        let pct = matching_percent(&subset)?;
        let kappa = fleiss_kappa(&subset, &Vote::all())?;
        rows.push((task, subset.len(), pct, kappa));
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput("judgment sets"));
    }

    let mut text = format!(
        "{:<12} {:>6} {:>14} {:>14}\n",
        "task", "posts", "matching_pct", "fleiss_kappa"
    );
    for (task, n, pct, kappa) in &rows {
        text.push_str(&format!(
            "{:<12} {:>6} {:>14.4} {:>14.6}\n",
            task_name(*task),
            n,
            pct,
            kappa
        ));
    }
    fs::write(out.join("agreement.txt"), &text)?;
    man.add_output(out, "agreement.txt")?;
    print!("{text}");
    Ok(())
}
