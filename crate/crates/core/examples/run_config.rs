//! Parse an experiment description, run it, and read back the artifacts.
//!
//! Pass a path to a config file, or nothing to use a built-in scenario.

use quantum_queue::experiment::{list_scenarios, lookup, parse_config, run_experiment};

fn main() -> quantum_queue::Result<()> {
    for entry in list_scenarios() {
        println!("{:<22} {}", entry.name, entry.description());
    }

    let mut cfg = match std::env::args().nth(1) {
        Some(path) => parse_config(&std::fs::read_to_string(&path)?)?,
        None => lookup("map-2state")?.config()?,
    };
    cfg.monte_carlo.paths = 2000;
    cfg.limits.enabled = false;

    let out = std::env::temp_dir().join(format!("qqueue-{}", cfg.name));
    let outcome = run_experiment(&cfg, &out)?;
    println!(
        "\n{}: {} curves, {} of {} rows outside the empirical interval",
        cfg.name,
        outcome.curves.len(),
        outcome.violations.len(),
        outcome.checked_rows
    );
    for file in ["bounds.csv", "empirical.csv", "summary.txt"] {
        let bytes = std::fs::metadata(out.join(file))?.len();
        println!("  {} ({bytes} bytes)", out.join(file).display());
    }
    Ok(())
}
