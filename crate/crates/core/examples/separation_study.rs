//! How far apart in time must two people on the same path be before the
//! correlation stops confusing them?

use roomtrack::evaluation::{separation_study, DEFAULT_OFFSETS};
use roomtrack::simulator::presets;
use roomtrack::MergeConfig;

fn main() -> roomtrack::Result<()> {
    let cfg = MergeConfig::default();
    for seed in 0..3 {
        let rows = separation_study(&presets::crossing_room(seed), &DEFAULT_OFFSETS, &cfg)?;
        let line: Vec<String> = rows
            .iter()
            .map(|r| format!("{:.2} s: {:+6.2} ({} pairs)", r.offset, r.c, r.n_pairs))
            .collect();
        println!("seed {seed}: {}", line.join(" | "));
    }
    println!("tracks are peered at C >= {}", cfg.threshold);
    Ok(())
}
