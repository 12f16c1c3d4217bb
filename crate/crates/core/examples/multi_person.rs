//! Several people in the room at once: peering accuracy, and a threshold
//! derived from the labelled correlations of this deployment.

use roomtrack::evaluation::{labelled_correlations, matching_report, suggest_threshold};
use roomtrack::simulator::presets;
use roomtrack::MergeConfig;

fn main() -> roomtrack::Result<()> {
    let cfg = MergeConfig::default();
    let (mut same, mut different) = (Vec::new(), Vec::new());
    for seed in 0..5 {
        let scenario = presets::five_walkers(seed);
        let report = matching_report(&scenario, &cfg)?;
        println!(
            "seed {seed}: {} peerings, {} fused tracks, accuracy {:.2}",
            report.matches,
            report.tracks.len(),
            report.accuracy
        );
        let (s, d) = labelled_correlations(&scenario, &cfg)?;
        same.extend(s);
        different.extend(d);
    }
    let lowest_same = same.iter().copied().fold(f64::INFINITY, f64::min);
    let highest_other = different.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    println!("same person: C >= {lowest_same:.2}; different people: C <= {highest_other:.2}");
    if let Some(s) = suggest_threshold(&same, &different) {
        println!(
            "suggested threshold {:.2} (margin {:.2}, {} errors)",
            s.threshold, s.margin, s.errors
        );
    }

    let followers = matching_report(&presets::followers(0, 1.0), &cfg)?;
    for (track, walker, purity) in &followers.tracks {
        println!("followers: {track} belongs to {walker} ({:.0}%)", purity * 100.0);
    }
    Ok(())
}
