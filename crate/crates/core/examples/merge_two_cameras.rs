//! The whole chain on one person walking through two cameras: calibrate,
//! project, peer and merge into one continuous track.

use roomtrack::pipeline::run_pipeline;
use roomtrack::simulator::presets;
use roomtrack::MergeConfig;

fn main() -> roomtrack::Result<()> {
    let run = run_pipeline(&presets::crossing_room(0), &MergeConfig::default())?;

    for (camera, tracks) in &run.tracks_by_camera {
        for t in tracks {
            println!(
                "{camera}: {} covers {:.2} s to {:.2} s",
                t.track_id(),
                t.start(),
                t.end()
            );
        }
    }
    for (report, decision) in run.outcome.reports.iter().zip(&run.outcome.decisions) {
        println!(
            "{} vs {}: C = {:.2} over {} pairs, {}",
            report.track_a,
            report.track_b,
            report.c,
            report.n_pairs(),
            decision.as_str()
        );
    }
    for fused in &run.fused {
        let gap = fused.samples().windows(2).map(|w| w[1].t - w[0].t).fold(0.0, f64::max);
        println!(
            "fused {}: {} samples, {:.2} s to {:.2} s, largest gap {:.3} s",
            fused.track_id(),
            fused.len(),
            fused.start(),
            fused.end(),
            gap
        );
    }
    Ok(())
}
