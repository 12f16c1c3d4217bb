//! Project one camera's raw detections into the unified landmark and group
//! them into per-person tracks.

use roomtrack::fusion::{project_detection, tracks_from_samples};
use roomtrack::pipeline::calibrate_scenario;
use roomtrack::simulate;
use roomtrack::simulator::presets;

fn main() -> roomtrack::Result<()> {
    let scenario = presets::crossing_room(0);
    let calibrations = calibrate_scenario(&scenario, 2.0)?;
    let output = simulate(&scenario)?;

    let stream = output.stream("K2").expect("K2 is in the preset");
    let cal = &calibrations["K2"];
    let samples = stream
        .detections
        .iter()
        .map(|d| project_detection(cal, d))
        .collect::<roomtrack::Result<Vec<_>>>()?;

    for (p, truth) in samples.iter().zip(&stream.truth).step_by(15) {
        let s = &p.sample;
        println!(
            "t={:.3}  projected ({:.3}, {:.3})  true ({:.3}, {:.3})  quality {:.2}",
            s.t, s.pos.x, s.pos.y, truth.pos.x, truth.pos.y, s.quality
        );
    }

    let (tracks, dropped) = tracks_from_samples(&samples)?;
    for t in &tracks {
        println!(
            "{}: {} samples from {:.2} s to {:.2} s",
            t.track_id(),
            t.len(),
            t.start(),
            t.end()
        );
    }
    assert_eq!(dropped, 0);
    Ok(())
}
