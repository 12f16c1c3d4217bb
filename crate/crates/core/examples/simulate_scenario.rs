//! Describe a room, simulate it and write the streams in the text formats
//! the command line reads.

use std::f64::consts::FRAC_PI_2;

use roomtrack::io;
use roomtrack::simulator::Occluder;
use roomtrack::{simulate, CameraModel, Scenario, UnifiedPoint, WalkerPath};

fn main() -> roomtrack::Result<()> {
    let cameras = vec![
        CameraModel::new("north", UnifiedPoint::new(3.0, 6.0), std::f64::consts::PI),
        CameraModel::new("west", UnifiedPoint::new(0.0, 3.0), -FRAC_PI_2).with_clock_offset(0.02),
    ];
    let walkers = vec![
        WalkerPath::at_speed(
            "ana",
            0.0,
            1.0,
            &[UnifiedPoint::new(1.0, 2.0), UnifiedPoint::new(4.0, 4.5)],
        ),
        WalkerPath::standing("bo", UnifiedPoint::new(2.0, 4.0)),
    ];
    let mut scenario = Scenario::new(cameras, walkers, 4.0).with_seed(11);
    scenario.occluders.push(Occluder {
        min: UnifiedPoint::new(2.4, 4.6),
        max: UnifiedPoint::new(2.8, 5.0),
    });

    let output = simulate(&scenario)?;
    for stream in &output.streams {
        println!("{}: {} detections", stream.camera_id, stream.detections.len());
    }

    let dir = std::env::temp_dir().join("roomtrack-simulate-example");
    std::fs::create_dir_all(&dir)?;
    io::write_scenario(dir.join("scenario.toml"), &scenario)?;
    for stream in &output.streams {
        let file = std::fs::File::create(dir.join(format!("{}.detections.csv", stream.camera_id)))?;
        io::write_detections(file, &stream.detections)?;
    }
    io::write_ground_truth(
        std::fs::File::create(dir.join("ground_truth.csv"))?,
        output.ground_truth(),
    )?;
    println!("wrote {}", dir.display());

    // Same scenario and seed, same streams.
    assert_eq!(simulate(&scenario)?.streams, output.streams);
    let reloaded = io::read_scenario(dir.join("scenario.toml"))?;
    println!(
        "reloaded {} cameras and {} walkers",
        reloaded.cameras.len(),
        reloaded.walkers.len()
    );
    Ok(())
}
