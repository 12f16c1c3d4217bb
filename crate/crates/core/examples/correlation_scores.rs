//! How two samples and two trajectories are scored against each other.

use roomtrack::fusion::{sample_correlation, trajectory_correlation, Sample, Track};
use roomtrack::{MergeConfig, UnifiedPoint};

fn sample(t: f64, x: f64, y: f64, quality: f64, camera: &str) -> Sample {
    Sample {
        t,
        pos: UnifiedPoint::new(x, y),
        quality,
        source_camera: camera.into(),
    }
}

fn main() -> roomtrack::Result<()> {
    let a = sample(0.0, 1.0, 1.0, 0.9, "K1");
    for (dt, dx) in [(0.0, 0.0), (0.0, 0.5), (0.3, 0.0), (0.0, 1.5)] {
        let b = sample(dt, 1.0 + dx, 1.0, 0.9, "K2");
        let pair = sample_correlation(&a, &b)?;
        println!(
            "dt={dt:.1} s  d={:.1} m  ->  D={:+.3}  Q={:.3}  C={:+.3}",
            pair.d, pair.distance_factor, pair.quality, pair.c
        );
    }

    // A straight walk seen by two cameras, and a second person far away.
    let walk = |camera: &str, offset: f64| -> roomtrack::Result<Track> {
        let samples = (0..60)
            .map(|i| {
                let t = i as f64 / 30.0;
                sample(t, 1.0 + 1.2 * t, 2.0 + offset, 0.8, camera)
            })
            .collect();
        Track::new(format!("{camera}/{offset}"), samples)
    };
    let cfg = MergeConfig::default();
    let same = trajectory_correlation(&walk("K1", 0.0)?, &walk("K2", 0.0)?, &cfg);
    let other = trajectory_correlation(&walk("K1", 0.0)?, &walk("K2", 1.5)?, &cfg);
    println!("same person:      C = {:.2} over {} pairs", same.c, same.n_pairs());
    println!("different person: C = {:.2} over {} pairs", other.c, other.n_pairs());
    println!("threshold {}: peer the first, not the second", cfg.threshold);
    Ok(())
}
