//! Random and structured line families, looking for unusually small unions.

use kakeya_lab::nikodym::{conjecture_harness, Generator, DEFAULT_ALARM_RATIO};

fn main() -> kakeya_lab::Result<()> {
    let q = 5u64;
    let lines = (0.62 * (q as f64).powi(3)).ceil() as usize;
    let gens = [
        Generator::UniformRandom { lines },
        Generator::PlaneCappedRandom { lines, cap: 11 },
        Generator::HermitianTangent { alpha: "1/2".into() },
        Generator::ConicDual { fraction: "0.62".into() },
    ];
    for gen in &gens {
        // the tangent family needs a square field
        let q = if matches!(gen, Generator::HermitianTangent { .. }) { 4 } else { q };
        let recs = conjecture_harness(gen, q, 5, 42, DEFAULT_ALARM_RATIO)?;
        let min = recs.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
        let alarms = recs.iter().filter(|r| r.alarm).count();
        println!("{:<20} q={q} trials {} min ratio {min:.3} alarms {alarms}", gen.name(), recs.len());
        for r in recs.iter().take(2) {
            println!("    {}", serde_json::to_string(r).expect("record serializes"));
        }
    }
    Ok(())
}
