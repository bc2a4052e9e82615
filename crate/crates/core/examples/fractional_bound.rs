//! Fractional multiplicities: the optimized coefficient, and the full
//! interpolation argument run on small fields.

use std::sync::Arc;

use kakeya_lab::geom::{AffineSpace, PointSet};
use kakeya_lab::gf::Field;
use kakeya_lab::kakeya::{
    fractional_coefficient, fractional_pipeline, fractional_pipeline_with, optimize_fractional_bound,
    PipelineOptions,
};
use kakeya_lab::poly::Rational;

fn main() -> kakeya_lab::Result<()> {
    let opt = optimize_fractional_bound()?;
    println!("optimum m = {:.6}, coefficient {:.7}", opt.m, opt.coefficient);
    for b in &opt.branches {
        println!("  u={} branch: m = {:.6}, coefficient {:.7}", b.u, b.m, b.coefficient);
    }
    for m in [1.5, 1.8, 2.0, 2.5] {
        let u = if m <= 2.0 { 1 } else { 2 };
        println!("  c({m}) = {:.6}", fractional_coefficient(u, m));
    }

    // On a genuine Kakeya set the counting gate refuses to interpolate.
    match fractional_pipeline(7, 1, Rational::new(1, 2), 1) {
        Ok(r) => println!("gated q=7: {:?}", r.outcome),
        Err(e) => println!("gated q=7: {e}"),
    }

    // Ungated, the interpolation itself becomes infeasible.
    let opts = PipelineOptions { gated: false, ..PipelineOptions::default() };
    for q in [5u64, 7] {
        match fractional_pipeline_with(q, 1, Rational::new(1, 2), 1, &opts) {
            Ok(r) => println!(
                "ungated q={q}: |K|={} |S|={} degree {} outcome {:?}, {} witness lines short",
                r.set_size, r.sample_size, r.degree, r.outcome, r.shortfall_lines
            ),
            Err(e) => println!("ungated q={q}: {e}"),
        }
    }

    // A small non-Kakeya set: three parallel lines. Interpolation succeeds and
    // the restrictions to the contained lines are checked one by one.
    let space = AffineSpace::new(Arc::new(Field::with_order(7)?), 3);
    let dir = space.directions()[0];
    let lines: Vec<_> = (0..3).map(|i| space.line(&space.point(i * 7), &dir)).collect();
    let mut set = PointSet::empty(space.clone());
    for l in &lines {
        for i in space.line_point_indices(l) {
            set.insert(i);
        }
    }
    let opts = PipelineOptions { gated: false, set: Some(set), ..PipelineOptions::default() };
    let r = fractional_pipeline_with(7, 1, Rational::new(1, 2), 1, &opts)?;
    println!(
        "three lines, q=7: |K|={} |S|={} {} conditions, degree {}, {} directions missing, outcome {:?}",
        r.set_size, r.sample_size, r.conditions, r.degree, r.missing_directions, r.outcome
    );
    for l in &r.lines {
        println!("    {} zeros {:?} forced {}", l.direction, l.zeros, l.forced_zeros);
    }
    Ok(())
}
