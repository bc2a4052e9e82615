//! Nikodym sets: verify, extract a witness, and compare the complement to
//! what the mixing inequality allows.

use std::sync::Arc;

use kakeya_lab::geom::{AffineSpace, PointSet};
use kakeya_lab::gf::Field;
use kakeya_lab::nikodym::{complement_report, golden_ratio_threshold, verify_nikodym, NikodymCheck};

fn main() -> kakeya_lab::Result<()> {
    let q = 5u64;
    let space = AffineSpace::new(Arc::new(Field::with_order(q)?), 3);

    // remove a plane's worth of points: still Nikodym?
    let plane: Vec<usize> = (0..space.size()).filter(|&i| space.point(i).coords()[2].is_zero()).collect();
    let mut set = PointSet::full(space.clone());
    for &i in &plane {
        set.remove(i);
    }
    report("minus the plane z=0", &set)?;

    let mut sparse = PointSet::full(space.clone());
    for i in (0..space.size()).step_by(7) {
        sparse.remove(i);
    }
    report("minus every 7th point", &sparse)?;

    let mut lone = PointSet::full(space.clone());
    for i in 0..space.size() {
        if space.point(i).coords().iter().all(|c| c.is_zero()) {
            continue;
        }
        lone.remove(i);
    }
    report("just the origin", &lone)?;

    println!("limit threshold: {:.12}", golden_ratio_threshold()?);
    Ok(())
}

fn report(name: &str, set: &PointSet) -> kakeya_lab::Result<()> {
    match verify_nikodym(set)? {
        NikodymCheck::Nikodym(w) => {
            let r = complement_report(&w)?;
            println!(
                "{name}: Nikodym, |complement| = {}, ratio {:.3}, largest allowed {}",
                r.complement, r.ratio, r.max_complement_exact
            );
        }
        NikodymCheck::Failing(pts) => println!("{name}: not Nikodym, {} bad points", pts.len()),
    }
    Ok(())
}
