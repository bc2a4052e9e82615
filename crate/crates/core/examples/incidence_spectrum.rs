//! Singular values of the point-line incidence matrix, and the mixing
//! inequality on random pairs.

use std::sync::Arc;

use kakeya_lab::geom::{AffineSpace, LineFamily, PointSet};
use kakeya_lab::gf::Field;
use kakeya_lab::incidence::{
    cover_fraction_check, generate_planes, incidence_spectrum, mixing_discrepancy_check, CoverGenerator,
};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> kakeya_lab::Result<()> {
    for q in [2u64, 3, 4, 5] {
        let space = AffineSpace::new(Arc::new(Field::with_order(q)?), 3);
        let s = incidence_spectrum(&space)?;
        println!(
            "q={q}: sigma1 {:.4} sigma2 {:.4} (numeric {:?}), gram ok {:?}",
            s.sigma1, s.sigma2, s.numeric, s.gram_identity
        );
    }

    let space = AffineSpace::new(Arc::new(Field::with_order(5)?), 3);
    let all = space.lines();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (np, nl) in [(10, 10), (60, 200), (120, 600)] {
        let pts = PointSet::from_indices(space.clone(), sample(&mut rng, space.size(), np).into_vec());
        let lines = LineFamily::from_lines(
            space.clone(),
            sample(&mut rng, all.len(), nl).into_iter().map(|i| all[i]),
        );
        let r = mixing_discrepancy_check(&pts, &lines)?;
        println!(
            "|P|={np} |L|={nl}: I={} discrepancy {:.5} <= {:.5}: {}",
            r.incidences, r.discrepancy, r.allowance, r.holds
        );
    }

    for k in [2usize, 3] {
        let planes = generate_planes(&space, k * 5, CoverGenerator::Parallel)?;
        let c = cover_fraction_check(&space, &planes)?;
        println!("{} parallel planes cover {} of {} (bound {:.1})", c.count, c.covered, c.total, c.bound);
    }
    Ok(())
}
