//! How few points can `~q^3/2` lines cover? The conic-dual family against
//! the mixing lower bound.

use std::sync::Arc;

use kakeya_lab::geom::{AffineSpace, LineFamily};
use kakeya_lab::gf::Field;
use kakeya_lab::nikodym::{build_conic_dual_line_family, union_report};
use kakeya_lab::poly::Rational;

fn main() -> kakeya_lab::Result<()> {
    println!("{:>3} {:>6} {:>7} {:>7} {:>6}", "q", "lines", "covered", "upper", "ratio");
    for q in [5u64, 7, 9, 11, 13] {
        let (fam, r) = build_conic_dual_line_family(q, Rational::new(62, 100))?;
        assert_eq!(fam.len(), r.lines);
        println!(
            "{q:>3} {:>6} {:>7} {:>7} {:>6.3}",
            r.lines, r.covered, r.covered_upper, r.ratio
        );
    }

    // a generic family the same size covers nearly everything
    let space = AffineSpace::new(Arc::new(Field::with_order(7)?), 3);
    let all = space.lines();
    let fam = LineFamily::from_lines(space.clone(), all.into_iter().step_by(3));
    let u = union_report(&fam)?;
    println!(
        "every third line of AG(3,7): {} lines cover {} points; mixing forces at least {}",
        u.lines, u.covered, u.implied_lower_bound
    );
    Ok(())
}
