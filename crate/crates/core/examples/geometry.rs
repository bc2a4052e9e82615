//! Points, lines, directions and planes of AG(3,q), and PG(2,q).

use std::sync::Arc;

use kakeya_lab::geom::{AffineSpace, ProjectiveSpace};
use kakeya_lab::gf::Field;

fn main() -> kakeya_lab::Result<()> {
    let f = Arc::new(Field::with_order(4)?);
    let space = AffineSpace::new(f.clone(), 3);
    println!(
        "AG(3,4): {} points, {} directions, {} lines, {} planes",
        space.size(),
        space.direction_count(),
        space.line_count(),
        space.planes().len()
    );

    let x = space.point(17);
    let y = space.point(42);
    let line = space.line_through(&x, &y).expect("distinct points");
    let pts: Vec<_> = space.line_points(&line).map(|p| space.index(&p)).collect();
    println!("line through #17 and #42: base #{} , points {pts:?}", space.index(&line.base));
    println!("lines through #17: {}", space.lines_through(&x).len());
    println!("parallel class of that direction: {} lines", space.parallel_class(&line.dir).len());

    let planes = space.planes_containing_line(&line);
    println!("planes containing it: {}", planes.len());
    let inside = space.lines_in_plane(&planes[0]);
    println!("lines inside the first: {}", inside.len());

    let pg = ProjectiveSpace::new(f, 2);
    let lines = pg.lines();
    println!("PG(2,4): {} points, {} lines, {} points per line", pg.point_count(), lines.len(), pg.line_members(&lines[0]).len());
    Ok(())
}
