//! Interpolate a low-degree polynomial vanishing to high order on a point
//! set, then watch it restrict to a line.

use std::sync::Arc;

use kakeya_lab::geom::{AffineSpace, PointSet};
use kakeya_lab::gf::Field;
use kakeya_lab::poly::{count_capped_monomials, interpolate_vanishing, write_poly, Rational};

fn main() -> kakeya_lab::Result<()> {
    let q = 5u32;
    for m in [Rational::new(1, 2), Rational::new(1, 1), Rational::new(2, 1)] {
        println!("monomials of AG(3,{q}) with degree < {m} q: {}", count_capped_monomials(3, q, m));
    }

    let f = Arc::new(Field::with_order(q as u64)?);
    let space = AffineSpace::new(f.clone(), 3);
    // ten points on the plane z = 0, asked to vanish to order 2
    let s1 = PointSet::from_indices(space.clone(), (0..10).map(|i| i * q as usize));
    let s2 = PointSet::empty(space.clone());
    let g = interpolate_vanishing(&s1, 2, &s2, 0, Rational::new(2, 1))?;
    println!("degree {:?}, {} terms", g.total_degree(), g.terms().len());
    print!("{}", write_poly(&g));

    for p in s1.points().take(3) {
        let at: Vec<String> = p.coords().iter().map(|&c| f.format(c)).collect();
        println!("multiplicity at ({}): {:?}", at.join(","), g.multiplicity_at(p.coords()));
    }

    let (a, b) = (space.point(0), space.point(1));
    let r = g.restrict_to_line(a.coords(), b.coords());
    println!("restricted to a line: degree {:?}, zeros with multiplicity {:?}", r.degree(), r.zeros_with_multiplicity());
    Ok(())
}
