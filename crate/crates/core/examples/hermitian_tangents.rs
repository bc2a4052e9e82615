//! Hermitian varieties over GF(4) and GF(9), and tangent-line families.

use std::sync::Arc;

use kakeya_lab::gf::Field;
use kakeya_lab::hermitian::{build_hermitian, build_tangent_line_family, phi, HermitianMatrix};
use kakeya_lab::poly::Rational;

fn main() -> kakeya_lab::Result<()> {
    for q in [4u64, 9] {
        let f = Arc::new(Field::with_order(q)?);
        for n in [2usize, 3] {
            let v = build_hermitian(HermitianMatrix::identity(f.clone(), n + 1)?)?;
            println!("H({n},{q}): {} points, expected {}", v.len(), phi(n as u32, q));
        }
        let v = build_hermitian(HermitianMatrix::identity(f.clone(), 4)?)?;
        let c = v.points()[0];
        let t = v.tangent_lines_at(&c)?;
        let at: Vec<String> = c.coords().iter().map(|&x| f.format(x)).collect();
        println!("  tangent lines at ({}): {}", at.join(":"), t.len());
        for l in t.iter().take(2) {
            println!("    {:?}", v.classify_line(l)?);
        }

        let (fam, r) = build_tangent_line_family(&v, Rational::new(1, 2), 1)?;
        println!(
            "  half the points: {} lines, {} affine lines covering {} of {} points, max plane occupancy {}",
            fam.lines.len(),
            r.affine_lines,
            r.affine_covered,
            q.pow(3),
            r.max_plane_occupancy
        );
    }
    Ok(())
}
