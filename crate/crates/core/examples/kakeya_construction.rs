//! The quadratic-residue Kakeya set: build, verify, and compare sizes.

use kakeya_lab::kakeya::{
    build_quadratic_residue_set, integer_multiplicity_bound, qr_size, qr_size_bound, verify_kakeya,
};

fn main() -> kakeya_lab::Result<()> {
    println!("{:>3} {:>6} {:>6} {:>10} {:>8}", "q", "size", "formula", "q(q+1)²/4+q²", "m=2 bound");
    for q in [3u64, 5, 7, 9, 11, 13, 17] {
        let set = build_quadratic_residue_set(q)?;
        let check = verify_kakeya(&set);
        assert!(check.is_kakeya());
        println!(
            "{q:>3} {:>6} {:>6} {:>10} {:>8}",
            set.len(),
            qr_size(q),
            qr_size_bound(q),
            integer_multiplicity_bound(q as u32, 2)
        );
    }

    let set = build_quadratic_residue_set(5)?;
    let w = verify_kakeya(&set).witness().expect("kakeya");
    let space = set.space();
    for d in space.directions().iter().take(4) {
        let l = w.line_for(d).expect("every direction");
        let pts: Vec<_> = space.line_points(l).map(|p| space.index(&p)).collect();
        let dir: Vec<String> = d.coords().iter().map(|&c| space.field().format(c)).collect();
        println!("direction ({}): {pts:?}", dir.join(","));
    }

    // GF(2^k) has no odd quadratic-residue structure
    println!("q=8: {}", build_quadratic_residue_set(8).unwrap_err());
    Ok(())
}
