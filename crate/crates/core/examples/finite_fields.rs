//! Arithmetic in GF(9): tables, Frobenius, conjugation and squares.
//!
//! cargo run --example finite_fields

use kakeya_lab::gf::Field;

fn main() -> kakeya_lab::Result<()> {
    let f = Field::with_order(9)?;
    println!("GF({}) = GF({})[x]/({:?})", f.order(), f.characteristic(), f.modulus());

    let elems: Vec<_> = f.elements().collect();
    print!("  *  |");
    for &b in &elems {
        print!(" {:>4}", f.format(b));
    }
    println!();
    for &a in &elems {
        print!("{:>4} |", f.format(a));
        for &b in &elems {
            print!(" {:>4}", f.format(f.mul(a, b)));
        }
        println!();
    }

    // x -> x^3 fixes the prime subfield; x -> x^{sqrt q} is the Hermitian conjugation.
    for a in f.nonzero() {
        let inv = f.inv(a).expect("nonzero");
        println!(
            "{:>4}: inv {:>4}  frob {:>4}  conj {:>4}  square? {}",
            f.format(a),
            f.format(inv),
            f.format(f.frobenius(a)),
            f.format(f.conjugate(a)?),
            f.is_square(a)
        );
    }

    let squares = f.nonzero().filter(|&a| f.is_square(a)).count();
    println!("nonzero squares: {squares} of {}", f.order() - 1);

    for q in [2u64, 8, 25, 27, 49, 121] {
        let g = Field::with_order(q)?;
        println!("GF({q}): p={} k={}", g.characteristic(), g.degree());
    }
    // 6 and 12 are not prime powers
    for q in [6u64, 12] {
        println!("GF({q}): {}", Field::with_order(q).unwrap_err());
    }
    Ok(())
}
