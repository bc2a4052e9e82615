//! Randomized invariants across modules.

use std::sync::Arc;

use kakeya_lab::geom::{AffineSpace, LineFamily, PointSet, ProjPoint};
use kakeya_lab::gf::{Fe, Field};
use kakeya_lab::incidence::mixing_discrepancy_check;
use kakeya_lab::io::{read_line_family, read_point_set, write_line_family, write_point_set};
use kakeya_lab::poly::{count_capped_monomials, MultiPoly, Multiplicity, Rational};
use proptest::prelude::*;

const ORDERS: [u64; 8] = [2, 3, 4, 5, 7, 8, 9, 11];

fn field(q: u64) -> Arc<Field> {
    Arc::new(Field::with_order(q).unwrap())
}

fn order() -> impl Strategy<Value = u64> {
    prop::sample::select(ORDERS.to_vec())
}

fn small_order() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 4, 5])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(q in order(), a in 0u32..1000, b in 0u32..1000, c in 0u32..1000) {
        let f = field(q);
        let n = f.order();
        let (a, b, c) = (f.element(a % n), f.element(b % n), f.element(c % n));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
        prop_assert_eq!(f.mul(a, b), f.mul_slow(a, b));
        if !a.is_zero() {
            let inv = f.inv(a).unwrap();
            prop_assert_eq!(f.mul(a, inv), f.element(1));
            prop_assert_eq!(f.pow(a, q - 1), f.element(1));
        } else {
            prop_assert!(f.inv(a).is_none());
        }
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.parse(&f.format(a)).unwrap(), a);
    }

    #[test]
    fn monomial_count_matches_enumeration(n in 1u32..=3, q in 2u32..=8, num in 1i64..40, den in 1i64..8) {
        let m = Rational::new(num, den);
        let bound = m * Rational::from_integer(q as i64);
        let mut brute = 0u64;
        let total = (q as u64).pow(n);
        for code in 0..total {
            let (mut c, mut deg) = (code, 0i64);
            for _ in 0..n {
                deg += (c % q as u64) as i64;
                c /= q as u64;
            }
            if Rational::from_integer(deg) < bound {
                brute += 1;
            }
        }
        prop_assert_eq!(count_capped_monomials(n, q, m), brute);
    }

    #[test]
    fn shifted_and_hasse_multiplicities_agree(
        q in small_order(),
        raw in prop::collection::vec((0u32..5, 0u32..5, 0u32..5, 1u32..100), 0..6),
        at in (0u32..100, 0u32..100, 0u32..100),
    ) {
        let f = field(q);
        let n = f.order();
        let terms = raw.iter().map(|&(a, b, c, v)| {
            (vec![a % n, b % n, c % n], f.element(v % n))
        });
        let g = MultiPoly::from_terms(f.clone(), 3, terms).unwrap();
        let a = [f.element(at.0 % n), f.element(at.1 % n), f.element(at.2 % n)];
        let m = g.multiplicity_at(&a);
        prop_assert_eq!(m, g.multiplicity_by_hasse(&a));
        prop_assert_eq!(g.is_zero(), m == Multiplicity::Infinite);
        prop_assert_eq!(m.at_least(1), g.eval(&a).is_zero());
    }

    #[test]
    fn restriction_keeps_multiplicity(
        q in small_order(),
        raw in prop::collection::vec((0u32..5, 0u32..5, 0u32..5, 1u32..100), 1..6),
        pts in (0u32..100, 0u32..100, 0u32..100, 0u32..100),
        dir in (0u32..100, 0u32..100, 0u32..100),
    ) {
        let f = field(q);
        let n = f.order();
        let terms = raw.iter().map(|&(a, b, c, v)| {
            (vec![a % n, b % n, c % n], f.element(v % n))
        });
        let g = MultiPoly::from_terms(f.clone(), 3, terms).unwrap();
        let base = [f.element(pts.0 % n), f.element(pts.1 % n), f.element(pts.2 % n)];
        let mut b = [f.element(dir.0 % n), f.element(dir.1 % n), f.element(dir.2 % n)];
        if b.iter().all(|c| c.is_zero()) {
            b[0] = f.element(1);
        }
        let t0 = f.element(pts.3 % n);
        let x0: Vec<Fe> = (0..3).map(|i| f.add(base[i], f.mul(t0, b[i]))).collect();
        let r = g.restrict_to_line(&base, &b);
        match (g.multiplicity_at(&x0), r.multiplicity_at(t0)) {
            (_, Multiplicity::Infinite) => {}
            (Multiplicity::Infinite, m) => prop_assert_eq!(m, Multiplicity::Infinite),
            (Multiplicity::Finite(k), Multiplicity::Finite(j)) => prop_assert!(j >= k),
        }
    }

    #[test]
    fn point_set_text_round_trip(q in order(), dim in 2usize..=3, bits in prop::collection::vec(any::<bool>(), 1331)) {
        let space = AffineSpace::new(field(q), dim);
        let set = PointSet::from_indices(space.clone(), (0..space.size()).filter(|&i| bits[i]));
        let back = read_point_set(&write_point_set(&set)).unwrap();
        prop_assert_eq!(back, set);
    }

    #[test]
    fn line_family_text_round_trip(q in small_order(), picks in prop::collection::vec((0usize..10_000, 0usize..10_000), 0..40)) {
        let space = AffineSpace::new(field(q), 3);
        let dirs = space.directions();
        let lines = picks.iter().map(|&(p, d)| {
            space.line(&space.point(p % space.size()), &dirs[d % dirs.len()])
        });
        let fam = LineFamily::from_lines(space.clone(), lines);
        let text = write_line_family(&fam);
        let back = read_line_family(&text).unwrap();
        prop_assert_eq!(back.lines(), fam.lines());
        prop_assert_eq!(write_line_family(&back), text);
    }

    #[test]
    fn line_canonical_form_is_shared_by_all_its_points(q in order(), p in 0usize..10_000, d in 0usize..10_000, t in 0u32..100) {
        let space = AffineSpace::new(field(q), 3);
        let dirs = space.directions();
        let dir = dirs[d % dirs.len()];
        let x = space.point(p % space.size());
        let line = space.line(&x, &dir);
        let y = space.translate(&x, space.field().element(t % space.q()), &dir);
        prop_assert_eq!(space.line(&y, &dir), line);
        prop_assert_eq!(space.canonicalize(&line), line);
        prop_assert!(space.line_contains(&line, &y));
        prop_assert_eq!(space.line_points(&line).count(), q as usize);
        let scaled: Vec<Fe> = dir.coords().iter().map(|&c| space.field().mul(c, space.field().element(space.q() - 1))).collect();
        prop_assert_eq!(ProjPoint::normalize(space.field(), &scaled), Some(dir));
    }

    #[test]
    fn mixing_bound_holds_for_random_pairs(
        q in small_order(),
        pts in prop::collection::vec(0usize..10_000, 1..60),
        picks in prop::collection::vec((0usize..10_000, 0usize..10_000), 1..60),
    ) {
        let space = AffineSpace::new(field(q), 3);
        let dirs = space.directions();
        let set = PointSet::from_indices(space.clone(), pts.iter().map(|&i| i % space.size()));
        let lines = picks.iter().map(|&(p, d)| {
            space.line(&space.point(p % space.size()), &dirs[d % dirs.len()])
        });
        let fam = LineFamily::from_lines(space.clone(), lines);
        let r = mixing_discrepancy_check(&set, &fam).unwrap();
        prop_assert!(r.holds, "{:?}", r);
    }
}
