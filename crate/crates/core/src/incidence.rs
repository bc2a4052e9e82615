//! Point-line incidences in AG(3,q) and the spectral bounds built on them.
//!
//! The bipartite point-line incidence graph has points of degree `q^2+q+1`
//! and lines of degree `q`. Two distinct points share exactly one line, so
//! `N N^T = (q^2+q) I + J`, giving singular values `sqrt(q(q^2+q+1))` and
//! `sqrt(q^2+q)`. All bound comparisons below are done in exact rationals
//! after squaring.

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{AffineSpace, LineFamily, Plane, PointSet};
use crate::gf::Fe;

/// Largest q for the dense numerical spectrum.
pub const MAX_NUMERIC_Q: u32 = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IncidenceStats {
    pub q: u32,
    pub points: usize,
    pub lines: usize,
    pub incidences: u64,
}

pub fn count_incidences(points: &PointSet, lines: &LineFamily) -> Result<IncidenceStats> {
    let space = points.space();
    if space != lines.space() {
        return Err(Error::MismatchedField {
            left: space.q(),
            right: lines.space().q(),
        });
    }
    let incidences = lines
        .lines()
        .par_iter()
        .map(|l| {
            space
                .line_point_indices(l)
                .filter(|&i| points.contains(i))
                .count() as u64
        })
        .sum();
    Ok(IncidenceStats {
        q: space.q(),
        points: points.len(),
        lines: lines.len(),
        incidences,
    })
}

fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn f(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn point_total(q: u32) -> u64 {
    (q as u64).pow(3)
}

/// `q^4 + q^3 + q^2`, the number of lines of AG(3,q).
pub fn line_total(q: u32) -> u64 {
    let q = q as u64;
    q * q * (q * q + q + 1)
}

/// Edges of the incidence graph, `q (q^4 + q^3 + q^2)`.
pub fn edge_total(q: u32) -> u64 {
    q as u64 * line_total(q)
}

/// `lambda^2 = sigma_2^2 / sigma_1^2 = (q+1)/(q^2+q+1)`.
pub fn lambda_squared(q: u32) -> BigRational {
    let q = q as u64;
    ratio(q + 1, q * q + q + 1)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub q: u32,
    pub sigma1: f64,
    pub sigma2: f64,
    pub lambda: f64,
    pub point_degree: u64,
    pub line_degree: u64,
    /// Entrywise check of `N N^T = (q^2+q) I + J`; `None` when too large to build.
    pub gram_identity: Option<bool>,
    /// Top two singular values from a dense eigendecomposition of `N N^T`.
    pub numeric: Option<(f64, f64)>,
}

impl SpectrumReport {
    pub fn numeric_error(&self) -> Option<f64> {
        self.numeric
            .map(|(a, b)| (a - self.sigma1).abs().max((b - self.sigma2).abs()))
    }
}

/// `N N^T` as a dense row-major `q^3 x q^3` integer matrix, built line by line.
pub fn gram_matrix(space: &AffineSpace) -> Vec<u32> {
    let n = space.size();
    let mut g = vec![0u32; n * n];
    for line in space.lines() {
        let pts: Vec<usize> = space.line_point_indices(&line).collect();
        for &a in &pts {
            for &b in &pts {
                g[a * n + b] += 1;
            }
        }
    }
    g
}

pub fn verify_gram_identity(space: &AffineSpace) -> bool {
    let q = space.q();
    let n = space.size();
    let diag = q * q + q + 1;
    let g = gram_matrix(space);
    (0..n).into_par_iter().all(|i| {
        (0..n).all(|j| g[i * n + j] == if i == j { diag } else { 1 })
    })
}

/// Top two singular values of the incidence matrix from `N N^T`.
pub fn numeric_singular_values(space: &AffineSpace) -> Result<(f64, f64)> {
    if space.q() > MAX_NUMERIC_Q {
        return Err(Error::FieldTooLarge(format!(
            "dense spectrum needs q <= {MAX_NUMERIC_Q}, got {}",
            space.q()
        )));
    }
    let n = space.size();
    let g = gram_matrix(space);
    let m = DMatrix::from_fn(n, n, |i, j| g[i * n + j] as f64);
    let mut eig: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    Ok((eig[0].max(0.0).sqrt(), eig[1].max(0.0).sqrt()))
}

pub fn incidence_spectrum(space: &AffineSpace) -> Result<SpectrumReport> {
    if space.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: space.dim(),
        });
    }
    let q = space.q();
    let qf = q as f64;
    let sigma1 = (qf * (qf * qf + qf + 1.0)).sqrt();
    let sigma2 = (qf * qf + qf).sqrt();
    let small = q <= MAX_NUMERIC_Q;
    Ok(SpectrumReport {
        q,
        sigma1,
        sigma2,
        lambda: sigma2 / sigma1,
        point_degree: (q as u64).pow(2) + q as u64 + 1,
        line_degree: q as u64,
        gram_identity: small.then(|| verify_gram_identity(space)),
        numeric: if small {
            Some(numeric_singular_values(space)?)
        } else {
            None
        },
    })
}

fn densities(points: u64, lines: u64, q: u32) -> Result<(BigRational, BigRational)> {
    if points > point_total(q) {
        return Err(Error::OutOfRange(format!(
            "{points} points exceed q^3 = {}",
            point_total(q)
        )));
    }
    if lines > line_total(q) {
        return Err(Error::OutOfRange(format!(
            "{lines} lines exceed q^4+q^3+q^2 = {}",
            line_total(q)
        )));
    }
    Ok((ratio(points, point_total(q)), ratio(lines, line_total(q))))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IncidenceBound {
    pub q: u32,
    pub points: u64,
    pub lines: u64,
    /// `e(G) (ab + lambda sqrt(ab(1-a)(1-b)))` with exact totals.
    pub exact: f64,
    /// `|P||L|/q^2 + q sqrt(|P||L|(1 - |P|/q^3)(1 - |L|/q^4))`, the large-q envelope.
    pub asymptotic: f64,
}

/// Upper bound on `I(P, L)` for any `|P|` points and `|L|` lines.
pub fn mixing_incidence_bound(points: u64, lines: u64, q: u32) -> Result<IncidenceBound> {
    let (a, b) = densities(points, lines, q)?;
    let one = BigRational::one();
    let x = &a * &b * (&one - &a) * (&one - &b);
    let lam = f(&lambda_squared(q)).sqrt();
    let exact = edge_total(q) as f64 * (f(&(&a * &b)) + lam * f(&x).sqrt());
    let (p, l, qf) = (points as f64, lines as f64, q as f64);
    let asymptotic = p * l / (qf * qf)
        + qf * (p * l * (1.0 - p / qf.powi(3)) * (1.0 - l / qf.powi(4)).max(0.0)).sqrt();
    Ok(IncidenceBound {
        q,
        points,
        lines,
        exact,
        asymptotic,
    })
}

/// Whether `incidences <= e(G)(ab + lambda sqrt(ab(1-a)(1-b)))`, decided exactly.
pub fn within_mixing_bound(incidences: u64, points: u64, lines: u64, q: u32) -> Result<bool> {
    let (a, b) = densities(points, lines, q)?;
    let one = BigRational::one();
    let excess = ratio(incidences, edge_total(q)) - &a * &b;
    if !excess.is_positive() {
        return Ok(true);
    }
    Ok(&excess * &excess <= lambda_squared(q) * &a * &b * (&one - &a) * (&one - b))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingReport {
    pub q: u32,
    pub points: usize,
    pub lines: usize,
    pub incidences: u64,
    /// `|e/e(G) - ab|`.
    pub discrepancy: f64,
    /// `lambda sqrt(ab(1-a)(1-b))`.
    pub allowance: f64,
    pub holds: bool,
}

/// Both sides of `|e(S,T)/e(G) - ab| <= lambda sqrt(ab(1-a)(1-b))`, with the
/// verdict taken from the squared rational comparison.
pub fn mixing_discrepancy_check(points: &PointSet, lines: &LineFamily) -> Result<MixingReport> {
    let stats = count_incidences(points, lines)?;
    mixing_report(stats)
}

pub fn mixing_report(stats: IncidenceStats) -> Result<MixingReport> {
    let q = stats.q;
    let (a, b) = densities(stats.points as u64, stats.lines as u64, q)?;
    let one = BigRational::one();
    let lhs = (ratio(stats.incidences, edge_total(q)) - &a * &b).abs();
    let x = lambda_squared(q) * &a * &b * (&one - &a) * (&one - &b);
    Ok(MixingReport {
        q,
        points: stats.points,
        lines: stats.lines,
        incidences: stats.incidences,
        discrepancy: f(&lhs),
        allowance: f(&x).sqrt(),
        holds: &lhs * &lhs <= x,
    })
}

/// Smallest density `a` of a point set that can carry all `q|L|` incidences
/// of `|L|` lines: `a >= b / (b + lambda^2 (1 - b))`.
pub fn implied_point_density(lines: u64, q: u32) -> Result<BigRational> {
    let (_, b) = densities(0, lines, q)?;
    if b.is_zero() {
        return Ok(BigRational::zero());
    }
    let denom = &b + lambda_squared(q) * (BigRational::one() - &b);
    Ok(b / denom)
}

/// `ceil(a_min q^3)` for [`implied_point_density`].
pub fn implied_point_lower_bound(lines: u64, q: u32) -> Result<u64> {
    let a = implied_point_density(lines, q)? * int(point_total(q));
    Ok(a.ceil().to_integer().to_u64().unwrap())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverReport {
    pub q: u32,
    pub count: usize,
    pub k: f64,
    pub covered: usize,
    pub total: usize,
    /// `(1 - 1/(k - 1 + 1/k)) q^d = (k-1)^2/(k^2-k+1) q^d`.
    pub bound: f64,
    pub holds: bool,
}

fn cover_report(q: u32, count: usize, covered: usize, total: usize) -> Result<CoverReport> {
    let k = ratio(count as u64, q as u64);
    if k <= BigRational::one() {
        return Err(Error::TooFewPlanes {
            planes: count,
            k: f(&k),
        });
    }
    let one = BigRational::one();
    let km1 = &k - &one;
    let factor = &km1 * &km1 / (&k * &k - &k + &one);
    let bound = factor * int(total as u64);
    Ok(CoverReport {
        q,
        count,
        k: f(&k),
        covered,
        total,
        bound: f(&bound),
        holds: int(covered as u64) >= bound,
    })
}

/// Points of AG(3,q) on at least one of `kq` planes against the covering bound.
pub fn cover_fraction_check(space: &AffineSpace, planes: &[Plane]) -> Result<CoverReport> {
    let mut covered = PointSet::empty(space.clone());
    for p in planes {
        for pt in space.plane_points(p) {
            covered.insert(space.index(&pt));
        }
    }
    cover_report(space.q(), planes.len(), covered.len(), space.size())
}

/// Planar analogue: `kq` lines of AG(2,q).
pub fn line_cover_fraction_check(lines: &LineFamily) -> Result<CoverReport> {
    let space = lines.space();
    if space.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: space.dim(),
        });
    }
    cover_report(space.q(), lines.len(), lines.union().len(), space.size())
}

/// How a set of planes (or planar lines) is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CoverGenerator {
    /// Whole parallel classes, in normal order.
    Parallel,
    /// Objects through the origin; for planes, those containing the last axis come first.
    Pencil,
    /// Uniform without replacement.
    Random { seed: u64 },
}

fn pick<T: Clone>(all: Vec<T>, ordered: Vec<T>, count: usize, gen: CoverGenerator) -> Result<Vec<T>> {
    match gen {
        CoverGenerator::Random { seed } => {
            if count > all.len() {
                return Err(Error::GeneratorInfeasible(format!(
                    "{count} requested from {}",
                    all.len()
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut idx = sample(&mut rng, all.len(), count).into_vec();
            idx.sort_unstable();
            Ok(idx.into_iter().map(|i| all[i].clone()).collect())
        }
        _ => {
            if count > ordered.len() {
                return Err(Error::GeneratorInfeasible(format!(
                    "{count} requested, generator yields {}",
                    ordered.len()
                )));
            }
            Ok(ordered.into_iter().take(count).collect())
        }
    }
}

pub fn generate_planes(space: &AffineSpace, count: usize, gen: CoverGenerator) -> Result<Vec<Plane>> {
    let all = space.planes();
    let ordered = match gen {
        CoverGenerator::Parallel => all.clone(),
        CoverGenerator::Pencil => {
            let f = space.field();
            let axis = [Fe::ZERO, Fe::ZERO, Fe::ONE];
            let mut through: Vec<Plane> =
                all.iter().filter(|p| p.offset.is_zero()).copied().collect();
            through.sort_by_key(|p| (!f.dot(p.normal.coords(), &axis).is_zero(), *p));
            through
        }
        CoverGenerator::Random { .. } => Vec::new(),
    };
    pick(all, ordered, count, gen)
}

pub fn generate_planar_lines(space: &AffineSpace, count: usize, gen: CoverGenerator) -> Result<LineFamily> {
    let all = space.lines();
    let ordered = match gen {
        CoverGenerator::Parallel => all.clone(),
        CoverGenerator::Pencil => space.lines_through(&space.origin()),
        CoverGenerator::Random { .. } => Vec::new(),
    };
    Ok(LineFamily::from_lines(space.clone(), pick(all, ordered, count, gen)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use std::sync::Arc;

    fn space(q: u64, n: usize) -> AffineSpace {
        AffineSpace::new(Arc::new(Field::with_order(q).unwrap()), n)
    }

    #[test]
    fn full_incidence_count() {
        let s = space(3, 3);
        let st = count_incidences(&PointSet::full(s.clone()), &LineFamily::all(s.clone())).unwrap();
        assert_eq!(st.incidences, edge_total(3));
        let l = s.lines()[5];
        let pts = PointSet::from_indices(s.clone(), s.line_point_indices(&l).collect::<Vec<_>>());
        let fam = LineFamily::from_lines(s.clone(), [l]);
        assert_eq!(count_incidences(&pts, &fam).unwrap().incidences, 3);
        assert_eq!(
            count_incidences(&PointSet::empty(s.clone()), &fam).unwrap().incidences,
            0
        );
    }

    #[test]
    fn spectrum_small_fields() {
        for q in [2u64, 3] {
            let r = incidence_spectrum(&space(q, 3)).unwrap();
            assert_eq!(r.gram_identity, Some(true));
            assert!(r.numeric_error().unwrap() < 1e-8);
        }
        let r = incidence_spectrum(&space(2, 3)).unwrap();
        assert!((r.sigma1 - 14f64.sqrt()).abs() < 1e-12);
        assert!((r.sigma2 - 6f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn numeric_spectrum_refuses_large_fields() {
        assert!(matches!(
            numeric_singular_values(&space(11, 3)),
            Err(Error::FieldTooLarge(_))
        ));
    }

    #[test]
    fn trivial_bounds() {
        let b = mixing_incidence_bound(27, 20, 3).unwrap();
        assert!((b.exact - 60.0).abs() < 1e-9);
        assert_eq!(mixing_incidence_bound(10, 0, 3).unwrap().exact, 0.0);
        assert!(mixing_incidence_bound(28, 0, 3).is_err());
        assert!(within_mixing_bound(60, 27, 20, 3).unwrap());
        assert!(!within_mixing_bound(61, 27, 20, 3).unwrap());
    }

    #[test]
    fn plane_with_its_lines_satisfies_mixing() {
        let s = space(4, 3);
        let plane = s.planes()[3];
        let pts = PointSet::from_points(s.clone(), &s.plane_points(&plane));
        let fam = s.lines_in_plane(&plane);
        let r = mixing_discrepancy_check(&pts, &fam).unwrap();
        assert_eq!(r.incidences, 4 * 20);
        assert!(r.holds);
    }

    #[test]
    fn implied_density_is_consistent() {
        for q in [3u32, 5] {
            for lines in [1u64, 10, 100, line_total(q)] {
                let lb = implied_point_lower_bound(lines, q).unwrap();
                // the bound must admit itself (rounding up keeps it feasible)
                assert!(within_mixing_bound(q as u64 * lines, lb, lines, q).unwrap());
                if lb > 1 {
                    assert!(!within_mixing_bound(q as u64 * lines, lb - 1, lines, q).unwrap());
                }
            }
        }
        assert_eq!(implied_point_lower_bound(line_total(3), 3).unwrap(), 27);
    }

    #[test]
    fn cover_bounds() {
        let s = space(5, 3);
        let planes = generate_planes(&s, 10, CoverGenerator::Pencil).unwrap();
        let r = cover_fraction_check(&s, &planes).unwrap();
        assert!(r.holds);
        assert!((r.bound - 125.0 / 3.0).abs() < 1e-9);
        let all = s.planes();
        assert_eq!(cover_fraction_check(&s, &all).unwrap().covered, 125);
        assert!(matches!(
            cover_fraction_check(&s, &all[..5]),
            Err(Error::TooFewPlanes { .. })
        ));
        let s2 = space(5, 2);
        let lines = generate_planar_lines(&s2, 10, CoverGenerator::Parallel).unwrap();
        let r = line_cover_fraction_check(&lines).unwrap();
        assert_eq!(r.covered, 25);
        assert!(r.holds);
    }
}
