//! Nikodym sets, unions of lines, and the bounds tying them to incidences.
//!
//! A set `N` is Nikodym when every point `p` of the space lies on a line `l`
//! with `l \ {p}` inside `N`. For `p` outside `N` such a line meets the
//! complement only at `p`, so distinct complement points never share their
//! line and the first qualifying line per point already gives an injective
//! assignment.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{conic_dual_lines, max_concurrency, AffineSpace, Line, LineFamily, Plane, PointSet};
use crate::gf::{Fe, Field};
use crate::hermitian::{build_hermitian, build_tangent_line_family, HermitianMatrix};
use crate::incidence::{
    count_incidences, implied_point_lower_bound, line_total, mixing_incidence_bound,
    mixing_report, within_mixing_bound, MixingReport,
};
use crate::poly::{binomial, format_rational, Rational};

/// One line per complement point, meeting the complement only there.
#[derive(Clone, Debug, PartialEq)]
pub struct NikodymWitness {
    pub set: PointSet,
    /// `(point index, line)` in increasing point order.
    pub assignment: Vec<(usize, Line)>,
}

impl NikodymWitness {
    pub fn lines(&self) -> LineFamily {
        LineFamily::from_lines(
            self.set.space().clone(),
            self.assignment.iter().map(|(_, l)| *l),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NikodymCheck {
    Nikodym(NikodymWitness),
    /// Point indices with no qualifying line.
    Failing(Vec<usize>),
}

impl NikodymCheck {
    pub fn is_nikodym(&self) -> bool {
        matches!(self, NikodymCheck::Nikodym(_))
    }

    pub fn witness(self) -> Option<NikodymWitness> {
        match self {
            NikodymCheck::Nikodym(w) => Some(w),
            NikodymCheck::Failing(_) => None,
        }
    }
}

/// First line through `p` (canonical order) whose other points all lie in the set.
pub fn qualifying_line(set: &PointSet, p: usize) -> Option<Line> {
    let space = set.space();
    let mut lines = space.lines_through(&space.point(p));
    lines.sort();
    lines.into_iter().find(|l| {
        space
            .line_point_indices(l)
            .all(|i| i == p || set.contains(i))
    })
}

/// Checks every point of AG(n,q), `n` in {2, 3}, and extracts the complement assignment.
pub fn verify_nikodym(set: &PointSet) -> Result<NikodymCheck> {
    let space = set.space();
    if !(2..=3).contains(&space.dim()) {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: space.dim(),
        });
    }
    let found: Vec<(usize, Option<Line>)> = (0..space.size())
        .into_par_iter()
        .map(|p| (p, qualifying_line(set, p)))
        .collect();
    let failing: Vec<usize> = found
        .iter()
        .filter(|(_, l)| l.is_none())
        .map(|(p, _)| *p)
        .collect();
    if !failing.is_empty() {
        return Ok(NikodymCheck::Failing(failing));
    }
    let assignment: Vec<(usize, Line)> = found
        .into_iter()
        .filter(|(p, _)| !set.contains(*p))
        .map(|(p, l)| (p, l.unwrap()))
        .collect();
    let mut owner: BTreeMap<Line, usize> = BTreeMap::new();
    for (p, l) in &assignment {
        if owner.insert(*l, *p).is_some() {
            return Err(Error::AssignmentNotInjective(*p));
        }
        let outside = space
            .line_point_indices(l)
            .filter(|&i| !set.contains(i))
            .count();
        if outside != 1 {
            return Err(Error::Internal(format!(
                "assigned line meets the complement in {outside} points"
            )));
        }
    }
    Ok(NikodymCheck::Nikodym(NikodymWitness {
        set: set.clone(),
        assignment,
    }))
}

pub fn union_of_lines(lines: &LineFamily) -> PointSet {
    lines.union()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnionReport {
    pub q: u32,
    pub lines: usize,
    pub covered: usize,
    /// Smallest `|P|` the mixing inequality allows for `q|L|` incidences.
    pub implied_lower_bound: u64,
    /// Upper bound on incidences for (`covered`, `lines`), large-q envelope and exact.
    pub incidence_bound_exact: f64,
    pub incidence_bound_asymptotic: f64,
    pub holds: bool,
}

/// Requires `|L| >= 0.62 q^3`.
pub fn union_lower_bound_check(lines: &LineFamily) -> Result<UnionReport> {
    let space = lines.space();
    let q = space.q();
    let q3 = (q as u64).pow(3);
    if 100 * (lines.len() as u64) < 62 * q3 {
        return Err(Error::TooFewLines {
            lines: lines.len(),
            required: 0.62 * q3 as f64,
        });
    }
    union_report(lines)
}

/// Same report without the size precondition.
pub fn union_report(lines: &LineFamily) -> Result<UnionReport> {
    let q = lines.space().q();
    let covered = lines.union();
    let n_lines = lines.len() as u64;
    let implied = implied_point_lower_bound(n_lines, q)?;
    let bound = mixing_incidence_bound(covered.len() as u64, n_lines, q)?;
    let exact_ok = within_mixing_bound(q as u64 * n_lines, covered.len() as u64, n_lines, q)?;
    Ok(UnionReport {
        q,
        lines: lines.len(),
        covered: covered.len(),
        implied_lower_bound: implied,
        incidence_bound_exact: bound.exact,
        incidence_bound_asymptotic: bound.asymptotic,
        holds: exact_ok && covered.len() as u64 >= implied,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConicFamilyReport {
    pub q: u32,
    pub fraction: String,
    pub planes: usize,
    pub lines: usize,
    pub covered: usize,
    pub ratio: f64,
    /// `k q (q+1) - C(k,2)`.
    pub lines_formula: u64,
    /// `1 + k(q^2 - 1) - (q-1) C(k,2)`.
    pub covered_formula: u64,
    /// `k q^2 - (q-1) C(k,2)`.
    pub covered_upper: u64,
    /// Most member planes through one line through the base point.
    pub max_coincidence: usize,
    pub max_plane_occupancy: u32,
    pub member_plane_occupancy: u32,
    pub holds: bool,
}

/// Planes through the origin whose normals are the first `floor(fraction q)`
/// conic duals, and every line inside their union.
pub fn build_conic_dual_line_family(
    q: u64,
    fraction: Rational,
) -> Result<(LineFamily, ConicFamilyReport)> {
    let field = Arc::new(Field::with_order(q)?);
    let qq = field.order();
    let k = (fraction * Rational::from_integer(qq as i64)).floor().to_integer();
    if qq < 5 || k < 3 || k > qq as i64 + 1 {
        return Err(Error::UnsupportedField(format!(
            "need q >= 5 and 3 <= floor(fraction q) <= q+1, got q = {qq}, k = {k}"
        )));
    }
    let k = k as usize;
    let space = AffineSpace::new(field.clone(), 3);
    let normals: Vec<_> = conic_dual_lines(&field)?.into_iter().take(k).collect();
    let planes: Vec<Plane> = normals.iter().map(|n| space.plane(n, Fe::ZERO)).collect();
    let family = LineFamily::from_lines(
        space.clone(),
        planes
            .iter()
            .flat_map(|p| space.lines_in_plane(p).lines().to_vec()),
    );
    let covered = family.union().len();
    let (kk, qu) = (k as u64, qq as u64);
    let pairs = binomial(k as i64, 2) as u64;
    let lines_formula = kk * qu * (qu + 1) - pairs;
    let covered_formula = 1 + kk * (qu * qu - 1) - (qu - 1) * pairs;
    let covered_upper = kk * qu * qu - (qu - 1) * pairs;
    let coincidence = max_concurrency(&field, &normals);
    let member = planes.iter().map(|p| family.occupancy(p)).min().unwrap_or(0);
    let max_occ = family.max_plane_occupancy().map_or(0, |(_, c)| c);
    let holds = family.len() as u64 == lines_formula
        && covered as u64 == covered_formula
        && covered as u64 <= covered_upper
        && coincidence == 2
        && member == qq * (qq + 1)
        && max_occ == qq * (qq + 1);
    let report = ConicFamilyReport {
        q: qq,
        fraction: format_rational(&fraction),
        planes: k,
        lines: family.len(),
        covered,
        ratio: covered as f64 / (qu * qu * qu) as f64,
        lines_formula,
        covered_formula,
        covered_upper,
        max_coincidence: coincidence,
        max_plane_occupancy: max_occ,
        member_plane_occupancy: member,
        holds,
    };
    Ok((family, report))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoplanarReport {
    pub q: u32,
    pub lines: usize,
    pub max_occupancy: u32,
    /// `q^{3/2} + 1 + q`, the planar constant plus a line at infinity.
    pub bound: f64,
    pub imported_constant: bool,
    pub holds: bool,
}

/// Assignment lines in the fullest plane against `q^{3/2} + 1 + q`.
pub fn coplanar_line_bound_check(witness: &NikodymWitness) -> Result<CoplanarReport> {
    let space = witness.set.space();
    if space.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: space.dim(),
        });
    }
    let q = space.q();
    let fam = witness.lines();
    let max = fam.max_plane_occupancy().map_or(0, |(_, c)| c);
    Ok(CoplanarReport {
        q,
        lines: fam.len(),
        max_occupancy: max,
        bound: (q as f64).powf(1.5) + 1.0 + q as f64,
        imported_constant: true,
        holds: within_coplanar_bound(max as u64, q as u64),
    })
}

/// `count <= q^{3/2} + 1 + q`, decided as `(count - 1 - q)^2 <= q^3`.
pub fn within_coplanar_bound(count: u64, q: u64) -> bool {
    count <= q + 1 || (count - q - 1).pow(2) <= q * q * q
}

/// Large-`q` form of the incidence inequality for `x = |L|/q^3`:
/// `x <= (1 - x) x + x sqrt(1 - x)`.
pub fn limit_inequality_holds(x: f64) -> bool {
    x <= (1.0 - x) * x + x * (1.0 - x).sqrt()
}

/// Largest `x` in (0,1) satisfying the limit inequality. Dividing by `x`
/// leaves `x <= sqrt(1 - x)`; the root is found by bisection.
pub fn golden_ratio_threshold() -> Result<f64> {
    let h = |x: f64| (1.0 - x).sqrt() - x;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    let expected = (5f64.sqrt() - 1.0) / 2.0;
    if (root - expected).abs() >= 1e-8 {
        return Err(Error::Internal(format!("threshold root {root} off target")));
    }
    Ok(root)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplementReport {
    pub q: u32,
    pub complement: usize,
    pub ratio: f64,
    pub threshold: f64,
    pub witness_incidences: u64,
    /// `(q-1)|complement|`.
    pub expected_incidences: u64,
    /// Largest complement size the exact mixing inequality allows at this q.
    pub max_complement_exact: u64,
    pub mixing: MixingReport,
    pub holds: bool,
}

/// Largest `c` with `(q-1) c` incidences allowed between `q^3 - c` points and `c` lines.
pub fn max_complement_exact(q: u32) -> Result<u64> {
    let q3 = (q as u64).pow(3);
    let mut best = 0;
    for c in 0..=q3.min(line_total(q)) {
        if within_mixing_bound((q as u64 - 1) * c, q3 - c, c, q)? {
            best = c;
        }
    }
    Ok(best)
}

pub fn nikodym_complement_bound_check(set: &PointSet) -> Result<ComplementReport> {
    let space = set.space();
    if space.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: space.dim(),
        });
    }
    let witness = match verify_nikodym(set)? {
        NikodymCheck::Nikodym(w) => w,
        NikodymCheck::Failing(f) => return Err(Error::NotNikodym { failing: f.len() }),
    };
    complement_report(&witness)
}

pub fn complement_report(witness: &NikodymWitness) -> Result<ComplementReport> {
    let space = witness.set.space();
    let q = space.q();
    let lines = witness.lines();
    let stats = count_incidences(&witness.set, &lines)?;
    let c = witness.assignment.len();
    let expected = (q as u64 - 1) * c as u64;
    let mixing = mixing_report(stats)?;
    let max_c = max_complement_exact(q)?;
    let holds = stats.incidences == expected && mixing.holds && c as u64 <= max_c;
    Ok(ComplementReport {
        q,
        complement: c,
        ratio: c as f64 / space.size() as f64,
        threshold: golden_ratio_threshold()?,
        witness_incidences: stats.incidences,
        expected_incidences: expected,
        max_complement_exact: max_c,
        mixing,
        holds,
    })
}

/// Line-family generators for the conjecture harness.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    UniformRandom { lines: usize },
    PlaneCappedRandom { lines: usize, cap: u32 },
    HermitianTangent { alpha: String },
    ConicDual { fraction: String },
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::UniformRandom { .. } => "uniform-random",
            Generator::PlaneCappedRandom { .. } => "plane-capped-random",
            Generator::HermitianTangent { .. } => "hermitian-tangent",
            Generator::ConicDual { .. } => "conic-dual",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HarnessRecord {
    pub q: u32,
    pub generator: String,
    pub seed: u64,
    pub lines: usize,
    pub max_plane_occupancy: u32,
    pub covered_points: usize,
    pub ratio: f64,
    pub alarm: bool,
}

pub const DEFAULT_ALARM_RATIO: f64 = 0.9;

/// Seed for trial `t` of a run seeded with `seed`.
pub fn trial_seed(seed: u64, t: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(t as u64)
}

/// Generates one family per trial and records its coverage. Records with
/// `|P(L)|/q^3` below `alarm_ratio` are flagged for inspection.
pub fn conjecture_harness(
    generator: &Generator,
    q: u64,
    trials: usize,
    seed: u64,
    alarm_ratio: f64,
) -> Result<Vec<HarnessRecord>> {
    let field = Arc::new(Field::with_order(q)?);
    let space = AffineSpace::new(field.clone(), 3);
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = trial_seed(seed, t);
            let fam = generate_family(generator, &space, s)?;
            let covered = fam.union().len();
            let ratio = covered as f64 / space.size() as f64;
            Ok(HarnessRecord {
                q: space.q(),
                generator: generator.name().to_string(),
                seed: s,
                lines: fam.len(),
                max_plane_occupancy: fam.max_plane_occupancy().map_or(0, |(_, c)| c),
                covered_points: covered,
                ratio,
                alarm: ratio < alarm_ratio,
            })
        })
        .collect()
}

pub fn generate_family(generator: &Generator, space: &AffineSpace, seed: u64) -> Result<LineFamily> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match generator {
        Generator::UniformRandom { lines } => {
            let all = space.lines();
            if *lines > all.len() {
                return Err(Error::GeneratorInfeasible(format!(
                    "{lines} lines requested, space has {}",
                    all.len()
                )));
            }
            let idx = sample(&mut rng, all.len(), *lines);
            Ok(LineFamily::from_lines(space.clone(), idx.into_iter().map(|i| all[i])))
        }
        Generator::PlaneCappedRandom { lines, cap } => {
            let mut all = space.lines();
            all.shuffle(&mut rng);
            let mut fam = LineFamily::new(space.clone());
            for l in all {
                if fam.len() == *lines {
                    break;
                }
                let room = space
                    .planes_containing_line(&l)
                    .iter()
                    .all(|p| fam.occupancy(p) < *cap);
                if room {
                    fam.insert(l);
                }
            }
            if fam.len() < *lines {
                return Err(Error::GeneratorInfeasible(format!(
                    "plane cap {cap} admits only {} of {lines} lines",
                    fam.len()
                )));
            }
            Ok(fam)
        }
        Generator::HermitianTangent { alpha } => {
            let alpha = crate::poly::parse_rational(alpha)?;
            let h = HermitianMatrix::identity(space.field().clone(), 4)?;
            let v = build_hermitian(h)?;
            let (fam, _) = build_tangent_line_family(&v, alpha, seed)?;
            Ok(fam.affine)
        }
        Generator::ConicDual { fraction } => {
            let fraction = crate::poly::parse_rational(fraction)?;
            let (fam, _) = build_conic_dual_line_family(space.q() as u64, fraction)?;
            Ok(fam)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(q: u64, n: usize) -> AffineSpace {
        AffineSpace::new(Arc::new(Field::with_order(q).unwrap()), n)
    }

    #[test]
    fn full_space_and_empty_set() {
        let s = space(3, 3);
        let w = verify_nikodym(&PointSet::full(s.clone())).unwrap().witness().unwrap();
        assert!(w.assignment.is_empty());
        match verify_nikodym(&PointSet::empty(s.clone())).unwrap() {
            NikodymCheck::Failing(f) => assert_eq!(f.len(), 27),
            _ => panic!("empty set accepted"),
        }
    }

    #[test]
    fn one_point_removed() {
        let s = space(3, 3);
        let mut set = PointSet::full(s.clone());
        set.remove(13);
        let w = verify_nikodym(&set).unwrap().witness().unwrap();
        assert_eq!(w.assignment.len(), 1);
        assert_eq!(w.assignment[0].0, 13);
    }

    #[test]
    fn witness_incidences_are_exact() {
        let s = space(4, 3);
        let mut set = PointSet::full(s.clone());
        for i in [0, 17, 40] {
            set.remove(i);
        }
        let rep = nikodym_complement_bound_check(&set).unwrap();
        assert_eq!(rep.witness_incidences, 3 * 3);
        assert!(rep.holds);
        let cop = coplanar_line_bound_check(
            &verify_nikodym(&set).unwrap().witness().unwrap(),
        )
        .unwrap();
        assert!(cop.holds);
    }

    #[test]
    fn planar_sets_are_supported() {
        let s = space(3, 2);
        let mut set = PointSet::full(s.clone());
        set.remove(4);
        assert!(verify_nikodym(&set).unwrap().is_nikodym());
    }

    #[test]
    fn union_sizes() {
        let s = space(3, 3);
        let lines = s.lines();
        let one = LineFamily::from_lines(s.clone(), [lines[0]]);
        assert_eq!(union_of_lines(&one).len(), 3);
        let origin = s.origin();
        let through = s.lines_through(&origin);
        let two = LineFamily::from_lines(s.clone(), through[..2].to_vec());
        assert_eq!(union_of_lines(&two).len(), 5);
        assert_eq!(union_of_lines(&LineFamily::all(s.clone())).len(), 27);
        assert!(matches!(
            union_lower_bound_check(&one),
            Err(Error::TooFewLines { .. })
        ));
        assert!(union_lower_bound_check(&LineFamily::all(s)).unwrap().holds);
    }

    #[test]
    fn conic_family_q5() {
        let (fam, rep) = build_conic_dual_line_family(5, Rational::new(31, 50)).unwrap();
        assert_eq!(rep.planes, 3);
        assert_eq!(fam.len(), 87);
        assert_eq!(rep.covered, 61);
        assert_eq!(rep.covered_upper, 63);
        assert!(rep.holds, "{rep:?}");
        assert!(build_conic_dual_line_family(4, Rational::new(31, 50)).is_err());
    }

    #[test]
    fn threshold() {
        let r = golden_ratio_threshold().unwrap();
        assert!((r * r + r - 1.0).abs() < 1e-10);
        assert!(!limit_inequality_holds(0.63));
        assert!(limit_inequality_holds(0.5));
    }

    #[test]
    fn coplanar_bound_arithmetic() {
        // 4^{3/2} + 1 + 4 = 13
        assert!(within_coplanar_bound(13, 4));
        assert!(!within_coplanar_bound(14, 4));
    }

    #[test]
    fn harness_is_reproducible() {
        let g = Generator::PlaneCappedRandom { lines: 30, cap: 4 };
        let a = conjecture_harness(&g, 3, 3, 7, DEFAULT_ALARM_RATIO).unwrap();
        let b = conjecture_harness(&g, 3, 3, 7, DEFAULT_ALARM_RATIO).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|r| r.max_plane_occupancy <= 4 && r.lines == 30));
        let empty = conjecture_harness(&Generator::UniformRandom { lines: 0 }, 3, 1, 1, 0.9).unwrap();
        assert_eq!(empty[0].covered_points, 0);
        assert!(matches!(
            conjecture_harness(&Generator::PlaneCappedRandom { lines: 100, cap: 1 }, 3, 1, 1, 0.9),
            Err(Error::GeneratorInfeasible(_))
        ));
    }

    #[test]
    fn hermitian_generator_matches_module() {
        let g = Generator::HermitianTangent {
            alpha: "1/2".into(),
        };
        let s = space(4, 3);
        let fam = generate_family(&g, &s, 3).unwrap();
        let v = build_hermitian(HermitianMatrix::identity(s.field().clone(), 4).unwrap()).unwrap();
        let (_, rep) = build_tangent_line_family(&v, Rational::new(1, 2), 3).unwrap();
        assert_eq!(fam.union().len(), rep.affine_covered);
        assert_eq!(64 - fam.union().len(), rep.affine_uncovered);
    }
}
