//! Kakeya sets in AG(3,q): construction, verification, the integer
//! multiplicity bound, and the fractional-multiplicity argument run as a
//! computation.
//!
//! The fractional argument fixes `u` in {1, 2}, a density `alpha` and
//! `delta = q^(-1/3)`, and sets
//! `m = (alpha - delta alpha) u + (1 - alpha - delta alpha)(u + 1)`,
//! which is `A - B delta` with `A = u + 1 - alpha`, `B = alpha (2u + 1)`.
//! Every comparison involving `delta` is decided exactly by cubing.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{AffinePoint, AffineSpace, Line, PointSet, ProjPoint};
use crate::gf::{Fe, Field};
use crate::poly::{
    binomial, count_below, count_capped_monomials, format_rational, interpolate_constraints,
    MonomialBasis, MultiPoly, MultiplicityConstraint, Rational,
};

pub const DEFAULT_RETRY_CAP: usize = 1000;

/// One fully contained line per direction, in direction order.
#[derive(Clone, Debug, PartialEq)]
pub struct KakeyaWitness {
    pub set: PointSet,
    pub lines: Vec<Line>,
}

impl KakeyaWitness {
    pub fn line_for(&self, dir: &ProjPoint) -> Option<&Line> {
        self.lines.iter().find(|l| l.dir == *dir)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum KakeyaCheck {
    Kakeya(KakeyaWitness),
    /// Directions with no line inside the set.
    Missing(Vec<ProjPoint>),
}

impl KakeyaCheck {
    pub fn is_kakeya(&self) -> bool {
        matches!(self, KakeyaCheck::Kakeya(_))
    }

    pub fn witness(self) -> Option<KakeyaWitness> {
        match self {
            KakeyaCheck::Kakeya(w) => Some(w),
            KakeyaCheck::Missing(_) => None,
        }
    }
}

/// First contained line (canonical order) for each direction, or `None`.
pub fn contained_lines_by_direction(set: &PointSet) -> Vec<(ProjPoint, Option<Line>)> {
    let space = set.space();
    space
        .directions()
        .into_par_iter()
        .map(|d| {
            let found = space
                .parallel_class(&d)
                .into_iter()
                .find(|l| set.contains_line(l));
            (d, found)
        })
        .collect()
}

/// Exhaustive check over the `q^2` lines of every direction.
pub fn verify_kakeya(set: &PointSet) -> KakeyaCheck {
    let found = contained_lines_by_direction(set);
    let missing: Vec<ProjPoint> = found
        .iter()
        .filter(|(_, l)| l.is_none())
        .map(|(d, _)| *d)
        .collect();
    if missing.is_empty() {
        KakeyaCheck::Kakeya(KakeyaWitness {
            set: set.clone(),
            lines: found.into_iter().map(|(_, l)| l.unwrap()).collect(),
        })
    } else {
        KakeyaCheck::Missing(missing)
    }
}

/// Every line contained in the set.
pub fn contained_lines(set: &PointSet) -> Vec<Line> {
    set.space()
        .lines()
        .into_par_iter()
        .filter(|l| set.contains_line(l))
        .collect()
}

fn odd_field(q: u64) -> Result<Arc<Field>> {
    let field = Field::with_order(q)?;
    if field.characteristic() == 2 {
        return Err(Error::EvenFieldUnsupported(field.order()));
    }
    Ok(Arc::new(field))
}

/// `{(x1, x2, t) : x1 + t^2 and x2 + t^2 are squares} ∪ {t = 0}` in AG(3,q), q odd.
pub fn build_quadratic_residue_set(q: u64) -> Result<PointSet> {
    let field = odd_field(q)?;
    let space = AffineSpace::new(field.clone(), 3);
    let f = &field;
    let members = (0..space.size()).filter(|&i| {
        let p = space.point(i);
        let [x1, x2, t] = [p.coords()[0], p.coords()[1], p.coords()[2]];
        let t2 = f.mul(t, t);
        t.is_zero() || (f.is_square(f.add(x1, t2)) && f.is_square(f.add(x2, t2)))
    });
    Ok(PointSet::from_indices(space.clone(), members.collect::<Vec<_>>()))
}

/// Explicit lines inside the quadratic-residue set, one per direction:
/// for `(b1, b2, 1)` the line through `(b1^2/4, b2^2/4, 0)`, using
/// `x_i + t^2 = (b_i/2 + t)^2`; horizontal directions lie in `t = 0`.
pub fn quadratic_residue_witness_lines(space: &AffineSpace) -> Vec<Line> {
    let f = space.field();
    let quarter = f.inv(f.from_int(4)).expect("odd characteristic");
    space
        .directions()
        .iter()
        .map(|d| {
            let c = d.coords();
            match f.inv(c[2]) {
                Some(s) => {
                    let b1 = f.mul(c[0], s);
                    let b2 = f.mul(c[1], s);
                    let base = AffinePoint::new(&[
                        f.mul(f.mul(b1, b1), quarter),
                        f.mul(f.mul(b2, b2), quarter),
                        Fe::ZERO,
                    ]);
                    space.line(&base, d)
                }
                None => space.line(&space.origin(), d),
            }
        })
        .collect()
}

/// The stated size bound `q((q+1)/2)^2 + q^2`.
pub fn qr_size_bound(q: u64) -> u64 {
    let h = q.div_ceil(2);
    q * h * h + q * q
}

/// Actual size: the `t = 0` slice is the whole plane, so only the `q - 1`
/// nonzero slices contribute `((q+1)/2)^2` points each.
pub fn qr_size(q: u64) -> u64 {
    let h = q.div_ceil(2);
    (q - 1) * h * h + q * q
}

/// `ceil(N_q(3,m) / C(m+2, 3))` for integer `m >= 1`.
pub fn integer_multiplicity_bound(q: u32, m: u32) -> u64 {
    assert!(m >= 1, "integer multiplicity must be positive");
    let n = count_capped_monomials(3, q, Rational::from_integer(m as i64));
    let per_point = binomial(m as i64 + 2, 3) as u64;
    n.div_ceil(per_point)
}

fn big(r: Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn bigi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Sign of `c - b q^(-1/3)` for `b >= 0`, exactly.
pub fn cmp_with_delta(c: &BigRational, b: &BigRational, q: u32) -> Ordering {
    debug_assert!(!b.is_negative());
    if b.is_zero() {
        return c.cmp(&BigRational::zero());
    }
    if !c.is_positive() {
        return Ordering::Less;
    }
    let lhs = c * c * c * bigi(q as i64);
    lhs.cmp(&(b * b * b))
}

/// `q^(-1/3)` in floating point, for display only.
pub fn delta(q: u32) -> f64 {
    (q as f64).powf(-1.0 / 3.0)
}

/// Parameters of the fractional-multiplicity argument at a fixed `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalParams {
    q: u32,
    u: u32,
    alpha: Rational,
    a: BigRational,
    b: BigRational,
}

impl FractionalParams {
    pub fn new(q: u32, u: u32, alpha: Rational) -> Result<FractionalParams> {
        if !(1..=2).contains(&u) {
            return Err(Error::OutOfRange(format!("u = {u}, expected 1 or 2")));
        }
        if alpha < Rational::from_integer(0) || alpha > Rational::from_integer(1) {
            return Err(Error::AlphaOutOfRange(format_rational(&alpha)));
        }
        let al = big(alpha);
        Ok(FractionalParams {
            q,
            u,
            alpha,
            a: bigi(u as i64 + 1) - &al,
            b: al * bigi(2 * u as i64 + 1),
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn u(&self) -> u32 {
        self.u
    }

    pub fn alpha(&self) -> Rational {
        self.alpha
    }

    /// `m` in floating point (display only).
    pub fn m(&self) -> f64 {
        to_f64(&self.a) - to_f64(&self.b) * delta(self.q)
    }

    /// Whether `1 < m < 3` holds exactly.
    pub fn m_in_range(&self) -> bool {
        cmp_with_delta(&(&self.a - bigi(1)), &self.b, self.q) == Ordering::Greater
            && cmp_with_delta(&(&self.a - bigi(3)), &self.b, self.q) == Ordering::Less
    }

    /// Number of admissible total degrees: the integers `d >= 0` with `d < mq`.
    pub fn degree_limit(&self) -> u64 {
        let q = bigi(self.q as i64);
        let aq = &self.a * &q;
        let bq = &self.b * &q;
        let mut d = 0u64;
        while cmp_with_delta(&(&aq - bigi(d as i64)), &bq, self.q) == Ordering::Greater {
            d += 1;
        }
        d
    }

    /// `N_q(3, m)`.
    pub fn monomials(&self) -> u64 {
        count_below(3, self.q, self.degree_limit())
    }

    fn weights(&self) -> (BigRational, BigRational) {
        let c1 = bigi(binomial(self.u as i64 + 2, 3) as i64);
        let c2 = bigi(binomial(self.u as i64 + 3, 3) as i64);
        (c1, c2)
    }

    /// `(X, Y)` with the counting bound equal to `X + Y delta`:
    /// `(alpha + delta alpha) C(u+2,3)|K| + (1 - alpha + delta alpha) C(u+3,3)|K|`.
    fn counting_terms(&self, set_size: usize) -> (BigRational, BigRational) {
        let (c1, c2) = self.weights();
        let k = bigi(set_size as i64);
        let al = big(self.alpha);
        let x = (&al * &c1 + (bigi(1) - &al) * &c2) * &k;
        let y = &al * (c1 + c2) * k;
        (x, y)
    }

    pub fn counting_bound(&self, set_size: usize) -> f64 {
        let (x, y) = self.counting_terms(set_size);
        to_f64(&x) + to_f64(&y) * delta(self.q)
    }

    /// True when `N_q(3,m)` exceeds the counting bound for a set of this size,
    /// the only regime where the interpolation step can start.
    pub fn admits_interpolation(&self, set_size: usize) -> bool {
        let (x, y) = self.counting_terms(set_size);
        let n = bigi(self.monomials() as i64);
        cmp_with_delta(&(n - x), &y, self.q) == Ordering::Greater
    }

    /// `| count - alpha q | < delta alpha q`.
    pub fn line_count_ok(&self, count: usize) -> bool {
        self.window_ok(count, self.q as usize)
    }

    /// `| size - alpha |K| | < delta alpha |K|`.
    pub fn sample_size_ok(&self, size: usize, set_size: usize) -> bool {
        self.window_ok(size, set_size)
    }

    fn window_ok(&self, count: usize, total: usize) -> bool {
        let target = big(self.alpha) * bigi(total as i64);
        let dev = (bigi(count as i64) - &target).abs();
        cmp_with_delta(&dev, &target, self.q) == Ordering::Less
    }
}

/// Random subset of a Kakeya set with per-line counts.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetSample {
    pub set: PointSet,
    /// `|L ∩ S|` for each checked line, in the order given.
    pub line_counts: Vec<usize>,
    pub size: usize,
    pub attempts: usize,
}

impl SubsetSample {
    pub fn recount(&self, lines: &[Line]) -> Vec<usize> {
        let space = self.set.space();
        lines
            .iter()
            .map(|l| {
                space
                    .line_point_indices(l)
                    .filter(|&i| self.set.contains(i))
                    .count()
            })
            .collect()
    }
}

/// Keeps each point of `k` independently with probability `alpha` until the
/// global size and every count on `lines` fall inside their windows.
pub fn sample_subset_on_lines(
    k: &PointSet,
    lines: &[Line],
    params: &FractionalParams,
    seed: u64,
    retry_cap: usize,
) -> Result<SubsetSample> {
    let alpha = params.alpha();
    if alpha <= Rational::from_integer(0) || alpha > Rational::from_integer(1) {
        return Err(Error::AlphaOutOfRange(format_rational(&alpha)));
    }
    let (num, den) = (*alpha.numer() as u32, *alpha.denom() as u32);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = k.space();
    for attempt in 1..=retry_cap {
        let s = PointSet::from_indices(
            space.clone(),
            k.iter()
                .filter(|_| rng.gen_ratio(num, den))
                .collect::<Vec<_>>(),
        );
        if !params.sample_size_ok(s.len(), k.len()) {
            continue;
        }
        let mut counts = Vec::with_capacity(lines.len());
        let mut ok = true;
        for l in lines {
            let c = space.line_point_indices(l).filter(|&i| s.contains(i)).count();
            if !params.line_count_ok(c) {
                ok = false;
                break;
            }
            counts.push(c);
        }
        if ok {
            let size = s.len();
            return Ok(SubsetSample {
                set: s,
                line_counts: counts,
                size,
                attempts: attempt,
            });
        }
    }
    Err(Error::RetryExhausted {
        attempts: retry_cap,
    })
}

/// Sampler over the witness lines with `delta = q^(-1/3)` and the default retry cap.
pub fn sample_fractional_subset(
    k: &PointSet,
    witness: &KakeyaWitness,
    alpha: Rational,
    seed: u64,
) -> Result<SubsetSample> {
    let params = FractionalParams::new(k.space().q(), 1, alpha)?;
    sample_subset_on_lines(k, &witness.lines, &params, seed, DEFAULT_RETRY_CAP)
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    /// Stop at the counting gate when `N_q(3,m)` does not exceed the bound.
    pub gated: bool,
    /// Run on this set instead of the quadratic-residue construction.
    pub set: Option<PointSet>,
    pub retry_cap: usize,
    /// Enforce the sampling window on every contained line, not just witnesses.
    pub all_lines: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            gated: true,
            set: None,
            retry_cap: DEFAULT_RETRY_CAP,
            all_lines: false,
        }
    }
}

/// Restriction of the interpolant to one witness line.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineRecord {
    pub direction: String,
    pub sample_points: usize,
    /// Zeros counted with multiplicity; `None` when the restriction is identically zero.
    pub zeros: Option<u64>,
    /// `u |L ∩ S| + (u+1) |L \ S|`.
    pub forced_zeros: u64,
    pub leading_matches_top_form: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PipelineOutcome {
    /// Some witness restriction is a nonzero polynomial.
    Shortfall,
    /// All witness restrictions vanish, but the top form survives on some uncovered direction.
    TopFormSurvivesOffWitnesses,
    /// The top form vanishes on every direction.
    TopFormVanishesOnAllDirections,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub q: u32,
    pub u: u32,
    pub alpha: String,
    pub m: f64,
    pub m_in_range: bool,
    pub degree_limit: u64,
    pub monomials: u64,
    pub set_size: usize,
    pub missing_directions: usize,
    pub counting_bound: f64,
    pub gated: bool,
    pub sample_size: usize,
    pub attempts: usize,
    pub conditions: u64,
    pub degree: u32,
    pub lines: Vec<LineRecord>,
    pub shortfall_lines: usize,
    pub top_form_nonzero_directions: usize,
    pub outcome: PipelineOutcome,
}

fn format_dir(field: &Field, d: &ProjPoint) -> String {
    let parts: Vec<String> = d.coords().iter().map(|&c| field.format(c)).collect();
    format!("({})", parts.join(","))
}

/// Default-option pipeline on the quadratic-residue set.
pub fn fractional_pipeline(q: u64, u: u32, alpha: Rational, seed: u64) -> Result<PipelineReport> {
    fractional_pipeline_with(q, u, alpha, seed, &PipelineOptions::default())
}

/// Runs the fractional-multiplicity argument: sample `S`, interpolate `g`
/// with multiplicity `u` on `S` and `u+1` on `K \ S`, restrict to every
/// witness line, and test the top homogeneous form on all directions.
pub fn fractional_pipeline_with(
    q: u64,
    u: u32,
    alpha: Rational,
    seed: u64,
    opts: &PipelineOptions,
) -> Result<PipelineReport> {
    let k = match &opts.set {
        Some(s) => {
            if s.space().q() as u64 != q || s.space().dim() != 3 {
                return Err(Error::Parse(format!(
                    "custom set lives in AG({}, {}), expected AG(3, {q})",
                    s.space().dim(),
                    s.space().q()
                )));
            }
            s.clone()
        }
        None => build_quadratic_residue_set(q)?,
    };
    let space = k.space().clone();
    let field = space.field().clone();
    let params = FractionalParams::new(space.q(), u, alpha)?;

    let by_dir = contained_lines_by_direction(&k);
    let witness_lines: Vec<Line> = by_dir.iter().filter_map(|(_, l)| *l).collect();
    let missing = by_dir.len() - witness_lines.len();

    let monomials = params.monomials();
    if opts.gated && !params.admits_interpolation(k.len()) {
        return Err(Error::CountingNotInParadoxRegime {
            monomials,
            bound: params.counting_bound(k.len()),
        });
    }

    let sample = if alpha.is_zero() {
        SubsetSample {
            set: PointSet::empty(space.clone()),
            line_counts: vec![0; witness_lines.len()],
            size: 0,
            attempts: 0,
        }
    } else {
        let window_lines = if opts.all_lines {
            contained_lines(&k)
        } else {
            witness_lines.clone()
        };
        sample_subset_on_lines(&k, &window_lines, &params, seed, opts.retry_cap)?
    };

    let basis = MonomialBasis::new(3, space.q(), params.degree_limit());
    let constraints: Vec<MultiplicityConstraint> = k
        .points()
        .map(|point| MultiplicityConstraint {
            point,
            mult: if sample.set.contains_point(&point) { u } else { u + 1 },
        })
        .collect();
    let conditions = sample.size as u64 * binomial(u as i64 + 2, 3) as u64
        + (k.len() - sample.size) as u64 * binomial(u as i64 + 3, 3) as u64;
    let g = interpolate_constraints(field.clone(), &basis, &constraints)?;
    let d = g.total_degree().expect("interpolant is nonzero");
    let top = g.homogeneous_top()?;

    let records: Vec<LineRecord> = witness_lines
        .par_iter()
        .map(|line| line_record(&space, &g, &top, &sample.set, line, u, d))
        .collect::<Result<_>>()?;
    let shortfall = records.iter().filter(|r| r.zeros.is_some()).count();

    let nonzero_dirs = space
        .directions()
        .iter()
        .filter(|b| !top.eval(b.coords()).is_zero())
        .count();
    let outcome = if shortfall > 0 {
        PipelineOutcome::Shortfall
    } else if nonzero_dirs > 0 {
        PipelineOutcome::TopFormSurvivesOffWitnesses
    } else {
        // a nonzero capped form vanishing on every direction is impossible;
        // the evaluation/coefficient cross-check turns it into an internal error
        if top.is_identically_zero_on_space()? {
            return Err(Error::Internal("top form has no terms".into()));
        }
        return Err(Error::Internal(
            "nonzero top form vanished on all directions but not on the space".into(),
        ));
    };

    Ok(PipelineReport {
        q: space.q(),
        u,
        alpha: format_rational(&alpha),
        m: params.m(),
        m_in_range: params.m_in_range(),
        degree_limit: params.degree_limit(),
        monomials,
        set_size: k.len(),
        missing_directions: missing,
        counting_bound: params.counting_bound(k.len()),
        gated: opts.gated,
        sample_size: sample.size,
        attempts: sample.attempts,
        conditions,
        degree: d,
        lines: records,
        shortfall_lines: shortfall,
        top_form_nonzero_directions: nonzero_dirs,
        outcome,
    })
}

fn line_record(
    space: &AffineSpace,
    g: &MultiPoly,
    top: &MultiPoly,
    s: &PointSet,
    line: &Line,
    u: u32,
    d: u32,
) -> Result<LineRecord> {
    let field = space.field();
    let q = space.q() as u64;
    let on_s = space
        .line_point_indices(line)
        .filter(|&i| s.contains(i))
        .count();
    let forced = u as u64 * on_s as u64 + (u as u64 + 1) * (q - on_s as u64);
    let restriction = g.restrict_to_line(line.base.coords(), line.dir.coords());
    let zeros = restriction.zeros_with_multiplicity();
    if let Some(z) = zeros {
        if z < forced {
            return Err(Error::Internal(format!(
                "restriction has {z} zeros, fewer than the {forced} forced by point multiplicities"
            )));
        }
    }
    // coefficient of t^d is the top form at the direction
    let lead = restriction.coeffs().get(d as usize).copied().unwrap_or(Fe::ZERO);
    let matches = lead == top.eval(line.dir.coords());
    if !matches {
        return Err(Error::Internal(
            "degree-d coefficient of a restriction differs from the top form".into(),
        ));
    }
    Ok(LineRecord {
        direction: format_dir(field, &line.dir),
        sample_points: on_s,
        zeros,
        forced_zeros: forced,
        leading_matches_top_form: matches,
    })
}

/// `m` and coefficient of `q^3` for the best choice in one branch.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BranchOptimum {
    pub u: u32,
    pub m: f64,
    pub coefficient: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FractionalOptimum {
    pub m: f64,
    pub coefficient: f64,
    pub branches: [BranchOptimum; 2],
}

/// Numerator and denominator cubics (low coefficient first) of the bound
/// coefficient for each branch: `u = 1` on `[1, 2]`, `u = 2` on `[2, 3]`.
fn branch_polys(u: u32) -> ([i64; 4], [i64; 2], (f64, f64)) {
    match u {
        1 => ([3, -9, 9, -2], [-12, 18], (1.0, 2.0)),
        2 => ([-21, 27, -9, 1], [-48, 36], (2.0, 3.0)),
        _ => panic!("branch u = {u} not defined"),
    }
}

/// Lower-bound coefficient `c(m)` with `|K| >= (c(m) + o(1)) q^3`.
pub fn fractional_coefficient(u: u32, m: f64) -> f64 {
    let (p, den, _) = branch_polys(u);
    let num = p[0] as f64 + m * (p[1] as f64 + m * (p[2] as f64 + m * p[3] as f64));
    num / (den[0] as f64 + den[1] as f64 * m)
}

/// The same coefficient at a rational `m`, exactly.
pub fn fractional_coefficient_exact(u: u32, m: Rational) -> Rational {
    let (p, den, _) = branch_polys(u);
    let c = |x: i64| Rational::from_integer(x);
    let num = c(p[0]) + m * (c(p[1]) + m * (c(p[2]) + m * c(p[3])));
    num / (c(den[0]) + c(den[1]) * m)
}

fn branch_optimum(u: u32) -> BranchOptimum {
    let (_, _, (lo, hi)) = branch_polys(u);
    let f = |m: f64| fractional_coefficient(u, m);
    // numerical derivative sign changes located on a grid, refined by bisection
    let h = 1e-7;
    let df = |m: f64| f(m + h) - f(m - h);
    let mut candidates = vec![lo, hi];
    let steps = 1000;
    for i in 0..steps {
        let (mut a, mut b) = (
            lo + (hi - lo) * i as f64 / steps as f64,
            lo + (hi - lo) * (i + 1) as f64 / steps as f64,
        );
        let (da, db) = (df(a), df(b));
        if da == 0.0 {
            candidates.push(a);
            continue;
        }
        if da.signum() == db.signum() {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if df(mid).signum() == da.signum() {
                a = mid;
            } else {
                b = mid;
            }
        }
        candidates.push(0.5 * (a + b));
    }
    // golden-section polish of the best candidate against derivative noise
    let best = candidates
        .into_iter()
        .max_by(|x, y| f(*x).total_cmp(&f(*y)))
        .unwrap();
    let (mut a, mut b) = ((best - 1e-3).max(lo), (best + 1e-3).min(hi));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = b - g * (b - a);
        let e = a + g * (b - a);
        if f(c) >= f(e) {
            b = e;
        } else {
            a = c;
        }
    }
    let polished = 0.5 * (a + b);
    let m = if f(polished) >= f(best) { polished } else { best };
    BranchOptimum {
        u,
        m,
        coefficient: f(m),
    }
}

/// Maximizes the bound coefficient over both branches. Fails if the best
/// fractional choice does not beat the integer choice `m = 2` (value 5/24).
pub fn optimize_fractional_bound() -> Result<FractionalOptimum> {
    let b1 = branch_optimum(1);
    let b2 = branch_optimum(2);
    let best = if b1.coefficient >= b2.coefficient { b1 } else { b2 };
    if best.coefficient <= 5.0 / 24.0 {
        return Err(Error::Internal(format!(
            "fractional optimum {} does not exceed 5/24",
            best.coefficient
        )));
    }
    Ok(FractionalOptimum {
        m: best.m,
        coefficient: best.coefficient,
        branches: [b1, b2],
    })
}

/// Limit of `N_q(3,m) / q^3`: `sum_i (-1)^i C(3,i) max(m - i, 0)^3 / 6`,
/// which is `(-2m^3 + 9m^2 - 9m + 3)/6` on `1 <= m <= 2`.
pub fn leading_term_monomials_3d(m: Rational) -> Rational {
    let zero = Rational::from_integer(0);
    let mut acc = zero;
    for i in 0..=3i64 {
        let t = m - Rational::from_integer(i);
        if t <= zero {
            continue;
        }
        let term = Rational::from_integer(binomial(3, i as u32) as i64) * t * t * t;
        acc = if i % 2 == 0 { acc + term } else { acc - term };
    }
    acc / Rational::from_integer(6)
}
