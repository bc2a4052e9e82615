//! Hermitian varieties `x^T H conj(x) = 0` in PG(n,q), `q = s^2`, `n <= 3`.
//!
//! Conjugation is `x -> x^s`. Lines meet a Hermitian variety in 1, `s+1`
//! or `q+1` points; through a smooth point of a non-degenerate surface in
//! PG(3,q) there pass `q - s` lines meeting the surface only there.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{AffinePoint, AffineSpace, Line, LineFamily, ProjLine, ProjPoint, ProjectiveSpace};
use crate::gf::{Fe, Field};
use crate::linalg::Matrix;
use crate::poly::{format_rational, Rational};

/// `s` with `s^2 = q`, or `NonSquareField`.
pub fn square_root_order(field: &Field) -> Result<u32> {
    if !field.degree().is_multiple_of(2) {
        return Err(Error::NonSquareField(field.order()));
    }
    Ok(field.characteristic().pow(field.degree() / 2))
}

fn conj(field: &Field, s: u32, x: Fe) -> Fe {
    field.pow(x, s as u64)
}

/// Square matrix with `h_ij = conj(h_ji)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    field: Arc<Field>,
    size: usize,
    s: u32,
    data: Vec<Fe>,
}

impl HermitianMatrix {
    pub fn new(field: Arc<Field>, rows: Vec<Vec<Fe>>) -> Result<HermitianMatrix> {
        let s = square_root_order(&field)?;
        let size = rows.len();
        for r in &rows {
            if r.len() != size {
                return Err(Error::DimensionMismatch {
                    expected: size,
                    found: r.len(),
                });
            }
        }
        for i in 0..size {
            for j in i..size {
                if rows[i][j] != conj(&field, s, rows[j][i]) {
                    return Err(Error::NotHermitian(i, j));
                }
            }
        }
        Ok(HermitianMatrix {
            field,
            size,
            s,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(field: Arc<Field>, size: usize) -> Result<HermitianMatrix> {
        Self::diagonal(field, &vec![Fe::ONE; size])
    }

    /// Diagonal entries must lie in the fixed field of conjugation.
    pub fn diagonal(field: Arc<Field>, diag: &[Fe]) -> Result<HermitianMatrix> {
        let n = diag.len();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { diag[i] } else { Fe::ZERO }).collect())
            .collect();
        HermitianMatrix::new(field, rows)
    }

    /// Uniform Hermitian matrix: random upper triangle, diagonal as traces
    /// `t + conj(t)` (uniform over the fixed field), lower triangle conjugated.
    pub fn random<R: Rng>(field: Arc<Field>, size: usize, rng: &mut R) -> Result<HermitianMatrix> {
        let s = square_root_order(&field)?;
        let q = field.order();
        let mut rows = vec![vec![Fe::ZERO; size]; size];
        for i in 0..size {
            let t = field.element(rng.gen_range(0..q));
            rows[i][i] = field.add(t, conj(&field, s, t));
            for j in i + 1..size {
                let x = field.element(rng.gen_range(0..q));
                rows[i][j] = x;
                rows[j][i] = conj(&field, s, x);
            }
        }
        HermitianMatrix::new(field, rows)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `s = sqrt(q)`.
    pub fn sqrt_q(&self) -> u32 {
        self.s
    }

    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.size + j]
    }

    pub fn conj(&self, x: Fe) -> Fe {
        conj(&self.field, self.s, x)
    }

    /// `x^T H conj(y)`.
    pub fn form(&self, x: &[Fe], y: &[Fe]) -> Fe {
        let f = &self.field;
        let w = self.apply_conj(y);
        f.dot(x, &w)
    }

    /// `H conj(c)`: coefficients of the tangent hyperplane at `c`.
    pub fn apply_conj(&self, c: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        let cc: Vec<Fe> = c.iter().map(|&x| self.conj(x)).collect();
        (0..self.size)
            .map(|i| f.dot(&self.data[i * self.size..(i + 1) * self.size], &cc))
            .collect()
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_rows(
            self.size,
            (0..self.size)
                .map(|i| self.data[i * self.size..(i + 1) * self.size].to_vec())
                .collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.to_matrix().rank(&self.field)
    }
}

/// Intersection class of a line with a Hermitian variety.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LineClass {
    Tangent,
    Secant,
    Contained,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TangentSpace {
    /// Dual coordinates of the tangent hyperplane.
    Hyperplane(ProjPoint),
    /// The point is singular.
    WholeSpace,
}

#[derive(Clone, Debug)]
pub struct HermitianVariety {
    matrix: HermitianMatrix,
    space: ProjectiveSpace,
    points: Vec<ProjPoint>,
    members: BTreeSet<ProjPoint>,
    rank: usize,
    singular: Vec<ProjPoint>,
}

/// Enumerates the variety of `H` in PG(n,q), `n = size - 1`.
pub fn build_hermitian(matrix: HermitianMatrix) -> Result<HermitianVariety> {
    let n = matrix.size() - 1;
    if !(1..=3).contains(&n) {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: matrix.size(),
        });
    }
    let space = ProjectiveSpace::new(matrix.field().clone(), n);
    let points: Vec<ProjPoint> = space
        .points()
        .into_par_iter()
        .filter(|x| matrix.form(x.coords(), x.coords()).is_zero())
        .collect();
    let rank = matrix.rank();
    // c^T H = 0, i.e. H^T c = 0
    let ht = matrix.to_matrix().transpose();
    let f = matrix.field();
    let singular = if rank < n + 1 {
        space
            .points()
            .into_iter()
            .filter(|c| ht.mul_vec(f, c.coords()).iter().all(|v| v.is_zero()))
            .collect()
    } else {
        Vec::new()
    };
    let members = points.iter().copied().collect();
    Ok(HermitianVariety {
        matrix,
        space,
        points,
        members,
        rank,
        singular,
    })
}

impl HermitianVariety {
    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn space(&self) -> &ProjectiveSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_degenerate(&self) -> bool {
        self.rank < self.dim() + 1
    }

    /// Points of the singular space, empty when non-degenerate.
    pub fn singular_points(&self) -> &[ProjPoint] {
        &self.singular
    }

    pub fn contains(&self, x: &ProjPoint) -> bool {
        self.members.contains(x)
    }

    /// Evaluates the defining equation directly.
    pub fn satisfies(&self, x: &ProjPoint) -> bool {
        self.matrix.form(x.coords(), x.coords()).is_zero()
    }

    pub fn intersection(&self, line: &ProjLine) -> Vec<ProjPoint> {
        self.space
            .line_members(line)
            .into_iter()
            .filter(|x| self.contains(x))
            .collect()
    }

    pub fn classify_line(&self, line: &ProjLine) -> Result<LineClass> {
        let size = self.intersection(line).len();
        let q = self.matrix.field().order() as usize;
        let s = self.matrix.sqrt_q() as usize;
        match size {
            1 => Ok(LineClass::Tangent),
            n if n == s + 1 => Ok(LineClass::Secant),
            n if n == q + 1 => Ok(LineClass::Contained),
            n => Err(Error::InternalClassification(n)),
        }
    }

    pub fn tangent_space(&self, c: &ProjPoint) -> TangentSpace {
        match ProjPoint::normalize(self.matrix.field(), &self.matrix.apply_conj(c.coords())) {
            Some(h) => TangentSpace::Hyperplane(h),
            None => TangentSpace::WholeSpace,
        }
    }

    /// Points of PG(n,q) on the hyperplane with dual coordinates `h`.
    pub fn hyperplane_points(&self, h: &ProjPoint) -> Vec<ProjPoint> {
        let f = self.matrix.field();
        self.space
            .points()
            .into_iter()
            .filter(|x| f.dot(x.coords(), h.coords()).is_zero())
            .collect()
    }

    /// Lines through `c` inside its tangent hyperplane, sorted.
    pub fn lines_in_tangent_space(&self, c: &ProjPoint) -> Result<Vec<ProjLine>> {
        let TangentSpace::Hyperplane(h) = self.tangent_space(c) else {
            return Err(Error::Internal("tangent space at a singular point is the whole space".into()));
        };
        let lines: BTreeSet<ProjLine> = self
            .hyperplane_points(&h)
            .iter()
            .filter_map(|x| self.space.line_through(c, x))
            .collect();
        Ok(lines.into_iter().collect())
    }

    /// Lines through the smooth point `c` meeting the variety only at `c`.
    pub fn tangent_lines_at(&self, c: &ProjPoint) -> Result<Vec<ProjLine>> {
        let mut out = Vec::new();
        for l in self.lines_in_tangent_space(c)? {
            if self.classify_line(&l)? == LineClass::Tangent {
                out.push(l);
            }
        }
        Ok(out)
    }
}

/// Points on a non-degenerate Hermitian variety in PG(n,q):
/// `(s^{n+1} - (-1)^{n+1})(s^n - (-1)^n) / (q - 1)`, `s = sqrt(q)`.
pub fn phi(n: u32, q: u64) -> u64 {
    let s = (q as f64).sqrt().round() as i128;
    assert_eq!((s * s) as u64, q, "q must be a square");
    let sign = |k: u32| if k.is_multiple_of(2) { 1i128 } else { -1 };
    let a = s.pow(n + 1) - sign(n + 1);
    let b = s.pow(n) - sign(n);
    ((a * b) / (q as i128 - 1)) as u64
}

/// Points on a rank-`r` Hermitian variety in PG(n,q):
/// `(q^{n-r+1} - 1) phi(r-1) + (q^{n-r+1} - 1)/(q - 1) + phi(r-1)`.
pub fn degenerate_count(n: u32, q: u64, r: u32) -> u64 {
    assert!((1..=n + 1).contains(&r));
    let t = q.pow(n + 1 - r);
    let base = phi(r - 1, q);
    (t - 1) * base + (t - 1) / (q - 1) + base
}

/// Structure of the section of a non-degenerate surface by a tangent plane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangentSection {
    pub points: usize,
    pub lines_through_point: usize,
    pub contained: usize,
    pub tangent: usize,
    /// The contained lines cover the section exactly.
    pub covered_by_contained: bool,
}

pub fn tangent_section(v: &HermitianVariety, c: &ProjPoint) -> Result<TangentSection> {
    let TangentSpace::Hyperplane(h) = v.tangent_space(c) else {
        return Err(Error::Internal("singular point has no tangent hyperplane".into()));
    };
    let section: BTreeSet<ProjPoint> = v
        .hyperplane_points(&h)
        .into_iter()
        .filter(|x| v.contains(x))
        .collect();
    let lines = v.lines_in_tangent_space(c)?;
    let mut contained = 0;
    let mut tangent = 0;
    let mut union = BTreeSet::new();
    for l in &lines {
        match v.classify_line(l)? {
            LineClass::Contained => {
                contained += 1;
                union.extend(v.space().line_members(l));
            }
            LineClass::Tangent => tangent += 1,
            LineClass::Secant => {}
        }
    }
    Ok(TangentSection {
        points: section.len(),
        lines_through_point: lines.len(),
        contained,
        tangent,
        covered_by_contained: union == section,
    })
}

/// Tangent lines at a random subset of a non-degenerate surface in PG(3,q).
#[derive(Clone, Debug)]
pub struct TangentLineFamily {
    pub alpha: Rational,
    pub seed: u64,
    pub chosen: Vec<ProjPoint>,
    pub lines: Vec<ProjLine>,
    /// Lines with at least one affine point, restricted to AG(3,q).
    pub affine: LineFamily,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TangentFamilyReport {
    pub q: u32,
    pub alpha: String,
    pub seed: u64,
    pub variety_points: usize,
    pub chosen_points: usize,
    pub lines: usize,
    pub lines_distinct: bool,
    pub projective_points: usize,
    pub projective_covered: usize,
    /// Points of the variety outside the chosen set hit by some line (should be 0).
    pub unchosen_variety_covered: usize,
    pub affine_lines: usize,
    pub affine_covered: usize,
    pub affine_uncovered: usize,
    pub max_plane_occupancy: u32,
    /// `alpha q^{3/2}`, shown next to the occupancy; not a check.
    pub occupancy_reference: f64,
}

/// `floor(alpha |V|)` points by seeded shuffle, and all `q - s` tangent
/// lines at each.
pub fn build_tangent_line_family(
    v: &HermitianVariety,
    alpha: Rational,
    seed: u64,
) -> Result<(TangentLineFamily, TangentFamilyReport)> {
    if v.dim() != 3 || v.is_degenerate() {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: v.rank(),
        });
    }
    if alpha <= Rational::from_integer(0) || alpha > Rational::from_integer(1) {
        return Err(Error::AlphaOutOfRange(format_rational(&alpha)));
    }
    let field = v.matrix().field().clone();
    let q = field.order();
    let take = (alpha * Rational::from_integer(v.len() as i64)).floor().to_integer() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = v.points().to_vec();
    order.shuffle(&mut rng);
    let mut chosen: Vec<ProjPoint> = order.into_iter().take(take).collect();
    chosen.sort();

    let per_point: Vec<Vec<ProjLine>> = chosen
        .par_iter()
        .map(|c| v.tangent_lines_at(c))
        .collect::<Result<_>>()?;
    let lines: Vec<ProjLine> = per_point.into_iter().flatten().collect();
    let distinct: BTreeSet<ProjLine> = lines.iter().copied().collect();
    if distinct.len() != lines.len() {
        return Err(Error::Internal(
            "a line is tangent at two chosen points".into(),
        ));
    }

    let mut covered = BTreeSet::new();
    for l in &lines {
        covered.extend(v.space().line_members(l));
    }
    let chosen_set: BTreeSet<ProjPoint> = chosen.iter().copied().collect();
    let unchosen_covered = v
        .points()
        .iter()
        .filter(|x| !chosen_set.contains(x) && covered.contains(x))
        .count();

    let aspace = AffineSpace::new(field.clone(), 3);
    let affine = LineFamily::from_lines(
        aspace.clone(),
        lines.iter().filter_map(|l| affine_line(&aspace, v.space(), l)),
    );
    let affine_covered = affine.union().len();
    let s = v.matrix().sqrt_q() as f64;
    let alpha_f = *alpha.numer() as f64 / *alpha.denom() as f64;

    let report = TangentFamilyReport {
        q,
        alpha: format_rational(&alpha),
        seed,
        variety_points: v.len(),
        chosen_points: chosen.len(),
        lines: lines.len(),
        lines_distinct: true,
        projective_points: v.space().point_count(),
        projective_covered: covered.len(),
        unchosen_variety_covered: unchosen_covered,
        affine_lines: affine.len(),
        affine_covered,
        affine_uncovered: aspace.size() - affine_covered,
        max_plane_occupancy: affine.max_plane_occupancy().map_or(0, |(_, c)| c),
        occupancy_reference: alpha_f * s * s * s,
    };
    Ok((
        TangentLineFamily {
            alpha,
            seed,
            chosen,
            lines,
            affine,
        },
        report,
    ))
}

/// Point of AG(n,q) for a projective point with `x_0 != 0`.
pub fn affine_point(x: &ProjPoint, field: &Field) -> Option<AffinePoint> {
    let c = x.coords();
    let s = field.inv(c[0])?;
    let rest: Vec<Fe> = c[1..].iter().map(|&v| field.mul(v, s)).collect();
    Some(AffinePoint::new(&rest))
}

/// Affine part of a projective line; `None` for lines inside `x_0 = 0`.
pub fn affine_line(
    aspace: &AffineSpace,
    pspace: &ProjectiveSpace,
    line: &ProjLine,
) -> Option<Line> {
    let f = pspace.field();
    let pts: Vec<AffinePoint> = pspace
        .line_members(line)
        .iter()
        .filter_map(|x| affine_point(x, f))
        .take(2)
        .collect();
    if pts.len() < 2 {
        return None;
    }
    aspace.line_through(&pts[0], &pts[1])
}
