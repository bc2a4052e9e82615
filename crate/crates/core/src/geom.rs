//! Points, lines and planes of AG(n,q) and PG(n,q) for n <= 3.
//!
//! Affine points are indexed by `x_0 q^{n-1} + ... + x_{n-1}` using the packed
//! field encodings, so index order is lexicographic coordinate order. Lines are
//! stored canonically as (least point, normalized direction).

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{Fe, Field};
use crate::linalg::Matrix;

pub const MAX_DIM: usize = 3;

/// Point of AG(n,q), `n <= 3`. Unused trailing coordinates are zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffinePoint {
    coords: [Fe; MAX_DIM],
    dim: u8,
}

impl AffinePoint {
    pub fn new(coords: &[Fe]) -> AffinePoint {
        assert!(coords.len() <= MAX_DIM, "at most {MAX_DIM} coordinates");
        let mut c = [Fe::ZERO; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        AffinePoint {
            coords: c,
            dim: coords.len() as u8,
        }
    }

    pub fn coords(&self) -> &[Fe] {
        &self.coords[..self.dim as usize]
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }
}

/// Point of PG(n,q), `n <= 3`, normalized so the first nonzero coordinate is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: [Fe; MAX_DIM + 1],
    len: u8,
}

impl ProjPoint {
    /// Normalizes a nonzero homogeneous vector; `None` for the zero vector.
    pub fn normalize(field: &Field, coords: &[Fe]) -> Option<ProjPoint> {
        assert!(coords.len() <= MAX_DIM + 1);
        let lead = coords.iter().find(|c| !c.is_zero())?;
        let s = field.inv(*lead)?;
        let mut c = [Fe::ZERO; MAX_DIM + 1];
        for (dst, &src) in c.iter_mut().zip(coords) {
            *dst = field.mul(src, s);
        }
        Some(ProjPoint {
            coords: c,
            len: coords.len() as u8,
        })
    }

    pub fn coords(&self) -> &[Fe] {
        &self.coords[..self.len as usize]
    }

    /// Position of the leading 1.
    pub fn lead(&self) -> usize {
        self.coords()
            .iter()
            .position(|c| !c.is_zero())
            .expect("projective points are nonzero")
    }
}

/// Line of AG(n,q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    pub base: AffinePoint,
    pub dir: ProjPoint,
}

/// Plane `<normal, x> = offset` of AG(3,q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Plane {
    pub normal: ProjPoint,
    pub offset: Fe,
}

/// PG(n,q) with canonical point enumeration.
#[derive(Clone, Debug)]
pub struct ProjectiveSpace {
    field: Arc<Field>,
    dim: usize,
}

impl ProjectiveSpace {
    pub fn new(field: Arc<Field>, dim: usize) -> ProjectiveSpace {
        assert!((1..=MAX_DIM).contains(&dim), "projective dimension {dim} unsupported");
        ProjectiveSpace { field, dim }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(q^{n+1} - 1) / (q - 1)`.
    pub fn point_count(&self) -> usize {
        let q = self.field.order() as usize;
        (0..=self.dim).map(|i| q.pow(i as u32)).sum()
    }

    /// Points in lexicographic order of their normalized coordinates.
    pub fn points(&self) -> Vec<ProjPoint> {
        let q = self.field.order();
        let n = self.dim;
        let mut out = Vec::with_capacity(self.point_count());
        for lead in (0..=n).rev() {
            let free = n - lead;
            for code in 0..(q as usize).pow(free as u32) {
                let mut c = [Fe::ZERO; MAX_DIM + 1];
                c[lead] = Fe::ONE;
                let mut x = code;
                for i in (lead + 1..=n).rev() {
                    c[i] = self.field.element((x % q as usize) as u32);
                    x /= q as usize;
                }
                out.push(ProjPoint {
                    coords: c,
                    len: (n + 1) as u8,
                });
            }
        }
        out
    }

    /// Position of `pt` in [`ProjectiveSpace::points`].
    pub fn index_of(&self, pt: &ProjPoint) -> usize {
        let q = self.field.order() as usize;
        let n = self.dim;
        let lead = pt.lead();
        let before: usize = (0..n - lead).map(|t| q.pow(t as u32)).sum();
        let offset = pt.coords()[lead + 1..]
            .iter()
            .fold(0, |acc, c| acc * q + c.index() as usize);
        before + offset
    }

    /// The q+1 points of the line spanned by two distinct points.
    pub fn line_points(&self, a: &ProjPoint, b: &ProjPoint) -> Vec<ProjPoint> {
        let f = &self.field;
        let mut out = vec![*a];
        for t in f.elements() {
            let v: Vec<Fe> = a
                .coords()
                .iter()
                .zip(b.coords())
                .map(|(&x, &y)| f.add(f.mul(t, x), y))
                .collect();
            out.push(ProjPoint::normalize(f, &v).expect("distinct points span a line"));
        }
        out.sort();
        out.dedup();
        out
    }

    /// Line spanned by two points, `None` if they coincide.
    pub fn line_through(&self, a: &ProjPoint, b: &ProjPoint) -> Option<ProjLine> {
        let f = &self.field;
        let mut m = Matrix::from_rows(
            self.dim + 1,
            vec![a.coords().to_vec(), b.coords().to_vec()],
        );
        if m.rref(f).len() < 2 {
            return None;
        }
        let len = (self.dim + 1) as u8;
        let row = |r: usize| {
            let mut c = [Fe::ZERO; MAX_DIM + 1];
            c[..self.dim + 1].copy_from_slice(m.row(r));
            ProjPoint { coords: c, len }
        };
        Some(ProjLine {
            rows: [row(0), row(1)],
        })
    }

    /// The q+1 points of a line, sorted.
    pub fn line_members(&self, line: &ProjLine) -> Vec<ProjPoint> {
        self.line_points(&line.rows[0], &line.rows[1])
    }

    /// All lines of PG(n,q), each as its reduced row-echelon basis pair.
    pub fn lines(&self) -> Vec<ProjLine> {
        let q = self.field.order() as usize;
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..=n {
            for j in i + 1..=n {
                // row0 free positions: i < c <= n, c != j; row1 free positions: c > j
                let free0: Vec<usize> = (i + 1..=n).filter(|&c| c != j).collect();
                let free1: Vec<usize> = (j + 1..=n).collect();
                let total = free0.len() + free1.len();
                for code in 0..q.pow(total as u32) {
                    let mut r0 = [Fe::ZERO; MAX_DIM + 1];
                    let mut r1 = [Fe::ZERO; MAX_DIM + 1];
                    r0[i] = Fe::ONE;
                    r1[j] = Fe::ONE;
                    let mut x = code;
                    for &c in free1.iter().rev() {
                        r1[c] = self.field.element((x % q) as u32);
                        x /= q;
                    }
                    for &c in free0.iter().rev() {
                        r0[c] = self.field.element((x % q) as u32);
                        x /= q;
                    }
                    let len = (n + 1) as u8;
                    out.push(ProjLine {
                        rows: [ProjPoint { coords: r0, len }, ProjPoint { coords: r1, len }],
                    });
                }
            }
        }
        out
    }
}

/// Line of PG(n,q) in reduced row-echelon form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjLine {
    pub rows: [ProjPoint; 2],
}

/// AG(n,q) for n in {2, 3}, or n = 1 for completeness.
#[derive(Clone, Debug)]
pub struct AffineSpace {
    field: Arc<Field>,
    dim: usize,
}

impl PartialEq for AffineSpace {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && *self.field == *other.field
    }
}

impl AffineSpace {
    pub fn new(field: Arc<Field>, dim: usize) -> AffineSpace {
        assert!((1..=MAX_DIM).contains(&dim), "affine dimension {dim} unsupported");
        AffineSpace { field, dim }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of points, `q^n`.
    pub fn size(&self) -> usize {
        (self.q() as usize).pow(self.dim as u32)
    }

    pub fn point(&self, index: usize) -> AffinePoint {
        let q = self.q() as usize;
        let mut c = [Fe::ZERO; MAX_DIM];
        let mut x = index;
        for i in (0..self.dim).rev() {
            c[i] = self.field.element((x % q) as u32);
            x /= q;
        }
        AffinePoint {
            coords: c,
            dim: self.dim as u8,
        }
    }

    pub fn index(&self, pt: &AffinePoint) -> usize {
        let q = self.q() as usize;
        pt.coords().iter().fold(0, |acc, c| acc * q + c.index() as usize)
    }

    pub fn points(&self) -> impl Iterator<Item = AffinePoint> + '_ {
        (0..self.size()).map(|i| self.point(i))
    }

    pub fn origin(&self) -> AffinePoint {
        self.point(0)
    }

    /// Directions: the points of PG(n-1,q).
    pub fn directions(&self) -> Vec<ProjPoint> {
        if self.dim == 1 {
            return vec![ProjPoint::normalize(&self.field, &[Fe::ONE]).unwrap()];
        }
        ProjectiveSpace::new(self.field.clone(), self.dim - 1).points()
    }

    pub fn direction_count(&self) -> usize {
        let q = self.q() as usize;
        (0..self.dim).map(|i| q.pow(i as u32)).sum()
    }

    /// Total number of lines, `q^{n-1}` times the number of directions.
    pub fn line_count(&self) -> usize {
        (self.q() as usize).pow(self.dim as u32 - 1) * self.direction_count()
    }

    /// `x + t d`.
    pub fn translate(&self, x: &AffinePoint, t: Fe, d: &ProjPoint) -> AffinePoint {
        let f = &self.field;
        let mut c = [Fe::ZERO; MAX_DIM];
        for i in 0..self.dim {
            c[i] = f.add(x.coords[i], f.mul(t, d.coords[i]));
        }
        AffinePoint {
            coords: c,
            dim: self.dim as u8,
        }
    }

    /// Canonical line through `x` with direction `dir`: the base is the
    /// point with a zero in the direction's lead coordinate, which is the
    /// lexicographically least point of the line.
    pub fn line(&self, x: &AffinePoint, dir: &ProjPoint) -> Line {
        debug_assert_eq!(dir.coords().len(), self.dim);
        let lead = dir.lead();
        let t = self.field.neg(x.coords[lead]);
        Line {
            base: self.translate(x, t, dir),
            dir: *dir,
        }
    }

    /// Line through two distinct points.
    pub fn line_through(&self, a: &AffinePoint, b: &AffinePoint) -> Option<Line> {
        let f = &self.field;
        let diff: Vec<Fe> = b
            .coords()
            .iter()
            .zip(a.coords())
            .map(|(&y, &x)| f.sub(y, x))
            .collect();
        let dir = ProjPoint::normalize(f, &diff)?;
        Some(self.line(a, &dir))
    }

    pub fn canonicalize(&self, line: &Line) -> Line {
        self.line(&line.base, &line.dir)
    }

    /// The q points of a line, in parameter order of the field elements.
    pub fn line_points(&self, line: &Line) -> impl Iterator<Item = AffinePoint> + '_ {
        let line = *line;
        self.field
            .elements()
            .map(move |t| self.translate(&line.base, t, &line.dir))
    }

    pub fn line_point_indices(&self, line: &Line) -> impl Iterator<Item = usize> + '_ {
        self.line_points(line).map(|p| self.index(&p))
    }

    pub fn line_contains(&self, line: &Line, pt: &AffinePoint) -> bool {
        self.line(pt, &line.dir) == *line
    }

    /// Dense id in `0..line_count()`.
    pub fn line_id(&self, line: &Line) -> usize {
        let q = self.q() as usize;
        let lead = line.dir.lead();
        let dir_index = if self.dim == 1 {
            0
        } else {
            ProjectiveSpace::new(self.field.clone(), self.dim - 1).index_of(&line.dir)
        };
        let offset = line
            .base
            .coords()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != lead)
            .fold(0, |acc, (_, c)| acc * q + c.index() as usize);
        dir_index * q.pow(self.dim as u32 - 1) + offset
    }

    /// Every line exactly once, in canonical order.
    pub fn lines(&self) -> Vec<Line> {
        let q = self.q() as usize;
        let mut out = Vec::with_capacity(self.line_count());
        for dir in self.directions() {
            let lead = dir.lead();
            for code in 0..q.pow(self.dim as u32 - 1) {
                let mut c = [Fe::ZERO; MAX_DIM];
                let mut x = code;
                for i in (0..self.dim).rev().filter(|&i| i != lead) {
                    c[i] = self.field.element((x % q) as u32);
                    x /= q;
                }
                out.push(Line {
                    base: AffinePoint {
                        coords: c,
                        dim: self.dim as u8,
                    },
                    dir,
                });
            }
        }
        out.sort();
        out
    }

    /// The `q^{n-1}` lines with a given direction, in canonical order.
    pub fn parallel_class(&self, dir: &ProjPoint) -> Vec<Line> {
        let lead = dir.lead();
        self.points()
            .filter(|x| x.coords[lead].is_zero())
            .map(|base| Line { base, dir: *dir })
            .collect()
    }

    /// Lines through a point, one per direction, in direction order.
    pub fn lines_through(&self, pt: &AffinePoint) -> Vec<Line> {
        self.directions()
            .iter()
            .map(|d| self.line(pt, d))
            .collect()
    }

    fn require_dim3(&self) {
        assert_eq!(self.dim, 3, "planes are only defined for AG(3,q)");
    }

    pub fn plane(&self, normal: &ProjPoint, offset: Fe) -> Plane {
        self.require_dim3();
        Plane {
            normal: *normal,
            offset,
        }
    }

    /// All `q^3 + q^2 + q` planes.
    pub fn planes(&self) -> Vec<Plane> {
        self.require_dim3();
        let mut out = Vec::new();
        for normal in self.directions() {
            for offset in self.field.elements() {
                out.push(Plane { normal, offset });
            }
        }
        out
    }

    pub fn plane_contains(&self, plane: &Plane, pt: &AffinePoint) -> bool {
        self.field.dot(plane.normal.coords(), pt.coords()) == plane.offset
    }

    pub fn plane_contains_line(&self, plane: &Plane, line: &Line) -> bool {
        self.field.dot(plane.normal.coords(), line.dir.coords()).is_zero()
            && self.plane_contains(plane, &line.base)
    }

    /// The q^2 points of a plane, solved for the normal's lead coordinate.
    pub fn plane_points(&self, plane: &Plane) -> Vec<AffinePoint> {
        self.require_dim3();
        let f = &self.field;
        let q = self.q() as usize;
        let n = plane.normal.coords();
        let lead = plane.normal.lead();
        let mut out = Vec::with_capacity(q * q);
        for code in 0..q * q {
            let mut c = [Fe::ZERO; MAX_DIM];
            let mut x = code;
            for i in (0..3).rev().filter(|&i| i != lead) {
                c[i] = f.element((x % q) as u32);
                x /= q;
            }
            let rest = (0..3)
                .filter(|&i| i != lead)
                .fold(Fe::ZERO, |acc, i| f.add(acc, f.mul(n[i], c[i])));
            c[lead] = f.sub(plane.offset, rest);
            out.push(AffinePoint { coords: c, dim: 3 });
        }
        out.sort();
        out
    }

    /// The q+1 planes containing a line.
    pub fn planes_containing_line(&self, line: &Line) -> Vec<Plane> {
        self.require_dim3();
        let f = &self.field;
        self.directions()
            .into_iter()
            .filter(|n| f.dot(n.coords(), line.dir.coords()).is_zero())
            .map(|normal| Plane {
                normal,
                offset: f.dot(normal.coords(), line.base.coords()),
            })
            .collect()
    }

    /// The q(q+1) lines inside a plane.
    pub fn lines_in_plane(&self, plane: &Plane) -> LineFamily {
        let f = &self.field;
        let dirs: Vec<ProjPoint> = self
            .directions()
            .into_iter()
            .filter(|d| f.dot(plane.normal.coords(), d.coords()).is_zero())
            .collect();
        let pts = self.plane_points(plane);
        let lines = dirs
            .iter()
            .flat_map(|d| pts.iter().map(move |x| (x, d)))
            .map(|(x, d)| self.line(x, d));
        LineFamily::from_lines(self.clone(), lines)
    }

    /// Maps each line through `pt` to its direction, a point of PG(2,q).
    pub fn project_from_point(&self, pt: &AffinePoint) -> BTreeMap<Line, ProjPoint> {
        self.lines_through(pt)
            .into_iter()
            .map(|l| (l, l.dir))
            .collect()
    }

    /// Image of a plane under projection from one of its points: the
    /// directions it contains, a line of PG(2,q) with dual coordinates equal
    /// to the plane's normal.
    pub fn projected_plane(&self, plane: &Plane) -> Vec<ProjPoint> {
        let f = &self.field;
        self.directions()
            .into_iter()
            .filter(|d| f.dot(plane.normal.coords(), d.coords()).is_zero())
            .collect()
    }
}

/// Dual coordinates of the q+1 lines of PG(2,q) dual to the conic
/// `{(t, t^2, 1)} ∪ {(0, 1, 0)}`, in parameter order with the point at
/// infinity last. No point of PG(2,q) lies on three of them.
pub fn conic_dual_lines(field: &Field) -> Result<Vec<ProjPoint>> {
    if field.order() < 3 {
        return Err(Error::UnsupportedField(format!(
            "conic duals need q >= 3, got q = {}",
            field.order()
        )));
    }
    let mut out: Vec<ProjPoint> = field
        .elements()
        .map(|t| ProjPoint::normalize(field, &[t, field.mul(t, t), Fe::ONE]).unwrap())
        .collect();
    out.push(ProjPoint::normalize(field, &[Fe::ZERO, Fe::ONE, Fe::ZERO]).unwrap());
    Ok(out)
}

/// Largest number of the given PG(2,q) lines (dual coordinates) through a common point.
pub fn max_concurrency(field: &Arc<Field>, lines: &[ProjPoint]) -> usize {
    ProjectiveSpace::new(field.clone(), 2)
        .points()
        .iter()
        .map(|x| {
            lines
                .iter()
                .filter(|l| field.dot(l.coords(), x.coords()).is_zero())
                .count()
        })
        .max()
        .unwrap_or(0)
}

/// Dense membership bitmap over the points of AG(n,q).
#[derive(Clone, Debug)]
pub struct PointSet {
    space: AffineSpace,
    bits: Vec<u64>,
    count: usize,
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.bits == other.bits
    }
}

impl PointSet {
    pub fn empty(space: AffineSpace) -> PointSet {
        let words = space.size().div_ceil(64);
        PointSet {
            space,
            bits: vec![0; words],
            count: 0,
        }
    }

    pub fn full(space: AffineSpace) -> PointSet {
        let mut s = PointSet::empty(space);
        for i in 0..s.space.size() {
            s.insert(i);
        }
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(space: AffineSpace, it: I) -> PointSet {
        let mut s = PointSet::empty(space);
        for i in it {
            s.insert(i);
        }
        s
    }

    pub fn from_points<'a, I: IntoIterator<Item = &'a AffinePoint>>(
        space: AffineSpace,
        it: I,
    ) -> PointSet {
        let mut s = PointSet::empty(space);
        for p in it {
            let i = s.space.index(p);
            s.insert(i);
        }
        s
    }

    pub fn space(&self) -> &AffineSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    #[inline]
    pub fn contains(&self, index: usize) -> bool {
        self.bits[index / 64] >> (index % 64) & 1 == 1
    }

    pub fn contains_point(&self, pt: &AffinePoint) -> bool {
        self.contains(self.space.index(pt))
    }

    /// Returns true if the point was newly added.
    pub fn insert(&mut self, index: usize) -> bool {
        assert!(index < self.space.size(), "point index {index} out of range");
        let (w, b) = (index / 64, index % 64);
        let fresh = self.bits[w] >> b & 1 == 0;
        if fresh {
            self.bits[w] |= 1 << b;
            self.count += 1;
        }
        fresh
    }

    pub fn remove(&mut self, index: usize) -> bool {
        let (w, b) = (index / 64, index % 64);
        let present = self.bits[w] >> b & 1 == 1;
        if present {
            self.bits[w] &= !(1 << b);
            self.count -= 1;
        }
        present
    }

    /// Member indices in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.space.size()).filter(|&i| self.contains(i))
    }

    pub fn points(&self) -> impl Iterator<Item = AffinePoint> + '_ {
        self.iter().map(|i| self.space.point(i))
    }

    pub fn complement(&self) -> PointSet {
        PointSet::from_indices(
            self.space.clone(),
            (0..self.space.size()).filter(|&i| !self.contains(i)),
        )
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & b == 0)
    }

    pub fn union_with(&mut self, other: &PointSet) {
        for i in other.iter() {
            self.insert(i);
        }
    }

    pub fn contains_line(&self, line: &Line) -> bool {
        self.space.line_point_indices(line).all(|i| self.contains(i))
    }

    /// Recount from the bitmap.
    pub fn popcount(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Distinct lines, sorted canonically, with a per-plane occupancy index (AG(3,q) only).
#[derive(Clone, Debug)]
pub struct LineFamily {
    space: AffineSpace,
    lines: Vec<Line>,
    occupancy: BTreeMap<Plane, u32>,
}

impl PartialEq for LineFamily {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.lines == other.lines
    }
}

impl LineFamily {
    pub fn new(space: AffineSpace) -> LineFamily {
        LineFamily {
            space,
            lines: Vec::new(),
            occupancy: BTreeMap::new(),
        }
    }

    /// Canonicalizes and deduplicates.
    pub fn from_lines<I: IntoIterator<Item = Line>>(space: AffineSpace, lines: I) -> LineFamily {
        let mut v: Vec<Line> = lines.into_iter().map(|l| space.canonicalize(&l)).collect();
        v.sort();
        v.dedup();
        let mut fam = LineFamily {
            space,
            lines: v,
            occupancy: BTreeMap::new(),
        };
        if fam.space.dim() == 3 {
            for line in fam.lines.clone() {
                fam.bump(&line);
            }
        }
        fam
    }

    /// All lines of the space.
    pub fn all(space: AffineSpace) -> LineFamily {
        let lines = space.lines();
        LineFamily::from_lines(space, lines)
    }

    fn bump(&mut self, line: &Line) {
        for plane in self.space.planes_containing_line(line) {
            *self.occupancy.entry(plane).or_insert(0) += 1;
        }
    }

    /// Returns true if the line was newly added.
    pub fn insert(&mut self, line: Line) -> bool {
        let line = self.space.canonicalize(&line);
        match self.lines.binary_search(&line) {
            Ok(_) => false,
            Err(pos) => {
                self.lines.insert(pos, line);
                if self.space.dim() == 3 {
                    self.bump(&line);
                }
                true
            }
        }
    }

    pub fn space(&self) -> &AffineSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn iter(&self) -> impl Iterator<Item = &Line> {
        self.lines.iter()
    }

    pub fn contains(&self, line: &Line) -> bool {
        self.lines
            .binary_search(&self.space.canonicalize(line))
            .is_ok()
    }

    /// Member lines inside a plane.
    pub fn occupancy(&self, plane: &Plane) -> u32 {
        self.occupancy.get(plane).copied().unwrap_or(0)
    }

    /// Planes with at least one member line, with their counts.
    pub fn occupancies(&self) -> &BTreeMap<Plane, u32> {
        &self.occupancy
    }

    /// Most occupied plane (first in canonical order on ties).
    pub fn max_plane_occupancy(&self) -> Option<(Plane, u32)> {
        self.occupancy
            .iter()
            .fold(None, |best: Option<(Plane, u32)>, (p, &c)| match best {
                Some((_, b)) if b >= c => best,
                _ => Some((*p, c)),
            })
    }

    /// Occupancy rebuilt by scanning every plane; the check for the incremental index.
    pub fn recount_occupancy(&self) -> BTreeMap<Plane, u32> {
        let mut out = BTreeMap::new();
        for plane in self.space.planes() {
            let c = self
                .lines
                .iter()
                .filter(|l| self.space.plane_contains_line(&plane, l))
                .count() as u32;
            if c > 0 {
                out.insert(plane, c);
            }
        }
        out
    }

    /// Union of the member lines' points.
    pub fn union(&self) -> PointSet {
        let mut s = PointSet::empty(self.space.clone());
        for l in &self.lines {
            for i in self.space.line_point_indices(l) {
                s.insert(i);
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(q: u64, n: usize) -> AffineSpace {
        AffineSpace::new(Arc::new(Field::with_order(q).unwrap()), n)
    }

    #[test]
    fn line_counts() {
        assert_eq!(space(2, 3).lines().len(), 28);
        assert_eq!(space(3, 3).lines().len(), 117);
        assert_eq!(space(4, 3).lines().len(), 256 + 64 + 16);
        assert_eq!(space(3, 2).lines().len(), 12);
    }

    #[test]
    fn lines_are_distinct_and_canonical() {
        let s = space(3, 3);
        let lines = s.lines();
        let mut d = lines.clone();
        d.dedup();
        assert_eq!(d.len(), lines.len());
        for l in &lines {
            assert_eq!(s.canonicalize(l), *l);
            let pts: Vec<_> = s.line_points(l).collect();
            assert_eq!(*pts.iter().min().unwrap(), l.base);
            assert_eq!(pts.len(), 3);
            for p in &pts {
                assert_eq!(s.line(p, &l.dir), *l);
            }
        }
    }

    #[test]
    fn seven_lines_per_point_at_q2() {
        let s = space(2, 3);
        let lines = s.lines();
        for p in s.points() {
            assert_eq!(lines.iter().filter(|l| s.line_contains(l, &p)).count(), 7);
        }
    }

    #[test]
    fn line_ids_are_a_bijection() {
        let s = space(4, 3);
        let mut ids: Vec<_> = s.lines().iter().map(|l| s.line_id(l)).collect();
        ids.sort();
        assert_eq!(ids, (0..s.line_count()).collect::<Vec<_>>());
    }

    #[test]
    fn plane_has_q_squared_points_and_q_q_plus_1_lines() {
        for q in [2, 3] {
            let s = space(q, 3);
            let q = q as usize;
            assert_eq!(s.planes().len(), q * q * q + q * q + q);
            for plane in s.planes() {
                let pts = s.plane_points(&plane);
                assert_eq!(pts.len(), q * q);
                assert!(pts.iter().all(|p| s.plane_contains(&plane, p)));
                let lines = s.lines_in_plane(&plane);
                assert_eq!(lines.len(), q * (q + 1));
                for l in lines.iter() {
                    assert!(s.line_points(l).all(|p| s.plane_contains(&plane, &p)));
                }
            }
        }
    }

    #[test]
    fn projective_point_counts_and_index() {
        for (q, n, expected) in [(2, 2, 7), (3, 2, 13), (4, 3, 85), (3, 1, 4)] {
            let f = Arc::new(Field::with_order(q).unwrap());
            let pg = ProjectiveSpace::new(f, n);
            let pts = pg.points();
            assert_eq!(pts.len(), expected);
            assert_eq!(pg.point_count(), expected);
            let mut sorted = pts.clone();
            sorted.sort();
            assert_eq!(sorted, pts);
            for (i, p) in pts.iter().enumerate() {
                assert_eq!(pg.index_of(p), i);
            }
        }
    }

    #[test]
    fn projective_line_enumeration() {
        for (q, n, expected) in [(2, 2, 7), (3, 2, 13), (2, 3, 35), (4, 3, 357)] {
            let f = Arc::new(Field::with_order(q).unwrap());
            let pg = ProjectiveSpace::new(f, n);
            let lines = pg.lines();
            assert_eq!(lines.len(), expected, "PG({n},{q})");
            let mut point_sets: Vec<Vec<ProjPoint>> = lines
                .iter()
                .map(|l| pg.line_points(&l.rows[0], &l.rows[1]))
                .collect();
            assert!(point_sets.iter().all(|s| s.len() == q as usize + 1));
            point_sets.sort();
            point_sets.dedup();
            assert_eq!(point_sets.len(), expected);
        }
    }

    #[test]
    fn conic_duals_have_no_three_concurrent() {
        for q in [3, 4, 5, 7] {
            let f = Arc::new(Field::with_order(q).unwrap());
            let lines = conic_dual_lines(&f).unwrap();
            assert_eq!(lines.len(), q as usize + 1);
            assert_eq!(max_concurrency(&f, &lines), 2);
        }
        let f2 = Field::with_order(2).unwrap();
        assert!(matches!(conic_dual_lines(&f2), Err(Error::UnsupportedField(_))));
    }

    #[test]
    fn point_set_basics() {
        let s = space(3, 2);
        let mut set = PointSet::empty(s.clone());
        assert!(set.insert(4));
        assert!(!set.insert(4));
        assert_eq!(set.len(), 1);
        assert_eq!(set.complement().len(), 8);
        assert!(set.remove(4));
        assert!(set.is_empty());
        assert_eq!(PointSet::full(s).popcount(), 9);
    }

    #[test]
    fn occupancy_index_matches_recount() {
        let s = space(3, 3);
        let lines: Vec<Line> = s.lines().into_iter().step_by(7).collect();
        let mut fam = LineFamily::from_lines(s.clone(), lines[..10].iter().copied());
        for l in &lines[10..] {
            fam.insert(*l);
        }
        assert_eq!(fam.occupancies(), &fam.recount_occupancy());
    }
}
