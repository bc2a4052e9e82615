//! Degree-capped multivariate polynomials over GF(q).
//!
//! Every polynomial here has individual degree `< q` in each variable. The
//! total-degree cap is carried as an exclusive integer limit `T`: admissible
//! monomials have total degree in `0..T`. For a rational multiplicity
//! parameter `m` that limit is `ceil(mq)`.
//!
//! Multiplicity of vanishing is read off the coefficients of the shifted
//! polynomial `g(x + a)`, expanded with binomial coefficients reduced mod p.
//! This is the Hasse-derivative notion and stays correct in small
//! characteristic, where formal derivatives of `x^p` vanish.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{AffinePoint, PointSet};
use crate::gf::{Fe, Field};
use crate::linalg::Matrix;

pub type Rational = Ratio<i64>;

pub const MAX_VARS: usize = 3;

/// `C(n, k)` with the convention `C(n, k) = 0` for `n < k` (including negative `n`).
pub fn binomial(n: i64, k: u32) -> u128 {
    if n < k as i64 {
        return 0;
    }
    let n = n as u128;
    (0..k as u128).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// `C(e, j) mod p` via Lucas' theorem.
pub fn binomial_mod_p(mut e: u64, mut j: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while j > 0 || e > 0 {
        let (ed, jd) = (e % p, j % p);
        if jd > ed {
            return 0;
        }
        // C(ed, jd) mod p with all factors below p
        let mut num = 1u64;
        let mut den = 1u64;
        for t in 0..jd {
            num = num * ((ed - t) % p) % p;
            den = den * ((t + 1) % p) % p;
        }
        acc = acc * num % p * mod_pow(den, p - 2, p) % p;
        e /= p;
        j /= p;
    }
    acc
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Number of admissible total degrees `0..T` for `total degree < mq`: `T = ceil(mq)`, or 0 if `m <= 0`.
pub fn degree_limit(m: Rational, q: u32) -> u64 {
    let mq = m * Rational::from_integer(q as i64);
    if mq <= Rational::from_integer(0) {
        0
    } else {
        mq.ceil().to_integer() as u64
    }
}

/// Monomials in `n` variables with individual degree `< q` and total degree `< limit`,
/// by inclusion-exclusion over the variables forced to degree `>= q`.
pub fn count_below(n: u32, q: u32, limit: u64) -> u64 {
    let mut total: i128 = 0;
    for i in 0..=n {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let top = limit as i64 - (i as i64) * (q as i64) + n as i64 - 1;
        total += sign * binomial(n as i64, i) as i128 * binomial(top, n) as i128;
    }
    total as u64
}

/// `N_q(n, m)`: monomials with individual degree `< q` and total degree `< mq`.
///
/// The inclusion-exclusion terms use `ceil((m - i) q) + n - 1`; the floor form
/// of the same expression agrees only when `mq` is an integer.
pub fn count_capped_monomials(n: u32, q: u32, m: Rational) -> u64 {
    count_below(n, q, degree_limit(m, q))
}

/// Exponent vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: [u32; MAX_VARS],
    n: u8,
}

impl Monomial {
    pub fn new(exps: &[u32]) -> Monomial {
        assert!(exps.len() <= MAX_VARS);
        let mut e = [0; MAX_VARS];
        e[..exps.len()].copy_from_slice(exps);
        Monomial {
            exps: e,
            n: exps.len() as u8,
        }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps[..self.n as usize]
    }

    pub fn degree(&self) -> u32 {
        self.exps().iter().sum()
    }

    pub fn vars(&self) -> usize {
        self.n as usize
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exps().iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Exponent vectors in `n` variables with each entry `< cap` and total `< limit`, graded-lex.
pub fn exponents_below(n: usize, cap: u32, limit: u64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut e = vec![0u32; n];
    loop {
        if (e.iter().sum::<u32>() as u64) < limit {
            out.push(Monomial::new(&e));
        }
        // odometer
        let mut i = n;
        loop {
            if i == 0 {
                out.sort_by_key(|m| (m.degree(), *m));
                return out;
            }
            i -= 1;
            e[i] += 1;
            if e[i] < cap {
                break;
            }
            e[i] = 0;
        }
    }
}

/// Monomials admissible under the caps, in graded-lex order.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    n: usize,
    q: u32,
    limit: u64,
    monomials: Vec<Monomial>,
}

impl MonomialBasis {
    pub fn new(n: usize, q: u32, limit: u64) -> MonomialBasis {
        MonomialBasis {
            n,
            q,
            limit,
            monomials: exponents_below(n, q, limit),
        }
    }

    pub fn for_multiplicity(n: usize, q: u32, m: Rational) -> MonomialBasis {
        MonomialBasis::new(n, q, degree_limit(m, q))
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Exclusive total-degree limit.
    pub fn limit(&self) -> u64 {
        self.limit
    }
}

/// Order of vanishing; the zero polynomial vanishes to infinite order everywhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Multiplicity {
    Finite(u32),
    Infinite,
}

impl Multiplicity {
    pub fn at_least(self, m: u32) -> bool {
        match self {
            Multiplicity::Finite(k) => k >= m,
            Multiplicity::Infinite => true,
        }
    }
}

/// Sparse multivariate polynomial with nonzero coefficients only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    field: Arc<Field>,
    n: usize,
    terms: BTreeMap<Monomial, Fe>,
}

impl MultiPoly {
    pub fn zero(field: Arc<Field>, n: usize) -> MultiPoly {
        MultiPoly {
            field,
            n,
            terms: BTreeMap::new(),
        }
    }

    /// Sums like terms; rejects exponents `>= q`.
    pub fn from_terms<I>(field: Arc<Field>, n: usize, terms: I) -> Result<MultiPoly>
    where
        I: IntoIterator<Item = (Vec<u32>, Fe)>,
    {
        let mut g = MultiPoly::zero(field, n);
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: e.len(),
                });
            }
            if let Some(&bad) = e.iter().find(|&&x| x >= g.field.order()) {
                return Err(Error::DegreeCapViolated {
                    exponent: bad,
                    q: g.field.order(),
                });
            }
            g.add_term(Monomial::new(&e), c);
        }
        Ok(g)
    }

    /// Polynomial with the given coefficients on a basis.
    pub fn from_basis(field: Arc<Field>, basis: &MonomialBasis, coeffs: &[Fe]) -> MultiPoly {
        assert_eq!(basis.len(), coeffs.len());
        let mut g = MultiPoly::zero(field, basis.vars());
        for (m, &c) in basis.monomials().iter().zip(coeffs) {
            g.add_term(*m, c);
        }
        g
    }

    fn add_term(&mut self, m: Monomial, c: Fe) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        let entry = self.terms.entry(m).or_insert(Fe::ZERO);
        *entry = f.add(*entry, c);
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Fe> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn max_individual_degree(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.exps().iter().copied())
            .max()
            .unwrap_or(0)
    }

    pub fn coefficient(&self, m: &Monomial) -> Fe {
        self.terms.get(m).copied().unwrap_or(Fe::ZERO)
    }

    pub fn eval(&self, x: &[Fe]) -> Fe {
        assert_eq!(x.len(), self.n);
        let f = &self.field;
        self.terms.iter().fold(Fe::ZERO, |acc, (m, &c)| {
            let v = m
                .exps()
                .iter()
                .zip(x)
                .fold(c, |v, (&e, &xi)| f.mul(v, f.pow(xi, e as u64)));
            f.add(acc, v)
        })
    }

    pub fn eval_point(&self, a: &AffinePoint) -> Fe {
        self.eval(a.coords())
    }

    /// Degree-`d` homogeneous part, `d` the total degree.
    pub fn homogeneous_top(&self) -> Result<MultiPoly> {
        let d = self.total_degree().ok_or(Error::ZeroPolynomial)?;
        Ok(MultiPoly {
            field: self.field.clone(),
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (*m, *c))
                .collect(),
        })
    }

    fn binom_fe(&self, e: u32, j: u32) -> Fe {
        let p = self.field.characteristic() as u64;
        self.field.from_int(binomial_mod_p(e as u64, j as u64, p) as i64)
    }

    /// `g(x + a)`, expanded.
    pub fn shift(&self, a: &[Fe]) -> MultiPoly {
        assert_eq!(a.len(), self.n);
        let f = self.field.clone();
        let mut out = MultiPoly::zero(f.clone(), self.n);
        for (m, &c) in &self.terms {
            // product over variables of sum_j C(e_i, j) a_i^(e_i - j) x_i^j
            let mut partial: Vec<(Vec<u32>, Fe)> = vec![(Vec::new(), c)];
            for (i, &e) in m.exps().iter().enumerate() {
                let mut next = Vec::with_capacity(partial.len() * (e as usize + 1));
                for (exps, coeff) in &partial {
                    for j in 0..=e {
                        let b = self.binom_fe(e, j);
                        if b.is_zero() {
                            continue;
                        }
                        let w = f.mul(b, f.pow(a[i], (e - j) as u64));
                        if w.is_zero() {
                            continue;
                        }
                        let mut ex = exps.clone();
                        ex.push(j);
                        next.push((ex, f.mul(*coeff, w)));
                    }
                }
                partial = next;
            }
            for (ex, coeff) in partial {
                out.add_term(Monomial::new(&ex), coeff);
            }
        }
        out
    }

    /// Largest `m` such that `g(x + a)` has no term of degree `< m`.
    pub fn multiplicity_at(&self, a: &[Fe]) -> Multiplicity {
        let shifted = self.shift(a);
        match shifted.terms.keys().map(Monomial::degree).min() {
            Some(d) => Multiplicity::Finite(d),
            None => Multiplicity::Infinite,
        }
    }

    /// Hasse derivative of order `j` evaluated at `a`, which is the
    /// coefficient of `x^j` in `g(x + a)`.
    pub fn hasse_derivative_at(&self, j: &[u32], a: &[Fe]) -> Fe {
        let f = &self.field;
        self.terms.iter().fold(Fe::ZERO, |acc, (m, &c)| {
            let mut v = c;
            for ((&e, &ji), &ai) in m.exps().iter().zip(j).zip(a) {
                if ji > e {
                    return acc;
                }
                v = f.mul(v, f.mul(self.binom_fe(e, ji), f.pow(ai, (e - ji) as u64)));
            }
            f.add(acc, v)
        })
    }

    /// Multiplicity by scanning Hasse derivatives of increasing order.
    pub fn multiplicity_by_hasse(&self, a: &[Fe]) -> Multiplicity {
        let Some(top) = self.total_degree() else {
            return Multiplicity::Infinite;
        };
        let cap = self.max_individual_degree() + 1;
        let orders = exponents_below(self.n, cap, top as u64 + 1);
        for j in orders {
            if !self.hasse_derivative_at(j.exps(), a).is_zero() {
                return Multiplicity::Finite(j.degree());
            }
        }
        // a nonzero polynomial has a nonzero coefficient in its own expansion
        unreachable!("nonzero polynomial with all Hasse derivatives zero")
    }

    /// `g(a + t b)` as a polynomial in `t`.
    pub fn restrict_to_line(&self, a: &[Fe], b: &[Fe]) -> UniPoly {
        assert_eq!(a.len(), self.n);
        assert_eq!(b.len(), self.n);
        let f = self.field.clone();
        let max_e = self.max_individual_degree() as usize;
        // powers[i][k] = (a_i + b_i t)^k
        let powers: Vec<Vec<UniPoly>> = (0..self.n)
            .map(|i| {
                let lin = UniPoly::new(f.clone(), vec![a[i], b[i]]);
                let mut v = vec![UniPoly::constant(f.clone(), Fe::ONE)];
                for k in 1..=max_e {
                    let next = v[k - 1].mul(&lin);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = UniPoly::zero(f.clone());
        for (m, &c) in &self.terms {
            let mut term = UniPoly::constant(f.clone(), c);
            for (i, &e) in m.exps().iter().enumerate() {
                term = term.mul(&powers[i][e as usize]);
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Whether `g` vanishes at every point of GF(q)^n, cross-checked against
    /// the coefficient test (a polynomial with individual degrees `< q` that
    /// vanishes everywhere is the zero polynomial).
    pub fn is_identically_zero_on_space(&self) -> Result<bool> {
        let q = self.field.order();
        if let Some(&bad) = self
            .terms
            .keys()
            .flat_map(|m| m.exps().iter())
            .find(|&&e| e >= q)
        {
            return Err(Error::DegreeCapViolated { exponent: bad, q });
        }
        let size = (q as usize).pow(self.n as u32);
        let all_zero = (0..size).into_par_iter().all(|idx| {
            let mut x = vec![Fe::ZERO; self.n];
            let mut r = idx;
            for i in (0..self.n).rev() {
                x[i] = self.field.element((r % q as usize) as u32);
                r /= q as usize;
            }
            self.eval(&x).is_zero()
        });
        if all_zero != self.is_zero() {
            return Err(Error::Internal(
                "evaluation test and coefficient test disagree on a degree-capped polynomial"
                    .into(),
            ));
        }
        Ok(all_zero)
    }
}

/// Dense univariate polynomial, low coefficient first, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    field: Arc<Field>,
    coeffs: Vec<Fe>,
}

impl UniPoly {
    pub fn new(field: Arc<Field>, mut coeffs: Vec<Fe>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn zero(field: Arc<Field>) -> UniPoly {
        UniPoly::new(field, Vec::new())
    }

    pub fn constant(field: Arc<Field>, c: Fe) -> UniPoly {
        UniPoly::new(field, vec![c])
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn eval(&self, t: Fe) -> Fe {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, t), c))
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(Fe::ZERO);
                let b = other.coeffs.get(i).copied().unwrap_or(Fe::ZERO);
                f.add(a, b)
            })
            .collect();
        UniPoly::new(self.field.clone(), c)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.field.clone());
        }
        let f = &self.field;
        let mut c = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        UniPoly::new(self.field.clone(), c)
    }

    /// Quotient by `(t - r)` if `r` is a root.
    fn divide_by_root(&self, r: Fe) -> Option<UniPoly> {
        let f = &self.field;
        let n = self.coeffs.len();
        if n == 0 {
            return None;
        }
        let mut quotient = vec![Fe::ZERO; n - 1];
        let mut carry = Fe::ZERO;
        for i in (0..n).rev() {
            let v = f.add(self.coeffs[i], f.mul(carry, r));
            if i == 0 {
                return v.is_zero().then(|| UniPoly::new(self.field.clone(), quotient));
            }
            quotient[i - 1] = v;
            carry = v;
        }
        unreachable!()
    }

    /// Largest `k` with `(t - t0)^k` dividing the polynomial.
    pub fn multiplicity_at(&self, t0: Fe) -> Multiplicity {
        if self.is_zero() {
            return Multiplicity::Infinite;
        }
        let mut k = 0;
        let mut cur = self.clone();
        while let Some(next) = cur.divide_by_root(t0) {
            k += 1;
            cur = next;
        }
        Multiplicity::Finite(k)
    }

    /// Sum of root multiplicities over GF(q); `None` for the zero polynomial.
    pub fn zeros_with_multiplicity(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        Some(
            self.field
                .elements()
                .map(|t| match self.multiplicity_at(t) {
                    Multiplicity::Finite(k) => k as u64,
                    Multiplicity::Infinite => unreachable!(),
                })
                .sum(),
        )
    }
}

/// One multiplicity requirement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultiplicityConstraint {
    pub point: AffinePoint,
    pub mult: u32,
}

/// Linear constraints forcing vanishing to order `mult` at `a`: one row per
/// shift exponent `j` with `|j| < mult`; row entry at basis monomial `e` is
/// `prod_i C(e_i, j_i) a_i^(e_i - j_i)`.
fn constraint_rows(field: &Field, basis: &MonomialBasis, c: &MultiplicityConstraint) -> Vec<Vec<Fe>> {
    let n = basis.vars();
    let p = field.characteristic() as u64;
    let a = c.point.coords();
    exponents_below(n, c.mult.max(1), c.mult as u64)
        .iter()
        .map(|j| {
            basis
                .monomials()
                .iter()
                .map(|e| {
                    let mut v = Fe::ONE;
                    for i in 0..n {
                        let (ei, ji) = (e.exps()[i], j.exps()[i]);
                        if ji > ei {
                            return Fe::ZERO;
                        }
                        let b = field.from_int(binomial_mod_p(ei as u64, ji as u64, p) as i64);
                        v = field.mul(v, field.mul(b, field.pow(a[i], (ei - ji) as u64)));
                    }
                    v
                })
                .collect()
        })
        .collect()
}

/// Number of homogeneous linear conditions for vanishing to order `mult` in `n` variables.
pub fn conditions_per_point(mult: u32, n: u32) -> u64 {
    if mult == 0 {
        0
    } else {
        binomial(mult as i64 + n as i64 - 1, n) as u64
    }
}

/// Nonzero polynomial on `basis` meeting every constraint, found as a kernel
/// vector of the constraint system. The caller's counting precondition is
/// rechecked here; the result is verified with [`MultiPoly::multiplicity_at`].
pub fn interpolate_constraints(
    field: Arc<Field>,
    basis: &MonomialBasis,
    constraints: &[MultiplicityConstraint],
) -> Result<MultiPoly> {
    let n = basis.vars() as u32;
    let conditions: u64 = constraints
        .iter()
        .map(|c| conditions_per_point(c.mult, n))
        .sum();
    if conditions >= basis.len() as u64 {
        return Err(Error::InfeasibleCount {
            constraints: conditions,
            monomials: basis.len() as u64,
        });
    }
    let rows: Vec<Vec<Fe>> = constraints
        .par_iter()
        .flat_map_iter(|c| constraint_rows(&field, basis, c))
        .collect();
    let matrix = Matrix::from_rows(basis.len(), rows);
    let kernel = matrix
        .kernel_vector(&field)
        .ok_or_else(|| Error::Internal("underdetermined system has trivial kernel".into()))?;
    let g = MultiPoly::from_basis(field, basis, &kernel);
    if g.is_zero() {
        return Err(Error::Internal("kernel vector produced the zero polynomial".into()));
    }
    for c in constraints {
        if !g.multiplicity_at(c.point.coords()).at_least(c.mult) {
            return Err(Error::Internal(format!(
                "interpolant misses multiplicity {} at {:?}",
                c.mult,
                c.point.coords()
            )));
        }
    }
    Ok(g)
}

/// Nonzero polynomial with total degree `< mq` vanishing to order `m1` on
/// `s1` and `m2` on `s2`. Multiplicity 0 imposes nothing.
pub fn interpolate_vanishing(
    s1: &PointSet,
    m1: u32,
    s2: &PointSet,
    m2: u32,
    m: Rational,
) -> Result<MultiPoly> {
    if s1.space() != s2.space() {
        return Err(Error::MismatchedField {
            left: s1.space().q(),
            right: s2.space().q(),
        });
    }
    if !s1.is_disjoint(s2) {
        return Err(Error::SetsNotDisjoint);
    }
    let space = s1.space();
    let n = space.dim() as u32;
    let basis = MonomialBasis::for_multiplicity(space.dim(), space.q(), m);
    let conditions = s1.len() as u64 * conditions_per_point(m1, n)
        + s2.len() as u64 * conditions_per_point(m2, n);
    if conditions >= basis.len() as u64 {
        return Err(Error::InfeasibleCount {
            constraints: conditions,
            monomials: basis.len() as u64,
        });
    }
    let constraints: Vec<MultiplicityConstraint> = s1
        .points()
        .filter(|_| m1 > 0)
        .map(|point| MultiplicityConstraint { point, mult: m1 })
        .chain(
            s2.points()
                .filter(|_| m2 > 0)
                .map(|point| MultiplicityConstraint { point, mult: m2 }),
        )
        .collect();
    interpolate_constraints(space.field().clone(), &basis, &constraints)
}

/// One monomial per line: `coeff e1 .. en`, in monomial order.
pub fn write_poly(g: &MultiPoly) -> String {
    let mut out = String::new();
    for (m, &c) in g.terms() {
        out.push_str(&g.field().format(c));
        for e in m.exps() {
            out.push(' ');
            out.push_str(&e.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn read_poly(field: Arc<Field>, n: usize, text: &str) -> Result<MultiPoly> {
    let terms = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|line| {
            let mut parts = line.split_whitespace();
            let c = field.parse(parts.next().unwrap())?;
            let exps = parts
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad exponent {t:?}")))
                })
                .collect::<Result<Vec<u32>>>()?;
            Ok((exps, c))
        })
        .collect::<Result<Vec<_>>>()?;
    MultiPoly::from_terms(field, n, terms)
}

/// Parses decimals like `0.62`, integers, or fractions like `31/50` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let num: i64 = a.trim().parse().map_err(|_| bad())?;
        let den: i64 = b.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    if !digits.chars().all(|c| c.is_ascii_digit()) || frac.len() > 12 {
        return Err(bad());
    }
    let num: i64 = digits.parse().map_err(|_| bad())?;
    let den = 10i64.pow(frac.len() as u32);
    let r = Rational::new(num, den);
    Ok(if neg { -r } else { r })
}

/// `gcd`-reduced display of a rational as `a/b`.
pub fn format_rational(r: &Rational) -> String {
    let g = r.numer().gcd(r.denom());
    if *r.denom() / g == 1 {
        format!("{}", r.numer() / g)
    } else {
        format!("{}/{}", r.numer() / g, r.denom() / g)
    }
}
