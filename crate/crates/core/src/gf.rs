//! Exact arithmetic in GF(p^k) for prime `p`, `1 <= k <= 4`, `p^k <= 2^20`.
//!
//! Elements are packed into a single word: the coefficient vector
//! `c_0 + c_1 x + ... + c_{k-1} x^{k-1}` is stored as `sum c_i p^i`. The
//! prime subfield therefore occupies the indices `0..p`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;
const INVERSE_TABLE_LIMIT: u32 = 1 << 16;

/// A field element, meaningful only together with the [`Field`] it came from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    /// Packed base-p encoding of the element.
    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^k` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p as u32, k))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Polynomials over GF(p), low coefficient first, used only for modulus work.
mod fp_poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    /// Remainder of `a` modulo the nonzero polynomial `b`.
    pub fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        let db = b.len() - 1;
        let lead_inv = inv_mod(b[db], p) as u64;
        while r.len() > db && !r.is_empty() {
            let shift = r.len() - 1 - db;
            let factor = r[r.len() - 1] as u64 * lead_inv % p as u64;
            for (i, &bc) in b.iter().enumerate() {
                let sub = factor * bc as u64 % p as u64;
                let slot = &mut r[shift + i];
                *slot = ((*slot as u64 + p as u64 - sub) % p as u64) as u32;
            }
            r = trim(r);
        }
        r
    }

    /// Monic polynomial of degree `deg` whose lower coefficients are the base-p digits of `code`.
    pub fn monic_from_code(code: u64, deg: u32, p: u32) -> Vec<u32> {
        let mut c = Vec::with_capacity(deg as usize + 1);
        let mut x = code;
        for _ in 0..deg {
            c.push((x % p as u64) as u32);
            x /= p as u64;
        }
        c.push(1);
        c
    }

    /// Trial division by every monic polynomial of degree `1..=deg/2`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let deg = (f.len() - 1) as u32;
        for d in 1..=deg / 2 {
            for code in 0..(p as u64).pow(d) {
                let g = monic_from_code(code, d, p);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

/// The finite field GF(p^k). Immutable after construction; share it through `Arc`.
#[derive(Clone)]
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    // discrete log tables, only for k > 1
    exp: Vec<u32>,
    log: Vec<u32>,
    inv: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl Field {
    /// Builds GF(p^k) with the lexicographically-first monic irreducible modulus.
    pub fn new(p: u32, k: u32) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NonPrime(p as u64));
        }
        if !(1..=4).contains(&k) {
            return Err(Error::DegreeTooLarge(k));
        }
        let q = (p as u64).pow(k);
        if q > MAX_ORDER {
            return Err(Error::OrderTooLarge(q));
        }
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            (0..(p as u64).pow(k))
                .map(|code| fp_poly::monic_from_code(code, k, p))
                .find(|f| fp_poly::is_irreducible(f, p))
                .ok_or(Error::NoIrreducibleFound { p, k })?
        };
        let mut field = Field {
            p,
            k,
            q: q as u32,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            inv: Vec::new(),
        };
        if k > 1 {
            field.build_log_tables()?;
        }
        if field.q <= INVERSE_TABLE_LIMIT {
            field.inv = (0..field.q)
                .map(|a| {
                    if a == 0 {
                        0
                    } else {
                        field.pow(Fe(a), field.q as u64 - 2).0
                    }
                })
                .collect();
        }
        Ok(field)
    }

    /// Builds the field of order `q`, which must be a supported prime power.
    pub fn with_order(q: u64) -> Result<Field> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Field::new(p, k)
    }

    fn build_log_tables(&mut self) -> Result<()> {
        let order = self.q as u64 - 1;
        let factors = prime_factors(order);
        let generator = (2..self.q)
            .map(Fe)
            .find(|&g| factors.iter().all(|&r| self.pow_slow(g, order / r) != Fe::ONE))
            .ok_or(Error::Internal("multiplicative group has no generator".into()))?;
        self.exp = vec![0; order as usize];
        self.log = vec![0; self.q as usize];
        let mut x = Fe::ONE;
        for i in 0..order as usize {
            self.exp[i] = x.0;
            self.log[x.0 as usize] = i as u32;
            x = self.mul_slow(x, generator);
        }
        Ok(())
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Monic modulus, low coefficient first (`x` for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.q).map(Fe)
    }

    /// Nonzero elements in index order.
    pub fn nonzero(&self) -> impl Iterator<Item = Fe> + Clone {
        (1..self.q).map(Fe)
    }

    /// Element from its packed index.
    pub fn element(&self, index: u32) -> Fe {
        assert!(index < self.q, "index {index} out of range for GF({})", self.q);
        Fe(index)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u32)
    }

    /// Base-p coefficients `c_0..c_{k-1}`.
    pub fn digits(&self, a: Fe) -> Vec<u32> {
        let mut x = a.0;
        (0..self.k)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<Fe> {
        if digits.len() != self.k as usize || digits.iter().any(|&d| d >= self.p) {
            return Err(Error::Parse(format!(
                "{digits:?} is not a coefficient vector for GF({})",
                self.q
            )));
        }
        Ok(Fe(digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)))
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.k == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= self.p { s - self.p } else { s });
        }
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0, 1);
        for _ in 0..self.k {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        Fe(out)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.k == 1 {
            return Fe(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        if self.p == 2 {
            return a;
        }
        let (mut x, mut out, mut place) = (a.0, 0, 1);
        for _ in 0..self.k {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        Fe(out)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        if self.k == 1 {
            return Fe((a.0 as u64 * b.0 as u64 % self.p as u64) as u32);
        }
        let order = self.q - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        Fe(self.exp[(if s >= order { s - order } else { s }) as usize])
    }

    /// Schoolbook product modulo the defining polynomial; the reference for `mul`.
    pub fn mul_slow(&self, a: Fe, b: Fe) -> Fe {
        let (da, db) = (self.digits(a), self.digits(b));
        let p = self.p as u64;
        let mut prod = vec![0u32; da.len() + db.len()];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p) as u32;
            }
        }
        let mut r = fp_poly::rem(&prod, &self.modulus, self.p);
        r.resize(self.k as usize, 0);
        self.from_digits(&r).expect("reduced remainder is a valid element")
    }

    fn pow_slow(&self, a: Fe, mut e: u64) -> Fe {
        let (mut base, mut acc) = (a, Fe::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let (mut base, mut acc) = (a, Fe::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            return None;
        }
        if !self.inv.is_empty() {
            return Some(Fe(self.inv[a.0 as usize]));
        }
        Some(self.pow(a, self.q as u64 - 2))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Option<Fe> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// `a^p`, the Frobenius automorphism.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.p as u64)
    }

    /// Conjugation `a -> a^p` of GF(p^2) over GF(p).
    pub fn conjugate(&self, a: Fe) -> Result<Fe> {
        if self.k != 2 {
            return Err(Error::WrongDegree {
                expected: 2,
                found: self.k,
            });
        }
        Ok(self.frobenius(a))
    }

    /// True for zero and the nonzero squares.
    pub fn is_square(&self, a: Fe) -> bool {
        if a.is_zero() || self.p == 2 {
            return true;
        }
        self.pow(a, (self.q as u64 - 1) / 2) == Fe::ONE
    }

    pub fn sum<I: IntoIterator<Item = Fe>>(&self, it: I) -> Fe {
        it.into_iter().fold(Fe::ZERO, |acc, x| self.add(acc, x))
    }

    /// `sum a_i b_i`.
    pub fn dot(&self, a: &[Fe], b: &[Fe]) -> Fe {
        a.iter()
            .zip(b)
            .fold(Fe::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// Element written as base-p digits, most significant first, joined by `.`.
    /// Prime-field elements are therefore plain decimal numbers.
    pub fn format(&self, a: Fe) -> String {
        let digits = self.digits(a);
        digits
            .iter()
            .rev()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }

    pub fn parse(&self, s: &str) -> Result<Fe> {
        let mut digits = s
            .split('.')
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad field digit {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        digits.reverse();
        self.from_digits(&digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(Field::new(4, 1), Err(Error::NonPrime(4)));
        assert_eq!(Field::new(2, 5), Err(Error::DegreeTooLarge(5)));
        assert_eq!(Field::new(2, 0), Err(Error::DegreeTooLarge(0)));
        assert!(matches!(Field::new(1031, 2), Err(Error::OrderTooLarge(_))));
        assert_eq!(Field::with_order(12), Err(Error::NotPrimePower(12)));
    }

    #[test]
    fn gf2_is_prime_field() {
        let f = Field::new(2, 1).unwrap();
        assert_eq!(f.elements().count(), 2);
        assert_eq!(f.add(Fe::ONE, Fe::ONE), Fe::ZERO);
        assert_eq!(f.mul(Fe::ONE, Fe::ONE), Fe::ONE);
    }

    #[test]
    fn gf4_modulus_and_x_squared() {
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let x = f.from_digits(&[0, 1]).unwrap();
        let x_plus_1 = f.from_digits(&[1, 1]).unwrap();
        assert_eq!(f.mul(x, x), x_plus_1);
    }

    #[test]
    fn moduli_are_first_irreducible() {
        // x^2 + 1 over GF(3), x^3 + x + 1 over GF(2), x^2 + 2 over GF(5)
        assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(Field::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(Field::new(5, 2).unwrap().modulus(), &[2, 0, 1]);
        assert_eq!(Field::new(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn gf9_conjugation_fixes_exactly_prime_subfield() {
        let f = Field::new(3, 2).unwrap();
        let fixed: Vec<_> = f
            .elements()
            .filter(|&a| f.conjugate(a).unwrap() == a)
            .collect();
        assert_eq!(fixed, vec![Fe(0), Fe(1), Fe(2)]);
        for a in f.elements() {
            let c = f.conjugate(a).unwrap();
            assert_eq!(f.conjugate(c).unwrap(), a);
            // the norm a * conj(a) lies in GF(3)
            assert!(f.mul(a, c).index() < 3);
        }
    }

    #[test]
    fn gf4_conjugate_of_generator() {
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.conjugate(Fe::ZERO).unwrap(), Fe::ZERO);
        assert_eq!(f.conjugate(Fe::ONE).unwrap(), Fe::ONE);
        let w = f.element(2);
        let w2 = f.mul(w, w);
        assert_eq!(f.conjugate(w).unwrap(), w2);
        assert!(f.mul(w, f.conjugate(w).unwrap()).index() < 2);
    }

    #[test]
    fn conjugate_needs_degree_two() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(
            f.conjugate(Fe::ONE),
            Err(Error::WrongDegree {
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn element_text_round_trip() {
        let f = Field::new(3, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.parse(&f.format(a)).unwrap(), a);
        }
        assert_eq!(f.format(f.from_digits(&[1, 2]).unwrap()), "2.1");
        assert!(f.parse("3.0").is_err());
        let g = Field::new(13, 1).unwrap();
        assert_eq!(g.format(Fe(12)), "12");
    }

    #[test]
    fn squares_in_gf7() {
        let f = Field::new(7, 1).unwrap();
        let squares: Vec<u32> = f
            .elements()
            .filter(|&a| f.is_square(a))
            .map(Fe::index)
            .collect();
        assert_eq!(squares, vec![0, 1, 2, 4]);
    }
}
