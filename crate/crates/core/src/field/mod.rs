//! Exact arithmetic in `F_q`, `q = p^k`, for every characteristic.
//!
//! Elements are stored by their canonical encoding: the polynomial-basis
//! coordinates `c_0 + c_1 x + ... + c_{k-1} x^{k-1}` (reduced modulo the
//! field's monic irreducible modulus) read as the base-`p` integer
//! `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. The encoding is a bijection onto
//! `[0, q)` and gives the total order used for every tie-break (square
//! roots, primitive elements, twisting constants).
//!
//! A [`FieldElement`] is a bare encoding; arithmetic goes through the
//! [`FieldSpec`] that owns the modulus. Fields with `q <= 2^16` carry
//! discrete-log tables built from the primitive element, so products and
//! inverses there are table lookups.

mod poly;

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_integer::Integer;
use rand::Rng;
use thiserror::Error;

use crate::arith;

/// Largest supported field size (exclusive).
pub const MAX_Q: u64 = 1 << 32;
/// Largest characteristic supported for proper extension fields (exclusive).
pub const MAX_EXTENSION_P: u64 = 1 << 16;
/// Fields up to this size get discrete-log tables.
pub const LOG_TABLE_LIMIT: u64 = 1 << 16;
/// Fields up to this size may build square-root / Artin-Schreier tables on demand.
pub const SOLVE_TABLE_LIMIT: u64 = 1 << 20;
/// Odd-characteristic extension fields up to this size get an addition table.
const ADD_TABLE_LIMIT: u64 = 1024;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus {0:?} is not monic of the field degree")]
    BadModulus(Vec<u64>),
    #[error("modulus {0:?} is reducible")]
    ReduciblePolynomial(Vec<u64>),
    #[error("field of size {0} is outside the supported range")]
    FieldTooLarge(u64),
    #[error("encoding {value} is not below q = {q}")]
    OutOfRange { value: u64, q: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not a square")]
    NotASquare,
}

/// An element of some `F_q`, held as its canonical integer encoding.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn encoding(self) -> u64 {
        self.0
    }

    /// Wraps an encoding without range checking.
    pub(crate) const fn from_encoding_unchecked(n: u64) -> FieldElement {
        FieldElement(n)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct LogTables {
    /// `exp[i] = g^i` for `0 <= i < 2(q-1)`.
    exp: Vec<u32>,
    /// `log[a]` for `a != 0`.
    log: Vec<u32>,
}

enum AddRule {
    Prime,
    Xor,
    Table { sum: Vec<u16>, neg: Vec<u16> },
    Digits,
}

struct Inner {
    p: u64,
    k: u32,
    q: u64,
    modulus: Vec<u64>,
    add: AddRule,
    logs: Option<LogTables>,
    primitive: FieldElement,
    // square-root tables: smallest root, or NONE for non-squares
    sqrt_table: OnceLock<Vec<u32>>,
    // characteristic 2: smaller root of z^2 + z = c, or NONE
    artin_schreier: OnceLock<Vec<u32>>,
    nonsquare: OnceLock<FieldElement>,
}

/// A finite field `F_{p^k}` with a fixed monic irreducible modulus.
///
/// Cloning is cheap (shared handle). Two specs compare equal when they
/// have the same characteristic, degree and modulus.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Inner>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.k == other.inner.k
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.inner.p)
            .field("k", &self.inner.k)
            .field("modulus", &self.inner.modulus)
            .finish()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.inner.q)
    }
}

/// Monic polynomial of degree `k` with the given lower coefficients, from
/// the base-`p` encoding `low` of those coefficients.
fn monic_from_low(low: u64, p: u64, k: u32) -> Vec<u64> {
    let mut out = digits(low, p, k as usize);
    out.push(1);
    out
}

fn digits(mut n: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(n % p);
        n /= p;
    }
    out
}

/// Canonical encoding of the monic irreducible of degree `k` with the
/// smallest encoding `sum c_i p^i`.
fn default_modulus(p: u64, k: u32) -> Vec<u64> {
    if k == 1 {
        return vec![0, 1];
    }
    let count = p.pow(k);
    (0..count)
        .map(|low| monic_from_low(low, p, k))
        .find(|f| poly::is_irreducible(f, p))
        .expect("an irreducible polynomial of every degree exists")
}

impl FieldSpec {
    /// Builds `F_{p^k}`. Without an explicit modulus the monic irreducible
    /// with the smallest canonical encoding is used.
    pub fn new(p: u64, k: u32, modulus: Option<&[u64]>) -> Result<Self, FieldError> {
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if !arith::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q < MAX_Q)
            .ok_or(FieldError::FieldTooLarge(p.saturating_pow(k)))?;
        if k > 1 && p >= MAX_EXTENSION_P {
            return Err(FieldError::FieldTooLarge(q));
        }
        let modulus = match modulus {
            Some(m) => {
                let m = m.to_vec();
                if m.len() != k as usize + 1 || m[k as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(FieldError::BadModulus(m));
                }
                if k > 1 && !poly::is_irreducible(&m, p) {
                    return Err(FieldError::ReduciblePolynomial(m));
                }
                m
            }
            None => default_modulus(p, k),
        };

        let add = if k == 1 {
            AddRule::Prime
        } else if p == 2 {
            AddRule::Xor
        } else {
            AddRule::Digits
        };
        let mut inner = Inner {
            p,
            k,
            q,
            modulus,
            add,
            logs: None,
            primitive: FieldElement::ONE,
            sqrt_table: OnceLock::new(),
            artin_schreier: OnceLock::new(),
            nonsquare: OnceLock::new(),
        };
        if k > 1 && p > 2 && q <= ADD_TABLE_LIMIT {
            inner.add = inner.build_add_table();
        }
        inner.primitive = inner.find_primitive();
        if q <= LOG_TABLE_LIMIT && q > 2 {
            inner.logs = Some(inner.build_log_tables());
        }
        Ok(FieldSpec { inner: Arc::new(inner) })
    }

    /// Builds `F_q` from the field size and an optional modulus given by its
    /// canonical integer encoding (the full monic polynomial read in base `p`).
    pub fn from_q(q: u64, modulus_encoding: Option<u64>) -> Result<Self, FieldError> {
        let (p, k) = arith::prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        match modulus_encoding {
            None => FieldSpec::new(p, k, None),
            Some(enc) => {
                let lead = q;
                if enc < lead || enc >= 2 * lead {
                    return Err(FieldError::BadModulus(digits(enc, p, k as usize + 2)));
                }
                FieldSpec::new(p, k, Some(&monic_from_low(enc - lead, p, k)))
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn k(&self) -> u32 {
        self.inner.k
    }

    pub fn q(&self) -> u64 {
        self.inner.q
    }

    /// Modulus coefficients, lowest degree first (`[0, 1]` for prime fields).
    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    /// Canonical integer encoding of the modulus polynomial.
    pub fn modulus_encoding(&self) -> u64 {
        self.inner
            .modulus
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.inner.p + c)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Decodes a canonical integer encoding.
    pub fn element(&self, encoding: u64) -> Result<FieldElement, FieldError> {
        if encoding < self.inner.q {
            Ok(FieldElement(encoding))
        } else {
            Err(FieldError::OutOfRange {
                value: encoding,
                q: self.inner.q,
            })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_i64(&self, n: i64) -> FieldElement {
        FieldElement(arith::rem_euclid(n as i128, self.inner.p))
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u64> {
        digits(a.0, self.inner.p, self.inner.k as usize)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement, FieldError> {
        let p = self.inner.p;
        if coeffs.len() > self.inner.k as usize || coeffs.iter().any(|&c| c >= p) {
            return Err(FieldError::BadModulus(coeffs.to_vec()));
        }
        Ok(FieldElement(coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)))
    }

    /// Every element in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.inner.q).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.inner.add(a, b)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.inner.neg(a)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.inner.add(a, self.inner.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.inner.mul(a, b)
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.inner.mul(a, a)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.inner.inv_nonzero(a))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`, with `a^0 = 1` (including `0^0`).
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        self.inner.pow(a, e)
    }

    /// `a^(p^i)` summed over `0 <= i < k`; lands in the prime subfield.
    pub fn absolute_trace(&self, a: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut conj = a;
        for _ in 0..self.inner.k {
            acc = self.add(acc, conj);
            conj = self.pow(conj, self.inner.p);
        }
        acc
    }

    pub fn is_square(&self, a: FieldElement) -> bool {
        if self.inner.p == 2 || a.is_zero() {
            return true;
        }
        if let Some(table) = self.inner.sqrt_table_if_small() {
            return table[a.0 as usize] != NONE;
        }
        self.pow(a, (self.inner.q - 1) / 2) == FieldElement::ONE
    }

    /// The square root with the smaller canonical encoding.
    pub fn sqrt(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Ok(a);
        }
        let inner = &self.inner;
        if inner.p == 2 {
            // Frobenius is bijective; its inverse is a -> a^(q/2).
            return Ok(self.pow(a, inner.q / 2));
        }
        if let Some(table) = inner.sqrt_table_if_small() {
            return match table[a.0 as usize] {
                NONE => Err(FieldError::NotASquare),
                s => Ok(FieldElement(s as u64)),
            };
        }
        let s = self.tonelli_shanks(a).ok_or(FieldError::NotASquare)?;
        let t = self.neg(s);
        Ok(s.min(t))
    }

    fn tonelli_shanks(&self, a: FieldElement) -> Option<FieldElement> {
        let q = self.inner.q;
        if self.pow(a, (q - 1) / 2) != FieldElement::ONE {
            return None;
        }
        if q % 4 == 3 {
            return Some(self.pow(a, (q + 1) / 4));
        }
        let s = (q - 1).trailing_zeros();
        let odd = (q - 1) >> s;
        let z = self.smallest_nonsquare();
        let mut m = s;
        let mut c = self.pow(z, odd);
        let mut t = self.pow(a, odd);
        let mut r = self.pow(a, odd.div_ceil(2));
        while t != FieldElement::ONE {
            let mut i = 0;
            let mut t2 = t;
            while t2 != FieldElement::ONE {
                t2 = self.square(t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.square(b);
            }
            m = i;
            c = self.square(b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    /// Smallest-encoding non-square (odd characteristic only).
    pub fn smallest_nonsquare(&self) -> FieldElement {
        assert!(self.inner.p != 2, "every element of a binary field is a square");
        *self.inner.nonsquare.get_or_init(|| {
            let half = (self.inner.q - 1) / 2;
            self.elements()
                .skip(1)
                .find(|&a| self.pow(a, half) != FieldElement::ONE)
                .expect("odd-order fields contain non-squares")
        })
    }

    /// Smallest-encoding element of absolute trace 1.
    pub fn smallest_trace_one(&self) -> FieldElement {
        self.elements()
            .find(|&a| self.absolute_trace(a) == FieldElement::ONE)
            .expect("the absolute trace is surjective")
    }

    /// The generator of `F_q^*` with the smallest encoding.
    pub fn primitive_element(&self) -> FieldElement {
        self.inner.primitive
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: FieldElement) -> Result<u64, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let mut n = self.inner.q - 1;
        for l in arith::prime_divisors(n) {
            while n.is_multiple_of(l) && self.pow(a, n / l) == FieldElement::ONE {
                n /= l;
            }
        }
        Ok(n)
    }

    /// Solves `z^2 + z = c` in characteristic 2, returning the smaller root.
    ///
    /// Requires `q <= SOLVE_TABLE_LIMIT`.
    pub fn solve_artin_schreier(&self, c: FieldElement) -> Result<Option<FieldElement>, FieldError> {
        assert_eq!(
            self.inner.p, 2,
            "Artin-Schreier equations are solved in characteristic 2"
        );
        let table = self.inner.artin_schreier_table()?;
        Ok(match table[c.0 as usize] {
            NONE => None,
            z => Some(FieldElement(z as u64)),
        })
    }

    /// Square root by table for fields up to `SOLVE_TABLE_LIMIT`, used by
    /// the exhaustive enumerators. `Ok(None)` for non-squares.
    pub(crate) fn sqrt_by_table(&self, a: FieldElement) -> Result<Option<FieldElement>, FieldError> {
        let table = self.inner.sqrt_table()?;
        Ok(match table[a.0 as usize] {
            NONE => None,
            s => Some(FieldElement(s as u64)),
        })
    }

    /// A uniformly random element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(0..self.inner.q))
    }

    /// Reference product by polynomial multiplication modulo the modulus,
    /// bypassing any tables.
    pub fn mul_reference(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.inner.mul_poly(a, b)
    }
}

impl Inner {
    fn build_add_table(&self) -> AddRule {
        let q = self.q as usize;
        let mut sum = vec![0u16; q * q];
        let mut neg = vec![0u16; q];
        for a in 0..q {
            neg[a] = self.neg_digits(a as u64) as u16;
            for b in 0..q {
                sum[a * q + b] = self.add_digits(a as u64, b as u64) as u16;
            }
        }
        AddRule::Table { sum, neg }
    }

    fn add_digits(&self, mut a: u64, mut b: u64) -> u64 {
        let p = self.p;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            let s = (a % p + b % p) % p;
            out += s * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out
    }

    fn neg_digits(&self, mut a: u64) -> u64 {
        let p = self.p;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            let d = a % p;
            out += ((p - d) % p) * place;
            place *= p;
            a /= p;
        }
        out
    }

    #[inline]
    fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(match &self.add {
            AddRule::Prime => {
                let s = a.0 + b.0;
                if s >= self.p {
                    s - self.p
                } else {
                    s
                }
            }
            AddRule::Xor => a.0 ^ b.0,
            AddRule::Table { sum, .. } => sum[(a.0 * self.q + b.0) as usize] as u64,
            AddRule::Digits => self.add_digits(a.0, b.0),
        })
    }

    #[inline]
    fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(match &self.add {
            AddRule::Prime => {
                if a.0 == 0 {
                    0
                } else {
                    self.p - a.0
                }
            }
            AddRule::Xor => a.0,
            AddRule::Table { neg, .. } => neg[a.0 as usize] as u64,
            AddRule::Digits => self.neg_digits(a.0),
        })
    }

    #[inline]
    fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        if let Some(t) = &self.logs {
            let i = t.log[a.0 as usize] + t.log[b.0 as usize];
            return FieldElement(t.exp[i as usize] as u64);
        }
        if self.k == 1 {
            return FieldElement(a.0 * b.0 % self.p);
        }
        self.mul_poly(a, b)
    }

    fn mul_poly(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.k == 1 {
            return FieldElement(a.0 * b.0 % self.p);
        }
        let pa = digits(a.0, self.p, self.k as usize);
        let pb = digits(b.0, self.p, self.k as usize);
        let r = poly::mul_mod(&pa, &pb, &self.modulus, self.p);
        FieldElement(r.iter().rev().fold(0, |acc, &c| acc * self.p + c))
    }

    fn inv_nonzero(&self, a: FieldElement) -> FieldElement {
        if let Some(t) = &self.logs {
            let order = (self.q - 1) as u32;
            let l = t.log[a.0 as usize];
            return FieldElement(t.exp[((order - l) % order) as usize] as u64);
        }
        if self.k == 1 {
            let g = (a.0 as i64).extended_gcd(&(self.p as i64));
            return FieldElement(arith::rem_euclid(g.x as i128, self.p));
        }
        self.pow(a, self.q - 2)
    }

    fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return a;
        }
        if let Some(t) = &self.logs {
            let order = (self.q - 1) as u128;
            let i = (t.log[a.0 as usize] as u128 * e as u128) % order;
            return FieldElement(t.exp[i as usize] as u64);
        }
        let mut acc = FieldElement::ONE;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn find_primitive(&self) -> FieldElement {
        let order = self.q - 1;
        let ls = arith::prime_divisors(order);
        (1..self.q)
            .map(FieldElement)
            .find(|&a| ls.iter().all(|&l| self.pow(a, order / l) != FieldElement::ONE))
            .expect("finite fields have cyclic unit groups")
    }

    fn build_log_tables(&self) -> LogTables {
        let n = (self.q - 1) as usize;
        let g = self.primitive;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; self.q as usize];
        let mut x = FieldElement::ONE;
        for i in 0..n {
            exp[i] = x.0 as u32;
            exp[i + n] = x.0 as u32;
            log[x.0 as usize] = i as u32;
            x = self.mul_poly(x, g);
        }
        debug_assert_eq!(x, FieldElement::ONE);
        LogTables { exp, log }
    }

    fn sqrt_table(&self) -> Result<&Vec<u32>, FieldError> {
        if self.q > SOLVE_TABLE_LIMIT {
            return Err(FieldError::FieldTooLarge(self.q));
        }
        Ok(self.sqrt_table.get_or_init(|| {
            let mut table = vec![NONE; self.q as usize];
            // ascending s, so the first root recorded is the smaller of +-s
            for s in 0..self.q {
                let s = FieldElement(s);
                let a = self.mul(s, s).0 as usize;
                if table[a] == NONE {
                    table[a] = s.0 as u32;
                }
            }
            table
        }))
    }

    fn sqrt_table_if_small(&self) -> Option<&Vec<u32>> {
        if self.q <= LOG_TABLE_LIMIT {
            self.sqrt_table().ok()
        } else {
            None
        }
    }

    fn artin_schreier_table(&self) -> Result<&Vec<u32>, FieldError> {
        if self.q > SOLVE_TABLE_LIMIT {
            return Err(FieldError::FieldTooLarge(self.q));
        }
        Ok(self.artin_schreier.get_or_init(|| {
            let mut table = vec![NONE; self.q as usize];
            for z in 0..self.q {
                let z = FieldElement(z);
                let c = self.add(self.mul(z, z), z).0 as usize;
                if table[c] == NONE {
                    table[c] = z.0 as u32;
                }
            }
            table
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::from_q(q, None).unwrap()
    }

    fn e(spec: &FieldSpec, n: u64) -> FieldElement {
        spec.element(n).unwrap()
    }

    /// Brute-force irreducibility: no monic factor of degree 1..=k/2.
    fn irreducible_by_trial_division(fpoly: &[u64], p: u64) -> bool {
        let k = fpoly.len() - 1;
        for d in 1..=k / 2 {
            for low in 0..p.pow(d as u32) {
                let g = monic_from_low(low, p, d as u32);
                if poly::rem(fpoly, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    fn scan_default_modulus(p: u64, k: u32) -> Vec<u64> {
        (0..p.pow(k))
            .map(|low| monic_from_low(low, p, k))
            .find(|m| irreducible_by_trial_division(m, p))
            .unwrap()
    }

    #[test]
    fn default_moduli_match_brute_force_scan() {
        assert_eq!(f(2).modulus(), &[0, 1]);
        assert_eq!(f(4).modulus(), &[1, 1, 1]);
        assert_eq!(scan_default_modulus(2, 2), vec![1, 1, 1]);
        // x^2 + 1 over F_7: -1 is a non-square since 7 = 3 mod 4
        assert_eq!(scan_default_modulus(7, 2), vec![1, 0, 1]);
        assert_eq!(f(49).modulus(), &[1, 0, 1]);
        for &(p, k) in &[
            (2, 3),
            (2, 4),
            (2, 5),
            (2, 6),
            (3, 2),
            (3, 3),
            (3, 4),
            (5, 2),
            (5, 3),
            (13, 2),
        ] {
            assert_eq!(
                FieldSpec::new(p, k, None).unwrap().modulus(),
                scan_default_modulus(p, k).as_slice(),
                "p={p} k={k}"
            );
        }
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldSpec::new(6, 1, None).unwrap_err(), FieldError::NotPrime(6));
        assert_eq!(FieldSpec::from_q(12, None).unwrap_err(), FieldError::NotPrimePower(12));
        assert!(matches!(
            FieldSpec::new(2, 2, Some(&[1, 0, 1])),
            Err(FieldError::ReduciblePolynomial(_))
        ));
        assert!(matches!(
            FieldSpec::new(2, 2, Some(&[1, 1])),
            Err(FieldError::BadModulus(_))
        ));
        assert!(matches!(
            FieldSpec::new(65537, 2, None),
            Err(FieldError::FieldTooLarge(_))
        ));
        assert!(matches!(FieldSpec::new(3, 21, None), Err(FieldError::FieldTooLarge(_))));
        // x^2+x+1 encodes as 1 + 2 + 4 = 7
        let f4 = FieldSpec::from_q(4, Some(7)).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert_eq!(f4.modulus_encoding(), 7);
        assert!(FieldSpec::from_q(4, Some(5)).is_err());
        assert!(f4.element(4).is_err());
    }

    #[test]
    fn documented_examples() {
        let f5 = f(5);
        assert_eq!(f5.add(e(&f5, 3), e(&f5, 4)), e(&f5, 2));
        let f4 = f(4);
        assert_eq!(f4.add(e(&f4, 2), e(&f4, 3)), e(&f4, 1));
        assert_eq!(f4.mul(e(&f4, 2), e(&f4, 2)), e(&f4, 3));
        assert_eq!(f4.mul_reference(e(&f4, 2), e(&f4, 2)), e(&f4, 3));
        let f7 = f(7);
        assert_eq!(f7.inv(e(&f7, 3)).unwrap(), e(&f7, 5));
        assert_eq!(f7.inv(f7.zero()), Err(FieldError::DivisionByZero));
        assert!(!f7.is_square(e(&f7, 3)));
        assert!(f7.is_square(f7.zero()));
        assert_eq!(f7.sqrt(e(&f7, 2)).unwrap(), e(&f7, 3));
        assert_eq!(f7.sqrt(e(&f7, 3)), Err(FieldError::NotASquare));
        assert_eq!(f7.sqrt(f7.zero()).unwrap(), f7.zero());
        assert_eq!(f4.sqrt(e(&f4, 2)).unwrap(), e(&f4, 3));
        let f16 = f(16);
        assert!(f16.elements().all(|a| f16.is_square(a)));
        assert_eq!(f5.primitive_element(), e(&f5, 2));
        assert_eq!(f4.primitive_element(), e(&f4, 2));
        assert_eq!(f7.primitive_element(), e(&f7, 3));
        assert_eq!(f4.absolute_trace(e(&f4, 2)), f4.one());
        assert_eq!(f4.absolute_trace(f4.zero()), f4.zero());
        assert!(f7.elements().all(|a| f7.absolute_trace(a) == a));
        assert_eq!(f(7).pow(e(&f7, 3), 0), f7.one());
    }

    #[test]
    fn inverse_exhaustive_up_to_1024() {
        for q in arith::prime_powers_up_to(1024) {
            let spec = f(q);
            for a in spec.elements().skip(1) {
                assert_eq!(spec.mul(a, spec.inv(a).unwrap()), spec.one(), "q={q} a={a}");
            }
        }
    }

    #[test]
    fn frobenius_fixes_small_fields() {
        for q in arith::prime_powers_up_to(121) {
            let spec = f(q);
            for a in spec.elements() {
                assert_eq!(spec.pow(a, q), a, "q={q}");
                if !a.is_zero() {
                    assert_eq!(spec.pow(a, q - 1), spec.one());
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for q in [125u64, 243, 1021, 1024, 4096, 65536, 78125, 1 << 20, 1_000_003] {
            let spec = f(q);
            for _ in 0..200 {
                let a = spec.random_element(&mut rng);
                assert_eq!(spec.pow(a, q), a, "q={q}");
            }
        }
    }

    #[test]
    fn tables_agree_with_polynomial_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for q in [8u64, 9, 25, 27, 49, 64, 81, 121, 243, 256, 625, 1024, 2187, 65536] {
            let spec = f(q);
            for _ in 0..2000 {
                let a = spec.random_element(&mut rng);
                let b = spec.random_element(&mut rng);
                assert_eq!(spec.mul(a, b), spec.mul_reference(a, b), "q={q}");
            }
        }
    }

    #[test]
    fn field_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [
            2u64, 3, 4, 8, 9, 25, 49, 128, 243, 1009, 1024, 3125, 131072, 1_000_003, 4_194_304,
        ] {
            let spec = f(q);
            for _ in 0..1000 {
                let a = spec.random_element(&mut rng);
                let b = spec.random_element(&mut rng);
                let c = spec.random_element(&mut rng);
                assert_eq!(spec.add(spec.add(a, b), c), spec.add(a, spec.add(b, c)));
                assert_eq!(spec.mul(spec.mul(a, b), c), spec.mul(a, spec.mul(b, c)));
                assert_eq!(spec.add(a, b), spec.add(b, a));
                assert_eq!(spec.mul(a, b), spec.mul(b, a));
                assert_eq!(spec.mul(a, spec.add(b, c)), spec.add(spec.mul(a, b), spec.mul(a, c)));
                assert_eq!(spec.add(a, spec.zero()), a);
                assert_eq!(spec.sub(spec.add(a, b), b), a);
                assert_eq!(spec.add(a, spec.neg(a)), spec.zero());
                if !b.is_zero() {
                    assert_eq!(spec.mul(spec.div(a, b).unwrap(), b), a);
                }
            }
        }
    }

    #[test]
    fn square_roots_and_square_counts() {
        for q in arith::prime_powers_up_to(1024) {
            let spec = f(q);
            let mut nonzero_squares = 0;
            for a in spec.elements() {
                if spec.is_square(a) {
                    let s = spec.sqrt(a).unwrap();
                    assert_eq!(spec.square(s), a, "q={q}");
                    assert!(s <= spec.neg(s));
                    nonzero_squares += (!a.is_zero()) as u64;
                } else {
                    assert_eq!(spec.sqrt(a), Err(FieldError::NotASquare));
                }
            }
            let expected = if q % 2 == 1 { (q - 1) / 2 } else { q - 1 };
            assert_eq!(nonzero_squares, expected, "q={q}");
        }
        // Tonelli-Shanks path, including q = 1 mod 4 and q = 3 mod 4
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [65537u64, 1_000_003, 1_000_033, 390625, 4_782_969] {
            let spec = f(q);
            for _ in 0..300 {
                let a = spec.random_element(&mut rng);
                let sq = spec.square(a);
                let s = spec.sqrt(sq).unwrap();
                assert_eq!(spec.square(s), sq);
                assert_eq!(s, a.min(spec.neg(a)));
            }
        }
    }

    #[test]
    fn primitive_elements_have_full_order() {
        for q in arith::prime_powers_up_to(1024).into_iter().filter(|&q| q >= 3) {
            let spec = f(q);
            let g = spec.primitive_element();
            assert_eq!(spec.multiplicative_order(g).unwrap(), q - 1);
            for a in spec.elements().skip(1).take_while(|&a| a < g) {
                assert!(spec.multiplicative_order(a).unwrap() < q - 1);
            }
        }
    }

    #[test]
    fn trace_lands_in_prime_field_and_artin_schreier_solves() {
        for q in [2u64, 4, 8, 16, 32, 64, 128, 256, 512, 1024] {
            let spec = f(q);
            let mut solvable = 0;
            for c in spec.elements() {
                let tr = spec.absolute_trace(c);
                assert!(tr.encoding() < 2);
                match spec.solve_artin_schreier(c).unwrap() {
                    Some(z) => {
                        assert_eq!(spec.add(spec.square(z), z), c);
                        assert_eq!(tr, spec.zero());
                        solvable += 1;
                    }
                    None => assert_eq!(tr, spec.one()),
                }
            }
            assert_eq!(solvable, q / 2);
        }
        for q in [9u64, 27, 125, 343] {
            let spec = f(q);
            assert!(spec.elements().all(|a| spec.absolute_trace(a).encoding() < spec.p()));
        }
    }

    #[test]
    fn encoding_round_trips() {
        for q in [2u64, 9, 64, 243] {
            let spec = f(q);
            for a in spec.elements() {
                let c = spec.coeffs(a);
                assert_eq!(c.len(), spec.k() as usize);
                assert_eq!(spec.from_coeffs(&c).unwrap(), a);
                assert_eq!(spec.element(a.encoding()).unwrap(), a);
            }
        }
    }
}
