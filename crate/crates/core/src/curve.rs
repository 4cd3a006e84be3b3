//! Elliptic curves in long Weierstrass form
//! `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over any `F_q`.
//!
//! The group law is the affine chord-tangent law, valid in every
//! characteristic. Points do not carry their curve; every operation goes
//! through a [`Curve`], and the unchecked fast paths (`add`, `double`,
//! `mul`, `neg`) assume their inputs lie on it.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec, SOLVE_TABLE_LIMIT};

/// Size limit for exhaustive point enumeration.
pub const ENUMERATION_LIMIT: u64 = SOLVE_TABLE_LIMIT;
/// Size limit for the `O(q^2)` pair-scan oracle.
pub const PAIR_SCAN_LIMIT: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("the curve is singular (discriminant 0)")]
    SingularCurve,
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("field of size {q} exceeds the limit {limit} for this operation")]
    FieldTooLarge { q: u64, limit: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A rational point: the point at infinity or an affine pair.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub enum Point {
    #[default]
    Infinity,
    Affine {
        x: FieldElement,
        y: FieldElement,
    },
}

impl Point {
    pub fn affine(x: FieldElement, y: FieldElement) -> Point {
        Point::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "inf"),
            Point::Affine { x, y } => write!(f, "{x},{y}"),
        }
    }
}

/// A nonsingular long Weierstrass curve.
#[derive(Clone, PartialEq, Eq)]
pub struct Curve {
    field: FieldSpec,
    a: [FieldElement; 5],
    discriminant: FieldElement,
    // odd characteristic only: 1/2 and 1/4
    half: FieldElement,
    quarter: FieldElement,
    two: FieldElement,
    three: FieldElement,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Curve({} over {})", self.coefficient_string(), self.field)
    }
}

impl Curve {
    /// Builds the curve with coefficients `[a1, a2, a3, a4, a6]`.
    pub fn new(field: &FieldSpec, a: [FieldElement; 5]) -> Result<Curve, CurveError> {
        for c in a {
            field.element(c.encoding())?;
        }
        let f = field;
        let two = f.from_i64(2);
        let (half, quarter) = if f.p() == 2 {
            (FieldElement::ZERO, FieldElement::ZERO)
        } else {
            let half = f.inv(two)?;
            (half, f.square(half))
        };
        let mut curve = Curve {
            field: field.clone(),
            a,
            discriminant: FieldElement::ZERO,
            half,
            quarter,
            two,
            three: f.from_i64(3),
        };
        curve.discriminant = curve.compute_discriminant();
        if curve.discriminant.is_zero() {
            return Err(CurveError::SingularCurve);
        }
        Ok(curve)
    }

    /// Builds a curve from the canonical encodings of its coefficients.
    pub fn from_encodings(field: &FieldSpec, a: [u64; 5]) -> Result<Curve, CurveError> {
        let mut coeffs = [FieldElement::ZERO; 5];
        for (c, &enc) in coeffs.iter_mut().zip(&a) {
            *c = field.element(enc)?;
        }
        Curve::new(field, coeffs)
    }

    /// A nonsingular curve with uniformly random coefficients.
    pub fn random<R: Rng + ?Sized>(field: &FieldSpec, rng: &mut R) -> Curve {
        loop {
            let a = [(); 5].map(|_| field.random_element(rng));
            if let Ok(curve) = Curve::new(field, a) {
                return curve;
            }
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// `[a1, a2, a3, a4, a6]`.
    pub fn coefficients(&self) -> [FieldElement; 5] {
        self.a
    }

    pub fn coefficient_encodings(&self) -> [u64; 5] {
        self.a.map(FieldElement::encoding)
    }

    /// `a1,a2,a3,a4,a6` as comma-separated encodings.
    pub fn coefficient_string(&self) -> String {
        let e = self.coefficient_encodings();
        format!("{},{},{},{},{}", e[0], e[1], e[2], e[3], e[4])
    }

    pub fn discriminant(&self) -> FieldElement {
        self.discriminant
    }

    /// `(b2, b4, b6, b8)`.
    pub fn b_invariants(&self) -> [FieldElement; 4] {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        let int = |n| f.from_i64(n);
        let b2 = f.add(f.square(a1), f.mul(int(4), a2));
        let b4 = f.add(f.mul(int(2), a4), f.mul(a1, a3));
        let b6 = f.add(f.square(a3), f.mul(int(4), a6));
        let b8 = [
            f.mul(f.square(a1), a6),
            f.mul(int(4), f.mul(a2, a6)),
            f.neg(f.mul(a1, f.mul(a3, a4))),
            f.mul(a2, f.square(a3)),
            f.neg(f.square(a4)),
        ]
        .into_iter()
        .fold(FieldElement::ZERO, |acc, t| f.add(acc, t));
        [b2, b4, b6, b8]
    }

    fn compute_discriminant(&self) -> FieldElement {
        let f = &self.field;
        let [b2, b4, b6, b8] = self.b_invariants();
        let int = |n| f.from_i64(n);
        [
            f.neg(f.mul(f.square(b2), b8)),
            f.neg(f.mul(int(8), f.mul(b4, f.square(b4)))),
            f.neg(f.mul(int(27), f.square(b6))),
            f.mul(int(9), f.mul(b2, f.mul(b4, b6))),
        ]
        .into_iter()
        .fold(FieldElement::ZERO, |acc, t| f.add(acc, t))
    }

    /// In characteristic 2 the curve is supersingular exactly when `j = 0`,
    /// i.e. when `a1 = 0`.
    pub fn is_char2_supersingular(&self) -> bool {
        self.field.p() == 2 && self.a[0].is_zero()
    }

    /// `a1 x + a3`.
    #[inline]
    fn h(&self, x: FieldElement) -> FieldElement {
        let f = &self.field;
        f.add(f.mul(self.a[0], x), self.a[2])
    }

    /// `x^3 + a2 x^2 + a4 x + a6`.
    #[inline]
    fn rhs(&self, x: FieldElement) -> FieldElement {
        let f = &self.field;
        let t = f.mul(f.add(x, self.a[1]), x);
        f.add(f.mul(f.add(t, self.a[3]), x), self.a[4])
    }

    pub fn is_on_curve(&self, p: &Point) -> bool {
        match *p {
            Point::Infinity => true,
            Point::Affine { x, y } => {
                let f = &self.field;
                if f.element(x.encoding()).is_err() || f.element(y.encoding()).is_err() {
                    return false;
                }
                f.add(f.square(y), f.mul(self.h(x), y)) == self.rhs(x)
            }
        }
    }

    fn check(&self, p: &Point) -> Result<(), CurveError> {
        if self.is_on_curve(p) {
            Ok(())
        } else {
            Err(CurveError::PointNotOnCurve)
        }
    }

    /// `-(x, y) = (x, -y - a1 x - a3)`.
    #[inline]
    pub fn neg(&self, p: &Point) -> Point {
        match *p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => {
                let f = &self.field;
                Point::Affine {
                    x,
                    y: f.neg(f.add(y, self.h(x))),
                }
            }
        }
    }

    /// Group sum. Both inputs must lie on the curve.
    pub fn add(&self, p: &Point, q: &Point) -> Point {
        let (x1, y1, x2, y2) = match (*p, *q) {
            (Point::Infinity, _) => return *q,
            (_, Point::Infinity) => return *p,
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let f = &self.field;
        if x1 == x2 {
            // same x: either Q = -P or Q = P
            if f.add(f.add(y1, y2), self.h(x1)).is_zero() {
                return Point::Infinity;
            }
            return self.double(p);
        }
        let slope = f.mul(f.sub(y2, y1), f.inv(f.sub(x2, x1)).expect("distinct x"));
        self.finish_chord(slope, x1, y1, x2)
    }

    /// `2P`.
    pub fn double(&self, p: &Point) -> Point {
        let (x1, y1) = match *p {
            Point::Infinity => return Point::Infinity,
            Point::Affine { x, y } => (x, y),
        };
        let f = &self.field;
        let [a1, a2, _, a4, _] = self.a;
        let den = f.add(f.mul(self.two, y1), self.h(x1));
        if den.is_zero() {
            return Point::Infinity;
        }
        let num = f.sub(
            f.add(
                f.add(f.mul(self.three, f.square(x1)), f.mul(self.two, f.mul(a2, x1))),
                a4,
            ),
            f.mul(a1, y1),
        );
        let slope = f.mul(num, f.inv(den).expect("nonzero denominator"));
        self.finish_chord(slope, x1, y1, x1)
    }

    #[inline]
    fn finish_chord(&self, slope: FieldElement, x1: FieldElement, y1: FieldElement, x2: FieldElement) -> Point {
        let f = &self.field;
        let [a1, a2, a3, _, _] = self.a;
        let x3 = f.sub(f.sub(f.sub(f.add(f.square(slope), f.mul(a1, slope)), a2), x1), x2);
        let y3 = f.sub(f.sub(f.neg(f.add(f.mul(slope, f.sub(x3, x1)), y1)), f.mul(a1, x3)), a3);
        Point::Affine { x: x3, y: y3 }
    }

    /// `n P` by double-and-add. The input must lie on the curve.
    pub fn mul(&self, n: u64, p: &Point) -> Point {
        let mut acc = Point::Infinity;
        if n == 0 || p.is_infinity() {
            return acc;
        }
        for bit in (0..64 - n.leading_zeros()).rev() {
            acc = self.double(&acc);
            if (n >> bit) & 1 == 1 {
                acc = self.add(&acc, p);
            }
        }
        acc
    }

    /// Checked group sum.
    pub fn add_points(&self, p: &Point, q: &Point) -> Result<Point, CurveError> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add(p, q))
    }

    /// Checked negation.
    pub fn negate(&self, p: &Point) -> Result<Point, CurveError> {
        self.check(p)?;
        Ok(self.neg(p))
    }

    /// Checked signed scalar multiple.
    pub fn scalar_mul(&self, n: i64, p: &Point) -> Result<Point, CurveError> {
        self.check(p)?;
        let r = self.mul(n.unsigned_abs(), p);
        Ok(if n < 0 { self.neg(&r) } else { r })
    }

    /// The `y` with `(x, y)` on the curve (zero, one or two values).
    ///
    /// `use_tables` selects the table-driven solvers (fields up to
    /// `ENUMERATION_LIMIT`); otherwise odd characteristic uses the
    /// field's square root directly.
    fn y_values(&self, x: FieldElement, use_tables: bool) -> Result<YValues, CurveError> {
        let f = &self.field;
        let h = self.h(x);
        let r = self.rhs(x);
        if f.p() == 2 {
            if h.is_zero() {
                return Ok(YValues::One(f.sqrt(r)?));
            }
            let hinv = f.inv(h)?;
            let c = f.mul(r, f.square(hinv));
            return Ok(match f.solve_artin_schreier(c)? {
                None => YValues::None,
                Some(z) => {
                    let y0 = f.mul(h, z);
                    YValues::Two(y0, f.add(y0, h))
                }
            });
        }
        let shift = f.neg(f.mul(h, self.half));
        let d = f.add(r, f.mul(f.square(h), self.quarter));
        if d.is_zero() {
            return Ok(YValues::One(shift));
        }
        let s = if use_tables {
            f.sqrt_by_table(d)?
        } else {
            match f.sqrt(d) {
                Ok(s) => Some(s),
                Err(FieldError::NotASquare) => None,
                Err(e) => return Err(e.into()),
            }
        };
        Ok(match s {
            None => YValues::None,
            Some(s) => YValues::Two(f.add(shift, s), f.sub(shift, s)),
        })
    }

    fn guard(&self, limit: u64) -> Result<(), CurveError> {
        let q = self.field.q();
        if q > limit {
            Err(CurveError::FieldTooLarge { q, limit })
        } else {
            Ok(())
        }
    }

    /// Every rational point: infinity first, then affine points by `x`.
    pub fn enumerate_points(&self) -> Result<Vec<Point>, CurveError> {
        self.guard(ENUMERATION_LIMIT)?;
        let mut out = vec![Point::Infinity];
        for x in self.field.elements() {
            match self.y_values(x, true)? {
                YValues::None => {}
                YValues::One(y) => out.push(Point::affine(x, y)),
                YValues::Two(y0, y1) => {
                    out.push(Point::affine(x, y0));
                    out.push(Point::affine(x, y1));
                }
            }
        }
        Ok(out)
    }

    /// `#E(F_q)` by counting `y`-solutions for each `x`.
    pub fn count_exhaustive(&self) -> Result<u64, CurveError> {
        self.guard(ENUMERATION_LIMIT)?;
        let mut n = 1u64;
        for x in self.field.elements() {
            n += self.y_values(x, true)?.len();
        }
        Ok(n)
    }

    /// `#E(F_q)` by testing all `q^2` pairs; an oracle for small fields.
    pub fn count_by_pair_scan(&self) -> Result<u64, CurveError> {
        self.guard(PAIR_SCAN_LIMIT)?;
        let f = &self.field;
        let mut n = 1u64;
        for x in f.elements() {
            let h = self.h(x);
            let r = self.rhs(x);
            n += f.elements().filter(|&y| f.add(f.square(y), f.mul(h, y)) == r).count() as u64;
        }
        Ok(n)
    }

    /// A random affine point (infinity only if there are no affine points).
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Point, CurveError> {
        let f = &self.field;
        if f.p() == 2 {
            self.guard(ENUMERATION_LIMIT)?;
        }
        let use_tables = f.q() <= crate::field::LOG_TABLE_LIMIT;
        for _ in 0..64 {
            let x = f.random_element(rng);
            match self.y_values(x, use_tables)? {
                YValues::None => continue,
                YValues::One(y) => return Ok(Point::affine(x, y)),
                YValues::Two(y0, y1) => {
                    let y = if rng.gen::<bool>() { y1 } else { y0 };
                    return Ok(Point::affine(x, y));
                }
            }
        }
        // Tiny curves can have few or no affine points.
        self.guard(ENUMERATION_LIMIT)?;
        let points = self.enumerate_points()?;
        if points.len() == 1 {
            return Ok(Point::Infinity);
        }
        Ok(points[rng.gen_range(1..points.len())])
    }

    /// The quadratic twist: `#E + #E' = 2(q + 1)`.
    ///
    /// Odd characteristic: complete the square and scale by the smallest
    /// non-square `d`. Characteristic 2: add `g a1^2` to `a2` and `g a3^2`
    /// to `a6`, `g` the smallest element of absolute trace 1; this flips the
    /// solvability of `y^2 + h y = r` at every `x` with `h(x) != 0`.
    pub fn quadratic_twist(&self) -> Result<Curve, CurveError> {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        let coeffs = if f.p() == 2 {
            let g = f.smallest_trace_one();
            [
                a1,
                f.add(a2, f.mul(g, f.square(a1))),
                a3,
                a4,
                f.add(a6, f.mul(g, f.square(a3))),
            ]
        } else {
            let [b2, b4, b6, _] = self.b_invariants();
            let d = f.smallest_nonsquare();
            let d2 = f.square(d);
            [
                FieldElement::ZERO,
                f.mul(d, f.mul(b2, self.quarter)),
                FieldElement::ZERO,
                f.mul(d2, f.mul(b4, self.half)),
                f.mul(f.mul(d2, d), f.mul(b6, self.quarter)),
            ]
        };
        Curve::new(f, coeffs)
    }
}

enum YValues {
    None,
    One(FieldElement),
    Two(FieldElement, FieldElement),
}

impl YValues {
    fn len(&self) -> u64 {
        match self {
            YValues::None => 0,
            YValues::One(_) => 1,
            YValues::Two(..) => 2,
        }
    }
}

/// Every coefficient vector `(a1, .., a6)` over the field, nonsingular or not,
/// in lexicographic encoding order.
pub fn all_coefficient_vectors(field: &FieldSpec) -> impl Iterator<Item = [FieldElement; 5]> {
    let q = field.q();
    let total = q.pow(5);
    (0..total).map(move |mut n| {
        let mut out = [FieldElement::ZERO; 5];
        for slot in out.iter_mut().rev() {
            *slot = FieldElement::from_encoding_unchecked(n % q);
            n /= q;
        }
        out
    })
}

/// Coefficient vectors covering every isomorphism class of curves over the
/// field: `(0, a2, 0, a4, a6)` in odd characteristic, and
/// `(1, a2, 0, 0, a6)` together with `(0, 0, a3, a4, a6)`, `a3 != 0`, in
/// characteristic 2. Singular vectors are included; callers filter them.
pub fn isomorphism_class_cover(field: &FieldSpec) -> Box<dyn Iterator<Item = [FieldElement; 5]>> {
    let q = field.q();
    let e = FieldElement::from_encoding_unchecked;
    let z = FieldElement::ZERO;
    if field.p() != 2 {
        Box::new((0..q * q * q).map(move |n| [z, e(n / (q * q)), z, e(n / q % q), e(n % q)]))
    } else {
        let ordinary = (0..q * q).map(move |n| [FieldElement::ONE, e(n / q), z, z, e(n % q)]);
        let supersingular = (q * q..q * q * q).map(move |n| [z, z, e(n / (q * q)), e(n / q % q), e(n % q)]);
        Box::new(ordinary.chain(supersingular))
    }
}
