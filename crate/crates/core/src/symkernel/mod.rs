//! Exact multivariate polynomials with rational coefficients.
//!
//! A [`Ring`] is an ordered list of variable names. Every [`Poly`] carries its
//! ring, and binary operations require both operands to share it. Terms are
//! kept in a map keyed by exponent vectors ordered graded-lexicographically,
//! and zero coefficients are never stored, so structural equality is
//! mathematical equality.

mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use parse::parse_poly;

/// Exact rational scalar used for every coefficient.
pub type Rational = BigRational;

/// Build a rational from a machine integer.
pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Build the rational `n/d`. Panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("unknown variable `{name}` at column {column}")]
    UnknownVariable { name: String, column: usize },
    #[error("division by a non-constant expression at column {column}")]
    DivisionByNonConstant { column: usize },
    #[error("division by zero at column {column}")]
    DivisionByZero { column: usize },
    #[error("polynomials live over different variable lists: [{left}] vs [{right}]")]
    RingMismatch { left: String, right: String },
    #[error("invalid variable list: {0}")]
    InvalidRing(String),
}

/// An ordered list of variable names shared by a family of polynomials.
#[derive(Clone)]
pub struct Ring(Arc<[String]>);

impl Ring {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Ring, PolyError> {
        let mut seen = std::collections::BTreeSet::new();
        for n in names {
            let n = n.as_ref();
            let mut chars = n.chars();
            let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric());
            if !ok {
                return Err(PolyError::InvalidRing(format!("`{n}` is not an identifier")));
            }
            if !seen.insert(n.to_string()) {
                return Err(PolyError::InvalidRing(format!("duplicate variable `{n}`")));
            }
        }
        Ok(Ring(names.iter().map(|s| s.as_ref().to_string()).collect()))
    }

    /// Ring on `prefix1, prefix2, ..., prefixN`.
    pub fn numbered(prefix: &str, n: usize) -> Ring {
        let names: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        Ring::new(&names).expect("numbered names are valid identifiers")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// A ring whose variable list is `self` followed by `extra`.
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> Result<Ring, PolyError> {
        let mut names: Vec<String> = self.0.to_vec();
        names.extend(extra.iter().map(|s| s.as_ref().to_string()));
        Ring::new(&names)
    }

    /// True when `self`'s variables are an initial segment of `other`'s.
    pub fn is_prefix_of(&self, other: &Ring) -> bool {
        self.len() <= other.len() && self.0.iter().zip(other.0.iter()).all(|(a, b)| a == b)
    }

    pub fn zero(&self) -> Poly {
        Poly { ring: self.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> Poly {
        self.constant(Rational::one())
    }

    pub fn constant(&self, c: Rational) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::one(self.len()), c);
        }
        Poly { ring: self.clone(), terms }
    }

    pub fn int(&self, n: i64) -> Poly {
        self.constant(rat(n))
    }

    /// The coordinate function for variable `i`.
    pub fn var(&self, i: usize) -> Poly {
        assert!(i < self.len(), "variable index {i} out of range");
        self.monomial(Rational::one(), &unit_exps(self.len(), i))
    }

    pub fn monomial(&self, c: Rational, exps: &[u32]) -> Poly {
        assert_eq!(exps.len(), self.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono(exps.into()), c);
        }
        Poly { ring: self.clone(), terms }
    }

    pub fn parse(&self, text: &str) -> Result<Poly, PolyError> {
        parse_poly(text, self)
    }

    fn describe(&self) -> String {
        self.0.join(", ")
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring[{}]", self.describe())
    }
}

fn unit_exps(n: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

/// Exponent vector, ordered graded-lexicographically (total degree first,
/// then lexicographic with the first variable most significant).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(Box<[u32]>);

impl Mono {
    fn one(n: usize) -> Mono {
        Mono(vec![0; n].into())
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Mono) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Mono) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in normal form over a [`Ring`].
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    ring: Ring,
    terms: BTreeMap<Mono, Rational>,
}

impl Poly {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Mono::degree)
    }

    /// The value when the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    fn check_ring(&self, other: &Poly) -> Result<(), PolyError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(PolyError::RingMismatch { left: self.ring.describe(), right: other.ring.describe() })
        }
    }

    fn add_term(&mut self, m: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        let mut out = self.ring.zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return self.ring.zero();
        }
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = self.ring.one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to variable index `i`.
    pub fn partial(&self, i: usize) -> Poly {
        assert!(i < self.ring.len(), "variable index {i} out of range");
        let mut out = self.ring.zero();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.terms.insert(Mono(exps), c * rat(e as i64));
        }
        out
    }

    /// Partial derivative with respect to a named variable.
    pub fn partial_by_name(&self, name: &str) -> Result<Poly, PolyError> {
        let i = self.ring.index_of(name).ok_or_else(|| PolyError::UnknownVariable { name: name.to_string(), column: 0 })?;
        Ok(self.partial(i))
    }

    /// Re-express this polynomial over a ring whose leading variables are
    /// exactly this ring's variables.
    pub fn extend_to(&self, target: &Ring) -> Poly {
        assert!(self.ring.is_prefix_of(target), "ring {:?} is not a prefix of {:?}", self.ring, target);
        let pad = target.len() - self.ring.len();
        Poly {
            ring: target.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.to_vec();
                    e.extend(std::iter::repeat_n(0, pad));
                    (Mono(e.into()), c.clone())
                })
                .collect(),
        }
    }

    /// Substitute rational values for the variables (full evaluation).
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.ring.len());
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, e) in point.iter().zip(m.0.iter()) {
                for _ in 0..*e {
                    t *= x;
                }
            }
            total += t;
        }
        total
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.ring.names();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            let factors: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, e)| **e > 0)
                    .map(|(i, e)| if *e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
                    .collect();
            if factors.is_empty() {
                write!(f, "{mag}")?;
                continue;
            }
            // A leading unary minus binds tighter than `^`, so a bare
            // "-x1^2" would read back as (-x1)^2. Keep an explicit coefficient
            // whenever the first exponent is even.
            let first_even_power = m.0.iter().find(|e| **e > 0).is_some_and(|e| *e % 2 == 0);
            if !mag.is_one() || (k == 0 && negative && first_even_power) {
                write!(f, "{mag}*")?;
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $trait<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        self.check_ring(rhs).unwrap_or_else(|e| panic!("{e}"));
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        self.check_ring(rhs).unwrap_or_else(|e| panic!("{e}"));
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r2() -> Ring {
        Ring::numbered("x", 2)
    }

    #[test]
    fn zero_parses_to_additive_identity() {
        let p = r2().parse("0").unwrap();
        assert!(p.is_zero());
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn binomial_square_expands() {
        let r = r2();
        let p = r.parse("(x1+x2)^2").unwrap();
        let (x1, x2) = (r.var(0), r.var(1));
        let expected = &(&x1 * &x1) + &(&(&x1 * &x2).scale(&rat(2)) + &(&x2 * &x2));
        assert_eq!(p, expected);
        assert_eq!(p.to_string(), "x1^2 + 2*x1*x2 + x2^2");
    }

    #[test]
    fn rational_coefficient_round_trips() {
        let r = r2();
        let p = r.parse("1/2*x1 - x2^3").unwrap();
        assert_eq!(p, &r.var(0).scale(&ratio(1, 2)) - &r.var(1).pow(3));
        let printed = p.to_string();
        assert_eq!(printed, "-x2^3 + 1/2*x1");
        let again = r.parse(&printed).unwrap();
        assert_eq!(again, p);
        assert_eq!(again.to_string(), printed);
    }

    #[test]
    fn ring_laws_on_examples() {
        let r = r2();
        let x1 = r.var(0);
        assert!((&x1 + &(-&x1)).is_zero());
        let prod = &(&x1 + &r.one()) * &(&x1 - &r.one());
        assert_eq!(prod, &x1.pow(2) - &r.one());
        let p = r.parse("3*x1*x2 - 7").unwrap();
        assert_eq!(&p * &r.one(), p);
    }

    #[test]
    fn partials_match_hand_values() {
        let r = r2();
        let p = r.parse("x1^2*x2").unwrap();
        assert_eq!(p.partial(0), r.parse("2*x1*x2").unwrap());
        assert!(r.int(5).partial(0).is_zero());
        assert_eq!(r.parse("x1+x2").unwrap().partial_by_name("x2").unwrap(), r.one());
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = Ring::numbered("x", 2).var(0);
        let b = Ring::numbered("y", 2).var(0);
        assert!(matches!(a.checked_add(&b), Err(PolyError::RingMismatch { .. })));
    }

    #[test]
    fn negative_leading_power_keeps_coefficient() {
        let r = r2();
        let p = -r.var(0).pow(2);
        assert_eq!(p.to_string(), "-1*x1^2");
        assert_eq!(r.parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn extension_pads_exponents() {
        let base = Ring::numbered("x", 1);
        let total = base.extended(&["y1"]).unwrap();
        let p = base.parse("x1^2 + 3").unwrap();
        let q = p.extend_to(&total);
        assert_eq!(q, total.parse("x1^2 + 3").unwrap());
    }

    fn small_poly(r: Ring) -> impl Strategy<Value = Poly> {
        let n = r.len();
        prop::collection::vec((prop::collection::vec(0u32..3, n), -4i64..5, 1i64..3), 0..5).prop_map(move |ts| {
            let mut p = r.zero();
            for (e, c, d) in ts {
                p += &r.monomial(ratio(c, d), &e);
            }
            p
        })
    }

    proptest! {
        #[test]
        fn leibniz_rule(p in small_poly(r2()), q in small_poly(r2()), v in 0usize..2) {
            let lhs = (&p * &q).partial(v);
            let rhs = &(&p.partial(v) * &q) + &(&p * &q.partial(v));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn mixed_partials_commute(p in small_poly(Ring::numbered("x", 3))) {
            prop_assert_eq!(p.partial(0).partial(2), p.partial(2).partial(0));
        }

        #[test]
        fn print_parse_round_trip(p in small_poly(Ring::numbered("x", 3))) {
            let back = p.ring().parse(&p.to_string()).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn multiplication_distributes(p in small_poly(r2()), q in small_poly(r2()), s in small_poly(r2())) {
            prop_assert_eq!(&p * &(&q + &s), &(&p * &q) + &(&p * &s));
        }
    }
}
