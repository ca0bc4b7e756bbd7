//! Exact field arithmetic over the rationals and over GF(p).
//!
//! A [`Scalar`] is an immutable element of one concrete field, tagged with
//! its [`FieldSpec`]. Mixing scalars from different fields is always an
//! error, never a coercion. Rationals are backed by arbitrary-precision
//! integers; prime fields keep a residue in `[0, p)` with `p < 2^31`, so
//! products never overflow a `u64`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest admissible prime-field modulus. Keeps `a * b` for residues
/// strictly below `2^62`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// The field a computation runs over: ℚ or GF(p).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FieldSpec(Repr);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
enum Repr {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    pub const RATIONALS: FieldSpec = FieldSpec(Repr::Rationals);

    /// GF(p) for a prime `p`. Primality is checked by trial division,
    /// which is fine for the moduli this crate is used with.
    pub fn prime(p: u64) -> Result<FieldSpec> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec(Repr::Prime(p)))
    }

    pub fn is_rationals(&self) -> bool {
        self.0 == Repr::Rationals
    }

    /// The modulus for GF(p), `None` over the rationals.
    pub fn modulus(&self) -> Option<u64> {
        match self.0 {
            Repr::Rationals => None,
            Repr::Prime(p) => Some(p),
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::integer(*self, 0)
    }

    pub fn one(&self) -> Scalar {
        Scalar::integer(*self, 1)
    }

    /// All field elements in a fixed order: `0, 1, ..., p-1`.
    pub fn enumerate(&self) -> Result<FieldElements> {
        match self.0 {
            Repr::Rationals => Err(Error::NotEnumerable),
            Repr::Prime(p) => Ok(FieldElements {
                spec: *self,
                next: 0,
                modulus: p,
            }),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Repr::Rationals => write!(f, "q"),
            Repr::Prime(p) => write!(f, "gf {p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Iterator over the elements of a prime field, in residue order.
pub struct FieldElements {
    spec: FieldSpec,
    next: u64,
    modulus: u64,
}

impl Iterator for FieldElements {
    type Item = Scalar;

    fn next(&mut self) -> Option<Scalar> {
        if self.next >= self.modulus {
            return None;
        }
        let s = Scalar {
            spec: self.spec,
            value: Value::Mod(self.next),
        };
        self.next += 1;
        Some(s)
    }
}

/// An exact field element.
///
/// Rationals are kept normalized (coprime numerator/denominator, positive
/// denominator); prime-field values are residues in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Scalar {
    spec: FieldSpec,
    value: Value,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Value {
    Rat(BigRational),
    Mod(u64),
}

impl Scalar {
    /// The image of the integer `n` in the field.
    pub fn integer(spec: FieldSpec, n: i64) -> Scalar {
        let value = match spec.0 {
            Repr::Rationals => Value::Rat(BigRational::from_integer(BigInt::from(n))),
            Repr::Prime(p) => Value::Mod(n.rem_euclid(p as i64) as u64),
        };
        Scalar { spec, value }
    }

    /// A rational `num/den` over ℚ.
    pub fn rational(num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar {
            spec: FieldSpec::RATIONALS,
            value: Value::Rat(BigRational::new(BigInt::from(num), BigInt::from(den))),
        })
    }

    pub fn from_ratio(r: BigRational) -> Scalar {
        Scalar {
            spec: FieldSpec::RATIONALS,
            value: Value::Rat(r),
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rat(r) => r.is_zero(),
            Value::Mod(v) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Value::Rat(r) => r.is_one(),
            Value::Mod(v) => *v == 1,
        }
    }

    /// The residue for a prime-field element, `None` over ℚ.
    pub fn residue(&self) -> Option<u64> {
        match &self.value {
            Value::Rat(_) => None,
            Value::Mod(v) => Some(*v),
        }
    }

    /// The underlying ratio for a rational element, `None` over GF(p).
    pub fn as_ratio(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rat(r) => Some(r),
            Value::Mod(_) => None,
        }
    }

    fn require_same_spec(&self, rhs: &Scalar) -> Result<()> {
        if self.spec != rhs.spec {
            return Err(Error::FieldMismatch {
                left: self.spec,
                right: rhs.spec,
            });
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Scalar) -> Result<Scalar> {
        self.require_same_spec(rhs)?;
        Ok(self.add_unchecked(rhs))
    }

    pub fn sub(&self, rhs: &Scalar) -> Result<Scalar> {
        self.require_same_spec(rhs)?;
        Ok(self.sub_unchecked(rhs))
    }

    pub fn mul(&self, rhs: &Scalar) -> Result<Scalar> {
        self.require_same_spec(rhs)?;
        Ok(self.mul_unchecked(rhs))
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar> {
        self.require_same_spec(rhs)?;
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.mul_unchecked(&rhs.inv_unchecked()))
    }

    pub fn neg(&self) -> Scalar {
        let value = match (&self.value, self.spec.0) {
            (Value::Rat(r), _) => Value::Rat(-r),
            (Value::Mod(v), Repr::Prime(p)) => Value::Mod(if *v == 0 { 0 } else { p - v }),
            (Value::Mod(_), Repr::Rationals) => unreachable!(),
        };
        Scalar {
            spec: self.spec,
            value,
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.inv_unchecked())
    }

    pub(crate) fn add_unchecked(&self, rhs: &Scalar) -> Scalar {
        let value = match (&self.value, &rhs.value, self.spec.0) {
            (Value::Rat(a), Value::Rat(b), _) => Value::Rat(a + b),
            (Value::Mod(a), Value::Mod(b), Repr::Prime(p)) => Value::Mod((a + b) % p),
            _ => unreachable!("spec checked"),
        };
        Scalar {
            spec: self.spec,
            value,
        }
    }

    pub(crate) fn sub_unchecked(&self, rhs: &Scalar) -> Scalar {
        let value = match (&self.value, &rhs.value, self.spec.0) {
            (Value::Rat(a), Value::Rat(b), _) => Value::Rat(a - b),
            (Value::Mod(a), Value::Mod(b), Repr::Prime(p)) => Value::Mod((a + p - b) % p),
            _ => unreachable!("spec checked"),
        };
        Scalar {
            spec: self.spec,
            value,
        }
    }

    pub(crate) fn mul_unchecked(&self, rhs: &Scalar) -> Scalar {
        let value = match (&self.value, &rhs.value, self.spec.0) {
            (Value::Rat(a), Value::Rat(b), _) => Value::Rat(a * b),
            (Value::Mod(a), Value::Mod(b), Repr::Prime(p)) => Value::Mod(a * b % p),
            _ => unreachable!("spec checked"),
        };
        Scalar {
            spec: self.spec,
            value,
        }
    }

    pub(crate) fn inv_unchecked(&self) -> Scalar {
        let value = match (&self.value, self.spec.0) {
            (Value::Rat(r), _) => Value::Rat(r.recip()),
            (Value::Mod(v), Repr::Prime(p)) => Value::Mod(mod_inverse(*v, p)),
            (Value::Mod(_), Repr::Rationals) => unreachable!(),
        };
        Scalar {
            spec: self.spec,
            value,
        }
    }

    /// Canonical total order used to make eigenvalue lists and reports
    /// deterministic: residue order on GF(p), numerator-then-denominator
    /// on ℚ. Not a numeric order on ℚ.
    pub fn canonical_cmp(&self, other: &Scalar) -> Ordering {
        match (&self.value, &other.value) {
            (Value::Mod(a), Value::Mod(b)) => a.cmp(b),
            (Value::Rat(a), Value::Rat(b)) => a
                .numer()
                .cmp(b.numer())
                .then_with(|| a.denom().cmp(b.denom())),
            (Value::Rat(_), Value::Mod(_)) => Ordering::Less,
            (Value::Mod(_), Value::Rat(_)) => Ordering::Greater,
        }
    }

    /// Parse a scalar literal: optional sign, `a` or `a/b`. Over GF(p)
    /// the integer is reduced mod p.
    pub fn parse(spec: FieldSpec, token: &str) -> std::result::Result<Scalar, String> {
        let (num_str, den_str) = match token.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (token, None),
        };
        let num: BigInt = num_str
            .parse()
            .map_err(|_| format!("`{token}` is not a scalar literal"))?;
        match spec.0 {
            Repr::Rationals => {
                let den: BigInt = match den_str {
                    Some(d) => d
                        .parse()
                        .map_err(|_| format!("`{token}` is not a scalar literal"))?,
                    None => BigInt::one(),
                };
                if den.is_zero() {
                    return Err(format!("`{token}` has a zero denominator"));
                }
                Ok(Scalar {
                    spec,
                    value: Value::Rat(BigRational::new(num, den)),
                })
            }
            Repr::Prime(p) => {
                if den_str.is_some() {
                    return Err(format!("`{token}`: fractions are not GF({p}) literals"));
                }
                let p_big = BigInt::from(p);
                let mut r = &num % &p_big;
                if r.is_negative() {
                    r += &p_big;
                }
                let (_, digits) = r.to_u64_digits();
                Ok(Scalar {
                    spec,
                    value: Value::Mod(digits.first().copied().unwrap_or(0)),
                })
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Value::Mod(v) => write!(f, "{v}"),
        }
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // extended Euclid on (a, p); a is nonzero and p prime
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "modulus must be prime");
    old_s.rem_euclid(p as i128) as u64
}

/// An exact rational number, independent of any [`FieldSpec`]. Used for
/// quantities that are rational by definition (bounds, fractional ranks)
/// even when the matrices live over GF(p).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Rational {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_usize(n: usize) -> Rational {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: usize, den: usize) -> Rational {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Smallest integer ≥ the value.
    pub fn ceil_usize(&self) -> usize {
        let c = self.0.ceil();
        let (_, digits) = c.numer().to_u64_digits();
        digits.first().copied().unwrap_or(0) as usize
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl From<usize> for Rational {
    fn from(n: usize) -> Rational {
        Rational::from_usize(n)
    }
}
