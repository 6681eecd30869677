use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::LinError;

/// The base field: either the rationals or a prime field `F_p` with `p < 2^31`.
///
/// All arithmetic on [`Scalar`] values goes through the field, in the style of
/// a ring object that owns the operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "characteristic")]
pub enum FieldSpec {
    Rationals,
    PrimeField(u32),
}

/// A field element. The field it belongs to is carried by the surrounding
/// container (matrix, subspace, polynomial).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue(u32),
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec::Rationals
    }

    pub fn prime(p: u64) -> Result<Self, LinError> {
        if p >= (1 << 31) || !is_prime_u64(p) {
            return Err(LinError::NotPrime(p));
        }
        Ok(FieldSpec::PrimeField(p as u32))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    /// Number of elements, `None` for an infinite field.
    pub fn size(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::PrimeField(p) => Some(*p as u64),
        }
    }

    /// Parses `Q`, `F2`, `F 2`, `F_2`, `GF(2)`.
    pub fn parse(text: &str) -> Result<Self, LinError> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "Q" || t == "QQ" {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix("F_"))
            .or_else(|| t.strip_prefix('F'));
        match digits.and_then(|d| d.parse::<u64>().ok()) {
            Some(p) => FieldSpec::prime(p),
            None => Err(LinError::BadField(text.to_string())),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::zero()),
            FieldSpec::PrimeField(_) => Scalar::Residue(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::one()),
            FieldSpec::PrimeField(_) => Scalar::Residue(1),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::PrimeField(p) => Scalar::Residue(v.rem_euclid(*p as i64) as u32),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(v.clone())),
            FieldSpec::PrimeField(p) => {
                let r = v.mod_floor(&BigInt::from(*p));
                Scalar::Residue(u32::try_from(r).expect("residue below p"))
            }
        }
    }

    /// Maps `num/den` into the field; fails when `den` vanishes in it.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar, LinError> {
        let d = self.from_i64(den);
        let inv = self.inv(&d).ok_or(LinError::DivisionByZero)?;
        Ok(self.mul(&self.from_i64(num), &inv))
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue(v) => *v == 0,
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue(v) => *v == 1,
        }
    }

    /// True when `a` is a valid canonical element of this field.
    pub fn contains(&self, a: &Scalar) -> bool {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rational(_)) => true,
            (FieldSpec::PrimeField(p), Scalar::Residue(v)) => v < p,
            _ => false,
        }
    }

    fn modulus(&self) -> u64 {
        match self {
            FieldSpec::PrimeField(p) => *p as u64,
            FieldSpec::Rationals => unreachable!("modulus of Q"),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            (Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue(((*x as u64 + *y as u64) % self.modulus()) as u32)
            }
            _ => panic!("mixed-field arithmetic"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x - y),
            (Scalar::Residue(x), Scalar::Residue(y)) => {
                let p = self.modulus();
                Scalar::Residue(((*x as u64 + p - *y as u64) % p) as u32)
            }
            _ => panic!("mixed-field arithmetic"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Rational(x) => Scalar::Rational(-x),
            Scalar::Residue(x) => {
                let p = self.modulus();
                Scalar::Residue(((p - *x as u64) % p) as u32)
            }
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rational(x), Scalar::Rational(y)) => {
                if x.is_zero() || y.is_zero() {
                    Scalar::Rational(BigRational::zero())
                } else {
                    Scalar::Rational(x * y)
                }
            }
            (Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue(((*x as u64 * *y as u64) % self.modulus()) as u32)
            }
            _ => panic!("mixed-field arithmetic"),
        }
    }

    /// `a + b*c`, the inner step of every elimination loop.
    pub fn mul_add(&self, a: &Scalar, b: &Scalar, c: &Scalar) -> Scalar {
        match (a, b, c) {
            (Scalar::Residue(x), Scalar::Residue(y), Scalar::Residue(z)) => {
                Scalar::Residue(((*x as u64 + *y as u64 * *z as u64) % self.modulus()) as u32)
            }
            _ => self.add(a, &self.mul(b, c)),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        match a {
            Scalar::Rational(x) => Some(Scalar::Rational(x.recip())),
            Scalar::Residue(x) => {
                let p = self.modulus();
                Some(Scalar::Residue(pow_mod(*x as u64, p - 2, p) as u32))
            }
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.inv(b).map(|i| self.mul(a, &i))
    }

    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Every element of a finite field, in residue order. `None` over Q.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::PrimeField(p) => Some((0..*p).map(Scalar::Residue).collect()),
        }
    }

    /// Uniform random element for finite fields, small random rational otherwise.
    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match self {
            FieldSpec::Rationals => {
                let num: i64 = rng.gen_range(-4..=4);
                let den: i64 = rng.gen_range(1..=3);
                Scalar::Rational(BigRational::new(num.into(), den.into()))
            }
            FieldSpec::PrimeField(p) => Scalar::Residue(rng.gen_range(0..*p)),
        }
    }

    pub fn format(&self, a: &Scalar) -> String {
        a.to_string()
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Residue(v) => write!(f, "{v}"),
        }
    }
}

impl Scalar {
    /// Sign-aware check used by printers; residues are never negative.
    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_negative())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_fields() {
        assert_eq!(FieldSpec::parse("Q").unwrap(), FieldSpec::Rationals);
        assert_eq!(FieldSpec::parse("F2").unwrap(), FieldSpec::PrimeField(2));
        assert_eq!(FieldSpec::parse("F 7").unwrap(), FieldSpec::PrimeField(7));
        assert_eq!(FieldSpec::parse("GF(5)").unwrap(), FieldSpec::PrimeField(5));
        assert!(FieldSpec::parse("F4").is_err());
        assert!(FieldSpec::parse("R").is_err());
        assert!(FieldSpec::prime(2147483647).is_ok());
        // 2^32 + 15 is prime but too large for the residue representation.
        assert!(FieldSpec::prime(4294967311).is_err());
        assert!(FieldSpec::prime(91).is_err());
    }

    #[test]
    fn residue_arithmetic() {
        let f = FieldSpec::prime(7).unwrap();
        let three = f.from_i64(3);
        assert_eq!(f.mul(&three, &f.inv(&three).unwrap()), f.one());
        assert_eq!(f.from_i64(-1), Scalar::Residue(6));
        assert_eq!(f.neg(&f.zero()), f.zero());
        assert_eq!(f.from_ratio(1, 2).unwrap(), Scalar::Residue(4));
        assert!(f.from_ratio(1, 7).is_err());
    }
}
