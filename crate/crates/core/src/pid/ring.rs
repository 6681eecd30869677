use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::exactlin::{FieldSpec, Scalar};

use super::PidError;

/// Which principal ideal domain: the integers, or polynomials in `x` over a field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "field")]
pub enum PidSpec {
    Integers,
    PolyOver(FieldSpec),
}

/// An element of a [`PidSpec`]. Polynomial coefficients run from the constant
/// term upward with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingElem {
    Int(BigInt),
    Poly(Vec<Scalar>),
}

impl PidSpec {
    /// Parses `Z`, `F2x`, `F2[x]`, `Qx`, `Q[x]`, `GF(3)[x]`.
    pub fn parse(text: &str) -> Result<Self, PidError> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "Z" || t == "ZZ" {
            return Ok(PidSpec::Integers);
        }
        let base = t.strip_suffix("[x]").or_else(|| t.strip_suffix('x'));
        match base {
            Some(b) => Ok(PidSpec::PolyOver(
                FieldSpec::parse(b).map_err(|_| PidError::BadRing(text.into()))?,
            )),
            None => Err(PidError::BadRing(text.to_string())),
        }
    }

    pub fn zero(&self) -> RingElem {
        match self {
            PidSpec::Integers => RingElem::Int(BigInt::zero()),
            PidSpec::PolyOver(_) => RingElem::Poly(Vec::new()),
        }
    }

    pub fn one(&self) -> RingElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> RingElem {
        match self {
            PidSpec::Integers => RingElem::Int(BigInt::from(v)),
            PidSpec::PolyOver(f) => RingElem::Poly(trim(*f, vec![f.from_i64(v)])),
        }
    }

    /// `x^e` (polynomial rings only).
    pub fn x_pow(&self, e: usize) -> RingElem {
        match self {
            PidSpec::Integers => panic!("no variable in the integers"),
            PidSpec::PolyOver(f) => {
                let mut c = vec![f.zero(); e + 1];
                c[e] = f.one();
                RingElem::Poly(c)
            }
        }
    }

    fn field(&self) -> FieldSpec {
        match self {
            PidSpec::PolyOver(f) => *f,
            PidSpec::Integers => unreachable!("integers have no coefficient field"),
        }
    }

    pub fn is_zero(&self, a: &RingElem) -> bool {
        match a {
            RingElem::Int(n) => n.is_zero(),
            RingElem::Poly(c) => c.is_empty(),
        }
    }

    pub fn is_unit(&self, a: &RingElem) -> bool {
        match a {
            RingElem::Int(n) => n.abs().is_one(),
            RingElem::Poly(c) => c.len() == 1,
        }
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        match (a, b) {
            (RingElem::Int(x), RingElem::Int(y)) => RingElem::Int(x + y),
            (RingElem::Poly(x), RingElem::Poly(y)) => {
                let f = self.field();
                let n = x.len().max(y.len());
                let c = (0..n)
                    .map(|i| match (x.get(i), y.get(i)) {
                        (Some(u), Some(v)) => f.add(u, v),
                        (Some(u), None) | (None, Some(u)) => u.clone(),
                        (None, None) => unreachable!(),
                    })
                    .collect();
                RingElem::Poly(trim(f, c))
            }
            _ => panic!("mixed ring elements"),
        }
    }

    pub fn neg(&self, a: &RingElem) -> RingElem {
        match a {
            RingElem::Int(x) => RingElem::Int(-x),
            RingElem::Poly(c) => {
                let f = self.field();
                RingElem::Poly(c.iter().map(|x| f.neg(x)).collect())
            }
        }
    }

    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        match (a, b) {
            (RingElem::Int(x), RingElem::Int(y)) => RingElem::Int(x * y),
            (RingElem::Poly(x), RingElem::Poly(y)) => {
                if x.is_empty() || y.is_empty() {
                    return RingElem::Poly(Vec::new());
                }
                let f = self.field();
                let mut c = vec![f.zero(); x.len() + y.len() - 1];
                for (i, u) in x.iter().enumerate() {
                    if f.is_zero(u) {
                        continue;
                    }
                    for (j, v) in y.iter().enumerate() {
                        c[i + j] = f.mul_add(&c[i + j], u, v);
                    }
                }
                RingElem::Poly(trim(f, c))
            }
            _ => panic!("mixed ring elements"),
        }
    }

    pub fn pow(&self, a: &RingElem, e: u32) -> RingElem {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Euclidean division with a remainder of smaller size than `b`.
    ///
    /// Integer remainders are nonnegative; polynomial remainders have lower degree.
    pub fn div_rem(&self, a: &RingElem, b: &RingElem) -> (RingElem, RingElem) {
        assert!(!self.is_zero(b), "division by zero in the ring");
        match (a, b) {
            (RingElem::Int(x), RingElem::Int(y)) => {
                let (q, r) = x.div_mod_floor(y);
                if r.is_negative() {
                    // Only reachable for negative divisors.
                    (RingElem::Int(q + 1), RingElem::Int(r - y))
                } else {
                    (RingElem::Int(q), RingElem::Int(r))
                }
            }
            (RingElem::Poly(x), RingElem::Poly(y)) => {
                let f = self.field();
                let mut r = x.clone();
                let dy = y.len() - 1;
                let lead_inv = f.inv(&y[dy]).expect("nonzero leading coefficient");
                if r.len() <= dy {
                    return (RingElem::Poly(Vec::new()), RingElem::Poly(r));
                }
                let mut q = vec![f.zero(); r.len() - dy];
                while r.len() > dy {
                    let shift = r.len() - 1 - dy;
                    let c = f.mul(&r[r.len() - 1], &lead_inv);
                    let negc = f.neg(&c);
                    for (i, v) in y.iter().enumerate() {
                        r[shift + i] = f.mul_add(&r[shift + i], &negc, v);
                    }
                    q[shift] = c;
                    r = trim(f, r);
                }
                (RingElem::Poly(trim(f, q)), RingElem::Poly(r))
            }
            _ => panic!("mixed ring elements"),
        }
    }

    pub fn rem(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.div_rem(a, b).1
    }

    /// True when `a` divides `b`.
    pub fn divides(&self, a: &RingElem, b: &RingElem) -> bool {
        if self.is_zero(a) {
            return self.is_zero(b);
        }
        self.is_zero(&self.rem(b, a))
    }

    pub fn exact_div(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let (q, r) = self.div_rem(a, b);
        assert!(self.is_zero(&r), "inexact division");
        q
    }

    /// Size used for pivot selection: absolute value or degree.
    pub fn size(&self, a: &RingElem) -> BigInt {
        match a {
            RingElem::Int(x) => x.abs(),
            RingElem::Poly(c) => BigInt::from(c.len()),
        }
    }

    pub fn cmp_size(&self, a: &RingElem, b: &RingElem) -> Ordering {
        self.size(a).cmp(&self.size(b))
    }

    /// Canonical associate (positive or monic) and the unit `u` with `a * u` canonical.
    pub fn normalize(&self, a: &RingElem) -> (RingElem, RingElem) {
        match a {
            RingElem::Int(x) => {
                let u = if x.is_negative() { -1 } else { 1 };
                (RingElem::Int(x.abs()), RingElem::Int(BigInt::from(u)))
            }
            RingElem::Poly(c) => {
                let f = self.field();
                match c.last() {
                    None => (a.clone(), self.one()),
                    Some(lead) => {
                        let inv = f.inv(lead).expect("nonzero lead");
                        let u = RingElem::Poly(vec![inv.clone()]);
                        (
                            RingElem::Poly(c.iter().map(|x| f.mul(x, &inv)).collect()),
                            u,
                        )
                    }
                }
            }
        }
    }

    pub fn canonical(&self, a: &RingElem) -> RingElem {
        self.normalize(a).0
    }

    /// Inverse of a unit.
    pub fn unit_inverse(&self, u: &RingElem) -> RingElem {
        match u {
            RingElem::Int(x) => RingElem::Int(x.clone()),
            RingElem::Poly(c) => {
                assert_eq!(c.len(), 1, "not a unit");
                RingElem::Poly(vec![self.field().inv(&c[0]).expect("nonzero")])
            }
        }
    }

    pub fn gcd(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let mut x = a.clone();
        let mut y = b.clone();
        while !self.is_zero(&y) {
            let r = self.rem(&x, &y);
            x = y;
            y = r;
        }
        self.canonical(&x)
    }

    /// Canonical representative of `a` modulo `q`.
    pub fn reduce(&self, a: &RingElem, q: &RingElem) -> RingElem {
        let r = self.rem(a, q);
        match &r {
            RingElem::Int(x) if x.is_negative() => RingElem::Int(x + self.size(q)),
            _ => r,
        }
    }

    pub fn degree(&self, a: &RingElem) -> Option<usize> {
        match a {
            RingElem::Poly(c) => c.len().checked_sub(1),
            RingElem::Int(_) => None,
        }
    }

    /// Length of `R/(q)`: prime factors with multiplicity over the integers,
    /// total degree over `k[x]` (the `k`-dimension).
    pub fn length(&self, q: &RingElem) -> usize {
        assert!(!self.is_zero(q), "R/(0) has infinite length");
        match q {
            RingElem::Int(x) => big_omega(&x.abs()),
            RingElem::Poly(c) => c.len() - 1,
        }
    }

    /// Composition length of `R/(q)`: irreducible factors with multiplicity.
    ///
    /// Available over the integers and over `F_p[x]`; `None` over `Q[x]`.
    pub fn composition_length(&self, q: &RingElem) -> Option<usize> {
        match (self, q) {
            (PidSpec::Integers, RingElem::Int(x)) => Some(big_omega(&x.abs())),
            (PidSpec::PolyOver(FieldSpec::PrimeField(_)), RingElem::Poly(_)) => {
                Some(self.irreducible_factors(q).len())
            }
            _ => None,
        }
    }

    /// Monic irreducible factors with multiplicity, by trial division (small degrees).
    pub fn irreducible_factors(&self, q: &RingElem) -> Vec<RingElem> {
        let f = self.field();
        let elems = f.elements().expect("finite coefficient field");
        let mut rest = self.canonical(q);
        let mut out = Vec::new();
        let mut deg = 1;
        while self.degree(&rest).unwrap_or(0) >= 1 {
            let d = self.degree(&rest).expect("nonzero");
            if 2 * deg > d {
                out.push(rest.clone());
                break;
            }
            for cand in monic_polys(f, &elems, deg) {
                while self.divides(&cand, &rest) {
                    rest = self.exact_div(&rest, &cand);
                    out.push(cand.clone());
                }
            }
            deg += 1;
        }
        out
    }

    /// Uniform residue modulo `q`.
    pub fn random_below<R: Rng + ?Sized>(&self, q: &RingElem, rng: &mut R) -> RingElem {
        match q {
            RingElem::Int(x) => {
                let bound = x.abs().to_u64().expect("small modulus");
                RingElem::Int(BigInt::from(rng.gen_range(0..bound)))
            }
            RingElem::Poly(c) => {
                let f = self.field();
                let coeffs = (0..c.len().saturating_sub(1))
                    .map(|_| f.random(rng))
                    .collect();
                RingElem::Poly(trim(f, coeffs))
            }
        }
    }

    /// Parses integers, or polynomials in `x` with caret exponents such as `x^2+x+1`.
    pub fn parse_elem(&self, text: &str) -> Result<RingElem, PidError> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(PidError::BadElement(text.to_string()));
        }
        match self {
            PidSpec::Integers => t
                .parse::<BigInt>()
                .map(RingElem::Int)
                .map_err(|_| PidError::BadElement(text.to_string())),
            PidSpec::PolyOver(f) => {
                parse_poly(*f, &t).ok_or_else(|| PidError::BadElement(text.to_string()))
            }
        }
    }

    pub fn format(&self, a: &RingElem) -> String {
        a.to_string()
    }
}

fn trim(f: FieldSpec, mut c: Vec<Scalar>) -> Vec<Scalar> {
    while c.last().is_some_and(|x| f.is_zero(x)) {
        c.pop();
    }
    c
}

fn big_omega(n: &BigInt) -> usize {
    let mut n = n.clone();
    let mut count = 0;
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        while (&n % &p).is_zero() {
            n /= &p;
            count += 1;
        }
        p += 1;
    }
    if n > BigInt::one() {
        count += 1;
    }
    count
}

fn monic_polys(f: FieldSpec, elems: &[Scalar], deg: usize) -> Vec<RingElem> {
    let p = elems.len();
    let total = p.pow(deg as u32);
    (0..total)
        .map(|mut idx| {
            let mut c = Vec::with_capacity(deg + 1);
            for _ in 0..deg {
                c.push(elems[idx % p].clone());
                idx /= p;
            }
            c.push(f.one());
            RingElem::Poly(c)
        })
        .collect()
}

fn parse_poly(f: FieldSpec, t: &str) -> Option<RingElem> {
    let ring = PidSpec::PolyOver(f);
    let mut acc = ring.zero();
    let mut terms: Vec<(bool, &str)> = Vec::new();
    let mut start = 0;
    let mut neg = false;
    let bytes = t.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if (b == b'+' || b == b'-') && i > 0 && bytes[i - 1] != b'^' {
            terms.push((neg, &t[start..i]));
            neg = b == b'-';
            start = i + 1;
        } else if i == 0 && (b == b'+' || b == b'-') {
            neg = b == b'-';
            start = 1;
        }
    }
    terms.push((neg, &t[start..]));
    for (neg, term) in terms {
        if term.is_empty() {
            return None;
        }
        let (coef, power) = match term.find('x') {
            None => (term, 0usize),
            Some(pos) => {
                let c = term[..pos].trim_end_matches('*');
                let rest = &term[pos + 1..];
                let e = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')?.parse::<usize>().ok()?
                };
                (if c.is_empty() { "1" } else { c }, e)
            }
        };
        let c: i64 = coef.parse().ok()?;
        let mut mono = vec![f.zero(); power + 1];
        mono[power] = f.from_i64(if neg { -c } else { c });
        acc = ring.add(&acc, &RingElem::Poly(trim(f, mono)));
    }
    Some(acc)
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElem::Int(x) => write!(f, "{x}"),
            RingElem::Poly(c) => {
                if c.is_empty() {
                    return write!(f, "0");
                }
                let mut first = true;
                for (e, coef) in c.iter().enumerate().rev() {
                    let zero = matches!(coef, Scalar::Residue(0))
                        || matches!(coef, Scalar::Rational(r) if r.is_zero());
                    if zero {
                        continue;
                    }
                    let neg = coef.is_negative();
                    let abs = match coef {
                        Scalar::Rational(r) => Scalar::Rational(r.abs()),
                        s => s.clone(),
                    };
                    if first {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, "{}", if neg { " - " } else { " + " })?;
                    }
                    first = false;
                    let unit = abs.to_string() == "1";
                    match (e, unit) {
                        (0, _) => write!(f, "{abs}")?,
                        (1, true) => write!(f, "x")?,
                        (1, false) => write!(f, "{abs}x")?,
                        (_, true) => write!(f, "x^{e}")?,
                        (_, false) => write!(f, "{abs}x^{e}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2x() -> PidSpec {
        PidSpec::PolyOver(FieldSpec::prime(2).unwrap())
    }

    #[test]
    fn parse_rings_and_elements() {
        assert_eq!(PidSpec::parse("Z").unwrap(), PidSpec::Integers);
        assert_eq!(PidSpec::parse("F2x").unwrap(), f2x());
        assert_eq!(
            PidSpec::parse("Q[x]").unwrap(),
            PidSpec::PolyOver(FieldSpec::Rationals)
        );
        let r = f2x();
        let p = r.parse_elem("x^2+x+1").unwrap();
        assert_eq!(p.to_string(), "x^2 + x + 1");
        assert_eq!(r.parse_elem("x^3 - x").unwrap().to_string(), "x^3 + x");
        let q = PidSpec::PolyOver(FieldSpec::Rationals);
        assert_eq!(q.parse_elem("-2x^2+3").unwrap().to_string(), "-2x^2 + 3");
        assert!(r.parse_elem("x^").is_err());
        assert!(PidSpec::Integers.parse_elem("4a").is_err());
    }

    #[test]
    fn euclid_and_gcd() {
        let r = f2x();
        let a = r.parse_elem("x^3+x").unwrap();
        let b = r.parse_elem("x^2+1").unwrap();
        assert_eq!(r.gcd(&a, &b), b);
        let z = PidSpec::Integers;
        assert_eq!(z.gcd(&z.from_i64(12), &z.from_i64(-18)), z.from_i64(6));
        assert_eq!(z.reduce(&z.from_i64(-1), &z.from_i64(4)), z.from_i64(3));
    }

    #[test]
    fn lengths() {
        let z = PidSpec::Integers;
        assert_eq!(z.length(&z.from_i64(4)), 2);
        assert_eq!(z.length(&z.from_i64(12)), 3);
        let r = f2x();
        let irreducible = r.parse_elem("x^2+x+1").unwrap();
        assert_eq!(r.length(&irreducible), 2);
        assert_eq!(r.composition_length(&irreducible), Some(1));
        let sq = r.parse_elem("x^4+x^2+1").unwrap(); // (x^2+x+1)^2
        assert_eq!(r.composition_length(&sq), Some(2));
        assert_eq!(
            r.composition_length(&r.parse_elem("x^3+x").unwrap()),
            Some(3)
        );
    }
}
