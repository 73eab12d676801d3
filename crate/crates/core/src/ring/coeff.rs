use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The exact coefficient field: the rationals or a prime field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoeffField {
    Rationals,
    PrimeField(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl CoeffField {
    /// Largest modulus accepted; keeps products inside `u128` trivially and
    /// the trial-division primality check fast.
    pub const MAX_PRIME: u64 = (1 << 31) - 1;

    pub fn prime(p: u64) -> Result<Self> {
        if p > Self::MAX_PRIME || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(CoeffField::PrimeField(p))
    }

    /// Parses `QQ` or `Fp:<p>`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "QQ" {
            return Ok(CoeffField::Rationals);
        }
        if let Some(p) = s.strip_prefix("Fp:") {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::InvalidContext(format!("bad modulus in `{s}`")))?;
            return Self::prime(p);
        }
        Err(Error::InvalidContext(format!("unknown field `{s}` (expected QQ or Fp:<p>)")))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            CoeffField::Rationals => 0,
            CoeffField::PrimeField(p) => *p,
        }
    }

    pub fn zero(&self) -> Coeff {
        self.from_i64(0)
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Coeff {
        match self {
            CoeffField::Rationals => Coeff::Q(BigRational::from_integer(v.clone())),
            CoeffField::PrimeField(p) => {
                let r = v.mod_floor(&BigInt::from(*p));
                Coeff::Fp { v: r.to_u64().unwrap_or(0), p: *p }
            }
        }
    }

    /// `num/den` mapped into the field.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Coeff> {
        let d = self.from_bigint(den);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.from_bigint(num).checked_div(&d)
    }
}

impl fmt::Display for CoeffField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffField::Rationals => write!(f, "QQ"),
            CoeffField::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl serde::Serialize for CoeffField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for CoeffField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CoeffField::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// An element of a [`CoeffField`]. Prime-field elements carry their modulus,
/// so arithmetic never needs the field passed alongside.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p prime, a != 0
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i128) as u64
}

impl Coeff {
    pub fn field(&self) -> CoeffField {
        match self {
            Coeff::Q(_) => CoeffField::Rationals,
            Coeff::Fp { p, .. } => CoeffField::PrimeField(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Q(q) => q.is_zero(),
            Coeff::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Q(q) => q.is_one(),
            Coeff::Fp { v, .. } => *v == 1,
        }
    }

    pub fn inv(&self) -> Option<Coeff> {
        match self {
            Coeff::Q(q) if !q.is_zero() => Some(Coeff::Q(q.recip())),
            Coeff::Fp { v, p } if *v != 0 => Some(Coeff::Fp { v: inv_mod(*v, *p), p: *p }),
            _ => None,
        }
    }

    pub fn checked_div(&self, rhs: &Coeff) -> Result<Coeff> {
        let inv = rhs.inv().ok_or(Error::DivisionByZero)?;
        Ok(self * &inv)
    }

    pub fn pow(&self, mut e: u32) -> Coeff {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// True when the printed form needs a leading minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            Coeff::Q(q) => q.is_negative(),
            Coeff::Fp { .. } => false,
        }
    }

    pub fn abs(&self) -> Coeff {
        match self {
            Coeff::Q(q) => Coeff::Q(q.abs()),
            c => c.clone(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Coeff::Q(q) => Some(q),
            Coeff::Fp { .. } => None,
        }
    }
}

fn mismatch() -> ! {
    panic!("coefficient arithmetic across different fields")
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Q(a), Coeff::Q(b)) => Coeff::Q(a + b),
            (Coeff::Fp { v: a, p }, Coeff::Fp { v: b, p: q }) if p == q => {
                Coeff::Fp { v: (a + b) % p, p: *p }
            }
            _ => mismatch(),
        }
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Q(a), Coeff::Q(b)) => Coeff::Q(a - b),
            (Coeff::Fp { v: a, p }, Coeff::Fp { v: b, p: q }) if p == q => {
                Coeff::Fp { v: (a + p - b) % p, p: *p }
            }
            _ => mismatch(),
        }
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Q(a), Coeff::Q(b)) => Coeff::Q(a * b),
            (Coeff::Fp { v: a, p }, Coeff::Fp { v: b, p: q }) if p == q => {
                Coeff::Fp { v: ((*a as u128 * *b as u128) % *p as u128) as u64, p: *p }
            }
            _ => mismatch(),
        }
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        match self {
            Coeff::Q(a) => Coeff::Q(-a),
            Coeff::Fp { v, p } => Coeff::Fp { v: (p - v) % p, p: *p },
        }
    }
}

impl Add for Coeff {
    type Output = Coeff;
    fn add(self, rhs: Coeff) -> Coeff {
        &self + &rhs
    }
}

impl Sub for Coeff {
    type Output = Coeff;
    fn sub(self, rhs: Coeff) -> Coeff {
        &self - &rhs
    }
}

impl Mul for Coeff {
    type Output = Coeff;
    fn mul(self, rhs: Coeff) -> Coeff {
        &self * &rhs
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}

/// Rationals print as `p/q` with `q > 0` and `gcd(p, q) = 1` (or just `p`);
/// prime-field elements as their representative in `[0, p)`.
impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Coeff::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_normalization() {
        let q = CoeffField::Rationals;
        let half = q.from_ratio(&BigInt::from(2), &BigInt::from(-4)).unwrap();
        assert_eq!(half.to_string(), "-1/2");
        assert_eq!((&half * &q.from_i64(-2)).to_string(), "1");
    }

    #[test]
    fn prime_field_inverse() {
        let f = CoeffField::prime(7).unwrap();
        for a in 1..7 {
            let x = f.from_i64(a);
            assert!((&x * &x.inv().unwrap()).is_one());
        }
        assert_eq!(f.from_i64(-1).to_string(), "6");
        assert_eq!(f.from_ratio(&BigInt::from(1), &BigInt::from(7)), Err(Error::DivisionByZero));
    }

    #[test]
    fn composite_modulus_rejected() {
        assert_eq!(CoeffField::prime(9), Err(Error::NotPrime(9)));
        assert_eq!(CoeffField::parse("Fp:1"), Err(Error::NotPrime(1)));
        assert_eq!(CoeffField::parse("Fp:101").unwrap(), CoeffField::PrimeField(101));
    }
}
