use alloc::boxed::Box;
use alloc::string::ToString;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact rational number.
///
/// Values whose reduced numerator and denominator both fit in an `i64` are
/// stored inline; anything larger spills to a boxed pair of big integers.
/// The choice of representation is canonical, so structural equality is
/// value equality.
#[derive(Clone)]
pub struct Rational(Repr);

#[derive(Clone, PartialEq, Eq)]
enum Repr {
    // den > 0, gcd(|num|, den) = 1, num != i64::MIN
    Small(i64, i64),
    Big(Box<(BigInt, BigInt)>),
}

fn fits(v: i128) -> bool {
    v > i64::MIN as i128 && v <= i64::MAX as i128
}

impl Rational {
    pub const ZERO: Rational = Rational(Repr::Small(0, 1));
    pub const ONE: Rational = Rational(Repr::Small(1, 1));

    pub fn zero() -> Self {
        Self::ZERO
    }

    pub fn one() -> Self {
        Self::ONE
    }

    pub fn from_int(v: i64) -> Self {
        if v == i64::MIN {
            Self::from_big(BigInt::from(v), BigInt::one())
        } else {
            Rational(Repr::Small(v, 1))
        }
    }

    /// `num / den`, reduced. Fails on a zero denominator.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::from_i128_unchecked(num as i128, den as i128))
    }

    /// Like [`Rational::new`] but panics on a zero denominator.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::new(num, den).expect("zero denominator")
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::from_big(num, den))
    }

    fn from_i128_unchecked(mut num: i128, mut den: i128) -> Self {
        debug_assert!(den != 0);
        if num == 0 {
            return Self::ZERO;
        }
        if den < 0 {
            // |values| < 2^127 in every caller, so negation cannot overflow
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if g != 1 {
            num /= g;
            den /= g;
        }
        if fits(num) && fits(den) {
            Rational(Repr::Small(num as i64, den as i64))
        } else {
            Rational(Repr::Big(Box::new((BigInt::from(num), BigInt::from(den)))))
        }
    }

    fn from_big(mut num: BigInt, mut den: BigInt) -> Self {
        if num.is_zero() {
            return Self::ZERO;
        }
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if !g.is_one() {
            num /= &g;
            den /= &g;
        }
        match (num.to_i64(), den.to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(Box::new((num, den)))),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.0.clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.1.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        matches!(self.0, Repr::Small(_, 1))
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(b) => b.0.is_negative(),
        }
    }

    /// True when the value is stored without heap allocation.
    /// `(numerator, denominator)` when both fit in `i64`.
    pub fn as_small(&self) -> Option<(i64, i64)> {
        match self.0 {
            Repr::Small(n, d) => Some((n, d)),
            Repr::Big(_) => None,
        }
    }

    pub fn is_small(&self) -> bool {
        matches!(self.0, Repr::Small(..))
    }

    pub fn recip(&self) -> Result<Self> {
        match &self.0 {
            Repr::Small(0, _) => Err(Error::ZeroDenominator),
            Repr::Small(n, d) => Ok(Self::from_i128_unchecked(*d as i128, *n as i128)),
            Repr::Big(b) => Ok(Self::from_big(b.1.clone(), b.0.clone())),
        }
    }

    /// Integer power; negative exponents invert. Fails for `0^k`, `k < 0`.
    pub fn pow(&self, exp: i32) -> Result<Self> {
        let base = if exp < 0 { self.recip()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::ONE;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    fn to_big(&self) -> (BigInt, BigInt) {
        match &self.0 {
            Repr::Small(n, d) => (BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (b.0.clone(), b.1.clone()),
        }
    }

    /// `self * k` for a small integer `k`.
    pub fn mul_int(&self, k: i64) -> Self {
        match &self.0 {
            Repr::Small(n, d) => {
                let g = (k as i128).gcd(&(*d as i128));
                Self::from_i128_unchecked(*n as i128 * (k as i128 / g), *d as i128 / g)
            }
            Repr::Big(b) => Self::from_big(&b.0 * BigInt::from(k), b.1.clone()),
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl From<i32> for Rational {
    fn from(v: i32) -> Self {
        Self::from_int(v as i64)
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Self::from_big(v, BigInt::one())
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(b) => {
                b.0.hash(state);
                b.1.hash(state);
            }
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => {
                let (a, b) = self.to_big();
                let (c, d) = other.to_big();
                (a * d).cmp(&(c * b))
            }
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;

    fn add(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if let Some(r) = small_add(*a, *b, *c, *d) {
                    return r;
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Rational::from_i128_unchecked(a * d + c * b, b * d)
            }
            _ => {
                let (a, b) = self.to_big();
                let (c, d) = rhs.to_big();
                Rational::from_big(a * &d + c * &b, b * d)
            }
        }
    }
}

fn small(num: i64, den: i64) -> Option<Rational> {
    (num != i64::MIN).then(|| if num == 0 { Rational::ZERO } else { Rational(Repr::Small(num, den)) })
}

// Inputs are reduced with positive denominators.
fn small_add(a: i64, b: i64, c: i64, d: i64) -> Option<Rational> {
    if b == d {
        let t = a.checked_add(c)?;
        if b == 1 {
            return small(t, 1);
        }
        let g = t.gcd(&b);
        return small(t / g, b / g);
    }
    let g = b.gcd(&d);
    let t = a.checked_mul(d / g)?.checked_add(c.checked_mul(b / g)?)?;
    let g2 = t.gcd(&g);
    small(t / g2, (b / g).checked_mul(d / g2)?)
}

fn small_mul(a: i64, b: i64, c: i64, d: i64) -> Option<Rational> {
    let g1 = a.gcd(&d);
    let g2 = c.gcd(&b);
    small((a / g1).checked_mul(c / g2)?, (b / g2).checked_mul(d / g1)?)
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;

    fn sub(self, rhs: &Rational) -> Rational {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;

    fn mul(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *a == 0 || *c == 0 {
                    return Rational::ZERO;
                }
                if let Some(r) = small_mul(*a, *b, *c, *d) {
                    return r;
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Rational::from_i128_unchecked(a * c, b * d)
            }
            _ => {
                let (a, b) = self.to_big();
                let (c, d) = rhs.to_big();
                Rational::from_big(a * c, b * d)
            }
        }
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;

    fn div(self, rhs: &Rational) -> Rational {
        self * &rhs.recip().expect("division by zero")
    }
}

impl Neg for &Rational {
    type Output = Rational;

    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => Rational(Repr::Small(-n, *d)),
            Repr::Big(b) => Rational::from_big(-&b.0, b.1.clone()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;

    fn neg(self) -> Rational {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) if b.1.is_one() => write!(f, "{}", b.0),
            Repr::Big(b) => write!(f, "{}/{}", b.0, b.1),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(alloc::format!("invalid rational {s:?}"));
        let parse_int = |t: &str| -> Result<BigInt> {
            let t = t.trim();
            let digits = t.strip_prefix('-').unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse::<BigInt>().map_err(|e| Error::Parse(e.to_string()))
        };
        match s.split_once('/') {
            None => Ok(Rational::from(parse_int(s)?)),
            Some((n, d)) => {
                let d = parse_int(d)?;
                if d.is_negative() {
                    return Err(bad());
                }
                Rational::from_bigints(parse_int(n)?, d)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    #[test]
    fn normalizes_sign_and_gcd() {
        assert_eq!(q(6, -4), q(-3, 2));
        assert_eq!(q(0, -7), Rational::ZERO);
        assert_eq!(q(0, 5).to_string(), "0");
        assert_eq!(q(10, 5).to_string(), "2");
        assert_eq!(q(-3, 9).to_string(), "-1/3");
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert_eq!(Rational::new(1, 0), Err(Error::ZeroDenominator));
        assert!("1/0".parse::<Rational>().is_err());
        assert!(Rational::ZERO.recip().is_err());
    }

    #[test]
    fn long_hand_fraction_sums() {
        // 3/4 + 1/4 = 4/4 = 1 ; 1/6 + 1/10 = 5/30 + 3/30 = 8/30 = 4/15
        assert_eq!(q(3, 4) + q(1, 4), Rational::ONE);
        assert_eq!(q(1, 6) + q(1, 10), q(4, 15));
        assert_eq!(q(1, 2) - q(1, 3), q(1, 6));
        assert_eq!(q(2, 3) * q(9, 4), q(3, 2));
        assert_eq!(q(2, 3) / q(4, 9), q(3, 2));
    }

    #[test]
    fn spills_to_bigint_and_back() {
        let big = Rational::from_int(i64::MAX) + Rational::ONE;
        assert!(!big.is_small());
        assert_eq!(big.to_string(), "9223372036854775808");
        let back = big - Rational::ONE;
        assert!(back.is_small());
        assert_eq!(back, Rational::from_int(i64::MAX));

        let huge = q(3, 7).pow(60).unwrap();
        assert!(!huge.is_small());
        assert_eq!(huge.pow(1).unwrap() * q(7, 3).pow(60).unwrap(), Rational::ONE);
        assert_eq!(Rational::from_int(i64::MIN).to_string(), "-9223372036854775808");
        assert_eq!(-Rational::from_int(i64::MIN), Rational::from_int(i64::MAX) + Rational::ONE);
    }

    #[test]
    fn parse_print() {
        for s in ["0", "-1", "3/4", "-17/5", "123456789012345678901234567891/1024"] {
            assert_eq!(s.parse::<Rational>().unwrap().to_string(), s);
        }
        assert_eq!("4/8".parse::<Rational>().unwrap().to_string(), "1/2");
        assert!("1/-2".parse::<Rational>().is_err());
        assert!("a/2".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
    }

    #[test]
    fn negative_powers() {
        assert_eq!(q(2, 3).pow(-2).unwrap(), q(9, 4));
        assert_eq!(q(-2, 1).pow(3).unwrap(), Rational::from_int(-8));
        assert!(Rational::ZERO.pow(-1).is_err());
        assert_eq!(Rational::ZERO.pow(0).unwrap(), Rational::ONE);
    }

    #[test]
    fn ordering() {
        assert!(q(1, 3) < q(1, 2));
        assert!(q(-1, 2) < q(-1, 3));
        let big = q(1, 3).pow(50).unwrap();
        assert!(big > Rational::ZERO && big < q(1, 3));
    }
}
