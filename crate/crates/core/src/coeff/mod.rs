//! Exact coefficients: rationals and sparse polynomials in the parameters
//! `a1..an` over the rationals.

mod rational;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

pub use rational::Rational;

use crate::text::split_top_level;
use crate::{Error, Result};

/// Exponent vector over the parameter list.
pub type ParamExp = SmallVec<[u16; 6]>;

type Terms = SmallVec<[(ParamExp, Rational); 1]>;

/// Sparse polynomial in the parameters `a1..an` with rational coefficients.
///
/// Terms are kept sorted in [`param_order`] with no zero coefficients, so
/// two equal polynomials have identical representation. With an empty
/// parameter list this is just a rational number, stored without a heap
/// allocation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParamPoly {
    arity: usize,
    terms: Terms,
}

/// Canonical term order: higher total degree first, then lexicographically
/// larger exponent vectors first (so `a1` precedes `a2`).
pub fn param_order(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

impl ParamPoly {
    pub fn zero(arity: usize) -> Self {
        ParamPoly { arity, terms: Terms::new() }
    }

    pub fn constant(value: Rational, arity: usize) -> Self {
        let mut terms = Terms::new();
        if !value.is_zero() {
            terms.push((zero_exp(arity), value));
        }
        ParamPoly { arity, terms }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(Rational::ONE, arity)
    }

    /// The parameter `a_index` (1-based).
    pub fn param(index: usize, arity: usize) -> Result<Self> {
        crate::check_index(index, arity)?;
        let mut exp = zero_exp(arity);
        exp[index - 1] = 1;
        let mut terms = Terms::new();
        terms.push((exp, Rational::ONE));
        Ok(ParamPoly { arity, terms })
    }

    /// Builds a polynomial from arbitrary `(exponents, coefficient)` pairs,
    /// merging duplicates and dropping zeros.
    pub fn from_terms<I>(arity: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ParamExp, Rational)>,
    {
        let mut raw: Vec<(ParamExp, Rational)> = Vec::new();
        for (exp, c) in terms {
            if exp.len() != arity {
                return Err(Error::ArityMismatch { left: arity, right: exp.len() });
            }
            raw.push((exp, c));
        }
        Ok(Self::canonicalize(arity, raw))
    }

    fn canonicalize(arity: usize, mut raw: Vec<(ParamExp, Rational)>) -> Self {
        raw.sort_by(|a, b| param_order(&a.0, &b.0));
        let mut terms = Terms::new();
        for (exp, c) in raw {
            match terms.last_mut() {
                Some((last, acc)) if *last == exp => *acc += &c,
                _ => terms.push((exp, c)),
            }
        }
        terms.retain(|t| !t.1.is_zero());
        ParamPoly { arity, terms }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[(ParamExp, Rational)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if this polynomial has no parameter dependence.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::ZERO),
            [(e, c)] if e.iter().all(|&x| x == 0) => Some(c.clone()),
            _ => None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().map(|&x| x as u32).sum())
            .max()
            .unwrap_or(0)
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity {
            Err(Error::ArityMismatch { left: self.arity, right: other.arity })
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = self.clone();
        out.add_scaled(other, &Rational::ONE);
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::ONE);
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        if let (Some(a), Some(b)) = (self.single_constant(), other.single_constant()) {
            return Ok(Self::constant(a * b, self.arity));
        }
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = ea.clone();
                for (x, y) in e.iter_mut().zip(eb) {
                    *x = x.checked_add(*y).ok_or(Error::ExponentOverflow)?;
                }
                raw.push((e, ca * cb));
            }
        }
        Ok(Self::canonicalize(self.arity, raw))
    }

    fn single_constant(&self) -> Option<&Rational> {
        match self.terms.as_slice() {
            [(e, c)] if e.iter().all(|&x| x == 0) => Some(c),
            _ => None,
        }
    }

    /// `self += other * k` in place, merging sorted term lists.
    pub fn add_scaled(&mut self, other: &Self, k: &Rational) {
        debug_assert_eq!(self.arity, other.arity);
        if k.is_zero() || other.is_zero() {
            return;
        }
        // one-term fast path: the common case for constant coefficients
        if let ([(ea, ca)], [(eb, cb)]) = (self.terms.as_mut_slice(), other.terms.as_slice()) {
            if ea == eb {
                let sum = &*ca + &(cb * k);
                if sum.is_zero() {
                    self.terms.clear();
                } else {
                    *ca = sum;
                }
                return;
            }
        }
        let mut merged = Terms::with_capacity(self.terms.len() + other.terms.len());
        let mut left = core::mem::take(&mut self.terms).into_iter().peekable();
        let mut right = other.terms.iter().peekable();
        loop {
            match (left.peek(), right.peek()) {
                (Some(l), Some(r)) => match param_order(&l.0, &r.0) {
                    Ordering::Less => merged.push(left.next().unwrap()),
                    Ordering::Greater => {
                        let (e, c) = right.next().unwrap();
                        merged.push((e.clone(), c * k));
                    }
                    Ordering::Equal => {
                        let (e, c) = left.next().unwrap();
                        let (_, c2) = right.next().unwrap();
                        let s = c + &(c2 * k);
                        if !s.is_zero() {
                            merged.push((e, s));
                        }
                    }
                },
                (Some(_), None) => merged.push(left.next().unwrap()),
                (None, Some(_)) => {
                    let (e, c) = right.next().unwrap();
                    merged.push((e.clone(), c * k));
                }
                (None, None) => break,
            }
        }
        self.terms = merged;
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(self.arity);
        }
        ParamPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    /// Evaluates at concrete parameter values.
    pub fn eval(&self, values: &[Rational]) -> Result<Rational> {
        if values.len() != self.arity {
            return Err(Error::ArityMismatch { left: self.arity, right: values.len() });
        }
        let mut acc = Rational::ZERO;
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in values.iter().zip(e.iter()) {
                if k > 0 {
                    t *= &v.pow(k as i32)?;
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Substitutes concrete values for the parameters, keeping the arity.
    pub fn specialize(&self, values: &[Rational]) -> Result<Self> {
        Ok(Self::constant(self.eval(values)?, self.arity))
    }

    /// Parses the textual form produced by `Display`. `0` is the zero
    /// polynomial; parameters are named `a1..an`.
    pub fn parse(s: &str, arity: usize) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse(String::from("empty polynomial")));
        }
        let mut raw = Vec::new();
        for term in split_top_level(s, " + ") {
            let mut factors = term.split('*').map(str::trim);
            let coeff: Rational = factors.next().unwrap_or("").parse()?;
            let mut exp = zero_exp(arity);
            for f in factors {
                let (name, power) = match f.split_once('^') {
                    Some((n, p)) => (n, p.parse::<u16>().map_err(|_| bad_factor(f))?),
                    None => (f, 1),
                };
                let idx: usize = name
                    .strip_prefix('a')
                    .and_then(|i| i.parse().ok())
                    .ok_or_else(|| bad_factor(f))?;
                crate::check_index(idx, arity)?;
                exp[idx - 1] = exp[idx - 1].checked_add(power).ok_or(Error::ExponentOverflow)?;
            }
            raw.push((exp, coeff));
        }
        Ok(Self::canonicalize(arity, raw))
    }
}

fn bad_factor(f: &str) -> Error {
    Error::Parse(format!("invalid parameter factor {f:?}"))
}

fn zero_exp(arity: usize) -> ParamExp {
    core::iter::repeat(0).take(arity).collect()
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (exp, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}")?;
            for (v, &e) in exp.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*a{}", v + 1)?,
                    _ => write!(f, "*a{}^{}", v + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;

    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        self.checked_add(rhs).expect("parameter arity mismatch")
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;

    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        self.checked_sub(rhs).expect("parameter arity mismatch")
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;

    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        self.checked_mul(rhs).expect("parameter arity mismatch")
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;

    fn neg(self) -> ParamPoly {
        self.scale(&-Rational::ONE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(i: usize, n: usize) -> ParamPoly {
        ParamPoly::param(i, n).unwrap()
    }

    fn c(n: i64, d: i64, arity: usize) -> ParamPoly {
        ParamPoly::constant(Rational::frac(n, d), arity)
    }

    #[test]
    fn cancellation_and_identities() {
        let p = &a(1, 2) + &c(1, 2, 2);
        assert_eq!(&p + &-&a(1, 2), c(1, 2, 2));
        assert_eq!(&p + &ParamPoly::zero(2), p);
        assert_eq!(&p * &ParamPoly::one(2), p);
        // 3/4 a2 + 1/4 a2 = a2
        assert_eq!(&a(2, 2).scale(&Rational::frac(3, 4)) + &a(2, 2).scale(&Rational::frac(1, 4)), a(2, 2));
    }

    #[test]
    fn difference_of_squares() {
        let one = ParamPoly::one(1);
        let prod = &(&a(1, 1) + &one) * &(&a(1, 1) - &one);
        assert_eq!(prod.to_string(), "1*a1^2 + -1");
        let residual = &(&prod - &(&a(1, 1) * &a(1, 1))) + &one;
        assert!(residual.is_zero());
        assert!(ParamPoly::zero(3).is_zero());
        assert!(!a(3, 3).is_zero());
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let err = a(1, 2).checked_add(&a(1, 3)).unwrap_err();
        assert_eq!(err, Error::ArityMismatch { left: 2, right: 3 });
        assert!(a(1, 2).checked_mul(&ParamPoly::one(0)).is_err());
        assert!(ParamPoly::param(3, 2).is_err());
    }

    #[test]
    fn printing_is_canonical() {
        let p = &(&a(2, 2) + &a(1, 2).scale(&Rational::frac(-1, 4))) + &(&(&a(1, 2) * &a(2, 2)) + &c(3, 4, 2));
        assert_eq!(p.to_string(), "1*a1*a2 + -1/4*a1 + 1*a2 + 3/4");
        assert_eq!(ParamPoly::parse(&p.to_string(), 2).unwrap(), p);
        assert_eq!(c(-3, 16, 0).to_string(), "-3/16");
        assert_eq!(ParamPoly::zero(4).to_string(), "0");
        assert_eq!(ParamPoly::parse("0", 4).unwrap(), ParamPoly::zero(4));
    }

    #[test]
    fn eval_and_specialize() {
        let p = &(&a(1, 2) * &a(1, 2)) + &a(2, 2).scale(&Rational::from_int(3));
        let v = [Rational::frac(1, 2), Rational::from_int(-1)];
        assert_eq!(p.eval(&v).unwrap(), Rational::frac(-11, 4));
        assert_eq!(p.specialize(&v).unwrap().as_constant(), Some(Rational::frac(-11, 4)));
        assert!(p.eval(&v[..1]).is_err());
    }
}
