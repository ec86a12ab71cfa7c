//! Sparse normal-ordered operators in the (localized) Weyl algebra.
//!
//! A monomial `x1^a1 ... xm^am d1^b1 ... dm^bm` always has every position
//! factor to the left of every derivative, so the exponent vectors are a
//! complete description. Products are renormal-ordered with
//!
//! ```text
//! d^b x^k = sum_{s=0..b} binom(b, s) k(k-1)...(k-s+1) x^(k-s) d^(b-s)
//! ```
//!
//! per variable, which holds for negative `k` as well; that is all the
//! localized algebra needs.

mod laurent;
mod operator;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use smallvec::SmallVec;

pub(crate) use laurent::PosExp;
pub use laurent::LaurentPoly;
pub use operator::Operator;

use crate::{Error, Result};

/// Which algebra an [`Operator`] lives in.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgebraSignature {
    num_vars: usize,
    localized: Vec<bool>,
    params: Vec<String>,
}

impl AlgebraSignature {
    /// Polynomial Weyl algebra in `num_vars` variables with rational
    /// coefficients.
    pub fn polynomial(num_vars: usize) -> Result<Self> {
        Self::new(num_vars, &[], 0)
    }

    /// `localized` lists the (1-based) variables allowed negative powers;
    /// coefficients are polynomials in `num_params` parameters `a1..`.
    pub fn new(num_vars: usize, localized: &[usize], num_params: usize) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::InvalidContext("an algebra needs at least one variable"));
        }
        if num_vars > i16::MAX as usize {
            return Err(Error::InvalidContext("too many variables"));
        }
        let mut flags = alloc::vec![false; num_vars];
        for &v in localized {
            crate::check_index(v, num_vars)?;
            flags[v - 1] = true;
        }
        Ok(AlgebraSignature {
            num_vars,
            localized: flags,
            params: (1..=num_params).map(|i| format!("a{i}")).collect(),
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// 1-based.
    pub fn is_localized(&self, var: usize) -> bool {
        var >= 1 && var <= self.num_vars && self.localized[var - 1]
    }

    pub(crate) fn localized_flags(&self) -> &[bool] {
        &self.localized
    }
}

impl fmt::Debug for AlgebraSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let loc: Vec<usize> = (1..=self.num_vars).filter(|&v| self.is_localized(v)).collect();
        write!(f, "Weyl(m={}, localized={:?}, params={})", self.num_vars, loc, self.params.len())
    }
}

/// Small closed-form identities exercising the reordering rule: canonical
/// commutation relations, a cross-variable product and localized powers.
pub fn self_test_identities() -> Vec<crate::report::Identity> {
    use crate::expr::Expr;
    use crate::report::{Identity, RelationId};
    use alloc::sync::Arc;

    let mut out = Vec::new();
    let mut push = |lhs: Expr, rhs: Expr| {
        let k = out.len() + 1;
        out.push(Identity::new(RelationId::WeylSelfTest, alloc::vec![k], lhs, rhs));
    };
    let poly = Arc::new(AlgebraSignature::polynomial(3).expect("valid signature"));
    let x = |i| Expr::op(Operator::x(&poly, i).expect("valid variable"));
    let d = |i| Expr::op(Operator::d(&poly, i).expect("valid variable"));
    let zero = Expr::op(Operator::zero(&poly));
    for i in 1..=3 {
        for j in 1..=3 {
            let rhs = if i == j { Expr::op(Operator::one(&poly)) } else { zero.clone() };
            push(Expr::commutator(d(i), x(j)), rhs);
            if i < j {
                push(Expr::commutator(x(i), x(j)), zero.clone());
                push(Expr::commutator(d(i), d(j)), zero.clone());
            }
        }
    }
    let parse = |sig: &Arc<AlgebraSignature>, s: &str| Expr::op(Operator::parse(sig, s).expect("valid literal"));
    push(
        Expr::Product(alloc::vec![x(1), d(2), x(2), d(1)]),
        parse(&poly, "1 * x1 * x2 * d1 * d2 + 1 * x1 * d1"),
    );
    push(
        Expr::product(parse(&poly, "1 * d1^2"), parse(&poly, "1 * x1^2")),
        parse(&poly, "1 * x1^2 * d1^2 + 4 * x1 * d1 + 2"),
    );
    let loc = Arc::new(AlgebraSignature::new(2, &[1], 0).expect("valid signature"));
    push(
        Expr::product(parse(&loc, "1 * d1"), parse(&loc, "1 * x1^-1")),
        parse(&loc, "1 * x1^-1 * d1 + -1 * x1^-2"),
    );
    push(Expr::commutator(parse(&loc, "1 * d1"), parse(&loc, "1 * x1^-2")), parse(&loc, "-2 * x1^-3"));
    push(
        Expr::commutator(parse(&loc, "1 * d1^2"), parse(&loc, "1 * x1^-2")),
        parse(&loc, "-4 * x1^-3 * d1 + 6 * x1^-4"),
    );
    out
}

pub(crate) type ExpVec = SmallVec<[i16; 24]>;

/// Normal-ordered monomial: position exponents followed by derivative
/// exponents in one buffer of length `2m`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: ExpVec,
}

impl Monomial {
    pub fn identity(num_vars: usize) -> Self {
        Monomial { exps: core::iter::repeat(0).take(2 * num_vars).collect() }
    }

    /// Exponents are validated against the signature.
    pub fn new(sig: &AlgebraSignature, x: &[i16], d: &[i16]) -> Result<Self> {
        let m = sig.num_vars;
        if x.len() != m || d.len() != m {
            return Err(Error::InvalidContext("exponent vector length does not match signature"));
        }
        let mono = Monomial { exps: x.iter().chain(d).copied().collect() };
        mono.validate(sig)?;
        Ok(mono)
    }

    pub(crate) fn from_exps(exps: ExpVec) -> Self {
        Monomial { exps }
    }

    pub(crate) fn validate(&self, sig: &AlgebraSignature) -> Result<()> {
        let m = sig.num_vars;
        if self.exps.len() != 2 * m {
            return Err(Error::SignatureMismatch);
        }
        for i in 0..m {
            if self.exps[i] < 0 && !sig.localized[i] {
                return Err(Error::NegativeExponent { var: i + 1 });
            }
            if self.exps[m + i] < 0 {
                return Err(Error::InvalidContext("negative derivative exponent"));
            }
        }
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.exps.len() / 2
    }

    /// Position exponents `x1..xm`.
    pub fn xexp(&self) -> &[i16] {
        &self.exps[..self.num_vars()]
    }

    /// Derivative exponents `d1..dm`.
    pub fn dexp(&self) -> &[i16] {
        &self.exps[self.num_vars()..]
    }

    pub fn derivative_degree(&self) -> u32 {
        self.dexp().iter().map(|&b| b as u32).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

/// Canonical monomial order (graded lexicographic on the concatenated
/// exponent vector, larger first).
pub fn monomial_order(a: &Monomial, b: &Monomial) -> Ordering {
    let da: i32 = a.exps.iter().map(|&e| e as i32).sum();
    let db: i32 = b.exps.iter().map(|&e| e as i32).sum();
    db.cmp(&da).then_with(|| b.exps.cmp(&a.exps))
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut put = |f: &mut fmt::Formatter<'_>, name: char, i: usize, e: i16| -> fmt::Result {
            if !first {
                f.write_str(" * ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{name}{i}")
            } else {
                write!(f, "{name}{i}^{e}")
            }
        };
        for (i, &e) in self.xexp().iter().enumerate() {
            if e != 0 {
                put(f, 'x', i + 1, e)?;
            }
        }
        for (i, &e) in self.dexp().iter().enumerate() {
            if e != 0 {
                put(f, 'd', i + 1, e)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `k (k-1) ... (k-s+1)`, exact for any integer `k`.
pub(crate) fn falling_factorial(k: i64, s: u32) -> crate::Rational {
    let mut acc: i128 = 1;
    for t in 0..s as i64 {
        match acc.checked_mul((k - t) as i128) {
            Some(v) => acc = v,
            None => return falling_factorial_big(k, s),
        }
    }
    rational_from_i128(acc)
}

fn falling_factorial_big(k: i64, s: u32) -> crate::Rational {
    let mut acc = crate::Rational::ONE;
    for t in 0..s as i64 {
        acc = &acc * &crate::Rational::from_int(k - t);
    }
    acc
}

pub(crate) fn binomial(n: u32, k: u32) -> i128 {
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

pub(crate) fn rational_from_i128(v: i128) -> crate::Rational {
    if v > i64::MIN as i128 && v <= i64::MAX as i128 {
        crate::Rational::from_int(v as i64)
    } else {
        crate::Rational::from(num_bigint::BigInt::from(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn falling_factorials() {
        assert_eq!(falling_factorial(5, 0), crate::Rational::ONE);
        assert_eq!(falling_factorial(5, 2), crate::Rational::from_int(20));
        assert_eq!(falling_factorial(2, 3), crate::Rational::ZERO);
        // (-1)(-2)(-3) = -6
        assert_eq!(falling_factorial(-1, 3), crate::Rational::from_int(-6));
        assert_eq!(falling_factorial(-2, 2), crate::Rational::from_int(6));
        assert_eq!(binomial(6, 2), 15);
        assert_eq!(binomial(4, 4), 1);
    }

    #[test]
    fn self_tests_pass() {
        let ids = self_test_identities();
        assert_eq!(ids.len(), 20);
        for id in &ids {
            assert!(id.check().passed, "{:?}", id.tuple);
        }
    }

    #[test]
    fn signature_validation() {
        assert!(AlgebraSignature::polynomial(0).is_err());
        assert!(AlgebraSignature::new(2, &[3], 0).is_err());
        let sig = AlgebraSignature::new(2, &[2], 1).unwrap();
        assert!(sig.is_localized(2) && !sig.is_localized(1));
        assert!(Monomial::new(&sig, &[0, -2], &[1, 0]).is_ok());
        assert_eq!(
            Monomial::new(&sig, &[-1, 0], &[0, 0]).unwrap_err(),
            Error::NegativeExponent { var: 1 }
        );
        assert!(Monomial::new(&sig, &[0, 0], &[0, -1]).is_err());
    }
}
