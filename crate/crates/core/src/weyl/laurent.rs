use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use hashbrown::HashMap;
use smallvec::SmallVec;

use super::AlgebraSignature;
use crate::coeff::{ParamPoly, Rational};
use crate::text::split_top_level;
use crate::{Error, Result};

pub(crate) type PosExp = SmallVec<[i16; 12]>;

/// (Laurent) polynomial in the position variables: the functions operators
/// act on. Negative powers are allowed only on localized variables.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    sig: Arc<AlgebraSignature>,
    terms: Vec<(PosExp, ParamPoly)>,
}

fn pos_order(a: &[i16], b: &[i16]) -> Ordering {
    let da: i32 = a.iter().map(|&e| e as i32).sum();
    let db: i32 = b.iter().map(|&e| e as i32).sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

impl LaurentPoly {
    pub fn zero(sig: &Arc<AlgebraSignature>) -> Self {
        LaurentPoly { sig: sig.clone(), terms: Vec::new() }
    }

    /// Builds from `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I>(sig: &Arc<AlgebraSignature>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i16>, ParamPoly)>,
    {
        let mut acc: HashMap<PosExp, ParamPoly> = HashMap::new();
        for (e, c) in terms {
            if e.len() != sig.num_vars() {
                return Err(Error::InvalidContext("exponent vector length does not match signature"));
            }
            if c.arity() != sig.num_params() {
                return Err(Error::ArityMismatch { left: sig.num_params(), right: c.arity() });
            }
            acc.entry(e.into_iter().collect())
                .or_insert_with(|| ParamPoly::zero(sig.num_params()))
                .add_scaled(&c, &Rational::ONE);
        }
        Self::from_map(sig.clone(), acc)
    }

    pub(crate) fn from_map(sig: Arc<AlgebraSignature>, acc: HashMap<PosExp, ParamPoly>) -> Result<Self> {
        let flags = sig.localized_flags();
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        for (e, _) in &terms {
            for (i, &k) in e.iter().enumerate() {
                if k < 0 && !flags[i] {
                    return Err(Error::NegativeExponent { var: i + 1 });
                }
            }
        }
        terms.sort_unstable_by(|a, b| pos_order(&a.0, &b.0));
        Ok(LaurentPoly { sig, terms })
    }

    pub fn signature(&self) -> &Arc<AlgebraSignature> {
        &self.sig
    }

    pub fn terms(&self) -> impl ExactSizeIterator<Item = (&[i16], &ParamPoly)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `self + k * other`.
    pub fn add_scaled(&self, other: &Self, k: &Rational) -> Result<Self> {
        if *self.sig != *other.sig {
            return Err(Error::SignatureMismatch);
        }
        let mut acc: HashMap<PosExp, ParamPoly> = self.terms.iter().cloned().collect();
        for (e, c) in &other.terms {
            acc.entry(e.clone())
                .or_insert_with(|| ParamPoly::zero(self.sig.num_params()))
                .add_scaled(c, k);
        }
        Self::from_map(self.sig.clone(), acc)
    }

    /// Value at `point` with parameters set to `params`. Localized
    /// coordinates raised to negative powers must be nonzero.
    pub fn eval(&self, point: &[Rational], params: &[Rational]) -> Result<Rational> {
        if point.len() != self.sig.num_vars() {
            return Err(Error::InvalidContext("point dimension does not match signature"));
        }
        let mut acc = Rational::ZERO;
        for (e, c) in &self.terms {
            let mut t = c.eval(params)?;
            for (p, &k) in point.iter().zip(e.iter()) {
                if k != 0 {
                    t *= &p.pow(k as i32)?;
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    pub fn parse(sig: &Arc<AlgebraSignature>, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero(sig));
        }
        let m = sig.num_vars();
        let mut terms = Vec::new();
        for term in split_top_level(s, " + ") {
            let mut factors = split_top_level(term, " * ").into_iter();
            let head = factors.next().unwrap_or("");
            let inner = head.strip_prefix('(').and_then(|h| h.strip_suffix(')')).unwrap_or(head);
            let coeff = ParamPoly::parse(inner, sig.num_params())?;
            let mut e = alloc::vec![0i16; m];
            for f in factors {
                let bad = || Error::Parse(format!("invalid factor {f:?}"));
                let (name, power) = match f.split_once('^') {
                    Some((n, p)) => (n, p.parse::<i16>().map_err(|_| bad())?),
                    None => (f, 1),
                };
                let idx: usize = name.strip_prefix('x').and_then(|i| i.parse().ok()).ok_or_else(bad)?;
                crate::check_index(idx, m)?;
                e[idx - 1] += power;
            }
            terms.push((e, coeff));
        }
        Self::from_terms(sig, terms)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match c.as_constant() {
                Some(v) if !v.is_negative() => write!(f, "{v}")?,
                _ => write!(f, "({c})")?,
            }
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, " * x{}", v + 1)?,
                    _ => write!(f, " * x{}^{}", v + 1, k)?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
