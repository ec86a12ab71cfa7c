use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use hashbrown::HashMap;
use smallvec::SmallVec;

use super::{binomial, falling_factorial, monomial_order, rational_from_i128, AlgebraSignature, ExpVec, LaurentPoly, Monomial};
use crate::coeff::{ParamPoly, Rational};
use crate::text::split_top_level;
use crate::{Error, Result};

/// Sparse sum of normal-ordered monomials with parameter-polynomial
/// coefficients. Terms are sorted by [`monomial_order`] and never carry a
/// zero coefficient, so `==` is exact operator equality.
#[derive(Clone)]
pub struct Operator {
    sig: Arc<AlgebraSignature>,
    terms: Vec<(Monomial, ParamPoly)>,
}

impl PartialEq for Operator {
    fn eq(&self, other: &Self) -> bool {
        self.same_algebra(other) && self.terms == other.terms
    }
}

impl Eq for Operator {}

type Accumulator = HashMap<Monomial, ParamPoly>;

impl Operator {
    pub fn zero(sig: &Arc<AlgebraSignature>) -> Self {
        Operator { sig: sig.clone(), terms: Vec::new() }
    }

    pub fn constant(sig: &Arc<AlgebraSignature>, value: Rational) -> Self {
        Self::from_coeff(sig, ParamPoly::constant(value, sig.num_params()))
    }

    pub fn one(sig: &Arc<AlgebraSignature>) -> Self {
        Self::constant(sig, Rational::ONE)
    }

    /// Multiplication by a parameter-polynomial scalar.
    pub fn from_coeff(sig: &Arc<AlgebraSignature>, coeff: ParamPoly) -> Self {
        assert_eq!(coeff.arity(), sig.num_params(), "parameter arity mismatch");
        let mut terms = Vec::new();
        if !coeff.is_zero() {
            terms.push((Monomial::identity(sig.num_vars()), coeff));
        }
        Operator { sig: sig.clone(), terms }
    }

    /// The parameter `a_index` as a scalar operator.
    pub fn param(sig: &Arc<AlgebraSignature>, index: usize) -> Result<Self> {
        Ok(Self::from_coeff(sig, ParamPoly::param(index, sig.num_params())?))
    }

    /// `x_var^power`; negative powers need a localized variable.
    pub fn x_pow(sig: &Arc<AlgebraSignature>, var: usize, power: i16) -> Result<Self> {
        crate::check_index(var, sig.num_vars())?;
        let mut exps = Monomial::identity(sig.num_vars()).exps;
        exps[var - 1] = power;
        Self::single(sig, Monomial::from_exps(exps))
    }

    pub fn x(sig: &Arc<AlgebraSignature>, var: usize) -> Result<Self> {
        Self::x_pow(sig, var, 1)
    }

    /// `d_var^power`.
    pub fn d_pow(sig: &Arc<AlgebraSignature>, var: usize, power: u16) -> Result<Self> {
        crate::check_index(var, sig.num_vars())?;
        let power = i16::try_from(power).map_err(|_| Error::ExponentOverflow)?;
        let m = sig.num_vars();
        let mut exps = Monomial::identity(m).exps;
        exps[m + var - 1] = power;
        Self::single(sig, Monomial::from_exps(exps))
    }

    pub fn d(sig: &Arc<AlgebraSignature>, var: usize) -> Result<Self> {
        Self::d_pow(sig, var, 1)
    }

    fn single(sig: &Arc<AlgebraSignature>, mono: Monomial) -> Result<Self> {
        mono.validate(sig)?;
        Ok(Operator { sig: sig.clone(), terms: alloc::vec![(mono, ParamPoly::one(sig.num_params()))] })
    }

    /// Builds an operator from arbitrary terms, merging duplicates and
    /// validating every monomial.
    pub fn from_terms<I>(sig: &Arc<AlgebraSignature>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, ParamPoly)>,
    {
        let mut acc = Accumulator::default();
        for (mono, c) in terms {
            mono.validate(sig)?;
            if c.arity() != sig.num_params() {
                return Err(Error::ArityMismatch { left: sig.num_params(), right: c.arity() });
            }
            acc.entry(mono)
                .or_insert_with(|| ParamPoly::zero(sig.num_params()))
                .add_scaled(&c, &Rational::ONE);
        }
        Ok(Self::from_accumulator(sig.clone(), acc))
    }

    fn from_accumulator(sig: Arc<AlgebraSignature>, acc: Accumulator) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| monomial_order(&a.0, &b.0));
        Operator { sig, terms }
    }

    pub fn signature(&self) -> &Arc<AlgebraSignature> {
        &self.sig
    }

    pub fn terms(&self) -> &[(Monomial, ParamPoly)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of `mono` (zero if absent).
    pub fn coefficient(&self, mono: &Monomial) -> ParamPoly {
        self.terms
            .binary_search_by(|(m, _)| monomial_order(m, mono))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| ParamPoly::zero(self.sig.num_params()))
    }

    /// `Some(c)` if the operator is multiplication by the scalar `c`.
    pub fn as_scalar(&self) -> Option<ParamPoly> {
        match self.terms.as_slice() {
            [] => Some(ParamPoly::zero(self.sig.num_params())),
            [(m, c)] if m.is_identity() => Some(c.clone()),
            _ => None,
        }
    }

    /// Largest total derivative order over all terms.
    pub fn derivative_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.derivative_degree()).max().unwrap_or(0)
    }

    /// Per-variable maximum derivative exponent.
    pub fn max_derivative_exponents(&self) -> Vec<u16> {
        let mut out = alloc::vec![0u16; self.sig.num_vars()];
        for (m, _) in &self.terms {
            for (o, &b) in out.iter_mut().zip(m.dexp()) {
                *o = (*o).max(b as u16);
            }
        }
        out
    }

    fn same_algebra(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.sig, &other.sig) || *self.sig == *other.sig
    }

    fn check_sig(&self, other: &Self) -> Result<()> {
        if self.same_algebra(other) {
            Ok(())
        } else {
            Err(Error::SignatureMismatch)
        }
    }

    /// `self + k * other`.
    pub fn try_add_scaled(&self, other: &Self, k: &Rational) -> Result<Self> {
        self.check_sig(other)?;
        if k.is_zero() || other.is_zero() {
            return Ok(self.clone());
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut left = self.terms.iter().peekable();
        let mut right = other.terms.iter().peekable();
        loop {
            match (left.peek(), right.peek()) {
                (Some(l), Some(r)) => match monomial_order(&l.0, &r.0) {
                    core::cmp::Ordering::Less => out.push(left.next().unwrap().clone()),
                    core::cmp::Ordering::Greater => {
                        let (m, c) = right.next().unwrap();
                        out.push((m.clone(), c.scale(k)));
                    }
                    core::cmp::Ordering::Equal => {
                        let (m, c) = left.next().unwrap();
                        let (_, c2) = right.next().unwrap();
                        let mut s = c.clone();
                        s.add_scaled(c2, k);
                        if !s.is_zero() {
                            out.push((m.clone(), s));
                        }
                    }
                },
                (Some(_), None) => out.push(left.next().unwrap().clone()),
                (None, Some(_)) => {
                    let (m, c) = right.next().unwrap();
                    out.push((m.clone(), c.scale(k)));
                }
                (None, None) => break,
            }
        }
        Ok(Operator { sig: self.sig.clone(), terms: out })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.try_add_scaled(other, &Rational::ONE)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add_scaled(other, &-Rational::ONE)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(&self.sig);
        }
        Operator {
            sig: self.sig.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.scale(k))).collect(),
        }
    }

    pub fn scale_poly(&self, k: &ParamPoly) -> Result<Self> {
        if k.arity() != self.sig.num_params() {
            return Err(Error::ArityMismatch { left: self.sig.num_params(), right: k.arity() });
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c * k))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(Operator { sig: self.sig.clone(), terms })
    }

    /// Exact noncommutative product `self * other`, renormal-ordered.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_sig(other)?;
        let m = self.sig.num_vars();
        let mut acc = Accumulator::with_capacity(self.terms.len() * other.terms.len());
        let mut choices: Vec<(usize, SmallVec<[(i16, Rational); 4]>)> = Vec::new();
        for (ma, ca) in &self.terms {
            let (ax, ad) = (ma.xexp(), ma.dexp());
            for (mb, cb) in &other.terms {
                let (bx, bd) = (mb.xexp(), mb.dexp());
                let coeff = ca * cb;
                let mut base: ExpVec = ExpVec::with_capacity(2 * m);
                for i in 0..m {
                    base.push(ax[i].checked_add(bx[i]).ok_or(Error::ExponentOverflow)?);
                }
                for i in 0..m {
                    base.push(ad[i].checked_add(bd[i]).ok_or(Error::ExponentOverflow)?);
                }
                // d_i^b x_i^k reorders only where both are present
                choices.clear();
                for i in 0..m {
                    let (b, k) = (ad[i], bx[i]);
                    if b > 0 && k != 0 {
                        let smax = if k > 0 { b.min(k) } else { b };
                        let opts = (1..=smax)
                            .map(|s| {
                                let f = falling_factorial(k as i64, s as u32);
                                (s, &f * &rational_from_i128(binomial(b as u32, s as u32)))
                            })
                            .collect();
                        choices.push((i, opts));
                    }
                }
                if choices.is_empty() {
                    acc.entry(Monomial::from_exps(base))
                        .or_insert_with(|| ParamPoly::zero(coeff.arity()))
                        .add_scaled(&coeff, &Rational::ONE);
                    continue;
                }
                expand_choices(&mut acc, &base, m, &choices, 0, &Rational::ONE, &coeff);
            }
        }
        let out = Self::from_accumulator(self.sig.clone(), acc);
        for (mono, _) in &out.terms {
            mono.validate(&out.sig)?;
        }
        Ok(out)
    }

    /// `self * other - other * self`.
    pub fn try_commutator(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    /// Panicking form of [`Operator::try_commutator`] for operators known to
    /// share a signature.
    pub fn commutator(&self, other: &Self) -> Self {
        self.try_commutator(other).expect("commutator of operators from different algebras")
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.sig);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes concrete values for the parameters.
    pub fn specialize(&self, values: &[Rational]) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let v = c.specialize(values)?;
            if !v.is_zero() {
                terms.push((m.clone(), v));
            }
        }
        Ok(Operator { sig: self.sig.clone(), terms })
    }

    /// Acts on `f` as a differential operator.
    pub fn apply(&self, f: &LaurentPoly) -> Result<LaurentPoly> {
        if **f.signature() != *self.sig {
            return Err(Error::SignatureMismatch);
        }
        let m = self.sig.num_vars();
        let arity = self.sig.num_params();
        let mut acc: HashMap<super::laurent::PosExp, ParamPoly> = HashMap::new();
        for (mono, c) in &self.terms {
            let (ax, ad) = (mono.xexp(), mono.dexp());
            'f: for (fe, fc) in f.terms() {
                let mut factor = Rational::ONE;
                let mut e = super::laurent::PosExp::with_capacity(m);
                for i in 0..m {
                    let k = fe[i] as i64;
                    let b = ad[i];
                    if b > 0 {
                        let ff = falling_factorial(k, b as u32);
                        if ff.is_zero() {
                            continue 'f;
                        }
                        factor = &factor * &ff;
                    }
                    let ne = fe[i] as i32 - b as i32 + ax[i] as i32;
                    e.push(i16::try_from(ne).map_err(|_| Error::ExponentOverflow)?);
                }
                let coeff = c * fc;
                acc.entry(e).or_insert_with(|| ParamPoly::zero(arity)).add_scaled(&coeff, &factor);
            }
        }
        LaurentPoly::from_map(f.signature().clone(), acc)
    }

    /// Parses the textual operator format produced by `Display`.
    pub fn parse(sig: &Arc<AlgebraSignature>, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero(sig));
        }
        let m = sig.num_vars();
        let arity = sig.num_params();
        let mut terms = Vec::new();
        for term in split_top_level(s, " + ") {
            let mut factors = split_top_level(term, " * ").into_iter();
            let head = factors.next().unwrap_or("");
            let coeff = match head.strip_prefix('(').and_then(|h| h.strip_suffix(')')) {
                Some(inner) => ParamPoly::parse(inner, arity)?,
                None => ParamPoly::parse(head, arity)?,
            };
            let mut exps = Monomial::identity(m).exps;
            for f in factors {
                let bad = || Error::Parse(format!("invalid operator factor {f:?}"));
                let (name, power) = match f.split_once('^') {
                    Some((n, p)) => (n, p.parse::<i16>().map_err(|_| bad())?),
                    None => (f, 1),
                };
                let (kind, idx) = name.split_at(1.min(name.len()));
                let idx: usize = idx.parse().map_err(|_| bad())?;
                crate::check_index(idx, m)?;
                let slot = match kind {
                    "x" => idx - 1,
                    "d" => m + idx - 1,
                    _ => return Err(bad()),
                };
                exps[slot] = exps[slot].checked_add(power).ok_or(Error::ExponentOverflow)?;
            }
            terms.push((Monomial::from_exps(exps), coeff));
        }
        Self::from_terms(sig, terms)
    }
}

#[allow(clippy::too_many_arguments)]
fn expand_choices(
    acc: &mut Accumulator,
    exps: &ExpVec,
    m: usize,
    choices: &[(usize, SmallVec<[(i16, Rational); 4]>)],
    depth: usize,
    factor: &Rational,
    coeff: &ParamPoly,
) {
    if depth == choices.len() {
        acc.entry(Monomial::from_exps(exps.clone()))
            .or_insert_with(|| ParamPoly::zero(coeff.arity()))
            .add_scaled(coeff, factor);
        return;
    }
    let (var, opts) = &choices[depth];
    // s = 0 keeps the factor unchanged
    expand_choices(acc, exps, m, choices, depth + 1, factor, coeff);
    let mut shifted = exps.clone();
    for (s, f) in opts {
        shifted[*var] = exps[*var] - s;
        shifted[m + *var] = exps[m + *var] - s;
        expand_choices(acc, &shifted, m, choices, depth + 1, &(factor * f), coeff);
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, c: &ParamPoly) -> fmt::Result {
    match c.as_constant() {
        Some(v) if !v.is_negative() => write!(f, "{v}"),
        _ => write!(f, "({c})"),
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (mono, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write_coeff(f, c)?;
            if !mono.is_identity() {
                write!(f, " * {mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &Operator {
    type Output = Operator;

    fn add(self, rhs: &Operator) -> Operator {
        self.try_add(rhs).expect("sum of operators from different algebras")
    }
}

impl Sub for &Operator {
    type Output = Operator;

    fn sub(self, rhs: &Operator) -> Operator {
        self.try_sub(rhs).expect("difference of operators from different algebras")
    }
}

impl Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        self.try_mul(rhs).expect("product of operators from different algebras")
    }
}

impl Neg for &Operator {
    type Output = Operator;

    fn neg(self) -> Operator {
        self.scale(&-Rational::ONE)
    }
}
