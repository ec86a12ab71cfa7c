//! Point-evaluation cross-checks.
//!
//! Operators are applied to random (Laurent) polynomial test functions and
//! the results evaluated at random rational points. [`Expr::apply`] never
//! multiplies operators, so agreement here is independent evidence that the
//! normal-ordering product is right.
//!
//! The evaluation works on rational-coefficient polynomials with the
//! parameters already substituted, so each trial is a plain numeric
//! computation. Intermediate polynomials are kept as `i128` numerators over
//! a common denominator; a trial that would overflow is redone with
//! arbitrary-precision rationals.
//!
//! Every trial draws from its own ChaCha stream keyed by `(seed, trial)`,
//! so verdicts do not depend on scheduling.

use alloc::sync::Arc;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::{ParamPoly, Rational};
use crate::expr::Expr;
use crate::report::{Identity, Method, RelationReport, ReportEntry, Runner};
use crate::weyl::{falling_factorial, AlgebraSignature, LaurentPoly, Monomial, Operator, PosExp};
use crate::{Error, Result};

const MAX_TERMS: usize = 8;
const MIN_DEGREE: u32 = 4;

/// Coordinates and parameter values for one evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestPoint {
    pub coords: Vec<Rational>,
    pub params: Vec<Rational>,
}

impl TestPoint {
    /// Coordinates are nonzero, so negative powers are always defined.
    pub fn random<R: Rng>(sig: &AlgebraSignature, rng: &mut R) -> Self {
        let coords = (0..sig.num_vars()).map(|_| small_nonzero(rng, 5, 4)).collect();
        let params = (0..sig.num_params())
            .map(|_| Rational::frac(rng.gen_range(-6..=6), rng.gen_range(1..=4)))
            .collect();
        TestPoint { coords, params }
    }
}

fn small_nonzero<R: Rng>(rng: &mut R, num: i64, den: i64) -> Rational {
    let mut p = 0;
    while p == 0 {
        p = rng.gen_range(-num..=num);
    }
    Rational::frac(p, rng.gen_range(1..=den))
}

/// Generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Random test function with at most eight terms. Exponents of variable `v`
/// lie in `[-2, hi[v]]` when `v` is localized and `[0, hi[v]]` otherwise.
pub fn random_test_function<R: Rng>(sig: &Arc<AlgebraSignature>, hi: &[u32], rng: &mut R) -> LaurentPoly {
    let m = sig.num_vars();
    let count = rng.gen_range(1..=MAX_TERMS);
    let terms = (0..count).map(|_| {
        let e: Vec<i16> = (0..m)
            .map(|v| {
                let lo = if sig.is_localized(v + 1) { -2 } else { 0 };
                rng.gen_range(lo..=hi[v] as i16)
            })
            .collect();
        (e, ParamPoly::constant(small_nonzero(rng, 9, 5), sig.num_params()))
    });
    LaurentPoly::from_terms(sig, terms.collect::<Vec<_>>()).expect("exponents respect the signature")
}

/// Random operator with at most `max_terms` terms, derivative orders up to
/// three and, when the signature has parameters, coefficients affine in them.
pub fn random_operator<R: Rng>(sig: &Arc<AlgebraSignature>, max_terms: usize, rng: &mut R) -> Operator {
    let m = sig.num_vars();
    let k = sig.num_params();
    let count = rng.gen_range(1..=max_terms);
    let mut terms = Vec::with_capacity(count);
    for _ in 0..count {
        let x: Vec<i16> = (0..m)
            .map(|v| {
                let lo = if sig.is_localized(v + 1) { -2 } else { 0 };
                rng.gen_range(lo..=3)
            })
            .collect();
        let d: Vec<i16> = (0..m).map(|_| rng.gen_range(0..=3)).collect();
        let mono = Monomial::new(sig, &x, &d).expect("exponents respect the signature");
        let mut c = ParamPoly::constant(small_nonzero(rng, 7, 3), k);
        if k > 0 && rng.gen_bool(0.5) {
            let a = ParamPoly::param(rng.gen_range(1..=k), k).expect("valid parameter");
            c = &c + &a.scale(&small_nonzero(rng, 5, 2));
        }
        terms.push((mono, c));
    }
    Operator::from_terms(sig, terms).expect("valid terms")
}

/// Outcome of a batch of trials.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub trials: usize,
    pub disagreements: usize,
}

impl OracleVerdict {
    pub fn agrees(&self) -> bool {
        self.disagreements == 0
    }
}

type NumPoly = HashMap<PosExp, Rational>;

fn numeric(f: &LaurentPoly, params: &[Rational]) -> Result<NumPoly> {
    let mut out = NumPoly::with_capacity(f.num_terms());
    for (e, c) in f.terms() {
        let v = c.eval(params)?;
        if !v.is_zero() {
            out.insert(e.iter().copied().collect(), v);
        }
    }
    Ok(out)
}

fn add_into(acc: &mut NumPoly, key: PosExp, v: Rational) {
    match acc.entry(key) {
        hashbrown::hash_map::Entry::Occupied(mut o) => {
            *o.get_mut() += &v;
            if o.get().is_zero() {
                o.remove();
            }
        }
        hashbrown::hash_map::Entry::Vacant(slot) => {
            slot.insert(v);
        }
    }
}

/// `acc += k * (op f)` with parameters set to `params`.
fn apply_op(op: &Operator, params: &[Rational], f: &NumPoly, k: &Rational, acc: &mut NumPoly) -> Result<()> {
    let m = op.signature().num_vars();
    for (mono, c) in op.terms() {
        let c = &c.eval(params)? * k;
        if c.is_zero() {
            continue;
        }
        let (ax, ad) = (mono.xexp(), mono.dexp());
        'f: for (fe, fv) in f {
            let mut factor = &c * fv;
            let mut e = PosExp::with_capacity(m);
            for i in 0..m {
                let b = ad[i];
                if b > 0 {
                    let ff = falling_factorial(fe[i] as i64, b as u32);
                    if ff.is_zero() {
                        continue 'f;
                    }
                    factor *= &ff;
                }
                let ne = fe[i] as i32 - b as i32 + ax[i] as i32;
                e.push(i16::try_from(ne).map_err(|_| Error::ExponentOverflow)?);
            }
            add_into(acc, e, factor);
        }
    }
    Ok(())
}

/// `acc += k * (e f)`, following definitions and never multiplying
/// operators.
fn apply_expr(e: &Expr, params: &[Rational], f: &NumPoly, k: &Rational, acc: &mut NumPoly) -> Result<()> {
    match e {
        Expr::Op(op) => apply_op(op, params, f, k, acc),
        Expr::Cached { definition, .. } => apply_expr(definition, params, f, k, acc),
        Expr::Scale(c, inner) => apply_expr(inner, params, f, &(k * c), acc),
        Expr::Sum(items) => items.iter().try_for_each(|item| apply_expr(item, params, f, k, acc)),
        Expr::Product(items) => {
            let (first, rest) = items.split_first().expect("empty product");
            let mut g = f.clone();
            for item in rest.iter().rev() {
                g = apply_num(item, params, &g)?;
            }
            apply_expr(first, params, &g, k, acc)
        }
        Expr::Commutator(a, b) => {
            let bf = apply_num(b, params, f)?;
            let af = apply_num(a, params, f)?;
            apply_expr(a, params, &bf, k, acc)?;
            apply_expr(b, params, &af, &-k, acc)
        }
    }
}

fn apply_num(e: &Expr, params: &[Rational], f: &NumPoly) -> Result<NumPoly> {
    let mut acc = NumPoly::with_capacity(f.len());
    apply_expr(e, params, f, &Rational::ONE, &mut acc)?;
    Ok(acc)
}

fn eval_num(f: &NumPoly, coords: &[Rational]) -> Result<Rational> {
    let mut acc = Rational::ZERO;
    for (e, v) in f {
        let mut t = v.clone();
        for (p, &k) in coords.iter().zip(e.iter()) {
            if k != 0 {
                t *= &p.pow(k as i32)?;
            }
        }
        acc += &t;
    }
    Ok(acc)
}

const KEY_LANES: usize = 16;

/// Packed exponent vector for the integer path.
type Key = [i8; KEY_LANES];

/// Integer numerators over one positive common denominator.
#[derive(Clone, Debug)]
struct IntPoly {
    den: i128,
    terms: HashMap<Key, i128>,
}

fn lcm(a: i128, b: i128) -> Option<i128> {
    (a / a.gcd(&b)).checked_mul(b)
}

impl IntPoly {
    fn from_num(f: &NumPoly) -> Option<Self> {
        let mut den = 1i128;
        for v in f.values() {
            den = lcm(den, v.as_small()?.1 as i128)?;
        }
        let mut terms = HashMap::with_capacity(f.len());
        for (e, v) in f {
            if e.len() > KEY_LANES {
                return None;
            }
            let mut key = [0i8; KEY_LANES];
            for (slot, &x) in key.iter_mut().zip(e.iter()) {
                *slot = i8::try_from(x).ok()?;
            }
            let (n, d) = v.as_small()?;
            terms.insert(key, (n as i128).checked_mul(den / d as i128)?);
        }
        Some(IntPoly { den, terms })
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, v| *v != 0);
        let mut g = self.den;
        for v in self.terms.values() {
            if g == 1 {
                return;
            }
            g = g.gcd(v);
        }
        if g > 1 {
            self.den /= g;
            for v in self.terms.values_mut() {
                *v /= g;
            }
        }
    }

    fn scaled(mut self, k: &Rational) -> Option<Self> {
        let (n, d) = k.as_small()?;
        self.den = self.den.checked_mul(d as i128)?;
        for v in self.terms.values_mut() {
            *v = v.checked_mul(n as i128)?;
        }
        self.normalize();
        Some(self)
    }

    /// `self += sign * other`.
    fn add(&mut self, other: &IntPoly, sign: i128) -> Option<()> {
        let den = lcm(self.den, other.den)?;
        let (ks, ko) = (den / self.den, (den / other.den).checked_mul(sign)?);
        if ks != 1 {
            for v in self.terms.values_mut() {
                *v = v.checked_mul(ks)?;
            }
        }
        self.den = den;
        for (e, v) in &other.terms {
            let add = v.checked_mul(ko)?;
            let slot = self.terms.entry(*e).or_insert(0);
            *slot = slot.checked_add(add)?;
        }
        self.normalize();
        Some(())
    }

    fn eval(&self, coords: &[Rational]) -> Result<Rational> {
        let mut acc = Rational::ZERO;
        for (e, &v) in &self.terms {
            let mut t = Rational::from(num_bigint::BigInt::from(v));
            for (p, &k) in coords.iter().zip(e.iter()) {
                if k != 0 {
                    t *= &p.pow(k as i32)?;
                }
            }
            acc += &t;
        }
        Ok(&acc * &Rational::from(num_bigint::BigInt::from(self.den)).recip()?)
    }
}

fn apply_op_int(op: &Operator, params: &[Rational], f: &IntPoly) -> Option<IntPoly> {
    let m = op.signature().num_vars();
    if m > KEY_LANES {
        return None;
    }
    let mut coeffs = Vec::with_capacity(op.num_terms());
    let mut den = 1i128;
    for (_, c) in op.terms() {
        let (n, d) = c.eval(params).ok()?.as_small()?;
        den = lcm(den, d as i128)?;
        coeffs.push((n, d));
    }
    let mut terms: HashMap<Key, i128> = HashMap::with_capacity(2 * f.terms.len());
    let mut active: Vec<(usize, i8, i8)> = Vec::with_capacity(m);
    for ((mono, _), &(n, d)) in op.terms().iter().zip(&coeffs) {
        if n == 0 {
            continue;
        }
        let c = (n as i128).checked_mul(den / d as i128)?;
        active.clear();
        for (i, (&a, &b)) in mono.xexp().iter().zip(mono.dexp()).enumerate() {
            if a != 0 || b != 0 {
                active.push((i, i8::try_from(a).ok()?, i8::try_from(b).ok()?));
            }
        }
        'f: for (fe, &fv) in &f.terms {
            let mut val = c.checked_mul(fv)?;
            let mut e = *fe;
            for &(i, a, b) in &active {
                let k = fe[i] as i128;
                for s in 0..b as i128 {
                    if k == s {
                        continue 'f;
                    }
                    val = val.checked_mul(k - s)?;
                }
                e[i] = fe[i].checked_sub(b)?.checked_add(a)?;
            }
            let slot = terms.entry(e).or_insert(0);
            *slot = slot.checked_add(val)?;
        }
    }
    let mut out = IntPoly { den: f.den.checked_mul(den)?, terms };
    out.normalize();
    Some(out)
}

fn apply_int(e: &Expr, params: &[Rational], f: &IntPoly) -> Option<IntPoly> {
    match e {
        Expr::Op(op) => apply_op_int(op, params, f),
        Expr::Cached { definition, .. } => apply_int(definition, params, f),
        Expr::Scale(c, inner) => apply_int(inner, params, f)?.scaled(c),
        Expr::Sum(items) => {
            let (first, rest) = items.split_first().expect("empty sum");
            let mut acc = apply_int(first, params, f)?;
            for item in rest {
                acc.add(&apply_int(item, params, f)?, 1)?;
            }
            Some(acc)
        }
        Expr::Product(items) => {
            let mut g = f.clone();
            for item in items.iter().rev() {
                g = apply_int(item, params, &g)?;
            }
            Some(g)
        }
        Expr::Commutator(a, b) => {
            let mut ab = apply_int(a, params, &apply_int(b, params, f)?)?;
            ab.add(&apply_int(b, params, &apply_int(a, params, f)?)?, -1)?;
            Some(ab)
        }
    }
}

/// `(e f)(p)` through the definition-following action.
pub fn evaluate(e: &Expr, f: &LaurentPoly, p: &TestPoint) -> Result<Rational> {
    let nf = numeric(f, &p.params)?;
    if let Some(g) = IntPoly::from_num(&nf).and_then(|fi| apply_int(e, &p.params, &fi)) {
        return g.eval(&p.coords);
    }
    evaluate_exact(e, &nf, p)
}

fn evaluate_exact(e: &Expr, f: &NumPoly, p: &TestPoint) -> Result<Rational> {
    eval_num(&apply_num(e, &p.params, f)?, &p.coords)
}

/// Per-variable exponent ceiling: one above the derivative order of either
/// expanded side, and at least four.
fn degree_bounds(lhs: &Expr, rhs: &Expr) -> Vec<u32> {
    lhs.eval()
        .max_derivative_exponents()
        .into_iter()
        .zip(rhs.eval().max_derivative_exponents())
        .map(|(a, b)| (a.max(b) as u32 + 1).max(MIN_DEGREE))
        .collect()
}

/// Compares `(lhs f)(p)` with `(rhs f)(p)` on `trials` random pairs
/// `(f, p)`; both sides go through [`evaluate`].
pub fn oracle_equiv_expr(
    sig: &Arc<AlgebraSignature>,
    lhs: &Expr,
    rhs: &Expr,
    trials: usize,
    seed: u64,
) -> Result<OracleVerdict> {
    let hi = degree_bounds(lhs, rhs);
    let mut disagreements = 0;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let f = random_test_function(sig, &hi, &mut rng);
        let p = TestPoint::random(sig, &mut rng);
        let a = evaluate(lhs, &f, &p)?;
        let b = evaluate(rhs, &f, &p)?;
        if a != b {
            disagreements += 1;
        }
    }
    Ok(OracleVerdict { trials, disagreements })
}

/// `A f` and `B f` agree at random points for random `f`.
pub fn oracle_equiv(a: &Operator, b: &Operator, trials: usize, seed: u64) -> Result<bool> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch);
    }
    let (ea, eb) = (Expr::op(a.clone()), Expr::op(b.clone()));
    Ok(oracle_equiv_expr(a.signature(), &ea, &eb, trials, seed)?.agrees())
}

/// `(A B) f = A (B f)` at random points: the product computed by the
/// engine against composition of actions.
pub fn oracle_apply_check(a: &Operator, b: &Operator, trials: usize, seed: u64) -> Result<bool> {
    let ab = a.try_mul(b)?;
    let lhs = Expr::op(ab);
    let rhs = Expr::Product(alloc::vec![Expr::op(a.clone()), Expr::op(b.clone())]);
    Ok(oracle_equiv_expr(a.signature(), &lhs, &rhs, trials, seed)?.agrees())
}

/// Oracle entry for every identity; `residual_terms` counts disagreeing
/// trials.
pub fn oracle_report<R: Runner>(identities: &[Identity], trials: usize, seed: u64, runner: &R) -> RelationReport {
    let entries = runner.map(identities, |id| {
        let sig = id.lhs.eval().signature().clone();
        let (verdict, ms) = runner.timed(|| oracle_equiv_expr(&sig, &id.lhs, &id.rhs, trials, seed));
        let disagreements = verdict.map(|v| v.disagreements).unwrap_or(trials);
        ReportEntry {
            relation: id.relation,
            tuple: id.tuple.clone(),
            method: Method::Oracle,
            passed: disagreements == 0,
            residual_terms: disagreements,
            ms,
        }
    });
    let mut report = RelationReport { entries, skipped: Vec::new() };
    report.sort();
    report
}

/// `trials` random instances of `(A B) f = A (B f)` on `sig`, reported as
/// one entry tagged `[num_vars, localized count]`.
pub fn composition_report<R: Runner>(
    sig: &Arc<AlgebraSignature>,
    trials: usize,
    seed: u64,
    runner: &R,
) -> RelationReport {
    let idx: Vec<u64> = (0..trials as u64).collect();
    let (flags, ms) = runner.timed(|| {
        runner.map(&idx, |&t| {
            let mut rng = trial_rng(seed, t);
            let a = random_operator(sig, 4, &mut rng);
            let b = random_operator(sig, 4, &mut rng);
            let f = random_test_function(sig, &alloc::vec![6; sig.num_vars()], &mut rng);
            let p = TestPoint::random(sig, &mut rng);
            let lhs = Expr::op(a.try_mul(&b).expect("same signature"));
            let rhs = Expr::Product(alloc::vec![Expr::op(a), Expr::op(b)]);
            let agree = matches!((evaluate(&lhs, &f, &p), evaluate(&rhs, &f, &p)), (Ok(x), Ok(y)) if x == y);
            !agree
        })
    });
    let failures = flags.into_iter().filter(|&bad| bad).count();
    let localized = (1..=sig.num_vars()).filter(|&v| sig.is_localized(v)).count();
    RelationReport {
        entries: alloc::vec![ReportEntry {
            relation: crate::report::RelationId::Composition,
            tuple: alloc::vec![sig.num_vars(), localized],
            method: Method::Oracle,
            passed: failures == 0,
            residual_terms: failures,
            ms,
        }],
        skipped: Vec::new(),
    }
}
