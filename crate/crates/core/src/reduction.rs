//! Reduced realization on `n` radial variables with free parameters
//! `a1..an`:
//!
//! ```text
//! J+^i = x_i^2 / 2
//! J-^i = (d_i^2 + a_i / x_i^2) / 2
//! J0^i = (x_i d_i + 1/2) / 2
//! ```
//!
//! Its total Casimir carries the Hamiltonian of the generic superintegrable
//! model on the sphere, and the pair Casimirs give its conserved quantities
//! `Q_ij = J_ij^2 + a_i x_j^2/x_i^2 + a_j x_i^2/x_j^2` with
//! `J_ij = x_i d_j - x_j d_i`.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::{ParamPoly, Rational};
use crate::expr::Expr;
use crate::liealg::Su11Triple;
use crate::racah::{distinct_tuples, verify_family, RacahFamily};
use crate::report::{verify_identities, Identity, RacahRelation, RelationId, RelationReport, Runner};
use crate::weyl::{AlgebraSignature, Operator};
use crate::{check_index, Error, Result};

/// Localized Weyl algebra on `x1..xn` with parameters `a1..an`.
#[derive(Clone, Debug)]
pub struct ReducedContext {
    n: usize,
    sig: Arc<AlgebraSignature>,
    singles: Vec<Su11Triple>,
}

impl ReducedContext {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidContext("reduced context needs n >= 2"));
        }
        let all: Vec<usize> = (1..=n).collect();
        let sig = Arc::new(AlgebraSignature::new(n, &all, n)?);
        let singles = (1..=n).map(|i| reduced_triple(&sig, i)).collect::<Result<_>>()?;
        Ok(ReducedContext { n, sig, singles })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn signature(&self) -> &Arc<AlgebraSignature> {
        &self.sig
    }

    fn coupled(&self, factors: &[usize]) -> Su11Triple {
        let mut it = factors.iter();
        let mut acc = self.singles[it.next().expect("nonempty") - 1].clone();
        for &i in it {
            acc = acc.sum(&self.singles[i - 1]);
        }
        acc
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        check_index(i, self.n)?;
        check_index(j, self.n)?;
        if i == j {
            return Err(Error::RepeatedIndex(i));
        }
        if i > j {
            return Err(Error::InvalidContext("pair expects i < j"));
        }
        Ok(())
    }

    fn scalar(&self, c: ParamPoly) -> Expr {
        Expr::op(Operator::from_coeff(&self.sig, c))
    }

    fn a(&self, i: usize) -> ParamPoly {
        ParamPoly::param(i, self.n).expect("valid parameter")
    }

    fn constant(&self, r: Rational) -> ParamPoly {
        ParamPoly::constant(r, self.n)
    }
}

fn reduced_triple(sig: &Arc<AlgebraSignature>, i: usize) -> Result<Su11Triple> {
    let half = Rational::frac(1, 2);
    let x = Operator::x(sig, i)?;
    let d = Operator::d(sig, i)?;
    let potential = Operator::param(sig, i)?.try_mul(&Operator::x_pow(sig, i, -2)?)?;
    let plus = (&x * &x).scale(&half);
    let minus = (&(&d * &d) + &potential).scale(&half);
    let zero = (&(&x * &d) + &Operator::constant(sig, half.clone())).scale(&half);
    Ok(Su11Triple::new(plus, minus, zero))
}

/// The reduced triple on factor `i`.
pub fn make_reduced_j(ctx: &ReducedContext, i: usize) -> Result<Su11Triple> {
    check_index(i, ctx.n)?;
    Ok(ctx.singles[i - 1].clone())
}

/// `J_ij = x_i d_j - x_j d_i`.
pub fn rotation(ctx: &ReducedContext, i: usize, j: usize) -> Result<Operator> {
    let sig = &ctx.sig;
    let a = Operator::x(sig, i)?.try_mul(&Operator::d(sig, j)?)?;
    let b = Operator::x(sig, j)?.try_mul(&Operator::d(sig, i)?)?;
    a.try_sub(&b)
}

pub fn reduced_casimir_single(ctx: &ReducedContext, i: usize) -> Result<Operator> {
    Ok((*make_reduced_j(ctx, i)?.casimir_expr().eval()).clone())
}

/// `-(a_i + 3/4)/4`.
pub fn single_closed_form(ctx: &ReducedContext, i: usize) -> Result<Operator> {
    check_index(i, ctx.n)?;
    let c = &ctx.a(i).scale(&Rational::frac(-1, 4)) + &ctx.constant(Rational::frac(-3, 16));
    Ok(Operator::from_coeff(&ctx.sig, c))
}

pub fn reduced_casimir_pair(ctx: &ReducedContext, i: usize, j: usize) -> Result<Operator> {
    ctx.check_pair(i, j)?;
    Ok((*ctx.coupled(&[i, j]).casimir_expr().eval()).clone())
}

fn ratio(ctx: &ReducedContext, num: usize, den: usize, coeff: ParamPoly) -> Expr {
    let sig = &ctx.sig;
    let mono = Operator::x_pow(sig, num, 2)
        .and_then(|x| x.try_mul(&Operator::x_pow(sig, den, -2)?))
        .expect("localized variables");
    Expr::product(ctx.scalar(coeff), Expr::op(mono))
}

/// `J_ij^2 + a_i x_j^2/x_i^2 + a_j x_i^2/x_j^2`, unexpanded.
fn q_expr(ctx: &ReducedContext, i: usize, j: usize) -> Expr {
    let r = Arc::new(rotation(ctx, i, j).expect("valid pair"));
    Expr::sum([
        Expr::product(Expr::leaf(&r), Expr::leaf(&r)),
        ratio(ctx, j, i, ctx.a(i)),
        ratio(ctx, i, j, ctx.a(j)),
    ])
}

/// `-(1/4) [J_ij^2 + a_i x_j^2/x_i^2 + a_j x_i^2/x_j^2 + a_i + a_j + 1]`.
pub fn pair_closed_form(ctx: &ReducedContext, i: usize, j: usize) -> Result<Expr> {
    ctx.check_pair(i, j)?;
    let shift = &(&ctx.a(i) + &ctx.a(j)) + &ctx.constant(Rational::ONE);
    Ok(Expr::scale(Rational::frac(-1, 4), Expr::sum([q_expr(ctx, i, j), ctx.scalar(shift)])))
}

/// `Q_ij = J_ij^2 + a_i x_j^2/x_i^2 + a_j x_i^2/x_j^2`.
pub fn make_q(ctx: &ReducedContext, i: usize, j: usize) -> Result<Operator> {
    ctx.check_pair(i, j)?;
    Ok((*q_expr(ctx, i, j).eval()).clone())
}

/// `C^[n]` of the coupled reduced triple.
pub fn total_casimir(ctx: &ReducedContext) -> Operator {
    let all: Vec<usize> = (1..=ctx.n).collect();
    (*ctx.coupled(&all).casimir_expr().eval()).clone()
}

/// `-(1/4) sum_{i<j} J_ij^2 - (1/4)(sum x_i^2)(sum a_j/x_j^2) + n(n-4)/16`.
pub fn total_closed_form(ctx: &ReducedContext) -> Expr {
    let n = ctx.n;
    let sig = &ctx.sig;
    let mut terms = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let r = Arc::new(rotation(ctx, i, j).expect("valid pair"));
            terms.push(Expr::scale(Rational::frac(-1, 4), Expr::product(Expr::leaf(&r), Expr::leaf(&r))));
        }
    }
    let squares = Expr::Sum((1..=n).map(|i| Expr::op(Operator::x_pow(sig, i, 2).expect("valid"))).collect());
    let potential = Expr::Sum(
        (1..=n)
            .map(|j| Expr::product(ctx.scalar(ctx.a(j)), Expr::op(Operator::x_pow(sig, j, -2).expect("localized"))))
            .collect(),
    );
    terms.push(Expr::scale(Rational::frac(-1, 4), Expr::product(squares, potential)));
    let s = n as i64;
    terms.push(Expr::op(Operator::constant(sig, Rational::frac(s * (s - 4), 16))));
    Expr::Sum(terms)
}

pub fn total_casimir_identity(ctx: &ReducedContext) -> bool {
    total_identity(ctx).check().passed
}

fn all_factors(ctx: &ReducedContext) -> Vec<usize> {
    (1..=ctx.n).collect()
}

fn total_identity(ctx: &ReducedContext) -> Identity {
    Identity::new(
        RelationId::ReducedTotalCasimir,
        all_factors(ctx),
        ctx.coupled(&all_factors(ctx)).casimir_expr(),
        total_closed_form(ctx),
    )
}

/// Racah generators of the reduced realization.
#[derive(Clone, Debug)]
pub struct ReducedBasis {
    n: usize,
    c1: Vec<Expr>,
    c2: BTreeMap<(usize, usize), Expr>,
    p: BTreeMap<(usize, usize), Expr>,
    f: BTreeMap<(usize, usize, usize), Expr>,
    total: Expr,
}

fn sorted(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

impl ReducedBasis {
    pub fn new(ctx: &ReducedContext) -> Self {
        let n = ctx.n;
        let c1: Vec<Expr> = (1..=n).map(|i| Expr::cached(ctx.coupled(&[i]).casimir_expr())).collect();
        let mut c2 = BTreeMap::new();
        let mut p = BTreeMap::new();
        for i in 1..=n {
            for j in i + 1..=n {
                let cij = Expr::cached(ctx.coupled(&[i, j]).casimir_expr());
                let pij = Expr::cached(Expr::sum([
                    cij.clone(),
                    Expr::neg(c1[i - 1].clone()),
                    Expr::neg(c1[j - 1].clone()),
                ]));
                c2.insert((i, j), cij);
                p.insert((i, j), pij);
            }
        }
        let mut f = BTreeMap::new();
        for t in distinct_tuples(n, 3) {
            let (a, b, c) = (t[0], t[1], t[2]);
            if a < c {
                let def = Expr::scale(
                    Rational::frac(1, 2),
                    Expr::commutator(p[&sorted(a, b)].clone(), p[&sorted(b, c)].clone()),
                );
                f.insert((a, b, c), Expr::cached(def));
            }
        }
        let total = Expr::cached(ctx.coupled(&all_factors(ctx)).casimir_expr());
        ReducedBasis { n, c1, c2, p, f, total }
    }

    /// `C^ij`, symmetric.
    pub fn c2(&self, i: usize, j: usize) -> &Expr {
        &self.c2[&sorted(i, j)]
    }

    /// `C^[n]`.
    pub fn total(&self) -> &Expr {
        &self.total
    }
}

impl RacahFamily for ReducedBasis {
    fn n(&self) -> usize {
        self.n
    }

    fn c(&self, i: usize) -> Expr {
        self.c1[i - 1].clone()
    }

    fn p(&self, i: usize, j: usize) -> Expr {
        self.p[&sorted(i, j)].clone()
    }

    fn f(&self, i: usize, j: usize, k: usize) -> Expr {
        if i < k {
            self.f[&(i, j, k)].clone()
        } else {
            Expr::neg(self.f[&(k, j, i)].clone())
        }
    }

    fn relation_id(&self, relation: RacahRelation) -> RelationId {
        RelationId::ReducedRacah(relation)
    }
}

/// Triple relations, closed forms, `Q_ij` affine link and `[Q_ij, C^[n]] = 0`.
pub fn reduced_identities(ctx: &ReducedContext, basis: &ReducedBasis) -> Vec<Identity> {
    let n = ctx.n;
    let mut out = Vec::new();
    for i in 1..=n {
        out.extend(ctx.singles[i - 1].relation_identities(RelationId::ReducedSu11, &[i]));
        out.push(Identity::new(
            RelationId::ReducedCasimirSingle,
            vec![i],
            ctx.singles[i - 1].casimir_expr(),
            Expr::op(single_closed_form(ctx, i).expect("valid index")),
        ));
    }
    let all = all_factors(ctx);
    out.extend(ctx.coupled(&all).relation_identities(RelationId::ReducedSu11, &all));
    for i in 1..=n {
        for j in i + 1..=n {
            out.extend(ctx.coupled(&[i, j]).relation_identities(RelationId::ReducedSu11, &[i, j]));
            out.push(Identity::new(
                RelationId::ReducedCasimirPair,
                vec![i, j],
                ctx.coupled(&[i, j]).casimir_expr(),
                pair_closed_form(ctx, i, j).expect("valid pair"),
            ));
            let q = Expr::cached(q_expr(ctx, i, j));
            let shift = &(&ctx.a(i) + &ctx.a(j)) + &ctx.constant(Rational::ONE);
            out.push(Identity::new(
                RelationId::ReducedQAffine,
                vec![i, j],
                q.clone(),
                Expr::diff(Expr::scale(Rational::from_int(-4), basis.c2(i, j).clone()), ctx.scalar(shift)),
            ));
            out.push(Identity::new(
                RelationId::ReducedSymmetry,
                vec![i, j],
                Expr::commutator(q, basis.total().clone()),
                Expr::op(Operator::zero(&ctx.sig)),
            ));
        }
    }
    out.push(total_identity(ctx));
    out
}

pub fn verify_reduced<R: Runner>(ctx: &ReducedContext, basis: &ReducedBasis, runner: &R) -> RelationReport {
    verify_identities(&reduced_identities(ctx, basis), runner)
}

pub fn verify_reduced_racah<R: Runner>(basis: &ReducedBasis, runner: &R) -> RelationReport {
    verify_family(basis, &RacahRelation::ALL, runner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Serial;

    #[test]
    fn triple_relations_and_single_casimir() {
        let ctx = ReducedContext::new(3).unwrap();
        let t = make_reduced_j(&ctx, 1).unwrap();
        assert!(t.satisfies_relations());
        assert_eq!(t.zero.commutator(&t.plus), *t.plus);
        assert!(t.minus.to_string().contains("a1"));
        let c = reduced_casimir_single(&ctx, 1).unwrap();
        assert_eq!(c, single_closed_form(&ctx, 1).unwrap());
        assert_eq!(c.to_string(), "(-1/4*a1 + -3/16)");
        let zeros = [Rational::ZERO; 3];
        assert_eq!(c.specialize(&zeros).unwrap(), Operator::constant(ctx.signature(), Rational::frac(-3, 16)));
        assert!(make_reduced_j(&ctx, 4).is_err());
        assert!(ReducedContext::new(1).is_err());
    }

    #[test]
    fn pair_closed_form_and_q() {
        let ctx = ReducedContext::new(2).unwrap();
        let c12 = reduced_casimir_pair(&ctx, 1, 2).unwrap();
        assert_eq!(c12, *pair_closed_form(&ctx, 1, 2).unwrap().eval());
        let zeros = [Rational::ZERO; 2];
        let j = rotation(&ctx, 1, 2).unwrap();
        let free = (&(&j * &j) + &Operator::one(ctx.signature())).scale(&Rational::frac(-1, 4));
        assert_eq!(c12.specialize(&zeros).unwrap(), free);
        assert_eq!(make_q(&ctx, 1, 2).unwrap().specialize(&zeros).unwrap(), &j * &j);
        assert!(reduced_casimir_pair(&ctx, 2, 1).is_err());
        assert!(make_q(&ctx, 1, 1).is_err());
    }

    #[test]
    fn total_casimir_small_n() {
        for n in 2..=3 {
            assert!(total_casimir_identity(&ReducedContext::new(n).unwrap()));
        }
    }

    #[test]
    fn reduced_layer_n3() {
        let ctx = ReducedContext::new(3).unwrap();
        let basis = ReducedBasis::new(&ctx);
        let report = verify_reduced(&ctx, &basis, &Serial);
        assert!(report.all_passed(), "{:?}", report.entries.iter().filter(|e| !e.passed).collect::<Vec<_>>());
        assert_eq!(report.count(RelationId::ReducedSymmetry), 3);
        let racah = verify_reduced_racah(&basis, &Serial);
        assert!(racah.all_passed());
        assert_eq!(racah.count(RelationId::ReducedRacah(RacahRelation::AdjacentBracket)), 6);
    }

    #[test]
    fn pair_casimir_commutes_with_total() {
        let ctx = ReducedContext::new(3).unwrap();
        let basis = ReducedBasis::new(&ctx);
        let total = basis.total().eval();
        for (i, j) in [(1, 2), (1, 3), (2, 3)] {
            assert!(basis.c2(i, j).eval().commutator(&total).is_zero());
        }
    }
}
