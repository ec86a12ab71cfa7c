//! Oscillator realization of `o(2n)` on `2n` variables, its quadratic
//! Casimir, and the metaplectic `su(1,1)` copies.
//!
//! Generators are `L_{mu nu} = x_mu d_nu - x_nu d_mu`. Only `mu < nu` is
//! stored; the accessor negates for `mu > nu`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::Rational;
use crate::expr::Expr;
use crate::report::{verify_identities, Identity, RelationId, RelationReport, Runner};
use crate::weyl::{AlgebraSignature, Operator};
use crate::{check_index, Error, Result};

/// `o(2n)` realized in the polynomial Weyl algebra on `2n` variables.
#[derive(Clone, Debug)]
pub struct So2nContext {
    n: usize,
    sig: Arc<AlgebraSignature>,
    // row-major over mu < nu
    generators: Vec<Arc<Operator>>,
}

impl So2nContext {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidContext("o(2n) context needs n >= 3"));
        }
        let sig = Arc::new(AlgebraSignature::polynomial(2 * n)?);
        let dim = 2 * n;
        let mut generators = Vec::with_capacity(n * (2 * n - 1));
        for mu in 1..=dim {
            for nu in mu + 1..=dim {
                generators.push(Arc::new(rotation(&sig, mu, nu)?));
            }
        }
        Ok(So2nContext { n, sig, generators })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of variables, `2n`.
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn signature(&self) -> &Arc<AlgebraSignature> {
        &self.sig
    }

    fn slot(&self, mu: usize, nu: usize) -> usize {
        debug_assert!(mu < nu);
        let dim = self.dim();
        (mu - 1) * (2 * dim - mu) / 2 + (nu - mu - 1)
    }

    /// Stored generator for `mu < nu`.
    pub fn l(&self, mu: usize, nu: usize) -> &Arc<Operator> {
        &self.generators[self.slot(mu, nu)]
    }

    /// `L_{mu nu}` for any ordering; `L_{mu mu} = 0`.
    pub fn generator(&self, mu: usize, nu: usize) -> Result<Operator> {
        check_index(mu, self.dim())?;
        check_index(nu, self.dim())?;
        Ok(match mu.cmp(&nu) {
            core::cmp::Ordering::Less => (**self.l(mu, nu)).clone(),
            core::cmp::Ordering::Greater => -&**self.l(nu, mu),
            core::cmp::Ordering::Equal => Operator::zero(&self.sig),
        })
    }

    /// Expression for `L_{mu nu}` with the antisymmetric convention.
    pub fn generator_expr(&self, mu: usize, nu: usize) -> Option<Expr> {
        match mu.cmp(&nu) {
            core::cmp::Ordering::Less => Some(Expr::leaf(self.l(mu, nu))),
            core::cmp::Ordering::Greater => Some(Expr::neg(Expr::leaf(self.l(nu, mu)))),
            core::cmp::Ordering::Equal => None,
        }
    }

    /// All stored generators as `((mu, nu), L_{mu nu})`, `mu < nu`.
    pub fn generators(&self) -> impl Iterator<Item = ((usize, usize), &Arc<Operator>)> {
        let dim = self.dim();
        (1..=dim)
            .flat_map(move |mu| (mu + 1..=dim).map(move |nu| (mu, nu)))
            .zip(self.generators.iter())
    }

    /// `L_{mu nu}^2` as an unexpanded product.
    pub fn square_expr(&self, mu: usize, nu: usize) -> Expr {
        let (a, b) = if mu < nu { (mu, nu) } else { (nu, mu) };
        Expr::product(Expr::leaf(self.l(a, b)), Expr::leaf(self.l(a, b)))
    }
}

fn rotation(sig: &Arc<AlgebraSignature>, mu: usize, nu: usize) -> Result<Operator> {
    let a = Operator::x(sig, mu)?.try_mul(&Operator::d(sig, nu)?)?;
    let b = Operator::x(sig, nu)?.try_mul(&Operator::d(sig, mu)?)?;
    a.try_sub(&b)
}

/// `L_{mu nu} = x_mu d_nu - x_nu d_mu` for `1 <= mu < nu <= 2n`.
pub fn make_l(ctx: &So2nContext, mu: usize, nu: usize) -> Result<Operator> {
    check_index(mu, ctx.dim())?;
    check_index(nu, ctx.dim())?;
    if mu == nu {
        return Err(Error::RepeatedIndex(mu));
    }
    if mu > nu {
        return Err(Error::InvalidContext("make_l expects mu < nu; use generator() for the other order"));
    }
    Ok((**ctx.l(mu, nu)).clone())
}

fn delta(a: usize, b: usize) -> bool {
    a == b
}

/// Every unordered pair of distinct generators, checked against the `o(2n)`
/// structure constants.
pub fn o2n_identities(ctx: &So2nContext) -> Vec<Identity> {
    let gens: Vec<(usize, usize)> = ctx.generators().map(|(p, _)| p).collect();
    let mut out = Vec::new();
    for (a, &(mu, nu)) in gens.iter().enumerate() {
        for &(rho, sigma) in &gens[a + 1..] {
            let lhs = Expr::commutator(Expr::leaf(ctx.l(mu, nu)), Expr::leaf(ctx.l(rho, sigma)));
            let mut rhs = vec![Expr::op(Operator::zero(ctx.signature()))];
            let mut push = |on: bool, sign: i64, p: usize, q: usize| {
                if on {
                    if let Some(e) = ctx.generator_expr(p, q) {
                        rhs.push(Expr::scale(Rational::from_int(sign), e));
                    }
                }
            };
            push(delta(nu, rho), 1, mu, sigma);
            push(delta(nu, sigma), -1, mu, rho);
            push(delta(mu, rho), -1, nu, sigma);
            push(delta(mu, sigma), 1, nu, rho);
            out.push(Identity::new(
                RelationId::O2nBracket,
                vec![mu, nu, rho, sigma],
                lhs,
                Expr::Sum(rhs),
            ));
        }
    }
    out
}

pub fn check_o2n_relations<R: Runner>(ctx: &So2nContext, runner: &R) -> RelationReport {
    verify_identities(&o2n_identities(ctx), runner)
}

/// `sum_{mu < nu <= 2n} L_{mu nu}^2`.
pub fn quadratic_casimir(ctx: &So2nContext) -> Operator {
    quadratic_casimir_with_bound(ctx, ctx.dim()).expect("full bound is always valid")
}

/// The partial sum `sum_{mu < nu <= bound} L_{mu nu}^2`. Only `bound = 2n`
/// gives a central element.
pub fn quadratic_casimir_with_bound(ctx: &So2nContext, bound: usize) -> Result<Operator> {
    check_index(bound, ctx.dim())?;
    let mut acc = Operator::zero(ctx.signature());
    for ((_, nu), l) in ctx.generators() {
        if nu <= bound {
            acc = &acc + &(&**l * &**l);
        }
    }
    Ok(acc)
}

/// `[casimir, L_{mu nu}] = 0` for every generator.
pub fn casimir_centrality_identities(ctx: &So2nContext, casimir: &Operator) -> Vec<Identity> {
    let c = Arc::new(casimir.clone());
    ctx.generators()
        .map(|((mu, nu), l)| {
            Identity::new(
                RelationId::O2nCasimirCentral,
                vec![mu, nu],
                Expr::commutator(Expr::leaf(&c), Expr::leaf(l)),
                Expr::op(Operator::zero(ctx.signature())),
            )
        })
        .collect()
}

pub fn check_casimir_centrality<R: Runner>(
    ctx: &So2nContext,
    casimir: &Operator,
    runner: &R,
) -> RelationReport {
    verify_identities(&casimir_centrality_identities(ctx, casimir), runner)
}

/// A realization of `su(1,1)`: `[J0, J+-] = +-J+-`, `[J+, J-] = -2 J0`.
#[derive(Clone, Debug)]
pub struct Su11Triple {
    pub plus: Arc<Operator>,
    pub minus: Arc<Operator>,
    pub zero: Arc<Operator>,
}

impl Su11Triple {
    pub fn new(plus: Operator, minus: Operator, zero: Operator) -> Self {
        Su11Triple { plus: Arc::new(plus), minus: Arc::new(minus), zero: Arc::new(zero) }
    }

    /// Coproduct: generators added factor by factor.
    pub fn sum(&self, other: &Su11Triple) -> Su11Triple {
        Su11Triple::new(
            &*self.plus + &*other.plus,
            &*self.minus + &*other.minus,
            &*self.zero + &*other.zero,
        )
    }

    /// The three commutation relations, tagged with `tuple ++ [k]`.
    pub fn relation_identities(&self, relation: RelationId, tuple: &[usize]) -> Vec<Identity> {
        let (p, m, z) = (Expr::leaf(&self.plus), Expr::leaf(&self.minus), Expr::leaf(&self.zero));
        let tag = |k: usize| {
            let mut t = tuple.to_vec();
            t.push(k);
            t
        };
        vec![
            Identity::new(relation, tag(1), Expr::commutator(z.clone(), p.clone()), p.clone()),
            Identity::new(relation, tag(2), Expr::commutator(z.clone(), m.clone()), Expr::neg(m.clone())),
            Identity::new(
                relation,
                tag(3),
                Expr::commutator(p, m),
                Expr::scale(Rational::from_int(-2), z),
            ),
        ]
    }

    /// True iff all three relations hold exactly.
    pub fn satisfies_relations(&self) -> bool {
        self.relation_identities(RelationId::Su11, &[]).iter().all(|id| id.check().passed)
    }

    /// `J0^2 - J+ J- - J0` as an unexpanded expression.
    pub fn casimir_expr(&self) -> Expr {
        let z = Expr::leaf(&self.zero);
        Expr::sum([
            Expr::product(z.clone(), z.clone()),
            Expr::neg(Expr::product(Expr::leaf(&self.plus), Expr::leaf(&self.minus))),
            Expr::neg(z),
        ])
    }
}

/// Casimir element `J0^2 - J+ J- - J0` of a triple.
pub fn casimir_of(t: &Su11Triple) -> Operator {
    let z = &*t.zero;
    &(&(z * z) - &(&*t.plus * &*t.minus)) - z
}

/// `J+ = x_mu^2 / 2`, `J- = d_mu^2 / 2`, `J0 = (x_mu d_mu + 1/2) / 2`.
pub fn make_metaplectic(ctx: &So2nContext, mu: usize) -> Result<Su11Triple> {
    check_index(mu, ctx.dim())?;
    let sig = ctx.signature();
    let half = Rational::frac(1, 2);
    let x = Operator::x(sig, mu)?;
    let d = Operator::d(sig, mu)?;
    let plus = (&x * &x).scale(&half);
    let minus = (&d * &d).scale(&half);
    let zero = (&(&x * &d) + &Operator::constant(sig, half.clone())).scale(&half);
    Ok(Su11Triple::new(plus, minus, zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Serial;

    #[test]
    fn generator_layout() {
        let ctx = So2nContext::new(3).unwrap();
        assert_eq!(ctx.generators().count(), 15);
        let l12 = make_l(&ctx, 1, 2).unwrap();
        assert_eq!(l12.to_string(), "1 * x1 * d2 + (-1) * x2 * d1");
        assert_eq!(ctx.generator(2, 1).unwrap(), -&l12);
        assert!((&ctx.generator(6, 4).unwrap() + &make_l(&ctx, 4, 6).unwrap()).is_zero());
        assert!(ctx.generator(3, 3).unwrap().is_zero());
        for ((mu, nu), l) in ctx.generators() {
            assert_eq!(**l, make_l(&ctx, mu, nu).unwrap());
        }
    }

    #[test]
    fn make_l_errors() {
        let ctx = So2nContext::new(3).unwrap();
        assert_eq!(make_l(&ctx, 2, 2).unwrap_err(), Error::RepeatedIndex(2));
        assert!(make_l(&ctx, 0, 2).is_err());
        assert!(make_l(&ctx, 1, 7).is_err());
        assert!(make_l(&ctx, 3, 1).is_err());
        assert!(So2nContext::new(2).is_err());
    }

    #[test]
    fn o2n_sweep_at_n3() {
        let ctx = So2nContext::new(3).unwrap();
        let report = check_o2n_relations(&ctx, &Serial);
        // C(15, 2) unordered generator pairs
        assert_eq!(report.entries.len(), 105);
        assert!(report.all_passed());
    }

    #[test]
    fn casimir_contains_expected_term() {
        let ctx = So2nContext::new(3).unwrap();
        let c = quadratic_casimir(&ctx);
        let sig = ctx.signature();
        let mut x = vec![0i16; 6];
        let mut d = vec![0i16; 6];
        x[0] = 2;
        d[1] = 2;
        let mono = crate::weyl::Monomial::new(sig, &x, &d).unwrap();
        assert_eq!(c.coefficient(&mono).as_constant(), Some(Rational::ONE));
        assert!(c.commutator(&c).is_zero());
        assert!(c.commutator(ctx.l(1, 2)).is_zero());
    }

    #[test]
    fn metaplectic_copy() {
        let ctx = So2nContext::new(3).unwrap();
        let t1 = make_metaplectic(&ctx, 1).unwrap();
        let t2 = make_metaplectic(&ctx, 2).unwrap();
        assert!(t1.satisfies_relations());
        assert_eq!(t1.zero.commutator(&t1.plus), *t1.plus);
        assert_eq!(t1.plus.commutator(&t1.minus), t1.zero.scale(&Rational::from_int(-2)));
        assert!(t1.plus.commutator(&t2.plus).is_zero());
        let c = casimir_of(&t1);
        assert_eq!(c, Operator::constant(ctx.signature(), Rational::frac(-3, 16)));
        assert!(c.commutator(&t1.zero).is_zero());
        assert!(make_metaplectic(&ctx, 7).is_err());
    }

    #[test]
    fn pair_copy_casimir() {
        let ctx = So2nContext::new(3).unwrap();
        let pair = make_metaplectic(&ctx, 1).unwrap().sum(&make_metaplectic(&ctx, 2).unwrap());
        let l = ctx.l(1, 2);
        let expected = (&(&**l * &**l) + &Operator::one(ctx.signature())).scale(&Rational::frac(-1, 4));
        assert_eq!(casimir_of(&pair), expected);
        assert_eq!(*pair.casimir_expr().eval(), expected);
    }
}
