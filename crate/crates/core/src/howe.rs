//! Pair-coupled `su(1,1)` realizations and their Casimirs.
//!
//! Each variable carries a metaplectic copy of `su(1,1)`; summing the copies
//! over a union `A` of designated pairs `(2i-1, 2i)` gives `J^A`, whose
//! Casimir has the closed form
//!
//! ```text
//! C^A = |A|(|A| - 4)/16 - (1/4) sum_{mu < nu in A} L_{mu nu}^2
//! ```

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::coeff::Rational;
use crate::expr::Expr;
use crate::liealg::{make_metaplectic, So2nContext, Su11Triple};
use crate::racah::CommutantBasis;
use crate::report::{verify_identities, Identity, RelationId, RelationReport, Runner};
use crate::weyl::Operator;
use crate::{check_index, Error, Result};

/// A union of designated variable pairs `(2i-1, 2i)`, given by factor index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairUnion {
    n: usize,
    pairs: Vec<usize>,
}

impl PairUnion {
    pub fn new(n: usize, pairs: &[usize]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidContext("a pair union needs at least one pair"));
        }
        for (a, &i) in pairs.iter().enumerate() {
            check_index(i, n)?;
            if pairs[..a].contains(&i) {
                return Err(Error::RepeatedIndex(i));
            }
        }
        Ok(PairUnion { n, pairs: pairs.to_vec() })
    }

    /// Every nonempty union over `n` factors, pairs in increasing order.
    pub fn all(n: usize) -> Vec<PairUnion> {
        let mut out: Vec<PairUnion> = (1u32..1 << n)
            .map(|mask| PairUnion {
                n,
                pairs: (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect(),
            })
            .collect();
        out.sort_by(|a, b| (a.len(), &a.pairs).cmp(&(b.len(), &b.pairs)));
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[usize] {
        &self.pairs
    }

    /// Number of pairs `N`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `|A| = 2N`.
    pub fn size(&self) -> usize {
        2 * self.pairs.len()
    }

    /// The variables of `A`, sorted.
    pub fn variables(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.pairs.iter().flat_map(|&i| [2 * i - 1, 2 * i]).collect();
        v.sort_unstable();
        v
    }

    fn sorted_pairs(&self) -> Vec<usize> {
        let mut p = self.pairs.clone();
        p.sort_unstable();
        p
    }
}

fn check_union(ctx: &So2nContext, a: &PairUnion) -> Result<()> {
    if a.n != ctx.n() {
        return Err(Error::InvalidContext("pair union built for a different n"));
    }
    Ok(())
}

/// Sum of the metaplectic copies over the variables of `A`.
pub fn make_ja(ctx: &So2nContext, a: &PairUnion) -> Result<Su11Triple> {
    check_union(ctx, a)?;
    let mut vars = a.variables().into_iter();
    let mut acc = make_metaplectic(ctx, vars.next().expect("nonempty union"))?;
    for mu in vars {
        acc = acc.sum(&make_metaplectic(ctx, mu)?);
    }
    Ok(acc)
}

/// `C^A = (J0^A)^2 - J+^A J-^A - J0^A`.
pub fn casimir_ca(ctx: &So2nContext, a: &PairUnion) -> Result<Operator> {
    Ok((*make_ja(ctx, a)?.casimir_expr().eval()).clone())
}

/// `|A|(|A| - 4)/16 - (1/4) sum L^2` over pairs of variables in `A`.
pub fn closed_form_expr(ctx: &So2nContext, a: &PairUnion) -> Result<Expr> {
    check_union(ctx, a)?;
    let s = a.size() as i64;
    let vars = a.variables();
    let mut terms = alloc::vec![Expr::op(Operator::constant(ctx.signature(), Rational::frac(s * (s - 4), 16)))];
    for (k, &mu) in vars.iter().enumerate() {
        for &nu in &vars[k + 1..] {
            terms.push(Expr::scale(Rational::frac(-1, 4), ctx.square_expr(mu, nu)));
        }
    }
    Ok(Expr::Sum(terms))
}

pub fn closed_form_identity(ctx: &So2nContext, a: &PairUnion) -> Result<Identity> {
    Ok(Identity::new(
        RelationId::HoweClosedForm,
        a.sorted_pairs(),
        make_ja(ctx, a)?.casimir_expr(),
        closed_form_expr(ctx, a)?,
    ))
}

fn casimir_cached(ctx: &So2nContext, pairs: &[usize]) -> Result<Expr> {
    Ok(Expr::cached(make_ja(ctx, &PairUnion::new(ctx.n(), pairs)?)?.casimir_expr()))
}

/// `C^A = sum_{pairs p < q} C^{pq} - ((|A| - 4)/2) sum_p C^p`, `N >= 2`.
pub fn decomposition_identity(ctx: &So2nContext, a: &PairUnion) -> Result<Identity> {
    check_union(ctx, a)?;
    if a.len() < 2 {
        return Err(Error::InvalidContext("decomposition needs at least two pairs"));
    }
    let p = a.sorted_pairs();
    let mut rhs = Vec::new();
    for (k, &i) in p.iter().enumerate() {
        for &j in &p[k + 1..] {
            rhs.push(casimir_cached(ctx, &[i, j])?);
        }
    }
    let weight = Rational::frac(-(a.size() as i64 - 4), 2);
    for &i in &p {
        rhs.push(Expr::scale(weight.clone(), casimir_cached(ctx, &[i])?));
    }
    Ok(Identity::new(RelationId::HoweDecomposition, p, make_ja(ctx, a)?.casimir_expr(), Expr::Sum(rhs)))
}

pub fn verify_decomposition(ctx: &So2nContext, a: &PairUnion) -> Result<bool> {
    Ok(decomposition_identity(ctx, a)?.check().passed)
}

/// `C^{(i)} = -(G^i + 1)/4` and `C^{(i)(j)} = -K^ij/4`.
pub fn correspondence_identities(basis: &CommutantBasis) -> Vec<Identity> {
    let ctx = basis.context();
    let n = ctx.n();
    let quarter = Rational::frac(-1, 4);
    let mut out = Vec::new();
    for i in 1..=n {
        let lhs = casimir_cached(ctx, &[i]).expect("valid index");
        let rhs = Expr::scale(
            quarter.clone(),
            Expr::sum([basis.g(i).clone(), Expr::op(Operator::one(ctx.signature()))]),
        );
        out.push(Identity::new(RelationId::HoweSingle, alloc::vec![i], lhs, rhs));
    }
    for i in 1..=n {
        for j in i + 1..=n {
            let lhs = casimir_cached(ctx, &[i, j]).expect("valid indices");
            let rhs = Expr::scale(quarter.clone(), basis.k(i, j).clone());
            out.push(Identity::new(RelationId::HowePair, alloc::vec![i, j], lhs, rhs));
        }
    }
    out
}

pub fn verify_commutant_correspondence<R: Runner>(basis: &CommutantBasis, runner: &R) -> RelationReport {
    verify_identities(&correspondence_identities(basis), runner)
}

/// Relations of every metaplectic copy and every `J^A`, plus the constant
/// Casimir `-3/16` of each metaplectic copy.
pub fn su11_identities(ctx: &So2nContext) -> Vec<Identity> {
    let mut out = Vec::new();
    for mu in 1..=ctx.dim() {
        let t = make_metaplectic(ctx, mu).expect("valid variable");
        out.extend(t.relation_identities(RelationId::Su11, &[mu]));
        out.push(Identity::new(
            RelationId::MetaplecticCasimir,
            alloc::vec![mu],
            t.casimir_expr(),
            Expr::op(Operator::constant(ctx.signature(), Rational::frac(-3, 16))),
        ));
    }
    for a in PairUnion::all(ctx.n()) {
        let t = make_ja(ctx, &a).expect("valid union");
        out.extend(t.relation_identities(RelationId::HoweSu11, a.pairs()));
    }
    out
}

/// Closed form for every union, decomposition for every union with at
/// least two pairs, and `[C^A, C^[n]] = 0`.
pub fn howe_identities(ctx: &So2nContext) -> Vec<Identity> {
    let unions = PairUnion::all(ctx.n());
    let mut out: Vec<Identity> =
        unions.iter().map(|a| closed_form_identity(ctx, a).expect("valid union")).collect();
    out.extend(
        unions.iter().filter(|a| a.len() >= 2).map(|a| decomposition_identity(ctx, a).expect("valid union")),
    );
    out.extend(total_central_identities(ctx));
    out
}

pub fn total_central_identities(ctx: &So2nContext) -> Vec<Identity> {
    let all: Vec<usize> = (1..=ctx.n()).collect();
    let total = casimir_cached(ctx, &all).expect("full union");
    let zero = Expr::op(Operator::zero(ctx.signature()));
    PairUnion::all(ctx.n())
        .into_iter()
        .map(|a| {
            let ca = casimir_cached(ctx, a.pairs()).expect("valid union");
            Identity::new(RelationId::HoweTotalCentral, a.sorted_pairs(), Expr::commutator(ca, total.clone()), zero.clone())
        })
        .collect()
}

pub fn verify_howe<R: Runner>(ctx: &So2nContext, runner: &R) -> RelationReport {
    verify_identities(&howe_identities(ctx), runner)
}

/// The total Casimir `C^[n]` as a shared operator.
pub fn total_casimir(ctx: &So2nContext) -> Arc<Operator> {
    let all: Vec<usize> = (1..=ctx.n()).collect();
    casimir_cached(ctx, &all).expect("full union").eval()
}
