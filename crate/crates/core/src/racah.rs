//! Commutant of `o(2)^n` inside the oscillator realization of `U(o(2n))`
//! and the generalized Racah algebra relations it satisfies.
//!
//! The commutant is generated by
//!
//! ```text
//! G^i  = L_{2i-1,2i}^2
//! K^ij = sum of L_{ab}^2 over the six pairs a < b in {2i-1, 2i, 2j-1, 2j}
//! ```
//!
//! and the Racah generators are the affine images
//!
//! ```text
//! C^i    = -(G^i + 1)/4
//! C^ij   = -K^ij/4
//! P^ij   = C^ij - C^i - C^j = -K^ij/4 + (G^i + G^j)/4 + 1/2
//! F^ijk  = [K^ij, K^jk]/32
//! ```

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::Rational;
use crate::expr::Expr;
use crate::howe::{self, PairUnion};
use crate::liealg::So2nContext;
use crate::report::{verify_identities, Identity, RacahRelation, RelationId, RelationReport, Runner, Skipped};
use crate::weyl::Operator;
use crate::{check_index, Error, Result};

/// A realization of the Racah generators `C^i`, `P^ij`, `F^ijk`.
pub trait RacahFamily: Sync {
    fn n(&self) -> usize;

    /// `C^i`.
    fn c(&self, i: usize) -> Expr;

    /// `P^ij`, symmetric in its indices.
    fn p(&self, i: usize, j: usize) -> Expr;

    /// `F^ijk` for distinct indices, any order.
    fn f(&self, i: usize, j: usize, k: usize) -> Expr;

    fn relation_id(&self, relation: RacahRelation) -> RelationId;
}

/// All ordered `k`-tuples of distinct elements of `1..=n`.
pub fn distinct_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 1..=n {
            if !cur.contains(&v) {
                cur.push(v);
                go(n, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

fn two() -> Rational {
    Rational::from_int(2)
}

/// One instance of a defining relation, indices as in the relation's
/// doc comment on [`RacahRelation`].
pub fn racah_instance<F: RacahFamily + ?Sized>(fam: &F, relation: RacahRelation, t: &[usize]) -> Identity {
    let id = fam.relation_id(relation);
    let (lhs, rhs) = match (relation, t) {
        (RacahRelation::PairBracket, &[i, j, k]) => (
            Expr::commutator(fam.p(i, j), fam.p(j, k)),
            Expr::scale(two(), fam.f(i, j, k)),
        ),
        (RacahRelation::AdjacentBracket, &[i, j, k]) => (
            Expr::commutator(fam.p(j, k), fam.f(i, j, k)),
            Expr::sum([
                Expr::product(fam.p(i, k), fam.p(j, k)),
                Expr::neg(Expr::product(fam.p(j, k), fam.p(i, j))),
                Expr::scale(two(), Expr::product(fam.p(i, k), fam.c(j))),
                Expr::scale(-two(), Expr::product(fam.p(i, j), fam.c(k))),
            ]),
        ),
        (RacahRelation::DisjointBracket, &[i, j, k, l]) => (
            Expr::commutator(fam.p(k, l), fam.f(i, j, k)),
            Expr::diff(
                Expr::product(fam.p(i, k), fam.p(j, l)),
                Expr::product(fam.p(i, l), fam.p(j, k)),
            ),
        ),
        (RacahRelation::OverlapTriple, &[i, j, k, l]) => (
            Expr::commutator(fam.f(i, j, k), fam.f(j, k, l)),
            Expr::sum([
                Expr::product(fam.f(j, k, l), fam.p(i, j)),
                Expr::neg(Expr::product(
                    fam.f(i, k, l),
                    Expr::sum([fam.p(j, k), Expr::scale(two(), fam.c(j))]),
                )),
                Expr::neg(Expr::product(fam.f(i, j, k), fam.p(j, l))),
            ]),
        ),
        (RacahRelation::ChainTriple, &[i, j, k, l, m]) => (
            Expr::commutator(fam.f(i, j, k), fam.f(k, l, m)),
            Expr::diff(
                Expr::product(fam.f(i, l, m), fam.p(j, k)),
                Expr::product(fam.p(i, k), fam.f(j, l, m)),
            ),
        ),
        _ => panic!("tuple length does not match relation arity"),
    };
    Identity::new(id, t.to_vec(), lhs, rhs)
}

/// Every admissible instance of the given relations. Relations needing more
/// distinct indices than `n` are reported as skipped.
pub fn racah_identities<F: RacahFamily + ?Sized>(
    fam: &F,
    relations: &[RacahRelation],
) -> (Vec<Identity>, Vec<Skipped>) {
    let mut ids = Vec::new();
    let mut skipped = Vec::new();
    for &r in relations {
        if r.arity() > fam.n() {
            skipped.push(Skipped {
                relation: fam.relation_id(r),
                reason: match r.arity() {
                    4 => "needs n >= 4 distinct indices",
                    _ => "needs n >= 5 distinct indices",
                },
            });
            continue;
        }
        for t in distinct_tuples(fam.n(), r.arity()) {
            ids.push(racah_instance(fam, r, &t));
        }
    }
    (ids, skipped)
}

pub fn verify_family<F: RacahFamily + ?Sized, R: Runner>(
    fam: &F,
    relations: &[RacahRelation],
    runner: &R,
) -> RelationReport {
    let (ids, skipped) = racah_identities(fam, relations);
    let mut report = verify_identities(&ids, runner);
    report.skipped = skipped;
    report.sort();
    report
}

/// Commutant generators and the Racah generators derived from them.
#[derive(Clone, Debug)]
pub struct CommutantBasis {
    ctx: Arc<So2nContext>,
    g: Vec<Expr>,
    k: BTreeMap<(usize, usize), Expr>,
    c1: Vec<Expr>,
    c2: BTreeMap<(usize, usize), Expr>,
    p: BTreeMap<(usize, usize), Expr>,
    // keyed (i, j, k) with i < k
    f: BTreeMap<(usize, usize, usize), Expr>,
}

/// `G^i = L_{2i-1,2i}^2`.
pub fn make_g(ctx: &So2nContext, i: usize) -> Result<Operator> {
    check_index(i, ctx.n())?;
    Ok((*g_expr(ctx, i).eval()).clone())
}

/// `K^ij`, the sum of the six squares on the variables of factors `i`, `j`.
pub fn make_k(ctx: &So2nContext, i: usize, j: usize) -> Result<Operator> {
    check_index(i, ctx.n())?;
    check_index(j, ctx.n())?;
    if i == j {
        return Err(Error::RepeatedIndex(i));
    }
    if i > j {
        return Err(Error::InvalidContext("make_k expects i < j"));
    }
    Ok((*k_expr(ctx, i, j).eval()).clone())
}

fn g_expr(ctx: &So2nContext, i: usize) -> Expr {
    ctx.square_expr(2 * i - 1, 2 * i)
}

fn k_expr(ctx: &So2nContext, i: usize, j: usize) -> Expr {
    let v = [2 * i - 1, 2 * i, 2 * j - 1, 2 * j];
    let mut squares = Vec::with_capacity(6);
    for a in 0..4 {
        for b in a + 1..4 {
            squares.push(ctx.square_expr(v[a], v[b]));
        }
    }
    Expr::Sum(squares)
}

fn sorted(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

impl CommutantBasis {
    pub fn new(ctx: Arc<So2nContext>) -> Self {
        Self::with_single_constant(ctx, Rational::frac(-1, 4))
    }

    /// Uses `C^i = -G^i/4 + constant`; `P^ij` keeps its fixed form. Only
    /// `constant = -1/4` matches `P^ij = C^ij - C^i - C^j`.
    pub fn with_single_constant(ctx: Arc<So2nContext>, constant: Rational) -> Self {
        let n = ctx.n();
        let sig = ctx.signature().clone();
        let quarter = Rational::frac(1, 4);
        let g: Vec<Expr> = (1..=n).map(|i| Expr::cached(g_expr(&ctx, i))).collect();
        let mut k = BTreeMap::new();
        for i in 1..=n {
            for j in i + 1..=n {
                k.insert((i, j), Expr::cached(k_expr(&ctx, i, j)));
            }
        }
        let c1 = g
            .iter()
            .map(|gi| {
                Expr::cached(Expr::sum([
                    Expr::scale(-&quarter, gi.clone()),
                    Expr::op(Operator::constant(&sig, constant.clone())),
                ]))
            })
            .collect();
        let c2 = k.iter().map(|(&key, kij)| (key, Expr::cached(Expr::scale(-&quarter, kij.clone())))).collect();
        let p = k
            .iter()
            .map(|(&(i, j), kij)| {
                let def = Expr::sum([
                    Expr::scale(-&quarter, kij.clone()),
                    Expr::scale(quarter.clone(), g[i - 1].clone()),
                    Expr::scale(quarter.clone(), g[j - 1].clone()),
                    Expr::op(Operator::constant(&sig, Rational::frac(1, 2))),
                ]);
                ((i, j), Expr::cached(def))
            })
            .collect();
        let mut f = BTreeMap::new();
        for t in distinct_tuples(n, 3) {
            let (a, b, c) = (t[0], t[1], t[2]);
            if a < c {
                let def = Expr::scale(
                    Rational::frac(1, 32),
                    Expr::commutator(k[&sorted(a, b)].clone(), k[&sorted(b, c)].clone()),
                );
                f.insert((a, b, c), Expr::cached(def));
            }
        }
        CommutantBasis { ctx, g, k, c1, c2, p, f }
    }

    pub fn context(&self) -> &Arc<So2nContext> {
        &self.ctx
    }

    pub fn g(&self, i: usize) -> &Expr {
        &self.g[i - 1]
    }

    /// `K^ij`, symmetric.
    pub fn k(&self, i: usize, j: usize) -> &Expr {
        &self.k[&sorted(i, j)]
    }

    pub fn c1(&self, i: usize) -> &Expr {
        &self.c1[i - 1]
    }

    /// `C^ij`, symmetric.
    pub fn c2(&self, i: usize, j: usize) -> &Expr {
        &self.c2[&sorted(i, j)]
    }

    /// `[K^ij, K^jk]/32` computed afresh, bypassing the stored table.
    pub fn f_direct(&self, i: usize, j: usize, k: usize) -> Operator {
        self.k(i, j).eval().commutator(&self.k(j, k).eval()).scale(&Rational::frac(1, 32))
    }
}

impl RacahFamily for CommutantBasis {
    fn n(&self) -> usize {
        self.ctx.n()
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
        RelationId::Racah(relation)
    }
}

/// `[X, L_{2s-1,2s}] = 0` for every `G^i`, `K^ij` and every factor `s`.
pub fn commutant_identities(basis: &CommutantBasis) -> Vec<Identity> {
    let ctx = basis.context();
    let n = ctx.n();
    let zero = Expr::op(Operator::zero(ctx.signature()));
    let mut out = Vec::new();
    for s in 1..=n {
        let l = Expr::leaf(ctx.l(2 * s - 1, 2 * s));
        for i in 1..=n {
            out.push(Identity::new(
                RelationId::Commutant,
                vec![i, s],
                Expr::commutator(basis.g(i).clone(), l.clone()),
                zero.clone(),
            ));
            for j in i + 1..=n {
                out.push(Identity::new(
                    RelationId::Commutant,
                    vec![i, j, s],
                    Expr::commutator(basis.k(i, j).clone(), l.clone()),
                    zero.clone(),
                ));
            }
        }
    }
    out
}

pub fn verify_commutant<R: Runner>(basis: &CommutantBasis, runner: &R) -> RelationReport {
    verify_identities(&commutant_identities(basis), runner)
}

/// Sweeps every admissible instance of all five relations.
pub fn verify_racah_relations<R: Runner>(basis: &CommutantBasis, runner: &R) -> RelationReport {
    verify_family(basis, &RacahRelation::ALL, runner)
}

/// `C^A = sum_{i<j in A} C^ij - (|A| - 2) sum_{i in A} C^i`, with the
/// left side taken from the pair-coupled `su(1,1)` realization.
pub fn dependency_identity(basis: &CommutantBasis, subset: &[usize]) -> Result<Identity> {
    let ctx = basis.context();
    let union = PairUnion::new(ctx.n(), subset)?;
    if union.len() < 2 {
        return Err(Error::InvalidContext("dependency needs at least two factors"));
    }
    let idx = union.pairs();
    let mut rhs = Vec::new();
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            rhs.push(basis.c2(i, j).clone());
        }
    }
    let weight = -Rational::from_int(idx.len() as i64 - 2);
    for &i in idx {
        rhs.push(Expr::scale(weight.clone(), basis.c1(i).clone()));
    }
    let lhs = howe::make_ja(ctx, &union)?.casimir_expr();
    Ok(Identity::new(RelationId::CasimirDependency, idx.to_vec(), lhs, Expr::Sum(rhs)))
}

pub fn verify_dependency(basis: &CommutantBasis, subset: &[usize]) -> Result<bool> {
    Ok(dependency_identity(basis, subset)?.check().passed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Serial;

    fn basis(n: usize) -> CommutantBasis {
        CommutantBasis::new(Arc::new(So2nContext::new(n).unwrap()))
    }

    #[test]
    fn tuple_counts() {
        assert_eq!(distinct_tuples(3, 3).len(), 6);
        assert_eq!(distinct_tuples(5, 5).len(), 120);
        assert!(distinct_tuples(3, 4).is_empty());
    }

    #[test]
    fn g_and_k_shapes() {
        let ctx = So2nContext::new(3).unwrap();
        let l12 = ctx.l(1, 2);
        assert_eq!(make_g(&ctx, 1).unwrap(), &**l12 * &**l12);
        let g1 = make_g(&ctx, 1).unwrap();
        assert!(g1.commutator(l12).is_zero());
        assert!(g1.commutator(ctx.l(3, 4)).is_zero());
        let k12 = make_k(&ctx, 1, 2).unwrap();
        for s in 1..=3 {
            assert!(k12.commutator(ctx.l(2 * s - 1, 2 * s)).is_zero());
        }
        assert!(make_k(&ctx, 2, 2).is_err());
        assert!(make_k(&ctx, 1, 4).is_err());
        assert!(make_g(&ctx, 0).is_err());
    }

    #[test]
    fn f_antisymmetry_by_expansion() {
        let b = basis(3);
        for t in distinct_tuples(3, 3) {
            let (i, j, k) = (t[0], t[1], t[2]);
            let stored = b.f(i, j, k).eval();
            assert_eq!(*stored, b.f_direct(i, j, k));
            assert!((&b.f_direct(i, j, k) + &b.f_direct(k, j, i)).is_zero());
        }
    }

    #[test]
    fn p_symmetric_and_c_central() {
        let b = basis(4);
        assert_eq!(*b.p(1, 3).eval(), *b.p(3, 1).eval());
        for i in 1..=4 {
            for j in 1..=4 {
                for k in j + 1..=4 {
                    assert!(b.c(i).eval().commutator(&b.p(j, k).eval()).is_zero());
                }
            }
        }
    }

    #[test]
    fn p_is_c_pair_minus_singles() {
        let b = basis(3);
        let p = b.p(1, 2).eval();
        let rebuilt = &(&*b.c2(1, 2).eval() - &*b.c1(1).eval()) - &*b.c1(2).eval();
        assert_eq!(*p, rebuilt);
    }

    #[test]
    fn rank_one_sweep() {
        let b = basis(3);
        let report = verify_racah_relations(&b, &Serial);
        assert!(report.all_passed(), "{:?}", report.entries.iter().filter(|e| !e.passed).collect::<Vec<_>>());
        assert_eq!(report.count(RelationId::Racah(RacahRelation::PairBracket)), 6);
        assert_eq!(report.count(RelationId::Racah(RacahRelation::AdjacentBracket)), 6);
        for r in [RacahRelation::DisjointBracket, RacahRelation::OverlapTriple, RacahRelation::ChainTriple] {
            assert!(report.is_skipped(RelationId::Racah(r)));
        }
    }

    #[test]
    fn printed_single_constant_breaks_adjacent_relation() {
        let ctx = Arc::new(So2nContext::new(3).unwrap());
        let b = CommutantBasis::with_single_constant(ctx, Rational::frac(1, 4));
        let id = racah_instance(&b, RacahRelation::AdjacentBracket, &[1, 2, 3]);
        assert!(!id.check().passed);
        let id = racah_instance(&b, RacahRelation::PairBracket, &[1, 2, 3]);
        assert!(id.check().passed);
    }

    #[test]
    fn dependency_small_subsets() {
        let b = basis(3);
        assert!(verify_dependency(&b, &[1, 2]).unwrap());
        assert!(verify_dependency(&b, &[1, 2, 3]).unwrap());
        assert!(verify_dependency(&b, &[1]).is_err());
        assert!(verify_dependency(&b, &[1, 1]).is_err());
    }
}
