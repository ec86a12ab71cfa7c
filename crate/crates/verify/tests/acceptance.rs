//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Every identity checked symbolically here is also handed to the
//! point-evaluation oracle in the concordance criterion, so that check
//! covers exactly the population of the criteria before it.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use racah_core::howe::{correspondence_identities, howe_identities};
use racah_core::liealg::{
    casimir_centrality_identities, o2n_identities, quadratic_casimir, quadratic_casimir_with_bound, So2nContext,
};
use racah_core::oracle::{composition_report, oracle_equiv_expr};
use racah_core::racah::{commutant_identities, racah_identities, CommutantBasis};
use racah_core::reduction::{
    reduced_casimir_single, reduced_identities, total_casimir_identity, ReducedBasis, ReducedContext,
};
use racah_core::report::RacahRelation;
use racah_core::{AlgebraSignature, Identity, Monomial, Operator, ParamPoly, Rational, RelationId, Runner};
use racah_verify::Parallel;

const ORACLE_TRIALS: usize = 100;
const COMPOSITION_TRIALS: usize = 1000;
const PROPERTY_CASES: u32 = 500;
const SEED: u64 = 0x5eed;

struct Pool {
    runner: Parallel,
    /// Every identity checked so far with its symbolic verdict.
    checked: Vec<(Identity, bool)>,
}

impl Pool {
    fn check(&mut self, ids: Vec<Identity>) -> Vec<bool> {
        let verdicts = self.runner.map(&ids, |id| id.check().passed);
        self.checked.extend(ids.into_iter().zip(verdicts.iter().copied()));
        verdicts
    }

    /// Checks `ids`, returning (instances, failures).
    fn sweep(&mut self, ids: Vec<Identity>) -> (usize, usize) {
        let v = self.check(ids);
        (v.len(), v.iter().filter(|&&p| !p).count())
    }
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn o2n_structure(pool: &mut Pool) -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for n in [3, 4, 5] {
        let ctx = So2nContext::new(n).unwrap();
        let start = Instant::now();
        let (count, bad) = pool.sweep(o2n_identities(&ctx));
        let secs = start.elapsed().as_secs_f64();
        let limit = if n == 3 { 1.0 } else { 60.0 };
        ok &= bad == 0 && count > 0 && secs < limit;
        detail.push(format!("n={n}: {count} brackets, {bad} nonzero, {secs:.3}s"));
    }
    outcome(ok, detail.join("; "))
}

fn casimir_centrality(pool: &mut Pool) -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for n in [3, 4] {
        let ctx = So2nContext::new(n).unwrap();
        let (count, bad) = pool.sweep(casimir_centrality_identities(&ctx, &quadratic_casimir(&ctx)));
        let short = quadratic_casimir_with_bound(&ctx, n).unwrap();
        let (_, short_bad) = pool.sweep(casimir_centrality_identities(&ctx, &short));
        ok &= bad == 0 && count == n * (2 * n - 1) && short_bad > 0;
        detail.push(format!("n={n}: bound 2n {bad}/{count} noncentral, bound n {short_bad}/{count} noncentral"));
    }
    outcome(ok, detail.join("; "))
}

fn relation_counts(pool: &mut Pool, ids: Vec<Identity>) -> Vec<(RelationId, usize, usize)> {
    let rel: Vec<RelationId> = ids.iter().map(|i| i.relation).collect();
    let v = pool.check(ids);
    let mut out: Vec<(RelationId, usize, usize)> = Vec::new();
    for (r, p) in rel.into_iter().zip(v) {
        match out.iter_mut().find(|e| e.0 == r) {
            Some(e) => {
                e.1 += 1;
                e.2 += usize::from(!p);
            }
            None => out.push((r, 1, usize::from(!p))),
        }
    }
    out
}

fn racah_relations(pool: &mut Pool) -> Outcome {
    let required: [(usize, &[RacahRelation]); 3] = [
        (3, &[RacahRelation::PairBracket, RacahRelation::AdjacentBracket]),
        (4, &RacahRelation::ALL[..4]),
        (5, &RacahRelation::ALL),
    ];
    let mut detail = Vec::new();
    let mut ok = true;
    for (n, rels) in required {
        let basis = CommutantBasis::new(Arc::new(So2nContext::new(n).unwrap()));
        let start = Instant::now();
        let (ids, skipped) = racah_identities(&basis, &RacahRelation::ALL);
        let counts = relation_counts(pool, ids);
        let secs = start.elapsed().as_secs_f64();
        for &r in rels {
            let id = RelationId::Racah(r);
            let hit = counts.iter().find(|c| c.0 == id);
            ok &= matches!(hit, Some(&(_, c, 0)) if c > 0);
        }
        let inadmissible = RacahRelation::ALL.iter().filter(|r| r.arity() > n).count();
        ok &= skipped.len() == inadmissible;
        let bad: usize = counts.iter().map(|c| c.2).sum();
        let total: usize = counts.iter().map(|c| c.1).sum();
        ok &= bad == 0 && (n < 5 || secs < 600.0);
        detail.push(format!("n={n}: {total} instances, {bad} failing, {} skipped, {secs:.1}s", skipped.len()));
    }
    outcome(ok, detail.join("; "))
}

fn commutant(pool: &mut Pool) -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for n in [3, 4, 5] {
        let basis = CommutantBasis::new(Arc::new(So2nContext::new(n).unwrap()));
        let (count, bad) = pool.sweep(commutant_identities(&basis));
        let expected = n * n + n * (n - 1) / 2 * n;
        ok &= bad == 0 && count == expected;
        detail.push(format!("n={n}: {bad}/{count} noncommuting"));
    }
    outcome(ok, detail.join("; "))
}

fn howe_layer(pool: &mut Pool) -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for n in [3, 4] {
        let ctx = Arc::new(So2nContext::new(n).unwrap());
        let basis = CommutantBasis::new(ctx.clone());
        let mut ids = howe_identities(&ctx);
        ids.extend(correspondence_identities(&basis));
        let counts = relation_counts(pool, ids);
        for r in [
            RelationId::HoweClosedForm,
            RelationId::HoweDecomposition,
            RelationId::HoweSingle,
            RelationId::HowePair,
        ] {
            ok &= counts.iter().any(|c| c.0 == r && c.1 > 0);
        }
        let closed = counts.iter().find(|c| c.0 == RelationId::HoweClosedForm).map_or(0, |c| c.1);
        let bad: usize = counts.iter().map(|c| c.2).sum();
        ok &= bad == 0 && closed == (1 << n) - 1;
        detail.push(format!("n={n}: {closed} pair-unions, {bad} failing"));
    }
    outcome(ok, detail.join("; "))
}

fn single_reference(ctx: &ReducedContext, i: usize) -> Operator {
    let mut a = vec![0u16; ctx.n()];
    a[i - 1] = 1;
    let coeff = ParamPoly::from_terms(
        ctx.n(),
        [(a.into(), Rational::frac(-1, 4)), (vec![0u16; ctx.n()].into(), Rational::frac(-3, 16))],
    )
    .unwrap();
    let one = Monomial::identity(ctx.n());
    Operator::from_terms(ctx.signature(), [(one, coeff)]).unwrap()
}

fn reduction_layer(pool: &mut Pool) -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for n in [2, 3, 4] {
        let ctx = ReducedContext::new(n).unwrap();
        let basis = ReducedBasis::new(&ctx);
        let ids: Vec<Identity> = reduced_identities(&ctx, &basis)
            .into_iter()
            .filter(|id| {
                matches!(
                    id.relation,
                    RelationId::ReducedSu11
                        | RelationId::ReducedCasimirSingle
                        | RelationId::ReducedCasimirPair
                        | RelationId::ReducedTotalCasimir
                        | RelationId::ReducedQAffine
                )
            })
            .collect();
        let (count, bad) = pool.sweep(ids);
        let singles = (1..=n).all(|i| reduced_casimir_single(&ctx, i).unwrap() == single_reference(&ctx, i));
        let total = total_casimir_identity(&ctx);
        ok &= bad == 0 && singles && total;
        detail.push(format!("n={n}: {bad}/{count} failing, single casimirs {singles}, total {total}"));
    }
    outcome(ok, detail.join("; "))
}

fn superintegrability(pool: &mut Pool) -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for n in [3, 4] {
        let ctx = ReducedContext::new(n).unwrap();
        let basis = ReducedBasis::new(&ctx);
        let sym: Vec<Identity> = reduced_identities(&ctx, &basis)
            .into_iter()
            .filter(|id| id.relation == RelationId::ReducedSymmetry)
            .collect();
        let (count, bad) = pool.sweep(sym);
        ok &= bad == 0 && count == n * (n - 1) / 2;
        let (ids, _) = racah_identities(&basis, &RacahRelation::ALL);
        let (rcount, rbad) = pool.sweep(ids);
        ok &= rbad == 0 && rcount > 0;
        detail.push(format!("n={n}: [Q_ij, C] {bad}/{count} nonzero, reduced racah {rbad}/{rcount} failing"));
    }
    outcome(ok, detail.join("; "))
}

fn oracle_concordance(pool: &Pool) -> Outcome {
    let start = Instant::now();
    let agree = pool.runner.map(&pool.checked, |(id, symbolic)| {
        let sig = id.lhs.eval().signature().clone();
        oracle_equiv_expr(&sig, &id.lhs, &id.rhs, ORACLE_TRIALS, SEED).map_or(false, |v| v.agrees() == *symbolic)
    });
    let mismatched = agree.iter().filter(|&&a| !a).count();
    let failing = pool.checked.iter().filter(|c| !c.1).count();
    let poly = Arc::new(AlgebraSignature::polynomial(6).unwrap());
    let local = Arc::new(AlgebraSignature::new(4, &[1, 2, 3, 4], 4).unwrap());
    let mut comp_fail = 0;
    for sig in [&poly, &local] {
        comp_fail += composition_report(sig, COMPOSITION_TRIALS, SEED, &pool.runner).entries[0].residual_terms;
    }
    outcome(
        mismatched == 0 && comp_fail == 0,
        format!(
            "{} identities ({failing} symbolically false) x {ORACLE_TRIALS} trials: {mismatched} verdict mismatches; \
             composition {COMPOSITION_TRIALS} trials x 2 algebras: {comp_fail} failures; {:.1}s",
            pool.checked.len(),
            start.elapsed().as_secs_f64()
        ),
    )
}

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=12).prop_map(|(p, q)| Rational::frac(p, q))
}

fn operator(sig: Arc<AlgebraSignature>) -> impl Strategy<Value = Operator> {
    let term = (0i16..3, -2i16..3, 0i16..3, 0i16..3, rational());
    prop::collection::vec(term, 0..4).prop_map(move |terms| {
        Operator::from_terms(
            &sig,
            terms.into_iter().map(|(x1, x2, d1, d2, c)| {
                (Monomial::new(&sig, &[x1, x2], &[d1, d2]).unwrap(), ParamPoly::constant(c, 0))
            }),
        )
        .unwrap()
    })
}

fn property_suites() -> Outcome {
    let config = Config { cases: PROPERTY_CASES, failure_persistence: None, ..Config::default() };
    let sig = Arc::new(AlgebraSignature::new(2, &[2], 0).unwrap());
    let mut results = Vec::new();

    let mut runner = TestRunner::new(config.clone());
    results.push((
        "ring axioms",
        runner.run(&(rational(), rational(), rational()), |(a, b, c)| {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
            Ok(())
        })
        .map_err(|e| e.to_string()),
    ));

    let ops = (operator(sig.clone()), operator(sig.clone()), operator(sig.clone()));
    let mut runner = TestRunner::new(config.clone());
    results.push((
        "associativity/jacobi",
        runner.run(&ops, |(a, b, c)| {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            let j = &(&a.commutator(&b.commutator(&c)) + &b.commutator(&c.commutator(&a)))
                + &c.commutator(&a.commutator(&b));
            prop_assert!(j.is_zero());
            Ok(())
        })
        .map_err(|e| e.to_string()),
    ));

    let mut runner = TestRunner::new(config);
    results.push((
        "parse/print round-trip",
        runner.run(&operator(sig.clone()), |a| {
            prop_assert_eq!(Operator::parse(&sig, &a.to_string()).unwrap(), a);
            Ok(())
        })
        .map_err(|e| e.to_string()),
    ));

    let ok = results.iter().all(|r| r.1.is_ok());
    let detail = results
        .iter()
        .map(|(name, r)| format!("{name}: {}", if r.is_ok() { "ok".to_string() } else { format!("{r:?}") }))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(ok, format!("{PROPERTY_CASES} cases each; {detail}"))
}

fn main() -> ExitCode {
    let jobs = std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1);
    let mut pool = Pool { runner: Parallel::new(jobs).expect("thread pool"), checked: Vec::new() };

    let criteria: Vec<(&str, Outcome)> = vec![
        ("o(2n) structure", o2n_structure(&mut pool)),
        ("casimir centrality", casimir_centrality(&mut pool)),
        ("racah commutant relations", racah_relations(&mut pool)),
        ("commutant property", commutant(&mut pool)),
        ("howe layer", howe_layer(&mut pool)),
        ("reduction layer", reduction_layer(&mut pool)),
        ("superintegrability", superintegrability(&mut pool)),
        ("oracle concordance", oracle_concordance(&pool)),
        ("property suites", property_suites()),
    ];

    let mut failed = 0;
    for (i, (name, o)) in criteria.iter().enumerate() {
        println!("{} [{}] {name}: {}", if o.passed { "PASS" } else { "FAIL" }, i + 1, o.detail);
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
