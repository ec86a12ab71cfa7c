//! Identity instances, verification reports, and the execution hook.

use alloc::vec::Vec;
use core::fmt;

use crate::expr::Expr;

/// The five defining relations of the generalized Racah algebra, named by
/// the shape of their left-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RacahRelation {
    /// `[P^ij, P^jk] = 2 F^ijk`
    PairBracket,
    /// `[P^jk, F^ijk] = P^ik P^jk - P^jk P^ij + 2 P^ik C^j - 2 P^ij C^k`
    AdjacentBracket,
    /// `[P^kl, F^ijk] = P^ik P^jl - P^il P^jk`
    DisjointBracket,
    /// `[F^ijk, F^jkl] = F^jkl P^ij - F^ikl (P^jk + 2 C^j) - F^ijk P^jl`
    OverlapTriple,
    /// `[F^ijk, F^klm] = F^ilm P^jk - P^ik F^jlm`
    ChainTriple,
}

impl RacahRelation {
    pub const ALL: [RacahRelation; 5] = [
        RacahRelation::PairBracket,
        RacahRelation::AdjacentBracket,
        RacahRelation::DisjointBracket,
        RacahRelation::OverlapTriple,
        RacahRelation::ChainTriple,
    ];

    /// Number of distinct indices an instance uses.
    pub fn arity(self) -> usize {
        match self {
            RacahRelation::PairBracket | RacahRelation::AdjacentBracket => 3,
            RacahRelation::DisjointBracket | RacahRelation::OverlapTriple => 4,
            RacahRelation::ChainTriple => 5,
        }
    }

    fn suffix(self) -> &'static str {
        match self {
            RacahRelation::PairBracket => "pp",
            RacahRelation::AdjacentBracket => "pf-adjacent",
            RacahRelation::DisjointBracket => "pf-disjoint",
            RacahRelation::OverlapTriple => "ff-overlap",
            RacahRelation::ChainTriple => "ff-chain",
        }
    }
}

/// Label of a checked identity family. Variant order is report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationId {
    WeylSelfTest,
    Composition,
    O2nBracket,
    O2nCasimirCentral,
    Su11,
    HoweSu11,
    MetaplecticCasimir,
    HoweClosedForm,
    HoweDecomposition,
    HoweSingle,
    HowePair,
    HoweTotalCentral,
    Commutant,
    CasimirDependency,
    Racah(RacahRelation),
    ReducedSu11,
    ReducedCasimirSingle,
    ReducedCasimirPair,
    ReducedTotalCasimir,
    ReducedQAffine,
    ReducedSymmetry,
    ReducedRacah(RacahRelation),
}

impl RelationId {
    pub fn name(&self) -> alloc::string::String {
        match self {
            RelationId::WeylSelfTest => "weyl-self-test".into(),
            RelationId::Composition => "weyl-composition".into(),
            RelationId::O2nBracket => "o2n-bracket".into(),
            RelationId::O2nCasimirCentral => "o2n-casimir-central".into(),
            RelationId::Su11 => "su11".into(),
            RelationId::HoweSu11 => "howe-su11".into(),
            RelationId::MetaplecticCasimir => "metaplectic-casimir".into(),
            RelationId::HoweClosedForm => "howe-closed-form".into(),
            RelationId::HoweDecomposition => "howe-decomposition".into(),
            RelationId::HoweSingle => "howe-single".into(),
            RelationId::HowePair => "howe-pair".into(),
            RelationId::HoweTotalCentral => "howe-total-central".into(),
            RelationId::Commutant => "commutant".into(),
            RelationId::CasimirDependency => "casimir-dependency".into(),
            RelationId::Racah(r) => alloc::format!("racah-{}", r.suffix()),
            RelationId::ReducedSu11 => "reduced-su11".into(),
            RelationId::ReducedCasimirSingle => "reduced-casimir-single".into(),
            RelationId::ReducedCasimirPair => "reduced-casimir-pair".into(),
            RelationId::ReducedTotalCasimir => "reduced-total-casimir".into(),
            RelationId::ReducedQAffine => "reduced-q-affine".into(),
            RelationId::ReducedSymmetry => "reduced-symmetry".into(),
            RelationId::ReducedRacah(r) => alloc::format!("reduced-racah-{}", r.suffix()),
        }
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Verdict on one identity instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Check {
    pub passed: bool,
    pub residual_terms: usize,
}

/// How an entry was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Symbolic,
    Oracle,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportEntry {
    pub relation: RelationId,
    pub tuple: Vec<usize>,
    pub method: Method,
    pub passed: bool,
    /// Terms left in `lhs - rhs`; for oracle entries, the number of
    /// disagreeing trials.
    pub residual_terms: usize,
    pub ms: f64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skipped {
    pub relation: RelationId,
    pub reason: &'static str,
}

/// Ordered collection of entries, one per checked instance.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RelationReport {
    pub entries: Vec<ReportEntry>,
    pub skipped: Vec<Skipped>,
}

impl RelationReport {
    pub fn merge(&mut self, other: RelationReport) {
        self.entries.extend(other.entries);
        self.skipped.extend(other.skipped);
        self.sort();
    }

    /// Deterministic order: relation, method, index tuple.
    pub fn sort(&mut self) {
        self.entries.sort_by(|a, b| {
            (a.relation, a.method, &a.tuple).cmp(&(b.relation, b.method, &b.tuple))
        });
        self.skipped.sort_by_key(|s| s.relation);
        self.skipped.dedup();
    }

    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn passed(&self) -> usize {
        self.entries.iter().filter(|e| e.passed).count()
    }

    pub fn failed(&self) -> usize {
        self.entries.len() - self.passed()
    }

    pub fn count(&self, relation: RelationId) -> usize {
        self.entries.iter().filter(|e| e.relation == relation).count()
    }

    pub fn is_skipped(&self, relation: RelationId) -> bool {
        self.skipped.iter().any(|s| s.relation == relation)
    }
}

/// One instance of an operator identity `lhs = rhs`.
#[derive(Clone, Debug)]
pub struct Identity {
    pub relation: RelationId,
    pub tuple: Vec<usize>,
    pub lhs: Expr,
    pub rhs: Expr,
}

impl Identity {
    pub fn new(relation: RelationId, tuple: Vec<usize>, lhs: Expr, rhs: Expr) -> Self {
        Identity { relation, tuple, lhs, rhs }
    }

    /// Symbolic verdict: expand both sides and compare canonical forms.
    pub fn check(&self) -> Check {
        let residual = &*self.lhs.eval() - &*self.rhs.eval();
        Check { passed: residual.is_zero(), residual_terms: residual.num_terms() }
    }
}

/// Execution strategy for identity sweeps.
///
/// The core crate only ships [`Serial`]; a threaded runner with wall-clock
/// timing lives in the std companion crate.
pub trait Runner: Sync {
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send;

    /// Runs `f`, returning its result and elapsed milliseconds.
    fn timed<R>(&self, f: impl FnOnce() -> R) -> (R, f64) {
        (f(), 0.0)
    }
}

/// Runs everything on the calling thread; reports zero timings.
#[derive(Clone, Copy, Debug, Default)]
pub struct Serial;

impl Runner for Serial {
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        items.iter().map(f).collect()
    }
}

/// Symbolically checks every identity and collects a sorted report.
pub fn verify_identities<R: Runner>(identities: &[Identity], runner: &R) -> RelationReport {
    let entries = runner.map(identities, |id| {
        let (check, ms) = runner.timed(|| id.check());
        ReportEntry {
            relation: id.relation,
            tuple: id.tuple.clone(),
            method: Method::Symbolic,
            passed: check.passed,
            residual_terms: check.residual_terms,
            ms,
        }
    });
    let mut report = RelationReport { entries, skipped: Vec::new() };
    report.sort();
    report
}
