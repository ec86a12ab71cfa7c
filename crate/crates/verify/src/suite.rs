use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use racah_core::howe::{correspondence_identities, howe_identities, su11_identities, total_central_identities};
use racah_core::liealg::{casimir_centrality_identities, o2n_identities, quadratic_casimir, So2nContext};
use racah_core::oracle::{composition_report, oracle_report};
use racah_core::racah::{commutant_identities, dependency_identity, racah_identities, CommutantBasis};
use racah_core::reduction::{self, reduced_identities, ReducedBasis, ReducedContext};
use racah_core::report::{verify_identities, RacahRelation, Skipped};
use racah_core::weyl::self_test_identities;
use racah_core::{AlgebraSignature, Identity, RelationReport};

use crate::config::{RunConfig, Suite};
use crate::output::Sink;
use crate::runner::Parallel;
use crate::Error;

/// Totals over every reported entry.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub n: usize,
    pub seed: u64,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    fn absorb(&mut self, r: &RelationReport) {
        self.total += r.entries.len();
        self.passed += r.passed();
        self.failed += r.failed();
        self.skipped += r.skipped.len();
    }
}

struct Batch {
    title: &'static str,
    identities: Vec<Identity>,
    skipped: Vec<Skipped>,
}

impl Batch {
    fn new(title: &'static str, identities: Vec<Identity>) -> Self {
        Batch { title, identities, skipped: Vec::new() }
    }
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() >= 2)
        .map(move |m| (1..=n).filter(|i| m >> (i - 1) & 1 == 1).collect())
}

fn o2n_batch(ctx: &So2nContext) -> Batch {
    let mut ids = o2n_identities(ctx);
    ids.extend(casimir_centrality_identities(ctx, &quadratic_casimir(ctx)));
    Batch::new("o2n", ids)
}

fn racah_batch(basis: &CommutantBasis) -> Result<Batch, Error> {
    let mut ids = commutant_identities(basis);
    for a in subsets(basis.context().n()) {
        ids.push(dependency_identity(basis, &a)?);
    }
    let (rel, skipped) = racah_identities(basis, &RacahRelation::ALL);
    ids.extend(rel);
    Ok(Batch { title: "racah", identities: ids, skipped })
}

fn reduction_batch(ctx: &ReducedContext) -> Batch {
    let basis = ReducedBasis::new(ctx);
    let mut ids = reduced_identities(ctx, &basis);
    let (rel, skipped) = racah_identities(&basis, &RacahRelation::ALL);
    ids.extend(rel);
    Batch { title: "reduction", identities: ids, skipped }
}

/// Writes `Q_i_j.txt` for `i < j` and `C_total.txt` in operator text form.
pub fn emit_reduced(ctx: &ReducedContext, dir: &Path) -> Result<Vec<String>, Error> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let n = ctx.n();
    for i in 1..=n {
        for j in i + 1..=n {
            let name = format!("Q_{i}_{j}.txt");
            fs::write(dir.join(&name), format!("{}\n", reduction::make_q(ctx, i, j)?))?;
            written.push(name);
        }
    }
    fs::write(dir.join("C_total.txt"), format!("{}\n", reduction::total_casimir(ctx)))?;
    written.push("C_total.txt".to_string());
    Ok(written)
}

/// Runs the configured suites, streaming each section to `out` as it
/// completes. Identity failures are reported in the summary, not as `Err`.
pub fn run<W: Write>(config: &RunConfig, out: W) -> Result<Summary, Error> {
    config.validate()?;
    let runner = Parallel::new(config.jobs)?;
    let mut sink = Sink::new(config.output, out);
    let mut summary = Summary { n: config.n, seed: config.seed, ..Summary::default() };
    let n = config.n;

    let oracle_only = config.suites.len() == 1 && config.runs(Suite::Oracle);
    let wants = |s: Suite| config.runs(s) || oracle_only;

    let mut batches = vec![Batch::new("weyl", self_test_identities())];
    let ctx = Arc::new(So2nContext::new(n)?);
    if wants(Suite::O2n) {
        batches.push(o2n_batch(&ctx));
    }
    let basis = (wants(Suite::Howe) || wants(Suite::Racah)).then(|| CommutantBasis::new(ctx.clone()));
    if wants(Suite::Su11) {
        batches.push(Batch::new("su11", su11_identities(&ctx)));
    }
    if wants(Suite::Howe) {
        let mut ids = howe_identities(&ctx);
        ids.extend(correspondence_identities(basis.as_ref().expect("built for howe")));
        batches.push(Batch::new("howe", ids));
    } else if wants(Suite::Racah) {
        batches.push(Batch::new("howe-total", total_central_identities(&ctx)));
    }
    if let Some(b) = basis.as_ref().filter(|_| wants(Suite::Racah)) {
        batches.push(racah_batch(b)?);
    }
    let reduced = if wants(Suite::Reduction) || config.emit.is_some() {
        Some(ReducedContext::new(n)?)
    } else {
        None
    };
    if let Some(rctx) = reduced.as_ref().filter(|_| wants(Suite::Reduction)) {
        batches.push(reduction_batch(rctx));
    }

    for b in &batches {
        if oracle_only && b.title != "weyl" {
            continue;
        }
        sink.section(b.title)?;
        let mut report = verify_identities(&b.identities, &runner);
        report.skipped = b.skipped.clone();
        report.sort();
        for e in &report.entries {
            sink.entry(e)?;
        }
        for s in &report.skipped {
            sink.skipped(s)?;
        }
        sink.flush()?;
        summary.absorb(&report);
    }

    if config.runs(Suite::Oracle) {
        sink.section("oracle")?;
        let ids: Vec<Identity> = batches.iter().flat_map(|b| b.identities.iter().cloned()).collect();
        let mut report = oracle_report(&ids, config.trials, config.seed, &runner);
        let poly = Arc::new(AlgebraSignature::polynomial(2 * n)?);
        let local = Arc::new(AlgebraSignature::new(n, &(1..=n).collect::<Vec<_>>(), n)?);
        report.merge(composition_report(&poly, config.trials, config.seed, &runner));
        report.merge(composition_report(&local, config.trials, config.seed, &runner));
        for e in &report.entries {
            sink.entry(e)?;
        }
        sink.flush()?;
        summary.absorb(&report);
    }

    if let (Some(dir), Some(rctx)) = (config.emit.as_ref(), reduced.as_ref()) {
        for name in emit_reduced(rctx, dir)? {
            sink.note(&format!("wrote {}", dir.join(name).display()))?;
        }
    }

    sink.summary(&summary)?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_enumeration() {
        let all: Vec<_> = subsets(3).collect();
        assert_eq!(all.len(), 4);
        assert!(all.contains(&vec![1, 2, 3]));
        assert_eq!(subsets(5).count(), 26);
    }
}
