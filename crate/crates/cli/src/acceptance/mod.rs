//! The acceptance suite: ten criteria, each checked against brute-force
//! oracles written independently of the library code they test.
//!
//! `cantor verify-all` and the `acceptance` test target both run this.

mod correlation;
mod digits;
mod ergodic;
mod intersective;
mod oracle;
mod residues;
mod sums;

use cantor_core::{Error, Result};

/// Failure messages kept per criterion.
const KEPT_FAILURES: usize = 8;

/// Running count of checks and failures for one criterion.
#[derive(Debug, Default)]
pub struct Tally {
    checks: u64,
    failed: u64,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(what());
            }
        }
    }

    /// A measured value worth reporting whether or not it passes.
    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub checks: u64,
    pub failed: u64,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checks > 0
    }

    pub fn detail(&self) -> String {
        let mut parts = Vec::new();
        if self.failed > 0 {
            parts.push(format!(
                "{} of {} checks failed: {}",
                self.failed,
                self.checks,
                self.failures.join("; ")
            ));
        } else if self.checks == 0 {
            parts.push("no checks ran".to_string());
        }
        parts.extend(self.notes.iter().cloned());
        parts.join("; ")
    }
}

type Criterion = fn(&mut Tally) -> Result<()>;

pub const CRITERIA: &[(u32, &str, Criterion)] = &[
    (1, "index and element bijection", digits::bijection),
    (2, "self-similarity and shifted differences", digits::structure),
    (3, "Riesz products equal averages", sums::riesz_identity),
    (4, "limit classification", sums::trichotomy),
    (5, "residues modulo q", residues::mod_distributions),
    (6, "difference-avoiding sets", intersective::avoiding_sets),
    (7, "van der Corput polynomials", intersective::cosine_polynomials),
    (8, "additive energy and pair counts", correlation::energies),
    (9, "pair correlation of seeded dilates", correlation::pair_correlation_metric),
    (10, "ergodic averages and recurrence", ergodic::averages_and_recurrence),
];

pub fn run_criterion(id: u32) -> Result<Outcome> {
    let &(id, name, body) = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .ok_or_else(|| Error::InvalidArgument(format!("no criterion {id}; they run 1 to 10")))?;
    let mut tally = Tally::default();
    if let Err(e) = body(&mut tally) {
        tally.check(false, || format!("stopped by error: {e}"));
    }
    Ok(Outcome {
        id,
        name,
        checks: tally.checks,
        failed: tally.failed,
        failures: tally.failures,
        notes: tally.notes,
    })
}

/// Runs the chosen criteria, or all of them, in order.
pub fn run(only: Option<&[u32]>) -> Result<Vec<Outcome>> {
    let ids: Vec<u32> = match only {
        Some(ids) => ids.to_vec(),
        None => CRITERIA.iter().map(|c| c.0).collect(),
    };
    ids.into_iter().map(run_criterion).collect()
}
