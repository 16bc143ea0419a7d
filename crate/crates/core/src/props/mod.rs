//! Randomized property suites over small matroids.

mod checks;
mod recheck;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{build_matroid, random_matroid_spec, Family, MatroidSpec, Shape};
use crate::error::{Error, Result};
use crate::item::{GroundSet, ItemSet};
use crate::matroid::{IndependenceOracle, Matroid, SubsetTable};

pub use checks::{
    check_circuit_contraction, check_cocircuit_exchange, check_cocircuits_after_deletion,
    check_cocircuits_before_deletion, check_dawson_augmentation, check_strong_base_exchange, PAIR_LIMIT,
    SMALL_LIMIT,
};
pub use recheck::recheck;

/// A concrete violation, in terms of item indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Counterexample {
    /// `cocircuit - e` has a member in no cocircuit of `M \ e` inside it.
    CocircuitAfterDeletion { e: usize, cocircuit: ItemSet, uncovered: usize },
    /// `cocircuit` of `M \ e` where `C` and `C + e` are both, or neither,
    /// cocircuits of `M`.
    CocircuitBeforeDeletion { e: usize, cocircuit: ItemSet },
    /// Adding heaviest `e` of a cocircuit of `M / independent` loses optimality.
    Augmentation {
        independent: ItemSet,
        cocircuit: ItemSet,
        e: usize,
        weights: Vec<i64>,
    },
    /// The drawn independent set does not extend to an optimal base, which
    /// only a faulty oracle can cause.
    NotExtendable { independent: ItemSet, weights: Vec<i64> },
    CocircuitExchange { first: ItemSet, second: ItemSet, e: usize },
    StrongBaseExchange { hat: ItemSet, base: ItemSet, e: usize },
    CircuitContraction { e: usize, circuit: ItemSet },
    /// The minor's rank of `x` after contracting `z` was reported wrongly.
    RankIdentity { x: ItemSet, z: ItemSet, reported: usize },
}

impl Counterexample {
    pub fn describe(&self, g: &GroundSet) -> String {
        let s = |set: &ItemSet| g.display(*set);
        let i = |e: &usize| g.item(*e).to_string();
        match self {
            Counterexample::CocircuitAfterDeletion { e, cocircuit, uncovered } => format!(
                "cocircuit {} minus `{}`: `{}` lies in no cocircuit of the deletion inside it",
                s(cocircuit),
                i(e),
                i(uncovered)
            ),
            Counterexample::CocircuitBeforeDeletion { e, cocircuit } => format!(
                "cocircuit {} of the deletion of `{}`: not exactly one of it and its extension is a cocircuit",
                s(cocircuit),
                i(e)
            ),
            Counterexample::Augmentation {
                independent,
                cocircuit,
                e,
                weights,
            } => format!(
                "weights {weights:?}: adding `{}` from cocircuit {} to {} loses optimality",
                i(e),
                s(cocircuit),
                s(independent)
            ),
            Counterexample::NotExtendable { independent, weights } => format!(
                "weights {weights:?}: drawn set {} does not extend to an optimal base",
                s(independent)
            ),
            Counterexample::CocircuitExchange { first, second, e } => format!(
                "cocircuits {} and {} share `{}` but their union minus it holds no cocircuit",
                s(first),
                s(second),
                i(e)
            ),
            Counterexample::StrongBaseExchange { hat, base, e } => format!(
                "bases {} and {}: no partner for `{}`",
                s(hat),
                s(base),
                i(e)
            ),
            Counterexample::CircuitContraction { e, circuit } => {
                format!("circuit {} breaks under contracting `{}`", s(circuit), i(e))
            }
            Counterexample::RankIdentity { x, z, reported } => format!(
                "rank of {} after contracting {} reported as {reported}",
                s(x),
                s(z)
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CheckName {
    #[serde(rename = "check_cocircuits_after_deletion")]
    CocircuitsAfterDeletion,
    #[serde(rename = "check_cocircuits_before_deletion")]
    CocircuitsBeforeDeletion,
    #[serde(rename = "check_dawson_augmentation")]
    DawsonAugmentation,
    #[serde(rename = "check_cocircuit_exchange")]
    CocircuitExchange,
    #[serde(rename = "check_strong_base_exchange")]
    StrongBaseExchange,
    #[serde(rename = "check_circuit_contraction")]
    CircuitContraction,
}

impl CheckName {
    pub const ALL: [CheckName; 6] = [
        CheckName::CocircuitsAfterDeletion,
        CheckName::CocircuitsBeforeDeletion,
        CheckName::DawsonAugmentation,
        CheckName::CocircuitExchange,
        CheckName::StrongBaseExchange,
        CheckName::CircuitContraction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckName::CocircuitsAfterDeletion => "check_cocircuits_after_deletion",
            CheckName::CocircuitsBeforeDeletion => "check_cocircuits_before_deletion",
            CheckName::DawsonAugmentation => "check_dawson_augmentation",
            CheckName::CocircuitExchange => "check_cocircuit_exchange",
            CheckName::StrongBaseExchange => "check_strong_base_exchange",
            CheckName::CircuitContraction => "check_circuit_contraction",
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Deliberate oracle faults, for testing that the suite notices them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    #[default]
    None,
    /// Reports the first base in ascending-id greedy order as dependent.
    HideBase,
}

#[derive(Debug)]
struct HiddenBase {
    inner: Arc<dyn IndependenceOracle>,
    hidden: ItemSet,
}

impl IndependenceOracle for HiddenBase {
    fn is_independent(&self, set: ItemSet) -> bool {
        set != self.hidden && self.inner.is_independent(set)
    }
}

impl Mutation {
    pub fn apply(self, m: &Matroid) -> Matroid {
        match self {
            Mutation::None => m.clone(),
            Mutation::HideBase => {
                let hidden = m.view().greedy_basis(m.ground().all());
                if hidden.is_empty() {
                    return m.clone();
                }
                m.with_oracle(HiddenBase {
                    inner: m.oracle().clone(),
                    hidden,
                })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub families: Vec<Family>,
    /// Trials per family.
    pub trials: usize,
    pub seed: u64,
    pub max_items: usize,
    #[serde(default)]
    pub mutation: Mutation,
}

impl SuiteConfig {
    pub fn new(families: Vec<Family>, trials: usize, seed: u64) -> Self {
        SuiteConfig {
            families,
            trials,
            seed,
            max_items: 8,
            mutation: Mutation::None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: usize,
    pub family: Family,
    pub check: CheckName,
    pub matroid: MatroidSpec,
    pub detail: String,
    /// Whether the first-principles recheck confirmed the violation.
    pub confirmed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub config: SuiteConfig,
    pub tallies: BTreeMap<Family, BTreeMap<CheckName, Tally>>,
    pub failures: Vec<Failure>,
}

impl SuiteSummary {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn table(&self) -> String {
        let mut out = format!("{:<34}", "check");
        for family in self.tallies.keys() {
            out.push_str(&format!("{:>14}", family.to_string()));
        }
        out.push('\n');
        for check in CheckName::ALL {
            out.push_str(&format!("{:<34}", check.name()));
            for tallies in self.tallies.values() {
                let t = tallies.get(&check).copied().unwrap_or_default();
                out.push_str(&format!("{:>14}", format!("{}/{}", t.passed, t.passed + t.failed)));
            }
            out.push('\n');
        }
        for f in &self.failures {
            out.push_str(&format!(
                "FAIL {} trial {} ({}): {}{}\n",
                f.check,
                f.trial,
                f.family,
                f.detail,
                if f.confirmed { "" } else { " [not confirmed]" }
            ));
        }
        out
    }
}

/// Draws for one trial: the matroid and the sets each check is applied to.
struct Trial {
    spec: MatroidSpec,
    matroid: Matroid,
    e: Option<usize>,
    weights: Vec<i64>,
    independent: ItemSet,
}

fn draw(family: Family, max_items: usize, mutation: Mutation, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let shape = Shape::sample(family, max_items, rng);
    let spec = random_matroid_spec(shape, rng)?;
    let matroid = mutation.apply(&build_matroid(&spec)?);
    let n = matroid.ground().len();
    let e = (n > 0).then(|| rng.random_range(0..n));
    let weights: Vec<i64> = (0..n).map(|_| rng.random_range(0..=9)).collect();
    // a random part of a random optimal base is independent and extendable
    let table = SubsetTable::build(&matroid.view())?;
    let best = table.max_base_weight(&weights);
    let optimal: Vec<ItemSet> = table
        .bases()
        .into_iter()
        .filter(|b| b.iter().map(|f| weights[f]).sum::<i64>() == best)
        .collect();
    let base = *optimal.choose(rng).expect("some base is optimal");
    let independent = base.iter().filter(|_| rng.random_bool(0.5)).collect();
    Ok(Trial {
        spec,
        matroid,
        e,
        weights,
        independent,
    })
}

type Verdicts = Vec<(CheckName, Option<Counterexample>)>;

fn run_trial(trial: &Trial) -> Result<Verdicts> {
    let m = &trial.matroid;
    let mut out = Vec::new();
    if let Some(e) = trial.e {
        out.push((CheckName::CocircuitsAfterDeletion, check_cocircuits_after_deletion(m, e)?));
        out.push((CheckName::CocircuitsBeforeDeletion, check_cocircuits_before_deletion(m, e)?));
    }
    // a faulty oracle can break the augmentation precondition; count that as a failure
    let augmentation = match check_dawson_augmentation(m, &trial.weights, trial.independent) {
        Err(Error::Input(_)) => Some(Counterexample::NotExtendable {
            independent: trial.independent,
            weights: trial.weights.clone(),
        }),
        other => other?,
    };
    out.push((CheckName::DawsonAugmentation, augmentation));
    out.push((CheckName::CocircuitExchange, check_cocircuit_exchange(m)?));
    out.push((CheckName::StrongBaseExchange, check_strong_base_exchange(m)?));
    if let Some(e) = trial.e {
        out.push((CheckName::CircuitContraction, check_circuit_contraction(m, e)?));
    }
    Ok(out)
}

/// Runs every check on `trials` random matroids of each family.
///
/// Trial `t` of the `k`-th family draws from its own generator stream, so
/// the summary depends only on the configuration and is the same however
/// the trials are scheduled.
pub fn run_property_suite(config: &SuiteConfig) -> Result<SuiteSummary> {
    if config.max_items > PAIR_LIMIT {
        return Err(Error::TooLarge {
            what: "max_items",
            size: config.max_items,
            limit: PAIR_LIMIT,
        });
    }
    let jobs: Vec<(usize, Family, usize)> = config
        .families
        .iter()
        .enumerate()
        .flat_map(|(k, &f)| (0..config.trials).map(move |t| (k, f, t)))
        .collect();
    let results: Vec<(Family, usize, Trial, Verdicts)> = jobs
        .into_par_iter()
        .map(|(k, family, t)| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream((k * config.trials + t) as u64);
            let trial = draw(family, config.max_items, config.mutation, &mut rng)?;
            let verdicts = run_trial(&trial)?;
            Ok((family, t, trial, verdicts))
        })
        .collect::<Result<_>>()?;
    let mut tallies: BTreeMap<Family, BTreeMap<CheckName, Tally>> = BTreeMap::new();
    let mut failures = Vec::new();
    for (family, t, trial, verdicts) in results {
        let family_tallies = tallies.entry(family).or_default();
        for (check, verdict) in verdicts {
            let tally = family_tallies.entry(check).or_default();
            match verdict {
                None => tally.passed += 1,
                Some(c) => {
                    tally.failed += 1;
                    let confirmed = recheck(&trial.matroid, &c);
                    failures.push(Failure {
                        trial: t,
                        family,
                        check,
                        matroid: trial.spec.clone(),
                        detail: c.describe(trial.matroid.ground()),
                        confirmed,
                    });
                }
            }
        }
    }
    Ok(SuiteSummary {
        config: config.clone(),
        tallies,
        failures,
    })
}
