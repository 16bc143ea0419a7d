//! Oracle-based matroids and their minors.
//!
//! A [`Matroid`] is a ground set plus an [`IndependenceOracle`]. All queries
//! go through a [`MinorView`], the matroid `M \ D / I` obtained by deleting
//! `D` and contracting `I`; the full matroid is the view with nothing removed.

mod axioms;
mod enumerate;
mod minor;

use std::fmt;
use std::sync::Arc;

pub use axioms::{verify_axioms, AxiomReport, AxiomViolation};
pub use enumerate::{SubsetTable, ENUMERATION_LIMIT};
pub use minor::{Cocircuit, ElementClass, MinorView};

use crate::catalog::MatroidSpec;
use crate::item::{GroundSet, ItemSet};

/// Answers "is this set independent?" for subsets of a fixed ground set.
///
/// Implementations must satisfy the matroid axioms; [`verify_axioms`] can
/// check that exhaustively on small ground sets.
pub trait IndependenceOracle: fmt::Debug + Send + Sync {
    fn is_independent(&self, set: ItemSet) -> bool;
}

/// A ground set with an independence oracle. Cheap to clone.
#[derive(Clone)]
pub struct Matroid {
    ground: Arc<GroundSet>,
    oracle: Arc<dyn IndependenceOracle>,
    spec: Option<Arc<MatroidSpec>>,
}

impl Matroid {
    pub fn new(ground: GroundSet, oracle: impl IndependenceOracle + 'static) -> Self {
        Matroid {
            ground: Arc::new(ground),
            oracle: Arc::new(oracle),
            spec: None,
        }
    }

    pub(crate) fn with_spec(mut self, spec: MatroidSpec) -> Self {
        self.spec = Some(Arc::new(spec));
        self
    }

    /// Same ground set and description, different oracle. Used to inject faults.
    pub fn with_oracle(&self, oracle: impl IndependenceOracle + 'static) -> Self {
        Matroid {
            ground: Arc::clone(&self.ground),
            oracle: Arc::new(oracle),
            spec: None,
        }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn oracle(&self) -> &Arc<dyn IndependenceOracle> {
        &self.oracle
    }

    /// The description this matroid was built from, if any.
    pub fn spec(&self) -> Option<&MatroidSpec> {
        self.spec.as_deref()
    }

    /// Raw oracle query; `set` must lie inside the ground set.
    pub fn is_independent(&self, set: ItemSet) -> bool {
        debug_assert!(set.is_subset(self.ground.all()));
        self.oracle.is_independent(set)
    }

    /// The view with nothing deleted or contracted.
    pub fn view(&self) -> MinorView {
        MinorView::new(self.clone())
    }

    pub fn rank(&self) -> usize {
        self.view().full_rank()
    }
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid")
            .field("ground", &self.ground.items())
            .field("oracle", &self.oracle)
            .finish()
    }
}
