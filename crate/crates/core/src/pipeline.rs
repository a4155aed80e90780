//! The geometry shared by the orbit, invariant and report stages: the
//! binary algebra, `Δ`, the dozens, `G_2(2)` acting on `Δ`, and the sign
//! group.

use thiserror::Error;

use crate::aut::{self, AutError, BinaryAutomorphism};
use crate::binary::{BinaryAlgebra, BinaryError, DeltaPair, Dozen, OrthogonalityRule};
use crate::invariants::InvariantError;
use crate::monomial::{LiftMode, MonomialError, MonomialGroup, SignGroup};
use crate::orbits::OrbitError;
use crate::perm::{self, Perm28, PermGroup};

/// Largest number of Z/4 unknowns the lift solver accepts by default.
pub const DEFAULT_LIFT_BUDGET: usize = 1024;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Binary(#[from] BinaryError),
    #[error(transparent)]
    Aut(#[from] AutError),
    #[error(transparent)]
    Monomial(#[from] MonomialError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("automorphisms act on Δ with a kernel: {images} distinct permutations from {automorphisms} maps")]
    UnfaithfulAction { automorphisms: usize, images: usize },
    #[error("no two elements generate the permutation group")]
    NoGenerators,
}

#[derive(Debug)]
pub struct Geometry {
    pub algebra: BinaryAlgebra,
    pub delta: Vec<DeltaPair>,
    pub rule: OrthogonalityRule,
    pub dozens: Vec<Dozen>,
    pub automorphisms: Vec<BinaryAutomorphism>,
    /// The automorphisms acting on `Δ`, sorted.
    pub perms: Vec<Perm28>,
    pub group: PermGroup,
    pub sign: SignGroup,
}

impl Geometry {
    /// Run the automorphism search and assemble everything.
    pub fn build(search_budget: u64) -> Result<Self, PipelineError> {
        let algebra = BinaryAlgebra::new()?;
        let automorphisms = aut::aut_group_search(&algebra, search_budget)?;
        Self::from_automorphisms(algebra, automorphisms)
    }

    /// Assemble from a previously computed automorphism list.
    pub fn from_automorphisms(
        algebra: BinaryAlgebra,
        automorphisms: Vec<BinaryAutomorphism>,
    ) -> Result<Self, PipelineError> {
        let delta = algebra.build_delta();
        let (rule, dozens) = algebra.build_dozens(&delta)?;
        let mut perms: Vec<Perm28> = automorphisms.iter().map(|g| aut::perm_image(g, &delta)).collect();
        perms.sort_unstable();
        perms.dedup();
        if perms.len() != automorphisms.len() {
            return Err(PipelineError::UnfaithfulAction {
                automorphisms: automorphisms.len(),
                images: perms.len(),
            });
        }
        let gens = perm::two_generators(&perms).ok_or(PipelineError::NoGenerators)?;
        let group = PermGroup::from_generators(gens.to_vec());
        let sign = SignGroup::new(&dozens);
        Ok(Geometry {
            algebra,
            delta,
            rule,
            dozens,
            automorphisms,
            perms,
            group,
            sign,
        })
    }

    /// The monomial group: a verified lift for [`LiftMode::Search`], the
    /// unsigned permutation action for [`LiftMode::None`].
    pub fn monomial_group(&self, mode: LiftMode, budget: usize) -> Result<MonomialGroup, PipelineError> {
        Ok(match mode {
            LiftMode::Search => MonomialGroup::search(&self.group, &self.sign, budget)?,
            LiftMode::None => MonomialGroup::unsigned(&self.group, &self.sign),
        })
    }
}
