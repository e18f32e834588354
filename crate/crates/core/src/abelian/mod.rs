//! Finite abelian groups, characters, coset presentations with cocycle
//! phases, and the congruence solver used to pick untwisted
//! representatives.

mod characters;
mod congruence;
mod coset;
mod group;
mod phase;
mod subgroup;

pub use characters::{CharacterDeviations, CharacterTable};
pub use congruence::{solve_congruence_system, CongruenceSolution, TwistSystem};
pub use coset::{cocycle_phases, lifted_characters, rebase_phases, CocycleData, CosetPresentation, RootChoice};
pub use group::FiniteAbelianGroup;
pub use phase::{format_rational, parse_rational, Phase};
pub use subgroup::{cyclic_basis_mod, Subgroup};
