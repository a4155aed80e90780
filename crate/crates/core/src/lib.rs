pub mod aut;
pub mod binary;
pub mod character;
pub mod f2;
pub mod fermion;
pub mod invariants;
pub mod monomial;
pub mod octonion;
pub mod orbits;
pub mod perm;
pub mod pipeline;
pub mod report;
pub mod series;
pub mod z4;
