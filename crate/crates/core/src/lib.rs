pub mod exact_numbers;
pub mod lattice_algebra;
pub mod flats_and_varieties;
pub mod asymptotics;
pub mod flow_engine;
pub mod numeric_verifier;
pub mod cli;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/numbers.md")]
    pub struct Numbers;
    #[doc = include_str!("../../../book/src/lattices.md")]
    pub struct Lattices;
    #[doc = include_str!("../../../book/src/flows.md")]
    pub struct Flows;
    #[doc = include_str!("../../../book/src/verification.md")]
    pub struct Verification;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
