/*!
Finite-scale category theory for layered monoidal theories.

The crate is organised bottom-up: [`fincat`] holds explicit finite categories,
[`fibration`], [`profunctor`] and [`displayed`] check fibrational structure by
enumeration, [`montheory`] and [`layered`] implement the term syntax with
bounded provers, and [`indexedmon`] and [`deflation`] build the constructions
relating them.
*/

pub mod corpus;
pub mod deflation;
pub mod displayed;
pub mod fibration;
pub mod fincat;
pub mod format;
pub mod indexedmon;
pub mod layered;
pub mod montheory;
pub mod profunctor;
pub mod twocell;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    pub struct Intro;
    #[doc = include_str!("../../../book/src/fincat.md")]
    pub struct Fincat;
    #[doc = include_str!("../../../book/src/fibrations.md")]
    pub struct Fibrations;
    #[doc = include_str!("../../../book/src/profunctors.md")]
    pub struct Profunctors;
    #[doc = include_str!("../../../book/src/displayed.md")]
    pub struct Displayed;
    #[doc = include_str!("../../../book/src/montheory.md")]
    pub struct Montheory;
    #[doc = include_str!("../../../book/src/layered.md")]
    pub struct Layered;
    #[doc = include_str!("../../../book/src/indexedmon.md")]
    pub struct Indexedmon;
    #[doc = include_str!("../../../book/src/deflation.md")]
    pub struct Deflation;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
