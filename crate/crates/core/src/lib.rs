//! Exact arithmetic on elliptic surfaces over `Q(t)`.

pub mod curve;
pub mod expr;
pub mod fibers;
pub mod mw;
pub mod qfield;
pub mod split;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/arithmetic.md")]
    mod arithmetic {}
    #[doc = include_str!("../../../book/src/surfaces.md")]
    mod surfaces {}
    #[doc = include_str!("../../../book/src/heights.md")]
    mod heights {}
    #[doc = include_str!("../../../book/src/splitting.md")]
    mod splitting {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
