//! Exact quantization of surface invariants by (1+1)-dimensional TQFTs.
//!
//! Start with [`quantize::quantization_report`]. The guide in `book/`
//! walks through each module; its code blocks run as doctests here.

pub mod exactmath;
pub mod linalg;
pub mod frobenius;
pub mod quantize;
pub mod repvar;
pub mod document;
pub mod sl2data;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exact-arithmetic.md")]
    mod exact_arithmetic {}
    #[doc = include_str!("../../../book/src/recurrences.md")]
    mod recurrences {}
    #[doc = include_str!("../../../book/src/frobenius.md")]
    mod frobenius {}
    #[doc = include_str!("../../../book/src/group-counting.md")]
    mod group_counting {}
    #[doc = include_str!("../../../book/src/sl2.md")]
    mod sl2 {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
