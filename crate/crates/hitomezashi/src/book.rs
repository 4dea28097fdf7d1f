//! The guide's chapters, re-exported as doc-tested modules so that every
//! runnable snippet in `book/` is compiled and executed by
//! `cargo test --doc`. The book cannot drift from the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/patterns.md")]
pub mod patterns {}

#[doc = include_str!("../../../book/src/loops.md")]
pub mod loops {}

#[doc = include_str!("../../../book/src/dyck.md")]
pub mod dyck {}

#[doc = include_str!("../../../book/src/slicing.md")]
pub mod slicing {}

#[doc = include_str!("../../../book/src/census.md")]
pub mod census {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
