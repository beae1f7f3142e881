//! The user guide, embedded so its code examples run as doc-tests.
//!
//! Each module below is one chapter of the mdbook under `book/` at the
//! repository root, included verbatim. `cargo test --doc` therefore
//! compiles and runs every example the book shows, which keeps the
//! guide honest: a chapter that drifts from the API fails the build.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}

#[doc = include_str!("../../../book/src/verdicts.md")]
pub mod verdicts {}

#[doc = include_str!("../../../book/src/systems.md")]
pub mod systems {}

#[doc = include_str!("../../../book/src/subshifts.md")]
pub mod subshifts {}

#[doc = include_str!("../../../book/src/estimators.md")]
pub mod estimators {}

#[doc = include_str!("../../../book/src/rules.md")]
pub mod rules {}

#[doc = include_str!("../../../book/src/reports.md")]
pub mod reports {}
