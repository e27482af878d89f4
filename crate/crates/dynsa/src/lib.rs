//! Dynamic suffix arrays.
//!
//! Maintains a text under edits and answers suffix-array, inverted
//! suffix-array, BWT and LCP-array lookups without rebuilding:
//!
//! - [`csr::DynamicIsa`] answers `isa(i)` under substitutions, with
//!   `k = ⌈√n⌉` close-suffix ranks kept in lazily updated counter stores.
//! - [`dsa::DynamicSa`] answers `sa(i)`, `bwt(i)` and `lcp_entry(i)` under
//!   substitutions, inserts and deletes, with `k = ⌈n^(2/3)⌉`.
//!
//! Everything is checked against the brute-force reference code in
//! [`oracle`].
//!
//! # Examples
//!
//! The `examples/` directory has one program per building block:
//!
//! ```text
//! examples/
//! ├── lce_queries.rs        # dynamic text, LCE, old/new views
//! ├── range_counting.rs     # d-dimensional range tree
//! ├── stairs_updates.rs     # stairs stores and sequence reduction
//! ├── periodic_occurrences.rs  # k-words tree, POR, runs
//! ├── sorted_occurrences.rs # A_w selection and extension counting
//! ├── inverse_suffix_array.rs  # isa under substitutions
//! └── suffix_array.rs       # sa / bwt / lcp under edits
//! ```
//!
//! Run one with `cargo run --release --example inverse_suffix_array`.
//!
//! ```
//! use dynsa::csr::DynamicIsa;
//! use dynsa::dynstr::EditOp;
//!
//! let mut idx = DynamicIsa::new(b"banana").unwrap();
//! assert_eq!((1..=6).map(|i| idx.isa(i)).collect::<Vec<_>>(), [4, 3, 6, 2, 5, 1]);
//! idx.apply(EditOp::Substitute { pos: 1, sym: b'n' }).unwrap();
//! assert_eq!(idx.isa(1), 6);
//! ```

pub mod counters;
pub mod csr;
pub mod dsa;
pub mod dynstr;
pub mod ers;
pub mod occindex;
pub mod oracle;
pub mod rangetree;
pub mod stairs;
pub mod suffix_sort;

pub mod cli;

mod epoch;
pub use epoch::EpochPolicy;
