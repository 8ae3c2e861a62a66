//! Proof nets for linear logic with the paragraph modality.
//!
//! The crate covers the net data model and its validation, a builder for
//! sequentializable nets, Danos-Regnier correctness, integer indexings,
//! cut-elimination with residue tracking, and three deciders for linear
//! logic by levels (indexing, geometric, interactive).

pub mod builder;
pub mod canon;
pub mod correctness;
pub mod formula;
pub mod generate;
pub mod interactive;
pub mod graph;
pub mod io;
pub mod net;
pub mod rewrite;
pub mod validate;

pub use formula::{EdgeLabel, Formula, ParseError};
pub use net::{BoxId, EdgeId, Element, Layout, Link, LinkId, LinkKind, Net, NetBox};
pub use validate::{validate, ValidationReport, Violation};
