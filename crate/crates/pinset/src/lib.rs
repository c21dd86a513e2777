//! Text formats, solver pipeline and experiment harness on top of
//! `pinset-core`.

pub mod bn;
pub mod cli;
pub mod experiment;
pub mod pipeline;
pub mod tss_format;

pub use bn::{
    parse_document, parse_network, serialize_document, serialize_network, NetworkDocument,
    ParseError,
};
pub use pipeline::{
    reduce, solve, Method, PipelineError, Reduced, ReductionKind, Solution, SolveOptions,
};
pub use tss_format::{parse_tss, serialize_tss};
