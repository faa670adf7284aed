use crate::ring::BiDegree;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the engine. Parse and input-shape problems carry
/// positions; cap/cutoff failures carry the bound that was exhausted.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ring signature mismatch: ({0}, {1}) vs ({2}, {3})")]
    SignatureMismatch(usize, usize, usize, usize),

    #[error("not bihomogeneous: monomial `{first}` has bidegree ({fx}, {ft}) but `{second}` has ({sx}, {st})")]
    NotBihomogeneous {
        first: String,
        fx: i64,
        ft: i64,
        second: String,
        sx: i64,
        st: i64,
    },

    #[error("relation entry ({row}, {col}) has bidegree ({gx}, {gt}) but the shifts force ({ex}, {et})")]
    WrongEntryDegree {
        row: usize,
        col: usize,
        gx: i64,
        gt: i64,
        ex: i64,
        et: i64,
    },

    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },

    #[error("invalid module file: {0}")]
    ModuleFile(String),

    #[error("slice x-cutoff {cutoff} exceeded: induced relation has x-degree {required}")]
    SliceCutoff { cutoff: i64, required: i64 },

    #[error("Cech dimensions did not stabilize below the maximum cap {max_cap} at bidegree ({x}, {t})")]
    NonStabilized { max_cap: u32, x: i64, t: i64 },

    #[error("module is not Cohen-Macaulay: Ext^{q} is nonzero at bidegree ({}, {})", witness.x, witness.t)]
    NotCohenMacaulay { q: usize, witness: BiDegree },

    #[error("resolution of length {have} is too short; {required} stages are required")]
    ResolutionTooShort { have: usize, required: usize },

    #[error("operation requires base and fiber variable counts to agree; got ({0}, {1})")]
    RequiresSquareSignature(usize, usize),

    #[error("precondition violated: {0}")]
    Precondition(String),
}
