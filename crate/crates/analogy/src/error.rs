use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("missing input file {}", .0.display())]
    Missing(PathBuf),
    #[error("{}:{line}: {message}", path.display())]
    Malformed { path: PathBuf, line: usize, message: String },
    #[error("{}:{line}: duplicate product id {id:?} (first seen on line {first})", path.display())]
    DuplicateId { path: PathBuf, id: String, first: usize, line: usize },
    #[error("{}: unsupported version {found} (expected {expected})", path.display())]
    UnsupportedVersion { path: PathBuf, found: u32, expected: u32 },
    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("refusing to overwrite input file {}", .0.display())]
    WouldOverwriteInput(PathBuf),
    #[error("product {id:?}: {source}")]
    InProduct {
        id: String,
        #[source]
        source: analogy_core::Error,
    },
    #[error(transparent)]
    Core(#[from] analogy_core::Error),
}

pub type Result<T, E = FormatError> = std::result::Result<T, E>;
