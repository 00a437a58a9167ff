use crate::bench::Engine;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{0}")]
    InvalidSpec(String),
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
    #[error("{path}: no point lines")]
    EmptyPoints { path: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown engine {0:?} (expected brute, kdtree-standard or kdtree-priority)")]
    UnknownEngine(String),
    #[error("benchmark cell engine={engine} k={k}: {source}")]
    Cell {
        engine: Engine,
        k: usize,
        #[source]
        source: Box<HarnessError>,
    },
    #[error(transparent)]
    Core(#[from] nnkit_core::Error),
}

impl HarnessError {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.display().to_string(), source }
    }
}
