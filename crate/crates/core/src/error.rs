//! Error type shared across the simulation core.

/// Failures surfaced by the simulation core.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A matrix inverse was requested for a numerically singular matrix.
    #[error("matrix is numerically singular (det = {det:e})")]
    Singular { det: f64 },

    /// A consensus operation received no messages.
    #[error("inbox is empty")]
    EmptyInbox,

    /// Rejection sampling gave up before finding a connected graph.
    #[error("no connected graph after {attempts} attempts (n = {n}, connectivity = {connectivity})")]
    GraphSampling {
        n: usize,
        connectivity: f64,
        attempts: u32,
    },

    /// A configuration field is out of range or inconsistent.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A failure inside a Monte Carlo trial, tagged with the trial index.
    #[error("trial {trial}: {source}")]
    Trial {
        trial: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wrap an error with the Monte Carlo trial it occurred in.
    pub fn in_trial(self, trial: u64) -> Error {
        Error::Trial {
            trial,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
