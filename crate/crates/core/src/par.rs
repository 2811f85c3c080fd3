use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Whether independent checks may run on the rayon pool. Results are merged in
/// input order either way.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Exec {
    #[default]
    Sequential,
    Parallel,
}

impl Exec {
    pub fn from_flag(parallel: bool) -> Self {
        if parallel {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }

    pub(crate) fn map<T, U, F>(self, items: Vec<T>, f: F) -> Vec<U>
    where
        T: Send,
        U: Send,
        F: Fn(T) -> U + Sync + Send,
    {
        match self {
            Exec::Sequential => items.into_iter().map(f).collect(),
            Exec::Parallel => items.into_par_iter().map(f).collect(),
        }
    }
}
