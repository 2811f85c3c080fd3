use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Orders subsets by cardinality, then lexicographically.
pub fn canonical_cmp(a: &[usize], b: &[usize]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Nonempty subsets of `{1, ..., n_max}` in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetFamily {
    n_max: usize,
    subsets: Vec<Vec<usize>>,
}

impl SubsetFamily {
    /// The first `f_cap` subsets of cardinality at most `s_max`.
    pub fn canonical(n_max: usize, f_cap: usize, s_max: usize) -> Result<Self> {
        if n_max == 0 || f_cap == 0 || s_max == 0 {
            return Err(Error::arg("n_max, f_cap and s_max must be positive"));
        }
        let mut subsets = Vec::new();
        'sizes: for k in 1..=s_max.min(n_max) {
            let mut comb: Vec<usize> = (1..=k).collect();
            loop {
                if subsets.len() == f_cap {
                    break 'sizes;
                }
                subsets.push(comb.clone());
                // Next k-combination of 1..=n_max in lexicographic order.
                let Some(i) = (0..k).rev().find(|&i| comb[i] < n_max - (k - 1 - i)) else {
                    break;
                };
                comb[i] += 1;
                for t in i + 1..k {
                    comb[t] = comb[t - 1] + 1;
                }
            }
        }
        Ok(SubsetFamily { n_max, subsets })
    }

    /// Builds a family from explicit subsets, sorting each and the list.
    pub fn from_subsets(n_max: usize, subsets: Vec<Vec<usize>>) -> Result<Self> {
        let mut fam = SubsetFamily {
            n_max,
            subsets: Vec::with_capacity(subsets.len()),
        };
        for s in subsets {
            fam.insert(s)?;
        }
        Ok(fam)
    }

    /// Adds `subset` in canonical position; returns false if it was present.
    pub fn insert(&mut self, mut subset: Vec<usize>) -> Result<bool> {
        subset.sort_unstable();
        subset.dedup();
        if subset.is_empty() {
            return Err(Error::arg("subsets must be nonempty"));
        }
        if subset[0] == 0 || subset[subset.len() - 1] > self.n_max {
            return Err(Error::arg(format!(
                "subset {subset:?} not within 1..={}",
                self.n_max
            )));
        }
        match self.subsets.binary_search_by(|s| canonical_cmp(s, &subset)) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.subsets.insert(pos, subset);
                Ok(true)
            }
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn contains(&self, subset: &[usize]) -> bool {
        self.subsets
            .binary_search_by(|s| canonical_cmp(s, subset))
            .is_ok()
    }
}
