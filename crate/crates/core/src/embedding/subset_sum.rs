//! Maximizing `|Σ_{j∈F} a_j|` over subsets `F`.
//!
//! For a direction `θ`, the subset `{j : Re(a_j e^{-iθ}) > 0}` maximizes the
//! projection of the sum onto `e^{iθ}`, and the best subset is of this form
//! for `θ` the argument of its own sum. The set only changes when `θ` crosses
//! `arg a_j ± π/2`, so one evaluation per arc between critical angles suffices.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::C64;

/// Largest support for which the exhaustive cross-check runs.
pub const BRUTE_FORCE_MAX: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsetSum {
    /// One-based indices, increasing.
    pub subset: Vec<usize>,
    pub value: f64,
    /// Exhaustive maximum, when the support is small enough.
    pub brute_force: Option<f64>,
}

impl SubsetSum {
    /// Whether the exhaustive value (if any) agrees within `tol`.
    pub fn cross_check(&self, tol: f64) -> bool {
        self.brute_force
            .is_none_or(|b| (b - self.value).abs() <= tol * (1.0 + b))
    }
}

fn support(a: &[C64]) -> Result<Vec<usize>> {
    let s: Vec<usize> = (0..a.len())
        .filter(|&j| a[j] != C64::new(0.0, 0.0))
        .collect();
    if s.is_empty() {
        return Err(Error::arg("subset sum of a sequence with empty support"));
    }
    Ok(s)
}

fn sum_over(a: &[C64], idx: impl Iterator<Item = usize>) -> C64 {
    idx.map(|j| a[j]).sum()
}

/// Half-plane sweep, with the exhaustive maximum attached for supports of at
/// most [`BRUTE_FORCE_MAX`] elements.
pub fn best_subset_sum(a: &[C64]) -> Result<SubsetSum> {
    let supp = support(a)?;
    let mut crit: Vec<f64> = supp
        .iter()
        .flat_map(|&j| {
            let t = a[j].arg();
            [
                (t + PI / 2.0).rem_euclid(TAU),
                (t - PI / 2.0).rem_euclid(TAU),
            ]
        })
        .collect();
    crit.sort_by(f64::total_cmp);
    crit.dedup();
    let mut probes: Vec<f64> = crit.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    probes.push(0.5 * (crit[crit.len() - 1] + crit[0] + TAU));
    // The arguments themselves lie inside arcs; they guard against arcs too
    // narrow for a representable midpoint.
    probes.extend(supp.iter().map(|&j| a[j].arg()));

    let mut best: Option<(Vec<usize>, f64)> = None;
    for theta in probes {
        let rot = C64::from_polar(1.0, -theta);
        let set: Vec<usize> = supp
            .iter()
            .copied()
            .filter(|&j| (a[j] * rot).re > 0.0)
            .collect();
        let value = sum_over(a, set.iter().copied()).norm();
        if best.as_ref().is_none_or(|(_, v)| value > *v) {
            best = Some((set, value));
        }
    }
    let (set, value) = best.expect("at least one probe");
    let brute_force = (supp.len() <= BRUTE_FORCE_MAX)
        .then(|| brute_force_subset_sum(a).map(|b| b.1))
        .transpose()?;
    Ok(SubsetSum {
        subset: set.into_iter().map(|j| j + 1).collect(),
        value,
        brute_force,
    })
}

/// Exhaustive maximum over all nonempty subsets of the support (at most 24 elements).
pub fn brute_force_subset_sum(a: &[C64]) -> Result<(Vec<usize>, f64)> {
    let supp = support(a)?;
    if supp.len() > 24 {
        return Err(Error::arg(format!(
            "support of {} too large for exhaustive search",
            supp.len()
        )));
    }
    let mut best = (0u32, 0.0f64);
    for mask in 1u32..(1 << supp.len()) {
        let value = sum_over(
            a,
            (0..supp.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| supp[b]),
        )
        .norm();
        if value > best.1 {
            best = (mask, value);
        }
    }
    let subset = (0..supp.len())
        .filter(|b| best.0 >> b & 1 == 1)
        .map(|b| supp[b] + 1)
        .collect();
    Ok((subset, best.1))
}

/// `Σ |a_j|`.
pub fn l1_norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm()).sum()
}

/// `a_j = e^{2πij/n}` for `j = 0..n`.
pub fn roots_of_unity(n: usize) -> Vec<C64> {
    (0..n)
        .map(|j| C64::from_polar(1.0, TAU * j as f64 / n as f64))
        .collect()
}
