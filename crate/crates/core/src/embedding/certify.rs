use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{op_norm, singular_values, Scalar, C64};
use crate::par::Exec;
use crate::sampling::{complex_vector, rational_vector, substream};

use super::family::OMEGA;
use super::phi::{phi, phi_block, phi_sup_norm};
use super::subset_sum::{best_subset_sum, l1_norm, roots_of_unity, SubsetSum};
use super::subsets::SubsetFamily;
use super::trace::{make_trace, weighted_trace, TraceScheme};

/// Slack for comparisons between computed norms.
const NORM_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbedParams {
    pub n_max: usize,
    pub f_cap: usize,
    pub s_max: usize,
    pub trials: usize,
    /// Exact multiplicativity trials with rational coefficients.
    pub rational_trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub l1_norm: f64,
    pub inf_norm: f64,
    pub sup_norm: f64,
    pub ratio: f64,
    /// Best subset found by the sweep and `|Σ_F a_j|` on it.
    pub witness_subset: Vec<usize>,
    pub witness_sum: f64,
    /// `‖φ(a)_F‖` on the witness subset.
    pub witness_block_norm: f64,
    pub trace_geometric: f64,
    pub trace_uniform: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
    pub witness_ok: bool,
    pub trace_ok: bool,
    pub trace_le_sup: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub params: EmbedParams,
    /// Size of the capped enumeration before per-trial augmentation.
    pub family_size: usize,
    pub records: Vec<TrialRecord>,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// `‖φ(δ_j)‖ / ‖δ_j‖_1` for `j = 1..=n_max`.
    pub delta_ratios: Vec<f64>,
    pub upper_tight: bool,
    pub lower_witnessed: bool,
    pub multiplicative_trials: usize,
    pub multiplicative_exact: bool,
    pub trace_ok_geometric: bool,
    pub trace_ok_uniform: bool,
    pub trace_le_sup: bool,
    pub pass: bool,
}

fn to_scalars(a: &[C64]) -> Vec<Scalar> {
    a.iter().map(|&z| Scalar::Float(z)).collect()
}

fn run_trial(trial: usize, a: &[C64], base: &SubsetFamily) -> Result<TrialRecord> {
    let l1 = l1_norm(a);
    let inf = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let SubsetSum { subset, value, .. } = best_subset_sum(a)?;
    let mut family = base.clone();
    family.insert(subset.clone())?;
    let coeffs = to_scalars(a);
    let e = phi(&coeffs, &family)?;
    // One decomposition per block serves both the sup norm and the trace norms.
    let svs = e
        .blocks
        .iter()
        .map(singular_values)
        .collect::<Result<Vec<_>>>()?;
    let sup_norm = svs.iter().map(|s| s[0]).fold(0.0, f64::max);
    let s1: Vec<f64> = svs.iter().map(|s| s.iter().sum()).collect();
    let witness = phi_block(&coeffs, &subset);
    let witness_block_norm = op_norm(&witness)?;
    let corner = witness.get(OMEGA, OMEGA).abs();
    let trace_geometric = weighted_trace(&s1, &make_trace(&family, TraceScheme::Geometric)?);
    let trace_uniform = weighted_trace(&s1, &make_trace(&family, TraceScheme::Uniform)?);
    let ratio = sup_norm / l1;

    let lower_ok = l1 / PI <= sup_norm + NORM_TOL;
    let upper_ok = sup_norm <= 3.0 * l1 + NORM_TOL;
    let witness_ok = (corner - value).abs() <= NORM_TOL * (1.0 + value)
        && value <= witness_block_norm + NORM_TOL
        && l1 / PI <= value + NORM_TOL;
    let trace_ok = trace_geometric <= 3.0 * inf + NORM_TOL && trace_uniform <= 3.0 * inf + NORM_TOL;
    let trace_le_sup =
        trace_geometric <= sup_norm + NORM_TOL && trace_uniform <= sup_norm + NORM_TOL;
    Ok(TrialRecord {
        trial,
        l1_norm: l1,
        inf_norm: inf,
        sup_norm,
        ratio,
        witness_subset: subset,
        witness_sum: value,
        witness_block_norm,
        trace_geometric,
        trace_uniform,
        lower_ok,
        upper_ok,
        witness_ok,
        trace_ok,
        trace_le_sup,
        pass: lower_ok && upper_ok && witness_ok && trace_ok && trace_le_sup,
    })
}

/// Checks `(1/π)‖a‖_1 ≤ ‖φ(a)‖ ≤ 3‖a‖_1` and `‖φ(a)‖_{L¹(τ)} ≤ min(3‖a‖_∞, ‖φ(a)‖)`
/// for both trace schemes on seeded complex trials, with each trial's family
/// augmented by its sweep-optimal subset; the upper bound is witnessed by the
/// point masses `δ_j` and multiplicativity is checked exactly on rational trials.
pub fn certify_embedding_bounds(params: EmbedParams, exec: Exec) -> Result<EmbeddingReport> {
    if params.trials == 0 {
        return Err(Error::pre(
            "embedding certification needs at least one trial",
        ));
    }
    let base = SubsetFamily::canonical(params.n_max, params.f_cap, params.s_max)?;
    let mut rng = substream(params.seed, "embed-trials");
    let samples: Vec<(usize, Vec<C64>)> = (0..params.trials)
        .map(|t| (t, complex_vector(&mut rng, params.n_max)))
        .collect();
    let records = exec
        .map(samples, |(t, a)| run_trial(t, &a, &base))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let delta_ratios = (1..=params.n_max)
        .map(|j| {
            let d: Vec<Scalar> = (1..=params.n_max)
                .map(|i| Scalar::int(i64::from(i == j)))
                .collect();
            phi_sup_norm(&phi(&d, &base)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let upper_tight = delta_ratios.iter().all(|r| (r - 3.0).abs() <= NORM_TOL);

    let mut qrng = substream(params.seed, "embed-multiplicative");
    let pairs: Vec<_> = (0..params.rational_trials)
        .map(|_| {
            (
                rational_vector(&mut qrng, params.n_max, 4),
                rational_vector(&mut qrng, params.n_max, 4),
            )
        })
        .collect();
    let multiplicative = exec
        .map(pairs, |(a, b)| -> Result<bool> {
            let ab: Vec<Scalar> = a
                .iter()
                .zip(&b)
                .map(|(x, y)| Scalar::Exact(x * y))
                .collect();
            let a: Vec<Scalar> = a.into_iter().map(Scalar::Exact).collect();
            let b: Vec<Scalar> = b.into_iter().map(Scalar::Exact).collect();
            let lhs = phi(&a, &base)?.product(&phi(&b, &base)?)?;
            Ok(lhs.blocks == phi(&ab, &base)?.blocks)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let min_ratio = records
        .iter()
        .map(|r| r.ratio)
        .fold(f64::INFINITY, f64::min);
    let max_ratio = records.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let lower_witnessed = records.iter().all(|r| r.witness_ok);
    let multiplicative_exact = multiplicative.iter().all(|&ok| ok);
    let trace_ok_geometric = records
        .iter()
        .all(|r| r.trace_geometric <= 3.0 * r.inf_norm + NORM_TOL);
    let trace_ok_uniform = records
        .iter()
        .all(|r| r.trace_uniform <= 3.0 * r.inf_norm + NORM_TOL);
    let trace_le_sup = records.iter().all(|r| r.trace_le_sup);
    let pass =
        records.iter().all(|r| r.pass) && upper_tight && lower_witnessed && multiplicative_exact;
    Ok(EmbeddingReport {
        params,
        family_size: base.len(),
        records,
        min_ratio,
        max_ratio,
        delta_ratios,
        upper_tight,
        lower_witnessed,
        multiplicative_trials: multiplicative.len(),
        multiplicative_exact,
        trace_ok_geometric,
        trace_ok_uniform,
        trace_le_sup,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootsRecord {
    pub n: usize,
    pub value: f64,
    pub ratio: f64,
    /// `1 / (n sin(π/n))`.
    pub closed_form: f64,
    pub above_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsetSumReport {
    pub trials: usize,
    pub max_support: usize,
    pub sweep_matches_exhaustive: bool,
    pub above_bound: bool,
    /// Smallest `value / ‖a‖_1` over the random trials.
    pub min_ratio: f64,
    pub roots: Vec<RootsRecord>,
    pub roots_decreasing: bool,
    pub pass: bool,
}

/// Random complex vectors with support sizes uniform on `1..=max_support`
/// (cross-checked exhaustively), plus the roots-of-unity series for `roots`.
pub fn certify_subset_sums(
    trials: usize,
    max_support: usize,
    seed: u64,
    roots: &[usize],
    exec: Exec,
) -> Result<SubsetSumReport> {
    use rand::Rng;
    if max_support == 0 || max_support > super::subset_sum::BRUTE_FORCE_MAX {
        return Err(Error::arg(format!(
            "max_support must lie in 1..={}",
            super::subset_sum::BRUTE_FORCE_MAX
        )));
    }
    let mut rng = substream(seed, "subset-sum-trials");
    let samples: Vec<Vec<C64>> = (0..trials)
        .map(|_| {
            let len = rng.random_range(1..=max_support);
            complex_vector(&mut rng, len)
        })
        .collect();
    let outcomes = exec
        .map(samples, |a| -> Result<(bool, f64)> {
            let s = best_subset_sum(&a)?;
            Ok((s.cross_check(1e-12), s.value / l1_norm(&a)))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let sweep_matches_exhaustive = outcomes.iter().all(|o| o.0);
    let min_ratio = outcomes.iter().map(|o| o.1).fold(f64::INFINITY, f64::min);
    let above_bound = outcomes.iter().all(|o| o.1 >= 1.0 / PI);

    let roots = roots
        .iter()
        .map(|&n| {
            let value = best_subset_sum(&roots_of_unity(n))?.value;
            let ratio = value / n as f64;
            Ok(RootsRecord {
                n,
                value,
                ratio,
                closed_form: 1.0 / (n as f64 * (PI / n as f64).sin()),
                above_bound: ratio > 1.0 / PI,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let roots_decreasing = roots.windows(2).all(|w| w[1].ratio < w[0].ratio);
    let pass = sweep_matches_exhaustive
        && above_bound
        && roots_decreasing
        && roots.iter().all(|r| r.above_bound);
    Ok(SubsetSumReport {
        trials,
        max_support,
        sweep_matches_exhaustive,
        above_bound,
        min_ratio,
        roots,
        roots_decreasing,
        pass,
    })
}
