//! Certification of multiplier-bounded approximate diagonals on a truncated chain.
//!
//! For each sample element `a = a₀ + λ·1` with `a₀` in the span of the chain:
//!
//! 1. `‖a₀ π(Δ_n) − a₀‖` must become exactly zero once `n` passes the top index of `a₀`;
//! 2. the commutators `a₀·Δ_n − Δ_n·a₀` must vanish;
//! 3. their projective norms are bounded by `C‖a₀‖`.
//!
//! The unitized diagonals `M_n` are checked against
//! `‖a·M_n − M_n·a‖ ≤ (2+K)‖a₀·Δ_n − Δ_n·a₀‖ + 2(1+K)‖a₀ − a₀u_n‖` per `n`, and
//! against `((2+K)C + 2(1+K)²)(‖a₀‖ + |λ|)` uniformly, where `u_n = π(Δ_n)` and
//! `K = sup ‖u_n‖`.

use serde::{Deserialize, Serialize};

use crate::chain::Chain;
use crate::error::Result;
use crate::matrix::{op_norm, span_coefficients, Matrix, Scalar, Tolerance};
use crate::par::Exec;

use super::delta::unitize_diagonal;
use super::tensor::{
    bimodule_commutator, flatten, pi_map, regroup, representation_upper, tensor_norm_bounds_with,
    TensorElem,
};

#[derive(Clone, Debug)]
pub struct SampleElement {
    pub label: String,
    pub a: Matrix,
}

impl SampleElement {
    pub fn new(label: impl Into<String>, a: Matrix) -> Self {
        SampleElement {
            label: label.into(),
            a,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MbadRecord {
    pub a_label: String,
    pub in_span: bool,
    /// Modulus of the identity component `λ`.
    pub identity_coeff: f64,
    /// Largest chain index with a nonzero coefficient in `a₀` (0 if none).
    pub top_index: usize,
    /// `‖a₀ π(Δ) − a₀‖` for the last diagonal in the list.
    pub eventual_residual: f64,
    /// One-based position from which every residual is zero.
    pub first_zero_at: Option<usize>,
    pub cond_i: bool,
    pub cond_ii: bool,
    /// `sup_n` of the projective-norm bounds on `a₀·Δ_n − Δ_n·a₀`.
    pub commutator_upper: f64,
    pub commutator_lower: f64,
    /// `sup_n upper / ‖a₀‖` (0 when `a₀ = 0`).
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub unitized_commutator_upper: f64,
    pub unitized_commutator_lower: f64,
    /// Per-`n` estimate held for every `n`.
    pub unitized_stepwise_ok: bool,
    /// The commutator identity for `M_n` held for every `n`.
    pub unitized_identity_ok: bool,
    /// `((2+K)C + 2(1+K)²)(‖a₀‖ + |λ|)` with the report-wide `C`.
    pub unitized_bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MbadReport {
    pub records: Vec<MbadRecord>,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "K")]
    pub k: f64,
    /// Labels of sample elements outside `span{1, e_1, ..., e_m}`.
    pub flagged: Vec<String>,
    pub verdict: bool,
}

struct Partial {
    record: MbadRecord,
    a0_norm: f64,
    unitized_sup: f64,
}

fn zero_or_within(m: &Matrix, tol: f64) -> bool {
    if m.is_exact() {
        m.is_zero()
    } else {
        m.max_abs() <= tol
    }
}

/// Certifies the multiplier-bounded approximate diagonal conditions for `deltas`
/// (in increasing order) over the sample.
pub fn certify_mbad(
    deltas: &[TensorElem],
    chain: &Chain,
    sample: &[SampleElement],
    tol: &Tolerance,
    exec: Exec,
) -> Result<MbadReport> {
    let one = chain.identity();
    let units: Vec<Matrix> = deltas.iter().map(pi_map).collect();
    let k = units
        .iter()
        .map(op_norm)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let unitized = deltas
        .iter()
        .zip(&units)
        .map(|(d, u)| unitize_diagonal(d, u, &one))
        .collect::<Result<Vec<_>>>()?;
    let mut basis = vec![one.clone()];
    basis.extend(chain.idempotents.iter().cloned());
    let abs = tol.abs_tol();

    let partials = exec.map(sample.to_vec(), |el| -> Result<Partial> {
        let mut record = MbadRecord {
            a_label: el.label.clone(),
            in_span: false,
            identity_coeff: 0.0,
            top_index: 0,
            eventual_residual: f64::NAN,
            first_zero_at: None,
            cond_i: false,
            cond_ii: false,
            commutator_upper: 0.0,
            commutator_lower: 0.0,
            c: 0.0,
            k,
            unitized_commutator_upper: 0.0,
            unitized_commutator_lower: 0.0,
            unitized_stepwise_ok: false,
            unitized_identity_ok: false,
            unitized_bound: f64::NAN,
            pass: false,
        };
        let Some(coeffs) = span_coefficients(&basis, &el.a, tol)? else {
            return Ok(Partial {
                record,
                a0_norm: 0.0,
                unitized_sup: 0.0,
            });
        };
        record.in_span = true;
        let lambda = coeffs[0].clone();
        record.identity_coeff = lambda.abs();
        record.top_index = coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
        let a0 = &el.a - &one.scale(&lambda);
        let a0_norm = op_norm(&a0)?;

        let mut residuals = Vec::with_capacity(deltas.len());
        let mut unitized_sup = 0.0f64;
        let mut stepwise_ok = true;
        let mut identity_ok = true;
        let mut comm_upper = Vec::with_capacity(deltas.len());
        for ((delta, u), m) in deltas.iter().zip(&units).zip(&unitized) {
            let gap_a = &(&a0 * u) - &a0;
            let residual_zero = zero_or_within(&gap_a, abs);
            let residual = op_norm(&gap_a)?;
            residuals.push((residual, residual_zero));

            let comm = bimodule_commutator(&a0, delta)?;
            let comm_flat = flatten(&comm);
            let bounds = tensor_norm_bounds_with(&comm, &comm_flat)?;
            record.commutator_lower = record.commutator_lower.max(bounds.lower);
            record.commutator_upper = record.commutator_upper.max(bounds.upper);
            comm_upper.push(bounds.upper);

            // a·M − M·a through its explicit representation.
            let direct = bimodule_commutator(&el.a, m)?;
            let comm_r = if comm_flat.is_zero() {
                TensorElem::zero(comm.dim())
            } else {
                regroup(&comm)
            };
            let gap_one = &one - u;
            let repr = comm_r
                .scale(&Scalar::int(2))
                .minus(&comm_r.left_mul(u)?)?
                .plus(&TensorElem::simple(
                    gap_a.scale(&Scalar::int(-1)),
                    gap_one.clone(),
                )?)?
                .minus(&TensorElem::simple(gap_one, gap_a.scale(&Scalar::int(-1)))?)?;
            let direct_flat = flatten(&direct);
            let id_cmp = if direct_flat.is_exact() {
                Tolerance::exact()
            } else if tol.is_exact() {
                Tolerance::default()
            } else {
                *tol
            };
            identity_ok &= flatten(&repr).agrees(&direct_flat, &id_cmp)?;
            let (lb, ub) = if direct_flat.is_zero() {
                (0.0, 0.0)
            } else {
                (op_norm(&direct_flat)?, representation_upper(&repr)?)
            };
            record.unitized_commutator_lower = record.unitized_commutator_lower.max(lb);
            record.unitized_commutator_upper = record.unitized_commutator_upper.max(ub);
            unitized_sup = unitized_sup.max(ub);
            let step_bound = (2.0 + k) * bounds.upper + 2.0 * (1.0 + k) * residual;
            stepwise_ok &= lb <= ub + abs.max(1e-9) && ub <= step_bound + abs.max(1e-9);
        }
        record.unitized_stepwise_ok = stepwise_ok;
        record.unitized_identity_ok = identity_ok;

        if let Some(&(last, _)) = residuals.last() {
            record.eventual_residual = last;
        }
        let zero_tail = residuals.iter().rev().take_while(|(_, z)| *z).count();
        record.first_zero_at = (zero_tail > 0).then(|| residuals.len() - zero_tail + 1);
        record.cond_i = zero_tail > 0;
        record.cond_ii = comm_upper.last().is_none_or(|&u| u <= abs);
        record.c = if a0_norm > 0.0 {
            record.commutator_upper / a0_norm
        } else {
            0.0
        };
        Ok(Partial {
            record,
            a0_norm,
            unitized_sup,
        })
    });
    let partials = partials.into_iter().collect::<Result<Vec<_>>>()?;

    let c = partials
        .iter()
        .filter(|p| p.record.in_span)
        .map(|p| p.record.c)
        .fold(0.0, f64::max);
    let mut records = Vec::with_capacity(partials.len());
    let mut flagged = Vec::new();
    for mut p in partials {
        if !p.record.in_span {
            flagged.push(p.record.a_label.clone());
            records.push(p.record);
            continue;
        }
        let unit_norm = p.a0_norm + p.record.identity_coeff;
        let bound = ((2.0 + k) * c + 2.0 * (1.0 + k).powi(2)) * unit_norm;
        p.record.unitized_bound = bound;
        p.record.pass = p.record.cond_i
            && p.record.cond_ii
            && p.record.commutator_upper <= c * p.a0_norm + abs.max(1e-9)
            && p.record.unitized_stepwise_ok
            && p.record.unitized_identity_ok
            && p.unitized_sup <= bound + abs.max(1e-9);
        records.push(p.record);
    }
    let verdict = records.iter().filter(|r| r.in_span).all(|r| r.pass);
    Ok(MbadReport {
        records,
        c,
        k,
        flagged,
        verdict,
    })
}
