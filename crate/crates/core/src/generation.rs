//! Single generators for algebras spanned by pairwise-orthogonal idempotents.
//!
//! For orthogonal idempotents `f_1, f_2, ...` and weights `λ_1 > λ_2 > ... > 0`
//! put `b = Σ λ_j f_j`. Then `b^r = Σ λ_j^r f_j`, and with the residual
//! generator `b_m = b - Σ_{j<m} λ_j f_j`,
//!
//! ```text
//! ‖f_m - (b_m / λ_m)^r‖ ≤ (1/λ_m) (λ_{m+1}/λ_m)^(r-1) Σ_{j>m} λ_j ‖f_j‖
//! ```
//!
//! so every `f_m` is a norm limit of polynomials in `b`. A chain `e_1 ≤ e_2 ≤ ...`
//! is handled through its orthogonal differences ([`Chain::orthogonal_family`]),
//! which span the same algebra.
//!
//! [`Chain::orthogonal_family`]: crate::chain::Chain::orthogonal_family

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{
    format_rational, numerical_rank, op_norm, parse_rational, rat_from_f64, Backend, Matrix,
    Scalar, Tolerance,
};
use crate::par::Exec;

/// Strictly decreasing, strictly positive rational weights.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSeq {
    lambdas: Vec<BigRational>,
}

impl WeightSeq {
    pub fn new(lambdas: Vec<BigRational>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::arg("weight sequence is empty"));
        }
        if lambdas.iter().any(|l| !l.is_positive()) {
            return Err(Error::pre("weights must be strictly positive"));
        }
        if lambdas.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::pre("weights must be strictly decreasing"));
        }
        Ok(WeightSeq { lambdas })
    }

    /// `λ_j = 4^-j / (1 + ⌈max_{i≤j} ‖f_i‖⌉)`, which keeps `Σ λ_j ‖f_j‖ ≤ Σ 4^-j`
    /// even when the idempotent norms are unbounded.
    pub fn default_for(family: &[Matrix]) -> Result<Self> {
        let mut running_max = 0.0f64;
        let mut lambdas = Vec::with_capacity(family.len());
        for (j, f) in family.iter().enumerate() {
            running_max = running_max.max(op_norm(f)?);
            let ceil = rat_from_f64(running_max.ceil())?;
            let four_pow = BigRational::from_integer(num_traits::pow(BigInt::from(4), j + 1));
            lambdas.push(BigRational::one() / (four_pow * (BigRational::one() + ceil)));
        }
        Self::new(lambdas)
    }

    /// `λ_j = q^j` for `0 < q < 1`.
    pub fn geometric(q: &BigRational, len: usize) -> Result<Self> {
        if !(q.is_positive() && *q < BigRational::one()) {
            return Err(Error::pre("geometric weight ratio must lie in (0, 1)"));
        }
        Self::new((1..=len).map(|j| num_traits::pow(q.clone(), j)).collect())
    }

    pub fn scaled(&self, c: &BigRational) -> Result<Self> {
        Self::new(self.lambdas.iter().map(|l| l * c).collect())
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn lambdas(&self) -> &[BigRational] {
        &self.lambdas
    }

    fn lambda_f64(&self, j: usize) -> f64 {
        self.lambdas[j].to_f64().unwrap_or(0.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WeightScheme {
    Default,
    Geometric(BigRational),
}

impl WeightScheme {
    /// Parses `default` or `geometric:Q`.
    pub fn parse(desc: &str) -> Result<Self> {
        match desc.trim().split_once(':') {
            None if desc.trim() == "default" => Ok(WeightScheme::Default),
            Some(("geometric", q)) => Ok(WeightScheme::Geometric(parse_rational(q)?)),
            _ => Err(Error::arg(format!(
                "unknown weight scheme `{desc}` (expected default or geometric:Q)"
            ))),
        }
    }

    pub fn weights(&self, family: &[Matrix]) -> Result<WeightSeq> {
        match self {
            WeightScheme::Default => WeightSeq::default_for(family),
            WeightScheme::Geometric(q) => WeightSeq::geometric(q, family.len()),
        }
    }
}

impl std::fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeightScheme::Default => write!(f, "default"),
            WeightScheme::Geometric(q) => write!(f, "geometric:{}", format_rational(q)),
        }
    }
}

fn weighted_sum(
    family: &[Matrix],
    w: &WeightSeq,
    range: std::ops::Range<usize>,
    dim: usize,
) -> Matrix {
    let backend = if family.iter().all(Matrix::is_exact) {
        Backend::Exact
    } else {
        Backend::Float
    };
    range.fold(Matrix::zeros(dim, dim, backend), |acc, j| {
        &acc + &family[j].scale(&Scalar::from(w.lambdas[j].clone()))
    })
}

fn check_family(family: &[Matrix]) -> Result<usize> {
    let dim = family
        .first()
        .ok_or_else(|| Error::arg("empty idempotent family"))?
        .rows();
    if family.iter().any(|f| !f.is_square() || f.rows() != dim) {
        return Err(Error::dim("idempotents must be square of one common size"));
    }
    Ok(dim)
}

/// `b = Σ_j λ_j f_j`, exact when the inputs are.
pub fn single_generator(family: &[Matrix], w: &WeightSeq) -> Result<Matrix> {
    let dim = check_family(family)?;
    if w.len() != family.len() {
        return Err(Error::arg(format!(
            "{} weights for {} idempotents",
            w.len(),
            family.len()
        )));
    }
    Ok(weighted_sum(family, w, 0..family.len(), dim))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualRecord {
    pub m: usize,
    pub r: u32,
    pub residual: f64,
    pub bound: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexCertificate {
    pub m: usize,
    /// `λ_{m+1} / λ_m`, zero for the last index.
    pub rate: f64,
    pub records: Vec<ResidualRecord>,
    pub bound_holds: bool,
    /// Residuals strictly decrease (or are exactly zero) over the last `⌈r_max/2⌉` powers.
    pub tail_decreasing: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationCertificate {
    pub per_index: Vec<IndexCertificate>,
    /// Rank of the recovered limits `(b_m/λ_m)^r_max`, of the family, and of both together.
    pub ranks: (usize, usize, usize),
    pub span_matches: bool,
    pub passed: bool,
}

impl GenerationCertificate {
    pub fn records(&self) -> impl Iterator<Item = &ResidualRecord> {
        self.per_index.iter().flat_map(|c| c.records.iter())
    }
}

/// Rank tolerance for comparing recovered limits with the family.
pub const SPAN_RANK_TOL: f64 = 1e-8;

fn check_orthogonal(family: &[Matrix], tol: &Tolerance) -> Result<()> {
    let cmp = if family.iter().all(Matrix::is_exact) {
        Tolerance::exact()
    } else if tol.is_exact() {
        Tolerance::default()
    } else {
        *tol
    };
    for (i, a) in family.iter().enumerate() {
        for (j, b) in family.iter().enumerate() {
            let p = a.checked_mul(b)?;
            let ok = if i == j {
                p.agrees(a, &cmp)?
            } else {
                p.max_abs() <= cmp.abs_tol()
            };
            if !ok {
                return Err(Error::pre(format!(
                    "f_{} f_{} breaks pairwise orthogonality of idempotents",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

/// Certifies that `(b_m/λ_m)^r → f_m` at the geometric rate for every `m`.
pub fn certify_generation(
    family: &[Matrix],
    w: &WeightSeq,
    r_max: u32,
    tol: &Tolerance,
    exec: Exec,
) -> Result<GenerationCertificate> {
    if r_max < 2 {
        return Err(Error::pre("r_max must be at least 2"));
    }
    let b = single_generator(family, w)?;
    check_orthogonal(family, tol)?;
    let dim = b.rows();
    let norms = family.iter().map(op_norm).collect::<Result<Vec<f64>>>()?;
    let n = family.len();
    let tail_len = r_max.div_ceil(2) as usize;

    let per_index = exec.map(
        (0..n).collect(),
        |i| -> Result<(IndexCertificate, Matrix)> {
            let lambda_m = w.lambda_f64(i);
            let b_m = &b - &weighted_sum(family, w, 0..i, dim);
            let inv = Scalar::from(BigRational::one() / w.lambdas[i].clone());
            let step = b_m.scale(&inv);
            let tail_mass: f64 = (i + 1..n).map(|j| w.lambda_f64(j) * norms[j]).sum();
            let rate = if i + 1 < n {
                w.lambda_f64(i + 1) / lambda_m
            } else {
                0.0
            };

            let mut power = step.clone();
            let mut records = Vec::with_capacity(r_max as usize);
            for r in 1..=r_max {
                if r > 1 {
                    power = power.checked_mul(&step)?;
                }
                let residual = op_norm(&(&family[i] - &power))?;
                let bound = if tail_mass == 0.0 {
                    0.0
                } else {
                    tail_mass / lambda_m * rate.powi(r as i32 - 1)
                };
                records.push(ResidualRecord {
                    m: i + 1,
                    r,
                    residual,
                    bound,
                    passed: residual <= bound + tol.abs_tol(),
                });
            }
            let bound_holds = records.iter().all(|rec| rec.passed);
            let tail = &records[records.len() - tail_len..];
            let tail_decreasing = tail
                .windows(2)
                .all(|p| p[1].residual < p[0].residual || p[1].residual == 0.0);
            Ok((
                IndexCertificate {
                    m: i + 1,
                    rate,
                    records,
                    bound_holds,
                    tail_decreasing,
                    passed: bound_holds && tail_decreasing,
                },
                power,
            ))
        },
    );
    let (per_index, limits): (Vec<_>, Vec<_>) = per_index
        .into_iter()
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();

    let stack = |ms: &[&Matrix]| -> Result<usize> {
        let rows = ms.len();
        let cols = dim * dim;
        let mut data = Vec::with_capacity(rows * cols);
        for m in ms {
            data.extend(m.float_data());
        }
        numerical_rank(&Matrix::from_float(rows, cols, data)?, SPAN_RANK_TOL)
    };
    let lim_refs: Vec<&Matrix> = limits.iter().collect();
    let fam_refs: Vec<&Matrix> = family.iter().collect();
    let both: Vec<&Matrix> = lim_refs.iter().chain(fam_refs.iter()).copied().collect();
    let ranks = (stack(&lim_refs)?, stack(&fam_refs)?, stack(&both)?);
    let span_matches = ranks.0 == ranks.1 && ranks.1 == ranks.2;
    let passed = span_matches && per_index.iter().all(|c| c.passed);
    Ok(GenerationCertificate {
        per_index,
        ranks,
        span_matches,
        passed,
    })
}
