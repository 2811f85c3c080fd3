use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::schatten1_norm;

use super::phi::EmbeddedElement;
use super::subsets::SubsetFamily;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceScheme {
    #[default]
    Geometric,
    Uniform,
}

impl FromStr for TraceScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geometric" => Ok(TraceScheme::Geometric),
            "uniform" => Ok(TraceScheme::Uniform),
            _ => Err(Error::Config {
                field: "trace_scheme".into(),
                reason: format!("expected geometric or uniform, got {s:?}"),
            }),
        }
    }
}

impl fmt::Display for TraceScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceScheme::Geometric => "geometric",
            TraceScheme::Uniform => "uniform",
        })
    }
}

/// Strictly positive weights `λ_F` summing to 1, aligned with a subset family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceWeights {
    pub scheme: TraceScheme,
    pub weights: Vec<f64>,
    pub subsets: Vec<Vec<usize>>,
}

/// Geometric: `λ_{F_k} = 2^-k / (1 - 2^-N)` in family order; uniform: `1/N`.
pub fn make_trace(subsets: &SubsetFamily, scheme: TraceScheme) -> Result<TraceWeights> {
    let n = subsets.len();
    if n == 0 {
        return Err(Error::arg("trace over an empty subset family"));
    }
    let weights = match scheme {
        TraceScheme::Uniform => vec![1.0 / n as f64; n],
        TraceScheme::Geometric => {
            // 2^-k stays a positive double up to k = 1074.
            if n > 1074 {
                return Err(Error::arg(format!(
                    "geometric weights underflow for {n} subsets"
                )));
            }
            let norm = 1.0 - 0.5f64.powi(n as i32);
            (1..=n).map(|k| 0.5f64.powi(k as i32) / norm).collect()
        }
    };
    Ok(TraceWeights {
        scheme,
        weights,
        subsets: subsets.subsets().to_vec(),
    })
}

/// `Σ_F λ_F / (|F| + 2) · S_1(φ(a)_F)`.
pub fn l1_trace_norm(e: &EmbeddedElement, w: &TraceWeights) -> Result<f64> {
    if e.subsets != w.subsets {
        return Err(Error::arg(
            "trace weights and embedded element use different subset families",
        ));
    }
    let s1 = e
        .blocks
        .iter()
        .map(schatten1_norm)
        .collect::<Result<Vec<_>>>()?;
    Ok(weighted_trace(&s1, w))
}

/// The trace norm from precomputed per-block Schatten-1 norms.
pub(crate) fn weighted_trace(s1: &[f64], w: &TraceWeights) -> f64 {
    s1.iter()
        .zip(&w.weights)
        .zip(&w.subsets)
        .map(|((s, l), f)| l / (f.len() + 2) as f64 * s)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::phi::phi;
    use crate::matrix::Scalar;

    #[test]
    fn weights() {
        let f3 = SubsetFamily::canonical(3, 3, 1).unwrap();
        assert_eq!(
            make_trace(&f3, TraceScheme::Uniform).unwrap().weights,
            vec![1.0 / 3.0; 3]
        );
        let f2 = SubsetFamily::canonical(2, 2, 1).unwrap();
        let g = make_trace(&f2, TraceScheme::Geometric).unwrap().weights;
        assert!((g[0] - 2.0 / 3.0).abs() < 1e-15 && (g[1] - 1.0 / 3.0).abs() < 1e-15);
        let big = SubsetFamily::canonical(10, 1023, 10).unwrap();
        for scheme in [TraceScheme::Geometric, TraceScheme::Uniform] {
            let w = make_trace(&big, scheme).unwrap().weights;
            assert!(w.iter().all(|&x| x > 0.0));
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn trace_norms() {
        let single = SubsetFamily::from_subsets(3, vec![vec![1]]).unwrap();
        let w = make_trace(&single, TraceScheme::Uniform).unwrap();
        let d1 = [Scalar::int(1), Scalar::int(0), Scalar::int(0)];
        assert!((l1_trace_norm(&phi(&d1, &single).unwrap(), &w).unwrap() - 1.0).abs() < 1e-12);
        let zero = vec![Scalar::int(0); 3];
        assert_eq!(
            l1_trace_norm(&phi(&zero, &single).unwrap(), &w).unwrap(),
            0.0
        );
        let other = SubsetFamily::canonical(3, 7, 3).unwrap();
        assert!(l1_trace_norm(&phi(&d1, &other).unwrap(), &w).is_err());
    }

    #[test]
    fn scheme_parsing() {
        assert_eq!(
            "uniform".parse::<TraceScheme>().unwrap(),
            TraceScheme::Uniform
        );
        assert!("flat".parse::<TraceScheme>().is_err());
        assert_eq!(TraceScheme::Geometric.to_string(), "geometric");
    }
}
