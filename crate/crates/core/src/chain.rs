//! Ascending chains of idempotents `e_1, e_2, ...` with `e_m e_n = e_min(m,n)`.
//!
//! Fix a strictly increasing list of subspace dimensions `d_1 < d_2 < ...` and
//! let `p_n` be the coordinate projection onto the first `d_n` basis vectors.
//! Odd members are projections, `e_{2k-1} = p_{2k-1}`; even members add an
//! off-diagonal coupling block `b_2k` mapping the gap `(d_2k, d_{2k+1}]` into
//! the gap `(d_{2k-1}, d_2k]`:
//!
//! ```text
//! e_2k = p_2k + b_2k (p_{2k+1} - p_2k)
//! ```
//!
//! With unbounded couplings the even idempotents have unbounded norm while the
//! odd ones all have norm one.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{
    cq_serde, op_norm, parse_rational, Backend, Cq, Matrix, Scalar, Tolerance, ToleranceMode,
};

/// Coupling operator `b_2k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coupling {
    /// `b · J` where `J` is the rectangular identity between the two gaps.
    Scalar(#[serde(with = "cq_serde")] Cq),
    /// Explicit exact matrix of shape `gap(2k) x gap(2k+1)`.
    Block(Matrix),
}

impl Coupling {
    pub fn int(n: i64) -> Self {
        Coupling::Scalar(crate::matrix::cq_int(n))
    }

    pub fn rational(q: BigRational) -> Self {
        Coupling::Scalar(Complex::new(q, BigRational::zero()))
    }

    /// Operator norm of the coupling as a map between the gaps.
    pub fn norm(&self) -> Result<f64> {
        match self {
            Coupling::Scalar(z) => Ok(Scalar::Exact(z.clone()).abs()),
            Coupling::Block(m) => op_norm(m),
        }
    }
}

/// How the couplings `b_2, b_4, ...` grow with `k`.
#[derive(Clone, Debug, PartialEq)]
pub enum CouplingScheme {
    /// `b_2k = k`.
    Linear,
    /// `b_2k = q` for all `k`.
    Constant(BigRational),
    /// `b_2k = q^k`.
    Geometric(BigRational),
    /// Explicit values, `b_2k = list[k-1]`.
    List(Vec<BigRational>),
}

impl CouplingScheme {
    /// Parses `linear`, `const:Q`, `geometric:Q` or `list:Q1,Q2,...`.
    pub fn parse(desc: &str) -> Result<Self> {
        let desc = desc.trim();
        if desc == "linear" {
            return Ok(CouplingScheme::Linear);
        }
        match desc.split_once(':') {
            Some(("const", q)) => Ok(CouplingScheme::Constant(parse_rational(q)?)),
            Some(("geometric", q)) => Ok(CouplingScheme::Geometric(parse_rational(q)?)),
            Some(("list", qs)) => Ok(CouplingScheme::List(
                qs.split(',').map(parse_rational).collect::<Result<_>>()?,
            )),
            _ => Err(Error::arg(format!(
                "unknown coupling scheme `{desc}` (expected linear, const:Q, geometric:Q or list:Q,...)"
            ))),
        }
    }

    pub fn couplings(&self, count: usize) -> Result<Vec<Coupling>> {
        Ok(match self {
            CouplingScheme::Linear => (1..=count as i64).map(Coupling::int).collect(),
            CouplingScheme::Constant(q) => vec![Coupling::rational(q.clone()); count],
            CouplingScheme::Geometric(q) => (1..=count)
                .map(|k| Coupling::rational(num_traits::pow(q.clone(), k)))
                .collect(),
            CouplingScheme::List(qs) => {
                if qs.len() < count {
                    return Err(Error::arg(format!(
                        "coupling list has {} values, chain needs {count}",
                        qs.len()
                    )));
                }
                qs[..count]
                    .iter()
                    .cloned()
                    .map(Coupling::rational)
                    .collect()
            }
        })
    }
}

impl std::fmt::Display for CouplingScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use crate::matrix::format_rational as q;
        match self {
            CouplingScheme::Linear => write!(f, "linear"),
            CouplingScheme::Constant(c) => write!(f, "const:{}", q(c)),
            CouplingScheme::Geometric(c) => write!(f, "geometric:{}", q(c)),
            CouplingScheme::List(cs) => {
                write!(f, "list:{}", cs.iter().map(q).collect::<Vec<_>>().join(","))
            }
        }
    }
}

/// Parameters of a truncated chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    /// Number of idempotents `e_1 ... e_m_max` to build.
    pub m_max: usize,
    /// `dims[n-1]` is the dimension of the `n`-th subspace.
    pub dims: Vec<usize>,
    /// `couplings[k-1]` is `b_2k`.
    pub couplings: Vec<Coupling>,
    /// Ambient dimension; defaults to the smallest admissible one.
    pub truncation_dim: Option<usize>,
}

/// Smallest odd subspace index whose dimension the truncation must contain.
pub fn required_subspace_index(m_max: usize) -> usize {
    if m_max.is_multiple_of(2) {
        m_max + 1
    } else {
        m_max + 2
    }
}

impl ChainSpec {
    /// Default chain: subspace dimensions `1, 2, 3, ...` and couplings `b_2k = k`.
    pub fn new(m_max: usize) -> Self {
        Self::with_scheme(m_max, &CouplingScheme::Linear).expect("linear scheme never fails")
    }

    pub fn with_scheme(m_max: usize, scheme: &CouplingScheme) -> Result<Self> {
        Ok(ChainSpec {
            m_max,
            dims: (1..=required_subspace_index(m_max)).collect(),
            couplings: scheme.couplings(m_max / 2)?,
            truncation_dim: None,
        })
    }

    pub fn couplings(mut self, couplings: Vec<Coupling>) -> Self {
        self.couplings = couplings;
        self
    }

    pub fn dims(mut self, dims: Vec<usize>) -> Self {
        self.dims = dims;
        self
    }

    pub fn truncation(mut self, n: usize) -> Self {
        self.truncation_dim = Some(n);
        self
    }

    fn dim(&self, n: usize) -> usize {
        self.dims[n - 1]
    }

    /// Validates dims and couplings and returns the ambient dimension.
    pub fn validate(&self) -> Result<usize> {
        if self.m_max == 0 {
            return Err(Error::arg("m_max must be positive"));
        }
        let req = required_subspace_index(self.m_max);
        if self.dims.len() < req {
            return Err(Error::arg(format!(
                "{} idempotents need {req} subspace dimensions, got {}",
                self.m_max,
                self.dims.len()
            )));
        }
        if self.dims[0] == 0 || self.dims.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::arg(
                "subspace dimensions must be positive and strictly increasing",
            ));
        }
        let needed = self.m_max / 2;
        if self.couplings.len() < needed {
            return Err(Error::arg(format!(
                "{} idempotents need {needed} couplings, got {}",
                self.m_max,
                self.couplings.len()
            )));
        }
        let mut prev_abs2: Option<BigRational> = None;
        for (i, c) in self.couplings[..needed].iter().enumerate() {
            let k = i + 1;
            match c {
                Coupling::Scalar(z) => {
                    let abs2 = z.norm_sqr();
                    if prev_abs2.as_ref().is_some_and(|p| abs2 < *p) {
                        return Err(Error::arg(format!("|b_{}| decreases", 2 * k)));
                    }
                    prev_abs2 = Some(abs2);
                }
                Coupling::Block(m) => {
                    let shape = (
                        self.dim(2 * k) - self.dim(2 * k - 1),
                        self.dim(2 * k + 1) - self.dim(2 * k),
                    );
                    if (m.rows(), m.cols()) != shape {
                        return Err(Error::dim(format!(
                            "b_{} must be {}x{}, got {}x{}",
                            2 * k,
                            shape.0,
                            shape.1,
                            m.rows(),
                            m.cols()
                        )));
                    }
                    if !m.is_exact() {
                        return Err(Error::arg(format!("b_{} must be exact", 2 * k)));
                    }
                }
            }
        }
        let required = self.dim(req);
        match self.truncation_dim {
            Some(given) if given < required => Err(Error::Truncation { required, given }),
            Some(given) => Ok(given),
            None => Ok(required),
        }
    }
}

/// The realized idempotents `e_1 ... e_m_max` on the truncated space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    pub spec: ChainSpec,
    pub idempotents: Vec<Matrix>,
    pub truncation_dim: usize,
}

fn projection(n: usize, rank: usize) -> Matrix {
    let mut p = Matrix::zeros(n, n, Backend::Exact);
    for i in 0..rank {
        p.set(i, i, Scalar::int(1));
    }
    p
}

pub fn build_chain(spec: ChainSpec) -> Result<Chain> {
    let n = spec.validate()?;
    let idempotents = (1..=spec.m_max)
        .map(|m| {
            if m % 2 == 1 {
                return projection(n, spec.dim(m));
            }
            let k = m / 2;
            let mut e = projection(n, spec.dim(m));
            let (row0, col0) = (spec.dim(m - 1), spec.dim(m));
            let (gap_rows, gap_cols) = (spec.dim(m) - row0, spec.dim(m + 1) - col0);
            match &spec.couplings[k - 1] {
                Coupling::Scalar(b) => {
                    for d in 0..gap_rows.min(gap_cols) {
                        e.set(row0 + d, col0 + d, Scalar::Exact(b.clone()));
                    }
                }
                Coupling::Block(b) => {
                    for (i, j, v) in b.nonzeros() {
                        e.set(row0 + i, col0 + j, v);
                    }
                }
            }
            e
        })
        .collect();
    Ok(Chain {
        spec,
        idempotents,
        truncation_dim: n,
    })
}

impl Chain {
    pub fn len(&self) -> usize {
        self.idempotents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idempotents.is_empty()
    }

    /// `e_n`, one-based.
    pub fn e(&self, n: usize) -> Result<&Matrix> {
        n.checked_sub(1)
            .and_then(|i| self.idempotents.get(i))
            .ok_or(Error::Index {
                index: n,
                max: self.len(),
            })
    }

    pub fn identity(&self) -> Matrix {
        Matrix::identity(self.truncation_dim, self.backend())
    }

    pub fn backend(&self) -> Backend {
        if self.idempotents.iter().all(Matrix::is_exact) {
            Backend::Exact
        } else {
            Backend::Float
        }
    }

    /// Same chain with float entries.
    pub fn to_float(&self) -> Chain {
        Chain {
            spec: self.spec.clone(),
            idempotents: self.idempotents.iter().map(Matrix::to_float).collect(),
            truncation_dim: self.truncation_dim,
        }
    }

    /// Pairwise-orthogonal idempotents `f_1 = e_1`, `f_n = e_n - e_{n-1}`
    /// spanning the same space as the chain.
    pub fn orthogonal_family(&self) -> Vec<Matrix> {
        let mut out = Vec::with_capacity(self.len());
        for (i, e) in self.idempotents.iter().enumerate() {
            out.push(if i == 0 {
                e.clone()
            } else {
                e - &self.idempotents[i - 1]
            });
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses a serialized chain and checks it against a fresh build of its spec.
    pub fn from_json(s: &str) -> Result<Chain> {
        let chain: Chain = serde_json::from_str(s)?;
        let rebuilt = build_chain(chain.spec.clone())?;
        if rebuilt != chain {
            return Err(Error::arg("serialized idempotents do not match their spec"));
        }
        Ok(chain)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemilatticeReport {
    pub pairs_checked: usize,
    pub mode: ToleranceMode,
    /// True iff every product equals `e_min(m,n)` in exact arithmetic.
    pub all_exact: bool,
    /// True iff every product agrees with `e_min(m,n)` under the tolerance used.
    pub all_hold: bool,
    /// Ordered pairs `(m, n)` that failed.
    pub failures: Vec<(usize, usize)>,
}

/// Checks `e_m e_n = e_min(m,n)` for every ordered pair.
///
/// Exact chains are compared with zero tolerance regardless of `tol`; float
/// chains fall back to `tol` (or the default tolerance if `tol` is exact) and
/// the report is flagged approximate.
pub fn verify_semilattice(chain: &Chain, tol: &Tolerance) -> Result<SemilatticeReport> {
    let exact = chain.backend() == Backend::Exact;
    let used = if exact {
        Tolerance::exact()
    } else if tol.is_exact() {
        Tolerance::default()
    } else {
        *tol
    };
    let m = chain.len();
    let mut failures = Vec::new();
    for i in 1..=m {
        for j in 1..=m {
            let prod = chain.e(i)?.checked_mul(chain.e(j)?)?;
            if !prod.agrees(chain.e(i.min(j))?, &used)? {
                failures.push((i, j));
            }
        }
    }
    let all_hold = failures.is_empty();
    Ok(SemilatticeReport {
        pairs_checked: m * m,
        mode: used.mode(),
        all_exact: exact && all_hold,
        all_hold,
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEntry {
    pub index: usize,
    pub norm: f64,
    /// `1` for odd indices, `‖b_2k‖` for even ones.
    pub lower_bound: f64,
    /// Closed form where known: `1` for odd indices, `sqrt(1 + |b|²)` for scalar couplings.
    pub expected: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormProfile {
    pub entries: Vec<NormEntry>,
    pub pass: bool,
}

impl NormProfile {
    pub fn norms(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.norm).collect()
    }
}

/// Tolerance for the norm-profile closed forms.
pub const PROFILE_TOL: f64 = 1e-8;

/// Operator norm of every `e_n`, checked against `‖e_odd‖ = 1` and `‖e_2k‖ ≥ ‖b_2k‖`.
pub fn norm_profile(chain: &Chain) -> Result<NormProfile> {
    let mut entries = Vec::with_capacity(chain.len());
    for (i, e) in chain.idempotents.iter().enumerate() {
        let index = i + 1;
        let norm = op_norm(e)?;
        let (lower_bound, expected) = if index % 2 == 1 {
            (1.0, Some(1.0))
        } else {
            let coupling = &chain.spec.couplings[index / 2 - 1];
            let b = coupling.norm()?;
            let expected = matches!(coupling, Coupling::Scalar(_)).then(|| (1.0 + b * b).sqrt());
            (b, expected)
        };
        let pass = norm >= lower_bound - PROFILE_TOL
            && expected.is_none_or(|x| (norm - x).abs() <= PROFILE_TOL * x.max(1.0));
        entries.push(NormEntry {
            index,
            norm,
            lower_bound,
            expected,
            pass,
        });
    }
    let pass = entries.iter().all(|e| e.pass);
    Ok(NormProfile { entries, pass })
}

/// `|b|` for a scalar coupling, as an exact square.
pub fn coupling_abs2(c: &Coupling) -> Option<BigRational> {
    match c {
        Coupling::Scalar(z) => Some(z.norm_sqr().abs()),
        Coupling::Block(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{is_idempotent, rat};

    fn dims123(b: i64) -> ChainSpec {
        ChainSpec::new(2)
            .dims(vec![1, 2, 3])
            .couplings(vec![Coupling::int(b)])
    }

    #[test]
    fn first_member_is_a_padded_projection() {
        let c = build_chain(ChainSpec::new(1)).unwrap();
        assert_eq!(c.truncation_dim, 3);
        assert_eq!(c.idempotents[0], Matrix::diag_int(&[1, 0, 0]));
    }

    #[test]
    fn zero_coupling_gives_projection() {
        let c = build_chain(dims123(0)).unwrap();
        assert_eq!(c.idempotents[1], Matrix::diag_int(&[1, 1, 0]));
    }

    #[test]
    fn unit_coupling_block_form() {
        let c = build_chain(dims123(1)).unwrap();
        assert_eq!(
            c.idempotents[1],
            Matrix::from_int_rows(&[&[1, 0, 0], &[0, 1, 1], &[0, 0, 0]])
        );
        assert!(is_idempotent(&c.idempotents[1], &Tolerance::exact()).unwrap());
    }

    #[test]
    fn truncation_is_enforced() {
        let err = build_chain(ChainSpec::new(4).truncation(4)).unwrap_err();
        assert!(matches!(
            err,
            Error::Truncation {
                required: 5,
                given: 4
            }
        ));
        assert_eq!(
            build_chain(ChainSpec::new(4).truncation(9))
                .unwrap()
                .truncation_dim,
            9
        );
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(build_chain(ChainSpec::new(3).dims(vec![1, 3, 2, 4, 5])).is_err());
        assert!(build_chain(ChainSpec::new(4).couplings(vec![Coupling::int(1)])).is_err());
        assert!(
            build_chain(ChainSpec::new(4).couplings(vec![Coupling::int(3), Coupling::int(1)]))
                .is_err()
        );
        assert!(build_chain(ChainSpec::new(0)).is_err());
        assert!(matches!(
            build_chain(ChainSpec::new(2)).unwrap().e(3),
            Err(Error::Index { index: 3, max: 2 })
        ));
    }

    #[test]
    fn semilattice_examples() {
        let c = build_chain(ChainSpec::new(4)).unwrap();
        assert_eq!(&(c.e(3).unwrap() * c.e(4).unwrap()), c.e(3).unwrap());
        assert_eq!(&(c.e(1).unwrap() * c.e(1).unwrap()), c.e(1).unwrap());
        let big = build_chain(ChainSpec::new(20)).unwrap();
        let report = verify_semilattice(&big, &Tolerance::default()).unwrap();
        assert_eq!(report.pairs_checked, 400);
        assert!(report.all_exact);
        assert_eq!(report.mode, ToleranceMode::Exact);
    }

    #[test]
    fn float_chains_are_flagged_approximate() {
        let c = build_chain(ChainSpec::new(6)).unwrap().to_float();
        let r = verify_semilattice(&c, &Tolerance::exact()).unwrap();
        assert_eq!(r.mode, ToleranceMode::Approx);
        assert!(r.all_hold && !r.all_exact);
    }

    #[test]
    fn block_couplings() {
        let b = Matrix::from_int_rows(&[&[1, 2], &[0, 3]]);
        let spec = ChainSpec::new(2)
            .dims(vec![1, 3, 5])
            .couplings(vec![Coupling::Block(b.clone())]);
        let c = build_chain(spec).unwrap();
        assert_eq!(c.e(2).unwrap().get(2, 4), Scalar::int(3));
        assert!(
            verify_semilattice(&c, &Tolerance::exact())
                .unwrap()
                .all_exact
        );
        let prof = norm_profile(&c).unwrap();
        assert!(prof.pass);
        assert!(prof.entries[1].norm >= op_norm(&b).unwrap());
        let bad = ChainSpec::new(2)
            .dims(vec![1, 2, 5])
            .couplings(vec![Coupling::Block(b)]);
        assert!(matches!(build_chain(bad), Err(Error::Dimension(_))));
    }

    #[test]
    fn profile_closed_form() {
        let c = build_chain(ChainSpec::new(20)).unwrap();
        let prof = norm_profile(&c).unwrap();
        assert!(prof.pass);
        for e in &prof.entries {
            if e.index % 2 == 1 {
                assert!((e.norm - 1.0).abs() < 1e-9);
            } else {
                let k = (e.index / 2) as f64;
                assert!((e.norm * e.norm - 1.0 - k * k).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn profile_is_invariant_under_padding() {
        let a = norm_profile(&build_chain(ChainSpec::new(6)).unwrap()).unwrap();
        let b = norm_profile(&build_chain(ChainSpec::new(6).truncation(15)).unwrap()).unwrap();
        for (x, y) in a.norms().iter().zip(b.norms()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn orthogonal_family_is_orthogonal() {
        let c = build_chain(ChainSpec::new(7)).unwrap();
        let f = c.orthogonal_family();
        for (i, a) in f.iter().enumerate() {
            for (j, b) in f.iter().enumerate() {
                let p = a * b;
                if i == j {
                    assert_eq!(&p, a);
                } else {
                    assert!(p.is_zero());
                }
            }
        }
    }

    #[test]
    fn schemes_parse() {
        assert_eq!(
            CouplingScheme::parse("linear").unwrap(),
            CouplingScheme::Linear
        );
        let g = CouplingScheme::parse("geometric:3/2").unwrap();
        assert_eq!(g.to_string(), "geometric:3/2");
        let cs = g.couplings(2).unwrap();
        assert_eq!(cs[1], Coupling::rational(rat(9, 4)));
        assert!(CouplingScheme::parse("list:1,2")
            .unwrap()
            .couplings(3)
            .is_err());
        assert!(CouplingScheme::parse("cubic").is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = build_chain(ChainSpec::new(4)).unwrap();
        let s = c.to_json().unwrap();
        assert_eq!(Chain::from_json(&s).unwrap(), c);
        let tampered = s.replacen("\"2\"", "\"7\"", 1);
        assert!(Chain::from_json(&tampered).is_err());
    }
}
