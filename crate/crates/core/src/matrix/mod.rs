//! Dense complex matrices with an exact rational backend and a double-precision backend.
//!
//! Binary operations between an exact and a float matrix promote to float. All
//! algebraic identity checks in this crate run on the exact backend whenever the
//! inputs are rational, so they hold with zero tolerance.

mod scalar;
mod solve;
mod svd;

use std::fmt;

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub(crate) use scalar::format_rational;
pub use scalar::{
    cq, cq_from_c64, cq_int, parse_rational, rat, rat_from_f64, Cq, Entry, Scalar, C64,
};
pub use solve::span_coefficients;
pub use svd::{numerical_rank, op_norm, schatten1_norm, singular_values};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ToleranceMode {
    Exact,
    Approx,
}

/// Comparison tolerance. `abs_tol` is zero exactly when the mode is exact.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerance {
    abs_tol: f64,
    mode: ToleranceMode,
}

impl Tolerance {
    pub const DEFAULT_ABS_TOL: f64 = 1e-9;

    pub const fn exact() -> Self {
        Tolerance {
            abs_tol: 0.0,
            mode: ToleranceMode::Exact,
        }
    }

    pub fn approx(abs_tol: f64) -> Result<Self> {
        if !(abs_tol.is_finite() && abs_tol > 0.0) {
            return Err(Error::arg(format!(
                "approximate tolerance must be finite and positive, got {abs_tol}"
            )));
        }
        Ok(Tolerance {
            abs_tol,
            mode: ToleranceMode::Approx,
        })
    }

    /// `0` gives an exact tolerance, anything positive an approximate one.
    pub fn from_abs(abs_tol: f64) -> Result<Self> {
        if abs_tol == 0.0 {
            Ok(Self::exact())
        } else {
            Self::approx(abs_tol)
        }
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn mode(&self) -> ToleranceMode {
        self.mode
    }

    pub fn is_exact(&self) -> bool {
        self.mode == ToleranceMode::Exact
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_tol: Self::DEFAULT_ABS_TOL,
            mode: ToleranceMode::Approx,
        }
    }
}

impl<'de> Deserialize<'de> for Tolerance {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            abs_tol: f64,
        }
        let raw = Raw::deserialize(de)?;
        Tolerance::from_abs(raw.abs_tol).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Entries {
    Exact(Vec<Cq>),
    Float(Vec<C64>),
}

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Entries,
}

fn promote(data: &[Cq]) -> Vec<C64> {
    data.iter().map(Entry::to_c64).collect()
}

fn zeros_of<E: Entry>(n: usize) -> Vec<E> {
    (0..n).map(|_| E::zero()).collect()
}

fn matmul_kernel<E: Entry>(a: &[E], b: &[E], n: usize, k: usize, m: usize) -> Vec<E> {
    let mut out = zeros_of::<E>(n * m);
    for i in 0..n {
        for l in 0..k {
            let a_il = &a[i * k + l];
            if a_il.is_zero() {
                continue;
            }
            for j in 0..m {
                let b_lj = &b[l * m + j];
                if b_lj.is_zero() {
                    continue;
                }
                let prod = a_il.clone() * b_lj.clone();
                let slot = &mut out[i * m + j];
                *slot = std::mem::replace(slot, E::zero()) + prod;
            }
        }
    }
    out
}

fn kron_kernel<E: Entry>(
    a: &[E],
    (ar, ac): (usize, usize),
    b: &[E],
    (br, bc): (usize, usize),
) -> Vec<E> {
    let cols = ac * bc;
    let mut out = zeros_of::<E>(ar * br * cols);
    for i in 0..ar {
        for j in 0..ac {
            let a_ij = &a[i * ac + j];
            if a_ij.is_zero() {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    let b_kl = &b[k * bc + l];
                    if !b_kl.is_zero() {
                        out[(i * br + k) * cols + j * bc + l] = a_ij.clone() * b_kl.clone();
                    }
                }
            }
        }
    }
    out
}

impl Matrix {
    pub fn from_exact(rows: usize, cols: usize, data: Vec<Cq>) -> Result<Self> {
        Self::check_len(rows, cols, data.len())?;
        Ok(Matrix {
            rows,
            cols,
            entries: Entries::Exact(data),
        })
    }

    pub fn from_float(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        Self::check_len(rows, cols, data.len())?;
        Ok(Matrix {
            rows,
            cols,
            entries: Entries::Float(data),
        })
    }

    fn check_len(rows: usize, cols: usize, len: usize) -> Result<()> {
        if rows.checked_mul(cols) != Some(len) {
            return Err(Error::dim(format!(
                "{rows}x{cols} matrix needs {} entries, got {len}",
                rows.saturating_mul(cols)
            )));
        }
        Ok(())
    }

    pub fn zeros(rows: usize, cols: usize, backend: Backend) -> Self {
        let n = rows * cols;
        let entries = match backend {
            Backend::Exact => Entries::Exact(zeros_of(n)),
            Backend::Float => Entries::Float(vec![C64::zero(); n]),
        };
        Matrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(n: usize, backend: Backend) -> Self {
        let mut m = Self::zeros(n, n, backend);
        for i in 0..n {
            m.set(i, i, Scalar::int(1));
        }
        m
    }

    /// Exact matrix from integer rows. Panics on ragged input.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| cq_int(x)))
            .collect();
        Matrix {
            rows: rows.len(),
            cols,
            entries: Entries::Exact(data),
        }
    }

    /// Float matrix from real rows. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| C64::new(x, 0.0)))
            .collect();
        Matrix {
            rows: rows.len(),
            cols,
            entries: Entries::Float(data),
        }
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        backend: Backend,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut m = Self::zeros(rows, cols, backend);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Diagonal matrix of integers.
    pub fn diag_int(diag: &[i64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n, Backend::Exact);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, Scalar::int(d));
        }
        m
    }

    /// Rank-one matrix `y x*`.
    pub fn outer(y: &[Scalar], x: &[Scalar]) -> Self {
        let backend = if y.iter().chain(x).all(Scalar::is_exact) {
            Backend::Exact
        } else {
            Backend::Float
        };
        Self::from_fn(y.len(), x.len(), backend, |i, j| y[i].clone() * x[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn backend(&self) -> Backend {
        match self.entries {
            Entries::Exact(_) => Backend::Exact,
            Entries::Float(_) => Backend::Float,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.backend() == Backend::Exact
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols, "({i}, {j}) out of bounds");
        let k = i * self.cols + j;
        match &self.entries {
            Entries::Exact(d) => Scalar::Exact(d[k].clone()),
            Entries::Float(d) => Scalar::Float(d[k]),
        }
    }

    /// Writes one entry. A float scalar written into an exact matrix converts
    /// the whole matrix to the float backend.
    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        assert!(i < self.rows && j < self.cols, "({i}, {j}) out of bounds");
        let k = i * self.cols + j;
        if let (Entries::Exact(_), Scalar::Float(_)) = (&self.entries, &value) {
            *self = self.to_float();
        }
        match (&mut self.entries, value) {
            (Entries::Exact(d), Scalar::Exact(z)) => d[k] = z,
            (Entries::Float(d), z) => d[k] = z.to_c64(),
            (Entries::Exact(_), Scalar::Float(_)) => unreachable!(),
        }
    }

    /// Float copy; lossless up to double rounding of each rational.
    pub fn to_float(&self) -> Matrix {
        match &self.entries {
            Entries::Exact(d) => Matrix {
                rows: self.rows,
                cols: self.cols,
                entries: Entries::Float(promote(d)),
            },
            Entries::Float(_) => self.clone(),
        }
    }

    pub fn float_data(&self) -> Vec<C64> {
        match &self.entries {
            Entries::Exact(d) => promote(d),
            Entries::Float(d) => d.clone(),
        }
    }

    /// Exact copy holding the dyadic rationals equal to each float entry.
    pub fn to_exact(&self) -> Result<Matrix> {
        match &self.entries {
            Entries::Exact(_) => Ok(self.clone()),
            Entries::Float(d) => Ok(Matrix {
                rows: self.rows,
                cols: self.cols,
                entries: Entries::Exact(d.iter().map(|&z| cq_from_c64(z)).collect::<Result<_>>()?),
            }),
        }
    }

    fn zip_entries(
        &self,
        other: &Matrix,
        exact: impl Fn(&Cq, &Cq) -> Cq,
        float: impl Fn(C64, C64) -> C64,
    ) -> Matrix {
        let entries = match (&self.entries, &other.entries) {
            (Entries::Exact(a), Entries::Exact(b)) => {
                Entries::Exact(a.iter().zip(b).map(|(x, y)| exact(x, y)).collect())
            }
            _ => {
                let (a, b) = (self.float_data(), other.float_data());
                Entries::Float(a.into_iter().zip(b).map(|(x, y)| float(x, y)).collect())
            }
        };
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    fn same_shape(&self, other: &Matrix, op: &str) -> Result<()> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::dim(format!(
                "{op}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other, "add")?;
        Ok(self.zip_entries(other, |a, b| a + b, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other, "sub")?;
        Ok(self.zip_entries(other, |a, b| a - b, |a, b| a - b))
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::dim(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let entries = match (&self.entries, &other.entries) {
            (Entries::Exact(a), Entries::Exact(b)) => Entries::Exact(matmul_kernel(a, b, n, k, m)),
            _ => Entries::Float(matmul_kernel(
                &self.float_data(),
                &other.float_data(),
                n,
                k,
                m,
            )),
        };
        Ok(Matrix {
            rows: n,
            cols: m,
            entries,
        })
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        match (&self.entries, s) {
            (Entries::Exact(a), Scalar::Exact(z)) => Matrix {
                rows: self.rows,
                cols: self.cols,
                entries: Entries::Exact(a.iter().map(|x| x * z).collect()),
            },
            _ => {
                let z = s.to_c64();
                Matrix {
                    rows: self.rows,
                    cols: self.cols,
                    entries: Entries::Float(self.float_data().into_iter().map(|x| x * z).collect()),
                }
            }
        }
    }

    /// `self += kron(u, v)` in place, touching only products of nonzero entries.
    /// Promotes `self` to float unless all three are exact.
    pub fn add_kron(&mut self, u: &Matrix, v: &Matrix) -> Result<()> {
        if (self.rows, self.cols) != (u.rows * v.rows, u.cols * v.cols) {
            return Err(Error::dim(format!(
                "kron of {}x{} and {}x{} into {}x{}",
                u.rows, u.cols, v.rows, v.cols, self.rows, self.cols
            )));
        }
        let all_exact = self.is_exact() && u.is_exact() && v.is_exact();
        if !all_exact && self.is_exact() {
            *self = self.to_float();
        }
        let cols = self.cols;
        let at = |i: usize, j: usize, k: usize, l: usize| (i * v.rows + k) * cols + j * v.cols + l;
        match &mut self.entries {
            Entries::Exact(acc) => {
                let (Entries::Exact(a), Entries::Exact(b)) = (&u.entries, &v.entries) else {
                    unreachable!("checked above")
                };
                let bn: Vec<_> = nonzero_positions(b, v.cols).collect();
                for (i, j) in nonzero_positions(a, u.cols) {
                    let x = &a[i * u.cols + j];
                    for &(k, l) in &bn {
                        acc[at(i, j, k, l)] += x * &b[k * v.cols + l];
                    }
                }
            }
            Entries::Float(acc) => {
                let (a, b) = (u.float_data(), v.float_data());
                let bn: Vec<_> = nonzero_positions(&b, v.cols).collect();
                for (i, j) in nonzero_positions(&a, u.cols) {
                    let x = a[i * u.cols + j];
                    for &(k, l) in &bn {
                        acc[at(i, j, k, l)] += x * b[k * v.cols + l];
                    }
                }
            }
        }
        Ok(())
    }

    /// Kronecker product; row index of the result is `i * other.rows + k`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (sa, sb) = ((self.rows, self.cols), (other.rows, other.cols));
        let entries = match (&self.entries, &other.entries) {
            (Entries::Exact(a), Entries::Exact(b)) => Entries::Exact(kron_kernel(a, sa, b, sb)),
            _ => Entries::Float(kron_kernel(&self.float_data(), sa, &other.float_data(), sb)),
        };
        Matrix {
            rows: self.rows * other.rows,
            cols: self.cols * other.cols,
            entries,
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        let (r, c) = (self.rows, self.cols);
        let entries = match &self.entries {
            Entries::Exact(d) => {
                Entries::Exact((0..r * c).map(|k| d[(k % r) * c + k / r].conj()).collect())
            }
            Entries::Float(d) => {
                Entries::Float((0..r * c).map(|k| d[(k % r) * c + k / r].conj()).collect())
            }
        };
        Matrix {
            rows: c,
            cols: r,
            entries,
        }
    }

    pub fn pow(&self, r: u32) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::dim(format!(
                "power of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let mut acc = Matrix::identity(self.rows, self.backend());
        for _ in 0..r {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    /// Principal submatrix on the given (row = column) indices, in order.
    pub fn restrict(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(idx.len(), idx.len(), self.backend(), |i, j| {
            self.get(idx[i], idx[j])
        })
    }

    /// Column vector of entries in row-major order.
    pub fn vectorize(&self) -> Matrix {
        Matrix {
            rows: self.len(),
            cols: 1,
            entries: self.entries.clone(),
        }
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn is_zero(&self) -> bool {
        match &self.entries {
            Entries::Exact(d) => d.iter().all(Zero::is_zero),
            Entries::Float(d) => d.iter().all(Zero::is_zero),
        }
    }

    pub fn max_abs(&self) -> f64 {
        match &self.entries {
            Entries::Exact(d) => d.iter().map(Entry::modulus).fold(0.0, f64::max),
            Entries::Float(d) => d.iter().map(|z| z.norm()).fold(0.0, f64::max),
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> Result<f64> {
        Ok(self.checked_sub(other)?.max_abs())
    }

    /// Entrywise agreement: exact equality in exact mode (both matrices must be
    /// exact, or their float difference must vanish), otherwise within `abs_tol`.
    pub fn agrees(&self, other: &Matrix, tol: &Tolerance) -> Result<bool> {
        self.same_shape(other, "compare")?;
        if tol.is_exact() {
            return Ok(match (&self.entries, &other.entries) {
                (Entries::Exact(a), Entries::Exact(b)) => a == b,
                _ => self.max_abs_diff(other)? == 0.0,
            });
        }
        Ok(self.max_abs_diff(other)? <= tol.abs_tol())
    }

    /// Iterates `(i, j, value)` over nonzero entries.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, Scalar)> + '_ {
        let c = self.cols;
        (0..self.len()).filter_map(move |k| {
            let v = self.get(k / c, k % c);
            (!v.is_zero()).then_some((k / c, k % c, v))
        })
    }
}

impl std::ops::Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.checked_add(rhs).expect("matrix add")
    }
}

impl std::ops::Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.checked_sub(rhs).expect("matrix sub")
    }
}

impl std::ops::Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix product")
    }
}

impl std::ops::Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(&Scalar::int(-1))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| match self.get(i, j) {
                    Scalar::Exact(z) => format_cq(&z),
                    Scalar::Float(z) => format!("{z}"),
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn format_cq(z: &Cq) -> String {
    if z.im.is_zero() {
        format_rational(&z.re)
    } else {
        format!("{}+{}i", format_rational(&z.re), format_rational(&z.im))
    }
}

/// Serialized form: `{rows, cols, backend, entries: [[re, im], ...]}` with every
/// component written as a string (`p/q` for exact, round-trip decimal for float).
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    backend: Backend,
    entries: Vec<[String; 2]>,
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = match &self.entries {
            Entries::Exact(d) => d
                .iter()
                .map(|z| [format_rational(&z.re), format_rational(&z.im)])
                .collect(),
            Entries::Float(d) => d
                .iter()
                .map(|z| [format!("{:?}", z.re), format!("{:?}", z.im)])
                .collect(),
        };
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            backend: self.backend(),
            entries,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MatrixRepr::deserialize(de)?;
        let m = match repr.backend {
            Backend::Exact => {
                let data = repr
                    .entries
                    .iter()
                    .map(|[re, im]| Ok(Complex::new(parse_rational(re)?, parse_rational(im)?)))
                    .collect::<Result<Vec<Cq>>>()
                    .map_err(D::Error::custom)?;
                Matrix::from_exact(repr.rows, repr.cols, data)
            }
            Backend::Float => {
                let data = repr
                    .entries
                    .iter()
                    .map(|[re, im]| Ok(C64::new(re.parse()?, im.parse()?)))
                    .collect::<std::result::Result<Vec<C64>, std::num::ParseFloatError>>()
                    .map_err(D::Error::custom)?;
                Matrix::from_float(repr.rows, repr.cols, data)
            }
        };
        m.map_err(D::Error::custom)
    }
}

fn nonzero_positions<T: Zero>(d: &[T], cols: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
    d.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(move |(k, _)| (k / cols, k % cols))
}

/// `m² = m` up to `tol` (entrywise).
pub fn is_idempotent(m: &Matrix, tol: &Tolerance) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::dim(format!(
            "idempotency of a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    m.checked_mul(m)?.agrees(m, tol)
}

/// Serde adapter writing an exact complex scalar as `["re", "im"]` rational strings.
pub mod cq_serde {
    use num_complex::Complex;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{format_rational, parse_rational, Cq};

    pub fn serialize<S: Serializer>(z: &Cq, ser: S) -> Result<S::Ok, S::Error> {
        [format_rational(&z.re), format_rational(&z.im)].serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Cq, D::Error> {
        let [re, im] = <[String; 2]>::deserialize(de)?;
        let part = |s: &str| parse_rational(s).map_err(serde::de::Error::custom);
        Ok(Complex::new(part(&re)?, part(&im)?))
    }
}
