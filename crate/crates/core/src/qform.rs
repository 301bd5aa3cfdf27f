//! `b_n` as a quadratic form in the state vector.
//!
//! With `M_n = nA + B`, `a_n = e₁ᵀv_n`, `a_{n−1} = e₂ᵀv_n` and
//! `a_{n+1} = e₁ᵀM_n v_n`, so
//!
//! ```text
//! b_n = v_nᵀ Q_n v_n,   Q_n = e₁e₁ᵀ − ½(M_nᵀe₁e₂ᵀ + e₂e₁ᵀM_n) = Q⁽⁰⁾ + n Q⁽¹⁾.
//! ```
//!
//! PSD is decided exactly from all principal minors. Smallest eigenvalues
//! are bracketed by bisection with Sturm counts on the exact characteristic
//! polynomial, so every bound is a certified rational.

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::{count_in, Poly};
use crate::rational::{ratio, Rational};
use crate::recurrence::RecurrenceSpec;

/// Exactly symmetric square matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Matrix", into = "Matrix")]
pub struct SymmetricMatrix(Matrix);

impl TryFrom<Matrix> for SymmetricMatrix {
    type Error = Error;

    fn try_from(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: m.rows(), got: m.cols() });
        }
        if m != m.transpose() {
            return Err(Error::InvalidArgument("matrix is not symmetric".into()));
        }
        Ok(Self(m))
    }
}

impl From<SymmetricMatrix> for Matrix {
    fn from(s: SymmetricMatrix) -> Matrix {
        s.0
    }
}

impl SymmetricMatrix {
    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.0[(i, j)]
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        Matrix::from_rows(rows).try_into()
    }

    pub fn identity(d: usize) -> Self {
        Self(Matrix::identity(d))
    }

    fn add(&self, other: &Self) -> Self {
        Self(self.0.add(&other.0))
    }

    fn scale(&self, s: &Rational) -> Self {
        Self(self.0.scale(s))
    }

    /// `S − xI`.
    pub fn shift(&self, x: &Rational) -> Self {
        let mut m = self.0.clone();
        for i in 0..self.dim() {
            m[(i, i)] -= x;
        }
        Self(m)
    }

    pub fn det(&self) -> Rational {
        self.0.det()
    }

    pub fn quadratic_form(&self, v: &[Rational]) -> Result<Rational> {
        self.0.quadratic_form(v)
    }

    /// Largest absolute row sum; every eigenvalue lies in `[−g, g]`.
    pub fn gershgorin_radius(&self) -> Rational {
        (0..self.dim())
            .map(|i| self.0.row(i).iter().map(|e| e.abs()).sum::<Rational>())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Principal minors indexed by nonempty subsets, in bitmask order.
    fn principal_minors(&self) -> impl Iterator<Item = (Vec<usize>, Rational)> + '_ {
        let d = self.dim();
        (1u32..(1u32 << d)).map(move |mask| {
            let idx: Vec<usize> = (0..d).filter(|i| mask & (1 << i) != 0).collect();
            let minor = self.0.principal(&idx).det();
            (idx, minor)
        })
    }

    /// Coefficients of `det(λI − S)`, highest degree first.
    pub fn char_poly(&self) -> Vec<Rational> {
        let d = self.dim();
        let mut e = vec![Rational::zero(); d + 1];
        e[0] = Rational::one();
        for (idx, minor) in self.principal_minors() {
            e[idx.len()] += minor;
        }
        e.into_iter()
            .enumerate()
            .map(|(k, ek)| if k % 2 == 1 { -ek } else { ek })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QFormPair {
    pub order: usize,
    pub q0: SymmetricMatrix,
    pub q1: SymmetricMatrix,
}

/// `−½(u e₂ᵀ + e₂ uᵀ)` for the row vector `u = e₁ᵀX`.
fn cross_term(first_row: &[Rational]) -> SymmetricMatrix {
    let d = first_row.len();
    let half = ratio(1, 2);
    let mut m = Matrix::zeros(d, d);
    for (i, u) in first_row.iter().enumerate() {
        m[(i, 1)] -= u * &half;
        m[(1, i)] -= u * &half;
    }
    SymmetricMatrix(m)
}

pub fn build_qform(spec: &RecurrenceSpec) -> Result<QFormPair> {
    let d = spec.order();
    if d < 2 {
        return Err(Error::UnsupportedOrder {
            order: d,
            reason: "the quadratic form needs a_{n-1} in the state vector (d >= 2)",
        });
    }
    let (a, b) = spec.companion_pair();
    let mut e11 = Matrix::zeros(d, d);
    e11[(0, 0)] = Rational::one();
    let q0 = SymmetricMatrix(e11).add(&cross_term(b.row(0)));
    let q1 = cross_term(a.row(0));
    Ok(QFormPair { order: d, q0, q1 })
}

impl QFormPair {
    pub fn at(&self, n: usize) -> SymmetricMatrix {
        self.q0.add(&self.q1.scale(&Rational::from_integer(n.into())))
    }

    /// `vᵀ Q_n v`.
    pub fn quadratic_value(&self, v: &[Rational], n: usize) -> Result<Rational> {
        if v.len() != self.order {
            return Err(Error::DimensionMismatch { expected: self.order, got: v.len() });
        }
        self.at(n).quadratic_form(v)
    }
}

/// Outcome of the principal-minor PSD test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsdCertificate {
    pub psd: bool,
    pub minors_checked: usize,
    /// Index set and value of the first negative principal minor.
    pub violated: Option<(Vec<usize>, String)>,
}

pub fn psd_exact(s: &SymmetricMatrix) -> PsdCertificate {
    let mut checked = 0;
    for (idx, minor) in s.principal_minors() {
        checked += 1;
        if minor.is_negative() {
            return PsdCertificate { psd: false, minors_checked: checked, violated: Some((idx, minor.to_string())) };
        }
    }
    PsdCertificate { psd: true, minors_checked: checked, violated: None }
}

/// For `d = 2`: `Q_n ⪰ 0` iff `np₁+q₁ ≤ 0` and `(np₀+q₀)² ≤ −4(np₁+q₁)`.
pub fn d2_psd_condition(spec: &RecurrenceSpec, n: usize) -> Result<bool> {
    if spec.order() != 2 {
        return Err(Error::UnsupportedOrder { order: spec.order(), reason: "closed-form PSD test is for d = 2" });
    }
    let c0 = spec.coefficient(0, n);
    let c1 = spec.coefficient(1, n);
    let four = Rational::from_integer(4.into());
    Ok(!c1.is_positive() && &c0 * &c0 <= -(four * c1))
}

/// For `d = 2`: whether `Q_n ⪰ 0` holds for every integer `n ≥ from`.
///
/// `f(n) = −4(np₁+q₁) − (np₀+q₀)²` is a polynomial in `n` of degree ≤ 2 with
/// leading coefficient `−p₀²`, and `Q_n ⪰ 0 ⟺ f(n) ≥ 0`.
pub fn d2_psd_for_all(spec: &RecurrenceSpec, from: usize) -> Result<bool> {
    if spec.order() != 2 {
        return Err(Error::UnsupportedOrder { order: spec.order(), reason: "closed-form PSD test is for d = 2" });
    }
    let (p0, p1) = (&spec.p()[0], &spec.p()[1]);
    if !p0.is_zero() {
        return Ok(false);
    }
    let slope = -(Rational::from_integer(4.into()) * p1);
    if slope.is_negative() {
        return Ok(false);
    }
    // f is nondecreasing from here on
    d2_psd_condition(spec, from)
}

/// Certified bracket `lower ≤ λ_min ≤ upper`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenBound {
    #[serde(with = "crate::rational::serde_str")]
    pub lower: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub upper: Rational,
}

pub fn default_tolerance() -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::one() << 40)
}

/// Brackets the smallest eigenvalue of `s` to within `tol`.
pub fn lambda_min_bound(s: &SymmetricMatrix, tol: &Rational) -> Result<EigenBound> {
    if !tol.is_positive() {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let chi = Poly::from_descending(&s.char_poly()).squarefree();
    let chain = chi.sturm_chain();
    let g = s.gershgorin_radius();
    let below = -&g - Rational::one();
    let (mut lo, mut hi) = (-g.clone(), g);
    let two = Rational::from_integer(2.into());
    while &(&hi - &lo) > tol {
        let mid = (&lo + &hi) / &two;
        if count_in(&chain, &below, &mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(EigenBound { lower: lo, upper: hi })
}

/// `N = ⌈max(0, −λ_min(Q⁽⁰⁾)) / λ_min⁽¹⁾⌉ + 1` evaluated on certified lower
/// bounds; `None` unless `λ_min(Q⁽¹⁾)` is certified positive.
pub fn threshold_n(pair: &QFormPair, tol: &Rational) -> Result<Option<u64>> {
    let l1 = lambda_min_bound(&pair.q1, tol)?.lower;
    if !l1.is_positive() {
        return Ok(None);
    }
    let l0 = lambda_min_bound(&pair.q0, tol)?.lower;
    let deficit = if l0.is_negative() { -l0 } else { Rational::zero() };
    Ok(threshold_formula(&deficit, &l1))
}

fn threshold_formula(deficit: &Rational, l1: &Rational) -> Option<u64> {
    (deficit / l1).ceil().to_integer().to_u64().map(|c| c + 1)
}

/// `R_n = Π_nᵀ Q_{d−1+n} Π_n`, so `v_{d−1}ᵀ R_n v_{d−1} = b_{d−1+n}`.
pub fn build_r(spec: &RecurrenceSpec, n: usize) -> Result<SymmetricMatrix> {
    let pair = build_qform(spec)?;
    let pi = spec.prefix_product(n);
    let q = pair.at(spec.order() - 1 + n);
    Ok(SymmetricMatrix(pi.transpose().mul(q.matrix()).mul(&pi)))
}
