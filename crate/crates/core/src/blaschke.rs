//! Finite Blaschke products and the Takenaka–Malmquist functions they generate.
//!
//! For `B(z) = ∏ (z − αₗ)/(1 − ᾱₗ z)` with `α₁ = 0`, the functions
//! `e_{jm} = k̂_{j+1} · B_j · Bᵐ` (`0 ≤ j < deg B`, `m ≥ 0`) form an orthonormal
//! basis of H²(𝔻). Here `k̂_j(z) = √(1 − |αⱼ|²)/(1 − ᾱⱼ z)` and `B_j` is the
//! partial product over the first `j` zeros in stored order.
//!
//! Taylor coefficients are produced by O(cap) recurrences per factor rather
//! than by convolving truncated series.

use crate::error::{Error, Result};
use crate::hardy::{CoefVector, TruncatedHardySpace};
use crate::json::{from_pair, to_pair, Pair};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Boundary slack allowed by [`BlaschkeProduct::evaluate`].
pub const BOUNDARY_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlaschkeJson", into = "BlaschkeJson")]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
    normalized: bool,
}

#[derive(Serialize, Deserialize)]
struct BlaschkeJson {
    zeros: Vec<Pair>,
}

impl TryFrom<BlaschkeJson> for BlaschkeProduct {
    type Error = Error;

    fn try_from(raw: BlaschkeJson) -> Result<Self> {
        BlaschkeProduct::new(raw.zeros.into_iter().map(from_pair).collect())
    }
}

impl From<BlaschkeProduct> for BlaschkeJson {
    fn from(b: BlaschkeProduct) -> Self {
        BlaschkeJson {
            zeros: b.zeros.into_iter().map(to_pair).collect(),
        }
    }
}

/// Index pair `(j, m)` of a Takenaka–Malmquist function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TmIndex {
    pub j: usize,
    pub m: usize,
}

impl TmIndex {
    pub fn new(j: usize, m: usize) -> Self {
        Self { j, m }
    }
}

impl BlaschkeProduct {
    /// Normalized product: the first zero must be the origin.
    pub fn new(zeros: Vec<Complex64>) -> Result<Self> {
        let b = Self::new_unnormalized(zeros)?;
        if !b.normalized {
            return Err(Error::NotNormalized(format!("{}", b.zeros[0])));
        }
        Ok(b)
    }

    /// Accepts any zeros in the open disc. Basis generation refuses to run on
    /// a product whose first zero is not the origin.
    pub fn new_unnormalized(zeros: Vec<Complex64>) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::EmptyProduct);
        }
        for (index, a) in zeros.iter().enumerate() {
            let modulus = a.norm();
            if !modulus.is_finite() || modulus >= 1.0 {
                return Err(Error::ZeroOutsideDisc { index, modulus });
            }
        }
        let normalized = zeros[0] == Complex64::new(0.0, 0.0);
        Ok(Self { zeros, normalized })
    }

    /// The coordinate function `z`.
    pub fn z() -> Self {
        Self::monomial(1)
    }

    /// `zʳ`, all zeros at the origin.
    pub fn monomial(r: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); r.max(1)]).expect("origin zeros are valid")
    }

    /// Convenience constructor from real zeros.
    pub fn from_real(zeros: &[f64]) -> Result<Self> {
        Self::new(zeros.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn max_modulus(&self) -> f64 {
        self.zeros.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// True when every zero sits at the origin, so `B = zʳ`.
    pub fn is_monomial(&self) -> bool {
        self.zeros.iter().all(|a| a.norm() == 0.0)
    }

    /// Cap that bounds the geometric tail of every factor below about 1e-10.
    pub fn recommended_cap(&self) -> usize {
        (50.0 / (1.0 - self.max_modulus())).ceil() as usize
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        check_point(z)?;
        Ok(self.zeros.iter().map(|&a| mobius(a, z)).product())
    }

    /// `B_j`, the product of the first `j` factors (`B_0 = 1`).
    pub fn partial_evaluate(&self, j: usize, z: Complex64) -> Result<Complex64> {
        if j > self.degree() {
            return Err(Error::IndexOutOfRange {
                index: j,
                limit: self.degree(),
            });
        }
        check_point(z)?;
        Ok(self.zeros[..j].iter().map(|&a| mobius(a, z)).product())
    }

    /// Taylor coefficients of `B` through degree `cap`.
    pub fn coefficients(&self, cap: usize) -> Vec<Complex64> {
        self.power_coefficients(1, cap)
    }

    /// Taylor coefficients of `Bᵐ` through degree `cap`.
    pub fn power_coefficients(&self, m: usize, cap: usize) -> Vec<Complex64> {
        let mut f = unit_series(cap);
        for _ in 0..m {
            for &a in &self.zeros {
                mul_mobius(&mut f, a);
            }
        }
        f
    }

    pub fn tm_component(&self, j: usize) -> Result<TmComponent<'_>> {
        self.require_normalized()?;
        if j >= self.degree() {
            return Err(Error::IndexOutOfRange {
                index: j,
                limit: self.degree() - 1,
            });
        }
        Ok(TmComponent { product: self, j })
    }

    /// Coefficients of `e_{jm}` through degree `cap` as a one-variable
    /// coefficient vector. Requires `cap ≥ deg(B)·(m+1)`.
    pub fn tm_basis_coeffs(&self, idx: TmIndex, cap: usize) -> Result<CoefVector> {
        self.require_normalized()?;
        self.check_index(idx)?;
        let needed = self.degree() * (idx.m + 1);
        if cap < needed {
            return Err(Error::InsufficientCap { cap, needed });
        }
        if cap < self.recommended_cap() {
            log::warn!(
                "cap {cap} below {} for zeros of modulus {:.3}; geometric tail may exceed 1e-10",
                self.recommended_cap(),
                self.max_modulus()
            );
        }
        let space = TruncatedHardySpace::one_variable(cap);
        Ok(CoefVector::from_parts(
            space,
            self.tm_series(idx, cap).into(),
        ))
    }

    /// Pointwise value of `e_{jm}`.
    pub fn tm_evaluate(&self, idx: TmIndex, z: Complex64) -> Result<Complex64> {
        self.require_normalized()?;
        self.check_index(idx)?;
        let head = self.tm_component(idx.j)?.evaluate(z)?;
        Ok(head * self.evaluate(z)?.powu(idx.m as u32))
    }

    /// Series of `e_{jm}` without the cap precondition; the caller accepts
    /// whatever the truncation discards.
    pub(crate) fn tm_series(&self, idx: TmIndex, cap: usize) -> Vec<Complex64> {
        let mut f = unit_series(cap);
        mul_kernel(&mut f, self.zeros[idx.j]);
        for &a in &self.zeros[..idx.j] {
            mul_mobius(&mut f, a);
        }
        for _ in 0..idx.m {
            for &a in &self.zeros {
                mul_mobius(&mut f, a);
            }
        }
        f
    }

    fn require_normalized(&self) -> Result<()> {
        if self.normalized {
            Ok(())
        } else {
            Err(Error::NotNormalized(format!("{}", self.zeros[0])))
        }
    }

    fn check_index(&self, idx: TmIndex) -> Result<()> {
        if idx.j >= self.degree() {
            return Err(Error::IndexOutOfRange {
                index: idx.j,
                limit: self.degree() - 1,
            });
        }
        Ok(())
    }
}

/// `e_{j0} = k̂_{j+1} · B_j`, available pointwise and as Taylor coefficients.
#[derive(Clone, Copy, Debug)]
pub struct TmComponent<'a> {
    product: &'a BlaschkeProduct,
    j: usize,
}

impl TmComponent<'_> {
    pub fn index(&self) -> usize {
        self.j
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let a = self.product.zeros[self.j];
        let kernel = (1.0 - a.norm_sqr()).sqrt() / (Complex64::new(1.0, 0.0) - a.conj() * z);
        Ok(kernel * self.product.partial_evaluate(self.j, z)?)
    }

    pub fn coefficients(&self, cap: usize) -> Vec<Complex64> {
        self.product.tm_series(TmIndex::new(self.j, 0), cap)
    }
}

fn check_point(z: Complex64) -> Result<()> {
    let r = z.norm();
    if !r.is_finite() || r > 1.0 + BOUNDARY_SLACK {
        return Err(Error::OutsideClosedDisc(r));
    }
    Ok(())
}

fn mobius(a: Complex64, z: Complex64) -> Complex64 {
    (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
}

fn unit_series(cap: usize) -> Vec<Complex64> {
    let mut f = vec![Complex64::new(0.0, 0.0); cap + 1];
    f[0] = Complex64::new(1.0, 0.0);
    f
}

/// In place `f ← f · (z − α)/(1 − ᾱz)`, from `(1 − ᾱz)g = (z − α)f`.
fn mul_mobius(f: &mut [Complex64], a: Complex64) {
    let ac = a.conj();
    let mut prev_f = Complex64::new(0.0, 0.0);
    let mut prev_g = Complex64::new(0.0, 0.0);
    for x in f.iter_mut() {
        let g = ac * prev_g + prev_f - a * *x;
        prev_f = *x;
        prev_g = g;
        *x = g;
    }
}

/// In place `f ← f · √(1 − |α|²)/(1 − ᾱz)`.
fn mul_kernel(f: &mut [Complex64], a: Complex64) {
    let ac = a.conj();
    let scale = (1.0 - a.norm_sqr()).sqrt();
    let mut prev_g = Complex64::new(0.0, 0.0);
    for x in f.iter_mut() {
        let g = ac * prev_g + scale * *x;
        prev_g = g;
        *x = g;
    }
}
