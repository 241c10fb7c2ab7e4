//! Square operators on finite models, with an exactness window.
//!
//! A truncated operator `T` only models its prototype on part of the space.
//! All analysis works with `A = T·P_W`, where `P_W` is the orthogonal
//! projection onto the window: leakage past the truncation boundary is
//! dropped rather than counted as genuine behaviour.

use crate::error::{Error, Result};
use crate::json::{self, Pair};
use crate::linalg::{
    self, complement, cross_defect, from_columns, gap, hermitian_min_eig, hstack, identity,
    intersect, mul, null_space, orth, residual_outside, singular_values, spectral_norm, CMat, CVec,
    DEFAULT_RANK_TOL,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Default number of powers tested for range containment.
pub const DEFAULT_K_MAX: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub enum Window {
    Full,
    /// Sorted, distinct coordinate indices (0-based).
    Coords(Vec<usize>),
    /// Orthonormal columns spanning the window.
    Subspace(CMat),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatorJson", into = "OperatorJson")]
pub struct OperatorMatrix {
    matrix: CMat,
    window: Window,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperatorJson {
    #[serde(with = "json::dense")]
    matrix: CMat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    window: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    window_basis: Option<Vec<Vec<Pair>>>,
}

impl TryFrom<OperatorJson> for OperatorMatrix {
    type Error = Error;

    fn try_from(raw: OperatorJson) -> Result<Self> {
        match (raw.window, raw.window_basis) {
            (Some(_), Some(_)) => Err(Error::InvalidArgument(
                "give either `window` or `window_basis`, not both".into(),
            )),
            (Some(w), None) => Self::with_window(raw.matrix, w),
            (None, Some(cols)) => {
                let basis = json::columns_to_mat(raw.matrix.nrows(), &cols)
                    .map_err(Error::InvalidArgument)?;
                Self::with_window_basis(raw.matrix, basis)
            }
            (None, None) => Self::new(raw.matrix),
        }
    }
}

impl From<OperatorMatrix> for OperatorJson {
    fn from(op: OperatorMatrix) -> Self {
        let (window, window_basis) = match &op.window {
            Window::Full => (None, None),
            Window::Coords(c) => (Some(c.clone()), None),
            Window::Subspace(q) => (None, Some(json::mat_to_columns(q))),
        };
        OperatorJson {
            matrix: op.matrix,
            window,
            window_basis,
        }
    }
}

impl OperatorMatrix {
    pub fn new(matrix: CMat) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        Ok(Self {
            matrix,
            window: Window::Full,
        })
    }

    pub fn with_window(matrix: CMat, mut coords: Vec<usize>) -> Result<Self> {
        let mut op = Self::new(matrix)?;
        coords.sort_unstable();
        coords.dedup();
        if let Some(&bad) = coords.iter().find(|&&c| c >= op.dim()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                limit: op.dim(),
            });
        }
        if coords.len() < op.dim() {
            op.window = Window::Coords(coords);
        }
        Ok(op)
    }

    /// Window spanned by the columns of `basis`, orthonormalized if needed.
    pub fn with_window_basis(matrix: CMat, basis: CMat) -> Result<Self> {
        let mut op = Self::new(matrix)?;
        if basis.nrows() != op.dim() {
            return Err(Error::DimensionMismatch {
                expected: op.dim(),
                found: basis.nrows(),
            });
        }
        let defect = (basis.adjoint() * &basis - identity(basis.ncols())).norm();
        let q = if defect < 1e-12 {
            basis
        } else {
            orth(&basis, 1e-12 * spectral_norm(&basis))
        };
        if q.ncols() < op.dim() {
            op.window = Window::Subspace(q);
        }
        Ok(op)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn window_dim(&self) -> usize {
        match &self.window {
            Window::Full => self.dim(),
            Window::Coords(c) => c.len(),
            Window::Subspace(q) => q.ncols(),
        }
    }

    /// Orthonormal basis of the window.
    pub fn window_basis(&self) -> CMat {
        let d = self.dim();
        match &self.window {
            Window::Full => identity(d),
            Window::Coords(c) => {
                let mut q = CMat::zeros(d, c.len());
                for (k, &i) in c.iter().enumerate() {
                    q[(i, k)] = Complex64::new(1.0, 0.0);
                }
                q
            }
            Window::Subspace(q) => q.clone(),
        }
    }

    /// `T·P_W`.
    pub fn windowed(&self) -> CMat {
        match &self.window {
            Window::Full => self.matrix.clone(),
            Window::Coords(c) => {
                let mut a = CMat::zeros(self.dim(), self.dim());
                for &i in c {
                    a.set_column(i, &self.matrix.column(i));
                }
                a
            }
            Window::Subspace(q) => &self.matrix * q * q.adjoint(),
        }
    }

    /// Operator norm of the windowed operator.
    pub fn scale(&self) -> f64 {
        spectral_norm(&self.windowed())
    }

    /// Absolute singular-value threshold for rank decisions at relative `rtol`.
    pub fn rank_threshold(&self, rtol: f64) -> f64 {
        rtol * self.scale().max(f64::MIN_POSITIVE)
    }

    /// Operator with the same matrix and a different window.
    pub fn rewindow(&self, window: Window) -> Result<Self> {
        match window {
            Window::Full => Self::new(self.matrix.clone()),
            Window::Coords(c) => Self::with_window(self.matrix.clone(), c),
            Window::Subspace(q) => Self::with_window_basis(self.matrix.clone(), q),
        }
    }
}

/// Orthonormal basis of the range of the windowed operator.
pub fn range_basis(t: &OperatorMatrix, rtol: f64) -> CMat {
    orth(&t.windowed(), t.rank_threshold(rtol))
}

/// Orthonormal basis of `ker(A*)`, the complement of the windowed range.
pub fn cokernel_basis(t: &OperatorMatrix, rtol: f64) -> CMat {
    complement(&range_basis(t, rtol))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NearIsometryCertificate {
    pub delta: f64,
    pub contraction_excess: f64,
    /// Entry `k−1` holds the residual for power `k`.
    pub range_residuals: Vec<f64>,
    pub k_max: usize,
    pub tol: f64,
    /// Lower bound `delta` must exceed.
    pub delta_floor: f64,
    pub window_dim: usize,
    pub verdict: bool,
}

/// Certifies that `T` is a near-isometry on its window, testing range
/// containment of `T*ᵏTᵏ⁺¹` for `k = 1..k_max`.
///
/// `delta` is the smallest singular value of `T` on the window, an upper bound
/// for the lower-bound constant of the prototype. Rank decisions use the fixed
/// relative threshold [`DEFAULT_RANK_TOL`], so the verdict is monotone in `tol`.
pub fn near_isometry_certificate(
    t: &OperatorMatrix,
    k_max: usize,
    tol: f64,
) -> Result<NearIsometryCertificate> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if t.window_dim() == 0 {
        return Err(Error::EmptyWindow);
    }
    let sv = singular_values(&mul(t.matrix(), &t.window_basis()));
    let delta = sv.last().copied().unwrap_or(0.0);
    let contraction_excess = (sv.first().copied().unwrap_or(0.0) - 1.0).max(0.0);
    let a = t.windowed();
    let a_adj = a.adjoint();
    let range = range_basis(t, DEFAULT_RANK_TOL);
    let mut forward = mul(&a, &a); // A^{k+1}
    let mut back = a_adj.clone(); // (A*)^k
    let mut range_residuals = Vec::with_capacity(k_max);
    for _ in 0..k_max {
        let r = mul(&back, &forward);
        range_residuals.push(spectral_norm(&residual_outside(&range, &r)));
        forward = mul(&a, &forward);
        back = mul(&a_adj, &back);
    }
    let delta_floor = t.rank_threshold(DEFAULT_RANK_TOL);
    let verdict =
        delta > delta_floor && contraction_excess < tol && range_residuals.iter().all(|&r| r < tol);
    Ok(NearIsometryCertificate {
        delta,
        contraction_excess,
        range_residuals,
        k_max,
        tol,
        delta_floor,
        window_dim: t.window_dim(),
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub holds: bool,
    pub min_eigenvalue: f64,
    #[serde(with = "json::vector")]
    pub witness: CVec,
    /// Dimension of the subspace the form was compressed to.
    pub tested_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShimorinReport {
    pub cond_a: ConditionReport,
    pub cond_b: ConditionReport,
}

/// Vectors `x` in the window with `Tx` also in the window.
pub fn second_order_window(t: &OperatorMatrix) -> CMat {
    let q = t.window_basis();
    if matches!(t.window(), Window::Full) {
        return q;
    }
    let leak = residual_outside(&q, &mul(t.matrix(), &q));
    let coeffs = null_space(&leak, t.rank_threshold(DEFAULT_RANK_TOL).max(1e-14));
    let mut w2 = mul(&q, &coeffs);
    linalg::orient(&mut w2);
    w2
}

/// `2‖Tx‖² − ‖T²x‖² − ‖x‖²`; non-negative for all `x` exactly when the first
/// condition holds.
pub fn cond_a_value(t: &OperatorMatrix, x: &CVec) -> f64 {
    let tx = t.matrix() * x;
    let ttx = t.matrix() * &tx;
    2.0 * tx.norm_squared() - ttx.norm_squared() - x.norm_squared()
}

/// Tests `‖T²x‖² + ‖x‖² ≤ 2‖Tx‖²` and `‖Tx + y‖² ≤ 2(‖x‖² + ‖Ty‖²)` as
/// positive-semidefiniteness of the corresponding Hermitian forms.
///
/// The first form is compressed to [`second_order_window`], where `T²x` is
/// exact; the second to the window itself.
pub fn shimorin_check(t: &OperatorMatrix, tol: f64) -> ShimorinReport {
    let d = t.dim();
    let m = t.matrix();
    let gram = mul(&m.adjoint(), m);
    let m2 = mul(m, m);
    let form_a = &gram * Complex64::new(2.0, 0.0) - mul(&m2.adjoint(), &m2) - identity(d);

    let q2 = second_order_window(t);
    let cond_a = compressed_condition(&form_a, &q2, tol);

    let q = t.window_basis();
    let mut form_b = CMat::zeros(2 * d, 2 * d);
    form_b
        .view_mut((0, 0), (d, d))
        .copy_from(&(identity(d) * Complex64::new(2.0, 0.0) - &gram));
    form_b.view_mut((0, d), (d, d)).copy_from(&(-m.adjoint()));
    form_b.view_mut((d, 0), (d, d)).copy_from(&(-m));
    form_b
        .view_mut((d, d), (d, d))
        .copy_from(&(&gram * Complex64::new(2.0, 0.0) - identity(d)));
    let w = q.ncols();
    let mut qq = CMat::zeros(2 * d, 2 * w);
    qq.view_mut((0, 0), (d, w)).copy_from(&q);
    qq.view_mut((d, w), (d, w)).copy_from(&q);
    let cond_b = compressed_condition(&form_b, &qq, tol);
    ShimorinReport { cond_a, cond_b }
}

fn compressed_condition(form: &CMat, q: &CMat, tol: f64) -> ConditionReport {
    if q.ncols() == 0 {
        return ConditionReport {
            holds: true,
            min_eigenvalue: 0.0,
            witness: CVec::zeros(form.nrows()),
            tested_dim: 0,
        };
    }
    let h = mul(&mul(&q.adjoint(), form), q);
    let (min_eigenvalue, v) = hermitian_min_eig(&h);
    let mut x = CMat::from_column_slice(q.nrows(), 1, (q * v).as_slice());
    linalg::orient(&mut x);
    ConditionReport {
        holds: min_eigenvalue >= -tol,
        min_eigenvalue,
        witness: x.column(0).into_owned(),
        tested_dim: q.ncols(),
    }
}

/// Orthonormal basis of the intersection of all windows in a tuple.
pub fn joint_window(ts: &[OperatorMatrix]) -> CMat {
    let d = ts[0].dim();
    let all_coords = ts
        .iter()
        .all(|t| !matches!(t.window(), Window::Subspace(_)));
    if all_coords {
        let keep: Vec<usize> = (0..d)
            .filter(|i| {
                ts.iter().all(|t| match t.window() {
                    Window::Coords(c) => c.binary_search(i).is_ok(),
                    _ => true,
                })
            })
            .collect();
        let mut q = CMat::zeros(d, keep.len());
        for (k, &i) in keep.iter().enumerate() {
            q[(i, k)] = Complex64::new(1.0, 0.0);
        }
        return q;
    }
    ts.iter().skip(1).fold(ts[0].window_basis(), |acc, t| {
        intersect(&acc, &t.window_basis(), 1e-10)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutingReport {
    /// `max(‖[Aᵢ,Aⱼ]‖, ‖[Aᵢ,Aⱼ*]‖)` on the joint window; zero on the diagonal.
    pub residuals: Vec<Vec<f64>>,
    pub commutators: Vec<Vec<f64>>,
    pub cross_commutators: Vec<Vec<f64>>,
    pub joint_window_dim: usize,
    pub max_residual: f64,
    pub verdict: bool,
}

fn check_tuple(ts: &[OperatorMatrix]) -> Result<()> {
    let d = ts[0].dim();
    match ts.iter().find(|t| t.dim() != d) {
        Some(t) => Err(Error::DimensionMismatch {
            expected: d,
            found: t.dim(),
        }),
        None => Ok(()),
    }
}

/// Commutator and cross-commutator norms for each pair in the tuple.
pub fn doubly_commuting_residual(ts: &[OperatorMatrix], tol: f64) -> Result<CommutingReport> {
    if ts.len() < 2 {
        return Err(Error::InvalidArgument("need at least two operators".into()));
    }
    check_tuple(ts)?;
    let q = joint_window(ts);
    let a: Vec<CMat> = ts.iter().map(OperatorMatrix::windowed).collect();
    let n = ts.len();
    let mut commutators = vec![vec![0.0; n]; n];
    let mut cross_commutators = vec![vec![0.0; n]; n];
    let mut residuals = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let aj_adj = a[j].adjoint();
            let c = spectral_norm(&((&a[i] * &a[j] - &a[j] * &a[i]) * &q));
            let x = spectral_norm(&((&a[i] * &aj_adj - &aj_adj * &a[i]) * &q));
            commutators[i][j] = c;
            cross_commutators[i][j] = x;
            residuals[i][j] = c.max(x);
        }
    }
    let max_residual = residuals.iter().flatten().copied().fold(0.0, f64::max);
    Ok(CommutingReport {
        residuals,
        commutators,
        cross_commutators,
        joint_window_dim: q.ncols(),
        max_residual,
        verdict: max_residual < tol,
    })
}

/// Orthonormal basis of `W_A = ∩_{i∈A} ker(Aᵢ*)`, indices 0-based.
///
/// For `A = ∅` this is the whole model space.
pub fn wandering_basis(ts: &[OperatorMatrix], a: &[usize], tol: f64) -> Result<CMat> {
    if ts.is_empty() {
        return Err(Error::InvalidArgument("empty operator tuple".into()));
    }
    check_tuple(ts)?;
    let d = ts[0].dim();
    if let Some(&bad) = a.iter().find(|&&i| i >= ts.len()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            limit: ts.len(),
        });
    }
    if a.is_empty() {
        return Ok(identity(d));
    }
    let images: Vec<CMat> = a.iter().map(|&i| ts[i].windowed()).collect();
    let refs: Vec<&CMat> = images.iter().collect();
    let stacked = hstack(d, &refs);
    let scale = a
        .iter()
        .map(|&i| ts[i].scale())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    Ok(complement(&orth(&stacked, tol * scale)))
}

/// Compression `QᴴTQ` to the span of `q` (orthonormal columns).
///
/// The compressed window consists of the coordinate vectors `a` with `Qa`
/// inside the original window.
pub fn compress(t: &OperatorMatrix, q: &CMat) -> Result<OperatorMatrix> {
    if q.nrows() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            found: q.nrows(),
        });
    }
    let matrix = q.adjoint() * t.matrix() * q;
    if matches!(t.window(), Window::Full) || q.ncols() == 0 {
        return OperatorMatrix::new(matrix);
    }
    let leak = residual_outside(&t.window_basis(), q);
    let inside = null_space(&leak, 1e-10);
    OperatorMatrix::with_window_basis(matrix, inside)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionReport {
    pub wandering_dim: usize,
    pub invariance_residual: f64,
    pub adjoint_invariance_residual: f64,
    /// Gap between `W_A ⊖ TⱼW_A` and `W_A ∩ Wⱼ`.
    pub subspace_gap: f64,
    pub left_dim: usize,
    pub right_dim: usize,
    /// Absent when `W_A = {0}`.
    pub certificate: Option<NearIsometryCertificate>,
    pub verdict: bool,
}

/// Checks that `W_A` reduces `Tⱼ`, that `W_A ⊖ TⱼW_A = W_A ∩ Wⱼ`, and that
/// `Tⱼ` compressed to `W_A` is a near-isometry.
pub fn verify_reduction_properties(
    ts: &[OperatorMatrix],
    a: &[usize],
    j: usize,
    tol: f64,
) -> Result<ReductionReport> {
    if a.contains(&j) {
        return Err(Error::Precondition(format!(
            "operator {j} belongs to the index set"
        )));
    }
    if j >= ts.len() {
        return Err(Error::IndexOutOfRange {
            index: j,
            limit: ts.len(),
        });
    }
    let comm = doubly_commuting_residual(ts, tol)?;
    if !comm.verdict {
        return Err(Error::Precondition(format!(
            "tuple is not doubly commuting (residual {:e})",
            comm.max_residual
        )));
    }
    let w = wandering_basis(ts, a, tol)?;
    let tj = &ts[j];
    let aj = tj.windowed();
    if w.ncols() == 0 {
        return Ok(ReductionReport {
            wandering_dim: 0,
            invariance_residual: 0.0,
            adjoint_invariance_residual: 0.0,
            subspace_gap: 0.0,
            left_dim: 0,
            right_dim: 0,
            certificate: None,
            verdict: true,
        });
    }
    let invariance_residual = spectral_norm(&residual_outside(&w, &(&aj * &w)));
    let adjoint_invariance_residual = spectral_norm(&residual_outside(&w, &(aj.adjoint() * &w)));

    let image = orth(&(&aj * &w), tj.rank_threshold(tol));
    let in_coords = w.adjoint() * &image;
    let left = &w * complement(&orth(&in_coords, 0.5));
    let wj = wandering_basis(ts, &[j], tol)?;
    let right = intersect(&w, &wj, tol.sqrt());
    let subspace_gap = gap(&left, &right);

    let certificate = near_isometry_certificate(&compress(tj, &w)?, DEFAULT_K_MAX, tol)?;
    let verdict = invariance_residual < tol
        && adjoint_invariance_residual < tol
        && subspace_gap < tol.sqrt()
        && certificate.verdict;
    Ok(ReductionReport {
        wandering_dim: w.ncols(),
        invariance_residual,
        adjoint_invariance_residual,
        subspace_gap,
        left_dim: left.ncols(),
        right_dim: right.ncols(),
        certificate: Some(certificate),
        verdict,
    })
}

/// Builds an operator from dense columns, for tests and fixtures.
pub fn operator_from_columns(cols: &[CVec]) -> Result<OperatorMatrix> {
    let d = cols.first().map_or(0, |c| c.len());
    OperatorMatrix::new(from_columns(d, cols))
}

/// Largest mutual-orthogonality defect among a list of bases.
pub fn pairwise_defect(bases: &[&CMat]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, u) in bases.iter().enumerate() {
        for v in &bases[i + 1..] {
            worst = worst.max(cross_defect(u, v));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    fn shift(d: usize) -> OperatorMatrix {
        let mut m = CMat::zeros(d, d);
        for i in 0..d - 1 {
            m[(i + 1, i)] = c64(1.0, 0.0);
        }
        OperatorMatrix::with_window(m, (0..d - 1).collect()).unwrap()
    }

    fn unitary(d: usize, seed: u64) -> CMat {
        // Householder-free: orthonormalize a deterministic pseudo-random matrix.
        let mut state = seed;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let raw = CMat::from_fn(d, d, |_, _| c64(next(), next()));
        raw.qr().q()
    }

    #[test]
    fn identity_certificate() {
        let t = OperatorMatrix::new(identity(4)).unwrap();
        let c = near_isometry_certificate(&t, 8, 1e-9).unwrap();
        assert!((c.delta - 1.0).abs() < 1e-14);
        assert_eq!(c.contraction_excess, 0.0);
        assert!(c.range_residuals.iter().all(|&r| r < 1e-14));
        assert!(c.verdict);
    }

    #[test]
    fn scaled_unitary_certificate() {
        let t = OperatorMatrix::new(unitary(4, 7) * c64(0.9, 0.0)).unwrap();
        let c = near_isometry_certificate(&t, 8, 1e-9).unwrap();
        assert!((c.delta - 0.9).abs() < 1e-12);
        assert!(c.range_residuals.iter().all(|&r| r < 1e-12));
        assert!(c.verdict);
    }

    #[test]
    fn certificate_errors() {
        let t = OperatorMatrix::new(identity(3)).unwrap();
        assert!(near_isometry_certificate(&t, 0, 1e-9).is_err());
        let empty = OperatorMatrix::with_window(identity(3), vec![]).unwrap();
        assert_eq!(
            near_isometry_certificate(&empty, 1, 1e-9),
            Err(Error::EmptyWindow)
        );
        assert!(OperatorMatrix::new(CMat::zeros(2, 3)).is_err());
    }

    #[test]
    fn truncated_shift_is_certified() {
        let c = near_isometry_certificate(&shift(10), 8, 1e-9).unwrap();
        assert!((c.delta - 1.0).abs() < 1e-14);
        assert!(c.verdict);
    }

    #[test]
    fn shimorin_identity_equality() {
        let t = OperatorMatrix::new(identity(4)).unwrap();
        let r = shimorin_check(&t, 1e-9);
        assert!(r.cond_a.holds);
        assert!(r.cond_a.min_eigenvalue.abs() < 1e-14);
        assert!(r.cond_b.holds);
    }

    #[test]
    fn commuting_diagonals() {
        let a = OperatorMatrix::new(CMat::from_diagonal(&CVec::from_vec(vec![
            c64(1.0, 0.0),
            c64(0.5, 0.0),
        ])))
        .unwrap();
        let b = OperatorMatrix::new(CMat::from_diagonal(&CVec::from_vec(vec![
            c64(0.0, 1.0),
            c64(2.0, 0.0),
        ])))
        .unwrap();
        let r = doubly_commuting_residual(&[a.clone(), b], 1e-12).unwrap();
        assert_eq!(r.max_residual, 0.0);
        assert!(r.verdict);
        assert!(doubly_commuting_residual(&[a], 1e-12).is_err());
    }

    #[test]
    fn shift_and_adjoint_commutator_has_unit_norm() {
        let mut m = CMat::zeros(6, 6);
        for i in 0..5 {
            m[(i + 1, i)] = c64(1.0, 0.0);
        }
        let s = OperatorMatrix::new(m.clone()).unwrap();
        let s_adj = OperatorMatrix::new(m.adjoint()).unwrap();
        let r = doubly_commuting_residual(&[s, s_adj], 1e-9).unwrap();
        assert!((r.commutators[0][1] - 1.0).abs() < 1e-12);
        assert!((r.max_residual - 1.0).abs() < 1e-12);
        assert!(!r.verdict);
    }

    #[test]
    fn wandering_space_of_shift() {
        let w = wandering_basis(&[shift(8)], &[0], 1e-9).unwrap();
        assert_eq!(w.ncols(), 1);
        assert!((w[(0, 0)] - c64(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(wandering_basis(&[shift(8)], &[], 1e-9).unwrap().ncols(), 8);
        assert!(wandering_basis(&[shift(8)], &[1], 1e-9).is_err());
    }

    #[test]
    fn compression_to_invariant_block() {
        let mut m = CMat::zeros(4, 4);
        m[(1, 0)] = c64(1.0, 0.0);
        m[(3, 3)] = c64(0.5, 0.0);
        let t = OperatorMatrix::new(m).unwrap();
        let q = CMat::from_fn(4, 2, |i, j| {
            if (i, j) == (0, 0) || (i, j) == (1, 1) {
                c64(1.0, 0.0)
            } else {
                c64(0.0, 0.0)
            }
        });
        let c = compress(&t, &q).unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.matrix()[(1, 0)], c64(1.0, 0.0));
        let s = shift(4);
        let c = compress(&s, &q).unwrap();
        assert_eq!(c.window_dim(), 2);
        let q3 = CMat::from_fn(
            4,
            1,
            |i, _| if i == 3 { c64(1.0, 0.0) } else { c64(0.0, 0.0) },
        );
        assert_eq!(compress(&s, &q3).unwrap().window_dim(), 0);
    }

    #[test]
    fn json_round_trip_and_shape() {
        let s = shift(3);
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"window\":[0,1]"));
        let back: OperatorMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"matrix":[[[1,0],[0,0]],[[0,0]]]}"#;
        let err = crate::json::parse::<OperatorMatrix>(bad).unwrap_err();
        assert!(err.contains("row 1"), "{err}");
        let out_of_range = r#"{"matrix":[[[1,0]]],"window":[3]}"#;
        assert!(serde_json::from_str::<OperatorMatrix>(out_of_range).is_err());
    }

    #[test]
    fn subspace_window_round_trip() {
        let q = CMat::from_fn(3, 1, |i, _| {
            c64(
                if i < 2 {
                    std::f64::consts::FRAC_1_SQRT_2
                } else {
                    0.0
                },
                0.0,
            )
        });
        let t = OperatorMatrix::with_window_basis(identity(3), q).unwrap();
        let text = serde_json::to_string(&t).unwrap();
        let back: OperatorMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, t);
        assert!((t.windowed()[(0, 1)] - c64(0.5, 0.0)).norm() < 1e-15);
    }
}
