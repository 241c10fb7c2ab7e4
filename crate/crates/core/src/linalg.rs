//! Dense complex subspace utilities.
//!
//! Subspaces are represented by matrices with orthonormal columns. Every
//! routine that produces a basis applies [`orient`] so that results are
//! reproducible across runs.
//!
//! Matrices are stored as nalgebra types; singular value and Hermitian
//! eigenvalue decompositions are delegated to faer.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Default relative threshold for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn empty_basis(dim: usize) -> CMat {
    CMat::zeros(dim, 0)
}

pub fn identity(dim: usize) -> CMat {
    CMat::identity(dim, dim)
}

pub fn from_columns(dim: usize, cols: &[CVec]) -> CMat {
    if cols.is_empty() {
        return empty_basis(dim);
    }
    CMat::from_columns(cols)
}

/// Horizontal concatenation; all blocks must have the same row count.
pub fn hstack(dim: usize, blocks: &[&CMat]) -> CMat {
    let total: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMat::zeros(dim, total);
    let mut at = 0;
    for b in blocks {
        debug_assert_eq!(b.nrows(), dim);
        out.columns_mut(at, b.ncols()).copy_from(b);
        at += b.ncols();
    }
    out
}

fn to_faer(a: &CMat) -> faer::Mat<Complex64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn from_faer(a: faer::MatRef<'_, Complex64>) -> CMat {
    CMat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Matrix product; large products go through faer, which is much faster
/// than the generic complex kernel.
pub fn mul(a: &CMat, b: &CMat) -> CMat {
    debug_assert_eq!(a.ncols(), b.nrows());
    if a.nrows() * a.ncols() * b.ncols() < 32 * 32 * 32 {
        return a * b;
    }
    let out = to_faer(a) * to_faer(b);
    from_faer(out.as_ref())
}

/// Thin singular value decomposition `A = U·diag(s)·Vᴴ`, singular values in
/// descending order.
pub struct Svd {
    pub u: CMat,
    pub s: Vec<f64>,
    pub v: CMat,
}

pub fn svd(a: &CMat) -> Svd {
    let (m, n) = a.shape();
    let p = m.min(n);
    if p == 0 {
        return Svd {
            u: CMat::zeros(m, 0),
            s: Vec::new(),
            v: CMat::zeros(n, 0),
        };
    }
    let f = to_faer(a);
    let dec = f.thin_svd().expect("singular value iteration converges");
    let s = (0..p).map(|i| dec.S()[i].re).collect();
    Svd {
        u: from_faer(dec.U()),
        s,
        v: from_faer(dec.V()),
    }
}

/// Eigenvalues in ascending order with orthonormal eigenvectors of the
/// Hermitian part of `h`.
pub fn hermitian_eig(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let herm = (h + h.adjoint()).scale(0.5);
    let dec = to_faer(&herm)
        .self_adjoint_eigen(faer::Side::Lower)
        .expect("eigenvalue iteration converges");
    let vals = (0..n).map(|i| dec.S()[i].re).collect();
    (vals, from_faer(dec.U()))
}

/// Minimum-norm least-squares solution of `A·X = B`, ignoring singular
/// values at most `rcond` times the largest.
pub fn lstsq(a: &CMat, b: &CMat, rcond: f64) -> CMat {
    let d = svd(a);
    let cut = rcond * d.s.first().copied().unwrap_or(0.0);
    let mut x = CMat::zeros(a.ncols(), b.ncols());
    let uhb = d.u.adjoint() * b;
    for (k, &s) in d.s.iter().enumerate() {
        if s > cut && s > 0.0 {
            x += d.v.column(k) * (uhb.row(k) / Complex64::new(s, 0.0));
        }
    }
    x
}

/// Singular values in descending order.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let f = to_faer(a);
    let mut s: Vec<f64> = f
        .singular_values()
        .expect("singular value iteration converges");
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Largest singular value; zero for empty matrices.
pub fn spectral_norm(a: &CMat) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Smallest of the `min(rows, cols)` singular values; zero for empty input.
pub fn smallest_singular_value(a: &CMat) -> f64 {
    singular_values(a).last().copied().unwrap_or(0.0)
}

/// Rotate each column so that its first significant entry is real positive.
pub fn orient(q: &mut CMat) {
    for mut col in q.column_iter_mut() {
        let peak = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            continue;
        }
        if let Some(lead) = col.iter().copied().find(|z| z.norm() > 1e-8 * peak) {
            let phase = lead / lead.norm();
            col.apply(|z| *z *= phase.conj());
        }
    }
}

/// Orthonormal basis of the column space, keeping singular directions whose
/// singular value exceeds `threshold` (an absolute value).
pub fn orth(a: &CMat, threshold: f64) -> CMat {
    let dim = a.nrows();
    if dim == 0 || a.ncols() == 0 {
        return empty_basis(dim);
    }
    let d = svd(a);
    let keep = d.s.iter().take_while(|&&s| s > threshold).count();
    let mut q = d.u.columns(0, keep).into_owned();
    orient(&mut q);
    q
}

/// Orthonormal basis for the orthogonal complement of `span(q)`, where `q`
/// has orthonormal columns.
pub fn complement(q: &CMat) -> CMat {
    let dim = q.nrows();
    if q.ncols() == 0 {
        return identity(dim);
    }
    if q.ncols() >= dim {
        return empty_basis(dim);
    }
    let proj = identity(dim) - q * q.adjoint();
    let (vals, vecs) = hermitian_eig(&proj);
    let cols: Vec<CVec> = (0..dim)
        .rev()
        .filter(|&i| vals[i] > 0.5)
        .map(|i| vecs.column(i).into_owned())
        .collect();
    let mut out = from_columns(dim, &cols);
    orient(&mut out);
    out
}

/// Null space of `a` with singular values at most `threshold` treated as zero.
pub fn null_space(a: &CMat, threshold: f64) -> CMat {
    complement(&orth(&a.adjoint(), threshold))
}

/// Residual of `x` after projection onto `span(q)`.
pub fn residual_outside(q: &CMat, x: &CMat) -> CMat {
    if q.ncols() == 0 {
        return x.clone();
    }
    x - mul(q, &mul(&q.adjoint(), x))
}

/// Orthonormal basis of `span(u) ∩ span(v)` from the principal vectors of the
/// pair. A candidate direction is kept when its distance to the other
/// subspace is at most `tol`.
pub fn intersect(u: &CMat, v: &CMat, tol: f64) -> CMat {
    let dim = u.nrows();
    if u.ncols() == 0 || v.ncols() == 0 {
        return empty_basis(dim);
    }
    let d = svd(&(u.adjoint() * v));
    let mut kept = Vec::new();
    for i in 0..d.s.len() {
        let x = u * d.u.column(i);
        let off = residual_outside(v, &CMat::from_column_slice(dim, 1, x.as_slice()));
        if off.norm() <= tol {
            kept.push(x);
        }
    }
    orth(&from_columns(dim, &kept), 0.5)
}

/// Intersection by alternating orthogonal projections with rank re-estimation
/// after each sweep. Slower than [`intersect`]; kept as an independent route.
pub fn intersect_alternating(u: &CMat, v: &CMat, tol: f64, max_sweeps: usize) -> CMat {
    let dim = u.nrows();
    if u.ncols() == 0 || v.ncols() == 0 {
        return empty_basis(dim);
    }
    let pu = u * u.adjoint();
    let pv = v * v.adjoint();
    let mut x = u.clone();
    for _ in 0..max_sweeps {
        let y = &pu * (&pv * &x);
        // Directions contracted below one half after a sweep cannot belong to
        // the intersection; dropping them keeps the iterate well conditioned.
        let next = orth(&y, 0.5 * spectral_norm(&y).min(1.0).max(tol));
        let settled = next.ncols() == x.ncols() && gap(&next, &x) < tol * 1e-2;
        x = next;
        if x.ncols() == 0 || settled {
            break;
        }
    }
    let cols: Vec<CVec> = x
        .column_iter()
        .map(|c| c.into_owned())
        .filter(|c| {
            let m = CMat::from_column_slice(dim, 1, c.as_slice());
            residual_outside(u, &m).norm() <= tol && residual_outside(v, &m).norm() <= tol
        })
        .collect();
    orth(&from_columns(dim, &cols), 0.5)
}

/// Sine of the largest principal angle between two subspaces given by
/// orthonormal bases. Subspaces of different dimension are at distance one.
pub fn gap(u: &CMat, v: &CMat) -> f64 {
    match (u.ncols(), v.ncols()) {
        (0, 0) => 0.0,
        (a, b) if a != b => 1.0,
        _ => {
            let a = spectral_norm(&residual_outside(v, u));
            let b = spectral_norm(&residual_outside(u, v));
            a.max(b).min(1.0)
        }
    }
}

/// Largest principal angle in radians.
pub fn max_principal_angle(u: &CMat, v: &CMat) -> f64 {
    gap(u, v).asin()
}

/// Principal angles in ascending order, computed from the singular values of
/// `uᴴv`. Small angles come from the sine route for accuracy.
pub fn principal_angles(u: &CMat, v: &CMat) -> Vec<f64> {
    if u.ncols() == 0 || v.ncols() == 0 {
        return Vec::new();
    }
    let cosines = singular_values(&(u.adjoint() * v));
    let sines = {
        let mut s = singular_values(&residual_outside(u, v));
        s.resize(v.ncols(), 0.0);
        s.sort_by(|x, y| x.total_cmp(y));
        s
    };
    let k = cosines.len();
    (0..k)
        .map(|i| {
            let cos = cosines[i].min(1.0);
            if cos > std::f64::consts::FRAC_1_SQRT_2 && i < sines.len() {
                sines[i].min(1.0).asin()
            } else {
                cos.acos()
            }
        })
        .collect()
}

pub fn projector(q: &CMat) -> CMat {
    q * q.adjoint()
}

/// Minimum eigenvalue of a Hermitian matrix with a unit eigenvector.
pub fn hermitian_min_eig(h: &CMat) -> (f64, CVec) {
    let dim = h.nrows();
    if dim == 0 {
        return (0.0, CVec::zeros(0));
    }
    let (vals, vecs) = hermitian_eig(h);
    let mut v = vecs.columns(0, 1).into_owned();
    orient(&mut v);
    (vals[0], v.column(0).into_owned())
}

/// Maximum absolute entry of `uᴴv`, the mutual-orthogonality defect.
pub fn cross_defect(u: &CMat, v: &CMat) -> f64 {
    if u.ncols() == 0 || v.ncols() == 0 {
        return 0.0;
    }
    spectral_norm(&(u.adjoint() * v))
}
