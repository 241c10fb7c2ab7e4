//! Generators of subspaces invariant under multiplication by Blaschke
//! products, and checks of the representation `M = ⊕ φᵢ·H²(B₁,…,Bₙ)`.
//!
//! A model subspace is the span of finitely many ambient vectors with its own
//! inner product given by a Gram matrix `G = LLᴴ`. Coordinates `â = Lᴴa` are
//! orthonormal for that inner product, and every operator below acts on them.

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::hardy::{multiplication_matrix, CoefVector, TruncatedHardySpace};
use crate::json::{self, Pair};
use crate::linalg::{
    cross_defect, hermitian_min_eig, identity, lstsq, orth, residual_outside, singular_values,
    smallest_singular_value, spectral_norm, CMat, CVec,
};
use crate::operator::{
    doubly_commuting_residual, near_isometry_certificate, wandering_basis, NearIsometryCertificate,
    OperatorMatrix, DEFAULT_K_MAX,
};
use crate::wold::{closure, multivariable_wold, wold_decompose_with, WoldOptions};
use nalgebra::Cholesky;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Seed used for randomized checks unless the caller supplies one.
pub const DEFAULT_SEED: u64 = 0x5EED;

/// Relative energy allowed outside a window before a product counts as
/// overflowing it.
const WINDOW_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelJson", into = "ModelJson")]
pub struct ModelSubspace {
    ambient: TruncatedHardySpace,
    span_basis: Vec<CoefVector>,
    gram: Option<CMat>,
    window: Option<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelJson {
    ambient: TruncatedHardySpace,
    span_basis: Vec<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gram: Option<Vec<Vec<Pair>>>,
    /// Span vectors whose images must stay in the subspace.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    window: Option<Vec<usize>>,
}

impl TryFrom<ModelJson> for ModelSubspace {
    type Error = Error;

    fn try_from(raw: ModelJson) -> Result<Self> {
        let span = raw
            .span_basis
            .iter()
            .map(|p| CoefVector::from_pairs(raw.ambient.clone(), p))
            .collect::<Result<Vec<_>>>()?;
        let gram = raw
            .gram
            .map(|g| json::rows_to_mat(&g).map_err(Error::InvalidArgument))
            .transpose()?;
        ModelSubspace::new(raw.ambient, span, gram, raw.window)
    }
}

impl From<ModelSubspace> for ModelJson {
    fn from(m: ModelSubspace) -> Self {
        ModelJson {
            span_basis: m
                .span_basis
                .iter()
                .map(|v| json::vec_to_pairs(v.coeffs()))
                .collect(),
            gram: m.gram.as_ref().map(json::mat_to_rows),
            window: m.window,
            ambient: m.ambient,
        }
    }
}

impl ModelSubspace {
    pub fn new(
        ambient: TruncatedHardySpace,
        span_basis: Vec<CoefVector>,
        gram: Option<CMat>,
        window: Option<Vec<usize>>,
    ) -> Result<Self> {
        if span_basis.is_empty() {
            return Err(Error::InvalidArgument("span basis is empty".into()));
        }
        if span_basis.iter().any(|v| v.space() != &ambient) {
            return Err(Error::SpaceMismatch);
        }
        let k = span_basis.len();
        let m = Self {
            ambient,
            span_basis,
            gram,
            window,
        };
        let v = m.basis_matrix();
        let sv = singular_values(&v);
        let (hi, lo) = (sv[0], *sv.last().expect("non-empty"));
        if sv.len() < k || lo <= 1e-10 * hi.max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "span basis is linearly dependent (sigma_min {lo:e})"
            )));
        }
        if let Some(g) = &m.gram {
            if g.nrows() != k || g.ncols() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    found: g.nrows(),
                });
            }
            let scale = spectral_norm(g);
            if (g - g.adjoint()).norm() > 1e-12 * scale.max(1.0) {
                return Err(Error::InvalidArgument(
                    "gram matrix is not Hermitian".into(),
                ));
            }
            let (min_eig, _) = hermitian_min_eig(g);
            if min_eig <= 1e-12 * scale {
                return Err(Error::InvalidArgument(format!(
                    "gram matrix is not positive definite ({min_eig:e})"
                )));
            }
        }
        if let Some(w) = &m.window {
            if let Some(&bad) = w.iter().find(|&&j| j >= k) {
                return Err(Error::IndexOutOfRange {
                    index: bad,
                    limit: k,
                });
            }
        }
        Ok(m)
    }

    /// The whole truncated space with its own inner product.
    pub fn full(ambient: TruncatedHardySpace) -> Self {
        let span = ambient
            .indices()
            .map(|k| CoefVector::monomial(ambient.clone(), &k).expect("in range"))
            .collect();
        Self {
            ambient,
            span_basis: span,
            gram: None,
            window: None,
        }
    }

    pub fn ambient(&self) -> &TruncatedHardySpace {
        &self.ambient
    }

    pub fn span_basis(&self) -> &[CoefVector] {
        &self.span_basis
    }

    pub fn dim(&self) -> usize {
        self.span_basis.len()
    }

    pub fn window(&self) -> Option<&[usize]> {
        self.window.as_deref()
    }

    /// Span vectors as columns.
    pub fn basis_matrix(&self) -> CMat {
        let cols: Vec<CVec> = self.span_basis.iter().map(|v| v.coeffs().clone()).collect();
        CMat::from_columns(&cols)
    }

    /// The subspace's own Gram matrix; the ambient one when none was given.
    pub fn gram_matrix(&self) -> CMat {
        match &self.gram {
            Some(g) => g.clone(),
            None => {
                let v = self.basis_matrix();
                v.adjoint() * v
            }
        }
    }

    /// Inner product of two vectors given by span coordinates.
    pub fn inner_product(&self, a: &CVec, b: &CVec) -> Complex64 {
        (b.adjoint() * self.gram_matrix() * a)[(0, 0)]
    }
}

/// A model subspace in orthonormal coordinates with the compressed tuple.
struct Compressed {
    v: CMat,
    /// Lower Cholesky factor of the Gram matrix.
    l: CMat,
    ops: Vec<OperatorMatrix>,
    window_dims: Vec<usize>,
    invariance: Vec<f64>,
}

impl Compressed {
    fn build(m: &ModelSubspace, bs: &[BlaschkeProduct], tol: f64) -> Result<Self> {
        if bs.len() != m.ambient.variables() {
            return Err(Error::DimensionMismatch {
                expected: m.ambient.variables(),
                found: bs.len(),
            });
        }
        let k = m.dim();
        let v = m.basis_matrix();
        let l = Cholesky::new(m.gram_matrix())
            .ok_or_else(|| Error::InvalidArgument("gram matrix is not positive definite".into()))?
            .l();
        let l_adj = l.adjoint();
        let l_adj_inv = l_adj
            .clone()
            .solve_upper_triangular(&identity(k))
            .ok_or_else(|| Error::IllConditioned("singular Cholesky factor".into()))?;
        let mut ops = Vec::with_capacity(bs.len());
        let mut window_dims = Vec::with_capacity(bs.len());
        let mut invariance = Vec::with_capacity(bs.len());
        for (i, b) in bs.iter().enumerate() {
            let amb = multiplication_matrix(&m.ambient, b, i + 1)?;
            let exact = amb.exact_window();
            let mut in_exact = vec![false; m.ambient.dim()];
            for &r in exact {
                in_exact[r] = true;
            }
            let tv = amb.matrix() * &v;
            let coords = lstsq(&v, &tv, 1e-14);
            let resid = &tv - &v * &coords;
            let outside: Vec<f64> = (0..k)
                .map(|j| {
                    let col = v.column(j);
                    let outside: f64 = (0..col.len())
                        .filter(|r| !in_exact[*r])
                        .map(|r| col[r].norm_sqr())
                        .sum();
                    (outside / col.norm_squared()).sqrt()
                })
                .collect();
            let defect: Vec<f64> = (0..k)
                .map(|j| resid.column(j).norm() / v.column(j).norm())
                .collect();
            let ok = |j: usize| outside[j] <= tol && defect[j] <= tol;
            let window: Vec<usize> = match &m.window {
                Some(w) => {
                    if let Some(&j) = w.iter().find(|&&j| !ok(j)) {
                        return Err(Error::InvarianceFailure {
                            operator: i + 1,
                            column: j,
                            residual: defect[j].max(outside[j]),
                        });
                    }
                    w.clone()
                }
                None => (0..k).filter(|&j| ok(j)).collect(),
            };
            if window.is_empty() {
                let (column, residual) = (0..k)
                    .map(|j| (j, defect[j].max(outside[j])))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .expect("non-empty span");
                return Err(Error::InvarianceFailure {
                    operator: i + 1,
                    column,
                    residual,
                });
            }
            invariance.push(window.iter().map(|&j| defect[j]).fold(0.0, f64::max));
            window_dims.push(window.len());
            let hat = &l_adj * &coords * &l_adj_inv;
            let mut e = CMat::zeros(k, window.len());
            for (c, &j) in window.iter().enumerate() {
                e[(j, c)] = Complex64::new(1.0, 0.0);
            }
            let op = if window.len() == k {
                OperatorMatrix::new(hat)?
            } else {
                OperatorMatrix::with_window_basis(hat, orth(&(&l_adj * e), 1e-12))?
            };
            ops.push(op);
        }
        Ok(Self {
            v,
            l,
            ops,
            window_dims,
            invariance,
        })
    }

    /// Span coordinates `a` from orthonormal coordinates `â`.
    fn span_coords(&self, hat: &CMat) -> CMat {
        self.l
            .adjoint()
            .solve_upper_triangular(hat)
            .expect("invertible factor")
    }

    fn hat_coords(&self, a: &CMat) -> CMat {
        self.l.adjoint() * a
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorSet {
    pub r: usize,
    /// Product of the Blaschke degrees.
    pub bound: usize,
    pub bound_holds: bool,
    pub phis: Vec<CoefVector>,
    /// Generators in span coordinates, one column each.
    #[serde(with = "json::basis")]
    pub coordinates: CMat,
    /// Distance of the subspace from the span of all `T^k φᵢ`.
    pub residual_representation: f64,
    pub orthonormality_defect: f64,
    /// Largest inner product between the modules generated by distinct φᵢ.
    pub module_orthogonality: f64,
    pub invariance_residuals: Vec<f64>,
    pub window_dims: Vec<usize>,
    pub commuting_residual: Option<f64>,
    pub certificates: Vec<NearIsometryCertificate>,
}

/// Extracts an orthonormal generating set `φ₁,…,φ_r` of `M` from the joint
/// wandering space of the compressed multiplication tuple.
pub fn extract_generators(
    m: &ModelSubspace,
    bs: &[BlaschkeProduct],
    tol: f64,
) -> Result<GeneratorSet> {
    let comp = Compressed::build(m, bs, tol)?;
    let n = bs.len();
    let k = m.dim();
    let commuting_residual = if n >= 2 {
        let c = doubly_commuting_residual(&comp.ops, tol)?;
        if !c.verdict {
            return Err(Error::Precondition(format!(
                "compressed tuple is not doubly commuting (residual {:e})",
                c.max_residual
            )));
        }
        Some(c.max_residual)
    } else {
        None
    };
    let certificates = comp
        .ops
        .iter()
        .map(|t| near_isometry_certificate(t, DEFAULT_K_MAX, tol))
        .collect::<Result<Vec<_>>>()?;
    if let Some(i) = certificates.iter().position(|c| !c.verdict) {
        return Err(Error::Precondition(format!(
            "compressed operator {} is not a certified near-isometry",
            i + 1
        )));
    }

    let all: Vec<usize> = (0..n).collect();
    let w = wandering_basis(&comp.ops, &all, tol)?;
    let r = w.ncols();
    let bound: usize = bs.iter().map(BlaschkeProduct::degree).product();
    if r > bound {
        return Err(Error::BoundViolation { r, bound });
    }

    // every summand other than the one indexed by all operators must vanish
    if n == 1 {
        let opts = WoldOptions {
            assume_near_isometry: true,
            ..WoldOptions::new(k, tol)
        };
        let wd = wold_decompose_with(&comp.ops[0], &opts)?;
        if wd.invertible_part.ncols() > 0 {
            return Err(Error::Precondition(format!(
                "invertible summand has dimension {}",
                wd.invertible_part.ncols()
            )));
        }
    } else {
        let mw = multivariable_wold(&comp.ops, n, None, tol)?;
        if let Some(s) = mw.summands[..mw.summands.len() - 1]
            .iter()
            .find(|s| s.dim > 0)
        {
            return Err(Error::Precondition(format!(
                "summand {:?} has dimension {}",
                s.subset, s.dim
            )));
        }
    }

    let mut a = comp.span_coords(&w);
    let mut phis = Vec::with_capacity(r);
    for j in 0..r {
        let amb = &comp.v * a.column(j);
        let peak = amb.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if let Some(lead) = amb.iter().copied().find(|z| z.norm() > 1e-8 * peak) {
            let phase = lead.conj() / lead.norm();
            a.column_mut(j).apply(|x| *x *= phase);
        }
        phis.push(CoefVector::new(m.ambient.clone(), &comp.v * a.column(j))?);
    }
    let hat = comp.hat_coords(&a);
    let orthonormality_defect = (hat.adjoint() * &hat - identity(r)).norm();

    let refs: Vec<&OperatorMatrix> = comp.ops.iter().collect();
    let span = closure(&refs, &hat, k, tol);
    let residual_representation = spectral_norm(&residual_outside(&span, &identity(k)));
    let modules: Vec<CMat> = (0..r)
        .map(|i| closure(&refs, &hat.columns(i, 1).into_owned(), k, tol))
        .collect();
    let mut module_orthogonality: f64 = 0.0;
    for i in 0..r {
        for j in i + 1..r {
            module_orthogonality = module_orthogonality.max(cross_defect(&modules[i], &modules[j]));
        }
    }

    Ok(GeneratorSet {
        r,
        bound,
        bound_holds: true,
        phis,
        coordinates: a,
        residual_representation,
        orthonormality_defect,
        module_orthogonality,
        invariance_residuals: comp.invariance.clone(),
        window_dims: comp.window_dims.clone(),
        commuting_residual,
        certificates,
    })
}

/// `T^μ φ` in orthonormal coordinates for multi-indices reachable without
/// leaving a window, keyed by multi-index.
struct Orbit {
    vectors: BTreeMap<Vec<usize>, CVec>,
}

impl Orbit {
    /// Explores from `start` breadth-first, at most `limit` vectors.
    fn explore(ops: &[OperatorMatrix], start: CVec, limit: usize) -> Self {
        let n = ops.len();
        let mut vectors = BTreeMap::new();
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(vec![0; n]);
        vectors.insert(vec![0; n], start);
        while let Some(mu) = queue.pop_front() {
            if vectors.len() >= limit {
                break;
            }
            let x = vectors[&mu].clone();
            for (v, op) in ops.iter().enumerate() {
                let mut child = mu.clone();
                child[v] += 1;
                if vectors.contains_key(&child) {
                    continue;
                }
                if let Ok(y) = push(op, &x) {
                    vectors.insert(child.clone(), y);
                    queue.push_back(child);
                }
            }
        }
        Self { vectors }
    }
}

/// `T x`, provided `x` lies in the window.
fn push(op: &OperatorMatrix, x: &CVec) -> Result<CVec> {
    let q = op.window_basis();
    let xm = CMat::from_column_slice(x.len(), 1, x.as_slice());
    let outside = residual_outside(&q, &xm).norm();
    if outside > WINDOW_SLACK * x.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::WindowOverflow(format!(
            "vector has {outside:e} energy outside the window"
        )));
    }
    Ok(op.matrix() * x)
}

/// Coefficient of `φᵢ·f` in orthonormal coordinates, where `f` is given in
/// `B`-coordinates.
fn apply_symbol(ops: &[OperatorMatrix], phi_hat: &CVec, f: &CoefVector) -> Result<CVec> {
    let space = f.space();
    if space.variables() != ops.len() {
        return Err(Error::DimensionMismatch {
            expected: ops.len(),
            found: space.variables(),
        });
    }
    let indices: Vec<Vec<usize>> = space.indices().collect();
    // an index is needed if some nonzero coefficient sits at or above it
    let nonzero: Vec<&Vec<usize>> = indices
        .iter()
        .zip(f.coeffs().iter())
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(k, _)| k)
        .collect();
    let mut cache: BTreeMap<Vec<usize>, CVec> = BTreeMap::new();
    cache.insert(vec![0; ops.len()], phi_hat.clone());
    let mut total = CVec::zeros(phi_hat.len());
    for (mu, c) in indices.iter().zip(f.coeffs().iter()) {
        let needed = nonzero
            .iter()
            .any(|nu| nu.iter().zip(mu).all(|(a, b)| a >= b));
        if !needed {
            continue;
        }
        if !cache.contains_key(mu) {
            let v = mu.iter().rposition(|&e| e > 0).expect("non-zero index");
            let mut parent = mu.clone();
            parent[v] -= 1;
            let x = cache[&parent].clone();
            let y = push(&ops[v], &x).map_err(|_| {
                Error::WindowOverflow(format!("B-coordinate index {mu:?} leaves the exact window"))
            })?;
            cache.insert(mu.clone(), y);
        }
        if c.norm() > 0.0 {
            total += &cache[mu] * *c;
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize)]
pub struct NormIdentityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub passes: bool,
}

/// Compares `‖Σ φᵢfᵢ‖²_M` with `Σ ‖fᵢ‖²`, each `fᵢ` in `B`-coordinates.
pub fn verify_norm_identity(
    g: &GeneratorSet,
    fs: &[CoefVector],
    m: &ModelSubspace,
    bs: &[BlaschkeProduct],
    tol: f64,
) -> Result<NormIdentityReport> {
    if fs.len() != g.r {
        return Err(Error::DimensionMismatch {
            expected: g.r,
            found: fs.len(),
        });
    }
    let comp = Compressed::build(m, bs, tol)?;
    let hat = comp.hat_coords(&g.coordinates);
    let mut sum = CVec::zeros(m.dim());
    let mut rhs = 0.0;
    for (i, f) in fs.iter().enumerate() {
        sum += apply_symbol(&comp.ops, &hat.column(i).into_owned(), f)?;
        rhs += f.coeffs().norm_squared();
    }
    let lhs = sum.norm_squared();
    let residual = (lhs - rhs).abs();
    Ok(NormIdentityReport {
        lhs,
        rhs,
        residual,
        passes: residual < tol,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceReport {
    pub sigma_min: f64,
    pub columns: usize,
    pub passes: bool,
}

/// Smallest singular value of `(f₁,…,f_r) ↦ Σ φᵢfᵢ` on the `B`-monomials
/// whose products stay inside the windows.
pub fn verify_independence(
    g: &GeneratorSet,
    bs: &[BlaschkeProduct],
    m: &ModelSubspace,
    tol: f64,
) -> Result<IndependenceReport> {
    let comp = Compressed::build(m, bs, tol)?;
    let hat = comp.hat_coords(&g.coordinates);
    let k = m.dim();
    let mut cols = Vec::new();
    for i in 0..g.r {
        let orbit = Orbit::explore(&comp.ops, hat.column(i).into_owned(), 4 * k);
        cols.extend(orbit.vectors.into_values());
    }
    let sigma_min = if cols.is_empty() {
        0.0
    } else {
        smallest_singular_value(&CMat::from_columns(&cols))
    };
    Ok(IndependenceReport {
        sigma_min,
        columns: cols.len(),
        passes: sigma_min > tol,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionReport {
    /// Largest `‖φᵢf‖_M − ‖f‖₂` over generators and samples.
    pub max_excess: f64,
    /// Most negative excess observed.
    pub min_excess: f64,
    pub samples: usize,
    pub seed: u64,
    /// All samples satisfy the inequality strictly.
    pub strict: bool,
    /// Right-hand side used: the coefficient norm of `f` in `B`-coordinates.
    pub rhs_norm: String,
    pub passes: bool,
}

/// Samples `‖φᵢf‖_M ≤ ‖f‖₂` on random `f` with standard complex Gaussian
/// `B`-coefficients.
pub fn verify_contraction_property(
    g: &GeneratorSet,
    bs: &[BlaschkeProduct],
    m: &ModelSubspace,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<ContractionReport> {
    let comp = Compressed::build(m, bs, tol)?;
    let hat = comp.hat_coords(&g.coordinates);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_excess = f64::NEG_INFINITY;
    let mut min_excess = f64::INFINITY;
    for i in 0..g.r {
        let orbit = Orbit::explore(&comp.ops, hat.column(i).into_owned(), 4 * m.dim());
        let vectors: Vec<&CVec> = orbit.vectors.values().collect();
        for _ in 0..samples {
            let coeffs: Vec<Complex64> = (0..vectors.len())
                .map(|_| standard_complex(&mut rng))
                .collect();
            let image = vectors
                .iter()
                .zip(&coeffs)
                .fold(CVec::zeros(m.dim()), |acc, (v, c)| acc + *v * *c);
            let f_norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            let excess = image.norm() - f_norm;
            max_excess = max_excess.max(excess);
            min_excess = min_excess.min(excess);
        }
    }
    if g.r == 0 || samples == 0 {
        max_excess = 0.0;
        min_excess = 0.0;
    }
    Ok(ContractionReport {
        max_excess,
        min_excess,
        samples,
        seed,
        strict: max_excess < -tol,
        rhs_norm: "coefficient 2-norm in B-coordinates".into(),
        passes: max_excess < tol,
    })
}

/// Random `B`-coordinate tuple `(f₁,…,f_r)`: each `fᵢ` has standard complex
/// Gaussian coefficients on the multi-indices `μ` for which `T^μ φᵢ` stays
/// inside the windows, and zeros elsewhere.
pub fn random_f_tuple<R: rand::Rng>(
    g: &GeneratorSet,
    m: &ModelSubspace,
    bs: &[BlaschkeProduct],
    tol: f64,
    rng: &mut R,
) -> Result<Vec<CoefVector>> {
    let comp = Compressed::build(m, bs, tol)?;
    let hat = comp.hat_coords(&g.coordinates);
    let n = bs.len();
    let mut out = Vec::with_capacity(g.r);
    for i in 0..g.r {
        let orbit = Orbit::explore(&comp.ops, hat.column(i).into_owned(), 4 * m.dim());
        // keep a down-closed set so every intermediate product is defined
        let mut keys: Vec<Vec<usize>> = Vec::new();
        for mu in orbit.vectors.keys() {
            let closed = (0..n).filter(|&v| mu[v] > 0).all(|v| {
                let mut parent = mu.clone();
                parent[v] -= 1;
                keys.binary_search(&parent).is_ok()
            });
            if closed {
                keys.push(mu.clone());
            }
        }
        let caps: Vec<usize> = (0..n)
            .map(|v| keys.iter().map(|k| k[v]).max().unwrap_or(0))
            .collect();
        let space = TruncatedHardySpace::new(caps)?;
        let mut coeffs = CVec::zeros(space.dim());
        for k in &keys {
            coeffs[space.index_of(k)?] = standard_complex(rng);
        }
        out.push(CoefVector::new(space, coeffs)?);
    }
    Ok(out)
}

/// Standard complex Gaussian: independent real and imaginary parts of
/// variance one half.
pub fn standard_complex<R: rand::Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Random `B`-coordinate vector on a grid with the given caps.
pub fn random_b_coordinates<R: rand::Rng>(caps: Vec<usize>, rng: &mut R) -> Result<CoefVector> {
    let space = TruncatedHardySpace::new(caps)?;
    let coeffs = CVec::from_iterator(space.dim(), (0..space.dim()).map(|_| standard_complex(rng)));
    CoefVector::new(space, coeffs)
}

/// `span{φ·zᵏ : k ≤ count−1}` for a one-variable multiplier `φ` given by its
/// Taylor coefficients, truncated at `cap`.
pub fn multiplier_range(phi: &[Complex64], count: usize, cap: usize) -> Result<ModelSubspace> {
    let space = TruncatedHardySpace::one_variable(cap);
    let span = (0..count)
        .map(|k| {
            let mut c = CVec::zeros(cap + 1);
            for (n, &p) in phi.iter().enumerate() {
                if n + k <= cap {
                    c[n + k] = p;
                }
            }
            CoefVector::new(space.clone(), c)
        })
        .collect::<Result<Vec<_>>>()?;
    ModelSubspace::new(space, span, None, None)
}
