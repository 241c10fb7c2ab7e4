//! Wold-type decompositions: a single near-isometry splits into a shift part
//! and an invertible part; a doubly commuting tuple of `m` near-isometries
//! splits into `2ᵐ` joint reducing summands.

use crate::error::{Error, Result};
use crate::json;
use crate::linalg::{
    cross_defect, empty_basis, gap, hstack, identity, intersect, mul, orth, projector,
    residual_outside, singular_values, spectral_norm, CMat,
};
use crate::operator::{
    compress, doubly_commuting_residual, near_isometry_certificate, pairwise_defect,
    wandering_basis, CommutingReport, NearIsometryCertificate, OperatorMatrix, Window,
    DEFAULT_K_MAX,
};
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct WoldOptions {
    pub m_max: usize,
    pub k_max: usize,
    /// Bound on the number of intersection steps; defaults to the dimension.
    pub power_cap: Option<usize>,
    pub tol: f64,
    /// Skip the near-isometry certificate.
    pub assume_near_isometry: bool,
}

impl WoldOptions {
    pub fn new(m_max: usize, tol: f64) -> Self {
        Self {
            m_max,
            k_max: DEFAULT_K_MAX,
            power_cap: None,
            tol,
            assume_near_isometry: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WoldResiduals {
    /// Largest `‖L_mᴴ L_k‖` over distinct layers, the tail included.
    pub layer_orthogonality: f64,
    pub invertible_orthogonality: f64,
    /// `‖I − Σ P_layer − P_tail − P_invertible‖`.
    pub completeness: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WoldDecomposition {
    #[serde(with = "json::bases")]
    pub layers: Vec<CMat>,
    pub layer_dims: Vec<usize>,
    /// `clipped[m]` counts vectors of layer `m` that leave the window and are
    /// not pushed forward.
    pub clipped: Vec<usize>,
    #[serde(with = "json::basis")]
    pub invertible_part: CMat,
    /// Shift-part vectors beyond layer `m_max`.
    #[serde(with = "json::basis")]
    pub shift_tail: CMat,
    pub m_max: usize,
    pub power_cap: usize,
    pub core_converged: bool,
    pub residuals: WoldResiduals,
    pub invertible_restriction: Option<Restriction>,
    pub certificate: Option<NearIsometryCertificate>,
}

impl WoldDecomposition {
    pub fn wandering_dim(&self) -> usize {
        self.layers.first().map_or(0, CMat::ncols)
    }

    /// Orthonormal basis of the shift part, layers and tail together.
    pub fn shift_part(&self) -> CMat {
        let dim = self.invertible_part.nrows();
        let mut blocks: Vec<&CMat> = self.layers.iter().collect();
        blocks.push(&self.shift_tail);
        orth(&hstack(dim, &blocks), 0.5)
    }

    pub fn passes(&self, tol: f64) -> bool {
        let r = &self.residuals;
        self.certificate.as_ref().is_none_or(|c| c.verdict)
            && r.layer_orthogonality < tol
            && r.invertible_orthogonality < tol
            && r.completeness < tol.sqrt()
    }
}

/// Part of `basis` lying inside the operator's window.
pub(crate) fn in_window(t: &OperatorMatrix, basis: &CMat, tol: f64) -> CMat {
    match t.window() {
        Window::Full => basis.clone(),
        _ => intersect(basis, &t.window_basis(), tol),
    }
}

/// Largest subspace `Y ⊆ start` with `Y = Y ∩ A·Y`, by iteration.
/// Returns the core and whether it stabilized within `cap` steps.
pub(crate) fn invariant_core(
    t: &OperatorMatrix,
    start: &CMat,
    cap: usize,
    tol: f64,
) -> (CMat, bool) {
    let a = t.windowed();
    let thr = t.rank_threshold(tol);
    let mut y = start.clone();
    for _ in 0..cap {
        if y.ncols() == 0 {
            return (y, true);
        }
        let next = intersect(&y, &orth(&mul(&a, &y), thr), tol);
        if next.ncols() == y.ncols() {
            return (y, true);
        }
        y = next;
    }
    let emptied = y.ncols() == 0;
    (y, emptied)
}

/// Smallest subspace containing `start` and closed under every operator in
/// `ops`, pushing forward only vectors inside each window.
pub(crate) fn closure(ops: &[&OperatorMatrix], start: &CMat, cap: usize, tol: f64) -> CMat {
    let dim = start.nrows();
    let thr = ops
        .iter()
        .map(|t| t.rank_threshold(tol))
        .fold(tol, f64::max);
    let mut z = start.clone();
    for _ in 0..cap {
        if z.ncols() == 0 {
            break;
        }
        let images: Vec<CMat> = ops
            .iter()
            .map(|t| t.matrix() * in_window(t, &z, tol))
            .collect();
        let mut blocks: Vec<&CMat> = vec![&z];
        blocks.extend(images.iter());
        let next = orth(&hstack(dim, &blocks), thr);
        if next.ncols() == z.ncols() {
            break;
        }
        z = next;
    }
    z
}

/// Splits the model space as `⊕ₘ TᵐW ⊕ (tail) ⊕ ∩ₘ TᵐH` with `W = ker T*`.
pub fn wold_decompose(t: &OperatorMatrix, m_max: usize, tol: f64) -> Result<WoldDecomposition> {
    wold_decompose_with(t, &WoldOptions::new(m_max, tol))
}

pub fn wold_decompose_with(t: &OperatorMatrix, opts: &WoldOptions) -> Result<WoldDecomposition> {
    let tol = opts.tol;
    let dim = t.dim();
    let certificate = if opts.assume_near_isometry {
        None
    } else {
        let c = near_isometry_certificate(t, opts.k_max, tol)?;
        if !c.verdict {
            return Err(Error::Precondition(format!(
                "operator is not certified as a near-isometry (delta {:e}, excess {:e}, worst range residual {:e})",
                c.delta,
                c.contraction_excess,
                c.range_residuals.iter().copied().fold(0.0, f64::max)
            )));
        }
        Some(c)
    };
    if t.window_dim() == 0 {
        return Err(Error::EmptyWindow);
    }
    let power_cap = opts.power_cap.unwrap_or(dim).max(1);
    let thr = t.rank_threshold(tol);
    let a = t.windowed();

    let w = wandering_basis(std::slice::from_ref(t), &[0], tol)?;
    if w.ncols() > 0 && opts.m_max > 0 && in_window(t, &w, tol).ncols() == 0 {
        return Err(Error::InvalidArgument(
            "window too small: every wandering vector is clipped".into(),
        ));
    }
    let mut layers = vec![w];
    let mut clipped = Vec::new();
    for _ in 0..opts.m_max {
        let prev = layers.last().expect("at least the wandering layer");
        if prev.ncols() == 0 {
            break;
        }
        let inside = in_window(t, prev, tol);
        clipped.push(prev.ncols() - inside.ncols());
        let next = orth(&(t.matrix() * inside), thr);
        if next.ncols() == 0 {
            break;
        }
        layers.push(next);
    }
    while clipped.len() < layers.len() {
        clipped.push(0);
    }

    let (invertible_part, core_converged) = invariant_core(t, &identity(dim), power_cap, tol);

    // range(A^{m_max+1}) with the invertible part removed
    let mut range = identity(dim);
    for _ in 0..=opts.m_max {
        if range.ncols() == 0 {
            break;
        }
        range = orth(&mul(&a, &range), thr);
    }
    let shift_tail = orth(&residual_outside(&invertible_part, &range), 0.5);

    let mut all: Vec<&CMat> = layers.iter().collect();
    all.push(&shift_tail);
    let layer_orthogonality = pairwise_defect(&all);
    let invertible_orthogonality = all
        .iter()
        .map(|l| cross_defect(l, &invertible_part))
        .fold(0.0, f64::max);
    let mut p = identity(dim);
    for l in &all {
        p -= projector(l);
    }
    p -= projector(&invertible_part);
    let completeness = spectral_norm(&p);

    let invertible_restriction = if invertible_part.ncols() > 0 {
        Some(restriction_stats(t, &invertible_part, tol)?)
    } else {
        None
    };
    Ok(WoldDecomposition {
        layer_dims: layers.iter().map(CMat::ncols).collect(),
        layers,
        clipped,
        invertible_part,
        shift_tail,
        m_max: opts.m_max,
        power_cap,
        core_converged,
        residuals: WoldResiduals {
            layer_orthogonality,
            invertible_orthogonality,
            completeness,
        },
        invertible_restriction,
        certificate,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RestrictionKind {
    Shift,
    Invertible,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Restriction {
    pub kind: RestrictionKind,
    pub subspace_dim: usize,
    pub invariance_residual: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// Invertible with all singular values within 1e-9 of one.
    pub unitary: bool,
    pub wandering_dim: usize,
}

const UNITARY_TOL: f64 = 1e-9;

fn invariance_residual(t: &OperatorMatrix, basis: &CMat) -> f64 {
    spectral_norm(&residual_outside(basis, &(t.windowed() * basis)))
}

/// Singular-value data of `T` compressed to an invariant subspace.
fn restriction_stats(t: &OperatorMatrix, basis: &CMat, tol: f64) -> Result<Restriction> {
    let c = compress(t, basis)?;
    let sv = singular_values(&(c.matrix() * c.window_basis()));
    let full = c.window_dim() == c.dim();
    let sigma_min = if full {
        sv.last().copied().unwrap_or(0.0)
    } else {
        0.0
    };
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let invertible = full && sigma_min > tol;
    Ok(Restriction {
        kind: if invertible {
            RestrictionKind::Invertible
        } else {
            RestrictionKind::Neither
        },
        subspace_dim: basis.ncols(),
        invariance_residual: invariance_residual(t, basis),
        sigma_min,
        sigma_max,
        unitary: invertible
            && (sigma_min - 1.0).abs() < UNITARY_TOL
            && (sigma_max - 1.0).abs() < UNITARY_TOL,
        wandering_dim: 0,
    })
}

/// Decides whether `T` restricted to the span of `basis` is a shift, an
/// invertible operator, or neither.
pub fn classify_restriction(t: &OperatorMatrix, basis: &CMat, tol: f64) -> Result<Restriction> {
    if basis.nrows() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            found: basis.nrows(),
        });
    }
    if basis.ncols() == 0 {
        return Err(Error::InvalidArgument(
            "cannot classify on the zero subspace".into(),
        ));
    }
    let residual = invariance_residual(t, basis);
    if residual > tol {
        return Err(Error::NotInvariant { residual, tol });
    }
    let mut stats = restriction_stats(t, basis, tol)?;
    if stats.kind == RestrictionKind::Invertible {
        return Ok(stats);
    }
    let c = compress(t, basis)?;
    if c.window_dim() == 0 {
        return Ok(stats);
    }
    let opts = WoldOptions {
        assume_near_isometry: true,
        ..WoldOptions::new(c.dim(), tol)
    };
    let wd = wold_decompose_with(&c, &opts)?;
    stats.wandering_dim = wd.wandering_dim();
    if wd.invertible_part.ncols() == 0
        && wd.wandering_dim() > 0
        && wd.residuals.completeness < tol.sqrt()
    {
        stats.kind = RestrictionKind::Shift;
    }
    Ok(stats)
}

#[derive(Clone, Debug, Serialize)]
pub struct Summand {
    /// Members of the index set, 1-based.
    pub subset: Vec<usize>,
    pub dim: usize,
    #[serde(with = "json::basis")]
    pub basis: CMat,
    /// Per operator; absent for the zero summand.
    pub classification: Vec<Option<Restriction>>,
    pub reducing_residual: f64,
    pub adjoint_reducing_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiWoldResiduals {
    pub pairwise_orthogonality: f64,
    pub completeness: f64,
    pub max_reducing: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiWoldDecomposition {
    pub m: usize,
    pub power_cap: usize,
    /// Indexed by bitmask: bit `i` set means operator `i+1` is in the subset.
    pub summands: Vec<Summand>,
    pub residuals: MultiWoldResiduals,
    pub commuting: CommutingReport,
    pub certificates: Vec<NearIsometryCertificate>,
}

impl MultiWoldDecomposition {
    /// Summand for a subset given by 1-based indices.
    pub fn summand(&self, subset: &[usize]) -> Option<&Summand> {
        let mask = subset.iter().try_fold(0usize, |acc, &i| {
            (1..=self.m).contains(&i).then_some(acc | 1 << (i - 1))
        })?;
        self.summands.get(mask)
    }

    pub fn passes(&self, tol: f64) -> bool {
        let r = &self.residuals;
        r.pairwise_orthogonality < tol.sqrt()
            && r.completeness < tol.sqrt()
            && r.max_reducing < tol.sqrt()
    }
}

/// `2ᵐ`-summand decomposition of the first `m` operators of a doubly
/// commuting tuple of near-isometries.
///
/// For each subset `A`, the summand is the joint wandering space `W_A`, cut
/// down to its invariant core under every `Tⱼ` with `j ∉ A` (peeled in index
/// order until jointly stable), then closed under the `Tᵢ` with `i ∈ A`.
pub fn multivariable_wold(
    ts: &[OperatorMatrix],
    m: usize,
    power_cap: Option<usize>,
    tol: f64,
) -> Result<MultiWoldDecomposition> {
    multivariable_wold_ordered(ts, m, power_cap, tol, None)
}

/// As [`multivariable_wold`], peeling the outside operators in `order`.
pub fn multivariable_wold_ordered(
    ts: &[OperatorMatrix],
    m: usize,
    power_cap: Option<usize>,
    tol: f64,
    order: Option<&[usize]>,
) -> Result<MultiWoldDecomposition> {
    if m < 2 || m > ts.len() {
        return Err(Error::Precondition(format!(
            "need 2 <= m <= {}, got {m}",
            ts.len()
        )));
    }
    let ops = &ts[..m];
    let commuting = doubly_commuting_residual(ops, tol)?;
    if !commuting.verdict {
        return Err(Error::Precondition(format!(
            "tuple is not doubly commuting (residual {:e})",
            commuting.max_residual
        )));
    }
    let certificates = ops
        .iter()
        .map(|t| near_isometry_certificate(t, DEFAULT_K_MAX, tol))
        .collect::<Result<Vec<_>>>()?;
    if let Some(i) = certificates.iter().position(|c| !c.verdict) {
        return Err(Error::Precondition(format!(
            "operator {} is not certified as a near-isometry",
            i + 1
        )));
    }
    let dim = ops[0].dim();
    if ops.iter().any(|t| t.window_dim() == 0) {
        return Err(Error::EmptyWindow);
    }
    let cap = power_cap.unwrap_or(dim).max(1);
    let default_order: Vec<usize> = (0..m).collect();
    let order = order.unwrap_or(&default_order);

    let mut summands = Vec::with_capacity(1 << m);
    for mask in 0..(1usize << m) {
        let inside: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        let outside: Vec<usize> = order
            .iter()
            .copied()
            .filter(|i| mask >> i & 1 == 0)
            .collect();
        let mut y = wandering_basis(ops, &inside, tol)?;
        for _ in 0..cap {
            let before = y.ncols();
            for &j in &outside {
                y = invariant_core(&ops[j], &y, cap, tol).0;
            }
            if y.ncols() == before || y.ncols() == 0 {
                break;
            }
        }
        let movers: Vec<&OperatorMatrix> = inside.iter().map(|&i| &ops[i]).collect();
        let basis = if movers.is_empty() {
            y
        } else {
            closure(&movers, &y, cap, tol)
        };
        let reducing_residual = ops
            .iter()
            .map(|t| invariance_residual(t, &basis))
            .fold(0.0, f64::max);
        let adjoint_reducing_residual = ops
            .iter()
            .map(|t| {
                spectral_norm(&residual_outside(
                    &basis,
                    &(t.windowed().adjoint() * &basis),
                ))
            })
            .fold(0.0, f64::max);
        let classification = if basis.ncols() == 0 {
            vec![None; m]
        } else {
            ops.iter()
                .map(|t| classify_restriction(t, &basis, tol.sqrt()).ok())
                .collect()
        };
        summands.push(Summand {
            subset: inside.iter().map(|i| i + 1).collect(),
            dim: basis.ncols(),
            basis,
            classification,
            reducing_residual,
            adjoint_reducing_residual,
        });
    }
    let bases: Vec<&CMat> = summands.iter().map(|s| &s.basis).collect();
    let pairwise_orthogonality = pairwise_defect(&bases);
    let mut p = identity(dim);
    for b in &bases {
        p -= projector(b);
    }
    let completeness = spectral_norm(&p);
    let max_reducing = summands
        .iter()
        .map(|s| s.reducing_residual.max(s.adjoint_reducing_residual))
        .fold(0.0, f64::max);
    Ok(MultiWoldDecomposition {
        m,
        power_cap: cap,
        summands,
        residuals: MultiWoldResiduals {
            pairwise_orthogonality,
            completeness,
            max_reducing,
        },
        commuting,
        certificates,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaHypotheses {
    pub commutation: f64,
    pub invariance: f64,
    /// Largest `‖(T₂ᵏW)ᴴ T₂ᵏ⁺¹H‖` for `k < power_cap`.
    pub orthogonality: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaOtReport {
    pub power_cap: usize,
    pub hypotheses: LemmaHypotheses,
    /// Name of the first failing hypothesis; identities are skipped then.
    pub hypothesis_failure: Option<String>,
    pub identity_i: Option<f64>,
    /// Second identity with `R = H`.
    pub identity_ii_full: Option<f64>,
    /// Second identity with `R = W`.
    pub identity_ii_wandering: Option<f64>,
    pub identity_iii: Option<f64>,
    pub verdict: bool,
}

struct Powers<'a> {
    t: &'a OperatorMatrix,
    a: CMat,
    thr: f64,
}

impl<'a> Powers<'a> {
    fn new(t: &'a OperatorMatrix, tol: f64) -> Self {
        Self {
            t,
            a: t.windowed(),
            thr: t.rank_threshold(tol),
        }
    }

    fn apply(&self, x: &CMat) -> CMat {
        orth(&(&self.a * x), self.thr)
    }

    /// `[x, Ax, …, A^cap x]`, each orthonormalized.
    fn orbit(&self, x: &CMat, cap: usize) -> Vec<CMat> {
        let mut out = vec![x.clone()];
        for _ in 0..cap {
            let next = self.apply(out.last().expect("non-empty"));
            out.push(next);
        }
        out
    }

    /// `span ∪ₘ Aᵐx`.
    fn sum(&self, x: &CMat, cap: usize) -> CMat {
        let orbit = self.orbit(x, cap);
        let refs: Vec<&CMat> = orbit.iter().collect();
        orth(&hstack(self.t.dim(), &refs), self.thr)
    }

    /// `∩ₘ Aᵐx`.
    fn meet(&self, x: &CMat, cap: usize, tol: f64) -> CMat {
        intersect_all(&self.orbit(x, cap), tol)
    }
}

fn intersect_all(spaces: &[CMat], tol: f64) -> CMat {
    let mut it = spaces.iter();
    let first = it.next().expect("non-empty").clone();
    it.fold(first, |acc, s| intersect(&acc, s, tol))
}

/// Numerically checks the three subspace identities relating `T₁` to the
/// `T₂`-orbit of `W`, after verifying their hypotheses.
pub fn lemma_ot_check(
    t1: &OperatorMatrix,
    t2: &OperatorMatrix,
    w: &CMat,
    power_cap: usize,
    tol: f64,
) -> Result<LemmaOtReport> {
    let dim = t1.dim();
    if t2.dim() != dim || w.nrows() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: if t2.dim() != dim { t2.dim() } else { w.nrows() },
        });
    }
    let p1 = Powers::new(t1, tol);
    let p2 = Powers::new(t2, tol);
    let w = if w.ncols() == 0 {
        empty_basis(dim)
    } else {
        orth(w, 1e-12)
    };

    let joint = crate::operator::joint_window(&[t1.clone(), t2.clone()]);
    let commutation = spectral_norm(&((&p1.a * &p2.a - &p2.a * &p1.a) * &joint));
    let invariance = spectral_norm(&residual_outside(&w, &(&p1.a * &w)));
    let full_orbit = p2.orbit(&identity(dim), power_cap + 1);
    let w_orbit = p2.orbit(&w, power_cap);
    let orthogonality = w_orbit
        .iter()
        .zip(full_orbit.iter().skip(1))
        .map(|(x, y)| cross_defect(x, y))
        .fold(0.0, f64::max);
    let hypotheses = LemmaHypotheses {
        commutation,
        invariance,
        orthogonality,
    };
    let failure = if commutation >= tol {
        Some("commutation")
    } else if invariance >= tol {
        Some("invariance of W under T1")
    } else if orthogonality >= tol {
        Some("orthogonality of T2-orbits")
    } else {
        None
    };
    if let Some(f) = failure {
        return Ok(LemmaOtReport {
            power_cap,
            hypotheses,
            hypothesis_failure: Some(f.to_string()),
            identity_i: None,
            identity_ii_full: None,
            identity_ii_wandering: None,
            identity_iii: None,
            verdict: false,
        });
    }

    let h = identity(dim);
    let sum_w = p2.sum(&w, power_cap);
    let core_h = p2.meet(&h, power_cap, tol);

    let lhs_i = p1.apply(&hstack(dim, &[&sum_w, &core_h]));
    let t1_w_orbit: Vec<CMat> = w_orbit.iter().map(|x| p1.apply(x)).collect();
    let t1_h_orbit: Vec<CMat> = full_orbit[..=power_cap]
        .iter()
        .map(|x| p1.apply(x))
        .collect();
    let mut rhs_blocks: Vec<&CMat> = t1_w_orbit.iter().collect();
    let meet_t1_h = intersect_all(&t1_h_orbit, tol);
    rhs_blocks.push(&meet_t1_h);
    let rhs_i = orth(&hstack(dim, &rhs_blocks), p1.thr);
    let identity_i = gap(&lhs_i, &rhs_i);

    let second = |r: &CMat| {
        let lhs = p1.apply(&p2.meet(r, power_cap, tol));
        let images: Vec<CMat> = p2.orbit(r, power_cap).iter().map(|x| p1.apply(x)).collect();
        gap(&lhs, &intersect_all(&images, tol))
    };
    let identity_ii_full = second(&h);
    let identity_ii_wandering = second(&w);

    let lhs_iii = p1.meet(&sum_w, power_cap, tol);
    let rhs_iii = p2.sum(&p1.meet(&w, power_cap, tol), power_cap);
    let identity_iii = gap(&lhs_iii, &rhs_iii);

    let verdict = [
        identity_i,
        identity_ii_full,
        identity_ii_wandering,
        identity_iii,
    ]
    .iter()
    .all(|&g| g < tol.sqrt());
    Ok(LemmaOtReport {
        power_cap,
        hypotheses,
        hypothesis_failure: None,
        identity_i: Some(identity_i),
        identity_ii_full: Some(identity_ii_full),
        identity_ii_wandering: Some(identity_ii_wandering),
        identity_iii: Some(identity_iii),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blaschke::BlaschkeProduct;
    use crate::hardy::{multiplication_matrix, TruncatedHardySpace};
    use crate::linalg::{c64, CVec};

    fn shift(d: usize) -> OperatorMatrix {
        let space = TruncatedHardySpace::one_variable(d - 1);
        multiplication_matrix(&space, &BlaschkeProduct::z(), 1)
            .unwrap()
            .to_operator()
    }

    fn diag_unitary(phases: &[f64], scale: f64) -> OperatorMatrix {
        let d = CVec::from_iterator(
            phases.len(),
            phases.iter().map(|&p| c64(0.0, p).exp() * scale),
        );
        OperatorMatrix::new(CMat::from_diagonal(&d)).unwrap()
    }

    #[test]
    fn shift_layers_are_monomials() {
        let wd = wold_decompose(&shift(13), 12, 1e-9).unwrap();
        assert_eq!(wd.layer_dims, vec![1; 13]);
        for (m, l) in wd.layers.iter().enumerate() {
            assert!((l[(m, 0)].norm() - 1.0).abs() < 1e-14);
        }
        assert_eq!(wd.invertible_part.ncols(), 0);
        assert_eq!(wd.shift_tail.ncols(), 0);
        assert!(wd.residuals.completeness < 1e-12);
        assert!(wd.passes(1e-9));
    }

    #[test]
    fn short_layering_leaves_a_tail() {
        let wd = wold_decompose(&shift(20), 5, 1e-9).unwrap();
        assert_eq!(wd.layers.len(), 6);
        assert_eq!(wd.shift_tail.ncols(), 14);
        assert!(wd.residuals.completeness < 1e-12);
    }

    #[test]
    fn scaled_unitary_is_all_invertible() {
        let t = diag_unitary(&[0.1, 0.7, 2.0, 3.0, -1.0, 0.4], 0.9);
        let wd = wold_decompose(&t, 6, 1e-9).unwrap();
        assert_eq!(wd.wandering_dim(), 0);
        assert_eq!(wd.invertible_part.ncols(), 6);
        let r = wd.invertible_restriction.unwrap();
        assert_eq!(r.kind, RestrictionKind::Invertible);
        assert!(!r.unitary);
    }

    #[test]
    fn uncertified_operator_is_rejected() {
        let t = OperatorMatrix::new(identity(3) * c64(2.0, 0.0)).unwrap();
        assert!(matches!(
            wold_decompose(&t, 3, 1e-9),
            Err(Error::Precondition(_))
        ));
        let opts = WoldOptions {
            assume_near_isometry: true,
            ..WoldOptions::new(3, 1e-9)
        };
        assert!(wold_decompose_with(&t, &opts).is_ok());
    }

    #[test]
    fn classification_examples() {
        let s = shift(10);
        let r = classify_restriction(&s, &identity(10), 1e-9).unwrap();
        assert_eq!(r.kind, RestrictionKind::Shift);
        let u = diag_unitary(&[0.3, 1.0, 2.0], 1.0);
        let r = classify_restriction(&u, &identity(3), 1e-9).unwrap();
        assert_eq!(r.kind, RestrictionKind::Invertible);
        assert!(r.unitary);
        let q = orth(
            &CMat::from_fn(10, 2, |i, j| c64(((i * 7 + j * 3) % 5) as f64 - 2.0, 0.0)),
            1e-12,
        );
        assert!(matches!(
            classify_restriction(&s, &q, 1e-9),
            Err(Error::NotInvariant { .. })
        ));
    }

    #[test]
    fn bidisc_summands() {
        let space = TruncatedHardySpace::new(vec![4, 4]).unwrap();
        let z = BlaschkeProduct::z();
        let ts: Vec<OperatorMatrix> = (1..=2)
            .map(|v| multiplication_matrix(&space, &z, v).unwrap().to_operator())
            .collect();
        let mw = multivariable_wold(&ts, 2, None, 1e-9).unwrap();
        assert_eq!(mw.summands.len(), 4);
        assert_eq!(mw.summand(&[1, 2]).unwrap().dim, 25);
        for s in &mw.summands[..3] {
            assert_eq!(s.dim, 0);
        }
        assert!(mw.residuals.completeness < 1e-12);
        let full = mw.summand(&[1, 2]).unwrap();
        for c in &full.classification {
            assert_eq!(c.as_ref().unwrap().kind, RestrictionKind::Shift);
        }
    }

    #[test]
    fn unitary_pair_is_all_core() {
        let u1 = diag_unitary(&[0.1, 0.2, 0.3, 0.4], 0.9);
        let u2 = diag_unitary(&[1.1, -0.2, 2.3, 0.5], 0.9);
        let mw = multivariable_wold(&[u1, u2], 2, None, 1e-9).unwrap();
        assert_eq!(mw.summand(&[]).unwrap().dim, 4);
        assert_eq!(mw.summands.iter().map(|s| s.dim).sum::<usize>(), 4);
        assert!(multivariable_wold(&mw_pair(), 3, None, 1e-9).is_err());
    }

    fn mw_pair() -> Vec<OperatorMatrix> {
        vec![diag_unitary(&[0.1], 1.0), diag_unitary(&[0.2], 1.0)]
    }

    #[test]
    fn lemma_identities_on_bidisc() {
        let space = TruncatedHardySpace::new(vec![5, 5]).unwrap();
        let z = BlaschkeProduct::z();
        let t1 = multiplication_matrix(&space, &z, 1).unwrap().to_operator();
        let t2 = multiplication_matrix(&space, &z, 2).unwrap().to_operator();
        // W = ker T₂*: every power of z₁ times the constant in z₂
        let cols: Vec<CVec> = (0..=5)
            .map(|k| {
                let mut v = CVec::zeros(36);
                v[space.index_of(&[k, 0]).unwrap()] = c64(1.0, 0.0);
                v
            })
            .collect();
        let w = crate::linalg::from_columns(36, &cols);
        let r = lemma_ot_check(&t1, &t2, &w, 7, 1e-9).unwrap();
        assert!(r.hypothesis_failure.is_none(), "{r:?}");
        assert!(r.verdict, "{r:?}");

        let r0 = lemma_ot_check(&t1, &t2, &empty_basis(36), 7, 1e-9).unwrap();
        assert!(r0.verdict);
        let id = OperatorMatrix::new(identity(36)).unwrap();
        let r1 = lemma_ot_check(&id, &t2, &w, 7, 1e-9).unwrap();
        assert!(r1.identity_ii_full.unwrap() < 1e-12);
    }

    #[test]
    fn lemma_reports_failed_hypothesis() {
        let space = TruncatedHardySpace::new(vec![3, 3]).unwrap();
        let z = BlaschkeProduct::z();
        let t1 = multiplication_matrix(&space, &z, 1).unwrap().to_operator();
        let t2 = multiplication_matrix(&space, &z, 2).unwrap().to_operator();
        // constants in z₁ times everything in z₂: not invariant under T₁
        let cols: Vec<CVec> = (0..=3)
            .map(|k| {
                let mut v = CVec::zeros(16);
                v[space.index_of(&[0, k]).unwrap()] = c64(1.0, 0.0);
                v
            })
            .collect();
        let w = crate::linalg::from_columns(16, &cols);
        let r = lemma_ot_check(&t1, &t2, &w, 5, 1e-9).unwrap();
        assert_eq!(
            r.hypothesis_failure.as_deref(),
            Some("invariance of W under T1")
        );
        assert!(!r.verdict);
    }
}
