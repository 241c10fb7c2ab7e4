//! Coefficient model of H²(𝔻ⁿ) truncated at per-variable degree caps.
//!
//! Multi-indices `(k₁,…,kₙ)` with `kᵢ ≤ Nᵢ` are stored in lexicographic
//! order, the last variable varying fastest.

use crate::blaschke::{BlaschkeProduct, TmIndex};
use crate::error::{Error, Result};
use crate::json::{self, Pair};
use crate::linalg::{lstsq, singular_values, CMat, CVec};
use crate::operator::OperatorMatrix;
use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

/// Tail energy below which a truncated column counts as exact.
pub const EXACT_TAIL_SQ: f64 = 1e-28;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpaceJson")]
pub struct TruncatedHardySpace {
    n: usize,
    caps: Vec<usize>,
}

#[derive(Deserialize)]
struct SpaceJson {
    n: usize,
    caps: Vec<usize>,
}

impl TryFrom<SpaceJson> for TruncatedHardySpace {
    type Error = Error;

    fn try_from(raw: SpaceJson) -> Result<Self> {
        if raw.n != raw.caps.len() {
            return Err(Error::DimensionMismatch {
                expected: raw.n,
                found: raw.caps.len(),
            });
        }
        Self::new(raw.caps)
    }
}

impl TruncatedHardySpace {
    pub fn new(caps: Vec<usize>) -> Result<Self> {
        if caps.is_empty() {
            return Err(Error::InvalidArgument(
                "a space needs at least one variable".into(),
            ));
        }
        Ok(Self {
            n: caps.len(),
            caps,
        })
    }

    pub fn one_variable(cap: usize) -> Self {
        Self {
            n: 1,
            caps: vec![cap],
        }
    }

    pub fn variables(&self) -> usize {
        self.n
    }

    pub fn caps(&self) -> &[usize] {
        &self.caps
    }

    pub fn dim(&self) -> usize {
        self.caps.iter().map(|c| c + 1).product()
    }

    /// Flat-index step for a unit increase of variable `i` (0-based).
    pub fn stride(&self, i: usize) -> usize {
        self.caps[i + 1..].iter().map(|c| c + 1).product()
    }

    pub fn index_of(&self, k: &[usize]) -> Result<usize> {
        if k.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: k.len(),
            });
        }
        let mut flat = 0;
        for (i, (&ki, &cap)) in k.iter().zip(&self.caps).enumerate() {
            if ki > cap {
                return Err(Error::IndexOutOfRange {
                    index: ki,
                    limit: cap,
                });
            }
            flat += ki * self.stride(i);
        }
        Ok(flat)
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut k = vec![0; self.n];
        for i in (0..self.n).rev() {
            k[i] = flat % (self.caps[i] + 1);
            flat /= self.caps[i] + 1;
        }
        k
    }

    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.dim()).map(|f| self.multi_index(f))
    }
}

/// Coefficients of a function in a truncated space.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefVector {
    space: TruncatedHardySpace,
    coeffs: CVec,
}

impl Serialize for CoefVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for z in self.coeffs.iter() {
            seq.serialize_element(&json::to_pair(*z))?;
        }
        seq.end()
    }
}

impl CoefVector {
    pub fn zeros(space: TruncatedHardySpace) -> Self {
        let dim = space.dim();
        Self {
            space,
            coeffs: CVec::zeros(dim),
        }
    }

    pub fn new(space: TruncatedHardySpace, coeffs: CVec) -> Result<Self> {
        if coeffs.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: coeffs.len(),
            });
        }
        Ok(Self { space, coeffs })
    }

    pub(crate) fn from_parts(space: TruncatedHardySpace, coeffs: CVec) -> Self {
        debug_assert_eq!(coeffs.len(), space.dim());
        Self { space, coeffs }
    }

    pub fn from_pairs(space: TruncatedHardySpace, pairs: &[Pair]) -> Result<Self> {
        Self::new(space, json::pairs_to_vec(pairs))
    }

    pub fn monomial(space: TruncatedHardySpace, k: &[usize]) -> Result<Self> {
        let idx = space.index_of(k)?;
        let mut v = Self::zeros(space);
        v.coeffs[idx] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn space(&self) -> &TruncatedHardySpace {
        &self.space
    }

    pub fn coeffs(&self) -> &CVec {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> CVec {
        self.coeffs
    }

    pub fn get(&self, k: &[usize]) -> Result<Complex64> {
        Ok(self.coeffs[self.space.index_of(k)?])
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    /// Pointwise value at `z ∈ 𝔻ⁿ` of the truncated polynomial.
    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.space.n {
            return Err(Error::DimensionMismatch {
                expected: self.space.n,
                found: z.len(),
            });
        }
        Ok(self
            .space
            .indices()
            .zip(self.coeffs.iter())
            .map(|(k, c)| {
                let mono: Complex64 = k.iter().zip(z).map(|(&e, &zi)| zi.powu(e as u32)).product();
                c * mono
            })
            .sum())
    }
}

/// `Σ f_k · conj(g_k)`.
pub fn inner_product(f: &CoefVector, g: &CoefVector) -> Result<Complex64> {
    if f.space != g.space {
        return Err(Error::SpaceMismatch);
    }
    Ok(f.coeffs
        .iter()
        .zip(g.coeffs.iter())
        .map(|(a, b)| a * b.conj())
        .sum())
}

/// Matrix of `f ↦ Bᵢ(zᵢ)·f` on a truncated space.
#[derive(Clone, Debug, Serialize)]
pub struct MultiplicationOperator {
    variable: usize,
    symbol: BlaschkeProduct,
    #[serde(with = "json::dense")]
    matrix: CMat,
    exact_window: Vec<usize>,
    #[serde(skip)]
    symbol_length: usize,
}

impl MultiplicationOperator {
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// 1-based variable index.
    pub fn variable(&self) -> usize {
        self.variable
    }

    pub fn symbol(&self) -> &BlaschkeProduct {
        &self.symbol
    }

    pub fn exact_window(&self) -> &[usize] {
        &self.exact_window
    }

    /// Degree beyond which the symbol's Taylor tail carries less than
    /// [`EXACT_TAIL_SQ`] energy. Equals the degree for `B = zʳ`.
    pub fn symbol_length(&self) -> usize {
        self.symbol_length
    }

    pub fn to_operator(&self) -> OperatorMatrix {
        OperatorMatrix::with_window(self.matrix.clone(), self.exact_window.clone())
            .expect("window indices are in range")
    }
}

/// Builds `T_{B}` acting on variable `variable` (1-based).
///
/// The exact window consists of the monomials `μ` with `μ_v + L ≤ N_v`, where
/// `L` is the symbol length: columns there carry the full product `B·μ` up to
/// a tail below [`EXACT_TAIL_SQ`]. For `B = zʳ` this is `μ_v ≤ N_v − r`.
pub fn multiplication_matrix(
    space: &TruncatedHardySpace,
    b: &BlaschkeProduct,
    variable: usize,
) -> Result<MultiplicationOperator> {
    if variable == 0 || variable > space.n {
        return Err(Error::IndexOutOfRange {
            index: variable,
            limit: space.n,
        });
    }
    let v = variable - 1;
    let cap = space.caps[v];
    let r = b.degree();
    if r > cap {
        return Err(Error::InsufficientCap { cap, needed: r });
    }
    let (coeffs, length) = symbol_series(b, cap);
    let stride = space.stride(v);
    let dim = space.dim();
    let mut matrix = CMat::zeros(dim, dim);
    let mut exact_window = Vec::new();
    for col in 0..dim {
        let kv = (col / stride) % (cap + 1);
        for (n, &bn) in coeffs.iter().enumerate().take(cap - kv + 1) {
            matrix[(col + n * stride, col)] = bn;
        }
        if kv + length <= cap {
            exact_window.push(col);
        }
    }
    Ok(MultiplicationOperator {
        variable,
        symbol: b.clone(),
        matrix,
        exact_window,
        symbol_length: length,
    })
}

/// Taylor coefficients of `b` through `cap` and the effective symbol length.
fn symbol_series(b: &BlaschkeProduct, cap: usize) -> (Vec<Complex64>, usize) {
    let r = b.degree();
    if b.is_monomial() {
        return (b.coefficients(cap), r);
    }
    let ext = cap.max(r) + (120.0 / (1.0 - b.max_modulus())).ceil() as usize;
    let full = b.coefficients(ext);
    // suffix sums, accumulated from the small end
    let mut tails = vec![0.0; full.len()];
    for n in (0..full.len() - 1).rev() {
        tails[n] = tails[n + 1] + full[n + 1].norm_sqr();
    }
    let length = (r..full.len())
        .find(|&n| tails[n] <= EXACT_TAIL_SQ)
        .unwrap_or(ext);
    (full[..=cap].to_vec(), length)
}

/// Dense outer product of one-variable coefficient lists in flat order.
fn tensor(space: &TruncatedHardySpace, factors: &[Vec<Complex64>]) -> CVec {
    CVec::from_iterator(
        space.dim(),
        space.indices().map(|k| {
            k.iter()
                .zip(factors)
                .map(|(&ki, f)| f[ki])
                .product::<Complex64>()
        }),
    )
}

fn check_tuple(bs: &[BlaschkeProduct], space: &TruncatedHardySpace) -> Result<()> {
    if bs.len() != space.n {
        return Err(Error::DimensionMismatch {
            expected: space.n,
            found: bs.len(),
        });
    }
    Ok(())
}

/// `e_{jm}(z) = ∏ᵢ e^i_{jᵢmᵢ}(zᵢ)` in flat coefficient order.
pub fn tensor_tm_basis_coeffs(
    bs: &[BlaschkeProduct],
    j: &[usize],
    m: &[usize],
    space: &TruncatedHardySpace,
) -> Result<CoefVector> {
    check_tuple(bs, space)?;
    if j.len() != space.n || m.len() != space.n {
        return Err(Error::DimensionMismatch {
            expected: space.n,
            found: j.len().min(m.len()),
        });
    }
    let factors = bs
        .iter()
        .zip(j.iter().zip(m))
        .zip(&space.caps)
        .map(|((b, (&ji, &mi)), &cap)| {
            b.tm_basis_coeffs(TmIndex::new(ji, mi), cap)
                .map(|v| v.coeffs.iter().copied().collect())
        })
        .collect::<Result<Vec<Vec<Complex64>>>>()?;
    Ok(CoefVector::from_parts(
        space.clone(),
        tensor(space, &factors),
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct BBasisElement {
    pub m: Vec<usize>,
    pub vector: CoefVector,
}

/// Products `B₁^{m₁}⋯Bₙ^{mₙ}` that fit the caps exactly: `mᵢ·rᵢ ≤ Nᵢ` and the
/// power's Taylor tail beyond `Nᵢ` is negligible. For `Bᵢ = z^{rᵢ}` this is
/// every `mᵢ ≤ ⌊Nᵢ/rᵢ⌋`.
pub fn hardy_b_basis(
    bs: &[BlaschkeProduct],
    space: &TruncatedHardySpace,
) -> Result<Vec<BBasisElement>> {
    check_tuple(bs, space)?;
    let mut per_var: Vec<Vec<Vec<Complex64>>> = Vec::with_capacity(space.n);
    for (b, &cap) in bs.iter().zip(&space.caps) {
        let r = b.degree();
        if r > cap {
            return Err(Error::InsufficientCap { cap, needed: r });
        }
        let mut powers = Vec::new();
        for m in 0..=cap / r {
            let full = if b.is_monomial() {
                b.power_coefficients(m, cap)
            } else {
                let ext = cap + (120.0 / (1.0 - b.max_modulus())).ceil() as usize;
                let full = b.power_coefficients(m, ext);
                let tail: f64 = full[cap + 1..].iter().map(|c| c.norm_sqr()).sum();
                if tail > 1e-22 {
                    break;
                }
                full[..=cap].to_vec()
            };
            powers.push(full);
        }
        per_var.push(powers);
    }
    let grid = TruncatedHardySpace::new(per_var.iter().map(|p| p.len() - 1).collect())?;
    Ok(grid
        .indices()
        .map(|m| {
            let factors: Vec<Vec<Complex64>> = m
                .iter()
                .zip(&per_var)
                .map(|(&mi, p)| p[mi].clone())
                .collect();
            BBasisElement {
                vector: CoefVector::from_parts(space.clone(), tensor(space, &factors)),
                m,
            }
        })
        .collect())
}

/// Component `f_j ∈ H²(B₁,…,Bₙ)` attached to `e_{j₁0}⋯e_{jₙ0}`, in
/// `B`-coordinates: coefficient `m` multiplies `B₁^{m₁}⋯Bₙ^{mₙ}`.
#[derive(Clone, Debug, Serialize)]
pub struct St7Component {
    pub j: Vec<usize>,
    pub coords: CoefVector,
}

impl St7Component {
    /// Coefficients of `f_j` itself as a function, truncated to `space`.
    pub fn function(
        &self,
        bs: &[BlaschkeProduct],
        space: &TruncatedHardySpace,
    ) -> Result<CoefVector> {
        check_tuple(bs, space)?;
        let mut out = CVec::zeros(space.dim());
        for (m, c) in self.coords.space.indices().zip(self.coords.coeffs.iter()) {
            if c.norm() == 0.0 {
                continue;
            }
            let factors: Vec<Vec<Complex64>> = bs
                .iter()
                .zip(&m)
                .zip(&space.caps)
                .map(|((b, &mi), &cap)| b.power_coefficients(mi, cap))
                .collect();
            out += tensor(space, &factors) * *c;
        }
        Ok(CoefVector::from_parts(space.clone(), out))
    }

    /// `B`-Fourier coefficient `⟨f, e_{jm}⟩` for this component's `j`.
    pub fn coefficient(&self, m: &[usize]) -> Result<Complex64> {
        self.coords.get(m)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct St7Decomposition {
    pub components: Vec<St7Component>,
    pub residual: f64,
    pub relative_residual: f64,
}

/// Splits `f` along `H²(𝔻ⁿ) = ⊕_j e_{j₁0}⋯e_{jₙ0} · H²(B₁,…,Bₙ)`.
///
/// Solves the minimum-norm least-squares problem against the truncated
/// tensor frame `{e_{jm}}`. Because the excluded frame members vanish to
/// order above the caps, the frame rows are orthonormal and the minimum-norm
/// solution equals the `B`-Fourier coefficients.
pub fn st7_decompose(f: &CoefVector, bs: &[BlaschkeProduct]) -> Result<St7Decomposition> {
    let space = &f.space;
    check_tuple(bs, space)?;
    let mut per_var: Vec<Vec<(TmIndex, Vec<Complex64>)>> = Vec::with_capacity(space.n);
    for (b, &cap) in bs.iter().zip(&space.caps) {
        if !b.is_normalized() {
            return Err(Error::NotNormalized(format!("{}", b.zeros()[0])));
        }
        let mut cols = Vec::new();
        for j in 0..b.degree() {
            for m in 0..=cap {
                let idx = TmIndex::new(j, m);
                let s = b.tm_series(idx, cap);
                if s.iter().any(|c| c.norm() > 0.0) {
                    cols.push((idx, s));
                }
            }
        }
        per_var.push(cols);
    }
    let counts: Vec<usize> = per_var.iter().map(Vec::len).collect();
    let total: usize = counts.iter().product();
    let dim = space.dim();
    let mut frame = CMat::zeros(dim, total);
    let mut labels = Vec::with_capacity(total);
    let mut pick = vec![0usize; space.n];
    for col in 0..total {
        let mut rest = col;
        for i in (0..space.n).rev() {
            pick[i] = rest % counts[i];
            rest /= counts[i];
        }
        let factors: Vec<Vec<Complex64>> = pick
            .iter()
            .enumerate()
            .map(|(i, &p)| per_var[i][p].1.clone())
            .collect();
        frame.set_column(col, &tensor(space, &factors));
        labels.push(
            pick.iter()
                .enumerate()
                .map(|(i, &p)| per_var[i][p].0)
                .collect::<Vec<_>>(),
        );
    }

    let sv = singular_values(&frame);
    let smin = sv.last().copied().unwrap_or(0.0);
    if sv.len() < dim || smin < 0.5 {
        return Err(Error::IllConditioned(format!(
            "frame does not span the window (smallest singular value {smin:e})"
        )));
    }
    let rhs = CMat::from_column_slice(dim, 1, f.coeffs.as_slice());
    let sol = lstsq(&frame, &rhs, 1e-12);
    let recon = &frame * &sol;
    let residual = (&rhs - &recon).norm();
    let fnorm = f.norm();
    let relative_residual = if fnorm > 0.0 {
        residual / fnorm
    } else {
        residual
    };

    let m_space = TruncatedHardySpace::new(space.caps.clone())?;
    let j_space = TruncatedHardySpace::new(bs.iter().map(|b| b.degree() - 1).collect())?;
    let mut components: Vec<St7Component> = j_space
        .indices()
        .map(|j| St7Component {
            j,
            coords: CoefVector::zeros(m_space.clone()),
        })
        .collect();
    for (label, c) in labels.iter().zip(sol.column(0).iter()) {
        let j: Vec<usize> = label.iter().map(|t| t.j).collect();
        let m: Vec<usize> = label.iter().map(|t| t.m).collect();
        let comp = &mut components[j_space.index_of(&j)?];
        let at = m_space.index_of(&m)?;
        comp.coords.coeffs[at] = *c;
    }
    Ok(St7Decomposition {
        components,
        residual,
        relative_residual,
    })
}
