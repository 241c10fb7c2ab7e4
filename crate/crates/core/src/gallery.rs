//! Two explicit operators separating near-isometries from operators that
//! satisfy Shimorin's conditions.

use crate::error::{Error, Result};
use crate::json::{self, Pair};
use crate::linalg::{c64, CMat, CVec};
use crate::operator::{
    cond_a_value, near_isometry_certificate, shimorin_check, NearIsometryCertificate,
    OperatorMatrix, ShimorinReport, DEFAULT_K_MAX,
};
use num_complex::Complex64;
use serde::Serialize;

/// `βₙ = 2^{−n/2}` for even `n`, `2^{−(n−1)/2}` for odd `n`.
pub fn weight_sequence_beta(n: usize) -> f64 {
    let e = if n % 2 == 0 { n } else { n - 1 };
    0.5f64.powf(e as f64 / 2.0)
}

/// `wₙ = βₙ₊₁/βₙ`, alternating 1, ½, 1, ½, …
pub fn shift_weights(count: usize) -> Vec<f64> {
    (0..count)
        .map(|n| weight_sequence_beta(n + 1) / weight_sequence_beta(n))
        .collect()
}

/// Multiplication by `z` on the weighted Hardy space, truncated to `d`
/// coordinates: `eₙ ↦ wₙ eₙ₊₁`. The last coordinate is outside the window.
pub fn weighted_shift(d: usize) -> Result<OperatorMatrix> {
    if d < 4 {
        return Err(Error::InvalidArgument(format!(
            "weighted shift needs d >= 4, got {d}"
        )));
    }
    let mut m = CMat::zeros(d, d);
    for (n, w) in shift_weights(d - 1).into_iter().enumerate() {
        m[(n + 1, n)] = c64(w, 0.0);
    }
    OperatorMatrix::with_window(m, (0..d - 1).collect())
}

/// Finite piece of the lattice `{(i, j) : i ≤ j}` with `|i|, |j| ≤ N`.
#[derive(Clone, Debug)]
pub struct LatticeModel {
    pub n: i64,
    pub sites: Vec<(i64, i64)>,
    pub operator: OperatorMatrix,
}

impl LatticeModel {
    pub fn index_of(&self, i: i64, j: i64) -> Option<usize> {
        self.sites.binary_search(&(i, j)).ok()
    }

    /// Sparse vector from `(i, j, coefficient)` triples.
    pub fn vector(&self, entries: &[(i64, i64, f64)]) -> CVec {
        let mut v = CVec::zeros(self.sites.len());
        for &(i, j, c) in entries {
            let k = self.index_of(i, j).expect("site inside the lattice piece");
            v[k] += c64(c, 0.0);
        }
        v
    }

    /// Nonzero entries of `v` labelled by site, in site order.
    pub fn entries(&self, v: &CVec) -> Vec<SiteEntry> {
        self.sites
            .iter()
            .zip(v.iter())
            .filter(|(_, c)| c.norm() > 1e-14)
            .map(|(&(i, j), &c)| SiteEntry {
                i,
                j,
                value: json::to_pair(c),
            })
            .collect()
    }

    pub fn window_fraction(&self) -> f64 {
        self.operator.window_dim() as f64 / self.sites.len() as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SiteEntry {
    pub i: i64,
    pub j: i64,
    pub value: Pair,
}

/// Measure weight `aₙ`: 1 for `n ≥ 1`, 2 otherwise.
pub fn measure_weight(n: i64) -> f64 {
    if n >= 1 {
        1.0
    } else {
        2.0
    }
}

/// Composition operator on the lattice model:
/// `e_{i,j} ↦ e_{i,j+1}` for `i < j`, `e_{i,i} ↦ e_{i+1,i+1} + √aᵢ e_{i,i+1}`.
/// The window keeps sites with `j ≤ N − 2`, so `T` and `T²` stay inside.
pub fn lattice_composition_operator(n: i64) -> Result<LatticeModel> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "lattice model needs N >= 4, got {n}"
        )));
    }
    let sites: Vec<(i64, i64)> = (-n..=n)
        .flat_map(|i| (i..=n).map(move |j| (i, j)))
        .collect();
    let d = sites.len();
    let idx = |i: i64, j: i64| sites.binary_search(&(i, j)).ok();
    let mut m = CMat::zeros(d, d);
    let mut window = Vec::new();
    for (col, &(i, j)) in sites.iter().enumerate() {
        if i < j {
            if let Some(r) = idx(i, j + 1) {
                m[(r, col)] = c64(1.0, 0.0);
            }
        } else {
            if let Some(r) = idx(i + 1, i + 1) {
                m[(r, col)] = c64(1.0, 0.0);
            }
            if let Some(r) = idx(i, i + 1) {
                m[(r, col)] = c64(measure_weight(i).sqrt(), 0.0);
            }
        }
        if j <= n - 2 {
            window.push(col);
        }
    }
    let operator = OperatorMatrix::with_window(m, window)?;
    Ok(LatticeModel { n, sites, operator })
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightedShiftSection {
    pub dimension: usize,
    pub certificate: NearIsometryCertificate,
    pub shimorin: ShimorinReport,
    /// Value of the first form at the second basis vector.
    pub cond_a_at_e1: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeWitness {
    pub f: Vec<SiteEntry>,
    pub g: Vec<SiteEntry>,
    pub tf: Vec<SiteEntry>,
    pub t2g: Vec<SiteEntry>,
    pub inner_tf_t2g: Pair,
    /// `‖T* f‖`.
    pub kernel_residual: f64,
    pub tf_matches: bool,
    pub t2g_matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeSection {
    pub n: i64,
    pub sites: usize,
    pub window_fraction: f64,
    pub certificate: NearIsometryCertificate,
    pub shimorin: ShimorinReport,
    pub witness: LatticeWitness,
}

#[derive(Clone, Debug, Serialize)]
pub struct Section2Report {
    pub tol: f64,
    pub weighted_shift: WeightedShiftSection,
    pub lattice: LatticeSection,
    /// Each operator satisfies exactly one of the two properties.
    pub separation_holds: bool,
}

pub fn section2_report(n: i64, d: usize, tol: f64) -> Result<Section2Report> {
    let ws = weighted_shift(d)?;
    let mut e1 = CVec::zeros(d);
    e1[1] = Complex64::new(1.0, 0.0);
    let weighted = WeightedShiftSection {
        dimension: d,
        certificate: near_isometry_certificate(&ws, DEFAULT_K_MAX, tol)?,
        shimorin: shimorin_check(&ws, tol),
        cond_a_at_e1: cond_a_value(&ws, &e1),
    };

    let lat = lattice_composition_operator(n)?;
    let t = lat.operator.matrix();
    let f = lat.vector(&[(1, 2, 1.0), (2, 2, -1.0)]);
    let g = lat.vector(&[(1, 1, 1.0)]);
    let tf = t * &f;
    let t2g = t * (t * &g);
    let tf_expected = lat.vector(&[(1, 3, 1.0), (3, 3, -1.0), (2, 3, -1.0)]);
    let t2g_expected = lat.vector(&[(3, 3, 1.0), (2, 3, 1.0), (1, 3, 1.0)]);
    let inner = t2g.dotc(&tf);
    let witness = LatticeWitness {
        f: lat.entries(&f),
        g: lat.entries(&g),
        tf: lat.entries(&tf),
        t2g: lat.entries(&t2g),
        inner_tf_t2g: json::to_pair(inner),
        kernel_residual: (t.adjoint() * &f).norm(),
        tf_matches: tf == tf_expected,
        t2g_matches: t2g == t2g_expected,
    };
    let lattice = LatticeSection {
        n,
        sites: lat.sites.len(),
        window_fraction: lat.window_fraction(),
        certificate: near_isometry_certificate(&lat.operator, DEFAULT_K_MAX, tol)?,
        shimorin: shimorin_check(&lat.operator, tol),
        witness,
    };
    let separation_holds = weighted.certificate.verdict
        && !weighted.shimorin.cond_a.holds
        && !weighted.shimorin.cond_b.holds
        && lattice.shimorin.cond_a.holds
        && !lattice.certificate.verdict;
    Ok(Section2Report {
        tol,
        weighted_shift: weighted,
        lattice,
        separation_holds,
    })
}
