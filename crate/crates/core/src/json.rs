//! Wire helpers: complex numbers travel as `[re, im]` pairs and dense
//! matrices as row-major arrays of such pairs.

use crate::linalg::{CMat, CVec};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Pair = [f64; 2];

pub fn to_pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

pub fn from_pair(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub fn vec_to_pairs(v: &CVec) -> Vec<Pair> {
    v.iter().copied().map(to_pair).collect()
}

pub fn pairs_to_vec(p: &[Pair]) -> CVec {
    CVec::from_iterator(p.len(), p.iter().copied().map(from_pair))
}

pub fn mat_to_rows(m: &CMat) -> Vec<Vec<Pair>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| to_pair(m[(i, j)])).collect())
        .collect()
}

/// Columns of `m`, each as a list of pairs.
pub fn mat_to_columns(m: &CMat) -> Vec<Vec<Pair>> {
    m.column_iter()
        .map(|c| c.iter().copied().map(to_pair).collect())
        .collect()
}

pub fn rows_to_mat(rows: &[Vec<Pair>]) -> Result<CMat, String> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != ncols) {
        return Err(format!("row {i} has {} entries, expected {ncols}", r.len()));
    }
    Ok(CMat::from_fn(nrows, ncols, |i, j| from_pair(rows[i][j])))
}

pub fn columns_to_mat(dim: usize, cols: &[Vec<Pair>]) -> Result<CMat, String> {
    if let Some((i, c)) = cols.iter().enumerate().find(|(_, c)| c.len() != dim) {
        return Err(format!(
            "column {i} has {} entries, expected {dim}",
            c.len()
        ));
    }
    Ok(CMat::from_fn(dim, cols.len(), |i, j| from_pair(cols[j][i])))
}

/// Serde adapter for a dense complex matrix field.
pub mod dense {
    use super::*;

    pub fn serialize<S: Serializer>(m: &CMat, s: S) -> Result<S::Ok, S::Error> {
        mat_to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMat, D::Error> {
        let rows = Vec::<Vec<Pair>>::deserialize(d)?;
        rows_to_mat(&rows).map_err(serde::de::Error::custom)
    }
}

/// Parse JSON, reporting the path of the offending field on failure.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, String> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        format!("field `{path}`: {}", e.inner())
    })
}

/// Serializes an orthonormal basis as a list of column vectors.
pub mod basis {
    use super::*;

    pub fn serialize<S: Serializer>(m: &CMat, s: S) -> Result<S::Ok, S::Error> {
        mat_to_columns(m).serialize(s)
    }
}

/// Serializes a vector as a list of pairs.
pub mod vector {
    use super::*;

    pub fn serialize<S: Serializer>(v: &CVec, s: S) -> Result<S::Ok, S::Error> {
        vec_to_pairs(v).serialize(s)
    }
}

/// Serializes a list of bases, each as a list of column vectors.
pub mod bases {
    use super::*;

    pub fn serialize<S: Serializer>(ms: &[CMat], s: S) -> Result<S::Ok, S::Error> {
        ms.iter()
            .map(mat_to_columns)
            .collect::<Vec<_>>()
            .serialize(s)
    }
}
