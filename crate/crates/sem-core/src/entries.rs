//! Free/fixed entry layouts for the structural matrices of a model.
//!
//! Every entry of a structural matrix is either a fixed numeric value or a
//! reference to a free parameter (a 0-based index into θ). In JSON, a fixed
//! entry is written as a plain number and a free entry as the string `"t<k>"`,
//! e.g. `0.5` or `"t11"`.

use std::fmt;

use nalgebra::DMatrix;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SemError};

/// One entry of a structural matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntrySpec {
    /// The entry is pinned to a constant value.
    Fixed(f64),
    /// The entry equals θ[index]; indices are 0-based.
    Free(usize),
}

impl EntrySpec {
    /// Value of the entry under a concrete parameter vector.
    ///
    /// The caller guarantees `theta.len()` covers every free index (validated
    /// at `ModelSpec` construction).
    #[inline]
    pub fn value(&self, theta: &[f64]) -> f64 {
        match *self {
            EntrySpec::Fixed(v) => v,
            EntrySpec::Free(k) => theta[k],
        }
    }

    /// Free-parameter index, if this entry is free.
    #[inline]
    pub fn free_index(&self) -> Option<usize> {
        match *self {
            EntrySpec::Fixed(_) => None,
            EntrySpec::Free(k) => Some(k),
        }
    }

    /// True when the entry is `Fixed` and equals `v` exactly.
    pub fn is_fixed_at(&self, v: f64) -> bool {
        matches!(*self, EntrySpec::Fixed(f) if f == v)
    }
}

impl Serialize for EntrySpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            EntrySpec::Fixed(v) => s.serialize_f64(v),
            EntrySpec::Free(k) => s.serialize_str(&format!("t{k}")),
        }
    }
}

struct EntryVisitor;

impl Visitor<'_> for EntryVisitor {
    type Value = EntrySpec;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a number (fixed entry) or a string \"t<k>\" (free entry)")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<EntrySpec, E> {
        Ok(EntrySpec::Fixed(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<EntrySpec, E> {
        Ok(EntrySpec::Fixed(v as f64))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<EntrySpec, E> {
        Ok(EntrySpec::Fixed(v as f64))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<EntrySpec, E> {
        let idx = v
            .strip_prefix('t')
            .and_then(|rest| rest.parse::<usize>().ok())
            .ok_or_else(|| E::custom(format!("free entry must look like \"t<k>\", got {v:?}")))?;
        Ok(EntrySpec::Free(idx))
    }
}

impl<'de> Deserialize<'de> for EntrySpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(EntryVisitor)
    }
}

/// Dense rectangular matrix of [`EntrySpec`] values, stored row-major.
///
/// JSON form: an array of rows, each row an array of entries. A matrix with
/// zero rows is written `[]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntryMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<EntrySpec>,
}

impl EntryMatrix {
    /// Build from explicit row-major data.
    ///
    /// A zero-row matrix normalizes to zero columns so that every empty
    /// matrix compares equal to the parse of its JSON form `[]`.
    pub fn new(nrows: usize, ncols: usize, data: Vec<EntrySpec>) -> Result<Self> {
        if data.len() != nrows * ncols {
            return Err(SemError::DimensionMismatch(format!(
                "entry matrix {nrows}x{ncols} needs {} entries, got {}",
                nrows * ncols,
                data.len()
            )));
        }
        let ncols = if nrows == 0 { 0 } else { ncols };
        Ok(Self { nrows, ncols, data })
    }

    /// Build from rows of entries; all rows must share one length.
    pub fn from_rows(rows: Vec<Vec<EntrySpec>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(SemError::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Self { nrows, ncols, data })
    }

    /// All-`Fixed(0.0)` matrix.
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        let ncols = if nrows == 0 { 0 } else { ncols };
        Self {
            nrows,
            ncols,
            data: vec![EntrySpec::Fixed(0.0); nrows * ncols],
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> EntrySpec {
        self.data[i * self.ncols + j]
    }

    /// Iterate over all entries (row-major).
    pub fn iter(&self) -> impl Iterator<Item = &EntrySpec> {
        self.data.iter()
    }

    /// Substitute a concrete parameter vector.
    pub fn materialize(&self, theta: &[f64]) -> DMatrix<f64> {
        DMatrix::from_fn(self.nrows, self.ncols, |i, j| self.get(i, j).value(theta))
    }

    /// Check the shape against an expectation; zero-row matrices may elide
    /// their column count (the JSON form `[]` carries none).
    pub fn check_shape(&self, name: &str, nrows: usize, ncols: usize) -> Result<()> {
        let ok = self.nrows == nrows && (self.ncols == ncols || self.nrows == 0);
        if ok {
            Ok(())
        } else {
            Err(SemError::DimensionMismatch(format!(
                "{name} must be {nrows}x{ncols}, got {}x{}",
                self.nrows, self.ncols
            )))
        }
    }
}

impl Serialize for EntryMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.nrows))?;
        for i in 0..self.nrows {
            let row: Vec<EntrySpec> = (0..self.ncols).map(|j| self.get(i, j)).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for EntryMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<EntrySpec>>::deserialize(d)?;
        EntryMatrix::from_rows(rows).map_err(de::Error::custom)
    }
}

/// Symmetric matrix of [`EntrySpec`] values storing only the lower triangle;
/// the upper triangle mirrors automatically, so an inconsistent (asymmetric)
/// placement cannot be represented.
///
/// JSON form: either a full square matrix whose upper triangle must mirror the
/// lower one, or ragged lower-triangle rows (`[[a],[b,c]]`). Serialization
/// emits the full square form.
#[derive(Debug, Clone, PartialEq)]
pub struct SymEntryMatrix {
    dim: usize,
    /// Lower triangle in vech order (columns of the lower triangle stacked).
    lower: Vec<EntrySpec>,
}

impl SymEntryMatrix {
    /// Number of stored (lower-triangle) entries for dimension `d`.
    fn tri_len(d: usize) -> usize {
        d * (d + 1) / 2
    }

    /// vech position of entry (i, j) with i ≥ j.
    #[inline]
    fn pos(&self, i: usize, j: usize) -> usize {
        debug_assert!(i >= j);
        j * self.dim - j * (j + 1) / 2 + i
    }

    /// Build from the lower triangle in vech order.
    pub fn from_lower(dim: usize, lower: Vec<EntrySpec>) -> Result<Self> {
        if lower.len() != Self::tri_len(dim) {
            return Err(SemError::DimensionMismatch(format!(
                "symmetric {dim}x{dim} entry matrix needs {} lower entries, got {}",
                Self::tri_len(dim),
                lower.len()
            )));
        }
        Ok(Self { dim, lower })
    }

    /// Diagonal matrix with the given diagonal entries (off-diagonal fixed 0).
    pub fn diagonal(diag: Vec<EntrySpec>) -> Self {
        let dim = diag.len();
        let mut lower = vec![EntrySpec::Fixed(0.0); Self::tri_len(dim)];
        let mut m = Self { dim, lower: Vec::new() };
        for (j, &e) in diag.iter().enumerate() {
            let p = m.pos(j, j);
            lower[p] = e;
        }
        m.lower = lower;
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at (i, j); mirrored for i < j.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> EntrySpec {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        self.lower[self.pos(i, j)]
    }

    /// Iterate over the stored lower-triangle entries.
    pub fn iter_lower(&self) -> impl Iterator<Item = &EntrySpec> {
        self.lower.iter()
    }

    /// Diagonal entries.
    pub fn diag_entries(&self) -> Vec<EntrySpec> {
        (0..self.dim).map(|j| self.get(j, j)).collect()
    }

    /// Substitute a concrete parameter vector; the result is exactly symmetric.
    pub fn materialize(&self, theta: &[f64]) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j).value(theta))
    }

    pub fn check_dim(&self, name: &str, dim: usize) -> Result<()> {
        if self.dim == dim {
            Ok(())
        } else {
            Err(SemError::DimensionMismatch(format!(
                "{name} must be {dim}x{dim}, got {}x{}",
                self.dim, self.dim
            )))
        }
    }

    fn from_json_rows(rows: Vec<Vec<EntrySpec>>) -> Result<Self> {
        let dim = rows.len();
        let square = rows.iter().all(|r| r.len() == dim) && dim > 0;
        let ragged = rows.iter().enumerate().all(|(i, r)| r.len() == i + 1);
        if dim == 0 {
            return Self::from_lower(0, Vec::new());
        }
        if !square && !ragged {
            return Err(SemError::InvalidSpec(
                "symmetric block must be a full square matrix or lower-triangle rows".into(),
            ));
        }
        let mut lower = vec![EntrySpec::Fixed(0.0); Self::tri_len(dim)];
        let mut m = Self { dim, lower: Vec::new() };
        for (i, row) in rows.iter().enumerate() {
            for j in 0..=i {
                let p = m.pos(i, j);
                lower[p] = row[j];
            }
        }
        if square {
            // Reject an inconsistent upper triangle instead of silently
            // mirroring over it.
            for (i, row) in rows.iter().enumerate() {
                for (j, &e) in row.iter().enumerate().skip(i + 1) {
                    if e != rows[j][i] {
                        return Err(SemError::InvalidSpec(format!(
                            "symmetric block entry ({i},{j}) does not mirror ({j},{i})"
                        )));
                    }
                }
            }
        }
        m.lower = lower;
        Ok(m)
    }
}

impl Serialize for SymEntryMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.dim))?;
        for i in 0..self.dim {
            let row: Vec<EntrySpec> = (0..self.dim).map(|j| self.get(i, j)).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for SymEntryMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct RowsVisitor;
        impl<'de> Visitor<'de> for RowsVisitor {
            type Value = Vec<Vec<EntrySpec>>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of rows (square or lower-triangular)")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Self::Value, A::Error> {
                let mut rows = Vec::new();
                while let Some(row) = seq.next_element::<Vec<EntrySpec>>()? {
                    rows.push(row);
                }
                Ok(rows)
            }
        }
        let rows = d.deserialize_seq(RowsVisitor)?;
        SymEntryMatrix::from_json_rows(rows).map_err(de::Error::custom)
    }
}
