//! Exact-valued sparse matrices with synchronized row-major and column-major
//! views. Zero entries are never stored; every mutation path drops them.

use num::rational::Ratio;

use crate::error::Error;
use crate::ring::{Coeff, Ring};

/// A sparse matrix over one of the coefficient rings. Both access orders are
/// kept in memory: `rows[i]` lists `(col, value)` sorted by column and
/// `cols[j]` lists `(row, value)` sorted by row, describing the same entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(usize, Coeff)>>,
    cols: Vec<Vec<(usize, Coeff)>>,
}

impl SparseMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
            cols: vec![Vec::new(); ncols],
        }
    }

    pub fn identity(n: usize, ring: &Ring) -> Self {
        let mut m = SparseMatrix::zero(n, n);
        for i in 0..n {
            m.rows[i].push((i, ring.one()));
            m.cols[i].push((i, ring.one()));
        }
        m
    }

    /// Build from `(row, col, value)` triplets in any order. Zero values are
    /// dropped; duplicates and out-of-range indices are rejected.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Coeff)>,
    ) -> Result<Self, Error> {
        let mut entries: Vec<(usize, usize, Coeff)> = triplets
            .into_iter()
            .filter(|(_, _, v)| !v.is_zero())
            .collect();
        entries.sort_by_key(|a| (a.0, a.1));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(Error::DuplicateEntry {
                    row: w[0].0 + 1,
                    col: w[0].1 + 1,
                });
            }
        }
        let mut m = SparseMatrix::zero(nrows, ncols);
        for (r, c, v) in entries {
            if r >= nrows || c >= ncols {
                return Err(Error::EntryOutOfRange {
                    row: r + 1,
                    col: c + 1,
                    nrows,
                    ncols,
                });
            }
            m.rows[r].push((c, v.clone()));
            m.cols[c].push((r, v));
        }
        Ok(m)
    }

    /// Build from per-column entry lists, each sorted by row with no zeros.
    pub fn from_columns(nrows: usize, columns: Vec<Vec<(usize, Coeff)>>) -> Self {
        let ncols = columns.len();
        let mut m = SparseMatrix {
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
            cols: columns,
        };
        for (j, col) in m.cols.iter().enumerate() {
            debug_assert!(col.windows(2).all(|w| w[0].0 < w[1].0), "column unsorted");
            for (i, v) in col {
                debug_assert!(!v.is_zero());
                debug_assert!(*i < nrows);
                m.rows[*i].push((j, v.clone()));
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn row(&self, i: usize) -> &[(usize, Coeff)] {
        &self.rows[i]
    }

    pub fn col(&self, j: usize) -> &[(usize, Coeff)] {
        &self.cols[j]
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&Coeff> {
        let row = &self.rows[i];
        row.binary_search_by_key(&j, |e| e.0).ok().map(|k| &row[k].1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Coeff)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(j, v)| (i, *j, v)))
    }

    /// Fraction of stored entries, exactly.
    pub fn density(&self) -> Result<Ratio<u64>, Error> {
        let total = self.nrows as u64 * self.ncols as u64;
        if total == 0 {
            return Err(Error::EmptyShape);
        }
        Ok(Ratio::new(self.nnz() as u64, total))
    }

    /// Matrix product over `ring`.
    pub fn mul(&self, rhs: &SparseMatrix, ring: &Ring) -> Result<SparseMatrix, Error> {
        if self.ncols != rhs.nrows {
            return Err(Error::DimensionMismatch(
                self.nrows, self.ncols, rhs.nrows, rhs.ncols,
            ));
        }
        let columns = crate::util::par_map_range(rhs.ncols, |j| {
            let mut acc: Vec<Option<Coeff>> = vec![None; self.nrows];
            let mut touched = Vec::new();
            for (k, w) in rhs.col(j) {
                for (i, v) in self.col(*k) {
                    let term = ring.mul(v, w);
                    match &mut acc[*i] {
                        Some(cur) => ring.add_assign(cur, &term),
                        slot => {
                            *slot = Some(term);
                            touched.push(*i);
                        }
                    }
                }
            }
            touched.sort_unstable();
            touched
                .into_iter()
                .filter_map(|i| {
                    let v = acc[i].take().unwrap();
                    (!v.is_zero()).then_some((i, v))
                })
                .collect::<Vec<_>>()
        });
        Ok(SparseMatrix::from_columns(self.nrows, columns))
    }

    /// Reindex rows and/or columns by gather permutations: entry `(i, j)` of
    /// the result is entry `(row_gather[i], col_gather[j])` of `self`.
    pub fn permuted(
        &self,
        row_gather: Option<&[usize]>,
        col_gather: Option<&[usize]>,
    ) -> SparseMatrix {
        if let Some(g) = row_gather {
            assert_eq!(g.len(), self.nrows);
        }
        if let Some(g) = col_gather {
            assert_eq!(g.len(), self.ncols);
        }
        let col_scatter = col_gather.map(invert_gather);
        let mut triplets = Vec::with_capacity(self.nnz());
        match row_gather {
            Some(g) => {
                for (new_i, &old_i) in g.iter().enumerate() {
                    for (j, v) in self.row(old_i) {
                        let new_j = col_scatter.as_ref().map_or(*j, |s| s[*j]);
                        triplets.push((new_i, new_j, v.clone()));
                    }
                }
            }
            None => {
                for (i, j, v) in self.iter() {
                    let new_j = col_scatter.as_ref().map_or(j, |s| s[j]);
                    triplets.push((i, new_j, v.clone()));
                }
            }
        }
        SparseMatrix::from_triplets(self.nrows, self.ncols, triplets)
            .expect("permutation preserves validity")
    }

    /// Keep only the selected rows and columns (ascending index lists),
    /// renumbering them consecutively.
    pub fn restricted(&self, keep_rows: &[usize], keep_cols: &[usize]) -> SparseMatrix {
        let row_new: Vec<Option<usize>> = {
            let mut v = vec![None; self.nrows];
            for (new, &old) in keep_rows.iter().enumerate() {
                v[old] = Some(new);
            }
            v
        };
        let columns = keep_cols
            .iter()
            .map(|&old_j| {
                self.col(old_j)
                    .iter()
                    .filter_map(|(i, v)| row_new[*i].map(|ni| (ni, v.clone())))
                    .collect()
            })
            .collect();
        SparseMatrix::from_columns(keep_rows.len(), columns)
    }

    /// Drop entries for which `keep` is false.
    pub fn filtered(&self, keep: impl Fn(usize, usize) -> bool) -> SparseMatrix {
        let columns = (0..self.ncols)
            .map(|j| {
                self.col(j)
                    .iter()
                    .filter(|(i, _)| keep(*i, j))
                    .cloned()
                    .collect()
            })
            .collect();
        SparseMatrix::from_columns(self.nrows, columns)
    }

    /// Map every entry into `target`, dropping images that become zero.
    pub fn map_ring(
        &self,
        target: &Ring,
        f: impl Fn(&Coeff) -> Result<Coeff, Error>,
    ) -> Result<SparseMatrix, Error> {
        let _ = target;
        let mut columns = Vec::with_capacity(self.ncols);
        for j in 0..self.ncols {
            let mut col = Vec::with_capacity(self.col(j).len());
            for (i, v) in self.col(j) {
                let w = f(v)?;
                if !w.is_zero() {
                    col.push((*i, w));
                }
            }
            columns.push(col);
        }
        Ok(SparseMatrix::from_columns(self.nrows, columns))
    }

    /// Check that the row and column views describe the same entry set.
    pub fn views_consistent(&self) -> bool {
        let mut from_rows: Vec<(usize, usize, &Coeff)> = self.iter().collect();
        let mut from_cols: Vec<(usize, usize, &Coeff)> = self
            .cols
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(i, v)| (*i, j, v)))
            .collect();
        from_rows.sort_by_key(|e| (e.0, e.1));
        from_cols.sort_by_key(|e| (e.0, e.1));
        from_rows == from_cols
    }
}

/// Turn a gather permutation (`new -> old`) into a scatter (`old -> new`).
pub fn invert_gather(gather: &[usize]) -> Vec<usize> {
    let mut scatter = vec![usize::MAX; gather.len()];
    for (new, &old) in gather.iter().enumerate() {
        debug_assert_eq!(scatter[old], usize::MAX, "gather not a permutation");
        scatter[old] = new;
    }
    scatter
}
