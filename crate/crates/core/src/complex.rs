//! Chain complexes of free modules and the CHC interchange format.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::matrix::SparseMatrix;
use crate::ring::{Coeff, Ring};

/// A bounded chain complex of free modules: ranks `|I_0| ... |I_N|` and
/// boundary matrices `d_1 ... d_N`, where `d_k` has shape `|I_{k-1}| x |I_k|`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplex {
    ring: Ring,
    ranks: Vec<usize>,
    boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// Assemble a complex, checking shape compatibility (but not `dd = 0`;
    /// call [`ChainComplex::validate`] for the full check).
    pub fn new(ring: Ring, ranks: Vec<usize>, boundaries: Vec<SparseMatrix>) -> Result<Self, Error> {
        if ranks.is_empty() {
            return Err(Error::parse("a chain complex needs at least one degree"));
        }
        if boundaries.len() + 1 != ranks.len() {
            return Err(Error::parse(format!(
                "{} ranks need {} boundary matrices, got {}",
                ranks.len(),
                ranks.len() - 1,
                boundaries.len()
            )));
        }
        let c = ChainComplex { ring, ranks, boundaries };
        for k in 1..=c.dim() {
            let b = c.boundary(k);
            if b.nrows() != c.rank(k - 1) || b.ncols() != c.rank(k) {
                return Err(Error::ShapeMismatch {
                    k,
                    rows: b.nrows(),
                    cols: b.ncols(),
                    expected_rows: c.rank(k - 1),
                    expected_cols: c.rank(k),
                });
            }
        }
        Ok(c)
    }

    /// The complex with zero modules everywhere and the given ranks.
    pub fn zero_complex(ring: Ring, ranks: Vec<usize>) -> Self {
        let boundaries = ranks
            .windows(2)
            .map(|w| SparseMatrix::zero(w[0], w[1]))
            .collect();
        ChainComplex { ring, ranks, boundaries }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Top degree `N`.
    pub fn dim(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, k: usize) -> usize {
        self.ranks[k]
    }

    /// Boundary matrix `d_k` for `1 <= k <= N`.
    pub fn boundary(&self, k: usize) -> &SparseMatrix {
        assert!(k >= 1 && k <= self.dim(), "no boundary at degree {k}");
        &self.boundaries[k - 1]
    }

    pub fn boundaries(&self) -> &[SparseMatrix] {
        &self.boundaries
    }

    pub fn total_entries(&self) -> usize {
        self.boundaries.iter().map(SparseMatrix::nnz).sum()
    }

    /// Alternating sum of the ranks; invariant under Morse reduction.
    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(k, &r)| if k % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    /// Full validity check: shapes (already guaranteed by construction) and
    /// `d_{k-1} . d_k = 0`, reporting the first offending entry.
    pub fn validate(&self) -> Result<(), Error> {
        for k in 2..=self.dim() {
            let prev = self.boundary(k - 1);
            let cur = self.boundary(k);
            for j in 0..cur.ncols() {
                let mut acc: Vec<Option<Coeff>> = vec![None; prev.nrows()];
                let mut touched = Vec::new();
                for (r, w) in cur.col(j) {
                    for (i, v) in prev.col(*r) {
                        let term = self.ring.mul(v, w);
                        match &mut acc[*i] {
                            Some(cur) => self.ring.add_assign(cur, &term),
                            slot => {
                                *slot = Some(term);
                                touched.push(*i);
                            }
                        }
                    }
                }
                touched.sort_unstable();
                for i in touched {
                    if !acc[i].as_ref().unwrap().is_zero() {
                        return Err(Error::NonzeroComposite {
                            k,
                            row: i + 1,
                            col: j + 1,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Does any boundary matrix contain a unit entry?
    pub fn has_unit_entry(&self) -> bool {
        self.boundaries
            .iter()
            .any(|b| b.iter().any(|(_, _, v)| self.ring.is_unit(v)))
    }

    /// Reinterpret the entries in `target`. Integer complexes embed into any
    /// ring; otherwise the rings must match (or embed, as ZLoc(p) into Q and
    /// Q into ZLoc(p) when all denominators are coprime to p).
    pub fn into_ring(&self, target: Ring) -> Result<ChainComplex, Error> {
        if self.ring == target {
            return Ok(self.clone());
        }
        let convertible = matches!(
            (&self.ring, &target),
            (Ring::Integers, _)
                | (Ring::LocalizedIntegers(_), Ring::Rationals)
                | (Ring::Rationals, Ring::LocalizedIntegers(_))
        );
        if !convertible {
            return Err(Error::RingCast {
                from: self.ring.to_string(),
                to: target.to_string(),
            });
        }
        let f = |v: &Coeff| -> Result<Coeff, Error> {
            match v {
                Coeff::Int(n) => Ok(target.from_bigint(n.clone())),
                Coeff::Rat(q) => target.from_fraction(q.numer().clone(), q.denom().clone()),
                Coeff::Mod(_) => unreachable!(),
            }
        };
        let boundaries = self
            .boundaries
            .iter()
            .map(|b| b.map_ring(&target, f))
            .collect::<Result<_, _>>()?;
        Ok(ChainComplex {
            ring: target,
            ranks: self.ranks.clone(),
            boundaries,
        })
    }

    /// Permute the basis of degree `k` by a gather permutation
    /// (`new index -> old index`), i.e. the columns of `d_k` and the rows of
    /// `d_{k+1}` simultaneously, preserving the complex up to relabeling.
    pub fn permute_degree(&mut self, k: usize, gather: &[usize]) {
        assert_eq!(gather.len(), self.rank(k));
        if k >= 1 {
            self.boundaries[k - 1] = self.boundaries[k - 1].permuted(None, Some(gather));
        }
        if k < self.dim() {
            self.boundaries[k] = self.boundaries[k].permuted(Some(gather), None);
        }
    }

    /// Density of each boundary matrix as `(nnz, rows*cols)`.
    pub fn densities(&self) -> Vec<(usize, usize)> {
        self.boundaries
            .iter()
            .map(|b| (b.nnz(), b.nrows() * b.ncols()))
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct ChcFile {
    ring: String,
    ranks: Vec<usize>,
    boundaries: Vec<ChcBoundary>,
}

#[derive(Serialize, Deserialize)]
struct ChcBoundary {
    k: usize,
    entries: Vec<(usize, usize, String)>,
}

impl ChainComplex {
    /// Serialize to the CHC interchange format: 1-based indices, entries
    /// sorted by `(row, col)`, values as canonical decimal strings. Parsing
    /// the output reproduces the complex exactly.
    pub fn to_chc_string(&self) -> String {
        let boundaries = (1..=self.dim())
            .map(|k| {
                let b = self.boundary(k);
                let mut entries: Vec<(usize, usize, String)> = b
                    .iter()
                    .map(|(i, j, v)| (i + 1, j + 1, self.ring.format(v)))
                    .collect();
                entries.sort_by_key(|a| (a.0, a.1));
                ChcBoundary { k, entries }
            })
            .collect();
        let file = ChcFile {
            ring: self.ring.to_string(),
            ranks: self.ranks.clone(),
            boundaries,
        };
        serde_json::to_string(&file).expect("CHC serialization cannot fail")
    }

    pub fn from_chc_str(s: &str) -> Result<ChainComplex, Error> {
        let file: ChcFile =
            serde_json::from_str(s).map_err(|e| Error::parse(format!("bad CHC JSON: {e}")))?;
        let ring = Ring::parse_tag(&file.ring)?;
        if file.ranks.is_empty() {
            return Err(Error::parse("CHC ranks must be nonempty"));
        }
        let n = file.ranks.len() - 1;
        if file.boundaries.len() != n {
            return Err(Error::parse(format!(
                "expected {n} boundary blocks, found {}",
                file.boundaries.len()
            )));
        }
        let mut matrices = Vec::with_capacity(n);
        for (idx, block) in file.boundaries.iter().enumerate() {
            if block.k != idx + 1 {
                return Err(Error::parse(format!(
                    "boundary blocks must be k=1..{n} in order; found k={}",
                    block.k
                )));
            }
            let mut triplets = Vec::with_capacity(block.entries.len());
            for (i, j, s) in &block.entries {
                if *i == 0 || *j == 0 {
                    return Err(Error::parse("CHC indices are 1-based"));
                }
                triplets.push((i - 1, j - 1, ring.parse(s)?));
            }
            matrices.push(SparseMatrix::from_triplets(
                file.ranks[idx],
                file.ranks[idx + 1],
                triplets,
            )?);
        }
        ChainComplex::new(ring, file.ranks, matrices)
    }
}

/// Convenience constructor used widely in tests: a complex from dense
/// integer row-major matrices.
pub fn complex_from_dense(ring: Ring, matrices: &[Vec<Vec<i64>>]) -> ChainComplex {
    assert!(!matrices.is_empty());
    let mut ranks = Vec::with_capacity(matrices.len() + 1);
    ranks.push(matrices[0].len());
    for m in matrices {
        ranks.push(if m.is_empty() { 0 } else { m[0].len() });
    }
    let boundaries = matrices
        .iter()
        .map(|m| {
            let nrows = m.len();
            let ncols = if m.is_empty() { 0 } else { m[0].len() };
            let triplets = m.iter().enumerate().flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(j, &v)| (i, j, ring.from_i64(v)))
            });
            SparseMatrix::from_triplets(nrows, ncols, triplets).unwrap()
        })
        .collect();
    ChainComplex::new(ring, ranks, boundaries).unwrap()
}

/// Render a boundary matrix densely; test helper for comparing against
/// matrices printed in references.
pub fn to_dense(m: &SparseMatrix) -> Vec<Vec<String>> {
    let mut out = vec![vec!["0".to_string(); m.ncols()]; m.nrows()];
    for (i, j, v) in m.iter() {
        out[i][j] = v.to_string();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_check_on_construction() {
        let bad = ChainComplex::new(
            Ring::Integers,
            vec![2, 3],
            vec![SparseMatrix::zero(3, 2)],
        );
        assert!(matches!(bad, Err(Error::ShapeMismatch { k: 1, .. })));
    }

    #[test]
    fn composite_check_reports_first_offender() {
        // d_1 = [1], d_2 = [1]: composite is [1] != 0
        let c = complex_from_dense(Ring::Integers, &[vec![vec![1]], vec![vec![1]]]);
        match c.validate() {
            Err(Error::NonzeroComposite { k: 2, row: 1, col: 1 }) => {}
            other => panic!("expected NonzeroComposite(2,1,1), got {other:?}"),
        }
    }

    #[test]
    fn zero_boundaries_validate() {
        let c = ChainComplex::zero_complex(Ring::Integers, vec![3, 5, 2]);
        assert!(c.validate().is_ok());
        assert_eq!(c.euler_characteristic(), 0);
    }

    #[test]
    fn chc_round_trip_is_exact() {
        let c = complex_from_dense(
            Ring::Integers,
            &[vec![vec![3, 4], vec![2, 3]]],
        );
        let text = c.to_chc_string();
        let back = ChainComplex::from_chc_str(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_chc_string(), text);
    }

    #[test]
    fn chc_rational_values() {
        let ring = Ring::Rationals;
        let m = SparseMatrix::from_triplets(
            1,
            2,
            [(0, 0, ring.parse("2/3").unwrap()), (0, 1, ring.parse("-5").unwrap())],
        )
        .unwrap();
        let c = ChainComplex::new(ring, vec![1, 2], vec![m]).unwrap();
        let back = ChainComplex::from_chc_str(&c.to_chc_string()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn ring_casts() {
        let c = complex_from_dense(Ring::Integers, &[vec![vec![2, 4], vec![6, 0]]]);
        let f2 = c.into_ring(Ring::prime_field(2).unwrap()).unwrap();
        assert_eq!(f2.boundary(1).nnz(), 0); // everything even
        let f3 = c.into_ring(Ring::prime_field(3).unwrap()).unwrap();
        assert_eq!(f3.boundary(1).nnz(), 2); // 6 = 0 mod 3 drops out
        let q = c.into_ring(Ring::Rationals).unwrap();
        assert!(q.into_ring(Ring::Integers).is_err());
    }

    #[test]
    fn permute_degree_relabels() {
        let c0 = complex_from_dense(
            Ring::Integers,
            &[vec![vec![1, 2], vec![3, 4]], vec![vec![0, 0], vec![0, 0]]],
        );
        let mut c = c0.clone();
        c.permute_degree(1, &[1, 0]);
        assert_eq!(c.boundary(1).get(0, 0), Some(&Ring::Integers.from_i64(2)));
        // involution
        c.permute_degree(1, &[1, 0]);
        assert_eq!(c, c0);
    }
}
