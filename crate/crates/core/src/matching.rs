//! Morse matchings: the steepness construction, validation of the three
//! matching conditions, and the induced partition into matched and critical
//! basis elements.

use serde::{Deserialize, Serialize};

use crate::complex::ChainComplex;
use crate::error::Error;
use crate::matrix::SparseMatrix;
use crate::ring::{Coeff, Ring};
use crate::util::par_map_range;

/// A matched pivot in one boundary matrix: `weight` is the entry at
/// `(row, col)`, and the reduction traverses it backwards with `-1/weight`.
pub type MatchedPair = (usize, usize, Coeff);

/// A set of matched pivots per degree; `pairs_at(k)` lives inside `d_k`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Matching {
    per_degree: Vec<Vec<MatchedPair>>,
}

impl Matching {
    pub fn new(per_degree: Vec<Vec<MatchedPair>>) -> Self {
        Matching { per_degree }
    }

    pub fn empty(dim: usize) -> Self {
        Matching {
            per_degree: vec![Vec::new(); dim],
        }
    }

    /// Pairs inside `d_k`, for `1 <= k <= N`.
    pub fn pairs_at(&self, k: usize) -> &[MatchedPair] {
        &self.per_degree[k - 1]
    }

    pub fn degrees(&self) -> usize {
        self.per_degree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_degree.iter().all(Vec::is_empty)
    }

    /// Pair counts `m_k` for k = 1..N.
    pub fn counts(&self) -> Vec<usize> {
        self.per_degree.iter().map(Vec::len).collect()
    }

    pub fn total(&self) -> usize {
        self.per_degree.iter().map(Vec::len).sum()
    }
}

/// The steepness matching of `c` under its current basis order: all unit
/// entries that are first in their row and last in their column. Pairs are
/// listed in ascending row order per degree.
///
/// For a valid complex this is always a Morse matching; the per-matrix scans
/// are independent, so degrees run in parallel.
pub fn steepness_matching(c: &ChainComplex) -> Matching {
    let ring = *c.ring();
    let per_degree = par_map_range(c.dim(), |idx| {
        let b = c.boundary(idx + 1);
        let mut pairs = Vec::new();
        for u in 0..b.nrows() {
            let Some((v, w)) = b.row(u).first() else {
                continue;
            };
            // pivot: the row's first nonzero is also its column's last
            let (last_row, _) = b.col(*v).last().expect("entry present in both views");
            if *last_row == u && ring.is_unit(w) {
                pairs.push((u, *v, w.clone()));
            }
        }
        pairs
    });
    Matching { per_degree }
}

/// Result of partitioning each `I_k` by a matching: matched columns of
/// `d_k`, matched rows of `d_{k+1}`, and the critical remainder. All lists
/// are ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexPartition {
    pub matched_cols: Vec<Vec<usize>>,
    pub matched_rows: Vec<Vec<usize>>,
    pub critical: Vec<Vec<usize>>,
}

/// Partition the basis of every degree into `I_k^+`, `I_k^-` and the
/// critical set. Assumes `m` has already been validated against `c`.
pub fn index_partition(c: &ChainComplex, m: &Matching) -> IndexPartition {
    let n = c.dim();
    let mut matched_cols = vec![Vec::new(); n + 1];
    let mut matched_rows = vec![Vec::new(); n + 1];
    for k in 1..=n {
        for (u, v, _) in m.pairs_at(k) {
            matched_rows[k - 1].push(*u);
            matched_cols[k].push(*v);
        }
    }
    for k in 0..=n {
        matched_cols[k].sort_unstable();
        matched_rows[k].sort_unstable();
    }
    let critical = (0..=n)
        .map(|k| {
            let mut used = vec![false; c.rank(k)];
            for &v in &matched_cols[k] {
                used[v] = true;
            }
            for &u in &matched_rows[k] {
                used[u] = true;
            }
            (0..c.rank(k)).filter(|&i| !used[i]).collect()
        })
        .collect();
    IndexPartition {
        matched_cols,
        matched_rows,
        critical,
    }
}

/// Check the three Morse matching conditions: (1) no basis element is
/// touched twice, (2) every weight is a unit and equals the matrix entry,
/// (3) reversing the matched edges leaves no directed cycle. Cycles can only
/// zig-zag inside a single boundary matrix, so the check runs per degree.
pub fn validate_morse_matching(c: &ChainComplex, m: &Matching) -> Result<(), Error> {
    if m.degrees() != c.dim() {
        return Err(Error::parse(format!(
            "matching covers {} degrees, complex has {}",
            m.degrees(),
            c.dim()
        )));
    }
    let ring = c.ring();
    let mut used: Vec<Vec<bool>> = (0..=c.dim()).map(|k| vec![false; c.rank(k)]).collect();
    for k in 1..=c.dim() {
        let b = c.boundary(k);
        for (u, v, w) in m.pairs_at(k) {
            if *u >= b.nrows() || *v >= b.ncols() {
                return Err(Error::PairOutOfRange {
                    k,
                    row: u + 1,
                    col: v + 1,
                });
            }
            match b.get(*u, *v) {
                None => {
                    return Err(Error::WeightMismatch {
                        k,
                        row: u + 1,
                        col: v + 1,
                    })
                }
                Some(entry) if entry != w => {
                    return Err(Error::WeightMismatch {
                        k,
                        row: u + 1,
                        col: v + 1,
                    })
                }
                Some(_) => {}
            }
            if !ring.is_unit(w) {
                return Err(Error::NonUnitWeight {
                    k,
                    row: u + 1,
                    col: v + 1,
                });
            }
            for (degree, index) in [(k - 1, *u), (k, *v)] {
                if used[degree][index] {
                    return Err(Error::SharedVertex {
                        degree,
                        index: index + 1,
                    });
                }
                used[degree][index] = true;
            }
        }
    }
    for k in 1..=c.dim() {
        pair_topo_order(c.boundary(k), m.pairs_at(k)).map_err(|witness| Error::Cycle {
            k,
            witness: witness.into_iter().map(|v| v + 1).collect(),
        })?;
    }
    Ok(())
}

/// Topological ranks for the matched pairs of one boundary matrix under the
/// zig-zag step relation: pair `P` precedes `Q` when the matched column of
/// `P` has a nonzero entry in the matched row of `Q`. Contributions in the
/// path-sum reduction flow strictly along this order.
///
/// Returns one rank per pair, or a witness cycle (column indices, 0-based).
pub(crate) fn pair_topo_order(
    b: &SparseMatrix,
    pairs: &[MatchedPair],
) -> Result<Vec<usize>, Vec<usize>> {
    let npairs = pairs.len();
    let mut pair_of_row: Vec<Option<usize>> = vec![None; b.nrows()];
    for (p, (u, _, _)) in pairs.iter().enumerate() {
        pair_of_row[*u] = Some(p);
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); npairs];
    let mut indegree = vec![0usize; npairs];
    for (p, (u, v, _)) in pairs.iter().enumerate() {
        for (row, _) in b.col(*v) {
            if row == u {
                continue;
            }
            if let Some(q) = pair_of_row[*row] {
                adj[p].push(q);
                indegree[q] += 1;
            }
        }
    }
    let mut queue: std::collections::VecDeque<usize> =
        (0..npairs).filter(|&p| indegree[p] == 0).collect();
    let mut rank = vec![usize::MAX; npairs];
    let mut next = 0;
    while let Some(p) = queue.pop_front() {
        rank[p] = next;
        next += 1;
        for &q in &adj[p] {
            indegree[q] -= 1;
            if indegree[q] == 0 {
                queue.push_back(q);
            }
        }
    }
    if next == npairs {
        return Ok(rank);
    }
    // extract one cycle for the report: every unranked pair retains an
    // unranked predecessor, so walking predecessors must revisit a pair
    let unranked: Vec<usize> = (0..npairs).filter(|&p| rank[p] == usize::MAX).collect();
    let mut seen = vec![false; npairs];
    let mut path: Vec<usize> = Vec::new();
    let mut cur = unranked[0];
    loop {
        if seen[cur] {
            let pos = path.iter().position(|&p| p == cur).unwrap();
            let mut cycle: Vec<usize> = path[pos..].iter().map(|&p| pairs[p].1).collect();
            cycle.reverse(); // predecessors were walked, report in edge order
            return Err(cycle);
        }
        seen[cur] = true;
        path.push(cur);
        cur = unranked
            .iter()
            .copied()
            .find(|&p| adj[p].contains(&cur))
            .expect("unranked pair keeps an unranked predecessor");
    }
}

#[derive(Serialize, Deserialize)]
struct MatchingBlock {
    k: usize,
    pairs: Vec<(usize, usize, String)>,
}

impl Matching {
    /// JSON form: `[{"k":1,"pairs":[[u,v,"w"],...]},...]`, 1-based.
    pub fn to_json(&self, ring: &Ring) -> String {
        let blocks: Vec<MatchingBlock> = self
            .per_degree
            .iter()
            .enumerate()
            .map(|(idx, pairs)| MatchingBlock {
                k: idx + 1,
                pairs: pairs
                    .iter()
                    .map(|(u, v, w)| (u + 1, v + 1, ring.format(w)))
                    .collect(),
            })
            .collect();
        serde_json::to_string(&blocks).expect("matching serialization cannot fail")
    }

    pub fn from_json(s: &str, ring: &Ring) -> Result<Matching, Error> {
        let blocks: Vec<MatchingBlock> =
            serde_json::from_str(s).map_err(|e| Error::parse(format!("bad matching JSON: {e}")))?;
        let mut per_degree = vec![Vec::new(); blocks.len()];
        for block in blocks {
            if block.k == 0 || block.k > per_degree.len() {
                return Err(Error::parse("matching blocks must be k=1..N"));
            }
            let pairs = block
                .pairs
                .iter()
                .map(|(u, v, w)| {
                    if *u == 0 || *v == 0 {
                        return Err(Error::parse("matching indices are 1-based"));
                    }
                    Ok((u - 1, v - 1, ring.parse(w)?))
                })
                .collect::<Result<Vec<_>, _>>()?;
            per_degree[block.k - 1] = pairs;
        }
        Ok(Matching { per_degree })
    }
}
