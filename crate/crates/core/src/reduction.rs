//! Morse reduction: collapse matched pairs and rewrite the boundary maps as
//! zig-zag path sums, producing a smaller homotopy-equivalent complex
//! together with the comparison maps `f` (and optionally `g`).
//!
//! Path sums are never computed by path enumeration. Contributions are
//! propagated along the matched pairs of one boundary matrix in topological
//! order of the zig-zag step relation, which is acyclic for any valid Morse
//! matching, so each pair is processed once per source column.

use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};

use crate::complex::ChainComplex;
use crate::error::Error;
use crate::matching::{index_partition, pair_topo_order, steepness_matching, IndexPartition, Matching};
use crate::matrix::SparseMatrix;
use crate::ordering::{apply_schedule, ReorderSchedule};
use crate::ring::{Coeff, Ring};
use crate::util::{par_map_range, par_map_slice};

#[derive(Clone, Copy, Debug, Default)]
pub struct ReduceOptions {
    /// Compute the map from the reduced complex into the original.
    pub want_f: bool,
    /// Compute the projection from the original onto the reduced complex.
    pub want_g: bool,
    /// Physically delete the matched columns of `d_{k-1}` and matched rows
    /// of `d_{k+1}` before summing paths. The result is identical either
    /// way; the flag exists so tests can verify that.
    pub prune: bool,
}

/// Outcome of one or more reduction passes.
#[derive(Clone, Debug)]
pub struct ReductionResult {
    pub reduced: ChainComplex,
    /// `f[k]` is `|I_k| x |I'_k|`, columns indexed by critical cells in
    /// ascending original order.
    pub f: Option<Vec<SparseMatrix>>,
    /// `g[k]` is `|I'_k| x |I_k|`.
    pub g: Option<Vec<SparseMatrix>>,
    pub passes: usize,
    /// Matched pair counts `m_k` (k = 1..N) for every pass performed.
    pub matched_counts: Vec<Vec<usize>>,
}

/// Matched-pair machinery for one boundary matrix.
struct PairSystem {
    /// (row, col) per pair.
    pairs: Vec<(usize, usize)>,
    /// `-1/w` per pair, applied when walking the reversed edge.
    neg_inv: Vec<Coeff>,
    pair_of_row: Vec<Option<usize>>,
    topo_rank: Vec<usize>,
}

impl PairSystem {
    fn build(b: &SparseMatrix, pairs: &[(usize, usize, Coeff)], ring: &Ring, k: usize) -> Result<Self, Error> {
        // cheap sanity on the matching within this matrix; the caller is
        // expected to have validated the full Morse conditions already
        let mut pair_of_row = vec![None; b.nrows()];
        let mut col_used = vec![false; b.ncols()];
        let mut neg_inv = Vec::with_capacity(pairs.len());
        for (idx, (u, v, w)) in pairs.iter().enumerate() {
            if *u >= b.nrows() || *v >= b.ncols() {
                return Err(Error::PairOutOfRange { k, row: u + 1, col: v + 1 });
            }
            if pair_of_row[*u].is_some() {
                return Err(Error::SharedVertex { degree: k - 1, index: u + 1 });
            }
            if col_used[*v] {
                return Err(Error::SharedVertex { degree: k, index: v + 1 });
            }
            if b.get(*u, *v) != Some(w) {
                return Err(Error::WeightMismatch { k, row: u + 1, col: v + 1 });
            }
            if !ring.is_unit(w) {
                return Err(Error::NonUnitWeight { k, row: u + 1, col: v + 1 });
            }
            pair_of_row[*u] = Some(idx);
            col_used[*v] = true;
            neg_inv.push(ring.neg_inverse(w));
        }
        let topo_rank = pair_topo_order(b, pairs).map_err(|witness| Error::Cycle {
            k,
            witness: witness.into_iter().map(|v| v + 1).collect(),
        })?;
        Ok(PairSystem {
            pairs: pairs.iter().map(|(u, v, _)| (*u, *v)).collect(),
            neg_inv,
            pair_of_row,
            topo_rank,
        })
    }
}

/// Coefficients landing on critical rows, and (for `f`) the coefficient
/// resting on each matched column after its backward hop.
type ZigzagOutput = (Vec<(usize, Coeff)>, Vec<(usize, Coeff)>);

/// One zig-zag propagation through a boundary matrix. `seeds` are arriving
/// coefficients on rows.
fn zigzag(
    b: &SparseMatrix,
    sys: &PairSystem,
    ring: &Ring,
    critical_row: &[bool],
    seeds: &[(usize, Coeff)],
    want_pair_coeffs: bool,
) -> ZigzagOutput {
    let mut out: HashMap<usize, Coeff> = HashMap::new();
    let mut acc: HashMap<usize, Coeff> = HashMap::new();
    let mut pending: BinaryHeap<std::cmp::Reverse<(usize, usize)>> = BinaryHeap::new();
    let mut pair_coeffs = Vec::new();

    let route = |row: usize,
                     value: Coeff,
                     out: &mut HashMap<usize, Coeff>,
                     acc: &mut HashMap<usize, Coeff>,
                     pending: &mut BinaryHeap<std::cmp::Reverse<(usize, usize)>>| {
        if value.is_zero() {
            return;
        }
        if critical_row[row] {
            match out.entry(row) {
                Entry::Occupied(mut e) => ring.add_assign(e.get_mut(), &value),
                Entry::Vacant(e) => {
                    e.insert(value);
                }
            }
        } else if let Some(p) = sys.pair_of_row[row] {
            match acc.entry(p) {
                Entry::Occupied(mut e) => ring.add_assign(e.get_mut(), &value),
                Entry::Vacant(e) => {
                    e.insert(value);
                    pending.push(std::cmp::Reverse((sys.topo_rank[p], p)));
                }
            }
        }
        // rows matched in a neighboring matrix are dead ends: no path
        // between critical cells continues through them
    };

    for (row, value) in seeds {
        route(*row, value.clone(), &mut out, &mut acc, &mut pending);
    }

    // Pairs pop in topological order, so every contribution into a pair has
    // arrived by the time it is popped.
    while let Some(std::cmp::Reverse((_, p))) = pending.pop() {
        let arrived = acc.remove(&p).expect("pending pair has a coefficient");
        if arrived.is_zero() {
            continue;
        }
        let hopped = ring.mul(&arrived, &sys.neg_inv[p]);
        if hopped.is_zero() {
            continue;
        }
        if want_pair_coeffs {
            pair_coeffs.push((p, hopped.clone()));
        }
        let (pair_row, pair_col) = sys.pairs[p];
        for (row, w) in b.col(pair_col) {
            if *row == pair_row {
                continue;
            }
            let value = ring.mul(&hopped, w);
            route(*row, value, &mut out, &mut acc, &mut pending);
        }
    }

    let mut contributions: Vec<(usize, Coeff)> = out
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .collect();
    contributions.sort_by_key(|e| e.0);
    (contributions, pair_coeffs)
}

/// Copy of the complex with the entries deleted that remark-style pruning
/// removes: matched columns of each `d_{k-1}` and matched rows of each
/// `d_{k+1}`. No zig-zag between critical cells ever traverses them.
pub fn pruned_complex(c: &ChainComplex, m: &Matching) -> ChainComplex {
    let part = index_partition(c, m);
    let boundaries = (1..=c.dim())
        .map(|k| {
            let dead_col: Vec<bool> = {
                let mut v = vec![false; c.rank(k)];
                for &j in &part.matched_rows[k] {
                    v[j] = true;
                }
                v
            };
            let dead_row: Vec<bool> = {
                let mut v = vec![false; c.rank(k - 1)];
                for &i in &part.matched_cols[k - 1] {
                    v[i] = true;
                }
                v
            };
            c.boundary(k).filtered(|i, j| !dead_row[i] && !dead_col[j])
        })
        .collect();
    ChainComplex::new(*c.ring(), c.ranks().to_vec(), boundaries)
        .expect("pruning preserves shapes")
}

/// Apply one Morse matching: build every reduced boundary by summing
/// zig-zag paths between critical cells, plus the comparison maps on demand.
/// The matching must be valid for `c`.
pub fn reduce_once(c: &ChainComplex, m: &Matching, opts: ReduceOptions) -> Result<ReductionResult, Error> {
    let pruned;
    let cw = if opts.prune {
        pruned = pruned_complex(c, m);
        &pruned
    } else {
        c
    };
    let ring = *cw.ring();
    let n = cw.dim();
    let part = index_partition(cw, m);

    let mut systems = Vec::with_capacity(n);
    for k in 1..=n {
        systems.push(PairSystem::build(cw.boundary(k), m.pairs_at(k), &ring, k)?);
    }

    // critical flags and old->new critical renumbering per degree
    let critical_flag: Vec<Vec<bool>> = (0..=n)
        .map(|k| {
            let mut flags = vec![false; cw.rank(k)];
            for &i in &part.critical[k] {
                flags[i] = true;
            }
            flags
        })
        .collect();
    let crit_new: Vec<Vec<usize>> = (0..=n)
        .map(|k| {
            let mut map = vec![usize::MAX; cw.rank(k)];
            for (new, &old) in part.critical[k].iter().enumerate() {
                map[old] = new;
            }
            map
        })
        .collect();

    let mut new_boundaries = Vec::with_capacity(n);
    let mut f = opts.want_f.then(Vec::new);
    let mut g = opts.want_g.then(Vec::new);

    if let Some(f) = &mut f {
        // degree 0 has no boundary below it: f_0 is the inclusion of the
        // critical cells
        let cols = part.critical[0]
            .iter()
            .map(|&old| vec![(old, ring.one())])
            .collect();
        f.push(SparseMatrix::from_columns(cw.rank(0), cols));
    }

    for k in 1..=n {
        let b = cw.boundary(k);
        let sys = &systems[k - 1];
        // one propagation per critical column yields both the reduced
        // column and the f-column
        let per_column = par_map_slice(&part.critical[k], |&v| {
            let (contribs, pair_coeffs) =
                zigzag(b, sys, &ring, &critical_flag[k - 1], b.col(v), opts.want_f);
            let reduced_col: Vec<(usize, Coeff)> = contribs
                .into_iter()
                .map(|(row, val)| (crit_new[k - 1][row], val))
                .collect();
            let f_col = opts.want_f.then(|| {
                let mut col: Vec<(usize, Coeff)> = pair_coeffs
                    .into_iter()
                    .map(|(p, coeff)| (sys.pairs[p].1, coeff))
                    .collect();
                col.push((v, ring.one()));
                col.sort_by_key(|e| e.0);
                col
            });
            (reduced_col, f_col)
        });
        let mut reduced_cols = Vec::with_capacity(per_column.len());
        let mut f_cols = Vec::with_capacity(per_column.len());
        for (rc, fc) in per_column {
            reduced_cols.push(rc);
            if let Some(fc) = fc {
                f_cols.push(fc);
            }
        }
        new_boundaries.push(SparseMatrix::from_columns(
            part.critical[k - 1].len(),
            reduced_cols,
        ));
        if let Some(f) = &mut f {
            f.push(SparseMatrix::from_columns(cw.rank(k), f_cols));
        }
    }

    if let Some(g) = &mut g {
        for k in 0..=n {
            let columns = par_map_range(cw.rank(k), |v| {
                if critical_flag[k][v] {
                    return vec![(crit_new[k][v], ring.one())];
                }
                if k == n || systems[k].pair_of_row[v].is_none() {
                    // matched column of d_k: projects to zero
                    return Vec::new();
                }
                // matched row of d_{k+1}: paths into the critical cells of I_k
                let (contribs, _) = zigzag(
                    cw.boundary(k + 1),
                    &systems[k],
                    &ring,
                    &critical_flag[k],
                    &[(v, ring.one())],
                    false,
                );
                contribs
                    .into_iter()
                    .map(|(row, val)| (crit_new[k][row], val))
                    .collect()
            });
            g.push(SparseMatrix::from_columns(part.critical[k].len(), columns));
        }
    }

    let ranks: Vec<usize> = part.critical.iter().map(Vec::len).collect();
    let reduced = ChainComplex::new(ring, ranks, new_boundaries)?;
    Ok(ReductionResult {
        reduced,
        f,
        g,
        passes: 1,
        matched_counts: vec![m.counts()],
    })
}

/// The row-operation form of the reduction (the Gaussian-elimination view):
/// compute the row of the reduced `d_k` at critical row `u` by repeatedly
/// eliminating the leftmost entry sitting in a matched column. Requires the
/// steepness pivot pattern, under which the eliminated position strictly
/// increases; this is asserted. Returns entries indexed by critical columns
/// in their reduced numbering.
pub fn transform_row(
    c: &ChainComplex,
    m: &Matching,
    k: usize,
    u: usize,
) -> Vec<(usize, Coeff)> {
    let ring = c.ring();
    let b = c.boundary(k);
    let part = index_partition(c, m);
    debug_assert!(part.critical[k - 1].contains(&u), "row must be critical");

    let mut pair_of_col: HashMap<usize, (usize, Coeff)> = HashMap::new();
    for (pu, pv, w) in m.pairs_at(k) {
        pair_of_col.insert(*pv, (*pu, ring.neg_inverse(w)));
    }

    let mut row: HashMap<usize, Coeff> = b.row(u).iter().map(|(j, v)| (*j, v.clone())).collect();
    let mut last_eliminated: Option<usize> = None;
    while let Some(&v) = row.keys().filter(|j| pair_of_col.contains_key(j)).min() {
        if let Some(prev) = last_eliminated {
            assert!(v > prev, "matched positions must strictly increase");
        }
        last_eliminated = Some(v);
        let coeff = row.remove(&v).unwrap();
        let (pivot_row, neg_inv) = &pair_of_col[&v];
        let factor = ring.mul(&coeff, neg_inv);
        for (j, val) in b.row(*pivot_row) {
            if *j == v {
                continue;
            }
            let term = ring.mul(&factor, val);
            match row.entry(*j) {
                Entry::Occupied(mut e) => {
                    ring.add_assign(e.get_mut(), &term);
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
                Entry::Vacant(e) => {
                    if !term.is_zero() {
                        e.insert(term);
                    }
                }
            }
        }
    }

    let crit_new: HashMap<usize, usize> = part.critical[k]
        .iter()
        .enumerate()
        .map(|(new, &old)| (old, new))
        .collect();
    let mut out: Vec<(usize, Coeff)> = row
        .into_iter()
        .filter_map(|(j, v)| crit_new.get(&j).map(|&nj| (nj, v)))
        .collect();
    out.sort_by_key(|e| e.0);
    out
}

/// Repeatedly reorder (per the schedule), take the steepness matching and
/// reduce, until the matching comes up empty. Each nonempty pass strictly
/// decreases the total rank, so this terminates. Over a field the final
/// boundaries are all zero.
pub fn reduce_fully(
    c: &ChainComplex,
    schedule: &ReorderSchedule,
    want_f: bool,
    want_g: bool,
) -> Result<ReductionResult, Error> {
    let mut state = Pipeline::new(c.clone(), want_f, want_g);
    loop {
        state.reorder(schedule);
        if !state.steepness_pass()? {
            break;
        }
    }
    Ok(state.finish())
}

/// Reduce until no unit entry remains anywhere. Plain steepness passes can
/// stall while units survive under an unlucky basis order; this driver then
/// reorders, and as a last resort matches a single unit entry, which is
/// always a valid Morse matching and guarantees progress.
pub fn reduce_until_no_units(
    c: &ChainComplex,
    want_f: bool,
) -> Result<ReductionResult, Error> {
    let mut state = Pipeline::new(c.clone(), want_f, false);
    let mut row_phase = 0u8;
    loop {
        while state.steepness_pass()? {}
        if !state.complex().has_unit_entry() {
            break;
        }
        let schedule = ReorderSchedule::both(row_phase, 2);
        row_phase = 1 - row_phase;
        state.reorder(&schedule);
        if state.steepness_pass()? {
            continue;
        }
        state.singleton_pass()?;
    }
    Ok(state.finish())
}

/// Pass-by-pass reduction driver handling the bookkeeping for the
/// accumulated comparison maps.
pub struct Pipeline {
    current: ChainComplex,
    f: Option<Vec<SparseMatrix>>,
    g: Option<Vec<SparseMatrix>>,
    passes: usize,
    matched_counts: Vec<Vec<usize>>,
}

impl Pipeline {
    pub fn new(c: ChainComplex, want_f: bool, want_g: bool) -> Self {
        let ring = *c.ring();
        let identities = |_: &()| -> Vec<SparseMatrix> {
            c.ranks()
                .iter()
                .map(|&r| SparseMatrix::identity(r, &ring))
                .collect()
        };
        Pipeline {
            f: want_f.then(|| identities(&())),
            g: want_g.then(|| identities(&())),
            current: c,
            passes: 0,
            matched_counts: Vec::new(),
        }
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.current
    }

    pub fn reorder(&mut self, schedule: &ReorderSchedule) {
        let perms = apply_schedule(&mut self.current, schedule);
        for (k, gather) in perms.iter().enumerate() {
            let Some(gather) = gather else { continue };
            if let Some(f) = &mut self.f {
                f[k] = f[k].permuted(None, Some(gather));
            }
            if let Some(g) = &mut self.g {
                g[k] = g[k].permuted(Some(gather), None);
            }
        }
    }

    /// Reduce by an explicitly given matching.
    pub fn pass_with(&mut self, m: &Matching) -> Result<(), Error> {
        let opts = ReduceOptions {
            want_f: self.f.is_some(),
            want_g: self.g.is_some(),
            prune: false,
        };
        let ring = *self.current.ring();
        let result = reduce_once(&self.current, m, opts)?;
        if let (Some(acc), Some(step)) = (&mut self.f, &result.f) {
            for (k, fk) in step.iter().enumerate() {
                acc[k] = acc[k].mul(fk, &ring)?;
            }
        }
        if let (Some(acc), Some(step)) = (&mut self.g, &result.g) {
            for (k, gk) in step.iter().enumerate() {
                acc[k] = gk.mul(&acc[k], &ring)?;
            }
        }
        self.matched_counts.push(m.counts());
        self.passes += 1;
        self.current = result.reduced;
        Ok(())
    }

    /// Take the steepness matching and reduce. Returns false (and does
    /// nothing) when the matching is empty.
    pub fn steepness_pass(&mut self) -> Result<bool, Error> {
        let m = steepness_matching(&self.current);
        if m.is_empty() {
            return Ok(false);
        }
        self.pass_with(&m)?;
        Ok(true)
    }

    /// Match one unit entry. Returns false if none exists.
    pub fn singleton_pass(&mut self) -> Result<bool, Error> {
        let ring = *self.current.ring();
        let mut found = None;
        'scan: for k in 1..=self.current.dim() {
            let b = self.current.boundary(k);
            for u in 0..b.nrows() {
                for (v, w) in b.row(u) {
                    if ring.is_unit(w) {
                        found = Some((k, u, *v, w.clone()));
                        break 'scan;
                    }
                }
            }
        }
        let Some((k, u, v, w)) = found else {
            return Ok(false);
        };
        let mut per_degree = vec![Vec::new(); self.current.dim()];
        per_degree[k - 1].push((u, v, w));
        self.pass_with(&Matching::new(per_degree))?;
        Ok(true)
    }

    pub fn finish(self) -> ReductionResult {
        ReductionResult {
            reduced: self.current,
            f: self.f,
            g: self.g,
            passes: self.passes,
            matched_counts: self.matched_counts,
        }
    }
}

/// Partition snapshot used by callers that report critical sets; thin
/// re-export so downstream code does not need the matching module.
pub fn critical_sets(c: &ChainComplex, m: &Matching) -> IndexPartition {
    index_partition(c, m)
}
