//! Basis reordering: sort columns and rows so that more invertible entries
//! sit in pivot position (zeros left in their row, zeros below in their
//! column) and the reduced complex fills in less, plus the constructive
//! extension of an arbitrary Morse matching to an order under which it is
//! contained in the steepness matching.

use crate::complex::ChainComplex;
use crate::error::Error;
use crate::matching::Matching;
use crate::matrix::SparseMatrix;
use crate::ring::Ring;

/// Which of the four column comparison keys participate, in their fixed
/// order: unit-in-column, last nonzero position, nonzero count, last
/// nonzero is a unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColKeys {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub c4: bool,
}

/// Row keys: unit-in-row, first nonzero position, negated nonzero count,
/// first nonzero is a unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RowKeys {
    pub r1: bool,
    pub r2: bool,
    pub r3: bool,
    pub r4: bool,
}

impl Default for ColKeys {
    fn default() -> Self {
        ColKeys { c1: true, c2: true, c3: true, c4: true }
    }
}

impl Default for RowKeys {
    fn default() -> Self {
        RowKeys { r1: true, r2: true, r3: true, r4: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ReorderMode {
    #[default]
    None,
    Columns,
    /// Rows of `d_k` for `k = N-a, N-a-b, ...`.
    Rows { a: u8, b: usize },
    /// Columns first, then rows.
    Both { a: u8, b: usize },
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ReorderSchedule {
    pub mode: ReorderMode,
    pub col_keys: ColKeys,
    pub row_keys: RowKeys,
}

impl ReorderSchedule {
    pub fn none() -> Self {
        ReorderSchedule::default()
    }

    pub fn columns() -> Self {
        ReorderSchedule { mode: ReorderMode::Columns, ..Default::default() }
    }

    pub fn rows(a: u8, b: usize) -> Self {
        ReorderSchedule { mode: ReorderMode::Rows { a, b }, ..Default::default() }
    }

    pub fn both(a: u8, b: usize) -> Self {
        ReorderSchedule { mode: ReorderMode::Both { a, b }, ..Default::default() }
    }
}

/// The column comparison tuple `(c1, c2, c3, c4)` with a 1-based position,
/// or `None` for a zero column, which sorts after every nonzero one.
pub fn column_sort_key(
    b: &SparseMatrix,
    ring: &Ring,
    v: usize,
) -> Option<(u8, usize, usize, u8)> {
    let col = b.col(v);
    let (last_row, last_val) = col.last()?;
    let has_unit = col.iter().any(|(_, w)| ring.is_unit(w));
    Some((
        if has_unit { 0 } else { 1 },
        last_row + 1,
        col.len(),
        if ring.is_unit(last_val) { 0 } else { 1 },
    ))
}

/// The row comparison tuple `(r1, r2, r3, r4)`; `None` for a zero row.
pub fn row_sort_key(b: &SparseMatrix, ring: &Ring, u: usize) -> Option<(u8, usize, i64, u8)> {
    let row = b.row(u);
    let (first_col, first_val) = row.first()?;
    let has_unit = row.iter().any(|(_, w)| ring.is_unit(w));
    Some((
        if has_unit { 1 } else { 0 },
        first_col + 1,
        -(row.len() as i64),
        if ring.is_unit(first_val) { 1 } else { 0 },
    ))
}

fn masked_col(key: Option<(u8, usize, usize, u8)>, keys: &ColKeys) -> (u8, usize, usize, u8, u8) {
    match key {
        // zero columns sort after everything
        None => (2, usize::MAX, usize::MAX, 2, 1),
        Some((c1, c2, c3, c4)) => (
            if keys.c1 { c1 } else { 0 },
            if keys.c2 { c2 } else { 0 },
            if keys.c3 { c3 } else { 0 },
            if keys.c4 { c4 } else { 0 },
            0,
        ),
    }
}

fn masked_row(key: Option<(u8, usize, i64, u8)>, keys: &RowKeys) -> (u8, usize, i64, u8, u8) {
    match key {
        None => (2, usize::MAX, i64::MAX, 2, 1),
        Some((r1, r2, r3, r4)) => (
            if keys.r1 { r1 } else { 0 },
            if keys.r2 { r2 } else { 0 },
            if keys.r3 { r3 } else { 0 },
            if keys.r4 { r4 } else { 0 },
            0,
        ),
    }
}

/// Stable ascending sort permutation (gather form: `new -> old`).
fn sort_gather<K: Ord>(n: usize, key: impl Fn(usize) -> K) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| key(i));
    order
}

fn is_identity(gather: &[usize]) -> bool {
    gather.iter().enumerate().all(|(i, &g)| i == g)
}

/// Sort the columns of every `d_k` by the selected keys, applying the same
/// permutation to the rows of `d_{k+1}`. Returns the gather applied to each
/// degree's basis (`None` where nothing moved).
#[allow(clippy::needless_range_loop)]
pub fn order_columns(c: &mut ChainComplex, keys: &ColKeys) -> Vec<Option<Vec<usize>>> {
    let ring = *c.ring();
    let mut applied = vec![None; c.dim() + 1];
    for k in 1..=c.dim() {
        let b = c.boundary(k);
        if b.nrows() == 0 || b.ncols() == 0 || b.is_zero() {
            continue;
        }
        let gather = sort_gather(b.ncols(), |v| masked_col(column_sort_key(b, &ring, v), keys));
        if is_identity(&gather) {
            continue;
        }
        c.permute_degree(k, &gather);
        applied[k] = Some(gather);
    }
    applied
}

/// Sort the rows of `d_k` for `k = N-a, N-a-b, N-a-2b, ...`, applying the
/// same permutation to the columns of `d_{k-1}`.
#[allow(clippy::needless_range_loop)]
pub fn order_rows(c: &mut ChainComplex, a: u8, b: usize, keys: &RowKeys) -> Vec<Option<Vec<usize>>> {
    assert!(a <= 1, "a must be 0 or 1");
    assert!(b >= 1, "step must be positive");
    let ring = *c.ring();
    let mut applied = vec![None; c.dim() + 1];
    let n = c.dim() as i64;
    let mut k = n - a as i64;
    while k >= 1 {
        let bk = c.boundary(k as usize);
        if bk.nrows() == 0 || bk.ncols() == 0 || bk.is_zero() {
            k -= b as i64;
            continue;
        }
        let gather = sort_gather(bk.nrows(), |u| masked_row(row_sort_key(bk, &ring, u), keys));
        if !is_identity(&gather) {
            c.permute_degree(k as usize - 1, &gather);
            applied[k as usize - 1] = Some(gather);
        }
        k -= b as i64;
    }
    applied
}

/// Run one schedule, merging the per-degree gathers of both phases.
pub fn apply_schedule(c: &mut ChainComplex, schedule: &ReorderSchedule) -> Vec<Option<Vec<usize>>> {
    match schedule.mode {
        ReorderMode::None => vec![None; c.dim() + 1],
        ReorderMode::Columns => order_columns(c, &schedule.col_keys),
        ReorderMode::Rows { a, b } => order_rows(c, a, b, &schedule.row_keys),
        ReorderMode::Both { a, b } => {
            let first = order_columns(c, &schedule.col_keys);
            let second = order_rows(c, a, b, &schedule.row_keys);
            first
                .into_iter()
                .zip(second)
                .map(|(f, s)| match (f, s) {
                    (None, None) => None,
                    (Some(f), None) => Some(f),
                    (None, Some(s)) => Some(s),
                    // gathers compose by lookup: combined[new] = f[s[new]]
                    (Some(f), Some(s)) => Some(s.iter().map(|&mid| f[mid]).collect()),
                })
                .collect()
        }
    }
}

/// Constructively extend a valid Morse matching to total orders under which
/// it becomes part of the steepness matching: topologically sort each
/// degree by the zig-zag precedence the matched pairs induce. Returns one
/// gather permutation per degree; relabeling the complex by them makes
/// every pair of `m` a steepness pivot.
#[allow(clippy::needless_range_loop)]
pub fn extend_matching_to_order(c: &ChainComplex, m: &Matching) -> Result<Vec<Vec<usize>>, Error> {
    let n = c.dim();
    // must-precede digraphs, one per degree
    let mut adj: Vec<Vec<Vec<usize>>> = (0..=n).map(|k| vec![Vec::new(); c.rank(k)]).collect();
    for k in 1..=n {
        let b = c.boundary(k);
        for (u, v, _) in m.pairs_at(k) {
            // the matched column must come before every other column its
            // pivot row touches
            for (col, _) in b.row(*u) {
                if col != v {
                    adj[k][*v].push(*col);
                }
            }
            // every other row of the matched column must come before the
            // pivot row
            for (row, _) in b.col(*v) {
                if row != u {
                    adj[k - 1][*row].push(*u);
                }
            }
        }
    }
    let mut orders = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let size = c.rank(k);
        let mut indegree = vec![0usize; size];
        for targets in &adj[k] {
            for &t in targets {
                indegree[t] += 1;
            }
        }
        // Kahn with an index-ordered frontier keeps the output stable
        let mut frontier: std::collections::BTreeSet<usize> =
            (0..size).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(size);
        while let Some(&i) = frontier.iter().next() {
            frontier.remove(&i);
            order.push(i);
            for &t in &adj[k][i] {
                indegree[t] -= 1;
                if indegree[t] == 0 {
                    frontier.insert(t);
                }
            }
        }
        if order.len() != size {
            // cannot happen for a valid Morse matching
            return Err(Error::Cycle {
                k,
                witness: (0..size).filter(|&i| indegree[i] > 0).map(|i| i + 1).collect(),
            });
        }
        orders.push(order);
    }
    Ok(orders)
}

/// Relabel a complex by per-degree gathers; companion to
/// [`extend_matching_to_order`].
pub fn relabel(c: &ChainComplex, orders: &[Vec<usize>]) -> ChainComplex {
    let mut out = c.clone();
    for (k, gather) in orders.iter().enumerate() {
        out.permute_degree(k, gather);
    }
    out
}

/// Relabel a matching along the same gathers, for containment checks.
pub fn relabel_matching(m: &Matching, orders: &[Vec<usize>]) -> Matching {
    let scatters: Vec<Vec<usize>> = orders
        .iter()
        .map(|g| crate::matrix::invert_gather(g))
        .collect();
    let per_degree = (1..=m.degrees())
        .map(|k| {
            let mut pairs: Vec<_> = m
                .pairs_at(k)
                .iter()
                .map(|(u, v, w)| (scatters[k - 1][*u], scatters[k][*v], w.clone()))
                .collect();
            pairs.sort_by_key(|p| p.0);
            pairs
        })
        .collect();
    Matching::new(per_degree)
}

/// Is every pair of `sub` also a pair of `sup`?
pub fn matching_contains(sup: &Matching, sub: &Matching) -> bool {
    (1..=sub.degrees()).all(|k| {
        sub.pairs_at(k)
            .iter()
            .all(|p| sup.pairs_at(k).contains(p))
    })
}
