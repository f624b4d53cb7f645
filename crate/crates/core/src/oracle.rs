//! Dense brute-force verification: Smith normal form over Z with optional
//! unimodular transforms, dense rank computation over the fields, and
//! homology assembled from them. Small inputs only, by contract; everything
//! here is the ground truth the sparse pipeline is tested against.

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::complex::ChainComplex;
use crate::error::Error;
use crate::matrix::SparseMatrix;
use crate::ring::{Coeff, Ring};
use crate::torsion::{HomologyGroup, HomologyResult};

/// Row-major dense integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMat {
    pub nrows: usize,
    pub ncols: usize,
    data: Vec<BigInt>,
}

impl DenseMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        DenseMat {
            nrows,
            ncols,
            data: vec![BigInt::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = DenseMat::zeros(nrows, ncols);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), ncols);
            for (j, v) in row.into_iter().enumerate() {
                m[(i, j)] = BigInt::from(v);
            }
        }
        m
    }

    /// Densify a sparse integer matrix.
    pub fn from_sparse(s: &SparseMatrix) -> Self {
        let mut m = DenseMat::zeros(s.nrows(), s.ncols());
        for (i, j, v) in s.iter() {
            let Coeff::Int(n) = v else {
                panic!("dense oracle matrices are integral")
            };
            m[(i, j)] = n.clone();
        }
        m
    }

    pub fn mul(&self, rhs: &DenseMat) -> DenseMat {
        assert_eq!(self.ncols, rhs.nrows);
        let mut out = DenseMat::zeros(self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.ncols {
                    let prod = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.nrows == self.ncols
            && (0..self.nrows).all(|i| {
                (0..self.ncols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }
}

impl std::ops::Index<(usize, usize)> for DenseMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.ncols + j]
    }
}

/// Unimodular transforms bringing a matrix to diagonal form: `u * a * v = d`.
#[derive(Clone, Debug)]
pub struct SnfTransforms {
    pub u: DenseMat,
    pub u_inv: DenseMat,
    pub v: DenseMat,
    pub v_inv: DenseMat,
}

#[derive(Clone, Debug)]
pub struct SnfResult {
    /// Nonzero invariant factors, each dividing the next.
    pub diag: Vec<BigInt>,
    pub transforms: Option<SnfTransforms>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

struct SnfWorker {
    a: DenseMat,
    t: Option<SnfTransforms>,
}

impl SnfWorker {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.a.ncols {
            let tmp = self.a[(i, c)].clone();
            self.a[(i, c)] = self.a[(j, c)].clone();
            self.a[(j, c)] = tmp;
        }
        if let Some(t) = &mut self.t {
            for c in 0..t.u.ncols {
                let tmp = t.u[(i, c)].clone();
                t.u[(i, c)] = t.u[(j, c)].clone();
                t.u[(j, c)] = tmp;
            }
            // inverse of a row swap applied on the other side
            for r in 0..t.u_inv.nrows {
                let tmp = t.u_inv[(r, i)].clone();
                t.u_inv[(r, i)] = t.u_inv[(r, j)].clone();
                t.u_inv[(r, j)] = tmp;
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.a.nrows {
            let tmp = self.a[(r, i)].clone();
            self.a[(r, i)] = self.a[(r, j)].clone();
            self.a[(r, j)] = tmp;
        }
        if let Some(t) = &mut self.t {
            for r in 0..t.v.nrows {
                let tmp = t.v[(r, i)].clone();
                t.v[(r, i)] = t.v[(r, j)].clone();
                t.v[(r, j)] = tmp;
            }
            for c in 0..t.v_inv.ncols {
                let tmp = t.v_inv[(i, c)].clone();
                t.v_inv[(i, c)] = t.v_inv[(j, c)].clone();
                t.v_inv[(j, c)] = tmp;
            }
        }
    }

    /// row[i] += q * row[j]
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        for c in 0..self.a.ncols {
            let term = q * &self.a[(j, c)];
            self.a[(i, c)] += term;
        }
        if let Some(t) = &mut self.t {
            for c in 0..t.u.ncols {
                let term = q * &t.u[(j, c)];
                t.u[(i, c)] += term;
            }
            for r in 0..t.u_inv.nrows {
                let term = q * &t.u_inv[(r, i)];
                t.u_inv[(r, j)] -= term;
            }
        }
    }

    /// col[i] += q * col[j]
    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        for r in 0..self.a.nrows {
            let term = q * &self.a[(r, j)];
            self.a[(r, i)] += term;
        }
        if let Some(t) = &mut self.t {
            for r in 0..t.v.nrows {
                let term = q * &t.v[(r, j)];
                t.v[(r, i)] += term;
            }
            for c in 0..t.v_inv.ncols {
                let term = q * &t.v_inv[(i, c)];
                t.v_inv[(j, c)] -= term;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.a.ncols {
            let v = -self.a[(i, c)].clone();
            self.a[(i, c)] = v;
        }
        if let Some(t) = &mut self.t {
            for c in 0..t.u.ncols {
                let v = -t.u[(i, c)].clone();
                t.u[(i, c)] = v;
            }
            for r in 0..t.u_inv.nrows {
                let v = -t.u_inv[(r, i)].clone();
                t.u_inv[(r, i)] = v;
            }
        }
    }
}

/// Smith normal form of an integer matrix. Pivots on the entry of minimal
/// absolute value to limit coefficient growth. With `with_transforms`, the
/// returned `u`, `v` satisfy `u * a * v = diag` and their inverses are
/// provided as computed (not re-derived).
pub fn smith_normal_form(a: &DenseMat, with_transforms: bool) -> SnfResult {
    let mut w = SnfWorker {
        a: a.clone(),
        t: with_transforms.then(|| SnfTransforms {
            u: DenseMat::identity(a.nrows),
            u_inv: DenseMat::identity(a.nrows),
            v: DenseMat::identity(a.ncols),
            v_inv: DenseMat::identity(a.ncols),
        }),
    };
    let (nrows, ncols) = (a.nrows, a.ncols);
    let bound = nrows.min(ncols);
    let mut t = 0;
    while t < bound {
        // minimal |entry| in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if w.a[(i, j)].is_zero() {
                    continue;
                }
                match pivot {
                    Some((pi, pj)) if w.a[(pi, pj)].abs() <= w.a[(i, j)].abs() => {}
                    _ => pivot = Some((i, j)),
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        // clear row and column t; fresh remainders can re-populate, so loop
        loop {
            let mut dirty = false;
            for i in t + 1..nrows {
                if w.a[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&w.a[(i, t)] / &w.a[(t, t)]);
                if !q.is_zero() {
                    w.add_row(i, t, &q);
                }
                if !w.a[(i, t)].is_zero() {
                    // remainder smaller than the pivot: promote it
                    w.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..ncols {
                if w.a[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&w.a[(t, j)] / &w.a[(t, t)]);
                if !q.is_zero() {
                    w.add_col(j, t, &q);
                }
                if !w.a[(t, j)].is_zero() {
                    w.swap_cols(t, j);
                    dirty = true;
                }
            }
            let row_clear = (t + 1..nrows).all(|i| w.a[(i, t)].is_zero());
            let col_clear = (t + 1..ncols).all(|j| w.a[(t, j)].is_zero());
            if !dirty && row_clear && col_clear {
                break;
            }
        }

        // divisibility: the pivot must divide the trailing block
        let mut fixed = true;
        'check: for i in t + 1..nrows {
            for j in t + 1..ncols {
                if (&w.a[(i, j)] % &w.a[(t, t)]).is_zero() {
                    continue;
                }
                let one = BigInt::one();
                w.add_row(t, i, &one);
                fixed = false;
                break 'check;
            }
        }
        if !fixed {
            continue; // redo position t with the spoiled row mixed in
        }
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let diag: Vec<BigInt> = (0..bound)
        .map(|i| w.a[(i, i)].clone())
        .filter(|d| !d.is_zero())
        .collect();
    debug_assert!(diag
        .windows(2)
        .all(|p| (&p[1] % &p[0]).is_zero()));
    SnfResult {
        diag,
        transforms: w.t,
    }
}

/// Dense rank over Q via fraction-free elimination on BigRational.
pub fn rank_over_q(a: &DenseMat) -> usize {
    let mut m: Vec<Vec<BigRational>> = (0..a.nrows)
        .map(|i| (0..a.ncols).map(|j| BigRational::from(a[(i, j)].clone())).collect())
        .collect();
    gauss_rank(&mut m)
}

#[allow(clippy::needless_range_loop)] // elimination reads one row while writing another
fn gauss_rank(m: &mut [Vec<BigRational>]) -> usize {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].recip();
        for v in m[rank][col..].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..nrows {
            if i == rank || m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col].clone();
            for j in col..ncols {
                let term = &factor * &m[rank][j];
                let v = &m[i][j] - term;
                m[i][j] = v;
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Dense rank of a sparse matrix over its own field.
#[allow(clippy::needless_range_loop)]
pub fn rank_over_field(s: &SparseMatrix, ring: &Ring) -> usize {
    assert!(ring.is_field());
    let mut rows: Vec<Vec<Coeff>> = (0..s.nrows())
        .map(|i| {
            let mut row = vec![ring.zero(); s.ncols()];
            for (j, v) in s.row(i) {
                row[*j] = v.clone();
            }
            row
        })
        .collect();
    let nrows = rows.len();
    let ncols = s.ncols();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = ring.inverse(&rows[rank][col]).expect("field");
        for v in rows[rank][col..].iter_mut() {
            *v = ring.mul(v, &inv);
        }
        for i in 0..nrows {
            if i == rank || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col].clone();
            for j in col..ncols {
                let term = ring.mul(&factor, &rows[rank][j]);
                rows[i][j] = ring.sub(&rows[i][j], &term);
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

pub const DEFAULT_ORACLE_CAP: usize = 5000;

/// Homology by the classical dense route: ranks by elimination, torsion by
/// Smith normal form. Supports Z, Q and GF(p); refuses complexes whose total
/// rank exceeds `cap`.
pub fn homology_via_snf(c: &ChainComplex, cap: usize) -> Result<HomologyResult, Error> {
    let total: usize = c.ranks().iter().sum();
    if total > cap {
        return Err(Error::TooLarge { total, cap });
    }
    let n = c.dim();
    let ring = *c.ring();
    match ring {
        Ring::Integers => {
            let snfs: Vec<SnfResult> = (1..=n)
                .map(|k| smith_normal_form(&DenseMat::from_sparse(c.boundary(k)), false))
                .collect();
            let rank_at = |k: usize| -> usize {
                if k >= 1 && k <= n {
                    snfs[k - 1].rank()
                } else {
                    0
                }
            };
            let groups = (0..=n)
                .map(|k| {
                    let torsion: Vec<BigInt> = if k < n {
                        snfs[k]
                            .diag
                            .iter()
                            .filter(|d| !d.is_one())
                            .cloned()
                            .collect()
                    } else {
                        Vec::new()
                    };
                    HomologyGroup {
                        free_rank: c.rank(k) - rank_at(k) - rank_at(k + 1),
                        torsion,
                        generators: None,
                    }
                })
                .collect();
            Ok(HomologyResult { ring, groups })
        }
        Ring::Rationals | Ring::PrimeField(_) => {
            let ranks: Vec<usize> = (1..=n)
                .map(|k| rank_over_field(c.boundary(k), &ring))
                .collect();
            let rank_at = |k: usize| -> usize {
                if k >= 1 && k <= n {
                    ranks[k - 1]
                } else {
                    0
                }
            };
            let groups = (0..=n)
                .map(|k| HomologyGroup {
                    free_rank: c.rank(k) - rank_at(k) - rank_at(k + 1),
                    torsion: Vec::new(),
                    generators: None,
                })
                .collect();
            Ok(HomologyResult { ring, groups })
        }
        Ring::LocalizedIntegers(_) => Err(Error::RingCast {
            from: ring.to_string(),
            to: "oracle (Z, Q or GF(p))".to_string(),
        }),
    }
}
