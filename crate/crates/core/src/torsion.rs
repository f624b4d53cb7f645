//! Homology extraction on top of the reduction pipeline: directly over a
//! field, by the iterated divide-and-reduce procedure over the p-local
//! integers, and over Z by finishing the small residual complex with a
//! dense Smith normal form.

use num::{BigInt, BigRational, Integer, One, Zero};
use serde::Serialize;

use crate::complex::ChainComplex;
use crate::error::Error;
use crate::matrix::SparseMatrix;
use crate::oracle::{smith_normal_form, DenseMat};
use crate::reduction::{reduce_fully, reduce_until_no_units};
use crate::ring::{Coeff, Ring};

/// A chain in the original basis: sparse `(index, coefficient)` pairs,
/// ascending, 0-based internally.
pub type Chain = Vec<(usize, Coeff)>;

#[derive(Clone, Debug)]
pub struct HomologyGroup {
    pub free_rank: usize,
    /// Torsion coefficients, each at least 2: prime powers from the p-local
    /// route, arbitrary invariant factors from the SNF finisher.
    pub torsion: Vec<BigInt>,
    /// Free generators first, then torsion representatives aligned with
    /// `torsion`. All are cycles of the original complex.
    pub generators: Option<Vec<Chain>>,
}

#[derive(Clone, Debug)]
pub struct HomologyResult {
    pub ring: Ring,
    pub groups: Vec<HomologyGroup>,
}

impl HomologyResult {
    pub fn betti(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.free_rank).collect()
    }

    /// Structural equality ignoring generators; torsion compared as
    /// multisets.
    pub fn same_groups(&self, other: &HomologyResult) -> bool {
        self.groups.len() == other.groups.len()
            && self.groups.iter().zip(&other.groups).all(|(a, b)| {
                let mut ta = a.torsion.clone();
                let mut tb = b.torsion.clone();
                ta.sort();
                tb.sort();
                a.free_rank == b.free_rank && ta == tb
            })
    }
}

/// Homology of a complex over Q or GF(p): reduce until every boundary is
/// zero; the surviving ranks are the Betti numbers and the columns of the
/// accumulated comparison map are homology generators.
pub fn homology_over_field(c: &ChainComplex, want_generators: bool) -> Result<HomologyResult, Error> {
    let ring = *c.ring();
    if !ring.is_field() {
        return Err(Error::RingCast {
            from: ring.to_string(),
            to: "a field (Q or GF(p))".to_string(),
        });
    }
    let r = reduce_fully(c, &crate::ordering::ReorderSchedule::none(), want_generators, false)?;
    debug_assert!(
        r.reduced.boundaries().iter().all(SparseMatrix::is_zero),
        "over a field the steepness matching only stalls at zero"
    );
    let groups = (0..=c.dim())
        .map(|k| HomologyGroup {
            free_rank: r.reduced.rank(k),
            torsion: Vec::new(),
            generators: r.f.as_ref().map(|f| {
                (0..f[k].ncols()).map(|j| f[k].col(j).to_vec()).collect()
            }),
        })
        .collect();
    Ok(HomologyResult { ring, groups })
}

pub const DEFAULT_RESIDUAL_CAP: usize = 2000;

/// Integral homology: exhaust unit entries by reduction, then hand the
/// small residual boundaries to the dense Smith normal form. Free
/// generators and torsion representatives are residual chains pushed back
/// through the accumulated comparison map.
pub fn integer_homology(
    c: &ChainComplex,
    want_generators: bool,
    residual_cap: usize,
) -> Result<HomologyResult, Error> {
    if *c.ring() != Ring::Integers {
        return Err(Error::RingCast {
            from: c.ring().to_string(),
            to: Ring::Integers.to_string(),
        });
    }
    let r = reduce_until_no_units(c, want_generators)?;
    let residual = &r.reduced;
    check_residual_cap(residual, residual_cap)?;
    let dense: Vec<DenseMat> = (1..=residual.dim())
        .map(|k| DenseMat::from_sparse(residual.boundary(k)))
        .collect();
    let local = residual_homology(&dense, residual.ranks(), want_generators);
    let groups = local
        .into_iter()
        .enumerate()
        .map(|(k, h)| {
            let generators = want_generators.then(|| {
                let f = &r.f.as_ref().expect("f accumulated")[k];
                let ring = Ring::Integers;
                let free = h.free_gens.unwrap_or_default();
                let tors = h.torsion_gens.unwrap_or_default();
                free.into_iter()
                    .chain(tors.into_iter().map(|(_, v)| v))
                    .map(|vec| push_through(f, &vec, &ring))
                    .collect()
            });
            HomologyGroup {
                free_rank: h.free_rank,
                torsion: h.torsion,
                generators,
            }
        })
        .collect();
    Ok(HomologyResult {
        ring: Ring::Integers,
        groups,
    })
}

/// Free part and p-torsion of the integral homology, computed entirely over
/// the p-local integers: reduce until only non-units survive, divide out
/// the common power of p, and repeat; pairs matched after `i` divisions of
/// exponents `a_1..a_i` at degree `k+1` contribute `Z/p^(a_1+..+a_i)`
/// summands to degree `k`.
pub fn p_local_homology(c: &ChainComplex, p: u64, want_generators: bool) -> Result<HomologyResult, Error> {
    let ring = Ring::localized(p)?;
    let mut cur = c.into_ring(ring)?;
    let n = cur.dim();

    let mut f_acc: Option<Vec<SparseMatrix>> = want_generators.then(|| {
        cur.ranks()
            .iter()
            .map(|&r| SparseMatrix::identity(r, &ring))
            .collect()
    });
    let mut stage0: Option<(Vec<SparseMatrix>, ChainComplex)> = None;

    // matched counts per stage (summed over its passes), and the cumulative
    // exponent a_1 + .. + a_s in force during each stage
    let mut stage_counts: Vec<Vec<usize>> = Vec::new();
    let mut stage_exponents: Vec<u32> = Vec::new();
    let mut cumulative = 0u32;

    loop {
        let r = reduce_until_no_units(&cur, want_generators)?;
        let mut counts = vec![0usize; n];
        for pass in &r.matched_counts {
            for (k, m) in pass.iter().enumerate() {
                counts[k] += m;
            }
        }
        stage_counts.push(counts);
        stage_exponents.push(cumulative);
        if let (Some(acc), Some(step)) = (&mut f_acc, &r.f) {
            for k in 0..=n {
                acc[k] = acc[k].mul(&step[k], &ring)?;
            }
        }
        cur = r.reduced;
        if stage0.is_none() {
            stage0 = Some((f_acc.clone().unwrap_or_default(), cur.clone()));
        }
        if cur.total_entries() == 0 {
            break;
        }
        let a = cur
            .boundaries()
            .iter()
            .flat_map(|b| b.iter())
            .map(|(_, _, v)| ring.valuation(p, v))
            .min()
            .expect("entries present");
        assert!(a >= 1, "residual without units must be divisible by p");
        cumulative += a;
        let boundaries = cur
            .boundaries()
            .iter()
            .map(|b| b.map_ring(&ring, |v| Ok(ring.divide_pow(p, a, v))))
            .collect::<Result<Vec<_>, _>>()?;
        cur = ChainComplex::new(ring, cur.ranks().to_vec(), boundaries)?;
    }

    let torsion_per_degree: Vec<Vec<BigInt>> = (0..=n)
        .map(|k| {
            let mut t = Vec::new();
            for (s, counts) in stage_counts.iter().enumerate().skip(1) {
                if k < n && counts[k] > 0 {
                    let order = BigInt::from(p).pow(stage_exponents[s]);
                    t.extend(std::iter::repeat_n(order, counts[k]));
                }
            }
            t.sort();
            t
        })
        .collect();

    let generators: Vec<Option<Vec<Chain>>> = if want_generators {
        let (stage0_f, stage0_res) = stage0.expect("at least one stage ran");
        let torsion_reps = p_local_torsion_reps(&stage0_res, &stage0_f, p)?;
        let f_final = f_acc.as_ref().unwrap();
        (0..=n)
            .map(|k| {
                let free: Vec<Chain> =
                    (0..f_final[k].ncols()).map(|j| f_final[k].col(j).to_vec()).collect();
                let mut reps = torsion_reps[k].clone();
                // align representative order with the sorted torsion list
                reps.sort_by(|a, b| a.0.cmp(&b.0));
                debug_assert_eq!(
                    reps.iter().map(|(o, _)| o.clone()).collect::<Vec<_>>(),
                    torsion_per_degree[k],
                    "SNF route must reproduce the matched-pair torsion"
                );
                Some(free.into_iter().chain(reps.into_iter().map(|(_, c)| c)).collect())
            })
            .collect()
    } else {
        vec![None; n + 1]
    };

    let groups = (0..=n)
        .zip(torsion_per_degree)
        .zip(generators)
        .map(|((k, torsion), generators)| HomologyGroup {
            free_rank: cur.rank(k),
            torsion,
            generators,
        })
        .collect();
    Ok(HomologyResult { ring, groups })
}

fn check_residual_cap(residual: &ChainComplex, cap: usize) -> Result<(), Error> {
    for k in 1..=residual.dim() {
        let b = residual.boundary(k);
        if b.nrows() > cap || b.ncols() > cap {
            return Err(Error::ResidualTooLarge {
                k,
                rows: b.nrows(),
                cols: b.ncols(),
                cap,
            });
        }
    }
    Ok(())
}

/// Apply a sparse comparison map to a dense residual vector, producing a
/// chain in the original basis.
fn push_through(f: &SparseMatrix, vec: &[BigInt], ring: &Ring) -> Chain {
    let mut acc: Vec<Coeff> = vec![ring.zero(); f.nrows()];
    for (j, w) in vec.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        let scale = ring.from_bigint(w.clone());
        for (i, v) in f.col(j) {
            let term = ring.mul(v, &scale);
            ring.add_assign(&mut acc[*i], &term);
        }
    }
    acc.into_iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .collect()
}

struct ResidualGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
    free_gens: Option<Vec<Vec<BigInt>>>,
    torsion_gens: Option<Vec<(BigInt, Vec<BigInt>)>>,
}

/// Homology of a small integral complex given densely, with generator
/// vectors on demand. Kernel bases come from the SNF of the outgoing
/// boundary; the incoming boundary is rewritten in kernel coordinates and
/// diagonalized, so its cokernel basis is explicit.
fn residual_homology(matrices: &[DenseMat], ranks: &[usize], want_gens: bool) -> Vec<ResidualGroup> {
    let n = ranks.len() - 1;
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let m = ranks[k];
        // kernel of the outgoing boundary d_k
        let (kernel_basis, v_inv, r_b) = if k == 0 {
            (DenseMat::identity(m), DenseMat::identity(m), 0)
        } else {
            let b = &matrices[k - 1];
            let snf = smith_normal_form(b, true);
            let t = snf.transforms.unwrap();
            let rank = snf.diag.len();
            // kernel = trailing columns of V
            let mut kb = DenseMat::zeros(m, m - rank);
            for i in 0..m {
                for j in rank..m {
                    kb[(i, j - rank)] = t.v[(i, j)].clone();
                }
            }
            (kb, t.v_inv, rank)
        };
        let kdim = m - r_b;

        // incoming boundary in kernel coordinates
        let n_a = if k < n { matrices[k].ncols } else { 0 };
        let mut a_tilde = DenseMat::zeros(kdim, n_a);
        if k < n {
            let full = v_inv.mul(&matrices[k]);
            for i in 0..r_b {
                for j in 0..n_a {
                    debug_assert!(full[(i, j)].is_zero(), "image must lie in the kernel");
                }
            }
            for i in 0..kdim {
                for j in 0..n_a {
                    a_tilde[(i, j)] = full[(i + r_b, j)].clone();
                }
            }
        }
        let snf_a = smith_normal_form(&a_tilde, want_gens);
        let s = snf_a.diag.len();
        let torsion: Vec<BigInt> = snf_a.diag.iter().filter(|d| !d.is_one()).cloned().collect();

        let (free_gens, torsion_gens) = if want_gens {
            let u_inv = snf_a
                .transforms
                .map(|t| t.u_inv)
                .unwrap_or_else(|| DenseMat::identity(kdim));
            let w = kernel_basis.mul(&u_inv);
            let column = |j: usize| -> Vec<BigInt> { (0..m).map(|i| w[(i, j)].clone()).collect() };
            let mut free = Vec::new();
            let mut tors = Vec::new();
            for j in 0..kdim {
                if j >= s {
                    free.push(column(j));
                } else if !snf_a.diag[j].is_one() {
                    tors.push((snf_a.diag[j].clone(), column(j)));
                }
            }
            (Some(free), Some(tors))
        } else {
            (None, None)
        };

        out.push(ResidualGroup {
            free_rank: kdim - s,
            torsion,
            free_gens,
            torsion_gens,
        });
    }
    out
}

/// Torsion representatives for the p-local route, extracted from the
/// residual complex left after the first exhaustion stage. The residual is
/// rescaled by p-free denominators to an integral complex, diagonalized,
/// and the representatives are pushed back through the stage-0 comparison
/// map. Returns per degree `(order, chain)` pairs.
fn p_local_torsion_reps(
    residual: &ChainComplex,
    stage0_f: &[SparseMatrix],
    p: u64,
) -> Result<Vec<Vec<(BigInt, Chain)>>, Error> {
    let n = residual.dim();
    let ring = *residual.ring();
    // column rescale making every matrix integral; scalars stay coprime to p
    let mut scales: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    scales.push(vec![BigInt::one(); residual.rank(0)]);
    let mut dense: Vec<DenseMat> = Vec::with_capacity(n);
    for k in 1..=n {
        let b = residual.boundary(k);
        let mut rescaled: Vec<Vec<BigRational>> =
            vec![vec![BigRational::zero(); b.ncols()]; b.nrows()];
        for (i, j, v) in b.iter() {
            let Coeff::Rat(q) = v else { unreachable!() };
            rescaled[i][j] = q / BigRational::from(scales[k - 1][i].clone());
        }
        let mut col_scale = vec![BigInt::one(); b.ncols()];
        for j in 0..b.ncols() {
            for row in rescaled.iter() {
                col_scale[j] = col_scale[j].lcm(row[j].denom());
            }
        }
        let mut d = DenseMat::zeros(b.nrows(), b.ncols());
        for i in 0..b.nrows() {
            for j in 0..b.ncols() {
                let v = &rescaled[i][j] * BigRational::from(col_scale[j].clone());
                debug_assert!(v.denom().is_one());
                d[(i, j)] = v.numer().clone();
            }
        }
        dense.push(d);
        scales.push(col_scale);
    }

    let groups = residual_homology(&dense, residual.ranks(), true);
    let p_big = BigInt::from(p);
    let mut out = Vec::with_capacity(n + 1);
    for (k, g) in groups.into_iter().enumerate() {
        let mut reps = Vec::new();
        for (order, vec) in g.torsion_gens.unwrap_or_default() {
            // only the p-part survives localization
            let mut e = 0u32;
            let mut rest = order.clone();
            loop {
                let (q, r) = rest.div_rem(&p_big);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                e += 1;
            }
            if e == 0 {
                continue;
            }
            // undo the rescale, then map into the original basis
            let unscaled: Vec<BigInt> = vec
                .iter()
                .zip(&scales[k])
                .map(|(w, s)| w * s)
                .collect();
            let chain = push_through(&stage0_f[k], &unscaled, &ring);
            reps.push((p_big.pow(e), chain));
        }
        out.push(reps);
    }
    Ok(out)
}

#[derive(Serialize)]
struct GroupJson {
    k: usize,
    free: usize,
    torsion: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<ChainJson>>,
}

#[derive(Serialize)]
struct ChainJson {
    coeffs: Vec<(usize, String)>,
}

impl HomologyResult {
    pub fn to_json(&self) -> String {
        let groups: Vec<GroupJson> = self
            .groups
            .iter()
            .enumerate()
            .map(|(k, g)| GroupJson {
                k,
                free: g.free_rank,
                torsion: g.torsion.iter().map(BigInt::to_string).collect(),
                generators: g.generators.as_ref().map(|gens| {
                    gens.iter()
                        .map(|chain| ChainJson {
                            coeffs: chain.iter().map(|(i, v)| (i + 1, v.to_string())).collect(),
                        })
                        .collect()
                }),
            })
            .collect();
        serde_json::json!({
            "ring": self.ring.to_string(),
            "homology": groups,
        })
        .to_string()
    }

    pub fn to_text(&self) -> String {
        let free_symbol = match self.ring {
            Ring::Integers => "Z".to_string(),
            Ring::Rationals => "Q".to_string(),
            Ring::PrimeField(p) => format!("GF({p})"),
            Ring::LocalizedIntegers(p) => format!("Z_({p})"),
        };
        self.groups
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let mut parts = Vec::new();
                match g.free_rank {
                    0 => {}
                    1 => parts.push(free_symbol.clone()),
                    r => parts.push(format!("{free_symbol}^{r}")),
                }
                for t in &g.torsion {
                    parts.push(format!("Z/{t}"));
                }
                let rhs = if parts.is_empty() {
                    "0".to_string()
                } else {
                    parts.join(" + ")
                };
                format!("H_{k} = {rhs}")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Exact check that every listed generator is a cycle.
pub fn generators_are_cycles(c: &ChainComplex, h: &HomologyResult) -> bool {
    let ring = c.ring();
    for (k, g) in h.groups.iter().enumerate() {
        let Some(gens) = &g.generators else { continue };
        if k == 0 {
            continue;
        }
        let b = c.boundary(k);
        for chain in gens {
            let mut acc: Vec<Coeff> = vec![ring.zero(); b.nrows()];
            for (j, w) in chain {
                for (i, v) in b.col(*j) {
                    let term = ring.mul(v, w);
                    ring.add_assign(&mut acc[*i], &term);
                }
            }
            if acc.iter().any(|v| !v.is_zero()) {
                return false;
            }
        }
    }
    true
}
