//! Shared corpus builders for the integration suites: random simplicial
//! complexes, scrambled block complexes with known torsion, and random valid
//! Morse matchings. Everything is seeded for reproducibility.

// each test binary uses its own subset of these helpers
#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use num::{BigInt, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use steepness::complex::complex_from_dense;
use steepness::generators::{simplicial_chain_complex, SimplicialComplex};
use steepness::matching::{validate_morse_matching, Matching};
use steepness::{ChainComplex, Ring};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random facet list on at most `max_vertices` vertices, as its integral
/// chain complex.
pub fn random_simplicial(rng: &mut ChaCha8Rng, max_vertices: usize) -> ChainComplex {
    let n = rng.gen_range(1..=max_vertices);
    let nfacets = rng.gen_range(1..=6);
    let mut facets = Vec::with_capacity(nfacets);
    for _ in 0..nfacets {
        let size = rng.gen_range(1..=n);
        let mut verts: Vec<u32> = (0..n as u32).collect();
        verts.shuffle(rng);
        verts.truncate(size);
        facets.push(verts);
    }
    let labels = (0..n).map(|i| format!("v{i}")).collect();
    let k = SimplicialComplex::from_facets(labels, facets).expect("random facets are valid");
    simplicial_chain_complex(&k)
}

/// Known homology of a constructed complex: free ranks and torsion
/// multisets per degree.
pub struct KnownHomology {
    pub free: Vec<usize>,
    pub torsion: Vec<Vec<BigInt>>,
}

type DenseI64 = Vec<Vec<i64>>;

fn mat_mul(a: &DenseI64, b: &DenseI64) -> DenseI64 {
    let (n, m, p) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![0i64; p]; n];
    for i in 0..n {
        for k in 0..m {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..p {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// A random unimodular matrix and its inverse, as a short product of
/// elementary operations with small coefficients.
fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> (DenseI64, DenseI64) {
    let mut u = vec![vec![0i64; n]; n];
    let mut u_inv = u.clone();
    for i in 0..n {
        u[i][i] = 1;
        u_inv[i][i] = 1;
    }
    if n < 2 {
        return (u, u_inv);
    }
    // each op E multiplies u on the left, so its inverse multiplies u_inv
    // on the right, i.e. acts on columns
    for _ in 0..2 * n {
        match rng.gen_range(0..3) {
            0 => {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(0..n);
                u.swap(i, j);
                for row in &mut u_inv {
                    row.swap(i, j);
                }
            }
            1 => {
                let i = rng.gen_range(0..n);
                for v in &mut u[i] {
                    *v = -*v;
                }
                for row in &mut u_inv {
                    row[i] = -row[i];
                }
            }
            _ => {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n);
                if i == j {
                    j = (j + 1) % n;
                }
                let c = *[-1i64, 1].choose(rng).unwrap();
                for k in 0..n {
                    u[i][k] += c * u[j][k];
                }
                for row in &mut u_inv {
                    let t = c * row[i];
                    row[j] -= t;
                }
            }
        }
    }
    debug_assert!({
        let prod = mat_mul(&u, &u_inv);
        prod.iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &v)| v == i64::from(i == j)))
    });
    (u, u_inv)
}

/// Build a complex with prescribed homology: block-diagonal boundaries with
/// chosen elementary divisors, then scrambled by unimodular basis changes in
/// every degree.
pub fn random_torsion_complex(rng: &mut ChaCha8Rng) -> (ChainComplex, KnownHomology) {
    let n_deg = rng.gen_range(1..=3);
    let mut sources = vec![0usize; n_deg + 1];
    let mut homology = vec![0usize; n_deg + 1];
    for k in 0..=n_deg {
        if k >= 1 {
            sources[k] = rng.gen_range(0..=2);
        }
        homology[k] = rng.gen_range(0..=2);
    }
    let targets = |k: usize| if k < n_deg { sources[k + 1] } else { 0 };
    let mut ranks: Vec<usize> = (0..=n_deg)
        .map(|k| targets(k) + homology[k] + sources[k])
        .collect();
    // keep every degree inhabited so the complex stays well-formed
    for (k, r) in ranks.iter_mut().enumerate() {
        if *r == 0 {
            *r = 1;
            homology[k] += 1;
        }
    }
    let divisor_pool = [1i64, 1, 2, 2, 3, 4, 5, 6, 12];
    let divisors: Vec<Vec<i64>> = (0..=n_deg)
        .map(|k| {
            (0..sources[k])
                .map(|_| *divisor_pool.choose(rng).unwrap())
                .collect()
        })
        .collect();

    let mut mats: Vec<DenseI64> = Vec::with_capacity(n_deg);
    for k in 1..=n_deg {
        let mut m = vec![vec![0i64; ranks[k]]; ranks[k - 1]];
        for j in 0..sources[k] {
            m[j][ranks[k] - sources[k] + j] = divisors[k][j];
        }
        mats.push(m);
    }
    let bases: Vec<(DenseI64, DenseI64)> = ranks
        .iter()
        .map(|&r| random_unimodular(rng, r))
        .collect();
    for k in 1..=n_deg {
        mats[k - 1] = mat_mul(&mat_mul(&bases[k - 1].1, &mats[k - 1]), &bases[k].0);
    }

    let complex = complex_from_dense(Ring::Integers, &mats);
    assert!(complex.validate().is_ok(), "construction must compose to zero");
    let known = KnownHomology {
        free: homology.clone(),
        torsion: (0..=n_deg)
            .map(|k| {
                let mut t: Vec<BigInt> = if k < n_deg {
                    divisors[k + 1]
                        .iter()
                        .filter(|&&d| d > 1)
                        .map(|&d| BigInt::from(d))
                        .collect()
                } else {
                    Vec::new()
                };
                t.sort();
                t
            })
            .collect(),
    };
    (complex, known)
}

/// A random valid Morse matching, grown greedily from shuffled unit entries
/// with the full validator as the acceptance check.
pub fn random_morse_matching(rng: &mut ChaCha8Rng, c: &ChainComplex) -> Matching {
    let ring = c.ring();
    let mut candidates = Vec::new();
    for k in 1..=c.dim() {
        for (u, v, w) in c.boundary(k).iter() {
            if ring.is_unit(w) {
                candidates.push((k, u, v, w.clone()));
            }
        }
    }
    candidates.shuffle(rng);
    let mut per_degree = vec![Vec::new(); c.dim()];
    for (k, u, v, w) in candidates {
        per_degree[k - 1].push((u, v, w));
        let trial = Matching::new(per_degree.clone());
        if validate_morse_matching(c, &trial).is_err() {
            per_degree[k - 1].pop();
        }
    }
    Matching::new(per_degree)
}

/// Canonicalize a torsion multiset to sorted prime powers, so invariant
/// factors and elementary divisors of the same group compare equal. Factors
/// here are small by construction; trial division is plenty.
pub fn elementary_divisors(torsion: &[BigInt]) -> Vec<BigInt> {
    let mut out = Vec::new();
    for d in torsion {
        let mut rest = d.clone();
        let mut p = BigInt::from(2);
        while &p * &p <= rest {
            let mut e = 0u32;
            loop {
                use num::Integer;
                let (q, r) = rest.div_rem(&p);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                e += 1;
            }
            if e > 0 {
                out.push(p.pow(e));
            }
            p += 1;
        }
        if rest > BigInt::from(1) {
            out.push(rest);
        }
    }
    out.sort();
    out
}

/// The p-part of a torsion multiset: one `p^v` per factor with positive
/// valuation, sorted.
pub fn p_part(torsion: &[BigInt], p: u64) -> Vec<BigInt> {
    use num::Integer;
    let p = BigInt::from(p);
    let mut out = Vec::new();
    for d in torsion {
        let mut e = 0u32;
        let mut rest = d.clone();
        loop {
            let (q, r) = rest.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            out.push(p.pow(e));
        }
    }
    out.sort();
    out
}

