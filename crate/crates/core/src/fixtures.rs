//! Shipped reference inputs: the trefoil Khovanov complex (as a literal CHC
//! file) and the six-vertex projective plane triangulation, plus small
//! parametrized families that exercise degenerate orderings.

use crate::complex::{complex_from_dense, ChainComplex};
use crate::generators::{simplicial_chain_complex, SimplicialComplex};
use crate::ring::Ring;

pub const TREFOIL_CHC: &str = include_str!("../fixtures/trefoil.chc");
pub const RP2_FACETS: &str = include_str!("../fixtures/rp2.facets");

/// The Khovanov chain complex of the trefoil knot over Z,
/// ranks (4, 6, 12, 8).
pub fn trefoil() -> ChainComplex {
    ChainComplex::from_chc_str(TREFOIL_CHC).expect("shipped fixture parses")
}

/// The six-vertex triangulation of the real projective plane.
pub fn rp2_complex() -> SimplicialComplex {
    SimplicialComplex::from_facets_text(RP2_FACETS).expect("shipped fixture parses")
}

/// Simplicial chain complex of RP^2 with the lexicographic basis order,
/// ranks (6, 15, 10).
pub fn rp2_lex() -> ChainComplex {
    simplicial_chain_complex(&rp2_complex())
}

/// RP^2 with the alternative basis order under which a single steepness pass
/// reaches the optimal three critical simplices.
pub fn rp2_second_order() -> ChainComplex {
    let mut c = rp2_lex();
    // vertex order a,b,d,c,e,f
    c.permute_degree(0, &[0, 1, 3, 2, 4, 5]);
    // edge order ab,ad,bd,ac,cd,ae,be,bc,ce,de,af,cf,bf,df,ef
    c.permute_degree(1, &[0, 2, 6, 1, 9, 3, 7, 5, 10, 12, 4, 11, 8, 13, 14]);
    // triangle order abd,acd,abe,bce,cde,acf,bcf,bdf,aef,def
    c.permute_degree(2, &[0, 2, 1, 5, 8, 3, 6, 7, 4, 9]);
    c
}

/// The m x n fill-in family in its worst ordering: first column and last row
/// all ones. One matched pair, dense reduced matrix.
pub fn fill_in_family_a(m: usize, n: usize) -> ChainComplex {
    let mut mat = vec![vec![0i64; n]; m];
    for row in mat.iter_mut() {
        row[0] = 1;
    }
    for v in mat[m - 1].iter_mut() {
        *v = 1;
    }
    complex_from_dense(Ring::Integers, &[mat])
}

/// Same family after swapping first/last row and first/last column; reduces
/// with no fill-in at all.
pub fn fill_in_family_c(m: usize, n: usize) -> ChainComplex {
    let mut c = fill_in_family_a(m, n);
    let mut rows: Vec<usize> = (0..m).collect();
    rows.swap(0, m - 1);
    c.permute_degree(0, &rows);
    let mut cols: Vec<usize> = (0..n).collect();
    cols.swap(0, n - 1);
    c.permute_degree(1, &cols);
    c
}

/// The staircase of ones whose steepness matching has a single pair until
/// the column order is reversed: row i holds ones at columns n-i and n-i+1
/// (1-based), the last row a single one at column 1.
pub fn staircase_family(n: usize) -> ChainComplex {
    assert!(n >= 2);
    let mut mat = vec![vec![0i64; n]; n];
    for i in 0..n - 1 {
        mat[i][n - 2 - i] = 1;
        mat[i][n - 1 - i] = 1;
    }
    mat[n - 1][0] = 1;
    complex_from_dense(Ring::Integers, &[mat])
}
