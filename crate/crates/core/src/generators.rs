//! Input families: simplicial complexes (from facet lists or as
//! independence/chessboard complexes of graphs) and Chevalley complexes of
//! Lie algebras, all emitted as validated integer chain complexes.
//!
//! Face enumeration is streamed degree by degree so only two consecutive
//! face lists are ever held alongside the growing complex.

use std::collections::{BTreeSet, HashMap};

use crate::complex::ChainComplex;
use crate::error::Error;
use crate::matrix::SparseMatrix;
use crate::ring::Ring;
use crate::util::par_map_range;

/// Fixed-size bitset over vertex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new(n: usize) -> Self {
        BitSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn and(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    fn and_not(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & !b)
                .collect(),
        }
    }

    fn iter_bits(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }
}

/// Undirected simple graph on indexed vertices, adjacency as bitsets.
#[derive(Clone, Debug)]
pub struct Graph {
    pub n: usize,
    adj: Vec<BitSet>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: vec![BitSet::new(n); n],
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n);
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub fn path(n: usize) -> (Graph, Vec<String>) {
        let mut g = Graph::new(n);
        for i in 0..n.saturating_sub(1) {
            g.add_edge(i, i + 1);
        }
        (g, (1..=n).map(|i| i.to_string()).collect())
    }

    pub fn cycle(n: usize) -> (Graph, Vec<String>) {
        assert!(n >= 3);
        let (mut g, labels) = Graph::path(n);
        g.add_edge(n - 1, 0);
        (g, labels)
    }

    pub fn complete(n: usize) -> (Graph, Vec<String>) {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        (g, (1..=n).map(|i| i.to_string()).collect())
    }

    /// The d-dimensional hypercube graph: binary words, edges at Hamming
    /// distance one.
    pub fn hypercube(d: u32) -> (Graph, Vec<String>) {
        let n = 1usize << d;
        let mut g = Graph::new(n);
        for v in 0..n {
            for bit in 0..d {
                let w = v ^ (1 << bit);
                if w > v {
                    g.add_edge(v, w);
                }
            }
        }
        let labels = (0..n)
            .map(|v| {
                (0..d)
                    .rev()
                    .map(|bit| if v >> bit & 1 == 1 { '1' } else { '0' })
                    .collect()
            })
            .collect();
        (g, labels)
    }

    /// Kneser graph: k-subsets of an n-set, adjacent when disjoint.
    pub fn kneser(n: u32, k: u32) -> (Graph, Vec<String>) {
        let subsets: Vec<u32> = (0u32..1 << n).filter(|s| s.count_ones() == k).collect();
        let mut g = Graph::new(subsets.len());
        for a in 0..subsets.len() {
            for b in a + 1..subsets.len() {
                if subsets[a] & subsets[b] == 0 {
                    g.add_edge(a, b);
                }
            }
        }
        let labels = subsets
            .iter()
            .map(|s| {
                let elems: Vec<String> =
                    (0..n).filter(|i| s >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
                elems.join("_")
            })
            .collect();
        (g, labels)
    }

    /// Parse "u v" edge lines; vertex labels are arbitrary tokens, indexed
    /// in sorted label order.
    pub fn from_edge_list_text(text: &str) -> Result<(Graph, Vec<String>), Error> {
        let mut labels: BTreeSet<String> = BTreeSet::new();
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let (Some(u), Some(v), None) = (it.next(), it.next(), it.next()) else {
                return Err(Error::parse(format!(
                    "line {}: expected `u v`, got {line:?}",
                    lineno + 1
                )));
            };
            if u == v {
                return Err(Error::parse(format!("line {}: loop edge", lineno + 1)));
            }
            labels.insert(u.to_string());
            labels.insert(v.to_string());
            edges.push((u.to_string(), v.to_string()));
        }
        let labels: Vec<String> = labels.into_iter().collect();
        let index: HashMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let mut g = Graph::new(labels.len());
        for (u, v) in &edges {
            g.add_edge(index[u.as_str()], index[v.as_str()]);
        }
        Ok((g, labels))
    }
}

/// A finite simplicial complex given by its facets. When the complex is a
/// flag complex (faces = cliques of a compatibility graph), the graph is
/// kept and face enumeration runs directly on it instead of through the
/// facet lists.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    vertex_labels: Vec<String>,
    facets: Vec<Vec<u32>>,
    flag: Option<Graph>,
}

impl SimplicialComplex {
    /// From explicit facets; non-maximal entries and duplicates are pruned.
    pub fn from_facets(vertex_labels: Vec<String>, mut facets: Vec<Vec<u32>>) -> Result<Self, Error> {
        if facets.is_empty() {
            return Err(Error::parse("a simplicial complex needs at least one facet"));
        }
        for f in &mut facets {
            f.sort_unstable();
            if f.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::parse("facet with a repeated vertex"));
            }
            if f.iter().any(|&v| v as usize >= vertex_labels.len()) {
                return Err(Error::parse("facet vertex out of range"));
            }
        }
        facets.sort_by_key(|f| std::cmp::Reverse(f.len()));
        let mut kept: Vec<Vec<u32>> = Vec::new();
        for f in facets {
            let dominated = kept
                .iter()
                .any(|g| f.iter().all(|v| g.binary_search(v).is_ok()));
            if !dominated {
                kept.push(f);
            }
        }
        kept.sort();
        Ok(SimplicialComplex {
            vertex_labels,
            facets: kept,
            flag: None,
        })
    }

    /// Parse the facet file format: one facet per line, whitespace-separated
    /// vertex labels. Vertices are ordered by sorted label.
    pub fn from_facets_text(text: &str) -> Result<Self, Error> {
        let mut labels: BTreeSet<String> = BTreeSet::new();
        let mut raw: Vec<Vec<String>> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let verts: Vec<String> = line.split_whitespace().map(str::to_string).collect();
            labels.extend(verts.iter().cloned());
            raw.push(verts);
        }
        let labels: Vec<String> = labels.into_iter().collect();
        let index: HashMap<&str, u32> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i as u32))
            .collect();
        let facets = raw
            .into_iter()
            .map(|f| f.iter().map(|v| index[v.as_str()]).collect())
            .collect();
        SimplicialComplex::from_facets(labels, facets)
    }

    fn from_flag_graph(vertex_labels: Vec<String>, compat: Graph) -> Self {
        let facets = max_cliques(&compat);
        SimplicialComplex {
            vertex_labels,
            facets,
            flag: Some(compat),
        }
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    pub fn facets(&self) -> &[Vec<u32>] {
        &self.facets
    }

    pub fn dim(&self) -> usize {
        self.facets.iter().map(Vec::len).max().unwrap_or(1) - 1
    }

    /// All d-dimensional faces ((d+1)-element faces), lexicographically
    /// sorted.
    pub fn faces_of_dim(&self, d: usize) -> Vec<Vec<u32>> {
        let size = d + 1;
        match &self.flag {
            Some(g) => cliques_of_size(g, size),
            None => {
                let mut out: BTreeSet<Vec<u32>> = BTreeSet::new();
                for f in &self.facets {
                    if f.len() < size {
                        continue;
                    }
                    for sub in k_subsets(f, size) {
                        out.insert(sub);
                    }
                }
                out.into_iter().collect()
            }
        }
    }
}

/// All cliques of exactly `size` vertices, in lexicographic order.
fn cliques_of_size(g: &Graph, size: usize) -> Vec<Vec<u32>> {
    if size == 0 || size > g.n {
        return Vec::new();
    }
    let chunks = par_map_range(g.n, |v| {
        let mut out = Vec::new();
        let mut cand = g.adj[v].clone();
        for w in 0..=v {
            cand.remove(w);
        }
        let mut cur = vec![v as u32];
        clique_dfs(g, &mut cur, &cand, size, &mut out);
        out
    });
    chunks.into_iter().flatten().collect()
}

fn clique_dfs(g: &Graph, cur: &mut Vec<u32>, cand: &BitSet, size: usize, out: &mut Vec<Vec<u32>>) {
    if cur.len() == size {
        out.push(cur.clone());
        return;
    }
    if cur.len() + cand.count() < size {
        return;
    }
    for w in cand.iter_bits() {
        let mut next = cand.and(&g.adj[w]);
        for lo in cand.iter_bits() {
            if lo > w {
                break;
            }
            next.remove(lo);
        }
        cur.push(w as u32);
        clique_dfs(g, cur, &next, size, out);
        cur.pop();
    }
}

/// Maximal cliques via Bron-Kerbosch with pivoting, sorted.
fn max_cliques(g: &Graph) -> Vec<Vec<u32>> {
    fn bk(g: &Graph, r: &mut Vec<u32>, p: BitSet, mut x: BitSet, out: &mut Vec<Vec<u32>>) {
        if p.is_empty() && x.is_empty() {
            let mut clique = r.clone();
            clique.sort_unstable();
            out.push(clique);
            return;
        }
        let pivot = p
            .iter_bits()
            .chain(x.iter_bits())
            .max_by_key(|&u| p.and(&g.adj[u]).count())
            .expect("nonempty p or x");
        let mut p = p;
        let candidates: Vec<usize> = p.and_not(&g.adj[pivot]).iter_bits().collect();
        for v in candidates {
            r.push(v as u32);
            bk(g, r, p.and(&g.adj[v]), x.and(&g.adj[v]), out);
            r.pop();
            p.remove(v);
            x.insert(v);
        }
    }
    let mut all = BitSet::new(g.n);
    for v in 0..g.n {
        all.insert(v);
    }
    let mut out = Vec::new();
    bk(g, &mut Vec::new(), all, BitSet::new(g.n), &mut out);
    out.sort();
    out
}

fn k_subsets(set: &[u32], k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| set[i]).collect());
        // advance the index vector
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + set.len() - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// The independence complex of a graph: faces are the independent vertex
/// sets, facets the maximal ones.
pub fn independence_complex(g: &Graph, labels: Vec<String>) -> SimplicialComplex {
    assert_eq!(labels.len(), g.n);
    SimplicialComplex::from_flag_graph(labels, g.complement())
}

/// The m x n chessboard complex: squares as vertices, faces are
/// non-attacking rook placements (at most one per row and per column).
pub fn chessboard_complex(m: usize, n: usize) -> SimplicialComplex {
    assert!(m >= 1 && n >= 1);
    let total = m * n;
    let mut compat = Graph::new(total);
    for a in 0..total {
        let (ra, ca) = (a / n, a % n);
        for b in a + 1..total {
            let (rb, cb) = (b / n, b % n);
            if ra != rb && ca != cb {
                compat.add_edge(a, b);
            }
        }
    }
    let labels = (0..total)
        .map(|a| format!("r{}c{}", a / n + 1, a % n + 1))
        .collect();
    SimplicialComplex::from_flag_graph(labels, compat)
}

/// One boundary matrix of the simplicial chain complex, between the given
/// consecutive face lists (both lexicographically sorted).
pub fn simplicial_boundary(lower: &[Vec<u32>], upper: &[Vec<u32>], ring: &Ring) -> SparseMatrix {
    let columns = crate::util::par_map_slice(upper, |face| {
        let mut col = Vec::with_capacity(face.len());
        let mut reduced: Vec<u32> = face[1..].to_vec();
        for i in 0..face.len() {
            // reduced = face with position i removed
            if i > 0 {
                reduced[i - 1] = face[i - 1];
            }
            let row = lower
                .binary_search_by(|probe| probe.as_slice().cmp(reduced.as_slice()))
                .expect("boundary face enumerated");
            let sign = if i % 2 == 0 { 1 } else { -1 };
            col.push((row, ring.from_i64(sign)));
        }
        col.sort_by_key(|e| e.0);
        col
    });
    SparseMatrix::from_columns(lower.len(), columns)
}

/// The full simplicial chain complex over Z with alternating-sign boundary
/// maps; bases are the lex-sorted face lists per degree.
pub fn simplicial_chain_complex(k: &SimplicialComplex) -> ChainComplex {
    let ring = Ring::Integers;
    let dim = k.dim();
    let mut prev = k.faces_of_dim(0);
    let mut ranks = vec![prev.len()];
    let mut boundaries = Vec::with_capacity(dim);
    for d in 1..=dim {
        let cur = k.faces_of_dim(d);
        boundaries.push(simplicial_boundary(&prev, &cur, &ring));
        ranks.push(cur.len());
        prev = cur;
    }
    ChainComplex::new(ring, ranks, boundaries).expect("generated shapes are consistent")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LieKind {
    Heisenberg(u32),
    GeneralLinear(u32),
}

/// A Lie algebra with integral structure constants, given on an ordered
/// basis as a sparse bracket table for index pairs i < j.
#[derive(Clone, Debug)]
pub struct LieAlgebraSpec {
    pub kind: LieKind,
    pub labels: Vec<String>,
    brackets: HashMap<(u32, u32), Vec<(u32, i64)>>,
}

impl LieAlgebraSpec {
    /// The n-th Heisenberg algebra, dimension 2n+1, basis
    /// x_1..x_n, y_1..y_n, z with [x_i, y_i] = z.
    pub fn heisenberg(n: u32) -> Self {
        assert!(n >= 1);
        let mut labels: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        labels.extend((1..=n).map(|i| format!("y{i}")));
        labels.push("z".to_string());
        let z = 2 * n;
        let brackets = (0..n).map(|i| ((i, n + i), vec![(z, 1)])).collect();
        let spec = LieAlgebraSpec {
            kind: LieKind::Heisenberg(n),
            labels,
            brackets,
        };
        spec.validate_jacobi().expect("Heisenberg satisfies Jacobi");
        spec
    }

    /// gl_n over Z: elementary matrices E_ij in row-major order with
    /// [E_ij, E_kl] = d_jk E_il - d_li E_kj.
    pub fn general_linear(n: u32) -> Self {
        assert!(n >= 1);
        let idx = |i: u32, j: u32| i * n + j;
        let labels = (0..n)
            .flat_map(|i| (0..n).map(move |j| format!("E{}{}", i + 1, j + 1)))
            .collect();
        let mut brackets = HashMap::new();
        for a in 0..n * n {
            let (i, j) = (a / n, a % n);
            for b in a + 1..n * n {
                let (k, l) = (b / n, b % n);
                let mut terms: HashMap<u32, i64> = HashMap::new();
                if j == k {
                    *terms.entry(idx(i, l)).or_default() += 1;
                }
                if l == i {
                    *terms.entry(idx(k, j)).or_default() -= 1;
                }
                let mut terms: Vec<(u32, i64)> =
                    terms.into_iter().filter(|(_, c)| *c != 0).collect();
                terms.sort_unstable();
                if !terms.is_empty() {
                    brackets.insert((a, b), terms);
                }
            }
        }
        let spec = LieAlgebraSpec {
            kind: LieKind::GeneralLinear(n),
            labels,
            brackets,
        };
        spec.validate_jacobi().expect("gl_n satisfies Jacobi");
        spec
    }

    /// A user-provided bracket table (for pairs i < j; antisymmetry is
    /// implied). Checked against the Jacobi identity.
    pub fn custom(
        labels: Vec<String>,
        brackets: HashMap<(u32, u32), Vec<(u32, i64)>>,
    ) -> Result<Self, Error> {
        let spec = LieAlgebraSpec {
            kind: LieKind::Heisenberg(0),
            labels,
            brackets,
        };
        spec.validate_jacobi()?;
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// [x_i, x_j] as a coefficient list, for any index pair.
    fn bracket(&self, i: u32, j: u32) -> Vec<(u32, i64)> {
        if i == j {
            return Vec::new();
        }
        if i < j {
            self.brackets.get(&(i, j)).cloned().unwrap_or_default()
        } else {
            self.brackets
                .get(&(j, i))
                .map(|terms| terms.iter().map(|&(t, c)| (t, -c)).collect())
                .unwrap_or_default()
        }
    }

    fn validate_jacobi(&self) -> Result<(), Error> {
        let d = self.dim() as u32;
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let mut acc: HashMap<u32, i64> = HashMap::new();
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for (t, coef) in self.bracket(a, b) {
                            for (s, coef2) in self.bracket(t, c) {
                                *acc.entry(s).or_default() += coef * coef2;
                            }
                        }
                    }
                    if acc.values().any(|&v| v != 0) {
                        return Err(Error::JacobiViolation(
                            i as usize + 1,
                            j as usize + 1,
                            k as usize + 1,
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Binomial coefficient table for subset ranking.
struct Binomials {
    c: Vec<Vec<u64>>,
}

impl Binomials {
    fn new(n: usize) -> Self {
        let mut c = vec![vec![0u64; n + 1]; n + 1];
        for i in 0..=n {
            c[i][0] = 1;
            for j in 1..=i {
                c[i][j] = c[i - 1][j - 1].saturating_add(c[i - 1].get(j).copied().unwrap_or(0));
            }
        }
        Binomials { c }
    }

    fn get(&self, n: usize, k: usize) -> u64 {
        if k > n {
            0
        } else {
            self.c[n][k]
        }
    }
}

/// Position of a sorted k-subset of {0..n-1} in the lexicographic order of
/// all k-subsets.
fn lex_rank(subset: &[u32], n: usize, binom: &Binomials) -> usize {
    let k = subset.len();
    let mut rank = 0u64;
    let mut prev: i64 = -1;
    for (pos, &s) in subset.iter().enumerate() {
        for v in (prev + 1) as u32..s {
            rank += binom.get(n - 1 - v as usize, k - 1 - pos);
        }
        prev = s as i64;
    }
    rank as usize
}

/// Inverse of `lex_rank`.
fn lex_unrank(mut rank: u64, n: usize, k: usize, binom: &Binomials) -> Vec<u32> {
    let mut subset = Vec::with_capacity(k);
    let mut v = 0u32;
    for pos in 0..k {
        loop {
            let below = binom.get(n - 1 - v as usize, k - 1 - pos);
            if rank < below {
                break;
            }
            rank -= below;
            v += 1;
        }
        subset.push(v);
        v += 1;
    }
    subset
}

/// One boundary matrix of the Chevalley complex: from the degree-k wedge
/// basis (lex-ordered k-subsets) down to degree k-1. Columns are computed
/// independently in parallel chunks.
pub fn chevalley_boundary(l: &LieAlgebraSpec, k: usize, ring: &Ring) -> SparseMatrix {
    let d = l.dim();
    assert!(k >= 1 && k <= d);
    // binomial table entries stay exact in u64 up to here
    assert!(d <= 66, "wedge basis sizes overflow beyond dimension 66");
    let binom = Binomials::new(d);
    let ncols = binom.get(d, k) as usize;
    let nrows = binom.get(d, k - 1) as usize;
    if k == 1 {
        // brackets of single elements vanish
        return SparseMatrix::zero(nrows, ncols);
    }
    let chunk = 16384usize;
    let nchunks = ncols.div_ceil(chunk);
    let chunks = par_map_range(nchunks, |ci| {
        let start = ci * chunk;
        let end = (start + chunk).min(ncols);
        let mut cols = Vec::with_capacity(end - start);
        let mut face = lex_unrank(start as u64, d, k, &binom);
        for _ in start..end {
            cols.push(chevalley_column(l, &face, d, &binom, ring));
            advance_subset(&mut face, d as u32);
        }
        cols
    });
    let columns: Vec<_> = chunks.into_iter().flatten().collect();
    SparseMatrix::from_columns(nrows, columns)
}

/// Advance a sorted subset to its lexicographic successor.
fn advance_subset(s: &mut [u32], n: u32) {
    let k = s.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if s[i] != n - (k - i) as u32 {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return;
        }
    }
}

fn chevalley_column(
    l: &LieAlgebraSpec,
    face: &[u32],
    d: usize,
    binom: &Binomials,
    ring: &Ring,
) -> Vec<(usize, crate::ring::Coeff)> {
    let k = face.len();
    let mut acc: HashMap<usize, i64> = HashMap::new();
    let mut rest = Vec::with_capacity(k - 1);
    for a in 0..k {
        for b in a + 1..k {
            let terms = l.bracket(face[a], face[b]);
            if terms.is_empty() {
                continue;
            }
            // sign (-1)^{(a+1)+(b+1)} for 1-based positions
            let pair_sign = if (a + b) % 2 == 0 { 1i64 } else { -1 };
            rest.clear();
            rest.extend(
                face.iter()
                    .enumerate()
                    .filter(|(pos, _)| *pos != a && *pos != b)
                    .map(|(_, &v)| v),
            );
            for (t, c) in terms {
                if rest.binary_search(&t).is_ok() {
                    continue; // repeated wedge factor
                }
                let insert_at = rest.partition_point(|&v| v < t);
                let insert_sign = if insert_at % 2 == 0 { 1i64 } else { -1 };
                let mut target = Vec::with_capacity(k - 1);
                target.extend_from_slice(&rest[..insert_at]);
                target.push(t);
                target.extend_from_slice(&rest[insert_at..]);
                let row = lex_rank(&target, d, binom);
                *acc.entry(row).or_default() += pair_sign * insert_sign * c;
            }
        }
    }
    let mut col: Vec<(usize, crate::ring::Coeff)> = acc
        .into_iter()
        .filter(|(_, v)| *v != 0)
        .map(|(row, v)| (row, ring.from_i64(v)))
        .collect();
    col.sort_by_key(|e| e.0);
    col
}

/// The full Chevalley chain complex of a Lie algebra over Z: exterior
/// powers of the underlying module with the bracket-induced differential.
pub fn chevalley_complex(l: &LieAlgebraSpec) -> ChainComplex {
    let ring = Ring::Integers;
    let d = l.dim();
    assert!(d <= 66, "wedge basis sizes overflow beyond dimension 66");
    let binom = Binomials::new(d);
    let ranks: Vec<usize> = (0..=d).map(|k| binom.get(d, k) as usize).collect();
    let boundaries = (1..=d).map(|k| chevalley_boundary(l, k, &ring)).collect();
    ChainComplex::new(ring, ranks, boundaries).expect("wedge basis shapes are consistent")
}
