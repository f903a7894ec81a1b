//! The Pauli graph (vertices = non-identity operators, edges = commuting
//! pairs), exhaustive maximal-clique enumeration, operator classification
//! and the incidence structure of the maximal commuting sets.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::Error;
use crate::pauli::{self, FactorSpec, PauliOp};

/// Dimensions above this bound are rejected; the pair sweep is O(d^4).
pub const DEFAULT_DIMENSION_BOUND: u32 = 36;

/// Dense undirected graph over word-packed adjacency rows.
#[derive(Debug, Clone)]
pub(crate) struct BitGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl BitGraph {
    pub(crate) fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitGraph {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub(crate) fn from_pred(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = BitGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if adjacent(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert_ne!(u, v);
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub(crate) fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub(crate) fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    pub(crate) fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn len(&self) -> usize {
        self.n
    }
}

fn popcount(set: &[u64]) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

fn intersect_count(a: &[u64], b: &[u64]) -> usize {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x & y).count_ones() as usize)
        .sum()
}

fn iter_bits(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(wi, &w)| {
        let mut bits = w;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + b)
            }
        })
    })
}

/// Complete maximal-clique enumeration: Bron-Kerbosch with pivoting.
/// Each clique comes out sorted; the list is sorted lexicographically.
pub(crate) fn bron_kerbosch(g: &BitGraph) -> Vec<Vec<usize>> {
    let words = g.len().div_ceil(64);
    let mut p = vec![u64::MAX; words];
    if g.len() % 64 != 0 {
        p[words - 1] = (1u64 << (g.len() % 64)) - 1;
    }
    let x = vec![0u64; words];
    let mut out = Vec::new();
    let mut r = Vec::new();
    expand(g, &mut r, p, x, &mut out);
    for clique in &mut out {
        clique.sort_unstable();
    }
    out.sort();
    out
}

fn expand(g: &BitGraph, r: &mut Vec<usize>, p: Vec<u64>, x: Vec<u64>, out: &mut Vec<Vec<usize>>) {
    if popcount(&p) == 0 {
        if popcount(&x) == 0 {
            out.push(r.clone());
        }
        return;
    }
    // pivot: vertex of P union X with the most neighbors inside P
    let pivot = iter_bits(&p)
        .chain(iter_bits(&x))
        .max_by_key(|&u| intersect_count(&p, g.row(u)))
        .expect("P nonempty");
    let mut candidates: Vec<u64> = p
        .iter()
        .zip(g.row(pivot))
        .map(|(pw, nw)| pw & !nw)
        .collect();
    let mut p = p;
    let mut x = x;
    while let Some(v) = iter_bits(&candidates).next() {
        candidates[v / 64] &= !(1 << (v % 64));
        let np: Vec<u64> = p.iter().zip(g.row(v)).map(|(a, b)| a & b).collect();
        let nx: Vec<u64> = x.iter().zip(g.row(v)).map(|(a, b)| a & b).collect();
        r.push(v);
        expand(g, r, np, nx, out);
        r.pop();
        p[v / 64] &= !(1 << (v % 64));
        x[v / 64] |= 1 << (v % 64);
    }
}

/// The commutation graph of all non-identity operators of a factor spec.
#[derive(Debug, Clone)]
pub struct PauliGraph {
    spec: FactorSpec,
    ops: Vec<PauliOp>,
    adj: BitGraph,
}

impl PauliGraph {
    pub fn build(spec: &FactorSpec) -> Result<Self, Error> {
        Self::build_with_bound(spec, DEFAULT_DIMENSION_BOUND)
    }

    pub fn build_with_bound(spec: &FactorSpec, bound: u32) -> Result<Self, Error> {
        let d = spec.dimension();
        if d > bound {
            return Err(Error::DimensionBound { dim: d, bound });
        }
        let ops = pauli::enumerate_operators(spec);
        let n = ops.len();
        // parallel pair sweep; rows merged positionally, so the result is
        // independent of the thread count
        let edge_rows: Vec<Vec<usize>> = (0..n)
            .into_par_iter()
            .map(|u| {
                (u + 1..n)
                    .filter(|&v| pauli::commutes(spec, &ops[u], &ops[v]))
                    .collect()
            })
            .collect();
        let mut adj = BitGraph::new(n);
        for (u, row) in edge_rows.iter().enumerate() {
            for &v in row {
                adj.add_edge(u, v);
            }
        }
        Ok(PauliGraph {
            spec: spec.clone(),
            ops,
            adj,
        })
    }

    pub fn spec(&self) -> &FactorSpec {
        &self.spec
    }

    pub fn operators(&self) -> &[PauliOp] {
        &self.ops
    }

    pub fn vertex_count(&self) -> usize {
        self.ops.len()
    }

    pub fn commutes(&self, u: usize, v: usize) -> bool {
        u == v || self.adj.has_edge(u, v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj.degree(v)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Commuting-operator count for vertex v including v itself and the
    /// omitted identity; matches the perpendicular-set cardinality of the
    /// corresponding module vector.
    pub fn perp_size(&self, v: usize) -> usize {
        self.degree(v) + 2
    }

    pub(crate) fn bits(&self) -> &BitGraph {
        &self.adj
    }
}

/// The complete census of maximal commuting sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueCensus {
    cliques: Vec<Vec<usize>>,
}

impl CliqueCensus {
    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn size_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for c in &self.cliques {
            *hist.entry(c.len()).or_insert(0) += 1;
        }
        hist
    }
}

/// Enumerates every maximal clique of the graph. Exhaustive by construction;
/// output canonically sorted.
pub fn maximal_cliques(g: &PauliGraph) -> CliqueCensus {
    CliqueCensus {
        cliques: bron_kerbosch(g.bits()),
    }
}

/// Post-hoc verification that each listed set is a clique and maximal.
pub fn verify_census(g: &PauliGraph, census: &CliqueCensus) -> bool {
    census.cliques().iter().all(|clique| {
        let pairwise = clique
            .iter()
            .enumerate()
            .all(|(i, &u)| clique[i + 1..].iter().all(|&v| g.commutes(u, v)));
        let maximal = (0..g.vertex_count())
            .filter(|v| !clique.contains(v))
            .all(|v| !clique.iter().all(|&u| g.commutes(u, v)));
        pairwise && maximal
    })
}

/// One (membership, perp) class of operators.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct TypeClass {
    /// number of sets containing each operator of the class
    pub membership: usize,
    /// commuting-operator count (self and identity included)
    pub perp_size: usize,
    /// operators in the class
    pub count: usize,
    /// identity patterns observed in the class: per-factor mask strings
    /// ("I" = identity factor, "*" = non-identity) with multiplicities
    pub identity_patterns: Vec<(String, usize)>,
}

/// Per-operator classification aggregated into (membership, perp) classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorTypeTable {
    pub classes: Vec<TypeClass>,
    /// membership count per operator index
    pub membership: Vec<usize>,
}

/// Classifies operators by how many of the given sets contain them and by
/// perpendicular-set size. Classes are sorted by descending (membership,
/// perp_size).
pub fn classify_operators(g: &PauliGraph, sets: &[Vec<usize>]) -> OperatorTypeTable {
    let n = g.vertex_count();
    let mut membership = vec![0usize; n];
    for set in sets {
        for &v in set {
            membership[v] += 1;
        }
    }
    let mut grouped: BTreeMap<(usize, usize), BTreeMap<String, usize>> = BTreeMap::new();
    for v in 0..n {
        let key = (membership[v], g.perp_size(v));
        let mask: String = g.operators()[v]
            .identity_pattern()
            .iter()
            .map(|&is_id| if is_id { 'I' } else { '*' })
            .collect();
        *grouped.entry(key).or_default().entry(mask).or_insert(0) += 1;
    }
    let classes = grouped
        .into_iter()
        .rev()
        .map(|((membership, perp_size), masks)| TypeClass {
            membership,
            perp_size,
            count: masks.values().sum(),
            identity_patterns: masks.into_iter().collect(),
        })
        .collect();
    OperatorTypeTable {
        classes,
        membership,
    }
}

/// Pairwise intersection cardinalities of the maximal commuting sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceStructure {
    n: usize,
    sizes: Vec<u32>,
}

impl IncidenceStructure {
    pub fn set_count(&self) -> usize {
        self.n
    }

    pub fn intersection(&self, i: usize, j: usize) -> u32 {
        self.sizes[i * self.n + j]
    }

    /// True when sets i and j share at least one operator.
    pub fn meets(&self, i: usize, j: usize) -> bool {
        i != j && self.intersection(i, j) > 0
    }
}

/// Computes all pairwise intersection sizes of the given operator sets.
pub fn incidence_structure(vertex_count: usize, sets: &[Vec<usize>]) -> IncidenceStructure {
    let n = sets.len();
    let words = vertex_count.div_ceil(64);
    let masks: Vec<Vec<u64>> = sets
        .iter()
        .map(|set| {
            let mut m = vec![0u64; words];
            for &v in set {
                m[v / 64] |= 1 << (v % 64);
            }
            m
        })
        .collect();
    let mut sizes = vec![0u32; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let k = intersect_count(&masks[i], &masks[j]) as u32;
            sizes[i * n + j] = k;
            sizes[j * n + i] = k;
        }
    }
    IncidenceStructure { n, sizes }
}
