//! Exact isomorphism testing between the set-incidence graph of maximal
//! commuting sets and the neighbor graph of a projective line, with edge
//! colors carrying the fine structure (intersection sizes on the operator
//! side, shared-component counts on the ring side).

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::graph::{
    classify_operators, incidence_structure, CliqueCensus, IncidenceStructure, PauliGraph,
    TypeClass,
};
use crate::pauli::{FactorSpec, PauliOp};
use crate::projline::{det2, ModuleVector, ProjectiveLine};
use crate::rings::{LocalSpec, Ring};

/// Undirected graph with small-integer edge colors; color 0 means no edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    n: usize,
    color: Vec<u32>,
}

impl ColoredGraph {
    pub fn new(n: usize) -> Self {
        ColoredGraph {
            n,
            color: vec![0; n * n],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn add_edge(&mut self, u: usize, v: usize, color: u32) {
        assert!(color > 0, "edge color 0 is reserved for non-edges");
        assert_ne!(u, v, "loops are not allowed");
        self.color[u * self.n + v] = color;
        self.color[v * self.n + u] = color;
    }

    pub fn edge_color(&self, u: usize, v: usize) -> u32 {
        self.color[u * self.n + v]
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        self.edge_color(u, v) != 0
    }

    pub fn degree(&self, u: usize) -> usize {
        (0..self.n).filter(|&v| self.is_edge(u, v)).count()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    /// Edge count per color.
    pub fn color_histogram(&self) -> BTreeMap<u32, usize> {
        let mut hist = BTreeMap::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                let c = self.edge_color(u, v);
                if c != 0 {
                    *hist.entry(c).or_insert(0) += 1;
                }
            }
        }
        hist
    }

    /// Sorted edge list (u, v, color) with u < v.
    pub fn edges(&self) -> Vec<(usize, usize, u32)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                let c = self.edge_color(u, v);
                if c != 0 {
                    out.push((u, v, c));
                }
            }
        }
        out
    }
}

/// Definitive reasons for non-isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonIsoReason {
    OrderMismatch(usize, usize),
    EdgeCountMismatch(usize, usize),
    ColorCountsMismatch(String, String),
    ProfileMismatch,
    SearchExhausted,
}

impl fmt::Display for NonIsoReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonIsoReason::OrderMismatch(a, b) => write!(f, "vertex counts differ: {a} vs {b}"),
            NonIsoReason::EdgeCountMismatch(a, b) => write!(f, "edge counts differ: {a} vs {b}"),
            NonIsoReason::ColorCountsMismatch(a, b) => {
                write!(f, "no count-consistent color bijection: {a} vs {b}")
            }
            NonIsoReason::ProfileMismatch => {
                write!(f, "refinement profiles differ (invariant mismatch)")
            }
            NonIsoReason::SearchExhausted => write!(f, "backtracking search exhausted"),
        }
    }
}

/// A verified isomorphism: `mapping[v]` is the image of vertex v of the
/// first graph; `color_map` records the color dictionary used when edge
/// colors were matched across different alphabets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub mapping: Vec<usize>,
    pub color_map: Option<Vec<(u32, u32)>>,
}

/// Checks a candidate mapping edge-by-edge (and color-by-color under a
/// dictionary when one is given).
pub fn verify_mapping(
    g1: &ColoredGraph,
    g2: &ColoredGraph,
    mapping: &[usize],
    color_map: Option<&[(u32, u32)]>,
) -> bool {
    if mapping.len() != g1.len() || g1.len() != g2.len() {
        return false;
    }
    let mut seen = vec![false; g2.len()];
    for &w in mapping {
        if w >= g2.len() || seen[w] {
            return false;
        }
        seen[w] = true;
    }
    let translate = |c: u32| -> u32 {
        match color_map {
            None => u32::from(c != 0),
            Some(dict) => dict
                .iter()
                .find(|&&(from, _)| from == c)
                .map(|&(_, to)| to)
                .unwrap_or(0),
        }
    };
    for u in 0..g1.len() {
        for v in u + 1..g1.len() {
            let c1 = g1.edge_color(u, v);
            let c2 = g2.edge_color(mapping[u], mapping[v]);
            let ok = match color_map {
                None => (c1 != 0) == (c2 != 0),
                Some(_) => translate(c1) == c2,
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Finds a vertex bijection preserving adjacency (and edge colors when
/// `respect_colors`), or returns a definitive non-isomorphism verdict.
/// Exact: iterated color refinement followed by exhaustive backtracking
/// with forward checking. Returns the lexicographically least bijection.
pub fn find_isomorphism(
    g1: &ColoredGraph,
    g2: &ColoredGraph,
    respect_colors: bool,
) -> Result<Isomorphism, NonIsoReason> {
    if g1.len() != g2.len() {
        return Err(NonIsoReason::OrderMismatch(g1.len(), g2.len()));
    }
    if g1.edge_count() != g2.edge_count() {
        return Err(NonIsoReason::EdgeCountMismatch(g1.edge_count(), g2.edge_count()));
    }
    if !respect_colors {
        let mapping = search(g1, g2, None)?;
        let iso = Isomorphism {
            mapping,
            color_map: None,
        };
        debug_assert!(verify_mapping(g1, g2, &iso.mapping, None));
        return Ok(iso);
    }
    // Across different color alphabets: try every count-consistent color
    // bijection, in deterministic order.
    let h1 = g1.color_histogram();
    let h2 = g2.color_histogram();
    let dicts = color_bijections(&h1, &h2);
    if dicts.is_empty() {
        return Err(NonIsoReason::ColorCountsMismatch(
            format!("{h1:?}"),
            format!("{h2:?}"),
        ));
    }
    let mut last = NonIsoReason::SearchExhausted;
    for dict in dicts {
        match search(g1, g2, Some(&dict)) {
            Ok(mapping) => {
                let iso = Isomorphism {
                    mapping,
                    color_map: Some(dict),
                };
                debug_assert!(verify_mapping(g1, g2, &iso.mapping, iso.color_map.as_deref()));
                return Ok(iso);
            }
            Err(reason) => last = reason,
        }
    }
    Err(last)
}

/// All bijections between the two color alphabets that preserve edge counts.
fn color_bijections(
    h1: &BTreeMap<u32, usize>,
    h2: &BTreeMap<u32, usize>,
) -> Vec<Vec<(u32, u32)>> {
    if h1.len() != h2.len() {
        return Vec::new();
    }
    let colors1: Vec<u32> = h1.keys().copied().collect();
    let mut out = Vec::new();
    let mut current: Vec<(u32, u32)> = Vec::new();
    let mut used: Vec<u32> = Vec::new();
    fn rec(
        colors1: &[u32],
        idx: usize,
        h1: &BTreeMap<u32, usize>,
        h2: &BTreeMap<u32, usize>,
        current: &mut Vec<(u32, u32)>,
        used: &mut Vec<u32>,
        out: &mut Vec<Vec<(u32, u32)>>,
    ) {
        if idx == colors1.len() {
            out.push(current.clone());
            return;
        }
        let c1 = colors1[idx];
        for (&c2, &count2) in h2 {
            if used.contains(&c2) || h1[&c1] != count2 {
                continue;
            }
            used.push(c2);
            current.push((c1, c2));
            rec(colors1, idx + 1, h1, h2, current, used, out);
            current.pop();
            used.pop();
        }
    }
    rec(&colors1, 0, h1, h2, &mut current, &mut used, &mut out);
    out
}

/// Edge label seen by the matcher: raw color under a dictionary, or 0/1
/// adjacency when matching colorlessly.
fn label(g: &ColoredGraph, u: usize, v: usize, dict: Option<&DictSide>) -> u32 {
    let c = g.edge_color(u, v);
    match dict {
        None => u32::from(c != 0),
        Some(side) => side.translate(c),
    }
}

enum DictSide {
    Forward(Vec<(u32, u32)>), // g1 colors -> shared alphabet
    Identity,
}

impl DictSide {
    fn translate(&self, c: u32) -> u32 {
        match self {
            DictSide::Identity => c,
            DictSide::Forward(map) => {
                if c == 0 {
                    0
                } else {
                    map.iter()
                        .find(|&&(from, _)| from == c)
                        .map(|&(_, to)| to)
                        .expect("complete color dictionary")
                }
            }
        }
    }
}

/// Core exact search. `dict` maps g1 colors into g2's alphabet; None means
/// colorless matching.
fn search(
    g1: &ColoredGraph,
    g2: &ColoredGraph,
    dict: Option<&[(u32, u32)]>,
) -> Result<Vec<usize>, NonIsoReason> {
    let n = g1.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let side1 = dict.map(|d| DictSide::Forward(d.to_vec()));
    let side2 = dict.map(|_| DictSide::Identity);

    // initial invariant: degree + common-neighbor profile + incident labels
    let classes = refine_classes(g1, g2, side1.as_ref(), side2.as_ref())?;
    let (class1, class2) = classes;

    // candidate bitmasks per g1 vertex
    let words = n.div_ceil(64);
    let mut cand = vec![vec![0u64; words]; n];
    for v in 0..n {
        for w in 0..n {
            if class1[v] == class2[w] {
                cand[v][w / 64] |= 1 << (w % 64);
            }
        }
        if cand[v].iter().all(|&x| x == 0) {
            return Err(NonIsoReason::ProfileMismatch);
        }
    }
    let mut mapping = vec![usize::MAX; n];
    if dfs(g1, g2, side1.as_ref(), side2.as_ref(), 0, &cand, &mut mapping) {
        Ok(mapping)
    } else {
        Err(NonIsoReason::SearchExhausted)
    }
}

fn dfs(
    g1: &ColoredGraph,
    g2: &ColoredGraph,
    side1: Option<&DictSide>,
    side2: Option<&DictSide>,
    v: usize,
    cand: &[Vec<u64>],
    mapping: &mut Vec<usize>,
) -> bool {
    let n = g1.len();
    if v == n {
        return true;
    }
    let words = cand[v].len();
    for wi in 0..words {
        let mut bits = cand[v][wi];
        while bits != 0 {
            let w = wi * 64 + bits.trailing_zeros() as usize;
            bits &= bits - 1;
            // forward checking: restrict the candidates of every later vertex
            let mut next: Vec<Vec<u64>> = cand.to_vec();
            let mut feasible = true;
            for u in v + 1..n {
                next[u][w / 64] &= !(1 << (w % 64));
                let want = label(g1, v, u, side1);
                for (word_idx, word) in next[u].iter_mut().enumerate() {
                    let mut keep = 0u64;
                    let mut probe = *word;
                    while probe != 0 {
                        let t = word_idx * 64 + probe.trailing_zeros() as usize;
                        probe &= probe - 1;
                        if label(g2, w, t, side2) == want {
                            keep |= 1 << (t % 64);
                        }
                    }
                    *word = keep;
                }
                if next[u].iter().all(|&x| x == 0) {
                    feasible = false;
                    break;
                }
            }
            if !feasible {
                continue;
            }
            mapping[v] = w;
            if dfs(g1, g2, side1, side2, v + 1, &next, mapping) {
                return true;
            }
            mapping[v] = usize::MAX;
        }
    }
    false
}

type ClassPair = (Vec<u32>, Vec<u32>);

/// Joint iterated refinement over both graphs. The initial invariant is
/// (degree, sorted common-neighbor counts, sorted incident labels); each
/// round refines by the multiset of (edge label, neighbor class). Class
/// histograms must stay equal across the two graphs.
fn refine_classes(
    g1: &ColoredGraph,
    g2: &ColoredGraph,
    side1: Option<&DictSide>,
    side2: Option<&DictSide>,
) -> Result<ClassPair, NonIsoReason> {
    let n = g1.len();
    let initial = |g: &ColoredGraph, side: Option<&DictSide>| -> Vec<(usize, Vec<usize>, Vec<u32>)> {
        (0..n)
            .map(|v| {
                let mut common = Vec::new();
                let mut labels = Vec::new();
                for u in 0..n {
                    if !g.is_edge(v, u) {
                        continue;
                    }
                    labels.push(label(g, v, u, side));
                    let cn = (0..n)
                        .filter(|&t| g.is_edge(v, t) && g.is_edge(u, t))
                        .count();
                    common.push(cn);
                }
                common.sort_unstable();
                labels.sort_unstable();
                (g.degree(v), common, labels)
            })
            .collect()
    };
    let sig1 = initial(g1, side1);
    let sig2 = initial(g2, side2);
    let mut table = BTreeMap::new();
    let assign = |sig: Vec<(usize, Vec<usize>, Vec<u32>)>,
                  table: &mut BTreeMap<(usize, Vec<usize>, Vec<u32>), u32>| {
        sig.into_iter()
            .map(|s| {
                let next = table.len() as u32;
                *table.entry(s).or_insert(next)
            })
            .collect::<Vec<u32>>()
    };
    let mut class1 = assign(sig1, &mut table);
    let mut class2 = assign(sig2, &mut table);
    check_histograms(&class1, &class2)?;

    loop {
        let step = |g: &ColoredGraph, side: Option<&DictSide>, classes: &[u32]| {
            (0..n)
                .map(|v| {
                    let mut sig: Vec<(u32, u32)> = (0..n)
                        .filter(|&u| g.is_edge(v, u))
                        .map(|u| (label(g, v, u, side), classes[u]))
                        .collect();
                    sig.sort_unstable();
                    (classes[v], sig)
                })
                .collect::<Vec<_>>()
        };
        let sig1 = step(g1, side1, &class1);
        let sig2 = step(g2, side2, &class2);
        let mut table: BTreeMap<(u32, Vec<(u32, u32)>), u32> = BTreeMap::new();
        let assign = |sig: Vec<(u32, Vec<(u32, u32)>)>,
                      table: &mut BTreeMap<(u32, Vec<(u32, u32)>), u32>| {
            sig.into_iter()
                .map(|s| {
                    let next = table.len() as u32;
                    *table.entry(s).or_insert(next)
                })
                .collect::<Vec<u32>>()
        };
        let new1 = assign(sig1, &mut table);
        let new2 = assign(sig2, &mut table);
        check_histograms(&new1, &new2)?;
        let stable = count_classes(&new1) == count_classes(&class1);
        class1 = new1;
        class2 = new2;
        if stable {
            return Ok((class1, class2));
        }
    }
}

fn count_classes(classes: &[u32]) -> usize {
    let mut seen: Vec<u32> = classes.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

fn check_histograms(c1: &[u32], c2: &[u32]) -> Result<(), NonIsoReason> {
    let hist = |c: &[u32]| {
        let mut h = BTreeMap::new();
        for &x in c {
            *h.entry(x).or_insert(0usize) += 1;
        }
        h
    };
    if hist(c1) == hist(c2) {
        Ok(())
    } else {
        Err(NonIsoReason::ProfileMismatch)
    }
}

/// Neighbor graph of a projective line: edge iff two distinct points are
/// not distant; edge color = number of ring components at which the
/// representative determinant is a non-unit.
pub fn neighbor_graph(line: &ProjectiveLine) -> ColoredGraph {
    let n = line.len();
    let ring = line.ring();
    let mut g = ColoredGraph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let d = det2(
                line.points()[i].representative(),
                line.points()[j].representative(),
            )
            .expect("same ring");
            if d.is_unit() {
                continue;
            }
            debug_assert!(!d.is_zero(), "distinct points are never perpendicular");
            let color = (0..ring.component_count())
                .filter(|&k| !ring.coordinate_is_unit(k, d.coords()[k]))
                .count() as u32;
            g.add_edge(i, j, color);
        }
    }
    g
}

/// Incidence graph of the maximal commuting sets: edge iff two sets share
/// an operator; edge color = intersection size.
pub fn set_incidence_graph(inc: &IncidenceStructure) -> ColoredGraph {
    let n = inc.set_count();
    let mut g = ColoredGraph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let k = inc.intersection(i, j);
            if k > 0 {
                g.add_edge(i, j, k);
            }
        }
    }
    g
}

/// Verdict and witness of one isomorphism attempt.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoOutcome {
    pub isomorphic: bool,
    /// set index -> point index, when isomorphic
    pub mapping: Option<Vec<usize>>,
    /// color dictionary (set color -> ring color), for colored matches
    pub color_map: Option<Vec<(u32, u32)>>,
    /// non-isomorphism reason, or a short witness summary
    pub detail: String,
}

fn outcome_of(result: Result<Isomorphism, NonIsoReason>) -> IsoOutcome {
    match result {
        Ok(iso) => IsoOutcome {
            isomorphic: true,
            detail: "bijection found and re-validated edge-by-edge".into(),
            mapping: Some(iso.mapping),
            color_map: iso.color_map,
        },
        Err(reason) => IsoOutcome {
            isomorphic: false,
            mapping: None,
            color_map: None,
            detail: reason.to_string(),
        },
    }
}

/// Census of the operator images of projective points, available when the
/// ring components are prime fields matching the factor primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubmoduleCensusReport {
    pub set_count: usize,
    /// every point image is a maximal clique of the commutation graph
    pub all_maximal_cliques: bool,
    /// the point images are exactly the full clique census
    pub equals_full_census: bool,
    /// type table with membership counted over the point images only
    pub type_classes: Vec<TypeClass>,
    /// incidence of the point images vs the line's neighbor graph
    pub incidence_isomorphic: bool,
}

/// Full comparison of the operator-side and ring-side structures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub dimension: u32,
    pub ring: String,
    pub operator_count: usize,
    pub clique_count: usize,
    pub point_count: usize,
    /// colorless isomorphism of set-incidence vs P1 neighbor graph
    pub plain: IsoOutcome,
    /// colored (fine-structure) isomorphism, when requested
    pub colored: Option<IsoOutcome>,
    pub submodule: Option<SubmoduleCensusReport>,
    pub findings: Vec<String>,
}

/// Per-factor component assignment when the ring is an aligned product of
/// prime fields: returns `mapping[factor] = component index`.
pub fn factor_component_alignment(spec: &FactorSpec, ring: &Ring) -> Option<Vec<usize>> {
    if ring.component_count() != spec.factor_count() {
        return None;
    }
    let mut available: Vec<Option<u32>> = ring
        .spec()
        .components
        .iter()
        .map(|c| match c {
            LocalSpec::Residue { modulus } if crate::rings::is_prime(*modulus) => Some(*modulus),
            _ => None,
        })
        .collect();
    if available.iter().any(Option::is_none) {
        return None;
    }
    let mut mapping = Vec::with_capacity(spec.factor_count());
    for &p in spec.primes() {
        let slot = available
            .iter()
            .position(|&order| order == Some(p))?;
        available[slot] = None;
        mapping.push(slot);
    }
    Some(mapping)
}

/// Operator images of the projective points under the factor/component
/// alignment: one sorted operator-index set per point.
pub fn point_operator_sets(
    graph: &PauliGraph,
    line: &ProjectiveLine,
    alignment: &[usize],
) -> Vec<Vec<usize>> {
    let ring = line.ring();
    let index_of: HashMap<&PauliOp, usize> = graph
        .operators()
        .iter()
        .enumerate()
        .map(|(i, op)| (op, i))
        .collect();
    line.points()
        .iter()
        .map(|point| {
            let mut set: Vec<usize> = point
                .orbit()
                .iter()
                .filter(|v| !v.is_zero())
                .map(|v| {
                    let exps: Vec<(u32, u32)> = alignment
                        .iter()
                        .map(|&comp| (v.b().coords()[comp], v.c().coords()[comp]))
                        .collect();
                    let op = PauliOp::new(graph.spec(), exps).expect("aligned exponents");
                    *index_of.get(&op).expect("nonzero vector maps to an operator")
                })
                .collect();
            set.sort_unstable();
            set
        })
        .collect()
}

/// Runs both pipelines and compares them: colorless isomorphism is the
/// verdict; colored matching and the submodule sub-census are reported
/// alongside.
pub fn verify_correspondence(
    graph: &PauliGraph,
    census: &CliqueCensus,
    line: &ProjectiveLine,
    check_colors: bool,
) -> VerificationReport {
    let inc = incidence_structure(graph.vertex_count(), census.cliques());
    let set_graph = set_incidence_graph(&inc);
    let ring_graph = neighbor_graph(line);
    let mut findings = Vec::new();

    let plain = outcome_of(find_isomorphism(&set_graph, &ring_graph, false));
    if let Some(mapping) = &plain.mapping {
        assert!(
            verify_mapping(&set_graph, &ring_graph, mapping, None),
            "witness failed re-validation"
        );
    }
    if !plain.isomorphic {
        findings.push(format!(
            "set-incidence graph ({} sets) is not isomorphic to the P1({}) neighbor graph ({} points): {}",
            census.len(),
            line.ring().name(),
            line.len(),
            plain.detail
        ));
    }

    let colored = check_colors.then(|| {
        let outcome = outcome_of(find_isomorphism(&set_graph, &ring_graph, true));
        if let (Some(mapping), dict) = (&outcome.mapping, outcome.color_map.as_deref()) {
            assert!(
                verify_mapping(&set_graph, &ring_graph, mapping, dict),
                "colored witness failed re-validation"
            );
        }
        if !outcome.isomorphic {
            findings.push(format!(
                "colored (fine-structure) matching failed: {} [set colors {:?} vs ring colors {:?}]",
                outcome.detail,
                set_graph.color_histogram(),
                ring_graph.color_histogram()
            ));
        }
        outcome
    });

    let submodule = factor_component_alignment(graph.spec(), line.ring()).map(|alignment| {
        let sets = point_operator_sets(graph, line, &alignment);
        let all_maximal = sets.iter().all(|set| {
            let pairwise = set
                .iter()
                .enumerate()
                .all(|(i, &u)| set[i + 1..].iter().all(|&v| graph.commutes(u, v)));
            let maximal = (0..graph.vertex_count())
                .filter(|v| !set.contains(v))
                .all(|v| !set.iter().all(|&u| graph.commutes(u, v)));
            pairwise && maximal
        });
        let mut sorted_sets = sets.clone();
        sorted_sets.sort();
        let equals_full = sorted_sets.as_slice() == census.cliques();
        let type_classes = classify_operators(graph, &sets).classes;
        let sub_inc = incidence_structure(graph.vertex_count(), &sets);
        let sub_graph = set_incidence_graph(&sub_inc);
        let sub_iso = find_isomorphism(&sub_graph, &ring_graph, false);
        if !equals_full {
            findings.push(format!(
                "the {} point-image sets are a strict subset of the {} maximal cliques; \
                 memberships restricted to them reproduce the classical type table",
                sets.len(),
                census.len()
            ));
        }
        SubmoduleCensusReport {
            set_count: sets.len(),
            all_maximal_cliques: all_maximal,
            equals_full_census: equals_full,
            type_classes,
            incidence_isomorphic: sub_iso.is_ok(),
        }
    });

    VerificationReport {
        dimension: graph.spec().dimension(),
        ring: line.ring().name(),
        operator_count: graph.vertex_count(),
        clique_count: census.len(),
        point_count: line.len(),
        plain,
        colored,
        submodule,
        findings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::maximal_cliques;

    fn rook(rows: usize, cols: usize) -> ColoredGraph {
        let n = rows * cols;
        let mut g = ColoredGraph::new(n);
        for a in 0..n {
            for b in a + 1..n {
                let (ra, ca) = (a / cols, a % cols);
                let (rb, cb) = (b / cols, b % cols);
                if ra == rb || ca == cb {
                    g.add_edge(a, b, 1);
                }
            }
        }
        g
    }

    #[test]
    fn rook_graph_self_isomorphism() {
        let g = rook(3, 4);
        let iso = find_isomorphism(&g, &g, false).unwrap();
        assert!(verify_mapping(&g, &g, &iso.mapping, None));
        // lexicographically least self-map is the identity
        assert_eq!(iso.mapping, (0..12).collect::<Vec<_>>());
    }

    #[test]
    fn rook_shapes_are_distinguished() {
        // 3x4 is 5-regular, 2x6 is 6-regular
        let a = rook(3, 4);
        let b = rook(2, 6);
        assert!(matches!(
            find_isomorphism(&a, &b, false),
            Err(NonIsoReason::EdgeCountMismatch(..))
        ));
    }

    #[test]
    fn order_mismatch_is_detected() {
        let a = ColoredGraph::new(18);
        let b = ColoredGraph::new(24);
        assert!(matches!(
            find_isomorphism(&a, &b, false),
            Err(NonIsoReason::OrderMismatch(18, 24))
        ));
    }

    #[test]
    fn regular_non_isomorphic_pair_is_distinguished() {
        // C6 vs 2 x C3: both 2-regular on 6 vertices; triangles differ
        let mut c6 = ColoredGraph::new(6);
        for i in 0..6 {
            c6.add_edge(i, (i + 1) % 6, 1);
        }
        let mut tri2 = ColoredGraph::new(6);
        for base in [0, 3] {
            for i in 0..3 {
                tri2.add_edge(base + i, base + (i + 1) % 3, 1);
            }
        }
        assert!(find_isomorphism(&c6, &tri2, false).is_err());
    }

    #[test]
    fn p1_z6_neighbor_graph_is_the_3x4_rook() {
        let line = ProjectiveLine::new(&Ring::parse("Z6").unwrap());
        let g = neighbor_graph(&line);
        assert_eq!(g.len(), 12);
        for v in 0..12 {
            assert_eq!(g.degree(v), 5);
        }
        // single edge color: both component determinants vanishing would
        // mean equal points
        assert_eq!(g.color_histogram(), BTreeMap::from([(1, 30)]));
        let iso = find_isomorphism(&g, &rook(3, 4), false).unwrap();
        assert!(verify_mapping(&g, &rook(3, 4), &iso.mapping, None));
    }

    #[test]
    fn field_line_is_edgeless() {
        let line = ProjectiveLine::new(&Ring::parse("F4").unwrap());
        let g = neighbor_graph(&line);
        assert_eq!(g.len(), 5);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn sextit_correspondence_is_isomorphic() {
        let spec = FactorSpec::from_dimension(6).unwrap();
        let graph = PauliGraph::build(&spec).unwrap();
        let census = maximal_cliques(&graph);
        let line = ProjectiveLine::new(&Ring::parse("Z6").unwrap());
        let report = verify_correspondence(&graph, &census, &line, true);
        assert!(report.plain.isomorphic);
        assert_eq!(report.clique_count, 12);
        assert_eq!(report.point_count, 12);
        // fine structure does not biject: set colors {1,2}, ring colors {1}
        let colored = report.colored.unwrap();
        assert!(!colored.isomorphic);
        assert!(report.findings.iter().any(|f| f.contains("fine-structure")));
        // square-free: the point images are exactly the clique census
        let sub = report.submodule.unwrap();
        assert!(sub.all_maximal_cliques);
        assert!(sub.equals_full_census);
        assert!(sub.incidence_isomorphic);
    }

    #[test]
    fn negative_control_d6_vs_z10() {
        let spec = FactorSpec::from_dimension(6).unwrap();
        let graph = PauliGraph::build(&spec).unwrap();
        let census = maximal_cliques(&graph);
        let line = ProjectiveLine::new(&Ring::parse("Z10").unwrap());
        let report = verify_correspondence(&graph, &census, &line, false);
        assert!(!report.plain.isomorphic);
        assert!(report.plain.detail.contains("12 vs 18"));
    }

    #[test]
    fn colored_matching_with_relabeled_alphabet() {
        // same graph, colors doubled on one side: {1,2} vs {2,4}
        let mut a = ColoredGraph::new(4);
        a.add_edge(0, 1, 1);
        a.add_edge(1, 2, 2);
        a.add_edge(2, 3, 1);
        let mut b = ColoredGraph::new(4);
        b.add_edge(0, 1, 2);
        b.add_edge(1, 2, 4);
        b.add_edge(2, 3, 2);
        let iso = find_isomorphism(&a, &b, true).unwrap();
        assert_eq!(iso.color_map, Some(vec![(1, 2), (2, 4)]));
        assert!(verify_mapping(&a, &b, &iso.mapping, iso.color_map.as_deref()));
    }

    #[test]
    fn colored_matching_rejects_inconsistent_counts() {
        let mut a = ColoredGraph::new(3);
        a.add_edge(0, 1, 1);
        a.add_edge(1, 2, 2);
        let mut b = ColoredGraph::new(3);
        b.add_edge(0, 1, 1);
        b.add_edge(1, 2, 1);
        assert!(matches!(
            find_isomorphism(&a, &b, true),
            Err(NonIsoReason::ColorCountsMismatch(..))
        ));
    }

    #[test]
    fn alignment_rules() {
        let spec = FactorSpec::from_dimension(18).unwrap();
        let r18 = Ring::parse("Z2xZ3xZ3").unwrap();
        assert_eq!(factor_component_alignment(&spec, &r18), Some(vec![0, 1, 2]));
        let spec12 = FactorSpec::from_dimension(12).unwrap();
        let r24 = Ring::parse("Z2xZ3xF4").unwrap();
        assert_eq!(factor_component_alignment(&spec12, &r24), None);
        let spec6 = FactorSpec::from_dimension(6).unwrap();
        let z6 = Ring::parse("Z6").unwrap();
        assert_eq!(factor_component_alignment(&spec6, &z6), Some(vec![0, 1]));
        // factor order need not match component order
        let spec_rev = FactorSpec::new(vec![3, 2]).unwrap();
        assert_eq!(factor_component_alignment(&spec_rev, &z6), Some(vec![1, 0]));
    }
}
