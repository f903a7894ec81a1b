//! The module R^2 over a finite commutative ring: admissible vectors, cyclic
//! submodules, the projective line P1(R), perpendicular sets and the
//! distant/neighbor relations.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Error;
use crate::rings::{Ring, RingElement};

/// A vector (b, c) of R^2; both entries share the parent ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleVector {
    b: RingElement,
    c: RingElement,
}

impl PartialOrd for ModuleVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ModuleVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.b.cmp(&other.b).then_with(|| self.c.cmp(&other.c))
    }
}

impl fmt::Display for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.b, self.c)
    }
}

impl ModuleVector {
    pub fn new(b: RingElement, c: RingElement) -> Result<Self, Error> {
        if b.ring() != c.ring() {
            return Err(Error::RingMismatch);
        }
        Ok(ModuleVector { b, c })
    }

    /// Vector from two integers via the canonical map Z -> R.
    pub fn from_residues(ring: &Ring, b: i64, c: i64) -> Self {
        ModuleVector {
            b: ring.from_residue(b),
            c: ring.from_residue(c),
        }
    }

    pub fn ring(&self) -> &Ring {
        self.b.ring()
    }

    pub fn b(&self) -> &RingElement {
        &self.b
    }

    pub fn c(&self) -> &RingElement {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.b.is_zero() && self.c.is_zero()
    }

    pub fn scaled(&self, u: &RingElement) -> Self {
        ModuleVector {
            b: u * &self.b,
            c: u * &self.c,
        }
    }
}

/// The 2x2 determinant b_v * c_w - c_v * b_w. Antisymmetric.
pub fn det2(v: &ModuleVector, w: &ModuleVector) -> Result<RingElement, Error> {
    if v.ring() != w.ring() {
        return Err(Error::RingMismatch);
    }
    Ok(&(&v.b * &w.c) - &(&v.c * &w.b))
}

/// True iff det2(v, w) = 0. Symmetric, and every vector is perpendicular
/// to itself.
pub fn is_perpendicular(v: &ModuleVector, w: &ModuleVector) -> Result<bool, Error> {
    Ok(det2(v, w)?.is_zero())
}

/// Admissibility by the unit/zero-divisor criterion: at every component, at
/// least one of the two coordinates is a unit. Equivalently: some entry is a
/// unit, or both entries are zero divisors not sharing a maximal ideal.
pub fn is_admissible(v: &ModuleVector) -> bool {
    let ring = v.ring();
    (0..ring.component_count()).all(|i| {
        ring.coordinate_is_unit(i, v.b.coords()[i]) || ring.coordinate_is_unit(i, v.c.coords()[i])
    })
}

/// Admissibility by the defining existential search: some w makes
/// det2(v, w) a unit. O(|R|^2); kept as an independent oracle for the
/// componentwise criterion.
pub fn is_admissible_by_search(v: &ModuleVector) -> bool {
    let ring = v.ring();
    for b in ring.elements() {
        for c in ring.elements() {
            let w = ModuleVector { b: b.clone(), c };
            if det2(v, &w).expect("same ring").is_unit() {
                return true;
            }
        }
    }
    false
}

/// The cyclic submodule R*(b,c) = {(ub, uc) : u in R}, sorted and
/// deduplicated. Contains (0,0); its size divides |R| and equals |R| exactly
/// when v is admissible.
pub fn cyclic_submodule(v: &ModuleVector) -> Vec<ModuleVector> {
    let mut orbit: Vec<ModuleVector> = v.ring().elements().map(|u| v.scaled(&u)).collect();
    orbit.sort();
    orbit.dedup();
    orbit
}

/// All vectors of R^2 perpendicular to v, sorted.
pub fn perp_set(v: &ModuleVector) -> Vec<ModuleVector> {
    let ring = v.ring();
    let mut out = Vec::new();
    for b in ring.elements() {
        for c in ring.elements() {
            let w = ModuleVector { b: b.clone(), c };
            if det2(v, &w).expect("same ring").is_zero() {
                out.push(w);
            }
        }
    }
    out
}

/// A point of P1(R): a free cyclic submodule with its canonical
/// (lexicographically smallest admissible) representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectivePoint {
    representative: ModuleVector,
    orbit: Vec<ModuleVector>,
}

impl ProjectivePoint {
    pub fn representative(&self) -> &ModuleVector {
        &self.representative
    }

    /// The full orbit, sorted, including (0,0).
    pub fn orbit(&self) -> &[ModuleVector] {
        &self.orbit
    }

    pub fn contains(&self, v: &ModuleVector) -> bool {
        self.orbit.binary_search(v).is_ok()
    }
}

/// The projective line P1(R) with its points in deterministic order
/// (sorted by canonical representative).
#[derive(Debug, Clone)]
pub struct ProjectiveLine {
    ring: Ring,
    points: Vec<ProjectivePoint>,
}

impl ProjectiveLine {
    /// Enumerates all free cyclic submodules generated by admissible vectors,
    /// deduplicated by orbit equality.
    pub fn new(ring: &Ring) -> Self {
        let mut points = Vec::new();
        for b in ring.elements() {
            for c in ring.elements() {
                let v = ModuleVector { b: b.clone(), c };
                if !is_admissible(&v) {
                    continue;
                }
                let orbit = cyclic_submodule(&v);
                let rep = orbit
                    .iter()
                    .filter(|m| is_admissible(m))
                    .min()
                    .expect("admissible orbit has an admissible member")
                    .clone();
                // emit each orbit exactly once, at its canonical representative
                if rep == v {
                    points.push(ProjectivePoint {
                        representative: v,
                        orbit,
                    });
                }
            }
        }
        points.sort_by(|a, b| a.representative.cmp(&b.representative));
        ProjectiveLine {
            ring: ring.clone(),
            points,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Distant points: the determinant of their representatives is a unit.
    /// Independent of the representative choice; a point is never distant
    /// from itself.
    pub fn distant(&self, i: usize, j: usize) -> bool {
        let d = det2(
            self.points[i].representative(),
            self.points[j].representative(),
        )
        .expect("same ring");
        d.is_unit()
    }

    /// Index of the point whose orbit contains v, for admissible v.
    pub fn point_of(&self, v: &ModuleVector) -> Option<usize> {
        self.points.iter().position(|p| p.contains(v))
    }
}

/// Classification of a vector per the counting formulas for square-free Z_d:
/// empirical counts always, formula values when the ring qualifies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorClassification {
    /// components at which both entries are non-units ("K")
    pub vanishing_components: Vec<usize>,
    /// number of points of P1(R) whose orbit contains the vector
    pub point_count: u64,
    /// |v^perp| over R^2, including (0,0)
    pub perp_cardinality: u64,
    /// (point count, perp cardinality) predicted by the square-free formulas
    /// n = prod_{k in K} (p_k + 1), |perp| = |R| * prod_{k in K} p_k;
    /// None when the ring is not Z_d with d square-free.
    pub formula: Option<(u64, u64)>,
}

/// Classifies v against the line: vanishing component set, empirical
/// membership and perpendicular-set counts, and the square-free formula
/// values when applicable.
pub fn classify_vector(line: &ProjectiveLine, v: &ModuleVector) -> VectorClassification {
    let ring = v.ring();
    let vanishing: Vec<usize> = (0..ring.component_count())
        .filter(|&i| {
            !ring.coordinate_is_unit(i, v.b().coords()[i])
                && !ring.coordinate_is_unit(i, v.c().coords()[i])
        })
        .collect();
    let point_count = line.points().iter().filter(|p| p.contains(v)).count() as u64;
    let mut perp_cardinality = 0u64;
    for b in ring.elements() {
        for c in ring.elements() {
            let w = ModuleVector { b: b.clone(), c };
            if det2(v, &w).expect("same ring").is_zero() {
                perp_cardinality += 1;
            }
        }
    }
    let formula = ring.is_square_free_modular().then(|| {
        let n: u64 = vanishing
            .iter()
            .map(|&i| ring.component_order(i) as u64 + 1)
            .product();
        let perp: u64 = ring.order()
            * vanishing
                .iter()
                .map(|&i| ring.component_order(i) as u64)
                .product::<u64>();
        (n, perp)
    });
    VectorClassification {
        vanishing_components: vanishing,
        point_count,
        perp_cardinality,
        formula,
    }
}
