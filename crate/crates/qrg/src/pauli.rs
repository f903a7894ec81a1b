//! Generalized Pauli operators for a composite dimension realized as a
//! tensor product of prime-dimensional factors, with symbolic commutation
//! and an exact monomial-matrix oracle.
//!
//! Each factor of prime dimension p carries X^b Z^c with b, c in Z_p, where
//! X|s> = |s+1> and Z|s> = w^s |s>. Phases are dropped from the operator
//! type (quotient by the center); commutation is phase-independent.

use std::fmt;

use rayon::prelude::*;

use crate::error::Error;
use crate::rings::is_prime;

/// Ordered prime dimensions of the tensor factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactorSpec {
    primes: Vec<u32>,
}

impl FactorSpec {
    pub fn new(primes: Vec<u32>) -> Result<Self, Error> {
        if primes.is_empty() {
            return Err(Error::DimensionTooSmall);
        }
        if let Some(&q) = primes.iter().find(|&&q| !is_prime(q)) {
            return Err(Error::NotPrime(q));
        }
        Ok(FactorSpec { primes })
    }

    /// Factorization of d into nondecreasing primes.
    pub fn from_dimension(d: u32) -> Result<Self, Error> {
        if d < 2 {
            return Err(Error::DimensionTooSmall);
        }
        let mut primes = Vec::new();
        let mut rest = d;
        let mut q = 2;
        while rest > 1 {
            while rest % q == 0 {
                primes.push(q);
                rest /= q;
            }
            q += 1;
        }
        Ok(FactorSpec { primes })
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn factor_count(&self) -> usize {
        self.primes.len()
    }

    pub fn dimension(&self) -> u32 {
        self.primes.iter().product()
    }

    /// Root-of-unity order for the monomial oracle: lcm of the primes,
    /// doubled when a qubit factor is present so the phase i of the qubit
    /// Y operator is exactly representable.
    pub fn root_order(&self) -> u32 {
        let lcm = self.primes.iter().fold(1u32, |acc, &p| {
            let g = gcd(acc, p);
            acc / g * p
        });
        if self.primes.contains(&2) {
            2 * lcm
        } else {
            lcm
        }
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A non-identity generalized Pauli operator: per-factor exponent pairs
/// (b_i, c_i) meaning factor i carries X^{b_i} Z^{c_i}. Phase-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliOp {
    exponents: Vec<(u32, u32)>,
}

impl PauliOp {
    pub fn new(spec: &FactorSpec, exponents: Vec<(u32, u32)>) -> Result<Self, Error> {
        if exponents.len() != spec.factor_count() {
            return Err(Error::FactorSpecMismatch);
        }
        for (&p, &(b, c)) in spec.primes().iter().zip(&exponents) {
            if b >= p || c >= p {
                return Err(Error::FactorSpecMismatch);
            }
        }
        Ok(PauliOp { exponents })
    }

    pub fn exponents(&self) -> &[(u32, u32)] {
        &self.exponents
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(|&e| e == (0, 0))
    }

    /// Per-factor flags: true where the factor is the identity.
    pub fn identity_pattern(&self) -> Vec<bool> {
        self.exponents.iter().map(|&e| e == (0, 0)).collect()
    }
}

impl fmt::Display for PauliOp {
    /// Factor-exponent serialization, e.g. "X1Z0|X0Z1|X2Z1".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|&(b, c)| format!("X{b}Z{c}"))
            .collect();
        write!(f, "{}", parts.join("|"))
    }
}

/// All d^2 - 1 non-identity operators in lexicographic order on the
/// exponent tuples (first factor most significant, b before c).
pub fn enumerate_operators(spec: &FactorSpec) -> Vec<PauliOp> {
    let mut ops = Vec::with_capacity((spec.dimension() as usize).pow(2) - 1);
    let mut exps = vec![(0u32, 0u32); spec.factor_count()];
    loop {
        // advance mixed-radix counter (last factor fastest)
        let mut i = spec.factor_count();
        loop {
            if i == 0 {
                return ops;
            }
            i -= 1;
            let p = spec.primes()[i];
            let (b, c) = exps[i];
            if c + 1 < p {
                exps[i] = (b, c + 1);
                break;
            } else if b + 1 < p {
                exps[i] = (b + 1, 0);
                break;
            } else {
                exps[i] = (0, 0);
            }
        }
        ops.push(PauliOp {
            exponents: exps.clone(),
        });
    }
}

/// Symbolic commutation: for every prime p in the spec, the symplectic sum
/// over its factors must vanish mod p.
pub fn commutes(spec: &FactorSpec, a: &PauliOp, b: &PauliOp) -> bool {
    debug_assert_eq!(a.exponents.len(), spec.factor_count());
    debug_assert_eq!(b.exponents.len(), spec.factor_count());
    let mut primes_seen: Vec<(u32, i64)> = Vec::new();
    for (&p, (&(b1, c1), &(b2, c2))) in spec
        .primes()
        .iter()
        .zip(a.exponents.iter().zip(&b.exponents))
    {
        let s = b1 as i64 * c2 as i64 - c1 as i64 * b2 as i64;
        match primes_seen.iter_mut().find(|(q, _)| *q == p) {
            Some((_, acc)) => *acc += s,
            None => primes_seen.push((p, s)),
        }
    }
    primes_seen.iter().all(|&(p, s)| s.rem_euclid(p as i64) == 0)
}

/// An exact d x d monomial matrix: one root-of-unity entry per row and
/// column. `perm[r]` is the column of row r's entry; `phase[r]` its
/// exponent in Z_{root_order}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMatrix {
    size: usize,
    root_order: u32,
    perm: Vec<u32>,
    phase: Vec<u32>,
}

impl MonomialMatrix {
    pub fn identity(size: usize, root_order: u32) -> Self {
        MonomialMatrix {
            size,
            root_order,
            perm: (0..size as u32).collect(),
            phase: vec![0; size],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn root_order(&self) -> u32 {
        self.root_order
    }

    pub fn perm(&self) -> &[u32] {
        &self.perm
    }

    pub fn phase(&self) -> &[u32] {
        &self.phase
    }

    /// Exact matrix product.
    pub fn mul(&self, rhs: &MonomialMatrix) -> MonomialMatrix {
        assert_eq!(self.size, rhs.size, "size mismatch");
        assert_eq!(self.root_order, rhs.root_order, "root order mismatch");
        let mut perm = vec![0u32; self.size];
        let mut phase = vec![0u32; self.size];
        for r in 0..self.size {
            let mid = self.perm[r] as usize;
            perm[r] = rhs.perm[mid];
            phase[r] = (self.phase[r] + rhs.phase[mid]) % self.root_order;
        }
        MonomialMatrix {
            size: self.size,
            root_order: self.root_order,
            perm,
            phase,
        }
    }

    /// When `self = w^t * rhs` for a scalar root of unity, returns `t`.
    pub fn scalar_ratio(&self, rhs: &MonomialMatrix) -> Option<u32> {
        if self.size != rhs.size || self.perm != rhs.perm {
            return None;
        }
        let d = self.root_order;
        let t = (self.phase[0] + d - rhs.phase[0]) % d;
        self.phase
            .iter()
            .zip(&rhs.phase)
            .all(|(&a, &b)| (a + d - b) % d == t)
            .then_some(t)
    }
}

/// Kronecker product of the per-factor monomial matrices of X^{b_i} Z^{c_i}.
/// Qubit factors with (b, c) = (1, 1) get the conventional Y = i X Z phase,
/// representable because the root order is doubled for qubit-bearing specs.
pub fn to_monomial_matrix(spec: &FactorSpec, op: &PauliOp) -> MonomialMatrix {
    let d = spec.dimension() as usize;
    let root = spec.root_order();
    let mut perm = vec![0u32; d];
    let mut phase = vec![0u32; d];
    // per-factor action on a digit r: column (r - b) mod p, phase (D/p) * c * ((r - b) mod p)
    let factors: Vec<(u32, u32, u32, u32)> = spec
        .primes()
        .iter()
        .zip(op.exponents())
        .map(|(&p, &(b, c))| {
            let y_phase = if p == 2 && b == 1 && c == 1 {
                root / 4
            } else {
                0
            };
            (p, b, c, y_phase)
        })
        .collect();
    for (r, (pr, ph)) in perm.iter_mut().zip(phase.iter_mut()).enumerate() {
        let mut digits = Vec::with_capacity(factors.len());
        let mut rest = r as u32;
        for &(p, ..) in factors.iter().rev() {
            digits.push(rest % p);
            rest /= p;
        }
        digits.reverse();
        let mut col = 0u32;
        let mut ex = 0u32;
        for (&(p, b, c, y_phase), &digit) in factors.iter().zip(&digits) {
            let src = (digit + p - b) % p;
            col = col * p + src;
            ex = (ex + (root / p) * ((c * src) % p) + y_phase) % root;
        }
        *pr = col;
        *ph = ex;
    }
    MonomialMatrix {
        size: d,
        root_order: root,
        perm,
        phase,
    }
}

/// Ground-truth commutation check: compares the exact products M_a M_b and
/// M_b M_a entrywise.
pub fn commutes_oracle(spec: &FactorSpec, a: &PauliOp, b: &PauliOp) -> bool {
    let ma = to_monomial_matrix(spec, a);
    let mb = to_monomial_matrix(spec, b);
    ma.mul(&mb) == mb.mul(&ma)
}

/// Result of sweeping every operator pair through both commutation routes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSweep {
    pub operator_count: usize,
    pub pairs_checked: usize,
    /// index pairs where the symbolic rule and the matrix oracle disagree
    pub mismatches: Vec<(usize, usize)>,
}

/// Checks symbolic commutation against the monomial oracle on all pairs.
pub fn oracle_sweep(spec: &FactorSpec) -> OracleSweep {
    let ops = enumerate_operators(spec);
    let matrices: Vec<MonomialMatrix> = ops.iter().map(|op| to_monomial_matrix(spec, op)).collect();
    let n = ops.len();
    let mut mismatches: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let ops = &ops;
            let matrices = &matrices;
            (i + 1..n).filter_map(move |j| {
                let symbolic = commutes(spec, &ops[i], &ops[j]);
                let exact = matrices[i].mul(&matrices[j]) == matrices[j].mul(&matrices[i]);
                (symbolic != exact).then_some((i, j))
            })
        })
        .collect();
    mismatches.sort_unstable();
    OracleSweep {
        operator_count: n,
        pairs_checked: n * (n - 1) / 2,
        mismatches,
    }
}

/// Conventional sextit labeling: qutrit basis order (I, Z, X, Y, V, Z2, X2,
/// Y2, V2), qubit order (I, z, x, y); labels "1".."32" plus the reference
/// points "a_0", "b_0", "c_0".
pub fn sextit_label(spec: &FactorSpec, op: &PauliOp) -> Result<String, Error> {
    if spec.primes() != [2, 3] {
        return Err(Error::WrongFactors {
            expected: vec![2, 3],
            found: spec.primes().to_vec(),
        });
    }
    let qutrit_index = |e: (u32, u32)| -> u32 {
        match e {
            (0, 0) => 0,
            (0, 1) => 1, // Z
            (1, 0) => 2, // X
            (1, 1) => 3, // Y = XZ
            (1, 2) => 4, // V = XZ^2
            (0, 2) => 5, // Z^2
            (2, 0) => 6, // X^2
            (2, 2) => 7, // Y^2
            (2, 1) => 8, // V^2
            _ => unreachable!("qutrit exponents reduced mod 3"),
        }
    };
    let j = qutrit_index(op.exponents()[1]);
    let label = match op.exponents()[0] {
        (0, 0) => {
            debug_assert!(j != 0, "identity excluded from the census");
            j.to_string()
        }
        (0, 1) => {
            if j == 0 {
                "a_0".to_string()
            } else {
                (8 + j).to_string()
            }
        }
        (1, 0) => {
            if j == 0 {
                "b_0".to_string()
            } else {
                (16 + j).to_string()
            }
        }
        (1, 1) => {
            if j == 0 {
                "c_0".to_string()
            } else {
                (24 + j).to_string()
            }
        }
        _ => unreachable!("qubit exponents reduced mod 2"),
    };
    Ok(label)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(primes: &[u32]) -> FactorSpec {
        FactorSpec::new(primes.to_vec()).unwrap()
    }

    fn op(s: &FactorSpec, exps: &[(u32, u32)]) -> PauliOp {
        PauliOp::new(s, exps.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_operators(&spec(&[2, 3])).len(), 35);
        assert_eq!(enumerate_operators(&spec(&[2, 2, 3])).len(), 143);
        assert_eq!(enumerate_operators(&spec(&[2])).len(), 3);
        assert_eq!(enumerate_operators(&spec(&[2, 3, 3])).len(), 323);
    }

    #[test]
    fn enumeration_is_lexicographic_and_deterministic() {
        let s = spec(&[2, 3]);
        let ops = enumerate_operators(&s);
        let mut sorted = ops.clone();
        sorted.sort();
        assert_eq!(ops, sorted);
        assert_eq!(ops[0], op(&s, &[(0, 0), (0, 1)]));
        assert!(ops.iter().all(|o| !o.is_identity()));
    }

    #[test]
    fn dimension_factorization() {
        assert_eq!(FactorSpec::from_dimension(6).unwrap().primes(), &[2, 3]);
        assert_eq!(FactorSpec::from_dimension(12).unwrap().primes(), &[2, 2, 3]);
        assert_eq!(FactorSpec::from_dimension(18).unwrap().primes(), &[2, 3, 3]);
        assert!(FactorSpec::from_dimension(1).is_err());
        assert!(FactorSpec::new(vec![4]).is_err());
    }

    #[test]
    fn qubit_operators_anticommute() {
        let s = spec(&[2]);
        let x = op(&s, &[(1, 0)]);
        let z = op(&s, &[(0, 1)]);
        let xz = op(&s, &[(1, 1)]);
        assert!(!commutes(&s, &x, &z));
        assert!(!commutes(&s, &x, &xz));
        assert!(!commutes(&s, &z, &xz));
        for o in [&x, &z, &xz] {
            assert!(commutes(&s, o, o));
        }
    }

    #[test]
    fn sextit_commutation_example() {
        let s = spec(&[2, 3]);
        let a0 = op(&s, &[(0, 1), (0, 0)]); // z (x) I
        let one = op(&s, &[(0, 0), (0, 1)]); // I (x) Z
        assert!(commutes(&s, &a0, &one));
    }

    #[test]
    fn same_prime_factors_share_a_symplectic_sum() {
        let s = spec(&[2, 2, 3]);
        let a = op(&s, &[(1, 0), (0, 1), (0, 0)]); // X (x) Z (x) I
        let b = op(&s, &[(0, 1), (1, 0), (0, 0)]); // Z (x) X (x) I
        assert!(commutes(&s, &a, &b)); // contributions 1 + (-1) = 0 mod 2
        assert!(commutes_oracle(&s, &a, &b));
        let c = op(&s, &[(1, 0), (0, 0), (0, 0)]);
        let d = op(&s, &[(0, 1), (0, 0), (0, 0)]);
        assert!(!commutes(&s, &c, &d));
        assert!(!commutes_oracle(&s, &c, &d));
    }

    #[test]
    fn monomial_of_qubit_shift() {
        let s = spec(&[2]);
        let m = to_monomial_matrix(&s, &op(&s, &[(1, 0)]));
        assert_eq!(m.perm(), &[1, 0]);
        assert_eq!(m.phase(), &[0, 0]);
        assert_eq!(m.root_order(), 4); // doubled for the qubit Y phase
    }

    #[test]
    fn monomial_of_qutrit_clock() {
        let s = spec(&[3]);
        let m = to_monomial_matrix(&s, &op(&s, &[(0, 1)]));
        assert_eq!(m.root_order(), 3);
        assert_eq!(m.perm(), &[0, 1, 2]);
        assert_eq!(m.phase(), &[0, 1, 2]); // w^s on the diagonal
    }

    #[test]
    fn monomial_of_sextit_block_operator() {
        // x (x) Z at d = 6: permutation swaps the two 3-blocks, phases cycle
        // through the cube roots of unity within each block (D = 12).
        let s = spec(&[2, 3]);
        let m = to_monomial_matrix(&s, &op(&s, &[(1, 0), (0, 1)]));
        assert_eq!(m.root_order(), 12);
        assert_eq!(m.perm(), &[3, 4, 5, 0, 1, 2]);
        assert_eq!(m.phase(), &[0, 4, 8, 0, 4, 8]);
    }

    #[test]
    fn clock_shift_basic_relation() {
        // Z X = w X Z exactly, as a scalar ratio of monomial matrices
        let s = spec(&[3]);
        let x = to_monomial_matrix(&s, &op(&s, &[(1, 0)]));
        let z = to_monomial_matrix(&s, &op(&s, &[(0, 1)]));
        let zx = z.mul(&x);
        let xz = x.mul(&z);
        assert_ne!(zx, xz);
        assert_eq!(zx.scalar_ratio(&xz), Some(1)); // w^1
    }

    #[test]
    fn qubit_y_matrix_is_exact() {
        // Y = i X Z: entries -i and i, i.e. exponents 3 and 1 at D = 4
        let s = spec(&[2]);
        let y = to_monomial_matrix(&s, &op(&s, &[(1, 1)]));
        assert_eq!(y.perm(), &[1, 0]);
        assert_eq!(y.phase(), &[3, 1]);
        // Y anticommutes with X and Z
        let x = to_monomial_matrix(&s, &op(&s, &[(1, 0)]));
        let z = to_monomial_matrix(&s, &op(&s, &[(0, 1)]));
        assert_eq!(y.mul(&x).scalar_ratio(&x.mul(&y)), Some(2)); // -1
        assert_eq!(y.mul(&z).scalar_ratio(&z.mul(&y)), Some(2));
    }

    #[test]
    fn commutator_ratio_is_always_scalar_at_d6() {
        let s = spec(&[2, 3]);
        let ops = enumerate_operators(&s);
        let mats: Vec<_> = ops.iter().map(|o| to_monomial_matrix(&s, o)).collect();
        for i in 0..mats.len() {
            for j in i..mats.len() {
                let ab = mats[i].mul(&mats[j]);
                let ba = mats[j].mul(&mats[i]);
                assert!(
                    ab.scalar_ratio(&ba).is_some(),
                    "commutator of {} and {} is not scalar",
                    ops[i],
                    ops[j]
                );
            }
        }
    }

    #[test]
    fn oracle_sweep_d6_is_clean() {
        let sweep = oracle_sweep(&spec(&[2, 3]));
        assert_eq!(sweep.operator_count, 35);
        assert_eq!(sweep.pairs_checked, 35 * 34 / 2);
        assert!(sweep.mismatches.is_empty());
    }

    #[test]
    fn sextit_labels() {
        let s = spec(&[2, 3]);
        let lab = |exps: &[(u32, u32)]| sextit_label(&s, &op(&s, exps)).unwrap();
        assert_eq!(lab(&[(0, 0), (0, 1)]), "1"); // I (x) Z
        assert_eq!(lab(&[(1, 0), (0, 0)]), "b_0"); // x (x) I
        assert_eq!(lab(&[(1, 1), (2, 1)]), "32"); // y (x) V^2
        assert_eq!(lab(&[(0, 1), (0, 2)]), "13"); // z (x) Z^2
        // all 35 labels distinct
        let ops = enumerate_operators(&s);
        let mut labels: Vec<String> = ops.iter().map(|o| sextit_label(&s, o).unwrap()).collect();
        labels.sort();
        labels.dedup();
        assert_eq!(labels.len(), 35);
    }

    #[test]
    fn sextit_labels_require_d6() {
        let s = spec(&[2, 5]);
        let o = op(&s, &[(1, 0), (0, 0)]);
        assert!(matches!(
            sextit_label(&s, &o),
            Err(Error::WrongFactors { .. })
        ));
    }

    #[test]
    fn op_construction_validates() {
        let s = spec(&[2, 3]);
        assert!(PauliOp::new(&s, vec![(0, 1)]).is_err());
        assert!(PauliOp::new(&s, vec![(2, 0), (0, 0)]).is_err());
    }

    #[test]
    fn display_format() {
        let s = spec(&[2, 3, 3]);
        let o = op(&s, &[(1, 0), (0, 1), (2, 1)]);
        assert_eq!(o.to_string(), "X1Z0|X0Z1|X2Z1");
    }
}
