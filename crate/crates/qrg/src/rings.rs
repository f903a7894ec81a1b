//! Exact arithmetic in finite commutative rings given as direct products of
//! local components: residue rings Z_{p^k} and Galois fields GF(p^k).
//!
//! Elements carry a handle to their parent ring and store one canonical
//! coordinate per component (an integer residue, or a base-p packed
//! polynomial coefficient vector for field components). All arithmetic is
//! componentwise and exact.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::Rng;

use crate::error::Error;

/// Returns `Some((p, k))` when `m = p^k` for a prime `p` and `k >= 1`.
pub fn prime_power(m: u32) -> Option<(u32, u32)> {
    if m < 2 {
        return None;
    }
    let p = (2..=m).find(|q| m % q == 0).unwrap();
    let mut rest = m;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

pub fn is_prime(n: u32) -> bool {
    matches!(prime_power(n), Some((_, 1)))
}

/// One local component of a product ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LocalSpec {
    /// The residue ring Z_m with m a prime power.
    Residue { modulus: u32 },
    /// GF(p^k) presented as Z_p[x] modulo a monic irreducible polynomial
    /// x^k + poly[k-1] x^{k-1} + ... + poly[0].
    GaloisField { p: u32, k: u32, poly: Vec<u32> },
}

impl LocalSpec {
    pub fn residue(modulus: u32) -> Self {
        LocalSpec::Residue { modulus }
    }

    /// GF(q) with the default irreducible polynomial for q = p^k.
    pub fn galois(q: u32) -> Result<Self, Error> {
        let (p, k) = prime_power(q).ok_or(Error::InvalidFieldOrder(q))?;
        if k == 1 {
            // GF(p) and Z_p coincide; canonical spelling is the residue ring.
            return Ok(LocalSpec::Residue { modulus: p });
        }
        let poly = default_irreducible(p, k);
        Ok(LocalSpec::GaloisField { p, k, poly })
    }

    pub fn order(&self) -> u32 {
        match self {
            LocalSpec::Residue { modulus } => *modulus,
            LocalSpec::GaloisField { p, k, .. } => p.pow(*k),
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            LocalSpec::Residue { modulus } => prime_power(*modulus).map(|(p, _)| p).unwrap_or(0),
            LocalSpec::GaloisField { p, .. } => *p,
        }
    }

    pub fn is_field(&self) -> bool {
        match self {
            LocalSpec::Residue { modulus } => is_prime(*modulus),
            LocalSpec::GaloisField { .. } => true,
        }
    }

    fn validate(&self) -> Result<(), Error> {
        match self {
            LocalSpec::Residue { modulus } => {
                prime_power(*modulus).ok_or(Error::InvalidModulus(*modulus))?;
                Ok(())
            }
            LocalSpec::GaloisField { p, k, poly } => {
                if !is_prime(*p) {
                    return Err(Error::NotPrime(*p));
                }
                if poly.len() as u32 != *k || *k == 0 {
                    return Err(Error::DegreeMismatch {
                        expected: *k,
                        found: poly.len() as u32,
                    });
                }
                if let Some(&c) = poly.iter().find(|&&c| c >= *p) {
                    return Err(Error::CoefficientOutOfRange { coeff: c, p: *p });
                }
                if !is_irreducible(*p, poly) {
                    return Err(Error::ReduciblePolynomial { p: *p });
                }
                Ok(())
            }
        }
    }

    fn name(&self) -> String {
        match self {
            LocalSpec::Residue { modulus } => format!("Z{modulus}"),
            LocalSpec::GaloisField { p, k, .. } => format!("F{}", p.pow(*k)),
        }
    }
}

/// Smallest monic irreducible polynomial of degree `k` over Z_p, by packed
/// coefficient value. For (2,2) this is x^2+x+1.
fn default_irreducible(p: u32, k: u32) -> Vec<u32> {
    let total = p.pow(k);
    for packed in 0..total {
        let poly: Vec<u32> = (0..k).map(|i| (packed / p.pow(i)) % p).collect();
        if is_irreducible(p, &poly) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over Z_p");
}

/// Exhaustive irreducibility test: no monic divisor of degree 1..=k/2.
fn is_irreducible(p: u32, poly: &[u32]) -> bool {
    let k = poly.len();
    if k == 1 {
        return true;
    }
    // full coefficient vector of the candidate, degree k, monic
    let mut f: Vec<u32> = poly.to_vec();
    f.push(1);
    for m in 1..=k / 2 {
        let count = p.pow(m as u32);
        for packed in 0..count {
            let mut g: Vec<u32> = (0..m as u32).map(|i| (packed / p.pow(i)) % p).collect();
            g.push(1);
            if poly_divides(p, &g, &f) {
                return false;
            }
        }
    }
    true
}

/// Whether monic `g` divides `f` over Z_p (coefficients ascending).
fn poly_divides(p: u32, g: &[u32], f: &[u32]) -> bool {
    let mut rem: Vec<u32> = f.to_vec();
    let dg = g.len() - 1;
    while rem.len() > dg {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            let shift = rem.len() - 1 - dg;
            for (i, &gc) in g.iter().enumerate() {
                let idx = shift + i;
                rem[idx] = (rem[idx] + p - (lead * gc) % p) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

/// A finite commutative ring as an ordered product of local components.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingSpec {
    pub components: Vec<LocalSpec>,
}

impl RingSpec {
    pub fn new(components: Vec<LocalSpec>) -> Self {
        RingSpec { components }
    }

    /// CRT-splits composite residue moduli, normalizes GF(p) to Z_p and sorts
    /// components by (order, residue-before-field, characteristic), so that
    /// Z6xF4 and Z2xZ3xF4 denote the same ring.
    pub fn canonicalize(&self) -> Result<RingSpec, Error> {
        let mut out = Vec::new();
        for comp in &self.components {
            match comp {
                LocalSpec::Residue { modulus } => {
                    if *modulus < 2 {
                        return Err(Error::InvalidModulus(*modulus));
                    }
                    let mut rest = *modulus;
                    let mut q = 2;
                    while rest > 1 {
                        if rest % q == 0 {
                            let mut pk = 1;
                            while rest % q == 0 {
                                rest /= q;
                                pk *= q;
                            }
                            out.push(LocalSpec::Residue { modulus: pk });
                        }
                        q += 1;
                    }
                }
                LocalSpec::GaloisField { p, k, .. } if *k == 1 => {
                    out.push(LocalSpec::Residue { modulus: *p });
                }
                field => out.push(field.clone()),
            }
        }
        out.sort_by_key(|c| {
            (
                c.order(),
                matches!(c, LocalSpec::GaloisField { .. }),
                c.characteristic(),
            )
        });
        Ok(RingSpec { components: out })
    }

    /// Canonical spelling, e.g. "Z2xZ3xF4".
    pub fn name(&self) -> String {
        self.components
            .iter()
            .map(LocalSpec::name)
            .collect::<Vec<_>>()
            .join("x")
    }
}

/// Runtime data for one component: packed-value arithmetic tables.
#[derive(Debug)]
struct Component {
    spec: LocalSpec,
    order: u32,
    p: u32,
    /// multiplication table for field components (packed values)
    mul_table: Option<Vec<u32>>,
}

impl Component {
    fn new(spec: &LocalSpec) -> Self {
        let order = spec.order();
        let p = spec.characteristic();
        let mul_table = match spec {
            LocalSpec::Residue { .. } => None,
            LocalSpec::GaloisField { p, k, poly } => {
                let mut table = vec![0u32; (order * order) as usize];
                for a in 0..order {
                    for b in 0..order {
                        table[(a * order + b) as usize] = field_mul(*p, *k, poly, a, b);
                    }
                }
                Some(table)
            }
        };
        Component {
            spec: spec.clone(),
            order,
            p,
            mul_table,
        }
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        match &self.spec {
            LocalSpec::Residue { modulus } => (a + b) % modulus,
            LocalSpec::GaloisField { p, k, .. } => {
                let mut out = 0;
                let mut place = 1;
                for i in 0..*k {
                    let da = (a / p.pow(i)) % p;
                    let db = (b / p.pow(i)) % p;
                    out += ((da + db) % p) * place;
                    place *= p;
                }
                out
            }
        }
    }

    fn neg(&self, a: u32) -> u32 {
        match &self.spec {
            LocalSpec::Residue { modulus } => (modulus - a) % modulus,
            LocalSpec::GaloisField { p, k, .. } => {
                let mut out = 0;
                let mut place = 1;
                for i in 0..*k {
                    let da = (a / p.pow(i)) % p;
                    out += ((p - da) % p) * place;
                    place *= p;
                }
                out
            }
        }
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.mul_table {
            Some(table) => table[(a * self.order + b) as usize],
            None => match &self.spec {
                LocalSpec::Residue { modulus } => {
                    ((a as u64 * b as u64) % *modulus as u64) as u32
                }
                LocalSpec::GaloisField { .. } => unreachable!(),
            },
        }
    }

    fn is_unit(&self, a: u32) -> bool {
        match &self.spec {
            LocalSpec::Residue { .. } => a % self.p != 0,
            LocalSpec::GaloisField { .. } => a != 0,
        }
    }

    fn one(&self) -> u32 {
        1
    }
}

/// Polynomial multiplication in GF(p^k) on packed values.
fn field_mul(p: u32, k: u32, poly: &[u32], a: u32, b: u32) -> u32 {
    let digits = |v: u32| -> Vec<u32> { (0..k).map(|i| (v / p.pow(i)) % p).collect() };
    let da = digits(a);
    let db = digits(b);
    let mut raw = vec![0u32; (2 * k - 1) as usize];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            raw[i + j] = (raw[i + j] + x * y) % p;
        }
    }
    // reduce with x^k = -poly
    for deg in (k as usize..raw.len()).rev() {
        let c = raw[deg];
        if c != 0 {
            raw[deg] = 0;
            for i in 0..k as usize {
                let idx = deg - k as usize + i;
                raw[idx] = (raw[idx] + p - (c * poly[i]) % p) % p;
            }
        }
    }
    let mut out = 0;
    let mut place = 1;
    for &c in raw.iter().take(k as usize) {
        out += c * place;
        place *= p;
    }
    out
}

#[derive(Debug)]
struct RingInner {
    spec: RingSpec,
    components: Vec<Component>,
    order: u64,
}

/// Immutable handle to a constructed ring. Cloning is cheap; all operations
/// are pure and safe to call from multiple threads.
#[derive(Debug, Clone)]
pub struct Ring {
    inner: Arc<RingInner>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.spec == other.inner.spec
    }
}
impl Eq for Ring {}

impl Ring {
    /// Validates the spec and builds the arithmetic tables.
    pub fn new(spec: RingSpec) -> Result<Ring, Error> {
        if spec.components.is_empty() {
            return Err(Error::InvalidModulus(1));
        }
        for comp in &spec.components {
            comp.validate()?;
        }
        let components: Vec<Component> = spec.components.iter().map(Component::new).collect();
        let order = components.iter().map(|c| c.order as u64).product();
        Ok(Ring {
            inner: Arc::new(RingInner {
                spec,
                components,
                order,
            }),
        })
    }

    /// Parses a ring expression ("Z6", "Z2xZ3xF4", "GF(4)") and canonicalizes it.
    pub fn parse(text: &str) -> Result<Ring, Error> {
        Ring::new(parse_ring_expr(text)?)
    }

    pub fn spec(&self) -> &RingSpec {
        &self.inner.spec
    }

    pub fn name(&self) -> String {
        self.inner.spec.name()
    }

    pub fn order(&self) -> u64 {
        self.inner.order
    }

    pub fn component_count(&self) -> usize {
        self.inner.components.len()
    }

    pub fn component_order(&self, index: usize) -> u32 {
        self.inner.components[index].order
    }

    /// Whether a packed coordinate is a unit in the given local component.
    pub fn coordinate_is_unit(&self, component: usize, packed: u32) -> bool {
        self.inner.components[component].is_unit(packed)
    }

    fn components(&self) -> &[Component] {
        &self.inner.components
    }

    pub fn zero(&self) -> RingElement {
        RingElement {
            ring: self.clone(),
            coords: vec![0; self.component_count()],
        }
    }

    pub fn one(&self) -> RingElement {
        RingElement {
            ring: self.clone(),
            coords: self.components().iter().map(Component::one).collect(),
        }
    }

    /// Canonical image of an integer (the unique ring homomorphism from Z).
    pub fn from_residue(&self, n: i64) -> RingElement {
        let coords = self
            .components()
            .iter()
            .map(|c| match &c.spec {
                LocalSpec::Residue { modulus } => n.rem_euclid(*modulus as i64) as u32,
                LocalSpec::GaloisField { p, .. } => n.rem_euclid(*p as i64) as u32,
            })
            .collect();
        RingElement {
            ring: self.clone(),
            coords,
        }
    }

    /// Element from explicit per-component packed coordinates.
    pub fn element(&self, coords: &[u32]) -> Result<RingElement, Error> {
        if coords.len() != self.component_count() {
            return Err(Error::CoordinateCount {
                expected: self.component_count(),
                found: coords.len(),
            });
        }
        for (i, (&v, c)) in coords.iter().zip(self.components()).enumerate() {
            if v >= c.order {
                return Err(Error::CoordinateOutOfRange {
                    component: i,
                    value: v,
                });
            }
        }
        Ok(RingElement {
            ring: self.clone(),
            coords: coords.to_vec(),
        })
    }

    /// The element at `index` in the deterministic enumeration order
    /// (lexicographic on coordinates, first component most significant).
    pub fn element_at(&self, index: u64) -> RingElement {
        debug_assert!(index < self.order());
        let mut coords = vec![0u32; self.component_count()];
        let mut rest = index;
        for (i, comp) in self.components().iter().enumerate().rev() {
            coords[i] = (rest % comp.order as u64) as u32;
            rest /= comp.order as u64;
        }
        RingElement {
            ring: self.clone(),
            coords,
        }
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = RingElement> + '_ {
        (0..self.order()).map(|i| self.element_at(i))
    }

    /// Uniformly random element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> RingElement {
        self.element_at(rng.gen_range(0..self.order()))
    }

    pub fn units_count(&self) -> u64 {
        self.components()
            .iter()
            .map(|c| (0..c.order).filter(|&v| c.is_unit(v)).count() as u64)
            .product()
    }

    /// One maximal ideal per local component.
    pub fn maximal_ideals(&self) -> Vec<MaximalIdeal> {
        (0..self.component_count())
            .map(|component| MaximalIdeal {
                ring: self.clone(),
                component,
            })
            .collect()
    }

    /// The maximal ideal at `component` viewed as a ring, when it is one:
    /// for a field component the ideal is {0} x (rest), the product of the
    /// remaining components. Not a unital ring otherwise.
    pub fn ideal_subring(&self, component: usize) -> Option<RingSpec> {
        if !self.inner.spec.components[component].is_field() || self.component_count() < 2 {
            return None;
        }
        let components = self
            .inner
            .spec
            .components
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != component)
            .map(|(_, c)| c.clone())
            .collect();
        Some(RingSpec::new(components))
    }

    /// True when the ring is Z_d for a square-free d (distinct prime
    /// residue components).
    pub fn is_square_free_modular(&self) -> bool {
        let mut primes: Vec<u32> = Vec::new();
        for c in &self.inner.spec.components {
            match c {
                LocalSpec::Residue { modulus } if is_prime(*modulus) => primes.push(*modulus),
                _ => return false,
            }
        }
        primes.sort_unstable();
        primes.windows(2).all(|w| w[0] != w[1])
    }

    fn check_same(&self, other: &Ring) -> Result<(), Error> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }
}

/// An element of a [`Ring`], stored as canonical per-component coordinates.
#[derive(Debug, Clone)]
pub struct RingElement {
    ring: Ring,
    coords: Vec<u32>,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.coords == other.coords
    }
}
impl Eq for RingElement {}

impl Hash for RingElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl PartialOrd for RingElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RingElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl RingElement {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, Error> {
        self.ring.check_same(&other.ring)?;
        let coords = self
            .ring
            .components()
            .iter()
            .zip(self.coords.iter().zip(&other.coords))
            .map(|(c, (&a, &b))| c.add(a, b))
            .collect();
        Ok(RingElement {
            ring: self.ring.clone(),
            coords,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, Error> {
        self.ring.check_same(&other.ring)?;
        let coords = self
            .ring
            .components()
            .iter()
            .zip(self.coords.iter().zip(&other.coords))
            .map(|(c, (&a, &b))| c.mul(a, b))
            .collect();
        Ok(RingElement {
            ring: self.ring.clone(),
            coords,
        })
    }

    pub fn neg(&self) -> Self {
        let coords = self
            .ring
            .components()
            .iter()
            .zip(&self.coords)
            .map(|(c, &a)| c.neg(a))
            .collect();
        RingElement {
            ring: self.ring.clone(),
            coords,
        }
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, Error> {
        self.checked_add(&other.neg())
    }

    /// True iff every coordinate is invertible in its local component.
    pub fn is_unit(&self) -> bool {
        self.ring
            .components()
            .iter()
            .zip(&self.coords)
            .all(|(c, &a)| c.is_unit(a))
    }

    /// In these finite rings every non-unit (including zero) is a zero
    /// divisor, so units and zero divisors partition the ring.
    pub fn is_zero_divisor(&self) -> bool {
        !self.is_unit()
    }

    /// Brute-force multiplicative inverse.
    pub fn inverse(&self) -> Option<RingElement> {
        let one = self.ring.one();
        self.ring
            .elements()
            .find(|b| self.checked_mul(b).expect("same ring") == one)
    }
}

impl std::ops::Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        self.checked_add(rhs).expect("ring mismatch in +")
    }
}

impl std::ops::Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        self.checked_sub(rhs).expect("ring mismatch in -")
    }
}

impl std::ops::Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        self.checked_mul(rhs).expect("ring mismatch in *")
    }
}

impl std::ops::Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement::neg(self)
    }
}

impl fmt::Display for RingElement {
    /// Residue-only rings with pairwise coprime moduli print as the CRT
    /// integer (so Z2xZ3 elements read as 0..5); otherwise a coordinate
    /// tuple, with field coordinates written as polynomials in w.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.crt_value() {
            return write!(f, "{n}");
        }
        let parts: Vec<String> = self
            .ring
            .components()
            .iter()
            .zip(&self.coords)
            .map(|(c, &v)| match &c.spec {
                LocalSpec::Residue { .. } => v.to_string(),
                LocalSpec::GaloisField { p, k, .. } => format_field_elem(*p, *k, v),
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

impl RingElement {
    /// The CRT integer when all components are residue rings with pairwise
    /// coprime moduli.
    pub fn crt_value(&self) -> Option<u64> {
        let mut moduli = Vec::new();
        for c in self.ring.components() {
            match &c.spec {
                LocalSpec::Residue { modulus } => moduli.push(*modulus as u64),
                LocalSpec::GaloisField { .. } => return None,
            }
        }
        for i in 0..moduli.len() {
            for j in i + 1..moduli.len() {
                if gcd(moduli[i], moduli[j]) != 1 {
                    return None;
                }
            }
        }
        let total: u64 = moduli.iter().product();
        let mut x = 0u64;
        for (m, &r) in moduli.iter().zip(self.coords.iter()) {
            let rest = total / m;
            let inv = (1..*m).find(|&t| (rest % m) * t % m == 1).unwrap_or(0);
            x = (x + r as u64 * rest % total * inv) % total;
        }
        Some(x)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn format_field_elem(p: u32, k: u32, packed: u32) -> String {
    if packed == 0 {
        return "0".to_string();
    }
    let mut terms = Vec::new();
    for i in (0..k).rev() {
        let c = (packed / p.pow(i)) % p;
        if c == 0 {
            continue;
        }
        let t = match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "w".to_string(),
            (1, c) => format!("{c}w"),
            (i, 1) => format!("w^{i}"),
            (i, c) => format!("{c}w^{i}"),
        };
        terms.push(t);
    }
    terms.join("+")
}

/// A maximal ideal of a product ring: the pullback of one component's
/// unique maximal ideal.
#[derive(Debug, Clone)]
pub struct MaximalIdeal {
    ring: Ring,
    component: usize,
}

impl MaximalIdeal {
    pub fn component_index(&self) -> usize {
        self.component
    }

    pub fn contains(&self, elem: &RingElement) -> bool {
        !self.ring.components()[self.component].is_unit(elem.coords()[self.component])
    }

    pub fn len(&self) -> u64 {
        let comp = &self.ring.components()[self.component];
        let non_units = (0..comp.order).filter(|&v| !comp.is_unit(v)).count() as u64;
        non_units * self.ring.order() / comp.order as u64
    }

    pub fn is_empty(&self) -> bool {
        false // always contains zero
    }

    pub fn elements(&self) -> Vec<RingElement> {
        self.ring.elements().filter(|e| self.contains(e)).collect()
    }
}

/// Parses the grammar `expr := term ("x" term)*` with
/// `term := "Z" uint | "F" uint | "GF(" uint ")"`, whitespace-insensitive.
/// Composite Z moduli are CRT-split and the result is canonicalized.
pub fn parse_ring_expr(text: &str) -> Result<RingSpec, Error> {
    // strip whitespace, remembering original byte offsets for error messages
    let stripped: Vec<(usize, char)> = text
        .char_indices()
        .filter(|(_, ch)| !ch.is_whitespace())
        .collect();
    if stripped.is_empty() {
        return Err(Error::ParseRing {
            position: 0,
            message: "empty ring expression".into(),
        });
    }
    let mut components = Vec::new();
    let mut i = 0;
    loop {
        let (pos, term_end) = parse_term(&stripped, i, &mut components)?;
        i = term_end;
        if i == stripped.len() {
            break;
        }
        let (xpos, xch) = stripped[i];
        if xch != 'x' {
            return Err(Error::ParseRing {
                position: xpos,
                message: format!("expected 'x' between terms, found {xch:?}"),
            });
        }
        i += 1;
        if i == stripped.len() {
            return Err(Error::ParseRing {
                position: pos,
                message: "trailing 'x' without a term".into(),
            });
        }
    }
    RingSpec::new(components).canonicalize()
}

fn parse_term(
    stripped: &[(usize, char)],
    start: usize,
    components: &mut Vec<LocalSpec>,
) -> Result<(usize, usize), Error> {
    let (pos, first) = stripped[start];
    let mut i = start;
    let (kind, needs_paren) = match first {
        'Z' => {
            i += 1;
            ('Z', false)
        }
        'G' => {
            if stripped.get(start + 1).map(|&(_, c)| c) != Some('F')
                || stripped.get(start + 2).map(|&(_, c)| c) != Some('(')
            {
                return Err(Error::ParseRing {
                    position: pos,
                    message: "expected GF(q)".into(),
                });
            }
            i += 3;
            ('F', true)
        }
        'F' => {
            i += 1;
            ('F', false)
        }
        other => {
            return Err(Error::ParseRing {
                position: pos,
                message: format!("expected Z, F or GF, found {other:?}"),
            });
        }
    };
    let digits_start = i;
    let mut value: u64 = 0;
    while let Some(&(_, c)) = stripped.get(i) {
        if let Some(d) = c.to_digit(10) {
            value = value * 10 + d as u64;
            if value > u32::MAX as u64 {
                return Err(Error::ParseRing {
                    position: pos,
                    message: "number too large".into(),
                });
            }
            i += 1;
        } else {
            break;
        }
    }
    if i == digits_start {
        return Err(Error::ParseRing {
            position: stripped.get(i).map(|&(p, _)| p).unwrap_or(pos),
            message: "expected a number".into(),
        });
    }
    if needs_paren {
        if stripped.get(i).map(|&(_, c)| c) != Some(')') {
            return Err(Error::ParseRing {
                position: stripped.get(i).map(|&(p, _)| p).unwrap_or(pos),
                message: "expected ')'".into(),
            });
        }
        i += 1;
    }
    let value = value as u32;
    match kind {
        'Z' => {
            if value < 2 {
                return Err(Error::ParseRing {
                    position: pos,
                    message: format!("Z modulus must be >= 2, got {value}"),
                });
            }
            components.push(LocalSpec::Residue { modulus: value });
        }
        _ => {
            let field = LocalSpec::galois(value).map_err(|_| Error::ParseRing {
                position: pos,
                message: format!("{value} is not a prime power"),
            })?;
            components.push(field);
        }
    }
    Ok((pos, i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(expr: &str) -> Ring {
        Ring::parse(expr).unwrap()
    }

    #[test]
    fn z6_splits_and_orders() {
        let z6 = ring("Z6");
        assert_eq!(z6.name(), "Z2xZ3");
        assert_eq!(z6.order(), 6);
        assert_eq!(z6.component_count(), 2);
    }

    #[test]
    fn gf4_units() {
        let f4 = ring("F4");
        assert_eq!(f4.order(), 4);
        // field: every nonzero element is a unit
        assert_eq!(f4.units_count(), 3);
        match &f4.spec().components[0] {
            LocalSpec::GaloisField { p, k, poly } => {
                assert_eq!((*p, *k), (2, 2));
                assert_eq!(poly, &vec![1, 1]); // x^2 + x + 1
            }
            other => panic!("expected field, got {other:?}"),
        }
    }

    #[test]
    fn product_ring_unit_count_matches_brute_force() {
        let r = ring("Z2xZ3xF4");
        assert_eq!(r.order(), 24);
        // oracle: brute-force inverse search over all elements
        let brute = r.elements().filter(|a| a.inverse().is_some()).count() as u64;
        assert_eq!(brute, 6);
        assert_eq!(r.units_count(), brute);
    }

    #[test]
    fn zero_divisor_product_in_z6() {
        let z6 = ring("Z6");
        let two = z6.from_residue(2);
        let three = z6.from_residue(3);
        assert!((&two * &three).is_zero());
    }

    #[test]
    fn gf4_generator_squares_to_w_plus_one() {
        let f4 = ring("F4");
        let w = f4.element(&[2]).unwrap(); // coords of x
        let sq = &w * &w;
        // oracle: x^2 mod (x^2+x+1) = x+1, packed as 3
        assert_eq!(sq.coords(), &[3]);
        assert_eq!(sq.to_string(), "(w+1)");
    }

    #[test]
    fn componentwise_addition() {
        let r = ring("Z2xZ3");
        let a = r.element(&[1, 2]).unwrap();
        let sum = &a + &a;
        assert_eq!(sum.coords(), &[0, 1]);
    }

    #[test]
    fn unit_classification_in_z6() {
        let z6 = ring("Z6");
        assert!(z6.from_residue(5).is_unit()); // 5*5 = 25 = 1 mod 6
        assert_eq!(
            z6.from_residue(5).inverse().map(|e| e.crt_value()),
            Some(Some(5))
        );
        assert!(z6.from_residue(2).is_zero_divisor());
        assert!(!z6.from_residue(2).is_unit());
        let e10 = ring("Z2xZ3").element(&[1, 0]).unwrap();
        assert!(e10.is_zero_divisor());
        assert!(!e10.is_unit());
    }

    #[test]
    fn unit_iff_inverse_exists_small_rings() {
        for expr in ["Z6", "F4", "Z4", "Z2xZ3", "F8", "Z9"] {
            let r = ring(expr);
            for a in r.elements() {
                assert_eq!(a.is_unit(), a.inverse().is_some(), "{expr}: {a}");
            }
        }
    }

    #[test]
    fn units_and_zero_divisors_partition() {
        for expr in ["Z6", "Z2xZ3xF4", "Z12"] {
            let r = ring(expr);
            let units = r.elements().filter(RingElement::is_unit).count() as u64;
            let zds = r.elements().filter(RingElement::is_zero_divisor).count() as u64;
            assert_eq!(units + zds, r.order());
        }
    }

    #[test]
    fn maximal_ideals_of_z6() {
        let z6 = ring("Z6");
        let ideals = z6.maximal_ideals();
        assert_eq!(ideals.len(), 2);
        let sizes: Vec<u64> = ideals.iter().map(MaximalIdeal::len).collect();
        // multiples of 2 (size 3) and multiples of 3 (size 2)
        assert_eq!(sizes, vec![3, 2]);
        for ideal in &ideals {
            assert_eq!(ideal.elements().len() as u64, ideal.len());
        }
    }

    #[test]
    fn maximal_ideals_of_z2z3f4() {
        let r = ring("Z2xZ3xF4");
        let ideals = r.maximal_ideals();
        assert_eq!(ideals.len(), 3);
        let sizes: Vec<u64> = ideals.iter().map(MaximalIdeal::len).collect();
        assert_eq!(sizes, vec![12, 8, 6]);
        // pairwise and triple intersections, by exhaustive membership count
        let pair = |i: usize, j: usize| {
            r.elements()
                .filter(|e| ideals[i].contains(e) && ideals[j].contains(e))
                .count()
        };
        assert_eq!(pair(0, 1), 4);
        assert_eq!(pair(0, 2), 3);
        assert_eq!(pair(1, 2), 2);
        let triple = r
            .elements()
            .filter(|e| ideals.iter().all(|id| id.contains(e)))
            .count();
        assert_eq!(triple, 1);
    }

    #[test]
    fn field_has_single_zero_ideal() {
        let f4 = ring("F4");
        let ideals = f4.maximal_ideals();
        assert_eq!(ideals.len(), 1);
        assert_eq!(ideals[0].len(), 1);
        assert!(ideals[0].contains(&f4.zero()));
    }

    #[test]
    fn ideals_cover_exactly_the_non_units() {
        for expr in ["Z6", "Z2xZ3xF4", "Z12", "Z9"] {
            let r = ring(expr);
            let ideals = r.maximal_ideals();
            for e in r.elements() {
                let covered = ideals.iter().any(|id| id.contains(&e));
                assert_eq!(covered, !e.is_unit(), "{expr}: {e}");
            }
        }
    }

    #[test]
    fn product_arithmetic_is_componentwise() {
        let r = ring("Z2xZ3");
        let z2 = ring("Z2");
        let z3 = ring("Z3");
        for a in r.elements() {
            for b in r.elements() {
                let sum = &a + &b;
                let prod = &a * &b;
                for (comp, single) in [(0usize, &z2), (1usize, &z3)] {
                    let ca = single.element(&[a.coords()[comp]]).unwrap();
                    let cb = single.element(&[b.coords()[comp]]).unwrap();
                    assert_eq!(sum.coords()[comp], (&ca + &cb).coords()[0]);
                    assert_eq!(prod.coords()[comp], (&ca * &cb).coords()[0]);
                }
            }
        }
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let r = ring("Z2xZ3");
        let coords: Vec<Vec<u32>> = r.elements().map(|e| e.coords().to_vec()).collect();
        let mut sorted = coords.clone();
        sorted.sort();
        assert_eq!(coords, sorted);
        assert_eq!(coords[0], vec![0, 0]);
        assert_eq!(coords[5], vec![1, 2]);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            Ring::new(RingSpec::new(vec![LocalSpec::residue(6)])),
            Err(Error::InvalidModulus(6))
        ));
        let bad_poly = LocalSpec::GaloisField {
            p: 2,
            k: 2,
            poly: vec![1, 0], // x^2 + 1 = (x+1)^2 over Z2
        };
        assert!(matches!(
            Ring::new(RingSpec::new(vec![bad_poly])),
            Err(Error::ReduciblePolynomial { p: 2 })
        ));
        let short_poly = LocalSpec::GaloisField {
            p: 2,
            k: 3,
            poly: vec![1, 1],
        };
        assert!(matches!(
            Ring::new(RingSpec::new(vec![short_poly])),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn ring_mismatch_error() {
        let a = ring("Z6").from_residue(1);
        let b = ring("Z10").from_residue(1);
        assert_eq!(a.checked_add(&b), Err(Error::RingMismatch));
        assert_eq!(a.checked_mul(&b), Err(Error::RingMismatch));
    }

    #[test]
    fn parse_spellings_agree() {
        assert_eq!(ring("Z6xF4").name(), "Z2xZ3xF4");
        assert_eq!(ring("F4 x Z6").name(), "Z2xZ3xF4");
        assert_eq!(ring("GF(4)").name(), "F4");
        assert_eq!(ring("Z12").name(), "Z3xZ4");
        assert_eq!(ring("F2").name(), "Z2");
        // parse-print round trip on canonical spellings
        for name in ["Z2xZ3", "Z2xZ3xF4", "Z3xZ4", "F8", "Z2xZ3xZ3"] {
            assert_eq!(ring(name).name(), name);
        }
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse_ring_expr("GF(6)") {
            Err(Error::ParseRing { message, .. }) => {
                assert!(message.contains("not a prime power"))
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            parse_ring_expr("Z1"),
            Err(Error::ParseRing { .. })
        ));
        match parse_ring_expr("Z6yF4") {
            Err(Error::ParseRing { position, .. }) => assert_eq!(position, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_ring_expr("").is_err());
        assert!(parse_ring_expr("Z6x").is_err());
    }

    #[test]
    fn ideal_subrings_of_z2z3f4() {
        let r = ring("Z2xZ3xF4");
        let names: Vec<String> = (0..3)
            .map(|i| r.ideal_subring(i).unwrap().name())
            .collect();
        assert_eq!(names, vec!["Z3xF4", "Z2xF4", "Z2xZ3"]);
        // Z4's ideal is not a unital subring
        let z12 = ring("Z12");
        assert!(z12.ideal_subring(1).is_none()); // Z4 component
        assert!(z12.ideal_subring(0).is_some()); // Z3 component
    }

    #[test]
    fn sampling_stays_in_range() {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        let r = ring("Z2xZ3xF4");
        for _ in 0..50 {
            let e = r.random_element(&mut rng);
            assert!(r.element(e.coords()).is_ok());
        }
    }

    #[test]
    fn crt_display() {
        let z6 = ring("Z6");
        let e = z6.element(&[1, 2]).unwrap();
        assert_eq!(e.to_string(), "5");
        let r18 = ring("Z2xZ3xZ3"); // moduli not coprime: tuple display
        assert_eq!(r18.element(&[1, 2, 0]).unwrap().to_string(), "(1,2,0)");
    }
}
