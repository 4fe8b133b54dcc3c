//! Finite commutative rings presented by an additive basis and structure constants.
//!
//! A [`FiniteRing`] is the additive group `Z/n_0 e_0 + ... + Z/n_{d-1} e_{d-1}` together
//! with a table `c[i][j]` giving `e_i * e_j = sum_k c[i][j][k] e_k`. Basis element `e_0`
//! is always the multiplicative identity, so `n_0` is the characteristic.
//!
//! Elements are enumerated in mixed-radix lexicographic order over the coefficient
//! vector (coordinate 0 most significant); every index-based API uses that order.

mod materialize;
mod product;
mod structure;
mod subgroup;

pub use materialize::{materialize, Materialized};
pub use product::direct_product;
pub use subgroup::AdditiveSubgroup;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Ring axiom checked by [`FiniteRing::new`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Associativity,
    Commutativity,
    Unity,
    OrderCompatibility,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Associativity => "associativity",
            Axiom::Commutativity => "commutativity",
            Axiom::Unity => "unity",
            Axiom::OrderCompatibility => "order-compatibility",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("a ring needs at least one basis element")]
    EmptyBasis,
    #[error("basis order {0} is out of range (must be in 1..=2^32-1)")]
    BadOrder(u64),
    #[error("structure constants have the wrong shape: {0}")]
    Shape(String),
    #[error("structure constant c[{i}][{j}][{k}] = {value} is not reduced modulo {order}")]
    Unreduced { i: usize, j: usize, k: usize, value: u64, order: u64 },
    #[error("{axiom} fails at basis {basis:?}")]
    AxiomViolation { axiom: Axiom, basis: Vec<usize> },
    #[error("element has {got} coordinates, ring has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("ring has {order} elements, above the enumeration cap {cap}")]
    TooLarge { order: u64, cap: u64 },
    #[error("ring is not local")]
    NotLocal,
    #[error("residue field order {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("subset is not an ideal")]
    NotIdeal,
    #[error("malformed ring file: {0}")]
    Parse(String),
}

/// An element, stored as its coefficient vector in the ring's additive basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct RingElement(Vec<u64>);

impl RingElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.0
    }
}

/// A validated finite commutative ring with identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRing {
    orders: Vec<u64>,
    /// Nonzero structure constants per basis pair `(i, j)`, flattened as `i * d + j`.
    sparse: Vec<Vec<(usize, u64)>>,
    strides: Vec<u64>,
    cardinality: u64,
    labels: Option<Vec<String>>,
}

impl FiniteRing {
    /// Validates and builds a ring. `structure_constants[i][j][k]` is the coefficient of
    /// `e_k` in `e_i * e_j`. Every axiom is checked exhaustively on basis elements.
    pub fn new(
        basis_orders: Vec<u64>,
        structure_constants: Vec<Vec<Vec<u64>>>,
    ) -> Result<Self, RingError> {
        let d = basis_orders.len();
        if d == 0 {
            return Err(RingError::EmptyBasis);
        }
        if let Some(&bad) = basis_orders.iter().find(|&&n| n == 0 || n > u32::MAX as u64) {
            return Err(RingError::BadOrder(bad));
        }
        if structure_constants.len() != d {
            return Err(RingError::Shape(format!(
                "{} rows for dimension {d}",
                structure_constants.len()
            )));
        }
        for (i, row) in structure_constants.iter().enumerate() {
            if row.len() != d {
                return Err(RingError::Shape(format!("row {i} has {} entries", row.len())));
            }
            for (j, v) in row.iter().enumerate() {
                if v.len() != d {
                    return Err(RingError::Shape(format!(
                        "c[{i}][{j}] has {} coordinates",
                        v.len()
                    )));
                }
                for (k, &value) in v.iter().enumerate() {
                    if value >= basis_orders[k] {
                        return Err(RingError::Unreduced { i, j, k, value, order: basis_orders[k] });
                    }
                }
            }
        }

        let violation = |axiom, basis: &[usize]| RingError::AxiomViolation {
            axiom,
            basis: basis.to_vec(),
        };

        let n0 = basis_orders[0];
        for (i, &n) in basis_orders.iter().enumerate() {
            if !n0.is_multiple_of(n) {
                return Err(violation(Axiom::OrderCompatibility, &[0, i]));
            }
        }
        for j in 0..d {
            for k in 0..d {
                let expected = u64::from(j == k) % basis_orders[k];
                if structure_constants[0][j][k] != expected {
                    return Err(violation(Axiom::Unity, &[0, j]));
                }
            }
        }
        for i in 0..d {
            for j in 0..i {
                if structure_constants[i][j] != structure_constants[j][i] {
                    return Err(violation(Axiom::Commutativity, &[i, j]));
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let c = structure_constants[i][j][k] as u128;
                    if !(basis_orders[i] as u128 * c).is_multiple_of(basis_orders[k] as u128) {
                        return Err(violation(Axiom::OrderCompatibility, &[i, j, k]));
                    }
                }
            }
        }

        let mut cardinality = 1u64;
        for &n in &basis_orders {
            cardinality = cardinality.checked_mul(n).ok_or(RingError::TooLarge {
                order: u64::MAX,
                cap: u64::MAX,
            })?;
        }
        let mut strides = vec![1u64; d];
        for i in (0..d.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * basis_orders[i + 1];
        }
        let sparse = (0..d * d)
            .map(|ij| {
                structure_constants[ij / d][ij % d]
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(k, &c)| (k, c))
                    .collect()
            })
            .collect();
        let ring = FiniteRing { orders: basis_orders, sparse, strides, cardinality, labels: None };

        let mut lhs = vec![0; d];
        let mut rhs = vec![0; d];
        let mut tmp = vec![0; d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    ring.mul_into(&ring.basis_coeffs(i), &ring.basis_coeffs(j), &mut tmp);
                    ring.mul_into(&tmp, &ring.basis_coeffs(k), &mut lhs);
                    ring.mul_into(&ring.basis_coeffs(j), &ring.basis_coeffs(k), &mut tmp);
                    ring.mul_into(&ring.basis_coeffs(i), &tmp, &mut rhs);
                    if lhs != rhs {
                        return Err(violation(Axiom::Associativity, &[i, j, k]));
                    }
                }
            }
        }
        Ok(ring)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        if labels.len() == self.dim() {
            self.labels = Some(labels);
        }
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.orders.len()
    }

    pub fn basis_orders(&self) -> &[u64] {
        &self.orders
    }

    /// Number of elements.
    pub fn order(&self) -> u64 {
        self.cardinality
    }

    pub fn characteristic(&self) -> u64 {
        self.orders[0]
    }

    /// The dense structure-constant table `c[i][j][k]`.
    pub fn structure_constants(&self) -> Vec<Vec<Vec<u64>>> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let mut v = vec![0; d];
                        for &(k, c) in &self.sparse[i * d + j] {
                            v[k] = c;
                        }
                        v
                    })
                    .collect()
            })
            .collect()
    }

    /// Errors with [`RingError::TooLarge`] when the ring has more than `cap` elements.
    pub fn ensure_within(&self, cap: u64) -> Result<usize, RingError> {
        if self.cardinality > cap || usize::try_from(self.cardinality).is_err() {
            Err(RingError::TooLarge { order: self.cardinality, cap })
        } else {
            Ok(self.cardinality as usize)
        }
    }

    fn basis_coeffs(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0; self.dim()];
        v[i] = 1 % self.orders[i];
        v
    }

    // ---- element construction -------------------------------------------------

    /// Builds an element, reducing each coordinate modulo its basis order.
    pub fn element(&self, coeffs: &[u64]) -> Result<RingElement, RingError> {
        self.check_dim(coeffs)?;
        Ok(RingElement(coeffs.iter().zip(&self.orders).map(|(&c, &n)| c % n).collect()))
    }

    /// Builds an element from signed coordinates.
    pub fn element_signed(&self, coeffs: &[i64]) -> Result<RingElement, RingError> {
        if coeffs.len() != self.dim() {
            return Err(RingError::DimensionMismatch { expected: self.dim(), got: coeffs.len() });
        }
        Ok(RingElement(
            coeffs
                .iter()
                .zip(&self.orders)
                .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
                .collect(),
        ))
    }

    pub fn zero(&self) -> RingElement {
        RingElement(vec![0; self.dim()])
    }

    pub fn one(&self) -> RingElement {
        RingElement(self.basis_coeffs(0))
    }

    pub fn basis_element(&self, i: usize) -> RingElement {
        RingElement(self.basis_coeffs(i))
    }

    /// Image of the integer `n` under `Z -> A`.
    pub fn from_int(&self, n: i64) -> RingElement {
        let mut v = vec![0; self.dim()];
        v[0] = n.rem_euclid(self.orders[0] as i64) as u64;
        RingElement(v)
    }

    fn check_dim(&self, x: &[u64]) -> Result<(), RingError> {
        if x.len() == self.dim() {
            Ok(())
        } else {
            Err(RingError::DimensionMismatch { expected: self.dim(), got: x.len() })
        }
    }

    // ---- indexing ---------------------------------------------------------------

    /// Position of `x` in the mixed-radix enumeration.
    pub fn index_of(&self, x: &RingElement) -> usize {
        self.index_of_coeffs(&x.0)
    }

    pub fn index_of_coeffs(&self, x: &[u64]) -> usize {
        x.iter().zip(&self.strides).map(|(&c, &s)| c * s).sum::<u64>() as usize
    }

    pub fn element_at(&self, index: usize) -> RingElement {
        let mut v = vec![0; self.dim()];
        self.coeffs_at(index, &mut v);
        RingElement(v)
    }

    pub fn coeffs_at(&self, index: usize, out: &mut [u64]) {
        let mut rest = index as u64;
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = rest / self.strides[i];
            rest %= self.strides[i];
        }
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = RingElement> + '_ {
        (0..self.cardinality as usize).map(move |i| self.element_at(i))
    }

    // ---- arithmetic -------------------------------------------------------------

    pub fn add(&self, x: &RingElement, y: &RingElement) -> Result<RingElement, RingError> {
        self.check_dim(&x.0)?;
        self.check_dim(&y.0)?;
        let mut out = vec![0; self.dim()];
        self.add_into(&x.0, &y.0, &mut out);
        Ok(RingElement(out))
    }

    pub fn sub(&self, x: &RingElement, y: &RingElement) -> Result<RingElement, RingError> {
        let ny = self.neg(y)?;
        self.add(x, &ny)
    }

    pub fn neg(&self, x: &RingElement) -> Result<RingElement, RingError> {
        self.check_dim(&x.0)?;
        Ok(RingElement(
            x.0.iter().zip(&self.orders).map(|(&c, &n)| (n - c) % n).collect(),
        ))
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> Result<RingElement, RingError> {
        self.check_dim(&x.0)?;
        self.check_dim(&y.0)?;
        let mut out = vec![0; self.dim()];
        self.mul_into(&x.0, &y.0, &mut out);
        Ok(RingElement(out))
    }

    /// `x^m` by square-and-multiply; `x^0 = 1`.
    pub fn pow(&self, x: &RingElement, m: u64) -> Result<RingElement, RingError> {
        self.check_dim(&x.0)?;
        Ok(RingElement(self.pow_coeffs(&x.0, m)))
    }

    /// `m * x` for an integer `m`.
    pub fn scale(&self, m: u64, x: &RingElement) -> Result<RingElement, RingError> {
        self.check_dim(&x.0)?;
        Ok(RingElement(
            x.0.iter()
                .zip(&self.orders)
                .map(|(&c, &n)| ((c as u128 * m as u128) % n as u128) as u64)
                .collect(),
        ))
    }

    pub fn is_zero(&self, x: &RingElement) -> bool {
        x.0.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self, x: &RingElement) -> bool {
        x.0 == self.basis_coeffs(0)
    }

    // Slice-level kernels. Inputs must be normalized coefficient slices of length `dim()`.

    pub fn add_into(&self, x: &[u64], y: &[u64], out: &mut [u64]) {
        for (k, slot) in out.iter_mut().enumerate() {
            let s = x[k] + y[k];
            let n = self.orders[k];
            *slot = if s >= n { s - n } else { s };
        }
    }

    pub fn mul_into(&self, x: &[u64], y: &[u64], out: &mut [u64]) {
        let d = self.dim();
        out.iter_mut().for_each(|c| *c = 0);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let xy = xi * yj;
                for &(k, c) in &self.sparse[i * d + j] {
                    let n = self.orders[k];
                    let term = (xy % n) * c % n;
                    let s = out[k] + term;
                    out[k] = if s >= n { s - n } else { s };
                }
            }
        }
    }

    pub fn pow_coeffs(&self, x: &[u64], mut m: u64) -> Vec<u64> {
        let d = self.dim();
        let mut result = self.basis_coeffs(0);
        let mut base = x.to_vec();
        let mut tmp = vec![0; d];
        while m > 0 {
            if m & 1 == 1 {
                self.mul_into(&result, &base, &mut tmp);
                std::mem::swap(&mut result, &mut tmp);
            }
            m >>= 1;
            if m > 0 {
                self.mul_into(&base, &base, &mut tmp);
                std::mem::swap(&mut base, &mut tmp);
            }
        }
        result
    }

    /// Renders an element as a sum of labelled basis terms, e.g. `1 + 3*t`.
    pub fn format_element(&self, x: &RingElement) -> String {
        let terms: Vec<String> = x
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let label = self
                    .labels
                    .as_ref()
                    .map(|l| l[i].clone())
                    .unwrap_or_else(|| format!("e{i}"));
                match (i, c) {
                    (0, c) => c.to_string(),
                    (_, 1) => label,
                    (_, c) => format!("{c}*{label}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }

    // ---- serialization ----------------------------------------------------------

    pub fn to_file(&self) -> RingFile {
        RingFile {
            basis_orders: self.orders.clone(),
            structure_constants: self.structure_constants(),
            labels: self.labels.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("ring file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, RingError> {
        let file: RingFile =
            serde_json::from_str(text).map_err(|e| RingError::Parse(e.to_string()))?;
        file.into_ring()
    }
}

/// On-disk JSON form of a ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingFile {
    pub basis_orders: Vec<u64>,
    pub structure_constants: Vec<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl RingFile {
    pub fn into_ring(self) -> Result<FiniteRing, RingError> {
        let ring = FiniteRing::new(self.basis_orders, self.structure_constants)?;
        match self.labels {
            Some(labels) if labels.len() != ring.dim() => Err(RingError::Parse(format!(
                "{} labels for dimension {}",
                labels.len(),
                ring.dim()
            ))),
            Some(labels) => Ok(ring.with_labels(labels)),
            None => Ok(ring),
        }
    }
}

/// `Z/nZ` as a one-generator ring.
pub fn integers_mod(n: u64) -> Result<FiniteRing, RingError> {
    FiniteRing::new(vec![n], vec![vec![vec![1 % n.max(1)]]])
        .map(|r| r.with_labels(vec!["1".into()]))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn dual_numbers_f2() -> FiniteRing {
        FiniteRing::new(
            vec![2, 2],
            vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 0]]],
        )
        .unwrap()
    }

    pub(crate) fn f4() -> FiniteRing {
        // t^2 = t + 1
        FiniteRing::new(
            vec![2, 2],
            vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 1]]],
        )
        .unwrap()
    }

    #[test]
    fn z4_arithmetic() {
        let r = integers_mod(4).unwrap();
        let three = r.from_int(3);
        assert_eq!(r.add(&three, &three).unwrap(), r.from_int(2));
        assert_eq!(r.mul(&three, &three).unwrap(), r.one());
        assert_eq!(r.neg(&three).unwrap(), r.from_int(1));
        assert_eq!(r.order(), 4);
    }

    #[test]
    fn dual_numbers_square() {
        let r = dual_numbers_f2();
        let one_plus_x = r.element(&[1, 1]).unwrap();
        assert_eq!(r.mul(&one_plus_x, &one_plus_x).unwrap(), r.one());
    }

    #[test]
    fn f4_is_a_field() {
        let r = f4();
        let t = r.basis_element(1);
        assert_eq!(r.mul(&t, &t).unwrap(), r.element(&[1, 1]).unwrap());
        // every nonzero element has an inverse, exhaustively
        for x in r.elements().filter(|x| !r.is_zero(x)) {
            assert!(r.elements().any(|y| r.is_one(&r.mul(&x, &y).unwrap())));
        }
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let r = integers_mod(9).unwrap();
        let two = r.from_int(2);
        let mut acc = r.one();
        for m in 0..20 {
            assert_eq!(r.pow(&two, m).unwrap(), acc);
            acc = r.mul(&acc, &two).unwrap();
        }
    }

    #[test]
    fn rejects_non_commutative_table() {
        let err = FiniteRing::new(
            vec![2, 2],
            vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 0]]]
                .into_iter()
                .enumerate()
                .map(|(i, mut row)| {
                    if i == 1 {
                        row[0] = vec![1, 1];
                    }
                    row
                })
                .collect(),
        )
        .unwrap_err();
        assert!(matches!(err, RingError::AxiomViolation { .. }));
    }

    #[test]
    fn rejects_non_associative_table() {
        // e1*e1 = e2, e1*e2 = 0, e2*e2 = e2 over F_2: (e1 e1) e2 = e2 but e1 (e1 e2) = 0
        let c = vec![
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            vec![vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]],
            vec![vec![0, 0, 1], vec![0, 0, 0], vec![0, 0, 1]],
        ];
        let err = FiniteRing::new(vec![2, 2, 2], c).unwrap_err();
        assert!(matches!(
            err,
            RingError::AxiomViolation { axiom: Axiom::Associativity, .. }
        ));
    }

    #[test]
    fn rejects_bad_unity_and_orders() {
        let err = FiniteRing::new(vec![2], vec![vec![vec![0]]]).unwrap_err();
        assert!(matches!(err, RingError::AxiomViolation { axiom: Axiom::Unity, .. }));
        // e1 of order 4 in characteristic 2
        let err = FiniteRing::new(
            vec![2, 4],
            vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 0]]],
        )
        .unwrap_err();
        assert!(matches!(
            err,
            RingError::AxiomViolation { axiom: Axiom::OrderCompatibility, .. }
        ));
        assert_eq!(FiniteRing::new(vec![], vec![]).unwrap_err(), RingError::EmptyBasis);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let r = integers_mod(4).unwrap();
        let bad = RingElement(vec![1, 1]);
        assert_eq!(
            r.add(&bad, &r.one()).unwrap_err(),
            RingError::DimensionMismatch { expected: 1, got: 2 }
        );
    }

    #[test]
    fn index_roundtrip_and_order() {
        let r = f4();
        let listed: Vec<Vec<u64>> = r.elements().map(|x| x.into_coeffs()).collect();
        assert_eq!(listed, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        for (i, x) in r.elements().enumerate() {
            assert_eq!(r.index_of(&x), i);
        }
    }

    #[test]
    fn json_roundtrip_with_labels() {
        let r = f4().with_labels(vec!["1".into(), "t".into()]);
        let back = FiniteRing::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.format_element(&r.element(&[1, 1]).unwrap()), "1 + t");
    }
}
