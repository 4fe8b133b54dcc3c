//! Finite abelian groups in primary form, a small text grammar for them, and recovery
//! of the isomorphism type of a black-box group by counting elements of each exponent.
//!
//! ```
//! use finring::groups::AbelianGroupType;
//! let g: AbelianGroupType = "F9* x C3^4".parse().unwrap();
//! assert_eq!(g.to_string(), "C8 x C3^4");
//! assert_eq!(g.order(), 648);
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("cyclic factor of order 0")]
    ZeroOrder,
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("{0} is not a prime power, so F{0}* is undefined")]
    QNotPrimePower(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("group order exceeds 2^64")]
    Overflow,
    #[error("element counts are not those of an abelian group: {0}")]
    NotAbelianDetected(String),
}

/// Isomorphism type of a finite abelian group: for each prime `p`, the descending list
/// of exponents `e_1 >= e_2 >= ...` of the cyclic factors `C_{p^e_i}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct AbelianGroupType {
    primary: BTreeMap<u64, Vec<u32>>,
}

impl AbelianGroupType {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Builds a type from `(prime, exponents)` pairs; exponents may come in any order and
    /// zero exponents are ignored. Primes are not checked.
    pub fn from_primary(parts: impl IntoIterator<Item = (u64, Vec<u32>)>) -> Self {
        let mut g = Self::default();
        for (p, exps) in parts {
            for e in exps {
                g.push(p, e);
            }
        }
        g.normalize();
        g
    }

    /// The cyclic group of order `n >= 1`.
    pub fn cyclic(n: u64) -> Self {
        assert!(n >= 1, "cyclic group of order 0");
        let mut g = Self::default();
        for (p, e) in arith::factorize(n) {
            g.push(p, e);
        }
        g
    }

    /// `(C_{p^e})^count`.
    pub fn homocyclic(p: u64, e: u32, count: usize) -> Self {
        Self::from_primary([(p, vec![e; count])])
    }

    fn push(&mut self, p: u64, e: u32) {
        if e > 0 {
            self.primary.entry(p).or_default().push(e);
        }
    }

    fn normalize(&mut self) {
        self.primary.retain(|_, v| !v.is_empty());
        for v in self.primary.values_mut() {
            v.sort_unstable_by(|a, b| b.cmp(a));
        }
    }

    pub fn primary(&self) -> &BTreeMap<u64, Vec<u32>> {
        &self.primary
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.primary.keys().copied()
    }

    /// Exponents of the `p`-part, descending; empty when `p` does not divide the order.
    pub fn exponents(&self, p: u64) -> &[u32] {
        self.primary.get(&p).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All cyclic factors as `(p, e)`, by prime then descending exponent.
    pub fn parts(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.primary.iter().flat_map(|(&p, v)| v.iter().map(move |&e| (p, e)))
    }

    pub fn is_trivial(&self) -> bool {
        self.primary.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.primary.values().all(|v| v.len() == 1)
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        self.primary.keys().all(|&q| q == p)
    }

    pub fn product(&self, other: &Self) -> Self {
        let mut g = self.clone();
        for (p, e) in other.parts() {
            g.push(p, e);
        }
        g.normalize();
        g
    }

    /// Order of the group. Saturates at `u64::MAX`; parsed groups never get there.
    pub fn order(&self) -> u64 {
        self.parts().fold(1u64, |acc, (p, e)| acc.saturating_mul(p.saturating_pow(e)))
    }

    fn checked_order(&self) -> Option<u64> {
        self.parts().try_fold(1u64, |acc, (p, e)| acc.checked_mul(p.checked_pow(e)?))
    }

    pub fn exponent(&self) -> u64 {
        self.primary.iter().fold(1u64, |acc, (&p, v)| acc.saturating_mul(p.saturating_pow(v[0])))
    }

    pub fn p_part(&self, p: u64) -> Self {
        Self::from_primary(self.primary.get(&p).map(|v| (p, v.clone())))
    }

    /// Number of cyclic factors in the `p`-part.
    pub fn rank(&self, p: u64) -> usize {
        self.exponents(p).len()
    }

    /// Whether `sub` is a direct factor, i.e. its cyclic factors form a sub-multiset.
    pub fn has_factor(&self, sub: &Self) -> bool {
        self.without(sub).is_some()
    }

    /// The complement `K` with `self = sub x K`, if `sub` is a direct factor.
    pub fn without(&self, sub: &Self) -> Option<Self> {
        let mut g = self.clone();
        for (p, e) in sub.parts() {
            let v = g.primary.get_mut(&p)?;
            let pos = v.iter().position(|&x| x == e)?;
            v.remove(pos);
        }
        g.normalize();
        Some(g)
    }
}

/// Merges the prime-power factors of the given cyclic orders into a canonical type.
pub fn canonical_type(cyclic_orders: &[u64]) -> Result<AbelianGroupType, GroupError> {
    let mut g = AbelianGroupType::default();
    for &n in cyclic_orders {
        if n == 0 {
            return Err(GroupError::ZeroOrder);
        }
        for (p, e) in arith::factorize(n) {
            g.push(p, e);
        }
    }
    g.normalize();
    Ok(g)
}

pub fn group_product(g1: &AbelianGroupType, g2: &AbelianGroupType) -> AbelianGroupType {
    g1.product(g2)
}

/// `F_q^*`, cyclic of order `q - 1`.
pub fn field_unit_group(q: u64) -> Result<AbelianGroupType, GroupError> {
    if arith::prime_power(q).is_none() {
        return Err(GroupError::NotPrimePower(q));
    }
    Ok(AbelianGroupType::cyclic(q - 1))
}

impl fmt::Display for AbelianGroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("1");
        }
        let mut first = true;
        for (&p, exps) in &self.primary {
            let mut i = 0;
            while i < exps.len() {
                let run = exps[i..].iter().take_while(|&&e| e == exps[i]).count();
                if !first {
                    f.write_str(" x ")?;
                }
                first = false;
                write!(f, "C{}", p.pow(exps[i]))?;
                if run > 1 {
                    write!(f, "^{run}")?;
                }
                i += run;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn error(&self, msg: impl Into<String>) -> GroupError {
        GroupError::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn number(&mut self) -> Result<u64, GroupError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| GroupError::Syntax { pos: start, msg: "number too large".into() })
    }

    fn term(&mut self, g: &mut AbelianGroupType) -> Result<(), GroupError> {
        match self.peek() {
            Some(b'C') | Some(b'c') => {
                self.pos += 1;
                let n = self.number()?;
                if n == 0 {
                    return Err(GroupError::ZeroOrder);
                }
                let mut count = 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    count = self.number()?;
                }
                if n > 1 && count > 64 {
                    return Err(GroupError::Overflow);
                }
                for (p, e) in arith::factorize(n) {
                    for _ in 0..count {
                        g.push(p, e);
                    }
                }
            }
            Some(b'F') | Some(b'f') => {
                self.pos += 1;
                let q = self.number()?;
                if arith::prime_power(q).is_none() {
                    return Err(GroupError::QNotPrimePower(q));
                }
                if self.peek() != Some(b'*') {
                    return Err(self.error("expected '*' after field size"));
                }
                self.pos += 1;
                for (p, e) in arith::factorize(q - 1) {
                    g.push(p, e);
                }
            }
            Some(b'1') => {
                self.pos += 1;
            }
            _ => return Err(self.error("expected 'C', 'F' or '1'")),
        }
        Ok(())
    }
}

impl FromStr for AbelianGroupType {
    type Err = GroupError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut parser = Parser { bytes: text.as_bytes(), pos: 0 };
        let mut g = AbelianGroupType::default();
        parser.term(&mut g)?;
        loop {
            match parser.peek() {
                None => break,
                Some(b'x') | Some(b'X') | Some(b'*') => {
                    parser.pos += 1;
                    parser.term(&mut g)?;
                }
                Some(_) => return Err(parser.error("expected 'x' or '*'")),
            }
        }
        g.normalize();
        if g.checked_order().is_none() {
            return Err(GroupError::Overflow);
        }
        Ok(g)
    }
}

pub fn parse_group(text: &str) -> Result<AbelianGroupType, GroupError> {
    text.parse()
}

pub fn format_group(g: &AbelianGroupType) -> String {
    g.to_string()
}

impl From<AbelianGroupType> for String {
    fn from(g: AbelianGroupType) -> String {
        g.to_string()
    }
}

impl TryFrom<String> for AbelianGroupType {
    type Error = GroupError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// A finite group given by its element list, operation and identity.
pub struct BlackBoxGroup<T, F> {
    pub elements: Vec<T>,
    pub op: F,
    pub identity: T,
}

impl<T, F> BlackBoxGroup<T, F>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    pub fn new(elements: Vec<T>, op: F, identity: T) -> Self {
        BlackBoxGroup { elements, op, identity }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn pow(&self, x: &T, mut m: u64) -> T {
        let mut result = self.identity.clone();
        let mut base = x.clone();
        while m > 0 {
            if m & 1 == 1 {
                result = (self.op)(&result, &base);
            }
            m >>= 1;
            if m > 0 {
                base = (self.op)(&base, &base);
            }
        }
        result
    }

    /// For each element, the position of its `p`-th power.
    fn power_map(&self, p: u64) -> Result<Vec<usize>, GroupError> {
        let position: HashMap<&T, usize> = self.elements.iter().enumerate().map(|(i, x)| (x, i)).collect();
        self.elements
            .iter()
            .map(|x| {
                position
                    .get(&self.pow(x, p))
                    .copied()
                    .ok_or_else(|| GroupError::NotAbelianDetected("not closed under powers".into()))
            })
            .collect()
    }
}

/// Recovers the isomorphism type of an abelian black-box group.
///
/// For each prime `p` dividing the order, `c_j = #{x : x^{p^j} = 1}` is counted for
/// `j = 1, 2, ...` until it reaches the size of the `p`-part; `log_p(c_j / c_{j-1})` is
/// the number of cyclic factors of exponent at least `j`.
pub fn blackbox_structure<T, F>(g: &BlackBoxGroup<T, F>) -> Result<AbelianGroupType, GroupError>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let n = g.order() as u64;
    let Some(id_pos) = g.elements.iter().position(|x| *x == g.identity) else {
        return Err(GroupError::NotAbelianDetected("identity missing from element list".into()));
    };
    let sample = g.elements.len().min(24);
    for a in &g.elements[..sample] {
        for b in &g.elements[..sample] {
            if (g.op)(a, b) != (g.op)(b, a) {
                return Err(GroupError::NotAbelianDetected("operation is not commutative".into()));
            }
        }
    }

    let mut result = AbelianGroupType::default();
    for (p, v) in arith::factorize(n) {
        let sylow = p.pow(v);
        let pmap = g.power_map(p)?;
        let mut current: Vec<usize> = (0..g.elements.len()).collect();
        let mut prev_count = 1u64;
        // at_least[j-1] = number of cyclic factors with exponent >= j
        let mut at_least: Vec<u32> = Vec::new();
        while prev_count < sylow {
            for c in current.iter_mut() {
                *c = pmap[*c];
            }
            let count = current.iter().filter(|&&c| c == id_pos).count() as u64;
            if !count.is_multiple_of(prev_count) {
                return Err(GroupError::NotAbelianDetected(format!(
                    "c_{} = {count} is not a multiple of c_{} = {prev_count}",
                    at_least.len() + 1,
                    at_least.len()
                )));
            }
            let Some(step) = arith::exact_log(count / prev_count, p) else {
                return Err(GroupError::NotAbelianDetected(format!(
                    "ratio {} is not a power of {p}",
                    count / prev_count
                )));
            };
            if step == 0 || at_least.last().is_some_and(|&last| step > last) {
                return Err(GroupError::NotAbelianDetected(format!(
                    "exponent counts for p = {p} are not those of an abelian group"
                )));
            }
            at_least.push(step);
            prev_count = count;
        }
        if prev_count != sylow {
            return Err(GroupError::NotAbelianDetected(format!("p-part for p = {p} overshoots")));
        }
        // conjugate partition: factor i has exponent #{j : at_least[j] > i}
        let rank = at_least.first().copied().unwrap_or(0);
        for i in 0..rank {
            result.push(p, at_least.iter().filter(|&&s| s > i).count() as u32);
        }
    }
    result.normalize();
    if result.order() != n {
        return Err(GroupError::NotAbelianDetected("reconstructed order differs".into()));
    }
    Ok(result)
}

/// The explicit group `C_{n_1} x ... x C_{n_k}` on coordinate vectors, one cyclic factor
/// per part of `g`.
pub fn explicit_group(g: &AbelianGroupType) -> BlackBoxGroup<Vec<u64>, impl Fn(&Vec<u64>, &Vec<u64>) -> Vec<u64>> {
    let moduli: Vec<u64> = g.parts().map(|(p, e)| p.pow(e)).collect();
    let mut elements = vec![vec![]];
    for &m in &moduli {
        elements = elements
            .into_iter()
            .flat_map(|v: Vec<u64>| {
                (0..m).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    let identity = vec![0; moduli.len()];
    let op = move |a: &Vec<u64>, b: &Vec<u64>| a.iter().zip(b).zip(&moduli).map(|((x, y), m)| (x + y) % m).collect();
    BlackBoxGroup::new(elements, op, identity)
}
