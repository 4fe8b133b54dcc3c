//! Structural predicates: units, nilpotents, locality, ideal powers, idempotents.

use std::collections::HashSet;

use super::{AdditiveSubgroup, FiniteRing, RingElement, RingError};
use crate::arith;

const UNKNOWN: u8 = 0;
const YES: u8 = 1;
const NO: u8 = 2;

impl FiniteRing {
    /// `x` is a unit iff `1` occurs in its power orbit before the orbit repeats.
    pub fn is_unit(&self, x: &RingElement) -> bool {
        self.orbit_hits(x, |r, p| r.is_one_coeffs(p))
    }

    /// `x` is nilpotent iff `0` occurs in its power orbit.
    pub fn is_nilpotent(&self, x: &RingElement) -> bool {
        self.orbit_hits(x, |_, p| p.iter().all(|&c| c == 0))
    }

    /// `x` is a zero divisor iff `x * y = 0` for some nonzero `y`.
    pub fn is_zero_divisor(&self, x: &RingElement) -> bool {
        let mut prod = vec![0; self.dim()];
        let mut y = vec![0; self.dim()];
        (1..self.order() as usize).any(|i| {
            self.coeffs_at(i, &mut y);
            self.mul_into(x.coeffs(), &y, &mut prod);
            prod.iter().all(|&c| c == 0)
        })
    }

    fn is_one_coeffs(&self, x: &[u64]) -> bool {
        x[0] == 1 % self.orders[0] && x[1..].iter().all(|&c| c == 0)
    }

    fn orbit_hits(&self, x: &RingElement, target: impl Fn(&Self, &[u64]) -> bool) -> bool {
        let mut seen = HashSet::new();
        let mut power = x.coeffs().to_vec();
        let mut next = vec![0; self.dim()];
        loop {
            if target(self, &power) {
                return true;
            }
            if !seen.insert(self.index_of_coeffs(&power)) {
                return false;
            }
            self.mul_into(&power, x.coeffs(), &mut next);
            std::mem::swap(&mut power, &mut next);
        }
    }

    /// Classifies every element by walking power orbits. An orbit reaching an
    /// already classified element inherits its verdict: `x^i` is a unit iff `x` is,
    /// and likewise for nilpotence.
    fn orbit_mask(&self, target: usize) -> Vec<u8> {
        let n = self.order() as usize;
        let d = self.dim();
        let mut mask = vec![UNKNOWN; n];
        mask[target] = YES;
        let mut x = vec![0; d];
        let mut power = vec![0; d];
        let mut next = vec![0; d];
        let mut orbit: Vec<usize> = Vec::new();
        let mut seen = HashSet::new();
        for start in 0..n {
            if mask[start] != UNKNOWN {
                continue;
            }
            self.coeffs_at(start, &mut x);
            power.copy_from_slice(&x);
            orbit.clear();
            seen.clear();
            let verdict = loop {
                let idx = self.index_of_coeffs(&power);
                if mask[idx] != UNKNOWN {
                    break mask[idx];
                }
                if !seen.insert(idx) {
                    break NO;
                }
                orbit.push(idx);
                self.mul_into(&power, &x, &mut next);
                std::mem::swap(&mut power, &mut next);
            };
            for &i in &orbit {
                mask[i] = verdict;
            }
        }
        mask
    }

    /// Unit flags for every element, in enumeration order.
    pub fn unit_mask(&self) -> Vec<bool> {
        let one = self.index_of(&self.one());
        if self.order() == 1 {
            return vec![true];
        }
        self.orbit_mask(one).into_iter().map(|v| v == YES).collect()
    }

    pub fn units(&self) -> Vec<RingElement> {
        self.unit_mask()
            .iter()
            .enumerate()
            .filter(|(_, &u)| u)
            .map(|(i, _)| self.element_at(i))
            .collect()
    }

    pub fn unit_count(&self) -> u64 {
        self.unit_mask().iter().filter(|&&u| u).count() as u64
    }

    pub fn nilpotent_mask(&self) -> Vec<bool> {
        self.orbit_mask(0).into_iter().map(|v| v == YES).collect()
    }

    /// The ideal of nilpotent elements, by full enumeration.
    pub fn nilradical(&self) -> AdditiveSubgroup {
        let mask = self.nilpotent_mask();
        let nil = AdditiveSubgroup::span_indices(
            self,
            mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i),
        );
        debug_assert_eq!(nil.order() as usize, mask.iter().filter(|&&b| b).count());
        nil.into_ideal(self).expect("nilradical is an ideal")
    }

    /// The maximal ideal if the ring is local: the non-units must be closed under
    /// addition, which holds iff their span has no more elements than they do.
    pub fn maximal_ideal(&self) -> Option<AdditiveSubgroup> {
        let units = self.unit_mask();
        let non_units: Vec<usize> =
            units.iter().enumerate().filter(|(_, &u)| !u).map(|(i, _)| i).collect();
        if non_units.is_empty() {
            return None;
        }
        let span = AdditiveSubgroup::span_indices(self, non_units.iter().copied());
        if span.order() as usize != non_units.len() {
            return None;
        }
        span.into_ideal(self).ok()
    }

    pub fn is_local(&self) -> bool {
        self.maximal_ideal().is_some()
    }

    /// The chain `m, m^2, ..., {0}` for a local ring. A field yields `[{0}]`.
    pub fn ideal_power_chain(&self) -> Result<Vec<AdditiveSubgroup>, RingError> {
        let m = self.maximal_ideal().ok_or(RingError::NotLocal)?;
        Ok(self.power_chain_of(m))
    }

    pub(crate) fn power_chain_of(&self, m: AdditiveSubgroup) -> Vec<AdditiveSubgroup> {
        let mut chain = vec![m];
        let d = self.dim();
        let mut prod = vec![0; d];
        while !chain.last().unwrap().is_zero() {
            let current = chain.last().unwrap();
            let mut products = Vec::new();
            for a in current.generators() {
                for b in chain[0].generators() {
                    self.mul_into(a.coeffs(), b.coeffs(), &mut prod);
                    products.push(self.index_of_coeffs(&prod));
                }
            }
            let next = AdditiveSubgroup::span_indices(self, products)
                .into_ideal(self)
                .expect("product of ideals is an ideal");
            assert!(next.order() < current.order(), "maximal ideal is not nilpotent");
            chain.push(next);
        }
        chain
    }

    /// `(p, lambda)` with `|A/m| = p^lambda`.
    pub fn residue_field_params(&self) -> Result<(u64, u32), RingError> {
        let m = self.maximal_ideal().ok_or(RingError::NotLocal)?;
        self.residue_params_of(&m)
    }

    pub(crate) fn residue_params_of(&self, m: &AdditiveSubgroup) -> Result<(u64, u32), RingError> {
        let q = self.order() / m.order();
        let (p, lambda) = arith::prime_power(q).ok_or(RingError::NotPrimePower(q))?;
        if arith::prime_power(self.characteristic()).map(|(cp, _)| cp) != Some(p) {
            return Err(RingError::NotPrimePower(q));
        }
        Ok((p, lambda))
    }

    /// All `e` with `e * e = e`, in enumeration order.
    pub fn idempotents(&self) -> Vec<RingElement> {
        let mut sq = vec![0; self.dim()];
        self.elements()
            .filter(|x| {
                self.mul_into(x.coeffs(), x.coeffs(), &mut sq);
                sq == x.coeffs()
            })
            .collect()
    }

    /// Minimal nonzero idempotents under `e <= f iff e f = e`.
    pub fn primitive_idempotents(&self) -> Vec<RingElement> {
        let nonzero: Vec<RingElement> =
            self.idempotents().into_iter().filter(|e| !self.is_zero(e)).collect();
        let mut prod = vec![0; self.dim()];
        nonzero
            .iter()
            .filter(|&e| {
                !nonzero.iter().any(|f| {
                    if f == e {
                        return false;
                    }
                    self.mul_into(f.coeffs(), e.coeffs(), &mut prod);
                    prod == f.coeffs()
                })
            })
            .cloned()
            .collect()
    }
}
