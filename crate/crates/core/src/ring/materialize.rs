//! Turning a ring given by element tables into a [`FiniteRing`].
//!
//! Used for quotient rings `A/I` (coset representatives found by enumeration) and for
//! the local factors `eA` cut out by primitive idempotents. Both are desk-scale
//! operations: the additive basis is found by brute force over the element set.

use super::{AdditiveSubgroup, FiniteRing, RingElement, RingError};
use crate::arith;

/// A ring rebuilt from a black-box description.
#[derive(Debug, Clone)]
pub struct Materialized {
    pub ring: FiniteRing,
    /// For each element index of `ring`, the id of the source element it represents.
    pub source_ids: Vec<usize>,
}

fn scalar(k: u64, x: usize, zero: usize, add: &impl Fn(usize, usize) -> usize) -> usize {
    let mut result = zero;
    let mut base = x;
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            result = add(result, base);
        }
        k >>= 1;
        if k > 0 {
            base = add(base, base);
        }
    }
    result
}

/// Builds a [`FiniteRing`] on element ids `0..n` with the given operations.
///
/// The first basis element is `one`; the rest form a complement of `<one>` found
/// prime by prime: at each step an element of maximal order modulo the current span
/// is corrected by a span element so that its order drops to that quotient order.
pub fn materialize(
    n: usize,
    zero: usize,
    one: usize,
    add: impl Fn(usize, usize) -> usize,
    mul: impl Fn(usize, usize) -> usize,
) -> Result<Materialized, RingError> {
    let mut characteristic = 1u64;
    let mut acc = one;
    while acc != zero {
        acc = add(acc, one);
        characteristic += 1;
    }

    let mut basis: Vec<(usize, u64)> = vec![(one, characteristic)];
    for (q, v) in arith::factorize(characteristic) {
        let qv = q.pow(v);
        let cofactor = characteristic / qv;
        let inverse = arith::mod_inverse(cofactor % qv, qv).expect("cofactor is invertible mod q^v");
        let epsilon = cofactor * inverse;
        let one_q = scalar(epsilon, one, zero, &add);

        let sylow: Vec<usize> = (0..n).filter(|&x| scalar(qv, x, zero, &add) == zero).collect();
        let mut in_span = vec![false; n];
        in_span[zero] = true;
        let mut span = vec![zero];
        extend_span(&mut span, &mut in_span, one_q, &add);

        while span.len() < sylow.len() {
            let (x, s) = sylow
                .iter()
                .filter(|&&x| !in_span[x])
                .map(|&x| {
                    let mut y = x;
                    let mut s = 0u32;
                    while !in_span[y] {
                        y = scalar(q, y, zero, &add);
                        s += 1;
                    }
                    (x, s)
                })
                .fold((zero, 0), |best, cur| if cur.1 > best.1 { cur } else { best });
            let qs = q.pow(s);
            let target = scalar(qs, x, zero, &add);
            let z = *span
                .iter()
                .find(|&&z| scalar(qs, z, zero, &add) == target)
                .expect("maximal-order element admits a correction");
            let neg_z = scalar(characteristic - 1, z, zero, &add);
            let corrected = add(x, neg_z);
            extend_span(&mut span, &mut in_span, corrected, &add);
            basis.push((corrected, qs));
        }
    }

    let orders: Vec<u64> = basis.iter().map(|&(_, o)| o).collect();
    let d = orders.len();
    let total: u64 = orders.iter().product();
    if total != n as u64 {
        return Err(RingError::Shape(format!(
            "additive basis spans {total} of {n} elements"
        )));
    }

    // odometer over coefficient vectors, last coordinate fastest
    let mut coords_of: Vec<Option<usize>> = vec![None; n];
    let mut source_ids = Vec::with_capacity(n);
    let mut counter = vec![0u64; d];
    let mut id = zero;
    for index in 0..n {
        if coords_of[id].replace(index).is_some() {
            return Err(RingError::Shape("additive basis is not independent".into()));
        }
        source_ids.push(id);
        for pos in (0..d).rev() {
            counter[pos] += 1;
            id = add(id, basis[pos].0);
            if counter[pos] < orders[pos] {
                break;
            }
            counter[pos] = 0;
        }
    }

    let strides: Vec<u64> = (0..d).map(|i| orders[i + 1..].iter().product()).collect();
    let coords = |id: usize| -> Vec<u64> {
        let mut rest = coords_of[id].expect("every element has coordinates") as u64;
        strides
            .iter()
            .map(|&s| {
                let c = rest / s;
                rest %= s;
                c
            })
            .collect()
    };
    let constants: Vec<Vec<Vec<u64>>> = (0..d)
        .map(|i| (0..d).map(|j| coords(mul(basis[i].0, basis[j].0))).collect())
        .collect();
    let ring = FiniteRing::new(orders, constants)?;
    Ok(Materialized { ring, source_ids })
}

fn extend_span(span: &mut Vec<usize>, in_span: &mut [bool], g: usize, add: &impl Fn(usize, usize) -> usize) {
    let base = span.len();
    let mut multiple = g;
    while !in_span[multiple] {
        for i in 0..base {
            let t = add(span[i], multiple);
            if !in_span[t] {
                in_span[t] = true;
                span.push(t);
            }
        }
        multiple = add(multiple, g);
    }
}

/// A quotient ring together with the projection from the parent ring.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub ring: FiniteRing,
    /// Element index in the quotient for every element index of the parent.
    pub projection: Vec<usize>,
}

impl FiniteRing {
    /// `A/I` for an ideal `I`, with coset representatives found by enumeration.
    pub fn quotient(&self, ideal: &AdditiveSubgroup) -> Result<Quotient, RingError> {
        if !ideal.is_ideal() {
            return Err(RingError::NotIdeal);
        }
        let n = self.order() as usize;
        let d = self.dim();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        let mut x = vec![0; d];
        let mut i_el = vec![0; d];
        let mut sum = vec![0; d];
        for start in 0..n {
            if coset_of[start] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(start);
            self.coeffs_at(start, &mut x);
            for &m in ideal.member_indices() {
                self.coeffs_at(m, &mut i_el);
                self.add_into(&x, &i_el, &mut sum);
                coset_of[self.index_of_coeffs(&sum)] = c;
            }
        }
        let op = |a: usize, b: usize, mul: bool| {
            let ea = self.element_at(reps[a]);
            let eb = self.element_at(reps[b]);
            let mut out = vec![0; d];
            if mul {
                self.mul_into(ea.coeffs(), eb.coeffs(), &mut out);
            } else {
                self.add_into(ea.coeffs(), eb.coeffs(), &mut out);
            }
            coset_of[self.index_of_coeffs(&out)]
        };
        let zero = coset_of[0];
        let one = coset_of[self.index_of(&self.one())];
        let m = materialize(reps.len(), zero, one, |a, b| op(a, b, false), |a, b| op(a, b, true))?;
        let mut position = vec![0; reps.len()];
        for (new_index, &coset) in m.source_ids.iter().enumerate() {
            position[coset] = new_index;
        }
        let projection = coset_of.iter().map(|&c| position[c]).collect();
        Ok(Quotient { ring: m.ring, projection })
    }

    /// The ring `eA` with identity `e`, for an idempotent `e`. Returns the ring and,
    /// for each of its element indices, the corresponding element index in `self`.
    pub fn factor_ring(&self, e: &RingElement) -> Result<(FiniteRing, Vec<usize>), RingError> {
        let n = self.order() as usize;
        let d = self.dim();
        let mut local_id = vec![usize::MAX; n];
        let mut members = Vec::new();
        let mut a = vec![0; d];
        let mut prod = vec![0; d];
        for i in 0..n {
            self.coeffs_at(i, &mut a);
            self.mul_into(e.coeffs(), &a, &mut prod);
            let idx = self.index_of_coeffs(&prod);
            if local_id[idx] == usize::MAX {
                local_id[idx] = members.len();
                members.push(idx);
            }
        }
        let op = |x: usize, y: usize, mul: bool| {
            let ex = self.element_at(members[x]);
            let ey = self.element_at(members[y]);
            let mut out = vec![0; d];
            if mul {
                self.mul_into(ex.coeffs(), ey.coeffs(), &mut out);
            } else {
                self.add_into(ex.coeffs(), ey.coeffs(), &mut out);
            }
            local_id[self.index_of_coeffs(&out)]
        };
        let zero = local_id[0];
        let one = local_id[self.index_of(e)];
        let m = materialize(members.len(), zero, one, |x, y| op(x, y, false), |x, y| op(x, y, true))?;
        let ambient = m.source_ids.iter().map(|&id| members[id]).collect();
        Ok((m.ring, ambient))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::integers_mod;

    #[test]
    fn materialize_cyclic_group_ring() {
        // Z/12 presented on ids 0..12 with the usual operations
        let m = materialize(12, 0, 1, |a, b| (a + b) % 12, |a, b| (a * b) % 12).unwrap();
        assert_eq!(m.ring.basis_orders(), &[12]);
        assert_eq!(m.ring.unit_count(), 4);
    }

    #[test]
    fn materialize_needs_correction_step() {
        // Z/4 x Z/2 with identity (1, 1): the complement of <(1,1)> is <(0,1)> or <(2,1)>
        let enc = |a: usize, b: usize| a * 2 + b;
        let dec = |x: usize| (x / 2, x % 2);
        let add = |x: usize, y: usize| {
            let (a, b) = dec(x);
            let (c, d) = dec(y);
            enc((a + c) % 4, (b + d) % 2)
        };
        let mul = |x: usize, y: usize| {
            let (a, b) = dec(x);
            let (c, d) = dec(y);
            enc((a * c) % 4, (b * d) % 2)
        };
        let m = materialize(8, 0, enc(1, 1), add, mul).unwrap();
        assert_eq!(m.ring.basis_orders(), &[4, 2]);
        assert_eq!(m.ring.unit_count(), 2);
        assert_eq!(m.ring.idempotents().len(), 4);
    }

    #[test]
    fn quotient_of_z12_by_6() {
        let z12 = integers_mod(12).unwrap();
        let ideal = AdditiveSubgroup::span(&z12, &[z12.from_int(6)]).into_ideal(&z12).unwrap();
        let q = z12.quotient(&ideal).unwrap();
        assert_eq!(q.ring.order(), 6);
        assert_eq!(q.ring.unit_count(), 2);
        // projection is a ring homomorphism on a sample
        let x = z12.from_int(5);
        let y = z12.from_int(7);
        let xy = z12.mul(&x, &y).unwrap();
        let px = q.ring.element_at(q.projection[z12.index_of(&x)]);
        let py = q.ring.element_at(q.projection[z12.index_of(&y)]);
        assert_eq!(q.ring.index_of(&q.ring.mul(&px, &py).unwrap()), q.projection[z12.index_of(&xy)]);
    }

    #[test]
    fn factor_rings_of_z12() {
        let z12 = integers_mod(12).unwrap();
        let mut orders: Vec<u64> = z12
            .primitive_idempotents()
            .iter()
            .map(|e| z12.factor_ring(e).unwrap().0.order())
            .collect();
        orders.sort();
        assert_eq!(orders, vec![3, 4]);
    }
}
