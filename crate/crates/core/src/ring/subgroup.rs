use super::{FiniteRing, RingElement, RingError};

/// An additive subgroup of a ring, cached as the sorted list of member indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveSubgroup {
    generators: Vec<RingElement>,
    members: Vec<usize>,
    ideal: bool,
}

impl AdditiveSubgroup {
    /// The zero subgroup.
    pub fn zero(ring: &FiniteRing) -> Self {
        AdditiveSubgroup { generators: Vec::new(), members: vec![ring.index_of(&ring.zero())], ideal: true }
    }

    /// Subgroup generated by `gens`. Redundant generators are dropped.
    pub fn span(ring: &FiniteRing, gens: &[RingElement]) -> Self {
        Self::span_indices(ring, gens.iter().map(|g| ring.index_of(g)))
    }

    /// Subgroup generated by the elements at `candidates`, keeping only the candidates
    /// that enlarged the span at the time they were seen.
    pub fn span_indices(ring: &FiniteRing, candidates: impl IntoIterator<Item = usize>) -> Self {
        let n = ring.order() as usize;
        let d = ring.dim();
        let mut mask = vec![false; n];
        mask[0] = true;
        let mut members = vec![0usize];
        let mut generators = Vec::new();

        let mut g = vec![0; d];
        let mut multiple = vec![0; d];
        let mut tmp = vec![0; d];
        let mut s = vec![0; d];
        for idx in candidates {
            if mask[idx] {
                continue;
            }
            ring.coeffs_at(idx, &mut g);
            generators.push(RingElement(g.clone()));
            let base = members.len();
            multiple.copy_from_slice(&g);
            while !mask[ring.index_of_coeffs(&multiple)] {
                for k in 0..base {
                    ring.coeffs_at(members[k], &mut s);
                    ring.add_into(&s, &multiple, &mut tmp);
                    let t = ring.index_of_coeffs(&tmp);
                    if !mask[t] {
                        mask[t] = true;
                        members.push(t);
                    }
                }
                ring.add_into(&multiple, &g, &mut tmp);
                std::mem::swap(&mut multiple, &mut tmp);
            }
        }
        members.sort_unstable();
        AdditiveSubgroup { generators, members, ideal: false }
    }

    /// Checks closure under multiplication by every basis element and flags the
    /// subgroup as an ideal.
    pub fn into_ideal(mut self, ring: &FiniteRing) -> Result<Self, RingError> {
        let d = ring.dim();
        let mut x = vec![0; d];
        let mut prod = vec![0; d];
        for &m in &self.members {
            ring.coeffs_at(m, &mut x);
            for i in 0..d {
                ring.mul_into(&x, ring.basis_element(i).coeffs(), &mut prod);
                if !self.contains_index(ring.index_of_coeffs(&prod)) {
                    return Err(RingError::NotIdeal);
                }
            }
        }
        self.ideal = true;
        Ok(self)
    }

    pub fn is_ideal(&self) -> bool {
        self.ideal
    }

    pub fn order(&self) -> u64 {
        self.members.len() as u64
    }

    pub fn generators(&self) -> &[RingElement] {
        &self.generators
    }

    /// Member indices, ascending.
    pub fn member_indices(&self) -> &[usize] {
        &self.members
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        self.members.binary_search(&idx).is_ok()
    }

    pub fn contains(&self, ring: &FiniteRing, x: &RingElement) -> bool {
        self.contains_index(ring.index_of(x))
    }

    pub fn elements<'a>(&'a self, ring: &'a FiniteRing) -> impl Iterator<Item = RingElement> + 'a {
        self.members.iter().map(move |&i| ring.element_at(i))
    }

    pub fn is_zero(&self) -> bool {
        self.members.len() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::integers_mod;

    #[test]
    fn span_in_z12() {
        let r = integers_mod(12).unwrap();
        let s = AdditiveSubgroup::span(&r, &[r.from_int(8), r.from_int(6)]);
        let vals: Vec<u64> = s.elements(&r).map(|x| x.coeffs()[0]).collect();
        assert_eq!(vals, vec![0, 2, 4, 6, 8, 10]);
        assert!(s.clone().into_ideal(&r).unwrap().is_ideal());
    }

    #[test]
    fn redundant_generators_dropped() {
        let r = integers_mod(8).unwrap();
        let s = AdditiveSubgroup::span(&r, &[r.from_int(2), r.from_int(4), r.from_int(6)]);
        assert_eq!(s.generators().len(), 1);
        assert_eq!(s.order(), 4);
    }

    #[test]
    fn non_ideal_subgroup_detected() {
        let r = super::super::tests::f4();
        let s = AdditiveSubgroup::span(&r, &[r.one()]);
        assert_eq!(s.order(), 2);
        assert_eq!(s.into_ideal(&r).unwrap_err(), RingError::NotIdeal);
    }
}
