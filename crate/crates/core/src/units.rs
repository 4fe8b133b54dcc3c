//! Unit groups by enumeration: the group type, its split into residue part and `1 + m`,
//! the `m`-adic filtration, and per-ring reports.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::builders::{self, BuildError, BuildRecipe, Builder};
use crate::groups::{blackbox_structure, AbelianGroupType, BlackBoxGroup, GroupError};
use crate::ring::{AdditiveSubgroup, FiniteRing, RingElement, RingError};

pub const DEFAULT_MAX_ORDER: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitError {
    #[error("ring has {order} elements, above the analysis cap {cap}")]
    TooLarge { order: u64, cap: u64 },
    #[error("ring is not local")]
    NotLocal,
    #[error("not a Galois ring: {0}")]
    NotGaloisRing(String),
    #[error("ideal is not contained in the nilradical")]
    NotNil,
    #[error("structure theorem violated: {0}")]
    TheoremViolation(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// The multiplicative group on the given element indices of `r`.
pub fn index_group(r: &FiniteRing, members: Vec<usize>) -> BlackBoxGroup<usize, impl Fn(&usize, &usize) -> usize + '_> {
    let d = r.dim();
    let op = move |&a: &usize, &b: &usize| {
        let mut x = vec![0; d];
        let mut y = vec![0; d];
        let mut out = vec![0; d];
        r.coeffs_at(a, &mut x);
        r.coeffs_at(b, &mut y);
        r.mul_into(&x, &y, &mut out);
        r.index_of_coeffs(&out)
    };
    let identity = r.index_of(&r.one());
    BlackBoxGroup::new(members, op, identity)
}

fn unit_indices(r: &FiniteRing) -> Vec<usize> {
    r.unit_mask().iter().enumerate().filter_map(|(i, &u)| u.then_some(i)).collect()
}

/// Indices of `1 + a` for `a` in `s`.
fn one_plus(r: &FiniteRing, s: &AdditiveSubgroup) -> Vec<usize> {
    let d = r.dim();
    let one = r.one();
    let mut a = vec![0; d];
    let mut sum = vec![0; d];
    let mut out: Vec<usize> = s
        .member_indices()
        .iter()
        .map(|&i| {
            r.coeffs_at(i, &mut a);
            r.add_into(one.coeffs(), &a, &mut sum);
            r.index_of_coeffs(&sum)
        })
        .collect();
    out.sort_unstable();
    out
}

/// Residue field `(p, lambda)` of a local ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residue {
    pub p: u64,
    pub lambda: u32,
}

impl Residue {
    pub fn size(&self) -> u64 {
        self.p.pow(self.lambda)
    }
}

/// Unit group of a local ring split as residue part times `1 + m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitUnits {
    pub residue_part: AbelianGroupType,
    pub h: AbelianGroupType,
    /// The unit group computed on all units at once.
    pub units: AbelianGroupType,
    /// Whether the directly computed unit group equals the product of the two parts.
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitGroupReport {
    pub ring_order: u64,
    pub characteristic: u64,
    pub is_local: bool,
    pub residue: Option<Residue>,
    pub unit_count: u64,
    pub unit_group_type: AbelianGroupType,
    pub h_type: Option<AbelianGroupType>,
    pub k: Option<u32>,
    pub filtration_ks: Vec<u32>,
    pub splitting_verified: bool,
    pub local_factor_reports: Vec<UnitGroupReport>,
}

/// Counterexample to `(1 + mu)^{p^l} = 1 <=> p^l mu = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaCounterexample {
    pub mu: RingElement,
    pub mu_text: String,
    pub l: u32,
    pub power_is_one: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaOutcome {
    pub holds: bool,
    pub checked: usize,
    pub counterexample: Option<LemmaCounterexample>,
}

/// Counts on both sides of `1 -> 1 + I -> A^* -> (A/I)^* -> 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExactSequenceCounts {
    pub units: u64,
    pub one_plus_ideal: u64,
    pub quotient_units: u64,
}

impl ExactSequenceCounts {
    pub fn holds(&self) -> bool {
        self.units == self.one_plus_ideal * self.quotient_units
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyOutcome {
    pub recipe: BuildRecipe,
    pub ring_order: u64,
    pub predicted: AbelianGroupType,
    pub actual: AbelianGroupType,
    pub pass: bool,
}

/// Unit-group computations sharing one cap on ring size.
#[derive(Debug, Clone, Copy)]
pub struct Analyzer {
    pub max_order: u64,
}

impl Default for Analyzer {
    fn default() -> Self {
        Analyzer { max_order: DEFAULT_MAX_ORDER }
    }
}

impl Analyzer {
    pub fn new(max_order: u64) -> Self {
        Analyzer { max_order }
    }

    fn check_size(&self, r: &FiniteRing) -> Result<(), UnitError> {
        r.ensure_within(self.max_order).map(|_| ()).map_err(|_| UnitError::TooLarge { order: r.order(), cap: self.max_order })
    }

    fn local_data(&self, r: &FiniteRing) -> Result<(AdditiveSubgroup, Residue), UnitError> {
        self.check_size(r)?;
        let m = r.maximal_ideal().ok_or(UnitError::NotLocal)?;
        let (p, lambda) = r.residue_params_of(&m)?;
        Ok((m, Residue { p, lambda }))
    }

    pub fn unit_group_type(&self, r: &FiniteRing) -> Result<AbelianGroupType, UnitError> {
        self.check_size(r)?;
        Ok(blackbox_structure(&index_group(r, unit_indices(r)))?)
    }

    pub fn split_units(&self, r: &FiniteRing) -> Result<SplitUnits, UnitError> {
        let (m, residue) = self.local_data(r)?;
        self.split_with(r, &m, residue)
    }

    fn split_with(&self, r: &FiniteRing, m: &AdditiveSubgroup, residue: Residue) -> Result<SplitUnits, UnitError> {
        let h = blackbox_structure(&index_group(r, one_plus(r, m)))?;
        let residue_part = AbelianGroupType::cyclic(residue.size() - 1);
        let whole = self.unit_group_type(r)?;
        let verified = whole == residue_part.product(&h);
        Ok(SplitUnits { residue_part, h, units: whole, verified })
    }

    pub fn filtration_report(&self, r: &FiniteRing) -> Result<Vec<u32>, UnitError> {
        let (m, residue) = self.local_data(r)?;
        filtration_of(r, m, residue)
    }

    /// Full report. Non-local rings are split along their primitive idempotents and
    /// each factor `eA` is analyzed on its own.
    pub fn analyze(&self, r: &FiniteRing) -> Result<UnitGroupReport, UnitError> {
        self.check_size(r)?;
        if let Some(m) = r.maximal_ideal() {
            let (p, lambda) = r.residue_params_of(&m)?;
            let residue = Residue { p, lambda };
            let split = self.split_with(r, &m, residue)?;
            let k = arith::exact_log(m.order(), residue.size()).ok_or_else(|| {
                UnitError::TheoremViolation(format!("|m| = {} is not a power of {}", m.order(), residue.size()))
            })?;
            let ks = filtration_of(r, m, residue)?;
            let unit_group_type = split.units.clone();
            let report = UnitGroupReport {
                ring_order: r.order(),
                characteristic: r.characteristic(),
                is_local: true,
                residue: Some(residue),
                unit_count: unit_group_type.order(),
                unit_group_type,
                h_type: Some(split.h),
                k: Some(k),
                filtration_ks: ks,
                splitting_verified: split.verified,
                local_factor_reports: Vec::new(),
            };
            return Ok(report);
        }

        let mut factors = Vec::new();
        for e in r.primitive_idempotents() {
            let (factor, _) = r.factor_ring(&e)?;
            factors.push(self.analyze(&factor)?);
        }
        let unit_group_type =
            factors.iter().fold(AbelianGroupType::trivial(), |acc, f| acc.product(&f.unit_group_type));
        let unit_count = r.unit_count();
        if unit_group_type.order() != unit_count {
            return Err(UnitError::TheoremViolation(format!(
                "local factors give {} units, the ring has {unit_count}",
                unit_group_type.order()
            )));
        }
        Ok(UnitGroupReport {
            ring_order: r.order(),
            characteristic: r.characteristic(),
            is_local: false,
            residue: None,
            unit_count,
            unit_group_type,
            h_type: None,
            k: None,
            filtration_ks: Vec::new(),
            splitting_verified: factors.iter().all(|f| f.splitting_verified),
            local_factor_reports: factors,
        })
    }

    /// Builds the ring, brute-forces its unit group and compares with the prediction.
    pub fn verify(&self, recipe: &BuildRecipe) -> Result<VerifyOutcome, UnitError> {
        let predicted = builders::predicted_unit_group(recipe)?;
        let ring = Builder::new(self.max_order).build(recipe)?;
        let actual = self.unit_group_type(&ring)?;
        Ok(VerifyOutcome { recipe: recipe.clone(), ring_order: ring.order(), pass: predicted == actual, predicted, actual })
    }

    /// Unit-group type of `(Z/p^m)[t]/(f)` for every monic `f` of degree `lambda`
    /// irreducible mod `p`, paired with the rendered `f`.
    pub fn unit_types_over_all_moduli(
        &self,
        p: u64,
        m: u32,
        lambda: u32,
    ) -> Result<Vec<(String, AbelianGroupType)>, UnitError> {
        let builder = Builder::new(self.max_order);
        builders::irreducibles(p, lambda)
            .into_iter()
            .map(|f| {
                let ring = builder.galois_ring_with(p, m, &f)?;
                Ok((builders::format_poly(&f), self.unit_group_type(&ring)?))
            })
            .collect()
    }

    /// Unit counts of `A`, `1 + I` and `A/I` for an ideal `I` inside the nilradical.
    pub fn exact_sequence_counts(&self, r: &FiniteRing, ideal: &AdditiveSubgroup) -> Result<ExactSequenceCounts, UnitError> {
        self.check_size(r)?;
        let nil = r.nilpotent_mask();
        if ideal.member_indices().iter().any(|&i| !nil[i]) {
            return Err(UnitError::NotNil);
        }
        let mask = r.unit_mask();
        let one_plus_ideal = one_plus(r, ideal).iter().filter(|&&i| mask[i]).count() as u64;
        let quotient = r.quotient(ideal)?;
        Ok(ExactSequenceCounts {
            units: mask.iter().filter(|&&u| u).count() as u64,
            one_plus_ideal,
            quotient_units: quotient.ring.unit_count(),
        })
    }
}

fn filtration_of(r: &FiniteRing, m: AdditiveSubgroup, residue: Residue) -> Result<Vec<u32>, UnitError> {
    let q = residue.size();
    let p = residue.p;
    let chain = r.power_chain_of(m);
    let d = r.dim();
    let mut ks = Vec::new();
    for (i, pair) in chain.windows(2).enumerate() {
        let (big, small) = (&pair[0], &pair[1]);
        let ratio = big.order() / small.order();
        let k = arith::exact_log(ratio, q).filter(|&k| k > 0).ok_or_else(|| {
            UnitError::TheoremViolation(format!("|m^{}/m^{}| = {ratio} is not a power of {q}", i + 1, i + 2))
        })?;
        ks.push(k);

        // 1 + m^i is closed under the generators of m^i and its p-th powers fall into 1 + m^{i+1}
        let upper = one_plus(r, big);
        let lower = one_plus(r, small);
        let mut u = vec![0; d];
        let mut prod = vec![0; d];
        let gens: Vec<RingElement> = big
            .generators()
            .iter()
            .map(|g| r.add(&r.one(), g))
            .collect::<Result<_, _>>()?;
        for &idx in &upper {
            r.coeffs_at(idx, &mut u);
            for g in &gens {
                r.mul_into(&u, g.coeffs(), &mut prod);
                if upper.binary_search(&r.index_of_coeffs(&prod)).is_err() {
                    return Err(UnitError::TheoremViolation(format!("1 + m^{} is not multiplicatively closed", i + 1)));
                }
            }
            let power = r.pow_coeffs(&u, p);
            if lower.binary_search(&r.index_of_coeffs(&power)).is_err() {
                return Err(UnitError::TheoremViolation(format!(
                    "(1 + m^{})/(1 + m^{}) is not of exponent {p}",
                    i + 1,
                    i + 2
                )));
            }
        }
    }
    Ok(ks)
}

/// Checks `(1 + mu)^{p^l} = 1 <=> p^l mu = 0` for every `mu` in `p^depth R` and every
/// `l` from 0 to the nilpotency depth of `p` in the Galois ring `R`.
pub fn verify_power_lemma(r: &FiniteRing, p: u64, depth: u32) -> Result<LemmaOutcome, UnitError> {
    let m = r.maximal_ideal().ok_or_else(|| UnitError::NotGaloisRing("not local".into()))?;
    let (rp, lambda) = r.residue_params_of(&m)?;
    if rp != p {
        return Err(UnitError::NotGaloisRing(format!("residue characteristic is {rp}, not {p}")));
    }
    let mdepth = arith::exact_log(r.characteristic(), p)
        .ok_or_else(|| UnitError::NotGaloisRing("characteristic is not a power of p".into()))?;
    let q = p.pow(lambda);
    if Some(r.order()) != q.checked_pow(mdepth) {
        return Err(UnitError::NotGaloisRing(format!("|R| = {} differs from {q}^{mdepth}", r.order())));
    }
    let multiples = |k: u64| -> Vec<usize> {
        let mut v: Vec<usize> = r.elements().map(|x| r.index_of(&r.scale(k, &x).expect("own element"))).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    if multiples(p).len() as u64 != m.order() {
        return Err(UnitError::NotGaloisRing("maximal ideal is not pR".into()));
    }

    let mus = multiples(p.saturating_pow(depth) % r.characteristic().max(1));
    let one = r.one();
    let mut checked = 0;
    for &idx in &mus {
        let mu = r.element_at(idx);
        let base = r.add(&one, &mu)?;
        for l in 0..=mdepth {
            let pl = p.pow(l);
            let power_is_one = r.is_one(&r.pow(&base, pl)?);
            let kills = r.is_zero(&r.scale(pl, &mu)?);
            checked += 1;
            if power_is_one != kills {
                let mu_text = r.format_element(&mu);
                return Ok(LemmaOutcome {
                    holds: false,
                    checked,
                    counterexample: Some(LemmaCounterexample { mu, mu_text, l, power_is_one }),
                });
            }
        }
    }
    Ok(LemmaOutcome { holds: true, checked, counterexample: None })
}

pub fn unit_group(r: &FiniteRing) -> Result<(BlackBoxGroup<usize, impl Fn(&usize, &usize) -> usize + '_>, AbelianGroupType), UnitError> {
    Analyzer::default().check_size(r)?;
    let group = index_group(r, unit_indices(r));
    let t = blackbox_structure(&group)?;
    Ok((group, t))
}

pub fn split_units(r: &FiniteRing) -> Result<SplitUnits, UnitError> {
    Analyzer::default().split_units(r)
}

pub fn filtration_report(r: &FiniteRing) -> Result<Vec<u32>, UnitError> {
    Analyzer::default().filtration_report(r)
}

pub fn analyze(r: &FiniteRing) -> Result<UnitGroupReport, UnitError> {
    Analyzer::default().analyze(r)
}
