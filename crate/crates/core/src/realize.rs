//! Which groups and which cardinalities are unit groups of rings of finite
//! characteristic.
//!
//! A unit group of such a ring is a product over local factors of
//! `F_{p^lambda}^* x H` with `H` a `p`-group of order `p^{lambda k}` and exponent at most
//! `p^k`. Cardinalities and cyclic groups are decided completely. General groups get a
//! tri-state answer: a witness ring when every local factor matches a known
//! construction, a refutation when every decomposition breaks a necessary condition,
//! and `Unknown` otherwise.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::builders::{predicted_unit_group, BuildRecipe};
use crate::groups::AbelianGroupType;

pub const DEFAULT_MAX_ORDER: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("group order {order} is above the search cap {cap}")]
    OrderTooLarge { order: u64, cap: u64 },
    #[error("{h} is not a {p}-group")]
    HNotPGroup { p: u64, h: AbelianGroupType },
    #[error("group order {0} is even")]
    EvenOrder(u64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Realizable,
    NotRealizable,
    Unknown,
}

/// Which condition decided a negative or open verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// `|H|` is not a power of `p^lambda`.
    OrderNotResiduePower,
    /// `exp(H) > p^k` where `|H| = p^{lambda k}`.
    ExponentBound,
    /// A cyclic `1 + m` of order at least 8 over `F_2`.
    CyclicTwoAdic,
    NoTermFactorization,
    NoCoprimeFactorization,
    NoFieldProduct,
    NoDecomposition,
    NoKnownConstruction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reason {
    pub condition: Condition,
    pub text: String,
}

impl Reason {
    fn new(condition: Condition, text: impl Into<String>) -> Self {
        Reason { condition, text: text.into() }
    }
}

/// One local factor `F_{p^lambda}^* x H` of a decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalFactor {
    pub p: u64,
    pub lambda: u32,
    pub h_type: AbelianGroupType,
}

impl LocalFactor {
    pub fn group(&self) -> AbelianGroupType {
        AbelianGroupType::cyclic(self.p.pow(self.lambda) - 1).product(&self.h_type)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizabilityVerdict {
    pub status: Status,
    pub witness: Option<BuildRecipe>,
    pub reason: Option<Reason>,
    pub decomposition: Option<Vec<LocalFactor>>,
}

impl RealizabilityVerdict {
    fn realizable(witness: BuildRecipe, decomposition: Option<Vec<LocalFactor>>) -> Self {
        RealizabilityVerdict { status: Status::Realizable, witness: Some(witness), reason: None, decomposition }
    }

    fn not_realizable(reason: Reason) -> Self {
        RealizabilityVerdict { status: Status::NotRealizable, witness: None, reason: Some(reason), decomposition: None }
    }

    pub fn is_realizable(&self) -> bool {
        self.status == Status::Realizable
    }
}

fn trivial_witness() -> BuildRecipe {
    BuildRecipe::field(2, 1)
}

fn witness_of(parts: Vec<BuildRecipe>) -> BuildRecipe {
    if parts.is_empty() {
        trivial_witness()
    } else {
        BuildRecipe::product(parts)
    }
}

/// `(p^lambda - 1) p^{lambda k}`, the unit count of `GR(p^{k+1}, lambda)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CardinalityTerm {
    pub p: u64,
    pub lambda: u32,
    pub k: u32,
    pub value: u64,
}

impl CardinalityTerm {
    pub fn ring(&self) -> BuildRecipe {
        BuildRecipe::Galois { p: self.p, m: self.k + 1, lambda: self.lambda }
    }

    fn ring_order(&self) -> u128 {
        (self.p as u128).pow(self.lambda * (self.k + 1))
    }
}

/// A term value and every `(p, lambda, k)` producing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermValue {
    pub value: u64,
    pub terms: Vec<CardinalityTerm>,
}

/// All term values up to `bound`, ascending.
pub fn enumerate_terms(bound: u64) -> Vec<TermValue> {
    let mut by_value: std::collections::BTreeMap<u64, Vec<CardinalityTerm>> = Default::default();
    for p in arith::primes_up_to(bound.saturating_add(1)) {
        let mut q = p;
        let mut lambda = 1;
        while q - 1 <= bound {
            let mut value = q - 1;
            let mut k = 0;
            while value <= bound {
                by_value.entry(value).or_default().push(CardinalityTerm { p, lambda, k, value });
                match value.checked_mul(q) {
                    Some(v) => value = v,
                    None => break,
                }
                k += 1;
            }
            match q.checked_mul(p) {
                Some(next) => q = next,
                None => break,
            }
            lambda += 1;
        }
    }
    by_value.into_iter().map(|(value, terms)| TermValue { value, terms }).collect()
}

/// Whether `n` is a product of term values; with `char_primes`, every term uses a listed
/// prime and every listed prime contributes at least one term.
pub fn ditor_realizable(n: u64, char_primes: Option<&BTreeSet<u64>>) -> RealizabilityVerdict {
    if n == 0 {
        return RealizabilityVerdict::not_realizable(Reason::new(Condition::NoTermFactorization, "0 is not a unit count"));
    }
    let allowed = |p: u64| char_primes.is_none_or(|s| s.contains(&p));
    let mut terms: HashMap<u64, Vec<CardinalityTerm>> = HashMap::new();
    for tv in enumerate_terms(n) {
        let mut ts: Vec<CardinalityTerm> = tv.terms.into_iter().filter(|t| allowed(t.p)).collect();
        ts.sort_by_key(|t| t.ring_order());
        if !ts.is_empty() {
            terms.insert(tv.value, ts);
        }
    }
    let required: Vec<u64> = char_primes.map(|s| s.iter().copied().collect()).unwrap_or_default();

    struct Search<'a> {
        terms: &'a HashMap<u64, Vec<CardinalityTerm>>,
        required: &'a [u64],
        failed: std::collections::HashSet<(u64, u64, u64)>,
    }
    impl Search<'_> {
        // chosen terms use values <= max_value, nonincreasing
        fn run(&mut self, rest: u64, uncovered: u64, max_value: u64, chosen: &mut Vec<CardinalityTerm>) -> bool {
            if rest == 1 {
                // only F_2 has unit count 1
                let mut left = uncovered;
                for (i, &p) in self.required.iter().enumerate() {
                    if left & (1 << i) != 0 && p == 2 && self.terms.contains_key(&1) {
                        chosen.push(self.terms[&1][0]);
                        left &= !(1 << i);
                    }
                }
                return left == 0;
            }
            if self.failed.contains(&(rest, uncovered, max_value)) {
                return false;
            }
            for d in arith::divisors(rest).into_iter().rev() {
                if d < 2 || d > max_value {
                    continue;
                }
                let Some(options) = self.terms.get(&d) else { continue };
                // prefer a term whose prime is still uncovered
                let mut ordered: Vec<&CardinalityTerm> = options.iter().collect();
                ordered.sort_by_key(|t| {
                    let idx = self.required.iter().position(|&p| p == t.p);
                    let fresh = idx.is_some_and(|i| uncovered & (1 << i) != 0);
                    (!fresh, t.ring_order())
                });
                let mut tried_primes = BTreeSet::new();
                for t in ordered {
                    if !tried_primes.insert(t.p) {
                        continue;
                    }
                    let idx = self.required.iter().position(|&p| p == t.p);
                    let next = idx.map_or(uncovered, |i| uncovered & !(1 << i));
                    chosen.push(*t);
                    if self.run(rest / d, next, d, chosen) {
                        return true;
                    }
                    chosen.pop();
                }
            }
            self.failed.insert((rest, uncovered, max_value));
            false
        }
    }

    if required.len() > 63 {
        return RealizabilityVerdict::not_realizable(Reason::new(Condition::NoTermFactorization, "too many primes"));
    }
    let mut search = Search { terms: &terms, required: &required, failed: Default::default() };
    let mut chosen = Vec::new();
    let all = if required.is_empty() { 0 } else { (1u64 << required.len()) - 1 };
    if search.run(n, all, n, &mut chosen) {
        let witness = witness_of(chosen.iter().map(CardinalityTerm::ring).collect());
        RealizabilityVerdict::realizable(witness, None)
    } else {
        let text = match char_primes {
            Some(s) => format!("{n} is not a product of unit counts of local rings over the primes {s:?} covering each of them"),
            None => format!("{n} is not a product of numbers (p^lambda - 1) p^(lambda k)"),
        };
        RealizabilityVerdict::not_realizable(Reason::new(Condition::NoTermFactorization, text))
    }
}

/// All unit counts `<= max` of rings of finite characteristic, ascending.
pub fn enumerate_cardinalities(max: u64) -> Vec<u64> {
    let values: Vec<u64> = enumerate_terms(max).into_iter().map(|t| t.value).filter(|&v| v >= 2).collect();
    let mut reachable = vec![false; max as usize + 1];
    if max >= 1 {
        reachable[1] = true;
    }
    for n in 1..=max {
        if !reachable[n as usize] {
            continue;
        }
        for &v in &values {
            match n.checked_mul(v) {
                Some(m) if m <= max => reachable[m as usize] = true,
                _ => break,
            }
        }
    }
    (1..=max).filter(|&n| reachable[n as usize]).collect()
}

/// A cyclic unit group of a local ring of order `d`, if there is one: `2` from `Z/4`,
/// `4` from `F_2[x]/(x^3)`, `p^lambda - 1` from a field, `(p - 1) p^k` from `Z/p^{k+1}`.
pub fn cyclic_item(d: u64) -> Option<BuildRecipe> {
    match d {
        0 => None,
        1 => Some(trivial_witness()),
        2 => Some(BuildRecipe::Zn { n: 4 }),
        4 => Some(BuildRecipe::Truncated { p: 2, e: 3 }),
        _ => {
            if let Some((p, lambda)) = d.checked_add(1).and_then(arith::prime_power) {
                return Some(BuildRecipe::field(p, lambda));
            }
            for (p, k) in arith::factorize(d) {
                if p > 2 && d / p.pow(k) == p - 1 {
                    return Some(BuildRecipe::Zn { n: p.pow(k + 1) });
                }
            }
            None
        }
    }
}

/// Whether `C_n` is a unit group: `n` must split into pairwise coprime cyclic items.
pub fn cyclic_realizable(n: u64) -> RealizabilityVerdict {
    fn search(rest: u64, chosen: &mut Vec<BuildRecipe>) -> bool {
        if rest == 1 {
            return true;
        }
        let (r, e) = arith::factorize(rest)[0];
        let re = r.pow(e);
        for d in arith::divisors(rest).into_iter().rev() {
            if d % re != 0 || arith::gcd(d, rest / d) != 1 {
                continue;
            }
            if let Some(item) = cyclic_item(d) {
                chosen.push(item);
                if search(rest / d, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    if n == 0 {
        return RealizabilityVerdict::not_realizable(Reason::new(Condition::NoCoprimeFactorization, "C_0 is not a group"));
    }
    let mut chosen = Vec::new();
    if search(n, &mut chosen) {
        RealizabilityVerdict::realizable(witness_of(chosen), None)
    } else {
        RealizabilityVerdict::not_realizable(Reason::new(
            Condition::NoCoprimeFactorization,
            format!("{n} is not a product of pairwise coprime orders of cyclic local unit groups"),
        ))
    }
}

fn field_search(
    g: &AbelianGroupType,
    allowed: &dyn Fn(u64) -> bool,
    memo: &mut HashMap<AbelianGroupType, Option<Vec<u64>>>,
) -> Option<Vec<u64>> {
    if g.is_trivial() {
        return Some(Vec::new());
    }
    if let Some(hit) = memo.get(g) {
        return hit.clone();
    }
    let (r, e) = pivot(g);
    let mut result = None;
    for d in arith::divisors(g.order()).into_iter().rev() {
        if arith::valuation(d, r) != e {
            continue;
        }
        let q = d + 1;
        if !allowed(q) || arith::prime_power(q).is_none() {
            continue;
        }
        if let Some(rest) = g.without(&AbelianGroupType::cyclic(d)) {
            if let Some(mut fields) = field_search(&rest, allowed, memo) {
                fields.push(q);
                result = Some(fields);
                break;
            }
        }
    }
    memo.insert(g.clone(), result.clone());
    result
}

/// The part used to anchor a decomposition step: the smallest prime and its largest
/// exponent.
fn pivot(g: &AbelianGroupType) -> (u64, u32) {
    let (&r, exps) = g.primary().iter().next().expect("nontrivial group");
    (r, exps[0])
}

fn field_recipe(q: u64) -> BuildRecipe {
    let (p, lambda) = arith::prime_power(q).expect("prime power");
    BuildRecipe::field(p, lambda)
}

fn field_product_with(g: &AbelianGroupType, allowed: &dyn Fn(u64) -> bool, what: &str) -> RealizabilityVerdict {
    match field_search(g, allowed, &mut HashMap::new()) {
        Some(mut qs) => {
            qs.sort_unstable_by(|a, b| b.cmp(a));
            let decomposition = qs
                .iter()
                .map(|&q| {
                    let (p, lambda) = arith::prime_power(q).expect("prime power");
                    LocalFactor { p, lambda, h_type: AbelianGroupType::trivial() }
                })
                .collect();
            RealizabilityVerdict::realizable(witness_of(qs.into_iter().map(field_recipe).collect()), Some(decomposition))
        }
        None => RealizabilityVerdict::not_realizable(Reason::new(
            Condition::NoFieldProduct,
            format!("{g} is not a product of {what}"),
        )),
    }
}

/// Whether `g` is a product of multiplicative groups of finite fields.
pub fn field_product_realizable(g: &AbelianGroupType) -> RealizabilityVerdict {
    field_product_with(g, &|_| true, "groups F_q^*")
}

/// Groups of odd order: realizable exactly when they are products of `F_{2^lambda}^*`.
pub fn odd_order_classify(g: &AbelianGroupType) -> Result<RealizabilityVerdict, RealizeError> {
    let n = g.order();
    if n.is_multiple_of(2) {
        return Err(RealizeError::EvenOrder(n));
    }
    Ok(field_product_with(g, &|q| q.is_power_of_two(), "groups F_{2^lambda}^*"))
}

/// Outcome of the necessary conditions on a local factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NecessaryCheck {
    pub passes: bool,
    /// `k` with `|H| = p^{lambda k}`, when it exists.
    pub k: Option<u32>,
    pub reason: Option<Reason>,
}

fn ensure_p_group(p: u64, h: &AbelianGroupType) -> Result<(), RealizeError> {
    if h.is_p_group(p) && arith::is_prime(p) {
        Ok(())
    } else {
        Err(RealizeError::HNotPGroup { p, h: h.clone() })
    }
}

/// `|H| = p^{lambda k}` and `exp(H) <= p^k`.
pub fn local_factor_necessary(p: u64, lambda: u32, h: &AbelianGroupType) -> Result<NecessaryCheck, RealizeError> {
    ensure_p_group(p, h)?;
    if lambda == 0 {
        return Err(RealizeError::InvalidInput("lambda must be at least 1".into()));
    }
    let log: u32 = h.exponents(p).iter().sum();
    if !log.is_multiple_of(lambda) {
        return Ok(NecessaryCheck {
            passes: false,
            k: None,
            reason: Some(Reason::new(
                Condition::OrderNotResiduePower,
                format!("|H| = {p}^{log} is not a power of {p}^{lambda}"),
            )),
        });
    }
    let k = log / lambda;
    let top = h.exponents(p).first().copied().unwrap_or(0);
    if top > k {
        return Ok(NecessaryCheck {
            passes: false,
            k: Some(k),
            reason: Some(Reason::new(
                Condition::ExponentBound,
                format!("H = {h} has exponent {p}^{top} above {p}^{k}"),
            )),
        });
    }
    Ok(NecessaryCheck { passes: true, k: Some(k), reason: None })
}

fn divide_multiplicities(p: u64, h: &AbelianGroupType, lambda: u32) -> Option<Vec<u32>> {
    let exps = h.exponents(p);
    let mut out = Vec::new();
    let mut i = 0;
    while i < exps.len() {
        let run = exps[i..].iter().take_while(|&&e| e == exps[i]).count();
        if run % lambda as usize != 0 {
            return None;
        }
        out.extend(std::iter::repeat_n(exps[i], run / lambda as usize));
        i += run;
    }
    Some(out)
}

/// A known ring whose `1 + m` is `h` over residue field `F_{p^lambda}`, if one of the
/// covered families fits.
pub fn local_factor_sufficient(p: u64, lambda: u32, h: &AbelianGroupType) -> Result<Option<BuildRecipe>, RealizeError> {
    ensure_p_group(p, h)?;
    if lambda == 0 {
        return Err(RealizeError::InvalidInput("lambda must be at least 1".into()));
    }
    if h.is_trivial() {
        return Ok(Some(BuildRecipe::field(p, lambda)));
    }
    if p > 2 {
        if let Some(partition) = divide_multiplicities(p, h, lambda) {
            return Ok(Some(BuildRecipe::OddFamily { p, lambda, partition }));
        }
    } else {
        let top = h.exponents(2)[0];
        for a0 in (1..=top + 1).rev() {
            let recipe = BuildRecipe::TwoFamily { lambda, a0, partition: Vec::new() };
            let base = predicted_unit_group(&recipe).expect("valid recipe").p_part(2);
            let Some(rest) = h.without(&base) else { continue };
            let Some(partition) = divide_multiplicities(2, &rest, lambda) else { continue };
            if partition.first().is_some_and(|&a| a > a0 + 1) {
                continue;
            }
            return Ok(Some(BuildRecipe::TwoFamily { lambda, a0, partition }));
        }
    }
    let candidates: Vec<BuildRecipe> = match (p, lambda) {
        (2, 2) => (3..=h.exponents(2)[0]).map(|a0| BuildRecipe::Example2 { a0 }).collect(),
        (_, 2) => vec![BuildRecipe::ExampleP { p }],
        (_, 1) => {
            let log: u32 = h.exponents(p).iter().sum();
            vec![BuildRecipe::Truncated { p, e: log + 1 }]
        }
        _ => Vec::new(),
    };
    for recipe in candidates {
        if predicted_unit_group(&recipe).expect("valid recipe").p_part(p) == *h {
            return Ok(Some(recipe));
        }
    }
    Ok(None)
}

/// Necessary conditions used by the decomposition search: [`local_factor_necessary`]
/// plus the fact that over `F_2` a cyclic `1 + m` has order at most 4.
fn factor_obstruction(p: u64, lambda: u32, h: &AbelianGroupType) -> Option<Reason> {
    let check = local_factor_necessary(p, lambda, h).expect("p-group by construction");
    if !check.passes {
        return check.reason;
    }
    if p == 2 && lambda == 1 && h.is_cyclic() && h.order() >= 8 {
        return Some(Reason::new(Condition::CyclicTwoAdic, format!("1 + m = {h} is cyclic of order at least 8 over F_2")));
    }
    None
}

fn sub_multisets(exps: &[u32], must_contain: Option<u32>) -> Vec<Vec<u32>> {
    let mut runs: Vec<(u32, usize)> = Vec::new();
    for &e in exps {
        match runs.last_mut() {
            Some(last) if last.0 == e => last.1 += 1,
            _ => runs.push((e, 1)),
        }
    }
    let mut out = vec![Vec::new()];
    for &(e, count) in &runs {
        let lo = usize::from(must_contain == Some(e));
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                (lo..=count).map(move |c| {
                    let mut w = v.clone();
                    w.extend(std::iter::repeat_n(e, c));
                    w
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Clone)]
enum Outcome {
    Found(Vec<(LocalFactor, BuildRecipe)>),
    /// Every factor passes the necessary conditions, at least one has no known ring.
    Open { factors: Vec<LocalFactor>, unknown: LocalFactor },
    Dead(Reason),
}

/// Decision procedures sharing a cap on the order of queried groups.
#[derive(Debug, Clone, Copy)]
pub struct Realizer {
    pub max_order: u64,
}

impl Default for Realizer {
    fn default() -> Self {
        Realizer { max_order: DEFAULT_MAX_ORDER }
    }
}

impl Realizer {
    pub fn new(max_order: u64) -> Self {
        Realizer { max_order }
    }

    /// Searches decompositions `g = prod (C_{p^lambda - 1} x H)` local factor by local
    /// factor. Each step takes the largest cyclic factor of the smallest prime `q` in
    /// what is left and tries every local factor that can contain it: one with `p = q`
    /// holding it in `H`, or one whose `p^lambda - 1` has exactly that `q`-part.
    pub fn group_realizable(&self, g: &AbelianGroupType) -> Result<RealizabilityVerdict, RealizeError> {
        let order = g.order();
        if order > self.max_order {
            return Err(RealizeError::OrderTooLarge { order, cap: self.max_order });
        }
        let mut memo = HashMap::new();
        Ok(match search(g, &mut memo) {
            Outcome::Found(parts) => {
                let (factors, recipes): (Vec<_>, Vec<_>) = parts.into_iter().unzip();
                RealizabilityVerdict::realizable(witness_of(recipes), Some(factors))
            }
            Outcome::Open { factors, unknown } => RealizabilityVerdict {
                status: Status::Unknown,
                witness: None,
                reason: Some(Reason::new(
                    Condition::NoKnownConstruction,
                    format!(
                        "local factor p = {}, lambda = {}, H = {} passes the necessary conditions but matches no known construction",
                        unknown.p, unknown.lambda, unknown.h_type
                    ),
                )),
                decomposition: Some(factors),
            },
            Outcome::Dead(reason) => RealizabilityVerdict::not_realizable(reason),
        })
    }
}

fn local_candidates(g: &AbelianGroupType) -> Vec<LocalFactor> {
    let (q, e) = pivot(g);
    let order = g.order();
    let mut out = Vec::new();

    // the pivot sits in H, so p = q
    let mut qlambda = q;
    let mut lambda = 1;
    while qlambda - 1 <= order {
        if let Some(rest) = g.without(&AbelianGroupType::cyclic(qlambda - 1)) {
            for exps in sub_multisets(rest.exponents(q), Some(e)) {
                out.push(LocalFactor { p: q, lambda, h_type: AbelianGroupType::from_primary([(q, exps)]) });
            }
        }
        match qlambda.checked_mul(q) {
            Some(v) => qlambda = v,
            None => break,
        }
        lambda += 1;
    }

    // the pivot sits in F_{p^lambda}^*
    for d in arith::divisors(order) {
        if arith::valuation(d, q) != e {
            continue;
        }
        let Some((p, lambda)) = arith::prime_power(d + 1) else { continue };
        let Some(rest) = g.without(&AbelianGroupType::cyclic(d)) else { continue };
        for exps in sub_multisets(rest.exponents(p), None) {
            out.push(LocalFactor { p, lambda, h_type: AbelianGroupType::from_primary([(p, exps)]) });
        }
    }

    // large pieces first, then large residue fields
    out.sort_by_key(|f| std::cmp::Reverse((f.group().order(), f.p.pow(f.lambda))));
    out
}

fn search(g: &AbelianGroupType, memo: &mut HashMap<AbelianGroupType, Outcome>) -> Outcome {
    if g.is_trivial() {
        return Outcome::Found(Vec::new());
    }
    if let Some(hit) = memo.get(g) {
        return hit.clone();
    }
    let mut open: Option<Outcome> = None;
    let mut first_obstruction: Option<Reason> = None;
    let mut result = None;
    for factor in local_candidates(g) {
        if let Some(reason) = factor_obstruction(factor.p, factor.lambda, &factor.h_type) {
            first_obstruction.get_or_insert(reason);
            continue;
        }
        let known = local_factor_sufficient(factor.p, factor.lambda, &factor.h_type).expect("p-group by construction");
        let rest = g.without(&factor.group()).expect("candidate is a direct factor");
        match (search(&rest, memo), known) {
            (Outcome::Found(mut parts), Some(recipe)) => {
                parts.insert(0, (factor, recipe));
                result = Some(Outcome::Found(parts));
                break;
            }
            (Outcome::Found(parts), None) => {
                if open.is_none() {
                    let mut factors = vec![factor.clone()];
                    factors.extend(parts.into_iter().map(|(f, _)| f));
                    open = Some(Outcome::Open { factors, unknown: factor });
                }
            }
            (Outcome::Open { factors: sub, unknown }, _) => {
                if open.is_none() {
                    let mut factors = vec![factor];
                    factors.extend(sub);
                    open = Some(Outcome::Open { factors, unknown });
                }
            }
            (Outcome::Dead(reason), _) => {
                first_obstruction.get_or_insert(reason);
            }
        }
    }
    let result = result.or(open).unwrap_or_else(|| {
        Outcome::Dead(first_obstruction.unwrap_or_else(|| {
            Reason::new(Condition::NoDecomposition, format!("{g} has no decomposition into local unit groups"))
        }))
    });
    memo.insert(g.clone(), result.clone());
    result
}

pub fn group_realizable(g: &AbelianGroupType) -> Result<RealizabilityVerdict, RealizeError> {
    Realizer::default().group_realizable(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> AbelianGroupType {
        s.parse().unwrap()
    }

    #[test]
    fn term_enumeration() {
        let values: Vec<u64> = enumerate_terms(4).iter().map(|t| t.value).collect();
        assert_eq!(values, vec![1, 2, 3, 4]);
        let terms = enumerate_terms(100);
        let six = terms.iter().find(|t| t.value == 6).unwrap();
        assert!(six.terms.iter().any(|t| (t.p, t.lambda, t.k) == (7, 1, 0)));
        assert!(six.terms.iter().any(|t| (t.p, t.lambda, t.k) == (3, 1, 1)));
        assert!(!terms.iter().any(|t| t.value == 5));
        assert_eq!(terms[0].terms, vec![CardinalityTerm { p: 2, lambda: 1, k: 0, value: 1 }]);
    }

    #[test]
    fn ditor_cases() {
        assert_eq!(ditor_realizable(5, None).status, Status::NotRealizable);
        let v = ditor_realizable(24, None);
        assert!(v.is_realizable());
        assert_eq!(predicted_unit_group(v.witness.as_ref().unwrap()).unwrap().order(), 24);
        assert_eq!(ditor_realizable(1, None).witness, Some(BuildRecipe::field(2, 1)));
        // 3 needs p = 2 (F_4) or p = 3 ... only F_4 gives 3
        let only3: BTreeSet<u64> = [3].into();
        assert_eq!(ditor_realizable(3, Some(&only3)).status, Status::NotRealizable);
        let two_three: BTreeSet<u64> = [2, 3].into();
        let v = ditor_realizable(6, Some(&two_three));
        assert!(v.is_realizable(), "{v:?}");
    }

    #[test]
    fn cardinalities() {
        let list = enumerate_cardinalities(63);
        let odd: Vec<u64> = list.iter().copied().filter(|n| n % 2 == 1).collect();
        assert_eq!(odd, vec![1, 3, 7, 9, 15, 21, 27, 31, 45, 49, 63]);
        assert!(list.contains(&2));
        for n in [5, 11, 13, 25] {
            assert!(!list.contains(&n));
        }
    }

    #[test]
    fn cyclic_cases() {
        assert!(cyclic_realizable(8).is_realizable());
        assert_eq!(cyclic_realizable(8).witness, Some(BuildRecipe::field(3, 2)));
        assert_eq!(cyclic_realizable(4).witness, Some(BuildRecipe::Truncated { p: 2, e: 3 }));
        assert_eq!(cyclic_realizable(10).witness, Some(BuildRecipe::field(11, 1)));
        assert_eq!(cyclic_realizable(32).status, Status::NotRealizable);
        assert!(cyclic_realizable(16).is_realizable());
    }

    #[test]
    fn field_products() {
        let v = field_product_realizable(&t("C3 x C7"));
        assert_eq!(v.witness.unwrap().to_string(), "F8 x F4");
        assert_eq!(field_product_realizable(&t("C5")).status, Status::NotRealizable);
        assert_eq!(field_product_realizable(&t("1")).witness, Some(BuildRecipe::field(2, 1)));
    }

    #[test]
    fn odd_orders() {
        assert_eq!(odd_order_classify(&t("C7")).unwrap().witness, Some(BuildRecipe::field(2, 3)));
        assert_eq!(odd_order_classify(&t("C5")).unwrap().status, Status::NotRealizable);
        assert!(odd_order_classify(&t("C3 x C3")).unwrap().is_realizable());
        assert_eq!(odd_order_classify(&t("C6")), Err(RealizeError::EvenOrder(6)));
    }

    #[test]
    fn necessary_conditions() {
        let c = local_factor_necessary(3, 2, &t("C27 x C3")).unwrap();
        assert!(!c.passes);
        assert_eq!(c.reason.unwrap().condition, Condition::ExponentBound);
        assert!(local_factor_necessary(3, 2, &t("C3^2")).unwrap().passes);
        let c = local_factor_necessary(2, 3, &t("C2")).unwrap();
        assert_eq!(c.reason.unwrap().condition, Condition::OrderNotResiduePower);
        assert!(matches!(local_factor_necessary(2, 1, &t("C3")), Err(RealizeError::HNotPGroup { .. })));
    }

    #[test]
    fn sufficient_conditions() {
        assert_eq!(
            local_factor_sufficient(3, 1, &t("C9 x C3")).unwrap(),
            Some(BuildRecipe::OddFamily { p: 3, lambda: 1, partition: vec![2, 1] })
        );
        assert_eq!(local_factor_sufficient(3, 2, &t("C9 x C3^4")).unwrap(), Some(BuildRecipe::ExampleP { p: 3 }));
        assert_eq!(
            local_factor_sufficient(2, 1, &t("C2^3")).unwrap(),
            Some(BuildRecipe::TwoFamily { lambda: 1, a0: 2, partition: vec![1] })
        );
        assert_eq!(local_factor_sufficient(2, 1, &t("C4")).unwrap(), Some(BuildRecipe::Truncated { p: 2, e: 3 }));
        assert_eq!(
            local_factor_sufficient(2, 2, &t("C2^3 x C4^2 x C8")).unwrap(),
            Some(BuildRecipe::Example2 { a0: 3 })
        );
        assert_eq!(local_factor_sufficient(3, 2, &t("C9 x C3^2")).unwrap(), None);
    }

    #[test]
    fn group_cases() {
        let v = group_realizable(&t("C8 x C3^4")).unwrap();
        assert_eq!(v.witness, Some(BuildRecipe::OddFamily { p: 3, lambda: 2, partition: vec![1, 1] }));
        assert_eq!(predicted_unit_group(v.witness.as_ref().unwrap()).unwrap(), t("C8 x C3^4"));
        assert!(group_realizable(&t("C8")).unwrap().is_realizable());
        assert_eq!(group_realizable(&t("C32")).unwrap().status, Status::NotRealizable);
        let v = group_realizable(&t("C2 x C8")).unwrap();
        assert!(v.is_realizable());
        assert!(group_realizable(&t("1")).unwrap().is_realizable());
        assert!(matches!(
            Realizer::new(100).group_realizable(&t("C128")),
            Err(RealizeError::OrderTooLarge { order: 128, cap: 100 })
        ));
    }

    #[test]
    fn sub_multiset_enumeration() {
        assert_eq!(sub_multisets(&[2, 1, 1], Some(2)).len(), 3);
        assert_eq!(sub_multisets(&[2, 1, 1], None).len(), 6);
        assert_eq!(sub_multisets(&[], None), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn verdict_json_shape() {
        let v = cyclic_realizable(32);
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["status"], "NotRealizable");
        assert_eq!(json["reason"]["condition"], "no-coprime-factorization");
        assert!(json["witness"].is_null());
    }
}
