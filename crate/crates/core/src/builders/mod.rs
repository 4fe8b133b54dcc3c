//! Concrete rings: Galois rings and the families whose unit groups are known in closed
//! form, all compiled to a [`FiniteRing`].
//!
//! Every family here is an algebra over a Galois ring `R = GR(p^m, lambda)`, free or
//! truncated over a handful of monomials, so one assembly routine builds them all: the
//! additive basis is `t^j * M` for `j < lambda` and each monomial `M`.

mod poly;
mod recipe;

pub use poly::{find_irreducible, format_poly, irreducibles, is_irreducible};
pub use recipe::{predicted_unit_group, BuildRecipe};

use thiserror::Error;

use crate::arith;
use crate::groups::AbelianGroupType;
use crate::ring::{integers_mod, FiniteRing, RingError};

/// Default cap on the number of elements of a built ring.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("this family needs an odd prime")]
    PIsTwo,
    #[error("partition belongs to p = {got}, expected p = {expected}")]
    PartitionPrimeMismatch { expected: u64, got: u64 },
    #[error("invalid partition: {0}")]
    BadPartition(String),
    #[error("a0 = {a0} is below a - 1 = {} for a group of exponent 2^{a}", a - 1)]
    ExponentTooLarge { a0: u32, a: u32 },
    #[error("a0 = {a0} is below the minimum {min}")]
    A0TooSmall { a0: u32, min: u32 },
    #[error("p = {p} gives a ring of {order} elements, above the cap {cap}")]
    PTooLargeForDeskScale { p: u64, order: u128, cap: u64 },
    #[error("ring would have {order} elements, above the cap {cap}")]
    TooLarge { order: u128, cap: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A finite abelian `p`-group `C_{p^a_0} x C_{p^a_1} x ...` with `a_0 >= a_1 >= ... >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PGroupPartition {
    p: u64,
    exps: Vec<u32>,
}

impl PGroupPartition {
    pub fn new(p: u64, exps: Vec<u32>) -> Result<Self, BuildError> {
        if !arith::is_prime(p) {
            return Err(BuildError::NotPrime(p));
        }
        if exps.contains(&0) {
            return Err(BuildError::BadPartition("exponents must be at least 1".into()));
        }
        if exps.windows(2).any(|w| w[0] < w[1]) {
            return Err(BuildError::BadPartition(format!("{exps:?} is not descending")));
        }
        Ok(PGroupPartition { p, exps })
    }

    pub fn trivial(p: u64) -> Self {
        PGroupPartition { p, exps: Vec::new() }
    }

    /// The `p`-part of `g` as a partition.
    pub fn from_group(p: u64, g: &AbelianGroupType) -> Result<Self, BuildError> {
        if !g.is_p_group(p) {
            return Err(BuildError::BadPartition(format!("{g} is not a {p}-group")));
        }
        Self::new(p, g.exponents(p).to_vec())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    /// `a` with `p^a` the exponent of the group (0 for the trivial group).
    pub fn exponent_log(&self) -> u32 {
        self.exps.first().copied().unwrap_or(0)
    }

    pub fn group(&self) -> AbelianGroupType {
        AbelianGroupType::from_primary([(self.p, self.exps.clone())])
    }

    /// The direct power `P^lambda`.
    pub fn power(&self, lambda: u32) -> AbelianGroupType {
        let exps = self.exps.iter().flat_map(|&e| std::iter::repeat_n(e, lambda as usize)).collect();
        AbelianGroupType::from_primary([(self.p, exps)])
    }
}

/// An algebra over `(Z/p^m)[t]/(f)` spanned by monomials. Monomial 0 is the identity;
/// `rule(a, b)` lists the terms `(c, k)` of the product `M_a * M_b = sum c * M_k`.
struct ModuleAlgebra<'a> {
    p: u64,
    m: u32,
    f: &'a [u64],
    mono_orders: Vec<u64>,
    mono_labels: Vec<String>,
    rule: &'a dyn Fn(usize, usize) -> Vec<(i64, usize)>,
}

impl ModuleAlgebra<'_> {
    fn cardinality(&self) -> Option<u128> {
        let lambda = self.f.len() as u32 - 1;
        self.mono_orders
            .iter()
            .try_fold(1u128, |acc, &o| acc.checked_mul((o as u128).checked_pow(lambda)?))
    }

    fn assemble(&self, cap: u64) -> Result<FiniteRing, BuildError> {
        let order = self.cardinality().unwrap_or(u128::MAX);
        if order > cap as u128 {
            return Err(BuildError::TooLarge { order, cap });
        }
        let lambda = self.f.len() - 1;
        let q = self.p.pow(self.m);

        // t^s reduced modulo f, for s < 2 lambda - 1
        let mut tpow = vec![{
            let mut one = vec![0u64; lambda];
            one[0] = 1 % q;
            one
        }];
        for _ in 1..(2 * lambda - 1).max(1) {
            let prev = tpow.last().expect("nonempty");
            let carry = prev[lambda - 1];
            let mut next = vec![0u64; lambda];
            for s in (1..lambda).rev() {
                next[s] = prev[s - 1];
            }
            for s in 0..lambda {
                let sub = carry * (self.f[s] % q) % q;
                next[s] = (next[s] + q - sub) % q;
            }
            tpow.push(next);
        }

        let monos = self.mono_orders.len();
        let d = monos * lambda;
        let index = |mono: usize, j: usize| mono * lambda + j;
        let mut orders = vec![0u64; d];
        let mut labels = vec![String::new(); d];
        for mono in 0..monos {
            for j in 0..lambda {
                orders[index(mono, j)] = self.mono_orders[mono];
                let tpart = match j {
                    0 => String::new(),
                    1 => "t".to_string(),
                    _ => format!("t^{j}"),
                };
                let ml = &self.mono_labels[mono];
                labels[index(mono, j)] = match (tpart.is_empty(), ml == "1") {
                    (true, _) => ml.clone(),
                    (false, true) => tpart,
                    (false, false) => format!("{tpart}*{ml}"),
                };
            }
        }

        let mut constants = vec![vec![vec![0u64; d]; d]; d];
        for a in 0..monos {
            for b in 0..monos {
                let terms = (self.rule)(a, b);
                for j1 in 0..lambda {
                    for j2 in 0..lambda {
                        let slot = &mut constants[index(a, j1)][index(b, j2)];
                        for &(c, k) in &terms {
                            let n = self.mono_orders[k];
                            let c = c.rem_euclid(n as i64) as u64;
                            for (s, &r) in tpow[j1 + j2].iter().enumerate() {
                                let i = index(k, s);
                                slot[i] = (slot[i] + c * (r % n)) % n;
                            }
                        }
                    }
                }
            }
        }
        Ok(FiniteRing::new(orders, constants)?.with_labels(labels))
    }
}

fn ensure_prime(p: u64) -> Result<(), BuildError> {
    if arith::is_prime(p) {
        Ok(())
    } else {
        Err(BuildError::NotPrime(p))
    }
}

fn checked_pow(p: u64, e: u32) -> Result<u64, BuildError> {
    p.checked_pow(e)
        .filter(|&v| v <= u32::MAX as u64)
        .ok_or_else(|| BuildError::InvalidParameter(format!("{p}^{e} exceeds the supported characteristic")))
}

fn x_labels(count: usize) -> Vec<String> {
    std::iter::once("1".to_string()).chain((1..=count).map(|i| format!("x{i}"))).collect()
}

/// Ring builders sharing one cardinality cap.
#[derive(Debug, Clone, Copy)]
pub struct Builder {
    pub max_order: u64,
}

impl Default for Builder {
    fn default() -> Self {
        Builder { max_order: DEFAULT_MAX_ORDER }
    }
}

impl Builder {
    pub fn new(max_order: u64) -> Self {
        Builder { max_order }
    }

    fn precheck(&self, p: u64, exponent: u64) -> Result<(), BuildError> {
        let order = u32::try_from(exponent).ok().and_then(|e| (p as u128).checked_pow(e)).unwrap_or(u128::MAX);
        if order > self.max_order as u128 {
            Err(BuildError::TooLarge { order, cap: self.max_order })
        } else {
            Ok(())
        }
    }

    /// `GR(p^m, lambda) = (Z/p^m)[t]/(f)` with `f` from [`find_irreducible`].
    pub fn galois_ring(&self, p: u64, m: u32, lambda: u32) -> Result<FiniteRing, BuildError> {
        ensure_prime(p)?;
        if lambda == 0 {
            return Err(BuildError::InvalidParameter("lambda must be at least 1".into()));
        }
        self.precheck(p, m as u64 * lambda as u64)?;
        self.galois_ring_with(p, m, &find_irreducible(p, lambda))
    }

    /// `(Z/p^m)[t]/(f)` for a monic `f` irreducible mod `p`.
    pub fn galois_ring_with(&self, p: u64, m: u32, f: &[u64]) -> Result<FiniteRing, BuildError> {
        ensure_prime(p)?;
        if m == 0 {
            return Err(BuildError::InvalidParameter("m must be at least 1".into()));
        }
        if f.last() != Some(&1) || !is_irreducible(f, p) {
            return Err(BuildError::InvalidParameter(format!("{} is not monic irreducible mod {p}", format_poly(f))));
        }
        let q = checked_pow(p, m)?;
        let rule = |_: usize, _: usize| vec![(1, 0)];
        ModuleAlgebra { p, m, f, mono_orders: vec![q], mono_labels: x_labels(0), rule: &rule }.assemble(self.max_order)
    }

    /// `R[x_1..x_r]/(p^{a_i} x_i, x_i x_j)` with `R = GR(p^{a_0+1}, lambda)`, where the
    /// partition of `P` is `a_0 >= a_1 >= ... >= a_r`. Needs `p > 2`.
    pub fn odd_family(&self, p: u64, lambda: u32, partition: &PGroupPartition) -> Result<FiniteRing, BuildError> {
        ensure_prime(p)?;
        if p == 2 {
            return Err(BuildError::PIsTwo);
        }
        if partition.p() != p {
            return Err(BuildError::PartitionPrimeMismatch { expected: p, got: partition.p() });
        }
        let a0 = partition.exponent_log();
        let rest = partition.exps().get(1..).unwrap_or(&[]);
        self.x_algebra(p, a0 + 1, lambda, rest)
    }

    /// `R[x_1..x_r]/(2^{a_i} x_i, x_i x_j)` with `R = GR(2^{a_0+1}, lambda)`, where the
    /// partition of `P` is `a_1 >= ... >= a_r`. Needs `a_0 >= max(1, a_1 - 1)`.
    pub fn two_family(&self, lambda: u32, a0: u32, partition: &PGroupPartition) -> Result<FiniteRing, BuildError> {
        if partition.p() != 2 {
            return Err(BuildError::PartitionPrimeMismatch { expected: 2, got: partition.p() });
        }
        if a0 == 0 {
            return Err(BuildError::A0TooSmall { a0, min: 1 });
        }
        let a = partition.exponent_log();
        if a0 + 1 < a {
            return Err(BuildError::ExponentTooLarge { a0, a });
        }
        self.x_algebra(2, a0 + 1, lambda, partition.exps())
    }

    fn x_algebra(&self, p: u64, m: u32, lambda: u32, x_exps: &[u32]) -> Result<FiniteRing, BuildError> {
        if lambda == 0 {
            return Err(BuildError::InvalidParameter("lambda must be at least 1".into()));
        }
        self.precheck(p, lambda as u64 * (m as u64 + x_exps.iter().map(|&a| a as u64).sum::<u64>()))?;
        let f = find_irreducible(p, lambda);
        let mut mono_orders = vec![checked_pow(p, m)?];
        for &a in x_exps {
            mono_orders.push(checked_pow(p, a)?);
        }
        let rule = |a: usize, b: usize| match (a, b) {
            (0, k) | (k, 0) => vec![(1, k)],
            _ => Vec::new(),
        };
        ModuleAlgebra { p, m, f: &f, mono_orders, mono_labels: x_labels(x_exps.len()), rule: &rule }
            .assemble(self.max_order)
    }

    /// `(Z/p^2)[t,x]/(f, p x^2, x^{p-1} + p)` with `deg f = 2`, for odd `p`. Basis
    /// `t^j x^i` with `i <= p - 2`, where `x^i` has order `p^2` for `i <= 1` and `p` above.
    pub fn example_p(&self, p: u64) -> Result<FiniteRing, BuildError> {
        ensure_prime(p)?;
        if p == 2 {
            return Err(BuildError::PIsTwo);
        }
        let order = (p as u128).checked_pow(2 * p as u32 + 2).unwrap_or(u128::MAX);
        if order > self.max_order as u128 {
            return Err(BuildError::PTooLargeForDeskScale { p, order, cap: self.max_order });
        }
        let top = (p - 2) as usize;
        let f = find_irreducible(p, 2);
        let mono_orders = (0..=top).map(|i| if i <= 1 { p * p } else { p }).collect();
        let mono_labels = (0..=top)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        let rule = |a: usize, b: usize| {
            let s = a + b;
            if s <= top {
                vec![(1, s)]
            } else if s - (top + 1) <= 1 {
                // x^{p-1} = -p, and p x^r vanishes for r >= 2
                vec![(-(p as i64), s - (top + 1))]
            } else {
                Vec::new()
            }
        };
        ModuleAlgebra { p, m: 2, f: &f, mono_orders, mono_labels, rule: &rule }.assemble(self.max_order)
    }

    /// `(Z/2^{a_0+1})[t,x]/(t^2 + t + 1, 4x, x^2 + 2x)` for `a_0 >= 3`.
    pub fn example_2(&self, a0: u32) -> Result<FiniteRing, BuildError> {
        if a0 < 3 {
            return Err(BuildError::A0TooSmall { a0, min: 3 });
        }
        let f = find_irreducible(2, 2);
        let mono_orders = vec![checked_pow(2, a0 + 1)?, 4];
        let mono_labels = vec!["1".to_string(), "x".to_string()];
        let rule = |a: usize, b: usize| match (a, b) {
            (0, k) | (k, 0) => vec![(1, k)],
            _ => vec![(-2, 1)],
        };
        ModuleAlgebra { p: 2, m: a0 + 1, f: &f, mono_orders, mono_labels, rule: &rule }.assemble(self.max_order)
    }

    /// `(Z/p)[x]/(x^e)`.
    pub fn truncated(&self, p: u64, e: u32) -> Result<FiniteRing, BuildError> {
        ensure_prime(p)?;
        if e == 0 {
            return Err(BuildError::InvalidParameter("e must be at least 1".into()));
        }
        let top = e as usize;
        let f = [0, 1];
        let mono_labels = (0..top)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        let rule = |a: usize, b: usize| if a + b < top { vec![(1, a + b)] } else { Vec::new() };
        ModuleAlgebra { p, m: 1, f: &f, mono_orders: vec![p; top], mono_labels, rule: &rule }.assemble(self.max_order)
    }

    /// `Z/n`.
    pub fn zn(&self, n: u64) -> Result<FiniteRing, BuildError> {
        if n == 0 || n > u32::MAX as u64 {
            return Err(BuildError::InvalidParameter(format!("n = {n} is out of range")));
        }
        if n > self.max_order {
            return Err(BuildError::TooLarge { order: n as u128, cap: self.max_order });
        }
        Ok(integers_mod(n)?)
    }
}

pub fn galois_ring(p: u64, m: u32, lambda: u32) -> Result<FiniteRing, BuildError> {
    Builder::default().galois_ring(p, m, lambda)
}

pub fn build_odd_family(p: u64, lambda: u32, partition: &PGroupPartition) -> Result<FiniteRing, BuildError> {
    Builder::default().odd_family(p, lambda, partition)
}

pub fn build_two_family(lambda: u32, a0: u32, partition: &PGroupPartition) -> Result<FiniteRing, BuildError> {
    Builder::default().two_family(lambda, a0, partition)
}

pub fn build_example_p(p: u64) -> Result<FiniteRing, BuildError> {
    Builder::default().example_p(p)
}

pub fn build_example_2(a0: u32) -> Result<FiniteRing, BuildError> {
    Builder::default().example_2(a0)
}

pub fn build_from_recipe(recipe: &BuildRecipe) -> Result<FiniteRing, BuildError> {
    Builder::default().build(recipe)
}
