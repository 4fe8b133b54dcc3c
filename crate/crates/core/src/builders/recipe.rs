use std::fmt;

use serde::{Deserialize, Serialize};

use super::{BuildError, Builder, PGroupPartition};
use crate::arith;
use crate::groups::AbelianGroupType;
use crate::ring::direct_product;
use crate::FiniteRing;

/// A ring from one of the known families, or a direct product of such rings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum BuildRecipe {
    /// `GR(p^m, lambda)`.
    Galois { p: u64, m: u32, lambda: u32 },
    /// Odd `p`; units `F_{p^lambda}^* x P^lambda`.
    #[serde(rename = "odd")]
    OddFamily { p: u64, lambda: u32, partition: Vec<u32> },
    /// `p = 2`; units `F_{2^lambda}^* x C_2 x C_{2^{a0-1}} x C_{2^a0}^{lambda-1} x P^lambda`.
    #[serde(rename = "two")]
    TwoFamily { lambda: u32, a0: u32, partition: Vec<u32> },
    ExampleP { p: u64 },
    #[serde(rename = "example-2")]
    Example2 { a0: u32 },
    Zn { n: u64 },
    /// `(Z/p)[x]/(x^e)`.
    Truncated { p: u64, e: u32 },
    Product { factors: Vec<BuildRecipe> },
}

impl BuildRecipe {
    pub fn field(p: u64, lambda: u32) -> Self {
        BuildRecipe::Galois { p, m: 1, lambda }
    }

    /// A product of the given recipes, flattening nested products; a single factor is
    /// returned as is.
    pub fn product(factors: impl IntoIterator<Item = BuildRecipe>) -> Self {
        let mut flat = Vec::new();
        for f in factors {
            match f {
                BuildRecipe::Product { factors } => flat.extend(factors),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().expect("one factor")
        } else {
            BuildRecipe::Product { factors: flat }
        }
    }

    /// Number of elements of the ring, computed without building it.
    pub fn ring_order(&self) -> Option<u128> {
        let pow = |p: u64, e: u128| -> Option<u128> { (p as u128).checked_pow(u32::try_from(e).ok()?) };
        let lam = |l: u32| l as u128;
        match self {
            BuildRecipe::Galois { p, m, lambda } => pow(*p, *m as u128 * lam(*lambda)),
            BuildRecipe::OddFamily { p, lambda, partition } => {
                let a0 = partition.first().copied().unwrap_or(0) as u128;
                let rest: u128 = partition.iter().skip(1).map(|&a| a as u128).sum();
                pow(*p, lam(*lambda) * (a0 + 1 + rest))
            }
            BuildRecipe::TwoFamily { lambda, a0, partition } => {
                let rest: u128 = partition.iter().map(|&a| a as u128).sum();
                pow(2, lam(*lambda) * (*a0 as u128 + 1 + rest))
            }
            BuildRecipe::ExampleP { p } => pow(*p, 2 * *p as u128 + 2),
            BuildRecipe::Example2 { a0 } => pow(2, 2 * *a0 as u128 + 6),
            BuildRecipe::Zn { n } => Some(*n as u128),
            BuildRecipe::Truncated { p, e } => pow(*p, *e as u128),
            BuildRecipe::Product { factors } => {
                factors.iter().try_fold(1u128, |acc, f| acc.checked_mul(f.ring_order()?))
            }
        }
    }

    /// Checks the family's parameter constraints without building anything.
    pub fn validate(&self) -> Result<(), BuildError> {
        let prime = |p: u64| if arith::is_prime(p) { Ok(()) } else { Err(BuildError::NotPrime(p)) };
        let positive = |v: u32, what: &str| {
            if v == 0 {
                Err(BuildError::InvalidParameter(format!("{what} must be at least 1")))
            } else {
                Ok(())
            }
        };
        match self {
            BuildRecipe::Galois { p, m, lambda } => {
                prime(*p)?;
                positive(*m, "m")?;
                positive(*lambda, "lambda")
            }
            BuildRecipe::OddFamily { p, lambda, partition } => {
                prime(*p)?;
                if *p == 2 {
                    return Err(BuildError::PIsTwo);
                }
                positive(*lambda, "lambda")?;
                PGroupPartition::new(*p, partition.clone()).map(|_| ())
            }
            BuildRecipe::TwoFamily { lambda, a0, partition } => {
                positive(*lambda, "lambda")?;
                let part = PGroupPartition::new(2, partition.clone())?;
                if *a0 == 0 {
                    return Err(BuildError::A0TooSmall { a0: 0, min: 1 });
                }
                if a0 + 1 < part.exponent_log() {
                    return Err(BuildError::ExponentTooLarge { a0: *a0, a: part.exponent_log() });
                }
                Ok(())
            }
            BuildRecipe::ExampleP { p } => {
                prime(*p)?;
                if *p == 2 {
                    Err(BuildError::PIsTwo)
                } else {
                    Ok(())
                }
            }
            BuildRecipe::Example2 { a0 } => {
                if *a0 < 3 {
                    Err(BuildError::A0TooSmall { a0: *a0, min: 3 })
                } else {
                    Ok(())
                }
            }
            BuildRecipe::Zn { n } => {
                if *n == 0 {
                    Err(BuildError::InvalidParameter("n must be at least 1".into()))
                } else {
                    Ok(())
                }
            }
            BuildRecipe::Truncated { p, e } => {
                prime(*p)?;
                positive(*e, "e")
            }
            BuildRecipe::Product { factors } => {
                if factors.is_empty() {
                    return Err(BuildError::InvalidParameter("empty product".into()));
                }
                factors.iter().try_for_each(BuildRecipe::validate)
            }
        }
    }
}

impl fmt::Display for BuildRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        match self {
            BuildRecipe::Galois { p, m: 1, lambda } => match p.checked_pow(*lambda) {
                Some(q) => write!(f, "F{q}"),
                None => write!(f, "F{p}^{lambda}"),
            },
            BuildRecipe::Galois { p, m, lambda: 1 } => write!(f, "Z/{p}^{m}"),
            BuildRecipe::Galois { p, m, lambda } => write!(f, "GR({p}^{m},{lambda})"),
            BuildRecipe::OddFamily { p, lambda, partition } => {
                write!(f, "odd(p={p},lambda={lambda},P=[{}])", list(partition))
            }
            BuildRecipe::TwoFamily { lambda, a0, partition } => {
                write!(f, "two(lambda={lambda},a0={a0},P=[{}])", list(partition))
            }
            BuildRecipe::ExampleP { p } => write!(f, "example-p(p={p})"),
            BuildRecipe::Example2 { a0 } => write!(f, "example-2(a0={a0})"),
            BuildRecipe::Zn { n } => write!(f, "Z/{n}"),
            BuildRecipe::Truncated { p, e } => write!(f, "F{p}[x]/(x^{e})"),
            BuildRecipe::Product { factors } => {
                let parts: Vec<String> = factors.iter().map(ToString::to_string).collect();
                f.write_str(&parts.join(" x "))
            }
        }
    }
}

impl Builder {
    /// Builds the ring described by `recipe`; products are folded left to right.
    pub fn build(&self, recipe: &BuildRecipe) -> Result<FiniteRing, BuildError> {
        recipe.validate()?;
        let order = recipe.ring_order().unwrap_or(u128::MAX);
        if order > self.max_order as u128 {
            return Err(match recipe {
                BuildRecipe::ExampleP { p } => BuildError::PTooLargeForDeskScale { p: *p, order, cap: self.max_order },
                _ => BuildError::TooLarge { order, cap: self.max_order },
            });
        }
        match recipe {
            BuildRecipe::Galois { p, m, lambda } => self.galois_ring(*p, *m, *lambda),
            BuildRecipe::OddFamily { p, lambda, partition } => {
                self.odd_family(*p, *lambda, &PGroupPartition::new(*p, partition.clone())?)
            }
            BuildRecipe::TwoFamily { lambda, a0, partition } => {
                self.two_family(*lambda, *a0, &PGroupPartition::new(2, partition.clone())?)
            }
            BuildRecipe::ExampleP { p } => self.example_p(*p),
            BuildRecipe::Example2 { a0 } => self.example_2(*a0),
            BuildRecipe::Zn { n } => self.zn(*n),
            BuildRecipe::Truncated { p, e } => self.truncated(*p, *e),
            BuildRecipe::Product { factors } => {
                let mut ring = self.build(&factors[0])?;
                for factor in &factors[1..] {
                    ring = direct_product(&ring, &self.build(factor)?)?;
                }
                Ok(ring)
            }
        }
    }
}

/// `1 + 2R` for `R = GR(2^{a0+1}, lambda)`: elementary abelian of rank `lambda` when
/// `a0 = 1`, otherwise `C_2 x C_{2^{a0-1}} x C_{2^a0}^{lambda-1}`.
fn two_adic_part(lambda: u32, a0: u32) -> AbelianGroupType {
    if a0 == 1 {
        AbelianGroupType::homocyclic(2, 1, lambda as usize)
    } else {
        AbelianGroupType::from_primary([(2, vec![1, a0 - 1]), (2, vec![a0; lambda as usize - 1])])
    }
}

/// The unit group the family's structure theorem predicts for `recipe`.
pub fn predicted_unit_group(recipe: &BuildRecipe) -> Result<AbelianGroupType, BuildError> {
    recipe.validate()?;
    let field = |p: u64, lambda: u32| {
        p.checked_pow(lambda)
            .map(|q| AbelianGroupType::cyclic(q - 1))
            .ok_or_else(|| BuildError::InvalidParameter(format!("{p}^{lambda} overflows")))
    };
    Ok(match recipe {
        BuildRecipe::Galois { p: 2, m, lambda } if *m >= 2 => field(2, *lambda)?.product(&two_adic_part(*lambda, m - 1)),
        BuildRecipe::Galois { p, m, lambda } => {
            field(*p, *lambda)?.product(&AbelianGroupType::homocyclic(*p, m - 1, *lambda as usize))
        }
        BuildRecipe::OddFamily { p, lambda, partition } => {
            field(*p, *lambda)?.product(&PGroupPartition::new(*p, partition.clone())?.power(*lambda))
        }
        BuildRecipe::TwoFamily { lambda, a0, partition } => field(2, *lambda)?
            .product(&two_adic_part(*lambda, *a0))
            .product(&PGroupPartition::new(2, partition.clone())?.power(*lambda)),
        BuildRecipe::ExampleP { p } => field(*p, 2)?
            .product(&AbelianGroupType::homocyclic(*p, 2, 1))
            .product(&AbelianGroupType::homocyclic(*p, 1, 2 * *p as usize - 2)),
        BuildRecipe::Example2 { a0 } => AbelianGroupType::cyclic(3)
            .product(&AbelianGroupType::from_primary([(2, vec![1, 1, 1, 2, a0 - 1, *a0])])),
        BuildRecipe::Zn { n } => {
            let mut g = AbelianGroupType::trivial();
            for (p, e) in arith::factorize(*n) {
                let local = match (p, e) {
                    (2, 1) => AbelianGroupType::trivial(),
                    (2, 2) => AbelianGroupType::cyclic(2),
                    (2, _) => AbelianGroupType::from_primary([(2, vec![1, e - 2])]),
                    _ => AbelianGroupType::cyclic(p - 1).product(&AbelianGroupType::homocyclic(p, e - 1, 1)),
                };
                g = g.product(&local);
            }
            g
        }
        BuildRecipe::Truncated { p, e } => {
            // 1 + x F_p[x]/(x^e): one cyclic factor per j < e prime to p, of order p^t with
            // t the least exponent such that j p^t >= e
            let mut exps = Vec::new();
            for j in (1..*e as u64).filter(|j| j % p != 0) {
                let mut t = 0;
                let mut v = j;
                while v < *e as u64 {
                    v *= p;
                    t += 1;
                }
                exps.push(t);
            }
            AbelianGroupType::cyclic(p - 1).product(&AbelianGroupType::from_primary([(*p, exps)]))
        }
        BuildRecipe::Product { factors } => {
            let mut g = AbelianGroupType::trivial();
            for f in factors {
                g = g.product(&predicted_unit_group(f)?);
            }
            g
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> AbelianGroupType {
        s.parse().unwrap()
    }

    #[test]
    fn predictions() {
        let p = |r: BuildRecipe| predicted_unit_group(&r).unwrap();
        assert_eq!(p(BuildRecipe::Galois { p: 2, m: 3, lambda: 1 }), t("C2 x C2"));
        assert_eq!(p(BuildRecipe::Galois { p: 3, m: 2, lambda: 2 }), t("C8 x C3^2"));
        assert_eq!(p(BuildRecipe::OddFamily { p: 3, lambda: 1, partition: vec![2, 1] }), t("C2 x C9 x C3"));
        assert_eq!(p(BuildRecipe::OddFamily { p: 3, lambda: 2, partition: vec![1, 1] }), t("C8 x C3^4"));
        assert_eq!(p(BuildRecipe::TwoFamily { lambda: 2, a0: 1, partition: vec![] }), t("C3 x C2 x C2"));
        assert_eq!(p(BuildRecipe::TwoFamily { lambda: 1, a0: 2, partition: vec![1] }), t("C2^3"));
        assert_eq!(p(BuildRecipe::TwoFamily { lambda: 2, a0: 3, partition: vec![] }), t("F4* x C2 x C4 x C8"));
        assert_eq!(p(BuildRecipe::ExampleP { p: 3 }), t("C8 x C9 x C3^4"));
        assert_eq!(p(BuildRecipe::Example2 { a0: 3 }), t("C3 x C2^3 x C4 x C4 x C8"));
        assert_eq!(p(BuildRecipe::Zn { n: 12 }), t("C2 x C2"));
        assert_eq!(p(BuildRecipe::Zn { n: 125 }), t("C4 x C25"));
        assert_eq!(p(BuildRecipe::Truncated { p: 2, e: 3 }), t("C4"));
        assert_eq!(p(BuildRecipe::Truncated { p: 3, e: 4 }), t("C2 x C9 x C3"));
        assert_eq!(
            p(BuildRecipe::product([BuildRecipe::field(2, 2), BuildRecipe::Zn { n: 9 }])),
            t("C3 x C6")
        );
    }

    #[test]
    fn recipe_orders_match_built_rings() {
        let b = Builder::default();
        for r in [
            BuildRecipe::Galois { p: 3, m: 2, lambda: 2 },
            BuildRecipe::OddFamily { p: 3, lambda: 2, partition: vec![1, 1] },
            BuildRecipe::TwoFamily { lambda: 2, a0: 1, partition: vec![2, 1] },
            BuildRecipe::Example2 { a0: 3 },
            BuildRecipe::Truncated { p: 3, e: 4 },
            BuildRecipe::product([BuildRecipe::Zn { n: 4 }, BuildRecipe::field(2, 2)]),
        ] {
            assert_eq!(b.build(&r).unwrap().order() as u128, r.ring_order().unwrap(), "{r}");
        }
    }

    #[test]
    fn product_recipe_unit_count() {
        let r = BuildRecipe::product([BuildRecipe::field(2, 2), BuildRecipe::Zn { n: 9 }]);
        let ring = Builder::default().build(&r).unwrap();
        assert_eq!(ring.unit_count(), 18);
    }

    #[test]
    fn notation_and_json() {
        assert_eq!(BuildRecipe::field(3, 2).to_string(), "F9");
        assert_eq!(BuildRecipe::Galois { p: 2, m: 3, lambda: 1 }.to_string(), "Z/2^3");
        assert_eq!(
            BuildRecipe::product([BuildRecipe::Zn { n: 4 }, BuildRecipe::Truncated { p: 2, e: 3 }]).to_string(),
            "Z/4 x F2[x]/(x^3)"
        );
        let r = BuildRecipe::TwoFamily { lambda: 1, a0: 2, partition: vec![1] };
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, r#"{"family":"two","lambda":1,"a0":2,"partition":[1]}"#);
        assert_eq!(serde_json::from_str::<BuildRecipe>(&json).unwrap(), r);
    }

    #[test]
    fn validation() {
        assert_eq!(BuildRecipe::OddFamily { p: 2, lambda: 1, partition: vec![] }.validate(), Err(BuildError::PIsTwo));
        assert_eq!(
            BuildRecipe::TwoFamily { lambda: 1, a0: 1, partition: vec![3] }.validate(),
            Err(BuildError::ExponentTooLarge { a0: 1, a: 3 })
        );
        assert!(BuildRecipe::Product { factors: vec![] }.validate().is_err());
    }
}
