use super::{FiniteRing, RingError};
use crate::arith;

/// `r1 x r2`, re-based so that the identity `(1, 1)` is basis element 0.
///
/// Inside `Z/a + Z/b` (the spans of the two identities) the element `(1, 1)` has order
/// `lcm(a, b)`; it is completed by `g = (u, v)` of order `gcd(a, b)`, where prime by
/// prime `g` lives in whichever side has the smaller valuation. All other basis
/// elements of both factors are kept as they are.
pub fn direct_product(r1: &FiniteRing, r2: &FiniteRing) -> Result<FiniteRing, RingError> {
    let (a, b) = (r1.characteristic(), r2.characteristic());
    let (d1, d2) = (r1.dim(), r2.dim());
    let l = arith::lcm(a, b);
    let g_order = arith::gcd(a, b);

    // u in Z/a: 1 on primes where a has the smaller valuation, 0 elsewhere; v symmetric
    let mut u = 0u64;
    let mut v = 0u64;
    for (q, alpha) in arith::factorize(a) {
        let beta = arith::valuation(b, q);
        if alpha < beta {
            u = (u + crt_idempotent(a, q.pow(alpha))) % a;
        }
    }
    for (q, beta) in arith::factorize(b) {
        let alpha = arith::valuation(a, q);
        if alpha >= beta {
            v = (v + crt_idempotent(b, q.pow(beta))) % b;
        }
    }

    // naive coordinates: r1 block then r2 block
    let naive_len = d1 + d2;
    let mut new_basis: Vec<Vec<u64>> = Vec::new();
    let mut orders = Vec::new();
    let mut labels = Vec::new();
    let label = |r: &FiniteRing, i: usize| {
        r.labels().map(|l| l[i].clone()).unwrap_or_else(|| format!("e{i}"))
    };

    let mut f0 = vec![0; naive_len];
    f0[0] = 1 % a;
    f0[d1] = 1 % b;
    new_basis.push(f0);
    orders.push(l);
    labels.push("1".to_string());
    let with_g = g_order > 1;
    if with_g {
        let mut g = vec![0; naive_len];
        g[0] = u;
        g[d1] = v;
        new_basis.push(g);
        orders.push(g_order);
        labels.push(format!("({u},{v})"));
    }
    for i in 1..d1 {
        let mut e = vec![0; naive_len];
        e[i] = 1;
        new_basis.push(e);
        orders.push(r1.basis_orders()[i]);
        labels.push(format!("({},0)", label(r1, i)));
    }
    for j in 1..d2 {
        let mut e = vec![0; naive_len];
        e[d1 + j] = 1;
        new_basis.push(e);
        orders.push(r2.basis_orders()[j]);
        labels.push(format!("(0,{})", label(r2, j)));
    }

    // coordinates of (1,0) and (0,1) on the pair (f0, g)
    let solve = |target: (u64, u64)| -> (u64, u64) {
        for y in 0..g_order {
            for x in 0..l {
                let s = (x + y * u) % a;
                let t = (x + y * v) % b;
                if (s, t) == target {
                    return (x, y);
                }
            }
        }
        unreachable!("(f0, g) spans Z/a + Z/b")
    };
    let left = solve((1 % a, 0));
    let right = solve((0, 1 % b));

    let offset = if with_g { 2 } else { 1 };
    let convert = |w: &[u64]| -> Vec<u64> {
        let mut out = vec![0; orders.len()];
        let (s, t) = (w[0], w[d1]);
        out[0] = ((s as u128 * left.0 as u128 + t as u128 * right.0 as u128) % l as u128) as u64;
        if with_g {
            out[1] = ((s as u128 * left.1 as u128 + t as u128 * right.1 as u128) % g_order as u128)
                as u64;
        }
        out[offset..offset + d1 - 1].copy_from_slice(&w[1..d1]);
        out[offset + d1 - 1..].copy_from_slice(&w[d1 + 1..]);
        out
    };

    let mut p1 = vec![0; d1];
    let mut p2 = vec![0; d2];
    let constants = new_basis
        .iter()
        .map(|x| {
            new_basis
                .iter()
                .map(|y| {
                    r1.mul_into(&x[..d1], &y[..d1], &mut p1);
                    r2.mul_into(&x[d1..], &y[d1..], &mut p2);
                    let naive: Vec<u64> = p1.iter().chain(p2.iter()).copied().collect();
                    convert(&naive)
                })
                .collect()
        })
        .collect();
    Ok(FiniteRing::new(orders, constants)?.with_labels(labels))
}

/// The integer in `[0, n)` that is 1 mod `q_part` and 0 mod `n / q_part`.
fn crt_idempotent(n: u64, q_part: u64) -> u64 {
    let cofactor = n / q_part;
    let inv = arith::mod_inverse(cofactor % q_part, q_part).expect("coprime parts");
    ((cofactor as u128 * inv as u128) % n as u128) as u64
}
