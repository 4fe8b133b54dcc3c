//! Polynomials over `Z/p`, coefficient lists from the constant term up.

/// Remainder of `a` modulo the monic polynomial `b`, coefficients mod `p`.
pub(crate) fn rem_monic(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let mut r: Vec<u64> = a.iter().map(|c| c % p).collect();
    while r.len() > db {
        let lead = r.pop().expect("nonempty");
        if lead == 0 {
            continue;
        }
        let shift = r.len() - db;
        for (i, &bi) in b[..db].iter().enumerate() {
            r[shift + i] = (r[shift + i] + (p - lead) * bi) % p;
        }
    }
    r
}

/// Monic polynomials of degree `deg` over `Z/p`, ordered by `sum c_i p^i`.
pub(crate) fn monic_polys(p: u64, deg: u32) -> impl Iterator<Item = Vec<u64>> {
    let count = p.checked_pow(deg).expect("desk-scale polynomial enumeration");
    (0..count).map(move |mut v| {
        let mut f = Vec::with_capacity(deg as usize + 1);
        for _ in 0..deg {
            f.push(v % p);
            v /= p;
        }
        f.push(1);
        f
    })
}

/// Irreducibility over `Z/p` by trial division by every monic polynomial of degree
/// at most half the degree of `f`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() as u32 - 1;
    if deg == 0 {
        return false;
    }
    (1..=deg / 2).all(|d| monic_polys(p, d).all(|g| rem_monic(f, &g, p).iter().any(|&c| c != 0)))
}

/// The first monic irreducible polynomial of degree `lambda` over `Z/p` in the order of
/// [`irreducibles`]; for degree 1 this is `t`.
pub fn find_irreducible(p: u64, lambda: u32) -> Vec<u64> {
    monic_polys(p, lambda).find(|f| is_irreducible(f, p)).expect("irreducible polynomials exist in every degree")
}

/// All monic irreducible polynomials of degree `lambda` over `Z/p`, ordered by the
/// coefficient value `sum c_i p^i` (higher coefficients more significant).
pub fn irreducibles(p: u64, lambda: u32) -> Vec<Vec<u64>> {
    monic_polys(p, lambda).filter(|f| is_irreducible(f, p)).collect()
}

/// Renders a polynomial in `t`, highest degree first.
pub fn format_poly(f: &[u64]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in f.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let power = match i {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        };
        terms.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => power,
            _ => format!("{c}*{power}"),
        });
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}
