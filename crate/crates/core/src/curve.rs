//! Local data of a short Weierstrass model y^2 = x^3 + Ax + B over F_p.
//!
//! Supported primes are p >= 5, where the model is minimal at p whenever
//! it is not divisible by (p^4, p^6) and the reduction types are read off
//! the reduced coefficients directly: good reduction when the discriminant
//! -16(4A^3 + 27B^2) is nonzero mod p, additive reduction when A = B = 0
//! mod p (a cusp), multiplicative reduction otherwise (a node at
//! x0 = -3B/(2A), split exactly when 3 x0 is a square mod p).

use crate::error::Error;
use crate::ff::{inv_mod, legendre, mul_mod};
use crate::groups::Torsion;
use crate::Result;

/// Reduction type of a model at p, with the multiplicative case split by
/// the rationality of the node's tangents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reduction {
    Good,
    SplitMultiplicative,
    NonsplitMultiplicative,
    Additive,
}

impl Reduction {
    /// One-letter code used in cache files: g / s / n / a.
    pub fn code(self) -> char {
        match self {
            Reduction::Good => 'g',
            Reduction::SplitMultiplicative => 's',
            Reduction::NonsplitMultiplicative => 'n',
            Reduction::Additive => 'a',
        }
    }

    /// Inverse of [`Reduction::code`].
    pub fn from_code(c: char) -> Result<Self> {
        Ok(match c {
            'g' => Reduction::Good,
            's' => Reduction::SplitMultiplicative,
            'n' => Reduction::NonsplitMultiplicative,
            'a' => Reduction::Additive,
            _ => return Err(Error::Parse(format!("unknown reduction code {c:?}"))),
        })
    }
}

fn check_prime(p: u64) -> Result<()> {
    if p < 5 {
        return Err(Error::UnsupportedPrime(p));
    }
    Ok(())
}

/// Number of points of y^2 = x^3 + Ax + B over F_p including the point at
/// infinity: p + 1 + sum_x chi(x^3 + Ax + B).
///
/// count_points(2, 1, 5) = 7 and count_points(0, 1, 5) = 6.
pub fn count_points(a: i64, b: i64, p: u64) -> Result<u64> {
    check_prime(p)?;
    let mut sum: i64 = 0;
    let (ar, br) = (a.rem_euclid(p as i64) as u64, b.rem_euclid(p as i64) as u64);
    for x in 0..p {
        let fx = (mul_mod(mul_mod(x, x, p), x, p) + mul_mod(ar, x, p) + br) % p;
        sum += legendre(fx as i64, p) as i64;
    }
    Ok((p as i64 + 1 + sum) as u64)
}

/// Trace of Frobenius a_p = p + 1 - #E(F_p). For a singular model this is
/// the degenerate trace: +1 / -1 for a split / non-split node, 0 for a
/// cusp.
pub fn trace(a: i64, b: i64, p: u64) -> Result<i64> {
    Ok(p as i64 + 1 - count_points(a, b, p)? as i64)
}

/// Reduction type of the reduced model at p >= 5.
pub fn reduction_type(a: i64, b: i64, p: u64) -> Result<Reduction> {
    check_prime(p)?;
    let ar = a.rem_euclid(p as i64) as u64;
    let br = b.rem_euclid(p as i64) as u64;
    let disc = (4 * mul_mod(mul_mod(ar, ar, p), ar, p) + 27 * mul_mod(br, br, p)) % p;
    if disc != 0 {
        return Ok(Reduction::Good);
    }
    if ar == 0 && br == 0 {
        return Ok(Reduction::Additive);
    }
    if ar == 0 || br == 0 {
        // 4A^3 + 27B^2 = 0 with one coordinate zero forces both zero.
        unreachable!("discriminant zero with exactly one zero coefficient");
    }
    // Node at x0 = -3B/(2A); the tangent slopes generate F_p(sqrt(3 x0)).
    let x0 = mul_mod(
        (p - 3 % p) % p,
        mul_mod(br, inv_mod(mul_mod(2, ar, p), p), p),
        p,
    );
    if legendre(mul_mod(3, x0, p) as i64, p) == 1 {
        Ok(Reduction::SplitMultiplicative)
    } else {
        Ok(Reduction::NonsplitMultiplicative)
    }
}

/// Automorphism weight 1/|Aut| of the reduced model as (1, |Aut|): (1, 2)
/// generically, (1, 4) for A != 0 = B with p = 1 mod 4, (1, 6) for
/// A = 0 != B with p = 1 mod 3.
pub fn aut_weight(a: i64, b: i64, p: u64) -> Result<(u64, u64)> {
    check_prime(p)?;
    let ar = a.rem_euclid(p as i64) as u64;
    let br = b.rem_euclid(p as i64) as u64;
    if br == 0 && ar != 0 && p % 4 == 1 {
        Ok((1, 4))
    } else if ar == 0 && br != 0 && p % 3 == 1 {
        Ok((1, 6))
    } else {
        Ok((1, 2))
    }
}

/// Affine point arithmetic for the group-structure computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pt {
    Inf,
    At(u64, u64),
}

fn add_pts(p1: Pt, p2: Pt, a: u64, p: u64) -> Pt {
    match (p1, p2) {
        (Pt::Inf, q) => q,
        (q, Pt::Inf) => q,
        (Pt::At(x1, y1), Pt::At(x2, y2)) => {
            if x1 == x2 && (y1 + y2) % p == 0 {
                return Pt::Inf;
            }
            let lambda = if x1 == x2 {
                // Tangent slope (3 x^2 + a) / (2 y).
                mul_mod(
                    (3 * mul_mod(x1, x1, p) + a) % p,
                    inv_mod(2 * y1 % p, p),
                    p,
                )
            } else {
                mul_mod(
                    (y2 + p - y1) % p,
                    inv_mod((x2 + p - x1) % p, p),
                    p,
                )
            };
            let x3 = (mul_mod(lambda, lambda, p) + 2 * p - x1 - x2) % p;
            let y3 = (mul_mod(lambda, (x1 + p - x3) % p, p) + p - y1) % p;
            Pt::At(x3, y3)
        }
    }
}

fn scalar_mul(mut k: u64, pt: Pt, a: u64, p: u64) -> Pt {
    let mut acc = Pt::Inf;
    let mut base = pt;
    while k > 0 {
        if k & 1 == 1 {
            acc = add_pts(acc, base, a, p);
        }
        base = add_pts(base, base, a, p);
        k >>= 1;
    }
    acc
}

/// Invariant factors (n1, n2) of E(F_p) = Z/n1 x Z/n2, n2 | n1 and
/// n2 | p - 1. Requires good reduction.
///
/// group_structure(1, 0, 5) = (2, 2) and group_structure(2, 1, 5) = (7, 1).
pub fn group_structure(a: i64, b: i64, p: u64) -> Result<(u64, u64)> {
    check_prime(p)?;
    if reduction_type(a, b, p)? != Reduction::Good {
        return Err(Error::MissingData(format!(
            "group structure needs good reduction at {p}"
        )));
    }
    let ar = a.rem_euclid(p as i64) as u64;
    let br = b.rem_euclid(p as i64) as u64;
    let n = count_points(a, b, p)?;
    // Collect the points once.
    let mut points = vec![Pt::Inf];
    for x in 0..p {
        let fx = (mul_mod(mul_mod(x, x, p), x, p) + mul_mod(ar, x, p) + br) % p;
        match crate::ff::sqrt_mod(fx as i64, p) {
            Some(0) => {
                if fx == 0 {
                    points.push(Pt::At(x, 0));
                }
            }
            Some(y) => {
                points.push(Pt::At(x, y));
                points.push(Pt::At(x, p - y));
            }
            None => {}
        }
    }
    debug_assert_eq!(points.len() as u64, n);
    // n2 = prod over primes l of l^max{k : #E[l^k] = l^2k}; only primes
    // with l^2 | n and l | p - 1 can contribute.
    let mut n2 = 1u64;
    let mut l = 2u64;
    let mut m = n;
    while l * l <= n {
        if m % l == 0 {
            while m % l == 0 {
                m /= l;
            }
            if n % (l * l) == 0 && (p - 1) % l == 0 {
                let mut k = 0u32;
                loop {
                    let lk = l.pow(k + 1);
                    if n % (lk * lk) != 0 || (p - 1) % lk != 0 {
                        break;
                    }
                    let killed = points
                        .iter()
                        .filter(|&&q| scalar_mul(lk, q, ar, p) == Pt::Inf)
                        .count() as u64;
                    if killed == lk * lk {
                        k += 1;
                    } else {
                        break;
                    }
                }
                n2 *= l.pow(k);
            }
        }
        l += 1;
    }
    Ok((n / n2, n2))
}

/// Whether the abelian group with invariant factors (g1, g2) embeds into
/// the one with invariant factors (n1, n2): g1 | n1 and g2 | n2.
pub fn torsion_embeds(g: Torsion, structure: (u64, u64)) -> bool {
    let (g1, g2) = g.invariant_factors();
    let (n1, n2) = structure;
    n1 % g1 == 0 && n2 % g2 == 0
}

/// Number of elements killed by d in Z/n1 x Z/n2.
fn killed_by(d: u64, n1: u64, n2: u64) -> u64 {
    num_integer::gcd(d, n1) * num_integer::gcd(d, n2)
}

fn moebius(mut n: u64) -> i64 {
    let mut mu = 1i64;
    let mut l = 2;
    while l * l <= n {
        if n % l == 0 {
            n /= l;
            if n % l == 0 {
                return 0;
            }
            mu = -mu;
        }
        l += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Number of elements of exact order d in Z/n1 x Z/n2, by Mobius inversion
/// over the divisors of d.
fn exact_order_count(d: u64, n1: u64, n2: u64) -> i64 {
    let mut total = 0i64;
    for e in 1..=d {
        if d % e == 0 {
            total += moebius(d / e) * killed_by(e, n1, n2) as i64;
        }
    }
    total
}

/// Number of injective homomorphisms from G into Z/n1 x Z/n2: the number
/// of exact-order-n elements for cyclic G of order n, and
/// (#exact order 2m) * (#E[2] - 2) for G = Z/2 x Z/2m (an order-2 point
/// outside the cyclic part generated by the order-2m point).
pub fn embedding_count(g: Torsion, structure: (u64, u64)) -> u64 {
    let (n1, n2) = structure;
    let (g1, g2) = g.invariant_factors();
    let count = if g2 == 1 {
        exact_order_count(g1, n1, n2)
    } else {
        exact_order_count(g1, n1, n2) * (killed_by(2, n1, n2) as i64 - 2)
    };
    count.max(0) as u64
}

/// Trace table for all p^2 reduced models at p, indexed by A * p + B.
/// Filled orbit by orbit: the quadratic twist by u maps (A, B) to
/// (u^2 A, u^3 B) and multiplies the trace by chi(u), so one character sum
/// per orbit suffices and the total cost is O(p^2).
pub fn trace_table(p: u64) -> Result<Vec<i64>> {
    check_prime(p)?;
    let n = (p * p) as usize;
    let mut chi = vec![-1i8; p as usize];
    chi[0] = 0;
    for x in 1..p {
        chi[mul_mod(x, x, p) as usize] = 1;
    }
    let raw_trace = |a: u64, b: u64| -> i64 {
        let mut sum = 0i64;
        for x in 0..p {
            let fx = (mul_mod(mul_mod(x, x, p), x, p) + mul_mod(a, x, p) + b) % p;
            sum += chi[fx as usize] as i64;
        }
        -sum
    };
    let mut table = vec![i64::MAX; n];
    // Orbits through A != 0, B != 0.
    for a in 1..p {
        for b in 1..p {
            if table[(a * p + b) as usize] != i64::MAX {
                continue;
            }
            let t = raw_trace(a, b);
            for u in 1..p {
                let ua = mul_mod(mul_mod(u, u, p), a, p);
                let ub = mul_mod(mul_mod(mul_mod(u, u, p), u, p), b, p);
                table[(ua * p + ub) as usize] = chi[u as usize] as i64 * t;
            }
        }
    }
    // A = 0 and B = 0 lines directly.
    for b in 0..p {
        table[b as usize] = raw_trace(0, b);
    }
    for a in 1..p {
        table[(a * p) as usize] = raw_trace(a, 0);
    }
    Ok(table)
}
