//! Mod-p weight tables for the torsion parametrizations, torsion-weighted
//! class numbers, and the Chebyshev change of basis for trace powers.
//!
//! The weight of a pair J = (A, B) in (F_p)^2 is the number of parameter
//! pairs (a, b) in (F_p)^2 mapping to J under (f_G, g_G). Summed over all
//! J the weights give p^2; summed over the singular locus they follow
//! closed-form rows linear in p whose coefficients depend only on
//! congruence classes of p and, for Z/7 and Z/9, on whether a fixed
//! constant gamma is a cube in F_p[sqrt(-3)].

use std::collections::BTreeMap;

use num_rational::Rational64;

use crate::curve::{reduction_type, trace_table, Reduction};
use crate::error::Error;
use crate::ff::{gamma7, gamma9, is_cube_fp, is_cube_ring, legendre, mul_mod};
use crate::groups::Torsion;
use crate::models::fg_mod;
use crate::Result;

/// Preimage counts of all p^2 pairs J under (f_G, g_G) mod p, indexed by
/// A * p + B. The counts always sum to p^2.
pub fn weight_table(g: Torsion, p: u64) -> Result<Vec<u64>> {
    if !g.admissible_prime(p) {
        return Err(Error::InadmissiblePrime {
            group: g.label(),
            p,
        });
    }
    let mut table = vec![0u64; (p * p) as usize];
    for a in 0..p {
        for b in 0..p {
            let (fa, gb) = fg_mod(g, a, b, p);
            table[(fa * p + gb) as usize] += 1;
        }
    }
    Ok(table)
}

/// Whether J = (A, B) is a singular pair mod p: 4A^3 + 27B^2 = 0.
pub fn is_singular_pair(a: u64, b: u64, p: u64) -> bool {
    (4 * mul_mod(mul_mod(a, a, p), a, p) + 27 * mul_mod(b, b, p)) % p == 0
}

/// Total weight carried by the singular locus, including J = (0, 0).
pub fn singular_weight_sum(g: Torsion, p: u64) -> Result<u64> {
    let table = weight_table(g, p)?;
    let mut sum = 0;
    for a in 0..p {
        for b in 0..p {
            if is_singular_pair(a, b, p) {
                sum += table[(a * p + b) as usize];
            }
        }
    }
    Ok(sum)
}

/// Closed form for [`singular_weight_sum`]: a row linear in p selected by
/// a congruence class of p and, for Z/7 and Z/9, a cube condition on a
/// constant gamma in F_p[sqrt(-3)].
pub fn predicted_singular_sum(g: Torsion, p: u64) -> Result<u64> {
    if !g.admissible_prime(p) {
        return Err(Error::InadmissiblePrime {
            group: g.label(),
            p,
        });
    }
    use Torsion::*;
    let row = match g {
        Trivial => {
            return Err(Error::UnsupportedGroup {
                group: g.label(),
                operation: "singular weight row",
            })
        }
        Z2 | Z3 => 2 * p - 1,
        Z4 | Z2x2 => 3 * p - 2,
        Z5 => match p % 5 {
            1 | 4 => 4 * p - 3,
            _ => 2 * p - 1,
        },
        Z6 => 4 * p - 3,
        Z7 => {
            if is_cube_ring(gamma7(p), p) {
                6 * p - 5
            } else {
                3 * p - 2
            }
        }
        Z8 => match p % 8 {
            1 | 7 => 6 * p - 5,
            _ => 4 * p - 3,
        },
        Z9 => {
            if p % 3 == 1 {
                // sqrt(-3) lies in F_p, so gamma_9 = -36 + 12 sqrt(-3)
                // is a unit of F_p itself (either square root works:
                // the two values are conjugate with cube norm).
                let s = crate::ff::sqrt_mod(-3, p).expect("-3 is a square for p = 1 mod 3");
                let gamma = (p - 36 % p + mul_mod(12, s, p)) % p;
                if is_cube_fp(gamma as i64, p) {
                    8 * p - 7
                } else {
                    5 * p - 4
                }
            } else if is_cube_ring(gamma9(p, true), p) {
                6 * p - 5
            } else {
                3 * p - 2
            }
        }
        Z10 => match p % 5 {
            1 | 4 => 8 * p - 7,
            _ => 4 * p - 3,
        },
        Z12 => match p % 12 {
            1 => 10 * p - 9,
            _ => 6 * p - 5,
        },
        Z2x4 => 4 * p - 3,
        Z2x6 => 6 * p - 5,
        Z2x8 => match p % 8 {
            1 => 10 * p - 9,
            7 => 8 * p - 7,
            5 => 6 * p - 5,
            _ => 4 * p - 3,
        },
    };
    Ok(row)
}

/// Weight mass of the split half of the nodal locus for Z/3: the sum of
/// |W_{3, (-3 a^2, 2 a^3)}| over the nonzero squares a^2 mod p. Equals
/// 2(p-1), p-1, 0 for p = 1, {5, 11}, 7 mod 12.
pub fn split_bias_sum(p: u64) -> Result<u64> {
    let table = weight_table(Torsion::Z3, p)?;
    let mut sum = 0;
    for t in 1..p {
        if legendre(t as i64, p) != 1 {
            continue;
        }
        let t2 = mul_mod(t, t, p);
        let a = mul_mod(p - 3 % p, t2, p);
        let b = mul_mod(2, mul_mod(t2, t, p), p);
        sum += table[(a * p + b) as usize];
    }
    Ok(sum)
}

/// Closed form for [`split_bias_sum`] by p mod 12.
pub fn predicted_split_bias(p: u64) -> u64 {
    match p % 12 {
        1 => 2 * (p - 1),
        5 | 11 => p - 1,
        _ => 0,
    }
}

/// Hurwitz class number H(|D|) for a negative discriminant D = 0, 1 mod 4:
/// the number of positive definite binary quadratic forms of discriminant
/// D, counted with weight 1/3 for multiples of x^2+xy+y^2 and 1/2 for
/// multiples of x^2+y^2. Returns 0 for D = 2, 3 mod 4.
pub fn hurwitz_h(d: i64) -> Rational64 {
    assert!(d < 0, "Hurwitz class numbers need a negative discriminant");
    if d.rem_euclid(4) > 1 {
        return Rational64::new(0, 1);
    }
    let neg = -d;
    let mut total = Rational64::new(0, 1);
    let mut a = 1i64;
    while 3 * a * a <= neg {
        for b in -a..=a {
            if (b * b - d) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - d) / (4 * a);
            if c < a {
                continue;
            }
            // Reduced forms: |b| <= a <= c with b >= 0 when |b| = a or
            // a = c.
            if (b.abs() == a || a == c) && b < 0 {
                continue;
            }
            total += if a == b && b == c {
                Rational64::new(1, 3)
            } else if b == 0 && a == c {
                Rational64::new(1, 2)
            } else {
                Rational64::new(1, 1)
            };
        }
        a += 1;
    }
    total
}

/// Number of mod-p curves with trace a and a rational 2-torsion point,
/// counted per curve: H(a^2 - 4p) when a has the parity of p + 1, else 0.
pub fn two_torsion_class_count(a: i64, p: u64) -> Rational64 {
    if (a - (p as i64 + 1)).rem_euclid(2) != 0 {
        return Rational64::new(0, 1);
    }
    hurwitz_h(a * a - 4 * p as i64)
}

/// Number of mod-p curves with trace a and full 2-torsion:
/// H((a^2 - 4p)/4) when a = p + 1 mod 4, else 0.
pub fn full_two_torsion_class_count(a: i64, p: u64) -> Rational64 {
    if (a - (p as i64 + 1)).rem_euclid(4) != 0 {
        return Rational64::new(0, 1);
    }
    hurwitz_h((a * a - 4 * p as i64) / 4)
}

/// Class-number formula for H_{Z/2}(a, p):
/// ((p-1)/2) (N_2(a) + 2 N_{2x2}(a)).
pub fn h2_formula(a: i64, p: u64) -> Rational64 {
    Rational64::new((p as i64 - 1) / 2, 1)
        * (two_torsion_class_count(a, p)
            + Rational64::new(2, 1) * full_two_torsion_class_count(a, p))
}

/// Class-number formula for H_{2x2}(a, p): 6 ((p-1)/2) N_{2x2}(a).
pub fn h2x2_formula(a: i64, p: u64) -> Rational64 {
    Rational64::new(3 * (p as i64 - 1), 1) * full_two_torsion_class_count(a, p)
}

/// Torsion-weighted class numbers H_G(a, p) for all traces a: the weight
/// mass of the nonsingular pairs with trace a, as a map a -> H_G(a, p).
pub fn class_numbers(g: Torsion, p: u64) -> Result<BTreeMap<i64, u64>> {
    let weights = weight_table(g, p)?;
    let traces = trace_table(p)?;
    let mut h = BTreeMap::new();
    for a in 0..p {
        for b in 0..p {
            let idx = (a * p + b) as usize;
            if weights[idx] == 0 || is_singular_pair(a, b, p) {
                continue;
            }
            *h.entry(traces[idx]).or_insert(0) += weights[idx];
        }
    }
    Ok(h)
}

/// Trace moment sum_a a^r H_G(a, p) from a precomputed class-number map.
pub fn moment_sum(h: &BTreeMap<i64, u64>, r: u32) -> i128 {
    h.iter()
        .map(|(&a, &count)| (a as i128).pow(r) * count as i128)
        .sum()
}

/// Chebyshev-like polynomials in the trace: U_0 = 1, U_1 = t,
/// U_{j+1} = t U_j - q U_{j-1}. U_j(a_p, p) is the trace of the j-th
/// symmetric power of Frobenius.
pub fn chebyshev_u(j: u32, t: i128, q: i128) -> i128 {
    let (mut prev, mut cur) = (1i128, t);
    if j == 0 {
        return 1;
    }
    for _ in 1..j {
        let next = t * cur - q * prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn binomial(n: u32, k: i64) -> i128 {
    if k < 0 || k as u32 > n {
        return 0;
    }
    let k = k as u32;
    let mut result = 1i128;
    for i in 0..k.min(n - k) {
        result = result * (n - i) as i128 / (i + 1) as i128;
    }
    result
}

/// Coefficients C_{R,j} of the expansion t^R = sum_j C_{R,j} q^j
/// U_{R-2j}(t, q), for 0 <= j <= R/2.
pub fn chebyshev_coeff(r: u32, j: u32) -> i128 {
    let a = |half: u32, idx: i64| binomial(2 * half, idx) - binomial(2 * half, idx - 1);
    if r % 2 == 0 {
        a(r / 2, j as i64)
    } else {
        a((r - 1) / 2, j as i64) + a((r - 1) / 2, j as i64 - 1)
    }
}

/// Weight mass of the multiplicative locus split by node type, excluding
/// the cusp J = (0, 0): (split mass, non-split mass).
pub fn multiplicative_weight_split(g: Torsion, p: u64) -> Result<(u64, u64)> {
    let table = weight_table(g, p)?;
    let (mut split, mut nonsplit) = (0, 0);
    for a in 0..p {
        for b in 0..p {
            let idx = (a * p + b) as usize;
            if table[idx] == 0 {
                continue;
            }
            match reduction_type(a as i64, b as i64, p)? {
                Reduction::SplitMultiplicative => split += table[idx],
                Reduction::NonsplitMultiplicative => nonsplit += table[idx],
                _ => {}
            }
        }
    }
    Ok((split, nonsplit))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_tables_sum_to_p_squared() {
        for p in [5u64, 7, 11, 13] {
            for g in crate::groups::NONTRIVIAL {
                if !g.admissible_prime(p) {
                    continue;
                }
                let table = weight_table(g, p).unwrap();
                assert_eq!(table.iter().sum::<u64>(), p * p, "{g} at {p}");
            }
        }
    }

    #[test]
    fn singular_rows_at_small_primes() {
        // Spot checks frozen from direct enumeration.
        assert_eq!(singular_weight_sum(Torsion::Z2, 5).unwrap(), 9);
        assert_eq!(singular_weight_sum(Torsion::Z3, 5).unwrap(), 9);
        for p in [5u64, 7, 11, 13, 17, 19, 23] {
            for g in crate::groups::NONTRIVIAL {
                if !g.admissible_prime(p) {
                    continue;
                }
                assert_eq!(
                    singular_weight_sum(g, p).unwrap(),
                    predicted_singular_sum(g, p).unwrap(),
                    "{g} at {p}"
                );
            }
        }
    }

    #[test]
    fn split_bias_small_primes() {
        for p in [5u64, 7, 11, 13, 17, 19, 23, 37] {
            assert_eq!(
                split_bias_sum(p).unwrap(),
                predicted_split_bias(p),
                "p = {p}"
            );
        }
    }

    #[test]
    fn hurwitz_values() {
        let h = |d: i64| hurwitz_h(d);
        assert_eq!(h(-3), Rational64::new(1, 3));
        assert_eq!(h(-4), Rational64::new(1, 2));
        assert_eq!(h(-7), Rational64::new(1, 1));
        assert_eq!(h(-8), Rational64::new(1, 1));
        assert_eq!(h(-11), Rational64::new(1, 1));
        assert_eq!(h(-12), Rational64::new(4, 3));
        assert_eq!(h(-15), Rational64::new(2, 1));
        assert_eq!(h(-16), Rational64::new(3, 2));
        assert_eq!(h(-19), Rational64::new(1, 1));
        assert_eq!(h(-20), Rational64::new(2, 1));
        assert_eq!(h(-23), Rational64::new(3, 1));
        assert_eq!(h(-5), Rational64::new(0, 1));
    }

    #[test]
    fn class_numbers_for_z2_at_5() {
        let h = class_numbers(Torsion::Z2, 5).unwrap();
        let expected: BTreeMap<i64, u64> =
            [(-4, 1), (-2, 5), (0, 4), (2, 5), (4, 1)].into_iter().collect();
        assert_eq!(h, expected);
        assert_eq!(moment_sum(&h, 0), 16);
        assert_eq!(moment_sum(&h, 2), 72);
    }

    #[test]
    fn class_number_formulas_match_tables() {
        for p in [5u64, 7, 13, 17] {
            let h2 = class_numbers(Torsion::Z2, p).unwrap();
            let h22 = class_numbers(Torsion::Z2x2, p).unwrap();
            let bound = 2.0 * (p as f64).sqrt();
            for a in -(bound as i64)..=(bound as i64) {
                let from_table = Rational64::new(h2.get(&a).copied().unwrap_or(0) as i64, 1);
                assert_eq!(from_table, h2_formula(a, p), "Z/2, a = {a}, p = {p}");
                let from_table = Rational64::new(h22.get(&a).copied().unwrap_or(0) as i64, 1);
                assert_eq!(from_table, h2x2_formula(a, p), "2x2, a = {a}, p = {p}");
            }
        }
    }

    #[test]
    fn odd_moments_vanish_for_two_torsion_groups() {
        for p in [5u64, 7, 13] {
            for g in [Torsion::Z2, Torsion::Z2x2] {
                let h = class_numbers(g, p).unwrap();
                for r in [1, 3, 5, 7] {
                    assert_eq!(moment_sum(&h, r), 0, "{g}, r = {r}, p = {p}");
                }
            }
        }
    }

    #[test]
    fn chebyshev_basics() {
        assert_eq!(chebyshev_u(2, 5, 7), 18);
        assert_eq!(chebyshev_coeff(2, 0), 1);
        assert_eq!(chebyshev_coeff(2, 1), 1);
        assert_eq!(chebyshev_coeff(3, 0), 1);
        assert_eq!(chebyshev_coeff(3, 1), 2);
    }

    #[test]
    fn chebyshev_identity_small() {
        for r in 0..=8u32 {
            for (t, q) in [(2i128, 3i128), (-5, 7), (10, -4), (1, 1), (0, 9)] {
                let mut rhs = 0i128;
                for j in 0..=(r / 2) {
                    rhs += chebyshev_coeff(r, j) * q.pow(j) * chebyshev_u(r - 2 * j, t, q);
                }
                assert_eq!(t.pow(r), rhs, "R = {r}, t = {t}, q = {q}");
            }
        }
    }

    #[test]
    fn multiplicative_split_masses_for_z3() {
        // Total multiplicative mass is the singular row minus 1 (the
        // cusp), and the split part follows the bias sum by p mod 12 for
        // p = 1 or 11 mod 12 where split nodes sit over square parameters.
        for p in [13u64, 11, 37] {
            let (split, nonsplit) = multiplicative_weight_split(Torsion::Z3, p).unwrap();
            assert_eq!(split + nonsplit, 2 * p - 2);
            if p % 12 == 1 {
                assert_eq!(split, 2 * (p - 1));
                assert_eq!(nonsplit, 0);
            }
        }
    }
}
