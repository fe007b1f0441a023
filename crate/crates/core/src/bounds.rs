//! Explicit-formula rank bounds: the Fejér test-function pair, the
//! support half-width σ per torsion group, exact moment and tail bounds
//! on analytic ranks, and empirical Frobenius prime sums over a census.
//!
//! The test function is φ(x) = sin²(πσx)/(2πx)² with triangular Fourier
//! transform φ̂(u) = (σ−|u|)/4 on |u| ≤ σ. The width σ is the largest
//! value for which both error terms of the averaged explicit formula
//! vanish; everything downstream (average rank ≤ ½ + 1/σ, the moment and
//! tail bounds) is evaluated in exact rational arithmetic.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::census::{zeta_value, Census};
use crate::curve::{reduction_type, trace_table, Reduction};
use crate::error::Error;
use crate::ff::primes_up_to;
use crate::groups::Torsion;
use crate::Result;

/// The Fejér-type test function with Fourier support [−σ, σ].
#[derive(Debug, Clone, Copy)]
pub struct TestFunction {
    pub sigma: f64,
}

impl TestFunction {
    pub fn new(sigma: f64) -> Self {
        assert!(sigma > 0.0, "test function needs positive support width");
        TestFunction { sigma }
    }

    /// φ(x) = sin²(πσx)/(2πx)², nonnegative, φ(0) = σ²/4.
    pub fn phi(&self, x: f64) -> f64 {
        let t = PI * self.sigma * x;
        if t.abs() < 1e-6 {
            // sin(t)/t expanded to keep the removable singularity smooth.
            let ratio = 1.0 - t * t / 6.0;
            return (self.sigma * ratio / 2.0).powi(2);
        }
        (t.sin() / (2.0 * PI * x)).powi(2)
    }

    /// φ̂(u) = (σ−|u|)/4 on the support, 0 outside; φ̂(0) = σ/4.
    pub fn phi_hat(&self, u: f64) -> f64 {
        if u.abs() <= self.sigma {
            (self.sigma - u.abs()) / 4.0
        } else {
            0.0
        }
    }
}

fn ratio(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

/// The support half-width σ for a torsion group, derived as
/// min((2/3)g₁, (2/5)g₂) where (g₁, g₂) are the exponent gaps that the
/// two error terms of the averaged explicit formula leave available:
/// (1/d − 1/e, 1/d − 1/12) for the groups of order ≤ 4 and (1/e, 1/e)
/// for the large groups, with e the error exponent of the group.
pub fn sigma_for(g: Torsion) -> Result<Rational64> {
    if g == Torsion::Trivial {
        return Err(Error::UnsupportedGroup {
            group: g.label(),
            operation: "explicit-formula rank bounds",
        });
    }
    let (dn, dd) = g.d_ratio();
    let inv_d = ratio(dd as i64, dn as i64);
    let inv_e = ratio(1, g.e_exponent() as i64);
    let (g1, g2) = if g.is_large() {
        (inv_e, inv_e)
    } else {
        (inv_d - inv_e, inv_d - ratio(1, 12))
    };
    Ok((ratio(2, 3) * g1).min(ratio(2, 5) * g2))
}

/// σ_n = σ/n, the n-level width (Z/2 and 2×2 only).
pub fn sigma_n(g: Torsion, n: u32) -> Result<Rational64> {
    if !matches!(g, Torsion::Z2 | Torsion::Z2x2) {
        return Err(Error::UnsupportedGroup {
            group: g.label(),
            operation: "n-level density widths",
        });
    }
    assert!(n >= 1);
    Ok(sigma_for(g)? / ratio(n as i64, 1))
}

/// σ_{2n} = σ/(2n), the width used by the rank tail bound.
pub fn sigma_2n(g: Torsion, n: u32) -> Result<Rational64> {
    sigma_n(g, 2 * n)
}

/// Average analytic rank bound ½ + 1/σ. For the n-level groups Z/2 and
/// 2×2 this equals the first moment bound.
pub fn average_rank_bound(g: Torsion) -> Result<Rational64> {
    let sigma = match g {
        Torsion::Z2 | Torsion::Z2x2 => sigma_n(g, 1)?,
        _ => sigma_for(g)?,
    };
    Ok(ratio(1, 2) + sigma.recip())
}

fn big_binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn big_factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

fn big_ratio(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn big_pow(base: &BigRational, exp: u64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Exact n-th moment bound on analytic ranks over E_G:
/// Σ over subsets S of {1..n} and even-cardinality S₂ ⊆ S of
/// (1/σ_n)^|S^c| (1/2)^|S \ S₂| |S₂|! (1/6)^(|S₂|/2), evaluated by
/// iterating over the sizes (s, k) with binomial multiplicities.
pub fn moment_bound(g: Torsion, n: u32) -> Result<BigRational> {
    assert!(n >= 1);
    let inv_sigma = big_ratio(sigma_n(g, n)?.recip());
    let half = big_ratio(ratio(1, 2));
    let sixth = big_ratio(ratio(1, 6));
    let n = n as u64;
    let mut total = BigRational::zero();
    for s in 0..=n {
        for k in (0..=s).step_by(2) {
            let count = big_binomial(n, s) * big_binomial(s, k);
            let term = big_pow(&inv_sigma, n - s)
                * big_pow(&half, s - k)
                * BigRational::from(big_factorial(k))
                * big_pow(&sixth, k / 2);
            total += BigRational::from(count) * term;
        }
    }
    Ok(total)
}

/// Tail bound on the proportion of curves in E_G with analytic rank at
/// least `a`: minimizes over n the 2n-th moment bound divided by the
/// threshold power, with C = a·σ_{2n} − 1 > 0. Returns (bound, n, C).
pub fn tail_bound(g: Torsion, a: i64) -> Result<(BigRational, u32, BigRational)> {
    let base = sigma_n(g, 1)?;
    let minimum = ratio(2, 1) / base;
    if ratio(a, 1) <= minimum {
        return Err(Error::VacuousThreshold {
            threshold: a,
            minimum: minimum.to_string(),
        });
    }
    let mut best: Option<(BigRational, u32, BigRational)> = None;
    for n in 1..=64u32 {
        let sigma = big_ratio(sigma_2n(g, n)?);
        let c = BigRational::from(BigInt::from(a)) * &sigma - BigRational::one();
        if !c.is_positive() {
            continue;
        }
        let mut numerator = BigRational::zero();
        let half = big_ratio(ratio(1, 2));
        let sixth = big_ratio(ratio(1, 6));
        for k in 0..=n as u64 {
            numerator += BigRational::from(big_binomial(2 * n as u64, 2 * k))
                * big_pow(&half, 2 * n as u64 - 2 * k)
                * BigRational::from(big_factorial(2 * k))
                * big_pow(&sixth, k);
        }
        let bound = numerator / big_pow(&(c.clone() / &sigma), 2 * n as u64);
        if best.as_ref().is_none_or(|(b, _, _)| bound < *b) {
            best = Some((bound, n, c));
        }
    }
    Ok(best.expect("n = 1 is feasible beyond the vacuous threshold"))
}

/// Normalized Frobenius coefficient â_E(p^e) for e ∈ {1, 2} from local
/// reduction data.
pub fn hat_a(red: Reduction, a_p: i64, p: u64, e: u8) -> f64 {
    let sqrt_p = (p as f64).sqrt();
    match (red, e) {
        (Reduction::Good, 1) => a_p as f64 / sqrt_p,
        (Reduction::Good, 2) => (a_p * a_p) as f64 / p as f64 - 2.0,
        (Reduction::SplitMultiplicative, 1) => 1.0 / sqrt_p,
        (Reduction::NonsplitMultiplicative, 1) => -1.0 / sqrt_p,
        (Reduction::SplitMultiplicative | Reduction::NonsplitMultiplicative, 2) => 1.0 / p as f64,
        (Reduction::Additive, 1 | 2) => 0.0,
        _ => panic!("normalized coefficients are defined for e in {{1, 2}}"),
    }
}

/// Mean of â(p^e) over a census at one prime.
fn census_hat_mean(census: &Census, p: u64, e: u8) -> Result<f64> {
    let table = trace_table(p)?;
    let mut sum = 0.0;
    for &(a, b) in &census.curves {
        let red = reduction_type(a, b, p)?;
        let (ar, br) = (a.rem_euclid(p as i64) as u64, b.rem_euclid(p as i64) as u64);
        sum += hat_a(red, table[(ar * p + br) as usize], p, e);
    }
    Ok(sum / census.curves.len() as f64)
}

/// The two prime sums S₁ and S₂ of the averaged explicit formula over a
/// census, with weights φ̂(log p/log X) and φ̂(2 log p/log X). The limit
/// targets are S₁ → 0 and S₂ → −φ(0)/2. Primes below 5 are outside the
/// short-Weierstrass reduction machinery and are omitted; at desk scales
/// the support cutoff X^σ admits no prime below 5 for S₂ anyway.
pub fn empirical_s1_s2(census: &Census, sigma: f64) -> Result<(f64, f64)> {
    assert!(sigma > 0.0);
    let tf = TestFunction::new(sigma);
    let x = census.x as f64;
    let log_x = x.ln();
    let n = census.curves.len() as f64;
    assert!(n > 0.0, "prime sums need a nonempty census");
    let p_max = x.powf(sigma).floor() as u64;
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    for p in primes_up_to(p_max) {
        if p < 5 {
            continue;
        }
        let log_p = (p as f64).ln();
        let w1 = tf.phi_hat(log_p / log_x);
        if w1 > 0.0 {
            s1 += log_p / (p as f64).sqrt() * w1 * census_hat_mean(census, p, 1)?;
        }
        let w2 = tf.phi_hat(2.0 * log_p / log_x);
        if w2 > 0.0 {
            s2 += log_p / p as f64 * w2 * census_hat_mean(census, p, 2)?;
        }
    }
    Ok((2.0 / log_x * s1, 2.0 / log_x * s2))
}

/// One factor of a trace-formula pattern: (p, e, r) contributes
/// â_E(p^e)^r.
pub type PatternFactor = (u64, u8, u32);

/// Leading coefficient c ∈ {0, −1, +1} of the Frobenius trace formula
/// for a product pattern.
pub fn predicted_trace_coefficient(pattern: &[PatternFactor]) -> Result<i32> {
    validate_pattern(pattern)?;
    if pattern.iter().any(|&(_, e, r)| e == 1 && r % 2 == 1) {
        return Ok(0);
    }
    let squares = pattern.iter().filter(|&&(_, e, _)| e == 2).count();
    Ok(if squares % 2 == 1 { -1 } else { 1 })
}

fn validate_pattern(pattern: &[PatternFactor]) -> Result<()> {
    if pattern.is_empty() {
        return Err(Error::InvalidPattern("empty pattern".into()));
    }
    for &(p, e, r) in pattern {
        if p < 5 {
            return Err(Error::InvalidPattern(format!(
                "prime {p} is below the supported range"
            )));
        }
        match e {
            1 if r % 2 == 1 || r == 2 => {}
            2 if r == 1 => {}
            1 | 2 => {
                return Err(Error::InvalidPattern(format!(
                    "exponent {r} is not allowed with e = {e}"
                )))
            }
            _ => {
                return Err(Error::InvalidPattern(format!(
                    "prime power exponent e = {e} is outside {{1, 2}}"
                )))
            }
        }
    }
    for (i, &(p, _, _)) in pattern.iter().enumerate() {
        if pattern[i + 1..].iter().any(|&(q, _, _)| q == p) {
            return Err(Error::InvalidPattern(format!("repeated prime {p}")));
        }
    }
    Ok(())
}

/// Frobenius trace-formula check: the census mean of Π â_E(p_i^{e_i})^{r_i},
/// normalized by ζ(12/d(G)) so that the trace formula predicts convergence
/// to c ∈ {0, −1, +1}. Calibrating by the measured census size rather than
/// c(G)X^(1/d) cancels the leading constant exactly.
pub fn trace_formula_check(census: &Census, pattern: &[PatternFactor]) -> Result<(f64, i32)> {
    let g = census.group;
    if !matches!(g, Torsion::Z2 | Torsion::Z2x2) {
        return Err(Error::UnsupportedGroup {
            group: g.label(),
            operation: "the Frobenius trace formula",
        });
    }
    let predicted = predicted_trace_coefficient(pattern)?;
    let mut tables = Vec::new();
    for &(p, _, _) in pattern {
        tables.push((p, trace_table(p)?));
    }
    let mut sum = 0.0;
    for &(a, b) in &census.curves {
        let mut product = 1.0;
        for (&(p, e, r), (_, table)) in pattern.iter().zip(&tables) {
            let red = reduction_type(a, b, p)?;
            let (ar, br) = (a.rem_euclid(p as i64) as u64, b.rem_euclid(p as i64) as u64);
            product *= hat_a(red, table[(ar * p + br) as usize], p, e).powi(r as i32);
        }
        sum += product;
    }
    let mean = sum / census.curves.len() as f64;
    let lhs = zeta_value(g.zeta_exponent()?) * mean;
    Ok((lhs, predicted))
}

/// Quadrature of ∫|u|φ̂(u)² du against its closed form σ⁴/96 = φ(0)²/6.
/// Returns (quadrature, exact).
pub fn moment_prime_integrals(sigma: f64) -> (f64, f64) {
    let tf = TestFunction::new(sigma);
    // The integrand is even: 2 ∫₀^σ u φ̂(u)² du, a cubic polynomial piece,
    // integrated by composite Simpson (exact on cubics up to roundoff).
    let n = 256;
    let h = sigma / n as f64;
    let f = |u: f64| u * tf.phi_hat(u).powi(2);
    let mut acc = f(0.0) + f(sigma);
    for k in 1..n {
        acc += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    (2.0 * acc * h / 3.0, sigma.powi(4) / 96.0)
}

/// Numerical Fourier transform ∫φ(x)e^(−2πiux)dx truncated at |x| ≤ T
/// with the analytic tail of the non-oscillatory part restored at u = 0.
/// φ is even, so the transform reduces to a cosine integral.
pub fn phi_fourier_numeric(sigma: f64, u: f64) -> f64 {
    let tf = TestFunction::new(sigma);
    let t_max = 4.0e4;
    let h = 1.0 / (128.0 * sigma.max(u.abs()));
    let n = ((2.0 * t_max / h).ceil() as usize + 1) & !1usize;
    let h = 2.0 * t_max / n as f64;
    let f = |x: f64| tf.phi(x) * (2.0 * PI * u * x).cos();
    let mut acc = f(-t_max) + f(t_max);
    for k in 1..n {
        acc += f(-t_max + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    let mut integral = acc * h / 3.0;
    // Beyond T, φ(x)cos(2πux) ≈ (1 − cos(2πσx))cos(2πux)/(8π²x²); only
    // the u = 0 constant part survives averaging: ∫_{|x|>T} = 1/(4π²T).
    if u == 0.0 {
        integral += 1.0 / (4.0 * PI * PI * t_max);
    }
    integral
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::enumerate;
    use crate::groups::LARGE;
    use num_traits::ToPrimitive;

    #[test]
    fn sigma_values_come_out_of_the_minimum() {
        assert_eq!(sigma_for(Torsion::Z3).unwrap(), ratio(1, 18));
        assert_eq!(sigma_for(Torsion::Z4).unwrap(), ratio(1, 18));
        assert_eq!(sigma_for(Torsion::Z2).unwrap(), ratio(1, 9));
        assert_eq!(sigma_for(Torsion::Z2x2).unwrap(), ratio(1, 10));
        assert_eq!(sigma_for(Torsion::Z5).unwrap(), ratio(1, 30));
        assert_eq!(sigma_for(Torsion::Z7).unwrap(), ratio(1, 60));
        assert_eq!(sigma_for(Torsion::Z2x8).unwrap(), ratio(1, 120));
        for g in LARGE {
            assert_eq!(sigma_for(g).unwrap(), ratio(1, 5 * g.d_int() as i64));
        }
        assert_eq!(sigma_n(Torsion::Z2, 3).unwrap(), ratio(1, 27));
        assert_eq!(sigma_2n(Torsion::Z2x2, 2).unwrap(), ratio(1, 40));
        assert!(sigma_n(Torsion::Z3, 1).is_err());
        assert!(sigma_for(Torsion::Trivial).is_err());
    }

    #[test]
    fn average_rank_bounds() {
        assert_eq!(average_rank_bound(Torsion::Z3).unwrap(), ratio(37, 2));
        assert_eq!(average_rank_bound(Torsion::Z4).unwrap(), ratio(37, 2));
        assert_eq!(average_rank_bound(Torsion::Z2).unwrap(), ratio(19, 2));
        assert_eq!(average_rank_bound(Torsion::Z2x2).unwrap(), ratio(21, 2));
        for g in LARGE {
            let expected = ratio(1, 2) + ratio(5 * g.d_int() as i64, 1);
            assert_eq!(average_rank_bound(g).unwrap(), expected, "{g}");
        }
        assert_eq!(average_rank_bound(Torsion::Z7).unwrap(), ratio(121, 2));
    }

    fn moment_bound_by_subsets(g: Torsion, n: u32) -> BigRational {
        let inv_sigma = big_ratio(sigma_n(g, n).unwrap().recip());
        let half = big_ratio(ratio(1, 2));
        let sixth = big_ratio(ratio(1, 6));
        let mut total = BigRational::zero();
        for s_mask in 0u32..(1 << n) {
            let s = s_mask.count_ones() as u64;
            let mut s2_mask = s_mask;
            loop {
                let k = s2_mask.count_ones() as u64;
                if k % 2 == 0 {
                    total += big_pow(&inv_sigma, n as u64 - s)
                        * big_pow(&half, s - k)
                        * BigRational::from(big_factorial(k))
                        * big_pow(&sixth, k / 2);
                }
                if s2_mask == 0 {
                    break;
                }
                s2_mask = (s2_mask - 1) & s_mask;
            }
        }
        total
    }

    #[test]
    fn moment_bounds_match_quoted_values_and_subset_oracle() {
        let rational = |n: i64, d: i64| big_ratio(ratio(n, d));
        assert_eq!(moment_bound(Torsion::Z2, 1).unwrap(), rational(19, 2));
        assert_eq!(moment_bound(Torsion::Z2x2, 1).unwrap(), rational(21, 2));
        for g in [Torsion::Z2, Torsion::Z2x2] {
            for n in 1..=6 {
                assert_eq!(
                    moment_bound(g, n).unwrap(),
                    moment_bound_by_subsets(g, n),
                    "{g}, n = {n}"
                );
            }
        }
        assert_eq!(
            average_rank_bound(Torsion::Z2).unwrap(),
            sigma_n(Torsion::Z2, 1).unwrap().recip() + ratio(1, 2)
        );
    }

    #[test]
    fn tail_bounds_hit_seven_three_hundredths() {
        let (bound, n, c) = tail_bound(Torsion::Z2, 23).unwrap();
        assert_eq!(bound, big_ratio(ratio(7, 300)));
        assert_eq!(n, 1);
        assert_eq!(c, big_ratio(ratio(5, 18)));
        let (bound, n, c) = tail_bound(Torsion::Z2x2, 25).unwrap();
        assert_eq!(bound, big_ratio(ratio(7, 300)));
        assert_eq!(n, 1);
        assert_eq!(c, big_ratio(ratio(1, 4)));
        assert!(bound.to_f64().unwrap() <= 0.0234 + 5e-4);
        match tail_bound(Torsion::Z2, 18) {
            Err(Error::VacuousThreshold { threshold, .. }) => assert_eq!(threshold, 18),
            other => panic!("expected vacuous threshold, got {other:?}"),
        }
        // Far thresholds prefer higher n.
        let (_, n_far, _) = tail_bound(Torsion::Z2, 200).unwrap();
        assert!(n_far > 1);
    }

    #[test]
    fn normalized_coefficients() {
        assert_eq!(hat_a(Reduction::Good, 0, 7, 2), -2.0);
        assert_eq!(
            hat_a(Reduction::SplitMultiplicative, 1, 25, 1),
            1.0 / 5.0
        );
        assert_eq!(
            hat_a(Reduction::NonsplitMultiplicative, -1, 25, 1),
            -1.0 / 5.0
        );
        assert_eq!(hat_a(Reduction::SplitMultiplicative, 1, 5, 2), 0.2);
        assert_eq!(hat_a(Reduction::Additive, 0, 5, 1), 0.0);
        for p in [5u64, 7, 11, 13] {
            let table = trace_table(p).unwrap();
            for a in 0..p {
                for b in 0..p {
                    if reduction_type(a as i64, b as i64, p).unwrap() == Reduction::Good {
                        let t = table[(a * p + b) as usize];
                        let h1 = hat_a(Reduction::Good, t, p, 1);
                        let h2 = hat_a(Reduction::Good, t, p, 2);
                        assert!(h1.abs() <= 2.0, "Hasse bound at ({a}, {b}) mod {p}");
                        assert!((h2 - (h1 * h1 - 2.0)).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn prime_integrals_and_fourier_pair() {
        for sigma in [1.0, 1.0 / 9.0] {
            let (quad, exact) = moment_prime_integrals(sigma);
            assert!((quad - exact).abs() < 1e-10, "sigma = {sigma}");
        }
        let (_, exact) = moment_prime_integrals(1.0);
        assert!((exact - 1.0 / 96.0).abs() < 1e-15);
        let tf = TestFunction::new(1.0 / 9.0);
        assert!((tf.phi_hat(0.0) - 1.0 / 36.0).abs() < 1e-15);
        assert!((tf.phi(0.0) - (1.0f64 / 324.0)).abs() < 1e-15);
        let sigma = 1.0 / 9.0;
        for u in [0.0, sigma / 5.0, sigma / 3.0, sigma / 2.0, 0.8 * sigma, 1.5 * sigma] {
            let numeric = phi_fourier_numeric(sigma, u);
            let expected = TestFunction::new(sigma).phi_hat(u);
            assert!(
                (numeric - expected).abs() < 1e-6,
                "u = {u}: {numeric} vs {expected}"
            );
        }
    }

    #[test]
    fn pattern_validation_and_coefficients() {
        assert_eq!(predicted_trace_coefficient(&[(5, 1, 1)]).unwrap(), 0);
        assert_eq!(predicted_trace_coefficient(&[(5, 1, 3)]).unwrap(), 0);
        assert_eq!(predicted_trace_coefficient(&[(5, 2, 1)]).unwrap(), -1);
        assert_eq!(predicted_trace_coefficient(&[(5, 1, 2)]).unwrap(), 1);
        assert_eq!(
            predicted_trace_coefficient(&[(5, 1, 2), (7, 2, 1)]).unwrap(),
            -1
        );
        assert_eq!(
            predicted_trace_coefficient(&[(5, 2, 1), (7, 2, 1)]).unwrap(),
            1
        );
        assert!(predicted_trace_coefficient(&[]).is_err());
        assert!(predicted_trace_coefficient(&[(5, 3, 1)]).is_err());
        assert!(predicted_trace_coefficient(&[(5, 1, 4)]).is_err());
        assert!(predicted_trace_coefficient(&[(5, 2, 2)]).is_err());
        assert!(predicted_trace_coefficient(&[(5, 1, 2), (5, 2, 1)]).is_err());
        assert!(predicted_trace_coefficient(&[(3, 1, 2)]).is_err());
    }

    #[test]
    fn trace_formula_check_on_a_census() {
        let census = enumerate(Torsion::Z2, 1_000_000).unwrap();
        let (lhs, c) = trace_formula_check(&census, &[(5, 1, 1)]).unwrap();
        assert_eq!(c, 0);
        assert!(lhs.abs() < 0.05, "odd-power mean should be small: {lhs}");
        let (lhs, c) = trace_formula_check(&census, &[(5, 2, 1)]).unwrap();
        assert_eq!(c, -1);
        assert!(lhs < 0.0, "square-power mean should be negative: {lhs}");
        let z5 = enumerate(Torsion::Z5, 1_000_000_000).unwrap();
        assert!(trace_formula_check(&z5, &[(7, 1, 2)]).is_err());
    }

    #[test]
    fn prime_sums_over_a_census() {
        let census = enumerate(Torsion::Z2, 1_000_000).unwrap();
        // X^(1/9) < 5: no supported primes enter either sum.
        let (s1, s2) = empirical_s1_s2(&census, 1.0 / 9.0).unwrap();
        assert_eq!(s1, 0.0);
        assert_eq!(s2, 0.0);
        // A wide window pulls in primes; S1 moves off zero but stays small.
        let (s1, s2) = empirical_s1_s2(&census, 0.3).unwrap();
        assert!(s1 != 0.0);
        assert!(s1.abs() < 0.1, "S1 = {s1}");
        assert!(s2 < 0.0, "S2 = {s2} should be negative like its target");
    }
}
