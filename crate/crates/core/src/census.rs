//! Exact enumeration of the height census E_G(X), the counting constants
//! c(G), and empirical local-condition densities.
//!
//! E_G(X) is the set of minimal models y^2 = x^3 + Ax + B of naive height
//! max(|A|^3, B^2) <= X whose Mordell-Weil group contains G. The small
//! groups (order <= 4) are enumerated through their weighted-homogeneous
//! parameter boxes with minimal-twist reduction; the large groups through
//! coprime parameter pairs with the defect correction. Both scans grow
//! their boxes geometrically until a full growth round adds nothing, then
//! verify closure with one extra round.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::curve::{reduction_type, trace_table, Reduction};
use crate::error::Error;
use crate::groups::Torsion;
use crate::models::{defect_of_values, fg, fg_tables, table_checksum};
use crate::weights::{class_numbers, predicted_singular_sum};
use crate::Result;

/// A completed enumeration of E_G(X).
#[derive(Debug, Clone)]
pub struct Census {
    pub group: Torsion,
    pub x: u128,
    /// Minimal models (A, B), sorted.
    pub curves: Vec<(i64, i64)>,
    /// Histogram: parameter-preimage multiplicity -> number of models.
    pub multiplicities: BTreeMap<u64, u64>,
    /// Parameter pairs inside the height region discarded as singular.
    pub singular_images: u64,
}

/// Naive height max(|A|^3, B^2).
pub fn height(a: i64, b: i64) -> u128 {
    let a3 = (a.unsigned_abs() as u128).pow(3);
    let b2 = (b.unsigned_abs() as u128).pow(2);
    a3.max(b2)
}

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97,
];

/// Whether (A, B) is a minimal model: no prime p with p^4 | A and p^6 | B.
pub fn is_minimal_model(a: i64, b: i64) -> bool {
    let (ua, ub) = (a.unsigned_abs(), b.unsigned_abs());
    for &p in &SMALL_PRIMES {
        let p4 = p.pow(4);
        if ua != 0 && p4 > ua {
            return true;
        }
        let p6 = p4 * p * p;
        if ua == 0 && p6 > ub {
            return true;
        }
        let div_a = ua == 0 || ua % p4 == 0;
        let div_b = ub == 0 || ub % p6 == 0;
        if div_a && div_b && (ua != 0 || ub != 0) {
            return false;
        }
    }
    true
}

/// Reduce (A, B) to its minimal twist: divide by p^4, p^6 while possible.
pub fn minimal_twist(mut a: i128, mut b: i128) -> (i128, i128) {
    for &p in &SMALL_PRIMES {
        let p4 = (p as i128).pow(4);
        let p6 = p4 * (p as i128).pow(2);
        if a != 0 && p4 > a.abs() {
            break;
        }
        if a == 0 && p6 > b.abs() {
            break;
        }
        loop {
            let div_a = a == 0 || a % p4 == 0;
            let div_b = b == 0 || b % p6 == 0;
            if div_a && div_b && (a != 0 || b != 0) {
                a /= p4;
                b /= p6;
            } else {
                break;
            }
        }
    }
    (a, b)
}

fn integer_root(x: u128, k: u32) -> u128 {
    if x == 0 {
        return 0;
    }
    let mut r = (x as f64).powf(1.0 / k as f64).round() as u128;
    while r.pow(k) > x {
        r -= 1;
    }
    while (r + 1).pow(k) <= x {
        r += 1;
    }
    r
}

/// Enumerate E_G(X).
pub fn enumerate(g: Torsion, x: u128) -> Result<Census> {
    match g {
        Torsion::Trivial => enumerate_trivial(x),
        g if g.is_large() => enumerate_coprime(g, x),
        g => enumerate_weighted(g, x),
    }
}

/// The full census E(X): every minimal nonsingular (A, B) in the height
/// box, with no torsion restriction.
fn enumerate_trivial(x: u128) -> Result<Census> {
    let amax = integer_root(x, 3) as i64;
    let bmax = integer_root(x, 2) as i64;
    let mut curves = Vec::new();
    let mut singular = 0u64;
    for a in -amax..=amax {
        for b in -bmax..=bmax {
            let disc = 4 * (a as i128).pow(3) + 27 * (b as i128).pow(2);
            if disc == 0 {
                singular += 1;
                continue;
            }
            if is_minimal_model(a, b) {
                curves.push((a, b));
            }
        }
    }
    curves.sort_unstable();
    let mut multiplicities = BTreeMap::new();
    multiplicities.insert(1, curves.len() as u64);
    Ok(Census {
        group: Torsion::Trivial,
        x,
        curves,
        multiplicities,
        singular_images: singular,
    })
}

/// Weighted degree of the f-table (the weighted degree of g is always
/// 3/2 of it).
fn weighted_f_degree(g: Torsion) -> u32 {
    let (m, n) = g.weights();
    let (ft, _, _) = fg_tables(g);
    ft.iter().map(|&(i, j, _)| i * m + j * n).max().unwrap()
}

struct ImageAccumulator {
    map: HashMap<(i64, i64), u64>,
    singular: u64,
}

impl ImageAccumulator {
    fn finish(self, g: Torsion, x: u128) -> Census {
        let mut curves: Vec<(i64, i64)> = self.map.keys().copied().collect();
        curves.sort_unstable();
        let mut multiplicities = BTreeMap::new();
        for &m in self.map.values() {
            *multiplicities.entry(m).or_insert(0) += 1;
        }
        Census {
            group: g,
            x,
            curves,
            multiplicities,
            singular_images: self.singular,
        }
    }
}

fn big_to_i64(v: &BigInt) -> i64 {
    i64::try_from(v).expect("census coordinate exceeds i64")
}

/// Census scan for the small groups: integer parameters in the weighted
/// box R_G(X), images minimal-twist-reduced and deduplicated.
fn enumerate_weighted(g: Torsion, x: u128) -> Result<Census> {
    let (m, n) = g.weights();
    let parity = g == Torsion::Z2x2;
    let df = weighted_f_degree(g) as f64;
    let lambda0 = (x as f64).powf(1.0 / (3.0 * df));
    let big_x = BigInt::from(x);
    let mut acc = ImageAccumulator {
        map: HashMap::new(),
        singular: 0,
    };
    // Accepts a parameter pair if its raw image lies in the height region;
    // returns whether it did.
    let visit = |acc: &mut ImageAccumulator, a: i64, b: i64| -> bool {
        if parity && (a - b).rem_euclid(2) != 0 {
            return false;
        }
        let (f, gv) = fg(g, a, b);
        if f.abs().pow(3) > big_x || gv.abs().pow(2) > big_x {
            return false;
        }
        let disc: BigInt = 4 * f.pow(3) + 27 * gv.pow(2);
        if disc.is_zero() {
            acc.singular += 1;
            return true;
        }
        let (ra, rb) = minimal_twist(
            i128::try_from(&f).expect("f exceeds i128"),
            i128::try_from(&gv).expect("g exceeds i128"),
        );
        *acc.map.entry((ra as i64, rb as i64)).or_insert(0) += 1;
        true
    };
    let mut lambda = lambda0.max(2.0);
    let (mut amax, mut bmax) = (0i64, 0i64);
    let mut closed_rounds = 0;
    for round in 0..64 {
        let new_a = (lambda.powi(m as i32)).ceil() as i64 + 1;
        let new_b = (lambda.powi(n as i32)).ceil() as i64 + 1;
        let mut found = false;
        for a in -new_a..=new_a {
            for b in -new_b..=new_b {
                if a.abs() <= amax && b.abs() <= bmax {
                    continue;
                }
                if visit(&mut acc, a, b) {
                    found = true;
                }
            }
        }
        amax = new_a;
        bmax = new_b;
        lambda *= 1.25;
        if !found && round > 0 {
            closed_rounds += 1;
            if closed_rounds == 2 {
                return Ok(acc.finish(g, x));
            }
        } else {
            closed_rounds = 0;
        }
    }
    Err(Error::RegionNotExhausted {
        group: g.label(),
        x: x as f64,
    })
}

/// Census scan for the large groups: coprime parameters, defect-corrected
/// images of height <= X.
fn enumerate_coprime(g: Torsion, x: u128) -> Result<Census> {
    let eps = g.epsilon_max()?;
    // |f| <= eps^4 X^(1/3) and |g| <= eps^6 X^(1/2) in the exact cubed /
    // squared form: |f|^3 and g^2 <= eps^12 X.
    let raw_bound = BigInt::from(eps).pow(12) * BigInt::from(x);
    let big_x = BigInt::from(x);
    let degree = weighted_f_degree(g) as f64;
    let mut acc = ImageAccumulator {
        map: HashMap::new(),
        singular: 0,
    };
    let visit = |acc: &mut ImageAccumulator, a: i64, b: i64| -> bool {
        if num_integer::gcd(a, b).abs() != 1 {
            return false;
        }
        let (f, gv) = fg(g, a, b);
        if f.abs().pow(3) > raw_bound || gv.abs().pow(2) > raw_bound {
            return false;
        }
        let e = defect_of_values(&f, &gv);
        let fa = f / BigInt::from(e).pow(4);
        let gb = gv / BigInt::from(e).pow(6);
        if fa.abs().pow(3) > big_x || gb.abs().pow(2) > big_x {
            return false;
        }
        let disc: BigInt = 4 * fa.pow(3) + 27 * gb.pow(2);
        if disc.is_zero() {
            acc.singular += 1;
            return true;
        }
        let (av, bv) = (big_to_i64(&fa), big_to_i64(&gb));
        assert!(
            is_minimal_model(av, bv),
            "defect correction left a non-minimal model at ({a}, {b})"
        );
        *acc.map.entry((av, bv)).or_insert(0) += 1;
        true
    };
    let scale = (eps as f64).powf(4.0 / degree) * (x as f64).powf(1.0 / (3.0 * degree));
    let mut bound = scale.max(2.0);
    let mut rmax = 0i64;
    let mut closed_rounds = 0;
    for round in 0..64 {
        let new_r = bound.ceil() as i64 + 1;
        let mut found = false;
        for a in -new_r..=new_r {
            for b in -new_r..=new_r {
                if a.abs() <= rmax && b.abs() <= rmax {
                    continue;
                }
                if visit(&mut acc, a, b) {
                    found = true;
                }
            }
        }
        rmax = new_r;
        bound *= 1.5;
        if !found && round > 0 {
            closed_rounds += 1;
            if closed_rounds == 2 {
                return Ok(acc.finish(g, x));
            }
        } else {
            closed_rounds = 0;
        }
    }
    Err(Error::RegionNotExhausted {
        group: g.label(),
        x: x as f64,
    })
}

fn eval_terms_f64(terms: &[(u32, u32, i64)], den: f64, x: f64, y: f64) -> f64 {
    let mut acc = 0.0;
    for &(i, j, c) in terms {
        acc += c as f64 * x.powi(i as i32) * y.powi(j as i32);
    }
    acc / den
}

/// Coefficients of t -> f(x, t) as a dense polynomial in the second
/// variable.
fn y_poly(terms: &[(u32, u32, i64)], den: f64, x: f64) -> Vec<f64> {
    let deg = terms.iter().map(|t| t.1).max().unwrap_or(0) as usize;
    let mut coeffs = vec![0.0; deg + 1];
    for &(i, j, c) in terms {
        coeffs[j as usize] += c as f64 * x.powi(i as i32) / den;
    }
    coeffs
}

fn eval_poly_f64(coeffs: &[f64], y: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * y + c;
    }
    acc
}

/// Upper bound on |y| beyond which |poly(y)| stays > 1, or None when the
/// polynomial is (numerically) constant in y.
fn escape_bound(coeffs: &[f64]) -> Option<f64> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs())).max(1.0);
    let deg = coeffs
        .iter()
        .rposition(|c| c.abs() > 1e-14 * scale)
        .unwrap_or(0);
    if deg == 0 {
        return None;
    }
    let lead = coeffs[deg].abs();
    let rest = coeffs[..deg]
        .iter()
        .fold(0.0f64, |m, c| m.max(c.abs()));
    Some(2.0 + (rest + 1.0) / lead)
}

/// Measure of {y : |f(x,y)| <= 1 and |g(x,y)| <= 1} at fixed x.
fn section_width(fp: &[f64], gp: &[f64], inside: impl Fn(f64) -> bool) -> f64 {
    let bound = match (escape_bound(fp), escape_bound(gp)) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => return 0.0,
    };
    // Boundary candidates: roots of f -+ 1 and g -+ 1 in [-bound, bound].
    let mut cuts = vec![-bound, bound];
    for (poly, shift) in [(fp, 1.0), (fp, -1.0), (gp, 1.0), (gp, -1.0)] {
        let eval = |y: f64| eval_poly_f64(poly, y) + shift;
        let samples = 768;
        let mut prev_y = -bound;
        let mut prev_v = eval(prev_y);
        for k in 1..=samples {
            let y = -bound + 2.0 * bound * k as f64 / samples as f64;
            let v = eval(y);
            if prev_v == 0.0 {
                cuts.push(prev_y);
            } else if prev_v * v < 0.0 {
                let (mut lo, mut hi) = (prev_y, y);
                let (mut flo, _) = (prev_v, v);
                for _ in 0..70 {
                    let mid = 0.5 * (lo + hi);
                    let fm = eval(mid);
                    if flo * fm <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        flo = fm;
                    }
                }
                cuts.push(0.5 * (lo + hi));
            }
            prev_y = y;
            prev_v = v;
        }
    }
    cuts.sort_unstable_by(f64::total_cmp);
    let mut width = 0.0;
    for pair in cuts.windows(2) {
        let mid = 0.5 * (pair[0] + pair[1]);
        if inside(mid) {
            width += pair[1] - pair[0];
        }
    }
    width
}

/// Area of the normalized region R_G(1) = {(x, y) : |f_G| <= 1, |g_G| <= 1}
/// by iterated integration with grid refinement. The parity constraint of
/// 2x2 is not part of the region; it enters c(G) as a covolume factor.
pub fn region_area(g: Torsion, tol: f64) -> Result<f64> {
    let (ft, gt, den) = fg_tables(g);
    let den = den as f64;
    let width = |x: f64| -> f64 {
        let fp = y_poly(ft, den, x);
        let gp = y_poly(gt, den, x);
        section_width(&fp, &gp, |y| {
            eval_terms_f64(ft, den, x, y).abs() <= 1.0 + 1e-12
                && eval_terms_f64(gt, den, x, y).abs() <= 1.0 + 1e-12
        })
    };
    // x-extent: grow until a whole annulus of sections is empty.
    let mut xmax = 1.0f64;
    loop {
        let occupied = (0..48).any(|k| {
            let t = 0.7 + 0.3 * (k % 24) as f64 / 23.0;
            width(xmax * t * if k < 24 { 1.0 } else { -1.0 }) > 0.0
        });
        if !occupied {
            break;
        }
        xmax *= 1.4;
        if xmax > 1e3 {
            return Err(Error::RegionNotExhausted {
                group: g.label(),
                x: 1.0,
            });
        }
    }
    // Composite Simpson with doubling until two refinements agree.
    let simpson = |n: usize| -> f64 {
        let h = 2.0 * xmax / n as f64;
        let mut sum = width(-xmax) + width(xmax);
        for k in 1..n {
            let x = -xmax + k as f64 * h;
            sum += width(x) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        sum * h / 3.0
    };
    let mut n = 128;
    let mut prev = simpson(n);
    for iteration in 0..12u32 {
        n *= 2;
        let cur = simpson(n);
        if (cur - prev).abs() < 0.5 * tol {
            return Ok(cur);
        }
        prev = cur;
        if iteration == 11 {
            return Err(Error::AreaNotConverged {
                group: g.label(),
                tol,
                iterations: iteration + 1,
            });
        }
    }
    unreachable!()
}

/// Riemann zeta at the integer arguments the counting constants need.
pub fn zeta_value(s: u32) -> f64 {
    match s {
        2 => PI * PI / 6.0,
        3 => 1.2020569031595942854,
        4 => PI.powi(4) / 90.0,
        6 => PI.powi(6) / 945.0,
        10 => PI.powi(10) / 93555.0,
        _ => panic!("zeta({s}) is not used by any counting constant"),
    }
}

/// Mean of e^(12/d(G)) over the admissible defect classes mod the defect
/// modulus, each class evaluated on two coprime lifts (asserted equal).
pub fn defect_moment(g: Torsion) -> Result<f64> {
    let m = g.defect_modulus()?;
    if m == 1 {
        return Ok(1.0);
    }
    let exponent = 12.0 / g.d_int() as f64;
    let lift_defect = |a0: u64, b0: u64, offset: u64| -> u64 {
        for i in offset.. {
            for j in 0..8 {
                let (a, b) = ((a0 + m * i) as i64, (b0 + m * j) as i64);
                if (a, b) != (0, 0) && num_integer::gcd(a, b) == 1 {
                    return crate::models::defect(g, a, b);
                }
            }
        }
        unreachable!()
    };
    let (mut total, mut classes) = (0.0, 0u64);
    for a0 in 0..m {
        for b0 in 0..m {
            if num_integer::gcd(num_integer::gcd(a0, b0), m) != 1 {
                continue;
            }
            let e = lift_defect(a0, b0, 0);
            let check = lift_defect(a0, b0, 3);
            assert_eq!(e, check, "defect not constant on class ({a0}, {b0}) mod {m}");
            total += (e as f64).powf(exponent);
            classes += 1;
        }
    }
    Ok(total / classes as f64)
}

/// Leading counting constant c(G): |E_G(X)| ~ c(G) X^(1/d(G)).
pub fn c_constant(g: Torsion, tol: f64) -> Result<f64> {
    if g == Torsion::Trivial {
        return Ok(4.0 / zeta_value(10));
    }
    let area = region_area(g, tol)?;
    let r = g.multiplicity() as f64;
    if g.is_large() {
        Ok(area * defect_moment(g)? / (r * zeta_value(2)))
    } else {
        let parity = if g == Torsion::Z2x2 { 2.0 } else { 1.0 };
        Ok(area / (parity * r * zeta_value(g.zeta_exponent()?)))
    }
}

/// A local condition at a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalCondition {
    Good,
    Multiplicative,
    Split,
    Nonsplit,
    Additive,
    Semistable,
    Trace(i64),
}

impl LocalCondition {
    pub fn label(self) -> String {
        match self {
            LocalCondition::Good => "good".into(),
            LocalCondition::Multiplicative => "mult".into(),
            LocalCondition::Split => "split".into(),
            LocalCondition::Nonsplit => "nonsplit".into(),
            LocalCondition::Additive => "additive".into(),
            LocalCondition::Semistable => "semistable".into(),
            LocalCondition::Trace(a) => format!("trace={a}"),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "good" => LocalCondition::Good,
            "mult" => LocalCondition::Multiplicative,
            "split" => LocalCondition::Split,
            "nonsplit" => LocalCondition::Nonsplit,
            "additive" => LocalCondition::Additive,
            "semistable" => LocalCondition::Semistable,
            other => match other.strip_prefix("trace=") {
                Some(a) => LocalCondition::Trace(
                    a.parse().map_err(|_| Error::Parse(format!("bad trace in {other:?}")))?,
                ),
                None => return Err(Error::Parse(format!("unknown local condition {other:?}"))),
            },
        })
    }

    fn satisfied(self, reduction: Reduction, trace: i64) -> bool {
        use LocalCondition::*;
        match self {
            Good => reduction == Reduction::Good,
            Multiplicative => matches!(
                reduction,
                Reduction::SplitMultiplicative | Reduction::NonsplitMultiplicative
            ),
            Split => reduction == Reduction::SplitMultiplicative,
            Nonsplit => reduction == Reduction::NonsplitMultiplicative,
            Additive => reduction == Reduction::Additive,
            Semistable => reduction != Reduction::Additive,
            Trace(a) => reduction == Reduction::Good && trace == a,
        }
    }
}

/// Reduction data of a census at one prime.
#[derive(Debug, Clone)]
pub struct LocalTally {
    pub p: u64,
    pub total: u64,
    pub good: u64,
    pub split: u64,
    pub nonsplit: u64,
    pub additive: u64,
    /// Trace histogram over the good-reduction curves.
    pub traces: BTreeMap<i64, u64>,
}

impl LocalTally {
    pub fn count(&self, lc: LocalCondition) -> u64 {
        use LocalCondition::*;
        match lc {
            Good => self.good,
            Multiplicative => self.split + self.nonsplit,
            Split => self.split,
            Nonsplit => self.nonsplit,
            Additive => self.additive,
            Semistable => self.total - self.additive,
            Trace(a) => self.traces.get(&a).copied().unwrap_or(0),
        }
    }
}

/// Tally reduction types and good traces of every census curve mod p.
pub fn local_tally(census: &Census, p: u64) -> Result<LocalTally> {
    let table = trace_table(p)?;
    let mut tally = LocalTally {
        p,
        total: census.curves.len() as u64,
        good: 0,
        split: 0,
        nonsplit: 0,
        additive: 0,
        traces: BTreeMap::new(),
    };
    for &(a, b) in &census.curves {
        let (ar, br) = (a.rem_euclid(p as i64) as u64, b.rem_euclid(p as i64) as u64);
        match reduction_type(a, b, p)? {
            Reduction::Good => {
                tally.good += 1;
                *tally
                    .traces
                    .entry(table[(ar * p + br) as usize])
                    .or_insert(0) += 1;
            }
            Reduction::SplitMultiplicative => tally.split += 1,
            Reduction::NonsplitMultiplicative => tally.nonsplit += 1,
            Reduction::Additive => tally.additive += 1,
        }
    }
    Ok(tally)
}

/// Weight mass of the whole singular locus mod p, with the trivial group
/// reading every model with weight one.
fn singular_mass(g: Torsion, p: u64) -> Result<u64> {
    if g == Torsion::Trivial {
        Ok(p)
    } else {
        predicted_singular_sum(g, p)
    }
}

/// Predicted asymptotic density of a local condition among E_G(X).
pub fn local_density_prediction(g: Torsion, p: u64, lc: LocalCondition) -> Result<f64> {
    if !g.admissible_prime(p) && g != Torsion::Trivial {
        return Err(Error::InadmissiblePrime {
            group: g.label(),
            p,
        });
    }
    if g == Torsion::Trivial && p < 5 {
        return Err(Error::UnsupportedPrime(p));
    }
    let row = singular_mass(g, p)? as f64;
    let pf = p as f64;
    use LocalCondition::*;
    if g.is_large() {
        let denom = pf * pf - 1.0;
        let value = match lc {
            Good => (pf * pf - row) / denom,
            Multiplicative => (row - 1.0) / denom,
            Split => split_mass(g, p)? as f64 / denom,
            Nonsplit => (row - 1.0 - split_mass(g, p)? as f64) / denom,
            Additive => 0.0,
            Semistable => 1.0,
            Trace(a) => class_numbers(g, p)?.get(&a).copied().unwrap_or(0) as f64 / denom,
        };
        return Ok(value);
    }
    let z = g.zeta_exponent()?;
    let correction = pf.powi(z as i32) / (pf.powi(z as i32) - 1.0);
    let good = (pf * pf - row) / (pf * pf) * correction;
    let mult = (row - 1.0) / (pf * pf) * correction;
    let value = match lc {
        Good => good,
        Multiplicative => mult,
        Split => split_mass(g, p)? as f64 / (pf * pf) * correction,
        Nonsplit => (row - 1.0 - split_mass(g, p)? as f64) / (pf * pf) * correction,
        Additive => 1.0 - good - mult,
        Semistable => good + mult,
        Trace(a) => trace_mass(g, p, a)? as f64 / (pf * pf) * correction,
    };
    Ok(value)
}

/// Weight mass of the split-multiplicative locus mod p.
fn split_mass(g: Torsion, p: u64) -> Result<u64> {
    if g == Torsion::Trivial {
        // Nodes at x0 = t over t != 0; split iff chi(3t) = 1.
        return Ok((p - 1) / 2);
    }
    Ok(crate::weights::multiplicative_weight_split(g, p)?.0)
}

fn trace_mass(g: Torsion, p: u64, a: i64) -> Result<u64> {
    if g == Torsion::Trivial {
        let table = trace_table(p)?;
        let mut count = 0;
        for av in 0..p {
            for bv in 0..p {
                if reduction_type(av as i64, bv as i64, p)? == Reduction::Good
                    && table[(av * p + bv) as usize] == a
                {
                    count += 1;
                }
            }
        }
        return Ok(count);
    }
    Ok(class_numbers(g, p)?.get(&a).copied().unwrap_or(0))
}

/// Number of census curves satisfying every listed condition at once.
pub fn joint_tally(census: &Census, conditions: &[(u64, LocalCondition)]) -> Result<u64> {
    let mut tables = HashMap::new();
    for &(p, _) in conditions {
        if !tables.contains_key(&p) {
            tables.insert(p, trace_table(p)?);
        }
    }
    let mut count = 0;
    for &(a, b) in &census.curves {
        let mut all = true;
        for &(p, lc) in conditions {
            let (ar, br) = (a.rem_euclid(p as i64) as u64, b.rem_euclid(p as i64) as u64);
            let red = reduction_type(a, b, p)?;
            let tr = tables[&p][(ar * p + br) as usize];
            if !lc.satisfied(red, tr) {
                all = false;
                break;
            }
        }
        if all {
            count += 1;
        }
    }
    Ok(count)
}

/// Smallest prime <= limit at which every large group's singular weight
/// row sits on its maximal branch, so the multiplicative masses read off
/// the cusp counts exactly.
pub fn favorable_prime(limit: u64) -> Option<u64> {
    'outer: for p in crate::ff::primes_up_to(limit) {
        if p < 11 {
            continue;
        }
        for g in crate::groups::LARGE {
            if !g.admissible_prime(p) {
                continue 'outer;
            }
            if predicted_singular_sum(g, p).ok()? != g.cusp_count() * (p - 1) + 1 {
                continue 'outer;
            }
        }
        return Some(p);
    }
    None
}

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize, Deserialize)]
struct CensusMeta {
    group: String,
    x: u64,
    count: u64,
    singular_images: u64,
    multiplicities: BTreeMap<u64, u64>,
    version: String,
    table_checksum: String,
}

fn meta_path(path: &Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    std::path::PathBuf::from(s)
}

/// Persist a census as "A B" lines plus a JSON metadata sidecar.
pub fn save_census(census: &Census, path: &Path) -> Result<()> {
    let mut body = String::new();
    for &(a, b) in &census.curves {
        body.push_str(&format!("{a} {b}\n"));
    }
    std::fs::write(path, body)?;
    let meta = CensusMeta {
        group: census.group.label().to_string(),
        x: u64::try_from(census.x).expect("desk-scale height bound"),
        count: census.curves.len() as u64,
        singular_images: census.singular_images,
        multiplicities: census.multiplicities.clone(),
        version: VERSION.to_string(),
        table_checksum: format!("{:016x}", table_checksum()),
    };
    std::fs::write(
        meta_path(path),
        serde_json::to_string_pretty(&meta).expect("serializable metadata"),
    )?;
    Ok(())
}

fn integrity(path: &Path, line: usize, reason: impl Into<String>) -> Error {
    Error::Integrity {
        file: path.display().to_string(),
        line,
        reason: reason.into(),
    }
}

/// Load a census written by [`save_census`], verifying the sidecar, the
/// polynomial-table checksum, sortedness, and the curve count.
pub fn load_census(path: &Path) -> Result<Census> {
    let meta_file = meta_path(path);
    let meta: CensusMeta = serde_json::from_str(
        &std::fs::read_to_string(&meta_file)
            .map_err(|e| integrity(&meta_file, 0, format!("missing sidecar: {e}")))?,
    )
    .map_err(|e| integrity(&meta_file, 0, format!("bad sidecar JSON: {e}")))?;
    let current = format!("{:016x}", table_checksum());
    if meta.table_checksum != current {
        return Err(integrity(
            &meta_file,
            0,
            format!(
                "polynomial-table checksum {} does not match current {current}",
                meta.table_checksum
            ),
        ));
    }
    let group = Torsion::parse(&meta.group)?;
    let body = std::fs::read_to_string(path)?;
    let mut curves = Vec::new();
    for (idx, line) in body.lines().enumerate() {
        let lineno = idx + 1;
        let mut parts = line.split_whitespace();
        let a: i64 = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| integrity(path, lineno, "bad A field"))?;
        let b: i64 = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| integrity(path, lineno, "bad B field"))?;
        if parts.next().is_some() {
            return Err(integrity(path, lineno, "trailing fields"));
        }
        if let Some(&last) = curves.last() {
            if last >= (a, b) {
                return Err(integrity(path, lineno, "records out of order"));
            }
        }
        curves.push((a, b));
    }
    if curves.len() as u64 != meta.count {
        return Err(integrity(
            path,
            curves.len(),
            format!("sidecar count {} != {} records", meta.count, curves.len()),
        ));
    }
    Ok(Census {
        group,
        x: meta.x as u128,
        curves,
        multiplicities: meta.multiplicities,
        singular_images: meta.singular_images,
    })
}

/// Persist traces of every census curve at the given primes as sorted
/// "A B p trace code" lines under a checksummed header.
pub fn save_trace_cache(census: &Census, primes: &[u64], path: &Path) -> Result<()> {
    let mut primes = primes.to_vec();
    primes.sort_unstable();
    primes.dedup();
    let mut tables = BTreeMap::new();
    for &p in &primes {
        tables.insert(p, trace_table(p)?);
    }
    let mut body = format!("# torsion-trace-cache {VERSION} {:016x}\n", table_checksum());
    for &(a, b) in &census.curves {
        for &p in &primes {
            let (ar, br) = (a.rem_euclid(p as i64) as u64, b.rem_euclid(p as i64) as u64);
            let trace = tables[&p][(ar * p + br) as usize];
            let code = reduction_type(a, b, p)?.code();
            body.push_str(&format!("{a} {b} {p} {trace} {code}\n"));
        }
    }
    std::fs::write(path, body)?;
    Ok(())
}

/// Load a trace cache, verifying header, order, and field syntax.
pub fn load_trace_cache(path: &Path) -> Result<HashMap<(i64, i64, u64), (i64, Reduction)>> {
    let body = std::fs::read_to_string(path)?;
    let mut lines = body.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| integrity(path, 1, "empty cache"))?;
    let expected = format!("# torsion-trace-cache {VERSION} {:016x}", table_checksum());
    if header != expected {
        return Err(integrity(path, 1, format!("bad header {header:?}")));
    }
    let mut map = HashMap::new();
    let mut prev: Option<(i64, i64, u64)> = None;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(integrity(path, lineno, "expected 5 fields"));
        }
        let parse_err = |what: &str| integrity(path, lineno, format!("bad {what} field"));
        let a: i64 = fields[0].parse().map_err(|_| parse_err("A"))?;
        let b: i64 = fields[1].parse().map_err(|_| parse_err("B"))?;
        let p: u64 = fields[2].parse().map_err(|_| parse_err("p"))?;
        let t: i64 = fields[3].parse().map_err(|_| parse_err("trace"))?;
        let code = fields[4]
            .chars()
            .next()
            .filter(|_| fields[4].len() == 1)
            .ok_or_else(|| parse_err("reduction"))?;
        let red = Reduction::from_code(code)
            .map_err(|_| integrity(path, lineno, format!("bad reduction code {code:?}")))?;
        let key = (a, b, p);
        if let Some(prev) = prev {
            if prev >= key {
                return Err(integrity(path, lineno, "records out of order"));
            }
        }
        prev = Some(key);
        map.insert(key, (t, red));
    }
    Ok(map)
}

/// TSV rendering of the nonzero rows of a weight table: "G p A B weight".
pub fn weight_table_tsv(g: Torsion, p: u64) -> Result<String> {
    let table = crate::weights::weight_table(g, p)?;
    let mut out = String::from("G\tp\tA\tB\tweight\n");
    for a in 0..p {
        for b in 0..p {
            let w = table[(a * p + b) as usize];
            if w != 0 {
                out.push_str(&format!("{}\t{p}\t{a}\t{b}\t{w}\n", g.label()));
            }
        }
    }
    Ok(out)
}

/// TSV rendering of a class-number row: "G p a H".
pub fn class_rows_tsv(g: Torsion, p: u64) -> Result<String> {
    let h = class_numbers(g, p)?;
    let mut out = String::from("G\tp\ta\tH\n");
    for (a, count) in h {
        out.push_str(&format!("{}\t{p}\t{a}\t{count}\n", g.label()));
    }
    Ok(out)
}

/// Format with 12 significant digits, the CLI-wide float convention.
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

/// TSV rendering of local tallies with predictions:
/// "G X p condition count predicted".
pub fn tally_tsv(census: &Census, primes: &[u64]) -> Result<String> {
    let mut out = String::from("G\tX\tp\tcondition\tcount\tpredicted\n");
    let conditions = [
        LocalCondition::Good,
        LocalCondition::Multiplicative,
        LocalCondition::Split,
        LocalCondition::Nonsplit,
        LocalCondition::Additive,
        LocalCondition::Semistable,
    ];
    for &p in primes {
        let tally = local_tally(census, p)?;
        for lc in conditions {
            let predicted = local_density_prediction(census.group, p, lc)?;
            out.push_str(&format!(
                "{}\t{}\t{p}\t{}\t{}\t{}\n",
                census.group.label(),
                census.x,
                lc.label(),
                tally.count(lc),
                sig12(predicted),
            ));
        }
        for (&a, &count) in &tally.traces {
            let predicted = local_density_prediction(census.group, p, LocalCondition::Trace(a))?;
            out.push_str(&format!(
                "{}\t{}\t{p}\ttrace={a}\t{count}\t{}\n",
                census.group.label(),
                census.x,
                sig12(predicted),
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::group_structure;
    use crate::curve::torsion_embeds;

    #[test]
    fn heights_and_minimality() {
        assert_eq!(height(-2, 3), 9);
        assert_eq!(height(-3, 3), 27);
        assert!(is_minimal_model(-16, 32));
        assert!(!is_minimal_model(16, 64));
        assert!(!is_minimal_model(0, 64));
        assert!(is_minimal_model(0, 32));
        assert_eq!(minimal_twist(16, 64), (1, 1));
        assert_eq!(minimal_twist(0, 64), (0, 1));
    }

    #[test]
    fn trivial_census_small() {
        let census = enumerate(Torsion::Trivial, 100).unwrap();
        // |A| <= 4, |B| <= 10: 9 * 21 = 189 pairs, minus singular pairs
        // (0,0), (-3,2), (-3,-2) and no non-minimal ones.
        assert_eq!(census.curves.len(), 186);
        assert_eq!(census.singular_images, 3);
    }

    #[test]
    fn z2_census_frozen_counts() {
        for (x, expected) in [(1_000u128, 118), (10_000, 364), (1_000_000, 3832)] {
            let census = enumerate(Torsion::Z2, x).unwrap();
            assert_eq!(census.curves.len(), expected, "X = {x}");
            for &(a, b) in &census.curves {
                assert!(height(a, b) <= x);
                assert!(is_minimal_model(a, b));
            }
        }
    }

    #[test]
    fn z5_census_is_a_single_curve_at_1e9() {
        let census = enumerate(Torsion::Z5, 1_000_000_000).unwrap();
        assert_eq!(census.curves, vec![(-432, 8208)]);
        let census10 = enumerate(Torsion::Z5, 10_000_000_000).unwrap();
        assert_eq!(census10.curves.len(), 2);
    }

    fn is_square(n: i64) -> Option<i64> {
        if n < 0 {
            return None;
        }
        let r = (n as f64).sqrt().round() as i64;
        for c in [r - 1, r, r + 1] {
            if c >= 0 && c * c == n {
                return Some(c);
            }
        }
        None
    }

    fn two_torsion_roots(a: i64, b: i64, bound: i64) -> Vec<i64> {
        (-bound..=bound)
            .filter(|&r| r * r * r + a * r + b == 0)
            .collect()
    }

    fn has_rational_two_torsion(a: i64, b: i64, bound: i64) -> bool {
        !two_torsion_roots(a, b, bound).is_empty()
    }

    fn has_full_two_torsion(a: i64, b: i64, bound: i64) -> bool {
        two_torsion_roots(a, b, bound).len() == 3
    }

    fn has_rational_three_torsion(a: i64, b: i64) -> bool {
        // Integer roots of the 3-division polynomial with a positive
        // square ordinate (Nagell-Lutz gives integrality).
        let bound = 1 + (6 * a.abs()).max(12 * b.abs()).max(a * a) / 3;
        for x in -bound..=bound {
            if 3 * x.pow(4) + 6 * a * x * x + 12 * b * x - a * a == 0 {
                let rhs = x.pow(3) + a * x + b;
                if rhs > 0 && is_square(rhs).is_some() {
                    return true;
                }
            }
        }
        false
    }

    fn has_rational_four_torsion(a: i64, b: i64, bound: i64) -> bool {
        for x1 in -bound..=bound {
            let Some(x2) = is_square(3 * x1 * x1 - 2 * a) else {
                continue;
            };
            for s in [x2, -x2] {
                if (3 * x1 - s).rem_euclid(2) != 0 {
                    continue;
                }
                let Some(x3) = is_square((3 * x1 - s) / 2) else {
                    continue;
                };
                if x3 == 0 {
                    continue;
                }
                let (fv, gv) = fg(Torsion::Z4, x1, x3);
                if fv == BigInt::from(a) && gv == BigInt::from(b) {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn small_group_censuses_match_direct_torsion_search() {
        let x = 20_000u128;
        let all = enumerate(Torsion::Trivial, x).unwrap();
        let bound = 2 * integer_root(x, 6) as i64 + 2;
        for (g, test) in [
            (
                Torsion::Z2,
                Box::new(|a, b| has_rational_two_torsion(a, b, bound))
                    as Box<dyn Fn(i64, i64) -> bool>,
            ),
            (Torsion::Z3, Box::new(has_rational_three_torsion)),
            (
                Torsion::Z4,
                Box::new(move |a, b| has_rational_four_torsion(a, b, 60)),
            ),
            (
                Torsion::Z2x2,
                Box::new(move |a, b| has_full_two_torsion(a, b, bound)),
            ),
        ] {
            let direct: Vec<(i64, i64)> = all
                .curves
                .iter()
                .copied()
                .filter(|&(a, b)| test(a, b))
                .collect();
            let parametrized = enumerate(g, x).unwrap();
            assert_eq!(parametrized.curves, direct, "{g} at X = {x}");
        }
    }

    #[test]
    fn multiplicity_concentrates_on_the_generic_preimage_count() {
        for (g, x) in [
            (Torsion::Z3, 10_000_000u128),
            (Torsion::Z2x2, 10_000_000),
            (Torsion::Z6, 1_000_000_000),
        ] {
            let census = enumerate(g, x).unwrap();
            let total: u64 = census.multiplicities.values().sum();
            let generic = census
                .multiplicities
                .get(&g.multiplicity())
                .copied()
                .unwrap_or(0);
            assert!(
                generic * 5 >= total * 4,
                "{g}: histogram {:?}",
                census.multiplicities
            );
        }
    }

    #[test]
    fn census_curves_embed_their_group_mod_good_primes() {
        let census = enumerate(Torsion::Z6, 100_000_000).unwrap();
        assert!(!census.curves.is_empty());
        for &(a, b) in census.curves.iter().take(40) {
            for p in [11u64, 13, 17] {
                if reduction_type(a, b, p).unwrap() == Reduction::Good {
                    let structure = group_structure(a, b, p).unwrap();
                    assert!(
                        torsion_embeds(Torsion::Z6, structure),
                        "({a}, {b}) mod {p}: {structure:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn region_areas_match_quadrature_oracle() {
        let cases = [
            (Torsion::Z2, 4.0034),
            (Torsion::Z3, 1.6474),
            (Torsion::Z2x2, 7.2552),
            (Torsion::Z5, 0.46402),
        ];
        for (g, expected) in cases {
            let area = region_area(g, 1e-4).unwrap();
            assert!(
                (area - expected).abs() < 3e-3,
                "{g}: area {area} vs {expected}"
            );
        }
    }

    #[test]
    fn counting_constants_match_oracle_values() {
        let cases = [
            (Torsion::Z2, 3.935176),
            (Torsion::Z3, 0.761050),
            (Torsion::Z2x2, 0.558615),
            (Torsion::Z5, 0.070523),
        ];
        for (g, expected) in cases {
            let c = c_constant(g, 1e-4).unwrap();
            assert!(
                (c - expected).abs() / expected < 5e-3,
                "{g}: c {c} vs {expected}"
            );
        }
        assert!((c_constant(Torsion::Trivial, 1e-4).unwrap() - 4.0 / zeta_value(10)).abs() < 1e-12);
    }

    #[test]
    fn defect_moment_of_z6_is_six() {
        assert!((defect_moment(Torsion::Z6).unwrap() - 6.0).abs() < 1e-12);
        assert!((defect_moment(Torsion::Z5).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn density_predictions_partition() {
        use LocalCondition::*;
        for g in [Torsion::Z2, Torsion::Z3, Torsion::Z4, Torsion::Z2x2, Torsion::Trivial] {
            for p in [5, 7, 13] {
                let total = local_density_prediction(g, p, Good).unwrap()
                    + local_density_prediction(g, p, Multiplicative).unwrap()
                    + local_density_prediction(g, p, Additive).unwrap();
                assert!((total - 1.0).abs() < 1e-12, "{g} at {p}");
                let semi = local_density_prediction(g, p, Semistable).unwrap();
                let add = local_density_prediction(g, p, Additive).unwrap();
                assert!((semi + add - 1.0).abs() < 1e-12);
                let split = local_density_prediction(g, p, Split).unwrap();
                let nonsplit = local_density_prediction(g, p, Nonsplit).unwrap();
                let mult = local_density_prediction(g, p, Multiplicative).unwrap();
                assert!((split + nonsplit - mult).abs() < 1e-12);
            }
        }
        for g in [Torsion::Z5, Torsion::Z6, Torsion::Z2x4] {
            for p in [7, 11, 13] {
                let good = local_density_prediction(g, p, Good).unwrap();
                let mult = local_density_prediction(g, p, Multiplicative).unwrap();
                assert!((good + mult - 1.0).abs() < 1e-12, "{g} at {p}");
                assert_eq!(local_density_prediction(g, p, Additive).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn tally_partition_is_exact() {
        let census = enumerate(Torsion::Z2, 1_000_000).unwrap();
        for p in [5u64, 7, 13] {
            let tally = local_tally(&census, p).unwrap();
            assert_eq!(
                tally.good + tally.split + tally.nonsplit + tally.additive,
                tally.total
            );
            assert_eq!(tally.traces.values().sum::<u64>(), tally.good);
        }
    }

    #[test]
    fn favorable_prime_reads_cusp_counts_exactly() {
        let p = favorable_prime(3000).expect("a favorable prime below 3000");
        for g in crate::groups::NONTRIVIAL {
            let mass = crate::weights::singular_weight_sum(g, p).unwrap();
            assert_eq!(
                mass - 1,
                g.cusp_count() * (p - 1),
                "{g} at favorable p = {p}"
            );
        }
        // The trivial group: one cusp, p - 1 multiplicative models.
        assert_eq!(Torsion::Trivial.cusp_count(), 1);
    }

    #[test]
    fn census_persistence_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let census = enumerate(Torsion::Z2, 10_000).unwrap();
        let path = dir.path().join("census.txt");
        save_census(&census, &path).unwrap();
        let loaded = load_census(&path).unwrap();
        assert_eq!(loaded.curves, census.curves);
        assert_eq!(loaded.x, census.x);
        assert_eq!(loaded.multiplicities, census.multiplicities);

        // Corrupt one record: the loader reports the file and line.
        let mut body = std::fs::read_to_string(&path).unwrap();
        body = body.replacen("\n", " oops\n", 1);
        std::fs::write(&path, body).unwrap();
        match load_census(&path) {
            Err(Error::Integrity { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected integrity error, got {other:?}"),
        }
    }

    #[test]
    fn trace_cache_round_trips_and_detects_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let census = enumerate(Torsion::Z2, 1_000).unwrap();
        let path = dir.path().join("traces.txt");
        save_trace_cache(&census, &[5, 7], &path).unwrap();
        let cache = load_trace_cache(&path).unwrap();
        assert_eq!(cache.len(), 2 * census.curves.len());
        let (a, b) = census.curves[0];
        let (t, red) = cache[&(a, b, 5)];
        assert_eq!(red, reduction_type(a, b, 5).unwrap());
        if red == Reduction::Good {
            assert_eq!(t, crate::curve::trace(a, b, 5).unwrap());
        }

        let mut lines: Vec<String> =
            std::fs::read_to_string(&path).unwrap().lines().map(String::from).collect();
        lines.swap(1, 2);
        std::fs::write(&path, lines.join("\n") + "\n").unwrap();
        match load_trace_cache(&path) {
            Err(Error::Integrity { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected order violation, got {other:?}"),
        }
    }

    #[test]
    fn tsv_exports_are_well_formed() {
        let tsv = weight_table_tsv(Torsion::Z2, 5).unwrap();
        let weight_sum: u64 = tsv
            .lines()
            .skip(1)
            .map(|l| l.rsplit('\t').next().unwrap().parse::<u64>().unwrap())
            .sum();
        assert_eq!(weight_sum, 25);
        let rows = class_rows_tsv(Torsion::Z2, 5).unwrap();
        assert!(rows.contains("2\t5\t0\t4"));
        let census = enumerate(Torsion::Z2, 10_000).unwrap();
        let tally = tally_tsv(&census, &[5]).unwrap();
        assert!(tally.lines().count() > 6);
        assert!(tally.contains("semistable"));
    }
}
