//! The fifteen torsion groups of elliptic curves over Q and their invariants.
//!
//! A curve can have torsion subgroup Z/nZ for n in {1,...,10,12} or
//! Z/2Z x Z/2mZ for m in {1,2,3,4}. Each group G carries:
//! - d(G): the height exponent, |E_G(X)| ~ c(G) X^(1/d(G)); d = 6/5 for the
//!   unrestricted family and an integer in {2,...,24} otherwise,
//! - e(G): the exponent of the secondary error term in the counting,
//! - r(G): the generic number of parameter pairs (a, b) mapping to one
//!   curve under Phi_G (phi(n) for Z/nZ with n >= 5),
//! - epsilon(G): the l.c.m. of the possible defects e with e^4 | f_G and
//!   e^6 | g_G at coprime arguments,
//! - the weighted homogeneity (m, n) of (f_G, g_G), with f homogeneous of
//!   weighted degree 2d/3 and g of weighted degree d in the large-group
//!   case.
//!
//! "Small" groups (trivial, Z/2, Z/3, Z/4, 2x2) are counted through a
//! Mobius sieve with zeta(12/d) corrections; "large" groups (everything
//! with d >= 6, equivalently a point of order 5 or more up to the 2x4
//! case) are counted through coprime parameters and defect classes.

use crate::error::Error;
use crate::Result;

/// One of the fifteen torsion groups allowed over Q, plus the trivial group
/// as the unrestricted baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Torsion {
    Trivial,
    Z2,
    Z3,
    Z4,
    Z5,
    Z6,
    Z7,
    Z8,
    Z9,
    Z10,
    Z12,
    Z2x2,
    Z2x4,
    Z2x6,
    Z2x8,
}

use Torsion::*;

/// All fifteen groups, trivial first, cyclic in order, then the 2 x 2m
/// families.
pub const ALL: [Torsion; 15] = [
    Trivial, Z2, Z3, Z4, Z5, Z6, Z7, Z8, Z9, Z10, Z12, Z2x2, Z2x4, Z2x6, Z2x8,
];

/// The fourteen nontrivial groups.
pub const NONTRIVIAL: [Torsion; 14] = [
    Z2, Z3, Z4, Z5, Z6, Z7, Z8, Z9, Z10, Z12, Z2x2, Z2x4, Z2x6, Z2x8,
];

/// The ten large groups (d >= 6), counted through coprime parameters.
pub const LARGE: [Torsion; 10] = [Z5, Z6, Z7, Z8, Z9, Z10, Z12, Z2x4, Z2x6, Z2x8];

impl Torsion {
    /// Short label used in file formats and on the command line: "0", "2",
    /// ..., "12", "2x2", "2x4", "2x6", "2x8".
    pub fn label(self) -> &'static str {
        match self {
            Trivial => "0",
            Z2 => "2",
            Z3 => "3",
            Z4 => "4",
            Z5 => "5",
            Z6 => "6",
            Z7 => "7",
            Z8 => "8",
            Z9 => "9",
            Z10 => "10",
            Z12 => "12",
            Z2x2 => "2x2",
            Z2x4 => "2x4",
            Z2x6 => "2x6",
            Z2x8 => "2x8",
        }
    }

    /// Parse a label as produced by [`Torsion::label`].
    pub fn parse(s: &str) -> Result<Torsion> {
        for g in ALL {
            if g.label() == s {
                return Ok(g);
            }
        }
        Err(Error::Parse(format!(
            "unknown torsion group {s:?}; expected one of 0, 2, 3, ..., 12, 2x2, 2x4, 2x6, 2x8"
        )))
    }

    /// Invariant factors (n1, n2) with the group isomorphic to
    /// Z/n1 x Z/n2, n2 | n1.
    pub fn invariant_factors(self) -> (u64, u64) {
        match self {
            Trivial => (1, 1),
            Z2 => (2, 1),
            Z3 => (3, 1),
            Z4 => (4, 1),
            Z5 => (5, 1),
            Z6 => (6, 1),
            Z7 => (7, 1),
            Z8 => (8, 1),
            Z9 => (9, 1),
            Z10 => (10, 1),
            Z12 => (12, 1),
            Z2x2 => (2, 2),
            Z2x4 => (4, 2),
            Z2x6 => (6, 2),
            Z2x8 => (8, 2),
        }
    }

    /// Order of the group.
    pub fn order(self) -> u64 {
        let (n1, n2) = self.invariant_factors();
        n1 * n2
    }

    /// Height exponent d(G) as (numerator, denominator): the census grows
    /// like X^(1/d). Only the trivial group has a fractional d, 6/5.
    pub fn d_ratio(self) -> (u64, u64) {
        match self {
            Trivial => (6, 5),
            Z2 => (2, 1),
            Z3 => (3, 1),
            Z4 => (4, 1),
            Z5 => (6, 1),
            Z6 => (6, 1),
            Z7 => (12, 1),
            Z8 => (12, 1),
            Z9 => (18, 1),
            Z10 => (18, 1),
            Z12 => (24, 1),
            Z2x2 => (3, 1),
            Z2x4 => (6, 1),
            Z2x6 => (12, 1),
            Z2x8 => (24, 1),
        }
    }

    /// d(G) as a float, for exponent arithmetic.
    pub fn d(self) -> f64 {
        let (n, d) = self.d_ratio();
        n as f64 / d as f64
    }

    /// Integer d(G) for the nontrivial groups.
    pub fn d_int(self) -> u64 {
        let (n, d) = self.d_ratio();
        assert_eq!(d, 1, "d({}) is not an integer", self.label());
        n
    }

    /// The zeta exponent 12/d(G) of the Mobius correction in c(G), defined
    /// for the small groups where it is an integer >= 2: 10 for the trivial
    /// group, then 6, 4, 3, 4 for Z/2, Z/3, Z/4, 2x2.
    pub fn zeta_exponent(self) -> Result<u32> {
        match self {
            Trivial => Ok(10),
            Z2 => Ok(6),
            Z3 => Ok(4),
            Z4 => Ok(3),
            Z2x2 => Ok(4),
            _ => Err(Error::UnsupportedGroup {
                group: self.label(),
                operation: "zeta_exponent (large groups use zeta(2) over coprime parameters)",
            }),
        }
    }

    /// Error-term exponent e(G): the secondary term in the counting is
    /// O(X^(1/e)). Equal to 2d(G) for the large groups.
    pub fn e_exponent(self) -> u64 {
        match self {
            Trivial => 2,
            Z2 => 3,
            Z3 => 4,
            Z4 => 6,
            Z2x2 => 6,
            g => 2 * g.d_int(),
        }
    }

    /// True for the ten large groups, counted through coprime parameters
    /// with defect corrections (d >= 6).
    pub fn is_large(self) -> bool {
        LARGE.contains(&self)
    }

    /// Whether the mod-p theory applies at p: the parametrization
    /// degenerates when p divides a critical constant of Phi_G (p = 5 for
    /// Z/5 and Z/10, p = 7 for Z/7, p in {5, 7} for 2x8). All primes
    /// below 5 are always excluded.
    pub fn admissible_prime(self, p: u64) -> bool {
        if p < 5 {
            return false;
        }
        match self {
            Z5 | Z10 => p != 5,
            Z7 => p != 7,
            Z2x8 => p != 5 && p != 7,
            _ => true,
        }
    }

    /// Generic multiplicity r(G): the number of parameter pairs mapping to
    /// one census curve. phi(n) for cyclic groups of order n >= 5; measured
    /// directly on the census for every group.
    pub fn multiplicity(self) -> u64 {
        match self {
            Trivial => 1,
            Z2 => 1,
            Z3 => 2,
            Z4 => 2,
            Z5 => 4,
            Z6 => 2,
            Z7 => 6,
            Z8 => 4,
            Z9 => 6,
            Z10 => 4,
            Z12 => 4,
            Z2x2 => 6,
            Z2x4 => 8,
            Z2x6 => 12,
            Z2x8 => 16,
        }
    }

    /// Weighted homogeneity (m, n) of (f_G, g_G): f(t^m a, t^n b) =
    /// t^(4mn/gcd-ish) scaling. For the small nontrivial groups the weights
    /// are genuinely unequal; every large group is plainly homogeneous
    /// (m = n = 1).
    pub fn weights(self) -> (u32, u32) {
        match self {
            Z2 => (4, 2),
            Z3 => (1, 3),
            Z4 => (2, 1),
            _ => (1, 1),
        }
    }

    /// Scaling exponents (u, v) of the census box: parameters scale as
    /// a ~ X^u, b ~ X^v, and u + v = 1/d(G).
    pub fn box_exponents(self) -> (f64, f64) {
        match self {
            Trivial => (1.0 / 3.0, 1.0 / 2.0),
            Z2 => (1.0 / 3.0, 1.0 / 6.0),
            Z3 => (1.0 / 12.0, 1.0 / 4.0),
            Z4 => (1.0 / 6.0, 1.0 / 12.0),
            Z2x2 => (1.0 / 6.0, 1.0 / 6.0),
            g => {
                let d = g.d_int() as f64;
                (1.0 / (2.0 * d), 1.0 / (2.0 * d))
            }
        }
    }

    /// l.c.m. epsilon(G) of the defects that occur at coprime parameters.
    /// 1 for Z/5 (no defect), 6 for the groups classified by congruences
    /// mod 2 and 3, and 48 / 64 for 2x6 / 2x8 whose defects reach 16 and
    /// 64.
    pub fn epsilon_max(self) -> Result<u64> {
        match self {
            Z5 => Ok(1),
            Z6 | Z12 => Ok(6),
            Z7 | Z9 => Ok(3),
            Z8 | Z10 | Z2x4 => Ok(2),
            Z2x6 => Ok(48),
            Z2x8 => Ok(64),
            _ => Err(Error::UnsupportedGroup {
                group: self.label(),
                operation: "epsilon_max (defects only arise for the large groups)",
            }),
        }
    }

    /// Modulus M such that the defect of coprime (a, b) depends only on
    /// (a, b) mod M.
    pub fn defect_modulus(self) -> Result<u64> {
        match self {
            Z5 => Ok(1),
            Z6 | Z12 => Ok(6),
            Z7 | Z9 => Ok(3),
            Z8 | Z10 | Z2x4 => Ok(2),
            Z2x6 => Ok(12),
            Z2x8 => Ok(4),
            _ => Err(Error::UnsupportedGroup {
                group: self.label(),
                operation: "defect_modulus",
            }),
        }
    }

    /// Number of cusps of the modular curve underlying the parametrization:
    /// X_1(N) for cyclic groups, the fiber product with X(2) for 2xN. The
    /// multiplicative weight mass at a favorable prime is
    /// cusp_count * (p - 1).
    pub fn cusp_count(self) -> u64 {
        match self {
            Trivial => 1,
            Z2 | Z3 => 2,
            Z4 | Z2x2 => 3,
            Z5 | Z6 | Z2x4 => 4,
            Z7 | Z8 | Z2x6 => 6,
            Z9 | Z10 => 8,
            Z12 | Z2x8 => 10,
        }
    }
}

impl std::fmt::Display for Torsion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}
