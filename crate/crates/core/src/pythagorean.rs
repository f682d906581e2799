//! Primitive Pythagorean triplets, the ratios they induce, and Hinson's
//! counting function.
//!
//! A Pythagorean ratio is `β/α` for a triplet `(α, β, γ)`, together with the
//! zero ratio. In canonical form `b/a` a nonzero rational is a ratio exactly
//! when `a² + b²` is a perfect square, which is the membership test used
//! throughout; pools built from bounded hypotenuses are only needed where
//! enumeration is required.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::number::{isqrt, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PythagoreanError {
    #[error("{0} is not a Pythagorean ratio")]
    NotARatio(Rat),
    #[error("nu is defined on (0, 1); got {p}/{q}")]
    DomainError { p: i64, q: i64 },
    #[error("empty interval ({lo}, {hi})")]
    EmptyInterval { lo: String, hi: String },
}

/// An integer Pythagorean triplet `alpha² + beta² = gamma²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTriplet")]
pub struct Triplet {
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
    #[serde(skip)]
    pub primitive: bool,
}

impl Triplet {
    pub fn new(alpha: i64, beta: i64, gamma: i64) -> Option<Self> {
        let (a, b, c) = (alpha as i128, beta as i128, gamma as i128);
        if alpha == 0 || beta == 0 || gamma <= 0 || a * a + b * b != c * c {
            return None;
        }
        let primitive = alpha.gcd(&beta) == 1 && beta.gcd(&gamma) == 1 && alpha.gcd(&gamma) == 1;
        Some(Triplet { alpha, beta, gamma, primitive })
    }

    /// `β/α`.
    pub fn ratio(&self) -> Rat {
        Rat::new(self.beta, self.alpha).expect("alpha is nonzero")
    }
}

#[derive(Deserialize)]
struct RawTriplet {
    alpha: i64,
    beta: i64,
    gamma: i64,
}

impl TryFrom<RawTriplet> for Triplet {
    type Error = String;

    fn try_from(t: RawTriplet) -> Result<Self, Self::Error> {
        Triplet::new(t.alpha, t.beta, t.gamma)
            .ok_or_else(|| format!("({},{},{}) is not a triplet", t.alpha, t.beta, t.gamma))
    }
}

impl fmt::Display for Triplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.alpha, self.beta, self.gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioSign {
    Positive,
    Negative,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioOrdering {
    /// `|ψ| > 1`, i.e. `|α| < |β|`.
    NaturallyOrdered,
    /// `0 < |ψ| < 1`.
    OppositelyOrdered,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RatioClass {
    pub sign: RatioSign,
    pub ordering: RatioOrdering,
}

impl fmt::Display for RatioClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.sign {
            RatioSign::Positive => "positive",
            RatioSign::Negative => "negative",
            RatioSign::Zero => "zero",
        };
        let ordering = match self.ordering {
            RatioOrdering::NaturallyOrdered => "naturally_ordered",
            RatioOrdering::OppositelyOrdered => "oppositely_ordered",
            RatioOrdering::None => "none",
        };
        write!(f, "{sign}/{ordering}")
    }
}

/// All-positive, naturally ordered primitive triplets with `γ ≤ gamma_bound`,
/// sorted by `(γ, α)`.
///
/// Euclid's parametrization `(m² − n², 2mn, m² + n²)` over coprime `m > n > 0`
/// of opposite parity yields every primitive triplet exactly once; the legs
/// are swapped where needed so that `α < β`.
pub fn primitive_triplets(gamma_bound: u64) -> Vec<Triplet> {
    let bound = gamma_bound as i64;
    let mut out = Vec::new();
    let mut m: i64 = 2;
    while m * m < bound {
        // n has opposite parity to m.
        let mut n = if m % 2 == 0 { 1 } else { 2 };
        while n < m && m * m + n * n <= bound {
            if m.gcd(&n) == 1 {
                let (p, q) = (m * m - n * n, 2 * m * n);
                out.push(Triplet { alpha: p.min(q), beta: p.max(q), gamma: m * m + n * n, primitive: true });
            }
            n += 2;
        }
        m += 1;
    }
    out.sort_by_key(|t| (t.gamma, t.alpha));
    out
}

/// The four signed and ordered variants `±β/α`, `±α/β`.
pub fn ratios_of(t: &Triplet) -> [Rat; 4] {
    let q = t.ratio();
    let inv = q.recip().expect("beta is nonzero");
    [q.clone(), -q, inv.clone(), -inv]
}

/// Deduplicated, sorted ratios of all primitive triplets with `γ ≤ Γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioPool {
    pub gamma_bound: u64,
    pub ratios: Vec<Rat>,
    pub include_zero: bool,
    /// Number of primitive all-positive triplets with `γ ≤ Γ`.
    pub primitive_count: usize,
}

impl RatioPool {
    pub fn len(&self) -> usize {
        self.ratios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratios.is_empty()
    }

    pub fn contains(&self, q: &Rat) -> bool {
        self.ratios.binary_search(q).is_ok()
    }

    pub fn index_of(&self, q: &Rat) -> Option<usize> {
        self.ratios.binary_search(q).ok()
    }
}

pub fn build_pool(gamma_bound: u64, include_zero: bool) -> RatioPool {
    let triplets = primitive_triplets(gamma_bound);
    let mut ratios: Vec<Rat> = triplets.iter().flat_map(ratios_of).collect();
    if include_zero {
        ratios.push(Rat::zero());
    }
    ratios.sort();
    ratios.dedup();
    RatioPool { gamma_bound, ratios, include_zero, primitive_count: triplets.len() }
}

/// `a² + b²` for canonical `q = b/a`.
fn leg_square_sum(q: &Rat) -> BigInt {
    q.numer() * q.numer() + q.denom() * q.denom()
}

pub fn is_pythagorean_ratio(q: &Rat) -> bool {
    q.is_zero() || matches!(isqrt(&leg_square_sum(q)), Ok((_, true)))
}

/// The hypotenuse of the primitive triplet realizing `q`.
pub fn min_hypotenuse(q: &Rat) -> Result<BigInt, PythagoreanError> {
    if q.is_zero() {
        return Err(PythagoreanError::NotARatio(q.clone()));
    }
    match isqrt(&leg_square_sum(q)) {
        Ok((root, true)) => Ok(root),
        _ => Err(PythagoreanError::NotARatio(q.clone())),
    }
}

pub fn classify_ratio(q: &Rat) -> Result<RatioClass, PythagoreanError> {
    if !is_pythagorean_ratio(q) {
        return Err(PythagoreanError::NotARatio(q.clone()));
    }
    if q.is_zero() {
        return Ok(RatioClass { sign: RatioSign::Zero, ordering: RatioOrdering::None });
    }
    let sign = if q.is_positive() { RatioSign::Positive } else { RatioSign::Negative };
    // |q| = 1 would need a² + a² to be a square, which never happens.
    let ordering = if q.numer().magnitude() > q.denom().magnitude() {
        RatioOrdering::NaturallyOrdered
    } else {
        RatioOrdering::OppositelyOrdered
    };
    Ok(RatioClass { sign, ordering })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NuValue {
    pub value: u8,
    /// `(α, α + p, α + q)` when `value == 1`.
    pub triplet: Option<Triplet>,
}

/// Hinson's counting function on `p/q ∈ (0, 1)`.
///
/// `α² + (α + p)² = (α + q)²` has the positive root
/// `α = q − p + √(2q(q − p))`, so a solution exists exactly when
/// `2q(q − p)` is a perfect square.
pub fn nu(p: i64, q: i64) -> Result<NuValue, PythagoreanError> {
    if p <= 0 || q <= p {
        return Err(PythagoreanError::DomainError { p, q });
    }
    let disc = BigInt::from(2) * q * (q - p);
    let (root, exact) = isqrt(&disc).expect("non-negative");
    if !exact {
        return Ok(NuValue { value: 0, triplet: None });
    }
    let root = i64::try_from(root).expect("root of an i64-sized product fits");
    let alpha = q - p + root;
    let triplet = Triplet::new(alpha, alpha + p, alpha + q).expect("closed form solves the equation");
    Ok(NuValue { value: 1, triplet: Some(triplet) })
}

/// Finds ratios inside open intervals, scanning triplets by hypotenuse.
pub struct IntervalProbe {
    triplets: Vec<Triplet>,
}

impl IntervalProbe {
    pub fn new(gamma_cap: u64) -> Self {
        IntervalProbe { triplets: primitive_triplets(gamma_cap) }
    }

    /// The ratio in `(lo, hi)` of smallest hypotenuse (zero counts as the
    /// smallest), ties broken by value. `None` if no ratio under the cap fits.
    pub fn find(&self, lo: &Rat, hi: &Rat) -> Result<Option<Rat>, PythagoreanError> {
        if lo >= hi {
            return Err(PythagoreanError::EmptyInterval { lo: lo.to_string(), hi: hi.to_string() });
        }
        let zero = Rat::zero();
        if lo < &zero && &zero < hi {
            return Ok(Some(zero));
        }
        let mut i = 0;
        while i < self.triplets.len() {
            let gamma = self.triplets[i].gamma;
            let mut hits: Vec<Rat> = Vec::new();
            while i < self.triplets.len() && self.triplets[i].gamma == gamma {
                hits.extend(ratios_of(&self.triplets[i]).into_iter().filter(|r| lo < r && r < hi));
                i += 1;
            }
            if let Some(best) = hits.into_iter().min() {
                return Ok(Some(best));
            }
        }
        Ok(None)
    }
}

pub fn find_ratio_in_interval(lo: &Rat, hi: &Rat, gamma_cap: u64) -> Result<Option<Rat>, PythagoreanError> {
    IntervalProbe::new(gamma_cap).find(lo, hi)
}
