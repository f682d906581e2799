//! Closed-form construction of rational distance sets on `y = x²`.
//!
//! Two points `(xᵢ, xᵢ²)` and `(xⱼ, xⱼ²)` are at distance
//! `|xⱼ − xᵢ|·√(1 + (xᵢ + xⱼ)²)`, which is rational exactly when the pair sum
//! `xᵢ + xⱼ` is a Pythagorean ratio. An `n`-point set is therefore a vector
//! `x` whose `C(n, 2)` pair sums, listed in lexicographic pair order, are all
//! ratios. The first `n` pair sums (the *head*) determine `x` uniquely for
//! `n ≥ 3`; the remaining ones (the *tail*) are then forced linear
//! combinations of the head and must be checked for membership.
//!
//! Head positions are used positionally throughout: head entry `n` is the
//! pair `(2, 3)`, not `(1, n)`.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::RatMatrix;
use crate::number::{isqrt, Rat};
use crate::pythagorean::is_pythagorean_ratio;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("n must be at least {min}; got {n}")]
    BadN { n: usize, min: usize },
    #[error("expected {expected} values, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("n = 2 needs the free abscissa r")]
    MissingFreeParam,
    #[error("points {i} and {j} coincide")]
    DuplicatePoint { i: usize, j: usize },
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// The 2-combinations of `{1..n}` in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicesSet {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl IndicesSet {
    pub fn new(n: usize) -> Result<Self, SolverError> {
        if n < 2 {
            return Err(SolverError::BadN { n, min: 2 });
        }
        Ok(Self::build(n))
    }

    fn build(n: usize) -> Self {
        let pairs = (1..=n).flat_map(|i| ((i + 1)..=n).map(move |j| (i, j))).collect();
        IndicesSet { n, pairs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 1-based index pairs.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// 0-based position of the pair `(i, j)`, `i < j`, both 1-based.
    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        self.pairs.iter().position(|&p| p == (i, j))
    }
}

pub fn indices_set(n: usize) -> Result<IndicesSet, SolverError> {
    IndicesSet::new(n)
}

/// The `C(n,2) × n` 0/1 matrix with row `i` selecting the columns of pair `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffMatrix {
    n: usize,
    matrix: RatMatrix,
}

impl CoeffMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> u8 {
        u8::from(!self.matrix.get(row, col).is_zero())
    }

    /// The square block formed by the first `n` rows (`n ≥ 3`).
    pub fn top_block(&self) -> RatMatrix {
        self.matrix.top_rows(self.n.min(self.matrix.rows()))
    }

    pub fn top_block_determinant(&self) -> Option<Rat> {
        (self.n >= 3).then(|| self.top_block().determinant())
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
}

pub fn coefficient_matrix(n: usize) -> Result<CoeffMatrix, SolverError> {
    let idx = IndicesSet::new(n)?;
    let mut matrix = RatMatrix::zeros(idx.len(), n);
    for (row, &(i, j)) in idx.pairs().iter().enumerate() {
        matrix.set(row, i - 1, Rat::one());
        matrix.set(row, j - 1, Rat::one());
    }
    Ok(CoeffMatrix { n, matrix })
}

/// Closed-form inverse of the top `n × n` block of the coefficient matrix.
pub fn head_inverse(n: usize) -> Result<RatMatrix, SolverError> {
    if n < 3 {
        return Err(SolverError::BadN { n, min: 3 });
    }
    let half = Rat::new(1, 2).expect("nonzero");
    let mut inv = RatMatrix::zeros(n, n);
    for (row, form) in solution_forms(n).iter().enumerate() {
        for &(col, coeff) in &form.terms {
            inv.set(row, col, &Rat::from(coeff) * &half);
        }
    }
    Ok(inv)
}

/// `(Σ coeff · head[pos]) / divisor` over 0-based head positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub terms: Vec<(usize, i64)>,
    pub divisor: i64,
}

impl LinearForm {
    pub fn eval(&self, head: &[Rat]) -> Rat {
        let sum: Rat = self.terms.iter().map(|&(pos, c)| &Rat::from(c) * &head[pos]).sum();
        if self.divisor == 1 {
            sum
        } else {
            sum.checked_div(&Rat::from(self.divisor)).expect("nonzero divisor")
        }
    }
}

/// `x` as linear forms in the head, for `n ≥ 3`:
/// `x₁ = ½(ψ₁+ψ₂−ψₙ)`, `x₂ = ½(ψ₁−ψ₂+ψₙ)`, `x₃ = ½(−ψ₁+ψ₂+ψₙ)`,
/// `xᵢ = ½(−ψ₁−ψ₂+2ψᵢ₋₁+ψₙ)` for `i ≥ 4`.
pub fn solution_forms(n: usize) -> Vec<LinearForm> {
    assert!(n >= 3);
    let last = n - 1;
    let mut forms = vec![
        LinearForm { terms: vec![(0, 1), (1, 1), (last, -1)], divisor: 2 },
        LinearForm { terms: vec![(0, 1), (1, -1), (last, 1)], divisor: 2 },
        LinearForm { terms: vec![(0, -1), (1, 1), (last, 1)], divisor: 2 },
    ];
    for i in 4..=n {
        forms.push(LinearForm { terms: vec![(0, -1), (1, -1), (i - 2, 2), (last, 1)], divisor: 2 });
    }
    forms
}

/// The dependent entries `ψₙ₊ᵢ`, `1 ≤ i ≤ C(n,2) − n`, as combinations of
/// the head:
///
/// * `ψₙ + ψᵢ₊₂ − ψ₂` for `i ≤ n − 3`,
/// * `ψₙ + ψᵢ₊₅₋ₙ − ψ₁` for `n − 2 ≤ i ≤ 2n − 6`,
/// * `ψₙ + ψₘ₊₂ + ψₖ₊₂ − ψ₁ − ψ₂` otherwise, with `(m, k)` the
///   `(i + 6 − 2n)`-th pair of the `(n − 3)` index set.
pub fn dependent_forms(n: usize) -> Vec<LinearForm> {
    assert!(n >= 3);
    let last = n - 1;
    let tail_len = pair_count(n) - n;
    let inner = if n >= 5 { IndicesSet::build(n - 3).pairs } else { Vec::new() };
    (1..=tail_len)
        .map(|i| {
            // Head entry ψₖ lives at 0-based position k − 1.
            let terms = if i + 3 <= n {
                vec![(last, 1), (i + 1, 1), (1, -1)]
            } else if i + 6 <= 2 * n {
                vec![(last, 1), (i + 4 - n, 1), (0, -1)]
            } else {
                let (m, k) = inner[i + 5 - 2 * n];
                vec![(last, 1), (m + 1, 1), (k + 1, 1), (0, -1), (1, -1)]
            };
            LinearForm { terms, divisor: 1 }
        })
        .collect()
}

/// Solves `x` from the head. For a single-entry head (`n = 2`) the free
/// abscissa `r` gives `(r, ψ₁ − r)`.
pub fn solve_x(head: &[Rat], free: Option<&Rat>) -> Result<Vec<Rat>, SolverError> {
    match head.len() {
        0 => Err(SolverError::BadLength { expected: 3, got: 0 }),
        1 => {
            let r = free.ok_or(SolverError::MissingFreeParam)?;
            Ok(vec![r.clone(), &head[0] - r])
        }
        2 => Err(SolverError::BadLength { expected: 3, got: 2 }),
        n => Ok(solution_forms(n).iter().map(|f| f.eval(head)).collect()),
    }
}

/// A full `C(n,2)` ratio vector in lexicographic pair order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiVector {
    pub n: usize,
    pub entries: Vec<Rat>,
}

impl PsiVector {
    pub fn head(&self) -> &[Rat] {
        &self.entries[..self.n.min(self.entries.len())]
    }

    pub fn tail(&self) -> &[Rat] {
        &self.entries[self.n.min(self.entries.len())..]
    }

    pub fn all_ratios(&self) -> bool {
        self.entries.iter().all(is_pythagorean_ratio)
    }
}

/// Extends the head by its forced dependent entries, without checking them.
pub fn complete_psi(head: &[Rat]) -> Result<PsiVector, SolverError> {
    let n = head.len();
    if n < 3 {
        return Err(SolverError::BadLength { expected: 3, got: n });
    }
    let mut entries = head.to_vec();
    entries.extend(dependent_forms(n).iter().map(|f| f.eval(head)));
    Ok(PsiVector { n, entries })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExistenceReport {
    pub ok: bool,
    pub tail: Vec<Rat>,
    /// 1-based positions in the full vector (`n + i`) whose value is not a ratio.
    pub failing: Vec<usize>,
}

pub fn check_existence(head: &[Rat]) -> Result<ExistenceReport, SolverError> {
    let psi = complete_psi(head)?;
    let n = psi.n;
    let failing: Vec<usize> =
        psi.tail().iter().enumerate().filter(|(_, q)| !is_pythagorean_ratio(q)).map(|(i, _)| n + i + 1).collect();
    Ok(ExistenceReport { ok: failing.is_empty(), tail: psi.tail().to_vec(), failing })
}

pub fn check_distinct(x: &[Rat]) -> bool {
    let mut sorted: Vec<&Rat> = x.iter().collect();
    sorted.sort();
    sorted.windows(2).all(|w| w[0] != w[1])
}

/// Every 0-based 4-subset `{p, q, r, s}` with `x_p + x_q + x_r + x_s = 0`.
///
/// A circle `X² + Y² + DX + EY + F = 0` meets `y = x²` where
/// `x⁴ + (1 + E)x² + Dx + F = 0`; with no cubic term the four abscissae of
/// concyclic points sum to zero, and any four with zero sum fix such a circle.
#[allow(clippy::needless_range_loop)]
pub fn concyclic_quadruples(x: &[Rat]) -> Vec<[usize; 4]> {
    let n = x.len();
    let mut out = Vec::new();
    for p in 0..n {
        for q in (p + 1)..n {
            let pq = &x[p] + &x[q];
            for r in (q + 1)..n {
                let pqr = &pq + &x[r];
                for s in (r + 1)..n {
                    if (&pqr + &x[s]).is_zero() {
                        out.push([p, q, r, s]);
                    }
                }
            }
        }
    }
    out
}

/// How three points are judged degenerate. Three points on a parabola are
/// never collinear and four-point concyclicity needs four points, so any
/// three-point rule is a convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThreePointRule {
    /// Exclude `{a, −a, 0}`: the set is symmetric about the axis and
    /// contains the vertex.
    #[default]
    SymmetricWithVertex,
    /// Exclude `x₁ + x₂ + x₃ = 0`: the points are concyclic with the vertex.
    ConcyclicWithVertex,
}

impl ThreePointRule {
    pub fn excludes(self, x: &[Rat]) -> bool {
        debug_assert_eq!(x.len(), 3);
        match self {
            ThreePointRule::SymmetricWithVertex => x.iter().any(Rat::is_zero) && x.iter().sum::<Rat>().is_zero(),
            ThreePointRule::ConcyclicWithVertex => x.iter().sum::<Rat>().is_zero(),
        }
    }
}

/// No four points concyclic (`n ≥ 4`); for `n = 3` the default
/// [`ThreePointRule`]; always true for fewer points.
pub fn check_general_position(x: &[Rat]) -> bool {
    general_position_with(x, ThreePointRule::default())
}

pub fn general_position_with(x: &[Rat], rule: ThreePointRule) -> bool {
    match x.len() {
        0..=2 => true,
        3 => !rule.excludes(x),
        _ => concyclic_quadruples(x).is_empty(),
    }
}

/// All pair sums `xᵢ + xⱼ` in lexicographic pair order.
pub fn psi_from_x(x: &[Rat]) -> Vec<Rat> {
    let n = x.len();
    let mut out = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(&x[i] + &x[j]);
        }
    }
    out
}

/// The outcome of checking one pair of points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCheck {
    /// 1-based point labels, `i < j`.
    pub i: usize,
    pub j: usize,
    /// `xᵢ + xⱼ`.
    pub sum: Rat,
    /// `a² + b²` for the canonical sum `b/a`; a square iff the distance is rational.
    pub leg_square_sum: BigInt,
    pub distance: Option<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RdsCheck {
    pub pairs: Vec<PairCheck>,
}

impl RdsCheck {
    pub fn ok(&self) -> bool {
        self.pairs.iter().all(|p| p.distance.is_some())
    }

    /// All distances, or `None` when some pair is irrational.
    pub fn distances(&self) -> Option<Vec<Rat>> {
        self.pairs.iter().map(|p| p.distance.clone()).collect()
    }

    pub fn failing_pairs(&self) -> Vec<(usize, usize)> {
        self.pairs.iter().filter(|p| p.distance.is_none()).map(|p| (p.i, p.j)).collect()
    }
}

/// Square root of a non-negative rational when it is rational.
fn rational_sqrt(q: &Rat) -> Option<Rat> {
    let (num, num_exact) = isqrt(q.numer()).ok()?;
    let (den, den_exact) = isqrt(q.denom()).ok()?;
    (num_exact && den_exact).then(|| Rat::new(num, den).expect("positive denominator"))
}

/// Checks every pairwise distance of the points `(xᵢ, xᵢ²)` directly from
/// coordinates: `d² = Δx² + Δy²` must be the square of a rational.
pub fn verify_rds(x: &[Rat]) -> Result<RdsCheck, SolverError> {
    let n = x.len();
    let mut pairs = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        for j in (i + 1)..n {
            if x[i] == x[j] {
                return Err(SolverError::DuplicatePoint { i: i + 1, j: j + 1 });
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = &x[j] - &x[i];
            let dy = &x[j].square() - &x[i].square();
            let d2 = dx.square() + dy.square();
            let sum = &x[i] + &x[j];
            let leg_square_sum = sum.numer() * sum.numer() + sum.denom() * sum.denom();
            pairs.push(PairCheck { i: i + 1, j: j + 1, sum, leg_square_sum, distance: rational_sqrt(&d2) });
        }
    }
    Ok(RdsCheck { pairs })
}

/// The sorted abscissae: the identity of a point set under relabeling.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SolutionKey(pub Vec<Rat>);

impl SolutionKey {
    pub fn of(x: &[Rat]) -> Self {
        let mut v = x.to_vec();
        v.sort();
        SolutionKey(v)
    }
}

impl fmt::Display for SolutionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::number::format_list(&self.0))
    }
}

/// A verified rational distance set with its provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub n: usize,
    pub x: Vec<Rat>,
    pub psi: Vec<Rat>,
    pub distances: Vec<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub general_position: Option<bool>,
}

impl Solution {
    /// Builds a solution from abscissae, re-verifying every distance.
    /// Returns `None` when the points are not a rational distance set.
    pub fn from_x(x: Vec<Rat>, annotate_gp: bool) -> Result<Option<Solution>, SolverError> {
        let check = verify_rds(&x)?;
        let Some(distances) = check.distances() else {
            return Ok(None);
        };
        let general_position = annotate_gp.then(|| check_general_position(&x));
        Ok(Some(Solution { n: x.len(), psi: psi_from_x(&x), x, distances, general_position }))
    }

    pub fn key(&self) -> SolutionKey {
        SolutionKey::of(&self.x)
    }
}

/// Everything the closed form says about one head.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub x: Vec<Rat>,
    pub psi: PsiVector,
    pub existence: ExistenceReport,
    pub distinct: bool,
    pub general_position: bool,
    /// Present when the head yields a rational distance set.
    pub solution: Option<Solution>,
}

/// Solves the head, completes the dependent entries, and applies every
/// condition. `free` is only used for `n = 2`.
pub fn solve(head: &[Rat], free: Option<&Rat>) -> Result<SolveOutcome, SolverError> {
    let x = solve_x(head, free)?;
    let (psi, existence) = if head.len() >= 3 {
        (complete_psi(head)?, check_existence(head)?)
    } else {
        let psi = PsiVector { n: 2, entries: head.to_vec() };
        (psi, ExistenceReport { ok: true, tail: Vec::new(), failing: Vec::new() })
    };
    let heads_valid = head.iter().all(is_pythagorean_ratio);
    let distinct = check_distinct(&x);
    let general_position = distinct && check_general_position(&x);
    let solution = if heads_valid && existence.ok && distinct { Solution::from_x(x.clone(), true)? } else { None };
    Ok(SolveOutcome { x, psi, existence, distinct, general_position, solution })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::parse_list;

    fn v(s: &str) -> Vec<Rat> {
        parse_list(s).unwrap()
    }

    #[test]
    fn indices_examples() {
        let idx = indices_set(4).unwrap();
        assert_eq!(idx.pairs(), &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        assert_eq!(indices_set(2).unwrap().pairs(), &[(1, 2)]);
        let five = indices_set(5).unwrap();
        assert_eq!((five.len(), five.pairs()[9]), (10, (4, 5)));
        assert_eq!(five.pairs()[4], (2, 3));
        assert_eq!(five.position(2, 3), Some(4));
        assert!(matches!(indices_set(1), Err(SolverError::BadN { .. })));
    }

    #[test]
    fn coefficient_matrix_examples() {
        let c3 = coefficient_matrix(3).unwrap();
        let rows: Vec<Vec<u8>> = (0..3).map(|r| (0..3).map(|c| c3.entry(r, c)).collect()).collect();
        assert_eq!(rows, vec![vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(c3.top_block_determinant(), Some(Rat::from(-2)));
        assert_eq!(c3.rank(), 3);
        assert_eq!(coefficient_matrix(4).unwrap().top_block_determinant(), Some(Rat::from(2)));
        let c2 = coefficient_matrix(2).unwrap();
        assert_eq!((c2.rank(), c2.top_block_determinant()), (1, None));
        assert!(coefficient_matrix(0).is_err());
    }

    #[test]
    fn head_inverse_examples() {
        let inv = head_inverse(3).unwrap();
        let expected = RatMatrix::from_rows(
            [[1, 1, -1], [1, -1, 1], [-1, 1, 1]]
                .iter()
                .map(|r| r.iter().map(|&c| Rat::new(c, 2).unwrap()).collect())
                .collect(),
        );
        assert_eq!(inv, expected);
        for n in [4, 10] {
            let top = coefficient_matrix(n).unwrap().top_block();
            assert_eq!(&head_inverse(n).unwrap() * &top, RatMatrix::identity(n));
        }
        assert!(head_inverse(2).is_err());
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve_x(&v("4/3,8/15,12/5"), None).unwrap(), v("-4/15,8/5,4/5"));
        assert_eq!(solve_x(&v("-35/12,-4/3,-7/24,-3/4"), None).unwrap(), v("-7/4,-7/6,5/12,35/24"));
        assert_eq!(solve_x(&v("0,7/24,4/3,-3/4,-7/24"), None).unwrap(), v("7/24,-7/24,0,25/24,-25/24"));
        assert_eq!(solve_x(&v("4/3,-5/12,5/12"), None).unwrap(), v("1/4,13/12,-2/3"));
        assert_eq!(solve_x(&v("4/3"), Some(&Rat::new(1, 3).unwrap())).unwrap(), v("1/3,1"));
        assert_eq!(solve_x(&v("4/3"), None), Err(SolverError::MissingFreeParam));
        assert!(matches!(solve_x(&v("4/3,3/4"), None), Err(SolverError::BadLength { .. })));
        assert!(matches!(solve_x(&[], None), Err(SolverError::BadLength { .. })));
    }

    #[test]
    fn complete_examples() {
        let psi = complete_psi(&v("-35/12,-4/3,-7/24,-3/4")).unwrap();
        assert_eq!(psi.tail(), v("7/24,15/8").as_slice());
        let psi = complete_psi(&v("0,7/24,4/3,-3/4,-7/24")).unwrap();
        assert_eq!(psi.tail(), v("3/4,-4/3,25/24,-25/24,0").as_slice());
        assert!(complete_psi(&v("4/3,8/15,12/5")).unwrap().tail().is_empty());
        assert!(complete_psi(&v("4/3,8/15")).is_err());
    }

    #[test]
    fn dependent_forms_match_pair_sums() {
        for n in 3..=12 {
            let idx = IndicesSet::new(n).unwrap();
            let forms = dependent_forms(n);
            let xforms = solution_forms(n);
            // Expand each dependent form through x = inverse · head and
            // compare with the pair it should equal, as coefficient vectors.
            for (i, form) in forms.iter().enumerate() {
                let (a, b) = idx.pairs()[n + i];
                let mut lhs = vec![Rat::zero(); n];
                for &(pos, c) in &form.terms {
                    lhs[pos] = &lhs[pos] + &Rat::from(c);
                }
                let mut rhs = vec![Rat::zero(); n];
                for point in [a - 1, b - 1] {
                    for &(pos, c) in &xforms[point].terms {
                        rhs[pos] = &rhs[pos] + &Rat::new(c, 2).unwrap();
                    }
                }
                assert_eq!(lhs, rhs, "n = {n}, tail entry {}", i + 1);
            }
        }
    }

    #[test]
    fn existence_examples() {
        let rep = check_existence(&v("-35/12,-4/3,-7/24,-3/4")).unwrap();
        assert!(rep.ok);
        let rep = check_existence(&v("4/3,4/3,4/3,4/3")).unwrap();
        assert_eq!((rep.ok, rep.tail.clone()), (true, v("4/3,4/3")));
        let rep = check_existence(&v("4/3,3/4,5/12,0")).unwrap();
        assert_eq!(rep.tail, v("-1/3,-11/12"));
        assert!(!rep.ok);
        assert!(rep.failing.contains(&5));
        assert!(check_existence(&v("4/3,8/15,12/5")).unwrap().ok);
    }

    #[test]
    fn distinct_examples() {
        assert!(check_distinct(&v("-7/4,-7/6,5/12,35/24")));
        assert!(!check_distinct(&v("1/2,1/2")));
        let collapsed = solve_x(&v("4/3,4/3,4/3,4/3"), None).unwrap();
        assert_eq!(collapsed, v("2/3,2/3,2/3,2/3"));
        assert!(!check_distinct(&collapsed));
    }

    #[test]
    fn general_position_examples() {
        let five = v("7/24,-7/24,0,25/24,-25/24");
        assert!(!check_general_position(&five));
        assert_eq!(concyclic_quadruples(&five), vec![[0, 1, 3, 4]]);
        assert!(check_general_position(&v("-7/4,-7/6,5/12,35/24")));
        assert!(!check_general_position(&v("4/3,-4/3,0")));
        assert!(check_general_position(&v("-4/15,8/5,4/5")));
        assert!(!general_position_with(&v("4/3,-4/3,0"), ThreePointRule::ConcyclicWithVertex));
        // Zero-sum without the vertex: only the concyclic-with-vertex rule objects.
        let x = v("1,2,-3");
        assert!(general_position_with(&x, ThreePointRule::SymmetricWithVertex));
        assert!(!general_position_with(&x, ThreePointRule::ConcyclicWithVertex));
    }

    #[test]
    fn psi_from_x_examples() {
        assert_eq!(psi_from_x(&v("-4/15,8/5,4/5")), v("4/3,8/15,12/5"));
        assert_eq!(psi_from_x(&v("-853/880,-557/2640,1151/2640,3329/2640")), v("-779/660,-8/15,7/24,9/40,21/20,56/33"));
        assert_eq!(psi_from_x(&v("0,1")), v("1"));
    }

    #[test]
    fn verify_examples() {
        let check = verify_rds(&v("-4/15,8/5,4/5")).unwrap();
        assert!(check.ok());
        assert_eq!(check.distances().unwrap(), v("28/9,272/225,52/25"));
        assert!(verify_rds(&v("-7/4,-7/6,5/12,35/24")).unwrap().ok());
        let bad = verify_rds(&v("38/15,-6/15,-2/15")).unwrap();
        assert!(!bad.ok());
        assert_eq!(bad.failing_pairs()[0], (1, 2));
        assert_eq!(bad.pairs[0].sum, Rat::new(32, 15).unwrap());
        assert_eq!(bad.pairs[0].leg_square_sum, BigInt::from(1249));
        assert!(verify_rds(&v("4/5,-32/15,8/5")).unwrap().ok());
        assert_eq!(verify_rds(&v("1,2,1")), Err(SolverError::DuplicatePoint { i: 1, j: 3 }));
    }

    #[test]
    fn solve_outcome_flags() {
        // The tail entries ±25/24 are not ratios: 25² + 24² = 1201.
        let out = solve(&v("0,7/24,4/3,-3/4,-7/24"), None).unwrap();
        assert!(out.solution.is_none());
        assert_eq!(out.existence.failing, vec![8, 9]);
        assert!(out.distinct && !out.general_position);
        let out = solve(&v("4/3,8/15,12/5"), None).unwrap();
        assert!(out.solution.unwrap().general_position.is_some());
        let out = solve(&v("4/3,3/4,5/12,0"), None).unwrap();
        assert!(out.solution.is_none() && !out.existence.ok);
        let out = solve(&v("4/3,4/3,4/3,4/3"), None).unwrap();
        assert!(out.solution.is_none() && !out.distinct);
        // A non-ratio head entry never yields a solution.
        assert!(solve(&v("1/2,4/3,3/4"), None).unwrap().solution.is_none());
    }
}
