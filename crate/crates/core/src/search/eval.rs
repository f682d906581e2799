//! Per-head evaluation, generic over the scalar type so the hot loop can run
//! on machine-word rationals and fall back to [`Rat`] when they overflow.

use std::collections::HashMap;
use std::hash::Hash;

use num_integer::Integer;

use super::space::HeadSpace;
use crate::number::{exact_sqrt_u128, Rat};
use crate::pythagorean::is_pythagorean_ratio;
use crate::solver::{dependent_forms, solution_forms, LinearForm};

/// Exact rational arithmetic where every operation may report overflow.
pub(crate) trait Scalar: Clone + Eq + Hash + Sized {
    fn from_rat(q: &Rat) -> Option<Self>;
    fn to_rat(&self) -> Rat;
    fn add(&self, other: &Self) -> Option<Self>;
    fn scaled(&self, c: i64) -> Option<Self>;
    fn halved(&self) -> Option<Self>;
    fn is_ratio(&self) -> Option<bool>;

    fn eval(form: &LinearForm, head: &[Self]) -> Option<Self> {
        let mut acc: Option<Self> = None;
        for &(pos, c) in &form.terms {
            let term = head[pos].scaled(c)?;
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
        }
        let sum = acc?;
        match form.divisor {
            1 => Some(sum),
            2 => sum.halved(),
            d => unreachable!("divisor {d}"),
        }
    }
}

impl Scalar for Rat {
    fn from_rat(q: &Rat) -> Option<Self> {
        Some(q.clone())
    }
    fn to_rat(&self) -> Rat {
        self.clone()
    }
    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn scaled(&self, c: i64) -> Option<Self> {
        Some(match c {
            1 => self.clone(),
            -1 => -self,
            c => &Rat::from(c) * self,
        })
    }
    fn halved(&self) -> Option<Self> {
        Some(self.half())
    }
    fn is_ratio(&self) -> Option<bool> {
        Some(is_pythagorean_ratio(self))
    }
}

/// A reduced `i128` fraction with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct Small {
    num: i128,
    den: i128,
}

impl Small {
    fn reduced(num: i128, den: i128) -> Self {
        let g = num.gcd(&den);
        if g > 1 {
            Small { num: num / g, den: den / g }
        } else {
            Small { num, den }
        }
    }
}

impl Scalar for Small {
    fn from_rat(q: &Rat) -> Option<Self> {
        let (num, den) = q.to_i128_pair()?;
        Some(Small { num, den })
    }

    fn to_rat(&self) -> Rat {
        Rat::new(self.num, self.den).expect("positive denominator")
    }

    fn add(&self, other: &Self) -> Option<Self> {
        if self.den == other.den {
            return Some(Small::reduced(self.num.checked_add(other.num)?, self.den));
        }
        let g = self.den.gcd(&other.den);
        let (a, b) = (self.den / g, other.den / g);
        let num = self.num.checked_mul(b)?.checked_add(other.num.checked_mul(a)?)?;
        let den = self.den.checked_mul(b)?;
        Some(Small::reduced(num, den))
    }

    fn scaled(&self, c: i64) -> Option<Self> {
        match c {
            1 => Some(*self),
            -1 => Some(Small { num: self.num.checked_neg()?, den: self.den }),
            c => Some(Small::reduced(self.num.checked_mul(c as i128)?, self.den)),
        }
    }

    fn halved(&self) -> Option<Self> {
        if self.num % 2 == 0 {
            Some(Small { num: self.num / 2, den: self.den })
        } else {
            Some(Small { num: self.num, den: self.den.checked_mul(2)? })
        }
    }

    fn is_ratio(&self) -> Option<bool> {
        if self.num == 0 {
            return Some(true);
        }
        let a = self.den.unsigned_abs();
        let b = self.num.unsigned_abs();
        let s = a.checked_mul(a)?.checked_add(b.checked_mul(b)?)?;
        Some(exact_sqrt_u128(s).is_some())
    }
}

/// The pool in a given scalar representation, plus a value → index map.
pub(crate) struct PoolView<S> {
    pub values: Vec<S>,
    index: HashMap<S, usize>,
}

impl<S: Scalar> PoolView<S> {
    pub fn new(ratios: &[Rat]) -> Option<Self> {
        let values: Vec<S> = ratios.iter().map(S::from_rat).collect::<Option<_>>()?;
        let index = values.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        Some(PoolView { values, index })
    }

    pub fn index_of(&self, v: &S) -> Option<usize> {
        self.index.get(v).copied()
    }
}

/// Head-independent data for one `n`.
pub(crate) struct Plan {
    pub n: usize,
    pub x_forms: Vec<LinearForm>,
    pub tail_forms: Vec<LinearForm>,
    /// Number of leading tail forms that do not involve head slot 0.
    pub slot0_free: usize,
    /// Every relabeling of the points except the identity.
    pub relabelings: Vec<Vec<usize>>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

impl Plan {
    pub fn new(n: usize) -> Self {
        let tail_forms = dependent_forms(n);
        let slot0_free = tail_forms.iter().take_while(|f| f.terms.iter().all(|&(pos, _)| pos != 0)).count();
        let identity: Vec<usize> = (0..n).collect();
        let relabelings = permutations(n).into_iter().filter(|p| *p != identity).collect();
        Plan { n, x_forms: solution_forms(n), tail_forms, slot0_free, relabelings }
    }
}

pub(crate) enum Outcome<S> {
    /// A dependent entry is not a ratio. `slot0_free` is set when the failing
    /// entry does not depend on head slot 0, so every head that differs only
    /// in slot 0 fails the same way.
    Rejected {
        slot0_free: bool,
    },
    NotDistinct,
    /// A valid head whose point set is reached at a smaller rank.
    Duplicate,
    Accepted(Vec<S>),
}

/// Evaluates the head `idx` of rank `rank`. `None` means the scalar type
/// overflowed and the caller should retry with [`Rat`].
pub(crate) fn evaluate<S: Scalar>(
    plan: &Plan,
    pool: &PoolView<S>,
    space: &HeadSpace,
    idx: &[usize],
    rank: u64,
) -> Option<Outcome<S>> {
    let head: Vec<S> = idx.iter().map(|&i| pool.values[i].clone()).collect();
    for (k, form) in plan.tail_forms.iter().enumerate() {
        if !S::eval(form, &head)?.is_ratio()? {
            return Some(Outcome::Rejected { slot0_free: k < plan.slot0_free });
        }
    }
    let x: Vec<S> = plan.x_forms.iter().map(|f| S::eval(f, &head)).collect::<Option<_>>()?;
    for i in 0..x.len() {
        if x[i + 1..].contains(&x[i]) {
            return Some(Outcome::NotDistinct);
        }
    }
    // Keep only the relabeling of smallest rank among those the mode admits.
    let mut relabeled = vec![0usize; plan.n];
    'perm: for perm in &plan.relabelings {
        for (k, slot) in relabeled.iter_mut().enumerate() {
            // Head pairs: (1,2), (1,3), ..., (1,n), then (2,3).
            let (a, b) = if k + 1 < plan.n { (perm[0], perm[k + 1]) } else { (perm[1], perm[2]) };
            match pool.index_of(&x[a].add(&x[b])?) {
                Some(i) => *slot = i,
                None => continue 'perm,
            }
        }
        if space.admits(&relabeled) && space.rank(&relabeled) < rank {
            return Some(Outcome::Duplicate);
        }
    }
    Some(Outcome::Accepted(x))
}
