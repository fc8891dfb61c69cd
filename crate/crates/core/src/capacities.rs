//! Truncated capacity sequences `N(a, b)`, the max-plus product `#` and the
//! entrywise dominance relation between sequences.
//!
//! A [`CapSequence`] stores integer numerators over one shared denominator, so
//! every comparison and product below runs in integer arithmetic.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};
use crate::rational::{common_denominator, Rational};

/// Where a sequence came from, kept for diagnostics only.
#[derive(Debug, Clone, PartialEq)]
pub enum SeqSource {
    Ellipsoid(Rational, Rational),
    Balls(Vec<Rational>),
    Sharp(Box<SeqSource>, Box<SeqSource>),
    Scaled(Box<SeqSource>, Rational),
    Zero,
    Explicit,
}

impl fmt::Display for SeqSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqSource::Ellipsoid(a, b) => write!(f, "N({a},{b})"),
            SeqSource::Balls(sizes) => {
                let parts: Vec<String> = sizes.iter().map(|s| s.to_string()).collect();
                write!(f, "N(balls[{}])", parts.join(","))
            }
            SeqSource::Sharp(l, r) => write!(f, "({l} # {r})"),
            SeqSource::Scaled(s, t) => write!(f, "{t}·{s}"),
            SeqSource::Zero => write!(f, "0"),
            SeqSource::Explicit => write!(f, "explicit"),
        }
    }
}

/// `N_0 = 0 ≤ N_1 ≤ … ≤ N_K`, stored as `numerators[k] / denominator`.
#[derive(Debug, Clone)]
pub struct CapSequence {
    numerators: Vec<BigInt>,
    denominator: BigInt,
    source: SeqSource,
}

impl PartialEq for CapSequence {
    fn eq(&self, other: &Self) -> bool {
        self.numerators.len() == other.numerators.len()
            && self
                .numerators
                .iter()
                .zip(&other.numerators)
                .all(|(x, y)| x * &other.denominator == y * &self.denominator)
    }
}

impl CapSequence {
    /// Validates `terms[0] = 0` and monotonicity.
    pub fn from_terms(terms: &[Rational]) -> Result<Self> {
        if terms.is_empty() {
            return invalid("a capacity sequence needs at least the term N_0");
        }
        if !terms[0].is_zero() {
            return invalid(format!("N_0 must be 0, got {}", terms[0]));
        }
        if let Some(k) = (1..terms.len()).find(|&k| terms[k] < terms[k - 1]) {
            return invalid(format!("sequence decreases at index {k}"));
        }
        let den = common_denominator(terms);
        let numerators = terms
            .iter()
            .map(|t| t.numer() * (&den / t.denom()))
            .collect();
        Ok(Self::from_parts(numerators, den, SeqSource::Explicit))
    }

    pub(crate) fn from_parts(numerators: Vec<BigInt>, denominator: BigInt, source: SeqSource) -> Self {
        debug_assert!(denominator.is_positive());
        debug_assert!(numerators.first().is_some_and(Zero::is_zero));
        CapSequence { numerators, denominator, source }
    }

    /// The all-zero sequence with indices `0..=max_index`.
    pub fn zeros(max_index: usize) -> Self {
        Self::from_parts(vec![BigInt::zero(); max_index + 1], BigInt::one(), SeqSource::Zero)
    }

    /// Number of stored terms, `K + 1`.
    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    /// Largest stored index `K`.
    pub fn max_index(&self) -> usize {
        self.numerators.len() - 1
    }

    pub fn term(&self, k: usize) -> Rational {
        Rational::new(self.numerators[k].clone(), self.denominator.clone())
    }

    pub fn terms(&self) -> Vec<Rational> {
        (0..self.len()).map(|k| self.term(k)).collect()
    }

    pub fn source(&self) -> &SeqSource {
        &self.source
    }

    pub fn with_source(mut self, source: SeqSource) -> Self {
        self.source = source;
        self
    }

    /// Keeps indices `0..=max_index`.
    pub fn truncated(&self, max_index: usize) -> Self {
        let mut out = self.clone();
        out.numerators.truncate(max_index + 1);
        out
    }

    /// Numerators rewritten over `den`, which must be a multiple of the
    /// current denominator.
    fn numerators_over(&self, den: &BigInt) -> Vec<BigInt> {
        let factor = den / &self.denominator;
        debug_assert!((&factor * &self.denominator) == *den);
        if factor.is_one() {
            self.numerators.clone()
        } else {
            self.numerators.iter().map(|n| n * &factor).collect()
        }
    }
}

/// Outcome of comparing two truncations index by index.
#[derive(Debug, Clone, PartialEq)]
pub enum DominanceReport {
    /// `lhs_k ≤ rhs_k` for every `k ≤ up_to`.
    Holds { up_to: usize },
    /// Smallest index where `lhs_k > rhs_k`.
    Violation { index: usize, lhs: Rational, rhs: Rational },
}

impl DominanceReport {
    pub fn holds(&self) -> bool {
        matches!(self, DominanceReport::Holds { .. })
    }
}

fn check_positive(what: &str, x: &Rational) -> Result<()> {
    if !x.is_positive() {
        return invalid(format!("{what} must be positive, got {x}"));
    }
    Ok(())
}

/// Number of integer points `(x, y)` with `x, y ≥ 0` and `a·x + b·y ≤ level`.
pub fn lattice_count(a: &Rational, b: &Rational, level: &Rational) -> Result<BigInt> {
    check_positive("a", a)?;
    check_positive("b", b)?;
    if level.is_negative() {
        return invalid(format!("level must be nonnegative, got {level}"));
    }
    let x_max = (level / a).floor().to_integer();
    let mut count = BigInt::zero();
    let mut x = BigInt::zero();
    while x <= x_max {
        let rest = level - a * Rational::from_integer(x.clone());
        count += (rest / b).floor().to_integer() + 1;
        x += 1;
    }
    Ok(count)
}

/// Sorted first `count` values of `{m·a + n·b : m, n ≥ 0}` for positive
/// integers `a`, `b`.
pub(crate) fn integral_caps(a: &BigInt, b: &BigInt, count: usize) -> Vec<BigInt> {
    debug_assert!(a.is_positive() && b.is_positive() && count > 0);
    let k = BigInt::from(count - 1);
    // triangle area A²/(2ab) ≥ K
    let mut bound: BigInt = (BigInt::from(2) * a * b * &k).sqrt() + 1 + a + b;
    loop {
        let small = (a.to_u64(), b.to_u64(), bound.to_u64());
        let values = match small {
            (Some(a), Some(b), Some(bound)) if bound < (1 << 62) => {
                let mut vals = enumerate_u64(a, b, bound, count);
                if vals.len() >= count {
                    vals.sort_unstable();
                    vals.truncate(count);
                    return vals.into_iter().map(BigInt::from).collect();
                }
                vals.len()
            }
            _ => {
                let mut vals = enumerate_big(a, b, &bound);
                if vals.len() >= count {
                    vals.sort_unstable();
                    vals.truncate(count);
                    return vals;
                }
                vals.len()
            }
        };
        debug_assert!(values < count);
        bound *= 2;
    }
}

fn enumerate_u64(a: u64, b: u64, bound: u64, hint: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(hint + hint / 2);
    let mut base = 0u64;
    while base <= bound {
        let mut v = base;
        while v <= bound {
            out.push(v);
            v += b;
        }
        base += a;
    }
    out
}

fn enumerate_big(a: &BigInt, b: &BigInt, bound: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut base = BigInt::zero();
    while &base <= bound {
        let mut v = base.clone();
        while &v <= bound {
            out.push(v.clone());
            v += b;
        }
        base += a;
    }
    out
}

/// `N(a, b)` truncated at index `max_index`.
///
/// Denominators are cleared first: `N(a, b) = (1/t)·N(ta, tb)`.
pub fn cap_seq(a: &Rational, b: &Rational, max_index: usize) -> Result<CapSequence> {
    check_positive("a", a)?;
    check_positive("b", b)?;
    let den = a.denom().lcm(b.denom());
    let ta = a.numer() * (&den / a.denom());
    let tb = b.numer() * (&den / b.denom());
    let nums = integral_caps(&ta, &tb, max_index + 1);
    Ok(CapSequence::from_parts(nums, den, SeqSource::Ellipsoid(a.clone(), b.clone())))
}

/// The `k`-th capacity `N_k(a, b)`.
pub fn cap_at(a: &Rational, b: &Rational, k: usize) -> Result<Rational> {
    Ok(cap_seq(a, b, k)?.term(k))
}

/// The `d` with `(d² + d)/2 ≤ k ≤ (d² + 3d)/2`.
pub fn ball_degree(k: u64) -> u64 {
    let disc: BigInt = 8 * BigInt::from(k) + 1;
    let d: BigInt = (disc.sqrt() - 1u32) / 2u32;
    d.to_u64().expect("degree fits in u64")
}

/// `N_k(a, a) = d·a` in closed form.
pub fn ball_cap_at(a: &Rational, k: u64) -> Result<Rational> {
    check_positive("a", a)?;
    Ok(a * Rational::from_integer(BigInt::from(ball_degree(k))))
}

/// Blocks of equal values start at these indices.
fn block_starts(xs: &[BigInt]) -> Vec<usize> {
    (0..xs.len()).filter(|&i| i == 0 || xs[i] != xs[i - 1]).collect()
}

/// Max-plus convolution of two nondecreasing integer sequences, truncated to
/// the shorter length. For nondecreasing `x` the maximum over a block of
/// equal `x` values is attained at the block's first index, so only block
/// starts of the sequence with fewer blocks are scanned.
pub(crate) fn integral_sharp(x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    let n = x.len().min(y.len());
    let (x, y) = (&x[..n], &y[..n]);
    let (sx, sy) = (block_starts(x), block_starts(y));
    let (x, y, starts) = if sx.len() <= sy.len() { (x, y, sx) } else { (y, x, sy) };
    (0..n)
        .map(|k| {
            starts
                .iter()
                .take_while(|&&s| s <= k)
                .map(|&s| &x[s] + &y[k - s])
                .max()
                .expect("index 0 is always a block start")
        })
        .collect()
}

/// `(C # D)_k = max_{0≤i≤k} (C_i + D_{k−i})`, truncated to the shorter input.
pub fn sharp(c: &CapSequence, d: &CapSequence) -> CapSequence {
    let den = c.denominator.lcm(&d.denominator);
    let nums = integral_sharp(&c.numerators_over(&den), &d.numerators_over(&den));
    CapSequence::from_parts(
        nums,
        den,
        SeqSource::Sharp(Box::new(c.source.clone()), Box::new(d.source.clone())),
    )
}

/// `N(a_1, a_1) # … # N(a_M, a_M)` truncated at `max_index`; the empty list
/// gives the zero sequence.
pub fn cap_of_ball_list(sizes: &[Rational], max_index: usize) -> Result<CapSequence> {
    for s in sizes {
        check_positive("ball size", s)?;
    }
    let den = common_denominator(sizes);
    let mut acc: Option<Vec<BigInt>> = None;
    let mut cache: Vec<(BigInt, Vec<BigInt>)> = Vec::new();
    for s in sizes {
        let n = s.numer() * (&den / s.denom());
        let ball = match cache.iter().find(|(v, _)| *v == n) {
            Some((_, seq)) => seq.clone(),
            None => {
                let seq = integral_caps(&n, &n, max_index + 1);
                cache.push((n, seq.clone()));
                seq
            }
        };
        acc = Some(match acc {
            None => ball,
            Some(prev) => integral_sharp(&prev, &ball),
        });
    }
    let nums = acc.unwrap_or_else(|| vec![BigInt::zero(); max_index + 1]);
    Ok(CapSequence::from_parts(nums, den, SeqSource::Balls(sizes.to_vec())))
}

/// Whether `lhs ≼ rhs` on the common truncation; both must have equal length.
pub fn dominates(lhs: &CapSequence, rhs: &CapSequence) -> Result<DominanceReport> {
    if lhs.len() != rhs.len() {
        return invalid(format!(
            "dominance needs equal truncations, got lengths {} and {}",
            lhs.len(),
            rhs.len()
        ));
    }
    let den = lhs.denominator.lcm(&rhs.denominator);
    let (fl, fr) = (&den / &lhs.denominator, &den / &rhs.denominator);
    for (k, (x, y)) in lhs.numerators.iter().zip(&rhs.numerators).enumerate() {
        if x * &fl > y * &fr {
            return Ok(DominanceReport::Violation { index: k, lhs: lhs.term(k), rhs: rhs.term(k) });
        }
    }
    Ok(DominanceReport::Holds { up_to: lhs.max_index() })
}

/// Entrywise multiple `t·C`.
pub fn scale_seq(c: &CapSequence, t: &Rational) -> Result<CapSequence> {
    check_positive("scale", t)?;
    let nums: Vec<BigInt> = c.numerators.iter().map(|n| n * t.numer()).collect();
    let den = &c.denominator * t.denom();
    let g = c.numerators.iter().fold(den.clone(), |g, n| g.gcd(n));
    let (nums, den) = if g.is_one() {
        (nums, den)
    } else {
        (nums.into_iter().map(|n| n / &g).collect(), den / &g)
    };
    Ok(CapSequence::from_parts(nums, den, SeqSource::Scaled(Box::new(c.source.clone()), t.clone())))
}
