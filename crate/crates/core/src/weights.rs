//! Normalized weight expansions `W(p, q)`: the side lengths of the squares
//! obtained by greedily cutting a `q × p` rectangle, whose multiplicities are
//! the continued-fraction digits of `p/q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Result};
use crate::rational::Rational;

/// Run-length encoded weight sequence `(X_0^{×ℓ_0}, …, X_K^{×ℓ_K})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSequence {
    parts: Vec<(BigInt, usize)>,
    p: BigInt,
    q: BigInt,
}

impl WeightSequence {
    /// `(value, multiplicity)` blocks in strictly decreasing value order.
    pub fn parts(&self) -> &[(BigInt, usize)] {
        &self.parts
    }

    /// The generating pair, normalized so that `q ≤ p`.
    pub fn pair(&self) -> (&BigInt, &BigInt) {
        (&self.p, &self.q)
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.parts.iter().map(|(_, l)| *l).collect()
    }

    pub fn flatten(&self) -> Vec<BigInt> {
        self.parts
            .iter()
            .flat_map(|(x, l)| std::iter::repeat_n(x.clone(), *l))
            .collect()
    }

    /// Number of weights counted with multiplicity.
    pub fn len(&self) -> usize {
        self.parts.iter().map(|(_, l)| l).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sum_of_squares(&self) -> BigInt {
        self.parts
            .iter()
            .map(|(x, l)| x * x * BigInt::from(*l))
            .sum()
    }

    /// Weights multiplied by a rational factor, flattened.
    pub fn scaled(&self, factor: &Rational) -> Vec<Rational> {
        self.flatten()
            .into_iter()
            .map(|w| Rational::from_integer(w) * factor)
            .collect()
    }
}

fn check_positive(p: &BigInt, q: &BigInt) -> Result<()> {
    if !p.is_positive() || !q.is_positive() {
        return invalid(format!("weights need positive integers, got ({p}, {q})"));
    }
    Ok(())
}

/// Continued-fraction digits `[ℓ_0; ℓ_1, …, ℓ_K]` of `p/q` for `p ≥ q ≥ 1`.
///
/// The last digit is at least 2 unless the expansion has a single digit.
pub fn continued_fraction(p: &BigInt, q: &BigInt) -> Result<Vec<BigInt>> {
    check_positive(p, q)?;
    if q > p {
        return invalid(format!("continued_fraction expects p >= q, got ({p}, {q})"));
    }
    let (mut hi, mut lo) = (p.clone(), q.clone());
    let mut digits = Vec::new();
    while !lo.is_zero() {
        let (quot, rem) = hi.div_rem(&lo);
        digits.push(quot);
        hi = std::mem::replace(&mut lo, rem);
    }
    Ok(digits)
}

/// The weight expansion `W(p, q)`; symmetric in its arguments.
///
/// The pair is reduced by its gcd, expanded via `X_{i+1} = X_{i−1} − ℓ_i X_i`
/// and rescaled, so `W(tp, tq) = t·W(p, q)` holds exactly.
pub fn weight_sequence(p: &BigInt, q: &BigInt) -> Result<WeightSequence> {
    check_positive(p, q)?;
    let (p, q) = if p >= q { (p.clone(), q.clone()) } else { (q.clone(), p.clone()) };
    let g = p.gcd(&q);
    let (mut prev, mut cur) = (&p / &g, &q / &g);
    let mut parts = Vec::new();
    while !cur.is_zero() {
        let (l, next) = prev.div_rem(&cur);
        let mult = usize::try_from(&l).expect("continued-fraction digit exceeds usize");
        parts.push((&cur * &g, mult));
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(WeightSequence { parts, p, q })
}

pub fn weight_sequence_u64(p: u64, q: u64) -> Result<WeightSequence> {
    weight_sequence(&BigInt::from(p), &BigInt::from(q))
}

/// Writes `{min(a,b), max(a,b)} = λ²·(e, f)` with `e ≤ f` coprime integers.
/// Returns `(λ², e, f)`.
pub fn normalize_rational_pair(a: &Rational, b: &Rational) -> Result<(Rational, BigInt, BigInt)> {
    if !a.is_positive() || !b.is_positive() {
        return invalid(format!("ellipsoid parameters must be positive, got ({a}, {b})"));
    }
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let ratio = hi / lo;
    let (f, e) = (ratio.numer().clone(), ratio.denom().clone());
    let lambda_sq = lo / Rational::from_integer(e.clone());
    debug_assert!(e.gcd(&f).is_one());
    Ok((lambda_sq, e, f))
}
