//! Embedding decisions for disjoint unions of open ellipsoids into an
//! ellipsoid, optimal squeezing factors and points of the capacity function
//! `c(a) = inf{A : int E(1, a) ↪ B(A)}`.
//!
//! The cone route builds the ball-packing class: after clearing denominators
//! the target is an integer `E(c, d)`, each domain `E(a_i, b_i) = λ_i²·E(e_i, f_i)`
//! contributes the balls `λ_i²·W(e_i, f_i)`, and the target contributes
//! `W(d − c, d)`. The union embeds in `E(c, d)` iff all those balls embed in
//! `B(d)`, which is decided by [`in_cone_closure`].

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::capacities::{cap_seq, dominates, sharp, CapSequence, DominanceReport};
use crate::cone::{in_cone_closure, ConeClass, ConeDecision, Verdict};
use crate::error::{invalid, Result};
use crate::rational::{common_denominator, sqrt_bracket, Rational};
use crate::weights::{normalize_rational_pair, weight_sequence};

/// `E(a, b)` with `a ≤ b`; `B(c) = E(c, c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ellipsoid {
    a: Rational,
    b: Rational,
}

impl Ellipsoid {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        if !a.is_positive() || !b.is_positive() {
            return invalid(format!("ellipsoid parameters must be positive, got ({a}, {b})"));
        }
        Ok(if a <= b { Ellipsoid { a, b } } else { Ellipsoid { a: b, b: a } })
    }

    pub fn ball(c: Rational) -> Result<Self> {
        Self::new(c.clone(), c)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn is_ball(&self) -> bool {
        self.a == self.b
    }

    /// `E(s·a, s·b)`; `s` scales capacities (areas), not radii.
    pub fn scaled(&self, s: &Rational) -> Result<Self> {
        Self::new(&self.a * s, &self.b * s)
    }

    pub fn caps(&self, max_index: usize) -> CapSequence {
        cap_seq(&self.a, &self.b, max_index).expect("ellipsoid parameters are positive")
    }
}

impl fmt::Display for Ellipsoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ball() {
            write!(f, "B({})", self.a)
        } else {
            write!(f, "E({},{})", self.a, self.b)
        }
    }
}

/// The ball-packing class of an embedding problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingClass {
    /// `(d; balls)` after clearing denominators.
    pub class: ConeClass,
    /// Domain balls in input order, then the target's complement balls.
    pub balls: Vec<Rational>,
    /// How many leading entries of `balls` come from the domains.
    pub domain_balls: usize,
    /// Factor applied to every capacity to make the target integral.
    pub scale: Rational,
}

/// Builds `(d; λ_1²W(e_1,f_1), …, W(d − c, d))` for `⊔ domains ↪ target`.
pub fn embedding_class(domains: &[Ellipsoid], target: &Ellipsoid) -> Result<EmbeddingClass> {
    if domains.is_empty() {
        return invalid("at least one domain is required");
    }
    let scale = Rational::from_integer(common_denominator([&target.a, &target.b]));
    let c = (&target.a * &scale).to_integer();
    let d = (&target.b * &scale).to_integer();
    let mut balls = Vec::new();
    for dom in domains {
        let (lambda_sq, e, f) = normalize_rational_pair(&(&dom.a * &scale), &(&dom.b * &scale))?;
        balls.extend(weight_sequence(&f, &e)?.scaled(&lambda_sq));
    }
    let domain_balls = balls.len();
    if c < d {
        let complement = weight_sequence(&d, &(&d - &c))?;
        balls.extend(complement.scaled(&Rational::one()));
    }
    Ok(EmbeddingClass {
        class: ConeClass::new(Rational::from_integer(d), balls.clone()),
        balls,
        domain_balls,
        scale,
    })
}

/// `N_k` of the domain aggregate exceeds `N_k` of the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapacityWitness {
    pub index: usize,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedDecision {
    pub verdict: Verdict,
    pub cone: ConeDecision,
    pub class: EmbeddingClass,
    pub capacity_witness: Option<CapacityWitness>,
}

/// Decides `int(⊔ domains) ↪ target` by the cone route.
pub fn decide(domains: &[Ellipsoid], target: &Ellipsoid) -> Result<EmbedDecision> {
    let class = embedding_class(domains, target)?;
    let cone = in_cone_closure(&class.class)?;
    Ok(EmbedDecision { verdict: cone.verdict, cone, class, capacity_witness: None })
}

/// [`decide`], plus a capacity comparison up to `max_index` whose first
/// violation (if any) is attached as the witness.
pub fn decide_with_capacity_check(
    domains: &[Ellipsoid],
    target: &Ellipsoid,
    max_index: usize,
) -> Result<(EmbedDecision, DominanceReport)> {
    let mut decision = decide(domains, target)?;
    let report = capacity_check(domains, target, max_index)?;
    if let DominanceReport::Violation { index, lhs, rhs } = &report {
        decision.capacity_witness =
            Some(CapacityWitness { index: *index, lhs: lhs.clone(), rhs: rhs.clone() });
    }
    Ok((decision, report))
}

/// `N(a_1,b_1) # … # N(a_n,b_n)` truncated at `max_index`.
pub fn domain_capacities(domains: &[Ellipsoid], max_index: usize) -> Result<CapSequence> {
    let mut iter = domains.iter();
    let first = iter.next().ok_or_else(|| crate::Error::InvalidArgument("at least one domain is required".into()))?;
    Ok(iter.fold(first.caps(max_index), |acc, dom| sharp(&acc, &dom.caps(max_index))))
}

/// Compares the domain aggregate with `N(target)` up to `max_index`. A
/// violation proves non-embeddability; its absence proves nothing beyond the
/// truncation.
pub fn capacity_check(domains: &[Ellipsoid], target: &Ellipsoid, max_index: usize) -> Result<DominanceReport> {
    dominates(&domain_capacities(domains, max_index)?, &target.caps(max_index))
}

/// Capacity comparison with doubling truncations `64, 128, …` up to
/// `max_index`; returns the first violation found.
pub fn adaptive_capacity_search(
    domains: &[Ellipsoid],
    target: &Ellipsoid,
    max_index: usize,
) -> Result<Option<CapacityWitness>> {
    let mut k = 64.min(max_index);
    loop {
        if let DominanceReport::Violation { index, lhs, rhs } = capacity_check(domains, target, k)? {
            return Ok(Some(CapacityWitness { index, lhs, rhs }));
        }
        if k >= max_index {
            return Ok(None);
        }
        k = (2 * k).min(max_index);
    }
}

/// A rational interval `lo ≤ x ≤ hi`, with the decisions computed at its
/// endpoints (absent where the endpoint came from a bound instead).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bracket {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_decision: Option<EmbedDecision>,
    pub hi_decision: Option<EmbedDecision>,
}

impl Bracket {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

fn check_eps(eps: &Rational) -> Result<()> {
    if !eps.is_positive() {
        return invalid(format!("eps must be positive, got {eps}"));
    }
    Ok(())
}

fn midpoint(lo: &Rational, hi: &Rational) -> Rational {
    (lo + hi) / Rational::from_integer(BigInt::from(2))
}

/// Brackets `s* = sup{s : int E(s·a, s·b) ↪ target}` to width `eps`.
///
/// The search starts from `[0, min(c/a, √(cd/ab))]`: the first capacity and
/// the volume both bound `s*` from above.
pub fn squeeze(domain: &Ellipsoid, target: &Ellipsoid, eps: &Rational) -> Result<Bracket> {
    check_eps(eps)?;
    let first_cap = &target.a / &domain.a;
    let volume_ratio = (&target.a * &target.b) / (&domain.a * &domain.b);
    let (_, vol_hi) = sqrt_bracket(&volume_ratio, 1 << 20);
    let mut hi = first_cap.min(vol_hi);
    let fits = |s: &Rational| -> Result<EmbedDecision> { decide(&[domain.scaled(s)?], target) };

    let at_hi = fits(&hi)?;
    if at_hi.verdict.is_yes() {
        return Ok(Bracket { lo: hi.clone(), hi, lo_decision: Some(at_hi.clone()), hi_decision: Some(at_hi) });
    }
    let mut lo = Rational::zero();
    let (mut lo_decision, mut hi_decision) = (None, Some(at_hi));
    while &hi - &lo > *eps {
        let mid = midpoint(&lo, &hi);
        let dec = fits(&mid)?;
        if dec.verdict.is_yes() {
            lo = mid;
            lo_decision = Some(dec);
        } else {
            hi = mid;
            hi_decision = Some(dec);
        }
    }
    Ok(Bracket { lo, hi, lo_decision, hi_decision })
}

/// Brackets `c(a) = inf{A : int E(1, a) ↪ B(A)}` for `a ≥ 1` to width `eps`,
/// starting from the volume bound `√a` and the inclusion `E(1, a) ⊂ B(a)`.
pub fn staircase_point(a: &Rational, eps: &Rational) -> Result<Bracket> {
    check_eps(eps)?;
    if *a < Rational::one() {
        return invalid(format!("staircase needs a >= 1, got {a}"));
    }
    let domain = Ellipsoid::new(Rational::one(), a.clone())?;
    let fits = |cap: &Rational| decide(std::slice::from_ref(&domain), &Ellipsoid::ball(cap.clone())?);
    let (mut lo, _) = sqrt_bracket(a, 1 << 20);
    let at_lo = fits(&lo)?;
    if at_lo.verdict.is_yes() {
        // √a is a perfect square here and the volume bound is attained
        return Ok(Bracket { lo: lo.clone(), hi: lo, lo_decision: Some(at_lo.clone()), hi_decision: Some(at_lo) });
    }
    let mut hi = a.clone();
    let (mut lo_decision, mut hi_decision) = (Some(at_lo), None);
    while &hi - &lo > *eps {
        let mid = midpoint(&lo, &hi);
        let dec = fits(&mid)?;
        if dec.verdict.is_yes() {
            hi = mid;
            hi_decision = Some(dec);
        } else {
            lo = mid;
            lo_decision = Some(dec);
        }
    }
    Ok(Bracket { lo, hi, lo_decision, hi_decision })
}

/// One bracket per `a` in `min, min + step, …, ≤ max`, computed in parallel
/// and returned in increasing `a`.
pub fn staircase(min: &Rational, max: &Rational, step: &Rational, eps: &Rational) -> Result<Vec<(Rational, Bracket)>> {
    if !step.is_positive() {
        return invalid(format!("step must be positive, got {step}"));
    }
    if min > max {
        return invalid(format!("empty range [{min}, {max}]"));
    }
    let mut points = Vec::new();
    let mut a = min.clone();
    while a <= *max {
        points.push(a.clone());
        a += step;
    }
    points
        .into_par_iter()
        .map(|a| staircase_point(&a, eps).map(|b| (a, b)))
        .collect()
}

/// Decides `⊔ int B(a_i) ↪ B(μ)` via the class `(μ; a_1, …, a_M)`.
pub fn ball_packing(sizes: &[Rational], mu: &Rational) -> Result<EmbedDecision> {
    if sizes.is_empty() {
        return invalid("at least one ball is required");
    }
    if let Some(bad) = sizes.iter().find(|s| !s.is_positive()) {
        return invalid(format!("ball sizes must be positive, got {bad}"));
    }
    if !mu.is_positive() {
        return invalid(format!("target ball size must be positive, got {mu}"));
    }
    let class = ConeClass::new(mu.clone(), sizes.to_vec());
    let cone = in_cone_closure(&class)?;
    Ok(EmbedDecision {
        verdict: cone.verdict,
        cone,
        class: EmbeddingClass { class, balls: sizes.to_vec(), domain_balls: sizes.len(), scale: Rational::one() },
        capacity_witness: None,
    })
}
