//! Membership of classes `(μ; a_1, …, a_M)` in the closed symplectic cone of
//! the `M`-fold blow-up of the projective plane, decided by Cremona reduction.
//!
//! A class `μℓ − Σ a_i e_i` with nonnegative entries lies in the closure of
//! the cone iff `μ² ≥ Σ a_i²` and repeated sort-then-Cremona moves reach a
//! reduced class (ordered, `μ ≥ a_1 + a_2 + a_3`) without ever producing a
//! negative entry. Reduced nonnegative classes pair nonnegatively with every
//! positive tuple of nonnegative canonical pairing, and a negative entry `a_i`
//! exhibits an exceptional class `e_i` with negative area.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Num, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{invalid, Result};
use crate::rational::{common_denominator, Rational};

/// Coefficients of `μℓ − Σ a_i e_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeClass {
    pub mu: Rational,
    pub coeffs: Vec<Rational>,
}

/// Integer constraint tuple `(d; m_1, …, m_M)`, i.e. the class `dL − Σ m_i E_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexTuple {
    pub d: i64,
    pub m: Vec<i64>,
}

impl fmt::Display for ConeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|a| a.to_string()).collect();
        write!(f, "({}; {})", self.mu, parts.join(", "))
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.m.iter().map(|a| a.to_string()).collect();
        write!(f, "({}; {})", self.d, parts.join(", "))
    }
}

fn top3<T: Clone + Zero>(xs: &[T]) -> [T; 3] {
    let at = |i: usize| xs.get(i).cloned().unwrap_or_else(T::zero);
    [at(0), at(1), at(2)]
}

impl ConeClass {
    pub fn new(mu: Rational, coeffs: Vec<Rational>) -> Self {
        ConeClass { mu, coeffs }
    }

    pub fn is_positive(&self) -> bool {
        !self.mu.is_negative() && self.coeffs.iter().all(|a| !a.is_negative())
    }

    pub fn is_ordered(&self) -> bool {
        self.coeffs.windows(2).all(|w| w[0] >= w[1])
    }

    /// Ordered, positive and `μ ≥ a_1 + a_2 + a_3` (missing entries count as 0).
    pub fn is_reduced(&self) -> bool {
        let [a1, a2, a3] = top3(&self.coeffs);
        self.is_ordered() && self.is_positive() && self.mu >= a1 + a2 + a3
    }

    /// `μ² − Σ a_i²`.
    pub fn self_intersection(&self) -> Rational {
        let sq: Rational = self.coeffs.iter().map(|a| a * a).sum();
        &self.mu * &self.mu - sq
    }

    /// `3μ − Σ a_i`, the pairing with `−K = (3; 1, …, 1)`.
    pub fn chern(&self) -> Rational {
        let s: Rational = self.coeffs.iter().sum();
        Rational::from_integer(BigInt::from(3)) * &self.mu - s
    }

    /// Zero entries appended up to `len`.
    pub fn padded(&self, len: usize) -> Self {
        let mut out = self.clone();
        while out.coeffs.len() < len {
            out.coeffs.push(Rational::zero());
        }
        out
    }

    pub fn sorted(&self) -> Self {
        let mut out = self.clone();
        out.coeffs.sort_by(|x, y| y.cmp(x));
        out
    }
}

impl IndexTuple {
    pub fn new(d: i64, m: Vec<i64>) -> Self {
        IndexTuple { d, m }
    }

    pub fn padded(&self, len: usize) -> Self {
        let mut out = self.clone();
        out.m.resize(out.m.len().max(len), 0);
        out
    }
}

/// Cremona transformation on the first three entries:
/// `d' = 2d − (m_1 + m_2 + m_3)`, `m_i' = d − (m_j + m_k)`. Shorter inputs are
/// padded with zeros first.
pub trait Cremona: Sized {
    fn cremona(&self) -> Self;
}

fn cremona_in_place<T: Clone + Num>(head: &mut T, entries: &mut Vec<T>) {
    while entries.len() < 3 {
        entries.push(T::zero());
    }
    let d = head.clone();
    let [m1, m2, m3] = top3(entries);
    *head = d.clone() + d.clone() - (m1.clone() + m2.clone() + m3.clone());
    entries[0] = d.clone() - (m2.clone() + m3.clone());
    entries[1] = d.clone() - (m1.clone() + m3);
    entries[2] = d - (m1 + m2);
}

impl Cremona for ConeClass {
    fn cremona(&self) -> Self {
        let mut out = self.clone();
        cremona_in_place(&mut out.mu, &mut out.coeffs);
        out
    }
}

impl Cremona for IndexTuple {
    fn cremona(&self) -> Self {
        let mut out = self.clone();
        cremona_in_place(&mut out.d, &mut out.m);
        out
    }
}

/// `(μ; a) · (d; m) = dμ − Σ a_i m_i`.
pub fn pairing(alpha: &ConeClass, t: &IndexTuple) -> Result<Rational> {
    if alpha.coeffs.len() != t.m.len() {
        return invalid(format!(
            "pairing needs equal lengths, got {} and {}",
            alpha.coeffs.len(),
            t.m.len()
        ));
    }
    let dot: Rational = alpha
        .coeffs
        .iter()
        .zip(&t.m)
        .map(|(a, &m)| a * Rational::from_integer(BigInt::from(m)))
        .sum();
    Ok(&alpha.mu * Rational::from_integer(BigInt::from(t.d)) - dot)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TupleInvariants {
    /// `d² − Σ m_i²`
    pub self_int: i64,
    /// `3d − Σ m_i`
    pub chern: i64,
    /// `Σ (m_i² + m_i) ≤ d² + 3d`
    pub in_f: bool,
}

pub fn tuple_invariants(t: &IndexTuple) -> TupleInvariants {
    let sq: i64 = t.m.iter().map(|m| m * m).sum();
    let lin: i64 = t.m.iter().sum();
    TupleInvariants {
        self_int: t.d * t.d - sq,
        chern: 3 * t.d - lin,
        in_f: sq + lin <= t.d * t.d + 3 * t.d,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveOp {
    Sort,
    Cremona,
}

impl MoveOp {
    pub fn name(self) -> &'static str {
        match self {
            MoveOp::Sort => "sort",
            MoveOp::Cremona => "cremona",
        }
    }
}

/// One reduction step and the state right after it, as integers over the
/// log's scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Move {
    pub op: MoveOp,
    state: Vec<BigInt>,
}

/// Every non-trivial reordering and every Cremona step of a reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveLog {
    scale: BigInt,
    moves: Vec<Move>,
}

fn state_class(state: &[BigInt], scale: &BigInt) -> ConeClass {
    let r = |n: &BigInt| Rational::new(n.clone(), scale.clone());
    ConeClass::new(r(&state[0]), state[1..].iter().map(r).collect())
}

impl MoveLog {
    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn cremona_count(&self) -> usize {
        self.moves.iter().filter(|m| m.op == MoveOp::Cremona).count()
    }

    /// State after move `i`.
    pub fn state(&self, i: usize) -> ConeClass {
        state_class(&self.moves[i].state, &self.scale)
    }

    /// Re-applies every move to `start` and checks each recorded state.
    /// Returns the final state, or the index of the first move whose recorded
    /// state does not match.
    pub fn replay(&self, start: &ConeClass) -> std::result::Result<ConeClass, usize> {
        let mut cur = start.padded(3);
        for (i, mv) in self.moves.iter().enumerate() {
            cur = match mv.op {
                MoveOp::Sort => cur.sorted(),
                MoveOp::Cremona => cur.cremona(),
            };
            if cur != self.state(i) {
                return Err(i);
            }
        }
        Ok(cur)
    }

    /// `[{"op": "sort"|"cremona", "state": [mu, a…]}, …]` with rationals as
    /// lowest-terms strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.moves.len())
                .map(|i| {
                    let c = self.state(i);
                    let mut state = vec![Value::String(c.mu.to_string())];
                    state.extend(c.coeffs.iter().map(|a| Value::String(a.to_string())));
                    json!({ "op": self.moves[i].op.name(), "state": state })
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stop {
    Reduced,
    NegativeMu,
    NegativeEntry(usize),
}

/// Integer reduction loop over `state = [μ, a_1, …]`.
fn reduce_integral(state: &mut [BigInt], moves: &mut Vec<Move>, stop_on_negative: bool) -> Stop {
    loop {
        let coeffs = &mut state[1..];
        if !coeffs.windows(2).all(|w| w[0] >= w[1]) {
            coeffs.sort_by(|x, y| y.cmp(x));
            moves.push(Move { op: MoveOp::Sort, state: state.to_vec() });
        }
        if state[0].is_negative() {
            return Stop::NegativeMu;
        }
        if stop_on_negative {
            if let Some(i) = state[1..].iter().position(Signed::is_negative) {
                return Stop::NegativeEntry(i);
            }
        }
        let [a1, a2, a3] = top3(&state[1..]);
        if state[0] >= a1 + a2 + a3 {
            return Stop::Reduced;
        }
        let (head, rest) = state.split_first_mut().expect("state holds μ");
        let d = head.clone();
        let [m1, m2, m3] = top3(rest);
        *head = &d + &d - (&m1 + &m2 + &m3);
        rest[0] = &d - (&m2 + &m3);
        rest[1] = &d - (&m1 + &m3);
        rest[2] = d - (m1 + m2);
        moves.push(Move { op: MoveOp::Cremona, state: state.to_vec() });
    }
}

fn integral_state(alpha: &ConeClass) -> (Vec<BigInt>, BigInt) {
    let alpha = alpha.padded(3);
    let scale = common_denominator(std::iter::once(&alpha.mu).chain(&alpha.coeffs));
    let lift = |x: &Rational| x.numer() * (&scale / x.denom());
    let state = std::iter::once(&alpha.mu).chain(&alpha.coeffs).map(lift).collect();
    (state, scale)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub reduced: ConeClass,
    pub log: MoveLog,
}

/// Sorts and applies Cremona moves until the class is ordered with
/// `μ ≥ a_1 + a_2 + a_3`, or `μ < 0`. Inputs shorter than three entries are
/// padded with zeros.
pub fn reduce(alpha: &ConeClass) -> Reduction {
    let (mut state, scale) = integral_state(alpha);
    let mut moves = Vec::new();
    reduce_integral(&mut state, &mut moves, false);
    Reduction { reduced: state_class(&state, &scale), log: MoveLog { scale, moves } }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
}

impl Verdict {
    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConeCertificate {
    /// Reached a reduced class with nonnegative entries.
    Reduced { reduced_form: ConeClass, log: MoveLog },
    /// `μ² < Σ a_i²`; `reduction` is what the Cremona reduction did with the
    /// same class.
    VolumeViolation { mu_squared: Rational, sum_of_squares: Rational, reduction: Box<ConeCertificate> },
    /// A reduction step produced `a_index < 0` (index into the logged state).
    NegativeEntry { index: usize, reduced_form: ConeClass, log: MoveLog },
    /// A reduction step produced `μ < 0`.
    NegativeMu { reduced_form: ConeClass, log: MoveLog },
}

fn reduction_certificate(alpha: &ConeClass) -> ConeCertificate {
    let (mut state, scale) = integral_state(alpha);
    let mut moves = Vec::new();
    let stop = reduce_integral(&mut state, &mut moves, true);
    let reduced_form = state_class(&state, &scale);
    let log = MoveLog { scale, moves };
    match stop {
        Stop::Reduced => ConeCertificate::Reduced { reduced_form, log },
        Stop::NegativeMu => ConeCertificate::NegativeMu { reduced_form, log },
        Stop::NegativeEntry(index) => ConeCertificate::NegativeEntry { index, reduced_form, log },
    }
}

impl ConeCertificate {
    pub fn kind(&self) -> &'static str {
        match self {
            ConeCertificate::Reduced { .. } => "reduced",
            ConeCertificate::VolumeViolation { .. } => "volume_violation",
            ConeCertificate::NegativeEntry { .. } => "negative_entry",
            ConeCertificate::NegativeMu { .. } => "negative_mu",
        }
    }

    /// The reduction-route certificate: itself, or the one attached to a
    /// volume violation.
    pub fn reduction(&self) -> &ConeCertificate {
        match self {
            ConeCertificate::VolumeViolation { reduction, .. } => reduction,
            other => other,
        }
    }

    pub fn log(&self) -> Option<&MoveLog> {
        match self.reduction() {
            ConeCertificate::Reduced { log, .. }
            | ConeCertificate::NegativeEntry { log, .. }
            | ConeCertificate::NegativeMu { log, .. } => Some(log),
            ConeCertificate::VolumeViolation { .. } => None,
        }
    }

    /// Last state reached by the reduction.
    pub fn final_form(&self) -> Option<&ConeClass> {
        match self.reduction() {
            ConeCertificate::Reduced { reduced_form, .. }
            | ConeCertificate::NegativeEntry { reduced_form, .. }
            | ConeCertificate::NegativeMu { reduced_form, .. } => Some(reduced_form),
            ConeCertificate::VolumeViolation { .. } => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("kind".into(), Value::String(self.kind().into()));
        match self {
            ConeCertificate::VolumeViolation { mu_squared, sum_of_squares, reduction } => {
                obj.insert("mu_squared".into(), Value::String(mu_squared.to_string()));
                obj.insert("sum_of_squares".into(), Value::String(sum_of_squares.to_string()));
                obj.insert("reduction".into(), reduction.to_json());
            }
            ConeCertificate::NegativeEntry { index, .. } => {
                obj.insert("index".into(), Value::from(*index));
            }
            _ => {}
        }
        if !matches!(self, ConeCertificate::VolumeViolation { .. }) {
            if let Some(form) = self.final_form() {
                obj.insert("final_form".into(), class_to_json(form));
            }
            if let Some(log) = self.log() {
                obj.insert("moves".into(), log.to_json());
            }
        }
        Value::Object(obj)
    }
}

pub(crate) fn class_to_json(c: &ConeClass) -> Value {
    json!({
        "mu": c.mu.to_string(),
        "coeffs": c.coeffs.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeDecision {
    pub verdict: Verdict,
    pub certificate: ConeCertificate,
}

/// Decides whether a nonnegative class lies in the closed symplectic cone.
///
/// Inequalities are closed throughout: `yes` corresponds to an embedding of
/// the open balls.
pub fn in_cone_closure(alpha: &ConeClass) -> Result<ConeDecision> {
    if !alpha.is_positive() {
        return invalid(format!("cone membership expects nonnegative entries, got {alpha}"));
    }
    let mu_squared = &alpha.mu * &alpha.mu;
    let sum_of_squares: Rational = alpha.coeffs.iter().map(|a| a * a).sum();
    let reduction = reduction_certificate(alpha);
    if mu_squared < sum_of_squares {
        return Ok(ConeDecision {
            verdict: Verdict::No,
            certificate: ConeCertificate::VolumeViolation {
                mu_squared,
                sum_of_squares,
                reduction: Box::new(reduction),
            },
        });
    }
    let verdict = match reduction {
        ConeCertificate::Reduced { .. } => Verdict::Yes,
        _ => Verdict::No,
    };
    Ok(ConeDecision { verdict, certificate: reduction })
}

/// Whether `t` is the class of an exceptional sphere: self-intersection −1,
/// canonical pairing 1, and Cremona/permutation moves bring it to
/// `(0; −1, 0, …, 0)`.
pub fn is_exceptional(t: &IndexTuple) -> bool {
    let inv = tuple_invariants(t);
    if inv.self_int != -1 || inv.chern != 1 {
        return false;
    }
    let mut cur = t.padded(3);
    loop {
        cur.m.sort_by(|x, y| y.cmp(x));
        if cur.d < 0 {
            return false;
        }
        if cur.d == 0 {
            // invariants force a single −1 among zeros
            let ones = cur.m.iter().filter(|&&m| m == -1).count();
            return ones == 1 && cur.m.iter().all(|&m| m == 0 || m == -1);
        }
        let [m1, m2, m3] = top3(&cur.m);
        if cur.d >= m1 + m2 + m3 {
            return false;
        }
        cur = cur.cremona();
    }
}
