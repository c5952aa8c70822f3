//! Closed-form prime-count bounds and the inequality suite built on them.
//!
//! Every expression is evaluated in `f64`. Decomposition quantities are exact
//! half-integers and convert to `f64` without rounding, so the only error is in
//! the logarithms; comparisons closer than [`GUARD_BAND`] report
//! [`Outcome::Marginal`] instead of a verdict.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prime_table::PrimeTable;
use crate::sce_model::Decomposition;

pub const GUARD_BAND: f64 = 1e-9;
/// Multiplier used by the wing and teeter lemmas; a valid upper bound for all x > 1.
pub const DEFAULT_UPPER: f64 = 1.2551;
/// Multiplier printed with the headline inequality. First fails at x = 19.
pub const HEADLINE_UPPER: f64 = 1.2251;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const MAX_ITERATIONS: u32 = 200;

/// Root of `f_35` as printed.
pub const PRINTED_F35_ROOT: f64 = 130.457_457_8;
pub const PRINTED_THRESHOLD_235: f64 = 2322.61;
pub const PRINTED_THRESHOLD_24: f64 = 2525.67;
/// The wing-bound lemma is stated for E > 34 but its argument needs E > 141.
pub const WING_PROOF_GATE: u64 = 141;

/// Upper multiplier `c` in `pi(x) <= c x / ln x`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct BoundConstant(f64);

impl BoundConstant {
    pub fn new(c: f64) -> Result<Self> {
        if c.is_finite() && c > 1.0 {
            Ok(BoundConstant(c))
        } else {
            Err(Error::invalid(format!("upper constant must be > 1, got {c}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for BoundConstant {
    fn default() -> Self {
        BoundConstant(DEFAULT_UPPER)
    }
}

impl TryFrom<f64> for BoundConstant {
    type Error = Error;

    fn try_from(c: f64) -> Result<Self> {
        BoundConstant::new(c)
    }
}

impl From<BoundConstant> for f64 {
    fn from(c: BoundConstant) -> f64 {
        c.0
    }
}

/// One inequality of the suite, identified by its stable id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Inequality {
    DusartLower,
    DusartUpper,
    Eq33,
    Eq34,
    Eq35,
    Eq35_5,
    Eq36,
    Eq37,
    Eq38,
    Eq39,
    Eq235,
    Eq24,
}

impl Inequality {
    /// The inequalities checked per decomposition, in report order.
    pub const SUITE: [Inequality; 10] = [
        Inequality::Eq33,
        Inequality::Eq34,
        Inequality::Eq35,
        Inequality::Eq35_5,
        Inequality::Eq36,
        Inequality::Eq37,
        Inequality::Eq38,
        Inequality::Eq39,
        Inequality::Eq235,
        Inequality::Eq24,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Inequality::DusartLower => "dusart_lower",
            Inequality::DusartUpper => "dusart_upper",
            Inequality::Eq33 => "eq33",
            Inequality::Eq34 => "eq34",
            Inequality::Eq35 => "eq35",
            Inequality::Eq35_5 => "eq35_5",
            Inequality::Eq36 => "eq36",
            Inequality::Eq37 => "eq37",
            Inequality::Eq38 => "eq38",
            Inequality::Eq39 => "eq39",
            Inequality::Eq235 => "eq235",
            Inequality::Eq24 => "eq24",
        }
    }

    /// Whether the inequality is claimed at `e`.
    pub fn applies(self, e: u64) -> bool {
        let x = e as f64;
        match self {
            Inequality::DusartLower | Inequality::Eq33 | Inequality::Eq34 | Inequality::Eq35 => {
                e >= 17
            }
            Inequality::DusartUpper => e >= 2,
            Inequality::Eq35_5 => x > PRINTED_F35_ROOT,
            Inequality::Eq36 | Inequality::Eq37 | Inequality::Eq38 | Inequality::Eq39 => e > 34,
            Inequality::Eq235 => x > PRINTED_THRESHOLD_235,
            Inequality::Eq24 => x > PRINTED_THRESHOLD_24,
        }
    }

    pub fn is_wing(self) -> bool {
        matches!(
            self,
            Inequality::Eq36 | Inequality::Eq37 | Inequality::Eq38 | Inequality::Eq39
        )
    }

    /// Two-sided inequalities with closed-form lower and upper bounds.
    fn has_sides(self) -> bool {
        matches!(
            self,
            Inequality::Eq33
                | Inequality::Eq34
                | Inequality::Eq35
                | Inequality::Eq36
                | Inequality::Eq37
                | Inequality::Eq38
                | Inequality::Eq39
        )
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Inequality {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Inequality::DusartLower, Inequality::DusartUpper]
            .into_iter()
            .chain(Inequality::SUITE)
            .find(|i| i.id() == s)
            .ok_or_else(|| Error::invalid(format!("unknown inequality id {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Lower,
    Upper,
}

/// A single real-valued expression from the bound catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundFn {
    /// `x / ln x`
    DusartLower,
    /// `c x / ln x`
    DusartUpper,
    /// One side of a two-sided inequality (33, 34, 35, 36..39).
    Side(Inequality, Side),
    /// `c x / ln x - x/4 - 1`
    F35,
    /// `x/4 - 1.2251 x/ln x + 1 - (1.2551 x/ln x - 1)`, both constants as printed.
    Threshold235,
    /// `(x/2 - 1)/ln(x/2 - 1) - 1 - (1.2551 x/ln x - 1)`, constant as printed.
    Threshold24,
}

impl BoundFn {
    pub fn id(self) -> String {
        match self {
            BoundFn::DusartLower => "dusart_lower".into(),
            BoundFn::DusartUpper => "dusart_upper".into(),
            BoundFn::Side(ineq, Side::Lower) => format!("{}.lower", ineq.id()),
            BoundFn::Side(ineq, Side::Upper) => format!("{}.upper", ineq.id()),
            BoundFn::F35 => "f_35".into(),
            BoundFn::Threshold235 => "threshold_235".into(),
            BoundFn::Threshold24 => "threshold_24".into(),
        }
    }

    /// Smallest x (exclusive) where every logarithm is positive.
    fn domain_floor(self) -> (f64, &'static str) {
        let needs_shifted_half = matches!(
            self,
            BoundFn::Threshold24
                | BoundFn::Side(Inequality::Eq36 | Inequality::Eq37, _)
                | BoundFn::Side(Inequality::Eq38, Side::Upper)
                | BoundFn::Side(Inequality::Eq39, Side::Lower)
        );
        let needs_half = matches!(
            self,
            BoundFn::Side(Inequality::Eq38 | Inequality::Eq39, _)
        );
        if needs_shifted_half {
            (4.0, "ln(x/2 - 1) must be positive")
        } else if needs_half {
            (2.0, "ln(x/2) must be positive")
        } else {
            (1.0, "ln x must be positive")
        }
    }
}

impl FromStr for BoundFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dusart_lower" | "lower_pi" => return Ok(BoundFn::DusartLower),
            "dusart_upper" | "upper_pi" => return Ok(BoundFn::DusartUpper),
            "f_35" => return Ok(BoundFn::F35),
            "threshold_235" => return Ok(BoundFn::Threshold235),
            "threshold_24" => return Ok(BoundFn::Threshold24),
            _ => {}
        }
        let unknown = || Error::invalid(format!("unknown bound function {s:?}"));
        let (ineq, side) = s.split_once('.').ok_or_else(unknown)?;
        let ineq: Inequality = ineq.parse().map_err(|_| unknown())?;
        if !ineq.has_sides() {
            return Err(unknown());
        }
        let side = match side {
            "lower" => Side::Lower,
            "upper" => Side::Upper,
            _ => return Err(unknown()),
        };
        Ok(BoundFn::Side(ineq, side))
    }
}

fn x_over_ln(x: f64) -> f64 {
    x / x.ln()
}

/// Evaluates one catalog expression at `x`.
pub fn bound_value(f: BoundFn, x: f64, c: BoundConstant) -> Result<f64> {
    let (floor, reason) = f.domain_floor();
    if !(x > floor) || !x.is_finite() {
        return Err(Error::Domain { id: f.id(), x, reason });
    }
    Ok(eval(f, x, c.value()))
}

fn eval(f: BoundFn, x: f64, c: f64) -> f64 {
    use Inequality::*;
    use Side::*;
    let full = || x_over_ln(x);
    let half = || x_over_ln(x / 2.0);
    let shifted = || x_over_ln(x / 2.0 - 1.0);
    let quarter = x / 4.0;
    match f {
        BoundFn::DusartLower => full(),
        BoundFn::DusartUpper => c * full(),
        BoundFn::F35 => c * full() - quarter - 1.0,
        BoundFn::Threshold235 => {
            (quarter - HEADLINE_UPPER * full() + 1.0) - (DEFAULT_UPPER * full() - 1.0)
        }
        BoundFn::Threshold24 => (shifted() - 1.0) - (DEFAULT_UPPER * full() - 1.0),
        BoundFn::Side(ineq, side) => match (ineq, side) {
            // b + c + 2a
            (Eq33, Lower) => x / 2.0 - c * full() + 1.0,
            (Eq33, Upper) => x / 2.0 - full() + 1.0,
            // b + c + 2d
            (Eq34, Lower) => full() - 1.0,
            (Eq34, Upper) => c * full() - 1.0,
            // d - a
            (Eq35, Lower) => full() - quarter - 1.0,
            (Eq35, Upper) => c * full() - quarter - 1.0,
            // L2
            (Eq36, Lower) => shifted() - 1.0,
            (Eq36, Upper) => c * half() - 1.0,
            // L1
            (Eq37, Lower) => quarter - c * half() + 1.0,
            (Eq37, Upper) => quarter - shifted() + 1.0,
            // R2
            (Eq38, Lower) => full() - c * half(),
            (Eq38, Upper) => c * full() - shifted(),
            // R1
            (Eq39, Lower) => quarter - c * full() + shifted(),
            (Eq39, Upper) => quarter - full() + c * half(),
            _ => unreachable!("{ineq} has no closed-form sides"),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Holds,
    Fails,
    /// Within [`GUARD_BAND`] of the bound.
    Marginal,
    NotApplicable,
}

impl Outcome {
    /// Folds several comparisons: any failure wins, then any marginal.
    fn all(parts: &[Outcome]) -> Outcome {
        if parts.contains(&Outcome::Fails) {
            Outcome::Fails
        } else if parts.contains(&Outcome::Marginal) {
            Outcome::Marginal
        } else {
            Outcome::Holds
        }
    }

    pub fn is_failure(self) -> bool {
        self == Outcome::Fails
    }

    pub fn is_applicable(self) -> bool {
        self != Outcome::NotApplicable
    }
}

/// `lhs < rhs` with the guard band.
fn strictly_less(lhs: f64, rhs: f64) -> Outcome {
    if (lhs - rhs).abs() <= GUARD_BAND {
        Outcome::Marginal
    } else if lhs < rhs {
        Outcome::Holds
    } else {
        Outcome::Fails
    }
}

/// `lhs <= rhs` with the guard band.
fn at_most(lhs: f64, rhs: f64) -> Outcome {
    if (lhs - rhs).abs() <= GUARD_BAND {
        Outcome::Marginal
    } else if lhs <= rhs {
        Outcome::Holds
    } else {
        Outcome::Fails
    }
}

fn exact_less(lhs: u64, rhs: u64) -> Outcome {
    if lhs < rhs {
        Outcome::Holds
    } else {
        Outcome::Fails
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    #[serde(rename = "E")]
    pub e: u64,
    pub teeter33: Outcome,
    pub teeter34: Outcome,
    pub cor35: Outcome,
    pub ineq35_5: Outcome,
    pub wing36: Outcome,
    pub wing37: Outcome,
    pub wing38: Outcome,
    pub wing39: Outcome,
    pub ineq235: Outcome,
    pub ineq24: Outcome,
}

impl BoundReport {
    pub fn entries(&self) -> [(Inequality, Outcome); 10] {
        [
            (Inequality::Eq33, self.teeter33),
            (Inequality::Eq34, self.teeter34),
            (Inequality::Eq35, self.cor35),
            (Inequality::Eq35_5, self.ineq35_5),
            (Inequality::Eq36, self.wing36),
            (Inequality::Eq37, self.wing37),
            (Inequality::Eq38, self.wing38),
            (Inequality::Eq39, self.wing39),
            (Inequality::Eq235, self.ineq235),
            (Inequality::Eq24, self.ineq24),
        ]
    }

    pub fn get(&self, ineq: Inequality) -> Option<Outcome> {
        self.entries().iter().find(|(i, _)| *i == ineq).map(|&(_, o)| o)
    }
}

/// Evaluates the whole inequality suite on one decomposition.
pub fn check_bounds(dec: &Decomposition, c: BoundConstant) -> BoundReport {
    let e = dec.e;
    let x = e as f64;
    let [a2, b2, c2, d2] = dec.doubled_quadruple();
    let half = |doubled: u64| doubled as f64 / 2.0;
    let two_sided = |ineq: Inequality, q: f64| -> Outcome {
        if !ineq.applies(e) {
            return Outcome::NotApplicable;
        }
        let lo = eval(BoundFn::Side(ineq, Side::Lower), x, c.value());
        let hi = eval(BoundFn::Side(ineq, Side::Upper), x, c.value());
        Outcome::all(&[strictly_less(lo, q), strictly_less(q, hi)])
    };
    let gated = |ineq: Inequality, outcome: Outcome| {
        if ineq.applies(e) {
            outcome
        } else {
            Outcome::NotApplicable
        }
    };

    BoundReport {
        e,
        teeter33: two_sided(Inequality::Eq33, half(b2 + c2 + 2 * a2)),
        teeter34: two_sided(Inequality::Eq34, half(b2 + c2 + 2 * d2)),
        cor35: two_sided(Inequality::Eq35, (d2 as f64 - a2 as f64) / 2.0),
        ineq35_5: gated(Inequality::Eq35_5, exact_less(d2, a2)),
        wing36: two_sided(Inequality::Eq36, dec.l2.to_f64()),
        wing37: two_sided(Inequality::Eq37, dec.l1.to_f64()),
        wing38: two_sided(Inequality::Eq38, dec.r2.to_f64()),
        wing39: two_sided(Inequality::Eq39, dec.r1.to_f64()),
        ineq235: gated(Inequality::Eq235, exact_less(c2 + 2 * d2, a2)),
        ineq24: gated(Inequality::Eq24, exact_less(b2 + 2 * d2, a2)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DusartCheck {
    pub x: u64,
    pub pi: u64,
    /// `x / ln x <= pi(x)`; not applicable below 17.
    pub lower: Outcome,
    /// `pi(x) <= c x / ln x`
    pub upper: Outcome,
}

impl DusartCheck {
    pub fn lower_ok(&self) -> Option<bool> {
        self.lower.is_applicable().then_some(self.lower != Outcome::Fails)
    }

    pub fn upper_ok(&self) -> bool {
        self.upper != Outcome::Fails
    }
}

pub fn check_dusart(x: u64, table: &PrimeTable, c: BoundConstant) -> Result<DusartCheck> {
    if x < 2 {
        return Err(Error::invalid(format!("Dusart bounds need x >= 2, got {x}")));
    }
    let pi = table.pi(x)?;
    let xf = x as f64;
    let lower = if Inequality::DusartLower.applies(x) {
        at_most(x_over_ln(xf), pi as f64)
    } else {
        Outcome::NotApplicable
    };
    let upper = at_most(pi as f64, c.value() * x_over_ln(xf));
    Ok(DusartCheck { x, pi, lower, upper })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub root: f64,
    pub iterations: u32,
    pub value_at_root: f64,
}

/// Bisection on an arbitrary function. Runs `ceil(log2((hi - lo) / tol))`
/// halvings, capped at [`MAX_ITERATIONS`], and returns the final midpoint.
pub fn bisect<F>(id: &str, f: F, lo: f64, hi: f64, tol: f64) -> Result<Root>
where
    F: Fn(f64) -> f64,
{
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::invalid(format!("bad bracket [{lo}, {hi}]")));
    }
    let (f_lo, f_hi) = (f(lo), f(hi));
    if f_lo == 0.0 {
        return Ok(Root { root: lo, iterations: 0, value_at_root: 0.0 });
    }
    if f_hi == 0.0 {
        return Ok(Root { root: hi, iterations: 0, value_at_root: 0.0 });
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::Bracket { id: id.to_string(), lo, hi, f_lo, f_hi });
    }

    let wanted = ((hi - lo) / tol).log2().ceil().max(0.0);
    let iterations = (wanted as u32).min(MAX_ITERATIONS);
    let (mut a, mut b) = (lo, hi);
    let lo_negative = f_lo < 0.0;
    for _ in 0..iterations {
        let mid = a + (b - a) / 2.0;
        let fm = f(mid);
        if fm == 0.0 {
            a = mid;
            b = mid;
            break;
        }
        if (fm < 0.0) == lo_negative {
            a = mid;
        } else {
            b = mid;
        }
    }
    let root = a + (b - a) / 2.0;
    Ok(Root { root, iterations, value_at_root: f(root) })
}

/// Locates a sign change of a catalog expression on `[lo, hi]`.
pub fn find_root(f: BoundFn, lo: f64, hi: f64, tol: f64, c: BoundConstant) -> Result<Root> {
    // Surface domain errors at the endpoints before bisecting.
    bound_value(f, lo, c)?;
    bound_value(f, hi, c)?;
    bisect(&f.id(), |x| eval(f, x, c.value()), lo, hi, tol)
}
