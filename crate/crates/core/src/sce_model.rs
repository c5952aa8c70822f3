//! Quadruple decomposition of an even number from its additive interactions.
//!
//! Every pair of odd positives `x <= y` with `x + y = E` is classified by the
//! primality of `x` and `y`. The four tallies give `E/4 = a + b + c + d`, where
//! `a` and `d` pick up a half from the self pair `x = y = E/2` when `E/2` is odd.
//! 1 counts as an odd nonprime throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::half::HalfValue;
use crate::prime_table::PrimeTable;

pub(crate) fn check_even(e: u64) -> Result<()> {
    if e < 2 || e % 2 != 0 {
        return Err(Error::invalid(format!("expected an even number >= 2, got {e}")));
    }
    Ok(())
}

/// Number of additive interactions of `e`: `floor((e + 2) / 4)`.
pub fn interaction_count(e: u64) -> u64 {
    (e + 2) / 4
}

/// Lazily yields the additive interactions `(x, y)` of an even number, by increasing `x`.
#[derive(Debug, Clone)]
pub struct Interactions {
    e: u64,
    x: u64,
}

impl Iterator for Interactions {
    type Item = (u64, u64);

    fn next(&mut self) -> Option<(u64, u64)> {
        if self.x > self.e / 2 {
            return None;
        }
        let pair = (self.x, self.e - self.x);
        self.x += 2;
        Some(pair)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = if self.x > self.e / 2 {
            0
        } else {
            ((self.e / 2 - self.x) / 2 + 1) as usize
        };
        (left, Some(left))
    }
}

impl ExactSizeIterator for Interactions {}

pub fn interactions(e: u64) -> Result<Interactions> {
    check_even(e)?;
    Ok(Interactions { e, x: 1 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelfKind {
    None,
    PrimeSelf,
    NonprimeSelf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteractionTallies {
    #[serde(rename = "E")]
    pub e: u64,
    /// Both nonprime, `x < y`.
    pub nn: u64,
    /// `x` nonprime, `y` prime.
    pub np: u64,
    /// `x` prime, `y` nonprime.
    pub pn: u64,
    /// Both prime, `x < y`.
    pub pp: u64,
    pub self_kind: SelfKind,
}

impl InteractionTallies {
    pub fn total(&self) -> u64 {
        self.nn + self.np + self.pn + self.pp + u64::from(self.self_kind != SelfKind::None)
    }
}

/// Classifies every interaction of `e` without materializing the pair list.
pub fn tally(e: u64, table: &PrimeTable) -> Result<InteractionTallies> {
    check_even(e)?;
    table.check_covered(e)?;
    let half = e / 2;
    let mut t = InteractionTallies {
        e,
        nn: 0,
        np: 0,
        pn: 0,
        pp: 0,
        self_kind: SelfKind::None,
    };
    let mut x = 1;
    while x < half {
        let px = table.is_prime_unchecked(x);
        let py = table.is_prime_unchecked(e - x);
        match (px, py) {
            (false, false) => t.nn += 1,
            (false, true) => t.np += 1,
            (true, false) => t.pn += 1,
            (true, true) => t.pp += 1,
        }
        x += 2;
    }
    if half % 2 == 1 {
        t.self_kind = if table.is_prime_unchecked(half) {
            SelfKind::PrimeSelf
        } else {
            SelfKind::NonprimeSelf
        };
    }
    Ok(t)
}

/// `d_E` alone: prime pairs plus half a prime self pair. Skips the other classes.
pub fn prime_pair_weight(e: u64, table: &PrimeTable) -> Result<HalfValue> {
    check_even(e)?;
    table.check_covered(e)?;
    let half = e / 2;
    let mut pairs = 0u64;
    let mut x = 3;
    while x < half {
        if table.is_prime_unchecked(x) && table.is_prime_unchecked(e - x) {
            pairs += 1;
        }
        x += 2;
    }
    let self_prime = half % 2 == 1 && table.is_prime_unchecked(half);
    Ok(HalfValue::from_doubled(2 * pairs + u64::from(self_prime)))
}

/// The quadruple `(a, b, c, d)` of an even number and its four wings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decomposition {
    pub e: u64,
    pub tallies: InteractionTallies,
    pub a: HalfValue,
    pub b: u64,
    pub c: u64,
    pub d: HalfValue,
    /// `a + b`
    pub l1: HalfValue,
    /// `c + d`
    pub l2: HalfValue,
    /// `a + c`
    pub r1: HalfValue,
    /// `b + d`
    pub r2: HalfValue,
}

impl From<InteractionTallies> for Decomposition {
    fn from(t: InteractionTallies) -> Self {
        let a = HalfValue::from_doubled(2 * t.nn + u64::from(t.self_kind == SelfKind::NonprimeSelf));
        let d = HalfValue::from_doubled(2 * t.pp + u64::from(t.self_kind == SelfKind::PrimeSelf));
        let (b, c) = (t.np, t.pn);
        let (bh, ch) = (HalfValue::from_int(b), HalfValue::from_int(c));
        Decomposition {
            e: t.e,
            tallies: t,
            a,
            b,
            c,
            d,
            l1: a + bh,
            l2: ch + d,
            r1: a + ch,
            r2: bh + d,
        }
    }
}

impl Decomposition {
    /// Doubled values of `(a, b, c, d)` on a common integer scale.
    pub fn doubled_quadruple(&self) -> [u64; 4] {
        [self.a.doubled(), 2 * self.b, 2 * self.c, self.d.doubled()]
    }
}

pub fn decompose(e: u64, table: &PrimeTable) -> Result<Decomposition> {
    tally(e, table).map(Decomposition::from)
}

/// Which halving relation applies to `E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HalvingRule {
    /// `E/2` even: compare against the decomposition of `E/2`.
    #[serde(rename = "eq23")]
    Even,
    /// `E/2` odd: compare against the decomposition of `E/2 - 1`.
    #[serde(rename = "eq23_5")]
    Odd,
}

impl HalvingRule {
    pub fn id(self) -> &'static str {
        match self {
            HalvingRule::Even => "eq23",
            HalvingRule::Odd => "eq23_5",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalvingCheck {
    pub rule: HalvingRule,
    /// The relation exactly as printed. For odd `E/2` it always adds the
    /// self-pair half to `L1`, which is wrong whenever `E/2` is prime.
    pub literal_ok: bool,
    /// Same relation with the self-pair half added to `L1` when `E/2` is
    /// nonprime and to `L2` when it is prime.
    pub corrected_ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    #[serde(rename = "E")]
    pub e: u64,
    /// `a + b + c + d = E/4`
    pub eq2_1_ok: bool,
    /// `L1 + L2 = R1 + R2 = E/4`
    pub eq8_6_ok: bool,
    /// `b + c + 2d = pi(E) - 1`
    pub eq22_ok: bool,
    /// `b + c + 2a = E/2 - pi(E) + 1`
    pub eq22_5_ok: bool,
    /// `None` when `E/2 < 2` and there is nothing to halve to.
    pub halving: Option<HalvingCheck>,
    /// Ceilings of the wings against direct odd prime/nonprime counts.
    pub wing_count_ok: bool,
}

impl IdentityReport {
    pub fn halving_ok(&self) -> Option<bool> {
        self.halving.map(|h| h.literal_ok)
    }

    /// Identifiers of every identity that did not hold.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.eq2_1_ok {
            out.push("eq2_1");
        }
        if !self.eq8_6_ok {
            out.push("eq8_6");
        }
        if !self.eq22_ok {
            out.push("eq22");
        }
        if !self.eq22_5_ok {
            out.push("eq22_5");
        }
        if let Some(h) = self.halving {
            if !h.literal_ok {
                out.push(h.rule.id());
            }
        }
        if !self.wing_count_ok {
            out.push("wing_counts");
        }
        out
    }

    pub fn all_ok(&self) -> bool {
        self.failures().is_empty()
    }
}

/// Number of odd integers in the closed interval `[lo, hi]`.
fn odd_count(lo: u64, hi: u64) -> u64 {
    (hi + 1) / 2 - lo / 2
}

pub fn check_identities(dec: &Decomposition, table: &PrimeTable) -> Result<IdentityReport> {
    let e = dec.e;
    check_even(e)?;
    table.check_covered(e)?;
    let [a2, b2, c2, d2] = dec.doubled_quadruple();
    let pi_e = table.pi(e)?;

    let eq2_1_ok = a2 + b2 + c2 + d2 == e / 2;
    let eq8_6_ok = 2 * (dec.l1 + dec.l2).doubled() == e && 2 * (dec.r1 + dec.r2).doubled() == e;
    // Doubled on both sides: 2b + 2c + 4d = 2(pi(E) - 1).
    let eq22_ok = b2 + c2 + 2 * d2 + 2 == 2 * pi_e;
    let eq22_5_ok = b2 + c2 + 2 * a2 + 2 * pi_e == e + 2;

    let half = e / 2;
    let halving = if half < 2 {
        None
    } else {
        Some(check_halving(dec, table)?)
    };

    let left_primes = table.odd_prime_count(0, half)?;
    let right_primes = table.odd_prime_count(half, e)?;
    let wing_count_ok = dec.l1.ceil() == odd_count(0, half) - left_primes
        && dec.l2.ceil() == left_primes
        && dec.r1.ceil() == odd_count(half, e) - right_primes
        && dec.r2.ceil() == right_primes;

    Ok(IdentityReport {
        e,
        eq2_1_ok,
        eq8_6_ok,
        eq22_ok,
        eq22_5_ok,
        halving,
        wing_count_ok,
    })
}

fn check_halving(dec: &Decomposition, table: &PrimeTable) -> Result<HalvingCheck> {
    let half = dec.e / 2;
    let selfhalf = HalfValue::from_doubled(1);
    if half % 2 == 0 {
        let h = decompose(half, table)?;
        let ok = h.l1 + h.r1 == dec.l1 && h.l2 + h.r2 == dec.l2;
        Ok(HalvingCheck {
            rule: HalvingRule::Even,
            literal_ok: ok,
            corrected_ok: ok,
        })
    } else {
        let h = decompose(half - 1, table)?;
        let left_nonprime = h.l1 + h.r1;
        let left_prime = h.l2 + h.r2;
        let literal_ok = left_nonprime + selfhalf == dec.l1 && left_prime == dec.l2;
        let corrected_ok = if table.is_prime(half)? {
            left_nonprime == dec.l1 && left_prime + selfhalf == dec.l2
        } else {
            literal_ok
        };
        Ok(HalvingCheck {
            rule: HalvingRule::Odd,
            literal_ok,
            corrected_ok,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> PrimeTable {
        PrimeTable::build(10_000).unwrap()
    }

    #[test]
    fn interactions_of_twenty() {
        let pairs: Vec<_> = interactions(20).unwrap().collect();
        assert_eq!(pairs, vec![(1, 19), (3, 17), (5, 15), (7, 13), (9, 11)]);
        assert_eq!(interactions(2).unwrap().collect::<Vec<_>>(), vec![(1, 1)]);
        assert_eq!(
            interactions(10).unwrap().collect::<Vec<_>>(),
            vec![(1, 9), (3, 7), (5, 5)]
        );
    }

    #[test]
    fn interactions_reject_odd_and_zero() {
        assert!(matches!(interactions(7), Err(Error::InvalidArgument(_))));
        assert!(matches!(interactions(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn interaction_count_matches_enumeration() {
        for e in (2..2000).step_by(2) {
            let it = interactions(e).unwrap();
            assert_eq!(it.len() as u64, interaction_count(e));
            assert_eq!(it.count() as u64, interaction_count(e), "E = {e}");
        }
    }

    #[test]
    fn worked_example_twenty() {
        let d = decompose(20, &table()).unwrap();
        assert_eq!(d.a, HalfValue::ZERO);
        assert_eq!((d.b, d.c), (2, 1));
        assert_eq!(d.d, HalfValue::from_int(2));
        assert_eq!(
            [d.l1, d.l2, d.r1, d.r2],
            [2, 3, 1, 4].map(HalfValue::from_int)
        );
    }

    #[test]
    fn four_is_the_exception() {
        let d = decompose(4, &table()).unwrap();
        assert_eq!((d.a, d.b, d.c, d.d), (HalfValue::ZERO, 1, 0, HalfValue::ZERO));
    }

    #[test]
    fn ten_has_a_prime_self_pair() {
        let d = decompose(10, &table()).unwrap();
        assert_eq!(d.a, HalfValue::from_int(1));
        assert_eq!((d.b, d.c), (0, 0));
        assert_eq!(d.d.doubled(), 3);
        assert_eq!(d.tallies.self_kind, SelfKind::PrimeSelf);
    }

    #[test]
    fn two_is_a_nonprime_self_pair() {
        let d = decompose(2, &table()).unwrap();
        assert_eq!(d.a.doubled(), 1);
        assert_eq!((d.b, d.c, d.d), (0, 0, HalfValue::ZERO));
        let r = check_identities(&d, &table()).unwrap();
        assert!(r.halving.is_none());
        assert!(r.all_ok());
    }

    #[test]
    fn coverage_shortfall() {
        let small = PrimeTable::build(50).unwrap();
        assert!(matches!(decompose(52, &small), Err(Error::OutOfCoverage { .. })));
        assert!(matches!(prime_pair_weight(52, &small), Err(Error::OutOfCoverage { .. })));
    }

    #[test]
    fn identity_examples() {
        let t = table();
        let r20 = check_identities(&decompose(20, &t).unwrap(), &t).unwrap();
        assert!(r20.eq22_ok && r20.eq22_5_ok && r20.eq8_6_ok && r20.wing_count_ok);
        assert_eq!(r20.halving_ok(), Some(true));

        let r4 = check_identities(&decompose(4, &t).unwrap(), &t).unwrap();
        assert!(r4.all_ok());

        let d10 = decompose(10, &t).unwrap();
        assert_eq!(d10.l2.ceil(), 2);
        let r10 = check_identities(&d10, &t).unwrap();
        assert!(r10.wing_count_ok);
    }

    #[test]
    fn odd_half_halving_depends_on_primality_of_half() {
        let t = table();
        // E/2 = 9 is nonprime: the printed relation holds.
        let r18 = check_identities(&decompose(18, &t).unwrap(), &t).unwrap();
        let h = r18.halving.unwrap();
        assert_eq!(h.rule, HalvingRule::Odd);
        assert!(h.literal_ok && h.corrected_ok);

        // E/2 = 5 is prime: the self-pair half lands in d, so L1 has no half.
        let r10 = check_identities(&decompose(10, &t).unwrap(), &t).unwrap();
        let h = r10.halving.unwrap();
        assert!(!h.literal_ok);
        assert!(h.corrected_ok);
        assert_eq!(r10.failures(), vec!["eq23_5"]);
    }

    #[test]
    fn prime_pair_weight_matches_decompose() {
        let t = table();
        for e in (2..=10_000).step_by(2) {
            assert_eq!(prime_pair_weight(e, &t).unwrap(), decompose(e, &t).unwrap().d);
        }
    }
}
