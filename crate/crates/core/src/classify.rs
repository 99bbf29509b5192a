//! Decision procedures for basepoint-freeness, (birational) relative
//! `p`-very ampleness and very ampleness of a general line bundle in a
//! splitting locus.
//!
//! Each classifier evaluates its criterion's clauses in their stated order and
//! reports the first one that holds. Index conditions such as `e_{k-p-1} >= 0`
//! are evaluated as part counts ("at least `p + 2` nonnegative parts"), so an
//! out-of-range index simply means the clause fails.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{HbnError, Result};
use crate::splitting::{AmpleDegree, BNDatum, SplittingType};

/// Which clause produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseLabel {
    None,
    BpfSubbundle,
    BpfPullback,
    BiratRelVa,
    RelVa(u8),
    BiratVa(u8),
    Va(u8),
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseLabel::None => write!(f, "None"),
            CaseLabel::BpfSubbundle => write!(f, "Bpf.Subbundle"),
            CaseLabel::BpfPullback => write!(f, "Bpf.Pullback"),
            CaseLabel::BiratRelVa => write!(f, "BiratRelVA.Case1"),
            CaseLabel::RelVa(n) => write!(f, "RelVA.Case{n}"),
            CaseLabel::BiratVa(n) => write!(f, "BiratVA.Case{n}"),
            CaseLabel::Va(n) => write!(f, "VA.Case{n}"),
        }
    }
}

impl FromStr for CaseLabel {
    type Err = HbnError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || HbnError::Parse(format!("unknown case label {s:?}"));
        let numbered = |rest: &str, max: u8| -> Result<u8> {
            let n: u8 = rest
                .strip_prefix("Case")
                .and_then(|n| n.parse().ok())
                .ok_or_else(bad)?;
            if (1..=max).contains(&n) {
                Ok(n)
            } else {
                Err(bad())
            }
        };
        match s {
            "None" => Ok(CaseLabel::None),
            "Bpf.Subbundle" => Ok(CaseLabel::BpfSubbundle),
            "Bpf.Pullback" => Ok(CaseLabel::BpfPullback),
            "BiratRelVA.Case1" => Ok(CaseLabel::BiratRelVa),
            _ => {
                let (family, rest) = s.split_once('.').ok_or_else(bad)?;
                match family {
                    "RelVA" => numbered(rest, 5).map(CaseLabel::RelVa),
                    "BiratVA" => numbered(rest, 3).map(CaseLabel::BiratVa),
                    "VA" => numbered(rest, 7).map(CaseLabel::Va),
                    _ => Err(bad()),
                }
            }
        }
    }
}

/// A verdict together with the clause that decided it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub value: bool,
    pub case: CaseLabel,
    pub note: Option<String>,
    /// Set when the general member is `f^* O(n)`; holds `n = e_k`.
    pub pullback_twist: Option<BigInt>,
}

impl Decision {
    fn no() -> Self {
        Decision {
            value: false,
            case: CaseLabel::None,
            note: None,
            pullback_twist: None,
        }
    }

    fn yes(case: CaseLabel) -> Self {
        Decision {
            value: true,
            case,
            note: None,
            pullback_twist: None,
        }
    }

    /// First clause that holds, numbered from 1.
    fn first_clause(clauses: &[bool], label: impl Fn(u8) -> CaseLabel) -> Self {
        match clauses.iter().position(|&c| c) {
            Some(i) => Decision::yes(label(i as u8 + 1)),
            None => Decision::no(),
        }
    }
}

fn require_rank(d: &BNDatum) -> Result<usize> {
    let k = d.rank();
    if k < 2 {
        return Err(HbnError::RankTooSmall { k });
    }
    Ok(k)
}

fn require_p(d: &BNDatum, p: AmpleDegree) -> Result<(usize, usize)> {
    let k = require_rank(d)?;
    let p = p.check(k)?.get();
    Ok((k, p))
}

fn nonneg(v: &BigInt) -> bool {
    !v.is_negative()
}

/// Clauses (a) `e_{k-1} >= 0` and (b) `e_k >= 0, e_{k-1} - e_1 <= 1, rho' = 0`.
pub fn bpf_clauses(d: &BNDatum) -> Result<[bool; 2]> {
    let k = require_rank(d)?;
    let e = d.splitting();
    let a = e.nonneg_parts() >= 2;
    let b = nonneg(e.part(k))
        && e.part(k - 1) - e.smallest() <= BigInt::one()
        && d.rho_prime().is_zero();
    Ok([a, b])
}

pub fn basepoint_free(d: &BNDatum) -> Result<Decision> {
    let [subbundle, pullback] = bpf_clauses(d)?;
    if subbundle {
        return Ok(Decision::yes(CaseLabel::BpfSubbundle));
    }
    if pullback {
        let twist = d.splitting().largest().clone();
        return Ok(Decision {
            note: Some(format!(
                "general member is the pullback of O({twist}) from the line"
            )),
            pullback_twist: Some(twist),
            ..Decision::yes(CaseLabel::BpfPullback)
        });
    }
    Ok(Decision::no())
}

/// Valid iff `e_{k-p} >= 0`.
pub fn birationally_rel_pva(d: &BNDatum, p: AmpleDegree) -> Result<Decision> {
    let (_, p) = require_p(d, p)?;
    if d.splitting().nonneg_parts() > p {
        Ok(Decision::yes(CaseLabel::BiratRelVa))
    } else {
        Ok(Decision::no())
    }
}

/// The five clauses for relative `p`-very ampleness.
pub fn rel_pva_clauses(d: &BNDatum, p: AmpleDegree) -> Result<[bool; 5]> {
    let (k, p) = require_p(d, p)?;
    let e = d.splitting();
    let nn = e.nonneg_parts();
    let rho_zero = d.rho_prime().is_zero();
    let one = BigInt::one();
    Ok([
        nn >= p + 2,
        p == 0 && nonneg(e.part(k)) && e.part(k - 1) - e.smallest() <= one && rho_zero,
        p + 2 == k && nonneg(e.part(2)) && e.part(k) - e.part(2) <= one && rho_zero,
        p + 1 == k && nonneg(e.smallest()),
        d.genus().is_zero() && nn > p,
    ])
}

pub fn rel_pva(d: &BNDatum, p: AmpleDegree) -> Result<Decision> {
    let clauses = rel_pva_clauses(d, p)?;
    Ok(Decision::first_clause(&clauses, CaseLabel::RelVa))
}

/// Clauses for birational very ampleness: at least three nonnegative parts;
/// two nonnegative parts with `e_k >= 1`; or genus zero with two nonnegative
/// parts.
pub fn birat_va_clauses(d: &BNDatum) -> Result<[bool; 3]> {
    let k = require_rank(d)?;
    let e = d.splitting();
    let nn = e.nonneg_parts();
    Ok([
        nn >= 3,
        nn >= 2 && e.part(k) >= &BigInt::one(),
        d.genus().is_zero() && nn >= 2,
    ])
}

pub fn birationally_va(d: &BNDatum) -> Result<Decision> {
    let clauses = birat_va_clauses(d)?;
    Ok(Decision::first_clause(&clauses, CaseLabel::BiratVa))
}

/// Matches `(prefix, -1, ..., -1, 0, 0, 0)` with any number (including zero)
/// of `-1` entries.
fn matches_plane_pattern(e: &SplittingType, prefix: &[i64]) -> Option<usize> {
    let parts = e.parts();
    if parts.len() < prefix.len() + 3 {
        return None;
    }
    let (head, rest) = parts.split_at(prefix.len());
    let (middle, tail) = rest.split_at(rest.len() - 3);
    let head_ok = head.iter().zip(prefix).all(|(a, &b)| *a == BigInt::from(b));
    let minus_one = BigInt::from(-1);
    let middle_ok = middle.iter().all(|v| *v == minus_one);
    let tail_ok = tail.iter().all(Zero::is_zero);
    (head_ok && middle_ok && tail_ok).then_some(middle.len())
}

fn is_exactly(e: &SplittingType, parts: &[i64]) -> bool {
    e.rank() == parts.len()
        && e.parts()
            .iter()
            .zip(parts)
            .all(|(a, &b)| *a == BigInt::from(b))
}

/// The seven clauses for very ampleness.
pub fn va_clauses(d: &BNDatum) -> Result<[bool; 7]> {
    Ok(va_evaluation(d)?.0)
}

/// Clause values plus the number of `-1` entries matched by the plane curve
/// patterns of clauses 6 and 7.
fn va_evaluation(d: &BNDatum) -> Result<([bool; 7], Option<usize>)> {
    let k = require_rank(d)?;
    let e = d.splitting();
    let g = d.genus();
    let one = BigInt::one();
    let nn = e.nonneg_parts();
    let rho_zero = d.rho_prime().is_zero();

    let c1 = nn >= 3 && e.r() >= BigInt::from(3);
    let c2 = k == 3 && e.part(2) >= &one && e.part(3) - e.part(2) <= one && rho_zero;
    let c3 = k == 2 && e.part(1) >= &one;
    let c4 = k == 2 && e.part(1).is_zero() && (e.part(2) == g || *e.part(2) == g + 1);
    let c5 = g.is_zero() && nn >= 2;

    let cubic = if g.is_one() {
        if is_exactly(e, &[-1, 0, 1]) {
            Some(None)
        } else {
            matches_plane_pattern(e, &[]).map(Some)
        }
    } else {
        None
    };
    let quartic = if *g == BigInt::from(3) {
        if is_exactly(e, &[-2, 0, 1]) {
            Some(None)
        } else {
            matches_plane_pattern(e, &[-2]).map(Some)
        }
    } else {
        None
    };
    let minus_ones = cubic.or(quartic).flatten();
    Ok((
        [c1, c2, c3, c4, c5, cubic.is_some(), quartic.is_some()],
        minus_ones,
    ))
}

pub fn very_ample(d: &BNDatum) -> Result<Decision> {
    let (clauses, minus_ones) = va_evaluation(d)?;
    let mut decision = Decision::first_clause(&clauses, CaseLabel::Va);
    if matches!(decision.case, CaseLabel::Va(6) | CaseLabel::Va(7)) && minus_ones == Some(0) {
        decision.note = Some(
            "plane curve pattern matched with zero copies of -1 in the (..., -1, 0, 0, 0) family"
                .to_string(),
        );
    }
    Ok(decision)
}

/// Sufficient chain for `p`-very ampleness:
/// `e_k >= p, e_{k-1} >= p, e_{k-2} >= p-1, ..., e_{k-p-1} >= 0`.
/// False when `k < p + 2`, since the chain reaches below `e_1`.
pub fn pva_sufficient(d: &BNDatum, p: AmpleDegree) -> Result<bool> {
    let (k, p) = require_p(d, p)?;
    if k < p + 2 {
        return Ok(false);
    }
    let e = d.splitting();
    if *e.part(k) < BigInt::from(p) {
        return Ok(false);
    }
    Ok((0..=p).all(|j| *e.part(k - 1 - j) >= BigInt::from(p - j)))
}

/// Sufficient chain for birational `p`-very ampleness:
/// `e_k >= p, e_{k-1} >= p-1, ..., e_{k-p} >= 0`.
pub fn birat_pva_sufficient(d: &BNDatum, p: AmpleDegree) -> Result<bool> {
    let (k, p) = require_p(d, p)?;
    let e = d.splitting();
    Ok((0..=p).all(|j| *e.part(k - j) >= BigInt::from(p - j)))
}

/// The conjectured criterion: at least `p + 2` nonnegative parts and
/// `r >= 2p + 1`.
pub fn conjectured_pva(d: &BNDatum, p: AmpleDegree) -> Result<bool> {
    let (_, p) = require_p(d, p)?;
    let e = d.splitting();
    Ok(e.nonneg_parts() >= p + 2 && e.r() >= BigInt::from(2 * p + 1))
}

/// Classical Brill-Noether number `g - (r+1)(g - d + r)`.
pub fn classical_rho(g: &BigInt, r: &BigInt, degree: &BigInt) -> BigInt {
    g - (r + 1) * (g - degree + r)
}

const CLASSICAL_EXCEPTIONS: [(i64, i64, i64); 4] = [(0, 1, 1), (0, 2, 2), (1, 2, 3), (3, 2, 4)];

/// Very ampleness of a general `g^r_d` on a general curve: `r >= 3`, or one of
/// the four exceptional triples with `r < 3`.
pub fn classical_va(g: &BigInt, r: &BigInt, degree: &BigInt) -> Result<bool> {
    if g.is_negative() || r.is_negative() || degree.is_negative() {
        return Err(HbnError::Domain(format!(
            "classical triple must be nonnegative, got (g, r, d) = ({g}, {r}, {degree})"
        )));
    }
    let rho = classical_rho(g, r, degree);
    if rho.is_negative() {
        return Err(HbnError::EmptyLocus { rho });
    }
    if *r >= BigInt::from(3) {
        return Ok(true);
    }
    Ok(CLASSICAL_EXCEPTIONS.iter().any(|&(eg, er, ed)| {
        *g == BigInt::from(eg) && *r == BigInt::from(er) && *degree == BigInt::from(ed)
    }))
}
