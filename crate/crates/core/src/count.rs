//! Degree bookkeeping for the locus of dependent fibral divisors.
//!
//! When `e` has exactly `p + 1` nonnegative parts, the number `N` of degree
//! `p + 1` fibral divisors that are linearly dependent in their fiber of the
//! nonnegative scroll is computed twice: once from the simplified closed form
//! and once by assembling the degeneracy-locus degree from its pieces
//! (`deg Z`, `deg h`, `deg pi_j`, `deg L`). The two must agree.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::classify::rel_pva_clauses;
use crate::error::{HbnError, Result};
use crate::splitting::{AmpleDegree, BNDatum};

/// `C(n, m)`, zero when `m < 0` or `m > n`.
pub fn binomial(n: i64, m: i64) -> BigInt {
    if m < 0 || n < 0 || m > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(m))
}

/// `n! / (n - count)!`, the product of `count` descending factors from `n`.
pub fn falling_factorial(n: usize, count: usize) -> BigInt {
    assert!(count <= n, "falling factorial {n}^({count}) undefined");
    ((n - count + 1)..=n).map(BigInt::from).product()
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn check_kp(k: usize, p: usize) -> Result<()> {
    if k < 2 {
        return Err(HbnError::Domain(format!("rank k = {k} must be at least 2")));
    }
    if p + 1 > k {
        return Err(HbnError::Domain(format!("p = {p} outside [0, {}]", k - 1)));
    }
    Ok(())
}

/// Degree of the diagonal locus:
/// `(2g - 2 + 2k) * C(p+1, 2) * (k-2)! / (k-p-1)!`.
pub fn deg_z(g: &BigInt, k: usize, p: usize) -> Result<BigInt> {
    check_kp(k, p)?;
    if g.is_negative() {
        return Err(HbnError::Domain(format!("genus {g} must be nonnegative")));
    }
    if p == 0 {
        return Ok(BigInt::zero());
    }
    let ramification = 2 * g - 2 + 2 * BigInt::from(k);
    Ok(ramification * binomial(p as i64 + 1, 2) * falling_factorial(k - 2, p - 1))
}

/// Degree `k! / (k-p-1)!` of the ordered-tuple cover `A -> P^1`.
pub fn deg_h(k: usize, p: usize) -> Result<BigInt> {
    check_kp(k, p)?;
    Ok(falling_factorial(k, p + 1))
}

/// Degree `(k-1)! / (k-p-1)!` of a coordinate projection `A -> C`.
pub fn deg_pi(k: usize, p: usize) -> Result<BigInt> {
    check_kp(k, p)?;
    Ok(falling_factorial(k - 1, p))
}

/// A single-site perturbation of the closed form, used to check that the
/// verification sweep notices a wrong formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormulaMutation {
    /// `C(k, p)` in place of `C(k-1, p)`.
    FirstBinomial,
    /// `C(k, p)` in place of `C(k, p+1)`.
    SecondBinomial,
    /// `C(k-2, p)` in place of `C(k-2, p-1)`.
    ThirdBinomial,
    FirstSign,
    SecondSign,
    ThirdSign,
}

impl FormulaMutation {
    pub const ALL: [FormulaMutation; 6] = [
        FormulaMutation::FirstBinomial,
        FormulaMutation::SecondBinomial,
        FormulaMutation::ThirdBinomial,
        FormulaMutation::FirstSign,
        FormulaMutation::SecondSign,
        FormulaMutation::ThirdSign,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormulaMutation::FirstBinomial => "first-binomial",
            FormulaMutation::SecondBinomial => "second-binomial",
            FormulaMutation::ThirdBinomial => "third-binomial",
            FormulaMutation::FirstSign => "first-sign",
            FormulaMutation::SecondSign => "second-sign",
            FormulaMutation::ThirdSign => "third-sign",
        }
    }
}

impl fmt::Display for FormulaMutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormulaMutation {
    type Err = HbnError;

    fn from_str(s: &str) -> Result<Self> {
        FormulaMutation::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| HbnError::Parse(format!("unknown formula mutation {s:?}")))
    }
}

/// The closed form for `N`, optionally with one deliberate perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClosedForm {
    pub mutation: Option<FormulaMutation>,
}

impl ClosedForm {
    pub const STANDARD: ClosedForm = ClosedForm { mutation: None };

    pub fn mutated(mutation: FormulaMutation) -> Self {
        ClosedForm {
            mutation: Some(mutation),
        }
    }

    /// `C(k-1,p)(deg e + g + k - 1) - C(k,p+1)(e_{k-p} + ... + e_k)
    ///  - (g - 1 + k) C(k-2,p-1)`.
    pub fn evaluate(&self, d: &BNDatum, p: usize) -> BigInt {
        use FormulaMutation::*;
        let k = d.rank() as i64;
        let pi = p as i64;
        let e = d.splitting();
        let m = self.mutation;

        let b1 = if m == Some(FirstBinomial) {
            binomial(k, pi)
        } else {
            binomial(k - 1, pi)
        };
        let b2 = if m == Some(SecondBinomial) {
            binomial(k, pi)
        } else {
            binomial(k, pi + 1)
        };
        let b3 = if m == Some(ThirdBinomial) {
            binomial(k - 2, pi)
        } else {
            binomial(k - 2, pi - 1)
        };
        let sign = |which| {
            if m == Some(which) {
                -BigInt::one()
            } else {
                BigInt::one()
            }
        };

        let t1 = b1 * d.line_bundle_degree();
        let t2 = b2 * e.top_sum(p + 1);
        let t3 = (d.genus() - 1 + k) * b3;
        sign(FirstSign) * t1 - sign(SecondSign) * t2 - sign(ThirdSign) * t3
    }
}

/// Which reason, if any, makes `N` vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeCase {
    GenusZero,
    RelVaCase2,
    RelVaCase3,
    RelVaCase4,
    Positive,
    NotApplicable,
}

impl EdgeCase {
    pub fn name(self) -> &'static str {
        match self {
            EdgeCase::GenusZero => "GenusZero",
            EdgeCase::RelVaCase2 => "RelVACase2",
            EdgeCase::RelVaCase3 => "RelVACase3",
            EdgeCase::RelVaCase4 => "RelVACase4",
            EdgeCase::Positive => "Positive",
            EdgeCase::NotApplicable => "NotApplicable",
        }
    }
}

impl fmt::Display for EdgeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EdgeCase {
    type Err = HbnError;

    fn from_str(s: &str) -> Result<Self> {
        [
            EdgeCase::GenusZero,
            EdgeCase::RelVaCase2,
            EdgeCase::RelVaCase3,
            EdgeCase::RelVaCase4,
            EdgeCase::Positive,
            EdgeCase::NotApplicable,
        ]
        .into_iter()
        .find(|c| c.name() == s)
        .ok_or_else(|| HbnError::Parse(format!("unknown edge case {s:?}")))
    }
}

/// Every intermediate quantity of the count, before any consistency check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTerms {
    pub p: usize,
    pub closed: BigInt,
    /// `(p+1) deg(pi) deg(L) - deg(h) (e_{k-p} + ... + e_k) - deg Z`.
    pub bracket: BigInt,
    pub factorial: BigInt,
    pub deg_z: BigInt,
    pub deg_h: BigInt,
    pub deg_pi: BigInt,
    pub deg_l: BigInt,
    /// Whether `e` has exactly `p + 1` nonnegative parts.
    pub in_domain: bool,
}

impl CountTerms {
    pub fn compute(d: &BNDatum, p: AmpleDegree, formula: ClosedForm) -> Result<Self> {
        let k = d.rank();
        if k < 2 {
            return Err(HbnError::RankTooSmall { k });
        }
        let p = p.check(k)?.get();
        let deg_z = deg_z(d.genus(), k, p)?;
        let deg_h = deg_h(k, p)?;
        let deg_pi = deg_pi(k, p)?;
        let deg_l = d.line_bundle_degree();
        let bracket =
            BigInt::from(p + 1) * &deg_pi * &deg_l - &deg_h * d.splitting().top_sum(p + 1) - &deg_z;
        Ok(CountTerms {
            p,
            closed: formula.evaluate(d, p),
            bracket,
            factorial: factorial(p + 1),
            deg_z,
            deg_h,
            deg_pi,
            deg_l,
            in_domain: d.splitting().nonneg_parts() == p + 1,
        })
    }

    pub fn bracket_divisible(&self) -> bool {
        self.bracket.is_multiple_of(&self.factorial)
    }

    /// The assembled count, rounded toward negative infinity when the bracket
    /// is not divisible.
    pub fn assembled(&self) -> BigInt {
        self.bracket.div_floor(&self.factorial)
    }
}

/// The dependent-fibral-divisor count together with its sub-formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub p: usize,
    pub n_closed: BigInt,
    pub n_assembled: BigInt,
    pub deg_z: BigInt,
    pub deg_h: BigInt,
    pub deg_pi: BigInt,
    pub deg_l: BigInt,
    pub edge_case: EdgeCase,
}

/// `N` for a datum with exactly `p + 1` nonnegative parts.
pub fn dependent_divisor_count(d: &BNDatum, p: AmpleDegree) -> Result<CountReport> {
    let terms = CountTerms::compute(d, p, ClosedForm::STANDARD)?;
    if !terms.in_domain {
        return Err(HbnError::PreconditionNonnegParts {
            expected: terms.p + 1,
            found: d.splitting().nonneg_parts(),
        });
    }
    let assembled = terms.assembled();
    if !terms.bracket_divisible() || assembled != terms.closed {
        return Err(HbnError::OracleMismatch {
            closed: terms.closed,
            assembled,
        });
    }
    let edge_case = edge_case_for(d, terms.p, &terms.closed)?;
    Ok(CountReport {
        p: terms.p,
        n_closed: terms.closed,
        n_assembled: assembled,
        deg_z: terms.deg_z,
        deg_h: terms.deg_h,
        deg_pi: terms.deg_pi,
        deg_l: terms.deg_l,
        edge_case,
    })
}

/// The closed-form value with no precondition on the part count. The flag
/// is false when the value lies outside the formula's domain.
pub fn dependent_divisor_count_raw(d: &BNDatum, p: AmpleDegree) -> Result<(BigInt, bool)> {
    let terms = CountTerms::compute(d, p, ClosedForm::STANDARD)?;
    Ok((terms.closed, terms.in_domain))
}

pub fn edge_case_classify(d: &BNDatum, p: AmpleDegree) -> Result<EdgeCase> {
    dependent_divisor_count(d, p).map(|r| r.edge_case)
}

/// Tags a count: genus zero first, then the lowest relative clause 2-4 that
/// holds, then `Positive` for `N > 0`. Anything else is `NotApplicable`.
pub(crate) fn edge_case_for(d: &BNDatum, p: usize, n: &BigInt) -> Result<EdgeCase> {
    if d.genus().is_zero() {
        return Ok(EdgeCase::GenusZero);
    }
    let clauses = rel_pva_clauses(d, AmpleDegree(p))?;
    Ok(if clauses[1] {
        EdgeCase::RelVaCase2
    } else if clauses[2] {
        EdgeCase::RelVaCase3
    } else if clauses[3] {
        EdgeCase::RelVaCase4
    } else if n.is_positive() {
        EdgeCase::Positive
    } else {
        EdgeCase::NotApplicable
    })
}

/// `C . D = g + 1 - e_2` on the Hirzebruch surface `P(O + O(-e_2))`, for a
/// curve of class `(e_2 + g + 1)F + 2D` against the directrix `D`.
pub fn directrix_intersection(g: &BigInt, e2: &BigInt) -> BigInt {
    g + 1 - e2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(g: i64, parts: &[i64]) -> BNDatum {
        BNDatum::from_i64s(g, parts).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn binomial_convention() {
        assert_eq!(binomial(4, 2), big(6));
        assert_eq!(binomial(3, -1), big(0));
        assert_eq!(binomial(3, 4), big(0));
        assert_eq!(binomial(0, 0), big(1));
        assert_eq!(binomial(-1, 0), big(0));
    }

    #[test]
    fn deg_z_examples() {
        assert_eq!(deg_z(&big(5), 3, 1).unwrap(), big(14));
        for g in 0..5 {
            for k in 2..7 {
                assert_eq!(deg_z(&big(g), k, 0).unwrap(), big(0));
            }
        }
        assert_eq!(deg_z(&big(0), 2, 1).unwrap(), big(2));
        assert!(deg_z(&big(0), 2, 2).is_err());
        assert!(deg_z(&big(-1), 3, 1).is_err());
    }

    #[test]
    fn deg_h_and_pi_examples() {
        assert_eq!(
            (deg_h(3, 1).unwrap(), deg_pi(3, 1).unwrap()),
            (big(6), big(2))
        );
        for k in 2..8 {
            assert_eq!(
                (deg_h(k, 0).unwrap(), deg_pi(k, 0).unwrap()),
                (big(k as i64), big(1))
            );
        }
        assert_eq!(
            (deg_h(2, 1).unwrap(), deg_pi(2, 1).unwrap()),
            (big(2), big(1))
        );
        assert!(deg_h(1, 0).is_err());
    }

    #[test]
    fn count_examples() {
        let r = dependent_divisor_count(&datum(5, &[-3, 0, 0]), AmpleDegree(1)).unwrap();
        assert_eq!(r.n_closed, big(1));
        assert_eq!(r.n_assembled, big(1));
        assert_eq!(
            (r.deg_z, r.deg_h, r.deg_pi, r.deg_l),
            (big(14), big(6), big(2), big(4))
        );
        assert_eq!(r.edge_case, EdgeCase::Positive);

        let r = dependent_divisor_count(&datum(2, &[-2, 0, 0]), AmpleDegree(1)).unwrap();
        assert_eq!(r.n_closed, big(0));
        assert_eq!(r.edge_case, EdgeCase::RelVaCase3);
    }

    #[test]
    fn all_nonnegative_gives_zero() {
        for (g, parts) in [(0, vec![0, 0]), (7, vec![0, 3, 5]), (19, vec![1, 2, 2, 9])] {
            let d = datum(g, &parts);
            let p = AmpleDegree(d.rank() - 1);
            let r = dependent_divisor_count(&d, p).unwrap();
            assert_eq!(r.n_closed, big(0), "{d}");
        }
    }

    #[test]
    fn edge_case_examples() {
        let d = datum(0, &[-1, -1, 0, 0]);
        assert_eq!(
            edge_case_classify(&d, AmpleDegree(1)).unwrap(),
            EdgeCase::GenusZero
        );
        assert_eq!(
            dependent_divisor_count(&d, AmpleDegree(1))
                .unwrap()
                .n_closed,
            big(0)
        );

        let d = datum(3, &[-1, 3]);
        let r = dependent_divisor_count(&d, AmpleDegree(0)).unwrap();
        assert_eq!((r.n_closed, r.edge_case), (big(0), EdgeCase::RelVaCase2));

        let d = datum(5, &[-3, 0, 0]);
        assert_eq!(
            edge_case_classify(&d, AmpleDegree(1)).unwrap(),
            EdgeCase::Positive
        );
    }

    #[test]
    fn precondition_is_enforced() {
        let d = datum(4, &[-2, 0, 0, 1]);
        assert_eq!(
            dependent_divisor_count(&d, AmpleDegree(1)),
            Err(HbnError::PreconditionNonnegParts {
                expected: 2,
                found: 3
            })
        );
        let (raw, in_domain) = dependent_divisor_count_raw(&d, AmpleDegree(1)).unwrap();
        assert!(!in_domain);
        assert_eq!(raw, ClosedForm::STANDARD.evaluate(&d, 1));
        assert!(matches!(
            dependent_divisor_count(&d, AmpleDegree(4)),
            Err(HbnError::BadAmpleDegree { .. })
        ));
    }

    #[test]
    fn mutations_change_the_value_somewhere() {
        let d = datum(2, &[-1, -1, 0, 1]);
        let standard = ClosedForm::STANDARD.evaluate(&d, 1);
        for m in FormulaMutation::ALL {
            assert_ne!(ClosedForm::mutated(m).evaluate(&d, 1), standard, "{m}");
            assert_eq!(m.name().parse::<FormulaMutation>().unwrap(), m);
        }
    }

    #[test]
    fn directrix_examples() {
        for g in 0..10 {
            assert_eq!(directrix_intersection(&big(g), &big(g + 1)), big(0));
            assert_eq!(directrix_intersection(&big(g), &big(g)), big(1));
        }
        assert_eq!(directrix_intersection(&big(4), &big(2)), big(3));
    }
}
