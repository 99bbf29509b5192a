//! The verification sweep: every cross-module property evaluated at every
//! point of a finite domain. Violations are collected as data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::classify::{
    basepoint_free, birat_va_clauses, birationally_rel_pva, birationally_va, bpf_clauses,
    conjectured_pva, pva_sufficient, rel_pva, rel_pva_clauses, va_clauses, very_ample, Decision,
};
use crate::count::{deg_z, ClosedForm, CountTerms};
use crate::error::{HbnError, Result};
use crate::splitting::{AmpleDegree, BNDatum, SplittingType};

use super::{enumerate_splitting_types, Execution, SweepDomain, TableRow};

macro_rules! properties {
    ($($variant:ident => $id:literal, $desc:literal;)*) => {
        /// A checkable identity or implication.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Property {
            $($variant,)*
        }

        impl Property {
            pub const ALL: &'static [Property] = &[$(Property::$variant,)*];

            pub fn id(self) -> &'static str {
                match self {
                    $(Property::$variant => $id,)*
                }
            }

            pub fn description(self) -> &'static str {
                match self {
                    $(Property::$variant => $desc,)*
                }
            }
        }
    };
}

properties! {
    TwistInvariance => "core.twist_invariance", "u(e) is unchanged by twisting";
    ProfileMonotone => "core.profile_monotone", "h0(e, n) is nondecreasing and eventually k(n+1) + deg e";
    ProfileRoundTrip => "core.profile_round_trip", "the h0 profile determines e";
    BalancedRho => "core.balanced_rho", "rho'(g, e) = g exactly when e is balanced";
    PlaneCurveDegree => "core.plane_curve_degree", "plane cubic/quartic patterns have deg L = 3/4 and plane-curve genus";
    DecisionShape => "classify.decision_shape", "a verdict is true exactly when a clause is reported";
    ClauseOrder => "classify.clause_order", "evaluating clauses in reverse order gives the same verdict";
    RelImpliesBirational => "classify.rel_implies_birational", "relatively p-very ample implies birationally so";
    VaImpliesRel1 => "classify.va_implies_rel1", "very ample implies relatively 1-very ample";
    VaImpliesBpf => "classify.va_implies_bpf", "very ample implies basepoint free";
    VaImpliesBiratVa => "classify.va_implies_birat_va", "very ample implies birationally very ample";
    Rel0EqualsBpf => "classify.rel0_equals_bpf", "relative 0-very ampleness equals basepoint-freeness";
    SufficientImpliesVa => "classify.sufficient_implies_va", "the sufficient 1-very ample chain implies very ample";
    ConjectureEqualsVa1 => "classify.conjecture_equals_va1", "the conjectured criterion at p = 1 equals very ample clause 1";
    OracleIdentity => "count.oracle_identity", "closed-form N equals the assembled degeneracy count";
    Integrality => "count.integrality", "(p+1)! divides the assembled bracket";
    Nonnegative => "count.nonnegative", "N >= 0";
    TopDegreeZero => "count.top_degree_zero", "N(e, k-1) = 0";
    DegZZeroAtP0 => "count.deg_z_p0", "deg Z vanishes at p = 0";
    EdgeCaseEquivalence => "count.edge_case_equivalence", "N = 0 iff g = 0 or relative clause 2, 3 or 4 holds";
    RelPvaDerived => "count.rel_pva_derived", "relatively p-very ample iff p+1 nonnegative parts and (p+2 of them or N = 0)";
    EqLast => "count.eq_last", "rho' = 0, g > 0, N = 0 force (p+1)(k-1-p) <= k-1";
    EnumerationComplete => "enumerate.complete", "enumeration hits every multiset exactly once, in order";
    RowDeterminism => "enumerate.row_determinism", "table rows are pure functions of (g, e)";
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Property {
    type Err = HbnError;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .iter()
            .copied()
            .find(|p| p.id() == s)
            .ok_or_else(|| HbnError::Parse(format!("unknown property {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum PropertySelection {
    #[default]
    All,
    Only(BTreeSet<Property>),
}

impl PropertySelection {
    pub fn only(props: impl IntoIterator<Item = Property>) -> Self {
        PropertySelection::Only(props.into_iter().collect())
    }

    pub fn contains(&self, prop: Property) -> bool {
        match self {
            PropertySelection::All => true,
            PropertySelection::Only(set) => set.contains(&prop),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SweepOptions {
    pub formula: ClosedForm,
    pub execution: Execution,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub property: Property,
    pub e: Option<SplittingType>,
    pub genus: Option<BigInt>,
    pub p: Option<usize>,
    pub observed: String,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ViolationReport {
    /// Number of `(g, e)` points visited.
    pub instances: usize,
    /// Evaluations per property.
    pub checks: BTreeMap<Property, u64>,
    /// Sorted, so the report does not depend on scheduling.
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations_of(&self, prop: Property) -> usize {
        self.violations
            .iter()
            .filter(|v| v.property == prop)
            .count()
    }

    pub fn total_checks(&self) -> u64 {
        self.checks.values().sum()
    }

    fn merge(mut self, other: ViolationReport) -> ViolationReport {
        self.instances += other.instances;
        for (prop, n) in other.checks {
            *self.checks.entry(prop).or_default() += n;
        }
        self.violations.extend(other.violations);
        self
    }
}

type Failure = Option<(String, String)>;

fn expect_eq<T: PartialEq + fmt::Display>(observed: T, expected: T) -> Failure {
    (observed != expected).then(|| (observed.to_string(), expected.to_string()))
}

fn expect(holds: bool, observed: impl FnOnce() -> String, expected: &str) -> Failure {
    (!holds).then(|| (observed(), expected.to_string()))
}

struct Checker<'a> {
    selection: &'a PropertySelection,
    datum: Option<&'a BNDatum>,
    report: ViolationReport,
}

impl<'a> Checker<'a> {
    fn new(selection: &'a PropertySelection, datum: Option<&'a BNDatum>) -> Self {
        Checker {
            selection,
            datum,
            report: ViolationReport::default(),
        }
    }

    fn check(&mut self, prop: Property, p: Option<usize>, eval: impl FnOnce() -> Result<Failure>) {
        if !self.selection.contains(prop) {
            return;
        }
        *self.report.checks.entry(prop).or_default() += 1;
        let failure = match eval() {
            Ok(f) => f,
            Err(err) => Some((format!("error: {err}"), "a value".to_string())),
        };
        if let Some((observed, expected)) = failure {
            self.report.violations.push(Violation {
                property: prop,
                e: self.datum.map(|d| d.splitting().clone()),
                genus: self.datum.map(|d| d.genus().clone()),
                p,
                observed,
                expected,
            });
        }
    }
}

fn shape_ok(d: &Decision) -> bool {
    d.value == (d.case != crate::classify::CaseLabel::None)
}

fn check_splitting_type(c: &mut Checker<'_>, e: &SplittingType) {
    let u = e.u();
    c.check(Property::TwistInvariance, None, || {
        Ok((-3..=3).find_map(|n| {
            let twisted = e.twist(&BigInt::from(n)).u();
            expect_eq(twisted, u.clone())
        }))
    });
    let lo: BigInt = -e.largest() - 3;
    let hi: BigInt = -e.smallest() + 3;
    c.check(Property::ProfileMonotone, None, || {
        let k = BigInt::from(e.rank());
        let mut n = lo.clone();
        let mut prev = e.h0_profile(&n);
        while n < hi {
            n += 1;
            let h = e.h0_profile(&n);
            if h < prev {
                return Ok(Some((
                    format!("h0({n}) = {h} < {prev}"),
                    "nondecreasing".into(),
                )));
            }
            if n >= -e.smallest() - 1 {
                let linear = &k * (&n + 1) + e.degree();
                if h != linear {
                    return Ok(Some((format!("h0({n}) = {h}"), linear.to_string())));
                }
            }
            prev = h;
        }
        Ok(None)
    });
    c.check(Property::ProfileRoundTrip, None, || {
        let mut samples = BTreeMap::new();
        let mut n: BigInt = -e.largest() - 2;
        while n <= -e.smallest() {
            samples.insert(n.clone(), e.h0_profile(&n));
            n += 1;
        }
        let recovered = SplittingType::from_h0_profile(&samples)?;
        Ok(expect_eq(recovered, e.clone()))
    });
}

fn check_datum(
    d: &BNDatum,
    degrees: &[usize],
    selection: &PropertySelection,
    formula: ClosedForm,
) -> ViolationReport {
    let mut c = Checker::new(selection, Some(d));
    let e = d.splitting();
    let g = d.genus();
    let k = e.rank();
    let nn = e.nonneg_parts();
    let rho = d.rho_prime();

    if rho.is_zero() {
        check_splitting_type(&mut c, e);
    }
    c.check(Property::BalancedRho, None, || {
        Ok(expect_eq(rho == *g, e.is_balanced()))
    });
    c.check(Property::PlaneCurveDegree, None, || {
        let clauses = va_clauses(d)?;
        let expected_degree = if clauses[5] {
            3
        } else if clauses[6] {
            4
        } else {
            return Ok(None);
        };
        let deg_l = d.line_bundle_degree();
        if deg_l != BigInt::from(expected_degree) {
            return Ok(expect_eq(deg_l, BigInt::from(expected_degree)));
        }
        let plane_genus = (&deg_l - 1) * (&deg_l - 2);
        Ok(expect_eq(2 * g, plane_genus))
    });

    let verdicts =
        (|| -> Result<_> { Ok((basepoint_free(d)?, birationally_va(d)?, very_ample(d)?)) })();
    let (bpf, bva, va) = match verdicts {
        Ok(v) => v,
        Err(err) => {
            c.check(Property::DecisionShape, None, || Err(err));
            return c.report;
        }
    };

    c.check(Property::DecisionShape, None, || {
        Ok([&bpf, &bva, &va]
            .iter()
            .find(|dec| !shape_ok(dec))
            .map(|dec| {
                (
                    format!("{} / {}", dec.value, dec.case),
                    "value iff case present".into(),
                )
            }))
    });
    c.check(Property::ClauseOrder, None, || {
        let pairs = [
            (bpf_clauses(d)?.iter().rev().any(|&b| b), bpf.value),
            (birat_va_clauses(d)?.iter().rev().any(|&b| b), bva.value),
            (va_clauses(d)?.iter().rev().any(|&b| b), va.value),
        ];
        Ok(pairs
            .iter()
            .find(|(a, b)| a != b)
            .map(|(a, b)| (a.to_string(), b.to_string())))
    });
    c.check(Property::VaImpliesBpf, None, || {
        Ok(expect(
            !va.value || bpf.value,
            || format!("va {} bpf {}", va.case, bpf.case),
            "bpf whenever va",
        ))
    });
    c.check(Property::VaImpliesBiratVa, None, || {
        Ok(expect(
            !va.value || bva.value,
            || format!("va {}", va.case),
            "birationally very ample",
        ))
    });
    c.check(Property::VaImpliesRel1, Some(1), || {
        let rel1 = rel_pva(d, AmpleDegree(1))?;
        Ok(expect(
            !va.value || rel1.value,
            || format!("va {} rel1 false", va.case),
            "rel1 whenever va",
        ))
    });
    c.check(Property::Rel0EqualsBpf, Some(0), || {
        Ok(expect_eq(rel_pva(d, AmpleDegree(0))?.value, bpf.value))
    });
    c.check(Property::SufficientImpliesVa, Some(1), || {
        let chain = pva_sufficient(d, AmpleDegree(1))?;
        Ok(expect(
            !chain || va.value,
            || "chain holds, not very ample".into(),
            "very ample",
        ))
    });
    c.check(Property::ConjectureEqualsVa1, Some(1), || {
        Ok(expect_eq(
            conjectured_pva(d, AmpleDegree(1))?,
            va_clauses(d)?[0],
        ))
    });
    c.check(Property::DegZZeroAtP0, Some(0), || {
        Ok(expect_eq(deg_z(g, k, 0)?, BigInt::zero()))
    });

    for &p in degrees {
        let ample = AmpleDegree(p);
        let rel = match rel_pva(d, ample) {
            Ok(rel) => rel,
            Err(err) => {
                c.check(Property::DecisionShape, Some(p), || Err(err));
                continue;
            }
        };
        c.check(Property::DecisionShape, Some(p), || {
            let brel = birationally_rel_pva(d, ample)?;
            Ok(expect(
                shape_ok(&rel) && shape_ok(&brel),
                || format!("{} / {}", rel.value, rel.case),
                "value iff case",
            ))
        });
        c.check(Property::ClauseOrder, Some(p), || {
            Ok(expect_eq(
                rel_pva_clauses(d, ample)?.iter().rev().any(|&b| b),
                rel.value,
            ))
        });
        c.check(Property::RelImpliesBirational, Some(p), || {
            let brel = birationally_rel_pva(d, ample)?;
            Ok(expect(
                !rel.value || brel.value,
                || format!("rel {} birational false", rel.case),
                "birational",
            ))
        });

        let terms = if nn == p + 1 {
            match CountTerms::compute(d, ample, formula) {
                Ok(t) => Some(t),
                Err(err) => {
                    c.check(Property::OracleIdentity, Some(p), || Err(err));
                    continue;
                }
            }
        } else {
            None
        };

        c.check(Property::RelPvaDerived, Some(p), || {
            let n_vanishes = terms.as_ref().is_some_and(|t| t.closed.is_zero());
            let derived = nn > p && (nn >= p + 2 || n_vanishes);
            Ok(expect_eq(rel.value, derived))
        });

        let Some(t) = terms else { continue };
        c.check(Property::Integrality, Some(p), || {
            Ok(expect(
                t.bracket_divisible(),
                || format!("{} mod {}", t.bracket, t.factorial),
                "0",
            ))
        });
        c.check(Property::OracleIdentity, Some(p), || {
            Ok(expect_eq(t.closed.clone(), t.assembled()))
        });
        c.check(Property::Nonnegative, Some(p), || {
            Ok(expect(
                !t.closed.is_negative(),
                || t.closed.to_string(),
                ">= 0",
            ))
        });
        if p + 1 == k {
            c.check(Property::TopDegreeZero, Some(p), || {
                Ok(expect_eq(t.closed.clone(), BigInt::zero()))
            });
        }
        c.check(Property::EdgeCaseEquivalence, Some(p), || {
            let clauses = rel_pva_clauses(d, ample)?;
            let reason = g.is_zero() || clauses[1] || clauses[2] || clauses[3];
            Ok(expect_eq(t.closed.is_zero(), reason))
        });
        if rho.is_zero() && g.is_positive() && t.closed.is_zero() {
            c.check(Property::EqLast, Some(p), || {
                let lhs = (p + 1) * (k - 1 - p);
                Ok(expect(lhs < k, || lhs.to_string(), "< k"))
            });
        }
    }

    c.check(Property::RowDeterminism, None, || {
        let a = TableRow::build(d, degrees)?;
        let b = TableRow::build(d, degrees)?;
        Ok(expect_eq(format!("{a:?}"), format!("{b:?}")))
    });

    c.report.instances = 1;
    c.report
}

fn check_enumeration(domain: &SweepDomain, selection: &PropertySelection) -> ViolationReport {
    let mut c = Checker::new(selection, None);
    for k in domain.k_min..=domain.k_max {
        c.check(Property::EnumerationComplete, None, || {
            let types: Vec<_> =
                enumerate_splitting_types(k, domain.part_min, domain.part_max, None).collect();
            let lo = BigInt::from(domain.part_min);
            let hi = BigInt::from(domain.part_max);
            let in_bounds = types
                .iter()
                .all(|e| e.rank() == k && *e.smallest() >= lo && *e.largest() <= hi);
            let ordered = types.windows(2).all(|w| w[0] < w[1]);
            if !in_bounds || !ordered {
                return Ok(Some((
                    format!("rank {k}: bounds {in_bounds}, ordered {ordered}"),
                    "true, true".into(),
                )));
            }
            let expected = domain.expected_type_count(k).unwrap_or(u64::MAX);
            Ok(expect_eq(types.len() as u64, expected))
        });
    }
    c.report
}

/// Evaluates the selected properties over the whole domain.
pub fn verify_sweep(
    domain: &SweepDomain,
    selection: &PropertySelection,
    options: SweepOptions,
) -> Result<ViolationReport> {
    domain.validate(true)?;
    let data: Vec<BNDatum> = domain.data().collect();
    let per_point = options.execution.map_reduce(
        &data,
        ViolationReport::default,
        |d| check_datum(d, &domain.degrees_for(d.rank()), selection, options.formula),
        ViolationReport::merge,
    );
    let mut report = per_point.merge(check_enumeration(domain, selection));
    report.violations.sort();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::FormulaMutation;

    fn small() -> SweepDomain {
        SweepDomain {
            k_min: 2,
            k_max: 4,
            part_min: -3,
            part_max: 3,
            genus_slack: 2,
            ..Default::default()
        }
    }

    #[test]
    fn property_ids_round_trip() {
        for &p in Property::ALL {
            assert_eq!(p.id().parse::<Property>().unwrap(), p);
        }
    }

    #[test]
    fn small_sweep_is_clean() {
        let report =
            verify_sweep(&small(), &PropertySelection::All, SweepOptions::default()).unwrap();
        assert!(
            report.is_clean(),
            "{:#?}",
            &report.violations[..report.violations.len().min(5)]
        );
        assert!(Property::ALL
            .iter()
            .all(|p| report.checks.get(p).copied().unwrap_or(0) > 0));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let mutated = SweepOptions {
            formula: ClosedForm::mutated(FormulaMutation::ThirdSign),
            execution: Execution::Sequential,
        };
        let seq = verify_sweep(&small(), &PropertySelection::All, mutated).unwrap();
        let par = verify_sweep(
            &small(),
            &PropertySelection::All,
            SweepOptions {
                execution: Execution::Parallel,
                ..mutated
            },
        )
        .unwrap();
        assert_eq!(seq, par);
        assert!(!seq.is_clean());
    }

    #[test]
    fn mutation_names_the_oracle_property() {
        let only = PropertySelection::only([Property::OracleIdentity]);
        for m in FormulaMutation::ALL {
            let opts = SweepOptions {
                formula: ClosedForm::mutated(m),
                ..Default::default()
            };
            let report = verify_sweep(&small(), &only, opts).unwrap();
            assert!(
                report.violations_of(Property::OracleIdentity) > 0,
                "{m} went unnoticed"
            );
        }
    }

    #[test]
    fn rank_one_domain_is_rejected() {
        let domain = SweepDomain {
            k_min: 1,
            ..small()
        };
        assert!(verify_sweep(&domain, &PropertySelection::All, SweepOptions::default()).is_err());
    }
}
