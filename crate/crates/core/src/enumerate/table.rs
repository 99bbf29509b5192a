use num_bigint::BigInt;

use crate::classify::{
    basepoint_free, birationally_rel_pva, birationally_va, rel_pva, very_ample, Decision,
};
use crate::count::{dependent_divisor_count, CountReport};
use crate::error::Result;
use crate::splitting::{AmpleDegree, BNDatum};

use super::SweepDomain;

/// The numerical invariants every verdict is read off from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariants {
    pub k: usize,
    pub degree: BigInt,
    pub u: BigInt,
    pub rho: BigInt,
    pub h0: BigInt,
    pub r: BigInt,
    pub deg_l: BigInt,
    pub nonneg_parts: usize,
}

impl Invariants {
    pub fn of(d: &BNDatum) -> Self {
        let e = d.splitting();
        Invariants {
            k: e.rank(),
            degree: e.degree(),
            u: e.u(),
            rho: d.rho_prime(),
            h0: e.h0(),
            r: e.r(),
            deg_l: d.line_bundle_degree(),
            nonneg_parts: e.nonneg_parts(),
        }
    }
}

/// Verdicts for one ample degree `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerDegree {
    pub p: usize,
    pub birational_rel: Decision,
    pub rel: Decision,
    /// `None` outside the count's domain (not exactly `p + 1` nonnegative
    /// parts).
    pub count: Option<CountReport>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub datum: BNDatum,
    pub invariants: Invariants,
    pub bpf: Decision,
    pub birational_va: Decision,
    pub va: Decision,
    pub per_degree: Vec<PerDegree>,
}

impl TableRow {
    pub fn build(d: &BNDatum, degrees: &[usize]) -> Result<Self> {
        let per_degree = degrees
            .iter()
            .map(|&p| {
                let ample = AmpleDegree(p);
                let count = if d.splitting().nonneg_parts() == p + 1 {
                    Some(dependent_divisor_count(d, ample)?)
                } else {
                    None
                };
                Ok(PerDegree {
                    p,
                    birational_rel: birationally_rel_pva(d, ample)?,
                    rel: rel_pva(d, ample)?,
                    count,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TableRow {
            datum: d.clone(),
            invariants: Invariants::of(d),
            bpf: basepoint_free(d)?,
            birational_va: birationally_va(d)?,
            va: very_ample(d)?,
            per_degree,
        })
    }
}

/// One row per valid datum of the domain, produced lazily in domain order.
pub fn classification_table(
    domain: &SweepDomain,
) -> Result<impl Iterator<Item = Result<TableRow>> + '_> {
    domain.validate(true)?;
    Ok(domain
        .data()
        .map(move |d| TableRow::build(&d, &domain.degrees_for(d.rank()))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::CaseLabel;
    use crate::enumerate::PPolicy;
    use crate::splitting::SplittingType;

    fn find<'a>(rows: &'a [TableRow], g: i64, parts: &[i64]) -> Option<&'a TableRow> {
        let e = SplittingType::from_i64s(parts).unwrap();
        rows.iter()
            .find(|r| r.datum.genus() == &BigInt::from(g) && r.datum.splitting() == &e)
    }

    #[test]
    fn plane_quartic_row() {
        let domain = SweepDomain {
            k_min: 3,
            k_max: 3,
            part_min: -2,
            part_max: 1,
            genus_slack: 0,
            p_policy: PPolicy::All,
        };
        let rows: Vec<_> = classification_table(&domain)
            .unwrap()
            .collect::<Result<_>>()
            .unwrap();
        let row = find(&rows, 3, &[-2, 0, 1]).expect("row present");
        assert!(row.va.value);
        assert_eq!(row.va.case, CaseLabel::Va(7));
        assert!(rows.iter().all(|r| r.invariants.rho >= BigInt::from(0)));
    }

    #[test]
    fn hyperelliptic_row() {
        let domain = SweepDomain {
            k_min: 2,
            k_max: 2,
            part_min: 0,
            part_max: 3,
            genus_slack: 2,
            p_policy: PPolicy::All,
        };
        let rows: Vec<_> = classification_table(&domain)
            .unwrap()
            .collect::<Result<_>>()
            .unwrap();
        let row = find(&rows, 2, &[0, 2]).expect("row present");
        assert_eq!((row.va.value, row.va.case), (true, CaseLabel::Va(4)));
        // all parts nonnegative at k = 2: only p = 1 carries a count
        assert!(row.per_degree[0].count.is_none());
        assert!(row.per_degree[1].count.is_some());
    }

    #[test]
    fn rows_are_reproducible() {
        let domain = SweepDomain {
            k_max: 3,
            part_min: -2,
            part_max: 2,
            genus_slack: 1,
            ..Default::default()
        };
        let a: Vec<_> = classification_table(&domain)
            .unwrap()
            .collect::<Result<_>>()
            .unwrap();
        let b: Vec<_> = classification_table(&domain)
            .unwrap()
            .collect::<Result<_>>()
            .unwrap();
        assert_eq!(a, b);
    }
}
