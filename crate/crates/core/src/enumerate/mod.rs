//! Exhaustive generation of splitting types and `(g, e)` data, the
//! classification table, and the verification sweep.

mod exec;
mod table;
mod verify;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{HbnError, Result};
use crate::splitting::{BNDatum, SplittingType};

pub use exec::Execution;
pub use table::{classification_table, Invariants, PerDegree, TableRow};
pub use verify::{
    verify_sweep, Property, PropertySelection, SweepOptions, Violation, ViolationReport,
};

/// Lazily yields every nondecreasing `k`-tuple with parts in
/// `[part_min, part_max]`, in lexicographic order.
#[derive(Debug, Clone)]
pub struct SplittingTypes {
    current: Option<Vec<i64>>,
    part_max: i64,
    degree: Option<BigInt>,
}

impl Iterator for SplittingTypes {
    type Item = SplittingType;

    fn next(&mut self) -> Option<SplittingType> {
        loop {
            let tuple = self.current.take()?;
            self.current = successor(&tuple, self.part_max);
            if let Some(target) = &self.degree {
                let degree: i64 = tuple.iter().sum();
                if BigInt::from(degree) != *target {
                    continue;
                }
            }
            return Some(SplittingType::from_i64s(&tuple).expect("generated tuples are sorted"));
        }
    }
}

fn successor(tuple: &[i64], part_max: i64) -> Option<Vec<i64>> {
    let i = tuple.iter().rposition(|&v| v < part_max)?;
    let mut next = tuple.to_vec();
    let bumped = next[i] + 1;
    next[i..].iter_mut().for_each(|v| *v = bumped);
    Some(next)
}

/// All splitting types of rank `k` with parts in `[part_min, part_max]`,
/// optionally restricted to a fixed degree.
pub fn enumerate_splitting_types(
    k: usize,
    part_min: i64,
    part_max: i64,
    degree: Option<BigInt>,
) -> SplittingTypes {
    let current = (k >= 1 && part_min <= part_max).then(|| vec![part_min; k]);
    SplittingTypes {
        current,
        part_max,
        degree,
    }
}

/// Which ample degrees `p` a sweep visits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PPolicy {
    All,
    Fixed(Vec<usize>),
}

/// Finite bounds for enumeration and verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepDomain {
    pub k_min: usize,
    pub k_max: usize,
    pub part_min: i64,
    pub part_max: i64,
    /// Genus runs over `u(e) ..= u(e) + genus_slack`.
    pub genus_slack: u64,
    pub p_policy: PPolicy,
}

impl Default for SweepDomain {
    fn default() -> Self {
        SweepDomain {
            k_min: 2,
            k_max: 5,
            part_min: -5,
            part_max: 5,
            genus_slack: 4,
            p_policy: PPolicy::All,
        }
    }
}

impl SweepDomain {
    /// Checks the bounds. Classifier sweeps need `k_min >= 2`.
    pub fn validate(&self, for_classifiers: bool) -> Result<()> {
        let min_rank = if for_classifiers { 2 } else { 1 };
        if self.k_min < min_rank {
            return Err(HbnError::Domain(format!(
                "k_min = {} must be at least {min_rank}",
                self.k_min
            )));
        }
        if self.k_min > self.k_max {
            return Err(HbnError::Domain(format!(
                "k_min = {} exceeds k_max = {}",
                self.k_min, self.k_max
            )));
        }
        if self.part_min > self.part_max {
            return Err(HbnError::Domain(format!(
                "part_min = {} exceeds part_max = {}",
                self.part_min, self.part_max
            )));
        }
        Ok(())
    }

    /// The ample degrees visited for rank `k`.
    pub fn degrees_for(&self, k: usize) -> Vec<usize> {
        match &self.p_policy {
            PPolicy::All => (0..k).collect(),
            PPolicy::Fixed(ps) => ps.iter().copied().filter(|&p| p < k).collect(),
        }
    }

    pub fn splitting_types(&self) -> impl Iterator<Item = SplittingType> + '_ {
        (self.k_min..=self.k_max)
            .flat_map(move |k| enumerate_splitting_types(k, self.part_min, self.part_max, None))
    }

    /// Every valid datum in the domain: rank-major, then splitting type in
    /// lexicographic order, then genus ascending.
    pub fn data(&self) -> impl Iterator<Item = BNDatum> + '_ {
        self.splitting_types().flat_map(move |e| {
            let u = e.u();
            (0..=self.genus_slack).map(move |extra| {
                BNDatum::new(&u + extra, e.clone()).expect("genus at or above u(e) is valid")
            })
        })
    }

    /// `C(part_max - part_min + k, k)`, the number of rank-`k` types.
    pub fn expected_type_count(&self, k: usize) -> Option<u64> {
        let width = (self.part_max - self.part_min + 1).to_u64()?;
        crate::count::binomial((width + k as u64 - 1) as i64, k as i64).to_u64()
    }
}
