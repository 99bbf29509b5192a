//! Splitting types of split bundles on the projective line and the exact
//! invariants derived from them.
//!
//! A splitting type `(e_1 <= ... <= e_k)` describes `O(e_1) + ... + O(e_k)`.
//! Everything here is closed-form integer arithmetic on the parts; there is no
//! bundle or sheaf object behind it.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{HbnError, Result};

/// A nondecreasing, nonempty tuple of integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SplittingType {
    parts: Vec<BigInt>,
}

impl SplittingType {
    /// Validating constructor: rejects empty and unsorted input.
    pub fn new(parts: Vec<BigInt>) -> Result<Self> {
        if parts.is_empty() {
            return Err(HbnError::EmptySplittingType);
        }
        if let Some(i) = parts.windows(2).position(|w| w[0] > w[1]) {
            return Err(HbnError::NotNondecreasing {
                index: i + 1,
                left: parts[i].clone(),
                right: parts[i + 1].clone(),
            });
        }
        Ok(SplittingType { parts })
    }

    /// Normalizing constructor: sorts the parts first.
    pub fn sorted(mut parts: Vec<BigInt>) -> Result<Self> {
        parts.sort();
        Self::new(parts)
    }

    pub fn from_i64s(parts: &[i64]) -> Result<Self> {
        Self::new(parts.iter().copied().map(BigInt::from).collect())
    }

    pub fn parts(&self) -> &[BigInt] {
        &self.parts
    }

    /// The rank `k`.
    pub fn rank(&self) -> usize {
        self.parts.len()
    }

    /// The part `e_i`, 1-based as in the usual notation.
    ///
    /// Panics when `i` is outside `1..=k`.
    pub fn part(&self, i: usize) -> &BigInt {
        assert!(
            i >= 1 && i <= self.rank(),
            "part index {i} outside 1..={}",
            self.rank()
        );
        &self.parts[i - 1]
    }

    pub fn smallest(&self) -> &BigInt {
        &self.parts[0]
    }

    pub fn largest(&self) -> &BigInt {
        &self.parts[self.parts.len() - 1]
    }

    pub fn degree(&self) -> BigInt {
        self.parts.iter().sum()
    }

    /// `h^1(End O(e)) = sum_{i<j} max(0, e_j - e_i - 1)`.
    pub fn u(&self) -> BigInt {
        let mut total = BigInt::zero();
        for (i, lo) in self.parts.iter().enumerate() {
            for hi in &self.parts[i + 1..] {
                let gap: BigInt = hi - lo - 1;
                if gap.is_positive() {
                    total += gap;
                }
            }
        }
        total
    }

    /// Expected dimension `g - u(e)` of the splitting locus. Defined for any
    /// integer `g`, so sweeps may probe invalid pairs.
    pub fn rho_prime(&self, genus: &BigInt) -> BigInt {
        genus - self.u()
    }

    /// `h^0(O(e)) = sum max(0, e_i + 1)`.
    pub fn h0(&self) -> BigInt {
        self.h0_profile(&BigInt::zero())
    }

    /// `r = h^0 - 1`; equals `-1` when there are no sections.
    pub fn r(&self) -> BigInt {
        self.h0() - 1
    }

    /// `h^0(O(e)(n)) = sum max(0, e_i + n + 1)`.
    pub fn h0_profile(&self, n: &BigInt) -> BigInt {
        self.parts
            .iter()
            .map(|e| -> BigInt { e + n + 1 })
            .filter(|v| v.is_positive())
            .sum()
    }

    /// Recovers the splitting type from sampled values of `n -> h^0(O(e)(n))`.
    ///
    /// The samples must be taken at consecutive integers, start where the
    /// profile still vanishes, and reach past the last jump of the first
    /// difference. The first difference at `n` counts the parts `>= -n`, so the
    /// number of parts equal to `-n` is its increment there.
    pub fn from_h0_profile(samples: &BTreeMap<BigInt, BigInt>) -> Result<Self> {
        let inconsistent = |msg: String| Err(HbnError::InconsistentProfile(msg));
        if samples.len() < 2 {
            return inconsistent(format!("need at least 2 samples, got {}", samples.len()));
        }
        let mut iter = samples.iter();
        let (first_n, first_h) = iter.next().expect("nonempty");
        if !first_h.is_zero() {
            return inconsistent(format!(
                "profile must vanish at its lowest sample n = {first_n}, got {first_h}"
            ));
        }

        let mut parts = Vec::new();
        let mut prev_n = first_n.clone();
        let mut prev_h = first_h.clone();
        let mut prev_diff = BigInt::zero();
        for (n, h) in iter {
            if *n != &prev_n + 1 {
                return inconsistent(format!("samples skip from n = {prev_n} to n = {n}"));
            }
            let diff = h - &prev_h;
            if diff < prev_diff {
                return inconsistent(format!(
                    "first difference decreases at n = {n} ({prev_diff} then {diff})"
                ));
            }
            let jump = &diff - &prev_diff;
            let mut remaining = jump;
            while remaining.is_positive() {
                parts.push(-n.clone());
                remaining -= 1;
            }
            prev_n = n.clone();
            prev_h = h.clone();
            prev_diff = diff;
        }
        if parts.is_empty() {
            return inconsistent("profile is identically zero".to_string());
        }
        // Parts were discovered from the largest down.
        parts.reverse();
        let recovered = SplittingType::new(parts)?;
        for (n, h) in samples {
            if recovered.h0_profile(n) != *h {
                return inconsistent(format!("no splitting type reproduces h0({n}) = {h}"));
            }
        }
        Ok(recovered)
    }

    /// Tensor with `O(n)`: every part shifted by `n`.
    pub fn twist(&self, n: &BigInt) -> SplittingType {
        SplittingType {
            parts: self.parts.iter().map(|e| e + n).collect(),
        }
    }

    /// `#{i : e_i >= 0}`.
    pub fn nonneg_parts(&self) -> usize {
        self.parts.iter().filter(|e| !e.is_negative()).count()
    }

    /// `#{i : e_i <= 0}`.
    pub fn nonpositive_parts(&self) -> usize {
        self.parts.iter().filter(|e| !e.is_positive()).count()
    }

    /// `#{i : e_i < 0}`.
    pub fn negative_parts(&self) -> usize {
        self.parts.iter().filter(|e| e.is_negative()).count()
    }

    /// `e_k - e_1 <= 1`; equivalently `u(e) = 0`.
    pub fn is_balanced(&self) -> bool {
        self.largest() - self.smallest() <= BigInt::one()
    }

    /// Sum of the top `count` parts.
    pub fn top_sum(&self, count: usize) -> BigInt {
        self.parts[self.rank().saturating_sub(count)..].iter().sum()
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// A genus together with a splitting type whose locus is nonempty for a
/// general cover: `g >= 0` and `rho'(g, e) >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BNDatum {
    genus: BigInt,
    e: SplittingType,
}

impl BNDatum {
    pub fn new(genus: BigInt, e: SplittingType) -> Result<Self> {
        if genus.is_negative() {
            return Err(HbnError::NegativeGenus(genus));
        }
        let rho = e.rho_prime(&genus);
        if rho.is_negative() {
            return Err(HbnError::EmptyLocus { rho });
        }
        Ok(BNDatum { genus, e })
    }

    pub fn from_i64s(genus: i64, parts: &[i64]) -> Result<Self> {
        Self::new(BigInt::from(genus), SplittingType::from_i64s(parts)?)
    }

    pub fn genus(&self) -> &BigInt {
        &self.genus
    }

    pub fn splitting(&self) -> &SplittingType {
        &self.e
    }

    pub fn rank(&self) -> usize {
        self.e.rank()
    }

    pub fn rho_prime(&self) -> BigInt {
        self.e.rho_prime(&self.genus)
    }

    /// Degree of the line bundle: `deg(e) + g + k - 1` (Riemann-Roch on the
    /// pushforward).
    pub fn line_bundle_degree(&self) -> BigInt {
        self.e.degree() + &self.genus + BigInt::from(self.rank()) - 1
    }
}

impl fmt::Display for BNDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={} e={}", self.genus, self.e)
    }
}

/// The `p` in (relative) `p`-very ampleness; meaningful for `p <= k - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AmpleDegree(pub usize);

impl AmpleDegree {
    pub fn get(self) -> usize {
        self.0
    }

    pub fn check(self, k: usize) -> Result<Self> {
        if self.0 + 1 > k {
            return Err(HbnError::BadAmpleDegree { p: self.0, k });
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(parts: &[i64]) -> SplittingType {
        SplittingType::from_i64s(parts).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// Brute-force double sum over ordered index pairs.
    fn u_oracle(parts: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..parts.len() {
            for j in 0..parts.len() {
                if i < j {
                    s += (parts[j] - parts[i] - 1).max(0);
                }
            }
        }
        s
    }

    #[test]
    fn degree_examples() {
        assert_eq!(st(&[-1, 0, 1]).degree(), big(0));
        assert_eq!(st(&[-2, 0, 1]).degree(), big(-1));
        assert_eq!(st(&[0, 5]).degree(), big(5));
    }

    #[test]
    fn u_examples() {
        assert_eq!(st(&[4, 4, 4, 4]).u(), big(0));
        assert_eq!(u_oracle(&[-1, 0, 1]), 1);
        assert_eq!(st(&[-1, 0, 1]).u(), big(1));
        assert_eq!(u_oracle(&[-2, 0, 1]), 3);
        assert_eq!(st(&[-2, 0, 1]).u(), big(3));
    }

    #[test]
    fn rho_prime_examples() {
        let e = st(&[-3, 1, 2, 7]);
        assert_eq!(e.rho_prime(&e.u()), big(0));
        assert_eq!(st(&[-1, 0, 1]).rho_prime(&big(1)), big(0));
        assert_eq!(u_oracle(&[0, 4]), 3);
        assert_eq!(st(&[0, 4]).rho_prime(&big(3)), big(0));
    }

    #[test]
    fn h0_examples() {
        let e = st(&[-2, 0, 1]);
        assert_eq!(e.h0(), big(3));
        assert_eq!(e.r(), big(2));
        assert_eq!(st(&[-5, -3]).h0(), big(0));
        for g in 0..6 {
            assert_eq!(st(&[0, g]).h0(), big(g + 2));
        }
    }

    #[test]
    fn h0_profile_examples() {
        let e = st(&[-2, 0, 1]);
        assert_eq!(e.h0_profile(&big(0)), big(3));
        assert_eq!(e.h0_profile(&big(-10)), big(0));
        // max(0,9) + max(0,11) + max(0,12)
        assert_eq!(e.h0_profile(&big(10)), big(32));
    }

    fn profile(e: &SplittingType, lo: i64, hi: i64) -> BTreeMap<BigInt, BigInt> {
        (lo..=hi).map(|n| (big(n), e.h0_profile(&big(n)))).collect()
    }

    #[test]
    fn from_h0_profile_examples() {
        let balanced = st(&[0, 0]);
        assert_eq!(
            SplittingType::from_h0_profile(&profile(&balanced, -3, 2)).unwrap(),
            balanced
        );
        let e = st(&[-2, 0, 1]);
        assert_eq!(
            SplittingType::from_h0_profile(&profile(&e, -4, 3)).unwrap(),
            e
        );
    }

    #[test]
    fn from_h0_profile_rejects_concave_profile() {
        // first differences 2 then 1
        let samples: BTreeMap<BigInt, BigInt> = [(0, 0), (1, 2), (2, 3)]
            .iter()
            .map(|&(n, h)| (big(n), big(h)))
            .collect();
        assert!(matches!(
            SplittingType::from_h0_profile(&samples),
            Err(HbnError::InconsistentProfile(_))
        ));
    }

    #[test]
    fn from_h0_profile_rejects_gaps_and_nonzero_start() {
        let gap: BTreeMap<BigInt, BigInt> = [(0, 0), (2, 2)]
            .iter()
            .map(|&(n, h)| (big(n), big(h)))
            .collect();
        assert!(SplittingType::from_h0_profile(&gap).is_err());
        let start: BTreeMap<BigInt, BigInt> = [(0, 1), (1, 2)]
            .iter()
            .map(|&(n, h)| (big(n), big(h)))
            .collect();
        assert!(SplittingType::from_h0_profile(&start).is_err());
        let zero: BTreeMap<BigInt, BigInt> = [(0, 0), (1, 0)]
            .iter()
            .map(|&(n, h)| (big(n), big(h)))
            .collect();
        assert!(SplittingType::from_h0_profile(&zero).is_err());
    }

    #[test]
    fn twist_examples() {
        assert_eq!(st(&[-1, 0, 1]).twist(&big(0)), st(&[-1, 0, 1]));
        assert_eq!(st(&[-1, 0, 1]).twist(&big(-1)), st(&[-2, -1, 0]));
        assert_eq!(st(&[0, 7]).twist(&big(1)), st(&[1, 8]));
    }

    #[test]
    fn part_counts() {
        assert_eq!(st(&[-2, 0, 0]).nonneg_parts(), 2);
        assert_eq!(st(&[-1, -1]).nonneg_parts(), 0);
        assert_eq!(st(&[0, 0, 0]).nonneg_parts(), 3);
        let e = st(&[-2, -1, 0, 0, 3]);
        assert_eq!(e.negative_parts(), 2);
        assert_eq!(e.nonpositive_parts(), 4);
    }

    #[test]
    fn line_bundle_degree_examples() {
        assert_eq!(
            BNDatum::from_i64s(1, &[-1, 0, 1])
                .unwrap()
                .line_bundle_degree(),
            big(3)
        );
        assert_eq!(
            BNDatum::from_i64s(3, &[-2, 0, 1])
                .unwrap()
                .line_bundle_degree(),
            big(4)
        );
        for g in 0..8 {
            let d = BNDatum::from_i64s(g, &[0, g]).unwrap();
            assert_eq!(d.line_bundle_degree(), big(2 * g + 1));
        }
    }

    #[test]
    fn balanced_examples() {
        assert!(st(&[0, 0, 1]).is_balanced());
        assert!(!st(&[-1, 1]).is_balanced());
        assert!(st(&[17]).is_balanced());
    }

    #[test]
    fn constructors_validate() {
        assert_eq!(
            SplittingType::new(vec![]),
            Err(HbnError::EmptySplittingType)
        );
        assert!(matches!(
            SplittingType::from_i64s(&[0, -2, 1]),
            Err(HbnError::NotNondecreasing { index: 1, .. })
        ));
        assert_eq!(
            SplittingType::sorted(vec![big(0), big(-2), big(1)]).unwrap(),
            st(&[-2, 0, 1])
        );
        assert!(matches!(
            BNDatum::from_i64s(-1, &[0, 0]),
            Err(HbnError::NegativeGenus(_))
        ));
        assert!(matches!(
            BNDatum::from_i64s(2, &[-2, 0, 0, 0]),
            Err(HbnError::EmptyLocus { .. })
        ));
    }

    #[test]
    fn ample_degree_range() {
        assert!(AmpleDegree(2).check(3).is_ok());
        assert_eq!(
            AmpleDegree(3).check(3),
            Err(HbnError::BadAmpleDegree { p: 3, k: 3 })
        );
    }

    #[test]
    fn plane_curve_families() {
        // (-1,...,-1,0,0,0) at g=1 and (-2,-1,...,-1,0,0,0) at g=3
        for minus_ones in 0..6usize {
            let mut cubic = vec![-1; minus_ones];
            cubic.extend([0, 0, 0]);
            let d = BNDatum::from_i64s(1, &cubic).unwrap();
            assert_eq!(d.line_bundle_degree(), big(3));
            let mut quartic = vec![-2];
            quartic.extend(vec![-1; minus_ones]);
            quartic.extend([0, 0, 0]);
            let d = BNDatum::from_i64s(3, &quartic).unwrap();
            assert_eq!(d.line_bundle_degree(), big(4));
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn splitting() -> impl Strategy<Value = SplittingType> {
            prop::collection::vec(-8i64..8, 1..6).prop_map(|mut v| {
                v.sort();
                SplittingType::from_i64s(&v).unwrap()
            })
        }

        proptest! {
            #[test]
            fn u_is_twist_invariant(e in splitting(), n in -20i64..20) {
                prop_assert_eq!(e.twist(&big(n)).u(), e.u());
            }

            #[test]
            fn u_matches_oracle(e in splitting()) {
                let raw: Vec<i64> = e.parts().iter().map(|p| i64::try_from(p).unwrap()).collect();
                prop_assert_eq!(e.u(), big(u_oracle(&raw)));
            }

            #[test]
            fn profile_is_monotone_and_eventually_linear(e in splitting()) {
                let k = big(e.rank() as i64);
                let mut prev = e.h0_profile(&big(-30));
                for n in -29i64..30 {
                    let h = e.h0_profile(&big(n));
                    prop_assert!(h >= prev);
                    if big(n) >= -e.smallest() - 1 {
                        prop_assert_eq!(&h, &(&k * (n + 1) + e.degree()));
                    }
                    prev = h;
                }
            }

            #[test]
            fn profile_round_trip(e in splitting()) {
                let lo = i64::try_from(-e.largest() - 2).unwrap();
                let hi = i64::try_from(-e.smallest()).unwrap();
                prop_assert_eq!(SplittingType::from_h0_profile(&profile(&e, lo, hi)).unwrap(), e);
            }

            #[test]
            fn balanced_iff_rho_equals_genus(e in splitting(), g in 0i64..10) {
                prop_assert_eq!(e.rho_prime(&big(g)) == big(g), e.is_balanced());
            }
        }
    }
}
