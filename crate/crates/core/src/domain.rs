//! Instance types shared by every solver and bound.
//!
//! A [`BudgetUtilitySet`] is the set `{u : 0 <= u_i <= L_i, sum c_i u_i <= 1}`.
//! Validation of user input uses exact comparisons; checks on computed
//! allocations use [`FEASIBILITY_TOL`].

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{PofError, Result};

/// Absolute tolerance for box and budget checks on computed allocations.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Per-player maximum achievable utilities `L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LimitsFile", into = "LimitsFile")]
pub struct UtilityLimits {
    values: Vec<f64>,
}

impl UtilityLimits {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(PofError::TooFewPlayers(values.len()));
        }
        for (index, &value) in values.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(PofError::NonPositiveLimit { index, value });
            }
        }
        Ok(Self { values })
    }

    /// `L = (1, ..., 1)` with `n` players.
    pub fn equal(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(PofError::InvalidN(n));
        }
        Ok(Self {
            values: vec![1.0; n],
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Non-increasing copy of the limits and the permutation `perm` with
    /// `sorted[j] = original[perm[j]]`. Ties keep their original order.
    pub fn sorted_descending(&self) -> (UtilityLimits, Vec<usize>) {
        let mut perm: Vec<usize> = (0..self.values.len()).collect();
        // sort_by is stable
        perm.sort_by(|&a, &b| self.values[b].total_cmp(&self.values[a]));
        let values = perm.iter().map(|&i| self.values[i]).collect();
        (UtilityLimits { values }, perm)
    }

    pub fn is_sorted_descending(&self) -> bool {
        self.values.windows(2).all(|w| w[0] >= w[1])
    }
}

/// Scatter `sorted` back to the original player order given the permutation
/// returned by [`UtilityLimits::sorted_descending`].
pub fn unpermute(sorted: &[f64], perm: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; sorted.len()];
    for (j, &i) in perm.iter().enumerate() {
        out[i] = sorted[j];
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct LimitsFile {
    #[serde(rename = "L")]
    limits: Vec<f64>,
}

impl TryFrom<LimitsFile> for UtilityLimits {
    type Error = PofError;

    fn try_from(file: LimitsFile) -> Result<Self> {
        UtilityLimits::new(file.limits)
    }
}

impl From<UtilityLimits> for LimitsFile {
    fn from(limits: UtilityLimits) -> Self {
        LimitsFile {
            limits: limits.values,
        }
    }
}

/// The canonical instance: a box intersected with one budget constraint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceFile", into = "InstanceFile")]
pub struct BudgetUtilitySet {
    limits: UtilityLimits,
    costs: Vec<f64>,
}

impl BudgetUtilitySet {
    /// Checks lengths, positivity of `L`, `c >= 0` and `c_i * L_i <= 1`.
    pub fn validate_instance(limits: UtilityLimits, costs: Vec<f64>) -> Result<Self> {
        if limits.len() != costs.len() {
            return Err(PofError::LengthMismatch {
                limits: limits.len(),
                costs: costs.len(),
            });
        }
        for (index, &value) in costs.iter().enumerate() {
            if !(value.is_finite() && value >= 0.0) {
                return Err(PofError::NegativeCost { index, value });
            }
        }
        for (index, (&l, &c)) in limits.values().iter().zip(&costs).enumerate() {
            let product = c * l;
            if product > 1.0 {
                return Err(PofError::UnachievableMaximum { index, product });
            }
        }
        Ok(Self { limits, costs })
    }

    /// Convenience constructor from raw vectors.
    pub fn new(limits: Vec<f64>, costs: Vec<f64>) -> Result<Self> {
        if limits.len() != costs.len() {
            return Err(PofError::LengthMismatch {
                limits: limits.len(),
                costs: costs.len(),
            });
        }
        Self::validate_instance(UtilityLimits::new(limits)?, costs)
    }

    pub fn limits(&self) -> &UtilityLimits {
        &self.limits
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    /// `sum c_i L_i`, the budget needed to give every player its maximum.
    pub fn full_cost(&self) -> f64 {
        self.limits
            .values()
            .iter()
            .zip(&self.costs)
            .map(|(l, c)| l * c)
            .sum()
    }

    /// Budget spent by `u`.
    pub fn spend(&self, u: &[f64]) -> f64 {
        u.iter().zip(&self.costs).map(|(u, c)| u * c).sum()
    }

    /// Box and budget check with absolute tolerance `tol`.
    pub fn contains(&self, u: &[f64], tol: f64) -> bool {
        u.len() == self.len()
            && u
                .iter()
                .zip(self.limits.values())
                .all(|(&ui, &li)| ui >= -tol && ui <= li + tol)
            && self.spend(u) <= 1.0 + tol
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct InstanceFile {
    #[serde(rename = "L")]
    limits: Vec<f64>,
    #[serde(rename = "c")]
    costs: Vec<f64>,
}

impl TryFrom<InstanceFile> for BudgetUtilitySet {
    type Error = PofError;

    fn try_from(file: InstanceFile) -> Result<Self> {
        BudgetUtilitySet::new(file.limits, file.costs)
    }
}

impl From<BudgetUtilitySet> for InstanceFile {
    fn from(set: BudgetUtilitySet) -> Self {
        InstanceFile {
            limits: set.limits.values,
            costs: set.costs,
        }
    }
}

/// A utility vector. The total is always recomputed from the entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    utilities: Vec<f64>,
}

impl Allocation {
    pub fn new(utilities: Vec<f64>) -> Self {
        Self { utilities }
    }

    pub fn utilities(&self) -> &[f64] {
        &self.utilities
    }

    pub fn total(&self) -> f64 {
        self.utilities.iter().sum()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.utilities
    }

    /// Ratios `u_i / L_i` sorted ascending.
    pub fn sorted_ratios(&self, limits: &UtilityLimits) -> Vec<f64> {
        let mut r: Vec<f64> = self
            .utilities
            .iter()
            .zip(limits.values())
            .map(|(u, l)| u / l)
            .collect();
        r.sort_by(f64::total_cmp);
        r
    }
}

impl Serialize for Allocation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            u: &'a [f64],
            total: f64,
        }
        Repr {
            u: &self.utilities,
            total: self.total(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Allocation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            u: Vec<f64>,
        }
        Ok(Allocation::new(Repr::deserialize(d)?.u))
    }
}

/// Structure of the fractional-knapsack utilitarian solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnapsackBreakdown {
    /// Player indices sorted by ascending cost (stable).
    pub order: Vec<usize>,
    /// Number of fully served players, `l(c)`.
    pub split_index: usize,
    /// Fill of player `order[split_index]`, in `[0, 1)`; zero when everyone is served.
    pub fraction: f64,
    pub optimal_total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Pf,
    Mmf,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::Pf => "PF",
            Criterion::Mmf => "MMF",
        })
    }
}

/// Which formula produced a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "PF-equal-n2")]
    PfEqualN2,
    /// `m = k = floor(sqrt n)`.
    #[serde(rename = "PF-equal-branch1")]
    PfEqualBranch1,
    /// `m = k + 1`.
    #[serde(rename = "PF-equal-branch2")]
    PfEqualBranch2,
    #[serde(rename = "PF-unequal-case1")]
    PfUnequalCase1,
    /// `sum L * L_2 > L_1^2` and the prefix candidate `h(l*)` won.
    #[serde(rename = "PF-unequal-case2-prefix")]
    PfUnequalCase2Prefix,
    /// `sum L * L_2 > L_1^2` and the interior `y~` candidate won.
    #[serde(rename = "PF-unequal-case2-tilde")]
    PfUnequalCase2Tilde,
    #[serde(rename = "MMF-S1")]
    MmfS1,
    #[serde(rename = "MMF-S2")]
    MmfS2,
}

impl CaseTag {
    pub fn criterion(self) -> Criterion {
        match self {
            CaseTag::MmfS1 | CaseTag::MmfS2 => Criterion::Mmf,
            _ => Criterion::Pf,
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("case tag serializes");
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

/// Regime of a split index in the max-min bound's case analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    /// `sum_{i<=l} L_i <= (n-l-1) L_{l+1}`
    S0,
    /// `(n-l-1) L_{l+1} < sum_{i<=l} L_i <= (n-l+1) L_{l+1}`
    S1,
    /// `sum_{i<=l} L_i > (n-l+1) L_{l+1}`
    S2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AuxValue {
    Index(usize),
    Real(f64),
    Indices(Vec<usize>),
    Regions(Vec<Region>),
}

impl AuxValue {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            AuxValue::Real(x) => Some(x),
            AuxValue::Index(i) => Some(i as f64),
            _ => None,
        }
    }
}

/// A price-of-fairness upper bound and the parameters that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound: f64,
    pub criterion: Criterion,
    pub case_tag: CaseTag,
    /// Split index `l*` (1-based, over limits sorted descending).
    pub l_star: Option<usize>,
    pub aux: BTreeMap<String, AuxValue>,
}

impl BoundReport {
    pub fn aux_f64(&self, key: &str) -> Option<f64> {
        self.aux.get(key).and_then(AuxValue::as_f64)
    }

    pub fn permutation(&self) -> Option<&[usize]> {
        match self.aux.get("permutation") {
            Some(AuxValue::Indices(p)) => Some(p),
            _ => None,
        }
    }

    pub fn regions(&self) -> Option<&[Region]> {
        match self.aux.get("regions") {
            Some(AuxValue::Regions(r)) => Some(r),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_accepts_slack_instance() {
        let set = BudgetUtilitySet::new(vec![1.0, 1.0], vec![0.5, 0.5]).unwrap();
        assert_eq!(set.full_cost(), 1.0);
    }

    #[test]
    fn validate_rejects_negative_cost() {
        let err = BudgetUtilitySet::new(vec![1.0, 1.0], vec![-0.1, 0.5]).unwrap_err();
        assert!(matches!(err, PofError::NegativeCost { index: 0, .. }));
    }

    #[test]
    fn validate_rejects_unachievable_maximum() {
        let err = BudgetUtilitySet::new(vec![2.0, 1.0], vec![0.6, 0.5]).unwrap_err();
        match err {
            PofError::UnachievableMaximum { index, product } => {
                assert_eq!(index, 0);
                assert!((product - 1.2).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_length_mismatch_and_bad_limits() {
        assert!(matches!(
            BudgetUtilitySet::new(vec![1.0, 1.0], vec![0.5]),
            Err(PofError::LengthMismatch { .. })
        ));
        assert!(matches!(
            UtilityLimits::new(vec![1.0, 0.0]),
            Err(PofError::NonPositiveLimit { index: 1, .. })
        ));
        assert!(matches!(
            UtilityLimits::new(vec![1.0, f64::NAN]),
            Err(PofError::NonPositiveLimit { .. })
        ));
        assert!(matches!(
            UtilityLimits::new(vec![1.0]),
            Err(PofError::TooFewPlayers(1))
        ));
        assert!(matches!(UtilityLimits::equal(1), Err(PofError::InvalidN(1))));
    }

    #[test]
    fn sorted_descending_examples() {
        let l = UtilityLimits::new(vec![0.2, 1.0, 0.5]).unwrap();
        let (s, p) = l.sorted_descending();
        assert_eq!(s.values(), &[1.0, 0.5, 0.2]);
        assert_eq!(p, vec![1, 2, 0]);

        let l = UtilityLimits::new(vec![1.0, 1.0, 1.0]).unwrap();
        let (s, p) = l.sorted_descending();
        assert_eq!(s.values(), &[1.0, 1.0, 1.0]);
        assert_eq!(p, vec![0, 1, 2]);

        let l = UtilityLimits::new(vec![0.25, 1.0]).unwrap();
        let (s, p) = l.sorted_descending();
        assert_eq!(s.values(), &[1.0, 0.25]);
        assert_eq!(p, vec![1, 0]);
    }

    #[test]
    fn instance_json_uses_exact_field_names() {
        let set: BudgetUtilitySet = serde_json::from_str(r#"{"L":[1,0.25],"c":[1,4]}"#).unwrap();
        assert_eq!(set.costs(), &[1.0, 4.0]);
        let text = serde_json::to_string(&set).unwrap();
        assert_eq!(text, r#"{"L":[1.0,0.25],"c":[1.0,4.0]}"#);

        let limits: UtilityLimits = serde_json::from_str(r#"{"L":[1,0.5]}"#).unwrap();
        assert_eq!(limits.values(), &[1.0, 0.5]);
        assert!(serde_json::from_str::<UtilityLimits>(r#"{"L":[1,0]}"#).is_err());
        assert!(serde_json::from_str::<BudgetUtilitySet>(r#"{"L":[2,1],"c":[0.6,0.5]}"#).is_err());
    }

    #[test]
    fn allocation_total_is_recomputed() {
        let a = Allocation::new(vec![0.5, 0.25]);
        assert_eq!(a.total(), 0.75);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"u":[0.5,0.25],"total":0.75}"#);
        let back: Allocation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn case_tag_display_matches_wire_name() {
        assert_eq!(CaseTag::PfEqualN2.to_string(), "PF-equal-n2");
        assert_eq!(CaseTag::MmfS1.to_string(), "MMF-S1");
        assert_eq!(CaseTag::MmfS2.criterion(), Criterion::Mmf);
    }
}
