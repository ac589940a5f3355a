//! Tight upper bounds on the price of fairness.
//!
//! All unequal-limit bounds work on limits sorted in descending order; the
//! permutation used is reported under the `permutation` aux key. Split
//! indices (`l_star`) are 1-based positions in that sorted order.

use std::collections::BTreeMap;

use crate::domain::{AuxValue, BoundReport, CaseTag, Criterion, Region, UtilityLimits};
use crate::error::{PofError, Result};

/// Prefix and tail sums of limits sorted in descending order.
///
/// `a[l] = sum_{i<=l} sqrt(L_i)`, `m[l] = sum_{i<=l} L_i` for `l = 0..=n`, and
/// `b[l] = sum_{i>=l+2} L_i` for `l = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefixAggregates {
    pub a: Vec<f64>,
    pub m: Vec<f64>,
    pub b: Vec<f64>,
}

impl PrefixAggregates {
    pub fn new(sorted: &[f64]) -> Self {
        let n = sorted.len();
        let mut a = vec![0.0; n + 1];
        let mut m = vec![0.0; n + 1];
        for (i, &l) in sorted.iter().enumerate() {
            a[i + 1] = a[i] + l.sqrt();
            m[i + 1] = m[i] + l;
        }
        // b[l] = sum over 1-based i >= l + 2, i.e. 0-based index >= l + 1
        let mut b = vec![0.0; n + 1];
        for l in (0..n).rev() {
            b[l] = b[l + 1] + sorted.get(l + 1).copied().unwrap_or(0.0);
        }
        Self { a, m, b }
    }

    /// `h(l) = (A(l)^2 + B(l-1)) / M(l)` for `l >= 1`.
    pub fn h(&self, l: usize) -> f64 {
        (self.a[l] * self.a[l] + self.b[l - 1]) / self.m[l]
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        Err(PofError::InvalidN(n))
    } else {
        Ok(())
    }
}

fn isqrt(n: usize) -> usize {
    let mut k = (n as f64).sqrt() as usize;
    while k * k > n {
        k -= 1;
    }
    while (k + 1) * (k + 1) <= n {
        k += 1;
    }
    k
}

/// The block size `m` of the equal-limit worst case: `argmin_{m in {k, k+1}}
/// (m + n/m - 1)` with `k = floor(sqrt n)`, ties to the smaller `m`.
pub fn equal_case_block(n: usize) -> usize {
    let k = isqrt(n);
    // m + n/m - 1 at k is <= its value at k+1 iff n <= k(k+1)
    if n <= k * (k + 1) {
        k
    } else {
        k + 1
    }
}

/// Tight bound on the price of proportional fairness with equal limits.
pub fn pf_bound_equal(n: usize) -> Result<BoundReport> {
    check_n(n)?;
    let k = isqrt(n);
    let eps = (n as f64).sqrt() - k as f64;
    let mut aux = BTreeMap::new();
    aux.insert("k".to_string(), AuxValue::Index(k));
    aux.insert("epsilon".to_string(), AuxValue::Real(eps));

    if n == 2 {
        let r3 = 3f64.sqrt();
        aux.insert("y_star".to_string(), AuxValue::Real(r3 - 1.0));
        return Ok(BoundReport {
            bound: (2.0 - r3) / 4.0,
            criterion: Criterion::Pf,
            case_tag: CaseTag::PfEqualN2,
            l_star: Some(1),
            aux,
        });
    }

    let m = equal_case_block(n);
    let (nf, mf) = (n as f64, m as f64);
    let ratio = (mf * mf + nf - mf) / (mf * nf);
    aux.insert("m".to_string(), AuxValue::Index(m));
    Ok(BoundReport {
        bound: 1.0 - ratio,
        criterion: Criterion::Pf,
        case_tag: if m == k {
            CaseTag::PfEqualBranch1
        } else {
            CaseTag::PfEqualBranch2
        },
        l_star: Some(m),
        aux,
    })
}

/// Which candidate attains the minimum in the unequal PF bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PfWinner {
    Prefix,
    Tilde,
}

#[derive(Debug, Clone)]
pub(crate) struct PfAnalysis {
    pub sorted: Vec<f64>,
    pub perm: Vec<usize>,
    pub agg: PrefixAggregates,
    pub case2: bool,
    pub l_star: usize,
    pub winner: PfWinner,
    /// min over l of h(l) / n
    pub prefix_value: f64,
    pub tilde_value: Option<f64>,
}

impl PfAnalysis {
    pub fn ratio(&self) -> f64 {
        match (self.winner, self.tilde_value) {
            (PfWinner::Tilde, Some(t)) => t,
            _ => self.prefix_value,
        }
    }

    /// `y~ = (-sqrt L_1 + sqrt(B(0) + L_1 + B(0) L_1 / L_2)) / B(0)`.
    pub fn y_tilde(&self) -> f64 {
        tilde_y(&self.sorted, &self.agg)
    }
}

pub(crate) fn tilde_y(sorted: &[f64], agg: &PrefixAggregates) -> f64 {
    let (l1, l2) = (sorted[0], sorted[1]);
    let b0 = agg.b[0];
    (-l1.sqrt() + (b0 + l1 + b0 * l1 / l2).sqrt()) / b0
}

pub(crate) fn analyze_pf(limits: &UtilityLimits) -> PfAnalysis {
    let (sorted, perm) = limits.sorted_descending();
    let sorted = sorted.values().to_vec();
    let n = sorted.len();
    let nf = n as f64;
    let agg = PrefixAggregates::new(&sorted);

    let mut l_star = 1;
    let mut h_min = agg.h(1);
    for l in 2..n {
        let h = agg.h(l);
        if h < h_min {
            h_min = h;
            l_star = l;
        }
    }
    let prefix_value = h_min / nf;

    let (l1, l2) = (sorted[0], sorted[1]);
    let total = agg.m[n];
    let case2 = total * l2 > l1 * l1;
    let tilde_value = case2.then(|| {
        let tail: f64 = sorted[2..].iter().sum();
        let root = (l2 * l2 + 2.0 * l1 * l2 + (l1 + l2) * tail).sqrt() + (l1 * l2).sqrt();
        root * root / (nf * (l1 + l2) * (l1 + l2))
    });
    let winner = match tilde_value {
        Some(t) if t < prefix_value => PfWinner::Tilde,
        _ => PfWinner::Prefix,
    };
    if winner == PfWinner::Tilde {
        l_star = 1;
    }
    PfAnalysis {
        sorted,
        perm,
        agg,
        case2,
        l_star,
        winner,
        prefix_value,
        tilde_value,
    }
}

/// Tight bound on the price of proportional fairness for arbitrary limits.
pub fn pf_bound_unequal(limits: &UtilityLimits) -> Result<BoundReport> {
    check_n(limits.len())?;
    let an = analyze_pf(limits);
    let l = an.l_star;
    let mut aux = BTreeMap::new();
    aux.insert("permutation".to_string(), AuxValue::Indices(an.perm.clone()));
    aux.insert("prefix_value".to_string(), AuxValue::Real(an.prefix_value));
    if let Some(t) = an.tilde_value {
        aux.insert("tilde_value".to_string(), AuxValue::Real(t));
    }
    aux.insert("A".to_string(), AuxValue::Real(an.agg.a[l]));
    aux.insert("M".to_string(), AuxValue::Real(an.agg.m[l]));
    aux.insert("B".to_string(), AuxValue::Real(an.agg.b[l]));
    aux.insert("x_star".to_string(), AuxValue::Real(1.0 / an.sorted[l]));
    let case_tag = match (an.case2, an.winner) {
        (false, _) => CaseTag::PfUnequalCase1,
        (true, PfWinner::Prefix) => CaseTag::PfUnequalCase2Prefix,
        (true, PfWinner::Tilde) => CaseTag::PfUnequalCase2Tilde,
    };
    let y_star = match an.winner {
        PfWinner::Prefix => 1.0 / an.agg.a[l],
        PfWinner::Tilde => {
            let y = an.y_tilde();
            aux.insert("y_tilde".to_string(), AuxValue::Real(y));
            y
        }
    };
    aux.insert("y_star".to_string(), AuxValue::Real(y_star));
    Ok(BoundReport {
        bound: 1.0 - an.ratio(),
        criterion: Criterion::Pf,
        case_tag,
        l_star: Some(l),
        aux,
    })
}

#[derive(Debug, Clone)]
pub(crate) struct MmfAnalysis {
    pub sorted: Vec<f64>,
    pub perm: Vec<usize>,
    /// region of split index l = 1..n-1, stored at position l - 1
    pub regions: Vec<Region>,
    pub l_star: usize,
    pub in_s1: bool,
    pub prefix: f64,
    pub total: f64,
}

impl MmfAnalysis {
    pub fn n(&self) -> usize {
        self.sorted.len()
    }

    /// `Y` of the worst-case construction.
    pub fn y(&self) -> f64 {
        if self.in_s1 {
            let (n, l) = (self.n() as f64, self.l_star as f64);
            0.5 * (self.prefix / self.sorted[self.l_star] - n + l + 1.0)
        } else {
            1.0
        }
    }

    pub fn ratio(&self) -> f64 {
        let (n, l) = (self.n() as f64, self.l_star as f64);
        if self.in_s1 {
            let next = self.sorted[self.l_star];
            let d = self.prefix + (n - l + 1.0) * next;
            4.0 * next * self.total / (d * d)
        } else {
            self.total / (self.prefix * (n - l + 1.0))
        }
    }
}

pub(crate) fn analyze_mmf(limits: &UtilityLimits) -> MmfAnalysis {
    let (sorted, perm) = limits.sorted_descending();
    let sorted = sorted.values().to_vec();
    let n = sorted.len();
    let total: f64 = sorted.iter().sum();

    let mut prefix = 0.0;
    let mut prefixes = Vec::with_capacity(n - 1);
    let mut regions = Vec::with_capacity(n - 1);
    for l in 1..n {
        prefix += sorted[l - 1];
        prefixes.push(prefix);
        let next = sorted[l];
        let lower = (n - l - 1) as f64 * next;
        let upper = (n - l + 1) as f64 * next;
        regions.push(if prefix > upper {
            Region::S2
        } else if prefix > lower {
            Region::S1
        } else {
            Region::S0
        });
    }
    assert!(
        regions[n - 2] != Region::S0,
        "split index n-1 must lie in S1 or S2 for positive limits: {sorted:?}"
    );

    let last_s1 = regions.iter().rposition(|&r| r == Region::S1);
    let (l_star, in_s1) = match last_s1 {
        Some(pos) => (pos + 1, true),
        None => {
            let pos = regions
                .iter()
                .position(|&r| r == Region::S2)
                .expect("S2 contains n-1 when S1 is empty");
            (pos + 1, false)
        }
    };
    MmfAnalysis {
        prefix: prefixes[l_star - 1],
        sorted,
        perm,
        regions,
        l_star,
        in_s1,
        total,
    }
}

/// Tight bound on the price of max-min fairness for arbitrary limits.
pub fn mmf_bound_unequal(limits: &UtilityLimits) -> Result<BoundReport> {
    check_n(limits.len())?;
    let an = analyze_mmf(limits);
    let mut aux = BTreeMap::new();
    aux.insert("permutation".to_string(), AuxValue::Indices(an.perm.clone()));
    aux.insert("regions".to_string(), AuxValue::Regions(an.regions.clone()));
    aux.insert("Y".to_string(), AuxValue::Real(an.y()));
    aux.insert("M".to_string(), AuxValue::Real(an.prefix));
    Ok(BoundReport {
        bound: 1.0 - an.ratio(),
        criterion: Criterion::Mmf,
        case_tag: if an.in_s1 {
            CaseTag::MmfS1
        } else {
            CaseTag::MmfS2
        },
        l_star: Some(an.l_star),
        aux,
    })
}

/// Dispatch on criterion for arbitrary limits.
pub fn bound_unequal(limits: &UtilityLimits, criterion: Criterion) -> Result<BoundReport> {
    match criterion {
        Criterion::Pf => pf_bound_unequal(limits),
        Criterion::Mmf => mmf_bound_unequal(limits),
    }
}

/// Earlier equal-limit PF bound `1 - (2 sqrt n - 1) / n`.
pub fn bft_pf_bound_equal(n: usize) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    Ok(1.0 - (2.0 * nf.sqrt() - 1.0) / nf)
}

/// Equal-limit MMF bound `1 - 4n / (n+1)^2`.
pub fn bft_mmf_bound_equal(n: usize) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    Ok(1.0 - 4.0 * nf / ((nf + 1.0) * (nf + 1.0)))
}

/// Relative improvement of [`pf_bound_equal`] over [`bft_pf_bound_equal`].
pub fn delta_improvement(n: usize) -> Result<f64> {
    let bft = bft_pf_bound_equal(n)?;
    let ours = pf_bound_equal(n)?.bound;
    Ok((bft - ours) / bft)
}

/// Piecewise closed form of [`delta_improvement`], valid for `n >= 3`.
pub fn delta_piecewise(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(PofError::InvalidN(n));
    }
    let nf = n as f64;
    let k = isqrt(n);
    let kf = k as f64;
    let eps = nf.sqrt() - kf;
    let denom = nf - 2.0 * nf.sqrt() + 1.0;
    Ok(if equal_case_block(n) == k {
        eps * eps / (kf * denom)
    } else {
        (1.0 - eps) * (1.0 - eps) / ((kf + 1.0) * denom)
    })
}

/// Supremum of both bounds over all limits with `n` players: `1 - 1/n`.
pub fn worst_case_sup(n: usize, _criterion: Criterion) -> Result<f64> {
    check_n(n)?;
    Ok(1.0 - 1.0 / n as f64)
}
