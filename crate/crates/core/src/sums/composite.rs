//! Composite bases: which `n` behave like primes for every `k <= k_max`.

use serde::Serialize;

use super::{classify_all, CongruenceRecord};
use crate::arith::is_prime;
use crate::error::{Error, Result};

/// Upper end of [`REPORTED_PRIME_LIKE`]; the reported sequence is open-ended.
pub const REPORTED_PRIME_LIKE_MAX: u64 = 164;

/// Composite `n <= 164` previously reported to satisfy all of
/// `S_n^(k) ≡ 0 (mod n^m(k))` for `1 <= k <= 8`. One garbled entry of the
/// original listing is left out, so `42` and `49` are deliberately absent.
pub const REPORTED_PRIME_LIKE: &[u64] = &[
    21, 26, 34, 35, 39, 40, 52, 55, 57, 58, 63, 68, 74, 77, 78, 82, 84, 91, 93, 104, 106, 110, 111,
    114, 116, 117, 119, 121, 122, 126, 129, 133, 136, 143, 144, 145, 146, 147, 148, 154, 155, 156,
    161, 164,
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositeRow {
    pub n: u64,
    pub holds_for_all_k: bool,
    pub records: Vec<CongruenceRecord>,
}

impl CompositeRow {
    /// The `k` whose expected congruence holds.
    pub fn holding_ks(&self) -> Vec<u32> {
        self.records.iter().filter(|r| r.holds()).map(|r| r.k).collect()
    }
}

/// A composite where the computation and the reported list disagree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ListDisagreement {
    pub n: u64,
    pub reported: bool,
    pub computed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositeScan {
    pub n_max: u64,
    pub k_max: u32,
    pub precision: u32,
    pub rows: Vec<CompositeRow>,
    pub disagreements: Vec<ListDisagreement>,
}

impl CompositeScan {
    /// Composites satisfying every congruence.
    pub fn passing(&self) -> Vec<u64> {
        self.rows.iter().filter(|r| r.holds_for_all_k).map(|r| r.n).collect()
    }

    pub fn row(&self, n: u64) -> Option<&CompositeRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

pub fn composite_row(n: u64, k_max: u32, precision: u32) -> Result<CompositeRow> {
    let records = classify_all(n, k_max, precision)?;
    Ok(CompositeRow { n, holds_for_all_k: records.iter().all(|r| r.holds()), records })
}

/// Checks every composite `4 <= n <= n_max` and compares against
/// [`REPORTED_PRIME_LIKE`] on the range it covers.
pub fn composite_scan(n_max: u64, k_max: u32, precision: u32) -> Result<CompositeScan> {
    if k_max < 1 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    let rows: Vec<CompositeRow> = (4..=n_max)
        .filter(|&n| !is_prime(n))
        .map(|n| composite_row(n, k_max, precision))
        .collect::<Result<_>>()?;
    let disagreements = rows
        .iter()
        .filter(|r| r.n <= REPORTED_PRIME_LIKE_MAX)
        .filter_map(|r| {
            let reported = REPORTED_PRIME_LIKE.contains(&r.n);
            (reported != r.holds_for_all_k).then_some(ListDisagreement {
                n: r.n,
                reported,
                computed: r.holds_for_all_k,
            })
        })
        .collect();
    Ok(CompositeScan { n_max, k_max, precision, rows, disagreements })
}
