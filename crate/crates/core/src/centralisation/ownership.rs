//! Ownership concentration among the largest holders.

use std::cmp::Ordering;
use std::num::NonZeroU32;

use crate::corpus::HolderSnapshot;
use crate::scalar::{exceeds_fraction, Scalar};

/// Only the largest balances are considered.
pub const TOP_HOLDERS: usize = 100;

/// Share the largest holder must strictly exceed, as `(numer, denom)`.
pub const OWNERSHIP_THRESHOLD: (u32, u32) = (3, 5);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OwnershipError {
    #[error("degenerate snapshot: no positive balances")]
    Degenerate,
    #[error("negative balance at position {0}")]
    Negative(usize),
    #[error("balance at position {0} is not comparable")]
    Incomparable(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OwnershipAssessment<T> {
    /// Number of balances that entered the top-holder sum.
    pub holders_considered: usize,
    pub top_balance: T,
    pub top_total: T,
    /// `Some(1)` when one holder controls the supply, otherwise unbounded.
    pub parties: Option<NonZeroU32>,
}

impl<T: Scalar> OwnershipAssessment<T> {
    /// Largest balance as a percentage of the top-holder total.
    pub fn top_share_percent(&self) -> T {
        let hundred = T::from_u32(100).expect("100 fits scalar");
        self.top_balance.clone() * hundred / self.top_total.clone()
    }
}

pub fn assess_ownership<T: Scalar>(
    balances: &[T],
) -> Result<OwnershipAssessment<T>, OwnershipError> {
    let zero = T::zero();
    for (i, b) in balances.iter().enumerate() {
        match b.partial_cmp(&zero) {
            None => return Err(OwnershipError::Incomparable(i)),
            Some(Ordering::Less) => return Err(OwnershipError::Negative(i)),
            _ => {}
        }
    }
    let mut sorted: Vec<T> = balances.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    sorted.truncate(TOP_HOLDERS);
    let total = sorted.iter().cloned().fold(T::zero(), |acc, b| acc + b);
    if total.partial_cmp(&zero) != Some(Ordering::Greater) {
        return Err(OwnershipError::Degenerate);
    }
    let top = sorted[0].clone();
    let (numer, denom) = OWNERSHIP_THRESHOLD;
    let parties = exceeds_fraction(&top, &total, numer, denom).then_some(NonZeroU32::MIN);
    Ok(OwnershipAssessment {
        holders_considered: sorted.len(),
        top_balance: top,
        top_total: total,
        parties,
    })
}

/// Party count for `market_ownership.on_chain_holder`.
pub fn ownership_parties<T: Scalar>(
    snapshot: &HolderSnapshot<T>,
) -> Result<Option<NonZeroU32>, OwnershipError> {
    let balances: Vec<T> = snapshot.balances.iter().map(|(_, b)| b.clone()).collect();
    Ok(assess_ownership(&balances)?.parties)
}
