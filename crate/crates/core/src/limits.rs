//! Process-wide bound on symbolic expansion size.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::Error;

static MAX_DEGREE: AtomicUsize = AtomicUsize::new(usize::MAX);

/// Sets the largest coefficient degree an iterated commutator may reach;
/// `None` removes the bound.
pub fn set_max_degree(limit: Option<usize>) {
    MAX_DEGREE.store(limit.unwrap_or(usize::MAX), Ordering::Relaxed);
}

pub fn max_degree() -> Option<usize> {
    match MAX_DEGREE.load(Ordering::Relaxed) {
        usize::MAX => None,
        n => Some(n),
    }
}

pub(crate) fn check_degree(degree: usize) -> Result<(), Error> {
    match max_degree() {
        Some(limit) if degree > limit => Err(Error::DegreeLimit { degree, limit }),
        _ => Ok(()),
    }
}
