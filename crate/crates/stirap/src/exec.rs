//! Scheduling of embarrassingly parallel inner loops (spectrum scans,
//! parameter sweeps). With the `parallel` feature the default strategy
//! fans work out over rayon; without it only the sequential path exists.
//! Either way results come back in input order, so output is deterministic.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Result;

/// How per-item work is scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Execution {
    #[cfg(feature = "parallel")]
    fn default() -> Self {
        Execution::Parallel
    }

    #[cfg(not(feature = "parallel"))]
    fn default() -> Self {
        Execution::Sequential
    }
}

/// Map a fallible function over items, preserving order.
pub(crate) fn try_map<T, U, F>(exec: Execution, items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Send + Sync,
{
    match exec {
        Execution::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_preserves_order() {
        let items: Vec<u64> = (0..100).collect();
        let out = try_map(Execution::Sequential, &items, |&x| Ok(x * x)).unwrap();
        assert_eq!(out, items.iter().map(|x| x * x).collect::<Vec<_>>());
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = try_map(Execution::Sequential, &items, |&x| Ok(x.wrapping_mul(x))).unwrap();
        let par = try_map(Execution::Parallel, &items, |&x| Ok(x.wrapping_mul(x))).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn errors_propagate() {
        let items = vec![1.0, -1.0, 2.0];
        let res = try_map(Execution::Sequential, &items, |&x| {
            if x < 0.0 {
                Err(crate::error::Error::NonPositiveRatio { got: x })
            } else {
                Ok(x)
            }
        });
        assert!(res.is_err());
    }
}
