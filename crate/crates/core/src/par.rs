//! Execution switch for the data-parallel loops.
//!
//! With the `parallel` feature (default) [`Execution::Parallel`] runs on the
//! rayon global pool. Without it every request falls back to a plain
//! sequential iterator, so callers never need to cfg-gate.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// True when work will actually be spread over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// `(0..len).map(f).collect()`, order preserved.
pub(crate) fn map_range<T, F>(exec: Execution, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..len).map(f).collect()
}

/// Minimum of `f` over `0..len` under a total order. The result does not
/// depend on the execution mode as long as `cmp` never reports two distinct
/// items as equal.
pub(crate) fn min_over_range<T, F, C>(exec: Execution, len: u64, f: F, cmp: C) -> Option<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
    C: Fn(&T, &T) -> std::cmp::Ordering + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..len).into_par_iter().map(f).min_by(|a, b| cmp(a, b));
    }
    let _ = exec;
    (0..len).map(f).min_by(|a, b| cmp(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let seq = map_range(Execution::Sequential, 100, |i| i * i);
        let par = map_range(Execution::Parallel, 100, |i| i * i);
        assert_eq!(seq, par);

        let key = |i: u64| ((i as i64 - 37).abs(), i);
        let a = min_over_range(Execution::Sequential, 100, key, |x, y| x.cmp(y));
        let b = min_over_range(Execution::Parallel, 100, key, |x, y| x.cmp(y));
        assert_eq!(a, Some((0, 37)));
        assert_eq!(a, b);
    }

    #[test]
    fn empty_range() {
        let v: Vec<usize> = map_range(Execution::Parallel, 0, |i| i);
        assert!(v.is_empty());
        assert_eq!(min_over_range(Execution::Parallel, 0, |i| i, |a, b| a.cmp(b)), None);
    }
}
