//! Execution policy for the data-parallel inner loops.
//!
//! With the `parallel` feature (on by default) [`Exec::Parallel`] dispatches
//! to rayon. Without it every policy runs sequentially, so callers never need
//! their own `cfg` switches. Results are always returned in input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }

    /// First `Some` in input order.
    pub fn find_map_first<T, R, F>(self, items: &[T], f: F) -> Option<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Option<R> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().find_map_first(f),
            _ => items.iter().find_map(f),
        }
    }

    pub fn flat_map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Vec<R> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().flat_map_iter(f).collect(),
            _ => items.iter().flat_map(f).collect(),
        }
    }
}

/// All unordered index pairs `(i, j)` with `i < j < n`, in lexicographic order.
pub fn index_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies_agree() {
        let xs: Vec<i64> = (0..200).collect();
        let seq = Exec::Sequential.map(&xs, |x| x * x);
        let par = Exec::Parallel.map(&xs, |x| x * x);
        assert_eq!(seq, par);
        let f = |x: &i64| (x % 37 == 36).then_some(*x);
        assert_eq!(
            Exec::Sequential.find_map_first(&xs, f),
            Exec::Parallel.find_map_first(&xs, f)
        );
        assert_eq!(Exec::Parallel.find_map_first(&xs, f), Some(36));
    }

    #[test]
    fn pairs() {
        assert_eq!(index_pairs(3), vec![(0, 1), (0, 2), (1, 2)]);
        assert!(index_pairs(1).is_empty());
    }
}
