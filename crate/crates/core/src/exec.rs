//! Choice between the rayon and sequential execution paths.
//!
//! Every parallel loop in the crate goes through [`Executor::map`], which
//! preserves input order, so results never depend on the path taken.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Executor {
    Sequential,
    /// Rayon's global pool; identical to `Sequential` without the
    /// `parallel` feature.
    #[default]
    Parallel,
}

impl Executor {
    /// Whether this executor actually runs on more than one thread.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Executor::Parallel
    }

    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Executor::Parallel {
            return items.into_par_iter().map(f).collect();
        }
        items.into_iter().map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_paths_preserve_order() {
        let input: Vec<u64> = (0..10_000).collect();
        let a = Executor::Sequential.map(input.clone(), |x| x * x);
        let b = Executor::Parallel.map(input, |x| x * x);
        assert_eq!(a, b);
    }
}
