//! Data-parallel helpers with a sequential arm.
//!
//! Every helper returns results in input order, so switching between the two
//! arms never changes an answer.

/// Execution strategy for embarrassingly parallel loops.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    /// Rayon when the `parallel` feature is on, sequential otherwise.
    #[default]
    Parallel,
}

impl Exec {
    pub fn map_range<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }

    pub fn map_slice<A, T, F>(self, items: &[A], f: F) -> Vec<T>
    where
        A: Sync,
        T: Send,
        F: Fn(&A) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// Lowest index whose result is `Some`, evaluating in chunks so that the
    /// parallel arm can stop early without losing determinism.
    pub fn find_first<T, F>(self, n: usize, f: F) -> Option<(usize, T)>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        let chunk = match self {
            Exec::Sequential => 1,
            Exec::Parallel => 64,
        };
        let mut start = 0;
        while start < n {
            let end = (start + chunk).min(n);
            let found = self.map_range(end - start, |k| f(start + k));
            if let Some((k, v)) = found.into_iter().enumerate().find_map(|(k, v)| v.map(|v| (k, v))) {
                return Some((start + k, v));
            }
            start = end;
        }
        None
    }
}
