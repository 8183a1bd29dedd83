//! Sequential or data-parallel execution of independent work items.
//!
//! Without the `parallel` feature every mode runs sequentially. Results are
//! always returned in input order, so output never depends on scheduling.

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
    /// `items.map(f)`, in order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// `items.flat_map(f)`, in order.
    pub fn flat_map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Vec<R> + Sync + Send,
    {
        self.map(items, f).into_iter().flatten().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_and_keep_order() {
        let items: Vec<u32> = (0..1000).collect();
        let seq = Execution::Sequential.map(&items, |x| x * 3);
        let par = Execution::Parallel.map(&items, |x| x * 3);
        assert_eq!(seq, par);
        assert_eq!(seq[10], 30);
        let flat = Execution::Parallel.flat_map(&items[..3], |&x| vec![x; x as usize]);
        assert_eq!(flat, vec![1, 2, 2]);
    }
}
