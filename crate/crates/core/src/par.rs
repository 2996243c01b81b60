//! Order-preserving map over independent work items. Uses rayon when the
//! `parallel` feature is on and a plain loop otherwise.

/// How a batch of independent items is processed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_with(Execution::default(), items, f)
}

/// Like [`map`] with an explicit strategy. `Parallel` degrades to a loop
/// when the crate is built without the `parallel` feature.
pub fn map_with<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_strategies_keep_order() {
        let xs: Vec<u32> = (0..100).collect();
        let a = map_with(Execution::Sequential, &xs, |x| x * 2);
        let b = map_with(Execution::Parallel, &xs, |x| x * 2);
        assert_eq!(a, b);
        assert_eq!(a[99], 198);
    }
}
