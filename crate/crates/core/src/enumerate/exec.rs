/// How a sweep distributes independent domain points.
///
/// Without the `parallel` feature both variants run on the calling thread.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Rayon work stealing; `threads` caps the pool size.
    #[default]
    Parallel,
    ParallelWith {
        threads: usize,
    },
}

impl Execution {
    /// Reads an optional thread cap from the given environment variable.
    pub fn from_env(var: &str) -> Execution {
        match std::env::var(var)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            Some(0) | None => Execution::Parallel,
            Some(1) => Execution::Sequential,
            Some(threads) => Execution::ParallelWith { threads },
        }
    }

    /// Maps every item and folds the results with an associative,
    /// order-insensitive `merge`.
    pub(crate) fn map_reduce<T, R, M, F>(
        self,
        items: &[T],
        identity: impl Fn() -> R + Sync + Send,
        map: M,
        merge: F,
    ) -> R
    where
        T: Sync,
        R: Send,
        M: Fn(&T) -> R + Sync + Send,
        F: Fn(R, R) -> R + Sync + Send,
    {
        match self {
            Execution::Sequential => sequential(items, identity, map, merge),
            #[cfg(feature = "parallel")]
            Execution::Parallel => parallel(items, identity, map, merge),
            #[cfg(feature = "parallel")]
            Execution::ParallelWith { threads } => {
                match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                    Ok(pool) => pool.install(|| parallel(items, identity, map, merge)),
                    Err(_) => sequential(items, identity, map, merge),
                }
            }
            #[cfg(not(feature = "parallel"))]
            Execution::Parallel | Execution::ParallelWith { .. } => {
                sequential(items, identity, map, merge)
            }
        }
    }
}

fn sequential<T, R>(
    items: &[T],
    identity: impl Fn() -> R,
    map: impl Fn(&T) -> R,
    merge: impl Fn(R, R) -> R,
) -> R {
    items
        .iter()
        .fold(identity(), |acc, item| merge(acc, map(item)))
}

#[cfg(feature = "parallel")]
fn parallel<T, R, M, F>(items: &[T], identity: impl Fn() -> R + Sync + Send, map: M, merge: F) -> R
where
    T: Sync,
    R: Send,
    M: Fn(&T) -> R + Sync + Send,
    F: Fn(R, R) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(map).reduce(identity, merge)
}
