use stable_ergo_core::montecarlo::PathRunner;

/// Runs path tasks on scoped threads in contiguous index blocks and returns
/// the results in path order, so output does not depend on the thread count.
#[derive(Debug, Clone, Copy)]
pub struct Threaded {
    threads: usize,
}

impl Threaded {
    pub fn new(threads: usize) -> Self {
        Threaded { threads: threads.max(1) }
    }

    /// `STABLE_ERGO_THREADS` if set, else the available parallelism.
    pub fn from_env() -> Self {
        let n = std::env::var("STABLE_ERGO_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        Threaded::new(n)
    }

    pub fn threads(&self) -> usize {
        self.threads
    }
}

impl PathRunner for Threaded {
    fn run<T, F>(&self, n: usize, task: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        let workers = self.threads.min(n.max(1));
        if workers == 1 {
            return (0..n).map(task).collect();
        }
        let block = n.div_ceil(workers);
        let task = &task;
        std::thread::scope(|s| {
            let handles: Vec<_> =
                (0..workers).map(|w| s.spawn(move || (w * block..((w + 1) * block).min(n)).map(task).collect::<Vec<T>>())).collect();
            handles.into_iter().flat_map(|h| h.join().expect("path worker panicked")).collect()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_independent_of_thread_count() {
        let a = Threaded::new(1).run(103, |i| i * i);
        let b = Threaded::new(4).run(103, |i| i * i);
        assert_eq!(a, b);
        assert_eq!(Threaded::new(8).run(3, |i| i), vec![0, 1, 2]);
        assert!(Threaded::new(3).run(0, |i| i).is_empty());
    }
}
