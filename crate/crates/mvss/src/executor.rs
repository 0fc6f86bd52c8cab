//! Scoped-thread executor with index-ordered results.

use std::thread;

use mvss_core::parallel::Executor;
use mvss_core::Error;

/// Runs tasks on `workers` OS threads. Task `i` goes to worker
/// `i % workers`; results are merged back in index order, so output never
/// depends on scheduling.
#[derive(Debug, Clone, Copy)]
pub struct Threaded {
    workers: usize,
}

impl Threaded {
    pub fn new(workers: usize) -> Result<Self, Error> {
        if workers == 0 {
            return Err(Error::ZeroWorkers);
        }
        Ok(Threaded { workers })
    }

    pub fn workers(&self) -> usize {
        self.workers
    }
}

impl Executor for Threaded {
    fn map<R, F>(&self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync,
    {
        if self.workers == 1 || n <= 1 {
            return (0..n).map(f).collect();
        }
        let w = self.workers.min(n);
        let f = &f;
        let parts: Vec<Vec<(usize, R)>> = thread::scope(|s| {
            let handles: Vec<_> = (0..w)
                .map(|k| s.spawn(move || (k..n).step_by(w).map(|i| (i, f(i))).collect::<Vec<_>>()))
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        let mut slots: Vec<Option<R>> = (0..n).map(|_| None).collect();
        for (i, r) in parts.into_iter().flatten() {
            slots[i] = Some(r);
        }
        slots.into_iter().map(|r| r.expect("every index computed")).collect()
    }
}
