//! Deterministic bulk-synchronous parallel map.
//!
//! The index range is split into one contiguous chunk per worker; each worker
//! computes its chunk independently and the results are concatenated in
//! range order. Because every element is a pure function of its index, the
//! output is identical for any worker count.

/// Applies `f` to every index in `0..len` using up to `workers` threads.
pub fn par_map<T, F>(len: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = workers.max(1).min(len.max(1));
    if workers == 1 || len < 2 {
        return (0..len).map(f).collect();
    }
    let chunk = len.div_ceil(workers);
    let mut out = Vec::with_capacity(len);
    std::thread::scope(|scope| {
        let f = &f;
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let lo = w * chunk;
                let hi = ((w + 1) * chunk).min(len);
                scope.spawn(move || (lo..hi).map(f).collect::<Vec<T>>())
            })
            .collect();
        for h in handles {
            out.extend(h.join().expect("worker panicked"));
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_sequential_for_any_worker_count() {
        let expect: Vec<usize> = (0..1000).map(|i| i * i).collect();
        for workers in [1, 2, 3, 8, 64] {
            assert_eq!(par_map(1000, workers, |i| i * i), expect);
        }
    }

    #[test]
    fn empty_and_tiny_ranges() {
        assert_eq!(par_map(0, 4, |i| i), Vec::<usize>::new());
        assert_eq!(par_map(1, 4, |i| i), vec![0]);
    }
}
