//! Data-parallel helpers. With the `parallel` feature these dispatch to rayon unless
//! sequential mode has been requested at runtime; otherwise they run in order.

use std::sync::atomic::{AtomicBool, Ordering};

static FORCE_SEQUENTIAL: AtomicBool = AtomicBool::new(false);

/// Force sequential execution even when built with `parallel`.
pub fn set_sequential(on: bool) {
    FORCE_SEQUENTIAL.store(on, Ordering::SeqCst);
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && !FORCE_SEQUENTIAL.load(Ordering::SeqCst)
}

/// Order-preserving map.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Order-preserving flat map.
pub fn flat_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Vec<R> + Sync + Send,
{
    map(items, f).into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn same_results_both_modes() {
        let v: Vec<u64> = (0..1000).collect();
        let a = super::map(&v, |x| x * x);
        super::set_sequential(true);
        let b = super::map(&v, |x| x * x);
        super::set_sequential(false);
        assert_eq!(a, b);
        assert_eq!(super::flat_map(&v[..3], |&x| vec![x; x as usize]), vec![1, 2, 2]);
    }
}
