//! Data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature the default mode runs on rayon's global pool;
//! without it every call is sequential. Results always keep input order.

use std::sync::atomic::{AtomicU8, Ordering};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    Parallel,
}

const UNSET: u8 = 0;
const SEQ: u8 = 1;
const PAR: u8 = 2;

static MODE: AtomicU8 = AtomicU8::new(UNSET);

/// Sets the process-wide mode. `Parallel` degrades to sequential when the
/// crate is built without the `parallel` feature.
pub fn set_mode(mode: ExecMode) {
    let v = match mode {
        ExecMode::Sequential => SEQ,
        ExecMode::Parallel => PAR,
    };
    MODE.store(v, Ordering::Relaxed);
}

pub fn mode() -> ExecMode {
    match MODE.load(Ordering::Relaxed) {
        SEQ => ExecMode::Sequential,
        PAR if cfg!(feature = "parallel") => ExecMode::Parallel,
        UNSET if cfg!(feature = "parallel") => ExecMode::Parallel,
        _ => ExecMode::Sequential,
    }
}

/// Order-preserving map over a slice.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if mode() == ExecMode::Parallel {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
    }
    items.iter().map(f).collect()
}

/// Order-preserving fallible map; the first error in input order wins.
pub fn try_map<T, R, E, F>(items: &[T], f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    map(items, f).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let xs: Vec<u64> = (0..1000).collect();
        let ys = map(&xs, |x| x * x);
        assert!(ys.iter().enumerate().all(|(i, &y)| y == (i * i) as u64));
    }
}
