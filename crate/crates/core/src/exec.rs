//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the maps below fan out over rayon; without it,
//! or inside [`with_mode`]`(Mode::Sequential, ..)`, they run on the calling
//! thread. Results are always returned in index order so downstream sums are
//! bit-identical regardless of scheduling.

use std::cell::Cell;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    Parallel,
}

thread_local! {
    static FORCE_SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

/// Mode the maps will use on this thread.
pub fn current_mode() -> Mode {
    if cfg!(feature = "parallel") && !FORCE_SEQUENTIAL.with(Cell::get) {
        Mode::Parallel
    } else {
        Mode::Sequential
    }
}

/// Run `f` with the given mode on the current thread. `Mode::Parallel` is a
/// no-op request when the crate is built without the `parallel` feature.
pub fn with_mode<R>(mode: Mode, f: impl FnOnce() -> R) -> R {
    let prev = FORCE_SEQUENTIAL.with(|c| c.replace(mode == Mode::Sequential));
    struct Restore(bool);
    impl Drop for Restore {
        fn drop(&mut self) {
            FORCE_SEQUENTIAL.with(|c| c.set(self.0));
        }
    }
    let _restore = Restore(prev);
    f()
}

/// `(0..n).map(f).collect()`, possibly in parallel.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if current_mode() == Mode::Parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// `items.iter().map(f).collect()`, possibly in parallel.
pub fn map_slice<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if current_mode() == Mode::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maps_preserve_order() {
        let par = map_range(1000, |i| i * i);
        let seq = with_mode(Mode::Sequential, || map_range(1000, |i| i * i));
        assert_eq!(par, seq);
        assert_eq!(par[999], 999 * 999);
    }

    #[test]
    fn with_mode_restores() {
        let before = current_mode();
        with_mode(Mode::Sequential, || {
            assert_eq!(current_mode(), Mode::Sequential);
        });
        assert_eq!(current_mode(), before);
    }
}
