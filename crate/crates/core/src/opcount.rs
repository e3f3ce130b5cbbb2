//! Thread-local tally of coefficient operations.
//!
//! Every field operation counts one; bulk kernels that bypass the
//! element-by-element interface (the transform-based convolutions) add
//! their exact operation counts in one shot. The tally is the
//! machine-independent cost measure used by the benchmark harness.

use std::cell::Cell;

thread_local! {
    static OPS: Cell<u64> = const { Cell::new(0) };
}

#[inline]
pub fn tick() {
    OPS.with(|c| c.set(c.get().wrapping_add(1)));
}

#[inline]
pub fn add(n: u64) {
    OPS.with(|c| c.set(c.get().wrapping_add(n)));
}

pub fn reset() {
    OPS.with(|c| c.set(0));
}

pub fn current() -> u64 {
    OPS.with(|c| c.get())
}

/// Runs `f` and returns its result together with the number of
/// coefficient operations it performed.
pub fn measure<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let before = current();
    let out = f();
    (out, current().wrapping_sub(before))
}
