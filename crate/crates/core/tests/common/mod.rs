//! Shared helpers for the integration tests: independent oracles, random
//! generators and invariant checks.
#![allow(dead_code)]

pub mod gen;
pub mod invariants;
pub mod lambda_tree;
pub mod truth;

use std::thread;

/// Runs `f` on a thread with a large stack; deep diagrams and λ-terms recurse
/// far past the default test-thread stack.
pub fn with_big_stack<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> T {
    thread::Builder::new()
        .stack_size(512 << 20)
        .spawn(f)
        .unwrap()
        .join()
        .unwrap_or_else(|e| std::panic::resume_unwind(e))
}
