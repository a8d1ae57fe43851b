//! Memoization tables keyed by identifier tuples, and a memoizing fixpoint.
//!
//! Tables are meant to live as long as the pool whose identifiers they hold:
//! results computed during one top-level operation are reused by the next.
//! [`MemoTable::clear`] drops the entries when a different lifetime is
//! wanted.

use std::collections::HashMap;
use std::hash::BuildHasherDefault;

use rustc_hash::FxHasher;
use serde::Serialize;
use thiserror::Error;

use crate::intern::UniqueId;

/// Maximum number of components in a [`MemoKey`].
pub const MAX_KEY_ARITY: usize = 4;

/// Default bound on nested memoized calls.
pub const DEFAULT_DEPTH_LIMIT: usize = 100_000;

const INITIAL_CAPACITY: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MemoError {
    #[error("memo key has arity {found}, table expects {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("memo key rebound to a different value; memoized function is not pure")]
    Rebind,
    #[error("recursion depth exceeded the limit of {limit}")]
    DepthExceeded { limit: usize },
}

/// Tuple of up to four identifiers or small scalars.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MemoKey {
    arity: u8,
    parts: [u64; MAX_KEY_ARITY],
}

impl MemoKey {
    /// Builds a key from a slice of components. Panics on more than four.
    pub fn new(parts: &[u64]) -> Self {
        assert!(parts.len() <= MAX_KEY_ARITY, "memo keys hold at most four components");
        let mut buf = [0; MAX_KEY_ARITY];
        buf[..parts.len()].copy_from_slice(parts);
        MemoKey {
            arity: parts.len() as u8,
            parts: buf,
        }
    }

    pub fn unary(a: impl Into<u64>) -> Self {
        MemoKey::new(&[a.into()])
    }

    pub fn pair(a: impl Into<u64>, b: impl Into<u64>) -> Self {
        MemoKey::new(&[a.into(), b.into()])
    }

    pub fn triple(a: impl Into<u64>, b: impl Into<u64>, c: impl Into<u64>) -> Self {
        MemoKey::new(&[a.into(), b.into(), c.into()])
    }

    /// Pair key for a commutative operation: stored as `(min, max)`.
    pub fn commutative_pair(a: impl Into<u64>, b: impl Into<u64>) -> Self {
        let (a, b) = (a.into(), b.into());
        MemoKey::pair(a.min(b), a.max(b))
    }

    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts[..self.arity()]
    }
}

impl From<u64> for MemoKey {
    fn from(a: u64) -> Self {
        MemoKey::unary(a)
    }
}

impl From<UniqueId> for MemoKey {
    fn from(a: UniqueId) -> Self {
        MemoKey::unary(a)
    }
}

impl From<(u64, u64)> for MemoKey {
    fn from((a, b): (u64, u64)) -> Self {
        MemoKey::pair(a, b)
    }
}

impl From<(u64, u64, u64)> for MemoKey {
    fn from((a, b, c): (u64, u64, u64)) -> Self {
        MemoKey::triple(a, b, c)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MemoStats {
    pub hits: u64,
    pub misses: u64,
    pub body_evaluations: u64,
}

/// Map from fixed-arity keys to results, with hit/miss accounting.
#[derive(Clone, Debug)]
pub struct MemoTable<V> {
    arity: usize,
    entries: HashMap<MemoKey, V, BuildHasherDefault<FxHasher>>,
    enabled: bool,
    stats: MemoStats,
}

impl<V> MemoTable<V> {
    pub fn new(arity: usize) -> Self {
        assert!(
            (1..=MAX_KEY_ARITY).contains(&arity),
            "memo table arity must be between 1 and 4"
        );
        MemoTable {
            arity,
            entries: HashMap::with_capacity_and_hasher(INITIAL_CAPACITY, Default::default()),
            enabled: true,
            stats: MemoStats::default(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn stats(&self) -> MemoStats {
        self.stats
    }

    pub fn is_enabled(&self) -> bool {
        self.enabled
    }

    /// A disabled table forgets everything: lookups always miss and stores
    /// are dropped. Used to compare memoized and plain evaluation.
    pub fn set_enabled(&mut self, enabled: bool) {
        self.enabled = enabled;
        if !enabled {
            self.entries.clear();
        }
    }

    /// Drops all entries. Counters are kept.
    pub fn clear(&mut self) {
        self.entries.clear();
    }

    /// Records that the function body ran for a key that missed.
    #[inline]
    pub fn note_evaluation(&mut self) {
        self.stats.body_evaluations += 1;
    }

    fn check_arity(&self, key: &MemoKey) -> Result<(), MemoError> {
        if key.arity() == self.arity {
            Ok(())
        } else {
            Err(MemoError::ArityMismatch {
                expected: self.arity,
                found: key.arity(),
            })
        }
    }
}

impl<V: Clone + PartialEq> MemoTable<V> {
    pub fn get(&mut self, key: &MemoKey) -> Result<Option<V>, MemoError> {
        self.check_arity(key)?;
        let found = if self.enabled {
            self.entries.get(key).cloned()
        } else {
            None
        };
        match found {
            Some(_) => self.stats.hits += 1,
            None => self.stats.misses += 1,
        }
        Ok(found)
    }

    /// Stores `value` under `key`. Storing the same value twice is fine;
    /// storing a different one is a [`MemoError::Rebind`].
    pub fn put(&mut self, key: MemoKey, value: V) -> Result<(), MemoError> {
        self.check_arity(&key)?;
        if !self.enabled {
            return Ok(());
        }
        match self.entries.get(&key) {
            Some(old) if *old != value => Err(MemoError::Rebind),
            Some(_) => Ok(()),
            None => {
                self.entries.insert(key, value);
                Ok(())
            }
        }
    }
}

/// Counts nesting of memoized recursive calls and fails past a limit.
#[derive(Clone, Copy, Debug)]
pub struct DepthGuard {
    depth: usize,
    limit: usize,
}

impl Default for DepthGuard {
    fn default() -> Self {
        DepthGuard::new(DEFAULT_DEPTH_LIMIT)
    }
}

impl DepthGuard {
    pub fn new(limit: usize) -> Self {
        DepthGuard { depth: 0, limit }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    #[inline]
    pub fn enter(&mut self) -> Result<(), MemoError> {
        if self.depth >= self.limit {
            return Err(MemoError::DepthExceeded { limit: self.limit });
        }
        self.depth += 1;
        Ok(())
    }

    #[inline]
    pub fn exit(&mut self) {
        self.depth = self.depth.saturating_sub(1);
    }

    /// Forgets the current depth, after an aborted computation.
    pub fn reset(&mut self) {
        self.depth = 0;
    }
}

/// The recursive handle passed to a memoized body.
pub type Recurse<'a, K, V> = dyn FnMut(K) -> Result<V, MemoError> + 'a;

/// Memoized fixpoint of `body`, built by [`memo_fix`].
pub struct MemoFix<K, V, F> {
    table: MemoTable<V>,
    guard: DepthGuard,
    body: F,
    _key: std::marker::PhantomData<fn(K)>,
}

/// Ties the knot of `body` through `table`.
///
/// `body` receives a handle for its recursive calls and the key to compute.
/// Every recursive call goes through the table, so the body runs at most
/// once per distinct key over the table's lifetime.
///
/// ```
/// use hashcons::memo::{memo_fix, MemoTable};
///
/// let mut exp = memo_fix(MemoTable::new(1), |rec, n: u64| {
///     Ok(if n == 0 { 1u64 } else { rec(n - 1)? + rec(n - 1)? })
/// });
/// assert_eq!(exp.call(20).unwrap(), 1 << 20);
/// assert_eq!(exp.stats().body_evaluations, 21);
/// ```
pub fn memo_fix<K, V, F>(table: MemoTable<V>, body: F) -> MemoFix<K, V, F>
where
    K: Copy + Into<MemoKey>,
    V: Clone + PartialEq,
    F: Fn(&mut Recurse<'_, K, V>, K) -> Result<V, MemoError>,
{
    MemoFix {
        table,
        guard: DepthGuard::default(),
        body,
        _key: std::marker::PhantomData,
    }
}

impl<K, V, F> MemoFix<K, V, F>
where
    K: Copy + Into<MemoKey>,
    V: Clone + PartialEq,
    F: Fn(&mut Recurse<'_, K, V>, K) -> Result<V, MemoError>,
{
    pub fn with_depth_limit(mut self, limit: usize) -> Self {
        self.guard = DepthGuard::new(limit);
        self
    }

    pub fn call(&mut self, key: K) -> Result<V, MemoError> {
        let out = run(&mut self.table, &mut self.guard, &self.body, key);
        if out.is_err() {
            self.guard.reset();
        }
        out
    }

    pub fn stats(&self) -> MemoStats {
        self.table.stats()
    }

    pub fn table(&self) -> &MemoTable<V> {
        &self.table
    }

    pub fn into_table(self) -> MemoTable<V> {
        self.table
    }
}

fn run<K, V, F>(
    table: &mut MemoTable<V>,
    guard: &mut DepthGuard,
    body: &F,
    key: K,
) -> Result<V, MemoError>
where
    K: Copy + Into<MemoKey>,
    V: Clone + PartialEq,
    F: Fn(&mut Recurse<'_, K, V>, K) -> Result<V, MemoError>,
{
    let mk: MemoKey = key.into();
    if let Some(v) = table.get(&mk)? {
        return Ok(v);
    }
    guard.enter()?;
    table.note_evaluation();
    let value = body(&mut |k| run(table, guard, body, k), key);
    guard.exit();
    let value = value?;
    table.put(mk, value.clone())?;
    Ok(value)
}
