//! Generic hash-consing pool.
//!
//! A [`Pool`] hands out a [`UniqueId`] for every structurally distinct
//! payload it is asked to intern. Payloads refer to their children by
//! identifier, so structural equality of two payloads is a shallow
//! comparison and, once interned, identifier equality decides structural
//! equality of whole graphs.
//!
//! Identifiers are issued from a counter and never recycled: the pool keeps
//! every node alive for as long as it exists. Children are always interned
//! before their parents, so every child identifier is strictly smaller than
//! the identifier of the node that refers to it.

use std::collections::HashMap;
use std::fmt;
use std::hash::{BuildHasherDefault, Hash, Hasher};

use rustc_hash::FxHasher;
use serde::Serialize;
use thiserror::Error;

type FxBuild = BuildHasherDefault<FxHasher>;

/// Name of one interned node, meaningful only to the pool that issued it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct UniqueId(u64);

impl UniqueId {
    pub const fn new(raw: u64) -> Self {
        UniqueId(raw)
    }

    pub const fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub(crate) fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for UniqueId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl From<UniqueId> for u64 {
    fn from(id: UniqueId) -> u64 {
        id.0
    }
}

/// A value that can be stored in a [`Pool`].
///
/// Equality and hashing must only look at the node's own fields and the
/// identifiers of its children, never at the children's structure.
pub trait Node: Clone + Eq + Hash {
    /// Calls `f` on every child identifier, in order.
    fn for_each_child(&self, f: impl FnMut(UniqueId));
}

/// A general-purpose payload: a constructor tag, child identifiers and
/// scalar attributes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Payload {
    pub tag: u8,
    pub children: Vec<UniqueId>,
    pub attrs: Vec<u64>,
}

impl Payload {
    pub fn new(tag: u8, children: impl Into<Vec<UniqueId>>, attrs: impl Into<Vec<u64>>) -> Self {
        Payload {
            tag,
            children: children.into(),
            attrs: attrs.into(),
        }
    }

    pub fn leaf(tag: u8) -> Self {
        Payload::new(tag, Vec::new(), Vec::new())
    }
}

impl Node for Payload {
    fn for_each_child(&self, mut f: impl FnMut(UniqueId)) {
        self.children.iter().copied().for_each(&mut f);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InternError {
    #[error("child identifier {child} is not issued by this pool (next is {next})")]
    InvalidChild { child: UniqueId, next: UniqueId },
    #[error("unknown identifier {id} (next is {next})")]
    UnknownId { id: UniqueId, next: UniqueId },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PoolStats {
    pub node_count: u64,
    pub intern_hits: u64,
    pub intern_misses: u64,
}

/// Shallow hash of a payload.
///
/// Deterministic across runs and processes. Since children are stored as
/// identifiers, the cost does not depend on the size of the graph below.
pub fn hash_payload<N: Hash + ?Sized>(payload: &N) -> u64 {
    let mut h = FxHasher::default();
    payload.hash(&mut h);
    h.finish()
}

/// Bidirectional payload/identifier table with a fresh-identifier counter.
#[derive(Clone)]
pub struct Pool<N: Node> {
    fwd: HashMap<N, UniqueId, FxBuild>,
    back: Vec<N>,
    sharing: bool,
    hits: u64,
    misses: u64,
}

impl<N: Node> Default for Pool<N> {
    fn default() -> Self {
        Pool::new()
    }
}

impl<N: Node + fmt::Debug> fmt::Debug for Pool<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Pool")
            .field("next", &self.next())
            .field("sharing", &self.sharing)
            .finish_non_exhaustive()
    }
}

impl<N: Node> Pool<N> {
    pub fn new() -> Self {
        Pool {
            fwd: HashMap::with_capacity_and_hasher(16, FxBuild::default()),
            back: Vec::with_capacity(16),
            sharing: true,
            hits: 0,
            misses: 0,
        }
    }

    /// Creates a pool whose first identifiers are reserved for `nodes`, in
    /// order. Preallocated nodes must not have children.
    pub fn with_preallocated(nodes: impl IntoIterator<Item = N>) -> Self {
        let mut pool = Pool::new();
        for node in nodes {
            let mut has_child = false;
            node.for_each_child(|_| has_child = true);
            assert!(!has_child, "preallocated nodes must be leaves");
            let id = pool.next();
            let previous = pool.fwd.insert(node.clone(), id);
            assert!(previous.is_none(), "duplicate preallocated node");
            pool.back.push(node);
        }
        pool
    }

    /// A pool that never looks payloads up and allocates a fresh identifier
    /// on every [`intern`](Pool::intern) call.
    ///
    /// This is the "plain allocation" baseline used when measuring how much
    /// work sharing saves. Maximal sharing does not hold for such a pool.
    pub fn without_sharing(preallocated: impl IntoIterator<Item = N>) -> Self {
        let mut pool = Pool::with_preallocated(preallocated);
        pool.sharing = false;
        pool
    }

    pub fn is_sharing(&self) -> bool {
        self.sharing
    }

    /// The identifier the next fresh node will receive.
    #[inline]
    pub fn next(&self) -> UniqueId {
        UniqueId(self.back.len() as u64)
    }

    pub fn len(&self) -> usize {
        self.back.len()
    }

    pub fn is_empty(&self) -> bool {
        self.back.is_empty()
    }

    #[inline]
    pub fn contains(&self, id: UniqueId) -> bool {
        id.index() < self.back.len()
    }

    /// Returns the identifier of `payload`, allocating one if no structurally
    /// equal payload has been interned yet.
    pub fn intern(&mut self, payload: N) -> Result<UniqueId, InternError> {
        let next = self.next();
        let mut invalid = None;
        payload.for_each_child(|c| {
            if c >= next && invalid.is_none() {
                invalid = Some(c);
            }
        });
        if let Some(child) = invalid {
            return Err(InternError::InvalidChild { child, next });
        }
        if !self.sharing {
            self.misses += 1;
            self.back.push(payload);
            return Ok(next);
        }
        match self.fwd.get(&payload) {
            Some(&id) => {
                self.hits += 1;
                Ok(id)
            }
            None => {
                debug_assert!(next.0.checked_add(1).is_some(), "identifier space exhausted");
                self.misses += 1;
                self.back.push(payload.clone());
                self.fwd.insert(payload, next);
                Ok(next)
            }
        }
    }

    pub fn resolve(&self, id: UniqueId) -> Result<&N, InternError> {
        self.back.get(id.index()).ok_or(InternError::UnknownId {
            id,
            next: self.next(),
        })
    }

    /// Looks up a payload without interning it.
    pub fn find(&self, payload: &N) -> Option<UniqueId> {
        self.fwd.get(payload).copied()
    }

    /// Unchecked resolve for identifiers this pool is known to have issued.
    #[inline]
    pub(crate) fn node(&self, id: UniqueId) -> &N {
        &self.back[id.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (UniqueId, &N)> + '_ {
        self.back
            .iter()
            .enumerate()
            .map(|(i, n)| (UniqueId(i as u64), n))
    }

    pub fn stats(&self) -> PoolStats {
        PoolStats {
            node_count: self.back.len() as u64,
            intern_hits: self.hits,
            intern_misses: self.misses,
        }
    }

    /// Every pair of distinct identifiers whose payloads are structurally
    /// equal, smaller identifier first.
    ///
    /// Works from the identifier table alone, independently of the lookup
    /// map, so it can be used to audit it.
    pub fn scan_duplicates(&self) -> Vec<(UniqueId, UniqueId)> {
        let mut seen: HashMap<&N, Vec<UniqueId>, FxBuild> = HashMap::default();
        for (id, node) in self.iter() {
            seen.entry(node).or_default().push(id);
        }
        let mut out = Vec::new();
        for ids in seen.values().filter(|ids| ids.len() > 1) {
            for (i, &a) in ids.iter().enumerate() {
                for &b in &ids[i + 1..] {
                    out.push((a, b));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Checks that the lookup map and the identifier table are mutually
    /// inverse and that children precede their parents.
    pub fn check_well_formed(&self) -> Result<(), String> {
        if self.sharing && self.fwd.len() != self.back.len() {
            return Err(format!(
                "lookup map holds {} entries, table holds {}",
                self.fwd.len(),
                self.back.len()
            ));
        }
        for (payload, &id) in &self.fwd {
            match self.back.get(id.index()) {
                Some(stored) if stored == payload => {}
                _ => return Err(format!("lookup entry for {id} does not match the table")),
            }
        }
        for (id, node) in self.iter() {
            if self.sharing && self.fwd.get(node) != Some(&id) {
                return Err(format!("node {id} missing from the lookup map"));
            }
            let mut bad = None;
            node.for_each_child(|c| {
                if c >= id {
                    bad = Some(c);
                }
            });
            if let Some(c) = bad {
                return Err(format!("node {id} refers to child {c} that is not older"));
            }
        }
        Ok(())
    }

    /// Appends `payload` without consulting the lookup map. Breaks maximal
    /// sharing on purpose; only meant for exercising [`Pool::scan_duplicates`].
    #[doc(hidden)]
    pub fn push_unshared_for_testing(&mut self, payload: N) -> UniqueId {
        let id = self.next();
        self.back.push(payload);
        id
    }
}
