//! Reduced ordered binary decision diagrams on top of a hash-consing pool.
//!
//! Leaves are preallocated at identifiers 0 (`FALSE`) and 1 (`TRUE`); every
//! other identifier names a decision node `(low, var, high)`. Variables
//! strictly increase from the root towards the leaves, and no node has
//! `low == high`, so two diagrams denote the same function exactly when
//! they have the same identifier.
//!
//! All binary operations go through one melding combinator, parameterized
//! by the leaf rules of the operation and backed by its own memo table.
//! Tables persist across calls for the lifetime of the manager.

use std::collections::BTreeMap;
use std::fmt;

use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::intern::{InternError, Node, Pool, PoolStats, UniqueId};
use crate::memo::{DepthGuard, MemoError, MemoKey, MemoStats, MemoTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarIndex(pub u32);

impl fmt::Display for VarIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl From<u32> for VarIndex {
    fn from(v: u32) -> Self {
        VarIndex(v)
    }
}

/// Handle to a diagram owned by a [`BddManager`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BddRef(UniqueId);

impl BddRef {
    pub const FALSE: BddRef = BddRef(UniqueId::new(0));
    pub const TRUE: BddRef = BddRef(UniqueId::new(1));

    pub fn id(self) -> UniqueId {
        self.0
    }

    pub fn is_leaf(self) -> bool {
        self.0.get() < 2
    }

    pub fn constant(value: bool) -> BddRef {
        if value {
            BddRef::TRUE
        } else {
            BddRef::FALSE
        }
    }
}

impl From<BddRef> for u64 {
    fn from(r: BddRef) -> u64 {
        r.0.get()
    }
}

impl fmt::Display for BddRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BddRef::FALSE => f.write_str("F"),
            BddRef::TRUE => f.write_str("T"),
            BddRef(id) => write!(f, "N{}", id.get()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BddNode {
    pub low: BddRef,
    pub var: VarIndex,
    pub high: BddRef,
}

/// What the pool stores under each identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BddPayload {
    False,
    True,
    Decision(BddNode),
}

impl Node for BddPayload {
    fn for_each_child(&self, mut f: impl FnMut(UniqueId)) {
        if let BddPayload::Decision(n) = self {
            f(n.low.0);
            f(n.high.0);
        }
    }
}

/// Partial assignment of truth values to variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Env(BTreeMap<VarIndex, bool>);

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    /// Assigns variables `1..=nvars` from the low bits of `bits`: variable
    /// `i` gets bit `i - 1`.
    pub fn from_bits(nvars: u32, bits: u64) -> Self {
        Env((1..=nvars).map(|i| (VarIndex(i), bits >> (i - 1) & 1 == 1)).collect())
    }

    pub fn set(&mut self, var: impl Into<VarIndex>, value: bool) -> &mut Self {
        self.0.insert(var.into(), value);
        self
    }

    pub fn get(&self, var: VarIndex) -> Option<bool> {
        self.0.get(&var).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarIndex, bool)> + '_ {
        self.0.iter().map(|(&v, &b)| (v, b))
    }
}

impl<V: Into<VarIndex>> FromIterator<(V, bool)> for Env {
    fn from_iter<I: IntoIterator<Item = (V, bool)>>(iter: I) -> Self {
        Env(iter.into_iter().map(|(v, b)| (v.into(), b)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BddError {
    #[error(transparent)]
    Intern(#[from] InternError),
    #[error(transparent)]
    Memo(#[from] MemoError),
    #[error("variable {var} must precede the head variables of both children")]
    IllOrdered { var: VarIndex },
    #[error("variable {0} is traversed but not bound")]
    UnboundVariable(VarIndex),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    And,
    Or,
    Xor,
}

impl BinOp {
    pub const ALL: [BinOp; 3] = [BinOp::And, BinOp::Or, BinOp::Xor];

    pub fn eval(self, a: bool, b: bool) -> bool {
        match self {
            BinOp::And => a && b,
            BinOp::Or => a || b,
            BinOp::Xor => a != b,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BinOp::And => "and",
            BinOp::Or => "or",
            BinOp::Xor => "xor",
        }
    }
}

/// Result of a leaf rule: either the final answer, or a request for the
/// complement of an operand.
enum Leaf {
    Done(BddRef),
    Not(BddRef),
}

/// Leaf cases of melding. Every operation is commutative, so only the
/// `leaf ⋄ α` rules are written; `α ⋄ leaf` is obtained by swapping.
fn leaf_rule(op: BinOp, a: BddRef, b: BddRef) -> Option<Leaf> {
    let (leaf, other) = if a.is_leaf() {
        (a, b)
    } else if b.is_leaf() {
        (b, a)
    } else {
        return None;
    };
    Some(match (op, leaf) {
        (BinOp::And, BddRef::FALSE) => Leaf::Done(BddRef::FALSE),
        (BinOp::And, _) => Leaf::Done(other),
        (BinOp::Or, BddRef::TRUE) => Leaf::Done(BddRef::TRUE),
        (BinOp::Or, _) => Leaf::Done(other),
        (BinOp::Xor, BddRef::FALSE) => Leaf::Done(other),
        (BinOp::Xor, _) => Leaf::Not(other),
    })
}

/// Owns the node pool and the operation caches.
pub struct BddManager {
    pool: Pool<BddPayload>,
    m_and: MemoTable<BddRef>,
    m_or: MemoTable<BddRef>,
    m_xor: MemoTable<BddRef>,
    m_not: MemoTable<BddRef>,
    m_ite: MemoTable<BddRef>,
    guard: DepthGuard,
}

impl Default for BddManager {
    fn default() -> Self {
        BddManager::new()
    }
}

impl fmt::Debug for BddManager {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BddManager")
            .field("nodes", &self.pool.len())
            .finish_non_exhaustive()
    }
}

impl BddManager {
    pub fn new() -> Self {
        BddManager {
            pool: Pool::with_preallocated([BddPayload::False, BddPayload::True]),
            m_and: MemoTable::new(2),
            m_or: MemoTable::new(2),
            m_xor: MemoTable::new(2),
            m_not: MemoTable::new(1),
            m_ite: MemoTable::new(3),
            guard: DepthGuard::default(),
        }
    }

    pub fn with_depth_limit(mut self, limit: usize) -> Self {
        self.guard = DepthGuard::new(limit);
        self
    }

    pub fn pool(&self) -> &Pool<BddPayload> {
        &self.pool
    }

    pub fn pool_stats(&self) -> PoolStats {
        self.pool.stats()
    }

    fn table(&mut self, op: BinOp) -> &mut MemoTable<BddRef> {
        match op {
            BinOp::And => &mut self.m_and,
            BinOp::Or => &mut self.m_or,
            BinOp::Xor => &mut self.m_xor,
        }
    }

    pub fn memo_stats(&self) -> BTreeMap<&'static str, MemoStats> {
        BTreeMap::from([
            ("and", self.m_and.stats()),
            ("or", self.m_or.stats()),
            ("xor", self.m_xor.stats()),
            ("not", self.m_not.stats()),
            ("ite", self.m_ite.stats()),
        ])
    }

    pub fn op_stats(&self, op: BinOp) -> MemoStats {
        match op {
            BinOp::And => self.m_and.stats(),
            BinOp::Or => self.m_or.stats(),
            BinOp::Xor => self.m_xor.stats(),
        }
    }

    fn tables_mut(&mut self) -> [&mut MemoTable<BddRef>; 5] {
        [
            &mut self.m_and,
            &mut self.m_or,
            &mut self.m_xor,
            &mut self.m_not,
            &mut self.m_ite,
        ]
    }

    /// Drops every cached operation result.
    pub fn clear_memo(&mut self) {
        self.tables_mut().into_iter().for_each(MemoTable::clear);
    }

    /// Turns all operation caches on or off. Results are identical either
    /// way; only the amount of work changes.
    pub fn set_memoization(&mut self, enabled: bool) {
        self.tables_mut()
            .into_iter()
            .for_each(|t| t.set_enabled(enabled));
    }

    fn check(&self, r: BddRef) -> Result<(), BddError> {
        if self.pool.contains(r.0) {
            Ok(())
        } else {
            Err(InternError::InvalidChild {
                child: r.0,
                next: self.pool.next(),
            }
            .into())
        }
    }

    /// The decision node behind `r`, or `None` for a leaf.
    pub fn node(&self, r: BddRef) -> Option<BddNode> {
        match self.pool.resolve(r.0) {
            Ok(BddPayload::Decision(n)) => Some(*n),
            _ => None,
        }
    }

    #[inline]
    fn decision(&self, r: BddRef) -> BddNode {
        match self.pool.node(r.0) {
            BddPayload::Decision(n) => *n,
            _ => unreachable!("{r} is a leaf"),
        }
    }

    /// Head variable of `r`; `None` stands for the leaves, which sit below
    /// every variable.
    pub fn head_var(&self, r: BddRef) -> Option<VarIndex> {
        self.node(r).map(|n| n.var)
    }

    fn precedes(&self, var: VarIndex, child: BddRef) -> bool {
        self.head_var(child).is_none_or(|w| var < w)
    }

    /// Smart constructor: collapses `low == high` and interns the rest.
    pub fn mk_node(&mut self, low: BddRef, var: VarIndex, high: BddRef) -> Result<BddRef, BddError> {
        self.check(low)?;
        self.check(high)?;
        if low == high {
            return Ok(low);
        }
        if cfg!(debug_assertions) && !(self.precedes(var, low) && self.precedes(var, high)) {
            return Err(BddError::IllOrdered { var });
        }
        let id = self
            .pool
            .intern(BddPayload::Decision(BddNode { low, var, high }))?;
        Ok(BddRef(id))
    }

    /// The diagram of the single variable `var`.
    pub fn var(&mut self, var: impl Into<VarIndex>) -> Result<BddRef, BddError> {
        self.mk_node(BddRef::FALSE, var.into(), BddRef::TRUE)
    }

    pub fn apply2(&mut self, op: BinOp, a: BddRef, b: BddRef) -> Result<BddRef, BddError> {
        self.check(a)?;
        self.check(b)?;
        let out = self.meld(op, a, b);
        if out.is_err() {
            self.guard.reset();
        }
        out
    }

    pub fn and(&mut self, a: BddRef, b: BddRef) -> Result<BddRef, BddError> {
        self.apply2(BinOp::And, a, b)
    }

    pub fn or(&mut self, a: BddRef, b: BddRef) -> Result<BddRef, BddError> {
        self.apply2(BinOp::Or, a, b)
    }

    pub fn xor(&mut self, a: BddRef, b: BddRef) -> Result<BddRef, BddError> {
        self.apply2(BinOp::Xor, a, b)
    }

    fn meld(&mut self, op: BinOp, a: BddRef, b: BddRef) -> Result<BddRef, BddError> {
        match leaf_rule(op, a, b) {
            Some(Leaf::Done(r)) => return Ok(r),
            Some(Leaf::Not(r)) => return self.negate(r),
            None => {}
        }
        let key = MemoKey::commutative_pair(a, b);
        if let Some(r) = self.table(op).get(&key)? {
            return Ok(r);
        }
        self.guard.enter()?;
        self.table(op).note_evaluation();
        let (na, nb) = (self.decision(a), self.decision(b));
        let (var, (al, ah), (bl, bh)) = match na.var.cmp(&nb.var) {
            std::cmp::Ordering::Equal => (na.var, (na.low, na.high), (nb.low, nb.high)),
            std::cmp::Ordering::Less => (na.var, (na.low, na.high), (b, b)),
            std::cmp::Ordering::Greater => (nb.var, (a, a), (nb.low, nb.high)),
        };
        let low = self.meld(op, al, bl)?;
        let high = self.meld(op, ah, bh)?;
        self.guard.exit();
        let r = self.mk_node(low, var, high)?;
        self.table(op).put(key, r)?;
        Ok(r)
    }

    pub fn mk_not(&mut self, a: BddRef) -> Result<BddRef, BddError> {
        self.check(a)?;
        let out = self.negate(a);
        if out.is_err() {
            self.guard.reset();
        }
        out
    }

    fn negate(&mut self, a: BddRef) -> Result<BddRef, BddError> {
        match a {
            BddRef::FALSE => return Ok(BddRef::TRUE),
            BddRef::TRUE => return Ok(BddRef::FALSE),
            _ => {}
        }
        let key = MemoKey::unary(a);
        if let Some(r) = self.m_not.get(&key)? {
            return Ok(r);
        }
        self.guard.enter()?;
        self.m_not.note_evaluation();
        let n = self.decision(a);
        let low = self.negate(n.low)?;
        let high = self.negate(n.high)?;
        self.guard.exit();
        let r = self.mk_node(low, n.var, high)?;
        self.m_not.put(key, r)?;
        Ok(r)
    }

    /// If-then-else by direct three-way Shannon expansion.
    pub fn mk_ite(&mut self, c: BddRef, t: BddRef, e: BddRef) -> Result<BddRef, BddError> {
        self.check(c)?;
        self.check(t)?;
        self.check(e)?;
        let out = self.ite(c, t, e);
        if out.is_err() {
            self.guard.reset();
        }
        out
    }

    fn cofactors(&self, r: BddRef, var: VarIndex) -> (BddRef, BddRef) {
        match self.node(r) {
            Some(n) if n.var == var => (n.low, n.high),
            _ => (r, r),
        }
    }

    fn ite(&mut self, c: BddRef, t: BddRef, e: BddRef) -> Result<BddRef, BddError> {
        match (c, t, e) {
            (BddRef::TRUE, _, _) => return Ok(t),
            (BddRef::FALSE, _, _) => return Ok(e),
            _ if t == e => return Ok(t),
            (_, BddRef::TRUE, BddRef::FALSE) => return Ok(c),
            _ => {}
        }
        let key = MemoKey::triple(c, t, e);
        if let Some(r) = self.m_ite.get(&key)? {
            return Ok(r);
        }
        self.guard.enter()?;
        self.m_ite.note_evaluation();
        let var = [c, t, e]
            .into_iter()
            .filter_map(|r| self.head_var(r))
            .min()
            .expect("condition is not a leaf");
        let (c0, c1) = self.cofactors(c, var);
        let (t0, t1) = self.cofactors(t, var);
        let (e0, e1) = self.cofactors(e, var);
        let low = self.ite(c0, t0, e0)?;
        let high = self.ite(c1, t1, e1)?;
        self.guard.exit();
        let r = self.mk_node(low, var, high)?;
        self.m_ite.put(key, r)?;
        Ok(r)
    }

    /// Follows `env` from `a` down to a leaf.
    pub fn eval(&self, a: BddRef, env: &Env) -> Result<bool, BddError> {
        self.check(a)?;
        let mut cur = a;
        loop {
            match cur {
                BddRef::TRUE => return Ok(true),
                BddRef::FALSE => return Ok(false),
                _ => {
                    let n = self.decision(cur);
                    let value = env.get(n.var).ok_or(BddError::UnboundVariable(n.var))?;
                    cur = if value { n.high } else { n.low };
                }
            }
        }
    }

    /// Sound and complete, by canonicity.
    pub fn is_tautology(&self, a: BddRef) -> bool {
        a == BddRef::TRUE
    }

    /// Number of distinct decision nodes reachable from `a`.
    pub fn node_count(&self, a: BddRef) -> usize {
        let mut seen = FxHashSet::default();
        let mut stack = vec![a];
        while let Some(r) = stack.pop() {
            if r.is_leaf() || !seen.insert(r) {
                continue;
            }
            let n = self.decision(r);
            stack.push(n.low);
            stack.push(n.high);
        }
        seen.len()
    }

    /// Checks the reduced and ordered invariants on every stored node.
    pub fn check_well_formed(&self) -> Result<(), String> {
        self.pool.check_well_formed()?;
        for (id, payload) in self.pool.iter() {
            match (id.get(), payload) {
                (0, BddPayload::False) | (1, BddPayload::True) => {}
                (0 | 1, _) => return Err(format!("leaf slot {id} holds {payload:?}")),
                (_, BddPayload::Decision(n)) => {
                    if n.low == n.high {
                        return Err(format!("node {id} is not reduced"));
                    }
                    if !(self.precedes(n.var, n.low) && self.precedes(n.var, n.high)) {
                        return Err(format!("node {id} is not ordered"));
                    }
                }
                (_, _) => return Err(format!("leaf payload stored at {id}")),
            }
        }
        Ok(())
    }
}
