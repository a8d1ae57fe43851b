//! Hash-consed λ-terms with de Bruijn indices.
//!
//! Every term lives in the manager's pool, so structurally equal terms share
//! one identifier and `==` on [`TermRef`] is structural equality. `lift`,
//! `subst`, `hnf` and `nf` are memoized on the identifiers of their
//! arguments, together with their scalar parameters.
//!
//! Reduction is normal order (leftmost-outermost), following Huet's
//! presentation:
//!
//! ```text
//! hnf (Var n)     = Var n
//! hnf (Abs t)     = Abs (hnf t)
//! hnf (App t u)   = match hnf t { Abs w => hnf (subst u 0 w), h => App h u }
//! nf  (App t u)   = match hnf t { Abs w => nf (subst u 0 w),  h => App (nf h) (nf u) }
//! ```

mod church;
mod sort;
mod syntax;

use std::collections::BTreeMap;
use std::fmt;

use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::intern::{InternError, Node, Pool, PoolStats, UniqueId};
use crate::memo::{DepthGuard, MemoError, MemoKey, MemoStats, MemoTable};

pub use church::{church_list, church_add, church_mul, church, decode_church, decode_list};
pub use sort::{quicksort_term, sort_with};

/// Default bound on β-steps before a reduction is abandoned.
pub const DEFAULT_STEP_LIMIT: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermRef(UniqueId);

impl TermRef {
    pub fn id(self) -> UniqueId {
        self.0
    }
}

impl From<TermRef> for u64 {
    fn from(t: TermRef) -> u64 {
        t.0.get()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TermNode {
    Var(u64),
    App(TermRef, TermRef),
    Abs(TermRef),
}

impl Node for TermNode {
    fn for_each_child(&self, mut f: impl FnMut(UniqueId)) {
        match *self {
            TermNode::Var(_) => {}
            TermNode::App(a, b) => {
                f(a.0);
                f(b.0);
            }
            TermNode::Abs(b) => f(b.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LambdaError {
    #[error(transparent)]
    Intern(#[from] InternError),
    #[error(transparent)]
    Memo(#[from] MemoError),
    #[error("reduction exceeded {limit} beta steps")]
    StepLimit { limit: u64 },
    #[error("ill-shaped term: {0}")]
    Shape(String),
}

/// How a [`LambdaManager`] evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LambdaConfig {
    /// Intern terms in a sharing pool. When off, every constructor call
    /// allocates a fresh node.
    pub sharing: bool,
    /// Cache `lift`, `subst`, `hnf` and `nf` results.
    pub memoization: bool,
    pub step_limit: u64,
    pub depth_limit: usize,
}

impl Default for LambdaConfig {
    fn default() -> Self {
        LambdaConfig {
            sharing: true,
            memoization: true,
            step_limit: DEFAULT_STEP_LIMIT,
            depth_limit: crate::memo::DEFAULT_DEPTH_LIMIT,
        }
    }
}

impl LambdaConfig {
    /// Plain evaluation: no sharing, no caches. Every constructed node is a
    /// fresh allocation, as in a naive term representation.
    pub fn plain() -> Self {
        LambdaConfig {
            sharing: false,
            memoization: false,
            ..LambdaConfig::default()
        }
    }

    /// Sharing pool, caches disabled.
    pub fn unmemoized() -> Self {
        LambdaConfig {
            memoization: false,
            ..LambdaConfig::default()
        }
    }
}

pub struct LambdaManager {
    pool: Pool<TermNode>,
    m_lifti: MemoTable<TermRef>,
    m_subst: MemoTable<TermRef>,
    m_hnf: MemoTable<TermRef>,
    m_nf: MemoTable<TermRef>,
    guard: DepthGuard,
    steps: u64,
    budget_start: u64,
    step_limit: u64,
    config: LambdaConfig,
}

impl Default for LambdaManager {
    fn default() -> Self {
        LambdaManager::new()
    }
}

impl fmt::Debug for LambdaManager {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LambdaManager")
            .field("nodes", &self.pool.len())
            .field("config", &self.config)
            .finish_non_exhaustive()
    }
}

impl LambdaManager {
    pub fn new() -> Self {
        LambdaManager::with_config(LambdaConfig::default())
    }

    pub fn with_config(config: LambdaConfig) -> Self {
        let pool = if config.sharing {
            Pool::new()
        } else {
            Pool::without_sharing([])
        };
        let mut m = LambdaManager {
            pool,
            m_lifti: MemoTable::new(3),
            m_subst: MemoTable::new(3),
            m_hnf: MemoTable::new(1),
            m_nf: MemoTable::new(1),
            guard: DepthGuard::new(config.depth_limit),
            steps: 0,
            budget_start: 0,
            step_limit: config.step_limit,
            config,
        };
        if !config.memoization {
            m.tables_mut().into_iter().for_each(|t| t.set_enabled(false));
        }
        m
    }

    pub fn config(&self) -> LambdaConfig {
        self.config
    }

    pub fn pool(&self) -> &Pool<TermNode> {
        &self.pool
    }

    pub fn pool_stats(&self) -> PoolStats {
        self.pool.stats()
    }

    /// β-steps performed so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    fn tables_mut(&mut self) -> [&mut MemoTable<TermRef>; 4] {
        [
            &mut self.m_lifti,
            &mut self.m_subst,
            &mut self.m_hnf,
            &mut self.m_nf,
        ]
    }

    pub fn memo_stats(&self) -> BTreeMap<&'static str, MemoStats> {
        BTreeMap::from([
            ("lifti", self.m_lifti.stats()),
            ("subst", self.m_subst.stats()),
            ("hnf", self.m_hnf.stats()),
            ("nf", self.m_nf.stats()),
        ])
    }

    pub fn clear_memo(&mut self) {
        self.tables_mut().into_iter().for_each(MemoTable::clear);
    }

    /// Turns the caches on or off; disabling also empties them.
    pub fn set_memoization(&mut self, enabled: bool) {
        self.config.memoization = enabled;
        self.tables_mut()
            .into_iter()
            .for_each(|t| t.set_enabled(enabled));
    }

    /// The node behind `t`.
    pub fn node(&self, t: TermRef) -> Result<TermNode, LambdaError> {
        Ok(*self.pool.resolve(t.0)?)
    }

    #[inline]
    fn get(&self, t: TermRef) -> TermNode {
        *self.pool.node(t.0)
    }

    fn intern(&mut self, n: TermNode) -> Result<TermRef, LambdaError> {
        Ok(TermRef(self.pool.intern(n)?))
    }

    pub fn mk_var(&mut self, index: u64) -> Result<TermRef, LambdaError> {
        self.intern(TermNode::Var(index))
    }

    pub fn mk_app(&mut self, f: TermRef, a: TermRef) -> Result<TermRef, LambdaError> {
        self.intern(TermNode::App(f, a))
    }

    pub fn mk_abs(&mut self, body: TermRef) -> Result<TermRef, LambdaError> {
        self.intern(TermNode::Abs(body))
    }

    /// Applies `f` to each of `args` in turn.
    pub fn mk_apps(&mut self, f: TermRef, args: &[TermRef]) -> Result<TermRef, LambdaError> {
        args.iter().try_fold(f, |acc, &a| self.mk_app(acc, a))
    }

    /// Wraps `body` in `n` abstractions.
    pub fn mk_abs_n(&mut self, n: usize, body: TermRef) -> Result<TermRef, LambdaError> {
        (0..n).try_fold(body, |acc, _| self.mk_abs(acc))
    }

    fn guarded<T>(&mut self, out: Result<T, LambdaError>) -> Result<T, LambdaError> {
        if out.is_err() {
            self.guard.reset();
        }
        out
    }

    /// Each top-level reduction gets `step_limit` β-steps.
    fn step(&mut self) -> Result<(), LambdaError> {
        self.steps += 1;
        if self.steps - self.budget_start > self.step_limit {
            return Err(LambdaError::StepLimit {
                limit: self.step_limit,
            });
        }
        Ok(())
    }

    /// Adds `n` to every variable of `t` bound outside the `k` innermost
    /// binders.
    pub fn lifti(&mut self, n: u64, t: TermRef, k: u64) -> Result<TermRef, LambdaError> {
        self.pool.resolve(t.0)?;
        let out = self.lifti_rec(n, t, k);
        self.guarded(out)
    }

    pub fn lift(&mut self, n: u64, t: TermRef) -> Result<TermRef, LambdaError> {
        self.lifti(n, t, 0)
    }

    fn lifti_rec(&mut self, n: u64, t: TermRef, k: u64) -> Result<TermRef, LambdaError> {
        if n == 0 {
            return Ok(t);
        }
        let key = MemoKey::triple(n, t, k);
        if let Some(r) = self.m_lifti.get(&key)? {
            return Ok(r);
        }
        self.guard.enter()?;
        self.m_lifti.note_evaluation();
        let r = match self.get(t) {
            TermNode::Var(i) if i < k => self.mk_var(i)?,
            TermNode::Var(i) => self.mk_var(i + n)?,
            TermNode::Abs(b) => {
                let b = self.lifti_rec(n, b, k + 1)?;
                self.mk_abs(b)?
            }
            TermNode::App(f, a) => {
                let f = self.lifti_rec(n, f, k)?;
                let a = self.lifti_rec(n, a, k)?;
                self.mk_app(f, a)?
            }
        };
        self.guard.exit();
        self.m_lifti.put(key, r)?;
        Ok(r)
    }

    /// Replaces variable `n` of `t` by `w`, lowering the variables above it.
    pub fn subst(&mut self, w: TermRef, n: u64, t: TermRef) -> Result<TermRef, LambdaError> {
        self.pool.resolve(w.0)?;
        self.pool.resolve(t.0)?;
        let out = self.subst_rec(w, n, t);
        self.guarded(out)
    }

    fn subst_rec(&mut self, w: TermRef, n: u64, t: TermRef) -> Result<TermRef, LambdaError> {
        let key = MemoKey::triple(w, n, t);
        if let Some(r) = self.m_subst.get(&key)? {
            return Ok(r);
        }
        self.guard.enter()?;
        self.m_subst.note_evaluation();
        let r = match self.get(t) {
            TermNode::Var(k) if k < n => self.mk_var(k)?,
            TermNode::Var(k) if k == n => self.lifti_rec(n, w, 0)?,
            TermNode::Var(k) => self.mk_var(k - 1)?,
            TermNode::Abs(b) => {
                let b = self.subst_rec(w, n + 1, b)?;
                self.mk_abs(b)?
            }
            TermNode::App(f, a) => {
                let f = self.subst_rec(w, n, f)?;
                let a = self.subst_rec(w, n, a)?;
                self.mk_app(f, a)?
            }
        };
        self.guard.exit();
        self.m_subst.put(key, r)?;
        Ok(r)
    }

    /// Head normal form. Reduces under abstractions, never inside the
    /// arguments of a stuck application.
    pub fn hnf(&mut self, t: TermRef) -> Result<TermRef, LambdaError> {
        self.pool.resolve(t.0)?;
        self.budget_start = self.steps;
        let out = self.hnf_rec(t);
        self.guarded(out)
    }

    fn hnf_rec(&mut self, t: TermRef) -> Result<TermRef, LambdaError> {
        let key = MemoKey::unary(t);
        if let Some(r) = self.m_hnf.get(&key)? {
            return Ok(r);
        }
        self.guard.enter()?;
        // Head β-steps are tail calls: walk them in a loop and give every
        // term along the way the same answer.
        let mut chain = vec![t];
        let mut cur = t;
        let result = loop {
            self.m_hnf.note_evaluation();
            match self.get(cur) {
                TermNode::Var(_) => break cur,
                TermNode::Abs(b) => {
                    let b = self.hnf_rec(b)?;
                    break self.mk_abs(b)?;
                }
                TermNode::App(f, a) => {
                    let h = self.hnf_rec(f)?;
                    match self.get(h) {
                        TermNode::Abs(body) => {
                            self.step()?;
                            cur = self.subst_rec(a, 0, body)?;
                            if let Some(r) = self.m_hnf.get(&MemoKey::unary(cur))? {
                                break r;
                            }
                            chain.push(cur);
                        }
                        _ => break self.mk_app(h, a)?,
                    }
                }
            }
        };
        self.guard.exit();
        for k in chain {
            self.m_hnf.put(MemoKey::unary(k), result)?;
        }
        Ok(result)
    }

    /// β-normal form under normal-order reduction. Diverges (up to the
    /// step limit) on terms without one.
    pub fn nf(&mut self, t: TermRef) -> Result<TermRef, LambdaError> {
        self.pool.resolve(t.0)?;
        self.budget_start = self.steps;
        let out = self.nf_rec(t);
        self.guarded(out)
    }

    fn nf_rec(&mut self, t: TermRef) -> Result<TermRef, LambdaError> {
        let key = MemoKey::unary(t);
        if let Some(r) = self.m_nf.get(&key)? {
            return Ok(r);
        }
        self.guard.enter()?;
        let mut chain = vec![t];
        let mut cur = t;
        let result = loop {
            self.m_nf.note_evaluation();
            match self.get(cur) {
                TermNode::Var(_) => break cur,
                TermNode::Abs(b) => {
                    let b = self.nf_rec(b)?;
                    break self.mk_abs(b)?;
                }
                TermNode::App(f, a) => {
                    let h = self.hnf_rec(f)?;
                    match self.get(h) {
                        TermNode::Abs(body) => {
                            self.step()?;
                            cur = self.subst_rec(a, 0, body)?;
                            if let Some(r) = self.m_nf.get(&MemoKey::unary(cur))? {
                                break r;
                            }
                            chain.push(cur);
                        }
                        _ => {
                            let h = self.nf_rec(h)?;
                            let a = self.nf_rec(a)?;
                            break self.mk_app(h, a)?;
                        }
                    }
                }
            }
        };
        self.guard.exit();
        for k in chain {
            self.m_nf.put(MemoKey::unary(k), result)?;
        }
        Ok(result)
    }

    /// Number of distinct nodes reachable from `t`.
    pub fn node_count(&self, t: TermRef) -> usize {
        let mut seen = FxHashSet::default();
        let mut stack = vec![t];
        while let Some(t) = stack.pop() {
            if !seen.insert(t) {
                continue;
            }
            self.get(t).for_each_child(|c| stack.push(TermRef(c)));
        }
        seen.len()
    }

    /// Copies `t`, owned by `other`, into this manager.
    pub fn import(&mut self, other: &LambdaManager, t: TermRef) -> Result<TermRef, LambdaError> {
        let mut done: rustc_hash::FxHashMap<TermRef, TermRef> = Default::default();
        let mut stack = vec![t];
        while let Some(&cur) = stack.last() {
            if done.contains_key(&cur) {
                stack.pop();
                continue;
            }
            let node = other.node(cur)?;
            let mut pending = false;
            node.for_each_child(|c| {
                if !done.contains_key(&TermRef(c)) {
                    stack.push(TermRef(c));
                    pending = true;
                }
            });
            if pending {
                continue;
            }
            stack.pop();
            let copy = match node {
                TermNode::Var(i) => self.mk_var(i)?,
                TermNode::App(f, a) => self.mk_app(done[&f], done[&a])?,
                TermNode::Abs(b) => self.mk_abs(done[&b])?,
            };
            done.insert(cur, copy);
        }
        Ok(done[&t])
    }

    /// Renders `t` with de Bruijn indices, e.g. `λ λ (1 0)`.
    pub fn display(&self, t: TermRef) -> String {
        let mut out = String::new();
        self.write_term(t, &mut out, false);
        out
    }

    fn write_term(&self, t: TermRef, out: &mut String, parens: bool) {
        match self.get(t) {
            TermNode::Var(i) => out.push_str(&i.to_string()),
            TermNode::Abs(b) => {
                if parens {
                    out.push('(');
                }
                out.push_str("λ ");
                self.write_term(b, out, false);
                if parens {
                    out.push(')');
                }
            }
            TermNode::App(f, a) => {
                if parens {
                    out.push('(');
                }
                let head_parens = matches!(self.get(f), TermNode::Abs(_));
                self.write_term(f, out, head_parens);
                out.push(' ');
                self.write_term(a, out, true);
                if parens {
                    out.push(')');
                }
            }
        }
    }
}
