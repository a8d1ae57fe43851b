//! Invariant checks shared by the property tests and the acceptance run.
//! Each returns a description of the first violation found.

use std::fmt::Debug;

use hashcons::bdd::{BddManager, BddPayload, BddRef, BinOp, Env};
use hashcons::intern::{Node, Pool, UniqueId};
use hashcons::lambda::{LambdaError, LambdaManager, TermRef};
use hashcons::memo::MemoStats;

use super::lambda_tree::{self, Fuel, Tree};
use super::truth::{Table, MAX_VARS};

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// Bijection between stored payloads and identifiers, children strictly
/// below parents, and no structural duplicates.
pub fn pool<N: Node + Debug>(pool: &Pool<N>) -> Check {
    for (id, payload) in pool.iter() {
        if pool.is_sharing() {
            ensure!(
                pool.find(payload) == Some(id),
                "payload {payload:?} at {id} is not found under its own identifier"
            );
        }
        let mut bad = None;
        payload.for_each_child(|c| {
            if c >= id {
                bad = Some(c);
            }
        });
        ensure!(bad.is_none(), "{id} has child {bad:?} that is not older");
        ensure!(pool.resolve(id).ok() == Some(payload), "{id} does not resolve to itself");
    }
    if pool.is_sharing() {
        let dups = pool.scan_duplicates();
        ensure!(dups.is_empty(), "duplicate payloads: {dups:?}");
    }
    pool.check_well_formed()
}

/// Every pool entry present in `before` is unchanged.
pub fn monotone<N: Node + Debug>(before: &[N], after: &Pool<N>) -> Check {
    ensure!(after.len() >= before.len(), "pool shrank");
    for (i, p) in before.iter().enumerate() {
        let id = UniqueId::new(i as u64);
        ensure!(after.resolve(id).ok() == Some(p), "{id} changed from {p:?}");
    }
    Ok(())
}

pub fn snapshot<N: Node>(pool: &Pool<N>) -> Vec<N> {
    pool.iter().map(|(_, p)| p.clone()).collect()
}

/// No node with equal children; variables strictly increase towards the
/// leaves.
pub fn reduced_ordered(m: &BddManager) -> Check {
    for (id, payload) in m.pool().iter() {
        if let BddPayload::Decision(n) = payload {
            ensure!(n.low != n.high, "{id} has low = high");
            for child in [n.low, n.high] {
                if let Some(v) = m.head_var(child) {
                    ensure!(v > n.var, "{id} tests {} above {}", n.var, v);
                }
            }
        }
    }
    m.check_well_formed()
}

/// `r` evaluates to `table` on every assignment of `x1..x8`.
pub fn denotes(m: &BddManager, r: BddRef, table: &Table) -> Check {
    for a in 0..1usize << MAX_VARS {
        let env = Env::from_bits(MAX_VARS, a as u64);
        let got = m.eval(r, &env).map_err(|e| e.to_string())?;
        ensure!(got == table.row(a), "{r} disagrees with its truth table on {env:?}");
    }
    Ok(())
}

/// Distinct body evaluations of one `apply2` from cold tables stay within
/// `(|a| + 1) * (|b| + 1)`.
pub fn memo_bound(m: &mut BddManager, op: BinOp, a: BddRef, b: BddRef) -> Result<(u64, u64), String> {
    m.clear_memo();
    let before = m.op_stats(op).body_evaluations;
    m.apply2(op, a, b).map_err(|e| e.to_string())?;
    let evals = m.op_stats(op).body_evaluations - before;
    let bound = (m.node_count(a) as u64 + 1) * (m.node_count(b) as u64 + 1);
    ensure!(evals <= bound, "{} on {a}, {b}: {evals} evaluations > bound {bound}", op.name());
    Ok((evals, bound))
}

/// Results with caches off are identifier-equal to results with caches on.
pub fn bdd_memo_transparent(m: &mut BddManager, a: BddRef, b: BddRef, c: BddRef) -> Check {
    let run = |m: &mut BddManager| -> Result<Vec<BddRef>, String> {
        let mut out = Vec::new();
        for op in BinOp::ALL {
            out.push(m.apply2(op, a, b).map_err(|e| e.to_string())?);
        }
        out.push(m.mk_not(a).map_err(|e| e.to_string())?);
        out.push(m.mk_ite(a, b, c).map_err(|e| e.to_string())?);
        Ok(out)
    };
    let with = run(m)?;
    m.set_memoization(false);
    let without = run(m);
    m.set_memoization(true);
    let without = without?;
    ensure!(with == without, "memoized {with:?} vs unmemoized {without:?}");
    Ok(())
}

/// Outcome of normalizing a generated term.
pub enum Normalized {
    Done(TermRef),
    Diverged,
}

pub fn normalize(m: &mut LambdaManager, t: TermRef) -> Result<Normalized, String> {
    match m.nf(t) {
        Ok(r) => Ok(Normalized::Done(r)),
        Err(LambdaError::StepLimit { .. }) => Ok(Normalized::Diverged),
        Err(e) => Err(e.to_string()),
    }
}

/// Engine normal form matches the naive tree reducer, is idempotent, and
/// agrees with `nf ∘ hnf`, with caches on and off.
pub fn lambda_term(m: &mut LambdaManager, tree: &Tree) -> Check {
    let t = lambda_tree::build(m, tree).map_err(|e| e.to_string())?;
    let Normalized::Done(n) = normalize(m, t)? else {
        return Ok(());
    };
    if let Some(expected) = lambda_tree::nf(tree, &mut Fuel::new(5_000, 20_000)) {
        let got = lambda_tree::read_back(m, n);
        ensure!(got == expected, "nf({tree:?}) = {got:?}, reference gives {expected:?}");
    }
    let nn = m.nf(n).map_err(|e| e.to_string())?;
    ensure!(nn == n, "nf is not idempotent on {tree:?}");
    let h = m.hnf(t).map_err(|e| e.to_string())?;
    let nh = m.nf(h).map_err(|e| e.to_string())?;
    ensure!(nh == n, "nf(hnf t) differs from nf(t) on {tree:?}");
    let memo = m.config().memoization;
    m.set_memoization(!memo);
    let other = m.nf(t);
    m.set_memoization(memo);
    let other = other.map_err(|e| e.to_string())?;
    ensure!(other == n, "toggling caches changed nf of {tree:?}");
    Ok(())
}

/// `lift(a, lift(b, t)) = lift(a + b, t)`, and both match the tree version.
pub fn lift_composition(m: &mut LambdaManager, tree: &Tree, a: u64, b: u64) -> Check {
    let t = lambda_tree::build(m, tree).map_err(|e| e.to_string())?;
    let inner = m.lift(b, t).map_err(|e| e.to_string())?;
    let twice = m.lift(a, inner).map_err(|e| e.to_string())?;
    let once = m.lift(a + b, t).map_err(|e| e.to_string())?;
    ensure!(twice == once, "lift({a}, lift({b}, t)) != lift({}, t)", a + b);
    let expected = lambda_tree::lift(a + b, 0, tree);
    ensure!(lambda_tree::read_back(m, once) == expected, "lift disagrees with the reference");
    Ok(())
}

/// `body_evaluations` equals the number of distinct keys queried, and no
/// body runs twice for one key.
pub fn at_most_once(stats: MemoStats, distinct_keys: usize) -> Check {
    ensure!(
        stats.body_evaluations == distinct_keys as u64,
        "{} evaluations for {distinct_keys} distinct keys",
        stats.body_evaluations
    );
    ensure!(stats.misses == stats.body_evaluations, "misses {} != evaluations", stats.misses);
    Ok(())
}
