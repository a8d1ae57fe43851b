//! A naive λ-calculus on boxed trees: the reference the shared, memoized
//! engine is checked against.

use hashcons::lambda::{LambdaError, LambdaManager, TermNode, TermRef};
use proptest::prelude::*;
use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tree {
    Var(u64),
    App(Box<Tree>, Box<Tree>),
    Abs(Box<Tree>),
}

pub fn app(f: Tree, a: Tree) -> Tree {
    Tree::App(Box::new(f), Box::new(a))
}

pub fn abs(b: Tree) -> Tree {
    Tree::Abs(Box::new(b))
}

impl Tree {
    pub fn size(&self) -> usize {
        match self {
            Tree::Var(_) => 1,
            Tree::App(f, a) => 1 + f.size() + a.size(),
            Tree::Abs(b) => 1 + b.size(),
        }
    }
}

pub fn lift(n: u64, k: u64, t: &Tree) -> Tree {
    match t {
        Tree::Var(i) if *i < k => Tree::Var(*i),
        Tree::Var(i) => Tree::Var(i + n),
        Tree::App(f, a) => app(lift(n, k, f), lift(n, k, a)),
        Tree::Abs(b) => abs(lift(n, k + 1, b)),
    }
}

pub fn subst(w: &Tree, n: u64, t: &Tree) -> Tree {
    match t {
        Tree::Var(k) if *k < n => Tree::Var(*k),
        Tree::Var(k) if *k == n => lift(n, 0, w),
        Tree::Var(k) => Tree::Var(k - 1),
        Tree::App(f, a) => app(subst(w, n, f), subst(w, n, a)),
        Tree::Abs(b) => abs(subst(w, n + 1, b)),
    }
}

/// Work budget for [`nf`]: β-steps and the size of any intermediate term.
pub struct Fuel {
    pub steps: u64,
    pub max_size: usize,
}

impl Fuel {
    pub fn new(steps: u64, max_size: usize) -> Self {
        Fuel { steps, max_size }
    }

    fn burn(&mut self, t: &Tree) -> Option<()> {
        if self.steps == 0 || t.size() > self.max_size {
            return None;
        }
        self.steps -= 1;
        Some(())
    }
}

fn whnf(t: &Tree, fuel: &mut Fuel) -> Option<Tree> {
    match t {
        Tree::App(f, a) => match whnf(f, fuel)? {
            Tree::Abs(b) => {
                let r = subst(a, 0, &b);
                fuel.burn(&r)?;
                whnf(&r, fuel)
            }
            f => Some(app(f, (**a).clone())),
        },
        _ => Some(t.clone()),
    }
}

/// Normal-order normal form, or `None` when the budget runs out.
pub fn nf(t: &Tree, fuel: &mut Fuel) -> Option<Tree> {
    match whnf(t, fuel)? {
        Tree::Abs(b) => Some(abs(nf(&b, fuel)?)),
        Tree::App(f, a) => Some(app(nf(&f, fuel)?, nf(&a, fuel)?)),
        v => Some(v),
    }
}

pub fn build(m: &mut LambdaManager, t: &Tree) -> Result<TermRef, LambdaError> {
    match t {
        Tree::Var(i) => m.mk_var(*i),
        Tree::App(f, a) => {
            let f = build(m, f)?;
            let a = build(m, a)?;
            m.mk_app(f, a)
        }
        Tree::Abs(b) => {
            let b = build(m, b)?;
            m.mk_abs(b)
        }
    }
}

pub fn read_back(m: &LambdaManager, t: TermRef) -> Tree {
    match m.node(t).unwrap() {
        TermNode::Var(i) => Tree::Var(i),
        TermNode::App(f, a) => app(read_back(m, f), read_back(m, a)),
        TermNode::Abs(b) => abs(read_back(m, b)),
    }
}

/// A random term of about `size` nodes whose free variables are below
/// `free + binders in scope`.
pub fn term(rng: &mut impl Rng, size: u32, depth: u64, free: u64) -> Tree {
    if size <= 1 {
        return Tree::Var(rng.gen_range(0..depth + free.max(1)));
    }
    if rng.gen_bool(0.4) {
        return abs(term(rng, size - 1, depth + 1, free));
    }
    let left = rng.gen_range(1..size);
    app(
        term(rng, left, depth, free),
        term(rng, (size - left).max(1), depth, free),
    )
}

pub fn arb_tree() -> impl Strategy<Value = Tree> {
    (0u64..4).prop_map(Tree::Var).prop_recursive(7, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(abs),
            (inner.clone(), inner).prop_map(|(f, a)| app(f, a)),
        ]
    })
}
