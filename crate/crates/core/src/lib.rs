//! Hash-consing and memoization, with two clients built on them.
//!
//! - [`intern`]: a generic pool giving every structurally distinct value a
//!   unique identifier, so that equality is an integer comparison.
//! - [`memo`]: tables keyed by identifier tuples and a memoizing fixpoint.
//! - [`bdd`]: reduced ordered binary decision diagrams with memoized
//!   boolean operations.
//! - [`formula`]: propositional formulas, a parser, a truth-table oracle and
//!   the Urquhart and pigeonhole benchmark families.
//! - [`lambda`]: hash-consed de Bruijn λ-terms with memoized normalization,
//!   Church encodings and a quicksort benchmark.
//! - [`cli`]: the command-line front end and its JSON run reports.
//!
//! ```
//! use hashcons::bdd::BddManager;
//! use hashcons::formula::{compile, urquhart};
//!
//! let mut mgr = BddManager::new();
//! let f = urquhart(10).unwrap();
//! let root = compile(&mut mgr, &f).unwrap();
//! assert!(mgr.is_tautology(root));
//! ```

pub mod bdd;
pub mod cli;
pub mod formula;
pub mod intern;
pub mod lambda;
pub mod memo;

pub use bdd::{BddManager, BddRef, BinOp, Env, VarIndex};
pub use formula::Formula;
pub use intern::{Pool, UniqueId};
pub use lambda::{LambdaManager, TermRef};
pub use memo::{memo_fix, MemoTable};
