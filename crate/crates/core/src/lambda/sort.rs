//! Quicksort on Church lists of Church numerals, as a closed λ-term.
//!
//! Recursion goes through Turing's fixed-point combinator, which unfolds one
//! step at a time under normal order. Lists are right folds, so `tail` uses
//! the usual pairing trick.

use super::syntax::{build, Globals};
use super::{church_list, decode_list, LambdaError, LambdaManager, TermRef};

/// Definitions in dependency order; each may refer to the ones above it.
const DEFINITIONS: &[(&str, &str)] = &[
    ("TRUE", r"\a b. a"),
    ("FALSE", r"\a b. b"),
    ("NOT", r"\p a b. p b a"),
    ("PAIR", r"\x y s. s x y"),
    ("FST", r"\p. p TRUE"),
    ("SND", r"\p. p FALSE"),
    ("NIL", r"\c n. n"),
    ("CONS", r"\h t c n. c h (t c n)"),
    ("ISNIL", r"\l. l (\h r. FALSE) TRUE"),
    ("HEAD", r"\l. l (\h r. h) NIL"),
    ("TAIL", r"\l. FST (l (\x p. PAIR (SND p) (CONS x (SND p))) (PAIR NIL NIL))"),
    ("FILTER", r"\p l. l (\x r. p x (CONS x r) r) NIL"),
    ("APPEND", r"\a b c n. a c (b c n)"),
    ("PRED", r"\n f x. n (\g h. h (g f)) (\u. x) (\u. u)"),
    ("SUB", r"\m n. n PRED m"),
    ("ISZERO", r"\n. n (\z. FALSE) TRUE"),
    ("LEQ", r"\m n. ISZERO (SUB m n)"),
    ("LT", r"\m n. NOT (LEQ n m)"),
    ("THETA", r"(\x y. y (x x y)) (\x y. y (x x y))"),
    (
        "QSORT",
        r"THETA (\sort l. ISNIL l NIL
            ((\h t. APPEND (sort (FILTER (\x. LT x h) t))
                           (CONS h (sort (FILTER (\x. LEQ h x) t))))
             (HEAD l) (TAIL l)))",
    ),
];

pub(crate) fn library(m: &mut LambdaManager) -> Result<Globals, LambdaError> {
    let mut globals = Globals::default();
    for &(name, src) in DEFINITIONS {
        let t = build(m, &globals, src)?;
        globals.insert(name, t);
    }
    Ok(globals)
}

/// The closed quicksort term; apply it to a Church list and normalize.
pub fn quicksort_term(m: &mut LambdaManager) -> Result<TermRef, LambdaError> {
    Ok(library(m)?["QSORT"])
}

/// Encodes `xs`, sorts it by normalization in `m` and decodes the result.
/// Also returns the normal form.
pub fn sort_with(m: &mut LambdaManager, xs: &[u64]) -> Result<(Vec<u64>, TermRef), LambdaError> {
    let sort = quicksort_term(m)?;
    let list = church_list(m, xs)?;
    let app = m.mk_app(sort, list)?;
    let normal = m.nf(app)?;
    Ok((decode_list(m, normal)?, normal))
}
