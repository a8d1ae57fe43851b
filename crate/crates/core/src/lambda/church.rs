//! Church numerals and right-fold lists, with decoders.

use super::{LambdaError, LambdaManager, TermNode, TermRef};

/// `λf. λx. f (f (... x))` with `n` applications.
pub fn church(m: &mut LambdaManager, n: u64) -> Result<TermRef, LambdaError> {
    let f = m.mk_var(1)?;
    let mut body = m.mk_var(0)?;
    for _ in 0..n {
        body = m.mk_app(f, body)?;
    }
    m.mk_abs_n(2, body)
}

/// `λc. λn. c x1 (c x2 (... n))` over the numerals of `xs`.
pub fn church_list(m: &mut LambdaManager, xs: &[u64]) -> Result<TermRef, LambdaError> {
    let c = m.mk_var(1)?;
    let mut body = m.mk_var(0)?;
    for &x in xs.iter().rev() {
        let numeral = church(m, x)?;
        let head = m.mk_app(c, numeral)?;
        body = m.mk_app(head, body)?;
    }
    m.mk_abs_n(2, body)
}

/// `(λm n f x. m f (n f x)) a b`
pub fn church_add(m: &mut LambdaManager, a: TermRef, b: TermRef) -> Result<TermRef, LambdaError> {
    let [vm, vn, f, x] = [3, 2, 1, 0].map(|i| m.mk_var(i));
    let (vm, vn, f, x) = (vm?, vn?, f?, x?);
    let nfx = m.mk_apps(vn, &[f, x])?;
    let body = m.mk_apps(vm, &[f, nfx])?;
    let add = m.mk_abs_n(4, body)?;
    m.mk_apps(add, &[a, b])
}

/// `(λm n f. m (n f)) a b`
pub fn church_mul(m: &mut LambdaManager, a: TermRef, b: TermRef) -> Result<TermRef, LambdaError> {
    let [vm, vn, f] = [2, 1, 0].map(|i| m.mk_var(i));
    let (vm, vn, f) = (vm?, vn?, f?);
    let nf = m.mk_app(vn, f)?;
    let body = m.mk_app(vm, nf)?;
    let mul = m.mk_abs_n(3, body)?;
    m.mk_apps(mul, &[a, b])
}

fn shape(what: &str, m: &LambdaManager, t: TermRef) -> LambdaError {
    LambdaError::Shape(format!("expected {what}, found {}", m.display(t)))
}

/// Peels the two leading binders of `t`.
fn two_binders(m: &LambdaManager, t: TermRef, what: &str) -> Result<TermRef, LambdaError> {
    match m.node(t)? {
        TermNode::Abs(inner) => match m.node(inner)? {
            TermNode::Abs(body) => Ok(body),
            _ => Err(shape(what, m, t)),
        },
        _ => Err(shape(what, m, t)),
    }
}

/// Reads back a numeral in normal form.
pub fn decode_church(m: &LambdaManager, t: TermRef) -> Result<u64, LambdaError> {
    let mut cur = two_binders(m, t, "a Church numeral")?;
    let mut n = 0;
    loop {
        match m.node(cur)? {
            TermNode::Var(0) => return Ok(n),
            TermNode::App(f, rest) if m.node(f)? == TermNode::Var(1) => {
                n += 1;
                cur = rest;
            }
            _ => return Err(shape("a Church numeral", m, t)),
        }
    }
}

/// Reads back a list of numerals in normal form.
pub fn decode_list(m: &LambdaManager, t: TermRef) -> Result<Vec<u64>, LambdaError> {
    let mut cur = two_binders(m, t, "a Church list")?;
    let mut out = Vec::new();
    loop {
        match m.node(cur)? {
            TermNode::Var(0) => return Ok(out),
            TermNode::App(head, rest) => match m.node(head)? {
                TermNode::App(c, x) if m.node(c)? == TermNode::Var(1) => {
                    out.push(decode_church(m, x)?);
                    cur = rest;
                }
                _ => return Err(shape("a Church list", m, t)),
            },
            _ => return Err(shape("a Church list", m, t)),
        }
    }
}
