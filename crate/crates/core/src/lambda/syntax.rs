//! Tiny named-variable notation for writing closed library terms.
//!
//! `\x y. body` abstracts, juxtaposition applies, parentheses group. Any
//! name not bound by an enclosing `\` must be a global, a closed term
//! supplied by the caller. Only used to define the combinators in this
//! crate; it is not a user-facing syntax.

use rustc_hash::FxHashMap;

use super::{LambdaError, LambdaManager, TermRef};

pub(crate) type Globals = FxHashMap<&'static str, TermRef>;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Ident(&'a str),
    Lambda,
    Dot,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Tok<'_>>, LambdaError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '\\' => {
                chars.next();
                out.push(Tok::Lambda);
            }
            '.' => {
                chars.next();
                out.push(Tok::Dot);
            }
            '(' => {
                chars.next();
                out.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                out.push(Tok::RParen);
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut end = i;
                while let Some(&(j, c)) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        end = j + c.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Ident(&src[i..end]));
            }
            other => return Err(LambdaError::Shape(format!("unexpected `{other}` in term source"))),
        }
    }
    Ok(out)
}

struct Builder<'s, 'g> {
    toks: Vec<Tok<'s>>,
    pos: usize,
    scope: Vec<&'s str>,
    globals: &'g Globals,
}

impl<'s> Builder<'s, '_> {
    fn peek(&self) -> Option<&Tok<'s>> {
        self.toks.get(self.pos)
    }

    fn err(&self, what: &str) -> LambdaError {
        LambdaError::Shape(format!("{what} at token {}", self.pos))
    }

    fn term(&mut self, m: &mut LambdaManager) -> Result<TermRef, LambdaError> {
        if self.peek() == Some(&Tok::Lambda) {
            self.pos += 1;
            let mut names = Vec::new();
            while let Some(&Tok::Ident(name)) = self.peek() {
                names.push(name);
                self.pos += 1;
            }
            if names.is_empty() || self.peek() != Some(&Tok::Dot) {
                return Err(self.err("malformed binder"));
            }
            self.pos += 1;
            let depth = self.scope.len();
            self.scope.extend(&names);
            let body = self.term(m)?;
            self.scope.truncate(depth);
            return m.mk_abs_n(names.len(), body);
        }
        let mut acc = self.atom(m)?;
        while let Some(tok) = self.peek() {
            let arg = match tok {
                Tok::Lambda => self.term(m)?,
                Tok::Ident(_) | Tok::LParen => self.atom(m)?,
                _ => break,
            };
            acc = m.mk_app(acc, arg)?;
        }
        Ok(acc)
    }

    fn atom(&mut self, m: &mut LambdaManager) -> Result<TermRef, LambdaError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(i) = self.scope.iter().rev().position(|&n| n == name) {
                    m.mk_var(i as u64)
                } else {
                    let global = self.globals.get(name).copied();
                    global.ok_or_else(|| LambdaError::Shape(format!("unknown name `{name}`")))
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term(m)?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

/// Builds the de Bruijn term for `src`.
pub(crate) fn build(m: &mut LambdaManager, globals: &Globals, src: &str) -> Result<TermRef, LambdaError> {
    let mut b = Builder {
        toks: tokenize(src)?,
        pos: 0,
        scope: Vec::new(),
        globals,
    };
    let t = b.term(m)?;
    if b.pos != b.toks.len() {
        return Err(b.err("trailing input"));
    }
    Ok(t)
}
