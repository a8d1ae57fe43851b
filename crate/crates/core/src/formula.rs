//! Propositional formulas: syntax, semantics, compilation to BDDs, and the
//! Urquhart and pigeonhole families used as tautology benchmarks.
//!
//! Text syntax, loosest binding first:
//!
//! | operator | meaning         | associativity |
//! |----------|-----------------|---------------|
//! | `<->`    | equivalence     | right         |
//! | `->`     | implication     | right         |
//! | `\|`     | disjunction     | left          |
//! | `^`      | exclusive or    | left          |
//! | `&`      | conjunction     | left          |
//! | `!`      | negation        | prefix        |
//!
//! Atoms are `0`, `1`, `x1`, `x2`, ... and parenthesized formulas. `#`
//! starts a comment running to the end of the line.

use std::fmt;

use thiserror::Error;

use crate::bdd::{BddError, BddManager, BddRef, Env, VarIndex};

/// Largest variable count [`truth_table_equiv`] will enumerate.
pub const ORACLE_MAX_VARS: u32 = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(bool),
    Var(VarIndex),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Xor(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("variable index out of range at {line}:{column}: indices start at x1")]
    VarRange { line: usize, column: usize },
    #[error("benchmark size must be at least 1")]
    SizeRange,
    #[error("truth tables are limited to {ORACLE_MAX_VARS} variables, got {0}")]
    OracleLimit(u32),
    #[error("variable {0} is not assigned")]
    Unbound(VarIndex),
    #[error(transparent)]
    Bdd(#[from] BddError),
}

impl Formula {
    pub fn var(i: u32) -> Formula {
        Formula::Var(VarIndex(i))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn xor(a: Formula, b: Formula) -> Formula {
        Formula::Xor(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Largest variable index occurring in the formula, 0 if none.
    pub fn max_var(&self) -> u32 {
        match self {
            Formula::Const(_) => 0,
            Formula::Var(v) => v.0,
            Formula::Not(a) => a.max_var(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Xor(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.max_var().max(b.max_var()),
        }
    }

    /// Number of connectives and atoms.
    pub fn size(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Var(_) => 1,
            Formula::Not(a) => 1 + a.size(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Xor(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => 1 + a.size() + b.size(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::Xor(..) => 4,
            Formula::And(..) => 5,
            Formula::Not(_) => 6,
            Formula::Const(_) | Formula::Var(_) => 7,
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, context: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < context {
            f.write_str("(")?;
        }
        let binary = |f: &mut fmt::Formatter<'_>, a: &Formula, op: &str, b: &Formula, right: bool| {
            let (lc, rc) = if right { (prec + 1, prec) } else { (prec, prec + 1) };
            a.write_prec(f, lc)?;
            write!(f, " {op} ")?;
            b.write_prec(f, rc)
        };
        match self {
            Formula::Const(b) => f.write_str(if *b { "1" } else { "0" })?,
            Formula::Var(v) => write!(f, "{v}")?,
            Formula::Not(a) => {
                f.write_str("!")?;
                a.write_prec(f, prec)?;
            }
            Formula::And(a, b) => binary(f, a, "&", b, false)?,
            Formula::Or(a, b) => binary(f, a, "|", b, false)?,
            Formula::Xor(a, b) => binary(f, a, "^", b, false)?,
            Formula::Implies(a, b) => binary(f, a, "->", b, true)?,
            Formula::Iff(a, b) => binary(f, a, "<->", b, true)?,
        }
        if prec < context {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Prints with the fewest parentheses that [`parse`] reads back as the
/// same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Const(bool),
    Var(u32),
    Not,
    And,
    Or,
    Xor,
    Implies,
    Iff,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Const(b) => write!(f, "`{}`", u8::from(*b)),
            Tok::Var(i) => write!(f, "`x{i}`"),
            Tok::Not => f.write_str("`!`"),
            Tok::And => f.write_str("`&`"),
            Tok::Or => f.write_str("`|`"),
            Tok::Xor => f.write_str("`^`"),
            Tok::Implies => f.write_str("`->`"),
            Tok::Iff => f.write_str("`<->`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek_char()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, line: usize, column: usize, message: impl Into<String>) -> FormulaError {
        FormulaError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn expect(&mut self, c: char, line: usize, col: usize, what: &str) -> Result<(), FormulaError> {
        if self.peek_char() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(line, col, format!("expected `{what}`")))
        }
    }

    /// Returns the next token with its starting line and column.
    fn next(&mut self) -> Result<(Tok, usize, usize), FormulaError> {
        loop {
            match self.peek_char() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while !matches!(self.peek_char(), None | Some('\n')) {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
        let (line, col) = (self.line, self.col);
        let Some(c) = self.bump() else {
            return Ok((Tok::End, line, col));
        };
        let tok = match c {
            '0' => Tok::Const(false),
            '1' => Tok::Const(true),
            '!' => Tok::Not,
            '&' => Tok::And,
            '|' => Tok::Or,
            '^' => Tok::Xor,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '-' => {
                self.expect('>', line, col, "->")?;
                Tok::Implies
            }
            '<' => {
                self.expect('-', line, col, "<->")?;
                self.expect('>', line, col, "<->")?;
                Tok::Iff
            }
            'x' => {
                let start = self.pos;
                while self.peek_char().is_some_and(|c| c.is_ascii_digit()) {
                    self.bump();
                }
                let digits = &self.src[start..self.pos];
                if digits.is_empty() {
                    return Err(self.error(line, col, "expected digits after `x`"));
                }
                let index: u32 = digits
                    .parse()
                    .map_err(|_| self.error(line, col, "variable index too large"))?;
                if index == 0 {
                    return Err(FormulaError::VarRange { line, column: col });
                }
                Tok::Var(index)
            }
            other => return Err(self.error(line, col, format!("unexpected character `{other}`"))),
        };
        if matches!(tok, Tok::Const(_)) && self.peek_char().is_some_and(|c| c.is_ascii_alphanumeric()) {
            return Err(self.error(line, col, "constants are `0` or `1`"));
        }
        Ok((tok, line, col))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    line: usize,
    col: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, FormulaError> {
        let mut lexer = Lexer::new(src);
        let (tok, line, col) = lexer.next()?;
        Ok(Parser {
            lexer,
            tok,
            line,
            col,
        })
    }

    fn advance(&mut self) -> Result<(), FormulaError> {
        let (tok, line, col) = self.lexer.next()?;
        self.tok = tok;
        self.line = line;
        self.col = col;
        Ok(())
    }

    fn unexpected(&self, expected: &str) -> FormulaError {
        FormulaError::Syntax {
            line: self.line,
            column: self.col,
            message: format!("expected {expected}, found {}", self.tok),
        }
    }

    fn iff(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.implies()?;
        if self.tok == Tok::Iff {
            self.advance()?;
            Ok(Formula::iff(lhs, self.iff()?))
        } else {
            Ok(lhs)
        }
    }

    fn implies(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.or()?;
        if self.tok == Tok::Implies {
            self.advance()?;
            Ok(Formula::implies(lhs, self.implies()?))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.xor()?;
        while self.tok == Tok::Or {
            self.advance()?;
            acc = Formula::or(acc, self.xor()?);
        }
        Ok(acc)
    }

    fn xor(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.and()?;
        while self.tok == Tok::Xor {
            self.advance()?;
            acc = Formula::xor(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.unary()?;
        while self.tok == Tok::And {
            self.advance()?;
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        match self.tok {
            Tok::Not => {
                self.advance()?;
                Ok(Formula::not(self.unary()?))
            }
            Tok::Const(b) => {
                self.advance()?;
                Ok(Formula::Const(b))
            }
            Tok::Var(i) => {
                self.advance()?;
                Ok(Formula::var(i))
            }
            Tok::LParen => {
                self.advance()?;
                let inner = self.iff()?;
                if self.tok != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.advance()?;
                Ok(inner)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

pub fn parse(text: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser::new(text)?;
    let f = p.iff()?;
    if p.tok != Tok::End {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}

pub fn eval_formula(f: &Formula, env: &Env) -> Result<bool, FormulaError> {
    Ok(match f {
        Formula::Const(b) => *b,
        Formula::Var(v) => env.get(*v).ok_or(FormulaError::Unbound(*v))?,
        Formula::Not(a) => !eval_formula(a, env)?,
        Formula::And(a, b) => eval_formula(a, env)? & eval_formula(b, env)?,
        Formula::Or(a, b) => eval_formula(a, env)? | eval_formula(b, env)?,
        Formula::Xor(a, b) => eval_formula(a, env)? ^ eval_formula(b, env)?,
        Formula::Implies(a, b) => !eval_formula(a, env)? | eval_formula(b, env)?,
        Formula::Iff(a, b) => eval_formula(a, env)? == eval_formula(b, env)?,
    })
}

/// Builds the canonical diagram of `f` bottom-up.
pub fn compile(mgr: &mut BddManager, f: &Formula) -> Result<BddRef, BddError> {
    match f {
        Formula::Const(b) => Ok(BddRef::constant(*b)),
        Formula::Var(v) => mgr.var(*v),
        Formula::Not(a) => {
            let a = compile(mgr, a)?;
            mgr.mk_not(a)
        }
        Formula::And(a, b) => {
            let (a, b) = (compile(mgr, a)?, compile(mgr, b)?);
            mgr.and(a, b)
        }
        Formula::Or(a, b) => {
            let (a, b) = (compile(mgr, a)?, compile(mgr, b)?);
            mgr.or(a, b)
        }
        Formula::Xor(a, b) => {
            let (a, b) = (compile(mgr, a)?, compile(mgr, b)?);
            mgr.xor(a, b)
        }
        Formula::Implies(a, b) => {
            let (a, b) = (compile(mgr, a)?, compile(mgr, b)?);
            let na = mgr.mk_not(a)?;
            mgr.or(na, b)
        }
        Formula::Iff(a, b) => {
            let (a, b) = (compile(mgr, a)?, compile(mgr, b)?);
            let x = mgr.xor(a, b)?;
            mgr.mk_not(x)
        }
    }
}

/// `x1 <-> (x2 <-> ... (xn <-> (x1 <-> ... (x(n-1) <-> xn))))`: a chain of
/// `2n - 1` right-nested equivalences over `x1..xn, x1..xn`.
pub fn urquhart(n: u32) -> Result<Formula, FormulaError> {
    if n == 0 {
        return Err(FormulaError::SizeRange);
    }
    let mut seq = (1..=n).chain(1..=n).rev();
    let last = Formula::var(seq.next().expect("n >= 1"));
    Ok(seq.fold(last, |acc, i| Formula::iff(Formula::var(i), acc)))
}

/// Variable for "pigeon `i` sits in hole `j`", both 1-based, with `n` holes.
pub fn pigeon_var(n: u32, i: u32, j: u32) -> Formula {
    Formula::var((i - 1) * n + j)
}

/// If each of `n + 1` pigeons sits in some of `n` holes, some hole holds
/// two pigeons. Uses variables `x1..x(n(n+1))`.
pub fn pigeonhole(n: u32) -> Result<Formula, FormulaError> {
    if n == 0 {
        return Err(FormulaError::SizeRange);
    }
    let big_or = |fs: Vec<Formula>| fs.into_iter().reduce(Formula::or).expect("non-empty");
    let big_and = |fs: Vec<Formula>| fs.into_iter().reduce(Formula::and).expect("non-empty");

    let placed = big_and(
        (1..=n + 1)
            .map(|i| big_or((1..=n).map(|j| pigeon_var(n, i, j)).collect()))
            .collect(),
    );
    let mut clash = Vec::new();
    for j in 1..=n {
        for i in 1..=n + 1 {
            for k in i + 1..=n + 1 {
                clash.push(Formula::and(pigeon_var(n, i, j), pigeon_var(n, k, j)));
            }
        }
    }
    Ok(Formula::implies(placed, big_or(clash)))
}

/// Outcome of comparing two formulas on every assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    Counterexample(Env),
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }
}

/// Enumerates all `2^nvars` assignments of `x1..x(nvars)`.
pub fn truth_table_equiv(f: &Formula, g: &Formula, nvars: u32) -> Result<Equivalence, FormulaError> {
    if nvars > ORACLE_MAX_VARS {
        return Err(FormulaError::OracleLimit(nvars));
    }
    for bits in 0..1u64 << nvars {
        let env = Env::from_bits(nvars, bits);
        if eval_formula(f, &env)? != eval_formula(g, &env)? {
            return Ok(Equivalence::Counterexample(env));
        }
    }
    Ok(Equivalence::Equivalent)
}
