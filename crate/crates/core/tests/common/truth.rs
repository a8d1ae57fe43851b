//! Truth tables as bitsets over all 256 assignments of `x1..x8`.
//!
//! Assignment `a` gives `x_i` the value of bit `i - 1` of `a`, the same
//! convention as `Env::from_bits`. Everything here is computed directly from
//! the syntax tree; nothing goes through the library's evaluator.

use hashcons::formula::Formula;

pub const MAX_VARS: u32 = 8;
const ROWS: usize = 1 << MAX_VARS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Table(pub [u64; ROWS / 64]);

impl Table {
    pub const FALSE: Table = Table([0; ROWS / 64]);
    pub const TRUE: Table = Table([u64::MAX; ROWS / 64]);

    pub fn var(i: u32) -> Table {
        assert!((1..=MAX_VARS).contains(&i), "x{i} is outside the oracle's range");
        let mut t = Table::FALSE;
        for a in 0..ROWS {
            if a >> (i - 1) & 1 == 1 {
                t.0[a / 64] |= 1 << (a % 64);
            }
        }
        t
    }

    pub fn row(&self, a: usize) -> bool {
        self.0[a / 64] >> (a % 64) & 1 == 1
    }

    fn zip(self, other: Table, f: impl Fn(u64, u64) -> u64) -> Table {
        let mut out = self;
        for (o, b) in out.0.iter_mut().zip(other.0) {
            *o = f(*o, b);
        }
        out
    }

    pub fn not(self) -> Table {
        self.zip(Table::TRUE, |a, b| a ^ b)
    }

    pub fn and(self, o: Table) -> Table {
        self.zip(o, |a, b| a & b)
    }

    pub fn or(self, o: Table) -> Table {
        self.zip(o, |a, b| a | b)
    }

    pub fn xor(self, o: Table) -> Table {
        self.zip(o, |a, b| a ^ b)
    }
}

pub fn table(f: &Formula) -> Table {
    match f {
        Formula::Const(true) => Table::TRUE,
        Formula::Const(false) => Table::FALSE,
        Formula::Var(v) => Table::var(v.0),
        Formula::Not(a) => table(a).not(),
        Formula::And(a, b) => table(a).and(table(b)),
        Formula::Or(a, b) => table(a).or(table(b)),
        Formula::Xor(a, b) => table(a).xor(table(b)),
        Formula::Implies(a, b) => table(a).not().or(table(b)),
        Formula::Iff(a, b) => table(a).xor(table(b)).not(),
    }
}

/// Row `a` of the table as a list of variable values, `x1` first.
pub fn assignment(a: usize) -> Vec<bool> {
    (0..MAX_VARS).map(|i| a >> i & 1 == 1).collect()
}
