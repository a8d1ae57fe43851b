//! Random formulas, equivalent rewrites of them, and proptest strategies.

use hashcons::formula::Formula;
use proptest::prelude::*;
use rand::Rng;

/// A formula with about `budget` connectives over `x1..x(nvars)`.
pub fn formula(rng: &mut impl Rng, nvars: u32, budget: u32) -> Formula {
    if budget == 0 {
        return if rng.gen_bool(0.08) {
            Formula::Const(rng.gen())
        } else {
            Formula::var(rng.gen_range(1..=nvars))
        };
    }
    if rng.gen_bool(0.15) {
        return Formula::not(formula(rng, nvars, budget - 1));
    }
    let left = rng.gen_range(0..budget);
    let (a, b) = (formula(rng, nvars, left), formula(rng, nvars, budget - 1 - left));
    match rng.gen_range(0..5) {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        2 => Formula::xor(a, b),
        3 => Formula::implies(a, b),
        _ => Formula::iff(a, b),
    }
}

/// A syntactically different formula with the same truth table.
pub fn rewrite(rng: &mut impl Rng, f: &Formula) -> Formula {
    use Formula::*;
    let flip = rng.gen_bool(0.5);
    match f {
        Const(b) => {
            if flip {
                Formula::not(Const(!b))
            } else {
                Const(*b)
            }
        }
        Var(_) => match rng.gen_range(0..3) {
            0 => f.clone(),
            1 => Formula::not(Formula::not(f.clone())),
            _ => Formula::and(f.clone(), Const(true)),
        },
        Not(a) => {
            let a = rewrite(rng, a);
            if flip {
                Formula::xor(a, Const(true))
            } else {
                Formula::not(a)
            }
        }
        And(a, b) => {
            let (a, b) = (rewrite(rng, a), rewrite(rng, b));
            if flip {
                Formula::not(Formula::or(Formula::not(a), Formula::not(b)))
            } else {
                Formula::and(b, a)
            }
        }
        Or(a, b) => {
            let (a, b) = (rewrite(rng, a), rewrite(rng, b));
            if flip {
                Formula::implies(Formula::not(a), b)
            } else {
                Formula::or(b, a)
            }
        }
        Xor(a, b) => {
            let (a, b) = (rewrite(rng, a), rewrite(rng, b));
            if flip {
                Formula::not(Formula::iff(a, b))
            } else {
                Formula::xor(b, a)
            }
        }
        Implies(a, b) => {
            let (a, b) = (rewrite(rng, a), rewrite(rng, b));
            if flip {
                Formula::or(Formula::not(a), b)
            } else {
                Formula::implies(Formula::not(b), Formula::not(a))
            }
        }
        Iff(a, b) => {
            let (a2, b2) = (rewrite(rng, a), rewrite(rng, b));
            if flip {
                Formula::and(
                    Formula::implies(a2, b2),
                    Formula::implies(rewrite(rng, b), rewrite(rng, a)),
                )
            } else {
                Formula::iff(b2, a2)
            }
        }
    }
}

/// Replaces one random leaf by a random literal. Usually, not always,
/// changes the function.
pub fn mutate(rng: &mut impl Rng, f: &Formula, nvars: u32) -> Formula {
    let leaves = count_leaves(f);
    let target = rng.gen_range(0..leaves);
    let replacement = Formula::var(rng.gen_range(1..=nvars));
    replace_leaf(f, &mut { target }, &replacement)
}

fn count_leaves(f: &Formula) -> usize {
    use Formula::*;
    match f {
        Const(_) | Var(_) => 1,
        Not(a) => count_leaves(a),
        And(a, b) | Or(a, b) | Xor(a, b) | Implies(a, b) | Iff(a, b) => {
            count_leaves(a) + count_leaves(b)
        }
    }
}

fn replace_leaf(f: &Formula, target: &mut usize, with: &Formula) -> Formula {
    use Formula::*;
    let bin = |a: &Formula, b: &Formula, t: &mut usize| (replace_leaf(a, t, with), replace_leaf(b, t, with));
    match f {
        Const(_) | Var(_) => {
            let hit = *target == 0;
            *target = target.wrapping_sub(1);
            if hit {
                with.clone()
            } else {
                f.clone()
            }
        }
        Not(a) => Formula::not(replace_leaf(a, target, with)),
        And(a, b) => {
            let (a, b) = bin(a, b, target);
            Formula::and(a, b)
        }
        Or(a, b) => {
            let (a, b) = bin(a, b, target);
            Formula::or(a, b)
        }
        Xor(a, b) => {
            let (a, b) = bin(a, b, target);
            Formula::xor(a, b)
        }
        Implies(a, b) => {
            let (a, b) = bin(a, b, target);
            Formula::implies(a, b)
        }
        Iff(a, b) => {
            let (a, b) = bin(a, b, target);
            Formula::iff(a, b)
        }
    }
}

/// A pair of formulas over at most 8 variables, mixing equivalent rewrites,
/// near misses and unrelated formulas.
pub fn formula_pair(rng: &mut impl Rng) -> (Formula, Formula) {
    let nvars = rng.gen_range(1..=8);
    let budget = rng.gen_range(0..14);
    let f = formula(rng, nvars, budget);
    let g = match rng.gen_range(0..4) {
        0 | 1 => rewrite(rng, &f),
        2 => {
            let r = rewrite(rng, &f);
            mutate(rng, &r, nvars)
        }
        _ => {
            let small = rng.gen_range(1..=nvars.min(3));
            let budget = rng.gen_range(0..8);
            formula(rng, small, budget)
        }
    };
    (f, g)
}

pub fn arb_formula(nvars: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => any::<bool>().prop_map(Formula::Const),
        8 => (1..=nvars).prop_map(Formula::var),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::xor(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
        ]
    })
}
