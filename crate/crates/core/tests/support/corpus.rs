//! Seeded random OpenMath trees shared by the integration and acceptance
//! suites. Every generated tree is representable in infix text and XML.

#![allow(dead_code)]

use std::collections::BTreeSet;

use cpskg::openmath::OmExpr;
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x6f6d_7264_6600_0001;
pub const CORPUS_SIZE: usize = 500;

const NAMES: &[&str] = &["x", "y", "z", "t", "Q1", "Qle1", "xR_dot", "beta", "V0", "p_1", "A"];

const FIXED_ARITY: &[(&str, &str, usize)] = &[
    ("arith1", "minus", 2),
    ("arith1", "divide", 2),
    ("arith1", "power", 2),
    ("arith1", "unary_minus", 1),
    ("relation1", "eq", 2),
    ("transc1", "sin", 1),
    ("transc1", "cos", 1),
    ("transc1", "exp", 1),
    ("transc1", "ln", 1),
    ("weylalgebra1", "diff", 2),
];

const VARIADIC: &[(&str, &str)] = &[
    ("arith1", "plus"),
    ("arith1", "times"),
    ("weylalgebra1", "partialdiff"),
    ("stats1", "mean"),
    ("custom1", "f"),
    ("calculus1", "int"),
];

pub fn corpus() -> Vec<OmExpr> {
    corpus_with(SEED, CORPUS_SIZE)
}

pub fn corpus_with(seed: u64, n: usize) -> Vec<OmExpr> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| tree(&mut rng, 5)).collect()
}

pub fn tree(rng: &mut ChaCha8Rng, depth: u32) -> OmExpr {
    if depth == 0 || rng.gen_bool(0.3) {
        return leaf(rng);
    }
    let roll: f64 = rng.gen();
    if roll < 0.05 {
        // operator position holding a non-symbol
        let op = if rng.gen_bool(0.5) { OmExpr::var(*NAMES.choose(rng).unwrap()) } else { tree(rng, 1) };
        let n = rng.gen_range(0..3);
        return OmExpr::apply(op, (0..n).map(|_| tree(rng, depth - 1)).collect());
    }
    if roll < 0.55 {
        let (cd, name, arity) = *FIXED_ARITY.choose(rng).unwrap();
        // occasionally the wrong arity, which has to survive as well
        let n = if rng.gen_bool(0.05) { rng.gen_range(0..4) } else { arity };
        return OmExpr::call(cd, name, (0..n).map(|_| tree(rng, depth - 1)).collect());
    }
    let (cd, name) = *VARIADIC.choose(rng).unwrap();
    let n = rng.gen_range(0..5);
    OmExpr::call(cd, name, (0..n).map(|_| tree(rng, depth - 1)).collect())
}

fn leaf(rng: &mut ChaCha8Rng) -> OmExpr {
    let roll: f64 = rng.gen();
    if roll < 0.5 {
        OmExpr::var(*NAMES.choose(rng).unwrap())
    } else if roll < 0.75 {
        if rng.gen_bool(0.1) {
            let big: BigInt = BigInt::from(rng.gen::<u64>()) * BigInt::from(rng.gen::<u64>()) * rng.gen_range(-1..=1);
            OmExpr::Integer(big)
        } else {
            OmExpr::int(rng.gen_range(-20..=20))
        }
    } else if roll < 0.95 {
        let mantissa: f64 = rng.gen_range(-1000.0..1000.0);
        let exp = rng.gen_range(-8..8);
        OmExpr::float(mantissa * 10f64.powi(exp))
    } else {
        let (cd, name) = *[("nums1", "pi"), ("nums1", "e"), ("arith1", "plus")].choose(rng).unwrap();
        OmExpr::symbol(cd, name)
    }
}

/// Node counts for the triple-count law, computed straight from the tree.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Counts {
    pub applications: usize,
    pub arguments: usize,
    pub variables: usize,
    pub literals: usize,
}

impl Counts {
    pub fn expected_triples(&self) -> usize {
        3 * self.applications + 2 * self.arguments + 2 * self.variables + 2 * self.literals
    }
}

pub fn counts(expr: &OmExpr) -> Counts {
    fn go(e: &OmExpr, c: &mut Counts, names: &mut BTreeSet<String>) {
        match e {
            OmExpr::Application { operator, arguments } => {
                c.applications += 1;
                c.arguments += arguments.len();
                go(operator, c, names);
                for a in arguments {
                    go(a, c, names);
                }
            }
            OmExpr::Variable(n) => {
                names.insert(n.clone());
            }
            OmExpr::Integer(_) | OmExpr::Float(_) => c.literals += 1,
            OmExpr::Symbol { .. } => {}
        }
    }
    let mut c = Counts::default();
    let mut names = BTreeSet::new();
    go(expr, &mut c, &mut names);
    c.variables = names.len();
    c
}
