#![allow(dead_code)]

use fpp_core::{datum, NodeSet, Rational, Weight};

pub fn w(d: &str, coords: &[i64]) -> Weight {
    Weight::from_ints(&datum(d), coords).unwrap()
}

pub fn wq(d: &str, text: &str) -> Weight {
    Weight::parse(&datum(d), text).unwrap()
}

pub fn nodes(list: &[usize]) -> NodeSet {
    NodeSet::from_nodes(list.iter().copied())
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// One entry of an F4 `M_cx` pattern: a fixed value, "any integer ≥ 1" or
/// "any integer ≥ 2".
#[derive(Clone, Copy, Debug)]
pub enum Slot {
    Fixed(i64),
    Bullet,
    Star,
}

use Slot::{Bullet as B, Fixed as F, Star as S};

/// Every F4 row: the expected `I(M_cx)` and its η patterns.
pub fn f4_mcx_rows() -> Vec<(Vec<usize>, Vec<[Slot; 4]>)> {
    vec![
        (vec![], vec![[B, B, B, B]]),
        (vec![1], vec![[F(0), B, B, B]]),
        (vec![2], vec![[B, F(0), S, B]]),
        (vec![3], vec![[B, B, F(0), B]]),
        (vec![4], vec![[B, B, B, F(0)]]),
        (vec![1, 2], vec![[F(0), F(0), S, B]]),
        (vec![1, 3], vec![[F(0), B, F(0), B]]),
        (vec![1, 4], vec![[F(0), B, B, F(0)]]),
        (vec![2, 3], vec![[B, F(0), F(0), S], [B, F(0), F(1), B]]),
        (vec![2, 4], vec![[B, F(0), S, F(0)]]),
        (vec![3, 4], vec![[B, B, F(0), F(0)]]),
        (vec![1, 2, 3], vec![[F(0), F(0), F(0), S], [F(0), F(0), F(1), B]]),
        (vec![1, 2, 4], vec![[F(0), F(0), S, F(0)]]),
        (vec![1, 3, 4], vec![[F(0), B, F(0), F(0)]]),
        (vec![2, 3, 4], vec![[B, F(0), F(0), F(0)], [B, F(0), F(1), F(0)], [B, F(0), F(0), F(1)]]),
        (
            vec![1, 2, 3, 4],
            vec![[F(0), F(0), F(0), F(0)], [F(0), F(0), F(1), F(0)], [F(0), F(0), F(0), F(1)]],
        ),
    ]
}

/// Two representatives per symbol: `{1,2}` for ≥ 1 and `{2,3}` for ≥ 2.
pub fn expand(pattern: &[Slot; 4]) -> Vec<[i64; 4]> {
    let choices: Vec<Vec<i64>> = pattern
        .iter()
        .map(|s| match s {
            Slot::Fixed(v) => vec![*v],
            Slot::Bullet => vec![1, 2],
            Slot::Star => vec![2, 3],
        })
        .collect();
    let mut out = vec![[0i64; 4]];
    for (k, opts) in choices.iter().enumerate() {
        out = out
            .iter()
            .flat_map(|base| {
                opts.iter().map(move |&v| {
                    let mut e = *base;
                    e[k] = v;
                    e
                })
            })
            .collect();
    }
    out
}

/// Checks every generator of every row; returns (rows, generators, mismatches).
pub fn check_f4_table() -> (usize, usize, Vec<String>) {
    let d = datum("F4");
    let mut generators = 0;
    let mut bad = Vec::new();
    let rows = f4_mcx_rows();
    for (expected, patterns) in &rows {
        for p in patterns {
            for eta in expand(p) {
                generators += 1;
                let e = Weight::from_ints(&d, &eta).unwrap();
                let got = fpp_core::levi::compute_mcx(&e).unwrap().nodes;
                if got != nodes(expected) {
                    bad.push(format!("{eta:?}: expected {:?}, got {got}", expected));
                }
            }
        }
    }
    (rows.len(), generators, bad)
}
