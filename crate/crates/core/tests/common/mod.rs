//! Corpus and independent oracles shared by the integration tests.

#![allow(dead_code)]

use nelson::{make_chain, product, Elem, NelsonAlgebra, Tables};

/// Chain tables written out from the definition on `{0, 1/(n-1), ..., 1}`,
/// compared as integers scaled by `n - 1`: `∼x = 1 - x`, and `x -> y` is `1`
/// when `x <= y` or `x <= 1/2`, otherwise `∼x ∨ y`.
pub fn chain_oracle(n: usize) -> Tables {
    let d = n - 1;
    let neg = |j: usize| d - j;
    let mut imp = vec![vec![0i64; n]; n];
    for (x, row) in imp.iter_mut().enumerate() {
        for (y, cell) in row.iter_mut().enumerate() {
            let v = if x <= y || 2 * x <= d { d } else { neg(x).max(y) };
            *cell = v as i64;
        }
    }
    let file = nelson::algebra::AlgebraFile {
        size: n as i64,
        top: d as i64,
        neg: (0..n).map(|j| neg(j) as i64).collect(),
        meet: (0..n).map(|x| (0..n).map(|y| x.min(y) as i64).collect()).collect(),
        join: (0..n).map(|x| (0..n).map(|y| x.max(y) as i64).collect()).collect(),
        imp,
    };
    Tables::from_file(&file).expect("well-formed chain tables")
}

pub fn chain(n: usize) -> NelsonAlgebra {
    make_chain(n).expect("n >= 2")
}

/// C2…C8, C2×C2, C5×C3, C5×C2×C2.
pub fn corpus() -> Vec<(String, NelsonAlgebra)> {
    let mut out: Vec<(String, NelsonAlgebra)> = (2..=8).map(|n| (format!("C{n}"), chain(n))).collect();
    let (c2, c3, c5) = (chain(2), chain(3), chain(5));
    out.push(("C2xC2".into(), product(&[&c2, &c2]).unwrap()));
    out.push(("C5xC3".into(), product(&[&c5, &c3]).unwrap()));
    out.push(("C5xC2xC2".into(), product(&[&c5, &c2, &c2]).unwrap()));
    out
}

/// Tables that are not Nelson algebras: C5 with its implication table
/// transposed, and C6 with the negations of 1/5 and 2/5 exchanged.
pub fn corrupted() -> Vec<(String, Tables)> {
    vec![
        ("C5 transposed ->".into(), chain(5).with_transposed_imp()),
        ("C6 swapped ~".into(), chain(6).with_swapped_neg(1, 2)),
    ]
}

/// Copy of `a` with element `x` renamed to `perm[x]`.
pub fn relabel(a: &Tables, perm: &[Elem]) -> Tables {
    let n = a.size();
    let mut inv = vec![0; n];
    for (x, &p) in perm.iter().enumerate() {
        inv[p] = x;
    }
    Tables::from_fns(
        n,
        perm[a.top()],
        |p| perm[a.neg(inv[p])],
        |p, q| perm[a.meet(inv[p], inv[q])],
        |p, q| perm[a.join(inv[p], inv[q])],
        |p, q| perm[a.imp(inv[p], inv[q])],
    )
    .expect("relabelling keeps tables well formed")
}
