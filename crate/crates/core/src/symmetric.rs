//! Generating partners for involutions of Sₙ, worked on raw permutations so
//! that degrees beyond the tabulated group cap stay reachable.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::group::backend::{format_cycles, perm_closure};

/// Largest degree handled here; 9! permutations still close in well under a second.
pub const MAX_DEGREE: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionWitness {
    pub degree: usize,
    /// Number of 2-cycles of `y`.
    pub transpositions: usize,
    pub y: String,
    /// Some `x` with `⟨x, y⟩ = Sₙ`, if one was found.
    pub x: Option<String>,
    pub candidates_tried: u64,
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// The `k`-th permutation of `0..n` in lexicographic order.
pub fn unrank(n: usize, mut k: u64) -> Box<[u8]> {
    let mut pool: Vec<u8> = (0..n as u8).collect();
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let f = factorial(i);
        out.push(pool.remove((k / f) as usize));
        k %= f;
    }
    out.into_boxed_slice()
}

/// `(1,2)(3,4)…` with `t` cycles, on `n` points.
pub fn standard_involution(n: usize, t: usize) -> Box<[u8]> {
    let mut p: Vec<u8> = (0..n as u8).collect();
    for i in 0..t {
        p.swap(2 * i, 2 * i + 1);
    }
    p.into_boxed_slice()
}

/// Whether the permutations generate the full symmetric group on `n` points.
pub fn generates_symmetric(n: usize, gens: &[Box<[u8]>]) -> bool {
    // Anything larger than half of n! is everything.
    perm_closure(n, gens, (factorial(n) / 2) as usize).is_err()
}

/// Searches for `x` with `⟨x, y⟩ = Sₙ`, `y` the standard involution with `t`
/// transpositions. Candidates are visited with a fixed stride through the
/// lexicographic order, so the result is reproducible.
pub fn find_witness(n: usize, t: usize, max_tries: u64) -> InvolutionWitness {
    assert!((2..=MAX_DEGREE).contains(&n) && (1..=n / 2).contains(&t));
    let y = standard_involution(n, t);
    let total = factorial(n);
    const STRIDE: u64 = 7919;
    let mut found = None;
    let mut tried = 0;
    for k in 0..max_tries.min(total) {
        tried += 1;
        let x = unrank(n, (k * STRIDE + 1) % total);
        if generates_symmetric(n, &[x.clone(), y.clone()]) {
            found = Some(x);
            break;
        }
    }
    InvolutionWitness {
        degree: n,
        transpositions: t,
        y: format_cycles(&y),
        x: found.map(|x| format_cycles(&x)),
        candidates_tried: tried,
    }
}

/// One witness search per involution class of Sₙ.
pub fn involution_witnesses(n: usize, max_tries: u64) -> Vec<InvolutionWitness> {
    (1..=n / 2).into_par_iter().map(|t| find_witness(n, t, max_tries)).collect()
}
