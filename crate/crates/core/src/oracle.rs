//! Brute-force reference values: enumerate every map in `∏_v L_v` and keep
//! the homomorphisms. Deliberately unoptimised and sharing nothing with the
//! solvers beyond the input types.

use thiserror::Error;

use crate::graph::{Instance, SimpleGraph, TargetGraph};
use crate::semiring::Semiring;

pub const DEFAULT_CAP: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration needs more than {cap} maps")]
    CapExceeded { cap: u64 },
    #[error("list of vertex {vertex} names colour {colour}, target has {k}")]
    UnknownColour { vertex: usize, colour: usize, k: usize },
}

fn map_count(sizes: impl Iterator<Item = usize>, cap: u64) -> Result<u64, OracleError> {
    let mut total: u64 = 1;
    for s in sizes {
        if s == 0 {
            return Ok(0);
        }
        total = total.checked_mul(s as u64).filter(|&t| t <= cap).ok_or(OracleError::CapExceeded { cap })?;
    }
    Ok(total)
}

/// Advances `digits` (with per-position radices) like an odometer; false on wrap-around.
fn advance(digits: &mut [usize], radices: &[usize]) -> bool {
    for (d, &r) in digits.iter_mut().zip(radices) {
        *d += 1;
        if *d < r {
            return true;
        }
        *d = 0;
    }
    false
}

/// `⊕_f ⊗_v atom(v, f(v), w_{v,f(v)})` over all list homomorphisms `f`.
pub fn brute_force_solve<S: Semiring>(
    inst: &Instance,
    target: &TargetGraph,
    semiring: &S,
    cap: u64,
) -> Result<S::Elem, OracleError> {
    let n = inst.n();
    for v in 0..n {
        if let Some(&c) = inst.lists.get(v).iter().find(|&&c| c >= target.k()) {
            return Err(OracleError::UnknownColour { vertex: v, colour: c, k: target.k() });
        }
    }
    let radices: Vec<usize> = (0..n).map(|v| inst.lists.get(v).len()).collect();
    if map_count(radices.iter().copied(), cap)? == 0 {
        return Ok(semiring.zero());
    }
    let edges: Vec<(usize, usize)> = inst.graph.edges().collect();
    let mut digits = vec![0usize; n];
    let mut total = semiring.zero();
    loop {
        let f: Vec<usize> = (0..n).map(|v| inst.lists.get(v)[digits[v]]).collect();
        if edges.iter().all(|&(u, v)| target.adjacent(f[u], f[v])) {
            let mut term = semiring.one();
            for (v, &c) in f.iter().enumerate() {
                term = semiring.mul(&term, &semiring.atom(v, c, &inst.weights.get(v, c)));
            }
            total = semiring.add(&total, &term);
        }
        if !advance(&mut digits, &radices) {
            break;
        }
    }
    Ok(total)
}

/// Number of proper `k`-colourings of `g`.
pub fn brute_force_colouring_count(g: &SimpleGraph, k: usize, cap: u64) -> Result<u64, OracleError> {
    let n = g.n();
    if map_count(std::iter::repeat_n(k, n), cap)? == 0 {
        return Ok(0);
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let radices = vec![k; n];
    let mut colour = vec![0usize; n];
    let mut count = 0;
    loop {
        if edges.iter().all(|&(u, v)| colour[u] != colour[v]) {
            count += 1;
        }
        if !advance(&mut colour, &radices) {
            break;
        }
    }
    Ok(count)
}

/// `[i_0, i_1, ...]` where `i_s` counts independent sets of size `s`, by subset enumeration.
pub fn brute_force_independence_polynomial(g: &SimpleGraph) -> Vec<u64> {
    let n = g.n();
    assert!(n < 64, "subset enumeration limited to fewer than 64 vertices");
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut counts = vec![0u64; n + 1];
    for mask in 0u64..(1u64 << n) {
        if edges.iter().all(|&(u, v)| mask >> u & 1 == 0 || mask >> v & 1 == 0) {
            counts[mask.count_ones() as usize] += 1;
        }
    }
    while counts.len() > 1 && counts.last() == Some(&0) {
        counts.pop();
    }
    counts
}
