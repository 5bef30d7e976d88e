//! Dynamic programming over a path-decomposition.
//!
//! For bag `X_i` the table maps every list colouring `g` of `X_i` (respecting
//! `H` on edges inside the bag) to the semiring sum over colourings of
//! `X_1 ∪ ... ∪ X_i` that extend `g`. Moving to `X_{i+1}`, the table is first
//! summed down to its restriction on `X_i ∩ X_{i+1}`; each restricted entry is
//! then extended by colouring the introduced vertices `X_{i+1} \ X_i`. An
//! introduced vertex has all its earlier neighbours inside `X_i ∩ X_{i+1}`, so
//! checking edges inside the new bag covers every edge exactly when its later
//! endpoint appears. Only two tables are alive at any time.

use std::collections::BTreeMap;

use crate::decomposition::{
    path_decomposition_from_uncle_tree, uncle_tree, verify_path_decomposition, PathDecomposition,
};
use crate::error::{check_lists, SolveError};
use crate::graph::{connected_components, Instance, TargetGraph};
use crate::semiring::Semiring;

/// Table keyed by the colours of a bag's vertices, in ascending vertex order.
type Table<E> = BTreeMap<Vec<usize>, E>;

pub fn dp_solve<S: Semiring>(
    inst: &Instance,
    target: &TargetGraph,
    pd: &PathDecomposition,
    semiring: &S,
) -> Result<S::Elem, SolveError> {
    check_lists(inst, target.k())?;
    if !verify_path_decomposition(&inst.graph, pd) {
        return Err(SolveError::InvalidDecomposition);
    }
    if inst.n() == 0 {
        return Ok(semiring.one());
    }
    let mut prev_bag: Vec<usize> = Vec::new();
    let mut table: Table<S::Elem> = BTreeMap::from([(Vec::new(), semiring.one())]);
    for bag in &pd.bags {
        let mut bag = bag.clone();
        bag.sort_unstable();
        bag.dedup();
        let shared_pos: Vec<usize> = bag.iter().filter_map(|v| prev_bag.binary_search(v).ok()).collect();
        let shared: Vec<usize> = shared_pos.iter().map(|&i| prev_bag[i]).collect();
        let fresh: Vec<usize> = bag.iter().copied().filter(|v| prev_bag.binary_search(v).is_err()).collect();

        let mut grouped: Table<S::Elem> = BTreeMap::new();
        for (key, val) in &table {
            let restricted: Vec<usize> = shared_pos.iter().map(|&i| key[i]).collect();
            match grouped.get_mut(&restricted) {
                Some(acc) => semiring.add_assign(acc, val),
                None => {
                    grouped.insert(restricted, val.clone());
                }
            }
        }
        drop(table);

        let mut next: Table<S::Elem> = BTreeMap::new();
        let mut ext =
            Extender { inst, target, semiring, bag: &bag, fresh: &fresh, assigned: Vec::new(), out: &mut next };
        for (restricted, acc) in grouped {
            if semiring.is_zero(&acc) {
                continue;
            }
            ext.assigned.clear();
            ext.assigned.extend(shared.iter().copied().zip(restricted));
            ext.extend(0, acc);
        }
        table = next;
        prev_bag = bag;
    }
    let mut total = semiring.zero();
    for val in table.values() {
        semiring.add_assign(&mut total, val);
    }
    Ok(total)
}

struct Extender<'a, S: Semiring> {
    inst: &'a Instance,
    target: &'a TargetGraph,
    semiring: &'a S,
    bag: &'a [usize],
    fresh: &'a [usize],
    assigned: Vec<(usize, usize)>,
    out: &'a mut Table<S::Elem>,
}

impl<S: Semiring> Extender<'_, S> {
    fn extend(&mut self, j: usize, value: S::Elem) {
        if j == self.fresh.len() {
            let key: Vec<usize> = self
                .bag
                .iter()
                .map(|v| self.assigned.iter().find(|(u, _)| u == v).expect("bag vertex coloured").1)
                .collect();
            self.out.insert(key, value);
            return;
        }
        let v = self.fresh[j];
        let g = &self.inst.graph;
        for &c in self.inst.lists.get(v) {
            let fits = self.assigned.iter().all(|&(u, cu)| !g.has_edge(u, v) || self.target.adjacent(cu, c));
            if !fits {
                continue;
            }
            let w = self.inst.weights.get(v, c);
            let next = self.semiring.mul(&value, &self.semiring.atom(v, c, &w));
            self.assigned.push((v, c));
            self.extend(j + 1, next);
            self.assigned.pop();
        }
    }
}

/// Splits into components, builds an uncle-tree path-decomposition of each
/// (rooted at its smallest vertex) and multiplies the per-component results.
pub fn dp_solve_by_components<S: Semiring>(
    inst: &Instance,
    target: &TargetGraph,
    semiring: &S,
) -> Result<S::Elem, SolveError> {
    check_lists(inst, target.k())?;
    let mut total = semiring.one();
    for comp in connected_components(&inst.graph) {
        let (sub, _) = inst.restrict(&comp);
        let tree = uncle_tree(&sub.graph, 0)?;
        let pd = path_decomposition_from_uncle_tree(&sub.graph, &tree)?;
        let value = dp_solve(&sub, target, &pd, semiring)?;
        total = semiring.mul(&total, &value);
        if semiring.is_zero(&total) {
            break;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ListAssignment, SimpleGraph, WeightTable};
    use crate::semiring::{CountSemiring, PartitionPolynomial, PolynomialSemiring};
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn p3_into_k2() {
        let p3 = SimpleGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let inst = Instance::unweighted(p3, 2);
        let pd = PathDecomposition::new(vec![vec![0, 1], vec![1, 2]]);
        let p = dp_solve(&inst, &TargetGraph::complete(2), &pd, &PolynomialSemiring { vars: 2 }).unwrap();
        assert_eq!(p, PartitionPolynomial::from_terms(2, [(vec![2, 1], q(1)), (vec![1, 2], q(1))]));
    }

    #[test]
    fn triangle_single_bag() {
        let k3 = SimpleGraph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let inst = Instance::unweighted(k3, 3);
        let n = dp_solve(&inst, &TargetGraph::complete(3), &PathDecomposition::trivial(3), &CountSemiring).unwrap();
        assert_eq!(n, q(6));
    }

    #[test]
    fn weighted_single_vertex() {
        let mut weights = WeightTable::new();
        weights.set(0, 0, q(3));
        let lists = ListAssignment::new(vec![vec![0]], 2).unwrap();
        let inst = Instance::new(SimpleGraph::new(1), lists, weights).unwrap();
        let p =
            dp_solve(&inst, &TargetGraph::complete(2), &PathDecomposition::trivial(1), &PolynomialSemiring { vars: 2 })
                .unwrap();
        assert_eq!(p, PartitionPolynomial::monomial(2, 0, q(3)));
    }

    #[test]
    fn loops_allow_equal_neighbours() {
        // H: a - b, b - b; an edge may map to (b, b) but not (a, a)
        let h = crate::graph::TargetGraph::independent_set_target();
        let inst = Instance::unweighted(SimpleGraph::from_edges(2, &[(0, 1)]).unwrap(), 2);
        let p = dp_solve(&inst, &h, &PathDecomposition::trivial(2), &PolynomialSemiring { vars: 2 }).unwrap();
        assert_eq!(p, PartitionPolynomial::from_terms(2, [(vec![1, 1], q(2)), (vec![0, 2], q(1))]));
    }

    #[test]
    fn rejects_bad_inputs() {
        let edge = SimpleGraph::from_edges(2, &[(0, 1)]).unwrap();
        let inst = Instance::unweighted(edge, 2);
        let pd = PathDecomposition::new(vec![vec![0], vec![1]]);
        assert_eq!(
            dp_solve(&inst, &TargetGraph::complete(2), &pd, &CountSemiring),
            Err(SolveError::InvalidDecomposition)
        );
        let inst = Instance::unweighted(SimpleGraph::new(1), 3);
        assert!(matches!(
            dp_solve(&inst, &TargetGraph::complete(2), &PathDecomposition::trivial(1), &CountSemiring),
            Err(SolveError::UnknownColour { .. })
        ));
    }

    #[test]
    fn empty_graph_and_empty_list() {
        let inst = Instance::unweighted(SimpleGraph::new(0), 2);
        assert_eq!(
            dp_solve(&inst, &TargetGraph::complete(2), &PathDecomposition::new(vec![]), &CountSemiring),
            Ok(q(1))
        );
        let lists = ListAssignment::new(vec![vec![0, 1], vec![]], 2).unwrap();
        let inst = Instance::new(SimpleGraph::new(2), lists, WeightTable::new()).unwrap();
        assert_eq!(dp_solve_by_components(&inst, &TargetGraph::complete(2), &CountSemiring), Ok(q(0)));
    }

    #[test]
    fn wide_bag_smoke() {
        // K_8 minus a perfect matching, single bag of 8 vertices, |H| = 4
        let mut g = SimpleGraph::new(8);
        for u in 0..8 {
            for v in u + 1..8 {
                if v != u + 4 {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        let inst = Instance::unweighted(g, 4);
        // each colour class is exactly one non-adjacent pair {i, i+4}: 4! assignments
        let n = dp_solve(&inst, &TargetGraph::complete(4), &PathDecomposition::trivial(8), &CountSemiring).unwrap();
        assert_eq!(n, q(24));
    }
}
