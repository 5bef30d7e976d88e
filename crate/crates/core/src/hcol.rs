//! Branch-and-reduce computation of list `H`-colouring functions.
//!
//! Each recursion node applies the first matching rule:
//!
//! 1. at most `n0` vertices: exhaustive enumeration;
//! 2. an empty list: semiring zero;
//! 3. a singleton list `{c}` (smallest such vertex): colour it, shrink its
//!    neighbours' lists to `N_H(c)` and recurse on `G - v`;
//! 4. disconnected: product over components;
//! 5. maximum degree at most `scale * sqrt(n ln n / t)`: uncle-tree
//!    path-decomposition and dynamic programming;
//! 6. otherwise branch on every colour of a maximum-degree vertex.
//!
//! When every two colours of `H` share at most one common neighbour, rule 6
//! removes more than `d(v)/2` list entries in all branches but one, which is
//! what keeps the recursion subexponential on `P_t`-free graphs.

use crate::decomposition::{path_decomposition_from_uncle_tree, uncle_tree};
use crate::dp::dp_solve;
use crate::error::{check_lists, SolveError};
use crate::graph::{check_common_neighbourhood_condition, connected_components, Instance, TargetGraph};
use crate::semiring::Semiring;

#[derive(Clone, Debug, PartialEq)]
pub struct HColConfig {
    /// Instances with at most this many vertices are enumerated exhaustively.
    pub n0: usize,
    /// Path parameter of the `P_t`-free class; only moves the rule 5 threshold.
    pub t: usize,
    pub degree_threshold_scale: f64,
    /// Check the branching invariants at every rule 6 node.
    pub debug_checks: bool,
    /// Log one line per recursion node to standard error.
    pub trace: bool,
}

impl Default for HColConfig {
    fn default() -> Self {
        HColConfig { n0: 10, t: 6, degree_threshold_scale: 1.0, debug_checks: false, trace: false }
    }
}

impl HColConfig {
    pub fn validate(&self) -> Result<(), SolveError> {
        if self.n0 < 1 {
            return Err(SolveError::Config("n0 must be at least 1".into()));
        }
        if self.t < 4 {
            return Err(SolveError::Config("t must be at least 4".into()));
        }
        if !(self.degree_threshold_scale >= 0.0 && self.degree_threshold_scale.is_finite()) {
            return Err(SolveError::Config("degree threshold scale must be finite and nonnegative".into()));
        }
        Ok(())
    }
}

/// Shape of the recursion tree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecursionStats {
    pub nodes: u64,
    pub max_depth: usize,
    /// How often each rule (index 0 = rule 1) ended a node.
    pub rule_counts: [u64; 6],
    /// Rule 6 nodes at which the neighbourhood-list property was checked.
    pub lemma3_checks: u64,
}

/// `scale * sqrt(n ln n / t)`, zero for `n <= 1`.
pub fn degree_threshold(n: usize, t: usize, scale: f64) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    let n = n as f64;
    scale * (n * n.ln() / t as f64).sqrt()
}

/// `2^(c sqrt(w ln w))`, the node-count envelope for instances of weight `w`.
pub fn recursion_bound(w: usize, c: f64) -> Result<f64, SolveError> {
    if w < 2 {
        return Err(SolveError::Config(format!("recursion bound needs weight at least 2, got {w}")));
    }
    let w = w as f64;
    Ok((c * (w * w.ln()).sqrt()).exp2())
}

/// `4 sqrt(t |V(H)|) / ln 2`.
pub fn recursion_bound_constant(t: usize, colours: usize) -> f64 {
    4.0 * ((t * colours) as f64).sqrt() / std::f64::consts::LN_2
}

pub fn hcol<S: Semiring>(
    inst: &Instance,
    target: &TargetGraph,
    cfg: &HColConfig,
    semiring: &S,
) -> Result<(S::Elem, RecursionStats), SolveError> {
    cfg.validate()?;
    check_lists(inst, target.k())?;
    let nice_target = check_common_neighbourhood_condition(target);
    if !nice_target {
        log::warn!("target has two colours sharing several common neighbours; running time guarantee does not apply");
    }
    let mut solver = Solver { target, cfg, semiring, nice_target, stats: RecursionStats::default() };
    let value = solver.solve(inst.clone(), 0)?;
    Ok((value, solver.stats))
}

struct Solver<'a, S: Semiring> {
    target: &'a TargetGraph,
    cfg: &'a HColConfig,
    semiring: &'a S,
    nice_target: bool,
    stats: RecursionStats,
}

impl<S: Semiring> Solver<'_, S> {
    fn fire(&mut self, rule: usize, inst: &Instance, depth: usize) {
        self.stats.rule_counts[rule - 1] += 1;
        if self.cfg.trace {
            eprintln!("hcol depth={depth} n={} weight={} rule={rule}", inst.n(), inst.weight());
        }
    }

    fn solve(&mut self, inst: Instance, depth: usize) -> Result<S::Elem, SolveError> {
        let s = self.semiring;
        self.stats.nodes += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let n = inst.n();

        if n <= self.cfg.n0 {
            self.fire(1, &inst, depth);
            return Ok(exhaustive(&inst, self.target, s));
        }

        if inst.lists.as_slice().iter().any(Vec::is_empty) {
            self.fire(2, &inst, depth);
            return Ok(s.zero());
        }

        if let Some(v) = (0..n).find(|&v| inst.lists.get(v).len() == 1) {
            self.fire(3, &inst, depth);
            let c = inst.lists.get(v)[0];
            let atom = s.atom(v, c, &inst.weights.get(v, c));
            let child = colour_vertex(&inst, v, c, self.target);
            let rest = self.solve(child, depth + 1)?;
            return Ok(s.mul(&atom, &rest));
        }

        let components = connected_components(&inst.graph);
        if components.len() > 1 {
            self.fire(4, &inst, depth);
            let mut total = s.one();
            for comp in components {
                let (sub, _) = inst.restrict(&comp);
                let value = self.solve(sub, depth + 1)?;
                total = s.mul(&total, &value);
                if s.is_zero(&total) {
                    break;
                }
            }
            return Ok(total);
        }

        let max_degree = inst.graph.max_degree();
        if max_degree as f64 <= degree_threshold(n, self.cfg.t, self.cfg.degree_threshold_scale) {
            self.fire(5, &inst, depth);
            if !inst.graph.is_connected() {
                return Err(SolveError::Invariant("rule 5 reached on a disconnected graph".into()));
            }
            let tree = uncle_tree(&inst.graph, 0)?;
            let pd = path_decomposition_from_uncle_tree(&inst.graph, &tree)?;
            return dp_solve(&inst, self.target, &pd, s);
        }

        self.fire(6, &inst, depth);
        let v = (0..n).find(|&v| inst.graph.degree(v) == max_degree).expect("nonempty graph");
        if self.cfg.debug_checks && self.nice_target {
            self.check_neighbourhood_lists(&inst, v)?;
        }
        let mut total = s.zero();
        for &c in inst.lists.get(v) {
            let child = colour_vertex(&inst, v, c, self.target);
            if self.cfg.debug_checks && child.weight() + 2 > inst.weight() {
                return Err(SolveError::Invariant(format!(
                    "branch on vertex {v} colour {c} lowered weight only from {} to {}",
                    inst.weight(),
                    child.weight()
                )));
            }
            let atom = s.atom(v, c, &inst.weights.get(v, c));
            let rest = self.solve(child, depth + 1)?;
            s.add_assign(&mut total, &s.mul(&atom, &rest));
        }
        Ok(total)
    }

    /// In a reduced instance at most one colour `c` of `L_v` can have more
    /// than `d(v)/2` neighbours whose whole list lies inside `N_H(c)`.
    fn check_neighbourhood_lists(&mut self, inst: &Instance, v: usize) -> Result<(), SolveError> {
        self.stats.lemma3_checks += 1;
        let d = inst.graph.degree(v);
        let heavy: Vec<usize> = inst
            .lists
            .get(v)
            .iter()
            .copied()
            .filter(|&c| {
                let confined = inst
                    .graph
                    .neighbours(v)
                    .iter()
                    .filter(|&&u| inst.lists.get(u).iter().all(|&x| self.target.adjacent(c, x)))
                    .count();
                2 * confined > d
            })
            .collect();
        if heavy.len() > 1 {
            return Err(SolveError::Invariant(format!(
                "vertex {v} of degree {d}: colours {heavy:?} each confine more than half the neighbourhood"
            )));
        }
        Ok(())
    }
}

/// `G - v` after fixing `v` to `c`: each neighbour keeps only colours adjacent to `c`.
fn colour_vertex(inst: &Instance, v: usize, c: usize, target: &TargetGraph) -> Instance {
    let mut shrunk = inst.clone();
    for &u in inst.graph.neighbours(v) {
        let kept = inst.lists.get(u).iter().copied().filter(|&x| target.adjacent(c, x)).collect();
        shrunk.lists.set(u, kept);
    }
    shrunk.delete_vertex(v).expect("vertex in range").0
}

/// Sum-product over all list colourings, vertex by vertex with edge checks
/// against already coloured neighbours.
fn exhaustive<S: Semiring>(inst: &Instance, target: &TargetGraph, s: &S) -> S::Elem {
    fn go<S: Semiring>(inst: &Instance, target: &TargetGraph, s: &S, colour: &mut Vec<usize>) -> S::Elem {
        let v = colour.len();
        if v == inst.n() {
            return s.one();
        }
        let mut total = s.zero();
        for &c in inst.lists.get(v) {
            let ok = inst.graph.neighbours(v).iter().filter(|&&u| u < v).all(|&u| target.adjacent(colour[u], c));
            if !ok {
                continue;
            }
            colour.push(c);
            let rest = go(inst, target, s, colour);
            colour.pop();
            if !s.is_zero(&rest) {
                s.add_assign(&mut total, &s.mul(&s.atom(v, c, &inst.weights.get(v, c)), &rest));
            }
        }
        total
    }
    go(inst, target, s, &mut Vec::with_capacity(inst.n()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::dp_solve_by_components;
    use crate::graph::{ListAssignment, SimpleGraph, WeightTable};
    use crate::oracle::{brute_force_solve, DEFAULT_CAP};
    use crate::semiring::{CountSemiring, PartitionPolynomial, PolynomialSemiring};
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn configs() -> Vec<HColConfig> {
        let mut out = Vec::new();
        for n0 in [1, 4, 10] {
            for scale in [0.0, 1.0, 10.0] {
                out.push(HColConfig { n0, t: 4, degree_threshold_scale: scale, debug_checks: true, trace: false });
            }
        }
        out
    }

    fn cycle(n: usize) -> SimpleGraph {
        SimpleGraph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn triangle_and_c5_counts() {
        for cfg in configs() {
            let k3 = Instance::unweighted(cycle(3), 3);
            assert_eq!(hcol(&k3, &TargetGraph::complete(3), &cfg, &CountSemiring).unwrap().0, q(6));
            let c5 = Instance::unweighted(cycle(5), 3);
            assert_eq!(hcol(&c5, &TargetGraph::complete(3), &cfg, &CountSemiring).unwrap().0, q(30));
        }
    }

    #[test]
    fn forced_vertex_cascades() {
        let p3 = SimpleGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let lists = ListAssignment::new(vec![vec![0], vec![0, 1], vec![0, 1]], 2).unwrap();
        let inst = Instance::new(p3, lists, WeightTable::new()).unwrap();
        let cfg = HColConfig { n0: 1, ..HColConfig::default() };
        let (p, stats) = hcol(&inst, &TargetGraph::complete(2), &cfg, &PolynomialSemiring { vars: 2 }).unwrap();
        assert_eq!(p, PartitionPolynomial::from_terms(2, [(vec![2, 1], q(1))]));
        // rule 3 on vertex 0, then on the forced middle vertex, then one vertex left
        assert_eq!(stats.rule_counts, [1, 0, 2, 0, 0, 0]);
        assert_eq!(stats.nodes, 3);
        assert_eq!(stats.max_depth, 2);
    }

    #[test]
    fn independence_polynomial_of_k4() {
        let mut k4 = SimpleGraph::new(4);
        for u in 0..4 {
            for v in u + 1..4 {
                k4.add_edge(u, v).unwrap();
            }
        }
        let h = TargetGraph::independent_set_target();
        for cfg in configs() {
            let (p, _) = hcol(&Instance::unweighted(k4.clone(), 2), &h, &cfg, &PolynomialSemiring { vars: 2 }).unwrap();
            assert_eq!(p.substitute_one(1).univariate(0).unwrap(), vec![q(1), q(4)]);
        }
    }

    #[test]
    fn empty_graph_is_one() {
        let inst = Instance::unweighted(SimpleGraph::new(0), 2);
        let cfg = HColConfig { n0: 1, ..HColConfig::default() };
        assert_eq!(hcol(&inst, &TargetGraph::complete(2), &cfg, &CountSemiring).unwrap().0, q(1));
    }

    #[test]
    fn stats_add_up() {
        let g = SimpleGraph::from_edges(7, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (1, 2), (4, 5)]).unwrap();
        let cfg = HColConfig { n0: 1, t: 4, degree_threshold_scale: 1.0, debug_checks: true, trace: false };
        let (n, stats) = hcol(&Instance::unweighted(g, 3), &TargetGraph::complete(3), &cfg, &CountSemiring).unwrap();
        assert_eq!(stats.rule_counts.iter().sum::<u64>(), stats.nodes);
        assert!(stats.rule_counts[5] >= 1, "the hub must be branched on");
        assert!(stats.lemma3_checks >= 1);
        // hub 3 ways; the edges 1-2 and 4-5 take 2 ways each, vertices 3 and 6 likewise
        assert_eq!(n, q(48));
    }

    #[test]
    fn config_validation() {
        let inst = Instance::unweighted(SimpleGraph::new(1), 1);
        let h = TargetGraph::complete(1);
        assert!(hcol(&inst, &h, &HColConfig { n0: 0, ..HColConfig::default() }, &CountSemiring).is_err());
        assert!(hcol(&inst, &h, &HColConfig { t: 3, ..HColConfig::default() }, &CountSemiring).is_err());
    }

    #[test]
    fn threshold_values() {
        assert_eq!(degree_threshold(1, 4, 1.0), 0.0);
        let expected = (55.0f64 * 55.0f64.ln() / 4.0).sqrt();
        assert!((degree_threshold(55, 4, 1.0) - expected).abs() < 1e-6);
        assert!((degree_threshold(55, 4, 1.0) - 7.42).abs() < 0.01);
        assert_eq!(degree_threshold(55, 4, 0.0), 0.0);
    }

    #[test]
    fn bound_values() {
        let b = recursion_bound(2, 1.0).unwrap();
        assert!((b - (2.0f64 * 2.0f64.ln()).sqrt().exp2()).abs() < 1e-12);
        assert!((b - 2.26).abs() < 0.01);
        assert_eq!(recursion_bound(17, 0.0).unwrap(), 1.0);
        assert!(recursion_bound(1, 1.0).is_err());
        let mut prev = recursion_bound(2, 1.0).unwrap();
        for w in 3..=1000 {
            let cur = recursion_bound(w, 1.0).unwrap();
            assert!(cur >= prev);
            prev = cur;
        }
    }

    fn arb_instance() -> impl Strategy<Value = (Instance, TargetGraph)> {
        (1usize..=7, 2usize..=3).prop_flat_map(|(n, k)| {
            let pairs = n * (n - 1) / 2;
            (
                proptest::collection::vec(any::<bool>(), pairs),
                proptest::collection::vec(any::<bool>(), k * (k + 1) / 2),
                proptest::collection::vec(proptest::collection::vec(0..k, 0..=k), n),
                proptest::collection::vec(1i64..4, n * k),
            )
                .prop_map(move |(edges, hbits, lists, ws)| {
                    let mut g = SimpleGraph::new(n);
                    let mut it = edges.into_iter();
                    for u in 0..n {
                        for v in u + 1..n {
                            if it.next().unwrap() {
                                g.add_edge(u, v).unwrap();
                            }
                        }
                    }
                    let mut h = TargetGraph::with_numbered_colours(k);
                    let mut it = hbits.into_iter();
                    for a in 0..k {
                        for b in a..k {
                            if it.next().unwrap() {
                                h.add_edge(a, b).unwrap();
                            }
                        }
                    }
                    let mut weights = WeightTable::new();
                    for v in 0..n {
                        for c in 0..k {
                            weights.set(v, c, q(ws[v * k + c]));
                        }
                    }
                    let lists = ListAssignment::new(lists, k).unwrap();
                    (Instance::new(g, lists, weights).unwrap(), h)
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn agrees_with_dp_and_enumeration((inst, h) in arb_instance(), n0 in 1usize..5, scale in 0.0f64..3.0) {
            let cfg = HColConfig { n0, t: 5, degree_threshold_scale: scale, debug_checks: false, trace: false };
            let s = PolynomialSemiring { vars: h.k() };
            let got = hcol(&inst, &h, &cfg, &s).unwrap().0;
            prop_assert_eq!(&got, &dp_solve_by_components(&inst, &h, &s).unwrap());
            prop_assert_eq!(&got, &brute_force_solve(&inst, &h, &s, DEFAULT_CAP).unwrap());
        }
    }
}
