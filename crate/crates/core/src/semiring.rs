//! Value domains for the solvers.
//!
//! Every solver is generic over [`Semiring`]: the answer for an instance is the
//! semiring sum, over all list colourings `f`, of the product of
//! `atom(v, f(v), w_{v,f(v)})`. Four instances are provided:
//!
//! | semiring               | element                   | atom              |
//! |------------------------|---------------------------|-------------------|
//! | [`PolynomialSemiring`] | [`PartitionPolynomial`]   | `w_{v,h} * x_h`   |
//! | [`CountSemiring`]      | exact rational            | `w_{v,h}`         |
//! | [`MinCostSemiring`]    | [`Cost`] under (min, +)   | `w_{v,h}`         |
//! | [`DecisionSemiring`]   | `bool` under (or, and)    | `true`            |

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

pub trait Semiring {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn atom(&self, vertex: usize, colour: usize, weight: &BigRational) -> Self::Elem;

    fn add_assign(&self, acc: &mut Self::Elem, b: &Self::Elem) {
        *acc = self.add(acc, b);
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SemiringKind {
    Partition,
    Count,
    MinCost,
    Decision,
}

impl SemiringKind {
    pub const ALL: [SemiringKind; 4] =
        [SemiringKind::Partition, SemiringKind::Count, SemiringKind::MinCost, SemiringKind::Decision];
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("no value supplied for colour {0}")]
    MissingColour(usize),
    #[error("polynomial involves colours other than {0}")]
    NotUnivariate(usize),
    #[error("malformed polynomial JSON: {0}")]
    Json(String),
}

/// Sparse polynomial in one variable per colour, with exact rational
/// coefficients. Terms are keyed by exponent vectors of a fixed length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionPolynomial {
    vars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl PartitionPolynomial {
    pub fn zero(vars: usize) -> Self {
        PartitionPolynomial { vars, terms: BTreeMap::new() }
    }

    pub fn one(vars: usize) -> Self {
        PartitionPolynomial::constant(vars, BigRational::one())
    }

    pub fn constant(vars: usize, c: BigRational) -> Self {
        PartitionPolynomial::from_terms(vars, [(vec![0; vars], c)])
    }

    /// `coeff * x_colour`.
    pub fn monomial(vars: usize, colour: usize, coeff: BigRational) -> Self {
        assert!(colour < vars, "colour {colour} out of range for {vars} variables");
        let mut exps = vec![0; vars];
        exps[colour] = 1;
        PartitionPolynomial::from_terms(vars, [(exps, coeff)])
    }

    /// Sums repeated exponent vectors and drops zero coefficients.
    pub fn from_terms(vars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>) -> Self {
        let mut p = PartitionPolynomial::zero(vars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), vars, "exponent vector length");
            p.add_term(exps, c);
        }
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.vars, other.vars, "adding polynomials over different colour sets");
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars, "multiplying polynomials over different colour sets");
        let mut out = PartitionPolynomial::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }

    pub fn evaluate(&self, point: &BTreeMap<usize, BigRational>) -> Result<BigRational, PolyError> {
        let mut total = BigRational::zero();
        for (exps, c) in &self.terms {
            let mut term = c.clone();
            for (h, &e) in exps.iter().enumerate() {
                if e > 0 {
                    let x = point.get(&h).ok_or(PolyError::MissingColour(h))?;
                    term *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Coefficient of the monomial with exponents `exps` (zero when absent).
    pub fn coefficient(&self, exps: &[u32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Sets `x_colour := 1`, merging terms that become equal.
    pub fn substitute_one(&self, colour: usize) -> Self {
        PartitionPolynomial::from_terms(
            self.vars,
            self.terms.iter().map(|(e, c)| {
                let mut e = e.clone();
                e[colour] = 0;
                (e, c.clone())
            }),
        )
    }

    /// Distinct total degrees present.
    pub fn total_degrees(&self) -> Vec<u32> {
        let mut degs: Vec<u32> = self.terms.keys().map(|e| e.iter().sum()).collect();
        degs.sort_unstable();
        degs.dedup();
        degs
    }

    /// Coefficients `[c_0, c_1, ...]` of a polynomial in `x_colour` alone.
    pub fn univariate(&self, colour: usize) -> Result<Vec<BigRational>, PolyError> {
        let mut coeffs = Vec::new();
        for (exps, c) in &self.terms {
            if exps.iter().enumerate().any(|(h, &e)| h != colour && e > 0) {
                return Err(PolyError::NotUnivariate(colour));
            }
            let d = exps[colour] as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, BigRational::zero());
            }
            coeffs[d] = c.clone();
        }
        Ok(coeffs)
    }

    /// Canonical text: terms in descending lexicographic order of exponent
    /// vectors, each `c * x_a^2 x_b`, joined by ` + `; `0` when empty.
    pub fn to_text(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(exps, c)| {
                let vars: Vec<String> = exps
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(h, &e)| if e == 1 { format!("x_{}", names[h]) } else { format!("x_{}^{}", names[h], e) })
                    .collect();
                if vars.is_empty() {
                    c.to_string()
                } else {
                    format!("{} * {}", c, vars.join(" "))
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// `[{"coeff": "p/q", "exps": {"a": 2, "b": 1}}, ...]` in the text order;
    /// zero exponents are omitted.
    pub fn to_json(&self, names: &[String]) -> Value {
        Value::Array(
            self.terms
                .iter()
                .rev()
                .map(|(exps, c)| {
                    let exps: serde_json::Map<String, Value> = exps
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(h, &e)| (names[h].clone(), json!(e)))
                        .collect();
                    json!({ "coeff": c.to_string(), "exps": exps })
                })
                .collect(),
        )
    }

    pub fn from_json(value: &Value, names: &[String]) -> Result<Self, PolyError> {
        let bad = |m: &str| PolyError::Json(m.to_string());
        let items = value.as_array().ok_or_else(|| bad("expected an array of terms"))?;
        let mut p = PartitionPolynomial::zero(names.len());
        for item in items {
            let coeff = item
                .get("coeff")
                .and_then(Value::as_str)
                .and_then(crate::io::parse_rational)
                .ok_or_else(|| bad("term without a rational \"coeff\" string"))?;
            let exps_obj = item.get("exps").and_then(Value::as_object).ok_or_else(|| bad("term without \"exps\""))?;
            let mut exps = vec![0u32; names.len()];
            for (name, e) in exps_obj {
                let h = names.iter().position(|n| n == name).ok_or_else(|| bad(&format!("unknown colour {name:?}")))?;
                exps[h] = e
                    .as_u64()
                    .and_then(|e| u32::try_from(e).ok())
                    .ok_or_else(|| bad("exponent must be a nonnegative integer"))?;
            }
            p.add_term(exps, coeff);
        }
        Ok(p)
    }
}

/// Multivariate partition function over `vars` colours.
#[derive(Clone, Copy, Debug)]
pub struct PolynomialSemiring {
    pub vars: usize,
}

impl Semiring for PolynomialSemiring {
    type Elem = PartitionPolynomial;

    fn zero(&self) -> PartitionPolynomial {
        PartitionPolynomial::zero(self.vars)
    }
    fn one(&self) -> PartitionPolynomial {
        PartitionPolynomial::one(self.vars)
    }
    fn add(&self, a: &PartitionPolynomial, b: &PartitionPolynomial) -> PartitionPolynomial {
        a.add(b)
    }
    fn mul(&self, a: &PartitionPolynomial, b: &PartitionPolynomial) -> PartitionPolynomial {
        a.mul(b)
    }
    fn atom(&self, _vertex: usize, colour: usize, weight: &BigRational) -> PartitionPolynomial {
        PartitionPolynomial::monomial(self.vars, colour, weight.clone())
    }
    fn add_assign(&self, acc: &mut PartitionPolynomial, b: &PartitionPolynomial) {
        acc.add_assign(b);
    }
    fn is_zero(&self, a: &PartitionPolynomial) -> bool {
        a.is_zero()
    }
}

/// Weighted count: `(Q, +, *)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct CountSemiring;

impl Semiring for CountSemiring {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn atom(&self, _vertex: usize, _colour: usize, weight: &BigRational) -> BigRational {
        weight.clone()
    }
    fn add_assign(&self, acc: &mut BigRational, b: &BigRational) {
        *acc += b;
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

/// Tropical value: a finite cost or `+∞` (no colouring).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Cost {
    Finite(BigRational),
    Infinite,
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(c) => write!(f, "{c}"),
            Cost::Infinite => write!(f, "infeasible"),
        }
    }
}

/// Minimum total cost `Σ_v w_{v,f(v)}`: `(Q ∪ {∞}, min, +)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct MinCostSemiring;

impl Semiring for MinCostSemiring {
    type Elem = Cost;

    fn zero(&self) -> Cost {
        Cost::Infinite
    }
    fn one(&self) -> Cost {
        Cost::Finite(BigRational::zero())
    }
    fn add(&self, a: &Cost, b: &Cost) -> Cost {
        a.min(b).clone()
    }
    fn mul(&self, a: &Cost, b: &Cost) -> Cost {
        match (a, b) {
            (Cost::Finite(x), Cost::Finite(y)) => Cost::Finite(x + y),
            _ => Cost::Infinite,
        }
    }
    fn atom(&self, _vertex: usize, _colour: usize, weight: &BigRational) -> Cost {
        Cost::Finite(weight.clone())
    }
    fn is_zero(&self, a: &Cost) -> bool {
        *a == Cost::Infinite
    }
}

/// Existence of a list colouring: `({false, true}, or, and)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct DecisionSemiring;

impl Semiring for DecisionSemiring {
    type Elem = bool;

    fn zero(&self) -> bool {
        false
    }
    fn one(&self) -> bool {
        true
    }
    fn add(&self, a: &bool, b: &bool) -> bool {
        *a || *b
    }
    fn mul(&self, a: &bool, b: &bool) -> bool {
        *a && *b
    }
    fn atom(&self, _vertex: usize, _colour: usize, _weight: &BigRational) -> bool {
        true
    }
    fn is_zero(&self, a: &bool) -> bool {
        !*a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn names(ns: &[&str]) -> Vec<String> {
        ns.iter().map(|s| s.to_string()).collect()
    }

    fn xa() -> PartitionPolynomial {
        PartitionPolynomial::monomial(2, 0, q(1))
    }

    fn xb() -> PartitionPolynomial {
        PartitionPolynomial::monomial(2, 1, q(1))
    }

    #[test]
    fn add_examples() {
        let s = xa().add(&xb());
        assert_eq!(s.len(), 2);
        assert_eq!(s.to_text(&names(&["a", "b"])), "1 * x_a + 1 * x_b");
        assert!(xa().add(&PartitionPolynomial::monomial(2, 0, q(-1))).is_zero());
        let t = PartitionPolynomial::from_terms(2, [(vec![2, 1], q(2))]);
        let u = PartitionPolynomial::from_terms(2, [(vec![2, 1], q(3))]);
        assert_eq!(t.add(&u), PartitionPolynomial::from_terms(2, [(vec![2, 1], q(5))]));
    }

    #[test]
    fn mul_examples() {
        let s = xa().add(&xb());
        let sq = s.mul(&s);
        assert_eq!(
            sq,
            PartitionPolynomial::from_terms(2, [(vec![2, 0], q(1)), (vec![1, 1], q(2)), (vec![0, 2], q(1))])
        );
        assert_eq!(sq.mul(&PartitionPolynomial::one(2)), sq);
        // p(P_3 -> K_2) factors as x_a x_b (x_a + x_b)
        let edge_part = PartitionPolynomial::from_terms(2, [(vec![1, 1], q(1))]);
        assert_eq!(edge_part.mul(&s), PartitionPolynomial::from_terms(2, [(vec![2, 1], q(1)), (vec![1, 2], q(1))]));
    }

    #[test]
    fn evaluate_and_coefficient() {
        let p = PartitionPolynomial::from_terms(3, [(vec![1, 1, 1], q(6))]);
        let ones: BTreeMap<usize, BigRational> = (0..3).map(|h| (h, q(1))).collect();
        assert_eq!(p.evaluate(&ones).unwrap(), q(6));
        assert_eq!(PartitionPolynomial::zero(3).evaluate(&BTreeMap::new()).unwrap(), q(0));
        assert_eq!(p.evaluate(&BTreeMap::new()), Err(PolyError::MissingColour(0)));
        assert_eq!(p.coefficient(&[1, 1, 1]), q(6));
        assert_eq!(p.coefficient(&[2, 1, 0]), q(0));
        let point: BTreeMap<usize, BigRational> =
            [(0, q(2)), (1, BigRational::new(1.into(), 2.into())), (2, q(3))].into();
        assert_eq!(p.evaluate(&point).unwrap(), q(18));
    }

    #[test]
    fn substitute_one_examples() {
        let p = PartitionPolynomial::from_terms(2, [(vec![1, 1], q(1))]);
        assert_eq!(p.substitute_one(1), PartitionPolynomial::monomial(2, 0, q(1)));
        // (x_h + x_h')^2 with x_h' := 1
        let s = xa().add(&xb());
        let sq = s.mul(&s).substitute_one(1);
        assert_eq!(sq.univariate(0).unwrap(), vec![q(1), q(2), q(1)]);
        assert_eq!(s.univariate(0), Err(PolyError::NotUnivariate(0)));
    }

    #[test]
    fn text_and_json() {
        let ns = names(&["a", "b"]);
        let p = PartitionPolynomial::from_terms(2, [(vec![2, 1], q(1)), (vec![1, 2], q(1))]);
        assert_eq!(p.to_text(&ns), "1 * x_a^2 x_b + 1 * x_a x_b^2");
        assert_eq!(PartitionPolynomial::zero(2).to_text(&ns), "0");
        let c = PartitionPolynomial::constant(2, BigRational::new(3.into(), 4.into()));
        assert_eq!(c.to_text(&ns), "3/4");
        let j = p.to_json(&ns);
        assert_eq!(
            j,
            serde_json::json!([
                {"coeff": "1", "exps": {"a": 2, "b": 1}},
                {"coeff": "1", "exps": {"a": 1, "b": 2}}
            ])
        );
        assert_eq!(PartitionPolynomial::from_json(&j, &ns).unwrap(), p);
        assert!(PartitionPolynomial::from_json(&serde_json::json!([{"coeff": "1", "exps": {"z": 1}}]), &ns).is_err());
    }

    fn arb_rational() -> impl Strategy<Value = BigRational> {
        (-6i64..=6, 1i64..=4).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
    }

    fn arb_poly() -> impl Strategy<Value = PartitionPolynomial> {
        proptest::collection::vec((proptest::collection::vec(0u32..3, 3), arb_rational()), 0..5)
            .prop_map(|terms| PartitionPolynomial::from_terms(3, terms))
    }

    fn arb_cost() -> impl Strategy<Value = Cost> {
        prop_oneof![1 => Just(Cost::Infinite), 4 => arb_rational().prop_map(Cost::Finite)]
    }

    fn check_axioms<S: Semiring>(s: &S, a: &S::Elem, b: &S::Elem, c: &S::Elem) -> Result<(), TestCaseError> {
        prop_assert_eq!(s.add(a, b), s.add(b, a));
        prop_assert_eq!(s.mul(a, b), s.mul(b, a));
        prop_assert_eq!(s.add(&s.add(a, b), c), s.add(a, &s.add(b, c)));
        prop_assert_eq!(s.mul(&s.mul(a, b), c), s.mul(a, &s.mul(b, c)));
        prop_assert_eq!(s.mul(a, &s.add(b, c)), s.add(&s.mul(a, b), &s.mul(a, c)));
        prop_assert_eq!(s.add(a, &s.zero()), a.clone());
        prop_assert_eq!(s.mul(a, &s.one()), a.clone());
        prop_assert_eq!(s.mul(a, &s.zero()), s.zero());
        let mut acc = a.clone();
        s.add_assign(&mut acc, b);
        prop_assert_eq!(acc, s.add(a, b));
        Ok(())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn polynomial_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            check_axioms(&PolynomialSemiring { vars: 3 }, &a, &b, &c)?;
        }

        #[test]
        fn count_axioms(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
            check_axioms(&CountSemiring, &a, &b, &c)?;
        }

        #[test]
        fn min_cost_axioms(a in arb_cost(), b in arb_cost(), c in arb_cost()) {
            check_axioms(&MinCostSemiring, &a, &b, &c)?;
        }

        #[test]
        fn decision_axioms(a in any::<bool>(), b in any::<bool>(), c in any::<bool>()) {
            check_axioms(&DecisionSemiring, &a, &b, &c)?;
        }

        #[test]
        fn json_roundtrip(p in arb_poly()) {
            let ns = names(&["a", "b", "c"]);
            prop_assert_eq!(PartitionPolynomial::from_json(&p.to_json(&ns), &ns).unwrap(), p);
        }
    }
}
