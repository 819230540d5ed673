//! Fractional-matching linear programming with exact certificates.
//!
//! A fractional matching assigns a nonnegative weight to every edge so that
//! each vertex carries at most `k/n` in total; its cardinality is the weight
//! sum. The fractional matching number `nu` is the optimum of the packing
//! LP, and a hypergraph has a matching of cardinality `s` exactly when
//! `nu >= s` (the feasible region is down-closed, so an optimal solution
//! scales to any smaller total).
//!
//! Every solve returns both certificates of the optimum: the primal weights
//! and a fractional vertex cover, nonnegative vertex prices with every edge
//! priced at 1 or more and value `(k/n) * sum(prices)`. Strong duality makes
//! the two values equal exactly, and [`check_certificates`] re-verifies both
//! sides by direct rational substitution without trusting the solver.

mod simplex;

use std::collections::BTreeMap;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::hypergraph::{Edge, Hypergraph};
use crate::rational::Rational;
use num_traits::Zero;

/// Default ceiling on the number of edges a single solve accepts.
pub const DEFAULT_EDGE_GUARD: usize = 5000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("{edges} edges exceed the solver guard of {guard}")]
    TooManyEdges { edges: usize, guard: usize },
    #[error("vertex count {n} exceeds the 64-vertex solver limit")]
    VertexLimitExceeded { n: u32 },
    #[error("cardinality {s} outside (0, 1]")]
    SOutOfRange { s: String },
}

/// Reason a certificate failed re-verification.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertFailure {
    #[error("negative weight on edge {edge}")]
    NegativeWeight { edge: String },
    #[error("weighted edge {edge} is not in the hypergraph")]
    UnknownEdge { edge: String },
    #[error("vertex {v} carries more than k/n")]
    VertexOverCap { v: u32 },
    #[error("stated cardinality differs from the weight sum")]
    CardinalityMismatch,
    #[error("negative price on vertex {v}")]
    NegativePrice { v: u32 },
    #[error("priced vertex {v} is outside the vertex set")]
    UnknownVertex { v: u32 },
    #[error("edge {edge} is priced below 1")]
    UnderpricedEdge { edge: String },
    #[error("stated value differs from (k/n) times the price sum")]
    ValueMismatch,
    #[error("primal cardinality differs from nu")]
    PrimalObjectiveMismatch,
    #[error("dual value differs from nu")]
    DualObjectiveMismatch,
}

/// Nonnegative edge weights with their total. Only nonzero weights are
/// stored. Validity against a hypergraph is established by
/// [`FractionalMatching::is_valid_for`], never assumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalMatching {
    pub weights: BTreeMap<Edge, Rational>,
    pub cardinality: Rational,
}

impl FractionalMatching {
    /// Wraps weights, dropping zeros and summing the rest.
    pub fn from_weights(weights: BTreeMap<Edge, Rational>) -> Self {
        let weights: BTreeMap<Edge, Rational> =
            weights.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        let cardinality = weights.values().sum();
        FractionalMatching {
            weights,
            cardinality,
        }
    }

    /// Rescales every weight by `factor`.
    pub fn scaled(&self, factor: &Rational) -> Self {
        FractionalMatching::from_weights(
            self.weights
                .iter()
                .map(|(e, w)| (e.clone(), w * factor))
                .collect(),
        )
    }

    /// Checks nonnegativity, edge membership, the per-vertex cap `k/n`, and
    /// the stated cardinality, all by exact substitution.
    pub fn is_valid_for(&self, h: &Hypergraph) -> Result<(), CertFailure> {
        let cap = Rational::new(h.k().into(), h.n().into());
        let mut load: BTreeMap<u32, Rational> = BTreeMap::new();
        let mut total = Rational::zero();
        for (edge, weight) in &self.weights {
            if weight.is_negative() {
                return Err(CertFailure::NegativeWeight {
                    edge: edge.to_string(),
                });
            }
            if !h.contains_edge(edge) {
                return Err(CertFailure::UnknownEdge {
                    edge: edge.to_string(),
                });
            }
            for &v in edge.vertices() {
                *load.entry(v).or_insert_with(Rational::zero) += weight;
            }
            total += weight;
        }
        for (v, sum) in &load {
            if *sum > cap {
                return Err(CertFailure::VertexOverCap { v: *v });
            }
        }
        if total != self.cardinality {
            return Err(CertFailure::CardinalityMismatch);
        }
        Ok(())
    }
}

/// Nonnegative vertex prices with value `(k/n) * sum(prices)`. A valid
/// certificate prices every edge at 1 or more, so its value upper-bounds
/// every matching cardinality. Only nonzero prices are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverCertificate {
    pub prices: BTreeMap<u32, Rational>,
    pub value: Rational,
}

impl CoverCertificate {
    /// Wraps prices, dropping zeros; `cap` is `k/n`.
    pub fn from_prices(prices: BTreeMap<u32, Rational>, cap: &Rational) -> Self {
        let prices: BTreeMap<u32, Rational> =
            prices.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        let value = cap * &prices.values().sum::<Rational>();
        CoverCertificate { prices, value }
    }

    /// Checks nonnegativity, vertex range, dual feasibility of every edge,
    /// and the stated value.
    pub fn is_valid_for(&self, h: &Hypergraph) -> Result<(), CertFailure> {
        for (&v, price) in &self.prices {
            if price.is_negative() {
                return Err(CertFailure::NegativePrice { v });
            }
            if v == 0 || v > h.n() {
                return Err(CertFailure::UnknownVertex { v });
            }
        }
        let one = Rational::from(1u32);
        for edge in h.edges() {
            let priced: Rational = edge
                .vertices()
                .iter()
                .filter_map(|v| self.prices.get(v))
                .sum();
            if priced < one {
                return Err(CertFailure::UnderpricedEdge {
                    edge: edge.to_string(),
                });
            }
        }
        let cap = Rational::new(h.k().into(), h.n().into());
        if &cap * &self.prices.values().sum::<Rational>() != self.value {
            return Err(CertFailure::ValueMismatch);
        }
        Ok(())
    }
}

/// Optimum of the packing LP with both certificates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpResult {
    pub nu: Rational,
    pub primal: FractionalMatching,
    pub dual: CoverCertificate,
}

/// Outcome of a cardinality-s feasibility query: exactly one of a matching
/// of cardinality exactly `s` or a cover certificate of value below `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingDecision {
    Feasible(FractionalMatching),
    Infeasible(CoverCertificate),
}

impl MatchingDecision {
    pub fn is_feasible(&self) -> bool {
        matches!(self, MatchingDecision::Feasible(_))
    }

    /// Re-verifies the carried certificate against the hypergraph and the
    /// queried cardinality.
    pub fn confirms(&self, h: &Hypergraph, s: &Rational) -> bool {
        match self {
            MatchingDecision::Feasible(m) => {
                m.is_valid_for(h).is_ok() && m.cardinality == *s
            }
            MatchingDecision::Infeasible(c) => c.is_valid_for(h).is_ok() && c.value < *s,
        }
    }
}

/// Computes the fractional matching number with the default edge guard.
pub fn matching_number(h: &Hypergraph) -> Result<LpResult, LpError> {
    matching_number_guarded(h, DEFAULT_EDGE_GUARD)
}

/// Computes the fractional matching number, refusing instances with more
/// than `guard` edges. The guard is a hard limit, not a heuristic.
pub fn matching_number_guarded(h: &Hypergraph, guard: usize) -> Result<LpResult, LpError> {
    if h.n() > 64 {
        return Err(LpError::VertexLimitExceeded { n: h.n() });
    }
    if h.edge_count() > guard {
        return Err(LpError::TooManyEdges {
            edges: h.edge_count(),
            guard,
        });
    }
    let cap = Rational::new(h.k().into(), h.n().into());
    let columns: Vec<u64> = h.edge_masks().collect();
    debug_assert_eq!(columns.len(), h.edge_count());
    let optimum = simplex::solve_packing(h.n() as usize, &columns, &cap);

    let weights: BTreeMap<Edge, Rational> = h
        .edges()
        .iter()
        .zip(optimum.primal)
        .filter(|(_, w)| !w.is_zero())
        .map(|(e, w)| (e.clone(), w))
        .collect();
    let prices: BTreeMap<u32, Rational> = optimum
        .dual
        .into_iter()
        .enumerate()
        .filter(|(_, y)| !y.is_zero())
        .map(|(i, y)| (i as u32 + 1, y))
        .collect();
    let result = LpResult {
        nu: optimum.objective,
        primal: FractionalMatching::from_weights(weights),
        dual: CoverCertificate::from_prices(prices, &cap),
    };
    debug_assert!(check_certificates(&result, h));
    Ok(result)
}

/// Decides whether `h` has a fractional matching of cardinality `s`,
/// `0 < s <= 1`. Feasible answers carry a matching of cardinality exactly
/// `s` (the optimum scaled down); infeasible answers carry a cover
/// certificate of value below `s`.
pub fn has_matching(h: &Hypergraph, s: &Rational) -> Result<MatchingDecision, LpError> {
    if !s.is_positive() || *s > Rational::from(1u32) {
        return Err(LpError::SOutOfRange { s: s.to_string() });
    }
    let result = matching_number(h)?;
    if result.nu >= *s {
        let factor = s / &result.nu;
        Ok(MatchingDecision::Feasible(result.primal.scaled(&factor)))
    } else {
        Ok(MatchingDecision::Infeasible(result.dual))
    }
}

/// Re-verifies a solved instance: primal feasibility, dual feasibility, and
/// exact agreement of both objectives with `nu`. Pure substitution; nothing
/// from the solver is trusted.
pub fn check_certificates(result: &LpResult, h: &Hypergraph) -> bool {
    audit_certificates(result, h).is_ok()
}

/// As [`check_certificates`], but reports which condition broke.
pub fn audit_certificates(result: &LpResult, h: &Hypergraph) -> Result<(), CertFailure> {
    result.primal.is_valid_for(h)?;
    result.dual.is_valid_for(h)?;
    if result.primal.cardinality != result.nu {
        return Err(CertFailure::PrimalObjectiveMismatch);
    }
    if result.dual.value != result.nu {
        return Err(CertFailure::DualObjectiveMismatch);
    }
    Ok(())
}

fn serialize_edge_map<S: Serializer>(
    map: &BTreeMap<Edge, Rational>,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    let mut out = serializer.serialize_map(Some(map.len()))?;
    for (edge, weight) in map {
        out.serialize_entry(&edge.to_string(), &weight.to_string())?;
    }
    out.end()
}

fn serialize_price_map<S: Serializer>(
    map: &BTreeMap<u32, Rational>,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    let mut out = serializer.serialize_map(Some(map.len()))?;
    for (v, price) in map {
        out.serialize_entry(&v.to_string(), &price.to_string())?;
    }
    out.end()
}

struct EdgeMap<'a>(&'a BTreeMap<Edge, Rational>);

impl Serialize for EdgeMap<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serialize_edge_map(self.0, serializer)
    }
}

struct PriceMap<'a>(&'a BTreeMap<u32, Rational>);

impl Serialize for PriceMap<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serialize_price_map(self.0, serializer)
    }
}

impl Serialize for LpResult {
    /// `{"nu":"1/2","primal":{"[1,2,3]":"1/2"},"dual":{"1":"1"}}` with edges
    /// keyed by their sorted vertex lists and rationals in lowest terms.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut out = serializer.serialize_struct("LpResult", 3)?;
        out.serialize_field("nu", &self.nu.to_string())?;
        out.serialize_field("primal", &EdgeMap(&self.primal.weights))?;
        out.serialize_field("dual", &PriceMap(&self.dual.prices))?;
        out.end()
    }
}

impl Serialize for FractionalMatching {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut out = serializer.serialize_struct("FractionalMatching", 2)?;
        out.serialize_field("weights", &EdgeMap(&self.weights))?;
        out.serialize_field("cardinality", &self.cardinality.to_string())?;
        out.end()
    }
}

impl Serialize for CoverCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut out = serializer.serialize_struct("CoverCertificate", 2)?;
        out.serialize_field("prices", &PriceMap(&self.prices))?;
        out.serialize_field("value", &self.value.to_string())?;
        out.end()
    }
}

impl Serialize for MatchingDecision {
    /// Feasible: `{"has_matching":true,"primal":{...},"cardinality":"2/3"}`.
    /// Infeasible: `{"has_matching":false,"dual":{...},"value":"1/2"}`.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut out = serializer.serialize_struct("MatchingDecision", 3)?;
        match self {
            MatchingDecision::Feasible(m) => {
                out.serialize_field("has_matching", &true)?;
                out.serialize_field("primal", &EdgeMap(&m.weights))?;
                out.serialize_field("cardinality", &m.cardinality.to_string())?;
            }
            MatchingDecision::Infeasible(c) => {
                out.serialize_field("has_matching", &false)?;
                out.serialize_field("dual", &PriceMap(&c.prices))?;
                out.serialize_field("value", &c.value.to_string())?;
            }
        }
        out.end()
    }
}
