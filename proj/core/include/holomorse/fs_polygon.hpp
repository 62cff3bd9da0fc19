#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "holomorse/exact.hpp"
#include "holomorse/thimble_periods.hpp"
#include "holomorse/types.hpp"

namespace holomorse::fs {

using exact::QPoint;

// mu[a][b] indexed by critical-value id; ids must be 0..n-1.
using MuTable = std::vector<std::vector<int>>;

struct CriticalValue {
    int id = 0;
    cx value{};
    QPoint q;  // rationalized value used by every predicate
};

struct CriticalValueConfig {
    std::vector<CriticalValue> values;  // sorted by id
    Phase zeta;
    QPoint zq;                          // rationalized direction of zeta
    long long denom = 1;
    double max_rounding = 0.0;          // largest |value - q| over inputs
    double min_phase_gap = 0.0;         // min angle between zeta and any +-zeta_ab
    double min_value_gap = 0.0;

    const CriticalValue& at(int id) const;
    int size() const { return int(values.size()); }
};

constexpr long long kDefaultDenominator = 1LL << 24;

// Rationalizes onto the grid (1/denom) Z[i]. Throws NonGeneric when two
// values coincide or zeta is parallel to a difference of values.
CriticalValueConfig make_config(const std::vector<cx>& values, const Phase& zeta,
                                long long denom = kDefaultDenominator, double tol_val = 1e-8);
// Exact inputs; zeta is given by a rational direction vector.
CriticalValueConfig make_config_exact(const std::vector<QPoint>& values, const QPoint& zeta_dir);

// Vertex sequence (p, p1, ..., pk, p'). w_inf sits at +R zeta.
struct ConvexPolygonQ {
    std::vector<int> vertex_ids;
    auto operator<=>(const ConvexPolygonQ&) const = default;
};

// Convexity of the clockwise polygon (w_inf, W(p), ..., W(p')) with the two
// infinite edges parallel to zeta. Collinear turns count as convex.
bool chain_is_convex(const CriticalValueConfig& cfg, const std::vector<int>& ids);
// The turn predicate at one vertex between consecutive finite edges.
bool convex_turn(const QPoint& e1, const QPoint& e2);
// Finite edge admissible next to the infinite edges.
bool edge_admissible(const QPoint& zeta, const QPoint& e);

// max_interior < 0 means unbounded.
std::vector<ConvexPolygonQ> enumerate_polygons(const CriticalValueConfig& cfg, int p, int q,
                                               int max_interior = -1);

struct HomSummand {
    ConvexPolygonQ polygon;
    long long rank = 0;  // product of |mu| over consecutive pairs
    int degree = 0;      // all generators sit in degree 0
};

struct HomComplex {
    int source = 0;
    int target = 0;
    std::vector<HomSummand> summands;  // polygons with a zero factor are dropped
    long long rank = 0;
};

HomComplex build_hom(const CriticalValueConfig& cfg, const MuTable& mu, int p, int q);

// Homogeneous basis word: a polygon plus one soliton generator per edge.
struct HomWord {
    std::vector<int> vertices;
    std::vector<int> gens;  // gens[j] < |mu[v_j][v_{j+1}]|
    auto operator<=>(const HomWord&) const = default;
};

struct HomElement {
    int source = 0;
    int target = 0;
    std::map<HomWord, long long> terms;
    bool is_zero() const { return terms.empty(); }
    bool operator==(const HomElement&) const = default;
};

std::vector<HomWord> hom_basis(const CriticalValueConfig& cfg, const MuTable& mu, int p, int q);
HomElement element(const HomWord& w, long long coeff = 1);

// Product ab in R_{p,p''} for a in R_{p,p'} and b in R_{p',p''}.
HomElement compose(const HomElement& a, const HomElement& b, const CriticalValueConfig& cfg);

struct AssociativityReport {
    long long triples = 0;
    long long nonzero = 0;
    long long failures = 0;
};

// Exhaustive over all composable basis triples when max_triples < 0.
AssociativityReport associativity_check(const CriticalValueConfig& cfg, const MuTable& mu,
                                        long long max_triples = -1);

// Directed category of thimbles at phase zeta, with its Stokes data and the
// accumulated mutation basis (S = B S0 B^T).
struct DirectedCategory {
    Phase zeta;
    std::vector<cx> values;  // by label
    MuTable mu;              // by label
    std::vector<int> ordering;
    periods::IntMatrix S;
    periods::IntMatrix S0;
    periods::IntMatrix basis;
};

DirectedCategory make_category(const std::vector<cx>& values, const MuTable& mu, const Phase& zeta);

// Pair whose ray zeta crosses next when rotating clockwise.
std::pair<int, int> next_crossing(const DirectedCategory& cat);

// Rotate zeta clockwise across the ray of (p, q); p, q must be adjacent and
// their ray the next one. The new phase bisects the crossed ray and the next.
DirectedCategory mutate_collection(const DirectedCategory& cat, int p, int q);

// Antisymmetric display of the positional Stokes matrix in the current
// ordering: entry [i][j] for positions i < j is S[i][j].
std::vector<std::vector<long long>> positional_mu(const DirectedCategory& cat);

// B^{-1} S B^{-T} == S0.
bool product_invariant(const DirectedCategory& cat);

// Lattice-of-critical-points model: vertices (p, gamma) with value
// W(p) + Z(gamma).
struct LatticeVacuumModel {
    std::vector<cx> base_values;
    int rank = 0;
    std::vector<cx> Z;  // on the lattice basis
    Phase zeta;
};

struct LatticeStep {
    int from = 0;
    int to = 0;
    std::vector<int> delta;
    int mu = 1;
};

struct LatticeVertex {
    int vacuum = 0;
    std::vector<int> gamma;
    auto operator<=>(const LatticeVertex&) const = default;
};

struct LatticeChain {
    std::vector<LatticeVertex> vertices;
    long long weight = 0;
    double length = 0.0;
    auto operator<=>(const LatticeChain& o) const { return vertices <=> o.vertices; }
    bool operator==(const LatticeChain& o) const { return vertices == o.vertices; }
};

struct TruncatedHom {
    long long rank = 0;
    std::vector<LatticeChain> basis;  // sorted
    double support_constant = 0.0;    // max ||delta|| / |edge| over the steps
};

// Chains from (p, gamma) with steps in the support. A single edge (the
// bigon) is always kept; chains with interior vertices need total |Z|-length
// below N. With no target, every endpoint is collected.
TruncatedHom truncate_lattice(const LatticeVacuumModel& model, const std::vector<LatticeStep>& steps,
                              const LatticeVertex& source, const std::optional<LatticeVertex>& target,
                              double N, long long denom = kDefaultDenominator);

cx lattice_value(const LatticeVacuumModel& model, const LatticeVertex& v);

}  // namespace holomorse::fs
