#pragma once

#include <map>
#include <string>
#include <vector>

#include "crn/kinetics.hpp"
#include "crn/linalg.hpp"

namespace crn {

/// A species and its rate transform gamma_i.
struct SpeciesDef {
  std::string name;
  RateTransform transform;
};

/// A complex: nonnegative integer stoichiometry over the species (one y_k).
struct Complex {
  std::vector<int> stoich;
  bool is_zero() const;
  bool operator==(const Complex& other) const { return stoich == other.stoich; }
};

/// One directed reaction: source complex -> product complex with positive
/// rate constant and nonnegative discrete delay (time units).
struct Reaction {
  int source = -1;
  int product = -1;
  double rate = 0.0;
  double delay = 0.0;
};

/// One reaction of a raw model description, species addressed by name.
struct ReactionInput {
  std::map<std::string, int> reactants;
  std::map<std::string, int> products;
  double rate = 0.0;
  double delay = 0.0;
};

/// Raw model description consumed by build_network.
struct NetworkSpec {
  std::vector<SpeciesDef> species;
  std::vector<ReactionInput> reactions;
};

/// Validated reaction network. Complexes are deduplicated by exact integer
/// stoichiometry, ordered by first appearance; reaction order is input order.
struct Network {
  std::vector<SpeciesDef> species;
  std::vector<Complex> complexes;
  std::vector<Reaction> reactions;

  std::size_t species_count() const { return species.size(); }
  std::size_t complex_count() const { return complexes.size(); }
  std::size_t reaction_count() const { return reactions.size(); }

  /// y_{k'} - y_k of reaction k.
  std::vector<int> reaction_vector(std::size_t k) const;

  double tau_max() const;
  /// Smallest positive delay; +inf when every delay is zero.
  double min_positive_delay() const;
  bool has_delays() const;

  int species_index(const std::string& name) const; // -1 when absent
};

/// Orthonormal bases of the stoichiometric subspace S = span{y_{k'} - y_k}
/// and of its orthogonal complement.
struct StoichBasis {
  std::vector<Vec> s_basis;
  std::vector<Vec> s_perp_basis;
  int rank = 0;

  Vec project_s(const Vec& v) const;
  Vec project_s_perp(const Vec& v) const;
};

/// Validates and indexes a raw description. Throws ModelError on duplicate
/// species names, unknown species, nonpositive rates, negative delays,
/// reactions whose source equals their product, or invalid transforms.
Network build_network(const NetworkSpec& spec);

/// Rank-revealing orthogonalization of the reaction vectors, pivot tolerance
/// 1e-10 relative to the largest column.
StoichBasis stoich_bases(const Network& net);

/// Species formation rate f(x) = sum_k kappa_k gamma^{y_k}(x) (y_{k'} - y_k),
/// x strictly positive.
Vec formation_rate(const Network& net, const Vec& x);

/// Weighted negative Laplacian of the reaction graph (L x L): off-diagonal
/// (i,j) accumulates rates of reactions y_j -> y_i; column sums are zero.
Mat laplacian(const Network& net);

/// gamma^{y_k}(x) = prod_i gamma_i(x_i)^{(y_k)_i} for complex index k.
double gamma_monomial(const Network& net, std::size_t complex_index, const Vec& x);

/// The L-vector Gamma(x) of complex monomials.
Vec gamma_vector(const Network& net, const Vec& x);

/// rho(x) = log gamma(x) elementwise (length N), x strictly positive.
Vec rho(const Network& net, const Vec& x);

/// Throws DomainError unless every component of x is strictly positive.
void require_positive(const Vec& x, const char* what);

namespace detail {
/// Monomial that tolerates zero components (gamma_i(0) = 0, 0^0 = 1).
/// Used by the integrator where states may touch the axes.
double monomial_nonneg(const Network& net, std::size_t complex_index, const Vec& x);
} // namespace detail

} // namespace crn
