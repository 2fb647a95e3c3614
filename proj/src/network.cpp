#include "crn/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "crn/errors.hpp"

namespace crn {

namespace {
constexpr double kRankTol = 1e-10;
}

bool Complex::is_zero() const {
  return std::all_of(stoich.begin(), stoich.end(), [](int v) { return v == 0; });
}

std::vector<int> Network::reaction_vector(std::size_t k) const {
  const auto& src = complexes[reactions[k].source].stoich;
  const auto& prod = complexes[reactions[k].product].stoich;
  std::vector<int> r(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) r[i] = prod[i] - src[i];
  return r;
}

double Network::tau_max() const {
  double m = 0.0;
  for (const auto& r : reactions) m = std::max(m, r.delay);
  return m;
}

double Network::min_positive_delay() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : reactions)
    if (r.delay > 0.0) m = std::min(m, r.delay);
  return m;
}

bool Network::has_delays() const {
  return std::any_of(reactions.begin(), reactions.end(),
                     [](const Reaction& r) { return r.delay > 0.0; });
}

int Network::species_index(const std::string& name) const {
  for (std::size_t i = 0; i < species.size(); ++i)
    if (species[i].name == name) return static_cast<int>(i);
  return -1;
}

void require_positive(const Vec& x, const char* what) {
  for (double v : x)
    if (!(v > 0.0)) throw DomainError(std::string(what) + ": state must be strictly positive");
}

Network build_network(const NetworkSpec& spec) {
  if (spec.species.empty()) throw ModelError("network needs at least one species");
  if (spec.reactions.empty()) throw ModelError("network needs at least one reaction");

  Network net;
  std::set<std::string> names;
  for (const auto& sp : spec.species) {
    if (sp.name.empty()) throw ModelError("species name must not be empty");
    if (!names.insert(sp.name).second)
      throw ModelError("duplicate species name: " + sp.name);
    try {
      sp.transform.validate();
    } catch (const ModelError& e) {
      throw ModelError("species " + sp.name + ": " + e.what());
    }
  }
  net.species = spec.species;
  const std::size_t n = net.species.size();

  auto complex_of = [&](const std::map<std::string, int>& counts) {
    Complex cx;
    cx.stoich.assign(n, 0);
    for (const auto& [name, count] : counts) {
      const int idx = net.species_index(name);
      if (idx < 0) throw ModelError("reaction references unknown species: " + name);
      if (count <= 0) throw ModelError("stoichiometric count must be a positive integer");
      cx.stoich[idx] += count;
    }
    return cx;
  };
  auto intern = [&](const Complex& cx) {
    for (std::size_t i = 0; i < net.complexes.size(); ++i)
      if (net.complexes[i] == cx) return static_cast<int>(i);
    net.complexes.push_back(cx);
    return static_cast<int>(net.complexes.size() - 1);
  };

  for (std::size_t k = 0; k < spec.reactions.size(); ++k) {
    const auto& in = spec.reactions[k];
    const std::string where = "reaction " + std::to_string(k + 1);
    if (!(in.rate > 0.0) || !std::isfinite(in.rate))
      throw ModelError(where + ": nonpositive rate");
    if (in.delay < 0.0 || !std::isfinite(in.delay))
      throw ModelError(where + ": negative delay");
    Reaction r;
    r.source = intern(complex_of(in.reactants));
    r.product = intern(complex_of(in.products));
    if (r.source == r.product)
      throw ModelError(where + ": source complex equals product complex");
    r.rate = in.rate;
    r.delay = in.delay;
    net.reactions.push_back(r);
  }

  if (std::all_of(net.complexes.begin(), net.complexes.end(),
                  [](const Complex& c) { return c.is_zero(); }))
    throw ModelError("at least one complex must be nonzero");
  return net;
}

Vec StoichBasis::project_s(const Vec& v) const {
  Vec r(v.size(), 0.0);
  for (const Vec& q : s_basis) axpy(r, dot(q, v), q);
  return r;
}

Vec StoichBasis::project_s_perp(const Vec& v) const {
  Vec r(v.size(), 0.0);
  for (const Vec& q : s_perp_basis) axpy(r, dot(q, v), q);
  return r;
}

StoichBasis stoich_bases(const Network& net) {
  const std::size_t n = net.species_count();
  std::vector<Vec> cols;
  cols.reserve(net.reaction_count());
  for (std::size_t k = 0; k < net.reaction_count(); ++k) {
    const auto rv = net.reaction_vector(k);
    cols.emplace_back(rv.begin(), rv.end());
  }
  StoichBasis basis;
  basis.s_basis = orthonormal_span(cols, kRankTol);
  basis.s_perp_basis = orthonormal_complement(basis.s_basis, n);
  basis.rank = static_cast<int>(basis.s_basis.size());
  return basis;
}

namespace detail {

double monomial_nonneg(const Network& net, std::size_t complex_index, const Vec& x) {
  const auto& y = net.complexes[complex_index].stoich;
  double v = 1.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 0) continue;
    const double g = net.species[i].transform.eval(x[i]);
    double f = g;
    for (int e = 1; e < y[i]; ++e) f *= g;
    v *= f;
  }
  return v;
}

} // namespace detail

double gamma_monomial(const Network& net, std::size_t complex_index, const Vec& x) {
  require_positive(x, "gamma_monomial");
  return detail::monomial_nonneg(net, complex_index, x);
}

Vec gamma_vector(const Network& net, const Vec& x) {
  require_positive(x, "gamma_vector");
  Vec g(net.complex_count());
  for (std::size_t l = 0; l < net.complex_count(); ++l)
    g[l] = detail::monomial_nonneg(net, l, x);
  return g;
}

Vec rho(const Network& net, const Vec& x) {
  require_positive(x, "rho");
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = net.species[i].transform.log_eval(x[i]);
  return r;
}

Vec formation_rate(const Network& net, const Vec& x) {
  require_positive(x, "formation_rate");
  Vec f(net.species_count(), 0.0);
  for (std::size_t k = 0; k < net.reaction_count(); ++k) {
    const auto& r = net.reactions[k];
    const double w = r.rate * detail::monomial_nonneg(net, r.source, x);
    const auto rv = net.reaction_vector(k);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += w * rv[i];
  }
  return f;
}

Mat laplacian(const Network& net) {
  const std::size_t l = net.complex_count();
  Mat k(l, l, 0.0);
  for (const auto& r : net.reactions) k(r.product, r.source) += r.rate;
  for (std::size_t j = 0; j < l; ++j) {
    double colsum = 0.0;
    for (std::size_t i = 0; i < l; ++i) colsum += k(i, j);
    k(j, j) -= colsum;
  }
  return k;
}

} // namespace crn
