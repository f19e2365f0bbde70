#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "btz/geodesics.hpp"
#include "btz/numeric.hpp"

namespace btz {

using IntVector = std::vector<std::int64_t>;

// Open simplicial cone C = {v : alpha_j(v) > 0 for all j} in R^r together
// with a full-rank lattice Sigma in Z^r. Vectors and functionals are given in
// the ambient coordinates of Z^r; lattice_basis holds the basis as columns.
struct LatticeCone {
  int rank = 0;
  std::vector<IntVector> lattice_basis;  // lattice_basis[k] = k-th basis vector
  std::vector<IntVector> functionals;    // functionals[j] = alpha_j

  static LatticeCone standard(std::vector<IntVector> functionals);  // Sigma = Z^r
  std::int64_t alpha(int j, const IntVector& v) const;
  bool contains(const IntVector& v) const;  // open cone membership
  bool in_lattice(const IntVector& v) const;
};

// Throws InputError unless the dimensions agree, the basis is nonsingular and
// the functionals are linearly independent.
void require_valid(const LatticeCone& cone);

struct ConeDecomposition {
  std::vector<IntVector> generators;  // a_j: alpha_i(a_j) = 0 for i != j
  std::vector<IntVector> fundamental_set;  // F, sorted
  // Sigma-membership test cached by decompose_cone: v is in the lattice iff
  // lattice_adj * v is divisible by lattice_det. Empty means not cached.
  std::vector<IntVector> lattice_adj;
  std::int64_t lattice_det = 1;
};

// a_j spans the lattice points on the line where alpha_i = 0 for all i != j,
// chosen with alpha_j(a_j) > 0 minimal.
std::vector<IntVector> cone_generators(const LatticeCone& cone);

// Lattice points sum t_j a_j with t in (0, 1]^r; one per coset of the
// sublattice spanned by the generators.
std::vector<IntVector> fundamental_domain(const LatticeCone& cone,
                                          const std::vector<IntVector>& generators);

ConeDecomposition decompose_cone(const LatticeCone& cone);

struct ConePoint {
  IntVector v0;
  IntVector k;
  friend bool operator==(const ConePoint&, const ConePoint&) = default;
};

// v = v0 + sum k_j a_j with v0 in F and k_j >= 0, or nullopt when v lies
// outside the open cone. Throws InputError when v is not in the lattice.
std::optional<ConePoint> decompose(const LatticeCone& cone, const ConeDecomposition& d,
                                   const IntVector& v);

// Character v -> prod_i m_i^{v_i} in ambient coordinates.
struct CharacterData {
  std::vector<GaussRational> multipliers;

  static CharacterData trivial(int rank);
  GaussRational value(const IntVector& v) const;
  std::complex<double> value_approx(const IntVector& v) const;
};

// sum_{v in F} v^lambda u^{alpha(v)} * prod_j 1 / (1 - a_j^lambda u_j^{alpha_j(a_j)}).
struct ConeSeries {
  struct Term {
    GaussRational coeff;
    IntVector exponents;  // exponent of u_1..u_r
  };
  struct Pole {
    GaussRational coeff;     // a_j^lambda
    std::int64_t exponent;   // alpha_j(a_j); the factor is 1 - coeff * u_j^exponent
  };
  std::vector<Term> terms;
  std::vector<Pole> poles;

  std::complex<double> evaluate(const std::vector<std::complex<double>>& u) const;
  GaussRational evaluate(const std::vector<GaussRational>& u) const;
  // |a_j^lambda u_j^{k_j}| < 1 for every j.
  bool converges_at(const std::vector<std::complex<double>>& u) const;
};

ConeSeries cone_series_closed_form(const LatticeCone& cone, const ConeDecomposition& d,
                                   const CharacterData& chi);

// Direct lattice sum over v in C with alpha_j(v) <= bound for every j.
// Enumerates the alpha-image box, independent of the decomposition.
std::complex<double> evaluate_partial_sum(const LatticeCone& cone, const CharacterData& chi,
                                          const std::vector<std::complex<double>>& u,
                                          std::int64_t bound);

// Smallest bound whose geometric tail sum_j |u_j|^B / (1 - |u_j|) is below eps.
std::int64_t oracle_bound(const std::vector<std::complex<double>>& u, double eps = 1e-12);
// Same, with |u_j| replaced by the per-step decay |a_j^lambda u_j^{k_j}|^{1/k_j}
// along each generator, which bounds the terms for non-unitary characters.
std::int64_t oracle_bound(const ConeSeries& s, const std::vector<std::complex<double>>& u,
                          double eps = 1e-12);

struct LedgerEntry {
  IntVector exponents;  // l(gamma), entries >= 0
  GaussRational weight;
};

using MultiSeries = std::map<IntVector, GaussRational>;

// sum weight * u^l over entries with total degree <= truncation; zero
// coefficients dropped. Throws InputError on negative exponents.
MultiSeries assemble_multivariable_S(const std::vector<LedgerEntry>& ledger, int truncation);

// Rank-one ledger of the given classes (one entry per class, no expansion).
std::vector<LedgerEntry> ledger_from_classes(const std::vector<GeodesicClass>& classes);

}  // namespace btz
