#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "btz/complex.hpp"
#include "btz/cone_zeta.hpp"
#include "btz/generators.hpp"
#include "btz/geodesics.hpp"
#include "btz/polynomial.hpp"
#include "btz/rh_analysis.hpp"

namespace btz {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVerifySchema = "btz.verify/1";
inline constexpr const char* kConeSchema = "btz.cone/1";

// JSON encodings shared by the CLI and the Python module. Integers that may
// exceed 64 bits are decimal strings.
Json to_json(const IntPolynomial& p);
Json to_json(const RationalFn& f);
Json to_json(const PowerSeriesPrefix& s);
Json to_json(const WeightedSeries& s);
Json to_json(const RHReport& r);
Json to_json(const ConeSeries& s);
Json to_json(const SimplexCounts& c);

IntPolynomial polynomial_from_json(const Json& j);
RationalFn rational_from_json(const Json& j);

struct VerifyOptions {
  int max_order = kDefaultMaxOrder;
  bool allow_large = false;
  bool timings = true;
  double tol = 1e-9;
  std::optional<TorusGeometry> torus;  // enables the geometric line oracle
};

struct PipelineReport {
  Json doc;
  bool passed = false;
  // Name of the stage that raised, if any ("validate", "operators", ...).
  std::optional<std::string> failed_stage;
  std::optional<std::string> error;
  // "input", "domain", "resource" or "internal", from the exception type.
  std::optional<std::string> error_kind;
};

// validate -> operators -> Z1, Z2 -> log-derivatives -> brute-force counts ->
// exact comparisons -> primitive product vs the zeta quotients -> RH report.
// passed is true iff every mandatory check passes: duality for both kinds,
// primitive-power structure, the exp/product identity and, when a torus
// geometry is supplied, the line oracle.
PipelineReport run_verify(const TypedComplex& c, const VerifyOptions& opts = {});

struct ConeArgs {
  std::vector<IntVector> functionals;
  std::optional<std::vector<IntVector>> lattice;  // basis vectors; default Z^r
  std::optional<std::vector<GaussRational>> character;
  std::optional<std::vector<std::complex<double>>> eval;
  std::optional<std::int64_t> oracle_bound;
};

// Generators, fundamental set, closed form and (with eval) the partial-sum
// comparison. Throws InputError on inconsistent dimensions.
Json run_cone(const ConeArgs& args);

}  // namespace btz
