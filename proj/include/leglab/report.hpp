#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "leglab/scalar.hpp"

namespace leglab {

using Json = nlohmann::ordered_json;

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

struct Witness {
  std::vector<std::string> params;
  std::string detail;
};

// Outcome of one verification run. Exact data is kept as strings so that the
// JSON rendering is bit-stable.
struct Report {
  std::string kind;
  std::string variety;
  Backend backend = Backend::exact;
  long precision_bits = 0;
  std::uint64_t seed = 0;
  std::size_t samples_requested = 0;
  std::size_t samples_evaluated = 0;
  std::size_t ambient = 0;
  std::size_t expected_rank = 0;
  std::map<std::size_t, std::size_t> rank_histogram;
  std::size_t isotropy_violations = 0;
  std::size_t rank_failures = 0;
  std::optional<std::string> worst_residual;
  std::vector<Witness> witnesses;
  std::size_t witness_count = 0;  // may exceed witnesses.size()
  Json details = Json::object();
  Verdict verdict = Verdict::inconclusive;
  double seconds = 0;

  void add_witness(Witness w);
  // pass iff something was evaluated and nothing failed.
  void settle();
};

// Renders the report. JSON omits timings so equal configurations give
// byte-identical output.
Json report_json(const Report& r);
std::string render_report(const Report& r, const std::string& format);

}  // namespace leglab
