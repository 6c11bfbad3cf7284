#include "leglab/report.hpp"

#include <sstream>

namespace leglab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

void Report::add_witness(Witness w) {
  ++witness_count;
  if (witnesses.size() < 10) witnesses.push_back(std::move(w));
}

void Report::settle() {
  if (isotropy_violations > 0 || rank_failures > 0 || witness_count > 0)
    verdict = Verdict::fail;
  else if (samples_evaluated == 0)
    verdict = Verdict::inconclusive;
  else
    verdict = Verdict::pass;
}

Json report_json(const Report& r) {
  Json j;
  j["schema"] = 1;
  j["kind"] = r.kind;
  j["variety"] = r.variety;
  j["backend"] = to_string(r.backend);
  if (r.backend == Backend::approx) j["precision_bits"] = r.precision_bits;
  j["seed"] = r.seed;
  j["samples_requested"] = r.samples_requested;
  j["samples_evaluated"] = r.samples_evaluated;
  j["ambient_dim"] = r.ambient;
  j["expected_rank"] = r.expected_rank;
  Json hist = Json::object();
  for (auto [k, v] : r.rank_histogram) hist[std::to_string(k)] = v;
  j["rank_histogram"] = hist;
  j["isotropy_violations"] = r.isotropy_violations;
  j["rank_failures"] = r.rank_failures;
  if (r.backend == Backend::approx) j["worst_residual"] = r.worst_residual.value_or("0");
  Json ws = Json::array();
  for (const auto& w : r.witnesses) ws.push_back(Json{{"params", w.params}, {"detail", w.detail}});
  j["witnesses"] = ws;
  j["witness_count"] = r.witness_count;
  j["details"] = r.details;
  j["verdict"] = to_string(r.verdict);
  return j;
}

std::string render_report(const Report& r, const std::string& format) {
  if (format == "json") return report_json(r).dump();
  std::ostringstream os;
  os << r.kind << " " << r.variety << ": " << to_string(r.verdict) << "\n";
  os << "  backend " << to_string(r.backend);
  if (r.backend == Backend::approx) os << " (" << r.precision_bits << " bits)";
  os << ", seed " << r.seed << "\n";
  os << "  samples " << r.samples_evaluated << "/" << r.samples_requested << ", ambient " << r.ambient
     << ", expected rank " << r.expected_rank << "\n";
  if (!r.rank_histogram.empty()) {
    os << "  ranks";
    for (auto [k, v] : r.rank_histogram) os << " " << k << ":" << v;
    os << "\n";
  }
  os << "  isotropy violations " << r.isotropy_violations << ", rank failures " << r.rank_failures << "\n";
  if (r.worst_residual) os << "  worst residual " << *r.worst_residual << "\n";
  for (const auto& w : r.witnesses) {
    os << "  witness";
    if (!w.params.empty()) {
      os << " at (";
      for (std::size_t i = 0; i < w.params.size(); ++i) os << (i ? ", " : "") << w.params[i];
      os << ")";
    }
    os << ": " << w.detail << "\n";
  }
  if (!r.details.empty()) os << "  details " << r.details.dump() << "\n";
  std::ostringstream t;
  t.precision(3);
  t << std::fixed << r.seconds;
  os << "  time " << t.str() << " s\n";
  return os.str();
}

}  // namespace leglab
