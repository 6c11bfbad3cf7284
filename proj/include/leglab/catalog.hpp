#pragma once

#include <memory>
#include <optional>

#include "leglab/conormal.hpp"

namespace leglab {

struct CatalogError : Error {
  using Error::Error;
};

struct CatalogEntry {
  std::string name;  // canonical, e.g. "p1xQ(3)"
  std::string family;
  std::vector<std::pair<std::string, std::string>> builder_params;
  std::shared_ptr<const ParamVariety> variety;
  std::shared_ptr<const ImplicitHypersurface> hypersurface;
  std::shared_ptr<const ParamVariety> conormal_source;  // Z for lifted entries
  // Attached split form for hypersurface entries; parametrized entries are fitted.
  std::optional<SymplecticForm> attached_form;
  int expected_dimension = 0;  // of the variety, or of Z for hypersurfaces
  std::size_t expected_ambient = 0;
  std::vector<QVector> known_singular;
  Backend recommended_backend = Backend::exact;

  bool is_hypersurface() const { return static_cast<bool>(hypersurface); }
};

// (1, w, grad N(w), N(w)) for a cubic form N on u variables.
ParamVariety cubic_form_variety(const std::string& name, const MultiPoly& n);

std::vector<std::string> catalog_names();

// Constructs an entry without fitting or checking it. Throws CatalogError for
// unknown names or bad builder parameters.
CatalogEntry catalog_build(const std::string& name);

// Fit on frames sampled until the pair equations number 3x the unknowns.
// Cached per variety; safe to call concurrently.
FitResult fitted_form_family(const ParamVariety& x, std::uint64_t seed = 0);

// The entry's symplectic form: the attached one, or the unique fitted one.
// Throws CatalogError when the fit is not a single nondegenerate form.
SymplecticForm entry_form(const CatalogEntry& e);

// Fit dimension 1 and nondegenerate, then the Legendrian check at `nsamples`.
// Hypersurface entries: the listed nodes are verified exactly, then the lift
// is checked on the recommended backend.
Report self_check(const CatalogEntry& e, std::size_t nsamples = 50, std::uint64_t seed = 0);

// Built and self-checked; a failing entry is not served (CatalogError).
CatalogEntry catalog_get(const std::string& name);

}  // namespace leglab
