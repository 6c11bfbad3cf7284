#pragma once

#include <memory>
#include <optional>
#include <string_view>

#include "leglab/catalog.hpp"

namespace leglab {

enum class FormMode { unspecified, standard, fit, explicit_matrix };

// Contents of a variety definition file:
//
//   variety "name"
//   params t, s [fiber: s]
//   ambient 6
//   coord <poly>            (ambient times)
//   form standard | fit | explicit [[0, 1], [-1, 0]]
//
// or, for a hypersurface Z in P(W),
//
//   variety "name"
//   vars x, y, z
//   equation <poly>
//   node 0, 0, 1            (optional, repeatable)
//
// '#' starts a comment line.
struct VarietySpec {
  std::string name;
  std::shared_ptr<const ParamVariety> variety;
  std::shared_ptr<const ImplicitHypersurface> hypersurface;
  FormMode form = FormMode::unspecified;
  std::optional<QMatrix> explicit_form;
  std::vector<QVector> nodes;

  bool is_hypersurface() const { return static_cast<bool>(hypersurface); }
};

// Throws ParseError with the byte offset into `text`.
VarietySpec parse_dsl(std::string_view text);
VarietySpec load_dsl(const std::string& path);
std::string export_dsl(const VarietySpec& spec);

VarietySpec spec_from_entry(const CatalogEntry& e);

// Same name, variables, canonical polynomials, fiber declaration and form line.
bool same_variety(const VarietySpec& a, const VarietySpec& b);

}  // namespace leglab
