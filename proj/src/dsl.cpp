#include "leglab/dsl.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace leglab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_names(std::string_view s, std::size_t off) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = std::min(s.find(',', start), s.size());
    const auto item = trim(s.substr(start, comma - start));
    if (item.empty()) throw ParseError("empty name in list", off + start);
    for (char c : item)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
        throw ParseError("bad name '" + std::string(item) + "'", off + start);
    if (std::isdigit(static_cast<unsigned char>(item[0]))) throw ParseError("name starts with a digit", off + start);
    out.emplace_back(item);
    start = comma + 1;
  }
  return out;
}

MultiPoly poly_at(std::string_view text, const std::vector<std::string>& vars, std::size_t off) {
  try {
    return parse_poly(text, vars);
  } catch (const ParseError& e) {
    throw ParseError("bad polynomial", off + e.offset);
  } catch (const UnknownVariable& e) {
    throw ParseError(e.what(), off);
  }
}

QVector rationals_at(std::string_view text, std::size_t off) {
  QVector v;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string item(trim(text.substr(start, comma - start)));
    try {
      v.push_back(parse_rational(item));
    } catch (const std::invalid_argument&) {
      throw ParseError("bad rational '" + item + "'", off + start);
    }
    start = comma + 1;
  }
  return v;
}

QMatrix matrix_at(std::string_view text, std::size_t off) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("bad matrix", off + (e.byte > 0 ? e.byte - 1 : 0));
  }
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a nonempty array of rows", off);
  std::vector<QVector> rows;
  for (const auto& r : j) {
    if (!r.is_array() || r.size() != j.size()) throw ParseError("matrix must be square", off);
    QVector row;
    for (const auto& x : r) {
      try {
        if (x.is_number_integer())
          row.push_back(Rational(std::to_string(x.get<long long>())));
        else if (x.is_string())
          row.push_back(parse_rational(x.get<std::string>()));
        else
          throw std::invalid_argument("entry");
      } catch (const std::invalid_argument&) {
        throw ParseError("matrix entries must be integers or \"p/q\" strings", off);
      }
    }
    rows.push_back(std::move(row));
  }
  return QMatrix::from_rows(rows);
}

}  // namespace

VarietySpec parse_dsl(std::string_view text) {
  VarietySpec spec;
  bool have_name = false, have_form = false;
  std::optional<std::vector<std::string>> params, vars;
  std::vector<std::string> fiber;
  std::optional<std::size_t> ambient;
  std::vector<MultiPoly> coords;
  std::optional<MultiPoly> equation;
  std::vector<std::pair<std::string, std::size_t>> coord_text, node_text;
  std::pair<std::string, std::size_t> equation_text;

  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view raw = text.substr(pos, end - pos);
    const std::string_view line = trim(raw);
    const std::size_t off = pos + (line.empty() ? 0 : static_cast<std::size_t>(line.data() - raw.data()));
    pos = end + 1;
    if (line.empty() || line[0] == '#') continue;
    const std::size_t sp = std::min(line.find_first_of(" \t"), line.size());
    const std::string key(line.substr(0, sp));
    const std::string_view rest = trim(line.substr(sp));
    const std::size_t roff = off + (line.size() - rest.size());

    if (key == "variety") {
      if (have_name) throw ParseError("duplicate variety line", off);
      if (rest.size() < 2 || rest.front() != '"' || rest.back() != '"') throw ParseError("expected a quoted name", roff);
      spec.name = std::string(rest.substr(1, rest.size() - 2));
      if (spec.name.empty() || spec.name.find('"') != std::string::npos) throw ParseError("bad variety name", roff);
      have_name = true;
    } else if (key == "params") {
      if (params) throw ParseError("duplicate params line", off);
      std::string_view list = rest;
      const std::size_t br = rest.find('[');
      if (br != std::string_view::npos) {
        const std::string_view tail = trim(rest.substr(br));
        const std::string_view tag = "[fiber:";
        if (tail.substr(0, tag.size()) != tag || tail.back() != ']') throw ParseError("expected [fiber: names]", roff + br);
        const std::string_view inner = tail.substr(tag.size(), tail.size() - tag.size() - 1);
        fiber = split_names(trim(inner), roff + br + tag.size());
        list = trim(rest.substr(0, br));
      }
      params = split_names(list, roff);
    } else if (key == "vars") {
      if (vars) throw ParseError("duplicate vars line", off);
      vars = split_names(rest, roff);
    } else if (key == "ambient") {
      if (ambient) throw ParseError("duplicate ambient line", off);
      try {
        std::size_t used = 0;
        const long d = std::stol(std::string(rest), &used);
        if (used != rest.size() || d < 1) throw std::invalid_argument("ambient");
        ambient = static_cast<std::size_t>(d);
      } catch (const std::exception&) {
        throw ParseError("ambient must be a positive integer", roff);
      }
    } else if (key == "coord") {
      coord_text.emplace_back(std::string(rest), roff);
    } else if (key == "equation") {
      if (!equation_text.first.empty()) throw ParseError("duplicate equation line", off);
      equation_text = {std::string(rest), roff};
      if (rest.empty()) throw ParseError("empty equation", roff);
    } else if (key == "node") {
      node_text.emplace_back(std::string(rest), roff);
    } else if (key == "form") {
      if (have_form) throw ParseError("duplicate form line", off);
      have_form = true;
      if (rest == "standard") {
        spec.form = FormMode::standard;
      } else if (rest == "fit") {
        spec.form = FormMode::fit;
      } else if (rest.substr(0, 8) == "explicit") {
        spec.form = FormMode::explicit_matrix;
        const auto m = trim(rest.substr(8));
        spec.explicit_form = matrix_at(m, roff + (rest.size() - m.size()));
      } else {
        throw ParseError("form must be standard, fit or explicit", roff);
      }
    } else {
      throw ParseError("unknown directive '" + key + "'", off);
    }
  }
  if (!have_name) throw ParseError("missing variety line", 0);
  if (params && vars) throw ParseError("params and vars cannot both appear", text.size());
  if (vars) {
    if (equation_text.first.empty()) throw ParseError("missing equation line", text.size());
    if (!coord_text.empty() || ambient) throw ParseError("coord and ambient lines need params", coord_text.empty() ? text.size() : coord_text[0].second);
    try {
      spec.hypersurface = std::make_shared<const ImplicitHypersurface>(spec.name, poly_at(equation_text.first, *vars, equation_text.second));
    } catch (const PreconditionError& e) {
      throw ParseError(e.what(), equation_text.second);
    }
    for (const auto& [s, o] : node_text) {
      auto v = rationals_at(s, o);
      if (v.size() != vars->size()) throw ParseError("node has the wrong number of coordinates", o);
      spec.nodes.push_back(std::move(v));
    }
    if (spec.form == FormMode::fit || spec.form == FormMode::explicit_matrix)
      throw ParseError("hypersurfaces carry the split form; use 'form standard' or omit the line", text.size());
    return spec;
  }
  if (!params) throw ParseError("missing params or vars line", text.size());
  if (!equation_text.first.empty() || !node_text.empty()) throw ParseError("equation and node lines need vars", text.size());
  if (!ambient) throw ParseError("missing ambient line", text.size());
  if (coord_text.size() != *ambient)
    throw ParseError("ambient " + std::to_string(*ambient) + " but " + std::to_string(coord_text.size()) + " coord lines",
                     coord_text.empty() ? text.size() : coord_text.back().second);
  for (const auto& [s, o] : coord_text) coords.push_back(poly_at(s, *params, o));
  try {
    spec.variety = std::make_shared<const ParamVariety>(spec.name, *params, std::move(coords), fiber);
  } catch (const Error& e) {
    throw ParseError(e.what(), 0);
  }
  if (spec.explicit_form && spec.explicit_form->rows() != *ambient)
    throw ParseError("explicit form size does not match ambient", text.size());
  return spec;
}

VarietySpec load_dsl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_dsl(ss.str());
}

std::string export_dsl(const VarietySpec& spec) {
  std::ostringstream out;
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s;
  };
  out << "variety \"" << spec.name << "\"\n";
  if (spec.is_hypersurface()) {
    out << "vars " << join(spec.hypersurface->vars()) << "\n";
    out << "equation " << spec.hypersurface->equation().to_string() << "\n";
    for (const auto& n : spec.nodes) {
      std::vector<std::string> s;
      for (const auto& x : n) s.push_back(rational_string(x));
      out << "node " << join(s) << "\n";
    }
    if (spec.form == FormMode::standard) out << "form standard\n";
    return out.str();
  }
  const auto& x = *spec.variety;
  out << "params " << join(x.params());
  if (x.declared_fiber()) {
    std::vector<std::string> f;
    for (auto i : x.fiber_linear()) f.push_back(x.params()[i]);
    out << " [fiber: " << join(f) << "]";
  }
  out << "\nambient " << x.ambient() << "\n";
  for (const auto& c : x.coords()) out << "coord " << c.to_string() << "\n";
  switch (spec.form) {
    case FormMode::standard:
      out << "form standard\n";
      break;
    case FormMode::fit:
      out << "form fit\n";
      break;
    case FormMode::explicit_matrix: {
      nlohmann::json m = nlohmann::json::array();
      const auto& f = *spec.explicit_form;
      for (std::size_t i = 0; i < f.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < f.cols(); ++j) {
          const Rational& v = f(i, j);
          if (v.get_den() == 1 && v.get_num().fits_slong_p())
            row.push_back(v.get_num().get_si());
          else
            row.push_back(rational_string(v));
        }
        m.push_back(row);
      }
      out << "form explicit " << m.dump() << "\n";
      break;
    }
    case FormMode::unspecified:
      break;
  }
  return out.str();
}

VarietySpec spec_from_entry(const CatalogEntry& e) {
  VarietySpec s;
  s.name = e.name;
  s.variety = e.variety;
  s.hypersurface = e.hypersurface;
  s.nodes = e.known_singular;
  s.form = e.is_hypersurface() ? FormMode::standard : FormMode::fit;
  return s;
}

bool same_variety(const VarietySpec& a, const VarietySpec& b) {
  if (a.name != b.name || a.form != b.form || a.explicit_form != b.explicit_form || a.nodes != b.nodes) return false;
  if (a.is_hypersurface() != b.is_hypersurface()) return false;
  if (a.is_hypersurface()) return a.hypersurface->equation() == b.hypersurface->equation();
  const auto& x = *a.variety;
  const auto& y = *b.variety;
  return x.params() == y.params() && x.coords() == y.coords() && x.declared_fiber() == y.declared_fiber() &&
         x.fiber_linear() == y.fiber_linear();
}

}  // namespace leglab
