#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "leglab/cli.hpp"
#include "leglab/dsl.hpp"

using namespace leglab;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("leglab_test_" + name)).string();
}

const char* cubic_dsl = R"(# twisted cubic
variety "tc"
params t
ambient 4
coord 1
coord t
coord t^2
coord t^3
form explicit [[0, 0, 0, 1], [0, 0, -3, 0], [0, 3, 0, 0], [-1, 0, 0, 0]]
)";

}  // namespace

TEST_CASE("dsl parse") {
  const auto s = parse_dsl(cubic_dsl);
  CHECK(s.name == "tc");
  REQUIRE(s.variety);
  CHECK(s.variety->ambient() == 4);
  CHECK(s.form == FormMode::explicit_matrix);
  CHECK((*s.explicit_form)(1, 2) == -3);

  const auto f = parse_dsl("variety \"lift\"\nparams t, s [fiber: s]\nambient 2\ncoord 1\ncoord s*t\n");
  CHECK(f.variety->declared_fiber());
  CHECK(f.variety->fiber_linear() == std::vector<std::size_t>{1});
  CHECK(f.form == FormMode::unspecified);

  const auto h = parse_dsl("variety \"nodal\"\nvars x, y, z\nequation z*y^2 - x^3 - x^2*z\nnode 0, 0, 1\n");
  REQUIRE(h.is_hypersurface());
  CHECK(h.nodes == std::vector<QVector>{QVector{0, 0, 1}});
}

TEST_CASE("dsl errors carry offsets") {
  auto offset_of = [](const std::string& text) -> long {
    try {
      parse_dsl(text);
    } catch (const ParseError& e) {
      return static_cast<long>(e.offset);
    }
    return -1;
  };
  CHECK(offset_of("variety \"a\"\nfrob 1\n") == 12);
  // The polynomial starts at 37; the stray "*" is its third character.
  CHECK(offset_of("variety \"a\"\nparams t\nambient 1\ncoord t**2\n") == 39);
  CHECK(offset_of("variety \"a\"\nparams t\nambient 2\ncoord t\n") >= 0);
  CHECK(offset_of("params t\nambient 1\ncoord t\n") == 0);
  CHECK(offset_of("variety \"a\"\nparams t\nambient 1\ncoord u\n") == 37);
  CHECK(offset_of("variety \"a\"\nvars x, y\nequation x^2 + y\n") >= 0);
  CHECK(offset_of("variety \"a\"\nparams t\nambient 1\ncoord t\nform explicit [[0, 1]\n") >= 0);
  CHECK(offset_of("variety \"a\"\nparams t [fiber: t]\nambient 1\ncoord t^2\n") >= 0);
}

TEST_CASE("dsl round trip for catalog entries") {
  for (const char* name :
       {"twisted_cubic", "p1xQ(2)", "gr36", "lg36", "spinor6", "conic_conormal_demo", "nodal_cubic", "kummer"}) {
    CAPTURE(name);
    const auto s = spec_from_entry(catalog_build(name));
    const auto text = export_dsl(s);
    const auto back = parse_dsl(text);
    CHECK(same_variety(s, back));
    CHECK(export_dsl(back) == text);
  }
  const auto s = parse_dsl(cubic_dsl);
  CHECK(same_variety(s, parse_dsl(export_dsl(s))));
}

TEST_CASE("exit codes") {
  CHECK(run({"verify", "--catalog", "twisted_cubic", "--samples", "50", "--seed", "7"}).code == 0);
  const auto bad = run({"verify", "--catalog", "twisted_cubic", "--form", "standard"});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("\"verdict\":\"fail\"") != std::string::npos);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"verify"}).code == 2);
  CHECK(run({"verify", "--catalog", "e7"}).code == 2);
  CHECK(run({"verify", "--catalog", "twisted_cubic", "--backend", "fast"}).code == 2);
  CHECK(run({"fit-form", "--catalog", "twisted_cubic"}).code == 0);
  CHECK(run({"agree", "--catalog", "conic_conormal_demo", "--samples", "20"}).code == 0);
  CHECK(run({"agree", "--catalog", "conic_conormal_demo", "--samples", "20", "--permute"}).code == 1);
  CHECK(run({"extend", "--catalog", "nodal_cubic", "--samples", "20"}).code == 0);
  CHECK(run({"reduce", "--catalog", "p1xQ(2)", "--samples", "10"}).code == 0);
  CHECK(run({"reduce", "--catalog", "nodal_cubic"}).code == 2);
  CHECK(run({"catalog", "list"}).code == 0);
  CHECK(run({"catalog", "self-check", "twisted_cubic"}).code == 0);
  CHECK(run({"catalog", "self-check"}).code == 2);
}

TEST_CASE("report content") {
  const auto pass = run({"verify", "--catalog", "twisted_cubic"});
  CHECK(pass.out.find("\"verdict\":\"pass\"") != std::string::npos);
  CHECK(pass.out.find("\"isotropy_violations\":0") != std::string::npos);
  CHECK(pass.out.find("\"schema\":1") != std::string::npos);
  CHECK(pass.out.find("seconds") == std::string::npos);

  const auto approx = run({"verify", "--catalog", "twisted_cubic", "--backend", "approx", "--precision", "100"});
  CHECK(approx.code == 0);
  CHECK(approx.out.find("\"precision_bits\":100") != std::string::npos);
  CHECK(approx.out.find("\"worst_residual\"") != std::string::npos);

  const auto text = run({"verify", "--catalog", "twisted_cubic", "--format", "text"});
  CHECK(text.out.find("legendrian twisted_cubic: pass") == 0);
}

TEST_CASE("determinism and threads") {
  const std::vector<std::string> base{"extend", "--catalog", "conic_conormal_demo", "--samples", "30", "--seed", "3"};
  auto with_threads = [&](const char* n) {
    auto a = base;
    a.push_back("--threads");
    a.push_back(n);
    return run(a).out;
  };
  const auto one = with_threads("1");
  CHECK(one == with_threads("1"));
  CHECK(one == with_threads("8"));
  setenv("LEGLAB_THREADS", "4", 1);
  CHECK(run(base).out == one);
  unsetenv("LEGLAB_THREADS");
}

TEST_CASE("dsl files and output paths") {
  const auto dsl = temp_path("tc.lv");
  {
    std::ofstream f(dsl);
    f << cubic_dsl;
  }
  CHECK(run({"verify", "--dsl", dsl}).code == 0);
  CHECK(run({"verify", "--dsl", dsl, "--form", "standard"}).code == 1);
  CHECK(run({"fit-form", "--dsl", dsl}).code == 0);
  CHECK(run({"verify", "--dsl", dsl, "--catalog", "twisted_cubic"}).code == 2);
  CHECK(run({"verify", "--dsl", temp_path("missing.lv")}).code == 2);

  const auto out = temp_path("report.json");
  const auto r = run({"verify", "--dsl", dsl, "--output", out});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out);
  std::string line;
  std::getline(in, line);
  CHECK(line.find("\"variety\":\"tc\"") != std::string::npos);

  const auto exported = temp_path("nodal.lv");
  CHECK(run({"catalog", "build", "nodal_cubic", "--output", exported}).code == 0);
  CHECK(run({"extend", "--dsl", exported, "--samples", "10"}).code == 0);
  std::filesystem::remove(dsl);
  std::filesystem::remove(out);
  std::filesystem::remove(exported);
}
