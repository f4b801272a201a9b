#include <doctest.h>

#include <cstdio>
#include <string>

#include "ipp/io.hpp"

using namespace ipp;

TEST_CASE("point pattern CSV round-trip") {
  PointPattern p(Window::unit_square());
  p.points = {{0.125, 0.25, 0}, {0.999, 0.001, 0}, {1.0 / 3.0, 2.0 / 3.0, 0}};
  const auto text = pattern_to_csv(p);
  CHECK(text.rfind("x,y\n", 0) == 0);
  const auto back = pattern_from_csv(text, p.window);
  REQUIRE(back.size() == p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(back.points[i][0] == p.points[i][0]);
    CHECK(back.points[i][1] == p.points[i][1]);
  }
}

TEST_CASE("pattern CSV validates the dimension") {
  CHECK_THROWS(pattern_from_csv("x,y,z\n1,2,3\n", Window::unit_square()));
  CHECK_THROWS(pattern_from_csv("x,y\n1\n", Window::unit_square()));
  CHECK_THROWS(pattern_from_csv("", Window::unit_square()));
}

TEST_CASE("grid CSV round-trip") {
  GridField g(Window::unit_square(), {3, 2, 1});
  g.values = {1, 2, 3, 4, 5, 6.5};
  const auto text = grid_to_csv(g);
  CHECK(text.rfind("3,2\n", 0) == 0);
  const auto back = grid_from_csv(text, g.window);
  CHECK(back.resolution == g.resolution);
  CHECK(back.values == g.values);
  CHECK_THROWS(grid_from_csv("3,2\n1\n2\n", g.window));
}

TEST_CASE("PGM rendering") {
  GridField g(Window::unit_square(), {2, 2, 1});
  g.values = {0.0, 0.5, 0.75, 1.0};
  const std::string path = "/tmp/ipp_test_grid.pgm";
  write_grid_pgm(path, g);
  const auto text = read_text_file(path);
  CHECK(text.rfind("P2\n2 2\n255\n", 0) == 0);
  CHECK(text.find("255") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("model config JSON round-trip") {
  ModelConfig cfg;
  cfg.window = Window(2, {0, 0, 0}, {2, 2, 0});
  cfg.seed = 99;
  cfg.model = InterruptedModel(
      BaseProcessModel::dpp(DppKernel(250.0, CorrelationModel(CorrelationFamily::Gaussian, 0.03))),
      SelectionModel::chi2_from_q(2, 0.4, CorrelationModel(CorrelationFamily::WhittleMatern, 0.05, 1.5)),
      2);
  const auto text = model_to_json(cfg);
  const auto back = model_from_json(text);
  CHECK(back.seed == 99);
  CHECK(back.window.upper[0] == doctest::Approx(2.0));
  CHECK(back.model.base.kind == BaseProcessKind::Dpp);
  CHECK(back.model.base.kernel.variance == doctest::Approx(250.0));
  CHECK(back.model.selection.k == 2);
  CHECK(back.model.selection.correlation.family == CorrelationFamily::WhittleMatern);
  CHECK(back.model.selection.correlation.shape == doctest::Approx(1.5));
  CHECK(back.model.q() == doctest::Approx(0.4).epsilon(1e-9));
}

TEST_CASE("model config accepts q or the native parameter") {
  const std::string chi = R"({
    "dim": 2,
    "base": {"type": "poisson", "rho": 100.0},
    "selection": {"type": "chi2", "k": 1, "q": 0.5,
                  "correlation": {"family": "gaussian", "scale": 0.05}}
  })";
  const auto a = model_from_json(chi);
  CHECK(a.model.q() == doctest::Approx(0.5).epsilon(1e-12));
  const std::string boo = R"({
    "dim": 2,
    "base": {"type": "matern2", "rho_phi": 1736.0, "D": 0.015},
    "selection": {"type": "boolean", "q": 0.5, "complement": true,
                  "radius": {"type": "beta", "alpha": 2.0, "beta": 5.0}}
  })";
  const auto b = model_from_json(boo);
  CHECK(b.model.selection.complement);
  CHECK(b.model.q() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(b.window.dim == 2);  // default unit square
}

TEST_CASE("malformed configs are rejected") {
  CHECK_THROWS(model_from_json("{"));
  CHECK_THROWS(model_from_json(R"({"dim": 2, "base": {"type": "weird"},
    "selection": {"type": "chi2", "k": 1, "q": 0.5,
                  "correlation": {"family": "gaussian", "scale": 0.05}}})"));
  CHECK_THROWS(read_model_json("/nonexistent/path.json"));
}
