#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "json.hpp"

#include "crgen/bounds.hpp"

using namespace crgen;

TEST_CASE("free bound closed form and endpoints") {
  CHECK(bound_free(0.5, 1.0) == doctest::Approx(0.7937005259840997).epsilon(1e-14));
  CHECK(bound_free(1.0, 5.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(bound_free(0.0, 3.0) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(bound_free(0.3, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(bound_free(-0.1, 1.0), std::domain_error);
  CHECK_THROWS_AS(bound_free(0.5, -1.0), std::domain_error);
}

TEST_CASE("classical and quantum lower bounds on frozen values") {
  CHECK(bound_classical_lb(0.5, 0.1, 100.0) ==
        doctest::Approx(40.11387212474169).epsilon(1e-13));
  CHECK(bound_quantum_lb(0.5, 0.1, 100.0) ==
        doctest::Approx(29.10604462522883).epsilon(1e-13));
  // heavy error tolerance clamps both to zero
  CHECK(bound_classical_lb(0.5, 0.9, 10.0) == 0.0);
  CHECK(bound_quantum_lb(0.5, 0.9, 10.0) == 0.0);
  // perfect correlation needs no communication
  CHECK(bound_classical_lb(1.0, 0.1, 10.0) == 0.0);
  CHECK(bound_quantum_lb(1.0, 0.1, 10.0) == 0.0);
  CHECK_THROWS_AS(bound_classical_lb(0.5, 0.0, 10.0), std::domain_error);
  CHECK_THROWS_AS(bound_classical_lb(0.5, 1.0, 10.0), std::domain_error);
  CHECK_THROWS_AS(bound_quantum_lb(0.5, 0.1, 0.5), std::domain_error);
}

TEST_CASE("numerical sweeps agree with the closed forms") {
  const double k = 50.0;
  for (double rho : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (double gamma : {0.01, 0.05, 0.2}) {
      CHECK(std::abs(bound_classical_sweep(rho, gamma, k) -
                     bound_classical_lb(rho, gamma, k)) <= 1e-6 * k);
      CHECK(std::abs(bound_quantum_sweep(rho, gamma, k) - bound_quantum_lb(rho, gamma, k)) <=
            1e-6 * k);
    }
  }
}

TEST_CASE("quantum messages beat classical ones, never the trivial bound") {
  for (double rho : {0.2, 0.5, 0.8}) {
    for (double gamma : {0.02, 0.1}) {
      const double c = bound_classical_lb(rho, gamma, 20.0);
      const double q = bound_quantum_lb(rho, gamma, 20.0);
      CHECK(q <= c + 1e-12);
      CHECK(c <= 20.0);
      CHECK(q >= 0.0);
    }
  }
}

TEST_CASE("rate quantities on frozen values and endpoints") {
  CHECK(superdense_rate(0.9) == doctest::Approx(1.4968162683194162).epsilon(1e-13));
  CHECK(superdense_rate(1.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(superdense_rate(0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(achievable_quantum_rate(0.5) == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(achievable_quantum_rate(0.9) == doctest::Approx(0.126936086960978).epsilon(1e-12));
  CHECK(achievable_quantum_rate(0.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(achievable_quantum_rate(1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(capacity_upper(0.6) == doctest::Approx(1.36).epsilon(1e-14));
}

TEST_CASE("superdense rate is monotone and capped by the capacity") {
  double prev = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double rho = i / 100.0;
    const double r = superdense_rate(rho);
    CHECK(r >= prev - 1e-12);
    CHECK(r <= capacity_upper(rho) + 1e-9);
    prev = r;
  }
}

TEST_CASE("model names round trip") {
  for (auto model : {BoundModel::free, BoundModel::classical, BoundModel::quantum,
                     BoundModel::capacity, BoundModel::superdense}) {
    CHECK(bound_model_from_name(bound_model_name(model)) == model);
  }
  CHECK_THROWS_AS(bound_model_from_name("banana"), std::invalid_argument);
}

TEST_CASE("linear_grid endpoints are exact") {
  const auto g = linear_grid(0.0, 1.0, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(g[2] == doctest::Approx(0.5).epsilon(1e-15));
  const auto single = linear_grid(0.25, 0.75, 1);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == 0.25);
  CHECK_THROWS_AS(linear_grid(0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("bound curves are ordered gamma-major and serialize deterministically") {
  const auto rhos = linear_grid(0.0, 0.8, 3);
  const std::vector<double> gammas{0.05, 0.1};
  const auto curve = evaluate_bound_curve(BoundModel::classical, rhos, gammas, 10.0);
  REQUIRE(curve.samples.size() == 6);
  CHECK(curve.samples[0].gamma == 0.05);
  CHECK(curve.samples[2].gamma == 0.05);
  CHECK(curve.samples[3].gamma == 0.1);
  CHECK(curve.samples[0].rho == 0.0);
  CHECK(curve.samples[1].rho == 0.4);

  const auto csv = curve_to_csv(curve);
  CHECK(csv.rfind("model,rho,gamma,value\n", 0) == 0);
  CHECK(csv == curve_to_csv(curve));
  // one line per sample plus header, trailing newline
  std::size_t lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 7);

  const auto parsed = nlohmann::json::parse(curve_to_json(curve));
  CHECK(parsed.at("meta").at("model") == "classical");
  CHECK(parsed.at("meta").at("k") == 10.0);
  CHECK(parsed.at("samples").size() == 6);
  CHECK(parsed.at("samples")[0].contains("rho"));
  CHECK(parsed.at("samples")[0].contains("gamma"));
  CHECK(parsed.at("samples")[0].contains("value"));

  // gamma-free models are sampled once per rho
  const auto free_curve =
      evaluate_bound_curve(BoundModel::free, rhos, linear_grid(0.05, 0.05, 1), 1.0);
  CHECK(free_curve.samples.size() == 3);
}

TEST_CASE("format_g12 prints 12 significant digits") {
  CHECK(format_g12(0.5) == "0.5");
  CHECK(format_g12(0.7937005259840997) == "0.793700525984");
  CHECK(format_g12(0.0) == "0");
  CHECK(format_g12(100.0) == "100");
}
