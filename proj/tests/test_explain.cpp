#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"

#include "idslab/error.hpp"
#include "idslab/explain.hpp"
#include "idslab/mlp.hpp"
#include "idslab/preprocess.hpp"
#include "idslab/rng.hpp"
#include "idslab/shapley.hpp"
#include "idslab/synth.hpp"

using namespace idslab;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  Matrix m(r, c);
  for (auto& v : m.data()) v = rng.normal();
  return m;
}

/// A small MLP trained for a few epochs on a random labelling.
MlpModel toy_model(std::size_t m, Rng& rng) {
  MlpConfig cfg;
  cfg.hidden_layers = {6};
  cfg.activation = Activation::Tanh;
  cfg.max_epochs = 5;
  cfg.learning_rate = 0.05;
  const Matrix x = random_matrix(40, m, rng);
  std::vector<int> y(40);
  for (std::size_t i = 0; i < 40; ++i) y[i] = x(i, 0) + 0.5 * x(i, m - 1) > 0 ? 1 : 0;
  y[0] = 0;
  y[1] = 1;
  auto model = init_model(cfg, m, 2, rng);
  return train(std::move(model), x, y, cfg, rng);
}

ModelFn model_fn(const MlpModel& model) {
  return [&model](const Matrix& rows) { return forward(model, rows); };
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

Explanation handmade(Matrix phi, std::vector<std::string> names) {
  Explanation e;
  e.feature_values = Matrix(phi.rows(), phi.cols(), 1.0);
  e.predictions.assign(phi.rows(), 0.0);
  e.phi = std::move(phi);
  e.feature_names = std::move(names);
  e.target_name = "attack";
  return e;
}

}  // namespace

TEST_SUITE("exact") {
  TEST_CASE("constant model") {
    Rng rng(1);
    const auto bg = random_matrix(4, 3, rng);
    const std::vector<double> x{1, 2, 3};
    const auto v = exact_shapley(scalar_model([](std::span<const double>) { return 2.5; }), bg, x);
    for (double p : v.phi.data()) CHECK(p == 0.0);
    CHECK(v.base_value[0] == 2.5);
  }

  TEST_CASE("linear model with one background row") {
    const std::vector<double> w{0.5, -2.0, 3.0};
    const auto f = scalar_model([&](std::span<const double> s) {
      return w[0] * s[0] + w[1] * s[1] + w[2] * s[2] + 7.0;
    });
    const Matrix bg{{1.0, -1.0, 0.25}};
    const std::vector<double> x{3.0, 2.0, -1.0};
    const auto v = exact_shapley(f, bg, x);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(v.phi(0, j) == doctest::Approx(w[j] * (x[j] - bg(0, j))).epsilon(1e-14));
    }
  }

  TEST_CASE("symmetric features share credit") {
    const auto f = scalar_model([](std::span<const double> s) { return s[0] + s[1] + s[0] * s[1]; });
    const Matrix bg{{0.3, 0.3}, {-1.0, -1.0}, {2.0, 2.0}};
    const std::vector<double> x{1.5, 1.5};
    const auto v = exact_shapley(f, bg, x);
    CHECK(std::abs(v.phi(0, 0) - v.phi(0, 1)) < 1e-12);
  }

  TEST_CASE("capacity limit") {
    const Matrix bg(1, 13);
    const std::vector<double> x(13, 0.0);
    try {
      (void)exact_shapley(scalar_model([](std::span<const double>) { return 0.0; }), bg, x);
      FAIL("expected a capacity error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Capacity);
      CHECK(std::string(e.what()).find("kernel") != std::string::npos);
    }
  }
}

TEST_SUITE("kernel") {
  TEST_CASE("kernel weights") {
    CHECK(shapley_kernel_weight(4, 1) == doctest::Approx(3.0 / (4.0 * 1 * 3)));
    CHECK(shapley_kernel_weight(4, 2) == doctest::Approx(3.0 / (6.0 * 2 * 2)));
    CHECK(shapley_kernel_weight(5, 1) == shapley_kernel_weight(5, 4));
  }

  TEST_CASE("full enumeration matches exact Shapley on trained toy MLPs") {
    Rng rng(2718);
    for (std::size_t m = 2; m <= 8; ++m) {
      for (int trial = 0; trial < 10; ++trial) {
        CAPTURE(m);
        CAPTURE(trial);
        const auto model = toy_model(m, rng);
        const auto bg = random_matrix(8, m, rng);
        const auto x = random_matrix(1, m, rng);
        const auto exact = exact_shapley(model_fn(model), bg, x.row(0));
        KernelShapConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(trial);
        const auto kernel = kernel_shap(model_fn(model), bg, x.row(0), cfg);
        CHECK(max_abs_diff(exact.phi, kernel.phi) < 1e-8);
        for (std::size_t c = 0; c < 2; ++c) {
          double sum = kernel.base_value[c];
          for (std::size_t j = 0; j < m; ++j) sum += kernel.phi(c, j);
          CHECK(std::abs(sum - kernel.prediction[c]) < 1e-6);
        }
        // Class probabilities sum to one, so attributions cancel across classes.
        for (std::size_t j = 0; j < m; ++j) CHECK(std::abs(kernel.phi(0, j) + kernel.phi(1, j)) < 1e-6);
      }
    }
  }

  TEST_CASE("dummy feature gets zero") {
    Rng rng(5);
    const auto f = scalar_model([](std::span<const double> s) {
      return std::tanh(s[0] * s[2]) + s[3] * s[3] - 0.5 * s[4];
    });
    const auto bg = random_matrix(6, 5, rng);
    const auto x = random_matrix(1, 5, rng);
    const auto v = kernel_shap(f, bg, x.row(0), KernelShapConfig{});
    CHECK(std::abs(v.phi(0, 1)) < 1e-8);
  }

  TEST_CASE("sampling mode keeps local accuracy and is seeded") {
    Rng rng(8);
    const auto model = toy_model(10, rng);
    const auto bg = random_matrix(10, 10, rng);
    const auto x = random_matrix(1, 10, rng);
    KernelShapConfig cfg;
    cfg.max_coalitions = 512;
    cfg.seed = 4;
    const auto a = kernel_shap(model_fn(model), bg, x.row(0), cfg);
    const auto b = kernel_shap(model_fn(model), bg, x.row(0), cfg);
    CHECK(a.phi == b.phi);
    double sum = a.base_value[1];
    for (std::size_t j = 0; j < 10; ++j) sum += a.phi(1, j);
    CHECK(std::abs(sum - a.prediction[1]) < 1e-6);
    const auto exact = exact_shapley(model_fn(model), bg, x.row(0));
    CHECK(max_abs_diff(exact.phi, a.phi) < 0.05);
  }

  TEST_CASE("regularized solve") {
    const Matrix a{{4, 1}, {1, 3}};
    const Matrix b{{1}, {2}};
    const auto x = solve_regularized(a, b, 1e-6);
    CHECK(x(0, 0) == doctest::Approx(1.0 / 11.0).epsilon(1e-12));
    CHECK(x(1, 0) == doctest::Approx(7.0 / 11.0).epsilon(1e-12));
    const Matrix bad{{-1, 0}, {0, -1}};
    CHECK_THROWS_AS(solve_regularized(bad, b, 1e-6), Error);
  }
}

TEST_SUITE("plot data") {
  TEST_CASE("global importance ranking") {
    const auto e = handmade(Matrix{{0.3, -0.5}}, {"f1", "f2"});
    const auto r = global_importance(e);
    CHECK(r[0].name == "f2");
    CHECK(r[0].mean_abs_phi == 0.5);
    CHECK(r[1].name == "f1");
    const auto zero = global_importance(handmade(Matrix(3, 3), {"a", "b", "c"}));
    CHECK(zero[0].feature == 0);
    CHECK(zero[1].feature == 1);
    CHECK(zero[2].feature == 2);
  }

  TEST_CASE("force, beeswarm and dependence") {
    auto e = handmade(Matrix{{0.1, -0.4, 0.2}, {0.0, 0.3, -0.6}}, {"a", "b", "c"});
    e.base_value = 0.5;
    e.predictions = {0.4, 0.2};
    e.feature_values = Matrix{{1, 2, 3}, {4, 5, 6}};
    const auto f = force_data(e, 0);
    CHECK(f.stripes[0].name == "b");
    CHECK(f.stripes[0].sign == -1);
    CHECK(f.stripes[0].raw_value == 2.0);
    double sum = f.base_value;
    for (const auto& s : f.stripes) sum += s.phi;
    CHECK(std::abs(sum - f.prediction) < 1e-12);
    CHECK_THROWS_AS(force_data(e, 2), Error);

    const auto swarm = beeswarm_data(e);
    const auto rank = global_importance(e);
    REQUIRE(swarm.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) CHECK(swarm[k].feature == rank[k].feature);
    CHECK(swarm[0].value_rank == std::vector<double>{0.0, 1.0});

    const auto dep = dependence_data(e, 2);
    CHECK(dep.raw_value == std::vector<double>{3, 6});
    CHECK(dep.phi == std::vector<double>{0.2, -0.6});
    CHECK_THROWS_AS(dependence_data(e, 3), Error);
  }

  TEST_CASE("normalized ranks average ties") {
    CHECK(normalized_ranks({5.0}) == std::vector<double>{0.5});
    CHECK(normalized_ranks({3.0, 1.0, 3.0, 2.0}) == std::vector<double>{2.5 / 3.0, 0.0, 2.5 / 3.0, 1.0 / 3.0});
  }
}

TEST_SUITE("model explanations") {
  TEST_CASE("per-class explanations satisfy local accuracy") {
    Rng rng(12);
    const auto model = toy_model(4, rng);
    const auto bg = random_matrix(10, 4, rng);
    const auto inputs = random_matrix(5, 4, rng);
    KernelShapConfig cfg;
    const auto ex = explain_model(model, bg, inputs, inputs, {"a", "b", "c", "d"}, {"x", "y"}, cfg);
    REQUIRE(ex.size() == 2);
    for (const auto& e : ex) {
      for (std::size_t i = 0; i < e.n_samples(); ++i) {
        double sum = e.base_value;
        for (std::size_t j = 0; j < 4; ++j) sum += e.phi(i, j);
        CHECK(std::abs(sum - e.predictions[i]) < 1e-6);
      }
    }
    CHECK(ex[1].target_name == "y");
    const auto picked = select_background(inputs, 3, 9);
    CHECK(picked.rows() == 3);
    CHECK(select_background(inputs, 50, 9).rows() == 5);
  }

  TEST_CASE("sampled top-3 ranking is stable across seeds on planted data") {
    SynthSpec spec;
    spec.informative = {2, 5, 9};
    const auto data = synthesize(spec);
    const auto scaler = fit_scaler(data.dataset.x);
    const Matrix x = apply_scaler(scaler, data.dataset.x);
    MlpConfig cfg;
    cfg.hidden_layers = {16};
    cfg.max_epochs = 60;
    Rng init_rng(1), train_rng(2);
    const auto model = train(init_model(cfg, 20, 2, init_rng), x, data.dataset.y, cfg, train_rng);

    std::vector<std::size_t> rows(30);
    std::iota(rows.begin(), rows.end(), std::size_t{185});
    const Matrix inputs = x.select_rows(rows);
    const Matrix bg = select_background(x, 20, 3);
    std::vector<std::string> names = synthetic_feature_names(20);
    auto top3 = [&](std::uint64_t seed) {
      KernelShapConfig k;
      k.max_coalitions = 4096;
      k.seed = seed;
      const auto ex = explain_model(model, bg, inputs, inputs, names, {"direct_attack", "legitimate"}, k);
      const auto rank = global_importance(ex[0]);
      std::vector<std::size_t> out{rank[0].feature, rank[1].feature, rank[2].feature};
      return out;
    };
    const auto a = top3(1);
    const auto b = top3(2);
    CHECK(a == b);
    std::vector<std::size_t> sorted = a;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<std::size_t>{2, 5, 9});
  }
}
