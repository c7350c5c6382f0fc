#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"

#include "idslab/error.hpp"
#include "idslab/metrics.hpp"
#include "idslab/rng.hpp"

using namespace idslab;

namespace {

std::vector<std::string> rounded(const ClassReport& r, double ClassMetrics::*field) {
  std::vector<std::string> out;
  for (const auto& c : r.classes) out.push_back(format_2dp(c.*field));
  return out;
}

using S = std::vector<std::string>;

}  // namespace

TEST_CASE("confusion counts") {
  const std::vector<int> t{0, 1, 1}, p{0, 1, 1};
  const auto cm = confusion(t, p, 2);
  CHECK(cm.counts == std::vector<std::vector<std::size_t>>{{1, 0}, {0, 2}});
  CHECK(cm.class_names == S{"0", "1"});
  CHECK(cm.total() == 3);
  CHECK(cm.row_sum(1) == 2);
  const std::vector<int> bad{0, 2, 1};
  CHECK_THROWS_AS(confusion(t, bad, 2), Error);
  const std::vector<int> shorter{0, 1};
  CHECK_THROWS_AS(confusion(t, shorter, 2), Error);
  CHECK_THROWS_AS(make_confusion({{1, 2}}), Error);
  CHECK_THROWS_AS(report(make_confusion({{0, 0}, {0, 0}})), Error);
}

TEST_CASE("two-class table reproduces the published report") {
  const auto cm = make_confusion({{25, 15}, {3, 36}});
  const auto r = report(cm);
  CHECK(rounded(r, &ClassMetrics::precision) == S{"0.89", "0.71"});
  CHECK(rounded(r, &ClassMetrics::recall) == S{"0.62", "0.92"});
  CHECK(rounded(r, &ClassMetrics::f1) == S{"0.74", "0.80"});
  CHECK(r.classes[0].support == 40);
  CHECK(r.classes[1].support == 39);
  CHECK(format_2dp(r.accuracy) == "0.77");
  CHECK(format_2dp(r.macro_avg.precision) == "0.80");
  CHECK(format_2dp(r.macro_avg.recall) == "0.77");
  CHECK(format_2dp(r.macro_avg.f1) == "0.77");
  CHECK(format_2dp(r.weighted_avg.precision) == "0.80");
  CHECK(format_2dp(r.weighted_avg.recall) == "0.77");
  CHECK(format_2dp(r.weighted_avg.f1) == "0.77");
  // 25/40 is exactly 0.625 and rounds half to even.
  CHECK(r.classes[0].recall == 0.625);
}

TEST_CASE("three-class table reproduces the published report") {
  const auto r = report(make_confusion({{11, 0, 9}, {1, 1, 17}, {0, 0, 40}}));
  CHECK(rounded(r, &ClassMetrics::precision) == S{"0.92", "1.00", "0.61"});
  CHECK(rounded(r, &ClassMetrics::recall) == S{"0.55", "0.05", "1.00"});
  CHECK(rounded(r, &ClassMetrics::f1) == S{"0.69", "0.10", "0.75"});
  CHECK(format_2dp(r.accuracy) == "0.66");
  CHECK(format_2dp(r.weighted_avg.precision) == "0.78");
  CHECK(format_2dp(r.weighted_avg.recall) == "0.66");
  CHECK(format_2dp(r.weighted_avg.f1) == "0.58");
  // Column means of the rows above; the published macro precision differs.
  CHECK(format_2dp(r.macro_avg.precision) == "0.84");
  CHECK(format_2dp(r.macro_avg.recall) == "0.53");
  CHECK(format_2dp(r.macro_avg.f1) == "0.51");
}

TEST_CASE("zero division reports 0 with flags") {
  const auto r = report(make_confusion({{3, 0, 0}, {1, 0, 0}, {0, 0, 0}}));
  CHECK(r.classes[2].precision == 0.0);
  CHECK(r.classes[2].recall == 0.0);
  CHECK(r.classes[2].precision_zero_division);
  CHECK(r.classes[2].recall_zero_division);
  CHECK(r.classes[1].precision_zero_division);
  CHECK_FALSE(r.classes[1].recall_zero_division);
  CHECK_FALSE(r.classes[0].precision_zero_division);
}

TEST_CASE("brute-force oracle on random labelings") {
  Rng rng(123);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform() * 4);
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 50);
    std::vector<int> t(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = static_cast<int>(rng.uniform() * static_cast<double>(k));
      p[i] = static_cast<int>(rng.uniform() * static_cast<double>(k));
    }
    const auto r = report(confusion(t, p, k));
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) correct += t[i] == p[i];
    CHECK(r.accuracy == static_cast<double>(correct) / static_cast<double>(n));

    double macro_p = 0, weighted_r = 0;
    for (std::size_t c = 0; c < k; ++c) {
      std::size_t tp = 0, pred = 0, actual = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const bool is_t = t[i] == static_cast<int>(c), is_p = p[i] == static_cast<int>(c);
        tp += is_t && is_p;
        pred += is_p;
        actual += is_t;
      }
      const double prec = pred ? static_cast<double>(tp) / static_cast<double>(pred) : 0.0;
      const double rec = actual ? static_cast<double>(tp) / static_cast<double>(actual) : 0.0;
      const double f1 = prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0.0;
      CHECK(r.classes[c].precision == prec);
      CHECK(r.classes[c].recall == rec);
      CHECK(r.classes[c].f1 == doctest::Approx(f1).epsilon(1e-15));
      CHECK(r.classes[c].support == actual);
      macro_p += prec;
      weighted_r += static_cast<double>(actual) * rec;
    }
    CHECK(std::abs(r.macro_avg.precision - macro_p / static_cast<double>(k)) < 1e-15);
    // Weighted recall equals accuracy.
    CHECK(std::abs(weighted_r / static_cast<double>(n) - r.accuracy) < 1e-12);
    CHECK(std::abs(r.weighted_avg.recall - r.accuracy) < 1e-12);

    // Sample order does not matter.
    std::vector<std::size_t> order = rng.shuffle(n);
    std::vector<int> t2(n), p2(n);
    for (std::size_t i = 0; i < n; ++i) {
      t2[i] = t[order[i]];
      p2[i] = p[order[i]];
    }
    CHECK(confusion(t2, p2, k).counts == confusion(t, p, k).counts);
  }
}

TEST_CASE("text rendering") {
  const auto cm = make_confusion({{25, 15}, {3, 36}}, {"direct_attack", "legitimate"});
  const std::string text = format_report(report(cm));
  CHECK(text.find("direct_attack") != std::string::npos);
  CHECK(text.find("0.89") != std::string::npos);
  CHECK(text.find("macro avg") != std::string::npos);
  CHECK(text.find("weighted avg") != std::string::npos);
  CHECK(format_confusion(cm).find("36") != std::string::npos);
  CHECK(format_2dp(1.0) == "1.00");
}
