#include "idslab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "idslab/error.hpp"
#include "idslab/rng.hpp"

namespace idslab {

namespace {

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void validate(const SynthSpec& spec) {
  const auto k = spec.class_counts.size();
  if (k != 2 && k != 3) {
    fail(ErrorKind::Argument, "synth: class count must be 2 or 3, got " + std::to_string(k));
  }
  for (auto c : spec.class_counts) {
    if (c < 1) fail(ErrorKind::Argument, "synth: every class needs at least one sample");
  }
  if (spec.n_features < 1) fail(ErrorKind::Argument, "synth: n_features must be >= 1");
  if (spec.informative.empty() && spec.n_informative > spec.n_features) {
    fail(ErrorKind::Argument, "synth: n_informative exceeds n_features");
  }
  std::set<std::size_t> informative(spec.informative.begin(), spec.informative.end());
  if (informative.size() != spec.informative.size()) {
    fail(ErrorKind::Argument, "synth: duplicate informative index");
  }
  for (auto j : spec.informative) {
    if (j >= spec.n_features) {
      fail(ErrorKind::Argument, "synth: informative index " + std::to_string(j) + " out of range");
    }
  }
  for (auto j : spec.constant_features) {
    if (j >= spec.n_features) {
      fail(ErrorKind::Argument, "synth: constant index " + std::to_string(j) + " out of range");
    }
    if (informative.contains(j)) {
      fail(ErrorKind::Argument, "synth: column " + std::to_string(j) +
                                    " cannot be both informative and constant");
    }
  }
  if (!std::isfinite(spec.separation) || spec.separation < 0.0) {
    fail(ErrorKind::Argument, "synth: separation must be finite and >= 0");
  }
  if (!std::isfinite(spec.obfuscation.scale) || !std::isfinite(spec.obfuscation.shift)) {
    fail(ErrorKind::Argument, "synth: obfuscation transform must be finite");
  }
}

}  // namespace

std::vector<std::string> synthetic_feature_names(std::size_t n_features) {
  std::vector<std::string> names;
  names.reserve(n_features);
  for (std::size_t j = 0; j < n_features; ++j) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "f%02zu", j);
    names.emplace_back(buf);
  }
  return names;
}

SynthData synthesize(const SynthSpec& spec) {
  validate(spec);
  const std::size_t m = spec.n_features;
  const bool ternary = spec.class_counts.size() == 3;

  Rng layout(child_seed(spec.seed, 0));
  std::vector<std::size_t> informative = spec.informative;
  if (informative.empty()) {
    std::set<std::size_t> constant(spec.constant_features.begin(), spec.constant_features.end());
    for (auto j : layout.shuffle(m)) {
      if (informative.size() == spec.n_informative) break;
      if (!constant.contains(j)) informative.push_back(j);
    }
    if (informative.size() < spec.n_informative) {
      fail(ErrorKind::Argument, "synth: not enough non-constant columns for n_informative");
    }
  }
  std::sort(informative.begin(), informative.end());

  std::vector<double> offset(m), spread(m);
  for (std::size_t j = 0; j < m; ++j) {
    offset[j] = std::floor(layout.uniform() * 100.0);
    spread[j] = 0.5 + 4.5 * layout.uniform();
  }

  // Class means in standardized units; only informative columns are nonzero.
  std::vector<double> direct_mean(m, 0.0), legit_mean(m, 0.0);
  if (!informative.empty()) {
    const double half = 0.5 * spec.separation / std::sqrt(static_cast<double>(informative.size()));
    for (std::size_t i = 0; i < informative.size(); ++i) {
      const double sign = (i % 2 == 0) ? 1.0 : -1.0;
      direct_mean[informative[i]] = sign * half;
      legit_mean[informative[i]] = -sign * half;
    }
  }
  std::vector<bool> is_informative(m, false), is_constant(m, false);
  for (auto j : informative) is_informative[j] = true;
  for (auto j : spec.constant_features) is_constant[j] = true;

  SynthData out;
  out.informative = informative;
  out.table.header = synthetic_feature_names(m);
  if (ternary) {
    out.table.header.emplace_back("label2");
    out.table.header.emplace_back("label3");
  } else {
    out.table.header.emplace_back("label2");
  }

  Rng draws(child_seed(spec.seed, 1));
  std::vector<double> z(m);
  for (std::size_t c = 0; c < spec.class_counts.size(); ++c) {
    for (std::size_t s = 0; s < spec.class_counts[c]; ++s) {
      for (std::size_t j = 0; j < m; ++j) {
        const double noise = draws.normal();
        if (is_constant[j]) {
          z[j] = 0.0;
        } else if (!is_informative[j]) {
          z[j] = noise;
        } else if (c == 1) {
          z[j] = legit_mean[j] + noise;
        } else {
          z[j] = direct_mean[j] + noise;
          if (c == 2) {
            const double d = direct_mean[j];
            z[j] = d + spec.obfuscation.shift * (legit_mean[j] - d) +
                   spec.obfuscation.scale * (z[j] - d);
          }
        }
      }
      std::vector<std::string> row;
      row.reserve(out.table.header.size());
      for (std::size_t j = 0; j < m; ++j) row.push_back(format_value(offset[j] + spread[j] * z[j]));
      row.emplace_back(c == 1 ? "legitimate" : "direct_attack");
      if (ternary) row.push_back(std::to_string(c + 1));
      out.table.cells.push_back(std::move(row));
    }
  }

  auto [ds, codec] = build_dataset(out.table, synthetic_feature_names(m), ternary ? "label3" : "label2");
  out.dataset = std::move(ds);
  out.codec = std::move(codec);
  return out;
}

}  // namespace idslab
