#include "idslab/ffs.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <future>
#include <set>
#include <thread>

#include "idslab/rng.hpp"

namespace idslab {

namespace {

std::string describe(std::span<const std::size_t> subset) {
  std::string s = "{";
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(subset[i]);
  }
  return s + "}";
}

double score_subset(const SubsetScorer& scorer, const std::vector<std::size_t>& subset) {
  double score = 0.0;
  try {
    score = scorer(subset);
  } catch (const SubsetError&) {
    throw;
  } catch (const Error& e) {
    throw SubsetError(e.kind(), "evaluating subset " + describe(subset) + ": " + e.what(), subset);
  } catch (const std::exception& e) {
    throw SubsetError(ErrorKind::Training,
                      "evaluating subset " + describe(subset) + ": " + e.what(), subset);
  }
  if (!(score >= 0.0 && score <= 1.0)) {
    throw SubsetError(ErrorKind::Numeric,
                      "scorer returned " + std::to_string(score) + " for subset " + describe(subset),
                      subset);
  }
  return score;
}

std::vector<double> score_round(const SubsetScorer& scorer,
                                const std::vector<std::vector<std::size_t>>& subsets,
                                std::size_t threads) {
  std::vector<double> scores(subsets.size(), 0.0);
  if (threads <= 1 || subsets.size() <= 1) {
    for (std::size_t i = 0; i < subsets.size(); ++i) scores[i] = score_subset(scorer, subsets[i]);
    return scores;
  }
  // Results land in their own slots, so evaluation order cannot change the
  // outcome. The first failure (in index order) is rethrown.
  for (std::size_t start = 0; start < subsets.size(); start += threads) {
    const std::size_t stop = std::min(subsets.size(), start + threads);
    std::vector<std::future<double>> pending;
    for (std::size_t i = start; i < stop; ++i) {
      pending.push_back(std::async(std::launch::async,
                                   [&, i] { return score_subset(scorer, subsets[i]); }));
    }
    std::exception_ptr first_error;
    for (std::size_t i = start; i < stop; ++i) {
      try {
        scores[i] = pending[i - start].get();
      } catch (...) {
        if (!first_error) first_error = std::current_exception();
      }
    }
    if (first_error) std::rethrow_exception(first_error);
  }
  return scores;
}

}  // namespace

void FfsConfig::validate() const {
  if (max_features < 1) fail(ErrorKind::Argument, "ffs: max_features must be >= 1");
  if (folds < 2) fail(ErrorKind::Argument, "ffs: folds must be >= 2");
  if (!(min_improvement >= 0.0)) fail(ErrorKind::Argument, "ffs: min_improvement must be >= 0");
  if (scoring != "accuracy") fail(ErrorKind::Argument, "ffs: unsupported scoring '" + scoring + "'");
  if (inner_max_epochs < 1) fail(ErrorKind::Argument, "ffs: inner_max_epochs must be >= 1");
}

double majority_rate(std::span<const int> y) {
  if (y.empty()) fail(ErrorKind::Argument, "majority_rate of no labels");
  std::vector<std::size_t> counts;
  for (int c : y) {
    if (c < 0) fail(ErrorKind::Argument, "negative class code");
    if (static_cast<std::size_t>(c) >= counts.size()) counts.resize(static_cast<std::size_t>(c) + 1, 0);
    ++counts[static_cast<std::size_t>(c)];
  }
  return static_cast<double>(*std::max_element(counts.begin(), counts.end())) /
         static_cast<double>(y.size());
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) fail(ErrorKind::Argument, "need at least 2 folds");
  if (n < k) {
    fail(ErrorKind::Argument, std::to_string(n) + " samples cannot fill " + std::to_string(k) +
                                  " folds");
  }
  Rng rng(seed);
  const auto perm = rng.shuffle(n);
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t begin = f * n / k;
    const std::size_t end = (f + 1) * n / k;
    folds[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(begin),
                    perm.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return folds;
}

SubsetScorer cross_validated_scorer(const Matrix& x, std::span<const int> y, const FfsConfig& cfg,
                                    FitPredict fit_predict) {
  cfg.validate();
  if (y.size() != x.rows()) fail(ErrorKind::Dimension, "cross-validation: labels do not match rows");
  auto folds = make_folds(x.rows(), cfg.folds, cfg.seed);
  return [&x, y, folds = std::move(folds), fit_predict = std::move(fit_predict)](
             std::span<const std::size_t> subset) {
    const Matrix columns = x.select_cols(subset);
    double sum = 0.0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
      std::vector<bool> held_out(x.rows(), false);
      for (auto i : folds[f]) held_out[i] = true;
      std::vector<std::size_t> fit_rows;
      std::vector<int> fit_y;
      for (std::size_t i = 0; i < x.rows(); ++i) {
        if (!held_out[i]) {
          fit_rows.push_back(i);
          fit_y.push_back(y[i]);
        }
      }
      const auto predictions =
          fit_predict(columns.select_rows(fit_rows), fit_y, columns.select_rows(folds[f]), f);
      if (predictions.size() != folds[f].size()) {
        fail(ErrorKind::Dimension, "fit_predict returned the wrong number of predictions");
      }
      std::size_t correct = 0;
      for (std::size_t i = 0; i < folds[f].size(); ++i) {
        if (predictions[i] == y[folds[f][i]]) ++correct;
      }
      sum += static_cast<double>(correct) / static_cast<double>(folds[f].size());
    }
    return sum / static_cast<double>(folds.size());
  };
}

FfsResult forward_select(const Matrix& x, std::span<const int> y,
                         std::span<const std::size_t> candidates, const FfsConfig& cfg,
                         const SubsetScorer& scorer) {
  cfg.validate();
  if (candidates.empty()) fail(ErrorKind::Argument, "forward_select: no candidate features");
  if (y.size() != x.rows()) fail(ErrorKind::Dimension, "forward_select: labels do not match rows");
  std::set<std::size_t> pool(candidates.begin(), candidates.end());
  if (pool.size() != candidates.size()) {
    fail(ErrorKind::Argument, "forward_select: duplicate candidate index");
  }
  if (*pool.rbegin() >= x.cols()) {
    fail(ErrorKind::Argument, "forward_select: candidate " + std::to_string(*pool.rbegin()) +
                                  " out of range for " + x.shape());
  }
  const std::size_t threads =
      cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;

  FfsResult result;
  result.baseline = majority_rate(y);
  double current = result.baseline;

  while (result.selected.size() < cfg.max_features && !pool.empty()) {
    FfsRound round;
    round.candidates.assign(pool.begin(), pool.end());
    std::vector<std::vector<std::size_t>> subsets;
    for (auto c : round.candidates) {
      auto subset = result.selected;
      subset.push_back(c);
      subsets.push_back(std::move(subset));
    }
    round.scores = score_round(scorer, subsets, threads);

    std::size_t best = 0;
    for (std::size_t i = 1; i < round.scores.size(); ++i) {
      if (round.scores[i] > round.scores[best]) best = i;
    }
    const double best_score = round.scores[best];
    const std::size_t best_feature = round.candidates[best];
    result.considered.push_back(std::move(round));

    if (!(best_score > current && best_score - current >= cfg.min_improvement)) break;
    result.selected.push_back(best_feature);
    result.trajectory.push_back(best_score);
    pool.erase(best_feature);
    current = best_score;
  }
  return result;
}

FfsResult forward_select(const Matrix& x, std::span<const int> y,
                         std::span<const std::size_t> candidates, const FfsConfig& cfg,
                         FitPredict fit_predict) {
  const auto scorer = cross_validated_scorer(x, y, cfg, std::move(fit_predict));
  return forward_select(x, y, candidates, cfg, scorer);
}

}  // namespace idslab
