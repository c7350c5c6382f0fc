#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "idslab/error.hpp"
#include "idslab/matrix.hpp"

namespace idslab {

struct FfsConfig {
  /// Upper bound on the number of selected features.
  std::size_t max_features = 20;
  /// A candidate is accepted only if it raises the score by at least this much.
  double min_improvement = 1e-4;
  /// Inner cross-validation folds on the training partition.
  std::size_t folds = 3;
  /// Only "accuracy" is supported.
  std::string scoring = "accuracy";
  std::uint64_t seed = 0;
  /// Epoch budget of the MLPs trained inside the search.
  std::size_t inner_max_epochs = 50;
  /// Concurrent candidate evaluations per round; 0 means hardware concurrency.
  std::size_t threads = 1;

  void validate() const;
};

struct FfsRound {
  std::vector<std::size_t> candidates;  // ascending
  std::vector<double> scores;           // aligned with candidates
};

struct FfsResult {
  std::vector<std::size_t> selected;
  /// Score after each accepted feature.
  std::vector<double> trajectory;
  /// Score of the empty subset: the majority-class rate.
  double baseline = 0.0;
  std::vector<FfsRound> considered;
};

/// Scores a feature subset (column indices into the training matrix) in [0, 1].
using SubsetScorer = std::function<double(std::span<const std::size_t> subset)>;

/// Fits a model on (x_fit, y_fit) and returns predictions for x_eval.
using FitPredict = std::function<std::vector<int>(const Matrix& x_fit, std::span<const int> y_fit,
                                                  const Matrix& x_eval, std::size_t fold)>;

/// Raised when a scorer fails; carries the subset under evaluation.
class SubsetError : public Error {
 public:
  SubsetError(ErrorKind kind, const std::string& what, std::vector<std::size_t> subset)
      : Error(kind, what), subset_(std::move(subset)) {}
  const std::vector<std::size_t>& subset() const noexcept { return subset_; }

 private:
  std::vector<std::size_t> subset_;
};

double majority_rate(std::span<const int> y);

/// Seeded shuffle of 0..n-1 cut into `k` contiguous blocks.
std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t k, std::uint64_t seed);

/// k-fold cross-validated accuracy of `fit_predict` on the chosen columns.
/// `x` and `y` are captured by reference and must outlive the scorer.
SubsetScorer cross_validated_scorer(const Matrix& x, std::span<const int> y, const FfsConfig& cfg,
                                    FitPredict fit_predict);

/// Greedy forward selection. Each round scores every unselected candidate
/// added to the current subset and accepts the best one if it improves the
/// score by at least `min_improvement`; ties go to the lowest index.
FfsResult forward_select(const Matrix& x, std::span<const int> y,
                         std::span<const std::size_t> candidates, const FfsConfig& cfg,
                         const SubsetScorer& scorer);

FfsResult forward_select(const Matrix& x, std::span<const int> y,
                         std::span<const std::size_t> candidates, const FfsConfig& cfg,
                         FitPredict fit_predict);

}  // namespace idslab
