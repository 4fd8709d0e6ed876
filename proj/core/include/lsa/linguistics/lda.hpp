#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lsa/linguistics/dtm.hpp"

namespace lsa::linguistics {

struct LdaParams {
  int topics = 10;
  /// Symmetric document-topic prior; a negative value means 50 / topics.
  double alpha = -1.0;
  double beta = 0.01;
  int iterations = 1000;
  /// Sweeps before the log-likelihood trace starts. The estimate always
  /// comes from the final sample.
  int burn_in = 200;
  std::uint64_t seed = 42;
  /// Count-conservation checks (and trace points) every this many sweeps.
  int check_every = 50;

  double effective_alpha() const { return alpha < 0 ? 50.0 / topics : alpha; }
};

struct LdaModel {
  int topics = 0;
  double alpha = 0;
  double beta = 0;
  std::uint64_t seed = 0;
  int iterations = 0;
  /// topics x vocab; rows sum to 1.
  std::vector<std::vector<double>> phi;
  /// docs x topics; rows sum to 1. Empty documents get the uniform row.
  std::vector<std::vector<double>> theta;
  /// Per document, per token (tokens laid out in vocab order) topic label.
  std::vector<std::vector<int>> assignments;
  /// (sweep, log p(w | z)) after burn-in.
  std::vector<std::pair<int, double>> log_likelihood_trace;
  std::vector<std::string> warnings;
};

/// Collapsed Gibbs sampler over a document-term matrix.
///
/// Tokens of document d are expanded in vocabulary order (count copies of
/// each term). The full conditional for one token, with its own assignment
/// removed from the counts, is
///
///   p(z = k | rest) ∝ (n_dk + alpha) (n_kw + beta) / (n_k + V beta)
///
/// Random numbers come from mt19937_64 with a fixed 53-bit mapping to
/// [0, 1), so results are identical across platforms for a given seed.
class GibbsSampler {
 public:
  GibbsSampler(const DocumentTermMatrix& dtm, int topics, double alpha, double beta,
               std::uint64_t seed);
  /// Starts from the given assignments instead of a random draw.
  GibbsSampler(const DocumentTermMatrix& dtm, int topics, double alpha, double beta,
               std::vector<std::vector<int>> assignments);

  /// Normalised conditional for token `position` of document `doc`.
  std::vector<double> conditional(std::size_t doc, std::size_t position) const;

  void sweep();
  /// Integrity error when any marginal disagrees with the assignments.
  void check_conservation() const;
  double log_likelihood() const;

  LdaModel estimate() const;

  const std::vector<std::vector<int>>& assignments() const noexcept { return z_; }
  const std::vector<std::vector<int>>& words() const noexcept { return words_; }

 private:
  void build_counts();

  std::size_t vocab_size_;
  int topics_;
  double alpha_;
  double beta_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  std::vector<std::vector<int>> words_;
  std::vector<std::vector<int>> z_;
  std::vector<std::vector<int>> n_dk_;
  std::vector<std::vector<int>> n_kw_;
  std::vector<int> n_k_;
  std::vector<double> scratch_;
};

LdaModel lda_fit(const DocumentTermMatrix& dtm, const LdaParams& params);

/// Token-weighted mean of theta rows.
std::vector<double> topic_prevalence(const LdaModel& model, const DocumentTermMatrix& dtm);

/// Topics whose prevalence is at least `threshold`.
int count_main_topics(std::span<const double> prevalence, double threshold);

int main_topic_count(const LdaModel& model, const DocumentTermMatrix& dtm, double threshold = 0.05);

/// Highest-probability terms per topic, ties broken by vocabulary order.
std::vector<std::vector<std::string>> top_terms(const LdaModel& model,
                                                const DocumentTermMatrix& dtm, std::size_t n);

}  // namespace lsa::linguistics
