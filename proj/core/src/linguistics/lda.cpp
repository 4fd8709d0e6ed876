#include "lsa/linguistics/lda.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "lsa/error.hpp"

namespace lsa::linguistics {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<std::vector<int>> expand_tokens(const DocumentTermMatrix& dtm) {
  std::vector<std::vector<int>> words(dtm.num_docs());
  for (std::size_t d = 0; d < dtm.num_docs(); ++d) {
    for (std::size_t v = 0; v < dtm.vocab_size(); ++v) {
      words[d].insert(words[d].end(), static_cast<std::size_t>(dtm.counts[d][v]),
                      static_cast<int>(v));
    }
  }
  return words;
}

void validate(int topics, double alpha, double beta) {
  if (topics < 1) throw Error(ErrorCode::Configuration, "LDA needs at least one topic");
  if (!(alpha > 0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::Configuration, "LDA alpha must be positive");
  }
  if (!(beta > 0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::Configuration, "LDA beta must be positive");
  }
}

}  // namespace

GibbsSampler::GibbsSampler(const DocumentTermMatrix& dtm, int topics, double alpha, double beta,
                           std::uint64_t seed)
    : vocab_size_(dtm.vocab_size()),
      topics_(topics),
      alpha_(alpha),
      beta_(beta),
      seed_(seed),
      rng_(seed),
      words_(expand_tokens(dtm)) {
  validate(topics, alpha, beta);
  z_.resize(words_.size());
  for (std::size_t d = 0; d < words_.size(); ++d) {
    z_[d].resize(words_[d].size());
    for (auto& label : z_[d]) {
      label = std::min(topics_ - 1, static_cast<int>(uniform01(rng_) * topics_));
    }
  }
  build_counts();
}

GibbsSampler::GibbsSampler(const DocumentTermMatrix& dtm, int topics, double alpha, double beta,
                           std::vector<std::vector<int>> assignments)
    : vocab_size_(dtm.vocab_size()),
      topics_(topics),
      alpha_(alpha),
      beta_(beta),
      seed_(0),
      rng_(0),
      words_(expand_tokens(dtm)),
      z_(std::move(assignments)) {
  validate(topics, alpha, beta);
  if (z_.size() != words_.size()) {
    throw Error(ErrorCode::InvalidInput, "assignment rows do not match documents");
  }
  for (std::size_t d = 0; d < words_.size(); ++d) {
    if (z_[d].size() != words_[d].size()) {
      throw Error(ErrorCode::InvalidInput,
                  fmt::format("document {} has {} tokens but {} assignments", d,
                              words_[d].size(), z_[d].size()));
    }
    for (const int k : z_[d]) {
      if (k < 0 || k >= topics_) {
        throw Error(ErrorCode::Range, fmt::format("topic label {} out of range", k));
      }
    }
  }
  build_counts();
}

void GibbsSampler::build_counts() {
  const auto k_count = static_cast<std::size_t>(topics_);
  n_dk_.assign(words_.size(), std::vector<int>(k_count, 0));
  n_kw_.assign(k_count, std::vector<int>(vocab_size_, 0));
  n_k_.assign(k_count, 0);
  scratch_.assign(k_count, 0.0);
  for (std::size_t d = 0; d < words_.size(); ++d) {
    for (std::size_t i = 0; i < words_[d].size(); ++i) {
      const auto k = static_cast<std::size_t>(z_[d][i]);
      ++n_dk_[d][k];
      ++n_kw_[k][static_cast<std::size_t>(words_[d][i])];
      ++n_k_[k];
    }
  }
}

std::vector<double> GibbsSampler::conditional(std::size_t doc, std::size_t position) const {
  const auto w = static_cast<std::size_t>(words_.at(doc).at(position));
  const auto own = static_cast<std::size_t>(z_[doc][position]);
  const double v_beta = static_cast<double>(vocab_size_) * beta_;
  std::vector<double> p(static_cast<std::size_t>(topics_));
  double total = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const int self = k == own ? 1 : 0;
    p[k] = (n_dk_[doc][k] - self + alpha_) * (n_kw_[k][w] - self + beta_) /
           (n_k_[k] - self + v_beta);
    total += p[k];
  }
  for (auto& x : p) x /= total;
  return p;
}

void GibbsSampler::sweep() {
  const double v_beta = static_cast<double>(vocab_size_) * beta_;
  const auto k_count = static_cast<std::size_t>(topics_);
  for (std::size_t d = 0; d < words_.size(); ++d) {
    auto& doc_topics = n_dk_[d];
    for (std::size_t i = 0; i < words_[d].size(); ++i) {
      const auto w = static_cast<std::size_t>(words_[d][i]);
      auto k = static_cast<std::size_t>(z_[d][i]);
      --doc_topics[k];
      --n_kw_[k][w];
      --n_k_[k];

      double total = 0;
      for (std::size_t t = 0; t < k_count; ++t) {
        total += (doc_topics[t] + alpha_) * (n_kw_[t][w] + beta_) / (n_k_[t] + v_beta);
        scratch_[t] = total;
      }
      const double u = uniform01(rng_) * total;
      k = static_cast<std::size_t>(
          std::upper_bound(scratch_.begin(), scratch_.end(), u) - scratch_.begin());
      if (k >= k_count) k = k_count - 1;

      z_[d][i] = static_cast<int>(k);
      ++doc_topics[k];
      ++n_kw_[k][w];
      ++n_k_[k];
    }
  }
}

void GibbsSampler::check_conservation() const {
  long long tokens = 0;
  for (const auto& doc : words_) tokens += static_cast<long long>(doc.size());
  long long by_topic = 0;
  for (std::size_t k = 0; k < n_k_.size(); ++k) {
    const long long row = std::accumulate(n_kw_[k].begin(), n_kw_[k].end(), 0LL);
    if (row != n_k_[k] || n_k_[k] < 0) {
      throw Error(ErrorCode::Integrity, fmt::format("topic {} word counts are inconsistent", k));
    }
    by_topic += n_k_[k];
  }
  for (std::size_t d = 0; d < words_.size(); ++d) {
    const long long row = std::accumulate(n_dk_[d].begin(), n_dk_[d].end(), 0LL);
    if (row != static_cast<long long>(words_[d].size())) {
      throw Error(ErrorCode::Integrity,
                  fmt::format("document {} topic counts are inconsistent", d));
    }
  }
  if (by_topic != tokens) {
    throw Error(ErrorCode::Integrity, "topic totals do not match token count");
  }
}

double GibbsSampler::log_likelihood() const {
  const double v = static_cast<double>(vocab_size_);
  double ll = topics_ * (std::lgamma(v * beta_) - v * std::lgamma(beta_));
  for (std::size_t k = 0; k < n_k_.size(); ++k) {
    for (const int c : n_kw_[k]) {
      if (c > 0) ll += std::lgamma(c + beta_) - std::lgamma(beta_);
    }
    ll += v * std::lgamma(beta_) - std::lgamma(n_k_[k] + v * beta_);
  }
  return ll;
}

LdaModel GibbsSampler::estimate() const {
  LdaModel model;
  model.topics = topics_;
  model.alpha = alpha_;
  model.beta = beta_;
  model.seed = seed_;
  const double v_beta = static_cast<double>(vocab_size_) * beta_;
  model.phi.assign(n_k_.size(), std::vector<double>(vocab_size_));
  for (std::size_t k = 0; k < n_k_.size(); ++k) {
    for (std::size_t w = 0; w < vocab_size_; ++w) {
      model.phi[k][w] = (n_kw_[k][w] + beta_) / (n_k_[k] + v_beta);
    }
  }
  const double k_alpha = topics_ * alpha_;
  model.theta.assign(words_.size(), std::vector<double>(n_k_.size()));
  for (std::size_t d = 0; d < words_.size(); ++d) {
    const double length = static_cast<double>(words_[d].size());
    for (std::size_t k = 0; k < n_k_.size(); ++k) {
      model.theta[d][k] = (n_dk_[d][k] + alpha_) / (length + k_alpha);
    }
  }
  model.assignments = z_;
  return model;
}

LdaModel lda_fit(const DocumentTermMatrix& dtm, const LdaParams& params) {
  if (params.iterations < 1) throw Error(ErrorCode::Configuration, "iterations must be >= 1");
  if (params.check_every < 1) throw Error(ErrorCode::Configuration, "check_every must be >= 1");
  if (dtm.total_tokens() == 0) throw Error(ErrorCode::EmptyCorpus, "corpus has no tokens");

  GibbsSampler sampler(dtm, params.topics, params.effective_alpha(), params.beta, params.seed);
  std::vector<std::pair<int, double>> trace;
  for (int sweep = 1; sweep <= params.iterations; ++sweep) {
    sampler.sweep();
    if (sweep % params.check_every == 0 || sweep == params.iterations) {
      sampler.check_conservation();
      if (sweep > params.burn_in) trace.emplace_back(sweep, sampler.log_likelihood());
    }
  }
  auto model = sampler.estimate();
  model.iterations = params.iterations;
  model.log_likelihood_trace = std::move(trace);
  if (dtm.total_tokens() < params.topics) {
    model.warnings.push_back(fmt::format("corpus has {} tokens for {} topics",
                                         dtm.total_tokens(), params.topics));
  }
  if (!dtm.empty_docs.empty()) {
    model.warnings.push_back(
        fmt::format("{} document(s) had no terms after filtering", dtm.empty_docs.size()));
  }
  return model;
}

std::vector<double> topic_prevalence(const LdaModel& model, const DocumentTermMatrix& dtm) {
  if (model.theta.size() != dtm.num_docs()) {
    throw Error(ErrorCode::InvalidInput, "model and matrix disagree on document count");
  }
  std::vector<double> prevalence(static_cast<std::size_t>(model.topics), 0.0);
  const double total = static_cast<double>(dtm.total_tokens());
  if (total == 0) return prevalence;
  for (std::size_t d = 0; d < dtm.num_docs(); ++d) {
    const double weight = static_cast<double>(dtm.doc_length(d)) / total;
    for (std::size_t k = 0; k < prevalence.size(); ++k) {
      prevalence[k] += weight * model.theta[d][k];
    }
  }
  return prevalence;
}

int count_main_topics(std::span<const double> prevalence, double threshold) {
  return static_cast<int>(std::count_if(prevalence.begin(), prevalence.end(),
                                        [threshold](double p) { return p >= threshold; }));
}

int main_topic_count(const LdaModel& model, const DocumentTermMatrix& dtm, double threshold) {
  const auto prevalence = topic_prevalence(model, dtm);
  return count_main_topics(prevalence, threshold);
}

std::vector<std::vector<std::string>> top_terms(const LdaModel& model,
                                                const DocumentTermMatrix& dtm, std::size_t n) {
  std::vector<std::vector<std::string>> out;
  for (const auto& row : model.phi) {
    std::vector<std::size_t> order(row.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&row](std::size_t a, std::size_t b) { return row[a] > row[b]; });
    order.resize(std::min(n, order.size()));
    auto& terms = out.emplace_back();
    for (const auto v : order) terms.push_back(dtm.vocab.at(v));
  }
  return out;
}

}  // namespace lsa::linguistics
