#pragma once

// Latent Dirichlet allocation: collapsed Gibbs training, fold-in inference
// for unseen documents, top words and JSON persistence.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "detail/rng.hpp"
#include "detail/text.hpp"
#include "error.hpp"

namespace topiclandscape {

using TokenList = std::vector<std::string>;
using WordId = std::uint32_t;

/// Dense token ids in first-occurrence order. Immutable once built.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Builds from an explicit token list (ids follow list order).
  explicit Vocabulary(std::vector<std::string> tokens,
                      std::vector<std::size_t> document_frequency = {},
                      std::size_t min_count = 1, std::set<std::string> stopwords = {})
      : tokens_(std::move(tokens)),
        document_frequency_(std::move(document_frequency)),
        min_count_(min_count),
        stopwords_(std::move(stopwords)) {
    if (document_frequency_.empty()) document_frequency_.assign(tokens_.size(), 0);
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (!ids_.try_emplace(tokens_[i], static_cast<WordId>(i)).second)
        throw DataError("duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }

  [[nodiscard]] std::size_t size() const { return tokens_.size(); }
  [[nodiscard]] const std::string& token(WordId id) const { return tokens_.at(id); }
  [[nodiscard]] const std::vector<std::string>& tokens() const { return tokens_; }
  [[nodiscard]] std::size_t document_frequency(WordId id) const {
    return document_frequency_.at(id);
  }
  [[nodiscard]] std::size_t min_count() const { return min_count_; }
  [[nodiscard]] const std::set<std::string>& stopwords() const { return stopwords_; }

  [[nodiscard]] std::optional<WordId> id(std::string_view token) const {
    auto it = ids_.find(std::string(token));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  /// In-vocabulary ids of a token list; unknown tokens are dropped.
  [[nodiscard]] std::vector<WordId> encode(std::span<const std::string> doc) const {
    std::vector<WordId> ids;
    ids.reserve(doc.size());
    for (const auto& t : doc)
      if (auto it = ids_.find(t); it != ids_.end()) ids.push_back(it->second);
    return ids;
  }

  bool operator==(const Vocabulary& o) const { return tokens_ == o.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::size_t> document_frequency_;
  std::size_t min_count_ = 1;
  std::set<std::string> stopwords_;
  std::unordered_map<std::string, WordId> ids_;
};

/// Keeps tokens occurring at least min_count times overall and not in the
/// stopword set.
inline Vocabulary build_vocabulary(std::span<const TokenList> documents, std::size_t min_count,
                                   const std::set<std::string>& stopwords = {}) {
  if (documents.empty()) throw DataError("cannot build a vocabulary from zero documents");
  std::vector<std::string> order;
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> stats;  // count, df
  for (const auto& doc : documents) {
    std::set<std::string_view> seen;
    for (const auto& t : doc) {
      auto [it, fresh] = stats.try_emplace(t, 0, 0);
      if (fresh) order.push_back(t);
      ++it->second.first;
      if (seen.insert(it->first).second) ++it->second.second;
    }
  }
  std::vector<std::string> kept;
  std::vector<std::size_t> df;
  for (auto& t : order) {
    const auto& [count, doc_freq] = stats.at(t);
    if (count < min_count || stopwords.contains(t)) continue;
    df.push_back(doc_freq);
    kept.push_back(std::move(t));
  }
  if (kept.empty()) throw DataError("vocabulary is empty after frequency and stopword filtering");
  return Vocabulary(std::move(kept), std::move(df), min_count, stopwords);
}

struct TopicDistribution {
  std::vector<double> shares;
  /// Set when the document had no in-vocabulary tokens and the shares are
  /// the symmetric prior.
  bool prior_only = false;

  [[nodiscard]] std::size_t argmax() const {
    return static_cast<std::size_t>(std::max_element(shares.begin(), shares.end()) -
                                    shares.begin());
  }
};

/// Trained topic-word distributions. Immutable; safe for concurrent
/// inference.
class LdaModel {
 public:
  /// phi is K x V row-major; rows must be positive and sum to 1.
  LdaModel(std::size_t topics, double alpha, double beta, std::uint64_t seed,
           std::size_t iterations, Vocabulary vocabulary, std::vector<double> phi)
      : topics_(topics),
        alpha_(alpha),
        beta_(beta),
        seed_(seed),
        iterations_(iterations),
        vocabulary_(std::move(vocabulary)),
        phi_(std::move(phi)) {
    if (topics_ < 2) throw DataError("topic model needs K >= 2");
    if (!(alpha_ > 0.0) || !(beta_ > 0.0)) throw DataError("alpha and beta must be > 0");
    const std::size_t v = vocabulary_.size();
    if (v == 0 || phi_.size() != topics_ * v) throw DataError("phi has the wrong shape");
    for (std::size_t k = 0; k < topics_; ++k) {
      double sum = 0.0;
      for (std::size_t w = 0; w < v; ++w) {
        double p = phi_[k * v + w];
        if (!(p > 0.0)) throw DataError("phi entries must be positive");
        sum += p;
      }
      if (std::fabs(sum - 1.0) > 1e-9) throw DataError("phi row does not sum to 1");
    }
    word_topic_.resize(phi_.size());
    for (std::size_t k = 0; k < topics_; ++k)
      for (std::size_t w = 0; w < v; ++w) word_topic_[w * topics_ + k] = phi_[k * v + w];
  }

  [[nodiscard]] std::size_t topics() const { return topics_; }
  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] double beta() const { return beta_; }
  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::size_t iterations() const { return iterations_; }
  [[nodiscard]] const Vocabulary& vocabulary() const { return vocabulary_; }
  [[nodiscard]] const std::vector<double>& phi() const { return phi_; }
  [[nodiscard]] double phi(std::size_t topic, WordId word) const {
    return phi_[topic * vocabulary_.size() + word];
  }
  /// phi column for one word, contiguous over topics.
  [[nodiscard]] std::span<const double> word_column(WordId word) const {
    return {word_topic_.data() + static_cast<std::size_t>(word) * topics_, topics_};
  }

  /// Equality over the persisted state.
  bool operator==(const LdaModel& o) const {
    return topics_ == o.topics_ && alpha_ == o.alpha_ && beta_ == o.beta_ && seed_ == o.seed_ &&
           vocabulary_ == o.vocabulary_ && phi_ == o.phi_;
  }

 private:
  std::size_t topics_;
  double alpha_;
  double beta_;
  std::uint64_t seed_;
  std::size_t iterations_;
  Vocabulary vocabulary_;
  std::vector<double> phi_;
  std::vector<double> word_topic_;
};

struct LdaParams {
  std::size_t topics = 26;
  /// Non-positive means 50 / K.
  double alpha = 0.0;
  double beta = 0.01;
  std::size_t iterations = 1000;
  std::uint64_t seed = 0;

  [[nodiscard]] double effective_alpha() const {
    return alpha > 0.0 ? alpha : 50.0 / static_cast<double>(topics);
  }
};

struct LdaTraining {
  LdaModel model;
  /// Final-state (n_dk + alpha) / (N_d + K alpha) of each effective document.
  std::vector<std::vector<double>> document_topics;
  /// Indices into the input of the documents that kept >= 1 token.
  std::vector<std::size_t> document_index;
  double perplexity = 0.0;
};

/// Collapsed Gibbs sampling over token-topic assignments. phi comes from
/// the final sweep's counts with beta smoothing. Bit-reproducible for fixed
/// inputs and seed.
inline LdaTraining train_lda_detailed(const Vocabulary& vocabulary,
                                      std::span<const TokenList> documents,
                                      const LdaParams& params, Warnings* warnings = nullptr) {
  const std::size_t K = params.topics;
  const std::size_t V = vocabulary.size();
  if (K < 2) throw UsageError("topic count must be >= 2");
  if (params.iterations < 1) throw UsageError("training needs >= 1 iteration");
  const double alpha = params.effective_alpha();
  const double beta = params.beta;
  if (!(beta > 0.0)) throw UsageError("beta must be > 0");

  std::vector<std::vector<WordId>> docs;
  std::vector<std::size_t> doc_index;
  std::size_t total_tokens = 0;
  for (std::size_t d = 0; d < documents.size(); ++d) {
    auto ids = vocabulary.encode(documents[d]);
    if (ids.empty()) continue;
    total_tokens += ids.size();
    docs.push_back(std::move(ids));
    doc_index.push_back(d);
  }
  if (docs.size() < 2)
    throw DataError("effective corpus needs >= 2 documents with in-vocabulary tokens");
  if (K > total_tokens)
    warn(warnings, "topic count " + std::to_string(K) + " exceeds total token count " +
                       std::to_string(total_tokens));

  detail::Rng rng(params.seed);
  std::vector<std::vector<std::uint32_t>> z(docs.size());
  std::vector<std::uint32_t> n_dk(docs.size() * K, 0);
  std::vector<std::uint32_t> n_kw(K * V, 0);
  std::vector<std::uint32_t> n_k(K, 0);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    z[d].resize(docs[d].size());
    for (std::size_t i = 0; i < docs[d].size(); ++i) {
      auto k = static_cast<std::uint32_t>(rng.below(K));
      z[d][i] = k;
      ++n_dk[d * K + k];
      ++n_kw[k * V + docs[d][i]];
      ++n_k[k];
    }
  }

  const double v_beta = static_cast<double>(V) * beta;
  std::vector<double> cumulative(K);
  for (std::size_t it = 0; it < params.iterations; ++it) {
    for (std::size_t d = 0; d < docs.size(); ++d) {
      std::uint32_t* doc_counts = &n_dk[d * K];
      for (std::size_t i = 0; i < docs[d].size(); ++i) {
        const WordId w = docs[d][i];
        std::uint32_t k = z[d][i];
        --doc_counts[k];
        --n_kw[k * V + w];
        --n_k[k];
        double total = 0.0;
        for (std::size_t t = 0; t < K; ++t) {
          total += (doc_counts[t] + alpha) * (n_kw[t * V + w] + beta) / (n_k[t] + v_beta);
          cumulative[t] = total;
        }
        const double u = rng.uniform() * total;
        k = static_cast<std::uint32_t>(
            std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        if (k >= K) k = static_cast<std::uint32_t>(K - 1);
        z[d][i] = k;
        ++doc_counts[k];
        ++n_kw[k * V + w];
        ++n_k[k];
      }
    }
  }

  std::vector<double> phi(K * V);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t w = 0; w < V; ++w)
      phi[k * V + w] = (n_kw[k * V + w] + beta) / (n_k[k] + v_beta);

  std::vector<std::vector<double>> theta(docs.size(), std::vector<double>(K));
  double log_likelihood = 0.0;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const double denom = static_cast<double>(docs[d].size()) + static_cast<double>(K) * alpha;
    for (std::size_t k = 0; k < K; ++k) theta[d][k] = (n_dk[d * K + k] + alpha) / denom;
    for (WordId w : docs[d]) {
      double p = 0.0;
      for (std::size_t k = 0; k < K; ++k) p += theta[d][k] * phi[k * V + w];
      log_likelihood += std::log(p);
    }
  }

  LdaModel model(K, alpha, beta, params.seed, params.iterations, vocabulary, std::move(phi));
  return LdaTraining{std::move(model), std::move(theta), std::move(doc_index),
                     std::exp(-log_likelihood / static_cast<double>(total_tokens))};
}

inline LdaModel train_lda(const Vocabulary& vocabulary, std::span<const TokenList> documents,
                          const LdaParams& params, Warnings* warnings = nullptr) {
  return train_lda_detailed(vocabulary, documents, params, warnings).model;
}

struct InferenceOptions {
  std::size_t iterations = 200;
  std::size_t burn_in = 50;
  std::uint64_t seed = 0;
  /// When nonzero, longer documents are uniformly subsampled to this many
  /// in-vocabulary tokens (order preserved).
  std::size_t token_cap = 0;
};

/// Fold-in Gibbs sampling with phi fixed; returns the average over
/// post-burn-in sweeps of (n_k + alpha) / (N + K alpha).
inline TopicDistribution infer_topics(const LdaModel& model, std::span<const WordId> document,
                                      const InferenceOptions& options,
                                      Warnings* warnings = nullptr) {
  const std::size_t K = model.topics();
  const double alpha = model.alpha();
  if (options.iterations == 0 || options.burn_in >= options.iterations)
    throw UsageError("fold-in needs iterations > burn_in");

  TopicDistribution out;
  out.shares.assign(K, 1.0 / static_cast<double>(K));
  if (document.empty()) {
    out.prior_only = true;
    warn(warnings, "document has no in-vocabulary tokens; returning the prior");
    return out;
  }

  detail::Rng rng(options.seed);
  std::vector<WordId> tokens(document.begin(), document.end());
  if (options.token_cap > 0 && tokens.size() > options.token_cap) {
    std::vector<std::size_t> idx(tokens.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < options.token_cap; ++i)
      std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
    idx.resize(options.token_cap);
    std::sort(idx.begin(), idx.end());
    std::vector<WordId> kept;
    kept.reserve(idx.size());
    for (auto i : idx) kept.push_back(tokens[i]);
    tokens = std::move(kept);
  }

  std::vector<std::uint32_t> z(tokens.size());
  std::vector<std::uint32_t> counts(K, 0);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    z[i] = static_cast<std::uint32_t>(rng.below(K));
    ++counts[z[i]];
  }
  std::vector<double> cumulative(K);
  std::vector<double> accum(K, 0.0);
  const double denom = static_cast<double>(tokens.size()) + static_cast<double>(K) * alpha;
  for (std::size_t sweep = 0; sweep < options.iterations; ++sweep) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      --counts[z[i]];
      auto column = model.word_column(tokens[i]);
      double total = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        total += column[k] * (counts[k] + alpha);
        cumulative[k] = total;
      }
      const double u = rng.uniform() * total;
      auto k = static_cast<std::size_t>(
          std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
      if (k >= K) k = K - 1;
      z[i] = static_cast<std::uint32_t>(k);
      ++counts[k];
    }
    if (sweep >= options.burn_in)
      for (std::size_t k = 0; k < K; ++k) accum[k] += (counts[k] + alpha) / denom;
  }
  const auto kept_sweeps = static_cast<double>(options.iterations - options.burn_in);
  double sum = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    out.shares[k] = accum[k] / kept_sweeps;
    sum += out.shares[k];
  }
  for (auto& s : out.shares) s /= sum;
  return out;
}

inline TopicDistribution infer_topics(const LdaModel& model, std::span<const std::string> tokens,
                                      const InferenceOptions& options,
                                      Warnings* warnings = nullptr) {
  auto ids = model.vocabulary().encode(tokens);
  return infer_topics(model, std::span<const WordId>(ids), options, warnings);
}

/// The n most probable tokens of a topic; ties by ascending token id.
inline std::vector<std::pair<std::string, double>> top_words(const LdaModel& model,
                                                             std::size_t topic, std::size_t n) {
  if (topic >= model.topics())
    throw std::out_of_range("topic " + std::to_string(topic) + " out of range");
  const std::size_t V = model.vocabulary().size();
  std::vector<WordId> ids(V);
  for (std::size_t w = 0; w < V; ++w) ids[w] = static_cast<WordId>(w);
  const std::size_t take = std::min(n, V);
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(take), ids.end(),
                    [&](WordId a, WordId b) {
                      double pa = model.phi(topic, a), pb = model.phi(topic, b);
                      return pa != pb ? pa > pb : a < b;
                    });
  std::vector<std::pair<std::string, double>> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i)
    out.emplace_back(model.vocabulary().token(ids[i]), model.phi(topic, ids[i]));
  return out;
}

/// Human-readable topic names; unnamed topics render as "topic_<k>".
class TopicLabelMap {
 public:
  TopicLabelMap() = default;
  TopicLabelMap(std::size_t topics, std::map<std::size_t, std::string> labels)
      : topics_(topics), labels_(std::move(labels)) {
    std::set<std::string> seen;
    for (const auto& [k, label] : labels_) {
      if (k >= topics_) throw UsageError("topic label index " + std::to_string(k) + " >= K");
      if (!seen.insert(label).second) throw UsageError("duplicate topic label '" + label + "'");
    }
  }

  [[nodiscard]] std::string label(std::size_t topic) const {
    if (auto it = labels_.find(topic); it != labels_.end()) return it->second;
    return "topic_" + std::to_string(topic);
  }

 private:
  std::size_t topics_ = 0;
  std::map<std::size_t, std::string> labels_;
};

inline constexpr int kModelFileVersion = 1;

class ModelFileError : public DataError {
 public:
  enum class Kind { version, checksum, schema };
  ModelFileError(Kind kind, const std::string& what) : DataError(what), kind_(kind) {}
  [[nodiscard]] Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

namespace detail {

// Checksum over the compact dump of every field except "checksum"; object
// keys are sorted, so the dump is canonical.
inline std::string model_checksum(nlohmann::json doc) {
  doc.erase("checksum");
  return hex64(fnv1a64(doc.dump()));
}

}  // namespace detail

inline void save_model(const LdaModel& model, std::ostream& out) {
  nlohmann::json doc;
  doc["version"] = kModelFileVersion;
  doc["k"] = model.topics();
  doc["alpha"] = model.alpha();
  doc["beta"] = model.beta();
  doc["seed"] = model.seed();
  doc["vocab"] = model.vocabulary().tokens();
  const std::size_t V = model.vocabulary().size();
  auto phi = nlohmann::json::array();
  for (std::size_t k = 0; k < model.topics(); ++k) {
    auto row = nlohmann::json::array();
    for (std::size_t w = 0; w < V; ++w) row.push_back(model.phi()[k * V + w]);
    phi.push_back(std::move(row));
  }
  doc["phi"] = std::move(phi);
  doc["checksum"] = detail::model_checksum(doc);
  out << doc.dump() << '\n';
}

inline LdaModel load_model(std::istream& in) {
  using Kind = ModelFileError::Kind;
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    throw ModelFileError(Kind::checksum, "model file is truncated or corrupt");
  auto version = doc.find("version");
  if (version == doc.end() || !version->is_number_integer())
    throw ModelFileError(Kind::schema, "model file has no version");
  if (version->get<int>() != kModelFileVersion)
    throw ModelFileError(Kind::version, "unsupported model file version " + version->dump() +
                                            " (expected " + std::to_string(kModelFileVersion) +
                                            ")");
  auto checksum = doc.find("checksum");
  if (checksum == doc.end() || !checksum->is_string() ||
      checksum->get<std::string>() != detail::model_checksum(doc))
    throw ModelFileError(Kind::checksum, "model file checksum mismatch");
  try {
    const auto K = doc.at("k").get<std::size_t>();
    auto vocab = doc.at("vocab").get<std::vector<std::string>>();
    const std::size_t V = vocab.size();
    const auto& rows = doc.at("phi");
    if (!rows.is_array() || rows.size() != K)
      throw ModelFileError(Kind::schema, "phi must have k rows");
    std::vector<double> phi;
    phi.reserve(K * V);
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != V)
        throw ModelFileError(Kind::schema, "phi rows must match the vocabulary size");
      for (const auto& p : row) phi.push_back(p.get<double>());
    }
    return LdaModel(K, doc.at("alpha").get<double>(), doc.at("beta").get<double>(),
                    doc.at("seed").get<std::uint64_t>(), 0, Vocabulary(std::move(vocab)),
                    std::move(phi));
  } catch (const nlohmann::json::exception& e) {
    throw ModelFileError(Kind::schema, std::string("malformed model file: ") + e.what());
  }
}

}  // namespace topiclandscape
