// Copyright 2026 The litkg Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LITKG_SGNS_HPP
#define LITKG_SGNS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "litkg/alias_table.hpp"
#include "litkg/common.hpp"
#include "litkg/error.hpp"
#include "litkg/node2vec.hpp"
#include "litkg/parallel.hpp"
#include "litkg/random.hpp"

namespace litkg {

struct SgnsParams {
  std::size_t dims = 100;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double lr0 = 0.025;  // decays linearly to lr0 / 10
  std::uint64_t seed = 0;
  double unigram_power = 0.75;
  unsigned threads = 1;  // > 1 selects the racy, nondeterministic mode

  void validate() const {
    if (dims < 1) throw InvalidArgument("dims must be >= 1");
    if (window < 1) throw InvalidArgument("window must be >= 1");
    if (epochs < 1) throw InvalidArgument("epochs must be >= 1");
    if (!(lr0 > 0.0)) throw InvalidArgument("lr0 must be > 0");
  }
};

/// Training vocabulary. Dense indices follow descending token frequency,
/// ties broken by id.
struct Vocab {
  std::vector<std::string> ids;
  std::vector<std::size_t> counts;
  std::vector<double> noise;  // counts^power, normalized
  std::vector<std::uint32_t> from_corpus;  // walk-corpus index -> vocab index (or npos)
  AliasTable noise_table;

  static constexpr std::uint32_t npos = 0xffffffffu;
};

inline Vocab build_vocab(const WalkCorpus& corpus, double unigram_power = 0.75) {
  std::vector<std::size_t> freq(corpus.ids.size(), 0);
  std::size_t tokens = 0;
  for (const auto& walk : corpus.walks)
    for (auto t : walk) {
      ++freq[t];
      ++tokens;
    }
  if (tokens == 0) throw InvalidArgument("cannot build a vocabulary from an empty walk corpus");
  std::vector<std::uint32_t> order;
  for (std::uint32_t i = 0; i < freq.size(); ++i)
    if (freq[i] > 0) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    if (freq[a] != freq[b]) return freq[a] > freq[b];
    return corpus.ids[a] < corpus.ids[b];
  });
  Vocab v;
  v.from_corpus.assign(corpus.ids.size(), Vocab::npos);
  double total = 0.0;
  for (auto i : order) {
    v.from_corpus[i] = static_cast<std::uint32_t>(v.ids.size());
    v.ids.push_back(corpus.ids[i]);
    v.counts.push_back(freq[i]);
    v.noise.push_back(std::pow(static_cast<double>(freq[i]), unigram_power));
    total += v.noise.back();
  }
  for (auto& x : v.noise) x /= total;
  v.noise_table = AliasTable(v.noise);
  return v;
}

inline double sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

/// -log(sigmoid(x)), evaluated without overflow.
inline double neg_log_sigmoid(double x) {
  return x >= 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Skip-gram negative-sampling loss for one (center, context) pair:
/// -log s(u.v) - sum_i log s(-u.n_i).
inline double pair_loss(std::span<const double> u, std::span<const double> v,
                        std::span<const std::span<const double>> negatives) {
  double loss = neg_log_sigmoid(dot(u, v));
  for (auto n : negatives) loss += neg_log_sigmoid(-dot(u, n));
  return loss;
}

struct PairGradient {
  double loss = 0.0;
  std::vector<double> d_center;
  std::vector<double> d_context;
  std::vector<std::vector<double>> d_negatives;
};

/// pair_loss together with its gradient with respect to every input.
inline PairGradient pair_loss_gradient(std::span<const double> u, std::span<const double> v,
                                       std::span<const std::span<const double>> negatives) {
  const std::size_t d = u.size();
  PairGradient g;
  g.d_center.assign(d, 0.0);
  const double pos = dot(u, v);
  g.loss = neg_log_sigmoid(pos);
  const double cpos = sigmoid(pos) - 1.0;
  g.d_context.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    g.d_center[i] += cpos * v[i];
    g.d_context[i] = cpos * u[i];
  }
  for (auto n : negatives) {
    const double s = dot(u, n);
    g.loss += neg_log_sigmoid(-s);
    const double cneg = sigmoid(s);
    auto& dn = g.d_negatives.emplace_back(d);
    for (std::size_t i = 0; i < d; ++i) {
      g.d_center[i] += cneg * n[i];
      dn[i] = cneg * u[i];
    }
  }
  return g;
}

/// Trained embedding. `input` is the published matrix; `output` holds the
/// context vectors (empty when loaded from a file). Rows follow `ids`.
struct EmbeddingMatrix {
  std::vector<std::string> ids;
  std::size_t dims = 0;
  std::vector<double> input;
  std::vector<double> output;
  SgnsParams params;

  std::size_t size() const { return ids.size(); }
  std::span<const double> row(std::size_t i) const { return {input.data() + i * dims, dims}; }
  std::span<double> row(std::size_t i) { return {input.data() + i * dims, dims}; }
  std::span<const double> context_row(std::size_t i) const {
    return {output.data() + i * dims, dims};
  }

  std::optional<std::size_t> index_of(const std::string& id) const {
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (ids[i] == id) return i;
    return std::nullopt;
  }

  bool all_finite() const {
    return std::all_of(input.begin(), input.end(), [](double x) { return std::isfinite(x); }) &&
           std::all_of(output.begin(), output.end(), [](double x) { return std::isfinite(x); });
  }
};

/// One sampled training example, in vocab indices.
struct TrainingPair {
  std::uint32_t center;
  std::uint32_t context;
  std::vector<std::uint32_t> negatives;
};

namespace detail {

template <bool Racy>
struct Cell {
  static double load(const double& x) {
    if constexpr (Racy)
      return std::atomic_ref<double>(const_cast<double&>(x)).load(std::memory_order_relaxed);
    else
      return x;
  }
  static void store(double& x, double v) {
    if constexpr (Racy)
      std::atomic_ref<double>(x).store(v, std::memory_order_relaxed);
    else
      x = v;
  }
};

// One SGD step on the pair loss: the context row gets label 1, every
// negative label 0. Negatives equal to the context are skipped.
template <bool Racy>
void sgd_pair(EmbeddingMatrix& m, std::uint32_t center, std::uint32_t context,
              std::span<const std::uint32_t> negatives, double lr, std::vector<double>& grad) {
  using C = Cell<Racy>;
  const std::size_t d = m.dims;
  double* u = m.input.data() + static_cast<std::size_t>(center) * d;
  std::fill(grad.begin(), grad.end(), 0.0);
  auto step = [&](std::uint32_t target, double label) {
    double* v = m.output.data() + static_cast<std::size_t>(target) * d;
    double f = 0.0;
    for (std::size_t i = 0; i < d; ++i) f += C::load(u[i]) * C::load(v[i]);
    const double g = (label - sigmoid(f)) * lr;
    for (std::size_t i = 0; i < d; ++i) {
      const double vi = C::load(v[i]);
      grad[i] += g * vi;
      C::store(v[i], vi + g * C::load(u[i]));
    }
  };
  step(context, 1.0);
  for (auto n : negatives)
    if (n != context) step(n, 0.0);
  for (std::size_t i = 0; i < d; ++i) C::store(u[i], C::load(u[i]) + grad[i]);
}

template <bool Racy>
void train_walks(EmbeddingMatrix& m, const Vocab& vocab, const std::vector<std::vector<std::uint32_t>>& walks,
                 std::size_t begin, std::size_t end, const SgnsParams& params, Xoshiro256& rng,
                 std::atomic<std::size_t>& processed, std::size_t total_tokens) {
  std::vector<double> grad(m.dims);
  std::vector<std::uint32_t> negs(params.negatives);
  std::vector<std::uint32_t> tokens;
  for (std::size_t w = begin; w < end; ++w) {
    tokens.clear();
    for (auto t : walks[w]) tokens.push_back(vocab.from_corpus[t]);
    const std::size_t done = processed.fetch_add(tokens.size(), std::memory_order_relaxed);
    const double progress = static_cast<double>(done) / static_cast<double>(total_tokens);
    const double lr = params.lr0 * std::max(0.1, 1.0 - 0.9 * progress);
    for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
      const auto b = static_cast<std::ptrdiff_t>(1 + rng.below(params.window));
      const auto ipos = static_cast<std::ptrdiff_t>(pos);
      const auto lo = std::max<std::ptrdiff_t>(0, ipos - b);
      const auto hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(tokens.size()) - 1, ipos + b);
      for (auto c = lo; c <= hi; ++c) {
        if (c == ipos) continue;
        for (auto& n : negs) n = static_cast<std::uint32_t>(vocab.noise_table.sample(rng));
        sgd_pair<Racy>(m, tokens[pos], tokens[static_cast<std::size_t>(c)], negs, lr, grad);
      }
    }
  }
}

}  // namespace detail

/// Skip-gram with negative sampling over a walk corpus. Per position the
/// effective window is drawn uniformly from 1..window; each positive pair
/// gets `negatives` draws from the noise distribution. The learning rate
/// decays linearly from lr0 to lr0/10 over all epochs. threads == 1 is bit
/// reproducible for a given seed.
///
/// `on_epoch(e, m)` runs after each epoch e (1-based) when set.
inline EmbeddingMatrix train(const WalkCorpus& corpus, const SgnsParams& params,
                             const std::function<void(std::size_t, const EmbeddingMatrix&)>& on_epoch = {}) {
  params.validate();
  const bool trainable = std::any_of(corpus.walks.begin(), corpus.walks.end(),
                                     [](const auto& w) { return w.size() >= 2; });
  if (!trainable) throw InvalidArgument("walk corpus has no walk with two or more nodes");
  const Vocab vocab = build_vocab(corpus, params.unigram_power);

  EmbeddingMatrix m;
  m.ids = vocab.ids;
  m.dims = params.dims;
  m.params = params;
  const std::size_t n = vocab.ids.size();
  m.input.resize(n * params.dims);
  m.output.assign(n * params.dims, 0.0);
  Xoshiro256 init(derive_seed(params.seed, 0));
  const double scale = 1.0 / static_cast<double>(params.dims);
  for (auto& x : m.input) x = (init.uniform() - 0.5) * scale;

  std::size_t tokens_per_epoch = 0;
  for (const auto& w : corpus.walks) tokens_per_epoch += w.size();
  const std::size_t total = tokens_per_epoch * params.epochs;
  std::atomic<std::size_t> processed{0};

  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    if (params.threads <= 1) {
      Xoshiro256 rng(derive_seed(params.seed, 1, epoch));
      detail::train_walks<false>(m, vocab, corpus.walks, 0, corpus.walks.size(), params, rng,
                                 processed, total);
    } else {
      parallel_for(corpus.walks.size(), params.threads, [&](std::size_t b, std::size_t e) {
        Xoshiro256 rng(derive_seed(params.seed, 2, epoch, b));
        detail::train_walks<true>(m, vocab, corpus.walks, b, e, params, rng, processed, total);
      });
    }
    if (!m.all_finite())
      throw DataError("non-finite embedding component after epoch " + std::to_string(epoch + 1));
    if (on_epoch) on_epoch(epoch + 1, m);
  }
  return m;
}

/// Draws `count` (center, context, negatives) examples the way training
/// does, for loss monitoring on a fixed sample.
inline std::vector<TrainingPair> sample_training_pairs(const WalkCorpus& corpus, const Vocab& vocab,
                                                       const SgnsParams& params, std::size_t count,
                                                       std::uint64_t seed) {
  std::vector<TrainingPair> out;
  if (corpus.walks.empty()) return out;
  Xoshiro256 rng(seed);
  std::size_t guard = 0;
  while (out.size() < count && guard++ < count * 100) {
    const auto& walk = corpus.walks[rng.below(corpus.walks.size())];
    if (walk.size() < 2) continue;
    const auto pos = rng.below(walk.size());
    const auto b = 1 + rng.below(params.window);
    const auto lo = pos >= b ? pos - b : 0;
    const auto hi = std::min<std::size_t>(walk.size() - 1, pos + b);
    auto c = lo + rng.below(hi - lo + 1);
    if (c == pos) continue;
    TrainingPair tp{vocab.from_corpus[walk[pos]], vocab.from_corpus[walk[c]], {}};
    for (std::size_t k = 0; k < params.negatives; ++k)
      tp.negatives.push_back(static_cast<std::uint32_t>(vocab.noise_table.sample(rng)));
    out.push_back(std::move(tp));
  }
  return out;
}

/// Summed pair_loss of `pairs` under the current input/output matrices.
inline double total_loss(const EmbeddingMatrix& m, std::span<const TrainingPair> pairs) {
  double sum = 0.0;
  std::vector<std::span<const double>> negs;
  for (const auto& p : pairs) {
    negs.clear();
    for (auto n : p.negatives) negs.push_back(m.context_row(n));
    sum += pair_loss(m.row(p.center), m.context_row(p.context), negs);
  }
  return sum;
}

// Embedding file: TSV. First line
//   #dims=D count=N mode=input seed=S <more provenance>
// then one row per concept sorted by concept_id, components with 9
// significant digits.

inline std::string write_embeddings_tsv(const EmbeddingMatrix& m, Provenance prov = {}) {
  std::vector<std::size_t> order(m.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return m.ids[a] < m.ids[b]; });
  prov.fields.erase("dims");
  prov.fields.erase("count");
  prov.fields.erase("mode");
  prov.fields.erase("seed");
  std::string out = "#dims=" + std::to_string(m.dims) + " count=" + std::to_string(m.size()) +
                    " mode=input seed=" + std::to_string(m.params.seed);
  const auto rest = prov.render();
  if (!rest.empty()) out += ' ' + rest;
  out += '\n';
  for (auto i : order) {
    out += m.ids[i];
    for (double x : m.row(i)) {
      out += '\t';
      out += format_double(x, 9);
    }
    out += '\n';
  }
  return out;
}

inline EmbeddingMatrix read_embeddings_tsv(std::string_view text) {
  EmbeddingMatrix m;
  std::size_t pos = 0, lineno = 0;
  bool header = false;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream ss{std::string(line.substr(1))};
      std::string kv;
      while (ss >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const auto key = kv.substr(0, eq), val = kv.substr(eq + 1);
        try {
          if (key == "dims") m.dims = std::stoul(val), header = true;
          else if (key == "seed") m.params.seed = std::stoull(val);
        } catch (const std::exception&) {
          throw DataError("embedding header: bad value for " + key);
        }
      }
      continue;
    }
    if (!header) throw DataError("embedding file lacks a #dims= header line");
    const auto fields = detail::split(line, '\t');
    if (fields.size() != m.dims + 1)
      throw DataError("embedding line " + std::to_string(lineno) + ": expected " +
                      std::to_string(m.dims) + " components, got " + std::to_string(fields.size() - 1));
    m.ids.emplace_back(fields[0]);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      const std::string s(fields[k]);
      char* endp = nullptr;
      const double v = std::strtod(s.c_str(), &endp);
      if (s.empty() || endp != s.c_str() + s.size() || !std::isfinite(v))
        throw DataError("embedding line " + std::to_string(lineno) + ": bad number '" + s + "'");
      m.input.push_back(v);
    }
  }
  if (!header) throw DataError("embedding file lacks a #dims= header line");
  m.params.dims = m.dims;
  return m;
}

}  // namespace litkg

#endif  // LITKG_SGNS_HPP
