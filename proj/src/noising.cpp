#include "apegen/noising.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <optional>
#include <thread>

#include "apegen/error.hpp"
#include "apegen/tokenizer.hpp"

namespace apegen {

namespace {

constexpr std::array<std::string_view, 4> kSchemeNames = {"random", "semantic",
                                                          "morphemic", "syntactic"};

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }

std::vector<std::string> split_spaces(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    const std::size_t start = i;
    while (i < text.size() && text[i] != ' ') ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

// Casing is taken from the first original token and applied to the first
// replacement token only.
std::vector<std::string> cased(std::string_view original_head,
                               std::vector<std::string> replacement) {
  if (!replacement.empty()) {
    replacement[0] = transfer_casing(original_head, std::move(replacement[0]));
  }
  return replacement;
}

Edit make_edit(NoiseScheme scheme, std::size_t begin, std::size_t end,
               std::span<const std::string> tokens, std::vector<std::string> replacement) {
  Edit edit;
  edit.scheme = scheme;
  edit.begin = begin;
  edit.end = end;
  edit.original.assign(tokens.begin() + static_cast<std::ptrdiff_t>(begin),
                       tokens.begin() + static_cast<std::ptrdiff_t>(end));
  edit.replacement = std::move(replacement);
  return edit;
}

// Draws a full permutation of the eligible units, then walks it until k units
// have been edited. A unit whose attempt fails is skipped and the walk moves
// on, so the edits made for a smaller k are a prefix of those for a larger k.
template <typename TryUnit>
NoiseOutcome select_and_apply(std::span<const std::string> tokens,
                              std::size_t eligible, const NoiseConfig& config,
                              RandomStream& rng, TryUnit&& try_unit) {
  NoiseOutcome out;
  out.eligible = eligible;
  out.requested = replacement_count(eligible, config.ratio);
  if (out.requested > 0) {
    std::vector<std::size_t> order(eligible);
    std::iota(order.begin(), order.end(), std::size_t{0});
    deterministic_shuffle(order.begin(), order.end(), rng);
    for (const std::size_t unit : order) {
      if (out.edits.size() == out.requested) break;
      if (auto edit = try_unit(unit)) out.edits.push_back(std::move(*edit));
    }
    std::sort(out.edits.begin(), out.edits.end(),
              [](const Edit& a, const Edit& b) { return a.begin < b.begin; });
  }
  out.shortfall = out.edits.size() < out.requested || (eligible == 0 && config.ratio > 0);
  out.mt_tokens = apply_edits(tokens, out.edits);
  return out;
}

// Redraws from `pool` until the cased draw differs from `original`.
template <typename T, typename Case>
std::optional<std::vector<std::string>> draw_distinct(
    const WeightedPool<T>& pool, const std::vector<std::string>& original,
    RandomStream& rng, Case&& to_tokens) {
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    auto candidate = to_tokens(pool.draw(rng));
    if (candidate != original) return candidate;
  }
  return std::nullopt;
}

std::vector<std::string> surfaces(const TaggedSentence& tagged) {
  std::vector<std::string> out;
  out.reserve(tagged.tokens.size());
  for (const auto& t : tagged.tokens) out.push_back(t.surface);
  return out;
}

}  // namespace

std::string_view scheme_name(NoiseScheme scheme) {
  return kSchemeNames[static_cast<std::size_t>(scheme)];
}

std::optional<NoiseScheme> parse_scheme(std::string_view name) {
  for (std::size_t i = 0; i < kSchemeNames.size(); ++i) {
    if (kSchemeNames[i] == name) return static_cast<NoiseScheme>(i);
  }
  return std::nullopt;
}

void check_config(const NoiseConfig& config) {
  if (!(config.ratio >= 0.0 && config.ratio <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "ratio must be in [0, 1], got " + std::to_string(config.ratio));
  }
}

std::size_t replacement_count(std::size_t n_eligible, double ratio) {
  if (n_eligible == 0 || !(ratio > 0.0)) return 0;
  const double exact = ratio * static_cast<double>(n_eligible);
  // Absorbs representation error so that 0.3 * 10 counts as exactly 3.
  const double k = std::ceil(exact - 1e-9 * std::max(1.0, exact));
  return std::min(n_eligible, static_cast<std::size_t>(std::max(0.0, k)));
}

std::string transfer_casing(std::string_view original, std::string replacement) {
  if (original.empty() || replacement.empty()) return replacement;
  std::size_t letters = 0;
  bool any_lower = false;
  for (char c : original) {
    if (is_upper(c)) ++letters;
    if (is_lower(c)) {
      ++letters;
      any_lower = true;
    }
  }
  if (letters >= 2 && !any_lower) {
    for (char& c : replacement) {
      if (is_lower(c)) c = static_cast<char>(c - 'a' + 'A');
    }
  } else if (is_upper(original.front()) && is_lower(replacement.front())) {
    replacement.front() = static_cast<char>(replacement.front() - 'a' + 'A');
  }
  return replacement;
}

std::vector<std::string> apply_edits(std::span<const std::string> pe_tokens,
                                     std::span<const Edit> edits) {
  std::vector<std::string> out;
  out.reserve(pe_tokens.size());
  std::size_t pos = 0;
  for (const auto& edit : edits) {
    if (edit.begin < pos || edit.end > pe_tokens.size() || edit.begin > edit.end) {
      throw Error(ErrorCode::kInvalidArgument, "edit ranges overlap or exceed sentence");
    }
    out.insert(out.end(), pe_tokens.begin() + static_cast<std::ptrdiff_t>(pos),
               pe_tokens.begin() + static_cast<std::ptrdiff_t>(edit.begin));
    out.insert(out.end(), edit.replacement.begin(), edit.replacement.end());
    pos = edit.end;
  }
  out.insert(out.end(), pe_tokens.begin() + static_cast<std::ptrdiff_t>(pos),
             pe_tokens.end());
  return out;
}

NoiseOutcome noise_random(std::span<const std::string> tokens,
                          const ReplacementPools& pools, const NoiseConfig& config,
                          RandomStream& rng) {
  if (pools.vocab.distinct() < 2) {
    throw Error(ErrorCode::kVocabTooSmall,
                "random scheme needs at least 2 distinct vocabulary entries");
  }
  return select_and_apply(tokens, tokens.size(), config, rng,
                          [&](std::size_t i) -> std::optional<Edit> {
    const std::vector<std::string> original{tokens[i]};
    auto to_tokens = [&](const std::string& s) {
      return std::vector<std::string>{transfer_casing(tokens[i], s)};
    };
    auto replacement = draw_distinct(pools.vocab, original, rng, to_tokens);
    if (!replacement) {
      // Keeps the edit count exact when the redraw budget runs out.
      for (const auto& [surface, count] : pools.vocab.counts()) {
        auto candidate = to_tokens(surface);
        if (candidate != original) {
          replacement = std::move(candidate);
          break;
        }
      }
    }
    if (!replacement) return std::nullopt;
    return make_edit(NoiseScheme::kRandom, i, i + 1, tokens, std::move(*replacement));
  });
}

NoiseOutcome noise_semantic(const TaggedSentence& tagged, const WordnetDb& db,
                            const NoiseConfig& config, RandomStream& rng) {
  const auto tokens = surfaces(tagged);
  std::vector<std::size_t> positions;
  std::vector<std::vector<std::string>> candidates;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto cat = map_penn_to_wn(tagged.tags[i]);
    if (!cat) continue;
    auto syn = synonyms(db, tokens[i], *cat);
    if (syn.empty()) continue;
    positions.push_back(i);
    candidates.emplace_back(syn.begin(), syn.end());
  }
  return select_and_apply(tokens, positions.size(), config, rng,
                          [&](std::size_t unit) -> std::optional<Edit> {
    const std::size_t i = positions[unit];
    const auto& options = candidates[unit];
    const std::vector<std::string> original{tokens[i]};
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
      const auto& pick = options[rng.below(options.size())];
      auto replacement = cased(tokens[i], split_spaces(pick));
      if (!replacement.empty() && replacement != original) {
        return make_edit(NoiseScheme::kSemantic, i, i + 1, tokens,
                         std::move(replacement));
      }
    }
    return std::nullopt;
  });
}

NoiseOutcome noise_morphemic(const TaggedSentence& tagged,
                             const ReplacementPools& pools,
                             const NoiseConfig& config, RandomStream& rng) {
  const auto tokens = surfaces(tagged);
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (pools.by_tag(tagged.tags[i]).has_other_than(tokens[i])) positions.push_back(i);
  }
  return select_and_apply(tokens, positions.size(), config, rng,
                          [&](std::size_t unit) -> std::optional<Edit> {
    const std::size_t i = positions[unit];
    const std::vector<std::string> original{tokens[i]};
    auto replacement = draw_distinct(
        pools.by_tag(tagged.tags[i]), original, rng, [&](const std::string& s) {
          return std::vector<std::string>{transfer_casing(tokens[i], s)};
        });
    if (!replacement) return std::nullopt;
    return make_edit(NoiseScheme::kMorphemic, i, i + 1, tokens, std::move(*replacement));
  });
}

NoiseOutcome noise_syntactic(const ChunkedSentence& chunked,
                             const ReplacementPools& pools,
                             const NoiseConfig& config, RandomStream& rng) {
  const auto tokens = surfaces(chunked.tagged);
  std::vector<const Chunk*> units;
  std::vector<Phrase> phrases;
  for (const auto& c : chunked.chunks) {
    Phrase phrase(tokens.begin() + static_cast<std::ptrdiff_t>(c.begin),
                  tokens.begin() + static_cast<std::ptrdiff_t>(c.end));
    if (!pools.by_label(c.label).has_other_than(phrase)) continue;
    units.push_back(&c);
    phrases.push_back(std::move(phrase));
  }
  return select_and_apply(tokens, units.size(), config, rng,
                          [&](std::size_t unit) -> std::optional<Edit> {
    const Chunk& c = *units[unit];
    const Phrase& original = phrases[unit];
    auto replacement = draw_distinct(
        pools.by_label(c.label), original, rng,
        [&](const Phrase& p) { return cased(original.front(), p); });
    if (!replacement) return std::nullopt;
    return make_edit(NoiseScheme::kSyntactic, c.begin, c.end, tokens,
                     std::move(*replacement));
  });
}

void check_resources(const NoiseConfig& config, const NoiseResources& resources) {
  const std::string scheme(scheme_name(config.scheme));
  auto require = [&](bool present, const char* what) {
    if (!present) {
      throw Error(ErrorCode::kMissingResource,
                  scheme + " scheme requires " + what + " but none is loaded");
    }
  };
  switch (config.scheme) {
    case NoiseScheme::kRandom:
      require(resources.pools != nullptr, "replacement pools");
      if (resources.pools->vocab.distinct() < 2) {
        throw Error(ErrorCode::kVocabTooSmall,
                    "random scheme needs at least 2 distinct vocabulary entries");
      }
      break;
    case NoiseScheme::kSemantic:
      require(resources.tagger != nullptr, "a tagger model");
      require(resources.wordnet != nullptr, "a WordNet database");
      break;
    case NoiseScheme::kMorphemic:
    case NoiseScheme::kSyntactic:
      require(resources.tagger != nullptr, "a tagger model");
      require(resources.pools != nullptr, "replacement pools");
      break;
  }
}

ApeTriplet generate_triplet(const SentencePair& pair, const NoiseConfig& config,
                            const NoiseResources& resources) {
  check_config(config);
  check_resources(config, resources);
  RandomStream rng = derive_rng(config.seed, pair.index);
  std::vector<Token> tokens = tokenize(pair.tgt);

  NoiseOutcome outcome;
  switch (config.scheme) {
    case NoiseScheme::kRandom: {
      std::vector<std::string> words;
      words.reserve(tokens.size());
      for (const auto& t : tokens) words.push_back(t.surface);
      outcome = noise_random(words, *resources.pools, config, rng);
      break;
    }
    case NoiseScheme::kSemantic:
      outcome = noise_semantic(tag(*resources.tagger, std::move(tokens)),
                               *resources.wordnet, config, rng);
      break;
    case NoiseScheme::kMorphemic:
      outcome = noise_morphemic(tag(*resources.tagger, std::move(tokens)),
                                *resources.pools, config, rng);
      break;
    case NoiseScheme::kSyntactic:
      outcome = noise_syntactic(chunk(tag(*resources.tagger, std::move(tokens))),
                                *resources.pools, config, rng);
      break;
  }

  ApeTriplet triplet;
  triplet.src = pair.src;
  triplet.pe = pair.tgt;
  triplet.mt = detokenize(outcome.mt_tokens);
  triplet.sentence_index = pair.index;
  triplet.actual_replacements = outcome.edits.size();
  triplet.eligible = outcome.eligible;
  triplet.shortfall = outcome.shortfall;
  triplet.edits = std::move(outcome.edits);
  return triplet;
}

void GenerationStats::record(const ApeTriplet& triplet, NoiseScheme scheme) {
  ++total_sentences;
  total_edits += triplet.actual_replacements;
  if (triplet.shortfall) ++shortfall_count;
  if (triplet.eligible > 0) {
    const auto s = static_cast<std::size_t>(scheme);
    ratio_sum[s] += static_cast<double>(triplet.actual_replacements) /
                    static_cast<double>(triplet.eligible);
    ++ratio_count[s];
  }
}

void GenerationStats::merge(const GenerationStats& other) {
  total_sentences += other.total_sentences;
  total_edits += other.total_edits;
  shortfall_count += other.shortfall_count;
  for (std::size_t s = 0; s < ratio_sum.size(); ++s) {
    ratio_sum[s] += other.ratio_sum[s];
    ratio_count[s] += other.ratio_count[s];
  }
  errors.insert(errors.end(), other.errors.begin(), other.errors.end());
  std::sort(errors.begin(), errors.end(),
            [](const SentenceError& a, const SentenceError& b) { return a.index < b.index; });
}

std::optional<double> GenerationStats::mean_realized_ratio(NoiseScheme scheme) const {
  const auto s = static_cast<std::size_t>(scheme);
  if (ratio_count[s] == 0) return std::nullopt;
  return ratio_sum[s] / static_cast<double>(ratio_count[s]);
}

GenerationStats generate_dataset(const ParallelCorpus& corpus,
                                 const NoiseConfig& config,
                                 const NoiseResources& resources,
                                 const std::function<void(const ApeTriplet&)>& sink,
                                 const GenerateOptions& options) {
  check_config(config);
  check_resources(config, resources);

  unsigned jobs = options.jobs == 0 ? std::thread::hardware_concurrency() : options.jobs;
  jobs = std::max(1u, jobs);
  const std::size_t batch = std::max<std::size_t>(1, options.batch_size);
  const std::size_t total = corpus.pairs.size();

  GenerationStats stats;
  std::vector<std::optional<ApeTriplet>> results;
  std::vector<std::string> failures;
  for (std::size_t start = 0; start < total; start += batch) {
    const std::size_t end = std::min(total, start + batch);
    results.assign(end - start, std::nullopt);
    failures.assign(end - start, std::string());

    std::atomic<std::size_t> next{start};
    auto work = [&] {
      for (std::size_t i = next++; i < end; i = next++) {
        try {
          results[i - start] = generate_triplet(corpus.pairs[i], config, resources);
        } catch (const std::exception& e) {
          failures[i - start] = e.what();
          if (failures[i - start].empty()) failures[i - start] = "unknown error";
        }
      }
    };
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(jobs, end - start));
    if (workers <= 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    // Emission and accumulation stay sequential so floating-point sums are
    // independent of the worker count.
    for (std::size_t i = start; i < end; ++i) {
      if (results[i - start]) {
        stats.record(*results[i - start], config.scheme);
        sink(*results[i - start]);
      } else {
        stats.errors.push_back({corpus.pairs[i].index, failures[i - start]});
      }
    }
    if (options.progress) options.progress(end, total);
  }
  return stats;
}

std::vector<ApeTriplet> generate_all(const ParallelCorpus& corpus,
                                     const NoiseConfig& config,
                                     const NoiseResources& resources,
                                     GenerationStats* stats,
                                     const GenerateOptions& options) {
  std::vector<ApeTriplet> out;
  out.reserve(corpus.pairs.size());
  GenerationStats s = generate_dataset(
      corpus, config, resources, [&](const ApeTriplet& t) { out.push_back(t); }, options);
  if (stats != nullptr) *stats = std::move(s);
  return out;
}

}  // namespace apegen
