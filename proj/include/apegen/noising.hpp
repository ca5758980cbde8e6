#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "apegen/chunker.hpp"
#include "apegen/corpus.hpp"
#include "apegen/pools.hpp"
#include "apegen/rng.hpp"
#include "apegen/tagger.hpp"
#include "apegen/wordnet.hpp"

namespace apegen {

enum class NoiseScheme { kRandom, kSemantic, kMorphemic, kSyntactic };

inline constexpr std::array<NoiseScheme, 4> kNoiseSchemes = {
    NoiseScheme::kRandom, NoiseScheme::kSemantic, NoiseScheme::kMorphemic,
    NoiseScheme::kSyntactic};

std::string_view scheme_name(NoiseScheme scheme);
std::optional<NoiseScheme> parse_scheme(std::string_view name);

struct NoiseConfig {
  NoiseScheme scheme = NoiseScheme::kRandom;
  double ratio = 0.0;  // in [0, 1]
  std::uint64_t seed = 0;

  bool operator==(const NoiseConfig&) const = default;
};

// Throws InvalidArgument unless 0 <= ratio <= 1.
void check_config(const NoiseConfig& config);

// One substitution: PE tokens [begin, end) were replaced by `replacement`.
struct Edit {
  NoiseScheme scheme = NoiseScheme::kRandom;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::vector<std::string> original;
  std::vector<std::string> replacement;

  bool operator==(const Edit&) const = default;
};

struct ApeTriplet {
  std::string src;
  std::string mt;
  std::string pe;
  std::vector<Edit> edits;
  std::size_t sentence_index = 0;
  std::size_t actual_replacements = 0;
  // Units the scheme could have edited in this sentence.
  std::size_t eligible = 0;
  // Fewer units were edited than the ratio asked for.
  bool shortfall = false;

  bool operator==(const ApeTriplet&) const = default;
};

// Result of applying one scheme to one sentence.
struct NoiseOutcome {
  std::vector<std::string> mt_tokens;
  std::vector<Edit> edits;
  std::size_t eligible = 0;
  std::size_t requested = 0;
  bool shortfall = false;
};

// Upper bound on redraws before a unit is given up.
inline constexpr int kMaxRedraws = 100;

// min(n_eligible, ceil(ratio * n_eligible)); 0 when ratio or n is 0.
std::size_t replacement_count(std::size_t n_eligible, double ratio);

// Mirrors title case or ALL CAPS of `original` onto `replacement`.
std::string transfer_casing(std::string_view original, std::string replacement);

// Replaces the PE token ranges named by `edits` (sorted, non-overlapping).
std::vector<std::string> apply_edits(std::span<const std::string> pe_tokens,
                                     std::span<const Edit> edits);

NoiseOutcome noise_random(std::span<const std::string> tokens,
                          const ReplacementPools& pools, const NoiseConfig& config,
                          RandomStream& rng);
NoiseOutcome noise_semantic(const TaggedSentence& tagged, const WordnetDb& db,
                            const NoiseConfig& config, RandomStream& rng);
NoiseOutcome noise_morphemic(const TaggedSentence& tagged,
                             const ReplacementPools& pools,
                             const NoiseConfig& config, RandomStream& rng);
NoiseOutcome noise_syntactic(const ChunkedSentence& chunked,
                             const ReplacementPools& pools,
                             const NoiseConfig& config, RandomStream& rng);

// Shared read-only inputs. Which members are required depends on the scheme:
// random needs pools; semantic needs tagger and wordnet; morphemic and
// syntactic need tagger and pools.
struct NoiseResources {
  const TaggerModel* tagger = nullptr;
  const WordnetDb* wordnet = nullptr;
  const ReplacementPools* pools = nullptr;
};

// Throws MissingResource when `resources` lacks something the scheme needs,
// and VocabTooSmall when the random scheme has fewer than two surfaces.
void check_resources(const NoiseConfig& config, const NoiseResources& resources);

// src and pe are copied verbatim; the stream is derive_rng(seed, pair.index).
ApeTriplet generate_triplet(const SentencePair& pair, const NoiseConfig& config,
                            const NoiseResources& resources);

struct SentenceError {
  std::size_t index = 0;
  std::string message;
};

// Aggregates merge associatively and commutatively.
struct GenerationStats {
  std::size_t total_sentences = 0;
  std::size_t total_edits = 0;
  std::size_t shortfall_count = 0;
  // Per scheme: sum of edits/eligible over sentences with eligible > 0.
  std::array<double, 4> ratio_sum{};
  std::array<std::size_t, 4> ratio_count{};
  std::vector<SentenceError> errors;

  void record(const ApeTriplet& triplet, NoiseScheme scheme);
  void merge(const GenerationStats& other);
  // Mean realized ratio for a scheme, or nullopt when nothing was measured.
  std::optional<double> mean_realized_ratio(NoiseScheme scheme) const;
};

struct GenerateOptions {
  // Worker threads; 0 means hardware concurrency.
  unsigned jobs = 1;
  // Sentences processed per parallel batch before results are emitted.
  std::size_t batch_size = 2048;
  // Called after each batch with the number of pairs processed so far.
  std::function<void(std::size_t done, std::size_t total)> progress;
};

// Emits one triplet per pair, in corpus order, through `sink`. Sentence-level
// failures are recorded in stats.errors and the sentence is skipped.
GenerationStats generate_dataset(const ParallelCorpus& corpus,
                                 const NoiseConfig& config,
                                 const NoiseResources& resources,
                                 const std::function<void(const ApeTriplet&)>& sink,
                                 const GenerateOptions& options = {});

// Convenience wrapper collecting the stream.
std::vector<ApeTriplet> generate_all(const ParallelCorpus& corpus,
                                     const NoiseConfig& config,
                                     const NoiseResources& resources,
                                     GenerationStats* stats = nullptr,
                                     const GenerateOptions& options = {});

}  // namespace apegen
