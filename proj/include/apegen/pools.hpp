#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "apegen/chunker.hpp"
#include "apegen/corpus.hpp"
#include "apegen/rng.hpp"
#include "apegen/tagger.hpp"

namespace apegen {

// Multiset with frequency-weighted sampling. Items are kept in sorted order so
// that draws are a pure function of (contents, random stream).
template <typename T>
class WeightedPool {
 public:
  void add(const T& item, std::uint64_t count = 1) {
    counts_[item] += count;
    total_ += count;
    cumulative_.clear();
  }

  // Builds the sampling table. Must be called after the last add() and
  // before draw().
  void freeze() {
    items_.clear();
    cumulative_.clear();
    std::uint64_t running = 0;
    for (const auto& [item, count] : counts_) {
      running += count;
      items_.push_back(item);
      cumulative_.push_back(running);
    }
  }

  const T& draw(RandomStream& rng) const {
    const std::uint64_t target = rng.below(total_);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    return items_[static_cast<std::size_t>(it - cumulative_.begin())];
  }

  std::uint64_t count(const T& item) const {
    const auto it = counts_.find(item);
    return it == counts_.end() ? 0 : it->second;
  }
  bool contains(const T& item) const { return counts_.contains(item); }
  // True when some item other than `item` is present.
  bool has_other_than(const T& item) const {
    return counts_.size() > 1 || (counts_.size() == 1 && !contains(item));
  }

  std::size_t distinct() const { return counts_.size(); }
  std::uint64_t total() const { return total_; }
  bool empty() const { return total_ == 0; }
  const std::map<T, std::uint64_t>& counts() const { return counts_; }

  bool operator==(const WeightedPool& other) const {
    return counts_ == other.counts_;
  }

 private:
  std::map<T, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
  std::vector<T> items_;
  std::vector<std::uint64_t> cumulative_;
};

using Phrase = std::vector<std::string>;

// Replacement material harvested from the target side of a corpus.
// Immutable once built; shared across worker threads.
struct ReplacementPools {
  WeightedPool<std::string> vocab;
  std::array<WeightedPool<std::string>, kTagCount> pos_pool;
  std::array<WeightedPool<Phrase>, 5> chunk_pool;
  std::string corpus_fingerprint;
  std::string tagger_fingerprint;

  const WeightedPool<std::string>& by_tag(PosTag tag) const {
    return pos_pool[tag.id()];
  }
  const WeightedPool<Phrase>& by_label(ChunkLabel label) const {
    return chunk_pool[static_cast<std::size_t>(label)];
  }

  // Recomputes sampling tables after deserialization or manual edits.
  void freeze();

  bool operator==(const ReplacementPools& other) const {
    return vocab == other.vocab && pos_pool == other.pos_pool &&
           chunk_pool == other.chunk_pool &&
           corpus_fingerprint == other.corpus_fingerprint &&
           tagger_fingerprint == other.tagger_fingerprint;
  }
};

// Tokenizes, tags and chunks every target sentence. Throws EmptyCorpus.
// Sentences whose target has no tokens are skipped.
ReplacementPools build_pools(const ParallelCorpus& corpus, const TaggerModel& tagger);

// Adds one analysed sentence to the pools (used by build_pools; exposed so
// callers can reuse analyses). Call pools.freeze() afterwards.
void add_to_pools(ReplacementPools& pools, const ChunkedSentence& sentence);

// SHA-256 of the serialized model; identifies the tagger a pool was built with.
std::string tagger_fingerprint(const TaggerModel& tagger);

// JSON cache. load_pools_cache returns nullopt on a missing file or when
// either fingerprint differs; a malformed file raises ParseError.
void save_pools_cache(const ReplacementPools& pools, const std::filesystem::path& path);
std::optional<ReplacementPools> load_pools_cache(const std::filesystem::path& path,
                                                 const std::string& corpus_fingerprint,
                                                 const std::string& tagger_fingerprint);

}  // namespace apegen
