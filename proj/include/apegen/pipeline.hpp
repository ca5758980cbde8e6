#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "apegen/corpus.hpp"
#include "apegen/formats.hpp"
#include "apegen/noising.hpp"
#include "apegen/pools.hpp"
#include "apegen/tagger.hpp"
#include "apegen/wordnet.hpp"

namespace apegen {

// True when the scheme draws from corpus-derived pools.
bool scheme_needs_pools(NoiseScheme scheme);
bool scheme_needs_wordnet(NoiseScheme scheme);

// Owns whatever a run loaded; view() hands out the borrowed form.
struct LoadedResources {
  std::optional<TaggerModel> tagger;
  std::optional<WordnetDb> wordnet;
  std::optional<ReplacementPools> pools;
  std::string tagger_fingerprint;
  bool pools_from_cache = false;

  NoiseResources view() const;
};

struct ResourcePaths {
  std::optional<std::filesystem::path> tagger_model;
  std::optional<std::filesystem::path> wordnet_dir;
  std::optional<std::filesystem::path> pools_cache;
};

// Loads what `scheme` needs for `corpus`. A missing WordNet path for the
// semantic scheme or a missing tagger raises MissingResource. Pools come from
// the cache when its fingerprints match, otherwise they are built and, when a
// cache path is given, written back.
LoadedResources load_resources(NoiseScheme scheme, const ParallelCorpus& corpus,
                               const ResourcePaths& paths);

// Manifest fields known before generation.
Manifest make_manifest(const NoiseConfig& config, OutputFormat format,
                       const std::string& prefix, const std::string& corpus_fingerprint,
                       const std::string& tagger_fingerprint);

struct RunResult {
  Manifest manifest;
  GenerationStats stats;
};

// Streams generation into a writer for `format` under `dir` and writes
// manifest.json next to it.
RunResult generate_to_directory(const ParallelCorpus& corpus, const NoiseConfig& config,
                                const NoiseResources& resources, OutputFormat format,
                                const std::filesystem::path& dir, Manifest manifest,
                                const GenerateOptions& options = {});

// Writes already generated triplets; the counterpart of generate_to_directory.
Manifest write_to_directory(std::span<const ApeTriplet> triplets, OutputFormat format,
                            const std::filesystem::path& dir, Manifest manifest,
                            const GenerationStats& stats);

}  // namespace apegen
