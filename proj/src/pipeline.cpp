#include "apegen/pipeline.hpp"

#include "apegen/error.hpp"

namespace apegen {

namespace {

std::vector<SkippedRecord> to_records(const std::vector<SentenceError>& errors) {
  std::vector<SkippedRecord> out;
  out.reserve(errors.size());
  for (const auto& e : errors) out.push_back({e.index, e.message});
  return out;
}

}  // namespace

bool scheme_needs_pools(NoiseScheme scheme) { return scheme != NoiseScheme::kSemantic; }

bool scheme_needs_wordnet(NoiseScheme scheme) { return scheme == NoiseScheme::kSemantic; }

NoiseResources LoadedResources::view() const {
  NoiseResources r;
  if (tagger) r.tagger = &*tagger;
  if (wordnet) r.wordnet = &*wordnet;
  if (pools) r.pools = &*pools;
  return r;
}

LoadedResources load_resources(NoiseScheme scheme, const ParallelCorpus& corpus,
                               const ResourcePaths& paths) {
  LoadedResources out;
  const std::string name(scheme_name(scheme));
  if (scheme_needs_wordnet(scheme)) {
    if (!paths.wordnet_dir) {
      throw Error(ErrorCode::kMissingResource,
                  name + " scheme requires a WordNet directory (--wordnet)");
    }
    out.wordnet = load_wordnet(*paths.wordnet_dir);
  }
  if (!paths.tagger_model || !std::filesystem::exists(*paths.tagger_model)) {
    throw Error(ErrorCode::kMissingResource,
                name + " scheme requires a tagger model" +
                    (paths.tagger_model ? " (not found: " + paths.tagger_model->string() + ")"
                                        : std::string()));
  }
  out.tagger = TaggerModel::load(*paths.tagger_model);
  out.tagger_fingerprint = tagger_fingerprint(*out.tagger);

  if (scheme_needs_pools(scheme)) {
    const std::string corpus_fp = corpus_fingerprint(corpus);
    if (paths.pools_cache) {
      out.pools = load_pools_cache(*paths.pools_cache, corpus_fp, out.tagger_fingerprint);
      out.pools_from_cache = out.pools.has_value();
    }
    if (!out.pools) {
      out.pools = build_pools(corpus, *out.tagger);
      if (paths.pools_cache) save_pools_cache(*out.pools, *paths.pools_cache);
    }
  }
  return out;
}

Manifest make_manifest(const NoiseConfig& config, OutputFormat format,
                       const std::string& prefix, const std::string& corpus_fp,
                       const std::string& tagger_fp) {
  Manifest m;
  m.config = config;
  m.format = format;
  m.prefix = prefix;
  m.corpus_fingerprint = corpus_fp;
  m.tagger_fingerprint = tagger_fp;
  return m;
}

RunResult generate_to_directory(const ParallelCorpus& corpus, const NoiseConfig& config,
                                const NoiseResources& resources, OutputFormat format,
                                const std::filesystem::path& dir, Manifest manifest,
                                const GenerateOptions& options) {
  check_config(config);
  check_resources(config, resources);
  std::filesystem::create_directories(dir);
  auto writer = make_writer(format, dir, manifest.prefix);
  RunResult result;
  result.stats = generate_dataset(
      corpus, config, resources, [&](const ApeTriplet& t) { writer->write(t); }, options);
  writer->close();
  apply_report(manifest, *writer);
  manifest.generation_errors = to_records(result.stats.errors);
  write_manifest(manifest, dir);
  result.manifest = std::move(manifest);
  return result;
}

Manifest write_to_directory(std::span<const ApeTriplet> triplets, OutputFormat format,
                            const std::filesystem::path& dir, Manifest manifest,
                            const GenerationStats& stats) {
  std::filesystem::create_directories(dir);
  manifest.format = format;
  auto writer = make_writer(format, dir, manifest.prefix);
  for (const auto& t : triplets) writer->write(t);
  writer->close();
  apply_report(manifest, *writer);
  manifest.generation_errors = to_records(stats.errors);
  write_manifest(manifest, dir);
  return manifest;
}

}  // namespace apegen
