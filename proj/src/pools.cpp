#include "apegen/pools.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "apegen/digest.hpp"
#include "apegen/error.hpp"

namespace apegen {

using nlohmann::json;

namespace {
constexpr std::string_view kCacheVersion = "apegen-pools-1";
}  // namespace

void ReplacementPools::freeze() {
  vocab.freeze();
  for (auto& pool : pos_pool) pool.freeze();
  for (auto& pool : chunk_pool) pool.freeze();
}

void add_to_pools(ReplacementPools& pools, const ChunkedSentence& sentence) {
  const auto& tokens = sentence.tagged.tokens;
  const auto& tags = sentence.tagged.tags;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    pools.vocab.add(tokens[i].surface);
    pools.pos_pool[tags[i].id()].add(tokens[i].surface);
  }
  for (const auto& c : sentence.chunks) {
    Phrase phrase;
    for (std::size_t i = c.begin; i < c.end; ++i) phrase.push_back(tokens[i].surface);
    pools.chunk_pool[static_cast<std::size_t>(c.label)].add(phrase);
  }
}

ReplacementPools build_pools(const ParallelCorpus& corpus, const TaggerModel& tagger) {
  if (corpus.pairs.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "cannot build pools from an empty corpus");
  }
  ReplacementPools pools;
  for (const auto& pair : corpus.pairs) {
    std::vector<Token> tokens;
    try {
      tokens = tokenize(pair.tgt);
    } catch (const Error&) {
      continue;
    }
    add_to_pools(pools, chunk(tag(tagger, std::move(tokens))));
  }
  pools.corpus_fingerprint = corpus_fingerprint(corpus);
  pools.tagger_fingerprint = tagger_fingerprint(tagger);
  pools.freeze();
  return pools;
}

std::string tagger_fingerprint(const TaggerModel& tagger) {
  std::ostringstream out;
  tagger.save(out);
  return sha256_hex(out.str());
}

void save_pools_cache(const ReplacementPools& pools, const std::filesystem::path& path) {
  json doc;
  doc["version"] = kCacheVersion;
  doc["corpus_fingerprint"] = pools.corpus_fingerprint;
  doc["tagger_fingerprint"] = pools.tagger_fingerprint;
  json pos = json::object();
  for (std::size_t t = 0; t < kTagCount; ++t) {
    if (pools.pos_pool[t].empty()) continue;
    json entries = json::array();
    for (const auto& [surface, count] : pools.pos_pool[t].counts()) {
      entries.push_back({surface, count});
    }
    pos[std::string(kPennTags[t])] = std::move(entries);
  }
  doc["pos"] = std::move(pos);
  json chunks = json::object();
  for (std::size_t l = 0; l < pools.chunk_pool.size(); ++l) {
    json entries = json::array();
    for (const auto& [phrase, count] : pools.chunk_pool[l].counts()) {
      entries.push_back({phrase, count});
    }
    chunks[std::string(chunk_label_name(static_cast<ChunkLabel>(l)))] = std::move(entries);
  }
  doc["chunks"] = std::move(chunks);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << doc.dump() << '\n';
}

std::optional<ReplacementPools> load_pools_cache(const std::filesystem::path& path,
                                                 const std::string& corpus_fp,
                                                 const std::string& tagger_fp) {
  if (!std::filesystem::is_regular_file(path)) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  try {
    const json doc = json::parse(in);
    if (doc.at("version") != kCacheVersion) return std::nullopt;
    if (doc.at("corpus_fingerprint") != corpus_fp ||
        doc.at("tagger_fingerprint") != tagger_fp) {
      return std::nullopt;
    }
    ReplacementPools pools;
    pools.corpus_fingerprint = corpus_fp;
    pools.tagger_fingerprint = tagger_fp;
    for (const auto& [tag_name, entries] : doc.at("pos").items()) {
      const auto t = PosTag::parse(tag_name);
      if (!t) throw Error(ErrorCode::kParseError, "pools cache: bad tag " + tag_name);
      for (const auto& entry : entries) {
        const auto surface = entry.at(0).get<std::string>();
        const auto count = entry.at(1).get<std::uint64_t>();
        pools.pos_pool[t->id()].add(surface, count);
        pools.vocab.add(surface, count);
      }
    }
    for (const auto& [label_name, entries] : doc.at("chunks").items()) {
      const auto label = parse_chunk_label(label_name);
      if (!label) throw Error(ErrorCode::kParseError, "pools cache: bad label " + label_name);
      for (const auto& entry : entries) {
        pools.chunk_pool[static_cast<std::size_t>(*label)].add(
            entry.at(0).get<Phrase>(), entry.at(1).get<std::uint64_t>());
      }
    }
    pools.freeze();
    return pools;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, "pools cache " + path.string() + ": " + e.what());
  }
}

}  // namespace apegen
