#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "apegen/corpus.hpp"
#include "apegen/pools.hpp"
#include "apegen/tagger.hpp"
#include "apegen/wordnet.hpp"

namespace apegen::test {

inline std::filesystem::path data_dir() { return APEGEN_TEST_DATA_DIR; }
inline std::filesystem::path wordnet_dir() { return APEGEN_TEST_WORDNET_DIR; }
inline std::filesystem::path tagger_model_path() { return APEGEN_TEST_TAGGER_MODEL; }
inline std::filesystem::path demo_corpus_path() { return data_dir() / "demo" / "demo.tsv"; }
inline std::filesystem::path gold_path() { return data_dir() / "gold" / "brown_penn.conll"; }
inline std::filesystem::path sample100_path() { return data_dir() / "gold" / "sample100.conll"; }

// Fresh directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("apegen-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

inline const TaggerModel& bundled_tagger() {
  static const TaggerModel model = TaggerModel::load(tagger_model_path());
  return model;
}

inline const WordnetDb& bundled_wordnet() {
  static const WordnetDb db = load_wordnet(wordnet_dir());
  return db;
}

inline const ParallelCorpus& demo_corpus() {
  static const ParallelCorpus corpus = load_tsv(demo_corpus_path());
  return corpus;
}

inline const ReplacementPools& demo_pools() {
  static const ReplacementPools pools = build_pools(demo_corpus(), bundled_tagger());
  return pools;
}

}  // namespace apegen::test
