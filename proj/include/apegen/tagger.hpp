#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "apegen/tagset.hpp"
#include "apegen/tokenizer.hpp"

namespace apegen {

struct TaggedSentence {
  std::vector<Token> tokens;
  std::vector<PosTag> tags;

  bool operator==(const TaggedSentence&) const = default;
};

// One gold-annotated sentence for training or evaluation.
struct GoldSentence {
  std::vector<std::string> words;
  std::vector<PosTag> tags;
};

// Sparse weights of an averaged perceptron plus a dictionary of words that
// were always observed with one tag. Immutable once trained or loaded.
class TaggerModel {
 public:
  static constexpr std::string_view kFormatVersion = "apegen-tagger-1";
  // A word enters the dictionary after this many observations, all with the
  // same tag.
  static constexpr std::size_t kDictionaryMinCount = 20;

  using WeightRow = std::vector<std::pair<std::uint8_t, float>>;

  TaggerModel() = default;

  // Most likely tag sequence for the given words.
  std::vector<PosTag> predict(std::span<const std::string> words) const;

  bool empty() const { return weights_.empty(); }
  std::size_t feature_count() const { return weights_.size(); }
  const std::map<std::string, PosTag>& tag_dictionary() const {
    return tag_dictionary_;
  }
  const std::string& version() const { return version_; }

  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  static TaggerModel load(std::istream& in);
  static TaggerModel load(const std::filesystem::path& path);

  bool operator==(const TaggerModel&) const = default;

 private:
  friend TaggerModel train_tagger(std::span<const GoldSentence>, int);

  std::array<float, kTagCount> score(
      const std::vector<std::string>& features) const;

  std::unordered_map<std::string, WeightRow> weights_;
  std::map<std::string, PosTag> tag_dictionary_;
  std::string version_{kFormatVersion};
};

// Averaged perceptron training. Throws EmptyTrainingData when `corpus` has no
// tokens. `epochs` == 0 yields a dictionary-only model.
TaggerModel train_tagger(std::span<const GoldSentence> corpus, int epochs);

// One tag per token; pure punctuation receives its literal tag.
TaggedSentence tag(const TaggerModel& model, std::vector<Token> tokens);

// Reads `token<TAB>tag` lines with blank lines between sentences. Tags outside
// the closed tagset raise UnknownTagInGold naming the line.
std::vector<GoldSentence> read_gold(std::istream& in, const std::string& origin);
std::vector<GoldSentence> read_gold(const std::filesystem::path& path);

// Fraction of tokens whose predicted tag equals the gold tag.
double tagging_accuracy(const TaggerModel& model,
                        std::span<const GoldSentence> gold);

// Feature strings for position `i` given the two preceding predicted tags.
// Exposed for tests.
std::vector<std::string> tagger_features(std::span<const std::string> words,
                                         std::size_t i, std::string_view prev,
                                         std::string_view prev2);

}  // namespace apegen
