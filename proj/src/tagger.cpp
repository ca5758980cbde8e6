#include "apegen/tagger.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "apegen/error.hpp"
#include "apegen/rng.hpp"
#include "apegen/utf8.hpp"

namespace apegen {

namespace {

constexpr std::string_view kStart = "-START-";
constexpr std::string_view kStart2 = "-START2-";
constexpr std::uint64_t kShuffleSeed = 0x7A6;

const PosTag kDefaultTag = PosTag::of("NN");

// Byte offsets of code point starts, plus the end offset.
std::vector<std::size_t> code_point_offsets(std::string_view text) {
  std::vector<std::size_t> offsets;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) offsets.push_back(i);
  }
  offsets.push_back(text.size());
  return offsets;
}

// Forced tags for punctuation, tracking double-quote parity left to right.
std::vector<std::optional<PosTag>> forced_tags(std::span<const std::string> words) {
  std::vector<std::optional<PosTag>> forced(words.size());
  bool quote_open = false;
  for (std::size_t i = 0; i < words.size(); ++i) {
    forced[i] = punctuation_tag(words[i], quote_open);
    if (words[i] == "\"") quote_open = !quote_open;
  }
  return forced;
}

PosTag best_tag(const std::array<float, kTagCount>& scores) {
  PosTag best = kDefaultTag;
  float best_score = scores[best.id()];
  for (std::size_t c = 0; c < kTagCount; ++c) {
    if (scores[c] > best_score) {
      best_score = scores[c];
      best = PosTag(static_cast<std::uint8_t>(c));
    }
  }
  return best;
}

// Training-time parameter with lazy averaging.
struct Param {
  float weight = 0;
  double total = 0;
  std::uint64_t stamp = 0;
};

class PerceptronTrainer {
 public:
  std::array<float, kTagCount> score(const std::vector<std::string>& features) {
    std::array<float, kTagCount> scores{};
    for (const auto& f : features) {
      const auto it = ids_.find(f);
      if (it == ids_.end()) continue;
      for (const auto& [cls, p] : rows_[it->second]) scores[cls] += p.weight;
    }
    return scores;
  }

  void update(PosTag truth, PosTag guess,
              const std::vector<std::string>& features) {
    ++instances_;
    if (truth == guess) return;
    for (const auto& f : features) {
      const std::uint32_t id = intern(f);
      bump(id, truth.id(), 1.0f);
      bump(id, guess.id(), -1.0f);
    }
  }

  std::unordered_map<std::string, TaggerModel::WeightRow> averaged() const {
    std::unordered_map<std::string, TaggerModel::WeightRow> out;
    if (instances_ == 0) return out;
    for (const auto& [name, id] : ids_) {
      TaggerModel::WeightRow row;
      for (const auto& [cls, p] : rows_[id]) {
        const double total =
            p.total + static_cast<double>(instances_ - p.stamp) * p.weight;
        const auto avg = static_cast<float>(total / static_cast<double>(instances_));
        if (avg != 0.0f) row.emplace_back(cls, avg);
      }
      if (!row.empty()) {
        std::sort(row.begin(), row.end());
        out.emplace(name, std::move(row));
      }
    }
    return out;
  }

 private:
  std::uint32_t intern(const std::string& f) {
    const auto [it, inserted] =
        ids_.emplace(f, static_cast<std::uint32_t>(rows_.size()));
    if (inserted) rows_.emplace_back();
    return it->second;
  }

  void bump(std::uint32_t id, std::uint8_t cls, float delta) {
    auto& row = rows_[id];
    auto it = std::find_if(row.begin(), row.end(),
                           [cls](const auto& e) { return e.first == cls; });
    if (it == row.end()) {
      row.emplace_back(cls, Param{});
      it = row.end() - 1;
    }
    Param& p = it->second;
    p.total += static_cast<double>(instances_ - p.stamp) * p.weight;
    p.stamp = instances_;
    p.weight += delta;
  }

  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::vector<std::pair<std::uint8_t, Param>>> rows_;
  std::uint64_t instances_ = 0;
};

}  // namespace

std::vector<std::string> tagger_features(std::span<const std::string> words,
                                         std::size_t i, std::string_view prev,
                                         std::string_view prev2) {
  const std::string& word = words[i];
  const std::string lower = utf8::to_lower(word);
  std::vector<std::string> f;
  f.reserve(18);
  f.emplace_back("bias");
  f.push_back("w " + lower);

  const auto offsets = code_point_offsets(lower);
  const std::size_t n_cp = offsets.size() - 1;
  for (std::size_t k = 1; k <= 3 && k <= n_cp; ++k) {
    f.push_back("p" + std::to_string(k) + " " + lower.substr(0, offsets[k]));
    f.push_back("s" + std::to_string(k) + " " +
                lower.substr(offsets[n_cp - k]));
  }
  f.push_back("w-1 " + (i > 0 ? utf8::to_lower(words[i - 1]) : std::string(kStart)));
  // Gold sentences nearly always end in punctuation, so an unpunctuated end
  // is read as a full stop rather than as a rarely trained end marker.
  f.push_back("w+1 " + (i + 1 < words.size() ? utf8::to_lower(words[i + 1])
                                             : std::string(".")));
  f.push_back("t-1 " + std::string(prev));
  f.push_back("t-2 " + std::string(prev2));
  f.push_back("t-2t-1 " + std::string(prev2) + " " + std::string(prev));
  f.push_back("t-1w " + std::string(prev) + " " + lower);

  if (!word.empty() && word[0] >= 'A' && word[0] <= 'Z') f.emplace_back("cap");
  if (!word.empty() && std::all_of(word.begin(), word.end(),
                                   [](char c) { return c >= '0' && c <= '9'; })) {
    f.emplace_back("digits");
  }
  if (word.find('-') != std::string::npos) f.emplace_back("hyphen");
  return f;
}

std::array<float, kTagCount> TaggerModel::score(
    const std::vector<std::string>& features) const {
  std::array<float, kTagCount> scores{};
  for (const auto& f : features) {
    const auto it = weights_.find(f);
    if (it == weights_.end()) continue;
    for (const auto& [cls, w] : it->second) scores[cls] += w;
  }
  return scores;
}

std::vector<PosTag> TaggerModel::predict(std::span<const std::string> words) const {
  std::vector<PosTag> tags;
  tags.reserve(words.size());
  const auto forced = forced_tags(words);
  std::string_view prev = kStart;
  std::string_view prev2 = kStart2;
  for (std::size_t i = 0; i < words.size(); ++i) {
    PosTag guess = kDefaultTag;
    if (forced[i]) {
      guess = *forced[i];
    } else if (auto it = tag_dictionary_.find(words[i]); it != tag_dictionary_.end()) {
      guess = it->second;
    } else if (!weights_.empty()) {
      guess = best_tag(score(tagger_features(words, i, prev, prev2)));
    }
    tags.push_back(guess);
    prev2 = prev;
    prev = tags.back().name();
  }
  return tags;
}

TaggerModel train_tagger(std::span<const GoldSentence> corpus, int epochs) {
  const std::size_t token_count = std::accumulate(
      corpus.begin(), corpus.end(), std::size_t{0},
      [](std::size_t acc, const GoldSentence& s) { return acc + s.words.size(); });
  if (token_count == 0) {
    throw Error(ErrorCode::kEmptyTrainingData, "training corpus has no tokens");
  }
  if (epochs < 0) {
    throw Error(ErrorCode::kInvalidArgument, "epochs must be non-negative");
  }

  TaggerModel model;
  std::map<std::string, std::map<std::uint8_t, std::size_t>> counts;
  for (const auto& sentence : corpus) {
    for (std::size_t i = 0; i < sentence.words.size(); ++i) {
      ++counts[sentence.words[i]][sentence.tags[i].id()];
    }
  }
  for (const auto& [word, by_tag] : counts) {
    if (by_tag.size() != 1) continue;
    const auto& [tag_id, n] = *by_tag.begin();
    if (n >= TaggerModel::kDictionaryMinCount) model.tag_dictionary_[word] = PosTag(tag_id);
  }

  PerceptronTrainer trainer;
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  RandomStream shuffle_rng(kShuffleSeed);
  for (int epoch = 0; epoch < epochs; ++epoch) {
    for (std::size_t s : order) {
      const GoldSentence& sentence = corpus[s];
      const auto forced = forced_tags(sentence.words);
      std::string_view prev = kStart;
      std::string_view prev2 = kStart2;
      for (std::size_t i = 0; i < sentence.words.size(); ++i) {
        PosTag guess;
        if (forced[i]) {
          guess = *forced[i];
        } else if (auto it = model.tag_dictionary_.find(sentence.words[i]);
                   it != model.tag_dictionary_.end()) {
          guess = it->second;
        } else {
          const auto features = tagger_features(sentence.words, i, prev, prev2);
          guess = best_tag(trainer.score(features));
          trainer.update(sentence.tags[i], guess, features);
        }
        prev2 = prev;
        prev = guess.name();
      }
    }
    deterministic_shuffle(order.begin(), order.end(), shuffle_rng);
  }
  model.weights_ = trainer.averaged();
  return model;
}

TaggedSentence tag(const TaggerModel& model, std::vector<Token> tokens) {
  std::vector<std::string> words;
  words.reserve(tokens.size());
  for (const auto& t : tokens) words.push_back(t.surface);
  TaggedSentence out;
  out.tags = model.predict(words);
  out.tokens = std::move(tokens);
  return out;
}

double tagging_accuracy(const TaggerModel& model,
                        std::span<const GoldSentence> gold) {
  std::size_t total = 0;
  std::size_t correct = 0;
  for (const auto& sentence : gold) {
    const auto predicted = model.predict(sentence.words);
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      ++total;
      if (predicted[i] == sentence.tags[i]) ++correct;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

std::vector<GoldSentence> read_gold(std::istream& in, const std::string& origin) {
  std::vector<GoldSentence> sentences;
  GoldSentence current;
  std::string line;
  std::size_t line_no = 0;
  auto flush = [&] {
    if (!current.words.empty()) sentences.push_back(std::move(current));
    current = GoldSentence{};
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error(ErrorCode::kParseError, origin + ":" + std::to_string(line_no) +
                                              ": expected token<TAB>tag");
    }
    const std::string_view tag_name = std::string_view(line).substr(tab + 1);
    const auto tag = PosTag::parse(tag_name);
    if (!tag) {
      throw Error(ErrorCode::kUnknownTagInGold,
                  origin + ":" + std::to_string(line_no) + ": unknown tag '" +
                      std::string(tag_name) + "'");
    }
    current.words.push_back(line.substr(0, tab));
    current.tags.push_back(*tag);
  }
  flush();
  return sentences;
}

std::vector<GoldSentence> read_gold(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileNotFound, "file not found: " + path.string());
  return read_gold(in, path.string());
}

// Text format, sorted for byte-stable output:
//   apegen-tagger-1
//   dict <n>
//   <word>\t<tag>            (n lines)
//   weights <m>
//   <feature>\t<tag>=<w> ... (m lines)
void TaggerModel::save(std::ostream& out) const {
  out << version_ << '\n';
  out << "dict " << tag_dictionary_.size() << '\n';
  for (const auto& [word, t] : tag_dictionary_) out << word << '\t' << t.name() << '\n';
  std::vector<const std::pair<const std::string, WeightRow>*> rows;
  rows.reserve(weights_.size());
  for (const auto& entry : weights_) rows.push_back(&entry);
  std::sort(rows.begin(), rows.end(),
            [](const auto* a, const auto* b) { return a->first < b->first; });
  out << "weights " << rows.size() << '\n';
  char buf[32];
  for (const auto* entry : rows) {
    out << entry->first;
    for (const auto& [cls, w] : entry->second) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), w);
      out << '\t' << kPennTags[cls] << '=' << std::string_view(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

void TaggerModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  save(out);
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

TaggerModel TaggerModel::load(std::istream& in) {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kParseError, "tagger model: " + what);
  };
  TaggerModel model;
  std::string line;
  if (!std::getline(in, line) || line != kFormatVersion) fail("bad header");
  model.version_ = line;

  auto read_count = [&](std::string_view keyword) {
    if (!std::getline(in, line) || !line.starts_with(keyword)) {
      fail("expected '" + std::string(keyword) + "'");
    }
    std::size_t n = 0;
    const char* first = line.data() + keyword.size() + 1;
    const auto res = std::from_chars(first, line.data() + line.size(), n);
    if (res.ec != std::errc{}) fail("bad count");
    return n;
  };

  const std::size_t n_dict = read_count("dict");
  for (std::size_t i = 0; i < n_dict; ++i) {
    if (!std::getline(in, line)) fail("truncated dictionary");
    const std::size_t tab = line.rfind('\t');
    if (tab == std::string::npos) fail("bad dictionary line");
    const auto t = PosTag::parse(std::string_view(line).substr(tab + 1));
    if (!t) fail("bad dictionary tag");
    model.tag_dictionary_[line.substr(0, tab)] = *t;
  }

  const std::size_t n_weights = read_count("weights");
  model.weights_.reserve(n_weights);
  for (std::size_t i = 0; i < n_weights; ++i) {
    if (!std::getline(in, line)) fail("truncated weights");
    std::size_t pos = line.find('\t');
    if (pos == std::string::npos) fail("bad weight line");
    std::string feature = line.substr(0, pos);
    WeightRow row;
    while (pos != std::string::npos) {
      const std::size_t next = line.find('\t', pos + 1);
      const std::string_view cell = std::string_view(line).substr(
          pos + 1, next == std::string::npos ? std::string::npos : next - pos - 1);
      const std::size_t eq = cell.rfind('=');
      if (eq == std::string_view::npos) fail("bad weight cell");
      const auto t = PosTag::parse(cell.substr(0, eq));
      if (!t) fail("bad weight tag");
      float w = 0;
      const auto res = std::from_chars(cell.data() + eq + 1, cell.data() + cell.size(), w);
      if (res.ec != std::errc{}) fail("bad weight value");
      row.emplace_back(t->id(), w);
      pos = next;
    }
    model.weights_.emplace(std::move(feature), std::move(row));
  }
  return model;
}

TaggerModel TaggerModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileNotFound, "file not found: " + path.string());
  return load(in);
}

}  // namespace apegen
