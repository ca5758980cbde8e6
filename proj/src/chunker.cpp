#include "apegen/chunker.hpp"

#include <algorithm>
#include <array>
#include <initializer_list>

namespace apegen {

namespace {

bool tag_in(PosTag tag, std::initializer_list<std::string_view> names) {
  return std::find(names.begin(), names.end(), tag.name()) != names.end();
}

bool is_adj(PosTag t) { return tag_in(t, {"JJ", "JJR", "JJS"}); }
bool is_noun(PosTag t) { return tag_in(t, {"NN", "NNS", "NNP", "NNPS"}); }
bool is_verb(PosTag t) {
  return tag_in(t, {"VB", "VBD", "VBG", "VBN", "VBP", "VBZ"});
}
bool is_adv(PosTag t) { return tag_in(t, {"RB", "RBR", "RBS"}); }

using Tags = std::span<const PosTag>;

std::size_t skip_while(Tags tags, std::size_t i, bool (*pred)(PosTag)) {
  while (i < tags.size() && pred(tags[i])) ++i;
  return i;
}

// Each matcher returns the match length at `start` (0 = no match).
std::size_t match_np(Tags tags, std::size_t start) {
  if (tags[start].name() == "PRP") return 1;
  std::size_t i = start;
  if (tag_in(tags[i], {"DT", "PRP$"})) ++i;
  i = skip_while(tags, i, is_adj);
  const std::size_t nouns_end = skip_while(tags, i, is_noun);
  if (nouns_end == i) return 0;
  return nouns_end - start;
}

std::size_t match_vp(Tags tags, std::size_t start) {
  std::size_t i = start;
  if (tags[i].name() == "MD") ++i;
  if (i < tags.size() && tags[i].name() == "RB") ++i;
  const std::size_t verbs_end = skip_while(tags, i, is_verb);
  if (verbs_end == i) return 0;
  return verbs_end - start;
}

std::size_t match_pp(Tags tags, std::size_t start) {
  return tags[start].name() == "IN" ? 1 : 0;
}

std::size_t match_adjp(Tags tags, std::size_t start) {
  std::size_t i = start;
  if (tags[i].name() == "RB") ++i;
  const std::size_t adj_end = skip_while(tags, i, is_adj);
  if (adj_end == i) return 0;
  return adj_end - start;
}

std::size_t match_advp(Tags tags, std::size_t start) {
  return skip_while(tags, start, is_adv) - start;
}

struct Rule {
  ChunkLabel label;
  std::size_t (*match)(Tags, std::size_t);
};

constexpr std::array<Rule, 5> kGrammar = {{
    {ChunkLabel::kNP, match_np},
    {ChunkLabel::kVP, match_vp},
    {ChunkLabel::kPP, match_pp},
    {ChunkLabel::kADJP, match_adjp},
    {ChunkLabel::kADVP, match_advp},
}};

constexpr std::array<std::string_view, 5> kLabelNames = {"NP", "VP", "PP",
                                                         "ADJP", "ADVP"};

}  // namespace

std::string_view chunk_label_name(ChunkLabel label) {
  return kLabelNames[static_cast<std::size_t>(label)];
}

std::optional<ChunkLabel> parse_chunk_label(std::string_view name) {
  const auto it = std::find(kLabelNames.begin(), kLabelNames.end(), name);
  if (it == kLabelNames.end()) return std::nullopt;
  return static_cast<ChunkLabel>(it - kLabelNames.begin());
}

std::string BioLabel::str() const {
  switch (kind) {
    case Kind::kOutside: return "O";
    case Kind::kBegin: return "B-" + std::string(chunk_label_name(label));
    case Kind::kInside: return "I-" + std::string(chunk_label_name(label));
  }
  return "O";
}

std::optional<BioLabel> BioLabel::parse(std::string_view text) {
  if (text == "O") return outside();
  if (text.size() < 3 || text[1] != '-') return std::nullopt;
  const auto label = parse_chunk_label(text.substr(2));
  if (!label) return std::nullopt;
  if (text[0] == 'B') return begin(*label);
  if (text[0] == 'I') return inside(*label);
  return std::nullopt;
}

std::vector<Chunk> chunk_tags(std::span<const PosTag> tags) {
  std::vector<Chunk> chunks;
  std::size_t i = 0;
  while (i < tags.size()) {
    std::size_t best_len = 0;
    ChunkLabel best_label = ChunkLabel::kNP;
    for (const Rule& rule : kGrammar) {
      const std::size_t len = rule.match(tags, i);
      if (len > best_len) {
        best_len = len;
        best_label = rule.label;
      }
    }
    if (best_len == 0) {
      ++i;
      continue;
    }
    chunks.push_back({best_label, i, i + best_len});
    i += best_len;
  }
  return chunks;
}

ChunkedSentence chunk(TaggedSentence sentence) {
  ChunkedSentence out;
  out.chunks = chunk_tags(sentence.tags);
  out.bio = chunks_to_bio(out.chunks, sentence.tags.size());
  out.tagged = std::move(sentence);
  return out;
}

bool bio_is_wellformed(std::span<const BioLabel> bio) {
  const BioLabel* prev = nullptr;
  for (const auto& label : bio) {
    if (label.kind == BioLabel::Kind::kInside) {
      if (prev == nullptr || prev->kind == BioLabel::Kind::kOutside ||
          prev->label != label.label) {
        return false;
      }
    }
    prev = &label;
  }
  return true;
}

std::vector<BioLabel> chunks_to_bio(std::span<const Chunk> chunks,
                                    std::size_t length) {
  std::vector<BioLabel> bio(length, BioLabel::outside());
  for (const auto& c : chunks) {
    bio[c.begin] = BioLabel::begin(c.label);
    for (std::size_t i = c.begin + 1; i < c.end; ++i) bio[i] = BioLabel::inside(c.label);
  }
  return bio;
}

std::vector<Chunk> bio_to_chunks(std::span<const BioLabel> bio) {
  std::vector<Chunk> chunks;
  for (std::size_t i = 0; i < bio.size(); ++i) {
    switch (bio[i].kind) {
      case BioLabel::Kind::kBegin:
        chunks.push_back({bio[i].label, i, i + 1});
        break;
      case BioLabel::Kind::kInside:
        chunks.back().end = i + 1;
        break;
      case BioLabel::Kind::kOutside:
        break;
    }
  }
  return chunks;
}

}  // namespace apegen
