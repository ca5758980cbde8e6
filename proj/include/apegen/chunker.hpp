#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "apegen/tagger.hpp"

namespace apegen {

enum class ChunkLabel { kNP, kVP, kPP, kADJP, kADVP };

std::string_view chunk_label_name(ChunkLabel label);
std::optional<ChunkLabel> parse_chunk_label(std::string_view name);

// Contiguous phrase over tokens [begin, end).
struct Chunk {
  ChunkLabel label = ChunkLabel::kNP;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Chunk&) const = default;
};

// B-X / I-X / O.
struct BioLabel {
  enum class Kind { kBegin, kInside, kOutside };
  Kind kind = Kind::kOutside;
  ChunkLabel label = ChunkLabel::kNP;  // ignored for kOutside

  static BioLabel outside() { return {}; }
  static BioLabel begin(ChunkLabel l) { return {Kind::kBegin, l}; }
  static BioLabel inside(ChunkLabel l) { return {Kind::kInside, l}; }

  // "B-NP", "I-VP", "O".
  std::string str() const;
  static std::optional<BioLabel> parse(std::string_view text);

  bool operator==(const BioLabel& other) const {
    return kind == other.kind && (kind == Kind::kOutside || label == other.label);
  }
};

struct ChunkedSentence {
  TaggedSentence tagged;
  std::vector<Chunk> chunks;
  std::vector<BioLabel> bio;
};

// Version tag of the chunk grammar below; bump whenever a rule changes.
inline constexpr std::string_view kChunkGrammarVersion = "apegen-chunk-grammar-1";

// Longest match, left to right, rules tried in the order
//   NP   (DT|PRP$)? (JJ|JJR|JJS)* (NN|NNS|NNP|NNPS)+  |  PRP
//   VP   MD? RB? (VB|VBD|VBG|VBN|VBP|VBZ)+
//   PP   IN
//   ADJP RB? (JJ|JJR|JJS)+
//   ADVP (RB|RBR|RBS)+
// At each position the longest match over all rules wins; ties go to the
// earlier rule. Tokens not covered by any match are O.
ChunkedSentence chunk(TaggedSentence sentence);

// Chunk spans from tags only; the core of chunk().
std::vector<Chunk> chunk_tags(std::span<const PosTag> tags);

bool bio_is_wellformed(std::span<const BioLabel> bio);

std::vector<BioLabel> chunks_to_bio(std::span<const Chunk> chunks,
                                    std::size_t length);
// Requires well-formed input.
std::vector<Chunk> bio_to_chunks(std::span<const BioLabel> bio);

}  // namespace apegen
