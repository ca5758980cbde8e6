#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace apegen {

// A token together with its byte span [begin, end) in the source line.
struct Token {
  std::string surface;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

// Penn Treebank style segmentation. Splits on whitespace, detaches clause and
// sentence punctuation, brackets and double quotes, and splits the clitics
// n't 's 're 've 'll 'd 'm. Never rewrites characters: line.substr(begin,
// end - begin) == surface for every token. Throws EmptyInput when the line has
// no non-whitespace characters.
std::vector<Token> tokenize(std::string_view line);

// Surfaces only.
std::vector<std::string> tokenize_words(std::string_view line);

// Joins with single spaces, then attaches closing punctuation and clitics to
// the preceding token and opening brackets to the following one. Double
// quotes alternate between opening and closing.
std::string detokenize(std::span<const std::string> tokens);

// True for tokens made only of punctuation characters.
bool is_punctuation(std::string_view token);

// True for n't 's 're 've 'll 'd 'm (any case) and the bare possessive '.
bool is_clitic(std::string_view token);

}  // namespace apegen
