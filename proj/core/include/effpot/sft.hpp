#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "effpot/error.hpp"

namespace effpot {

/// A letter of the alphabet, valued in 1..r.
using Letter = int;

/// An allowed finite word: consecutive letters satisfy M(w[j], w[j+1]) = 1.
/// Words index cylinders of both the subshift and its dual; for the dual
/// ("past") side the word is stored junction-first, so one table serves both.
using Word = std::vector<Letter>;

std::string word_to_string(const Word& w);
Word word_from_string(const std::string& s);

/// A subshift of finite type over {1..r} with a symmetric irreducible
/// 0/1 transition matrix and metric base Lambda in (0,1).
struct SubshiftSpec {
  int r = 0;
  std::vector<std::vector<int>> m;  // r x r, entries in {0,1}
  double lambda = 0.5;

  bool allowed(Letter a, Letter b) const { return m[a - 1][b - 1] == 1; }
};

/// Validates and returns the subshift. Throws NonSymmetric, Reducible or
/// BadLambda; a rejected model yields no partial result.
SubshiftSpec build_sft(int r, const std::vector<std::vector<int>>& m,
                       double lambda);

/// All allowed words of a fixed depth, lexicographically sorted.
struct WordTable {
  int depth = 0;
  std::vector<Word> words;

  std::size_t size() const { return words.size(); }

  /// Ordinal of a word; throws ValidationError if absent.
  std::size_t index_of(const Word& w) const;

  /// Ordinal of the depth-k prefix of words[i] inside the depth-k table.
  std::size_t prefix_index(std::size_t i, const WordTable& shallower) const;
};

inline constexpr std::size_t kDefaultWordCap = 1000000;

/// Exactly the allowed depth-k words. Throws DepthTooLarge past the cap.
WordTable enumerate_words(const SubshiftSpec& spec, int k,
                          std::size_t word_cap = kDefaultWordCap);

/// Shift-successor graph on depth-k words: w -> w' when w' drops the first
/// letter of w and appends an allowed one. At depth 1 this is M itself.
struct BlockGraph {
  int depth = 0;
  WordTable nodes;
  std::vector<std::vector<std::size_t>> succ;  // ascending target ordinals
  std::vector<std::vector<std::size_t>> pred;  // ascending source ordinals

  std::size_t edge_count() const;
};

BlockGraph block_graph(const SubshiftSpec& spec, int k,
                       std::size_t word_cap = kDefaultWordCap);

/// Cylinder distance between equal-depth words: Lambda^j at the first
/// disagreement position j, Lambda^depth when identical.
double word_distance(const Word& w, const Word& v, double lambda);

}  // namespace effpot
