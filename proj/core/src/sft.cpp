#include "effpot/sft.hpp"

#include <algorithm>
#include <cmath>

namespace effpot {

std::string word_to_string(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (Letter a : w) s += static_cast<char>('0' + a);
  return s;
}

Word word_from_string(const std::string& s) {
  Word w;
  w.reserve(s.size());
  for (char c : s) {
    if (c < '1' || c > '9')
      throw Error(ErrorKind::ParseError,
                  "word '" + s + "' contains non-digit letter");
    w.push_back(c - '0');
  }
  return w;
}

namespace {

// Irreducibility of a 0/1 matrix via boolean closure of I + M.
bool irreducible(int r, const std::vector<std::vector<int>>& m) {
  std::vector<std::vector<char>> reach(r, std::vector<char>(r, 0));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) reach[i][j] = (i == j) || m[i][j] != 0;
  for (int k = 0; k < r; ++k)
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = 1;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (!reach[i][j]) return false;
  return true;
}

}  // namespace

SubshiftSpec build_sft(int r, const std::vector<std::vector<int>>& m,
                       double lambda) {
  if (r < 2)
    throw Error(ErrorKind::ValidationError, "alphabet size must be >= 2");
  if (m.size() != static_cast<std::size_t>(r))
    throw Error(ErrorKind::ValidationError, "M must be r x r");
  for (const auto& row : m) {
    if (row.size() != static_cast<std::size_t>(r))
      throw Error(ErrorKind::ValidationError, "M must be r x r");
    for (int e : row)
      if (e != 0 && e != 1)
        throw Error(ErrorKind::ValidationError, "M entries must be 0 or 1");
  }
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < i; ++j)
      if (m[i][j] != m[j][i])
        throw Error(ErrorKind::NonSymmetric, "M differs from its transpose at (" +
                                                 std::to_string(i + 1) + "," +
                                                 std::to_string(j + 1) + ")");
  if (!irreducible(r, m))
    throw Error(ErrorKind::Reducible, "some symbol pair is never connected");
  if (!(lambda > 0.0 && lambda < 1.0) || !std::isfinite(lambda))
    throw Error(ErrorKind::BadLambda, "Lambda must lie strictly in (0,1)");
  return SubshiftSpec{r, m, lambda};
}

std::size_t WordTable::index_of(const Word& w) const {
  auto it = std::lower_bound(words.begin(), words.end(), w);
  if (it == words.end() || *it != w)
    throw Error(ErrorKind::ValidationError,
                "word '" + word_to_string(w) + "' is not in the depth-" +
                    std::to_string(depth) + " table");
  return static_cast<std::size_t>(it - words.begin());
}

std::size_t WordTable::prefix_index(std::size_t i,
                                    const WordTable& shallower) const {
  if (shallower.depth > depth)
    throw Error(ErrorKind::DepthMismatch, "prefix table deeper than word table");
  const Word& w = words[i];
  Word p(w.begin(), w.begin() + shallower.depth);
  return shallower.index_of(p);
}

WordTable enumerate_words(const SubshiftSpec& spec, int k,
                          std::size_t word_cap) {
  if (k < 1) throw Error(ErrorKind::ValidationError, "depth must be >= 1");
  // Lexicographic growth keeps the table sorted at every stage.
  std::vector<Word> cur;
  for (int a = 1; a <= spec.r; ++a) cur.push_back(Word{a});
  for (int d = 2; d <= k; ++d) {
    std::vector<Word> next;
    for (const Word& w : cur)
      for (int a = 1; a <= spec.r; ++a)
        if (spec.allowed(w.back(), a)) {
          Word e = w;
          e.push_back(a);
          next.push_back(std::move(e));
        }
    if (next.size() > word_cap)
      throw Error(ErrorKind::DepthTooLarge,
                  "depth " + std::to_string(k) + " exceeds the word cap of " +
                      std::to_string(word_cap) + " words");
    cur = std::move(next);
  }
  return WordTable{k, std::move(cur)};
}

std::size_t BlockGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& s : succ) n += s.size();
  return n;
}

BlockGraph block_graph(const SubshiftSpec& spec, int k, std::size_t word_cap) {
  BlockGraph g;
  g.depth = k;
  g.nodes = enumerate_words(spec, k, word_cap);
  const std::size_t n = g.nodes.size();
  g.succ.assign(n, {});
  g.pred.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    const Word& w = g.nodes.words[i];
    Word s(w.begin() + 1, w.end());
    for (int a = 1; a <= spec.r; ++a)
      if (spec.allowed(w.back(), a)) {
        s.push_back(a);
        g.succ[i].push_back(g.nodes.index_of(s));
        s.pop_back();
      }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : g.succ[i]) g.pred[j].push_back(i);
  return g;
}

double word_distance(const Word& w, const Word& v, double lambda) {
  if (w.size() != v.size())
    throw Error(ErrorKind::DepthMismatch, "word depths differ");
  for (std::size_t j = 0; j < w.size(); ++j)
    if (w[j] != v[j]) return std::pow(lambda, static_cast<double>(j));
  return std::pow(lambda, static_cast<double>(w.size()));
}

}  // namespace effpot
