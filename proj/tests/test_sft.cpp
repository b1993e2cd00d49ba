#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "effpot/sft.hpp"

using namespace effpot;

namespace {

SubshiftSpec full2() { return build_sft(2, {{1, 1}, {1, 1}}, 0.5); }
SubshiftSpec golden() { return build_sft(2, {{1, 1}, {1, 0}}, 0.5); }

// Independent oracle: all r^k letter tuples, filtered by adjacency.
std::vector<Word> brute_words(const SubshiftSpec& spec, int k) {
  std::vector<Word> out;
  std::vector<Word> frontier{Word{}};
  for (int j = 0; j < k; ++j) {
    std::vector<Word> next;
    for (const Word& w : frontier)
      for (Letter a = 1; a <= spec.r; ++a) {
        if (!w.empty() && !spec.allowed(w.back(), a)) continue;
        Word e = w;
        e.push_back(a);
        next.push_back(std::move(e));
      }
    frontier = std::move(next);
  }
  std::sort(frontier.begin(), frontier.end());
  return frontier;
}

}  // namespace

TEST_CASE("build_sft accepts the standard models") {
  CHECK(full2().r == 2);
  CHECK(golden().allowed(1, 2));
  CHECK(!golden().allowed(2, 2));
}

TEST_CASE("build_sft rejects invalid models") {
  CHECK_THROWS_AS(build_sft(2, {{1, 1}, {0, 1}}, 0.5), Error);
  CHECK(Error(ErrorKind::NonSymmetric, "x").kind() == ErrorKind::NonSymmetric);
  try {
    build_sft(2, {{1, 1}, {0, 1}}, 0.5);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonSymmetric);
  }
  try {
    build_sft(2, {{1, 0}, {0, 1}}, 0.5);  // two isolated letters
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Reducible);
  }
  for (double bad : {0.0, 1.0, -0.5, 2.0}) {
    try {
      build_sft(2, {{1, 1}, {1, 1}}, bad);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::BadLambda);
    }
  }
}

TEST_CASE("word string round trip") {
  Word w{1, 2, 1};
  CHECK(word_to_string(w) == "121");
  CHECK(word_from_string("121") == w);
}

TEST_CASE("enumerate_words matches brute force") {
  CHECK(enumerate_words(golden(), 2).size() == 3);  // {11,12,21}
  CHECK(enumerate_words(golden(), 3).size() == 5);
  for (int k = 1; k <= 6; ++k) {
    WordTable t = enumerate_words(golden(), k);
    CHECK(t.words == brute_words(golden(), k));
    WordTable f = enumerate_words(full2(), k);
    CHECK(f.words == brute_words(full2(), k));
  }
}

TEST_CASE("word table lookups") {
  WordTable t = enumerate_words(golden(), 2);
  CHECK(t.index_of(word_from_string("12")) == 1);
  CHECK_THROWS_AS(t.index_of(word_from_string("22")), Error);
  WordTable one = enumerate_words(golden(), 1);
  WordTable three = enumerate_words(golden(), 3);
  for (std::size_t i = 0; i < three.size(); ++i) {
    CHECK(three.words[i][0] == one.words[three.prefix_index(i, one)][0]);
    Word p(three.words[i].begin(), three.words[i].begin() + 2);
    CHECK(t.words[three.prefix_index(i, t)] == p);
  }
}

TEST_CASE("word cap enforced") {
  try {
    enumerate_words(full2(), 10, 100);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DepthTooLarge);
  }
}

TEST_CASE("block graph edges are exactly the shift overlaps") {
  CHECK(block_graph(golden(), 1).edge_count() == 3);
  CHECK(block_graph(golden(), 2).edge_count() == 5);
  for (int k = 1; k <= 4; ++k) {
    BlockGraph g = block_graph(golden(), k);
    for (std::size_t v = 0; v < g.nodes.size(); ++v)
      for (std::size_t w = 0; w < g.nodes.size(); ++w) {
        const Word& a = g.nodes.words[v];
        const Word& b = g.nodes.words[w];
        bool overlap =
            std::equal(a.begin() + 1, a.end(), b.begin()) &&
            golden().allowed(a.back(), b.back());
        bool edge = std::binary_search(g.succ[v].begin(), g.succ[v].end(), w);
        CHECK(edge == overlap);
        bool back =
            std::binary_search(g.pred[w].begin(), g.pred[w].end(), v);
        CHECK(back == edge);
      }
  }
}

TEST_CASE("word distance is an ultrametric") {
  CHECK(word_distance(word_from_string("12"), word_from_string("21"), 0.5) ==
        doctest::Approx(1.0));
  CHECK(word_distance(word_from_string("11"), word_from_string("12"), 0.5) ==
        doctest::Approx(0.5));
  WordTable t = enumerate_words(golden(), 3);
  for (const Word& a : t.words)
    for (const Word& b : t.words) {
      double d = word_distance(a, b, 0.5);
      CHECK(d == word_distance(b, a, 0.5));
      if (a == b) CHECK(d == doctest::Approx(std::pow(0.5, 3)));
      for (const Word& c : t.words)
        CHECK(word_distance(a, c, 0.5) <=
              std::max(d, word_distance(b, c, 0.5)) + 1e-15);
    }
}
