#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "effpot/potential.hpp"

using namespace effpot;

namespace {

SubshiftSpec full2() { return build_sft(2, {{1, 1}, {1, 1}}, 0.5); }
SubshiftSpec golden() { return build_sft(2, {{1, 1}, {1, 0}}, 0.5); }

}  // namespace

TEST_CASE("lift and arithmetic on x-potentials") {
  SubshiftSpec spec = golden();
  XPotential f{1, {0.0, 1.0}};
  XPotential g = lift_to_depth(spec, f, 2);  // words {11,12,21}
  CHECK(g.values == std::vector<double>{0.0, 0.0, 1.0});
  CHECK(add(g, g).values == std::vector<double>{0.0, 0.0, 2.0});
  CHECK(subtract(g, g).values == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(shift(f, 2.0).values == std::vector<double>{2.0, 3.0});
  CHECK(scale(f, -3.0).values == std::vector<double>{0.0, -3.0});
}

TEST_CASE("mask forces incompatible pairs to zero") {
  SubshiftSpec spec = golden();
  PairPotential a =
      make_pair_potential(spec, 1, 1, {{1.0, 2.0}, {3.0, 4.0}}, true);
  WordTable w = enumerate_words(spec, 1);
  CHECK(a.value(spec, w, w, 0, 1) == 2.0);
  CHECK(a.value(spec, w, w, 1, 1) == 0.0);  // M(2,2)=0
  // Idempotence: baking the masked values into a new masked table is a
  // no-op on every effective entry.
  std::vector<std::vector<double>> baked(2, std::vector<double>(2));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      baked[i][j] = a.value(spec, w, w, i, j);
  PairPotential twice = make_pair_potential(spec, 1, 1, baked, true);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(twice.value(spec, w, w, i, j) == a.value(spec, w, w, i, j));
}

TEST_CASE("make_pair_potential validation") {
  SubshiftSpec spec = golden();
  try {
    make_pair_potential(spec, 1, 1, {{1.0, 2.0}}, false);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingEntry);
  }
  try {
    make_pair_potential(
        spec, 1, 1,
        {{1.0, std::numeric_limits<double>::quiet_NaN()}, {0.0, 0.0}}, false);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonFinite);
  }
}

TEST_CASE("lipschitz constants of locally constant functions") {
  CHECK(lip_constant(full2(), XPotential{1, {0.0, 1.0}}) ==
        doctest::Approx(1.0).epsilon(1e-14));
  // depth 2: f(11)=0, f(12)=1, f(21)=f(22)=0; pair 11/12 differs at j=1
  CHECK(lip_constant(full2(), XPotential{2, {0.0, 1.0, 0.0, 0.0}}) ==
        doctest::Approx(2.0).epsilon(1e-14));
  // constants have zero lip
  CHECK(lip_constant(golden(), XPotential{2, {3.0, 3.0, 3.0}}) == 0.0);
}

TEST_CASE("quotient and sup norms") {
  XPotential f{1, {-1.0, 3.0}};
  CHECK(quotient_norm(f) == doctest::Approx(2.0));
  CHECK(sup_norm(f) == doctest::Approx(3.0));
  NormReport r = norms(full2(), f);
  CHECK(r.quotient == doctest::Approx(2.0));
  CHECK(r.sup_norm == doctest::Approx(3.0));
  CHECK(r.lip == doctest::Approx(4.0));
}

TEST_CASE("pair norms are computed on masked values") {
  SubshiftSpec spec = golden();
  PairPotential a =
      make_pair_potential(spec, 1, 1, {{0.0, 1.0}, {0.0, 100.0}}, true);
  CHECK(pair_sup_norm(spec, a) == doctest::Approx(1.0));  // (2,2) reads 0
  // x-variable pairs within y=2 differ in mask, so they are excluded; the
  // y-variable pair at x=1 gives 0. Only (y=1) x-pair 1 vs 2 counts: 1/Λ⁰.
  CHECK(pair_lip(spec, a) == doctest::Approx(1.0));
}

TEST_CASE("truncation error bound and refinement oracle") {
  SubshiftSpec spec = full2();
  // Genuinely Lipschitz observable on pairs of sequences (words sampled as
  // periodic points): geometric series in both coordinates.
  PairSampler sampler = [](const Word& /*y*/, const Word& x) {
    double s = 0.0;
    double w = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j, w *= 0.5)
      s += w * (x[j] == 2 ? 1.0 : 0.0);
    return s;
  };
  const double lip_a = 2.0;
  TruncationResult coarse = truncate_to_range(spec, sampler, 2, 2, lip_a);
  TruncationResult bound_case = truncate_to_range(spec, sampler, 4, 4, lip_a);
  CHECK(bound_case.error_bound == doctest::Approx(0.125).epsilon(1e-14));
  // Oracle: depth-6 refinement; the coarse table must match the fine one on
  // prefixes within the advertised bound.
  TruncationResult fine = truncate_to_range(spec, sampler, 6, 6, lip_a);
  WordTable y2 = enumerate_words(spec, 2), y6 = enumerate_words(spec, 6);
  for (std::size_t iy = 0; iy < y6.size(); ++iy)
    for (std::size_t ix = 0; ix < y6.size(); ++ix) {
      std::size_t py = y6.prefix_index(iy, y2);
      std::size_t px = y6.prefix_index(ix, y2);
      CHECK(std::abs(fine.potential.values[iy][ix] -
                     coarse.potential.values[py][px]) <=
            coarse.error_bound + 1e-12);
    }
}

TEST_CASE("scaled pair potential scales norms") {
  SubshiftSpec spec = golden();
  PairPotential a =
      make_pair_potential(spec, 1, 1, {{0.0, 1.0}, {0.5, 0.0}}, true);
  PairPotential b = scale(a, 3.0);
  CHECK(pair_sup_norm(spec, b) == doctest::Approx(3.0 * pair_sup_norm(spec, a)));
  CHECK(pair_lip(spec, b) == doctest::Approx(3.0 * pair_lip(spec, a)));
}
