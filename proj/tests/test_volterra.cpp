#include <doctest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "rvf/error.hpp"
#include "rvf/volterra.hpp"

using namespace rvf;

TEST_CASE("expanded_length matches M(M+3)/2 and pair counting") {
  CHECK(expanded_length(4) == 14);
  CHECK(expanded_length(5) == 20);
  CHECK(expanded_length(1) == 2);
  CHECK_THROWS_AS(expanded_length(0), InvalidArgument);
  std::size_t previous = 0;
  for (std::size_t m = 1; m <= 12; ++m) {
    CHECK(expanded_length(m) == m + oracle::quadratic_pairs(m).size());
    CHECK(expanded_length(m) > previous);
    previous = expanded_length(m);
    CHECK(memory_length_for(expanded_length(m)) == m);
  }
  CHECK_THROWS_AS(memory_length_for(13), InvalidArgument);
}

TEST_CASE("VolterraConfig derives L") {
  const VolterraConfig cfg(4);
  CHECK(cfg.expanded_length == 14);
  CHECK_THROWS_AS(VolterraConfig(0), InvalidArgument);
}

TEST_CASE("delay line starts at zero and keeps newest first") {
  DelayLine line(3);
  for (double v : line.window()) CHECK(v == 0.0);
  line.push(1.0);
  line.push(2.0);
  CHECK(line.window()[0] == 2.0);
  CHECK(line.window()[1] == 1.0);
  CHECK(line.window()[2] == 0.0);
  line.reset();
  CHECK(line.window()[0] == 0.0);
}

TEST_CASE("push_and_expand canonical ordering") {
  SUBCASE("M=2 window [1, 2]") {
    DelayLine line(2);
    push_and_expand(line, 2.0);
    const ExpandedInput x = push_and_expand(line, 1.0);
    const std::vector<double> expected{1, 2, 1, 2, 4};
    REQUIRE(x.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(x[i] == expected[i]);
  }
  SUBCASE("M=2 zero window") {
    DelayLine line(2);
    const ExpandedInput x = push_and_expand(line, 0.0);
    CHECK(x.isZero(0.0));
  }
  SUBCASE("M=3 window [1, -1, 2] against enumeration") {
    DelayLine line(3);
    push_and_expand(line, 2.0);
    push_and_expand(line, -1.0);
    const ExpandedInput x = push_and_expand(line, 1.0);
    const std::vector<double> brute = oracle::brute_expand({1.0, -1.0, 2.0});
    const std::vector<double> expected{1, -1, 2, 1, -1, 2, 1, -2, 4};
    REQUIRE(x.size() == 9);
    for (int i = 0; i < 9; ++i) {
      CHECK(x[i] == expected[static_cast<std::size_t>(i)]);
      CHECK(x[i] == brute[static_cast<std::size_t>(i)]);
    }
  }
  SUBCASE("non-finite sample rejected") {
    DelayLine line(2);
    CHECK_THROWS_AS(push_and_expand(line, std::nan("")), InvalidInput);
    CHECK_THROWS_AS(push_and_expand(line, INFINITY), InvalidInput);
  }
}

TEST_CASE("quadratic block is the upper triangle of the outer product") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (std::size_t m = 1; m <= 6; ++m) {
    std::vector<double> w(m);
    for (double& v : w) v = g(rng);
    const ExpandedInput x = expand(w);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j)
        CHECK(x[static_cast<Eigen::Index>(quadratic_index(m, i, j))] ==
              x[static_cast<Eigen::Index>(i)] * x[static_cast<Eigen::Index>(j)]);
  }
  CHECK_THROWS_AS(quadratic_index(3, 2, 1), InvalidArgument);
}

TEST_CASE("filter_output equals the explicit double sum") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (std::size_t m = 1; m <= 6; ++m) {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> w(m), h1(m);
      std::vector<std::vector<double>> h2(m, std::vector<double>(m, 0.0));
      for (double& v : w) v = g(rng);
      for (double& v : h1) v = g(rng);
      KernelVector h(static_cast<Eigen::Index>(expanded_length(m)));
      for (std::size_t i = 0; i < m; ++i) h[static_cast<Eigen::Index>(i)] = h1[i];
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
          h2[i][j] = g(rng);
          h[static_cast<Eigen::Index>(quadratic_index(m, i, j))] = h2[i][j];
        }
      const double fast = filter_output(h, expand(w));
      const double slow = oracle::double_sum_output(h1, h2, w);
      CHECK(std::abs(fast - slow) <= 1e-12 * std::max(1.0, std::abs(slow)));
    }
  }
}

TEST_CASE("filter_output identities and errors") {
  const ExpandedInput x = expand(std::vector<double>{3.0, 5.0});
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    KernelVector e = KernelVector::Unit(x.size(), k);
    CHECK(filter_output(e, x) == x[k]);
  }
  KernelVector h(5);
  h << 1, 0, 0, 0, 0;
  CHECK(filter_output(h, x) == 3.0);
  CHECK_THROWS_AS(filter_output(KernelVector::Zero(4), x), InvalidArgument);
}
