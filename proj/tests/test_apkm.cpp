#include <doctest.h>

#include <random>

#include "ttm/apkm.hpp"

using namespace ttm;

namespace {

const Action kA{"grasp", "a"}, kB{"grasp", "b"}, kC{"grasp", "c"};

Demonstration demo(std::string id, ActionSequence left, ActionSequence right) {
  return {std::move(id), std::move(left), std::move(right)};
}

std::vector<Demonstration> jittered(std::uint64_t seed, int n, TimeInterval x, TimeInterval y, double sigma) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<Demonstration> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(demo("d" + std::to_string(i), {{kA, {x.start + noise(rng), x.end + noise(rng)}}},
                       {{kB, {y.start + noise(rng), y.end + noise(rng)}}}));
  }
  return out;
}

}  // namespace

TEST_CASE("ActionPair keys") {
  const ActionPair p{kA, kB};
  CHECK(p.key() == "grasp:a|grasp:b");
  CHECK(ActionPair::parse(p.key()) == p);
  CHECK(p.reversed() == ActionPair{kB, kA});
  CHECK_FALSE(p.is_self());
  CHECK_THROWS_AS(ActionPair::parse("grasp:a"), Error);
}

TEST_CASE("collect_pairs") {
  SUBCASE("one observation per hand") {
    const auto pairs = collect_pairs({demo("d", {{kA, {0, 1}}}, {{kB, {2, 3}}})}, kA, kB);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].first == TimeInterval{0, 1});
    CHECK(pairs[0].second == TimeInterval{2, 3});
  }
  SUBCASE("a symmetric action pairs across hands only") {
    const auto pairs = collect_pairs({demo("d", {{kA, {0, 1}}}, {{kA, {0.02, 1.01}}})}, kA, kA);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].first != pairs[0].second);
    CHECK(pairs[1].first == pairs[0].second);
  }
  SUBCASE("a demonstration without the action contributes nothing") {
    const std::vector<Demonstration> demos{demo("d1", {{kA, {0, 1}}}, {{kB, {2, 3}}}), demo("d2", {}, {{kB, {2, 3}}})};
    CHECK(collect_pairs(demos, kA, kB).size() == 1);
  }
  SUBCASE("repeated actions form the Cartesian product within a demonstration") {
    const auto d = demo("d", {{kA, {0, 1}}, {kB, {2, 3}}, {kA, {4, 5}}}, {{kB, {0, 6}}});
    CHECK(collect_pairs({d}, kA, kB).size() == 4);
    CHECK(collect_pairs({d}, kB, kA).size() == 4);
    // Same hand repetitions of one action are not a symmetric pair.
    CHECK(collect_pairs({demo("s", {{kA, {0, 1}}, {kA, {2, 3}}}, {})}, kA, kA).empty());
  }
  SUBCASE("no pairs across demonstrations") {
    const std::vector<Demonstration> demos{demo("d1", {{kA, {0, 1}}}, {}), demo("d2", {}, {{kB, {2, 3}}})};
    CHECK(collect_pairs(demos, kA, kB).empty());
  }
}

TEST_CASE("build_differences") {
  const auto d = build_differences({{{0, 1}, {2, 3}}});
  CHECK(d.ss == std::vector<double>{-2});
  CHECK(d.se == std::vector<double>{-3});
  CHECK(d.es == std::vector<double>{-1});
  CHECK(d.ee == std::vector<double>{-2});

  const auto same = build_differences({{{0, 1}, {0, 1}}});
  CHECK(same.ss == std::vector<double>{0});
  CHECK(same.se == std::vector<double>{-1});
  CHECK(same.es == std::vector<double>{1});
  CHECK(same.ee == std::vector<double>{0});
  CHECK(&d.channel(Channel::ES) == &d.es);

  CHECK_THROWS_WITH_AS(build_differences({}), doctest::Contains("EmptyPairSet"), Error);
}

TEST_CASE("differences of the reversed pair mirror the original") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> t(0.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Demonstration> demos;
    for (int i = 0; i < 4; ++i) {
      const double a = t(rng), b = t(rng);
      demos.push_back(demo("d" + std::to_string(i), {{kA, {a, a + 1.0}}}, {{kB, {b, b + 2.0}}}));
    }
    const auto fwd = build_differences(collect_pairs(demos, kA, kB));
    const auto rev = build_differences(collect_pairs(demos, kB, kA));
    REQUIRE(fwd.size() == rev.size());
    for (std::size_t i = 0; i < fwd.size(); ++i) {
      CHECK(fwd.ss[i] == -rev.ss[i]);
      CHECK(fwd.ee[i] == -rev.ee[i]);
      CHECK(fwd.se[i] == -rev.es[i]);
      CHECK(fwd.es[i] == -rev.se[i]);
    }
  }
}

TEST_CASE("removing a demonstration removes exactly its pairs") {
  const auto demos = jittered(3, 10, {0, 1}, {2, 3}, 0.05);
  const auto all = collect_pairs(demos, kA, kB);
  for (std::size_t drop = 0; drop < demos.size(); ++drop) {
    auto fewer = demos;
    fewer.erase(fewer.begin() + static_cast<long>(drop));
    auto expected = all;
    expected.erase(expected.begin() + static_cast<long>(drop));
    CHECK(collect_pairs(fewer, kA, kB) == expected);
  }
}

TEST_CASE("build_apkm") {
  SUBCASE("a single pair gives floor-variance single components") {
    const auto m = build_apkm({demo("d", {{kA, {0, 1}}}, {{kB, {2, 3}}})}, kA, kB, 0);
    CHECK(m.pair_count == 1);
    for (Channel c : kAllChannels) {
      REQUIRE(m.mixture(c).size() == 1);
      CHECK(m.mixture(c).components[0].variance == EmOptions{}.variance_floor);
    }
    CHECK(m.mixture(Channel::ES).components[0].mean == doctest::Approx(-1.0));
  }
  SUBCASE("jittered samples center on the template differences") {
    const auto demos = jittered(11, 50, {0, 1}, {2, 3}, 0.05);
    const auto m = build_apkm(demos, kA, kB, 4);
    CHECK(m.pair_count == 50);
    const auto& es = m.mixture(Channel::ES);
    REQUIRE(es.size() == 1);
    CHECK(std::abs(es.components[0].mean + 1.0) <= 0.05);
    CHECK(build_apkm(demos, kA, kB, 4) == m);
  }
  SUBCASE("actions that never co-occur") {
    CHECK_THROWS_WITH_AS(build_apkm({demo("d", {{kA, {0, 1}}}, {})}, kA, kB, 0),
                         doctest::Contains("NoCooccurrence"), Error);
  }
}

TEST_CASE("build_all and build_canonical") {
  const std::vector<Demonstration> three{
      demo("d1", {{kA, {0, 1}}, {kC, {2, 3}}}, {{kB, {0.5, 4}}}),
      demo("d2", {{kA, {0, 1.2}}, {kC, {2.1, 3}}}, {{kB, {0.4, 4.2}}}),
  };
  const auto all = build_all(three, 1);
  CHECK(all.size() == 6);
  CHECK(all.count({kA, kB}) == 1);
  CHECK(all.count({kB, kA}) == 1);
  CHECK(all.count({kA, kA}) == 0);

  const auto canonical = build_canonical(three, 1);
  CHECK(canonical.size() == 3);
  for (const auto& [pair, m] : canonical) {
    CHECK(pair.first < pair.second);
    CHECK(all.at(pair) == m);
  }

  const std::vector<Demonstration> symmetric{demo("s", {{kA, {0, 1}}}, {{kA, {0, 1.02}}})};
  const auto with_self = build_all(symmetric, 1);
  REQUIRE(with_self.size() == 1);
  CHECK(with_self.begin()->first == ActionPair{kA, kA});
  CHECK(with_self.begin()->second.pair_count == 2);

  CHECK(build_all({}, 1).empty());
  CHECK(action_vocabulary(three) == std::vector<Action>{kA, kB, kC});
}
