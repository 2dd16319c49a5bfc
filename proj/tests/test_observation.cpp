#include <doctest.h>

#include <algorithm>
#include <set>

#include "cegprop/errors.hpp"
#include "cegprop/examples.hpp"
#include "cegprop/generators.hpp"
#include "cegprop/observation.hpp"
#include "cegprop/positions.hpp"

using namespace cegprop;

namespace {

std::vector<EdgeId> by_names(const TransporterCeg& ceg,
                             const std::vector<std::string>& names) {
  std::vector<EdgeId> edges;
  for (const auto& name : names) edges.push_back(*ceg.find_edge(name));
  return edges;
}

std::set<std::vector<EdgeId>> as_set(const std::vector<Atom>& paths) {
  std::set<std::vector<EdgeId>> set;
  for (const auto& p : paths) set.insert(p.edges);
  return set;
}

}  // namespace

TEST_SUITE("observation") {

TEST_CASE("union form: the running observation") {
  const auto ceg = examples::medical_ceg();
  const auto obs = examples::alive_observation(ceg);
  CHECK(obs.union_edges().size() == 10);
  CHECK_FALSE(obs.is_vacuous());

  // Per-position view: the intersection with each edge set; w3 keeps nothing.
  const auto w3 = *ceg.find_position("w3");
  CHECK(obs.edges_at(ceg, w3).empty());
  const auto w5 = *ceg.find_position("w5");
  CHECK(obs.edges_at(ceg, w5) == by_names(ceg, {"e14"}));

  const auto paths = paths_of(ceg, obs);
  REQUIRE(paths.size() == 6);
  // Filtering the full enumeration gives the same set.
  std::vector<Atom> filtered;
  for (const auto& path : enumerate_paths(ceg)) {
    if (std::all_of(path.edges.begin(), path.edges.end(),
                    [&](EdgeId e) { return obs.contains(e); })) {
      filtered.push_back(path);
    }
  }
  CHECK(as_set(paths) == as_set(filtered));
}

TEST_CASE("vacuous observation admits every path") {
  const auto ceg = examples::medical_ceg();
  const auto obs = CompatibleObservation::vacuous(ceg);
  CHECK(obs.is_vacuous());
  CHECK(paths_of(ceg, obs).size() == 16);
}

TEST_CASE("single-path edge set selects exactly one path") {
  const auto ceg = examples::medical_ceg();
  const auto obs = CompatibleObservation::from_union(
      ceg, by_names(ceg, {"e1", "e5", "e10"}));
  const auto paths = paths_of(ceg, obs);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].edges == by_names(ceg, {"e1", "e5", "e10"}));
}

TEST_CASE("per-position subsets: absent positions keep their full edge set") {
  const auto ceg = examples::medical_ceg();

  std::map<PositionId, std::vector<EdgeId>> nothing;
  CHECK(CompatibleObservation::from_edge_sets(ceg, nothing).is_vacuous());

  // Empty set at the root kills every path.
  std::map<PositionId, std::vector<EdgeId>> closed{{ceg.root(), {}}};
  const auto obs = CompatibleObservation::from_edge_sets(ceg, closed);
  CHECK(paths_of(ceg, obs).empty());
}

TEST_CASE("edges listed under a foreign position are rejected") {
  const auto ceg = examples::medical_ceg();
  std::map<PositionId, std::vector<EdgeId>> wrong{
      {*ceg.find_position("w1"), by_names(ceg, {"e6"})}};  // e6 leaves w2
  CHECK_THROWS_AS(CompatibleObservation::from_edge_sets(ceg, wrong),
                  ValidationError);
}

TEST_CASE("check_compatibility accepts the running observation's paths") {
  const auto ceg = examples::medical_ceg();
  const auto obs = examples::alive_observation(ceg);
  const auto paths = paths_of(ceg, obs);
  const auto check = check_compatibility(ceg, paths);
  REQUIRE(check.compatible());
  CHECK(check.observation->union_edges() == obs.union_edges());
}

TEST_CASE("check_compatibility rejects a crossing path pair with a witness") {
  const auto ceg = examples::medical_ceg();
  const std::vector<Atom> pair{Atom{by_names(ceg, {"e1", "e5", "e10"})},
                               Atom{by_names(ceg, {"e2", "e6", "e11"})}};
  const auto check = check_compatibility(ceg, pair);
  REQUIRE_FALSE(check.compatible());
  REQUIRE(check.witness.has_value());
  const auto witness = check.witness->edges;
  const bool crossed = witness == by_names(ceg, {"e1", "e5", "e11"}) ||
                       witness == by_names(ceg, {"e2", "e6", "e10"});
  CHECK(crossed);
}

TEST_CASE("a forced single path is compatible") {
  const auto ceg = examples::medical_ceg();
  const std::vector<Atom> one{Atom{by_names(ceg, {"e2", "e7", "e14", "e16"})}};
  const auto check = check_compatibility(ceg, one);
  REQUIRE(check.compatible());
  CHECK(paths_of(ceg, *check.observation).size() == 1);
}

TEST_CASE("check_compatibility validates its input paths") {
  const auto ceg = examples::medical_ceg();
  const std::vector<Atom> broken{Atom{by_names(ceg, {"e1", "e6"})}};
  CHECK_THROWS_AS(check_compatibility(ceg, broken), InvalidPathError);
}

TEST_CASE("monotonicity: adding edges never removes paths") {
  const auto ceg = examples::medical_ceg();
  std::mt19937_64 rng(99);
  for (int round = 0; round < 20; ++round) {
    const auto obs = random_observation(ceg, rng, {.require_positive = false});
    auto grown = obs.union_edges();
    for (EdgeId e = 0; e < ceg.edge_count(); ++e) {
      if (!obs.contains(e) && rng() % 2 == 0) grown.push_back(e);
    }
    const auto bigger = CompatibleObservation::from_union(ceg, grown);
    const auto before = as_set(paths_of(ceg, obs));
    const auto after = as_set(paths_of(ceg, bigger));
    CHECK(std::includes(after.begin(), after.end(), before.begin(),
                        before.end()));
  }
}

TEST_CASE("round trip: observation -> paths -> check recovers the support") {
  for (std::uint64_t seed : {5u, 23u}) {
    const auto ceg =
        build_transporter_ceg(random_tree(seed, {.max_depth = 4,
                                                 .merge_bias = 0.5}));
    std::mt19937_64 rng(seed * 31 + 1);
    for (int round = 0; round < 25; ++round) {
      const auto obs = random_observation(ceg, rng, {.require_positive = false});
      const auto paths = paths_of(ceg, obs);
      const auto check = check_compatibility(ceg, paths);
      REQUIRE(check.compatible());
      CHECK(as_set(paths_of(ceg, *check.observation)) == as_set(paths));
      // The recovered union is the subset of retained edges actually used.
      for (EdgeId e : check.observation->union_edges()) {
        CHECK(obs.contains(e));
      }
    }
  }
}

}  // TEST_SUITE
