#include "topokit/pd_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "doctest.h"
#include "test_support.hpp"

using namespace topokit;
using topokit::testing::Rng;

namespace {

PersistenceDiagram diagram(std::initializer_list<std::array<double, 3>> rows) {
  PersistenceDiagram d;
  for (const auto& r : rows) {
    PersistencePair p;
    p.dim = static_cast<int>(r[0]);
    p.birth = r[1];
    p.death = r[2];
    d.pairs.push_back(p);
    if (!p.infinite()) d.max_filtration = std::max(d.max_filtration, p.death);
  }
  return d;
}

PersistenceDiagram random_diagram(Rng& rng, int max_points, int dims = 1) {
  PersistenceDiagram d;
  int n = rng.uniform_int(0, max_points);
  for (int i = 0; i < n; ++i) {
    PersistencePair p;
    p.dim = dims == 1 ? 0 : rng.uniform_int(0, dims - 1);
    p.birth = rng.uniform();
    p.death = p.birth + rng.uniform();
    d.pairs.push_back(p);
    d.max_filtration = std::max(d.max_filtration, p.death);
  }
  return d;
}

}  // namespace

TEST_CASE("wasserstein: spec examples") {
  PersistenceDiagram a = diagram({{0, 0, 1}});
  PersistenceDiagram b = diagram({{0, 0, 2}});
  CHECK(wasserstein(a, a, 2.0) == 0.0);
  // Direct match beats the double-diagonal route (sqrt(2.5)).
  CHECK(wasserstein(a, b, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  PersistenceDiagram empty;
  CHECK(wasserstein(a, empty, 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("wasserstein rejects uncapped bars") {
  PersistenceDiagram inf = diagram({{0, 0, kInfiniteDeath}});
  PersistenceDiagram fin = diagram({{0, 0, 1}});
  CHECK_THROWS_AS(wasserstein(inf, fin, 2.0), UncappedInfiniteBar);
}

TEST_CASE("bottleneck: spec examples") {
  PersistenceDiagram a = diagram({{0, 0, 2}});
  PersistenceDiagram b = diagram({{0, 0, 2.5}});
  PersistenceDiagram empty;
  CHECK(bottleneck(a, a) == 0.0);
  CHECK(bottleneck(a, b) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(bottleneck(a, empty) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("brute force oracle basics") {
  PersistenceDiagram a = diagram({{0, 0, 1}});
  CHECK(brute_force_diagram_distance(a, a, 2.0) == 0.0);
  PersistenceDiagram two = diagram({{0, 0, 1}, {0, 2, 3}});
  PersistenceDiagram one = diagram({{0, 0, 1}});
  // (2,3) is forced to the diagonal: cost sqrt(2 * 0.5^2).
  CHECK(brute_force_diagram_distance(two, one, 2.0) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("oracle agreement: wasserstein and bottleneck vs brute force") {
  Rng rng(314159);
  for (int trial = 0; trial < 600; ++trial) {
    PersistenceDiagram a = random_diagram(rng, 6);
    PersistenceDiagram b = random_diagram(rng, 6);
    double q = trial % 3 == 0 ? 1.0 : 2.0;
    CHECK(std::abs(wasserstein(a, b, q) - brute_force_diagram_distance(a, b, q)) <=
          1e-9);
    CHECK(std::abs(bottleneck(a, b) -
                   brute_force_diagram_distance(a, b, kInfiniteDeath)) <= 1e-9);
  }
}

TEST_CASE("oracle agreement on multi-dimension diagrams") {
  Rng rng(2718);
  for (int trial = 0; trial < 100; ++trial) {
    PersistenceDiagram a = random_diagram(rng, 5, 3);
    PersistenceDiagram b = random_diagram(rng, 5, 3);
    CHECK(std::abs(wasserstein(a, b, 2.0) -
                   brute_force_diagram_distance(a, b, 2.0)) <= 1e-9);
    CHECK(std::abs(bottleneck(a, b) -
                   brute_force_diagram_distance(a, b, kInfiniteDeath)) <= 1e-9);
  }
}

TEST_CASE("brute force size guard") {
  Rng rng(55);
  PersistenceDiagram big;
  for (int i = 0; i < 7; ++i) {
    PersistencePair p;
    p.dim = 0;
    p.birth = 0;
    p.death = 1;
    big.pairs.push_back(p);
  }
  CHECK_THROWS_AS(brute_force_diagram_distance(big, big, 2.0), DiagramTooLarge);
}

TEST_CASE("metric axioms on random triples") {
  Rng rng(987);
  for (int trial = 0; trial < 200; ++trial) {
    PersistenceDiagram a = random_diagram(rng, 5);
    PersistenceDiagram b = random_diagram(rng, 5);
    PersistenceDiagram c = random_diagram(rng, 5);
    double ab = wasserstein(a, b, 2.0);
    double ba = wasserstein(b, a, 2.0);
    double ac = wasserstein(a, c, 2.0);
    double cb = wasserstein(c, b, 2.0);
    CHECK(wasserstein(a, a, 2.0) <= 1e-12);
    CHECK(std::abs(ab - ba) <= 1e-12);
    CHECK(ab <= ac + cb + 1e-9);

    double bab = bottleneck(a, b);
    CHECK(std::abs(bab - bottleneck(b, a)) <= 1e-12);
    CHECK(bab <= bottleneck(a, c) + bottleneck(c, b) + 1e-9);
  }
}

TEST_CASE("lower-star stability: bottleneck bounded by max vertex change") {
  Rng rng(1618);
  for (int trial = 0; trial < 250; ++trial) {
    // Fixed complex: cycle of size n plus chords.
    int n = rng.uniform_int(4, 8);
    std::vector<Simplex> complex;
    for (Index v = 0; v < n; ++v) complex.push_back(Simplex{v});
    for (Index v = 0; v < n; ++v) complex.push_back(Simplex{v, (v + 1) % n == 0 ? 0 : v + 1});
    std::vector<double> f, g;
    double max_diff = 0.0;
    for (int v = 0; v < n; ++v) {
      double fv = rng.uniform();
      double delta = (rng.uniform() - 0.5) * 0.3;
      double gv = std::clamp(fv + delta, 0.0, 1.0);
      f.push_back(fv);
      g.push_back(gv);
      max_diff = std::max(max_diff, std::abs(fv - gv));
    }
    PersistenceDiagram df =
        capped(compute_persistence(lower_star_filtration(complex, f)), 1.0);
    PersistenceDiagram dg =
        capped(compute_persistence(lower_star_filtration(complex, g)), 1.0);
    CHECK(bottleneck(df, dg) <= max_diff + 1e-12);
  }
}

TEST_CASE("total persistence") {
  PersistenceDiagram empty;
  CHECK(total_persistence(empty, 2.0) == 0.0);
  PersistenceDiagram d = diagram({{0, 0, 1}, {0, 0, 2}});
  CHECK(total_persistence(d, 2.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(total_persistence(d, 1.0) == doctest::Approx(3.0).epsilon(1e-15));

  Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    PersistenceDiagram r = random_diagram(rng, 6);
    double p1 = total_persistence(r, 1.0);
    double p2 = total_persistence(r, 2.0);
    CHECK(p2 <= p1 * p1 + 1e-12);  // Cauchy-Schwarz sanity
  }
}

TEST_CASE("total persistence equals all-diagonal matching cost") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    PersistenceDiagram r = random_diagram(rng, 6);
    PersistenceDiagram empty;
    double w = wasserstein(r, empty, 2.0);
    // Matching everything to the diagonal costs sum of pers^2 / 2.
    CHECK(std::abs(w * w - total_persistence(r, 2.0) * 0.5) <= 1e-9);
  }
}

TEST_CASE("injective matching: spec examples") {
  PersistenceDiagram gt = diagram({{0, 0, 2}});
  PersistenceDiagram pred = diagram({{0, 0, 1}, {0, 0, 1.5}});
  Matching m = injective_matching_cost(pred, gt);
  REQUIRE(m.pairs.size() == 1);
  CHECK(m.cost == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(!m.pairs[0].target.is_diagonal());
  CHECK(pred.pairs[m.pairs[0].target.index].death == 1.5);

  Matching identity = injective_matching_cost(gt, gt);
  CHECK(identity.cost == 0.0);
}

TEST_CASE("injective matching equals exhaustive injection oracle") {
  Rng rng(333);
  for (int trial = 0; trial < 200; ++trial) {
    int ng = rng.uniform_int(1, 3);
    int np = rng.uniform_int(ng, 5);  // no padding branch here
    PersistenceDiagram gt, pred;
    for (int i = 0; i < ng; ++i) {
      PersistencePair p;
      p.dim = 0;
      p.birth = rng.uniform();
      p.death = p.birth + 0.01 + rng.uniform();
      gt.pairs.push_back(p);
    }
    for (int i = 0; i < np; ++i) {
      PersistencePair p;
      p.dim = 0;
      p.birth = rng.uniform();
      p.death = p.birth + rng.uniform();
      pred.pairs.push_back(p);
    }
    Matching m = injective_matching_cost(pred, gt);

    // Exhaustive over all injections gt -> pred.
    std::vector<int> perm(np);
    for (int i = 0; i < np; ++i) perm[i] = i;
    double best = 1e300;
    std::sort(perm.begin(), perm.end());
    do {
      double cost = 0.0;
      for (int i = 0; i < ng; ++i) {
        double db = gt.pairs[i].birth - pred.pairs[perm[i]].birth;
        double dd = gt.pairs[i].death - pred.pairs[perm[i]].death;
        cost += db * db + dd * dd;
      }
      best = std::min(best, cost);
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(std::abs(m.cost - best) <= 1e-9);
  }
}

TEST_CASE("injective matching pads with diagonal projections on deficit") {
  PersistenceDiagram gt = diagram({{0, 0, 2}, {0, 1, 3}});
  PersistenceDiagram pred = diagram({{0, 0, 2}});
  Matching m = injective_matching_cost(pred, gt);
  REQUIRE(m.pairs.size() == 2);
  int diagonal = 0;
  for (const auto& e : m.pairs)
    if (e.target.is_diagonal()) ++diagonal;
  CHECK(diagonal == 1);
  // Perfect match for the first bar, pers^2/2 = 2 for the dropped one.
  CHECK(m.cost == doctest::Approx(2.0).epsilon(1e-12));

  // Zero-persistence gt points never participate.
  PersistenceDiagram gt_diag = diagram({{0, 0.5, 0.5}});
  Matching none = injective_matching_cost(pred, gt_diag);
  CHECK(none.pairs.empty());
  CHECK(none.cost == 0.0);
}

TEST_CASE("decomposition sanity: wasserstein bounded by restoration + shrinking") {
  // The injective matching plus sending every unmatched prediction point to
  // the diagonal is one admissible transport plan, so the squared Wasserstein
  // distance never exceeds that decomposed cost.
  Rng rng(444);
  for (int trial = 0; trial < 100; ++trial) {
    PersistenceDiagram gt = random_diagram(rng, 3);
    PersistenceDiagram pred = random_diagram(rng, 5);
    if (gt.pairs.size() > pred.pairs.size()) continue;
    double w = wasserstein(pred, gt, 2.0);
    Matching m = injective_matching_cost(pred, gt);
    std::vector<char> matched(pred.pairs.size(), 0);
    for (const auto& e : m.pairs)
      if (!e.target.is_diagonal()) matched[e.target.index] = 1;
    PersistenceDiagram unmatched;
    for (std::size_t i = 0; i < pred.pairs.size(); ++i)
      if (!matched[i]) unmatched.pairs.push_back(pred.pairs[i]);
    double rhs = m.cost + 0.5 * total_persistence(unmatched, 2.0);
    CHECK(w * w <= rhs + 1e-9);
  }
}

TEST_CASE("topo_diff: identical clouds give zero") {
  Rng rng(5150);
  PointCloud x = make_cloud(topokit::testing::random_points(rng, 10, 3), 3);
  CHECK(topo_diff(x, x) == 0.0);
}

TEST_CASE("topo_diff: square corners vs with center, against oracle") {
  PointCloud x = make_cloud({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}, 2);
  std::vector<Point> plus = x.points;
  plus.push_back({0.5, 0.5, 0.0});
  PointCloud x_hat = make_cloud(plus, 2);
  double got = topo_diff(x, x_hat);
  CHECK(got > 0.0);

  PersistenceDiagram raw_a = compute_persistence(alpha_filtration(x));
  PersistenceDiagram raw_b = compute_persistence(alpha_filtration(x_hat));
  double cap = std::max(raw_a.max_filtration, raw_b.max_filtration);
  auto restrict01 = [](const PersistenceDiagram& d) {
    PersistenceDiagram out;
    for (const auto& p : d.pairs)
      if (p.dim <= 1) out.pairs.push_back(p);
    return out;
  };
  double expect = brute_force_diagram_distance(restrict01(capped(raw_a, cap)),
                                               restrict01(capped(raw_b, cap)), 2.0);
  CHECK(got == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("topo_diff: tetrahedron plus centroid stays below default tau") {
  PointCloud x = make_cloud({{0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2, 0},
                             {0.5, std::sqrt(3.0) / 6, std::sqrt(6.0) / 3}},
                            3);
  std::vector<Point> plus = x.points;
  Vec3 centroid{0, 0, 0};
  for (const Point& p : x.points) centroid = centroid + p;
  plus.push_back(centroid / 4.0);
  PointCloud x_hat = make_cloud(plus, 3);
  double d = topo_diff(x, x_hat);
  CHECK(d < 0.5);  // default tau
}

TEST_CASE("pure functions: concurrent topo_diff calls agree with serial ones") {
  Rng rng(777);
  PointCloud x = make_cloud(topokit::testing::random_points(rng, 14, 3), 3);
  std::vector<Point> plus = x.points;
  plus.push_back({0.4, 0.5, 0.6});
  PointCloud y = make_cloud(plus, 3);
  double serial = topo_diff(x, y);
  std::vector<std::future<double>> jobs;
  for (int i = 0; i < 4; ++i)
    jobs.push_back(std::async(std::launch::async, [&] { return topo_diff(x, y); }));
  for (auto& j : jobs) CHECK(j.get() == serial);
}

TEST_CASE("assignment solver on a known matrix") {
  std::vector<std::vector<double>> cost{{4, 1, 3}, {2, 0, 5}, {3, 2, 2}};
  double total = 0.0;
  std::vector<int> assign = solve_assignment(cost, &total);
  CHECK(total == doctest::Approx(5.0));
  CHECK(assign == std::vector<int>{1, 0, 2});
}
