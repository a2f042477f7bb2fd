#include <doctest.h>

#include <cmath>

#include "iclust/errors.hpp"
#include "iclust/icl.hpp"
#include "iclust/partition.hpp"
#include "iclust/rng.hpp"
#include "oracles.hpp"

using namespace iclust;

TEST_CASE("log_partition_term: single cluster is exactly zero") {
  std::vector<int> sizes{2};
  CHECK(log_partition_term(sizes, 1.0, 2) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("log_partition_term: two singletons, alpha 1") {
  std::vector<int> sizes{1, 1};
  // Gamma(2) * Gamma(2)^2 / (Gamma(1)^2 Gamma(4)) = 1/6
  CHECK(log_partition_term(sizes, 1.0, 2) ==
        doctest::Approx(std::log(1.0 / 6.0)).epsilon(1e-12));
}

TEST_CASE("log_partition_term: matches the sequential-predictive oracle") {
  std::vector<int> labels{0, 0, 0, 1};
  double direct = log_partition_term(std::vector<int>{3, 1}, 0.5, 4);
  CHECK(direct == doctest::Approx(oracles::seq_partition_term(labels, 2, 0.5)).epsilon(1e-12));
}

TEST_CASE("log_partition_term: domain errors") {
  CHECK_THROWS_AS(log_partition_term(std::vector<int>{0, 2}, 1.0, 2), ConfigError);
  CHECK_THROWS_AS(log_partition_term(std::vector<int>{2}, -1.0, 2), ConfigError);
  CHECK_THROWS_AS(log_partition_term(std::vector<int>{2}, 1.0, 3), ConfigError);
}

TEST_CASE("log_partition_term: predictive equivalence over small instances") {
  Rng rng(7);
  const double alphas[] = {0.1, 0.5, 1.0, 2.0};
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 1 + rng.uniform_int(12);
    const int k_max = 1 + rng.uniform_int(4);
    std::vector<int> labels(n);
    for (auto& l : labels) l = rng.uniform_int(k_max);
    Partition p = compact(labels);
    const double alpha = alphas[rng.uniform_int(4)];
    const double direct = log_partition_term(p.sizes(), alpha, n);
    const double seq = oracles::seq_partition_term(p.labels(), p.k(), alpha);
    CHECK(direct == doctest::Approx(seq).epsilon(1e-10));
  }
}

TEST_CASE("log_partition_term: exchangeable in the size multiset") {
  std::vector<int> a{5, 2, 9, 1};
  std::vector<int> b{9, 5, 1, 2};
  CHECK(log_partition_term(a, 0.3, 17) ==
        doctest::Approx(log_partition_term(b, 0.3, 17)).epsilon(1e-14));
}

TEST_CASE("PartitionTermCache matches direct evaluation and move deltas") {
  Rng rng(99);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 2 + rng.uniform_int(30);
    Partition p = Partition::random(n, 1 + rng.uniform_int(5), rng);
    const double alpha = 0.25 * (1 + rng.uniform_int(8));
    PartitionTermCache ptc(n, alpha);
    CHECK(ptc.value(p.sizes()) ==
          doctest::Approx(log_partition_term(p.sizes(), alpha, n)).epsilon(1e-12));
    if (p.k() < 2) continue;

    //

    int i = rng.uniform_int(n);
    int g = p.label(i);
    int h = (g + 1 + rng.uniform_int(p.k() - 1)) % p.k();
    double delta = ptc.swap_delta(p.sizes(), g, h);
    std::vector<int> labels = p.labels();
    labels[i] = h;
    Partition q = compact(labels);
    CHECK(ptc.value(q.sizes()) - ptc.value(p.sizes()) == doctest::Approx(delta).epsilon(1e-10));

    double mdelta = ptc.merge_delta(p.sizes(), g, h);
    std::vector<int> mlabels = p.labels();
    for (auto& l : mlabels)
      if (l == h) l = g;
    Partition m = compact(mlabels);
    CHECK(ptc.value(m.sizes()) - ptc.value(p.sizes()) ==
          doctest::Approx(mdelta).epsilon(1e-10));
  }
}

TEST_CASE("assemble_icl: exact additive identity") {
  std::vector<int> sizes{1, 1};
  IclValue v = assemble_icl(-5.0, sizes, 1.0);
  CHECK(v.total == v.obs_term + v.partition_term);
  CHECK(v.total == doctest::Approx(-5.0 + std::log(1.0 / 6.0)).epsilon(1e-12));

  std::vector<int> one{2};
  IclValue z = assemble_icl(0.0, one, 1.0);
  CHECK(z.total == doctest::Approx(0.0));

  std::vector<int> permuted{1, 1};
  CHECK(assemble_icl(-5.0, permuted, 1.0).total == doctest::Approx(v.total));
}

TEST_CASE("compact: removes empty clusters, keeps first-appearance order") {
  Partition p = compact(std::vector<int>{0, 2, 2});
  CHECK(p.k() == 2);
  CHECK(p.labels() == std::vector<int>{0, 1, 1});

  Partition q = compact(std::vector<int>{1, 1, 1});
  CHECK(q.k() == 1);
  CHECK(q.labels() == std::vector<int>{0, 0, 0});

  Partition r = compact(std::vector<int>{0, 1, 0, 2});
  Partition r2 = compact(r.labels());
  CHECK(r2.labels() == r.labels());
}

TEST_CASE("partition move/remove_empty/merge bookkeeping") {
  Partition p = compact(std::vector<int>{0, 0, 1, 2, 2});
  p.move(0, 1);
  CHECK(p.sizes() == std::vector<int>{1, 2, 2});
  p.move(1, 2);
  CHECK(p.size_of(0) == 0);
  p.remove_empty(0);
  CHECK(p.k() == 2);
  CHECK(p.labels() == std::vector<int>{0, 1, 0, 1, 1});
  p.merge(0, 1);
  CHECK(p.k() == 1);
  CHECK(p.size_of(0) == 5);
}

TEST_CASE("adjusted_rand_index basics") {
  Partition a = compact(std::vector<int>{0, 0, 1, 1});
  CHECK(adjusted_rand_index(a, a) == doctest::Approx(1.0));

  Partition b = compact(std::vector<int>{1, 1, 0, 0});  // label-permuted
  CHECK(adjusted_rand_index(a, b) == doctest::Approx(1.0));

  Partition one = compact(std::vector<int>{0, 0, 0, 0});
  Partition singletons = compact(std::vector<int>{0, 1, 2, 3});
  CHECK(adjusted_rand_index(one, singletons) == doctest::Approx(0.0));

  Partition bad = compact(std::vector<int>{0, 1});
  CHECK_THROWS_AS(adjusted_rand_index(a, bad), ConfigError);
}

TEST_CASE("adjusted_rand_index agrees with the pairwise definition") {
  Rng rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + rng.uniform_int(40);
    std::vector<int> la(n), lb(n);
    for (int i = 0; i < n; ++i) {
      la[i] = rng.uniform_int(4);
      lb[i] = rng.uniform_int(3);
    }
    Partition a = compact(la);
    Partition b = compact(lb);
    CHECK(adjusted_rand_index(a, b) ==
          doctest::Approx(oracles::ari_pairwise(a.labels(), b.labels())).epsilon(1e-12));
  }
}
