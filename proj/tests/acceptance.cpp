// Copyright 2026 The mts Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Acceptance run: one PASS/FAIL line per criterion, with timings.
//
// The process exits non-zero if any criterion fails, except for failures
// listed in kExpectedFailures, whose lines still read FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "mts/channel.hpp"
#include "mts/constructions.hpp"
#include "mts/extremality.hpp"
#include "mts/random.hpp"
#include "mts/state.hpp"
#include "oracles.hpp"

using namespace mts;

namespace {

// AC1: the n = 3 product table as printed lists w1* w3 = 0 and
// w3* w1 = sqrt2 e12. These are adjoints of each other, so no generators can
// match both entries; the computed w3* w1 is 0.
const std::set<int> kExpectedFailures{1};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::size_t table_matches(const std::vector<Matrix>& w, std::size_t n,
                          const std::vector<fixtures::Product>& table) {
  std::size_t hits = 0;
  for (const auto& p : table)
    if (frobenius_distance(fixtures::evaluate(w, p), fixtures::to_matrix(n, p.value)) <
        1e-14)
      ++hits;
  return hits;
}

void fixture_check(Outcome& o, const KrausSet& ks, const std::vector<Matrix>& w,
                   const std::vector<fixtures::Product>& table, std::size_t ls_rows,
                   std::size_t ls_cols, std::size_t ps_rows, std::size_t ps_cols,
                   std::size_t rank_expected) {
  const std::size_t n = ks.n();
  const auto u = validate_ucpt(ks);
  o.require(u.unital_residual < 1e-12 && u.trace_residual < 1e-12, "ucpt residuals");
  const std::size_t hits = table_matches(w, n, table);
  o.detail << "products " << hits << "/" << table.size();
  o.require(hits == table.size(), "product table");

  const auto ls = ls_bi_independence(ks);
  o.detail << ", LS " << ls.stacked_rows << "x" << ls.stacked_cols << " rank "
           << ls.achieved_rank;
  o.require(ls.stacked_rows == ls_rows && ls.stacked_cols == ls_cols &&
                ls.achieved_rank == ls_cols,
            "LS rank");
  const MarginalState s = MarginalState::from_channel(ks);
  const auto ps = ps_support_test(s);
  o.detail << ", PS " << ps.stacked_rows << "x" << ps.stacked_cols << " rank "
           << ps.achieved_rank;
  o.require(ps.stacked_rows == ps_rows && ps.stacked_cols == ps_cols &&
                ps.achieved_rank == ps_cols,
            "PS rank");
  const std::size_t r = state_rank(s);
  o.detail << ", state rank " << r << ", bound " << rank_bound(static_cast<long long>(n));
  o.require(r == rank_expected && r == rank_bound(static_cast<long long>(n)),
            "state rank");
}

void ac1(Outcome& o) {
  fixture_check(o, construct_n3(), n3_generators(), fixtures::n3_table(), 18, 16, 81,
                80, 4);
  const auto erratum = fixtures::n3_printed_erratum();
  const double d = frobenius_distance(fixtures::evaluate(n3_generators(), erratum.printed),
                                      fixtures::to_matrix(3, erratum.printed.value));
  o.detail << "; printed w3*w1 = sqrt2 e12 is off by " << d
           << " (computed value 0, the adjoint of printed w1*w3 = 0)";
}

void ac2(Outcome& o) {
  fixture_check(o, construct_n4(), n4_generators(), fixtures::n4_table(), 32, 25, 256,
                250, 5);
}

void ac3(Outcome& o) {
  for (std::size_t n = 5; n <= 8; ++n) {
    const KrausSet ks = construct_general(n);
    const auto u = validate_ucpt(ks);
    const auto ls = ls_bi_independence(ks);
    const auto bound = rank_bound(static_cast<long long>(n));
    o.detail << "n=" << n << ": rank " << u.kraus_count_reduced << ", LS "
             << ls.achieved_rank << "/" << ls.required_rank << ", bound " << bound
             << "; ";
    o.require(u.is_ucpt && ls.is_extremal && u.kraus_count_reduced == n && n <= bound,
              "n=" + std::to_string(n));
  }
}

void ac4(Outcome& o) {
  const std::vector<std::pair<std::size_t, std::size_t>> cases{
      {1, 3}, {2, 4}, {2, 5}, {3, 9}};
  for (const auto& [a, n] : cases) {
    const KrausSet ks = diagonal_vandermonde(a, n);
    const auto u = validate_ucpt(ks);
    const auto prof = diagonal_profile(ks);
    const auto ls = ls_bi_independence(reduce_to_independent(ks));
    const std::string tag = "(" + std::to_string(a) + "," + std::to_string(n) + ")";
    o.detail << tag << ": LS " << ls.achieved_rank << "/" << ls.required_rank;
    o.require(u.is_ucpt, tag + " ucpt");
    o.require(prof.is_diagonal && prof.operators_diagonal, tag + " diagonal");
    o.require(ls.is_extremal && u.kraus_count_reduced == a, tag + " LS");
    if (a == 2 && n == 4) {
      const auto ps = ps_support_test(MarginalState::from_channel(ks));
      o.detail << ", PS " << ps.achieved_rank << "/" << ps.required_rank;
      o.require(ps.is_extremal == ls.is_extremal, tag + " PS agreement");
    }
    o.detail << "; ";
  }
}

std::vector<KrausSet> fixture_channels() {
  std::vector<KrausSet> out{construct_n3(), construct_n4()};
  for (std::size_t n = 3; n <= 8; ++n) out.push_back(construct_general(n));
  out.push_back(diagonal_vandermonde(1, 3));
  out.push_back(diagonal_vandermonde(2, 4));
  out.push_back(diagonal_vandermonde(2, 5));
  out.push_back(diagonal_vandermonde(3, 9));
  return out;
}

// Mixtures, random diagonal maps and perturbed diagonal maps, in rotation.
KrausSet seeded_channel(std::uint64_t seed, std::size_t index) {
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(rng.integer(2, 4));
  switch (index % 3) {
    case 0:
      return random_unitary_mixture(n, static_cast<std::size_t>(rng.integer(1, 4)),
                                    rng.integer(0, INT64_MAX));
    case 1:
      return random_diagonal_ucpt(static_cast<std::size_t>(rng.integer(1, 3)), n,
                                  rng.integer(0, INT64_MAX));
    default: {
      // Two diagonal operators need dimension >= 4.
      const std::size_t dim = 4;
      const std::size_t a = 2;
      const double eps = std::pow(10.0, -3.0 + 2.5 * rng.uniform());
      const KrausSet u = random_diagonal_ucpt(a, dim, rng.integer(0, INT64_MAX));
      return perturb_diagonal({u, diagonal_vandermonde(a, dim), eps});
    }
  }
}

void ac5(Outcome& o) {
  std::vector<KrausSet> population = fixture_channels();
  for (std::size_t i = 0; i < 50; ++i)
    population.push_back(seeded_channel(derive_seed(5005, i), i));
  double worst = 0.0;
  std::size_t rank_mismatch = 0;
  for (const auto& ks : population) {
    const Matrix d = choi(ks);
    const MarginalState s(ks.n(), d);
    const KrausSet back = kraus_from_state(s);
    worst = std::max(worst, frobenius_distance(choi(back), d));
    if (state_rank(s) != reduce_to_independent(ks).size()) ++rank_mismatch;
  }
  o.detail << population.size() << " channels, worst residual " << worst
           << ", rank mismatches " << rank_mismatch;
  o.require(worst < 1e-9, "roundtrip residual");
  o.require(rank_mismatch == 0, "state rank vs Kraus count");
}

void ac6(Outcome& o) {
  std::vector<KrausSet> population;
  for (const auto& ks : fixture_channels())
    if (ks.n() <= kPsDefaultMaxN) population.push_back(ks);
  const std::size_t fixtures_count = population.size();
  for (std::size_t i = 0; i < 100; ++i) {
    const std::uint64_t seed = derive_seed(6006, i);
    Rng rng(seed);
    const auto n = static_cast<std::size_t>(rng.integer(2, 4));
    if (i % 2 == 0) {
      const auto k = static_cast<std::size_t>(rng.integer(1, static_cast<long long>(n * n)));
      population.push_back(random_ucpt(n, k, rng.integer(0, INT64_MAX)));
    } else {
      population.push_back(seeded_channel(seed, i / 2));
    }
  }
  std::size_t disagree = 0, extremal = 0;
  for (const auto& ks : population) {
    const auto cv = cross_validate(ks);
    if (!cv.agree) ++disagree;
    if (cv.ls.is_extremal) ++extremal;
  }
  o.detail << fixtures_count << " fixtures + 100 random, " << extremal
           << " extremal, disagreements " << disagree;
  o.require(disagree == 0, "LS/PS agreement");
}

void ac7(Outcome& o) {
  std::size_t flagged = 0;
  const std::size_t total = 30;
  for (std::size_t i = 0; i < total; ++i) {
    Rng rng(derive_seed(7007, i));
    const auto n = static_cast<std::size_t>(rng.integer(2, 4));
    const auto k = static_cast<std::size_t>(rng.integer(2, 4));
    const KrausSet ks = random_unitary_mixture(n, k, rng.integer(0, INT64_MAX));
    const auto cv = cross_validate(ks);
    if (!cv.ls.is_extremal && !cv.ps.is_extremal) ++flagged;
  }
  o.detail << "mixtures certified non-extremal by both: " << flagged << "/" << total;
  o.require(flagged == total, "unitary mixtures");
  for (std::size_t n = 2; n <= 4; ++n) {
    const double d = static_cast<double>(n * n);
    const MarginalState s(n, Matrix::identity(n * n) * (1.0 / d));
    const auto ps = ps_support_test(s);
    const auto ls = ls_bi_independence(kraus_from_state(s));
    o.detail << "; I/" << n * n << ": rank " << ps.k_or_r << ", PS "
             << (ps.is_extremal ? "extremal" : "non-extremal") << ", LS "
             << (ls.is_extremal ? "extremal" : "non-extremal");
    o.require(!ps.is_extremal && !ls.is_extremal && ps.k_or_r == n * n,
              "maximally mixed n=" + std::to_string(n));
  }
}

void ac8(Outcome& o) {
  std::size_t sampled = 0, extremal = 0, attempts = 0;
  while (sampled < 200) {
    const std::uint64_t seed = derive_seed(8008, attempts++);
    Rng rng(seed);
    KrausSet ks(2, {Matrix::identity(2)});
    switch (attempts % 3) {
      case 0:
        ks = random_ucpt(2, static_cast<std::size_t>(rng.integer(2, 4)),
                         rng.integer(0, INT64_MAX));
        break;
      case 1:
        ks = random_unitary_mixture(2, static_cast<std::size_t>(rng.integer(2, 4)),
                                    rng.integer(0, INT64_MAX));
        break;
      default:
        ks = random_diagonal_ucpt(2, 2, rng.integer(0, INT64_MAX));
    }
    if (reduce_to_independent(ks).size() < 2) continue;
    ++sampled;
    const auto cv = cross_validate(ks);
    if (cv.ls.is_extremal || cv.ps.is_extremal) ++extremal;
  }
  o.detail << sampled << " channels on M2 with Kraus rank >= 2, certified extremal: "
           << extremal;
  o.require(extremal == 0, "no extremal maps");
}

void ac9(Outcome& o) {
  const KrausSet u(4, {Matrix::identity(4), Matrix(4, 4)});
  const KrausSet v = diagonal_vandermonde(2, 4);
  const Matrix d0 = choi(perturb_diagonal({u, v, 0.0}));
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const KrausSet w = perturb_diagonal({u, v, eps});
    const bool ext = ls_bi_independence(reduce_to_independent(w)).is_extremal;
    const double drift = frobenius_distance(choi(w), d0);
    o.detail << "eps=" << eps << ": " << (ext ? "extremal" : "NOT extremal")
             << ", drift/eps " << drift / eps << "; ";
    o.require(ext && drift <= 5.0 * eps, "eps=" + std::to_string(eps));
  }
}

void ac10(Outcome& o) {
  const Tolerances tol;
  std::vector<Matrix> mats;
  for (const auto& ks : fixture_channels()) mats.push_back(choi(ks));
  const std::size_t fixture_count = mats.size();
  Rng rng(10010);
  const std::size_t big[] = {64, 80, 96, 112, 128, 160, 192, 224, 240, 256};
  for (std::size_t i = 0; i < 100; ++i) {
    const std::size_t d =
        i < 90 ? static_cast<std::size_t>(rng.integer(2, 60)) : big[i - 90];
    const auto r = static_cast<std::size_t>(rng.integer(1, static_cast<long long>(d)));
    const Matrix b = gaussian_matrix(d, r, rng);
    Matrix h = b * adjoint(b);
    h *= complex(1.0 / frobenius_norm(h));
    mats.push_back(std::move(h));
  }
  double worst = 0.0;
  std::size_t mismatches = 0, largest = 0;
  for (const auto& m : mats) {
    const auto eig = hermitian_eig(m, tol);
    const Matrix lam = Matrix::diagonal(std::vector<complex>(eig.values.begin(), eig.values.end()));
    const double res = frobenius_distance(eig.vectors * lam * adjoint(eig.vectors), m) /
                       frobenius_norm(m);
    worst = std::max(worst, res);
    double top = 0.0;
    for (double l : eig.values) top = std::max(top, std::abs(l));
    std::size_t eig_rank = 0;
    for (double l : eig.values)
      if (std::abs(l) > tol.rank_rel_tol * top) ++eig_rank;
    if (eig_rank != oracle::rank_by_row_reduction(m) || eig_rank != rank(m, tol))
      ++mismatches;
    largest = std::max(largest, m.rows());
  }
  o.detail << fixture_count << " fixture + 100 random Hermitian (up to " << largest
           << "x" << largest << "), worst relative reconstruction " << worst
           << ", rank mismatches " << mismatches;
  o.require(worst < 1e-9, "reconstruction");
  o.require(mismatches == 0, "rank agreement");
}

struct Criterion {
  int id;
  double budget_seconds;  // 0: no runtime bound
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, 1.0, ac1},  {2, 2.0, ac2}, {3, 10.0, ac3}, {4, 30.0, ac4},
      {5, 0.0, ac5},  {6, 60.0, ac6}, {7, 0.0, ac7}, {8, 0.0, ac8},
      {9, 0.0, ac9},  {10, 0.0, ac10},
  };
  int unexpected = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = seconds_since(t0);
    if (c.budget_seconds > 0.0) {
      o.require(secs < c.budget_seconds,
                "runtime over " + std::to_string(c.budget_seconds) + " s");
    }
    std::printf("AC%-2d %s  (%.2f s)  %s\n", c.id, o.pass ? "PASS" : "FAIL", secs,
                o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.pass && !kExpectedFailures.contains(c.id)) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
