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


// Command implementations behind the `mts` executable. Each command writes to
// the given streams and returns the process exit code, so the commands can be
// driven directly from tests.
//
// Exit codes:
//   0  success (certify: extremal; roundtrip: residual below 1e-9;
//      search: target reached or no target given)
//   1  valid input, negative outcome (certify: not extremal; roundtrip:
//      residual too large; search: target not reached)
//   2  invalid parameters (construct, bound) or input that is not UCPT / not
//      marginal tracial (certify)
//   3  file could not be read or written
//   4  file could not be parsed, or roundtrip input is unusable
//   5  LS and PS verdicts disagree (certify)
//   6  bad command line or MTS_TOL value

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mts/channel.hpp"
#include "mts/constructions.hpp"
#include "mts/extremality.hpp"
#include "mts/io.hpp"
#include "mts/random.hpp"
#include "mts/state.hpp"

namespace mts::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int negative = 1;
inline constexpr int invalid = 2;
inline constexpr int io = 3;
inline constexpr int parse = 4;
inline constexpr int inconsistent = 5;
inline constexpr int usage = 6;
}  // namespace exit_code

inline constexpr double kRoundtripThreshold = 1e-9;

/// Bad command line or environment value.
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

inline double parse_positive(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw usage_error(what + ": not a number: \"" + text + "\"");
  }
  if (used != text.size() || !(v > 0.0) || !std::isfinite(v)) {
    throw usage_error(what + ": expected a positive number, got \"" + text + "\"");
  }
  return v;
}

/// Default tolerances, with rank_rel_tol taken from MTS_TOL when set and
/// from --tol when given (the flag wins).
inline Tolerances resolve_tolerances(std::optional<double> flag,
                                     const char* env = std::getenv("MTS_TOL")) {
  Tolerances t;
  if (env != nullptr && *env != '\0') t.rank_rel_tol = parse_positive(env, "MTS_TOL");
  if (flag) {
    if (!(*flag > 0.0) || !std::isfinite(*flag)) {
      throw usage_error("--tol must be a positive number");
    }
    t.rank_rel_tol = *flag;
  }
  return t;
}

namespace detail {

inline bool to_stdout(const std::string& path) { return path.empty() || path == "-"; }

inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (to_stdout(path)) {
    out << text;
  } else {
    io::write_text(path, text);
  }
}

}  // namespace detail

// ---------------------------------------------------------------- construct

struct ConstructOptions {
  std::string family;
  std::optional<std::size_t> n;
  std::optional<std::size_t> a;
  std::optional<std::size_t> k;
  std::uint64_t seed = 0;
  std::vector<double> weights;
  std::string out_path;
};

inline const std::vector<std::string>& construct_families() {
  static const std::vector<std::string> f{"n3", "n4", "general", "diagonal",
                                          "mixture", "unitary"};
  return f;
}

inline KrausSet build_family(const ConstructOptions& o) {
  auto need = [&](const std::optional<std::size_t>& v, const char* flag) {
    if (!v) throw std::invalid_argument(o.family + " needs " + flag);
    return *v;
  };
  if (o.family == "n3") return construct_n3();
  if (o.family == "n4") return construct_n4();
  if (o.family == "general") return construct_general(need(o.n, "--n"));
  if (o.family == "diagonal") {
    return diagonal_vandermonde(need(o.a, "--a"), need(o.n, "--n"));
  }
  if (o.family == "unitary") {
    const std::size_t n = need(o.n, "--n");
    if (n == 0) throw std::invalid_argument("--n must be >= 1");
    Rng rng(o.seed);
    return unitary_channel(random_unitary(n, rng));
  }
  if (o.family == "mixture") {
    const std::size_t n = need(o.n, "--n");
    if (n == 0) throw std::invalid_argument("--n must be >= 1");
    std::size_t k = o.weights.empty() ? need(o.k, "--k or --weights") : o.weights.size();
    if (o.k && *o.k != k) {
      throw std::invalid_argument("--k disagrees with the number of weights");
    }
    if (k == 0) throw std::invalid_argument("--k must be >= 1");
    Rng rng(o.seed);
    std::vector<Matrix> us;
    for (std::size_t i = 0; i < k; ++i) us.push_back(random_unitary(n, rng));
    std::vector<double> w = o.weights;
    if (w.empty()) w.assign(k, 1.0 / static_cast<double>(k));
    double total = 0.0;
    for (double x : w) total += x;
    if (!(total > 0.0)) throw std::invalid_argument("weights must be positive");
    for (double& x : w) x /= total;
    return mixture_of_unitaries(w, us);
  }
  throw std::invalid_argument("unknown family \"" + o.family + "\"");
}

inline int cmd_construct(const ConstructOptions& o, Streams s) {
  KrausSet ks(1, {Matrix::identity(1)});
  try {
    ks = build_family(o);
  } catch (const std::invalid_argument& e) {
    s.err << "construct: " << e.what() << "\n";
    return exit_code::invalid;
  }
  try {
    detail::emit(o.out_path, io::pretty(io::kraus_to_json(ks)), s.out);
  } catch (const io::io_error& e) {
    s.err << "construct: " << e.what() << "\n";
    return exit_code::io;
  }
  return exit_code::ok;
}

// ---------------------------------------------------------------- certify

struct CertifyOptions {
  std::string in_path;
  /// Unset: PS runs for n <= kPsDefaultMaxN.
  std::optional<bool> ps;
  bool json = false;
  std::string out_path;
};

struct CertifyResult {
  io::json certificate;
  int code = exit_code::ok;
};

/// Builds the certificate for a parsed input document.
inline CertifyResult certify_document(const io::json& doc, const CertifyOptions& o,
                                      const Tolerances& tol) {
  const io::Document parsed = io::document_from_json(doc);
  io::json cert;
  cert["input_digest"] = io::digest(doc);
  cert["tolerances"] = io::to_json(tol);
  cert["version"] = io::kFormatVersion;

  std::optional<KrausSet> ks;
  std::optional<MarginalState> state;
  bool valid = true;
  if (const auto* k = std::get_if<KrausSet>(&parsed)) {
    cert["input_kind"] = "kraus";
    const auto report = validate_ucpt(*k, tol);
    cert["ucpt_report"] = io::to_json(report);
    valid = report.is_ucpt;
    ks = *k;
    state = MarginalState::from_channel(*k, tol);
  } else {
    const auto& d = std::get<io::DensityFile>(parsed);
    cert["input_kind"] = "density";
    if (hermitian_defect(d.density) > tol.residual_abs_tol) {
      throw io::parse_error("density matrix is not Hermitian");
    }
    state = MarginalState(d.n, d.density, tol);
    const auto report = validate_marginal(*state, tol);
    cert["marginal_report"] = io::to_json(report);
    valid = report.is_marginal_tracial;
    if (valid) {
      ks = kraus_from_state(*state, tol);
      cert["ucpt_report"] = io::to_json(validate_ucpt(*ks, tol));
    }
  }
  const std::size_t n = state->n();
  cert["n"] = n;
  cert["state_rank"] = state_rank(*state, tol);
  cert["rank_bound"] = rank_bound(static_cast<long long>(n));
  if (!valid) {
    cert["ls_certificate"] = nullptr;
    cert["verdict"] = "invalid_input";
    return {cert, exit_code::invalid};
  }

  const auto ls = ls_bi_independence(reduce_to_independent(*ks, tol), tol);
  cert["ls_certificate"] = io::to_json(ls);
  bool extremal = ls.is_extremal;
  const bool run_ps = o.ps.value_or(n <= kPsDefaultMaxN);
  if (run_ps) {
    const auto ps = ps_support_test(*state, tol, /*allow_large=*/true);
    cert["ps_certificate"] = io::to_json(ps);
    if (ps.is_extremal != ls.is_extremal) {
      cert["verdict"] = "inconsistent";
      return {cert, exit_code::inconsistent};
    }
  }
  cert["verdict"] = extremal ? "extremal" : "not_extremal";
  return {cert, extremal ? exit_code::ok : exit_code::negative};
}

inline std::string certificate_table(const io::json& c) {
  std::ostringstream os;
  auto line = [&](const std::string& key, const std::string& value) {
    os << std::left << std::setw(18) << key << value << "\n";
  };
  auto cert_line = [&](const io::json& x) {
    std::ostringstream v;
    v << x["stacked_rows"].get<std::size_t>() << "x"
      << x["stacked_cols"].get<std::size_t>() << "  rank "
      << x["achieved_rank"].get<std::size_t>() << "/"
      << x["required_rank"].get<std::size_t>() << "  "
      << (x["is_extremal"].get<bool>() ? "extremal" : "not extremal");
    return v.str();
  };
  line("input", c["input_kind"].get<std::string>() + " " +
                    c["input_digest"].get<std::string>());
  line("n", std::to_string(c["n"].get<std::size_t>()));
  if (c.contains("marginal_report")) {
    const auto& m = c["marginal_report"];
    std::ostringstream v;
    v << std::scientific << std::setprecision(2) << "pt1 "
      << m["pt_first_residual"].get<double>() << "  pt2 "
      << m["pt_second_residual"].get<double>() << "  psd "
      << m["psd_defect"].get<double>();
    line("marginals", v.str());
  }
  if (c.contains("ucpt_report")) {
    const auto& u = c["ucpt_report"];
    std::ostringstream v;
    v << std::scientific << std::setprecision(2) << "unital "
      << u["unital_residual"].get<double>() << "  trace "
      << u["trace_residual"].get<double>() << "  kraus "
      << u["kraus_count_reduced"].get<std::size_t>();
    line("ucpt", v.str());
  }
  if (!c["ls_certificate"].is_null()) line("LS", cert_line(c["ls_certificate"]));
  if (c.contains("ps_certificate")) line("PS", cert_line(c["ps_certificate"]));
  line("state rank", std::to_string(c["state_rank"].get<std::size_t>()) +
                         "  (bound " +
                         std::to_string(c["rank_bound"].get<std::size_t>()) + ")");
  line("verdict", c["verdict"].get<std::string>());
  return os.str();
}

inline int cmd_certify(const CertifyOptions& o, const Tolerances& tol, Streams s) {
  CertifyResult r;
  try {
    r = certify_document(io::read_json(o.in_path), o, tol);
  } catch (const io::io_error& e) {
    s.err << "certify: " << e.what() << "\n";
    return exit_code::io;
  } catch (const io::parse_error& e) {
    s.err << "certify: " << o.in_path << ": " << e.what() << "\n";
    return exit_code::parse;
  }
  const std::string text =
      o.json ? io::pretty(r.certificate) : certificate_table(r.certificate);
  try {
    if (!detail::to_stdout(o.out_path)) {
      io::write_text(o.out_path, io::pretty(r.certificate));
      if (!o.json) s.out << text;
    } else {
      s.out << text;
    }
  } catch (const io::io_error& e) {
    s.err << "certify: " << e.what() << "\n";
    return exit_code::io;
  }
  return r.code;
}

// ---------------------------------------------------------------- search

struct SearchOptions {
  std::size_t n = 2;
  std::optional<std::size_t> target_rank;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::string strategy = "diagonal";
  bool json = false;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

inline constexpr int kSearchSinkhornIterations = 50000;

struct TrialOutcome {
  bool ok = false;
  std::size_t kraus_rank = 0;
  ExtremalityCertificate certificate;
};

/// One sampled channel for trial seed `seed`. Returns nullopt when the
/// sampler fails to produce a UCPT map.
inline std::optional<KrausSet> sample_channel(const std::string& strategy,
                                              std::size_t n, std::uint64_t seed,
                                              const Tolerances& tol) {
  Rng rng(seed);
  if (strategy == "diagonal") {
    const auto a = static_cast<std::size_t>(rng.integer(1, static_cast<long long>(n)));
    return random_diagonal_ucpt(a, n, rng.integer(0, INT64_MAX));
  }
  // Perturbation: a known extremal map (identity for n = 2), padded with
  // up to two zero operators, shifted by Gaussian noise of log-uniform size
  // in [1e-2, 0.5], then made UCPT again. Rescaling converges slowly near a
  // unitary channel (roughly like 1 - sigma^2 per step), hence the floor on
  // sigma and the generous iteration budget.
  std::vector<Matrix> ops;
  if (n >= 3) {
    const KrausSet base = construct_general(n);
    ops.assign(base.begin(), base.end());
  } else {
    ops.push_back(Matrix::identity(n));
  }
  const auto extra = static_cast<std::size_t>(rng.integer(0, 2));
  for (std::size_t i = 0; i < extra; ++i) ops.emplace_back(n, n);
  const double sigma = std::pow(10.0, -2.0 + std::log10(50.0) * rng.uniform());
  for (auto& v : ops) v += gaussian_matrix(n, n, rng) * sigma;
  try {
    return sinkhorn_normalize(std::move(ops), n, tol, kSearchSinkhornIterations);
  } catch (const numerical_error&) {
    return std::nullopt;
  }
}

inline io::json run_search(const SearchOptions& o, const Tolerances& tol) {
  std::vector<TrialOutcome> results(o.trials);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t t = begin; t < o.trials; t += stride) {
      auto ks = sample_channel(o.strategy, o.n, derive_seed(o.seed, t), tol);
      if (!ks || !validate_ucpt(*ks, tol).is_ucpt) continue;
      const KrausSet reduced = reduce_to_independent(*ks, tol);
      results[t] = {true, reduced.size(), ls_bi_independence(reduced, tol)};
    }
  };
  unsigned threads = o.threads != 0 ? o.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(o.trials)));
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(work, i, threads);
    work(0, threads);
  }

  std::size_t hits = 0, failed = 0, max_rank = 0;
  std::optional<std::size_t> best;
  std::map<std::string, std::size_t> histogram;
  for (std::size_t t = 0; t < o.trials; ++t) {
    const auto& r = results[t];
    if (!r.ok) {
      ++failed;
      continue;
    }
    if (!r.certificate.is_extremal) continue;
    ++hits;
    ++histogram[std::to_string(r.kraus_rank)];
    if (!best || r.kraus_rank > max_rank) {
      best = t;
      max_rank = r.kraus_rank;
    }
  }
  io::json report;
  report["n"] = o.n;
  report["strategy"] = o.strategy;
  report["trials"] = o.trials;
  report["seed"] = o.seed;
  report["failed_trials"] = failed;
  report["extremal_hits"] = hits;
  report["extremal_rank_histogram"] = histogram;
  report["max_extremal_rank"] = max_rank;
  report["rank_bound"] = rank_bound(static_cast<long long>(o.n));
  report["tolerances"] = io::to_json(tol);
  if (best) {
    report["best_trial"] = *best;
    report["best_certificate"] = io::to_json(results[*best].certificate);
  } else {
    report["best_trial"] = nullptr;
    report["best_certificate"] = nullptr;
  }
  if (o.target_rank) {
    report["target_rank"] = *o.target_rank;
    report["target_reached"] = max_rank >= *o.target_rank;
  } else {
    report["target_rank"] = nullptr;
    report["target_reached"] = nullptr;
  }
  return report;
}

inline int cmd_search(const SearchOptions& o, const Tolerances& tol, Streams s) {
  if (o.n < 2 || o.trials < 1) {
    s.err << "search: need n >= 2 and trials >= 1\n";
    return exit_code::invalid;
  }
  if (o.strategy != "diagonal" && o.strategy != "perturbation") {
    s.err << "search: unknown strategy \"" << o.strategy << "\"\n";
    return exit_code::invalid;
  }
  const io::json r = run_search(o, tol);
  if (o.json) {
    s.out << io::pretty(r);
  } else {
    s.out << "n " << o.n << ", strategy " << o.strategy << ", " << o.trials
          << " trials, seed " << o.seed << "\n"
          << "extremal hits      " << r["extremal_hits"].get<std::size_t>() << "\n"
          << "max extremal rank  " << r["max_extremal_rank"].get<std::size_t>()
          << "  (bound " << r["rank_bound"].get<std::size_t>() << ")\n";
    for (const auto& [rank, count] : r["extremal_rank_histogram"].items())
      s.out << "  rank " << rank << ": " << count.get<std::size_t>() << "\n";
    if (r["failed_trials"].get<std::size_t>() > 0)
      s.out << "failed trials      " << r["failed_trials"].get<std::size_t>() << "\n";
  }
  if (o.target_rank && !r["target_reached"].get<bool>()) return exit_code::negative;
  return exit_code::ok;
}

// ---------------------------------------------------------------- roundtrip

struct RoundtripResult {
  std::string direction;
  double residual = 0.0;
};

/// Kraus input: choi -> kraus_from_state -> choi, compared with the first
/// Choi matrix. Density input: kraus_from_state -> choi, compared with the
/// input. Throws io::parse_error on unusable input.
inline RoundtripResult roundtrip_document(const io::json& doc, const Tolerances& tol) {
  const io::Document parsed = io::document_from_json(doc);
  std::size_t n = 0;
  Matrix start;
  RoundtripResult r;
  if (const auto* k = std::get_if<KrausSet>(&parsed)) {
    n = k->n();
    start = choi(*k);
    r.direction = "choi -> kraus_from_state -> choi";
  } else {
    const auto& d = std::get<io::DensityFile>(parsed);
    n = d.n;
    start = d.density;
    if (hermitian_defect(start) > tol.residual_abs_tol) {
      throw io::parse_error("density matrix is not Hermitian");
    }
    r.direction = "kraus_from_state -> choi";
  }
  const MarginalState s(n, start, tol);
  if (!validate_marginal(s, tol).is_marginal_tracial) {
    throw io::parse_error("input is not UCPT / marginal tracial");
  }
  r.residual = frobenius_distance(choi(kraus_from_state(s, tol)), start);
  return r;
}

inline int cmd_roundtrip(const std::string& in_path, const Tolerances& tol, Streams s) {
  RoundtripResult r;
  try {
    r = roundtrip_document(io::read_json(in_path), tol);
  } catch (const io::io_error& e) {
    s.err << "roundtrip: " << e.what() << "\n";
    return exit_code::io;
  } catch (const io::parse_error& e) {
    s.err << "roundtrip: " << in_path << ": " << e.what() << "\n";
    return exit_code::parse;
  }
  std::ostringstream v;
  v << std::scientific << std::setprecision(3) << r.residual;
  s.out << r.direction << "\nresidual " << v.str() << "\n";
  return r.residual < kRoundtripThreshold ? exit_code::ok : exit_code::negative;
}

// ---------------------------------------------------------------- bound

/// Largest state rank among extremal marginal tracial states, where known.
inline std::optional<std::size_t> known_max_rank(std::size_t n) {
  switch (n) {
    case 1: return 1;
    case 2: return 1;
    case 3: return 4;
    case 4: return 5;
    default: return std::nullopt;
  }
}

inline int cmd_bound(long long n, bool json, Streams s) {
  if (n < 1) {
    s.err << "bound: n must be >= 1\n";
    return exit_code::invalid;
  }
  const auto un = static_cast<std::size_t>(n);
  const std::size_t upper = rank_bound(n);
  // construct_general(n) is extremal of rank n for n >= 3.
  const std::size_t lower = un >= 3 ? un : 1;
  const auto known = known_max_rank(un);
  if (json) {
    io::json r{{"n", un}, {"rank_bound", upper}, {"lower_bound", std::max(lower, known.value_or(0))}};
    r["known_max_rank"] = known ? io::json(*known) : io::json(nullptr);
    s.out << io::pretty(r);
  } else {
    s.out << "n " << un << "\nupper bound  " << upper << "  (floor sqrt(2n^2 - 1))\n"
          << "lower bound  " << std::max(lower, known.value_or(0)) << "\n";
    if (known) s.out << "known max    " << *known << "\n";
  }
  return exit_code::ok;
}

}  // namespace mts::cli
