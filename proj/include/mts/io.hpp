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


// JSON files for Kraus sets, density matrices and certificates.
//
// Complex entries are [re, im] pairs. Objects are written with keys in
// lexicographic order (nlohmann::json's default std::map storage), and the
// canonical form of a document is its compact dump in that order. Digests are
// SHA-256 over the canonical form, so whitespace and key order in an input
// file do not affect them.

#pragma once

#include <openssl/evp.h>

#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "mts/channel.hpp"
#include "mts/extremality.hpp"
#include "mts/linalg.hpp"
#include "mts/state.hpp"

namespace mts::io {

using json = nlohmann::json;

inline constexpr const char* kFormatVersion = "1";

/// The file exists but its content is not a valid document.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The file could not be read or written.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j)
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols,
                               const std::string& what) {
  if (!j.is_array() || j.size() != rows) {
    throw parse_error(what + ": expected " + std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != cols) {
      throw parse_error(what + ": row " + std::to_string(r) + " must have " +
                        std::to_string(cols) + " entries");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const json& z = row[c];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() ||
          !z[1].is_number()) {
        throw parse_error(what + ": entries must be [re, im] number pairs");
      }
      const double re = z[0].get<double>();
      const double im = z[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im)) {
        throw parse_error(what + ": non-finite entry");
      }
      m(r, c) = complex(re, im);
    }
  }
  return m;
}

inline json kraus_to_json(const KrausSet& ks) {
  json ops = json::array();
  for (const auto& v : ks) ops.push_back(to_json(v));
  return {{"version", kFormatVersion}, {"n", ks.n()}, {"operators", ops}};
}

inline json density_to_json(std::size_t n, const Matrix& d) {
  return {{"version", kFormatVersion}, {"n", n}, {"density", to_json(d)}};
}

namespace detail {

inline std::size_t read_header(const json& doc) {
  if (!doc.is_object()) throw parse_error("document must be a JSON object");
  if (!doc.contains("version") || !doc["version"].is_string()) {
    throw parse_error("missing string field \"version\"");
  }
  if (doc["version"].get<std::string>() != kFormatVersion) {
    throw parse_error("unrecognized version \"" +
                      doc["version"].get<std::string>() + "\"");
  }
  if (!doc.contains("n") || !doc["n"].is_number_unsigned() ||
      doc["n"].get<std::size_t>() == 0) {
    throw parse_error("field \"n\" must be a positive integer");
  }
  return doc["n"].get<std::size_t>();
}

}  // namespace detail

inline KrausSet kraus_from_json(const json& doc) {
  const std::size_t n = detail::read_header(doc);
  if (!doc.contains("operators") || !doc["operators"].is_array() ||
      doc["operators"].empty()) {
    throw parse_error("field \"operators\" must be a non-empty array");
  }
  std::vector<Matrix> ops;
  for (std::size_t i = 0; i < doc["operators"].size(); ++i)
    ops.push_back(matrix_from_json(doc["operators"][i], n, n,
                                   "operators[" + std::to_string(i) + "]"));
  try {
    return KrausSet(n, std::move(ops));
  } catch (const std::invalid_argument& e) {
    throw parse_error(e.what());
  }
}

struct DensityFile {
  std::size_t n = 0;
  Matrix density;
};

inline DensityFile density_from_json(const json& doc) {
  const std::size_t n = detail::read_header(doc);
  if (!doc.contains("density")) throw parse_error("missing field \"density\"");
  return {n, matrix_from_json(doc["density"], n * n, n * n, "density")};
}

/// A Kraus file has "operators", a density file has "density".
using Document = std::variant<KrausSet, DensityFile>;

inline Document document_from_json(const json& doc) {
  if (doc.is_object() && doc.contains("operators") && doc.contains("density")) {
    throw parse_error("document has both \"operators\" and \"density\"");
  }
  if (doc.is_object() && doc.contains("density")) return density_from_json(doc);
  return kraus_from_json(doc);
}

inline std::string canonical_dump(const json& doc) { return doc.dump(); }

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256: digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

inline std::string digest(const json& doc) {
  return "sha256:" + sha256_hex(canonical_dump(doc));
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw io_error("error reading " + path);
  return ss.str();
}

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what());
  }
}

inline json read_json(const std::string& path) { return parse_text(read_text(path)); }

/// Pretty-printed (two-space indent, sorted keys) with a trailing newline.
inline std::string pretty(const json& doc) { return doc.dump(2) + "\n"; }

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw io_error("error writing " + path);
}

inline json to_json(const Tolerances& t) {
  return {{"rank_rel_tol", t.rank_rel_tol},
          {"residual_abs_tol", t.residual_abs_tol},
          {"eig_off_diag_tol", t.eig_off_diag_tol},
          {"eig_max_sweeps", t.eig_max_sweeps}};
}

inline json to_json(const UcptReport& r) {
  return {{"unital_residual", r.unital_residual},
          {"trace_residual", r.trace_residual},
          {"is_ucpt", r.is_ucpt},
          {"kraus_count_reduced", r.kraus_count_reduced}};
}

inline json to_json(const MarginalReport& r) {
  return {{"pt_first_residual", r.pt_first_residual},
          {"pt_second_residual", r.pt_second_residual},
          {"psd_defect", r.psd_defect},
          {"trace_defect", r.trace_defect},
          {"is_marginal_tracial", r.is_marginal_tracial}};
}

inline json to_json(const ExtremalityCertificate& c) {
  return {{"method", to_string(c.method)},
          {"n", c.n},
          {"k_or_r", c.k_or_r},
          {"stacked_rows", c.stacked_rows},
          {"stacked_cols", c.stacked_cols},
          {"achieved_rank", c.achieved_rank},
          {"required_rank", c.required_rank},
          {"is_extremal", c.is_extremal},
          {"tolerance_used", c.tolerance_used}};
}

}  // namespace mts::io
