#pragma once

// Systematic (n, k, m) MDS array code over GF(2^8).
//
// Layout: node i (1-based) stores one column of m symbols. Nodes 1..k hold the
// data columns verbatim, nodes k+1..n hold parity. Every row of the array is an
// independent codeword of a scalar [n, k] MDS code, so decoding a row is one
// k x k solve and all m rows share the same inverse.
//
// Node ids are 1-based at this API boundary and 0-based inside.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mdsaccel/errors.hpp"
#include "mdsaccel/gf256.hpp"

namespace mdsaccel {

using Column = std::vector<std::uint8_t>;

class CodeParams {
 public:
  CodeParams(std::size_t n, std::size_t k, std::size_t m) : n_(n), k_(k), m_(m) {
    if (k < 1 || k >= n || n > 255)
      throw InvalidParams("code params require 1 <= k < n <= 255, got n=" + std::to_string(n) +
                          " k=" + std::to_string(k));
    if (m < 1) throw InvalidParams("sub-packetization m must be >= 1");
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t m() const noexcept { return m_; }
  std::size_t r() const noexcept { return n_ - k_; }
  double rate() const noexcept { return static_cast<double>(k_) / static_cast<double>(n_); }

  friend bool operator==(const CodeParams&, const CodeParams&) = default;

 private:
  std::size_t n_;
  std::size_t k_;
  std::size_t m_;
};

/// Square matrix over GF(2^8), row-major. Only what the codec needs.
class GfMatrix {
 public:
  explicit GfMatrix(std::size_t dim) : dim_(dim), cells_(dim * dim, 0) {}

  static GfMatrix identity(std::size_t dim) {
    GfMatrix id(dim);
    for (std::size_t i = 0; i < dim; ++i) id(i, i) = 1;
    return id;
  }

  std::size_t dim() const noexcept { return dim_; }
  std::uint8_t& operator()(std::size_t row, std::size_t col) { return cells_[row * dim_ + col]; }
  std::uint8_t operator()(std::size_t row, std::size_t col) const { return cells_[row * dim_ + col]; }

  /// Gauss-Jordan inversion. Returns false when the matrix is singular.
  bool invert_in_place() {
    GfMatrix inv = identity(dim_);
    GfMatrix& a = *this;
    for (std::size_t col = 0; col < dim_; ++col) {
      std::size_t pivot = col;
      while (pivot < dim_ && a(pivot, col) == 0) ++pivot;
      if (pivot == dim_) return false;
      if (pivot != col) {
        for (std::size_t j = 0; j < dim_; ++j) {
          std::swap(a(col, j), a(pivot, j));
          std::swap(inv(col, j), inv(pivot, j));
        }
      }
      const std::uint8_t scale = gf256::inv(gf256::FieldElem(a(col, col))).value();
      for (std::size_t j = 0; j < dim_; ++j) {
        a(col, j) = gf256::mul(a(col, j), scale);
        inv(col, j) = gf256::mul(inv(col, j), scale);
      }
      for (std::size_t row = 0; row < dim_; ++row) {
        const std::uint8_t factor = a(row, col);
        if (row == col || factor == 0) continue;
        for (std::size_t j = 0; j < dim_; ++j) {
          a(row, j) ^= gf256::mul(factor, a(col, j));
          inv(row, j) ^= gf256::mul(factor, inv(col, j));
        }
      }
    }
    *this = std::move(inv);
    return true;
  }

 private:
  std::size_t dim_;
  std::vector<std::uint8_t> cells_;
};

/// k x n systematic generator [I | C]. C is a Cauchy block
/// C[i][j] = 1 / (u_i + v_j) with u_i = i and v_j = k + j (0-based), except
/// that a single parity column is all ones so r = 1 reduces to plain XOR parity.
class Generator {
 public:
  explicit Generator(const CodeParams& params)
      : k_(params.k()), n_(params.n()), cells_(params.k() * params.n(), 0) {
    for (std::size_t i = 0; i < k_; ++i) at(i, i) = 1;
    if (params.r() == 1) {
      for (std::size_t i = 0; i < k_; ++i) at(i, k_) = 1;
      return;
    }
    for (std::size_t i = 0; i < k_; ++i) {
      for (std::size_t j = 0; j < params.r(); ++j) {
        const auto u = static_cast<std::uint8_t>(i);
        const auto v = static_cast<std::uint8_t>(k_ + j);
        at(i, k_ + j) = gf256::inv(gf256::FieldElem(static_cast<std::uint8_t>(u ^ v))).value();
      }
    }
  }

  std::size_t k() const noexcept { return k_; }
  std::size_t n() const noexcept { return n_; }

  /// Coefficient of data column `data_idx` in node column `node_idx` (both 0-based).
  std::uint8_t coeff(std::size_t data_idx, std::size_t node_idx) const {
    return cells_[data_idx * n_ + node_idx];
  }

  /// The k x k submatrix formed by the given node columns (0-based).
  GfMatrix submatrix(std::span<const std::size_t> node_idx) const {
    GfMatrix sub(k_);
    for (std::size_t i = 0; i < k_; ++i)
      for (std::size_t s = 0; s < k_; ++s) sub(i, s) = coeff(i, node_idx[s]);
    return sub;
  }

 private:
  std::uint8_t& at(std::size_t i, std::size_t j) { return cells_[i * n_ + j]; }

  std::size_t k_;
  std::size_t n_;
  std::vector<std::uint8_t> cells_;
};

inline Generator build_generator(const CodeParams& params) { return Generator(params); }

/// All n node columns of an encoded stripe.
struct CodeArray {
  std::vector<Column> columns;

  const Column& node(std::size_t id) const { return columns.at(id - 1); }
};

/// Symbols read from a set of nodes. ids are 1-based and pair up with columns.
struct NodeColumns {
  std::vector<std::size_t> ids;
  std::vector<Column> columns;
};

class Codec {
 public:
  explicit Codec(CodeParams params) : params_(params), generator_(params) {}

  const CodeParams& params() const noexcept { return params_; }
  const Generator& generator() const noexcept { return generator_; }

  CodeArray encode(std::span<const Column> data) const {
    if (data.size() != params_.k())
      throw ShapeError("encode expects " + std::to_string(params_.k()) + " data columns, got " +
                       std::to_string(data.size()));
    for (const auto& col : data)
      if (col.size() != params_.m())
        throw ShapeError("encode expects columns of " + std::to_string(params_.m()) + " symbols");

    CodeArray out;
    out.columns.assign(data.begin(), data.end());
    out.columns.resize(params_.n(), Column(params_.m(), 0));
    for (std::size_t p = params_.k(); p < params_.n(); ++p) {
      Column& parity = out.columns[p];
      for (std::size_t i = 0; i < params_.k(); ++i) {
        const std::uint8_t c = generator_.coeff(i, p);
        for (std::size_t row = 0; row < params_.m(); ++row)
          parity[row] ^= gf256::mul(c, data[i][row]);
      }
    }
    return out;
  }

  /// Reconstructs the k data columns from any k node columns.
  std::vector<Column> decode_from(const NodeColumns& read) const {
    const auto idx = check_subset(read);
    const GfMatrix inverse = invert_for(idx);
    std::vector<Column> data(params_.k(), Column(params_.m(), 0));
    for (std::size_t i = 0; i < params_.k(); ++i) {
      for (std::size_t s = 0; s < params_.k(); ++s) {
        const std::uint8_t w = inverse(s, i);
        if (w == 0) continue;
        const Column& src = read.columns[s];
        for (std::size_t row = 0; row < params_.m(); ++row) data[i][row] ^= gf256::mul(w, src[row]);
      }
    }
    return data;
  }

  /// Symbols of node `target` (1-based) from any k node columns. A target that
  /// was itself read is returned verbatim.
  Column recover_node(const NodeColumns& read, std::size_t target) const {
    if (target < 1 || target > params_.n())
      throw SubsetError("target node " + std::to_string(target) + " outside [1, n]");
    const auto idx = check_subset(read);
    for (std::size_t s = 0; s < idx.size(); ++s)
      if (idx[s] == target - 1) return read.columns[s];

    // Weights w = G_S^{-1} g_t give node t's symbols as a combination of the read columns.
    const GfMatrix inverse = invert_for(idx);
    std::vector<std::uint8_t> weights(params_.k(), 0);
    for (std::size_t s = 0; s < params_.k(); ++s)
      for (std::size_t i = 0; i < params_.k(); ++i)
        weights[s] ^= gf256::mul(inverse(s, i), generator_.coeff(i, target - 1));

    Column out(params_.m(), 0);
    for (std::size_t s = 0; s < params_.k(); ++s) {
      if (weights[s] == 0) continue;
      for (std::size_t row = 0; row < params_.m(); ++row)
        out[row] ^= gf256::mul(weights[s], read.columns[s][row]);
    }
    return out;
  }

 private:
  std::vector<std::size_t> check_subset(const NodeColumns& read) const {
    if (read.ids.size() != params_.k() || read.columns.size() != params_.k())
      throw SubsetError("expected exactly k=" + std::to_string(params_.k()) + " node columns, got " +
                        std::to_string(read.ids.size()));
    std::vector<std::size_t> idx;
    idx.reserve(read.ids.size());
    std::vector<bool> seen(params_.n(), false);
    for (std::size_t s = 0; s < read.ids.size(); ++s) {
      const std::size_t id = read.ids[s];
      if (id < 1 || id > params_.n())
        throw SubsetError("node id " + std::to_string(id) + " outside [1, n]");
      if (seen[id - 1]) throw SubsetError("duplicate node id " + std::to_string(id));
      seen[id - 1] = true;
      if (read.columns[s].size() != params_.m())
        throw ShapeError("node " + std::to_string(id) + " column has wrong symbol count");
      idx.push_back(id - 1);
    }
    return idx;
  }

  GfMatrix invert_for(std::span<const std::size_t> idx) const {
    GfMatrix sub = generator_.submatrix(idx);
    // Every k x k submatrix of a Cauchy-systematic generator is invertible.
    if (!sub.invert_in_place()) throw std::logic_error("singular generator submatrix");
    return sub;
  }

  CodeParams params_;
  Generator generator_;
};

inline CodeArray encode(const CodeParams& params, std::span<const Column> data) {
  return Codec(params).encode(data);
}

inline std::vector<Column> decode_from(const CodeParams& params, const NodeColumns& read) {
  return Codec(params).decode_from(read);
}

inline Column recover_node(const CodeParams& params, const NodeColumns& read, std::size_t target) {
  return Codec(params).recover_node(read, target);
}

}  // namespace mdsaccel
