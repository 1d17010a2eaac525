#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ted/value.hpp"

namespace ted {

/// Row-major rectangular matrix of Values, 0-based. Used at kernel level
/// and as the dense shadow of a MonotoneMatrix in tests.
class DenseBlock {
 public:
  DenseBlock() = default;
  DenseBlock(int rows, int cols, Value fill = kNegInf)
      : rows_(rows), cols_(cols), data_(checked_size(rows, cols), fill) {}

  [[nodiscard]] int rows() const noexcept { return rows_; }
  [[nodiscard]] int cols() const noexcept { return cols_; }

  Value& at(int r, int c) { return data_[index(r, c)]; }
  [[nodiscard]] Value at(int r, int c) const { return data_[index(r, c)]; }

  /// Unchecked access for inner loops.
  Value* row(int r) noexcept { return data_.data() + static_cast<std::size_t>(r) * cols_; }
  [[nodiscard]] const Value* row(int r) const noexcept {
    return data_.data() + static_cast<std::size_t>(r) * cols_;
  }

  /// Copy of the sub-block [r0, r0 + nr) x [c0, c0 + nc).
  [[nodiscard]] DenseBlock block(int r0, int c0, int nr, int nc) const {
    if (r0 < 0 || c0 < 0 || nr < 0 || nc < 0 || r0 + nr > rows_ || c0 + nc > cols_) {
      throw std::out_of_range("DenseBlock::block out of range");
    }
    DenseBlock out(nr, nc);
    for (int r = 0; r < nr; ++r) {
      const Value* src = row(r0 + r) + c0;
      std::copy(src, src + nc, out.row(r));
    }
    return out;
  }

  /// Writes `src` into this block with its top-left corner at (r0, c0).
  void paste(const DenseBlock& src, int r0, int c0) {
    if (r0 < 0 || c0 < 0 || r0 + src.rows_ > rows_ || c0 + src.cols_ > cols_) {
      throw std::out_of_range("DenseBlock::paste out of range");
    }
    for (int r = 0; r < src.rows_; ++r) {
      std::copy(src.row(r), src.row(r) + src.cols_, row(r0 + r) + c0);
    }
  }

  friend bool operator==(const DenseBlock&, const DenseBlock&) = default;

 private:
  static std::size_t checked_size(int rows, int cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("DenseBlock: negative dimension");
    return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  }
  [[nodiscard]] std::size_t index(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) {
      throw std::out_of_range("DenseBlock index (" + std::to_string(r) + ", " +
                              std::to_string(c) + ") out of range");
    }
    return static_cast<std::size_t>(r) * cols_ + c;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<Value> data_;
};

}  // namespace ted
