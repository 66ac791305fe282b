#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace deeprules {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

/// Mask selecting the valid bits of the last word of a `bits`-long row.
constexpr Word tail_mask(std::size_t bits) {
  const std::size_t rem = bits % kWordBits;
  return rem == 0 ? ~Word{0} : (Word{1} << rem) - 1;
}

/// Packed vector of bits. Bits beyond size() are kept zero.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size, bool value = false);

  static BitVector from_bools(std::initializer_list<int> bits);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool get(std::size_t i) const;
  void set(std::size_t i, bool value);
  bool operator[](std::size_t i) const { return get(i); }

  std::size_t count() const noexcept;

  std::span<const Word> words() const noexcept { return words_; }
  std::span<Word> words() noexcept { return words_; }

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<Word> words_;
};

/// Dense boolean matrix, row-major, one padded word-row per matrix row.
///
/// Every row occupies words_per_row() words; bits beyond cols() in the last
/// word of a row are always zero so word-wide OR/popcount stay exact.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols, bool value = false);

  static BitMatrix identity(std::size_t n);
  /// Builds a matrix from nested 0/1 literals; all rows must have equal length.
  static BitMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t words_per_row() const noexcept { return stride_; }

  bool get(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, bool value);
  void flip(std::size_t r, std::size_t c);

  std::span<const Word> row(std::size_t r) const;
  std::span<Word> row(std::size_t r);

  /// Number of true elements.
  std::size_t count() const noexcept;
  bool row_any(std::size_t r) const;

  BitMatrix transposed() const;
  BitVector column(std::size_t c) const;

  std::string to_string() const;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  void check(std::size_t r, std::size_t c) const;

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<Word> data_;
};

/// Element-wise complement (J - A).
BitMatrix negate(const BitMatrix& a);

/// Boolean product: result[i][j] = OR_t (a[i][t] AND w[t][j]).
/// Throws std::invalid_argument when a.cols() != w.rows().
BitMatrix bool_multiply(const BitMatrix& a, const BitMatrix& w);

/// One NOR layer of a rule network: bool_multiply(negate(a), w).
BitMatrix nor_layer(const BitMatrix& a, const BitMatrix& w);

}  // namespace deeprules
