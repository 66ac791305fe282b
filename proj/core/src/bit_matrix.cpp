#include "deeprules/bit_matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace deeprules {

BitVector::BitVector(std::size_t size, bool value)
    : size_(size), words_(words_for(size), value ? ~Word{0} : Word{0}) {
  if (value && !words_.empty()) words_.back() &= tail_mask(size_);
}

BitVector BitVector::from_bools(std::initializer_list<int> bits) {
  BitVector v(bits.size());
  std::size_t i = 0;
  for (int b : bits) v.set(i++, b != 0);
  return v;
}

bool BitVector::get(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("BitVector index out of range");
  return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
}

void BitVector::set(std::size_t i, bool value) {
  if (i >= size_) throw std::out_of_range("BitVector index out of range");
  const Word bit = Word{1} << (i % kWordBits);
  if (value)
    words_[i / kWordBits] |= bit;
  else
    words_[i / kWordBits] &= ~bit;
}

std::size_t BitVector::count() const noexcept {
  std::size_t n = 0;
  for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols, bool value)
    : rows_(rows), cols_(cols), stride_(words_for(cols)), data_(rows * stride_, Word{0}) {
  if (value && stride_ > 0) {
    const Word tail = tail_mask(cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      auto words = row(r);
      std::fill(words.begin(), words.end(), ~Word{0});
      words.back() = tail;
    }
  }
}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

BitMatrix BitMatrix::from_rows(std::initializer_list<std::initializer_list<int>> rows) {
  const std::size_t cols = rows.size() == 0 ? 0 : rows.begin()->size();
  BitMatrix m(rows.size(), cols);
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != cols) throw std::invalid_argument("BitMatrix::from_rows: ragged rows");
    std::size_t c = 0;
    for (int v : row) m.set(r, c++, v != 0);
    ++r;
  }
  return m;
}

void BitMatrix::check(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("BitMatrix index out of range");
}

bool BitMatrix::get(std::size_t r, std::size_t c) const {
  check(r, c);
  return (data_[r * stride_ + c / kWordBits] >> (c % kWordBits)) & 1U;
}

void BitMatrix::set(std::size_t r, std::size_t c, bool value) {
  check(r, c);
  const Word bit = Word{1} << (c % kWordBits);
  Word& w = data_[r * stride_ + c / kWordBits];
  w = value ? (w | bit) : (w & ~bit);
}

void BitMatrix::flip(std::size_t r, std::size_t c) {
  check(r, c);
  data_[r * stride_ + c / kWordBits] ^= Word{1} << (c % kWordBits);
}

std::span<const Word> BitMatrix::row(std::size_t r) const {
  if (r >= rows_) throw std::out_of_range("BitMatrix row out of range");
  return {data_.data() + r * stride_, stride_};
}

std::span<Word> BitMatrix::row(std::size_t r) {
  if (r >= rows_) throw std::out_of_range("BitMatrix row out of range");
  return {data_.data() + r * stride_, stride_};
}

std::size_t BitMatrix::count() const noexcept {
  std::size_t n = 0;
  for (Word w : data_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool BitMatrix::row_any(std::size_t r) const {
  const auto words = row(r);
  return std::any_of(words.begin(), words.end(), [](Word w) { return w != 0; });
}

BitMatrix BitMatrix::transposed() const {
  BitMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto words = row(r);
    for (std::size_t w = 0; w < stride_; ++w) {
      for (Word bits = words[w]; bits != 0; bits &= bits - 1) {
        const std::size_t c = w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
        t.set(c, r, true);
      }
    }
  }
  return t;
}

BitVector BitMatrix::column(std::size_t c) const {
  if (c >= cols_) throw std::out_of_range("BitMatrix column out of range");
  BitVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v.set(r, get(r, c));
  return v;
}

std::string BitMatrix::to_string() const {
  std::string s;
  s.reserve(rows_ * (cols_ + 1));
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) s.push_back(get(r, c) ? '1' : '0');
    s.push_back('\n');
  }
  return s;
}

BitMatrix negate(const BitMatrix& a) {
  BitMatrix out = a;
  if (out.words_per_row() == 0) return out;
  const Word tail = tail_mask(a.cols());
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto words = out.row(r);
    for (Word& w : words) w = ~w;
    words.back() &= tail;
  }
  return out;
}

BitMatrix bool_multiply(const BitMatrix& a, const BitMatrix& w) {
  if (a.cols() != w.rows())
    throw std::invalid_argument("bool_multiply: inner dimensions differ (" +
                                std::to_string(a.cols()) + " vs " + std::to_string(w.rows()) + ")");
  BitMatrix out(a.rows(), w.cols());
  const std::size_t out_words = out.words_per_row();
  if (out_words == 0) return out;
  const Word tail = tail_mask(w.cols());

  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto acc = out.row(i);
    const auto lhs = a.row(i);
    bool saturated = false;
    // OR together the rows of w selected by the set bits of a's row; stop
    // once every output bit of the row is already 1.
    for (std::size_t lw = 0; lw < lhs.size() && !saturated; ++lw) {
      for (Word bits = lhs[lw]; bits != 0 && !saturated; bits &= bits - 1) {
        const std::size_t t = lw * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
        const auto rhs = w.row(t);
        bool full = true;
        for (std::size_t k = 0; k < out_words; ++k) {
          acc[k] |= rhs[k];
          const Word want = (k + 1 == out_words) ? tail : ~Word{0};
          full = full && acc[k] == want;
        }
        saturated = full;
      }
    }
  }
  return out;
}

BitMatrix nor_layer(const BitMatrix& a, const BitMatrix& w) {
  if (a.cols() != w.rows())
    throw std::invalid_argument("nor_layer: activation width " + std::to_string(a.cols()) +
                                " does not match weight rows " + std::to_string(w.rows()));
  return bool_multiply(negate(a), w);
}

}  // namespace deeprules
