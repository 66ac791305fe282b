#include "deeprules/evaluator.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <stdexcept>

namespace deeprules {

BatchEvaluator::BatchEvaluator(RuleNetwork& net, const BitMatrix& x, const BitVector& y,
                               std::span<const std::size_t> rows)
    : net_(net) {
  load_inputs(x, y, rows);
}

BatchEvaluator::BatchEvaluator(RuleNetwork& net, const BitMatrix& x, const BitVector& y) : net_(net) {
  std::vector<std::size_t> all(x.rows());
  std::iota(all.begin(), all.end(), std::size_t{0});
  load_inputs(x, y, all);
}

void BatchEvaluator::load_inputs(const BitMatrix& x, const BitVector& y, std::span<const std::size_t> rows) {
  if (x.cols() != net_.input_size())
    throw std::invalid_argument("BatchEvaluator: input width does not match the network");
  if (x.rows() != y.size()) throw std::invalid_argument("BatchEvaluator: label count does not match row count");

  rows_ = rows.size();
  words_ = words_for(rows_);
  tail_ = tail_mask(rows_);
  sizes_ = net_.layer_sizes();

  act_.assign(sizes_.size(), {});
  for (std::size_t l = 0; l < sizes_.size(); ++l) act_[l].assign(sizes_[l] * words_, 0);
  labels_.assign(words_, 0);

  // Transpose the selected rows into one bit-column per literal.
  for (std::size_t r = 0; r < rows_; ++r) {
    const std::size_t src = rows[r];
    if (src >= x.rows()) throw std::out_of_range("BatchEvaluator: row index out of range");
    const Word bit = Word{1} << (r % kWordBits);
    const std::size_t w = r / kWordBits;
    const auto row = x.row(src);
    for (std::size_t rw = 0; rw < row.size(); ++rw) {
      for (Word bits = row[rw]; bits != 0; bits &= bits - 1) {
        const std::size_t c = rw * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
        act_[0][c * words_ + w] |= bit;
      }
    }
    if (y.get(src)) labels_[w] |= bit;
  }

  changed_.assign(sizes_.size(), {});
  touched_.assign(sizes_.size(), {});
  for (std::size_t l = 0; l < sizes_.size(); ++l) changed_[l].assign(words_for(sizes_[l]), 0);
  node_buffer_.assign(words_, 0);
  refresh();
}

void BatchEvaluator::rebuild_sources() {
  sources_.clear();
  for (const auto& w : net_.all_weights()) sources_.push_back(w.transposed());
}

void BatchEvaluator::refresh() {
  if (net_.layer_sizes() != sizes_) throw std::logic_error("BatchEvaluator: network structure changed");
  rebuild_sources();
  for (std::size_t i = 0; i + 1 < sizes_.size(); ++i) compute_layer(i, act_[i + 1]);
  scratch_ = act_;
  correct_ = count_correct(node(act_.back(), 0));
}

double BatchEvaluator::accuracy() const noexcept {
  return rows_ == 0 ? 0.0 : static_cast<double>(correct_) / static_cast<double>(rows_);
}

BitVector BatchEvaluator::output() const {
  BitVector out(rows_);
  const Word* o = node(act_.back(), 0);
  std::copy(o, o + words_, out.words().begin());
  return out;
}

void BatchEvaluator::compute_node(std::size_t weight_layer, std::span<const Word> sources,
                                  const std::vector<Word>& inputs, Word* out) const {
  if (words_ == 0) return;
  if (RuleNetwork::is_conjunctive_target(weight_layer)) {
    std::fill(out, out + words_, ~Word{0});
    out[words_ - 1] = tail_;
    for (std::size_t sw = 0; sw < sources.size(); ++sw) {
      for (Word bits = sources[sw]; bits != 0; bits &= bits - 1) {
        const std::size_t j = sw * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
        const Word* in = node(inputs, j);
        Word any = 0;
        for (std::size_t w = 0; w < words_; ++w) any |= (out[w] &= in[w]);
        if (any == 0) return;
      }
    }
  } else {
    std::fill(out, out + words_, Word{0});
    for (std::size_t sw = 0; sw < sources.size(); ++sw) {
      for (Word bits = sources[sw]; bits != 0; bits &= bits - 1) {
        const std::size_t j = sw * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
        const Word* in = node(inputs, j);
        for (std::size_t w = 0; w < words_; ++w) out[w] |= in[w];
      }
    }
  }
}

void BatchEvaluator::compute_layer(std::size_t weight_layer, std::vector<Word>& target) {
  const BitMatrix& src = sources_[weight_layer];
  for (std::size_t k = 0; k < src.rows(); ++k) compute_node(weight_layer, src.row(k), act_[weight_layer], node(target, k));
}

std::size_t BatchEvaluator::count_correct(const Word* output) const {
  std::size_t n = 0;
  for (std::size_t w = 0; w < words_; ++w) {
    Word agree = ~(output[w] ^ labels_[w]);
    if (w + 1 == words_) agree &= tail_;
    n += static_cast<std::size_t>(std::popcount(agree));
  }
  return n;
}

std::size_t BatchEvaluator::score(const Flip& flip) {
  const std::size_t i = flip.layer;
  if (i >= sources_.size()) throw std::out_of_range("flip layer out of range");
  const BitMatrix& src = sources_[i];
  if (flip.target >= src.rows() || flip.source >= src.cols()) throw std::out_of_range("flip index out of range");

  const auto row = src.row(flip.target);
  flip_sources_.assign(row.begin(), row.end());
  auto toggle = [&](std::size_t j) { flip_sources_[j / kWordBits] ^= Word{1} << (j % kWordBits); };
  toggle(flip.source);
  for (std::size_t c : flip.companions) toggle(c);

  Word* buf = node_buffer_.data();
  compute_node(i, flip_sources_, act_[i], buf);
  const Word* old = node(act_[i + 1], flip.target);
  if (std::equal(buf, buf + words_, old)) return correct_;

  const std::size_t last = sizes_.size() - 1;
  std::copy(buf, buf + words_, node(scratch_[i + 1], flip.target));
  touched_[i + 1].push_back(flip.target);
  changed_[i + 1][flip.target / kWordBits] |= Word{1} << (flip.target % kWordBits);

  std::size_t result = correct_;
  std::size_t layer = i + 1;
  bool alive = true;
  while (alive && layer < last) {
    const std::size_t next = layer + 1;
    const BitMatrix& next_src = sources_[layer];
    const auto& mask = changed_[layer];
    alive = false;
    for (std::size_t m = 0; m < sizes_[next]; ++m) {
      const auto srow = next_src.row(m);
      bool hit = false;
      for (std::size_t w = 0; w < srow.size() && !hit; ++w) hit = (srow[w] & mask[w]) != 0;
      if (!hit) continue;
      compute_node(layer, srow, scratch_[layer], buf);
      if (std::equal(buf, buf + words_, node(act_[next], m))) continue;
      std::copy(buf, buf + words_, node(scratch_[next], m));
      touched_[next].push_back(m);
      changed_[next][m / kWordBits] |= Word{1} << (m % kWordBits);
      alive = true;
    }
    layer = next;
  }
  if (alive) result = count_correct(node(scratch_[last], 0));

  // Roll the overlay back.
  for (std::size_t l = i + 1; l <= last; ++l) {
    for (std::size_t k : touched_[l]) {
      const Word* committed = node(act_[l], k);
      std::copy(committed, committed + words_, node(scratch_[l], k));
    }
    touched_[l].clear();
    std::fill(changed_[l].begin(), changed_[l].end(), Word{0});
  }
  return result;
}

void BatchEvaluator::apply(const Flip& flip) {
  BitMatrix& w = net_.weights(flip.layer);
  w.flip(flip.source, flip.target);
  sources_[flip.layer].flip(flip.target, flip.source);
  for (std::size_t c : flip.companions) {
    w.flip(c, flip.target);
    sources_[flip.layer].flip(flip.target, c);
  }
  for (std::size_t i = flip.layer; i + 1 < sizes_.size(); ++i) compute_layer(i, act_[i + 1]);
  for (std::size_t l = flip.layer + 1; l < sizes_.size(); ++l) scratch_[l] = act_[l];
  correct_ = count_correct(node(act_.back(), 0));
}

}  // namespace deeprules
