#include "lpfd/relation.hpp"

#include <bit>
#include <stdexcept>

namespace lpfd {

bit_rel::bit_rel(std::size_t n, bool diagonal)
    : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {
  if (diagonal)
    for (std::size_t i = 0; i < n_; ++i) set(i, i);
}

bit_rel bit_rel::full(std::size_t n) {
  bit_rel r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t w = 0; w < r.words_; ++w) r.row(i)[w] = ~0ull;
  // mask tail bits past n
  if (n % 64) {
    std::uint64_t mask = (1ull << (n % 64)) - 1;
    for (std::size_t i = 0; i < n; ++i) r.row(i)[r.words_ - 1] &= mask;
  }
  return r;
}

bit_rel& bit_rel::intersect(const bit_rel& o) {
  if (o.n_ != n_) throw std::invalid_argument("bit_rel::intersect: size mismatch");
  for (std::size_t k = 0; k < bits_.size(); ++k) bits_[k] &= o.bits_[k];
  return *this;
}

bit_rel bit_rel::converse() const {
  bit_rel r(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for_each_successor(i, [&](std::size_t j) { r.set(j, i); });
  return r;
}

bit_rel bit_rel::strict_part() const {
  bit_rel r(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for_each_successor(i, [&](std::size_t j) {
      if (!at(j, i)) r.set(i, j);
    });
  return r;
}

bit_rel bit_rel::symmetric_core() const {
  bit_rel r = converse();
  r.intersect(*this);
  return r;
}

void bit_rel::reflexive_close() {
  for (std::size_t i = 0; i < n_; ++i) set(i, i);
}

void bit_rel::symmetric_close() {
  for (std::size_t i = 0; i < n_; ++i)
    for_each_successor(i, [&](std::size_t j) { set(j, i); });
}

void bit_rel::transitive_close() {
  // Warshall with bitset rows: if i reaches k, i also reaches everything k does.
  for (std::size_t k = 0; k < n_; ++k)
    for (std::size_t i = 0; i < n_; ++i)
      if (at(i, k))
        for (std::size_t w = 0; w < words_; ++w) row(i)[w] |= row(k)[w];
}

bool bit_rel::is_reflexive() const {
  for (std::size_t i = 0; i < n_; ++i)
    if (!at(i, i)) return false;
  return true;
}

bool bit_rel::is_symmetric() const {
  for (std::size_t i = 0; i < n_; ++i) {
    bool ok = true;
    for_each_successor(i, [&](std::size_t j) {
      if (!at(j, i)) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

bool bit_rel::is_transitive() const {
  for (std::size_t i = 0; i < n_; ++i) {
    bool ok = true;
    for_each_successor(i, [&](std::size_t k) {
      if (!ok) return;
      // row(i) must cover row(k)
      for (std::size_t w = 0; w < words_; ++w)
        if (row(k)[w] & ~row(i)[w]) {
          ok = false;
          return;
        }
    });
    if (!ok) return false;
  }
  return true;
}

bool bit_rel::is_total() const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j)
      if (!at(i, j) && !at(j, i)) return false;
  return true;
}

std::size_t bit_rel::pair_count() const {
  std::size_t c = 0;
  for (std::uint64_t w : bits_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::vector<std::vector<std::size_t>> bit_rel::cells() const {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> seen(n_, false);
  for (std::size_t i = 0; i < n_; ++i) {
    if (seen[i]) continue;
    std::vector<std::size_t> cell;
    for_each_successor(i, [&](std::size_t j) {
      cell.push_back(j);
      seen[j] = true;
    });
    if (cell.empty()) cell.push_back(i);  // tolerate non-reflexive input
    seen[i] = true;
    out.push_back(std::move(cell));
  }
  return out;
}

}  // namespace lpfd
