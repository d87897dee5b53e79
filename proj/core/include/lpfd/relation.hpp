#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace lpfd {

// A binary relation on {0,...,n-1} stored as n bitset rows.  Small and
// cache-friendly at the model sizes this toolkit works with.
class bit_rel {
public:
  bit_rel() = default;
  explicit bit_rel(std::size_t n, bool diagonal = false);

  static bit_rel full(std::size_t n);

  std::size_t size() const { return n_; }

  bool at(std::size_t i, std::size_t j) const {
    return (row(i)[j >> 6] >> (j & 63)) & 1u;
  }
  void set(std::size_t i, std::size_t j) { row(i)[j >> 6] |= 1ull << (j & 63); }
  void clear(std::size_t i, std::size_t j) { row(i)[j >> 6] &= ~(1ull << (j & 63)); }

  bit_rel& intersect(const bit_rel& o);
  bit_rel converse() const;
  // Pairs (i,j) with i<=j but not j<=i.
  bit_rel strict_part() const;
  // Pairs related both ways.
  bit_rel symmetric_core() const;

  void reflexive_close();
  void symmetric_close();
  void transitive_close();

  bool is_reflexive() const;
  bool is_symmetric() const;
  bool is_transitive() const;
  bool is_total() const;  // i<=j or j<=i for all i,j
  bool is_preorder() const { return is_reflexive() && is_transitive(); }
  bool is_equivalence() const { return is_preorder() && is_symmetric(); }

  bool operator==(const bit_rel&) const = default;

  std::size_t pair_count() const;

  template <typename F>
  void for_each_successor(std::size_t i, F&& f) const {
    const std::uint64_t* r = row(i);
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t bits = r[w];
      while (bits) {
        std::size_t j = (w << 6) + static_cast<std::size_t>(__builtin_ctzll(bits));
        bits &= bits - 1;
        f(j);
      }
    }
  }

  // Partition into equivalence cells; requires an equivalence relation.
  std::vector<std::vector<std::size_t>> cells() const;

private:
  std::uint64_t* row(std::size_t i) { return bits_.data() + i * words_; }
  const std::uint64_t* row(std::size_t i) const { return bits_.data() + i * words_; }

  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

}  // namespace lpfd
