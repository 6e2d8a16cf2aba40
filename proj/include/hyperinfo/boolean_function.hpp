#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <iterator>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hyperinfo {

inline constexpr int kMaxDenseDimension = 20;

/*
 * Bit-packed truth table of a {-1,+1}-valued function on the n-cube.
 *
 * Point-index convention: for point index m, bit i of m equals b in {0,1}
 * iff coordinate x_{i+1} = (-1)^b. Index 0 is the all-(+1) vertex.
 * A set table bit means the function value is +1 at that point.
 */
class BooleanFunction {
public:
  BooleanFunction() = default;

  explicit BooleanFunction(int n) : n_(check_dimension(n)), words_(word_count(n), 0) {}

  static BooleanFunction constant(int n, int value) {
    BooleanFunction b(n);
    if (value == 1) {
      for (auto& w : b.words_) w = ~std::uint64_t{0};
      b.mask_tail();
    } else if (value != -1) {
      throw std::invalid_argument("constant: value must be +1 or -1");
    }
    return b;
  }

  // b(x) = x_coord, coord in 1..n. Value +1 where the coordinate bit is 0.
  static BooleanFunction dictator(int n, int coord = 1) {
    BooleanFunction b(n);
    check_coord(coord, n);
    const std::int64_t bit = std::int64_t{1} << (coord - 1);
    for (std::int64_t m = 0; m < b.size(); ++m)
      if ((m & bit) == 0) b.set_bit(m, true);
    return b;
  }

  static BooleanFunction parity(int n) {
    BooleanFunction b(n);
    for (std::int64_t m = 0; m < b.size(); ++m)
      if (std::popcount(static_cast<std::uint64_t>(m)) % 2 == 0) b.set_bit(m, true);
    return b;
  }

  // Strict majority of the coordinates; n must be odd.
  static BooleanFunction majority(int n) {
    if (n % 2 == 0) throw std::invalid_argument("majority: n must be odd");
    BooleanFunction b(n);
    for (std::int64_t m = 0; m < b.size(); ++m)
      if (2 * std::popcount(static_cast<std::uint64_t>(m)) < n) b.set_bit(m, true);
    return b;
  }

  static BooleanFunction from_packed(int n, std::uint64_t table) {
    if (n > 6) throw std::invalid_argument("from_packed: n must be <= 6");
    BooleanFunction b(n);
    b.words_[0] = table;
    b.mask_tail();
    return b;
  }

  // Characters in point-index order: position m is '1' iff b(m) = +1.
  static BooleanFunction from_string(int n, std::string_view bits) {
    BooleanFunction b(n);
    if (std::ssize(bits) != b.size())
      throw std::invalid_argument("from_string: expected 2^n characters");
    for (std::int64_t m = 0; m < b.size(); ++m) {
      if (bits[static_cast<std::size_t>(m)] == '1')
        b.set_bit(m, true);
      else if (bits[static_cast<std::size_t>(m)] != '0')
        throw std::invalid_argument("from_string: characters must be '0' or '1'");
    }
    return b;
  }

  int dimension() const { return n_; }
  std::int64_t size() const { return std::int64_t{1} << n_; }

  bool bit(std::int64_t m) const {
    check_index(m);
    return (words_[static_cast<std::size_t>(m >> 6)] >> (m & 63)) & 1;
  }

  int value(std::int64_t m) const { return bit(m) ? 1 : -1; }

  void set_bit(std::int64_t m, bool one) {
    check_index(m);
    const std::uint64_t mask = std::uint64_t{1} << (m & 63);
    auto& w = words_[static_cast<std::size_t>(m >> 6)];
    w = one ? (w | mask) : (w & ~mask);
  }

  std::int64_t count_ones() const {
    std::int64_t c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }

  std::uint64_t packed() const {
    if (n_ > 6) throw std::logic_error("packed: table does not fit one word");
    return words_[0];
  }

  std::string to_string() const {
    std::string s(static_cast<std::size_t>(size()), '0');
    for (std::int64_t m = 0; m < size(); ++m)
      if (bit(m)) s[static_cast<std::size_t>(m)] = '1';
    return s;
  }

  BooleanFunction negated() const {
    BooleanFunction b = *this;
    for (auto& w : b.words_) w = ~w;
    b.mask_tail();
    return b;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const BooleanFunction& a, const BooleanFunction& b) {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }

  // Numeric order of the packed table (high point index most significant);
  // equals lexicographic order of truth tables printed highest point first.
  friend std::strong_ordering operator<=>(const BooleanFunction& a, const BooleanFunction& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    for (std::size_t i = a.words_.size(); i-- > 0;)
      if (auto c = a.words_[i] <=> b.words_[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }

private:
  static int check_dimension(int n) {
    if (n < 1 || n > kMaxDenseDimension)
      throw std::invalid_argument("dimension must be in [1, 20]");
    return n;
  }

  static void check_coord(int coord, int n) {
    if (coord < 1 || coord > n) throw std::out_of_range("coordinate out of range");
  }

  static std::size_t word_count(int n) {
    return static_cast<std::size_t>(((std::int64_t{1} << n) + 63) >> 6);
  }

  void check_index(std::int64_t m) const {
    if (m < 0 || m >= size()) throw std::out_of_range("point index out of range");
  }

  void mask_tail() {
    if (n_ < 6) words_.back() &= (std::uint64_t{1} << size()) - 1;
  }

  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace hyperinfo
