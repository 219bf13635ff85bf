#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace depthwork {

inline constexpr int kMaxN = 8;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Family { PT, T, I };

int epsilon(Family fam);
std::string_view family_name(Family fam);
Family parse_family(std::string_view s);

// Partial transformation of [n]. Points are 0-based internally; the
// JSON and pretty forms are 1-based. Undefined compares greater than
// every point, so entries order lexicographically with "undefined" last.
class PartialMap {
 public:
  static constexpr std::uint8_t kUndef = 0xFF;

  PartialMap() = default;
  explicit PartialMap(int n);

  static PartialMap identity(int n);
  static PartialMap partial_identity(int n, const std::vector<int>& pts);
  // entries given 1-based, 0 meaning undefined
  static PartialMap from_one_based(int n, std::initializer_list<int> vals);
  static PartialMap from_one_based(int n, const std::vector<int>& vals);
  // blocks: {{domain points...}, image} all 1-based
  static PartialMap from_blocks(
      int n, std::initializer_list<std::pair<std::initializer_list<int>, int>> blocks);
  static PartialMap from_code(int n, std::uint64_t code);

  int n() const { return n_; }
  int at(int x) const { return e_[x] == kUndef ? -1 : e_[x]; }
  bool defined(int x) const { return e_[x] != kUndef; }
  void set(int x, int y) { e_[x] = y < 0 ? kUndef : static_cast<std::uint8_t>(y); }
  void unset(int x) { e_[x] = kUndef; }

  int rank() const;
  int domain_size() const;
  std::vector<int> image() const;
  std::vector<int> domain() const;
  std::vector<int> complement_of_domain() const;
  std::vector<int> complement_of_image() const;
  // classes sorted by least element, each sorted
  std::vector<std::vector<int>> kernel_classes() const;
  std::vector<int> preimage(int y) const;
  bool in_image(int y) const;

  bool is_total() const;
  bool is_injective() const;

  // base-(n+1) code, digit 0 = undefined
  std::uint64_t code() const;
  std::string str() const;

  friend bool operator==(const PartialMap& a, const PartialMap& b) {
    return a.n_ == b.n_ && a.e_ == b.e_;
  }
  friend std::strong_ordering operator<=>(const PartialMap& a, const PartialMap& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.e_ <=> b.e_;
  }

 private:
  std::uint8_t n_ = 0;
  std::array<std::uint8_t, kMaxN> e_{kUndef, kUndef, kUndef, kUndef,
                                     kUndef, kUndef, kUndef, kUndef};
};

struct PartialMapHash {
  std::size_t operator()(const PartialMap& f) const noexcept {
    return static_cast<std::size_t>(f.code() * 0x9E3779B97F4A7C15ULL + f.n());
  }
};

PartialMap compose(const PartialMap& f, const PartialMap& g);
inline PartialMap operator*(const PartialMap& f, const PartialMap& g) { return compose(f, g); }

inline int rank(const PartialMap& f) { return f.rank(); }
bool member(const PartialMap& f, Family fam);

// every element of the family on [n], canonical order
const std::vector<PartialMap>& family_elements(Family fam, int n);
std::vector<PartialMap> all_of_rank(Family fam, int n, int r);
std::uint64_t family_size(Family fam, int n);

}  // namespace depthwork
