#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/rational.hpp"

namespace cantorium {

// All geometry lives on the translated triadic Cantor set K = C - 1/2,
// generated from the root piece [-1/2, 1/2] by keeping the outer thirds.

// Finite word over {0,1}; the empty word is the root piece.
class BinaryWord {
 public:
  BinaryWord() = default;
  explicit BinaryWord(std::string_view digits);
  static BinaryWord from_value(uint64_t value, int level);

  int level() const { return static_cast<int>(digits_.size()); }
  int digit(int i) const { return digits_[static_cast<size_t>(i)] - '0'; }
  BinaryWord child(int d) const;
  BinaryWord prefix(int len) const;
  bool all_equal(int d) const;  // true on the empty word
  uint64_t value() const;       // binary value; level <= 62
  const std::string& str() const { return digits_; }
  bool operator==(const BinaryWord&) const = default;

 private:
  std::string digits_;
};

struct PieceInterval {
  BinaryWord word;
  Rational lo, hi;  // hi - lo == 3^{-level}; both endpoints lie in K
};

// How "end-points of order k" are enumerated. The default reproduces the
// mu_1, mu_2, mu_3 atom lists: order 0 is the single point -1/2 and order
// k >= 1 collects the 2^k endpoints of the level-(k-1) pieces.
enum class EndpointScheme { CumulativePieceEndpoints, LeftEndpoints };

// Eventually periodic binary address; these encode exactly the rational
// points of K. An empty period means a constant tail of the last preperiod
// digit (endpoint style); the empty address denotes -1/2.
struct CantorAddress {
  BinaryWord preperiod;
  BinaryWord period;

  Rational coordinate() const;
  bool eventually_constant() const;
};

PieceInterval piece_interval(const BinaryWord& w);

Rational point_of_address(const CantorAddress& a);

// 2^k points for k >= 1, a single point for k = 0; sorted ascending.
std::vector<Rational> endpoints_of_order(
    int k, EndpointScheme scheme = EndpointScheme::CumulativePieceEndpoints);

enum class PointClass { InGap, Endpoint, InnerPointOfK, Outside };

struct Classification {
  PointClass kind;
  // Endpoint: minimal order carrying the point; InGap: level of the removed
  // third (1 = central gap); otherwise unused.
  int detail = 0;
};

Classification classify_point(
    const Rational& x,
    EndpointScheme scheme = EndpointScheme::CumulativePieceEndpoints);

// Binary digit expansion of a point of K (triadic digits halved). Returns
// nullopt when x is not in K. Endpoints come back with an eventually
// constant tail folded into `period`.
struct KDigits {
  std::vector<int> pre;
  std::vector<int> period;  // nonempty for points of K

  int digit(int i) const {  // 0-based
    if (i < static_cast<int>(pre.size())) return pre[static_cast<size_t>(i)];
    size_t j = (static_cast<size_t>(i) - pre.size()) % period.size();
    return period[j];
  }
  CantorAddress address() const;
};
std::optional<KDigits> k_digits(const Rational& x, int max_steps = 4096);

// Exact distance from a real abscissa to K.
Rational distance_to_k(const Rational& x);

// Membership at finite resolution: x lies in the depth-n IFS cover of K.
// Used as an independent cross-check of classify_point.
bool in_ifs_cover(const Rational& x, int depth);

struct GoodPointResult {
  bool good = false;
  // Orders k0..depth were checked; all_orders means the periodic-tail
  // argument extends the certificate to every k (still relative to k0).
  int k0 = 0;
  int depth = 0;
  bool all_orders = false;
  // witness when bad
  int bad_order = 0;
  Rational bad_endpoint;
  Rational bad_distance;
};

// Checks |x - x_{k,l}| >= kappa^{-k} for k0 <= k <= depth. Points outside K
// raise DomainError. kappa must exceed 3.
GoodPointResult good_point_test(
    const Rational& x, const Rational& kappa, int depth, int k0 = 2,
    EndpointScheme scheme = EndpointScheme::CumulativePieceEndpoints);

// Same test driven by an address; when the address is eventually periodic
// and not eventually constant the certificate covers all orders >= k0.
GoodPointResult good_point_test(
    const CantorAddress& a, const Rational& kappa, int depth, int k0 = 2,
    EndpointScheme scheme = EndpointScheme::CumulativePieceEndpoints);

}  // namespace cantorium
