#include "core/geometry.hpp"

#include <algorithm>
#include <map>

namespace cantorium {

namespace {

const Rational kHalf = rat(1, 2);
const Rational kThird = rat(1, 3);
const Rational kTwoThirds = rat(2, 3);

}  // namespace

BinaryWord::BinaryWord(std::string_view digits) : digits_(digits) {
  for (char c : digits_)
    if (c != '0' && c != '1') throw DomainError("binary word digit out of {0,1}");
}

BinaryWord BinaryWord::from_value(uint64_t value, int level) {
  std::string s(static_cast<size_t>(level), '0');
  for (int i = level - 1; i >= 0; --i, value >>= 1)
    s[static_cast<size_t>(i)] = static_cast<char>('0' + (value & 1));
  return BinaryWord(s);
}

BinaryWord BinaryWord::child(int d) const {
  BinaryWord w = *this;
  w.digits_.push_back(static_cast<char>('0' + d));
  return w;
}

BinaryWord BinaryWord::prefix(int len) const {
  return BinaryWord(std::string_view(digits_).substr(0, static_cast<size_t>(len)));
}

bool BinaryWord::all_equal(int d) const {
  char c = static_cast<char>('0' + d);
  return std::all_of(digits_.begin(), digits_.end(), [c](char x) { return x == c; });
}

uint64_t BinaryWord::value() const {
  if (level() > 62) throw DomainError("word too long for value()");
  uint64_t v = 0;
  for (char c : digits_) v = (v << 1) | static_cast<uint64_t>(c - '0');
  return v;
}

PieceInterval piece_interval(const BinaryWord& w) {
  Rational lo = -kHalf;
  Rational scale = rat(1);
  for (int i = 0; i < w.level(); ++i) {
    scale /= 3;
    if (w.digit(i) == 1) lo += 2 * scale;
  }
  return PieceInterval{w, lo, lo + scale};
}

bool CantorAddress::eventually_constant() const {
  if (period.level() == 0) return true;
  return period.all_equal(0) || period.all_equal(1);
}

Rational CantorAddress::coordinate() const { return point_of_address(*this); }

Rational point_of_address(const CantorAddress& a) {
  Rational x = -kHalf;
  Rational scale = rat(1);
  for (int i = 0; i < a.preperiod.level(); ++i) {
    scale /= 3;
    if (a.preperiod.digit(i) == 1) x += 2 * scale;
  }
  int p = a.period.level();
  if (p == 0) {
    // constant tail of the last preperiod digit (empty address -> -1/2)
    int a_len = a.preperiod.level();
    if (a_len > 0 && a.preperiod.digit(a_len - 1) == 1) x += scale;
    return x;
  }
  // periodic tail: scale * W / (1 - 3^{-p}),  W = sum 2 eps_i 3^{-i}
  Rational w = rat(0);
  Rational s = rat(1);
  for (int i = 0; i < p; ++i) {
    s /= 3;
    if (a.period.digit(i) == 1) w += 2 * s;
  }
  x += scale * w / (rat(1) - rat_pow(kThird, p));
  return x;
}

std::vector<Rational> endpoints_of_order(int k, EndpointScheme scheme) {
  if (k < 0) throw DomainError("endpoint order must be >= 0");
  if (k == 0) return {-kHalf};
  if (k > 24) throw DomainError("endpoint order too large to enumerate");

  // level-by-level interval refinement, kept in coordinate order
  int level = scheme == EndpointScheme::CumulativePieceEndpoints ? k - 1 : k;
  std::vector<std::pair<Rational, Rational>> pieces{{-kHalf, kHalf}};
  Rational width = rat(1);
  for (int m = 0; m < level; ++m) {
    width /= 3;
    std::vector<std::pair<Rational, Rational>> next;
    next.reserve(pieces.size() * 2);
    for (const auto& [lo, hi] : pieces) {
      next.emplace_back(lo, lo + width);
      next.emplace_back(hi - width, hi);
    }
    pieces.swap(next);
  }
  std::vector<Rational> out;
  out.reserve(pieces.size() * 2);
  if (scheme == EndpointScheme::CumulativePieceEndpoints) {
    for (const auto& [lo, hi] : pieces) {
      out.push_back(lo);
      out.push_back(hi);
    }
  } else {
    for (const auto& [lo, hi] : pieces) {
      (void)hi;
      out.push_back(lo);
    }
  }
  return out;
}

std::optional<KDigits> k_digits(const Rational& x, int max_steps) {
  Rational t = x + kHalf;
  if (t < 0 || t > 1) return std::nullopt;
  KDigits out;
  std::map<Rational, size_t> seen;
  for (int step = 0; step < max_steps; ++step) {
    if (t == 0) {
      out.period = {0};
      return out;
    }
    if (t == 1) {
      out.period = {1};
      return out;
    }
    auto [it, fresh] = seen.emplace(t, out.pre.size());
    if (!fresh) {
      out.period.assign(out.pre.begin() + static_cast<long>(it->second), out.pre.end());
      out.pre.resize(it->second);
      return out;
    }
    if (t < kThird) {
      out.pre.push_back(0);
      t *= 3;
    } else if (t > kTwoThirds) {
      out.pre.push_back(1);
      t = 3 * t - 2;
    } else if (t == kThird) {
      out.pre.push_back(0);
      t = 1;
    } else if (t == kTwoThirds) {
      out.pre.push_back(1);
      t = 0;
    } else {
      return std::nullopt;  // interior of a removed third
    }
  }
  throw DomainError("k_digits: period not found within step budget");
}

CantorAddress KDigits::address() const {
  std::string p(pre.size(), '0'), q(period.size(), '0');
  for (size_t i = 0; i < pre.size(); ++i) p[i] = static_cast<char>('0' + pre[i]);
  for (size_t i = 0; i < period.size(); ++i) q[i] = static_cast<char>('0' + period[i]);
  return CantorAddress{BinaryWord(p), BinaryWord(q)};
}

Classification classify_point(const Rational& x, EndpointScheme scheme) {
  Rational t = x + kHalf;
  if (t < 0 || t > 1) return {PointClass::Outside, 0};
  int consumed = 0;
  std::map<Rational, int> seen;
  while (true) {
    if (t == 0) {
      // lo-type endpoint of its level-`consumed` piece
      if (scheme == EndpointScheme::CumulativePieceEndpoints)
        return {PointClass::Endpoint, consumed == 0 && x == -kHalf ? 0 : consumed + 1};
      return {PointClass::Endpoint, consumed};
    }
    if (t == 1) {
      // hi-type endpoint; never listed by the left-endpoint scheme
      if (scheme == EndpointScheme::CumulativePieceEndpoints)
        return {PointClass::Endpoint, consumed + 1};
      return {PointClass::Endpoint, -1};
    }
    if (t > kThird && t < kTwoThirds) return {PointClass::InGap, consumed + 1};
    if (!seen.emplace(t, consumed).second) return {PointClass::InnerPointOfK, 0};
    if (t <= kThird)
      t *= 3;
    else
      t = 3 * t - 2;
    ++consumed;
  }
}

Rational distance_to_k(const Rational& x) {
  Rational t = x + kHalf;
  if (t < 0) return -t;
  if (t > 1) return t - 1;
  Rational scale = rat(1);
  std::map<Rational, int> seen;
  int step = 0;
  while (true) {
    if (t == 0 || t == 1) return rat(0);
    if (t > kThird && t < kTwoThirds)
      return scale * std::min(Rational(t - kThird), Rational(kTwoThirds - t));
    if (!seen.emplace(t, step).second) return rat(0);  // periodic: inner point
    if (t <= kThird)
      t *= 3;
    else
      t = 3 * t - 2;
    scale /= 3;
    if (++step > 4096) return rat(0);
  }
}

bool in_ifs_cover(const Rational& x, int depth) {
  Rational t = x + kHalf;
  if (t < 0 || t > 1) return false;
  for (int i = 0; i < depth; ++i) {
    if (t <= kThird)
      t *= 3;
    else if (t >= kTwoThirds)
      t = 3 * t - 2;
    else
      return false;
  }
  return true;
}

namespace {

// Distance from x to the nearest order-k endpoint (own-piece bounds suffice:
// every other piece at that level sits at least one gap further away).
// `lo`/`scale` describe the level-m piece containing x.
Rational order_distance_cumulative(const Rational& x, const Rational& lo,
                                   const Rational& scale) {
  return std::min(Rational(x - lo), Rational(lo + scale - x));
}

}  // namespace

GoodPointResult good_point_test(const CantorAddress& a, const Rational& kappa,
                                int depth, int k0, EndpointScheme scheme) {
  if (kappa <= 3) throw DomainError("good point test requires kappa > 3");
  if (depth < 1) throw DomainError("good point test requires depth >= 1");
  GoodPointResult res;
  res.k0 = k0;
  res.depth = depth;
  const Rational x = point_of_address(a);

  if (a.eventually_constant()) {
    Classification c = classify_point(x, scheme);
    if (c.detail >= 0) {
      // the point is itself a charged endpoint: distance zero at every
      // order past its own
      res.good = false;
      res.bad_order = std::max(k0, c.detail);
      res.bad_endpoint = x;
      res.bad_distance = rat(0);
      return res;
    }
    // hi-type endpoints carry no atom under the left-endpoint scheme and
    // fall through to the distance test
  }

  const int pre_len = a.preperiod.level();
  const int per_len = std::max(1, a.period.level());

  // digit accessor over preperiod+period (constant tail when period empty)
  auto digit = [&](int i) {
    if (i < pre_len) return a.preperiod.digit(i);
    if (a.period.level() == 0)
      return pre_len > 0 ? a.preperiod.digit(pre_len - 1) : 0;
    return a.period.digit((i - pre_len) % a.period.level());
  };

  Rational lo = -kHalf;
  Rational scale = rat(1);
  Rational q_min;  // min relative boundary distance over one full period
  bool q_min_set = false;

  const int probe = std::max(depth, pre_len + 2 * per_len + 2);
  // order k uses the level-(k-1) piece under the cumulative scheme and the
  // level-k piece under the left-endpoint scheme
  const int level_offset = scheme == EndpointScheme::CumulativePieceEndpoints ? 1 : 0;
  int checked_to = 0;

  int m = 0;  // current refined level; [lo, lo+scale] is the level-m piece
  bool has_succ = false;
  Rational succ_lo;  // lo of the next piece at the current level, if any
  auto refine_to = [&](int target) {
    while (m < target) {
      scale /= 3;
      if (digit(m) == 1) {
        lo += 2 * scale;
        // successor stays the parent's successor (its lo is also the lo of
        // its leftmost descendants)
      } else {
        succ_lo = lo + 2 * scale;
        has_succ = true;
      }
      ++m;
    }
  };

  for (int k = k0; k <= probe; ++k) {
    int level = k - level_offset;
    if (level < 0) {
      // cumulative order 0: the single endpoint -1/2
      Rational d = rat_abs(x + kHalf);
      if (d < rat_pow(kappa, -k)) {
        res.good = false;
        res.bad_order = k;
        res.bad_endpoint = -kHalf;
        res.bad_distance = d;
        return res;
      }
      continue;
    }
    refine_to(level);
    Rational d_lo = x - lo;
    Rational d_hi = lo + scale - x;
    Rational d;
    Rational nearest;
    if (scheme == EndpointScheme::CumulativePieceEndpoints) {
      d = order_distance_cumulative(x, lo, scale);
      nearest = d_lo <= d_hi ? lo : lo + scale;
    } else {
      d = d_lo;
      nearest = lo;
      if (has_succ && succ_lo - x < d) {
        d = succ_lo - x;
        nearest = succ_lo;
      }
    }
    Rational radius = rat_pow(kappa, -k);
    if (d < radius) {
      res.good = false;
      res.bad_order = k;
      res.bad_endpoint = nearest;
      res.bad_distance = d;
      return res;
    }
    checked_to = k;
    if (level >= pre_len) {
      Rational q = d / scale;
      if (q > 1) q = rat(1);
      if (!q_min_set || q < q_min) {
        q_min = q;
        q_min_set = true;
      }
    }
  }

  res.good = true;
  res.depth = checked_to;

  // Periodic-tail certificate: in the periodic regime the relative position
  // inside the level piece cycles, so d_k >= q_min * 3^{-level} while the
  // test radius shrinks like kappa^{-k} with kappa > 3. Once
  // (kappa/3)^k * 3^{level_offset} * q_min >= 1 holds it holds for every
  // larger k; the loop above checked through that threshold.
  if (q_min_set && q_min > 0) {
    Rational ratio = kappa / 3;
    Rational need = rat(1) / (q_min * (level_offset == 1 ? 3 : 1));
    Rational acc = rat(1);
    int k_star = 0;
    while (acc < need && k_star < 100000) {
      acc *= ratio;
      ++k_star;
    }
    if (k_star <= checked_to) res.all_orders = true;
  }
  return res;
}

GoodPointResult good_point_test(const Rational& x, const Rational& kappa,
                                int depth, int k0, EndpointScheme scheme) {
  auto digits = k_digits(x);
  if (!digits) throw DomainError("good point test: point not in K");
  return good_point_test(digits->address(), kappa, depth, k0, scheme);
}

}  // namespace cantorium
