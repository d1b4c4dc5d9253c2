#include "core/measures.hpp"

#include <algorithm>
#include <map>

namespace cantorium {

namespace {

const Rational kHalf = rat(1, 2);
const Rational kThird = rat(1, 3);
const Rational kTwoThirds = rat(2, 3);

struct Expansion {
  enum class Kind { Gap, Inner, EndpointLo, EndpointHi };
  Kind kind = Kind::Inner;
  std::vector<int> pre;     // binary digits before the gap / period / tail
  std::vector<int> period;  // Inner only
  int gap_level = 0;        // Gap: pre holds gap_level-1 digits
};

// Binary digit expansion of x+1/2 with gap/endpoint/period detection.
Expansion expand(const Rational& x) {
  Rational t = x + kHalf;
  if (t < 0 || t > 1) throw DomainError("expand: point outside [-1/2, 1/2]");
  Expansion e;
  std::map<Rational, size_t> seen;
  while (true) {
    if (t == 0) {
      e.kind = Expansion::Kind::EndpointLo;
      return e;
    }
    if (t == 1) {
      e.kind = Expansion::Kind::EndpointHi;
      return e;
    }
    if (t > kThird && t < kTwoThirds) {
      e.kind = Expansion::Kind::Gap;
      e.gap_level = static_cast<int>(e.pre.size()) + 1;
      return e;
    }
    auto [it, fresh] = seen.emplace(t, e.pre.size());
    if (!fresh) {
      e.kind = Expansion::Kind::Inner;
      e.period.assign(e.pre.begin() + static_cast<long>(it->second), e.pre.end());
      e.pre.resize(it->second);
      return e;
    }
    if (t <= kThird) {
      e.pre.push_back(0);
      t *= 3;
    } else {
      e.pre.push_back(1);
      t = 3 * t - 2;
    }
    if (e.pre.size() > 100000) throw DomainError("expand: digit budget exceeded");
  }
}

}  // namespace

LambdaParams LambdaParams::geometric(const Rational& coeff, const Rational& ratio,
                                     const Rational& kappa) {
  LambdaParams p;
  p.kind = LambdaKind::Geometric;
  p.coeff = coeff;
  p.ratio = ratio;
  p.kappa = kappa;
  return p;
}

LambdaParams LambdaParams::custom(std::vector<Rational> weights, const Rational& kappa) {
  LambdaParams p;
  p.kind = LambdaKind::Custom;
  p.weights = std::move(weights);
  p.kappa = kappa;
  return p;
}

LambdaCertificate check_lambda(const LambdaParams& p) {
  LambdaCertificate cert;
  cert.kappa_ratio = rat(0);
  if (p.kappa <= 3) {
    cert.violation = "kappa must satisfy kappa > 3 (strict)";
    return cert;
  }
  if (p.kind == LambdaKind::Geometric) {
    if (p.coeff <= 0 || p.ratio <= 0) {
      cert.violation = "geometric rule needs coeff > 0 and ratio > 0";
      return cert;
    }
    Rational two_r = 2 * p.ratio;
    if (two_r >= 1) {
      cert.violation = "sum 2^k lambda_k diverges (2*ratio >= 1)";
      return cert;
    }
    cert.sum_2k = p.coeff / (rat(1) - two_r);
    cert.kappa_ratio = 2 * p.kappa * p.ratio;
    if (cert.kappa_ratio >= 1) {
      cert.violation = "sum lambda_k (2 kappa)^k diverges (2*kappa*ratio >= 1)";
      return cert;
    }
    cert.kappa_series = p.coeff / (rat(1) - cert.kappa_ratio);
    if (*cert.sum_2k != 1) {
      cert.violation = "sum 2^k lambda_k = " + rat_str(*cert.sum_2k) + ", expected 1";
      return cert;
    }
  } else {
    if (p.weights.empty()) {
      cert.violation = "custom rule needs at least one weight";
      return cert;
    }
    Rational sum(0), kser(0), pw2(1), pwk(1);
    Rational two_kappa = 2 * p.kappa;
    for (size_t k = 0; k < p.weights.size(); ++k) {
      if (p.weights[k] <= 0) {
        cert.violation = "custom weights must be positive";
        return cert;
      }
      sum += p.weights[k] * pw2;
      kser += p.weights[k] * pwk;
      pw2 *= 2;
      pwk *= two_kappa;
    }
    cert.sum_2k = sum;
    cert.kappa_series = kser;
    if (sum != 1) {
      cert.violation = "sum 2^k lambda_k = " + rat_str(sum) + ", expected 1";
      return cert;
    }
  }
  cert.ok = true;
  return cert;
}

LambdaRule::LambdaRule(const LambdaParams& p) : params_(p) {
  LambdaCertificate cert = check_lambda(p);
  if (!cert.ok) throw DomainError("invalid lambda rule: " + cert.violation);
}

LambdaRule LambdaRule::default_rule() {
  return LambdaRule(LambdaParams::geometric(rat(3, 4), rat(1, 8), rat(7, 2)));
}

int LambdaRule::max_order() const {
  return geometric() ? -1 : static_cast<int>(params_.weights.size()) - 1;
}

Rational LambdaRule::lambda(int k) const {
  if (k < 0) throw DomainError("lambda order must be >= 0");
  if (geometric()) return params_.coeff * rat_pow(params_.ratio, k);
  if (k >= static_cast<int>(params_.weights.size())) return rat(0);
  return params_.weights[static_cast<size_t>(k)];
}

Rational LambdaRule::tail_2k(int after) const {
  if (geometric()) {
    Rational two_r = 2 * params_.ratio;
    return params_.coeff * rat_pow(two_r, after + 1) / (rat(1) - two_r);
  }
  Rational sum(0);
  for (int k = after + 1; k <= max_order(); ++k) sum += lambda(k) * rat_pow(rat(2), k);
  return sum;
}

Rational LambdaRule::kappa_series() const { return *check_lambda(params_).kappa_series; }

Rational LambdaRule::kappa_tail(int after) const {
  Rational q = 2 * params_.kappa;
  if (geometric()) {
    Rational qr = q * params_.ratio;
    return params_.coeff * rat_pow(qr, after + 1) / (rat(1) - qr);
  }
  Rational sum(0);
  for (int k = after + 1; k <= max_order(); ++k) sum += lambda(k) * rat_pow(q, k);
  return sum;
}

Rational LambdaRule::lambda_tail(int after) const {
  if (geometric())
    return params_.coeff * rat_pow(params_.ratio, after + 1) / (rat(1) - params_.ratio);
  Rational sum(0);
  for (int k = after + 1; k <= max_order(); ++k) sum += lambda(k);
  return sum;
}

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.x < b.x; });
  for (auto& a : atoms) {
    if (a.mass == 0) continue;
    if (a.mass < 0) throw DomainError("atom mass must be positive");
    if (!atoms_.empty() && atoms_.back().x == a.x)
      atoms_.back().mass += a.mass;
    else
      atoms_.push_back(std::move(a));
  }
  for (const auto& a : atoms_) {
    total_ += a.mass;
    xd_.push_back(rat_d(a.x));
    md_.push_back(rat_d(a.mass));
  }
}

AtomicMeasure make_mu_n(int n, EndpointScheme scheme) {
  if (n < 1) throw DomainError("mu_n needs n >= 1");
  if (n > 20) throw DomainError("mu_n atom count beyond enumeration cap (n <= 20)");
  Rational mass = rat_pow(rat(1, 2), n);
  std::vector<Atom> atoms;
  for (auto& x : endpoints_of_order(n, scheme)) atoms.push_back({std::move(x), mass});
  return AtomicMeasure(std::move(atoms));
}

MeasureTruncation make_mu(int n, EndpointScheme scheme) {
  MeasureTruncation t;
  t.base = MeasureBase::Mu;
  t.depth = n;
  t.measure = make_mu_n(n, scheme);
  t.tail_mass = rat(0);
  t.scheme = scheme;
  return t;
}

MeasureTruncation make_nu(const LambdaRule& rule, int depth, EndpointScheme scheme) {
  if (depth < 0) throw DomainError("nu truncation depth must be >= 0");
  if (depth > 18) throw DomainError("nu truncation beyond enumeration cap (N <= 18)");
  int top = depth;
  if (!rule.geometric()) top = std::min(top, rule.max_order());

  // (position, minimal order) pairs; each endpoint keeps collecting lambda_k
  // for every order k >= its minimal order (cumulative) resp. each level it
  // is a left endpoint of (left scheme).
  std::vector<std::pair<Rational, int>> points;
  if (scheme == EndpointScheme::CumulativePieceEndpoints) {
    points.emplace_back(-kHalf, 0);
    if (top >= 1) points.emplace_back(kHalf, 1);
    // refine pieces; new inner endpoints of level-m pieces have order m+1
    std::vector<std::pair<Rational, Rational>> pieces{{-kHalf, kHalf}};
    Rational width = rat(1);
    for (int m = 1; m + 1 <= top; ++m) {
      width /= 3;
      std::vector<std::pair<Rational, Rational>> next;
      next.reserve(pieces.size() * 2);
      for (const auto& [lo, hi] : pieces) {
        next.emplace_back(lo, lo + width);
        next.emplace_back(hi - width, hi);
        points.emplace_back(lo + width, m + 1);
        points.emplace_back(hi - width, m + 1);
      }
      pieces.swap(next);
    }
  } else {
    points.emplace_back(-kHalf, 0);
    std::vector<std::pair<Rational, Rational>> pieces{{-kHalf, kHalf}};
    Rational width = rat(1);
    for (int m = 1; m <= top; ++m) {
      width /= 3;
      std::vector<std::pair<Rational, Rational>> next;
      next.reserve(pieces.size() * 2);
      for (const auto& [lo, hi] : pieces) {
        next.emplace_back(lo, lo + width);
        next.emplace_back(hi - width, hi);
        points.emplace_back(hi - width, m);  // fresh left endpoint
      }
      pieces.swap(next);
    }
  }

  // suffix sums lambda_j + ... + lambda_top
  std::vector<Rational> suffix(static_cast<size_t>(top) + 2, rat(0));
  for (int k = top; k >= 0; --k)
    suffix[static_cast<size_t>(k)] = suffix[static_cast<size_t>(k) + 1] + rule.lambda(k);

  std::vector<Atom> atoms;
  atoms.reserve(points.size());
  for (auto& [x, order] : points) {
    if (order > top) continue;
    atoms.push_back({std::move(x), suffix[static_cast<size_t>(order)]});
  }

  MeasureTruncation t;
  t.base = MeasureBase::Nu;
  t.depth = depth;
  t.measure = AtomicMeasure(std::move(atoms));
  t.tail_mass = rule.tail_2k(depth);
  t.rule = rule;
  t.scheme = scheme;
  return t;
}

namespace {

// sum_{k in (lo_k, hi_k]} lambda_k 2^{k-L}; hi_k == -1 means infinity.
Rational lambda_pow2_window(const LambdaRule& rule, int after, int upto, int L) {
  if (upto < 0) {
    //  2^{-L} * sum_{k>after} lambda_k 2^k
    return rat_pow(rat(1, 2), L) * rule.tail_2k(after);
  }
  Rational sum(0);
  for (int k = after + 1; k <= upto; ++k)
    sum += rule.lambda(k) * rat_pow(rat(2), k - L);
  return sum;
}

}  // namespace

MonoValue piece_mass(const BinaryWord& w, MeasureBase base, const LambdaRule* rule,
                     int depth, EndpointScheme scheme) {
  const int L = w.level();
  if (base == MeasureBase::Mu) return MonoValue(rat_pow(rat(1, 2), L));
  if (!rule) throw DomainError("piece_mass for nu needs a lambda rule");

  // contribution of order k: count of order-k endpoints inside piece(w)
  auto low_order_count = [&](int k) -> int {
    if (scheme == EndpointScheme::CumulativePieceEndpoints) {
      int m = k - 1;  // endpoints of level-m pieces
      if (k == 0) return w.all_equal(0) ? 1 : 0;
      if (m >= L) return -1;  // 2^{m-L+1}, handled by the window sum
      int c = 0;
      bool suffix0 = true, suffix1 = true;
      for (int i = m; i < L; ++i) {
        if (w.digit(i) != 0) suffix0 = false;
        if (w.digit(i) != 1) suffix1 = false;
      }
      if (suffix0) ++c;
      if (suffix1) ++c;
      return c;
    }
    int m = k;  // left endpoints of level-k pieces
    if (m >= L) return -1;
    bool suffix0 = true;
    for (int i = m; i < L; ++i)
      if (w.digit(i) != 0) suffix0 = false;
    return suffix0 ? 1 : 0;
  };

  const int boundary = scheme == EndpointScheme::CumulativePieceEndpoints ? L : L - 1;
  auto partial = [&](int from, int to) {  // sum over from <= k <= to of low orders
    Rational s(0);
    for (int k = from; k <= to && k <= boundary; ++k) {
      int c = low_order_count(k);
      if (c > 0) s += rule->lambda(k) * c;
    }
    return s;
  };

  // full mass = low orders + geometric window above the piece level
  if (depth < 0) {
    Rational full = partial(0, boundary) + lambda_pow2_window(*rule, boundary, -1, L);
    return MonoValue(full);
  }

  Rational center = partial(0, std::min(depth, boundary));
  if (depth > boundary) center += lambda_pow2_window(*rule, boundary, depth, L);
  Rational radius;
  if (depth >= boundary) {
    radius = lambda_pow2_window(*rule, depth, -1, L);
  } else {
    radius = partial(depth + 1, boundary) + lambda_pow2_window(*rule, boundary, -1, L);
  }
  return MonoValue(center, radius);
}

namespace {

// D(base) = sum_{m>=1} eps_m base^m for the digit stream of an expansion
// with an eventually-constant or periodic tail.
Rational digit_series(const std::vector<int>& pre, const std::vector<int>& period,
                      int constant_tail, const Rational& base) {
  Rational d(0), p(1);
  for (int eps : pre) {
    p *= base;
    if (eps) d += p;
  }
  if (!period.empty()) {
    Rational w(0), q(1);
    for (int eps : period) {
      q *= base;
      if (eps) w += q;
    }
    d += p * w / (rat(1) - rat_pow(base, static_cast<long>(period.size())));
  } else if (constant_tail == 1) {
    // tail of ones: p * base/(1-base)
    d += p * base / (rat(1) - base);
  }
  return d;
}

}  // namespace

Rational nu_cdf(const Rational& x, const LambdaRule& rule, EndpointScheme scheme) {
  if (x < -kHalf) return rat(0);
  if (x >= kHalf) return rat(1);
  Expansion e = expand(x);

  const bool cumulative = scheme == EndpointScheme::CumulativePieceEndpoints;

  if (!rule.geometric()) {
    // finite rule: direct digit-driven order counts
    int top = rule.max_order();
    Rational sum(0);
    Integer v(0);
    auto dig = [&](int m) {  // 1-based digit
      size_t i = static_cast<size_t>(m - 1);
      if (i < e.pre.size()) return e.pre[i];
      if (e.kind == Expansion::Kind::Inner)
        return e.period[(i - e.pre.size()) % e.period.size()];
      return e.kind == Expansion::Kind::EndpointHi ? 1 : 0;
    };
    int g = e.kind == Expansion::Kind::Gap ? e.gap_level : -1;
    Integer v_gap(0);
    for (int k = 0; k <= top; ++k) {
      Integer count;
      int m = cumulative ? k - 1 : k;  // relevant piece level
      if (cumulative && k == 0) {
        count = 1;  // the order-0 endpoint -1/2 is <= every x here
      } else if (g >= 0 && m >= g) {
        Integer pieces_left = 2 * v_gap + 1;
        count = pieces_left * int_pow(2, static_cast<unsigned long>(m - g));
        if (cumulative) count *= 2;
      } else {
        count = cumulative ? Integer(2 * v + 1) : Integer(v + 1);
      }
      sum += rule.lambda(k) * Rational(count);
      // advance v to level m+1 for the next order
      int next_level = (cumulative ? k : k + 1);
      if (g < 0 || next_level < g) {
        if (next_level >= 1) {
          v = 2 * v + dig(next_level);
          if (g < 0 || next_level <= g - 1) v_gap = v;
        }
      }
    }
    if (cumulative && e.kind == Expansion::Kind::EndpointHi) {
      int j = static_cast<int>(e.pre.size());
      for (int k = j + 1; k <= top; ++k) sum += rule.lambda(k);
    }
    return sum;
  }

  const Rational c = rule.coeff();
  const Rational r = rule.ratio();

  if (e.kind == Expansion::Kind::Gap) {
    const int g = e.gap_level;
    Rational sum = cumulative ? c : rat(0);  // order-0 term
    Integer v(0);
    if (cumulative) {
      // orders 1..g see the levels 0..g-1 where x still sits inside a piece
      Rational rp(1);
      for (int k = 1; k <= g; ++k) {
        rp *= r;
        sum += c * rp * Rational(2 * v + 1);
        if (k <= g - 1) v = 2 * v + e.pre[static_cast<size_t>(k - 1)];
      }
      Rational two_r = 2 * r;
      Rational tail = c * rat_pow(two_r, g + 1) / (rat(1) - two_r);
      sum += Rational(2 * v + 1) * rat_pow(rat(1, 2), g) * tail;
    } else {
      // left endpoints: orders 0..g-1 inside pieces, then pure counts
      Rational rp(1);
      sum += c;  // k = 0: v+1 = 1
      for (int k = 1; k <= g - 1; ++k) {
        rp *= r;
        v = 2 * v + e.pre[static_cast<size_t>(k - 1)];
        sum += c * rp * Rational(v + 1);
      }
      Integer v_gap = v;
      Rational two_r = 2 * r;
      Rational tail = c * rat_pow(two_r, g) / (rat(1) - two_r);
      sum += Rational(2 * v_gap + 1) * rat_pow(rat(1, 2), g) * tail;
    }
    return sum;
  }

  // inner points and endpoints: counts 2V+1 resp. V+1 at every level
  int tail_digit = e.kind == Expansion::Kind::EndpointHi ? 1 : 0;
  Rational d = digit_series(e.pre, e.period, tail_digit, r);
  Rational u = d / (rat(1) - 2 * r);
  Rational sum;
  if (cumulative) {
    sum = c + c * r / (rat(1) - r) + 2 * c * r * u;
    if (e.kind == Expansion::Kind::EndpointHi) {
      int j = static_cast<int>(e.pre.size());
      sum += c * rat_pow(r, j + 1) / (rat(1) - r);
    }
  } else {
    sum = c / (rat(1) - r) + c * u;
  }
  return sum;
}

Rational mu_cdf(const Rational& x) {
  if (x < -kHalf) return rat(0);
  if (x >= kHalf) return rat(1);
  Expansion e = expand(x);
  if (e.kind == Expansion::Kind::Gap) {
    Integer v(0);
    for (int i = 0; i + 1 < e.gap_level; ++i) v = 2 * v + e.pre[static_cast<size_t>(i)];
    return Rational(2 * v + 1) / Rational(int_pow(2, static_cast<unsigned long>(e.gap_level)));
  }
  int tail_digit = e.kind == Expansion::Kind::EndpointHi ? 1 : 0;
  return digit_series(e.pre, e.period, tail_digit, rat(1, 2));
}

Rational nu_mass_from_zero(const Rational& x, const LambdaRule& rule,
                           EndpointScheme scheme) {
  return nu_cdf(x, rule, scheme) - nu_cdf(rat(0), rule, scheme);
}

Rational nu_atom_mass(const Rational& x, const LambdaRule& rule, EndpointScheme scheme) {
  Classification c = classify_point(x, scheme);
  if (c.kind != PointClass::Endpoint || c.detail < 0) return rat(0);
  return rule.lambda(c.detail) + rule.lambda_tail(c.detail);
}

}  // namespace cantorium
