#pragma once

#include <optional>
#include <vector>

#include "core/geometry.hpp"
#include "core/rational.hpp"

namespace cantorium {

// Exact value with a truncation-tail interval radius. Radius is zero for
// closed-form quantities.
struct MonoValue {
  Rational center;
  Rational radius;

  MonoValue() : center(0), radius(0) {}
  explicit MonoValue(Rational c, Rational r = Rational(0))
      : center(std::move(c)), radius(std::move(r)) {}
  bool exact() const { return radius == 0; }
};

enum class MeasureBase { Mu, Nu };

enum class LambdaKind { Geometric, Custom };

// Raw, unvalidated lambda-sequence description.
struct LambdaParams {
  LambdaKind kind = LambdaKind::Geometric;
  Rational coeff;                 // geometric: lambda_k = coeff * ratio^k
  Rational ratio;
  std::vector<Rational> weights;  // custom: finite list lambda_0..lambda_M
  Rational kappa;

  static LambdaParams geometric(const Rational& coeff, const Rational& ratio,
                                const Rational& kappa);
  static LambdaParams custom(std::vector<Rational> weights, const Rational& kappa);
};

// Exact certificate for the two §-constraints: sum 2^k lambda_k = 1 and
// sum lambda_k (2 kappa)^k finite (ratio 2*kappa*ratio < 1 for geometric).
struct LambdaCertificate {
  bool ok = false;
  std::string violation;
  std::optional<Rational> sum_2k;      // nullopt when divergent
  Rational kappa_ratio;                // 2*kappa*ratio (geometric; 0 custom)
  std::optional<Rational> kappa_series;
};

LambdaCertificate check_lambda(const LambdaParams& p);

class LambdaRule {
 public:
  explicit LambdaRule(const LambdaParams& p);  // throws DomainError when invalid

  // lambda_k = (3/4) 8^{-k} with kappa = 7/2: exact rationals throughout,
  // closed-form tails, 2*kappa*ratio = 7/8 < 1.
  static LambdaRule default_rule();

  const LambdaParams& params() const { return params_; }
  bool geometric() const { return params_.kind == LambdaKind::Geometric; }
  const Rational& ratio() const { return params_.ratio; }
  const Rational& coeff() const { return params_.coeff; }
  const Rational& kappa() const { return params_.kappa; }
  int max_order() const;  // last charged order for custom rules; -1 = infinite

  Rational lambda(int k) const;
  Rational tail_2k(int after) const;        // sum_{k>after} 2^k lambda_k
  Rational kappa_series() const;            // sum_k lambda_k (2 kappa)^k
  Rational kappa_tail(int after) const;     // sum_{k>after} lambda_k (2 kappa)^k
  Rational lambda_tail(int after) const;    // sum_{k>after} lambda_k

 private:
  LambdaParams params_;
};

struct Atom {
  Rational x;
  Rational mass;
};

// Finite atomic measure on [-1/2, 1/2]; atoms sorted by position and merged.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  explicit AtomicMeasure(std::vector<Atom> atoms);  // merges equal positions

  const std::vector<Atom>& atoms() const { return atoms_; }
  const Rational& total() const { return total_; }
  size_t size() const { return atoms_.size(); }

  // double mirrors for numeric evaluation (same index order)
  const std::vector<double>& xs_d() const { return xd_; }
  const std::vector<double>& masses_d() const { return md_; }

 private:
  std::vector<Atom> atoms_;
  Rational total_ = Rational(0);
  std::vector<double> xd_, md_;
};

struct MeasureTruncation {
  MeasureBase base = MeasureBase::Mu;
  int depth = 1;
  AtomicMeasure measure;
  Rational tail_mass;  // exact; 0 for mu
  std::optional<LambdaRule> rule;
  EndpointScheme scheme = EndpointScheme::CumulativePieceEndpoints;
};

// Haar approximant: 2^n atoms of mass 2^{-n} at the order-n endpoints.
AtomicMeasure make_mu_n(
    int n, EndpointScheme scheme = EndpointScheme::CumulativePieceEndpoints);

MeasureTruncation make_mu(
    int n, EndpointScheme scheme = EndpointScheme::CumulativePieceEndpoints);

// Truncation of nu = sum_k lambda_k sum_l delta_{x_{k,l}} at depth N.
MeasureTruncation make_nu(
    const LambdaRule& rule, int depth,
    EndpointScheme scheme = EndpointScheme::CumulativePieceEndpoints);

// Exact mass of a construction piece. depth == -1 requests the full measure
// (closed form; radius 0). With a nonnegative depth the center is the
// truncated mass and the radius the exact remaining tail inside the piece.
MonoValue piece_mass(
    const BinaryWord& w, MeasureBase base, const LambdaRule* rule = nullptr,
    int depth = -1,
    EndpointScheme scheme = EndpointScheme::CumulativePieceEndpoints);

// Exact cumulative distribution nu((-inf, x]) of the full measure, closed
// form for geometric rules. x must not be interior to a charged atom
// ambiguity: endpoints are handled inclusively.
Rational nu_cdf(const Rational& x, const LambdaRule& rule,
                EndpointScheme scheme = EndpointScheme::CumulativePieceEndpoints);

// mu((-inf, x]) for the limit Haar measure (non-atomic).
Rational mu_cdf(const Rational& x);

// Signed mass nu([0, x]) (negative for x < 0); x must not be an atom.
Rational nu_mass_from_zero(
    const Rational& x, const LambdaRule& rule,
    EndpointScheme scheme = EndpointScheme::CumulativePieceEndpoints);

// Exact mass of the atom sitting at an endpoint (0 when x carries none).
Rational nu_atom_mass(const Rational& x, const LambdaRule& rule,
                      EndpointScheme scheme = EndpointScheme::CumulativePieceEndpoints);

}  // namespace cantorium
