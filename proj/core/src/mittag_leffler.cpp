#include "fraclangevin/mittag_leffler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include "fraclangevin/errors.hpp"

namespace fraclangevin::ml {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;

// Below this y = x^(1/alpha) the series is always tried; above kAsymptoticMinY
// the asymptotic expansion is always tried. Inside the overlap both run and
// the tighter bound wins; if neither reaches kTargetBound the integral
// representation is evaluated as well.
constexpr double kSeriesMaxY = 16.0;
constexpr double kAsymptoticMinY = 8.0;
constexpr double kTargetBound = 1e-14;
constexpr double kAcceptBound = 1e-6;
constexpr int kMaxSeriesTerms = 20000;

// Largest argument for which tgamma stays finite.
constexpr double kGammaMaxArg = 171.0;

// Neumaier variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

bool is_nonpositive_integer(double y) { return y <= 0.0 && y == std::floor(y); }

// x^n / Gamma(a) evaluated without overflow.
double power_over_gamma(double x, double log_x, int n, double a) {
  if (is_nonpositive_integer(a)) return 0.0;
  if (a > 0.0 && a < kGammaMaxArg && n * log_x < 700.0) {
    return std::pow(x, n) / std::tgamma(a);
  }
  if (a > 0.0) return std::exp(n * log_x - std::lgamma(a));
  // Reflection: 1/Gamma(a) = Gamma(1 - a) sin(pi a) / pi.
  const double s = boost::math::sin_pi(a);
  return std::copysign(std::exp(n * log_x + std::lgamma(1.0 - a)) / kPi, s) *
         std::abs(s);
}

MlEvalResult series(double alpha, double mu, double x, double y) {
  MlEvalResult r;
  r.regime = MlRegime::Series;
  if (x == 0.0) {
    r.value = recip_gamma(mu);
    r.terms_used = 1;
    r.error_bound = kEps * std::abs(r.value);
    return r;
  }
  const double log_x = std::log(x);
  CompensatedSum sum;
  double abs_sum = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  int n = 0;
  for (; n < kMaxSeriesTerms; ++n) {
    const double a = alpha * n + mu;
    double term = power_over_gamma(x, log_x, n, a);
    if (n % 2 == 1) term = -term;
    const double mag = std::abs(term);
    // Past the peak the terms alternate and shrink, so the first omitted
    // term bounds the remainder.
    if (a > y + 1.0 && mag <= prev &&
        (mag <= 0.25 * kEps * std::abs(sum.value()) || mag < 1e-300)) {
      r.value = sum.value();
      r.terms_used = n;
      r.error_bound = mag + 8.0 * kEps * abs_sum + kEps * std::abs(r.value);
      return r;
    }
    sum.add(term);
    abs_sum += mag;
    prev = mag;
  }
  r.value = sum.value();
  r.terms_used = n;
  r.error_bound = std::numeric_limits<double>::infinity();
  return r;
}

// Gamma envelope x^-k Gamma(1 + |k alpha - mu|) of the k-th asymptotic term;
// it dominates |x^-k / Gamma(mu - k alpha)| once mu - k alpha < 0 and does not
// vanish when mu - k alpha hits a pole.
double asymptotic_envelope(double log_x, int k, double alpha, double mu) {
  return std::exp(-k * log_x + std::lgamma(1.0 + std::abs(k * alpha - mu)));
}

MlEvalResult asymptotic(double alpha, double mu, double x) {
  MlEvalResult r;
  r.regime = MlRegime::Asymptotic;
  const double log_x = std::log(x);
  CompensatedSum sum;
  double abs_sum = 0.0;
  double prev_env = std::numeric_limits<double>::infinity();
  int k = 1;
  double last_env = prev_env;
  for (; k <= kMaxSeriesTerms; ++k) {
    const double env = asymptotic_envelope(log_x, k, alpha, mu);
    if (env > prev_env) break;  // optimal truncation
    // -(-x)^-k = (-1)^(k+1) x^-k
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    const double term = sign * std::pow(x, -k) * recip_gamma(mu - k * alpha);
    sum.add(term);
    abs_sum += std::abs(term);
    last_env = env;
    prev_env = env;
    if (env < 0.01 * kEps * std::abs(sum.value())) {
      ++k;
      break;
    }
  }
  r.value = sum.value();
  r.terms_used = k - 1;
  r.error_bound = 10.0 * last_env + 8.0 * kEps * abs_sum;
  return r;
}

// E_{alpha,mu}(-x) = (1/pi) int_0^inf e^-r r^(alpha-mu)
//     [x sin(pi(mu-alpha)) + r^alpha sin(pi mu)] / |r^alpha e^(i pi alpha) + x|^2 dr
// valid for 0 < alpha < 1, mu < 1 + alpha (no poles on the principal sheet
// when the argument is negative real).
MlEvalResult integral(double alpha, double mu, double x, double y) {
  using boost::math::quadrature::exp_sinh;
  using boost::math::quadrature::tanh_sinh;
  // integrate() is not const in Boost 1.74, hence one rule set per thread.
  thread_local tanh_sinh<double> finite_rule;
  thread_local exp_sinh<double> tail_rule;

  // Bring mu into (mu - alpha - 1 ... 1] where the r = 0 singularity is mild,
  // then climb back with E_{a,m+a}(-x) = (1/Gamma(m) - E_{a,m}(-x)) / x.
  int lifts = 0;
  double base_mu = mu;
  while (base_mu > 1.0) {
    base_mu -= alpha;
    ++lifts;
  }

  const double s1 = x * boost::math::sin_pi(base_mu - alpha);
  const double s2 = boost::math::sin_pi(base_mu);
  const double c = std::cos(kPi * alpha);
  const double sn = std::sin(kPi * alpha);
  auto kernel = [&](double r) -> double {
    if (r <= 0.0) return 0.0;
    const double ra = std::pow(r, alpha);
    const double re = ra + x * c;
    const double den = re * re + x * x * sn * sn;
    return std::exp(-r + (alpha - base_mu) * std::log(r)) * (s1 + ra * s2) / den;
  };

  double err_a = 0.0, err_b = 0.0, l1_a = 0.0, l1_b = 0.0;
  std::size_t levels_a = 0, levels_b = 0;
  const double split = std::max(y, 1.0);
  const double head = finite_rule.integrate(kernel, 0.0, split, 1e-15, &err_a, &l1_a, &levels_a);
  const double tail = tail_rule.integrate(
      [&](double r) { return kernel(r); }, split, std::numeric_limits<double>::infinity(),
      1e-15, &err_b, &l1_b, &levels_b);

  MlEvalResult r;
  r.regime = MlRegime::Integral;
  double value = (head + tail) / kPi;
  double bound = (err_a + err_b + 16.0 * kEps * (l1_a + l1_b)) / kPi;
  double m = base_mu;
  for (int i = 0; i < lifts; ++i) {
    value = (recip_gamma(m) - value) / x;
    bound = (bound + 4.0 * kEps * std::abs(recip_gamma(m))) / x;
    m += alpha;
  }
  r.value = value;
  r.terms_used = static_cast<int>(levels_a + levels_b) + lifts;
  r.error_bound = bound + 4.0 * kEps * std::abs(value);
  if (!std::isfinite(r.error_bound)) r.error_bound = std::numeric_limits<double>::infinity();
  return r;
}

// alpha = 1: E_{1,mu}(-x) = e^-x / Gamma(mu) * sum_n (mu-1)/(mu-1+n) x^n/n!,
// which has no cancellation for mu > 1.
MlEvalResult exponential_series(double mu, double x) {
  MlEvalResult r;
  r.regime = MlRegime::Series;
  if (is_nonpositive_integer(mu)) {
    // Leading terms vanish: E_{1,m}(z) = z^(1-m) e^z.
    const double p = 1.0 - mu;
    r.value = std::pow(-x, p) * std::exp(-x);
    r.terms_used = 1;
    r.error_bound = 4.0 * kEps * std::abs(r.value);
    return r;
  }
  if (x == 0.0) {
    r.value = recip_gamma(mu);
    r.terms_used = 1;
    r.error_bound = kEps * std::abs(r.value);
    return r;
  }
  CompensatedSum sum;
  double abs_sum = 0.0;
  double power = 1.0;  // x^n / n!
  int n = 0;
  for (; n < kMaxSeriesTerms; ++n) {
    if (n > 0) power *= x / n;
    const double coeff = (n == 0) ? 1.0 : (mu - 1.0) / (mu - 1.0 + n);
    const double term = coeff * power;
    if (n > 2.0 * x + 2.0 && std::abs(term) <= 0.25 * kEps * std::abs(sum.value())) {
      const double scale = std::exp(-x) * recip_gamma(mu);
      r.value = scale * sum.value();
      r.terms_used = n;
      r.error_bound = std::abs(scale) * (2.0 * std::abs(term) + 8.0 * kEps * abs_sum) +
                      4.0 * kEps * std::abs(r.value);
      return r;
    }
    sum.add(term);
    abs_sum += std::abs(term);
  }
  r.value = std::exp(-x) * recip_gamma(mu) * sum.value();
  r.terms_used = n;
  r.error_bound = std::numeric_limits<double>::infinity();
  return r;
}

void validate_argument(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw DomainError("Mittag-Leffler argument must be a finite x >= 0, got " +
                      std::to_string(x));
  }
}

const MlEvalResult& tighter(const MlEvalResult& a, const MlEvalResult& b) {
  return (b.error_bound < a.error_bound) ? b : a;
}

}  // namespace

void MlParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("Mittag-Leffler order alpha must lie in (0, 1], got " +
                      std::to_string(alpha));
  }
  if (!std::isfinite(mu)) throw DomainError("Mittag-Leffler parameter mu must be finite");
}

std::string_view to_string(MlRegime regime) {
  switch (regime) {
    case MlRegime::Series:
      return "series";
    case MlRegime::Integral:
      return "integral";
    case MlRegime::Asymptotic:
      return "asymptotic";
  }
  return "unknown";
}

double recip_gamma(double y) {
  if (is_nonpositive_integer(y)) return 0.0;
  if (y > 0.0) {
    if (y < kGammaMaxArg) return 1.0 / std::tgamma(y);
    return std::exp(-std::lgamma(y));
  }
  const double s = boost::math::sin_pi(y);
  if (1.0 - y < kGammaMaxArg) return std::tgamma(1.0 - y) * s / kPi;
  return std::copysign(std::exp(std::lgamma(1.0 - y)) / kPi, s) * std::abs(s);
}

MlEvalResult ml_eval(const MlParams& params, double x) {
  params.validate();
  validate_argument(x);
  const double alpha = params.alpha;
  const double mu = params.mu;

  MlEvalResult best;
  if (alpha == 1.0) {
    best = (x <= 700.0) ? exponential_series(mu, x) : asymptotic(alpha, mu, x);
    if (best.regime == MlRegime::Asymptotic) {
      // The algebraic expansion omits the e^-x x^(1-mu) part.
      best.error_bound += std::exp(-x + std::abs(1.0 - mu) * std::log(x));
    }
  } else {
    if (x == 0.0) return series(alpha, mu, 0.0, 0.0);
    const double y = std::exp(std::log(x) / alpha);
    best.error_bound = std::numeric_limits<double>::infinity();
    if (y <= kSeriesMaxY) best = series(alpha, mu, x, y);
    if (y >= kAsymptoticMinY) best = tighter(best, asymptotic(alpha, mu, x));
    if (!(best.error_bound <= kTargetBound)) best = tighter(best, integral(alpha, mu, x, y));
  }
  if (!(best.error_bound <= kAcceptBound) || !std::isfinite(best.value)) {
    throw ConvergenceError("Mittag-Leffler evaluation did not converge for alpha=" +
                           std::to_string(alpha) + ", mu=" + std::to_string(mu) +
                           ", x=" + std::to_string(x));
  }
  return best;
}

double ml_value(double alpha, double mu, double x) { return ml_eval({alpha, mu}, x).value; }

double ml_recurrence_residual(const MlParams& params, double x) {
  const double lhs = ml_eval(params, x).value;
  const double shifted = ml_eval({params.alpha, params.mu + params.alpha}, x).value;
  return lhs - (recip_gamma(params.mu) - x * shifted);
}

double ml_asymptotic(const MlParams& params, double x, int n) {
  params.validate();
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("asymptotic expansion needs x > 0");
  }
  if (n < 1) throw DomainError("asymptotic expansion needs at least one term");
  CompensatedSum sum;
  for (int k = 1; k <= n; ++k) {
    // -(-x)^-k = (-1)^(k+1) x^-k
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    sum.add(sign * std::pow(x, -k) * recip_gamma(params.mu - k * params.alpha));
  }
  return sum.value();
}

}  // namespace fraclangevin::ml
