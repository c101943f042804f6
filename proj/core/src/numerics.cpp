#include "shockrel/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "shockrel/error.hpp"
#include "shockrel/model.hpp"

namespace shockrel {

namespace {

// 21-point Kronrod abscissae on [-1, 1] (positive half, centre last); the odd
// entries are the 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();

template <typename T>
struct Segment {
  double a;
  double b;
  T value;
  double error;

  bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename T, typename F>
Segment<T> gauss_kronrod_21(const F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(centre);
  T kronrod = fc * kWgk[10];
  T gauss{};
  double abs_sum = std::abs(fc) * kWgk[10];
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const T f1 = f(centre - dx);
    const T f2 = f(centre + dx);
    kronrod += (f1 + f2) * kWgk[j];
    abs_sum += (std::abs(f1) + std::abs(f2)) * kWgk[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
  }
  const double abs_half = std::abs(half);
  double error = std::abs((kronrod - gauss) * half);
  const double roundoff = 50.0 * kEps * abs_sum * abs_half;
  error = std::max(error, roundoff);
  return {a, b, kronrod * half, error};
}

template <typename T, typename F>
T adaptive(const F& f, double a, double b, const QuadratureConfig& cfg) {
  if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0) || cfg.max_subdivisions < 1)
    throw InputError("quadrature: tolerances must be > 0 and max_subdivisions >= 1");
  if (!(a <= b)) throw DomainError("quadrature: need a <= b");
  if (a == b) return T{};

  std::priority_queue<Segment<T>> heap;
  std::vector<Segment<T>> frozen;  // too narrow to bisect further
  auto first = gauss_kronrod_21<T>(f, a, b);
  T total = first.value;
  double total_error = first.error;
  heap.push(first);
  int subdivisions = 1;

  auto converged = [&] {
    return total_error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
  };

  while (!converged()) {
    if (heap.empty()) break;
    if (subdivisions >= cfg.max_subdivisions)
      throw ConvergenceError("quadrature: subdivision limit reached", std::real(total),
                             total_error);
    Segment<T> worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 8.0 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
      frozen.push_back(worst);
      continue;
    }
    auto left = gauss_kronrod_21<T>(f, worst.a, mid);
    auto right = gauss_kronrod_21<T>(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }

  // re-sum to shed the drift of incremental updates
  T sum{};
  double err = 0.0;
  for (const auto& s : frozen) {
    sum += s.value;
    err += s.error;
  }
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  if (!std::isfinite(std::abs(sum)))
    throw ConvergenceError("quadrature: non-finite integrand", std::real(sum), err);
  if (err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(sum)) && !frozen.empty() &&
      err > 1e3 * std::max(cfg.abs_tol, cfg.rel_tol * std::abs(sum)))
    throw ConvergenceError("quadrature: intervals collapsed before reaching tolerance",
                           std::real(sum), err);
  return sum;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg) {
  return adaptive<double>(f, a, b, cfg);
}

double integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                 const QuadratureConfig& cfg) {
  if (breakpoints.size() < 2) throw InputError("quadrature: need at least two breakpoints");
  double sum = 0.0;
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    sum += adaptive<double>(f, breakpoints[i - 1], breakpoints[i], cfg);
  return sum;
}

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f, double a,
                               double b, const QuadratureConfig& cfg) {
  return adaptive<std::complex<double>>(f, a, b, cfg);
}

std::vector<double> convolution_breakpoints(const ModelSpec& spec, double t) {
  std::vector<double> points{0.0, t};
  auto add_knots = [&](const PiecewiseLinear& table) {
    for (const auto& k : table.knots())
      if (k.t > 0.0 && k.t < t) points.push_back(k.t);
  };
  if (spec.intensity.family() == IntensityProfile::Family::kTabulated)
    add_knots(spec.intensity.table());
  if (spec.fatality.family() == FatalityProfile::Family::kTabulated)
    add_knots(spec.fatality.table());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

double convolve_a(const ModelSpec& spec, double t, const QuadratureConfig& cfg) {
  if (!(t >= 0.0)) throw DomainError("convolve_a: negative time");
  if (t == 0.0) return 0.0;
  const auto points = convolution_breakpoints(spec, t);
  return integrate(
      [&](double w) {
        return spec.increments.transform_first(t - w) * spec.fatality.survive(w) *
               spec.intensity.rate(w);
      },
      points, cfg);
}

double invert_monotone(const std::function<double(double)>& g, double y, double lo, double hi) {
  if (!(lo <= hi)) throw BracketError("invert_monotone: empty bracket");
  double glo = g(lo) - y;
  double ghi = g(hi) - y;
  const double tol = 1e-12 * std::max(1.0, std::abs(y));
  if (glo > tol || ghi < -tol)
    throw BracketError("invert_monotone: target " + std::to_string(y) + " not in [g(" +
                       std::to_string(lo) + "), g(" + std::to_string(hi) + ")]");
  if (std::abs(glo) <= tol) return lo;
  if (std::abs(ghi) <= tol) return hi;

  // Illinois regula falsi with a bisection step whenever the bracket stalls.
  int side = 0;
  for (int iter = 0; iter < 400; ++iter) {
    double x = (lo * ghi - hi * glo) / (ghi - glo);
    if (!(x > lo && x < hi) || iter % 4 == 3) x = 0.5 * (lo + hi);
    const double gx = g(x) - y;
    if (std::abs(gx) <= tol) return x;
    if (gx < 0.0) {
      lo = x;
      glo = gx;
      if (side == -1) ghi *= 0.5;
      side = -1;
    } else {
      hi = x;
      ghi = gx;
      if (side == 1) glo *= 0.5;
      side = 1;
    }
    if (hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) ||
        !(0.5 * (lo + hi) > lo && 0.5 * (lo + hi) < hi))
      return 0.5 * (lo + hi);
  }
  return 0.5 * (lo + hi);
}

namespace {

constexpr int kGammaMaxIter = 100000;

// P(a, x) by its power series; good for x < a + 1.
double gamma_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < kGammaMaxIter; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by modified Lentz continued fraction; good for x >= a + 1.
double gamma_continued_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kGammaMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_lower_gamma(double a, double x) {
  if (!(a > 0.0)) throw DomainError("regularized_lower_gamma: a must be > 0");
  if (!(x >= 0.0)) throw DomainError("regularized_lower_gamma: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return std::min(1.0, gamma_series(a, x));
  return std::max(0.0, 1.0 - gamma_continued_fraction(a, x));
}

double regularized_upper_gamma(double a, double x) {
  if (!(a > 0.0)) throw DomainError("regularized_upper_gamma: a must be > 0");
  if (!(x >= 0.0)) throw DomainError("regularized_upper_gamma: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return std::max(0.0, 1.0 - gamma_series(a, x));
  return std::min(1.0, gamma_continued_fraction(a, x));
}

double gamma_density(double shape, double rate, double x) {
  if (x < 0.0) return 0.0;
  if (x == 0.0) {
    if (shape < 1.0) return HUGE_VAL;
    return shape == 1.0 ? rate : 0.0;
  }
  return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x -
                  std::lgamma(shape));
}

namespace {

double fixed_talbot(const std::function<std::complex<double>(std::complex<double>)>& F, double x,
                    int nodes) {
  using std::numbers::pi;
  const double r = 2.0 * nodes / (5.0 * x);
  const std::complex<double> f0 = F(r);
  double acc = 0.5 * std::real(f0) * std::exp(r * x);
  for (int k = 1; k < nodes; ++k) {
    const double theta = k * pi / nodes;
    const double cot = std::cos(theta) / std::sin(theta);
    const std::complex<double> s(r * theta * cot, r * theta);
    const double sigma = theta + (theta * cot - 1.0) * cot;
    const std::complex<double> term = std::exp(x * s) * F(s) * std::complex<double>(1.0, sigma);
    acc += std::real(term);
  }
  return acc * r / nodes;
}

double euler_summation(const std::function<std::complex<double>(std::complex<double>)>& F,
                       double x, int terms) {
  using std::numbers::pi;
  constexpr double kA = 18.4;  // discretization error ~ exp(-A) for |f| <= 1
  constexpr int kBinomial = 60;
  const double scale = std::exp(kA / 2.0) / x;
  const int total = terms + kBinomial;
  std::vector<double> partial(static_cast<std::size_t>(total) + 1);
  double sum = 0.5 * std::real(F(kA / (2.0 * x)));
  partial[0] = sum;
  for (int k = 1; k <= total; ++k) {
    const std::complex<double> s(kA / (2.0 * x), k * pi / x);
    sum += (k % 2 == 0 ? 1.0 : -1.0) * std::real(F(s));
    partial[static_cast<std::size_t>(k)] = sum;
  }
  double acc = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= kBinomial; ++k) {
    acc += binom * partial[static_cast<std::size_t>(terms + k)];
    binom = binom * (kBinomial - k) / (k + 1);
  }
  return scale * acc / std::ldexp(1.0, kBinomial);
}

}  // namespace

double laplace_invert(const std::function<std::complex<double>(std::complex<double>)>& F,
                      double x, const InversionConfig& cfg) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("laplace_invert: abscissa must be > 0");
  double value = 0.0;
  switch (cfg.algorithm) {
    case InversionConfig::Algorithm::kFixedTalbot:
      if (cfg.talbot_nodes < 8) throw InputError("laplace_invert: need at least 8 Talbot nodes");
      value = fixed_talbot(F, x, cfg.talbot_nodes);
      break;
    case InversionConfig::Algorithm::kEulerSummation:
      if (cfg.euler_terms < 8) throw InputError("laplace_invert: need at least 8 Euler terms");
      value = euler_summation(F, x, cfg.euler_terms);
      break;
  }
  if (!std::isfinite(value)) throw InversionError("laplace_invert: non-finite result");
  return value;
}

double inversion_accuracy(InversionConfig::Algorithm algorithm) {
  return algorithm == InversionConfig::Algorithm::kFixedTalbot ? 1e-8 : 1e-4;
}

}  // namespace shockrel
