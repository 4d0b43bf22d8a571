#include "decolab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>
#include <sstream>

#include "decolab/core.hpp"

namespace decolab::quad {
namespace {

// Kronrod 21-point abscissae and weights, with the embedded 10-point Gauss
// weights (QUADPACK qk21).
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod21(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = 0.0;
  double resk = fc * kWgk[10];
  double resabs = std::abs(resk);
  double fv1[10], fv2[10];
  for (int j = 0; j < 5; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 5; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }
  const double value = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double error = std::abs((resk - resg) * half);
  if (resasc != 0.0 && error != 0.0) {
    error = resasc * std::min(1.0, std::pow(200.0 * error / resasc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    error = std::max(50.0 * eps * resabs, error);
  }
  return {a, b, value, error};
}

}  // namespace

Result adaptive(const Integrand& f, std::span<const double> breakpoints,
                const Options& options) {
  if (breakpoints.size() < 2) throw DomainError("quadrature needs at least two breakpoints");
  std::priority_queue<Segment> queue;
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i])) {
      if (breakpoints[i + 1] == breakpoints[i]) continue;
      throw DomainError("quadrature breakpoints must be increasing");
    }
    Segment s = kronrod21(f, breakpoints[i], breakpoints[i + 1]);
    total += s.value;
    total_error += s.error;
    queue.push(s);
  }
  if (queue.empty()) return {0.0, 0.0, 0};

  auto tolerance = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(total)); };
  std::size_t intervals = queue.size();
  while (total_error > tolerance()) {
    if (intervals >= options.max_intervals) {
      std::ostringstream msg;
      msg << "adaptive quadrature did not converge: estimate " << total << ", error "
          << total_error << " after " << intervals << " intervals";
      throw ConvergenceError(msg.str(), total);
    }
    const Segment worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval cannot be split further in double precision; accept what we have.
      break;
    }
    queue.pop();
    const Segment left = kronrod21(f, worst.a, mid);
    const Segment right = kronrod21(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++intervals;
    // Periodically resum to avoid drift from the running updates.
    if (intervals % 4096 == 0) {
      auto copy = queue;
      total = 0.0;
      total_error = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_error += copy.top().error;
        copy.pop();
      }
    }
  }
  if (!std::isfinite(total)) throw ConvergenceError("quadrature produced a non-finite value", total);
  return {total, total_error, intervals};
}

Result adaptive(const Integrand& f, double a, double b, const Options& options,
                std::size_t initial_panels) {
  if (a == b) return {0.0, 0.0, 0};
  if (!(b > a)) throw DomainError("quadrature interval must satisfy a < b");
  initial_panels = std::max<std::size_t>(1, initial_panels);
  std::vector<double> points(initial_panels + 1);
  for (std::size_t i = 0; i <= initial_panels; ++i) {
    points[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(initial_panels);
  }
  points.back() = b;
  return adaptive(f, points, options);
}

const LegendreRule& legendre_rule(std::size_t order) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<LegendreRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[order];
  if (slot) return *slot;

  auto rule = std::make_unique<LegendreRule>();
  rule->nodes.resize(order);
  rule->weights.resize(order);
  const std::size_t half = (order + 1) / 2;
  const double n = static_cast<double>(order);
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= order; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) {
        p1 = x;
        p0 = 1.0;
      }
      derivative = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / derivative;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    rule->nodes[i] = -x;
    rule->nodes[order - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
    rule->weights[i] = w;
    rule->weights[order - 1 - i] = w;
  }
  slot = std::move(rule);
  return *slot;
}

double legendre(const Integrand& f, double a, double b, std::size_t order) {
  const LegendreRule& rule = legendre_rule(order);
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < order; ++i) sum += rule.weights[i] * f(center + half * rule.nodes[i]);
  return sum * half;
}

double legendre_doubling(const Integrand& f, double a, double b, double rel_tol,
                         double abs_tol, std::size_t start_order, std::size_t max_order) {
  double previous = legendre(f, a, b, start_order);
  for (std::size_t order = 2 * start_order; order <= max_order; order *= 2) {
    const double current = legendre(f, a, b, order);
    if (std::abs(current - previous) <= std::max(abs_tol, rel_tol * std::abs(current))) {
      return current;
    }
    previous = current;
  }
  std::ostringstream msg;
  msg << "Gauss-Legendre node doubling did not converge up to order " << max_order;
  throw ConvergenceError(msg.str(), previous);
}

}  // namespace decolab::quad
