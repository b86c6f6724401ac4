#include "quadrature.hpp"

#include <cmath>
#include <array>
#include <queue>
#include <vector>

#include "errors.hpp"

namespace sqsd::quad {

namespace {

// Gauss 7 / Kronrod 15 pair on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr std::array<double, 4> kWg = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Panel {
  double a, b;
  double value;
  double abs_value;  // integral of |f| over the panel, for the roundoff floor
  double err;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fc = f(c);
  double kron = kWgk[7] * fc;
  double absk = kWgk[7] * std::fabs(fc);
  double gauss = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    double dx = h * kXgk[i];
    double f1 = f(c - dx), f2 = f(c + dx);
    kron += kWgk[i] * (f1 + f2);
    absk += kWgk[i] * (std::fabs(f1) + std::fabs(f2));
    if (i % 2 == 1) gauss += kWg[i / 2] * (f1 + f2);
  }
  return {a, b, kron * h, absk * std::fabs(h), std::fabs((kron - gauss) * h)};
}

struct WorseErr {
  bool operator()(const Panel& x, const Panel& y) const { return x.err < y.err; }
};

}  // namespace

Integral integrate_adaptive(const std::function<double(double)>& f, double lo,
                            double hi, double tol) {
  if (!(lo < hi)) throw DomainError("integrate_adaptive: need lo < hi");
  if (!(tol > 0.0)) throw DomainError("integrate_adaptive: need tol > 0");

  constexpr int kMaxPanels = 30000;
  std::priority_queue<Panel, std::vector<Panel>, WorseErr> heap;
  Panel first = gk15(f, lo, hi);
  double total = first.value;
  double total_abs = first.abs_value;
  double total_err = first.err;
  heap.push(first);
  int n_panels = 1;

  while (total_err > tol) {
    // nothing left to gain once the estimate sits at the rounding floor
    if (total_err <= 60.0 * 1.1e-16 * total_abs) break;
    if (n_panels >= kMaxPanels) {
      throw ConvergenceError("integrate_adaptive: subdivision limit reached");
    }
    Panel worst = heap.top();
    heap.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      // interval at floating-point resolution; accept as-is
      continue;
    }
    Panel left = gk15(f, worst.a, mid);
    Panel right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    total_err += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
    ++n_panels;
  }
  return {total, total_err};
}

Integral integrate_reciprocal_tail(const std::function<double(double)>& f,
                                   double x0, double tol, int power) {
  if (!(x0 > 0.0)) throw DomainError("integrate_reciprocal_tail: need x0 > 0");
  if (power < 1) throw DomainError("integrate_reciprocal_tail: need power >= 1");
  const double p = power;
  auto g = [&f, p](double s) -> double {
    if (s <= 0.0) return 0.0;
    double x = std::pow(s, -p);
    return p * f(x) * std::pow(s, -p - 1.0);
  };
  double s_hi = std::pow(x0, -1.0 / p);
  return integrate_adaptive(g, 0.0, s_hi, tol);
}

}  // namespace sqsd::quad
