#include "flattop/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace flattop::quad {

double simpson(const std::function<double(double)>& f, double a, double b, std::size_t intervals)
{
  if (intervals < 2)
    intervals = 2;
  if (intervals % 2 == 1)
    ++intervals;
  const double step = (b - a) / static_cast<double>(intervals);
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i < intervals; ++i) {
    const double v = f(a + step * static_cast<double>(i));
    (i % 2 == 1 ? odd : even) += v;
  }
  return step / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

namespace {

struct Panel
{
  double a, m, b;
  double fa, fm, fb;
  double whole;
};

double adaptive_step(const std::function<double(double)>& f, const Panel& p, double tol, int depth)
{
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (p.m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
  const double right = (p.b - p.m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_step(f, {p.a, lm, p.m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1) +
         adaptive_step(f, {p.m, rm, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f,
                        double a,
                        double b,
                        double tol,
                        int max_depth)
{
  if (a == b)
    return 0.0;
  // seed with a few panels so an integrand that happens to vanish at the
  // initial Simpson nodes is not accepted prematurely
  constexpr int kSeedPanels = 8;
  const double width = (b - a) / kSeedPanels;
  double total = 0.0;
  for (int i = 0; i < kSeedPanels; ++i) {
    const double pa = a + width * i;
    const double pb = (i + 1 == kSeedPanels) ? b : pa + width;
    const double pm = 0.5 * (pa + pb);
    const double fa = f(pa);
    const double fm = f(pm);
    const double fb = f(pb);
    const double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
    total += adaptive_step(f, {pa, pm, pb, fa, fm, fb, whole}, tol / kSeedPanels, max_depth);
  }
  return total;
}

double integrate_samples(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size())
    throw std::invalid_argument("integrate_samples: size mismatch");
  const std::size_t n = x.size();
  if (n < 2)
    return 0.0;

  const double step = (x[n - 1] - x[0]) / static_cast<double>(n - 1);
  bool uniform = n % 2 == 1 && n >= 3;
  for (std::size_t i = 1; uniform && i < n; ++i)
    uniform = std::fabs((x[i] - x[i - 1]) - step) <= 1e-9 * std::fabs(step);

  if (uniform) {
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i)
      (i % 2 == 1 ? odd : even) += y[i];
    return step / 3.0 * (y[0] + y[n - 1] + 4.0 * odd + 2.0 * even);
  }

  double acc = 0.0;
  for (std::size_t i = 1; i < n; ++i)
    acc += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return acc;
}

std::vector<double> linspace(double lo, double hi, std::size_t count)
{
  if (count == 0)
    return {};
  if (count == 1)
    return {lo};
  std::vector<double> out(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

} // namespace flattop::quad
