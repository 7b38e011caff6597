#include "lrdustat/kernel.hpp"

#include "lrdustat/errors.hpp"
#include "lrdustat/hermite.hpp"
#include "lrdustat/special.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lrdustat::kernels {

Kernel cusum(int sign) {
  if (sign != 1 && sign != -1) throw ParameterError("CUSUM sign must be +1 or -1");
  Kernel h;
  h.name = sign > 0 ? "cusum" : "cusum:flip";
  h.sign = sign;
  const double s = static_cast<double>(sign);
  h.eval = [s](double x, double y) { return s * (x - y); };
  h.tags = KernelTag::FastCusum;
  h.coeff_provider = [s](int k, int l) {
    if (k == 1 && l == 0) return s;
    if (k == 0 && l == 1) return -s;
    return 0.0;
  };
  return h;
}

Kernel wilcoxon() {
  Kernel h;
  h.name = "wilcoxon";
  h.eval = [](double x, double y) { return x <= y ? 1.0 : 0.0; };
  h.tags = KernelTag::FastWilcoxon | KernelTag::Discontinuous;
  h.tv_bound = 1.0;
  h.coeff_provider = [](int k, int l) { return wilcoxon_coeff_closed_form(k, l); };
  return h;
}

Kernel wilcoxon_complement() {
  Kernel h;
  h.name = "wilcoxon-complement";
  h.eval = [](double x, double y) { return x > y ? 1.0 : 0.0; };
  h.tags = KernelTag::Discontinuous;
  h.tv_bound = 1.0;
  h.coeff_provider = [](int k, int l) {
    const double a = wilcoxon_coeff_closed_form(k, l);
    return (k == 0 && l == 0) ? 1.0 - a : -a;
  };
  return h;
}

Kernel gaussian_bump() {
  Kernel h;
  h.name = "bump";
  h.eval = [](double x, double y) { return std::exp(-x * x - y * y); };
  return h;
}

Kernel robust_score(std::string name, std::function<double(double)> psi,
                    std::optional<double> tv_bound) {
  // Bounded-score check: the sup over a wide log-spaced probe must not
  // exceed the sup over a moderate window.
  double near_sup = 0.0;
  double far_sup = 0.0;
  for (int e = -40; e <= 60; ++e) {
    const double t = std::pow(10.0, e / 10.0);
    for (double v : {psi(t), psi(-t)}) {
      if (!std::isfinite(v)) throw ParameterError("robust score '" + name + "' is not finite");
      if (t <= 100.0) near_sup = std::max(near_sup, std::abs(v));
      far_sup = std::max(far_sup, std::abs(v));
    }
  }
  if (far_sup > 1.01 * near_sup + 1e-12) {
    throw ParameterError("robust score '" + name + "' does not appear bounded");
  }
  Kernel h;
  h.name = std::move(name);
  h.psi = psi;
  h.eval = [psi](double x, double y) { return psi(x - y); };
  h.tags = KernelTag::RobustScore;
  h.tv_bound = tv_bound;
  return h;
}

Kernel huber(double delta) {
  if (!(delta > 0.0)) throw ParameterError("Huber delta must be positive");
  std::ostringstream name;
  name << "huber:" << delta;
  return robust_score(name.str(), [delta](double t) { return std::clamp(t, -delta, delta); },
                      2.0 * delta);
}

Kernel tukey_biweight(double c) {
  if (!(c > 0.0)) throw ParameterError("Tukey biweight constant must be positive");
  std::ostringstream name;
  name << "tukey:" << c;
  // Extremes at +/- c / sqrt(5); the score runs 0 -> -max -> +max -> 0.
  const double peak = (c / std::sqrt(5.0)) * (16.0 / 25.0);
  return robust_score(
      name.str(),
      [c](double t) {
        if (std::abs(t) > c) return 0.0;
        const double u = 1.0 - (t / c) * (t / c);
        return t * u * u;
      },
      4.0 * peak);
}

Kernel hermite_product(int k, int l) {
  if (k < 0 || l < 0) throw ParameterError("Hermite indices must be nonnegative");
  Kernel h;
  std::ostringstream name;
  name << "hermite:" << k << "," << l;
  h.name = name.str();
  h.eval = [k, l](double x, double y) { return hermite_eval(k, x) * hermite_eval(l, y); };
  const double norm = factorial(k) * factorial(l);
  h.coeff_provider = [k, l, norm](int kk, int ll) { return (kk == k && ll == l) ? norm : 0.0; };
  return h;
}

Kernel hermite_difference() {
  Kernel h;
  h.name = "hermite-difference";
  h.eval = [](double x, double y) { return hermite_eval(1, x) - hermite_eval(1, y); };
  h.coeff_provider = [](int k, int l) {
    if (k == 1 && l == 0) return 1.0;
    if (k == 0 && l == 1) return -1.0;
    return 0.0;
  };
  return h;
}

Kernel constant(double value) {
  Kernel h;
  std::ostringstream name;
  name << "constant:" << value;
  h.name = name.str();
  h.eval = [value](double, double) { return value; };
  h.tv_bound = 0.0;
  h.coeff_provider = [value](int k, int l) { return (k == 0 && l == 0) ? value : 0.0; };
  return h;
}

Kernel zero() {
  Kernel h = constant(0.0);
  h.name = "zero";
  return h;
}

Kernel scaled(const Kernel& h, double c) {
  Kernel out;
  std::ostringstream name;
  name << c << "*" << h.name;
  out.name = name.str();
  auto inner = h.eval;
  out.eval = [inner, c](double x, double y) { return c * inner(x, y); };
  if (h.has(KernelTag::Discontinuous)) out.tags = KernelTag::Discontinuous;
  if (h.tv_bound) out.tv_bound = std::abs(c) * *h.tv_bound;
  if (h.coeff_provider) {
    auto provider = h.coeff_provider;
    out.coeff_provider = [provider, c](int k, int l) { return c * provider(k, l); };
  }
  if (h.psi && h.has(KernelTag::RobustScore)) {
    auto psi = h.psi;
    out.psi = [psi, c](double t) { return c * psi(t); };
    out.tags = out.tags | KernelTag::RobustScore;
  }
  return out;
}

Kernel custom(std::string name, std::function<double(double, double)> eval) {
  Kernel h;
  h.name = std::move(name);
  h.eval = std::move(eval);
  return h;
}

Kernel from_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto number = [&](const std::string& text) {
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      throw ParameterError("cannot parse numeric kernel parameter in '" + spec + "'");
    }
  };
  if (head == "cusum") {
    if (arg.empty()) return cusum(1);
    if (arg == "flip") return cusum(-1);
  } else if (head == "wilcoxon" && arg.empty()) {
    return wilcoxon();
  } else if ((head == "bump" || head == "gaussian-bump") && arg.empty()) {
    return gaussian_bump();
  } else if (head == "huber") {
    return huber(arg.empty() ? 1.345 : number(arg));
  } else if (head == "tukey") {
    return tukey_biweight(arg.empty() ? 4.685 : number(arg));
  } else if (head == "hermite") {
    const auto comma = arg.find(',');
    if (comma != std::string::npos) {
      return hermite_product(static_cast<int>(number(arg.substr(0, comma))),
                             static_cast<int>(number(arg.substr(comma + 1))));
    }
  } else if (head == "zero" && arg.empty()) {
    return zero();
  }
  throw ParameterError("unknown kernel '" + spec +
                       "' (expected cusum, cusum:flip, wilcoxon, bump, huber:<d>, tukey:<c>, "
                       "hermite:<k>,<l>, zero)");
}

}  // namespace lrdustat::kernels

namespace lrdustat {

namespace {

double total_variation(const std::function<double(double)>& f, double lo, double hi, int points) {
  double tv = 0.0;
  double prev = f(lo);
  for (int i = 1; i < points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    const double v = f(x);
    tv += std::abs(v - prev);
    prev = v;
  }
  return tv;
}

}  // namespace

TvProbe probe_total_variation(const Kernel& h) {
  constexpr double kNarrow = 8.0;
  constexpr double kWide = 64.0;
  constexpr int kPoints = 20001;
  const double probes[] = {-2.0, -0.5, 0.0, 0.7, 1.9};
  TvProbe out;
  double narrow = 0.0;
  for (double p : probes) {
    auto first = [&](double x) { return h(x, p); };
    auto second = [&](double y) { return h(p, y); };
    narrow = std::max({narrow, total_variation(first, -kNarrow, kNarrow, kPoints),
                       total_variation(second, -kNarrow, kNarrow, kPoints)});
    out.max_tv_first = std::max(out.max_tv_first, total_variation(first, -kWide, kWide, kPoints));
    out.max_tv_second =
        std::max(out.max_tv_second, total_variation(second, -kWide, kWide, kPoints));
  }
  const double wide = std::max(out.max_tv_first, out.max_tv_second);
  out.growth = narrow > 0.0 ? wide / narrow : 1.0;
  out.bounded_likely = out.growth < 1.5;
  if (!out.bounded_likely) {
    std::ostringstream msg;
    msg << "tv-unbounded: total variation of '" << h.name << "' grows with the probe window (x"
        << out.growth << "); bounded-variation conditions are violated";
    out.warnings.push_back(msg.str());
  }
  if (h.tv_bound && wide > *h.tv_bound * (1.0 + 1e-6) + 1e-12) {
    std::ostringstream msg;
    msg << "tv-bound-exceeded: probed variation " << wide << " exceeds declared bound "
        << *h.tv_bound;
    out.warnings.push_back(msg.str());
  }
  return out;
}

}  // namespace lrdustat
