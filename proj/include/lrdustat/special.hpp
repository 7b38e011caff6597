#ifndef LRDUSTAT_SPECIAL_HPP
#define LRDUSTAT_SPECIAL_HPP

// Special functions shared by the coefficient and scaling code.

namespace lrdustat {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438187;

/// Gamma function via the Lanczos approximation (g = 7, 9 terms) with
/// reflection for x < 1/2. Relative error below 1e-13 on (0, 20).
double gamma_lanczos(double x);

/// log Gamma(x) for x > 0, same approximation evaluated in log space.
double log_gamma_lanczos(double x);

/// k! for small k exactly, larger k through exp(log_factorial(k)).
double factorial(int k);

/// log(k!). Exact table up to 20, Lanczos log-gamma beyond.
double log_factorial(int k);

/// Standard normal density.
double normal_pdf(double x);

/// Standard normal distribution function.
double normal_cdf(double x);

/// 1 - Phi(x), accurate in the upper tail.
double normal_sf(double x);

/// Inverse of the standard normal distribution function: Acklam rational
/// approximation polished by one Halley step against erfc.
double normal_quantile(double p);

}  // namespace lrdustat

#endif  // LRDUSTAT_SPECIAL_HPP
