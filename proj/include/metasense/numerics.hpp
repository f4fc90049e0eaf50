#pragma once

// Special functions, adaptive quadrature and seeded random streams.
//
// Everything here is pure and thread-safe. A RandomStream is a value type
// owned by exactly one consumer.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace metasense {

// A probability strictly inside (0,1), so that logit() stays finite.
class Probability {
public:
    explicit Probability(double value);

    double value() const noexcept { return value_; }
    operator double() const noexcept { return value_; }

private:
    double value_;
};

// Correlation coefficient in [-1,1].
class Correlation {
public:
    explicit Correlation(double value);

    double value() const noexcept { return value_; }
    operator double() const noexcept { return value_; }

private:
    double value_;
};

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kSqrt2 = 1.414213562373095048801688724209698079;
inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934381868;

inline double logit(double p) { return std::log(p / (1.0 - p)); }

// Stable for large |x|.
inline double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double std_normal_pdf(double x);

// Phi(x). Saturates to exactly 0 / 1 far in the tails.
double std_normal_cdf(double x);

// Inverse of Phi on (0,1). Throws std::domain_error outside the open interval.
double std_normal_quantile(double p);

// P(X <= h, Y <= k) for a standard bivariate normal with correlation rho.
//
// Drezner-Wesolowsky with Genz's Gauss-Legendre refinements; absolute error
// is below 1e-14 in practice. h and k may be +/-infinity. Throws
// std::domain_error for non-finite rho.
double bivariate_normal_cdf(double h, double k, Correlation rho);
double bivariate_normal_cdf(double h, double k, double rho);

// -----------------------------------------------------------------------------
// Quadrature
// -----------------------------------------------------------------------------

// Where the integrand lives and how the integration variable is mapped.
//   finite:        [lower, upper] as given
//   real_line:     (-inf, inf), mapped onto (-1,1) via x = t / (1 - t^2)
//   unit_interval: (0,1) with c = sigmoid(z), integrating f(c) c (1-c) dz over
//                  the real line. A logit-normal density becomes a Gaussian
//                  in z, so the endpoint singularities disappear.
//   above:         [lower, inf), x = lower + t / (1 - t)
//   below:         (-inf, upper], x = upper - t / (1 - t)
enum class Domain { finite, real_line, unit_interval, above, below };

struct QuadratureOptions {
    double abs_tol = 1e-9;
    double rel_tol = 0.0;
    int max_subdivisions = 2000;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, QuadratureResult partial)
        : std::runtime_error(what), partial_(partial) {}
    const QuadratureResult& partial() const noexcept { return partial_; }

private:
    QuadratureResult partial_;
};

using RealFunction = std::function<double(double)>;

// Adaptive 15-point Gauss-Kronrod with bisection of the worst interval.
// Never throws on non-convergence; inspect QuadratureResult::converged.
QuadratureResult integrate_1d(const RealFunction& f, Domain domain,
                              const QuadratureOptions& options = {},
                              double lower = 0.0, double upper = 1.0);

// Same, but throws QuadratureError when the tolerance is not reached.
double integrate_or_throw(const RealFunction& f, Domain domain,
                          const QuadratureOptions& options = {},
                          double lower = 0.0, double upper = 1.0);

// E[g(C)] for C ~ LogitNormal(mu, sigma), integrated as
// int phi(z) g(sigmoid(mu + sigma z)) dz. The integrand receives the
// logit-space value mu + sigma z so callers never lose precision near 0 or 1.
QuadratureResult logit_normal_expectation(const RealFunction& g_of_logit,
                                          double mu, double sigma,
                                          const QuadratureOptions& options = {});

// -----------------------------------------------------------------------------
// Random streams
// -----------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t& state);

// Mixes a base seed with an index into a fresh, well-separated seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// xoshiro256** keyed by (seed, stream_id). The output sequence is a pure
// function of the pair, independent of thread count or platform.
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t seed, std::uint64_t stream_id);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return next(); }

    std::uint64_t next();

    // Uniform on [0,1) with 53 random bits.
    double uniform();
    // Uniform on the open interval (0,1).
    double uniform_open();
    // Standard normal by inversion; does not depend on the standard library's
    // distribution classes.
    double normal();
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::uint64_t s_[4];
};

}  // namespace metasense
