#include "metasense/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

namespace metasense {

Probability::Probability(double value) : value_(value) {
    if (!(value > 0.0 && value < 1.0)) {
        std::ostringstream msg;
        msg << "probability must lie strictly inside (0,1), got " << value;
        throw std::domain_error(msg.str());
    }
}

Correlation::Correlation(double value) : value_(value) {
    if (!std::isfinite(value) || std::abs(value) > 1.0) {
        std::ostringstream msg;
        msg << "correlation must lie in [-1,1], got " << value;
        throw std::domain_error(msg.str());
    }
}

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream msg;
        msg << "normal quantile requires p in (0,1), got " << p;
        throw std::domain_error(msg.str());
    }

    // Acklam's rational approximation (relative error ~1e-9) ...
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // ... polished by one Halley step against erfc.
    const double e = 0.5 * std::erfc(-x / kSqrt2) - p;
    const double u = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

namespace {

// Upper orthant P(X > h, Y > k). Port of Genz's BVNU.
double bvn_upper(double h, double k, double r) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (h == inf || k == inf) return 0.0;
    if (h == -inf) return k == -inf ? 1.0 : std_normal_cdf(-k);
    if (k == -inf) return std_normal_cdf(-h);
    if (r == 0.0) return std_normal_cdf(-h) * std_normal_cdf(-k);

    static constexpr std::array<double, 3> w6 = {0.1713244923791705, 0.3607615730481384,
                                                 0.4679139345726904};
    static constexpr std::array<double, 3> x6 = {0.9324695142031522, 0.6612093864662647,
                                                 0.2386191860831970};
    static constexpr std::array<double, 6> w12 = {0.04717533638651177, 0.1069393259953183,
                                                  0.1600783285433464,  0.2031674267230659,
                                                  0.2334925365383547,  0.2491470458134029};
    static constexpr std::array<double, 6> x12 = {0.9815606342467191, 0.9041172563704750,
                                                  0.7699026741943050, 0.5873179542866171,
                                                  0.3678314989981802, 0.1252334085114692};
    static constexpr std::array<double, 10> w20 = {
        0.01761400713915212, 0.04060142980038694, 0.06267204833410906, 0.08327674157670475,
        0.1019301198172404,  0.1181945319615184,  0.1316886384491766,  0.1420961093183821,
        0.1491729864726037,  0.1527533871307259};
    static constexpr std::array<double, 10> x20 = {
        0.9931285991850949, 0.9639719272779138, 0.9122344282513259, 0.8391169718222188,
        0.7463319064601508, 0.6360536807265150, 0.5108670019508271, 0.3737060887154196,
        0.2277858511416451, 0.07652652113349733};

    const double* w;
    const double* x;
    int lg;
    const double ar = std::abs(r);
    if (ar < 0.3) {
        w = w6.data(), x = x6.data(), lg = 3;
    } else if (ar < 0.75) {
        w = w12.data(), x = x12.data(), lg = 6;
    } else {
        w = w20.data(), x = x20.data(), lg = 10;
    }

    const double tp = 2.0 * kPi;
    double hk = h * k;
    double bvn = 0.0;

    if (ar < 0.925) {
        const double hs = 0.5 * (h * h + k * k);
        const double asr = 0.5 * std::asin(r);
        for (int i = 0; i < lg; ++i) {
            for (double node : {1.0 - x[i], 1.0 + x[i]}) {
                const double sn = std::sin(asr * node);
                bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
            }
        }
        return std::clamp(bvn * asr / tp + std_normal_cdf(-h) * std_normal_cdf(-k), 0.0, 1.0);
    }

    if (r < 0.0) {
        k = -k;
        hk = -hk;
    }
    if (ar < 1.0) {
        const double as = 1.0 - r * r;
        double a = std::sqrt(as);
        const double bs = (h - k) * (h - k);
        const double c = (4.0 - hk) / 8.0;
        const double d = (12.0 - hk) / 80.0;
        double asr = -0.5 * (bs / as + hk);
        if (asr > -100.0) {
            bvn = a * std::exp(asr) * (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
        }
        if (hk > -100.0) {
            const double bb = std::sqrt(bs);
            const double sp = std::sqrt(tp) * std_normal_cdf(-bb / a);
            bvn -= std::exp(-0.5 * hk) * sp * bb * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
        }
        a *= 0.5;
        double sum = 0.0;
        for (int i = 0; i < lg; ++i) {
            for (double node : {1.0 - x[i], 1.0 + x[i]}) {
                const double xs = (a * node) * (a * node);
                asr = -0.5 * (bs / xs + hk);
                if (asr > -100.0) {
                    const double sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
                    const double rs = std::sqrt(1.0 - xs);
                    const double ep = std::exp(-0.5 * hk * xs / ((1.0 + rs) * (1.0 + rs))) / rs;
                    sum += w[i] * std::exp(asr) * (sp - ep);
                }
            }
        }
        bvn = (a * sum - bvn) / tp;
    }

    if (r > 0.0) {
        bvn += std_normal_cdf(-std::max(h, k));
    } else if (h >= k) {
        bvn = -bvn;
    } else {
        const double l = h < 0.0 ? std_normal_cdf(k) - std_normal_cdf(h)
                                  : std_normal_cdf(-h) - std_normal_cdf(-k);
        bvn = l - bvn;
    }
    return std::clamp(bvn, 0.0, 1.0);
}

}  // namespace

double bivariate_normal_cdf(double h, double k, Correlation rho) {
    if (std::isnan(h) || std::isnan(k)) {
        throw std::domain_error("bivariate normal cdf: NaN limit");
    }
    return bvn_upper(-h, -k, rho.value());
}

double bivariate_normal_cdf(double h, double k, double rho) {
    if (!std::isfinite(rho)) {
        throw std::domain_error("bivariate normal cdf: correlation must be finite");
    }
    return bivariate_normal_cdf(h, k, Correlation(rho));
}

// -----------------------------------------------------------------------------
// Quadrature
// -----------------------------------------------------------------------------

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (and the centre).
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double lower;
    double upper;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gauss_kronrod15(const F& f, double lower, double upper, int& evaluations) {
    const double centre = 0.5 * (lower + upper);
    const double half = 0.5 * (upper - lower);

    const double fc = f(centre);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double pair = f(centre - dx) + f(centre + dx);
        kronrod += kKronrodWeights[j] * pair;
        if (j % 2 == 1) {
            gauss += kGaussWeights[j / 2] * pair;
        }
    }
    evaluations += 15;
    kronrod *= half;
    gauss *= half;
    return {lower, upper, kronrod, std::abs(kronrod - gauss)};
}

template <class F>
QuadratureResult adaptive(const F& f, double lower, double upper, int initial_pieces,
                          const QuadratureOptions& options) {
    QuadratureResult result;
    std::priority_queue<Segment> heap;
    double total = 0.0;
    double total_error = 0.0;

    const double width = (upper - lower) / initial_pieces;
    for (int i = 0; i < initial_pieces; ++i) {
        const double a = lower + i * width;
        const double b = (i + 1 == initial_pieces) ? upper : a + width;
        Segment s = gauss_kronrod15(f, a, b, result.evaluations);
        total += s.value;
        total_error += s.error;
        heap.push(s);
    }

    int subdivisions = 0;
    auto tolerance = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(total)); };
    while (total_error > tolerance() && subdivisions < options.max_subdivisions) {
        const Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lower + worst.upper);
        if (!(mid > worst.lower && mid < worst.upper)) {
            // Interval collapsed to machine resolution.
            heap.push(worst);
            break;
        }
        Segment left = gauss_kronrod15(f, worst.lower, mid, result.evaluations);
        Segment right = gauss_kronrod15(f, mid, worst.upper, result.evaluations);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
    }

    // Re-sum to shed accumulated cancellation in the running totals.
    total = 0.0;
    total_error = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        total_error += heap.top().error;
        heap.pop();
    }
    result.value = total;
    result.abs_error = total_error;
    result.converged = std::isfinite(total) &&
                       total_error <= std::max(options.abs_tol, options.rel_tol * std::abs(total));
    return result;
}

// x = t / (1 - t^2) maps (-1,1) onto the real line.
template <class F>
auto real_line_integrand(const F& f) {
    return [&f](double t) {
        const double one_minus = 1.0 - t * t;
        if (one_minus <= 0.0) return 0.0;
        const double x = t / one_minus;
        const double jacobian = (1.0 + t * t) / (one_minus * one_minus);
        const double v = f(x) * jacobian;
        return std::isfinite(v) ? v : 0.0;
    };
}

}  // namespace

QuadratureResult integrate_1d(const RealFunction& f, Domain domain,
                              const QuadratureOptions& options, double lower, double upper) {
    switch (domain) {
        case Domain::finite:
            if (!(std::isfinite(lower) && std::isfinite(upper))) {
                throw std::domain_error("finite-domain quadrature needs finite limits");
            }
            return adaptive(f, lower, upper, 1, options);
        case Domain::real_line:
            return adaptive(real_line_integrand(f), -1.0, 1.0, 4, options);
        case Domain::unit_interval: {
            auto in_logit = [&f](double z) {
                const double c = sigmoid(z);
                const double jacobian = c * (1.0 - c);
                if (jacobian <= 0.0) return 0.0;
                return f(c) * jacobian;
            };
            return adaptive(real_line_integrand(in_logit), -1.0, 1.0, 4, options);
        }
        case Domain::above:
        case Domain::below: {
            const double origin = domain == Domain::above ? lower : upper;
            const double sign = domain == Domain::above ? 1.0 : -1.0;
            if (!std::isfinite(origin)) {
                throw std::domain_error("half-line quadrature needs a finite endpoint");
            }
            auto mapped = [&f, origin, sign](double t) {
                const double one_minus = 1.0 - t;
                if (one_minus <= 0.0) return 0.0;
                const double v = f(origin + sign * t / one_minus) / (one_minus * one_minus);
                return std::isfinite(v) ? v : 0.0;
            };
            return adaptive(mapped, 0.0, 1.0, 2, options);
        }
    }
    throw std::logic_error("unknown quadrature domain");
}

double integrate_or_throw(const RealFunction& f, Domain domain, const QuadratureOptions& options,
                          double lower, double upper) {
    QuadratureResult r = integrate_1d(f, domain, options, lower, upper);
    if (!r.converged) {
        std::ostringstream msg;
        msg << "quadrature did not converge: estimate " << r.value << ", error " << r.abs_error
            << " after " << r.evaluations << " evaluations";
        throw QuadratureError(msg.str(), r);
    }
    return r.value;
}

QuadratureResult logit_normal_expectation(const RealFunction& g_of_logit, double mu, double sigma,
                                          const QuadratureOptions& options) {
    if (!(sigma > 0.0)) {
        throw std::domain_error("logit-normal sigma must be positive");
    }
    auto integrand = [&](double z) { return std_normal_pdf(z) * g_of_logit(mu + sigma * z); };
    return adaptive(real_line_integrand(integrand), -1.0, 1.0, 4, options);
}

// -----------------------------------------------------------------------------
// Random streams
// -----------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed;
    std::uint64_t mixed = splitmix64(state);
    state = mixed ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL);
    return splitmix64(state);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t state = derive_seed(seed, stream_id);
    for (auto& word : s_) {
        word = splitmix64(state);
    }
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

std::uint64_t RandomStream::next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RandomStream::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double RandomStream::uniform_open() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() { return std_normal_quantile(uniform_open()); }

}  // namespace metasense
