#include "modeshift/draws.hpp"

#include <cmath>

#include "modeshift/types.hpp"

namespace modeshift {

const char* draw_kind_name(DrawKind k) { return k == DrawKind::Halton ? "halton" : "pseudo"; }

DrawKind draw_kind_from_name(const std::string& name) {
    if (name == "halton" || name == "quasi") return DrawKind::Halton;
    if (name == "pseudo" || name == "random") return DrawKind::Pseudo;
    throw ConfigError("unknown draw sequence kind: " + name);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -HUGE_VAL;
        if (p == 1.0) return HUGE_VAL;
        throw std::domain_error("inverse_normal_cdf requires p in [0,1]");
    }
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // One Halley step against the exact CDF.
    double e = normal_cdf(x) - p;
    double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

double halton_point(std::uint64_t index, std::uint64_t base) {
    double f = 1.0;
    double r = 0.0;
    while (index > 0) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

constexpr std::uint64_t kHaltonBases[] = {2, 3, 5, 7, 11, 13, 17, 19};
constexpr int kMaxDims = 8;
constexpr std::uint64_t kBurnIn = 10;

double uniform_from_bits(std::uint64_t bits) {
    // (bits + 0.5) / 2^64, strictly inside (0, 1)
    return (static_cast<double>(bits >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

}  // namespace

std::vector<double> draws_for_individual(const DrawPlan& plan, const std::string& individual_id,
                                         int n_dims) {
    if (plan.n_draws <= 0) throw ConfigError("draw plan requires a positive number of draws");
    if (n_dims <= 0 || n_dims > kMaxDims) {
        throw ConfigError("draw dimension count out of range: " + std::to_string(n_dims));
    }
    const std::uint64_t id_key = mix64(fnv1a64(individual_id) ^ mix64(plan.seed));
    std::vector<double> z(static_cast<std::size_t>(plan.n_draws) * n_dims);

    if (plan.kind == DrawKind::Halton) {
        for (int d = 0; d < n_dims; ++d) {
            const double shift = uniform_from_bits(mix64(id_key + 0x51ed2701ULL * (d + 1)));
            const std::uint64_t base = kHaltonBases[d];
            for (int r = 0; r < plan.n_draws; ++r) {
                double u = halton_point(kBurnIn + static_cast<std::uint64_t>(r) + 1, base) + shift;
                if (u >= 1.0) u -= 1.0;
                u = std::min(std::max(u, 1e-15), 1.0 - 1e-15);
                z[static_cast<std::size_t>(r) * n_dims + d] = inverse_normal_cdf(u);
            }
        }
    } else {
        std::uint64_t state = id_key;
        for (int r = 0; r < plan.n_draws; ++r) {
            for (int d = 0; d < n_dims; ++d) {
                state += 0x9e3779b97f4a7c15ULL;
                double u = uniform_from_bits(mix64(state));
                u = std::min(std::max(u, 1e-15), 1.0 - 1e-15);
                z[static_cast<std::size_t>(r) * n_dims + d] = inverse_normal_cdf(u);
            }
        }
    }
    return z;
}

}  // namespace modeshift
