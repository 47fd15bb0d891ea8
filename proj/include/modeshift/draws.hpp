#ifndef MODESHIFT_DRAWS_HPP
#define MODESHIFT_DRAWS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace modeshift {

enum class DrawKind { Halton, Pseudo };

const char* draw_kind_name(DrawKind k);
DrawKind draw_kind_from_name(const std::string& name);

/// Seeded configuration of the simulation draws. Each individual id maps
/// deterministically to its own stream, independent of iteration order
/// and thread count.
struct DrawPlan {
    int n_draws = 1000;
    std::uint64_t seed = 1;
    DrawKind kind = DrawKind::Halton;
};

/// Standard normal quantile function (Acklam's rational approximation
/// with one Halley refinement; accurate to near machine precision).
double inverse_normal_cdf(double p);

/// Standard normal CDF and density.
double normal_cdf(double x);
double normal_pdf(double x);

/// Radical-inverse (van der Corput) value of `index` in `base`.
double halton_point(std::uint64_t index, std::uint64_t base);

/// 64-bit mixers used for stable, platform-independent seeding.
std::uint64_t fnv1a64(const std::string& s);
std::uint64_t mix64(std::uint64_t x);

/// n_draws x n_dims standard-normal draws for one individual, row-major.
/// Halton streams use a Cranley-Patterson shift keyed by (seed, id, dim);
/// pseudo streams use a counter-based generator keyed the same way.
std::vector<double> draws_for_individual(const DrawPlan& plan, const std::string& individual_id,
                                         int n_dims);

}  // namespace modeshift

#endif
