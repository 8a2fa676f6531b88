#include "tcentroid/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "tcentroid/errors.hpp"
#include "tcentroid/special_functions.hpp"

namespace tcentroid::quadrature {

namespace {

// 15-point Kronrod abscissae (positive half, descending) and weights; the
// odd-indexed abscissae together with 0 are the 7-point Gauss nodes.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

constexpr int kMaxInitialPanels = 512;

struct Panel {
    double lo = 0.0;
    double hi = 0.0;
    double value = 0.0;
    double error = 0.0;
};

template <class Integrand>
Panel kronrod_panel(const Integrand& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[j] * pair;
        if (j % 2 == 1) {
            gauss += kGaussWeights[j / 2] * pair;
        }
    }
    return {lo, hi, kronrod * half, std::fabs(kronrod - gauss) * half};
}

struct Window {
    double lo;
    double hi;
};

struct Layout {
    Window left;
    Window right;
    double center;  // mean of the shifted law
    double t_left;  // standardized distance of left.lo from center (<= -cutoff)
    double t_right;
};

Layout layout(const GaussianParams& params, const ExcludedInterval& hole, double shift,
              const QuadratureConfig& cfg) {
    validate(params);
    validate(hole);
    validate(cfg);
    detail::require_finite(shift, "shift");
    const double center = params.mu + shift;
    const double reach = cfg.tail_cutoff_sigmas * params.sigma;
    Layout out{};
    out.center = center;
    out.left = {std::min(center, hole.lower) - reach, hole.lower};
    out.right = {hole.upper, std::max(center, hole.upper) + reach};
    out.t_left = (out.left.lo - center) / params.sigma;
    out.t_right = (out.right.hi - center) / params.sigma;
    return out;
}

// f(T) (1 + |T|) bounds both Q(|T|) and the standardized first moment
// integral of x f(x) beyond T, which equals f(T).
double tail_certificate(double t) {
    return special::std_pdf(t) * (1.0 + std::fabs(t));
}

template <class Integrand>
IntegralEstimate integrate_windows(const Integrand& f, const Layout& lay, double sigma,
                                   double remainder, const QuadratureConfig& cfg) {
    if (!(remainder < cfg.abs_tol)) {
        throw ToleranceError("tail remainder bound " + std::to_string(remainder) +
                             " exceeds abs_tol; increase tail_cutoff_sigmas");
    }
    std::vector<Panel> panels;
    for (const Window& w : {lay.left, lay.right}) {
        const double width = (w.hi - w.lo) / sigma;
        const int count = std::clamp(static_cast<int>(std::ceil(width)), 1, kMaxInitialPanels);
        const double step = (w.hi - w.lo) / count;
        for (int i = 0; i < count; ++i) {
            const double lo = w.lo + step * i;
            const double hi = (i + 1 == count) ? w.hi : w.lo + step * (i + 1);
            panels.push_back(kronrod_panel(f, lo, hi));
        }
    }

    IntegralEstimate out;
    for (;;) {
        double value = 0.0;
        double error = 0.0;
        for (const Panel& p : panels) {
            value += p.value;
            error += p.error;
        }
        out.value = value;
        out.error = error;
        if (error <= std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(value))) {
            break;
        }
        if (out.subdivisions >= cfg.max_subdivisions) {
            throw ToleranceError("quadrature did not converge within " +
                                 std::to_string(cfg.max_subdivisions) + " subdivisions (error " +
                                 std::to_string(error) + ")");
        }
        auto worst = std::max_element(panels.begin(), panels.end(),
                                      [](const Panel& x, const Panel& y) { return x.error < y.error; });
        const double lo = worst->lo;
        const double hi = worst->hi;
        const double mid = 0.5 * (lo + hi);
        *worst = kronrod_panel(f, lo, mid);
        panels.push_back(kronrod_panel(f, mid, hi));
        ++out.subdivisions;
    }
    out.remainder_bound = remainder;
    return out;
}

}  // namespace

void validate(const QuadratureConfig& cfg) {
    if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0)) {
        throw ParameterError("quadrature tolerances must be > 0");
    }
    if (!(cfg.tail_cutoff_sigmas >= 8.0) || !std::isfinite(cfg.tail_cutoff_sigmas)) {
        throw ParameterError("tail_cutoff_sigmas must be >= 8");
    }
    if (cfg.max_subdivisions < 0) {
        throw ParameterError("max_subdivisions must be >= 0");
    }
}

IntegralEstimate exterior_mass(const GaussianParams& params, const ExcludedInterval& hole,
                               double shift, const QuadratureConfig& cfg) {
    const Layout lay = layout(params, hole, shift, cfg);
    const double sigma = params.sigma;
    const double center = lay.center;
    auto density = [&](double x) { return special::std_pdf((x - center) / sigma) / sigma; };
    const double remainder = tail_certificate(lay.t_left) + tail_certificate(lay.t_right);
    return integrate_windows(density, lay, sigma, remainder, cfg);
}

IntegralEstimate exterior_first_moment(const GaussianParams& params,
                                       const ExcludedInterval& hole, double shift,
                                       const QuadratureConfig& cfg) {
    const Layout lay = layout(params, hole, shift, cfg);
    const double sigma = params.sigma;
    const double center = lay.center;
    auto weighted = [&](double x) { return x * special::std_pdf((x - center) / sigma) / sigma; };
    const double remainder = (std::fabs(center) + sigma) *
                             (tail_certificate(lay.t_left) + tail_certificate(lay.t_right));
    return integrate_windows(weighted, lay, sigma, remainder, cfg);
}

CentroidResult centroid_quadrature(const GaussianParams& params, const ExcludedInterval& hole,
                                   double shift, const QuadratureConfig& cfg) {
    IntegralEstimate mass = exterior_mass(params, hole, shift, cfg);
    if (!(mass.value > kMinOracleMass)) {
        throw DeepTruncationError("support mass below the quadrature oracle's floor; use the closed form");
    }
    QuadratureConfig ratio_cfg = cfg;
    ratio_cfg.abs_tol = std::min(cfg.abs_tol, cfg.rel_tol * mass.value);
    if (ratio_cfg.abs_tol < cfg.abs_tol) {
        mass = exterior_mass(params, hole, shift, ratio_cfg);
    }
    const IntegralEstimate moment = exterior_first_moment(params, hole, shift, ratio_cfg);

    CentroidResult out;
    out.value = moment.value / mass.value;
    out.method = Method::quadrature;
    out.support_mass = mass.value;
    if (mass.value < kIllConditionedMass) {
        out.warnings.push_back(Warning::ill_conditioned);
    }
    return out;
}

}  // namespace tcentroid::quadrature
