#include <cmath>

#include "sdbf/kernels.hpp"

namespace sdbf::kernels::scalar {

void evaluate(const ProductIntegrand& p, std::span<const double> theta, std::span<double> out) {
    const double half_df1 = 0.5 * (p.df + 1.0);
    const double inv_df = 1.0 / p.df;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double t = theta[i];
        if (!(t >= p.lower && t <= p.upper)) {
            out[i] = 0.0;
            continue;
        }
        const double d = (t - p.center) * p.inv_se;
        const double z = (t - p.location) * p.inv_scale;
        const double kernel = p.student ? -half_df1 * std::log1p(z * z * inv_df) : -0.5 * z * z;
        out[i] = std::exp(-0.5 * d * d + kernel + p.log_const);
    }
}

void exp(std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::exp(x[i]);
}

void log(std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::log(x[i]);
}

}  // namespace sdbf::kernels::scalar
