#include "sdbf/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "sdbf/errors.hpp"

namespace sdbf {

namespace {

// 21-point Kronrod nodes on [0, 1]; odd indices are the 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};
constexpr std::size_t kRuleSize = 21;

enum class MapKind { finite, upper_tail, lower_tail };

// A segment in its integration variable t, with the map back to theta.
struct Segment {
    MapKind kind;
    double anchor;  // finite end for tail maps
    double scale;

    double to_theta(double t) const noexcept {
        switch (kind) {
            case MapKind::finite: return t;
            case MapKind::upper_tail: return anchor + scale * t / (1.0 - t);
            case MapKind::lower_tail: return anchor - scale * t / (1.0 - t);
        }
        return t;
    }
    double jacobian(double t) const noexcept {
        if (kind == MapKind::finite) return 1.0;
        const double u = 1.0 - t;
        return scale / (u * u);
    }
};

struct Panel {
    std::size_t segment;
    double a;
    double b;
    double value;
    double error;
};

class PanelRule {
public:
    explicit PanelRule(const BatchIntegrand& f) : f_(f) {}

    Panel apply(const Segment& seg, std::size_t seg_index, double a, double b) {
        const double center = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        std::array<double, kRuleSize> t{};
        for (std::size_t j = 0; j < 10; ++j) {
            t[2 * j] = center - half * kXgk[j];
            t[2 * j + 1] = center + half * kXgk[j];
        }
        t[20] = center;
        for (std::size_t k = 0; k < kRuleSize; ++k) theta_[k] = seg.to_theta(t[k]);
        f_(theta_, values_);
        evaluations_ += kRuleSize;

        double kronrod = kWgk[10] * values_[20] * seg.jacobian(t[20]);
        double gauss = 0.0;
        double abs_sum = std::fabs(kronrod);
        for (std::size_t j = 0; j < 10; ++j) {
            const double lo = values_[2 * j] * seg.jacobian(t[2 * j]);
            const double hi = values_[2 * j + 1] * seg.jacobian(t[2 * j + 1]);
            if (!std::isfinite(lo) || !std::isfinite(hi)) {
                throw DomainError("integrand is not finite inside the integration interval");
            }
            kronrod += kWgk[j] * (lo + hi);
            abs_sum += kWgk[j] * (std::fabs(lo) + std::fabs(hi));
            if (j % 2 == 1) gauss += kWg[j / 2] * (lo + hi);
        }
        if (!std::isfinite(kronrod)) {
            throw DomainError("integrand is not finite inside the integration interval");
        }
        kronrod *= half;
        gauss *= half;
        abs_sum *= std::fabs(half);
        const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum;
        const double error = std::max(std::fabs(kronrod - gauss), roundoff);
        return Panel{seg_index, a, b, kronrod, error};
    }

    std::size_t evaluations() const noexcept { return evaluations_; }

private:
    const BatchIntegrand& f_;
    std::array<double, kRuleSize> theta_{};
    std::array<double, kRuleSize> values_{};
    std::size_t evaluations_ = 0;
};

std::vector<Segment> build_segments(double lower, double upper, const QuadratureOptions& options,
                                    std::vector<std::pair<double, double>>& ranges) {
    std::vector<double> cuts;
    for (double p : options.split_points) {
        if (std::isfinite(p) && p > lower && p < upper) cuts.push_back(p);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (cuts.empty() && std::isinf(lower) && std::isinf(upper)) cuts.push_back(0.0);

    std::vector<double> points;
    points.push_back(lower);
    points.insert(points.end(), cuts.begin(), cuts.end());
    points.push_back(upper);

    const double s = options.tail_scale;
    std::vector<Segment> segments;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double a = points[i];
        const double b = points[i + 1];
        if (std::isinf(a)) {
            segments.push_back({MapKind::lower_tail, b, s});
            ranges.emplace_back(0.0, 1.0);
        } else if (std::isinf(b)) {
            segments.push_back({MapKind::upper_tail, a, s});
            ranges.emplace_back(0.0, 1.0);
        } else {
            segments.push_back({MapKind::finite, 0.0, 1.0});
            ranges.emplace_back(a, b);
        }
    }
    return segments;
}

}  // namespace

IntegrationResult integrate_batch(const BatchIntegrand& f, double lower, double upper,
                                  const QuadratureOptions& options) {
    if (std::isnan(lower) || std::isnan(upper) || !(lower < upper))
        throw DomainError("integrate needs lower < upper");
    if (!(options.rel_tol > 0.0) || !(options.abs_tol > 0.0))
        throw DomainError("integration tolerances must be positive");
    if (!(options.tail_scale > 0.0) || !std::isfinite(options.tail_scale))
        throw DomainError("tail scale must be positive and finite");

    std::vector<std::pair<double, double>> ranges;
    const std::vector<Segment> segments = build_segments(lower, upper, options, ranges);

    PanelRule rule(f);
    std::vector<Panel> panels;
    panels.reserve(segments.size() + options.max_subdivisions + 1);
    for (std::size_t i = 0; i < segments.size(); ++i) {
        panels.push_back(rule.apply(segments[i], i, ranges[i].first, ranges[i].second));
    }

    IntegrationResult best{0.0, std::numeric_limits<double>::infinity(), 0};
    for (std::size_t subdivisions = 0;; ++subdivisions) {
        double value = 0.0;
        double error = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            value += panels[i].value;
            error += panels[i].error;
            if (panels[i].error > panels[worst].error) worst = i;
        }
        if (error <= best.error_estimate) best = {value, error, rule.evaluations()};
        best.evaluations = rule.evaluations();

        if (error <= std::max(options.abs_tol, options.rel_tol * std::fabs(value))) return best;
        if (subdivisions >= options.max_subdivisions) {
            throw ConvergenceError("quadrature did not reach the requested tolerance", best);
        }

        const Panel split = panels[worst];
        const double mid = 0.5 * (split.a + split.b);
        if (!(mid > split.a && mid < split.b)) {
            throw ConvergenceError("quadrature panel cannot be subdivided further", best);
        }
        const Segment& seg = segments[split.segment];
        panels[worst] = rule.apply(seg, split.segment, split.a, mid);
        panels.push_back(rule.apply(seg, split.segment, mid, split.b));
    }
}

IntegrationResult integrate(const std::function<double(double)>& f, double lower, double upper,
                            const QuadratureOptions& options) {
    const BatchIntegrand batch = [&f](std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i]);
    };
    return integrate_batch(batch, lower, upper, options);
}

}  // namespace sdbf
