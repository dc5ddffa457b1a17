#include <cmath>
#include <functional>
#include <sstream>

#include "qf/error.hpp"
#include "qf/surface.hpp"
#include "surface/internal.hpp"

namespace qf::surface {

namespace {

using Fn1 = std::function<double(double)>;

// Root of f - target on [lo, hi], f(lo) and f(hi) on opposite sides.
double bisect(const Fn1& f, double target, double lo, double hi) {
    double flo = f(lo) - target;
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid) - target;
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double golden_min(const Fn1& f, double lo, double hi) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - r * (hi - lo);
    double x2 = lo + r * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 300 && hi - lo > 1e-13 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    return 0.5 * (lo + hi);
}

double slope(const Fn1& f, double t) {
    const double h = 1e-6 * (1.0 + std::abs(t));
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

// Polish a root of f = target near t by bracketing outward and bisecting.
std::optional<double> polish(const Fn1& f, double target, double t, double limit) {
    const double f0 = f(t) - target;
    if (f0 == 0.0) return t;
    for (double delta = 1e-10 * (1.0 + std::abs(t)); delta < limit; delta *= 4.0) {
        for (double s : {-1.0, 1.0}) {
            const double f1 = f(t + s * delta) - target;
            if ((f1 > 0.0) != (f0 > 0.0)) {
                return s > 0 ? bisect(f, target, t, t + delta) : bisect(f, target, t - delta, t);
            }
        }
    }
    return std::nullopt;
}

double recover_twist(const DecompositionPtr& d, const std::vector<BlockHolonomy>& blocks, FNCoordinates fn,
                     std::size_t k, double target_t, double target_p) {
    const auto& m = d->marking;
    auto trace_of = [&](const Word& w) {
        return [&, w](double t) {
            fn[k].twist = t;
            return std::abs(detail::glue(d, blocks, fn).image(w).trace());
        };
    };
    const Fn1 ft = trace_of(m.transversals[k].word);
    const Fn1 fp = trace_of(m.products[k].word);

    const double period = fn[k].length;
    const double cap = 64.0 + 3.0 * period;
    double bound = 3.0 * period;
    double tmin = 0.0;
    for (;;) {
        tmin = golden_min(ft, -bound, bound);
        const bool interior = std::abs(std::abs(tmin) - bound) > 1e-6 * bound;
        if (interior && ft(-bound) > target_t && ft(bound) > target_t) break;
        bound *= 2.0;
        if (bound > cap) {
            std::ostringstream os;
            os << "twist of curve " << k << " not bracketed within +-" << cap << " (transversal |tr| target "
               << target_t << ")";
            throw RecoveryError(os.str());
        }
    }

    const double fmin = ft(tmin);
    std::vector<double> candidates;
    if (target_t <= fmin) {
        if (target_t < fmin - 1e-7 * fmin) {
            std::ostringstream os;
            os << "transversal |tr| " << target_t << " below the minimum " << fmin << " over twists for curve " << k;
            throw RecoveryError(os.str());
        }
        candidates.push_back(tmin);
    } else {
        candidates.push_back(bisect(ft, target_t, -bound, tmin));
        candidates.push_back(bisect(ft, target_t, tmin, bound));
    }

    double best = candidates.front();
    double best_err = std::abs(fp(best) - target_p);
    for (double c : candidates) {
        const double err = std::abs(fp(c) - target_p);
        if (err < best_err) {
            best = c;
            best_err = err;
        }
    }

    // Near the transversal minimum the product word carries the information.
    if (std::abs(slope(fp, best)) > std::abs(slope(ft, best))) {
        if (auto r = polish(fp, target_p, best, 0.25 * period)) best = *r;
    }
    return best;
}

}  // namespace

FNCoordinates holonomy_to_fn(const Holonomy& h, const ConeAngles& angles) {
    if (!h.decomposition) throw std::invalid_argument("holonomy without decomposition");
    const auto& d = *h.decomposition;
    const auto& m = d.marking;
    FNCoordinates fn(static_cast<std::size_t>(d.curve_count()), FnCoordinate{1.0, 0.0});
    for (std::size_t k = 0; k < fn.size(); ++k) {
        const auto c = hyp::classify(h.image(m.pants[k].word));
        const auto* hy = std::get_if<hyp::Hyperbolic>(&c);
        if (!hy) throw RecoveryError("pants curve " + m.pants[k].name + " has " + hyp::describe(c) + " holonomy");
        fn[k].length = hy->length;
    }
    const auto blocks = detail::build_blocks(d, fn, angles);
    for (std::size_t k = 0; k < fn.size(); ++k) {
        const double tt = std::abs(h.image(m.transversals[k].word).trace());
        const double tp = std::abs(h.image(m.products[k].word).trace());
        fn[k].twist = recover_twist(h.decomposition, blocks, fn, k, tt, tp);
    }
    return fn;
}

ConeSurface surface_from_holonomy(const Holonomy& h, const ConeAngles& angles) {
    ConeSurface s = ConeSurface::assemble(h.decomposition, holonomy_to_fn(h, angles), angles);
    const double gap = teich_distance(s.holonomy(), h);
    if (!(gap <= 1e-7)) {
        std::ostringstream os;
        os << "recovered FN coordinates reproduce the spectrum only to " << gap;
        throw RecoveryError(os.str());
    }
    return s;
}

}  // namespace qf::surface
