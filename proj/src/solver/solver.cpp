#include "qf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "qf/error.hpp"
#include "qf/log.hpp"

namespace qf::solver {

namespace {

constexpr double kStep = 1e-6;

double max_abs(const std::vector<double>& r) {
    double m = 0.0;
    for (double x : r) m = std::max(m, std::abs(x));
    return m;
}

std::vector<double> spectrum_values(const Holonomy& h) {
    std::vector<double> out;
    for (const auto& e : surface::length_spectrum(h)) out.push_back(e.length);
    return out;
}

Eigen::MatrixXd jacobian(const EarthquakeMap& f, const std::vector<double>& w) {
    const auto m = f.spectrum(w).size();
    Eigen::MatrixXd J(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(w.size()));
    for (std::size_t j = 0; j < w.size(); ++j) {
        auto wp = w, wm = w;
        wp[j] += kStep;
        wm[j] -= kStep;
        const auto fp = f.spectrum(wp);
        const auto fm = f.spectrum(wm);
        for (std::size_t i = 0; i < m; ++i) {
            J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (fp[i] - fm[i]) / (2.0 * kStep);
        }
    }
    return J;
}

struct Attempt {
    std::vector<double> weights;
    double residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
    std::vector<Iterate> trace;
    std::vector<std::string> notices;
};

Attempt levenberg_marquardt(const EarthquakeMap& f, const std::vector<double>& target, std::vector<double> w,
                            const InversionProblem& p) {
    Attempt a;
    const std::size_t n = w.size();
    auto residual_of = [&](const std::vector<double>& x) -> std::optional<std::vector<double>> {
        try {
            auto s = f.spectrum(x);
            for (std::size_t i = 0; i < s.size(); ++i) s[i] -= target[i];
            return s;
        } catch (const Error&) {
            return std::nullopt;
        }
    };
    auto cost_of = [](const std::vector<double>& r) {
        double c = 0.0;
        for (double x : r) c += x * x;
        return 0.5 * c;
    };

    auto r = residual_of(w);
    if (!r) throw NonConvergence("earthquake map undefined at the initial weights");
    double mu = 1e-3;
    std::vector<char> active(n, 1);
    std::vector<int> pinned(n, 0);
    a.trace.push_back(Iterate{0, w, max_abs(*r), mu});

    for (int it = 1; it <= p.max_iterations; ++it) {
        if (max_abs(*r) <= p.tol) break;
        a.iterations = it;
        const Eigen::MatrixXd J = jacobian(f, w);
        Eigen::VectorXd rv(static_cast<Eigen::Index>(r->size()));
        for (std::size_t i = 0; i < r->size(); ++i) rv(static_cast<Eigen::Index>(i)) = (*r)[i];
        Eigen::MatrixXd A = J.transpose() * J;
        Eigen::VectorXd g = J.transpose() * rv;
        for (std::size_t j = 0; j < n; ++j) {
            if (active[j]) continue;
            const auto jj = static_cast<Eigen::Index>(j);
            A.row(jj).setZero();
            A.col(jj).setZero();
            A(jj, jj) = 1.0;
            g(jj) = 0.0;
        }
        const double cost = cost_of(*r);
        bool accepted = false;
        while (!accepted && mu < 1e12) {
            Eigen::MatrixXd M = A;
            for (Eigen::Index j = 0; j < M.rows(); ++j) M(j, j) += mu * (A(j, j) + 1e-12);
            const Eigen::VectorXd delta = M.ldlt().solve(-g);
            for (double alpha = 1.0; alpha > 1.0 / 512.0; alpha /= 2.0) {
                std::vector<double> trial = w;
                for (std::size_t j = 0; j < n; ++j) {
                    if (active[j]) trial[j] = std::clamp(w[j] + alpha * delta(static_cast<Eigen::Index>(j)), 0.0, p.upper);
                }
                const auto rt = residual_of(trial);
                if (rt && cost_of(*rt) < cost) {
                    w = trial;
                    r = rt;
                    accepted = true;
                    break;
                }
            }
            if (accepted) {
                mu = std::max(mu / 10.0, 1e-12);
            } else {
                mu *= 10.0;
            }
        }
        a.trace.push_back(Iterate{it, w, max_abs(*r), mu});
        if (!accepted) break;  // stagnation

        for (std::size_t j = 0; j < n; ++j) {
            if (!active[j]) continue;
            pinned[j] = w[j] == 0.0 ? pinned[j] + 1 : 0;
            if (pinned[j] >= 3) {
                active[j] = 0;
                a.notices.push_back("weight " + std::to_string(j) + " pinned at 0; removed from the active support");
            }
            if (w[j] == p.upper) {
                a.notices.push_back("weight " + std::to_string(j) + " reached the upper bound " + std::to_string(p.upper));
            }
        }
    }
    a.weights = w;
    a.residual = max_abs(*r);
    return a;
}

std::vector<std::vector<double>> coarse_starts(std::size_t n) {
    const std::vector<double> levels{0.25, 1.0, 2.5};
    std::vector<std::vector<double>> out;
    if (n <= 3) {
        std::vector<std::size_t> idx(n, 0);
        for (;;) {
            std::vector<double> w(n);
            for (std::size_t j = 0; j < n; ++j) w[j] = levels[idx[j]];
            out.push_back(w);
            std::size_t j = 0;
            while (j < n && ++idx[j] == levels.size()) idx[j++] = 0;
            if (j == n) break;
        }
    } else {
        for (double l : levels) out.emplace_back(n, l);
    }
    return out;
}

}  // namespace

EarthquakeMap::EarthquakeMap(const ConeSurface& source, std::vector<CurveClass> support, unsigned seed)
    : source_(source), support_(std::move(support)) {
    bool all_pants = true;
    for (const auto& c : support_) {
        const auto k = quake::pants_index_of(source_.decomposition(), c.word);
        pants_.push_back(k ? *k : -1);
        if (!k) all_pants = false;
    }
    if (!all_pants) {
        context_ = std::make_shared<const quake::CocycleContext>(source_.holonomy(), source_.angles(), support_, seed);
    }
}

Holonomy EarthquakeMap::holonomy(const std::vector<double>& w) const {
    if (w.size() != support_.size()) throw std::invalid_argument("one weight per support curve expected");
    if (context_) return context_->deform(w, quake::Side::Right);
    auto fn = source_.fn();
    for (std::size_t j = 0; j < w.size(); ++j) fn[static_cast<std::size_t>(pants_[j])].twist -= w[j];
    return surface::assemble_holonomy(source_.decomposition_ptr(), fn, source_.angles());
}

std::vector<double> EarthquakeMap::spectrum(const std::vector<double>& w) const { return spectrum_values(holonomy(w)); }

SolverReport invert_earthquake(const InversionProblem& p) {
    if (!p.source || !p.target) throw std::invalid_argument("inversion needs a source and a target");
    if (p.source->angles().values() != p.target->angles().values()) {
        throw IncomparableError("source and target have different cone angles");
    }
    const EarthquakeMap f(*p.source, p.support, p.seed);
    const auto target = spectrum_values(p.target->holonomy());
    // Comparable markings.
    surface::teich_distance(*p.source, *p.target);

    std::vector<double> w0 = p.initial ? *p.initial : std::vector<double>(p.support.size(), 0.0);
    if (w0.size() != p.support.size()) throw std::invalid_argument("initial guess has the wrong size");
    Attempt best = levenberg_marquardt(f, target, w0, p);
    if (!(best.residual <= p.tol)) {
        log::notice("earthquake inversion stalled from the initial guess; trying a coarse multi-start");
        for (const auto& start : coarse_starts(p.support.size())) {
            Attempt a = levenberg_marquardt(f, target, start, p);
            if (a.residual < best.residual) best = a;
            if (best.residual <= p.tol) break;
        }
    }

    SolverReport rep;
    rep.weights = best.weights;
    rep.iterations = best.iterations;
    rep.trace = best.trace;
    rep.notices = best.notices;
    for (const auto& n : rep.notices) log::notice(n);
    auto fresh = f.spectrum(rep.weights);
    for (std::size_t i = 0; i < fresh.size(); ++i) fresh[i] -= target[i];
    rep.residual = max_abs(fresh);
    rep.converged = rep.residual <= p.tol;
    if (!p.support.empty()) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(jacobian(f, rep.weights));
        const auto& sv = svd.singularValues();
        rep.sigma_min = sv(sv.size() - 1);
        rep.condition = sv(0) / rep.sigma_min;
    }
    if (!rep.converged) {
        std::ostringstream os;
        os << "earthquake inversion stalled at residual " << rep.residual << " (tol " << p.tol << ") after "
           << rep.iterations << " iterations; weights";
        for (double x : rep.weights) os << ' ' << x;
        throw NonConvergence(os.str());
    }
    return rep;
}

RigidityReport local_rigidity_check(const ConeSurface& s, const std::vector<CurveClass>& support,
                                    const std::vector<double>& weights, unsigned seed) {
    if (support.empty()) throw std::invalid_argument("local rigidity needs a non-empty support");
    const EarthquakeMap f(s, support, seed);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jacobian(f, weights));
    const auto& sv = svd.singularValues();
    RigidityReport r{};
    r.sigma_max = sv(0);
    r.sigma_min = sv.size() < static_cast<Eigen::Index>(support.size()) ? 0.0 : sv(sv.size() - 1);
    r.condition = r.sigma_min > 0.0 ? r.sigma_max / r.sigma_min : std::numeric_limits<double>::infinity();
    r.rank_deficient = !(r.sigma_min > 1e-6);
    return r;
}

RigidityReport local_rigidity_check(const ConeSurface& s, const quake::WeightedMulticurve& lambda, unsigned seed) {
    std::vector<CurveClass> support;
    for (const auto& c : lambda.components()) support.push_back(c.curve);
    return local_rigidity_check(s, support, lambda.weights(), seed);
}

ProbeReport properness_probe(const ConeSurface& s, const quake::WeightedMulticurve& direction,
                             const std::vector<double>& scales, const std::optional<CurveClass>& gamma) {
    ProbeReport rep;
    std::optional<CurveClass> curve = gamma;
    if (!curve) {
        for (const auto& c : surface::determining_system(s.decomposition())) {
            try {
                if (quake::intersection_mass(s, direction, c) > 0.0) {
                    curve = c;
                    break;
                }
            } catch (const Error&) {
            }
        }
    }
    if (!curve || direction.empty()) {
        rep.inconclusive = true;
        log::notice("properness probe: no curve crosses the direction; inconclusive");
        return rep;
    }
    rep.curve = curve->name;
    const double before = surface::geodesic_length(s, *curve);
    const double unit_mass = quake::intersection_mass(s, direction, *curve);
    if (!(unit_mass > 0.0)) {
        rep.inconclusive = true;
        log::notice("properness probe: " + curve->name + " does not cross the direction; inconclusive");
    }
    for (double k : scales) {
        ProbeRow row{k, before, before, 0.0, -before};
        if (k > 0.0) {
            row.mass = k * unit_mass;
            row.bound = row.mass - before;
            try {
                row.length_after = quake::length_inequality_check(s, direction.scaled(k), *curve).after;
            } catch (const std::exception& e) {
                row.computed = false;
                row.length_after = std::numeric_limits<double>::quiet_NaN();
                std::ostringstream os;
                os << "properness probe: scale " << k << " out of reach in double precision (" << e.what() << ")";
                log::notice(os.str());
                rep.rows.push_back(row);
                continue;
            }
        }
        if (!row.holds()) rep.linear_growth = false;
        rep.rows.push_back(row);
    }
    return rep;
}

MessInverse mess_inverse(const ConeSurface& mu_l, const ConeSurface& mu_r, const std::vector<CurveClass>& support,
                         double tol, unsigned seed) {
    InversionProblem p;
    p.source = std::make_shared<const ConeSurface>(mu_l);
    p.target = std::make_shared<const ConeSurface>(mu_r);
    p.support = support;
    p.tol = tol;
    p.seed = seed;
    SolverReport rep = invert_earthquake(p);

    std::vector<quake::Component> cs;
    for (std::size_t j = 0; j < support.size(); ++j) cs.push_back(quake::Component{support[j], rep.weights[j], std::nullopt});
    const auto lambda = quake::WeightedMulticurve::make(mu_l.decomposition(), cs);
    const auto half = lambda.empty() ? lambda : lambda.scaled(0.5);
    const quake::EarthquakeOptions opt{false, seed};
    ads::BendData bend{quake::right_earthquake(mu_l, half, opt), half};
    ads::GhmcData ghmc = ads::from_bending(bend, seed);
    const auto [l, r] = ads::left_right_metrics(ghmc);
    MessInverse out{rep, bend, ghmc, surface::teich_distance(l, mu_l), surface::teich_distance(r, mu_r)};
    if (!(out.left_residual <= 1e-7 && out.right_residual <= 1e-7)) {
        std::ostringstream os;
        os << "mess inverse does not reproduce its input: residuals " << out.left_residual << ", "
           << out.right_residual;
        throw Error(os.str());
    }
    return out;
}

}  // namespace qf::solver
