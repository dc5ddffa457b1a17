#include <cmath>
#include <limits>
#include <sstream>

#include "qf/ads.hpp"
#include "qf/error.hpp"

namespace qf::ads {

Mat2 mat_mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

Mat2 mat_transpose(const Mat2& a) { return {a[0], a[2], a[1], a[3]}; }

double mat_det(const Mat2& a) { return a[0] * a[3] - a[1] * a[2]; }

Mat2 mat_inverse(const Mat2& a) {
    const double d = mat_det(a);
    return {a[3] / d, -a[1] / d, -a[2] / d, a[0] / d};
}

namespace {

using Vec4 = std::array<double, 4>;

double lorentz(const Vec4& x, const Vec4& y) { return x[0] * y[0] + x[1] * y[1] - x[2] * y[2] - x[3] * y[3]; }

// a + b e1 + c e2 + d e1 e2 with e1^2 = e2^2 = 0: exact second derivatives.
struct HyperDual {
    double a = 0, b = 0, c = 0, d = 0;
};

HyperDual operator+(HyperDual x, HyperDual y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }
HyperDual operator-(HyperDual x, HyperDual y) { return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d}; }
HyperDual operator*(HyperDual x, HyperDual y) {
    return {x.a * y.a, x.a * y.b + x.b * y.a, x.a * y.c + x.c * y.a, x.a * y.d + x.b * y.c + x.c * y.b + x.d * y.a};
}
HyperDual operator*(double k, HyperDual x) { return {k * x.a, k * x.b, k * x.c, k * x.d}; }

// f(x) from f, f', f'' at x.a.
HyperDual lift(HyperDual x, double f, double f1, double f2) {
    return {f, f1 * x.b, f1 * x.c, f1 * x.d + f2 * x.b * x.c};
}
HyperDual sin(HyperDual x) { return lift(x, std::sin(x.a), std::cos(x.a), -std::sin(x.a)); }
HyperDual cos(HyperDual x) { return lift(x, std::cos(x.a), -std::sin(x.a), -std::cos(x.a)); }
HyperDual inv_sqrt(HyperDual x) {
    const double r = 1.0 / std::sqrt(x.a);
    return lift(x, r, -0.5 * r / x.a, 0.75 * r / (x.a * x.a));
}

std::array<HyperDual, 4> graph_point(const GraphSurface& g, HyperDual u, HyperDual v) {
    const HyperDual s = g.a * (sin(u) * cos(v)) + g.b * (u * v) + g.c * (u * u - v * v);
    const HyperDual w = g.eps * s;
    const HyperDual one{1.0, 0, 0, 0};
    // -<phi, phi> = 1 + w^2 - u^2 - v^2
    const HyperDual scale = inv_sqrt(one + w * w - u * u - v * v);
    return {u * scale, v * scale, scale, w * scale};
}

struct Jet {
    Vec4 f, fu, fv, fuu, fuv, fvv;
};

Jet graph_jet(const GraphSurface& g, double u, double v) {
    auto eval = [&](int first, int second) {
        HyperDual hu{u, first == 0 ? 1.0 : 0.0, second == 0 ? 1.0 : 0.0, 0.0};
        HyperDual hv{v, first == 1 ? 1.0 : 0.0, second == 1 ? 1.0 : 0.0, 0.0};
        return graph_point(g, hu, hv);
    };
    Jet j{};
    const auto uu = eval(0, 0), uv = eval(0, 1), vv = eval(1, 1);
    for (std::size_t k = 0; k < 4; ++k) {
        j.f[k] = uv[k].a;
        j.fu[k] = uv[k].b;
        j.fv[k] = uv[k].c;
        j.fuv[k] = uv[k].d;
        j.fuu[k] = uu[k].d;
        j.fvv[k] = vv[k].d;
    }
    return j;
}

// Vector Euclidean-orthogonal to x, y, z (cofactor expansion).
Vec4 cross3(const Vec4& x, const Vec4& y, const Vec4& z) {
    auto det3 = [&](int i, int j, int k) {
        return x[i] * (y[j] * z[k] - y[k] * z[j]) - x[j] * (y[i] * z[k] - y[k] * z[i]) +
               x[k] * (y[i] * z[j] - y[j] * z[i]);
    };
    return {det3(1, 2, 3), -det3(0, 2, 3), det3(0, 1, 3), -det3(0, 1, 2)};
}

Mat2 complex_structure(const Mat2& I) {
    const double r = 1.0 / std::sqrt(mat_det(I));
    return {-I[1] * r, -I[3] * r, I[0] * r, I[1] * r};
}

Mat2 flow_metric(const Mat2& I, const Mat2& B, double t) {
    const double c = std::cos(t), s = std::sin(t);
    const Mat2 m{c + s * B[0], s * B[1], s * B[2], c + s * B[3]};
    return mat_mul(mat_transpose(m), mat_mul(I, m));
}

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 inverse3(const Mat3& m) {
    Mat3 r{};
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
            r[i][j] = (m[i1][j1] * m[i2][j2] - m[i1][j2] * m[i2][j1]) / det;
        }
    }
    return r;
}

}  // namespace

EmbeddingSample sample_graph(const GraphSurface& g, double u0, double v0, double h, int n) {
    if (n < 3 || !(h > 0.0)) throw std::invalid_argument("embedding grid needs n >= 3 and h > 0");
    EmbeddingSample e;
    e.n = n;
    e.h = h;
    e.u0 = u0;
    e.v0 = v0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Jet jet = graph_jet(g, u0 + i * h, v0 + j * h);
            const Mat2 I{lorentz(jet.fu, jet.fu), lorentz(jet.fu, jet.fv), lorentz(jet.fv, jet.fu),
                         lorentz(jet.fv, jet.fv)};
            if (!(mat_det(I) > 0.0) || !(I[0] > 0.0)) throw DegenerateSample("graph surface is not spacelike here");
            Vec4 c = cross3(jet.f, jet.fu, jet.fv);
            Vec4 normal{c[0], c[1], -c[2], -c[3]};
            const double nn = lorentz(normal, normal);
            if (!(nn < 0.0)) throw DegenerateSample("graph surface normal is not timelike");
            const double k = (normal[3] >= 0.0 ? 1.0 : -1.0) / std::sqrt(-nn);
            for (double& x : normal) x *= k;
            const Mat2 II{lorentz(jet.fuu, normal), lorentz(jet.fuv, normal), lorentz(jet.fuv, normal),
                          lorentz(jet.fvv, normal)};
            e.I.push_back(I);
            e.B.push_back(mat_mul(mat_inverse(I), II));
            e.J.push_back(complex_structure(I));
        }
    }
    return e;
}

std::vector<double> gaussian_curvature(const MetricSample& m, int n, double h) {
    std::vector<double> out(m.size(), std::numeric_limits<double>::quiet_NaN());
    auto at = [&](int i, int j, int c) {
        return m[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)]
                [static_cast<std::size_t>(c)];
    };
    for (int i = 1; i + 1 < n; ++i) {
        for (int j = 1; j + 1 < n; ++j) {
            // Components: E = 0, F = 1, G = 3.
            auto du = [&](int c) { return (at(i + 1, j, c) - at(i - 1, j, c)) / (2.0 * h); };
            auto dv = [&](int c) { return (at(i, j + 1, c) - at(i, j - 1, c)) / (2.0 * h); };
            auto duu = [&](int c) { return (at(i + 1, j, c) - 2.0 * at(i, j, c) + at(i - 1, j, c)) / (h * h); };
            auto dvv = [&](int c) { return (at(i, j + 1, c) - 2.0 * at(i, j, c) + at(i, j - 1, c)) / (h * h); };
            auto duv = [&](int c) {
                return (at(i + 1, j + 1, c) - at(i + 1, j - 1, c) - at(i - 1, j + 1, c) + at(i - 1, j - 1, c)) /
                       (4.0 * h * h);
            };
            const double E = at(i, j, 0), F = at(i, j, 1), G = at(i, j, 3);
            const double Eu = du(0), Ev = dv(0), Fu = du(1), Fv = dv(1), Gu = du(3), Gv = dv(3);
            const double a11 = -0.5 * dvv(0) + duv(1) - 0.5 * duu(3);
            auto det3 = [](double a, double b, double c, double d, double e, double f, double g, double hh, double k) {
                return a * (e * k - f * hh) - b * (d * k - f * g) + c * (d * hh - e * g);
            };
            const double m1 = det3(a11, 0.5 * Eu, Fu - 0.5 * Ev, Fv - 0.5 * Gu, E, F, 0.5 * Gv, F, G);
            const double m2 = det3(0.0, 0.5 * Ev, 0.5 * Gu, 0.5 * Ev, E, F, 0.5 * Gu, F, G);
            const double w = E * G - F * F;
            out[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] =
                (m1 - m2) / (w * w);
        }
    }
    return out;
}

EmbeddingCheck check_embedding(const EmbeddingSample& e) {
    EmbeddingCheck r{std::numeric_limits<double>::infinity(), 0.0, 0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < e.I.size(); ++k) {
        const Mat2& I = e.I[k];
        r.min_det_I = std::min(r.min_det_I, mat_det(I));
        const Mat2 ib = mat_mul(I, e.B[k]);
        r.self_adjoint = std::max(r.self_adjoint, std::abs(ib[1] - ib[2]));
        const Mat2 j2 = mat_mul(e.J[k], e.J[k]);
        r.complex_square = std::max({r.complex_square, std::abs(j2[0] + 1.0), std::abs(j2[1]), std::abs(j2[2]),
                                     std::abs(j2[3] + 1.0)});
        const Mat2 o = mat_mul(mat_transpose(e.J[k]), mat_mul(I, e.J[k]));
        for (std::size_t c = 0; c < 4; ++c) r.orthogonal = std::max(r.orthogonal, std::abs(o[c] - I[c]));
    }
    const auto K = gaussian_curvature(e.I, e.n, e.h);
    for (std::size_t k = 0; k < K.size(); ++k) {
        if (std::isnan(K[k])) continue;
        r.gauss = std::max(r.gauss, std::abs(mat_det(e.B[k]) + 1.0 + K[k]));
    }
    return r;
}

MetricSample normal_flow_metric(const EmbeddingSample& e, double t) {
    MetricSample out;
    out.reserve(e.I.size());
    const double c = std::cos(t), s = std::sin(t);
    for (std::size_t k = 0; k < e.I.size(); ++k) {
        const Mat2& B = e.B[k];
        const Mat2 m{c + s * B[0], s * B[1], s * B[2], c + s * B[3]};
        if (std::abs(mat_det(m)) < 1e-12) {
            std::ostringstream os;
            os << "focal point at sample " << k << " for t = " << t;
            throw DegenerateSample(os.str());
        }
        out.push_back(flow_metric(e.I[k], B, t));
    }
    return out;
}

double flow_curvature_check(const EmbeddingSample& e, double t) {
    normal_flow_metric(e, t);  // focal-point check
    const double h = e.h;
    const int n = e.n;
    // Metric of -dt^2 + g_t in coordinates (u, v, t) at grid offsets.
    auto G = [&](int i, int j, int dt) {
        const std::size_t k = e.index(i, j);
        const Mat2 g = flow_metric(e.I[k], e.B[k], t + dt * h);
        Mat3 m{};
        m[0] = {g[0], g[1], 0.0};
        m[1] = {g[2], g[3], 0.0};
        m[2] = {0.0, 0.0, -1.0};
        return m;
    };
    double worst = 0.0;
    for (int i = 2; i + 2 < n; ++i) {
        for (int j = 2; j + 2 < n; ++j) {
            // First and second partials of every metric component.
            auto shifted = [&](int a, int s) {
                const int di = a == 0 ? s : 0, dj = a == 1 ? s : 0, dt = a == 2 ? s : 0;
                return G(i + di, j + dj, dt);
            };
            auto shifted2 = [&](int a, int sa, int b, int sb) {
                int di = 0, dj = 0, dt = 0;
                for (auto [ax, s] : {std::pair{a, sa}, std::pair{b, sb}}) {
                    (ax == 0 ? di : ax == 1 ? dj : dt) += s;
                }
                return G(i + di, j + dj, dt);
            };
            const Mat3 g0 = G(i, j, 0);
            std::array<Mat3, 3> d1{};
            std::array<std::array<Mat3, 3>, 3> d2{};
            for (int a = 0; a < 3; ++a) {
                const Mat3 p = shifted(a, 1), m = shifted(a, -1);
                for (int x = 0; x < 3; ++x) {
                    for (int y = 0; y < 3; ++y) {
                        d1[a][x][y] = (p[x][y] - m[x][y]) / (2.0 * h);
                        d2[a][a][x][y] = (p[x][y] - 2.0 * g0[x][y] + m[x][y]) / (h * h);
                    }
                }
                for (int b = a + 1; b < 3; ++b) {
                    const Mat3 pp = shifted2(a, 1, b, 1), pm = shifted2(a, 1, b, -1);
                    const Mat3 mp = shifted2(a, -1, b, 1), mm = shifted2(a, -1, b, -1);
                    for (int x = 0; x < 3; ++x) {
                        for (int y = 0; y < 3; ++y) {
                            d2[a][b][x][y] = (pp[x][y] - pm[x][y] - mp[x][y] + mm[x][y]) / (4.0 * h * h);
                            d2[b][a][x][y] = d2[a][b][x][y];
                        }
                    }
                }
            }
            const Mat3 gi = inverse3(g0);
            // Gamma^a_{bc}
            double gamma[3][3][3];
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    for (int c = 0; c < 3; ++c) {
                        double s = 0.0;
                        for (int d = 0; d < 3; ++d) s += gi[a][d] * (d1[b][d][c] + d1[c][d][b] - d1[d][b][c]);
                        gamma[a][b][c] = 0.5 * s;
                    }
                }
            }
            auto riemann = [&](int a, int b, int c, int d) {
                double r = 0.5 * (d2[b][c][a][d] + d2[a][d][b][c] - d2[a][c][b][d] - d2[b][d][a][c]);
                for (int x = 0; x < 3; ++x) {
                    for (int y = 0; y < 3; ++y) {
                        r += g0[x][y] * (gamma[x][b][c] * gamma[y][a][d] - gamma[x][b][d] * gamma[y][a][c]);
                    }
                }
                return r;
            };
            for (auto [a, b] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
                const double area = g0[a][a] * g0[b][b] - g0[a][b] * g0[a][b];
                const double K = riemann(a, b, a, b) / area;
                worst = std::max(worst, std::abs(K + 1.0));
            }
        }
    }
    return worst;
}

std::pair<MetricSample, MetricSample> mu_from_embedding(const EmbeddingSample& e) {
    MetricSample left, right;
    for (std::size_t k = 0; k < e.I.size(); ++k) {
        const Mat2 jb = mat_mul(e.J[k], e.B[k]);
        const Mat2 p{1.0 + jb[0], jb[1], jb[2], 1.0 + jb[3]};
        const Mat2 m{1.0 - jb[0], -jb[1], -jb[2], 1.0 - jb[3]};
        if (std::abs(mat_det(p)) < 1e-12 || std::abs(mat_det(m)) < 1e-12) {
            std::ostringstream os;
            os << "E + JB or E - JB is singular at sample " << k;
            throw DegenerateSample(os.str());
        }
        left.push_back(mat_mul(mat_transpose(p), mat_mul(e.I[k], p)));
        right.push_back(mat_mul(mat_transpose(m), mat_mul(e.I[k], m)));
    }
    return {left, right};
}

JacobiReport jacobi_check(const std::array<double, 2>& v0, const std::array<double, 2>& v1, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("jacobi_check needs s > 0");
    const Vec4 p{0.0, 0.0, 1.0, 0.0};
    const Vec4 T{0.0, 0.0, 0.0, 1.0};
    const Vec4 V0{v0[0], v0[1], 0.0, 0.0};
    const Vec4 V1{v1[0], v1[1], 0.0, 0.0};
    const double end = std::max(s, hyp::kPi / 2.0);
    const int steps = static_cast<int>(std::ceil(end / 1e-3));
    const double ds = end / steps;

    // Geodesic of the quadric <x, x> = -1: x'' = <x', x'> x.
    auto integrate = [&](double eps) {
        Vec4 x, w;
        const double nx = std::sqrt(1.0 - eps * eps * lorentz(V0, V0));
        for (std::size_t k = 0; k < 4; ++k) {
            x[k] = (p[k] + eps * V0[k]) / nx;
            w[k] = T[k] + eps * V1[k];
        }
        const double xw = lorentz(w, x);
        for (std::size_t k = 0; k < 4; ++k) w[k] += xw * x[k];
        const double nw = std::sqrt(-lorentz(w, w));
        for (double& c : w) c /= nw;

        std::vector<Vec4> path{x};
        using State = std::array<double, 8>;
        auto rhs = [&](const State& st) {
            Vec4 xx{st[0], st[1], st[2], st[3]}, ww{st[4], st[5], st[6], st[7]};
            const double q = lorentz(ww, ww);
            return State{ww[0], ww[1], ww[2], ww[3], q * xx[0], q * xx[1], q * xx[2], q * xx[3]};
        };
        State st{x[0], x[1], x[2], x[3], w[0], w[1], w[2], w[3]};
        for (int i = 0; i < steps; ++i) {
            auto add = [](const State& a, const State& b, double k) {
                State r;
                for (std::size_t m = 0; m < 8; ++m) r[m] = a[m] + k * b[m];
                return r;
            };
            const State k1 = rhs(st);
            const State k2 = rhs(add(st, k1, ds / 2));
            const State k3 = rhs(add(st, k2, ds / 2));
            const State k4 = rhs(add(st, k3, ds));
            for (std::size_t m = 0; m < 8; ++m) st[m] += ds / 6.0 * (k1[m] + 2 * k2[m] + 2 * k3[m] + k4[m]);
            path.push_back(Vec4{st[0], st[1], st[2], st[3]});
        }
        return path;
    };

    const double delta = 1e-4;
    const auto plus = integrate(delta);
    const auto minus = integrate(-delta);
    JacobiReport r{0.0, std::numeric_limits<double>::infinity()};
    for (int i = 0; i <= steps; ++i) {
        const double si = i * ds;
        Vec4 numeric, closed;
        for (std::size_t k = 0; k < 4; ++k) {
            numeric[k] = (plus[static_cast<std::size_t>(i)][k] - minus[static_cast<std::size_t>(i)][k]) / (2.0 * delta);
            closed[k] = std::cos(si) * V0[k] + std::sin(si) * V1[k];
        }
        if (si <= s + 1e-12) {
            double err = 0.0;
            for (std::size_t k = 0; k < 4; ++k) err += (numeric[k] - closed[k]) * (numeric[k] - closed[k]);
            r.deviation = std::max(r.deviation, std::sqrt(err));
        }
        if (i > 0 && si < hyp::kPi / 2.0 - 1e-9) {
            r.min_norm = std::min(r.min_norm, std::sqrt(std::max(0.0, lorentz(numeric, numeric))));
        }
    }
    return r;
}

}  // namespace qf::ads
