#include "powernet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "powernet/error.hpp"
#include "powernet/format.hpp"

namespace powernet {

namespace {

// P_n(x) and P_n'(x)
template <class T>
std::pair<T, T> legendre_with_derivative(int n, T x) {
    T p0 = 1, p1 = x;
    if (n == 0) return {T(1), T(0)};
    for (int k = 1; k < n; ++k) {
        T p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
    }
    T dp = n * (x * p1 - p0) / (x * x - 1);
    return {p1, dp};
}

}  // namespace

QuadratureRule gauss_legendre(int nq) {
    if (nq < 1) throw ValidationError("gauss_legendre: need at least one node");
    QuadratureRule q;
    q.nodes.assign(nq, 0.0);
    q.weights.assign(nq, 0.0);
    const double pi = std::numbers::pi;
    const int half = (nq + 1) / 2;
    for (int i = 1; i <= half; ++i) {
        if (nq % 2 == 1 && i == half) {
            auto [p, dp] = legendre_with_derivative(nq, 0.0L);
            (void)p;
            q.nodes[half - 1] = 0.0;
            q.weights[half - 1] = static_cast<double>(2.0L / (dp * dp));
            continue;
        }
        // i-th largest root lies in (cos(i pi/(n+1/2)), cos((i-1/2) pi/(n+1/2)))
        double lo = std::cos(i * pi / (nq + 0.5));
        double hi = std::cos((i - 0.5) * pi / (nq + 0.5));
        double x = std::cos((i - 0.25) * pi / (nq + 0.5));
        double plo = legendre_with_derivative(nq, lo).first;
        bool done = false;
        for (int it = 0; it < 100; ++it) {
            auto [p, dp] = legendre_with_derivative(nq, x);
            if (p == 0.0) {
                done = true;
                break;
            }
            if ((p < 0) == (plo < 0))
                lo = x, plo = p;
            else
                hi = x;
            double next = x - p / dp;
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            double step = std::fabs(next - x);
            x = next;
            if (step <= 2.0 * std::numeric_limits<double>::epsilon() * std::fabs(x)) {
                done = true;
                break;
            }
        }
        if (!done) throw ConvergenceError("gauss_legendre: Newton iteration did not converge");
        // polish and weigh in extended precision
        long double xl = x;
        for (int it = 0; it < 2; ++it) {
            auto [p, dp] = legendre_with_derivative(nq, xl);
            xl -= p / dp;
        }
        x = static_cast<double>(xl);
        auto [p, dp] = legendre_with_derivative(nq, static_cast<long double>(x));
        (void)p;
        const double w = static_cast<double>(2.0L / ((1.0L - xl * xl) * dp * dp));
        q.nodes[nq - i] = x;
        q.nodes[i - 1] = -x;
        q.weights[nq - i] = w;
        q.weights[i - 1] = w;
    }
    return q;
}

std::vector<double> legendre_values(int N, double x) {
    std::vector<double> P(N + 1);
    P[0] = 1.0;
    if (N >= 1) P[1] = x;
    for (int k = 1; k < N; ++k) P[k + 1] = ((2 * k + 1) * x * P[k] - k * P[k - 1]) / (k + 1);
    return P;
}

double legendre_eval(const LegendreExpansion& e, double x) {
    // Clenshaw
    double b1 = 0.0, b2 = 0.0;
    for (int k = e.degree(); k >= 0; --k) {
        double alpha = (2.0 * k + 1.0) / (k + 1.0) * x;
        double beta = -(k + 1.0) / (k + 2.0);
        double b0 = e.coeffs[k] + alpha * b1 + beta * b2;
        b2 = b1;
        b1 = b0;
    }
    return b1;
}

LegendreExpansion project_legendre(const Function1d& f, int N, int nq) {
    if (N < 0) throw ValidationError("project_legendre: N must be non-negative");
    if (nq < N + 1) throw ValidationError("project_legendre: need at least N+1 quadrature points");
    QuadratureRule q = gauss_legendre(nq);
    // extended accumulation keeps the coefficients clear of the summation noise
    std::vector<long double> acc(N + 1, 0.0L);
    for (int i = 0; i < nq; ++i) {
        const double fx = f(q.nodes[i]);
        if (!std::isfinite(fx)) throw NumericalError("project_legendre: function is not finite on [-1,1]");
        const long double x = q.nodes[i];
        const long double fw = static_cast<long double>(q.weights[i]) * fx;
        long double p0 = 1.0L, p1 = x;
        acc[0] += fw;
        if (N >= 1) acc[1] += fw * p1;
        for (int k = 1; k < N; ++k) {
            long double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
            acc[k + 1] += fw * p2;
            p0 = p1;
            p1 = p2;
        }
    }
    LegendreExpansion e;
    e.coeffs.resize(N + 1);
    for (int k = 0; k <= N; ++k) e.coeffs[k] = static_cast<double>(acc[k] * (2 * k + 1) / 2);
    return e;
}

namespace {

// monomial coefficients of P_0..P_N
std::vector<std::vector<long double>> legendre_rows(int N) {
    std::vector<std::vector<long double>> R(N + 1);
    R[0] = {1.0L};
    if (N >= 1) R[1] = {0.0L, 1.0L};
    for (int k = 1; k < N; ++k) {
        std::vector<long double> next(k + 2, 0.0L);
        for (int j = 0; j <= k; ++j) next[j + 1] += (2 * k + 1) * R[k][j];
        for (int j = 0; j < k; ++j) next[j] -= k * R[k - 1][j];
        for (auto& v : next) v /= (k + 1);
        R[k + 1] = std::move(next);
    }
    return R;
}

void check_conversion_degree(int N) {
    if (N > kMaxConversionDegree)
        throw UnsupportedError("basis conversion is capped at degree " + std::to_string(kMaxConversionDegree));
}

}  // namespace

PolyCoeffs legendre_to_monomial(const LegendreExpansion& e) {
    const int N = e.degree();
    if (N < 0) throw ValidationError("empty Legendre expansion");
    check_conversion_degree(N);
    auto R = legendre_rows(N);
    std::vector<long double> a(N + 1, 0.0L);
    for (int k = 0; k <= N; ++k)
        for (int j = 0; j <= k; ++j) a[j] += static_cast<long double>(e.coeffs[k]) * R[k][j];
    return PolyCoeffs(std::vector<double>(a.begin(), a.end()));
}

LegendreExpansion monomial_to_legendre(const PolyCoeffs& p) {
    const int N = p.degree();
    check_conversion_degree(N);
    auto R = legendre_rows(N);
    std::vector<long double> a(p.coeffs().begin(), p.coeffs().end());
    LegendreExpansion e;
    e.coeffs.assign(N + 1, 0.0);
    for (int k = N; k >= 0; --k) {
        long double c = a[k] / R[k][k];
        e.coeffs[k] = static_cast<double>(c);
        for (int j = 0; j <= k; ++j) a[j] -= c * R[k][j];
    }
    return e;
}

int default_quadrature_points(int N) { return 2 * N + 32; }

std::vector<double> equispaced_grid(int n) {
    std::vector<double> x(n);
    if (n == 1) return {0.0};
    for (int i = 0; i < n; ++i) x[i] = -1.0 + 2.0 * i / (n - 1);
    return x;
}

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

double radical_inverse(long long i, int base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (i > 0) {
        r += f * (i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

}  // namespace

std::vector<std::vector<double>> halton_points(int n, int d) {
    if (d < 1 || d > 10) throw UnsupportedError("halton_points: dimension must be in 1..10");
    std::vector<std::vector<double>> pts(n, std::vector<double>(d));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) pts[i][j] = 2.0 * radical_inverse(i + 1, kPrimes[j]) - 1.0;
    return pts;
}

Approximation approximate_net_1d(const Function1d& f, int N, int s) {
    if (N < 0) throw ValidationError("approximate_net_1d: N must be non-negative");
    check_power(s);
    LegendreExpansion e = project_legendre(f, N, default_quadrature_points(N));
    PowerNet net = optimal_poly_net(legendre_to_monomial(e), s);
    auto grid = equispaced_grid(2048);
    ErrorReport rep;
    rep.n_samples = static_cast<int>(grid.size());
    rep.degree = N;
    double sq = 0.0, worst_gap = 0.0, peak = 1.0;
    for (double x : grid) {
        double y = evaluate_scalar(net, x);
        double p = legendre_eval(e, x);
        double err = std::fabs(y - f(x));
        sq += err * err;
        rep.linf_error = std::max(rep.linf_error, err);
        worst_gap = std::max(worst_gap, std::fabs(y - p));
        peak = std::max(peak, std::fabs(p));
    }
    rep.l2_error = std::sqrt(2.0 * sq / grid.size());
    rep.fidelity = worst_gap / peak;
    return {std::move(net), rep};
}

namespace {

void check_hyperbolic_args(int N, int d, int nq) {
    if (d < 2 || d > 3) throw UnsupportedError("hyperbolic projection supports d = 2 or 3");
    if (N < 1 || N > kMaxHyperbolicDegree)
        throw UnsupportedError("hyperbolic projection supports 1 <= N <= " + std::to_string(kMaxHyperbolicDegree));
    if (nq < N + 1) throw ValidationError("hyperbolic projection: need at least N+1 quadrature points");
}

}  // namespace

std::map<MultiIndex, double> project_hyperbolic_legendre(const FunctionNd& f, int N, int d, int nq) {
    check_hyperbolic_args(N, d, nq);
    QuadratureRule q = gauss_legendre(nq);
    const int K = N + 1;
    // wP[i][k] = w_i P_k(x_i)
    std::vector<std::vector<double>> wP(nq);
    for (int i = 0; i < nq; ++i) {
        wP[i] = legendre_values(N, q.nodes[i]);
        for (double& v : wP[i]) v *= q.weights[i];
    }
    // samples F[i_1 ... i_d], last index fastest
    std::size_t total = 1;
    for (int j = 0; j < d; ++j) total *= nq;
    std::vector<double> F(total);
    std::vector<double> x(d);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (int j = d - 1; j >= 0; --j) {
            x[j] = q.nodes[rem % nq];
            rem /= nq;
        }
        F[flat] = f(x);
        if (!std::isfinite(F[flat])) throw NumericalError("hyperbolic projection: function is not finite");
    }
    // contract one quadrature axis at a time, from the first: the
    // contracted axis is moved to the back as a degree index
    std::vector<double> cur = F;
    std::size_t lead = total / nq;  // product of the remaining quadrature axes after the first
    std::size_t trail = 1;          // product of degree axes already produced
    for (int axis = 0; axis < d; ++axis) {
        std::vector<double> next(lead * trail * K, 0.0);
        for (int i = 0; i < nq; ++i)
            for (std::size_t r = 0; r < lead; ++r)
                for (std::size_t t = 0; t < trail; ++t) {
                    double v = cur[(static_cast<std::size_t>(i) * lead + r) * trail + t];
                    double* out = &next[(r * trail + t) * K];
                    for (int k = 0; k < K; ++k) out[k] += wP[i][k] * v;
                }
        cur = std::move(next);
        trail *= K;
        lead = lead / nq == 0 ? 1 : lead / nq;
        if (axis == d - 1) lead = 1;
    }
    // cur is indexed by (k_1, ..., k_d), k_1 slowest
    std::map<MultiIndex, double> out;
    const MultiIndexSet chi = hyperbolic_set(N, d);
    for (const auto& k : chi.indices()) {
        std::size_t flat = 0;
        double scale = 1.0;
        for (int j = 0; j < d; ++j) {
            flat = flat * K + k[j];
            scale *= (2.0 * k[j] + 1.0) / 2.0;
        }
        out[k] = scale * cur[flat];
    }
    return out;
}

MultiPoly project_hyperbolic(const FunctionNd& f, int N, int d, int nq) {
    auto leg = project_hyperbolic_legendre(f, N, d, nq);
    auto R = legendre_rows(N);
    std::map<MultiIndex, long double> acc;
    for (const auto& [k, c] : leg) {
        // expand Π P_{k_j}(x_j) into monomials x^m with m <= k componentwise
        std::vector<int> m(d, 0);
        while (true) {
            long double term = c;
            for (int j = 0; j < d; ++j) term *= R[k[j]][m[j]];
            if (term != 0.0L) acc[MultiIndex(m)] += term;
            int j = d - 1;
            while (j >= 0 && m[j] == k[j]) m[j--] = 0;
            if (j < 0) break;
            ++m[j];
        }
    }
    std::map<MultiIndex, double> terms;
    for (const auto& [k, v] : acc) terms[k] = static_cast<double>(v);
    return MultiPoly(d, std::move(terms), hyperbolic_set(N, d));
}

Approximation approximate_net_md(const FunctionNd& f, int N, int d, int s) {
    check_power(s);
    MultiPoly poly = project_hyperbolic(f, N, d, default_quadrature_points(N));
    PowerNet net = mpoly_net(poly, s);
    auto pts = halton_points(4096, d);
    auto vals = evaluate_batch(net, pts);
    ErrorReport rep;
    rep.n_samples = static_cast<int>(pts.size());
    rep.degree = N;
    double sq = 0.0, worst_gap = 0.0, peak = 1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double y = vals[i][0];
        double p = mpoly_eval(poly, pts[i]);
        double err = std::fabs(y - f(pts[i]));
        sq += err * err;
        rep.linf_error = std::max(rep.linf_error, err);
        worst_gap = std::max(worst_gap, std::fabs(y - p));
        peak = std::max(peak, std::fabs(p));
    }
    rep.l2_error = std::sqrt(std::pow(2.0, d) * sq / pts.size());
    rep.fidelity = worst_gap / peak;
    return {std::move(net), rep};
}

std::string to_string(RateKind kind) {
    switch (kind) {
        case RateKind::Exact: return "exact";
        case RateKind::Algebraic: return "algebraic";
        case RateKind::Exponential: return "exponential";
        case RateKind::Undetermined: return "undetermined";
    }
    return "?";
}

namespace {

// least squares y = a + b x; returns (b, R^2)
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    double b = sxy / sxx;
    double r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return {b, r2};
}

constexpr double kExactThreshold = 1e-11;

}  // namespace

SweepResult convergence_sweep(const FunctionNd& f, const std::vector<int>& Ns, int s, int d) {
    if (Ns.empty()) throw ValidationError("convergence_sweep: no degrees given");
    for (std::size_t i = 1; i < Ns.size(); ++i)
        if (Ns[i] <= Ns[i - 1]) throw ValidationError("convergence_sweep: degrees must increase");
    if (d < 1) throw ValidationError("convergence_sweep: dimension must be at least 1");
    SweepResult res;
    std::vector<double> fx, fy, fz;
    bool exact = true;
    bool plateau = false;
    double last_fitted = INFINITY;
    for (int N : Ns) {
        Approximation ap = d == 1 ? approximate_net_1d([&f](double x) { return f(std::span<const double>(&x, 1)); }, N, s)
                                  : approximate_net_md(f, N, d, s);
        const auto& r = ap.report;
        res.rows.push_back({N, r.l2_error, r.linf_error});
        exact = exact && r.l2_error <= kExactThreshold && r.linf_error <= kExactThreshold;
        // points whose error is within reach of the net's own roundoff carry no rate information
        // so do points after the error has stopped falling (roundoff in the samples)
        double floor = std::max(16.0 * r.fidelity, 1e-15);
        plateau = plateau || r.linf_error > 0.5 * last_fitted;
        if (r.linf_error > floor && N > 0 && !plateau) {
            last_fitted = r.linf_error;
            fx.push_back(N);
            fy.push_back(std::log(r.l2_error));
            fz.push_back(std::log(static_cast<double>(N)));
        }
    }
    res.fitted_points = fx.size();
    if (exact) {
        res.kind = RateKind::Exact;
        return res;
    }
    if (fx.size() < 2) return res;
    auto [be, re] = linear_fit(fx, fy);
    auto [ba, ra] = linear_fit(fz, fy);
    res.r2_exponential = re;
    res.r2_algebraic = ra;
    if (re >= ra) {
        res.kind = RateKind::Exponential;
        res.slope = be;
    } else {
        res.kind = RateKind::Algebraic;
        res.slope = ba;
    }
    return res;
}

std::string sweep_csv(const SweepResult& r) {
    std::ostringstream os;
    os << "N,l2,linf\n";
    for (const auto& row : r.rows) os << row.N << ',' << format_real(row.l2) << ',' << format_real(row.linf) << '\n';
    return os.str();
}

FunctionNd builtin_function(const std::string& name, int d) {
    if (d < 1) throw ValidationError("function dimension must be at least 1");
    auto sum = [](std::span<const double> x) {
        double t = 0.0;
        for (double v : x) t += v;
        return t;
    };
    if (name == "exp") return [sum](std::span<const double> x) { return std::exp(sum(x)); };
    if (name == "sin") return [sum](std::span<const double> x) { return std::sin(sum(x)); };
    if (name == "absx3") return [sum](std::span<const double> x) { return std::pow(std::fabs(sum(x)), 3); };
    if (name == "runge")
        return [](std::span<const double> x) {
            double r = 0.0;
            for (double v : x) r += v * v;
            return 1.0 / (1.0 + 25.0 * r);
        };
    throw ValidationError("unknown function \"" + name + "\" (known: exp, sin, runge, absx3)");
}

}  // namespace powernet
