#include "powernet/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "powernet/error.hpp"
#include "powernet/format.hpp"
#include "powernet/monomial.hpp"
#include "powernet/multipoly.hpp"
#include "powernet/netcore.hpp"
#include "powernet/poly1d.hpp"
#include "powernet/spectral.hpp"
#include "powernet/vandermonde.hpp"

namespace powernet::cli {

namespace {

constexpr int kCheckPoints = 20;
constexpr double kCheckTolerance = 1e-9;

class CheckFailed : public NumericalError {
public:
    using NumericalError::NumericalError;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + path);
    f << text;
}

std::vector<double> split_reals(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        auto b = tok.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = tok.find_last_not_of(" \t\r");
        tok = tok.substr(b, e - b + 1);
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size()) throw ParseError("not a number: " + tok);
        v.push_back(x);
    }
    return v;
}

std::vector<int> split_ints(const std::string& text) {
    std::vector<int> v;
    for (double x : split_reals(text)) {
        if (x != std::floor(x)) throw ValidationError("expected integers in list");
        v.push_back(static_cast<int>(x));
    }
    return v;
}

std::string join_reals(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_real(v[i]);
    }
    return s;
}

// random check points in [-1,1]^d
std::vector<std::vector<double>> check_points(std::uint64_t seed, int d) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> pts(kCheckPoints, std::vector<double>(d));
    for (auto& p : pts)
        for (auto& v : p) v = -1.0 + 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    return pts;
}

void verify(const PowerNet& net, const std::vector<std::vector<double>>& pts,
            const std::function<double(const std::vector<double>&)>& oracle, double scale) {
    for (const auto& p : pts) {
        double got = evaluate(net, p)[0];
        double want = oracle(p);
        if (!(std::fabs(got - want) <= kCheckTolerance * std::max(1.0, scale)))
            throw CheckFailed("built net disagrees with its oracle at x = " + join_reals(p) + ": " + format_real(got) +
                              " vs " + format_real(want));
    }
}

void report_net(const PowerNet& net, std::ostream& err) {
    NetStats st = stats(net);
    err << "depth " << st.depth << ", nodes " << st.nodes << ", nonzeros " << st.nonzeros << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Build, inspect and evaluate exact RePU networks for polynomials"};
    app.require_subcommand(1);
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "seed for validation points (POWERNET_SEED overrides)");

    int s = 2, n = 1, N = 8, d = 1, max_s = 12;
    std::string out_path, net_path, coeffs_path, terms_path, strategy = "auto", xs, points_path;
    std::string schemes = "chebyshev,equidistant,optimal", func, Ns_text;

    auto* mono = app.add_subcommand("build-mono", "net for x^n");
    mono->add_option("--s", s, "activation power")->required();
    mono->add_option("--n", n, "exponent")->required();
    mono->add_option("--out", out_path, "output file (default stdout)");

    auto* poly = app.add_subcommand("build-poly", "net for a univariate polynomial");
    poly->add_option("--coeffs", coeffs_path, "coefficients, CSV lines or JSON array, ascending")->required();
    poly->add_option("--s", s, "activation power")->required();
    poly->add_option("--strategy", strategy, "shallow, horner, recursive, optimal or auto");
    poly->add_option("--out", out_path, "output file (default stdout)");

    auto* mpoly = app.add_subcommand("build-mpoly", "net for a multivariate polynomial");
    mpoly->add_option("--terms", terms_path, "JSON terms file")->required();
    mpoly->add_option("--s", s, "activation power")->required();
    bool complete = false;
    mpoly->add_flag("--complete", complete, "close the support downward before building");
    mpoly->add_option("--out", out_path, "output file (default stdout)");

    auto* ev = app.add_subcommand("eval", "evaluate a net");
    ev->add_option("--net", net_path, "net JSON")->required();
    auto* xopt = ev->add_option("--x", xs, "one input point, comma separated");
    auto* popt = ev->add_option("--points", points_path, "CSV file, one point per line");
    xopt->excludes(popt);
    ev->add_option("--out", out_path, "output file (default stdout)");

    auto* st = app.add_subcommand("stats", "depth, nodes and nonzeros of a net");
    st->add_option("--net", net_path, "net JSON")->required();

    auto* cond = app.add_subcommand("cond", "condition numbers of the node schemes");
    cond->add_option("--schemes", schemes, "comma separated: chebyshev, equidistant, optimal");
    cond->add_option("--max-s", max_s, "largest s");
    cond->add_option("--out", out_path, "CSV file (default stdout)");

    auto* approx = app.add_subcommand("approx", "project a function and compile it");
    approx->add_option("--func", func, "exp, sin, runge, absx3 or poly")->required();
    approx->add_option("--N", N, "degree")->required();
    approx->add_option("--s", s, "activation power");
    approx->add_option("--d", d, "dimension (1, 2 or 3)");
    approx->add_option("--coeffs", coeffs_path, "coefficients when --func poly");
    approx->add_option("--out", out_path, "net output file");

    auto* sweep = app.add_subcommand("sweep", "error against degree");
    sweep->add_option("--func", func, "exp, sin, runge, absx3 or poly")->required();
    sweep->add_option("--Ns", Ns_text, "comma separated increasing degrees")->required();
    sweep->add_option("--s", s, "activation power");
    sweep->add_option("--d", d, "dimension (1, 2 or 3)");
    sweep->add_option("--coeffs", coeffs_path, "coefficients when --func poly");
    sweep->add_option("--out", out_path, "CSV file (default stdout)");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 1;
    }
    if (const char* env = std::getenv("POWERNET_SEED")) {
        try {
            seed = std::stoull(env);
        } catch (const std::exception&) {
            err << "error: POWERNET_SEED is not an unsigned integer\n";
            return 1;
        }
    }

    auto target_function = [&]() -> FunctionNd {
        if (func != "poly") return builtin_function(func, d);
        if (d != 1) throw ValidationError("--func poly is univariate");
        if (coeffs_path.empty()) throw ValidationError("--func poly needs --coeffs");
        PolyCoeffs p = parse_coeffs(read_file(coeffs_path));
        return [p](std::span<const double> x) { return horner_eval(p, x[0]); };
    };

    try {
        if (*mono) {
            if (n < 0) throw ValidationError("--n must be non-negative");
            PowerNet net = monomial_net(n, s);
            verify(net, check_points(seed, 1), [n](const std::vector<double>& x) { return std::pow(x[0], n); }, 1.0);
            report_net(net, err);
            write_output(out_path, serialize(net), out);
        } else if (*poly) {
            PolyCoeffs p = parse_coeffs(read_file(coeffs_path));
            PowerNet net = build_poly_net(p, s, parse_strategy(strategy));
            verify(net, check_points(seed, 1), [&p](const std::vector<double>& x) { return horner_eval(p, x[0]); },
                   p.l1_norm());
            report_net(net, err);
            write_output(out_path, serialize(net), out);
        } else if (*mpoly) {
            MultiPoly f = parse_mpoly(read_file(terms_path));
            if (complete) f = complete_support(f);
            PowerNet net = mpoly_net(f, s);
            verify(net, check_points(seed, f.dim()), [&f](const std::vector<double>& x) { return mpoly_eval(f, x); },
                   f.l1_norm());
            report_net(net, err);
            write_output(out_path, serialize(net), out);
        } else if (*ev) {
            PowerNet net = deserialize(read_file(net_path));
            std::vector<std::vector<double>> pts;
            if (!xs.empty()) {
                pts.push_back(split_reals(xs));
            } else if (!points_path.empty()) {
                std::istringstream in(read_file(points_path));
                std::string line;
                while (std::getline(in, line))
                    if (line.find_first_not_of(" \t\r") != std::string::npos) pts.push_back(split_reals(line));
            } else {
                throw ValidationError("eval needs --x or --points");
            }
            auto vals = evaluate_batch(net, pts);
            std::string text;
            for (const auto& v : vals) text += join_reals(v) + "\n";
            write_output(out_path, text, out);
        } else if (*st) {
            PowerNet net = deserialize(read_file(net_path));
            NetStats ns = stats(net);
            nlohmann::ordered_json j;
            j["depth"] = ns.depth;
            j["nodes"] = ns.nodes;
            j["nonzeros"] = ns.nonzeros;
            j["power"] = net.power();
            j["input_dim"] = net.input_dim();
            out << j.dump() << "\n";
        } else if (*cond) {
            std::vector<NodeKind> kinds;
            std::stringstream ss(schemes);
            std::string tok;
            while (std::getline(ss, tok, ','))
                if (!tok.empty()) kinds.push_back(parse_node_kind(tok));
            if (kinds.empty()) throw ValidationError("--schemes is empty");
            write_output(out_path, cond_csv(cond_sweep(kinds, max_s)), out);
        } else if (*approx) {
            FunctionNd f = target_function();
            Approximation ap = d == 1 ? approximate_net_1d([&f](double x) { return f(std::span<const double>(&x, 1)); },
                                                           N, s)
                                      : approximate_net_md(f, N, d, s);
            nlohmann::ordered_json j;
            j["degree"] = ap.report.degree;
            j["l2_error"] = ap.report.l2_error;
            j["linf_error"] = ap.report.linf_error;
            j["n_samples"] = ap.report.n_samples;
            j["fidelity"] = ap.report.fidelity;
            if (!out_path.empty()) write_output(out_path, serialize(ap.net), out);
            report_net(ap.net, err);
            out << j.dump() << "\n";
        } else if (*sweep) {
            FunctionNd f = target_function();
            SweepResult r = convergence_sweep(f, split_ints(Ns_text), s, d);
            err << "rate: " << to_string(r.kind);
            if (r.kind == RateKind::Algebraic || r.kind == RateKind::Exponential) err << ", slope " << r.slope;
            err << "\n";
            write_output(out_path, sweep_csv(r), out);
        }
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace powernet::cli
