#include "mollify/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "mollify/approx.hpp"
#include "mollify/convolve.hpp"
#include "mollify/funcspec.hpp"
#include "mollify/kernels.hpp"
#include "mollify/report.hpp"
#include "mollify/verify.hpp"

namespace mollify::cli {

namespace {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

FunctionSpec load_piecewise_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open function file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad function JSON: ") + e.what());
    }
    const nlohmann::json& pieces = j.is_array() ? j : j.at("pieces");
    if (!pieces.is_array() || pieces.empty()) {
        throw ValidationError("function JSON needs a non-empty piece list");
    }
    PiecewisePoly pp;
    for (const auto& piece : pieces) {
        const auto& iv = piece.at("interval");
        const auto& coeffs = piece.at("poly");
        if (!iv.is_array() || iv.size() != 2 || !coeffs.is_array()) {
            throw ValidationError("each piece needs interval [lo,hi] and poly coefficients");
        }
        std::vector<double> c;
        for (const auto& v : coeffs) c.push_back(v.get<double>());
        double lo = iv[0].get<double>();
        double hi = iv[1].get<double>();
        if (!(lo < hi)) throw ValidationError("piece interval needs lo < hi");
        pp.pieces.push_back({Interval(lo, hi), Polynomial::from_real(c)});
    }
    try {
        return FunctionSpec::piecewise(std::move(pp));
    } catch (const std::invalid_argument& e) {
        throw ValidationError(std::string("bad piecewise function: ") + e.what());
    }
}

FunctionSpec resolve_function(const std::string& spec) {
    if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json") {
        return load_piecewise_json(spec);
    }
    try {
        return function_by_name(spec);
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
}

Kernel resolve_kernel(const std::string& spec) {
    auto inner_args = [&](const std::string& prefix) -> std::vector<std::string> {
        std::string body = spec.substr(prefix.size(), spec.size() - prefix.size() - 1);
        std::vector<std::string> parts;
        std::stringstream ss(body);
        std::string tok;
        while (std::getline(ss, tok, ',')) parts.push_back(tok);
        return parts;
    };
    try {
        if (spec.rfind("tensor(", 0) == 0 && spec.back() == ')') {
            std::vector<Kernel> factors;
            for (const std::string& name : inner_args("tensor(")) {
                factors.push_back(kernel_by_name(name));
            }
            return make_tensor(std::move(factors));
        }
        if (spec.rfind("radial(", 0) == 0 && spec.back() == ')') {
            std::vector<std::string> parts = inner_args("radial(");
            if (parts.size() != 2) throw ValidationError("radial(profile,dim) takes two arguments");
            int dim = std::stoi(parts[1]);
            if (parts[0] == "gauss") {
                return make_radial([](double s) { return std::exp(-s * s); }, dim, 1.0);
            }
            if (parts[0] == "bump") {
                return make_radial(
                    [](double s) {
                        double w = 1.0 - s * s;
                        return w > 0.0 ? std::exp(-1.0 / w) : 0.0;
                    },
                    dim, std::nullopt, 1.0);
            }
            throw ValidationError("unknown radial profile: " + parts[0]);
        }
        return kernel_by_name(spec);
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    } catch (const DimensionLimit& e) {
        throw ValidationError(e.what());
    }
}

Box box_from_values(const std::vector<double>& v) {
    if (v.size() == 2) return Box::interval(v[0], v[1]);
    Box b;
    if (v.size() == 4) {
        b.dim = 2;
        b.axes[0] = Interval(v[0], v[1]);
        b.axes[1] = Interval(v[2], v[3]);
        return b;
    }
    if (v.size() == 6) {
        b.dim = 3;
        b.axes[0] = Interval(v[0], v[1]);
        b.axes[1] = Interval(v[2], v[3]);
        b.axes[2] = Interval(v[4], v[5]);
        return b;
    }
    throw ValidationError("--box takes 2, 4 or 6 numbers (per-axis lo hi)");
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

struct Options {
    std::string f;
    std::string kernel;
    std::vector<double> ts;
    std::vector<double> hs;
    double eps = 0.0;
    std::vector<double> interval;
    std::vector<double> box;
    std::string out;
    uint64_t seed = 42;
    int grid = 0;
    double x = 0.0;
};

int cmd_sweep(const Options& opt) {
    FunctionSpec f = resolve_function(opt.f);
    Kernel k = resolve_kernel(opt.kernel);
    if (opt.ts.empty()) throw ValidationError("sweep needs --t");
    Box box = opt.box.empty() ? box_from_values(opt.interval) : box_from_values(opt.box);
    int grid = opt.grid > 0 ? opt.grid : 81;

    ApproximationReport rep = sweep(f, k, opt.ts, box, grid);
    std::string csv = sweep_csv(rep);
    std::cout << csv;
    if (!opt.out.empty()) {
        write_file(opt.out + ".csv", csv);
        write_file(opt.out + ".json", sweep_json(rep));
        std::vector<double> ts, errs;
        for (const SweepEntry& e : rep.entries) {
            ts.push_back(e.t);
            errs.push_back(e.sup_error);
        }
        write_file(opt.out + "_error_curve.txt", curve_text(ts, errs));
    }
    return 0;
}

int cmd_jump(const Options& opt) {
    FunctionSpec f = resolve_function(opt.f.empty() ? "step" : opt.f);
    Kernel k = resolve_kernel(opt.kernel);
    if (opt.ts.empty()) throw ValidationError("jump needs --t");

    const Breakpoint* bp = nullptr;
    for (const Breakpoint& b : f.breakpoints()) {
        if (b.x == opt.x) bp = &b;
    }
    if (!bp) throw ValidationError("--x must name a declared breakpoint of f");
    const double target = bp->average();

    std::string csv = "t,value,jump_average,abs_gap\n";
    JsonWriter w;
    w.begin_object();
    w.begin_array("entries");
    for (double t : opt.ts) {
        double v = jump_value(f, ScaledKernel(k, t), opt.x);
        csv += format_double(t) + "," + format_double(v) + "," + format_double(target) + "," +
               format_double(std::abs(v - target)) + "\n";
        w.begin_object_element();
        w.field("t", t);
        w.field("value", v);
        w.field("jump_average", target);
        w.field("abs_gap", std::abs(v - target));
        w.end_object();
    }
    w.end_array();
    w.field("x", opt.x);
    w.end_object();

    std::cout << csv;
    if (!opt.out.empty()) {
        write_file(opt.out + ".csv", csv);
        write_file(opt.out + ".json", w.str() + "\n");
    }
    return 0;
}

int cmd_approximate(const Options& opt) {
    FunctionSpec f = resolve_function(opt.f);
    Kernel k = resolve_kernel(opt.kernel);
    if (opt.ts.size() != 1) throw ValidationError("approximate needs a single --t");
    if (opt.hs.empty()) throw ValidationError("approximate needs --h");
    const double t = opt.ts[0];
    Interval audit = opt.interval.size() == 2 ? Interval(opt.interval[0], opt.interval[1])
                                              : Interval(-2.0, 2.0);
    const int grid = opt.grid > 0 ? opt.grid : 50;

    ScaledKernel kt(k, t);
    std::string csv = "h,terms,max_gap,collapse_gap\n";
    JsonWriter w;
    w.begin_object();
    w.begin_array("entries");
    for (double h : opt.hs) {
        TranslateSum ts = riemann_rational(f, k, t, h);
        double gap = 0.0;
        for (int i = 0; i < grid; ++i) {
            double x = audit.lo + audit.width() * i / (grid - 1);
            gap = std::max(gap, std::abs(ts(x) - convolve_at1(f, kt, x)));
        }
        double collapse_gap = std::nan("");
        if (ts.size() <= 64) {
            RationalFunction r = collapse(ts);
            collapse_gap = 0.0;
            for (int i = 0; i < grid; ++i) {
                double x = audit.lo + audit.width() * i / (grid - 1);
                collapse_gap = std::max(collapse_gap, std::abs(r.eval_real(x) - ts(x)));
            }
        }
        csv += format_double(h) + "," + std::to_string(ts.size()) + "," + format_double(gap) +
               "," + format_double(collapse_gap) + "\n";
        w.begin_object_element();
        w.field("h", h);
        w.field("terms", static_cast<long>(ts.size()));
        w.field("max_gap", gap);
        w.field("collapse_gap", collapse_gap);
        w.end_object();
    }
    w.end_array();
    w.field("t", t);
    w.end_object();

    std::cout << csv;
    if (!opt.out.empty()) {
        write_file(opt.out + ".csv", csv);
        write_file(opt.out + ".json", w.str() + "\n");
    }
    return 0;
}

int cmd_weierstrass(const Options& opt) {
    FunctionSpec f = resolve_function(opt.f);
    if (opt.interval.size() != 2) throw ValidationError("weierstrass needs --interval lo hi");
    if (!(opt.eps > 0.0)) throw ValidationError("weierstrass needs --eps > 0");
    Interval k(opt.interval[0], opt.interval[1]);

    WeierstrassOptions wo;
    if (!opt.kernel.empty()) wo.kernel = opt.kernel;
    if (wo.kernel != "poisson" && wo.kernel != "poisson2") {
        throw ValidationError("weierstrass kernel must be poisson or poisson2");
    }

    CertifiedPolynomial cp = weierstrass(f, k, opt.eps, wo);
    std::string json = certified_json(cp);
    std::cout << json;
    if (!opt.out.empty()) {
        write_file(opt.out + ".json", json);
        write_file(opt.out + ".csv", certified_csv(cp));
        std::vector<double> xs, fv, pv;
        for (int i = 0; i <= 500; ++i) {
            double x = k.lo + k.width() * i / 500.0;
            xs.push_back(x);
            fv.push_back(f.eval1(x));
            pv.push_back(cp(x));
        }
        write_file(opt.out + "_target.txt", curve_text(xs, fv));
        write_file(opt.out + "_poly.txt", curve_text(xs, pv));
    }
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Mollifier convolution and constructive polynomial approximation"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* cmd, bool needs_kernel) {
        cmd->add_option("--f", opt.f, "function: catalog name or piecewise .json file");
        auto* ko = cmd->add_option("--kernel", opt.kernel,
                                   "kernel: poisson|poisson2|gauss|bump|tensor(...)|radial(...)");
        if (needs_kernel) ko->required();
        cmd->add_option("--t", opt.ts, "scale parameter list")->delimiter(',');
        cmd->add_option("--eps", opt.eps, "target sup-norm error");
        cmd->add_option("--interval", opt.interval, "interval lo hi")->expected(2);
        cmd->add_option("--box", opt.box, "box bounds, per-axis lo hi")->expected(2, 6);
        cmd->add_option("--out", opt.out, "output path prefix");
        cmd->add_option("--seed", opt.seed, "seed for randomized checks");
        cmd->add_option("--grid", opt.grid, "evaluation grid points");
    };

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "sup-error sweep of f * phi_t over t");
    add_common(sweep_cmd, true);

    CLI::App* jump_cmd = app.add_subcommand("jump", "jump-point convolution values");
    add_common(jump_cmd, true);
    jump_cmd->add_option("--x", opt.x, "breakpoint to probe (default 0)");

    CLI::App* approx_cmd =
        app.add_subcommand("approximate", "Riemann translate sums vs the convolution");
    add_common(approx_cmd, true);
    approx_cmd->add_option("--spacing", opt.hs, "node spacing list")->delimiter(',');

    CLI::App* weier_cmd =
        app.add_subcommand("weierstrass", "certified polynomial approximation of f on [a,b]");
    add_common(weier_cmd, false);

    CLI::App* verify_cmd = app.add_subcommand("verify", "run the library property checks");
    verify_cmd->add_option("--seed", opt.seed, "seed for randomized checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sweep_cmd->parsed()) {
            if (opt.f.empty()) throw ValidationError("sweep needs --f");
            if (opt.box.empty() && opt.interval.empty()) {
                throw ValidationError("sweep needs --box or --interval");
            }
            return cmd_sweep(opt);
        }
        if (jump_cmd->parsed()) {
            if (opt.ts.empty()) throw ValidationError("jump needs --t");
            return cmd_jump(opt);
        }
        if (approx_cmd->parsed()) {
            if (opt.f.empty()) throw ValidationError("approximate needs --f");
            return cmd_approximate(opt);
        }
        if (weier_cmd->parsed()) {
            if (opt.f.empty()) throw ValidationError("weierstrass needs --f");
            return cmd_weierstrass(opt);
        }
        if (verify_cmd->parsed()) {
            int failures = run_verify(opt.seed, std::cout);
            return failures == 0 ? 0 : 1;
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

int run(const std::vector<std::string>& args) {
    std::vector<std::string> full;
    full.push_back("mollify");
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(full.size());
    for (const std::string& s : full) argv.push_back(s.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace mollify::cli
